//! `1/d` expansions read off path counts.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::Family;
use crate::error::{Result, WgError};
use crate::graph::{GraphNode, PathCountTable};
use crate::rational::{int, pow, ExactRational};

/// A III paths with the given edge counts contribute
/// `count · (-1)^solid · (d⁻)^dashed · d^{-(solid + dashed + squiggled)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BivariateTerm {
    pub solid: u32,
    pub dashed: u32,
    pub squiggled: u32,
    pub count: BigInt,
}

impl BivariateTerm {
    pub fn d_exponent(&self) -> u32 {
        self.solid + self.dashed + self.squiggled
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeriesCoefficients {
    /// `c_g` for `g = 0..=G`.
    Counts(Vec<BigInt>),
    /// Nonzero A III terms, by increasing power of `1/d`.
    Bivariate(Vec<BivariateTerm>),
}

/// A truncated expansion of a Weingarten function at `d = ∞`.
///
/// - unitary: `Wg = (-1)^{|σ|} Σ_g c_g d^{-(|σ|+k+2g)}`, `c_g = #P(σ, |σ|+2g)`
/// - orthogonal: `Wg = Σ_g (-1)^{|m|+g} c_g d^{-(|m|+k+g)}`, `c_g = #P(m, |m|+g)`
/// - symplectic: `|Wg| = Σ_g c_g (2d)^{-(|m|+k+g)}`, same counts
/// - A III: a sum of [`BivariateTerm`]s up to `d^{-(n₀+2G)}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTruncation {
    pub family: Family,
    pub element: GraphNode,
    /// Exponent of the leading power of `1/d` (negative).
    pub leading_exponent: i64,
    pub order: usize,
    pub coefficients: SeriesCoefficients,
}

impl SeriesTruncation {
    /// Largest `n` for which the coefficient of `d^{-n}` is fully known.
    pub fn max_inverse_power(&self) -> usize {
        let n0 = (-self.leading_exponent) as usize;
        match self.family {
            Family::Unitary | Family::AIII => n0 + 2 * self.order,
            _ => n0 + self.order,
        }
    }

    /// Coefficient of `d^{-n}` for `n = 0..=max_inverse_power()`; A III
    /// needs a value of `d⁻`.
    pub fn inverse_power_coefficients(&self, dminus: Option<i64>) -> Result<Vec<ExactRational>> {
        let n_max = self.max_inverse_power();
        let n0 = (-self.leading_exponent) as usize;
        let mut out = vec![ExactRational::zero(); n_max + 1];
        let k = self.element.level();
        let t = self.element.transposition_length();
        match &self.coefficients {
            SeriesCoefficients::Counts(cs) => {
                for (g, c) in cs.iter().enumerate() {
                    let c = ExactRational::from_integer(c.clone());
                    match self.family {
                        Family::Unitary => {
                            out[n0 + 2 * g] = if t.is_multiple_of(2) { c } else { -c };
                        }
                        Family::Orthogonal => {
                            out[n0 + g] = if (t + g).is_multiple_of(2) { c } else { -c };
                        }
                        Family::Symplectic => {
                            out[n0 + g] = c / pow(&int(2), (n0 + g) as u32);
                        }
                        _ => unreachable!(),
                    }
                }
                debug_assert_eq!(n0, t + k);
            }
            SeriesCoefficients::Bivariate(terms) => {
                let dm = dminus.ok_or(WgError::InvalidArgument {
                    arg: "dminus",
                    reason: "the aiii series needs d⁻ to be evaluated".into(),
                })?;
                for term in terms {
                    let mut c = ExactRational::from_integer(term.count.clone()) * pow(&int(dm), term.dashed);
                    if term.solid % 2 == 1 {
                        c = -c;
                    }
                    out[term.d_exponent() as usize] += c;
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SeriesTruncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.coefficients {
            SeriesCoefficients::Counts(cs) => {
                let list: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "leading exponent {}; coefficients {}", self.leading_exponent, list.join(","))
            }
            SeriesCoefficients::Bivariate(terms) => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|t| {
                        let sign = if t.solid % 2 == 1 { "-" } else { "+" };
                        format!("{sign}{}·(d⁻)^{}·d^-{}", t.count, t.dashed, t.d_exponent())
                    })
                    .collect();
                f.write_str(&parts.join(" "))
            }
        }
    }
}

pub(super) fn series(table: &PathCountTable, family: Family, node: &GraphNode, order: usize) -> Result<SeriesTruncation> {
    let kind = family.graph_kind();
    kind.check(node)?;
    let k = node.level() as u32;
    let t = node.transposition_length() as u32;
    let (leading, coefficients) = match family {
        Family::Unitary => {
            let cs = (0..=order as u32).map(|g| table.count(kind, node, t + 2 * g)).collect();
            (t + k, SeriesCoefficients::Counts(cs))
        }
        Family::Orthogonal | Family::Symplectic => {
            let cs = (0..=order as u32).map(|g| table.count(kind, node, t + g)).collect();
            (t + k, SeriesCoefficients::Counts(cs))
        }
        Family::AIII => {
            let terms_at = |n: u32| -> Vec<BivariateTerm> {
                (0..=k / 2)
                    .filter_map(|squiggled| {
                        let dashed = k - 2 * squiggled;
                        let solid = n.checked_sub(dashed + squiggled)?;
                        let count = table.count_aiii_refined(node, solid, dashed);
                        (!count.is_zero()).then_some(BivariateTerm { solid, dashed, squiggled, count })
                    })
                    .collect()
            };
            // the path through the identity has exponent |σ| + k
            let n0 = (0..=t + k).find(|&n| !terms_at(n).is_empty()).unwrap_or(t + k);
            let terms = (n0..=n0 + 2 * order as u32).flat_map(terms_at).collect();
            (n0, SeriesCoefficients::Bivariate(terms))
        }
        Family::Coe => {
            return Err(WgError::Unsupported(
                "the coe expansion is the orthogonal one in d + 1; use --family o".into(),
            ))
        }
    };
    Ok(SeriesTruncation {
        family,
        element: node.clone(),
        leading_exponent: -(leading as i64),
        order,
        coefficients,
    })
}

