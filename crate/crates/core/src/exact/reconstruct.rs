//! Rational functions of `d` recovered from exact evaluations.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{primitive_pair, Poly};
use crate::error::{Result, WgError};
use crate::rational::{int, ExactRational};

/// Points beyond the fitted ones that every accepted candidate must match.
pub const HELD_OUT_POINTS: usize = 3;

/// `numerator(d) / denominator(d)`, coefficients lowest degree first.
///
/// After reconstruction the coefficients are integers without common content
/// and the leading denominator coefficient is positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunctionRep {
    pub variable: String,
    pub numerator: Vec<ExactRational>,
    pub denominator: Vec<ExactRational>,
    /// First sampled dimension.
    pub sample_start: i64,
    /// Evaluations the fit was computed from.
    pub fitted_points: usize,
    /// Further evaluations the fit was checked against.
    pub validation_points: usize,
}

impl RationalFunctionRep {
    pub fn numerator_degree(&self) -> isize {
        self.numerator.len() as isize - 1
    }

    pub fn denominator_degree(&self) -> isize {
        self.denominator.len() as isize - 1
    }

    /// `None` at a pole.
    pub fn eval(&self, d: &ExactRational) -> Option<ExactRational> {
        let den = Poly(self.denominator.clone()).eval(d);
        if den.is_zero() {
            None
        } else {
            Some(Poly(self.numerator.clone()).eval(d) / den)
        }
    }

    /// `c[n]` = coefficient of `d^{-n}` for `n = 0..=n_max` in the expansion
    /// at `d = ∞`.
    pub fn inverse_power_coefficients(&self, n_max: usize) -> Result<Vec<ExactRational>> {
        let mut out = vec![ExactRational::zero(); n_max + 1];
        if self.numerator.is_empty() {
            return Ok(out);
        }
        let (a, b) = (self.numerator_degree(), self.denominator_degree());
        if a > b {
            return Err(WgError::Unsupported(format!("{self} grows at d = ∞")));
        }
        let shift = (b - a) as usize;
        if shift > n_max {
            return Ok(out);
        }
        // With x = 1/d: f = x^shift · Ñ(x) / D̃(x), Ñ and D̃ the reversed coefficient lists.
        let num: Vec<_> = self.numerator.iter().rev().cloned().collect();
        let den: Vec<_> = self.denominator.iter().rev().cloned().collect();
        let terms = n_max - shift + 1;
        let mut s: Vec<ExactRational> = Vec::with_capacity(terms);
        for i in 0..terms {
            let mut acc = num.get(i).cloned().unwrap_or_else(ExactRational::zero);
            for j in 1..=i.min(den.len() - 1) {
                acc -= &den[j] * &s[i - j];
            }
            s.push(acc / &den[0]);
        }
        for (i, c) in s.into_iter().enumerate() {
            out[i + shift] = c;
        }
        Ok(out)
    }
}

fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[ExactRational], var: &str) -> fmt::Result {
    let mut first = true;
    for (e, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        first = false;
        let mag = c.abs();
        let mag_text = if mag.is_integer() { mag.to_integer().to_string() } else { format!("({mag})") };
        match e {
            0 => f.write_str(&mag_text)?,
            _ => {
                if !mag.is_one() {
                    f.write_str(&mag_text)?;
                }
                f.write_str(var)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

fn term_count(coeffs: &[ExactRational]) -> usize {
    coeffs.iter().filter(|c| !c.is_zero()).count()
}

/// `-1/(d^3 - d)`, `(d + 1)/(d^3 + d^2 - 2d)`, `1/d`.
impl fmt::Display for RationalFunctionRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        struct P<'a>(&'a [ExactRational], &'a str);
        impl fmt::Display for P<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_poly(f, self.0, self.1)
            }
        }
        let var = self.variable.as_str();
        let den_is_one = self.denominator.len() == 1 && self.denominator[0].is_one();
        if term_count(&self.numerator) > 1 && !den_is_one {
            write!(f, "({})", P(&self.numerator, var))?;
        } else {
            write!(f, "{}", P(&self.numerator, var))?;
        }
        if den_is_one {
            return Ok(());
        }
        let bare = term_count(&self.denominator) == 1
            && (self.denominator.len() == 1 || self.denominator.last().is_some_and(|c| c.is_one()));
        if bare {
            write!(f, "/{}", P(&self.denominator, var))
        } else {
            write!(f, "/({})", P(&self.denominator, var))
        }
    }
}

/// Fits a rational function to `sample(d)` at `d = d0, d0 + 1, …`.
///
/// Total degree is escalated one step at a time. For `N` points the
/// candidates of total degree `N - 1` come from the extended Euclidean
/// algorithm on the interpolating polynomial and `∏ (d - d_i)`; a candidate
/// is accepted once it reproduces all `N` fitted points and
/// [`HELD_OUT_POINTS`] further ones.
pub fn reconstruct<F>(mut sample: F, d0: i64, degree_cap: usize, variable: &str) -> Result<RationalFunctionRep>
where
    F: FnMut(i64) -> Result<ExactRational>,
{
    let mut xs: Vec<ExactRational> = Vec::new();
    let mut ys: Vec<ExactRational> = Vec::new();
    for n in 1..=degree_cap + 1 {
        while xs.len() < n + HELD_OUT_POINTS {
            let d = d0 + xs.len() as i64;
            ys.push(sample(d)?);
            xs.push(int(d));
        }
        if let Some((num, den)) = fit(&xs[..n], &ys[..n], &xs, &ys) {
            let (num, den) = primitive_pair(&num, &den);
            let lift = |v: Vec<BigInt>| v.into_iter().map(ExactRational::from_integer).collect();
            return Ok(RationalFunctionRep {
                variable: variable.to_string(),
                numerator: lift(num),
                denominator: lift(den),
                sample_start: d0,
                fitted_points: n,
                validation_points: xs.len() - n,
            });
        }
    }
    Err(WgError::DegreeCapExceeded { cap: degree_cap })
}

fn fit(
    fx: &[ExactRational],
    fy: &[ExactRational],
    all_x: &[ExactRational],
    all_y: &[ExactRational],
) -> Option<(Poly, Poly)> {
    let budget = fx.len() as isize - 1;
    let accept = |r: &Poly, t: &Poly| -> Option<(Poly, Poly)> {
        if t.is_zero() || r.degree().max(0) + t.degree() > budget {
            return None;
        }
        let g = r.gcd(t);
        let (r, t) = if g.is_zero() || g.degree() == 0 {
            (r.clone(), t.clone())
        } else {
            (r.div_rem(&g).0, t.div_rem(&g).0)
        };
        let ok = all_x.iter().zip(all_y).all(|(x, y)| {
            let tv = t.eval(x);
            !tv.is_zero() && r.eval(x) == y * &tv
        });
        ok.then_some((r, t))
    };
    let mut r0 = Poly::from_roots(fx);
    let mut r1 = Poly::interpolate(fx, fy);
    let mut t0 = Poly::zero();
    let mut t1 = Poly::constant(ExactRational::one());
    let mut best: Option<(Poly, Poly)> = accept(&r1, &t1);
    while !r1.is_zero() {
        let (q, r2) = r0.div_rem(&r1);
        let t2 = t0.sub(&q.mul(&t1));
        if let Some(c) = accept(&r2, &t2) {
            let size = |p: &(Poly, Poly)| p.0.degree().max(0) + p.1.degree();
            if best.as_ref().is_none_or(|b| size(&c) < size(b)) {
                best = Some(c);
            }
        }
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn recovers_closed_forms() {
        let f = reconstruct(|d| Ok(ratio(-1, d * d * d - d)), 3, 40, "d").unwrap();
        assert_eq!(f.to_string(), "-1/(d^3 - d)");
        let f = reconstruct(|d| Ok(ratio(d + 1, (d + 2) * d * (d - 1))), 5, 40, "d").unwrap();
        assert_eq!(f.to_string(), "(d + 1)/(d^3 + d^2 - 2d)");
        let f = reconstruct(|d| Ok(ratio(1, d)), 3, 40, "d").unwrap();
        assert_eq!(f.to_string(), "1/d");
        let f = reconstruct(|d| Ok(ratio(1, 2 * d)), 3, 40, "d").unwrap();
        assert_eq!(f.to_string(), "1/(2d)");
        let f = reconstruct(|_| Ok(int(0)), 3, 40, "d").unwrap();
        assert_eq!(f.to_string(), "0");
        let f = reconstruct(|_| Ok(int(1)), 3, 40, "d").unwrap();
        assert_eq!(f.to_string(), "1");
    }

    #[test]
    fn degree_cap() {
        let err = reconstruct(|d| Ok(ratio(1, d.pow(6) + 1)), 3, 4, "d").unwrap_err();
        assert_eq!(err, WgError::DegreeCapExceeded { cap: 4 });
    }

    #[test]
    fn inverse_expansion() {
        let f = reconstruct(|d| Ok(ratio(-1, d * d * d - d)), 3, 40, "d").unwrap();
        let c = f.inverse_power_coefficients(9).unwrap();
        let expect: Vec<_> = (0..=9).map(|n| if n >= 3 && n % 2 == 1 { int(-1) } else { int(0) }).collect();
        assert_eq!(c, expect);
    }
}
