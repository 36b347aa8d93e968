//! Dense univariate polynomials over the rationals, lowest degree first.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::ExactRational;
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly(pub Vec<ExactRational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: ExactRational) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `deg 0 = -1`.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn lead(&self) -> ExactRational {
        self.0.last().cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        self.0.iter().rev().fold(ExactRational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let z = ExactRational::zero();
        Poly((0..n)
            .map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z))
            .collect())
        .trimmed()
    }

    pub fn scale(&self, c: &ExactRational) -> Poly {
        Poly(self.0.iter().map(|a| a * c).collect()).trimmed()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-ExactRational::one()))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ExactRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let dd = divisor.degree();
        if rem.degree() < dd {
            return (Poly::zero(), rem);
        }
        let mut quot = vec![ExactRational::zero(); (rem.degree() - dd + 1) as usize];
        let lead = divisor.lead();
        while rem.degree() >= dd {
            let shift = (rem.degree() - dd) as usize;
            let c = rem.lead() / &lead;
            for (i, b) in divisor.0.iter().enumerate() {
                rem.0[i + shift] -= &c * b;
            }
            quot[shift] = c;
            rem = rem.trimmed();
        }
        (Poly(quot).trimmed(), rem)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&(ExactRational::one() / self.lead()))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `∏ (x - r)`.
    pub fn from_roots(roots: &[ExactRational]) -> Poly {
        roots.iter().fold(Poly::constant(ExactRational::one()), |acc, r| {
            acc.mul(&Poly(vec![-r.clone(), ExactRational::one()]))
        })
    }

    /// Newton interpolation through distinct nodes.
    pub fn interpolate(xs: &[ExactRational], ys: &[ExactRational]) -> Poly {
        let n = xs.len();
        let mut coef: Vec<ExactRational> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut out = Poly::zero();
        for i in (0..n).rev() {
            out = out
                .mul(&Poly(vec![-xs[i].clone(), ExactRational::one()]))
                .add(&Poly::constant(coef[i].clone()));
        }
        out
    }
}

/// Clears denominators of `num / den` jointly and removes the common integer
/// content, leaving a positive leading denominator coefficient.
pub(crate) fn primitive_pair(num: &Poly, den: &Poly) -> (Vec<BigInt>, Vec<BigInt>) {
    let lcm = num
        .0
        .iter()
        .chain(&den.0)
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let to_int = |p: &Poly| -> Vec<BigInt> {
        p.0.iter().map(|c| (c * ExactRational::from(lcm.clone())).to_integer()).collect()
    };
    let (mut n, mut d) = (to_int(num), to_int(den));
    let g = n.iter().chain(&d).fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if d.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    let g = g * sign;
    if !g.is_zero() {
        n.iter_mut().for_each(|c| *c /= &g);
        d.iter_mut().for_each(|c| *c /= &g);
    }
    (n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn p(cs: &[i64]) -> Poly {
        Poly(cs.iter().map(|&c| int(c)).collect()).trimmed()
    }

    #[test]
    fn arithmetic() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(a.eval(&int(3)), int(8));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = p(&[3, -2, 0, 5]);
        let xs: Vec<_> = (0..4).map(|i| int(i * 2 + 1)).collect();
        let ys: Vec<_> = xs.iter().map(|x| f.eval(x)).collect();
        assert_eq!(Poly::interpolate(&xs, &ys), f);
    }

    #[test]
    fn primitive_normalization() {
        let num = Poly(vec![ratio(-1, 2)]);
        let den = Poly(vec![int(0), ratio(-1, 2), int(0), ratio(1, 2)]);
        let (n, d) = primitive_pair(&num, &den);
        assert_eq!(n, vec![BigInt::from(-1)]);
        assert_eq!(d, vec![0, -1, 0, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }
}
