//! Small dense complex matrices and a Householder QR.

use num_complex::Complex64;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * other[(k, j)]).sum())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `Q` of a QR factorization whose `R` has a positive real diagonal.
    ///
    /// Householder reflections give `A = Q R`; rescaling column `j` of `Q`
    /// by the phase of `R_jj` makes the factorization unique, which is what
    /// turns a Gaussian matrix into a Haar-distributed one.
    pub fn q_factor(&self) -> CMatrix {
        let n = self.n;
        let mut r = self.clone();
        let mut reflectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut diag = Vec::with_capacity(n);
        for j in 0..n {
            let norm = (j..n).map(|i| r[(i, j)].norm_sqr()).sum::<f64>().sqrt();
            let x0 = r[(j, j)];
            let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
            let alpha = -phase * norm;
            let mut v: Vec<Complex64> = (j..n).map(|i| r[(i, j)]).collect();
            v[0] -= alpha;
            let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if vnorm > 0.0 {
                v.iter_mut().for_each(|z| *z /= vnorm);
                // R ← (I - 2 v v*) R on rows j..n
                for c in j..n {
                    let dot: Complex64 = (j..n).map(|i| v[i - j].conj() * r[(i, c)]).sum();
                    for i in j..n {
                        let vi = v[i - j];
                        r[(i, c)] -= vi * dot * 2.0;
                    }
                }
            }
            diag.push(r[(j, j)]);
            reflectors.push(v);
        }
        // Q = H_0 H_1 ⋯ H_{n-1}, applied to the identity from the right end
        let mut q = CMatrix::identity(n);
        for (j, v) in reflectors.iter().enumerate().rev() {
            for c in 0..n {
                let dot: Complex64 = (j..n).map(|i| v[i - j].conj() * q[(i, c)]).sum();
                for i in j..n {
                    let vi = v[i - j];
                    q[(i, c)] -= vi * dot * 2.0;
                }
            }
        }
        for (j, rjj) in diag.iter().enumerate() {
            let ph = if rjj.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { rjj / rjj.norm() };
            for i in 0..n {
                q[(i, j)] *= ph;
            }
        }
        q
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qr_reproduces_input() {
        let a = CMatrix::from_fn(4, |i, j| Complex64::new((i * 3 + j) as f64 % 5.0 - 2.0, (i as f64 - j as f64) * 0.5));
        let q = a.q_factor();
        assert!(q.mul(&q.adjoint()).max_diff(&CMatrix::identity(4)) < 1e-12);
        // R = Q* A is upper triangular with a positive diagonal
        let r = q.adjoint().mul(&a);
        for i in 0..4 {
            assert!(r[(i, i)].re > 0.0 && r[(i, i)].im.abs() < 1e-12);
            for j in 0..i {
                assert!(r[(i, j)].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn real_input_stays_real() {
        let a = CMatrix::from_fn(3, |i, j| Complex64::new(((i + 2 * j) as f64).sin(), 0.0));
        let q = a.q_factor();
        assert!(q.data.iter().all(|z| z.im == 0.0));
    }
}
