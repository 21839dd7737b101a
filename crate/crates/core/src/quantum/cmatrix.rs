//! Small dense complex matrices.
//!
//! Hilbert-space dimensions in this crate stay at or below 16, so a plain
//! row-major `Vec` with textbook kernels (Gram–Schmidt orthonormalization,
//! cyclic Jacobi via the real symmetric embedding) is simpler and easier to
//! audit than a general linear-algebra dependency.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T: Real> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    /// Builds from rows of `(re, im)` pairs; rows must be square.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(
                "matrix rows must form a square".into(),
            ));
        }
        Ok(Self::from_fn(dim, |r, c| {
            Complex::new(T::of(rows[r][c].0), T::of(rows[r][c].1))
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: T) -> Self {
        let f = Complex::new(factor, T::zero());
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * f).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self[(r, k)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for c in 0..d {
                    out[(r, c)] = out[(r, c)] + a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    /// `(M + M†) / 2`, used by constructors to suppress Hermitian drift.
    pub fn hermitian_part(&self) -> Self {
        let half = T::of(0.5);
        Self::from_fn(self.dim, |r, c| {
            (self[(r, c)] + self[(c, r)].conj()) * Complex::new(half, T::zero())
        })
    }

    pub fn trace(&self) -> Complex<T> {
        let mut t = Complex::new(T::zero(), T::zero());
        for i in 0..self.dim {
            t = t + self[(i, i)];
        }
        t
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn hermiticity_defect(&self) -> T {
        self.sub(&self.adjoint()).frobenius_norm()
    }

    /// Eigenvalues of a Hermitian matrix, descending.
    ///
    /// Works on the real symmetric embedding `[[A, -B], [B, A]]` of
    /// `H = A + iB`, whose spectrum is that of `H` with every eigenvalue
    /// doubled; a cyclic Jacobi sweep then reads them off the diagonal.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        let d = self.dim;
        let n = 2 * d;
        let mut m = vec![T::zero(); n * n];
        for r in 0..d {
            for c in 0..d {
                let z = self[(r, c)];
                m[r * n + c] = z.re;
                m[(r + d) * n + (c + d)] = z.re;
                m[r * n + (c + d)] = -z.im;
                m[(r + d) * n + c] = z.im;
            }
        }
        let mut eigen = jacobi_symmetric_eigenvalues(&mut m, n);
        eigen.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
        eigen.into_iter().step_by(2).collect()
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[r * self.dim + c]
    }
}

/// Cyclic Jacobi eigenvalue iteration for a dense symmetric matrix stored
/// row-major in `m`. Destroys `m`, returns the unsorted spectrum.
fn jacobi_symmetric_eigenvalues<T: Real>(m: &mut [T], n: usize) -> Vec<T> {
    let frob = m
        .iter()
        .map(|&x| x * x)
        .fold(T::zero(), |a, b| a + b)
        .sqrt();
    let stop = frob * T::epsilon() * T::of(n as f64);

    for _sweep in 0..64 {
        let mut off = T::zero();
        for r in 0..n {
            for c in (r + 1)..n {
                off = off + m[r * n + c] * m[r * n + c];
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() <= stop / T::of((n * n) as f64) {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (T::of(2.0) * apq);
                let t = {
                    let s = if theta >= T::zero() {
                        T::one()
                    } else {
                        -T::one()
                    };
                    s / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
            }
        }
    }
    (0..n).map(|i| m[i * n + i]).collect()
}

/// Haar-distributed random unitary: orthonormalize the columns of a complex
/// Gaussian matrix. Gram–Schmidt leaves each pivot real and positive, which
/// is exactly the phase convention that makes the distribution Haar. A
/// second orthogonalization pass keeps the result unitary to machine
/// precision.
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix<T> {
    let gaussian = CMatrix::from_fn(dim, |_, _| {
        Complex::new(T::standard_normal(rng), T::standard_normal(rng))
    });
    let mut q = CMatrix::zeros(dim);
    for col in 0..dim {
        let mut v: Vec<Complex<T>> = (0..dim).map(|r| gaussian[(r, col)]).collect();
        for _pass in 0..2 {
            for prev in 0..col {
                let mut proj = Complex::new(T::zero(), T::zero());
                for r in 0..dim {
                    proj = proj + q[(r, prev)].conj() * v[r];
                }
                for r in 0..dim {
                    v[r] = v[r] - proj * q[(r, prev)];
                }
            }
        }
        let norm = v
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
            .sqrt();
        let inv = Complex::new(T::one() / norm, T::zero());
        for r in 0..dim {
            q[(r, col)] = v[r] * inv;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn matmul_matches_hand_computation() {
        let a = CMatrix::<f64>::from_rows(&[
            vec![(1.0, 0.0), (0.0, 1.0)],
            vec![(2.0, 0.0), (0.0, 0.0)],
        ])
        .unwrap();
        let b = CMatrix::<f64>::from_rows(&[
            vec![(0.0, 0.0), (1.0, 0.0)],
            vec![(1.0, 0.0), (0.0, -1.0)],
        ])
        .unwrap();
        let ab = a.mul(&b);
        assert_eq!(ab[(0, 0)], c(0.0, 1.0));
        assert_eq!(ab[(0, 1)], c(2.0, 0.0));
        assert_eq!(ab[(1, 0)], c(0.0, 0.0));
        assert_eq!(ab[(1, 1)], c(2.0, 0.0));
    }

    #[test]
    fn hermitian_eigenvalues_of_known_matrices() {
        let diag = CMatrix::<f64>::from_rows(&[
            vec![(3.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (-1.0, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (0.0, 0.0), (0.5, 0.0)],
        ])
        .unwrap();
        let eig = diag.hermitian_eigenvalues();
        assert_abs_diff_eq!(eig[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[1], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[2], -1.0, epsilon = 1e-12);

        // sigma_y has spectrum {1, -1}
        let sy = CMatrix::<f64>::from_rows(&[
            vec![(0.0, 0.0), (0.0, -1.0)],
            vec![(0.0, 1.0), (0.0, 0.0)],
        ])
        .unwrap();
        let eig = sy.hermitian_eigenvalues();
        assert_abs_diff_eq!(eig[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[1], -1.0, epsilon = 1e-12);
    }

    #[test]
    fn eigenvalues_sum_to_trace_for_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for dim in [2usize, 5, 9, 16] {
            let g = CMatrix::<f64>::from_fn(dim, |_, _| {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let h = g.hermitian_part();
            let eig = h.hermitian_eigenvalues();
            let sum: f64 = eig.iter().sum();
            assert_abs_diff_eq!(sum, h.trace().re, epsilon = 1e-10);
            // and the sum of squares matches the Frobenius norm
            let sq: f64 = eig.iter().map(|l| l * l).sum();
            let frob = h.frobenius_norm();
            assert_abs_diff_eq!(sq, frob * frob, epsilon = 1e-10);
        }
    }

    #[test]
    fn haar_unitary_is_unitary_and_reproducible() {
        for dim in [2usize, 3, 8, 16] {
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            let u = haar_unitary::<f64, _>(dim, &mut rng);
            let defect = u.adjoint().mul(&u).sub(&CMatrix::identity(dim));
            assert!(defect.frobenius_norm() < 1e-13, "dim {dim}");

            let mut rng2 = ChaCha8Rng::seed_from_u64(77);
            let v = haar_unitary::<f64, _>(dim, &mut rng2);
            assert_eq!(u, v);
        }
    }
}
