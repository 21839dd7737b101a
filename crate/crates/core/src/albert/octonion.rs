//! Octonion arithmetic by Cayley–Dickson doubling.
//!
//! An octonion is a pair of quaternions, a quaternion a pair of complex
//! numbers. With the doubling rule `(a, b)(c, d) = (ac − d̄b, da + bc̄)`
//! the basis units `e0..e7` satisfy `e1·e2 = e3` (the quaternionic `i·j=k`)
//! and `e_i·e4` lands in the upper half, e.g. `e1·e4 = e5`. Multiplication
//! is non-associative but alternative, and the Euclidean norm is
//! multiplicative — the two properties the verification suite sweeps.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Octonion<T: Real> {
    coeffs: [T; 8],
}

type Quat<T> = [T; 4];

fn quat_mul<T: Real>(a: &Quat<T>, b: &Quat<T>) -> Quat<T> {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn quat_conj<T: Real>(a: &Quat<T>) -> Quat<T> {
    [a[0], -a[1], -a[2], -a[3]]
}

fn quat_add<T: Real>(a: &Quat<T>, b: &Quat<T>) -> Quat<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn quat_sub<T: Real>(a: &Quat<T>, b: &Quat<T>) -> Quat<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

impl<T: Real> Octonion<T> {
    pub const fn new(coeffs: [T; 8]) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::new([T::zero(); 8])
    }

    pub fn one() -> Self {
        Self::real(T::one())
    }

    pub fn real(value: T) -> Self {
        let mut coeffs = [T::zero(); 8];
        coeffs[0] = value;
        Self::new(coeffs)
    }

    /// The basis unit `e_index`.
    pub fn unit(index: usize) -> Self {
        assert!(index < 8, "octonion basis index out of range");
        let mut coeffs = [T::zero(); 8];
        coeffs[index] = T::one();
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T; 8] {
        &self.coeffs
    }

    pub fn coeff(&self, index: usize) -> T {
        self.coeffs[index]
    }

    pub fn conj(&self) -> Self {
        let mut coeffs = self.coeffs;
        for c in coeffs.iter_mut().skip(1) {
            *c = -*c;
        }
        Self::new(coeffs)
    }

    pub fn scale(&self, factor: T) -> Self {
        let mut coeffs = self.coeffs;
        for c in &mut coeffs {
            *c = *c * factor;
        }
        Self::new(coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs;
        for (c, o) in coeffs.iter_mut().zip(&other.coeffs) {
            *c = *c + *o;
        }
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut coeffs = self.coeffs;
        for (c, o) in coeffs.iter_mut().zip(&other.coeffs) {
            *c = *c - *o;
        }
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        self.scale(-T::one())
    }

    pub fn norm_sqr(&self) -> T {
        self.coeffs
            .iter()
            .map(|&c| c * c)
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Real (Euclidean) inner product of coefficient vectors; equals
    /// `Re(x·ȳ)`.
    pub fn dot(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| a * b)
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .fold(T::zero(), T::max)
    }
}

/// Cayley–Dickson product of two octonions.
pub fn oct_mul<T: Real>(x: &Octonion<T>, y: &Octonion<T>) -> Octonion<T> {
    let a: Quat<T> = [x.coeffs[0], x.coeffs[1], x.coeffs[2], x.coeffs[3]];
    let b: Quat<T> = [x.coeffs[4], x.coeffs[5], x.coeffs[6], x.coeffs[7]];
    let c: Quat<T> = [y.coeffs[0], y.coeffs[1], y.coeffs[2], y.coeffs[3]];
    let d: Quat<T> = [y.coeffs[4], y.coeffs[5], y.coeffs[6], y.coeffs[7]];

    let lower = quat_sub(&quat_mul(&a, &c), &quat_mul(&quat_conj(&d), &b));
    let upper = quat_add(&quat_mul(&d, &a), &quat_mul(&b, &quat_conj(&c)));

    Octonion::new([
        lower[0], lower[1], lower[2], lower[3], upper[0], upper[1], upper[2], upper[3],
    ])
}

/// The associator `(xy)z − x(yz)`; identically zero only on associative
/// subalgebras.
pub fn associator<T: Real>(x: &Octonion<T>, y: &Octonion<T>, z: &Octonion<T>) -> Octonion<T> {
    oct_mul(&oct_mul(x, y), z).sub(&oct_mul(x, &oct_mul(y, z)))
}

/// Signed basis multiplication table: `table[i][j] = (k, s)` means
/// `e_i · e_j = s · e_k`. Derived directly from [`oct_mul`] so the exported
/// table can never drift from the arithmetic.
pub fn multiplication_table() -> [[(usize, i8); 8]; 8] {
    let mut table = [[(0usize, 0i8); 8]; 8];
    for (i, row) in table.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let product = oct_mul(&Octonion::<f64>::unit(i), &Octonion::<f64>::unit(j));
            let mut entry = None;
            for (k, &c) in product.coeffs().iter().enumerate() {
                if c != 0.0 {
                    assert!(
                        entry.is_none() && (c == 1.0 || c == -1.0),
                        "basis products must be signed basis units"
                    );
                    entry = Some((k, if c > 0.0 { 1i8 } else { -1i8 }));
                }
            }
            *cell = entry.expect("basis products are never zero");
        }
    }
    table
}

/// The multiplication table as CSV (`i,j,k,sign` per row, meaning
/// `e_i · e_j = sign · e_k`), suitable for golden-file comparison.
pub fn multiplication_table_csv() -> String {
    let table = multiplication_table();
    let mut out = String::from("i,j,k,sign\n");
    for (i, row) in table.iter().enumerate() {
        for (j, &(k, sign)) in row.iter().enumerate() {
            out.push_str(&format!("{i},{j},{k},{sign}\n"));
        }
    }
    out
}
