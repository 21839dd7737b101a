//! Finite-dimensional Hilbert-space probability.
//!
//! Events are orthogonal projections, states are density matrices, the
//! probability rule is `tr(ρP)` and conditioning follows the Lüders update
//! `P(F | E) = tr(EρE F) / tr(ρE)`. Second-order interference is generic
//! here while the third-order term cancels — the pair of facts the
//! acceptance suite pins down numerically.

mod cmatrix;

pub use cmatrix::{haar_unitary, CMatrix};

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::theory::TheoryOracle;

/// `‖P − P†‖_F` bound enforced on constructed operators.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;
/// `‖P² − P‖_F` bound for projections.
pub const IDEMPOTENCY_TOLERANCE: f64 = 1e-10;
/// `‖PQ‖_F` bound below which two projections count as orthogonal.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-10;
/// Density matrices may dip this far below positive semidefiniteness.
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;
/// `|tr ρ − 1|` bound for density matrices.
pub const TRACE_TOLERANCE: f64 = 1e-12;
/// Slack granted when clamping raw traces into `[0, 1]`.
const CLAMP_SLACK: f64 = 1e-9;

/// A validated orthogonal projection (Hermitian idempotent).
#[derive(Debug, Clone, PartialEq)]
pub struct Projection<T: Real> {
    matrix: CMatrix<T>,
}

impl<T: Real> Projection<T> {
    /// Validates hermiticity and idempotency. The input is symmetrized
    /// first so accumulated drift in the strictly-Hermitian invariant does
    /// not leak into downstream arithmetic.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let defect = matrix.hermiticity_defect().as_f64();
        if defect > HERMITICITY_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "projection is not Hermitian: defect {defect:e}"
            )));
        }
        let matrix = matrix.hermitian_part();
        let idem = matrix.mul(&matrix).sub(&matrix).frobenius_norm().as_f64();
        if idem > IDEMPOTENCY_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "projection is not idempotent: ‖P² − P‖ = {idem:e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Number of dimensions the projection keeps (its trace, rounded).
    pub fn rank(&self) -> usize {
        self.matrix.trace().re.as_f64().round() as usize
    }

    /// Builds and validates a projection from dense rows of `(re, im)`
    /// pairs.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        Self::new(CMatrix::from_rows(rows)?)
    }

    /// Projector onto a computational-basis subset; exact by construction.
    pub fn onto_basis_states(dim: usize, states: &[usize]) -> Result<Self> {
        let mut m = CMatrix::zeros(dim);
        for &s in states {
            if s >= dim {
                return Err(Error::DimensionMismatch(format!(
                    "basis state {s} outside dimension {dim}"
                )));
            }
            m[(s, s)] = Complex::new(T::one(), T::zero());
        }
        Ok(Self { matrix: m })
    }
}

/// A validated density matrix (Hermitian, unit trace, positive
/// semidefinite within [`POSITIVITY_TOLERANCE`]).
#[derive(Debug, Clone, PartialEq)]
pub struct Density<T: Real> {
    matrix: CMatrix<T>,
}

impl<T: Real> Density<T> {
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let defect = matrix.hermiticity_defect().as_f64();
        if defect > HERMITICITY_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "density is not Hermitian: defect {defect:e}"
            )));
        }
        let matrix = matrix.hermitian_part();
        let trace = matrix.trace().re.as_f64();
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "density trace {trace} differs from 1 beyond {TRACE_TOLERANCE:e}"
            )));
        }
        let min_eig = matrix
            .hermitian_eigenvalues()
            .last()
            .copied()
            .unwrap_or_else(T::zero)
            .as_f64();
        if min_eig < -POSITIVITY_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "density has eigenvalue {min_eig:e} below -{POSITIVITY_TOLERANCE:e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim).scale(T::one() / T::of(dim as f64)),
        }
    }

    /// The uniform state on a projection's range, `P / tr P`.
    pub fn from_projection(projection: &Projection<T>) -> Result<Self> {
        let trace = projection.matrix().trace().re;
        if trace.as_f64() < 0.5 {
            return Err(Error::InvariantViolation(
                "the zero projection carries no state".into(),
            ));
        }
        Self::new(projection.matrix().scale(T::one() / trace))
    }
}

/// Real part of `tr(AB)` without forming the product matrix.
fn trace_product_re<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    let d = a.dim();
    let mut acc = T::zero();
    for r in 0..d {
        for k in 0..d {
            let x = a[(r, k)];
            let y = b[(k, r)];
            acc = acc + x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// Born rule `tr(ρP)`, clamped into `[0, 1]`.
pub fn probability<T: Real>(state: &Density<T>, event: &Projection<T>) -> Result<T> {
    if state.dim() != event.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} vs event dimension {}",
            state.dim(),
            event.dim()
        )));
    }
    let raw = trace_product_re(state.matrix(), event.matrix());
    clamp_unit_interval(raw, "Born probability")
}

/// Lüders conditioning `tr(EρE·F) / tr(ρE)`.
///
/// Refuses (rather than returning NaN) when the conditioning event has
/// probability at or below `cutoff`.
pub fn lueders_conditional<T: Real>(
    state: &Density<T>,
    target: &Projection<T>,
    given: &Projection<T>,
    cutoff: T,
) -> Result<T> {
    let denominator = probability(state, given)?;
    if denominator <= cutoff {
        return Err(Error::ZeroProbabilityConditioning {
            probability: denominator.as_f64(),
            tolerance: cutoff.as_f64(),
        });
    }
    let collapsed = given.matrix().mul(state.matrix()).mul(given.matrix());
    let numerator = trace_product_re(&collapsed, target.matrix());
    // Mathematically 0 ≤ numerator ≤ denominator; allow rounding slack on
    // the numerator scale, then clamp the ratio.
    let slack = T::of(CLAMP_SLACK);
    if numerator < -slack || numerator > denominator + slack {
        return Err(Error::InvariantViolation(format!(
            "Lüders numerator {numerator} outside [0, {denominator}]"
        )));
    }
    Ok((numerator / denominator).max(T::zero()).min(T::one()))
}

fn clamp_unit_interval<T: Real>(raw: T, what: &str) -> Result<T> {
    let slack = T::of(CLAMP_SLACK);
    if raw < -slack || raw > T::one() + slack {
        return Err(Error::InvariantViolation(format!(
            "{what} {raw} lies outside [0, 1] beyond tolerance"
        )));
    }
    Ok(raw.max(T::zero()).min(T::one()))
}

/// Random rank-`rank` density matrix `GG† / tr(GG†)` with `G` a `dim×rank`
/// complex Gaussian block. Positive semidefinite by construction.
pub fn random_density<T: Real, R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<Density<T>> {
    if rank == 0 || rank > dim {
        return Err(Error::DimensionMismatch(format!(
            "density rank {rank} must lie in 1..={dim}"
        )));
    }
    let g: Vec<Vec<Complex<T>>> = (0..dim)
        .map(|_| {
            (0..rank)
                .map(|_| Complex::new(T::standard_normal(rng), T::standard_normal(rng)))
                .collect()
        })
        .collect();
    let mut m = CMatrix::zeros(dim);
    for r in 0..dim {
        for c in 0..dim {
            let acc = g[r]
                .iter()
                .zip(&g[c])
                .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
                    acc + *x * y.conj()
                });
            m[(r, c)] = acc;
        }
    }
    let trace = m.trace().re;
    Density::new(m.scale(T::one() / trace))
}

/// Mutually orthogonal random projections of the requested ranks, built
/// from disjoint column groups of one Haar unitary.
pub fn random_orthogonal_projections<T: Real, R: Rng + ?Sized>(
    dim: usize,
    ranks: &[usize],
    rng: &mut R,
) -> Result<Vec<Projection<T>>> {
    let total: usize = ranks.iter().sum();
    if total > dim {
        return Err(Error::DimensionMismatch(format!(
            "ranks sum to {total}, exceeding dimension {dim}"
        )));
    }
    if ranks.contains(&0) {
        return Err(Error::DimensionMismatch(
            "projection ranks must be positive".into(),
        ));
    }
    let u = haar_unitary::<T, _>(dim, rng);
    let mut projections = Vec::with_capacity(ranks.len());
    let mut next_col = 0;
    for &rank in ranks {
        let cols: Vec<usize> = (next_col..next_col + rank).collect();
        next_col += rank;
        let mut m = CMatrix::zeros(dim);
        for &col in &cols {
            for r in 0..dim {
                for c in 0..dim {
                    m[(r, c)] = m[(r, c)] + u[(r, col)] * u[(c, col)].conj();
                }
            }
        }
        projections.push(Projection::new(m)?);
    }
    Ok(projections)
}

/// The Hilbert-space theory at a fixed dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantumTheory {
    dim: usize,
}

impl QuantumTheory {
    pub const MIN_DIM: usize = 2;
    pub const MAX_DIM: usize = 16;

    pub fn new(dim: usize) -> Result<Self> {
        if !(Self::MIN_DIM..=Self::MAX_DIM).contains(&dim) {
            return Err(Error::DimensionMismatch(format!(
                "dimension {dim} outside supported range {}..={}",
                Self::MIN_DIM,
                Self::MAX_DIM
            )));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl<T: Real> TheoryOracle<T> for QuantumTheory {
    type Event = Projection<T>;
    type State = Density<T>;

    fn name(&self) -> &'static str {
        "quantum"
    }

    fn unit(&self) -> Projection<T> {
        Projection {
            matrix: CMatrix::identity(self.dim),
        }
    }

    fn zero(&self) -> Projection<T> {
        Projection {
            matrix: CMatrix::zeros(self.dim),
        }
    }

    fn is_valid(&self, event: &Projection<T>) -> bool {
        event.dim() == self.dim
    }

    fn are_orthogonal(&self, a: &Projection<T>, b: &Projection<T>) -> Result<bool> {
        self.check_handle(a)?;
        self.check_handle(b)?;
        let cross = a.matrix().mul(b.matrix()).frobenius_norm().as_f64();
        Ok(cross <= ORTHOGONALITY_TOLERANCE)
    }

    fn sum(&self, events: &[Projection<T>]) -> Result<Projection<T>> {
        let mut total = CMatrix::zeros(self.dim);
        for (i, e) in events.iter().enumerate() {
            self.check_handle(e)?;
            for (j, earlier) in events[..i].iter().enumerate() {
                if !self.are_orthogonal(earlier, e)? {
                    return Err(Error::NotOrthogonal(format!(
                        "projections #{j} and #{i} have a nonzero product"
                    )));
                }
            }
            total = total.add(e.matrix());
        }
        Projection::new(total)
    }

    fn probability(&self, state: &Density<T>, event: &Projection<T>) -> Result<T> {
        self.check_handle(event)?;
        probability(state, event)
    }

    fn conditional(
        &self,
        state: &Density<T>,
        target: &Projection<T>,
        given: &Projection<T>,
    ) -> Result<T> {
        self.check_handle(target)?;
        self.check_handle(given)?;
        lueders_conditional(
            state,
            target,
            given,
            TheoryOracle::<T>::conditioning_tolerance(self),
        )
    }
}

impl QuantumTheory {
    fn check_handle<T: Real>(&self, event: &Projection<T>) -> Result<()> {
        if event.dim() != self.dim {
            return Err(Error::InvalidEvent(format!(
                "projection of dimension {} used with a dimension-{} theory",
                event.dim(),
                self.dim
            )));
        }
        Ok(())
    }
}
