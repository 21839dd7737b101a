//! The exceptional Jordan algebra H₃(O) as a probability theory.
//!
//! Elements are octonion-Hermitian 3×3 matrices: three real diagonal
//! entries plus three octonions above the diagonal (27 real coordinates).
//! The commutative Jordan product `A∘B = (AB + BA)/2` is computed through
//! a plain (non-Hermitian) octonionic matrix product and symmetrized back.
//! Events are idempotents, states are unit-trace positive elements, and
//! conditioning uses the quadratic representation
//! `P(F | E) = tr(ρ ∘ U_E(F)) / tr(ρ ∘ E)` with
//! `U_E(F) = 2E∘(E∘F) − (E∘E)∘F`.
//!
//! Spectral theory is cubic: eigenvalues come from the characteristic
//! polynomial via Newton's identities and a trigonometric root extraction,
//! and eigen-idempotents from Lagrange interpolation in the (associative)
//! subalgebra generated by the element.

mod octonion;

pub use octonion::{
    associator, multiplication_table, multiplication_table_csv, oct_mul, Octonion,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::theory::TheoryOracle;

/// `‖E∘E − E‖` (component-wise sup norm) bound for idempotent handles.
pub const IDEMPOTENCY_TOLERANCE: f64 = 1e-9;
/// `‖E∘F‖` (sup norm) bound below which idempotents count as orthogonal.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-9;
/// States may dip this far below positive semidefiniteness.
pub const STATE_POSITIVITY_TOLERANCE: f64 = 1e-10;
/// `|tr ρ − 1|` bound for states.
pub const STATE_TRACE_TOLERANCE: f64 = 1e-12;
/// Eigenvalues closer than this fraction of the spectral width are merged
/// into one cluster during spectral decomposition.
pub const CLUSTER_TOLERANCE: f64 = 1e-6;
/// Random idempotent triples are resampled until all eigenvalue gaps
/// exceed this bound.
pub const MIN_EIGENVALUE_GAP: f64 = 1e-3;
/// Slack granted when clamping probabilities into `[0, 1]`.
const CLAMP_SLACK: f64 = 1e-9;
/// Rejection-sampling budget for the random generators.
const MAX_SAMPLE_ATTEMPTS: u32 = 100;

/// An element of H₃(O): diagonal `(d0, d1, d2)` and upper off-diagonal
/// octonions `x` at (0,1), `y` at (0,2), `z` at (1,2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlbertElement<T: Real> {
    diag: [T; 3],
    off: [Octonion<T>; 3],
}

const OFF_POSITIONS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

impl<T: Real> AlbertElement<T> {
    pub fn new(diag: [T; 3], off: [Octonion<T>; 3]) -> Self {
        Self { diag, off }
    }

    pub fn zero() -> Self {
        Self::diagonal([T::zero(); 3])
    }

    pub fn identity() -> Self {
        Self::diagonal([T::one(); 3])
    }

    pub fn diagonal(diag: [T; 3]) -> Self {
        Self {
            diag,
            off: [Octonion::zero(); 3],
        }
    }

    /// The diagonal matrix unit `E_ii`.
    pub fn basis_idempotent(i: usize) -> Self {
        let mut diag = [T::zero(); 3];
        diag[i] = T::one();
        Self::diagonal(diag)
    }

    /// Symmetric off-diagonal unit: `value` at `OFF_POSITIONS[slot]` and
    /// its conjugate mirrored below.
    pub fn symmetric_unit(slot: usize, value: Octonion<T>) -> Self {
        let mut off = [Octonion::zero(); 3];
        off[slot] = value;
        Self {
            diag: [T::zero(); 3],
            off,
        }
    }

    pub fn diag(&self) -> &[T; 3] {
        &self.diag
    }

    pub fn off(&self) -> &[Octonion<T>; 3] {
        &self.off
    }

    pub fn trace(&self) -> T {
        self.diag[0] + self.diag[1] + self.diag[2]
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            diag: [
                self.diag[0] + other.diag[0],
                self.diag[1] + other.diag[1],
                self.diag[2] + other.diag[2],
            ],
            off: [
                self.off[0].add(&other.off[0]),
                self.off[1].add(&other.off[1]),
                self.off[2].add(&other.off[2]),
            ],
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            diag: [
                self.diag[0] * factor,
                self.diag[1] * factor,
                self.diag[2] * factor,
            ],
            off: [
                self.off[0].scale(factor),
                self.off[1].scale(factor),
                self.off[2].scale(factor),
            ],
        }
    }

    /// Component-wise sup norm over the 27 real coordinates.
    pub fn max_abs_coeff(&self) -> T {
        let diag_max = self
            .diag
            .iter()
            .map(|d| d.abs())
            .fold(T::zero(), T::max);
        self.off
            .iter()
            .map(Octonion::max_abs_coeff)
            .fold(diag_max, T::max)
    }

    /// Standard-normal coefficients on all 27 coordinates.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut diag = [T::zero(); 3];
        for d in &mut diag {
            *d = T::standard_normal(rng);
        }
        let mut off = [Octonion::zero(); 3];
        for o in &mut off {
            let mut coeffs = [T::zero(); 8];
            for c in &mut coeffs {
                *c = T::standard_normal(rng);
            }
            *o = Octonion::new(coeffs);
        }
        Self { diag, off }
    }

    fn to_matrix(self) -> [[Octonion<T>; 3]; 3] {
        let mut m = [[Octonion::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Octonion::real(self.diag[i]);
        }
        for (slot, &(r, c)) in OFF_POSITIONS.iter().enumerate() {
            m[r][c] = self.off[slot];
            m[c][r] = self.off[slot].conj();
        }
        m
    }
}

fn matrix_mul<T: Real>(
    a: &[[Octonion<T>; 3]; 3],
    b: &[[Octonion<T>; 3]; 3],
) -> [[Octonion<T>; 3]; 3] {
    let mut out = [[Octonion::zero(); 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            let mut acc = Octonion::zero();
            for k in 0..3 {
                acc = acc.add(&oct_mul(&a[r][k], &b[k][c]));
            }
            out[r][c] = acc;
        }
    }
    out
}

/// Jordan product `(AB + BA) / 2`.
///
/// The intermediate products live in the full (non-Hermitian) octonionic
/// matrix space; only the symmetrized result is projected back onto H₃(O),
/// discarding the ~1-ulp Hermitian defect the two float paths can leave.
pub fn jordan_mul<T: Real>(a: &AlbertElement<T>, b: &AlbertElement<T>) -> AlbertElement<T> {
    let ma = a.to_matrix();
    let mb = b.to_matrix();
    let ab = matrix_mul(&ma, &mb);
    let ba = matrix_mul(&mb, &ma);

    let half = T::of(0.5);
    let quarter = T::of(0.25);
    let diag = [
        (ab[0][0].coeff(0) + ba[0][0].coeff(0)) * half,
        (ab[1][1].coeff(0) + ba[1][1].coeff(0)) * half,
        (ab[2][2].coeff(0) + ba[2][2].coeff(0)) * half,
    ];
    let mut off = [Octonion::zero(); 3];
    for (slot, &(r, c)) in OFF_POSITIONS.iter().enumerate() {
        let upper = ab[r][c].add(&ba[r][c]);
        let lower = ab[c][r].add(&ba[c][r]);
        off[slot] = upper.add(&lower.conj()).scale(quarter);
    }
    AlbertElement::new(diag, off)
}

/// The trace form `tr(A∘B)` evaluated bilinearly:
/// `Σ d_i(A) d_i(B) + 2 Σ ⟨off(A), off(B)⟩`. Exactly symmetric in its
/// arguments and cheaper than materializing the product.
pub fn trace_inner<T: Real>(a: &AlbertElement<T>, b: &AlbertElement<T>) -> T {
    let mut acc = T::zero();
    for i in 0..3 {
        acc = acc + a.diag[i] * b.diag[i];
    }
    let mut off = T::zero();
    for slot in 0..3 {
        off = off + a.off[slot].dot(&b.off[slot]);
    }
    acc + (off + off)
}

/// Coefficients `(t1, t2, t3)` of the characteristic polynomial
/// `λ³ − t1·λ² + t2·λ − t3`, via Newton's identities on the power traces
/// `p1 = tr A`, `p2 = tr(A∘A)`, `p3 = tr(A²∘A)`.
pub fn char_poly<T: Real>(a: &AlbertElement<T>) -> [T; 3] {
    let p1 = a.trace();
    let p2 = trace_inner(a, a);
    let a2 = jordan_mul(a, a);
    let p3 = trace_inner(&a2, a);

    let t1 = p1;
    let t2 = (p1 * p1 - p2) * T::of(0.5);
    let t3 = (p3 - p1 * p2 + t2 * p1) / T::of(3.0);
    [t1, t2, t3]
}

/// Roots of `λ³ − t1·λ² + t2·λ − t3`, descending. Fails when the
/// discriminant is significantly negative, which for inputs produced by
/// [`char_poly`] signals a broken Hermitian invariant upstream.
pub fn solve_characteristic_cubic<T: Real>(coeffs: [T; 3]) -> Result<[T; 3]> {
    let [t1, t2, t3] = coeffs;
    let third = T::one() / T::of(3.0);
    let shift = t1 * third;
    let p = t2 - t1 * t1 * third;
    let q = t1 * t2 * third - t1 * t1 * t1 * T::of(2.0 / 27.0) - t3;

    let scale = (t1 * t1).max(t2.abs()).max(T::one());
    let p_floor = scale * T::of(1e-14);

    let mut roots = if p > -p_floor {
        if q.abs() > scale * p_floor.sqrt() {
            return Err(Error::SpectralFailure(format!(
                "cubic with vanishing quadratic term but constant {q}: complex roots"
            )));
        }
        [shift; 3]
    } else {
        if p > T::zero() {
            return Err(Error::SpectralFailure(format!(
                "depressed cubic coefficient {p} is positive: complex eigenvalue pair"
            )));
        }
        let m = T::of(2.0) * (-p * third).sqrt();
        let arg = (T::of(3.0) * q / (p * m)).max(-T::one()).min(T::one());
        let theta = arg.acos() * third;
        let two_pi_third = T::of(2.0) * T::PI() * third;
        [
            m * theta.cos() + shift,
            m * (theta - two_pi_third).cos() + shift,
            m * (theta - T::of(2.0) * two_pi_third).cos() + shift,
        ]
    };
    roots.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    Ok(roots)
}

/// Eigenvalues of an element, descending.
pub fn eigenvalues<T: Real>(a: &AlbertElement<T>) -> Result<[T; 3]> {
    solve_characteristic_cubic(char_poly(a))
}

/// Spectral decomposition `A = Σ λ_i E_i` with orthogonal idempotents.
///
/// Eigenvalues closer than [`CLUSTER_TOLERANCE`] × (spectral width) are
/// merged and receive a joint (non-primitive) idempotent; the idempotents
/// come from Lagrange interpolation, which only needs `A²`, `A` and the
/// identity.
pub fn spectral_decompose<T: Real>(
    a: &AlbertElement<T>,
) -> Result<Vec<(T, AlbertElement<T>)>> {
    let [l1, l2, l3] = eigenvalues(a)?;
    let width = l1 - l3;
    let cluster = width * T::of(CLUSTER_TOLERANCE);
    let merge_high = l1 - l2 <= cluster;
    let merge_low = l2 - l3 <= cluster;

    let identity = AlbertElement::identity();
    let decomposition = match (merge_high, merge_low) {
        (true, true) => vec![(a.trace() / T::of(3.0), identity)],
        (false, false) => {
            let a2 = jordan_mul(a, a);
            let lagrange = |li: T, lj: T, lk: T| {
                let numerator = a2
                    .sub(&a.scale(lj + lk))
                    .add(&identity.scale(lj * lk));
                numerator.scale(T::one() / ((li - lj) * (li - lk)))
            };
            vec![
                (l1, lagrange(l1, l2, l3)),
                (l2, lagrange(l2, l1, l3)),
                (l3, lagrange(l3, l1, l2)),
            ]
        }
        (true, false) => {
            let merged = (l1 + l2) * T::of(0.5);
            split_pair(a, merged, l3)
        }
        (false, true) => {
            let merged = (l2 + l3) * T::of(0.5);
            split_pair(a, l1, merged)
        }
    };
    Ok(decomposition)
}

/// Two-cluster split: idempotents from the linear minimal polynomial
/// factors, returned as [(high, E_high), (low, E_low)].
fn split_pair<T: Real>(a: &AlbertElement<T>, high: T, low: T) -> Vec<(T, AlbertElement<T>)> {
    let identity = AlbertElement::identity();
    let inv = T::one() / (high - low);
    let e_high = a.sub(&identity.scale(low)).scale(inv);
    let e_low = identity.scale(high).sub(a).scale(inv);
    vec![(high, e_high), (low, e_low)]
}

/// The quadratic representation `U_E(F) = 2E∘(E∘F) − (E∘E)∘F`.
pub fn quadratic_map<T: Real>(e: &AlbertElement<T>, f: &AlbertElement<T>) -> AlbertElement<T> {
    let ef = jordan_mul(e, f);
    let e_ef = jordan_mul(e, &ef);
    let ee = jordan_mul(e, e);
    let ee_f = jordan_mul(&ee, f);
    e_ef.scale(T::of(2.0)).sub(&ee_f)
}

/// A validated idempotent event handle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanIdempotent<T: Real> {
    element: AlbertElement<T>,
}

impl<T: Real> JordanIdempotent<T> {
    pub fn new(element: AlbertElement<T>) -> Result<Self> {
        let defect = idempotency_defect(&element).as_f64();
        if defect > IDEMPOTENCY_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "element is not idempotent: ‖E∘E − E‖ = {defect:e}"
            )));
        }
        Ok(Self { element })
    }

    pub fn element(&self) -> &AlbertElement<T> {
        &self.element
    }

    /// Idempotent rank (0..=3): the trace, rounded.
    pub fn rank(&self) -> usize {
        self.element.trace().as_f64().round() as usize
    }
}

pub fn idempotency_defect<T: Real>(element: &AlbertElement<T>) -> T {
    jordan_mul(element, element)
        .sub(element)
        .max_abs_coeff()
}

/// A validated state: unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JordanState<T: Real> {
    element: AlbertElement<T>,
}

impl<T: Real> JordanState<T> {
    pub fn new(element: AlbertElement<T>) -> Result<Self> {
        let trace = element.trace().as_f64();
        if (trace - 1.0).abs() > STATE_TRACE_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "state trace {trace} differs from 1 beyond {STATE_TRACE_TOLERANCE:e}"
            )));
        }
        let spectrum = eigenvalues(&element)?;
        let min = spectrum[2].as_f64();
        if min < -STATE_POSITIVITY_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "state eigenvalue {min:e} below -{STATE_POSITIVITY_TOLERANCE:e}"
            )));
        }
        Ok(Self { element })
    }

    pub fn element(&self) -> &AlbertElement<T> {
        &self.element
    }

    /// Expectation `tr(ρ ∘ X)`.
    pub fn expectation(&self, x: &AlbertElement<T>) -> T {
        trace_inner(&self.element, x)
    }
}

/// Quadratic-representation conditioning
/// `tr(ρ ∘ U_E(F)) / tr(ρ ∘ E)`, clamped into `[0, 1]`.
pub fn jordan_conditional<T: Real>(
    state: &JordanState<T>,
    target: &JordanIdempotent<T>,
    given: &JordanIdempotent<T>,
    cutoff: T,
) -> Result<T> {
    let denominator = state.expectation(given.element());
    if denominator <= cutoff {
        return Err(Error::ZeroProbabilityConditioning {
            probability: denominator.as_f64(),
            tolerance: cutoff.as_f64(),
        });
    }
    let updated = quadratic_map(given.element(), target.element());
    let numerator = state.expectation(&updated);
    let slack = T::of(CLAMP_SLACK);
    if numerator < -slack || numerator > denominator + slack {
        return Err(Error::InvariantViolation(format!(
            "conditional numerator {numerator} outside [0, {denominator}]"
        )));
    }
    Ok((numerator / denominator).max(T::zero()).min(T::one()))
}

/// Random state `B∘B / tr(B∘B)` from a Gaussian element `B`; positive by
/// the square-positivity of the algebra.
pub fn random_state<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Result<JordanState<T>> {
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let b: AlbertElement<T> = AlbertElement::random(rng);
        let square = jordan_mul(&b, &b);
        let norm = square.trace();
        if norm.as_f64() < 1e-6 {
            continue;
        }
        return JordanState::new(square.scale(T::one() / norm));
    }
    Err(Error::SamplerExhausted {
        attempts: MAX_SAMPLE_ATTEMPTS,
    })
}

/// Three orthogonal primitive idempotents summing to the identity, from
/// the spectral decomposition of a random element. Draws are rejected
/// until every eigenvalue gap clears [`MIN_EIGENVALUE_GAP`], which keeps
/// the Lagrange interpolation well conditioned.
pub fn random_idempotent_triple<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
) -> Result<[JordanIdempotent<T>; 3]> {
    let gap = T::of(MIN_EIGENVALUE_GAP);
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        let a = AlbertElement::random(rng);
        let [l1, l2, l3] = eigenvalues(&a)?;
        if l1 - l2 < gap || l2 - l3 < gap {
            continue;
        }
        let parts = spectral_decompose(&a)?;
        debug_assert_eq!(parts.len(), 3);
        let mut idempotents = parts
            .into_iter()
            .map(|(_, e)| JordanIdempotent::new(e));
        return Ok([
            idempotents.next().unwrap()?,
            idempotents.next().unwrap()?,
            idempotents.next().unwrap()?,
        ]);
    }
    Err(Error::SamplerExhausted {
        attempts: MAX_SAMPLE_ATTEMPTS,
    })
}

/// One random primitive idempotent.
pub fn random_idempotent<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Result<JordanIdempotent<T>> {
    let triple = random_idempotent_triple(rng)?;
    let pick = rng.gen_range(0..3);
    Ok(triple[pick])
}

/// Minimum eigenvalue of `A∘A`; the formal-reality assumption says this
/// never drops below `-1e-9` no matter how indefinite `A` itself is.
pub fn check_square_positive<T: Real>(a: &AlbertElement<T>) -> Result<T> {
    let square = jordan_mul(a, a);
    Ok(eigenvalues(&square)?[2])
}

/// Compares every bracketing `A^i ∘ A^j` (i + j = k, both ≥ 2) against the
/// left-associated power chain up to `max_power` and returns the worst
/// component-wise discrepancy. Power associativity says this is rounding
/// noise only.
pub fn check_power_associativity<T: Real>(
    a: &AlbertElement<T>,
    max_power: usize,
) -> Result<T> {
    if max_power < 4 {
        return Err(Error::Config(format!(
            "power associativity needs max_power ≥ 4, got {max_power}"
        )));
    }
    let mut powers: Vec<AlbertElement<T>> = vec![*a];
    for _ in 2..=max_power {
        let next = jordan_mul(powers.last().unwrap(), a);
        powers.push(next);
    }
    let power = |k: usize| &powers[k - 1];

    let mut worst = T::zero();
    for k in 4..=max_power {
        for i in 2..=k - 2 {
            let alt = jordan_mul(power(i), power(k - i));
            worst = worst.max(alt.sub(power(k)).max_abs_coeff());
        }
    }
    Ok(worst)
}

/// The Jordan-algebraic probability theory over H₃(O).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AlbertTheory;

impl AlbertTheory {
    pub fn new() -> Self {
        Self
    }
}

impl<T: Real> TheoryOracle<T> for AlbertTheory {
    type Event = JordanIdempotent<T>;
    type State = JordanState<T>;

    fn name(&self) -> &'static str {
        "albert"
    }

    fn unit(&self) -> JordanIdempotent<T> {
        JordanIdempotent {
            element: AlbertElement::identity(),
        }
    }

    fn zero(&self) -> JordanIdempotent<T> {
        JordanIdempotent {
            element: AlbertElement::zero(),
        }
    }

    fn is_valid(&self, event: &JordanIdempotent<T>) -> bool {
        idempotency_defect(event.element()).as_f64() <= IDEMPOTENCY_TOLERANCE
    }

    fn are_orthogonal(
        &self,
        a: &JordanIdempotent<T>,
        b: &JordanIdempotent<T>,
    ) -> Result<bool> {
        let cross = jordan_mul(a.element(), b.element())
            .max_abs_coeff()
            .as_f64();
        Ok(cross <= ORTHOGONALITY_TOLERANCE)
    }

    fn sum(&self, events: &[JordanIdempotent<T>]) -> Result<JordanIdempotent<T>> {
        let mut total = AlbertElement::zero();
        for (i, e) in events.iter().enumerate() {
            for earlier in &events[..i] {
                if !self.are_orthogonal(earlier, e)? {
                    return Err(Error::NotOrthogonal(format!(
                        "idempotent #{i} is not orthogonal to an earlier summand"
                    )));
                }
            }
            total = total.add(e.element());
        }
        JordanIdempotent::new(total)
    }

    fn probability(&self, state: &JordanState<T>, event: &JordanIdempotent<T>) -> Result<T> {
        let raw = state.expectation(event.element());
        let slack = T::of(CLAMP_SLACK);
        if raw < -slack || raw > T::one() + slack {
            return Err(Error::InvariantViolation(format!(
                "state weight {raw} of an idempotent lies outside [0, 1]"
            )));
        }
        Ok(raw.max(T::zero()).min(T::one()))
    }

    fn conditional(
        &self,
        state: &JordanState<T>,
        target: &JordanIdempotent<T>,
        given: &JordanIdempotent<T>,
    ) -> Result<T> {
        jordan_conditional(
            state,
            target,
            given,
            TheoryOracle::<T>::conditioning_tolerance(self),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type E64 = AlbertElement<f64>;

    fn x12() -> E64 {
        E64::symmetric_unit(0, Octonion::one())
    }

    #[test]
    fn jordan_product_is_exactly_commutative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let a = E64::random(&mut rng);
            let b = E64::random(&mut rng);
            assert_eq!(jordan_mul(&a, &b), jordan_mul(&b, &a));
        }
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = E64::random(&mut rng);
        let prod = jordan_mul(&a, &E64::identity());
        assert!(prod.sub(&a).max_abs_coeff() <= 1e-15);
    }

    #[test]
    fn diagonal_unit_halves_the_attached_off_diagonal() {
        let prod = jordan_mul(&E64::basis_idempotent(0), &x12());
        let expected = x12().scale(0.5);
        assert!(prod.sub(&expected).max_abs_coeff() <= 1e-15);
    }

    #[test]
    fn trace_form_is_exactly_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let a = E64::random(&mut rng);
            let b = E64::random(&mut rng);
            assert_eq!(trace_inner(&a, &b), trace_inner(&b, &a));
            // and it matches the trace of the materialized product
            assert_abs_diff_eq!(
                trace_inner(&a, &b),
                jordan_mul(&a, &b).trace(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn jordan_identity_holds() {
        // (A∘B)∘A² = A∘(B∘A²)
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let a = E64::random(&mut rng);
            let b = E64::random(&mut rng);
            let a2 = jordan_mul(&a, &a);
            let lhs = jordan_mul(&jordan_mul(&a, &b), &a2);
            let rhs = jordan_mul(&a, &jordan_mul(&b, &a2));
            assert!(lhs.sub(&rhs).max_abs_coeff() <= 1e-10);
        }
    }

    #[test]
    fn characteristic_polynomial_of_known_elements() {
        assert_eq!(char_poly(&E64::diagonal([1.0, 2.0, 3.0])), [6.0, 11.0, 6.0]);
        assert_eq!(char_poly(&E64::identity()), [3.0, 3.0, 1.0]);
        assert_eq!(char_poly(&E64::zero()), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn eigenvalues_of_diagonal_elements() {
        let eig = eigenvalues(&E64::diagonal([1.0, 2.0, 3.0])).unwrap();
        assert_abs_diff_eq!(eig[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn spectral_decomposition_of_the_symmetric_unit() {
        let parts = spectral_decompose(&x12()).unwrap();
        assert_eq!(parts.len(), 3);
        let (l, e) = &parts[0];
        assert_abs_diff_eq!(*l, 1.0, epsilon = 1e-12);
        let expected = E64::basis_idempotent(0)
            .add(&E64::basis_idempotent(1))
            .add(&x12())
            .scale(0.5);
        assert!(e.sub(&expected).max_abs_coeff() <= 1e-12);

        let (l, e) = &parts[1];
        assert_abs_diff_eq!(*l, 0.0, epsilon = 1e-12);
        assert!(e.sub(&E64::basis_idempotent(2)).max_abs_coeff() <= 1e-12);

        let (l, e) = &parts[2];
        assert_abs_diff_eq!(*l, -1.0, epsilon = 1e-12);
        let expected = E64::basis_idempotent(0)
            .add(&E64::basis_idempotent(1))
            .sub(&x12())
            .scale(0.5);
        assert!(e.sub(&expected).max_abs_coeff() <= 1e-12);
    }

    #[test]
    fn identity_collapses_to_one_cluster() {
        let parts = spectral_decompose(&E64::identity()).unwrap();
        assert_eq!(parts.len(), 1);
        assert_abs_diff_eq!(parts[0].0, 1.0, epsilon = 1e-14);
        assert!(parts[0].1.sub(&E64::identity()).max_abs_coeff() <= 1e-14);
    }

    #[test]
    fn near_degenerate_eigenvalues_merge() {
        let parts = spectral_decompose(&E64::diagonal([1.0, 1.0 + 1e-9, 5.0])).unwrap();
        assert_eq!(parts.len(), 2);
        assert_abs_diff_eq!(parts[0].0, 5.0, epsilon = 1e-6);
        assert_abs_diff_eq!(parts[1].0, 1.0, epsilon = 1e-6);
        // the merged idempotent has rank 2
        assert_abs_diff_eq!(parts[1].1.trace(), 2.0, epsilon = 1e-6);
    }

    #[test]
    fn random_spectral_decompositions_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let a = E64::random(&mut rng);
            let parts = spectral_decompose(&a).unwrap();
            let mut rebuilt = E64::zero();
            let mut completeness = E64::zero();
            for (l, e) in &parts {
                rebuilt = rebuilt.add(&e.scale(*l));
                completeness = completeness.add(e);
            }
            assert!(
                rebuilt.sub(&a).max_abs_coeff() <= 1e-9,
                "reconstruction defect {}",
                rebuilt.sub(&a).max_abs_coeff()
            );
            assert!(completeness.sub(&E64::identity()).max_abs_coeff() <= 1e-9);
        }
    }

    #[test]
    fn quadratic_map_special_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = E64::random(&mut rng);
        // U_identity fixes everything
        let fixed = quadratic_map(&E64::identity(), &f);
        assert!(fixed.sub(&f).max_abs_coeff() <= 1e-13);
        // U_E(E) = E for idempotent E
        let e = E64::basis_idempotent(1);
        assert!(quadratic_map(&e, &e).sub(&e).max_abs_coeff() <= 1e-15);
        // orthogonal idempotents annihilate
        let u = quadratic_map(&E64::basis_idempotent(0), &E64::basis_idempotent(1));
        assert!(u.max_abs_coeff() <= 1e-15);
    }

    #[test]
    fn conditional_matches_hand_computation() {
        let state = JordanState::new(E64::identity().scale(1.0 / 3.0)).unwrap();
        let given = JordanIdempotent::new(E64::diagonal([1.0, 1.0, 0.0])).unwrap();
        let target = JordanIdempotent::new(E64::basis_idempotent(0)).unwrap();
        let c = jordan_conditional(&state, &target, &given, 1e-10).unwrap();
        assert_abs_diff_eq!(c, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn conditional_self_certainty_and_orthogonal_nullity() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let state = random_state::<f64, _>(&mut rng).unwrap();
        let [e1, e2, _] = random_idempotent_triple::<f64, _>(&mut rng).unwrap();
        let certain = jordan_conditional(&state, &e1, &e1, 1e-10).unwrap();
        assert_abs_diff_eq!(certain, 1.0, epsilon = 1e-9);
        let null = jordan_conditional(&state, &e2, &e1, 1e-10).unwrap();
        assert_abs_diff_eq!(null, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn conditioning_on_null_support_errors() {
        let state = JordanState::new(E64::basis_idempotent(2)).unwrap();
        let given = JordanIdempotent::new(E64::basis_idempotent(0)).unwrap();
        let target = JordanIdempotent::new(E64::basis_idempotent(1)).unwrap();
        let err = jordan_conditional(&state, &target, &given, 1e-10).unwrap_err();
        assert!(matches!(err, Error::ZeroProbabilityConditioning { .. }));
    }

    #[test]
    fn random_states_are_normalized_and_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let state = random_state::<f64, _>(&mut rng).unwrap();
            assert_abs_diff_eq!(state.element().trace(), 1.0, epsilon = 1e-12);
            let spectrum = eigenvalues(state.element()).unwrap();
            assert!(spectrum[2] >= -1e-10);
        }
    }

    #[test]
    fn state_from_identity_seed_is_maximally_mixed() {
        // B = I gives B∘B / tr = I/3
        let square = jordan_mul(&E64::identity(), &E64::identity());
        let state = JordanState::new(square.scale(1.0 / square.trace())).unwrap();
        assert!(state
            .element()
            .sub(&E64::identity().scale(1.0 / 3.0))
            .max_abs_coeff()
            <= 1e-15);
    }

    #[test]
    fn sampler_replay_is_deterministic() {
        let a = random_state::<f64, _>(&mut ChaCha8Rng::seed_from_u64(55)).unwrap();
        let b = random_state::<f64, _>(&mut ChaCha8Rng::seed_from_u64(55)).unwrap();
        assert_eq!(a.element(), b.element());
        let ta = random_idempotent_triple::<f64, _>(&mut ChaCha8Rng::seed_from_u64(56)).unwrap();
        let tb = random_idempotent_triple::<f64, _>(&mut ChaCha8Rng::seed_from_u64(56)).unwrap();
        for (x, y) in ta.iter().zip(&tb) {
            assert_eq!(x.element(), y.element());
        }
    }

    #[test]
    fn idempotent_triples_are_orthonormal_and_complete() {
        let theory = AlbertTheory::new();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut off_diagonal_draws = 0;
        for _ in 0..100 {
            let triple = random_idempotent_triple::<f64, _>(&mut rng).unwrap();
            let mut total = E64::zero();
            for e in &triple {
                assert!(idempotency_defect(e.element()) <= 1e-10);
                assert_eq!(e.rank(), 1);
                total = total.add(e.element());
            }
            assert!(total.sub(&E64::identity()).max_abs_coeff() <= 1e-9);
            for i in 0..3 {
                for j in i + 1..3 {
                    assert!(TheoryOracle::<f64>::are_orthogonal(
                        &theory,
                        &triple[i],
                        &triple[j]
                    )
                    .unwrap());
                }
            }
            if triple
                .iter()
                .all(|e| e.element().off().iter().any(|o| o.norm() > 1e-2))
            {
                off_diagonal_draws += 1;
            }
        }
        // generic draws land outside every quaternionic (let alone real)
        // subalgebra, so the octonionic off-diagonals are almost never small
        assert!(off_diagonal_draws >= 95, "only {off_diagonal_draws}/100");
    }

    #[test]
    fn squares_are_positive_even_when_the_element_is_not() {
        let indefinite = E64::diagonal([1.0, -1.0, 0.0]);
        assert!(eigenvalues(&indefinite).unwrap()[2] < -0.5);
        assert!(check_square_positive(&indefinite).unwrap() >= -1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let a = E64::random(&mut rng);
            assert!(check_square_positive(&a).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn power_associativity_up_to_the_sixth_power() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..50 {
            let a = E64::random(&mut rng);
            let unit = a.scale(1.0 / trace_inner(&a, &a).sqrt());
            assert!(check_power_associativity(&unit, 6).unwrap() <= 1e-9);
        }
        // a clean idempotent reproduces itself exactly
        let e = E64::diagonal([1.0, 1.0, 0.0]);
        assert_eq!(check_power_associativity(&e, 6).unwrap(), 0.0);
        // degenerate request
        assert!(check_power_associativity(&e, 3).is_err());
    }

    #[test]
    fn oracle_sum_rejects_non_orthogonal_idempotents() {
        let theory = AlbertTheory::new();
        let e = JordanIdempotent::new(E64::basis_idempotent(0)).unwrap();
        let err = TheoryOracle::<f64>::sum(&theory, &[e, e]).unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal(_)));
    }

    #[test]
    fn non_idempotent_handles_are_rejected() {
        assert!(JordanIdempotent::new(E64::identity().scale(0.5)).is_err());
        let theory = AlbertTheory::new();
        let mut forged = JordanIdempotent::new(E64::basis_idempotent(0)).unwrap();
        forged.element = E64::identity().scale(0.5);
        assert!(!TheoryOracle::<f64>::is_valid(&theory, &forged));
    }
}
