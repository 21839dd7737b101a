//! The conditional-probability contract every theory implements.
//!
//! A theory hands out opaque event and state handles and answers exactly
//! five questions about them: validity, orthogonality, sums of orthogonal
//! events, probabilities, and conditional probabilities. The interference
//! machinery in [`crate::interference`] is written purely against this
//! trait, which is what makes the classical / quantum / Jordan / synthetic
//! comparison meaningful: all four run through the same code path.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default numeric tolerance for identities that are expected to hold
/// exactly up to rounding. Also the default cut-off below which an event's
/// probability is treated as zero for conditioning purposes.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

pub trait TheoryOracle<T: Real> {
    /// Opaque event handle. Only meaningful inside the issuing theory.
    type Event: Clone + Debug + Send + Sync;
    /// Opaque state handle (a probability weighting of events).
    type State: Clone + Send + Sync;

    /// Short stable identifier, used in reports.
    fn name(&self) -> &'static str;

    /// The certain event.
    fn unit(&self) -> Self::Event;

    /// The impossible event.
    fn zero(&self) -> Self::Event;

    /// Whether the handle was issued by (or is structurally compatible
    /// with) this theory instance.
    fn is_valid(&self, event: &Self::Event) -> bool;

    fn are_orthogonal(&self, a: &Self::Event, b: &Self::Event) -> Result<bool>;

    /// Sum of pairwise-orthogonal events. The empty sum is the zero event.
    fn sum(&self, events: &[Self::Event]) -> Result<Self::Event>;

    /// `P(event)` in `state`; always within `[0, 1]`.
    fn probability(&self, state: &Self::State, event: &Self::Event) -> Result<T>;

    /// `P(target | given)` in `state`. Fails with
    /// [`Error::ZeroProbabilityConditioning`] instead of returning NaN when
    /// `P(given)` is at or below the conditioning cut-off.
    fn conditional(
        &self,
        state: &Self::State,
        target: &Self::Event,
        given: &Self::Event,
    ) -> Result<T>;

    /// Probability below which conditioning is refused.
    fn conditioning_tolerance(&self) -> T {
        T::of(DEFAULT_TOLERANCE)
    }
}

/// The axioms checked by [`validate_oracle`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    /// `P(unit) = 1` and `P(zero) = 0`.
    Normalization,
    /// `P(a + b) = P(a) + P(b)` for orthogonal `a`, `b`.
    Additivity,
    /// `P(e | e) = 1` whenever `P(e)` is large enough to condition on.
    SelfCertainty,
    /// Probabilities and conditionals stay inside `[0, 1]`.
    RangeBounds,
}

impl Axiom {
    pub fn label(self) -> &'static str {
        match self {
            Axiom::Normalization => "normalization",
            Axiom::Additivity => "additivity",
            Axiom::SelfCertainty => "self-certainty",
            Axiom::RangeBounds => "range-bounds",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub passed: bool,
    /// Worst residual observed while checking this axiom (0 when the axiom
    /// could not be exercised by the supplied events).
    pub worst_residual: f64,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub theory: &'static str,
    pub tolerance: f64,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst_residual(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.worst_residual)
            .fold(0.0, f64::max)
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is always checked")
    }
}

/// Exercises the core axioms of `oracle` on `state` over the supplied
/// events and reports the worst residual seen per axiom.
///
/// Every event must be a valid handle for the oracle; an invalid one is a
/// contract violation and aborts the validation rather than producing a
/// report.
pub fn validate_oracle<T, O>(
    oracle: &O,
    state: &O::State,
    events: &[O::Event],
    tolerance: f64,
) -> Result<ValidationReport>
where
    T: Real,
    O: TheoryOracle<T>,
{
    for event in events {
        if !oracle.is_valid(event) {
            return Err(Error::InvalidEvent(format!(
                "validate_oracle received a foreign handle: {event:?}"
            )));
        }
    }

    let mut normalization = 0.0f64;
    let mut additivity = 0.0f64;
    let mut self_certainty = 0.0f64;
    let mut range = 0.0f64;

    let unit_p = oracle.probability(state, &oracle.unit())?.as_f64();
    let zero_p = oracle.probability(state, &oracle.zero())?.as_f64();
    normalization = normalization.max((unit_p - 1.0).abs()).max(zero_p.abs());

    let cutoff = oracle.conditioning_tolerance();
    let mut probabilities = Vec::with_capacity(events.len());
    for event in events {
        let p = oracle.probability(state, event)?;
        range = range.max((-p.as_f64()).max(p.as_f64() - 1.0).max(0.0));
        probabilities.push(p);
    }

    for (i, a) in events.iter().enumerate() {
        for (j, b) in events.iter().enumerate().skip(i + 1) {
            if !oracle.are_orthogonal(a, b)? {
                continue;
            }
            let joint = oracle.probability(state, &oracle.sum(&[a.clone(), b.clone()])?)?;
            let split = probabilities[i] + probabilities[j];
            additivity = additivity.max((joint - split).abs().as_f64());
        }
    }

    for (event, &p) in events.iter().zip(&probabilities) {
        if p <= cutoff {
            continue;
        }
        let certain = oracle.conditional(state, event, event)?;
        self_certainty = self_certainty.max((certain - T::one()).abs().as_f64());
        range = range.max((-certain.as_f64()).max(certain.as_f64() - 1.0).max(0.0));
    }

    let checks = vec![
        AxiomCheck {
            axiom: Axiom::Normalization,
            passed: normalization <= tolerance,
            worst_residual: normalization,
        },
        AxiomCheck {
            axiom: Axiom::Additivity,
            passed: additivity <= tolerance,
            worst_residual: additivity,
        },
        AxiomCheck {
            axiom: Axiom::SelfCertainty,
            passed: self_certainty <= tolerance,
            worst_residual: self_certainty,
        },
        AxiomCheck {
            axiom: Axiom::RangeBounds,
            passed: range <= tolerance,
            worst_residual: range,
        },
    ];

    Ok(ValidationReport {
        theory: oracle.name(),
        tolerance,
        checks,
    })
}
