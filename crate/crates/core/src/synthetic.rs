//! A synthetic oracle exhibiting genuine third-order interference.
//!
//! Classical measures and quantum/Jordan states never get past second
//! order, so a strictly-beyond-quantum theory has to be built by hand.
//! This one lives on six atoms with events as outcome sets, but its
//! conditioning rule is *not* the classical ratio rule: for four
//! distinguished conditioning events (the three pairwise unions of a
//! fixed orthogonal triple, and the unit) it substitutes bespoke
//! conditional measures. Each substitute is an honest probability measure
//! supported inside its conditioning event, so every finite-additivity
//! and normalization axiom still holds — only the *compatibility between
//! levels* that Jordan algebras enforce is broken, which is exactly where
//! third-order interference lives.

use crate::classical::EventSet;
use crate::error::{Error, Result};
use crate::scalar::{kahan_sum, Real};
use crate::theory::TheoryOracle;

/// Number of atomic outcomes.
pub const ATOMS: usize = 6;

/// The base measure μ.
const BASE: [f64; ATOMS] = [0.1, 0.2, 0.1, 0.2, 0.1, 0.3];

/// Conditional measures overriding the ratio rule, keyed by the bitmask
/// of the conditioning event. Each row is supported inside its event and
/// sums to one.
const OVERRIDES: [(u64, [f64; ATOMS]); 4] = [
    // e1 ∪ e2 = {0,1,2,3}
    (
        0b00_1111,
        [1.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0, 5.0 / 12.0, 0.0, 0.0],
    ),
    // e1 ∪ e3 = {0,1,4,5}
    (
        0b11_0011,
        [1.0 / 14.0, 3.0 / 7.0, 0.0, 0.0, 1.0 / 14.0, 3.0 / 7.0],
    ),
    // e2 ∪ e3 = {2,3,4,5}
    (
        0b11_1100,
        [0.0, 0.0, 1.0 / 14.0, 3.0 / 7.0, 1.0 / 14.0, 3.0 / 7.0],
    ),
    // the unit {0,...,5}
    (
        0b11_1111,
        [0.3, 0.1 / 3.0, 0.3, 0.1 / 3.0, 0.3, 0.1 / 3.0],
    ),
];

/// The fixed orthogonal triple `(e1, e2, e3)` whose unions carry the
/// overridden conditionals.
pub fn interference_triple() -> [EventSet; 3] {
    [
        EventSet::from_outcomes(&[0, 1], ATOMS).expect("static event"),
        EventSet::from_outcomes(&[2, 3], ATOMS).expect("static event"),
        EventSet::from_outcomes(&[4, 5], ATOMS).expect("static event"),
    ]
}

/// The probe event `f` whose interference terms are evaluated.
pub fn probe_event() -> EventSet {
    EventSet::from_outcomes(&[0, 2, 4], ATOMS).expect("static event")
}

/// There is a single state; the handle carries no data.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SyntheticState;

/// The six-atom beyond-quantum theory.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SyntheticTheory;

impl SyntheticTheory {
    pub fn new() -> Self {
        Self
    }

    fn weight_of<T: Real>(weights: &[f64; ATOMS], event: &EventSet) -> T {
        kahan_sum(event.outcomes().map(|o| T::of(weights[o])))
    }

    fn in_sample_space(event: &EventSet) -> bool {
        event.size() == ATOMS
    }
}

impl<T: Real> TheoryOracle<T> for SyntheticTheory {
    type Event = EventSet;
    type State = SyntheticState;

    fn name(&self) -> &'static str {
        "synthetic"
    }

    fn unit(&self) -> EventSet {
        EventSet::from_outcomes(&[0, 1, 2, 3, 4, 5], ATOMS).expect("static event")
    }

    fn zero(&self) -> EventSet {
        EventSet::new(0, ATOMS).expect("static event")
    }

    fn is_valid(&self, event: &EventSet) -> bool {
        Self::in_sample_space(event)
    }

    fn are_orthogonal(&self, a: &EventSet, b: &EventSet) -> Result<bool> {
        Ok(a.intersection(b).is_empty())
    }

    fn sum(&self, events: &[EventSet]) -> Result<EventSet> {
        let mut mask = 0u64;
        for (i, e) in events.iter().enumerate() {
            if !Self::in_sample_space(e) {
                return Err(Error::InvalidEvent(format!(
                    "event #{i} belongs to a different sample space"
                )));
            }
            if mask & e.mask() != 0 {
                return Err(Error::NotOrthogonal(format!(
                    "event #{i} overlaps an earlier summand"
                )));
            }
            mask |= e.mask();
        }
        EventSet::new(mask, ATOMS)
    }

    fn probability(&self, _state: &SyntheticState, event: &EventSet) -> Result<T> {
        if !Self::in_sample_space(event) {
            return Err(Error::InvalidEvent(
                "event belongs to a different sample space".into(),
            ));
        }
        Ok(Self::weight_of(&BASE, event))
    }

    fn conditional(
        &self,
        state: &SyntheticState,
        target: &EventSet,
        given: &EventSet,
    ) -> Result<T> {
        if !Self::in_sample_space(target) || !Self::in_sample_space(given) {
            return Err(Error::InvalidEvent(
                "event belongs to a different sample space".into(),
            ));
        }
        let given_probability: T = self.probability(state, given)?;
        let cutoff = TheoryOracle::<T>::conditioning_tolerance(self);
        if given_probability <= cutoff {
            return Err(Error::ZeroProbabilityConditioning {
                probability: given_probability.as_f64(),
                tolerance: cutoff.as_f64(),
            });
        }
        for (mask, weights) in &OVERRIDES {
            if given.mask() == *mask {
                // the override is supported inside `given`, so summing over
                // the whole target already restricts correctly
                return Ok(Self::weight_of(weights, target));
            }
        }
        let joint: T = self.probability(state, &target.intersection(given))?;
        Ok(joint / given_probability)
    }
}
