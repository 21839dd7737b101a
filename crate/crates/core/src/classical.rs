//! Classical (Kolmogorov) probability on a finite sample space.
//!
//! Events are subsets of `{0, .., n-1}` stored as bit masks, states are
//! probability vectors, and conditioning is the ratio rule
//! `P(f | e) = P(f ∧ e) / P(e)`. Everything here is additive by
//! construction, so both interference orders vanish identically; this
//! module is the baseline the other theories are measured against.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{kahan_sum, Real};
use crate::theory::TheoryOracle;

/// States must sum to one within this bound.
pub const MEASURE_SUM_TOLERANCE: f64 = 1e-12;

/// Sample spaces a campaign instance may draw (`n ∈ [MIN_SPACE, MAX_SPACE]`).
pub const MIN_SPACE: usize = 3;
pub const MAX_SPACE: usize = 12;

/// A subset of a finite sample space of `size` outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EventSet {
    mask: u64,
    size: usize,
}

impl EventSet {
    pub fn new(mask: u64, size: usize) -> Result<Self> {
        if size > 64 {
            return Err(Error::DimensionMismatch(format!(
                "sample space of {size} outcomes exceeds the 64-outcome mask representation"
            )));
        }
        if mask >> size != 0 && size < 64 {
            return Err(Error::InvalidEvent(format!(
                "mask {mask:#b} references outcomes beyond the {size}-outcome space"
            )));
        }
        Ok(Self { mask, size })
    }

    /// Event containing exactly the listed outcomes.
    pub fn from_outcomes(outcomes: &[usize], size: usize) -> Result<Self> {
        let mut mask = 0u64;
        for &o in outcomes {
            if o >= size {
                return Err(Error::InvalidEvent(format!(
                    "outcome {o} is outside the {size}-outcome space"
                )));
            }
            mask |= 1 << o;
        }
        Self::new(mask, size)
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, outcome: usize) -> bool {
        outcome < self.size && self.mask & (1 << outcome) != 0
    }

    pub fn intersection(&self, other: &EventSet) -> EventSet {
        EventSet {
            mask: self.mask & other.mask,
            size: self.size,
        }
    }

    pub fn outcomes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(|&o| self.mask & (1 << o) != 0)
    }
}

/// A probability vector over a finite sample space.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure<T: Real> {
    weights: Vec<T>,
}

impl<T: Real> Measure<T> {
    /// Validates non-negativity and unit total (within
    /// [`MEASURE_SUM_TOLERANCE`]).
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvariantViolation(
                "a measure needs at least one outcome".into(),
            ));
        }
        if let Some(w) = weights.iter().find(|w| **w < T::zero() || !w.is_finite()) {
            return Err(Error::InvariantViolation(format!(
                "measure weight {w} is negative or non-finite"
            )));
        }
        let total = kahan_sum(weights.iter().copied());
        if (total - T::one()).abs().as_f64() > MEASURE_SUM_TOLERANCE {
            return Err(Error::InvariantViolation(format!(
                "measure total {total} is not 1 within {MEASURE_SUM_TOLERANCE:e}"
            )));
        }
        Ok(Self { weights })
    }

    pub fn uniform(size: usize) -> Result<Self> {
        let w = T::one() / T::of(size as f64);
        Self::new(vec![w; size])
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Total weight of an event, by compensated summation in outcome order.
    pub fn of(&self, event: &EventSet) -> T {
        kahan_sum(event.outcomes().map(|o| self.weights[o]))
    }
}

/// The classical theory over a fixed `n`-outcome sample space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalTheory {
    size: usize,
}

impl ClassicalTheory {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > 64 {
            return Err(Error::DimensionMismatch(format!(
                "sample space size {size} is outside the supported range 1..=64"
            )));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn event(&self, outcomes: &[usize]) -> Result<EventSet> {
        EventSet::from_outcomes(outcomes, self.size)
    }
}

impl<T: Real> TheoryOracle<T> for ClassicalTheory {
    type Event = EventSet;
    type State = Measure<T>;

    fn name(&self) -> &'static str {
        "classical"
    }

    fn unit(&self) -> EventSet {
        let mask = if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        };
        EventSet {
            mask,
            size: self.size,
        }
    }

    fn zero(&self) -> EventSet {
        EventSet {
            mask: 0,
            size: self.size,
        }
    }

    fn is_valid(&self, event: &EventSet) -> bool {
        event.size == self.size
    }

    fn are_orthogonal(&self, a: &EventSet, b: &EventSet) -> Result<bool> {
        self.check_handle(a)?;
        self.check_handle(b)?;
        Ok(a.mask & b.mask == 0)
    }

    fn sum(&self, events: &[EventSet]) -> Result<EventSet> {
        let mut mask = 0u64;
        for (i, e) in events.iter().enumerate() {
            self.check_handle(e)?;
            if mask & e.mask != 0 {
                return Err(Error::NotOrthogonal(format!(
                    "event #{i} overlaps the partial union in a classical sum"
                )));
            }
            mask |= e.mask;
        }
        Ok(EventSet {
            mask,
            size: self.size,
        })
    }

    fn probability(&self, state: &Measure<T>, event: &EventSet) -> Result<T> {
        self.check_handle(event)?;
        if state.len() != self.size {
            return Err(Error::DimensionMismatch(format!(
                "measure over {} outcomes used with a {}-outcome space",
                state.len(),
                self.size
            )));
        }
        Ok(state.of(event))
    }

    fn conditional(&self, state: &Measure<T>, target: &EventSet, given: &EventSet) -> Result<T> {
        let p_given = self.probability(state, given)?;
        let cutoff: T = TheoryOracle::<T>::conditioning_tolerance(self);
        if p_given <= cutoff {
            return Err(Error::ZeroProbabilityConditioning {
                probability: p_given.as_f64(),
                tolerance: cutoff.as_f64(),
            });
        }
        let joint = self.probability(state, &target.intersection(given))?;
        Ok(joint / p_given)
    }
}

impl ClassicalTheory {
    fn check_handle(&self, event: &EventSet) -> Result<()> {
        if event.size != self.size {
            return Err(Error::InvalidEvent(format!(
                "event over {} outcomes used with a {}-outcome space",
                event.size, self.size
            )));
        }
        Ok(())
    }
}

/// One random classical test instance: a state drawn uniformly from the
/// probability simplex (normalized unit exponentials), a uniform random
/// target event, and three disjoint non-empty events partitioning a random
/// subset of the space.
pub fn random_instance<T: Real, R: Rng + ?Sized>(
    size: usize,
    rng: &mut R,
) -> Result<(Measure<T>, EventSet, [EventSet; 3])> {
    if size < MIN_SPACE {
        return Err(Error::DimensionMismatch(format!(
            "need at least {MIN_SPACE} outcomes to form three disjoint events, got {size}"
        )));
    }
    let theory = ClassicalTheory::new(size)?;

    let mut weights: Vec<T> = (0..size).map(|_| T::unit_exponential(rng)).collect();
    let total = kahan_sum(weights.iter().copied());
    for w in &mut weights {
        *w = *w / total;
    }
    let measure = Measure::new(weights)?;

    let target = EventSet::new(rng.gen::<u64>() & theory.unit_mask(), size)?;

    // Random subset of at least three outcomes, split into three pieces.
    // The first three picks seed one piece each so none is empty.
    let subset_len = rng.gen_range(3..=size);
    let mut order: Vec<usize> = (0..size).collect();
    for i in 0..subset_len {
        let j = rng.gen_range(i..size);
        order.swap(i, j);
    }
    let mut masks = [0u64; 3];
    for (i, &outcome) in order[..subset_len].iter().enumerate() {
        let piece = if i < 3 { i } else { rng.gen_range(0..3) };
        masks[piece] |= 1 << outcome;
    }
    let triple = [
        EventSet::new(masks[0], size)?,
        EventSet::new(masks[1], size)?,
        EventSet::new(masks[2], size)?,
    ];

    Ok((measure, target, triple))
}

impl ClassicalTheory {
    fn unit_mask(&self) -> u64 {
        if self.size == 64 {
            u64::MAX
        } else {
            (1u64 << self.size) - 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{validate_oracle, Axiom};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fair_die() -> (ClassicalTheory, Measure<f64>) {
        (
            ClassicalTheory::new(6).unwrap(),
            Measure::uniform(6).unwrap(),
        )
    }

    #[test]
    fn probability_sums_selected_outcomes() {
        let theory = ClassicalTheory::new(3).unwrap();
        let state = Measure::new(vec![0.1, 0.2, 0.7]).unwrap();
        let event = theory.event(&[0, 2]).unwrap();
        let p: f64 = theory.probability(&state, &event).unwrap();
        assert_abs_diff_eq!(p, 0.8, epsilon = 1e-15);
    }

    #[test]
    fn conditional_follows_the_ratio_rule() {
        let (theory, die) = fair_die();
        // target {1,2}, given the even faces {2,4,6} (zero-indexed below)
        let target = theory.event(&[0, 1]).unwrap();
        let given = theory.event(&[1, 3, 5]).unwrap();
        let c = theory.conditional(&die, &target, &given).unwrap();
        assert_abs_diff_eq!(c, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn conditioning_on_the_impossible_event_is_an_error() {
        let (theory, die) = fair_die();
        let target = theory.event(&[0]).unwrap();
        let err = theory
            .conditional(&die, &target, &TheoryOracle::<f64>::zero(&theory))
            .unwrap_err();
        assert!(matches!(err, Error::ZeroProbabilityConditioning { .. }));
    }

    #[test]
    fn fair_die_axioms_hold_exactly() {
        let (theory, die) = fair_die();
        let singletons: Vec<EventSet> = (0..6).map(|o| theory.event(&[o]).unwrap()).collect();
        let report = validate_oracle(&theory, &die, &singletons, 1e-12).unwrap();
        assert!(report.all_passed());
        assert_eq!(report.worst_residual(), 0.0);
        assert_eq!(report.check(Axiom::Normalization).worst_residual, 0.0);
    }

    #[test]
    fn foreign_handles_are_rejected() {
        let (theory, die) = fair_die();
        let foreign = EventSet::from_outcomes(&[0], 8).unwrap();
        assert!(!TheoryOracle::<f64>::is_valid(&theory, &foreign));
        assert!(theory.probability(&die, &foreign).is_err());
        let err = validate_oracle(&theory, &die, &[foreign], 1e-12).unwrap_err();
        assert!(matches!(err, Error::InvalidEvent(_)));
    }

    #[test]
    fn sum_rejects_overlapping_events() {
        let theory = ClassicalTheory::new(4).unwrap();
        let a = theory.event(&[0, 1]).unwrap();
        let b = theory.event(&[1, 2]).unwrap();
        let err = TheoryOracle::<f64>::sum(&theory, &[a, b]).unwrap_err();
        assert!(matches!(err, Error::NotOrthogonal(_)));
    }

    #[test]
    fn conditional_is_biadditive_for_random_instances() {
        // The Boolean ratio rule is additive in the conditioned event as
        // well as in the target, which is exactly why both interference
        // orders vanish classically.
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let size = rng.gen_range(MIN_SPACE..=MAX_SPACE);
            let theory = ClassicalTheory::new(size).unwrap();
            let (state, f, [e1, e2, _]) = random_instance::<f64, _>(size, &mut rng).unwrap();
            let e12 = TheoryOracle::<f64>::sum(&theory, &[e1, e2]).unwrap();
            let p1 = theory.probability(&state, &e1).unwrap();
            let p2 = theory.probability(&state, &e2).unwrap();
            let p12 = theory.probability(&state, &e12).unwrap();
            if p1 <= 1e-6 || p2 <= 1e-6 {
                continue;
            }
            // additive in the conditioning slot (weighted by probabilities)
            let joint = theory.conditional(&state, &f, &e12).unwrap() * p12;
            let split = theory.conditional(&state, &f, &e1).unwrap() * p1
                + theory.conditional(&state, &f, &e2).unwrap() * p2;
            assert_abs_diff_eq!(joint, split, epsilon = 1e-12);
            // additive in the target slot
            let t = theory.conditional(&state, &e12, &e12).unwrap();
            let t_split = theory.conditional(&state, &e1, &e12).unwrap()
                + theory.conditional(&state, &e2, &e12).unwrap();
            assert_abs_diff_eq!(t, t_split, epsilon = 1e-12);
        }
    }

    #[test]
    fn minimal_space_forces_singleton_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (_, _, triple) = random_instance::<f64, _>(3, &mut rng).unwrap();
            let mut masks: Vec<u64> = triple.iter().map(|e| e.mask()).collect();
            masks.sort_unstable();
            assert_eq!(masks, vec![0b001, 0b010, 0b100]);
        }
    }

    #[test]
    fn instance_replay_is_deterministic() {
        let a = random_instance::<f64, _>(9, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        let b = random_instance::<f64, _>(9, &mut ChaCha8Rng::seed_from_u64(99)).unwrap();
        assert_eq!(a.0.weights(), b.0.weights());
        assert_eq!(a.1, b.1);
        assert_eq!(a.2, b.2);
    }

    proptest! {
        #[test]
        fn sampled_triples_are_disjoint_and_nonempty(seed in 0u64..10_000, size in 3usize..=12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (measure, target, triple) = random_instance::<f64, _>(size, &mut rng).unwrap();
            prop_assert!(target.size() == size);
            let full_mask = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
            let total = measure.of(&EventSet::new(full_mask, size).unwrap());
            prop_assert!((total - 1.0).abs() <= 1e-12);
            for e in &triple {
                prop_assert!(!e.is_empty());
            }
            prop_assert_eq!(triple[0].mask() & triple[1].mask(), 0);
            prop_assert_eq!(triple[0].mask() & triple[2].mask(), 0);
            prop_assert_eq!(triple[1].mask() & triple[2].mask(), 0);
        }
    }
}
