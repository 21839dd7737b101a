//! The Sorkin interference hierarchy over any [`TheoryOracle`].
//!
//! Everything here is built from one scalar,
//! `J(S) = μ(f | Σ_{i∈S} e_i) · μ(Σ_{i∈S} e_i)`:
//!
//! * `i2 = J({1,2}) − J({1}) − J({2})` — second-order interference,
//! * `i3 = J({1,2,3}) − pairs + singletons` — third-order interference,
//! * `i3_via_pairs` — the same quantity reassembled from the three `i2`
//!   terms, equal to `i3` by pure algebra for *every* oracle.
//!
//! [`classify_theory`] runs a seeded Monte-Carlo campaign of such samples
//! and sorts the oracle into one of three bins: classical behavior
//! (no interference), quantum/Jordan behavior (second order only), or
//! beyond-quantum behavior (third order).

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{random_instance, ClassicalTheory};
use crate::error::{Error, Result};
use crate::quantum::{random_density, random_orthogonal_projections, QuantumTheory};
use crate::scalar::Real;
use crate::synthetic::{interference_triple, probe_event, SyntheticTheory};
use crate::theory::TheoryOracle;
use crate::{albert, synthetic};

/// Inputs of one interference trial: a state, a probe event `f`, and a
/// pairwise-orthogonal triple `(e1, e2, e3)`.
#[derive(Debug, Clone)]
pub struct TrialSample<T: Real, O: TheoryOracle<T>> {
    pub state: O::State,
    pub probe: O::Event,
    pub triple: [O::Event; 3],
}

/// The interference scalars extracted from one trial, widened to `f64`
/// for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub i2: f64,
    pub i3: f64,
    /// `|i3 − i3_via_pairs|`; pure rounding noise for any lawful oracle.
    pub decomposition_residual: f64,
}

/// Draws trial inputs for a particular oracle. Implementations must be
/// pure functions of `(oracle, rng)` so campaigns can replay exactly.
pub trait TrialSampler<T: Real, O: TheoryOracle<T>>: Sync {
    fn sample<R: Rng + ?Sized>(&self, oracle: &O, rng: &mut R) -> Result<TrialSample<T, O>>;
}

/// `J(S) = μ(f | ΣS) · μ(ΣS)`, the building block of the hierarchy.
///
/// When `μ(ΣS)` falls at or below the oracle's conditioning cut-off the
/// product is taken as its limit 0 — the vanishing factor wins — so the
/// interference terms stay total on all orthogonal families without ever
/// conditioning on a null event.
pub fn j_value<T, O>(
    oracle: &O,
    state: &O::State,
    probe: &O::Event,
    events: &[O::Event],
) -> Result<T>
where
    T: Real,
    O: TheoryOracle<T>,
{
    if events.is_empty() {
        return Ok(T::zero());
    }
    let combined = oracle.sum(events)?;
    let weight = oracle.probability(state, &combined)?;
    if weight <= oracle.conditioning_tolerance() {
        return Ok(T::zero());
    }
    let conditional = oracle.conditional(state, probe, &combined)?;
    Ok(conditional * weight)
}

/// Second-order interference `J({1,2}) − J({1}) − J({2})`.
pub fn i2<T, O>(
    oracle: &O,
    state: &O::State,
    probe: &O::Event,
    e1: &O::Event,
    e2: &O::Event,
) -> Result<T>
where
    T: Real,
    O: TheoryOracle<T>,
{
    let j12 = j_value(oracle, state, probe, &[e1.clone(), e2.clone()])?;
    let j1 = j_value(oracle, state, probe, std::slice::from_ref(e1))?;
    let j2 = j_value(oracle, state, probe, std::slice::from_ref(e2))?;
    Ok((j12 - j1) - j2)
}

/// Third-order interference
/// `J({1,2,3}) − J({1,2}) − J({1,3}) − J({2,3}) + J({1}) + J({2}) + J({3})`.
///
/// The terms are grouped as `(J123 − J12) + (J1 − J13) + (J2 − J23) + J3`
/// so that a degenerate `e3` (the zero event) cancels pairwise to an
/// exact floating-point 0.
pub fn i3<T, O>(
    oracle: &O,
    state: &O::State,
    probe: &O::Event,
    triple: &[O::Event; 3],
) -> Result<T>
where
    T: Real,
    O: TheoryOracle<T>,
{
    let [e1, e2, e3] = triple;
    let j123 = j_value(oracle, state, probe, &[e1.clone(), e2.clone(), e3.clone()])?;
    let j12 = j_value(oracle, state, probe, &[e1.clone(), e2.clone()])?;
    let j13 = j_value(oracle, state, probe, &[e1.clone(), e3.clone()])?;
    let j23 = j_value(oracle, state, probe, &[e2.clone(), e3.clone()])?;
    let j1 = j_value(oracle, state, probe, std::slice::from_ref(e1))?;
    let j2 = j_value(oracle, state, probe, std::slice::from_ref(e2))?;
    let j3 = j_value(oracle, state, probe, std::slice::from_ref(e3))?;
    Ok((j123 - j12) + (j1 - j13) + (j2 - j23) + j3)
}

/// `i3` reassembled from second-order terms:
/// `[J({1,2,3}) − J({1}) − J({2}) − J({3})] − [i2(e1,e2) + i2(e1,e3) + i2(e2,e3)]`.
///
/// Expanding the brackets reproduces `i3` term by term, for any oracle —
/// third-order interference is exactly what is left of the triple term
/// after all pairwise interference is accounted for.
pub fn i3_via_pairs<T, O>(
    oracle: &O,
    state: &O::State,
    probe: &O::Event,
    triple: &[O::Event; 3],
) -> Result<T>
where
    T: Real,
    O: TheoryOracle<T>,
{
    let [e1, e2, e3] = triple;
    let j123 = j_value(oracle, state, probe, &[e1.clone(), e2.clone(), e3.clone()])?;
    let j1 = j_value(oracle, state, probe, std::slice::from_ref(e1))?;
    let j2 = j_value(oracle, state, probe, std::slice::from_ref(e2))?;
    let j3 = j_value(oracle, state, probe, std::slice::from_ref(e3))?;
    let pairs = i2(oracle, state, probe, e1, e2)?
        + i2(oracle, state, probe, e1, e3)?
        + i2(oracle, state, probe, e2, e3)?;
    Ok(((j123 - j1) - j2 - j3) - pairs)
}

/// Evaluates one sample: both interference orders plus the decomposition
/// residual `|i3 − i3_via_pairs|`.
pub fn evaluate_trial<T, O>(oracle: &O, sample: &TrialSample<T, O>) -> Result<TrialOutcome>
where
    T: Real,
    O: TheoryOracle<T>,
{
    let i2_value = i2(
        oracle,
        &sample.state,
        &sample.probe,
        &sample.triple[0],
        &sample.triple[1],
    )?;
    let i3_value = i3(oracle, &sample.state, &sample.probe, &sample.triple)?;
    let recomposed = i3_via_pairs(oracle, &sample.state, &sample.probe, &sample.triple)?;
    Ok(TrialOutcome {
        i2: i2_value.as_f64(),
        i3: i3_value.as_f64(),
        decomposition_residual: (i3_value - recomposed).abs().as_f64(),
    })
}

/// Decision thresholds for [`classify_theory`].
///
/// Residuals at or below `zero` count as vanishing; values above
/// `significance` count as genuine interference. The defaults leave six
/// orders of magnitude between the two, which no double-precision
/// rounding accident can bridge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub zero: f64,
    pub significance: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            zero: 1e-8,
            significance: 1e-2,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        if !(self.zero >= 0.0 && self.zero < self.significance) {
            return Err(Error::ContradictoryThresholds {
                zero: self.zero,
                significance: self.significance,
            });
        }
        Ok(())
    }
}

/// Campaign classification per the interference hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "NO_INTERFERENCE")]
    NoInterference,
    #[serde(rename = "SECOND_ORDER_ONLY")]
    SecondOrderOnly,
    #[serde(rename = "THIRD_ORDER")]
    ThirdOrder,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::NoInterference => "NO_INTERFERENCE",
            Verdict::SecondOrderOnly => "SECOND_ORDER_ONLY",
            Verdict::ThirdOrder => "THIRD_ORDER",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Number of uniform histogram bins in the emitted report.
pub const HISTOGRAM_BINS: usize = 64;
/// Support of the `i2` histogram; `|I₂| ≤ 1` from probabilities in [0,1].
pub const I2_RANGE: (f64, f64) = (-1.0, 1.0);
/// Support of the `i3` histogram (coarse bound).
pub const I3_RANGE: (f64, f64) = (-4.0, 4.0);

/// Full record of a classification campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceReport {
    pub theory: &'static str,
    pub trials: u64,
    pub seed: u64,
    pub thresholds: Thresholds,
    /// Per-trial values, index-aligned with the trial counter, so any
    /// single trial can be replayed from `(seed, index)`.
    pub i2_values: Vec<f64>,
    pub i3_values: Vec<f64>,
    pub decomposition_residuals: Vec<f64>,
    pub max_abs_i2: f64,
    pub max_abs_i3: f64,
    /// Fraction of trials with `|I₂|` above the significance threshold.
    pub significant_i2_fraction: f64,
    pub verdict: Verdict,
    /// Wall-clock duration of the trial loop, in milliseconds.
    pub duration_ms: u64,
}

impl InterferenceReport {
    /// Largest observed `|i3 − i3_via_pairs|`.
    pub fn max_decomposition_residual(&self) -> f64 {
        self.decomposition_residuals
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    /// The deterministic part of the report as a JSON object: scalars plus
    /// fixed-width histograms, no timing. Identical campaigns serialize to
    /// identical bytes; volatile data (durations, timestamps) belongs in a
    /// separate manifest block alongside this object.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "theory": self.theory,
            "trials": self.trials,
            "seed": self.seed,
            "max_abs_i2": self.max_abs_i2,
            "max_abs_i3": self.max_abs_i3,
            "significant_i2_fraction": self.significant_i2_fraction,
            "i2_histogram": histogram(&self.i2_values, I2_RANGE.0, I2_RANGE.1, HISTOGRAM_BINS),
            "i3_histogram": histogram(&self.i3_values, I3_RANGE.0, I3_RANGE.1, HISTOGRAM_BINS),
            "verdict": self.verdict,
        })
    }
}

/// Counts `values` into `bins` uniform buckets over `[min, max]`;
/// out-of-range values land in the edge buckets.
pub fn histogram(values: &[f64], min: f64, max: f64, bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins];
    let scale = bins as f64 / (max - min);
    for &v in values {
        let bin = (((v - min) * scale).floor() as i64).clamp(0, bins as i64 - 1);
        counts[bin as usize] += 1;
    }
    counts
}

/// The RNG for trial `index` of a campaign seeded with `seed`: one ChaCha
/// keyed by the seed, streamed by the trial index. Streams are
/// statistically independent and assigned before any scheduling happens,
/// so campaigns are reproducible under any thread count.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `trials` seeded interference trials against `oracle` and
/// classifies it.
///
/// Verdict cascade: third-order interference above the significance
/// threshold wins; otherwise significant second-order interference;
/// otherwise no interference. Values stranded between the two thresholds
/// are treated as noise in favour of the weaker classification, which
/// keeps the verdict total.
pub fn classify_theory<T, O, S>(
    oracle: &O,
    sampler: &S,
    trials: u64,
    seed: u64,
    thresholds: Thresholds,
) -> Result<InterferenceReport>
where
    T: Real,
    O: TheoryOracle<T> + Sync,
    S: TrialSampler<T, O>,
{
    thresholds.validate()?;
    if trials == 0 {
        return Err(Error::Config(
            "a classification campaign needs at least one trial".into(),
        ));
    }

    let started = Instant::now();
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|index| {
            let mut rng = trial_rng(seed, index);
            let sample = sampler.sample(oracle, &mut rng)?;
            evaluate_trial(oracle, &sample)
        })
        .collect::<Result<Vec<TrialOutcome>>>()?;
    let duration_ms = started.elapsed().as_millis() as u64;

    let i2_values: Vec<f64> = outcomes.iter().map(|o| o.i2).collect();
    let i3_values: Vec<f64> = outcomes.iter().map(|o| o.i3).collect();
    let decomposition_residuals: Vec<f64> =
        outcomes.iter().map(|o| o.decomposition_residual).collect();

    let max_abs_i2 = i2_values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let max_abs_i3 = i3_values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let significant = i2_values
        .iter()
        .filter(|v| v.abs() > thresholds.significance)
        .count();

    let verdict = if max_abs_i3 > thresholds.significance {
        Verdict::ThirdOrder
    } else if max_abs_i2 > thresholds.significance {
        Verdict::SecondOrderOnly
    } else {
        Verdict::NoInterference
    };

    Ok(InterferenceReport {
        theory: oracle.name(),
        trials,
        seed,
        thresholds,
        significant_i2_fraction: significant as f64 / trials as f64,
        i2_values,
        i3_values,
        decomposition_residuals,
        max_abs_i2,
        max_abs_i3,
        verdict,
        duration_ms,
    })
}

/// Classical trials: a random simplex measure, a uniformly random probe
/// subset, and a random disjoint triple, all on the oracle's sample space.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassicalSampler;

impl<T: Real> TrialSampler<T, ClassicalTheory> for ClassicalSampler {
    fn sample<R: Rng + ?Sized>(
        &self,
        oracle: &ClassicalTheory,
        rng: &mut R,
    ) -> Result<TrialSample<T, ClassicalTheory>> {
        let (measure, probe, triple) = random_instance(oracle.size(), rng)?;
        Ok(TrialSample {
            state: measure,
            probe,
            triple,
        })
    }
}

/// Quantum trials: a random-rank density, a Haar-random projection triple
/// of random ranks resolving the identity, and an independent probe
/// projection.
///
/// The probe rank is drawn from `1..=dim−2` (so its complement leaves
/// room for interference); at `dim = 3` everything degenerates to the
/// rank-1 configuration where second-order fringes are largest.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuantumSampler;

impl<T: Real> TrialSampler<T, QuantumTheory> for QuantumSampler {
    fn sample<R: Rng + ?Sized>(
        &self,
        oracle: &QuantumTheory,
        rng: &mut R,
    ) -> Result<TrialSample<T, QuantumTheory>> {
        let dim = oracle.dim();
        let state_rank = rng.gen_range(1..=dim);
        let state = random_density(dim, state_rank, rng)?;

        // a random composition of dim into three positive ranks
        let first_cut = rng.gen_range(1..=dim - 2);
        let second_cut = rng.gen_range(first_cut + 1..=dim - 1);
        let ranks = [first_cut, second_cut - first_cut, dim - second_cut];
        let mut projections = random_orthogonal_projections(dim, &ranks, rng)?;

        let probe_rank = rng.gen_range(1..=(dim - 2).max(1));
        let probe = random_orthogonal_projections(dim, &[probe_rank], rng)?
            .pop()
            .expect("one projection was requested");

        let e3 = projections.pop().expect("three projections were requested");
        let e2 = projections.pop().expect("three projections were requested");
        let e1 = projections.pop().expect("three projections were requested");
        Ok(TrialSample {
            state,
            probe,
            triple: [e1, e2, e3],
        })
    }
}

/// Albert-algebra trials: a trace-normalized squared Gaussian state, the
/// idempotent triple of a random spectral decomposition, and an
/// independent random primitive idempotent as probe.
#[derive(Debug, Clone, Copy, Default)]
pub struct AlbertSampler;

impl<T: Real> TrialSampler<T, albert::AlbertTheory> for AlbertSampler {
    fn sample<R: Rng + ?Sized>(
        &self,
        _oracle: &albert::AlbertTheory,
        rng: &mut R,
    ) -> Result<TrialSample<T, albert::AlbertTheory>> {
        let state = albert::random_state(rng)?;
        let triple = albert::random_idempotent_triple(rng)?;
        let probe = albert::random_idempotent(rng)?;
        Ok(TrialSample {
            state,
            probe,
            triple,
        })
    }
}

/// The synthetic oracle has exactly one interesting configuration; every
/// trial replays it.
#[derive(Debug, Clone, Copy, Default)]
pub struct SyntheticSampler;

impl<T: Real> TrialSampler<T, SyntheticTheory> for SyntheticSampler {
    fn sample<R: Rng + ?Sized>(
        &self,
        _oracle: &SyntheticTheory,
        _rng: &mut R,
    ) -> Result<TrialSample<T, SyntheticTheory>> {
        Ok(TrialSample {
            state: synthetic::SyntheticState,
            probe: probe_event(),
            triple: interference_triple(),
        })
    }
}
