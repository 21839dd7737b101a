//! Floating-point scalar abstraction.
//!
//! Everything numeric in this crate is generic over [`Real`] so the same
//! algebra runs in `f32` or `f64`. The trait also centralizes the random
//! primitives the samplers need, which keeps `where` clauses out of the
//! call sites.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant, panicking only on NaN-free exotic types
    /// (never for the shipped `f32`/`f64` impls).
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 constant must convert into the scalar type")
    }

    /// Lossy view used for error payloads and report serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// One standard-normal draw.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// One unit-exponential draw.
    fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Exp1.sample(rng)
    }
}

impl Real for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }

    fn unit_exponential<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Exp1.sample(rng)
    }
}

/// Compensated (Kahan) summation.
///
/// Probability bookkeeping repeatedly sums small vectors; the compensated
/// loop keeps those sums exact to the final rounding, which the exactness
/// tests on hand-built measures rely on.
pub fn kahan_sum<T: Real, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut sum = T::zero();
    let mut carry = T::zero();
    for value in values {
        let y = value - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}
