//! Scalar far-field n-slit simulator and the pointwise Sorkin residual.
//!
//! Each open slit contributes a Fraunhofer single-slit amplitude at
//! detector position `x`: a `sinc` envelope from the finite slit width
//! times a quadratic phase from the small-angle path length,
//!
//! ```text
//! a_j(x) = sinc(π·w·(x−c_j)/(λL)) · exp(i·π·(x−c_j)²/(λL))
//! ```
//!
//! (the constant length `L` common to all paths is dropped — only phase
//! differences are observable). Amplitudes are additive over disjoint
//! apertures by construction, which is precisely why the three-slit
//! Sorkin combination `P₁₂₃ − P₁₂ − P₁₃ − P₂₃ + P₁ + P₂ + P₃` vanishes
//! identically for an ideal detector: the identity
//! `|a+b+c|² − |a+b|² − |a+c|² − |b+c|² + |a|² + |b|² + |c|² = 0` holds
//! for arbitrary complex numbers. A nonlinear detector breaks it, and the
//! residual becomes a direct experimental probe of third-order
//! interference.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A three-or-more-slit Fraunhofer geometry plus the detector positions
/// to evaluate. All lengths share one unit (meters in shipped configs).
#[derive(Debug, Clone, PartialEq)]
pub struct SlitGeometry<T: Real> {
    wavelength: T,
    slit_width: T,
    slit_centers: Vec<T>,
    screen_distance: T,
    detectors: Vec<T>,
}

impl<T: Real> SlitGeometry<T> {
    pub fn new(
        wavelength: T,
        slit_width: T,
        slit_centers: Vec<T>,
        screen_distance: T,
        detectors: Vec<T>,
    ) -> Result<Self> {
        for (name, value) in [
            ("wavelength", wavelength),
            ("slit_width", slit_width),
            ("screen_distance", screen_distance),
        ] {
            if value <= T::zero() || !value.is_finite() {
                return Err(Error::InvalidGeometry(format!(
                    "{name} must be positive and finite, got {value}"
                )));
            }
        }
        if slit_centers.len() < 2 {
            return Err(Error::InvalidGeometry(format!(
                "at least two slits are needed for interference, got {}",
                slit_centers.len()
            )));
        }
        if slit_centers.iter().chain(&detectors).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGeometry(
                "slit centers and detector positions must be finite".into(),
            ));
        }
        if slit_centers.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGeometry(
                "slit centers must be strictly increasing".into(),
            ));
        }
        if detectors.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidGeometry(
                "detector positions must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            wavelength,
            slit_width,
            slit_centers,
            screen_distance,
            detectors,
        })
    }

    pub fn slit_count(&self) -> usize {
        self.slit_centers.len()
    }

    pub fn slit_centers(&self) -> &[T] {
        &self.slit_centers
    }

    pub fn detectors(&self) -> &[T] {
        &self.detectors
    }

    pub fn wavelength(&self) -> T {
        self.wavelength
    }

    pub fn slit_width(&self) -> T {
        self.slit_width
    }

    pub fn screen_distance(&self) -> T {
        self.screen_distance
    }
}

/// A subset of open slits, encoded as a bitmask over slit indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Aperture {
    mask: u32,
    slit_count: usize,
}

impl Aperture {
    pub fn new(mask: u32, slit_count: usize) -> Result<Self> {
        if slit_count > 32 {
            return Err(Error::InvalidGeometry(format!(
                "at most 32 slits are supported, got {slit_count}"
            )));
        }
        if mask == 0 {
            return Err(Error::InvalidGeometry(
                "aperture must keep at least one slit open".into(),
            ));
        }
        if mask >> slit_count != 0 {
            return Err(Error::InvalidGeometry(format!(
                "aperture mask {mask:#b} references slits beyond the {slit_count} available"
            )));
        }
        Ok(Self { mask, slit_count })
    }

    /// All slits open.
    pub fn all(slit_count: usize) -> Result<Self> {
        Self::new((1u32 << slit_count) - 1, slit_count)
    }

    pub fn of_slits(slits: &[usize], slit_count: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &s in slits {
            if s >= slit_count {
                return Err(Error::InvalidGeometry(format!(
                    "slit index {s} outside 0..{slit_count}"
                )));
            }
            mask |= 1 << s;
        }
        Self::new(mask, slit_count)
    }

    pub fn is_open(&self, slit: usize) -> bool {
        slit < self.slit_count && self.mask & (1 << slit) != 0
    }

    pub fn open_slits(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.slit_count).filter(|&s| self.mask & (1 << s) != 0)
    }
}

/// Detector transfer function applied to each normalized probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectorResponse<T: Real> {
    /// Records the probability as is.
    Ideal,
    /// Quadratic saturation `p ↦ p − ε·p²`, clamped at zero. The clamp
    /// only engages for saturations strong enough to drive the model
    /// outside its physical regime.
    Saturating { epsilon: T },
}

impl<T: Real> DetectorResponse<T> {
    pub fn saturating(epsilon: T) -> Result<Self> {
        if !(epsilon >= T::zero() && epsilon < T::one()) {
            return Err(Error::Config(format!(
                "saturation epsilon must lie in [0, 1), got {epsilon}"
            )));
        }
        Ok(Self::Saturating { epsilon })
    }

    pub fn record(&self, p: T) -> T {
        match self {
            Self::Ideal => p,
            Self::Saturating { epsilon } => (p - *epsilon * p * p).max(T::zero()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Ideal => "IDEAL".to_string(),
            Self::Saturating { epsilon } => format!("SATURATING({epsilon})"),
        }
    }
}

fn sinc<T: Real>(b: T) -> T {
    if b.abs() < T::of(1e-4) {
        T::one() - b * b / T::of(6.0)
    } else {
        b.sin() / b
    }
}

/// Far-field amplitude at detector position `x` with the given slits
/// open. Exactly additive over disjoint apertures: it is a plain sum of
/// per-slit terms taken in slit order.
pub fn amplitude<T: Real>(
    geometry: &SlitGeometry<T>,
    aperture: &Aperture,
    x: T,
) -> Result<Complex<T>> {
    if aperture.slit_count != geometry.slit_count() {
        return Err(Error::InvalidGeometry(format!(
            "aperture covers {} slits but the geometry has {}",
            aperture.slit_count,
            geometry.slit_count()
        )));
    }
    let lambda_l = geometry.wavelength * geometry.screen_distance;
    let mut total = Complex::new(T::zero(), T::zero());
    for j in aperture.open_slits() {
        let offset = x - geometry.slit_centers[j];
        let envelope = sinc(T::PI() * geometry.slit_width * offset / lambda_l);
        let phase = T::PI() * offset * offset / lambda_l;
        total = total + Complex::new(envelope * phase.cos(), envelope * phase.sin());
    }
    Ok(total)
}

/// Trapezoid-rule integral over the span-normalized detector axis
/// (positions rescaled to [0, 1]), so the result is a dimensionless
/// average rather than a per-meter density.
fn unit_span_trapezoid<T: Real>(values: &[T], detectors: &[T]) -> T {
    let span = detectors[detectors.len() - 1] - detectors[0];
    let mut acc = T::zero();
    for i in 0..values.len() - 1 {
        let du = (detectors[i + 1] - detectors[i]) / span;
        acc = acc + du * (values[i] + values[i + 1]) * T::of(0.5);
    }
    acc
}

fn raw_intensities<T: Real>(geometry: &SlitGeometry<T>, aperture: &Aperture) -> Result<Vec<T>> {
    geometry
        .detectors
        .iter()
        .map(|&x| amplitude(geometry, aperture, x).map(|a| a.norm_sqr()))
        .collect()
}

/// Detector-screen pattern for one aperture: `|amplitude|²`, normalized
/// so the fully-open pattern has unit trapezoid integral over the
/// span-normalized detector axis (pattern values are dimensionless, with
/// mean ≈ 1 for the fully-open case), then passed through the detector
/// response. All seven subset patterns of a Sorkin combination share the
/// fully-open normalization — per-subset normalization would destroy the
/// combination's meaning.
pub fn pattern<T: Real>(
    geometry: &SlitGeometry<T>,
    aperture: &Aperture,
    response: &DetectorResponse<T>,
) -> Result<Vec<T>> {
    if geometry.detectors.len() < 2 {
        return Err(Error::InvalidGeometry(format!(
            "trapezoid normalization needs at least two detectors, got {}",
            geometry.detectors.len()
        )));
    }
    let fully_open = raw_intensities(geometry, &Aperture::all(geometry.slit_count())?)?;
    let normalization = unit_span_trapezoid(&fully_open, &geometry.detectors);
    if normalization <= T::zero() || !normalization.is_finite() {
        return Err(Error::InvalidGeometry(
            "fully-open pattern integrates to zero; geometry is degenerate".into(),
        ));
    }
    let raw = raw_intensities(geometry, aperture)?;
    Ok(raw
        .into_iter()
        .map(|p| response.record(p / normalization))
        .collect())
}

/// The seven aperture patterns of a three-slit experiment plus the
/// pointwise Sorkin residual, in CSV column order.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternTable<T: Real> {
    pub geometry: SlitGeometry<T>,
    pub response: DetectorResponse<T>,
    pub p123: Vec<T>,
    pub p12: Vec<T>,
    pub p13: Vec<T>,
    pub p23: Vec<T>,
    pub p1: Vec<T>,
    pub p2: Vec<T>,
    pub p3: Vec<T>,
    pub residual: Vec<T>,
}

impl<T: Real> PatternTable<T> {
    pub fn max_absolute_residual(&self) -> T {
        self.residual
            .iter()
            .map(|r| r.abs())
            .fold(T::zero(), T::max)
    }

    /// Largest residual relative to the fully-open pattern's maximum.
    pub fn max_relative_residual(&self) -> T {
        let peak = self.p123.iter().fold(T::zero(), |a, &b| a.max(b));
        if peak > T::zero() {
            self.max_absolute_residual() / peak
        } else {
            T::zero()
        }
    }
}

/// Computes all seven subset patterns of a three-slit geometry and their
/// pointwise Sorkin combination.
pub fn pattern_table<T: Real>(
    geometry: &SlitGeometry<T>,
    response: &DetectorResponse<T>,
) -> Result<PatternTable<T>> {
    if geometry.slit_count() != 3 {
        return Err(Error::InvalidGeometry(format!(
            "the Sorkin residual needs exactly 3 slits, got {}",
            geometry.slit_count()
        )));
    }
    let of = |slits: &[usize]| -> Result<Vec<T>> {
        pattern(geometry, &Aperture::of_slits(slits, 3)?, response)
    };
    let p123 = of(&[0, 1, 2])?;
    let p12 = of(&[0, 1])?;
    let p13 = of(&[0, 2])?;
    let p23 = of(&[1, 2])?;
    let p1 = of(&[0])?;
    let p2 = of(&[1])?;
    let p3 = of(&[2])?;
    let residual = (0..geometry.detectors.len())
        .map(|i| ((p123[i] - p12[i]) + (p1[i] - p13[i])) + ((p2[i] - p23[i]) + p3[i]))
        .collect();
    Ok(PatternTable {
        geometry: geometry.clone(),
        response: *response,
        p123,
        p12,
        p13,
        p23,
        p1,
        p2,
        p3,
        residual,
    })
}

/// The pointwise Sorkin residual
/// `P₁₂₃ − P₁₂ − P₁₃ − P₂₃ + P₁ + P₂ + P₃` of a three-slit geometry.
pub fn sorkin_residual<T: Real>(
    geometry: &SlitGeometry<T>,
    response: &DetectorResponse<T>,
) -> Result<Vec<T>> {
    Ok(pattern_table(geometry, response)?.residual)
}

/// Writes the pattern table as CSV: geometry echoed in `#` comments, the
/// fixed header `x,P123,P12,P13,P23,P1,P2,P3,residual`, one row per
/// detector. Values use shortest-round-trip decimal formatting, so a
/// read-back reproduces them bit-exactly. Contains nothing volatile —
/// identical tables serialize to identical bytes.
pub fn export_pattern<T: Real, W: Write>(table: &PatternTable<T>, mut out: W) -> Result<()> {
    let g = &table.geometry;
    let mut text = String::new();
    let centers = g
        .slit_centers
        .iter()
        .map(|c| format!("{c}"))
        .collect::<Vec<_>>()
        .join(",");
    let _ = writeln!(text, "# wavelength = {}", g.wavelength);
    let _ = writeln!(text, "# slit_width = {}", g.slit_width);
    let _ = writeln!(text, "# slit_centers = {centers}");
    let _ = writeln!(text, "# screen_distance = {}", g.screen_distance);
    let _ = writeln!(text, "# response = {}", table.response.label());
    let _ = writeln!(text, "x,P123,P12,P13,P23,P1,P2,P3,residual");
    for (i, x) in g.detectors.iter().enumerate() {
        let _ = writeln!(
            text,
            "{x},{},{},{},{},{},{},{},{}",
            table.p123[i],
            table.p12[i],
            table.p13[i],
            table.p23[i],
            table.p1[i],
            table.p2[i],
            table.p3[i],
            table.residual[i],
        );
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// [`export_pattern`] to a filesystem path.
pub fn export_pattern_to_path<T: Real>(table: &PatternTable<T>, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    export_pattern(table, std::io::BufWriter::new(file))
}

/// How the detector response is selected in a config file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ResponseKind {
    #[default]
    Ideal,
    Saturating,
}

/// On-disk experiment description (TOML key/value file).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlitsConfig {
    pub wavelength: f64,
    pub slit_width: f64,
    pub slit_centers: Vec<f64>,
    pub screen_distance: f64,
    pub detector_min: f64,
    pub detector_max: f64,
    pub detector_count: usize,
    #[serde(default)]
    pub response: ResponseKind,
    #[serde(default)]
    pub epsilon: f64,
}

impl SlitsConfig {
    /// Representative three-slit photon geometry (not taken from any
    /// specific experiment): 810 nm wavelength, 30 µm slits spaced
    /// 100 µm apart, screen at 18 cm, 1001 detectors across ±5 mm.
    pub fn default_three_slit() -> Self {
        Self {
            wavelength: 810e-9,
            slit_width: 30e-6,
            slit_centers: vec![-100e-6, 0.0, 100e-6],
            screen_distance: 0.18,
            detector_min: -5e-3,
            detector_max: 5e-3,
            detector_count: 1001,
            response: ResponseKind::Ideal,
            epsilon: 0.0,
        }
    }

    /// Parses a TOML config; errors carry the parser's line/column
    /// diagnostics and name any missing key.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes infallibly")
    }

    pub fn geometry<T: Real>(&self) -> Result<SlitGeometry<T>> {
        if self.detector_count < 2 {
            return Err(Error::InvalidGeometry(format!(
                "detector_count must be at least 2, got {}",
                self.detector_count
            )));
        }
        if !self.detector_min.is_finite()
            || !self.detector_max.is_finite()
            || self.detector_min >= self.detector_max
        {
            return Err(Error::InvalidGeometry(format!(
                "detector_min {} must lie below detector_max {}",
                self.detector_min, self.detector_max
            )));
        }
        let n = self.detector_count;
        let step = (self.detector_max - self.detector_min) / (n - 1) as f64;
        let detectors = (0..n)
            .map(|i| T::of(self.detector_min + step * i as f64))
            .collect();
        SlitGeometry::new(
            T::of(self.wavelength),
            T::of(self.slit_width),
            self.slit_centers.iter().map(|&c| T::of(c)).collect(),
            T::of(self.screen_distance),
            detectors,
        )
    }

    pub fn response<T: Real>(&self) -> Result<DetectorResponse<T>> {
        match self.response {
            ResponseKind::Ideal => Ok(DetectorResponse::Ideal),
            ResponseKind::Saturating => DetectorResponse::saturating(T::of(self.epsilon)),
        }
    }
}

/// A random well-posed three-slit geometry: visible-band wavelength,
/// tens-of-µm slits, a detector span covering a few central fringes.
pub fn random_three_slit_geometry<T: Real, R: Rng + ?Sized>(rng: &mut R) -> SlitGeometry<T> {
    let wavelength = rng.gen_range(400e-9..=1000e-9);
    let slit_width = rng.gen_range(10e-6..=40e-6);
    let separation = rng.gen_range(60e-6..=160e-6);
    let middle = separation * rng.gen_range(-0.25..=0.25);
    let screen_distance = rng.gen_range(0.1..=0.4);
    let fringe = wavelength * screen_distance / separation;
    let half_span = fringe * rng.gen_range(2.0..=5.0);
    let count = 201 + 2 * rng.gen_range(0..=200usize);
    let step = 2.0 * half_span / (count - 1) as f64;
    let detectors = (0..count)
        .map(|i| T::of(-half_span + step * i as f64))
        .collect();
    SlitGeometry::new(
        T::of(wavelength),
        T::of(slit_width),
        vec![T::of(-separation), T::of(middle), T::of(separation)],
        T::of(screen_distance),
        detectors,
    )
    .expect("randomized parameters are valid by construction")
}
