//! Closed-form nonincreasing densities on [0,1].
//!
//! Every family carries an exact CDF, quantile, and the two weighted moments
//! `∫ x·f dx` and `∫ x·f² dx` so that downstream error integrals can be
//! evaluated without numerical quadrature. The power-law family is unbounded
//! at the origin, which is the whole point: its plain L² norm diverges while
//! the x-weighted one stays finite.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute tolerance on the total mass of a piecewise-constant model.
pub const MASS_TOL: f64 = 1e-12;

/// A step density given by breakpoints inside (0,1) and one positive,
/// nonincreasing value per piece. Total mass must be 1 within [`MASS_TOL`];
/// use [`PiecewiseConstantSpec::normalized`] to rescale arbitrary weights.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstantSpec {
    /// Piece boundaries including the implicit endpoints: 0 = t₀ < … < tₖ = 1.
    cuts: Vec<f64>,
    /// One density value per piece, nonincreasing and strictly positive.
    values: Vec<f64>,
    /// Cumulative mass at each cut, cum[0] = 0, cum[k] = 1.
    cum: Vec<f64>,
}

impl PiecewiseConstantSpec {
    /// Build from interior breakpoints and per-piece values. The values must
    /// already integrate to 1 within [`MASS_TOL`].
    pub fn new(breaks: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let (spec, mass) = Self::build(breaks, values)?;
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidModel(format!(
                "piecewise-constant mass is {mass}, not 1; use normalized()"
            )));
        }
        Ok(spec)
    }

    /// Build after rescaling the values so the total mass is exactly 1.
    /// Returns the spec together with the mass of the raw input, so callers
    /// can warn when a rescale actually happened.
    pub fn normalized(breaks: Vec<f64>, values: Vec<f64>) -> Result<(Self, f64)> {
        let (raw, mass) = Self::build(breaks, values)?;
        let values: Vec<f64> = raw.values.iter().map(|v| v / mass).collect();
        let (spec, _) = Self::build(raw.interior_breaks().to_vec(), values)?;
        Ok((spec, mass))
    }

    fn build(breaks: Vec<f64>, values: Vec<f64>) -> Result<(Self, f64)> {
        if values.is_empty() {
            return Err(Error::InvalidModel("no pieces".into()));
        }
        if values.len() != breaks.len() + 1 {
            return Err(Error::InvalidModel(format!(
                "{} breakpoints need {} values, got {}",
                breaks.len(),
                breaks.len() + 1,
                values.len()
            )));
        }
        let mut cuts = Vec::with_capacity(breaks.len() + 2);
        cuts.push(0.0);
        cuts.extend_from_slice(&breaks);
        cuts.push(1.0);
        for w in cuts.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidModel(format!(
                    "breakpoints must be strictly increasing inside (0,1): {} !< {}",
                    w[0], w[1]
                )));
            }
        }
        for w in values.windows(2) {
            if !(w[1] <= w[0]) {
                return Err(Error::InvalidModel(format!(
                    "piece values must be nonincreasing: {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        if values.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidModel("piece values must be positive and finite".into()));
        }
        let mut cum = Vec::with_capacity(values.len() + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        for (i, &v) in values.iter().enumerate() {
            acc += v * (cuts[i + 1] - cuts[i]);
            cum.push(acc);
        }
        let mass = acc;
        Ok((Self { cuts, values, cum }, mass))
    }

    fn interior_breaks(&self) -> &[f64] {
        &self.cuts[1..self.cuts.len() - 1]
    }

    /// Index of the piece containing x under the right-continuous convention,
    /// with x = 1 belonging to the last piece.
    fn piece_index(&self, x: f64) -> usize {
        // partition_point returns the count of cuts <= x; pieces are [c_i, c_{i+1}).
        let i = self.cuts.partition_point(|&c| c <= x);
        i.saturating_sub(1).min(self.values.len() - 1)
    }
}

/// A nonincreasing probability density on [0,1] with closed-form primitives.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityModel {
    /// f ≡ 1.
    Uniform,
    /// f(x) = (1−α)·x^(−α) with α in (0,1); unbounded at the origin.
    PowerLaw { alpha: f64 },
    /// f(x) = λe^(−λx)/(1−e^(−λ)) with λ > 0.
    TruncatedExponential { lambda: f64 },
    /// A positive nonincreasing step density.
    PiecewiseConstant(PiecewiseConstantSpec),
}

impl DensityModel {
    pub fn power_law(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidModel(format!(
                "power-law alpha must lie in (0,1), got {alpha}"
            )));
        }
        Ok(Self::PowerLaw { alpha })
    }

    pub fn truncated_exponential(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidModel(format!(
                "truncated-exponential lambda must be positive, got {lambda}"
            )));
        }
        Ok(Self::TruncatedExponential { lambda })
    }

    /// The density f(x), right-continuous, defined on (0,1]. x = 0 is outside
    /// the domain because the power-law family diverges there; no consumer
    /// needs f(0) since x·f(x) → 0 for every nonincreasing density.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::Domain { what: "x", value: x, range: "(0, 1]" });
        }
        Ok(self.pdf_raw(x))
    }

    pub(crate) fn pdf_raw(&self, x: f64) -> f64 {
        match self {
            Self::Uniform => 1.0,
            Self::PowerLaw { alpha } => (1.0 - alpha) * x.powf(-alpha),
            Self::TruncatedExponential { lambda } => {
                lambda * (-lambda * x).exp() / (-(-lambda).exp_m1())
            }
            Self::PiecewiseConstant(spec) => spec.values[spec.piece_index(x)],
        }
    }

    /// The CDF F(x) = ∫₀ˣ f, exact per family, on [0,1].
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain { what: "x", value: x, range: "[0, 1]" });
        }
        Ok(self.cdf_raw(x))
    }

    pub(crate) fn cdf_raw(&self, x: f64) -> f64 {
        match self {
            Self::Uniform => x,
            Self::PowerLaw { alpha } => x.powf(1.0 - alpha),
            Self::TruncatedExponential { lambda } => {
                (-lambda * x).exp_m1() / (-lambda).exp_m1()
            }
            Self::PiecewiseConstant(spec) => {
                if x >= 1.0 {
                    return 1.0;
                }
                let i = spec.piece_index(x);
                spec.cum[i] + spec.values[i] * (x - spec.cuts[i])
            }
        }
    }

    /// The left-continuous inverse inf{x : F(x) ≥ u} on [0,1].
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain { what: "u", value: u, range: "[0, 1]" });
        }
        Ok(self.quantile_raw(u))
    }

    pub(crate) fn quantile_raw(&self, u: f64) -> f64 {
        match self {
            Self::Uniform => u,
            Self::PowerLaw { alpha } => u.powf(1.0 / (1.0 - alpha)),
            Self::TruncatedExponential { lambda } => {
                // F(x) = u  ⇔  x = −ln(1 + u·(e^{−λ} − 1))/λ
                -(u * (-lambda).exp_m1()).ln_1p() / lambda
            }
            Self::PiecewiseConstant(spec) => {
                if u >= 1.0 {
                    return 1.0;
                }
                let i = spec.cum.partition_point(|&c| c <= u).saturating_sub(1);
                let i = i.min(spec.values.len() - 1);
                spec.cuts[i] + (u - spec.cum[i]) / spec.values[i]
            }
        }
    }

    /// First weighted moment ∫ₐᵇ x·f(x) dx, exact.
    pub fn weighted_moment_1(&self, a: f64, b: f64) -> Result<f64> {
        self.check_interval(a, b)?;
        Ok(self.weighted_moment_1_raw(a, b))
    }

    pub(crate) fn weighted_moment_1_raw(&self, a: f64, b: f64) -> f64 {
        match self {
            Self::Uniform => (b * b - a * a) / 2.0,
            Self::PowerLaw { alpha } => {
                let p = 2.0 - alpha;
                (1.0 - alpha) / p * (b.powf(p) - a.powf(p))
            }
            Self::TruncatedExponential { lambda } => {
                let ea = (-lambda * a).exp();
                let eb = (-lambda * b).exp();
                (a * ea - b * eb + (ea - eb) / lambda) / (-(-lambda).exp_m1())
            }
            Self::PiecewiseConstant(spec) => {
                sum_over_pieces(spec, a, b, |v, lo, hi| v * (hi * hi - lo * lo) / 2.0)
            }
        }
    }

    /// Second weighted moment ∫ₐᵇ x·f²(x) dx, exact and finite for every
    /// supported family (the power-law exponent 2−2α stays positive).
    pub fn weighted_moment_2(&self, a: f64, b: f64) -> Result<f64> {
        self.check_interval(a, b)?;
        Ok(self.weighted_moment_2_raw(a, b))
    }

    pub(crate) fn weighted_moment_2_raw(&self, a: f64, b: f64) -> f64 {
        match self {
            Self::Uniform => (b * b - a * a) / 2.0,
            Self::PowerLaw { alpha } => {
                let p = 2.0 - 2.0 * alpha;
                (1.0 - alpha) / 2.0 * (b.powf(p) - a.powf(p))
            }
            Self::TruncatedExponential { lambda } => {
                let c = -(-lambda).exp_m1();
                let ea = (-2.0 * lambda * a).exp();
                let eb = (-2.0 * lambda * b).exp();
                (ea * (2.0 * lambda * a + 1.0) - eb * (2.0 * lambda * b + 1.0)) / (4.0 * c * c)
            }
            Self::PiecewiseConstant(spec) => {
                sum_over_pieces(spec, a, b, |v, lo, hi| v * v * (hi * hi - lo * lo) / 2.0)
            }
        }
    }

    /// Solve f(x) = y for x when the density is strictly decreasing and
    /// smooth; `None` for the flat and step families.
    pub fn pdf_inverse(&self, y: f64) -> Option<f64> {
        if !(y > 0.0) {
            return None;
        }
        match self {
            Self::Uniform | Self::PiecewiseConstant(_) => None,
            Self::PowerLaw { alpha } => Some(((1.0 - alpha) / y).powf(1.0 / alpha)),
            Self::TruncatedExponential { lambda } => {
                let r = y * (-(-lambda).exp_m1()) / lambda;
                (r > 0.0 && r <= 1.0).then(|| -r.ln() / lambda)
            }
        }
    }

    /// Discontinuity points of the density strictly inside (lo, hi).
    pub fn pdf_kinks(&self, lo: f64, hi: f64) -> Vec<f64> {
        match self {
            Self::PiecewiseConstant(spec) => spec
                .interior_breaks()
                .iter()
                .copied()
                .filter(|&t| t > lo && t < hi)
                .collect(),
            _ => Vec::new(),
        }
    }

    fn check_interval(&self, a: f64, b: f64) -> Result<()> {
        if !(0.0 <= a && a <= b && b <= 1.0) {
            return Err(Error::Interval { a, b });
        }
        Ok(())
    }

    /// Parse a model spec, also reporting any normalization warnings
    /// (piecewise-constant weights are rescaled to unit mass).
    pub fn parse_verbose(spec: &str) -> Result<(Self, Vec<String>)> {
        parse_spec(spec)
    }
}

fn sum_over_pieces(
    spec: &PiecewiseConstantSpec,
    a: f64,
    b: f64,
    piece: impl Fn(f64, f64, f64) -> f64,
) -> f64 {
    let mut total = 0.0;
    for (i, &v) in spec.values.iter().enumerate() {
        let lo = spec.cuts[i].max(a);
        let hi = spec.cuts[i + 1].min(b);
        if lo < hi {
            total += piece(v, lo, hi);
        }
    }
    total
}

// --- model spec syntax -------------------------------------------------
//
// `uniform`
// `powerlaw:alpha=0.75`
// `texp:lambda=2.0`
// `pwc:breaks=0.2,0.5;values=2.5,1.0,0.25`

fn parse_spec(spec: &str) -> Result<(DensityModel, Vec<String>)> {
    let err = |reason: &str| Error::Spec { spec: spec.to_string(), reason: reason.to_string() };
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k.trim(), Some(r)),
        None => (spec.trim(), None),
    };
    match kind {
        "uniform" => {
            if rest.is_some() {
                return Err(err("uniform takes no parameters"));
            }
            Ok((DensityModel::Uniform, Vec::new()))
        }
        "powerlaw" => {
            let alpha = parse_params(rest.ok_or_else(|| err("missing alpha"))?, &["alpha"])
                .map_err(|r| err(&r))?[0];
            Ok((DensityModel::power_law(alpha)?, Vec::new()))
        }
        "texp" => {
            let lambda = parse_params(rest.ok_or_else(|| err("missing lambda"))?, &["lambda"])
                .map_err(|r| err(&r))?[0];
            Ok((DensityModel::truncated_exponential(lambda)?, Vec::new()))
        }
        "pwc" => {
            let rest = rest.ok_or_else(|| err("missing breaks/values"))?;
            let mut breaks = None;
            let mut values = None;
            for part in rest.split(';') {
                let (key, val) = part.split_once('=').ok_or_else(|| err("expected key=value"))?;
                let nums: std::result::Result<Vec<f64>, _> =
                    val.split(',').map(|s| s.trim().parse::<f64>()).collect();
                let nums = nums.map_err(|_| err(&format!("bad number list in `{part}`")))?;
                match key.trim() {
                    "breaks" => breaks = Some(nums),
                    "values" => values = Some(nums),
                    other => return Err(err(&format!("unknown key `{other}`"))),
                }
            }
            let breaks = breaks.ok_or_else(|| err("missing breaks"))?;
            let values = values.ok_or_else(|| err("missing values"))?;
            let (spec_built, mass) = PiecewiseConstantSpec::normalized(breaks, values)?;
            let mut warnings = Vec::new();
            if (mass - 1.0).abs() > MASS_TOL {
                warnings.push(format!(
                    "piecewise-constant values integrate to {mass}; rescaled to unit mass"
                ));
            }
            Ok((DensityModel::PiecewiseConstant(spec_built), warnings))
        }
        other => Err(err(&format!(
            "unknown model kind `{other}` (expected uniform, powerlaw, texp, or pwc)"
        ))),
    }
}

fn parse_params(rest: &str, keys: &[&str]) -> std::result::Result<Vec<f64>, String> {
    let mut out = Vec::with_capacity(keys.len());
    let parts: Vec<&str> = rest.split(';').collect();
    if parts.len() != keys.len() {
        return Err(format!("expected {} parameter(s)", keys.len()));
    }
    for (part, key) in parts.iter().zip(keys) {
        let (k, v) = part.split_once('=').ok_or("expected key=value")?;
        if k.trim() != *key {
            return Err(format!("expected key `{key}`, got `{}`", k.trim()));
        }
        out.push(v.trim().parse::<f64>().map_err(|_| format!("bad value for `{key}`"))?);
    }
    Ok(out)
}

impl FromStr for DensityModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s).map(|(m, _)| m)
    }
}

impl fmt::Display for DensityModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Uniform => write!(f, "uniform"),
            Self::PowerLaw { alpha } => write!(f, "powerlaw:alpha={alpha}"),
            Self::TruncatedExponential { lambda } => write!(f, "texp:lambda={lambda}"),
            Self::PiecewiseConstant(spec) => {
                let join = |xs: &[f64]| {
                    xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                };
                write!(f, "pwc:breaks={};values={}", join(spec.interior_breaks()), join(&spec.values))
            }
        }
    }
}

// Models serialize as their canonical spec string so plan files and trial
// logs share one syntax.
impl Serialize for DensityModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DensityModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn models() -> Vec<DensityModel> {
        vec![
            DensityModel::Uniform,
            DensityModel::power_law(0.6).unwrap(),
            DensityModel::power_law(0.75).unwrap(),
            DensityModel::power_law(0.9).unwrap(),
            DensityModel::truncated_exponential(2.0).unwrap(),
            "pwc:breaks=0.2,0.5;values=2.5,1.25,0.25".parse().unwrap(),
        ]
    }

    #[test]
    fn pdf_values() {
        assert_eq!(DensityModel::Uniform.pdf(0.7).unwrap(), 1.0);
        let p75 = DensityModel::power_law(0.75).unwrap();
        assert!((p75.pdf(1.0).unwrap() - 0.25).abs() < 1e-15);
        let p5 = DensityModel::power_law(0.5).unwrap();
        assert!((p5.pdf(0.25).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pdf_domain() {
        for m in models() {
            assert!(m.pdf(0.0).is_err());
            assert!(m.pdf(-0.1).is_err());
            assert!(m.pdf(1.5).is_err());
            assert!(m.pdf(1.0).is_ok());
        }
    }

    #[test]
    fn cdf_endpoints_and_values() {
        for m in models() {
            assert_eq!(m.cdf(0.0).unwrap(), 0.0);
            assert!((m.cdf(1.0).unwrap() - 1.0).abs() < 1e-12);
            assert!(m.cdf(-0.1).is_err());
            assert!(m.cdf(1.1).is_err());
        }
        let p75 = DensityModel::power_law(0.75).unwrap();
        assert!((p75.cdf(0.0625).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quantile_values() {
        for m in models() {
            assert_eq!(m.quantile(0.0).unwrap(), 0.0);
            assert!((m.quantile(1.0).unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(DensityModel::Uniform.quantile(0.3).unwrap(), 0.3);
        let p5 = DensityModel::power_law(0.5).unwrap();
        assert!((p5.quantile(0.5).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn quantile_cdf_round_trip() {
        let mut u = 0.0005_f64;
        for m in models() {
            while u < 1.0 {
                let x = m.quantile(u).unwrap();
                assert!(
                    (m.cdf(x).unwrap() - u).abs() < 1e-10,
                    "round trip failed for {m} at u={u}"
                );
                u += 0.001;
            }
            u = 0.0005;
        }
    }

    #[test]
    fn pdf_nonincreasing_on_grid() {
        for m in models() {
            let mut prev = f64::INFINITY;
            for i in 1..=10_000 {
                let x = i as f64 / 10_000.0;
                let v = m.pdf(x).unwrap();
                assert!(v >= 0.0);
                assert!(v <= prev + 1e-12, "{m} increased at x={x}");
                prev = v;
            }
        }
    }

    #[test]
    fn moment_1_values() {
        for m in models() {
            assert_eq!(m.weighted_moment_1(0.3, 0.3).unwrap(), 0.0);
        }
        assert!((DensityModel::Uniform.weighted_moment_1(0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let p5 = DensityModel::power_law(0.5).unwrap();
        assert!((p5.weighted_moment_1(0.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn moment_2_values() {
        assert!((DensityModel::Uniform.weighted_moment_2(0.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let p75 = DensityModel::power_law(0.75).unwrap();
        assert!((p75.weighted_moment_2(0.0, 1.0).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(p75.weighted_moment_2(0.4, 0.4).unwrap(), 0.0);
    }

    #[test]
    fn moment_2_bounded_by_half() {
        // ∫ x·f² dx ≤ 1/2 for every nonincreasing density; uniform saturates it.
        for m in models() {
            assert!(m.weighted_moment_2(0.0, 1.0).unwrap() <= 0.5 + 1e-12, "{m}");
        }
        for i in 1..100 {
            let alpha = i as f64 / 100.0;
            let m = DensityModel::power_law(alpha).unwrap();
            assert!(m.weighted_moment_2(0.0, 1.0).unwrap() <= 0.5 + 1e-12);
        }
        for lambda in [0.01, 0.5, 1.0, 4.0, 25.0] {
            let m = DensityModel::truncated_exponential(lambda).unwrap();
            assert!(m.weighted_moment_2(0.0, 1.0).unwrap() <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn moment_additivity() {
        let pts = [0.0, 1e-9, 0.1, 0.25, 0.5, 0.7, 0.999, 1.0];
        for m in models() {
            for (ai, &a) in pts.iter().enumerate() {
                for (bi, &b) in pts.iter().enumerate().skip(ai) {
                    for &c in pts.iter().skip(bi) {
                        let whole1 = m.weighted_moment_1(a, c).unwrap();
                        let split1 = m.weighted_moment_1(a, b).unwrap()
                            + m.weighted_moment_1(b, c).unwrap();
                        assert!((whole1 - split1).abs() <= 1e-12 * whole1.abs().max(1.0));
                        let whole2 = m.weighted_moment_2(a, c).unwrap();
                        let split2 = m.weighted_moment_2(a, b).unwrap()
                            + m.weighted_moment_2(b, c).unwrap();
                        assert!((whole2 - split2).abs() <= 1e-12 * whole2.abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn interval_checks() {
        let m = DensityModel::Uniform;
        assert!(m.weighted_moment_1(0.5, 0.2).is_err());
        assert!(m.weighted_moment_1(-0.1, 0.5).is_err());
        assert!(m.weighted_moment_2(0.0, 1.5).is_err());
    }

    #[test]
    fn power_law_rejects_bad_alpha() {
        assert!(DensityModel::power_law(0.0).is_err());
        assert!(DensityModel::power_law(1.0).is_err());
        assert!(DensityModel::power_law(-0.5).is_err());
        assert!(DensityModel::power_law(f64::NAN).is_err());
    }

    #[test]
    fn pwc_construction_rules() {
        assert!(PiecewiseConstantSpec::new(vec![0.5], vec![1.5, 0.5]).is_ok());
        // increasing values
        assert!(PiecewiseConstantSpec::new(vec![0.5], vec![0.5, 1.5]).is_err());
        // breakpoints outside (0,1)
        assert!(PiecewiseConstantSpec::new(vec![0.0], vec![1.5, 0.5]).is_err());
        assert!(PiecewiseConstantSpec::new(vec![0.5, 0.4], vec![2.0, 1.0, 0.5]).is_err());
        // mass off but not normalized
        assert!(PiecewiseConstantSpec::new(vec![0.5], vec![1.0, 0.5]).is_err());
        let (_, mass) = PiecewiseConstantSpec::normalized(vec![0.5], vec![1.0, 0.5]).unwrap();
        assert!((mass - 0.75).abs() < 1e-15);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "uniform",
            "powerlaw:alpha=0.75",
            "texp:lambda=2",
            "pwc:breaks=0.2,0.5;values=2.5,1.25,0.25",
        ] {
            let m: DensityModel = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
            let again: DensityModel = m.to_string().parse().unwrap();
            assert_eq!(m, again);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in [
            "gauss",
            "powerlaw",
            "powerlaw:alpha=2",
            "powerlaw:beta=0.5",
            "texp:lambda=-1",
            "pwc:breaks=0.5",
            "pwc:values=1,1",
            "uniform:x=1",
            "pwc:breaks=0.5;values=0.5,1.5",
        ] {
            assert!(s.parse::<DensityModel>().is_err(), "accepted `{s}`");
        }
    }

    #[test]
    fn parse_warns_on_rescale() {
        let (m, warnings) =
            DensityModel::parse_verbose("pwc:breaks=0.2,0.5;values=2.5,1.0,0.25").unwrap();
        assert_eq!(warnings.len(), 1);
        // mass of the raw weights is 0.925; after rescaling the cdf is proper
        assert!((m.cdf(1.0).unwrap() - 1.0).abs() < 1e-12);
        let (_, none) = DensityModel::parse_verbose("pwc:breaks=0.5;values=1.5,0.5").unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn serde_uses_spec_strings() {
        let m: DensityModel = "powerlaw:alpha=0.9".parse().unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, "\"powerlaw:alpha=0.9\"");
        let back: DensityModel = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
    }
}
