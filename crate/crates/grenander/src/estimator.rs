//! Empirical CDF, its least concave majorant, and the Grenander estimator.
//!
//! The majorant is the upper concave hull of the ECDF's jump points together
//! with (0,0) and (1,1), built by a single monotone-chain pass over the
//! already-sorted points. Its segment slopes, read left to right, are the
//! Grenander estimate: a nonnegative, strictly decreasing step density.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::SampleSet;

/// Relative collinearity tolerance for the hull orientation test. The cross
/// product is compared against its own term magnitudes, not an absolute
/// cutoff: jump points of unbounded densities cluster near the origin, where
/// crosses of genuinely concave corners are far below any absolute epsilon.
pub(crate) const COLLINEAR_REL_TOL: f64 = 1e-14;

/// Consecutive hull slopes closer than this (relative) are merged into one
/// piece so the strict-decrease invariant is not defeated by rounding.
const SLOPE_MERGE_REL_TOL: f64 = 1e-12;

/// The right-continuous empirical distribution function Fₙ.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    /// Distinct jump locations, strictly increasing, in (0,1].
    jump_points: Vec<f64>,
    /// Jump multiplicities; heights are counts/n.
    counts: Vec<u32>,
    /// Cumulative value at each jump point: (Σ counts)/n, ending at 1.
    cumulative: Vec<f64>,
    n: usize,
}

impl EmpiricalCdf {
    pub fn from_sample(s: &SampleSet) -> Self {
        let n = s.n();
        let mut cumulative = Vec::with_capacity(s.values().len());
        let mut acc: u64 = 0;
        for &k in s.counts() {
            acc += u64::from(k);
            cumulative.push(acc as f64 / n as f64);
        }
        Self { jump_points: s.values().to_vec(), counts: s.counts().to_vec(), cumulative, n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn jump_points(&self) -> &[f64] {
        &self.jump_points
    }

    /// Jump heights kᵢ/n, aligned with the jump points.
    pub fn jump_heights(&self) -> Vec<f64> {
        self.counts.iter().map(|&k| f64::from(k) / self.n as f64).collect()
    }

    /// Fₙ at each jump point.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// Evaluate Fₙ(x) (right-continuous step function, 0 before the first
    /// jump, 1 from the last jump on).
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.jump_points.partition_point(|&p| p <= x);
        if i == 0 {
            0.0
        } else {
            self.cumulative[i - 1]
        }
    }
}

/// The least concave majorant F̂ₙ of an empirical CDF: a piecewise-linear
/// concave function from (0,0) to (1,1) with strictly decreasing slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveMajorant {
    knots_x: Vec<f64>,
    knots_y: Vec<f64>,
}

impl ConcaveMajorant {
    pub fn knots_x(&self) -> &[f64] {
        &self.knots_x
    }

    pub fn knots_y(&self) -> &[f64] {
        &self.knots_y
    }

    /// Segment slopes, one per knot interval, strictly decreasing.
    pub fn slopes(&self) -> Vec<f64> {
        self.knots_x
            .windows(2)
            .zip(self.knots_y.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect()
    }

    /// Evaluate F̂ₙ(x) by linear interpolation between knots.
    pub fn eval(&self, x: f64) -> f64 {
        match self.knots_x.binary_search_by(|k| k.partial_cmp(&x).unwrap()) {
            Ok(i) => self.knots_y[i],
            Err(0) => self.knots_y[0],
            Err(i) if i >= self.knots_x.len() => *self.knots_y.last().unwrap(),
            Err(i) => {
                let (x0, x1) = (self.knots_x[i - 1], self.knots_x[i]);
                let (y0, y1) = (self.knots_y[i - 1], self.knots_y[i]);
                y0 + (y1 - y0) / (x1 - x0) * (x - x0)
            }
        }
    }

    /// The Grenander step density formed by this majorant's slopes.
    pub fn density(&self) -> GrenanderEstimate {
        let mut knots = self.knots_x.clone();
        let mut values = self.slopes();
        // Defensive merge of numerically tied slopes; the hull's collinearity
        // tolerance makes this rare.
        let mut i = 0;
        while i + 1 < values.len() {
            let scale = values[i].abs().max(values[i + 1].abs()).max(1.0);
            if (values[i] - values[i + 1]).abs() < SLOPE_MERGE_REL_TOL * scale {
                let w0 = knots[i + 1] - knots[i];
                let w1 = knots[i + 2] - knots[i + 1];
                values[i] = (values[i] * w0 + values[i + 1] * w1) / (w0 + w1);
                values.remove(i + 1);
                knots.remove(i + 1);
            } else {
                i += 1;
            }
        }
        GrenanderEstimate { knots, values }
    }
}

/// Build the least concave majorant: the upper concave hull of
/// {(0,0)} ∪ {(xᵢ, Fₙ(xᵢ))} ∪ {(1,1)}.
pub fn least_concave_majorant(ecdf: &EmpiricalCdf) -> ConcaveMajorant {
    let mut px = Vec::with_capacity(ecdf.jump_points.len() + 2);
    let mut py = Vec::with_capacity(ecdf.jump_points.len() + 2);
    px.push(0.0);
    py.push(0.0);
    px.extend_from_slice(&ecdf.jump_points);
    py.extend_from_slice(&ecdf.cumulative);
    if *px.last().unwrap() < 1.0 {
        px.push(1.0);
        py.push(1.0);
    } else {
        // A sample value of exactly 1 already carries the (1,1) corner.
        *py.last_mut().unwrap() = 1.0;
    }

    let mut hx: Vec<f64> = Vec::with_capacity(px.len());
    let mut hy: Vec<f64> = Vec::with_capacity(px.len());
    for (&x, &y) in px.iter().zip(&py) {
        while hx.len() >= 2 {
            let k = hx.len();
            // Middle point at or below the chord (within rounding of the
            // cross product itself): not a hull vertex.
            if middle_dominated(hx[k - 2], hy[k - 2], hx[k - 1], hy[k - 1], x, y) {
                hx.pop();
                hy.pop();
            } else {
                break;
            }
        }
        hx.push(x);
        hy.push(y);
    }

    ConcaveMajorant { knots_x: hx, knots_y: hy }
}

/// True when q lies on or below the chord p → r, judged by the orientation
/// cross product with tolerance relative to its own term magnitudes.
pub(crate) fn middle_dominated(px: f64, py: f64, qx: f64, qy: f64, rx: f64, ry: f64) -> bool {
    let t1 = (qx - px) * (ry - py);
    let t2 = (qy - py) * (rx - px);
    t1 - t2 >= -COLLINEAR_REL_TOL * (t1.abs() + t2.abs())
}

/// The Grenander estimator: a right-continuous step density constant on
/// [tᵢ₋₁, tᵢ) with strictly decreasing values, integrating to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrenanderEstimate {
    /// Piece boundaries t₀ = 0 < t₁ < … < tₖ = 1 (the majorant's knots).
    knots: Vec<f64>,
    /// One density value per piece (the majorant's slopes).
    values: Vec<f64>,
}

impl GrenanderEstimate {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Piece intervals with their values: ([tᵢ₋₁, tᵢ), vᵢ).
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.knots
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    /// f̂ₙ(x), right-continuous: the value of the piece containing x.
    pub fn eval_right(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain { what: "x", value: x, range: "[0, 1]" });
        }
        let i = self.knots.partition_point(|&k| k <= x);
        Ok(self.values[i.saturating_sub(1).min(self.values.len() - 1)])
    }

    /// f̂ₙ(x−), the left-limit version (the left derivative of the majorant):
    /// at a knot it takes the value of the piece ending there.
    pub fn eval_left(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::Domain { what: "x", value: x, range: "(0, 1]" });
        }
        let i = self.knots.partition_point(|&k| k < x);
        Ok(self.values[i.saturating_sub(1).min(self.values.len() - 1)])
    }

    /// ∫₀¹ f̂ₙ²(x)·x dx, exact: Σ vᵢ²(tᵢ² − tᵢ₋₁²)/2. Bounded by ½ for any
    /// nonincreasing density, and computed via v·t products so extreme first
    /// slopes cannot overflow.
    pub fn weighted_energy(&self) -> f64 {
        self.pieces()
            .map(|(lo, hi, v)| {
                let a = v * lo;
                let b = v * hi;
                (b * b - a * a) / 2.0
            })
            .sum()
    }

    /// Total mass Σ vᵢ·(tᵢ − tᵢ₋₁); equals 1 up to rounding.
    pub fn mass(&self) -> f64 {
        self.pieces().map(|(lo, hi, v)| v * (hi - lo)).sum()
    }

    /// Write `t,value` rows suitable for step plots: each piece's left edge
    /// with its value, then the right endpoint repeating the last value.
    pub fn to_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,value")?;
        for (lo, _, v) in self.pieces() {
            writeln!(w, "{lo},{v}")?;
        }
        writeln!(w, "1,{}", self.values.last().unwrap())
    }
}
