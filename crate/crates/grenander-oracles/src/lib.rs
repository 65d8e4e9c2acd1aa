//! Brute-force reference implementations for tests.
//!
//! Nothing here is fast and nothing here is used by production code: these
//! exist so the real algorithms can be checked against an independent,
//! obviously-correct construction. Production crates must only list this
//! crate under dev-dependencies.

/// Relative collinearity tolerance: a cross product within this fraction of
/// its own term magnitudes counts as zero. Relative, not absolute, because
/// clustered points produce tiny crosses for genuinely non-collinear turns.
pub const COLLINEAR_REL_TOL: f64 = 1e-14;

/// Hard cap on input size for the O(n³) hull oracle.
pub const HULL_ORACLE_MAX_POINTS: usize = 200;

/// The minimal-knot upper concave envelope of points sorted by strictly
/// increasing x, by exhaustion: a point survives iff no chord between a point
/// on its left and a point on its right passes at or above it. Endpoints
/// always survive. Collinear interior points are dropped, matching the
/// fewest-knot convention.
///
/// Panics if the input exceeds [`HULL_ORACLE_MAX_POINTS`] or x is not
/// strictly increasing.
pub fn hull_oracle(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    assert!(
        points.len() <= HULL_ORACLE_MAX_POINTS,
        "hull oracle capped at {HULL_ORACLE_MAX_POINTS} points"
    );
    assert!(points.windows(2).all(|w| w[0].0 < w[1].0), "x must be strictly increasing");
    let n = points.len();
    if n <= 2 {
        return points.to_vec();
    }
    let mut knots = vec![points[0]];
    'candidate: for i in 1..n - 1 {
        let (xi, yi) = points[i];
        for j in 0..i {
            for k in i + 1..n {
                let (xj, yj) = points[j];
                let (xk, yk) = points[k];
                // signed area of j → i → k; at or below the chord means i is
                // dominated (or collinear) and cannot be a knot
                let t1 = (xi - xj) * (yk - yj);
                let t2 = (yi - yj) * (xk - xj);
                if t1 - t2 >= -COLLINEAR_REL_TOL * (t1.abs() + t2.abs()) {
                    continue 'candidate;
                }
            }
        }
        knots.push(points[i]);
    }
    knots.push(points[n - 1]);
    knots
}

/// Supremum of |f| over a uniform grid of `resolution` cells on [a, b].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSup {
    pub max_abs: f64,
    /// Grid point where the maximum was seen.
    pub x_at: f64,
    /// Cell width, for refining around `x_at`.
    pub cell: f64,
}

pub fn grid_sup(f: impl Fn(f64) -> f64, a: f64, b: f64, resolution: usize) -> GridSup {
    assert!(resolution >= 1000, "grid too coarse to be an oracle");
    assert!(a < b);
    let cell = (b - a) / resolution as f64;
    let mut best = GridSup { max_abs: f64::NEG_INFINITY, x_at: a, cell };
    for i in 0..=resolution {
        let x = if i == resolution { b } else { a + i as f64 * cell };
        let v = f(x).abs();
        if v > best.max_abs {
            best = GridSup { max_abs: v, x_at: x, cell };
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadError {
    /// Refinement toward some point kept increasing the local estimate all
    /// the way to the depth cap, or partial sums ran away: the integral
    /// diverges.
    Divergent { partial: f64 },
    /// The depth cap was hit without meeting the tolerance (but with no sign
    /// of divergence). Carries the best estimate and its error bound.
    MaxDepth { estimate: f64, error_estimate: f64 },
}

impl std::fmt::Display for QuadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Divergent { partial } => {
                write!(f, "integral diverges (partial sums near {partial:e})")
            }
            Self::MaxDepth { estimate, error_estimate } => write!(
                f,
                "no convergence at depth cap: estimate {estimate} ± {error_estimate:e}"
            ),
        }
    }
}

impl std::error::Error for QuadError {}

const MAX_DEPTH: u32 = 40;
/// Runaway partial-sum guard: integrals this large are divergent for every
/// integrand this suite ever feeds the oracle.
const RUNAWAY_SUM: f64 = 1e6;

/// Adaptive quadrature of `f` on [a, b] to roughly `rel_tol` relative error,
/// for piecewise-smooth integrands. The underlying rule is the midpoint rule
/// with Richardson refinement, so interval endpoints are never evaluated and
/// an integrable endpoint singularity is survivable.
///
/// Divergence is reported when bisection toward a point keeps *increasing*
/// the local single-cell estimate at the depth cap (for x^(−p) blow-ups this
/// distinguishes p > 1 from the integrable p < 1), or when partial sums run
/// away beyond [`RUNAWAY_SUM`].
pub fn adaptive_quadrature(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64, QuadError> {
    assert!(a < b, "need a < b");
    assert!(rel_tol > 0.0);

    // crude scale from a fixed 32-cell composite, for the absolute budget
    let crude: f64 = {
        let h = (b - a) / 32.0;
        (0..32).map(|i| h * f(a + (i as f64 + 0.5) * h).abs()).sum()
    };
    let budget = rel_tol * crude.max(1e-12);

    struct Frame {
        a: f64,
        b: f64,
        est: f64,
        eps: f64,
        depth: u32,
    }

    let mid = |lo: f64, hi: f64| (hi - lo) * f((lo + hi) / 2.0);

    let mut total = 0.0;
    let mut err_accum = 0.0;
    let mut divergent = false;
    let mut stack = vec![Frame { a, b, est: mid(a, b), eps: budget, depth: 0 }];

    while let Some(fr) = stack.pop() {
        let m = (fr.a + fr.b) / 2.0;
        let left = mid(fr.a, m);
        let right = mid(m, fr.b);
        let refined = left + right;
        let delta = refined - fr.est;
        if delta.abs() <= 3.0 * fr.eps || fr.b - fr.a < 1e-15 {
            // Richardson: midpoint error shrinks 4× per halving
            total += refined + delta / 3.0;
            err_accum += delta.abs() / 3.0;
        } else if fr.depth >= MAX_DEPTH {
            total += refined;
            err_accum += delta.abs();
            // a child cell whose own estimate exceeds the parent's marks a
            // non-integrable blow-up
            if left.abs() > fr.est.abs() * (1.0 + 1e-9)
                || right.abs() > fr.est.abs() * (1.0 + 1e-9)
            {
                divergent = true;
            }
        } else {
            stack.push(Frame { a: fr.a, b: m, est: left, eps: fr.eps / 2.0, depth: fr.depth + 1 });
            stack.push(Frame { a: m, b: fr.b, est: right, eps: fr.eps / 2.0, depth: fr.depth + 1 });
        }
        if total.abs() > RUNAWAY_SUM {
            return Err(QuadError::Divergent { partial: total });
        }
    }

    if divergent {
        return Err(QuadError::Divergent { partial: total });
    }
    if err_accum > rel_tol * total.abs().max(1e-12) {
        return Err(QuadError::MaxDepth { estimate: total, error_estimate: err_accum });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hull_keeps_concave_chain() {
        let pts = [(0.0, 0.0), (0.4, 0.7), (1.0, 1.0)];
        assert_eq!(hull_oracle(&pts), pts.to_vec());
    }

    #[test]
    fn hull_drops_point_below_chord() {
        let pts = [(0.0, 0.0), (0.5, 0.3), (1.0, 1.0)];
        assert_eq!(hull_oracle(&pts), vec![(0.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn hull_drops_collinear_point() {
        let pts = [(0.0, 0.0), (0.5, 0.5), (1.0, 1.0)];
        assert_eq!(hull_oracle(&pts), vec![(0.0, 0.0), (1.0, 1.0)]);
    }

    #[test]
    fn hull_mixed() {
        let pts = [(0.0, 0.0), (0.1, 0.5), (0.3, 0.55), (0.6, 0.9), (0.8, 0.8), (1.0, 1.0)];
        let hull = hull_oracle(&pts);
        assert_eq!(hull.first().unwrap(), &(0.0, 0.0));
        assert_eq!(hull.last().unwrap(), &(1.0, 1.0));
        // every input point must sit at or below every hull segment spanning it
        for &(x, y) in &pts {
            for w in hull.windows(2) {
                let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                if x0 <= x && x <= x1 {
                    let line = y0 + (y1 - y0) / (x1 - x0) * (x - x0);
                    assert!(y <= line + 1e-12);
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "capped")]
    fn hull_rejects_oversize() {
        let pts: Vec<(f64, f64)> = (0..201).map(|i| (i as f64, 0.0)).collect();
        hull_oracle(&pts);
    }

    #[test]
    fn grid_sup_constant_and_ramp() {
        let c = grid_sup(|_| -0.7, 0.0, 1.0, 1000);
        assert_eq!(c.max_abs, 0.7);
        let r = grid_sup(|x| x, 0.0, 1.0, 1000);
        assert_eq!(r.max_abs, 1.0);
        assert_eq!(r.x_at, 1.0);
    }

    #[test]
    fn quad_linear_is_exact() {
        let v = adaptive_quadrature(|x| x, 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quad_smooth() {
        let v = adaptive_quadrature(|x| (4.0 * x).sin(), 0.0, 1.0, 1e-10).unwrap();
        let exact = (1.0 - (4.0_f64).cos()) / 4.0;
        assert!((v - exact).abs() < 1e-9 * exact.abs());
    }

    #[test]
    fn quad_integrable_endpoint_singularity() {
        // ∫₀¹ x·((0.25)x^(−0.75))² dx = 0.0625·∫ x^(−1/2) = 0.125
        let v = adaptive_quadrature(|x| 0.0625 * x.powf(-0.5), 0.0, 1.0, 1e-6).unwrap();
        assert!((v - 0.125).abs() < 1e-6 * 0.125, "got {v}");
    }

    #[test]
    fn quad_detects_divergence() {
        // ∫₀¹ ((0.25)x^(−0.75))² dx = 0.0625·∫ x^(−3/2) = +∞
        let r = adaptive_quadrature(|x| 0.0625 * x.powf(-1.5), 0.0, 1.0, 1e-8);
        assert!(matches!(r, Err(QuadError::Divergent { .. })), "got {r:?}");
    }

    #[test]
    fn quad_flags_unmet_tolerance() {
        // integrable singularity, but 1e-12 relative is unreachable at the
        // depth cap
        let r = adaptive_quadrature(|x| x.powf(-0.5), 0.0, 1.0, 1e-12);
        assert!(matches!(r, Err(QuadError::MaxDepth { .. })), "got {r:?}");
    }
}
