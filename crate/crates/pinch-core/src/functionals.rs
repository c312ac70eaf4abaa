//! Scalar pinching functionals evaluated from pointwise `(S, H, R, ambient)`
//! data: the `alpha` threshold and its minimum over mean curvature, the
//! sup/inf margins whose signs drive the sphere-type hypotheses, intrinsic
//! lower-bound certificates over embeddings, and the three-dimensional Ricci
//! lower bound.
//!
//! Conventions: `S` is the squared norm of the second fundamental form, `H`
//! the mean curvature (a norm, so `H >= 0`), `R` the unnormalized
//! double-trace scalar curvature, and `c >= 0` the space-form curvature.

use crate::error::{Error, Result};
use crate::tensor::AmbientSpec;

fn require_dim(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::BadDimension(format!(
            "functionals are defined for n >= 2, got {n}"
        )));
    }
    Ok(n as f64)
}

/// The curvature threshold
/// `alpha(n, H, c) = n c + n^3 H^2 / (2(n-1)) - n(n-2)/(2(n-1)) * sqrt(n^2 H^4 + 4(n-1) c H^2)`.
pub fn alpha(n: usize, h: f64, c: f64) -> Result<f64> {
    let nf = require_dim(n)?;
    if !h.is_finite() || h < 0.0 {
        return Err(Error::BadArgument(format!(
            "mean curvature must be >= 0, got {h}"
        )));
    }
    if !c.is_finite() || c < 0.0 {
        return Err(Error::NegativeAmbientCurvature(c));
    }
    let h2 = h * h;
    let radicand = nf * nf * h2 * h2 + 4.0 * (nf - 1.0) * c * h2;
    Ok(nf * c + nf.powi(3) * h2 / (2.0 * (nf - 1.0))
        - nf * (nf - 2.0) / (2.0 * (nf - 1.0)) * radicand.sqrt())
}

/// Slack of the bound `alpha(n, H, c) >= 2c + n^2 H^2 / (n-1)`, computed in a
/// cancellation-free product form so it is nonnegative in floating point:
/// `slack = 4 (n-1)(n-2) c^2 H^2 / (n H^2 + sqrt(n^2 H^4 + 4(n-1) c H^2))^2`.
pub fn alpha_gap_slack(n: usize, h: f64, c: f64) -> Result<f64> {
    let nf = require_dim(n)?;
    if !h.is_finite() || h < 0.0 || !c.is_finite() || c < 0.0 {
        return Err(Error::BadArgument(format!(
            "need H >= 0 and c >= 0, got H={h}, c={c}"
        )));
    }
    let h2 = h * h;
    let radicand = nf * nf * h2 * h2 + 4.0 * (nf - 1.0) * c * h2;
    let denom = {
        let d = nf * h2 + radicand.sqrt();
        d * d
    };
    if denom == 0.0 {
        // H = 0 (or an underflowed square): the gap degenerates to (n-2) c.
        return Ok((nf - 2.0) * c);
    }
    Ok(4.0 * (nf - 1.0) * (nf - 2.0) * c * c * h2 / denom)
}

fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Minimizes `alpha(n, ., c)` over the mean curvature by golden-section
/// search on `[0, 10(1 + sqrt(c))]`; `alpha` is convex in `H^2`, hence
/// unimodal in `H`, and grows like `n H^2` past the bracket.
///
/// Returns `(h_star, value)`; the value matches `2 sqrt(n-1) c` to well
/// under 1e-8.
pub fn alpha_min_over_h(n: usize, c: f64) -> Result<(f64, f64)> {
    require_dim(n)?;
    if !c.is_finite() || c < 0.0 {
        return Err(Error::NegativeAmbientCurvature(c));
    }
    let upper = 10.0 * (1.0 + c.sqrt());
    let f = |h: f64| alpha(n, h, c).expect("arguments validated");
    let (h_star, value) = golden_section_min(f, 0.0, upper, 120);
    // The boundary minimum at H = 0 (n = 2 or c = 0) beats the interior
    // midpoint estimate when the bracket never moved.
    let f0 = f(0.0);
    if f0 <= value {
        return Ok((0.0, f0));
    }
    Ok((h_star, value))
}

/// Pointwise margin `S - n^2 H^2 / (n-1) - 2c`; its supremum over the
/// manifold must be negative for the space-form pinching hypothesis.
pub fn lambda_margin(s: f64, h: f64, n: usize, c: f64) -> f64 {
    let nf = n as f64;
    s - nf * nf * h * h / (nf - 1.0) - 2.0 * c
}

/// Sampled supremum of [`lambda_margin`] over `(S, H)` points.
pub fn lambda_pinch(points: &[(f64, f64)], n: usize, c: f64) -> Result<f64> {
    require_dim(n)?;
    if points.is_empty() {
        return Err(Error::EmptyInput(
            "lambda_pinch needs at least one point".into(),
        ));
    }
    Ok(points
        .iter()
        .map(|&(s, h)| lambda_margin(s, h, n, c))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Pointwise margin `R - n^2 (n-2) H^2 / (n-1) - (n+1)(n-2) c`; the
/// scalar-curvature side of the same pinching condition.
pub fn mu_margin(r_scalar: f64, h: f64, n: usize, c: f64) -> f64 {
    let nf = n as f64;
    r_scalar - nf * nf * (nf - 2.0) * h * h / (nf - 1.0) - (nf + 1.0) * (nf - 2.0) * c
}

/// Sampled infimum of [`mu_margin`] over `(R, H)` points.
pub fn mu_pinch(points: &[(f64, f64)], n: usize, c: f64) -> Result<f64> {
    require_dim(n)?;
    if points.is_empty() {
        return Err(Error::EmptyInput(
            "mu_pinch needs at least one point".into(),
        ));
    }
    Ok(points
        .iter()
        .map(|&(r, h)| mu_margin(r, h, n, c))
        .fold(f64::INFINITY, f64::min))
}

/// Pointwise scalar data of one isometric embedding of a fixed manifold.
#[derive(Debug, Clone)]
pub struct EmbeddingData {
    pub n: usize,
    pub c: f64,
    /// `(scalar_curvature, mean_curvature)` per sample point.
    pub points: Vec<(f64, f64)>,
}

/// Best (largest) `mu` infimum over the supplied embeddings: a lower-bound
/// certificate for the intrinsic invariant defined as the supremum over all
/// isometric embeddings, which no finite computation can take. When every
/// ambient is Euclidean the same value certifies the Euclidean-only variant.
pub fn invariant_certificate(embeddings: &[EmbeddingData]) -> Result<f64> {
    if embeddings.is_empty() {
        return Err(Error::EmptyInput(
            "invariant_certificate needs at least one embedding".into(),
        ));
    }
    let mut best = f64::NEG_INFINITY;
    for e in embeddings {
        best = best.max(mu_pinch(&e.points, e.n, e.c)?);
    }
    Ok(best)
}

/// Margin of the bounded-ambient hypothesis
/// `S < 8/3 (Kmin - Kmax/4) + n^2 H^2 / (n-1)`, as RHS minus S. For a space
/// form the ambient term collapses to `2c`.
pub fn bounded_ambient_margin(s: f64, h: f64, n: usize, ambient: &AmbientSpec) -> f64 {
    let nf = n as f64;
    8.0 / 3.0 * (ambient.kmin() - 0.25 * ambient.kmax()) + nf * nf * h * h / (nf - 1.0) - s
}

/// Margin of the three-dimensional hypothesis `S < 2c + (9/2) H^2`.
pub fn three_dim_margin(s: f64, h: f64, c: f64) -> f64 {
    2.0 * c + 4.5 * h * h - s
}

/// Margin of the hypersurface-style hypothesis `S < 2c + n^2 H^2 / (n-1)`.
pub fn hypersurface_margin(s: f64, h: f64, n: usize, c: f64) -> f64 {
    let nf = n as f64;
    2.0 * c + nf * nf * h * h / (nf - 1.0) - s
}

/// Margin of the alpha-threshold hypothesis `sup(S - alpha) < 0`, as
/// `alpha(n, H, c) - S`.
pub fn alpha_margin(s: f64, h: f64, n: usize, c: f64) -> Result<f64> {
    Ok(alpha(n, h, c)? - s)
}

/// Dimension-gated thresholds on `sup S` alone: `2 sqrt(n-1) c` for
/// `4 <= n <= 6` and `2 sqrt(2) c` for `n >= 7` (the latter printed without
/// any further n-dependence).
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SupThresholds {
    pub mid_applicable: bool,
    pub mid_margin: f64,
    pub mid_holds: bool,
    pub high_applicable: bool,
    pub high_margin: f64,
    pub high_holds: bool,
}

pub fn sup_norm_thresholds(s_sup: f64, n: usize, c: f64) -> SupThresholds {
    let nf = n as f64;
    let mid_applicable = (4..=6).contains(&n);
    let high_applicable = n >= 7;
    let mid_margin = 2.0 * (nf - 1.0).sqrt() * c - s_sup;
    let high_margin = 2.0 * 2.0f64.sqrt() * c - s_sup;
    SupThresholds {
        mid_applicable,
        mid_margin,
        mid_holds: mid_applicable && mid_margin > 0.0,
        high_applicable,
        high_margin,
        high_holds: high_applicable && high_margin > 0.0,
    }
}

/// Three-dimensional Ricci lower bound from `(S, H, c)`:
/// `Ric >= (2/3) [3c + 6H^2 - S - (3/sqrt(6)) H sqrt(S - 3H^2)]`
/// for every unit tangent vector. Requires `S >= 3 H^2`, which every genuine
/// second fundamental form satisfies.
pub fn ricci_lower_bound_3d(s: f64, h: f64, c: f64) -> Result<f64> {
    let excess = s - 3.0 * h * h;
    let scale = s.abs().max(3.0 * h * h).max(1.0);
    if excess < -1e-9 * scale {
        return Err(Error::InconsistentInput(format!(
            "S = {s} is below 3 H^2 = {}",
            3.0 * h * h
        )));
    }
    let excess = excess.max(0.0);
    Ok(2.0 / 3.0 * (3.0 * c + 6.0 * h * h - s - 3.0 / 6.0f64.sqrt() * h * excess.sqrt()))
}
