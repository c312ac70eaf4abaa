//! Closed-form catalog of reference submanifolds with exactly known second
//! fundamental forms: round spheres, sphere-over-line cylinders, and
//! circle-times-sphere Clifford products. These serve as ground truth for the
//! numerical immersion pipeline and as the sharpness witnesses for the
//! pinching thresholds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::immersion::ImmersionSpec;
use crate::tensor::{AmbientSpec, SecondFundamentalForm};

/// A catalog model. All three are codimension-one inside their space form.
///
/// * `RoundSphere{n, r}` — `S^n(r)` in Euclidean space.
/// * `SphericalCylinder{n, h0}` — `S^{n-1}((n-1)/(n h0)) x R` in Euclidean
///   space; `h0` is its constant mean curvature.
/// * `CliffordProduct{n, lambda}` — `S^1(1/sqrt(1+lambda^2)) x
///   S^{n-1}(lambda/sqrt(1+lambda^2))` inside the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelId {
    RoundSphere { n: usize, r: f64 },
    SphericalCylinder { n: usize, h0: f64 },
    CliffordProduct { n: usize, lambda: f64 },
}

impl ModelId {
    pub fn validate(&self) -> Result<()> {
        let (n, param, what) = match *self {
            ModelId::RoundSphere { n, r } => (n, r, "radius r"),
            ModelId::SphericalCylinder { n, h0 } => (n, h0, "mean curvature h0"),
            ModelId::CliffordProduct { n, lambda } => (n, lambda, "parameter lambda"),
        };
        if n < 2 {
            return Err(Error::BadModelParameter(format!(
                "model dimension must be >= 2, got {n}"
            )));
        }
        if !param.is_finite() || param <= 0.0 {
            return Err(Error::BadModelParameter(format!(
                "{what} must be positive and finite, got {param}"
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        match *self {
            ModelId::RoundSphere { n, .. }
            | ModelId::SphericalCylinder { n, .. }
            | ModelId::CliffordProduct { n, .. } => n,
        }
    }

    /// Short display name used in reports and CSV rows.
    pub fn label(&self) -> String {
        match *self {
            ModelId::RoundSphere { n, r } => format!("round_sphere(n={n}, r={r})"),
            ModelId::SphericalCylinder { n, h0 } => {
                format!("spherical_cylinder(n={n}, h0={h0})")
            }
            ModelId::CliffordProduct { n, lambda } => {
                format!("clifford_product(n={n}, lambda={lambda})")
            }
        }
    }
}

/// Exact second fundamental form and ambient for a catalog model, in the
/// adapted principal-curvature frame.
///
/// Sign convention: the Clifford product stores principal curvatures
/// `(lambda, -1/lambda, ...)`, whose signed trace can be negative; the mean
/// curvature is reported as a norm by `SecondFundamentalForm::mean_curvature`.
pub fn exact_h(model: &ModelId) -> Result<(SecondFundamentalForm, AmbientSpec)> {
    model.validate()?;
    match *model {
        ModelId::RoundSphere { n, r } => Ok((
            SecondFundamentalForm::umbilic(n, 1.0 / r)?,
            AmbientSpec::space_form(0.0)?,
        )),
        ModelId::SphericalCylinder { n, h0 } => {
            let k = n as f64 * h0 / (n as f64 - 1.0);
            let mut pc = vec![k; n - 1];
            pc.push(0.0);
            Ok((
                SecondFundamentalForm::from_principal_curvatures(&pc)?,
                AmbientSpec::space_form(0.0)?,
            ))
        }
        ModelId::CliffordProduct { n, lambda } => {
            let mut pc = vec![-1.0 / lambda; n];
            pc[0] = lambda;
            Ok((
                SecondFundamentalForm::from_principal_curvatures(&pc)?,
                AmbientSpec::space_form(1.0)?,
            ))
        }
    }
}

/// Component strings of the standard spherical-coordinate embedding of a
/// `k`-angle unit sphere (`S^k` in `R^{k+1}`), each scaled by `scale`. The
/// angles are the parameters named in `angles`.
fn spherical_components(scale: f64, angles: &[String]) -> Vec<String> {
    let k = angles.len();
    let mut comps = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let mut factors: Vec<String> = vec![format!("{scale:?}")];
        for a in angles.iter().take(i) {
            factors.push(format!("sin({a})"));
        }
        if i < k {
            factors.push(format!("cos({})", angles[i]));
        }
        comps.push(factors.join("*"));
    }
    comps
}

/// Interior interval of the polar angles where the spherical-coordinate
/// parametrizations stay full rank.
const ANGLE_BOX: (f64, f64) = (0.4, 2.7);

/// Standard trigonometric parametrization of a catalog model, for
/// cross-validating the numerical pipeline against [`exact_h`].
pub fn as_immersion(model: &ModelId, grid: usize) -> Result<ImmersionSpec> {
    model.validate()?;
    let angle_names = |from: usize, count: usize| -> Vec<String> {
        (0..count).map(|k| format!("u{}", from + k)).collect()
    };
    match *model {
        ModelId::RoundSphere { n, r } => {
            let map = spherical_components(r, &angle_names(1, n));
            let domain = vec![ANGLE_BOX; n];
            ImmersionSpec::new(map, domain, grid, AmbientSpec::space_form(0.0)?)
        }
        ModelId::SphericalCylinder { n, h0 } => {
            let rho = (n as f64 - 1.0) / (n as f64 * h0);
            let mut map = spherical_components(rho, &angle_names(1, n - 1));
            map.push(format!("u{n}"));
            let mut domain = vec![ANGLE_BOX; n - 1];
            domain.push((-1.0, 1.0));
            ImmersionSpec::new(map, domain, grid, AmbientSpec::space_form(0.0)?)
        }
        ModelId::CliffordProduct { n, lambda } => {
            let a = 1.0 / (1.0 + lambda * lambda).sqrt();
            let b = lambda * a;
            let mut map = vec![format!("{a:?}*cos(u1)"), format!("{a:?}*sin(u1)")];
            map.extend(spherical_components(b, &angle_names(2, n - 1)));
            let domain = vec![ANGLE_BOX; n];
            ImmersionSpec::new(map, domain, grid, AmbientSpec::space_form(1.0)?)
        }
    }
}

/// A witness that the Clifford family gets arbitrarily close to the sharp
/// threshold: for `eps > 0` it returns a parameter whose margin
/// `S - n^2 H^2/(n-1) - 2` lies strictly inside `(0, eps)` when `n >= 3`.
/// For `n = 2` the margin coefficient vanishes and the margin is exactly 0.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessCertificate {
    pub n: usize,
    pub eps: f64,
    pub lambda: f64,
    /// `S - n^2 H^2 / (n-1) - 2c` computed from the exact form.
    pub margin: f64,
    /// Margin strictly inside `(0, eps)`; always false for `n = 2`.
    pub strict: bool,
}

pub fn sharpness_certificate(n: usize, eps: f64) -> Result<SharpnessCertificate> {
    if n < 2 {
        return Err(Error::BadModelParameter(format!(
            "dimension must be >= 2, got {n}"
        )));
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::BadArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    const BACKOFF: f64 = 1e-6;
    let nf = n as f64;
    let lambda = if n == 2 {
        1.0
    } else {
        (eps * (nf - 1.0) / (nf - 2.0) * (1.0 - BACKOFF)).sqrt()
    };
    let model = ModelId::CliffordProduct { n, lambda };
    let (h, amb) = exact_h(&model)?;
    let s = h.squared_norm();
    let hm = h.mean_curvature();
    let c = amb.curvature().expect("catalog ambients are space forms");
    let margin = s - nf * nf * hm * hm / (nf - 1.0) - 2.0 * c;
    Ok(SharpnessCertificate {
        n,
        eps,
        lambda,
        margin,
        strict: margin > 0.0 && margin < eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::immersion::sample_manifold;
    use crate::tensor::gauss_curvature;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn cylinder_matches_printed_invariants() {
        for n in 2..=8 {
            for &h0 in &[0.5, 1.0, 2.0] {
                let (h, amb) = exact_h(&ModelId::SphericalCylinder { n, h0 }).unwrap();
                assert_eq!(amb, AmbientSpec::SpaceForm { c: 0.0 });
                assert!(close(h.mean_curvature(), h0, 1e-13));
                let nf = n as f64;
                assert!(close(
                    h.squared_norm(),
                    nf * nf * h0 * h0 / (nf - 1.0),
                    1e-11
                ));
            }
        }
    }

    #[test]
    fn clifford_margin_formula() {
        for n in 2..=8 {
            for &lambda in &[0.25, 0.5, 1.0, 2.0, 4.0] {
                let (h, amb) = exact_h(&ModelId::CliffordProduct { n, lambda }).unwrap();
                let nf = n as f64;
                let c = amb.curvature().unwrap();
                assert_eq!(c, 1.0);
                let margin =
                    h.squared_norm() - nf * nf * h.mean_curvature().powi(2) / (nf - 1.0) - 2.0 * c;
                let expected = (nf - 2.0) / (nf - 1.0) * lambda * lambda;
                assert!(
                    close(margin, expected, 1e-10),
                    "n={n} lambda={lambda}: {margin} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn clifford_three_one_values() {
        let (h, _) = exact_h(&ModelId::CliffordProduct { n: 3, lambda: 1.0 }).unwrap();
        assert!(close(h.mean_curvature(), 1.0 / 3.0, 1e-15));
        assert!(close(h.squared_norm(), 3.0, 1e-15));
    }

    #[test]
    fn every_model_satisfies_the_trace_inequality() {
        let models = [
            ModelId::RoundSphere { n: 4, r: 0.7 },
            ModelId::SphericalCylinder { n: 5, h0: 1.3 },
            ModelId::CliffordProduct { n: 6, lambda: 0.4 },
        ];
        for m in models {
            let (h, _) = exact_h(&m).unwrap();
            let s = h.squared_norm();
            let hm = h.mean_curvature();
            assert!(s + 1e-12 >= h.n() as f64 * hm * hm, "{}", m.label());
        }
    }

    #[test]
    fn immersion_agrees_with_exact_form() {
        // Frame-invariant comparison on one sample point per model.
        let models = [
            ModelId::RoundSphere { n: 2, r: 1.0 },
            ModelId::SphericalCylinder { n: 2, h0: 1.0 },
            ModelId::CliffordProduct { n: 2, lambda: 1.0 },
        ];
        for m in models {
            let (hx, _) = exact_h(&m).unwrap();
            let spec = as_immersion(&m, 3).unwrap();
            let pts = sample_manifold(&spec, None).unwrap();
            assert!(!pts.is_empty());
            for pd in &pts {
                assert!(
                    close(pd.h.squared_norm(), hx.squared_norm(), 1e-4),
                    "{}: S {} vs {}",
                    m.label(),
                    pd.h.squared_norm(),
                    hx.squared_norm()
                );
                assert!(close(pd.h.mean_curvature(), hx.mean_curvature(), 1e-4));
                let en = pd.h.squared_operator_eigenvalues();
                let ex = hx.squared_operator_eigenvalues();
                for (a, b) in en.iter().zip(ex.iter()) {
                    assert!(close(*a, *b, 1e-4));
                }
            }

            // The stable-current maximum is frame-invariant too.
            let budget = crate::frame_search::SearchBudget {
                restarts: 8,
                seed: 42,
                max_iters: 300,
            };
            let exact_max = crate::frame_search::max_lawson_simons(&hx, 1, &budget)
                .unwrap()
                .value;
            let numeric_max = crate::frame_search::max_lawson_simons(&pts[0].h, 1, &budget)
                .unwrap()
                .value;
            assert!(
                close(exact_max, numeric_max, 1e-4),
                "{}: current max {exact_max} vs {numeric_max}",
                m.label()
            );
        }
    }

    #[test]
    fn cylinder_mu_vanishes() {
        // The cylinder sits exactly on the threshold: both the S-side margin
        // and the scalar-curvature-side margin are zero.
        for n in 2..=6 {
            let (h, amb) = exact_h(&ModelId::SphericalCylinder { n, h0: 1.0 }).unwrap();
            let nf = n as f64;
            let s = h.squared_norm();
            let hm = h.mean_curvature();
            let lambda_margin = s - nf * nf * hm * hm / (nf - 1.0);
            assert!(lambda_margin.abs() <= 1e-12);
            let r = gauss_curvature(&h, &amb).unwrap().scalar_curvature();
            let mu_margin = r - nf * nf * (nf - 2.0) * hm * hm / (nf - 1.0);
            assert!(mu_margin.abs() <= 1e-12, "n={n}: {mu_margin}");
        }
    }

    #[test]
    fn sharpness_certificates() {
        for n in 3..=6 {
            for &eps in &[0.5, 1e-3] {
                let cert = sharpness_certificate(n, eps).unwrap();
                assert!(cert.strict, "n={n} eps={eps}: {cert:?}");
                assert!(cert.margin > 0.0 && cert.margin < eps);
            }
        }
        let flat = sharpness_certificate(2, 0.5).unwrap();
        assert_eq!(flat.margin, 0.0);
        assert!(!flat.strict);
        assert!(sharpness_certificate(3, 0.0).is_err());
        assert!(sharpness_certificate(3, -1.0).is_err());
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(exact_h(&ModelId::RoundSphere { n: 1, r: 1.0 }).is_err());
        assert!(exact_h(&ModelId::RoundSphere { n: 3, r: 0.0 }).is_err());
        assert!(exact_h(&ModelId::CliffordProduct { n: 3, lambda: -2.0 }).is_err());
        assert!(exact_h(&ModelId::SphericalCylinder { n: 4, h0: f64::NAN }).is_err());
    }

    #[test]
    fn model_serde_round_trip() {
        let m: ModelId =
            serde_json::from_str(r#"{"model": "clifford_product", "n": 3, "lambda": 1.0}"#)
                .unwrap();
        assert_eq!(m, ModelId::CliffordProduct { n: 3, lambda: 1.0 });
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("clifford_product"));
    }
}
