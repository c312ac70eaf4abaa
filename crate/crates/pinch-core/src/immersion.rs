//! Numerical recovery of adapted frames and second fundamental forms at
//! sample points of a parametrized immersion into Euclidean space or a
//! round sphere.
//!
//! Differentiation uses plain central differences, so the recovered
//! coefficients carry an O(step^2) error for C^3 maps; [`jet2_refined`]
//! applies one level of Richardson extrapolation on top when a caller wants
//! the sharper estimate at the same stencil width.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::tensor::{AmbientSpec, SecondFundamentalForm};

/// Tolerance for the spherical-ambient constraint `| |f|^2 - 1/c |`.
pub const SPHERE_TOL: f64 = 1e-8;

/// Default differentiation step: 1e-4 times the widest box axis.
pub const DEFAULT_STEP_FACTOR: f64 = 1e-4;

/// Residual-norm ratio below which the tangent directions are treated as
/// linearly dependent.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawImmersion {
    map: Vec<String>,
    #[serde(rename = "box")]
    domain: Vec<[f64; 2]>,
    grid: usize,
    ambient: AmbientSpec,
}

/// A parametrized immersion of a coordinate box, declared as expression
/// strings so it can live entirely in a data file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawImmersion", into = "RawImmersion")]
pub struct ImmersionSpec {
    n: usize,
    p: usize,
    map_src: Vec<String>,
    #[allow(clippy::vec_box)]
    map: Vec<Expr>,
    domain: Vec<(f64, f64)>,
    grid: usize,
    ambient: AmbientSpec,
}

impl TryFrom<RawImmersion> for ImmersionSpec {
    type Error = Error;

    fn try_from(raw: RawImmersion) -> Result<Self> {
        ImmersionSpec::new(
            raw.map,
            raw.domain.iter().map(|b| (b[0], b[1])).collect(),
            raw.grid,
            raw.ambient,
        )
    }
}

impl From<ImmersionSpec> for RawImmersion {
    fn from(spec: ImmersionSpec) -> Self {
        RawImmersion {
            map: spec.map_src,
            domain: spec.domain.iter().map(|&(lo, hi)| [lo, hi]).collect(),
            grid: spec.grid,
            ambient: spec.ambient,
        }
    }
}

impl ImmersionSpec {
    pub fn new(
        map_src: Vec<String>,
        domain: Vec<(f64, f64)>,
        grid: usize,
        ambient: AmbientSpec,
    ) -> Result<Self> {
        let n = domain.len();
        if n == 0 {
            return Err(Error::BadMap(
                "domain box must have at least one axis".into(),
            ));
        }
        for (axis, &(lo, hi)) in domain.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::BadGrid(format!(
                    "axis {axis}: need finite lo < hi, got [{lo}, {hi}]"
                )));
            }
        }
        if grid < 2 {
            return Err(Error::BadGrid(format!("grid must be >= 2, got {grid}")));
        }
        let m = map_src.len();
        let c = match ambient {
            AmbientSpec::SpaceForm { c } => c,
            AmbientSpec::Bounds { .. } => {
                return Err(Error::BadMap(
                    "an immersion target must be a space form, not curvature bounds".into(),
                ))
            }
        };
        let p = if c == 0.0 {
            if m < n + 1 {
                return Err(Error::BadMap(format!(
                    "Euclidean target needs at least {} components for an {n}-dimensional domain, got {m}",
                    n + 1
                )));
            }
            m - n
        } else {
            if m < n + 2 {
                return Err(Error::BadMap(format!(
                    "spherical target needs at least {} components for an {n}-dimensional domain, got {m}",
                    n + 2
                )));
            }
            m - n - 1
        };
        let mut map = Vec::with_capacity(m);
        for (k, src) in map_src.iter().enumerate() {
            let expr = Expr::parse(src).map_err(|e| match e {
                Error::Parse { col, msg } => Error::Parse {
                    col,
                    msg: format!("map component {}: {msg}", k + 1),
                },
                other => other,
            })?;
            if expr.max_param() > n {
                return Err(Error::BadMap(format!(
                    "map component {} references u{} but the domain has {n} axes",
                    k + 1,
                    expr.max_param()
                )));
            }
            map.push(expr);
        }
        Ok(Self {
            n,
            p,
            map_src,
            map,
            domain,
            grid,
            ambient,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Codimension of the immersed submanifold inside its space form.
    pub fn p(&self) -> usize {
        self.p
    }

    /// Dimension of the Euclidean space the map lands in.
    pub fn target_dim(&self) -> usize {
        self.map.len()
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn ambient(&self) -> &AmbientSpec {
        &self.ambient
    }

    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    pub fn map_sources(&self) -> &[String] {
        &self.map_src
    }

    pub fn default_step(&self) -> f64 {
        let widest = self
            .domain
            .iter()
            .map(|&(lo, hi)| hi - lo)
            .fold(0.0f64, f64::max);
        DEFAULT_STEP_FACTOR * widest
    }

    pub fn eval(&self, u: &[f64]) -> Result<DVector<f64>> {
        if u.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, domain has {}",
                u.len(),
                self.n
            )));
        }
        let v = DVector::from_fn(self.map.len(), |k, _| self.map[k].eval(u));
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteEvaluation { point: u.to_vec() });
        }
        Ok(v)
    }

    /// Interior grid nodes (boundary nodes are skipped: the stencils are
    /// central-only), in row-major axis order.
    pub fn interior_nodes(&self) -> Vec<Vec<f64>> {
        let per_axis: Vec<Vec<f64>> = self
            .domain
            .iter()
            .map(|&(lo, hi)| {
                (1..self.grid.saturating_sub(1))
                    .map(|t| lo + (hi - lo) * t as f64 / (self.grid - 1) as f64)
                    .collect()
            })
            .collect();
        let mut nodes = vec![Vec::new()];
        for axis in &per_axis {
            let mut next = Vec::with_capacity(nodes.len() * axis.len());
            for base in &nodes {
                for &v in axis {
                    let mut node = base.clone();
                    node.push(v);
                    next.push(node);
                }
            }
            nodes = next;
        }
        if per_axis.iter().any(|a| a.is_empty()) {
            return Vec::new();
        }
        nodes
    }
}

/// Value, first partials, and second partials of the map at one point.
#[derive(Debug, Clone)]
pub struct Jet2 {
    pub value: DVector<f64>,
    pub first: Vec<DVector<f64>>,
    pub second: Vec<Vec<DVector<f64>>>,
}

fn check_interior(spec: &ImmersionSpec, u: &[f64], step: f64) -> Result<()> {
    for (axis, &(lo, hi)) in spec.domain().iter().enumerate() {
        if u[axis] - lo < 2.0 * step || hi - u[axis] < 2.0 * step {
            return Err(Error::BoundaryTooClose {
                axis,
                point: u.to_vec(),
            });
        }
    }
    Ok(())
}

/// Central-difference first and second partials with an O(step^2) error
/// contract for C^3 maps. The point must sit at least `2 * step` inside the
/// box on every axis.
#[allow(clippy::needless_range_loop)] // symmetric (i, j) fill reads clearer indexed
pub fn jet2(spec: &ImmersionSpec, u: &[f64], step: f64) -> Result<Jet2> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::BadArgument(format!(
            "step must be positive, got {step}"
        )));
    }
    if u.len() != spec.n() {
        return Err(Error::DimensionMismatch(format!(
            "point has {} coordinates, domain has {}",
            u.len(),
            spec.n()
        )));
    }
    check_interior(spec, u, step)?;
    let n = spec.n();
    let value = spec.eval(u)?;

    let shifted = |deltas: &[(usize, f64)]| -> Result<DVector<f64>> {
        let mut v = u.to_vec();
        for &(axis, d) in deltas {
            v[axis] += d;
        }
        spec.eval(&v)
    };

    let mut first = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    for i in 0..n {
        let fp = shifted(&[(i, step)])?;
        let fm = shifted(&[(i, -step)])?;
        first.push((&fp - &fm) / (2.0 * step));
        diag.push((&fp - &value * 2.0 + &fm) / (step * step));
    }
    let mut second = vec![vec![DVector::zeros(spec.target_dim()); n]; n];
    for i in 0..n {
        second[i][i] = diag[i].clone();
        for j in (i + 1)..n {
            let fpp = shifted(&[(i, step), (j, step)])?;
            let fpm = shifted(&[(i, step), (j, -step)])?;
            let fmp = shifted(&[(i, -step), (j, step)])?;
            let fmm = shifted(&[(i, -step), (j, -step)])?;
            let mixed = (fpp - fpm - fmp + fmm) / (4.0 * step * step);
            second[i][j] = mixed.clone();
            second[j][i] = mixed;
        }
    }
    Ok(Jet2 {
        value,
        first,
        second,
    })
}

/// One Richardson level over [`jet2`]: combines stencils at `step` and
/// `step / 2`, cancelling the leading O(step^2) truncation term.
pub fn jet2_refined(spec: &ImmersionSpec, u: &[f64], step: f64) -> Result<Jet2> {
    let coarse = jet2(spec, u, step)?;
    let fine = jet2(spec, u, step / 2.0)?;
    let combine = |c: &DVector<f64>, f: &DVector<f64>| (f * 4.0 - c) / 3.0;
    let n = spec.n();
    let first = (0..n)
        .map(|i| combine(&coarse.first[i], &fine.first[i]))
        .collect();
    let second = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| combine(&coarse.second[i][j], &fine.second[i][j]))
                .collect()
        })
        .collect();
    Ok(Jet2 {
        value: fine.value,
        first,
        second,
    })
}

/// Tangent frame and normal frame produced by [`adapted_frames`].
pub type FramePair = (Vec<DVector<f64>>, Vec<DVector<f64>>);

fn orthonormalize_against(v: &mut DVector<f64>, basis: &[DVector<f64>]) {
    // Two projection passes keep the Gram defect near machine precision.
    for _ in 0..2 {
        for b in basis {
            let d = v.dot(b);
            *v -= b * d;
        }
    }
}

/// Builds an adapted orthonormal frame from the first partials: `n` tangent
/// vectors spanning the image of the differential and `p` normal vectors.
///
/// For a spherical ambient the position direction `f / |f|` is projected out
/// first, so the returned normals are tangent to the sphere; `position` is
/// required in that mode and ignored otherwise.
pub fn adapted_frames(
    first: &[DVector<f64>],
    ambient: &AmbientSpec,
    position: Option<&DVector<f64>>,
) -> Result<FramePair> {
    let n = first.len();
    if n == 0 {
        return Err(Error::BadArgument("no tangent directions supplied".into()));
    }
    let m = first[0].len();
    let c = match *ambient {
        AmbientSpec::SpaceForm { c } => c,
        AmbientSpec::Bounds { .. } => return Err(Error::BoundsAmbient),
    };

    // Modified Gram-Schmidt with pivoting over the tangent directions.
    let mut work: Vec<DVector<f64>> = first.to_vec();
    let scale = work.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let mut tangent: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    for _ in 0..n {
        let mut pivot = None;
        let mut best = -1.0;
        for (k, v) in work.iter().enumerate() {
            if !used[k] && v.norm() > best {
                best = v.norm();
                pivot = Some(k);
            }
        }
        let k = pivot.expect("pivot exists while tangents remain");
        if best <= RANK_TOL * scale {
            return Err(Error::RankDeficient {
                point: Vec::new(),
                cond: if best > 0.0 {
                    scale / best
                } else {
                    f64::INFINITY
                },
            });
        }
        used[k] = true;
        let mut v = work[k].clone();
        orthonormalize_against(&mut v, &tangent);
        let norm = v.norm();
        if norm <= RANK_TOL * scale {
            return Err(Error::RankDeficient {
                point: Vec::new(),
                cond: if norm > 0.0 {
                    scale / norm
                } else {
                    f64::INFINITY
                },
            });
        }
        v /= norm;
        for (j, w) in work.iter_mut().enumerate() {
            if !used[j] {
                let d = w.dot(&v);
                *w -= &v * d;
            }
        }
        tangent.push(v);
    }

    // Pool of directions the normals must avoid: the tangent space, plus the
    // sphere's position direction when the target is a round sphere.
    let mut pool = tangent.clone();
    if c > 0.0 {
        let pos = position.ok_or_else(|| {
            Error::BadArgument("spherical ambient requires the position vector".into())
        })?;
        let mut nu = pos.clone();
        orthonormalize_against(&mut nu, &pool);
        let norm = nu.norm();
        if norm <= 1e-8 * pos.norm().max(1.0) {
            return Err(Error::RankDeficient {
                point: Vec::new(),
                cond: f64::INFINITY,
            });
        }
        pool.push(nu / norm);
    }

    let p = m - pool.len();
    let mut normals: Vec<DVector<f64>> = Vec::with_capacity(p);
    for _ in 0..p {
        // Greedy pivot over the standard basis.
        let mut best_vec: Option<DVector<f64>> = None;
        let mut best = -1.0;
        for k in 0..m {
            let mut e = DVector::zeros(m);
            e[k] = 1.0;
            orthonormalize_against(&mut e, &pool);
            orthonormalize_against(&mut e, &normals);
            let norm = e.norm();
            if norm > best {
                best = norm;
                best_vec = Some(e);
            }
        }
        let mut v = best_vec.expect("standard basis is nonempty");
        v /= best;
        normals.push(v);
    }
    Ok((tangent, normals))
}

/// Frames, coefficients, and conditioning recovered at one sample point.
#[derive(Debug, Clone)]
pub struct PointData {
    pub u: Vec<f64>,
    pub tangent_frame: Vec<DVector<f64>>,
    pub normal_frame: Vec<DVector<f64>>,
    pub h: SecondFundamentalForm,
    pub metric_cond: f64,
}

/// Recovers the second fundamental form at `u`: second partials are projected
/// onto the adapted normal frame and re-expressed through the induced
/// metric's inverse so the coefficients refer to the orthonormal tangent
/// frame.
pub fn second_fundamental_form_at(spec: &ImmersionSpec, u: &[f64], step: f64) -> Result<PointData> {
    let jet = jet2(spec, u, step)?;
    point_data_from_jet(spec, u, jet)
}

/// Same as [`second_fundamental_form_at`] but with one Richardson level on
/// the partials.
pub fn second_fundamental_form_refined(
    spec: &ImmersionSpec,
    u: &[f64],
    step: f64,
) -> Result<PointData> {
    let jet = jet2_refined(spec, u, step)?;
    point_data_from_jet(spec, u, jet)
}

fn point_data_from_jet(spec: &ImmersionSpec, u: &[f64], jet: Jet2) -> Result<PointData> {
    let n = spec.n();
    if n < 2 {
        return Err(Error::BadDimension(
            "second fundamental forms need a domain of dimension >= 2".into(),
        ));
    }
    if let AmbientSpec::SpaceForm { c } = spec.ambient() {
        if *c > 0.0 {
            let dev = (jet.value.norm_squared() - 1.0 / c).abs();
            if dev > SPHERE_TOL {
                return Err(Error::SphereConstraint {
                    point: u.to_vec(),
                    deviation: dev,
                });
            }
        }
    }
    let (tangent, normals) =
        adapted_frames(&jet.first, spec.ambient(), Some(&jet.value)).map_err(|e| match e {
            Error::RankDeficient { cond, .. } => Error::RankDeficient {
                point: u.to_vec(),
                cond,
            },
            other => other,
        })?;

    let m = spec.target_dim();
    let jac = DMatrix::from_fn(m, n, |r, ci| jet.first[ci][r]);
    let metric = jac.transpose() * &jac;
    let eig = nalgebra::SymmetricEigen::new(metric.clone());
    let lmax = eig.eigenvalues.iter().fold(0.0f64, |a, &x| a.max(x));
    let lmin = eig.eigenvalues.iter().fold(f64::INFINITY, |a, &x| a.min(x));
    if lmin.is_nan() || lmin <= 1e-12 * lmax {
        return Err(Error::RankDeficient {
            point: u.to_vec(),
            cond: if lmin > 0.0 {
                lmax / lmin
            } else {
                f64::INFINITY
            },
        });
    }
    let metric_cond = lmax / lmin;
    let metric_inv = metric
        .try_inverse()
        .expect("metric is positive definite by the rank check");

    let t_mat = DMatrix::from_fn(m, n, |r, ci| tangent[ci][r]);
    // Change of basis: rows express the orthonormal frame in coordinate
    // directions, h^a = A B^a A^T with B^a the raw normal projections.
    let a = t_mat.transpose() * &jac * &metric_inv;

    let mut blocks = Vec::with_capacity(normals.len());
    for nu in &normals {
        let b = DMatrix::from_fn(n, n, |i, j| jet.second[i][j].dot(nu));
        blocks.push(&a * b * a.transpose());
    }
    let h = SecondFundamentalForm::new(blocks)?;
    Ok(PointData {
        u: u.to_vec(),
        tangent_frame: tangent,
        normal_frame: normals,
        h,
        metric_cond,
    })
}

/// Evaluates every interior grid node in deterministic row-major order.
/// Any pointwise failure is reported with the offending parameter point.
pub fn sample_manifold(spec: &ImmersionSpec, step: Option<f64>) -> Result<Vec<PointData>> {
    let step = step.unwrap_or_else(|| spec.default_step());
    let mut out = Vec::new();
    for node in spec.interior_nodes() {
        let pd = second_fundamental_form_at(spec, &node, step).map_err(|e| match e {
            e @ Error::PointFailure { .. } => e,
            other => Error::PointFailure {
                point: node.clone(),
                source: Box::new(other),
            },
        })?;
        out.push(pd);
    }
    Ok(out)
}
