//! Pointwise curvature data: second fundamental forms, ambient curvature
//! specifications, and intrinsic curvature tensors assembled through the
//! Gauss equation.
//!
//! All values are plain `f64` data in an adapted orthonormal frame; every
//! operation here is a pure function of its inputs.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orthonormality tolerance for frames, planes, and rotation matrices.
pub const FRAME_TOL: f64 = 1e-10;

/// Symmetry tolerance accepted when ingesting externally produced coefficients.
const SYMMETRY_TOL: f64 = 1e-9;

/// Ambient space: either a simply connected space form of constant
/// curvature `c >= 0`, or a pair of sectional-curvature bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmbientSpec {
    SpaceForm { c: f64 },
    Bounds { kmin: f64, kmax: f64 },
}

impl AmbientSpec {
    pub fn space_form(c: f64) -> Result<Self> {
        if !c.is_finite() || c < 0.0 {
            return Err(Error::NegativeAmbientCurvature(c));
        }
        Ok(AmbientSpec::SpaceForm { c })
    }

    pub fn bounds(kmin: f64, kmax: f64) -> Result<Self> {
        if !kmin.is_finite() || !kmax.is_finite() || kmin > kmax {
            return Err(Error::BadBounds { kmin, kmax });
        }
        Ok(AmbientSpec::Bounds { kmin, kmax })
    }

    /// Constant curvature when the ambient is a space form.
    pub fn curvature(&self) -> Option<f64> {
        match *self {
            AmbientSpec::SpaceForm { c } => Some(c),
            AmbientSpec::Bounds { .. } => None,
        }
    }

    /// Lower sectional-curvature bound (equals `c` for a space form).
    pub fn kmin(&self) -> f64 {
        match *self {
            AmbientSpec::SpaceForm { c } => c,
            AmbientSpec::Bounds { kmin, .. } => kmin,
        }
    }

    /// Upper sectional-curvature bound (equals `c` for a space form).
    pub fn kmax(&self) -> f64 {
        match *self {
            AmbientSpec::SpaceForm { c } => c,
            AmbientSpec::Bounds { kmax, .. } => kmax,
        }
    }
}

/// Coefficients `h^a_ij` of a submanifold's second fundamental form at a
/// point, expressed in an adapted orthonormal frame: `n` tangent directions,
/// `p` normal directions, one symmetric `n x n` matrix per normal direction.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondFundamentalForm {
    n: usize,
    p: usize,
    coeffs: Vec<DMatrix<f64>>,
}

impl SecondFundamentalForm {
    /// Builds a form from one `n x n` matrix per normal direction.
    ///
    /// Each matrix must be symmetric up to a small tolerance; the stored
    /// coefficients are symmetrized so the invariant holds exactly.
    pub fn new(coeffs: Vec<DMatrix<f64>>) -> Result<Self> {
        let p = coeffs.len();
        if p == 0 {
            return Err(Error::BadDimension("codimension p must be >= 1".into()));
        }
        let n = coeffs[0].nrows();
        if n < 2 {
            return Err(Error::BadDimension(format!(
                "tangent dimension must be >= 2, got {n}"
            )));
        }
        let mut sym = Vec::with_capacity(p);
        for (alpha, m) in coeffs.iter().enumerate() {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient block {alpha} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    let dev = (m[(i, j)] - m[(j, i)]).abs();
                    let scale = m[(i, j)].abs().max(m[(j, i)].abs()).max(1.0);
                    if dev > SYMMETRY_TOL * scale {
                        return Err(Error::NotSymmetric {
                            alpha,
                            i,
                            j,
                            deviation: dev,
                        });
                    }
                }
            }
            sym.push(DMatrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)])));
        }
        Ok(Self { n, p, coeffs: sym })
    }

    /// Zero form (totally geodesic point).
    pub fn zeros(n: usize, p: usize) -> Result<Self> {
        Self::new(vec![DMatrix::zeros(n, n); p])
    }

    /// Umbilic hypersurface form `factor * I` with codimension one.
    pub fn umbilic(n: usize, factor: f64) -> Result<Self> {
        Self::new(vec![DMatrix::identity(n, n) * factor])
    }

    /// Codimension-one form from principal curvatures.
    pub fn from_principal_curvatures(curvatures: &[f64]) -> Result<Self> {
        let n = curvatures.len();
        Self::new(vec![DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                curvatures[i]
            } else {
                0.0
            }
        })])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Coefficient `h^alpha_ij` (all indices zero-based).
    pub fn coeff(&self, alpha: usize, i: usize, j: usize) -> f64 {
        self.coeffs[alpha][(i, j)]
    }

    /// The symmetric matrix of coefficients for one normal direction.
    pub fn block(&self, alpha: usize) -> &DMatrix<f64> {
        &self.coeffs[alpha]
    }

    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.coeffs
    }

    /// Per-normal traces `T_alpha = sum_i h^alpha_ii`.
    pub fn traces(&self) -> Vec<f64> {
        self.coeffs.iter().map(|m| m.trace()).collect()
    }

    /// Squared norm `S = sum over all coefficients squared`.
    pub fn squared_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|m| m.iter().map(|x| x * x).sum::<f64>())
            .sum()
    }

    /// Mean curvature `H = |(1/n) sum_alpha T_alpha e_alpha| = sqrt(sum T_alpha^2)/n`.
    pub fn mean_curvature(&self) -> f64 {
        let t2: f64 = self.traces().iter().map(|t| t * t).sum();
        t2.sqrt() / self.n as f64
    }

    /// Eigenvalues of `sum_alpha (h^alpha)^2`, ascending. A frame-invariant
    /// fingerprint used to compare forms produced in different frames.
    pub fn squared_operator_eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let mut acc = DMatrix::<f64>::zeros(n, n);
        for m in &self.coeffs {
            acc += m * m;
        }
        let mut eig: Vec<f64> = nalgebra::SymmetricEigen::new(acc)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        eig.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        eig
    }
}

/// Dense intrinsic curvature tensor `R_ijkl` with the full algebraic
/// symmetries, stored explicitly (desk-scale dimensions).
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor {
    n: usize,
    entries: Vec<f64>,
}

#[inline]
fn idx(n: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * n + j) * n + k) * n + l
}

impl CurvatureTensor {
    /// Validates the curvature symmetries and the first Bianchi identity
    /// before accepting externally supplied entries.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n * n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for n={n}, got {}",
                n * n * n * n,
                entries.len()
            )));
        }
        let t = Self { n, entries };
        let scale = t.entries.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let tol = 1e-10 * scale;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = t.get(i, j, k, l);
                        let checks: [(&'static str, f64); 3] = [
                            ("antisymmetry in (i,j)", r + t.get(j, i, k, l)),
                            ("antisymmetry in (k,l)", r + t.get(i, j, l, k)),
                            ("pair symmetry", r - t.get(k, l, i, j)),
                        ];
                        for (name, dev) in checks {
                            if dev.abs() > tol {
                                return Err(Error::BrokenTensorSymmetry {
                                    symmetry: name,
                                    deviation: dev.abs(),
                                });
                            }
                        }
                        let bianchi = r + t.get(i, k, l, j) + t.get(i, l, j, k);
                        if bianchi.abs() > tol {
                            return Err(Error::BrokenTensorSymmetry {
                                symmetry: "first Bianchi identity",
                                deviation: bianchi.abs(),
                            });
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    fn from_fn_unchecked(n: usize, f: impl Fn(usize, usize, usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        entries[idx(n, i, j, k, l)] = f(i, j, k, l);
                    }
                }
            }
        }
        Self { n, entries }
    }

    /// Tensor of constant sectional curvature `k0`.
    pub fn constant_curvature(n: usize, k0: f64) -> Self {
        Self::from_fn_unchecked(n, |i, j, k, l| {
            let dik = (i == k) as u8 as f64;
            let djl = (j == l) as u8 as f64;
            let dil = (i == l) as u8 as f64;
            let djk = (j == k) as u8 as f64;
            k0 * (dik * djl - dil * djk)
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.entries[idx(self.n, i, j, k, l)]
    }

    /// Unnormalized double trace `sum_{i != j} R_ijij`.
    pub fn scalar_curvature(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self.get(i, j, i, j);
                }
            }
        }
        acc
    }

    /// Full contraction `R(a, b, c, d)` over four vectors.
    pub fn eval(
        &self,
        a: &DVector<f64>,
        b: &DVector<f64>,
        c: &DVector<f64>,
        d: &DVector<f64>,
    ) -> f64 {
        let n = self.n;
        // Contract one axis at a time to keep this O(n^4) overall.
        let mut t3 = vec![0.0; n * n * n];
        for i in 0..n {
            let ai = a[i];
            if ai == 0.0 {
                continue;
            }
            let base = i * n * n * n;
            for (dst, src) in t3.iter_mut().zip(&self.entries[base..base + n * n * n]) {
                *dst += ai * src;
            }
        }
        let mut t2 = vec![0.0; n * n];
        for j in 0..n {
            let bj = b[j];
            if bj == 0.0 {
                continue;
            }
            let base = j * n * n;
            for (dst, src) in t2.iter_mut().zip(&t3[base..base + n * n]) {
                *dst += bj * src;
            }
        }
        let mut t1 = vec![0.0; n];
        for k in 0..n {
            let ck = c[k];
            if ck == 0.0 {
                continue;
            }
            for l in 0..n {
                t1[l] += ck * t2[k * n + l];
            }
        }
        (0..n).map(|l| d[l] * t1[l]).sum()
    }

    /// Sectional curvature of an orthonormal tangent 2-plane.
    pub fn sectional_curvature(&self, plane: &TangentPlane) -> Result<f64> {
        if plane.e1().len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "plane lives in R^{}, tensor in R^{}",
                plane.e1().len(),
                self.n
            )));
        }
        Ok(self.eval(plane.e1(), plane.e2(), plane.e1(), plane.e2()))
    }

    /// Ricci curvature `Ric(x, x)` of a unit vector.
    ///
    /// Evaluated as `sum_j R(x, E_j, x, E_j)` over the standard basis, which
    /// agrees with the sum over any orthonormal completion of `x`.
    pub fn ricci_curvature(&self, x: &DVector<f64>) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "vector lives in R^{}, tensor in R^{}",
                x.len(),
                self.n
            )));
        }
        let norm = x.norm();
        if (norm - 1.0).abs() > FRAME_TOL {
            return Err(Error::NotUnit(norm));
        }
        let n = self.n;
        let mut acc = 0.0;
        for j in 0..n {
            for i in 0..n {
                let xi = x[i];
                if xi == 0.0 {
                    continue;
                }
                for k in 0..n {
                    acc += xi * x[k] * self.get(i, j, k, j);
                }
            }
        }
        Ok(acc)
    }

    /// Rebuilds the tensor in the rotated coordinates `e'_a = sum_i Q_ai e_i`.
    pub fn rotate(&self, q: &DMatrix<f64>) -> Result<Self> {
        check_orthogonal(q)?;
        if q.nrows() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "rotation is {}x{}, tensor dimension {}",
                q.nrows(),
                q.ncols(),
                self.n
            )));
        }
        let n = self.n;
        let contract_axis0 = |src: &[f64]| {
            let mut out = vec![0.0; n * n * n * n];
            for a in 0..n {
                for i in 0..n {
                    let w = q[(a, i)];
                    if w == 0.0 {
                        continue;
                    }
                    let dst = a * n * n * n;
                    let from = i * n * n * n;
                    for rest in 0..n * n * n {
                        out[dst + rest] += w * src[from + rest];
                    }
                }
            }
            out
        };
        // Rotate one slot at a time, cycling the leading axis: each pass
        // contracts slot 0 and writes it last, so four passes restore order.
        let transpose_cycle = |src: &[f64]| {
            let mut out = vec![0.0; n * n * n * n];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            out[idx(n, j, k, l, i)] = src[idx(n, i, j, k, l)];
                        }
                    }
                }
            }
            out
        };
        let mut cur = self.entries.clone();
        for _ in 0..4 {
            cur = transpose_cycle(&contract_axis0(&cur));
        }
        Ok(Self { n, entries: cur })
    }

    /// Maximum deviation from the four algebraic symmetries and the first
    /// Bianchi identity, relative to the largest entry.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let scale = self.entries.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs())
                            .max((r + self.get(i, k, l, j) + self.get(i, l, j, k)).abs());
                    }
                }
            }
        }
        worst / scale
    }
}

/// Assembles the intrinsic curvature tensor from the second fundamental form
/// via the Gauss equation in a space form of curvature `c`:
/// `R_ijkl = c (d_ik d_jl - d_il d_jk) + sum_a (h^a_ik h^a_jl - h^a_il h^a_jk)`.
///
/// A bounds-mode ambient is rejected: without a constant-curvature ambient
/// the tensor is not determined and callers must fall back to bound-based
/// checks.
pub fn gauss_curvature(
    h: &SecondFundamentalForm,
    ambient: &AmbientSpec,
) -> Result<CurvatureTensor> {
    let c = ambient.curvature().ok_or(Error::BoundsAmbient)?;
    let n = h.n();
    Ok(CurvatureTensor::from_fn_unchecked(n, |i, j, k, l| {
        let dik = (i == k) as u8 as f64;
        let djl = (j == l) as u8 as f64;
        let dil = (i == l) as u8 as f64;
        let djk = (j == k) as u8 as f64;
        let mut v = c * (dik * djl - dil * djk);
        for m in h.blocks() {
            v += m[(i, k)] * m[(j, l)] - m[(i, l)] * m[(j, k)];
        }
        v
    }))
}

fn check_orthonormal_set(vecs: &[&DVector<f64>]) -> Result<()> {
    let mut worst = 0.0f64;
    for (a, va) in vecs.iter().enumerate() {
        for (b, vb) in vecs.iter().enumerate() {
            if va.len() != vb.len() {
                return Err(Error::DimensionMismatch(
                    "frame vectors have mixed lengths".into(),
                ));
            }
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((va.dot(vb) - target).abs());
        }
    }
    if worst > FRAME_TOL {
        return Err(Error::NotOrthonormal(worst));
    }
    Ok(())
}

/// Checks `Q^T Q = I` within [`FRAME_TOL`].
pub fn check_orthogonal(q: &DMatrix<f64>) -> Result<()> {
    if q.nrows() != q.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            q.nrows(),
            q.ncols()
        )));
    }
    let gram = q.transpose() * q;
    let dev = (gram - DMatrix::<f64>::identity(q.nrows(), q.ncols()))
        .iter()
        .fold(0.0f64, |a, x| a.max(x.abs()));
    if dev > FRAME_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    Ok(())
}

/// An orthonormal tangent 2-plane.
#[derive(Debug, Clone)]
pub struct TangentPlane {
    e1: DVector<f64>,
    e2: DVector<f64>,
}

impl TangentPlane {
    pub fn new(e1: DVector<f64>, e2: DVector<f64>) -> Result<Self> {
        check_orthonormal_set(&[&e1, &e2])?;
        Ok(Self { e1, e2 })
    }

    /// Plane spanned by two standard basis vectors.
    pub fn coordinate(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == j || i >= n || j >= n {
            return Err(Error::BadArgument(format!(
                "coordinate plane needs distinct indices < {n}, got ({i}, {j})"
            )));
        }
        let mut e1 = DVector::zeros(n);
        let mut e2 = DVector::zeros(n);
        e1[i] = 1.0;
        e2[j] = 1.0;
        Ok(Self { e1, e2 })
    }

    pub fn e1(&self) -> &DVector<f64> {
        &self.e1
    }

    pub fn e2(&self) -> &DVector<f64> {
        &self.e2
    }
}

/// An orthonormal frame of four tangent vectors.
#[derive(Debug, Clone)]
pub struct FourFrame {
    vecs: [DVector<f64>; 4],
}

impl FourFrame {
    pub fn new(vecs: [DVector<f64>; 4]) -> Result<Self> {
        check_orthonormal_set(&[&vecs[0], &vecs[1], &vecs[2], &vecs[3]])?;
        Ok(Self { vecs })
    }

    /// The first four standard basis vectors of `R^n` (requires `n >= 4`).
    pub fn coordinate(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::BadDimension(format!(
                "a four-frame needs n >= 4, got {n}"
            )));
        }
        let mut vecs: Vec<DVector<f64>> = Vec::with_capacity(4);
        for i in 0..4 {
            let mut v = DVector::zeros(n);
            v[i] = 1.0;
            vecs.push(v);
        }
        Ok(Self {
            vecs: vecs.try_into().expect("exactly four vectors"),
        })
    }

    pub fn vector(&self, i: usize) -> &DVector<f64> {
        &self.vecs[i]
    }
}
