//! Connections on s-spaces: vertical projectors, horizontal lifts, the
//! associated coframes and metrics, and connections induced by a linear
//! connection on the base.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{frame_components, random_tangent, ManifoldRef, Tensor02Field};
use crate::groups::{AlgebraElement, LieGroup};
use crate::numerics::{
    curve_velocity, directional_derivative, null_space, numerical_rank, solve_least_squares,
    DiffConfig, Mat, Vector,
};
use crate::report::{CheckReport, MaxTracker};
use crate::rng::Rng;
use crate::sspace::SSpace;

pub type ProjectorFn = Arc<dyn Fn(&Vector, &Vector) -> Result<Vector> + Send + Sync>;
/// `K(p, w; δp, δw)` for a tangent vector `(δp, δw)` to `TM` at `(p, w)`.
pub type KFn = Arc<dyn Fn(&Vector, &Vector, &Vector, &Vector) -> Result<Vector> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;

/// A connection given by its vertical projector `φ_z : N_z → V_z`.
#[derive(Clone)]
pub struct SSpaceConnection {
    pub name: String,
    pub sspace: SSpace,
    pub projector: ProjectorFn,
}

impl fmt::Debug for SSpaceConnection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SSpaceConnection({} on {})", self.name, self.sspace.name)
    }
}

/// Residuals of the projector axioms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorReport {
    pub idempotence: CheckReport,
    pub verticality: CheckReport,
    pub equivariance: CheckReport,
}

impl ProjectorReport {
    pub fn pass(&self) -> bool {
        self.idempotence.pass && self.verticality.pass && self.equivariance.pass
    }
}

/// The connection map `K : TTM → TM` of a linear connection on `M`.
#[derive(Clone)]
pub struct ConnectionFunction {
    pub name: String,
    pub manifold: ManifoldRef,
    pub k: KFn,
}

impl fmt::Debug for ConnectionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConnectionFunction({})", self.name)
    }
}

impl ConnectionFunction {
    /// Flat connection on ℝⁿ: `K(δp, δw) = δw`.
    pub fn flat(n: usize) -> Self {
        Self {
            name: format!("flat-R{n}"),
            manifold: Arc::new(crate::geometry::Euclidean { n }),
            k: Arc::new(|_, _, _, dw: &Vector| Ok(dw.clone())),
        }
    }

    /// Levi-Civita connection of the round sphere: `K = δw − (p·δw)p`.
    pub fn round_sphere(n: usize) -> Self {
        Self {
            name: format!("round-S{n}"),
            manifold: Arc::new(crate::geometry::Sphere { n }),
            k: Arc::new(|p: &Vector, _, _, dw: &Vector| Ok(dw - p * p.dot(dw))),
        }
    }

    pub fn eval(&self, p: &Vector, w: &Vector, dp: &Vector, dw: &Vector) -> Result<Vector> {
        (self.k)(p, w, dp, dw)
    }

    /// `K(Y_*(v))` for a vector field `Y` given in ambient coordinates.
    pub fn along_field<Y>(&self, y: &Y, p: &Vector, v: &Vector, cfg: &DiffConfig) -> Result<Vector>
    where
        Y: Fn(&Vector) -> Result<Vector>,
    {
        let dw = directional_derivative(y, p, v, cfg)?;
        self.eval(p, &y(p)?, v, &dw)
    }
}

/// The two sides of the splitting criterion for a connection built from `K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplittingConditions {
    /// `F_z` injective and `M_{ψ(z)} × 0 × ⋯ × 0 ⊂ Img F_z`.
    pub injective_with_horizontal_image: bool,
    /// `N_z = H_z ⊕ V_z`.
    pub direct_sum: bool,
}

/// Connection induced by `K` together with the splitting conditions observed
/// at the sampled points.
#[derive(Debug, Clone)]
pub struct KConnection {
    pub connection: SSpaceConnection,
    pub conditions: SplittingConditions,
}

/// Pushforward of `b ∈ N_z` by the right translation `R_a`.
fn push_action(s: &SSpace, a: &crate::groups::GroupElement, z: &Vector, b: &Vector, cfg: &DiffConfig) -> Result<Vector> {
    directional_derivative(&|x: &Vector| s.act(x, a), z, b, cfg)
}

/// `ψ_{*z}(b)`.
pub fn push_projection(s: &SSpace, z: &Vector, b: &Vector, cfg: &DiffConfig) -> Result<Vector> {
    s.psi.push(z, b, cfg)
}

/// `ψ_{*z}` on the orthonormal tangent basis of `N` at `z`.
fn projection_matrix(s: &SSpace, z: &Vector, basis: &Mat, cfg: &DiffConfig) -> Result<Mat> {
    let cols = (0..basis.ncols())
        .map(|j| push_projection(s, z, &basis.column(j).into_owned(), cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_columns(&cols))
}

/// Ambient basis of `V_z = ker ψ_{*z}`.
pub fn vertical_subspace(s: &SSpace, z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
    let b = s.total.tangent_basis(z);
    let p = projection_matrix(s, z, &b, cfg)?;
    Ok(&b * null_space(&p, cfg))
}

/// `V(X)(z) = d/dt z·exp(tX)` at `t = 0`.
pub fn fundamental_vertical_field(s: &SSpace, x: &AlgebraElement, z: &Vector, cfg: &DiffConfig) -> Result<Vector> {
    curve_velocity(&|t: f64| s.act(z, &s.group.exp_curve(x, t)?), cfg)
}

/// `{V(X_i)(z)}` for a chosen complement `Ṽ` of the stabiliser algebra.
pub fn vertical_basis(s: &SSpace, vtilde: &[AlgebraElement], z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
    if vtilde.is_empty() {
        return Ok(Mat::zeros(s.total.ambient_dim(), 0));
    }
    let cols = vtilde
        .iter()
        .map(|x| fundamental_vertical_field(s, x, z, cfg))
        .collect::<Result<Vec<_>>>()?;
    let m = Mat::from_columns(&cols);
    let rank = numerical_rank(&m, cfg);
    if rank < vtilde.len() {
        return Err(Error::RankDeficient {
            rank,
            expected: vtilde.len(),
        });
    }
    Ok(m)
}

/// `θ(z)(b)`: frame components of `ψ_{*z}(b)`.
pub fn coframe_theta(s: &SSpace, z: &Vector, b: &Vector, cfg: &DiffConfig) -> Result<Vector> {
    frame_components(&push_projection(s, z, b, cfg)?, &s.frame_matrix(z)?, cfg)
}

/// Numerical rank and whether it equals `expected`.
fn full_rank(m: &Mat, expected: usize, cfg: &DiffConfig) -> (usize, bool) {
    let r = numerical_rank(m, cfg);
    (r, r == expected)
}

impl SSpaceConnection {
    pub fn new(name: impl Into<String>, sspace: SSpace, projector: ProjectorFn) -> Self {
        Self {
            name: name.into(),
            sspace,
            projector,
        }
    }

    pub fn project(&self, z: &Vector, b: &Vector) -> Result<Vector> {
        (self.projector)(z, b)
    }

    /// Ambient basis of `H_z = ker φ_z`.
    pub fn horizontal_subspace(&self, z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
        let b = self.sspace.total.tangent_basis(z);
        let cols = (0..b.ncols())
            .map(|j| self.project(z, &b.column(j).into_owned()))
            .collect::<Result<Vec<_>>>()?;
        let phi = Mat::from_columns(&cols);
        Ok(&b * null_space(&phi, cfg))
    }

    /// The unique `v^h ∈ H_z` with `ψ_{*z}(v^h) = v`.
    pub fn horizontal_lift(&self, v: &Vector, z: &Vector, cfg: &DiffConfig) -> Result<Vector> {
        let h = self.horizontal_subspace(z, cfg)?;
        let n = self.sspace.n();
        let p = projection_matrix(&self.sspace, z, &h, cfg)?;
        let rank = numerical_rank(&p, cfg);
        if rank < n || h.ncols() != n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        let ls = solve_least_squares(&p, &Mat::from_column_slice(v.len(), 1, v.as_slice()), cfg)?;
        let tol = 10.0 * cfg.tol * v.norm().max(1.0);
        if ls.residual > tol {
            return Err(Error::ResidualTooLarge {
                residual: ls.residual,
                tol,
            });
        }
        Ok(h * ls.solution.column(0))
    }

    /// Horizontal lifts of the frame vectors `e_i(z)`.
    pub fn horizontal_frame(&self, z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
        let e = self.sspace.frame_matrix(z)?;
        let cols = (0..e.ncols())
            .map(|i| self.horizontal_lift(&e.column(i).into_owned(), z, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_columns(&cols))
    }

    /// `φ² = φ`, `ψ_*∘φ = 0` and `φ_{z·a}∘(R_a)_* = (R_a)_*∘φ_z` on random tangent vectors.
    pub fn check_projector(&self, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> ProjectorReport {
        let s = &self.sspace;
        let mut idem = MaxTracker::default();
        let mut vert = MaxTracker::default();
        let mut equiv = MaxTracker::default();
        for _ in 0..samples {
            let r = (|| -> Result<(f64, f64, f64)> {
                let (z, a, za) = s.sample_moved(rng)?;
                let b = random_tangent(&*s.total, &z, rng);
                let pb = self.project(&z, &b)?;
                let scale = b.norm().max(1.0);
                let i = (self.project(&z, &pb)? - &pb).amax() / scale;
                let v = push_projection(s, &z, &pb, cfg)?.amax() / scale;
                let rb = push_action(s, &a, &z, &b, cfg)?;
                let lhs = self.project(&za, &rb)?;
                let rhs = push_action(s, &a, &z, &pb, cfg)?;
                Ok((i, v, (lhs - &rhs).amax() / rb.norm().max(1.0)))
            })();
            let (i, v, e) = r.unwrap_or((f64::INFINITY, f64::INFINITY, f64::INFINITY));
            idem.push(i);
            vert.push(v);
            equiv.push(e);
        }
        ProjectorReport {
            idempotence: idem.report(cfg.tol),
            verticality: vert.report(cfg.tol),
            equivariance: equiv.report(cfg.tol),
        }
    }

    /// `W(z)(b)`: components of `φ_z(b)` in the vertical basis.
    pub fn coframe_w(&self, vbasis: &Mat, z: &Vector, b: &Vector, cfg: &DiffConfig) -> Result<Vector> {
        let rank = numerical_rank(vbasis, cfg);
        if rank < vbasis.ncols() {
            return Err(Error::RankDeficient {
                rank,
                expected: vbasis.ncols(),
            });
        }
        frame_components(&self.project(z, b)?, vbasis, cfg)
    }

    /// `ψ*G + Σ Wⁱ⊗Wⁱ` with `W` dual to the fundamental fields of `Ṽ`.
    pub fn lifted_metric(&self, g: &Tensor02Field, vtilde: Vec<AlgebraElement>, cfg: &DiffConfig) -> Tensor02Field {
        let c = self.clone();
        let g = g.clone();
        let cfg = *cfg;
        Tensor02Field::new(
            format!("lift[{}]", g.name),
            self.sspace.total.clone(),
            Arc::new(move |z: &Vector, a: &Vector, b: &Vector| {
                let s = &c.sspace;
                let p = s.project(z)?;
                let base = g.eval(&p, &push_projection(s, z, a, &cfg)?, &push_projection(s, z, b, &cfg)?)?;
                let vb = vertical_basis(s, &vtilde, z, &cfg)?;
                Ok(base + c.coframe_w(&vb, z, a, &cfg)?.dot(&c.coframe_w(&vb, z, b, &cfg)?))
            }),
        )
    }

    /// `|A|_G̃ = |ψ_*A|_G` on horizontal `A` and `G̃(H, V) = 0`.
    pub fn check_submersion(&self, lifted: &Tensor02Field, g: &Tensor02Field, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let s = &self.sspace;
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let dev = (|| -> Result<f64> {
                let z = s.sample_point(rng);
                let p = s.project(&z)?;
                let v = random_tangent(&*s.base, &p, rng);
                let h = self.horizontal_lift(&v, &z, cfg)?;
                let lhs = lifted.eval(&z, &h, &h)?;
                let rhs = g.eval(&p, &v, &v)?;
                let vert = vertical_subspace(s, &z, cfg)?;
                let mut cross: f64 = 0.0;
                for j in 0..vert.ncols() {
                    cross = cross.max(lifted.eval(&z, &h, &vert.column(j).into_owned())?.abs());
                }
                Ok(((lhs - rhs).abs() / rhs.abs().max(1.0)).max(cross))
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        worst.report(cfg.tol)
    }

    /// Rank of `{e^h_1, …, e^h_n, V_1, …, V_{k−s}}` at sampled points; the
    /// deviation is the largest rank defect.
    pub fn global_frame_check(&self, vtilde: &[AlgebraElement], samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let s = &self.sspace;
        let dim = s.total.dim();
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let defect = (|| -> Result<f64> {
                let z = s.sample_point(rng);
                let h = self.horizontal_frame(&z, cfg)?;
                let v = vertical_basis(s, vtilde, &z, cfg)?;
                let mut all = Mat::zeros(h.nrows(), h.ncols() + v.ncols());
                all.view_mut((0, 0), h.shape()).copy_from(&h);
                all.view_mut((0, h.ncols()), v.shape()).copy_from(&v);
                let (rank, _) = full_rank(&all, dim, cfg);
                Ok((dim as f64 - rank as f64).abs() + (all.ncols() as f64 - dim as f64).abs())
            })()
            .unwrap_or_else(|e| match e {
                Error::RankDeficient { rank, expected } => (expected - rank) as f64,
                _ => f64::INFINITY,
            });
            worst.push(defect);
        }
        worst.report(0.5)
    }

    /// Change-of-frame matrix `A(z)` with `E′(z) = E(z)·A(z)` between the frames
    /// `{e^h_i, V_j}` of this connection and of `other`, on the same vertical basis.
    pub fn frame_change(&self, other: &SSpaceConnection, vtilde: &[AlgebraElement], z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
        let frame = |c: &SSpaceConnection| -> Result<Mat> {
            let h = c.horizontal_frame(z, cfg)?;
            let v = vertical_basis(&c.sspace, vtilde, z, cfg)?;
            let mut all = Mat::zeros(h.nrows(), h.ncols() + v.ncols());
            all.view_mut((0, 0), h.shape()).copy_from(&h);
            all.view_mut((0, h.ncols()), v.shape()).copy_from(&v);
            Ok(all)
        };
        let e = frame(self)?;
        let e2 = frame(other)?;
        Ok(solve_least_squares(&e, &e2, cfg)?.solution)
    }
}

/// `K^i_z(b) = K(ψ(z), e_i(z); ψ_*b, De_i[b])` for each `i`.
pub fn k_components(s: &SSpace, k: &ConnectionFunction, z: &Vector, b: &Vector, cfg: &DiffConfig) -> Result<Vec<Vector>> {
    let p = s.project(z)?;
    let dp = push_projection(s, z, b, cfg)?;
    let e = s.frame_matrix(z)?;
    let flat_frames = |x: &Vector| -> Result<Vector> {
        let m = s.frame_matrix(x)?;
        Ok(Vector::from_column_slice(m.as_slice()))
    };
    let de = directional_derivative(&flat_frames, z, b, cfg)?;
    let rows = e.nrows();
    (0..e.ncols())
        .map(|i| {
            let dw = de.rows(i * rows, rows).into_owned();
            k.eval(&p, &e.column(i).into_owned(), &dp, &dw)
        })
        .collect()
}

/// `F_z` as a matrix on the orthonormal tangent basis of `N` at `z`; rows are
/// `ψ_*` followed by `K¹, …, Kⁿ`.
fn f_matrix(s: &SSpace, k: &ConnectionFunction, z: &Vector, basis: &Mat, cfg: &DiffConfig) -> Result<Mat> {
    let m = s.base.ambient_dim();
    let n = s.n();
    let mut f = Mat::zeros(m * (n + 1), basis.ncols());
    for j in 0..basis.ncols() {
        let b = basis.column(j).into_owned();
        f.view_mut((0, j), (m, 1)).copy_from(&push_projection(s, z, &b, cfg)?);
        for (i, ki) in k_components(s, k, z, &b, cfg)?.iter().enumerate() {
            f.view_mut(((i + 1) * m, j), (m, 1)).copy_from(ki);
        }
    }
    Ok(f)
}

/// Evaluates both splitting conditions at `z`; also returns bases of `H_z` and `V_z`.
fn splitting_at(s: &SSpace, k: &ConnectionFunction, z: &Vector, cfg: &DiffConfig) -> Result<(SplittingConditions, Mat, Mat, usize)> {
    let basis = s.total.tangent_basis(z);
    let dim = basis.ncols();
    let m = s.base.ambient_dim();
    let f = f_matrix(s, k, z, &basis, cfg)?;
    let f_rank = numerical_rank(&f, cfg);
    let injective = f_rank == dim;
    // (v, 0, …, 0) in the image for every v tangent to M
    let p = s.project(z)?;
    let tb = s.base.tangent_basis(&p);
    let mut contains = true;
    for j in 0..tb.ncols() {
        let mut target = Mat::zeros(f.nrows(), 1);
        target.view_mut((0, 0), (m, 1)).copy_from(&tb.column(j));
        let ls = solve_least_squares(&f, &target, cfg);
        contains &= match ls {
            Ok(ls) => ls.residual < 10.0 * cfg.tol,
            Err(_) => {
                let mut aug = Mat::zeros(f.nrows(), f.ncols() + 1);
                aug.view_mut((0, 0), f.shape()).copy_from(&f);
                aug.set_column(f.ncols(), &target.column(0));
                numerical_rank(&aug, cfg) == f_rank
            }
        };
    }
    let k_rows = f.rows(m, f.nrows() - m).into_owned();
    let psi_rows = f.rows(0, m).into_owned();
    let h = &basis * null_space(&k_rows, cfg);
    let v = &basis * null_space(&psi_rows, cfg);
    let mut all = Mat::zeros(basis.nrows(), h.ncols() + v.ncols());
    all.view_mut((0, 0), h.shape()).copy_from(&h);
    all.view_mut((0, h.ncols()), v.shape()).copy_from(&v);
    let rank = if all.ncols() == 0 { 0 } else { numerical_rank(&all, cfg) };
    let direct_sum = rank == dim && all.ncols() == dim;
    let defect = dim.abs_diff(rank) + all.ncols().abs_diff(dim);
    Ok((
        SplittingConditions {
            injective_with_horizontal_image: injective && contains,
            direct_sum,
        },
        h,
        v,
        defect,
    ))
}

/// Connection with `H_z = ⋂ ker K^i_z`, checked at `samples` random points.
pub fn connection_from_k(
    s: &SSpace,
    k: &ConnectionFunction,
    samples: usize,
    rng: &mut Rng,
    cfg: &DiffConfig,
) -> Result<KConnection> {
    let mut conditions = SplittingConditions {
        injective_with_horizontal_image: true,
        direct_sum: true,
    };
    let mut worst_defect = 0;
    for _ in 0..samples.max(1) {
        let z = s.sample_point(rng);
        let (c, _, _, defect) = splitting_at(s, k, &z, cfg)?;
        conditions.injective_with_horizontal_image &= c.injective_with_horizontal_image;
        conditions.direct_sum &= c.direct_sum;
        worst_defect = worst_defect.max(defect);
    }
    if !conditions.direct_sum {
        return Err(Error::SplittingFailure {
            rank_defect: worst_defect,
        });
    }
    let sc = s.clone();
    let kc = k.clone();
    let cfg = *cfg;
    let projector: ProjectorFn = Arc::new(move |z: &Vector, b: &Vector| {
        let (_, h, v, defect) = splitting_at(&sc, &kc, z, &cfg)?;
        if defect > 0 {
            return Err(Error::SplittingFailure { rank_defect: defect });
        }
        let mut hv = Mat::zeros(h.nrows(), h.ncols() + v.ncols());
        hv.view_mut((0, 0), h.shape()).copy_from(&h);
        hv.view_mut((0, h.ncols()), v.shape()).copy_from(&v);
        let ls = solve_least_squares(&hv, &Mat::from_column_slice(b.len(), 1, b.as_slice()), &cfg)?;
        Ok((&v * ls.solution.rows(h.ncols(), v.ncols())).column(0).into_owned())
    });
    Ok(KConnection {
        connection: SSpaceConnection::new(format!("K[{}]", k.name), s.clone(), projector),
        conditions,
    })
}

/// `c(z)·G(ψ_*A, ψ_*B) + Σ l_i(z)·G(K^i A, K^i B)`.
pub fn sasaki_mok_metric(
    s: &SSpace,
    k: &ConnectionFunction,
    g: &Tensor02Field,
    c: ScalarFn,
    l: Vec<ScalarFn>,
    cfg: &DiffConfig,
) -> Result<Tensor02Field> {
    if l.len() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            actual: l.len(),
        });
    }
    let s = s.clone();
    let k = k.clone();
    let g = g.clone();
    let cfg = *cfg;
    Ok(Tensor02Field::new(
        format!("sasaki-mok[{}]", g.name),
        s.total.clone(),
        Arc::new(move |z: &Vector, a: &Vector, b: &Vector| {
            let p = s.project(z)?;
            let mut total = c(z) * g.eval(&p, &push_projection(&s, z, a, &cfg)?, &push_projection(&s, z, b, &cfg)?)?;
            let ka = k_components(&s, &k, z, a, &cfg)?;
            let kb = k_components(&s, &k, z, b, &cfg)?;
            for i in 0..ka.len() {
                total += l[i](z) * g.eval(&p, &ka[i], &kb[i])?;
            }
            Ok(total)
        }),
    ))
}

/// `F_z⁻¹` applied to the standard slots: column block 0 holds the horizontal lifts
/// `e_i^h`, block `i` the vectors `e_j^{v(i)}` with `K^i = e_j`.
pub fn beta_frame(s: &SSpace, k: &ConnectionFunction, z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
    let basis = s.total.tangent_basis(z);
    let f = f_matrix(s, k, z, &basis, cfg)?;
    let m = s.base.ambient_dim();
    let n = s.n();
    if basis.ncols() != n * (n + 1) {
        return Err(Error::DimensionMismatch {
            expected: n * (n + 1),
            actual: basis.ncols(),
        });
    }
    let e = s.frame_matrix(z)?;
    let mut targets = Mat::zeros(f.nrows(), n * (n + 1));
    for slot in 0..=n {
        for j in 0..n {
            targets.view_mut((slot * m, slot * n + j), (m, 1)).copy_from(&e.column(j));
        }
    }
    let ls = solve_least_squares(&f, &targets, cfg)?;
    let tol = 10.0 * cfg.tol * targets.norm().max(1.0);
    if ls.residual > tol {
        return Err(Error::ResidualTooLarge {
            residual: ls.residual,
            tol,
        });
    }
    Ok(basis * ls.solution)
}

/// The s-space `β = (N, id, {1}, ·, {e_i^h, e_j^{v(i)}})` over the total space of `s`.
pub fn beta_sspace(s: &SSpace, k: &ConnectionFunction, cfg: &DiffConfig) -> SSpace {
    let sc = s.clone();
    let kc = k.clone();
    let cfg = *cfg;
    SSpace::new(
        format!("beta[{}]", s.name),
        s.total.clone(),
        s.total.clone(),
        LieGroup::trivial(),
        Arc::new(|z: &Vector| Ok(z.clone())),
        Arc::new(|z: &Vector, _| Ok(z.clone())),
        Arc::new(move |z: &Vector| beta_frame(&sc, &kc, z, &cfg)),
        Arc::new(|z: &Vector| Ok(z.clone())),
    )
}

/// Lowest eigenvalue of the Gram matrix of `t` on the tangent basis, over samples.
pub fn min_eigenvalue(t: &Tensor02Field, samples: usize, rng: &mut Rng) -> Result<f64> {
    let m = t.manifold.clone();
    let mut lo = f64::INFINITY;
    for _ in 0..samples {
        let z = m.sample(rng);
        let g = t.gram(&z, &m.tangent_basis(&z))?;
        let sym = (&g + g.transpose()) * 0.5;
        let (vals, _) = crate::numerics::symmetric_eigen(&sym);
        lo = lo.min(vals[0]);
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Euclidean, FrameBundle, Manifold, Sphere};
    use crate::numerics::max_abs_diff;
    use crate::rng::seeded;
    use crate::sspace::linear_frames;

    fn fd() -> DiffConfig {
        DiffConfig::default().with_tol(1e-5)
    }

    fn flat_lm_connection() -> SSpaceConnection {
        let s = linear_frames(FrameBundle::flat(2));
        SSpaceConnection::new(
            "flat",
            s,
            Arc::new(|_: &Vector, b: &Vector| {
                let mut v = b.clone();
                v[0] = 0.0;
                v[1] = 0.0;
                Ok(v)
            }),
        )
    }

    #[test]
    fn flat_projector_laws_and_lift() {
        let c = flat_lm_connection();
        let mut rng = seeded(1);
        assert!(c.check_projector(30, &mut rng, &fd()).pass());
        let z = c.sspace.sample_point(&mut rng);
        let v = Vector::from_vec(vec![0.7, -1.2]);
        let h = c.horizontal_lift(&v, &z, &fd()).unwrap();
        assert!((h.rows(0, 2) - &v).amax() < 1e-6);
        assert!(h.rows(2, 4).amax() < 1e-6);
        // linear in v
        let h2 = c.horizontal_lift(&(&v * 3.0), &z, &fd()).unwrap();
        assert!((h2 - h * 3.0).amax() < 1e-6);
    }

    #[test]
    fn fundamental_fields_and_coframes() {
        let c = flat_lm_connection();
        let s = &c.sspace;
        let mut rng = seeded(2);
        let z = s.sample_point(&mut rng);
        let zero = AlgebraElement(Mat::zeros(2, 2));
        assert!(fundamental_vertical_field(s, &zero, &z, &fd()).unwrap().amax() < 1e-12);
        let basis = s.group.algebra_basis();
        for x in &basis {
            let v = fundamental_vertical_field(s, x, &z, &fd()).unwrap();
            assert!(v.norm() > 1e-3);
            assert!(coframe_theta(s, &z, &v, &fd()).unwrap().amax() < 1e-6);
        }
        let vb = vertical_basis(s, &basis, &z, &fd()).unwrap();
        let hf = c.horizontal_frame(&z, &fd()).unwrap();
        for i in 0..2 {
            let th = coframe_theta(s, &z, &hf.column(i).into_owned(), &fd()).unwrap();
            let mut delta = Vector::zeros(2);
            delta[i] = 1.0;
            assert!((th - delta).amax() < 1e-6);
            assert!(c.coframe_w(&vb, &z, &hf.column(i).into_owned(), &fd()).unwrap().amax() < 1e-6);
        }
        for j in 0..4 {
            let w = c.coframe_w(&vb, &z, &vb.column(j).into_owned(), &fd()).unwrap();
            let mut delta = Vector::zeros(4);
            delta[j] = 1.0;
            assert!((w - delta).amax() < 1e-6);
        }
    }

    #[test]
    fn theta_equivariance() {
        let c = flat_lm_connection();
        let s = &c.sspace;
        let mut rng = seeded(3);
        for _ in 0..10 {
            let (z, a, za) = s.sample_moved(&mut rng).unwrap();
            let b = random_tangent(&*s.total, &z, &mut rng);
            let rb = push_action(s, &a, &z, &b, &fd()).unwrap();
            let l = s.extract_base_change(&a, &z, &fd()).unwrap();
            let lhs = l * coframe_theta(s, &za, &rb, &fd()).unwrap();
            assert!((lhs - coframe_theta(s, &z, &b, &fd()).unwrap()).amax() < 1e-5);
        }
    }

    #[test]
    fn lifted_metric_is_submersion() {
        let c = flat_lm_connection();
        let g = Tensor02Field::from_ambient_matrix("g", Arc::new(Euclidean { n: 2 }), |_| Mat::identity(2, 2));
        let basis = c.sspace.group.algebra_basis();
        let lifted = c.lifted_metric(&g, basis.clone(), &fd());
        let mut rng = seeded(4);
        assert!(c.check_submersion(&lifted, &g, 10, &mut rng, &fd()).pass);
        let z = c.sspace.sample_point(&mut rng);
        let vb = vertical_basis(&c.sspace, &basis, &z, &fd()).unwrap();
        let gram = lifted.gram(&z, &vb).unwrap();
        assert!(max_abs_diff(&gram, &Mat::identity(4, 4)) < 1e-5);
        assert!(c.global_frame_check(&basis, 5, &mut rng, &fd()).pass);
    }

    #[test]
    fn k_functions_match_covariant_derivatives() {
        let cfg = DiffConfig::default();
        let sphere = ConnectionFunction::round_sphere(2);
        // Y(p) = e₃ − (p·e₃)p is tangent; ∇_v Y = proj(dY[v]).
        let e3 = Vector::from_vec(vec![0.0, 0.0, 1.0]);
        let y = |p: &Vector| -> Result<Vector> { Ok(&e3 - p * p.dot(&e3)) };
        let mut rng = seeded(5);
        for _ in 0..10 {
            let p = Sphere { n: 2 }.sample(&mut rng);
            let v = random_tangent(&Sphere { n: 2 }, &p, &mut rng);
            let k = sphere.along_field(&y, &p, &v, &cfg).unwrap();
            // closed form: dY[v] = −(v·e₃)p − (p·e₃)v, projected: −(p·e₃)v
            let oracle = &v * -p.dot(&e3);
            assert!((k - oracle).amax() < 1e-8);
        }
        let flat = ConnectionFunction::flat(2);
        let y = |p: &Vector| -> Result<Vector> { Ok(Vector::from_vec(vec![p[0] * p[1], p[0].sin()])) };
        let p = Vector::from_vec(vec![0.3, -0.4]);
        let v = Vector::from_vec(vec![1.0, 2.0]);
        let k = flat.along_field(&y, &p, &v, &cfg).unwrap();
        let oracle = Vector::from_vec(vec![p[1] * v[0] + p[0] * v[1], p[0].cos() * v[0]]);
        assert!((k - oracle).amax() < 1e-8);
    }

    #[test]
    fn flat_k_connection_is_trivial_splitting() {
        let s = linear_frames(FrameBundle::flat(2));
        let mut rng = seeded(6);
        let kc = connection_from_k(&s, &ConnectionFunction::flat(2), 3, &mut rng, &fd()).unwrap();
        assert!(kc.conditions.direct_sum && kc.conditions.injective_with_horizontal_image);
        let z = s.sample_point(&mut rng);
        let b = random_tangent(&*s.total, &z, &mut rng);
        let phi = kc.connection.project(&z, &b).unwrap();
        let mut expected = b.clone();
        expected[0] = 0.0;
        expected[1] = 0.0;
        assert!((phi - expected).amax() < 1e-6);
    }

    #[test]
    fn sphere_k_connection_projector_laws() {
        let s = linear_frames(FrameBundle::sphere(2));
        let mut rng = seeded(7);
        let kc = connection_from_k(&s, &ConnectionFunction::round_sphere(2), 3, &mut rng, &fd()).unwrap();
        assert!(kc.conditions.direct_sum && kc.conditions.injective_with_horizontal_image);
        let r = kc.connection.check_projector(10, &mut rng, &fd().with_tol(1e-5));
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn degenerate_k_fails_to_split() {
        let s = linear_frames(FrameBundle::flat(2));
        // Only the first component survives, so H_z is too large.
        let bad = ConnectionFunction {
            name: "partial".into(),
            manifold: Arc::new(Euclidean { n: 2 }),
            k: Arc::new(|_, _, _, dw: &Vector| Ok(Vector::from_vec(vec![dw[0], 0.0]))),
        };
        let mut rng = seeded(8);
        assert!(matches!(
            connection_from_k(&s, &bad, 2, &mut rng, &fd()),
            Err(Error::SplittingFailure { .. })
        ));
    }

    #[test]
    fn sasaki_mok_in_beta_frame_is_block_diagonal() {
        let s = linear_frames(FrameBundle::flat(2));
        let k = ConnectionFunction::flat(2);
        let g = Tensor02Field::from_ambient_matrix("g", Arc::new(Euclidean { n: 2 }), |p| {
            Mat::from_row_slice(2, 2, &[2.0 + p[0].sin(), 0.3, 0.3, 1.0])
        });
        let one: ScalarFn = Arc::new(|_| 1.0);
        let sm = sasaki_mok_metric(&s, &k, &g, one.clone(), vec![one.clone(), one], &fd()).unwrap();
        let beta = beta_sspace(&s, &k, &fd());
        let mut rng = seeded(9);
        for _ in 0..5 {
            let z = s.sample_point(&mut rng);
            let rep = beta.matrix_rep(&sm, &z).unwrap();
            let kg = s.matrix_rep(&g, &z).unwrap();
            let expected = crate::numerics::block_diagonal(&[kg.clone(), kg.clone(), kg]);
            assert!(max_abs_diff(&rep, &expected) < 1e-5 * expected.amax().max(1.0));
        }
        assert!(min_eigenvalue(&sm, 5, &mut rng).unwrap() > 0.0);
        let zero: ScalarFn = Arc::new(|_| 0.0);
        let degenerate = sasaki_mok_metric(&s, &k, &g, zero.clone(), vec![zero.clone(), zero], &fd()).unwrap();
        assert!(min_eigenvalue(&degenerate, 5, &mut rng).unwrap() < 1e-8);
    }
}
