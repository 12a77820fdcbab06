//! The s-space structure `(N, ψ, O, R, {e_i})` and the correspondence between
//! (0,2) tensors on the base and invariant matrix maps on the total space.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{frame_components, FrameBundle, ManifoldRef, MapFn, SmoothMap, Tensor02Field};
use crate::groups::{signature_matrix, Factor, GroupElement, LieGroup};
use crate::numerics::{curve_velocity, numerical_rank, solve_least_squares, DiffConfig, Mat, Vector};
use crate::report::{CheckReport, MaxTracker};
use crate::rng::{seeded, Rng};

pub type ActionFn = Arc<dyn Fn(&Vector, &GroupElement) -> Result<Vector> + Send + Sync>;
/// Frame vectors at ψ(z), one ambient column per frame element.
pub type FrameFn = Arc<dyn Fn(&Vector) -> Result<Mat> + Send + Sync>;
/// Given `z` and `z̄` in one fibre, some `a` with `z·a = z̄`.
pub type WitnessFn = Arc<dyn Fn(&Vector, &Vector) -> Result<GroupElement> + Send + Sync>;
pub type MatrixFn = Arc<dyn Fn(&Vector) -> Result<Mat> + Send + Sync>;

/// Coordinates of `N = N′ × 𝔽` inside the ambient vector of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberSplit {
    pub rest: Range<usize>,
    pub fiber: Range<usize>,
}

impl FiberSplit {
    pub fn fiber_part(&self, z: &Vector) -> Vector {
        z.rows(self.fiber.start, self.fiber.len()).into_owned()
    }

    /// `z` with its fibre coordinates replaced by `w`.
    pub fn with_fiber(&self, z: &Vector, w: &Vector) -> Vector {
        let mut out = z.clone();
        out.rows_mut(self.fiber.start, self.fiber.len()).copy_from(w);
        out
    }
}

#[derive(Clone)]
pub struct SSpace {
    pub name: String,
    pub total: ManifoldRef,
    pub base: ManifoldRef,
    pub group: LieGroup,
    pub psi: SmoothMap,
    pub action: ActionFn,
    pub frames: FrameFn,
    pub section: MapFn,
    pub witness: Option<WitnessFn>,
    pub fiber_split: Option<FiberSplit>,
}

impl fmt::Debug for SSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SSpace")
            .field("name", &self.name)
            .field("total", &self.total.name())
            .field("base", &self.base.name())
            .field("group", &self.group.name())
            .finish()
    }
}

/// A matrix-valued map on the total space.
#[derive(Clone)]
pub struct MatrixMap {
    pub name: String,
    pub f: MatrixFn,
}

impl MatrixMap {
    pub fn new(name: impl Into<String>, f: MatrixFn) -> Self {
        Self { name: name.into(), f }
    }

    pub fn constant(name: impl Into<String>, a: Mat) -> Self {
        Self::new(name, Arc::new(move |_: &Vector| Ok(a.clone())))
    }

    pub fn eval(&self, z: &Vector) -> Result<Mat> {
        (self.f)(z)
    }
}

/// The base change morphism `L : O → GL(n)`, read off at a fixed point.
#[derive(Clone)]
pub struct BaseChange {
    sspace: SSpace,
    at: Vector,
    cfg: DiffConfig,
}

impl BaseChange {
    pub fn eval(&self, a: &GroupElement) -> Result<Mat> {
        self.sspace.extract_base_change(a, &self.at, &self.cfg)
    }
}

/// Max-entry deviation scaled by `max(1, |reference|_max)`.
pub fn scaled_dev(value: &Mat, reference: &Mat) -> f64 {
    let d = (value - reference).amax() / reference.amax().max(1.0);
    if d.is_nan() {
        f64::INFINITY
    } else {
        d
    }
}

/// Result of the block-orthogonality test on `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockStructureReport {
    /// Every sampled `L(a)` is `diag(L₁, L₂)` with orthogonal blocks.
    pub verdict: bool,
    /// Both `I` and `I_ν` are admissible constant representations.
    pub constant_reps: bool,
    pub agree: bool,
    pub max_deviation: f64,
    pub samples: usize,
}

impl SSpace {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        total: ManifoldRef,
        base: ManifoldRef,
        group: LieGroup,
        psi: MapFn,
        action: ActionFn,
        frames: FrameFn,
        section: MapFn,
    ) -> Self {
        let psi = SmoothMap::new(total.clone(), base.clone(), psi);
        Self {
            name: name.into(),
            total,
            base,
            group,
            psi,
            action,
            frames,
            section,
            witness: None,
            fiber_split: None,
        }
    }

    pub fn with_witness(mut self, w: WitnessFn) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_fiber_split(mut self, split: FiberSplit) -> Self {
        self.fiber_split = Some(split);
        self
    }

    /// Same structure with different frames.
    pub fn with_frames(&self, name: impl Into<String>, frames: FrameFn) -> Self {
        let mut out = self.clone();
        out.name = name.into();
        out.frames = frames;
        out
    }

    /// `n = dim M`.
    pub fn n(&self) -> usize {
        self.base.dim()
    }

    /// `k = dim O`.
    pub fn k(&self) -> usize {
        self.group.dim()
    }

    pub fn act(&self, z: &Vector, a: &GroupElement) -> Result<Vector> {
        (self.action)(z, a)
    }

    pub fn project(&self, z: &Vector) -> Result<Vector> {
        self.psi.eval(z)
    }

    pub fn frame_matrix(&self, z: &Vector) -> Result<Mat> {
        let e = (self.frames)(z)?;
        if e.ncols() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                actual: e.ncols(),
            });
        }
        Ok(e)
    }

    pub fn section_at(&self, p: &Vector) -> Result<Vector> {
        (self.section)(p)
    }

    pub fn reference_point(&self) -> Result<Vector> {
        let p = self.base.sample(&mut seeded(0));
        self.section_at(&p)
    }

    pub fn sample_point(&self, rng: &mut Rng) -> Vector {
        self.total.sample(rng)
    }

    /// `(z, a, z·a)` with independent random `z` and `a`.
    pub fn sample_moved(&self, rng: &mut Rng) -> Result<(Vector, GroupElement, Vector)> {
        let z = self.sample_point(rng);
        let a = self.group.random_element(rng)?;
        let za = self.act(&z, &a)?;
        Ok((z, a, za))
    }

    /// Least-squares `L` with `E(z·a) = E(z)·L`.
    pub fn extract_base_change(&self, a: &GroupElement, z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
        let e = self.frame_matrix(z)?;
        let ea = self.frame_matrix(&self.act(z, a)?)?;
        let ls = solve_least_squares(&e, &ea, cfg)?;
        let tol = 10.0 * cfg.tol * ea.norm().max(1.0);
        if ls.residual > tol {
            return Err(Error::ResidualTooLarge {
                residual: ls.residual,
                tol,
            });
        }
        Ok(ls.solution)
    }

    pub fn base_change_map(&self, cfg: &DiffConfig) -> Result<BaseChange> {
        Ok(BaseChange {
            sspace: self.clone(),
            at: self.reference_point()?,
            cfg: *cfg,
        })
    }

    pub fn base_change(&self, a: &GroupElement, cfg: &DiffConfig) -> Result<Mat> {
        self.extract_base_change(a, &self.reference_point()?, cfg)
    }

    /// `L(a)` read off at independent points must agree.
    pub fn verify_rigidity(&self, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let dev = (|| -> Result<f64> {
                let a = self.group.random_element(rng)?;
                let z1 = self.sample_point(rng);
                let z2 = self.sample_point(rng);
                let l1 = self.extract_base_change(&a, &z1, cfg)?;
                let l2 = self.extract_base_change(&a, &z2, cfg)?;
                Ok(scaled_dev(&l1, &l2))
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        worst.report(cfg.tol)
    }

    /// `L(ab) = L(a)L(b)` and `L(e) = I`.
    pub fn check_base_change_homomorphism(&self, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let mut worst = MaxTracker::default();
        let z0 = match self.reference_point() {
            Ok(z) => z,
            Err(_) => return CheckReport::from_deviation(f64::INFINITY, cfg.tol, 0),
        };
        let n = self.n();
        worst.push(
            self.extract_base_change(&self.group.identity(), &z0, cfg)
                .map(|l| scaled_dev(&l, &Mat::identity(n, n)))
                .unwrap_or(f64::INFINITY),
        );
        for _ in 0..samples {
            let dev = (|| -> Result<f64> {
                let a = self.group.random_element(rng)?;
                let b = self.group.random_element(rng)?;
                let ab = self.group.mul(&a, &b);
                let lab = self.extract_base_change(&ab, &z0, cfg)?;
                let prod = self.extract_base_change(&a, &z0, cfg)? * self.extract_base_change(&b, &z0, cfg)?;
                Ok(scaled_dev(&lab, &prod))
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        worst.report(cfg.tol)
    }

    /// `ψ ∘ R_a = ψ`.
    pub fn check_projection_invariance(&self, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let dev = (|| -> Result<f64> {
                let (z, _, za) = self.sample_moved(rng)?;
                Ok((self.project(&za)? - self.project(&z)?).amax())
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        worst.report(cfg.tol)
    }

    /// `[T(ψ(z))(e_i(z), e_j(z))]`.
    pub fn matrix_rep(&self, t: &Tensor02Field, z: &Vector) -> Result<Mat> {
        let p = self.project(z)?;
        t.gram(&p, &self.frame_matrix(z)?)
    }

    pub fn matrix_map_of(&self, t: &Tensor02Field) -> MatrixMap {
        let s = self.clone();
        let t = t.clone();
        MatrixMap::new(format!("rep[{}]", t.name), Arc::new(move |z: &Vector| s.matrix_rep(&t, z)))
    }

    /// Frame components of `X(ψ(z))`.
    pub fn vector_rep<X>(&self, x: X, z: &Vector, cfg: &DiffConfig) -> Result<Vector>
    where
        X: Fn(&Vector) -> Vector,
    {
        let p = self.project(z)?;
        frame_components(&x(&p), &self.frame_matrix(z)?, cfg)
    }

    /// Max deviation of `F(z·a)` from `L(a)ᵀ F(z) L(a)`, with `L(a)` read off
    /// at the reference point.
    pub fn check_invariance(&self, f: &MatrixMap, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let z0 = match self.reference_point() {
            Ok(z) => z,
            Err(_) => return CheckReport::from_deviation(f64::INFINITY, cfg.tol, 0),
        };
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let dev = (|| -> Result<f64> {
                let (z, a, za) = self.sample_moved(rng)?;
                let l = self.extract_base_change(&a, &z0, cfg)?;
                let predicted = l.transpose() * f.eval(&z)? * &l;
                Ok(scaled_dev(&f.eval(&za)?, &predicted))
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        worst.report(cfg.tol)
    }

    /// `x·F(z)·yᵀ` through the representative `z` of the fibre over `p`.
    pub fn tensor_value_through(
        &self,
        f: &MatrixMap,
        z: &Vector,
        u: &Vector,
        w: &Vector,
        cfg: &DiffConfig,
    ) -> Result<f64> {
        let e = self.frame_matrix(z)?;
        let x = frame_components(u, &e, cfg)?;
        let y = frame_components(w, &e, cfg)?;
        Ok(x.dot(&(f.eval(z)? * y)))
    }

    /// The tensor whose representation is `F`; rejected unless `F` is invariant.
    pub fn tensor_from_matrix(
        &self,
        f: &MatrixMap,
        samples: usize,
        rng: &mut Rng,
        cfg: &DiffConfig,
    ) -> Result<Tensor02Field> {
        let check = self.check_invariance(f, samples, rng, cfg);
        if !check.pass {
            return Err(Error::InvarianceViolation {
                deviation: check.max_deviation,
            });
        }
        let s = self.clone();
        let f = f.clone();
        let cfg = *cfg;
        Ok(Tensor02Field::new(
            format!("tensor[{}]", f.name),
            self.base.clone(),
            Arc::new(move |p: &Vector, u: &Vector, w: &Vector| {
                let z = s.section_at(p)?;
                s.tensor_value_through(&f, &z, u, w, &cfg)
            }),
        ))
    }

    /// `dim S_z = k − rank (σ_z)_{*e}`.
    pub fn stabilizer_dim(&self, z: &Vector, cfg: &DiffConfig) -> Result<usize> {
        let basis = self.group.algebra_basis();
        if basis.is_empty() {
            return Ok(0);
        }
        let cols = basis
            .iter()
            .map(|x| {
                curve_velocity(
                    &|t: f64| -> Result<Vector> { self.act(z, &self.group.exp_curve(x, t)?) },
                    cfg,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(basis.len() - numerical_rank(&Mat::from_columns(&cols), cfg))
    }

    /// Points spread over base and fibres: random `z` moved by random `a`.
    pub fn fiber_spread_points(&self, count: usize, rng: &mut Rng) -> Result<Vec<Vector>> {
        (0..count).map(|_| self.sample_moved(rng).map(|(_, _, za)| za)).collect()
    }

    /// Largest spread of the stabiliser dimension over fibre-spread samples
    /// (zero when it is constant) and the common value.
    pub fn stabilizer_consistency(&self, count: usize, rng: &mut Rng, cfg: &DiffConfig) -> Result<(usize, usize)> {
        let dims = self
            .fiber_spread_points(count, rng)?
            .iter()
            .map(|z| self.stabilizer_dim(z, cfg))
            .collect::<Result<Vec<_>>>()?;
        let lo = *dims.iter().min().unwrap_or(&0);
        let hi = *dims.iter().max().unwrap_or(&0);
        Ok((hi - lo, hi))
    }

    /// `dim N = dim M + dim O − s` at sampled points; deviation in units of dimensions.
    pub fn dimension_identity(&self, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let z = self.sample_point(rng);
            let dev = match self.stabilizer_dim(&z, cfg) {
                Ok(s) => {
                    let predicted = self.n() as i64 + self.k() as i64 - s as i64;
                    (self.total.dim() as i64 - predicted).abs() as f64
                }
                Err(_) => f64::INFINITY,
            };
            worst.push(dev);
        }
        worst.report(0.5)
    }

    /// Whether the constant map `A` satisfies the invariance property.
    pub fn admits_constant_rep(&self, a: &Mat, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let dev = (|| -> Result<f64> {
                let g = self.group.random_element(rng)?;
                let l = self.base_change(&g, cfg)?;
                Ok(scaled_dev(&(l.transpose() * a * &l), a))
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        worst.report(cfg.tol)
    }

    /// Whether every `L(a)` is `diag(L₁, L₂)` with `L₁ ∈ O(ν)`, `L₂ ∈ O(n−ν)`,
    /// cross-checked against admissibility of `I` and `I_ν = diag(I_ν, −I_{n−ν})`.
    pub fn block_structure_test(
        &self,
        nu: usize,
        samples: usize,
        rng: &mut Rng,
        cfg: &DiffConfig,
    ) -> Result<BlockStructureReport> {
        let n = self.n();
        if nu == 0 || nu > n {
            return Err(Error::InvalidConfig(format!("block size {nu} outside 1..={n}")));
        }
        let mut worst = MaxTracker::default();
        let mut constant_dev = MaxTracker::default();
        let i_nu = signature_matrix(nu, n, n);
        let id = Mat::identity(n, n);
        for _ in 0..samples {
            let g = self.group.random_element(rng)?;
            let l = self.base_change(&g, cfg)?;
            let off = if nu < n {
                l.view((0, nu), (nu, n - nu)).amax().max(l.view((nu, 0), (n - nu, nu)).amax())
            } else {
                0.0
            };
            let l1 = l.view((0, 0), (nu, nu)).into_owned();
            let mut dev = off.max((l1.transpose() * &l1 - Mat::identity(nu, nu)).amax());
            if nu < n {
                let l2 = l.view((nu, nu), (n - nu, n - nu)).into_owned();
                dev = dev.max((l2.transpose() * &l2 - Mat::identity(n - nu, n - nu)).amax());
            }
            worst.push(dev);
            constant_dev.push(
                scaled_dev(&(l.transpose() * &id * &l), &id)
                    .max(scaled_dev(&(l.transpose() * &i_nu * &l), &i_nu)),
            );
        }
        let verdict = worst.report(cfg.tol).pass;
        let constant_reps = constant_dev.report(cfg.tol).pass;
        Ok(BlockStructureReport {
            verdict,
            constant_reps,
            agree: verdict == constant_reps,
            max_deviation: worst.max,
            samples,
        })
    }

    /// Confirms the witness finder on pairs `z`, `z·a`: the returned `a′` reproduces `z·a`.
    pub fn check_witness(&self, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> Option<CheckReport> {
        let w = self.witness.as_ref()?;
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let dev = (|| -> Result<f64> {
                let (z, _, za) = self.sample_moved(rng)?;
                let found = w(&z, &za)?;
                Ok((self.act(&z, &found)? - &za).amax())
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        Some(worst.report(cfg.tol))
    }
}

/// The linear frame s-space `LM` with the tautological frames and `L(a) = a`.
pub fn linear_frames(lm: FrameBundle) -> SSpace {
    let base = lm.base();
    let n = base.dim();
    let section_base = base.clone();
    SSpace::new(
        format!("LM[{}]", base.name()),
        Arc::new(lm),
        base,
        LieGroup::single(Factor::General(n)),
        Arc::new(move |z: &Vector| Ok(lm.split(z).0)),
        Arc::new(move |z: &Vector, a: &GroupElement| {
            let (p, e) = lm.split(z);
            Ok(FrameBundle::join(&p, &(e * &a.0)))
        }),
        Arc::new(move |z: &Vector| Ok(lm.split(z).1)),
        Arc::new(move |p: &Vector| Ok(FrameBundle::join(p, &section_base.tangent_basis(p)))),
    )
    .with_witness(Arc::new(move |z: &Vector, w: &Vector| {
        let cfg = DiffConfig::default();
        let ls = solve_least_squares(&lm.split(z).1, &lm.split(w).1, &cfg)?;
        Ok(GroupElement(ls.solution))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Euclidean, GroupManifold, Product};
    use crate::groups::Factor;
    use crate::numerics::{flatten, max_abs_diff, unflatten};
    use crate::rng::{normal_matrix, seeded};
    use std::sync::Arc;

    fn cfg() -> DiffConfig {
        DiffConfig::default()
    }

    /// Frame bundle of ℝ²: z = (p, vec(u)), e_i = u_i.
    fn lm2() -> SSpace {
        let total: ManifoldRef = Arc::new(Product::new(vec![
            Arc::new(Euclidean { n: 2 }),
            Arc::new(GroupManifold { group: LieGroup::single(Factor::General(2)) }),
        ]));
        SSpace::new(
            "lm",
            total,
            Arc::new(Euclidean { n: 2 }),
            LieGroup::single(Factor::General(2)),
            Arc::new(|z: &Vector| Ok(z.rows(0, 2).into_owned())),
            Arc::new(|z: &Vector, a: &GroupElement| {
                let u = unflatten(&z.as_slice()[2..], 2, 2);
                let mut out = z.clone();
                out.rows_mut(2, 4).copy_from(&flatten(&(u * &a.0)));
                Ok(out)
            }),
            Arc::new(|z: &Vector| Ok(unflatten(&z.as_slice()[2..], 2, 2))),
            Arc::new(|p: &Vector| Ok(Product::join(&[p.clone(), flatten(&Mat::identity(2, 2))]))),
        )
    }

    fn euclid() -> Tensor02Field {
        Tensor02Field::from_ambient_matrix("g", Arc::new(Euclidean { n: 2 }), |_| Mat::identity(2, 2))
    }

    fn point(p: [f64; 2], u: [f64; 4]) -> Vector {
        Vector::from_vec(vec![p[0], p[1], u[0], u[1], u[2], u[3]])
    }

    #[test]
    fn base_change_of_frame_bundle_is_identity_map() {
        let s = lm2();
        let mut rng = seeded(1);
        for _ in 0..10 {
            let (z, a, _) = s.sample_moved(&mut rng).unwrap();
            let l = s.extract_base_change(&a, &z, &cfg()).unwrap();
            assert!(max_abs_diff(&l, &a.0) < 1e-10);
        }
    }

    #[test]
    fn matrix_rep_examples() {
        let s = lm2();
        let z = point([0.3, 1.0], [1.0, 0.0, 0.0, 1.0]);
        assert!(max_abs_diff(&s.matrix_rep(&euclid(), &z).unwrap(), &Mat::identity(2, 2)) < 1e-15);
        let z = point([0.3, 1.0], [2.0, 0.0, 0.0, 1.0]);
        let expected = Mat::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]);
        assert!(max_abs_diff(&s.matrix_rep(&euclid(), &z).unwrap(), &expected) < 1e-15);
    }

    #[test]
    fn vector_rep_examples() {
        let s = lm2();
        let field = |_: &Vector| Vector::from_vec(vec![1.0, 0.0]);
        let z = point([0.0, 0.0], [1.0, 0.0, 0.0, 1.0]);
        let x = s.vector_rep(field, &z, &cfg()).unwrap();
        assert!((x - Vector::from_vec(vec![1.0, 0.0])).amax() < 1e-14);
        let z2 = point([0.0, 0.0], [2.0, 0.0, 0.0, 2.0]);
        let x = s.vector_rep(field, &z2, &cfg()).unwrap();
        assert!((x - Vector::from_vec(vec![0.5, 0.0])).amax() < 1e-14);
    }

    #[test]
    fn vector_rep_transforms_by_inverse_transpose() {
        let s = lm2();
        let mut rng = seeded(8);
        let field = |p: &Vector| Vector::from_vec(vec![p[0].sin() + 2.0, p[0] * p[1]]);
        for _ in 0..20 {
            let (z, a, za) = s.sample_moved(&mut rng).unwrap();
            let x = s.vector_rep(field, &z, &cfg()).unwrap();
            let xa = s.vector_rep(field, &za, &cfg()).unwrap();
            let l = s.extract_base_change(&a, &z, &cfg()).unwrap();
            // row-vector form: x(z·a) = x(z)·(Lᵀ)⁻¹
            let predicted = l.clone().try_inverse().unwrap() * &x;
            assert!((xa - predicted).amax() < 1e-8);
        }
    }

    #[test]
    fn invariance_of_reps_and_planted_violation() {
        let s = lm2();
        let mut rng = seeded(2);
        assert!(s.check_invariance(&s.matrix_map_of(&euclid()), 50, &mut rng, &cfg()).pass);
        let constant = MatrixMap::constant("I", Mat::identity(2, 2));
        assert!(!s.check_invariance(&constant, 50, &mut rng, &cfg()).pass);
        assert!(matches!(
            s.tensor_from_matrix(&constant, 50, &mut rng, &cfg()),
            Err(Error::InvarianceViolation { .. })
        ));
    }

    #[test]
    fn roundtrip_through_tensor() {
        let s = lm2();
        let mut rng = seeded(3);
        let b0 = normal_matrix(&mut rng, 2, 2);
        let b1 = normal_matrix(&mut rng, 2, 2);
        let t = Tensor02Field::from_ambient_matrix("poly", s.base.clone(), move |p| &b0 + &b1 * p[0]);
        let back = s
            .tensor_from_matrix(&s.matrix_map_of(&t), 30, &mut rng, &cfg())
            .unwrap();
        for _ in 0..20 {
            let p = s.base.sample(&mut rng);
            let u = crate::rng::normal_vector(&mut rng, 2);
            let w = crate::rng::normal_vector(&mut rng, 2);
            let lhs = back.eval(&p, &u, &w).unwrap();
            let rhs = t.eval(&p, &u, &w).unwrap();
            assert!((lhs - rhs).abs() < 1e-9 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn free_action_has_trivial_stabilizer() {
        let s = lm2();
        let mut rng = seeded(4);
        let z = s.sample_point(&mut rng);
        assert_eq!(s.stabilizer_dim(&z, &cfg()).unwrap(), 0);
        assert!(s.dimension_identity(5, &mut rng, &cfg()).pass);
    }

    #[test]
    fn constant_reps_on_frame_bundle() {
        let s = lm2();
        let mut rng = seeded(5);
        assert!(!s.admits_constant_rep(&Mat::identity(2, 2), 20, &mut rng, &cfg()).pass);
        let r = s.block_structure_test(1, 20, &mut rng, &cfg()).unwrap();
        assert!(!r.verdict && r.agree);
    }
}
