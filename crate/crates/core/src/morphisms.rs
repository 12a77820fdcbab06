//! Morphisms of s-spaces, linking maps and the pullback laws they induce.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{tangent_rank, MapFn, SmoothMap, Tensor02Field};
use crate::groups::GroupElement;
use crate::numerics::{invert, numerical_rank, solve_least_squares, DiffConfig, Mat, Vector};
use crate::report::{CheckReport, MaxTracker};
use crate::rng::Rng;
use crate::sspace::{scaled_dev, SSpace};

pub type TauFn = Arc<dyn Fn(&GroupElement) -> Result<GroupElement> + Send + Sync>;

/// `(f, τ) : λ → λ′`, optionally over a base map `h : M → M′`.
#[derive(Clone)]
pub struct SSpaceMorphism {
    pub name: String,
    pub source: SSpace,
    pub target: SSpace,
    pub f: SmoothMap,
    pub tau: TauFn,
    pub over: Option<SmoothMap>,
}

impl fmt::Debug for SSpaceMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SSpaceMorphism({}: {} -> {})", self.name, self.source.name, self.target.name)
    }
}

/// Separate verdicts for the morphism axioms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorphismReport {
    pub projection: CheckReport,
    pub equivariance: CheckReport,
    pub homomorphism: CheckReport,
}

impl MorphismReport {
    pub fn pass(&self) -> bool {
        self.projection.pass && self.equivariance.pass && self.homomorphism.pass
    }

    pub fn max_deviation(&self) -> f64 {
        self.projection
            .max_deviation
            .max(self.equivariance.max_deviation)
            .max(self.homomorphism.max_deviation)
    }
}

/// Outcome of the invariant-tensor test together with the membership cross-check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    pub check: CheckReport,
    /// Matrix equality and `C(z) ∈ G_T(z)` gave the same answer on every sample.
    pub membership_agrees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsSpaceReport {
    pub h_injective: bool,
    pub h_immersion: bool,
    pub f_immersion: bool,
    pub constant_over_map: CheckReport,
}

impl SubsSpaceReport {
    pub fn pass(&self) -> bool {
        self.h_injective && self.h_immersion && self.f_immersion && self.constant_over_map.pass
    }
}

/// Whether `Dᵀ·ᵏT(z)·D = ᵏT(z)`.
pub fn invariance_group_member(
    s: &SSpace,
    t: &Tensor02Field,
    z: &Vector,
    d: &Mat,
    cfg: &DiffConfig,
) -> Result<bool> {
    invert(d, cfg)?;
    let k = s.matrix_rep(t, z)?;
    Ok(scaled_dev(&(d.transpose() * &k * d), &k) < cfg.tol)
}

impl SSpaceMorphism {
    pub fn new(name: impl Into<String>, source: SSpace, target: SSpace, f: MapFn, tau: TauFn) -> Self {
        let f = SmoothMap::new(source.total.clone(), target.total.clone(), f);
        Self {
            name: name.into(),
            source,
            target,
            f,
            tau,
            over: None,
        }
    }

    pub fn with_over(mut self, h: MapFn) -> Self {
        self.over = Some(SmoothMap::new(self.source.base.clone(), self.target.base.clone(), h));
        self
    }

    /// `(R_{a₀}, Ad(a₀⁻¹)) : λ → λ`.
    pub fn right_translation(s: &SSpace, a0: GroupElement) -> Self {
        let group = s.group.clone();
        let act = s.action.clone();
        let a = a0.clone();
        Self::new(
            format!("R[{}]", s.name),
            s.clone(),
            s.clone(),
            Arc::new(move |z: &Vector| act(z, &a)),
            Arc::new(move |b: &GroupElement| Ok(group.conjugate(&a0, b))),
        )
    }

    /// `(Γ, L) : λ → LM` with `Γ(z) = (ψ(z), E(z))`; `lm` must be the frame
    /// s-space of the same base.
    pub fn canonical(s: &SSpace, lm: &SSpace, cfg: &DiffConfig) -> Result<Self> {
        let l = s.base_change_map(cfg)?;
        let src = s.clone();
        Ok(Self::new(
            format!("Gamma[{}]", s.name),
            s.clone(),
            lm.clone(),
            Arc::new(move |z: &Vector| {
                Ok(crate::geometry::FrameBundle::join(&src.project(z)?, &src.frame_matrix(z)?))
            }),
            Arc::new(move |a: &GroupElement| Ok(GroupElement(l.eval(a)?))),
        ))
    }

    pub fn apply(&self, z: &Vector) -> Result<Vector> {
        self.f.eval(z)
    }

    pub fn tau(&self, a: &GroupElement) -> Result<GroupElement> {
        (self.tau)(a)
    }

    fn base_map(&self, p: &Vector) -> Result<Vector> {
        match &self.over {
            Some(h) => h.eval(p),
            None => Ok(p.clone()),
        }
    }

    fn require_identity_over(&self) -> Result<()> {
        if self.over.is_some() {
            return Err(Error::InvalidConfig(format!(
                "morphism {} covers a non-identity base map",
                self.name
            )));
        }
        Ok(())
    }

    /// `ψ′∘f = h∘ψ`, `f(z·a) = f(z)·τ(a)` and `τ(ab) = τ(a)τ(b)`.
    pub fn verify_morphism(&self, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> MorphismReport {
        let mut proj = MaxTracker::default();
        let mut equiv = MaxTracker::default();
        let mut hom = MaxTracker::default();
        for _ in 0..samples {
            let r = (|| -> Result<(f64, f64, f64)> {
                let (z, a, za) = self.source.sample_moved(rng)?;
                let fz = self.apply(&z)?;
                let p = (self.target.project(&fz)? - self.base_map(&self.source.project(&z)?)?).amax();
                let ta = self.tau(&a)?;
                let e = (self.apply(&za)? - self.target.act(&fz, &ta)?).amax() / fz.amax().max(1.0);
                let b = self.source.group.random_element(rng)?;
                let tab = self.tau(&self.source.group.mul(&a, &b))?;
                let prod = self.target.group.mul(&ta, &self.tau(&b)?);
                Ok((p, e, scaled_dev(&tab.0, &prod.0)))
            })();
            let (p, e, h) = r.unwrap_or((f64::INFINITY, f64::INFINITY, f64::INFINITY));
            proj.push(p);
            equiv.push(e);
            hom.push(h);
        }
        MorphismReport {
            projection: proj.report(cfg.tol),
            equivariance: equiv.report(cfg.tol),
            homomorphism: hom.report(cfg.tol),
        }
    }

    /// `C(z)` with `E′(f(z)) = E(z)·C(z)`.
    pub fn linking_map(&self, z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
        self.require_identity_over()?;
        let e = self.source.frame_matrix(z)?;
        let e2 = self.target.frame_matrix(&self.apply(z)?)?;
        let ls = solve_least_squares(&e, &e2, cfg)?;
        let tol = 10.0 * cfg.tol * e2.norm().max(1.0);
        if ls.residual > tol {
            return Err(Error::ResidualTooLarge {
                residual: ls.residual,
                tol,
            });
        }
        Ok(ls.solution)
    }

    /// `C(z·a) = L(a)⁻¹·C(z)·L′(τ(a))`.
    pub fn check_cocycle(&self, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let dev = (|| -> Result<f64> {
                let (z, a, za) = self.source.sample_moved(rng)?;
                let l = self.source.extract_base_change(&a, &z, cfg)?;
                let l2 = self.target.extract_base_change(&self.tau(&a)?, &self.apply(&z)?, cfg)?;
                let predicted = invert(&l, cfg)? * self.linking_map(&z, cfg)? * l2;
                Ok(scaled_dev(&self.linking_map(&za, cfg)?, &predicted))
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        worst.report(cfg.tol)
    }

    /// `ᵏ′T(f(z))`, verified against `C(z)ᵀ·ᵏT(z)·C(z)`.
    pub fn pullback_matrix(&self, t: &Tensor02Field, z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
        let direct = self.target.matrix_rep(t, &self.apply(z)?)?;
        let c = self.linking_map(z, cfg)?;
        let predicted = c.transpose() * self.source.matrix_rep(t, z)? * &c;
        let dev = scaled_dev(&direct, &predicted);
        if dev.is_nan() || dev >= cfg.tol {
            return Err(Error::ResidualTooLarge {
                residual: dev,
                tol: cfg.tol,
            });
        }
        Ok(direct)
    }

    /// Max deviation of `ᵏ′T∘f` from `Cᵀ·ᵏT·C` over samples.
    pub fn check_pullback(&self, t: &Tensor02Field, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let dev = (|| -> Result<f64> {
                let z = self.source.sample_point(rng);
                let direct = self.target.matrix_rep(t, &self.apply(&z)?)?;
                let c = self.linking_map(&z, cfg)?;
                Ok(scaled_dev(&direct, &(c.transpose() * self.source.matrix_rep(t, &z)? * &c)))
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        worst.report(cfg.tol)
    }

    fn tensor_condition(&self, x: &Mat, z: &Vector, a: &GroupElement, cfg: &DiffConfig) -> Result<f64> {
        let l = self.source.extract_base_change(a, z, cfg)?;
        let l2 = self.target.extract_base_change(&self.tau(a)?, &self.apply(z)?, cfg)?;
        Ok(scaled_dev(&(l.transpose() * x * &l), &(l2.transpose() * x * &l2)))
    }

    /// Whether `ᵏ′T∘f` is the representation of a tensor on `M`:
    /// `L(a)ᵀ·F·L(a) = L′(τ(a))ᵀ·F·L′(τ(a))` with `F = ᵏ′T(f(z))`.
    pub fn comes_from_tensor(&self, t: &Tensor02Field, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> CheckReport {
        let mut worst = MaxTracker::default();
        for _ in 0..samples {
            let dev = (|| -> Result<f64> {
                let (z, a, _) = self.source.sample_moved(rng)?;
                let f = self.target.matrix_rep(t, &self.apply(&z)?)?;
                self.tensor_condition(&f, &z, &a, cfg)
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        worst.report(cfg.tol)
    }

    /// `ᵏ′T∘f = ᵏT`, cross-checked against `C(z) ∈ G_T(z)`.
    pub fn is_invariant_tensor(&self, t: &Tensor02Field, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> InvarianceReport {
        let mut worst = MaxTracker::default();
        let mut agrees = true;
        for _ in 0..samples {
            let r = (|| -> Result<(f64, bool)> {
                let z = self.source.sample_point(rng);
                let dev = scaled_dev(&self.target.matrix_rep(t, &self.apply(&z)?)?, &self.source.matrix_rep(t, &z)?);
                let c = self.linking_map(&z, cfg)?;
                let member = invariance_group_member(&self.source, t, &z, &c, cfg)?;
                Ok((dev, member))
            })();
            match r {
                Ok((dev, member)) => {
                    agrees &= (dev < cfg.tol) == member;
                    worst.push(dev);
                }
                Err(_) => {
                    agrees = false;
                    worst.push(f64::INFINITY);
                }
            }
        }
        InvarianceReport {
            check: worst.report(cfg.tol),
            membership_agrees: agrees,
        }
    }

    /// `(C(z)ᵀ)ʲ·ᵏT(z)·C(z)ʲ`, each intermediate step checked on `checks` random
    /// group elements for coming from a tensor.
    pub fn iterate_pullback(
        &self,
        t: &Tensor02Field,
        j: usize,
        z: &Vector,
        checks: usize,
        rng: &mut Rng,
        cfg: &DiffConfig,
    ) -> Result<Mat> {
        let mut x = self.source.matrix_rep(t, z)?;
        if j == 0 {
            return Ok(x);
        }
        let c = self.linking_map(z, cfg)?;
        for step in 1..=j {
            x = c.transpose() * &x * &c;
            for _ in 0..checks {
                let a = self.source.group.random_element(rng)?;
                let dev = self.tensor_condition(&x, z, &a, cfg)?;
                if dev.is_nan() || dev >= cfg.tol {
                    return Err(Error::NotATensor { step, deviation: dev });
                }
            }
        }
        Ok(x)
    }

    fn pushed_source_frames(&self, z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
        let e = self.source.frame_matrix(z)?;
        let p = self.source.project(z)?;
        match &self.over {
            None => Ok(e),
            Some(h) => {
                let cols = (0..e.ncols())
                    .map(|i| h.push(&p, &e.column(i).into_owned(), cfg))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Mat::from_columns(&cols))
            }
        }
    }

    /// `A(z)` with `[h_*E(z), 0] = E′(f(z))·A(z)`.
    pub fn over_map(&self, z: &Vector, cfg: &DiffConfig) -> Result<Mat> {
        let n = self.source.n();
        let n2 = self.target.n();
        let pushed = self.pushed_source_frames(z, cfg)?;
        let rank = numerical_rank(&pushed, cfg);
        if rank < n {
            return Err(Error::RankDeficient { rank, expected: n });
        }
        let mut lhs = Mat::zeros(pushed.nrows(), n2);
        lhs.view_mut((0, 0), (pushed.nrows(), n)).copy_from(&pushed);
        let e2 = self.target.frame_matrix(&self.apply(z)?)?;
        let ls = solve_least_squares(&e2, &lhs, cfg)?;
        let tol = 10.0 * cfg.tol * lhs.norm().max(1.0);
        if ls.residual > tol {
            return Err(Error::ResidualTooLarge {
                residual: ls.residual,
                tol,
            });
        }
        Ok(ls.solution)
    }

    /// Injective immersion `h`, immersion `f` and constant over-map, all spot-checked.
    pub fn is_subsspace(&self, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> SubsSpaceReport {
        let h = self
            .over
            .clone()
            .unwrap_or_else(|| SmoothMap::identity(self.source.base.clone()));
        let base = &self.source.base;
        let mut h_injective = true;
        let mut h_immersion = true;
        let mut f_immersion = true;
        let mut spread = MaxTracker::default();
        let z0 = self.source.sample_point(rng);
        let a0 = self.over_map(&z0, cfg);
        for _ in 0..samples {
            let p = base.sample(rng);
            let q = base.sample(rng);
            if (&p - &q).amax() > 1e-3 {
                match (h.eval(&p), h.eval(&q)) {
                    (Ok(hp), Ok(hq)) => h_injective &= (hp - hq).amax() > 1e-9,
                    _ => h_injective = false,
                }
            }
            h_immersion &= tangent_rank(&h, &p, cfg).map(|r| r == base.dim()).unwrap_or(false);
            let z = self.source.sample_point(rng);
            f_immersion &= tangent_rank(&self.f, &z, cfg)
                .map(|r| r == self.source.total.dim())
                .unwrap_or(false);
            let dev = match (&a0, self.over_map(&z, cfg)) {
                (Ok(a0), Ok(a)) => scaled_dev(&a, a0),
                _ => f64::INFINITY,
            };
            spread.push(dev);
        }
        SubsSpaceReport {
            h_injective,
            h_immersion,
            f_immersion,
            constant_over_map: spread.report(cfg.tol),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Euclidean, FrameBundle, GroupManifold, ManifoldRef, Product};
    use crate::groups::{Factor, LieGroup};
    use crate::numerics::{flatten, max_abs_diff, unflatten};
    use crate::rng::{normal_matrix, seeded};
    use crate::sspace::linear_frames;

    fn cfg() -> DiffConfig {
        DiffConfig::default()
    }

    fn lm() -> SSpace {
        linear_frames(FrameBundle::flat(2))
    }

    /// Orthonormal frames of ℝ², points (p, vec(u)) with u ∈ O(2).
    fn om() -> SSpace {
        let group = LieGroup::single(Factor::Orthogonal(2));
        let total: ManifoldRef = Arc::new(Product::new(vec![
            Arc::new(Euclidean { n: 2 }),
            Arc::new(GroupManifold { group: group.clone() }),
        ]));
        SSpace::new(
            "om",
            total,
            Arc::new(Euclidean { n: 2 }),
            group,
            Arc::new(|z: &Vector| Ok(z.rows(0, 2).into_owned())),
            Arc::new(|z: &Vector, a: &GroupElement| {
                let u = unflatten(&z.as_slice()[2..], 2, 2);
                Ok(Product::join(&[z.rows(0, 2).into_owned(), flatten(&(u * &a.0))]))
            }),
            Arc::new(|z: &Vector| Ok(unflatten(&z.as_slice()[2..], 2, 2))),
            Arc::new(|p: &Vector| Ok(Product::join(&[p.clone(), flatten(&Mat::identity(2, 2))]))),
        )
    }

    fn inclusion() -> SSpaceMorphism {
        SSpaceMorphism::new(
            "incl",
            om(),
            lm(),
            Arc::new(|z: &Vector| Ok(z.clone())),
            Arc::new(|a: &GroupElement| Ok(a.clone())),
        )
    }

    fn poly_tensor(seed: u64) -> Tensor02Field {
        let mut rng = seeded(seed);
        let b0 = normal_matrix(&mut rng, 2, 2);
        let b1 = normal_matrix(&mut rng, 2, 2);
        Tensor02Field::from_ambient_matrix("poly", Arc::new(Euclidean { n: 2 }), move |p| &b0 + &b1 * p[1])
    }

    fn euclid() -> Tensor02Field {
        Tensor02Field::from_ambient_matrix("g", Arc::new(Euclidean { n: 2 }), |_| Mat::identity(2, 2))
    }

    #[test]
    fn canonical_morphism_has_identity_linking_map() {
        let s = om();
        let m = SSpaceMorphism::canonical(&s, &lm(), &cfg()).unwrap();
        let mut rng = seeded(1);
        assert!(m.verify_morphism(30, &mut rng, &cfg()).pass());
        let z = s.sample_point(&mut rng);
        assert!(max_abs_diff(&m.linking_map(&z, &cfg()).unwrap(), &Mat::identity(2, 2)) < 1e-12);
        let r = m.is_invariant_tensor(&poly_tensor(3), 30, &mut rng, &cfg());
        assert!(r.check.pass && r.membership_agrees);
    }

    #[test]
    fn right_translation_links_by_base_change() {
        let s = lm();
        let mut rng = seeded(2);
        let a0 = s.group.random_element(&mut rng).unwrap();
        let m = SSpaceMorphism::right_translation(&s, a0.clone());
        assert!(m.verify_morphism(30, &mut rng, &cfg()).pass());
        let z = s.sample_point(&mut rng);
        let c = m.linking_map(&z, &cfg()).unwrap();
        assert!(max_abs_diff(&c, &a0.0) < 1e-10);
        assert!(m.check_cocycle(30, &mut rng, &cfg()).pass);
        let t = poly_tensor(4);
        let pulled = m.pullback_matrix(&t, &z, &cfg()).unwrap();
        let oracle = a0.0.transpose() * s.matrix_rep(&t, &z).unwrap() * &a0.0;
        assert!(scaled_dev(&pulled, &oracle) < 1e-10);
        assert_eq!(
            m.iterate_pullback(&t, 0, &z, 5, &mut rng, &cfg()).unwrap(),
            s.matrix_rep(&t, &z).unwrap()
        );
        // Ad(a₀⁻¹) does not match L here, so the first iterate is not a tensor.
        match m.iterate_pullback(&t, 3, &z, 5, &mut rng, &cfg()) {
            Err(Error::NotATensor { step, .. }) => assert_eq!(step, 1),
            other => panic!("expected NotATensor, got {other:?}"),
        }
    }

    #[test]
    fn perturbed_map_is_not_a_morphism() {
        let mut m = inclusion();
        m.f = SmoothMap::new(
            m.source.total.clone(),
            m.target.total.clone(),
            Arc::new(|z: &Vector| {
                let mut w = z.clone();
                w[0] += 1e-3 * z[2];
                Ok(w)
            }),
        );
        assert!(!m.verify_morphism(30, &mut seeded(3), &cfg()).pass());
    }

    #[test]
    fn inclusion_pullback_and_tensor_conditions() {
        let m = inclusion();
        let mut rng = seeded(5);
        assert!(m.check_pullback(&poly_tensor(6), 30, &mut rng, &cfg()).pass);
        // L′∘τ = L: every tensor pulls back to a tensor.
        assert!(m.comes_from_tensor(&poly_tensor(7), 30, &mut rng, &cfg()).pass);
        let r = m.is_subsspace(20, &mut rng, &cfg());
        assert!(r.pass(), "{r:?}");
        let z = m.source.sample_point(&mut rng);
        assert!(max_abs_diff(&m.over_map(&z, &cfg()).unwrap(), &Mat::identity(2, 2)) < 1e-10);
    }

    #[test]
    fn translation_on_orthonormal_frames_preserves_metric_iterates() {
        let s = om();
        let mut rng = seeded(6);
        let a0 = s.group.random_element(&mut rng).unwrap();
        let m = SSpaceMorphism::right_translation(&s, a0);
        let r = m.is_invariant_tensor(&euclid(), 20, &mut rng, &cfg());
        assert!(r.check.pass && r.membership_agrees);
        let z = s.sample_point(&mut rng);
        let c = m.linking_map(&z, &cfg()).unwrap();
        assert!((c.determinant().abs() - 1.0).abs() < 1e-6);
        let poly = poly_tensor(9);
        let r = m.is_invariant_tensor(&poly, 20, &mut rng, &cfg());
        assert!(!r.check.pass && r.membership_agrees);
    }

    #[test]
    fn invariance_group_examples() {
        let s = om();
        let mut rng = seeded(7);
        let z = s.sample_point(&mut rng);
        let g = euclid();
        assert!(invariance_group_member(&s, &g, &z, &Mat::identity(2, 2), &cfg()).unwrap());
        let q = s.group.random_element(&mut rng).unwrap();
        assert!(invariance_group_member(&s, &g, &z, &q.0, &cfg()).unwrap());
        assert!(!invariance_group_member(&s, &g, &z, &(Mat::identity(2, 2) * 2.0), &cfg()).unwrap());
        assert!(matches!(
            invariance_group_member(&s, &g, &z, &Mat::zeros(2, 2), &cfg()),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn invariance_group_conjugation() {
        let s = lm();
        let g = euclid();
        let mut rng = seeded(8);
        let (z, a, za) = s.sample_moved(&mut rng).unwrap();
        let l = s.extract_base_change(&a, &z, &cfg()).unwrap();
        // G_T(z) = K^{-1/2}·O(2)·K^{1/2} for K = ᵏg(z) positive definite.
        let (vals, vecs) = crate::numerics::symmetric_eigen(&s.matrix_rep(&g, &z).unwrap());
        let root = |p: f64| &vecs * Mat::from_diagonal(&Vector::from_iterator(2, vals.iter().map(|v| v.powf(p)))) * vecs.transpose();
        let r = LieGroup::single(Factor::Orthogonal(2)).random_element(&mut rng).unwrap();
        let d = root(-0.5) * &r.0 * root(0.5);
        assert!(invariance_group_member(&s, &g, &z, &d, &cfg()).unwrap());
        let l_inv = invert(&l, &cfg()).unwrap();
        for candidate in [&l_inv * &d * &l, Mat::from_row_slice(2, 2, &[1.0, 0.3, 0.0, 1.0])] {
            assert_eq!(
                invariance_group_member(&s, &g, &za, &candidate, &cfg()).unwrap(),
                invariance_group_member(&s, &g, &z, &(&l * &candidate * &l_inv), &cfg()).unwrap()
            );
        }
        assert!(invariance_group_member(&s, &g, &za, &(&l_inv * &d * &l), &cfg()).unwrap());
    }

    #[test]
    fn scalar_translation_iterates() {
        let s = lm();
        let mut rng = seeded(9);
        let m = SSpaceMorphism::right_translation(&s, GroupElement(Mat::identity(2, 2) * 1.5));
        let t = poly_tensor(10);
        let z = s.sample_point(&mut rng);
        let it = m.iterate_pullback(&t, 2, &z, 5, &mut rng, &cfg()).unwrap();
        let c2 = Mat::identity(2, 2) * 2.25;
        assert!(scaled_dev(&it, &(c2.transpose() * s.matrix_rep(&t, &z).unwrap() * &c2)) < 1e-10);
    }

    #[test]
    fn over_map_is_inverse_linking_map_over_identity() {
        let s = lm();
        let mut rng = seeded(10);
        let a0 = s.group.random_element(&mut rng).unwrap();
        let m = SSpaceMorphism::right_translation(&s, a0);
        let z = s.sample_point(&mut rng);
        let a = m.over_map(&z, &cfg()).unwrap();
        let c = m.linking_map(&z, &cfg()).unwrap();
        assert!(max_abs_diff(&(a * c), &Mat::identity(2, 2)) < 1e-9);
    }

    #[test]
    fn z_dependent_over_map_is_not_subsspace() {
        // Rescaling frames by a function of p makes A depend on z.
        let s = lm();
        let m = SSpaceMorphism::new(
            "shear",
            s.clone(),
            s.clone(),
            Arc::new(|z: &Vector| {
                let mut w = z.clone();
                let scale = 1.0 + 0.5 * z[0].sin().powi(2);
                for i in 2..6 {
                    w[i] *= scale;
                }
                Ok(w)
            }),
            Arc::new(|a: &GroupElement| Ok(a.clone())),
        );
        let mut rng = seeded(11);
        assert!(m.verify_morphism(20, &mut rng, &cfg()).pass());
        assert!(!m.is_subsspace(20, &mut rng, &cfg()).constant_over_map.pass);
    }

    #[test]
    fn iterate_invariance_implies_invariance() {
        // With a constant linking map, Cᵀ·X_k·C = X_k forces Cᵀ·T·C = T.
        let mut rng = seeded(12);
        for trial in 0..20 {
            let t = normal_matrix(&mut rng, 3, 3);
            let c = if trial % 2 == 0 {
                normal_matrix(&mut rng, 3, 3) + Mat::identity(3, 3) * 2.0
            } else {
                // an element of G_T when T is the identity
                normal_matrix(&mut rng, 3, 3).qr().q()
            };
            let t = if trial % 2 == 0 { t } else { Mat::identity(3, 3) };
            let mut x = t.clone();
            for _ in 0..3 {
                x = c.transpose() * &x * &c;
            }
            let iterate_invariant = scaled_dev(&(c.transpose() * &x * &c), &x) < 1e-9;
            let invariant = scaled_dev(&(c.transpose() * &t * &c), &t) < 1e-9;
            assert!(!iterate_invariant || invariant);
            assert_eq!(iterate_invariant, trial % 2 == 1);
        }
    }
}
