//! Naturality of tensors with respect to s-spaces, fibrations and atlases,
//! and the signature-adapted s-space making a constant-signature tensor natural.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{orthonormalize, FrameBundle, Manifold, ManifoldRef, Tensor02Field};
use crate::groups::{block_group, signature_matrix, GroupElement, LieGroup};
use crate::morphisms::SSpaceMorphism;
use crate::numerics::{invert, solve_least_squares, symmetric_eigen, DiffConfig, Mat, Vector};
use crate::report::MaxTracker;
use crate::rng::Rng;
use crate::sspace::{scaled_dev, MatrixFn, SSpace};

/// Verdict of a naturality test; `verdict ⇔ max_deviation < tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalityReport {
    pub verdict: bool,
    /// The constant representation (or the one at the first fibre parameter).
    pub witness: Option<Mat>,
    pub max_deviation: f64,
    pub samples: usize,
    /// Atlas member that produced the verdict, for disjunctive tests.
    pub witness_member: Option<usize>,
}

impl NaturalityReport {
    fn from_tracker(worst: MaxTracker, witness: Option<Mat>, tol: f64) -> Self {
        let r = worst.report(tol);
        Self {
            verdict: r.pass,
            witness,
            max_deviation: r.max_deviation,
            samples: r.samples,
            witness_member: None,
        }
    }

    fn failed(samples: usize) -> Self {
        Self {
            verdict: false,
            witness: None,
            max_deviation: f64::INFINITY,
            samples,
            witness_member: None,
        }
    }
}

/// Whether `ᵏT` is constant: sampled values are compared with the value at the
/// reference point.
pub fn is_lambda_natural(s: &SSpace, t: &Tensor02Field, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> NaturalityReport {
    let reference = match s.reference_point().and_then(|z| s.matrix_rep(t, &z)) {
        Ok(m) => m,
        Err(_) => return NaturalityReport::failed(0),
    };
    let mut worst = MaxTracker::default();
    for _ in 0..samples {
        let dev = s
            .sample_moved(rng)
            .and_then(|(_, _, z)| s.matrix_rep(t, &z))
            .map(|m| scaled_dev(&m, &reference))
            .unwrap_or(f64::INFINITY);
        worst.push(dev);
    }
    NaturalityReport::from_tracker(worst, Some(reference), cfg.tol)
}

/// Whether `ᵏT` is constant along every orbit, i.e. `L(a)ᵀ·ᵏT(z)·L(a) = ᵏT(z)`
/// with `ᵏT(z·a) = ᵏT(z)`. No witness: the value may vary between orbits.
pub fn is_orbit_constant(s: &SSpace, t: &Tensor02Field, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> NaturalityReport {
    let mut worst = MaxTracker::default();
    for _ in 0..samples {
        let dev = (|| -> Result<f64> {
            let (z, _, za) = s.sample_moved(rng)?;
            Ok(scaled_dev(&s.matrix_rep(t, &za)?, &s.matrix_rep(t, &z)?))
        })()
        .unwrap_or(f64::INFINITY);
        worst.push(dev);
    }
    NaturalityReport::from_tracker(worst, None, cfg.tol)
}

/// Number of fibre parameters probed by [`is_fibration_natural`].
pub const FIBER_PARAMETERS: usize = 4;

/// Whether `ᵏT(z′, w)` depends only on the fibre parameter `w`.
pub fn is_fibration_natural(
    s: &SSpace,
    t: &Tensor02Field,
    samples: usize,
    rng: &mut Rng,
    cfg: &DiffConfig,
) -> Result<NaturalityReport> {
    let split = s
        .fiber_split
        .clone()
        .ok_or_else(|| Error::MissingFiberSplit(s.name.clone()))?;
    let mut worst = MaxTracker::default();
    let mut witness = None;
    let per = samples.div_ceil(FIBER_PARAMETERS).max(1);
    for k in 0..FIBER_PARAMETERS {
        let w = split.fiber_part(&s.sample_point(rng));
        let reference = match s.matrix_rep(t, &split.with_fiber(&s.sample_point(rng), &w)) {
            Ok(m) => m,
            Err(_) => {
                worst.push(f64::INFINITY);
                continue;
            }
        };
        for _ in 0..per {
            let z = split.with_fiber(&s.sample_point(rng), &w);
            worst.push(s.matrix_rep(t, &z).map(|m| scaled_dev(&m, &reference)).unwrap_or(f64::INFINITY));
        }
        if k == 0 {
            witness = Some(reference);
        }
    }
    Ok(NaturalityReport::from_tracker(worst, witness, cfg.tol))
}

/// `(#positive, #negative, #zero)` eigenvalues of a symmetric matrix.
pub fn signature(g: &Mat, cfg: &DiffConfig) -> (usize, usize, usize) {
    let (vals, _) = symmetric_eigen(g);
    let scale = vals.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let zero = cfg.tol * scale;
    let pos = vals.iter().filter(|&&v| v > zero).count();
    let neg = vals.iter().filter(|&&v| v < -zero).count();
    (pos, neg, vals.len() - pos - neg)
}

/// Frame at `p` diagonalising `T(p)` to `diag(I_s, −I_{r−s}, 0)`: eigenvectors
/// of the Gram matrix in the orthonormal tangent basis, positives then
/// negatives then kernel, each group by decreasing magnitude, first nonzero
/// component positive, nonzero part scaled by `|λ|^{−1/2}`.
pub fn signature_frame(base: &dyn Manifold, t: &Tensor02Field, p: &Vector, cfg: &DiffConfig) -> Result<(Mat, (usize, usize, usize))> {
    let b = base.tangent_basis(p);
    let g = t.gram(p, &b)?;
    let (vals, vecs) = symmetric_eigen(&g);
    let scale = vals.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let zero = cfg.tol * scale;
    let class = |v: f64| {
        if v > zero {
            0
        } else if v < -zero {
            1
        } else {
            2
        }
    };
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&i, &j| {
        class(vals[i])
            .cmp(&class(vals[j]))
            .then(vals[j].abs().total_cmp(&vals[i].abs()))
    });
    let n = vals.len();
    let mut frame = Mat::zeros(b.nrows(), n);
    let mut counts = (0, 0, 0);
    for (k, &i) in order.iter().enumerate() {
        let mut w = vecs.column(i).into_owned();
        if let Some(first) = w.iter().find(|x| x.abs() > 1e-12) {
            if *first < 0.0 {
                w = -w;
            }
        }
        let c = class(vals[i]);
        match c {
            0 => counts.0 += 1,
            1 => counts.1 += 1,
            _ => counts.2 += 1,
        }
        let col = if c == 2 { &b * w } else { &b * w / vals[i].abs().sqrt() };
        frame.set_column(k, &col);
    }
    Ok((frame, counts))
}

/// `N = {(q, v) ∈ LM : [T(q)(v_i, v_j)] = I_sr}`, realised as the orbit of the
/// signature frame under the block group.
struct SignatureFrames {
    base: ManifoldRef,
    tensor: Tensor02Field,
    group: LieGroup,
    target: Mat,
    cfg: DiffConfig,
}

impl SignatureFrames {
    fn n(&self) -> usize {
        self.base.dim()
    }

    fn m(&self) -> usize {
        self.base.ambient_dim()
    }

    fn split(&self, x: &Vector) -> (Vector, Mat) {
        let m = self.m();
        (
            x.rows(0, m).into_owned(),
            crate::numerics::unflatten(&x.as_slice()[m..], m, self.n()),
        )
    }

    fn frame0(&self, p: &Vector) -> Mat {
        signature_frame(&*self.base, &self.tensor, p, &self.cfg)
            .map(|f| f.0)
            .unwrap_or_else(|_| Mat::from_element(self.m(), self.n(), f64::NAN))
    }
}

impl Manifold for SignatureFrames {
    fn name(&self) -> String {
        format!("N[{}]", self.tensor.name)
    }
    fn dim(&self) -> usize {
        self.n() + self.group.dim()
    }
    fn ambient_dim(&self) -> usize {
        self.m() + self.m() * self.n()
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        if x.len() != self.ambient_dim() {
            return false;
        }
        let (p, v) = self.split(x);
        self.base.contains(&p, tol)
            && self
                .tensor
                .gram(&p, &v)
                .map(|g| (g - &self.target).amax() < tol)
                .unwrap_or(false)
    }
    fn tangent_basis(&self, x: &Vector) -> Mat {
        // Along the base the point moves as (q, v0(q)·D) with D = v0(p)⁺·v fixed.
        let (p, v) = self.split(x);
        let v0 = self.frame0(&p);
        let d = solve_least_squares(&v0, &v, &self.cfg)
            .map(|ls| ls.solution)
            .unwrap_or_else(|_| Mat::identity(self.n(), self.n()));
        let tb = self.base.tangent_basis(&p);
        let h = self.cfg.step;
        let mut cols = Vec::new();
        for k in 0..tb.ncols() {
            let t = tb.column(k).into_owned();
            let plus = &self.frame0(&(&p + &t * h)) * &d;
            let minus = &self.frame0(&(&p - &t * h)) * &d;
            cols.push(FrameBundle::join(&t, &((plus - minus) / (2.0 * h))));
        }
        for xi in self.group.algebra_basis() {
            cols.push(FrameBundle::join(&Vector::zeros(self.m()), &(&v * &xi.0)));
        }
        orthonormalize(&Mat::from_columns(&cols))
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        let p = self.base.sample(rng);
        let a = self.group.random_element(rng).expect("group sampler exhausted");
        FrameBundle::join(&p, &(self.frame0(&p) * a.0))
    }
}

/// An s-space in which `T` has the constant representation `I_sr`; the
/// signature of `T` is checked on `samples` random points first.
pub fn prop51_construct(
    base: ManifoldRef,
    t: &Tensor02Field,
    s: usize,
    r: usize,
    samples: usize,
    rng: &mut Rng,
    cfg: &DiffConfig,
) -> Result<SSpace> {
    let n = base.dim();
    let group = block_group(s, r, n)?;
    let expected = (s, r - s, n - r);
    for _ in 0..samples {
        let p = base.sample(rng);
        let (_, found) = signature_frame(&*base, t, &p, cfg)?;
        if found != expected {
            return Err(Error::SignatureMismatch { expected, found });
        }
    }
    let frames = SignatureFrames {
        base: base.clone(),
        tensor: t.clone(),
        group: group.clone(),
        target: signature_matrix(s, r, n),
        cfg: *cfg,
    };
    let m = base.ambient_dim();
    let split = move |x: &Vector| -> (Vector, Mat) {
        (x.rows(0, m).into_owned(), crate::numerics::unflatten(&x.as_slice()[m..], m, n))
    };
    let section_base = base.clone();
    let section_t = t.clone();
    let section_cfg = *cfg;
    Ok(SSpace::new(
        format!("signature[{}]", t.name),
        Arc::new(frames),
        base,
        group,
        Arc::new(move |z: &Vector| Ok(split(z).0)),
        Arc::new(move |z: &Vector, a: &GroupElement| {
            let (p, v) = split(z);
            Ok(FrameBundle::join(&p, &(v * &a.0)))
        }),
        Arc::new(move |z: &Vector| Ok(split(z).1)),
        Arc::new(move |p: &Vector| {
            let (f, _) = signature_frame(&*section_base, &section_t, p, &section_cfg)?;
            Ok(FrameBundle::join(p, &f))
        }),
    ))
}

/// `λ_A`: frames `E(z)·A(z)`, rejected when `A` is singular or rigidity is lost.
pub fn frame_twist(
    s: &SSpace,
    name: &str,
    a: MatrixFn,
    samples: usize,
    rng: &mut Rng,
    cfg: &DiffConfig,
) -> Result<SSpace> {
    for _ in 0..samples {
        let z = s.sample_point(rng);
        invert(&a(&z)?, cfg)?;
    }
    let frames = s.frames.clone();
    let twisted = s.with_frames(
        name,
        Arc::new(move |z: &Vector| Ok(frames(z)? * a(z)?)),
    );
    let rigidity = twisted.verify_rigidity(samples, rng, cfg);
    if !rigidity.pass {
        return Err(Error::RigidityLost {
            deviation: rigidity.max_deviation,
        });
    }
    Ok(twisted)
}

/// A finite family of s-spaces over one base, linked pairwise by morphisms
/// whose manifold maps are diffeomorphisms.
#[derive(Debug, Clone)]
pub struct Atlas {
    pub members: Vec<SSpace>,
    /// `(i, j, (f_ij, τ_ij))` for every ordered pair `i ≠ j`.
    pub links: Vec<(usize, usize, SSpaceMorphism)>,
}

impl Atlas {
    pub fn singleton(s: SSpace) -> Self {
        Self {
            members: vec![s],
            links: Vec::new(),
        }
    }

    /// Members sharing `N`, `ψ`, `O` and `R`, linked by `(Id_N, Id_O)`.
    pub fn identity_linked(members: Vec<SSpace>) -> Self {
        let mut links = Vec::new();
        for i in 0..members.len() {
            for j in 0..members.len() {
                if i != j {
                    links.push((
                        i,
                        j,
                        SSpaceMorphism::new(
                            format!("id[{i}->{j}]"),
                            members[i].clone(),
                            members[j].clone(),
                            Arc::new(|z: &Vector| Ok(z.clone())),
                            Arc::new(|a: &GroupElement| Ok(a.clone())),
                        ),
                    ));
                }
            }
        }
        Self { members, links }
    }

    /// Every link is a morphism and `f_ji∘f_ij = id` on samples.
    pub fn verify(&self, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> crate::report::CheckReport {
        let mut worst = MaxTracker::default();
        for (i, j, m) in &self.links {
            worst.push(m.verify_morphism(samples, rng, cfg).max_deviation());
            let back = self.links.iter().find(|(a, b, _)| a == j && b == i);
            let Some((_, _, back)) = back else {
                worst.push(f64::INFINITY);
                continue;
            };
            for _ in 0..samples {
                let z = m.source.sample_point(rng);
                let dev = m
                    .apply(&z)
                    .and_then(|w| back.apply(&w))
                    .map(|zz| (zz - &z).amax())
                    .unwrap_or(f64::INFINITY);
                worst.push(dev);
            }
        }
        let expected = self.members.len() * self.members.len().saturating_sub(1);
        if self.links.len() != expected {
            worst.push(f64::INFINITY);
        }
        worst.report(cfg.tol)
    }
}

fn combine(reports: Vec<NaturalityReport>, conjunction: bool) -> NaturalityReport {
    let samples = reports.iter().map(|r| r.samples).sum();
    if conjunction {
        let verdict = reports.iter().all(|r| r.verdict);
        let max_deviation = reports.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
        NaturalityReport {
            verdict,
            witness: reports.first().and_then(|r| r.witness.clone()),
            max_deviation,
            samples,
            witness_member: None,
        }
    } else {
        let member = reports.iter().position(|r| r.verdict);
        let max_deviation = reports.iter().map(|r| r.max_deviation).fold(f64::INFINITY, f64::min);
        NaturalityReport {
            verdict: member.is_some(),
            witness: member.and_then(|i| reports[i].witness.clone()),
            max_deviation,
            samples,
            witness_member: member,
        }
    }
}

/// `T` is λ-natural for every member.
pub fn is_atlas_natural(atlas: &Atlas, t: &Tensor02Field, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> NaturalityReport {
    combine(
        atlas.members.iter().map(|s| is_lambda_natural(s, t, samples, rng, cfg)).collect(),
        true,
    )
}

/// `T` is λ-natural for at least one member; the witness names it.
pub fn is_weak_natural(atlas: &Atlas, t: &Tensor02Field, samples: usize, rng: &mut Rng, cfg: &DiffConfig) -> NaturalityReport {
    combine(
        atlas.members.iter().map(|s| is_lambda_natural(s, t, samples, rng, cfg)).collect(),
        false,
    )
}

/// `T` is natural with respect to the fibration for every member.
pub fn is_atlas_fibration_natural(
    atlas: &Atlas,
    t: &Tensor02Field,
    samples: usize,
    rng: &mut Rng,
    cfg: &DiffConfig,
) -> Result<NaturalityReport> {
    let reports = atlas
        .members
        .iter()
        .map(|s| is_fibration_natural(s, t, samples, rng, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(reports, true))
}
