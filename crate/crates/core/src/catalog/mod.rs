//! Concrete s-spaces with their tensors, morphisms, connections and the
//! machine-checkable claims each one is expected to satisfy.

mod flat;
mod hopf;
mod liegroup;
pub mod quat;
mod tangent;

pub use flat::{frame_connection, lm_flat, minkowski, orthonormal_frames_flat, punctured};
pub use hopf::{frame_algebra, hopf_bundle};
pub use liegroup::{all_bases, ortho_bases, pair};
pub use tangent::{tangent_flat, tangent_sphere, unit_tangent_sphere};

use std::fmt;
use std::sync::Arc;

use crate::connections::{push_projection, SSpaceConnection};
use crate::error::{Error, Result};
use crate::geometry::{random_tangent, FrameBundle, ManifoldRef, Tensor02Field};
use crate::groups::AlgebraElement;
use crate::morphisms::SSpaceMorphism;
use crate::numerics::{DiffConfig, Mat, Vector};
use crate::report::{CheckReport, MaxTracker};
use crate::rng::{normal_matrix, seeded, sub_seed, Rng};
use crate::sspace::{linear_frames, scaled_dev, SSpace};

/// Groups of claims selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Structure,
    Correspondence,
    Morphisms,
    Connections,
    Naturality,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Structure,
        Suite::Correspondence,
        Suite::Morphisms,
        Suite::Connections,
        Suite::Naturality,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Structure => "structure",
            Suite::Correspondence => "correspondence",
            Suite::Morphisms => "morphisms",
            Suite::Connections => "connections",
            Suite::Naturality => "naturality",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sampling budget and tolerances handed to every claim.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub samples: usize,
    /// For closed-form quantities.
    pub tol: f64,
    /// For anything that goes through finite differences.
    pub fd_tol: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            samples: 200,
            tol: 1e-7,
            fd_tol: 1e-4,
        }
    }
}

impl Params {
    pub fn cfg(&self) -> DiffConfig {
        DiffConfig::default().with_tol(self.tol)
    }

    pub fn fd(&self) -> DiffConfig {
        DiffConfig::default().with_tol(self.fd_tol)
    }
}

pub type CheckFn = Arc<dyn Fn(&Params, &mut Rng) -> CheckReport + Send + Sync>;

/// One expected property of a catalog entry.
#[derive(Clone)]
pub struct Claim {
    pub name: String,
    /// Short description of the property being checked.
    pub anchor: String,
    pub suite: Suite,
    check: CheckFn,
}

impl fmt::Debug for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Claim({} [{}])", self.name, self.suite)
    }
}

impl Claim {
    pub fn new<F>(name: impl Into<String>, anchor: impl Into<String>, suite: Suite, check: F) -> Self
    where
        F: Fn(&Params, &mut Rng) -> CheckReport + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            suite,
            check: Arc::new(check),
        }
    }

    pub fn evaluate(&self, params: &Params, rng: &mut Rng) -> CheckReport {
        (self.check)(params, rng)
    }
}

/// An expected failure: passes when `r` fails by more than `10·tol`.
pub fn negated(r: CheckReport, tol: f64) -> CheckReport {
    let clear = !r.max_deviation.is_finite() || r.max_deviation > 10.0 * tol;
    CheckReport::with_verdict(!r.pass && clear, r.max_deviation, r.samples)
}

/// Report for a yes/no outcome that carries no residual of its own.
pub fn verdict(pass: bool, samples: usize) -> CheckReport {
    CheckReport::with_verdict(pass, if pass { 0.0 } else { f64::INFINITY }, samples)
}

/// Largest scaled deviation of a sampled matrix from a reference.
pub fn matrix_sweep<F>(samples: usize, rng: &mut Rng, tol: f64, reference: &Mat, mut value: F) -> CheckReport
where
    F: FnMut(&mut Rng) -> Result<Mat>,
{
    let mut worst = MaxTracker::default();
    for _ in 0..samples {
        worst.push(value(rng).map(|m| scaled_dev(&m, reference)).unwrap_or(f64::INFINITY));
    }
    worst.report(tol)
}

/// A named instance together with everything its claims refer to.
#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub anchor: String,
    pub sspace: SSpace,
    pub connections: Vec<SSpaceConnection>,
    pub tensors: Vec<Tensor02Field>,
    pub morphisms: Vec<SSpaceMorphism>,
    pub claims: Vec<Claim>,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("sspace", &self.sspace)
            .field("claims", &self.claims.len())
            .finish()
    }
}

impl CatalogEntry {
    fn new(name: &str, sspace: SSpace) -> Self {
        let anchor = INSTANCES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, a)| a.to_string())
            .unwrap_or_default();
        Self {
            name: name.into(),
            anchor,
            sspace,
            connections: Vec::new(),
            tensors: Vec::new(),
            morphisms: Vec::new(),
            claims: Vec::new(),
        }
    }

    fn claim(&mut self, c: Claim) {
        self.claims.push(c);
    }

    fn claims(&mut self, cs: Vec<Claim>) {
        self.claims.extend(cs);
    }

    pub fn tensor(&self, name: &str) -> Option<&Tensor02Field> {
        self.tensors.iter().find(|t| t.name == name)
    }

    pub fn connection(&self, name: &str) -> Option<&SSpaceConnection> {
        self.connections.iter().find(|c| c.name == name)
    }

    pub fn morphism(&self, name: &str) -> Option<&SSpaceMorphism> {
        self.morphisms.iter().find(|m| m.name == name)
    }

    pub fn claims_in(&self, suite: Suite) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(move |c| c.suite == suite)
    }
}

/// Instance names in their stable order, with a one-line description.
pub const INSTANCES: [(&str, &str); 13] = [
    ("lm-flat-2", "linear frame bundle of the plane, L(a) = a"),
    ("oframes-flat-2", "orthonormal frames of the plane; scalar multiples of the metric"),
    ("punctured-2", "non-free GL(2) action on a punctured factor"),
    ("tangent-flat-2", "Sasaki and Cheeger-Gromoll metrics on the tangent bundle of the plane"),
    ("tangent-sphere2", "Sasaki and Cheeger-Gromoll metrics on the tangent bundle of the 2-sphere"),
    ("unit-tangent-sphere2", "unit tangent bundle of the 2-sphere as a subs-space"),
    ("frame-conn-2", "frames induced by a linear connection over the frame bundle"),
    ("liegroup-pair-so3", "SO(3) x SO(3) over SO(3) with left-invariant frames"),
    ("liegroup-bases-so3", "SO(3) with all bases of its algebra"),
    ("liegroup-ortho-so3", "SO(3) with orthonormal rotations of a fixed basis"),
    ("hopf", "bundle metrics on the Hopf fibration, natural iff the fiber scale is constant"),
    ("hopf-frame-algebra", "horizontal lifts plus algebra frames on the Hopf bundle"),
    ("minkowski-p51", "frames adapted to a constant-signature tensor"),
];

pub fn names() -> Vec<&'static str> {
    INSTANCES.iter().map(|(n, _)| *n).collect()
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    Ok(match name {
        "lm-flat-2" => flat::lm_flat(2),
        "oframes-flat-2" => flat::orthonormal_frames_flat(2),
        "punctured-2" => flat::punctured(2),
        "tangent-flat-2" => tangent::tangent_flat(2),
        "tangent-sphere2" => tangent::tangent_sphere(),
        "unit-tangent-sphere2" => tangent::unit_tangent_sphere(),
        "frame-conn-2" => flat::frame_connection(2),
        "liegroup-pair-so3" => liegroup::pair(),
        "liegroup-bases-so3" => liegroup::all_bases(),
        "liegroup-ortho-so3" => liegroup::ortho_bases(),
        "hopf" => hopf::hopf_bundle(1.0),
        "hopf-frame-algebra" => hopf::frame_algebra(),
        "minkowski-p51" => flat::minkowski(),
        other => return Err(Error::InvalidConfig(format!("unknown instance `{other}`"))),
    })
}

pub fn all() -> Vec<CatalogEntry> {
    names().into_iter().map(|n| entry(n).expect("registered name")).collect()
}

/// `T(p)(u, w) = uᵀ (A₀ + Σ pᵢ Aᵢ) w` with seeded Gaussian coefficients.
pub fn polynomial_tensor(name: impl Into<String>, m: ManifoldRef, seed: u64) -> Tensor02Field {
    let d = m.ambient_dim();
    let mut rng = seeded(seed);
    let a0 = normal_matrix(&mut rng, d, d);
    let linear: Vec<Mat> = (0..d).map(|_| normal_matrix(&mut rng, d, d) * 0.3).collect();
    Tensor02Field::from_ambient_matrix(name, m, move |p: &Vector| {
        let mut g = a0.clone();
        for (i, a) in linear.iter().enumerate() {
            g += a * p[i];
        }
        g
    })
}

/// Three polynomial tensors on the base of `s`, seeded by `label`.
pub fn sweep_tensors(s: &SSpace, label: &str) -> Vec<Tensor02Field> {
    (0..3)
        .map(|i| polynomial_tensor(format!("poly{i}"), s.base.clone(), sub_seed(0, label, i)))
        .collect()
}

/// A fixed group element drawn from a seed.
fn fixed_element(s: &SSpace, seed: u64) -> crate::groups::GroupElement {
    s.group
        .random_element(&mut seeded(seed))
        .expect("group sampler exhausted")
}

/// Rigid base change, homomorphism, fibre invariance of ψ, dimension identity,
/// constant stabiliser dimension and the witness finder when present.
pub fn structure_claims(s: &SSpace, label: &str) -> Vec<Claim> {
    let mut out = Vec::new();
    let sc = s.clone();
    out.push(Claim::new(
        format!("{label}rigidity"),
        "base change independent of the point",
        Suite::Structure,
        move |p, rng| sc.verify_rigidity(p.samples, rng, &p.cfg()),
    ));
    let sc = s.clone();
    out.push(Claim::new(
        format!("{label}base-change-homomorphism"),
        "L(ab) = L(a)L(b)",
        Suite::Structure,
        move |p, rng| sc.check_base_change_homomorphism(p.samples, rng, &p.cfg()),
    ));
    let sc = s.clone();
    out.push(Claim::new(
        format!("{label}projection-invariance"),
        "projection constant on orbits",
        Suite::Structure,
        move |p, rng| sc.check_projection_invariance(p.samples, rng, &p.cfg()),
    ));
    let sc = s.clone();
    out.push(Claim::new(
        format!("{label}dimension-identity"),
        "dim N = dim M + dim O - dim stabilizer",
        Suite::Structure,
        move |p, rng| sc.dimension_identity(p.samples.min(50), rng, &p.fd()),
    ));
    let sc = s.clone();
    out.push(Claim::new(
        format!("{label}stabilizer-consistency"),
        "stabilizer dimension constant over fibres",
        Suite::Structure,
        move |p, rng| match sc.stabilizer_consistency(STABILIZER_SAMPLES, rng, &p.fd()) {
            Ok((spread, _)) => CheckReport::from_deviation(spread as f64, 0.5, STABILIZER_SAMPLES),
            Err(_) => verdict(false, STABILIZER_SAMPLES),
        },
    ));
    if s.witness.is_some() {
        let sc = s.clone();
        out.push(Claim::new(
            format!("{label}fiber-witness"),
            "action transitive on fibres",
            Suite::Structure,
            move |p, rng| sc.check_witness(p.samples, rng, &p.cfg()).expect("witness present"),
        ));
    }
    out
}

/// Fibre-spread samples used for the stabiliser consistency claim.
pub const STABILIZER_SAMPLES: usize = 20;

/// The stabiliser has the stated dimension at every fibre-spread sample.
pub fn stabilizer_value_claim(s: &SSpace, label: &str, expected: usize) -> Claim {
    let sc = s.clone();
    Claim::new(
        format!("{label}stabilizer-dim"),
        "stabilizer dimension at sampled points",
        Suite::Structure,
        move |p, rng| {
            let mut worst = MaxTracker::default();
            match sc.fiber_spread_points(STABILIZER_SAMPLES, rng) {
                Ok(points) => {
                    for z in points {
                        let dev = sc
                            .stabilizer_dim(&z, &p.fd())
                            .map(|d| d.abs_diff(expected) as f64)
                            .unwrap_or(f64::INFINITY);
                        worst.push(dev);
                    }
                }
                Err(_) => worst.push(f64::INFINITY),
            }
            worst.report(0.5)
        },
    )
}

/// `L(a)` equals `expected(a)` at the reference point.
pub fn base_change_claim<F>(s: &SSpace, label: &str, anchor: &str, expected: F) -> Claim
where
    F: Fn(&crate::groups::GroupElement) -> Mat + Send + Sync + 'static,
{
    let sc = s.clone();
    Claim::new(format!("{label}base-change-value"), anchor, Suite::Structure, move |p, rng| {
        let mut worst = MaxTracker::default();
        for _ in 0..p.samples {
            let dev = (|| -> Result<f64> {
                let (z, a, _) = sc.sample_moved(rng)?;
                Ok(scaled_dev(&sc.extract_base_change(&a, &z, &p.cfg())?, &expected(&a)))
            })()
            .unwrap_or(f64::INFINITY);
            worst.push(dev);
        }
        worst.report(p.tol)
    })
}

/// Invariance law for every listed tensor and both directions of the
/// tensor/matrix correspondence.
pub fn correspondence_claims(s: &SSpace, tensors: &[Tensor02Field], label: &str) -> Vec<Claim> {
    let mut out = Vec::new();
    for t in tensors {
        let sc = s.clone();
        let f = s.matrix_map_of(t);
        out.push(Claim::new(
            format!("{label}invariance[{}]", t.name),
            "representation transforms by L(a)",
            Suite::Correspondence,
            move |p, rng| sc.check_invariance(&f, p.samples, rng, &p.cfg()),
        ));
    }
    for t in tensors {
        let sc = s.clone();
        let tc = t.clone();
        out.push(Claim::new(
            format!("{label}roundtrip-matrix[{}]", t.name),
            "matrix -> tensor -> matrix is the identity",
            Suite::Correspondence,
            move |p, rng| roundtrip_matrix(&sc, &tc, p, rng),
        ));
        let sc = s.clone();
        let tc = t.clone();
        out.push(Claim::new(
            format!("{label}roundtrip-tensor[{}]", t.name),
            "tensor -> matrix -> tensor is the identity",
            Suite::Correspondence,
            move |p, rng| roundtrip_tensor(&sc, &tc, p, rng),
        ));
    }
    out
}

/// Samples used by `tensor_from_matrix` to certify invariance before rebuilding a tensor.
const REBUILD_CHECKS: usize = 20;

fn roundtrip_matrix(s: &SSpace, t: &Tensor02Field, p: &Params, rng: &mut Rng) -> CheckReport {
    let cfg = p.cfg();
    let f = s.matrix_map_of(t);
    let rebuilt = match s.tensor_from_matrix(&f, REBUILD_CHECKS, rng, &cfg) {
        Ok(t) => t,
        Err(_) => return verdict(false, 0),
    };
    let mut worst = MaxTracker::default();
    for _ in 0..p.samples {
        let z = s.sample_point(rng);
        let dev = match (s.matrix_rep(&rebuilt, &z), f.eval(&z)) {
            (Ok(a), Ok(b)) => scaled_dev(&a, &b),
            _ => f64::INFINITY,
        };
        worst.push(dev);
    }
    worst.report(p.tol)
}

fn roundtrip_tensor(s: &SSpace, t: &Tensor02Field, p: &Params, rng: &mut Rng) -> CheckReport {
    let cfg = p.cfg();
    let rebuilt = match s.tensor_from_matrix(&s.matrix_map_of(t), REBUILD_CHECKS, rng, &cfg) {
        Ok(t) => t,
        Err(_) => return verdict(false, 0),
    };
    let mut worst = MaxTracker::default();
    for _ in 0..p.samples {
        let dev = (|| -> Result<f64> {
            let x = s.base.sample(rng);
            let u = random_tangent(&*s.base, &x, rng);
            let w = random_tangent(&*s.base, &x, rng);
            let a = t.eval(&x, &u, &w)?;
            Ok((rebuilt.eval(&x, &u, &w)? - a).abs() / a.abs().max(1.0))
        })()
        .unwrap_or(f64::INFINITY);
        worst.push(dev);
    }
    worst.report(p.tol)
}

/// Morphism axioms; over the identity also the cocycle law and the pullback
/// identity for `tensors`.
pub fn morphism_claims(m: &SSpaceMorphism, tensors: &[Tensor02Field]) -> Vec<Claim> {
    let mut out = Vec::new();
    let name = m.name.clone();
    let mc = m.clone();
    out.push(Claim::new(
        format!("{name}/morphism"),
        "equivariant map over the base map",
        Suite::Morphisms,
        move |p, rng| {
            let r = mc.verify_morphism(p.samples, rng, &p.cfg());
            CheckReport::with_verdict(r.pass(), r.max_deviation(), p.samples)
        },
    ));
    if m.over.is_some() {
        return out;
    }
    let mc = m.clone();
    out.push(Claim::new(
        format!("{name}/cocycle"),
        "C(za) = L(a)^-1 C(z) L'(tau a)",
        Suite::Morphisms,
        move |p, rng| mc.check_cocycle(p.samples, rng, &p.cfg()),
    ));
    for t in tensors {
        let mc = m.clone();
        let tc = t.clone();
        out.push(Claim::new(
            format!("{name}/pullback[{}]", t.name),
            "target representation is C^T K C",
            Suite::Morphisms,
            move |p, rng| mc.check_pullback(&tc, p.samples, rng, &p.cfg()),
        ));
    }
    out
}

/// The canonical morphism into the frame bundle of a flat or spherical base.
pub fn canonical_morphism(s: &SSpace, lm: FrameBundle) -> SSpaceMorphism {
    let target = linear_frames(lm);
    SSpaceMorphism::canonical(s, &target, &DiffConfig::default()).expect("reference point available")
}

/// Projector axioms, horizontal lifts inverting `ψ_*`, and optionally the
/// global frame rank and the lifted-metric submersion property.
pub fn connection_claims(
    c: &SSpaceConnection,
    vtilde: Option<Vec<AlgebraElement>>,
    metric: Option<Tensor02Field>,
) -> Vec<Claim> {
    let mut out = Vec::new();
    let name = c.name.clone();
    let cc = c.clone();
    out.push(Claim::new(
        format!("{name}/projector"),
        "idempotent vertical equivariant projector",
        Suite::Connections,
        move |p, rng| {
            let r = cc.check_projector(p.samples.min(100), rng, &p.fd());
            let dev = r
                .idempotence
                .max_deviation
                .max(r.verticality.max_deviation)
                .max(r.equivariance.max_deviation);
            CheckReport::with_verdict(r.pass(), dev, r.idempotence.samples)
        },
    ));
    let cc = c.clone();
    out.push(Claim::new(
        format!("{name}/lift"),
        "horizontal lift inverts the projection differential",
        Suite::Connections,
        move |p, rng| {
            let s = &cc.sspace;
            let cfg = p.fd();
            let mut worst = MaxTracker::default();
            for _ in 0..p.samples.min(100) {
                let dev = (|| -> Result<f64> {
                    let z = s.sample_point(rng);
                    let x = s.project(&z)?;
                    let v = random_tangent(&*s.base, &x, rng);
                    let h = cc.horizontal_lift(&v, &z, &cfg)?;
                    let back = push_projection(s, &z, &h, &cfg)?;
                    let horizontal = cc.project(&z, &h)?.amax();
                    Ok(((back - &v).amax() / v.amax().max(1.0)).max(horizontal))
                })()
                .unwrap_or(f64::INFINITY);
                worst.push(dev);
            }
            worst.report(p.fd_tol)
        },
    ));
    if let Some(vt) = vtilde {
        let cc = c.clone();
        let v2 = vt.clone();
        out.push(Claim::new(
            format!("{name}/global-frame"),
            "horizontal lifts and fundamental fields span TN",
            Suite::Connections,
            move |p, rng| cc.global_frame_check(&v2, p.samples.min(50), rng, &p.fd()),
        ));
        if let Some(g) = metric {
            let cc = c.clone();
            out.push(Claim::new(
                format!("{name}/lifted-metric-submersion"),
                "lifted metric makes the projection a Riemannian submersion",
                Suite::Connections,
                move |p, rng| {
                    let lifted = cc.lifted_metric(&g, vt.clone(), &p.fd());
                    cc.check_submersion(&lifted, &g, p.samples.min(50), rng, &p.fd())
                },
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_stable_and_complete() {
        let n = names();
        assert_eq!(n.len(), 13);
        assert_eq!(n[0], "lm-flat-2");
        assert!(n.contains(&"hopf"));
        for name in n {
            let e = entry(name).unwrap();
            assert_eq!(e.name, name);
            assert!(!e.anchor.is_empty());
            assert!(!e.claims.is_empty(), "{name} has no claims");
        }
        assert!(entry("nope").is_err());
    }

    #[test]
    fn claim_names_are_unique_per_entry() {
        for e in all() {
            let mut names: Vec<&str> = e.claims.iter().map(|c| c.name.as_str()).collect();
            names.sort_unstable();
            let before = names.len();
            names.dedup();
            assert_eq!(before, names.len(), "duplicate claim names in {}", e.name);
        }
    }

    #[test]
    fn suites_parse_by_name() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
        }
        assert_eq!(Suite::parse("all"), None);
    }

    #[test]
    fn negation_requires_a_clear_margin() {
        let tol = 1e-7;
        assert!(negated(CheckReport::from_deviation(1.0, tol, 5), tol).pass);
        assert!(!negated(CheckReport::from_deviation(5e-7, tol, 5), tol).pass);
        assert!(!negated(CheckReport::from_deviation(0.0, tol, 5), tol).pass);
        assert!(negated(CheckReport::from_deviation(f64::INFINITY, tol, 5), tol).pass);
    }
}
