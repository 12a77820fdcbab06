//! The Hopf fibration S³ → S² as a U(1)-bundle: the principal s-space with two
//! connections, bundle metrics seen through horizontal and vertical frames,
//! an atlas of vertical rescalings, and frames built from the algebra.

use std::sync::Arc;

use super::quat::{self, HopfFrames, Quat};
use super::{
    base_change_claim, connection_claims, correspondence_claims, fixed_element, morphism_claims,
    negated, stabilizer_value_claim, structure_claims, sweep_tensors, verdict, CatalogEntry, Claim, Suite,
};
use crate::connections::SSpaceConnection;
use crate::error::{Error, Result};
use crate::geometry::{GroupManifold, ManifoldRef, Product, Sphere, Tensor02Field};
use crate::groups::{Factor, GroupElement, LieGroup};
use crate::morphisms::SSpaceMorphism;
use crate::naturality::{is_atlas_fibration_natural, is_lambda_natural, Atlas};
use crate::numerics::{block_diagonal, Mat, Vector};
use crate::report::{CheckReport, MaxTracker};
use crate::rng::Rng;
use crate::sspace::{scaled_dev, FiberSplit, SSpace};

fn s2() -> ManifoldRef {
    Arc::new(Sphere { n: 2 })
}

fn s3() -> ManifoldRef {
    Arc::new(Sphere { n: 3 })
}

fn gm(f: Factor) -> ManifoldRef {
    Arc::new(GroupManifold {
        group: LieGroup::single(f),
    })
}

fn q_at(z: &Vector) -> Quat {
    [z[0], z[1], z[2], z[3]]
}

fn rotation_at(z: &Vector, offset: usize) -> Mat {
    Mat::from_column_slice(2, 2, &z.as_slice()[offset..offset + 4])
}

fn rotation_vec(m: &Mat) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

/// Generator of so(2), whose fundamental field on S³ is `q ↦ qi`.
fn generator() -> crate::groups::AlgebraElement {
    crate::groups::AlgebraElement(Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]))
}

/// Constant 1-form on S² shifting the standard connection; zero gives `⟨·, qi⟩`.
#[derive(Clone, Copy)]
struct Shift([f64; 3]);

impl Shift {
    const NONE: Shift = Shift([0.0; 3]);
    const SECOND: Shift = Shift([0.3, -0.2, 0.5]);

    fn eval(&self, w: &Vector) -> f64 {
        self.0[0] * w[0] + self.0[1] * w[1] + self.0[2] * w[2]
    }

    /// Horizontal lift of `w` at `q` for `ω′ = ω + ⟨c, π_*·⟩`.
    fn lift(&self, q: Quat, w: &Vector) -> Quat {
        let h = quat::horizontal_lift(q, w);
        let qi = quat::mul(q, quat::I);
        let t = self.eval(w);
        [0, 1, 2, 3].map(|r| h[r] - t * qi[r])
    }
}

/// `S³ → S²` with frames `[q j q̄, q k q̄]`; `L(a) = a²`.
fn principal_sspace() -> SSpace {
    SSpace::new(
        "S3->S2",
        s3(),
        s2(),
        LieGroup::single(Factor::Special(2)),
        Arc::new(|z: &Vector| Ok(quat::hopf(q_at(z)))),
        Arc::new(|z: &Vector, a: &GroupElement| Ok(quat::to_vector(quat::mul(q_at(z), quat::from_rotation(&a.0))))),
        Arc::new(|z: &Vector| Ok(quat::frame(q_at(z)))),
        Arc::new(|p: &Vector| Ok(quat::to_vector(quat::section(p)))),
    )
    .with_witness(Arc::new(|z: &Vector, w: &Vector| {
        Ok(GroupElement(quat::to_rotation(quat::mul(quat::conj(q_at(z)), q_at(w)))))
    }))
}

fn principal_connection(name: &str, s: &SSpace, c: Shift) -> SSpaceConnection {
    SSpaceConnection::new(
        name,
        s.clone(),
        Arc::new(move |z: &Vector, b: &Vector| {
            let q = q_at(z);
            let qi = quat::mul(q, quat::I);
            let bq = quat::from_vector(b);
            let t = quat::dot(bq, qi) + c.eval(&quat::hopf_push(q, bq));
            Ok(quat::to_vector(quat::scale(qi, t)))
        }),
    )
}

/// `h(X, Y) = g(π_*X, π_*Y) + l(π(q))·⟨X, qi⟩⟨Y, qi⟩` with `g` the round metric.
fn bundle_metric(name: &str, l: Arc<dyn Fn(&Vector) -> f64 + Send + Sync>) -> Tensor02Field {
    Tensor02Field::new(
        name,
        s3(),
        Arc::new(move |x: &Vector, a: &Vector, b: &Vector| {
            let q = quat::from_vector(x);
            let (qa, qb) = (quat::from_vector(a), quat::from_vector(b));
            let qi = quat::mul(q, quat::I);
            let horizontal = quat::hopf_push(q, qa).dot(&quat::hopf_push(q, qb));
            Ok(horizontal + l(&quat::hopf(q)) * quat::dot(qa, qi) * quat::dot(qb, qi))
        }),
    )
}

fn constant_scale(c: f64) -> Arc<dyn Fn(&Vector) -> f64 + Send + Sync> {
    Arc::new(move |_| c)
}

/// `l = 1 + height`, which vanishes at the south pole.
fn height_scale() -> Arc<dyn Fn(&Vector) -> f64 + Send + Sync> {
    Arc::new(|p: &Vector| 1.0 + p[2])
}

fn round_metric() -> Tensor02Field {
    Tensor02Field::from_ambient_matrix("round", s2(), |_| Mat::identity(3, 3))
}

/// Frames: lifts of `u` at `q′`, then `scale·q′i`.
fn lifted_frames(q: Quat, u: &Mat, scale: f64, c: Shift) -> Mat {
    let qi = quat::scale(quat::mul(q, quat::I), scale);
    Mat::from_columns(&[
        quat::to_vector(c.lift(q, &u.column(0).into_owned())),
        quat::to_vector(c.lift(q, &u.column(1).into_owned())),
        quat::to_vector(qi),
    ])
}

/// `(q, u, v, g)` over S³ with `ψ = qg`, `O = O(2) × O(1) × SO(2)` acting by
/// `(qh, ua, vb, h⁻¹g)`.
fn bundle_sspace(name: &str, c: Shift) -> SSpace {
    let total: ManifoldRef = Arc::new(Product::new(vec![
        Arc::new(HopfFrames { orthonormal: true }),
        gm(Factor::Orthogonal(1)),
        gm(Factor::Special(2)),
    ]));
    let group = LieGroup::new(vec![Factor::Orthogonal(2), Factor::Orthogonal(1), Factor::Special(2)]);
    let gr = group.clone();
    let gw = group.clone();
    let split = |z: &Vector| {
        let (q, u) = HopfFrames::split(&z.rows(0, 10).into_owned());
        (q, u, z[10], rotation_at(z, 11))
    };
    SSpace::new(
        name,
        total,
        s3(),
        group.clone(),
        Arc::new(move |z: &Vector| {
            let (q, _, _, g) = split(z);
            Ok(quat::to_vector(quat::mul(q, quat::from_rotation(&g))))
        }),
        Arc::new(move |z: &Vector, e: &GroupElement| {
            let (q, u, v, g) = split(z);
            let (a, b, h) = (gr.block(e, 0), gr.block(e, 1), gr.block(e, 2));
            let qh = quat::mul(q, quat::from_rotation(&h));
            Ok(Product::join(&[
                HopfFrames::join(qh, &(u * a)),
                Vector::from_element(1, v * b[(0, 0)]),
                rotation_vec(&(h.transpose() * g)),
            ]))
        }),
        Arc::new(move |z: &Vector| {
            let (q, u, v, g) = split(z);
            Ok(lifted_frames(quat::mul(q, quat::from_rotation(&g)), &u, v, c))
        }),
        Arc::new(|p: &Vector| {
            let q = quat::from_vector(p);
            Ok(Product::join(&[
                HopfFrames::join(q, &quat::frame(q)),
                Vector::from_element(1, 1.0),
                rotation_vec(&Mat::identity(2, 2)),
            ]))
        }),
    )
    .with_witness(Arc::new(move |z: &Vector, w: &Vector| {
        let (_, u, v, g) = split(z);
        let (_, u2, v2, g2) = split(w);
        Ok(gw.from_blocks(&[u.transpose() * u2, Mat::from_element(1, 1, v * v2), g * g2.transpose()]))
    }))
    .with_fiber_split(FiberSplit { rest: 0..11, fiber: 11..15 })
}

/// `(q, u, b)` over S³ with `ψ = qb` and vertical frame `W·(qb)i`.
fn scaled_vertical_sspace(w: f64) -> SSpace {
    let total: ManifoldRef = Arc::new(Product::new(vec![
        Arc::new(HopfFrames { orthonormal: true }),
        gm(Factor::Special(2)),
    ]));
    let group = LieGroup::new(vec![Factor::Orthogonal(2), Factor::Special(2)]);
    let gr = group.clone();
    let split = |z: &Vector| {
        let (q, u) = HopfFrames::split(&z.rows(0, 10).into_owned());
        (q, u, rotation_at(z, 10))
    };
    SSpace::new(
        format!("vertical-scale[{w}]"),
        total,
        s3(),
        group,
        Arc::new(move |z: &Vector| {
            let (q, _, b) = split(z);
            Ok(quat::to_vector(quat::mul(q, quat::from_rotation(&b))))
        }),
        Arc::new(move |z: &Vector, e: &GroupElement| {
            let (q, u, b) = split(z);
            let (h, a) = (gr.block(e, 0), gr.block(e, 1));
            let qa = quat::mul(q, quat::from_rotation(&a));
            Ok(Product::join(&[HopfFrames::join(qa, &(u * h)), rotation_vec(&(a.transpose() * b))]))
        }),
        Arc::new(move |z: &Vector| {
            let (q, u, b) = split(z);
            Ok(lifted_frames(quat::mul(q, quat::from_rotation(&b)), &u, w, Shift::NONE))
        }),
        Arc::new(|p: &Vector| {
            let q = quat::from_vector(p);
            Ok(Product::join(&[HopfFrames::join(q, &quat::frame(q)), rotation_vec(&Mat::identity(2, 2))]))
        }),
    )
    .with_fiber_split(FiberSplit { rest: 0..10, fiber: 10..14 })
}

/// Sweep of `rep(z) − expected(z)` against zero.
fn pointwise_sweep<F>(s: &SSpace, t: &Tensor02Field, samples: usize, rng: &mut Rng, tol: f64, expected: F) -> CheckReport
where
    F: Fn(&SSpace, &Vector) -> Result<Mat>,
{
    let mut worst = MaxTracker::default();
    for _ in 0..samples {
        let z = s.sample_point(rng);
        let dev = (|| -> Result<f64> {
            let e = expected(s, &z)?;
            Ok(scaled_dev(&s.matrix_rep(t, &z)?, &e))
        })()
        .unwrap_or(f64::INFINITY);
        worst.push(dev);
    }
    worst.report(tol)
}

pub fn hopf_bundle(scale: f64) -> CatalogEntry {
    let s = bundle_sspace("bundle[omega]", Shift::NONE);
    let s_prime = bundle_sspace("bundle[omega']", Shift::SECOND);
    let principal = principal_sspace();
    let mut e = CatalogEntry::new("hopf", s.clone());

    let h1 = bundle_metric("h-const", constant_scale(scale));
    let h2 = bundle_metric("h-double", constant_scale(2.0 * scale));
    let hh = bundle_metric("h-height", height_scale());
    e.tensors.extend([h1.clone(), h2.clone(), hh.clone()]);
    e.tensors.extend(sweep_tensors(&s, "hopf"));

    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", 0));
    let g0 = s.group.clone();
    e.claim(base_change_claim(&s, "", "L(a, b, h) = diag(a, b)", move |x: &GroupElement| {
        block_diagonal(&[g0.block(x, 0), g0.block(x, 1)])
    }));
    e.claims(correspondence_claims(&s, &e.tensors, ""));

    e.claims(structure_claims(&principal, "principal/"));
    e.claim(stabilizer_value_claim(&principal, "principal/", 0));
    e.claim(base_change_claim(&principal, "principal/", "L(a) = a^2", |a: &GroupElement| &a.0 * &a.0));
    let mut principal_tensors = vec![round_metric()];
    principal_tensors.extend(sweep_tensors(&principal, "hopf-principal"));
    e.claims(correspondence_claims(&principal, &principal_tensors, "principal/"));

    for t in [h1.clone(), h2.clone()] {
        let sc = s.clone();
        e.claim(Claim::new(
            format!("natural[{}]", t.name),
            "a bundle metric with constant fibre scale is natural",
            Suite::Naturality,
            move |p, rng| {
                let r = is_lambda_natural(&sc, &t, p.samples, rng, &p.cfg());
                CheckReport::from_deviation(r.max_deviation, p.tol, r.samples)
            },
        ));
    }
    let sc = s.clone();
    let t = h2.clone();
    e.claim(Claim::new(
        "witness[h-double]",
        "the constant representation is diag(1, 1, l)",
        Suite::Naturality,
        move |p, rng| {
            let expected = Mat::from_diagonal(&Vector::from_vec(vec![1.0, 1.0, 2.0 * scale]));
            let r = is_lambda_natural(&sc, &t, p.samples.min(20), rng, &p.cfg());
            let dev = r.witness.map(|w| scaled_dev(&w, &expected)).unwrap_or(f64::INFINITY);
            CheckReport::from_deviation(dev, p.tol, 1)
        },
    ));
    let sc = s.clone();
    let t = hh.clone();
    e.claim(Claim::new(
        "not-natural[h-height]",
        "a fibre scale varying over the base breaks naturality",
        Suite::Naturality,
        move |p, rng| {
            let r = is_lambda_natural(&sc, &t, p.samples, rng, &p.cfg());
            negated(CheckReport::from_deviation(r.max_deviation, p.tol, r.samples), p.tol)
        },
    ));
    let sc = s.clone();
    let t = hh.clone();
    e.claim(Claim::new(
        "varying-scale-representation",
        "the representation of a metric with varying scale is diag(1, 1, l(π(q)))",
        Suite::Naturality,
        move |p, rng| {
            pointwise_sweep(&sc, &t, p.samples, rng, p.tol, |s, z| {
                let x = s.project(z)?;
                let l = 1.0 + quat::hopf(quat::from_vector(&x))[2];
                Ok(Mat::from_diagonal(&Vector::from_vec(vec![1.0, 1.0, l])))
            })
        },
    ));

    let tensors = [h1.clone(), hh.clone()];
    e.claim(Claim::new(
        "atlas-vertical-scales",
        "with vertical frames W·qi the natural tensors are those depending only on the group factor",
        Suite::Naturality,
        move |p, rng| {
            let cfg = p.cfg();
            let atlas = Atlas::identity_linked([1.0, 2.0, -0.5].into_iter().map(scaled_vertical_sspace).collect());
            let linked = atlas.verify(p.samples.min(20), rng, &cfg);
            let pos = is_atlas_fibration_natural(&atlas, &tensors[0], p.samples, rng, &cfg);
            let neg = is_atlas_fibration_natural(&atlas, &tensors[1], p.samples, rng, &cfg);
            match (pos, neg) {
                (Ok(pos), Ok(neg)) => {
                    let ok = linked.pass && pos.verdict && !neg.verdict && neg.max_deviation > 10.0 * p.tol;
                    CheckReport::with_verdict(ok, pos.max_deviation.max(linked.max_deviation), p.samples)
                }
                _ => verdict(false, 0),
            }
        },
    ));

    let change = SSpaceMorphism::new(
        "connection-change",
        s.clone(),
        s_prime.clone(),
        Arc::new(|z: &Vector| Ok(z.clone())),
        Arc::new(|a: &GroupElement| Ok(a.clone())),
    );
    e.claims(morphism_claims(&change, &e.tensors[..3]));
    let mc = change.clone();
    e.claim(Claim::new(
        "connection-change/linking-blocks",
        "changing the connection fixes the vertical frames",
        Suite::Morphisms,
        move |p, rng| {
            let mut worst = MaxTracker::default();
            for _ in 0..p.samples {
                let dev = mc
                    .linking_map(&mc.source.sample_point(rng), &p.cfg())
                    .map(|a| a.view((0, 2), (2, 1)).amax().max((a[(2, 2)] - 1.0).abs()))
                    .unwrap_or(f64::INFINITY);
                worst.push(dev);
            }
            worst.report(p.tol)
        },
    ));
    e.morphisms.push(change);
    let rt = SSpaceMorphism::right_translation(&s, fixed_element(&s, 29));
    e.claims(morphism_claims(&rt, &e.tensors[..3]));
    e.morphisms.push(rt);

    let omega = principal_connection("omega", &principal, Shift::NONE);
    let omega2 = principal_connection("omega-prime", &principal, Shift::SECOND);
    for c in [&omega, &omega2] {
        e.claims(connection_claims(c, Some(vec![generator()]), Some(round_metric())));
    }
    let (c1, c2) = (omega.clone(), omega2.clone());
    e.claim(Claim::new(
        "omega-prime/frame-change",
        "a second connection changes only the horizontal frames",
        Suite::Connections,
        move |p, rng| {
            let cfg = p.fd();
            let mut worst = MaxTracker::default();
            for _ in 0..p.samples.min(50) {
                let z = c1.sspace.sample_point(rng);
                let dev = c1
                    .frame_change(&c2, &[generator()], &z, &cfg)
                    .map(|a| a.view((0, 2), (2, 1)).amax().max((a[(2, 2)] - 1.0).abs()))
                    .unwrap_or(f64::INFINITY);
                worst.push(dev);
            }
            worst.report(p.fd_tol)
        },
    ));
    e.connections.extend([omega, omega2]);
    e
}

/// `(q, u, w)` with `u` a basis of `T_{π(q)}S²` and `w` a basis of the algebra.
fn frame_algebra_sspace(orthonormal: bool) -> SSpace {
    let (fu, fw) = if orthonormal {
        (Factor::Orthogonal(2), Factor::Orthogonal(1))
    } else {
        (Factor::General(2), Factor::General(1))
    };
    let total: ManifoldRef = Arc::new(Product::new(vec![Arc::new(HopfFrames { orthonormal }), gm(fw)]));
    let group = LieGroup::new(vec![fu, fw]);
    let gr = group.clone();
    let gw = group.clone();
    let split = |z: &Vector| {
        let (q, u) = HopfFrames::split(&z.rows(0, 10).into_owned());
        (q, u, z[10])
    };
    let name = if orthonormal { "OS2xO1|S3" } else { "LS2xGL1|S3" };
    SSpace::new(
        name,
        total,
        s3(),
        group,
        Arc::new(move |z: &Vector| Ok(quat::to_vector(split(z).0))),
        Arc::new(move |z: &Vector, e: &GroupElement| {
            let (q, u, w) = split(z);
            Ok(Product::join(&[
                HopfFrames::join(q, &(u * gr.block(e, 0))),
                Vector::from_element(1, w * gr.block(e, 1)[(0, 0)]),
            ]))
        }),
        Arc::new(move |z: &Vector| {
            let (q, u, w) = split(z);
            Ok(lifted_frames(q, &u, w, Shift::NONE))
        }),
        Arc::new(|p: &Vector| {
            let q = quat::from_vector(p);
            Ok(Product::join(&[HopfFrames::join(q, &quat::frame(q)), Vector::from_element(1, 1.0)]))
        }),
    )
    .with_witness(Arc::new(move |z: &Vector, x: &Vector| {
        let (_, u, w) = split(z);
        let (_, u2, w2) = split(x);
        let a = (u.transpose() * &u).try_inverse().ok_or(Error::Singular)? * u.transpose() * u2;
        Ok(gw.from_blocks(&[a, Mat::from_element(1, 1, w2 / w)]))
    }))
}

pub fn frame_algebra() -> CatalogEntry {
    let s = frame_algebra_sspace(false);
    let so = frame_algebra_sspace(true);
    let mut e = CatalogEntry::new("hopf-frame-algebra", s.clone());
    let h1 = bundle_metric("h-const", constant_scale(1.0));
    let h2 = bundle_metric("h-double", constant_scale(2.0));
    e.tensors.extend([h1.clone(), h2.clone()]);
    e.tensors.extend(sweep_tensors(&s, "hopf-frame-algebra"));

    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", 0));
    let g0 = s.group.clone();
    e.claim(base_change_claim(&s, "", "L(a, b) = diag(a, b)", move |x: &GroupElement| {
        block_diagonal(&[g0.block(x, 0), g0.block(x, 1)])
    }));
    e.claims(correspondence_claims(&s, &e.tensors, ""));
    e.claims(structure_claims(&so, "orthonormal/"));
    let g1 = so.group.clone();
    e.claim(base_change_claim(&so, "orthonormal/", "L(a, b) = diag(a, b)", move |x: &GroupElement| {
        block_diagonal(&[g1.block(x, 0), g1.block(x, 1)])
    }));

    let sc = so.clone();
    e.claim(Claim::new(
        "orthonormal/block-structure",
        "orthogonal blocks admit both I and I_2 as constant representations",
        Suite::Naturality,
        move |p, rng| match sc.block_structure_test(2, p.samples, rng, &p.cfg()) {
            Ok(r) => CheckReport::with_verdict(r.verdict && r.agree, r.max_deviation, r.samples),
            Err(_) => verdict(false, 0),
        },
    ));
    let sc = s.clone();
    e.claim(Claim::new(
        "block-structure-fails-for-general-frames",
        "general linear blocks are not orthogonal",
        Suite::Naturality,
        move |p, rng| match sc.block_structure_test(2, p.samples, rng, &p.cfg()) {
            Ok(r) => CheckReport::with_verdict(!r.verdict && r.agree, r.max_deviation, r.samples),
            Err(_) => verdict(false, 0),
        },
    ));
    let sc = so.clone();
    let t = h2.clone();
    e.claim(Claim::new(
        "orthonormal/natural[h-double]",
        "a bundle metric is natural for orthonormal frames with representation diag(1, 1, l)",
        Suite::Naturality,
        move |p, rng| {
            let r = is_lambda_natural(&sc, &t, p.samples, rng, &p.cfg());
            let expected = Mat::from_diagonal(&Vector::from_vec(vec![1.0, 1.0, 2.0]));
            let w = r.witness.map(|w| scaled_dev(&w, &expected)).unwrap_or(f64::INFINITY);
            CheckReport::from_deviation(r.max_deviation.max(w), p.tol, r.samples)
        },
    ));
    let sc = s.clone();
    let t = h1.clone();
    e.claim(Claim::new(
        "not-natural[h-const]",
        "no nonzero metric is natural for general frames",
        Suite::Naturality,
        move |p, rng| {
            let r = is_lambda_natural(&sc, &t, p.samples, rng, &p.cfg());
            negated(CheckReport::from_deviation(r.max_deviation, p.tol, r.samples), p.tol)
        },
    ));
    let inclusion = SSpaceMorphism::new(
        "orthonormal-inclusion",
        so.clone(),
        s.clone(),
        Arc::new(|z: &Vector| Ok(z.clone())),
        Arc::new(|a: &GroupElement| Ok(a.clone())),
    );
    e.claims(morphism_claims(&inclusion, &e.tensors[..3]));
    e.morphisms.push(inclusion);
    e
}
