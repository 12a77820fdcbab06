//! Instances over flat bases: frame bundles of ℝⁿ, a non-free action, the
//! frames induced by a linear connection, and signature-adapted frames.

use std::sync::Arc;

use super::{
    base_change_claim, canonical_morphism, connection_claims, correspondence_claims, fixed_element, matrix_sweep,
    morphism_claims, negated, stabilizer_value_claim, structure_claims, sweep_tensors, verdict, CatalogEntry, Claim,
    Suite,
};
use crate::connections::{beta_sspace, connection_from_k, sasaki_mok_metric, ConnectionFunction, ScalarFn, SSpaceConnection};
use crate::error::{Error, Result};
use crate::geometry::{Euclidean, FrameBundle, GroupManifold, ManifoldRef, Product, Punctured, Tensor02Field};
use crate::groups::{signature_matrix, Factor, GroupElement, LieGroup};
use crate::morphisms::SSpaceMorphism;
use crate::naturality::{
    frame_twist, is_atlas_natural, is_lambda_natural, is_weak_natural, prop51_construct, Atlas,
};
use crate::numerics::{block_diagonal, flatten, unflatten, DiffConfig, Mat, Vector};
use crate::report::{CheckReport, MaxTracker};
use crate::rng::seeded;
use crate::sspace::{linear_frames, scaled_dev, MatrixMap, SSpace};

fn euclidean(n: usize) -> ManifoldRef {
    Arc::new(Euclidean { n })
}

fn constant_tensor(name: &str, m: ManifoldRef, a: Mat) -> Tensor02Field {
    Tensor02Field::from_ambient_matrix(name, m, move |_| a.clone())
}

fn metric(n: usize) -> Tensor02Field {
    constant_tensor("g", euclidean(n), Mat::identity(n, n))
}

/// Naturality verdict together with agreement of the witness with `expected`.
pub(super) fn natural_with_witness(s: &SSpace, t: &Tensor02Field, expected: &Mat, p: &super::Params, rng: &mut crate::rng::Rng) -> CheckReport {
    let r = is_lambda_natural(s, t, p.samples, rng, &p.cfg());
    let witness_dev = r
        .witness
        .as_ref()
        .map(|w| scaled_dev(w, expected))
        .unwrap_or(f64::INFINITY);
    let dev = r.max_deviation.max(witness_dev);
    CheckReport::from_deviation(dev, p.tol, r.samples)
}

pub fn lm_flat(n: usize) -> CatalogEntry {
    let lm = FrameBundle::flat(n);
    let s = linear_frames(lm);
    let mut e = CatalogEntry::new(&format!("lm-flat-{n}"), s.clone());
    let g = metric(n);
    e.tensors.push(g.clone());
    e.tensors.extend(sweep_tensors(&s, "lm-flat"));

    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", 0));
    e.claim(base_change_claim(&s, "", "L(a) = a", |a: &GroupElement| a.0.clone()));
    e.claims(correspondence_claims(&s, &e.tensors, ""));

    let sc = s.clone();
    e.claim(Claim::new(
        "planted-constant-identity",
        "a nonzero constant matrix is not invariant on LM",
        Suite::Correspondence,
        move |p, rng| {
            let f = MatrixMap::constant("I", Mat::identity(n, n));
            negated(sc.check_invariance(&f, p.samples, rng, &p.cfg()), p.tol)
        },
    ));
    let perturbed = s.with_frames(
        "LM-perturbed",
        Arc::new(move |z: &Vector| {
            let (_, u) = lm.split(z);
            let mut bump = Mat::zeros(n, n);
            bump[(0, n - 1)] = 0.3 * u[(0, 0)] * u[(0, 0)];
            Ok(u + bump)
        }),
    );
    let gc = g.clone();
    e.claim(Claim::new(
        "planted-perturbed-frames",
        "non-rigid frames break the invariance law",
        Suite::Correspondence,
        move |p, rng| {
            let f = perturbed.matrix_map_of(&gc);
            negated(perturbed.check_invariance(&f, p.samples, rng, &p.cfg()), p.tol)
        },
    ));
    let sc = s.clone();
    e.claim(Claim::new(
        "constant-rep-only-zero",
        "only the zero matrix is a constant representation on LM",
        Suite::Correspondence,
        move |p, rng| {
            let zero = sc.admits_constant_rep(&Mat::zeros(n, n), p.samples, rng, &p.cfg());
            let mut worst = MaxTracker::default();
            for i in 0..3 {
                let a = crate::rng::normal_matrix(&mut seeded(100 + i), n, n);
                let r = negated(sc.admits_constant_rep(&a, p.samples, rng, &p.cfg()), p.tol);
                worst.push(if r.pass { 0.0 } else { f64::INFINITY });
            }
            CheckReport::with_verdict(zero.pass && worst.max == 0.0, zero.max_deviation, zero.samples)
        },
    ));
    let sc = s.clone();
    let gc = g.clone();
    e.claim(Claim::new(
        "metric-not-natural",
        "the metric has no constant representation on LM",
        Suite::Naturality,
        move |p, rng| {
            let r = is_lambda_natural(&sc, &gc, p.samples, rng, &p.cfg());
            negated(CheckReport::from_deviation(r.max_deviation, p.tol, r.samples), p.tol)
        },
    ));
    let sc = s.clone();
    e.claim(Claim::new(
        "zero-natural",
        "the null tensor is natural",
        Suite::Naturality,
        move |p, rng| natural_with_witness(&sc, &Tensor02Field::zero(sc.base.clone()), &Mat::zeros(n, n), p, rng),
    ));

    let rt = SSpaceMorphism::right_translation(&s, fixed_element(&s, 7));
    e.claims(morphism_claims(&rt, &sweep_tensors(&s, "lm-flat")));
    e.morphisms.push(rt);
    let canon = canonical_morphism(&s, lm);
    e.claims(morphism_claims(&canon, &sweep_tensors(&s, "lm-flat")));
    e.morphisms.push(canon);

    let flat = SSpaceConnection::new(
        "flat-lm",
        s.clone(),
        Arc::new(move |_: &Vector, b: &Vector| {
            let mut v = b.clone();
            v.rows_mut(0, n).fill(0.0);
            Ok(v)
        }),
    );
    e.claims(connection_claims(&flat, Some(s.group.algebra_basis()), Some(g)));
    e.connections.push(flat);
    e
}

/// `O(ℝⁿ) = ℝⁿ × O(n)` with the orthonormal frames `u`.
fn orthonormal_sspace(n: usize) -> SSpace {
    let group = LieGroup::single(Factor::Orthogonal(n));
    let total: ManifoldRef = Arc::new(Product::new(vec![euclidean(n), Arc::new(GroupManifold { group: group.clone() })]));
    let split = move |z: &Vector| (z.rows(0, n).into_owned(), unflatten(&z.as_slice()[n..], n, n));
    SSpace::new(
        format!("O(R{n})"),
        total,
        euclidean(n),
        group,
        Arc::new(move |z: &Vector| Ok(split(z).0)),
        Arc::new(move |z: &Vector, a: &GroupElement| {
            let (p, u) = split(z);
            Ok(FrameBundle::join(&p, &(u * &a.0)))
        }),
        Arc::new(move |z: &Vector| Ok(split(z).1)),
        Arc::new(move |p: &Vector| Ok(FrameBundle::join(p, &Mat::identity(n, n)))),
    )
    .with_witness(Arc::new(move |z: &Vector, w: &Vector| Ok(GroupElement(split(z).1.transpose() * split(w).1))))
}

pub fn orthonormal_frames_flat(n: usize) -> CatalogEntry {
    let s = orthonormal_sspace(n);
    let mut e = CatalogEntry::new(&format!("oframes-flat-{n}"), s.clone());
    let g = metric(n);
    let g3 = constant_tensor("3g", euclidean(n), Mat::identity(n, n) * 3.0);
    let mut d12 = Mat::identity(n, n);
    d12[(1, 1)] = 2.0;
    let diag12 = constant_tensor("diag12", euclidean(n), d12);
    e.tensors.extend([g.clone(), g3.clone(), diag12.clone()]);
    e.tensors.extend(sweep_tensors(&s, "oframes-flat"));

    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", 0));
    e.claim(base_change_claim(&s, "", "L(a) = a", |a: &GroupElement| a.0.clone()));
    e.claims(correspondence_claims(&s, &e.tensors, ""));

    for (t, c) in [(g.clone(), 1.0), (g3.clone(), 3.0)] {
        let sc = s.clone();
        e.claim(Claim::new(
            format!("natural[{}]", t.name),
            "scalar multiples of the metric are natural",
            Suite::Naturality,
            move |p, rng| natural_with_witness(&sc, &t, &(Mat::identity(n, n) * c), p, rng),
        ));
    }
    let sc = s.clone();
    let dc = diag12.clone();
    e.claim(Claim::new(
        "not-natural[diag12]",
        "a non-conformal constant tensor is not natural",
        Suite::Naturality,
        move |p, rng| {
            let r = is_lambda_natural(&sc, &dc, p.samples, rng, &p.cfg());
            negated(CheckReport::from_deviation(r.max_deviation, p.tol, r.samples), p.tol)
        },
    ));
    let sc = s.clone();
    let gc = g3.clone();
    e.claim(Claim::new(
        "witness-fixed-by-base-change",
        "the constant representation is fixed by every L(a)",
        Suite::Naturality,
        move |p, rng| {
            let r = is_lambda_natural(&sc, &gc, p.samples.min(20), rng, &p.cfg());
            match r.witness {
                Some(w) if r.verdict => sc.admits_constant_rep(&w, p.samples, rng, &p.cfg()),
                _ => verdict(false, r.samples),
            }
        },
    ));

    // Two-member atlas: the frames and the frames scaled by a point-dependent factor.
    let bump: Arc<dyn Fn(&Vector) -> f64 + Send + Sync> = Arc::new(|z: &Vector| 2.0 + z[0].sin());
    let sc = s.clone();
    let tensors = vec![g.clone(), g3.clone(), diag12.clone()];
    let tc = tensors.clone();
    e.claim(Claim::new(
        "atlas-scaled-pair",
        "only the null tensor is natural for a frame and its non-constant rescaling",
        Suite::Naturality,
        move |p, rng| {
            let cfg = p.cfg();
            let f = bump.clone();
            let twisted = match frame_twist(&sc, "scaled", Arc::new(move |z: &Vector| Ok(Mat::identity(n, n) * f(z))), 20, rng, &cfg) {
                Ok(t) => t,
                Err(_) => return verdict(false, 0),
            };
            let atlas = Atlas::identity_linked(vec![sc.clone(), twisted]);
            let linked = atlas.verify(p.samples.min(20), rng, &cfg);
            let mut ok = linked.pass;
            for t in &tc {
                ok &= !is_atlas_natural(&atlas, t, p.samples, rng, &cfg).verdict;
            }
            ok &= is_atlas_natural(&atlas, &Tensor02Field::zero(sc.base.clone()), p.samples, rng, &cfg).verdict;
            let weak = is_weak_natural(&atlas, &tc[0], p.samples, rng, &cfg);
            ok &= weak.verdict && weak.witness_member == Some(0);
            CheckReport::with_verdict(ok, linked.max_deviation, p.samples)
        },
    ));
    let sc = s.clone();
    e.claim(Claim::new(
        "atlas-constant-twists",
        "naturality for constant twists agrees with naturality for the frames",
        Suite::Naturality,
        move |p, rng| {
            let cfg = p.cfg();
            let mut members = vec![sc.clone()];
            for i in 0..2 {
                let a = crate::rng::normal_matrix(&mut seeded(200 + i), n, n) + Mat::identity(n, n) * 2.0;
                match frame_twist(&sc, &format!("A{i}"), Arc::new(move |_: &Vector| Ok(a.clone())), 10, rng, &cfg) {
                    Ok(t) => members.push(t),
                    Err(_) => return verdict(false, 0),
                }
            }
            let atlas = Atlas::identity_linked(members);
            let mut ok = atlas.verify(p.samples.min(20), rng, &cfg).pass;
            for t in &tensors {
                let atlas_verdict = is_atlas_natural(&atlas, t, p.samples, rng, &cfg).verdict;
                ok &= atlas_verdict == is_lambda_natural(&sc, t, p.samples, rng, &cfg).verdict;
            }
            verdict(ok, p.samples)
        },
    ));

    let lm = linear_frames(FrameBundle::flat(n));
    let inclusion = SSpaceMorphism::new(
        "inclusion-into-lm",
        s.clone(),
        lm.clone(),
        Arc::new(|z: &Vector| Ok(z.clone())),
        Arc::new(|a: &GroupElement| Ok(a.clone())),
    );
    e.claims(morphism_claims(&inclusion, &sweep_tensors(&s, "oframes-flat")));
    let ic = inclusion.clone();
    e.claim(Claim::new(
        "inclusion-into-lm/subs-space",
        "orthonormal frames form a subs-space of LM",
        Suite::Morphisms,
        move |p, rng| {
            let r = ic.is_subsspace(p.samples.min(50), rng, &p.fd());
            CheckReport::with_verdict(r.pass(), r.constant_over_map.max_deviation, r.constant_over_map.samples)
        },
    ));
    let ic = inclusion.clone();
    e.claim(Claim::new(
        "inclusion-into-lm/linking-map",
        "the inclusion has linking map I",
        Suite::Morphisms,
        move |p, rng| {
            matrix_sweep(p.samples, rng, p.tol, &Mat::identity(n, n), |rng| {
                ic.linking_map(&ic.source.sample_point(rng), &p.cfg())
            })
        },
    ));
    e.morphisms.push(inclusion);
    let rt = SSpaceMorphism::right_translation(&s, fixed_element(&s, 11));
    e.claims(morphism_claims(&rt, &sweep_tensors(&s, "oframes-flat")));
    e.morphisms.push(rt);

    let flat = SSpaceConnection::new(
        "levi-civita-oframes",
        s.clone(),
        Arc::new(move |_: &Vector, b: &Vector| {
            let mut v = b.clone();
            v.rows_mut(0, n).fill(0.0);
            Ok(v)
        }),
    );
    e.claims(connection_claims(&flat, Some(s.group.algebra_basis()), Some(g)));
    e.connections.push(flat);
    e
}

/// `ℝⁿ × (ℝⁿ∖{0})` with `GL(n)` acting by `x ↦ aᵀx`; frames are constant.
pub fn punctured(n: usize) -> CatalogEntry {
    let total: ManifoldRef = Arc::new(Product::new(vec![euclidean(n), Arc::new(Punctured { n })]));
    let s = SSpace::new(
        format!("punctured-{n}"),
        total,
        euclidean(n),
        LieGroup::single(Factor::General(n)),
        Arc::new(move |z: &Vector| Ok(z.rows(0, n).into_owned())),
        Arc::new(move |z: &Vector, a: &GroupElement| {
            let x = a.0.transpose() * z.rows(n, n);
            Ok(Product::join(&[z.rows(0, n).into_owned(), x]))
        }),
        Arc::new(move |_: &Vector| Ok(Mat::identity(n, n))),
        Arc::new(move |p: &Vector| {
            let mut x = Vector::zeros(n);
            x[0] = 1.0;
            Ok(Product::join(&[p.clone(), x]))
        }),
    );
    let mut e = CatalogEntry::new(&format!("punctured-{n}"), s.clone());
    e.tensors.push(metric(n));
    e.tensors.extend(sweep_tensors(&s, "punctured"));
    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", n * n - n));
    e.claim(base_change_claim(&s, "", "L(a) = I", move |_| Mat::identity(n, n)));
    e.claims(correspondence_claims(&s, &e.tensors, ""));
    let sc = s.clone();
    let t = e.tensors[1].clone();
    e.claim(Claim::new(
        "every-tensor-constant-on-fibres",
        "with L = I every representation is fibre-constant",
        Suite::Naturality,
        move |p, rng| {
            let r = crate::naturality::is_orbit_constant(&sc, &t, p.samples, rng, &p.cfg());
            CheckReport::from_deviation(r.max_deviation, p.tol, r.samples)
        },
    ));
    let canon = canonical_morphism(&s, FrameBundle::flat(n));
    e.claims(morphism_claims(&canon, &sweep_tensors(&s, "punctured")));
    e.morphisms.push(canon);
    let rt = SSpaceMorphism::right_translation(&s, fixed_element(&s, 13));
    e.claims(morphism_claims(&rt, &sweep_tensors(&s, "punctured")));
    e.morphisms.push(rt);
    e
}

/// `u′ E_ij` flattened, for the dual frame of the flat connection on `LM`.
fn connection_frames(p_dim: usize, x: &Vector) -> Mat {
    let n = p_dim;
    let u = unflatten(&x.as_slice()[n..], n, n);
    let dim = n + n * n;
    let mut e = Mat::zeros(dim, dim);
    for i in 0..n {
        e.view_mut((0, i), (n, 1)).copy_from(&u.column(i));
    }
    for j in 0..n {
        for i in 0..n {
            let mut d = Mat::zeros(n, n);
            d.set_column(j, &u.column(i));
            e.view_mut((n, n + j * n + i), (n * n, 1)).copy_from(&flatten(&d));
        }
    }
    e
}

/// `LM × GL(n)` over `LM` with frames dual to the solder and connection forms.
fn frame_connection_sspace(n: usize) -> SSpace {
    let lm = FrameBundle::flat(n);
    let group = LieGroup::single(Factor::General(n));
    let total: ManifoldRef = Arc::new(Product::new(vec![Arc::new(lm), Arc::new(GroupManifold { group: group.clone() })]));
    let dim = n + n * n;
    let split = move |z: &Vector| {
        let (p, u) = lm.split(&z.rows(0, dim).into_owned());
        (p, u, unflatten(&z.as_slice()[dim..], n, n))
    };
    SSpace::new(
        format!("LMxGL[R{n}]"),
        total,
        Arc::new(lm),
        group,
        Arc::new(move |z: &Vector| {
            let (p, u, b) = split(z);
            Ok(FrameBundle::join(&p, &(u * b)))
        }),
        Arc::new(move |z: &Vector, a: &GroupElement| {
            let (p, u, b) = split(z);
            let ainv = a.0.clone().try_inverse().ok_or(Error::Singular)?;
            Ok(Product::join(&[FrameBundle::join(&p, &(u * &a.0)), flatten(&(ainv * b))]))
        }),
        Arc::new(move |z: &Vector| {
            let (p, u, b) = split(z);
            Ok(connection_frames(n, &FrameBundle::join(&p, &(u * b))))
        }),
        Arc::new(move |x: &Vector| Ok(Product::join(&[x.clone(), flatten(&Mat::identity(n, n))]))),
    )
}

/// `[[0, I_m], [−I_m, 0]]`.
fn symplectic(m: usize) -> Mat {
    let mut j = Mat::zeros(2 * m, 2 * m);
    j.view_mut((0, m), (m, m)).copy_from(&Mat::identity(m, m));
    j.view_mut((m, 0), (m, m)).copy_from(&(-Mat::identity(m, m)));
    j
}

pub fn frame_connection(n: usize) -> CatalogEntry {
    let s = frame_connection_sspace(n);
    let dim = n + n * n;
    let mut e = CatalogEntry::new(&format!("frame-conn-{n}"), s.clone());
    e.tensors.extend(sweep_tensors(&s, "frame-conn"));
    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", 0));
    e.claim(base_change_claim(&s, "", "L(a) = I", move |_| Mat::identity(dim, dim)));
    e.claims(correspondence_claims(&s, &e.tensors, ""));

    let sc = s.clone();
    e.claim(Claim::new(
        "symplectic-block-tensor",
        "a constant symplectic block comes from a natural tensor",
        Suite::Naturality,
        move |p, rng| {
            let j = symplectic(dim / 2);
            let f = MatrixMap::constant("J", j.clone());
            match sc.tensor_from_matrix(&f, 20, rng, &p.cfg()) {
                Ok(t) => natural_with_witness(&sc, &t, &j, p, rng),
                Err(_) => verdict(false, 0),
            }
        },
    ));

    let lm = linear_frames(FrameBundle::flat(n));
    let k = ConnectionFunction::flat(n);
    let kc = connection_from_k(&lm, &k, 5, &mut seeded(1), &DiffConfig::default().with_tol(1e-5))
        .expect("flat connection splits");
    let conditions = kc.conditions;
    e.claim(Claim::new(
        "k-connection/splitting",
        "the connection map splits TN into horizontal and vertical parts",
        Suite::Connections,
        move |_, _| verdict(conditions.direct_sum && conditions.injective_with_horizontal_image, 1),
    ));
    let g = metric(n);
    e.claims(connection_claims(&kc.connection, Some(lm.group.algebra_basis()), Some(g.clone())));
    let lm2 = lm.clone();
    let k2 = k.clone();
    e.claim(Claim::new(
        "sasaki-mok/block-form",
        "the generalized Sasaki-Mok metric is block diagonal in the lifted frames",
        Suite::Connections,
        move |p, rng| {
            let cfg = p.fd();
            let one: ScalarFn = Arc::new(|_: &Vector| 1.0);
            let gt = match sasaki_mok_metric(&lm2, &k2, &g, one.clone(), vec![one; n], &cfg) {
                Ok(t) => t,
                Err(_) => return verdict(false, 0),
            };
            let beta = beta_sspace(&lm2, &k2, &cfg);
            let mut worst = MaxTracker::default();
            for _ in 0..p.samples.min(50) {
                let dev = (|| -> Result<f64> {
                    let z = lm2.sample_point(rng);
                    let base = lm2.matrix_rep(&g, &z)?;
                    let expected = block_diagonal(&vec![base; n + 1]);
                    Ok(scaled_dev(&beta.matrix_rep(&gt, &z)?, &expected))
                })()
                .unwrap_or(f64::INFINITY);
                worst.push(dev);
            }
            worst.report(p.fd_tol)
        },
    ));
    e.connections.push(kc.connection);

    let canon = canonical_morphism(&s, FrameBundle::flat(dim));
    e.claims(morphism_claims(&canon, &sweep_tensors(&s, "frame-conn")));
    e.morphisms.push(canon);
    let rt = SSpaceMorphism::right_translation(&s, fixed_element(&s, 17));
    e.claims(morphism_claims(&rt, &sweep_tensors(&s, "frame-conn")));
    e.morphisms.push(rt);
    e
}

pub fn minkowski() -> CatalogEntry {
    let r2 = euclidean(2);
    let mink = constant_tensor("minkowski", r2.clone(), Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
    let dx2 = constant_tensor("dx2", r2.clone(), Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
    let cfg = DiffConfig::default();
    let s = prop51_construct(r2.clone(), &mink, 1, 2, 20, &mut seeded(3), &cfg).expect("constant signature");
    let s_dx = prop51_construct(r2.clone(), &dx2, 1, 1, 20, &mut seeded(4), &cfg).expect("constant signature");
    let mut e = CatalogEntry::new("minkowski-p51", s.clone());
    e.tensors.extend([mink.clone(), dx2.clone()]);
    e.tensors.extend(sweep_tensors(&s, "minkowski"));

    e.claims(structure_claims(&s, ""));
    e.claims(structure_claims(&s_dx, "dx2/"));
    let mut tensors = vec![mink.clone()];
    tensors.extend(sweep_tensors(&s, "minkowski"));
    e.claims(correspondence_claims(&s, &tensors, ""));

    for (space, t, sig) in [(s.clone(), mink, signature_matrix(1, 2, 2)), (s_dx.clone(), dx2, signature_matrix(1, 1, 2))] {
        e.claim(Claim::new(
            format!("constant-signature-rep[{}]", t.name),
            "adapted frames give the constant representation I_sr",
            Suite::Naturality,
            move |p, rng| natural_with_witness(&space, &t, &sig, p, rng),
        ));
    }
    let r2c = r2.clone();
    e.claim(Claim::new(
        "varying-signature-rejected",
        "a tensor whose signature changes admits no adapted frames",
        Suite::Naturality,
        move |p, rng| {
            let t = Tensor02Field::from_ambient_matrix("flip", r2c.clone(), |x: &Vector| {
                Mat::from_row_slice(2, 2, &[x[0], 0.0, 0.0, 1.0])
            });
            let r = prop51_construct(r2c.clone(), &t, 2, 2, p.samples.min(50), rng, &p.cfg());
            verdict(matches!(r, Err(Error::SignatureMismatch { .. })), p.samples.min(50))
        },
    ));

    let canon = canonical_morphism(&s, FrameBundle::flat(2));
    e.claims(morphism_claims(&canon, &sweep_tensors(&s, "minkowski")));
    e.morphisms.push(canon);
    let rt = SSpaceMorphism::right_translation(&s, fixed_element(&s, 19));
    e.claims(morphism_claims(&rt, &sweep_tensors(&s, "minkowski")));
    e.morphisms.push(rt);
    e
}
