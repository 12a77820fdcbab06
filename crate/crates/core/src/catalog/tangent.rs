//! Tangent bundles of the plane and the 2-sphere seen through orthonormal
//! frames, with the Sasaki and Cheeger-Gromoll metrics, and the unit tangent
//! bundle of the sphere as a subs-space.

use std::sync::Arc;

use super::{
    base_change_claim, canonical_morphism, connection_claims, correspondence_claims, fixed_element, matrix_sweep,
    morphism_claims, negated, stabilizer_value_claim, structure_claims, sweep_tensors, verdict, CatalogEntry, Claim,
    Params, Suite,
};
use crate::connections::{connection_from_k, fundamental_vertical_field, ConnectionFunction, SSpaceConnection};
use crate::geometry::{
    complement_basis, Euclidean, FrameBundle, GroupManifold, Manifold, ManifoldRef, Product, Sphere, TangentSphere,
    Tensor02Field, UnitTangentSphere,
};
use crate::groups::{AlgebraElement, Factor, GroupElement, LieGroup};
use crate::morphisms::SSpaceMorphism;
use crate::naturality::{is_fibration_natural, is_lambda_natural};
use crate::numerics::{block_diagonal, unflatten, DiffConfig, Mat, Vector};
use crate::report::CheckReport;
use crate::rng::{seeded, uniform, Rng};
use crate::sspace::{linear_frames, scaled_dev, FiberSplit, SSpace};

fn skew3(i: usize) -> Mat {
    let (a, b) = [(0, 1), (0, 2), (1, 2)][i];
    let mut m = Mat::zeros(3, 3);
    m[(b, a)] = 1.0;
    m[(a, b)] = -1.0;
    m
}

/// Orthonormal tangent frames of S²: `(p, u₁, u₂) ∈ ℝ⁹`, both orientations.
#[derive(Debug, Clone, Copy)]
pub struct SphereOrthoFrames;

impl SphereOrthoFrames {
    pub fn split(x: &Vector) -> (Vector, Mat) {
        (x.rows(0, 3).into_owned(), unflatten(&x.as_slice()[3..9], 3, 2))
    }

    pub fn join(p: &Vector, u: &Mat) -> Vector {
        FrameBundle::join(p, u)
    }

    /// The frame `complement_basis(p)`, which plays the role of a section.
    pub fn standard(p: &Vector) -> Mat {
        complement_basis(p)
    }
}

impl Manifold for SphereOrthoFrames {
    fn name(&self) -> String {
        "O(S^2)".into()
    }
    fn dim(&self) -> usize {
        3
    }
    fn ambient_dim(&self) -> usize {
        9
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        if x.len() != 9 {
            return false;
        }
        let (p, u) = Self::split(x);
        (p.norm() - 1.0).abs() < tol
            && (u.transpose() * &u - Mat::identity(2, 2)).amax() < tol
            && (u.transpose() * &p).amax() < tol
    }
    fn tangent_basis(&self, x: &Vector) -> Mat {
        let (p, u) = Self::split(x);
        let mut b = Mat::zeros(9, 3);
        for i in 0..3 {
            let w = skew3(i);
            b.view_mut((0, i), (9, 1)).copy_from(&Self::join(&(&w * &p), &(&w * &u)));
        }
        crate::geometry::orthonormalize(&b)
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        let p = Sphere { n: 2 }.sample(rng);
        let b = complement_basis(&p);
        let t = uniform(rng, -std::f64::consts::PI, std::f64::consts::PI);
        let sign = if uniform(rng, 0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
        let r = Mat::from_row_slice(2, 2, &[t.cos(), -sign * t.sin(), t.sin(), sign * t.cos()]);
        Self::join(&p, &(b * r))
    }
}

/// Layout shared by the flat and spherical tangent-bundle instances.
#[derive(Clone, Copy)]
struct Layout {
    n: usize,
    spherical: bool,
}

impl Layout {
    fn m(&self) -> usize {
        self.n + usize::from(self.spherical)
    }

    fn frame_len(&self) -> usize {
        self.m() + self.m() * self.n
    }

    /// `(p, u, ξ)`.
    fn split(&self, z: &Vector) -> (Vector, Mat, Vector) {
        let m = self.m();
        let k = self.frame_len();
        (
            z.rows(0, m).into_owned(),
            unflatten(&z.as_slice()[m..k], m, self.n),
            z.rows(k, self.n).into_owned(),
        )
    }

    fn join(&self, p: &Vector, u: &Mat, xi: &Vector) -> Vector {
        Product::join(&[FrameBundle::join(p, u), xi.clone()])
    }

    fn base(&self) -> ManifoldRef {
        if self.spherical {
            Arc::new(TangentSphere)
        } else {
            Arc::new(Euclidean { n: 2 * self.n })
        }
    }

    /// Covariant part `δw + (δp·w)p` of a tangent vector `(δp, δw)` at `(p, w)`.
    fn k(&self, x: &Vector, v: &Vector) -> Vector {
        let m = self.m();
        let mut kv = v.rows(m, m).into_owned();
        if self.spherical {
            let p = x.rows(0, m);
            let w = x.rows(m, m);
            kv += p * v.rows(0, m).dot(&w);
        }
        kv
    }

    /// `e_i = (u_i, −(u_i·w)p)`, `e_{n+i} = (0, u_i)`.
    fn frames(&self, z: &Vector) -> Mat {
        let (n, m) = (self.n, self.m());
        let (p, u, xi) = self.split(z);
        let w = &u * &xi;
        let mut e = Mat::zeros(2 * m, 2 * n);
        for i in 0..n {
            let ui = u.column(i);
            e.view_mut((0, i), (m, 1)).copy_from(&ui);
            if self.spherical {
                e.view_mut((m, i), (m, 1)).copy_from(&(-(&p * ui.dot(&w))));
            }
            e.view_mut((m, n + i), (m, 1)).copy_from(&ui);
        }
        e
    }
}

fn sasaki(l: Layout) -> Tensor02Field {
    sasaki_on(l, l.base())
}

fn sasaki_on(l: Layout, base: ManifoldRef) -> Tensor02Field {
    let m = l.m();
    Tensor02Field::new(
        "sasaki",
        base,
        Arc::new(move |x: &Vector, a: &Vector, b: &Vector| {
            Ok(a.rows(0, m).dot(&b.rows(0, m)) + l.k(x, a).dot(&l.k(x, b)))
        }),
    )
}

fn cheeger_gromoll(l: Layout) -> Tensor02Field {
    let m = l.m();
    Tensor02Field::new(
        "cheeger-gromoll",
        l.base(),
        Arc::new(move |x: &Vector, a: &Vector, b: &Vector| {
            let w = x.rows(m, m);
            let (ka, kb) = (l.k(x, a), l.k(x, b));
            let vertical = (ka.dot(&kb) + ka.dot(&w) * kb.dot(&w)) / (1.0 + w.norm_squared());
            Ok(a.rows(0, m).dot(&b.rows(0, m)) + vertical)
        }),
    )
}

fn tangent_sspace(l: Layout) -> SSpace {
    let n = l.n;
    let frames: ManifoldRef = if l.spherical {
        Arc::new(SphereOrthoFrames)
    } else {
        Arc::new(Product::new(vec![
            Arc::new(Euclidean { n }),
            Arc::new(GroupManifold {
                group: LieGroup::single(Factor::Orthogonal(n)),
            }),
        ]))
    };
    let total: ManifoldRef = Arc::new(Product::new(vec![frames, Arc::new(Euclidean { n })]));
    let name = if l.spherical { "O(S2)xR2".to_string() } else { format!("O(R{n})xR{n}") };
    SSpace::new(
        name,
        total,
        l.base(),
        LieGroup::single(Factor::Orthogonal(n)),
        Arc::new(move |z: &Vector| {
            let (p, u, xi) = l.split(z);
            Ok(Product::join(&[p, u * xi]))
        }),
        Arc::new(move |z: &Vector, a: &GroupElement| {
            let (p, u, xi) = l.split(z);
            Ok(l.join(&p, &(u * &a.0), &(a.0.transpose() * xi)))
        }),
        Arc::new(move |z: &Vector| Ok(l.frames(z))),
        Arc::new(move |x: &Vector| {
            let m = l.m();
            let p = x.rows(0, m).into_owned();
            let w = x.rows(m, m).into_owned();
            let u = if l.spherical { SphereOrthoFrames::standard(&p) } else { Mat::identity(n, n) };
            let xi = u.transpose() * w;
            Ok(l.join(&p, &u, &xi))
        }),
    )
    .with_witness(Arc::new(move |z: &Vector, w: &Vector| {
        Ok(GroupElement(l.split(z).1.transpose() * l.split(w).1))
    }))
    .with_fiber_split(FiberSplit {
        rest: 0..l.frame_len(),
        fiber: l.frame_len()..l.frame_len() + n,
    })
}

/// Levi-Civita connection on the frame factor: `φ(b) = (u₂·δu₁) V(X)`.
fn levi_civita(s: &SSpace, l: Layout) -> SSpaceConnection {
    let sc = s.clone();
    let x = AlgebraElement(Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
    SSpaceConnection::new(
        "levi-civita",
        s.clone(),
        Arc::new(move |z: &Vector, b: &Vector| {
            let m = l.m();
            let (_, u, _) = l.split(z);
            let du = unflatten(&b.as_slice()[m..l.frame_len()], m, 2);
            let omega = u.column(1).dot(&du.column(0));
            Ok(fundamental_vertical_field(&sc, &x, z, &DiffConfig::default())? * omega)
        }),
    )
}

fn so2_basis() -> Vec<AlgebraElement> {
    LieGroup::single(Factor::Orthogonal(2)).algebra_basis()
}

fn tangent_entry(label: &str, l: Layout) -> CatalogEntry {
    let n = l.n;
    let s = tangent_sspace(l);
    let mut e = CatalogEntry::new(label, s.clone());
    let gs = sasaki(l);
    let gcg = cheeger_gromoll(l);
    e.tensors.extend([gs.clone(), gcg.clone()]);
    e.tensors.extend(sweep_tensors(&s, label));

    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", 0));
    e.claim(base_change_claim(&s, "", "L(a) = diag(a, a)", |a: &GroupElement| {
        block_diagonal(&[a.0.clone(), a.0.clone()])
    }));
    e.claims(correspondence_claims(&s, &e.tensors, ""));

    let sasaki_tol = move |p: &Params| if l.spherical { p.fd_tol } else { p.tol };
    let sc = s.clone();
    let g = gs.clone();
    e.claim(Claim::new(
        "sasaki-rep-identity",
        "the Sasaki metric is the identity in the lifted frames",
        Suite::Naturality,
        move |p, rng| {
            matrix_sweep(p.samples, rng, sasaki_tol(p), &Mat::identity(2 * n, 2 * n), |rng| {
                sc.matrix_rep(&g, &sc.sample_point(rng))
            })
        },
    ));
    let sc = s.clone();
    let g = gs.clone();
    e.claim(Claim::new(
        "natural[sasaki]",
        "the Sasaki metric is natural",
        Suite::Naturality,
        move |p, rng| {
            let r = is_lambda_natural(&sc, &g, p.samples, rng, &p.cfg());
            CheckReport::from_deviation(r.max_deviation, sasaki_tol(p), r.samples)
        },
    ));
    let sc = s.clone();
    let g = gcg.clone();
    e.claim(Claim::new(
        "cheeger-gromoll-lower-block",
        "vertical block at unit first fibre coordinate is diag(1, 1/2)",
        Suite::Naturality,
        move |p, rng| {
            let split = sc.fiber_split.clone().expect("fiber split");
            let mut xi = Vector::zeros(n);
            xi[0] = 1.0;
            let mut expected = Mat::identity(n, n) * 0.5;
            expected[(0, 0)] = 1.0;
            matrix_sweep(p.samples, rng, sasaki_tol(p), &expected, |rng| {
                let z = split.with_fiber(&sc.sample_point(rng), &xi);
                Ok(sc.matrix_rep(&g, &z)?.view((n, n), (n, n)).into_owned())
            })
        },
    ));
    let sc = s.clone();
    let g = gcg.clone();
    e.claim(Claim::new(
        "not-natural[cheeger-gromoll]",
        "the Cheeger-Gromoll metric depends on the fibre coordinate",
        Suite::Naturality,
        move |p, rng| {
            let r = is_lambda_natural(&sc, &g, p.samples, rng, &p.cfg());
            negated(CheckReport::from_deviation(r.max_deviation, p.tol, r.samples), p.tol)
        },
    ));
    for t in [gs.clone(), gcg.clone()] {
        let sc = s.clone();
        e.claim(Claim::new(
            format!("fibration-natural[{}]", t.name),
            "representation depends only on the fibre coordinate",
            Suite::Naturality,
            move |p, rng| match is_fibration_natural(&sc, &t, p.samples, rng, &p.cfg()) {
                Ok(r) => CheckReport::from_deviation(r.max_deviation, sasaki_tol(p), r.samples),
                Err(_) => verdict(false, 0),
            },
        ));
    }

    let rt = SSpaceMorphism::right_translation(&s, fixed_element(&s, 23));
    e.claims(morphism_claims(&rt, &sweep_tensors(&s, label)));
    e.morphisms.push(rt);
    if !l.spherical {
        let canon = canonical_morphism(&s, FrameBundle::flat(2 * n));
        e.claims(morphism_claims(&canon, &sweep_tensors(&s, label)));
        e.morphisms.push(canon);
    }

    let lc = levi_civita(&s, l);
    e.claims(connection_claims(&lc, Some(so2_basis()), Some(gs)));
    e.connections.push(lc);
    e
}

pub fn tangent_flat(n: usize) -> CatalogEntry {
    tangent_entry(&format!("tangent-flat-{n}"), Layout { n, spherical: false })
}

pub fn tangent_sphere() -> CatalogEntry {
    let mut e = tangent_entry("tangent-sphere2", Layout { n: 2, spherical: true });
    let lm = linear_frames(FrameBundle::sphere(2));
    let cfg = DiffConfig::default().with_tol(1e-5);
    let kc = connection_from_k(&lm, &ConnectionFunction::round_sphere(2), 5, &mut seeded(2), &cfg)
        .expect("round sphere connection splits");
    let cond = kc.conditions;
    e.claim(Claim::new(
        "k-connection/splitting",
        "the Levi-Civita map splits T(LS2)",
        Suite::Connections,
        move |_, _| verdict(cond.direct_sum && cond.injective_with_horizontal_image, 1),
    ));
    let round = Tensor02Field::from_ambient_matrix("round", Arc::new(Sphere { n: 2 }), |_| Mat::identity(3, 3));
    e.claims(connection_claims(&kc.connection, Some(lm.group.algebra_basis()), Some(round)));
    e.connections.push(kc.connection);
    e
}

/// `O(S²) → T₁S²`, `(p, u) ↦ (p, u₂)`, with `O(1)` flipping `u₁`.
fn unit_tangent_sspace() -> SSpace {
    let flip = |z: &Vector, a: f64| {
        let (p, u) = SphereOrthoFrames::split(z);
        let mut v = u;
        v.column_mut(0).scale_mut(a);
        SphereOrthoFrames::join(&p, &v)
    };
    SSpace::new(
        "O(S2)/T1S2",
        Arc::new(SphereOrthoFrames),
        Arc::new(UnitTangentSphere),
        LieGroup::single(Factor::Orthogonal(1)),
        Arc::new(|z: &Vector| {
            let (p, u) = SphereOrthoFrames::split(z);
            Ok(Product::join(&[p, u.column(1).into_owned()]))
        }),
        Arc::new(move |z: &Vector, a: &GroupElement| Ok(flip(z, a.0[(0, 0)]))),
        Arc::new(|z: &Vector| {
            let (p, u) = SphereOrthoFrames::split(z);
            let (u1, u2) = (u.column(0), u.column(1));
            let mut e = Mat::zeros(6, 3);
            e.view_mut((0, 0), (3, 1)).copy_from(&u1);
            e.view_mut((0, 1), (3, 1)).copy_from(&u2);
            e.view_mut((3, 1), (3, 1)).copy_from(&(-&p));
            e.view_mut((3, 2), (3, 1)).copy_from(&u1);
            Ok(e)
        }),
        Arc::new(|x: &Vector| {
            let p = x.rows(0, 3).into_owned();
            let w = x.rows(3, 3).into_owned();
            let u = Mat::from_columns(&[p.cross(&w), w]);
            Ok(SphereOrthoFrames::join(&p, &u))
        }),
    )
    .with_witness(Arc::new(|z: &Vector, w: &Vector| {
        let a = SphereOrthoFrames::split(z).1.column(0).dot(&SphereOrthoFrames::split(w).1.column(0));
        Ok(GroupElement(Mat::from_element(1, 1, a.signum())))
    }))
}

pub fn unit_tangent_sphere() -> CatalogEntry {
    let s = unit_tangent_sspace();
    let mut e = CatalogEntry::new("unit-tangent-sphere2", s.clone());
    let tangent = tangent_sspace(Layout { n: 2, spherical: true });
    let restricted = sasaki_on(Layout { n: 2, spherical: true }, s.base.clone());
    e.tensors.push(restricted.clone());
    e.tensors.extend(sweep_tensors(&s, "unit-tangent"));
    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", 0));
    e.claim(base_change_claim(&s, "", "L(a) = diag(a, 1, a)", |a: &GroupElement| {
        let sign = a.0[(0, 0)];
        Mat::from_diagonal(&Vector::from_vec(vec![sign, 1.0, sign]))
    }));
    e.claims(correspondence_claims(&s, &e.tensors, ""));
    let sc = s.clone();
    e.claim(Claim::new(
        "natural[sasaki]",
        "the restricted Sasaki metric is the identity in the frames",
        Suite::Naturality,
        move |p, rng| {
            let r = is_lambda_natural(&sc, &restricted, p.samples, rng, &p.cfg());
            let w = r.witness.map(|w| scaled_dev(&w, &Mat::identity(3, 3))).unwrap_or(f64::INFINITY);
            CheckReport::from_deviation(r.max_deviation.max(w), p.tol, r.samples)
        },
    ));

    let inclusion = SSpaceMorphism::new(
        "unit-in-tangent",
        s.clone(),
        tangent,
        Arc::new(|z: &Vector| {
            let xi = Vector::from_vec(vec![0.0, 1.0]);
            Ok(Product::join(&[z.clone(), xi]))
        }),
        Arc::new(|a: &GroupElement| Ok(GroupElement(Mat::from_diagonal(&Vector::from_vec(vec![a.0[(0, 0)], 1.0]))))),
    )
    .with_over(Arc::new(|x: &Vector| Ok(x.clone())));
    e.claims(morphism_claims(&inclusion, &[]));
    let mc = inclusion.clone();
    e.claim(Claim::new(
        "unit-in-tangent/over-map",
        "the over-map is the constant diag(I3, 0)",
        Suite::Morphisms,
        move |p, rng| {
            let mut expected = Mat::identity(4, 4);
            expected[(3, 3)] = 0.0;
            matrix_sweep(p.samples, rng, p.fd_tol, &expected, |rng| {
                mc.over_map(&mc.source.sample_point(rng), &p.fd())
            })
        },
    ));
    let mc = inclusion.clone();
    e.claim(Claim::new(
        "unit-in-tangent/subs-space",
        "the unit tangent bundle is a subs-space of the tangent bundle",
        Suite::Morphisms,
        move |p, rng| {
            let r = mc.is_subsspace(p.samples.min(50), rng, &p.fd());
            CheckReport::with_verdict(r.pass(), r.constant_over_map.max_deviation, r.constant_over_map.samples)
        },
    ));
    e.morphisms.push(inclusion);
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_frames_sample_on_the_manifold() {
        let mut rng = seeded(5);
        let m = SphereOrthoFrames;
        for _ in 0..20 {
            let x = m.sample(&mut rng);
            assert!(m.contains(&x, 1e-12));
            let b = m.tangent_basis(&x);
            assert_eq!(b.ncols(), 3);
            for j in 0..3 {
                let dx = b.column(j).into_owned() * 1e-7;
                let (p, u) = SphereOrthoFrames::split(&(&x + dx));
                assert!((p.norm() - 1.0).abs() < 1e-10);
                assert!((u.transpose() * p).amax() < 1e-10);
            }
        }
    }

    #[test]
    fn sasaki_frames_on_the_flat_plane() {
        let l = Layout { n: 2, spherical: false };
        let s = tangent_sspace(l);
        let mut rng = seeded(6);
        let z = s.sample_point(&mut rng);
        let rep = s.matrix_rep(&sasaki(l), &z).unwrap();
        assert!((rep - Mat::identity(4, 4)).amax() < 1e-12);
    }

    #[test]
    fn cheeger_gromoll_vertical_block_oracle() {
        // (δ_ij + ξ_i ξ_j) / (1 + |ξ|²) evaluated by hand at ξ = (1, 2).
        let l = Layout { n: 2, spherical: false };
        let s = tangent_sspace(l);
        let z = l.join(&Vector::zeros(2), &Mat::identity(2, 2), &Vector::from_vec(vec![1.0, 2.0]));
        let rep = s.matrix_rep(&cheeger_gromoll(l), &z).unwrap();
        let expected = Mat::from_row_slice(2, 2, &[2.0 / 6.0, 2.0 / 6.0, 2.0 / 6.0, 5.0 / 6.0]);
        assert!((rep.view((2, 2), (2, 2)) - expected).amax() < 1e-14);
    }
}
