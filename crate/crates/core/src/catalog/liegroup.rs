//! SO(3) with left-invariant frames: over `G × G`, over all bases of the
//! algebra, and over orthonormal rotations of one fixed basis.

use std::sync::Arc;

use super::{
    base_change_claim, correspondence_claims, matrix_sweep, morphism_claims, negated, stabilizer_value_claim,
    structure_claims, sweep_tensors, verdict, CatalogEntry, Claim, Suite,
};
use crate::geometry::{GroupManifold, ManifoldRef, Product, Tensor02Field};
use crate::groups::{Factor, GroupElement, LieGroup};
use crate::morphisms::SSpaceMorphism;
use crate::naturality::{is_fibration_natural, is_lambda_natural, is_orbit_constant};
use crate::numerics::{flatten, unflatten, Mat, Vector};
use crate::report::CheckReport;
use crate::rng::{normal_matrix, seeded};
use crate::sspace::{scaled_dev, FiberSplit, MatrixMap, SSpace};

const K: usize = 3;

fn so3() -> LieGroup {
    LieGroup::single(Factor::Special(K))
}

fn group_manifold(g: LieGroup) -> ManifoldRef {
    Arc::new(GroupManifold { group: g })
}

fn mat_at(z: &Vector, offset: usize) -> Mat {
    unflatten(&z.as_slice()[offset..offset + K * K], K, K)
}

/// The standard basis `B_i` of so(3) as matrices.
fn standard_basis() -> Vec<Mat> {
    so3().algebra_basis().into_iter().map(|x| x.0).collect()
}

/// Basis `v_i = Σ_j B_j c_ji`.
fn basis_times(c: &Mat) -> Vec<Mat> {
    let b = standard_basis();
    (0..K)
        .map(|i| (0..K).fold(Mat::zeros(K, K), |acc, j| acc + &b[j] * c[(j, i)]))
        .collect()
}

/// Columns `vec(g·v_i)`.
fn left_invariant_frames(g: &Mat, v: &[Mat]) -> Mat {
    Mat::from_columns(&v.iter().map(|vi| flatten(&(g * vi))).collect::<Vec<_>>())
}

/// Coordinates of a skew matrix in the standard basis.
fn skew_coords(y: &Mat) -> Vector {
    Vector::from_vec(vec![y[(1, 0)], y[(2, 0)], y[(2, 1)]])
}

fn weights() -> Mat {
    Mat::from_diagonal(&Vector::from_vec(vec![1.0, 2.0, 3.0]))
}

/// `T(g)(a, b) = ξ(g⁻¹a)ᵀ D ξ(g⁻¹b)` with `D = diag(1, 2, 3)`.
fn left_invariant_metric() -> Tensor02Field {
    let d = weights();
    Tensor02Field::new(
        "left-invariant",
        group_manifold(so3()),
        Arc::new(move |g: &Vector, a: &Vector, b: &Vector| {
            let gt = unflatten(g.as_slice(), K, K).transpose();
            let xa = skew_coords(&(&gt * unflatten(a.as_slice(), K, K)));
            let xb = skew_coords(&(&gt * unflatten(b.as_slice(), K, K)));
            Ok((xa.transpose() * &d * xb)[(0, 0)])
        }),
    )
}

/// `(2 + g₀₀)·tr(aᵀb)/2`: conformal to the bi-invariant metric by a non-constant factor.
fn scaled_bi_invariant() -> Tensor02Field {
    Tensor02Field::new(
        "scaled-bi-invariant",
        group_manifold(so3()),
        Arc::new(|g: &Vector, a: &Vector, b: &Vector| Ok((2.0 + g[0]) * a.dot(b) / 2.0)),
    )
}

/// `λ^v` over `G × G` with `ψ(g, h) = gh` and frames `H^v(gh)`.
fn pair_sspace(name: &str, v: Vec<Mat>) -> SSpace {
    let g = so3();
    let total: ManifoldRef = Arc::new(Product::new(vec![group_manifold(g.clone()), group_manifold(g.clone())]));
    let d = K * K;
    SSpace::new(
        name,
        total,
        group_manifold(g.clone()),
        g,
        Arc::new(move |z: &Vector| Ok(flatten(&(mat_at(z, 0) * mat_at(z, d))))),
        Arc::new(move |z: &Vector, a: &GroupElement| {
            let ga = mat_at(z, 0) * &a.0;
            let h = a.0.transpose() * mat_at(z, d);
            Ok(Product::join(&[flatten(&ga), flatten(&h)]))
        }),
        Arc::new(move |z: &Vector| Ok(left_invariant_frames(&(mat_at(z, 0) * mat_at(z, d)), &v))),
        Arc::new(move |p: &Vector| Ok(Product::join(&[p.clone(), flatten(&Mat::identity(K, K))]))),
    )
    .with_witness(Arc::new(move |z: &Vector, w: &Vector| {
        Ok(GroupElement(mat_at(z, 0).transpose() * mat_at(w, 0)))
    }))
    .with_fiber_split(FiberSplit { rest: 0..d, fiber: d..2 * d })
}

fn change_of_basis() -> Mat {
    normal_matrix(&mut seeded(31), K, K) + Mat::identity(K, K) * 2.0
}

pub fn pair() -> CatalogEntry {
    let s = pair_sspace("GxG[v]", standard_basis());
    let a = change_of_basis();
    let s2 = pair_sspace("GxG[v']", basis_times(&a));
    let mut e = CatalogEntry::new("liegroup-pair-so3", s.clone());
    let li = left_invariant_metric();
    let sb = scaled_bi_invariant();
    e.tensors.extend([li.clone(), sb.clone()]);
    e.tensors.extend(sweep_tensors(&s, "liegroup-pair"));

    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", 0));
    e.claim(base_change_claim(&s, "", "L(a) = I", |_| Mat::identity(K, K)));
    e.claims(correspondence_claims(&s, &e.tensors, ""));

    let sc = s.clone();
    e.claim(Claim::new(
        "constant-matrices-are-tensors",
        "every constant matrix is the representation of a natural tensor",
        Suite::Correspondence,
        move |p, rng| {
            let mut worst = 0.0_f64;
            for i in 0..3 {
                let c = normal_matrix(&mut seeded(40 + i), K, K);
                let dev = match sc.tensor_from_matrix(&MatrixMap::constant("C", c.clone()), 20, rng, &p.cfg()) {
                    Ok(t) => {
                        let r = is_lambda_natural(&sc, &t, p.samples, rng, &p.cfg());
                        let w = r.witness.map(|w| scaled_dev(&w, &c)).unwrap_or(f64::INFINITY);
                        r.max_deviation.max(w)
                    }
                    Err(_) => f64::INFINITY,
                };
                worst = worst.max(dev);
            }
            CheckReport::from_deviation(worst, p.tol, p.samples)
        },
    ));
    let sc = s.clone();
    let t = li.clone();
    e.claim(Claim::new(
        "natural[left-invariant]",
        "left-invariant metrics have the constant representation D",
        Suite::Naturality,
        move |p, rng| {
            let r = is_lambda_natural(&sc, &t, p.samples, rng, &p.cfg());
            let w = r.witness.map(|w| scaled_dev(&w, &weights())).unwrap_or(f64::INFINITY);
            CheckReport::from_deviation(r.max_deviation.max(w), p.tol, r.samples)
        },
    ));
    let sc = s.clone();
    let t = li.clone();
    e.claim(Claim::new(
        "fibration-natural[left-invariant]",
        "the left-invariant representation depends only on the second factor",
        Suite::Naturality,
        move |p, rng| match is_fibration_natural(&sc, &t, p.samples, rng, &p.cfg()) {
            Ok(r) => CheckReport::from_deviation(r.max_deviation, p.tol, r.samples),
            Err(_) => verdict(false, 0),
        },
    ));
    let sc = s.clone();
    let t = sb.clone();
    e.claim(Claim::new(
        "not-fibration-natural[scaled-bi-invariant]",
        "a non-invariant tensor depends on both factors",
        Suite::Naturality,
        move |p, rng| match is_fibration_natural(&sc, &t, p.samples, rng, &p.cfg()) {
            Ok(r) => negated(CheckReport::from_deviation(r.max_deviation, p.tol, r.samples), p.tol),
            Err(_) => verdict(false, 0),
        },
    ));
    let (sc, s2c, ac) = (s.clone(), s2.clone(), a.clone());
    let tensors = e.tensors.clone();
    e.claim(Claim::new(
        "basis-change-congruence",
        "changing the algebra basis by a congruates every representation by a",
        Suite::Correspondence,
        move |p, rng| {
            let mut worst = 0.0_f64;
            for t in &tensors {
                let r = matrix_sweep(p.samples / tensors.len().max(1), rng, p.tol, &Mat::zeros(K, K), |rng| {
                    let z = sc.sample_point(rng);
                    let predicted = ac.transpose() * sc.matrix_rep(t, &z)? * &ac;
                    Ok(s2c.matrix_rep(t, &z)? - predicted)
                });
                worst = worst.max(r.max_deviation);
            }
            CheckReport::from_deviation(worst, p.tol, p.samples)
        },
    ));

    let id = SSpaceMorphism::new(
        "basis-change",
        s.clone(),
        s2,
        Arc::new(|z: &Vector| Ok(z.clone())),
        Arc::new(|a: &GroupElement| Ok(a.clone())),
    );
    e.claims(morphism_claims(&id, &sweep_tensors(&s, "liegroup-pair")));
    let mc = id.clone();
    e.claim(Claim::new(
        "basis-change/linking-map",
        "the identity morphism has the constant linking map a",
        Suite::Morphisms,
        move |p, rng| {
            matrix_sweep(p.samples, rng, p.tol, &a, |rng| mc.linking_map(&mc.source.sample_point(rng), &p.cfg()))
        },
    ));
    e.morphisms.push(id);
    e
}

/// `G × GL(3)` over `G`, frames `g·(B V)` for the basis with coefficients `V`.
fn bases_sspace() -> SSpace {
    let gl = LieGroup::single(Factor::General(K));
    let total: ManifoldRef = Arc::new(Product::new(vec![group_manifold(so3()), group_manifold(gl.clone())]));
    let d = K * K;
    SSpace::new(
        "GxLg",
        total,
        group_manifold(so3()),
        gl,
        Arc::new(move |z: &Vector| Ok(z.rows(0, d).into_owned())),
        Arc::new(move |z: &Vector, a: &GroupElement| {
            Ok(Product::join(&[z.rows(0, d).into_owned(), flatten(&(mat_at(z, d) * &a.0))]))
        }),
        Arc::new(move |z: &Vector| Ok(left_invariant_frames(&mat_at(z, 0), &basis_times(&mat_at(z, d))))),
        Arc::new(move |p: &Vector| Ok(Product::join(&[p.clone(), flatten(&Mat::identity(K, K))]))),
    )
    .with_witness(Arc::new(move |z: &Vector, w: &Vector| {
        let v = mat_at(z, d).try_inverse().ok_or(crate::error::Error::Singular)?;
        Ok(GroupElement(v * mat_at(w, d)))
    }))
    .with_fiber_split(FiberSplit { rest: 0..d, fiber: d..2 * d })
}

pub fn all_bases() -> CatalogEntry {
    let s = bases_sspace();
    let d = K * K;
    let mut e = CatalogEntry::new("liegroup-bases-so3", s.clone());
    let li = left_invariant_metric();
    let sb = scaled_bi_invariant();
    e.tensors.extend([li.clone(), sb.clone()]);
    e.tensors.extend(sweep_tensors(&s, "liegroup-bases"));

    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", 0));
    e.claim(base_change_claim(&s, "", "L(a) = a", |a: &GroupElement| a.0.clone()));
    e.claims(correspondence_claims(&s, &e.tensors, ""));

    let sc = s.clone();
    e.claim(Claim::new(
        "only-null-natural",
        "the null tensor is the only natural tensor",
        Suite::Naturality,
        move |p, rng| {
            let zero = is_lambda_natural(&sc, &Tensor02Field::zero(sc.base.clone()), p.samples, rng, &p.cfg());
            let mut ok = zero.verdict;
            for i in 0..3 {
                let t = super::polynomial_tensor(format!("random{i}"), sc.base.clone(), 50 + i);
                let r = is_lambda_natural(&sc, &t, p.samples, rng, &p.cfg());
                ok &= negated(CheckReport::from_deviation(r.max_deviation, p.tol, r.samples), p.tol).pass;
            }
            CheckReport::with_verdict(ok, zero.max_deviation, p.samples)
        },
    ));
    let sc = s.clone();
    let t = li.clone();
    e.claim(Claim::new(
        "fibration-natural[left-invariant]",
        "a left-invariant metric depends only on the basis",
        Suite::Naturality,
        move |p, rng| match is_fibration_natural(&sc, &t, p.samples, rng, &p.cfg()) {
            Ok(r) => CheckReport::from_deviation(r.max_deviation, p.tol, r.samples),
            Err(_) => verdict(false, 0),
        },
    ));
    let sc = s.clone();
    let t = sb.clone();
    e.claim(Claim::new(
        "not-fibration-natural[scaled-bi-invariant]",
        "a non-invariant metric depends on the group point",
        Suite::Naturality,
        move |p, rng| match is_fibration_natural(&sc, &t, p.samples, rng, &p.cfg()) {
            Ok(r) => negated(CheckReport::from_deviation(r.max_deviation, p.tol, r.samples), p.tol),
            Err(_) => verdict(false, 0),
        },
    ));
    let sc = s.clone();
    e.claim(Claim::new(
        "left-invariant-factorization",
        "the representation is F(v)ᵀ D F(v) with F the coefficient matrix",
        Suite::Naturality,
        move |p, rng| {
            matrix_sweep(p.samples, rng, p.tol, &Mat::zeros(K, K), |rng| {
                let z = sc.sample_point(rng);
                let v = mat_at(&z, d);
                Ok(sc.matrix_rep(&li, &z)? - v.transpose() * weights() * v)
            })
        },
    ));
    e
}

/// `G × O(3)` over `G`, frames `g·(B ξ)`.
fn ortho_sspace() -> SSpace {
    let o = LieGroup::single(Factor::Orthogonal(K));
    let total: ManifoldRef = Arc::new(Product::new(vec![group_manifold(so3()), group_manifold(o.clone())]));
    let d = K * K;
    SSpace::new(
        "GxO3",
        total,
        group_manifold(so3()),
        o,
        Arc::new(move |z: &Vector| Ok(z.rows(0, d).into_owned())),
        Arc::new(move |z: &Vector, a: &GroupElement| {
            Ok(Product::join(&[z.rows(0, d).into_owned(), flatten(&(mat_at(z, d) * &a.0))]))
        }),
        Arc::new(move |z: &Vector| Ok(left_invariant_frames(&mat_at(z, 0), &basis_times(&mat_at(z, d))))),
        Arc::new(move |p: &Vector| Ok(Product::join(&[p.clone(), flatten(&Mat::identity(K, K))]))),
    )
    .with_witness(Arc::new(move |z: &Vector, w: &Vector| {
        Ok(GroupElement(mat_at(z, d).transpose() * mat_at(w, d)))
    }))
    .with_fiber_split(FiberSplit { rest: 0..d, fiber: d..2 * d })
}

pub fn ortho_bases() -> CatalogEntry {
    let s = ortho_sspace();
    let d = K * K;
    let mut e = CatalogEntry::new("liegroup-ortho-so3", s.clone());
    let li = left_invariant_metric();
    let sb = scaled_bi_invariant();
    e.tensors.extend([li.clone(), sb.clone()]);
    e.tensors.extend(sweep_tensors(&s, "liegroup-ortho"));

    e.claims(structure_claims(&s, ""));
    e.claim(stabilizer_value_claim(&s, "", 0));
    e.claim(base_change_claim(&s, "", "L(a) = a", |a: &GroupElement| a.0.clone()));
    e.claims(correspondence_claims(&s, &e.tensors, ""));

    let sc = s.clone();
    let t = sb.clone();
    e.claim(Claim::new(
        "orbit-constant[scaled-bi-invariant]",
        "f(g)·I is constant along every orbit",
        Suite::Naturality,
        move |p, rng| {
            let r = is_orbit_constant(&sc, &t, p.samples, rng, &p.cfg());
            CheckReport::from_deviation(r.max_deviation, p.tol, r.samples)
        },
    ));
    let sc = s.clone();
    let t = li.clone();
    e.claim(Claim::new(
        "not-orbit-constant[left-invariant]",
        "a non-conformal metric varies along orbits",
        Suite::Naturality,
        move |p, rng| {
            let r = is_orbit_constant(&sc, &t, p.samples, rng, &p.cfg());
            negated(CheckReport::from_deviation(r.max_deviation, p.tol, r.samples), p.tol)
        },
    ));
    let sc = s.clone();
    let t = li.clone();
    e.claim(Claim::new(
        "fibration-natural[left-invariant]",
        "the left-invariant representation depends only on the rotation",
        Suite::Naturality,
        move |p, rng| match is_fibration_natural(&sc, &t, p.samples, rng, &p.cfg()) {
            Ok(r) => CheckReport::from_deviation(r.max_deviation, p.tol, r.samples),
            Err(_) => verdict(false, 0),
        },
    ));
    let sc = s.clone();
    e.claim(Claim::new(
        "rotation-congruence",
        "the representation is ξᵀ D ξ",
        Suite::Naturality,
        move |p, rng| {
            matrix_sweep(p.samples, rng, p.tol, &Mat::zeros(K, K), |rng| {
                let z = sc.sample_point(rng);
                let xi = mat_at(&z, d);
                Ok(sc.matrix_rep(&li, &z)? - xi.transpose() * weights() * xi)
            })
        },
    ));
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skew_coordinates_invert_the_basis() {
        let b = standard_basis();
        for (i, bi) in b.iter().enumerate() {
            let c = skew_coords(bi);
            for j in 0..K {
                assert_eq!(c[j], if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn left_invariant_metric_is_d_in_standard_frames() {
        let mut rng = seeded(8);
        let g = so3().random_element(&mut rng).unwrap().0;
        let frames = left_invariant_frames(&g, &standard_basis());
        let rep = left_invariant_metric().gram(&flatten(&g), &frames).unwrap();
        assert!((rep - weights()).amax() < 1e-12);
    }
}
