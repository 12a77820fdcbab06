//! Property tests over the catalog: representation laws, morphisms,
//! connections and naturality.

use std::sync::LazyLock;

use proptest::prelude::*;
use sspace_core::catalog::{self, polynomial_tensor, CatalogEntry};
use sspace_core::geometry::random_tangent;
use sspace_core::naturality::{is_fibration_natural, is_lambda_natural};
use sspace_core::numerics::{invert, numerical_rank};
use sspace_core::rng::seeded;
use sspace_core::sspace::scaled_dev;
use sspace_core::{DiffConfig, Mat, SSpace, SSpaceMorphism, Tensor02Field, Vector};

static CATALOG: LazyLock<Vec<CatalogEntry>> = LazyLock::new(catalog::all);

fn cfg(tol: f64) -> DiffConfig {
    DiffConfig::default().with_tol(tol)
}

fn pick(i: usize) -> &'static CatalogEntry {
    &CATALOG[i % CATALOG.len()]
}

fn poly(s: &SSpace, seed: u64) -> Tensor02Field {
    polynomial_tensor(format!("p{seed}"), s.base.clone(), seed)
}

/// Morphisms over the identity, for which linking maps exist.
fn linked_morphisms() -> Vec<&'static SSpaceMorphism> {
    CATALOG.iter().flat_map(|e| e.morphisms.iter()).filter(|m| m.over.is_none()).collect()
}

/// Naturality witness of `t` on `s`, if `t` is natural there.
fn witness(s: &SSpace, t: &Tensor02Field, seed: u64) -> Option<Mat> {
    let r = is_lambda_natural(s, t, 40, &mut seeded(seed), &cfg(1e-7));
    if r.verdict {
        r.witness
    } else {
        None
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sampled_points_lie_on_their_manifolds(i in 0usize..13, seed in any::<u64>()) {
        let s = &pick(i).sspace;
        let strict = DiffConfig::default().with_tol(1e-8);
        let mut rng = seeded(seed);
        for m in [&s.total, &s.base] {
            let x = m.sample(&mut rng);
            prop_assert!(m.contains(&x, 1e-8), "{} sample outside", m.name());
            prop_assert_eq!(numerical_rank(&m.tangent_basis(&x), &strict), m.dim());
        }
    }

    #[test]
    fn base_change_is_multiplicative(i in 0usize..13, seed in any::<u64>()) {
        let s = &pick(i).sspace;
        let c = cfg(1e-8);
        let mut rng = seeded(seed);
        let a = s.group.random_element(&mut rng).unwrap();
        let b = s.group.random_element(&mut rng).unwrap();
        let lab = s.base_change(&s.group.mul(&a, &b), &c).unwrap();
        let la_lb = s.base_change(&a, &c).unwrap() * s.base_change(&b, &c).unwrap();
        prop_assert!(scaled_dev(&lab, &la_lb) < 1e-8);
    }

    #[test]
    fn matrix_to_tensor_to_matrix(i in 0usize..13, seed in any::<u64>()) {
        let s = &pick(i).sspace;
        let c = cfg(1e-7);
        let f = s.matrix_map_of(&poly(s, seed));
        let mut rng = seeded(seed ^ 1);
        let t = s.tensor_from_matrix(&f, 10, &mut rng, &c).unwrap();
        for _ in 0..5 {
            let z = s.sample_point(&mut rng);
            prop_assert!(scaled_dev(&s.matrix_rep(&t, &z).unwrap(), &f.eval(&z).unwrap()) < 1e-7);
        }
    }

    #[test]
    fn tensor_value_is_independent_of_representative(i in 0usize..13, seed in any::<u64>()) {
        let s = &pick(i).sspace;
        let c = cfg(1e-7);
        let f = s.matrix_map_of(&poly(s, seed));
        let mut rng = seeded(seed ^ 2);
        let (z, _, za) = s.sample_moved(&mut rng).unwrap();
        let p = s.project(&z).unwrap();
        let u = random_tangent(&*s.base, &p, &mut rng);
        let w = random_tangent(&*s.base, &p, &mut rng);
        let x = s.tensor_value_through(&f, &z, &u, &w, &c).unwrap();
        let y = s.tensor_value_through(&f, &za, &u, &w, &c).unwrap();
        prop_assert!((x - y).abs() < 1e-7 * x.abs().max(1.0), "{x} vs {y}");
    }

    #[test]
    fn pullback_identity_and_cocycle(j in 0usize..64, seed in any::<u64>()) {
        let ms = linked_morphisms();
        let m = ms[j % ms.len()];
        let c = cfg(1e-6);
        let mut rng = seeded(seed);
        for k in 0..5 {
            let t = poly(&m.source, seed.wrapping_add(k));
            prop_assert!(m.check_pullback(&t, 4, &mut rng, &c).pass, "{} pullback", m.name);
        }
        prop_assert!(m.check_cocycle(4, &mut rng, &c).pass, "{} cocycle", m.name);
    }

    #[test]
    fn invariance_tests_agree(j in 0usize..64, seed in any::<u64>()) {
        let ms = linked_morphisms();
        let m = ms[j % ms.len()];
        let r = m.is_invariant_tensor(&poly(&m.source, seed), 4, &mut seeded(seed), &cfg(1e-7));
        prop_assert!(r.membership_agrees, "{}", m.name);
    }

    #[test]
    fn horizontal_lift_is_linear(i in 0usize..13, seed in any::<u64>(), alpha in -2.0..2.0f64, beta in -2.0..2.0f64) {
        let e = pick(i);
        let c = cfg(1e-4);
        let mut rng = seeded(seed);
        for conn in &e.connections {
            let s = &conn.sspace;
            let z = s.sample_point(&mut rng);
            let p = s.project(&z).unwrap();
            let v = random_tangent(&*s.base, &p, &mut rng);
            let w = random_tangent(&*s.base, &p, &mut rng);
            let combined = conn.horizontal_lift(&(&v * alpha + &w * beta), &z, &c).unwrap();
            let separate = conn.horizontal_lift(&v, &z, &c).unwrap() * alpha
                + conn.horizontal_lift(&w, &z, &c).unwrap() * beta;
            prop_assert!((combined - &separate).amax() < 1e-6 * separate.amax().max(1.0), "{}", conn.name);
        }
    }

    #[test]
    fn witnesses_are_fixed_by_base_change(i in 0usize..13, seed in any::<u64>()) {
        let e = pick(i);
        let s = &e.sspace;
        let c = cfg(1e-7);
        let mut rng = seeded(seed);
        for t in &e.tensors {
            if let Some(a) = witness(s, t, seed) {
                let l = s.base_change(&s.group.random_element(&mut rng).unwrap(), &c).unwrap();
                prop_assert!(scaled_dev(&(l.transpose() * &a * &l), &a) < 1e-7, "{}", t.name);
            }
        }
    }

    #[test]
    fn sums_of_natural_tensors_stay_natural(i in 0usize..13, seed in any::<u64>()) {
        let e = pick(i);
        let s = &e.sspace;
        for t in &e.tensors {
            if witness(s, t, seed).is_some() {
                let scaled = t.plus("twice", t);
                let r = is_lambda_natural(s, &scaled, 20, &mut seeded(seed), &cfg(1e-7));
                prop_assert!(r.verdict, "{} doubled", t.name);
            }
        }
    }
}

#[test]
fn projector_laws_on_every_connection() {
    let mut rng = seeded(11);
    for e in CATALOG.iter() {
        for conn in &e.connections {
            let r = conn.check_projector(100, &mut rng, &cfg(1e-5));
            assert!(r.idempotence.max_deviation < 1e-6, "{} idempotence {:?}", conn.name, r.idempotence);
            assert!(r.verticality.pass, "{} verticality {:?}", conn.name, r.verticality);
            assert!(r.equivariance.pass, "{} equivariance {:?}", conn.name, r.equivariance);
        }
    }
}

#[test]
fn naturality_descends_along_subs_spaces() {
    let mut exercised = 0;
    for e in CATALOG.iter() {
        for m in e.morphisms.iter().filter(|m| m.over.is_none()) {
            if !m.is_subsspace(20, &mut seeded(1), &cfg(1e-7)).pass() {
                continue;
            }
            let zero = Tensor02Field::from_ambient_matrix("zero", m.target.base.clone(), |p: &Vector| {
                Mat::zeros(p.len(), p.len())
            });
            let candidates = e.tensors.iter().filter(|t| t.manifold.name() == m.target.base.name());
            for t in candidates.chain(std::iter::once(&zero)) {
                if witness(&m.target, t, 2).is_some() {
                    assert!(witness(&m.source, t, 3).is_some(), "{}: {} natural above, not below", m.name, t.name);
                    exercised += 1;
                }
            }
        }
    }
    assert!(exercised >= 2, "no subs-space pair exercised");
}

#[test]
fn natural_tensors_are_constant_on_the_frame_bundle_image() {
    let mut rng = seeded(5);
    for e in CATALOG.iter() {
        for m in e.morphisms.iter().filter(|m| m.name.starts_with("Gamma")) {
            for t in &e.tensors {
                let Some(a) = witness(&m.source, t, 6) else { continue };
                for _ in 0..20 {
                    let z = m.source.sample_point(&mut rng);
                    let image = m.target.matrix_rep(t, &m.apply(&z).unwrap()).unwrap();
                    assert!(scaled_dev(&image, &a) < 1e-7, "{} {}", m.name, t.name);
                }
            }
        }
    }
}

/// With `ᵏ′T(f(z)) = C(z)ᵀ·ᵏT(z)·C(z)`: a target witness `A` makes the source
/// natural iff `C⁻ᵀ·A·C⁻¹` is constant, and witnesses on both sides satisfy
/// `CᵀAC = B`.
#[test]
fn linking_maps_relate_witnesses() {
    let c = cfg(1e-7);
    let mut rng = seeded(8);
    let mut exercised = 0;
    for m in linked_morphisms() {
        let tensors = CATALOG.iter().flat_map(|e| e.tensors.iter());
        for t in tensors.filter(|t| t.manifold.name() == m.source.base.name()) {
            let Some(a) = witness(&m.target, t, 9) else { continue };
            let source_witness = witness(&m.source, t, 10);
            let mut constant = true;
            let mut first: Option<Mat> = None;
            for _ in 0..20 {
                let z = m.source.sample_point(&mut rng);
                let cz = m.linking_map(&z, &c).unwrap();
                let inv = invert(&cz, &c).unwrap();
                let pushed = inv.transpose() * &a * &inv;
                assert!(scaled_dev(&pushed, &m.source.matrix_rep(t, &z).unwrap()) < 1e-7, "{} {}", m.name, t.name);
                if let Some(b) = &source_witness {
                    assert!(scaled_dev(&(cz.transpose() * b * &cz), &a) < 1e-7, "{} {}", m.name, t.name);
                }
                match &first {
                    None => first = Some(pushed),
                    Some(f) => constant &= scaled_dev(&pushed, f) < 1e-7,
                }
            }
            assert_eq!(constant, source_witness.is_some(), "{} {}", m.name, t.name);
            exercised += 1;
        }
    }
    assert!(exercised > 5, "only {exercised} natural tensors met");
}

#[test]
fn natural_tensors_are_fibration_natural() {
    for e in CATALOG.iter().filter(|e| e.sspace.fiber_split.is_some()) {
        for t in &e.tensors {
            if witness(&e.sspace, t, 12).is_some() {
                let r = is_fibration_natural(&e.sspace, t, 40, &mut seeded(13), &cfg(1e-7)).unwrap();
                assert!(r.verdict, "{} {}", e.name, t.name);
            }
        }
    }
}
