//! Quaternion arithmetic on `ℝ⁴ = span{1, i, j, k}` and the Hopf map
//! `π(q) = q i q̄` from S³ to S².

use crate::geometry::{orthonormalize, Manifold, Sphere};
use crate::groups::{Factor, LieGroup};
use crate::numerics::{flatten, unflatten, Mat, Vector};
use crate::rng::Rng;

pub type Quat = [f64; 4];

pub const ONE: Quat = [1.0, 0.0, 0.0, 0.0];
pub const I: Quat = [0.0, 1.0, 0.0, 0.0];
pub const J: Quat = [0.0, 0.0, 1.0, 0.0];
pub const K: Quat = [0.0, 0.0, 0.0, 1.0];

pub fn mul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

pub fn conj(a: Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

pub fn dot(a: Quat, b: Quat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

pub fn scale(a: Quat, t: f64) -> Quat {
    a.map(|x| x * t)
}

pub fn normalize(a: Quat) -> Quat {
    scale(a, 1.0 / dot(a, a).sqrt())
}

pub fn from_vector(v: &Vector) -> Quat {
    [v[0], v[1], v[2], v[3]]
}

pub fn to_vector(a: Quat) -> Vector {
    Vector::from_row_slice(&a)
}

/// Vector part of a quaternion.
pub fn im(a: Quat) -> Vector {
    Vector::from_vec(vec![a[1], a[2], a[3]])
}

/// `q x q̄` for a pure `x`, as a vector of ℝ³.
pub fn conjugate_by(q: Quat, x: Quat) -> Vector {
    im(mul(mul(q, x), conj(q)))
}

/// `π(q) = q i q̄`.
pub fn hopf(q: Quat) -> Vector {
    conjugate_by(q, I)
}

/// `π_*(X) = X i q̄ + q i X̄` at `q`.
pub fn hopf_push(q: Quat, x: Quat) -> Vector {
    im(mul(mul(x, I), conj(q))) + im(mul(mul(q, I), conj(x)))
}

/// Orthonormal tangent frame `[q j q̄, q k q̄]` at `π(q)`.
pub fn frame(q: Quat) -> Mat {
    Mat::from_columns(&[conjugate_by(q, J), conjugate_by(q, K)])
}

/// Unit complex number `c + s i` read off an SO(2) matrix.
pub fn from_rotation(m: &Mat) -> Quat {
    [m[(0, 0)], m[(1, 0)], 0.0, 0.0]
}

pub fn to_rotation(a: Quat) -> Mat {
    Mat::from_row_slice(2, 2, &[a[0], -a[1], a[1], a[0]])
}

/// A point of the fibre over `p`, smooth away from a neighbourhood of the
/// antipode of the chart in use.
pub fn section(p: &Vector) -> Quat {
    if p[0] >= -0.5 {
        normalize([1.0 + p[0], 0.0, -p[2], p[1]])
    } else {
        mul(normalize([1.0 - p[0], 0.0, p[2], -p[1]]), J)
    }
}

/// Horizontal lift of `w ∈ T_{π(q)}S²` for the connection `⟨·, qi⟩`.
pub fn horizontal_lift(q: Quat, w: &Vector) -> Quat {
    let e = frame(q);
    let a = w.dot(&e.column(0)) / 2.0;
    let b = w.dot(&e.column(1)) / 2.0;
    let qk = mul(q, K);
    let qj = mul(q, J);
    [0, 1, 2, 3].map(|r| a * qk[r] - b * qj[r])
}

/// Pairs `(q, u)` with `q ∈ S³` and `u = [q j q̄, q k q̄]·C` a frame of
/// `T_{π(q)}S²`, `C ∈ O(2)` or `GL(2)`. Points are `(q, vec(u)) ∈ ℝ¹⁰`.
#[derive(Debug, Clone, Copy)]
pub struct HopfFrames {
    pub orthonormal: bool,
}

impl HopfFrames {
    pub fn split(x: &Vector) -> (Quat, Mat) {
        ([x[0], x[1], x[2], x[3]], unflatten(&x.as_slice()[4..10], 3, 2))
    }

    pub fn join(q: Quat, u: &Mat) -> Vector {
        let mut v = Vector::zeros(10);
        v.rows_mut(0, 4).copy_from(&to_vector(q));
        v.rows_mut(4, 6).copy_from(&flatten(u));
        v
    }

    fn coefficients(&self) -> LieGroup {
        LieGroup::single(if self.orthonormal { Factor::Orthogonal(2) } else { Factor::General(2) })
    }
}

impl Manifold for HopfFrames {
    fn name(&self) -> String {
        if self.orthonormal { "OS2|S3".into() } else { "LS2|S3".into() }
    }
    fn dim(&self) -> usize {
        3 + self.coefficients().dim()
    }
    fn ambient_dim(&self) -> usize {
        10
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        if x.len() != 10 {
            return false;
        }
        let (q, u) = Self::split(x);
        let tangent = (u.transpose() * hopf(q)).amax() < tol * u.amax().max(1.0);
        let shape = if self.orthonormal {
            (u.transpose() * &u - Mat::identity(2, 2)).amax() < tol
        } else {
            (u.transpose() * &u).determinant().abs() > tol
        };
        (dot(q, q).sqrt() - 1.0).abs() < tol && tangent && shape
    }
    fn tangent_basis(&self, x: &Vector) -> Mat {
        let (q, u) = Self::split(x);
        let r = frame(q);
        let c = r.transpose() * &u;
        let mut cols = Vec::new();
        for y in [I, J, K] {
            let dr = Mat::from_columns(&[
                im(mul(mul(q, sub(mul(y, J), mul(J, y))), conj(q))),
                im(mul(mul(q, sub(mul(y, K), mul(K, y))), conj(q))),
            ]);
            cols.push(Self::join(mul(q, y), &(dr * &c)));
        }
        for x in self.coefficients().algebra_basis() {
            cols.push(Self::join([0.0; 4], &(&r * &c * &x.0)));
        }
        orthonormalize(&Mat::from_columns(&cols))
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        let q = from_vector(&Sphere { n: 3 }.sample(rng));
        let c = self.coefficients().random_element(rng).expect("group sampler exhausted");
        Self::join(q, &(frame(q) * c.0))
    }
}

fn sub(a: Quat, b: Quat) -> Quat {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn close(a: &Vector, b: &Vector, tol: f64) -> bool {
        (a - b).amax() < tol
    }

    #[test]
    fn unit_relations() {
        assert_eq!(mul(I, J), K);
        assert_eq!(mul(J, K), I);
        assert_eq!(mul(K, I), J);
        assert_eq!(mul(I, I), scale(ONE, -1.0));
    }

    #[test]
    fn hopf_frames_and_section() {
        let mut rng = seeded(9);
        for _ in 0..50 {
            let p = Sphere { n: 2 }.sample(&mut rng);
            let q = section(&p);
            assert!(close(&hopf(q), &p, 1e-12));
            let e = frame(q);
            assert!((e.transpose() * &e - Mat::identity(2, 2)).amax() < 1e-12);
            assert!((e.transpose() * &p).amax() < 1e-12);
        }
    }

    #[test]
    fn pushforward_of_right_multiples() {
        // π_*(qj) = −2 e₂, π_*(qk) = 2 e₁, π_*(qi) = 0.
        let q = normalize([0.3, -0.2, 0.7, 0.4]);
        let e = frame(q);
        assert!(close(&hopf_push(q, mul(q, J)), &(e.column(1) * -2.0), 1e-12));
        assert!(close(&hopf_push(q, mul(q, K)), &(e.column(0) * 2.0), 1e-12));
        assert!(hopf_push(q, mul(q, I)).amax() < 1e-12);
        let w = e.column(0) * 0.4 - e.column(1) * 1.3;
        let h = horizontal_lift(q, &w);
        assert!(close(&hopf_push(q, h), &w, 1e-12));
        assert!(dot(h, mul(q, I)).abs() < 1e-12);
    }

    #[test]
    fn base_change_is_rotation_by_twice_the_angle() {
        let q = normalize([0.1, 0.9, -0.3, 0.2]);
        let t: f64 = 0.37;
        let qa = mul(q, [t.cos(), t.sin(), 0.0, 0.0]);
        let l = frame(q).transpose() * frame(qa);
        let expected = to_rotation([(2.0 * t).cos(), (2.0 * t).sin(), 0.0, 0.0]);
        assert!((l - expected).amax() < 1e-12);
    }

    #[test]
    fn hopf_frames_tangents_are_tangent() {
        let mut rng = seeded(10);
        for orthonormal in [true, false] {
            let m = HopfFrames { orthonormal };
            for _ in 0..10 {
                let x = m.sample(&mut rng);
                assert!(m.contains(&x, 1e-10));
                let b = m.tangent_basis(&x);
                assert_eq!(b.ncols(), m.dim());
                for j in 0..b.ncols() {
                    let y = &x + b.column(j) * 1e-6;
                    let (q, u) = HopfFrames::split(&y);
                    let pq = hopf(normalize(q));
                    assert!((u.transpose() * pq).amax() < 1e-10);
                }
            }
        }
    }
}
