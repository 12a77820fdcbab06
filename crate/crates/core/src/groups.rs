//! Matrix Lie groups and finite block-diagonal products of them.

use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::{block_diagonal, matrix_exp, Mat};
use crate::rng::{normal_matrix, Rng};

/// One block of a product group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    /// GL(n)
    General(usize),
    /// O(n)
    Orthogonal(usize),
    /// SO(n); SO(2) doubles as U(1) and SO(1) as the trivial group.
    Special(usize),
    /// Invertible n×n matrices whose top-right k×(n−k) block vanishes, i.e. the
    /// stabiliser of span(e_1..e_k) under row-vector action.
    LowerBlock { n: usize, k: usize },
}

impl Factor {
    pub fn size(&self) -> usize {
        match *self {
            Factor::General(n) | Factor::Orthogonal(n) | Factor::Special(n) => n,
            Factor::LowerBlock { n, .. } => n,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Factor::General(n) => n * n,
            Factor::Orthogonal(n) | Factor::Special(n) => n * n.saturating_sub(1) / 2,
            Factor::LowerBlock { n, k } => n * n - k * (n - k),
        }
    }

    fn algebra_basis(&self) -> Vec<Mat> {
        let n = self.size();
        let unit = |i: usize, j: usize| {
            let mut m = Mat::zeros(n, n);
            m[(i, j)] = 1.0;
            m
        };
        match *self {
            Factor::General(_) => (0..n)
                .flat_map(|j| (0..n).map(move |i| (i, j)))
                .map(|(i, j)| unit(i, j))
                .collect(),
            Factor::Orthogonal(_) | Factor::Special(_) => {
                let mut out = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        out.push(unit(j, i) - unit(i, j));
                    }
                }
                out
            }
            Factor::LowerBlock { k, .. } => (0..n)
                .flat_map(|j| (0..n).map(move |i| (i, j)))
                .filter(|&(i, j)| !(i < k && j >= k))
                .map(|(i, j)| unit(i, j))
                .collect(),
        }
    }

    fn contains(&self, a: &Mat, tol: f64) -> bool {
        let n = self.size();
        if a.nrows() != n || a.ncols() != n || a.iter().any(|v| !v.is_finite()) {
            return false;
        }
        if n == 0 {
            return true;
        }
        let scale = a.amax().max(1.0);
        match *self {
            Factor::General(_) => a.determinant().abs() > 1e-12 * scale.powi(n as i32),
            Factor::Orthogonal(_) => (a.transpose() * a - Mat::identity(n, n)).amax() < tol,
            Factor::Special(_) => {
                (a.transpose() * a - Mat::identity(n, n)).amax() < tol && a.determinant() > 0.0
            }
            Factor::LowerBlock { k, .. } => {
                let block_ok = a.view((0, k), (k, n - k)).amax() < tol * scale;
                block_ok && a.determinant().abs() > 1e-12 * scale.powi(n as i32)
            }
        }
    }

    fn sample(&self, rng: &mut Rng) -> Result<Mat> {
        let n = self.size();
        if n == 0 {
            return Ok(Mat::zeros(0, 0));
        }
        const ATTEMPTS: usize = 100;
        match *self {
            Factor::General(_) => {
                for _ in 0..ATTEMPTS {
                    let m = normal_matrix(rng, n, n);
                    if m.determinant().abs() > 0.1 {
                        return Ok(m);
                    }
                }
                Err(Error::SamplerExhausted { attempts: ATTEMPTS })
            }
            Factor::LowerBlock { k, .. } => {
                for _ in 0..ATTEMPTS {
                    let mut m = normal_matrix(rng, n, n);
                    m.view_mut((0, k), (k, n - k)).fill(0.0);
                    if m.determinant().abs() > 0.1 {
                        return Ok(m);
                    }
                }
                Err(Error::SamplerExhausted { attempts: ATTEMPTS })
            }
            Factor::Orthogonal(_) | Factor::Special(_) => {
                for _ in 0..ATTEMPTS {
                    let m = normal_matrix(rng, n, n);
                    if m.determinant().abs() < 1e-6 {
                        continue;
                    }
                    let qr = m.qr();
                    let r = qr.r();
                    let mut q = qr.q();
                    // Fixing sign(diag R) makes the distribution Haar.
                    for j in 0..n {
                        if r[(j, j)] < 0.0 {
                            q.column_mut(j).neg_mut();
                        }
                    }
                    if matches!(self, Factor::Special(_)) && q.determinant() < 0.0 {
                        q.column_mut(0).neg_mut();
                    }
                    return Ok(q);
                }
                Err(Error::SamplerExhausted { attempts: ATTEMPTS })
            }
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::General(n) => write!(f, "GL({n})"),
            Factor::Orthogonal(n) => write!(f, "O({n})"),
            Factor::Special(n) => write!(f, "SO({n})"),
            Factor::LowerBlock { n, k } => write!(f, "GL({n};{k})"),
        }
    }
}

/// Group element stored as a full block-diagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement(pub Mat);

/// Lie algebra element, same shape as the group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement(pub Mat);

impl GroupElement {
    pub fn matrix(&self) -> &Mat {
        &self.0
    }
}

impl AlgebraElement {
    pub fn matrix(&self) -> &Mat {
        &self.0
    }

    pub fn scale(&self, t: f64) -> AlgebraElement {
        AlgebraElement(&self.0 * t)
    }
}

/// Finite product of matrix groups acting block-diagonally.
#[derive(Debug, Clone, PartialEq)]
pub struct LieGroup {
    factors: Vec<Factor>,
}

impl LieGroup {
    pub fn new(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    pub fn single(factor: Factor) -> Self {
        Self::new(vec![factor])
    }

    pub fn trivial() -> Self {
        Self::single(Factor::Special(1))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn name(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.to_string())
            .collect::<Vec<_>>()
            .join("×")
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(Factor::dim).sum()
    }

    /// Side length of the block-diagonal element matrices.
    pub fn size(&self) -> usize {
        self.factors.iter().map(Factor::size).sum()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut acc = 0;
        for f in &self.factors {
            out.push(acc);
            acc += f.size();
        }
        out
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(Mat::identity(self.size(), self.size()))
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(&a.0 * &b.0)
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        let blocks: Vec<Mat> = (0..self.factors.len())
            .map(|i| {
                let b = self.block(a, i);
                match self.factors[i] {
                    Factor::Orthogonal(_) | Factor::Special(_) => b.transpose(),
                    _ => {
                        let (r, c) = b.shape();
                        b.try_inverse().unwrap_or_else(|| Mat::from_element(r, c, f64::NAN))
                    }
                }
            })
            .collect();
        GroupElement(block_diagonal(&blocks))
    }

    /// The `i`-th diagonal block of an element.
    pub fn block(&self, a: &GroupElement, i: usize) -> Mat {
        let off = self.offsets()[i];
        let n = self.factors[i].size();
        a.0.view((off, off), (n, n)).into_owned()
    }

    pub fn from_blocks(&self, blocks: &[Mat]) -> GroupElement {
        GroupElement(block_diagonal(blocks))
    }

    pub fn contains(&self, a: &GroupElement, tol: f64) -> bool {
        let n = self.size();
        if a.0.nrows() != n || a.0.ncols() != n {
            return false;
        }
        let mut mask = a.0.clone();
        for (i, off) in self.offsets().into_iter().enumerate() {
            let m = self.factors[i].size();
            mask.view_mut((off, off), (m, m)).fill(0.0);
        }
        if mask.amax() > tol * a.0.amax().max(1.0) {
            return false;
        }
        (0..self.factors.len()).all(|i| self.factors[i].contains(&self.block(a, i), tol))
    }

    pub fn algebra_basis(&self) -> Vec<AlgebraElement> {
        let n = self.size();
        let mut out = Vec::with_capacity(self.dim());
        for (i, off) in self.offsets().into_iter().enumerate() {
            let m = self.factors[i].size();
            for x in self.factors[i].algebra_basis() {
                let mut full = Mat::zeros(n, n);
                full.view_mut((off, off), (m, m)).copy_from(&x);
                out.push(AlgebraElement(full));
            }
        }
        out
    }

    pub fn random_element(&self, rng: &mut Rng) -> Result<GroupElement> {
        let blocks = self
            .factors
            .iter()
            .map(|f| f.sample(rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(GroupElement(block_diagonal(&blocks)))
    }

    /// `exp(t X)`, rejected when it leaves the group.
    pub fn exp_curve(&self, x: &AlgebraElement, t: f64) -> Result<GroupElement> {
        let g = GroupElement(matrix_exp(&(&x.0 * t)));
        if self.contains(&g, 1e-9) {
            Ok(g)
        } else {
            Err(Error::MembershipViolation(format!(
                "exp(tX) left {} at t = {t}",
                self.name()
            )))
        }
    }

    /// `a X a⁻¹`.
    pub fn adjoint(&self, a: &GroupElement, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(&a.0 * &x.0 * self.inv(a).0)
    }

    /// Conjugation `a⁻¹ b a`, the group-level adjoint `Ad(a⁻¹)`.
    pub fn conjugate(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(self.inv(a).0 * &b.0 * &a.0)
    }
}

/// Signature-preserving block group `O(s) × O(r−s) × GL(n−r)`, empty blocks dropped.
pub fn block_group(s: usize, r: usize, n: usize) -> Result<LieGroup> {
    if s > r || r > n || n == 0 {
        return Err(Error::BadSignature { s, r, n });
    }
    let mut factors = Vec::new();
    if s > 0 {
        factors.push(Factor::Orthogonal(s));
    }
    if r > s {
        factors.push(Factor::Orthogonal(r - s));
    }
    if n > r {
        factors.push(Factor::General(n - r));
    }
    Ok(LieGroup::new(factors))
}

/// `diag(I_s, −I_{r−s}, 0_{n−r})`.
pub fn signature_matrix(s: usize, r: usize, n: usize) -> Mat {
    Mat::from_fn(n, n, |i, j| {
        if i != j || i >= r {
            0.0
        } else if i < s {
            1.0
        } else {
            -1.0
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::max_abs_diff;
    use crate::rng::seeded;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn so3_generator(axis: usize) -> Mat {
        // L_x, L_y, L_z with [L_x, L_y] = L_z
        let mut m = Mat::zeros(3, 3);
        let (i, j) = match axis {
            0 => (2, 1),
            1 => (0, 2),
            _ => (1, 0),
        };
        m[(i, j)] = 1.0;
        m[(j, i)] = -1.0;
        m
    }

    #[test]
    fn exp_curve_of_zero_is_identity() {
        let g = LieGroup::single(Factor::Orthogonal(2));
        let x = AlgebraElement(Mat::zeros(2, 2));
        assert_eq!(g.exp_curve(&x, 1.0).unwrap(), g.identity());
    }

    #[test]
    fn exp_curve_half_turn() {
        let g = LieGroup::single(Factor::Special(2));
        let x = g.algebra_basis().remove(0);
        let r = g.exp_curve(&x, PI).unwrap();
        assert!(max_abs_diff(&r.0, &(-Mat::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn exp_curve_rejects_non_skew() {
        let g = LieGroup::single(Factor::Orthogonal(2));
        let x = AlgebraElement(Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        assert!(matches!(g.exp_curve(&x, 1.0), Err(Error::MembershipViolation(_))));
    }

    #[test]
    fn adjoint_examples() {
        let g = LieGroup::single(Factor::Special(2));
        let mut rng = seeded(3);
        let a = g.random_element(&mut rng).unwrap();
        let x = g.algebra_basis().remove(0);
        assert!(max_abs_diff(&g.adjoint(&g.identity(), &x).0, &x.0) < 1e-15);
        assert!(max_abs_diff(&g.adjoint(&a, &x).0, &x.0) < 1e-12);

        let so3 = LieGroup::single(Factor::Special(3));
        let rx = so3.exp_curve(&AlgebraElement(so3_generator(0)), FRAC_PI_2).unwrap();
        let ad = so3.adjoint(&rx, &AlgebraElement(so3_generator(2)));
        // R_x(π/2) maps the z axis to −y.
        assert!(max_abs_diff(&ad.0, &(-so3_generator(1))) < 1e-10);
    }

    #[test]
    fn samplers_respect_membership() {
        let mut rng = seeded(11);
        let o2 = LieGroup::single(Factor::Orthogonal(2));
        let a = o2.random_element(&mut rng).unwrap();
        assert!(max_abs_diff(&(a.0.transpose() * &a.0), &Mat::identity(2, 2)) < 1e-12);
        let gl2 = LieGroup::single(Factor::General(2));
        assert!(gl2.random_element(&mut rng).unwrap().0.determinant().abs() > 0.1);
        let prod = LieGroup::new(vec![Factor::Orthogonal(2), Factor::General(1)]);
        let p = prod.random_element(&mut rng).unwrap();
        assert!(prod.contains(&p, 1e-10));
        assert!(o2.contains(&GroupElement(prod.block(&p, 0)), 1e-10));
        assert!(prod.block(&p, 1)[(0, 0)].abs() > 0.1);
    }

    #[test]
    fn block_group_shapes() {
        let g = block_group(1, 2, 2).unwrap();
        assert_eq!(g.dim(), 0);
        assert_eq!(g.factors(), &[Factor::Orthogonal(1), Factor::Orthogonal(1)]);
        let g = block_group(0, 0, 2).unwrap();
        assert_eq!(g.dim(), 4);
        assert_eq!(g.factors(), &[Factor::General(2)]);
        assert_eq!(block_group(2, 1, 2).unwrap_err(), Error::BadSignature { s: 2, r: 1, n: 2 });
    }

    #[test]
    fn lower_block_is_closed() {
        let g = LieGroup::single(Factor::LowerBlock { n: 3, k: 1 });
        assert_eq!(g.dim(), 7);
        let mut rng = seeded(5);
        let a = g.random_element(&mut rng).unwrap();
        let b = g.random_element(&mut rng).unwrap();
        assert!(g.contains(&g.mul(&a, &b), 1e-10));
        assert!(g.contains(&g.inv(&a), 1e-10));
        for x in g.algebra_basis() {
            assert!(g.exp_curve(&x, 0.7).is_ok());
        }
    }

    fn groups() -> Vec<LieGroup> {
        vec![
            LieGroup::single(Factor::General(3)),
            LieGroup::single(Factor::Special(3)),
            LieGroup::new(vec![Factor::Orthogonal(2), Factor::Orthogonal(1), Factor::Special(2)]),
            LieGroup::single(Factor::LowerBlock { n: 2, k: 1 }),
        ]
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(seed in any::<u64>(), which in 0usize..4) {
            let g = &groups()[which];
            let mut rng = seeded(seed);
            let a = g.random_element(&mut rng).unwrap();
            let b = g.random_element(&mut rng).unwrap();
            let c = g.random_element(&mut rng).unwrap();
            let lhs = g.mul(&g.mul(&a, &b), &c);
            let rhs = g.mul(&a, &g.mul(&b, &c));
            let scale = lhs.0.amax().max(1.0);
            prop_assert!(max_abs_diff(&lhs.0, &rhs.0) < 1e-12 * scale);
        }

        #[test]
        fn inverse_law(seed in any::<u64>(), which in 0usize..4) {
            let g = &groups()[which];
            let a = g.random_element(&mut seeded(seed)).unwrap();
            prop_assert!(max_abs_diff(&g.mul(&a, &g.inv(&a)).0, &g.identity().0) < 1e-9);
        }

        #[test]
        fn one_parameter_subgroup(seed in any::<u64>(), t in -1.0..1.0f64, s in -1.0..1.0f64, which in 0usize..4) {
            let g = &groups()[which];
            let mut rng = seeded(seed);
            let basis = g.algebra_basis();
            let coeffs = crate::rng::normal_vector(&mut rng, basis.len());
            let x = AlgebraElement(basis.iter().zip(coeffs.iter()).fold(Mat::zeros(g.size(), g.size()), |acc, (b, c)| acc + &b.0 * (*c * 0.5)));
            let lhs = g.exp_curve(&x, t + s).unwrap();
            let rhs = g.mul(&g.exp_curve(&x, t).unwrap(), &g.exp_curve(&x, s).unwrap());
            prop_assert!(max_abs_diff(&lhs.0, &rhs.0) < 1e-10);
        }

        #[test]
        fn block_group_preserves_signature(seed in any::<u64>(), n in 1usize..5, r_frac in 0.0..1.0f64, s_frac in 0.0..1.0f64) {
            let r = ((n as f64) * r_frac).round() as usize;
            let s = ((r as f64) * s_frac).round() as usize;
            let g = block_group(s, r, n).unwrap();
            let d = g.random_element(&mut seeded(seed)).unwrap();
            let i_sr = signature_matrix(s, r, n);
            prop_assert!(max_abs_diff(&(d.0.transpose() * &i_sr * &d.0), &i_sr) < 1e-10);
        }
    }
}
