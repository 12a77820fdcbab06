//! Dense linear algebra and finite-difference kernel.
//!
//! Everything here works on small dynamically sized `nalgebra` matrices; the
//! largest systems in the catalog are around 30 columns wide.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Step sizes and thresholds shared by the differentiation and rank routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffConfig {
    /// Central-difference step, scaled by `max(1, |x|)` at the evaluation point.
    pub step: f64,
    /// Singular values below `svd_threshold * sigma_max` count as zero.
    pub svd_threshold: f64,
    /// Default residual tolerance for checks built on this config.
    pub tol: f64,
}

impl Default for DiffConfig {
    fn default() -> Self {
        Self {
            step: 6e-6,
            svd_threshold: 1e-8,
            tol: 1e-7,
        }
    }
}

impl DiffConfig {
    pub fn new(step: f64, svd_threshold: f64, tol: f64) -> Result<Self> {
        let cfg = Self {
            step,
            svd_threshold,
            tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step < 1e-2) {
            return Err(Error::InvalidConfig(format!(
                "step must lie in (0, 1e-2), got {}",
                self.step
            )));
        }
        if self.svd_threshold.is_nan() || self.svd_threshold <= 0.0 {
            return Err(Error::InvalidConfig(
                "svd_threshold must be positive".into(),
            ));
        }
        if self.tol.is_nan() || self.tol < 100.0 * f64::EPSILON {
            return Err(Error::InvalidConfig(format!(
                "tol must be at least 100 * machine epsilon, got {}",
                self.tol
            )));
        }
        Ok(())
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn scaled_step(&self, x: &Vector) -> f64 {
        self.step * x.norm().max(1.0)
    }
}

pub fn ensure_finite(m: &Mat) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn ensure_finite_vec(v: &Vector) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Solution of a least-squares system together with its Frobenius residual.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub solution: Mat,
    pub residual: f64,
}

/// Thin singular value decomposition `A = U diag(s) Vᵀ`, singular values descending.
struct Svd {
    u: Option<Mat>,
    singular_values: Vector,
    v_t: Option<Mat>,
}

/// One-sided Jacobi SVD. nalgebra's bidiagonal SVD leaves reconstruction errors
/// near 1e-8 on well-conditioned 4×4 inputs with clustered singular values;
/// Jacobi rotations stay at rounding level.
fn svd(a: Mat) -> Svd {
    if a.nrows() < a.ncols() {
        let t = jacobi_tall(a.transpose());
        return Svd {
            u: Some(t.2),
            singular_values: t.1,
            v_t: Some(t.0.transpose()),
        };
    }
    let (u, s, v) = jacobi_tall(a);
    Svd {
        u: Some(u),
        singular_values: s,
        v_t: Some(v.transpose()),
    }
}

/// `(U, s, V)` for `m ≥ n`, with `U` of size `m × n`.
fn jacobi_tall(mut w: Mat) -> (Mat, Vector, Mat) {
    let n = w.ncols();
    let mut v = Mat::identity(n, n);
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha = w.column(i).norm_squared();
                let beta = w.column(j).norm_squared();
                let gamma = w.column(i).dot(&w.column(j));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = c * t;
                for m in [&mut w, &mut v] {
                    for r in 0..m.nrows() {
                        let (x, y) = (m[(r, i)], m[(r, j)]);
                        m[(r, i)] = c * x - sn * y;
                        m[(r, j)] = sn * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..n).map(|k| w.column(k).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let mut u = Mat::zeros(w.nrows(), n);
    let mut vs = Mat::zeros(n, n);
    let mut s = Vector::zeros(n);
    for (k, &i) in order.iter().enumerate() {
        s[k] = norms[i];
        if norms[i] > 0.0 {
            u.set_column(k, &(w.column(i) / norms[i]));
        }
        vs.set_column(k, &v.column(i));
    }
    (u, s, vs)
}

/// Minimises `|A X - B|_F`, rejecting rank-deficient `A`.
pub fn solve_least_squares(a: &Mat, b: &Mat, cfg: &DiffConfig) -> Result<LeastSquares> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: b.nrows(),
        });
    }
    ensure_finite(a)?;
    ensure_finite(b)?;
    let cols = a.ncols();
    if cols == 0 {
        return Ok(LeastSquares {
            solution: Mat::zeros(0, b.ncols()),
            residual: b.norm(),
        });
    }
    let svd = svd(a.clone());
    let sigma_max = svd.singular_values.max();
    let cutoff = cfg.svd_threshold * sigma_max;
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| sigma_max > 0.0 && s >= cutoff)
        .count();
    if rank < cols {
        return Err(Error::RankDeficient {
            rank,
            expected: cols,
        });
    }
    let u = svd.u.as_ref().expect("svd computed with u");
    let v_t = svd.v_t.as_ref().expect("svd computed with v_t");
    let mut ut_b = u.transpose() * b;
    for (i, s) in svd.singular_values.iter().enumerate() {
        ut_b.row_mut(i).scale_mut(1.0 / s);
    }
    let solution = v_t.transpose() * ut_b;
    let residual = (a * &solution - b).norm();
    Ok(LeastSquares { solution, residual })
}

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn matrix_exp(x: &Mat) -> Mat {
    assert!(x.is_square(), "matrix_exp needs a square matrix");
    let n = x.nrows();
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    let norm1 = (0..n)
        .map(|j| x.column(j).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    if norm1 > 0.5 {
        squarings = (norm1 / 0.5).log2().ceil() as u32;
    }
    let scaled = x / 2f64.powi(squarings as i32);
    let mut sum = Mat::identity(n, n);
    let mut term = Mat::identity(n, n);
    for k in 1..=30 {
        term = &term * &scaled / k as f64;
        sum += &term;
        if term.amax() <= 1e-18 * sum.amax() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn probe<F>(map: &F, x: &Vector) -> Result<Vector>
where
    F: Fn(&Vector) -> Result<Vector> + ?Sized,
{
    let y = map(x)?;
    ensure_finite_vec(&y)?;
    Ok(y)
}

/// Central-difference quotient along `dir`, retrying once with half the step.
fn central_quotient<F>(map: &F, x: &Vector, dir: &Vector, h: f64) -> Result<Vector>
where
    F: Fn(&Vector) -> Result<Vector> + ?Sized,
{
    let attempt = |h: f64| -> Result<Vector> {
        let plus = probe(map, &(x + dir * h))?;
        let minus = probe(map, &(x - dir * h))?;
        Ok((plus - minus) / (2.0 * h))
    };
    attempt(h).or_else(|_| attempt(0.5 * h))
}

/// Ambient Jacobian of `map` at `x` by central differences.
pub fn differential<F>(map: &F, x: &Vector, cfg: &DiffConfig) -> Result<Mat>
where
    F: Fn(&Vector) -> Result<Vector> + ?Sized,
{
    let y0 = probe(map, x)?;
    let h = cfg.scaled_step(x);
    let mut jac = Mat::zeros(y0.len(), x.len());
    for j in 0..x.len() {
        let mut dir = Vector::zeros(x.len());
        dir[j] = 1.0;
        let col = central_quotient(map, x, &dir, h)?;
        if col.len() != y0.len() {
            return Err(Error::DimensionMismatch {
                expected: y0.len(),
                actual: col.len(),
            });
        }
        jac.set_column(j, &col);
    }
    Ok(jac)
}

/// Directional derivative `D map(x) . v`; the probe displacement has the same
/// length as for [`differential`] regardless of `|v|`.
pub fn directional_derivative<F>(map: &F, x: &Vector, v: &Vector, cfg: &DiffConfig) -> Result<Vector>
where
    F: Fn(&Vector) -> Result<Vector> + ?Sized,
{
    let vn = v.norm();
    if vn == 0.0 {
        return Ok(Vector::zeros(probe(map, x)?.len()));
    }
    let unit = v / vn;
    let d = central_quotient(map, x, &unit, cfg.scaled_step(x))?;
    Ok(d * vn)
}

/// Velocity at `t = 0` of a curve given as a function of its parameter.
pub fn curve_velocity<F>(curve: &F, cfg: &DiffConfig) -> Result<Vector>
where
    F: Fn(f64) -> Result<Vector> + ?Sized,
{
    let attempt = |h: f64| -> Result<Vector> {
        let plus = curve(h)?;
        let minus = curve(-h)?;
        ensure_finite_vec(&plus)?;
        ensure_finite_vec(&minus)?;
        Ok((plus - minus) / (2.0 * h))
    };
    attempt(cfg.step).or_else(|_| attempt(0.5 * cfg.step))
}

fn sorted_singular_values(a: &Mat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = svd(a.clone()).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Number of singular values at or above `svd_threshold * sigma_max`.
pub fn numerical_rank(a: &Mat, cfg: &DiffConfig) -> usize {
    let s = sorted_singular_values(a);
    match s.first() {
        Some(&max) if max > 0.0 => s.iter().filter(|&&v| v >= cfg.svd_threshold * max).count(),
        _ => 0,
    }
}

/// Full right-singular basis of `a`, columns ordered by decreasing singular value
/// (missing singular values count as zero).
fn right_singular_basis(a: &Mat) -> (Vec<f64>, Mat) {
    let n = a.ncols();
    let padded = if a.nrows() < n {
        let mut p = Mat::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = svd(padded);
    let v_t = svd.v_t.expect("svd computed with v_t");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut v = Mat::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &i) in order.iter().enumerate() {
        v.set_column(k, &v_t.row(i).transpose());
        s.push(svd.singular_values[i]);
    }
    (s, v)
}

/// Orthonormal basis (as columns) of the numerical kernel of `a`.
pub fn null_space(a: &Mat, cfg: &DiffConfig) -> Mat {
    let n = a.ncols();
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    let (s, v) = right_singular_basis(a);
    let max = s.first().copied().unwrap_or(0.0);
    let rank = if max > 0.0 {
        s.iter().filter(|&&x| x >= cfg.svd_threshold * max).count()
    } else {
        0
    };
    v.columns(rank, n - rank).into_owned()
}

/// The `count` right-singular vectors belonging to the smallest singular values.
pub fn smallest_right_singular(a: &Mat, count: usize) -> Mat {
    let n = a.ncols();
    let (_, v) = right_singular_basis(a);
    v.columns(n - count, count).into_owned()
}

/// Orthonormal basis of the column space of `a`.
pub fn range_basis(a: &Mat, cfg: &DiffConfig) -> Mat {
    if a.ncols() == 0 || a.nrows() == 0 {
        return Mat::zeros(a.nrows(), 0);
    }
    let svd = svd(a.clone());
    let u = svd.u.expect("svd computed with u");
    let max = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| max > 0.0 && svd.singular_values[i] >= cfg.svd_threshold * max)
        .collect();
    let mut out = Mat::zeros(a.nrows(), keep.len());
    for (k, &i) in keep.iter().enumerate() {
        out.set_column(k, &u.column(i));
    }
    out
}

/// Eigenvalues and eigenvectors of a symmetric matrix, eigenvalues ascending.
pub fn symmetric_eigen(a: &Mat) -> (Vec<f64>, Mat) {
    let sym = (a + a.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut vecs = Mat::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
        vals.push(eig.eigenvalues[i]);
    }
    (vals, vecs)
}

/// Invert a square matrix, reporting numerically singular input.
pub fn invert(a: &Mat, cfg: &DiffConfig) -> Result<Mat> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: a.ncols(),
        });
    }
    match solve_least_squares(a, &Mat::identity(a.nrows(), a.nrows()), cfg) {
        Ok(ls) => Ok(ls.solution),
        Err(Error::RankDeficient { .. }) => Err(Error::Singular),
        Err(e) => Err(e),
    }
}

/// Block-diagonal matrix assembled from square blocks.
pub fn block_diagonal(blocks: &[Mat]) -> Mat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let m: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(n, m);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    (a - b).amax()
}

/// Column-major flattening of a matrix into a vector.
pub fn flatten(m: &Mat) -> Vector {
    Vector::from_column_slice(m.as_slice())
}

/// Inverse of [`flatten`].
pub fn unflatten(v: &[f64], rows: usize, cols: usize) -> Mat {
    Mat::from_column_slice(rows, cols, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{E, FRAC_PI_2};

    fn cfg() -> DiffConfig {
        DiffConfig::default()
    }

    /// Plain power series without scaling, used only as an oracle.
    fn exp_series(x: &Mat) -> Mat {
        let n = x.nrows();
        let mut sum = Mat::identity(n, n);
        let mut term = Mat::identity(n, n);
        for k in 1..80 {
            term = &term * x / k as f64;
            sum += &term;
        }
        sum
    }

    #[test]
    fn least_squares_identity_system() {
        let b = Mat::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 4.0]);
        let ls = solve_least_squares(&Mat::identity(2, 2), &b, &cfg()).unwrap();
        assert!(max_abs_diff(&ls.solution, &b) < 1e-14);
        assert!(ls.residual < 1e-14);
    }

    #[test]
    fn least_squares_diagonal_inverse() {
        let a = Mat::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let ls = solve_least_squares(&a, &Mat::identity(2, 2), &cfg()).unwrap();
        let expected = Mat::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 1.0]);
        assert!(max_abs_diff(&ls.solution, &expected) < 1e-14);
    }

    #[test]
    fn least_squares_rank_one_is_rejected() {
        let a = Mat::from_row_slice(3, 2, &[1.0, 2.0, 2.0, 4.0, 3.0, 6.0]);
        let err = solve_least_squares(&a, &Mat::identity(3, 3), &cfg()).unwrap_err();
        assert_eq!(err, Error::RankDeficient { rank: 1, expected: 2 });
    }

    #[test]
    fn exp_of_zero_is_identity() {
        assert!(max_abs_diff(&matrix_exp(&Mat::zeros(2, 2)), &Mat::identity(2, 2)) < 1e-15);
    }

    #[test]
    fn exp_of_rotation_generator() {
        let t = FRAC_PI_2;
        let x = Mat::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let expected = Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(max_abs_diff(&matrix_exp(&x), &expected) < 1e-14);
    }

    #[test]
    fn exp_of_diagonal() {
        let x = Mat::from_diagonal(&Vector::from_vec(vec![1.0, 2.0]));
        let expected = Mat::from_diagonal(&Vector::from_vec(vec![E, E * E]));
        assert!(max_abs_diff(&matrix_exp(&x), &expected) < 1e-13);
    }

    #[test]
    fn differential_of_linear_map_is_exact() {
        let a = Mat::from_row_slice(2, 3, &[1.0, -2.0, 0.5, 3.0, 0.0, 4.0]);
        let map = |x: &Vector| -> Result<Vector> { Ok(&a * x) };
        let x = Vector::from_vec(vec![0.3, -1.2, 2.0]);
        let jac = differential(&map, &x, &cfg()).unwrap();
        assert!(max_abs_diff(&jac, &a) < 1e-10);
    }

    #[test]
    fn differential_of_square_map() {
        let map = |x: &Vector| -> Result<Vector> { Ok(Vector::from_vec(vec![x[0] * x[0], x[1]])) };
        let jac = differential(&map, &Vector::from_vec(vec![3.0, 5.0]), &cfg()).unwrap();
        let expected = Mat::from_row_slice(2, 2, &[6.0, 0.0, 0.0, 1.0]);
        assert!(max_abs_diff(&jac, &expected) < 1e-8);
    }

    #[test]
    fn differential_reports_undefined_probe() {
        let map = |x: &Vector| -> Result<Vector> {
            if x[0] > 1.0 {
                Err(Error::EvaluationFailure("outside domain".into()))
            } else {
                Ok(x.clone())
            }
        };
        let err = differential(&map, &Vector::from_vec(vec![1.0, 0.0]), &cfg()).unwrap_err();
        assert!(matches!(err, Error::EvaluationFailure(_)));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(&Mat::identity(3, 3), &cfg()), 3);
        let u = Vector::from_vec(vec![1.0, 2.0, -1.0]);
        let v = Vector::from_vec(vec![0.5, 3.0]);
        assert_eq!(numerical_rank(&(&u * v.transpose()), &cfg()), 1);
        assert_eq!(numerical_rank(&Mat::zeros(3, 2), &cfg()), 0);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = Mat::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        let k = null_space(&a, &cfg());
        assert_eq!(k.ncols(), 2);
        assert!((&a * &k).amax() < 1e-14);
        assert!(max_abs_diff(&(k.transpose() * &k), &Mat::identity(2, 2)) < 1e-14);
    }

    #[test]
    fn config_validation() {
        assert!(DiffConfig::new(1e-1, 1e-8, 1e-7).is_err());
        assert!(DiffConfig::new(1e-6, 1e-8, 1e-20).is_err());
        assert!(DiffConfig::new(1e-6, 0.0, 1e-7).is_err());
        assert!(DiffConfig::new(1e-6, 1e-8, 1e-7).is_ok());
    }

    fn mat_strategy(n: usize, bound: f64) -> impl Strategy<Value = Mat> {
        proptest::collection::vec(-bound..bound, n * n).prop_map(move |v| Mat::from_vec(n, n, v))
    }

    fn random_orthogonal(seed: &[f64], n: usize) -> Mat {
        let m = Mat::from_vec(n, n, seed.to_vec()) + Mat::identity(n, n) * 0.1;
        m.qr().q()
    }

    proptest! {
        #[test]
        fn exp_matches_series_on_unit_ball(x in mat_strategy(3, 1.0)) {
            let x = if x.norm() > 1.0 { &x / x.norm() } else { x };
            let oracle = exp_series(&x);
            let rel = (matrix_exp(&x) - &oracle).norm() / oracle.norm();
            prop_assert!(rel <= 1e-12, "relative error {rel}");
        }

        #[test]
        fn exp_inverse_law(x in mat_strategy(3, 1.0)) {
            let x = if x.norm() > 2.0 { &x * (2.0 / x.norm()) } else { x };
            let prod = matrix_exp(&x) * matrix_exp(&-&x);
            prop_assert!(max_abs_diff(&prod, &Mat::identity(3, 3)) < 1e-10);
        }

        #[test]
        fn least_squares_recovers_solution(
            q1 in proptest::collection::vec(-1.0..1.0f64, 16),
            q2 in proptest::collection::vec(-1.0..1.0f64, 16),
            sv in proptest::collection::vec(1.0..30.0f64, 4),
            x0 in mat_strategy(4, 3.0),
        ) {
            // condition number < 30 by construction
            let a = random_orthogonal(&q1, 4)
                * Mat::from_diagonal(&Vector::from_vec(sv))
                * random_orthogonal(&q2, 4);
            let b = &a * &x0;
            let ls = solve_least_squares(&a, &b, &cfg()).unwrap();
            prop_assert!(max_abs_diff(&ls.solution, &x0) < 1e-9);
        }

        #[test]
        fn chain_rule_holds(
            c in proptest::collection::vec(-1.0..1.0f64, 4),
            x in proptest::collection::vec(-1.0..1.0f64, 2),
        ) {
            let c3 = c[3];
            let inner = move |x: &Vector| -> Result<Vector> {
                Ok(Vector::from_vec(vec![(c[0] * x[0]).sin() + x[1] * x[1], c[1] * x[0] * x[1], (c[2] * x[1]).exp()]))
            };
            let outer = move |y: &Vector| -> Result<Vector> {
                Ok(Vector::from_vec(vec![y[0] * y[1] + c3 * y[2], (y[0] - y[2]).cos()]))
            };
            let composed = |x: &Vector| -> Result<Vector> { outer(&inner(x)?) };
            let x = Vector::from_vec(x);
            let lhs = differential(&composed, &x, &cfg()).unwrap();
            let rhs = differential(&outer, &inner(&x).unwrap(), &cfg()).unwrap()
                * differential(&inner, &x, &cfg()).unwrap();
            prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-5);
        }

        #[test]
        fn rank_invariant_under_orthogonal_factors(
            q1 in proptest::collection::vec(-1.0..1.0f64, 16),
            q2 in proptest::collection::vec(-1.0..1.0f64, 16),
            r in 0usize..=4,
        ) {
            let diag: Vec<f64> = (0..4).map(|i| if i < r { 1.0 + i as f64 } else { 0.0 }).collect();
            let a = Mat::from_diagonal(&Vector::from_vec(diag));
            let rotated = random_orthogonal(&q1, 4) * &a * random_orthogonal(&q2, 4);
            prop_assert_eq!(numerical_rank(&rotated, &cfg()), numerical_rank(&a, &cfg()));
        }
    }
}
