//! Embedded manifolds, smooth maps between them, and (0,2) tensor fields.
//!
//! Every manifold lives in some ambient ℝ^m. Tangent spaces are handed out as
//! orthonormal ambient bases so that tangent vectors are plain ambient vectors.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::LieGroup;
use crate::numerics::{
    differential, directional_derivative, flatten, numerical_rank, solve_least_squares, unflatten,
    DiffConfig, Mat, Vector,
};
use crate::report::{CheckReport, MaxTracker};
use crate::rng::{normal, normal_vector, Rng};

pub trait Manifold: Send + Sync {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn ambient_dim(&self) -> usize;
    fn contains(&self, x: &Vector, tol: f64) -> bool;
    /// Orthonormal ambient basis of the tangent space at `x` (ambient × dim).
    fn tangent_basis(&self, x: &Vector) -> Mat;
    fn sample(&self, rng: &mut Rng) -> Vector;

    fn project_tangent(&self, x: &Vector, v: &Vector) -> Vector {
        let b = self.tangent_basis(x);
        &b * (b.transpose() * v)
    }
}

pub type ManifoldRef = Arc<dyn Manifold>;

impl fmt::Debug for dyn Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Orthonormal basis of the span of the columns, assuming full column rank.
pub fn orthonormalize(a: &Mat) -> Mat {
    if a.ncols() == 0 {
        return a.clone();
    }
    a.clone().qr().q()
}

/// A random tangent vector with standard Gaussian coefficients.
pub fn random_tangent(m: &dyn Manifold, x: &Vector, rng: &mut Rng) -> Vector {
    let b = m.tangent_basis(x);
    let c = normal_vector(rng, b.ncols());
    b * c
}

#[derive(Debug, Clone, Copy)]
pub struct Euclidean {
    pub n: usize,
}

impl Manifold for Euclidean {
    fn name(&self) -> String {
        format!("R^{}", self.n)
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn ambient_dim(&self) -> usize {
        self.n
    }
    fn contains(&self, x: &Vector, _tol: f64) -> bool {
        x.len() == self.n && x.iter().all(|v| v.is_finite())
    }
    fn tangent_basis(&self, _x: &Vector) -> Mat {
        Mat::identity(self.n, self.n)
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        normal_vector(rng, self.n)
    }
    fn project_tangent(&self, _x: &Vector, v: &Vector) -> Vector {
        v.clone()
    }
}

/// ℝⁿ with the origin removed.
#[derive(Debug, Clone, Copy)]
pub struct Punctured {
    pub n: usize,
}

impl Manifold for Punctured {
    fn name(&self) -> String {
        format!("R^{}-0", self.n)
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn ambient_dim(&self) -> usize {
        self.n
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.len() == self.n && x.iter().all(|v| v.is_finite()) && x.norm() > tol
    }
    fn tangent_basis(&self, _x: &Vector) -> Mat {
        Mat::identity(self.n, self.n)
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        loop {
            let v = normal_vector(rng, self.n);
            if v.norm() > 1e-3 {
                return v;
            }
        }
    }
    fn project_tangent(&self, _x: &Vector, v: &Vector) -> Vector {
        v.clone()
    }
}

/// Unit sphere Sⁿ ⊂ ℝⁿ⁺¹.
#[derive(Debug, Clone, Copy)]
pub struct Sphere {
    pub n: usize,
}

/// Orthonormal basis of the orthogonal complement of a unit vector.
pub fn complement_basis(p: &Vector) -> Mat {
    let m = p.len();
    let mut cols = Vec::with_capacity(m);
    cols.push(p.clone());
    for i in 0..m {
        let mut e = Vector::zeros(m);
        e[i] = 1.0;
        cols.push(e);
    }
    // Gram-Schmidt starting from p, keeping the m−1 best-conditioned directions.
    let mut basis: Vec<Vector> = vec![p.normalize()];
    for c in cols.into_iter().skip(1) {
        let mut v = c;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 0.3 {
            basis.push(v.normalize());
        }
        if basis.len() == m {
            break;
        }
    }
    Mat::from_columns(&basis[1..])
}

impl Manifold for Sphere {
    fn name(&self) -> String {
        format!("S^{}", self.n)
    }
    fn dim(&self) -> usize {
        self.n
    }
    fn ambient_dim(&self) -> usize {
        self.n + 1
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.len() == self.n + 1 && (x.norm() - 1.0).abs() < tol
    }
    fn tangent_basis(&self, x: &Vector) -> Mat {
        complement_basis(x)
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        loop {
            let v = normal_vector(rng, self.n + 1);
            if v.norm() > 1e-3 {
                return v.normalize();
            }
        }
    }
    fn project_tangent(&self, x: &Vector, v: &Vector) -> Vector {
        v - x * (x.dot(v) / x.norm_squared())
    }
}

/// A matrix group as a manifold; points are column-major flattenings.
#[derive(Debug, Clone)]
pub struct GroupManifold {
    pub group: LieGroup,
}

impl Manifold for GroupManifold {
    fn name(&self) -> String {
        self.group.name()
    }
    fn dim(&self) -> usize {
        self.group.dim()
    }
    fn ambient_dim(&self) -> usize {
        self.group.size().pow(2)
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        let n = self.group.size();
        x.len() == n * n
            && self
                .group
                .contains(&crate::groups::GroupElement(unflatten(x.as_slice(), n, n)), tol)
    }
    fn tangent_basis(&self, x: &Vector) -> Mat {
        let n = self.group.size();
        let g = unflatten(x.as_slice(), n, n);
        let cols: Vec<Vector> = self
            .group
            .algebra_basis()
            .iter()
            .map(|xi| flatten(&(&g * &xi.0)))
            .collect();
        if cols.is_empty() {
            return Mat::zeros(n * n, 0);
        }
        orthonormalize(&Mat::from_columns(&cols))
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        let g = self
            .group
            .random_element(rng)
            .expect("group sampler exhausted");
        flatten(&g.0)
    }
}

/// Cartesian product with concatenated ambient coordinates.
#[derive(Clone)]
pub struct Product {
    pub factors: Vec<ManifoldRef>,
}

impl Product {
    pub fn new(factors: Vec<ManifoldRef>) -> Self {
        Self { factors }
    }

    /// Ambient coordinate range of factor `i`.
    pub fn range(&self, i: usize) -> Range<usize> {
        let start: usize = self.factors[..i].iter().map(|f| f.ambient_dim()).sum();
        start..start + self.factors[i].ambient_dim()
    }

    pub fn part(&self, x: &Vector, i: usize) -> Vector {
        let r = self.range(i);
        x.rows(r.start, r.len()).into_owned()
    }

    pub fn join(parts: &[Vector]) -> Vector {
        let data: Vec<f64> = parts.iter().flat_map(|p| p.iter().copied()).collect();
        Vector::from_vec(data)
    }
}

impl Manifold for Product {
    fn name(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.name())
            .collect::<Vec<_>>()
            .join("×")
    }
    fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).sum()
    }
    fn ambient_dim(&self) -> usize {
        self.factors.iter().map(|f| f.ambient_dim()).sum()
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.len() == self.ambient_dim()
            && (0..self.factors.len()).all(|i| self.factors[i].contains(&self.part(x, i), tol))
    }
    fn tangent_basis(&self, x: &Vector) -> Mat {
        let mut out = Mat::zeros(self.ambient_dim(), self.dim());
        let mut col = 0;
        for i in 0..self.factors.len() {
            let r = self.range(i);
            let b = self.factors[i].tangent_basis(&self.part(x, i));
            out.view_mut((r.start, col), (b.nrows(), b.ncols())).copy_from(&b);
            col += b.ncols();
        }
        out
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        let parts: Vec<Vector> = self.factors.iter().map(|f| f.sample(rng)).collect();
        Product::join(&parts)
    }
}

pub type PredicateFn = Arc<dyn Fn(&Vector, f64) -> bool + Send + Sync>;
pub type ChartFn = Arc<dyn Fn(&Vector, &Vector) -> Vector + Send + Sync>;
pub type SamplerFn = Arc<dyn Fn(&mut Rng) -> Vector + Send + Sync>;

/// Manifold described by a local parametrisation around each of its points.
///
/// `chart(x, c)` must be smooth in `c` with `chart(x, 0) = x`; the tangent
/// space at `x` is the column space of its Jacobian at `c = 0`.
#[derive(Clone)]
pub struct Embedded {
    pub name: String,
    pub dim: usize,
    pub ambient_dim: usize,
    pub contains: PredicateFn,
    pub chart: ChartFn,
    pub sampler: SamplerFn,
}

impl Manifold for Embedded {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        x.len() == self.ambient_dim && (self.contains)(x, tol)
    }
    fn tangent_basis(&self, x: &Vector) -> Mat {
        let chart = |c: &Vector| -> Result<Vector> { Ok((self.chart)(x, c)) };
        let jac = differential(&chart, &Vector::zeros(self.dim), &DiffConfig::default())
            .expect("chart evaluation is total");
        orthonormalize(&jac)
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        (self.sampler)(rng)
    }
}

fn tangent_frame_at(p: &Vector) -> Mat {
    complement_basis(p)
}

/// TS² = {(p, w) : |p| = 1, p·w = 0} ⊂ ℝ⁶.
#[derive(Debug, Clone, Copy)]
pub struct TangentSphere;

impl Manifold for TangentSphere {
    fn name(&self) -> String {
        "TS^2".into()
    }
    fn dim(&self) -> usize {
        4
    }
    fn ambient_dim(&self) -> usize {
        6
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        if x.len() != 6 {
            return false;
        }
        let p = x.rows(0, 3);
        let w = x.rows(3, 3);
        (p.norm() - 1.0).abs() < tol && p.dot(&w).abs() < tol * w.norm().max(1.0)
    }
    fn tangent_basis(&self, x: &Vector) -> Mat {
        let p: Vector = x.rows(0, 3).into_owned();
        let w: Vector = x.rows(3, 3).into_owned();
        let t = tangent_frame_at(&p);
        let mut b = Mat::zeros(6, 4);
        for k in 0..2 {
            let tk = t.column(k).into_owned();
            b.view_mut((0, k), (3, 1)).copy_from(&tk);
            b.view_mut((3, k), (3, 1)).copy_from(&(-(&p * tk.dot(&w))));
            b.view_mut((3, 2 + k), (3, 1)).copy_from(&tk);
        }
        orthonormalize(&b)
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        let p = Sphere { n: 2 }.sample(rng);
        let t = tangent_frame_at(&p);
        let w = t * normal_vector(rng, 2);
        Product::join(&[p, w])
    }
}

/// T₁S² = {(p, w) : |p| = |w| = 1, p·w = 0} ⊂ ℝ⁶.
#[derive(Debug, Clone, Copy)]
pub struct UnitTangentSphere;

impl Manifold for UnitTangentSphere {
    fn name(&self) -> String {
        "T1S^2".into()
    }
    fn dim(&self) -> usize {
        3
    }
    fn ambient_dim(&self) -> usize {
        6
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        if x.len() != 6 {
            return false;
        }
        let p = x.rows(0, 3);
        let w = x.rows(3, 3);
        (p.norm() - 1.0).abs() < tol && (w.norm() - 1.0).abs() < tol && p.dot(&w).abs() < tol
    }
    fn tangent_basis(&self, x: &Vector) -> Mat {
        let p: Vector = x.rows(0, 3).into_owned();
        let w: Vector = x.rows(3, 3).into_owned();
        let c = p.cross(&w);
        let mut b = Mat::zeros(6, 3);
        b.view_mut((0, 0), (3, 1)).copy_from(&w);
        b.view_mut((3, 0), (3, 1)).copy_from(&(-&p));
        b.view_mut((0, 1), (3, 1)).copy_from(&c);
        b.view_mut((3, 2), (3, 1)).copy_from(&c);
        orthonormalize(&b)
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        let p = Sphere { n: 2 }.sample(rng);
        let t = tangent_frame_at(&p);
        let theta = normal(rng) * 3.0;
        let w = t.column(0) * theta.cos() + t.column(1) * theta.sin();
        Product::join(&[p, w])
    }
}

/// Linear frame bundle `LM` over a flat or spherical base; points are
/// `(p, vec(E))` with `E` the ambient frame matrix stored column-major.
#[derive(Debug, Clone, Copy)]
pub struct FrameBundle {
    n: usize,
    spherical: bool,
}

impl FrameBundle {
    pub fn flat(n: usize) -> Self {
        Self { n, spherical: false }
    }

    pub fn sphere(n: usize) -> Self {
        Self { n, spherical: true }
    }

    pub fn base(&self) -> ManifoldRef {
        if self.spherical {
            Arc::new(Sphere { n: self.n })
        } else {
            Arc::new(Euclidean { n: self.n })
        }
    }

    fn m(&self) -> usize {
        self.n + usize::from(self.spherical)
    }

    pub fn split(&self, x: &Vector) -> (Vector, Mat) {
        let m = self.m();
        (x.rows(0, m).into_owned(), unflatten(&x.as_slice()[m..], m, self.n))
    }

    pub fn join(p: &Vector, e: &Mat) -> Vector {
        Product::join(&[p.clone(), flatten(e)])
    }
}

impl Manifold for FrameBundle {
    fn name(&self) -> String {
        format!("L({})", self.base().name())
    }
    fn dim(&self) -> usize {
        self.n + self.n * self.n
    }
    fn ambient_dim(&self) -> usize {
        self.m() + self.m() * self.n
    }
    fn contains(&self, x: &Vector, tol: f64) -> bool {
        if x.len() != self.ambient_dim() {
            return false;
        }
        let (p, e) = self.split(x);
        let base = self.base();
        if !base.contains(&p, tol) {
            return false;
        }
        let b = base.tangent_basis(&p);
        let tangent = (&e - &b * (b.transpose() * &e)).amax() < tol;
        let gram = e.transpose() * &e;
        tangent && gram.determinant().abs() > tol
    }
    fn tangent_basis(&self, x: &Vector) -> Mat {
        let (p, e) = self.split(x);
        let m = self.m();
        let b = self.base().tangent_basis(&p);
        let mut cols = Vec::with_capacity(self.dim());
        for k in 0..self.n {
            let t = b.column(k).into_owned();
            let mut de = Mat::zeros(m, self.n);
            if self.spherical {
                for i in 0..self.n {
                    de.set_column(i, &(&p * -e.column(i).dot(&t)));
                }
            }
            cols.push(Self::join(&t, &de));
        }
        for j in 0..self.n {
            for l in 0..self.n {
                let mut de = Mat::zeros(m, self.n);
                de.set_column(j, &b.column(l));
                cols.push(Self::join(&Vector::zeros(m), &de));
            }
        }
        orthonormalize(&Mat::from_columns(&cols))
    }
    fn sample(&self, rng: &mut Rng) -> Vector {
        let base = self.base();
        let p = base.sample(rng);
        let a = LieGroup::single(crate::groups::Factor::General(self.n))
            .random_element(rng)
            .expect("group sampler exhausted");
        Self::join(&p, &(base.tangent_basis(&p) * a.0))
    }
}

/// A tangent vector together with its base point.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub base: Vector,
    pub vec: Vector,
}

pub type MapFn = Arc<dyn Fn(&Vector) -> Result<Vector> + Send + Sync>;

/// Smooth map between embedded manifolds, evaluated on ambient coordinates.
#[derive(Clone)]
pub struct SmoothMap {
    pub source: ManifoldRef,
    pub target: ManifoldRef,
    pub f: MapFn,
}

impl SmoothMap {
    pub fn new(source: ManifoldRef, target: ManifoldRef, f: MapFn) -> Self {
        Self { source, target, f }
    }

    pub fn identity(m: ManifoldRef) -> Self {
        Self::new(m.clone(), m, Arc::new(|x: &Vector| Ok(x.clone())))
    }

    pub fn eval(&self, x: &Vector) -> Result<Vector> {
        (self.f)(x)
    }

    /// Differential applied to `v`, re-projected onto the target tangent space.
    pub fn push(&self, x: &Vector, v: &Vector, cfg: &DiffConfig) -> Result<Vector> {
        let y = self.eval(x)?;
        let w = directional_derivative(&*self.f, x, v, cfg)?;
        let projected = self.target.project_tangent(&y, &w);
        let residual = (&w - &projected).norm();
        if residual > 100.0 * cfg.tol * w.norm().max(1.0) {
            return Err(Error::TangencyViolation { residual });
        }
        Ok(projected)
    }
}

/// `(F(v.base), dF·v)`.
pub fn pushforward(map: &SmoothMap, v: &Tangent, cfg: &DiffConfig) -> Result<Tangent> {
    Ok(Tangent {
        base: map.eval(&v.base)?,
        vec: map.push(&v.base, &v.vec, cfg)?,
    })
}

/// Coefficients `x` with `frame · x = v`.
pub fn frame_components(v: &Vector, frame: &Mat, cfg: &DiffConfig) -> Result<Vector> {
    let b = Mat::from_column_slice(v.len(), 1, v.as_slice());
    let ls = solve_least_squares(frame, &b, cfg)?;
    let tol = cfg.tol * v.norm().max(1.0) * 10.0;
    if ls.residual > tol {
        return Err(Error::ResidualTooLarge {
            residual: ls.residual,
            tol,
        });
    }
    Ok(ls.solution.column(0).into_owned())
}

pub type TensorFn = Arc<dyn Fn(&Vector, &Vector, &Vector) -> Result<f64> + Send + Sync>;

/// A (0,2) tensor field evaluated on ambient tangent vectors.
#[derive(Clone)]
pub struct Tensor02Field {
    pub name: String,
    pub manifold: ManifoldRef,
    f: TensorFn,
}

impl fmt::Debug for Tensor02Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor02Field({} on {})", self.name, self.manifold.name())
    }
}

impl Tensor02Field {
    pub fn new(name: impl Into<String>, manifold: ManifoldRef, f: TensorFn) -> Self {
        Self {
            name: name.into(),
            manifold,
            f,
        }
    }

    /// `T(p)(u, w) = uᵀ G(p) w` for an ambient matrix field `G`.
    pub fn from_ambient_matrix<G>(name: impl Into<String>, manifold: ManifoldRef, g: G) -> Self
    where
        G: Fn(&Vector) -> Mat + Send + Sync + 'static,
    {
        Self::new(
            name,
            manifold,
            Arc::new(move |p: &Vector, u: &Vector, w: &Vector| Ok(u.dot(&(g(p) * w)))),
        )
    }

    pub fn zero(manifold: ManifoldRef) -> Self {
        Self::new("zero", manifold, Arc::new(|_: &Vector, _: &Vector, _: &Vector| Ok(0.0)))
    }

    pub fn eval(&self, p: &Vector, u: &Vector, w: &Vector) -> Result<f64> {
        (self.f)(p, u, w)
    }

    /// Pointwise product with a scalar function.
    pub fn scaled<S>(&self, name: impl Into<String>, s: S) -> Self
    where
        S: Fn(&Vector) -> f64 + Send + Sync + 'static,
    {
        let inner = self.f.clone();
        Self::new(
            name,
            self.manifold.clone(),
            Arc::new(move |p: &Vector, u: &Vector, w: &Vector| Ok(s(p) * inner(p, u, w)?)),
        )
    }

    pub fn plus(&self, name: impl Into<String>, other: &Tensor02Field) -> Self {
        let a = self.f.clone();
        let b = other.f.clone();
        Self::new(
            name,
            self.manifold.clone(),
            Arc::new(move |p: &Vector, u: &Vector, w: &Vector| Ok(a(p, u, w)? + b(p, u, w)?)),
        )
    }

    /// Matrix `[T(p)(f_i, f_j)]` for the columns `f_i` of `frame`.
    pub fn gram(&self, p: &Vector, frame: &Mat) -> Result<Mat> {
        let n = frame.ncols();
        let cols: Vec<Vector> = (0..n).map(|j| frame.column(j).into_owned()).collect();
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self.eval(p, &cols[i], &cols[j])?;
            }
        }
        Ok(out)
    }
}

/// Maximum bilinearity defect in either slot over random points, vectors and scalars.
pub fn check_bilinearity(t: &Tensor02Field, samples: usize, rng: &mut Rng, tol: f64) -> CheckReport {
    let m = &t.manifold;
    let mut worst = MaxTracker::default();
    for _ in 0..samples {
        let p = m.sample(rng);
        let u = random_tangent(&**m, &p, rng);
        let v = random_tangent(&**m, &p, rng);
        let w = random_tangent(&**m, &p, rng);
        let (alpha, beta) = (normal(rng), normal(rng));
        let combo = &u * alpha + &v * beta;
        let dev = (|| -> Result<f64> {
            let first = t.eval(&p, &combo, &w)? - alpha * t.eval(&p, &u, &w)? - beta * t.eval(&p, &v, &w)?;
            let second = t.eval(&p, &w, &combo)? - alpha * t.eval(&p, &w, &u)? - beta * t.eval(&p, &w, &v)?;
            Ok(first.abs().max(second.abs()))
        })()
        .unwrap_or(f64::INFINITY);
        worst.push(dev);
    }
    worst.report(tol)
}

/// A symmetric positive-definite tensor field.
#[derive(Clone, Debug)]
pub struct RiemannianMetric(pub Tensor02Field);

impl RiemannianMetric {
    /// Samples symmetry and positivity of the Gram matrix in the tangent basis.
    /// The deviation reported is the symmetry defect; positivity failures force a fail.
    pub fn verify(&self, samples: usize, rng: &mut Rng, tol: f64) -> CheckReport {
        let m = &self.0.manifold;
        let mut worst = MaxTracker::default();
        let mut positive = true;
        for _ in 0..samples {
            let p = m.sample(rng);
            let b = m.tangent_basis(&p);
            match self.0.gram(&p, &b) {
                Ok(g) => {
                    worst.push((&g - g.transpose()).amax());
                    let sym = (&g + g.transpose()) * 0.5;
                    let min_eig = sym.symmetric_eigenvalues().min();
                    if min_eig.is_nan() || min_eig <= tol {
                        positive = false;
                    }
                }
                Err(_) => worst.push(f64::INFINITY),
            }
        }
        let mut r = worst.report(tol);
        r.pass &= positive;
        r
    }
}

/// Numerical rank of the differential of `map` restricted to the tangent space at `x`.
pub fn tangent_rank(map: &SmoothMap, x: &Vector, cfg: &DiffConfig) -> Result<usize> {
    let b = map.source.tangent_basis(x);
    let mut cols = Vec::with_capacity(b.ncols());
    for j in 0..b.ncols() {
        cols.push(directional_derivative(&*map.f, x, &b.column(j).into_owned(), cfg)?);
    }
    if cols.is_empty() {
        return Ok(0);
    }
    Ok(numerical_rank(&Mat::from_columns(&cols), cfg))
}
