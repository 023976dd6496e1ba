//! Dense linear algebra on `R^n`: vectors, orthonormalized subspaces,
//! functionals defined on a subspace, and hyperplanes through the origin.
//!
//! Subspaces always carry an orthonormal basis (modified Gram-Schmidt with a
//! second re-orthogonalization pass), so membership reduces to the norm of a
//! projector residual compared against [`TOL_MEM`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute membership tolerance on unit-scale data. Scale-sensitive.
pub const TOL_MEM: f64 = 1e-9;
/// Orthonormality tolerance of stored bases.
pub const TOL_ORTHO: f64 = 1e-10;
/// Candidates whose Gram-Schmidt residual falls below this are skipped when
/// completing a basis.
pub const COMPLEMENT_SKIP: f64 = 1e-8;
/// Coefficient vectors with norm below this are treated as the zero functional.
pub const TOL_ZERO_FUNCTIONAL: f64 = 1e-12;

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// A point of `R^n` with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::input("vector must have positive dimension"));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::input(format!("coordinate {i} is not finite")));
        }
        Ok(Vector(coords))
    }

    /// Builds a vector from trusted coordinates. Panics on non-finite input
    /// in debug builds only.
    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(!coords.is_empty() && coords.iter().all(|c| c.is_finite()));
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![0.0; dim])
    }

    /// Standard basis vector `e_index` of `R^dim`.
    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[index] = 1.0;
        Vector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &Vector) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    pub fn normalized(&self) -> Option<Vector> {
        let n = self.norm();
        (n > 0.0).then(|| self.scale(1.0 / n))
    }

    pub fn max_abs_diff(&self, other: &Vector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_dim(&self, dim: usize, what: &str) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::input(format!(
                "{what} has dimension {}, expected {dim}",
                self.dim()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Subtract the projection of `r` onto each (orthonormal) vector of `basis`, twice.
fn orthogonalize_against<'a>(r: &mut [f64], basis: impl Iterator<Item = &'a Vector> + Clone) {
    for _ in 0..2 {
        for b in basis.clone() {
            let c = dot(r, b.as_slice());
            for (ri, bi) in r.iter_mut().zip(b.as_slice()) {
                *ri -= c * bi;
            }
        }
    }
}

/// A linear subspace of `R^n` held by an orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    /// The zero subspace `{0}` of `R^n`.
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace::zero(ambient_dim).extended(&Subspace::zero(ambient_dim).complement_basis())
    }

    /// Orthonormal basis of the span of `vectors`. Rank-deficient input is
    /// compressed: a vector whose residual against the basis built so far is at
    /// most `TOL_MEM` times its own norm is dropped.
    pub fn span(ambient_dim: usize, vectors: &[Vector]) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::input("ambient dimension must be positive"));
        }
        for (i, v) in vectors.iter().enumerate() {
            v.check_dim(ambient_dim, &format!("spanning vector {i}"))?;
        }
        let mut basis: Vec<Vector> = Vec::with_capacity(vectors.len().min(ambient_dim));
        for v in vectors {
            let vn = v.norm();
            let mut r = v.as_slice().to_vec();
            orthogonalize_against(&mut r, basis.iter());
            let rn = norm(&r);
            if rn <= TOL_MEM * vn || rn == 0.0 {
                continue;
            }
            r.iter_mut().for_each(|c| *c /= rn);
            basis.push(Vector::from_raw(r));
            if basis.len() == ambient_dim {
                break;
            }
        }
        Ok(Subspace { ambient_dim, basis })
    }

    /// Wraps a basis that is already orthonormal (checked within `TOL_ORTHO`).
    pub fn from_orthonormal(ambient_dim: usize, basis: Vec<Vector>) -> Result<Self> {
        for (i, b) in basis.iter().enumerate() {
            b.check_dim(ambient_dim, "basis vector")?;
            if (b.norm() - 1.0).abs() > TOL_ORTHO {
                return Err(Error::input(format!("basis vector {i} is not unit length")));
            }
            for c in &basis[..i] {
                if b.dot(c).abs() > TOL_ORTHO {
                    return Err(Error::input("basis vectors are not orthogonal"));
                }
            }
        }
        if basis.len() > ambient_dim {
            return Err(Error::input("more basis vectors than ambient dimension"));
        }
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &Vector) -> Vector {
        let mut p = vec![0.0; self.ambient_dim];
        for b in &self.basis {
            let c = b.dot(v);
            for (pi, bi) in p.iter_mut().zip(b.as_slice()) {
                *pi += c * bi;
            }
        }
        Vector::from_raw(p)
    }

    /// `v - P v`, re-orthogonalized.
    pub fn residual(&self, v: &Vector) -> Vector {
        let mut r = v.as_slice().to_vec();
        orthogonalize_against(&mut r, self.basis.iter());
        Vector::from_raw(r)
    }

    pub fn distance(&self, v: &Vector) -> f64 {
        self.residual(v).norm()
    }

    /// Membership within `TOL_MEM` (absolute for unit-scale vectors, relative
    /// beyond that).
    pub fn contains(&self, v: &Vector) -> bool {
        self.distance(v) <= TOL_MEM * v.norm().max(1.0)
    }

    /// Coordinates of `v` against the basis (no membership check).
    pub fn coordinates(&self, v: &Vector) -> Vec<f64> {
        self.basis.iter().map(|b| b.dot(v)).collect()
    }

    /// `sum_i coords[i] * basis[i]`
    pub fn combine(&self, coords: &[f64]) -> Vector {
        debug_assert_eq!(coords.len(), self.dim());
        let mut p = vec![0.0; self.ambient_dim];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (pi, bi) in p.iter_mut().zip(b.as_slice()) {
                *pi += c * bi;
            }
        }
        Vector::from_raw(p)
    }

    /// Projector matrix `B B^T`, row-major.
    pub fn projector(&self) -> Vec<Vec<f64>> {
        let n = self.ambient_dim;
        let mut m = vec![vec![0.0; n]; n];
        for b in &self.basis {
            for i in 0..n {
                for j in 0..n {
                    m[i][j] += b[i] * b[j];
                }
            }
        }
        m
    }

    /// Completes the basis to an orthonormal basis of `R^n`: Gram-Schmidt over
    /// `e_1, ..., e_n` in index order, skipping candidates whose residual norm
    /// is below `COMPLEMENT_SKIP`.
    pub fn complement_basis(&self) -> Vec<Vector> {
        let n = self.ambient_dim;
        let mut extra: Vec<Vector> = Vec::with_capacity(n - self.dim());
        for i in 0..n {
            if self.dim() + extra.len() == n {
                break;
            }
            let mut r = vec![0.0; n];
            r[i] = 1.0;
            orthogonalize_against(&mut r, self.basis.iter().chain(extra.iter()));
            let rn = norm(&r);
            if rn < COMPLEMENT_SKIP {
                continue;
            }
            r.iter_mut().for_each(|c| *c /= rn);
            extra.push(Vector::from_raw(r));
        }
        extra
    }

    /// Appends already-orthonormal vectors (orthogonal to this subspace).
    pub(crate) fn extended(&self, extra: &[Vector]) -> Subspace {
        let mut basis = self.basis.clone();
        basis.extend_from_slice(extra);
        Subspace {
            ambient_dim: self.ambient_dim,
            basis,
        }
    }

    /// `self ⊕ span{z}`; returns the new subspace and the unit vector added.
    pub fn with_direction(&self, z: &Vector) -> Result<(Subspace, Vector)> {
        z.check_dim(self.ambient_dim, "direction")?;
        let r = self.residual(z);
        let rn = r.norm();
        if rn <= TOL_MEM * z.norm().max(1.0) {
            return Err(Error::degenerate("direction already lies in the subspace"));
        }
        let u = r.scale(1.0 / rn);
        Ok((self.extended(std::slice::from_ref(&u)), u))
    }

    /// Orthogonal complement of `span{w}` inside this subspace.
    pub fn kernel_of(&self, w: &Vector) -> Result<Subspace> {
        w.check_dim(self.ambient_dim, "functional")?;
        let Some(wn) = w.normalized() else {
            return Ok(self.clone());
        };
        let vecs: Vec<Vector> = self
            .basis
            .iter()
            .map(|b| b.axpy(-b.dot(&wn), &wn))
            .filter(|r| r.norm() > TOL_MEM)
            .collect();
        Subspace::span(self.ambient_dim, &vecs)
    }
}

/// Unique coordinates of `y = sum_i s_coords[i] * S.basis[i] + t * x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub s_coords: Vec<f64>,
    pub t: f64,
}

/// Splits `y ∈ S ⊕ span{x}` into its `S` part and its `x` multiple.
pub fn decompose(y: &Vector, s: &Subspace, x: &Vector) -> Result<Decomposition> {
    let n = s.ambient_dim();
    y.check_dim(n, "y")?;
    x.check_dim(n, "x")?;
    let x_perp = s.residual(x);
    let dx2 = x_perp.dot(&x_perp);
    if dx2.sqrt() <= TOL_MEM {
        return Err(Error::degenerate("x lies in S"));
    }
    let t = y.dot(&x_perp) / dx2;
    let z = y.axpy(-t, x);
    let s_coords = s.coordinates(&z);
    let rebuilt = s.combine(&s_coords).axpy(t, x);
    let miss = rebuilt.sub(y).norm();
    if miss > TOL_MEM * y.norm().max(1.0) {
        return Err(Error::input(format!(
            "y is outside span(S ∪ {{x}}) (distance {miss:.3e})"
        )));
    }
    Ok(Decomposition { s_coords, t })
}

/// A hyperplane through the origin, `{e : normal · e = 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    normal: Vector,
}

impl Hyperplane {
    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    pub fn contains(&self, e: &Vector) -> bool {
        self.normal.dot(e).abs() <= TOL_MEM
    }

    /// Orthonormal basis of the hyperplane itself.
    pub fn subspace(&self) -> Subspace {
        let line = Subspace {
            ambient_dim: self.dim(),
            basis: vec![self.normal.clone()],
        };
        let rest = line.complement_basis();
        Subspace {
            ambient_dim: self.dim(),
            basis: rest,
        }
    }

    /// Angle of the hyperplane's direction in `[0, π)`, for `R^2` only.
    pub fn line_angle(&self) -> Option<f64> {
        if self.dim() != 2 {
            return None;
        }
        let (a, b) = (self.normal[0], self.normal[1]);
        // direction (-b, a) is orthogonal to the normal
        let mut th = a.atan2(-b);
        if th < 0.0 {
            th += std::f64::consts::PI;
        }
        if th >= std::f64::consts::PI {
            th -= std::f64::consts::PI;
        }
        Some(th)
    }
}

/// `Ker(g)` for a nonzero coefficient vector `g`, with unit normal `g / |g|`.
pub fn kernel_hyperplane(g: &Vector) -> Result<Hyperplane> {
    let n = g.norm();
    if n <= TOL_ZERO_FUNCTIONAL {
        return Err(Error::degenerate(
            "zero functional has no kernel hyperplane",
        ));
    }
    Ok(Hyperplane {
        normal: g.scale(1.0 / n),
    })
}

/// A linear functional on a subspace, given by its values on the domain's
/// orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartialFunctional {
    domain: Subspace,
    values: Vec<f64>,
}

impl PartialFunctional {
    pub fn new(domain: Subspace, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.dim() {
            return Err(Error::input(format!(
                "{} values for a {}-dimensional domain",
                values.len(),
                domain.dim()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("functional values must be finite"));
        }
        Ok(PartialFunctional { domain, values })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        PartialFunctional {
            domain: Subspace::zero(ambient_dim),
            values: Vec::new(),
        }
    }

    /// The functional with prescribed values on arbitrary spanning vectors.
    /// Values must be consistent with linearity (least-squares residual within
    /// `1e-8` relative).
    pub fn from_generators(ambient_dim: usize, vectors: &[Vector], values: &[f64]) -> Result<Self> {
        if vectors.len() != values.len() {
            return Err(Error::input("one value per generator is required"));
        }
        let domain = Subspace::span(ambient_dim, vectors)?;
        let k = domain.dim();
        let coords: Vec<Vec<f64>> = vectors.iter().map(|v| domain.coordinates(v)).collect();
        let mut normal = vec![vec![0.0; k]; k];
        let mut rhs = vec![0.0; k];
        for (row, &val) in coords.iter().zip(values) {
            for i in 0..k {
                rhs[i] += row[i] * val;
                for j in 0..k {
                    normal[i][j] += row[i] * row[j];
                }
            }
        }
        let phi = if k == 0 {
            Vec::new()
        } else {
            solve_dense(normal, rhs)
                .ok_or_else(|| Error::input("generators do not determine the functional"))?
        };
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (row, &val) in coords.iter().zip(values) {
            let got: f64 = dot(row, &phi);
            if (got - val).abs() > 1e-8 * scale {
                return Err(Error::input(
                    "generator values are not consistent with a linear map",
                ));
            }
        }
        PartialFunctional::new(domain, phi)
    }

    /// The functional `f(z + t x) = t` on `span(S ∪ {x})`.
    pub fn from_anchor(s: &Subspace, x: &Vector) -> Result<Self> {
        x.check_dim(s.ambient_dim(), "anchor")?;
        let x_perp = s.residual(x);
        let d = x_perp.norm();
        if d <= TOL_MEM {
            return Err(Error::degenerate("anchor lies in S"));
        }
        let u = x_perp.scale(1.0 / d);
        let domain = s.extended(std::slice::from_ref(&u));
        let mut values = vec![0.0; s.dim()];
        // x_perp = x - P_S x has f-value 1.
        values.push(1.0 / d);
        Ok(PartialFunctional { domain, values })
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn ambient_dim(&self) -> usize {
        self.domain.ambient_dim()
    }

    /// Riesz representer inside the domain: `w = sum_i values[i] * basis[i]`.
    /// `f(v) = w · v` for every `v` in the domain.
    pub fn representer(&self) -> Vector {
        self.domain.combine(&self.values)
    }

    /// Value at a domain point (the off-domain component is ignored).
    pub fn eval(&self, v: &Vector) -> f64 {
        self.representer().dot(v)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.abs() <= TOL_ZERO_FUNCTIONAL)
    }
}

/// Gaussian elimination with partial pivoting; `None` if singular.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-14 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn vector_rejects_nan_and_empty() {
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![f64::INFINITY]).is_err());
        assert!(Vector::new(vec![]).is_err());
    }

    #[test]
    fn span_of_z_axis() {
        let s = Subspace::span(3, &[v(&[0.0, 0.0, 1.0])]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis()[0], v(&[0.0, 0.0, 1.0]));
    }

    #[test]
    fn span_of_nothing_is_zero() {
        let s = Subspace::span(4, &[]).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.ambient_dim(), 4);
    }

    #[test]
    fn span_compresses_collinear() {
        let s = Subspace::span(2, &[v(&[1.0, 0.0]), v(&[2.0, 0.0])]).unwrap();
        assert_eq!(s.dim(), 1);
        assert!(s.contains(&v(&[-7.0, 0.0])));
        assert!(!s.contains(&v(&[0.0, 1e-6])));
    }

    #[test]
    fn span_dimension_mismatch() {
        let err = Subspace::span(2, &[v(&[1.0, 0.0, 0.0])]).unwrap_err();
        assert_eq!(err.kind(), "input");
    }

    #[test]
    fn complement_of_z_axis_in_index_order() {
        let s = Subspace::span(3, &[v(&[0.0, 0.0, 1.0])]).unwrap();
        let c = s.complement_basis();
        assert_eq!(c, vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])]);
    }

    #[test]
    fn complement_of_full_space_is_empty() {
        assert!(Subspace::full(2).complement_basis().is_empty());
        assert_eq!(Subspace::full(5).dim(), 5);
    }

    #[test]
    fn complement_of_diagonal() {
        // Hand Gram-Schmidt: e1 - (e1·u)u = (1,0) - (1/2)(1,1) = (1/2,-1/2) -> (1,-1)/√2
        let s = Subspace::span(2, &[v(&[1.0, 1.0])]).unwrap();
        let c = s.complement_basis();
        assert_eq!(c.len(), 1);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(c[0].max_abs_diff(&v(&[h, -h])) < 1e-15);
    }

    #[test]
    fn decompose_example_two_point() {
        let s = Subspace::span(3, &[v(&[0.0, 0.0, 1.0])]).unwrap();
        let d = decompose(&v(&[1.0, -3.0, 5.0]), &s, &v(&[1.0, -3.0, 0.0])).unwrap();
        assert!((d.t - 1.0).abs() < 1e-15);
        assert!((d.s_coords[0] - 5.0).abs() < 1e-15);
    }

    #[test]
    fn decompose_zero_and_line() {
        let s = Subspace::span(3, &[v(&[0.0, 0.0, 1.0])]).unwrap();
        let d = decompose(&Vector::zeros(3), &s, &v(&[1.0, -3.0, 0.0])).unwrap();
        assert_eq!(d.t, 0.0);
        assert_eq!(d.s_coords, vec![0.0]);

        let d = decompose(&v(&[2.0, 0.0]), &Subspace::zero(2), &v(&[1.0, 0.0])).unwrap();
        assert_eq!(d.t, 2.0);
        assert!(d.s_coords.is_empty());
    }

    #[test]
    fn decompose_errors() {
        let s = Subspace::span(3, &[v(&[0.0, 0.0, 1.0])]).unwrap();
        let e = decompose(&v(&[0.0, 0.0, 1.0]), &s, &v(&[0.0, 0.0, 2.0])).unwrap_err();
        assert_eq!(e.kind(), "degenerate");
        let e = decompose(&v(&[0.0, 1.0, 0.0]), &s, &v(&[1.0, 0.0, 0.0])).unwrap_err();
        assert_eq!(e.kind(), "input");
    }

    #[test]
    fn kernel_hyperplanes() {
        let h = kernel_hyperplane(&v(&[1.0, 0.0, 0.0])).unwrap();
        assert_eq!(h.normal(), &v(&[1.0, 0.0, 0.0]));
        assert!(h.contains(&v(&[0.0, 4.0, -2.0])));
        let h = kernel_hyperplane(&v(&[1.0, 0.5])).unwrap();
        let n = 1.25f64.sqrt();
        assert!(h.normal().max_abs_diff(&v(&[1.0 / n, 0.5 / n])) < 1e-15);
        assert_eq!(
            kernel_hyperplane(&v(&[0.0, 0.0])).unwrap_err().kind(),
            "degenerate"
        );
    }

    #[test]
    fn line_angle_of_vertical_axis() {
        let h = kernel_hyperplane(&v(&[1.0, 0.0])).unwrap();
        assert!((h.line_angle().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let h = kernel_hyperplane(&v(&[1.0, 1.0])).unwrap();
        assert!((h.line_angle().unwrap().to_degrees() - 135.0).abs() < 1e-12);
    }

    #[test]
    fn anchor_functional() {
        let s = Subspace::span(3, &[v(&[0.0, 0.0, 1.0])]).unwrap();
        let f = PartialFunctional::from_anchor(&s, &v(&[1.0, -3.0, 0.0])).unwrap();
        assert_eq!(f.domain().dim(), 2);
        assert!((f.eval(&v(&[1.0, -3.0, 5.0])) - 1.0).abs() < 1e-15);
        assert!((f.eval(&v(&[-2.0, 6.0, 0.0])) + 2.0).abs() < 1e-14);
    }

    #[test]
    fn generators_must_be_consistent() {
        let f =
            PartialFunctional::from_generators(2, &[v(&[1.0, 0.0]), v(&[2.0, 0.0])], &[1.0, 2.0])
                .unwrap();
        assert_eq!(f.domain().dim(), 1);
        assert!((f.eval(&v(&[3.0, 0.0])) - 3.0).abs() < 1e-14);
        assert!(PartialFunctional::from_generators(
            2,
            &[v(&[1.0, 0.0]), v(&[2.0, 0.0])],
            &[1.0, 3.0]
        )
        .is_err());
    }

    #[test]
    fn kernel_within_subspace() {
        let l = Subspace::span(3, &[v(&[0.0, 0.0, 1.0]), v(&[1.0, -3.0, 0.0])]).unwrap();
        let k = l.kernel_of(&v(&[0.1, -0.3, 0.0])).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&v(&[0.0, 0.0, 1.0])));
    }
}
