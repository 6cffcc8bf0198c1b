//! Pointwise algebra of symmetric traceless 3x3 tensors.
//!
//! A [`QTensor`] stores the five independent entries of a symmetric traceless
//! matrix; the `zz` entry is reconstructed as `-(xx + yy)`. Everything here is
//! a pure function on `Copy` values, so it can be called from any thread and
//! from the per-node loops of the field operators.
//!
//! The bulk potential uses `(tr Q^2)^2` for its quartic term, which makes
//! [`bulk_gradient`] the exact derivative of [`bulk_energy`] restricted to
//! traceless tensors.

use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;

/// Relative tolerance used by [`inverse_h`] to decide kernel membership.
pub const TOL_KER: f64 = 1e-10;

/// Symmetric traceless 3x3 tensor in reduced (five component) storage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct QTensor {
    pub xx: f64,
    pub xy: f64,
    pub xz: f64,
    pub yy: f64,
    pub yz: f64,
}

impl QTensor {
    pub const ZERO: QTensor = QTensor { xx: 0.0, xy: 0.0, xz: 0.0, yy: 0.0, yz: 0.0 };

    pub const fn new(xx: f64, xy: f64, xz: f64, yy: f64, yz: f64) -> Self {
        QTensor { xx, xy, xz, yy, yz }
    }

    #[inline]
    pub fn zz(&self) -> f64 {
        -(self.xx + self.yy)
    }

    pub fn from_components(c: [f64; 5]) -> Self {
        QTensor::new(c[0], c[1], c[2], c[3], c[4])
    }

    pub fn components(&self) -> [f64; 5] {
        [self.xx, self.xy, self.xz, self.yy, self.yz]
    }

    pub fn to_matrix(&self) -> Mat3 {
        Mat3::new(
            self.xx, self.xy, self.xz, //
            self.xy, self.yy, self.yz, //
            self.xz, self.yz, self.zz(),
        )
    }

    /// Symmetric traceless part of an arbitrary 3x3 matrix.
    pub fn from_matrix(m: &Mat3) -> Self {
        let third_tr = m.trace() / 3.0;
        QTensor {
            xx: m[(0, 0)] - third_tr,
            xy: 0.5 * (m[(0, 1)] + m[(1, 0)]),
            xz: 0.5 * (m[(0, 2)] + m[(2, 0)]),
            yy: m[(1, 1)] - third_tr,
            yz: 0.5 * (m[(1, 2)] + m[(2, 1)]),
        }
    }

    /// Traceless part of `a b^T + b a^T`.
    #[inline]
    pub fn sym_outer(a: &Vec3, b: &Vec3) -> Self {
        let third_tr = 2.0 * a.dot(b) / 3.0;
        QTensor {
            xx: 2.0 * a.x * b.x - third_tr,
            xy: a.x * b.y + a.y * b.x,
            xz: a.x * b.z + a.z * b.x,
            yy: 2.0 * a.y * b.y - third_tr,
            yz: a.y * b.z + a.z * b.y,
        }
    }

    /// Frobenius inner product `Q : P = tr(Q P)`.
    #[inline]
    pub fn dot(&self, o: &QTensor) -> f64 {
        self.xx * o.xx
            + self.yy * o.yy
            + self.zz() * o.zz()
            + 2.0 * (self.xy * o.xy + self.xz * o.xz + self.yz * o.yz)
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    #[inline]
    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3::new(
            self.xx * v.x + self.xy * v.y + self.xz * v.z,
            self.xy * v.x + self.yy * v.y + self.yz * v.z,
            self.xz * v.x + self.yz * v.y + self.zz() * v.z,
        )
    }

    /// `tr(Q^3)`, which equals `3 det Q` for traceless `Q`.
    pub fn trace_cube(&self) -> f64 {
        3.0 * self.to_matrix().determinant()
    }

    /// Traceless part of `Q^2`.
    #[inline]
    pub fn square_dev(&self) -> QTensor {
        let zz = self.zz();
        let sq_xx = self.xx * self.xx + self.xy * self.xy + self.xz * self.xz;
        let sq_yy = self.xy * self.xy + self.yy * self.yy + self.yz * self.yz;
        let sq_zz = self.xz * self.xz + self.yz * self.yz + zz * zz;
        let third_tr = (sq_xx + sq_yy + sq_zz) / 3.0;
        QTensor {
            xx: sq_xx - third_tr,
            xy: self.xx * self.xy + self.xy * self.yy + self.xz * self.yz,
            xz: self.xx * self.xz + self.xy * self.yz + self.xz * zz,
            yy: sq_yy - third_tr,
            yz: self.xy * self.xz + self.yy * self.yz + self.yz * zz,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }

    /// `s (n n - I/3)` for a unit vector `n`, without checking the length.
    #[inline]
    pub(crate) fn uniaxial_raw(s: f64, n: &Vec3) -> QTensor {
        QTensor {
            xx: s * (n.x * n.x - 1.0 / 3.0),
            xy: s * n.x * n.y,
            xz: s * n.x * n.z,
            yy: s * (n.y * n.y - 1.0 / 3.0),
            yz: s * n.y * n.z,
        }
    }
}

impl Add for QTensor {
    type Output = QTensor;
    #[inline]
    fn add(self, o: QTensor) -> QTensor {
        QTensor {
            xx: self.xx + o.xx,
            xy: self.xy + o.xy,
            xz: self.xz + o.xz,
            yy: self.yy + o.yy,
            yz: self.yz + o.yz,
        }
    }
}

impl Sub for QTensor {
    type Output = QTensor;
    #[inline]
    fn sub(self, o: QTensor) -> QTensor {
        self + (-o)
    }
}

impl Neg for QTensor {
    type Output = QTensor;
    #[inline]
    fn neg(self) -> QTensor {
        -1.0 * self
    }
}

impl Mul<QTensor> for f64 {
    type Output = QTensor;
    #[inline]
    fn mul(self, q: QTensor) -> QTensor {
        QTensor {
            xx: self * q.xx,
            xy: self * q.xy,
            xz: self * q.xz,
            yy: self * q.yy,
            yz: self * q.yz,
        }
    }
}

impl Mul<f64> for QTensor {
    type Output = QTensor;
    #[inline]
    fn mul(self, k: f64) -> QTensor {
        k * self
    }
}

impl AddAssign for QTensor {
    fn add_assign(&mut self, o: QTensor) {
        *self = *self + o;
    }
}

impl SubAssign for QTensor {
    fn sub_assign(&mut self, o: QTensor) {
        *self = *self - o;
    }
}

impl Sum for QTensor {
    fn sum<I: Iterator<Item = QTensor>>(iter: I) -> QTensor {
        iter.fold(QTensor::ZERO, |acc, q| acc + q)
    }
}

/// A unit vector on the sphere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Director(Vec3);

impl Director {
    /// Vectors within this distance of unit length are silently renormalized.
    pub const RENORM_TOL: f64 = 1e-6;

    pub fn new(v: Vec3) -> Result<Self> {
        let len = v.norm();
        if !len.is_finite() || (len - 1.0).abs() > Self::RENORM_TOL {
            return Err(Error::InvalidInput(format!(
                "director must have unit length, got |n| = {len}"
            )));
        }
        Ok(Director(v / len))
    }

    /// Normalizes any nonzero finite vector.
    pub fn normalized(v: Vec3) -> Result<Self> {
        let len = v.norm();
        if !(len.is_finite() && len > 0.0) {
            return Err(Error::InvalidInput(format!("cannot normalize vector {v:?}")));
        }
        Ok(Director(v / len))
    }

    pub(crate) fn from_unit_unchecked(v: Vec3) -> Self {
        Director(v)
    }

    pub fn e_x() -> Self {
        Director(Vec3::x())
    }
    pub fn e_y() -> Self {
        Director(Vec3::y())
    }
    pub fn e_z() -> Self {
        Director(Vec3::z())
    }

    pub fn vector(&self) -> Vec3 {
        self.0
    }

    pub fn nn(&self) -> Mat3 {
        self.0 * self.0.transpose()
    }
}

/// Which root of `2cs^2 - bs - 3a = 0` a [`BulkParams`] uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Root {
    Plus,
    Minus,
}

/// Bulk potential coefficients together with the selected uniaxial order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BulkParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub s: f64,
    pub root: Root,
}

impl BulkParams {
    /// Selects the stable root `s+` and checks that the linearized operator
    /// is coercive there (`bs > 0` and `2cs^2 - bs > 0`).
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let p = Self::with_root(a, b, c, Root::Plus)?;
        let bs = p.b * p.s;
        let upper = 2.0 * p.c * p.s * p.s - bs;
        if !(bs > 0.0 && upper > 0.0) {
            return Err(Error::SingularParameter(format!(
                "linearized bulk operator is not coercive: bs = {bs}, 2cs^2 - bs = {upper} (need a > 0 and b > 0)"
            )));
        }
        Ok(p)
    }

    /// Any root, no coercivity check. `Root::Minus` is never coercive.
    pub fn with_root(a: f64, b: f64, c: f64, root: Root) -> Result<Self> {
        let (plus, minus) = critical_s(a, b, c)?;
        let s = match root {
            Root::Plus => plus,
            Root::Minus => minus,
        };
        Ok(BulkParams { a, b, c, s, root })
    }

    /// `min(bs, 2cs^2 - bs)`.
    pub fn coercivity_constant(&self) -> f64 {
        let bs = self.b * self.s;
        bs.min(2.0 * self.c * self.s * self.s - bs)
    }

    pub fn is_coercive(&self) -> bool {
        self.root == Root::Plus && self.coercivity_constant() > 0.0
    }

    /// Bulk energy density of the uniaxial ground state.
    pub fn ground_state_energy(&self) -> f64 {
        bulk_energy(&QTensor::uniaxial_raw(self.s, &Vec3::z()), self)
    }
}

/// `s (n n - I/3)`.
pub fn uniaxial(s: f64, n: &Director) -> QTensor {
    QTensor::uniaxial_raw(s, &n.vector())
}

/// Both roots of `2cs^2 - bs - 3a = 0`, larger first.
pub fn critical_s(a: f64, b: f64, c: f64) -> Result<(f64, f64)> {
    if !(c > 0.0) {
        return Err(Error::InvalidInput(format!("bulk coefficient c must be positive, got {c}")));
    }
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "bulk coefficients a and b must be nonnegative, got a = {a}, b = {b}"
        )));
    }
    if a == 0.0 && b == 0.0 {
        return Err(Error::DegeneratePotential);
    }
    let disc = (b * b + 24.0 * a * c).sqrt();
    let s_plus = (b + disc) / (4.0 * c);
    // product of the roots is -3a/(2c); avoids cancellation in b - disc
    let s_minus = -3.0 * a / (2.0 * c * s_plus);
    Ok((s_plus, s_minus))
}

/// `-(a/2) tr Q^2 - (b/3) tr Q^3 + (c/4) (tr Q^2)^2`.
pub fn bulk_energy(q: &QTensor, p: &BulkParams) -> f64 {
    let q2 = q.norm_sq();
    -0.5 * p.a * q2 - p.b / 3.0 * q.trace_cube() + 0.25 * p.c * q2 * q2
}

/// Derivative of [`bulk_energy`] on traceless tensors:
/// `-aQ - bQ^2 + c|Q|^2 Q + (b/3)|Q|^2 I`.
#[inline]
pub fn bulk_gradient(q: &QTensor, p: &BulkParams) -> QTensor {
    let q2 = q.norm_sq();
    (p.c * q2 - p.a) * *q - p.b * q.square_dev()
}

/// Second derivative of the bulk energy at `q0` applied to `dq`.
pub fn bulk_hessian(q0: &QTensor, dq: &QTensor, p: &BulkParams) -> QTensor {
    let q0m = q0.to_matrix();
    let dqm = dq.to_matrix();
    -p.a * *dq - p.b * bilinear_b(&q0m, &dqm)
        + p.c * trilinear_c(q0, q0, dq)
}

/// `Q1 Q2 + Q2^T Q1^T - (2/3) I (Q1 : Q2)` for general matrices.
pub fn bilinear_b(q1: &Mat3, q2: &Mat3) -> QTensor {
    let prod = q1 * q2;
    // prod + prod^T is symmetric with trace 2 tr(prod); the identity term removes it
    QTensor::from_matrix(&(prod + prod.transpose()))
}

/// `Q1 (Q2:Q3) + Q2 (Q1:Q3) + Q3 (Q1:Q2)`.
pub fn trilinear_c(q1: &QTensor, q2: &QTensor, q3: &QTensor) -> QTensor {
    q2.dot(q3) * *q1 + q1.dot(q3) * *q2 + q1.dot(q2) * *q3
}

/// Linearization of [`bulk_gradient`] at `uniaxial(p.s, n)`:
/// `bs (Q - (nnQ + Qnn) + (2/3)(Q:nn) I) + 2cs^2 (Q:nn)(nn - I/3)`.
#[inline]
pub fn linearized_h(q: &QTensor, p: &BulkParams, n: &Director) -> QTensor {
    let n = n.vector();
    let qn = q.mul_vec(&n);
    let q_nn = n.dot(&qn);
    // nnQ + Qnn - (2/3)(Q:nn)I is exactly the traceless part of n (Qn)^T + (Qn) n^T
    let a_part = *q - QTensor::sym_outer(&n, &qn);
    let bs = p.b * p.s;
    bs * a_part + 2.0 * p.c * p.s * p.s * q_nn * QTensor::uniaxial_raw(1.0, &n)
}

/// Explicit inverse of [`linearized_h`] on the complement of its kernel.
pub fn inverse_h(q: &QTensor, p: &BulkParams, n: &Director) -> Result<QTensor> {
    let residual = project_in(q, n).norm();
    let tolerance = TOL_KER * q.norm();
    if residual > tolerance {
        return Err(Error::NotInRange { residual, tolerance });
    }
    inverse_h_unchecked(q, p, n)
}

pub(crate) fn inverse_h_unchecked(q: &QTensor, p: &BulkParams, n: &Director) -> Result<QTensor> {
    let bs = p.b * p.s;
    let gap = 4.0 * p.c * p.s - p.b;
    if bs == 0.0 || gap == 0.0 {
        return Err(Error::SingularParameter(format!(
            "inverse requires bs != 0 and 4cs - b != 0, got bs = {bs}, 4cs - b = {gap}"
        )));
    }
    let nv = n.vector();
    let qn = q.mul_vec(&nv);
    let q_nn = nv.dot(&qn);
    let a_part = *q - QTensor::sym_outer(&nv, &qn);
    let coef = (4.0 * p.b + 2.0 * p.c * p.s) / (bs * gap);
    Ok((1.0 / bs) * a_part + coef * q_nn * QTensor::uniaxial_raw(1.0, &nv))
}

/// Projection onto the kernel `span{n m + m n : m . n = 0}`:
/// `(nnQ + Qnn) - 2(Q:nn) nn`.
#[inline]
pub fn project_in(q: &QTensor, n: &Director) -> QTensor {
    let n = n.vector();
    let qn = q.mul_vec(&n);
    let m = qn - n.dot(&qn) * n;
    QTensor::sym_outer(&n, &m)
}

/// `Q - project_in(Q)`.
#[inline]
pub fn project_out(q: &QTensor, n: &Director) -> QTensor {
    *q - project_in(q, n)
}

/// `xi (M(Q + I/3) + (Q + I/3)M - 2(Q + I/3)(Q:M))` for traceless `M`.
#[inline]
pub fn s_coupling(q: &QTensor, m: &QTensor, xi: f64) -> QTensor {
    if xi == 0.0 {
        return QTensor::ZERO;
    }
    let qm = q.to_matrix() * m.to_matrix();
    let sym = QTensor::from_matrix(&(qm + qm.transpose()));
    xi * (sym + (2.0 / 3.0) * *m - 2.0 * q.dot(m) * *q)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Dense 3x3 reference implementations, written straight from the formulas.
    fn dense_j(q: &Mat3, a: f64, b: f64, c: f64) -> Mat3 {
        let q2 = (q * q).trace();
        -a * q - b * q * q + c * q2 * q + (b / 3.0) * q2 * Mat3::identity()
    }

    fn dense_h(q: &Mat3, s: f64, b: f64, c: f64, n: &Vec3) -> Mat3 {
        let nn = n * n.transpose();
        let qnn = (q * nn).trace();
        let i = Mat3::identity();
        b * s * (q - (nn * q + q * nn) + (2.0 / 3.0) * qnn * i)
            + 2.0 * c * s * s * qnn * (nn - i / 3.0)
    }

    fn close(a: &QTensor, b: &Mat3, tol: f64) -> bool {
        (a.to_matrix() - b).amax() <= tol
    }

    fn unit_p() -> BulkParams {
        BulkParams::new(1.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn uniaxial_examples() {
        let q = uniaxial(1.5, &Director::e_z());
        assert!(close(&q, &Mat3::from_diagonal(&Vec3::new(-0.5, -0.5, 1.0)), 1e-15));
        assert_eq!(uniaxial(0.0, &Director::e_x()), QTensor::ZERO);
        let n = Director::new(Vec3::new(1.0, 1.0, 1.0) / 3f64.sqrt()).unwrap();
        let q = uniaxial(1.0, &n);
        let expected = Mat3::from_element(1.0 / 3.0) - Mat3::identity() / 3.0;
        assert!(close(&q, &expected, 1e-15));
    }

    #[test]
    fn director_renormalizes_small_drift_only() {
        let d = Director::new(Vec3::new(0.0, 0.0, 1.0 + 5e-7)).unwrap();
        assert!((d.vector().norm() - 1.0).abs() < 1e-15);
        assert!(matches!(
            Director::new(Vec3::new(0.0, 0.0, 1.1)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn critical_s_examples() {
        let (p, m) = critical_s(1.0, 1.0, 1.0).unwrap();
        assert!((p - 1.5).abs() < 1e-15 && (m + 1.0).abs() < 1e-15);
        let (p, m) = critical_s(0.0, 1.0, 1.0).unwrap();
        assert!((p - 0.5).abs() < 1e-15 && m == 0.0);
        let (p, m) = critical_s(1.0, 0.0, 1.0).unwrap();
        assert!((p - 24f64.sqrt() / 4.0).abs() < 1e-15);
        assert!((m + 24f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn critical_s_errors() {
        assert!(matches!(critical_s(1.0, 1.0, 0.0), Err(Error::InvalidInput(_))));
        assert!(matches!(critical_s(0.0, 0.0, 1.0), Err(Error::DegeneratePotential)));
        assert!(matches!(critical_s(-1.0, 1.0, 1.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn bulk_params_reject_non_coercive() {
        assert!(matches!(BulkParams::new(1.0, 0.0, 1.0), Err(Error::SingularParameter(_))));
        let minus = BulkParams::with_root(1.0, 1.0, 1.0, Root::Minus).unwrap();
        assert!(!minus.is_coercive());
        assert!(unit_p().is_coercive());
    }

    #[test]
    fn bulk_energy_examples() {
        let p = unit_p();
        assert_eq!(bulk_energy(&QTensor::ZERO, &p), 0.0);
        let q = uniaxial(1.5, &Director::e_z());
        assert!((bulk_energy(&q, &p) + 0.4375).abs() < 1e-14);
        let q = uniaxial(1.0, &Director::e_z());
        let expected = -0.5 * (2.0 / 3.0) - (2.0 / 9.0) / 3.0 + 0.25 * (4.0 / 9.0);
        assert!((bulk_energy(&q, &p) - expected).abs() < 1e-15);
        assert!((expected + 0.296_296_296_296_296_3).abs() < 1e-15);
    }

    #[test]
    fn bulk_gradient_examples() {
        let p = unit_p();
        assert_eq!(bulk_gradient(&QTensor::ZERO, &p), QTensor::ZERO);
        assert!(bulk_gradient(&uniaxial(1.5, &Director::e_z()), &p).norm() < 1e-15);
        let g = bulk_gradient(&uniaxial(1.0, &Director::e_z()), &p);
        let expected = Mat3::from_diagonal(&Vec3::new(2.0 / 9.0, 2.0 / 9.0, -4.0 / 9.0));
        assert!(close(&g, &expected, 1e-15));
        let q = QTensor::new(0.3, -0.2, 0.7, -0.1, 0.4);
        assert!(close(&bulk_gradient(&q, &p), &dense_j(&q.to_matrix(), 1.0, 1.0, 1.0), 1e-14));
    }

    #[test]
    fn bilinear_and_trilinear_examples() {
        let u = uniaxial(1.0, &Director::e_z());
        assert_eq!(bilinear_b(&Mat3::zeros(), &u.to_matrix()), QTensor::ZERO);
        let b = bilinear_b(&u.to_matrix(), &u.to_matrix());
        assert!(close(&b, &Mat3::from_diagonal(&Vec3::new(-2.0 / 9.0, -2.0 / 9.0, 4.0 / 9.0)), 1e-15));
        let zx = QTensor::sym_outer(&Vec3::z(), &Vec3::x());
        let zy = QTensor::sym_outer(&Vec3::z(), &Vec3::y());
        let xy = QTensor::sym_outer(&Vec3::x(), &Vec3::y());
        assert!((bilinear_b(&zx.to_matrix(), &zy.to_matrix()) - xy).norm() < 1e-15);

        assert_eq!(trilinear_c(&u, &QTensor::ZERO, &QTensor::ZERO), QTensor::ZERO);
        assert!((trilinear_c(&u, &u, &u) - 2.0 * u).norm() < 1e-15);
    }

    #[test]
    fn linearized_h_examples() {
        let p = unit_p();
        let n = Director::e_z();
        let zx = QTensor::sym_outer(&Vec3::z(), &Vec3::x());
        assert!(linearized_h(&zx, &p, &n).norm() < 1e-15);
        let u = uniaxial(1.0, &n);
        assert!((linearized_h(&u, &p, &n) - 2.5 * u).norm() < 1e-14);
        let q = QTensor::new(0.3, -0.2, 0.7, -0.1, 0.4);
        let nv = Vec3::new(0.2, -0.5, 0.8).normalize();
        let nd = Director::new(nv).unwrap();
        let h = linearized_h(&q, &p, &nd);
        assert!(close(&h, &dense_h(&q.to_matrix(), p.s, 1.0, 1.0, &nv), 1e-14));
        let q_nn = nv.dot(&q.mul_vec(&nv));
        let h_nn = nv.dot(&h.mul_vec(&nv));
        let bs = p.b * p.s;
        assert!((h_nn + (bs - 4.0 * p.c * p.s * p.s) * q_nn / 3.0).abs() < 1e-14);
        assert!(project_in(&h, &nd).norm() < 1e-14);
    }

    #[test]
    fn inverse_h_examples() {
        let p = unit_p();
        let n = Director::e_z();
        assert_eq!(inverse_h(&QTensor::ZERO, &p, &n).unwrap(), QTensor::ZERO);
        let u = uniaxial(1.0, &n);
        let inv = inverse_h(&u, &p, &n).unwrap();
        assert!((inv - 0.4 * u).norm() < 1e-14);
        assert!((linearized_h(&(0.4 * u), &p, &n) - u).norm() < 1e-14);
    }

    #[test]
    fn inverse_h_rejects_kernel_components() {
        let p = unit_p();
        let n = Director::e_z();
        let zx = QTensor::sym_outer(&Vec3::z(), &Vec3::x());
        assert!(matches!(inverse_h(&zx, &p, &n), Err(Error::NotInRange { .. })));
    }

    #[test]
    fn inverse_h_singular_parameters() {
        // b = 4cs is impossible for s+, so build the degenerate case by hand
        let p = BulkParams { a: 0.0, b: 2.0, c: 1.0, s: 0.5, root: Root::Plus };
        let u = uniaxial(1.0, &Director::e_z());
        assert!(matches!(inverse_h(&u, &p, &Director::e_z()), Err(Error::SingularParameter(_))));
    }

    #[test]
    fn projection_examples() {
        let n = Director::e_z();
        assert!(project_in(&uniaxial(1.3, &n), &n).norm() < 1e-15);
        let zx = QTensor::sym_outer(&Vec3::z(), &Vec3::x());
        assert!((project_in(&zx, &n) - zx).norm() < 1e-15);
    }

    #[test]
    fn s_coupling_examples() {
        let m = QTensor::new(0.3, -0.2, 0.7, -0.1, 0.4);
        assert!((s_coupling(&QTensor::ZERO, &m, 0.7) - (2.0 * 0.7 / 3.0) * m).norm() < 1e-15);
        assert_eq!(s_coupling(&uniaxial(1.0, &Director::e_x()), &m, 0.0), QTensor::ZERO);

        let s = 1.5;
        let nv = Vec3::new(0.3, 0.4, -0.5).normalize();
        let n = Director::new(nv).unwrap();
        let q0 = uniaxial(s, &n);
        let xi = 0.8;
        let out = s_coupling(&q0, &m, xi).to_matrix();
        let lhs = ((q0.to_matrix() + Mat3::identity() / 3.0) * out).trace();
        let rhs = xi * 2.0 * s * (1.0 - s) * (1.0 + 2.0 * s) / 3.0 * nv.dot(&m.mul_vec(&nv));
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn s_coupling_matches_dense_formula() {
        let q = QTensor::new(0.1, 0.5, -0.3, 0.2, 0.05);
        let m = QTensor::new(-0.4, 0.1, 0.2, 0.6, -0.3);
        let xi = 1.3;
        let qp = q.to_matrix() + Mat3::identity() / 3.0;
        let mm = m.to_matrix();
        let dense = xi * (mm * qp + qp * mm - 2.0 * qp * (q.to_matrix() * mm).trace());
        assert!(close(&s_coupling(&q, &m, xi), &dense, 1e-14));
    }
}
