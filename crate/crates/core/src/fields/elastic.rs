//! Elastic operator, distortion stress, and free energies of Q-tensor fields.

use serde::{Deserialize, Serialize};

use crate::coefficients::MaterialParams;
use crate::error::Result;
use crate::fields::field::{Field, QField};
use crate::fields::ops::GridOps;
use crate::qtensor::{bulk_energy, bulk_gradient, project_in, BulkParams, Director, Mat3, QTensor, Vec3};

/// Fourier symbol of the elastic operator at wavevector `kappa`:
/// `L1 |k|^2 Q + (L2 + L3)/2 * dev(Qk k^T + k (Qk)^T)`.
#[inline]
pub fn elastic_symbol(q: &QTensor, kappa: &Vec3, l1: f64, l23: f64) -> QTensor {
    let k2 = kappa.norm_squared();
    let qk = q.mul_vec(kappa);
    l1 * k2 * *q + 0.5 * l23 * QTensor::sym_outer(&qk, kappa)
}

/// Solves `(alpha + beta * symbol) X = r` for one wavevector.
///
/// The symbol has three eigenspaces: tensors annihilating `e = k/|k|`,
/// the span of `e m + m e` with `m` orthogonal to `e`, and `ee - I/3`.
pub fn solve_elastic_shifted(r: &QTensor, kappa: &Vec3, alpha: f64, beta: f64, l1: f64, l23: f64) -> QTensor {
    let k2 = kappa.norm_squared();
    if k2 == 0.0 {
        return (1.0 / alpha) * *r;
    }
    let e = kappa / k2.sqrt();
    let dir = Director::from_unit_unchecked(e);
    let r_in = project_in(r, &dir);
    let r_axial = 1.5 * e.dot(&r.mul_vec(&e)) * QTensor::uniaxial_raw(1.0, &e);
    let r_rest = *r - r_in - r_axial;
    let lam_rest = alpha + beta * l1 * k2;
    let lam_in = alpha + beta * (l1 + 0.5 * l23) * k2;
    let lam_axial = alpha + beta * (l1 + 2.0 / 3.0 * l23) * k2;
    (1.0 / lam_rest) * r_rest + (1.0 / lam_in) * r_in + (1.0 / lam_axial) * r_axial
}

/// `-(L1 Delta Q + (L2+L3)/2 (Q_km,ml + Q_lm,mk - (2/3) delta_kl Q_ij,ij))`,
/// a positive semidefinite operator.
pub fn elastic_operator(ops: &GridOps, q: &QField, l1: f64, l2: f64, l3: f64) -> QField {
    let l23 = l2 + l3;
    ops.map_spectral(q, |idx, x| elastic_symbol(&x, &ops.kappa(idx), l1, l23))
}

/// The three partial derivatives of a Q field as full matrices, per node.
pub(crate) fn q_gradients(ops: &GridOps, q: &QField) -> Vec<[Mat3; 3]> {
    let parts = ops.gradient(q);
    (0..q.len())
        .map(|i| [0, 1, 2].map(|a| parts[a].values()[i].to_matrix()))
        .collect()
}

/// `-(L1 dQ_kl/dj dQt_kl/di + L2 dQ_km/dm dQt_kj/di + L3 dQ_kj/dl dQt_kl/di)`
/// stored at entry `(i, j)`; its divergence is taken as `d_j sigma_ij`.
pub fn distortion_stress(ops: &GridOps, q: &QField, qt: &QField, l1: f64, l2: f64, l3: f64) -> Result<Field<Mat3>> {
    q.check_grid(ops.grid())?;
    qt.check_grid(ops.grid())?;
    let gq = q_gradients(ops, q);
    let gt = if std::ptr::eq(q, qt) { gq.clone() } else { q_gradients(ops, qt) };
    let data = gq
        .iter()
        .zip(&gt)
        .map(|(a, b)| distortion_stress_node(a, b, l1, l2, l3))
        .collect();
    Field::from_vec(*ops.grid(), data)
}

/// Pointwise distortion stress from derivative matrices `a[j] = dQ/dx_j`
/// and `b[i] = dQt/dx_i`.
pub fn distortion_stress_node(a: &[Mat3; 3], b: &[Mat3; 3], l1: f64, l2: f64, l3: f64) -> Mat3 {
    let div = Vec3::from_fn(|k, _| (0..3).map(|m| a[m][(k, m)]).sum());
    Mat3::from_fn(|i, j| {
        let t1 = a[j].dot(&b[i]);
        let t2: f64 = (0..3).map(|k| div[k] * b[i][(k, j)]).sum();
        let mut t3 = 0.0;
        for k in 0..3 {
            for l in 0..3 {
                t3 += a[l][(k, j)] * b[i][(k, l)];
            }
        }
        -(l1 * t1 + l2 * t2 + l3 * t3)
    })
}

/// `(1/2)(L1 |grad Q|^2 + L2 Q_ij,j Q_ik,k + L3 Q_ij,k Q_ik,j)` from the
/// derivative matrices at one node.
pub fn elastic_density_node(g: &[Mat3; 3], l1: f64, l2: f64, l3: f64) -> f64 {
    let grad2: f64 = g.iter().map(|m| m.norm_squared()).sum();
    let div = Vec3::from_fn(|i, _| (0..3).map(|j| g[j][(i, j)]).sum());
    let mut cross = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                cross += g[k][(i, j)] * g[j][(i, k)];
            }
        }
    }
    0.5 * (l1 * grad2 + l2 * div.norm_squared() + l3 * cross)
}

pub fn elastic_density(ops: &GridOps, q: &QField, l1: f64, l2: f64, l3: f64) -> Field<f64> {
    let data = q_gradients(ops, q).iter().map(|g| elastic_density_node(g, l1, l2, l3)).collect();
    Field::from_vec(*ops.grid(), data).expect("same grid")
}

/// Bulk and elastic parts of the Landau-de Gennes free energy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandauEnergy {
    /// `(1/eps) * integral of (F_b - F_b(ground state))`.
    pub bulk: f64,
    pub elastic: f64,
    pub total: f64,
    /// `(1/eps) * integral of F_b` without the ground-state shift.
    pub bulk_raw: f64,
}

pub fn landau_energy(ops: &GridOps, q: &QField, p: &MaterialParams) -> Result<LandauEnergy> {
    let bulk_params = p.bulk()?;
    Ok(landau_energy_with(ops, q, p, &bulk_params))
}

pub(crate) fn landau_energy_with(ops: &GridOps, q: &QField, p: &MaterialParams, bulk: &BulkParams) -> LandauEnergy {
    let shift = bulk.ground_state_energy();
    let raw = ops.integrate(q, |x| bulk_energy(x, bulk)) / p.epsilon;
    let shifted = ops.integrate(q, |x| bulk_energy(x, bulk) - shift) / p.epsilon;
    let elastic = ops.integrate_scalar(&elastic_density(ops, q, p.l1, p.l2, p.l3));
    LandauEnergy { bulk: shifted, elastic, total: shifted + elastic, bulk_raw: raw }
}

/// `-(1/eps) J(Q) - L(Q)`.
pub fn molecular_field(ops: &GridOps, q: &QField, p: &MaterialParams) -> Result<QField> {
    let bulk = p.bulk()?;
    Ok(molecular_field_with(ops, q, p, &bulk))
}

pub(crate) fn molecular_field_with(ops: &GridOps, q: &QField, p: &MaterialParams, bulk: &BulkParams) -> QField {
    let lq = elastic_operator(ops, q, p.l1, p.l2, p.l3);
    let inv_eps = 1.0 / p.epsilon;
    q.zip_map(&lq, |x, l| -inv_eps * bulk_gradient(x, bulk) - *l)
}
