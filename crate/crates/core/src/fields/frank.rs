//! Oseen-Frank energy of director fields, its molecular field, and the
//! Ericksen stress.

use crate::error::{Error, Result};
use crate::fields::field::Field;
use crate::fields::ops::GridOps;
use crate::qtensor::{Director, Mat3, Vec3};

/// Frank constants `[k1, k2, k3, k4]` (splay, twist, bend, saddle-splay).
pub type FrankConstants = [f64; 4];

/// Rejects fields with a node farther than [`Director::RENORM_TOL`] from unit length.
pub fn check_unit(n: &Field<Vec3>) -> Result<()> {
    for (i, v) in n.values().iter().enumerate() {
        let len = v.norm();
        if !len.is_finite() || (len - 1.0).abs() > Director::RENORM_TOL {
            return Err(Error::InvalidInput(format!("director at node {i} has length {len}")));
        }
    }
    Ok(())
}

/// `G_kj = d_j n_k` at every node.
pub fn director_gradient(ops: &GridOps, n: &Field<Vec3>) -> Field<Mat3> {
    ops.vector_gradient(n)
}

fn curl(g: &Mat3) -> Vec3 {
    Vec3::new(g[(2, 1)] - g[(1, 2)], g[(0, 2)] - g[(2, 0)], g[(1, 0)] - g[(0, 1)])
}

/// Frank energy density from the director and `G_kj = d_j n_k`.
pub fn frank_density(n: &Vec3, g: &Mat3, k: &FrankConstants) -> f64 {
    let div = g.trace();
    let c = curl(g);
    let twist = n.dot(&c);
    let bend = n.cross(&c).norm_squared();
    let saddle = (g * g).trace() - div * div;
    0.5 * (k[0] * div * div + k[1] * twist * twist + k[2] * bend + (k[1] + k[3]) * saddle)
}

pub fn frank_energy(ops: &GridOps, n: &Field<Vec3>, k: &FrankConstants) -> Result<f64> {
    check_unit(n)?;
    let g = director_gradient(ops, n);
    let dens = n.zip_map(&g, |v, m| frank_density(v, m, k));
    Ok(ops.integrate_scalar(&dens))
}

/// `h = k2 Delta n + (k1 - k2) grad(div n)
///      + (k3 - k2)(-(d_i n_k) b_k + d_l(n_l b_i))` with `b = (n . grad) n`.
///
/// This is minus the variation of a form of the Frank energy that agrees
/// with it on unit fields; the saddle-splay term is a null Lagrangian on the
/// torus and drops out.
pub fn frank_molecular_field(ops: &GridOps, n: &Field<Vec3>, k: &FrankConstants) -> Result<Field<Vec3>> {
    check_unit(n)?;
    Ok(frank_molecular_field_unchecked(ops, n, k))
}

pub(crate) fn frank_molecular_field_unchecked(ops: &GridOps, n: &Field<Vec3>, k: &FrankConstants) -> Field<Vec3> {
    let [k1, k2, k3, _] = *k;
    let mut h = ops.laplacian(n).scale(k2);
    if k1 != k2 {
        let grad_div = ops.scalar_gradient(&ops.divergence(n));
        h = h.axpy(k1 - k2, &grad_div);
    }
    if k3 != k2 {
        let g = director_gradient(ops, n);
        let b = n.zip_map(&g, |v, m| m * v);
        let first = g.zip_map(&b, |m, bv| m.transpose() * bv);
        // d_l(n_l b_i) = divergence of the tensor b n^T
        let flux = b.zip_map(n, |bv, v| bv * v.transpose());
        let second = ops.tensor_divergence(&flux);
        h = h.axpy(k3 - k2, &second.axpy(-1.0, &first));
    }
    h
}

/// `dE_F / d(d_j n_k)` at one node, stored at `(k, j)`.
pub fn frank_stress_derivative(n: &Vec3, g: &Mat3, k: &FrankConstants) -> Mat3 {
    let [k1, k2, k3, k4] = *k;
    let div = g.trace();
    let b = g * n;
    Mat3::from_fn(|kk, j| {
        let delta = if kk == j { 1.0 } else { 0.0 };
        k1 * delta * div + k2 * (g[(kk, j)] - g[(j, kk)] - n[j] * b[kk])
            + k3 * n[j] * b[kk]
            + (k2 + k4) * (g[(j, kk)] - delta * div)
    })
}

/// `sigma_ij = -(dE_F/d(d_j n_k)) d_i n_k`.
pub fn ericksen_stress(ops: &GridOps, n: &Field<Vec3>, k: &FrankConstants) -> Field<Mat3> {
    let g = director_gradient(ops, n);
    n.zip_map(&g, |v, m| {
        let p = frank_stress_derivative(v, m, k);
        // sigma_ij = -sum_k P_kj G_ki = -(G^T P)_ij
        -(m.transpose() * p)
    })
}
