//! Incompressible velocity helpers shared by both solvers.

use rustfft::num_complex::Complex64;

use crate::fields::{Field, GridOps};
use crate::qtensor::{Mat3, Vec3};

/// Symmetric and antisymmetric parts of the velocity gradient `G_ij = d_j v_i`.
pub fn strain_vorticity(ops: &GridOps, v: &Field<Vec3>) -> (Field<Mat3>, Field<Mat3>) {
    let g = ops.vector_gradient(v);
    let d = g.map(|m| 0.5 * (m + m.transpose()));
    let w = g.map(|m| 0.5 * (m - m.transpose()));
    (d, w)
}

/// `-(v . grad v + div(v v^T)) / 2`.
pub fn skew_advection(ops: &GridOps, v: &Field<Vec3>) -> Field<Vec3> {
    let g = ops.vector_gradient(v);
    let adv = g.zip_map(v, |m, u| m * u);
    let flux = v.map(|u| u * u.transpose());
    let cons = ops.tensor_divergence(&flux);
    adv.zip_map(&cons, |a, c| -0.5 * (a + c))
}

/// `(||div v||, ||grad v||)` in the grid L2 norm.
pub fn divergence_norms(ops: &GridOps, v: &Field<Vec3>) -> (f64, f64) {
    let div = ops.divergence(v);
    let grad = ops.vector_gradient(v);
    (ops.norm_l2(&div), ops.norm_l2(&grad))
}

/// One projection step for `v_t = F + nu_half * Delta v - grad p`, with the
/// viscous term implicit.
///
/// Returns the new velocity and the zero-mean pressure. The mean velocity is
/// kept at its old value, and modes whose effective wavevector vanishes
/// (other than the mean) are dropped since no operator can act on them.
pub fn project_step(
    ops: &GridOps,
    v: &Field<Vec3>,
    forcing: &Field<Vec3>,
    dt: f64,
    nu_half: f64,
    dealias: bool,
) -> (Field<Vec3>, Field<f64>) {
    let grid = *ops.grid();
    let rhs = v.axpy(dt, forcing);
    let mut spec = ops.to_spectral(&rhs);
    let old_mean: Vec<Complex64> = ops.to_spectral(v).iter().map(|s| s[0]).collect();
    let mut p_spec = vec![Complex64::new(0.0, 0.0); grid.node_count()];
    for idx in 0..grid.node_count() {
        if idx == 0 {
            for c in 0..3 {
                spec[c][0] = old_mean[c];
            }
            continue;
        }
        let k = ops.kappa(idx);
        let k2 = k.norm_squared();
        if k2 == 0.0 || (dealias && !ops.dealias_keeps(idx)) {
            for s in spec.iter_mut() {
                s[idx] = Complex64::new(0.0, 0.0);
            }
            continue;
        }
        let kw = (0..3).fold(Complex64::new(0.0, 0.0), |acc, c| acc + spec[c][idx] * k[c]);
        // grad p = (w - P w)/dt gives i k p = k (k . w)/(|k|^2 dt)
        p_spec[idx] = Complex64::new(0.0, -1.0) * kw / (k2 * dt);
        let damp = 1.0 / (1.0 + dt * nu_half * k2);
        for c in 0..3 {
            spec[c][idx] = (spec[c][idx] - kw * (k[c] / k2)) * damp;
        }
    }
    let new_v = ops.from_spectral(spec);
    let p = Field::from_vec(grid, ops.ifft(p_spec)).expect("same grid");
    (new_v, p)
}
