//! Time integration of the Ericksen-Leslie director model on a periodic box.
//!
//! The torque balance `n x (h - gamma1 N - gamma2 D n) = 0` is solved for the
//! director rate by projecting onto the tangent space of the sphere. The
//! director moves by forward Euler followed by renormalization; the velocity
//! by a projection step with the isotropic viscosity `alpha4 D` implicit.

use serde::{Deserialize, Serialize};

use crate::coefficients::DerivedCoefficients;
use crate::error::{Error, Result};
use crate::fields::frank::{check_unit, director_gradient, ericksen_stress, frank_density, frank_molecular_field_unchecked};
use crate::fields::{Field, GridOps, Scheme};
use crate::fluid::{project_step, skew_advection, strain_vorticity};
use crate::qtensor::{Mat3, Vec3};

/// Largest tolerated change of `|n|` in one step before renormalization.
pub const MAX_NORM_DRIFT: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct ELState {
    pub t: f64,
    pub step: u64,
    pub v: Field<Vec3>,
    pub p: Field<f64>,
    pub n: Field<Vec3>,
}

impl ELState {
    pub fn at_rest(n: Field<Vec3>) -> Self {
        let grid = *n.grid();
        ELState { t: 0.0, step: 0, v: Field::zeros(grid), p: Field::zeros(grid), n }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ELStepConfig {
    pub dt: f64,
    pub scheme: Scheme,
    /// Freeze `v = 0` and evolve the director only.
    pub gradient_flow_only: bool,
    pub cfl_safety: f64,
    pub dealias: bool,
}

impl Default for ELStepConfig {
    fn default() -> Self {
        ELStepConfig { dt: 1e-4, scheme: Scheme::Central2, gradient_flow_only: false, cfl_safety: 0.5, dealias: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ELEnergy {
    pub kinetic: f64,
    pub frank: f64,
    pub total: f64,
}

/// Quantities derived from one state that the step, the stress and the
/// energy law all need.
struct Kinematics {
    d: Field<Mat3>,
    h: Field<Vec3>,
    n_t: Field<Vec3>,
    corot: Field<Vec3>,
}

#[derive(Clone, Debug)]
pub struct ELSolver {
    ops: GridOps,
    coeffs: DerivedCoefficients,
    cfg: ELStepConfig,
}

impl ELSolver {
    pub fn new(ops: GridOps, coeffs: DerivedCoefficients, cfg: ELStepConfig) -> Result<Self> {
        if !(coeffs.gamma1 > 0.0) {
            return Err(Error::InvalidInput(format!(
                "rotational viscosity gamma1 must be positive, got {}",
                coeffs.gamma1
            )));
        }
        if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
            return Err(Error::InvalidInput(format!("time step must be positive, got {}", cfg.dt)));
        }
        let ops = if ops.scheme() == cfg.scheme { ops } else { ops.with_scheme(cfg.scheme) };
        Ok(ELSolver { ops, coeffs, cfg })
    }

    pub fn ops(&self) -> &GridOps {
        &self.ops
    }

    pub fn coefficients(&self) -> &DerivedCoefficients {
        &self.coeffs
    }

    pub fn config(&self) -> &ELStepConfig {
        &self.cfg
    }

    fn kinematics(&self, state: &ELState) -> Kinematics {
        let (d, w) = strain_vorticity(&self.ops, &state.v);
        let h = frank_molecular_field_unchecked(&self.ops, &state.n, &self.coeffs.frank());
        let grad_n = director_gradient(&self.ops, &state.n);
        let g1 = self.coeffs.gamma1;
        let g2 = self.coeffs.gamma2;
        let mut n_t = Field::zeros(*self.ops.grid());
        let mut corot = Field::zeros(*self.ops.grid());
        for i in 0..state.n.len() {
            let n = state.n.values()[i];
            let u = state.v.values()[i];
            let (di, wi) = (d.values()[i], w.values()[i]);
            let transport = grad_n.values()[i] * u;
            let raw = wi * n - transport + (h.values()[i] - g2 * (di * n)) / g1;
            let rate = raw - n.dot(&raw) * n;
            n_t.values_mut()[i] = rate;
            corot.values_mut()[i] = rate + transport - wi * n;
        }
        Kinematics { d, h, n_t, corot }
    }

    /// `n_t = (I - nn)(W n - v . grad n + (h - gamma2 D n)/gamma1)`.
    pub fn director_rhs(&self, state: &ELState) -> Result<Field<Vec3>> {
        check_unit(&state.n)?;
        Ok(self.kinematics(state).n_t)
    }

    /// `N = n_t + v . grad n - W n`.
    pub fn corotational_rate(&self, state: &ELState, n_t: &Field<Vec3>) -> Field<Vec3> {
        corotational_rate(&self.ops, state, n_t)
    }

    pub fn leslie_stress(&self, state: &ELState, corot: &Field<Vec3>) -> Field<Mat3> {
        let (d, _) = strain_vorticity(&self.ops, &state.v);
        leslie_stress_from(&state.n, corot, &d, &self.coeffs)
    }

    pub fn ericksen_stress(&self, state: &ELState) -> Field<Mat3> {
        ericksen_stress(&self.ops, &state.n, &self.coeffs.frank())
    }

    pub fn step(&self, state: &mut ELState) -> Result<()> {
        let dt = self.cfg.dt;
        let full = !self.cfg.gradient_flow_only;
        if full {
            let vmax = state.v.values().iter().map(|u| u.norm()).fold(0.0, f64::max);
            if vmax > 0.0 && dt > self.cfg.cfl_safety * self.ops.grid().min_spacing() / vmax {
                return Err(Error::Cfl(format!(
                    "dt = {dt:.3e} exceeds cfl_safety * h / max|v| = {:.3e}",
                    self.cfg.cfl_safety * self.ops.grid().min_spacing() / vmax
                )));
            }
        }
        let k = self.kinematics(state);

        if full {
            let leslie = leslie_stress_from(&state.n, &k.corot, &k.d, &self.coeffs);
            let ericksen = self.ericksen_stress(state);
            let a4 = self.coeffs.alpha4;
            let explicit_stress = Field::from_vec(
                *self.ops.grid(),
                (0..state.n.len())
                    .map(|i| leslie.values()[i] - a4 * k.d.values()[i] + ericksen.values()[i])
                    .collect(),
            )?;
            let mut forcing = self.ops.tensor_divergence(&explicit_stress);
            forcing = forcing.axpy(1.0, &skew_advection(&self.ops, &state.v));
            let (v, p) = project_step(&self.ops, &state.v, &forcing, dt, 0.5 * a4, self.cfg.dealias);
            state.v = v;
            state.p = p;
        }

        let mut worst = 0.0f64;
        for (n, rate) in state.n.values_mut().iter_mut().zip(k.n_t.values()) {
            let moved = *n + dt * rate;
            let len = moved.norm();
            worst = worst.max((len - 1.0).abs());
            *n = moved / len;
        }
        state.step += 1;
        state.t += dt;
        if !(state.n.is_finite() && state.v.is_finite()) {
            return Err(Error::SolverAbort { step: state.step, reason: "non-finite values in the state".into() });
        }
        if worst > MAX_NORM_DRIFT {
            return Err(Error::SolverAbort {
                step: state.step,
                reason: format!("director length drifted by {worst:.3e} in one step (limit {MAX_NORM_DRIFT:.0e})"),
            });
        }
        Ok(())
    }

    pub fn energy(&self, state: &ELState) -> ELEnergy {
        let kinetic = 0.5 * self.ops.inner(&state.v, &state.v);
        let g = director_gradient(&self.ops, &state.n);
        let k = self.coeffs.frank();
        let dens = state.n.zip_map(&g, |n, m| frank_density(n, m, &k));
        let frank = self.ops.integrate_scalar(&dens);
        ELEnergy { kinetic, frank, total: kinetic + frank }
    }

    /// Dissipation rate
    /// `beta1 (nn:D)^2 + beta2 |D|^2 + beta3 |D n|^2 + |n x h|^2 / gamma1`
    /// integrated over the box.
    pub fn dissipation(&self, state: &ELState) -> f64 {
        let k = self.kinematics(state);
        let dens: Vec<f64> = (0..state.n.len())
            .map(|i| {
                let n = state.n.values()[i];
                dissipation_density(&n, &k.d.values()[i], &k.h.values()[i], &self.coeffs)
            })
            .collect();
        let field = Field::from_vec(*self.ops.grid(), dens).expect("same grid");
        self.ops.integrate_scalar(&field)
    }
}

/// `N = n_t + v . grad n - W n`.
pub fn corotational_rate(ops: &GridOps, state: &ELState, n_t: &Field<Vec3>) -> Field<Vec3> {
    let (_, w) = strain_vorticity(ops, &state.v);
    let g = director_gradient(ops, &state.n);
    let data = (0..state.n.len())
        .map(|i| {
            let n = state.n.values()[i];
            n_t.values()[i] + g.values()[i] * state.v.values()[i] - w.values()[i] * n
        })
        .collect();
    Field::from_vec(*ops.grid(), data).expect("same grid")
}

/// `alpha1 (nn:D) nn + alpha2 n N + alpha3 N n + alpha4 D + alpha5 nn D + alpha6 D nn`.
pub fn leslie_stress_node(n: &Vec3, corot: &Vec3, d: &Mat3, c: &DerivedCoefficients) -> Mat3 {
    let nn = n * n.transpose();
    let nn_d = nn.dot(d);
    c.alpha1 * nn_d * nn
        + c.alpha2 * (n * corot.transpose())
        + c.alpha3 * (corot * n.transpose())
        + c.alpha4 * d
        + c.alpha5 * (nn * d)
        + c.alpha6 * (d * nn)
}

fn leslie_stress_from(n: &Field<Vec3>, corot: &Field<Vec3>, d: &Field<Mat3>, c: &DerivedCoefficients) -> Field<Mat3> {
    let data = (0..n.len())
        .map(|i| leslie_stress_node(&n.values()[i], &corot.values()[i], &d.values()[i], c))
        .collect();
    Field::from_vec(*n.grid(), data).expect("same grid")
}

/// Pointwise dissipation integrand.
pub fn dissipation_density(n: &Vec3, d: &Mat3, h: &Vec3, c: &DerivedCoefficients) -> f64 {
    let nn_d = n.dot(&(d * n));
    let dn = d * n;
    c.beta1 * nn_d * nn_d + c.beta2 * d.norm_squared() + c.beta3 * dn.norm_squared()
        + n.cross(h).norm_squared() / c.gamma1
}

/// One row of the energy-law check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyLawRow {
    pub step: u64,
    pub t: f64,
    pub kinetic: f64,
    pub frank: f64,
    /// `-(E(t+dt) - E(t-dt)) / (2 dt)`.
    pub lhs: f64,
    /// Dissipation integral at `t`.
    pub rhs: f64,
    pub mismatch: f64,
}

/// A logged state for [`el_energy_law`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergySample {
    pub step: u64,
    pub t: f64,
    pub kinetic: f64,
    pub frank: f64,
    pub dissipation: f64,
}

impl ELSolver {
    pub fn sample(&self, state: &ELState) -> EnergySample {
        let e = self.energy(state);
        EnergySample { step: state.step, t: state.t, kinetic: e.kinetic, frank: e.frank, dissipation: self.dissipation(state) }
    }
}

/// Compares the centered time difference of kinetic plus Frank energy with
/// the dissipation integral at each interior sample. Samples must be at a
/// uniform spacing.
pub fn el_energy_law(samples: &[EnergySample]) -> Result<Vec<EnergyLawRow>> {
    if samples.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "energy-law check needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    let spacing = samples[1].t - samples[0].t;
    for w in samples.windows(2) {
        let dt = w[1].t - w[0].t;
        if !(dt > 0.0) || (dt - spacing).abs() > 1e-9 * spacing.abs().max(1e-300) {
            return Err(Error::InvalidInput("energy-law samples must be uniformly spaced in time".into()));
        }
    }
    Ok(samples
        .windows(3)
        .map(|w| {
            let e = |s: &EnergySample| s.kinetic + s.frank;
            let lhs = -(e(&w[2]) - e(&w[0])) / (w[2].t - w[0].t);
            let rhs = w[1].dissipation;
            let scale = lhs.abs().max(rhs.abs());
            let mismatch = if scale > 0.0 { (lhs - rhs).abs() / scale } else { 0.0 };
            EnergyLawRow { step: w[1].step, t: w[1].t, kinetic: w[1].kinetic, frank: w[1].frank, lhs, rhs, mismatch }
        })
        .collect())
}
