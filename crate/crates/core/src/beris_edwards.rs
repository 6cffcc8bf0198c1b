//! Time integration of the epsilon-scaled Beris-Edwards system on a periodic box.
//!
//! The Q update is first-order IMEX: the elastic operator and a linear
//! stabilization `(sigma/(Gamma eps)) (Q_new - Q_old)` are implicit and solved
//! exactly per Fourier mode; the bulk force and all transport and coupling
//! terms are explicit. The velocity update is a projection step with
//! implicit viscosity.

use serde::{Deserialize, Serialize};

use crate::coefficients::MaterialParams;
use crate::error::{Error, Result};
use crate::fields::elastic::{distortion_stress, elastic_operator, landau_energy_with, molecular_field_with, solve_elastic_shifted};
use crate::fields::{Field, GridOps, QField, Scheme};
use crate::fluid::{divergence_norms, project_step, skew_advection, strain_vorticity};
use crate::qtensor::{bulk_gradient, s_coupling, BulkParams, Mat3, QTensor, Vec3};

#[derive(Clone, Debug, PartialEq)]
pub struct BEState {
    pub t: f64,
    pub step: u64,
    pub v: Field<Vec3>,
    pub p: Field<f64>,
    pub q: QField,
}

impl BEState {
    /// State at rest with the given Q field.
    pub fn at_rest(q: QField) -> Self {
        let grid = *q.grid();
        BEState { t: 0.0, step: 0, v: Field::zeros(grid), p: Field::zeros(grid), q }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BEStepConfig {
    pub dt: f64,
    /// Stabilization constant; `None` selects `a + b s + 3 c s^2`.
    pub sigma_split: Option<f64>,
    pub scheme: Scheme,
    /// Freeze `v = 0` and evolve Q only.
    pub gradient_flow_only: bool,
    pub cfl_safety: f64,
    /// Bulk stiffness bound used by the time-step check; `None` uses the
    /// default stabilization constant.
    pub lambda_bulk: Option<f64>,
    /// Apply the two-thirds rule to explicit transport and stress terms.
    pub dealias: bool,
}

impl Default for BEStepConfig {
    fn default() -> Self {
        BEStepConfig {
            dt: 1e-3,
            sigma_split: None,
            scheme: Scheme::Central2,
            gradient_flow_only: false,
            cfl_safety: 0.5,
            lambda_bulk: None,
            dealias: false,
        }
    }
}

/// `a + b s + 3 c s^2`, a bound on the bulk Hessian near the ground state.
pub fn default_bulk_stiffness(bulk: &BulkParams) -> f64 {
    bulk.a + bulk.b * bulk.s + 3.0 * bulk.c * bulk.s * bulk.s
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BEEnergy {
    pub kinetic: f64,
    pub bulk: f64,
    pub elastic: f64,
    pub total: f64,
}

/// Beris-Edwards solver bound to one grid, parameter set and step configuration.
#[derive(Clone, Debug)]
pub struct BESolver {
    ops: GridOps,
    params: MaterialParams,
    bulk: BulkParams,
    cfg: BEStepConfig,
    sigma: f64,
    lambda: f64,
}

impl BESolver {
    pub fn new(ops: GridOps, params: MaterialParams, cfg: BEStepConfig) -> Result<Self> {
        params.validate()?;
        let bulk = params.bulk()?;
        if !(cfg.dt > 0.0 && cfg.dt.is_finite()) {
            return Err(Error::InvalidInput(format!("time step must be positive, got {}", cfg.dt)));
        }
        if !(cfg.cfl_safety > 0.0) {
            return Err(Error::InvalidInput("cfl_safety must be positive".into()));
        }
        let ops = if ops.scheme() == cfg.scheme { ops } else { ops.with_scheme(cfg.scheme) };
        let sigma = cfg.sigma_split.unwrap_or_else(|| default_bulk_stiffness(&bulk));
        if !(sigma >= 0.0) {
            return Err(Error::InvalidInput("sigma_split must be nonnegative".into()));
        }
        let lambda = cfg.lambda_bulk.unwrap_or_else(|| default_bulk_stiffness(&bulk));
        let solver = BESolver { ops, params, bulk, cfg, sigma, lambda };
        solver.check_bulk_step()?;
        Ok(solver)
    }

    pub fn ops(&self) -> &GridOps {
        &self.ops
    }

    pub fn params(&self) -> &MaterialParams {
        &self.params
    }

    pub fn bulk(&self) -> &BulkParams {
        &self.bulk
    }

    pub fn config(&self) -> &BEStepConfig {
        &self.cfg
    }

    pub fn sigma_split(&self) -> f64 {
        self.sigma
    }

    /// Largest step allowed by the bulk relaxation time, `cfl * Gamma eps / lambda`.
    pub fn bulk_step_limit(&self) -> f64 {
        self.cfg.cfl_safety * self.params.gamma * self.params.epsilon / self.lambda
    }

    fn check_bulk_step(&self) -> Result<()> {
        let limit = self.bulk_step_limit();
        if self.cfg.dt > limit {
            return Err(Error::Cfl(format!(
                "dt = {:.3e} exceeds cfl_safety * Gamma * epsilon / lambda_bulk = {:.3e} (epsilon = {})",
                self.cfg.dt, limit, self.params.epsilon
            )));
        }
        Ok(())
    }

    fn check_advective_step(&self, v: &Field<Vec3>) -> Result<()> {
        let vmax = v.values().iter().map(|u| u.norm()).fold(0.0, f64::max);
        if vmax > 0.0 {
            let limit = self.cfg.cfl_safety * self.ops.grid().min_spacing() / vmax;
            if self.cfg.dt > limit {
                return Err(Error::Cfl(format!(
                    "dt = {:.3e} exceeds cfl_safety * h / max|v| = {:.3e}",
                    self.cfg.dt, limit
                )));
            }
        }
        Ok(())
    }

    pub fn molecular_field(&self, q: &QField) -> QField {
        molecular_field_with(&self.ops, q, &self.params, &self.bulk)
    }

    /// `sigma_s + sigma_a + sigma_d` with `sigma_s = eta D - S_Q(H)`,
    /// `sigma_a = Q H - H Q` and the distortion stress of `(Q, Q)`.
    pub fn assemble_stresses(&self, state: &BEState) -> Result<Field<Mat3>> {
        let (d, _) = strain_vorticity(&self.ops, &state.v);
        let h = self.molecular_field(&state.q);
        self.stresses_from(&state.q, &d, &h)
    }

    fn stresses_from(&self, q: &QField, d: &Field<Mat3>, h: &QField) -> Result<Field<Mat3>> {
        let p = &self.params;
        let sd = distortion_stress(&self.ops, q, q, p.l1, p.l2, p.l3)?;
        let data = (0..q.len())
            .map(|i| {
                let (qi, hi) = (q.values()[i], h.values()[i]);
                let (qm, hm) = (qi.to_matrix(), hi.to_matrix());
                let symmetric = p.eta * d.values()[i] - s_coupling(&qi, &hi, p.xi).to_matrix();
                symmetric + (qm * hm - hm * qm) + sd.values()[i]
            })
            .collect();
        Field::from_vec(*self.ops.grid(), data)
    }

    /// `(1/Gamma) H + S_Q(D) - v . grad Q - (Q W - W Q)`.
    pub fn q_rhs(&self, state: &BEState) -> QField {
        let (d, w) = strain_vorticity(&self.ops, &state.v);
        let h = self.molecular_field(&state.q);
        let grads = self.ops.gradient(&state.q);
        let xi = self.params.xi;
        let inv_gamma = 1.0 / self.params.gamma;
        let data = (0..state.q.len())
            .map(|i| {
                let q = state.q.values()[i];
                let u = state.v.values()[i];
                let transport: QTensor = (0..3).map(|a| u[a] * grads[a].values()[i]).sum();
                let dm = QTensor::from_matrix(&d.values()[i]);
                let qm = q.to_matrix();
                let wm = w.values()[i];
                inv_gamma * h.values()[i] + s_coupling(&q, &dm, xi) - transport
                    - QTensor::from_matrix(&(qm * wm - wm * qm))
            })
            .collect();
        Field::from_vec(*self.ops.grid(), data).expect("same grid")
    }

    /// Explicit part of the Q equation other than the bulk force:
    /// `S_Q(D) - div(v Q) - (Q W - W Q)`.
    fn q_transport(&self, q: &QField, v: &Field<Vec3>, d: &Field<Mat3>, w: &Field<Mat3>) -> QField {
        let xi = self.params.xi;
        let mut out = q.zip_map(d, |qi, di| s_coupling(qi, &QTensor::from_matrix(di), xi));
        let rot = q.zip_map(w, |qi, wi| {
            let qm = qi.to_matrix();
            QTensor::from_matrix(&(qm * wi - wi * qm))
        });
        out = out.axpy(-1.0, &rot);
        for a in 0..self.ops.grid().dim() {
            let flux = q.zip_map(v, |qi, u| u[a] * *qi);
            out = out.axpy(-1.0, &self.ops.deriv(&flux, a));
        }
        if self.cfg.dealias {
            out = self.ops.dealias(&out);
        }
        out
    }

    pub fn step(&self, state: &mut BEState) -> Result<()> {
        let p = &self.params;
        let dt = self.cfg.dt;
        let full = !self.cfg.gradient_flow_only;
        if full {
            self.check_advective_step(&state.v)?;
        }
        let tau = dt / (p.gamma * p.epsilon);
        let alpha = 1.0 + self.sigma * tau;

        let (d, w) = if full { strain_vorticity(&self.ops, &state.v) } else { (Field::zeros(*self.ops.grid()), Field::zeros(*self.ops.grid())) };
        let mut explicit = state.q.map(|q| alpha * *q - tau * bulk_gradient(q, &self.bulk));
        if full {
            let transport = self.q_transport(&state.q, &state.v, &d, &w);
            explicit = explicit.axpy(dt, &transport);
        }
        let l23 = p.l2 + p.l3;
        let beta = dt / p.gamma;
        let new_q = self.ops.map_spectral(&explicit, |idx, r| {
            solve_elastic_shifted(&r, &self.ops.kappa(idx), alpha, beta, p.l1, l23)
        });

        if full {
            let h = self.molecular_field(&state.q);
            let sigma = self.stresses_from(&state.q, &d, &h)?;
            let viscous = d.map(|m| p.eta * m);
            let mut forcing = self.ops.tensor_divergence(&sigma.axpy(-1.0, &viscous));
            forcing = forcing.axpy(1.0, &skew_advection(&self.ops, &state.v));
            let (v, pr) = project_step(&self.ops, &state.v, &forcing, dt, 0.5 * p.eta, self.cfg.dealias);
            state.v = v;
            state.p = pr;
        }
        state.q = new_q;
        state.step += 1;
        state.t += dt;
        if !(state.q.is_finite() && state.v.is_finite()) {
            return Err(Error::SolverAbort { step: state.step, reason: "non-finite values in the state".into() });
        }
        Ok(())
    }

    pub fn energy(&self, state: &BEState) -> BEEnergy {
        let kinetic = 0.5 * self.ops.inner(&state.v, &state.v);
        let e = landau_energy_with(&self.ops, &state.q, &self.params, &self.bulk);
        BEEnergy { kinetic, bulk: e.bulk, elastic: e.elastic, total: kinetic + e.total }
    }

    /// Grid L2 norm of `div v`.
    pub fn divergence_norm(&self, state: &BEState) -> f64 {
        divergence_norms(&self.ops, &state.v).0
    }

    /// `L(Q)` with this solver's constants and scheme.
    pub fn elastic_operator(&self, q: &QField) -> QField {
        elastic_operator(&self.ops, q, self.params.l1, self.params.l2, self.params.l3)
    }
}
