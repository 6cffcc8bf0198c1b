//! Leading-order expansion of Beris-Edwards solutions around an
//! Ericksen-Leslie director field, and the epsilon-convergence experiment.
//!
//! Only the first corrector component outside the kernel of the linearized
//! bulk operator is built, so the measurable rate is
//! `||Q_eps - Q0|| = O(eps)`; higher correctors are not constructed.

use serde::{Deserialize, Serialize};

use crate::beris_edwards::{BEState, BEStepConfig, BESolver};
use crate::coefficients::{derive_coefficients, DerivedCoefficients, MaterialParams};
use crate::error::{Error, Result};
use crate::ericksen_leslie::{corotational_rate, ELSolver, ELState, ELStepConfig};
use crate::fields::elastic::elastic_operator;
use crate::fields::frank::check_unit;
use crate::fields::{Field, GridOps, QField, Scheme};
use crate::fluid::strain_vorticity;
use crate::qtensor::{inverse_h_unchecked, linearized_h, project_in, project_out, s_coupling, BulkParams, Director, QTensor, Vec3};

/// Default relative tolerance on the kernel component of the corrector source.
pub const DEFAULT_TOL_CONSISTENCY: f64 = 1e-6;

/// `s (n n - I/3)` at every node.
pub fn q0_of_director(n: &Field<Vec3>, s: f64) -> Result<QField> {
    check_unit(n)?;
    Ok(n.map(|v| QTensor::uniaxial_raw(s, v)))
}

/// Leading-order expansion data at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionData {
    pub q0: QField,
    pub q1_perp: QField,
    pub h0: QField,
    pub n: Field<Vec3>,
    pub v0: Field<Vec3>,
    /// Grid L2 norm of the kernel component of the corrector source,
    /// relative to the norms of its two parts.
    pub kernel_residual: f64,
}

fn director_at(n: &Vec3) -> Director {
    Director::from_unit_unchecked(*n)
}

/// Builds `Q0`, the first corrector outside the kernel and
/// `H0 = -Gamma s (N n + n N) + Gamma S_Q0(D0)`.
///
/// `n_t` must come from the director equation so that the torque balance
/// holds; its kernel component is what cancels the one of `-L(Q0) + H0`.
pub fn leading_corrector(
    ops: &GridOps,
    n: &Field<Vec3>,
    v0: &Field<Vec3>,
    p: &MaterialParams,
    d: &DerivedCoefficients,
    n_t: &Field<Vec3>,
    tol_consistency: f64,
) -> Result<ExpansionData> {
    let bulk = p.bulk()?;
    let s = d.s;
    let q0 = q0_of_director(n, s)?;
    let (d0, _) = strain_vorticity(ops, v0);
    let state = ELState { t: 0.0, step: 0, v: v0.clone(), p: Field::zeros(*ops.grid()), n: n.clone() };
    let corot = corotational_rate(ops, &state, n_t);
    let lq0 = elastic_operator(ops, &q0, p.l1, p.l2, p.l3);

    let mut h0 = Field::zeros(*ops.grid());
    for i in 0..n.len() {
        let nv = n.values()[i];
        let dm = QTensor::from_matrix(&d0.values()[i]);
        h0.values_mut()[i] = -p.gamma * s * QTensor::sym_outer(&corot.values()[i], &nv)
            + p.gamma * s_coupling(&q0.values()[i], &dm, p.xi);
    }
    let source = h0.axpy(-1.0, &lq0);
    let kernel = source.zip_map(n, |a, nv| project_in(a, &director_at(nv)));
    let scale = ops.norm_l2(&lq0) + ops.norm_l2(&h0);
    let residual = ops.norm_l2(&kernel);
    let relative = if scale > 0.0 { residual / scale } else { 0.0 };
    if relative > tol_consistency {
        return Err(Error::Consistency(format!(
            "director field does not satisfy the EL torque balance (kernel component {relative:.3e} relative, tolerance {tol_consistency:.1e})"
        )));
    }
    let mut q1 = Field::zeros(*ops.grid());
    for i in 0..n.len() {
        let dir = director_at(&n.values()[i]);
        let out = project_out(&source.values()[i], &dir);
        q1.values_mut()[i] = inverse_h_unchecked(&out, &bulk, &dir)?;
    }
    Ok(ExpansionData { q0, q1_perp: q1, h0, n: n.clone(), v0: v0.clone(), kernel_residual: relative })
}

/// Nodewise `H_n(Q1) + L(Q0) - H0`, which vanishes for consistent data.
pub fn corrector_identity_residual(ops: &GridOps, data: &ExpansionData, p: &MaterialParams, bulk: &BulkParams) -> QField {
    let lq0 = elastic_operator(ops, &data.q0, p.l1, p.l2, p.l3);
    let mut out = Field::zeros(*ops.grid());
    for i in 0..data.n.len() {
        let dir = director_at(&data.n.values()[i]);
        out.values_mut()[i] = linearized_h(&data.q1_perp.values()[i], bulk, &dir) + lq0.values()[i] - data.h0.values()[i];
    }
    out
}

/// Matching initial states for both models.
#[derive(Clone, Debug)]
pub struct WellPrepared {
    pub be: BEState,
    pub el: ELState,
    pub expansion: ExpansionData,
}

/// `Q = Q0 + eps Q1_perp` and `v = v0` for the Beris-Edwards model,
/// `(n0, v0)` for the Ericksen-Leslie model.
pub fn well_prepared_initial_data(
    ops: &GridOps,
    n0: &Field<Vec3>,
    v0: &Field<Vec3>,
    p: &MaterialParams,
    epsilon: f64,
) -> Result<WellPrepared> {
    let d = derive_coefficients(p)?;
    let el = ELState { t: 0.0, step: 0, v: v0.clone(), p: Field::zeros(*ops.grid()), n: n0.clone() };
    let el_solver = ELSolver::new(ops.clone(), d, ELStepConfig { scheme: ops.scheme(), ..Default::default() })?;
    let n_t = el_solver.director_rhs(&el)?;
    let expansion = leading_corrector(ops, n0, v0, p, &d, &n_t, DEFAULT_TOL_CONSISTENCY)?;
    let q = expansion.q0.axpy(epsilon, &expansion.q1_perp);
    let be = BEState { t: 0.0, step: 0, v: v0.clone(), p: Field::zeros(*ops.grid()), q };
    Ok(WellPrepared { be, el, expansion })
}

/// The three groups of the remainder energy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RemainderEnergy {
    /// `int |v|^2 + (1/eps) H_n^eps(Q):Q + |Q|^2`.
    pub g0: f64,
    /// `eps^2 int |grad v|^2 + (1/eps) H_n^eps(grad Q):grad Q`.
    pub g1: f64,
    /// `eps^4 int |Delta v|^2 + (1/eps) H_n^eps(Delta Q):Delta Q`.
    pub g2: f64,
    pub total: f64,
    /// Smallest of the three `(1/eps) H_n^eps` terms (unweighted by powers
    /// of eps); negative values mean the operator was not positive on the
    /// data.
    pub min_operator_term: f64,
}

impl RemainderEnergy {
    pub fn operator_negative(&self) -> bool {
        self.min_operator_term < 0.0
    }
}

/// Remainder energy with `H_n^eps = H_n + eps L` and `H_n` the bulk
/// linearization around the uniaxial state along `n`.
pub fn remainder_energy(
    ops: &GridOps,
    qr: &QField,
    vr: &Field<Vec3>,
    n: &Field<Vec3>,
    p: &MaterialParams,
    epsilon: f64,
) -> Result<RemainderEnergy> {
    check_unit(n)?;
    let bulk = p.bulk()?;
    let op_term = |q: &QField| -> f64 {
        let hq = q.zip_map(n, |x, nv| linearized_h(x, &bulk, &director_at(nv)));
        let lq = elastic_operator(ops, q, p.l1, p.l2, p.l3);
        ops.inner(&hq, q) / epsilon + ops.inner(&lq, q)
    };
    let t0 = op_term(qr);
    let g0 = ops.inner(vr, vr) + t0 + ops.inner(qr, qr);

    let dq = ops.gradient(qr);
    let gv = ops.vector_gradient(vr);
    let t1: f64 = dq.iter().map(op_term).sum();
    let g1 = epsilon.powi(2) * (ops.inner(&gv, &gv) + t1);

    let lap_q = ops.laplacian(qr);
    let lap_v = ops.laplacian(vr);
    let t2 = op_term(&lap_q);
    let g2 = epsilon.powi(4) * (ops.inner(&lap_v, &lap_v) + t2);

    Ok(RemainderEnergy { g0, g1, g2, total: g0 + g1 + g2, min_operator_term: t0.min(t1).min(t2) })
}

/// Whether velocity evolves in the convergence experiment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StudyMode {
    #[default]
    GradientFlow,
    Full,
}

/// Settings of the epsilon-convergence experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    /// Sorted descending.
    pub epsilons: Vec<f64>,
    pub t_final: f64,
    /// Number of equal intervals between sample times on `[0, t_final]`.
    pub samples: usize,
    pub mode: StudyMode,
    pub scheme: Scheme,
    /// Beris-Edwards step is `be_dt_scale * eps^2`, rounded down to hit the
    /// sample times exactly.
    pub be_dt_scale: f64,
    pub el_dt: f64,
    pub cfl_safety: f64,
    pub sigma_split: Option<f64>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            epsilons: vec![0.2, 0.1, 0.05, 0.025],
            t_final: 1.0,
            samples: 10,
            mode: StudyMode::GradientFlow,
            scheme: Scheme::Spectral,
            be_dt_scale: 0.1,
            el_dt: 1e-4,
            cfl_safety: 0.5,
            sigma_split: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    pub epsilon: f64,
    pub max_err_l2: f64,
    pub err_at_t: f64,
    pub err_at_0: f64,
    pub be_dt: f64,
    pub be_steps: u64,
    /// Remainder energy of `(Q_eps - Q0 - eps Q1_perp) / eps^3` at the final time.
    pub efrak: RemainderEnergy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub rows: Vec<StudyRow>,
    pub sample_times: Vec<f64>,
    /// Least-squares slope of `log max_err_l2` against `log eps`; `None`
    /// for fewer than two epsilons.
    pub slope: Option<f64>,
    pub warnings: Vec<String>,
}

fn steps_per_interval(interval: f64, dt_target: f64) -> u64 {
    (interval / dt_target * (1.0 - 1e-12)).ceil().max(1.0) as u64
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

fn tag_epsilon(e: Error, epsilon: f64) -> Error {
    match e {
        Error::SolverAbort { step, reason } => Error::SolverAbort { step, reason: format!("epsilon = {epsilon}: {reason}") },
        Error::Consistency(m) => Error::Consistency(format!("epsilon = {epsilon}: {m}")),
        other => other,
    }
}

/// Runs the Ericksen-Leslie model once and the Beris-Edwards model once per
/// epsilon from well-prepared data, comparing `Q_eps(t)` with
/// `Q0(n_EL(t))` at the sample times.
pub fn convergence_study(
    ops: &GridOps,
    n0: &Field<Vec3>,
    v0: &Field<Vec3>,
    p: &MaterialParams,
    cfg: &StudyConfig,
) -> Result<StudyReport> {
    if cfg.epsilons.is_empty() {
        return Err(Error::InvalidInput("epsilon list is empty".into()));
    }
    if cfg.epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("epsilons must be sorted in descending order".into()));
    }
    if !(cfg.t_final > 0.0) || cfg.samples == 0 {
        return Err(Error::InvalidInput("need t_final > 0 and at least one sample interval".into()));
    }
    let ops = ops.with_scheme(cfg.scheme);
    let gradient_flow = cfg.mode == StudyMode::GradientFlow;
    let v0 = if gradient_flow { Field::zeros(*ops.grid()) } else { v0.clone() };
    let d = derive_coefficients(p)?;
    let interval = cfg.t_final / cfg.samples as f64;
    let sample_times: Vec<f64> = (0..=cfg.samples).map(|k| k as f64 * interval).collect();

    // validate every epsilon before spending time on the reference run
    let mut be_solvers = Vec::new();
    for &eps in &cfg.epsilons {
        let pe = MaterialParams { epsilon: eps, ..*p };
        let per = steps_per_interval(interval, cfg.be_dt_scale * eps * eps);
        let be_cfg = BEStepConfig {
            dt: interval / per as f64,
            sigma_split: cfg.sigma_split,
            scheme: cfg.scheme,
            gradient_flow_only: gradient_flow,
            cfl_safety: cfg.cfl_safety,
            lambda_bulk: None,
            dealias: false,
        };
        be_solvers.push((eps, pe, per, BESolver::new(ops.clone(), pe, be_cfg)?));
    }

    let el_per = steps_per_interval(interval, cfg.el_dt);
    let el_cfg = ELStepConfig {
        dt: interval / el_per as f64,
        scheme: cfg.scheme,
        gradient_flow_only: gradient_flow,
        cfl_safety: cfg.cfl_safety,
        dealias: false,
    };
    let el_solver = ELSolver::new(ops.clone(), d, el_cfg)?;
    let mut el_state = ELState::at_rest(n0.clone());
    el_state.v = v0.clone();
    let mut reference = vec![el_state.clone()];
    for _ in 0..cfg.samples {
        for _ in 0..el_per {
            el_solver.step(&mut el_state)?;
        }
        reference.push(el_state.clone());
    }
    let q_ref: Vec<QField> = reference.iter().map(|st| q0_of_director(&st.n, d.s)).collect::<Result<_>>()?;
    let final_ref = reference.last().expect("at least one sample");
    let final_nt = el_solver.director_rhs(final_ref)?;
    let final_expansion = leading_corrector(&ops, &final_ref.n, &final_ref.v, p, &d, &final_nt, f64::INFINITY)?;

    let results: Vec<Result<StudyRow>> = std::thread::scope(|scope| {
        let handles: Vec<_> = be_solvers
            .iter()
            .map(|(eps, pe, per, solver)| {
                let (ops, q_ref, final_ref, final_expansion) = (&ops, &q_ref, final_ref, &final_expansion);
                let v0 = &v0;
                scope.spawn(move || -> Result<StudyRow> {
                    let eps = *eps;
                    let prepared = well_prepared_initial_data(ops, n0, v0, pe, eps).map_err(|e| tag_epsilon(e, eps))?;
                    let mut state = prepared.be;
                    let mut errs = vec![ops.norm_l2(&state.q.axpy(-1.0, &q_ref[0]))];
                    for q_k in &q_ref[1..] {
                        for _ in 0..*per {
                            solver.step(&mut state).map_err(|e| tag_epsilon(e, eps))?;
                        }
                        errs.push(ops.norm_l2(&state.q.axpy(-1.0, q_k)));
                    }
                    let scale = eps.powi(3);
                    let qr = state
                        .q
                        .axpy(-1.0, &final_expansion.q0)
                        .axpy(-eps, &final_expansion.q1_perp)
                        .scale(1.0 / scale);
                    let vr = state.v.axpy(-1.0, &final_ref.v).scale(1.0 / scale);
                    let efrak = remainder_energy(ops, &qr, &vr, &final_ref.n, pe, eps)?;
                    Ok(StudyRow {
                        epsilon: eps,
                        max_err_l2: errs.iter().cloned().fold(0.0, f64::max),
                        err_at_t: *errs.last().expect("samples"),
                        err_at_0: errs[0],
                        be_dt: solver.config().dt,
                        be_steps: state.step,
                        efrak,
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("convergence worker panicked")).collect()
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    let slope = if rows.len() >= 2 {
        let x: Vec<f64> = rows.iter().map(|r| r.epsilon.ln()).collect();
        let y: Vec<f64> = rows.iter().map(|r| r.max_err_l2.max(f64::MIN_POSITIVE).ln()).collect();
        fit_slope(&x, &y)
    } else {
        warnings.push("a single epsilon was given; no slope can be fitted".to_string());
        None
    };
    for r in &rows {
        if r.efrak.operator_negative() {
            warnings.push(format!(
                "epsilon = {}: the H_n^eps term of the remainder energy is negative ({:.3e})",
                r.epsilon, r.efrak.min_operator_term
            ));
        }
    }
    Ok(StudyReport { rows, sample_times, slope, warnings })
}
