//! Oracle experiments shared by the dynamics tests and the acceptance harness.
#![allow(dead_code)]

use std::f64::consts::PI;

use nematic::beris_edwards::{BEState, BEStepConfig, BESolver};
use nematic::coefficients::{derive_coefficients, MaterialParams};
use nematic::ericksen_leslie::{el_energy_law, ELSolver, ELState, ELStepConfig};
use nematic::fields::{Field, Grid, GridOps, Scheme};
use nematic::qtensor::{uniaxial, Director, QTensor, Vec3};

pub fn grid(n: usize) -> Grid {
    Grid::new_2d(n, n, 1.0, 1.0).unwrap()
}

/// Least-squares slope of `log err` against `log h`.
pub fn observed_order(h: &[f64], err: &[f64]) -> f64 {
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let m = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / m, y.iter().sum::<f64>() / m);
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn planar_director(g: Grid, amp: f64) -> Field<Vec3> {
    Field::from_fn(g, |x| {
        let th = amp * (2.0 * PI * x[0]).sin() * (2.0 * PI * x[1]).cos();
        Vec3::new(th.cos(), th.sin(), 0.0)
    })
}

pub fn taylor_green(g: Grid, u: f64) -> Field<Vec3> {
    Field::from_fn(g, |x| {
        let (sx, cx) = (2.0 * PI * x[0]).sin_cos();
        let (sy, cy) = (2.0 * PI * x[1]).sin_cos();
        Vec3::new(u * sx * cy, -u * cx * sy, 0.0)
    })
}

/// Largest per-step change of a Beris-Edwards and an Ericksen-Leslie
/// equilibrium (uniform uniaxial state, fluid at rest) over `steps` steps.
pub fn equilibrium_drift(steps: usize) -> (f64, f64) {
    let g = grid(16);
    let p = MaterialParams { l2: 0.3, l3: 0.2, xi: 0.6, ..Default::default() };
    let n = Director::normalized(Vec3::new(1.0, 2.0, -0.5)).unwrap();
    let s = p.bulk().unwrap().s;
    let mut be = BEState::at_rest(Field::constant(g, uniaxial(s, &n)));
    let solver = BESolver::new(GridOps::new(g, Scheme::Central2), p, BEStepConfig { dt: 1e-3, ..Default::default() }).unwrap();
    let mut worst_be = 0.0f64;
    for _ in 0..steps {
        let before = be.clone();
        solver.step(&mut be).unwrap();
        let dq = be.q.axpy(-1.0, &before.q).max_abs();
        worst_be = worst_be.max(dq).max(be.v.max_abs());
    }
    let d = derive_coefficients(&p).unwrap();
    let el_solver = ELSolver::new(GridOps::new(g, Scheme::Central2), d, ELStepConfig::default()).unwrap();
    let mut el = ELState::at_rest(Field::constant(g, n.vector()));
    let mut worst_el = 0.0f64;
    for _ in 0..steps {
        let before = el.clone();
        el_solver.step(&mut el).unwrap();
        worst_el = worst_el.max(el.n.axpy(-1.0, &before.n).max_abs()).max(el.v.max_abs());
    }
    (worst_be, worst_el)
}

/// Relative error of the Taylor-Green kinetic energy against
/// `exp(-2 eta (2 pi)^2 t)` at `t_final`, with a uniform director along `z`.
pub fn taylor_green_error(n: usize, dt: f64, t_final: f64) -> f64 {
    let g = grid(n);
    let p = MaterialParams { xi: 0.0, eta: 0.7, ..Default::default() };
    let s = p.bulk().unwrap().s;
    let mut st = BEState::at_rest(Field::constant(g, uniaxial(s, &Director::e_z())));
    st.v = taylor_green(g, 0.5);
    let cfg = BEStepConfig { dt, scheme: Scheme::Spectral, ..Default::default() };
    let solver = BESolver::new(GridOps::new(g, Scheme::Spectral), p, cfg).unwrap();
    let k0 = solver.energy(&st).kinetic;
    let steps = (t_final / dt).round() as usize;
    for _ in 0..steps {
        solver.step(&mut st).unwrap();
    }
    let expected = (-2.0 * p.eta * (2.0 * PI).powi(2) * st.t).exp();
    (solver.energy(&st).kinetic / k0 / expected - 1.0).abs()
}

/// Scalar amplitude ODE `s' = -(2c/3 s^3 - a s - b/3 s^2) / (Gamma eps)`
/// integrated by classical RK4 with a fine step.
pub fn amplitude_ode(p: &MaterialParams, s0: f64, t: f64) -> f64 {
    let f = |s: f64| -(2.0 * p.c / 3.0 * s.powi(3) - p.a * s - p.b / 3.0 * s * s) / (p.gamma * p.epsilon);
    let steps = 20_000;
    let h = t / steps as f64;
    let mut s = s0;
    for _ in 0..steps {
        let k1 = f(s);
        let k2 = f(s + 0.5 * h * k1);
        let k3 = f(s + 0.5 * h * k2);
        let k4 = f(s + h * k3);
        s += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    s
}

/// Errors of spatially uniform Beris-Edwards gradient flow against
/// [`amplitude_ode`] at `t_final` for each step size.
pub fn uniform_flow_errors(dts: &[f64], t_final: f64) -> Vec<f64> {
    let g = grid(8);
    let p = MaterialParams { epsilon: 0.1, ..Default::default() };
    let s_exact = amplitude_ode(&p, 1.0, t_final);
    dts.iter()
        .map(|&dt| {
            let cfg = BEStepConfig { dt, gradient_flow_only: true, ..Default::default() };
            let solver = BESolver::new(GridOps::new(g, Scheme::Central2), p, cfg).unwrap();
            let mut st = BEState::at_rest(Field::constant(g, uniaxial(1.0, &Director::e_z())));
            let steps = (t_final / dt).round() as usize;
            for _ in 0..steps {
                solver.step(&mut st).unwrap();
            }
            let want = uniaxial(s_exact, &Director::e_z());
            st.q.values().iter().map(|q| (*q - want).norm()).fold(0.0, f64::max)
        })
        .collect()
}

/// Errors of one-constant planar Ericksen-Leslie gradient flow against the
/// heat equation `theta_t = (k / gamma1) theta_xx` for each step size.
pub fn heat_flow_errors(dts: &[f64], t_final: f64) -> Vec<f64> {
    let g = grid(32);
    let p = MaterialParams { l1: 0.1, ..Default::default() };
    let d = derive_coefficients(&p).unwrap();
    let rate = d.k1 / d.gamma1 * (2.0 * PI).powi(2);
    let amp = 0.3;
    dts.iter()
        .map(|&dt| {
            let cfg = ELStepConfig { dt, scheme: Scheme::Spectral, gradient_flow_only: true, ..Default::default() };
            let solver = ELSolver::new(GridOps::new(g, Scheme::Spectral), d, cfg).unwrap();
            let n0 = Field::from_fn(g, |x| {
                let th = amp * (2.0 * PI * x[0]).sin();
                Vec3::new(th.cos(), th.sin(), 0.0)
            });
            let mut st = ELState::at_rest(n0);
            let steps = (t_final / dt).round() as usize;
            for _ in 0..steps {
                solver.step(&mut st).unwrap();
            }
            let decay = (-rate * st.t).exp();
            (0..g.node_count())
                .map(|i| {
                    let th = amp * decay * (2.0 * PI * g.coords(i)[0]).sin();
                    (st.n.values()[i] - Vec3::new(th.cos(), th.sin(), 0.0)).norm()
                })
                .fold(0.0, f64::max)
        })
        .collect()
}

/// Largest per-step energy increase, relative to `1 + E`, along a coupled
/// Beris-Edwards trajectory.
pub fn be_energy_increase(steps: usize, gradient_flow: bool) -> f64 {
    let g = grid(32);
    let p = MaterialParams { l1: 0.01, l2: 0.005, l3: 0.003, xi: 0.5, epsilon: 0.1, ..Default::default() };
    let ops = GridOps::new(g, Scheme::Spectral);
    let n = planar_director(g, 0.6);
    let s = p.bulk().unwrap().s;
    let mut st = BEState::at_rest(n.map(|v| uniaxial(s, &Director::new(*v).unwrap())));
    if !gradient_flow {
        st.v = taylor_green(g, 0.2);
    }
    let cfg = BEStepConfig { dt: 1e-3, scheme: Scheme::Spectral, gradient_flow_only: gradient_flow, ..Default::default() };
    let solver = BESolver::new(ops, p, cfg).unwrap();
    let mut e = solver.energy(&st).total;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..steps {
        solver.step(&mut st).unwrap();
        let e_new = solver.energy(&st).total;
        worst = worst.max((e_new - e) / (1.0 + e.abs()));
        e = e_new;
    }
    worst
}

/// Largest per-step increase of kinetic plus Frank energy, relative to
/// `1 + E`, along a coupled Ericksen-Leslie trajectory.
pub fn el_energy_increase(steps: usize) -> f64 {
    let g = grid(32);
    let p = MaterialParams { l1: 0.02, l2: 0.01, xi: 0.8, ..Default::default() };
    let d = derive_coefficients(&p).unwrap();
    let cfg = ELStepConfig { dt: 2e-4, scheme: Scheme::Spectral, ..Default::default() };
    let solver = ELSolver::new(GridOps::new(g, Scheme::Spectral), d, cfg).unwrap();
    let mut st = ELState::at_rest(planar_director(g, 0.6));
    st.v = taylor_green(g, 0.2);
    let mut e = solver.energy(&st).total;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..steps {
        solver.step(&mut st).unwrap();
        let e_new = solver.energy(&st).total;
        worst = worst.max((e_new - e) / (1.0 + e.abs()));
        e = e_new;
    }
    worst
}

/// Largest relative energy-law mismatch over `[0, t_final]` with samples at
/// every step, on an `n x n` grid with step `dt`.
pub fn el_energy_law_mismatch(n: usize, dt: f64, t_final: f64) -> f64 {
    let g = grid(n);
    let p = MaterialParams { l1: 0.02, l2: 0.01, xi: 0.8, ..Default::default() };
    let d = derive_coefficients(&p).unwrap();
    let cfg = ELStepConfig { dt, scheme: Scheme::Spectral, ..Default::default() };
    let solver = ELSolver::new(GridOps::new(g, Scheme::Spectral), d, cfg).unwrap();
    let mut st = ELState::at_rest(planar_director(g, 0.6));
    st.v = taylor_green(g, 0.2);
    let steps = (t_final / dt).round() as usize;
    let mut samples = vec![solver.sample(&st)];
    for _ in 0..steps {
        solver.step(&mut st).unwrap();
        samples.push(solver.sample(&st));
    }
    el_energy_law(&samples).unwrap().iter().map(|r| r.mismatch).fold(0.0, f64::max)
}

pub fn q_from_components(c: [f64; 5]) -> QTensor {
    QTensor::from_components(c)
}
