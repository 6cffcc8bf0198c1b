//! Command-line driver behind the `nematic` binary.
//!
//! Exit codes: 0 on success, 1 for runtime failures (solver aborts, failed
//! identities, a fitted slope below `slope_min`), 2 for configuration,
//! validation and time-step policy errors.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::beris_edwards::BESolver;
use crate::coefficients::{check_dissipation, derive_coefficients, identity_checks, parodi_report};
use crate::config::{RunConfig, PRNG_NAME};
use crate::error::{Error, Result};
use crate::ericksen_leslie::{el_energy_law, ELSolver};
use crate::hilbert::convergence_study;
use crate::selftest;
use crate::snapshot::Snapshot;

#[derive(Debug, Parser)]
#[command(name = "nematic", version, about = "Q-tensor and director models of nematic liquid crystals")]
pub struct Cli {
    /// JSON config file; missing keys take default values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Fixed-order reductions for byte-identical output.
    #[arg(long, global = true)]
    pub bitrepro: bool,
    /// Output directory for CSV files and snapshots.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed of the random initial data and the self-test draws.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Override a config key, e.g. `--set l1=0.02` (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print derived Ericksen-Leslie coefficients and identity checks.
    CheckCoeffs,
    /// Integrate the Beris-Edwards model.
    RunBe,
    /// Integrate the Ericksen-Leslie model.
    RunEl,
    /// Run the epsilon-convergence experiment.
    Converge,
    /// Run the randomized property checks.
    Selftest,
}

/// Maps an error to the process exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. }
        | Error::Validation(_)
        | Error::Cfl(_)
        | Error::InvalidInput(_)
        | Error::SingularParameter(_)
        | Error::DegeneratePotential => 2,
        _ => 1,
    }
}

impl Cli {
    fn resolve(&self) -> Result<RunConfig> {
        let mut overrides = Vec::new();
        for raw in &self.overrides {
            let (k, v) = raw.split_once('=').ok_or_else(|| Error::Config {
                path: raw.clone(),
                message: "expected KEY=VALUE".into(),
            })?;
            overrides.push((k.trim().to_string(), v.trim().to_string()));
        }
        if self.bitrepro {
            overrides.push(("bitrepro".into(), "true".into()));
        }
        if let Some(seed) = self.seed {
            overrides.push(("seed".into(), seed.to_string()));
        }
        if let Some(out) = &self.out {
            overrides.push(("out".into(), serde_json::to_string(&out.display().to_string())?));
        }
        RunConfig::load(self.config.as_deref(), &overrides)
    }
}

/// Parses `args` and runs the selected subcommand, writing reports to `out`
/// and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cfg = cli.resolve()?;
    cfg.validate()?;
    if let Some(dir) = &cfg.out {
        std::fs::create_dir_all(dir)?;
    }
    match cli.command {
        Command::CheckCoeffs => check_coeffs(&cfg, cli.json, out),
        Command::RunBe => run_be(&cfg, out),
        Command::RunEl => run_el(&cfg, out),
        Command::Converge => converge(&cfg, cli.json, out, err),
        Command::Selftest => self_test(&cfg, cli.json, out),
    }
}

fn header(cfg: &RunConfig) -> String {
    format!("# config: {}\n# prng: {PRNG_NAME} seed {}\n", cfg.to_json(), cfg.seed)
}

/// Writes `text` to `<out>/<name>` when an output directory is set,
/// otherwise to `stdout`.
fn emit(cfg: &RunConfig, name: &str, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &cfg.out {
        Some(dir) => std::fs::write(Path::new(dir).join(name), text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn check_coeffs(cfg: &RunConfig, as_json: bool, out: &mut dyn Write) -> Result<i32> {
    let p = cfg.material();
    let d = derive_coefficients(&p)?;
    let ids = identity_checks(&p, &d);
    let diss = check_dissipation(&d);
    let parodi = parodi_report(&d);
    let ok = ids.iter().all(|c| c.pass);
    if as_json {
        let doc = json!({
            "config": cfg,
            "coefficients": d,
            "identities": ids,
            "dissipation": diss,
            "parodi": parodi,
            "pass": ok,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    } else {
        let mut s = header(cfg);
        let rows = [
            ("s", d.s),
            ("k1", d.k1),
            ("k2", d.k2),
            ("k3", d.k3),
            ("k4", d.k4),
            ("alpha1", d.alpha1),
            ("alpha2", d.alpha2),
            ("alpha3", d.alpha3),
            ("alpha4", d.alpha4),
            ("alpha5", d.alpha5),
            ("alpha6", d.alpha6),
            ("gamma1", d.gamma1),
            ("gamma2", d.gamma2),
            ("beta1", d.beta1),
            ("beta2", d.beta2),
            ("beta3", d.beta3),
            ("L0", d.l0),
            ("C0", d.c0),
        ];
        for (name, v) in rows {
            writeln!(s, "{name:>8} = {v:.15e}").expect("write to string");
        }
        s.push_str("\nidentities\n");
        for c in &ids {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            writeln!(s, "  {}: {verdict}  (lhs {:.15e}, rhs {:.15e})", c.name, c.lhs, c.rhs).expect("write to string");
        }
        s.push_str("\ndissipation\n");
        let flag = |b: bool| if b { "PASS" } else { "FAIL" };
        writeln!(s, "  β2 > 0: {} ({:.6e})", flag(diss.beta2_positive), diss.beta2).expect("write to string");
        writeln!(s, "  2β2+β3 > 0: {} ({:.6e})", flag(diss.two_beta2_plus_beta3_positive), diss.two_beta2_plus_beta3)
            .expect("write to string");
        writeln!(
            s,
            "  (3/2)β2+β3+β1 > 0: {} ({:.6e})",
            flag(diss.three_halves_combination_positive),
            diss.three_halves_beta2_plus_beta3_plus_beta1
        )
        .expect("write to string");
        s.push_str("\nParodi-type relations (reported, not enforced)\n");
        writeln!(s, "  α2+α3 = α6−α5: {}", parodi.parodi.label()).expect("write to string");
        writeln!(s, "  γ1 = α3−α2: {}", parodi.gamma1_relation.label()).expect("write to string");
        writeln!(s, "  γ2 = α6−α5: {}", parodi.gamma2_relation.label()).expect("write to string");
        writeln!(s, "  γ2 = α2+α3: {}", parodi.gamma2_from_sum.label()).expect("write to string");
        writeln!(s, "\nresult: {}", if ok { "PASS" } else { "FAIL" }).expect("write to string");
        out.write_all(s.as_bytes())?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn total_steps(cfg: &RunConfig) -> u64 {
    (cfg.t_final / cfg.dt - 1e-9).ceil().max(1.0) as u64
}

fn snapshot_steps(cfg: &RunConfig) -> Vec<u64> {
    let total = total_steps(cfg);
    if cfg.sample_times.is_empty() {
        return vec![total];
    }
    let mut steps: Vec<u64> = cfg.sample_times.iter().map(|t| ((t / cfg.dt).round() as u64).min(total)).collect();
    steps.sort_unstable();
    steps.dedup();
    steps
}

fn write_snapshot(cfg: &RunConfig, snap: &Snapshot) -> Result<()> {
    if let Some(dir) = &cfg.out {
        snap.write(&Path::new(dir).join(format!("snapshot_{:08}.json", snap.step)))?;
    }
    Ok(())
}

fn run_be(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let ops = cfg.ops()?;
    let solver = BESolver::new(ops.clone(), cfg.material(), cfg.be_step_config())?;
    let mut state = cfg.initial_be(&ops)?;
    let config_value = serde_json::to_value(cfg)?;
    let total = total_steps(cfg);
    let snaps = snapshot_steps(cfg);
    let mut csv = header(cfg);
    csv.push_str("step,t,kinetic,bulk,elastic,total,div_v_norm,dt\n");
    let log = |csv: &mut String, state: &crate::beris_edwards::BEState| {
        let e = solver.energy(state);
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            state.step,
            state.t,
            e.kinetic,
            e.bulk,
            e.elastic,
            e.total,
            solver.divergence_norm(state),
            cfg.dt
        )
        .expect("write to string");
    };
    log(&mut csv, &state);
    if snaps.contains(&0) {
        write_snapshot(cfg, &Snapshot::from_be(&state, config_value.clone()))?;
    }
    let result = (|| -> Result<()> {
        while state.step < total {
            solver.step(&mut state)?;
            if state.step % cfg.log_every == 0 || state.step == total {
                log(&mut csv, &state);
            }
            if snaps.contains(&state.step) {
                write_snapshot(cfg, &Snapshot::from_be(&state, config_value.clone()))?;
            }
        }
        Ok(())
    })();
    emit(cfg, "energy.csv", &csv, out)?;
    result?;
    if let Some(dir) = &cfg.out {
        let snap = Snapshot::from_be(&state, config_value);
        let mut slice = header(cfg);
        slice.push_str(&snap.slice_csv(0)?);
        std::fs::write(Path::new(dir).join("final_slice.csv"), slice)?;
    }
    Ok(0)
}

fn run_el(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let ops = cfg.ops()?;
    let d = derive_coefficients(&cfg.material())?;
    let solver = ELSolver::new(ops, d, cfg.el_step_config())?;
    let mut state = cfg.initial_el()?;
    let config_value = serde_json::to_value(cfg)?;
    let total = total_steps(cfg);
    let snaps = snapshot_steps(cfg);
    let mut samples = vec![solver.sample(&state)];
    if snaps.contains(&0) {
        write_snapshot(cfg, &Snapshot::from_el(&state, config_value.clone()))?;
    }
    let result = (|| -> Result<()> {
        while state.step < total {
            solver.step(&mut state)?;
            if state.step % cfg.log_every == 0 {
                samples.push(solver.sample(&state));
            }
            if snaps.contains(&state.step) {
                write_snapshot(cfg, &Snapshot::from_el(&state, config_value.clone()))?;
            }
        }
        Ok(())
    })();
    let mut csv = header(cfg);
    csv.push_str("step,t,kinetic,frank,lhs,rhs,mismatch\n");
    if samples.len() >= 3 {
        for r in el_energy_law(&samples)? {
            writeln!(csv, "{},{},{},{},{},{},{}", r.step, r.t, r.kinetic, r.frank, r.lhs, r.rhs, r.mismatch)
                .expect("write to string");
        }
    }
    emit(cfg, "energy_law.csv", &csv, out)?;
    result?;
    if samples.len() < 3 {
        return Err(Error::Config {
            path: "log_every".into(),
            message: "the energy law needs at least 3 logged samples; lower log_every or raise t_final".into(),
        });
    }
    if let Some(dir) = &cfg.out {
        let snap = Snapshot::from_el(&state, config_value);
        let mut slice = header(cfg);
        slice.push_str(&snap.slice_csv(0)?);
        std::fs::write(Path::new(dir).join("final_slice.csv"), slice)?;
    }
    Ok(0)
}

const STUDY_NOTE: &str = "# note: only the first corrector outside the kernel is built, so the expected rate is \
||Q_eps - Q0|| = O(eps); E_frak groups are diagnostics of the eps^3-scaled remainder\n";

fn converge(cfg: &RunConfig, as_json: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    if cfg.epsilons.is_empty() {
        return Err(Error::Config { path: "epsilons".into(), message: "need at least one epsilon".into() });
    }
    let ops = cfg.ops()?;
    let n0 = cfg.initial_director()?;
    let v0 = cfg.initial_velocity()?;
    let report = convergence_study(&ops, &n0, &v0, &cfg.material(), &cfg.study_config())?;
    for w in &report.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let mut csv = header(cfg);
    csv.push_str(STUDY_NOTE);
    writeln!(csv, "# study: {}", serde_json::to_string(&cfg.study_config())?).expect("write to string");
    csv.push_str("epsilon,max_err_L2,err_at_T,E_frak_g0,E_frak_g1,E_frak_g2,E_frak_total,fitted_slope\n");
    let slope_text = report.slope.map(|s| s.to_string()).unwrap_or_else(|| "N/A".into());
    for r in &report.rows {
        writeln!(
            csv,
            "{},{},{},{},{},{},{},",
            r.epsilon, r.max_err_l2, r.err_at_t, r.efrak.g0, r.efrak.g1, r.efrak.g2, r.efrak.total
        )
        .expect("write to string");
    }
    writeln!(csv, "fitted_slope,,,,,,,{slope_text}").expect("write to string");
    if as_json {
        let doc = json!({ "config": cfg, "report": report });
        let text = serde_json::to_string_pretty(&doc)?;
        writeln!(out, "{text}")?;
        if let Some(dir) = &cfg.out {
            std::fs::write(Path::new(dir).join("convergence.csv"), &csv)?;
        }
    } else {
        emit(cfg, "convergence.csv", &csv, out)?;
    }
    let ok = match report.slope {
        Some(s) => s >= cfg.slope_min,
        None => true,
    };
    if !ok {
        writeln!(err, "fitted slope {slope_text} is below slope_min = {}", cfg.slope_min)?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn self_test(cfg: &RunConfig, as_json: bool, out: &mut dyn Write) -> Result<i32> {
    let checks = selftest::run_all(cfg.seed);
    let ok = checks.iter().all(|c| c.pass);
    if as_json {
        writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "seed": cfg.seed, "checks": checks, "pass": ok }))?)?;
    } else {
        let mut s = header(cfg);
        for c in &checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            writeln!(s, "{verdict} {} (worst {:.3e}, tolerance {:.1e})", c.name, c.worst, c.tolerance)
                .expect("write to string");
        }
        out.write_all(s.as_bytes())?;
    }
    Ok(if ok { 0 } else { 1 })
}
