//! Flat JSON run configuration for the command-line driver.
//!
//! Every key is optional; missing keys take the values of
//! [`RunConfig::default`]. Unknown keys are rejected with their path.

use std::f64::consts::PI;
use std::path::Path;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::beris_edwards::{BEState, BEStepConfig};
use crate::coefficients::MaterialParams;
use crate::error::{Error, Result};
use crate::ericksen_leslie::{ELState, ELStepConfig};
use crate::fields::{Field, Grid, GridOps, Scheme, Summation};
use crate::hilbert::{well_prepared_initial_data, StudyConfig, StudyMode};
use crate::qtensor::Vec3;

/// Name of the generator behind every seeded draw.
pub const PRNG_NAME: &str = "ChaCha8";

/// Initial director and velocity fields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    /// Uniform director along `z`, fluid at rest.
    Equilibrium,
    /// Director angle `amplitude sin(2 pi x / Lx) cos(2 pi y / Ly)` in the
    /// `xy` plane.
    #[default]
    Planar,
    /// Uniform director along `z` with a Taylor-Green vortex of size
    /// `velocity_amplitude`.
    TaylorGreen,
    /// Planar director with a seeded random band-limited angle.
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub gamma: f64,
    pub xi: f64,
    pub eta: f64,
    pub epsilon: f64,

    pub dim: usize,
    pub n: Vec<usize>,
    pub len: Vec<f64>,

    pub scheme: Scheme,
    pub dealias: bool,
    pub sigma_split: Option<f64>,
    pub lambda_bulk: Option<f64>,
    pub cfl_safety: f64,
    pub dt: f64,
    pub t_final: f64,
    /// Snapshot times for `run-be` and `run-el`; empty means only the final time.
    pub sample_times: Vec<f64>,
    /// Energy rows are written every this many steps.
    pub log_every: u64,
    pub mode: StudyMode,

    pub initial: InitialKind,
    pub amplitude: f64,
    pub velocity_amplitude: f64,

    pub epsilons: Vec<f64>,
    pub samples: usize,
    pub be_dt_scale: f64,
    pub el_dt: f64,
    pub slope_min: f64,

    pub out: Option<String>,
    pub bitrepro: bool,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            l1: 0.01,
            l2: 0.0,
            l3: 0.0,
            gamma: 1.0,
            xi: 0.0,
            eta: 1.0,
            epsilon: 0.1,
            dim: 2,
            n: vec![64, 64],
            len: vec![1.0, 1.0],
            scheme: Scheme::Spectral,
            dealias: false,
            sigma_split: None,
            lambda_bulk: None,
            cfl_safety: 0.5,
            dt: 1e-3,
            t_final: 0.1,
            sample_times: Vec::new(),
            log_every: 10,
            mode: StudyMode::GradientFlow,
            initial: InitialKind::Planar,
            amplitude: 0.5,
            velocity_amplitude: 0.1,
            epsilons: vec![0.2, 0.1, 0.05, 0.025],
            samples: 10,
            be_dt_scale: 0.25,
            el_dt: 1e-4,
            slope_min: 0.8,
            out: None,
            bitrepro: false,
            seed: 0,
        }
    }
}

/// Sets `key` in a flat JSON object. The value is parsed as JSON and falls
/// back to a plain string.
pub fn apply_override(doc: &mut serde_json::Value, key: &str, raw: &str) -> Result<()> {
    let obj = doc.as_object_mut().ok_or_else(|| Error::Config {
        path: ".".into(),
        message: "config document must be a JSON object".into(),
    })?;
    let value = serde_json::from_str(raw).unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
    obj.insert(key.to_string(), value);
    Ok(())
}

impl RunConfig {
    /// Deserializes a JSON document, reporting the failing key path.
    pub fn from_value(doc: serde_json::Value) -> Result<RunConfig> {
        serde_path_to_error::deserialize(doc).map_err(|e| Error::Config {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    pub fn from_json(text: &str) -> Result<RunConfig> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Config {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    /// Reads the document at `path` (an empty object if `None`), applies the
    /// `key=value` overrides and deserializes.
    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<RunConfig> {
        let mut doc = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::Config {
                    path: p.display().to_string(),
                    message: e.to_string(),
                })?;
                serde_json::from_str(&text).map_err(|e| Error::Config { path: ".".into(), message: e.to_string() })?
            }
            None => serde_json::json!({}),
        };
        for (k, v) in overrides {
            apply_override(&mut doc, k, v)?;
        }
        RunConfig::from_value(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn material(&self) -> MaterialParams {
        MaterialParams {
            a: self.a,
            b: self.b,
            c: self.c,
            l1: self.l1,
            l2: self.l2,
            l3: self.l3,
            gamma: self.gamma,
            xi: self.xi,
            eta: self.eta,
            epsilon: self.epsilon,
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        if self.n.len() != self.dim || self.len.len() != self.dim {
            return Err(Error::Config {
                path: "n".into(),
                message: format!("a {}-D grid needs {} extents and {} lengths", self.dim, self.dim, self.dim),
            });
        }
        Grid::new(self.dim, &self.n, &self.len)
    }

    pub fn ops(&self) -> Result<GridOps> {
        let ops = GridOps::new(self.grid()?, self.scheme);
        Ok(if self.bitrepro { ops.with_summation(Summation::Pairwise) } else { ops })
    }

    /// Checks everything that does not need a solver.
    pub fn validate(&self) -> Result<()> {
        self.material().validate()?;
        self.grid()?;
        let positive = [("dt", self.dt), ("t_final", self.t_final), ("cfl_safety", self.cfl_safety)];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config { path: key.into(), message: format!("must be positive, got {v}") });
            }
        }
        if self.log_every == 0 {
            return Err(Error::Config { path: "log_every".into(), message: "must be at least 1".into() });
        }
        if let Some(t) = self.sample_times.iter().find(|t| !(**t >= 0.0 && **t <= self.t_final)) {
            return Err(Error::Config { path: "sample_times".into(), message: format!("{t} is outside [0, t_final]") });
        }
        Ok(())
    }

    pub fn gradient_flow(&self) -> bool {
        self.mode == StudyMode::GradientFlow
    }

    pub fn be_step_config(&self) -> BEStepConfig {
        BEStepConfig {
            dt: self.dt,
            sigma_split: self.sigma_split,
            scheme: self.scheme,
            gradient_flow_only: self.gradient_flow(),
            cfl_safety: self.cfl_safety,
            lambda_bulk: self.lambda_bulk,
            dealias: self.dealias,
        }
    }

    pub fn el_step_config(&self) -> ELStepConfig {
        ELStepConfig {
            dt: self.dt,
            scheme: self.scheme,
            gradient_flow_only: self.gradient_flow(),
            cfl_safety: self.cfl_safety,
            dealias: self.dealias,
        }
    }

    pub fn study_config(&self) -> StudyConfig {
        StudyConfig {
            epsilons: self.epsilons.clone(),
            t_final: self.t_final,
            samples: self.samples,
            mode: self.mode,
            scheme: self.scheme,
            be_dt_scale: self.be_dt_scale,
            el_dt: self.el_dt,
            cfl_safety: self.cfl_safety,
            sigma_split: self.sigma_split,
        }
    }

    /// Initial director field.
    pub fn initial_director(&self) -> Result<Field<Vec3>> {
        let g = self.grid()?;
        let [lx, ly, _] = g.lengths();
        let planar = |theta: &Field<f64>| theta.map(|t| Vec3::new(t.cos(), t.sin(), 0.0));
        Ok(match self.initial {
            InitialKind::Equilibrium | InitialKind::TaylorGreen => Field::constant(g, Vec3::new(0.0, 0.0, 1.0)),
            InitialKind::Planar => {
                let amp = self.amplitude;
                planar(&Field::from_fn(g, |x| amp * (2.0 * PI * x[0] / lx).sin() * (2.0 * PI * x[1] / ly).cos()))
            }
            InitialKind::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let mut modes = Vec::new();
                for kx in 0..=2i32 {
                    for ky in -2..=2i32 {
                        if kx == 0 && ky <= 0 {
                            continue;
                        }
                        let c: f64 = rng.random_range(-1.0..1.0);
                        let phase: f64 = rng.random_range(0.0..2.0 * PI);
                        modes.push((kx as f64, ky as f64, c, phase));
                    }
                }
                let norm = modes.iter().map(|m| m.2.abs()).sum::<f64>();
                let amp = self.amplitude / norm;
                planar(&Field::from_fn(g, |x| {
                    modes
                        .iter()
                        .map(|(kx, ky, c, ph)| c * (2.0 * PI * (kx * x[0] / lx + ky * x[1] / ly) + ph).cos())
                        .sum::<f64>()
                        * amp
                }))
            }
        })
    }

    /// Initial velocity; zero in gradient-flow mode.
    pub fn initial_velocity(&self) -> Result<Field<Vec3>> {
        let g = self.grid()?;
        if self.gradient_flow() {
            return Ok(Field::zeros(g));
        }
        let [lx, ly, _] = g.lengths();
        let u = self.velocity_amplitude;
        Ok(Field::from_fn(g, |x| {
            let (sx, cx) = (2.0 * PI * x[0] / lx).sin_cos();
            let (sy, cy) = (2.0 * PI * x[1] / ly).sin_cos();
            Vec3::new(u * sx * cy, -u * cx * sy * ly / lx, 0.0)
        }))
    }

    /// Well-prepared Beris-Edwards state `Q0 + eps Q1_perp` at `epsilon`.
    pub fn initial_be(&self, ops: &GridOps) -> Result<BEState> {
        let n = self.initial_director()?;
        let v = self.initial_velocity()?;
        Ok(well_prepared_initial_data(ops, &n, &v, &self.material(), self.epsilon)?.be)
    }

    pub fn initial_el(&self) -> Result<ELState> {
        let mut st = ELState::at_rest(self.initial_director()?);
        st.v = self.initial_velocity()?;
        Ok(st)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
    }

    #[test]
    fn bad_key_is_reported_with_path() {
        match RunConfig::from_json(r#"{"l1": "soft"}"#) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "l1"),
            other => panic!("{other:?}"),
        }
        match RunConfig::from_json(r#"{"epsilons": [0.1, "x"]}"#) {
            Err(Error::Config { path, .. }) => assert_eq!(path, "epsilons[1]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(RunConfig::from_json(r#"{"bogus": 1}"#), Err(Error::Config { .. })));
    }

    #[test]
    fn overrides_parse_json_then_fall_back_to_strings() {
        let mut doc = serde_json::json!({});
        apply_override(&mut doc, "l1", "0.5").unwrap();
        apply_override(&mut doc, "scheme", "central2").unwrap();
        apply_override(&mut doc, "epsilons", "[0.1]").unwrap();
        let cfg = RunConfig::from_value(doc).unwrap();
        assert_eq!(cfg.l1, 0.5);
        assert_eq!(cfg.scheme, Scheme::Central2);
        assert_eq!(cfg.epsilons, vec![0.1]);
    }

    #[test]
    fn seeded_random_director_is_reproducible() {
        let cfg = RunConfig { initial: InitialKind::Random, n: vec![16, 16], seed: 7, ..Default::default() };
        let a = cfg.initial_director().unwrap();
        assert_eq!(a, cfg.initial_director().unwrap());
        let other = RunConfig { seed: 8, ..cfg.clone() }.initial_director().unwrap();
        assert_ne!(a, other);
        assert!(a.values().iter().all(|n| (n.norm() - 1.0).abs() < 1e-14));
    }
}
