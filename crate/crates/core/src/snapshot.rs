//! Self-describing JSON snapshots of solver states and CSV slice export.
//!
//! Layout:
//!
//! ```json
//! {
//!   "format": "nematic-snapshot",
//!   "version": 1,
//!   "t": 0.5,
//!   "step": 500,
//!   "grid": { "dim": 2, "n": [64, 64], "len": [1.0, 1.0] },
//!   "arrays": {
//!     "v": { "components": 3, "data": [...] },
//!     "p": { "components": 1, "data": [...] },
//!     "Q": { "components": 5, "data": [...] }
//!   },
//!   "config": { ... }
//! }
//! ```
//!
//! `data` is node-major (all components of node 0, then node 1, ...), nodes
//! in the grid's row-major order with `z` fastest. `Q` stores
//! `(xx, xy, xz, yy, yz)`; `n` stores the director.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::beris_edwards::BEState;
use crate::error::{Error, Result};
use crate::ericksen_leslie::ELState;
use crate::fields::{Components, Field, Grid};

pub const FORMAT: &str = "nematic-snapshot";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Array {
    pub components: usize,
    pub data: Vec<f64>,
}

impl Array {
    pub fn from_field<T: Components>(f: &Field<T>) -> Array {
        let mut data = Vec::with_capacity(f.len() * T::N);
        for v in f.values() {
            for c in 0..T::N {
                data.push(v.component(c));
            }
        }
        Array { components: T::N, data }
    }

    pub fn to_field<T: Components>(&self, grid: Grid, name: &str) -> Result<Field<T>> {
        if self.components != T::N || self.data.len() != grid.node_count() * T::N {
            return Err(Error::InvalidInput(format!(
                "array `{name}` has {} components and {} values, expected {} and {}",
                self.components,
                self.data.len(),
                T::N,
                grid.node_count() * T::N
            )));
        }
        let values = self
            .data
            .chunks(T::N)
            .map(|chunk| {
                let mut v = T::zero();
                for (c, x) in chunk.iter().enumerate() {
                    v.set_component(c, *x);
                }
                v
            })
            .collect();
        Field::from_vec(grid, values)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub format: String,
    pub version: u32,
    pub t: f64,
    pub step: u64,
    pub grid: Grid,
    pub arrays: BTreeMap<String, Array>,
    #[serde(default)]
    pub config: serde_json::Value,
}

impl Snapshot {
    pub fn new(grid: Grid, t: f64, step: u64, config: serde_json::Value) -> Snapshot {
        Snapshot { format: FORMAT.into(), version: VERSION, t, step, grid, arrays: BTreeMap::new(), config }
    }

    pub fn insert<T: Components>(&mut self, name: &str, f: &Field<T>) -> Result<()> {
        f.check_grid(&self.grid)?;
        self.arrays.insert(name.to_string(), Array::from_field(f));
        Ok(())
    }

    pub fn get<T: Components>(&self, name: &str) -> Result<Field<T>> {
        let a = self
            .arrays
            .get(name)
            .ok_or_else(|| Error::InvalidInput(format!("snapshot has no array `{name}`")))?;
        a.to_field(self.grid, name)
    }

    pub fn from_be(state: &BEState, config: serde_json::Value) -> Snapshot {
        let mut s = Snapshot::new(*state.q.grid(), state.t, state.step, config);
        s.arrays.insert("v".into(), Array::from_field(&state.v));
        s.arrays.insert("p".into(), Array::from_field(&state.p));
        s.arrays.insert("Q".into(), Array::from_field(&state.q));
        s
    }

    pub fn from_el(state: &ELState, config: serde_json::Value) -> Snapshot {
        let mut s = Snapshot::new(*state.n.grid(), state.t, state.step, config);
        s.arrays.insert("v".into(), Array::from_field(&state.v));
        s.arrays.insert("p".into(), Array::from_field(&state.p));
        s.arrays.insert("n".into(), Array::from_field(&state.n));
        s
    }

    pub fn to_be(&self) -> Result<BEState> {
        Ok(BEState { t: self.t, step: self.step, v: self.get("v")?, p: self.get("p")?, q: self.get("Q")? })
    }

    pub fn to_el(&self) -> Result<ELState> {
        Ok(ELState { t: self.t, step: self.step, v: self.get("v")?, p: self.get("p")?, n: self.get("n")? })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Snapshot> {
        let s: Snapshot = serde_json::from_str(text)?;
        if s.format != FORMAT || s.version != VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported snapshot format `{}` version {}",
                s.format, s.version
            )));
        }
        for (name, a) in &s.arrays {
            if a.components == 0 || a.data.len() != a.components * s.grid.node_count() {
                return Err(Error::InvalidInput(format!("array `{name}` does not match the grid")));
            }
        }
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Snapshot> {
        Snapshot::from_json(&std::fs::read_to_string(path)?)
    }

    /// CSV of every array on the `z` plane `k` (the only plane in 2-D), one
    /// row per node with columns `x,y,z,<name>_<component>...`.
    pub fn slice_csv(&self, k: usize) -> Result<String> {
        let [nx, ny, nz] = self.grid.extents();
        if k >= nz {
            return Err(Error::InvalidInput(format!("slice index {k} outside 0..{nz}")));
        }
        let mut out = String::from("x,y,z");
        for (name, a) in &self.arrays {
            for c in 0..a.components {
                write!(out, ",{name}_{c}").expect("write to string");
            }
        }
        out.push('\n');
        for i in 0..nx {
            for j in 0..ny {
                let idx = self.grid.index(i, j, k);
                let x = self.grid.coords(idx);
                write!(out, "{},{},{}", x[0], x[1], x[2]).expect("write to string");
                for a in self.arrays.values() {
                    for c in 0..a.components {
                        write!(out, ",{}", a.data[idx * a.components + c]).expect("write to string");
                    }
                }
                out.push('\n');
            }
        }
        Ok(out)
    }
}
