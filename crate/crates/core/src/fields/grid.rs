use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid in two or three dimensions.
///
/// Two-dimensional grids are stored with a single node in `z` and a unit
/// length there, so cell volumes are areas and nothing varies along `z`.
/// Nodes are laid out row-major with `z` fastest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid {
    dim: usize,
    n: [usize; 3],
    len: [f64; 3],
}

/// Serialized description of a [`Grid`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub n: Vec<usize>,
    pub len: Vec<f64>,
}

impl TryFrom<GridSpec> for Grid {
    type Error = Error;
    fn try_from(s: GridSpec) -> Result<Grid> {
        if s.n.len() != s.dim || s.len.len() != s.dim {
            return Err(Error::InvalidInput(format!(
                "grid of dimension {} needs {} extents and lengths",
                s.dim, s.dim
            )));
        }
        Grid::new(s.dim, &s.n, &s.len)
    }
}

impl From<Grid> for GridSpec {
    fn from(g: Grid) -> GridSpec {
        GridSpec { dim: g.dim, n: g.n[..g.dim].to_vec(), len: g.len[..g.dim].to_vec() }
    }
}

impl Grid {
    pub fn new(dim: usize, n: &[usize], len: &[f64]) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidInput(format!("grid dimension must be 2 or 3, got {dim}")));
        }
        if n.len() < dim || len.len() < dim {
            return Err(Error::InvalidInput("too few grid extents".into()));
        }
        let mut nn = [1usize; 3];
        let mut ll = [1.0f64; 3];
        for ax in 0..dim {
            if n[ax] < 8 || !n[ax].is_multiple_of(2) {
                return Err(Error::InvalidInput(format!(
                    "grid extent along axis {ax} must be even and at least 8, got {}",
                    n[ax]
                )));
            }
            if !(len[ax] > 0.0 && len[ax].is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "box length along axis {ax} must be positive, got {}",
                    len[ax]
                )));
            }
            nn[ax] = n[ax];
            ll[ax] = len[ax];
        }
        Ok(Grid { dim, n: nn, len: ll })
    }

    pub fn new_2d(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        Grid::new(2, &[nx, ny], &[lx, ly])
    }

    pub fn new_3d(n: [usize; 3], len: [f64; 3]) -> Result<Self> {
        Grid::new(3, &n, &len)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Node counts per axis; `1` along `z` in two dimensions.
    pub fn extents(&self) -> [usize; 3] {
        self.n
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.len
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.len[axis] / self.n[axis] as f64
    }

    pub fn min_spacing(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).fold(f64::INFINITY, f64::min)
    }

    pub fn node_count(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).product()
    }

    pub fn volume(&self) -> f64 {
        self.len[..self.dim].iter().product()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n[1] + j) * self.n[2] + k
    }

    #[inline]
    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.n[2];
        let j = (idx / self.n[2]) % self.n[1];
        let i = idx / (self.n[1] * self.n[2]);
        [i, j, k]
    }

    /// Physical coordinates of a node.
    pub fn coords(&self, idx: usize) -> [f64; 3] {
        let ijk = self.unravel(idx);
        let mut x = [0.0; 3];
        for ax in 0..self.dim {
            x[ax] = ijk[ax] as f64 * self.spacing(ax);
        }
        x
    }

    /// Signed integer mode number of FFT index `i` along `axis`.
    #[inline]
    pub fn mode(&self, axis: usize, i: usize) -> i64 {
        let n = self.n[axis];
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Angular wavenumber `2 pi m / L` of FFT index `i` along `axis`.
    #[inline]
    pub fn wavenumber(&self, axis: usize, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.mode(axis, i) as f64 / self.len[axis]
    }
}
