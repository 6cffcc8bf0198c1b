use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::fields::field::{assert_same_grid, Components, Field};
use crate::fields::grid::Grid;
use crate::qtensor::{Mat3, QTensor, Vec3};

/// How first derivatives are discretized.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Second-order centered differences `(f[i+1] - f[i-1]) / 2h`.
    #[default]
    Central2,
    /// Fourier differentiation with the Nyquist mode dropped.
    Spectral,
}

/// Order in which grid reductions are accumulated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Summation {
    #[default]
    Naive,
    /// Fixed-order pairwise summation, used for bit-reproducible output.
    Pairwise,
}

/// Differential operators, transforms and reductions on one grid.
///
/// Every operator is diagonal in Fourier space with the effective wavevector
/// returned by [`GridOps::kappa`]: `i kappa` for first derivatives and
/// `-|kappa|^2` for the Laplacian. For [`Scheme::Central2`] that wavevector is
/// `sin(kh)/h`, so implicit Fourier solves invert exactly the stencils used
/// for explicit terms.
#[derive(Clone)]
pub struct GridOps {
    grid: Grid,
    scheme: Scheme,
    summation: Summation,
    forward: [Arc<dyn Fft<f64>>; 3],
    inverse: [Arc<dyn Fft<f64>>; 3],
}

impl fmt::Debug for GridOps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridOps")
            .field("grid", &self.grid)
            .field("scheme", &self.scheme)
            .field("summation", &self.summation)
            .finish()
    }
}

impl GridOps {
    pub fn new(grid: Grid, scheme: Scheme) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.extents();
        let forward = [0, 1, 2].map(|a| planner.plan_fft_forward(n[a]));
        let inverse = [0, 1, 2].map(|a| planner.plan_fft_inverse(n[a]));
        GridOps { grid, scheme, summation: Summation::Naive, forward, inverse }
    }

    pub fn with_summation(mut self, summation: Summation) -> Self {
        self.summation = summation;
        self
    }

    pub fn with_scheme(&self, scheme: Scheme) -> Self {
        GridOps { scheme, ..self.clone() }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn summation(&self) -> Summation {
        self.summation
    }

    fn transform(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.grid.extents();
        let plans = if inverse { &self.inverse } else { &self.forward };
        for axis in 0..self.grid.dim() {
            let len = n[axis];
            let stride: usize = n[axis + 1..].iter().product();
            if stride == 1 {
                for line in buf.chunks_exact_mut(len) {
                    plans[axis].process(line);
                }
                continue;
            }
            let mut line = vec![Complex64::new(0.0, 0.0); len];
            let block = len * stride;
            for start in (0..buf.len()).step_by(block) {
                for offset in 0..stride {
                    let base = start + offset;
                    for (i, x) in line.iter_mut().enumerate() {
                        *x = buf[base + i * stride];
                    }
                    plans[axis].process(&mut line);
                    for (i, x) in line.iter().enumerate() {
                        buf[base + i * stride] = *x;
                    }
                }
            }
        }
    }

    /// Unnormalized forward transform of node values.
    pub fn fft(&self, data: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.transform(&mut buf, false);
        buf
    }

    /// Inverse of [`GridOps::fft`], keeping the real part.
    pub fn ifft(&self, mut spec: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut spec, true);
        let scale = 1.0 / spec.len() as f64;
        spec.iter().map(|z| z.re * scale).collect()
    }

    pub fn kappa_axis(&self, axis: usize, i: usize) -> f64 {
        if axis >= self.grid.dim() {
            return 0.0;
        }
        let k = self.grid.wavenumber(axis, i);
        match self.scheme {
            Scheme::Spectral => {
                if 2 * i == self.grid.extents()[axis] {
                    0.0
                } else {
                    k
                }
            }
            Scheme::Central2 => {
                let h = self.grid.spacing(axis);
                (k * h).sin() / h
            }
        }
    }

    /// Effective wavevector of the Fourier mode stored at `idx`.
    pub fn kappa(&self, idx: usize) -> Vec3 {
        let ijk = self.grid.unravel(idx);
        Vec3::new(
            self.kappa_axis(0, ijk[0]),
            self.kappa_axis(1, ijk[1]),
            self.kappa_axis(2, ijk[2]),
        )
    }

    /// Modes kept by the two-thirds dealiasing rule.
    pub fn dealias_keeps(&self, idx: usize) -> bool {
        let ijk = self.grid.unravel(idx);
        let n = self.grid.extents();
        (0..self.grid.dim()).all(|a| 3 * self.grid.mode(a, ijk[a]).unsigned_abs() as usize <= n[a])
    }

    pub fn to_spectral<T: Components>(&self, f: &Field<T>) -> Vec<Vec<Complex64>> {
        assert_same_grid(&self.grid, f.grid());
        (0..T::N).map(|c| self.fft(&f.component(c))).collect()
    }

    pub fn from_spectral<T: Components>(&self, spec: Vec<Vec<Complex64>>) -> Field<T> {
        let mut out = Field::zeros(self.grid);
        for (c, s) in spec.into_iter().enumerate() {
            out.set_component(c, &self.ifft(s));
        }
        out
    }

    /// Applies a real-linear map to every Fourier mode: `g(idx, x)` is called
    /// separately on the real and the imaginary part of the coefficients.
    pub fn map_spectral<T: Components>(
        &self,
        f: &Field<T>,
        g: impl Fn(usize, T) -> T,
    ) -> Field<T> {
        let mut spec = self.to_spectral(f);
        for idx in 0..self.grid.node_count() {
            let re = g(idx, T::from_fn(|c| spec[c][idx].re));
            let im = g(idx, T::from_fn(|c| spec[c][idx].im));
            for (c, s) in spec.iter_mut().enumerate() {
                s[idx] = Complex64::new(re.component(c), im.component(c));
            }
        }
        self.from_spectral(spec)
    }

    /// Derivative along `axis`, componentwise.
    pub fn deriv<T: Components>(&self, f: &Field<T>, axis: usize) -> Field<T> {
        assert_same_grid(&self.grid, f.grid());
        if axis >= self.grid.dim() {
            return Field::zeros(self.grid);
        }
        match self.scheme {
            Scheme::Central2 => self.central_difference(f, axis),
            Scheme::Spectral => {
                let mut spec = self.to_spectral(f);
                for s in spec.iter_mut() {
                    for (idx, z) in s.iter_mut().enumerate() {
                        let k = self.kappa_axis(axis, self.grid.unravel(idx)[axis]);
                        *z = Complex64::new(-k * z.im, k * z.re);
                    }
                }
                self.from_spectral(spec)
            }
        }
    }

    fn central_difference<T: Components>(&self, f: &Field<T>, axis: usize) -> Field<T> {
        let n = self.grid.extents();
        let stride: usize = n[axis + 1..].iter().product();
        let len = n[axis];
        let inv2h = 0.5 / self.grid.spacing(axis);
        let vals = f.values();
        let data = (0..vals.len())
            .map(|idx| {
                let i = (idx / stride) % len;
                let base = idx - i * stride;
                let up = base + ((i + 1) % len) * stride;
                let down = base + ((i + len - 1) % len) * stride;
                T::from_fn(|c| (vals[up].component(c) - vals[down].component(c)) * inv2h)
            })
            .collect();
        Field::from_vec(self.grid, data).expect("same grid")
    }

    pub fn gradient<T: Components>(&self, f: &Field<T>) -> [Field<T>; 3] {
        [0, 1, 2].map(|a| self.deriv(f, a))
    }

    pub fn scalar_gradient(&self, f: &Field<f64>) -> Field<Vec3> {
        let [dx, dy, dz] = self.gradient(f);
        let mut out = Field::zeros(self.grid);
        for (i, g) in out.values_mut().iter_mut().enumerate() {
            *g = Vec3::new(dx.values()[i], dy.values()[i], dz.values()[i]);
        }
        out
    }

    /// `G_ij = d_j v_i`.
    pub fn vector_gradient(&self, v: &Field<Vec3>) -> Field<Mat3> {
        let parts = self.gradient(v);
        let mut out: Field<Mat3> = Field::zeros(self.grid);
        for (idx, g) in out.values_mut().iter_mut().enumerate() {
            for (j, part) in parts.iter().enumerate() {
                g.set_column(j, &part.values()[idx]);
            }
        }
        out
    }

    pub fn divergence(&self, v: &Field<Vec3>) -> Field<f64> {
        let mut out: Field<f64> = Field::zeros(self.grid);
        for axis in 0..self.grid.dim() {
            let comp = Field::from_vec(self.grid, v.component(axis)).expect("same grid");
            let d = self.deriv(&comp, axis);
            for (o, x) in out.values_mut().iter_mut().zip(d.values()) {
                *o += x;
            }
        }
        out
    }

    /// `(div sigma)_i = d_j sigma_ij`.
    pub fn tensor_divergence(&self, sigma: &Field<Mat3>) -> Field<Vec3> {
        let mut out = Field::zeros(self.grid);
        for j in 0..self.grid.dim() {
            let col = sigma.map(|m| Vec3::from(m.column(j)));
            let d = self.deriv(&col, j);
            for (o, x) in out.values_mut().iter_mut().zip(d.values()) {
                *o += x;
            }
        }
        out
    }

    /// Divergence of a symmetric traceless tensor field, `d_j Q_ij`.
    pub fn q_divergence(&self, q: &Field<QTensor>) -> Field<Vec3> {
        self.tensor_divergence(&q.map(|x| x.to_matrix()))
    }

    /// Laplacian with Fourier symbol `-|kappa|^2`.
    pub fn laplacian<T: Components>(&self, f: &Field<T>) -> Field<T> {
        self.map_spectral(f, |idx, x| {
            let k2 = self.kappa(idx).norm_squared();
            T::from_fn(|c| -k2 * x.component(c))
        })
    }

    /// Zeroes every mode outside the two-thirds band.
    pub fn dealias<T: Components>(&self, f: &Field<T>) -> Field<T> {
        self.map_spectral(f, |idx, x| if self.dealias_keeps(idx) { x } else { T::zero() })
    }

    pub fn sum(&self, values: &[f64]) -> f64 {
        match self.summation {
            Summation::Naive => values.iter().sum(),
            Summation::Pairwise => pairwise_sum(values),
        }
    }

    /// Midpoint-rule integral of `g` over the box.
    pub fn integrate<T: Components>(&self, f: &Field<T>, g: impl Fn(&T) -> f64) -> f64 {
        let vals: Vec<f64> = f.values().iter().map(g).collect();
        self.sum(&vals) * self.grid.cell_volume()
    }

    pub fn integrate_scalar(&self, f: &Field<f64>) -> f64 {
        self.sum(f.values()) * self.grid.cell_volume()
    }

    /// Grid inner product using [`Components::inner`] at each node.
    pub fn inner<T: Components>(&self, a: &Field<T>, b: &Field<T>) -> f64 {
        assert_same_grid(a.grid(), b.grid());
        let vals: Vec<f64> = a.values().iter().zip(b.values()).map(|(x, y)| x.inner(y)).collect();
        self.sum(&vals) * self.grid.cell_volume()
    }

    pub fn norm_l2<T: Components>(&self, a: &Field<T>) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }
}

fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}
