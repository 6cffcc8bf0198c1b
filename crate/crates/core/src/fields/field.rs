use crate::error::{Error, Result};
use crate::fields::grid::Grid;
use crate::qtensor::{Mat3, QTensor, Vec3};

/// Value types that can live on grid nodes and be handled componentwise.
pub trait Components: Copy + Send + Sync + 'static {
    const N: usize;
    fn zero() -> Self;
    fn component(&self, c: usize) -> f64;
    fn set_component(&mut self, c: usize, v: f64);

    /// Euclidean inner product of the component vectors. For [`QTensor`]
    /// this is the Frobenius product of the full matrices instead.
    fn inner(&self, o: &Self) -> f64 {
        (0..Self::N).map(|c| self.component(c) * o.component(c)).sum()
    }

    fn from_fn(mut f: impl FnMut(usize) -> f64) -> Self {
        let mut v = Self::zero();
        for c in 0..Self::N {
            v.set_component(c, f(c));
        }
        v
    }
}

impl Components for f64 {
    const N: usize = 1;
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn component(&self, _: usize) -> f64 {
        *self
    }
    #[inline]
    fn set_component(&mut self, _: usize, v: f64) {
        *self = v;
    }
}

impl Components for Vec3 {
    const N: usize = 3;
    fn zero() -> Self {
        Vec3::zeros()
    }
    #[inline]
    fn component(&self, c: usize) -> f64 {
        self[c]
    }
    #[inline]
    fn set_component(&mut self, c: usize, v: f64) {
        self[c] = v;
    }
}

impl Components for Mat3 {
    const N: usize = 9;
    fn zero() -> Self {
        Mat3::zeros()
    }
    #[inline]
    fn component(&self, c: usize) -> f64 {
        self[(c / 3, c % 3)]
    }
    #[inline]
    fn set_component(&mut self, c: usize, v: f64) {
        self[(c / 3, c % 3)] = v;
    }
}

impl Components for QTensor {
    const N: usize = 5;
    fn zero() -> Self {
        QTensor::ZERO
    }
    #[inline]
    fn component(&self, c: usize) -> f64 {
        match c {
            0 => self.xx,
            1 => self.xy,
            2 => self.xz,
            3 => self.yy,
            _ => self.yz,
        }
    }
    #[inline]
    fn set_component(&mut self, c: usize, v: f64) {
        match c {
            0 => self.xx = v,
            1 => self.xy = v,
            2 => self.xz = v,
            3 => self.yy = v,
            _ => self.yz = v,
        }
    }
    fn inner(&self, o: &Self) -> f64 {
        self.dot(o)
    }
}

/// Node values of type `T` on a periodic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<T> {
    grid: Grid,
    data: Vec<T>,
}

pub type ScalarField = Field<f64>;
pub type VectorField = Field<Vec3>;
pub type TensorField = Field<Mat3>;
pub type QField = Field<QTensor>;

impl<T: Components> Field<T> {
    pub fn zeros(grid: Grid) -> Self {
        Field { grid, data: vec![T::zero(); grid.node_count()] }
    }

    pub fn constant(grid: Grid, value: T) -> Self {
        Field { grid, data: vec![value; grid.node_count()] }
    }

    pub fn from_vec(grid: Grid, data: Vec<T>) -> Result<Self> {
        if data.len() != grid.node_count() {
            return Err(Error::InvalidInput(format!(
                "field has {} values but the grid has {} nodes",
                data.len(),
                grid.node_count()
            )));
        }
        Ok(Field { grid, data })
    }

    /// Samples `f` at the physical coordinates of every node.
    pub fn from_fn(grid: Grid, mut f: impl FnMut([f64; 3]) -> T) -> Self {
        let data = (0..grid.node_count()).map(|i| f(grid.coords(i))).collect();
        Field { grid, data }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn map<U: Components>(&self, f: impl Fn(&T) -> U) -> Field<U> {
        Field { grid: self.grid, data: self.data.iter().map(f).collect() }
    }

    pub fn zip_map<S: Components, U: Components>(
        &self,
        other: &Field<S>,
        f: impl Fn(&T, &S) -> U,
    ) -> Field<U> {
        assert_same_grid(&self.grid, &other.grid);
        Field {
            grid: self.grid,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    /// Values of a single component, in node order.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.data.iter().map(|v| v.component(c)).collect()
    }

    pub fn set_component(&mut self, c: usize, values: &[f64]) {
        for (v, x) in self.data.iter_mut().zip(values) {
            v.set_component(c, *x);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| (0..T::N).all(|c| v.component(c).is_finite()))
    }

    /// Largest absolute component anywhere on the grid.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|v| (0..T::N).map(move |c| v.component(c).abs()))
            .fold(0.0, f64::max)
    }

    /// `self + k * other`, componentwise.
    pub fn axpy(&self, k: f64, other: &Field<T>) -> Field<T> {
        self.zip_map(other, |a, b| T::from_fn(|c| a.component(c) + k * b.component(c)))
    }

    pub fn scale(&self, k: f64) -> Field<T> {
        self.map(|a| T::from_fn(|c| k * a.component(c)))
    }

    pub fn check_grid(&self, other: &Grid) -> Result<()> {
        if &self.grid != other {
            return Err(Error::InvalidInput("fields live on different grids".into()));
        }
        Ok(())
    }
}

pub(crate) fn assert_same_grid(a: &Grid, b: &Grid) {
    assert_eq!(a, b, "fields live on different grids");
}
