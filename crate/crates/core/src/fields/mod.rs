//! Periodic grid fields and the discrete operators acting on them.

pub mod elastic;
pub mod field;
pub mod frank;
pub mod grid;
pub mod ops;

pub use elastic::{
    distortion_stress, elastic_operator, landau_energy, molecular_field, LandauEnergy,
};
pub use field::{Components, Field, QField, ScalarField, TensorField, VectorField};
pub use frank::{ericksen_stress, frank_energy, frank_molecular_field, FrankConstants};
pub use grid::{Grid, GridSpec};
pub use ops::{GridOps, Scheme, Summation};
