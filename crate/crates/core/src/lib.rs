//! Coined and scattering discrete-time quantum walks on the line, the square
//! lattice and the honeycomb lattice, with the relabeling map that carries
//! one formulation onto the other.

pub mod cli;
pub mod coins;
pub mod config;
pub mod error;
pub mod field;
pub mod grid;
pub mod honeycomb;
pub mod label;
pub mod line;
pub mod square;
pub mod state;

pub use coins::{catalog, check_unitary, CatalogName, Matrix, MatrixSpec, UnitarityCheck};
pub use error::{Result, WalkError};
pub use field::{Field1D, FieldHoney, FieldSquare, TransitionField};
pub use grid::{Lattice, Orientation, Position, ProbabilityGrid};
pub use label::{BasisLabel, Dir3, Dir4, LabelKind, Model, Sign};
pub use state::{apply_step, evolve, inner_product, norm_sq, probability_of, StepOperator, WaveFunction};
