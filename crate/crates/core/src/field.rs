use std::collections::BTreeMap;

use crate::coins::{check_unitary, Matrix, MatrixSpec};
use crate::error::{Result, WalkError};

/// Tolerance used when a matrix enters a field.
pub const FIELD_UNITARITY_TOL: f64 = 1e-12;

/// Position-dependent transition matrices: a default plus per-site overrides.
///
/// The same field serves as the coin `C` of a coined walk and as the
/// scattering matrix `Gamma` of a scattering walk.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionField<S: Ord> {
    dim: usize,
    default: Matrix,
    overrides: BTreeMap<S, Matrix>,
}

pub type Field1D = TransitionField<i64>;
pub type FieldSquare = TransitionField<(i64, i64)>;
pub type FieldHoney = TransitionField<(i64, i64)>;

fn validate(spec: &MatrixSpec, dim: usize) -> Result<()> {
    if spec.dim() != dim {
        return Err(WalkError::DimensionMismatch {
            name: spec.name.clone(),
            expected: dim,
            found: spec.dim(),
        });
    }
    let check = check_unitary(spec, FIELD_UNITARITY_TOL);
    if !check.passed {
        return Err(WalkError::NotUnitary { name: spec.name.clone(), deviation: check.max_deviation });
    }
    Ok(())
}

impl<S: Ord> TransitionField<S> {
    /// A uniform field. Fails if `default` is not `dim x dim` or not unitary.
    pub fn uniform(dim: usize, default: &MatrixSpec) -> Result<Self> {
        validate(default, dim)?;
        Ok(TransitionField { dim, default: default.matrix.clone(), overrides: BTreeMap::new() })
    }

    pub fn with_override(mut self, site: S, matrix: &MatrixSpec) -> Result<Self> {
        validate(matrix, self.dim)?;
        self.overrides.insert(site, matrix.matrix.clone());
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn default_matrix(&self) -> &Matrix {
        &self.default
    }

    pub fn at(&self, site: &S) -> &Matrix {
        self.overrides.get(site).unwrap_or(&self.default)
    }

    pub fn overrides(&self) -> impl Iterator<Item = (&S, &Matrix)> {
        self.overrides.iter()
    }
}
