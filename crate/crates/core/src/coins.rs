//! Small dense complex matrices and the catalog of transition matrices used
//! as coins (coined model) or scattering matrices (scattering model).
//!
//! Dimension-4 entries are stored in the square-lattice row/column order
//! `[3, 1, 4, 2]`, dimension-3 entries in order `[0, 1, 2]`, and dimension-2
//! entries in order `[-, +]`.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Result, WalkError};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    /// Row-major.
    entries: Vec<C64>,
}

impl Matrix {
    pub fn identity(dim: usize) -> Matrix {
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        Matrix { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Matrix> {
        let dim = rows.len();
        if dim == 0 {
            return Err(WalkError::InvalidParameter("matrix has no rows".into()));
        }
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(WalkError::InvalidParameter(format!(
                "matrix row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        if rows.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(WalkError::InvalidParameter("matrix has non-finite entries".into()));
        }
        Ok(Matrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    /// Real matrix from row-major entries, multiplied by `scale`.
    pub fn from_real(dim: usize, scale: f64, entries: &[f64]) -> Matrix {
        assert_eq!(entries.len(), dim * dim, "from_real: wrong entry count");
        Matrix {
            dim,
            entries: entries.iter().map(|&x| C64::new(scale * x, 0.0)).collect(),
        }
    }

    fn from_complex(dim: usize, scale: f64, entries: &[C64]) -> Matrix {
        assert_eq!(entries.len(), dim * dim);
        Matrix { dim, entries: entries.iter().map(|&z| z * scale).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.entries.chunks(self.dim)
    }

    pub fn adjoint(&self) -> Matrix {
        let d = self.dim;
        let mut out = self.clone();
        for r in 0..d {
            for c in 0..d {
                out.entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        out
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "Matrix::mul: dimension mismatch");
        let d = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                out[r * d + c] = (0..d).map(|l| self.get(r, l) * rhs.get(l, c)).sum();
            }
        }
        Matrix { dim: d, entries: out }
    }

    /// Largest entrywise modulus of `M^dagger M - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let gram = self.adjoint().mul(self);
        let id = Matrix::identity(self.dim);
        gram.entries
            .iter()
            .zip(&id.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    fn index(&self, (row, col): (usize, usize)) -> &C64 {
        &self.entries[row * self.dim + col]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A named transition matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSpec {
    pub name: String,
    pub matrix: Matrix,
}

impl MatrixSpec {
    pub fn new(name: impl Into<String>, matrix: Matrix) -> MatrixSpec {
        MatrixSpec { name: name.into(), matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Fails unless the matrix is unitary within `tol`.
    pub fn validated(self, tol: f64) -> Result<MatrixSpec> {
        let check = check_unitary(&self, tol);
        if check.passed {
            Ok(self)
        } else {
            Err(WalkError::NotUnitary { name: self.name, deviation: check.max_deviation })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityCheck {
    pub passed: bool,
    pub max_deviation: f64,
}

pub fn check_unitary(m: &MatrixSpec, tol: f64) -> UnitarityCheck {
    let max_deviation = m.matrix.unitarity_deviation();
    UnitarityCheck { passed: max_deviation <= tol, max_deviation }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogName {
    /// x-y decoupled Hadamard, `H2 (+) H2`.
    DecoupledHadamard,
    Hadamard4,
    Grover4,
    Dft4,
    /// Complex matrix with all transition probabilities equal to 1/3.
    Unbiased3,
    /// Real matrix favouring the transitions 2->0, 0->1, 1->2.
    Biased3,
    /// Discrete Hartley transform.
    Dht3,
    Grover3,
    Dft3,
}

impl CatalogName {
    pub const ALL: [CatalogName; 9] = [
        CatalogName::DecoupledHadamard,
        CatalogName::Hadamard4,
        CatalogName::Grover4,
        CatalogName::Dft4,
        CatalogName::Unbiased3,
        CatalogName::Biased3,
        CatalogName::Dht3,
        CatalogName::Grover3,
        CatalogName::Dft3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CatalogName::DecoupledHadamard => "h2h2",
            CatalogName::Hadamard4 => "h4",
            CatalogName::Grover4 => "grover4",
            CatalogName::Dft4 => "dft4",
            CatalogName::Unbiased3 => "unb3",
            CatalogName::Biased3 => "bia3",
            CatalogName::Dht3 => "dht3",
            CatalogName::Grover3 => "grover3",
            CatalogName::Dft3 => "dft3",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            CatalogName::DecoupledHadamard
            | CatalogName::Hadamard4
            | CatalogName::Grover4
            | CatalogName::Dft4 => 4,
            _ => 3,
        }
    }

    /// Catalog entries of a given dimension.
    pub fn of_dim(dim: usize) -> impl Iterator<Item = CatalogName> {
        CatalogName::ALL.into_iter().filter(move |n| n.dim() == dim)
    }

    pub fn spec(self) -> MatrixSpec {
        MatrixSpec::new(self.as_str(), build(self))
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CatalogName {
    type Err = WalkError;

    fn from_str(s: &str) -> Result<CatalogName> {
        let key = s.trim().to_ascii_lowercase().replace(['_', '-'], "");
        Ok(match key.as_str() {
            "h2h2" | "h2+h2" | "decoupledhadamard" => CatalogName::DecoupledHadamard,
            "h4" | "hadamard4" => CatalogName::Hadamard4,
            "grover4" | "g4" => CatalogName::Grover4,
            "dft4" => CatalogName::Dft4,
            "unb3" | "unbiased3" => CatalogName::Unbiased3,
            "bia3" | "biased3" => CatalogName::Biased3,
            "dht3" | "hartley3" => CatalogName::Dht3,
            "grover3" | "g3" => CatalogName::Grover3,
            "dft3" => CatalogName::Dft3,
            "hadamard3" | "h3" => {
                return Err(WalkError::UnknownMatrix(format!(
                    "{s} (no 3x3 Hadamard matrix exists)"
                )))
            }
            _ => return Err(WalkError::UnknownMatrix(s.to_string())),
        })
    }
}

/// Looks up a catalog matrix by name.
pub fn catalog(name: &str) -> Result<MatrixSpec> {
    Ok(name.parse::<CatalogName>()?.spec())
}

/// The 2x2 Hadamard coin in `[-, +]` order.
pub fn hadamard2() -> MatrixSpec {
    MatrixSpec::new(
        "hadamard2",
        Matrix::from_real(2, std::f64::consts::FRAC_1_SQRT_2, &[1.0, 1.0, 1.0, -1.0]),
    )
}

fn build(name: CatalogName) -> Matrix {
    let s3 = 3f64.sqrt();
    let c = |re: f64, im: f64| C64::new(re, im);
    // exp(-i pi/3) and exp(+-2 pi i/3)
    let w = C64::from_polar(1.0, -std::f64::consts::PI / 3.0);
    let e_plus = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let e_minus = e_plus.conj();
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match name {
        CatalogName::DecoupledHadamard => Matrix::from_real(
            4,
            std::f64::consts::FRAC_1_SQRT_2,
            &[
                1.0, 1.0, 0.0, 0.0, //
                1.0, -1.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 1.0, //
                0.0, 0.0, 1.0, -1.0,
            ],
        ),
        CatalogName::Hadamard4 => Matrix::from_real(
            4,
            0.5,
            &[
                1.0, 1.0, 1.0, 1.0, //
                1.0, -1.0, 1.0, -1.0, //
                1.0, 1.0, -1.0, -1.0, //
                1.0, -1.0, -1.0, 1.0,
            ],
        ),
        CatalogName::Grover4 => Matrix::from_real(
            4,
            0.5,
            &[
                -1.0, 1.0, 1.0, 1.0, //
                1.0, -1.0, 1.0, 1.0, //
                1.0, 1.0, -1.0, 1.0, //
                1.0, 1.0, 1.0, -1.0,
            ],
        ),
        CatalogName::Dft4 => Matrix::from_complex(
            4,
            0.5,
            &[
                one, one, one, one, //
                one, i, -one, -i, //
                one, -one, one, -one, //
                one, -i, -one, i,
            ],
        ),
        CatalogName::Unbiased3 => Matrix::from_complex(
            3,
            1.0 / s3,
            &[
                -one, w, w, //
                w, -one, w, //
                w, w, -one,
            ],
        ),
        CatalogName::Biased3 => Matrix::from_real(
            3,
            1.0 / 3.0,
            &[
                1.0, 1.0 - s3, 1.0 + s3, //
                1.0 + s3, 1.0, 1.0 - s3, //
                1.0 - s3, 1.0 + s3, 1.0,
            ],
        ),
        CatalogName::Dht3 => Matrix::from_real(
            3,
            1.0 / (2.0 * s3),
            &[
                2.0, 2.0, 2.0, //
                2.0, -1.0 + s3, -1.0 - s3, //
                2.0, -1.0 - s3, -1.0 + s3,
            ],
        ),
        CatalogName::Grover3 => Matrix::from_real(
            3,
            1.0 / 3.0,
            &[
                -1.0, 2.0, 2.0, //
                2.0, -1.0, 2.0, //
                2.0, 2.0, -1.0,
            ],
        ),
        CatalogName::Dft3 => Matrix::from_complex(
            3,
            1.0 / s3,
            &[
                e_plus, one, e_minus, //
                one, one, one, //
                e_minus, one, e_plus,
            ],
        ),
    }
}
