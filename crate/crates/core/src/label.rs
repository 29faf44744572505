//! Basis labels for every lattice and model.
//!
//! A label is either a coined label (site plus internal coin state) or a
//! scattering label (direction plus the site the state is incoming to).
//! Labels are totally ordered so that sparse states iterate deterministically.

use std::fmt;

use crate::error::{Result, WalkError};

/// Direction on the line, or one component of a square-lattice direction pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn from_value(v: i64) -> Result<Sign> {
        match v {
            -1 => Ok(Sign::Minus),
            1 => Ok(Sign::Plus),
            _ => Err(WalkError::InvalidParameter(format!(
                "direction sign must be -1 or +1, got {v}"
            ))),
        }
    }

    /// Row/column index in the `|-> = (1,0)`, `|+> = (0,1)` convention.
    pub fn index(self) -> usize {
        match self {
            Sign::Minus => 0,
            Sign::Plus => 1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Minus => "-",
            Sign::Plus => "+",
        })
    }
}

/// Square-lattice coin state, `1..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dir4(u8);

impl Dir4 {
    pub const ALL: [Dir4; 4] = [Dir4(1), Dir4(2), Dir4(3), Dir4(4)];

    pub fn new(sigma: i64) -> Result<Dir4> {
        match sigma {
            1..=4 => Ok(Dir4(sigma as u8)),
            _ => Err(WalkError::InvalidParameter(format!(
                "square coin index must be in 1..=4, got {sigma}"
            ))),
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

/// Honeycomb direction / coin state, `0..=2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dir3(u8);

impl Dir3 {
    pub const ALL: [Dir3; 3] = [Dir3(0), Dir3(1), Dir3(2)];

    pub fn new(sigma: i64) -> Result<Dir3> {
        match sigma {
            0..=2 => Ok(Dir3(sigma as u8)),
            _ => Err(WalkError::InvalidParameter(format!(
                "honeycomb direction must be in 0..=2, got {sigma}"
            ))),
        }
    }

    /// Reduces any integer mod 3 into a direction.
    pub fn wrap(x: i64) -> Dir3 {
        Dir3(x.rem_euclid(3) as u8)
    }

    pub fn get(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Model {
    Coined,
    Scattering,
}

impl Model {
    pub fn other(self) -> Model {
        match self {
            Model::Coined => Model::Scattering,
            Model::Scattering => Model::Coined,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Coined => "coined",
            Model::Scattering => "scattering",
        })
    }
}

/// Labels order by kind, then site `(j, k)`, then direction, so a sorted
/// state is laid out row by row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    /// `|j> (x) |sigma>`
    Coined1D { j: i64, sigma: Sign },
    /// `|sigma, j>`
    Scattering1D { sigma: Sign, j: i64 },
    /// `|j> (x) |k> (x) |sigma>`
    CoinedSquare { j: i64, k: i64, sigma: Dir4 },
    /// `|sx sy, (j, k)>`
    ScatteringSquare { sx: Sign, sy: Sign, j: i64, k: i64 },
    /// `|(j, k)> (x) |sigma>`
    CoinedHoney { j: i64, k: i64, sigma: Dir3 },
    /// `|sigma, (j, k)>`
    ScatteringHoney { sigma: Dir3, j: i64, k: i64 },
}

/// Discriminant of [`BasisLabel`]; one per (lattice, model) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelKind {
    Coined1D,
    Scattering1D,
    CoinedSquare,
    ScatteringSquare,
    CoinedHoney,
    ScatteringHoney,
}

impl LabelKind {
    pub fn model(self) -> Model {
        match self {
            LabelKind::Coined1D | LabelKind::CoinedSquare | LabelKind::CoinedHoney => Model::Coined,
            _ => Model::Scattering,
        }
    }
}

impl fmt::Display for LabelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LabelKind::Coined1D => "coined line",
            LabelKind::Scattering1D => "scattering line",
            LabelKind::CoinedSquare => "coined square",
            LabelKind::ScatteringSquare => "scattering square",
            LabelKind::CoinedHoney => "coined honeycomb",
            LabelKind::ScatteringHoney => "scattering honeycomb",
        })
    }
}

impl BasisLabel {
    pub fn kind(&self) -> LabelKind {
        match self {
            BasisLabel::Coined1D { .. } => LabelKind::Coined1D,
            BasisLabel::Scattering1D { .. } => LabelKind::Scattering1D,
            BasisLabel::CoinedSquare { .. } => LabelKind::CoinedSquare,
            BasisLabel::ScatteringSquare { .. } => LabelKind::ScatteringSquare,
            BasisLabel::CoinedHoney { .. } => LabelKind::CoinedHoney,
            BasisLabel::ScatteringHoney { .. } => LabelKind::ScatteringHoney,
        }
    }

    /// Site the label is attached to (the anchor site for scattering labels).
    pub fn site(&self) -> (i64, i64) {
        match *self {
            BasisLabel::Coined1D { j, .. } | BasisLabel::Scattering1D { j, .. } => (j, 0),
            BasisLabel::CoinedSquare { j, k, .. }
            | BasisLabel::ScatteringSquare { j, k, .. }
            | BasisLabel::CoinedHoney { j, k, .. }
            | BasisLabel::ScatteringHoney { j, k, .. } => (j, k),
        }
    }

    pub(crate) fn direction_code(&self) -> u8 {
        match *self {
            BasisLabel::Coined1D { sigma, .. } | BasisLabel::Scattering1D { sigma, .. } => sigma.index() as u8,
            BasisLabel::CoinedSquare { sigma, .. } => sigma.get(),
            BasisLabel::ScatteringSquare { sx, sy, .. } => (2 * sx.index() + sy.index()) as u8,
            BasisLabel::CoinedHoney { sigma, .. } | BasisLabel::ScatteringHoney { sigma, .. } => sigma.get(),
        }
    }

    fn order_key(&self) -> (LabelKind, i64, i64, u8) {
        let (j, k) = self.site();
        (self.kind(), j, k, self.direction_code())
    }

    pub(crate) fn expect_kind(&self, expected: LabelKind) -> Result<()> {
        let found = self.kind();
        if found == expected {
            Ok(())
        } else {
            Err(WalkError::LabelMismatch { expected, found })
        }
    }
}

impl Ord for BasisLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl PartialOrd for BasisLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Coined1D { j, sigma } => write!(f, "|{j}>|{sigma}>"),
            BasisLabel::Scattering1D { sigma, j } => write!(f, "|{sigma},{j}>"),
            BasisLabel::CoinedSquare { j, k, sigma } => write!(f, "|({j},{k})>|{}>", sigma.get()),
            BasisLabel::ScatteringSquare { sx, sy, j, k } => write!(f, "|{sx}{sy},({j},{k})>"),
            BasisLabel::CoinedHoney { j, k, sigma } => write!(f, "|({j},{k})>|{}>", sigma.get()),
            BasisLabel::ScatteringHoney { sigma, j, k } => write!(f, "|{},({j},{k})>", sigma.get()),
        }
    }
}
