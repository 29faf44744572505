//! Walks on the square lattice.
//!
//! Coined states `|j>|k>|sigma>` with `sigma` in `1..=4`; scattering states
//! `|sx sy, (j, k)>` incoming to `(j, k)`. Directions pair with coin states
//! as `++ -> 1`, `-+ -> 2`, `-- -> 3`, `+- -> 4`, and every 4x4 matrix is
//! indexed in the order `[3, 1, 4, 2]` (equivalently `[--, ++, +-, -+]`).
//!
//! Two geometries are supported. In the natural one a step moves along an
//! edge; in the diagonal one it moves along a cell diagonal, which is the
//! natural walk under the site map `(j, k) -> (j - k, j + k)`.

use num_complex::Complex64 as C64;

use crate::error::{Result, WalkError};
use crate::field::FieldSquare;
use crate::grid::{Lattice, Orientation, Position, ProbabilityGrid};
use crate::label::{BasisLabel, Dir4, LabelKind, Model, Sign};
use crate::state::{Column, Relabeling, StepOperator, WaveFunction};

/// Coin states in matrix row/column order.
pub const MATRIX_ORDER: [u8; 4] = [3, 1, 4, 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SquareGeometry {
    #[default]
    Natural,
    Diagonal,
}

impl SquareGeometry {
    pub fn lattice(self) -> Lattice {
        match self {
            SquareGeometry::Natural => Lattice::Square,
            SquareGeometry::Diagonal => Lattice::SquareDiagonal,
        }
    }

    /// Maps a natural-lattice displacement into this geometry.
    pub fn orient(self, (dj, dk): (i64, i64)) -> (i64, i64) {
        match self {
            SquareGeometry::Natural => (dj, dk),
            SquareGeometry::Diagonal => rotate_site(dj, dk),
        }
    }
}

/// `(j, k) -> (j - k, j + k)`: natural-lattice sites to diagonal-lattice sites.
pub fn rotate_site(j: i64, k: i64) -> (i64, i64) {
    (j - k, j + k)
}

/// Row/column of coin state `sigma` in a stored 4x4 matrix.
pub fn coin_index(sigma: Dir4) -> usize {
    match sigma.get() {
        3 => 0,
        1 => 1,
        4 => 2,
        _ => 3,
    }
}

/// `sigma = (5 - (2 + sx) sy) / 2` for `sx, sy` in `{-1, +1}`.
pub fn sigma_pair_to_coin(sx: i64, sy: i64) -> Result<Dir4> {
    let (sx, sy) = (Sign::from_value(sx)?, Sign::from_value(sy)?);
    Ok(pair_to_coin(sx, sy))
}

pub fn pair_to_coin(sx: Sign, sy: Sign) -> Dir4 {
    let sigma = (5 - (2 + sx.value()) * sy.value()) / 2;
    Dir4::new(sigma).expect("closed form stays in 1..=4")
}

pub fn coin_to_pair(sigma: Dir4) -> (Sign, Sign) {
    match sigma.get() {
        1 => (Sign::Plus, Sign::Plus),
        2 => (Sign::Minus, Sign::Plus),
        3 => (Sign::Minus, Sign::Minus),
        _ => (Sign::Plus, Sign::Minus),
    }
}

/// Natural displacement of an outgoing pair:
/// `(alpha |alpha + beta| / 2, beta |alpha - beta| / 2)`.
pub fn pair_displacement(alpha: Sign, beta: Sign) -> (i64, i64) {
    let (a, b) = (alpha.value(), beta.value());
    (a * (a + b).abs() / 2, b * (a - b).abs() / 2)
}

/// Displacement of the shift `N` for coin state `sigma`.
fn natural_shift(sigma: Dir4) -> (i64, i64) {
    match sigma.get() {
        1 => (1, 0),
        3 => (-1, 0),
        2 => (0, 1),
        _ => (0, -1),
    }
}

/// Displacement of the extra shift `D` of the diagonal walk.
fn diagonal_shift(sigma: Dir4) -> (i64, i64) {
    match sigma.get() {
        1 => (0, 1),
        3 => (0, -1),
        2 => (-1, 0),
        _ => (1, 0),
    }
}

const PAIRS: [(Sign, Sign); 4] = [
    (Sign::Minus, Sign::Minus),
    (Sign::Plus, Sign::Plus),
    (Sign::Plus, Sign::Minus),
    (Sign::Minus, Sign::Plus),
];

/// Natural coined walk: `U_c = N (sum_{j,k} |j,k><j,k| (x) C^{(j,k)})`.
#[derive(Debug, Clone)]
pub struct CoinedStepSquare {
    field: FieldSquare,
}

pub fn coined_step_square(field: FieldSquare) -> CoinedStepSquare {
    CoinedStepSquare { field }
}

impl StepOperator for CoinedStepSquare {
    fn domain(&self) -> LabelKind {
        LabelKind::CoinedSquare
    }

    fn max_row_shift(&self) -> Option<i64> {
        Some(1)
    }

    fn apply_basis(&self, label: &BasisLabel) -> Result<Column> {
        label.expect_kind(self.domain())?;
        let BasisLabel::CoinedSquare { j, k, sigma } = *label else { unreachable!() };
        let coin = self.field.at(&(j, k));
        let col = coin_index(sigma);
        Ok(Dir4::ALL
            .into_iter()
            .filter_map(|out| {
                let amp = coin.get(coin_index(out), col);
                let (dj, dk) = natural_shift(out);
                (amp != C64::new(0.0, 0.0)).then_some((BasisLabel::CoinedSquare { j: j + dj, k: k + dk, sigma: out }, amp))
            })
            .collect())
    }
}

/// Diagonal coined walk `U_diag = D U_c`.
#[derive(Debug, Clone)]
pub struct DiagonalStepSquare {
    natural: CoinedStepSquare,
}

pub fn diagonal_step_square(field: FieldSquare) -> DiagonalStepSquare {
    DiagonalStepSquare { natural: coined_step_square(field) }
}

impl StepOperator for DiagonalStepSquare {
    fn domain(&self) -> LabelKind {
        LabelKind::CoinedSquare
    }

    fn max_row_shift(&self) -> Option<i64> {
        Some(1)
    }

    fn apply_basis(&self, label: &BasisLabel) -> Result<Column> {
        let mut column = self.natural.apply_basis(label)?;
        for (out, _) in column.iter_mut() {
            let BasisLabel::CoinedSquare { j, k, sigma } = *out else { unreachable!() };
            let (dj, dk) = diagonal_shift(sigma);
            *out = BasisLabel::CoinedSquare { j: j + dj, k: k + dk, sigma };
        }
        Ok(column)
    }
}

/// Scattering walk `U_s = T + R`, with amplitudes read from
/// `Gamma^{(j,k)}[(alpha beta), (sx sy)]`.
#[derive(Debug, Clone)]
pub struct ScatteringStepSquare {
    field: FieldSquare,
    geometry: SquareGeometry,
}

pub fn scattering_step_square(field: FieldSquare) -> ScatteringStepSquare {
    ScatteringStepSquare { field, geometry: SquareGeometry::Natural }
}

pub fn scattering_step_square_with(field: FieldSquare, geometry: SquareGeometry) -> ScatteringStepSquare {
    ScatteringStepSquare { field, geometry }
}

impl ScatteringStepSquare {
    fn outgoing(&self, j: i64, k: i64, alpha: Sign, beta: Sign, amp: C64) -> (BasisLabel, C64) {
        let (dj, dk) = self.geometry.orient(pair_displacement(alpha, beta));
        (BasisLabel::ScatteringSquare { sx: alpha, sy: beta, j: j + dj, k: k + dk }, amp)
    }
}

impl StepOperator for ScatteringStepSquare {
    fn domain(&self) -> LabelKind {
        LabelKind::ScatteringSquare
    }

    fn max_row_shift(&self) -> Option<i64> {
        Some(1)
    }

    fn apply_basis(&self, label: &BasisLabel) -> Result<Column> {
        label.expect_kind(self.domain())?;
        let BasisLabel::ScatteringSquare { sx, sy, j, k } = *label else { unreachable!() };
        let gamma = self.field.at(&(j, k));
        let col = coin_index(pair_to_coin(sx, sy));
        let entry = |alpha: Sign, beta: Sign| gamma.get(coin_index(pair_to_coin(alpha, beta)), col);

        let mut column = Column::new();
        // T: the three outgoing directions other than straight back
        for (alpha, beta) in PAIRS {
            if (alpha, beta) != (sx.flip(), sy.flip()) {
                column.push(self.outgoing(j, k, alpha, beta, entry(alpha, beta)));
            }
        }
        // R: back along the incoming bond
        let (rx, ry) = (sx.flip(), sy.flip());
        column.push(self.outgoing(j, k, rx, ry, entry(rx, ry)));
        column.retain(|(_, a)| *a != C64::new(0.0, 0.0));
        Ok(column)
    }
}

/// `E |sx sy, (j,k)> = |j>|k>|(5 - (2 + sx) sy) / 2>`.
#[derive(Debug, Clone, Copy, Default)]
pub struct SquareE;

impl Relabeling for SquareE {
    fn scattering_kind(&self) -> LabelKind {
        LabelKind::ScatteringSquare
    }

    fn coined_kind(&self) -> LabelKind {
        LabelKind::CoinedSquare
    }

    fn forward(&self, label: &BasisLabel) -> Result<BasisLabel> {
        label.expect_kind(LabelKind::ScatteringSquare)?;
        let BasisLabel::ScatteringSquare { sx, sy, j, k } = *label else { unreachable!() };
        Ok(BasisLabel::CoinedSquare { j, k, sigma: pair_to_coin(sx, sy) })
    }

    fn backward(&self, label: &BasisLabel) -> Result<BasisLabel> {
        label.expect_kind(LabelKind::CoinedSquare)?;
        let BasisLabel::CoinedSquare { j, k, sigma } = *label else { unreachable!() };
        let (sx, sy) = coin_to_pair(sigma);
        Ok(BasisLabel::ScatteringSquare { sx, sy, j, k })
    }
}

pub fn map_e_square(psi: &WaveFunction) -> Result<WaveFunction> {
    SquareE.apply(psi)
}

pub fn map_e_dagger_square(psi: &WaveFunction) -> Result<WaveFunction> {
    SquareE.apply_inverse(psi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BondClass {
    /// `sx sy = +1`
    Horizontal,
    /// `sx sy = -1`
    Vertical,
}

/// A bond, anchored at the site its `++` (horizontal) or `-+` (vertical)
/// state is incoming to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BondId {
    pub j: i64,
    pub k: i64,
    pub class: BondClass,
}

impl BondId {
    pub fn position(&self, geometry: SquareGeometry) -> Position {
        let orientation = match (geometry, self.class) {
            (SquareGeometry::Natural, BondClass::Horizontal) => Orientation::Horizontal,
            (SquareGeometry::Natural, BondClass::Vertical) => Orientation::Vertical,
            (SquareGeometry::Diagonal, BondClass::Horizontal) => Orientation::Rising,
            (SquareGeometry::Diagonal, BondClass::Vertical) => Orientation::Falling,
        };
        Position::Bond { j: self.j, k: self.k, orientation }
    }
}

fn class_of(sx: Sign, sy: Sign) -> BondClass {
    if sx == sy {
        BondClass::Horizontal
    } else {
        BondClass::Vertical
    }
}

/// The bond a scattering label lives on.
pub fn bond_of(label: &BasisLabel, geometry: SquareGeometry) -> Result<BondId> {
    label.expect_kind(LabelKind::ScatteringSquare)?;
    let BasisLabel::ScatteringSquare { sx, sy, j, k } = *label else { unreachable!() };
    let class = class_of(sx, sy);
    if sy == Sign::Plus {
        Ok(BondId { j, k, class })
    } else {
        let (dj, dk) = geometry.orient(pair_displacement(sx, sy));
        Ok(BondId { j: j - dj, k: k - dk, class })
    }
}

/// `P_c^{(j,k)}`: the four coin states at a site.
pub fn site_projector_square(j: i64, k: i64) -> Vec<BasisLabel> {
    Dir4::ALL.map(|sigma| BasisLabel::CoinedSquare { j, k, sigma }).to_vec()
}

/// `P_s^{(j,k;+)}` / `P_s^{(j,k;-)}`: the two states on a bond.
pub fn bond_projector_square(bond: BondId, geometry: SquareGeometry) -> Vec<BasisLabel> {
    let (sx, sy) = match bond.class {
        BondClass::Horizontal => (Sign::Plus, Sign::Plus),
        BondClass::Vertical => (Sign::Minus, Sign::Plus),
    };
    let (dj, dk) = geometry.orient(pair_displacement(sx, sy));
    vec![
        BasisLabel::ScatteringSquare { sx, sy, j: bond.j, k: bond.k },
        BasisLabel::ScatteringSquare { sx: sx.flip(), sy: sy.flip(), j: bond.j - dj, k: bond.k - dk },
    ]
}

/// `E^dagger P_c E`: reads the coined site probability from a scattering state.
pub fn cross_site_projector_square(j: i64, k: i64) -> Vec<BasisLabel> {
    site_projector_square(j, k).iter().map(|l| SquareE.backward(l).expect("coined label")).collect()
}

/// `E P_s E^dagger`: reads the scattering bond probability from a coined state.
pub fn cross_bond_projector_square(bond: BondId, geometry: SquareGeometry) -> Vec<BasisLabel> {
    bond_projector_square(bond, geometry).iter().map(|l| SquareE.forward(l).expect("scattering label")).collect()
}

pub fn site_probabilities_square(psi: &WaveFunction) -> Result<ProbabilityGrid> {
    let mut grid = ProbabilityGrid::new();
    for (label, amp) in psi {
        label.expect_kind(LabelKind::CoinedSquare)?;
        let (j, k) = label.site();
        grid.add(Position::Site { j, k }, amp.norm_sqr());
    }
    Ok(grid)
}

pub fn bond_probabilities_square(psi: &WaveFunction, geometry: SquareGeometry) -> Result<ProbabilityGrid> {
    let mut grid = ProbabilityGrid::new();
    for (label, amp) in psi {
        grid.add(bond_of(label, geometry)?.position(geometry), amp.norm_sqr());
    }
    Ok(grid)
}

/// Coined site probabilities from a scattering-evolved state.
pub fn cross_site_probabilities_square(psi_scattering: &WaveFunction) -> Result<ProbabilityGrid> {
    site_probabilities_square(&map_e_square(psi_scattering)?)
}

/// Scattering bond probabilities from a coined-evolved state.
pub fn cross_bond_probabilities_square(psi_coined: &WaveFunction, geometry: SquareGeometry) -> Result<ProbabilityGrid> {
    bond_probabilities_square(&map_e_dagger_square(psi_coined)?, geometry)
}

pub fn native_grid_square(psi: &WaveFunction, geometry: SquareGeometry) -> Result<ProbabilityGrid> {
    match psi.kind() {
        None => Ok(ProbabilityGrid::new()),
        Some(LabelKind::CoinedSquare) => site_probabilities_square(psi),
        Some(LabelKind::ScatteringSquare) => bond_probabilities_square(psi, geometry),
        Some(found) => Err(WalkError::LabelMismatch { expected: LabelKind::CoinedSquare, found }),
    }
}

pub fn cross_grid_square(psi: &WaveFunction, geometry: SquareGeometry) -> Result<ProbabilityGrid> {
    match psi.kind() {
        None => Ok(ProbabilityGrid::new()),
        Some(LabelKind::CoinedSquare) => cross_bond_probabilities_square(psi, geometry),
        Some(LabelKind::ScatteringSquare) => cross_site_probabilities_square(psi),
        Some(found) => Err(WalkError::LabelMismatch { expected: LabelKind::CoinedSquare, found }),
    }
}

/// `(|++> + i|--> + |-+> + i|+->) / 2` at the origin.
pub fn paper_initial_scattering() -> WaveFunction {
    let half = C64::new(0.5, 0.0);
    let half_i = C64::new(0.0, 0.5);
    let at = |sx, sy| BasisLabel::ScatteringSquare { sx, sy, j: 0, k: 0 };
    WaveFunction::from_entries([
        (at(Sign::Plus, Sign::Plus), half),
        (at(Sign::Minus, Sign::Minus), half_i),
        (at(Sign::Minus, Sign::Plus), half),
        (at(Sign::Plus, Sign::Minus), half_i),
    ])
    .expect("homogeneous")
}

/// `E` applied to [`paper_initial_scattering`].
pub fn paper_initial_coined() -> WaveFunction {
    map_e_square(&paper_initial_scattering()).expect("scattering labels")
}

pub fn window_square(model: Model, radius: i64) -> Vec<BasisLabel> {
    let mut out = Vec::new();
    for j in -radius..=radius {
        for k in -radius..=radius {
            for sigma in Dir4::ALL {
                let coined = BasisLabel::CoinedSquare { j, k, sigma };
                out.push(match model {
                    Model::Coined => coined,
                    Model::Scattering => SquareE.backward(&coined).expect("coined label"),
                });
            }
        }
    }
    out
}
