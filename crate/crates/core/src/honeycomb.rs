//! Walks on the honeycomb lattice.
//!
//! Sites are integer pairs `(j, k)`. Rows with even `k` carry bonds north,
//! southeast and southwest; rows with odd `k` carry bonds south, northeast
//! and northwest. Direction labels `sigma` in `{0, 1, 2}` are tied to
//! directions through the site class `[j + [k]_2]_3`.
//!
//! The integer labeling splits into two disconnected honeycombs
//! (`j + floor(k / 2)` even or odd); a walk never leaves the one it starts on.

use num_complex::Complex64 as C64;

use crate::error::{Result, WalkError};
use crate::field::FieldHoney;
use crate::grid::{Orientation, Position, ProbabilityGrid};
use crate::label::{BasisLabel, Dir3, LabelKind, Model};
use crate::state::{Column, Relabeling, StepOperator, WaveFunction};

/// Mathematical remainder: always in `{0, 1, 2}`.
pub fn mod3(x: i64) -> i64 {
    x.rem_euclid(3)
}

fn parity_sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `phi_k(sigma) = [sigma - (-1)^k]_3`.
pub fn phi(k: i64, sigma: Dir3) -> Dir3 {
    Dir3::wrap(sigma.get() as i64 - parity_sign(k))
}

/// `(f(j, k; sigma), g(j, k; sigma))`.
pub fn step_site(j: i64, k: i64, sigma: Dir3) -> (i64, i64) {
    let d = sigma.get() as i64 - mod3(j + k.rem_euclid(2));
    let f = j + parity_sign(d) * d.signum();
    let g = k + parity_sign(k) * (1 - 2 * d.abs().signum());
    (f, g)
}

/// `S_sigma^dagger`: steps along `phi_k(sigma)`.
pub fn step_site_back(j: i64, k: i64, sigma: Dir3) -> (i64, i64) {
    step_site(j, k, phi(k, sigma))
}

/// The other incoming state on the bond of `|sigma, (j, k)>`.
pub fn bond_partner(j: i64, k: i64, sigma: Dir3) -> (i64, i64, Dir3) {
    let out = phi(k, sigma);
    let (j2, k2) = step_site(j, k, out);
    (j2, k2, out)
}

/// Cartesian position with unit bond length.
pub fn site_point(j: i64, k: i64) -> (f64, f64) {
    let x = j as f64 * 3f64.sqrt() / 2.0;
    let y = 1.5 * k.div_euclid(2) as f64 + k.rem_euclid(2) as f64;
    (x, y)
}

fn orientation_between(from: (i64, i64), to: (i64, i64)) -> Orientation {
    let (dj, dk) = (to.0 - from.0, to.1 - from.1);
    if dj == 0 {
        Orientation::Vertical
    } else if dj * dk > 0 {
        Orientation::Rising
    } else {
        Orientation::Falling
    }
}

/// The neighbour of `(j, k)` reached along a bond of the given orientation.
/// Each site has exactly one bond of each of the three orientations.
pub fn neighbor_along(j: i64, k: i64, orientation: Orientation) -> Option<(i64, i64)> {
    Dir3::ALL
        .into_iter()
        .map(|sigma| step_site(j, k, sigma))
        .find(|&to| orientation_between((j, k), to) == orientation)
}

/// Coined walk `U_c = (sum_sigma S_sigma (x) |sigma><sigma|) (sum |j,k><j,k| (x) C^{(j,k)})`.
#[derive(Debug, Clone)]
pub struct CoinedStepHoney {
    field: FieldHoney,
}

pub fn coined_step_honeycomb(field: FieldHoney) -> CoinedStepHoney {
    CoinedStepHoney { field }
}

impl StepOperator for CoinedStepHoney {
    fn domain(&self) -> LabelKind {
        LabelKind::CoinedHoney
    }

    fn max_row_shift(&self) -> Option<i64> {
        Some(1)
    }

    fn apply_basis(&self, label: &BasisLabel) -> Result<Column> {
        label.expect_kind(self.domain())?;
        let BasisLabel::CoinedHoney { j, k, sigma } = *label else { unreachable!() };
        let coin = self.field.at(&(j, k));
        Ok(Dir3::ALL
            .into_iter()
            .filter_map(|out| {
                let amp = coin.get(out.index(), sigma.index());
                let (j2, k2) = step_site(j, k, out);
                (amp != C64::new(0.0, 0.0)).then_some((BasisLabel::CoinedHoney { j: j2, k: k2, sigma: out }, amp))
            })
            .collect())
    }
}

/// Transition amplitudes out of `|sigma, (j, k)>`, split into the reflection
/// back along the incoming bond and the two transmissions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterSplit {
    pub reflection: (Dir3, C64),
    pub transmissions: [(Dir3, C64); 2],
}

pub fn scattering_split(field: &FieldHoney, j: i64, k: i64, sigma: Dir3) -> ScatterSplit {
    let gamma = field.at(&(j, k));
    let back = phi(k, sigma);
    let mut others = Dir3::ALL.into_iter().filter(|b| *b != back).map(|b| (b, gamma.get(b.index(), sigma.index())));
    ScatterSplit {
        reflection: (back, gamma.get(back.index(), sigma.index())),
        transmissions: [others.next().expect("three directions"), others.next().expect("three directions")],
    }
}

/// Scattering walk `U_s = T + R` with `r_{phi_k(sigma), sigma} = Gamma_{phi_k(sigma), sigma}`
/// and `t_{beta, alpha} = Gamma_{beta, alpha}` otherwise.
#[derive(Debug, Clone)]
pub struct ScatteringStepHoney {
    field: FieldHoney,
}

pub fn scattering_step_honeycomb(field: FieldHoney) -> ScatteringStepHoney {
    ScatteringStepHoney { field }
}

impl StepOperator for ScatteringStepHoney {
    fn domain(&self) -> LabelKind {
        LabelKind::ScatteringHoney
    }

    fn max_row_shift(&self) -> Option<i64> {
        Some(1)
    }

    fn apply_basis(&self, label: &BasisLabel) -> Result<Column> {
        label.expect_kind(self.domain())?;
        let BasisLabel::ScatteringHoney { sigma, j, k } = *label else { unreachable!() };
        let split = scattering_split(&self.field, j, k, sigma);
        let outgoing = |(beta, amp): (Dir3, C64)| {
            let (j2, k2) = step_site(j, k, beta);
            (BasisLabel::ScatteringHoney { sigma: beta, j: j2, k: k2 }, amp)
        };
        let mut column: Column = split.transmissions.into_iter().map(outgoing).collect();
        column.push(outgoing(split.reflection));
        column.retain(|(_, a)| *a != C64::new(0.0, 0.0));
        Ok(column)
    }
}

/// `E |sigma, (j, k)> = |(j, k)> (x) |sigma>`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HoneyE;

impl Relabeling for HoneyE {
    fn scattering_kind(&self) -> LabelKind {
        LabelKind::ScatteringHoney
    }

    fn coined_kind(&self) -> LabelKind {
        LabelKind::CoinedHoney
    }

    fn forward(&self, label: &BasisLabel) -> Result<BasisLabel> {
        label.expect_kind(LabelKind::ScatteringHoney)?;
        let BasisLabel::ScatteringHoney { sigma, j, k } = *label else { unreachable!() };
        Ok(BasisLabel::CoinedHoney { j, k, sigma })
    }

    fn backward(&self, label: &BasisLabel) -> Result<BasisLabel> {
        label.expect_kind(LabelKind::CoinedHoney)?;
        let BasisLabel::CoinedHoney { j, k, sigma } = *label else { unreachable!() };
        Ok(BasisLabel::ScatteringHoney { sigma, j, k })
    }
}

pub fn map_e_honeycomb(psi: &WaveFunction) -> Result<WaveFunction> {
    HoneyE.apply(psi)
}

pub fn map_e_dagger_honeycomb(psi: &WaveFunction) -> Result<WaveFunction> {
    HoneyE.apply_inverse(psi)
}

/// Canonical bond key: the smaller `(j, k, sigma)` of the two incoming
/// states on the bond, with the bond's geometric orientation.
pub fn bond_key(j: i64, k: i64, sigma: Dir3) -> Position {
    let (j2, k2, s2) = bond_partner(j, k, sigma);
    let (aj, ak, _) = (j, k, sigma).min((j2, k2, s2));
    let orientation = orientation_between((j, k), (j2, k2));
    Position::Bond { j: aj, k: ak, orientation }
}

/// `P_c^{(j,k)}`: the three coin states at a site.
pub fn site_projector_honeycomb(j: i64, k: i64) -> Vec<BasisLabel> {
    Dir3::ALL.map(|sigma| BasisLabel::CoinedHoney { j, k, sigma }).to_vec()
}

/// `P_s`: the two incoming states sharing the bond of `|sigma, (j, k)>`.
pub fn bond_projector_honeycomb(j: i64, k: i64, sigma: Dir3) -> Vec<BasisLabel> {
    let (j2, k2, s2) = bond_partner(j, k, sigma);
    vec![BasisLabel::ScatteringHoney { sigma, j, k }, BasisLabel::ScatteringHoney { sigma: s2, j: j2, k: k2 }]
}

/// `E^dagger P_c E`.
pub fn cross_site_projector_honeycomb(j: i64, k: i64) -> Vec<BasisLabel> {
    site_projector_honeycomb(j, k).iter().map(|l| HoneyE.backward(l).expect("coined label")).collect()
}

/// `E P_s E^dagger`.
pub fn cross_bond_projector_honeycomb(j: i64, k: i64, sigma: Dir3) -> Vec<BasisLabel> {
    bond_projector_honeycomb(j, k, sigma).iter().map(|l| HoneyE.forward(l).expect("scattering label")).collect()
}

pub fn site_probabilities_honeycomb(psi: &WaveFunction) -> Result<ProbabilityGrid> {
    let mut grid = ProbabilityGrid::new();
    for (label, amp) in psi {
        label.expect_kind(LabelKind::CoinedHoney)?;
        let (j, k) = label.site();
        grid.add(Position::Site { j, k }, amp.norm_sqr());
    }
    Ok(grid)
}

pub fn bond_probabilities_honeycomb(psi: &WaveFunction) -> Result<ProbabilityGrid> {
    let mut grid = ProbabilityGrid::new();
    for (label, amp) in psi {
        label.expect_kind(LabelKind::ScatteringHoney)?;
        let BasisLabel::ScatteringHoney { sigma, j, k } = *label else { unreachable!() };
        grid.add(bond_key(j, k, sigma), amp.norm_sqr());
    }
    Ok(grid)
}

pub fn cross_site_probabilities_honeycomb(psi_scattering: &WaveFunction) -> Result<ProbabilityGrid> {
    site_probabilities_honeycomb(&map_e_honeycomb(psi_scattering)?)
}

pub fn cross_bond_probabilities_honeycomb(psi_coined: &WaveFunction) -> Result<ProbabilityGrid> {
    bond_probabilities_honeycomb(&map_e_dagger_honeycomb(psi_coined)?)
}

pub fn native_grid_honeycomb(psi: &WaveFunction) -> Result<ProbabilityGrid> {
    match psi.kind() {
        None => Ok(ProbabilityGrid::new()),
        Some(LabelKind::CoinedHoney) => site_probabilities_honeycomb(psi),
        Some(LabelKind::ScatteringHoney) => bond_probabilities_honeycomb(psi),
        Some(found) => Err(WalkError::LabelMismatch { expected: LabelKind::CoinedHoney, found }),
    }
}

pub fn cross_grid_honeycomb(psi: &WaveFunction) -> Result<ProbabilityGrid> {
    match psi.kind() {
        None => Ok(ProbabilityGrid::new()),
        Some(LabelKind::CoinedHoney) => cross_bond_probabilities_honeycomb(psi),
        Some(LabelKind::ScatteringHoney) => cross_site_probabilities_honeycomb(psi),
        Some(found) => Err(WalkError::LabelMismatch { expected: LabelKind::CoinedHoney, found }),
    }
}

/// `|1, (0, 0)>`.
pub fn paper_initial_scattering() -> WaveFunction {
    WaveFunction::basis(BasisLabel::ScatteringHoney { sigma: Dir3::wrap(1), j: 0, k: 0 })
}

/// `|(0, 0)> (x) |1>`.
pub fn paper_initial_coined() -> WaveFunction {
    WaveFunction::basis(BasisLabel::CoinedHoney { j: 0, k: 0, sigma: Dir3::wrap(1) })
}

pub fn window_honeycomb(model: Model, radius: i64) -> Vec<BasisLabel> {
    let mut out = Vec::new();
    for j in -radius..=radius {
        for k in -radius..=radius {
            for sigma in Dir3::ALL {
                out.push(match model {
                    Model::Coined => BasisLabel::CoinedHoney { j, k, sigma },
                    Model::Scattering => BasisLabel::ScatteringHoney { sigma, j, k },
                });
            }
        }
    }
    out
}
