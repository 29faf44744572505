//! The walk on the line, in both formulations.
//!
//! Coined states `|j> (x) |sigma>` live on sites. Scattering states
//! `|sigma, j>` live on bonds: the bond between `j - 1` and `j` carries
//! `|+, j>` and `|-, j - 1>`, and it is indexed by `j`.

use num_complex::Complex64 as C64;
use smallvec::smallvec;

use crate::coins::{Matrix, MatrixSpec};
use crate::error::{Result, WalkError};
use crate::field::Field1D;
use crate::grid::{Orientation, Position, ProbabilityGrid};
use crate::label::{BasisLabel, LabelKind, Model, Sign};
use crate::state::{Column, Relabeling, StepOperator, WaveFunction};

/// Angles of the general unitary 2x2 coin.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoinParams1D {
    /// Global phase.
    pub gamma: f64,
    pub xi: f64,
    pub zeta: f64,
    /// Mixing angle; `pi / 4` with zero phases gives the Hadamard coin.
    pub theta: f64,
}

/// Reflection probability `rho` and phases of a 1D scatterer.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScatterParams1D {
    pub rho: f64,
    /// Global phase, zero unless the scatterers differ in it.
    pub lambda: f64,
    /// Transmission phase.
    pub phi: f64,
    /// Reflection phase.
    pub varphi: f64,
}

/// Transmission and reflection amplitudes of one site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterAmps {
    pub t_plus: C64,
    pub t_minus: C64,
    pub r_plus: C64,
    pub r_minus: C64,
}

impl ScatterAmps {
    pub fn t(&self, sigma: Sign) -> C64 {
        match sigma {
            Sign::Plus => self.t_plus,
            Sign::Minus => self.t_minus,
        }
    }

    pub fn r(&self, sigma: Sign) -> C64 {
        match sigma {
            Sign::Plus => self.r_plus,
            Sign::Minus => self.r_minus,
        }
    }

    /// The equivalent 2x2 matrix: `c_{sigma sigma} = t_sigma` and
    /// `c_{-sigma sigma} = r_sigma`, in `[-, +]` order.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(vec![vec![self.t_minus, self.r_plus], vec![self.r_minus, self.t_plus]])
            .expect("2x2")
    }

    /// Reads `(t, r)` back from a 2x2 matrix.
    pub fn from_matrix(m: &Matrix) -> ScatterAmps {
        let (minus, plus) = (Sign::Minus.index(), Sign::Plus.index());
        ScatterAmps {
            t_plus: m.get(plus, plus),
            t_minus: m.get(minus, minus),
            r_plus: m.get(minus, plus),
            r_minus: m.get(plus, minus),
        }
    }
}

/// The most general unitary coin, in `[-, +]` order.
pub fn general_coin(p: &CoinParams1D) -> Matrix {
    let phase = C64::from_polar(1.0, p.gamma);
    // sin taken as a shifted cos so that sin and cos agree bitwise at pi/4
    let (s, c) = ((std::f64::consts::FRAC_PI_2 - p.theta).cos(), p.theta.cos());
    let rows = vec![
        vec![phase * C64::from_polar(c, p.xi), phase * C64::from_polar(s, p.zeta)],
        vec![phase * C64::from_polar(s, -p.zeta), -phase * C64::from_polar(c, -p.xi)],
    ];
    Matrix::from_rows(rows).expect("2x2")
}

pub fn general_coin_spec(p: &CoinParams1D) -> MatrixSpec {
    MatrixSpec::new("coin", general_coin(p))
}

/// `t_sigma = e^{i lambda} sqrt(1 - rho) e^{i sigma phi}`,
/// `r_sigma = e^{i lambda} sigma sqrt(rho) e^{i sigma varphi}`.
pub fn scatter_amps(p: &ScatterParams1D) -> Result<ScatterAmps> {
    if !(0.0..=1.0).contains(&p.rho) {
        return Err(WalkError::InvalidParameter(format!("rho must lie in [0, 1], got {}", p.rho)));
    }
    let t_mod = (1.0 - p.rho).sqrt();
    let r_mod = p.rho.sqrt();
    let global = C64::from_polar(1.0, p.lambda);
    let t = |s: f64| global * C64::from_polar(t_mod, s * p.phi);
    let r = |s: f64| global * s * C64::from_polar(r_mod, s * p.varphi);
    Ok(ScatterAmps { t_plus: t(1.0), t_minus: t(-1.0), r_plus: r(1.0), r_minus: r(-1.0) })
}

pub fn scatter_spec(p: &ScatterParams1D) -> Result<MatrixSpec> {
    Ok(MatrixSpec::new("scatterer", scatter_amps(p)?.to_matrix()))
}

/// `U_c |j>|sigma> = c_{sigma sigma} |j+sigma>|sigma> + c_{-sigma sigma} |j-sigma>|-sigma>`.
#[derive(Debug, Clone)]
pub struct CoinedStep1D {
    field: Field1D,
}

pub fn coined_step_1d(field: Field1D) -> CoinedStep1D {
    CoinedStep1D { field }
}

impl StepOperator for CoinedStep1D {
    fn domain(&self) -> LabelKind {
        LabelKind::Coined1D
    }

    fn max_row_shift(&self) -> Option<i64> {
        Some(1)
    }

    fn apply_basis(&self, label: &BasisLabel) -> Result<Column> {
        label.expect_kind(self.domain())?;
        let BasisLabel::Coined1D { j, sigma } = *label else { unreachable!() };
        let coin = self.field.at(&j);
        // coin first, then shift by the new coin state
        Ok(Sign::BOTH
            .into_iter()
            .map(|out| (BasisLabel::Coined1D { j: j + out.value(), sigma: out }, coin.get(out.index(), sigma.index())))
            .filter(|(_, a)| *a != C64::new(0.0, 0.0))
            .collect())
    }
}

/// `U_s |sigma, j> = t_sigma |sigma, j+sigma> + r_sigma |-sigma, j-sigma>`,
/// with `(t, r)` read from the field matrix at `j`.
#[derive(Debug, Clone)]
pub struct ScatteringStep1D {
    field: Field1D,
}

pub fn scattering_step_1d(field: Field1D) -> ScatteringStep1D {
    ScatteringStep1D { field }
}

impl StepOperator for ScatteringStep1D {
    fn domain(&self) -> LabelKind {
        LabelKind::Scattering1D
    }

    fn max_row_shift(&self) -> Option<i64> {
        Some(1)
    }

    fn apply_basis(&self, label: &BasisLabel) -> Result<Column> {
        label.expect_kind(self.domain())?;
        let BasisLabel::Scattering1D { sigma, j } = *label else { unreachable!() };
        let amps = ScatterAmps::from_matrix(self.field.at(&j));
        let s = sigma.value();
        let transmitted = (BasisLabel::Scattering1D { sigma, j: j + s }, amps.t(sigma));
        let reflected = (BasisLabel::Scattering1D { sigma: sigma.flip(), j: j - s }, amps.r(sigma));
        let mut column: Column = smallvec![transmitted, reflected];
        column.retain(|(_, a)| *a != C64::new(0.0, 0.0));
        Ok(column)
    }
}

/// `E |sigma, j> = |j> (x) |sigma>`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LineE;

impl Relabeling for LineE {
    fn scattering_kind(&self) -> LabelKind {
        LabelKind::Scattering1D
    }

    fn coined_kind(&self) -> LabelKind {
        LabelKind::Coined1D
    }

    fn forward(&self, label: &BasisLabel) -> Result<BasisLabel> {
        label.expect_kind(LabelKind::Scattering1D)?;
        let BasisLabel::Scattering1D { sigma, j } = *label else { unreachable!() };
        Ok(BasisLabel::Coined1D { j, sigma })
    }

    fn backward(&self, label: &BasisLabel) -> Result<BasisLabel> {
        label.expect_kind(LabelKind::Coined1D)?;
        let BasisLabel::Coined1D { j, sigma } = *label else { unreachable!() };
        Ok(BasisLabel::Scattering1D { sigma, j })
    }
}

pub fn map_e_1d(psi: &WaveFunction) -> Result<WaveFunction> {
    LineE.apply(psi)
}

pub fn map_e_dagger_1d(psi: &WaveFunction) -> Result<WaveFunction> {
    LineE.apply_inverse(psi)
}

/// Native projector at `j`: the site `j` (coined) or the bond `j` (scattering).
pub fn projector_1d(model: Model, j: i64) -> Vec<BasisLabel> {
    match model {
        Model::Coined => Sign::BOTH.map(|sigma| BasisLabel::Coined1D { j, sigma }).to_vec(),
        Model::Scattering => vec![
            BasisLabel::Scattering1D { sigma: Sign::Plus, j },
            BasisLabel::Scattering1D { sigma: Sign::Minus, j: j - 1 },
        ],
    }
}

/// Projector reading the *other* model's probability at `j` from a state
/// evolved in `evolved_in`: `E^dagger P_c E` for scattering states and
/// `E P_s E^dagger` for coined states.
pub fn cross_projector_1d(evolved_in: Model, j: i64) -> Vec<BasisLabel> {
    let source = projector_1d(evolved_in.other(), j);
    source
        .iter()
        .map(|l| match evolved_in {
            Model::Scattering => LineE.backward(l),
            Model::Coined => LineE.forward(l),
        })
        .collect::<Result<_>>()
        .expect("projector labels have the right kind")
}

fn bond_of(sigma: Sign, j: i64) -> i64 {
    match sigma {
        Sign::Plus => j,
        Sign::Minus => j + 1,
    }
}

/// Native probabilities: sites for coined states, bonds for scattering states.
pub fn native_grid_1d(psi: &WaveFunction) -> Result<ProbabilityGrid> {
    let mut grid = ProbabilityGrid::new();
    for (label, amp) in psi {
        let position = match *label {
            BasisLabel::Coined1D { j, .. } => Position::Site { j, k: 0 },
            BasisLabel::Scattering1D { sigma, j } => {
                Position::Bond { j: bond_of(sigma, j), k: 0, orientation: Orientation::Horizontal }
            }
            other => {
                return Err(WalkError::LabelMismatch { expected: LabelKind::Coined1D, found: other.kind() })
            }
        };
        grid.add(position, amp.norm_sqr());
    }
    Ok(grid)
}

/// The other model's probabilities, read from this state via `E`.
pub fn cross_grid_1d(psi: &WaveFunction) -> Result<ProbabilityGrid> {
    match psi.kind() {
        None => Ok(ProbabilityGrid::new()),
        Some(LabelKind::Coined1D) => native_grid_1d(&map_e_dagger_1d(psi)?),
        Some(LabelKind::Scattering1D) => native_grid_1d(&map_e_1d(psi)?),
        Some(found) => Err(WalkError::LabelMismatch { expected: LabelKind::Coined1D, found }),
    }
}

/// All labels of `model` with `|j| <= radius`.
pub fn window_1d(model: Model, radius: i64) -> Vec<BasisLabel> {
    (-radius..=radius)
        .flat_map(|j| {
            Sign::BOTH.map(move |sigma| match model {
                Model::Coined => BasisLabel::Coined1D { j, sigma },
                Model::Scattering => BasisLabel::Scattering1D { sigma, j },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    use super::*;
    use crate::coins::hadamard2;
    use crate::state::{apply_step, compare_operators, evolve, probability_of, verify_unitary_on_window, Conjugated};

    fn hadamard_field() -> Field1D {
        Field1D::uniform(2, &hadamard2()).unwrap()
    }

    fn identity_field() -> Field1D {
        Field1D::uniform(2, &MatrixSpec::new("id", Matrix::identity(2))).unwrap()
    }

    fn c(j: i64, sigma: Sign) -> BasisLabel {
        BasisLabel::Coined1D { j, sigma }
    }

    fn s(sigma: Sign, j: i64) -> BasisLabel {
        BasisLabel::Scattering1D { sigma, j }
    }

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn general_coin_special_cases() {
        let h = general_coin(&CoinParams1D { theta: FRAC_PI_4, ..Default::default() });
        assert_eq!(h.max_abs_diff(&hadamard2().matrix), 0.0);
        let z = general_coin(&CoinParams1D::default());
        let expected = Matrix::from_real(2, 1.0, &[1.0, 0.0, 0.0, -1.0]);
        assert!(z.max_abs_diff(&expected) < 1e-16);
    }

    #[test]
    fn general_coin_satisfies_coin_conditions() {
        let m = general_coin(&CoinParams1D { gamma: 0.3, xi: 1.1, zeta: 2.0, theta: 0.7 });
        let (mi, pl) = (Sign::Minus.index(), Sign::Plus.index());
        let cpp = m.get(pl, pl);
        let cmp = m.get(mi, pl);
        let cmm = m.get(mi, mi);
        let cpm = m.get(pl, mi);
        assert!((cpp.norm_sqr() + cmp.norm_sqr() - 1.0).abs() < 1e-14);
        assert!((cmm.norm_sqr() + cpm.norm_sqr() - 1.0).abs() < 1e-14);
        assert!((cpm.norm_sqr() - cmp.norm_sqr()).abs() < 1e-14);
        assert!((cpp * cmp.conj() + cpm * cmm.conj()).norm() < 1e-14);
    }

    #[test]
    fn scatter_amps_examples() {
        let a = scatter_amps(&ScatterParams1D { rho: 0.5, ..Default::default() }).unwrap();
        assert!(close(a.t_plus, C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(a.t_minus, C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(a.r_plus, C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(a.r_minus, C64::new(-FRAC_1_SQRT_2, 0.0)));

        let a = scatter_amps(&ScatterParams1D { rho: 0.0, phi: 0.4, ..Default::default() }).unwrap();
        assert!((a.t_plus.norm() - 1.0).abs() < 1e-15 && (a.t_minus.norm() - 1.0).abs() < 1e-15);
        assert_eq!(a.r_plus.norm(), 0.0);

        let a = scatter_amps(&ScatterParams1D { rho: 1.0, varphi: 0.4, ..Default::default() }).unwrap();
        assert_eq!(a.t_plus.norm(), 0.0);
        assert!((a.r_minus.norm() - 1.0).abs() < 1e-15);

        assert!(scatter_amps(&ScatterParams1D { rho: 1.5, ..Default::default() }).is_err());
        assert!(scatter_amps(&ScatterParams1D { rho: -0.1, ..Default::default() }).is_err());
    }

    #[test]
    fn scatter_amps_satisfy_scattering_relations() {
        let a = scatter_amps(&ScatterParams1D { rho: 0.3, lambda: 0.9, phi: 1.7, varphi: 4.2 }).unwrap();
        for sg in Sign::BOTH {
            assert!((a.t(sg).norm_sqr() + a.r(sg).norm_sqr() - 1.0).abs() < 1e-14);
            assert!((a.r(sg).norm_sqr() - a.r(sg.flip()).norm_sqr()).abs() < 1e-14);
            assert!((a.r(sg.flip()) * a.t(sg).conj() + a.r(sg).conj() * a.t(sg.flip())).norm() < 1e-14);
        }
        assert!(a.to_matrix().unitarity_deviation() < 1e-14);
        assert_eq!(ScatterAmps::from_matrix(&a.to_matrix()), a);
    }

    #[test]
    fn hadamard_coined_one_step() {
        let op = coined_step_1d(hadamard_field());
        let out = apply_step(&WaveFunction::basis(c(0, Sign::Plus)), &op).unwrap();
        assert_eq!(out.len(), 2);
        assert!(close(out.amplitude(&c(1, Sign::Plus)), C64::new(-FRAC_1_SQRT_2, 0.0)));
        assert!(close(out.amplitude(&c(-1, Sign::Minus)), C64::new(FRAC_1_SQRT_2, 0.0)));

        let out = apply_step(&WaveFunction::basis(c(0, Sign::Minus)), &op).unwrap();
        assert!(close(out.amplitude(&c(-1, Sign::Minus)), C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(out.amplitude(&c(1, Sign::Plus)), C64::new(FRAC_1_SQRT_2, 0.0)));
    }

    #[test]
    fn hadamard_one_step_probabilities() {
        let op = coined_step_1d(hadamard_field());
        let out = apply_step(&WaveFunction::basis(c(0, Sign::Plus)), &op).unwrap();
        let p1 = probability_of(&out, &projector_1d(Model::Coined, 1)).unwrap();
        let pm1 = probability_of(&out, &projector_1d(Model::Coined, -1)).unwrap();
        assert!((p1 - 0.5).abs() < 1e-15 && (pm1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hadamard_two_steps_support() {
        let op = coined_step_1d(hadamard_field());
        let out = evolve(&WaveFunction::basis(c(0, Sign::Plus)), &op, 2).unwrap();
        let sites: std::collections::BTreeSet<i64> = out.labels().map(|l| l.site().0).collect();
        assert_eq!(sites.into_iter().collect::<Vec<_>>(), vec![-2, 0, 2]);
    }

    #[test]
    fn identity_coin_is_ballistic() {
        let op = coined_step_1d(identity_field());
        let out = apply_step(&WaveFunction::basis(c(3, Sign::Plus)), &op).unwrap();
        assert_eq!(out, WaveFunction::basis(c(4, Sign::Plus)));
    }

    #[test]
    fn single_mixing_site() {
        let field = identity_field().with_override(0, &hadamard2()).unwrap();
        let out = evolve(&WaveFunction::basis(c(0, Sign::Plus)), &coined_step_1d(field), 2).unwrap();
        let labels: Vec<_> = out.labels().copied().collect();
        assert_eq!(labels, vec![c(-2, Sign::Minus), c(2, Sign::Plus)]);
    }

    #[test]
    fn scattering_examples() {
        let half = Field1D::uniform(2, &scatter_spec(&ScatterParams1D { rho: 0.5, ..Default::default() }).unwrap())
            .unwrap();
        let out = apply_step(&WaveFunction::basis(s(Sign::Plus, 0)), &scattering_step_1d(half)).unwrap();
        assert!(close(out.amplitude(&s(Sign::Plus, 1)), C64::new(FRAC_1_SQRT_2, 0.0)));
        assert!(close(out.amplitude(&s(Sign::Minus, -1)), C64::new(FRAC_1_SQRT_2, 0.0)));

        let clear = Field1D::uniform(2, &scatter_spec(&ScatterParams1D::default()).unwrap()).unwrap();
        let op = scattering_step_1d(clear.clone());
        for sg in Sign::BOTH {
            let out = apply_step(&WaveFunction::basis(s(sg, 2)), &op).unwrap();
            assert_eq!(out, WaveFunction::basis(s(sg, 2 + sg.value())));
        }

        let mirror = scatter_spec(&ScatterParams1D { rho: 1.0, ..Default::default() }).unwrap();
        let op = scattering_step_1d(clear.with_override(0, &mirror).unwrap());
        let out = apply_step(&WaveFunction::basis(s(Sign::Plus, 0)), &op).unwrap();
        assert_eq!(out, WaveFunction::basis(s(Sign::Minus, -1)));
    }

    #[test]
    fn e_map_relabels() {
        let psi = WaveFunction::basis(s(Sign::Plus, 3));
        assert_eq!(map_e_1d(&psi).unwrap(), WaveFunction::basis(c(3, Sign::Plus)));
        let sup = WaveFunction::from_entries([(s(Sign::Plus, 3), C64::new(0.6, 0.0)), (s(Sign::Minus, -2), C64::new(0.0, 0.8))])
            .unwrap();
        let mapped = map_e_1d(&sup).unwrap();
        assert_eq!(mapped.amplitude(&c(-2, Sign::Minus)), C64::new(0.0, 0.8));
        assert_eq!(map_e_dagger_1d(&mapped).unwrap(), sup);
        assert!(map_e_1d(&mapped).is_err());
    }

    #[test]
    fn projectors() {
        assert_eq!(projector_1d(Model::Scattering, 0), vec![s(Sign::Plus, 0), s(Sign::Minus, -1)]);
        let mut cross = cross_projector_1d(Model::Scattering, 0);
        cross.sort();
        assert_eq!(cross, vec![s(Sign::Minus, 0), s(Sign::Plus, 0)]);
        assert_eq!(cross_projector_1d(Model::Coined, 0), vec![c(0, Sign::Plus), c(-1, Sign::Minus)]);
    }

    #[test]
    fn grids_match_projectors_and_are_complete() {
        let op = coined_step_1d(hadamard_field());
        let psi = evolve(&WaveFunction::basis(c(0, Sign::Plus)), &op, 7).unwrap();
        let native = native_grid_1d(&psi).unwrap();
        let cross = cross_grid_1d(&psi).unwrap();
        assert!((native.total() - 1.0).abs() < 1e-12);
        assert!((cross.total() - 1.0).abs() < 1e-12);
        for j in -8..=8 {
            let p = probability_of(&psi, &projector_1d(Model::Coined, j)).unwrap();
            assert!((native.get(&Position::Site { j, k: 0 }) - p).abs() < 1e-15);
            let q = probability_of(&psi, &cross_projector_1d(Model::Coined, j)).unwrap();
            let bond = Position::Bond { j, k: 0, orientation: Orientation::Horizontal };
            assert!((cross.get(&bond) - q).abs() < 1e-15);
        }
    }

    #[test]
    fn operators_unitary_and_equivalent() {
        let field = hadamard_field()
            .with_override(2, &general_coin_spec(&CoinParams1D { gamma: 0.2, xi: 0.5, zeta: 1.3, theta: 0.4 }))
            .unwrap();
        let uc = coined_step_1d(field.clone());
        let us = scattering_step_1d(field);
        assert!(verify_unitary_on_window(&uc, &window_1d(Model::Coined, 5), 1e-12).passed());
        assert!(verify_unitary_on_window(&us, &window_1d(Model::Scattering, 5), 1e-12).passed());
        let pulled = Conjugated { coined: &uc, map: &LineE };
        let cmp = compare_operators(&us, &pulled, &window_1d(Model::Scattering, 6)).unwrap();
        assert!(cmp.max_deviation <= 1e-12);
    }

    #[test]
    fn non_unitary_operator_fails_window_check() {
        // fields reject non-unitary matrices, so build the operator by hand
        struct Raw(Matrix);
        impl StepOperator for Raw {
            fn domain(&self) -> LabelKind {
                LabelKind::Coined1D
            }
            fn apply_basis(&self, label: &BasisLabel) -> Result<Column> {
                let BasisLabel::Coined1D { j, sigma } = *label else { unreachable!() };
                Ok(Sign::BOTH
                    .into_iter()
                    .map(|o| (BasisLabel::Coined1D { j: j + o.value(), sigma: o }, self.0.get(o.index(), sigma.index())))
                    .collect())
            }
        }
        let op = Raw(Matrix::from_real(2, 1.0, &[1.0, 0.0, 1.0, 0.0]));
        let report = verify_unitary_on_window(&op, &window_1d(Model::Coined, 5), 1e-12);
        assert!(!report.passed());
        assert!(report.max_deviation >= 1.0);
    }
}
