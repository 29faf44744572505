//! Experiment configuration: a TOML file describing lattice, model,
//! transition matrices, initial state and requested output.
//!
//! ```toml
//! lattice = "square"          # line | square | square-diagonal | honeycomb
//! model = "coined"            # coined | scattering
//! matrix = "grover4"          # catalog name, or a table (see below)
//! steps = 20
//! output = "both"             # native-grid | cross-grid | both
//! initial = "square-paper"    # preset, or an array of amplitude tables
//!
//! [[overrides]]
//! j = 1
//! k = 0
//! matrix = { rows = [[[1.0, 0.0], [0.0, 0.0], ...], ...] }
//! ```
//!
//! A matrix table holds exactly one of `name`, `rows` (row-major `[re, im]`
//! pairs), `coin = { gamma, xi, zeta, theta }` or
//! `scatter = { rho, lambda, phi, varphi }`; the last two are line only.
//!
//! Amplitude tables carry `j`, `k` (omitted on the line), `re`, `im` and a
//! direction: `sigma` (coined models and the honeycomb) or `pair = [sx, sy]`
//! (square scattering).

use std::path::Path;

use anyhow::{anyhow, bail, Context};
use num_complex::Complex64 as C64;
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::coins::{catalog, hadamard2, Matrix, MatrixSpec};
use crate::error::Result as WalkResult;
use crate::field::{Field1D, FieldHoney, FieldSquare};
use crate::grid::{Lattice, ProbabilityGrid};
use crate::honeycomb::{self, HoneyE};
use crate::label::{BasisLabel, Dir3, Dir4, Model, Sign};
use crate::line::{self, CoinParams1D, LineE, ScatterParams1D};
use crate::square::{self, SquareE, SquareGeometry};
use crate::state::{Relabeling, StepOperator, WaveFunction};

pub const DEFAULT_STEPS: usize = 20;

/// Tolerance for the initial state's norm after normalization.
pub const INITIAL_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    NativeGrid,
    CrossGrid,
    Both,
}

impl OutputKind {
    pub fn native(self) -> bool {
        matches!(self, OutputKind::NativeGrid | OutputKind::Both)
    }

    pub fn cross(self) -> bool {
        matches!(self, OutputKind::CrossGrid | OutputKind::Both)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lattice: String,
    model: String,
    matrix: toml::Value,
    #[serde(default)]
    overrides: Vec<RawOverride>,
    steps: Option<i64>,
    initial: toml::Value,
    output: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOverride {
    j: i64,
    k: Option<i64>,
    matrix: toml::Value,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    name: Option<String>,
    rows: Option<Vec<Vec<[f64; 2]>>>,
    coin: Option<RawCoin>,
    scatter: Option<RawScatter>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoin {
    #[serde(default)]
    gamma: f64,
    #[serde(default)]
    xi: f64,
    #[serde(default)]
    zeta: f64,
    theta: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScatter {
    rho: f64,
    #[serde(default)]
    lambda: f64,
    #[serde(default)]
    phi: f64,
    #[serde(default)]
    varphi: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmplitude {
    j: i64,
    k: Option<i64>,
    sigma: Option<i64>,
    pair: Option<[i64; 2]>,
    #[serde(default)]
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Debug, Clone)]
pub enum AnyField {
    Line(Field1D),
    Square(FieldSquare),
    Honey(FieldHoney),
}

/// A validated experiment: everything needed to evolve and project.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub lattice: Lattice,
    pub model: Model,
    pub steps: usize,
    pub output: OutputKind,
    pub field: AnyField,
    /// Normalized initial state in `model`'s labels.
    pub initial: WaveFunction,
    /// sha256 of the config text.
    pub config_hash: String,
}

pub fn parse_lattice(s: &str) -> anyhow::Result<Lattice> {
    match s {
        "line" => Ok(Lattice::Line),
        "square" => Ok(Lattice::Square),
        "square-diagonal" => Ok(Lattice::SquareDiagonal),
        "honeycomb" => Ok(Lattice::Honeycomb),
        other => bail!("lattice: unknown value {other:?} (expected line, square, square-diagonal or honeycomb)"),
    }
}

pub fn parse_model(s: &str) -> anyhow::Result<Model> {
    match s {
        "coined" => Ok(Model::Coined),
        "scattering" => Ok(Model::Scattering),
        other => bail!("model: unknown value {other:?} (expected coined or scattering)"),
    }
}

fn parse_output(s: Option<&str>) -> anyhow::Result<OutputKind> {
    match s {
        None | Some("both") => Ok(OutputKind::Both),
        Some("native-grid") => Ok(OutputKind::NativeGrid),
        Some("cross-grid") => Ok(OutputKind::CrossGrid),
        Some(other) => bail!("output: unknown value {other:?} (expected native-grid, cross-grid or both)"),
    }
}

fn matrix_by_name(name: &str, lattice: Lattice) -> WalkResult<MatrixSpec> {
    if lattice == Lattice::Line && matches!(name, "hadamard2" | "h2" | "hadamard") {
        return Ok(hadamard2());
    }
    catalog(name)
}

fn parse_matrix(value: &toml::Value, lattice: Lattice, field: &str) -> anyhow::Result<MatrixSpec> {
    let spec = match value {
        toml::Value::String(name) => matrix_by_name(name, lattice).with_context(|| format!("{field}"))?,
        toml::Value::Table(_) => {
            let raw: RawMatrix = value.clone().try_into().with_context(|| format!("{field}"))?;
            let given = [raw.name.is_some(), raw.rows.is_some(), raw.coin.is_some(), raw.scatter.is_some()];
            if given.iter().filter(|g| **g).count() != 1 {
                bail!("{field}: give exactly one of name, rows, coin, scatter");
            }
            if (raw.coin.is_some() || raw.scatter.is_some()) && lattice != Lattice::Line {
                bail!("{field}: coin/scatter parameters apply to the line only");
            }
            if let Some(name) = raw.name {
                matrix_by_name(&name, lattice).with_context(|| format!("{field}.name"))?
            } else if let Some(rows) = raw.rows {
                let rows = rows.into_iter().map(|r| r.into_iter().map(|[re, im]| C64::new(re, im)).collect()).collect();
                MatrixSpec::new("custom", Matrix::from_rows(rows).with_context(|| format!("{field}.rows"))?)
            } else if let Some(c) = raw.coin {
                line::general_coin_spec(&CoinParams1D { gamma: c.gamma, xi: c.xi, zeta: c.zeta, theta: c.theta })
            } else {
                let s = raw.scatter.expect("one option given");
                let p = ScatterParams1D { rho: s.rho, lambda: s.lambda, phi: s.phi, varphi: s.varphi };
                line::scatter_spec(&p).with_context(|| format!("{field}.scatter"))?
            }
        }
        _ => bail!("{field}: expected a catalog name or a table"),
    };
    if spec.dim() != lattice.degree() {
        bail!("{field}: {} is {}x{}, lattice {} needs {}x{}", spec.name, spec.dim(), spec.dim(), lattice, lattice.degree(), lattice.degree());
    }
    Ok(spec)
}

fn build_field(lattice: Lattice, default: &MatrixSpec, overrides: &[(i64, i64, MatrixSpec)]) -> anyhow::Result<AnyField> {
    let dim = lattice.degree();
    let field = match lattice {
        Lattice::Line => {
            let mut f = Field1D::uniform(dim, default).context("matrix")?;
            for (i, (j, _, m)) in overrides.iter().enumerate() {
                f = f.with_override(*j, m).with_context(|| format!("overrides[{i}]"))?;
            }
            AnyField::Line(f)
        }
        Lattice::Square | Lattice::SquareDiagonal => {
            let mut f = FieldSquare::uniform(dim, default).context("matrix")?;
            for (i, (j, k, m)) in overrides.iter().enumerate() {
                f = f.with_override((*j, *k), m).with_context(|| format!("overrides[{i}]"))?;
            }
            AnyField::Square(f)
        }
        Lattice::Honeycomb => {
            let mut f = FieldHoney::uniform(dim, default).context("matrix")?;
            for (i, (j, k, m)) in overrides.iter().enumerate() {
                f = f.with_override((*j, *k), m).with_context(|| format!("overrides[{i}]"))?;
            }
            AnyField::Honey(f)
        }
    };
    Ok(field)
}

fn preset(name: &str, lattice: Lattice, model: Model) -> anyhow::Result<WaveFunction> {
    let psi = match (name, lattice, model) {
        ("square-paper", Lattice::Square | Lattice::SquareDiagonal, Model::Coined) => square::paper_initial_coined(),
        ("square-paper", Lattice::Square | Lattice::SquareDiagonal, Model::Scattering) => {
            square::paper_initial_scattering()
        }
        ("honeycomb-paper", Lattice::Honeycomb, Model::Coined) => honeycomb::paper_initial_coined(),
        ("honeycomb-paper", Lattice::Honeycomb, Model::Scattering) => honeycomb::paper_initial_scattering(),
        ("square-paper" | "honeycomb-paper", _, _) => bail!("initial: preset {name:?} does not apply to lattice {lattice}"),
        _ => bail!("initial: unknown preset {name:?} (expected square-paper or honeycomb-paper)"),
    };
    Ok(psi)
}

fn amplitude_label(a: &RawAmplitude, lattice: Lattice, model: Model, field: &str) -> anyhow::Result<BasisLabel> {
    let need_sigma = || a.sigma.ok_or_else(|| anyhow!("{field}: missing sigma"));
    let k = match (lattice, a.k) {
        (Lattice::Line, Some(k)) if k != 0 => bail!("{field}: k must be absent or 0 on the line"),
        (Lattice::Line, _) => 0,
        (_, Some(k)) => k,
        (_, None) => bail!("{field}: missing k"),
    };
    let j = a.j;
    let label = match (lattice, model) {
        (Lattice::Line, _) => {
            let sigma = Sign::from_value(need_sigma()?).with_context(|| format!("{field}.sigma"))?;
            match model {
                Model::Coined => BasisLabel::Coined1D { j, sigma },
                Model::Scattering => BasisLabel::Scattering1D { sigma, j },
            }
        }
        (Lattice::Square | Lattice::SquareDiagonal, Model::Coined) => {
            let sigma = Dir4::new(need_sigma()?).with_context(|| format!("{field}.sigma"))?;
            BasisLabel::CoinedSquare { j, k, sigma }
        }
        (Lattice::Square | Lattice::SquareDiagonal, Model::Scattering) => {
            let [sx, sy] = a.pair.ok_or_else(|| anyhow!("{field}: missing pair = [sx, sy]"))?;
            let sx = Sign::from_value(sx).with_context(|| format!("{field}.pair"))?;
            let sy = Sign::from_value(sy).with_context(|| format!("{field}.pair"))?;
            BasisLabel::ScatteringSquare { sx, sy, j, k }
        }
        (Lattice::Honeycomb, _) => {
            let sigma = Dir3::new(need_sigma()?).with_context(|| format!("{field}.sigma"))?;
            match model {
                Model::Coined => BasisLabel::CoinedHoney { j, k, sigma },
                Model::Scattering => BasisLabel::ScatteringHoney { sigma, j, k },
            }
        }
    };
    Ok(label)
}

fn parse_initial(value: &toml::Value, lattice: Lattice, model: Model) -> anyhow::Result<WaveFunction> {
    let psi = match value {
        toml::Value::String(name) => preset(name, lattice, model)?,
        toml::Value::Array(items) => {
            let mut entries = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let field = format!("initial[{i}]");
                let raw: RawAmplitude = item.clone().try_into().with_context(|| field.clone())?;
                entries.push((amplitude_label(&raw, lattice, model, &field)?, C64::new(raw.re, raw.im)));
            }
            WaveFunction::from_entries(entries).context("initial")?
        }
        _ => bail!("initial: expected a preset name or an array of amplitude tables"),
    };
    let psi = psi.normalized().context("initial")?;
    if (psi.norm_sq() - 1.0).abs() > INITIAL_NORM_TOL {
        bail!("initial: state does not normalize (norm^2 = {})", psi.norm_sq());
    }
    Ok(psi)
}

impl Experiment {
    pub fn from_toml_str(text: &str) -> anyhow::Result<Experiment> {
        let raw: RawConfig = toml::from_str(text).context("config")?;
        let lattice = parse_lattice(&raw.lattice)?;
        let model = parse_model(&raw.model)?;
        let steps = match raw.steps {
            None => DEFAULT_STEPS,
            Some(n) if n >= 0 => n as usize,
            Some(n) => bail!("steps: must be nonnegative, got {n}"),
        };
        let output = parse_output(raw.output.as_deref())?;
        let default = parse_matrix(&raw.matrix, lattice, "matrix")?;
        let mut overrides = Vec::with_capacity(raw.overrides.len());
        for (i, o) in raw.overrides.iter().enumerate() {
            let field = format!("overrides[{i}]");
            let k = match (lattice, o.k) {
                (Lattice::Line, Some(k)) if k != 0 => bail!("{field}: k must be absent or 0 on the line"),
                (Lattice::Line, _) => 0,
                (_, Some(k)) => k,
                (_, None) => bail!("{field}: missing k"),
            };
            overrides.push((o.j, k, parse_matrix(&o.matrix, lattice, &format!("{field}.matrix"))?));
        }
        let field = build_field(lattice, &default, &overrides)?;
        let initial = parse_initial(&raw.initial, lattice, model)?;
        let config_hash = hex::encode(Sha256::digest(text.as_bytes()));
        Ok(Experiment { lattice, model, steps, output, field, initial, config_hash })
    }

    pub fn load(path: &Path) -> anyhow::Result<Experiment> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Experiment::from_toml_str(&text)
    }

    fn geometry(&self) -> SquareGeometry {
        match self.lattice {
            Lattice::SquareDiagonal => SquareGeometry::Diagonal,
            _ => SquareGeometry::Natural,
        }
    }

    /// The one-step operator of `model` built on this experiment's field.
    pub fn operator(&self, model: Model) -> Box<dyn StepOperator> {
        match (&self.field, model) {
            (AnyField::Line(f), Model::Coined) => Box::new(line::coined_step_1d(f.clone())),
            (AnyField::Line(f), Model::Scattering) => Box::new(line::scattering_step_1d(f.clone())),
            (AnyField::Square(f), Model::Coined) => match self.geometry() {
                SquareGeometry::Natural => Box::new(square::coined_step_square(f.clone())),
                SquareGeometry::Diagonal => Box::new(square::diagonal_step_square(f.clone())),
            },
            (AnyField::Square(f), Model::Scattering) => {
                Box::new(square::scattering_step_square_with(f.clone(), self.geometry()))
            }
            (AnyField::Honey(f), Model::Coined) => Box::new(honeycomb::coined_step_honeycomb(f.clone())),
            (AnyField::Honey(f), Model::Scattering) => Box::new(honeycomb::scattering_step_honeycomb(f.clone())),
        }
    }

    pub fn relabeling(&self) -> Box<dyn Relabeling> {
        match self.field {
            AnyField::Line(_) => Box::new(LineE),
            AnyField::Square(_) => Box::new(SquareE),
            AnyField::Honey(_) => Box::new(HoneyE),
        }
    }

    /// The initial state expressed in `model`'s labels.
    pub fn initial_in(&self, model: Model) -> WalkResult<WaveFunction> {
        let map = self.relabeling();
        match (self.model, model) {
            (a, b) if a == b => Ok(self.initial.clone()),
            (Model::Scattering, Model::Coined) => map.apply(&self.initial),
            _ => map.apply_inverse(&self.initial),
        }
    }

    pub fn window(&self, model: Model, radius: i64) -> Vec<BasisLabel> {
        match self.lattice {
            Lattice::Line => line::window_1d(model, radius),
            Lattice::Square | Lattice::SquareDiagonal => square::window_square(model, radius),
            Lattice::Honeycomb => honeycomb::window_honeycomb(model, radius),
        }
    }

    /// The probabilities `psi`'s own model defines.
    pub fn native_grid(&self, psi: &WaveFunction) -> WalkResult<ProbabilityGrid> {
        match self.lattice {
            Lattice::Line => line::native_grid_1d(psi),
            Lattice::Square | Lattice::SquareDiagonal => square::native_grid_square(psi, self.geometry()),
            Lattice::Honeycomb => honeycomb::native_grid_honeycomb(psi),
        }
    }

    /// The other model's probabilities, read from `psi` through `E`.
    pub fn cross_grid(&self, psi: &WaveFunction) -> WalkResult<ProbabilityGrid> {
        match self.lattice {
            Lattice::Line => line::cross_grid_1d(psi),
            Lattice::Square | Lattice::SquareDiagonal => square::cross_grid_square(psi, self.geometry()),
            Lattice::Honeycomb => honeycomb::cross_grid_honeycomb(psi),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_square_config() {
        let e = Experiment::from_toml_str(
            "lattice = \"square\"\nmodel = \"coined\"\nmatrix = \"grover4\"\ninitial = \"square-paper\"\n",
        )
        .unwrap();
        assert_eq!(e.steps, DEFAULT_STEPS);
        assert_eq!(e.output, OutputKind::Both);
        assert!((e.initial.norm_sq() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_names_the_field() {
        let err = Experiment::from_toml_str(
            "lattice = \"honeycomb\"\nmodel = \"coined\"\nmatrix = \"grover4\"\ninitial = \"honeycomb-paper\"\n",
        )
        .unwrap_err();
        assert!(format!("{err:#}").starts_with("matrix:"), "{err:#}");
    }

    #[test]
    fn non_unitary_rows_rejected() {
        let text = r#"
lattice = "line"
model = "coined"
matrix = { rows = [[[1.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]] }
initial = [{ j = 0, sigma = 1, re = 1.0 }]
"#;
        let err = Experiment::from_toml_str(text).unwrap_err();
        assert!(format!("{err:#}").contains("unitary"), "{err:#}");
    }

    #[test]
    fn amplitudes_are_normalized() {
        let text = r#"
lattice = "line"
model = "scattering"
matrix = { scatter = { rho = 0.5 } }
initial = [{ j = 0, sigma = 1, re = 3.0 }, { j = 0, sigma = -1, im = 4.0 }]
"#;
        let e = Experiment::from_toml_str(text).unwrap();
        let plus = BasisLabel::Scattering1D { sigma: Sign::Plus, j: 0 };
        assert!((e.initial.amplitude(&plus) - C64::new(0.6, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn preset_must_fit_lattice() {
        let err = Experiment::from_toml_str(
            "lattice = \"honeycomb\"\nmodel = \"coined\"\nmatrix = \"dft3\"\ninitial = \"square-paper\"\n",
        )
        .unwrap_err();
        assert!(format!("{err:#}").contains("does not apply"));
    }

    #[test]
    fn zero_state_rejected() {
        let err = Experiment::from_toml_str(
            "lattice = \"line\"\nmodel = \"coined\"\nmatrix = \"h2\"\ninitial = [{ j = 0, sigma = 1 }]\n",
        );
        assert!(err.is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let err = Experiment::from_toml_str(
            "lattice = \"line\"\nmodel = \"coined\"\nmatrix = \"h2\"\nsteps = 3\ninitial = \"x\"\ncolour = 1\n",
        );
        assert!(err.is_err());
    }

    #[test]
    fn negative_steps_rejected() {
        let err = Experiment::from_toml_str(
            "lattice = \"square\"\nmodel = \"coined\"\nmatrix = \"h4\"\nsteps = -1\ninitial = \"square-paper\"\n",
        )
        .unwrap_err();
        assert!(format!("{err:#}").starts_with("steps:"));
    }
}
