//! Probability grids: position -> probability, plus plot coordinates.

use std::collections::BTreeMap;
use std::fmt;

use crate::honeycomb;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
    /// Bond climbing to the right.
    Rising,
    /// Bond falling to the right.
    Falling,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Horizontal => "horizontal",
            Orientation::Vertical => "vertical",
            Orientation::Rising => "rising",
            Orientation::Falling => "falling",
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a probability lives. Line positions use `k = 0`.
///
/// A bond is keyed by an anchor site `(j, k)` on one of its ends plus its
/// orientation; each lattice module documents its anchor choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Site { j: i64, k: i64 },
    Bond { j: i64, k: i64, orientation: Orientation },
}

impl Position {
    pub fn anchor(&self) -> (i64, i64) {
        match *self {
            Position::Site { j, k } | Position::Bond { j, k, .. } => (j, k),
        }
    }

    pub fn is_site(&self) -> bool {
        matches!(self, Position::Site { .. })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProbabilityGrid {
    cells: BTreeMap<Position, f64>,
}

impl ProbabilityGrid {
    pub fn new() -> ProbabilityGrid {
        ProbabilityGrid::default()
    }

    pub fn add(&mut self, position: Position, p: f64) {
        *self.cells.entry(position).or_insert(0.0) += p;
    }

    pub fn get(&self, position: &Position) -> f64 {
        self.cells.get(position).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Position, &f64)> {
        self.cells.iter()
    }

    pub fn total(&self) -> f64 {
        self.cells.values().sum()
    }

    /// Largest `|p - q|` over the union of both supports.
    pub fn max_abs_diff(&self, other: &ProbabilityGrid) -> f64 {
        let mine = self.cells.iter().map(|(pos, p)| (p - other.get(pos)).abs());
        let theirs = other.cells.iter().filter(|(pos, _)| !self.cells.contains_key(pos)).map(|(_, q)| q.abs());
        mine.chain(theirs).fold(0.0, f64::max)
    }

    /// Sums cells sharing an anchor site. Sites and the bonds anchored at
    /// them then become directly comparable.
    pub fn by_anchor(&self) -> BTreeMap<(i64, i64), f64> {
        let mut out = BTreeMap::new();
        for (pos, p) in &self.cells {
            *out.entry(pos.anchor()).or_insert(0.0) += p;
        }
        out
    }
}

impl FromIterator<(Position, f64)> for ProbabilityGrid {
    fn from_iter<I: IntoIterator<Item = (Position, f64)>>(iter: I) -> Self {
        let mut grid = ProbabilityGrid::new();
        for (pos, p) in iter {
            grid.add(pos, p);
        }
        grid
    }
}

/// Largest difference between two anchor-aggregated grids.
pub fn max_anchor_diff(a: &ProbabilityGrid, b: &ProbabilityGrid) -> f64 {
    let (a, b) = (a.by_anchor(), b.by_anchor());
    let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).collect();
    keys.into_iter()
        .map(|key| (a.get(key).copied().unwrap_or(0.0) - b.get(key).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lattice {
    Line,
    Square,
    SquareDiagonal,
    Honeycomb,
}

impl Lattice {
    pub fn as_str(self) -> &'static str {
        match self {
            Lattice::Line => "line",
            Lattice::Square => "square",
            Lattice::SquareDiagonal => "square-diagonal",
            Lattice::Honeycomb => "honeycomb",
        }
    }

    /// Coordination number, which is also the transition matrix dimension.
    pub fn degree(self) -> usize {
        match self {
            Lattice::Line => 2,
            Lattice::Square | Lattice::SquareDiagonal => 4,
            Lattice::Honeycomb => 3,
        }
    }

    pub fn site_point(self, j: i64, k: i64) -> (f64, f64) {
        match self {
            Lattice::Line => (j as f64, 0.0),
            Lattice::Square | Lattice::SquareDiagonal => (j as f64, k as f64),
            Lattice::Honeycomb => honeycomb::site_point(j, k),
        }
    }

    /// Plot coordinates: sites at their location, bonds at their midpoint.
    pub fn plot_point(self, position: &Position) -> (f64, f64) {
        match *position {
            Position::Site { j, k } => self.site_point(j, k),
            Position::Bond { j, k, orientation } => {
                let (oj, ok) = self.bond_other_end(j, k, orientation);
                let (x0, y0) = self.site_point(j, k);
                let (x1, y1) = self.site_point(oj, ok);
                ((x0 + x1) / 2.0, (y0 + y1) / 2.0)
            }
        }
    }

    /// The end of an anchored bond that is not the anchor.
    fn bond_other_end(self, j: i64, k: i64, orientation: Orientation) -> (i64, i64) {
        match (self, orientation) {
            (Lattice::Line, _) => (j - 1, 0),
            (Lattice::Square, Orientation::Horizontal) => (j - 1, k),
            (Lattice::Square, _) => (j, k - 1),
            (Lattice::SquareDiagonal, Orientation::Rising) => (j - 1, k - 1),
            (Lattice::SquareDiagonal, _) => (j + 1, k - 1),
            (Lattice::Honeycomb, o) => honeycomb::neighbor_along(j, k, o).unwrap_or((j, k)),
        }
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Probability whose plot point lies within `half_width_deg` of the ray from
/// the origin at `center_deg`. The origin itself belongs to no ray.
pub fn sector_share(grid: &ProbabilityGrid, lattice: Lattice, center_deg: f64, half_width_deg: f64) -> f64 {
    grid.iter()
        .filter_map(|(pos, p)| {
            let (x, y) = lattice.plot_point(pos);
            if x.abs() < 1e-12 && y.abs() < 1e-12 {
                return None;
            }
            let angle = y.atan2(x).to_degrees().rem_euclid(360.0);
            let delta = (angle - center_deg).rem_euclid(360.0);
            let delta = delta.min(360.0 - delta);
            (delta <= half_width_deg + 1e-9).then_some(*p)
        })
        .sum()
}
