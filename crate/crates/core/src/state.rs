//! Lattice-agnostic sparse states and step operators.
//!
//! A [`WaveFunction`] is a sparse map from [`BasisLabel`] to amplitude. A
//! [`StepOperator`] only has to say where a single basis label goes; its
//! action on a general state is the linear extension computed by
//! [`apply_step`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_complex::Complex64 as C64;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::error::{Result, WalkError};
use crate::label::{BasisLabel, LabelKind};

/// Amplitudes with modulus below this are dropped after every step.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Image of one basis label: at most four `(label, amplitude)` terms.
pub type Column = SmallVec<[(BasisLabel, C64); 4]>;

/// One application of a walk's unitary, described column by column.
pub trait StepOperator: Send + Sync {
    /// Label kind this operator acts on (and maps into).
    fn domain(&self) -> LabelKind;

    /// `U |label>` as a list of distinct labels with their amplitudes.
    fn apply_basis(&self, label: &BasisLabel) -> Result<Column>;

    /// Largest `|j' - j|` between a label and any label in its image, if
    /// bounded. Lets [`apply_step`] accumulate a few rows at a time.
    fn max_row_shift(&self) -> Option<i64> {
        None
    }
}

/// A basis relabeling between a scattering space and a coined space (the `E`
/// map): `forward` sends scattering labels to coined labels.
pub trait Relabeling: Send + Sync {
    fn scattering_kind(&self) -> LabelKind;
    fn coined_kind(&self) -> LabelKind;
    fn forward(&self, label: &BasisLabel) -> Result<BasisLabel>;
    fn backward(&self, label: &BasisLabel) -> Result<BasisLabel>;

    fn apply(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        psi.map_labels(|l| self.forward(l))
    }

    fn apply_inverse(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        psi.map_labels(|l| self.backward(l))
    }
}

/// Sparse state. Every stored label has the same [`LabelKind`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WaveFunction {
    kind: Option<LabelKind>,
    /// Sorted by label, no duplicates.
    entries: Vec<(BasisLabel, C64)>,
}

/// Entries of a [`WaveFunction`] in label order.
#[derive(Debug, Clone)]
pub struct Iter<'a>(std::slice::Iter<'a, (BasisLabel, C64)>);

impl<'a> Iterator for Iter<'a> {
    type Item = (&'a BasisLabel, &'a C64);

    fn next(&mut self) -> Option<Self::Item> {
        self.0.next().map(|(l, a)| (l, a))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.0.size_hint()
    }
}

impl ExactSizeIterator for Iter<'_> {}

impl WaveFunction {
    pub fn empty() -> WaveFunction {
        WaveFunction::default()
    }

    pub fn basis(label: BasisLabel) -> WaveFunction {
        WaveFunction { kind: Some(label.kind()), entries: vec![(label, C64::new(1.0, 0.0))] }
    }

    /// Builds a state, summing repeated labels and dropping negligible terms.
    pub fn from_entries<I>(entries: I) -> Result<WaveFunction>
    where
        I: IntoIterator<Item = (BasisLabel, C64)>,
    {
        let mut kind = None;
        let mut map: BTreeMap<BasisLabel, C64> = BTreeMap::new();
        for (label, amp) in entries {
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(WalkError::InvalidParameter(format!("non-finite amplitude at {label}")));
            }
            match kind {
                None => kind = Some(label.kind()),
                Some(k) => label.expect_kind(k)?,
            }
            *map.entry(label).or_insert(C64::new(0.0, 0.0)) += amp;
        }
        let entries: Vec<_> = map.into_iter().filter(|(_, a)| a.norm_sqr() >= PRUNE_THRESHOLD * PRUNE_THRESHOLD).collect();
        if entries.is_empty() {
            kind = None;
        }
        Ok(WaveFunction { kind, entries })
    }

    /// `None` for the empty state, which is compatible with every kind.
    pub fn kind(&self) -> Option<LabelKind> {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn amplitude(&self, label: &BasisLabel) -> C64 {
        self.get(label).copied().unwrap_or_default()
    }

    fn get(&self, label: &BasisLabel) -> Option<&C64> {
        self.entries.binary_search_by(|(l, _)| l.cmp(label)).ok().map(|i| &self.entries[i].1)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter(self.entries.iter())
    }

    pub fn labels(&self) -> impl Iterator<Item = &BasisLabel> {
        self.entries.iter().map(|(l, _)| l)
    }

    pub fn norm_sq(&self) -> f64 {
        self.entries.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<WaveFunction> {
        let n = self.norm_sq();
        if n == 0.0 {
            return Err(WalkError::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / n.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> WaveFunction {
        WaveFunction::from_entries(self.entries.iter().map(|(l, a)| (*l, a * factor)))
            .expect("scaling preserves homogeneity")
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: C64, other: &WaveFunction, b: C64) -> Result<WaveFunction> {
        check_compatible(self.kind, other.kind)?;
        WaveFunction::from_entries(
            self.entries
                .iter()
                .map(|(l, x)| (*l, a * x))
                .chain(other.entries.iter().map(|(l, y)| (*l, b * y))),
        )
    }

    /// Applies a bijective label map, keeping amplitudes.
    pub fn map_labels<F>(&self, mut f: F) -> Result<WaveFunction>
    where
        F: FnMut(&BasisLabel) -> Result<BasisLabel>,
    {
        let mapped: Result<Vec<_>> = self.entries.iter().map(|(l, a)| Ok((f(l)?, *a))).collect();
        WaveFunction::from_entries(mapped?)
    }

    /// Largest modulus of the entrywise difference.
    pub fn max_abs_diff(&self, other: &WaveFunction) -> f64 {
        let labels: BTreeSet<&BasisLabel> = self.labels().chain(other.labels()).collect();
        labels
            .into_iter()
            .map(|l| (self.amplitude(l) - other.amplitude(l)).norm())
            .fold(0.0, f64::max)
    }
}

impl<'a> IntoIterator for &'a WaveFunction {
    type Item = (&'a BasisLabel, &'a C64);
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

fn check_compatible(a: Option<LabelKind>, b: Option<LabelKind>) -> Result<()> {
    match (a, b) {
        (Some(expected), Some(found)) if expected != found => {
            Err(WalkError::LabelMismatch { expected, found })
        }
        _ => Ok(()),
    }
}

/// `U |psi>`.
///
/// Input entries are visited in label order and each output bucket is summed
/// in that order, so the result is bit-reproducible.
pub fn apply_step(psi: &WaveFunction, op: &dyn StepOperator) -> Result<WaveFunction> {
    let Some(kind) = psi.kind else {
        return Ok(WaveFunction::empty());
    };
    if kind != op.domain() {
        return Err(WalkError::LabelMismatch { expected: op.domain(), found: kind });
    }
    let entries = match op.max_row_shift() {
        Some(reach) => match accumulate_by_rows(psi, op, reach)? {
            Some(entries) => entries,
            None => accumulate_hashed(psi, op)?,
        },
        None => accumulate_hashed(psi, op)?,
    };
    let kind = if entries.is_empty() { None } else { Some(op.domain()) };
    Ok(WaveFunction { kind, entries })
}

fn accumulate_hashed(psi: &WaveFunction, op: &dyn StepOperator) -> Result<Vec<(BasisLabel, C64)>> {
    let mut buckets: FxHashMap<BasisLabel, C64> =
        FxHashMap::with_capacity_and_hasher(psi.len() * 2 + 8, Default::default());
    for (label, amp) in &psi.entries {
        for (out, coeff) in op.apply_basis(label)? {
            *buckets.entry(out).or_default() += coeff * amp;
        }
    }
    let mut entries: Vec<(BasisLabel, C64)> =
        buckets.into_iter().filter(|(_, a)| a.norm_sqr() >= PRUNE_THRESHOLD * PRUNE_THRESHOLD).collect();
    entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    Ok(entries)
}

/// Direction codes run from 0 to 4, so each `k` gets this many slots.
const CODES: i64 = 5;

/// Slots of one output row beyond which a row is treated as too sparse.
const MAX_ROW_SLOTS: i64 = 1 << 22;

/// One output row as a dense run of `(k, direction)` slots starting at `kmin`.
/// Walking the slots in order visits labels in label order.
#[derive(Default)]
struct DenseRow {
    kmin: i64,
    slots: Vec<Option<(BasisLabel, C64)>>,
}

impl DenseRow {
    /// Adds `value` to `label`'s slot. `false` if the row would grow past
    /// [`MAX_ROW_SLOTS`].
    fn add(&mut self, label: BasisLabel, value: C64) -> bool {
        let k = label.site().1;
        let code = label.direction_code() as i64;
        if self.slots.is_empty() {
            self.kmin = k;
        }
        if k < self.kmin {
            let shift = (self.kmin - k) * CODES;
            if shift + self.slots.len() as i64 > MAX_ROW_SLOTS {
                return false;
            }
            self.slots.splice(0..0, std::iter::repeat(None).take(shift as usize));
            self.kmin = k;
        }
        let idx = (k - self.kmin) * CODES + code;
        if idx >= MAX_ROW_SLOTS {
            return false;
        }
        let idx = idx as usize;
        if idx >= self.slots.len() {
            self.slots.resize(idx + 1, None);
        }
        let slot = self.slots[idx].get_or_insert((label, C64::default()));
        slot.1 += value;
        true
    }

    fn drain_into(&mut self, out: &mut Vec<(BasisLabel, C64)>) {
        out.extend(
            self.slots.drain(..).flatten().filter(|(_, a)| a.norm_sqr() >= PRUNE_THRESHOLD * PRUNE_THRESHOLD),
        );
    }
}

/// Same sums as [`accumulate_hashed`], in the same order, but only the rows
/// within `reach` of the current input row are held open, each as a
/// [`DenseRow`]. `None` if the operator breaks its declared reach or a row
/// is too sparse for dense storage.
fn accumulate_by_rows(
    psi: &WaveFunction,
    op: &dyn StepOperator,
    reach: i64,
) -> Result<Option<Vec<(BasisLabel, C64)>>> {
    let mut out = Vec::with_capacity(psi.len() + psi.len() / 4 + 8);
    let mut open: VecDeque<DenseRow> = VecDeque::new();
    let mut spare: Vec<DenseRow> = Vec::new();
    let mut base = 0i64;

    for (label, amp) in &psi.entries {
        let row = label.site().0;
        if open.is_empty() {
            base = row - reach;
        }
        while base < row - reach {
            match open.pop_front() {
                Some(mut done) => {
                    done.drain_into(&mut out);
                    spare.push(done);
                    base += 1;
                }
                None => base = row - reach,
            }
        }
        for (target, coeff) in op.apply_basis(label)? {
            let r = target.site().0;
            if (r - row).abs() > reach {
                return Ok(None);
            }
            let idx = (r - base) as usize;
            while open.len() <= idx {
                open.push_back(spare.pop().unwrap_or_default());
            }
            if !open[idx].add(target, coeff * amp) {
                return Ok(None);
            }
        }
    }
    for mut row in open {
        row.drain_into(&mut out);
    }
    Ok(Some(out))
}

/// `U^n |psi>`.
pub fn evolve(psi: &WaveFunction, op: &dyn StepOperator, n: usize) -> Result<WaveFunction> {
    if let Some(kind) = psi.kind {
        if kind != op.domain() {
            return Err(WalkError::LabelMismatch { expected: op.domain(), found: kind });
        }
    }
    let mut state = psi.clone();
    for _ in 0..n {
        state = apply_step(&state, op)?;
    }
    Ok(state)
}

pub fn norm_sq(psi: &WaveFunction) -> f64 {
    psi.norm_sq()
}

/// `<psi|phi>`, conjugate-linear in `psi`.
pub fn inner_product(psi: &WaveFunction, phi: &WaveFunction) -> Result<C64> {
    check_compatible(psi.kind, phi.kind)?;
    let (small, large, conj_small) =
        if psi.len() <= phi.len() { (psi, phi, true) } else { (phi, psi, false) };
    let mut acc = C64::new(0.0, 0.0);
    for (label, a) in &small.entries {
        if let Some(b) = large.get(label) {
            acc += if conj_small { a.conj() * b } else { b.conj() * a };
        }
    }
    Ok(acc)
}

/// `<psi| P |psi>` for the projector onto the listed labels.
pub fn probability_of(psi: &WaveFunction, projector: &[BasisLabel]) -> Result<f64> {
    let distinct: BTreeSet<&BasisLabel> = projector.iter().collect();
    let mut total = 0.0;
    for label in distinct {
        if let Some(kind) = psi.kind {
            label.expect_kind(kind)?;
        }
        total += psi.amplitude(label).norm_sqr();
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitarityReport {
    pub tol: f64,
    pub labels_checked: usize,
    pub max_deviation: f64,
    /// Pairs `(b_i, b_j)` with `|<U b_i|U b_j> - delta_ij| > tol`.
    pub offending: Vec<(BasisLabel, BasisLabel, f64)>,
}

impl UnitarityReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= self.tol
    }
}

/// Checks that the columns `U b` for `b` in `window` are orthonormal.
///
/// Columns have finite support, so every inner product is exact; there is no
/// truncation at the window edge. Labels of the wrong kind are reported as
/// offending with infinite deviation.
pub fn verify_unitary_on_window(op: &dyn StepOperator, window: &[BasisLabel], tol: f64) -> UnitarityReport {
    let labels: Vec<BasisLabel> = window.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut offending = Vec::new();
    let mut max_deviation: f64 = 0.0;

    // output label -> [(window index, amplitude)]
    let mut reverse: BTreeMap<BasisLabel, Vec<(usize, C64)>> = BTreeMap::new();
    let mut valid = vec![true; labels.len()];
    for (i, label) in labels.iter().enumerate() {
        match op.apply_basis(label) {
            Ok(column) => {
                for (out, amp) in column {
                    reverse.entry(out).or_default().push((i, amp));
                }
            }
            Err(_) => {
                valid[i] = false;
                max_deviation = f64::INFINITY;
                offending.push((*label, *label, f64::INFINITY));
            }
        }
    }

    let mut gram: BTreeMap<(usize, usize), C64> = BTreeMap::new();
    for terms in reverse.values() {
        for &(i, a) in terms {
            for &(j, b) in terms {
                if i <= j {
                    *gram.entry((i, j)).or_default() += a.conj() * b;
                }
            }
        }
    }
    // zero columns still need their diagonal entry checked
    for (i, _) in valid.iter().enumerate().filter(|(_, v)| **v) {
        gram.entry((i, i)).or_default();
    }
    for (&(i, j), &g) in &gram {
        let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        let dev = (g - target).norm();
        max_deviation = max_deviation.max(dev);
        if dev > tol {
            offending.push((labels[i], labels[j], dev));
        }
    }
    UnitarityReport { tol, labels_checked: labels.len(), max_deviation, offending }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorComparison {
    pub labels_checked: usize,
    pub max_deviation: f64,
    pub worst: Option<BasisLabel>,
}

/// `max_b || A|b> - B|b> ||` over the window.
pub fn compare_operators(
    lhs: &dyn StepOperator,
    rhs: &dyn StepOperator,
    window: &[BasisLabel],
) -> Result<OperatorComparison> {
    let mut max_deviation: f64 = 0.0;
    let mut worst = None;
    for label in window {
        let mut diff: BTreeMap<BasisLabel, C64> = BTreeMap::new();
        for (out, amp) in lhs.apply_basis(label)? {
            *diff.entry(out).or_default() += amp;
        }
        for (out, amp) in rhs.apply_basis(label)? {
            *diff.entry(out).or_default() -= amp;
        }
        let dev = diff.values().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if dev > max_deviation || worst.is_none() {
            max_deviation = max_deviation.max(dev);
            worst = Some(*label);
        }
    }
    Ok(OperatorComparison { labels_checked: window.len(), max_deviation, worst })
}

/// `E^dagger U_c E`: a coined operator pulled back to the scattering space.
pub struct Conjugated<'a> {
    pub coined: &'a dyn StepOperator,
    pub map: &'a dyn Relabeling,
}

impl StepOperator for Conjugated<'_> {
    fn domain(&self) -> LabelKind {
        self.map.scattering_kind()
    }

    fn max_row_shift(&self) -> Option<i64> {
        self.coined.max_row_shift()
    }

    fn apply_basis(&self, label: &BasisLabel) -> Result<Column> {
        label.expect_kind(self.domain())?;
        let image = self.coined.apply_basis(&self.map.forward(label)?)?;
        image.into_iter().map(|(l, a)| Ok((self.map.backward(&l)?, a))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Sign;

    /// Shift on the line that ignores the coin.
    struct Shift;

    impl StepOperator for Shift {
        fn domain(&self) -> LabelKind {
            LabelKind::Coined1D
        }

        fn apply_basis(&self, label: &BasisLabel) -> Result<Column> {
            label.expect_kind(self.domain())?;
            let BasisLabel::Coined1D { j, sigma } = *label else { unreachable!() };
            Ok(smallvec::smallvec![(BasisLabel::Coined1D { j: j + 1, sigma }, C64::new(1.0, 0.0))])
        }
    }

    fn c(j: i64, s: Sign) -> BasisLabel {
        BasisLabel::Coined1D { j, sigma: s }
    }

    #[test]
    fn empty_maps_to_empty() {
        let out = apply_step(&WaveFunction::empty(), &Shift).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn mismatch_is_typed_error() {
        let psi = WaveFunction::basis(BasisLabel::Scattering1D { sigma: Sign::Plus, j: 0 });
        assert!(matches!(apply_step(&psi, &Shift), Err(WalkError::LabelMismatch { .. })));
        assert!(evolve(&psi, &Shift, 0).is_err());
    }

    #[test]
    fn mixed_kinds_rejected() {
        let r = WaveFunction::from_entries([
            (c(0, Sign::Plus), C64::new(1.0, 0.0)),
            (BasisLabel::Scattering1D { sigma: Sign::Plus, j: 0 }, C64::new(1.0, 0.0)),
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn norms_and_inner_products() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = WaveFunction::from_entries([
            (c(0, Sign::Plus), C64::new(h, 0.0)),
            (c(1, Sign::Minus), C64::new(0.0, h)),
        ])
        .unwrap();
        assert!((norm_sq(&psi) - 1.0).abs() < 1e-15);
        let ip = inner_product(&psi, &psi).unwrap();
        assert!((ip.re - norm_sq(&psi)).abs() < 1e-15 && ip.im.abs() < 1e-15);
        let phi = WaveFunction::basis(c(1, Sign::Minus));
        // <psi|phi> = conj(i h) = -i h
        let ip = inner_product(&psi, &phi).unwrap();
        assert!((ip - C64::new(0.0, -h)).norm() < 1e-15);
        let ip = inner_product(&phi, &psi).unwrap();
        assert!((ip - C64::new(0.0, h)).norm() < 1e-15);
    }

    #[test]
    fn projector_probabilities() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = WaveFunction::from_entries([
            (c(0, Sign::Plus), C64::new(h, 0.0)),
            (c(0, Sign::Minus), C64::new(h, 0.0)),
        ])
        .unwrap();
        let p = probability_of(&psi, &[c(0, Sign::Plus), c(0, Sign::Minus)]).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        let p = probability_of(&psi, &[c(1, Sign::Plus), c(1, Sign::Minus)]).unwrap();
        assert_eq!(p, 0.0);
        let wrong = [BasisLabel::Scattering1D { sigma: Sign::Plus, j: 0 }];
        assert!(probability_of(&psi, &wrong).is_err());
    }

    #[test]
    fn pruning_drops_tiny_amplitudes() {
        let psi = WaveFunction::from_entries([
            (c(0, Sign::Plus), C64::new(1.0, 0.0)),
            (c(1, Sign::Plus), C64::new(1e-17, 0.0)),
        ])
        .unwrap();
        assert_eq!(psi.len(), 1);
    }

    #[test]
    fn shift_is_unitary_on_window() {
        let window: Vec<_> = (-5..=5).flat_map(|j| Sign::BOTH.map(|s| c(j, s))).collect();
        let report = verify_unitary_on_window(&Shift, &window, 1e-12);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.labels_checked, 22);
    }
}
