//! Vectorial functions on GF(2^m) x GF(2^m) as exhaustive truth tables, and
//! their Walsh and differential spectra.
//!
//! Inputs `(x, y)` are packed as `x | y << m`; outputs are stored the same
//! way, so the whole function is a table of `2^(2m)` words of `2m` bits.
//!
//! Component functions use the trace pairing
//! `<(l, u), (a, b)> = Tr(l a) + Tr(u b)` on both sides: components are
//! selected by `(lambda, mu)` and Walsh values of a component are indexed by
//! `(u1, u2)` with `W(u1, u2) = sum (-1)^(f(x, y) + Tr(u1 x) + Tr(u2 y))`.
//! The fast transform itself works with the bitwise dot product; the two
//! are related by the linear bijection [`FieldSpec::trace_dual`].

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2m::FieldSpec;

/// Largest `m` tabulated unless overridden.
pub const DEFAULT_MAX_M: u32 = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableLimits {
    pub max_m: u32,
}

impl Default for TableLimits {
    fn default() -> Self {
        TableLimits { max_m: DEFAULT_MAX_M }
    }
}

impl TableLimits {
    pub fn check(&self, field: &FieldSpec) -> Result<()> {
        if field.m() > self.max_m {
            Err(Error::TableTooLarge {
                m: field.m(),
                max: self.max_m,
            })
        } else {
            Ok(())
        }
    }
}

/// Exhaustive table of a map `GF(2^m)^2 -> GF(2^m)^2`.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorialFunction {
    field: FieldSpec,
    words: Vec<u32>,
}

impl std::fmt::Debug for VectorialFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VectorialFunction")
            .field("field", &self.field)
            .field("entries", &self.words.len())
            .finish()
    }
}

impl VectorialFunction {
    /// Evaluates `f` at every input pair.
    pub fn tabulate<F>(field: FieldSpec, limits: TableLimits, f: F) -> Result<Self>
    where
        F: Fn(u32, u32) -> (u32, u32) + Sync,
    {
        limits.check(&field)?;
        let m = field.m();
        let mask = field.mask();
        let words = (0..1u32 << (2 * m))
            .into_par_iter()
            .map(|idx| {
                let (a, b) = f(idx & mask, idx >> m);
                debug_assert!(field.contains(a) && field.contains(b));
                a | b << m
            })
            .collect();
        Ok(Self { field, words })
    }

    /// Wraps packed output words (`F1 | F2 << m`), indexed by packed input.
    pub fn from_words(field: FieldSpec, words: Vec<u32>) -> Result<Self> {
        let expected = 1usize << (2 * field.m());
        if words.len() != expected {
            return Err(Error::InvalidParameters(format!(
                "expected {expected} output words, got {}",
                words.len()
            )));
        }
        if let Some(&w) = words.iter().find(|&&w| w >> (2 * field.m()) != 0) {
            return Err(Error::ElementOutOfRange {
                m: 2 * field.m(),
                value: w,
            });
        }
        Ok(Self { field, words })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Number of input variables over GF(2), `2m`.
    pub fn num_vars(&self) -> u32 {
        2 * self.field.m()
    }

    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn index(&self, x: u32, y: u32) -> usize {
        (x | y << self.field.m()) as usize
    }

    pub fn output(&self, x: u32, y: u32) -> (u32, u32) {
        self.pair(self.index(x, y))
    }

    pub fn pair(&self, index: usize) -> (u32, u32) {
        let w = self.words[index];
        (w & self.field.mask(), w >> self.field.m())
    }

    /// Copy with output bit `bit` (of the packed word) flipped at `index`.
    pub fn with_flipped_bit(&self, index: usize, bit: u32) -> Self {
        let mut words = self.words.clone();
        words[index] ^= 1 << bit;
        Self {
            field: self.field,
            words,
        }
    }
}

/// `(lambda, mu)` selecting the component `Tr(lambda F1) + Tr(mu F2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComponentSelector {
    #[serde(with = "crate::gf2m::hex")]
    pub lambda: u32,
    #[serde(with = "crate::gf2m::hex")]
    pub mu: u32,
}

impl ComponentSelector {
    pub fn new(lambda: u32, mu: u32) -> Result<Self> {
        if lambda == 0 && mu == 0 {
            return Err(Error::ZeroSelector);
        }
        Ok(Self { lambda, mu })
    }

    /// Selector from its packed index `lambda | mu << m`.
    pub fn from_index(field: &FieldSpec, c: u32) -> Result<Self> {
        Self::new(c & field.mask(), c >> field.m())
    }

    pub fn index(&self, field: &FieldSpec) -> u32 {
        self.lambda | self.mu << field.m()
    }

    fn dot_mask(&self, field: &FieldSpec) -> u32 {
        field.trace_dual(self.lambda) | field.trace_dual(self.mu) << field.m()
    }
}

pub fn component_truth_table(f: &VectorialFunction, c: ComponentSelector) -> Result<Vec<bool>> {
    if c.lambda == 0 && c.mu == 0 {
        return Err(Error::ZeroSelector);
    }
    let field = f.field();
    if !field.contains(c.lambda) || !field.contains(c.mu) {
        return Err(Error::InvalidParameters(format!(
            "selector {c:?} outside GF(2^{})",
            field.m()
        )));
    }
    Ok(table_for_mask(f, c.dot_mask(&field)))
}

fn table_for_mask(f: &VectorialFunction, mask: u32) -> Vec<bool> {
    f.words.iter().map(|w| (w & mask).count_ones() & 1 == 1).collect()
}

/// Walsh values of a Boolean function plus derived plateau data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    num_vars: u32,
    values: Vec<i64>,
    distinct_abs: BTreeSet<u64>,
    plateau_level: Option<u32>,
}

impl WalshSpectrum {
    fn from_values(num_vars: u32, values: Vec<i64>) -> Self {
        let distinct_abs: BTreeSet<u64> = values.iter().map(|v| v.unsigned_abs()).collect();
        let plateau_level = classify_plateau(num_vars, &distinct_abs);
        Self {
            num_vars,
            values,
            distinct_abs,
            plateau_level,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn distinct_abs(&self) -> &BTreeSet<u64> {
        &self.distinct_abs
    }

    /// `Some(s)` when every `|W|` lies in `{0, 2^((n+s)/2)}`.
    pub fn plateau_level(&self) -> Option<u32> {
        self.plateau_level
    }

    pub fn max_abs(&self) -> u64 {
        self.distinct_abs.last().copied().unwrap_or(0)
    }

    pub fn parseval_holds(&self) -> bool {
        let sum: i128 = self.values.iter().map(|&v| i128::from(v) * i128::from(v)).sum();
        sum == 1i128 << (2 * self.num_vars)
    }
}

fn classify_plateau(num_vars: u32, distinct_abs: &BTreeSet<u64>) -> Option<u32> {
    let mut nonzero = distinct_abs.iter().filter(|&&v| v != 0);
    let level = *nonzero.next()?;
    if nonzero.next().is_some() || !level.is_power_of_two() {
        return None;
    }
    // |W| = 2^((n+s)/2)
    let s = 2 * level.trailing_zeros();
    s.checked_sub(num_vars)
}

/// Plateau level of a spectrum; `None` means not plateaued.
pub fn plateau_level(spectrum: &WalshSpectrum) -> Option<u32> {
    spectrum.plateau_level()
}

/// Fast Walsh–Hadamard transform with the dot-product pairing:
/// `W(u) = sum_x (-1)^(f(x) + u.x)`.
pub fn walsh_transform(table: &[bool]) -> Result<WalshSpectrum> {
    if !table.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo(table.len()));
    }
    let mut values: Vec<i64> = table.iter().map(|&b| if b { -1 } else { 1 }).collect();
    fwht_in_place(&mut values);
    Ok(WalshSpectrum::from_values(table.len().trailing_zeros(), values))
}

fn fwht_in_place(values: &mut [i64]) {
    let n = values.len();
    let mut h = 1;
    while h < n {
        for block in values.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        h *= 2;
    }
}

/// Walsh spectrum of one component, indexed by `(u1, u2)` under the trace
/// pairing.
pub fn component_spectrum(f: &VectorialFunction, c: ComponentSelector) -> Result<WalshSpectrum> {
    let table = component_truth_table(f, c)?;
    let duals = DualTable::new(&f.field());
    Ok(duals.reindex(walsh_transform(&table)?))
}

/// Cached `trace_dual` images of every element, used to move Walsh values
/// from dot-product to trace-pairing coordinates.
struct DualTable {
    m: u32,
    mask: u32,
    duals: Vec<u32>,
}

impl DualTable {
    fn new(field: &FieldSpec) -> Self {
        DualTable {
            m: field.m(),
            mask: field.mask(),
            duals: field.elements().map(|a| field.trace_dual(a)).collect(),
        }
    }

    fn selector_mask(&self, c: u32) -> u32 {
        self.duals[(c & self.mask) as usize] | self.duals[(c >> self.m) as usize] << self.m
    }

    fn reindex(&self, dot: WalshSpectrum) -> WalshSpectrum {
        let values = (0..dot.values.len() as u32)
            .map(|u| dot.values[self.selector_mask(u) as usize])
            .collect();
        WalshSpectrum { values, ..dot }
    }
}

/// Runs `visit` on every component `c = 1 .. 2^(2m) - 1` in parallel and
/// returns the results in selector order.
pub fn map_components<T, V>(f: &VectorialFunction, visit: V) -> Vec<T>
where
    T: Send,
    V: Fn(ComponentSelector, &[bool], &WalshSpectrum) -> T + Sync,
{
    let field = f.field();
    let duals = DualTable::new(&field);
    (1..1u32 << f.num_vars())
        .into_par_iter()
        .map(|c| {
            let selector = ComponentSelector::from_index(&field, c).expect("c is nonzero");
            let table = table_for_mask(f, duals.selector_mask(c));
            let spectrum = duals.reindex(walsh_transform(&table).expect("power-of-two table"));
            visit(selector, &table, &spectrum)
        })
        .collect()
}

/// Aggregate Walsh data over all nonzero components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    /// Plateau level -> number of components at that level.
    pub counts: BTreeMap<u32, u64>,
    pub not_plateaued: u64,
    pub bent_count: u64,
    pub semibent_count: u64,
    pub nonlinearity: u64,
    pub max_abs_walsh: u64,
    /// Bent/semibent only, with exactly `2(2^n - 1)/3` bent components.
    pub classical: bool,
    /// The extended Walsh spectrum: every value attained by some component.
    pub walsh_values: BTreeSet<i64>,
    pub parseval_violations: u64,
}

impl SpectrumReport {
    /// Levels attained by at least one component.
    pub fn levels(&self) -> BTreeSet<u32> {
        self.counts.keys().copied().collect()
    }

    pub fn only_bent_or_semibent(&self) -> bool {
        self.not_plateaued == 0 && self.counts.keys().all(|&s| s == 0 || s == 2)
    }
}

/// The part of one component's spectrum that [`SpectrumReport`] aggregates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentSummary {
    pub level: Option<u32>,
    pub max_abs: u64,
    pub values: BTreeSet<i64>,
    pub parseval: bool,
}

impl ComponentSummary {
    pub fn of(spectrum: &WalshSpectrum) -> Self {
        Self {
            level: spectrum.plateau_level(),
            max_abs: spectrum.max_abs(),
            values: spectrum.values().iter().copied().collect(),
            parseval: spectrum.parseval_holds(),
        }
    }
}

impl SpectrumReport {
    /// Aggregates the summaries of all `2^n - 1` nonzero components.
    pub fn from_components<I>(num_vars: u32, components: I) -> Self
    where
        I: IntoIterator<Item = ComponentSummary>,
    {
        let n = num_vars;
        let mut counts = BTreeMap::new();
        let mut not_plateaued = 0;
        let mut max_abs = 0;
        let mut walsh_values = BTreeSet::new();
        let mut parseval_violations = 0;
        for c in components {
            match c.level {
                Some(s) => *counts.entry(s).or_insert(0u64) += 1,
                None => not_plateaued += 1,
            }
            max_abs = max_abs.max(c.max_abs);
            walsh_values.extend(c.values);
            if !c.parseval {
                parseval_violations += 1;
            }
        }
        let bent_count = counts.get(&0).copied().unwrap_or(0);
        let semibent_level = if n.is_multiple_of(2) { 2 } else { 1 };
        let semibent_count = counts.get(&semibent_level).copied().unwrap_or(0);
        let components = (1u64 << n) - 1;
        let classical = n.is_multiple_of(2)
            && not_plateaued == 0
            && counts.keys().all(|&s| s == 0 || s == 2)
            && bent_count == 2 * components / 3;
        SpectrumReport {
            counts,
            not_plateaued,
            bent_count,
            semibent_count,
            nonlinearity: (1u64 << (n - 1)) - max_abs / 2,
            max_abs_walsh: max_abs,
            classical,
            walsh_values,
            parseval_violations,
        }
    }
}

pub fn spectrum_report(f: &VectorialFunction) -> SpectrumReport {
    let per_component = map_components(f, |_, _, spectrum| ComponentSummary::of(spectrum));
    SpectrumReport::from_components(f.num_vars(), per_component)
}

/// Linear structures of a Boolean function: directions `a` with
/// `f(x + a) + f(x)` constant, found by direct evaluation.
pub fn linear_structures(table: &[bool]) -> Vec<usize> {
    let n = table.len();
    (0..n)
        .filter(|&a| {
            let c = table[a] ^ table[0];
            (1..n).all(|x| table[x ^ a] ^ table[x] == c)
        })
        .collect()
}

/// Dimension of the linear space of `table`, by enumeration.
pub fn linear_space_dimension(table: &[bool]) -> u32 {
    let size = linear_structures(table).len();
    debug_assert!(size.is_power_of_two());
    size.trailing_zeros()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialSpectrum {
    pub uniformity: u32,
    /// Number of solutions -> how many `(a != 0, b)` pairs have that many.
    pub histogram: BTreeMap<u32, u64>,
}

impl DifferentialSpectrum {
    pub fn is_apn(&self) -> bool {
        self.uniformity == 2
    }
}

pub fn differential_spectrum(f: &VectorialFunction) -> DifferentialSpectrum {
    let size = f.words.len();
    let words = &f.words;
    let per_direction: Vec<BTreeMap<u32, u64>> = (1..size)
        .into_par_iter()
        .map_init(
            || vec![0u32; size],
            |counts, a| {
                counts.fill(0);
                for x in 0..size {
                    counts[(words[x ^ a] ^ words[x]) as usize] += 1;
                }
                let mut hist = BTreeMap::new();
                for &c in counts.iter() {
                    *hist.entry(c).or_insert(0u64) += 1;
                }
                hist
            },
        )
        .collect();
    let mut histogram = BTreeMap::new();
    for hist in per_direction {
        for (c, freq) in hist {
            *histogram.entry(c).or_insert(0) += freq;
        }
    }
    let uniformity = histogram.keys().next_back().copied().unwrap_or(0);
    DifferentialSpectrum { uniformity, histogram }
}
