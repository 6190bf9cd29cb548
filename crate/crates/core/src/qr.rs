//! Finite-scale deviation statistics for the quasi-randomness
//! characterizations: global and hereditary subgraph counts, cuts,
//! regularity and degree moments.
//!
//! Every statistic is a maximum over vertex subsets, normalized by `n^f`
//! (or `n^2` for cuts). The subset space is enumerated when it has at most
//! [`EXHAUSTIVE_LIMIT`] elements and sampled with a seeded generator
//! otherwise.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::{bitset, count_homomorphisms, degree_moment, regularity_deviation, t_inj, Graph, PatternGraph, VertexSet};
use crate::graph::count::SubgraphCounter;
use crate::graphon::{t_density, StepKernel};
use crate::hf::beta;
use crate::rng::SeededRng;

pub const EXHAUSTIVE_LIMIT: u128 = 1 << 20;
pub const DEFAULT_SAMPLES: usize = 2000;
/// Sampled cut candidates polished by local search.
pub const CUT_REFINEMENTS: usize = 16;

pub const HALF_CUT_ANNOTATION: &str = "γ=1/2: not forcing without regularity";
pub const BOUNDARY_GAMMA_ANNOTATION: &str = "γ=1/f: boundary case, no verdict";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Global,
    HereditarySingle,
    HereditaryMulti,
    HereditaryDisjoint,
    Cut,
    CutFixedSize,
    Regularity,
    DegreeMoment,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::Global => "global",
            Property::HereditarySingle => "hereditary-single",
            Property::HereditaryMulti => "hereditary-multi",
            Property::HereditaryDisjoint => "hereditary-disjoint",
            Property::Cut => "cut",
            Property::CutFixedSize => "cut-fixed-size",
            Property::Regularity => "regularity",
            Property::DegreeMoment => "degree-moment",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HereditaryMode {
    /// One set `U` for all pattern vertices.
    Single,
    /// Independent sets `U_1..U_f`.
    Multi,
    /// Pairwise disjoint sets `U_1..U_f`.
    Disjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SubsetSize {
    #[default]
    All,
    /// Every set has exactly `floor(gamma n)` vertices.
    Fixed(f64),
}

impl SubsetSize {
    pub fn gamma(self) -> Option<f64> {
        match self {
            SubsetSize::All => None,
            SubsetSize::Fixed(g) => Some(g),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampler {
    pub samples: usize,
    pub seed: u64,
}

impl Default for Sampler {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

/// Parameters of a hereditary count test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HereditaryTest {
    pub mode: HereditaryMode,
    pub size: SubsetSize,
    pub induced: bool,
    pub sampler: Sampler,
    /// Allow `gamma = 1/f` in disjoint fixed-size mode.
    pub allow_boundary_gamma: bool,
}

impl HereditaryTest {
    pub fn new(mode: HereditaryMode) -> Self {
        Self {
            mode,
            size: SubsetSize::All,
            induced: false,
            sampler: Sampler::default(),
            allow_boundary_gamma: false,
        }
    }

    pub fn size(mut self, size: SubsetSize) -> Self {
        self.size = size;
        self
    }

    pub fn induced(mut self, induced: bool) -> Self {
        self.induced = induced;
        self
    }

    pub fn sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn allow_boundary_gamma(mut self, allow: bool) -> Self {
        self.allow_boundary_gamma = allow;
        self
    }
}

/// A labelled per-item value, e.g. the deviation of one pattern or one `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeviationReport {
    pub property: Property,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<PatternGraph>,
    pub p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    pub induced: bool,
    pub samples: usize,
    pub exhaustive: bool,
    pub max_dev: f64,
    /// The maximizing subsets; empty for statistics not taken over subsets.
    pub witness: Vec<VertexSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub annotation: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<ReportEntry>,
}

impl DeviationReport {
    fn new(property: Property, p: f64) -> Self {
        Self {
            property,
            pattern: None,
            p,
            gamma: None,
            induced: false,
            samples: 0,
            exhaustive: true,
            max_dev: 0.0,
            witness: Vec::new(),
            seed: None,
            annotation: None,
            entries: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub const CSV_HEADER: [&'static str; 11] = [
        "property",
        "pattern",
        "p",
        "gamma",
        "induced",
        "samples",
        "exhaustive",
        "max_dev",
        "witness",
        "seed",
        "annotation",
    ];

    /// Fields in [`Self::CSV_HEADER`] order; witness sets are space-separated
    /// vertex lists joined by `|`.
    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        vec![
            self.property.to_string(),
            opt(self.pattern.as_ref().map(ToString::to_string)),
            self.p.to_string(),
            opt(self.gamma.map(|g| g.to_string())),
            self.induced.to_string(),
            self.samples.to_string(),
            self.exhaustive.to_string(),
            self.max_dev.to_string(),
            self.witness.iter().map(|s| s.as_slice().iter().join(" ")).join("|"),
            opt(self.seed.map(|s| s.to_string())),
            opt(self.annotation.clone()),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(Self::CSV_HEADER).expect("in-memory write");
        w.write_record(self.csv_record()).expect("in-memory write");
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("p", format!("{p} not in [0, 1]")));
    }
    Ok(())
}

fn fixed_size(size: SubsetSize, n: usize) -> Result<Option<usize>> {
    match size {
        SubsetSize::All => Ok(None),
        SubsetSize::Fixed(g) if g > 0.0 && g < 1.0 => Ok(Some((g * n as f64).floor() as usize)),
        SubsetSize::Fixed(g) => Err(invalid("gamma", format!("{g} not in (0, 1)"))),
    }
}

/// `max_F |N(F, G) / n^f - p^{e(F)}|` over the patterns.
pub fn dev_global(g: &Graph, p: f64, patterns: &[PatternGraph]) -> Result<DeviationReport> {
    check_p(p)?;
    if patterns.is_empty() {
        return Err(invalid("patterns", "at least one pattern is required"));
    }
    let n = g.n();
    if let Some(f) = patterns.iter().find(|f| f.f() > n) {
        return Err(Error::HostTooSmall { n, f: f.f() });
    }
    let mut report = DeviationReport::new(Property::Global, p);
    let full = vec![VertexSet::full(n)];
    let mut best: Option<usize> = None;
    for (i, f) in patterns.iter().enumerate() {
        let dev = hereditary_deviation(g, f, p, false, &full)?;
        report.entries.push(ReportEntry {
            label: f.to_string(),
            value: dev,
        });
        if best.is_none() || dev > report.max_dev {
            report.max_dev = dev;
            best = Some(i);
        }
    }
    report.pattern = best.map(|i| patterns[i].clone());
    report.samples = 1;
    Ok(report)
}

/// `|N(F, G; U_1..U_f) - target| / n^f` for one candidate. A single set is
/// the single-set test with target `c |U|^f`; `f` sets give the per-vertex
/// target `c prod |U_i|`. Here `c = p^{e(F)}`, or `beta_F(p)` when `induced`.
pub fn hereditary_deviation(g: &Graph, f: &PatternGraph, p: f64, induced: bool, sets: &[VertexSet]) -> Result<f64> {
    if sets.len() != 1 && sets.len() != f.f() {
        return Err(invalid("sets", format!("expected 1 or {} vertex sets, got {}", f.f(), sets.len())));
    }
    let bits: Vec<Vec<u64>> = sets.iter().map(|s| s.to_bits(g.n())).collect::<Result<_>>()?;
    let lists: Vec<Vec<usize>> = sets.iter().map(|s| s.as_slice().to_vec()).collect();
    let eval = HereditaryEval::new(g, f, p, induced, SubgraphCounter::new(f, g, induced)?);
    Ok(eval.deviation_bits(&lists, &bits))
}

struct HereditaryEval<'a> {
    counter: SubgraphCounter<'a>,
    coefficient: f64,
    f: usize,
    scale: f64,
    words: usize,
}

impl<'a> HereditaryEval<'a> {
    fn new(g: &'a Graph, f: &PatternGraph, p: f64, induced: bool, counter: SubgraphCounter<'a>) -> Self {
        let coefficient = if induced { beta(f, p) } else { p.powi(f.edge_count() as i32) };
        Self {
            counter,
            coefficient,
            f: f.f(),
            scale: (g.n() as f64).powi(f.f() as i32),
            words: bitset::words_for(g.n()),
        }
    }

    fn deviation(&self, sets: &[Vec<usize>]) -> f64 {
        let bits: Vec<Vec<u64>> = sets
            .iter()
            .map(|s| {
                let mut b = vec![0u64; self.words];
                s.iter().for_each(|&v| bitset::set(&mut b, v));
                b
            })
            .collect();
        self.deviation_bits(sets, &bits)
    }

    fn deviation_bits(&self, sets: &[Vec<usize>], bits: &[Vec<u64>]) -> f64 {
        let (bases, product): (Vec<&[u64]>, f64) = if sets.len() == 1 {
            (vec![bits[0].as_slice(); self.f], (sets[0].len() as f64).powi(self.f as i32))
        } else {
            (bits.iter().map(Vec::as_slice).collect(), sets.iter().map(|s| s.len() as f64).product())
        };
        let count = self.counter.count(&bases) as f64;
        (count - self.coefficient * product).abs() / self.scale
    }
}

#[derive(Debug, Clone, Copy)]
enum Family {
    Single,
    Multi(usize),
    Disjoint(usize),
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| (acc.saturating_mul((n - i) as u128)) / (i as u128 + 1))
}

fn space_size(family: Family, n: usize, m: Option<usize>) -> u128 {
    let pow = |base: u128, e: usize| (0..e).fold(1u128, |acc, _| acc.saturating_mul(base));
    match (family, m) {
        (Family::Single, None) => pow(2, n),
        (Family::Single, Some(m)) => binomial(n, m),
        (Family::Multi(f), None) => pow(2, n * f),
        (Family::Multi(f), Some(m)) => pow(binomial(n, m), f),
        (Family::Disjoint(f), None) => pow(f as u128 + 1, n),
        (Family::Disjoint(f), Some(m)) => {
            let mut rest = n;
            (0..f).fold(1u128, |acc, _| {
                let c = binomial(rest, m);
                rest = rest.saturating_sub(m);
                acc.saturating_mul(c)
            })
        }
    }
}

/// Calls `visit` on every candidate of the family. Only used below
/// [`EXHAUSTIVE_LIMIT`].
fn enumerate(family: Family, n: usize, m: Option<usize>, visit: &mut dyn FnMut(&[Vec<usize>])) {
    let from_mask = |mask: u64| (0..n).filter(|v| mask >> v & 1 == 1).collect::<Vec<_>>();
    match (family, m) {
        (Family::Single, None) => {
            for mask in 0u64..1 << n {
                visit(&[from_mask(mask)]);
            }
        }
        (Family::Single, Some(m)) => {
            for c in (0..n).combinations(m) {
                visit(&[c]);
            }
        }
        (Family::Multi(f), None) => {
            for mask in 0u64..1 << (n * f) {
                let sets: Vec<Vec<usize>> = (0..f).map(|i| from_mask(mask >> (i * n) & ((1 << n) - 1))).collect();
                visit(&sets);
            }
        }
        (Family::Multi(f), Some(m)) => {
            for sets in (0..f).map(|_| (0..n).combinations(m)).multi_cartesian_product() {
                visit(&sets);
            }
        }
        (Family::Disjoint(f), None) => {
            let mut labels = vec![0usize; n];
            loop {
                let mut sets = vec![Vec::new(); f];
                for (v, &l) in labels.iter().enumerate() {
                    if l > 0 {
                        sets[l - 1].push(v);
                    }
                }
                visit(&sets);
                let Some(pos) = labels.iter().position(|&l| l < f) else {
                    break;
                };
                labels[..pos].iter_mut().for_each(|l| *l = 0);
                labels[pos] += 1;
            }
        }
        (Family::Disjoint(f), Some(m)) => {
            fn rec(i: usize, f: usize, m: usize, free: &[usize], sets: &mut Vec<Vec<usize>>, visit: &mut dyn FnMut(&[Vec<usize>])) {
                if i == f {
                    visit(sets);
                    return;
                }
                for c in free.iter().copied().combinations(m) {
                    let rest: Vec<usize> = free.iter().copied().filter(|v| !c.contains(v)).collect();
                    sets.push(c);
                    rec(i + 1, f, m, &rest, sets, visit);
                    sets.pop();
                }
            }
            let all: Vec<usize> = (0..n).collect();
            rec(0, f, m, &all, &mut Vec::with_capacity(f), visit);
        }
    }
}

fn sample(family: Family, n: usize, m: Option<usize>, rng: &mut SeededRng) -> Vec<Vec<usize>> {
    let uniform_subset = |rng: &mut SeededRng| (0..n).filter(|_| rng.next_u64() >> 63 == 1).collect::<Vec<_>>();
    match (family, m) {
        (Family::Single, None) => vec![uniform_subset(rng)],
        (Family::Single, Some(m)) => vec![rng.subset_of_size(n, m)],
        (Family::Multi(f), None) => (0..f).map(|_| uniform_subset(rng)).collect(),
        (Family::Multi(f), Some(m)) => (0..f).map(|_| rng.subset_of_size(n, m)).collect(),
        (Family::Disjoint(f), None) => {
            let mut sets = vec![Vec::new(); f];
            for v in 0..n {
                let l = rng.below(f + 1);
                if l > 0 {
                    sets[l - 1].push(v);
                }
            }
            sets
        }
        (Family::Disjoint(f), Some(m)) => {
            let perm = rng.permutation(n);
            (0..f)
                .map(|i| {
                    let mut s = perm[i * m..(i + 1) * m].to_vec();
                    s.sort_unstable();
                    s
                })
                .collect()
        }
    }
}

/// Maximum of `eval` over the family, exhaustive or sampled. Returns
/// `(max, witness, examined, exhaustive)`; the first maximizer wins ties.
fn maximize(
    family: Family,
    n: usize,
    m: Option<usize>,
    sampler: Sampler,
    eval: &mut dyn FnMut(&[Vec<usize>]) -> f64,
) -> (f64, Vec<Vec<usize>>, usize, bool) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut examined = 0usize;
    let mut consider = |sets: &[Vec<usize>]| {
        let d = eval(sets);
        examined += 1;
        if d > best.0 {
            best = (d, sets.to_vec());
        }
    };
    let exhaustive = space_size(family, n, m) <= EXHAUSTIVE_LIMIT;
    if exhaustive {
        enumerate(family, n, m, &mut consider);
    } else {
        let mut rng = SeededRng::new(sampler.seed);
        let candidates: Vec<Vec<Vec<usize>>> = (0..sampler.samples).map(|_| sample(family, n, m, &mut rng)).collect();
        candidates.iter().for_each(|c| consider(c));
    }
    (best.0.max(0.0), best.1, examined, exhaustive)
}

/// Maximum normalized deviation of hereditary counts `N(F, G; U)` (or
/// `N(F, G; U_1..U_f)`) from their quasi-random targets.
pub fn dev_hereditary(g: &Graph, f: &PatternGraph, p: f64, test: &HereditaryTest) -> Result<DeviationReport> {
    check_p(p)?;
    let n = g.n();
    let m = fixed_size(test.size, n)?;
    let ff = f.f();
    let mut annotation = None;
    if let (HereditaryMode::Disjoint, SubsetSize::Fixed(gamma)) = (test.mode, test.size) {
        let limit = 1.0 / ff as f64;
        let boundary = (gamma - limit).abs() <= 1e-12;
        if boundary && test.allow_boundary_gamma {
            annotation = Some(BOUNDARY_GAMMA_ANNOTATION.to_string());
        } else if gamma >= limit || boundary {
            return Err(invalid("gamma", format!("{gamma} must be below 1/f = {limit} for disjoint fixed-size sets")));
        }
        if ff * m.unwrap_or(0) > n {
            return Err(invalid("gamma", format!("{ff} disjoint sets of size {} exceed {n} vertices", m.unwrap_or(0))));
        }
    }
    let (family, property) = match test.mode {
        HereditaryMode::Single => (Family::Single, Property::HereditarySingle),
        HereditaryMode::Multi => (Family::Multi(ff), Property::HereditaryMulti),
        HereditaryMode::Disjoint => (Family::Disjoint(ff), Property::HereditaryDisjoint),
    };
    let counter = SubgraphCounter::new(f, g, test.induced)?;
    let eval = HereditaryEval::new(g, f, p, test.induced, counter);
    let (max_dev, witness, samples, exhaustive) = maximize(family, n, m, test.sampler, &mut |sets| eval.deviation(sets));
    let mut report = DeviationReport::new(property, p);
    report.pattern = Some(f.clone());
    report.gamma = test.size.gamma();
    report.induced = test.induced;
    report.samples = samples;
    report.exhaustive = exhaustive;
    report.max_dev = max_dev;
    report.witness = witness.into_iter().map(VertexSet::new).collect();
    report.seed = (!exhaustive).then_some(test.sampler.seed);
    report.annotation = annotation;
    Ok(report)
}

/// `|e(U, U') - p |U| |U'|| / n^2`.
pub fn cut_deviation(g: &Graph, p: f64, u: &VertexSet) -> Result<f64> {
    let bits = u.to_bits(g.n())?;
    let cut = CutState::new(g, &bits);
    Ok(cut.deviation(p))
}

/// Cut bookkeeping for single-vertex moves: `inside[v] = |N(v) ∩ U|`.
struct CutState<'a> {
    g: &'a Graph,
    member: Vec<bool>,
    inside: Vec<usize>,
    size: usize,
    cut: i64,
}

impl<'a> CutState<'a> {
    fn new(g: &'a Graph, bits: &[u64]) -> Self {
        let n = g.n();
        let member: Vec<bool> = (0..n).map(|v| bitset::test(bits, v)).collect();
        let inside: Vec<usize> = (0..n)
            .map(|v| g.row(v).iter().zip(bits).map(|(r, b)| (r & b).count_ones() as usize).sum())
            .collect();
        let cut = (0..n).filter(|&v| member[v]).map(|v| (g.degree(v) - inside[v]) as i64).sum();
        let size = member.iter().filter(|&&b| b).count();
        Self {
            g,
            member,
            inside,
            size,
            cut,
        }
    }

    fn n(&self) -> usize {
        self.member.len()
    }

    fn deviation_of(&self, cut: i64, size: usize, p: f64) -> f64 {
        let n = self.n();
        let pairs = (size * (n - size)) as f64;
        (cut as f64 - p * pairs).abs() / (n as f64 * n as f64)
    }

    fn deviation(&self, p: f64) -> f64 {
        self.deviation_of(self.cut, self.size, p)
    }

    /// Change of `e(U, U')` when `v` switches sides.
    fn flip_delta(&self, v: usize) -> i64 {
        let (a, b) = (self.inside[v] as i64, (self.g.degree(v) - self.inside[v]) as i64);
        if self.member[v] {
            a - b
        } else {
            b - a
        }
    }

    fn flip(&mut self, v: usize) {
        self.cut += self.flip_delta(v);
        let entering = !self.member[v];
        self.member[v] = entering;
        if entering {
            self.size += 1;
        } else {
            self.size -= 1;
        }
        for w in self.g.neighbors(v) {
            if entering {
                self.inside[w] += 1;
            } else {
                self.inside[w] -= 1;
            }
        }
    }

    fn set(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.member[v]).collect()
    }

    /// Steepest-ascent single flips (free size) or swaps (fixed size) until
    /// no move increases the deviation.
    fn climb(&mut self, p: f64, fixed: bool) {
        let n = self.n();
        loop {
            let current = self.deviation(p);
            let mut best: Option<(f64, usize, Option<usize>)> = None;
            if fixed {
                let (ins, outs): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| self.member[v]);
                for &u in &ins {
                    let du = self.flip_delta(u);
                    for &w in &outs {
                        let adj = i64::from(self.g.has_edge(u, w));
                        let a_w = self.inside[w] as i64 - adj;
                        let dw = self.g.degree(w) as i64 - 2 * a_w;
                        let d = self.deviation_of(self.cut + du + dw, self.size, p);
                        if d > best.map_or(current, |b| b.0) {
                            best = Some((d, u, Some(w)));
                        }
                    }
                }
            } else {
                for v in 0..n {
                    let size = if self.member[v] { self.size - 1 } else { self.size + 1 };
                    let d = self.deviation_of(self.cut + self.flip_delta(v), size, p);
                    if d > best.map_or(current, |b| b.0) {
                        best = Some((d, v, None));
                    }
                }
            }
            match best {
                Some((d, u, w)) if d > current + 1e-15 => {
                    self.flip(u);
                    if let Some(w) = w {
                        self.flip(w);
                    }
                }
                _ => break,
            }
        }
    }
}

/// Maximum of `|e(U, U') - p |U| |U'|| / n^2` over all `U` or over
/// `|U| = floor(gamma n)`. Sampled candidates are followed by a local
/// search from the best [`CUT_REFINEMENTS`] of them.
pub fn dev_cut(g: &Graph, p: f64, size: SubsetSize, sampler: Sampler) -> Result<DeviationReport> {
    check_p(p)?;
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyHost);
    }
    let m = fixed_size(size, n)?;
    let words = bitset::words_for(n);
    let to_bits = |s: &[usize]| {
        let mut b = vec![0u64; words];
        s.iter().for_each(|&v| bitset::set(&mut b, v));
        b
    };
    let mut scored: Vec<(f64, Vec<usize>)> = Vec::new();
    let (mut max_dev, witness, samples, exhaustive) = maximize(Family::Single, n, m, sampler, &mut |sets| {
        let d = CutState::new(g, &to_bits(&sets[0])).deviation(p);
        scored.push((d, sets[0].clone()));
        d
    });
    let mut witness = witness.into_iter().next().unwrap_or_default();
    if !exhaustive {
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        for (_, start) in scored.iter().take(CUT_REFINEMENTS) {
            let mut state = CutState::new(g, &to_bits(start));
            state.climb(p, m.is_some());
            let d = state.deviation(p);
            if d > max_dev {
                max_dev = d;
                witness = state.set();
            }
        }
    }
    let mut report = DeviationReport::new(if m.is_some() { Property::CutFixedSize } else { Property::Cut }, p);
    report.gamma = size.gamma();
    report.samples = samples;
    report.exhaustive = exhaustive;
    report.max_dev = max_dev;
    report.witness = vec![VertexSet::new(witness)];
    report.seed = (!exhaustive).then_some(sampler.seed);
    if matches!(size, SubsetSize::Fixed(gamma) if (gamma - 0.5).abs() <= 1e-12) {
        report.annotation = Some(HALF_CUT_ANNOTATION.to_string());
    }
    Ok(report)
}

/// `n^-2 sum_v |d_v - p n|` as a report.
pub fn dev_regularity(g: &Graph, p: f64) -> Result<DeviationReport> {
    check_p(p)?;
    let mut report = DeviationReport::new(Property::Regularity, p);
    report.max_dev = regularity_deviation(g, p)?;
    report.samples = 1;
    Ok(report)
}

/// `|E(D/n)^k - hom(S_k, G) / n^{k+1}|` for `k = 1..=kmax`, one entry per
/// `k`; `max_dev` is the largest.
pub fn degree_moment_check(g: &Graph, kmax: u32) -> Result<DeviationReport> {
    if kmax == 0 {
        return Err(invalid("kmax", "must be at least 1"));
    }
    let n = g.n() as f64;
    let mut report = DeviationReport::new(Property::DegreeMoment, 0.0);
    for k in 1..=kmax {
        let star = PatternGraph::star(k as usize);
        let hom = count_homomorphisms(&star, g)? as f64 / n.powi(k as i32 + 1);
        let diff = (degree_moment(g, k)? - hom).abs();
        report.entries.push(ReportEntry {
            label: format!("k={k}"),
            value: diff,
        });
        report.max_dev = report.max_dev.max(diff);
    }
    report.samples = kmax as usize;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub pattern: String,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// Columns `n, pattern, deviation`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["n", "pattern", "deviation"]).expect("in-memory write");
        for r in &self.rows {
            w.write_record([r.n.to_string(), r.pattern.clone(), r.deviation.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    /// Deviations of one pattern, in row order.
    pub fn column(&self, pattern: &str) -> Vec<f64> {
        self.rows.iter().filter(|r| r.pattern == pattern).map(|r| r.deviation).collect()
    }
}

/// `|t_inj(F, G_i) - t(F, W)|` for every graph and pattern, rows ordered by
/// graph size (stable for equal sizes).
pub fn convergence_report(graphs: &[Graph], target: &StepKernel, patterns: &[PatternGraph]) -> Result<ConvergenceTable> {
    let limits: Vec<f64> = patterns.iter().map(|f| t_density(f, target, false)).collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..graphs.len()).collect();
    order.sort_by_key(|&i| graphs[i].n());
    let mut rows = Vec::new();
    for i in order {
        for (f, limit) in patterns.iter().zip(&limits) {
            rows.push(ConvergenceRow {
                n: graphs[i].n(),
                pattern: f.to_string(),
                deviation: (t_inj(f, &graphs[i], false)? - limit).abs(),
            });
        }
    }
    Ok(ConvergenceTable { rows })
}
