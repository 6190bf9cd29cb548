//! Step graphons and signed step kernels.
//!
//! A [`StepKernel`] is constant on the rectangles `I_a x I_b` of a finite
//! partition of `[0, 1]` into parts of measure `weights[a]`, so every
//! density and box integral below is an exact finite sum over part tuples.
//! Coordinates that fall in the same part use the diagonal value
//! `values[a][a]`; coincidences of points form a null set and carry no
//! extra correction.

use std::fmt::Write as _;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, PatternGraph};
use crate::rng::SeededRng;

/// Largest pattern for which the `f!` symmetrization average is formed.
pub const MAX_SYMMETRIZED_VERTICES: usize = 8;

const WEIGHT_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelRange {
    /// Values in `[0, 1]`.
    #[default]
    Graphon,
    /// Values in `[-1, 1]`.
    Signed,
}

impl KernelRange {
    fn bounds(self) -> (f64, f64) {
        match self {
            Self::Graphon => (0.0, 1.0),
            Self::Signed => (-1.0, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepKernel {
    k: usize,
    weights: Vec<f64>,
    values: Vec<f64>,
    range: KernelRange,
}

#[derive(Deserialize)]
struct KernelFile {
    weights: Vec<f64>,
    values: Vec<Vec<f64>>,
    #[serde(default)]
    range: KernelRange,
}

impl StepKernel {
    pub fn new(weights: Vec<f64>, values: Vec<Vec<f64>>, range: KernelRange) -> Result<Self> {
        let k = weights.len();
        if k == 0 {
            return Err(Error::InvalidKernel("no parts".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w <= 0.0) {
            return Err(Error::InvalidKernel(format!("part weight {w} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SLACK {
            return Err(Error::InvalidKernel(format!("weights sum to {total}, not 1")));
        }
        if values.len() != k || values.iter().any(|row| row.len() != k) {
            return Err(Error::InvalidKernel(format!("values must be a {k}x{k} matrix")));
        }
        let (lo, hi) = range.bounds();
        for a in 0..k {
            for b in 0..k {
                let x = values[a][b];
                if !(lo..=hi).contains(&x) {
                    return Err(Error::InvalidKernel(format!("value {x} at ({a},{b}) outside [{lo},{hi}]")));
                }
                if x != values[b][a] {
                    return Err(Error::InvalidKernel(format!("values not symmetric at ({a},{b})")));
                }
            }
        }
        Ok(Self {
            k,
            weights,
            values: values.into_iter().flatten().collect(),
            range,
        })
    }

    /// Equal part weights `1/k`.
    pub fn uniform(values: Vec<Vec<f64>>, range: KernelRange) -> Result<Self> {
        let k = values.len();
        Self::new(vec![1.0 / k as f64; k], values, range)
    }

    /// The constant kernel `c` on a single part.
    pub fn constant(c: f64) -> Result<Self> {
        let range = if (0.0..=1.0).contains(&c) {
            KernelRange::Graphon
        } else {
            KernelRange::Signed
        };
        Self::new(vec![1.0], vec![vec![c]], range)
    }

    /// `W_G`: `n` equal parts, value 1 on rectangles of edges, 0 elsewhere
    /// (including the diagonal).
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let n = g.n();
        if n == 0 {
            return Err(Error::EmptyHost);
        }
        let values = (0..n)
            .map(|a| (0..n).map(|b| if g.has_edge(a, b) { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::uniform(values, KernelRange::Graphon)
    }

    /// Two parts of measure `w1` and `1 - w1` with values `[[u, s], [s, v]]`.
    pub fn two_type(u: f64, v: f64, s: f64, w1: f64) -> Result<Self> {
        if !(w1 > 0.0 && w1 < 1.0) {
            return Err(invalid("w1", format!("{w1} not in (0, 1)")));
        }
        Self::new(vec![w1, 1.0 - w1], vec![vec![u, s], vec![s, v]], KernelRange::Graphon)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: KernelFile = serde_json::from_str(text)?;
        Self::new(file.weights, file.values, file.range)
    }

    /// Kernel document with every real written to 17 significant digits.
    pub fn to_json(&self) -> String {
        let num = |x: f64| format!("{x:.16e}");
        let mut out = String::from("{\"weights\":[");
        out.push_str(&self.weights.iter().map(|&w| num(w)).join(","));
        out.push_str("],\"values\":[");
        let rows = (0..self.k).map(|a| format!("[{}]", (0..self.k).map(|b| num(self.value(a, b))).join(",")));
        out.push_str(&rows.collect::<Vec<_>>().join(","));
        let range = match self.range {
            KernelRange::Graphon => "graphon",
            KernelRange::Signed => "signed",
        };
        let _ = write!(out, "],\"range\":\"{range}\"}}");
        out
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn weight(&self, a: usize) -> f64 {
        self.weights[a]
    }

    #[inline]
    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.k + b]
    }

    pub fn range(&self) -> KernelRange {
        self.range
    }

    pub fn values(&self) -> Vec<Vec<f64>> {
        (0..self.k).map(|a| self.values[a * self.k..(a + 1) * self.k].to_vec()).collect()
    }

    fn require_graphon(&self) -> Result<()> {
        match self.range {
            KernelRange::Graphon => Ok(()),
            KernelRange::Signed => Err(Error::InvalidKernel("operation needs a [0,1]-valued graphon".into())),
        }
    }

    /// Builds a kernel on the same parts from raw values, relaxing the range
    /// to signed when needed.
    pub(crate) fn with_values(weights: &[f64], values: Vec<f64>) -> Self {
        let k = weights.len();
        let range = if values.iter().all(|x| (0.0..=1.0).contains(x)) {
            KernelRange::Graphon
        } else {
            KernelRange::Signed
        };
        Self {
            k,
            weights: weights.to_vec(),
            values,
            range,
        }
    }

    /// Splits every part into `r` equal subparts carrying the same values.
    pub fn blowup(&self, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(invalid("r", "must be at least 1"));
        }
        let k = self.k * r;
        let weights: Vec<f64> = (0..k).map(|a| self.weights[a / r] / r as f64).collect();
        let values = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .map(|(a, b)| self.value(a / r, b / r))
            .collect();
        Ok(Self {
            k,
            weights,
            values,
            range: self.range,
        })
    }

    /// Kernel with part `a` moved to position `perm[a]`.
    pub fn permute_parts(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.k || !perm.iter().copied().sorted().eq(0..self.k) {
            return Err(invalid("perm", "not a permutation of the parts"));
        }
        let mut weights = vec![0.0; self.k];
        let mut values = vec![0.0; self.k * self.k];
        for a in 0..self.k {
            weights[perm[a]] = self.weights[a];
            for b in 0..self.k {
                values[perm[a] * self.k + perm[b]] = self.value(a, b);
            }
        }
        Ok(Self {
            k: self.k,
            weights,
            values,
            range: self.range,
        })
    }

    /// Degree function per part: `sum_b weight(b) * W(a, b)`.
    pub fn marginals(&self) -> Vec<f64> {
        (0..self.k)
            .map(|a| (0..self.k).map(|b| self.weights[b] * self.value(a, b)).sum())
            .collect()
    }

    /// `sum_{a,b} weight(a) weight(b) |W(a, b)|`.
    pub fn l1_norm(&self) -> f64 {
        (0..self.k)
            .flat_map(|a| (0..self.k).map(move |b| (a, b)))
            .map(|(a, b)| self.weights[a] * self.weights[b] * self.value(a, b).abs())
            .sum()
    }
}

/// Fraction of each part belonging to the set `A_i`, one vector per
/// pattern vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub memberships: Vec<Vec<f64>>,
}

impl BoxSpec {
    pub fn new(memberships: Vec<Vec<f64>>) -> Result<Self> {
        for a in memberships.iter().flatten() {
            if !(0.0..=1.0).contains(a) {
                return Err(invalid("boxes", format!("membership {a} outside [0,1]")));
            }
        }
        Ok(Self { memberships })
    }

    /// The same set for all `f` pattern vertices.
    pub fn identical(f: usize, membership: Vec<f64>) -> Result<Self> {
        Self::new(vec![membership; f])
    }

    pub fn full(f: usize, k: usize) -> Self {
        Self {
            memberships: vec![vec![1.0; k]; f],
        }
    }

    /// `lambda(A_i)` under the given kernel's part weights.
    pub fn measure(&self, i: usize, w: &StepKernel) -> f64 {
        self.memberships[i].iter().zip(w.weights()).map(|(a, p)| a * p).sum()
    }

    fn check(&self, f: usize, k: usize) -> Result<()> {
        if self.memberships.len() != f || self.memberships.iter().any(|m| m.len() != k) {
            return Err(invalid("boxes", format!("expected {f} membership vectors of length {k}")));
        }
        Ok(())
    }
}

#[inline]
fn pair_factor(w: &StepKernel, a: usize, b: usize, edge: bool, induced: bool) -> f64 {
    let x = w.value(a, b);
    if edge {
        x
    } else if induced {
        1.0 - x
    } else {
        1.0
    }
}

fn unsymmetrized_psi(f: &PatternGraph, w: &StepKernel, parts: &[usize], induced: bool) -> f64 {
    let mut product = 1.0;
    for i in 0..f.f() {
        for j in i + 1..f.f() {
            product *= pair_factor(w, parts[i], parts[j], f.has_edge(i, j), induced);
        }
    }
    product
}

fn check_parts(w: &StepKernel, parts: &[usize]) -> Result<()> {
    match parts.iter().find(|&&a| a >= w.k()) {
        Some(&index) => Err(Error::PartOutOfRange { index, k: w.k() }),
        None => Ok(()),
    }
}

fn check_psi(f: &PatternGraph, w: &StepKernel, induced: bool, symmetrized: bool) -> Result<()> {
    if induced {
        w.require_graphon()?;
    }
    if symmetrized && f.f() > MAX_SYMMETRIZED_VERTICES {
        return Err(Error::PatternTooLarge {
            f: f.f(),
            max: MAX_SYMMETRIZED_VERTICES,
        });
    }
    Ok(())
}

/// `Psi_F` (product of `W` over edges), or `Psi*_F` when `induced` (with
/// `1 - W` over non-edges), at points of the given parts. `symmetrized`
/// averages over all `f!` relabellings of the pattern.
pub fn psi_eval(f: &PatternGraph, w: &StepKernel, parts: &[usize], induced: bool, symmetrized: bool) -> Result<f64> {
    check_psi(f, w, induced, symmetrized)?;
    if parts.len() != f.f() {
        return Err(invalid("parts", format!("expected {} part indices, got {}", f.f(), parts.len())));
    }
    check_parts(w, parts)?;
    Ok(psi_unchecked(f, w, parts, induced, symmetrized))
}

fn psi_unchecked(f: &PatternGraph, w: &StepKernel, parts: &[usize], induced: bool, symmetrized: bool) -> f64 {
    if !symmetrized {
        return unsymmetrized_psi(f, w, parts, induced);
    }
    let mut total = 0.0;
    let mut count = 0usize;
    let mut permuted = vec![0; parts.len()];
    for sigma in (0..f.f()).permutations(f.f()) {
        for (i, &s) in sigma.iter().enumerate() {
            permuted[i] = parts[s];
        }
        total += unsymmetrized_psi(f, w, &permuted, induced);
        count += 1;
    }
    total / count as f64
}

/// `sum_{j in [k]^f} prod_i measure[i][j_i] * Psi(j)`, accumulated vertex
/// by vertex so that zero partial products prune whole subtrees.
fn integrate(f: &PatternGraph, w: &StepKernel, measures: &[Vec<f64>], induced: bool) -> f64 {
    fn rec(i: usize, parts: &mut Vec<usize>, acc: f64, f: &PatternGraph, w: &StepKernel, m: &[Vec<f64>], induced: bool) -> f64 {
        if i == f.f() {
            return acc;
        }
        let mut total = 0.0;
        for a in 0..w.k() {
            let mut next = acc * m[i][a];
            if next == 0.0 {
                continue;
            }
            for (j, &b) in parts.iter().enumerate() {
                next *= pair_factor(w, b, a, f.has_edge(i, j), induced);
            }
            if next == 0.0 {
                continue;
            }
            parts.push(a);
            total += rec(i + 1, parts, next, f, w, m, induced);
            parts.pop();
        }
        total
    }
    rec(0, &mut Vec::with_capacity(f.f()), 1.0, f, w, measures, induced)
}

/// Homomorphism density `t(F, W)`, or the induced density `t_ind(F, W)`.
pub fn t_density(f: &PatternGraph, w: &StepKernel, induced: bool) -> Result<f64> {
    check_psi(f, w, induced, false)?;
    let measures = vec![w.weights().to_vec(); f.f()];
    Ok(integrate(f, w, &measures, induced))
}

fn box_measures(f: &PatternGraph, w: &StepKernel, boxes: &BoxSpec) -> Result<Vec<Vec<f64>>> {
    boxes.check(f.f(), w.k())?;
    Ok(boxes
        .memberships
        .iter()
        .map(|m| m.iter().zip(w.weights()).map(|(a, p)| a * p).collect())
        .collect())
}

/// `integral over A_1 x ... x A_f` of `Psi_F` (or `Psi*_F`).
pub fn box_integral(f: &PatternGraph, w: &StepKernel, boxes: &BoxSpec, induced: bool) -> Result<f64> {
    check_psi(f, w, induced, false)?;
    let measures = box_measures(f, w, boxes)?;
    Ok(integrate(f, w, &measures, induced))
}

/// Box integral of the symmetrized functional, summed tuple by tuple.
pub fn box_integral_symmetrized(f: &PatternGraph, w: &StepKernel, boxes: &BoxSpec, induced: bool) -> Result<f64> {
    check_psi(f, w, induced, true)?;
    let measures = box_measures(f, w, boxes)?;
    let mut total = 0.0;
    for parts in (0..f.f()).map(|_| 0..w.k()).multi_cartesian_product() {
        let weight: f64 = parts.iter().enumerate().map(|(i, &a)| measures[i][a]).product();
        if weight != 0.0 {
            total += weight * psi_unchecked(f, w, &parts, induced, true);
        }
    }
    Ok(total)
}

/// `max` over all part tuples of `|Psi(parts) - alpha|`. For step kernels
/// this is zero exactly when `Psi = alpha` almost everywhere.
pub fn psi_constant_dev(f: &PatternGraph, w: &StepKernel, alpha: f64, induced: bool, symmetrized: bool) -> Result<f64> {
    check_psi(f, w, induced, symmetrized)?;
    let tuples: Box<dyn Iterator<Item = Vec<usize>>> = if symmetrized || f.f() == 0 {
        // the symmetrized value only depends on the multiset of parts
        Box::new((0..w.k()).combinations_with_replacement(f.f()))
    } else {
        Box::new((0..f.f()).map(|_| 0..w.k()).multi_cartesian_product())
    };
    Ok(tuples
        .map(|parts| (psi_unchecked(f, w, &parts, induced, symmetrized) - alpha).abs())
        .fold(0.0, f64::max))
}

/// `W`-random graph: vertex `v` gets part `a` with probability
/// `weight(a)` (first part whose cumulative weight exceeds a `uniform()`
/// draw), then pairs `(u, v)`, `u < v`, in lexicographic order are joined
/// when a `uniform()` draw is below `W(part_u, part_v)`.
pub fn sample_graph(w: &StepKernel, n: usize, seed: u64) -> Result<Graph> {
    Ok(sample_graph_with_parts(w, n, seed)?.0)
}

/// As [`sample_graph`], also returning each vertex's part.
pub fn sample_graph_with_parts(w: &StepKernel, n: usize, seed: u64) -> Result<(Graph, Vec<usize>)> {
    w.require_graphon()?;
    let mut rng = SeededRng::new(seed);
    let cumulative: Vec<f64> = w
        .weights()
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    let parts: Vec<usize> = (0..n)
        .map(|_| {
            let r = rng.uniform();
            cumulative.iter().position(|&c| r < c).unwrap_or(w.k() - 1)
        })
        .collect();
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.bernoulli(w.value(parts[u], parts[v])) {
                g.insert_edge(u, v);
            }
        }
    }
    Ok((g, parts))
}

/// `E[D_W^k]` where `D_W` is the degree function of a uniform point.
pub fn w_degree_moment(w: &StepKernel, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    Ok(w.marginals()
        .iter()
        .zip(w.weights())
        .map(|(d, p)| p * d.powi(k as i32))
        .sum())
}

/// Whether every part marginal lies within `tol` of `p`.
pub fn is_p_regular(w: &StepKernel, p: f64, tol: f64) -> bool {
    w.marginals().iter().all(|d| (d - p).abs() <= tol)
}
