//! Multiaffine polynomials in the pair variables `w_ij` and the two-type
//! search.
//!
//! A two-type assignment picks a vertex subset `A` of `[m]` and sets
//! `w_ij = u` when both ends are in `A`, `v` when neither is, and `s`
//! otherwise. A multiaffine `Phi` is constant (`= alpha`) on all kernels
//! exactly when it is on all two-type kernels, so [`find_two_type_solutions`]
//! looks for `(u, v, s)`, not all equal, at which every subset `A` gives
//! `alpha`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::graph::PatternGraph;
use crate::graphon::MAX_SYMMETRIZED_VERTICES;
use crate::rng::SeededRng;

/// Pair variables must fit a 64-bit mask.
pub const MAX_VARIABLE_INDEX: usize = 11;

/// `sum_t c_t prod_{ij in P_t} w_ij` over pairs `i < j` of `0..m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiaffinePolynomial {
    m: usize,
    terms: BTreeMap<u64, f64>,
}

fn pair_index(m: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

fn pair_list(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect()
}

impl MultiaffinePolynomial {
    pub fn zero(m: usize) -> Result<Self> {
        if m > MAX_VARIABLE_INDEX {
            return Err(invalid("m", format!("at most {MAX_VARIABLE_INDEX} supported")));
        }
        Ok(Self { m, terms: BTreeMap::new() })
    }

    /// Adds `coefficient * prod w_ij`; a repeated pair is an error since the
    /// result would not be multiaffine.
    pub fn add_monomial(&mut self, coefficient: f64, pairs: &[(usize, usize)]) -> Result<()> {
        let mut mask = 0u64;
        for &(i, j) in pairs {
            if i == j || i >= self.m || j >= self.m {
                return Err(invalid("pairs", format!("({i}, {j}) is not a pair of 0..{}", self.m)));
            }
            let bit = 1u64 << pair_index(self.m, i, j);
            if mask & bit != 0 {
                return Err(invalid("pairs", format!("pair ({i}, {j}) repeated")));
            }
            mask |= bit;
        }
        self.add_mask(coefficient, mask);
        Ok(())
    }

    fn add_mask(&mut self, coefficient: f64, mask: u64) {
        let entry = self.terms.entry(mask).or_insert(0.0);
        *entry += coefficient;
        if *entry == 0.0 {
            self.terms.remove(&mask);
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Monomials as `(coefficient, pairs)` in mask order.
    pub fn monomials(&self) -> Vec<(f64, Vec<(usize, usize)>)> {
        let pairs = pair_list(self.m);
        self.terms
            .iter()
            .map(|(&mask, &c)| (c, pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &p)| p).collect()))
            .collect()
    }

    /// Evaluates at `w_ij = w(i, j)`.
    pub fn eval(&self, w: impl Fn(usize, usize) -> f64) -> f64 {
        let pairs = pair_list(self.m);
        let values: Vec<f64> = pairs.iter().map(|&(i, j)| w(i, j)).collect();
        self.terms
            .iter()
            .map(|(&mask, &c)| {
                (0..pairs.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .fold(c, |acc, b| acc * values[b])
            })
            .sum()
    }

    /// `Phi(w_{sigma(i) sigma(j)})`.
    fn relabelled(&self, sigma: &[usize]) -> Self {
        let pairs = pair_list(self.m);
        let mut out = Self {
            m: self.m,
            terms: BTreeMap::new(),
        };
        for (&mask, &c) in &self.terms {
            let moved = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .fold(0u64, |acc, (_, &(i, j))| acc | 1 << pair_index(self.m, sigma[i], sigma[j]));
            out.add_mask(c, moved);
        }
        out
    }

    /// Per-subset collapse to `sum c u^a v^b s^c`, keyed by exponents.
    fn two_type_terms(&self, subset: u32) -> Vec<(f64, [i32; 3])> {
        let pairs = pair_list(self.m);
        let mut grouped: BTreeMap<[i32; 3], f64> = BTreeMap::new();
        for (&mask, &c) in &self.terms {
            let mut exps = [0i32; 3];
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    let (ini, inj) = (subset >> i & 1 == 1, subset >> j & 1 == 1);
                    let slot = match (ini, inj) {
                        (true, true) => 0,
                        (false, false) => 1,
                        _ => 2,
                    };
                    exps[slot] += 1;
                }
            }
            *grouped.entry(exps).or_insert(0.0) += c;
        }
        grouped.into_iter().map(|(e, c)| (c, e)).filter(|(c, _)| *c != 0.0).collect()
    }
}

impl fmt::Display for MultiaffinePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let rendered = self.monomials().into_iter().map(|(c, pairs)| {
            let vars: String = pairs.iter().map(|(i, j)| format!("w{}{}", i + 1, j + 1)).join("*");
            match (vars.is_empty(), c) {
                (true, _) => format!("{c}"),
                (false, 1.0) => vars,
                (false, -1.0) => format!("-{vars}"),
                (false, c) => format!("{c}*{vars}"),
            }
        });
        f.write_str(&rendered.collect::<Vec<_>>().join(" + ").replace("+ -", "- "))
    }
}

impl Serialize for MultiaffinePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Monomial {
            coefficient: f64,
            pairs: Vec<(usize, usize)>,
        }
        let monomials: Vec<Monomial> = self
            .monomials()
            .into_iter()
            .map(|(coefficient, pairs)| Monomial { coefficient, pairs })
            .collect();
        let mut s = serializer.serialize_struct("MultiaffinePolynomial", 2)?;
        s.serialize_field("m", &self.m)?;
        s.serialize_field("monomials", &monomials)?;
        s.end()
    }
}

/// `Psi_F` or `Psi*_F` (non-edge factors `1 - w_ij` expanded), optionally
/// averaged over all `f!` relabellings, as a polynomial on `m = f`.
pub fn build_psi_polynomial(f: &PatternGraph, induced: bool, symmetrized: bool) -> Result<MultiaffinePolynomial> {
    let m = f.f();
    if symmetrized && m > MAX_SYMMETRIZED_VERTICES {
        return Err(Error::PatternTooLarge {
            f: m,
            max: MAX_SYMMETRIZED_VERTICES,
        });
    }
    let mut base = MultiaffinePolynomial::zero(m)?;
    let edge_mask = f.edges().fold(0u64, |acc, (i, j)| acc | 1 << pair_index(m, i, j));
    let non_edges: Vec<u64> = pair_list(m)
        .into_iter()
        .filter(|&(i, j)| !f.has_edge(i, j))
        .map(|(i, j)| 1u64 << pair_index(m, i, j))
        .collect();
    if induced {
        for chosen in 0u64..(1 << non_edges.len()) {
            let extra = non_edges
                .iter()
                .enumerate()
                .filter(|(b, _)| chosen >> b & 1 == 1)
                .fold(0u64, |acc, (_, &bit)| acc | bit);
            let sign = if chosen.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            base.add_mask(sign, edge_mask | extra);
        }
    } else {
        base.add_mask(1.0, edge_mask);
    }
    if !symmetrized {
        return Ok(base);
    }
    // integer sums first, one division at the end
    let mut total = MultiaffinePolynomial::zero(m)?;
    let mut count = 0u64;
    for sigma in (0..m).permutations(m) {
        for (&mask, &c) in &base.relabelled(&sigma).terms {
            total.add_mask(c, mask);
        }
        count += 1;
    }
    total.terms.values_mut().for_each(|c| *c /= count as f64);
    Ok(total)
}

fn subset_mask(m: usize, subset: &[usize]) -> Result<u32> {
    subset.iter().try_fold(0u32, |acc, &i| {
        if i >= m {
            Err(invalid("subset", format!("{i} not in 0..{m}")))
        } else {
            Ok(acc | 1 << i)
        }
    })
}

/// `Phi` at `w_ij = u` (both in `A`), `v` (both outside), `s` (split).
pub fn two_type_eval(phi: &MultiaffinePolynomial, u: f64, v: f64, s: f64, subset: &[usize]) -> Result<f64> {
    let mask = subset_mask(phi.m, subset)?;
    Ok(eval_terms(&phi.two_type_terms(mask), [u, v, s]))
}

fn eval_terms(terms: &[(f64, [i32; 3])], x: [f64; 3]) -> f64 {
    terms
        .iter()
        .map(|(c, e)| c * x[0].powi(e[0]) * x[1].powi(e[1]) * x[2].powi(e[2]))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoTypeWitness {
    pub u: f64,
    pub v: f64,
    pub s: f64,
    /// `max_A |Phi_A(u, v, s) - alpha|`.
    pub residual: f64,
}

impl TwoTypeWitness {
    pub fn spread(&self) -> f64 {
        (self.u - self.v).abs().max((self.u - self.s).abs()).max((self.v - self.s).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTypeSearch {
    pub tol: f64,
    /// Grid points per axis.
    pub grid: usize,
    pub seed: u64,
    /// Seeded uniform starting points added to the grid minima.
    pub random_starts: usize,
    /// Minimum `max(|u-v|, |u-s|, |v-s|)` for a solution to count as non-trivial.
    pub min_spread: f64,
    /// Grid local minima refined, best first.
    pub max_candidates: usize,
}

impl TwoTypeSearch {
    pub fn new(tol: f64, grid: usize, seed: u64) -> Self {
        Self {
            tol,
            grid,
            seed,
            random_starts: 16,
            min_spread: tol.sqrt().max(tol),
            max_candidates: 64,
        }
    }
}

struct Residuals {
    per_subset: Vec<Vec<(f64, [i32; 3])>>,
    alpha: f64,
}

impl Residuals {
    fn new(phi: &MultiaffinePolynomial, alpha: f64) -> Self {
        let per_subset = (0u32..1 << phi.m).map(|a| phi.two_type_terms(a)).collect();
        Self { per_subset, alpha }
    }

    fn max_abs(&self, x: [f64; 3]) -> f64 {
        self.per_subset
            .iter()
            .map(|t| (eval_terms(t, x) - self.alpha).abs())
            .fold(0.0, f64::max)
    }

    /// Residual vector and its Jacobian rows.
    fn jacobian(&self, x: [f64; 3]) -> (Vec<f64>, Vec<[f64; 3]>) {
        let mut r = Vec::with_capacity(self.per_subset.len());
        let mut jac = Vec::with_capacity(self.per_subset.len());
        for terms in &self.per_subset {
            let mut value = -self.alpha;
            let mut grad = [0.0; 3];
            for (c, e) in terms {
                let p = [x[0].powi(e[0]), x[1].powi(e[1]), x[2].powi(e[2])];
                value += c * p[0] * p[1] * p[2];
                for d in 0..3 {
                    if e[d] > 0 {
                        let dp = e[d] as f64 * x[d].powi(e[d] - 1);
                        let others: f64 = (0..3).filter(|&o| o != d).map(|o| p[o]).product();
                        grad[d] += c * dp * others;
                    }
                }
            }
            r.push(value);
            jac.push(grad);
        }
        (r, jac)
    }

    /// Damped Gauss-Newton (Levenberg-Marquardt) on the residual vector,
    /// clamped to the unit cube.
    fn refine(&self, mut x: [f64; 3]) -> [f64; 3] {
        let cost = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
        let (mut r, mut jac) = self.jacobian(x);
        let mut current = cost(&r);
        let mut lambda = 1e-3;
        for _ in 0..200 {
            if current < 1e-32 {
                break;
            }
            let mut h = [[0.0; 3]; 3];
            let mut g = [0.0; 3];
            for (ri, row) in r.iter().zip(&jac) {
                for a in 0..3 {
                    g[a] += row[a] * ri;
                    for b in 0..3 {
                        h[a][b] += row[a] * row[b];
                    }
                }
            }
            for (a, row) in h.iter_mut().enumerate() {
                row[a] += lambda * (row[a] + 1e-12);
            }
            let Some(step) = solve3(h, [-g[0], -g[1], -g[2]]) else {
                lambda *= 10.0;
                continue;
            };
            let trial = [
                (x[0] + step[0]).clamp(0.0, 1.0),
                (x[1] + step[1]).clamp(0.0, 1.0),
                (x[2] + step[2]).clamp(0.0, 1.0),
            ];
            let (tr, tj) = self.jacobian(trial);
            let tc = cost(&tr);
            if tc < current {
                let moved = (0..3).map(|d| (trial[d] - x[d]).abs()).fold(0.0, f64::max);
                x = trial;
                r = tr;
                jac = tj;
                current = tc;
                lambda = (lambda / 3.0).max(1e-15);
                if moved < 1e-17 {
                    break;
                }
            } else {
                lambda *= 4.0;
                if lambda > 1e12 {
                    break;
                }
            }
        }
        x
    }
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if !d.is_normal() {
        return None;
    }
    let mut out = [0.0; 3];
    for (col, slot) in out.iter_mut().enumerate() {
        let mut m = a;
        for row in 0..3 {
            m[row][col] = b[row];
        }
        *slot = det(m) / d;
    }
    Some(out)
}

/// Grid scan of `max_A |Phi_A - alpha|`, refinement of the grid's local
/// minima (plus seeded random starts), and collection of the distinct
/// non-trivial points whose residual is within `tol`, sorted by `(u, v, s)`.
pub fn find_two_type_solutions(phi: &MultiaffinePolynomial, alpha: f64, search: &TwoTypeSearch) -> Vec<TwoTypeWitness> {
    let res = Residuals::new(phi, alpha);
    let n = search.grid.max(2);
    let axis: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let max_exp = phi.m * phi.m.saturating_sub(1) / 2;
    let powers: Vec<Vec<f64>> = axis.iter().map(|&x| (0..=max_exp as i32).map(|e| x.powi(e)).collect()).collect();
    let idx = |i: usize, j: usize, l: usize| (i * n + j) * n + l;
    let mut objective = vec![0.0f64; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let mut worst = 0.0f64;
                for terms in &res.per_subset {
                    let value: f64 = terms
                        .iter()
                        .map(|(c, e)| c * powers[i][e[0] as usize] * powers[j][e[1] as usize] * powers[l][e[2] as usize])
                        .sum();
                    worst = worst.max((value - alpha).abs());
                }
                objective[idx(i, j, l)] = worst;
            }
        }
    }
    let mut minima = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let here = objective[idx(i, j, l)];
                let mut is_min = true;
                'scan: for di in -1i64..=1 {
                    for dj in -1i64..=1 {
                        for dl in -1i64..=1 {
                            let (a, b, c) = (i as i64 + di, j as i64 + dj, l as i64 + dl);
                            if (di, dj, dl) == (0, 0, 0) || [a, b, c].iter().any(|&t| t < 0 || t >= n as i64) {
                                continue;
                            }
                            let other = objective[idx(a as usize, b as usize, c as usize)];
                            // ties broken by index so plateaus yield one representative
                            if other < here || (other == here && idx(a as usize, b as usize, c as usize) < idx(i, j, l)) {
                                is_min = false;
                                break 'scan;
                            }
                        }
                    }
                }
                if is_min {
                    minima.push((here, [axis[i], axis[j], axis[l]]));
                }
            }
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    minima.truncate(search.max_candidates);
    let mut starts: Vec<[f64; 3]> = minima.into_iter().map(|(_, x)| x).collect();
    let mut rng = SeededRng::new(search.seed);
    starts.extend((0..search.random_starts).map(|_| [rng.uniform(), rng.uniform(), rng.uniform()]));

    let mut found: Vec<TwoTypeWitness> = Vec::new();
    for start in starts {
        let x = res.refine(start);
        let w = TwoTypeWitness {
            u: x[0],
            v: x[1],
            s: x[2],
            residual: res.max_abs(x),
        };
        if w.residual > search.tol || w.spread() <= search.min_spread {
            continue;
        }
        let duplicate = found
            .iter()
            .any(|o| (o.u - w.u).abs().max((o.v - w.v).abs()).max((o.s - w.s).abs()) < 1e-7);
        if !duplicate {
            found.push(w);
        }
    }
    found.sort_by(|a, b| {
        a.u.total_cmp(&b.u)
            .then(a.v.total_cmp(&b.v))
            .then(a.s.total_cmp(&b.s))
    });
    found
}

/// First non-trivial two-type solution in `(u, v, s)` order, if any survives.
pub fn find_two_type_solution(phi: &MultiaffinePolynomial, alpha: f64, tol: f64, grid: usize, seed: u64) -> Option<TwoTypeWitness> {
    find_two_type_solutions(phi, alpha, &TwoTypeSearch::new(tol, grid, seed)).into_iter().next()
}
