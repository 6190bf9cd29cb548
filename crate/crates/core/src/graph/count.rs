//! Exact counting of injective (optionally induced) pattern embeddings.
//!
//! The search assigns pattern vertices by backtracking over bitset
//! candidate sets. Pattern vertices outside a chosen independent "tail"
//! are assigned one by one in order of decreasing degree; once they are
//! placed, the tail vertices only depend on the prefix, so the number of
//! injective completions is read off from candidate-set sizes. For a tail
//! `t_1..t_r` with candidate sets `C_1..C_r`, Mobius inversion over the
//! partition lattice gives
//!
//! ```text
//! #{distinct (c_1..c_r) : c_i in C_i} = sum_pi prod_{B in pi} (-1)^{|B|-1} (|B|-1)! |cap_{i in B} C_i|
//! ```
//!
//! Induced counting couples tail vertices through non-adjacency in the host,
//! so there the tail is just the last vertex.

use super::bitset;
use super::pattern::PatternGraph;
use super::{Graph, VertexConstraint, VertexSet};
use crate::error::{Error, Result};

/// Longest independent tail handled by the partition formula.
const MAX_INJECTIVE_TAIL: usize = 6;

#[derive(Debug, Clone)]
struct Plan {
    /// Pattern vertices assigned by backtracking, in order.
    prefix: Vec<usize>,
    /// Pattern vertices counted in closed form.
    tail: Vec<usize>,
    /// Per prefix position: earlier prefix positions adjacent in `F`.
    prefix_nbrs: Vec<Vec<usize>>,
    /// Per prefix position: earlier prefix positions non-adjacent in `F`.
    prefix_non_nbrs: Vec<Vec<usize>>,
    tail_nbrs: Vec<Vec<usize>>,
    tail_non_nbrs: Vec<Vec<usize>>,
    /// `(coefficient, blocks)` where blocks are masks over tail positions.
    partitions: Vec<(i128, Vec<u32>)>,
}

fn max_independent_set(f: &PatternGraph, cap: usize) -> u32 {
    let mut best = 0u32;
    for mask in 0u32..(1u32 << f.f()) {
        let size = mask.count_ones();
        if size as usize > cap || size <= best.count_ones() {
            continue;
        }
        if (0..f.f()).all(|i| mask >> i & 1 == 0 || f.neighbor_mask(i) & mask == 0) {
            best = mask;
        }
    }
    best
}

/// Set partitions of `0..r` (restricted growth strings) with their Mobius
/// coefficients.
fn partitions(r: usize) -> Vec<(i128, Vec<u32>)> {
    fn factorial(k: usize) -> i128 {
        (1..=k as i128).product()
    }
    let mut out = Vec::new();
    let mut labels = vec![0usize; r];
    fn rec(i: usize, blocks: usize, labels: &mut [usize], out: &mut Vec<(i128, Vec<u32>)>) {
        if i == labels.len() {
            let mut masks = vec![0u32; blocks];
            for (pos, &b) in labels.iter().enumerate() {
                masks[b] |= 1 << pos;
            }
            let coef = masks
                .iter()
                .map(|m| {
                    let s = m.count_ones() as usize;
                    let sign = if s % 2 == 1 { 1 } else { -1 };
                    sign * factorial(s - 1)
                })
                .product();
            out.push((coef, masks));
            return;
        }
        for b in 0..=blocks {
            labels[i] = b;
            rec(i + 1, blocks.max(b + 1), labels, out);
        }
    }
    if r > 0 {
        rec(0, 0, &mut labels, &mut out);
    }
    out
}

impl Plan {
    fn new(f: &PatternGraph, induced: bool, injective: bool) -> Self {
        let tail_mask = if induced {
            // last vertex in degree order
            0
        } else if injective {
            max_independent_set(f, MAX_INJECTIVE_TAIL)
        } else {
            max_independent_set(f, f.f())
        };
        let mut order: Vec<usize> = (0..f.f()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(f.degree(i)));
        let (mut prefix, mut tail): (Vec<usize>, Vec<usize>) = order.iter().partition(|&&i| tail_mask >> i & 1 == 0);
        if induced {
            tail = prefix.pop().into_iter().collect();
        }
        let position = |v: usize| prefix.iter().position(|&p| p == v);
        let split = |v: usize, upto: usize| {
            let mut nbrs = Vec::new();
            let mut non = Vec::new();
            for (pos, &w) in prefix.iter().enumerate().take(upto) {
                if f.has_edge(v, w) {
                    nbrs.push(pos);
                } else {
                    non.push(pos);
                }
            }
            (nbrs, non)
        };
        let mut prefix_nbrs = Vec::new();
        let mut prefix_non_nbrs = Vec::new();
        for (d, &v) in prefix.iter().enumerate() {
            debug_assert_eq!(position(v), Some(d));
            let (a, b) = split(v, d);
            prefix_nbrs.push(a);
            prefix_non_nbrs.push(b);
        }
        let mut tail_nbrs = Vec::new();
        let mut tail_non_nbrs = Vec::new();
        for &t in &tail {
            let (a, b) = split(t, prefix.len());
            tail_nbrs.push(a);
            tail_non_nbrs.push(b);
        }
        let partitions = if injective {
            partitions(tail.len())
        } else {
            vec![(1, (0..tail.len()).map(|i| 1u32 << i).collect())]
        };
        Self {
            prefix,
            tail,
            prefix_nbrs,
            prefix_non_nbrs,
            tail_nbrs,
            tail_non_nbrs,
            partitions,
        }
    }
}

/// Reusable counter for one (pattern, host, mode) triple; candidate
/// restrictions are supplied per call as bitsets.
pub(crate) struct SubgraphCounter<'a> {
    g: &'a Graph,
    co: Option<Graph>,
    plan: Plan,
    f: usize,
    injective: bool,
}

struct Search<'c, 'a> {
    counter: &'c SubgraphCounter<'a>,
    bases: &'c [&'c [u64]],
    assign: Vec<usize>,
    used: Vec<u64>,
    scratch: Vec<Vec<u64>>,
    tail_sets: Vec<Vec<u64>>,
    inter: Vec<Vec<u64>>,
    inter_count: Vec<i128>,
}

impl<'a> SubgraphCounter<'a> {
    pub(crate) fn new(f: &PatternGraph, g: &'a Graph, induced: bool) -> Result<Self> {
        Self::build(f, g, induced, true)
    }

    fn build(f: &PatternGraph, g: &'a Graph, induced: bool, injective: bool) -> Result<Self> {
        let bound = (g.n().max(1) as f64).powi(f.f() as i32);
        if bound >= 2f64.powi(125) {
            return Err(Error::CountOverflow { n: g.n(), f: f.f() });
        }
        Ok(Self {
            g,
            co: induced.then(|| g.complement()),
            plan: Plan::new(f, induced, injective),
            f: f.f(),
            injective,
        })
    }

    /// Count with pattern vertex `i` restricted to `bases[i]`.
    pub(crate) fn count(&self, bases: &[&[u64]]) -> u128 {
        debug_assert_eq!(bases.len(), self.f);
        if self.injective && self.f > self.g.n() {
            return 0;
        }
        let words = self.g.words();
        let r = self.plan.tail.len();
        let mut search = Search {
            counter: self,
            bases,
            assign: vec![0; self.plan.prefix.len()],
            used: vec![0; words],
            scratch: vec![vec![0; words]; self.plan.prefix.len()],
            tail_sets: vec![vec![0; words]; r],
            inter: vec![vec![0; words]; 1 << r],
            inter_count: vec![0; 1 << r],
        };
        let total = search.run(0);
        debug_assert!(total >= 0);
        total as u128
    }

    fn restrict(&self, out: &mut [u64], base: &[u64], nbrs: &[usize], non_nbrs: &[usize], assign: &[usize]) {
        out.copy_from_slice(base);
        for &pos in nbrs {
            for (o, r) in out.iter_mut().zip(self.g.row(assign[pos])) {
                *o &= r;
            }
        }
        if let Some(co) = &self.co {
            for &pos in non_nbrs {
                for (o, r) in out.iter_mut().zip(co.row(assign[pos])) {
                    *o &= r;
                }
            }
        }
    }
}

impl Search<'_, '_> {
    fn run(&mut self, depth: usize) -> i128 {
        let c = self.counter;
        let plan = &c.plan;
        if depth == plan.prefix.len() {
            return self.close_tail();
        }
        let mut cand = std::mem::take(&mut self.scratch[depth]);
        c.restrict(
            &mut cand,
            self.bases[plan.prefix[depth]],
            &plan.prefix_nbrs[depth],
            &plan.prefix_non_nbrs[depth],
            &self.assign,
        );
        if c.injective {
            for (x, u) in cand.iter_mut().zip(&self.used) {
                *x &= !u;
            }
        }
        let mut total = 0i128;
        for v in bitset::ones(&cand) {
            self.assign[depth] = v;
            if c.injective {
                bitset::set(&mut self.used, v);
            }
            total += self.run(depth + 1);
            if c.injective {
                bitset::clear(&mut self.used, v);
            }
        }
        self.scratch[depth] = cand;
        total
    }

    fn close_tail(&mut self) -> i128 {
        let c = self.counter;
        let plan = &c.plan;
        let r = plan.tail.len();
        if r == 0 {
            return 1;
        }
        for (t, set) in self.tail_sets.iter_mut().enumerate() {
            c.restrict(
                set,
                self.bases[plan.tail[t]],
                &plan.tail_nbrs[t],
                &plan.tail_non_nbrs[t],
                &self.assign,
            );
            if c.injective {
                for (x, u) in set.iter_mut().zip(&self.used) {
                    *x &= !u;
                }
            }
        }
        match (r, c.injective) {
            (1, _) => bitset::count(&self.tail_sets[0]) as i128,
            (_, false) => self.tail_sets.iter().map(|s| bitset::count(s) as i128).product(),
            (2, true) => {
                let (a, b) = (&self.tail_sets[0], &self.tail_sets[1]);
                let both: u64 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as u64).sum();
                bitset::count(a) as i128 * bitset::count(b) as i128 - both as i128
            }
            _ => {
                for mask in 1usize..(1 << r) {
                    let low = mask.trailing_zeros() as usize;
                    let rest = mask & (mask - 1);
                    let (head, tail) = self.inter.split_at_mut(mask);
                    let out = &mut tail[0];
                    if rest == 0 {
                        out.copy_from_slice(&self.tail_sets[low]);
                    } else {
                        for ((o, a), b) in out.iter_mut().zip(&head[rest]).zip(&self.tail_sets[low]) {
                            *o = a & b;
                        }
                    }
                    self.inter_count[mask] = bitset::count(out) as i128;
                }
                plan.partitions
                    .iter()
                    .map(|(coef, blocks)| coef * blocks.iter().map(|&b| self.inter_count[b as usize]).product::<i128>())
                    .sum()
            }
        }
    }
}

fn constraint_bases(c: &VertexConstraint, f: usize, n: usize) -> Result<Vec<Vec<u64>>> {
    Ok(match c {
        VertexConstraint::None => vec![bitset::full(n); f],
        VertexConstraint::Single(u) => vec![u.to_bits(n)?; f],
        VertexConstraint::PerVertex(sets) => {
            if sets.len() != f {
                return Err(crate::error::invalid(
                    "constraint",
                    format!("expected {f} vertex sets, got {}", sets.len()),
                ));
            }
            sets.iter().map(|s| s.to_bits(n)).collect::<Result<_>>()?
        }
    })
}

/// Number of injective maps `V(F) -> V(G)` that preserve adjacency (and
/// non-adjacency when `induced`) and send every pattern vertex into its
/// allowed set.
pub fn count_subgraphs(f: &PatternGraph, g: &Graph, c: &VertexConstraint, induced: bool) -> Result<u128> {
    let bases = constraint_bases(c, f.f(), g.n())?;
    let refs: Vec<&[u64]> = bases.iter().map(Vec::as_slice).collect();
    Ok(SubgraphCounter::new(f, g, induced)?.count(&refs))
}

/// Number of all (not necessarily injective) homomorphisms `F -> G`.
pub fn count_homomorphisms(f: &PatternGraph, g: &Graph) -> Result<u128> {
    let bases = vec![bitset::full(g.n()); f.f()];
    let refs: Vec<&[u64]> = bases.iter().map(Vec::as_slice).collect();
    Ok(SubgraphCounter::build(f, g, false, false)?.count(&refs))
}

pub(crate) fn falling_factorial(n: usize, f: usize) -> f64 {
    (0..f).map(|i| n as f64 - i as f64).product()
}

/// Injective density `N(F, G) / (n)_f`.
pub fn t_inj(f: &PatternGraph, g: &Graph, induced: bool) -> Result<f64> {
    if g.n() < f.f() {
        return Err(Error::HostTooSmall { n: g.n(), f: f.f() });
    }
    let count = count_subgraphs(f, g, &VertexConstraint::None, induced)?;
    Ok(count as f64 / falling_factorial(g.n(), f.f()))
}

/// Number of edges with exactly one endpoint in `u`.
pub fn cut_edges(g: &Graph, u: &VertexSet) -> Result<usize> {
    let bits = u.to_bits(g.n())?;
    Ok(u
        .as_slice()
        .iter()
        .map(|&v| g.row(v).iter().zip(&bits).map(|(r, b)| (r & !b).count_ones() as usize).sum::<usize>())
        .sum())
}
