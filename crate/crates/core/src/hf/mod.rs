//! Induced-density functionals `beta_F`, conjugate densities, the two-type
//! polynomials `Q_k` and the hereditary induced-forcing check.
//!
//! For a pattern `F` on `f` vertices and `0 <= k <= f`,
//!
//! ```text
//! Q_k(u, v, s) = sum_{A subset V(F), |A| = k}
//!     u^{e(A)} (1-u)^{C(k,2) - e(A)} v^{e(A')} (1-v)^{C(f-k,2) - e(A')} s^{e(A,A')} (1-s)^{k(f-k) - e(A,A')}
//! ```
//!
//! with `A'` the complement of `A`. `F` is hereditary induced-forcing for
//! `p` exactly when `Q_k(u, v, s) = C(f, k) beta_F(p)` for `k = 1..f-1` with
//! `u, v` in `{p, p_bar}` forces `u = v = s`. [`hf_check`] searches that
//! system numerically.

mod multiaffine;
mod roots;

pub use multiaffine::{build_psi_polynomial, find_two_type_solution, find_two_type_solutions, two_type_eval, MultiaffinePolynomial, TwoTypeSearch, TwoTypeWitness};
pub use roots::Polynomial;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::graph::PatternGraph;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_GRID: usize = 101;

/// `p^{e(F)} (1 - p)^{C(f,2) - e(F)}`.
pub fn beta(f: &PatternGraph, p: f64) -> f64 {
    p.powi(f.edge_count() as i32) * (1.0 - p).powi(f.non_edge_count() as i32)
}

/// The conjugate density: the point on the other side of the edge density
/// `p_F` with the same `beta_F`. Equals `p` when `p = p_F` or `F` is complete
/// or edgeless. Bisection runs until the bracket is narrower than `tol`
/// (or floating-point resolution, for `tol = 0`).
pub fn p_bar(f: &PatternGraph, p: f64, tol: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("p", format!("{p} not in [0, 1]")));
    }
    if f.f() < 2 {
        return Err(invalid("pattern", "needs at least 2 vertices"));
    }
    let pf = f.edge_density();
    if f.is_complete() || f.is_edgeless() || p == pf {
        return Ok(p);
    }
    let target = beta(f, p);
    // beta increases on [0, p_F] and decreases on [p_F, 1]
    let (mut lo, mut hi, increasing) = if p < pf { (pf, 1.0, false) } else { (0.0, pf, true) };
    for _ in 0..300 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let above = beta(f, mid) > target;
        if above == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exponent data of `Q_k`: how many `k`-subsets `A` have each combination
/// `(e(A), e(A'), e(A, A'))`.
#[derive(Debug, Clone)]
struct QkTerms {
    f: usize,
    k: usize,
    counts: BTreeMap<(usize, usize, usize), u64>,
}

impl QkTerms {
    fn new(f: &PatternGraph, k: usize) -> Self {
        let n = f.f();
        let all = (1u32 << n) - 1;
        let mut counts = BTreeMap::new();
        for a in 0..=all {
            if a.count_ones() as usize != k {
                continue;
            }
            let key = (f.edges_within(a), f.edges_within(all & !a), f.edges_across(a));
            *counts.entry(key).or_insert(0) += 1;
        }
        Self { f: n, k, counts }
    }

    fn pairs(&self) -> (usize, usize, usize) {
        let (k, r) = (self.k, self.f - self.k);
        (k * k.saturating_sub(1) / 2, r * r.saturating_sub(1) / 2, k * r)
    }

    fn eval(&self, u: f64, v: f64, s: f64) -> f64 {
        let (pu, pv, ps) = self.pairs();
        self.counts
            .iter()
            .map(|(&(a, b, c), &n)| {
                n as f64
                    * u.powi(a as i32)
                    * (1.0 - u).powi((pu - a) as i32)
                    * v.powi(b as i32)
                    * (1.0 - v).powi((pv - b) as i32)
                    * s.powi(c as i32)
                    * (1.0 - s).powi((ps - c) as i32)
            })
            .sum()
    }

    /// Coefficients of `s -> Q_k(u, v, s)`, expanding `(1-s)^m` binomially.
    fn s_polynomial(&self, u: f64, v: f64) -> Polynomial {
        let (pu, pv, ps) = self.pairs();
        let mut coeffs = vec![0.0; ps + 1];
        for (&(a, b, c), &n) in &self.counts {
            let scale = n as f64
                * u.powi(a as i32)
                * (1.0 - u).powi((pu - a) as i32)
                * v.powi(b as i32)
                * (1.0 - v).powi((pv - b) as i32);
            let m = ps - c;
            for j in 0..=m {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                coeffs[c + j] += scale * sign * binomial(m, j);
            }
        }
        Polynomial(coeffs)
    }
}

fn check_k(f: &PatternGraph, k: usize) -> Result<()> {
    if k > f.f() {
        return Err(invalid("k", format!("{k} exceeds pattern size {}", f.f())));
    }
    Ok(())
}

pub fn qk_eval(f: &PatternGraph, k: usize, u: f64, v: f64, s: f64) -> Result<f64> {
    check_k(f, k)?;
    Ok(QkTerms::new(f, k).eval(u, v, s))
}

/// Ascending coefficients of the polynomial `s -> Q_k(u, v, s)`, of
/// degree at most `k (f - k)`.
pub fn qk_s_polynomial(f: &PatternGraph, k: usize, u: f64, v: f64) -> Result<Polynomial> {
    if k == 0 || k >= f.f() {
        return Err(invalid("k", format!("{k} not in 1..{}", f.f())));
    }
    Ok(QkTerms::new(f, k).s_polynomial(u, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HfStatus {
    /// No non-trivial solution found at the stated tolerance. This is
    /// numerical evidence, not a proof of the forcing property.
    CertifiedAtTolerance,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HfWitness {
    pub u: f64,
    pub v: f64,
    pub s: f64,
    /// `max_{1 <= k < f} |Q_k(u, v, s) - C(f, k) beta_F(p)|`.
    pub residual: f64,
}

impl HfWitness {
    pub fn spread(&self) -> f64 {
        (self.u - self.v).abs().max((self.u - self.s).abs()).max((self.v - self.s).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HfVerdict {
    pub status: HfStatus,
    pub pattern: PatternGraph,
    pub p: f64,
    pub p_bar: f64,
    pub tolerance: f64,
    pub witnesses: Vec<HfWitness>,
    /// Every real root examined, trivial ones included.
    pub examined: Vec<HfWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HfOptions {
    pub tol: f64,
    /// `s` sample points used when every `Q_k` is constant in `s`.
    pub grid: usize,
}

impl Default for HfOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOLERANCE,
            grid: DEFAULT_GRID,
        }
    }
}

pub fn hf_check(f: &PatternGraph, p: f64, tol: f64) -> Result<HfVerdict> {
    hf_check_with(f, p, &HfOptions { tol, ..HfOptions::default() })
}

/// For every `(u, v)` in `{p, p_bar}^2`, finds the roots `s` in `[0, 1]` of
/// one non-constant `Q_k(u, v, s) - C(f, k) beta_F(p)` (the smallest such
/// `k`, normally `k = 1`), keeps those whose residuals for all
/// `k = 1..f-1` are within `tol`, and reports every survivor whose
/// coordinates are not all within `tol` of each other.
pub fn hf_check_with(f: &PatternGraph, p: f64, opts: &HfOptions) -> Result<HfVerdict> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid("p", format!("{p} not in (0, 1)")));
    }
    if f.f() < 2 {
        return Err(invalid("pattern", "needs at least 2 vertices"));
    }
    let tol = opts.tol;
    let conj = p_bar(f, p, 0.0)?;
    let b = beta(f, p);
    let terms: Vec<QkTerms> = (1..f.f()).map(|k| QkTerms::new(f, k)).collect();
    let targets: Vec<f64> = (1..f.f()).map(|k| binomial(f.f(), k) * b).collect();

    let mut pairs = vec![(p, p), (p, conj), (conj, p), (conj, conj)];
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pairs.dedup();

    let mut examined = Vec::new();
    for (u, v) in pairs {
        let residual = |s: f64| {
            terms
                .iter()
                .zip(&targets)
                .map(|(t, target)| (t.eval(u, v, s) - target).abs())
                .fold(0.0, f64::max)
        };
        let pivot = terms.iter().zip(&targets).find_map(|(t, target)| {
            let mut poly = t.s_polynomial(u, v);
            poly.0[0] -= target;
            let scale = poly.0.iter().fold(1.0f64, |m, c| m.max(c.abs()));
            (!poly.0[1..].iter().all(|c| c.abs() <= 1e-14 * scale)).then_some(poly)
        });
        let candidates = match pivot {
            Some(poly) => poly.roots_in(0.0, 1.0, tol),
            None => (0..opts.grid.max(2)).map(|i| i as f64 / (opts.grid.max(2) - 1) as f64).collect(),
        };
        for s in candidates {
            let r = residual(s);
            if r <= tol {
                examined.push(HfWitness { u, v, s, residual: r });
            }
        }
    }
    let witnesses: Vec<HfWitness> = examined.iter().filter(|w| w.spread() > tol).cloned().collect();
    let status = if witnesses.is_empty() {
        HfStatus::CertifiedAtTolerance
    } else {
        HfStatus::Counterexample
    };
    Ok(HfVerdict {
        status,
        pattern: f.clone(),
        p,
        p_bar: conj,
        tolerance: tol,
        witnesses,
        examined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(name: &str) -> PatternGraph {
        PatternGraph::builtin(name).unwrap()
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(&pat("P3"), 0.5), 0.125);
        assert_eq!(beta(&pat("P3"), 0.0), 0.0);
        assert_eq!(beta(&pat("E3"), 0.0), 1.0);
        assert!((beta(&pat("K3"), 0.3) - 0.027).abs() < 1e-15);
    }

    #[test]
    fn conjugate_examples() {
        let p3 = pat("P3");
        assert_eq!(p_bar(&p3, 2.0 / 3.0, 1e-12).unwrap(), 2.0 / 3.0);
        let x = p_bar(&p3, 0.5, 1e-12).unwrap();
        assert!((x - (1.0 + 5f64.sqrt()) / 4.0).abs() < 1e-10);
        assert_eq!(p_bar(&pat("K3"), 0.3, 1e-12).unwrap(), 0.3);
        assert_eq!(p_bar(&pat("E4"), 0.3, 1e-12).unwrap(), 0.3);
        // p = 0 pairs with p = 1
        assert!((p_bar(&p3, 0.0, 1e-12).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn q1_of_path() {
        let p3 = pat("P3");
        for &(u, v, s) in &[(0.1, 0.2, 0.3), (0.9, 0.4, 0.05), (0.5, 0.5, 0.5)] {
            let expected = 2.0 * v * s * (1.0 - s) + (1.0 - v) * s * s;
            assert!((qk_eval(&p3, 1, u, v, s).unwrap() - expected).abs() < 1e-15);
        }
        assert!(qk_eval(&p3, 4, 0.1, 0.1, 0.1).is_err());
    }

    #[test]
    fn s_polynomial_of_path() {
        let v = 0.35;
        let poly = qk_s_polynomial(&pat("P3"), 1, v, v).unwrap();
        let expected = [0.0, 2.0 * v, 1.0 - 3.0 * v];
        assert_eq!(poly.0.len(), 3);
        for (c, e) in poly.0.iter().zip(expected) {
            assert!((c - e).abs() < 1e-15);
        }
        assert!(qk_s_polynomial(&pat("P3"), 0, v, v).is_err());
        assert!(qk_s_polynomial(&pat("P3"), 3, v, v).is_err());
    }

    #[test]
    fn path_is_not_forcing_at_point_seven() {
        let verdict = hf_check(&pat("P3"), 0.7, 1e-9).unwrap();
        assert_eq!(verdict.status, HfStatus::Counterexample);
        let w = verdict
            .witnesses
            .iter()
            .find(|w| w.u == 0.7 && w.v == 0.7)
            .expect("u = v = p witness");
        assert!((w.s - 63.0 / 110.0).abs() < 1e-9);
        assert!(w.residual < 1e-9);
    }

    #[test]
    fn complete_pattern_is_certified() {
        let verdict = hf_check(&pat("K3"), 0.5, 1e-9).unwrap();
        assert_eq!(verdict.status, HfStatus::CertifiedAtTolerance);
        assert!(verdict.examined.iter().any(|w| (w.s - 0.5).abs() < 1e-12));
        assert!(hf_check(&pat("K3"), 1.0, 1e-9).is_err());
        assert!(hf_check(&pat("K1"), 0.5, 1e-9).is_err());
    }
}
