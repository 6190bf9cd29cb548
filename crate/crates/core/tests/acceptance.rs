//! Acceptance suite: one printed PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p qrgraph --test acceptance -- --nocapture
//! --test-threads=1` for ordered output.

use std::time::{Duration, Instant};

use qrgraph::cut::{bilinear, cut_norm, cut_norm_exact, cut_norm_heuristic, kernel_difference};
use qrgraph::graph::{count_homomorphisms, count_subgraphs};
use qrgraph::graphon::{psi_constant_dev, sample_graph, t_density};
use qrgraph::hf::{beta, hf_check, hf_check_with, p_bar, qk_eval, HfOptions, HfStatus};
use qrgraph::qr::{degree_moment_check, dev_global, dev_hereditary, HereditaryMode, HereditaryTest, Sampler};
use qrgraph::rng::SeededRng;
use qrgraph::{Graph, KernelRange, PatternGraph, StepKernel, VertexConstraint, VertexSet};

fn verdict(id: u32, title: &str, checks: &[(&str, bool)], detail: String, elapsed: Duration, limit: Duration) {
    let in_time = elapsed <= limit;
    let pass = in_time && checks.iter().all(|c| c.1);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    println!(
        "[{}] criterion {id:02} {title}: {detail}; {:.3} s (limit {} s){}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if failed.is_empty() { String::new() } else { format!("; failed: {}", failed.join(", ")) }
    );
    assert!(in_time, "criterion {id}: runtime {elapsed:?} over {limit:?}");
    assert!(failed.is_empty(), "criterion {id}: {}", failed.join(", "));
}

fn random_pattern(rng: &mut SeededRng, max_f: usize) -> PatternGraph {
    let f = 2 + rng.below(max_f - 1);
    let edges: Vec<(usize, usize)> = (0..f)
        .flat_map(|i| (i + 1..f).map(move |j| (i, j)))
        .filter(|_| rng.bernoulli(0.5))
        .collect();
    PatternGraph::new(f, &edges).unwrap()
}

fn random_kernel(rng: &mut SeededRng, max_k: usize, range: KernelRange) -> StepKernel {
    let k = 1 + rng.below(max_k);
    let raw: Vec<f64> = (0..k).map(|_| 0.1 + rng.uniform()).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let head: f64 = weights[..k - 1].iter().sum();
    weights[k - 1] = 1.0 - head;
    let mut values = vec![vec![0.0; k]; k];
    for a in 0..k {
        for b in a..k {
            let x = rng.uniform();
            let x = if range == KernelRange::Signed { 2.0 * x - 1.0 } else { x };
            values[a][b] = x;
            values[b][a] = x;
        }
    }
    StepKernel::new(weights, values, range).unwrap()
}

/// Injective maps respecting `allowed`, checked pair by pair.
fn brute_injective(f: &PatternGraph, g: &Graph, allowed: &[bool], induced: bool) -> u128 {
    fn rec(i: usize, map: &mut Vec<usize>, f: &PatternGraph, g: &Graph, allowed: &[bool], induced: bool) -> u128 {
        if i == f.f() {
            return 1;
        }
        let mut total = 0;
        for v in 0..g.n() {
            if !allowed[v] || map.contains(&v) {
                continue;
            }
            let ok = (0..i).all(|j| match (f.has_edge(i, j), g.has_edge(map[j], v)) {
                (true, host) => host,
                (false, host) => !induced || !host,
            });
            if ok {
                map.push(v);
                total += rec(i + 1, map, f, g, allowed, induced);
                map.pop();
            }
        }
        total
    }
    rec(0, &mut Vec::new(), f, g, allowed, induced)
}

fn brute_hom(f: &PatternGraph, g: &Graph) -> u128 {
    let (n, ff) = (g.n() as u64, f.f() as u32);
    let mut count = 0;
    for code in 0..n.pow(ff) {
        let map: Vec<usize> = (0..ff).map(|i| (code / n.pow(i) % n) as usize).collect();
        if f.edges().all(|(i, j)| g.has_edge(map[i], map[j])) {
            count += 1;
        }
    }
    count
}

#[test]
fn criterion_01_q1_formula() {
    let start = Instant::now();
    let f = PatternGraph::path(3);
    let mut worst = 0.0f64;
    for i in 0..10 {
        for j in 0..10 {
            for l in 0..10 {
                let (u, v, s) = (i as f64 / 9.0, j as f64 / 9.0, l as f64 / 9.0);
                let formula = 2.0 * v * s * (1.0 - s) + (1.0 - v) * s * s;
                worst = worst.max((qk_eval(&f, 1, u, v, s).unwrap() - formula).abs());
            }
        }
    }
    verdict(
        1,
        "Q_1 of the path",
        &[("max error <= 1e-12", worst <= 1e-12)],
        format!("max error {worst:.3e} on 1000 grid points"),
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_02_path_not_forcing() {
    let start = Instant::now();
    let f = PatternGraph::path(3);
    let p: f64 = 0.7;
    let v = hf_check(&f, p, 1e-9).unwrap();
    // non-trivial root of (1 - 3p) s^2 + 2p s - 3p^2 (1 - p), by the quadratic formula
    let (a, b, c) = (1.0 - 3.0 * p, 2.0 * p, -3.0 * p * p * (1.0 - p));
    let disc = (b * b - 4.0 * a * c).sqrt();
    let roots = [(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)];
    let oracle = roots.into_iter().find(|r| (r - p).abs() > 1e-6).unwrap();
    let witness = v.witnesses.iter().find(|w| w.u == p && w.v == p && (w.s - oracle).abs() <= 1e-9);
    let dev = witness.map(|w| {
        let kernel = StepKernel::two_type(w.u, w.v, w.s, 0.5).unwrap();
        psi_constant_dev(&f, &kernel, beta(&f, p), true, true).unwrap()
    });
    verdict(
        2,
        "P3 is not hereditary induced-forcing at p = 0.7",
        &[
            ("counterexample status", v.status == HfStatus::Counterexample),
            ("witness at the quadratic-formula root", witness.is_some()),
            ("oracle root is 63/110", (oracle - 63.0 / 110.0).abs() <= 1e-12),
            ("materialized kernel constant", dev.is_some_and(|d| d <= 1e-9)),
        ],
        format!(
            "s = {:.12} (oracle {oracle:.12}), residual {:.2e}, constancy deviation {:.2e}",
            witness.map_or(f64::NAN, |w| w.s),
            witness.map_or(f64::NAN, |w| w.residual),
            dev.unwrap_or(f64::NAN)
        ),
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_03_regular_patterns_certified() {
    let start = Instant::now();
    let opts = HfOptions { tol: 1e-9, grid: 101 };
    let patterns = [PatternGraph::cycle(4).unwrap(), PatternGraph::cycle(5).unwrap(), PatternGraph::complete(4)];
    let mut failures = Vec::new();
    let mut runs = 0;
    for f in &patterns {
        for i in 1..=9 {
            let p = i as f64 / 10.0;
            runs += 1;
            if hf_check_with(f, p, &opts).unwrap().status != HfStatus::CertifiedAtTolerance {
                failures.push(format!("{f} p={p}"));
            }
        }
    }
    verdict(
        3,
        "regular patterns certified at tolerance",
        &[("all certified", failures.is_empty())],
        format!("{} of {runs} runs certified {failures:?}", runs - failures.len()),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_04_conjugate_closed_form() {
    let start = Instant::now();
    let got = p_bar(&PatternGraph::path(3), 0.5, 1e-13).unwrap();
    let closed = (1.0 + 5f64.sqrt()) / 4.0;
    // 8x^3 - 8x^2 + 1 = (x - 1/2)(8x^2 - 4x - 2)
    let cubic = 8.0 * closed.powi(3) - 8.0 * closed.powi(2) + 1.0;
    verdict(
        4,
        "conjugate of 1/2 for P3",
        &[("|p_bar - (1+sqrt5)/4| <= 1e-10", (got - closed).abs() <= 1e-10), ("closed form is a cubic root", cubic.abs() <= 1e-14)],
        format!("p_bar = {got:.15}, closed form {closed:.15}"),
        start.elapsed(),
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_05_degree_moment_identity() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_direct = 0.0f64;
    for seed in 0..20 {
        let g = Graph::gnp(12, 0.5, seed);
        worst = worst.max(degree_moment_check(&g, 4).unwrap().max_dev);
        let n = g.n() as f64;
        for k in 1..=4u32 {
            let moment: f64 = g.degrees().iter().map(|&d| (d as f64 / n).powi(k as i32)).sum::<f64>() / n;
            let hom = brute_hom(&PatternGraph::star(k as usize), &g) as f64 / n.powi(k as i32 + 1);
            worst_direct = worst_direct.max((moment - hom).abs());
        }
    }
    verdict(
        5,
        "degree moments equal star densities",
        &[("library <= 1e-12", worst <= 1e-12), ("brute force <= 1e-12", worst_direct <= 1e-12)],
        format!("max difference {worst:.2e} (brute-force oracle {worst_direct:.2e}) over 20 graphs, k = 1..4"),
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_06_inclusion_exclusion() {
    let start = Instant::now();
    let mut rng = SeededRng::new(6);
    let patterns = [PatternGraph::complete(2), PatternGraph::path(3), PatternGraph::cycle(4).unwrap()];
    let (mut checked, mut mismatches) = (0, 0);
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 5);
        let g = Graph::gnp(n, 0.5, 600 + seed);
        for f in &patterns {
            let supers: Vec<PatternGraph> = PatternGraph::all_on(f.f()).filter(|h| f.is_spanning_subgraph_of(h)).collect();
            for _ in 0..10 {
                let u: Vec<usize> = (0..n).filter(|_| rng.bernoulli(0.6)).collect();
                let allowed: Vec<bool> = (0..n).map(|v| u.contains(&v)).collect();
                let c = VertexConstraint::Single(VertexSet::new(u));
                let plain = count_subgraphs(f, &g, &c, false).unwrap();
                let sum: u128 = supers.iter().map(|h| count_subgraphs(h, &g, &c, true).unwrap()).sum();
                let oracle_plain = brute_injective(f, &g, &allowed, false);
                let oracle_sum: u128 = supers.iter().map(|h| brute_injective(h, &g, &allowed, true)).sum();
                checked += 1;
                if plain != sum || plain != oracle_plain || sum != oracle_sum {
                    mismatches += 1;
                }
            }
        }
    }
    verdict(
        6,
        "inclusion-exclusion over supergraphs",
        &[("exact equality", mismatches == 0)],
        format!("{checked} constrained counts, {mismatches} mismatches"),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_07_embedding_consistency() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut hom_mismatch = 0;
    let mut cases = 0;
    for seed in 0..20u64 {
        let n = 1 + (seed as usize % 8);
        let g = Graph::gnp(n, 0.5, 700 + seed);
        let w = StepKernel::from_graph(&g).unwrap();
        for ff in 1..=4 {
            for f in PatternGraph::all_on(ff) {
                let hom = brute_hom(&f, &g);
                if count_homomorphisms(&f, &g).unwrap() != hom {
                    hom_mismatch += 1;
                }
                let expected = hom as f64 / (n as f64).powi(ff as i32);
                worst = worst.max((t_density(&f, &w, false).unwrap() - expected).abs());
                cases += 1;
            }
        }
    }
    verdict(
        7,
        "densities of graph kernels are homomorphism fractions",
        &[("within 1e-12", worst <= 1e-12), ("hom counts match", hom_mismatch == 0)],
        format!("{cases} (pattern, graph) pairs, max error {worst:.2e}"),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_08_cut_norm_exactness() {
    let start = Instant::now();
    let mut rng = SeededRng::new(8);
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let w = random_kernel(&mut rng, 4, KernelRange::Signed);
        let exact = cut_norm_exact(&w).value;
        let heuristic = cut_norm_heuristic(&w, 20, i).value;
        worst = worst.max((exact - heuristic).abs());
    }
    let constant_ok = [-0.6, -0.25, 0.0, 0.3, 1.0].iter().all(|&c| {
        let k = StepKernel::new(vec![0.5, 0.5], vec![vec![c, c], vec![c, c]], KernelRange::Signed).unwrap();
        cut_norm(&k).value == f64::abs(c) && cut_norm_heuristic(&k, 20, 0).value == f64::abs(c)
    });
    verdict(
        8,
        "alternating heuristic reaches the exact cut norm",
        &[("within 1e-9", worst <= 1e-9), ("constant kernels |c|", constant_ok)],
        format!("max gap {worst:.2e} over 100 signed kernels"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_09_half_cut_failure() {
    let start = Instant::now();
    let w = StepKernel::two_type(0.0, 1.0, 0.5, 0.5).unwrap();
    let mut rng = SeededRng::new(9);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let a1 = rng.uniform();
        let a = [a1, 1.0 - a1];
        let comp = [1.0 - a[0], 1.0 - a[1]];
        // measure of A is (a1 + a2) / 2 = 1/2
        worst = worst.max((bilinear(&w, &a, &comp) - 0.5 * 0.5 * 0.5).abs());
    }
    let half = StepKernel::new(vec![0.5, 0.5], vec![vec![0.5, 0.5], vec![0.5, 0.5]], KernelRange::Graphon).unwrap();
    let norm = cut_norm(&kernel_difference(&w, &half).unwrap()).value;
    let a = [0.5, 1.0];
    let violation = (bilinear(&w, &a, &[0.5, 0.0]) - 0.5 * 0.75 * 0.25).abs();
    verdict(
        9,
        "cut condition at measure 1/2 does not force",
        &[
            ("measure-1/2 boxes within 1e-12", worst <= 1e-12),
            ("cut norm 1/8", (norm - 0.125).abs() <= 1e-9),
            ("measure-3/4 violation 1/32", (violation - 1.0 / 32.0).abs() <= 1e-12),
        ],
        format!("max half-box error {worst:.2e}, cut norm {norm}, 3/4-box violation {violation}"),
        start.elapsed(),
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_10_convergence_regression() {
    let start = Instant::now();
    let patterns = [PatternGraph::complete(2), PatternGraph::cycle(4).unwrap()];
    let devs: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&n| dev_global(&Graph::gnp(n, 0.5, 1), 0.5, &patterns).unwrap().max_dev)
        .collect();
    let g = Graph::gnp(256, 0.5, 1);
    let test = HereditaryTest::new(HereditaryMode::Single).sampler(Sampler { samples: 2000, seed: 1 });
    let hered = dev_hereditary(&g, &PatternGraph::cycle(4).unwrap(), 0.5, &test).unwrap();
    // values recorded on the first run with seed 1
    let pinned = [0.0021996498107910156, 0.0142822265625, 0.00360107421875];
    let pinned_hered = 0.0005708101525669917;
    verdict(
        10,
        "quasi-random deviations shrink with n",
        &[
            ("strictly decreasing", devs[0] > devs[1] && devs[1] > devs[2]),
            ("global < 0.05 at n = 256", devs[2] < 0.05),
            ("hereditary < 0.05 at n = 256", hered.max_dev < 0.05 && !hered.exhaustive && hered.samples == 2000),
            ("regression values", devs == pinned && hered.max_dev == pinned_hered),
        ],
        format!("global {devs:?}, hereditary C4 {}", hered.max_dev),
        start.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_11_mixed_witness() {
    let start = Instant::now();
    let w = StepKernel::two_type(0.7, 0.7, 63.0 / 110.0, 0.5).unwrap();
    let g = sample_graph(&w, 256, 1).unwrap();
    let test = HereditaryTest::new(HereditaryMode::Single).induced(true).sampler(Sampler { samples: 2000, seed: 1 });
    let hered = dev_hereditary(&g, &PatternGraph::path(3), 0.7, &test).unwrap().max_dev;
    let global = dev_global(&g, 0.7, &[PatternGraph::cycle(4).unwrap()]).unwrap().max_dev;
    let limit = (t_density(&PatternGraph::cycle(4).unwrap(), &w, false).unwrap() - 0.7f64.powi(4)).abs();
    let pinned = (0.0006198801994323697, 0.07264231326282017);
    verdict(
        11,
        "P3-balanced graph that is not quasi-random",
        &[
            ("induced hereditary < 0.05", hered < 0.05),
            ("global C4 > 0.1", global > 0.1),
            ("regression values", (hered, global) == pinned),
        ],
        format!("induced hereditary P3 {hered}, global C4 {global} (kernel limit {limit:.5})"),
        start.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_12_zero_density_failure() {
    let start = Instant::now();
    let g = Graph::complete_bipartite(8, 8);
    let k3 = PatternGraph::complete(3);
    let test = HereditaryTest::new(HereditaryMode::Single);
    let report = dev_hereditary(&g, &k3, 0.0, &test).unwrap();
    let nonzero = (0u64..1 << 16)
        .filter(|&m| count_subgraphs(&k3, &g, &VertexConstraint::Single(VertexSet::from_mask(m, 16)), false).unwrap() != 0)
        .count();
    let global = dev_global(&g, 0.0, &[PatternGraph::complete(2)]).unwrap().max_dev;
    verdict(
        12,
        "hereditary triangle counts vanish on K_{8,8}",
        &[
            ("all 2^16 counts zero", nonzero == 0),
            ("exhaustive report max 0", report.exhaustive && report.samples == 1 << 16 && report.max_dev == 0.0),
            ("global K2 deviation >= 0.4", global >= 0.4),
        ],
        format!("{nonzero} subsets with triangles, hereditary max {}, global K2 {global}", report.max_dev),
        start.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_13_qk_symmetries() {
    let start = Instant::now();
    let mut rng = SeededRng::new(13);
    let mut worst = 0.0f64;
    let binom = |n: usize, k: usize| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
    for _ in 0..10 {
        let f = random_pattern(&mut rng, 6);
        let n = f.f();
        for _ in 0..20 {
            let (u, v, s) = (rng.uniform(), rng.uniform(), rng.uniform());
            let q = |k, u, v, s| qk_eval(&f, k, u, v, s).unwrap();
            for k in 0..=n {
                worst = worst.max((q(n - k, u, v, s) - q(k, v, u, s)).abs());
                worst = worst.max((q(k, u, u, u) - binom(n, k) * beta(&f, u)).abs());
            }
            worst = worst.max((q(0, u, v, s) - beta(&f, v)).abs());
            worst = worst.max((q(n, u, v, s) - beta(&f, u)).abs());
        }
    }
    verdict(
        13,
        "Q_k symmetries",
        &[("within 1e-12", worst <= 1e-12)],
        format!("max violation {worst:.2e} over 10 patterns x 20 points"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_14_induced_normalization() {
    let start = Instant::now();
    let mut rng = SeededRng::new(14);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let w = random_kernel(&mut rng, 4, KernelRange::Graphon);
        for ff in 1..=4 {
            let total: f64 = PatternGraph::all_on(ff).map(|f| t_density(&f, &w, true).unwrap()).sum();
            worst = worst.max((total - 1.0).abs());
        }
    }
    verdict(
        14,
        "induced densities sum to one",
        &[("within 1e-9", worst <= 1e-9)],
        format!("max |sum - 1| = {worst:.2e} over 10 kernels, f = 1..4"),
        start.elapsed(),
        Duration::from_secs(10),
    );
}
