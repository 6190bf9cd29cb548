//! Deviation statistics: consistency between modes and the hereditary
//! count oracle.

mod support;

use proptest::prelude::*;
use qrgraph::graph::count_subgraphs;
use qrgraph::hf::{beta, p_bar};
use qrgraph::qr::{cut_deviation, dev_cut, dev_global, dev_hereditary, dev_regularity, hereditary_deviation, HereditaryMode, HereditaryTest, Sampler, SubsetSize};
use qrgraph::{Graph, PatternGraph, VertexConstraint, VertexSet};

fn subset(mask: u64, n: usize) -> VertexSet {
    VertexSet::from_mask(mask, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn single_set_deviation_from_counts(g in support::graph(9), mask in any::<u64>(), p in 0.0f64..=1.0, induced in any::<bool>()) {
        let f = PatternGraph::path(3);
        let u = subset(mask, g.n());
        let count = count_subgraphs(&f, &g, &VertexConstraint::Single(u.clone()), induced).unwrap() as f64;
        let c = if induced { beta(&f, p) } else { p * p };
        let expected = (count - c * (u.len() as f64).powi(3)).abs() / (g.n() as f64).powi(3);
        prop_assert_eq!(hereditary_deviation(&g, &f, p, induced, &[u]).unwrap(), expected);
    }

    #[test]
    fn multi_with_equal_sets_is_single(g in support::graph(10), mask in any::<u64>(), p in 0.0f64..=1.0, induced in any::<bool>()) {
        let f = PatternGraph::cycle(4).unwrap();
        let u = subset(mask, g.n());
        let single = hereditary_deviation(&g, &f, p, induced, std::slice::from_ref(&u)).unwrap();
        let multi = hereditary_deviation(&g, &f, p, induced, &vec![u; 4]).unwrap();
        prop_assert_eq!(single, multi);
    }

    #[test]
    fn cut_complement_symmetry(g in support::graph(30), mask in any::<u64>(), p in 0.0f64..=1.0) {
        let u = subset(mask, g.n());
        let a = cut_deviation(&g, p, &u).unwrap();
        prop_assert_eq!(a, cut_deviation(&g, p, &u.complement(g.n())).unwrap());
    }

    #[test]
    fn exhaustive_cut_is_the_maximum(g in support::graph(12), p in 0.0f64..=1.0) {
        let r = dev_cut(&g, p, SubsetSize::All, Sampler::default()).unwrap();
        prop_assert!(r.exhaustive);
        let n = g.n();
        let best = (0u64..1 << n).map(|m| cut_deviation(&g, p, &subset(m, n)).unwrap()).fold(0.0, f64::max);
        prop_assert_eq!(r.max_dev, best);
    }

    #[test]
    fn conjugate_targets_coincide(g in support::graph(12), mask in any::<u64>(), p in 0.05f64..0.95) {
        let f = PatternGraph::path(3);
        let pb = p_bar(&f, p, 1e-15).unwrap();
        let u = subset(mask, g.n());
        let a = hereditary_deviation(&g, &f, p, true, std::slice::from_ref(&u)).unwrap();
        let b = hereditary_deviation(&g, &f, pb, true, &[u]).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn empty_set_contributes_nothing() {
    let g = Graph::gnp(10, 0.5, 2);
    let f = PatternGraph::complete(3);
    assert_eq!(hereditary_deviation(&g, &f, 0.5, false, &[VertexSet::empty()]).unwrap(), 0.0);
}

#[test]
fn sampled_reports_are_deterministic() {
    let g = Graph::gnp(60, 0.5, 5);
    let f = PatternGraph::path(3);
    let test = HereditaryTest::new(HereditaryMode::Multi).size(SubsetSize::Fixed(0.25)).sampler(Sampler { samples: 100, seed: 11 });
    let a = dev_hereditary(&g, &f, 0.5, &test).unwrap();
    assert_eq!(a, dev_hereditary(&g, &f, 0.5, &test).unwrap());
    assert_eq!(a.to_json(), dev_hereditary(&g, &f, 0.5, &test).unwrap().to_json());
    assert_eq!(a.seed, Some(11));
    assert!(a.witness.iter().all(|s| s.len() == 15));
    let other = dev_hereditary(&g, &f, 0.5, &test.sampler(Sampler { samples: 100, seed: 12 })).unwrap();
    assert_ne!(a.witness, other.witness);
}

#[test]
fn disjoint_witnesses_are_disjoint() {
    let g = Graph::gnp(40, 0.5, 6);
    let f = PatternGraph::complete(3);
    let r = dev_hereditary(&g, &f, 0.5, &HereditaryTest::new(HereditaryMode::Disjoint).sampler(Sampler { samples: 200, seed: 1 })).unwrap();
    for (i, a) in r.witness.iter().enumerate() {
        for b in &r.witness[i + 1..] {
            assert!(a.as_slice().iter().all(|v| !b.contains(*v)));
        }
    }
}

#[test]
fn global_reports_every_pattern() {
    let g = Graph::gnp(40, 0.3, 3);
    let patterns = [PatternGraph::complete(2), PatternGraph::path(3), PatternGraph::cycle(4).unwrap()];
    let r = dev_global(&g, 0.3, &patterns).unwrap();
    assert_eq!(r.entries.len(), 3);
    let best = r.entries.iter().map(|e| e.value).fold(0.0, f64::max);
    assert_eq!(r.max_dev, best);
    assert!(dev_global(&g, 1.5, &patterns).is_err());
}

#[test]
fn regularity_reports() {
    let r = dev_regularity(&Graph::cycle(10), 0.2).unwrap();
    assert_eq!(r.max_dev, 0.0);
    let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    // degrees 3,1,1,1 against 2: |1| * 4 / 16
    assert_eq!(dev_regularity(&star, 0.5).unwrap().max_dev, 0.25);
}

#[test]
fn half_structured_graph_hides_its_cut_deviation_at_half_size() {
    let w = qrgraph::StepKernel::two_type(0.0, 1.0, 0.5, 0.5).unwrap();
    let g = qrgraph::graphon::sample_graph(&w, 200, 0).unwrap();
    // part marginals 1/4 and 3/4
    assert!((dev_regularity(&g, 0.5).unwrap().max_dev - 0.25).abs() < 0.03);
    let half = dev_cut(&g, 0.5, SubsetSize::Fixed(0.5), Sampler::default()).unwrap();
    let all = dev_cut(&g, 0.5, SubsetSize::All, Sampler::default()).unwrap();
    assert!(half.max_dev < 0.02, "{}", half.max_dev);
    assert!(all.max_dev >= 0.02, "{}", all.max_dev);
    let size = all.witness[0].len();
    assert!((130..=170).contains(&size), "|U| = {size}");
}
