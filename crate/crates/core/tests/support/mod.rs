#![allow(dead_code)]

use proptest::prelude::*;
use qrgraph::{Graph, KernelRange, StepKernel};

pub fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>(), 0.1f64..0.9).prop_map(|(n, seed, p)| Graph::gnp(n, p, seed))
}

/// Graphon-range step kernel with `1..=max_k` parts.
pub fn graphon(max_k: usize) -> impl Strategy<Value = StepKernel> {
    kernel(max_k, KernelRange::Graphon)
}

pub fn kernel(max_k: usize, range: KernelRange) -> impl Strategy<Value = StepKernel> {
    (1..=max_k).prop_flat_map(move |k| {
        (proptest::collection::vec(0.05f64..1.0, k), proptest::collection::vec(0.0f64..=1.0, k * k)).prop_map(move |(w, raw)| {
            let total: f64 = w.iter().sum();
            let mut weights: Vec<f64> = w.iter().map(|x| x / total).collect();
            let head: f64 = weights[..k - 1].iter().sum();
            weights[k - 1] = 1.0 - head;
            let mut values = vec![vec![0.0; k]; k];
            for a in 0..k {
                for b in a..k {
                    let x = raw[a * k + b];
                    let x = if range == KernelRange::Signed { 2.0 * x - 1.0 } else { x };
                    values[a][b] = x;
                    values[b][a] = x;
                }
            }
            StepKernel::new(weights, values, range).unwrap()
        })
    })
}
