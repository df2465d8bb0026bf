use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{depth_factor, PathFinder};
use crate::thesaurus::{EdgeKind, SenseId};

#[derive(Clone, Copy, PartialEq)]
struct State {
    cost: f64,
    node: u32,
}

impl Eq for State {}

// Min-heap on cost; on equal cost the lower sense index pops first.
impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(super) type RawPath = (Vec<SenseId>, Vec<EdgeKind>);

/// Max-product search from `source`, minimizing the sum of `-ln w` where `w`
/// is the edge weight, optionally scaled by the depth factor. Returns the
/// best path to each target, or `None` when unreachable.
pub(super) fn max_product(
    finder: &PathFinder<'_>,
    source: SenseId,
    targets: &[SenseId],
    depth_scaled: bool,
) -> Vec<Option<RawPath>> {
    let graph = finder.graph;
    let n = graph.len();
    let weights = graph.weights();
    let d_max = graph.max_depth() as f64;
    let cap = finder.options.max_hops.unwrap_or(usize::MAX);

    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<(u32, EdgeKind)>> = vec![None; n];
    let mut hops = vec![0usize; n];
    let mut settled = vec![false; n];
    let mut is_target = vec![false; n];
    let mut remaining = 0usize;
    for t in targets {
        if *t != source && !is_target[t.index()] {
            is_target[t.index()] = true;
            remaining += 1;
        }
    }

    let mut heap = BinaryHeap::new();
    dist[source.index()] = 0.0;
    heap.push(State {
        cost: 0.0,
        node: source.0,
    });

    while let Some(State { cost, node }) = heap.pop() {
        let u = node as usize;
        if settled[u] || cost > dist[u] {
            continue;
        }
        settled[u] = true;
        if is_target[u] {
            remaining -= 1;
            if remaining == 0 {
                break;
            }
        }
        if hops[u] >= cap {
            continue;
        }
        let du = graph.depth(SenseId(node)) as f64;
        for e in graph.edges(SenseId(node)) {
            if !finder.allowed(e.kind) {
                continue;
            }
            let v = e.target.index();
            if settled[v] {
                continue;
            }
            let mut w = weights.get(e.kind);
            if depth_scaled {
                w *= depth_factor(du, graph.depth(e.target) as f64, d_max);
            }
            let next = cost - w.ln();
            if next < dist[v] {
                dist[v] = next;
                pred[v] = Some((node, e.kind));
                hops[v] = hops[u] + 1;
                heap.push(State {
                    cost: next,
                    node: e.target.0,
                });
            }
        }
    }

    targets
        .iter()
        .map(|t| {
            if *t == source || !settled[t.index()] {
                return None;
            }
            let mut senses = vec![*t];
            let mut edges = Vec::new();
            let mut cur = t.index();
            while let Some((p, kind)) = pred[cur] {
                senses.push(SenseId(p));
                edges.push(kind);
                cur = p as usize;
            }
            senses.reverse();
            edges.reverse();
            Some((senses, edges))
        })
        .collect()
}
