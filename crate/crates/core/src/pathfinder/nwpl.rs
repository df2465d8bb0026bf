//! Normalized weighted path length: the best mean edge weight over simple
//! paths. The objective is not prefix-monotone, so this is a depth-first
//! branch-and-bound over simple paths rather than a label-setting search.

use std::collections::VecDeque;

use super::{Measure, PathFinder, SemanticPath, SenseRelatedness};
use crate::error::Result;
use crate::thesaurus::{Edge, EdgeKind, SenseId};

struct Frame {
    node: u32,
    edges: Vec<Edge>,
    next: usize,
}

pub(super) fn search(finder: &PathFinder<'_>, source: SenseId, target: SenseId) -> Result<SenseRelatedness> {
    let graph = finder.graph;
    let n = graph.len();
    let cap = finder.options.max_hops.unwrap_or(n.saturating_sub(1));
    let weights = graph.weights();
    let w_max = finder
        .graph
        .weights()
        .entries()
        .filter(|(c, _)| !finder.options.excluded.contains(*c))
        .map(|(_, w)| w)
        .fold(0.0, f64::max);

    let to_target = hops_to(finder, target);
    if to_target[source.index()] == usize::MAX || to_target[source.index()] > cap {
        return Ok(SenseRelatedness::unrelated(Measure::Nwpl));
    }

    let sorted_edges = |node: u32| -> Vec<Edge> {
        let mut edges: Vec<Edge> = graph
            .edges(SenseId(node))
            .iter()
            .filter(|e| finder.allowed(e.kind))
            .copied()
            .collect();
        // heaviest first so good paths are found early and prune the rest
        edges.sort_by(|a, b| {
            weights
                .get(b.kind)
                .total_cmp(&weights.get(a.kind))
                .then(a.target.cmp(&b.target))
                .then(a.kind.cmp(&b.kind))
        });
        edges
    };

    let mut on_path = vec![false; n];
    let mut prefix = vec![0.0f64];
    let mut kinds: Vec<EdgeKind> = Vec::new();
    let mut stack = vec![Frame {
        node: source.0,
        edges: sorted_edges(source.0),
        next: 0,
    }];
    on_path[source.index()] = true;

    let mut best = f64::NEG_INFINITY;
    let mut best_path: Option<(Vec<SenseId>, Vec<EdgeKind>)> = None;

    while let Some(frame) = stack.last_mut() {
        if frame.next >= frame.edges.len() {
            on_path[frame.node as usize] = false;
            stack.pop();
            prefix.pop();
            kinds.pop();
            continue;
        }
        let e = frame.edges[frame.next];
        frame.next += 1;
        let v = e.target.index();
        if on_path[v] {
            continue;
        }
        let len = kinds.len() + 1;
        let sum = prefix[kinds.len()] + weights.get(e.kind);
        if e.target == target {
            let mean = sum / len as f64;
            if mean > best {
                best = mean;
                let mut senses: Vec<SenseId> = stack.iter().map(|f| SenseId(f.node)).collect();
                senses.push(target);
                let mut ks = kinds.clone();
                ks.push(e.kind);
                best_path = Some((senses, ks));
            }
            continue;
        }
        let remaining = to_target[v];
        if remaining == usize::MAX || len + remaining > cap {
            continue;
        }
        // mean of any completion is at most (sum + r·w_max) / (len + r),
        // monotone in r, so the extremes of r bound it
        let bound = [remaining.max(1), cap - len]
            .iter()
            .map(|&r| (sum + r as f64 * w_max) / (len + r) as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        if bound <= best {
            continue;
        }
        on_path[v] = true;
        prefix.push(sum);
        kinds.push(e.kind);
        stack.push(Frame {
            node: e.target.0,
            edges: sorted_edges(e.target.0),
            next: 0,
        });
    }

    match best_path {
        None => Ok(SenseRelatedness::unrelated(Measure::Nwpl)),
        Some((senses, edges)) => Ok(SenseRelatedness {
            value: best,
            witness: Some(SemanticPath::new(graph, senses, edges)?),
            measure: Measure::Nwpl,
        }),
    }
}

/// Hop distance from every sense to `target` over allowed edges.
fn hops_to(finder: &PathFinder<'_>, target: SenseId) -> Vec<usize> {
    let graph = finder.graph;
    let mut dist = vec![usize::MAX; graph.len()];
    let mut queue = VecDeque::new();
    dist[target.index()] = 0;
    queue.push_back(target);
    // inverse-closed graph: forward edges out of v mirror edges into v
    while let Some(u) = queue.pop_front() {
        for e in graph.edges(u).iter().filter(|e| finder.allowed(e.kind)) {
            if dist[e.target.index()] == usize::MAX {
                dist[e.target.index()] = dist[u.index()] + 1;
                queue.push_back(e.target);
            }
        }
    }
    dist
}
