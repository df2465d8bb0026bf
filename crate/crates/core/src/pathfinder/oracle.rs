//! Exhaustive reference for the path measures: enumerate every simple path and
//! evaluate the objective directly from the edge weights and depths. Simple
//! paths suffice because every weight is below 1, so a revisit can only shrink
//! a product, and the mean objective is defined over simple paths.

use super::Measure;
use crate::error::{Error, Result};
use crate::thesaurus::{SenseId, ThesaurusGraph};

/// Largest graph the oracle will enumerate.
pub const ORACLE_LIMIT: usize = 12;

pub fn brute_force_relatedness(graph: &ThesaurusGraph, s1: SenseId, s2: SenseId, measure: Measure) -> Result<f64> {
    if graph.len() > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge {
            senses: graph.len(),
            limit: ORACLE_LIMIT,
        });
    }
    if !graph.contains(s1) || !graph.contains(s2) {
        return Err(Error::UnknownSense(format!("#{}/#{}", s1.0, s2.0)));
    }
    if !measure.is_path_measure() {
        return Err(Error::InvalidInput(format!("{measure} is not a path measure")));
    }
    let d_max = graph.max_depth() as f64;
    if s1 == s2 {
        return Ok(match measure {
            Measure::Sr => graph.depth(s1) as f64 / d_max,
            _ => 1.0,
        });
    }

    let mut best = 0.0f64;
    let mut visited = vec![false; graph.len()];
    let mut nodes = vec![s1];
    let mut weights = Vec::new();
    visited[s1.index()] = true;
    enumerate(graph, s2, &mut visited, &mut nodes, &mut weights, &mut |nodes, ws| {
        let value = objective(graph, measure, nodes, ws, d_max);
        if value > best {
            best = value;
        }
    });
    Ok(best)
}

fn enumerate(
    graph: &ThesaurusGraph,
    target: SenseId,
    visited: &mut [bool],
    nodes: &mut Vec<SenseId>,
    weights: &mut Vec<f64>,
    visit: &mut dyn FnMut(&[SenseId], &[f64]),
) {
    let here = *nodes.last().unwrap();
    for e in graph.edges(here) {
        if visited[e.target.index()] {
            continue;
        }
        nodes.push(e.target);
        weights.push(graph.weights().get(e.kind));
        if e.target == target {
            visit(nodes, weights);
        } else {
            visited[e.target.index()] = true;
            enumerate(graph, target, visited, nodes, weights, visit);
            visited[e.target.index()] = false;
        }
        nodes.pop();
        weights.pop();
    }
}

fn objective(graph: &ThesaurusGraph, measure: Measure, nodes: &[SenseId], ws: &[f64], d_max: f64) -> f64 {
    match measure {
        Measure::Pr => ws.iter().product(),
        Measure::Sr => {
            let compactness: f64 = ws.iter().product();
            let elaboration: f64 = nodes
                .windows(2)
                .map(|p| {
                    let a = graph.depth(p[0]) as f64;
                    let b = graph.depth(p[1]) as f64;
                    (2.0 * a * b / (a + b)) / d_max
                })
                .product();
            compactness * elaboration
        }
        Measure::Nwpl => ws.iter().sum::<f64>() / ws.len() as f64,
        _ => unreachable!("checked by caller"),
    }
}
