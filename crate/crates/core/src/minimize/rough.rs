//! Rough reduction: cheap passes that shrink a graph before the fine
//! search. Every enabled pass re-checks the key property and rolls itself
//! back rather than apply a breaking change.

use crate::checker::{CheckError, KeyProperty};
use crate::exact::ExactReal;
use crate::graph::UnitGraph;
use crate::sat::Backend;
use crate::symmetry::{orbit_decompose, BaseCoord, PermGroup};

use super::candidates::maximal_independent_sets;
use super::hypergraph::{build_hypergraph, CheckContext};

#[derive(Clone, Debug, Default)]
pub struct RoughOptions {
    /// Keep only vertices with `|v|^2 <=` this bound.
    pub trim_radius_sq: Option<ExactReal>,
    /// Iteratively drop vertices of degree strictly below this.
    pub peel_degree: Option<u32>,
    /// Try deleting whole base orbits, largest first.
    pub orbitwise: bool,
    /// Compute numerical indicators only; the graph is returned unchanged.
    pub indicators_only: bool,
    /// Hypergraph degree used for the indicators (default 2).
    pub indicator_degree: usize,
}

#[derive(Clone, Debug)]
pub struct PassRecord {
    pub name: String,
    pub before: usize,
    pub after: usize,
    pub applied: bool,
}

/// The selection indicators: how many vertices are free, how many
/// hyperedges exist per small degree, and the order of the maximum
/// independent set of the degree-2 conflict graph.
#[derive(Clone, Debug)]
pub struct IndicatorReport {
    pub free_vertices: usize,
    pub hyperedge_counts: Vec<(usize, usize)>,
    pub max_independent_set: usize,
}

#[derive(Debug)]
pub struct RoughReduction {
    pub graph: UnitGraph,
    pub passes: Vec<PassRecord>,
    pub indicators: Option<IndicatorReport>,
}

pub fn rough_reduce(
    g: &UnitGraph,
    kp: &KeyProperty,
    options: &RoughOptions,
    backend: &Backend,
) -> Result<RoughReduction, CheckError> {
    if !kp.check(g, backend)? {
        return Err(CheckError::Invalid("graph does not have the key property".into()));
    }
    if options.indicators_only {
        let degree = options.indicator_degree.max(1);
        let ctx = CheckContext::new(g, kp, backend)?;
        let y = build_hypergraph(&ctx, degree, &PermGroup::trivial(g.vertex_count()))?;
        let fixed: Vec<u32> = y.of_degree(1).map(|e| e[0]).collect();
        let conflict_nodes: Vec<u32> = {
            let mut s: std::collections::BTreeSet<u32> = std::collections::BTreeSet::new();
            for e in y.of_degree(2) {
                s.insert(e[0]);
                s.insert(e[1]);
            }
            s.into_iter().collect()
        };
        let conflict_edges: Vec<(u32, u32)> = y.of_degree(2).map(|e| (e[0], e[1])).collect();
        let free = g.vertex_count()
            - fixed.len()
            - conflict_nodes.iter().filter(|v| !fixed.contains(v)).count();
        let mis_order = if conflict_nodes.is_empty() {
            0
        } else {
            let adjacent = |u: u32, v: u32| {
                conflict_edges
                    .iter()
                    .any(|&(a, b)| (a == u && b == v) || (a == v && b == u))
            };
            let (sets, _) = maximal_independent_sets(&conflict_nodes, adjacent, 100_000);
            sets.iter().map(|s| s.len()).max().unwrap_or(0)
        };
        return Ok(RoughReduction {
            graph: g.clone(),
            passes: vec![],
            indicators: Some(IndicatorReport {
                free_vertices: free,
                hyperedge_counts: y.degree_counts(),
                max_independent_set: mis_order,
            }),
        });
    }

    let mut current = g.clone();
    let mut passes = Vec::new();

    if let Some(r_sq) = &options.trim_radius_sq {
        let trimmed = current.trim(r_sq);
        let applied = trimmed.vertex_count() < current.vertex_count()
            && kp.check(&trimmed, backend)?;
        passes.push(PassRecord {
            name: "trim".into(),
            before: current.vertex_count(),
            after: if applied { trimmed.vertex_count() } else { current.vertex_count() },
            applied,
        });
        if applied {
            current = trimmed;
        }
    }

    if let Some(threshold) = options.peel_degree {
        loop {
            let degrees = current.degrees();
            let doomed: Vec<u32> = (0..current.vertex_count() as u32)
                .filter(|&i| degrees[i as usize] < threshold)
                .collect();
            if doomed.is_empty() {
                break;
            }
            let peeled = current.delete_vertices(&doomed);
            let keeps = kp.check(&peeled, backend)?;
            passes.push(PassRecord {
                name: format!("peel<{threshold}"),
                before: current.vertex_count(),
                after: if keeps { peeled.vertex_count() } else { current.vertex_count() },
                applied: keeps,
            });
            if !keeps {
                break;
            }
            current = peeled;
        }
    }

    if options.orbitwise {
        let lattice: Vec<(u32, BaseCoord)> = lattice_vertices(&current);
        if let Ok(orbits) = orbit_decompose(
            &lattice.iter().map(|(_, c)| *c).collect::<Vec<_>>(),
        ) {
            let mut order: Vec<_> = orbits;
            order.sort_by(|a, b| b.size().cmp(&a.size()));
            for orbit in order {
                let doomed: Vec<u32> = lattice_vertices(&current)
                    .into_iter()
                    .filter(|(_, c)| orbit.contains(c))
                    .map(|(i, _)| i)
                    .collect();
                if doomed.is_empty() || doomed.len() == current.vertex_count() {
                    continue;
                }
                let cut = current.delete_vertices(&doomed);
                let keeps = kp.check(&cut, backend)?;
                passes.push(PassRecord {
                    name: format!("orbit{}", orbit.representative),
                    before: current.vertex_count(),
                    after: if keeps { cut.vertex_count() } else { current.vertex_count() },
                    applied: keeps,
                });
                if keeps {
                    current = cut;
                }
            }
        }
    }

    Ok(RoughReduction { graph: current, passes, indicators: None })
}

/// Vertices expressible in the coordinate lattice, at a common `h`.
pub(crate) fn lattice_vertices(g: &UnitGraph) -> Vec<(u32, BaseCoord)> {
    let raw: Vec<(u32, BaseCoord)> = g
        .vertices()
        .iter()
        .enumerate()
        .filter_map(|(i, p)| BaseCoord::from_point(p).ok().map(|c| (i as u32, c)))
        .collect();
    let h = raw.iter().map(|(_, c)| c.h).max().unwrap_or(1).max(1);
    raw.into_iter()
        .filter_map(|(i, c)| c.with_h(h).map(|c| (i, c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactPoint;
    use crate::graph::construct;

    const EMB: Backend = Backend::Embedded;

    fn moser_with_junk() -> UnitGraph {
        let m = construct("MOSER").unwrap();
        let mut pts: Vec<ExactPoint> = m.vertices().to_vec();
        pts.push(ExactPoint::from_integers(30, 0));
        pts.push(ExactPoint::from_integers(33, 1));
        UnitGraph::from_points(pts)
    }

    #[test]
    fn degree_peel_removes_isolated_vertices() {
        let w = moser_with_junk();
        let kp = KeyProperty::chromatic(3);
        let opts = RoughOptions { peel_degree: Some(1), ..Default::default() };
        let out = rough_reduce(&w, &kp, &opts, &EMB).unwrap();
        assert_eq!(out.graph, construct("MOSER").unwrap());
        assert!(out.passes.iter().all(|p| p.applied));
    }

    #[test]
    fn trim_covering_whole_graph_is_identity() {
        let w = construct("MOSER").unwrap();
        let kp = KeyProperty::chromatic(3);
        let opts = RoughOptions {
            trim_radius_sq: Some(ExactReal::from_integer(100)),
            ..Default::default()
        };
        let out = rough_reduce(&w, &kp, &opts, &EMB).unwrap();
        assert_eq!(out.graph, w);
        // nothing was removed, so the pass reports unapplied
        assert!(!out.passes[0].applied);
    }

    #[test]
    fn destructive_trim_is_rolled_back() {
        let w = construct("MOSER").unwrap();
        let kp = KeyProperty::chromatic(3);
        let opts = RoughOptions {
            trim_radius_sq: Some(ExactReal::ratio(1, 2)),
            ..Default::default()
        };
        let out = rough_reduce(&w, &kp, &opts, &EMB).unwrap();
        assert_eq!(out.graph, w);
        assert!(!out.passes[0].applied);
    }

    #[test]
    fn indicators_score_without_reducing() {
        let w = moser_with_junk();
        let kp = KeyProperty::chromatic(3);
        let opts = RoughOptions {
            indicators_only: true,
            indicator_degree: 1,
            ..Default::default()
        };
        let out = rough_reduce(&w, &kp, &opts, &EMB).unwrap();
        assert_eq!(out.graph, w);
        let ind = out.indicators.unwrap();
        assert_eq!(ind.free_vertices, 2); // the two junk vertices
        assert_eq!(ind.hyperedge_counts, vec![(1, 7)]);
    }
}
