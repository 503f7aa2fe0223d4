//! Phase 2 of reduction: candidate deletion sets and the stepwise search
//! for the set of minimal graphs.
//!
//! Deletion sets must hit no hyperedge: degree-1 hyperedge vertices can
//! never be deleted, degree-2 hyperedges forbid deleting both endpoints
//! (so admissible deletions are independent sets of the degree-2 conflict
//! graph), and a set swallowing a higher-degree hyperedge is split into
//! one subset per hyperedge vertex. Free vertices — those in no degree-1
//! or degree-2 hyperedge — can always be deleted and are appended to every
//! candidate. Candidates are checked in order of decreasing size (i.e.
//! increasing subgraph order) and the search stops at the first size that
//! yields survivors.

use std::collections::{BTreeSet, HashSet};

use crate::checker::CheckError;
use crate::graph::UnitGraph;
use crate::symmetry::{canonicalize_subsets, PermGroup};

use super::hypergraph::{CheckContext, Hypergraph};

/// All maximal independent sets of the conflict graph via pivoting
/// Bron–Kerbosch on the complement, capped at `cap` emitted sets.
/// Returns `(sets, truncated)`.
pub fn maximal_independent_sets(
    nodes: &[u32],
    adjacent: impl Fn(u32, u32) -> bool,
    cap: usize,
) -> (Vec<Vec<u32>>, bool) {
    // compatibility = non-adjacency; maximal cliques there are exactly the
    // maximal independent sets of the conflict graph
    let compat: Vec<Vec<bool>> = nodes
        .iter()
        .map(|&u| nodes.iter().map(|&v| u != v && !adjacent(u, v)).collect())
        .collect();
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut truncated = false;
    let all: BTreeSet<usize> = (0..nodes.len()).collect();
    bron_kerbosch(
        &compat,
        BTreeSet::new(),
        all,
        BTreeSet::new(),
        cap,
        &mut out,
        &mut truncated,
        nodes,
    );
    out.sort();
    (out, truncated)
}

#[allow(clippy::too_many_arguments)]
fn bron_kerbosch(
    compat: &[Vec<bool>],
    r: BTreeSet<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    cap: usize,
    out: &mut Vec<Vec<u32>>,
    truncated: &mut bool,
    nodes: &[u32],
) {
    if out.len() >= cap {
        *truncated = true;
        return;
    }
    if p.is_empty() && x.is_empty() {
        let mut set: Vec<u32> = r.iter().map(|&i| nodes[i]).collect();
        set.sort_unstable();
        out.push(set);
        return;
    }
    // pivot: the candidate with the most compatible neighbors in P
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| compat[u][v]).count())
        .unwrap();
    let todo: Vec<usize> = p.iter().copied().filter(|&v| !compat[pivot][v]).collect();
    for v in todo {
        let mut r2 = r.clone();
        r2.insert(v);
        let p2: BTreeSet<usize> = p.iter().copied().filter(|&u| compat[v][u]).collect();
        let x2: BTreeSet<usize> = x.iter().copied().filter(|&u| compat[v][u]).collect();
        bron_kerbosch(compat, r2, p2, x2, cap, out, truncated, nodes);
        p.remove(&v);
        x.insert(v);
        if *truncated {
            return;
        }
    }
}

/// Ordered candidate deletion sets for a working graph of `n` vertices
/// with hypergraph `y`: maximal independent sets of the degree-2 conflict
/// graph, plus all free vertices, split on any swallowed higher-degree
/// hyperedge, largest first, keeping only sets that leave at most
/// `current_min` vertices.
pub fn candidate_deletions(
    n: usize,
    y: &Hypergraph,
    current_min: usize,
    mis_cap: usize,
) -> Vec<Vec<u32>> {
    let fixed: HashSet<u32> = y.of_degree(1).map(|e| e[0]).collect();
    let conflict_edges: Vec<(u32, u32)> = y.of_degree(2).map(|e| (e[0], e[1])).collect();
    let conflict_nodes: Vec<u32> = {
        let mut s: BTreeSet<u32> = BTreeSet::new();
        for &(u, v) in &conflict_edges {
            s.insert(u);
            s.insert(v);
        }
        s.into_iter().collect()
    };
    let adjacent = |u: u32, v: u32| {
        conflict_edges
            .iter()
            .any(|&(a, b)| (a == u && b == v) || (a == v && b == u))
    };
    let free: Vec<u32> = (0..n as u32)
        .filter(|v| !fixed.contains(v) && !conflict_nodes.contains(v))
        .collect();
    let (mis, _truncated) = if conflict_nodes.is_empty() {
        (vec![vec![]], false)
    } else {
        maximal_independent_sets(&conflict_nodes, adjacent, mis_cap)
    };

    // splitting: a set containing a hyperedge of degree >= 3 cannot stand;
    // branch into one subset per hyperedge vertex
    let higher: Vec<&Vec<u32>> = y.edges().iter().filter(|e| e.len() >= 3).collect();
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut done: Vec<Vec<u32>> = Vec::new();
    let mut work: Vec<Vec<u32>> = Vec::new();
    for m in mis {
        let mut set: Vec<u32> = m.into_iter().chain(free.iter().copied()).collect();
        set.sort_unstable();
        if seen.insert(set.clone()) {
            work.push(set);
        }
    }
    while let Some(set) = work.pop() {
        match higher.iter().find(|e| e.iter().all(|v| set.contains(v))) {
            None => done.push(set),
            Some(e) => {
                for &v in e.iter() {
                    let reduced: Vec<u32> = set.iter().copied().filter(|&u| u != v).collect();
                    if seen.insert(reduced.clone()) {
                        work.push(reduced);
                    }
                }
            }
        }
    }
    done.retain(|s| n - s.len() <= current_min);
    done.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    done
}

/// Result of one reduction run.
#[derive(Debug)]
pub struct ReduceOutcome {
    /// All minimum-order subgraphs found, up to the output symmetry group.
    pub set_m: Vec<UnitGraph>,
    /// The corresponding deletion sets.
    pub deletions: Vec<Vec<u32>>,
    /// Order of the graphs in `set_m` (0 when none found).
    pub order: usize,
    /// True when the check budget cut the search off before completion.
    pub truncated: bool,
    /// SAT calls consumed.
    pub checks: usize,
}

/// Phase-2 reduction: walk candidate deletion sets from largest to
/// smallest (subgraph order ascending), stop at the first order with
/// survivors. Candidates at each step are deduplicated under the output
/// symmetry group before checking; a step that would exceed the remaining
/// check budget truncates the search with a flag, never silently.
pub fn reduce(
    ctx: &CheckContext,
    y: &Hypergraph,
    current_min: usize,
    output_group: &PermGroup,
    check_budget: usize,
    mis_cap: usize,
) -> Result<ReduceOutcome, CheckError> {
    let n = ctx.w.vertex_count();
    let candidates = candidate_deletions(n, y, current_min, mis_cap);
    let start_calls = ctx.sat_calls();
    let mut idx = 0usize;
    let mut truncated = false;
    let mut set_m: Vec<UnitGraph> = Vec::new();
    let mut deletions: Vec<Vec<u32>> = Vec::new();
    let mut order = 0usize;
    while idx < candidates.len() {
        let size = candidates[idx].len();
        let mut step: Vec<Vec<u32>> = Vec::new();
        while idx < candidates.len() && candidates[idx].len() == size {
            step.push(candidates[idx].clone());
            idx += 1;
        }
        let step = canonicalize_subsets(&step, output_group);
        let used = ctx.sat_calls() - start_calls;
        if used + step.len() > check_budget {
            truncated = true;
            break;
        }
        let verdicts = ctx.check_all(&step)?;
        let keepers: Vec<Vec<u32>> = step
            .into_iter()
            .zip(verdicts)
            .filter(|(_, kept)| *kept)
            .map(|(s, _)| s)
            .collect();
        if !keepers.is_empty() {
            order = n - size;
            for s in keepers {
                set_m.push(ctx.w.delete_vertices(&s));
                deletions.push(s);
            }
            break;
        }
    }
    Ok(ReduceOutcome {
        set_m,
        deletions,
        order,
        truncated,
        checks: ctx.sat_calls() - start_calls,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::KeyProperty;
    use crate::graph::construct;
    use crate::oracle;
    use crate::sat::Backend;

    const EMB: Backend = Backend::Embedded;

    #[test]
    fn mis_of_single_edge() {
        let nodes = vec![0u32, 1];
        let (sets, truncated) = maximal_independent_sets(&nodes, |_, _| true, 100);
        assert!(!truncated);
        assert_eq!(sets, vec![vec![0], vec![1]]);
    }

    #[test]
    fn mis_of_path_of_three() {
        // conflicts 0-1, 1-2: MIS are {0,2} and {1}
        let nodes = vec![0u32, 1, 2];
        let adj = |u: u32, v: u32| matches!((u.min(v), u.max(v)), (0, 1) | (1, 2));
        let (sets, _) = maximal_independent_sets(&nodes, adj, 100);
        assert_eq!(sets, vec![vec![0, 2], vec![1]]);
    }

    #[test]
    fn candidates_from_single_conflict_edge() {
        // W = {u, v, w}; hyperedges: degree-2 {u, v}; w free
        let mut y = Hypergraph::new(3);
        y.insert(vec![0, 1]);
        let cands = candidate_deletions(3, &y, 3, 1000);
        assert_eq!(cands, vec![vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn degree_1_vertices_are_never_deleted() {
        let mut y = Hypergraph::new(3);
        y.insert(vec![0]);
        y.insert(vec![1]);
        y.insert(vec![2]);
        // everything fixed: only the empty deletion remains
        let cands = candidate_deletions(3, &y, 3, 1000);
        assert_eq!(cands, vec![Vec::<u32>::new()]);
        // with a tight current_min the empty deletion is discarded too
        let cands = candidate_deletions(3, &y, 2, 1000);
        assert!(cands.is_empty());
    }

    #[test]
    fn splitting_respects_higher_degree_edges() {
        // 5 vertices, one degree-3 hyperedge {0,1,2}, all free otherwise
        let mut y = Hypergraph::new(5);
        y.insert(vec![0, 1, 2]);
        let cands = candidate_deletions(5, &y, 5, 1000);
        // the full set splits into three 4-sets, each missing one of 0,1,2
        assert_eq!(cands.len(), 3);
        for s in &cands {
            assert_eq!(s.len(), 4);
            assert!(!(s.contains(&0) && s.contains(&1) && s.contains(&2)));
            assert!(s.contains(&3) && s.contains(&4));
        }
    }

    #[test]
    fn reduce_recovers_moser_from_noise() {
        let m = construct("MOSER").unwrap();
        let mut pts: Vec<crate::exact::ExactPoint> = m.vertices().to_vec();
        for i in 0..3 {
            pts.push(crate::exact::ExactPoint::from_integers(40 + 2 * i, 7));
        }
        let w = UnitGraph::from_points(pts);
        let kp = KeyProperty::chromatic(3);
        let ctx = CheckContext::new(&w, &kp, &EMB).unwrap();
        let trivial = PermGroup::trivial(w.vertex_count());
        let y = super::super::hypergraph::build_hypergraph(&ctx, 2, &trivial).unwrap();
        let outcome = reduce(&ctx, &y, w.vertex_count(), &trivial, 1_000_000, 1000).unwrap();
        assert!(!outcome.truncated);
        assert_eq!(outcome.order, 7);
        assert_eq!(outcome.set_m.len(), 1);
        assert_eq!(outcome.set_m[0], m);
        // oracle agreement
        let (oracle_order, oracle_sets) = oracle::brute_force_minimum_uncolorable(&w, 3).unwrap();
        assert_eq!(oracle_order, 7);
        assert_eq!(oracle_sets.len(), 1);
    }

    #[test]
    fn already_minimal_graph_returns_itself() {
        let m = construct("MOSER").unwrap();
        let kp = KeyProperty::chromatic(3);
        let ctx = CheckContext::new(&m, &kp, &EMB).unwrap();
        let trivial = PermGroup::trivial(7);
        let y = super::super::hypergraph::build_hypergraph(&ctx, 1, &trivial).unwrap();
        let outcome = reduce(&ctx, &y, 7, &trivial, 1000, 1000).unwrap();
        assert_eq!(outcome.order, 7);
        assert_eq!(outcome.set_m, vec![m]);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let m = construct("MOSER").unwrap();
        let mut pts: Vec<crate::exact::ExactPoint> = m.vertices().to_vec();
        pts.push(crate::exact::ExactPoint::from_integers(40, 7));
        pts.push(crate::exact::ExactPoint::from_integers(44, 7));
        let w = UnitGraph::from_points(pts);
        let kp = KeyProperty::chromatic(3);
        let ctx = CheckContext::new(&w, &kp, &EMB).unwrap();
        let trivial = PermGroup::trivial(w.vertex_count());
        let y = super::super::hypergraph::build_hypergraph(&ctx, 1, &trivial).unwrap();
        let outcome = reduce(&ctx, &y, w.vertex_count(), &trivial, 0, 1000).unwrap();
        assert!(outcome.truncated);
        assert!(outcome.set_m.is_empty());
    }
}
