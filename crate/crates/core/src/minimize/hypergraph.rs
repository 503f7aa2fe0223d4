//! Phase 1 of reduction: the critical-relationship hypergraph.
//!
//! A hyperedge of degree `n` is a minimal set of `n` working-graph
//! vertices whose joint deletion loses the key property. Hyperedges are
//! sought stepwise by degree; a candidate containing a known lower-degree
//! hyperedge is never tested (its verdict is implied), which also makes
//! the result minimal by construction.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::checker::{CheckError, KeyProperty};
use crate::graph::UnitGraph;
use crate::sat::{solve, Backend, SplitFormula, Verdict};
use crate::symmetry::{canonicalize_subsets, PermGroup};

/// The relationships hypergraph `Y` over working-graph vertex indices.
#[derive(Clone, Debug, Default)]
pub struct Hypergraph {
    universe: usize,
    /// Sorted vertex sets, ordered by (degree, lex).
    edges: Vec<Vec<u32>>,
}

impl Hypergraph {
    pub fn new(universe: usize) -> Hypergraph {
        Hypergraph { universe, edges: Vec::new() }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn of_degree(&self, d: usize) -> impl Iterator<Item = &Vec<u32>> {
        self.edges.iter().filter(move |e| e.len() == d)
    }

    pub fn max_degree(&self) -> usize {
        self.edges.iter().map(|e| e.len()).max().unwrap_or(0)
    }

    pub fn degree_counts(&self) -> Vec<(usize, usize)> {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for e in &self.edges {
            *counts.entry(e.len()).or_default() += 1;
        }
        let mut out: Vec<(usize, usize)> = counts.into_iter().collect();
        out.sort_unstable();
        out
    }

    pub fn insert(&mut self, mut edge: Vec<u32>) {
        edge.sort_unstable();
        edge.dedup();
        if !self.edges.contains(&edge) {
            self.edges.push(edge);
            self.edges.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        }
    }

    pub fn contains_subedge_of(&self, set: &[u32]) -> bool {
        self.edges.iter().any(|e| e.iter().all(|v| set.contains(v)))
    }

    /// No hyperedge contains another.
    pub fn is_minimal(&self) -> bool {
        for (i, e) in self.edges.iter().enumerate() {
            for f in &self.edges[i + 1..] {
                if e.iter().all(|v| f.contains(v)) || f.iter().all(|v| e.contains(v)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Shared state for key-property checks over subgraphs of one working
/// graph: the split formula, the solve backend, and a memo table keyed by
/// the sorted deleted-vertex set.
///
/// No symmetry-breaking clauses are added here: breaking pins colors of
/// concrete vertices, which is unsound once those vertices can be deleted.
pub struct CheckContext<'a> {
    pub w: &'a UnitGraph,
    pub kp: &'a KeyProperty,
    pub backend: &'a Backend,
    split: SplitFormula,
    /// Working-graph index -> index in the realized union graph.
    w_to_union: Vec<u32>,
    cache: Mutex<HashMap<Vec<u32>, bool>>,
    sat_calls: AtomicUsize,
}

impl<'a> CheckContext<'a> {
    pub fn new(
        w: &'a UnitGraph,
        kp: &'a KeyProperty,
        backend: &'a Backend,
    ) -> Result<CheckContext<'a>, CheckError> {
        let realized = kp.realize(w)?;
        let w_to_union = w
            .vertices()
            .iter()
            .map(|p| realized.graph.index_of(p).expect("union contains working graph"))
            .collect();
        let split = kp.split_formula(w)?;
        Ok(CheckContext {
            w,
            kp,
            backend,
            split,
            w_to_union,
            cache: Mutex::new(HashMap::new()),
            sat_calls: AtomicUsize::new(0),
        })
    }

    pub fn sat_calls(&self) -> usize {
        self.sat_calls.load(Ordering::Relaxed)
    }

    fn solve_deleted(&self, deleted: &[u32]) -> Result<bool, CheckError> {
        let mut gone = vec![false; self.w.vertex_count()];
        for &i in deleted {
            gone[i as usize] = true;
        }
        let surviving: Vec<u32> = (0..self.w.vertex_count())
            .filter(|&i| !gone[i])
            .map(|i| self.w_to_union[i])
            .collect();
        let f = self.split.formula_for(&surviving);
        self.sat_calls.fetch_add(1, Ordering::Relaxed);
        match solve(&f, self.backend)? {
            Verdict::Sat(_) => Ok(false), // colorable: property lost
            Verdict::Unsat => Ok(true),   // property kept
        }
    }

    /// Does deleting this vertex set keep the key property? Memoized.
    pub fn deletion_keeps_property(&self, deleted: &[u32]) -> Result<bool, CheckError> {
        let mut key = deleted.to_vec();
        key.sort_unstable();
        key.dedup();
        if let Some(&v) = self.cache.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let v = self.solve_deleted(&key)?;
        self.cache.lock().unwrap().insert(key, v);
        Ok(v)
    }

    /// Check many deletion sets in parallel. Each distinct uncached set is
    /// solved exactly once, so SAT-call counts are run-to-run stable.
    pub fn check_all(&self, sets: &[Vec<u32>]) -> Result<Vec<bool>, CheckError> {
        let mut keys: Vec<Vec<u32>> = Vec::with_capacity(sets.len());
        let mut todo: Vec<Vec<u32>> = Vec::new();
        {
            let cache = self.cache.lock().unwrap();
            let mut queued: HashMap<Vec<u32>, ()> = HashMap::new();
            for s in sets {
                let mut key = s.clone();
                key.sort_unstable();
                key.dedup();
                if !cache.contains_key(&key) && queued.insert(key.clone(), ()).is_none() {
                    todo.push(key.clone());
                }
                keys.push(key);
            }
        }
        let solved: Vec<(Vec<u32>, Result<bool, CheckError>)> = todo
            .into_par_iter()
            .map(|key| {
                let r = self.solve_deleted(&key);
                (key, r)
            })
            .collect();
        {
            let mut cache = self.cache.lock().unwrap();
            for (key, r) in solved {
                cache.insert(key, r?);
            }
        }
        let cache = self.cache.lock().unwrap();
        Ok(keys.iter().map(|k| cache[k]).collect())
    }
}

/// 8-4-2-1 batching: test the union of up to eight deletion sets at once;
/// a kept property certifies every member at a single call, a lost one
/// splits the group in half, ending with individual checks. Verdicts are
/// identical to a per-set loop; `true` means the set is critical (its
/// deletion loses the property).
pub fn batch_8421(ctx: &CheckContext, sets: &[Vec<u32>]) -> Result<Vec<bool>, CheckError> {
    let mut out = vec![false; sets.len()];
    let indices: Vec<usize> = (0..sets.len()).collect();
    for chunk in indices.chunks(8) {
        batch_rec(ctx, sets, chunk, &mut out)?;
    }
    Ok(out)
}

fn batch_rec(
    ctx: &CheckContext,
    sets: &[Vec<u32>],
    group: &[usize],
    out: &mut [bool],
) -> Result<(), CheckError> {
    if group.is_empty() {
        return Ok(());
    }
    let union: Vec<u32> = {
        let mut u: Vec<u32> = group.iter().flat_map(|&i| sets[i].iter().copied()).collect();
        u.sort_unstable();
        u.dedup();
        u
    };
    if ctx.deletion_keeps_property(&union)? {
        // deleting even the union keeps the property; by monotonicity every
        // member set is non-critical
        for &i in group {
            out[i] = false;
        }
        return Ok(());
    }
    if group.len() == 1 {
        // the union IS the single set
        out[group[0]] = true;
        return Ok(());
    }
    let mid = group.len().div_ceil(2);
    batch_rec(ctx, sets, &group[..mid], out)?;
    batch_rec(ctx, sets, &group[mid..], out)
}

/// Build the hypergraph up to `max_degree`, deduplicating candidates under
/// the given property-preserving symmetry group (verdicts of the canonical
/// representatives are expanded back to their full orbits).
pub fn build_hypergraph(
    ctx: &CheckContext,
    max_degree: usize,
    group: &PermGroup,
) -> Result<Hypergraph, CheckError> {
    if !ctx.deletion_keeps_property(&[])? {
        return Err(CheckError::Invalid("working graph does not have the key property".into()));
    }
    let n = ctx.w.vertex_count();
    let mut y = Hypergraph::new(n);
    for degree in 1..=max_degree {
        let all = crate::oracle::subsets_of_size(n, degree);
        let viable: Vec<Vec<u32>> =
            all.into_iter().filter(|s| !y.contains_subedge_of(s)).collect();
        let canonical = canonicalize_subsets(&viable, group);
        let verdicts = batch_8421(ctx, &canonical)?;
        for (set, critical) in canonical.iter().zip(verdicts) {
            if critical {
                // the whole orbit of a critical set is critical
                for perm in group.elements() {
                    let image: Vec<u32> = set.iter().map(|&v| perm[v as usize]).collect();
                    y.insert(image);
                }
            }
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct;
    use crate::oracle;

    const EMB: Backend = Backend::Embedded;

    fn moser_plus_isolated(count: usize) -> UnitGraph {
        let m = construct("MOSER").unwrap();
        let mut pts: Vec<crate::exact::ExactPoint> = m.vertices().to_vec();
        for i in 0..count {
            pts.push(crate::exact::ExactPoint::from_integers(50 + 3 * i as i64, 0));
        }
        UnitGraph::from_points(pts)
    }

    #[test]
    fn moser_singletons_are_all_critical() {
        let g = construct("MOSER").unwrap();
        let kp = KeyProperty::chromatic(3);
        let ctx = CheckContext::new(&g, &kp, &EMB).unwrap();
        let group = PermGroup::trivial(7);
        let y = build_hypergraph(&ctx, 1, &group).unwrap();
        assert_eq!(y.of_degree(1).count(), 7);
        assert!(y.is_minimal());
    }

    #[test]
    fn isolated_vertices_join_no_degree_1_edge() {
        let g = moser_plus_isolated(2);
        let kp = KeyProperty::chromatic(3);
        let ctx = CheckContext::new(&g, &kp, &EMB).unwrap();
        let y = build_hypergraph(&ctx, 1, &PermGroup::trivial(g.vertex_count())).unwrap();
        assert_eq!(y.of_degree(1).count(), 7);
        let moser_indices: Vec<u32> = g
            .vertices()
            .iter()
            .enumerate()
            .filter(|(_, p)| p.to_f64().0 < 10.0)
            .map(|(i, _)| i as u32)
            .collect();
        for e in y.of_degree(1) {
            assert!(moser_indices.contains(&e[0]));
        }
    }

    #[test]
    fn hypergraph_matches_exhaustive_oracle_to_degree_2() {
        let g = moser_plus_isolated(2);
        let kp = KeyProperty::chromatic(3);
        let ctx = CheckContext::new(&g, &kp, &EMB).unwrap();
        let y = build_hypergraph(&ctx, 2, &PermGroup::trivial(g.vertex_count())).unwrap();
        // oracle: all minimal critical sets of size <= 2 by brute force
        let n = g.vertex_count();
        let mut expected: Vec<Vec<u32>> = Vec::new();
        for s in oracle::subsets_of_size(n, 1) {
            let sub = g.delete_vertices(&s);
            if oracle::brute_force_k_colorable(&sub, 3) {
                expected.push(s);
            }
        }
        for s in oracle::subsets_of_size(n, 2) {
            if expected.iter().any(|e| e.iter().all(|v| s.contains(v))) {
                continue;
            }
            let sub = g.delete_vertices(&s);
            if oracle::brute_force_k_colorable(&sub, 3) {
                expected.push(s);
            }
        }
        expected.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        assert_eq!(y.edges(), expected.as_slice());
        // soundness re-verification: deleting each hyperedge loses the property
        for e in y.edges() {
            assert!(!ctx.deletion_keeps_property(e).unwrap());
        }
    }

    #[test]
    fn batching_equals_naive_loop() {
        use rand::{Rng, SeedableRng};
        let g = moser_plus_isolated(3);
        let kp = KeyProperty::chromatic(3);
        let n = g.vertex_count();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let sets: Vec<Vec<u32>> = (0..64)
            .map(|_| {
                let size = rng.gen_range(1..=3usize);
                let mut s: Vec<u32> = Vec::new();
                while s.len() < size {
                    let v = rng.gen_range(0..n as u32);
                    if !s.contains(&v) {
                        s.push(v);
                    }
                }
                s.sort_unstable();
                s
            })
            .collect();
        // batched verdicts
        let ctx = CheckContext::new(&g, &kp, &EMB).unwrap();
        let batched = batch_8421(&ctx, &sets).unwrap();
        // naive loop on a fresh context (separate cache)
        let ctx2 = CheckContext::new(&g, &kp, &EMB).unwrap();
        let naive: Vec<bool> = sets
            .iter()
            .map(|s| Ok::<bool, CheckError>(!ctx2.deletion_keeps_property(s)?))
            .collect::<Result<_, _>>()
            .unwrap();
        assert_eq!(batched, naive);
    }

    #[test]
    fn single_set_uses_one_check() {
        let g = construct("MOSER").unwrap();
        let kp = KeyProperty::chromatic(3);
        let ctx = CheckContext::new(&g, &kp, &EMB).unwrap();
        let sets = vec![vec![0u32]];
        let _ = batch_8421(&ctx, &sets).unwrap();
        assert_eq!(ctx.sat_calls(), 1);
    }

    #[test]
    fn hypergraph_requires_the_property() {
        let g = construct("H").unwrap(); // 3-colorable: no property at k=3
        let kp = KeyProperty::chromatic(3);
        let ctx = CheckContext::new(&g, &kp, &EMB).unwrap();
        assert!(matches!(
            build_hypergraph(&ctx, 1, &PermGroup::trivial(7)),
            Err(CheckError::Invalid(_))
        ));
    }
}
