use std::collections::{HashMap, HashSet};

use crate::exact::{ExactPoint, ExactReal, Rotor};
use crate::graph::UnitGraph;

/// A permutation group on graph vertices, stored as the full element list
/// (identity first). Small by construction: elements come from the finite
/// candidate-isometry set, so orders stay within a few dozen.
#[derive(Clone, Debug)]
pub struct PermGroup {
    generators: Vec<Vec<u32>>,
    elements: Vec<Vec<u32>>,
}

impl PermGroup {
    pub fn trivial(n: usize) -> PermGroup {
        let id: Vec<u32> = (0..n as u32).collect();
        PermGroup { generators: Vec::new(), elements: vec![id] }
    }

    /// Close the generator set under composition.
    pub fn from_generators(n: usize, generators: Vec<Vec<u32>>) -> PermGroup {
        let id: Vec<u32> = (0..n as u32).collect();
        let mut elements: Vec<Vec<u32>> = vec![id];
        let mut seen: HashSet<Vec<u32>> = elements.iter().cloned().collect();
        let mut frontier = generators.clone();
        while let Some(p) = frontier.pop() {
            if !seen.insert(p.clone()) {
                continue;
            }
            elements.push(p.clone());
            let snapshot: Vec<Vec<u32>> = elements.clone();
            for q in snapshot {
                frontier.push(compose(&p, &q));
                frontier.push(compose(&q, &p));
            }
        }
        elements.sort();
        // keep identity first
        if let Some(pos) = elements.iter().position(|p| is_identity(p)) {
            elements.swap(0, pos);
        }
        PermGroup { generators, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    pub fn elements(&self) -> &[Vec<u32>] {
        &self.elements
    }

    pub fn degree(&self) -> usize {
        self.elements.first().map_or(0, |p| p.len())
    }
}

fn compose(p: &[u32], q: &[u32]) -> Vec<u32> {
    q.iter().map(|&i| p[i as usize]).collect()
}

fn is_identity(p: &[u32]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i as u32 == x)
}

/// Vertex permutations induced by candidate isometries that map the vertex
/// set onto itself.
///
/// The candidate set is the one the constructions use: the 24 maps
/// `z -> m * f(z)` with `m` a sixth root of unity, `f` in
/// `{id, conj} x {id, conj_sqrt33}`, further composed with `eta^k` for
/// `k` in `-max_eta ..= max_eta`. The result is a subgroup of the full
/// automorphism group (a lower bound, exact for the base-graph family).
pub fn geometric_auts(g: &UnitGraph) -> PermGroup {
    geometric_auts_with(g, 2)
}

pub fn geometric_auts_with(g: &UnitGraph, max_eta: i32) -> PermGroup {
    let n = g.vertex_count();
    if n == 0 {
        return PermGroup::trivial(0);
    }
    let index: HashMap<ExactPoint, u32> = g.point_index();
    let omega = ExactPoint::new(
        ExactReal::ratio(-1, 2),
        ExactReal::sqrt_scaled(num_rational::BigRational::new(1.into(), 2.into()), 3),
    );
    let minus_one = ExactPoint::from_integers(-1, 0);
    // the six sixth-roots of unity: (±1) * ω^j
    let mut multipliers = Vec::new();
    let mut m = ExactPoint::from_integers(1, 0);
    for _ in 0..3 {
        multipliers.push(m.clone());
        multipliers.push(minus_one.mul(&m));
        m = m.mul(&omega);
    }
    let mut perms: Vec<Vec<u32>> = Vec::new();
    for k in -max_eta..=max_eta {
        let eta_k = Rotor::eta_pow(k);
        for mult in &multipliers {
            let factor = eta_k.mul(mult);
            for conj in [false, true] {
                for conj33 in [false, true] {
                    let perm = induced_perm(g, &index, |p| {
                        let mut q = p.clone();
                        if conj {
                            q = q.conj();
                        }
                        if conj33 {
                            q = q.conj_sqrt33();
                        }
                        factor.mul(&q)
                    });
                    if let Some(perm) = perm {
                        if !perms.contains(&perm) {
                            perms.push(perm);
                        }
                    }
                }
            }
        }
    }
    PermGroup::from_generators(n, perms)
}

fn induced_perm(
    g: &UnitGraph,
    index: &HashMap<ExactPoint, u32>,
    map: impl Fn(&ExactPoint) -> ExactPoint,
) -> Option<Vec<u32>> {
    let mut perm = Vec::with_capacity(g.vertex_count());
    let mut hit = vec![false; g.vertex_count()];
    for v in g.vertices() {
        let image = map(v);
        let &i = index.get(&image)?;
        if hit[i as usize] {
            return None;
        }
        hit[i as usize] = true;
        perm.push(i);
    }
    Some(perm)
}

/// Replace each subset with the lexicographically least of its images under
/// the group, then drop duplicates (first occurrence wins, so with the
/// trivial group the input comes back unchanged minus exact duplicates).
pub fn canonicalize_subsets(subsets: &[Vec<u32>], group: &PermGroup) -> Vec<Vec<u32>> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut out = Vec::new();
    for s in subsets {
        let canon = canonical_subset(s, group);
        if seen.insert(canon.clone()) {
            out.push(canon);
        }
    }
    out
}

/// The least image of one subset (subset is sorted in the result).
pub fn canonical_subset(subset: &[u32], group: &PermGroup) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    for perm in group.elements() {
        let mut image: Vec<u32> = subset.iter().map(|&i| perm[i as usize]).collect();
        image.sort_unstable();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
    }
    best.unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{construct, wheel_points};

    #[test]
    fn trivial_graphs() {
        let single = UnitGraph::from_points([ExactPoint::origin()]);
        assert_eq!(geometric_auts(&single).order(), 1);
    }

    #[test]
    fn wheel_group_contains_dihedral() {
        let h = UnitGraph::from_points(wheel_points());
        let group = geometric_auts(&h);
        assert!(group.order() >= 12);
    }

    #[test]
    fn base_graph_sum_has_order_24() {
        let h1 = construct("H^1").unwrap();
        let g = h1.minkowski(&h1);
        assert_eq!(geometric_auts(&g).order(), 24);
    }

    #[test]
    fn canonicalize_under_trivial_group_dedupes_only() {
        let group = PermGroup::trivial(5);
        let subsets = vec![vec![3, 1], vec![0], vec![1, 3]];
        let out = canonicalize_subsets(&subsets, &group);
        assert_eq!(out, vec![vec![1, 3], vec![0]]);
    }

    #[test]
    fn canonical_form_is_invariant_under_group_action() {
        let h = UnitGraph::from_points(wheel_points());
        let group = geometric_auts(&h);
        let subset = vec![0u32, 2, 5];
        let canon = canonical_subset(&subset, &group);
        for perm in group.elements() {
            let image: Vec<u32> = subset.iter().map(|&i| perm[i as usize]).collect();
            assert_eq!(canonical_subset(&image, &group), canon);
        }
        // idempotent
        assert_eq!(canonical_subset(&canon, &group), canon);
    }
}
