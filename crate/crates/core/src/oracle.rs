//! Brute-force reference implementations used as independent ground truth.
//!
//! Everything here recomputes results from first principles — exhaustive
//! pair scans, exhaustive colorings with backtracking, exhaustive subgraph
//! enumeration — and shares no code with the fast paths it is used to
//! check. Only viable at desk scale (roughly 15 vertices and below for the
//! coloring searches).

use crate::graph::UnitGraph;

/// Exhaustive proper-k-coloring search by backtracking over vertices in
/// index order. Returns a witness coloring if one exists.
pub fn brute_force_coloring(g: &UnitGraph, k: u32) -> Option<Vec<u32>> {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut colors = vec![u32::MAX; n];
    fn go(v: usize, n: usize, k: u32, adj: &[Vec<u32>], colors: &mut Vec<u32>) -> bool {
        if v == n {
            return true;
        }
        'next: for c in 0..k {
            for &u in &adj[v] {
                if (u as usize) < v && colors[u as usize] == c {
                    continue 'next;
                }
            }
            colors[v] = c;
            if go(v + 1, n, k, adj, colors) {
                return true;
            }
        }
        colors[v] = u32::MAX;
        false
    }
    if go(0, n, k, &adj, &mut colors) {
        Some(colors)
    } else {
        None
    }
}

pub fn brute_force_k_colorable(g: &UnitGraph, k: u32) -> bool {
    brute_force_coloring(g, k).is_some()
}

pub fn brute_force_chromatic(g: &UnitGraph, k_max: u32) -> Option<u32> {
    (1..=k_max).find(|&k| brute_force_k_colorable(g, k))
}

/// Visit every proper k-coloring (not just one), calling `f` on each.
/// Stops early when `f` returns `false`.
pub fn for_each_proper_coloring(g: &UnitGraph, k: u32, mut f: impl FnMut(&[u32]) -> bool) {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut colors = vec![u32::MAX; n];
    fn go(
        v: usize,
        n: usize,
        k: u32,
        adj: &[Vec<u32>],
        colors: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32]) -> bool,
        stop: &mut bool,
    ) {
        if *stop {
            return;
        }
        if v == n {
            if !f(colors) {
                *stop = true;
            }
            return;
        }
        'next: for c in 0..k {
            for &u in &adj[v] {
                if (u as usize) < v && colors[u as usize] == c {
                    continue 'next;
                }
            }
            colors[v] = c;
            go(v + 1, n, k, adj, colors, f, stop);
            if *stop {
                return;
            }
        }
        colors[v] = u32::MAX;
    }
    let mut stop = false;
    go(0, n, k, &adj, &mut colors, &mut f, &mut stop);
}

/// Are the two vertices equal-colored in every proper k-coloring?
/// Vacuously true on an uncolorable graph; callers decide how to treat that.
pub fn brute_force_mono_pair(g: &UnitGraph, u: u32, v: u32, k: u32) -> bool {
    let mut mono = true;
    for_each_proper_coloring(g, k, |colors| {
        if colors[u as usize] != colors[v as usize] {
            mono = false;
            return false;
        }
        true
    });
    mono
}

/// Can the set be monochromatic in some proper k-coloring?
pub fn brute_force_can_be_mono(g: &UnitGraph, set: &[u32], k: u32) -> bool {
    let mut possible = false;
    for_each_proper_coloring(g, k, |colors| {
        let c0 = colors[set[0] as usize];
        if set.iter().all(|&v| colors[v as usize] == c0) {
            possible = true;
            return false;
        }
        true
    });
    possible
}

/// All subsets of `0..n` of the given size, in lexicographic order.
pub fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(size);
    fn go(start: usize, n: usize, size: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if current.len() == size {
            out.push(current.clone());
            return;
        }
        let needed = size - current.len();
        for v in start..=(n.saturating_sub(needed)) {
            current.push(v as u32);
            go(v + 1, n, size, current, out);
            current.pop();
        }
    }
    go(0, n, size, &mut current, &mut out);
    out
}

/// Smallest induced subgraphs that are NOT k-colorable, found by exhaustive
/// enumeration in increasing order: returns `(order, all such vertex sets)`
/// or `None` if even the full graph is k-colorable.
pub fn brute_force_minimum_uncolorable(
    g: &UnitGraph,
    k: u32,
) -> Option<(usize, Vec<Vec<u32>>)> {
    let n = g.vertex_count();
    if brute_force_k_colorable(g, k) {
        return None;
    }
    for order in 1..=n {
        let mut found = Vec::new();
        for subset in subsets_of_size(n, order) {
            let sub = induced(g, &subset);
            if !brute_force_k_colorable(&sub, k) {
                found.push(subset);
            }
        }
        if !found.is_empty() {
            return Some((order, found));
        }
    }
    None
}

/// The strict graph induced on a vertex subset.
pub fn induced(g: &UnitGraph, subset: &[u32]) -> UnitGraph {
    UnitGraph::from_points(subset.iter().map(|&i| g.vertices()[i as usize].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct;

    #[test]
    fn triangle_colorings() {
        let g = construct("H").unwrap();
        assert!(brute_force_k_colorable(&g, 3));
        // pick any triangle: an edge (i, j) plus a common neighbor
        let tri = g
            .edges()
            .iter()
            .find_map(|&(i, j)| {
                (0..g.vertex_count() as u32)
                    .find(|&v| v != i && v != j && g.has_edge(v, i) && g.has_edge(v, j))
                    .map(|v| induced(&g, &[i, j, v]))
            })
            .unwrap();
        assert_eq!(tri.edge_count(), 3);
        assert!(!brute_force_k_colorable(&tri, 2));
        assert_eq!(brute_force_chromatic(&tri, 5), Some(3));
    }

    #[test]
    fn moser_is_4_chromatic() {
        let g = construct("MOSER").unwrap();
        assert_eq!(brute_force_chromatic(&g, 6), Some(4));
    }

    #[test]
    fn subset_enumeration_counts() {
        assert_eq!(subsets_of_size(5, 2).len(), 10);
        assert_eq!(subsets_of_size(4, 4).len(), 1);
        assert_eq!(subsets_of_size(3, 0).len(), 1);
    }

    #[test]
    fn minimum_uncolorable_of_moser_is_itself() {
        let g = construct("MOSER").unwrap();
        let (order, sets) = brute_force_minimum_uncolorable(&g, 3).unwrap();
        assert_eq!(order, 7);
        assert_eq!(sets, vec![(0..7).collect::<Vec<u32>>()]);
    }
}
