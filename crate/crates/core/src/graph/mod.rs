//! Strict unit-distance graphs and the operations that build them.
//!
//! A [`UnitGraph`] is determined entirely by its vertex point set: the edge
//! set is *strict*, i.e. contains exactly the pairs at Euclidean distance 1.
//! Every operation therefore works on point sets and recomputes edges from
//! scratch through [`UnitGraph::from_points`].

mod expr;
mod typem;

pub use expr::{construct, GraphExpr, ParseExprError, Scalar};
pub use typem::{
    assemble_type_m, auxiliary_orbit_points, classify_m_subtype, reference_orbit_points,
    MConnectionReport, MSubtype, TypeMError,
};

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::exact::{ExactPoint, ExactReal};

/// A strict unit-distance graph: deduplicated vertices in canonical order
/// and the complete set of unit-distance index pairs `(i, j)` with `i < j`.
///
/// Canonical vertex order is by squared distance from the origin, ties
/// broken by the textual form of the point, so identical point sets always
/// produce identical structures.
#[derive(Clone, PartialEq, Eq)]
pub struct UnitGraph {
    vertices: Vec<ExactPoint>,
    edges: Vec<(u32, u32)>,
}

/// Half-width of the floating shortlist window around squared distance 1.
/// Candidates inside the window are confirmed exactly, so this only has to
/// be large enough to never miss a true unit pair (f64 error on these
/// coordinates is ~1e-12).
const SHORTLIST_EPS: f64 = 1e-6;

impl UnitGraph {
    /// Build the strict graph on the given points: deduplicate by exact
    /// equality, sort canonically, and compute every unit-distance pair.
    ///
    /// Candidate pairs are shortlisted with a spatial hash on f64
    /// approximations and each candidate is confirmed exactly; see
    /// [`UnitGraph::strict_edges_audit`] for the slow all-pairs check.
    pub fn from_points(points: impl IntoIterator<Item = ExactPoint>) -> UnitGraph {
        let mut seen: HashMap<ExactPoint, ()> = HashMap::new();
        let mut unique = Vec::new();
        for p in points {
            if seen.insert(p.clone(), ()).is_none() {
                unique.push(p);
            }
        }
        let mut keyed: Vec<(ExactReal, String, ExactPoint)> = unique
            .into_iter()
            .map(|p| (p.norm_sq(), p.to_string(), p))
            .collect();
        keyed.sort_by(|a, b| cmp_radius(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));
        let vertices: Vec<ExactPoint> = keyed.into_iter().map(|(_, _, p)| p).collect();
        let edges = shortlisted_edges(&vertices);
        UnitGraph { vertices, edges }
    }

    pub fn empty() -> UnitGraph {
        UnitGraph { vertices: Vec::new(), edges: Vec::new() }
    }

    pub fn vertices(&self) -> &[ExactPoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Index of an exact point, if present.
    pub fn index_of(&self, p: &ExactPoint) -> Option<u32> {
        // Vertices are few enough that a scan beats building a map for the
        // common one-off lookups; hot paths build their own index.
        self.vertices.iter().position(|v| v == p).map(|i| i as u32)
    }

    pub fn point_index(&self) -> HashMap<ExactPoint, u32> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect()
    }

    pub fn contains(&self, p: &ExactPoint) -> bool {
        self.index_of(p).is_some()
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut deg = vec![0u32; self.vertices.len()];
        for &(i, j) in &self.edges {
            deg[i as usize] += 1;
            deg[j as usize] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for &(i, j) in &self.edges {
            adj[i as usize].push(j);
            adj[j as usize].push(i);
        }
        adj
    }

    pub fn has_edge(&self, i: u32, j: u32) -> bool {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges.binary_search(&key).is_ok()
    }

    /// Minkowski sum: the strict graph on all pairwise vertex sums.
    pub fn minkowski(&self, other: &UnitGraph) -> UnitGraph {
        UnitGraph::from_points(
            self.vertices
                .iter()
                .flat_map(|a| other.vertices.iter().map(move |b| a + b)),
        )
    }

    /// Union of vertex sets (edges recomputed).
    pub fn union(&self, other: &UnitGraph) -> UnitGraph {
        UnitGraph::from_points(self.vertices.iter().chain(other.vertices.iter()).cloned())
    }

    /// Keep exactly the vertices with `|v|^2 <= r_sq`.
    pub fn trim(&self, r_sq: &ExactReal) -> UnitGraph {
        UnitGraph::from_points(
            self.vertices
                .iter()
                .filter(|v| (&v.norm_sq() - r_sq).signum() <= 0)
                .cloned(),
        )
    }

    /// The strict graph on all vertices except the given indices.
    pub fn delete_vertices(&self, deleted: &[u32]) -> UnitGraph {
        let mut keep = vec![true; self.vertices.len()];
        for &i in deleted {
            keep[i as usize] = false;
        }
        UnitGraph::from_points(
            self.vertices
                .iter()
                .enumerate()
                .filter(|(i, _)| keep[*i])
                .map(|(_, p)| p.clone()),
        )
    }

    /// Apply a point map to every vertex (edges recomputed).
    pub fn map_points(&self, f: impl Fn(&ExactPoint) -> ExactPoint) -> UnitGraph {
        UnitGraph::from_points(self.vertices.iter().map(f))
    }

    /// Exact all-pairs edge scan, for auditing the shortlist path. Quadratic.
    pub fn strict_edges_audit(&self) -> Vec<(u32, u32)> {
        let n = self.vertices.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.vertices[i].is_unit(&self.vertices[j]) {
                    edges.push((i as u32, j as u32));
                }
            }
        }
        edges
    }

    /// Squared radii of all vertices, in vertex order.
    pub fn radii_sq(&self) -> Vec<ExactReal> {
        self.vertices.iter().map(|v| v.norm_sq()).collect()
    }
}

/// Compare two squared radii, cheap interval first, exact on overlap.
fn cmp_radius(a: &ExactReal, b: &ExactReal) -> std::cmp::Ordering {
    if a == b {
        return std::cmp::Ordering::Equal;
    }
    let fa = a.to_f64();
    let fb = b.to_f64();
    if (fa - fb).abs() > 1e-9 * (1.0 + fa.abs().max(fb.abs())) {
        return fa.partial_cmp(&fb).unwrap();
    }
    a.cmp_exact(b)
}

fn shortlisted_edges(vertices: &[ExactPoint]) -> Vec<(u32, u32)> {
    let approx: Vec<(f64, f64)> = vertices.iter().map(|p| p.to_f64()).collect();
    let mut grid: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
    for (i, &(x, y)) in approx.iter().enumerate() {
        grid.entry((x.floor() as i64, y.floor() as i64))
            .or_default()
            .push(i as u32);
    }
    let lo = 1.0 - 3.0 * SHORTLIST_EPS;
    let hi = 1.0 + 3.0 * SHORTLIST_EPS;
    let one = ExactReal::one();
    let mut edges: Vec<(u32, u32)> = (0..vertices.len() as u32)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (x, y) = approx[i as usize];
            let (cx, cy) = (x.floor() as i64, y.floor() as i64);
            let mut found = Vec::new();
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(cell) = grid.get(&(cx + dx, cy + dy)) {
                        for &j in cell {
                            if j <= i {
                                continue;
                            }
                            let (xj, yj) = approx[j as usize];
                            let d2 = (x - xj) * (x - xj) + (y - yj) * (y - yj);
                            if d2 >= lo
                                && d2 <= hi
                                && vertices[i as usize].dist_sq(&vertices[j as usize]) == one
                            {
                                found.push((i, j));
                            }
                        }
                    }
                }
            }
            found.sort_unstable();
            found
        })
        .collect();
    edges.sort_unstable();
    edges
}

impl fmt::Debug for UnitGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitGraph({} vertices, {} edges)", self.vertex_count(), self.edge_count())
    }
}

/// The seven named wheel points: center, `(+-1, 0)`, `(+-1/2, +-sqrt3/2)`.
pub fn wheel_points() -> Vec<ExactPoint> {
    let half = ExactReal::ratio(1, 2);
    let rt3_half = ExactReal::sqrt_scaled(num_rational::BigRational::new(1.into(), 2.into()), 3);
    vec![
        ExactPoint::origin(),
        ExactPoint::from_integers(1, 0),
        ExactPoint::from_integers(-1, 0),
        ExactPoint::new(half.clone(), rt3_half.clone()),
        ExactPoint::new(half.clone(), -&rt3_half),
        ExactPoint::new(-&half, rt3_half.clone()),
        ExactPoint::new(-&half, -&rt3_half),
    ]
}

/// The unit rhombus `{0, a, b, a+b}` with `a = (sqrt3/2, 1/2)` and
/// `b = (sqrt3/2, -1/2)`: unit sides, tips `0` and `a+b` at distance
/// `sqrt(3)`. Two of these joined at the origin with an `eta^2` rotation
/// make the seven-vertex spindle.
pub fn rhombus_points() -> Vec<ExactPoint> {
    let half = ExactReal::ratio(1, 2);
    let rt3_half = ExactReal::sqrt_scaled(num_rational::BigRational::new(1.into(), 2.into()), 3);
    let a = ExactPoint::new(rt3_half.clone(), half.clone());
    let b = ExactPoint::new(rt3_half, -&half);
    let tip = &a + &b;
    vec![ExactPoint::origin(), a, b, tip]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Rotor;

    #[test]
    fn wheel_has_seven_vertices_twelve_edges() {
        let h = UnitGraph::from_points(wheel_points());
        assert_eq!(h.vertex_count(), 7);
        assert_eq!(h.edge_count(), 12);
        assert_eq!(h.edges(), h.strict_edges_audit().as_slice());
    }

    #[test]
    fn single_point_and_dedupe() {
        let g = UnitGraph::from_points([ExactPoint::origin()]);
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        let g = UnitGraph::from_points([ExactPoint::origin(), ExactPoint::origin()]);
        assert_eq!(g.vertex_count(), 1);
    }

    #[test]
    fn minkowski_identity_element() {
        let h = UnitGraph::from_points(wheel_points());
        let origin = UnitGraph::from_points([ExactPoint::origin()]);
        assert_eq!(h.minkowski(&origin), h);
    }

    #[test]
    fn minkowski_collapses_shared_sums() {
        let h = UnitGraph::from_points(wheel_points());
        let hh = h.minkowski(&h);
        assert!(hh.vertex_count() < 49);
        assert_eq!(hh.vertex_count(), 19); // hexagonal lattice patch of radius 2
    }

    #[test]
    fn trim_examples() {
        let h = UnitGraph::from_points(wheel_points());
        assert_eq!(h.trim(&ExactReal::zero()).vertex_count(), 1);
        assert_eq!(h.trim(&ExactReal::one()).vertex_count(), 7);
        assert_eq!(h.trim(&ExactReal::ratio(1, 2)).vertex_count(), 1);
    }

    #[test]
    fn canonical_order_is_input_independent() {
        let mut pts = wheel_points();
        let g1 = UnitGraph::from_points(pts.clone());
        pts.reverse();
        let g2 = UnitGraph::from_points(pts);
        assert_eq!(g1, g2);
    }

    #[test]
    fn rotated_graph_is_isomorphic() {
        let h = UnitGraph::from_points(wheel_points());
        let eta = Rotor::eta();
        let rotated = h.map_points(|p| eta.mul(p));
        assert_eq!(rotated.vertex_count(), h.vertex_count());
        assert_eq!(rotated.edge_count(), h.edge_count());
        // the point map induces an index map carrying edges to edges exactly
        let to_new: Vec<u32> = h
            .vertices()
            .iter()
            .map(|p| rotated.index_of(&eta.mul(p)).unwrap())
            .collect();
        let mut mapped: Vec<(u32, u32)> = h
            .edges()
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (to_new[i as usize], to_new[j as usize]);
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        mapped.sort_unstable();
        assert_eq!(mapped.as_slice(), rotated.edges());
    }

    #[test]
    fn rhombus_is_a_diamond() {
        let d = UnitGraph::from_points(rhombus_points());
        assert_eq!((d.vertex_count(), d.edge_count()), (4, 5));
    }
}
