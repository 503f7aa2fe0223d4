//! Coloring predicates built on the SAT layer: k-colorability, chromatic
//! number, mono-pairs, non-mono-sets, spindle verification, and the
//! key-property check driving the minimizer.
//!
//! The *key property* of a working graph `W` is always "`W ∪ C` is not
//! k-colorable" for a companion `C`: nothing for plain chromatic checks,
//! the opposite subgraph for L/S runs, a logical edge for a mono-pair, or
//! a fresh (k-1)-clique wired to every member for a non-mono-set. The
//! clique gadget pins its own vertices to k-1 distinct colors, which
//! forces every member of the set onto the one remaining color — so the
//! union is k-colorable exactly when the set can be monochromatic.
//! (At the default k = 4 this is the classical 3-clique gadget.)

use std::fmt;

use crate::exact::{ExactPoint, Rotor};
use crate::graph::UnitGraph;
use crate::sat::{
    add_clique_break, add_equal_chain, default_break_clique, encode_k_coloring, solve, Backend,
    BackendError, CnfFormula, ColorVarMap, SplitFormula, Verdict,
};

/// The companion graph `C` appended to a working graph before checking.
#[derive(Clone, Debug)]
pub enum CompanionKind {
    None,
    /// A geometric companion rotated onto the working graph (the L/S
    /// pairing): the union is a real unit-distance graph.
    Subgraph { graph: UnitGraph, rotor: Rotor },
    /// One logical edge between two (non-adjacent) points of `W`: the
    /// mono-pair companion. The pair is not at unit distance, so the
    /// "edge of the corresponding length" is realized as edge clauses,
    /// which is logically the same constraint.
    MonoEdge { a: ExactPoint, b: ExactPoint },
    /// A fresh (k-1)-clique adjacent to every listed point: the
    /// non-mono-set companion.
    NonMonoClique { points: Vec<ExactPoint> },
}

/// Key-property specification: color count (paper default 4) plus
/// companion.
#[derive(Clone, Debug)]
pub struct KeyProperty {
    pub k: u32,
    pub companion: CompanionKind,
}

impl KeyProperty {
    pub fn chromatic(k: u32) -> KeyProperty {
        KeyProperty { k, companion: CompanionKind::None }
    }
}

#[derive(Debug)]
pub enum CheckError {
    /// The graph is not even k-colorable, so the queried predicate is
    /// vacuous; refused rather than answered.
    Vacuous,
    /// Structural preconditions violated.
    Invalid(String),
    /// No k ≤ k_max colors the graph.
    ExceedsKMax(u32),
    /// A companion references a point absent from the working graph.
    CompanionVertexMissing(String),
    Backend(BackendError),
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Vacuous => write!(f, "graph is not k-colorable; predicate is vacuous"),
            CheckError::Invalid(m) => write!(f, "{m}"),
            CheckError::ExceedsKMax(k) => write!(f, "chromatic number exceeds {k}"),
            CheckError::CompanionVertexMissing(p) => {
                write!(f, "companion point {p} is not a vertex of the working graph")
            }
            CheckError::Backend(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CheckError {}

impl From<BackendError> for CheckError {
    fn from(e: BackendError) -> Self {
        CheckError::Backend(e)
    }
}

/// A realized `W ∪ C`: the geometric union, the always-surviving
/// companion-side vertex indices, and any purely logical extras.
pub struct Realized {
    pub graph: UnitGraph,
    pub companion_vertices: Vec<u32>,
    pub extra_clauses: Vec<Vec<i32>>,
    pub extra_vars: u32,
}

impl KeyProperty {
    /// Realize the companion against a concrete working graph.
    pub fn realize(&self, w: &UnitGraph) -> Result<Realized, CheckError> {
        match &self.companion {
            CompanionKind::None => Ok(Realized {
                graph: w.clone(),
                companion_vertices: vec![],
                extra_clauses: vec![],
                extra_vars: 0,
            }),
            CompanionKind::Subgraph { graph, rotor } => {
                let rotated: Vec<ExactPoint> =
                    graph.vertices().iter().map(|p| rotor.apply(p)).collect();
                let union = UnitGraph::from_points(
                    w.vertices().iter().cloned().chain(rotated.iter().cloned()),
                );
                let companion_vertices = rotated
                    .iter()
                    .map(|p| union.index_of(p).expect("union contains companion"))
                    .collect();
                Ok(Realized {
                    graph: union,
                    companion_vertices,
                    extra_clauses: vec![],
                    extra_vars: 0,
                })
            }
            CompanionKind::MonoEdge { a, b } => {
                let ia = w
                    .index_of(a)
                    .ok_or_else(|| CheckError::CompanionVertexMissing(a.to_string()))?;
                let ib = w
                    .index_of(b)
                    .ok_or_else(|| CheckError::CompanionVertexMissing(b.to_string()))?;
                let map = ColorVarMap { n: w.vertex_count() as u32, k: self.k };
                let extra_clauses = (1..=self.k)
                    .map(|c| vec![-map.var(ia, c), -map.var(ib, c)])
                    .collect();
                Ok(Realized {
                    graph: w.clone(),
                    companion_vertices: vec![],
                    extra_clauses,
                    extra_vars: 0,
                })
            }
            CompanionKind::NonMonoClique { points } => {
                let members: Vec<u32> = points
                    .iter()
                    .map(|p| {
                        w.index_of(p)
                            .ok_or_else(|| CheckError::CompanionVertexMissing(p.to_string()))
                    })
                    .collect::<Result<_, _>>()?;
                let k = self.k;
                if k < 2 {
                    return Err(CheckError::Invalid(
                        "non-mono clique companion needs k >= 2".into(),
                    ));
                }
                let n = w.vertex_count() as u32;
                let map = ColorVarMap { n, k };
                let clique_size = k - 1;
                let fresh_var = |j: u32, c: u32| ((n + j) * k + c) as i32;
                let mut extra_clauses: Vec<Vec<i32>> = Vec::new();
                for j in 0..clique_size {
                    extra_clauses.push((1..=k).map(|c| fresh_var(j, c)).collect());
                }
                for j1 in 0..clique_size {
                    for j2 in (j1 + 1)..clique_size {
                        for c in 1..=k {
                            extra_clauses.push(vec![-fresh_var(j1, c), -fresh_var(j2, c)]);
                        }
                    }
                }
                for &m in &members {
                    for j in 0..clique_size {
                        for c in 1..=k {
                            extra_clauses.push(vec![-map.var(m, c), -fresh_var(j, c)]);
                        }
                    }
                }
                Ok(Realized {
                    graph: w.clone(),
                    companion_vertices: vec![],
                    extra_clauses,
                    extra_vars: clique_size * k,
                })
            }
        }
    }

    /// Build the split formula for reduction runs over `w`.
    pub fn split_formula(&self, w: &UnitGraph) -> Result<SplitFormula, CheckError> {
        let realized = self.realize(w)?;
        Ok(SplitFormula::new(
            &realized.graph,
            self.k,
            realized.companion_vertices,
            realized.extra_clauses,
            realized.extra_vars,
        ))
    }

    /// Does `w` have the key property, i.e. is `W ∪ C` NOT k-colorable?
    pub fn check(&self, w: &UnitGraph, backend: &Backend) -> Result<bool, CheckError> {
        let realized = self.realize(w)?;
        let mut f = encode_k_coloring(&realized.graph, self.k);
        for clause in realized.extra_clauses {
            f = grow_and_push(f, realized.extra_vars, clause);
        }
        let f = apply_default_break(f, &realized.graph, self.k);
        match solve(&f, backend)? {
            Verdict::Sat(_) => Ok(false),
            Verdict::Unsat => Ok(true),
        }
    }
}

fn grow_and_push(f: CnfFormula, extra_vars: u32, clause: Vec<i32>) -> CnfFormula {
    let mut grown = CnfFormula::with_parts(
        f.var_count() + extra_vars,
        f.clauses().to_vec(),
        f.color_map(),
    );
    grown.push_clause(clause);
    grown
}

fn apply_default_break(f: CnfFormula, g: &UnitGraph, k: u32) -> CnfFormula {
    if k >= 3 {
        if let Some(clique) = default_break_clique(g) {
            if clique.len() as u32 <= k {
                if let Ok(broken) = add_clique_break(f.clone(), g, &clique) {
                    return broken;
                }
            }
        }
    }
    f
}

/// Is the graph k-colorable? Returns the coloring when it is.
pub fn colorability(
    g: &UnitGraph,
    k: u32,
    backend: &Backend,
) -> Result<Option<Vec<u32>>, CheckError> {
    if g.vertex_count() == 0 {
        return Ok(Some(vec![]));
    }
    let f = encode_k_coloring(g, k);
    let f = apply_default_break(f, g, k);
    match solve(&f, backend)? {
        Verdict::Sat(model) => Ok(Some(f.decode_coloring(&model).expect("coloring encoding"))),
        Verdict::Unsat => Ok(None),
    }
}

pub fn is_k_colorable(g: &UnitGraph, k: u32, backend: &Backend) -> Result<bool, CheckError> {
    Ok(colorability(g, k, backend)?.is_some())
}

/// Least `k <= k_max` with a proper k-coloring.
pub fn chromatic_number(g: &UnitGraph, k_max: u32, backend: &Backend) -> Result<u32, CheckError> {
    for k in 1..=k_max {
        if is_k_colorable(g, k, backend)? {
            return Ok(k);
        }
    }
    Err(CheckError::ExceedsKMax(k_max))
}

/// Are `u` and `v` equal-colored in every proper k-coloring?
/// `u != v`, the pair must not be adjacent, and `g` must be k-colorable.
pub fn is_mono_pair(
    g: &UnitGraph,
    u: u32,
    v: u32,
    k: u32,
    backend: &Backend,
) -> Result<bool, CheckError> {
    if u == v {
        return Err(CheckError::Invalid("mono-pair needs two distinct vertices".into()));
    }
    if g.has_edge(u, v) {
        return Err(CheckError::Invalid("mono-pair vertices must not be adjacent".into()));
    }
    if !is_k_colorable(g, k, backend)? {
        return Err(CheckError::Vacuous);
    }
    let kp = KeyProperty {
        k,
        companion: CompanionKind::MonoEdge {
            a: g.vertices()[u as usize].clone(),
            b: g.vertices()[v as usize].clone(),
        },
    };
    kp.check(g, backend)
}

/// Method for forcing a vertex set monochromatic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonMonoMethod {
    /// Fresh (k-1)-clique wired to every member.
    CliqueCompanion,
    /// Cyclic equal-color implication chain.
    EqualChain,
}

/// Is it impossible for the set to be monochromatic in a proper
/// k-coloring? `|set| >= 2` and `g` must be k-colorable.
pub fn is_non_mono_set(
    g: &UnitGraph,
    set: &[u32],
    k: u32,
    method: NonMonoMethod,
    backend: &Backend,
) -> Result<bool, CheckError> {
    if set.len() < 2 {
        return Err(CheckError::Invalid("non-mono set needs at least 2 vertices".into()));
    }
    if !is_k_colorable(g, k, backend)? {
        return Err(CheckError::Vacuous);
    }
    match method {
        NonMonoMethod::CliqueCompanion => {
            let kp = KeyProperty {
                k,
                companion: CompanionKind::NonMonoClique {
                    points: set.iter().map(|&i| g.vertices()[i as usize].clone()).collect(),
                },
            };
            kp.check(g, backend)
        }
        NonMonoMethod::EqualChain => {
            let f = encode_k_coloring(g, k);
            let f = add_equal_chain(f, set)
                .map_err(|e| CheckError::Invalid(e.to_string()))?;
            let f = apply_default_break(f, g, k);
            match solve(&f, backend)? {
                Verdict::Sat(_) => Ok(false),
                Verdict::Unsat => Ok(true),
            }
        }
    }
}

/// Verify a spindle: two pairs sharing one vertex, far endpoints joined by
/// a unit edge, each pair a mono-pair in the graph with the *other* far
/// endpoint deleted. A passing spindle certifies that the graph is not
/// k-colorable.
pub fn verify_spindle(
    g: &UnitGraph,
    pair_a: (u32, u32),
    pair_b: (u32, u32),
    k: u32,
    backend: &Backend,
) -> Result<bool, CheckError> {
    let a: Vec<u32> = vec![pair_a.0, pair_a.1];
    let b: Vec<u32> = vec![pair_b.0, pair_b.1];
    let shared: Vec<u32> = a.iter().copied().filter(|x| b.contains(x)).collect();
    if shared.len() != 1 {
        return Err(CheckError::Invalid("spindle pairs must share exactly one vertex".into()));
    }
    let shared = shared[0];
    let far_a = if pair_a.0 == shared { pair_a.1 } else { pair_a.0 };
    let far_b = if pair_b.0 == shared { pair_b.1 } else { pair_b.0 };
    if !g.has_edge(far_a, far_b) {
        return Err(CheckError::Invalid("spindle far endpoints must be a unit edge".into()));
    }
    let mono_in_without = |far_keep: u32, far_drop: u32| -> Result<bool, CheckError> {
        let sub = g.delete_vertices(&[far_drop]);
        let s = sub
            .index_of(&g.vertices()[shared as usize])
            .ok_or_else(|| CheckError::Invalid("shared vertex lost in deletion".into()))?;
        let f = sub
            .index_of(&g.vertices()[far_keep as usize])
            .ok_or_else(|| CheckError::Invalid("far endpoint lost in deletion".into()))?;
        is_mono_pair(&sub, s, f, k, backend)
    };
    Ok(mono_in_without(far_a, far_b)? && mono_in_without(far_b, far_a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ExactPoint;
    use crate::graph::{construct, rhombus_points};
    use crate::oracle;

    const EMB: Backend = Backend::Embedded;

    #[test]
    fn empty_graph_any_k() {
        let g = UnitGraph::empty();
        assert!(is_k_colorable(&g, 1, &EMB).unwrap());
    }

    #[test]
    fn chromatic_numbers_match_brute_force() {
        for (expr, expect) in [("MOSER", 4), ("H", 3), ("D", 3)] {
            let g = construct(expr).unwrap();
            assert_eq!(chromatic_number(&g, 6, &EMB).unwrap(), expect);
            assert_eq!(oracle::brute_force_chromatic(&g, 6), Some(expect));
        }
        // single edge
        let e = UnitGraph::from_points([
            ExactPoint::origin(),
            ExactPoint::from_integers(1, 0),
        ]);
        assert_eq!(chromatic_number(&e, 4, &EMB).unwrap(), 2);
        assert!(matches!(
            chromatic_number(&construct("MOSER").unwrap(), 3, &EMB),
            Err(CheckError::ExceedsKMax(3))
        ));
    }

    #[test]
    fn h2_is_4_colorable() {
        let g = construct("H^2").unwrap();
        let colors = colorability(&g, 4, &EMB).unwrap().unwrap();
        // verify the model directly against the edges
        for &(i, j) in g.edges() {
            assert_ne!(colors[i as usize], colors[j as usize]);
        }
    }

    fn diamond_tips() -> (UnitGraph, u32, u32) {
        let d = UnitGraph::from_points(rhombus_points());
        // tips are the two vertices at distance sqrt(3): origin and (sqrt3, 0)
        let o = d.index_of(&ExactPoint::origin()).unwrap();
        let tip = d
            .index_of(&ExactPoint::new(crate::exact::ExactReal::sqrt(3), crate::exact::ExactReal::zero()))
            .unwrap();
        (d, o, tip)
    }

    #[test]
    fn diamond_tips_mono_at_3_not_4() {
        let (d, o, tip) = diamond_tips();
        assert!(is_mono_pair(&d, o, tip, 3, &EMB).unwrap());
        assert!(!is_mono_pair(&d, o, tip, 4, &EMB).unwrap());
        // agreement with exhaustive enumeration over all proper colorings
        assert!(oracle::brute_force_mono_pair(&d, o, tip, 3));
        assert!(!oracle::brute_force_mono_pair(&d, o, tip, 4));
    }

    #[test]
    fn isolated_vertices_are_not_mono() {
        let g = UnitGraph::from_points([
            ExactPoint::origin(),
            ExactPoint::from_integers(3, 0),
        ]);
        assert!(!is_mono_pair(&g, 0, 1, 2, &EMB).unwrap());
    }

    #[test]
    fn mono_pair_preconditions() {
        let (d, o, tip) = diamond_tips();
        assert!(matches!(is_mono_pair(&d, o, o, 3, &EMB), Err(CheckError::Invalid(_))));
        // adjacent pair rejected
        let (i, j) = d.edges()[0];
        assert!(matches!(is_mono_pair(&d, i, j, 3, &EMB), Err(CheckError::Invalid(_))));
        // vacuous on an uncolorable graph
        let m = construct("MOSER").unwrap();
        let n = m.vertex_count() as u32;
        let far = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .find(|&(i, j)| !m.has_edge(i, j))
            .unwrap();
        assert!(matches!(is_mono_pair(&m, far.0, far.1, 3, &EMB), Err(CheckError::Vacuous)));
        let _ = tip;
    }

    #[test]
    fn non_mono_methods_agree() {
        let (d, o, tip) = diamond_tips();
        // a unit edge can never be monochromatic
        let (i, j) = d.edges()[0];
        for method in [NonMonoMethod::CliqueCompanion, NonMonoMethod::EqualChain] {
            assert!(is_non_mono_set(&d, &[i, j], 3, method, &EMB).unwrap());
            // mono tips can share a color, so they are not a non-mono set
            assert!(!is_non_mono_set(&d, &[o, tip], 3, method, &EMB).unwrap());
        }
        // a bare sqrt3 equilateral triple has no edges: nothing blocks it at k=4
        let half = crate::exact::ExactReal::ratio(1, 2);
        let rt3_half = crate::exact::ExactReal::sqrt_scaled(
            num_rational::BigRational::new(1.into(), 2.into()),
            3,
        );
        let bare = UnitGraph::from_points([
            ExactPoint::new(crate::exact::ExactReal::zero(), crate::exact::ExactReal::one()),
            ExactPoint::new(rt3_half.clone(), -&half),
            ExactPoint::new(-&rt3_half, -&half),
        ]);
        assert_eq!(bare.edge_count(), 0);
        for method in [NonMonoMethod::CliqueCompanion, NonMonoMethod::EqualChain] {
            let verdict = is_non_mono_set(&bare, &[0, 1, 2], 4, method, &EMB).unwrap();
            assert!(!verdict);
            assert!(oracle::brute_force_can_be_mono(&bare, &[0, 1, 2], 4));
        }
    }

    #[test]
    fn moser_is_a_spindle_at_3_not_4() {
        let g = construct("MOSER").unwrap();
        // rhombus tips: origin shared, far tips at (sqrt3,0) and eta^2*(sqrt3,0)
        let o = g.index_of(&ExactPoint::origin()).unwrap();
        let t1 = ExactPoint::new(crate::exact::ExactReal::sqrt(3), crate::exact::ExactReal::zero());
        let t2 = Rotor::eta_pow(2).mul(&t1);
        let f1 = g.index_of(&t1).unwrap();
        let f2 = g.index_of(&t2).unwrap();
        assert!(verify_spindle(&g, (o, f1), (o, f2), 3, &EMB).unwrap());
        assert!(!verify_spindle(&g, (o, f1), (o, f2), 4, &EMB).unwrap());
        // pairs that do not share a vertex violate preconditions
        assert!(matches!(
            verify_spindle(&g, (f1, f2), (o, 1), 3, &EMB),
            Err(CheckError::Invalid(_))
        ));
    }

    #[test]
    fn key_property_on_moser() {
        let g = construct("MOSER").unwrap();
        let kp = KeyProperty::chromatic(3);
        assert!(kp.check(&g, &EMB).unwrap());
        // vertex-critical: deleting any vertex loses the property
        for v in 0..g.vertex_count() as u32 {
            let sub = g.delete_vertices(&[v]);
            assert!(!kp.check(&sub, &EMB).unwrap());
        }
        // empty graph with a colorable companion alone
        let kp_sub = KeyProperty {
            k: 3,
            companion: CompanionKind::Subgraph {
                graph: construct("H").unwrap(),
                rotor: Rotor::named(crate::exact::RotorName::I),
            },
        };
        assert!(!kp_sub.check(&UnitGraph::empty(), &EMB).unwrap());
    }

    #[test]
    fn deletion_monotonicity_on_moser() {
        // if the property fails for W \ S it fails for W \ T, S ⊆ T
        let g = construct("MOSER").unwrap();
        let kp = KeyProperty::chromatic(3);
        let n = g.vertex_count() as u32;
        for s in 0..n {
            let without_s = kp.check(&g.delete_vertices(&[s]), &EMB).unwrap();
            for t in 0..n {
                if t == s {
                    continue;
                }
                let without_both = kp.check(&g.delete_vertices(&[s, t]), &EMB).unwrap();
                if !without_s {
                    assert!(!without_both);
                }
            }
        }
    }
}
