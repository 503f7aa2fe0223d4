//! CNF construction for k-coloring, and the solving backends.
//!
//! The encoding of an n-vertex graph uses `k*n` variables `v[i][c]`
//! ("vertex i has color c"): one width-k *vertex clause* per vertex and
//! `k` binary *edge clauses* per edge. Vertices are numbered in the
//! graph's canonical order, which sorts by distance from the center.
//!
//! On top of that sit the two standard accelerations: *symmetry breaking*
//! (unit clauses fixing the colors of one clique) and *equal-color
//! implication chains* (cyclic implications forcing a vertex set
//! monochromatic, `k` clauses per chain link). For reduction runs the
//! formula is split into a *common* part (all edge clauses, plus anything
//! the companion contributes) and a per-subgraph *variable* part holding
//! the vertex clauses of surviving vertices; deleted vertices keep their
//! variables but lose their vertex clauses, which leaves them
//! unconstrained.

mod backend;
mod dimacs;
mod solver;

pub use backend::{solve, Backend, BackendError, Verdict};
pub use dimacs::{from_dimacs, to_dimacs, to_dimacs_string, DimacsError};
pub use solver::Solver;

use crate::graph::UnitGraph;

/// A CNF formula with 1-based DIMACS-style literals (`±var`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    var_count: u32,
    clauses: Vec<Vec<i32>>,
    /// Present when the formula encodes a coloring problem.
    color_map: Option<ColorVarMap>,
}

/// Variable layout of a coloring encoding: `var(i, c) = i*k + c` for
/// vertex `i` (0-based) and color `c` (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColorVarMap {
    pub n: u32,
    pub k: u32,
}

impl ColorVarMap {
    pub fn var(&self, vertex: u32, color: u32) -> i32 {
        debug_assert!(vertex < self.n && 1 <= color && color <= self.k);
        (vertex * self.k + color) as i32
    }
}

impl CnfFormula {
    pub fn new(var_count: u32) -> Self {
        CnfFormula { var_count, clauses: Vec::new(), color_map: None }
    }

    pub(crate) fn with_parts(
        var_count: u32,
        clauses: Vec<Vec<i32>>,
        color_map: Option<ColorVarMap>,
    ) -> Self {
        let f = CnfFormula { var_count, clauses, color_map };
        debug_assert!(f.clauses.iter().all(|c| !c.is_empty() && f.lits_in_range(c)));
        f
    }

    fn lits_in_range(&self, clause: &[i32]) -> bool {
        clause
            .iter()
            .all(|&l| l != 0 && l.unsigned_abs() <= self.var_count)
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn color_map(&self) -> Option<ColorVarMap> {
        self.color_map
    }

    pub fn push_clause(&mut self, clause: Vec<i32>) {
        assert!(!clause.is_empty(), "empty clause at build time");
        assert!(self.lits_in_range(&clause), "literal out of range");
        self.clauses.push(clause);
    }

    /// Does the assignment (index = var-1) satisfy every clause?
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        if model.len() < self.var_count as usize {
            return false;
        }
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&l| {
                let v = (l.unsigned_abs() - 1) as usize;
                (l > 0) == model[v]
            })
        })
    }

    /// Decode a model into per-vertex colors (1-based). Only meaningful on
    /// coloring encodings; a vertex with no true color variable (possible
    /// for unconstrained deleted vertices) decodes to 0.
    pub fn decode_coloring(&self, model: &[bool]) -> Option<Vec<u32>> {
        let map = self.color_map?;
        let mut colors = vec![0u32; map.n as usize];
        for i in 0..map.n {
            for c in 1..=map.k {
                let var = map.var(i, c) as usize;
                if model[var - 1] {
                    colors[i as usize] = c;
                    break;
                }
            }
        }
        Some(colors)
    }
}

/// The k-coloring encoding of a graph: `n` vertex clauses then `k|E|`
/// edge clauses, in graph order. Deterministic.
pub fn encode_k_coloring(g: &UnitGraph, k: u32) -> CnfFormula {
    assert!(k >= 1, "at least one color");
    let n = g.vertex_count() as u32;
    let map = ColorVarMap { n, k };
    let mut clauses = Vec::with_capacity(n as usize + k as usize * g.edge_count());
    for i in 0..n {
        clauses.push((1..=k).map(|c| map.var(i, c)).collect());
    }
    for &(i, j) in g.edges() {
        for c in 1..=k {
            clauses.push(vec![-map.var(i, c), -map.var(j, c)]);
        }
    }
    CnfFormula::with_parts(n * k, clauses, Some(map))
}

/// Errors from the clause-adding helpers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodeError {
    /// Clique-breaking input vertices are not pairwise adjacent.
    NotAClique,
    /// Clique larger than the color count.
    CliqueTooLarge,
    /// The formula has no coloring layout.
    NotAColoring,
    /// A chain needs at least two vertices.
    ChainTooShort,
}

impl std::fmt::Display for EncodeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EncodeError::NotAClique => write!(f, "symmetry-breaking vertices are not a clique"),
            EncodeError::CliqueTooLarge => write!(f, "clique larger than the color count"),
            EncodeError::NotAColoring => write!(f, "formula does not encode a coloring"),
            EncodeError::ChainTooShort => write!(f, "equal-color chain needs at least 2 vertices"),
        }
    }
}

impl std::error::Error for EncodeError {}

/// Add symmetry-breaking unit clauses fixing clique vertex `j` (0-based
/// position) to color `j+1`. The vertices must be pairwise adjacent in `g`
/// and at most `k` of them. Satisfiability is preserved: clique vertices
/// get distinct colors in any proper coloring, and colors can be permuted.
pub fn add_clique_break(
    mut f: CnfFormula,
    g: &UnitGraph,
    clique: &[u32],
) -> Result<CnfFormula, EncodeError> {
    let map = f.color_map.ok_or(EncodeError::NotAColoring)?;
    if clique.len() as u32 > map.k {
        return Err(EncodeError::CliqueTooLarge);
    }
    for (x, &i) in clique.iter().enumerate() {
        for &j in &clique[x + 1..] {
            if !g.has_edge(i, j) {
                return Err(EncodeError::NotAClique);
            }
        }
    }
    for (pos, &i) in clique.iter().enumerate() {
        f.push_clause(vec![map.var(i, pos as u32 + 1)]);
    }
    Ok(f)
}

/// Add a cyclic chain of implications forcing the set monochromatic:
/// for each color `c` and consecutive pair `(u, v)` (wrapping), the clause
/// `¬u_c ∨ v_c`. Adds exactly `k * |set|` clauses.
pub fn add_equal_chain(mut f: CnfFormula, set: &[u32]) -> Result<CnfFormula, EncodeError> {
    let map = f.color_map.ok_or(EncodeError::NotAColoring)?;
    if set.len() < 2 {
        return Err(EncodeError::ChainTooShort);
    }
    for idx in 0..set.len() {
        let u = set[idx];
        let v = set[(idx + 1) % set.len()];
        for c in 1..=map.k {
            f.push_clause(vec![-map.var(u, c), map.var(v, c)]);
        }
    }
    Ok(f)
}

/// The paper-preferred symmetry-breaking clique `(0,0), (1,0), (1/2, √3/2)`
/// if all three are present and pairwise adjacent; otherwise any 3-clique
/// found by scanning edges; otherwise none.
pub fn default_break_clique(g: &UnitGraph) -> Option<Vec<u32>> {
    let preferred = [
        crate::exact::ExactPoint::origin(),
        crate::exact::ExactPoint::from_integers(1, 0),
        crate::exact::ExactPoint::new(
            crate::exact::ExactReal::ratio(1, 2),
            crate::exact::ExactReal::sqrt_scaled(
                num_rational::BigRational::new(1.into(), 2.into()),
                3,
            ),
        ),
    ];
    let indices: Option<Vec<u32>> = preferred.iter().map(|p| g.index_of(p)).collect();
    if let Some(idx) = indices {
        if idx
            .iter()
            .enumerate()
            .all(|(x, &i)| idx[x + 1..].iter().all(|&j| g.has_edge(i, j)))
        {
            return Some(idx);
        }
    }
    // fall back to the first triangle
    for &(i, j) in g.edges() {
        for v in 0..g.vertex_count() as u32 {
            if v != i && v != j && g.has_edge(v, i) && g.has_edge(v, j) {
                return Some(vec![i, j, v]);
            }
        }
    }
    None
}

/// A coloring formula split into a common part shared by every subgraph
/// check and a per-subgraph variable part.
#[derive(Clone, Debug)]
pub struct SplitFormula {
    var_count: u32,
    map: ColorVarMap,
    /// Edge clauses of the full graph-plus-companion, companion vertex
    /// clauses, and companion extras. Identical for every subgraph.
    common: Vec<Vec<i32>>,
    /// Vertices whose vertex clause is always present (companion side).
    always_on: Vec<u32>,
}

impl SplitFormula {
    /// Split the encoding of `g` (already the union `W ∪ C` where
    /// applicable). `always_on` names vertices that survive every check;
    /// `extra_common` carries companion clauses (mono edges, clique
    /// gadgets) possibly over `extra_vars` fresh variables beyond `k*n`.
    pub fn new(g: &UnitGraph, k: u32, always_on: Vec<u32>, extra_common: Vec<Vec<i32>>, extra_vars: u32) -> SplitFormula {
        let base = encode_k_coloring(g, k);
        let map = base.color_map.unwrap();
        let n = map.n;
        let mut common: Vec<Vec<i32>> = base.clauses[n as usize..].to_vec();
        for &v in &always_on {
            common.push((1..=k).map(|c| map.var(v, c)).collect());
        }
        common.extend(extra_common);
        SplitFormula { var_count: n * k + extra_vars, map, common, always_on }
    }

    pub fn vertex_count(&self) -> u32 {
        self.map.n
    }

    /// The formula for the subgraph induced by `surviving` (indices into
    /// the full graph, excluding always-on vertices which are implied).
    pub fn formula_for(&self, surviving: &[u32]) -> CnfFormula {
        let mut clauses = Vec::with_capacity(self.common.len() + surviving.len());
        for &v in surviving {
            if self.always_on.contains(&v) {
                continue;
            }
            clauses.push((1..=self.map.k).map(|c| self.map.var(v, c)).collect());
        }
        clauses.extend(self.common.iter().cloned());
        CnfFormula::with_parts(self.var_count, clauses, Some(self.map))
    }

    /// Formula with every vertex surviving; equivalent to the monolithic
    /// encoding plus extras.
    pub fn full_formula(&self) -> CnfFormula {
        let all: Vec<u32> = (0..self.map.n).collect();
        self.formula_for(&all)
    }
}
