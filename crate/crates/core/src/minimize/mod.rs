//! The two-phase minimization engine.
//!
//! One iteration expands the accumulative graph `A` with new vertices from
//! the reserve `R` (or by topping up partially filled orbits), builds the
//! critical-relationship hypergraph of the working graph `W`, enumerates
//! admissible deletion sets, and keeps the smallest subgraphs that retain
//! the key property. Successful iterations shrink the minimal graph `M` or
//! widen the set `{M}`; `A` is rebuilt as the union of `{M}` and the loop
//! continues until the expansion schedule is exhausted.

mod candidates;
mod hypergraph;
mod rough;

pub use candidates::{candidate_deletions, maximal_independent_sets, reduce, ReduceOutcome};
pub use hypergraph::{batch_8421, build_hypergraph, CheckContext, Hypergraph};
pub use rough::{rough_reduce, IndicatorReport, PassRecord, RoughOptions, RoughReduction};

use std::collections::HashSet;
use std::fmt;

use crate::checker::{CheckError, CompanionKind, KeyProperty};
use crate::exact::ExactPoint;
use crate::graph::UnitGraph;
use crate::sat::Backend;
use crate::symmetry::{geometric_auts, orbit_decompose, Orbit, PermGroup};

use rough::lattice_vertices;

/// One step of an expansion schedule.
#[derive(Clone, Debug)]
pub enum ExpansionStep {
    /// Top up at most this many partially filled base orbits of `A`,
    /// smallest orbits first.
    FillPartialOrbits { max_orbits: usize },
    /// Add the missing vertices of this many reserve orbits, smallest
    /// first.
    AddSmallestOrbits { count: usize },
    /// Add explicit points.
    AddPoints { points: Vec<ExactPoint>, label: String },
}

impl fmt::Display for ExpansionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpansionStep::FillPartialOrbits { max_orbits } => write!(f, "fill:{max_orbits}"),
            ExpansionStep::AddSmallestOrbits { count } => write!(f, "orbits:{count}"),
            ExpansionStep::AddPoints { points, label } => {
                write!(f, "points:{label}({})", points.len())
            }
        }
    }
}

/// Symmetry use for candidate deduplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SymmetryMode {
    #[default]
    Trivial,
    Geometric,
}

/// Everything tunable about a run. Budgets must be positive.
#[derive(Clone, Debug)]
pub struct Strategy {
    pub schedule: Vec<ExpansionStep>,
    pub max_hyperedge_degree: usize,
    pub input_symmetry: SymmetryMode,
    pub output_symmetry: SymmetryMode,
    /// Phase-2 SAT-check budget per reduction.
    pub check_budget: usize,
    /// Cap on enumerated maximal independent sets.
    pub mis_cap: usize,
    /// Rebuild the reserve after this many successful iterations.
    pub reserve_refresh: usize,
    pub iteration_cap: usize,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            schedule: vec![],
            max_hyperedge_degree: 2,
            input_symmetry: SymmetryMode::Trivial,
            output_symmetry: SymmetryMode::Trivial,
            check_budget: 1_000_000,
            mis_cap: 100_000,
            reserve_refresh: 4,
            iteration_cap: 64,
        }
    }
}

impl Strategy {
    pub fn validate(&self) -> Result<(), CheckError> {
        if self.check_budget == 0 || self.mis_cap == 0 || self.iteration_cap == 0 {
            return Err(CheckError::Invalid("strategy budgets must be positive".into()));
        }
        if self.max_hyperedge_degree == 0 {
            return Err(CheckError::Invalid("hyperedge degree must be at least 1".into()));
        }
        Ok(())
    }
}

/// The variables threaded through the loop.
#[derive(Clone, Debug)]
pub struct MinimizationState {
    /// Minimal graph found so far (fewest edges among `set_m`).
    pub m: UnitGraph,
    /// All minimum-order graphs found, up to the output symmetry.
    pub set_m: Vec<UnitGraph>,
    /// Accumulative graph: the union of `set_m`.
    pub a: UnitGraph,
    /// Working graph of the current iteration.
    pub w: UnitGraph,
    /// Reserve graph: `A` plus the qualifying orbits.
    pub r: UnitGraph,
    /// Orbit universe of the search area.
    pub b: Vec<Orbit>,
    pub kp: KeyProperty,
    /// Hypergraph of the last completed iteration.
    pub y: Hypergraph,
}

impl MinimizationState {
    /// Start from an accumulative graph that must already hold the key
    /// property.
    pub fn new(
        a: UnitGraph,
        kp: KeyProperty,
        b: Vec<Orbit>,
        backend: &Backend,
    ) -> Result<MinimizationState, CheckError> {
        if !kp.check(&a, backend)? {
            return Err(CheckError::Invalid("initial graph lacks the key property".into()));
        }
        let (r, _) = build_reserve(&a, &b);
        Ok(MinimizationState {
            m: a.clone(),
            set_m: vec![a.clone()],
            w: a.clone(),
            r,
            a,
            b,
            kp,
            y: Hypergraph::default(),
        })
    }
}

/// One reserve entry: the orbit and the best degree any of its vertices
/// reaches when the orbit joins `A`.
#[derive(Clone, Debug)]
pub struct ReserveEntry {
    pub orbit: Orbit,
    pub max_new_degree: u32,
}

/// A base orbit joins the reserve iff adding it to `A` gives one of its
/// vertices degree at least 4. Qualifying orbits are recorded in order of
/// decreasing degree.
pub fn build_reserve(a: &UnitGraph, b: &[Orbit]) -> (UnitGraph, Vec<ReserveEntry>) {
    let mut entries: Vec<ReserveEntry> = Vec::new();
    for orbit in b {
        let orbit_points: Vec<ExactPoint> = orbit.members.iter().map(|c| c.to_point()).collect();
        let probe = UnitGraph::from_points(
            a.vertices().iter().cloned().chain(orbit_points.iter().cloned()),
        );
        let degrees = probe.degrees();
        let max_new_degree = orbit_points
            .iter()
            .filter_map(|p| probe.index_of(p))
            .map(|i| degrees[i as usize])
            .max()
            .unwrap_or(0);
        if max_new_degree >= 4 {
            entries.push(ReserveEntry { orbit: orbit.clone(), max_new_degree });
        }
    }
    entries.sort_by(|x, y| {
        y.max_new_degree
            .cmp(&x.max_new_degree)
            .then_with(|| x.orbit.representative.cmp(&y.orbit.representative))
    });
    let points = a.vertices().iter().cloned().chain(
        entries
            .iter()
            .flat_map(|e| e.orbit.members.iter().map(|c| c.to_point())),
    );
    (UnitGraph::from_points(points), entries)
}

/// Apply one expansion step to `A` against the reserve `R`. Returns the
/// working graph and a human-readable note; `W = A` when the step had
/// nothing to add (a flagged no-op).
pub fn expand(a: &UnitGraph, r: &UnitGraph, step: &ExpansionStep) -> (UnitGraph, String) {
    let additions: Vec<ExactPoint> = match step {
        ExpansionStep::FillPartialOrbits { max_orbits } => {
            let coords = lattice_vertices(a);
            let orbits =
                orbit_decompose(&coords.iter().map(|(_, c)| *c).collect::<Vec<_>>())
                    .unwrap_or_default();
            let mut additions = Vec::new();
            let mut used = 0usize;
            for orbit in &orbits {
                if used >= *max_orbits {
                    break;
                }
                let missing: Vec<ExactPoint> = orbit
                    .members
                    .iter()
                    .map(|c| c.to_point())
                    .filter(|p| !a.contains(p))
                    .collect();
                if !missing.is_empty() && missing.len() < orbit.size() {
                    additions.extend(missing);
                    used += 1;
                }
            }
            additions
        }
        ExpansionStep::AddSmallestOrbits { count } => {
            let coords = lattice_vertices(r);
            let orbits =
                orbit_decompose(&coords.iter().map(|(_, c)| *c).collect::<Vec<_>>())
                    .unwrap_or_default();
            let mut additions = Vec::new();
            let mut used = 0usize;
            for orbit in &orbits {
                if used >= *count {
                    break;
                }
                let missing: Vec<ExactPoint> = orbit
                    .members
                    .iter()
                    .map(|c| c.to_point())
                    .filter(|p| r.contains(p) && !a.contains(p))
                    .collect();
                if !missing.is_empty() {
                    additions.extend(missing);
                    used += 1;
                }
            }
            additions
        }
        ExpansionStep::AddPoints { points, .. } => {
            points.iter().filter(|p| !a.contains(p)).cloned().collect()
        }
    };
    let added = additions.len();
    if added == 0 {
        return (a.clone(), format!("{step}: no-op"));
    }
    let w = UnitGraph::from_points(a.vertices().iter().cloned().chain(additions));
    (w, format!("{step}: +{added} vertices"))
}

/// The subgroup of the geometric automorphisms of `W` that also preserve
/// the companion structure, i.e. under which the key-property formula is
/// invariant. Safe for candidate deduplication on both the input and the
/// output side.
pub fn property_symmetry_group(w: &UnitGraph, kp: &KeyProperty) -> PermGroup {
    let base = geometric_auts(w);
    let keep: Vec<Vec<u32>> = match &kp.companion {
        CompanionKind::None => return base,
        CompanionKind::MonoEdge { a, b } => {
            let marked: HashSet<u32> =
                [w.index_of(a), w.index_of(b)].into_iter().flatten().collect();
            base.elements()
                .iter()
                .filter(|perm| stabilizes(perm, &marked))
                .cloned()
                .collect()
        }
        CompanionKind::NonMonoClique { points } => {
            let marked: HashSet<u32> = points.iter().filter_map(|p| w.index_of(p)).collect();
            base.elements()
                .iter()
                .filter(|perm| stabilizes(perm, &marked))
                .cloned()
                .collect()
        }
        CompanionKind::Subgraph { graph, rotor } => {
            // the companion occupies fixed plane positions: an automorphism
            // of W is usable iff the same point map fixes the companion's
            // point set; conservatively require it to fix shared points
            let companion_points: HashSet<ExactPoint> =
                graph.vertices().iter().map(|p| rotor.apply(p)).collect();
            let shared: HashSet<u32> = w
                .vertices()
                .iter()
                .enumerate()
                .filter(|(_, p)| companion_points.contains(*p))
                .map(|(i, _)| i as u32)
                .collect();
            base.elements()
                .iter()
                .filter(|perm| shared.iter().all(|&i| perm[i as usize] == i))
                .cloned()
                .collect()
        }
    };
    PermGroup::from_generators(w.vertex_count(), keep)
}

fn stabilizes(perm: &[u32], marked: &HashSet<u32>) -> bool {
    marked.iter().all(|&i| marked.contains(&perm[i as usize]))
}

/// Synthetic degree-1 vertices hung on the highest-degree vertex, usable
/// for nudging the working graph's symmetry. Candidate positions walk the
/// unit circle around the anchor through η-rotations of a direction chosen
/// to avoid second neighbors; positions that would pick up extra unit
/// edges are skipped. Returns the enlarged graph and the indices of the
/// hanging vertices (each has degree exactly 1).
pub fn add_hanging_vertices(g: &UnitGraph, count: usize) -> (UnitGraph, Vec<u32>) {
    if g.vertex_count() == 0 || count == 0 {
        return (g.clone(), vec![]);
    }
    let degrees = g.degrees();
    let anchor_idx = (0..g.vertex_count())
        .max_by_key(|&i| degrees[i])
        .unwrap();
    let anchor = g.vertices()[anchor_idx].clone();
    let mut points: Vec<ExactPoint> = g.vertices().to_vec();
    let mut hung: Vec<ExactPoint> = Vec::new();
    // rho^j * eta^k reaches infinitely many angles; try a deterministic walk
    let rho = crate::exact::Rotor::rho();
    let mut dir = ExactPoint::from_integers(1, 0);
    'outer: for _ in 0..64 {
        dir = rho.mul(&dir);
        let mut spoke = dir.clone();
        for _ in 0..5 {
            spoke = crate::exact::Rotor::eta_pow(1).mul(&spoke);
            let candidate = &anchor + &spoke;
            if points.contains(&candidate) {
                continue;
            }
            let unit_neighbors = points
                .iter()
                .filter(|p| p.is_unit(&candidate))
                .count();
            if unit_neighbors == 1 && !hung.iter().any(|h| h.is_unit(&candidate)) {
                hung.push(candidate.clone());
                points.push(candidate);
                if hung.len() == count {
                    break 'outer;
                }
            }
        }
    }
    let out = UnitGraph::from_points(points);
    let indices = hung.iter().filter_map(|p| out.index_of(p)).collect();
    (out, indices)
}

/// Machine-parsable run log. Events carry a logical sequence number rather
/// than wall-clock time so that two runs of the same configuration produce
/// identical logs; renderers may prepend timestamps for interactive use.
#[derive(Clone, Debug, Default)]
pub struct RunLog {
    pub events: Vec<LogEvent>,
}

#[derive(Clone, Debug)]
pub enum LogEvent {
    Start { a_order: usize, m_order: usize, reserve_order: usize },
    Expanded { iteration: usize, note: String, w_order: usize },
    HypergraphBuilt { iteration: usize, degree_counts: Vec<(usize, usize)>, sat_calls: usize },
    Reduced {
        iteration: usize,
        order: usize,
        kept: usize,
        checks: usize,
        truncated: bool,
    },
    IterationEnd {
        iteration: usize,
        success: bool,
        m_order: usize,
        set_m: usize,
        a_order: usize,
    },
    Done { iterations: usize, m_order: usize },
}

impl RunLog {
    fn push(&mut self, e: LogEvent) {
        self.events.push(e);
    }

    /// One line per event: `seq=<n> event=<kind> key=value...`.
    pub fn lines(&self) -> Vec<String> {
        self.events
            .iter()
            .enumerate()
            .map(|(seq, e)| match e {
                LogEvent::Start { a_order, m_order, reserve_order } => format!(
                    "seq={seq} event=start a={a_order} m={m_order} r={reserve_order}"
                ),
                LogEvent::Expanded { iteration, note, w_order } => {
                    format!("seq={seq} event=expand iter={iteration} w={w_order} note=\"{note}\"")
                }
                LogEvent::HypergraphBuilt { iteration, degree_counts, sat_calls } => {
                    let degrees: Vec<String> =
                        degree_counts.iter().map(|(d, c)| format!("{d}:{c}")).collect();
                    format!(
                        "seq={seq} event=hypergraph iter={iteration} edges=[{}] checks={sat_calls}",
                        degrees.join(",")
                    )
                }
                LogEvent::Reduced { iteration, order, kept, checks, truncated } => format!(
                    "seq={seq} event=reduce iter={iteration} order={order} kept={kept} checks={checks} truncated={truncated}"
                ),
                LogEvent::IterationEnd { iteration, success, m_order, set_m, a_order } => format!(
                    "seq={seq} event=iteration iter={iteration} success={success} m={m_order} set={set_m} a={a_order}"
                ),
                LogEvent::Done { iterations, m_order } => {
                    format!("seq={seq} event=done iterations={iterations} m={m_order}")
                }
            })
            .collect()
    }
}

/// Run the alternating expand/reduce loop until the schedule is exhausted
/// or the iteration cap is reached. Deterministic for a fixed input and
/// strategy.
pub fn iterate(
    mut state: MinimizationState,
    strategy: &Strategy,
    backend: &Backend,
) -> Result<(MinimizationState, RunLog), CheckError> {
    strategy.validate()?;
    let mut log = RunLog::default();
    log.push(LogEvent::Start {
        a_order: state.a.vertex_count(),
        m_order: state.m.vertex_count(),
        reserve_order: state.r.vertex_count(),
    });
    let mut successes = 0usize;
    let mut iterations = 0usize;
    let mut schedule = strategy.schedule.clone();
    if schedule.is_empty() {
        // fixed-point run over A itself
        schedule.push(ExpansionStep::AddPoints { points: vec![], label: "none".into() });
    }
    for (iteration, step) in schedule.iter().enumerate() {
        if iteration >= strategy.iteration_cap {
            break;
        }
        iterations = iteration + 1;
        let (w, note) = expand(&state.a, &state.r, step);
        log.push(LogEvent::Expanded {
            iteration,
            note,
            w_order: w.vertex_count(),
        });
        state.w = w;

        let ctx = CheckContext::new(&state.w, &state.kp, backend)?;
        let input_group = match strategy.input_symmetry {
            SymmetryMode::Trivial => PermGroup::trivial(state.w.vertex_count()),
            SymmetryMode::Geometric => property_symmetry_group(&state.w, &state.kp),
        };
        let y = build_hypergraph(&ctx, strategy.max_hyperedge_degree, &input_group)?;
        log.push(LogEvent::HypergraphBuilt {
            iteration,
            degree_counts: y.degree_counts(),
            sat_calls: ctx.sat_calls(),
        });

        let output_group = match strategy.output_symmetry {
            SymmetryMode::Trivial => PermGroup::trivial(state.w.vertex_count()),
            SymmetryMode::Geometric => property_symmetry_group(&state.w, &state.kp),
        };
        let outcome = reduce(
            &ctx,
            &y,
            state.m.vertex_count(),
            &output_group,
            strategy.check_budget,
            strategy.mis_cap,
        )?;
        log.push(LogEvent::Reduced {
            iteration,
            order: outcome.order,
            kept: outcome.set_m.len(),
            checks: outcome.checks,
            truncated: outcome.truncated,
        });

        let mut success = false;
        if !outcome.set_m.is_empty() {
            let shrunk = outcome.order < state.m.vertex_count();
            let widened = outcome.order == state.m.vertex_count()
                && differs(&outcome.set_m, &state.set_m);
            if shrunk || widened {
                success = true;
                state.set_m = outcome.set_m;
                state.m = state
                    .set_m
                    .iter()
                    .min_by_key(|g| g.edge_count())
                    .cloned()
                    .expect("nonempty set");
                let union_points: Vec<ExactPoint> = state
                    .set_m
                    .iter()
                    .flat_map(|g| g.vertices().iter().cloned())
                    .collect();
                state.a = UnitGraph::from_points(union_points);
                successes += 1;
                if strategy.reserve_refresh > 0 && successes % strategy.reserve_refresh == 0 {
                    let (r, _) = build_reserve(&state.a, &state.b);
                    state.r = r;
                }
            }
        }
        state.y = y;
        log.push(LogEvent::IterationEnd {
            iteration,
            success,
            m_order: state.m.vertex_count(),
            set_m: state.set_m.len(),
            a_order: state.a.vertex_count(),
        });
    }
    log.push(LogEvent::Done { iterations, m_order: state.m.vertex_count() });
    Ok((state, log))
}

fn differs(new: &[UnitGraph], old: &[UnitGraph]) -> bool {
    if new.len() != old.len() {
        return true;
    }
    new.iter().any(|g| !old.contains(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct;

    const EMB: Backend = Backend::Embedded;

    #[test]
    fn empty_reserve_from_empty_accumulator() {
        let (r, entries) = build_reserve(&UnitGraph::empty(), &[]);
        assert_eq!(r.vertex_count(), 0);
        assert!(entries.is_empty());
    }

    #[test]
    fn moser_fixed_point_without_reserve() {
        let m = construct("MOSER").unwrap();
        let state =
            MinimizationState::new(m.clone(), KeyProperty::chromatic(3), vec![], &EMB).unwrap();
        let strategy = Strategy { max_hyperedge_degree: 1, ..Default::default() };
        let (final_state, log) = iterate(state, &strategy, &EMB).unwrap();
        assert_eq!(final_state.m, m);
        assert_eq!(final_state.set_m, vec![m]);
        assert!(log.lines().iter().any(|l| l.contains("event=done")));
    }

    #[test]
    fn initial_property_is_required() {
        let h = construct("H").unwrap();
        assert!(matches!(
            MinimizationState::new(h, KeyProperty::chromatic(3), vec![], &EMB),
            Err(CheckError::Invalid(_))
        ));
    }

    #[test]
    fn logs_are_deterministic() {
        let m = construct("MOSER").unwrap();
        let mut pts: Vec<ExactPoint> = m.vertices().to_vec();
        pts.push(ExactPoint::from_integers(21, 4));
        pts.push(ExactPoint::from_integers(23, 4));
        let w = UnitGraph::from_points(pts);
        let strategy = Strategy { max_hyperedge_degree: 2, ..Default::default() };
        let run = || {
            let state =
                MinimizationState::new(w.clone(), KeyProperty::chromatic(3), vec![], &EMB)
                    .unwrap();
            let (_, log) = iterate(state, &strategy, &EMB).unwrap();
            log.lines().join("\n")
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn m_orders_never_increase_across_iterations() {
        let m = construct("MOSER").unwrap();
        let mut pts: Vec<ExactPoint> = m.vertices().to_vec();
        for i in 0..4 {
            pts.push(ExactPoint::from_integers(20 + 2 * i, 9));
        }
        let w = UnitGraph::from_points(pts);
        let state =
            MinimizationState::new(w, KeyProperty::chromatic(3), vec![], &EMB).unwrap();
        let strategy = Strategy {
            schedule: vec![
                ExpansionStep::AddPoints { points: vec![], label: "noop1".into() },
                ExpansionStep::AddPoints { points: vec![], label: "noop2".into() },
            ],
            ..Default::default()
        };
        let (final_state, log) = iterate(state, &strategy, &EMB).unwrap();
        assert_eq!(final_state.m.vertex_count(), 7);
        let mut last = usize::MAX;
        for line in log.lines() {
            if let Some(pos) = line.find(" m=") {
                let m: usize = line[pos + 3..]
                    .split_whitespace()
                    .next()
                    .unwrap()
                    .parse()
                    .unwrap();
                assert!(m <= last || last == usize::MAX);
                last = m;
            }
        }
    }

    #[test]
    fn hanging_vertices_have_degree_one() {
        let g = construct("MOSER").unwrap();
        let (bigger, hung) = add_hanging_vertices(&g, 2);
        assert_eq!(hung.len(), 2);
        let degrees = bigger.degrees();
        for &i in &hung {
            assert_eq!(degrees[i as usize], 1);
        }
        assert_eq!(bigger.vertex_count(), g.vertex_count() + 2);
    }
}
