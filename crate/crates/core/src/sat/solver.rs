//! A compact conflict-driven clause-learning solver: two watched literals,
//! first-UIP learning, VSIDS-style activities with a lazy heap, phase
//! saving and Luby restarts. No preprocessing and no clause deletion —
//! instances here stay small enough that neither pays for itself.

use super::CnfFormula;

/// Internal literal: `var*2 + sign` with 0-based `var`, sign 1 = negated.
type Lit = u32;

fn lit_from_dimacs(l: i32) -> Lit {
    let v = (l.unsigned_abs() - 1) * 2;
    if l > 0 {
        v
    } else {
        v + 1
    }
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn is_neg(l: Lit) -> bool {
    l & 1 == 1
}

fn negate(l: Lit) -> Lit {
    l ^ 1
}

const UNDEF: u8 = 2;

fn lit_value(assign: &[u8], l: Lit) -> Option<bool> {
    match assign[var(l)] {
        UNDEF => None,
        v => Some((v == 1) != is_neg(l)),
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Vec<bool>),
    Unsat,
}

pub struct Solver {
    n_vars: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    assign: Vec<u8>,
    level: Vec<u32>,
    reason: Vec<i64>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    heap: std::collections::BinaryHeap<(u64, u32)>,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
}

impl Solver {
    pub fn new(n_vars: usize) -> Solver {
        Solver {
            n_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n_vars],
            assign: vec![UNDEF; n_vars],
            level: vec![0; n_vars],
            reason: vec![-1; n_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n_vars],
            var_inc: 1.0,
            heap: std::collections::BinaryHeap::new(),
            phase: vec![false; n_vars],
            seen: vec![false; n_vars],
            ok: true,
        }
    }

    pub fn from_formula(f: &CnfFormula) -> Solver {
        let mut s = Solver::new(f.var_count() as usize);
        for clause in f.clauses() {
            s.add_clause(clause);
        }
        s
    }

    /// Add a clause of DIMACS literals. Tautologies are dropped, duplicates
    /// merged; an empty (or root-falsified) clause makes the instance unsat.
    pub fn add_clause(&mut self, dimacs: &[i32]) {
        if !self.ok {
            return;
        }
        let mut lits: Vec<Lit> = dimacs.iter().map(|&l| lit_from_dimacs(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0] == negate(w[1]) {
                return; // tautology
            }
        }
        // root-level simplification
        let mut reduced: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in &lits {
            match self.value(l) {
                Some(true) => return,
                Some(false) => {}
                None => reduced.push(l),
            }
        }
        match reduced.len() {
            0 => self.ok = false,
            1 => {
                if !self.enqueue(reduced[0], -1) {
                    self.ok = false;
                } else if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                let idx = self.clauses.len() as u32;
                self.watches[negate(reduced[0]) as usize].push(idx);
                self.watches[negate(reduced[1]) as usize].push(idx);
                self.clauses.push(reduced);
            }
        }
    }

    fn value(&self, l: Lit) -> Option<bool> {
        lit_value(&self.assign, l)
    }

    fn enqueue(&mut self, l: Lit, reason: i64) -> bool {
        match self.value(l) {
            Some(true) => true,
            Some(false) => false,
            None => {
                let v = var(l);
                self.assign[v] = if is_neg(l) { 0 } else { 1 };
                self.level[v] = self.trail_lim.len() as u32;
                self.reason[v] = reason;
                self.phase[v] = !is_neg(l);
                self.trail.push(l);
                true
            }
        }
    }

    /// Unit propagation; returns a conflicting clause index if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            // p became true; visit clauses watching ¬p
            let mut ws = std::mem::take(&mut self.watches[p as usize]);
            let mut i = 0;
            while i < ws.len() {
                let ci = ws[i];
                let clause = &mut self.clauses[ci as usize];
                // ensure the false literal is at position 1
                let false_lit = negate(p);
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                debug_assert_eq!(clause[1], false_lit);
                let first = clause[0];
                if lit_value(&self.assign, first) == Some(true) {
                    i += 1;
                    continue;
                }
                // look for a new literal to watch
                let mut moved = false;
                for k in 2..clause.len() {
                    if lit_value(&self.assign, clause[k]) != Some(false) {
                        clause.swap(1, k);
                        let new_watch = clause[1];
                        self.watches[negate(new_watch) as usize].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                // unit or conflicting
                if !self.enqueue(first, ci as i64) {
                    self.watches[p as usize] = ws;
                    return Some(ci);
                }
                i += 1;
            }
            self.watches[p as usize] = ws;
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.push((self.activity[v].to_bits(), v as u32));
    }

    fn decay(&mut self) {
        self.var_inc /= 0.95;
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0]; // placeholder for the UIP
        let mut counter = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let mut clause_idx = confl as usize;
        let current = self.trail_lim.len() as u32;
        loop {
            let start = if p.is_none() { 0 } else { 1 };
            for k in start..self.clauses[clause_idx].len() {
                let q = self.clauses[clause_idx][k];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] == current {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            // pick the next trail literal to resolve on
            loop {
                index -= 1;
                if self.seen[var(self.trail[index])] {
                    break;
                }
            }
            let lit = self.trail[index];
            let v = var(lit);
            self.seen[v] = false;
            counter -= 1;
            if counter == 0 {
                p = Some(lit);
                break;
            }
            clause_idx = self.reason[v] as usize;
            p = Some(lit);
        }
        learnt[0] = negate(p.unwrap());
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let backjump = learnt[1..]
            .iter()
            .map(|&l| self.level[var(l)])
            .max()
            .unwrap_or(0);
        // move a literal of the backjump level into the second watch slot
        if learnt.len() > 1 {
            let pos = learnt[1..]
                .iter()
                .position(|&l| self.level[var(l)] == backjump)
                .unwrap()
                + 1;
            learnt.swap(1, pos);
        }
        (learnt, backjump)
    }

    fn backtrack(&mut self, to_level: u32) {
        while self.trail_lim.len() as u32 > to_level {
            let lim = self.trail_lim.pop().unwrap();
            while self.trail.len() > lim {
                let l = self.trail.pop().unwrap();
                let v = var(l);
                self.assign[v] = UNDEF;
                self.reason[v] = -1;
                self.heap.push((self.activity[v].to_bits(), v as u32));
            }
        }
        self.qhead = self.trail.len();
    }

    fn decide(&mut self) -> Option<Lit> {
        while let Some((bits, v)) = self.heap.pop() {
            let v = v as usize;
            if self.assign[v] == UNDEF && bits == self.activity[v].to_bits() {
                let l = (v as u32) * 2 + if self.phase[v] { 0 } else { 1 };
                return Some(l);
            }
        }
        // heap may have gone stale wholesale; linear fallback
        (0..self.n_vars)
            .filter(|&v| self.assign[v] == UNDEF)
            .max_by(|&a, &b| self.activity[a].total_cmp(&self.activity[b]))
            .map(|v| (v as u32) * 2 + if self.phase[v] { 0 } else { 1 })
    }

    pub fn solve(&mut self) -> SolveOutcome {
        if !self.ok {
            return SolveOutcome::Unsat;
        }
        for v in 0..self.n_vars {
            self.heap.push((self.activity[v].to_bits(), v as u32));
        }
        if self.propagate().is_some() {
            return SolveOutcome::Unsat;
        }
        let mut conflicts_until_restart = luby(1) * 64;
        let mut restarts = 1u32;
        loop {
            match self.propagate() {
                Some(confl) => {
                    if self.trail_lim.is_empty() {
                        return SolveOutcome::Unsat;
                    }
                    let (learnt, backjump) = self.analyze(confl);
                    self.backtrack(backjump);
                    let asserting = learnt[0];
                    if learnt.len() == 1 {
                        if !self.enqueue(asserting, -1) {
                            return SolveOutcome::Unsat;
                        }
                    } else {
                        let idx = self.clauses.len() as u32;
                        self.watches[negate(learnt[0]) as usize].push(idx);
                        self.watches[negate(learnt[1]) as usize].push(idx);
                        self.clauses.push(learnt);
                        let ok = self.enqueue(asserting, idx as i64);
                        debug_assert!(ok);
                    }
                    self.decay();
                    if conflicts_until_restart > 0 {
                        conflicts_until_restart -= 1;
                        if conflicts_until_restart == 0 {
                            restarts += 1;
                            conflicts_until_restart = luby(restarts) * 64;
                            self.backtrack(0);
                        }
                    }
                }
                None => match self.decide() {
                    Some(l) => {
                        self.trail_lim.push(self.trail.len());
                        let ok = self.enqueue(l, -1);
                        debug_assert!(ok);
                    }
                    None => {
                        let model: Vec<bool> =
                            self.assign.iter().map(|&a| a == 1).collect();
                        return SolveOutcome::Sat(model);
                    }
                },
            }
        }
    }
}

/// The Luby restart sequence: 1,1,2,1,1,2,4,...
fn luby(i: u32) -> u64 {
    let mut k = 1u32;
    while (1u64 << k) < (i as u64 + 1) {
        k += 1;
    }
    if (1u64 << k) == i as u64 + 1 {
        return 1u64 << (k - 1);
    }
    luby(i + 1 - (1 << (k - 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve_clauses(n: u32, clauses: &[&[i32]]) -> SolveOutcome {
        let mut s = Solver::new(n as usize);
        for c in clauses {
            s.add_clause(c);
        }
        s.solve()
    }

    #[test]
    fn trivial_cases() {
        assert!(matches!(solve_clauses(1, &[&[1]]), SolveOutcome::Sat(_)));
        assert!(matches!(solve_clauses(1, &[&[1], &[-1]]), SolveOutcome::Unsat));
        assert!(matches!(solve_clauses(0, &[]), SolveOutcome::Sat(_)));
        assert!(matches!(solve_clauses(2, &[&[]]), SolveOutcome::Unsat));
    }

    #[test]
    fn tautology_and_duplicates() {
        assert!(matches!(
            solve_clauses(2, &[&[1, -1], &[2, 2], &[-2, -2, 1]]),
            SolveOutcome::Sat(_)
        ));
    }

    #[test]
    fn pigeonhole_3_into_2_unsat() {
        // vars p(i,j) = 1 + i*2 + j for pigeon i in 0..3, hole j in 0..2
        let p = |i: i32, j: i32| 1 + i * 2 + j;
        let mut clauses: Vec<Vec<i32>> = Vec::new();
        for i in 0..3 {
            clauses.push(vec![p(i, 0), p(i, 1)]);
        }
        for j in 0..2 {
            for a in 0..3 {
                for b in (a + 1)..3 {
                    clauses.push(vec![-p(a, j), -p(b, j)]);
                }
            }
        }
        let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
        assert!(matches!(solve_clauses(6, &refs), SolveOutcome::Unsat));
    }

    #[test]
    fn random_3sat_agrees_with_exhaustive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let n = rng.gen_range(3..=10u32);
            let m = rng.gen_range(1..=(4 * n));
            let clauses: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = rng.gen_range(1..=n) as i32;
                            if rng.gen_bool(0.5) {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            // exhaustive check
            let mut any = false;
            'outer: for bits in 0..(1u32 << n) {
                for c in &clauses {
                    if !c.iter().any(|&l| {
                        let v = l.unsigned_abs() - 1;
                        ((bits >> v) & 1 == 1) == (l > 0)
                    }) {
                        continue 'outer;
                    }
                }
                any = true;
                break;
            }
            let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
            match solve_clauses(n, &refs) {
                SolveOutcome::Sat(model) => {
                    assert!(any, "solver said SAT, exhaustive says UNSAT");
                    for c in &clauses {
                        assert!(c.iter().any(|&l| {
                            let v = (l.unsigned_abs() - 1) as usize;
                            model[v] == (l > 0)
                        }));
                    }
                }
                SolveOutcome::Unsat => assert!(!any, "solver said UNSAT, exhaustive says SAT"),
            }
        }
    }
}
