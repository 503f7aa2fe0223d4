//! Solve dispatch: the embedded CDCL solver, or an external executable
//! speaking the SAT-competition interface (invoked with the DIMACS file
//! path; answers with an `s SATISFIABLE` / `s UNSATISFIABLE` line and
//! `v` model lines). SAT models from either backend are verified against
//! every clause before being returned; a model that does not check out is
//! a backend error, never a verdict.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use super::solver::{SolveOutcome, Solver};
use super::{to_dimacs, CnfFormula};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    Embedded,
    External(PathBuf),
}

impl Backend {
    /// Parse `embedded` or `external:<path>`.
    pub fn parse(s: &str) -> Option<Backend> {
        if s == "embedded" {
            Some(Backend::Embedded)
        } else {
            s.strip_prefix("external:").map(|p| Backend::External(PathBuf::from(p)))
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat(Vec<bool>),
    Unsat,
}

#[derive(Debug)]
pub enum BackendError {
    Io(std::io::Error),
    /// The external process could not be started.
    Spawn { path: PathBuf, error: std::io::Error },
    /// The external process terminated without a recognizable verdict.
    Unparseable { path: PathBuf, detail: String },
    /// A SAT verdict carried a model violating some clause.
    BadModel { backend: String },
}

impl fmt::Display for BackendError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendError::Io(e) => write!(f, "i/o error: {e}"),
            BackendError::Spawn { path, error } => {
                write!(f, "failed to run solver '{}': {error}", path.display())
            }
            BackendError::Unparseable { path, detail } => {
                write!(f, "no verdict from solver '{}': {detail}", path.display())
            }
            BackendError::BadModel { backend } => {
                write!(f, "{backend} returned a model violating the formula")
            }
        }
    }
}

impl std::error::Error for BackendError {}

impl From<std::io::Error> for BackendError {
    fn from(e: std::io::Error) -> Self {
        BackendError::Io(e)
    }
}

/// Solve a formula on the chosen backend.
pub fn solve(f: &CnfFormula, backend: &Backend) -> Result<Verdict, BackendError> {
    match backend {
        Backend::Embedded => {
            let mut solver = Solver::from_formula(f);
            match solver.solve() {
                SolveOutcome::Sat(model) => {
                    if !f.satisfied_by(&model) {
                        return Err(BackendError::BadModel { backend: "embedded solver".into() });
                    }
                    Ok(Verdict::Sat(model))
                }
                SolveOutcome::Unsat => Ok(Verdict::Unsat),
            }
        }
        Backend::External(path) => solve_external(f, path),
    }
}

fn solve_external(f: &CnfFormula, path: &PathBuf) -> Result<Verdict, BackendError> {
    let dir = std::env::temp_dir();
    let file = dir.join(format!(
        "udg-{}-{}.cnf",
        std::process::id(),
        unique_counter()
    ));
    {
        let mut out = std::fs::File::create(&file)?;
        to_dimacs(f, &mut out)?;
        out.flush()?;
    }
    let output = Command::new(path)
        .arg(&file)
        .output()
        .map_err(|error| BackendError::Spawn { path: path.clone(), error });
    let _ = std::fs::remove_file(&file);
    let output = output?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    let mut verdict: Option<bool> = None;
    let mut lits: Vec<i32> = Vec::new();
    for line in stdout.lines() {
        let line = line.trim();
        if line.starts_with("s ") {
            if line.contains("UNSATISFIABLE") {
                verdict = Some(false);
            } else if line.contains("SATISFIABLE") {
                verdict = Some(true);
            }
        } else if let Some(rest) = line.strip_prefix("v ") {
            for tok in rest.split_whitespace() {
                if let Ok(l) = tok.parse::<i32>() {
                    if l != 0 {
                        lits.push(l);
                    }
                }
            }
        }
    }
    match verdict {
        None => Err(BackendError::Unparseable {
            path: path.clone(),
            detail: format!(
                "exit {:?}; no 's' line in {} bytes of output",
                output.status.code(),
                stdout.len()
            ),
        }),
        Some(false) => Ok(Verdict::Unsat),
        Some(true) => {
            let mut model = vec![false; f.var_count() as usize];
            for l in lits {
                let v = (l.unsigned_abs() - 1) as usize;
                if v < model.len() {
                    model[v] = l > 0;
                }
            }
            if !f.satisfied_by(&model) {
                return Err(BackendError::BadModel {
                    backend: format!("external solver '{}'", path.display()),
                });
            }
            Ok(Verdict::Sat(model))
        }
    }
}

fn unique_counter() -> u64 {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    COUNTER.fetch_add(1, Ordering::Relaxed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct;
    use crate::sat::encode_k_coloring;

    #[test]
    fn embedded_triangle_verdicts() {
        let g = construct("MOSER").unwrap();
        let f3 = encode_k_coloring(&g, 3);
        let f4 = encode_k_coloring(&g, 4);
        assert!(matches!(solve(&f3, &Backend::Embedded).unwrap(), Verdict::Unsat));
        match solve(&f4, &Backend::Embedded).unwrap() {
            Verdict::Sat(model) => assert!(f4.satisfied_by(&model)),
            Verdict::Unsat => panic!("MOSER is 4-colorable"),
        }
    }

    #[test]
    fn missing_external_solver_is_an_error() {
        let g = construct("H").unwrap();
        let f = encode_k_coloring(&g, 3);
        let missing = Backend::External(PathBuf::from("/nonexistent/solver-binary"));
        assert!(matches!(solve(&f, &missing), Err(BackendError::Spawn { .. })));
    }

    #[test]
    fn backend_parse() {
        assert_eq!(Backend::parse("embedded"), Some(Backend::Embedded));
        assert_eq!(
            Backend::parse("external:/usr/bin/kissat"),
            Some(Backend::External(PathBuf::from("/usr/bin/kissat")))
        );
        assert_eq!(Backend::parse("wat"), None);
    }
}
