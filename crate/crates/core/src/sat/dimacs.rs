//! DIMACS CNF reading and writing. The writer is deterministic to the
//! byte: header `p cnf <vars> <clauses>`, one clause per line, literals
//! space-separated and 0-terminated, `\n` line endings.

use std::fmt;
use std::io::{self, BufRead, Write};

use super::CnfFormula;

#[derive(Debug)]
pub enum DimacsError {
    Io(io::Error),
    /// Malformed content, with the 1-based line number.
    Parse { line: usize, message: String },
}

impl fmt::Display for DimacsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimacsError::Io(e) => write!(f, "i/o error: {e}"),
            DimacsError::Parse { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl std::error::Error for DimacsError {}

impl From<io::Error> for DimacsError {
    fn from(e: io::Error) -> Self {
        DimacsError::Io(e)
    }
}

pub fn to_dimacs(f: &CnfFormula, w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "p cnf {} {}", f.var_count(), f.clause_count())?;
    for clause in f.clauses() {
        for lit in clause {
            write!(w, "{lit} ")?;
        }
        writeln!(w, "0")?;
    }
    Ok(())
}

pub fn to_dimacs_string(f: &CnfFormula) -> String {
    let mut buf = Vec::new();
    to_dimacs(f, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("dimacs is ascii")
}

pub fn from_dimacs(r: impl BufRead) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            if header.is_some() {
                return Err(DimacsError::Parse { line: lineno, message: "duplicate header".into() });
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(DimacsError::Parse {
                    line: lineno,
                    message: "expected 'p cnf <vars> <clauses>'".into(),
                });
            }
            let vars = parts[1].parse().map_err(|_| DimacsError::Parse {
                line: lineno,
                message: "bad variable count".into(),
            })?;
            let count = parts[2].parse().map_err(|_| DimacsError::Parse {
                line: lineno,
                message: "bad clause count".into(),
            })?;
            header = Some((vars, count));
            continue;
        }
        let (vars, _) = header.ok_or(DimacsError::Parse {
            line: lineno,
            message: "clause before header".into(),
        })?;
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| DimacsError::Parse {
                line: lineno,
                message: format!("bad literal '{tok}'"),
            })?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() > vars {
                    return Err(DimacsError::Parse {
                        line: lineno,
                        message: format!("literal {lit} exceeds declared {vars} variables"),
                    });
                }
                current.push(lit);
            }
        }
    }
    let (vars, declared) = header.ok_or(DimacsError::Parse { line: 0, message: "missing header".into() })?;
    if !current.is_empty() {
        return Err(DimacsError::Parse { line: 0, message: "unterminated clause".into() });
    }
    if clauses.len() != declared {
        return Err(DimacsError::Parse {
            line: 0,
            message: format!("declared {declared} clauses, found {}", clauses.len()),
        });
    }
    Ok(CnfFormula::with_parts(vars, clauses, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::construct;
    use crate::sat::encode_k_coloring;

    #[test]
    fn exact_bytes() {
        let g = construct("trim(H, 0)").unwrap();
        let f = encode_k_coloring(&g, 2);
        assert_eq!(to_dimacs_string(&f), "p cnf 2 1\n1 2 0\n");
    }

    #[test]
    fn roundtrip_is_verbatim() {
        let g = construct("MOSER").unwrap();
        let f = encode_k_coloring(&g, 4);
        let text = to_dimacs_string(&f);
        let back = from_dimacs(text.as_bytes()).unwrap();
        assert_eq!(back.var_count(), f.var_count());
        assert_eq!(back.clauses(), f.clauses());
        assert_eq!(to_dimacs_string(&back), text);
    }

    #[test]
    fn comments_and_errors() {
        let ok = from_dimacs("c hi\np cnf 2 1\n1 -2 0\n".as_bytes()).unwrap();
        assert_eq!(ok.clauses(), &[vec![1, -2]]);
        assert!(from_dimacs("p cnf 1 1\n2 0\n".as_bytes()).is_err());
        assert!(from_dimacs("1 0\n".as_bytes()).is_err());
        assert!(from_dimacs("p cnf 1 2\n1 0\n".as_bytes()).is_err());
        assert!(from_dimacs("p cnf 1 1\n1\n".as_bytes()).is_err());
    }
}
