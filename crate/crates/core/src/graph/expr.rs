//! The graph-expression language.
//!
//! ```text
//! expr    := term (("+" | "(+)") term)*        union / Minkowski, left assoc
//! term    := [scalar "*"] atom ["^" rotspec]
//! scalar  := "i" | "eta" ["^" int] | "rho" | "i/sqrt3" | rational
//! rotspec := uint                               meaning {-m..m}
//!          | "{" int ("," int)* "}"
//! atom    := "H" | "D" | "MOSER" | "V25" | "V31" | "V31S" | "V37" | "V37T"
//!          | "V49" | "(" expr ")" | "trim(" expr "," rational ")"
//! ```
//!
//! `G^m` is the union of the `eta^a G` for `a` in `{-m..m}`; `(+)` is the
//! Minkowski sum. Two of the paper-named graphs exist in two variants that
//! share a vertex count: `V31` (the five-rotation wheel union `H^2`) vs
//! `V31S` (`H^1 + i*sqrt3`-scaled crown, the Minkowski factor of the
//! 361-vertex graph), and `V37` (`H^1 + i/sqrt3 * H^1`) vs `V37T`
//! (`H^1 + rho * H^1`, the lattice-type factor).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::exact::{ExactPoint, ExactReal, Rational, Rotor, RotorName};

use super::{rhombus_points, wheel_points, UnitGraph};

/// Scalar multipliers allowed in front of an atom.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Scalar {
    I,
    Eta(i32),
    Rho,
    IOverSqrt3,
    Rational(Rational),
}

impl Scalar {
    fn apply(&self, p: &ExactPoint) -> ExactPoint {
        match self {
            Scalar::I => Rotor::named(RotorName::I).apply(p),
            Scalar::Eta(k) => Rotor::eta_pow(*k).mul(p),
            Scalar::Rho => Rotor::rho().mul(p),
            Scalar::IOverSqrt3 => Rotor::named(RotorName::IOverSqrt3).apply(p),
            Scalar::Rational(q) => p.scale(q),
        }
    }
}

/// Abstract syntax of a graph expression.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GraphExpr {
    Atom(String),
    Scaled(Scalar, Box<GraphExpr>),
    RotSet(Box<GraphExpr>, Vec<i32>),
    Union(Box<GraphExpr>, Box<GraphExpr>),
    Minkowski(Box<GraphExpr>, Box<GraphExpr>),
    Trim(Box<GraphExpr>, Rational),
}

/// Expression parse or evaluation failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseExprError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.offset + 1, self.message)
    }
}

impl std::error::Error for ParseExprError {}

impl GraphExpr {
    /// Evaluate to a strict unit-distance graph. Intermediate results are
    /// plain point sets; the strict edge set is computed once at the end.
    pub fn eval(&self) -> Result<UnitGraph, ParseExprError> {
        Ok(UnitGraph::from_points(self.eval_points()?))
    }

    pub fn eval_points(&self) -> Result<Vec<ExactPoint>, ParseExprError> {
        match self {
            GraphExpr::Atom(name) => atom_points(name),
            GraphExpr::Scaled(s, inner) => {
                Ok(inner.eval_points()?.iter().map(|p| s.apply(p)).collect())
            }
            GraphExpr::RotSet(inner, exps) => {
                let pts = inner.eval_points()?;
                let mut out = Vec::with_capacity(pts.len() * exps.len());
                for &k in exps {
                    let rot = Rotor::eta_pow(k);
                    out.extend(pts.iter().map(|p| rot.mul(p)));
                }
                Ok(out)
            }
            GraphExpr::Union(a, b) => {
                let mut pts = a.eval_points()?;
                pts.extend(b.eval_points()?);
                Ok(pts)
            }
            GraphExpr::Minkowski(a, b) => {
                let pa = dedup_points(a.eval_points()?);
                let pb = dedup_points(b.eval_points()?);
                let mut out = Vec::with_capacity(pa.len() * pb.len());
                for x in &pa {
                    for y in &pb {
                        out.push(x + y);
                    }
                }
                Ok(out)
            }
            GraphExpr::Trim(inner, r_sq) => {
                let bound = ExactReal::from_rational(r_sq.clone());
                Ok(inner
                    .eval_points()?
                    .into_iter()
                    .filter(|p| (&p.norm_sq() - &bound).signum() <= 0)
                    .collect())
            }
        }
    }
}

fn dedup_points(pts: Vec<ExactPoint>) -> Vec<ExactPoint> {
    let mut seen = std::collections::HashSet::new();
    pts.into_iter().filter(|p| seen.insert(p.clone())).collect()
}

fn atom_points(name: &str) -> Result<Vec<ExactPoint>, ParseExprError> {
    let rot_union = |m: i32| -> Vec<ExactPoint> {
        GraphExpr::RotSet(Box::new(GraphExpr::Atom("H".into())), (-m..=m).collect())
            .eval_points()
            .expect("H rotation set")
    };
    let scaled = |s: Scalar, pts: Vec<ExactPoint>| -> Vec<ExactPoint> {
        pts.iter().map(|p| s.apply(p)).collect()
    };
    match name {
        "H" => Ok(wheel_points()),
        "D" => Ok(rhombus_points()),
        "MOSER" => {
            let mut pts = rhombus_points();
            let rot = Rotor::eta_pow(2);
            pts.extend(rhombus_points().iter().map(|p| rot.mul(p)));
            Ok(pts)
        }
        // V25 = H^1 ∪ (i/sqrt3) H^0
        "V25" => {
            let mut pts = rot_union(1);
            pts.extend(scaled(Scalar::IOverSqrt3, wheel_points()));
            Ok(pts)
        }
        // V31 = H^2, the五-rotation 31-vertex graph
        "V31" => Ok(rot_union(2)),
        // V31S = H^1 ∪ i*sqrt3 * H^{-1,1}: the S361 Minkowski factor
        "V31S" => {
            let mut pts = rot_union(1);
            let crown: Vec<ExactPoint> = [-1i32, 1]
                .iter()
                .flat_map(|&k| {
                    let rot = Rotor::eta_pow(k);
                    wheel_points().into_iter().map(move |p| rot.mul(&p))
                })
                .collect();
            let i_sqrt3 = ExactPoint::new(ExactReal::zero(), ExactReal::sqrt(3));
            pts.extend(crown.iter().map(|p| i_sqrt3.mul(p)));
            Ok(pts)
        }
        // V37 = H^1 ∪ (i/sqrt3) H^1
        "V37" => {
            let mut pts = rot_union(1);
            pts.extend(scaled(Scalar::IOverSqrt3, rot_union(1)));
            Ok(pts)
        }
        // V37T = H^1 ∪ rho H^1: the lattice-type factor
        "V37T" => {
            let mut pts = rot_union(1);
            pts.extend(scaled(Scalar::Rho, rot_union(1)));
            Ok(pts)
        }
        // V49 = H^2 ∪ (i/sqrt3) H^1
        "V49" => {
            let mut pts = rot_union(2);
            pts.extend(scaled(Scalar::IOverSqrt3, rot_union(1)));
            Ok(pts)
        }
        _ => Err(ParseExprError { offset: 0, message: format!("unknown atom '{name}'") }),
    }
}

/// Parse and evaluate in one step.
pub fn construct(src: &str) -> Result<UnitGraph, ParseExprError> {
    src.parse::<GraphExpr>()?.eval()
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, message: impl Into<String>) -> ParseExprError {
        ParseExprError { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(self.src[start..self.pos].to_string())
        }
    }

    fn uint(&mut self) -> Result<i64, ParseExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        self.src[start..self.pos].parse().map_err(|_| self.err("number out of range"))
    }

    fn int(&mut self) -> Result<i64, ParseExprError> {
        let neg = self.eat('-');
        let n = self.uint()?;
        Ok(if neg { -n } else { n })
    }

    fn rational(&mut self) -> Result<Rational, ParseExprError> {
        let p = self.int()?;
        if self.eat('/') {
            let at = self.pos;
            let q = self.uint()?;
            if q == 0 {
                return Err(ParseExprError { offset: at, message: "zero denominator".into() });
            }
            Ok(Rational::new(BigInt::from(p), BigInt::from(q)))
        } else {
            Ok(Rational::from_integer(BigInt::from(p)))
        }
    }
}

impl FromStr for GraphExpr {
    type Err = ParseExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lex = Lexer { src: s, pos: 0 };
        let e = parse_expr(&mut lex)?;
        lex.skip_ws();
        if lex.pos != s.len() {
            return Err(lex.err("trailing input"));
        }
        Ok(e)
    }
}

fn parse_expr(lex: &mut Lexer) -> Result<GraphExpr, ParseExprError> {
    let mut acc = parse_term(lex)?;
    loop {
        // "(+)" must be tried before "(": an expression cannot start with '+'.
        if lex.eat_str("(+)") {
            let rhs = parse_term(lex)?;
            acc = GraphExpr::Minkowski(Box::new(acc), Box::new(rhs));
        } else if lex.eat('+') {
            let rhs = parse_term(lex)?;
            acc = GraphExpr::Union(Box::new(acc), Box::new(rhs));
        } else {
            return Ok(acc);
        }
    }
}

fn parse_term(lex: &mut Lexer) -> Result<GraphExpr, ParseExprError> {
    lex.skip_ws();
    let scalar = parse_scalar_prefix(lex)?;
    let mut atom = parse_atom(lex)?;
    if lex.eat('^') {
        let spec = parse_rotspec(lex)?;
        atom = GraphExpr::RotSet(Box::new(atom), spec);
    }
    Ok(match scalar {
        Some(s) => GraphExpr::Scaled(s, Box::new(atom)),
        None => atom,
    })
}

/// A scalar prefix is only present when followed by `*`.
fn parse_scalar_prefix(lex: &mut Lexer) -> Result<Option<Scalar>, ParseExprError> {
    let save = lex.pos;
    let scalar = if lex.eat_str("i/sqrt3") {
        Some(Scalar::IOverSqrt3)
    } else if lex.eat_str("eta") {
        let k = if lex.eat('^') { lex.int()? as i32 } else { 1 };
        Some(Scalar::Eta(k))
    } else if lex.eat_str("rho") {
        Some(Scalar::Rho)
    } else {
        match lex.peek() {
            Some('i') => {
                lex.pos += 1;
                Some(Scalar::I)
            }
            Some(c) if c.is_ascii_digit() || c == '-' => Some(Scalar::Rational(lex.rational()?)),
            _ => None,
        }
    };
    match scalar {
        Some(s) if lex.eat('*') => Ok(Some(s)),
        _ => {
            lex.pos = save;
            Ok(None)
        }
    }
}

fn parse_rotspec(lex: &mut Lexer) -> Result<Vec<i32>, ParseExprError> {
    if lex.eat('{') {
        let mut exps = vec![lex.int()? as i32];
        while lex.eat(',') {
            exps.push(lex.int()? as i32);
        }
        lex.expect('}')?;
        Ok(exps)
    } else {
        let at = lex.pos;
        let m = lex.uint()?;
        if m > 16 {
            return Err(ParseExprError { offset: at, message: "rotation range too large".into() });
        }
        Ok((-(m as i32)..=(m as i32)).collect())
    }
}

fn parse_atom(lex: &mut Lexer) -> Result<GraphExpr, ParseExprError> {
    if lex.eat_str("trim(") {
        let inner = parse_expr(lex)?;
        lex.expect(',')?;
        let at = lex.pos;
        let r = lex.rational()?;
        if r.numer().sign() == num_bigint::Sign::Minus {
            return Err(ParseExprError { offset: at, message: "trim radius must be >= 0".into() });
        }
        lex.expect(')')?;
        return Ok(GraphExpr::Trim(Box::new(inner), r));
    }
    if lex.eat('(') {
        let inner = parse_expr(lex)?;
        lex.expect(')')?;
        return Ok(inner);
    }
    let at = lex.pos;
    match lex.ident() {
        Some(name) => {
            // Validate the atom name now so errors point at the right spot.
            atom_points(&name)
                .map(|_| GraphExpr::Atom(name))
                .map_err(|e| ParseExprError { offset: at, message: e.message })
        }
        None => Err(lex.err("expected an atom or '('")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(src: &str) -> usize {
        construct(src).unwrap().vertex_count()
    }

    #[test]
    fn rotation_set_counts() {
        assert_eq!(count("H^1"), 19); // 3 wheel copies sharing only the origin
        assert_eq!(count("H^2"), 31);
        assert_eq!(count("H^0"), 7);
        assert_eq!(count("H^{-1,1}"), 13);
    }

    #[test]
    fn named_graph_counts() {
        assert_eq!(count("V25"), 25);
        assert_eq!(count("V31"), 31);
        assert_eq!(count("V31S"), 31);
        assert_eq!(count("V37"), 37);
        assert_eq!(count("V37T"), 37);
        assert_eq!(count("V49"), 49);
    }

    #[test]
    fn union_forms_match_named_atoms() {
        assert_eq!(count("H^1 + i/sqrt3*H^0"), 25);
        assert_eq!(count("H^1 + i/sqrt3*H^1"), 37);
        assert_eq!(count("H^2 + i/sqrt3*H^1"), 49);
    }

    #[test]
    fn moser_spindle_from_rhombi() {
        let g = construct("D + eta^2*D").unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (7, 11));
        assert_eq!(g, construct("MOSER").unwrap());
    }

    #[test]
    fn rotset_zero_and_single_minkowski_are_identity() {
        assert_eq!(construct("H^0").unwrap(), construct("H").unwrap());
        assert_eq!(construct("(H)").unwrap(), construct("H").unwrap());
    }

    #[test]
    fn trim_and_scale() {
        assert_eq!(count("trim(H, 0)"), 1);
        assert_eq!(count("trim(H, 1)"), 7);
        assert_eq!(count("trim(H^2, 1/2)"), 1);
        assert_eq!(count("2*H"), 7);
    }

    #[test]
    fn minkowski_operator() {
        assert_eq!(count("H (+) H"), 19);
        let e: GraphExpr = "V49 (+) V37".parse().unwrap();
        assert!(matches!(e, GraphExpr::Minkowski(_, _)));
    }

    #[test]
    fn parse_errors() {
        assert!("Q7".parse::<GraphExpr>().is_err());
        assert!("H^".parse::<GraphExpr>().is_err());
        assert!("H +".parse::<GraphExpr>().is_err());
        assert!("trim(H, -1)".parse::<GraphExpr>().is_err());
    }
}
