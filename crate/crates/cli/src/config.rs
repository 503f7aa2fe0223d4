//! Flat `key = value` run configuration. Unknown keys are rejected so a
//! typo cannot silently fall back to a default.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;

use udg_core::checker::{CompanionKind, KeyProperty};
use udg_core::exact::{ExactPoint, Rotor, RotorName};
use udg_core::minimize::{ExpansionStep, Strategy, SymmetryMode};
use udg_core::sat::Backend;

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// A parsed run configuration; fields mirror the CLI flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub expr: Option<String>,
    pub graph: Option<PathBuf>,
    pub k: u32,
    pub companion: CompanionSpec,
    pub backend: Backend,
    pub jobs: usize,
    pub budget: usize,
    pub out: Option<PathBuf>,
    pub max_degree: usize,
    pub disk_radius: Option<BigRational>,
    pub input_symmetry: SymmetryMode,
    pub output_symmetry: SymmetryMode,
    pub schedule: Vec<ScheduleItem>,
    pub mis_cap: usize,
    pub iteration_cap: usize,
    pub reserve_refresh: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            expr: None,
            graph: None,
            k: 4,
            companion: CompanionSpec::None,
            backend: Backend::Embedded,
            jobs: 0,
            budget: 1_000_000,
            out: None,
            max_degree: 2,
            disk_radius: None,
            input_symmetry: SymmetryMode::Trivial,
            output_symmetry: SymmetryMode::Trivial,
            schedule: vec![],
            mis_cap: 100_000,
            iteration_cap: 64,
            reserve_refresh: 4,
        }
    }
}

/// Companion selection, resolved against a concrete graph later.
#[derive(Debug, Clone)]
pub enum CompanionSpec {
    None,
    /// `graph:<path>:<rotor>`
    Graph { path: PathBuf, rotor: String },
    /// `mono:<u>,<v>` — vertex indices
    Mono { u: u32, v: u32 },
    /// `nonmono:<i>,<j>,...` — vertex indices
    NonMono { set: Vec<u32> },
}

impl CompanionSpec {
    pub fn parse(s: &str) -> Result<CompanionSpec, String> {
        if s == "none" {
            return Ok(CompanionSpec::None);
        }
        if let Some(rest) = s.strip_prefix("graph:") {
            let (path, rotor) = rest
                .rsplit_once(':')
                .ok_or("expected graph:<path>:<rotor>")?;
            return Ok(CompanionSpec::Graph {
                path: PathBuf::from(path),
                rotor: rotor.to_string(),
            });
        }
        if let Some(rest) = s.strip_prefix("mono:") {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 2 {
                return Err("expected mono:<u>,<v>".into());
            }
            let u = parts[0].trim().parse().map_err(|_| "bad vertex index")?;
            let v = parts[1].trim().parse().map_err(|_| "bad vertex index")?;
            return Ok(CompanionSpec::Mono { u, v });
        }
        if let Some(rest) = s.strip_prefix("nonmono:") {
            let set: Result<Vec<u32>, _> =
                rest.split(',').map(|p| p.trim().parse::<u32>()).collect();
            return Ok(CompanionSpec::NonMono { set: set.map_err(|_| "bad vertex index")? });
        }
        Err(format!("unknown companion '{s}'"))
    }

    /// Resolve to a concrete key-property companion against a graph.
    pub fn realize(
        &self,
        g: &udg_core::graph::UnitGraph,
        k: u32,
    ) -> Result<KeyProperty, String> {
        let companion = match self {
            CompanionSpec::None => CompanionKind::None,
            CompanionSpec::Mono { u, v } => {
                let n = g.vertex_count() as u32;
                if *u >= n || *v >= n {
                    return Err("mono companion vertex index out of range".into());
                }
                CompanionKind::MonoEdge {
                    a: g.vertices()[*u as usize].clone(),
                    b: g.vertices()[*v as usize].clone(),
                }
            }
            CompanionSpec::NonMono { set } => {
                let n = g.vertex_count() as u32;
                let points: Result<Vec<ExactPoint>, String> = set
                    .iter()
                    .map(|&i| {
                        if i < n {
                            Ok(g.vertices()[i as usize].clone())
                        } else {
                            Err("nonmono companion vertex index out of range".to_string())
                        }
                    })
                    .collect();
                CompanionKind::NonMonoClique { points: points? }
            }
            CompanionSpec::Graph { path, rotor } => {
                let companion_graph = crate::graphio::read_graph_file(path)
                    .map_err(|e| format!("companion graph: {e}"))?;
                CompanionKind::Subgraph { graph: companion_graph, rotor: parse_rotor(rotor)? }
            }
        };
        Ok(KeyProperty { k, companion })
    }
}

pub fn parse_rotor(s: &str) -> Result<Rotor, String> {
    match s {
        "eta" => Ok(Rotor::named(RotorName::Eta)),
        "eta_inv" => Ok(Rotor::named(RotorName::EtaInv)),
        "rho" => Ok(Rotor::named(RotorName::Rho)),
        "i" => Ok(Rotor::named(RotorName::I)),
        "i/sqrt3" => Ok(Rotor::named(RotorName::IOverSqrt3)),
        "conj_sqrt33" => Ok(Rotor::named(RotorName::ConjSqrt33)),
        "id" | "identity" => Ok(Rotor::Multiplier(ExactPoint::from_integers(1, 0))),
        _ => {
            if let Some(k) = s.strip_prefix("eta^") {
                let k: i32 = k.parse().map_err(|_| format!("bad rotor power '{s}'"))?;
                return Ok(Rotor::Multiplier(Rotor::eta_pow(k)));
            }
            Err(format!("unknown rotor '{s}'"))
        }
    }
}

#[derive(Debug, Clone)]
pub enum ScheduleItem {
    Fill(usize),
    Orbits(usize),
}

impl ScheduleItem {
    pub fn to_step(&self) -> ExpansionStep {
        match self {
            ScheduleItem::Fill(n) => ExpansionStep::FillPartialOrbits { max_orbits: *n },
            ScheduleItem::Orbits(n) => ExpansionStep::AddSmallestOrbits { count: *n },
        }
    }
}

fn parse_schedule(s: &str) -> Result<Vec<ScheduleItem>, String> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|item| {
            let item = item.trim();
            if let Some(n) = item.strip_prefix("fill:") {
                n.parse().map(ScheduleItem::Fill).map_err(|_| format!("bad count in '{item}'"))
            } else if let Some(n) = item.strip_prefix("orbits:") {
                n.parse().map(ScheduleItem::Orbits).map_err(|_| format!("bad count in '{item}'"))
            } else {
                Err(format!("unknown schedule item '{item}' (use fill:<n> or orbits:<n>)"))
            }
        })
        .collect()
}

fn parse_symmetry(s: &str) -> Result<SymmetryMode, String> {
    match s {
        "trivial" | "1" => Ok(SymmetryMode::Trivial),
        "geometric" | "auto" => Ok(SymmetryMode::Geometric),
        _ => Err(format!("unknown symmetry mode '{s}'")),
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.trim().parse().map_err(|_| format!("bad rational '{s}'"))?;
    let d: BigInt = den.trim().parse().map_err(|_| format!("bad rational '{s}'"))?;
    if d == BigInt::from(0) {
        return Err("zero denominator".into());
    }
    Ok(BigRational::new(n, d))
}

impl RunConfig {
    /// Parse the flat `key = value` format. `#` starts a comment.
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen: HashMap<String, usize> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError {
                line: lineno,
                message: "expected 'key = value'".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            if let Some(first) = seen.insert(key.to_string(), lineno) {
                return Err(ConfigError {
                    line: lineno,
                    message: format!("duplicate key '{key}' (first on line {first})"),
                });
            }
            let fail = |message: String| ConfigError { line: lineno, message };
            match key {
                "expr" => cfg.expr = Some(value.to_string()),
                "graph" => cfg.graph = Some(PathBuf::from(value)),
                "k" => cfg.k = value.parse().map_err(|_| fail("bad k".into()))?,
                "companion" => {
                    cfg.companion = CompanionSpec::parse(value).map_err(fail)?;
                }
                "backend" => {
                    cfg.backend = Backend::parse(value)
                        .ok_or_else(|| fail(format!("unknown backend '{value}'")))?;
                }
                "jobs" => cfg.jobs = value.parse().map_err(|_| fail("bad jobs".into()))?,
                "budget" => cfg.budget = value.parse().map_err(|_| fail("bad budget".into()))?,
                "out" => cfg.out = Some(PathBuf::from(value)),
                "max_degree" => {
                    cfg.max_degree = value.parse().map_err(|_| fail("bad max_degree".into()))?;
                }
                "disk_radius" => {
                    cfg.disk_radius = Some(parse_rational(value).map_err(fail)?);
                }
                "input_symmetry" => cfg.input_symmetry = parse_symmetry(value).map_err(fail)?,
                "output_symmetry" => cfg.output_symmetry = parse_symmetry(value).map_err(fail)?,
                "expand" => cfg.schedule = parse_schedule(value).map_err(fail)?,
                "mis_cap" => cfg.mis_cap = value.parse().map_err(|_| fail("bad mis_cap".into()))?,
                "iteration_cap" => {
                    cfg.iteration_cap =
                        value.parse().map_err(|_| fail("bad iteration_cap".into()))?;
                }
                "reserve_refresh" => {
                    cfg.reserve_refresh =
                        value.parse().map_err(|_| fail("bad reserve_refresh".into()))?;
                }
                _ => {
                    return Err(ConfigError {
                        line: lineno,
                        message: format!("unknown key '{key}'"),
                    })
                }
            }
        }
        Ok(cfg)
    }

    pub fn strategy(&self) -> Strategy {
        Strategy {
            schedule: self.schedule.iter().map(|s| s.to_step()).collect(),
            max_hyperedge_degree: self.max_degree,
            input_symmetry: self.input_symmetry,
            output_symmetry: self.output_symmetry,
            check_budget: self.budget,
            mis_cap: self.mis_cap,
            reserve_refresh: self.reserve_refresh,
            iteration_cap: self.iteration_cap,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let cfg = RunConfig::parse(
            "k = 3\nexpr = MOSER\nexpand = fill:2, orbits:1\nbudget = 500\n# comment\n",
        )
        .unwrap();
        assert_eq!(cfg.k, 3);
        assert_eq!(cfg.schedule.len(), 2);
        assert_eq!(cfg.budget, 500);
        assert!(RunConfig::parse("mystery = 1\n").is_err());
        assert!(RunConfig::parse("k = 3\nk = 4\n").is_err());
        assert!(RunConfig::parse("backend = warp\n").is_err());
    }

    #[test]
    fn companion_specs() {
        assert!(matches!(CompanionSpec::parse("none"), Ok(CompanionSpec::None)));
        assert!(matches!(
            CompanionSpec::parse("mono:3,5"),
            Ok(CompanionSpec::Mono { u: 3, v: 5 })
        ));
        assert!(matches!(
            CompanionSpec::parse("nonmono:1,2,3"),
            Ok(CompanionSpec::NonMono { .. })
        ));
        assert!(matches!(
            CompanionSpec::parse("graph:/tmp/s.udg:rho"),
            Ok(CompanionSpec::Graph { .. })
        ));
        assert!(CompanionSpec::parse("wat").is_err());
    }
}
