//! `udg` — build unit-distance graphs, check coloring properties, run the
//! minimizer, and export graphs, orbit tables, DIMACS and SVG.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage/input error,
//! 3 backend failure.

mod config;
mod graphio;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

use udg_core::checker::{self, CheckError};
use udg_core::graph::{assemble_type_m, classify_m_subtype, construct, UnitGraph};
use udg_core::minimize::{iterate, MinimizationState, RoughOptions};
use udg_core::sat::{encode_k_coloring, to_dimacs_string, Backend};
use udg_core::symmetry::{enumerate_disk_orbits, geometric_auts, orbit_table};

use config::{CompanionSpec, RunConfig};

#[derive(Parser)]
#[command(name = "udg", version, about = "unit-distance graph toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Graph expression, e.g. "H^2" or "V49 (+) V37"
    #[arg(short = 'e', long)]
    expr: Option<String>,
    /// Graph file path (header `udg 1`)
    #[arg(long)]
    graph: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct BackendArgs {
    /// `embedded` or `external:<path>`; defaults to $UDG_SOLVER when set
    #[arg(long)]
    backend: Option<String>,
    /// Worker threads for parallel checks (0 = all cores)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression or load a graph; print a summary and
    /// optionally write the graph file
    Build {
        #[command(flatten)]
        input: InputArgs,
        /// Output directory for the graph file
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also report the geometric symmetry order (costs a pass over
        /// candidate isometries)
        #[arg(long)]
        symmetry: bool,
    },
    /// Run a coloring predicate; exits 1 on a negative verdict
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        backend: BackendArgs,
        /// Colors (for --colorable, --mono, --nonmono, --spindle, --key-property)
        #[arg(long, default_value_t = 4)]
        k: u32,
        /// Compute the chromatic number (bounded by --kmax)
        #[arg(long)]
        chromatic: bool,
        #[arg(long, default_value_t = 8)]
        kmax: u32,
        /// Is the graph k-colorable?
        #[arg(long)]
        colorable: bool,
        /// Mono-pair check: two vertex indices `u,v`
        #[arg(long)]
        mono: Option<String>,
        /// Non-mono-set check: vertex indices `i,j,...`
        #[arg(long)]
        nonmono: Option<String>,
        /// Spindle check: `s,fa:s,fb` (two pairs sharing a vertex)
        #[arg(long)]
        spindle: Option<String>,
        /// Key-property check with a companion
        #[arg(long)]
        key_property: bool,
        /// none | graph:<path>:<rotor> | mono:<u>,<v> | nonmono:<list>
        #[arg(long, default_value = "none")]
        companion: String,
        /// Classify a type-M assembly against a second graph (L = input,
        /// S = this path)
        #[arg(long)]
        m_subtype: Option<PathBuf>,
    },
    /// Run the expand/reduce minimization loop
    Minimize {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        backend: BackendArgs,
        /// Flat key=value config file (flags override it)
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        companion: Option<String>,
        /// Phase-2 check budget
        #[arg(long)]
        budget: Option<usize>,
        /// Maximum hyperedge degree
        #[arg(long)]
        max_degree: Option<usize>,
        /// Expansion schedule, e.g. "fill:2,orbits:1"
        #[arg(long)]
        expand: Option<String>,
        /// Disk radius for the orbit universe (rational, e.g. "2" or "3/2")
        #[arg(long)]
        disk: Option<String>,
        /// Output directory (default udg-out)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Rough-reduction pre-pass: peel vertices below this degree
        #[arg(long)]
        peel: Option<u32>,
    },
    /// Emit orbit-filling tables or the disk-orbit enumeration
    Orbits {
        #[command(flatten)]
        input: InputArgs,
        /// Enumerate base-graph orbits on a disk of this radius instead
        #[arg(long)]
        disk: Option<String>,
    },
    /// Export DIMACS CNF or the canonical graph file to stdout
    Export {
        #[command(flatten)]
        input: InputArgs,
        /// DIMACS k-coloring encoding with this many colors
        #[arg(long)]
        dimacs: bool,
        #[arg(long, default_value_t = 4)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the graph as SVG
    Render {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        out: PathBuf,
        /// Vertex indices drawn enlarged, comma-separated
        #[arg(long)]
        enlarge: Option<String>,
    },
}

enum CmdError {
    /// Bad input or usage (exit 2).
    Usage(String),
    /// Backend failure (exit 3).
    Backend(String),
}

impl From<CheckError> for CmdError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Backend(b) => CmdError::Backend(b.to_string()),
            other => CmdError::Usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CmdError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CmdError::Backend(m)) => {
            eprintln!("backend error: {m}");
            ExitCode::from(3)
        }
    }
}

fn load_input(input: &InputArgs) -> Result<UnitGraph, CmdError> {
    match (&input.expr, &input.graph) {
        (Some(expr), None) => {
            construct(expr).map_err(|e| CmdError::Usage(format!("expression: {e}")))
        }
        (None, Some(path)) => graphio::read_graph_file(path)
            .map_err(|e| CmdError::Usage(format!("{}: {e}", path.display()))),
        (Some(_), Some(_)) => Err(CmdError::Usage("give either --expr or --graph, not both".into())),
        (None, None) => Err(CmdError::Usage("an input is required: --expr or --graph".into())),
    }
}

fn resolve_backend(args: &BackendArgs) -> Result<Backend, CmdError> {
    if args.jobs > 0 {
        // a failure here just means a pool was already installed
        let _ = rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build_global();
    }
    match &args.backend {
        Some(s) => {
            Backend::parse(s).ok_or_else(|| CmdError::Usage(format!("unknown backend '{s}'")))
        }
        None => match std::env::var("UDG_SOLVER") {
            Ok(path) if !path.is_empty() => Ok(Backend::External(PathBuf::from(path))),
            _ => Ok(Backend::Embedded),
        },
    }
}

fn parse_indices(s: &str) -> Result<Vec<u32>, CmdError> {
    s.split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|_| CmdError::Usage(format!("bad vertex index list '{s}'")))
}

fn parse_radius(s: &str) -> Result<BigRational, CmdError> {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| CmdError::Usage(format!("bad radius '{s}'")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| CmdError::Usage(format!("bad radius '{s}'")))?;
    if d == BigInt::from(0) {
        return Err(CmdError::Usage("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

fn run(cli: Cli) -> Result<bool, CmdError> {
    match cli.command {
        Command::Build { input, out, symmetry } => {
            let g = load_input(&input)?;
            println!("vertices: {}", g.vertex_count());
            println!("edges: {}", g.edge_count());
            if symmetry {
                println!("symmetry order: {}", geometric_auts(&g).order());
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir).map_err(io_usage)?;
                let path = dir.join("graph.udg");
                graphio::write_graph_file(&g, &path).map_err(io_usage)?;
                println!("wrote {}", path.display());
            }
            Ok(true)
        }
        Command::Check {
            input,
            backend,
            k,
            chromatic,
            kmax,
            colorable,
            mono,
            nonmono,
            spindle,
            key_property,
            companion,
            m_subtype,
        } => {
            let g = load_input(&input)?;
            let be = resolve_backend(&backend)?;
            if chromatic {
                let chi = checker::chromatic_number(&g, kmax, &be)?;
                println!("chromatic number: {chi}");
                return Ok(true);
            }
            if colorable {
                return match checker::colorability(&g, k, &be)? {
                    Some(colors) => {
                        println!("{k}-colorable: yes");
                        print_coloring(&colors);
                        Ok(true)
                    }
                    None => {
                        println!("{k}-colorable: no (no proper {k}-coloring exists)");
                        Ok(false)
                    }
                };
            }
            if let Some(pair) = mono {
                let idx = parse_indices(&pair)?;
                if idx.len() != 2 {
                    return Err(CmdError::Usage("--mono needs exactly two indices".into()));
                }
                let verdict = checker::is_mono_pair(&g, idx[0], idx[1], k, &be)?;
                println!("mono-pair at k={k}: {}", if verdict { "yes" } else { "no" });
                return Ok(verdict);
            }
            if let Some(list) = nonmono {
                let idx = parse_indices(&list)?;
                let verdict = checker::is_non_mono_set(
                    &g,
                    &idx,
                    k,
                    checker::NonMonoMethod::CliqueCompanion,
                    &be,
                )?;
                println!("non-mono-set at k={k}: {}", if verdict { "yes" } else { "no" });
                return Ok(verdict);
            }
            if let Some(spec) = spindle {
                let (a, b) = spec
                    .split_once(':')
                    .ok_or_else(|| CmdError::Usage("--spindle wants 'u,v:x,y'".into()))?;
                let pa = parse_indices(a)?;
                let pb = parse_indices(b)?;
                if pa.len() != 2 || pb.len() != 2 {
                    return Err(CmdError::Usage("--spindle wants two pairs".into()));
                }
                let verdict =
                    checker::verify_spindle(&g, (pa[0], pa[1]), (pb[0], pb[1]), k, &be)?;
                println!("spindle at k={k}: {}", if verdict { "yes" } else { "no" });
                return Ok(verdict);
            }
            if let Some(s_path) = m_subtype {
                let s = graphio::read_graph_file(&s_path)
                    .map_err(|e| CmdError::Usage(format!("{}: {e}", s_path.display())))?;
                let report =
                    assemble_type_m(&g, &s).map_err(|e| CmdError::Usage(e.to_string()))?;
                println!(
                    "assembled: {} vertices, {} edges",
                    report.graph.vertex_count(),
                    report.graph.edge_count()
                );
                println!("reference edges: {}", report.reference_edges.len());
                println!("auxiliary edges: {}", report.auxiliary_edges.len());
                println!("subtype: {}", classify_m_subtype(&report));
                return Ok(true);
            }
            if key_property {
                let spec = CompanionSpec::parse(&companion).map_err(CmdError::Usage)?;
                let kp = spec.realize(&g, k).map_err(CmdError::Usage)?;
                let verdict = kp.check(&g, &be)?;
                println!("key property at k={k}: {}", if verdict { "holds" } else { "lost" });
                return Ok(verdict);
            }
            Err(CmdError::Usage(
                "pick a predicate: --chromatic, --colorable, --mono, --nonmono, --spindle, --key-property or --m-subtype".into(),
            ))
        }
        Command::Minimize {
            input,
            backend,
            config,
            k,
            companion,
            budget,
            max_degree,
            expand,
            disk,
            out,
            peel,
        } => {
            let mut cfg = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(io_usage)?;
                    RunConfig::parse(&text).map_err(|e| CmdError::Usage(e.to_string()))?
                }
                None => RunConfig::default(),
            };
            if let Some(k) = k {
                cfg.k = k;
            }
            if let Some(c) = companion {
                cfg.companion = CompanionSpec::parse(&c).map_err(CmdError::Usage)?;
            }
            if let Some(b) = budget {
                cfg.budget = b;
            }
            if let Some(d) = max_degree {
                cfg.max_degree = d;
            }
            if let Some(e) = expand {
                cfg.schedule = RunConfig::parse(&format!("expand = {e}"))
                    .map_err(|e| CmdError::Usage(e.to_string()))?
                    .schedule;
            }
            if let Some(d) = disk {
                cfg.disk_radius = Some(parse_radius(&d)?);
            }
            let g = match (&input.expr, &input.graph) {
                (None, None) => match (&cfg.expr, &cfg.graph) {
                    (Some(e), _) => {
                        construct(e).map_err(|e| CmdError::Usage(format!("expression: {e}")))?
                    }
                    (None, Some(p)) => graphio::read_graph_file(p)
                        .map_err(|e| CmdError::Usage(format!("{}: {e}", p.display())))?,
                    (None, None) => return Err(CmdError::Usage("an input is required".into())),
                },
                _ => load_input(&input)?,
            };
            let be = resolve_backend(&backend)?;
            let kp = cfg.companion.realize(&g, cfg.k).map_err(CmdError::Usage)?;

            let g = match peel {
                Some(threshold) => {
                    let opts =
                        RoughOptions { peel_degree: Some(threshold), ..Default::default() };
                    let rough = udg_core::minimize::rough_reduce(&g, &kp, &opts, &be)?;
                    println!(
                        "rough reduction: {} -> {} vertices",
                        rough.passes.first().map_or(g.vertex_count(), |p| p.before),
                        rough.graph.vertex_count()
                    );
                    rough.graph
                }
                None => g,
            };

            let orbits = match &cfg.disk_radius {
                Some(r) => enumerate_disk_orbits(r),
                None => vec![],
            };
            let state = MinimizationState::new(g, kp, orbits, &be)?;
            let strategy = cfg.strategy();
            let (final_state, log) = iterate(state, &strategy, &be)?;

            let dir = out.or(cfg.out).unwrap_or_else(|| PathBuf::from("udg-out"));
            std::fs::create_dir_all(&dir).map_err(io_usage)?;
            graphio::write_graph_file(&final_state.m, dir.join("minimal.udg"))
                .map_err(io_usage)?;
            for (i, g) in final_state.set_m.iter().enumerate() {
                graphio::write_graph_file(g, dir.join(format!("minimal-{i}.udg")))
                    .map_err(io_usage)?;
            }
            let mut log_file = std::fs::File::create(dir.join("run.log")).map_err(io_usage)?;
            for line in log.lines() {
                writeln!(log_file, "{line}").map_err(io_usage)?;
            }
            // graphs outside the coordinate lattice have no orbit table
            if let Ok(table) = orbit_table(
                &final_state.m,
                &final_state.set_m,
                &final_state.a,
                "minimization result",
            ) {
                std::fs::write(dir.join("orbits.tsv"), table.to_tsv()).map_err(io_usage)?;
            }
            println!(
                "minimal order: {} ({} graphs in the set), accumulative: {}",
                final_state.m.vertex_count(),
                final_state.set_m.len(),
                final_state.a.vertex_count()
            );
            println!("wrote results to {}", dir.display());
            Ok(true)
        }
        Command::Orbits { input, disk } => {
            if let Some(r) = disk {
                let r = parse_radius(&r)?;
                let orbits = enumerate_disk_orbits(&r);
                println!("# {} orbits on the disk of radius {r}", orbits.len());
                println!("orbit\tsize\tmin_radius_sq");
                for o in &orbits {
                    println!("{}\t{}\t{}", o.representative, o.size(), o.min_radius_sq());
                }
                return Ok(true);
            }
            let g = load_input(&input)?;
            let table = orbit_table(&g, &[g.clone()], &g, "single graph")
                .map_err(|e| CmdError::Usage(e.to_string()))?;
            print!("{}", table.to_tsv());
            Ok(true)
        }
        Command::Export { input, dimacs, k, out } => {
            let g = load_input(&input)?;
            let text = if dimacs {
                to_dimacs_string(&encode_k_coloring(&g, k))
            } else {
                let mut buf = Vec::new();
                graphio::write_graph(&g, &mut buf).map_err(io_usage)?;
                String::from_utf8(buf).expect("graph files are utf-8")
            };
            match out {
                Some(path) => std::fs::write(&path, text).map_err(io_usage)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Render { input, out, enlarge } => {
            let g = load_input(&input)?;
            let enlarged = match enlarge {
                Some(list) => parse_indices(&list)?,
                None => vec![],
            };
            let mut file = std::fs::File::create(&out).map_err(io_usage)?;
            graphio::render_svg(&g, &enlarged, &mut file).map_err(io_usage)?;
            println!("wrote {}", out.display());
            Ok(true)
        }
    }
}

fn io_usage(e: std::io::Error) -> CmdError {
    CmdError::Usage(e.to_string())
}

fn print_coloring(colors: &[u32]) {
    let rendered: Vec<String> =
        colors.iter().enumerate().map(|(i, c)| format!("{i}:{c}")).collect();
    println!("coloring: {}", rendered.join(" "));
}
