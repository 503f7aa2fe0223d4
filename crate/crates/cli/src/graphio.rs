//! The graph file format: header `udg 1`, one vertex per line in exact
//! point form, `#` comments. No edge section — edges are derived data and
//! are recomputed on read, never trusted from disk.

use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use udg_core::exact::ExactPoint;
use udg_core::graph::UnitGraph;

#[derive(Debug)]
pub enum GraphIoError {
    Io(std::io::Error),
    Parse { line: usize, column: usize, message: String },
    BadHeader { line: usize },
}

impl fmt::Display for GraphIoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphIoError::Io(e) => write!(f, "i/o error: {e}"),
            GraphIoError::Parse { line, column, message } => {
                write!(f, "line {line}, column {column}: {message}")
            }
            GraphIoError::BadHeader { line } => {
                write!(f, "line {line}: expected header 'udg 1'")
            }
        }
    }
}

impl std::error::Error for GraphIoError {}

impl From<std::io::Error> for GraphIoError {
    fn from(e: std::io::Error) -> Self {
        GraphIoError::Io(e)
    }
}

/// Read a graph file; duplicate vertices are deduplicated with a warning
/// on stderr.
pub fn read_graph(r: impl BufRead) -> Result<UnitGraph, GraphIoError> {
    let mut points: Vec<ExactPoint> = Vec::new();
    let mut header_seen = false;
    let mut duplicates = 0usize;
    for (lineno, line) in r.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !header_seen {
            if content != "udg 1" {
                return Err(GraphIoError::BadHeader { line: lineno });
            }
            header_seen = true;
            continue;
        }
        let p: ExactPoint = content.parse().map_err(|e: udg_core::exact::ParseExactError| {
            GraphIoError::Parse { line: lineno, column: e.offset + 1, message: e.message }
        })?;
        if points.contains(&p) {
            duplicates += 1;
        } else {
            points.push(p);
        }
    }
    if !header_seen {
        return Err(GraphIoError::BadHeader { line: 0 });
    }
    if duplicates > 0 {
        eprintln!("warning: {duplicates} duplicate vertices deduplicated");
    }
    Ok(UnitGraph::from_points(points))
}

pub fn read_graph_file(path: impl AsRef<Path>) -> Result<UnitGraph, GraphIoError> {
    let file = std::fs::File::open(path)?;
    read_graph(BufReader::new(file))
}

pub fn write_graph(g: &UnitGraph, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "udg 1")?;
    writeln!(w, "# {} vertices, {} edges", g.vertex_count(), g.edge_count())?;
    for p in g.vertices() {
        writeln!(w, "{p}")?;
    }
    Ok(())
}

pub fn write_graph_file(g: &UnitGraph, path: impl AsRef<Path>) -> std::io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    write_graph(g, &mut file)
}

/// Render to SVG: one `<circle>` per vertex, one `<line>` per edge,
/// designated vertices drawn enlarged.
pub fn render_svg(g: &UnitGraph, enlarged: &[u32], w: &mut impl Write) -> std::io::Result<()> {
    let pts: Vec<(f64, f64)> = g.vertices().iter().map(|p| p.to_f64()).collect();
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &(x, y) in &pts {
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    let scale = 100.0;
    let pad = 30.0;
    let tx = |x: f64| (x - min_x) * scale + pad;
    // flip y so the plane's orientation matches the screen's
    let ty = |y: f64| (max_y - y) * scale + pad;
    let width = (max_x - min_x) * scale + 2.0 * pad;
    let height = (max_y - min_y) * scale + 2.0 * pad;
    writeln!(
        w,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
    )?;
    for &(i, j) in g.edges() {
        let (x1, y1) = pts[i as usize];
        let (x2, y2) = pts[j as usize];
        writeln!(
            w,
            "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#888\" stroke-width=\"1\"/>",
            tx(x1), ty(y1), tx(x2), ty(y2)
        )?;
    }
    for (i, &(x, y)) in pts.iter().enumerate() {
        let r = if enlarged.contains(&(i as u32)) { 7.0 } else { 3.0 };
        writeln!(
            w,
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"{r}\" fill=\"#222\"/>",
            tx(x), ty(y)
        )?;
    }
    writeln!(w, "</svg>")
}

#[cfg(test)]
mod tests {
    use super::*;
    use udg_core::graph::construct;

    #[test]
    fn roundtrip_preserves_canonical_form() {
        let g = construct("V25").unwrap();
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let back = read_graph(buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn header_and_parse_errors() {
        assert!(matches!(
            read_graph("not a header\n".as_bytes()),
            Err(GraphIoError::BadHeader { .. })
        ));
        let bad = "udg 1\n(1; nope)\n";
        match read_graph(bad.as_bytes()) {
            Err(GraphIoError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicates_are_merged() {
        let text = "udg 1\n(0; 0)\n(0; 0)\n(1; 0)\n";
        let g = read_graph(text.as_bytes()).unwrap();
        assert_eq!(g.vertex_count(), 2);
    }

    #[test]
    fn svg_has_one_element_per_vertex_and_edge() {
        let g = construct("MOSER").unwrap();
        let mut buf = Vec::new();
        render_svg(&g, &[0], &mut buf).unwrap();
        let svg = String::from_utf8(buf).unwrap();
        assert_eq!(svg.matches("<circle").count(), g.vertex_count());
        assert_eq!(svg.matches("<line").count(), g.edge_count());
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}
