use std::collections::HashMap;
use std::fmt;

use crate::graph::UnitGraph;

use super::coord::{BaseCoord, CoordError};
use super::orbits::{orbit_of, sort_orbits, Orbit};

/// One row of an orbit-filling table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRow {
    pub orbit: BaseCoord,
    pub orbit_size: usize,
    pub max_degree: u32,
    pub count_m: usize,
    pub count_set_m_min: usize,
    pub count_set_m_max: usize,
    pub count_a: usize,
    pub filled: bool,
}

/// Orbit-filling table: one row per base orbit that meets the accumulative
/// graph, listing per-orbit vertex counts for `M`, the range over `{M}`,
/// and `A`, plus the maximum vertex degree the orbit reaches in `A`.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    pub rows: Vec<OrbitRow>,
    pub header: String,
}

impl OrbitTable {
    /// Tab-separated form:
    /// `orbit(a,b,c,d)\tdeg\tM\t{M}min-{M}max\tA\tfilled`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.header));
        out.push_str("orbit\tdeg\tM\t{M}\tA\tfilled\n");
        for r in &self.rows {
            let range = if r.count_set_m_min == r.count_set_m_max {
                format!("{}", r.count_set_m_min)
            } else {
                format!("{}-{}", r.count_set_m_min, r.count_set_m_max)
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                r.orbit, r.max_degree, r.count_m, range, r.count_a, r.filled
            ));
        }
        out
    }
}

impl fmt::Display for OrbitTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_tsv())
    }
}

fn coords_at_common_h(g: &UnitGraph, h: u32) -> Result<Vec<BaseCoord>, CoordError> {
    g.vertices()
        .iter()
        .map(|p| BaseCoord::from_point(p).and_then(|c| c.with_h(h).ok_or(CoordError::MixedScale)))
        .collect()
}

/// The smallest `h` at which every vertex of every given graph has integer
/// coordinates.
pub(crate) fn common_h(graphs: &[&UnitGraph]) -> Result<u32, CoordError> {
    let mut h = 1u32;
    for g in graphs {
        for p in g.vertices() {
            h = h.max(BaseCoord::from_point(p)?.h);
        }
    }
    Ok(h)
}

/// Build the orbit-filling table for minimal graph `m`, the set `set_m`,
/// and accumulative graph `a`. All vertices must lie in the coordinate
/// lattice. Orbits that do not intersect `a` are omitted.
pub fn orbit_table(
    m: &UnitGraph,
    set_m: &[UnitGraph],
    a: &UnitGraph,
    header: impl Into<String>,
) -> Result<OrbitTable, CoordError> {
    let mut graphs: Vec<&UnitGraph> = vec![m, a];
    graphs.extend(set_m.iter());
    let h = common_h(&graphs)?;

    let a_coords = coords_at_common_h(a, h)?;
    let degrees = a.degrees();
    let mut orbit_index: HashMap<BaseCoord, usize> = HashMap::new();
    let mut orbits: Vec<Orbit> = Vec::new();
    let mut count_a: Vec<usize> = Vec::new();
    let mut max_degree: Vec<u32> = Vec::new();
    for (i, coord) in a_coords.iter().enumerate() {
        let orbit = orbit_of(coord)?;
        let idx = *orbit_index.entry(orbit.representative).or_insert_with(|| {
            orbits.push(orbit);
            count_a.push(0);
            max_degree.push(0);
            orbits.len() - 1
        });
        count_a[idx] += 1;
        max_degree[idx] = max_degree[idx].max(degrees[i]);
    }

    let count_in = |g: &UnitGraph| -> Result<Vec<usize>, CoordError> {
        let mut counts = vec![0usize; orbits.len()];
        for coord in coords_at_common_h(g, h)? {
            let rep = orbit_of(&coord)?.representative;
            if let Some(&idx) = orbit_index.get(&rep) {
                counts[idx] += 1;
            }
        }
        Ok(counts)
    };

    let count_m = count_in(m)?;
    let mut set_min = vec![usize::MAX; orbits.len()];
    let mut set_max = vec![0usize; orbits.len()];
    if set_m.is_empty() {
        set_min = count_m.clone();
        set_max = count_m.clone();
    } else {
        for g in set_m {
            for (idx, c) in count_in(g)?.into_iter().enumerate() {
                set_min[idx] = set_min[idx].min(c);
                set_max[idx] = set_max[idx].max(c);
            }
        }
    }

    let mut order: Vec<Orbit> = orbits.clone();
    sort_orbits(&mut order);
    let rows = order
        .iter()
        .map(|o| {
            let idx = orbit_index[&o.representative];
            let size = o.size();
            OrbitRow {
                orbit: o.representative,
                orbit_size: size,
                max_degree: max_degree[idx],
                count_m: count_m[idx],
                count_set_m_min: set_min[idx],
                count_set_m_max: set_max[idx],
                count_a: count_a[idx],
                filled: count_a[idx] == size && count_m[idx] == size && set_min[idx] == size,
            }
        })
        .collect();
    Ok(OrbitTable { rows, header: header.into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::UnitGraph;

    #[test]
    fn full_orbit_row_is_filled() {
        let orbit = orbit_of(&BaseCoord::new(0, 4, 4, 0, 1)).unwrap();
        let g = UnitGraph::from_points(orbit.members.iter().map(|c| c.to_point()));
        let table = orbit_table(&g, &[g.clone()], &g, "full reference orbit").unwrap();
        assert_eq!(table.rows.len(), 1);
        let row = &table.rows[0];
        assert_eq!((row.count_m, row.count_a), (12, 12));
        assert!(row.filled);
        assert!(table.to_tsv().contains("(0,4,4,0)\t"));
    }

    #[test]
    fn range_rows_and_omitted_orbits() {
        let orbit = orbit_of(&BaseCoord::new(0, 4, 4, 0, 1)).unwrap();
        let all: Vec<_> = orbit.members.iter().map(|c| c.to_point()).collect();
        let a = UnitGraph::from_points(all.clone());
        let g6 = UnitGraph::from_points(all[..6].iter().cloned());
        let g8 = UnitGraph::from_points(all[..8].iter().cloned());
        let table = orbit_table(&g6, &[g6.clone(), g8.clone()], &a, "range demo").unwrap();
        let row = &table.rows[0];
        assert_eq!((row.count_set_m_min, row.count_set_m_max), (6, 8));
        assert!(table.to_tsv().contains("6-8"));
        assert!(!row.filled);
        // an orbit absent from A contributes no row
        assert_eq!(table.rows.len(), 1);
    }
}
