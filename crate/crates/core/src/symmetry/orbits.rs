use std::collections::HashSet;
use std::sync::OnceLock;

use num_rational::BigRational;

use crate::exact::ExactReal;

use super::coord::{BaseCoord, CoordError};

/// Transform matrices on `(a,b,c,d)`, stored doubled so every entry is an
/// integer; applying one divides by two and checks integrality.
///
/// τ₀ identity; τ₁/τ₂ rotations by `±2π/3`; τ₃/τ₄ reflections across the
/// vertical/horizontal axis; τ₅ conjugation by `sqrt(33)`.
type Mat = [[i64; 4]; 4];

const TAU_DOUBLED: [Mat; 6] = [
    // τ₀
    [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]],
    // τ₁: rotation by 2π/3
    [[-1, 0, -3, 0], [0, -1, 0, -1], [1, 0, -1, 0], [0, 3, 0, -1]],
    // τ₂ = τ₁²: rotation by -2π/3
    [[-1, 0, 3, 0], [0, -1, 0, 1], [-1, 0, -1, 0], [0, -3, 0, -1]],
    // τ₃: (a,b) -> (-a,-b)
    [[-2, 0, 0, 0], [0, -2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]],
    // τ₄: (c,d) -> (-c,-d)
    [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, -2, 0], [0, 0, 0, -2]],
    // τ₅: (b,d) -> (-b,-d)
    [[2, 0, 0, 0], [0, -2, 0, 0], [0, 0, 2, 0], [0, 0, 0, -2]],
];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    // Both doubled: product entries are 4x the true value; halve back.
    let mut out = [[0i64; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let mut s = 0i64;
            for k in 0..4 {
                s += x[i][k] * y[k][j];
            }
            debug_assert!(s % 2 == 0);
            *cell = s / 2;
        }
    }
    out
}

fn mat_apply(m: &Mat, v: &BaseCoord) -> Result<BaseCoord, CoordError> {
    let input = [v.a, v.b, v.c, v.d];
    let mut out = [0i64; 4];
    for (i, row) in m.iter().enumerate() {
        let s: i64 = row.iter().zip(input.iter()).map(|(m, x)| m * x).sum();
        if s % 2 != 0 {
            return Err(CoordError::NonIntegral);
        }
        out[i] = s / 2;
    }
    Ok(BaseCoord::new(out[0], out[1], out[2], out[3], v.h))
}

/// Apply `τ_k` (`k` in `0..=5`).
pub fn tau_apply(k: usize, v: &BaseCoord) -> Result<BaseCoord, CoordError> {
    assert!(k < 6, "tau index out of range");
    mat_apply(&TAU_DOUBLED[k], v)
}

/// Apply the `index`-th element of the order-24 group (indices `0..24` in
/// a fixed deterministic order); `None` on a non-integral image.
pub fn group_apply(index: usize, v: &BaseCoord) -> Option<BaseCoord> {
    mat_apply(&group24()[index], v).ok()
}

/// The full order-24 group `{τ₁^r · τ₃^s · τ₄^t · τ₅^u}` as doubled
/// matrices, deduplicated.
pub(crate) fn group24() -> &'static Vec<Mat> {
    static GROUP: OnceLock<Vec<Mat>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let mut elems: Vec<Mat> = Vec::new();
        for r in [TAU_DOUBLED[0], TAU_DOUBLED[1], TAU_DOUBLED[2]] {
            for s in [TAU_DOUBLED[0], TAU_DOUBLED[3]] {
                for t in [TAU_DOUBLED[0], TAU_DOUBLED[4]] {
                    for u in [TAU_DOUBLED[0], TAU_DOUBLED[5]] {
                        let m = mat_mul(&mat_mul(&r, &s), &mat_mul(&t, &u));
                        if !elems.contains(&m) {
                            elems.push(m);
                        }
                    }
                }
            }
        }
        assert_eq!(elems.len(), 24);
        elems
    })
}

/// A base orbit: the closure of one coordinate under the order-24 group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Orbit {
    /// First member under the sort `(nonzero count, negative count, lex)`.
    pub representative: BaseCoord,
    /// All members, in representative order.
    pub members: Vec<BaseCoord>,
}

impl Orbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// The smaller of the two possible squared Euclidean radii
    /// (`|v|` and `|conj v|`).
    pub fn min_radius_sq(&self) -> ExactReal {
        let r1 = self.representative.radius_sq();
        let r2 = self.representative.conj33().radius_sq();
        if (&r1 - &r2).signum() <= 0 {
            r1
        } else {
            r2
        }
    }

    pub fn contains(&self, v: &BaseCoord) -> bool {
        self.members.contains(v)
    }
}

fn member_sort_key(v: &BaseCoord) -> (usize, usize, (i64, i64, i64, i64)) {
    let t = [v.a, v.b, v.c, v.d];
    let nonzero = t.iter().filter(|&&x| x != 0).count();
    let negative = t.iter().filter(|&&x| x < 0).count();
    (nonzero, negative, v.tuple())
}

/// The orbit of one coordinate. Fails only if a rotation image is
/// non-integral (possible for off-parity tuples).
pub fn orbit_of(v: &BaseCoord) -> Result<Orbit, CoordError> {
    let mut members: Vec<BaseCoord> = Vec::with_capacity(24);
    for m in group24() {
        let w = mat_apply(m, v)?;
        if !members.contains(&w) {
            members.push(w);
        }
    }
    members.sort_by_key(member_sort_key);
    Ok(Orbit { representative: members[0], members })
}

/// Partition coordinates (sharing one `h`) into orbits, sorted by orbit
/// size then by the smaller Euclidean radius.
pub fn orbit_decompose(points: &[BaseCoord]) -> Result<Vec<Orbit>, CoordError> {
    if let Some(first) = points.first() {
        if points.iter().any(|p| p.h != first.h) {
            return Err(CoordError::MixedScale);
        }
    }
    let mut seen: HashSet<BaseCoord> = HashSet::new();
    let mut orbits = Vec::new();
    for p in points {
        if seen.contains(p) {
            continue;
        }
        let orbit = orbit_of(p)?;
        seen.extend(orbit.members.iter().copied());
        orbits.push(orbit);
    }
    sort_orbits(&mut orbits);
    Ok(orbits)
}

pub(crate) fn sort_orbits(orbits: &mut [Orbit]) {
    // Exact radius comparison with a float shortlist; ties broken by the
    // representative tuple for determinism.
    let keyed: Vec<(usize, f64, ExactReal, BaseCoord)> = orbits
        .iter()
        .map(|o| {
            let r = o.min_radius_sq();
            (o.size(), r.to_f64(), r, o.representative)
        })
        .collect();
    let mut order: Vec<usize> = (0..orbits.len()).collect();
    order.sort_by(|&x, &y| {
        let (sx, fx, rx, tx) = &keyed[x];
        let (sy, fy, ry, ty) = &keyed[y];
        sx.cmp(sy)
            .then_with(|| {
                if (fx - fy).abs() > 1e-9 {
                    fx.partial_cmp(fy).unwrap()
                } else {
                    rx.cmp_exact(ry)
                }
            })
            .then_with(|| tx.cmp(ty))
    });
    let sorted: Vec<Orbit> = order.iter().map(|&i| orbits[i].clone()).collect();
    orbits.clone_from_slice(&sorted);
}

/// `eta` as an integer map on `h = 1` coordinates. Panics if the input is
/// outside the η-stable sublattice (never the case for `⊕ⁿHᵐ` vertices).
fn eta_coord(v: (i64, i64, i64, i64)) -> (i64, i64, i64, i64) {
    let (a, b, c, d) = v;
    let n = (33 * b - 3 * c, a - d, a + 11 * d, 3 * (b + c));
    assert!(
        n.0 % 6 == 0 && n.1 % 6 == 0 && n.2 % 6 == 0 && n.3 % 6 == 0,
        "eta image not integral for {v:?}"
    );
    (n.0 / 6, n.1 / 6, n.2 / 6, n.3 / 6)
}

fn conj_coord(v: (i64, i64, i64, i64)) -> (i64, i64, i64, i64) {
    (v.0, v.1, -v.2, -v.3)
}

/// Vertices of the search-area base graph `B = ⊕⁴H²` as `h = 1` tuples.
/// Built once; 14557 vertices.
pub fn base_graph_vertices() -> &'static Vec<(i64, i64, i64, i64)> {
    static B4: OnceLock<Vec<(i64, i64, i64, i64)>> = OnceLock::new();
    B4.get_or_init(|| {
        let wheel: Vec<(i64, i64, i64, i64)> = vec![
            (0, 0, 0, 0),
            (12, 0, 0, 0),
            (-12, 0, 0, 0),
            (6, 0, 6, 0),
            (6, 0, -6, 0),
            (-6, 0, 6, 0),
            (-6, 0, -6, 0),
        ];
        let eta1: Vec<_> = wheel.iter().map(|&v| eta_coord(v)).collect();
        let eta2: Vec<_> = eta1.iter().map(|&v| eta_coord(v)).collect();
        let eta1i: Vec<_> = wheel.iter().map(|&v| conj_coord(eta_coord(conj_coord(v)))).collect();
        let eta2i: Vec<_> = eta1i.iter().map(|&v| conj_coord(eta_coord(conj_coord(v)))).collect();
        let mut h2: HashSet<(i64, i64, i64, i64)> = HashSet::new();
        for set in [&wheel, &eta1, &eta2, &eta1i, &eta2i] {
            h2.extend(set.iter().copied());
        }
        assert_eq!(h2.len(), 31);
        let h2: Vec<_> = h2.into_iter().collect();
        let mut b2: HashSet<(i64, i64, i64, i64)> = HashSet::new();
        for &x in &h2 {
            for &y in &h2 {
                b2.insert((x.0 + y.0, x.1 + y.1, x.2 + y.2, x.3 + y.3));
            }
        }
        let b2: Vec<_> = b2.into_iter().collect();
        let mut b4: HashSet<(i64, i64, i64, i64)> = HashSet::new();
        for &x in &b2 {
            for &y in &b2 {
                b4.insert((x.0 + y.0, x.1 + y.1, x.2 + y.2, x.3 + y.3));
            }
        }
        let mut out: Vec<_> = b4.into_iter().collect();
        out.sort_unstable();
        out
    })
}

/// All orbits of the base graph `⊕⁴H²` with at least one member inside the
/// closed disk of radius `r`, sorted by orbit size then smaller radius.
///
/// An orbit member at minimal radius is the τ₅ conjugate of the canonical
/// representative, so the disk test is on `min(|v|, |conj v|)`. Constraints
/// reported in the literature (`a,b,c,d` even, `a-b+c+d ∈ 4Z`,
/// `(a-b√33)² + (c√3-d√11)² ≤ (12r)²`) hold for the result but do not by
/// themselves bound the search; membership in `B` does.
pub fn enumerate_disk_orbits(r: &BigRational) -> Vec<Orbit> {
    let r_sq = ExactReal::from_rational(r * r);
    let r_sq_f64 = r_sq.to_f64();
    let mut reps: HashSet<BaseCoord> = HashSet::new();
    let mut orbits = Vec::new();
    for &(a, b, c, d) in base_graph_vertices() {
        let v = BaseCoord::new(a, b, c, d, 1);
        let min_f64 = v.radius_sq_f64().min(v.conj33().radius_sq_f64());
        let inside = if min_f64 < r_sq_f64 - 1e-6 {
            true
        } else if min_f64 > r_sq_f64 + 1e-6 {
            false
        } else {
            let r1 = v.radius_sq();
            let r2 = v.conj33().radius_sq();
            (&r1 - &r_sq).signum() <= 0 || (&r2 - &r_sq).signum() <= 0
        };
        if !inside {
            continue;
        }
        let orbit = orbit_of(&v).expect("base graph vertices have integral orbits");
        if reps.insert(orbit.representative) {
            orbits.push(orbit);
        }
    }
    sort_orbits(&mut orbits);
    orbits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bc(a: i64, b: i64, c: i64, d: i64) -> BaseCoord {
        BaseCoord::new(a, b, c, d, 1)
    }

    #[test]
    fn tau_identity_and_conjugation() {
        let v = bc(0, 4, 4, 0);
        assert_eq!(tau_apply(0, &v).unwrap(), v);
        assert_eq!(tau_apply(5, &v).unwrap(), bc(0, -4, 4, 0));
    }

    #[test]
    fn tau1_cubes_to_identity() {
        let v = bc(6, 2, 0, 0);
        let w = tau_apply(1, &v).unwrap();
        let w = tau_apply(1, &w).unwrap();
        let w = tau_apply(1, &w).unwrap();
        assert_eq!(w, v);
        // and τ₁² = τ₂
        let u = tau_apply(1, &tau_apply(1, &v).unwrap()).unwrap();
        assert_eq!(u, tau_apply(2, &v).unwrap());
    }

    #[test]
    fn taus_preserve_unit_distances() {
        let u = bc(2, 0, 0, 2);
        let v = bc(6, 2, 0, 0);
        let d0 = u.to_point().dist_sq(&v.to_point());
        for k in 0..6 {
            let du = tau_apply(k, &u).unwrap().to_point();
            let dv = tau_apply(k, &v).unwrap().to_point();
            if d0 == ExactReal::one() {
                assert_eq!(du.dist_sq(&dv), ExactReal::one());
            }
        }
        // τ₁ is a plane isometry: all distances equal, not just rational ones.
        let du = tau_apply(1, &u).unwrap().to_point();
        let dv = tau_apply(1, &v).unwrap().to_point();
        assert_eq!(du.dist_sq(&dv), d0);
    }

    #[test]
    fn orbit_sizes_and_representatives() {
        assert_eq!(orbit_of(&bc(0, 0, 0, 0)).unwrap().size(), 1);
        assert_eq!(orbit_of(&bc(4, 0, 0, 0)).unwrap().size(), 6);
        assert_eq!(orbit_of(&bc(0, 4, 4, 0)).unwrap().size(), 12);
        assert_eq!(orbit_of(&bc(0, 0, 2, 6)).unwrap().size(), 12);
        assert_eq!(orbit_of(&bc(2, 0, 4, 2)).unwrap().size(), 24);
        // representative rule: fewest nonzero, then fewest negative, then lex
        assert_eq!(orbit_of(&bc(0, -4, 4, 0)).unwrap().representative, bc(0, 4, 4, 0));
    }

    #[test]
    fn group_has_24_elements() {
        assert_eq!(group24().len(), 24);
    }

    #[test]
    fn base_graph_is_group_closed() {
        let verts: HashSet<_> = base_graph_vertices().iter().copied().collect();
        assert_eq!(verts.len(), 14557);
        for &(a, b, c, d) in base_graph_vertices().iter().step_by(97) {
            let orbit = orbit_of(&bc(a, b, c, d)).unwrap();
            for m in &orbit.members {
                assert!(verts.contains(&m.tuple()));
            }
        }
    }

    #[test]
    fn tiny_disk_is_just_the_origin() {
        let r = BigRational::new(1.into(), 100.into());
        let orbits = enumerate_disk_orbits(&r);
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].representative, bc(0, 0, 0, 0));
    }

    #[test]
    fn disk_enumeration_is_monotone_in_r() {
        let small = enumerate_disk_orbits(&BigRational::new(1.into(), 1.into()));
        let large = enumerate_disk_orbits(&BigRational::new(3.into(), 2.into()));
        let small_reps: HashSet<_> = small.iter().map(|o| o.representative).collect();
        let large_reps: HashSet<_> = large.iter().map(|o| o.representative).collect();
        assert!(small_reps.is_subset(&large_reps));
        assert!(small.len() < large.len());
    }
}
