//! Order, maximal local index, index, dual polygon and special facets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{div_ceil, in_cone, lcm, LatticePoint, Rational};
use crate::polygon::{Facet, Polygon};

/// Every invariant of one IP-polygon.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub order: i64,
    pub max_local_index: i64,
    pub index: i64,
    pub volume: i64,
    pub boundary_points: i64,
    pub interior_points: i64,
    pub num_vertices: usize,
    pub is_triangle: bool,
    /// In facet order.
    pub local_indices: Vec<i64>,
    pub dual_vertices: Vec<[Rational; 2]>,
}

/// Smallest `k >= 1` such that `Q/k` has no nonzero interior lattice point.
///
/// If `k m` is interior then so is `(k-1) m`, so it is enough to find, for
/// every nonzero interior `m`, the largest multiple that stays interior.
pub fn order(q: &Polygon) -> Result<i64> {
    q.require_ip()?;
    Ok(order_unchecked(q))
}

pub(crate) fn order_unchecked(q: &Polygon) -> i64 {
    let facets = q.facets();
    let mut best = 0;
    for m in q.interior_lattice_points() {
        if m.is_zero() {
            continue;
        }
        let k = facets
            .iter()
            .filter_map(|f| {
                let h = f.normal.dot(m);
                (h > 0).then(|| div_ceil(f.local_index, h) - 1)
            })
            .min()
            .expect("a nonzero point pairs positively with some facet normal");
        best = best.max(k);
    }
    best + 1
}

pub fn max_local_index(q: &Polygon) -> Result<i64> {
    q.require_ip()?;
    Ok(q.facet_iter().map(|f| f.local_index).max().expect("polygon has facets"))
}

pub fn index(q: &Polygon) -> Result<i64> {
    q.require_ip()?;
    Ok(q.facet_iter().fold(1, |acc, f| lcm(acc, f.local_index)))
}

/// Vertices `-eta_F / l_F` of the dual polygon, ccw in facet order.
pub fn dual_polygon(q: &Polygon) -> Result<Vec<[Rational; 2]>> {
    q.require_ip()?;
    q.facet_iter()
        .map(|f| Ok([Rational::new(-f.normal.x, f.local_index)?, Rational::new(-f.normal.y, f.local_index)?]))
        .collect()
}

/// Least `k` with `k Q^∨` a lattice polygon.
pub fn smallest_dual_multiple(q: &Polygon) -> Result<i64> {
    Ok(dual_polygon(q)?.iter().flatten().fold(1, |acc, r| lcm(acc, r.den())))
}

/// Facets whose cone contains the sum of all vertices. Never empty.
pub fn special_facets(q: &Polygon) -> Result<Vec<Facet>> {
    q.require_ip()?;
    let s = q.vertices().iter().fold(LatticePoint::ORIGIN, |acc, v| acc + *v);
    Ok(q.facet_iter().filter(|f| in_cone(s, f.tail, f.head).expect("IP facets span proper cones")).collect())
}

/// Lattice points `x` in the cone over `f` with `<eta_F, x> = 1`.
pub fn height_one_points(f: &Facet) -> Vec<LatticePoint> {
    let l = f.local_index;
    let lo_x = f.tail.x.min(f.head.x).div_euclid(l);
    let hi_x = div_ceil(f.tail.x.max(f.head.x), l);
    let lo_y = f.tail.y.min(f.head.y).div_euclid(l);
    let hi_y = div_ceil(f.tail.y.max(f.head.y), l);
    let mut out = Vec::new();
    for x in lo_x..=hi_x {
        for y in lo_y..=hi_y {
            let p = LatticePoint::new(x, y);
            if f.normal.dot(p) == 1 && in_cone(p, f.tail, f.head).unwrap_or(false) {
                out.push(p);
            }
        }
    }
    out
}

/// Checks the projection property for `(Q, F, x)`: every lattice point `m`
/// of `Q` off `F` has `m + x` in `Q`.
///
/// Requires `Q` LDP, `l_F = m_Q >= 2`, and `x` a non-vertex lattice point of
/// height one in the cone over `F`.
pub fn projection_property_holds(q: &Polygon, f: &Facet, x: LatticePoint) -> Result<bool> {
    let violated = |why: &str| Err(Error::PreconditionViolated(why.to_string()));
    if !q.is_ldp() {
        return violated("polygon is not LDP");
    }
    if !q.facet_iter().any(|g| g == *f) {
        return violated("F is not a facet of Q");
    }
    let m_q = max_local_index(q)?;
    if f.local_index != m_q {
        return violated("l_F differs from the maximal local index");
    }
    if m_q < 2 {
        return violated("maximal local index is 1");
    }
    if f.normal.dot(x) != 1 {
        return violated("x does not have height one over F");
    }
    if !in_cone(x, f.tail, f.head)? {
        return violated("x is not in the cone over F");
    }
    if q.vertices().contains(&x) {
        return violated("x is a vertex");
    }
    Ok(q
        .lattice_points()
        .into_iter()
        .filter(|m| f.normal.dot(*m) < f.local_index)
        .all(|m| q.contains_lattice_point(m + x, false)))
}

/// All `(F, x)` pairs that satisfy the projection-property preconditions.
pub fn projection_pairs(q: &Polygon) -> Vec<(Facet, LatticePoint)> {
    let Ok(m_q) = max_local_index(q) else { return Vec::new() };
    if m_q < 2 || !q.is_ldp() {
        return Vec::new();
    }
    q.facet_iter()
        .filter(|f| f.local_index == m_q)
        .flat_map(|f| {
            height_one_points(&f)
                .into_iter()
                .filter(|x| !q.vertices().contains(x))
                .map(move |x| (f, x))
        })
        .collect()
}

pub fn invariant_set(q: &Polygon) -> Result<InvariantSet> {
    q.require_ip()?;
    let local_indices: Vec<i64> = q.facet_iter().map(|f| f.local_index).collect();
    Ok(InvariantSet {
        order: order_unchecked(q),
        max_local_index: *local_indices.iter().max().expect("nonempty"),
        index: local_indices.iter().fold(1, |a, &l| lcm(a, l)),
        volume: q.normalized_volume(),
        boundary_points: q.boundary_lattice_points(),
        interior_points: q.interior_lattice_point_count(),
        num_vertices: q.num_vertices(),
        is_triangle: q.num_vertices() == 3,
        local_indices,
        dual_vertices: dual_polygon(q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::Requirement;

    fn poly(v: &[(i64, i64)]) -> Polygon {
        let pts: Vec<LatticePoint> = v.iter().map(|&p| p.into()).collect();
        Polygon::new(&pts, Requirement::Ip).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn order_examples() {
        assert_eq!(order(&poly(&[(1, 0), (0, 1), (-1, -1)])), Ok(1));
        assert_eq!(order(&poly(&[(-4, 1), (4, 1), (0, -1)])), Ok(2));
        assert_eq!(order(&poly(&[(-9, 2), (9, 2), (0, -1)])), Ok(3));
        let plain = Polygon::new(&[(1, 0).into(), (2, 0).into(), (0, 1).into()], Requirement::Plain).unwrap();
        assert_eq!(order(&plain), Err(Error::NotIp));
    }

    #[test]
    fn local_index_examples() {
        assert_eq!(max_local_index(&poly(&[(1, 0), (0, 1), (-1, -1)])), Ok(1));
        assert_eq!(max_local_index(&poly(&[(-9, 2), (9, 2), (0, -1)])), Ok(3));
        assert_eq!(max_local_index(&poly(&[(-4, 1), (4, 1), (0, -1)])), Ok(2));
        assert_eq!(index(&poly(&[(-9, 2), (9, 2), (0, -1)])), Ok(6));
        assert_eq!(index(&poly(&[(-4, 1), (4, 1), (0, -1)])), Ok(2));
        assert_eq!(index(&poly(&[(1, 0), (0, 1), (-1, -1)])), Ok(1));
    }

    #[test]
    fn dual_examples() {
        let d = dual_polygon(&poly(&[(1, 0), (0, 1), (-1, -1)])).unwrap();
        // hull order starts at (-1,-1), so the first facet is (-1,-1) -> (1,0)
        assert_eq!(d, vec![[r(-1, 1), r(2, 1)], [r(-1, 1), r(-1, 1)], [r(2, 1), r(-1, 1)]]);
        let d = dual_polygon(&poly(&[(-4, 1), (4, 1), (0, -1)])).unwrap();
        let mut got: Vec<_> = d.iter().map(|p| (p[0].to_string(), p[1].to_string())).collect();
        got.sort();
        let mut want = vec![("0".into(), "-1".into()), ("-1/2".into(), "1".into()), ("1/2".into(), "1".into())];
        want.sort();
        assert_eq!(got, want);
        let sq = dual_polygon(&poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)])).unwrap();
        for v in &sq {
            let neg = [r(-v[0].num(), v[0].den()), r(-v[1].num(), v[1].den())];
            assert!(sq.contains(&neg));
        }
    }

    #[test]
    fn dual_multiple_examples() {
        assert_eq!(smallest_dual_multiple(&poly(&[(1, 0), (0, 1), (-1, -1)])), Ok(1));
        assert_eq!(smallest_dual_multiple(&poly(&[(-4, 1), (4, 1), (0, -1)])), Ok(2));
        assert_eq!(smallest_dual_multiple(&poly(&[(-9, 2), (9, 2), (0, -1)])), Ok(6));
    }

    #[test]
    fn special_facet_examples() {
        assert_eq!(special_facets(&poly(&[(1, 0), (0, 1), (-1, -1)])).unwrap().len(), 3);
        let q = poly(&[(1, 0), (0, 1), (-1, -1), (0, -1)]);
        let sf = special_facets(&q).unwrap();
        assert_eq!(sf.len(), 2);
        assert!(sf.iter().all(|f| f.tail == LatticePoint::new(0, -1) || f.head == LatticePoint::new(0, -1)));
        assert_eq!(special_facets(&poly(&[(2, 1), (-1, 1), (-2, -1), (1, -1)])).unwrap().len(), 4);
    }

    #[test]
    fn projection_examples() {
        let refl = poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)]);
        let f = refl.facets()[0];
        assert!(matches!(
            projection_property_holds(&refl, &f, LatticePoint::new(1, 0)),
            Err(Error::PreconditionViolated(_))
        ));
        let q = poly(&[(-4, 1), (4, 1), (0, -1)]);
        let f = q.facets().into_iter().find(|f| f.tail == LatticePoint::new(0, -1)).unwrap();
        assert_eq!(f.normal, LatticePoint::new(1, -2));
        assert_eq!(f.local_index, 2);
        assert_eq!(projection_property_holds(&q, &f, LatticePoint::new(1, 0)), Ok(true));
        assert!(matches!(
            projection_property_holds(&q, &f, LatticePoint::new(2, 0)),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn height_one() {
        let q = poly(&[(-4, 1), (4, 1), (0, -1)]);
        let f = q.facets().into_iter().find(|f| f.tail == LatticePoint::new(0, -1)).unwrap();
        assert_eq!(height_one_points(&f), vec![LatticePoint::new(1, 0)]);
        assert_eq!(projection_pairs(&q).len(), 2);
    }

    #[test]
    fn invariant_set_examples() {
        let s = invariant_set(&poly(&[(-9, 2), (9, 2), (0, -1)])).unwrap();
        assert_eq!((s.order, s.max_local_index, s.index, s.volume, s.boundary_points), (3, 3, 6, 54, 24));
        assert!(s.is_triangle);
        let s = invariant_set(&poly(&[(1, 0), (0, 1), (-1, -1)])).unwrap();
        assert_eq!((s.order, s.max_local_index, s.index, s.volume, s.boundary_points), (1, 1, 1, 3, 3));
        assert!(s.is_triangle);
        let s = invariant_set(&poly(&[(1, 0), (0, 1), (-1, -1), (0, -1)])).unwrap();
        assert_eq!((s.order, s.max_local_index, s.index, s.volume, s.boundary_points), (1, 1, 1, 4, 4));
        assert!(!s.is_triangle);
        assert_eq!(s.interior_points, 1);
    }
}
