//! Lattice polygons, their facets and lattice-point counts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{cross, gcd, is_primitive, LatticePoint, UnimodularMap};

/// Which validation [`Polygon::new`] performs beyond convexity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    Plain,
    /// Origin strictly interior.
    Ip,
    /// IP and every vertex primitive.
    Ldp,
}

/// A convex lattice polygon, vertices strictly convex and counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<LatticePoint>", into = "Vec<LatticePoint>")]
pub struct Polygon {
    vertices: Vec<LatticePoint>,
}

/// An edge of a polygon together with its primitive outer normal.
///
/// `local_index` is `<normal, tail>`; for IP-polygons it is the lattice
/// distance of the edge from the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    pub tail: LatticePoint,
    pub head: LatticePoint,
    pub normal: LatticePoint,
    pub local_index: i64,
}

impl Facet {
    /// Facet from `tail` to `head` of a counterclockwise polygon.
    pub fn new(tail: LatticePoint, head: LatticePoint) -> Self {
        let d = head - tail;
        let g = gcd(d.x, d.y);
        debug_assert!(g > 0, "facet endpoints coincide");
        let normal = LatticePoint::new(d.y / g, -d.x / g);
        Facet { tail, head, normal, local_index: normal.dot(tail) }
    }

    /// Number of lattice points on the closed edge.
    pub fn lattice_points(&self) -> i64 {
        let d = self.head - self.tail;
        gcd(d.x, d.y) + 1
    }

    /// Lattice length `|F ∩ N| - 1`.
    pub fn lattice_length(&self) -> i64 {
        self.lattice_points() - 1
    }
}

/// Monotone-chain hull; collinear points are dropped. Output is ccw.
pub(crate) fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<LatticePoint> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &LatticePoint>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 {
                let n = hull.len();
                if cross(hull[n - 1] - hull[n - 2], p - hull[n - 2]) <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

impl Polygon {
    /// Convex hull of `points`, validated against `require`.
    pub fn new(points: &[LatticePoint], require: Requirement) -> Result<Self> {
        let hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(Error::DegenerateHull);
        }
        let polygon = Polygon { vertices: hull };
        polygon.validate(require)?;
        Ok(polygon)
    }

    /// Wraps a vertex list that is already strictly convex and ccw.
    ///
    /// Only checked in debug builds; used on hot paths of the enumerators.
    pub(crate) fn from_ccw_unchecked(vertices: Vec<LatticePoint>) -> Self {
        debug_assert!(is_strictly_convex_ccw(&vertices));
        Polygon { vertices }
    }

    /// Accepts `vertices` only if they already form a strictly convex ccw list.
    pub fn from_ccw(vertices: Vec<LatticePoint>, require: Requirement) -> Result<Self> {
        if !is_strictly_convex_ccw(&vertices) {
            return Err(Error::DegenerateHull);
        }
        let polygon = Polygon { vertices };
        polygon.validate(require)?;
        Ok(polygon)
    }

    fn validate(&self, require: Requirement) -> Result<()> {
        if require == Requirement::Plain {
            return Ok(());
        }
        if !self.contains_origin_strictly() {
            return Err(Error::OriginNotInterior);
        }
        if require == Requirement::Ldp {
            if let Some(v) = self.vertices.iter().find(|v| !is_primitive(**v)) {
                return Err(Error::NonPrimitiveVertex(v.x, v.y));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn facets(&self) -> Vec<Facet> {
        self.facet_iter().collect()
    }

    pub fn facet_iter(&self) -> impl Iterator<Item = Facet> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Facet::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn contains_origin_strictly(&self) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n]) > 0)
    }

    pub fn is_ip(&self) -> bool {
        self.contains_origin_strictly()
    }

    pub fn is_ldp(&self) -> bool {
        self.is_ip() && self.vertices.iter().all(|v| is_primitive(*v))
    }

    pub fn require_ip(&self) -> Result<()> {
        if self.is_ip() {
            Ok(())
        } else {
            Err(Error::NotIp)
        }
    }

    /// Twice the Euclidean area.
    pub fn normalized_volume(&self) -> i64 {
        let n = self.vertices.len();
        let twice: i64 = (0..n).map(|i| cross(self.vertices[i], self.vertices[(i + 1) % n])).sum();
        twice.abs()
    }

    pub fn boundary_lattice_points(&self) -> i64 {
        self.facet_iter().map(|f| f.lattice_length()).sum()
    }

    /// Lattice points in the bounding box passing `keep`.
    fn scan(&self, keep: impl Fn(LatticePoint, &[Facet]) -> bool) -> Vec<LatticePoint> {
        let facets = self.facets();
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        for x in lo.x..=hi.x {
            for y in lo.y..=hi.y {
                let p = LatticePoint::new(x, y);
                if keep(p, &facets) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let xs = self.vertices.iter().map(|v| v.x);
        let ys = self.vertices.iter().map(|v| v.y);
        (
            LatticePoint::new(xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            LatticePoint::new(xs.max().unwrap(), ys.max().unwrap()),
        )
    }

    /// Lattice points in the strict interior, by bounding-box scan.
    pub fn interior_lattice_points(&self) -> Vec<LatticePoint> {
        self.scan(|p, fs| fs.iter().all(|f| f.normal.dot(p) < f.local_index))
    }

    /// All lattice points of the closed polygon.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        self.scan(|p, fs| fs.iter().all(|f| f.normal.dot(p) <= f.local_index))
    }

    pub fn interior_lattice_point_count(&self) -> i64 {
        // Pick: Vol = 2i + b - 2.
        (self.normalized_volume() - self.boundary_lattice_points() + 2) / 2
    }

    pub fn contains_lattice_point(&self, p: LatticePoint, strict: bool) -> bool {
        self.facet_iter().all(|f| {
            let h = f.normal.dot(p);
            if strict {
                h < f.local_index
            } else {
                h <= f.local_index
            }
        })
    }

    /// Image under a unimodular map, re-oriented ccw.
    pub fn transform(&self, m: &UnimodularMap) -> Polygon {
        let mut vs: Vec<LatticePoint> = self.vertices.iter().map(|v| m.apply(*v)).collect();
        if m.det() < 0 {
            vs.reverse();
        }
        Polygon { vertices: vs }
    }

    pub fn is_centrally_symmetric(&self) -> bool {
        let mut vs = self.vertices.clone();
        vs.sort_unstable();
        let mut neg: Vec<LatticePoint> = vs.iter().map(|v| -*v).collect();
        neg.sort_unstable();
        vs == neg
    }

    /// JSON text form `[[x,y],...]`.
    pub fn to_json(&self) -> String {
        vertices_to_json(&self.vertices)
    }
}

pub fn vertices_to_json(vs: &[LatticePoint]) -> String {
    serde_json::to_string(vs).expect("vertex list serializes")
}

/// Parses `[[x,y],...]` into a point list.
pub fn parse_points(text: &str) -> Result<Vec<LatticePoint>> {
    serde_json::from_str::<Vec<LatticePoint>>(text).map_err(|e| Error::Parse(e.to_string()))
}

pub(crate) fn is_strictly_convex_ccw(vs: &[LatticePoint]) -> bool {
    let n = vs.len();
    if n < 3 {
        return false;
    }
    let turns_left = (0..n).all(|i| {
        let a = vs[i];
        let b = vs[(i + 1) % n];
        let c = vs[(i + 2) % n];
        cross(b - a, c - b) > 0
    });
    // Locally convex lists can still wind more than once: compare with the hull order.
    turns_left && {
        let hull = convex_hull(vs);
        match hull.iter().position(|&h| h == vs[0]) {
            Some(s) if hull.len() == n => (0..n).all(|i| hull[(s + i) % n] == vs[i]),
            _ => false,
        }
    }
}

impl TryFrom<Vec<LatticePoint>> for Polygon {
    type Error = Error;

    fn try_from(vs: Vec<LatticePoint>) -> Result<Self> {
        Polygon::from_ccw(vs, Requirement::Plain)
    }
}

impl From<Polygon> for Vec<LatticePoint> {
    fn from(p: Polygon) -> Self {
        p.vertices
    }
}

impl fmt::Display for Polygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<LatticePoint> {
        v.iter().map(|&p| p.into()).collect()
    }

    fn poly(v: &[(i64, i64)]) -> Polygon {
        Polygon::new(&pts(v), Requirement::Ip).unwrap()
    }

    #[test]
    fn make_polygon_examples() {
        let t = Polygon::new(&pts(&[(1, 0), (0, 1), (-1, -1)]), Requirement::Ldp).unwrap();
        assert_eq!(t.num_vertices(), 3);
        assert_eq!(
            Polygon::new(&pts(&[(-6, 2), (6, 2), (0, -1)]), Requirement::Ldp),
            Err(Error::NonPrimitiveVertex(-6, 2))
        );
        assert_eq!(
            Polygon::new(&pts(&[(1, 0), (2, 0), (0, 1)]), Requirement::Ip),
            Err(Error::OriginNotInterior)
        );
        assert_eq!(Polygon::new(&pts(&[(1, 0), (2, 0), (3, 0)]), Requirement::Plain), Err(Error::DegenerateHull));
        assert_eq!(Polygon::new(&pts(&[(1, 1)]), Requirement::Plain), Err(Error::DegenerateHull));
    }

    #[test]
    fn hull_drops_edge_points_and_reorders() {
        let p = Polygon::new(&pts(&[(1, -1), (-1, -1), (0, 1), (0, -1), (0, 0), (1, -1)]), Requirement::Ip).unwrap();
        assert_eq!(p.vertices(), pts(&[(-1, -1), (1, -1), (0, 1)]).as_slice());
    }

    #[test]
    fn facet_local_indices() {
        let li = |p: &Polygon| {
            let mut v: Vec<i64> = p.facets().iter().map(|f| f.local_index).collect();
            v.sort();
            v
        };
        assert_eq!(li(&poly(&[(1, 0), (0, 1), (-1, -1)])), vec![1, 1, 1]);
        assert_eq!(li(&poly(&[(-9, 2), (9, 2), (0, -1)])), vec![2, 3, 3]);
        assert_eq!(li(&poly(&[(-4, 1), (4, 1), (0, -1)])), vec![1, 2, 2]);
        for f in poly(&[(-9, 2), (9, 2), (0, -1)]).facets() {
            assert_eq!(f.normal.dot(f.head), f.local_index);
            assert_eq!(gcd(f.normal.x, f.normal.y), 1);
        }
    }

    #[test]
    fn volumes_and_counts() {
        let refl = poly(&[(1, 0), (0, 1), (-1, -1)]);
        let q23 = poly(&[(-9, 2), (9, 2), (0, -1)]);
        let q12 = poly(&[(-4, 1), (4, 1), (0, -1)]);
        assert_eq!(refl.normalized_volume(), 3);
        assert_eq!(q23.normalized_volume(), 54);
        assert_eq!(q12.normalized_volume(), 16);
        assert_eq!(refl.boundary_lattice_points(), 3);
        assert_eq!(q23.boundary_lattice_points(), 24);
        assert_eq!(q12.boundary_lattice_points(), 12);
        assert_eq!(refl.interior_lattice_points(), vec![LatticePoint::ORIGIN]);
        assert_eq!(q12.interior_lattice_points(), pts(&[(-1, 0), (0, 0), (1, 0)]));
        assert_eq!(q23.interior_lattice_points().len(), 16);
        assert_eq!(q23.interior_lattice_point_count(), 16);
    }

    #[test]
    fn containment() {
        let refl = poly(&[(1, 0), (0, 1), (-1, -1)]);
        let q12 = poly(&[(-4, 1), (4, 1), (0, -1)]);
        assert!(refl.contains_lattice_point(LatticePoint::ORIGIN, true));
        assert!(!q12.contains_lattice_point(LatticePoint::new(2, 0), true));
        assert!(q12.contains_lattice_point(LatticePoint::new(2, 0), false));
        assert!(!q12.contains_lattice_point(LatticePoint::new(3, 0), false));
    }

    #[test]
    fn json_roundtrip() {
        let q12 = poly(&[(-4, 1), (4, 1), (0, -1)]);
        let text = q12.to_json();
        assert_eq!(text, "[[-4,1],[0,-1],[4,1]]");
        let back = Polygon::new(&parse_points(&text).unwrap(), Requirement::Ldp).unwrap();
        assert_eq!(back, q12);
        assert!(parse_points("[[1,2],[3]]").is_err());
    }

    #[test]
    fn winding_twice_is_not_convex() {
        // A pentagram visits every vertex of a convex pentagon with left turns.
        let star = pts(&[(2, 0), (-2, 1), (1, -2), (1, 2), (-2, -1)]);
        assert!(!is_strictly_convex_ccw(&star));
        assert!(Polygon::from_ccw(star, Requirement::Plain).is_err());
    }
}
