//! Brute-force references for the classification and the canonical form.
//!
//! Nothing here reuses the search code of [`crate::enum_index`]: polygons are
//! built by walking primitive points of a box in increasing angle, and
//! equivalence is tested by solving for explicit linear maps.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{cross, div_ceil, div_floor, gcd, is_primitive, lcm, LatticePoint, UnimodularMap};
use crate::normal_form::{canonical, CanonicalForm};
use crate::polygon::{Polygon, Requirement};

/// Smallest box half-width `B` such that every LDP-polygon of index `ell`
/// has a representative in `[-B, B]^2`.
///
/// Each class has a representative with a special facet on `y = l_F`, left
/// endpoint in `(-l_F, 0]`; such a polygon lies between heights
/// `-l_F(l_F+1)` and `l_F` and inside the two half-planes through the facet
/// endpoints and `(∓ell, 0)`. This takes the extreme coordinates over the
/// nonempty rows of that region, for all admissible facets.
pub fn required_box(ell: i64) -> i64 {
    let mut b_max = 0;
    for lf in (1..=ell).filter(|d| ell % d == 0) {
        for a in (-lf + 1)..=0 {
            for b in a + 1..=a + 2 * ell * (lf + 1) {
                for y in -lf * (lf + 1)..=lf {
                    let x_lo = div_ceil((ell + a) * y - lf * ell, lf);
                    let x_hi = div_floor(lf * ell - (ell - b) * y, lf);
                    if x_lo <= x_hi {
                        b_max = b_max.max(x_lo.abs()).max(x_hi.abs()).max(y.abs());
                    }
                }
            }
        }
    }
    b_max
}

/// Upper half-plane first, then counterclockwise.
fn angle_cmp(u: LatticePoint, v: LatticePoint) -> Ordering {
    let half = |p: LatticePoint| if p.y > 0 || (p.y == 0 && p.x > 0) { 0 } else { 1 };
    half(u).cmp(&half(v)).then_with(|| 0.cmp(&cross(u, v)))
}

/// Local index of the ccw edge `p -> q` when the origin is strictly left of it.
#[inline]
fn edge_index(p: LatticePoint, q: LatticePoint) -> i64 {
    let d = q - p;
    cross(p, q) / gcd(d.x, d.y)
}

struct Walk<'a> {
    ell: i64,
    points: &'a [LatticePoint],
    /// `succ[i]`: indices `j > i` (in angle order) with `cross(p_i, p_j) > 0`
    /// and edge index dividing `ell`.
    succ: &'a [Vec<u32>],
    found: HashSet<CanonicalForm>,
    path: Vec<u32>,
}

impl Walk<'_> {
    fn extend(&mut self) {
        let first = self.points[self.path[0] as usize];
        let cur_i = *self.path.last().unwrap() as usize;
        let cur = self.points[cur_i];
        let prev = (self.path.len() >= 2).then(|| self.points[self.path[self.path.len() - 2] as usize]);

        if self.path.len() >= 3 && cross(cur, first) > 0 {
            let closing = edge_index(cur, first);
            let second = self.points[self.path[1] as usize];
            let convex_cur = cross(cur - prev.unwrap(), first - cur) > 0;
            let convex_first = cross(first - cur, second - first) > 0;
            if self.ell % closing == 0 && convex_cur && convex_first {
                let mut index = closing;
                for w in self.path.windows(2) {
                    index = lcm(index, edge_index(self.points[w[0] as usize], self.points[w[1] as usize]));
                }
                if index == self.ell {
                    let vs: Vec<LatticePoint> = self.path.iter().map(|&i| self.points[i as usize]).collect();
                    let q = Polygon::from_ccw(vs, Requirement::Ldp).expect("walk produces convex LDP polygons");
                    self.found.insert(canonical(&q).expect("LDP"));
                }
            }
        }

        for k in 0..self.succ[cur_i].len() {
            let j = self.succ[cur_i][k];
            let w = self.points[j as usize];
            if let Some(prev) = prev {
                if cross(cur - prev, w - cur) <= 0 {
                    continue;
                }
            }
            // the first vertex has to stay strictly left of every later edge
            if self.path.len() >= 2 && cross(w - cur, first - w) <= 0 {
                continue;
            }
            self.path.push(j);
            self.extend();
            self.path.pop();
        }
    }
}

/// Enumerates every LDP-polygon of index `ell` with vertices in
/// `[-box_size, box_size]^2` and returns the distinct classes.
pub fn brute_force_classify(ell: i64, box_size: i64) -> Result<BTreeSet<CanonicalForm>> {
    if ell < 1 {
        return Err(Error::Domain(format!("index {ell} < 1")));
    }
    let required = required_box(ell);
    if box_size < required {
        return Err(Error::BoxTooSmall { given: box_size, required });
    }
    let mut points: Vec<LatticePoint> = (-box_size..=box_size)
        .flat_map(|x| (-box_size..=box_size).map(move |y| LatticePoint::new(x, y)))
        .filter(|p| is_primitive(*p))
        .collect();
    points.sort_by(|a, b| angle_cmp(*a, *b).then_with(|| a.cmp(b)));

    let succ: Vec<Vec<u32>> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let p = points[i];
            (i + 1..points.len())
                .filter(|&j| {
                    let q = points[j];
                    cross(p, q) > 0 && ell % edge_index(p, q) == 0
                })
                .map(|j| j as u32)
                .collect()
        })
        .collect();

    let found = (0..points.len())
        .into_par_iter()
        .map(|start| {
            let mut walk = Walk { ell, points: &points, succ: &succ, found: HashSet::new(), path: vec![start as u32] };
            walk.extend();
            walk.found
        })
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(found.into_iter().collect())
}

/// The triangle `conv{(-b(a+1), a), (b(a+1), a), (0, -1)}`; `b >= a >= 1`.
pub fn example_triangle(a: i64, b: i64) -> Result<Polygon> {
    if !(1 <= a && a <= b) {
        return Err(Error::Domain(format!("need 1 <= a <= b, got a = {a}, b = {b}")));
    }
    let w = b * (a + 1);
    Polygon::new(&[LatticePoint::new(-w, a), LatticePoint::new(w, a), LatticePoint::new(0, -1)], Requirement::Ip)
}

/// Solves `M p1 = q1, M p2 = q2` over `GL(2, Z)`.
fn map_sending(p1: LatticePoint, p2: LatticePoint, q1: LatticePoint, q2: LatticePoint) -> Option<UnimodularMap> {
    let det = cross(p1, p2);
    if det == 0 {
        return None;
    }
    // M = [q1 q2] * [p1 p2]^{-1}, with [p1 p2]^{-1} = [[p2.y, -p2.x], [-p1.y, p1.x]] / det
    let num = [
        [q1.x * p2.y - q2.x * p1.y, -q1.x * p2.x + q2.x * p1.x],
        [q1.y * p2.y - q2.y * p1.y, -q1.y * p2.x + q2.y * p1.x],
    ];
    if num.iter().flatten().any(|e| e % det != 0) {
        return None;
    }
    UnimodularMap::new(num[0][0] / det, num[0][1] / det, num[1][0] / det, num[1][1] / det).ok()
}

/// Whether some unimodular map sends the vertex set of `p` onto that of `q`.
pub fn brute_force_equivalent(p: &Polygon, q: &Polygon) -> bool {
    let (pv, qv) = (p.vertices(), q.vertices());
    if pv.len() != qv.len() {
        return false;
    }
    let n = pv.len();
    let target: BTreeSet<LatticePoint> = qv.iter().copied().collect();
    let (p1, p2) = (pv[0], pv[1]);
    for i in 0..n {
        for (q1, q2) in [(qv[i], qv[(i + 1) % n]), (qv[(i + 1) % n], qv[i])] {
            if let Some(m) = map_sending(p1, p2, q1, q2) {
                if pv.iter().all(|v| target.contains(&m.apply(*v))) {
                    return true;
                }
            }
        }
    }
    false
}
