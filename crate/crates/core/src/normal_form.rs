//! Canonical representatives of `GL(2, Z)` classes of IP-polygons.
//!
//! For every facet `F` and both orientations, the polygon is moved so that
//! `F` lies on the line `y = l_F` with its left endpoint at `x ∈ (-l_F, 0]`;
//! the vertex list is then read counterclockwise from that endpoint. The
//! lexicographically smallest of these `2 |F(Q)|` lists is the canonical form.
//! An equivalence must carry some facet onto some facet, and once a facet is
//! placed the remaining freedom is a horizontal shear and the reflection
//! `x -> -x`, both of which are fixed by the normalisation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticePoint, UnimodularMap};
use crate::polygon::{Polygon, Requirement};

/// The distinguished representative of an equivalence class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalForm(Vec<LatticePoint>);

impl CanonicalForm {
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.0
    }

    pub fn num_vertices(&self) -> usize {
        self.0.len()
    }

    pub fn to_polygon(&self) -> Polygon {
        Polygon::from_ccw_unchecked(self.0.clone())
    }

    pub fn to_json(&self) -> String {
        crate::polygon::vertices_to_json(&self.0)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Canonical form of an IP-polygon.
pub fn canonical(q: &Polygon) -> Result<CanonicalForm> {
    q.require_ip()?;
    Ok(canonical_unchecked(q.vertices()))
}

/// Canonical form of a strictly convex ccw vertex list around the origin.
pub(crate) fn canonical_unchecked(vs: &[LatticePoint]) -> CanonicalForm {
    let n = vs.len();
    let mut best: Option<Vec<LatticePoint>> = None;
    let mut cand = Vec::with_capacity(n);
    for i in 0..n {
        let (tail, head) = (vs[i], vs[(i + 1) % n]);
        let f = crate::polygon::Facet::new(tail, head);
        let base = UnimodularMap::with_second_row(f.normal).expect("facet normals are primitive");
        for reflect in [false, true] {
            // In ccw order the top facet runs right-to-left, so `head` is the
            // left endpoint. Reflection reverses orientation: then `tail` is.
            let (left, dir): (LatticePoint, isize) = if reflect { (tail, -1) } else { (head, 1) };
            let place = |p: LatticePoint| {
                let q = base.apply(p);
                if reflect {
                    LatticePoint::new(-q.x, q.y)
                } else {
                    q
                }
            };
            let l = f.local_index;
            let left_img = place(left);
            let shift = crate::lattice::div_ceil(left_img.x, l);
            // shear x -> x - shift * y puts the left endpoint into (-l, 0]
            let shear = |p: LatticePoint| LatticePoint::new(p.x - shift * p.y, p.y);
            let start = if reflect { i } else { (i + 1) % n };
            cand.clear();
            for k in 0..n {
                let idx = (start as isize + dir * k as isize).rem_euclid(n as isize) as usize;
                cand.push(shear(place(vs[idx])));
            }
            debug_assert!(cand[0].y == l && cand[0].x > -l && cand[0].x <= 0);
            match &best {
                Some(b) if cand.as_slice() >= b.as_slice() => {}
                _ => best = Some(cand.clone()),
            }
        }
    }
    CanonicalForm(best.expect("polygon has facets"))
}

/// Whether two IP-polygons are unimodularly equivalent.
pub fn equivalent(p: &Polygon, q: &Polygon) -> Result<bool> {
    if p.num_vertices() != q.num_vertices() {
        p.require_ip()?;
        q.require_ip()?;
        return Ok(false);
    }
    Ok(canonical(p)? == canonical(q)?)
}

/// Parses a stored canonical vertex list, checking that it is canonical.
pub fn parse_canonical(vs: Vec<LatticePoint>) -> Result<CanonicalForm> {
    let p = Polygon::from_ccw(vs.clone(), Requirement::Ip)?;
    let c = canonical(&p)?;
    if c.vertices() != vs.as_slice() {
        return Err(Error::Parse(format!("{} is not in canonical form", crate::polygon::vertices_to_json(&vs))));
    }
    Ok(c)
}
