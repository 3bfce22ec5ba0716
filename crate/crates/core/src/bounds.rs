//! Closed-form bounds on boundary points, volume, facet lengths and vertex
//! counts, with a dispatcher that evaluates every applicable one on a polygon.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::invariant_set;
use crate::lattice::LatticePoint;
use crate::normal_form::{canonical, CanonicalForm};
use crate::polygon::{Polygon, Requirement};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VolumeKind {
    Ip,
    Ldp,
    LdpPrime,
}

fn need(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(what()))
    }
}

pub fn is_prime(k: i64) -> bool {
    k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| k % d != 0)
}

/// `|∂Q ∩ N| <= 4k(k+2)` for IP-polygons with `m_Q = k >= 2`.
pub fn boundary_bound_ip(k: i64) -> Result<i64> {
    need(k >= 2, || format!("k = {k} < 2"))?;
    Ok(4 * k * (k + 2))
}

/// LDP refinement of [`boundary_bound_ip`]; `4k(k+1) - 2` for prime `k >= 3`.
pub fn boundary_bound_ldp(k: i64, k_prime: bool) -> Result<i64> {
    need(k >= 2, || format!("k = {k} < 2"))?;
    Ok(if k_prime && k >= 3 { 4 * k * (k + 1) - 2 } else { 4 * k * (k + 2) - 2 })
}

pub fn volume_bound(k: i64, kind: VolumeKind) -> Result<i64> {
    need(k >= 2, || format!("k = {k} < 2"))?;
    Ok(match kind {
        VolumeKind::Ip => 4 * k * k * k + 8 * k * k,
        VolumeKind::Ldp => 4 * k * k * k + 8 * k * k - 2 * k,
        VolumeKind::LdpPrime => {
            need(k >= 3 && is_prime(k), || format!("k = {k} is not a prime >= 3"))?;
            4 * k * k * k + 4 * k * k - 2 * k
        }
    })
}

/// `|F ∩ N| <= 2I(l_F + 1) + 1` for a facet of an IP-polygon of order `I`.
pub fn facet_bound_order(order: i64, local_index: i64) -> Result<i64> {
    need(order >= 1 && local_index >= 1, || format!("I = {order}, l_F = {local_index}"))?;
    Ok(2 * order * (local_index + 1) + 1)
}

/// `|F ∩ N| <= 2m(m+1)` for every facet of an LDP-polygon with `m_Q = m >= 2`.
pub fn facet_bound_ldp(m: i64) -> Result<i64> {
    need(m >= 2, || format!("m = {m} < 2"))?;
    Ok(2 * m * (m + 1))
}

/// `|F ∩ N| <= 2k^2` for facets with `l_F = m_Q = k >= 2` of an LDP-polygon.
pub fn facet_bound_max_index(k: i64) -> Result<i64> {
    need(k >= 2, || format!("k = {k} < 2"))?;
    Ok(2 * k * k)
}

/// `|F ∩ N| <= 2 ell (l_F + 1) + 1`; `l_F` must divide `ell`.
pub fn facet_bound_index(ell: i64, local_index: i64) -> Result<i64> {
    need(ell >= 1 && local_index >= 1 && ell % local_index == 0, || {
        format!("l_F = {local_index} does not divide ell = {ell}")
    })?;
    Ok(2 * ell * (local_index + 1) + 1)
}

/// Weak volume bound in terms of the index. Only valid for `ell >= 2`: the
/// reflexive triangle `conv{(-1,-1), (2,-1), (-1,2)}` has volume 9 > 7.
pub fn easy_volume_bound(ell: i64) -> i64 {
    8 * ell.pow(4) - 6 * ell.pow(3) + 5 * ell * ell
}

/// Volume bound for centrally symmetric IP-polygons of order `I`.
pub fn minkowski_bound(order: i64) -> i64 {
    8 * order * order
}

pub fn vertex_bound(m: i64) -> Result<i64> {
    need(m >= 2, || format!("m = {m} < 2"))?;
    Ok(4 * m + 1)
}

/// Heights `<eta_F, v>` allowed by a special facet with local index `l_F`.
pub fn vertical_bound_region(local_index: i64) -> (i64, i64) {
    (-local_index * (local_index + 1), local_index)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub bound: i64,
    pub actual: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub polygon: CanonicalForm,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    fn push(&mut self, name: impl Into<String>, bound: i64, actual: i64) {
        self.checks.push(BoundCheck { name: name.into(), bound, actual, holds: actual <= bound });
    }
}

/// Evaluates every bound that applies to `q`.
pub fn check_all(q: &Polygon) -> Result<BoundReport> {
    let inv = invariant_set(q)?;
    let ldp = q.is_ldp();
    let k = inv.max_local_index;
    let mut report = BoundReport { polygon: canonical(q)?, checks: Vec::new() };

    report.push("order<=max_local_index", inv.max_local_index, inv.order);
    report.push("max_local_index<=index", inv.index, inv.max_local_index);

    let facets = q.facets();
    for f in &facets {
        report.push("facet_points<=2I(l_F+1)+1", facet_bound_order(inv.order, f.local_index)?, f.lattice_points());
        report.push("facet_points<=2l(l_F+1)+1", facet_bound_index(inv.index, f.local_index)?, f.lattice_points());
    }

    if k >= 2 {
        report.push("boundary<=4k(k+2)", boundary_bound_ip(k)?, inv.boundary_points);
        report.push("volume<=4k^3+8k^2", volume_bound(k, VolumeKind::Ip)?, inv.volume);
        report.push("volume<=m*boundary", k * inv.boundary_points, inv.volume);
        if ldp {
            let prime = k >= 3 && is_prime(k);
            report.push("boundary<=4k(k+2)-2", boundary_bound_ldp(k, false)?, inv.boundary_points);
            report.push("volume<=4k^3+8k^2-2k", volume_bound(k, VolumeKind::Ldp)?, inv.volume);
            if prime {
                report.push("boundary<=4k(k+1)-2", boundary_bound_ldp(k, true)?, inv.boundary_points);
                report.push("volume<=4k^3+4k^2-2k", volume_bound(k, VolumeKind::LdpPrime)?, inv.volume);
            }
            report.push("vertices<=4m+1", vertex_bound(k)?, inv.num_vertices as i64);
            for f in &facets {
                report.push("facet_points<=2m(m+1)", facet_bound_ldp(k)?, f.lattice_points());
                if f.local_index == k {
                    report.push("facet_points<=2k^2", facet_bound_max_index(k)?, f.lattice_points());
                }
            }
        }
    }
    if ldp && inv.index >= 2 {
        report.push("volume<=8l^4-6l^3+5l^2", easy_volume_bound(inv.index), inv.volume);
    }
    if q.is_centrally_symmetric() {
        report.push("volume<=8I^2", minkowski_bound(inv.order), inv.volume);
    }
    Ok(report)
}

/// The triangle attaining `|F ∩ N| = 2I(l_F + 1) + 1`.
pub fn facet_equality_triangle(order: i64, local_index: i64) -> Polygon {
    let w = order * (local_index + 1);
    Polygon::new(
        &[LatticePoint::new(-w, local_index), LatticePoint::new(w, local_index), LatticePoint::new(0, -1)],
        Requirement::Ip,
    )
    .expect("equality triangle is an IP-polygon")
}

/// If some facet of `q` attains the order facet bound, checks that `q` is the
/// extremal triangle. Returns `Ok(true)` when no facet attains it.
pub fn facet_equality_characterized(q: &Polygon) -> Result<bool> {
    let order = crate::invariants::order(q)?;
    for f in q.facet_iter() {
        if f.lattice_points() == facet_bound_order(order, f.local_index)? {
            if f.local_index > order {
                return Ok(false);
            }
            let t = facet_equality_triangle(order, f.local_index);
            if canonical(&t)? != canonical(q)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[(i64, i64)]) -> Polygon {
        let pts: Vec<LatticePoint> = v.iter().map(|&p| p.into()).collect();
        Polygon::new(&pts, Requirement::Ip).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(boundary_bound_ip(2), Ok(32));
        assert_eq!(boundary_bound_ip(3), Ok(60));
        assert_eq!(boundary_bound_ip(10), Ok(480));
        assert_eq!(boundary_bound_ldp(2, false), Ok(30));
        assert_eq!(boundary_bound_ldp(3, true), Ok(46));
        assert_eq!(boundary_bound_ldp(5, true), Ok(118));
        assert_eq!(volume_bound(2, VolumeKind::Ip), Ok(64));
        assert_eq!(volume_bound(2, VolumeKind::Ldp), Ok(60));
        assert_eq!(volume_bound(3, VolumeKind::LdpPrime), Ok(138));
        assert_eq!(facet_bound_order(2, 1), Ok(9));
        assert_eq!(facet_bound_order(3, 2), Ok(19));
        assert_eq!(facet_bound_order(1, 1), Ok(5));
        assert_eq!(facet_bound_ldp(2), Ok(12));
        assert_eq!(facet_bound_ldp(3), Ok(24));
        assert_eq!(facet_bound_ldp(4), Ok(40));
        assert_eq!(facet_bound_max_index(2), Ok(8));
        assert_eq!(facet_bound_max_index(3), Ok(18));
        assert_eq!(facet_bound_max_index(5), Ok(50));
        assert_eq!(facet_bound_index(2, 2), Ok(13));
        assert_eq!(facet_bound_index(6, 2), Ok(37));
        assert_eq!(facet_bound_index(1, 1), Ok(5));
        assert_eq!(easy_volume_bound(1), 7);
        assert_eq!(easy_volume_bound(2), 100);
        assert_eq!(easy_volume_bound(3), 531);
        assert_eq!(minkowski_bound(1), 8);
        assert_eq!(minkowski_bound(2), 32);
        assert_eq!(minkowski_bound(3), 72);
        assert_eq!(vertex_bound(2), Ok(9));
        assert_eq!(vertex_bound(3), Ok(13));
        assert_eq!(vertex_bound(4), Ok(17));
        assert_eq!(vertical_bound_region(1), (-2, 1));
        assert_eq!(vertical_bound_region(2), (-6, 2));
        assert_eq!(vertical_bound_region(3), (-12, 3));
    }

    #[test]
    fn domain_errors() {
        assert!(boundary_bound_ip(1).is_err());
        assert!(boundary_bound_ldp(1, false).is_err());
        assert!(volume_bound(4, VolumeKind::LdpPrime).is_err());
        assert!(volume_bound(2, VolumeKind::LdpPrime).is_err());
        assert!(facet_bound_order(0, 1).is_err());
        assert!(facet_bound_ldp(1).is_err());
        assert!(facet_bound_max_index(1).is_err());
        assert!(facet_bound_index(6, 4).is_err());
        assert!(vertex_bound(1).is_err());
    }

    #[test]
    fn primes() {
        let ps: Vec<i64> = (0..30).filter(|&k| is_prime(k)).collect();
        assert_eq!(ps, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    fn find<'a>(r: &'a BoundReport, name: &str) -> &'a BoundCheck {
        r.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("missing check {name}"))
    }

    #[test]
    fn check_all_examples() {
        let r = check_all(&poly(&[(-9, 2), (9, 2), (0, -1)])).unwrap();
        assert!(r.all_hold());
        let b = find(&r, "boundary<=4k(k+1)-2");
        assert_eq!((b.actual, b.bound), (24, 46));
        let v = find(&r, "volume<=4k^3+4k^2-2k");
        assert_eq!((v.actual, v.bound), (54, 138));

        let r = check_all(&poly(&[(-6, 2), (6, 2), (0, -1)])).unwrap();
        assert!(r.all_hold());
        let b = find(&r, "boundary<=4k(k+2)");
        assert_eq!((b.actual, b.bound), (18, 32));
        let v = find(&r, "volume<=4k^3+8k^2");
        assert_eq!((v.actual, v.bound), (36, 64));
        assert!(r.checks.iter().all(|c| c.name != "boundary<=4k(k+2)-2"));

        let r = check_all(&poly(&[(1, 1), (-1, 1), (-1, -1), (1, -1)])).unwrap();
        let m = find(&r, "volume<=8I^2");
        assert_eq!((m.actual, m.bound, m.holds), (8, 8, true));
    }

    #[test]
    fn equality_triangles_are_tight() {
        for (a, b) in [(1, 2), (2, 3), (2, 2)] {
            let q = facet_equality_triangle(b, a);
            let top = q.facet_iter().find(|f| f.normal == LatticePoint::new(0, 1)).unwrap();
            assert_eq!(top.lattice_points(), facet_bound_order(b, a).unwrap());
            assert_eq!(crate::invariants::order(&q).unwrap(), b);
            assert!(facet_equality_characterized(&q).unwrap());
        }
    }
}
