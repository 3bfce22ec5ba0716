//! Classification of LDP-polygons of fixed index by special facets.
//!
//! Every LDP-polygon `Q` of index `ell` has a special facet `F` (its cone
//! contains the vertex sum). Moving `F` onto the line `y = l_F` with left
//! endpoint `(a, l_F)`, `-l_F < a <= 0`, `a < b`, the remaining vertices lie in the
//! strip `-l_F(l_F+1) <= y < l_F` and in two half-planes determined by
//! `ell`, `a` and `b`. The search starts from each such seed edge and walks
//! clockwise (down the right side, back up the left side), appending one
//! vertex at a time, and records every closed chain that is an LDP-polygon of
//! index exactly `ell` with the seed as a special facet.
//!
//! In this frame the covector of the seed is `(0, 1)`, so heights are plain
//! `y` coordinates.

use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{cross, div_ceil, div_floor, gcd, in_cone, is_primitive, lcm, LatticePoint};
use crate::normal_form::{canonical_unchecked, CanonicalForm};
use crate::polygon::{is_strictly_convex_ccw, Facet, Polygon};

/// A candidate special facet `conv{(a, l_F), (b, l_F)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeedFacet {
    pub local_index: i64,
    pub a: i64,
    pub b: i64,
}

impl SeedFacet {
    pub fn left(&self) -> LatticePoint {
        LatticePoint::new(self.a, self.local_index)
    }

    pub fn right(&self) -> LatticePoint {
        LatticePoint::new(self.b, self.local_index)
    }

    /// Lowest admissible height for any vertex.
    pub fn base_floor(&self) -> i64 {
        -self.local_index * (self.local_index + 1)
    }
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// All seeds for index `ell`, ordered by `(l_F, a, b)`.
pub fn seed_facets(ell: i64) -> Vec<SeedFacet> {
    let mut out = Vec::new();
    for lf in divisors(ell) {
        for a in (-lf + 1)..=0 {
            if gcd(a, lf) != 1 {
                continue;
            }
            let max_b = a + 2 * ell * (lf + 1);
            for b in a + 1..=max_b {
                if gcd(b, lf) == 1 {
                    out.push(SeedFacet { local_index: lf, a, b });
                }
            }
        }
    }
    out
}

/// Outer normal and local index of the clockwise chain edge `p -> q`.
#[inline]
fn chain_edge(p: LatticePoint, q: LatticePoint) -> (LatticePoint, i64) {
    let f = Facet::new(q, p);
    (f.normal, f.local_index)
}

/// A clockwise chain `v_0, v_1, ...` starting with the seed edge.
#[derive(Clone, Debug)]
pub struct PartialChain {
    seed: SeedFacet,
    vertices: Vec<LatticePoint>,
    /// `(eta, l)` of the edge ending at `vertices[i + 1]`.
    facets: Vec<(LatticePoint, i64)>,
    height_floor: i64,
}

impl PartialChain {
    pub fn new(seed: SeedFacet) -> Self {
        let (v0, v1) = (seed.left(), seed.right());
        PartialChain { seed, vertices: vec![v0, v1], facets: vec![chain_edge(v0, v1)], height_floor: seed.base_floor() }
    }

    pub fn seed(&self) -> SeedFacet {
        self.seed
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    pub fn height_floor(&self) -> i64 {
        self.height_floor
    }

    fn last(&self) -> LatticePoint {
        *self.vertices.last().expect("chain is never empty")
    }

    /// Appends `w`, which must come from [`candidate_vertices`].
    pub fn push(&mut self, w: LatticePoint) {
        let last = self.last();
        self.height_floor = advance_floor(self.height_floor, last.y, w.y);
        self.facets.push(chain_edge(last, w));
        self.vertices.push(w);
    }

    fn pop(&mut self, floor: i64) {
        self.vertices.pop();
        self.facets.pop();
        self.height_floor = floor;
    }
}

/// Tightened lower bound on heights after a vertex at height `n_new`
/// follows one at `n_prev`: the negative height is charged to the budget,
/// and every positive height skipped between them loses one of its two slots.
pub fn advance_floor(b_prev: i64, n_prev: i64, n_new: i64) -> i64 {
    let lo = n_prev.min(n_new).max(0);
    let hi = n_prev.max(n_new);
    // sum of j for lo < j < hi
    let skipped = if hi - lo >= 2 { (lo + 1 + hi - 1) * (hi - lo - 1) / 2 } else { 0 };
    b_prev - n_new.min(0) + skipped
}

/// Half-plane `alpha x + beta y <= gamma`.
#[derive(Clone, Copy, Debug)]
struct HalfPlane {
    alpha: i64,
    beta: i64,
    gamma: i64,
}

/// All admissible next vertices for the chain.
///
/// `floor` overrides the chain's running height floor (the prune-safety check
/// passes the static base floor here).
pub fn candidate_vertices(chain: &PartialChain, ell: i64) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for_each_candidate(chain, ell, chain.height_floor, |w| out.push(w));
    out
}

fn for_each_candidate(chain: &PartialChain, ell: i64, floor: i64, mut emit: impl FnMut(LatticePoint)) {
    let seed = chain.seed;
    let lf = seed.local_index;
    let last = chain.last();
    let v0 = chain.vertices[0];

    let mut planes: Vec<HalfPlane> = Vec::with_capacity(chain.facets.len() + 3);
    planes.push(HalfPlane { alpha: -lf, beta: ell + seed.a, gamma: lf * ell });
    planes.push(HalfPlane { alpha: lf, beta: ell - seed.b, gamma: lf * ell });
    // strictly clockwise of the ray through the last vertex
    planes.push(HalfPlane { alpha: -last.y, beta: last.x, gamma: -1 });
    // strictly inside every facet so far (the seed facet is y < l_F)
    for &(eta, l) in &chain.facets {
        planes.push(HalfPlane { alpha: eta.x, beta: eta.y, gamma: l - 1 });
    }

    let y_lo = floor.max(seed.base_floor());
    let y_hi = lf - 1;
    'rows: for y in y_lo..=y_hi {
        let mut x_lo = i64::MIN;
        let mut x_hi = i64::MAX;
        for h in &planes {
            let rhs = h.gamma - h.beta * y;
            match h.alpha.signum() {
                0 if rhs < 0 => continue 'rows,
                0 => {}
                1 => x_hi = x_hi.min(div_floor(rhs, h.alpha)),
                _ => x_lo = x_lo.max(div_ceil(rhs, h.alpha)),
            }
        }
        if x_lo > x_hi {
            continue;
        }
        for x in x_lo..=x_hi {
            let w = LatticePoint::new(x, y);
            if !is_primitive(w) {
                continue;
            }
            let d = w - last;
            let l_new = -cross(last, w) / gcd(d.x, d.y);
            if ell % l_new != 0 {
                continue;
            }
            // v_0 must stay strictly inside the new facet, or the chain can never close convexly.
            if chain.vertices.len() > 2 {
                let (eta, l) = chain_edge(last, w);
                if eta.dot(v0) >= l {
                    continue;
                }
            }
            emit(w);
        }
    }
}

/// Closes the chain back to `v_0` if the result is an LDP-polygon of index
/// exactly `ell` with the seed as a special facet.
pub fn try_close(chain: &PartialChain, ell: i64) -> Option<Polygon> {
    let vs = &chain.vertices;
    if vs.len() < 3 {
        return None;
    }
    let last = chain.last();
    let v0 = vs[0];
    if cross(last, v0) >= 0 {
        return None;
    }
    let (eta, l) = chain_edge(last, v0);
    if ell % l != 0 {
        return None;
    }
    // convexity at v_0 and at the last vertex
    if eta.dot(vs[1]) >= l || chain.facets.last().is_none_or(|&(e, li)| e.dot(v0) >= li) {
        return None;
    }
    let index = chain.facets.iter().fold(l, |acc, &(_, li)| lcm(acc, li));
    if index != ell {
        return None;
    }
    let sum = vs.iter().fold(LatticePoint::ORIGIN, |acc, v| acc + *v);
    if !in_cone(sum, vs[1], vs[0]).expect("seed cone is proper") {
        return None;
    }
    let ccw: Vec<LatticePoint> = vs.iter().rev().copied().collect();
    if !is_strictly_convex_ccw(&ccw) {
        return None;
    }
    let q = Polygon::from_ccw_unchecked(ccw);
    debug_assert!(q.is_ldp());
    Some(q)
}

/// Search configuration.
#[derive(Clone, Copy, Debug)]
pub struct IndexSearch {
    /// Use the running height floor; off means the static strip bound only.
    pub height_floor: bool,
    pub node_budget: u64,
}

impl Default for IndexSearch {
    fn default() -> Self {
        IndexSearch { height_floor: true, node_budget: crate::node_budget_from_env() }
    }
}

/// Result of one classification run.
#[derive(Clone, Debug)]
pub struct IndexClassification {
    pub ell: i64,
    pub classes: BTreeSet<CanonicalForm>,
    pub nodes: u64,
}

struct Budget {
    used: AtomicU64,
    limit: u64,
}

impl Budget {
    fn charge(&self, n: u64) -> Result<()> {
        let total = self.used.fetch_add(n, Ordering::Relaxed) + n;
        if total > self.limit {
            Err(Error::ResourceLimit(self.limit))
        } else {
            Ok(())
        }
    }
}

struct Worker<'a> {
    ell: i64,
    cfg: IndexSearch,
    budget: &'a Budget,
    pending: u64,
    found: HashSet<CanonicalForm>,
}

const FLUSH: u64 = 1 << 12;

impl Worker<'_> {
    fn visit(&mut self, chain: &mut PartialChain) -> Result<()> {
        self.pending += 1;
        if self.pending >= FLUSH {
            self.budget.charge(self.pending)?;
            self.pending = 0;
        }
        if let Some(q) = try_close(chain, self.ell) {
            self.found.insert(canonical_unchecked(q.vertices()));
        }
        let floor = if self.cfg.height_floor {
            if chain.height_floor > 0 {
                return Ok(());
            }
            chain.height_floor
        } else {
            chain.seed.base_floor()
        };
        let mut next = Vec::new();
        for_each_candidate(chain, self.ell, floor, |w| next.push(w));
        let saved = chain.height_floor;
        for w in next {
            chain.push(w);
            let r = self.visit(chain);
            chain.pop(saved);
            r?;
        }
        Ok(())
    }
}

impl IndexSearch {
    /// All classes reachable from one seed.
    pub fn search_seed(&self, ell: i64, seed: SeedFacet) -> Result<(HashSet<CanonicalForm>, u64)> {
        let budget = Budget { used: AtomicU64::new(0), limit: self.node_budget };
        let (found, _) = self.run_seed(ell, seed, &budget)?;
        Ok((found, budget.used.load(Ordering::Relaxed)))
    }

    fn run_seed(&self, ell: i64, seed: SeedFacet, budget: &Budget) -> Result<(HashSet<CanonicalForm>, u64)> {
        let mut worker = Worker { ell, cfg: *self, budget, pending: 0, found: HashSet::new() };
        let mut chain = PartialChain::new(seed);
        worker.visit(&mut chain)?;
        let pending = worker.pending;
        budget.charge(pending)?;
        Ok((worker.found, pending))
    }

    /// Classifies all LDP-polygons of index exactly `ell`.
    ///
    /// Seeds are searched in parallel on the current rayon pool.
    pub fn classify(&self, ell: i64) -> Result<IndexClassification> {
        if ell < 1 {
            return Err(Error::Domain(format!("index {ell} < 1")));
        }
        let seeds = seed_facets(ell);
        let budget = Budget { used: AtomicU64::new(0), limit: self.node_budget };
        let done = AtomicUsize::new(0);
        let total = seeds.len();
        let found = seeds
            .par_iter()
            .map(|&seed| {
                let r = self.run_seed(ell, seed, &budget).map(|(f, _)| f);
                let n = done.fetch_add(1, Ordering::Relaxed) + 1;
                if n.is_multiple_of(64) || n == total {
                    log::info!("index {ell}: {n}/{total} seeds");
                }
                r
            })
            .try_reduce(HashSet::new, |mut a, b| {
                if a.len() < b.len() {
                    return Ok(b.into_iter().chain(a).collect());
                }
                a.extend(b);
                Ok(a)
            })?;
        Ok(IndexClassification { ell, classes: found.into_iter().collect(), nodes: budget.used.load(Ordering::Relaxed) })
    }
}

/// Classifies all LDP-polygons with index exactly `ell` using the default
/// configuration.
pub fn classify_index(ell: i64) -> Result<BTreeSet<CanonicalForm>> {
    Ok(IndexSearch::default().classify(ell)?.classes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn seeds_index_one() {
        let s = seed_facets(1);
        assert_eq!(s.len(), 4);
        assert!(s.iter().all(|s| s.local_index == 1 && s.a == 0));
        assert_eq!(s.iter().map(|s| s.b).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn seeds_index_two() {
        let s: Vec<_> = seed_facets(2).into_iter().filter(|s| s.local_index == 2).collect();
        assert!(s.iter().all(|s| s.a == -1));
        assert_eq!(s.iter().map(|s| s.b).collect::<Vec<_>>(), vec![1, 3, 5, 7, 9, 11]);
        // a short facet left of the axis cannot be sheared to straddle it
        assert!(seed_facets(3).contains(&SeedFacet { local_index: 3, a: -2, b: -1 }));
        for ell in 1..=6 {
            for s in seed_facets(ell) {
                assert!(s.b - s.a <= 2 * ell * (s.local_index + 1));
                assert!(-s.local_index < s.a && s.a <= 0 && s.a < s.b);
                assert_eq!(ell % s.local_index, 0);
            }
        }
    }

    #[test]
    fn floor_recurrence() {
        assert_eq!(advance_floor(-2, 1, -1), -1);
        assert_eq!(advance_floor(-6, 2, 0), -5);
        assert_eq!(advance_floor(-2, 1, 0), -2);
        // 1 + 2 + 3 + 4 skipped
        assert_eq!(advance_floor(-30, 5, 0), -20);
        assert_eq!(advance_floor(-30, -2, 5), -30 + 1 + 2 + 3 + 4);
        assert_eq!(advance_floor(-30, -2, -3), -27);
    }

    /// Independent reading of the recurrence: enumerate the skipped set.
    #[test]
    fn floor_recurrence_matches_set_sum() {
        for b in -20..=0 {
            for n1 in -8..=6 {
                for n2 in -8..=6 {
                    let s: i64 = (1..=20).filter(|&i| n1.min(n2) < i && i < n1.max(n2)).sum();
                    assert_eq!(advance_floor(b, n1, n2), b - n2.min(0) + s);
                }
            }
        }
    }

    #[test]
    fn first_candidates_index_one() {
        let chain = PartialChain::new(SeedFacet { local_index: 1, a: 0, b: 1 });
        let c = candidate_vertices(&chain, 1);
        for w in [p(1, 0), p(1, -1), p(0, -1)] {
            assert!(c.contains(&w), "missing {w}");
        }
        // collinear with v1 = (1,1) through the origin
        assert!(!c.contains(&p(-1, -1)));
        assert!(c.iter().all(|w| (-2..=0).contains(&w.y) && is_primitive(*w)));
    }

    #[test]
    fn empty_range_when_floor_is_high() {
        let mut chain = PartialChain::new(SeedFacet { local_index: 1, a: 0, b: 1 });
        chain.height_floor = 1;
        assert!(candidate_vertices(&chain, 1).is_empty());
    }

    #[test]
    fn close_reflexive_triangle() {
        // clockwise (0,1), (1,1), ... closes to a triangle only through (-1,-2)? no:
        // conv{(0,1),(1,1),(-1,-2)} has edges of index 1.
        let mut chain = PartialChain::new(SeedFacet { local_index: 1, a: 0, b: 1 });
        chain.push(p(-1, -2));
        let q = try_close(&chain, 1).expect("closes");
        assert_eq!(q.num_vertices(), 3);
        assert!(q.is_ldp());
        assert!(try_close(&chain, 2).is_none(), "index 1 polygon rejected when classifying index 2");
    }

    #[test]
    fn close_rejects_origin_on_boundary() {
        let mut chain = PartialChain::new(SeedFacet { local_index: 1, a: 0, b: 1 });
        chain.push(p(0, -1));
        // closing edge (0,-1) -> (0,1) passes through the origin
        assert!(try_close(&chain, 1).is_none());
    }

    #[test]
    fn reflexive_count() {
        let r = IndexSearch { height_floor: true, node_budget: u64::MAX }.classify(1).unwrap();
        assert_eq!(r.classes.len(), 16);
        assert_eq!(r.classes.iter().filter(|c| c.num_vertices() == 3).count(), 5);
    }

    #[test]
    fn budget_exceeded() {
        let r = IndexSearch { height_floor: true, node_budget: 10 }.classify(2);
        assert_eq!(r.unwrap_err(), Error::ResourceLimit(10));
    }
}
