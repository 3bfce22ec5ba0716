//! Classification of LDP-polygons by order and volume, built up from
//! sub-triangles and sub-parallelograms.
//!
//! Every LDP-polygon with at least one sub-triangle containing the origin can
//! be reached from any such triangle by adding its remaining vertices one at
//! a time: a new vertex `w` is either `-v` for a current vertex `v`, or `-w`
//! lies strictly inside the cone over a current edge `(v1, v2)`, in which case
//! `conv{v1, v2, w}` is itself an LDP-sub-triangle. The only LDP-polygons
//! without such a triangle are the parallelograms `conv{±u, ±v}`.
//!
//! All sub-polygons inherit `order <= I` and `Vol <= V`, so the lists of
//! admissible triangles and parallelograms are finite.

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use crate::bounds::{volume_bound, VolumeKind};
use crate::error::{Error, Result};
use crate::lattice::{cross, div_ceil, div_floor, gcd, LatticePoint};
use crate::normal_form::{canonical_unchecked, CanonicalForm};
use crate::polygon::{convex_hull, Facet, Polygon};

/// The triangle `conv{(1, 0), (p, q), (x, y)}` in its normalised frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubTriangle {
    pub p: i64,
    pub q: i64,
    pub x: i64,
    pub y: i64,
}

impl SubTriangle {
    /// Vertices in counterclockwise order.
    pub fn vertices(&self) -> [LatticePoint; 3] {
        [LatticePoint::new(1, 0), LatticePoint::new(self.p, self.q), LatticePoint::new(self.x, self.y)]
    }

    pub fn polygon(&self) -> Polygon {
        Polygon::from_ccw_unchecked(self.vertices().to_vec())
    }

    pub fn volume(&self) -> i64 {
        self.q + (self.p * self.y - self.q * self.x) - self.y
    }

    /// Sort key `(q, p, y, x)` used for the optional seed ordering.
    pub fn rank_key(&self) -> (i64, i64, i64, i64) {
        (self.q, self.p, self.y, self.x)
    }
}

/// The parallelogram `conv{±(1, 0), ±(p, q)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubParallelogram {
    pub p: i64,
    pub q: i64,
}

impl SubParallelogram {
    pub fn vertices(&self) -> [LatticePoint; 4] {
        let (u, v) = (LatticePoint::new(1, 0), LatticePoint::new(self.p, self.q));
        [u, v, -u, -v]
    }

    pub fn polygon(&self) -> Polygon {
        Polygon::from_ccw_unchecked(self.vertices().to_vec())
    }
}

/// Whether some lattice point `m != 0` has `scale * m` strictly inside the
/// convex ccw polygon `vs`. Equivalently: `conv(vs) / scale` has a nonzero
/// interior lattice point.
pub fn has_nonzero_interior_multiple(vs: &[LatticePoint], scale: i64) -> bool {
    let n = vs.len();
    let facets: Vec<Facet> = (0..n).map(|i| Facet::new(vs[i], vs[(i + 1) % n])).collect();
    let y_min = vs.iter().map(|v| v.y).min().unwrap();
    let y_max = vs.iter().map(|v| v.y).max().unwrap();
    let mut y = div_ceil(y_min, scale) * scale;
    while y <= y_max {
        let mut x_lo = i64::MIN;
        let mut x_hi = i64::MAX;
        let mut empty = false;
        for f in &facets {
            // normal.x * x < l - normal.y * y
            let rhs = f.local_index - f.normal.y * y;
            match f.normal.x.signum() {
                0 => {
                    if rhs <= 0 {
                        empty = true;
                        break;
                    }
                }
                1 => x_hi = x_hi.min(div_ceil(rhs, f.normal.x) - 1),
                _ => x_lo = x_lo.max(div_floor(rhs, f.normal.x) + 1),
            }
        }
        if !empty && x_lo <= x_hi {
            let first = div_ceil(x_lo, scale) * scale;
            if first <= x_hi {
                if y != 0 {
                    return true;
                }
                // skip the origin itself
                if first != 0 || first + scale <= x_hi {
                    return true;
                }
            }
        }
        y += scale;
    }
    false
}

/// Step one: every normalised LDP-triangle `T` with `order(T) <= order` and
/// `Vol(T) <= volume`.
pub fn enumerate_sub_triangles(order: i64, volume: i64) -> Vec<SubTriangle> {
    let mut out: Vec<SubTriangle> = (1..=volume - 2)
        .into_par_iter()
        .flat_map_iter(|q| {
            let mut rows = Vec::new();
            for p in 0..q {
                if gcd(p, q) != 1 || !cone_admissible(p, q, order) {
                    continue;
                }
                for y in -q..0 {
                    // unique x with y p - q <= x q < y p
                    let x = div_ceil(y * p - q, q);
                    debug_assert!(x * q < y * p);
                    if gcd(x, y) != 1 {
                        continue;
                    }
                    let t = SubTriangle { p, q, x, y };
                    if t.volume() <= volume && !has_nonzero_interior_multiple(&t.vertices(), order) {
                        rows.push(t);
                    }
                }
            }
            rows
        })
        .collect();
    out.sort_unstable();
    out
}

/// `(p, q)` pairs whose cone triangle `conv{0, (1,0), (p,q)} / I` has no interior lattice point.
fn cone_admissible(p: i64, q: i64, order: i64) -> bool {
    // Row w (0 < w < q) meets the open triangle in p w / q < u < p w / q + (q - w) / q,
    // an interval of length < 1.
    let mut w = order;
    while w < q {
        let u = div_floor(p * w, q) + 1;
        if q * u < p * w + q - w && u % order == 0 {
            return false;
        }
        w += order;
    }
    true
}

/// Step two: admissible parallelograms, with `q <= 4 I^2 - 1`.
pub fn enumerate_sub_parallelograms(order: i64, volume: i64, triangles: &[SubTriangle]) -> Vec<SubParallelogram> {
    let pairs: BTreeSet<(i64, i64)> = triangles.iter().map(|t| (t.p, t.q)).collect();
    pairs
        .into_iter()
        .filter(|&(_, q)| q < 4 * order * order && 4 * q <= volume)
        .map(|(p, q)| SubParallelogram { p, q })
        .filter(|par| !has_nonzero_interior_multiple(&par.vertices(), order))
        .collect()
}

/// Triangle corners indexed by the determinant of a ccw vertex pair.
struct TriangleIndex {
    /// `cross(a, b) -> [(a, b, c)]` with `(a, b, c)` ccw, orientation-reversed copies included.
    by_det: HashMap<i64, Vec<[LatticePoint; 3]>>,
}

impl TriangleIndex {
    fn new<'a>(triangles: impl IntoIterator<Item = &'a SubTriangle>) -> Self {
        let mut by_det: HashMap<i64, Vec<[LatticePoint; 3]>> = HashMap::new();
        for t in triangles {
            let v = t.vertices();
            let mirrored = v.map(|p| LatticePoint::new(-p.x, p.y));
            for corners in [v, [mirrored[2], mirrored[1], mirrored[0]]] {
                for i in 0..3 {
                    let (a, b, c) = (corners[i], corners[(i + 1) % 3], corners[(i + 2) % 3]);
                    by_det.entry(cross(a, b)).or_default().push([a, b, c]);
                }
            }
        }
        for list in by_det.values_mut() {
            list.sort_unstable();
            list.dedup();
        }
        TriangleIndex { by_det }
    }

    /// All `w` with `conv{v1, v2, w}` equivalent to a listed triangle, `(v1, v2, w)` ccw.
    fn apexes(&self, v1: LatticePoint, v2: LatticePoint, out: &mut Vec<LatticePoint>) {
        let det = cross(v1, v2);
        let Some(list) = self.by_det.get(&det) else { return };
        for &[a, b, c] in list {
            // M a = v1, M b = v2 with det M = 1, so M = [v1 v2] [a b]^{-1}
            let m00 = v1.x * b.y - v2.x * a.y;
            let m01 = -v1.x * b.x + v2.x * a.x;
            let m10 = v1.y * b.y - v2.y * a.y;
            let m11 = -v1.y * b.x + v2.y * a.x;
            if [m00, m01, m10, m11].iter().any(|e| e % det != 0) {
                continue;
            }
            let (m00, m01, m10, m11) = (m00 / det, m01 / det, m10 / det, m11 / det);
            out.push(LatticePoint::new(m00 * c.x + m01 * c.y, m10 * c.x + m11 * c.y));
        }
    }
}

/// Search parameters for the order/volume classification.
#[derive(Clone, Copy, Debug)]
pub struct LocalSearch {
    pub order: i64,
    pub volume: i64,
    /// Grow each seed triangle only with triangles of rank at most its own.
    pub seed_ordering: bool,
    pub node_budget: u64,
}

impl LocalSearch {
    pub fn new(order: i64, volume: i64) -> Self {
        LocalSearch { order, volume, seed_ordering: false, node_budget: crate::node_budget_from_env() }
    }

    /// Largest vertex count considered. Reflexive hexagons exceed `4I + 1` when `I = 1`.
    pub fn max_vertices(&self) -> usize {
        (4 * self.order + 1).max(6) as usize
    }

    fn admissible(&self, vs: &[LatticePoint]) -> bool {
        let p = Polygon::from_ccw_unchecked(vs.to_vec());
        p.normalized_volume() <= self.volume && !has_nonzero_interior_multiple(vs, self.order)
    }

    /// Step three: every admissible polygon with one more vertex than some member of `level`.
    fn grow(
        &self,
        level: &HashSet<CanonicalForm>,
        index: &TriangleIndex,
        nodes: &std::sync::atomic::AtomicU64,
    ) -> Result<HashSet<CanonicalForm>> {
        let items: Vec<&CanonicalForm> = level.iter().collect();
        items
            .par_iter()
            .map(|c| {
                let mut found = HashSet::new();
                let vs = c.vertices();
                let n = vs.len();
                let mut cand = Vec::new();
                for i in 0..n {
                    cand.push(-vs[i]);
                    index.apexes(vs[i], vs[(i + 1) % n], &mut cand);
                }
                cand.sort_unstable();
                cand.dedup();
                let used = nodes.fetch_add(cand.len() as u64, std::sync::atomic::Ordering::Relaxed);
                if used > self.node_budget {
                    return Err(Error::ResourceLimit(self.node_budget));
                }
                let mut pts = vs.to_vec();
                for w in cand {
                    pts.push(w);
                    let hull = convex_hull(&pts);
                    pts.pop();
                    if hull.len() != n + 1 || !self.admissible(&hull) {
                        continue;
                    }
                    found.insert(canonical_unchecked(&hull));
                }
                Ok(found)
            })
            .try_reduce(HashSet::new, |mut a, b| {
                a.extend(b);
                Ok(a)
            })
    }

    /// All LDP-polygons with `order <= I` and `Vol <= V`, by vertex count.
    pub fn classify(&self) -> Result<BTreeSet<CanonicalForm>> {
        if self.order < 1 || self.volume < 1 {
            return Err(Error::Domain(format!("need I, V >= 1, got I = {}, V = {}", self.order, self.volume)));
        }
        let triangles = enumerate_sub_triangles(self.order, self.volume);
        let parallelograms = enumerate_sub_parallelograms(self.order, self.volume, &triangles);
        log::info!("I={} V={}: {} sub-triangles, {} sub-parallelograms", self.order, self.volume, triangles.len(), parallelograms.len());
        let nodes = std::sync::atomic::AtomicU64::new(0);
        let par_forms: HashSet<CanonicalForm> =
            parallelograms.iter().map(|p| canonical_unchecked(&p.vertices())).collect();

        let mut all: BTreeSet<CanonicalForm> = par_forms.iter().cloned().collect();
        if self.seed_ordering {
            // rank of a class: its largest normalised representative
            let mut rank: HashMap<CanonicalForm, (i64, i64, i64, i64)> = HashMap::new();
            for t in &triangles {
                let e = rank.entry(canonical_unchecked(&t.vertices())).or_insert(t.rank_key());
                *e = (*e).max(t.rank_key());
            }
            let mut seeds: Vec<(CanonicalForm, (i64, i64, i64, i64))> = rank.clone().into_iter().collect();
            seeds.sort_by_key(|s| s.1);
            for (seed, r) in seeds {
                let allowed = triangles.iter().filter(|t| rank[&canonical_unchecked(&t.vertices())] <= r);
                let index = TriangleIndex::new(allowed);
                let mut level: HashSet<CanonicalForm> = HashSet::from([seed]);
                all.extend(level.iter().cloned());
                for _ in 4..=self.max_vertices() {
                    level = self.grow(&level, &index, &nodes)?;
                    if level.is_empty() {
                        break;
                    }
                    all.extend(level.iter().cloned());
                }
            }
        } else {
            let index = TriangleIndex::new(&triangles);
            let mut level: HashSet<CanonicalForm> = triangles.iter().map(|t| canonical_unchecked(&t.vertices())).collect();
            all.extend(level.iter().cloned());
            for t in 4..=self.max_vertices() {
                level = self.grow(&level, &index, &nodes)?;
                if t == 4 {
                    level.extend(par_forms.iter().cloned());
                }
                log::info!("I={} V={}: {} classes with {t} vertices", self.order, self.volume, level.len());
                if level.is_empty() {
                    break;
                }
                all.extend(level.iter().cloned());
            }
        }
        Ok(all)
    }
}

/// Volume cap used for maximal local index `k`.
pub fn volume_cap(k: i64) -> Result<i64> {
    if k == 1 {
        Ok(12)
    } else {
        volume_bound(k, VolumeKind::Ldp)
    }
}

/// All LDP-polygons with maximal local index at most `k`.
pub fn classify_by_max_local_index(k: i64) -> Result<BTreeSet<CanonicalForm>> {
    classify_by_max_local_index_with(k, false)
}

pub fn classify_by_max_local_index_with(k: i64, seed_ordering: bool) -> Result<BTreeSet<CanonicalForm>> {
    if k < 1 {
        return Err(Error::Domain(format!("k = {k} < 1")));
    }
    let search = LocalSearch { seed_ordering, ..LocalSearch::new(k, volume_cap(k)?) };
    Ok(search
        .classify()?
        .into_iter()
        .filter(|c| c.to_polygon().facet_iter().all(|f| f.local_index <= k))
        .collect())
}
