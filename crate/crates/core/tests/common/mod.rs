#![allow(dead_code)]

use ldp::{LatticePoint, Polygon, Requirement, UnimodularMap};
use proptest::prelude::*;
use rand::Rng;

/// Random IP-polygons: hulls of a few points around the origin.
pub fn ip_polygon(radius: i64) -> impl Strategy<Value = Polygon> {
    prop::collection::vec((-radius..=radius, -radius..=radius), 3..9).prop_filter_map("origin not interior", |pts| {
        let pts: Vec<LatticePoint> = pts.into_iter().map(LatticePoint::from).collect();
        Polygon::new(&pts, Requirement::Ip).ok()
    })
}

/// Random LDP-polygons.
pub fn ldp_polygon(radius: i64) -> impl Strategy<Value = Polygon> {
    ip_polygon(radius).prop_filter("vertices not primitive", |q| q.is_ldp())
}

/// Products of a few elementary unimodular matrices.
pub fn unimodular_map() -> impl Strategy<Value = UnimodularMap> {
    prop::collection::vec((0u8..4, -3i64..=3), 0..6).prop_map(|ops| {
        ops.into_iter().fold(UnimodularMap::IDENTITY, |m, (kind, k)| m.compose(&elementary(kind, k)))
    })
}

fn elementary(kind: u8, k: i64) -> UnimodularMap {
    match kind {
        0 => UnimodularMap::new(1, k, 0, 1),
        1 => UnimodularMap::new(1, 0, k, 1),
        2 => UnimodularMap::new(0, 1, 1, 0),
        _ => UnimodularMap::new(-1, 0, 0, 1),
    }
    .expect("elementary matrices are unimodular")
}

/// Same distributions driven by a seeded `rand` generator, for fixed-size sweeps.
pub fn random_ip_polygon<R: Rng>(rng: &mut R, radius: i64) -> Polygon {
    loop {
        let n = rng.gen_range(3..9);
        let pts: Vec<LatticePoint> =
            (0..n).map(|_| LatticePoint::new(rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius))).collect();
        if let Ok(q) = Polygon::new(&pts, Requirement::Ip) {
            return q;
        }
    }
}

pub fn random_map<R: Rng>(rng: &mut R) -> UnimodularMap {
    (0..rng.gen_range(0..6))
        .fold(UnimodularMap::IDENTITY, |m, _| m.compose(&elementary(rng.gen_range(0..4), rng.gen_range(-3..=3))))
}
