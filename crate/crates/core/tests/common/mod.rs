#![allow(dead_code)]

pub mod brute;

use std::path::PathBuf;

use dimer_core::dimer::Tiling;
use dimer_core::io::read_dimer;
use dimer_core::lattice::V2;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

pub fn load(name: &str) -> Tiling {
    Tiling::new(read_dimer(&fixture_path(name)).unwrap()).unwrap()
}

/// Arrows of the longhex quiver as drawn in the published quiver figure:
/// (edge id, tail, head, offset, rays whose stable matching contains the edge).
pub const LONGHEX_ARROWS: [(u32, usize, usize, (i64, i64), &[usize]); 28] = [
    (1, 0, 4, (0, -1), &[1, 2, 6]),
    (2, 0, 6, (0, 0), &[3, 4]),
    (3, 0, 8, (-1, -1), &[4, 5]),
    (4, 1, 0, (1, 1), &[3, 8, 9, 10]),
    (5, 1, 2, (0, 0), &[6]),
    (6, 2, 4, (0, -1), &[1, 5, 6, 7, 8, 9]),
    (7, 2, 4, (1, 0), &[1, 2, 3, 8, 9, 10]),
    (8, 2, 9, (0, 0), &[3, 4, 5, 7, 8, 9, 10]),
    (9, 3, 2, (0, 0), &[4]),
    (10, 3, 5, (0, 0), &[1, 9]),
    (11, 4, 1, (-1, 0), &[4, 5, 7]),
    (12, 4, 3, (-1, 0), &[5, 6, 7]),
    (13, 4, 3, (0, 1), &[2, 3, 10]),
    (14, 4, 6, (0, 0), &[1, 6, 7, 9]),
    (15, 4, 7, (0, 1), &[3, 4, 10]),
    (16, 4, 8, (0, 0), &[1, 2, 9, 10]),
    (17, 5, 0, (1, 0), &[1, 2, 6, 7, 8, 9, 10]),
    (18, 5, 4, (0, -1), &[4, 5, 6, 7, 8]),
    (19, 5, 4, (1, 0), &[2, 3, 4, 8, 10]),
    (20, 6, 5, (-1, 0), &[5]),
    (21, 6, 9, (0, 0), &[2, 10]),
    (22, 7, 0, (0, 0), &[5, 7, 8, 9]),
    (23, 7, 2, (0, 0), &[2]),
    (24, 8, 5, (0, 1), &[3]),
    (25, 8, 9, (0, 0), &[6, 7]),
    (26, 9, 1, (0, 0), &[1, 2]),
    (27, 9, 4, (0, 0), &[3, 4, 5, 8]),
    (28, 9, 7, (0, 0), &[1, 6]),
];

/// Lattice points of the labelled rays 1..=10 in the published polygon.
pub const LONGHEX_RAYS: [(usize, (i64, i64)); 10] = [
    (1, (0, 0)),
    (2, (0, 1)),
    (3, (-2, 3)),
    (4, (-3, 3)),
    (5, (-3, 2)),
    (6, (-1, 0)),
    (7, (-2, 1)),
    (8, (-2, 2)),
    (9, (-1, 1)),
    (10, (-1, 2)),
];

/// Edge ids of the stable matching of the labelled ray `k`.
pub fn longhex_ray_matching(k: usize) -> Vec<u32> {
    LONGHEX_ARROWS.iter().filter(|a| a.4.contains(&k)).map(|a| a.0).collect()
}

pub fn longhex_ray_point(k: usize) -> V2 {
    let p = LONGHEX_RAYS.iter().find(|r| r.0 == k).unwrap().1;
    V2(p.0, p.1)
}

/// Longhex pipeline up to the fan, with the default parameter.
pub fn longhex_fan() -> (Tiling, dimer_core::dimer::Quiver, dimer_core::fan::Fan) {
    use dimer_core::fan::{build_fan, Stability};
    let t = load("longhex");
    let q = t.quiver();
    let md = dimer_core::matchings::characteristic_polygon(&t, &q).unwrap();
    let theta = Stability::default_for(q.n_vertices, 0).unwrap();
    let fan = build_fan(&q, &md, &theta).unwrap();
    (t, q, fan)
}

/// Ray id of the labelled longhex ray `k`, found by its matching.
pub fn longhex_ray(t: &Tiling, fan: &dimer_core::fan::Fan, k: usize) -> usize {
    let m = t.edge_set(&longhex_ray_matching(k)).unwrap();
    fan.ray_of_matching(&m).unwrap_or_else(|| panic!("ray {k} is not a stable matching"))
}

/// Segment labels of the published marked triangulation: (ray, ray, vertices).
pub const LONGHEX_SEGMENT_LABELS: [(usize, usize, &[usize]); 11] = [
    (1, 9, &[9]),
    (9, 8, &[3, 9]),
    (8, 4, &[3]),
    (2, 9, &[7]),
    (9, 7, &[4]),
    (10, 8, &[6]),
    (8, 5, &[6]),
    (3, 8, &[8]),
    (8, 7, &[8]),
    (10, 9, &[4]),
    (9, 6, &[1]),
];

/// Point labels of the published marked triangulation.
pub const LONGHEX_POINT_LABELS: [(usize, &[usize]); 2] = [(8, &[2, 5]), (9, &[2])];
