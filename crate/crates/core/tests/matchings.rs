mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use common::{load, longhex_ray_matching, longhex_ray_point};
use dimer_core::matchings::{
    characteristic_polygon, check_consistency, enumerate_matchings, height_by_superposition, is_perfect_matching,
    zigzag_paths, HeightWalker, PointKind,
};
use dimer_core::lattice::V2;

#[test]
fn longhex_sixty_matchings_ten_heights() {
    let t = load("longhex");
    let q = t.quiver();
    let start = Instant::now();
    let d = characteristic_polygon(&t, &q).unwrap();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert_eq!(d.matchings.len(), 60);
    assert_eq!(d.polygon.points.len(), 10);
    assert_eq!(d.polygon.corners.len(), 6);
    assert_eq!(d.polygon.interior().len(), 2);
    assert_eq!(d.polygon.boundary().len(), 8);
    assert_eq!(d.polygon.twice_area(), 10);
}

#[test]
fn longhex_polygon_matches_published_figure_up_to_translation() {
    let t = load("longhex");
    let q = t.quiver();
    let d = characteristic_polygon(&t, &q).unwrap();
    let pub_points: BTreeSet<V2> = (1..=10).map(longhex_ray_point).collect();
    let shift = *pub_points.iter().min().unwrap();
    let ours: BTreeSet<V2> = d.polygon.points.keys().map(|&p| p + shift).collect();
    assert_eq!(ours, pub_points);
    // each labelled stable matching sits at its labelled point
    for k in 1..=10 {
        let m = t.edge_set(&longhex_ray_matching(k)).unwrap();
        assert!(is_perfect_matching(&t, &m), "ray {k}");
        let i = d.matchings.iter().position(|x| x.edges == m).unwrap();
        assert_eq!(d.matchings[i].point + shift, longhex_ray_point(k), "ray {k}");
    }
    for k in [8, 9] {
        assert_eq!(d.polygon.kinds[&(longhex_ray_point(k) - shift)], PointKind::Interior);
    }
}

#[test]
fn height_methods_agree_and_cocycle_holds() {
    for name in ["c3", "conifold", "longhex"] {
        let t = load(name);
        let q = t.quiver();
        let w = HeightWalker::new(&q);
        let all = enumerate_matchings(&t).unwrap();
        let step = (all.len() / 12).max(1);
        let sample: Vec<_> = all.iter().step_by(step).collect();
        for a in &sample {
            assert_eq!(w.height(a, a).unwrap(), V2::ZERO);
            for b in &sample {
                let h = w.height(a, b).unwrap();
                assert_eq!(h, height_by_superposition(&t, a, b), "{name}");
                assert_eq!(h, -w.height(b, a).unwrap());
                for c in &sample {
                    assert_eq!(w.height(a, c).unwrap(), h + w.height(b, c).unwrap());
                }
            }
        }
    }
}

#[test]
fn corners_carry_one_matching() {
    for name in ["c3", "conifold", "longhex"] {
        let t = load(name);
        let d = characteristic_polygon(&t, &t.quiver()).unwrap();
        for c in &d.polygon.corners {
            assert_eq!(d.polygon.points[c].len(), 1, "{name} corner {c}");
        }
        assert!(d.polygon.unoccupied().is_empty());
    }
}

#[test]
fn zigzags_and_consistency() {
    let t = load("conifold");
    let z = zigzag_paths(&t);
    assert_eq!(z.len(), 4);
    let classes: BTreeSet<V2> = z.iter().map(|z| z.class).collect();
    assert_eq!(classes.len(), 4);
    assert!(classes.iter().all(|c| c.0.abs() + c.1.abs() == 1 || (c.0.abs() == 1 && c.1.abs() == 1)));
    for name in ["c3", "conifold", "longhex"] {
        let t = load(name);
        let r = check_consistency(&t);
        assert!(r.is_consistent(), "{name}: {r:?}");
        let sum = r.zigzag_classes.iter().fold(V2::ZERO, |s, &c| s + c);
        assert_eq!(sum, V2::ZERO);
    }
}

#[test]
fn conifold_square() {
    let t = load("conifold");
    let d = characteristic_polygon(&t, &t.quiver()).unwrap();
    assert_eq!(d.matchings.len(), 4);
    assert_eq!(d.polygon.corners.len(), 4);
    assert_eq!(d.polygon.twice_area(), 2);
}
