mod common;

use common::*;
use dimer_core::fan::{build_fan, cone_module, verify_triangulation, Rejection, Stability};
use dimer_core::matchings::characteristic_polygon;

#[test]
fn longhex_stable_matchings_are_the_labelled_rays() {
    let (t, _, fan) = longhex_fan();
    assert_eq!(fan.rays.len(), 10);
    let shift = fan.rays[longhex_ray(&t, &fan, 1)].point - longhex_ray_point(1);
    for k in 1..=10 {
        let r = longhex_ray(&t, &fan, k);
        assert_eq!(fan.rays[r].point, longhex_ray_point(k) + shift, "ray {k}");
    }
}

#[test]
fn longhex_triangulation() {
    let (t, q, fan) = longhex_fan();
    assert_eq!(fan.triangles.len(), 10);
    assert_eq!(fan.interior.len(), 2);
    let ray = |k| longhex_ray(&t, &fan, k);
    // the published triangulation: 5 interior edges at ρ9, 4 at ρ8 (one shared)
    let interior: &[(usize, usize)] =
        &[(1, 9), (9, 8), (8, 4), (2, 9), (9, 7), (10, 8), (8, 5), (3, 8), (8, 7), (10, 9), (9, 6)];
    assert_eq!(fan.segments.len(), interior.len());
    for &(a, b) in interior {
        assert!(fan.segment(ray(a), ray(b)).is_some(), "segment {a}-{b}");
    }
    let s = fan.triangle([ray(8), ray(9), ray(10)]).unwrap();
    let mut sinks = q.sinks(&fan.triangles[s].module.support);
    sinks.sort();
    assert_eq!(sinks, vec![2, 5]);
    assert!(fan.triangle([ray(7), ray(8), ray(9)]).is_some());
    // σ+ of the segment ρ8ρ9 sits to the right when ρ8 < ρ9
    let seg = &fan.segments[fan.segment(ray(8), ray(9)).unwrap()];
    assert_eq!(seg.rays, [ray(8), ray(9)]);
    assert_eq!(fan.triangles[seg.plus].rays, {
        let mut r = [ray(7), ray(8), ray(9)];
        r.sort();
        r
    });
}

#[test]
fn wrong_diagonal_is_rejected_for_conifold() {
    let t = load("conifold");
    let q = t.quiver();
    let md = characteristic_polygon(&t, &q).unwrap();
    let theta = Stability::default_for(2, 0).unwrap();
    let fan = build_fan(&q, &md, &theta).unwrap();
    assert_eq!(fan.triangles.len(), 2);
    assert_eq!(fan.segments.len(), 1);
    let diag = fan.segments[0].rays;
    let others: Vec<usize> = (0..4).filter(|r| !diag.contains(r)).collect();
    let e = cone_module(&q, &fan.rays, &[others[0], others[1], diag[0]], &theta).unwrap_err();
    assert!(matches!(e, Rejection::Unstable { .. }), "{e:?}");
}

#[test]
fn c3_is_one_triangle() {
    let t = load("c3");
    let q = t.quiver();
    let md = characteristic_polygon(&t, &q).unwrap();
    let fan = build_fan(&q, &md, &Stability::default_for(1, 0).unwrap()).unwrap();
    assert_eq!(fan.triangles.len(), 1);
    assert!(fan.segments.is_empty());
}

#[test]
fn dropping_a_triangle_is_detected() {
    let (_, q, fan) = longhex_fan();
    let tris: Vec<_> = fan.triangles.iter().map(|t| t.rays.map(|r| fan.rays[r].point)).collect();
    assert!(verify_triangulation(&fan.corners, &tris, q.n_vertices).ok());
    let rep = verify_triangulation(&fan.corners, &tris[1..], q.n_vertices);
    assert!(!rep.ok());
    assert!(!rep.gaps.is_empty());
}

#[test]
fn other_zero_vertices_also_triangulate() {
    let t = load("longhex");
    let q = t.quiver();
    let md = characteristic_polygon(&t, &q).unwrap();
    for z in 0..q.n_vertices {
        let fan = build_fan(&q, &md, &Stability::default_for(q.n_vertices, z).unwrap()).unwrap();
        assert_eq!(fan.triangles.len(), 10, "zero vertex {z}");
    }
}
