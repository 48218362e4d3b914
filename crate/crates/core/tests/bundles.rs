mod common;

use std::collections::BTreeMap;

use common::*;
use dimer_core::bundles::*;
use dimer_core::fan::{build_fan, Stability};
use dimer_core::matchings::characteristic_polygon;
use dimer_core::recipe::run_recipe;

fn labelled(t: &dimer_core::dimer::Tiling, fan: &dimer_core::fan::Fan, ks: &[usize]) -> Vec<i64> {
    let mut d = vec![0; fan.rays.len()];
    for &k in ks {
        d[longhex_ray(t, fan, k)] += 1;
    }
    d
}

#[test]
fn arrow_divisor_of_0_to_6() {
    let (t, q, fan) = longhex_fan();
    let a = (0..q.n_arrows()).find(|&a| q.arrows[a].tail == 0 && q.arrows[a].head == 6).unwrap();
    assert_eq!(arrow_divisor(&fan, a), labelled(&t, &fan, &[3, 4]));
}

#[test]
fn face_cycles_have_equal_divisors() {
    let (_, q, fan) = longhex_fan();
    for a in 0..q.n_arrows() {
        let (p, m) = q.relation_paths(a);
        assert_eq!(divisor_of_path(&fan, &p), divisor_of_path(&fan, &m));
    }
}

#[test]
fn path_divisors_to_nine_on_both_charts() {
    let (t, q, fan) = longhex_fan();
    let ray = |k| longhex_ray(&t, &fan, k);
    let plus = fan.triangle([ray(7), ray(8), ray(9)]).unwrap();
    let minus = fan.triangle([ray(8), ray(9), ray(10)]).unwrap();
    let (_, dp) = path_divisor(&q, &fan, plus, 9).unwrap();
    let (_, dm) = path_divisor(&q, &fan, minus, 9).unwrap();
    assert_eq!(dp, labelled(&t, &fan, &[2, 3, 4, 10]));
    assert_eq!(dm, labelled(&t, &fan, &[4, 5, 6, 7]));
    // dm - dp is the principal divisor of m = (-1, -1, 0) in published coordinates
    let cg = ClassGroup::new(&fan);
    let diff: Vec<i64> = dm.iter().zip(&dp).map(|(a, b)| a - b).collect();
    assert!(cg.is_principal(&diff));
    assert_eq!(diff, {
        let mut d = labelled(&t, &fan, &[5, 6, 7]);
        for (x, y) in d.iter_mut().zip(labelled(&t, &fan, &[2, 3, 10])) {
            *x -= y;
        }
        d
    });
    let s = fan.segment(ray(8), ray(9)).unwrap();
    assert_eq!(degree_on_curve(&q, &fan, 9, s).unwrap().degree, 1);
    assert_eq!(degree_on_curve(&q, &fan, 0, s).unwrap().degree, 0);
}

#[test]
fn longhex_relations() {
    let (t, q, fan) = longhex_fan();
    let ray = |k| longhex_ray(&t, &fan, k);
    let (rep, _) = run_recipe(&t, &q, &fan).unwrap();
    let rel = verify_pic_relations(&q, &fan, &rep).unwrap();
    assert!(rel.ok(), "{rel:?}");
    assert_eq!(rel.class_rank, 7);
    assert_eq!((rel.nonzero_vertices, rel.interior_points), (9, 2));
    let by_ray: BTreeMap<usize, _> = rel.relations.iter().map(|r| (r.ray, r)).collect();
    let r8 = by_ray[&ray(8)];
    assert_eq!(r8.lhs, vec![2, 5]);
    assert_eq!(r8.rhs, BTreeMap::from([(3, 1), (6, 1), (8, 1)]));
    let r9 = by_ray[&ray(9)];
    assert_eq!(r9.lhs, vec![2]);
    assert_eq!(r9.rhs, BTreeMap::from([(4, 1), (9, 1)]));
}

#[test]
fn degrees_agree_with_jigsaw_adjacency() {
    for name in ["conifold", "longhex"] {
        let t = load(name);
        let q = t.quiver();
        let md = characteristic_polygon(&t, &q).unwrap();
        let fan = build_fan(&q, &md, &Stability::default_for(q.n_vertices, 0).unwrap()).unwrap();
        let (_, data) = run_recipe(&t, &q, &fan).unwrap();
        for (s, d) in data.iter().enumerate() {
            for i in 0..q.n_vertices {
                let deg = degree_on_curve(&q, &fan, i, s).unwrap().degree;
                let adj = d.jigsaw.adjacent[d.jigsaw.piece_of[i]];
                assert_eq!(deg == 1, adj, "{name} segment {s} vertex {i}");
            }
            for &src in &d.quivers.sources_plus {
                assert_eq!(degree_on_curve(&q, &fan, src, s).unwrap().degree, 1);
            }
        }
    }
}

#[test]
fn conifold_class_group() {
    let t = load("conifold");
    let q = t.quiver();
    let md = characteristic_polygon(&t, &q).unwrap();
    let fan = build_fan(&q, &md, &Stability::default_for(2, 0).unwrap()).unwrap();
    let cg = ClassGroup::new(&fan);
    assert_eq!(cg.rank(), 1);
    let b = bundle_class(&q, &fan, &cg, 1).unwrap();
    assert_eq!(b.divisor.iter().sum::<i64>(), 1);
    assert_eq!(bundle_class(&q, &fan, &cg, 0).unwrap().class, vec![0]);
}
