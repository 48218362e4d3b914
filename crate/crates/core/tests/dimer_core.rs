mod common;

use common::{load, LONGHEX_ARROWS};
use dimer_core::dimer::{lift_subquiver, Color, Counts};
use dimer_core::bits::Bits;
use dimer_core::lattice::V2;

#[test]
fn longhex_counts() {
    let t = load("longhex");
    assert_eq!(t.counts(), Counts { nodes: 18, edges: 28, tiles: 10 });
}

#[test]
fn longhex_quiver_matches_published_arrows() {
    let t = load("longhex");
    let q = t.quiver();
    q.check_faces().unwrap();
    assert_eq!(q.n_vertices, 10);
    assert_eq!(q.faces.len(), 18);
    for &(id, tail, head, (dx, dy), _) in &LONGHEX_ARROWS {
        let a = t.edge_index(id).unwrap();
        let ar = q.arrows[a];
        assert_eq!((ar.tail, ar.head, ar.offset), (tail, head, V2(dx, dy)), "arrow on edge {id}");
    }
}

#[test]
fn face_colors_and_orientation() {
    let t = load("longhex");
    let q = t.quiver();
    let whites = q.faces.iter().filter(|f| f.color == Color::White).count();
    assert_eq!(whites, 9);
    for f in &q.faces {
        assert_eq!(t.color(f.node), f.color);
    }
}

#[test]
fn conifold_quiver() {
    let t = load("conifold");
    let q = t.quiver();
    q.check_faces().unwrap();
    let mut pairs: Vec<(usize, usize)> = q.arrows.iter().map(|a| (a.tail, a.head)).collect();
    pairs.sort();
    assert_eq!(pairs, vec![(0, 1), (0, 1), (1, 0), (1, 0)]);
    let a = (0..4).find(|&a| q.arrows[a].tail == 0 && q.arrows[a].offset == V2::ZERO).unwrap();
    let lift = lift_subquiver(&q, &Bits::from_indices(4, [a]), 0).unwrap();
    assert_eq!(lift.offsets, vec![V2::ZERO, V2::ZERO]);
}

#[test]
fn c3_fixture() {
    let t = load("c3");
    assert_eq!(t.counts(), Counts { nodes: 2, edges: 3, tiles: 1 });
    let q = t.quiver();
    assert_eq!(q.faces.len(), 2);
    assert!(q.faces.iter().all(|f| f.arrows.len() == 3));
}
