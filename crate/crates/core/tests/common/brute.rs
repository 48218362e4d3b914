//! Brute-force recomputation of the pipeline on the smallest models.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use dimer_core::dimer::{DimerModel, Quiver, Tiling};
use dimer_core::fan::{build_fan, Fan, Stability};
use dimer_core::lattice::V2;
use dimer_core::matchings::characteristic_polygon;
use dimer_core::recipe::run_recipe;

/// Every choice of one edge per black node that covers each white node once.
pub fn brute_matchings(m: &DimerModel) -> BTreeSet<Vec<u32>> {
    let blacks: Vec<u32> = m.nodes.iter().filter(|n| n.color == dimer_core::dimer::Color::Black).map(|n| n.id).collect();
    let mut out = BTreeSet::new();
    let mut pick = vec![0u32; blacks.len()];
    fn rec(m: &DimerModel, blacks: &[u32], k: usize, pick: &mut Vec<u32>, used: &mut BTreeSet<u32>, out: &mut BTreeSet<Vec<u32>>) {
        if k == blacks.len() {
            let mut v = pick.clone();
            v.sort_unstable();
            out.insert(v);
            return;
        }
        for e in m.edges.iter().filter(|e| e.black == blacks[k]) {
            if used.insert(e.white) {
                pick[k] = e.id;
                rec(m, blacks, k + 1, pick, used, out);
                used.remove(&e.white);
            }
        }
    }
    rec(m, &blacks, 0, &mut pick, &mut BTreeSet::new(), &mut out);
    out
}

/// `h(Π0, Π)`: with `Π0` run black to white and `Π` back, the cycle has
/// class `Σ_Π0 offset - Σ_Π offset`, rotated by a quarter turn.
pub fn brute_height(m: &DimerModel, pm0: &[u32], pm: &[u32]) -> V2 {
    let off = |ids: &[u32]| ids.iter().fold(V2::ZERO, |s, &i| s + m.edges.iter().find(|e| e.id == i).unwrap().offset);
    let h = off(pm0) - off(pm);
    V2(h.1, -h.0)
}

fn reach(q: &Quiver, removed: &BTreeSet<usize>, zero: usize) -> usize {
    let mut seen = vec![false; q.n_vertices];
    seen[zero] = true;
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        for (a, ar) in q.arrows.iter().enumerate() {
            if ar.tail == v && !removed.contains(&a) && !seen[ar.head] {
                seen[ar.head] = true;
                queue.push_back(ar.head);
            }
        }
    }
    seen.iter().filter(|&&s| s).count()
}

pub struct Brute {
    /// Polygon point to its θ-stable matching (edge indices).
    pub rays: BTreeMap<V2, BTreeSet<usize>>,
    pub points: BTreeSet<V2>,
    pub triangles: BTreeSet<[V2; 3]>,
}

pub fn brute(t: &Tiling, q: &Quiver) -> Brute {
    let m = t.model();
    let all: Vec<Vec<u32>> = brute_matchings(m).into_iter().collect();
    let reference: Vec<u32> = characteristic_polygon(t, q).unwrap().matchings[0].edges.iter().map(|e| t.edge_id(e)).collect();
    let raw: Vec<V2> = all.iter().map(|pm| brute_height(m, &reference, pm)).collect();
    let lo = *raw.iter().min().unwrap();
    let points: BTreeSet<V2> = raw.iter().map(|&h| h - lo).collect();
    let mut rays = BTreeMap::new();
    for (pm, &h) in all.iter().zip(&raw) {
        let idx: BTreeSet<usize> = pm.iter().map(|&i| t.edge_index(i).unwrap()).collect();
        if reach(q, &idx, 0) == q.n_vertices {
            assert!(rays.insert(h - lo, idx).is_none(), "two stable matchings at one point");
        }
    }
    let pts: Vec<V2> = rays.keys().copied().collect();
    let mut triangles = BTreeSet::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if (pts[j] - pts[i]).cross(pts[k] - pts[i]).abs() != 1 {
                    continue;
                }
                let removed: BTreeSet<usize> = [i, j, k].iter().flat_map(|&x| rays[&pts[x]].iter().copied()).collect();
                if reach(q, &removed, 0) == q.n_vertices {
                    triangles.insert([pts[i], pts[j], pts[k]]);
                }
            }
        }
    }
    Brute { rays, points, triangles }
}

pub fn pipeline(t: &Tiling) -> (Quiver, Fan) {
    let q = t.quiver();
    let md = characteristic_polygon(t, &q).unwrap();
    let fan = build_fan(&q, &md, &Stability::default_for(q.n_vertices, 0).unwrap()).unwrap();
    (q, fan)
}

fn bfs(q: &Quiver, removed: &BTreeSet<usize>, to: usize) -> Vec<usize> {
    let mut prev: Vec<Option<usize>> = vec![None; q.n_vertices];
    let mut seen = vec![false; q.n_vertices];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for (a, ar) in q.arrows.iter().enumerate() {
            if ar.tail == v && !removed.contains(&a) && !seen[ar.head] {
                seen[ar.head] = true;
                prev[ar.head] = Some(a);
                queue.push_back(ar.head);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while let Some(a) = prev[v] {
        path.push(a);
        v = q.arrows[a].tail;
    }
    path
}

/// Segment markings: sources of the tiles that move, inside `Q^{σ₊}`.
pub fn brute_segment_markings(q: &Quiver, b: &Brute) -> BTreeMap<[V2; 2], Vec<usize>> {
    let mut out = BTreeMap::new();
    let tris: Vec<[V2; 3]> = b.triangles.iter().copied().collect();
    for (x, s) in tris.iter().enumerate() {
        for u in &tris[x + 1..] {
            let common: Vec<V2> = s.iter().copied().filter(|p| u.contains(p)).collect();
            let [r1, r2] = common[..] else { continue };
            let apex = |t: &[V2; 3]| *t.iter().find(|p| !common.contains(p)).unwrap();
            // σ₊ lies to the right of r1 → r2
            let (plus, minus) = if (r2 - r1).cross(apex(s) - r1) < 0 { (s, u) } else { (u, s) };
            let removed: BTreeSet<usize> = plus.iter().flat_map(|p| b.rays[p].iter().copied()).collect();
            let rho3 = &b.rays[&apex(minus)];
            let moves: Vec<bool> = (0..q.n_vertices).map(|j| bfs(q, &removed, j).iter().any(|a| rho3.contains(a))).collect();
            let sources = (0..q.n_vertices)
                .filter(|&j| moves[j])
                .filter(|&j| !q.arrows.iter().enumerate().any(|(a, ar)| ar.head == j && moves[ar.tail] && !removed.contains(&a)))
                .collect();
            out.insert([r1, r2], sources);
        }
    }
    out
}

pub fn brute_point_markings(q: &Quiver, b: &Brute, interior: &[V2]) -> BTreeMap<V2, Vec<usize>> {
    interior
        .iter()
        .map(|&p| {
            let marks = (1..q.n_vertices)
                .filter(|&i| {
                    b.triangles.iter().filter(|t| t.contains(&p)).all(|t| {
                        let removed: BTreeSet<usize> = t.iter().flat_map(|x| b.rays[x].iter().copied()).collect();
                        q.arrows.iter().enumerate().all(|(a, ar)| ar.tail != i || removed.contains(&a))
                    })
                })
                .collect();
            (p, marks)
        })
        .collect()
}

/// Recomputes matchings, polygon, stable rays, triangles and markings and
/// compares them with the pipeline.
pub fn compare(t: &Tiling) -> Result<(), String> {
    let (q, fan) = pipeline(t);
    let md = characteristic_polygon(t, &q).unwrap();
    let b = brute(t, &q);
    let name = t.name();
    let ours: BTreeSet<Vec<u32>> = md.matchings.iter().map(|m| m.edges.iter().map(|e| t.edge_id(e)).collect()).collect();
    check(name, "matchings", &ours, &brute_matchings(t.model()))?;
    check(name, "matching count", &md.matchings.len(), &ours.len())?;
    check(name, "polygon", &md.polygon.points.keys().copied().collect::<BTreeSet<_>>(), &b.points)?;
    let rays: BTreeMap<V2, BTreeSet<usize>> = fan.rays.iter().map(|r| (r.point, r.matching.iter().collect())).collect();
    check(name, "stable rays", &rays, &b.rays)?;
    let tris: BTreeSet<[V2; 3]> = fan
        .triangles
        .iter()
        .map(|t| {
            let mut p = t.rays.map(|r| fan.rays[r].point);
            p.sort();
            p
        })
        .collect();
    check(name, "triangles", &tris, &b.triangles)?;
    let (rep, _) = run_recipe(t, &q, &fan).unwrap();
    let segs: BTreeMap<[V2; 2], Vec<usize>> =
        rep.segments.iter().map(|(&s, v)| (fan.segments[s].rays.map(|r| fan.rays[r].point), v.clone())).collect();
    check(name, "segment markings", &segs, &brute_segment_markings(&q, &b))?;
    let interior = md.polygon.interior();
    let pts: BTreeMap<V2, Vec<usize>> = rep.points.iter().map(|(&r, v)| (fan.rays[r].point, v.clone())).collect();
    check(name, "point markings", &pts, &brute_point_markings(&q, &b, &interior))
}

fn check<T: PartialEq + std::fmt::Debug>(name: &str, what: &str, ours: &T, brute: &T) -> Result<(), String> {
    if ours == brute {
        Ok(())
    } else {
        Err(format!("{name}: {what} differ: pipeline {ours:?}, brute force {brute:?}"))
    }
}
