//! Perfect matchings, height changes, the characteristic polygon and zig-zag
//! consistency.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;

use crate::bits::Bits;
use crate::dimer::{Color, Dart, Quiver, Tiling};
use crate::error::{Error, Result};
use crate::lattice::{convex_hull, locate, Location, V2};

/// All perfect matchings, sorted lexicographically by their sorted edge lists.
pub fn enumerate_matchings(t: &Tiling) -> Result<Vec<Bits>> {
    let n = t.n_nodes();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..t.n_edges() {
        let (b, w) = t.ends(e);
        incident[b].push(e);
        incident[w].push(e);
    }
    let mut out = Vec::new();
    let mut covered = vec![false; n];
    let mut chosen = Bits::new(t.n_edges());
    dfs(t, &incident, &mut covered, &mut chosen, 0, &mut out);
    if out.is_empty() {
        return Err(Error::Degenerate("the dimer model has no perfect matching".into()));
    }
    out.sort_by_key(|m| m.to_vec());
    Ok(out)
}

fn dfs(t: &Tiling, inc: &[Vec<usize>], covered: &mut [bool], chosen: &mut Bits, from: usize, out: &mut Vec<Bits>) {
    let Some(v) = (from..covered.len()).find(|&v| !covered[v]) else {
        out.push(chosen.clone());
        return;
    };
    for &e in &inc[v] {
        let (b, w) = t.ends(e);
        let u = if b == v { w } else { b };
        if covered[u] {
            continue;
        }
        covered[v] = true;
        covered[u] = true;
        chosen.insert(e);
        dfs(t, inc, covered, chosen, v + 1, out);
        chosen.remove(e);
        covered[v] = false;
        covered[u] = false;
    }
}

pub fn is_perfect_matching(t: &Tiling, m: &Bits) -> bool {
    let mut hit = vec![0u32; t.n_nodes()];
    for e in m.iter() {
        let (b, w) = t.ends(e);
        hit[b] += 1;
        hit[w] += 1;
    }
    m.len() == t.n_edges() && hit.iter().all(|&h| h == 1)
}

/// Height changes by integrating the crossing rule along fixed closed loops
/// of the universal cover.
///
/// Crossing an edge of `Π` with the black node on the right raises the height
/// by one, with the white node on the right lowers it; for `Π'` the signs are
/// swapped. An arrow has the white node on its right, so along an arrow the
/// height changes by `[e ∈ Π'] - [e ∈ Π]`.
#[derive(Clone, Debug)]
pub struct HeightWalker {
    /// For each basepoint tile: tile paths to the translates by (1,0) and (0,1).
    loops: Vec<[Vec<(usize, bool)>; 2]>,
}

impl HeightWalker {
    pub fn new(q: &Quiver) -> HeightWalker {
        let bases: Vec<usize> = if q.n_vertices > 1 { vec![0, 1] } else { vec![0] };
        let loops = bases
            .iter()
            .map(|&b| [cover_path(q, b, V2(1, 0)), cover_path(q, b, V2(0, 1))])
            .collect();
        HeightWalker { loops }
    }

    /// `h(Π, Π')`, asserting that every basepoint gives the same answer.
    pub fn height(&self, pm: &Bits, pm_ref: &Bits) -> Result<V2> {
        let mut result = None;
        for loops in &self.loops {
            let h = V2(walk(&loops[0], pm, pm_ref), walk(&loops[1], pm, pm_ref));
            match result {
                None => result = Some(h),
                Some(r) if r != h => {
                    return Err(Error::invariant(
                        "height-basepoint",
                        format!("height change depends on the basepoint: {r} vs {h}"),
                    ))
                }
                _ => {}
            }
        }
        Ok(result.unwrap())
    }
}

fn walk(path: &[(usize, bool)], pm: &Bits, pm_ref: &Bits) -> i64 {
    path.iter()
        .map(|&(a, fwd)| {
            let w = i64::from(pm_ref.contains(a)) - i64::from(pm.contains(a));
            if fwd {
                w
            } else {
                -w
            }
        })
        .sum()
}

/// Shortest tile path on the universal cover from `(base, 0)` to `(base, target)`.
fn cover_path(q: &Quiver, base: usize, target: V2) -> Vec<(usize, bool)> {
    let mut prev: HashMap<(usize, V2), (usize, bool, usize, V2)> = HashMap::new();
    let start = (base, V2::ZERO);
    let goal = (base, target);
    let mut queue = VecDeque::from([start]);
    let mut seen = std::collections::HashSet::from([start]);
    while let Some((v, p)) = queue.pop_front() {
        if (v, p) == goal {
            break;
        }
        let steps = q
            .out_arrows(v)
            .iter()
            .map(|&a| (a, true, q.arrows[a].head, p + q.arrows[a].offset))
            .chain(q.in_arrows(v).iter().map(|&a| (a, false, q.arrows[a].tail, p - q.arrows[a].offset)));
        for (a, fwd, u, pu) in steps {
            if seen.insert((u, pu)) {
                prev.insert((u, pu), (a, fwd, v, p));
                queue.push_back((u, pu));
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = goal;
    while cur != start {
        let (a, fwd, v, p) = prev[&cur];
        path.push((a, fwd));
        cur = (v, p);
    }
    path.reverse();
    path
}

/// A cycle of the superposition `Π ⊖ Π'`, oriented black to white along
/// edges of `Π` and white to black along edges of `Π'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuperCycle {
    pub darts: Vec<(usize, bool)>,
    pub class: V2,
}

pub fn superposition_cycles(t: &Tiling, pm: &Bits, pm2: &Bits) -> Vec<SuperCycle> {
    let diff = pm.symmetric_difference(pm2);
    let mut used = Bits::new(t.n_edges());
    let mut at_node: Vec<Vec<usize>> = vec![Vec::new(); t.n_nodes()];
    for e in diff.iter() {
        let (b, w) = t.ends(e);
        at_node[b].push(e);
        at_node[w].push(e);
    }
    let mut cycles = Vec::new();
    for start in diff.iter() {
        if used.contains(start) || !pm.contains(start) {
            continue;
        }
        let mut darts = Vec::new();
        let mut class = V2::ZERO;
        let mut e = start;
        loop {
            used.insert(e);
            let from_black = pm.contains(e);
            let d = Dart { edge: e, from_black };
            darts.push((e, from_black));
            class += t.dart_shift(d);
            let (_, to) = t.dart_ends(d);
            let next = at_node[to].iter().copied().find(|&x| x != e);
            match next {
                Some(x) if !used.contains(x) => e = x,
                _ => break,
            }
        }
        cycles.push(SuperCycle { darts, class });
    }
    cycles
}

/// `h(Π, Π')` from the superposition: total chain class `H` rotated to `(H_y, -H_x)`.
pub fn height_by_superposition(t: &Tiling, pm: &Bits, pm_ref: &Bits) -> V2 {
    let h = superposition_cycles(t, pm, pm_ref).iter().fold(V2::ZERO, |s, c| s + c.class);
    V2(h.1, -h.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    Corner,
    Boundary,
    Interior,
}

#[derive(Clone, Debug)]
pub struct PerfectMatching {
    pub edges: Bits,
    /// Lattice point `h(Π_0, Π)`, translated so that the polygon's least
    /// point is the origin.
    pub point: V2,
}

#[derive(Clone, Debug)]
pub struct CharacteristicPolygon {
    /// Index of the reference matching (always 0).
    pub reference: usize,
    /// Translation applied to raw height changes.
    pub shift: V2,
    /// Occupied lattice points with the indices of their matchings.
    pub points: BTreeMap<V2, Vec<usize>>,
    /// Corners, counterclockwise from the least point.
    pub corners: Vec<V2>,
    pub kinds: BTreeMap<V2, PointKind>,
}

impl CharacteristicPolygon {
    pub fn interior(&self) -> Vec<V2> {
        self.kinds.iter().filter(|(_, &k)| k == PointKind::Interior).map(|(&p, _)| p).collect()
    }

    pub fn boundary(&self) -> Vec<V2> {
        self.kinds.iter().filter(|(_, &k)| k != PointKind::Interior).map(|(&p, _)| p).collect()
    }

    pub fn twice_area(&self) -> i64 {
        crate::lattice::twice_area(&self.corners)
    }

    /// Lattice points of the hull that carry no matching (never expected).
    pub fn unoccupied(&self) -> Vec<V2> {
        let (lo, hi) = self.points.keys().fold(
            (V2(i64::MAX, i64::MAX), V2(i64::MIN, i64::MIN)),
            |(lo, hi), p| (V2(lo.0.min(p.0), lo.1.min(p.1)), V2(hi.0.max(p.0), hi.1.max(p.1))),
        );
        let mut out = Vec::new();
        for x in lo.0..=hi.0 {
            for y in lo.1..=hi.1 {
                let p = V2(x, y);
                if locate(&self.corners, p) != Location::Outside && !self.points.contains_key(&p) {
                    out.push(p);
                }
            }
        }
        out
    }
}

/// Matchings with their normalized height changes, and the polygon.
#[derive(Clone, Debug)]
pub struct MatchingData {
    pub matchings: Vec<PerfectMatching>,
    pub polygon: CharacteristicPolygon,
}

pub fn characteristic_polygon(t: &Tiling, q: &Quiver) -> Result<MatchingData> {
    let all = enumerate_matchings(t)?;
    let walker = HeightWalker::new(q);
    // Points are h(Π_0, Π): the published polygons place their labelled
    // matchings there (the point reflection of h(Π, Π_0)).
    let raw: Vec<V2> = all.iter().map(|m| walker.height(&all[0], m)).collect::<Result<_>>()?;
    let shift = *raw.iter().min().unwrap();
    let matchings: Vec<PerfectMatching> =
        all.into_iter().zip(&raw).map(|(edges, &h)| PerfectMatching { edges, point: h - shift }).collect();
    let mut points: BTreeMap<V2, Vec<usize>> = BTreeMap::new();
    for (i, m) in matchings.iter().enumerate() {
        points.entry(m.point).or_default().push(i);
    }
    let pts: Vec<V2> = points.keys().copied().collect();
    let corners = convex_hull(&pts);
    let kinds = pts
        .iter()
        .map(|&p| {
            let k = if corners.contains(&p) {
                PointKind::Corner
            } else if locate(&corners, p) == Location::Boundary || corners.len() < 3 {
                PointKind::Boundary
            } else {
                PointKind::Interior
            };
            (p, k)
        })
        .collect();
    Ok(MatchingData {
        matchings,
        polygon: CharacteristicPolygon { reference: 0, shift, points, corners, kinds },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZigZag {
    /// One period, as (edge index, traversed black to white).
    pub darts: Vec<(usize, bool)>,
    pub class: V2,
}

pub fn zigzag_paths(t: &Tiling) -> Vec<ZigZag> {
    let m = t.n_edges();
    let mut used = vec![false; 2 * m];
    let mut out = Vec::new();
    for start in 0..2 * m {
        if used[start] {
            continue;
        }
        let first = Dart { edge: start / 2, from_black: start % 2 == 0 };
        let mut d = first;
        let mut darts = Vec::new();
        let mut class = V2::ZERO;
        loop {
            used[2 * d.edge + usize::from(!d.from_black)] = true;
            darts.push((d.edge, d.from_black));
            class += t.dart_shift(d);
            let (_, to) = t.dart_ends(d);
            // maximal right turn at white nodes, maximal left at black nodes
            let e = match t.color(to) {
                Color::White => t.next_ccw(to, d.edge),
                Color::Black => t.next_cw(to, d.edge),
            };
            d = Dart { edge: e, from_black: t.color(to) == Color::Black };
            if d == first {
                break;
            }
        }
        out.push(ZigZag { darts, class });
    }
    out
}

/// Edge copies met by one period of a zig-zag: (edge, black copy, direction).
fn zigzag_edge_copies(t: &Tiling, z: &ZigZag) -> Vec<(usize, V2, bool)> {
    let mut p = V2::ZERO;
    let mut out = Vec::with_capacity(z.darts.len());
    for &(e, from_black) in &z.darts {
        let d = Dart { edge: e, from_black };
        let black = if from_black { p } else { p - t.offset(e) };
        out.push((e, black, from_black));
        p += t.dart_shift(d);
    }
    out
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConsistencyReport {
    pub zigzag_classes: Vec<V2>,
    /// Zig-zags with zero homology class.
    pub trivial: Vec<usize>,
    /// (zig-zag, edge id) where a lift meets itself.
    pub self_intersections: Vec<(usize, u32)>,
    /// (zig-zag, zig-zag, edge ids) where two lifts cross twice in the same direction.
    pub double_crossings: Vec<(usize, usize, Vec<u32>)>,
    /// How the universal-cover checks were performed.
    pub method: String,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.trivial.is_empty() && self.self_intersections.is_empty() && self.double_crossings.is_empty()
    }
}

fn multiple_of(v: V2, h: V2) -> bool {
    if h.is_zero() {
        return v.is_zero();
    }
    if v.cross(h) != 0 {
        return false;
    }
    if h.0 != 0 {
        v.0 % h.0 == 0
    } else {
        v.1 % h.1 == 0
    }
}

/// Zig-zag consistency checks on the universal cover.
///
/// Lifts of zig-zags are periodic, so intersections are decided modulo the
/// period lattices. A lift meets itself iff two occurrences of an edge differ
/// by a multiple of its class. Two occurrence pairs of zig-zags `z`, `w`
/// belong to the same pair of lifts iff their differences agree modulo the
/// lattice spanned by both classes; for each such pair of lifts the crossings
/// are ordered by their position along each lift, and two crossings met in
/// the same order by both lifts are a violation. When the classes are
/// parallel the crossings repeat with the common period, so they are listed
/// over a window of a few periods.
pub fn check_consistency(t: &Tiling) -> ConsistencyReport {
    let zz = zigzag_paths(t);
    let copies: Vec<Vec<(usize, V2, bool)>> = zz.iter().map(|z| zigzag_edge_copies(t, z)).collect();
    let mut report = ConsistencyReport {
        zigzag_classes: zz.iter().map(|z| z.class).collect(),
        method: "periodic: crossings grouped by lift pair modulo the class lattices, parallel classes over 2n+1 periods"
            .into(),
        ..Default::default()
    };
    for (i, z) in zz.iter().enumerate() {
        if z.class.is_zero() {
            report.trivial.push(i);
        }
    }
    if !report.trivial.is_empty() {
        return report;
    }
    for (i, c) in copies.iter().enumerate() {
        for x in 0..c.len() {
            for y in x + 1..c.len() {
                if c[x].0 == c[y].0 && multiple_of(c[y].1 - c[x].1, zz[i].class) {
                    report.self_intersections.push((i, t.edge_id(c[x].0)));
                }
            }
        }
    }
    for i in 0..zz.len() {
        for j in i + 1..zz.len() {
            let (h1, h2) = (zz[i].class, zz[j].class);
            let (n1, n2) = (copies[i].len() as i64, copies[j].len() as i64);
            let mut groups: BTreeMap<(i64, i64), Vec<(V2, i64, i64, usize)>> = BTreeMap::new();
            for (x1, &(e1, q1, _)) in copies[i].iter().enumerate() {
                for (x2, &(e2, q2, _)) in copies[j].iter().enumerate() {
                    if e1 == e2 {
                        let d = q1 - q2;
                        groups.entry(lift_pair_key(d, h1, h2)).or_default().push((d, x1 as i64, x2 as i64, e1));
                    }
                }
            }
            for group in groups.values() {
                let d0 = group[0].0;
                // crossings (s1, s2, edge) of the lifts through the first occurrence pair
                let mut cross: Vec<(i64, i64, usize)> = Vec::new();
                for &(d, x1, x2, e) in group {
                    for (a, b) in period_solutions(d0 - d, h1, h2) {
                        cross.push((a * n1 + x1, b * n2 + x2, e));
                    }
                }
                cross.sort();
                let bad: Vec<u32> = cross
                    .windows(2)
                    .filter(|w| w[1].1 >= w[0].1)
                    .flat_map(|w| [t.edge_id(w[0].2), t.edge_id(w[1].2)])
                    .collect();
                if !bad.is_empty() {
                    let mut bad = bad;
                    bad.sort();
                    bad.dedup();
                    report.double_crossings.push((i, j, bad));
                }
            }
        }
    }
    report
}

/// Index of the pair of lifts containing an occurrence pair with difference `d`.
fn lift_pair_key(d: V2, h1: V2, h2: V2) -> (i64, i64) {
    let det = h1.cross(h2);
    if det != 0 {
        let m = det.abs();
        return (d.cross(h2).rem_euclid(m), h1.cross(d).rem_euclid(m));
    }
    let g = primitive(h1);
    let w = complement(g);
    // d = a g + c w in a unimodular basis
    let c = g.cross(d);
    let a = d.cross(w);
    let m = crate::lattice::gcd(h1.dot(g) / g.dot(g), h2.dot(g) / g.dot(g));
    (c, a.rem_euclid(m.max(1)))
}

/// Integer solutions `(a, b)` of `a h1 - b h2 = v`, all of them when the
/// classes are independent, those with `|a| <= 3 |h2|` otherwise.
fn period_solutions(v: V2, h1: V2, h2: V2) -> Vec<(i64, i64)> {
    let det = h1.cross(h2);
    if det != 0 {
        // a h1 - b h2 = v  =>  a = (v x -h2)/(h1 x -h2), b = (h1 x v)/(h1 x -h2)
        let den = -det;
        let an = v.cross(-h2);
        let bn = h1.cross(v);
        assert!(an % den == 0 && bn % den == 0, "occurrences grouped into one lift pair");
        return vec![(an / den, bn / den)];
    }
    let g = primitive(h1);
    let (k1, k2) = (h1.dot(g) / g.dot(g), h2.dot(g) / g.dot(g));
    let kv = v.dot(g) / g.dot(g);
    let window = 3 * (k1.abs() + k2.abs());
    (-window..=window)
        .filter_map(|a| {
            let r = a * k1 - kv;
            (r % k2 == 0).then_some((a, r / k2))
        })
        .collect()
}

fn primitive(v: V2) -> V2 {
    let g = v.gcd();
    V2(v.0 / g, v.1 / g)
}

/// Some `w` with `g x w = 1`, for primitive `g`.
fn complement(g: V2) -> V2 {
    let (d, s, t) = ext_gcd(g.0, g.1);
    debug_assert_eq!(d.abs(), 1);
    // s g0 + t g1 = d, and g x (-t, s) = g0 s + g1 t
    V2(-t * d, s * d)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (d, s, t) = ext_gcd(b, a % b);
        (d, t, s - (a / b) * t)
    }
}
