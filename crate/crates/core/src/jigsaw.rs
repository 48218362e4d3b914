//! Fundamental hexagons, meandering walks and jigsaw transformations.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::bits::Bits;
use crate::dimer::{Dart, Quiver, Tiling};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::V2;
use crate::matchings::{superposition_cycles, SuperCycle};

/// A node copy in the universal cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeCopy {
    pub node: usize,
    pub at: V2,
}

/// An edge copy, located by the copy of its black endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeCopy {
    pub edge: usize,
    pub black_at: V2,
}

#[derive(Clone, Debug)]
pub struct Hexagon {
    pub triangle: usize,
    /// Copy of tile `i` is the tile frame translated by `offsets[i]`.
    pub offsets: Vec<V2>,
    /// Torus edges whose copy lies inside the hexagon.
    pub interior: Bits,
    /// Torus edges of the honeycomb 𝒯(σ).
    pub honeycomb: Bits,
    /// Boundary as a counterclockwise cycle of node copies.
    pub cycle: Vec<NodeCopy>,
    pub boundary_edges: Vec<EdgeCopy>,
    /// The six trivalent boundary node copies in cycle order.
    pub trivalent: Vec<NodeCopy>,
    /// The six chains between consecutive trivalent copies, as edge copies.
    pub chains: Vec<Vec<EdgeCopy>>,
}

fn structural(msg: impl Into<String>) -> Error {
    Error::invariant("hexagon", msg)
}

/// Edge copy crossed by dart `k` of a tile placed at `o`.
fn dart_copy(t: &Tiling, tile: usize, k: usize, o: V2) -> EdgeCopy {
    let tl = &t.tiles()[tile];
    let d = tl.darts[k];
    let origin = o + tl.corners[k];
    let black_at = if d.from_black { origin } else { origin - t.offset(d.edge) };
    EdgeCopy { edge: d.edge, black_at }
}

/// Interior arrows of a lift: those whose offset agrees with the placement.
pub fn interior_arrows(q: &Quiver, offsets: &[V2]) -> Bits {
    let mut b = Bits::new(q.n_arrows());
    for (a, ar) in q.arrows.iter().enumerate() {
        if offsets[ar.head] - offsets[ar.tail] == ar.offset {
            b.insert(a);
        }
    }
    b
}

pub fn fundamental_hexagon(t: &Tiling, q: &Quiver, fan: &Fan, triangle: usize) -> Result<Hexagon> {
    let tri = &fan.triangles[triangle];
    let lift = tri.module.lift.as_ref().ok_or_else(|| structural("triangle without a lift"))?;
    let offsets = lift.offsets.clone();
    let interior = interior_arrows(q, &offsets);
    if !tri.module.support.is_subset(&interior) {
        return Err(structural("a supported arrow crosses the hexagon boundary"));
    }
    // edge copies met from inside, with the dart that meets them
    let mut met: BTreeMap<EdgeCopy, Vec<Dart>> = BTreeMap::new();
    for (i, tile) in t.tiles().iter().enumerate() {
        for k in 0..tile.darts.len() {
            met.entry(dart_copy(t, i, k, offsets[i])).or_default().push(tile.darts[k]);
        }
    }
    let mut boundary_edges = Vec::new();
    let mut next: BTreeMap<NodeCopy, Vec<(NodeCopy, EdgeCopy)>> = BTreeMap::new();
    let mut honeycomb = Bits::new(t.n_edges());
    for (ec, darts) in &met {
        match darts.len() {
            2 => {
                if !interior.contains(ec.edge) {
                    return Err(structural(format!("edge {} met twice but not interior", t.edge_id(ec.edge))));
                }
            }
            1 => {
                if interior.contains(ec.edge) {
                    return Err(structural(format!("edge {} is interior but met once", t.edge_id(ec.edge))));
                }
                honeycomb.insert(ec.edge);
                boundary_edges.push(*ec);
                let (b, w) = t.ends(ec.edge);
                let bc = NodeCopy { node: b, at: ec.black_at };
                let wc = NodeCopy { node: w, at: ec.black_at + t.offset(ec.edge) };
                // hexagon on the left of the dart
                let (from, to) = if darts[0].from_black { (bc, wc) } else { (wc, bc) };
                next.entry(from).or_default().push((to, *ec));
            }
            _ => return Err(structural(format!("edge {} met more than twice", t.edge_id(ec.edge)))),
        }
    }
    if let Some((n, _)) = next.iter().find(|(_, v)| v.len() != 1) {
        return Err(structural(format!("boundary pinches at node {}", t.node_id(n.node))));
    }
    let start = *next.keys().next().ok_or_else(|| structural("empty boundary"))?;
    let mut cycle = vec![start];
    let mut cycle_edges = Vec::new();
    let mut cur = start;
    loop {
        let (to, ec) = next[&cur][0];
        cycle_edges.push(ec);
        if to == start {
            break;
        }
        cycle.push(to);
        cur = to;
        if cycle.len() > next.len() {
            return Err(structural("boundary walk does not close"));
        }
    }
    if cycle.len() != next.len() {
        return Err(structural("boundary has more than one component"));
    }

    let mut valency = vec![0usize; t.n_nodes()];
    for e in honeycomb.iter() {
        let (b, w) = t.ends(e);
        valency[b] += 1;
        valency[w] += 1;
    }
    for (v, &k) in valency.iter().enumerate() {
        if k != 0 && k != 2 && k != 3 {
            return Err(structural(format!("node {} has valency {k} in the honeycomb", t.node_id(v))));
        }
    }
    let tri_nodes: Vec<usize> = (0..t.n_nodes()).filter(|&v| valency[v] == 3).collect();
    if tri_nodes.len() != 2 || t.color(tri_nodes[0]) == t.color(tri_nodes[1]) {
        return Err(structural(format!(
            "expected one black and one white trivalent node, found {:?}",
            tri_nodes.iter().map(|&v| t.node_id(v)).collect::<Vec<_>>()
        )));
    }
    let marks: Vec<usize> = (0..cycle.len()).filter(|&k| valency[cycle[k].node] == 3).collect();
    if marks.len() != 6 {
        return Err(structural(format!("{} trivalent boundary copies instead of 6", marks.len())));
    }
    for k in 0..6 {
        let (a, b) = (cycle[marks[k]], cycle[marks[(k + 1) % 6]]);
        if t.color(a.node) == t.color(b.node) {
            return Err(structural(format!("trivalent copies of node {} are adjacent", t.node_id(a.node))));
        }
    }
    let trivalent: Vec<NodeCopy> = marks.iter().map(|&k| cycle[k]).collect();
    let n = cycle.len();
    let chains: Vec<Vec<EdgeCopy>> = (0..6)
        .map(|k| {
            let (s, e) = (marks[k], marks[(k + 1) % 6]);
            let len = (e + n - s) % n;
            (0..len).map(|j| cycle_edges[(s + j) % n]).collect()
        })
        .collect();
    for k in 0..3 {
        let (c, d) = (&chains[k], &chains[k + 3]);
        let shift = d.last().map(|x| x.black_at).unwrap_or(V2::ZERO) - c.first().map(|x| x.black_at).unwrap_or(V2::ZERO);
        let same = c.len() == d.len()
            && c.iter().zip(d.iter().rev()).all(|(x, y)| x.edge == y.edge && y.black_at - x.black_at == shift);
        if !same || c.len() % 2 == 0 {
            return Err(structural(format!("chains {k} and {} are not an odd translated pair", k + 3)));
        }
    }
    Ok(Hexagon { triangle, offsets, interior, honeycomb, cycle, boundary_edges, trivalent, chains })
}

/// Components of the edge graph of `set` (edges sharing a node), as sorted edge lists.
pub fn edge_components(t: &Tiling, set: &Bits) -> Vec<Vec<usize>> {
    let mut dsu = Dsu::new(t.n_nodes());
    for e in set.iter() {
        let (b, w) = t.ends(e);
        dsu.join(b, w);
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in set.iter() {
        by_root.entry(dsu.find(t.ends(e).0)).or_default().push(e);
    }
    let mut out: Vec<Vec<usize>> = by_root.into_values().collect();
    out.sort();
    out
}

/// The union of the matchings of a triangle has one component with more
/// than one edge, and it is the honeycomb.
pub fn check_honeycomb_component(t: &Tiling, fan: &Fan, hex: &Hexagon) -> std::result::Result<(), String> {
    let mut u = Bits::new(t.n_edges());
    for &r in &fan.triangles[hex.triangle].rays {
        u = u.union(&fan.rays[r].matching);
    }
    let big: Vec<Vec<usize>> = edge_components(t, &u).into_iter().filter(|c| c.len() > 1).collect();
    if big.len() != 1 {
        return Err(format!("{} components with more than one edge", big.len()));
    }
    if Bits::from_indices(t.n_edges(), big[0].iter().copied()) != hex.honeycomb {
        return Err("the large component is not the honeycomb".into());
    }
    Ok(())
}

/// Edge chains of the hexagon alternate between edges in exactly one of the
/// three matchings and edges in exactly the other two.
pub fn check_chain_pattern(fan: &Fan, hex: &Hexagon) -> std::result::Result<(), String> {
    let rays = fan.triangles[hex.triangle].rays;
    for (k, chain) in hex.chains.iter().enumerate() {
        let sets: Vec<Vec<usize>> = chain
            .iter()
            .map(|ec| (0..3).filter(|&j| fan.rays[rays[j]].matching.contains(ec.edge)).collect())
            .collect();
        let ok = (0..3).any(|j| {
            sets.iter().enumerate().all(|(pos, s)| {
                if pos % 2 == 0 {
                    s.len() == 1 && s[0] == j
                } else {
                    s.len() == 2 && !s.contains(&j)
                }
            })
        });
        if !ok {
            return Err(format!("chain {k} has matching pattern {sets:?}"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanderingWalk {
    pub rays: [usize; 2],
    pub edges: Vec<usize>,
    /// Cycles of the symmetric difference, oriented along the first matching.
    pub cycles: Vec<SuperCycle>,
    pub class: V2,
    pub single_cycle: bool,
}

pub fn meandering_walk(t: &Tiling, fan: &Fan, i: usize, j: usize) -> MeanderingWalk {
    let (a, b) = (&fan.rays[i].matching, &fan.rays[j].matching);
    let cycles = superposition_cycles(t, a, b);
    let class = cycles.first().map(|c| c.class).unwrap_or(V2::ZERO);
    MeanderingWalk {
        rays: [i, j],
        edges: a.symmetric_difference(b).to_vec(),
        single_cycle: cycles.len() <= 1,
        cycles,
        class,
    }
}

/// Every cycle of the walk pairs to zero with the segment direction. The
/// heights are rotated homology classes, so the pairing is the dot product.
pub fn walk_is_orthogonal(fan: &Fan, w: &MeanderingWalk) -> bool {
    let d = fan.rays[w.rays[1]].point - fan.rays[w.rays[0]].point;
    w.cycles.iter().all(|c| c.class.dot(d) == 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct Jigsaw {
    pub segment: usize,
    /// `(ρ0, ρ1, ρ2, ρ3)`.
    pub rays: [usize; 4],
    pub pieces: Vec<Vec<usize>>,
    pub piece_of: Vec<usize>,
    pub zero_piece: usize,
    pub cut_minus: Vec<usize>,
    pub cut_plus: Vec<usize>,
    pub walk: Vec<usize>,
    /// Per piece: copy in Hex(σ₋) minus copy in Hex(σ₊).
    pub translations: Vec<V2>,
    pub adjacent: Vec<bool>,
    /// Per tile: multiplicity of ρ3 in the σ₊ path divisor from the zero vertex.
    pub multiplicity: Vec<u32>,
}

impl Jigsaw {
    pub fn zero_set(&self) -> Vec<usize> {
        self.pieces[self.zero_piece].clone()
    }
}

pub fn jigsaw_pieces(t: &Tiling, q: &Quiver, fan: &Fan, segment: usize) -> Result<Jigsaw> {
    let seg = &fan.segments[segment];
    let rays = fan.wall_rays(seg);
    let pm: Vec<&Bits> = rays.iter().map(|&r| &fan.rays[r].matching).collect();
    let union = pm.iter().fold(Bits::new(t.n_edges()), |u, p| u.union(p));
    let mut dsu = Dsu::new(q.n_vertices);
    for (a, ar) in q.arrows.iter().enumerate() {
        if !union.contains(a) {
            dsu.join(ar.tail, ar.head);
        }
    }
    let (pieces, piece_of) = dsu.classes();
    let zero_piece = piece_of[fan.theta.zero];

    let plus = lift_of(fan, seg.plus)?;
    let minus = lift_of(fan, seg.minus)?;
    let mut translations = Vec::with_capacity(pieces.len());
    for (k, p) in pieces.iter().enumerate() {
        let s = minus[p[0]] - plus[p[0]];
        if let Some(&bad) = p.iter().find(|&&i| minus[i] - plus[i] != s) {
            return Err(Error::invariant(
                "reassembly",
                format!("piece {k} does not move rigidly: tile {bad} disagrees with tile {}", p[0]),
            ));
        }
        translations.push(s);
    }
    if !translations[zero_piece].is_zero() {
        return Err(Error::invariant("reassembly", "the zero piece moves"));
    }

    let support_plus = &fan.triangles[seg.plus].module.support;
    let mut multiplicity = vec![0u32; q.n_vertices];
    for (i, m) in multiplicity.iter_mut().enumerate() {
        let path = q
            .bfs_path(support_plus, fan.theta.zero, i)
            .ok_or_else(|| Error::invariant("stability", format!("vertex {i} unreachable in σ₊")))?;
        *m = path.iter().filter(|&&a| pm[3].contains(a)).count() as u32;
    }
    let mut adjacent = vec![false; pieces.len()];
    for (k, p) in pieces.iter().enumerate() {
        let m = multiplicity[p[0]];
        if p.iter().any(|&i| multiplicity[i] != m) {
            return Err(Error::invariant("jigsaw-adjacency", format!("piece {k} has mixed multiplicities")));
        }
        adjacent[k] = m == 1;
    }
    let cut = |a: usize, b: usize, c: usize| {
        pm[a].symmetric_difference(pm[c]).intersection(&pm[b].symmetric_difference(pm[c])).to_vec()
    };
    Ok(Jigsaw {
        segment,
        rays,
        piece_of,
        zero_piece,
        cut_minus: cut(1, 2, 3),
        cut_plus: cut(1, 2, 0),
        walk: pm[1].symmetric_difference(pm[2]).to_vec(),
        translations,
        adjacent,
        multiplicity,
        pieces,
    })
}

fn lift_of(fan: &Fan, tri: usize) -> Result<&[V2]> {
    fan.triangles[tri]
        .module
        .lift
        .as_ref()
        .map(|l| l.offsets.as_slice())
        .ok_or_else(|| Error::invariant("reassembly", "triangle without a lift"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    PlusToMinus,
    MinusToPlus,
}

#[derive(Clone, Debug, Serialize)]
pub struct Reassembly {
    pub direction: Direction,
    pub translations: Vec<V2>,
    /// The target hexagon as (tile, copy), sorted.
    pub target: Vec<(usize, V2)>,
}

/// Move the pieces of one hexagon and compare with the other, tile copy by tile copy.
pub fn jigsaw_transform(fan: &Fan, jig: &Jigsaw, direction: Direction) -> Result<Reassembly> {
    let seg = &fan.segments[jig.segment];
    let (from, to, sign) = match direction {
        Direction::PlusToMinus => (lift_of(fan, seg.plus)?, lift_of(fan, seg.minus)?, 1),
        Direction::MinusToPlus => (lift_of(fan, seg.minus)?, lift_of(fan, seg.plus)?, -1),
    };
    let translations: Vec<V2> = jig.translations.iter().map(|&s| sign * s).collect();
    let moved: BTreeSet<(usize, V2)> =
        (0..from.len()).map(|i| (i, from[i] + translations[jig.piece_of[i]])).collect();
    let target: BTreeSet<(usize, V2)> = to.iter().copied().enumerate().collect();
    if moved != target {
        let diff: Vec<_> = moved.symmetric_difference(&target).take(4).collect();
        return Err(Error::invariant("reassembly", format!("copies differ: {diff:?}")));
    }
    Ok(Reassembly { direction, translations, target: target.into_iter().collect() })
}

#[derive(Clone, Debug, Serialize)]
pub struct TauQuivers {
    pub vertices: Vec<usize>,
    pub arrows_plus: Vec<usize>,
    pub arrows_minus: Vec<usize>,
    pub sources_plus: Vec<usize>,
    pub sources_minus: Vec<usize>,
}

pub fn tau_quivers(q: &Quiver, fan: &Fan, jig: &Jigsaw) -> Result<TauQuivers> {
    let seg = &fan.segments[jig.segment];
    let within: Vec<bool> = (0..q.n_vertices).map(|i| jig.piece_of[i] != jig.zero_piece).collect();
    let vertices: Vec<usize> = (0..q.n_vertices).filter(|&i| within[i]).collect();
    let mut out = Vec::new();
    for tri in [seg.plus, seg.minus] {
        let support = &fan.triangles[tri].module.support;
        let arrows: Vec<usize> = support
            .iter()
            .filter(|&a| within[q.arrows[a].tail] && within[q.arrows[a].head])
            .collect();
        if let Some(a) = support.iter().find(|&a| within[q.arrows[a].tail] && !within[q.arrows[a].head]) {
            return Err(Error::invariant("submodule", format!("arrow {a} leaves the vertex set")));
        }
        out.push((arrows, q.sources(support, &within)));
    }
    let (minus, plus) = (out.pop().unwrap(), out.pop().unwrap());
    if plus.1 != minus.1 {
        return Err(Error::invariant(
            "common-source",
            format!("sources differ: {:?} vs {:?}", plus.1, minus.1),
        ));
    }
    Ok(TauQuivers {
        vertices,
        arrows_plus: plus.0,
        arrows_minus: minus.0,
        sources_plus: plus.1,
        sources_minus: minus.1,
    })
}

/// Outcome of one structural check.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn check(name: &'static str, r: std::result::Result<(), String>) -> Check {
    match r {
        Ok(()) => Check { name, ok: true, detail: String::new() },
        Err(detail) => Check { name, ok: false, detail },
    }
}

/// Every structural statement about one interior segment.
pub fn audit_segment(t: &Tiling, q: &Quiver, fan: &Fan, segment: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let seg = &fan.segments[segment];
    let hexes = (fundamental_hexagon(t, q, fan, seg.plus), fundamental_hexagon(t, q, fan, seg.minus));
    let (hp, hm) = match hexes {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            let e = a.err().or(b.err()).unwrap();
            out.push(check("hexagon", Err(e.to_string())));
            return out;
        }
    };
    out.push(check("hexagon", Ok(())));
    for h in [&hp, &hm] {
        out.push(check("honeycomb-component", check_honeycomb_component(t, fan, h)));
        out.push(check("chain-pattern", check_chain_pattern(fan, h)));
    }
    let walk = meandering_walk(t, fan, seg.rays[0], seg.rays[1]);
    out.push(check(
        "meandering-walk",
        if !walk.single_cycle {
            Err(format!("{} cycles", walk.cycles.len()))
        } else if !walk_is_orthogonal(fan, &walk) {
            Err(format!("class {} not orthogonal", walk.class))
        } else {
            Ok(())
        },
    ));
    let jig = match jigsaw_pieces(t, q, fan, segment) {
        Ok(j) => j,
        Err(e) => {
            out.push(check("jigsaw-pieces", Err(e.to_string())));
            return out;
        }
    };
    out.push(check("jigsaw-pieces", if jig.pieces.len() >= 2 { Ok(()) } else { Err("one piece".into()) }));
    for d in [Direction::PlusToMinus, Direction::MinusToPlus] {
        out.push(check("reassembly", jigsaw_transform(fan, &jig, d).map(|_| ()).map_err(|e| e.to_string())));
    }
    out.push(check("cut-hexagon", check_cut_hexagon(q, &jig, &hp, &hm)));
    out.push(check("cuts", check_cuts(t, q, &jig, &hp, &hm)));
    out.push(check("edge-in-opposite-matching", check_edge_in_pi3(q, fan, &jig)));
    out.push(check("zero-piece-arrows", check_j1(q, fan, &jig, &hp, &hm)));
    out.push(check("adjacency", check_adjacency(q, &jig, &hp, &hm)));
    out.push(check("common-source", tau_quivers(q, fan, &jig).map(|_| ()).map_err(|e| e.to_string())));
    out
}

/// Cutting either hexagon along the opposite cut gives the pieces.
fn check_cut_hexagon(q: &Quiver, jig: &Jigsaw, hp: &Hexagon, hm: &Hexagon) -> std::result::Result<(), String> {
    for (hex, cut, name) in [(hp, &jig.cut_minus, "σ₊"), (hm, &jig.cut_plus, "σ₋")] {
        let mut dsu = Dsu::new(q.n_vertices);
        for a in hex.interior.iter() {
            if !cut.contains(&a) {
                dsu.join(q.arrows[a].tail, q.arrows[a].head);
            }
        }
        if dsu.classes().0 != jig.pieces {
            return Err(format!("cutting Hex({name}) does not give the pieces"));
        }
    }
    Ok(())
}

fn check_cuts(t: &Tiling, q: &Quiver, jig: &Jigsaw, hp: &Hexagon, hm: &Hexagon) -> std::result::Result<(), String> {
    let n = t.n_edges();
    let walk = Bits::from_indices(n, jig.walk.iter().copied());
    for (cut, other, hex, opp, name) in [
        (&jig.cut_minus, &jig.cut_plus, hp, hm, "c₋"),
        (&jig.cut_plus, &jig.cut_minus, hm, hp, "c₊"),
    ] {
        let cut = Bits::from_indices(n, cut.iter().copied());
        let other = Bits::from_indices(n, other.iter().copied());
        // (i) no node meets three cut edges
        let mut deg = vec![0; t.n_nodes()];
        for e in cut.iter() {
            let (b, w) = t.ends(e);
            deg[b] += 1;
            deg[w] += 1;
        }
        if let Some(v) = deg.iter().position(|&d| d > 2) {
            return Err(format!("{name} meets itself at node {}", t.node_id(v)));
        }
        if !cut.is_subset(&opp.honeycomb) {
            return Err(format!("{name} is not on the opposite hexagon boundary"));
        }
        // (ii) boundary cut edges lie in both cuts, in odd components
        let both = cut.intersection(&other);
        let on_boundary = cut.intersection(&hex.honeycomb);
        if !on_boundary.is_subset(&both) {
            return Err(format!("{name} has a boundary edge outside the other cut"));
        }
        for comp in edge_components(t, &both) {
            if comp.iter().any(|&e| on_boundary.contains(e)) && comp.len() % 2 == 0 {
                return Err(format!("{name}: even component of c₋∩c₊"));
            }
        }
        // (iii) interior stretches are odd paths with ends of both colours
        let mut nodes: BTreeMap<NodeCopy, Vec<usize>> = BTreeMap::new();
        let inner: Vec<usize> = cut.iter().filter(|&e| hex.interior.contains(e)).collect();
        for (k, &e) in inner.iter().enumerate() {
            let tail = q.arrows[e].tail;
            let black_at = hex.offsets[tail] - t.sides(e).tail_shift;
            let (b, w) = t.ends(e);
            nodes.entry(NodeCopy { node: b, at: black_at }).or_default().push(k);
            nodes.entry(NodeCopy { node: w, at: black_at + t.offset(e) }).or_default().push(k);
        }
        let mut dsu = Dsu::new(inner.len());
        for ks in nodes.values() {
            for w in ks.windows(2) {
                dsu.join(w[0], w[1]);
            }
        }
        let (comps, comp_of) = dsu.classes();
        for (c, members) in comps.iter().enumerate() {
            let ends: Vec<&NodeCopy> = nodes.iter().filter(|(_, ks)| ks.len() == 1 && comp_of[ks[0]] == c).map(|(n, _)| n).collect();
            if members.len() % 2 == 0 || ends.len() != 2 || t.color(ends[0].node) == t.color(ends[1].node) {
                return Err(format!("{name}: interior stretch of {} edges with ends {ends:?}", members.len()));
            }
        }
        // (iv) nodes on both the cut and the walk are the opposite trivalent pair
        let touches = |set: &Bits| {
            let mut s = BTreeSet::new();
            for e in set.iter() {
                let (b, w) = t.ends(e);
                s.insert(b);
                s.insert(w);
            }
            s
        };
        let meet: BTreeSet<usize> = touches(&cut).intersection(&touches(&walk)).copied().collect();
        let tri: BTreeSet<usize> = opp.trivalent.iter().map(|c| c.node).collect();
        if meet != tri {
            return Err(format!("{name} meets the walk at {meet:?}, trivalent nodes are {tri:?}"));
        }
    }
    Ok(())
}

/// Supported arrows between different pieces cross edges of the far matching.
fn check_edge_in_pi3(q: &Quiver, fan: &Fan, jig: &Jigsaw) -> std::result::Result<(), String> {
    let seg = &fan.segments[jig.segment];
    for (tri, far) in [(seg.plus, jig.rays[3]), (seg.minus, jig.rays[0])] {
        for a in fan.triangles[tri].module.support.iter() {
            let ar = q.arrows[a];
            if jig.piece_of[ar.tail] != jig.piece_of[ar.head] && !fan.rays[far].matching.contains(a) {
                return Err(format!("arrow {a} crosses pieces outside the far matching"));
            }
        }
    }
    Ok(())
}

/// Supported arrows across the inner boundary of the zero piece leave it.
/// Cut edges in both shared matchings carry no supported arrow and are skipped.
fn check_j1(q: &Quiver, fan: &Fan, jig: &Jigsaw, hp: &Hexagon, hm: &Hexagon) -> std::result::Result<(), String> {
    let seg = &fan.segments[jig.segment];
    for (hex, tri) in [(hp, seg.plus), (hm, seg.minus)] {
        let mut leaving = 0;
        for a in hex.interior.iter() {
            let ar = q.arrows[a];
            let (tz, hz) = (jig.piece_of[ar.tail] == jig.zero_piece, jig.piece_of[ar.head] == jig.zero_piece);
            if tz != hz && fan.triangles[tri].module.support.contains(a) {
                if !tz {
                    return Err(format!("arrow {a} on the zero piece boundary points the wrong way"));
                }
                leaving += 1;
            }
        }
        if leaving == 0 {
            return Err("no supported arrow leaves the zero piece".into());
        }
    }
    Ok(())
}

/// Divisor-multiplicity adjacency agrees with sharing an edge with the zero
/// piece in either hexagon.
fn check_adjacency(q: &Quiver, jig: &Jigsaw, hp: &Hexagon, hm: &Hexagon) -> std::result::Result<(), String> {
    for (hex, name) in [(hp, "σ₊"), (hm, "σ₋")] {
        let mut geo = vec![false; jig.pieces.len()];
        for a in hex.interior.iter() {
            let (pt, ph) = (jig.piece_of[q.arrows[a].tail], jig.piece_of[q.arrows[a].head]);
            if pt == jig.zero_piece && ph != pt {
                geo[ph] = true;
            }
            if ph == jig.zero_piece && pt != ph {
                geo[pt] = true;
            }
        }
        for k in 0..jig.pieces.len() {
            if k != jig.zero_piece && geo[k] != jig.adjacent[k] {
                return Err(format!("piece {k}: geometric adjacency in Hex({name}) disagrees"));
            }
        }
    }
    if jig.adjacent[jig.zero_piece] {
        return Err("the zero piece has multiplicity one".into());
    }
    Ok(())
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn join(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Classes ordered by least member, and the class of each element.
    fn classes(&mut self) -> (Vec<Vec<usize>>, Vec<usize>) {
        let n = self.parent.len();
        let mut id: BTreeMap<usize, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut of = vec![0; n];
        for x in 0..n {
            let r = self.find(x);
            let k = *id.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[k].push(x);
            of[x] = k;
        }
        (classes, of)
    }
}
