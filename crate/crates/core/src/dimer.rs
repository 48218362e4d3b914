//! Dimer models on the torus, their validation, face tracing and the dual quiver.
//!
//! The embedding is combinatorial: a counterclockwise rotation of edge ids at
//! every node plus, for every edge, the deck translation from the copy of its
//! black endpoint to the copy of its white endpoint. Faces are traced with the
//! face on the left of every dart: arriving at a node along an edge, the walk
//! leaves along the edge immediately clockwise of the one it arrived on.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::lattice::V2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: u32,
    pub color: Color,
    /// Rendering hint in the unit square; never used by the pipeline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: u32,
    pub black: u32,
    pub white: u32,
    /// Copy of the white endpoint minus copy of the black endpoint.
    pub offset: V2,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimerModel {
    pub name: String,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    /// Counterclockwise cyclic order of incident edge ids, per node id.
    pub rotations: BTreeMap<u32, Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    EdgeColor,
    Rotation,
    Valency,
    Disconnected,
    FaceOffset,
    Euler,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Offending node or edge ids (see `detail`).
    pub ids: Vec<u32>,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub nodes: usize,
    pub edges: usize,
    pub tiles: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub counts: Option<Counts>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{:?} {:?}: {}", v.kind, v.ids, v.detail))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// A dart is an edge with a direction of travel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: usize,
    pub from_black: bool,
}

impl Dart {
    fn index(self) -> usize {
        2 * self.edge + usize::from(!self.from_black)
    }
}

/// A traced tile: its boundary darts (tile on the left) and, for each dart,
/// the copy of its origin node in the tile's own frame.
#[derive(Clone, Debug)]
pub struct Tile {
    pub darts: Vec<Dart>,
    pub corners: Vec<V2>,
}

/// The two tiles on either side of an edge, as copies relative to the copy
/// of the edge whose black endpoint sits at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeSides {
    /// Tile to the right of the dart black -> white (the dual arrow's tail).
    pub tail: usize,
    pub head: usize,
    pub tail_shift: V2,
    pub head_shift: V2,
}

/// A validated dimer model with index-based adjacency.
///
/// Nodes and edges are indexed in increasing id order. Tiles are numbered so
/// that tile `k` is the `k`-th distinct tail met when edges are scanned in
/// increasing id order.
#[derive(Clone, Debug)]
pub struct Tiling {
    model: DimerModel,
    node_ids: Vec<u32>,
    edge_ids: Vec<u32>,
    colors: Vec<Color>,
    ends: Vec<(usize, usize)>,
    offsets: Vec<V2>,
    rot: Vec<Vec<usize>>,
    rot_pos: Vec<[usize; 2]>,
    tiles: Vec<Tile>,
    sides: Vec<EdgeSides>,
}

struct Indexed {
    node_ids: Vec<u32>,
    edge_ids: Vec<u32>,
    colors: Vec<Color>,
    ends: Vec<(usize, usize)>,
    offsets: Vec<V2>,
}

fn index_model(model: &DimerModel) -> Result<Indexed> {
    let mut node_ix = BTreeMap::new();
    let mut nodes: Vec<(u32, Color, usize)> = Vec::new();
    for (k, n) in model.nodes.iter().enumerate() {
        if node_ix.insert(n.id, 0).is_some() {
            return Err(Error::input(format!("/nodes/{k}/id"), format!("duplicate node id {}", n.id)));
        }
        nodes.push((n.id, n.color, k));
    }
    nodes.sort();
    for (i, n) in nodes.iter().enumerate() {
        node_ix.insert(n.0, i);
    }
    let mut seen = BTreeSet::new();
    let mut edges: Vec<(u32, usize)> = Vec::new();
    for (k, e) in model.edges.iter().enumerate() {
        if !seen.insert(e.id) {
            return Err(Error::input(format!("/edges/{k}/id"), format!("duplicate edge id {}", e.id)));
        }
        for (field, nid) in [("black", e.black), ("white", e.white)] {
            if !node_ix.contains_key(&nid) {
                return Err(Error::input(
                    format!("/edges/{k}/{field}"),
                    format!("edge {} references unknown node {nid}", e.id),
                ));
            }
        }
        edges.push((e.id, k));
    }
    edges.sort();
    for (nid, list) in &model.rotations {
        if !node_ix.contains_key(nid) {
            return Err(Error::input(format!("/rotations/{nid}"), format!("rotation for unknown node {nid}")));
        }
        for (k, eid) in list.iter().enumerate() {
            if !seen.contains(eid) {
                return Err(Error::input(
                    format!("/rotations/{nid}/{k}"),
                    format!("rotation of node {nid} references unknown edge {eid}"),
                ));
            }
        }
    }
    let ends = edges
        .iter()
        .map(|&(_, k)| (node_ix[&model.edges[k].black], node_ix[&model.edges[k].white]))
        .collect();
    Ok(Indexed {
        node_ids: nodes.iter().map(|n| n.0).collect(),
        edge_ids: edges.iter().map(|e| e.0).collect(),
        colors: nodes.iter().map(|n| n.1).collect(),
        ends,
        offsets: edges.iter().map(|&(_, k)| model.edges[k].offset).collect(),
    })
}

/// Check every dimer-model invariant. Unresolvable ids are input errors;
/// everything else is reported as a violation.
pub fn validate_dimer(model: &DimerModel) -> Result<ValidationReport> {
    let ix = index_model(model)?;
    let n = ix.node_ids.len();
    let m = ix.edge_ids.len();
    let mut violations = Vec::new();

    for (e, &(b, w)) in ix.ends.iter().enumerate() {
        if ix.colors[b] != Color::Black || ix.colors[w] != Color::White {
            violations.push(Violation {
                kind: ViolationKind::EdgeColor,
                ids: vec![ix.edge_ids[e]],
                detail: format!(
                    "edge {} joins {:?} node {} to {:?} node {}",
                    ix.edge_ids[e], ix.colors[b], ix.node_ids[b], ix.colors[w], ix.node_ids[w]
                ),
            });
        }
    }

    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(b, w)) in ix.ends.iter().enumerate() {
        incident[b].push(e);
        if w != b {
            incident[w].push(e);
        }
    }
    for v in 0..n {
        if incident[v].len() <= 2 {
            violations.push(Violation {
                kind: ViolationKind::Valency,
                ids: vec![ix.node_ids[v]],
                detail: format!("node {} has valency {}", ix.node_ids[v], incident[v].len()),
            });
        }
    }

    let edge_ix: BTreeMap<u32, usize> = ix.edge_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut rotation_ok = true;
    for v in 0..n {
        let nid = ix.node_ids[v];
        let Some(list) = model.rotations.get(&nid) else {
            rotation_ok = false;
            violations.push(Violation {
                kind: ViolationKind::Rotation,
                ids: vec![nid],
                detail: format!("node {nid} has no rotation"),
            });
            continue;
        };
        let listed: Vec<usize> = list.iter().map(|id| edge_ix[id]).collect();
        let mut a = listed.clone();
        a.sort();
        let mut b = incident[v].clone();
        b.sort();
        if a != b {
            rotation_ok = false;
            violations.push(Violation {
                kind: ViolationKind::Rotation,
                ids: vec![nid],
                detail: format!(
                    "rotation of node {nid} lists edges {:?} but incident edges are {:?}",
                    list,
                    b.iter().map(|&e| ix.edge_ids[e]).collect::<Vec<_>>()
                ),
            });
        }
        rot[v] = listed;
    }

    // connectivity
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    if n > 0 {
        seen[0] = true;
        queue.push_back(0);
    }
    while let Some(v) = queue.pop_front() {
        for &e in &incident[v] {
            let (b, w) = ix.ends[e];
            for u in [b, w] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    let unreached: Vec<u32> = (0..n).filter(|&v| !seen[v]).map(|v| ix.node_ids[v]).collect();
    if !unreached.is_empty() || n == 0 {
        violations.push(Violation {
            kind: ViolationKind::Disconnected,
            ids: unreached,
            detail: "graph on the torus is not connected".into(),
        });
    }

    let colors_ok = !violations.iter().any(|v| v.kind == ViolationKind::EdgeColor);
    let mut counts = None;
    if rotation_ok && colors_ok && n > 0 {
        let traced = trace_faces(&ix.ends, &ix.offsets, &rot);
        for (darts, sum) in &traced {
            if !sum.is_zero() {
                violations.push(Violation {
                    kind: ViolationKind::FaceOffset,
                    ids: darts.iter().map(|d| ix.edge_ids[d.edge]).collect(),
                    detail: format!("face boundary has total offset {sum}, so the face is not a disk"),
                });
            }
        }
        let f = traced.len();
        if n as i64 - m as i64 + f as i64 != 0 {
            violations.push(Violation {
                kind: ViolationKind::Euler,
                ids: Vec::new(),
                detail: format!("V - E + F = {} - {} + {} != 0", n, m, f),
            });
        }
        counts = Some(Counts { nodes: n, edges: m, tiles: f });
    }
    Ok(ValidationReport { violations, counts })
}

fn rot_position(rot: &[Vec<usize>], v: usize, e: usize) -> usize {
    rot[v].iter().position(|&x| x == e).expect("edge in rotation")
}

fn dart_ends(ends: &[(usize, usize)], d: Dart) -> (usize, usize) {
    let (b, w) = ends[d.edge];
    if d.from_black {
        (b, w)
    } else {
        (w, b)
    }
}

fn dart_shift(offsets: &[V2], d: Dart) -> V2 {
    if d.from_black {
        offsets[d.edge]
    } else {
        -offsets[d.edge]
    }
}

/// Trace all faces; returns each boundary (tile on the left) with its
/// accumulated offset, which is zero exactly when the face closes up.
fn trace_faces(ends: &[(usize, usize)], offsets: &[V2], rot: &[Vec<usize>]) -> Vec<(Vec<Dart>, V2)> {
    let m = ends.len();
    let mut used = vec![false; 2 * m];
    let mut faces = Vec::new();
    for start in 0..2 * m {
        if used[start] {
            continue;
        }
        let first = Dart { edge: start / 2, from_black: start % 2 == 0 };
        let mut d = first;
        let mut darts = Vec::new();
        let mut sum = V2::ZERO;
        loop {
            used[d.index()] = true;
            darts.push(d);
            sum += dart_shift(offsets, d);
            let (_, to) = dart_ends(ends, d);
            let k = rot_position(rot, to, d.edge);
            let len = rot[to].len();
            let next_edge = rot[to][(k + len - 1) % len];
            let (b, _) = ends[next_edge];
            d = Dart { edge: next_edge, from_black: b == to };
            if d == first {
                break;
            }
        }
        faces.push((darts, sum));
    }
    faces
}

fn centroid(positions: &Option<Vec<[f64; 2]>>, ends: &[(usize, usize)], darts: &[Dart], corners: &[V2]) -> Option<[f64; 2]> {
    let pos = positions.as_ref()?;
    let mut c = [0.0, 0.0];
    for (&d, &k) in darts.iter().zip(corners) {
        let (from, _) = dart_ends(ends, d);
        c[0] += pos[from][0] + k.0 as f64;
        c[1] += pos[from][1] + k.1 as f64;
    }
    let n = darts.len() as f64;
    Some([c[0] / n, c[1] / n])
}

impl Tiling {
    /// Validate and index a model.
    pub fn new(model: DimerModel) -> Result<Tiling> {
        let report = validate_dimer(&model)?;
        if !report.is_valid() {
            return Err(Error::Invalid(report));
        }
        let ix = index_model(&model)?;
        let n = ix.node_ids.len();
        let edge_ix: BTreeMap<u32, usize> = ix.edge_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let rot: Vec<Vec<usize>> = (0..n)
            .map(|v| model.rotations[&ix.node_ids[v]].iter().map(|id| edge_ix[id]).collect())
            .collect();
        let rot_pos = ix
            .ends
            .iter()
            .enumerate()
            .map(|(e, &(b, w))| [rot_position(&rot, b, e), rot_position(&rot, w, e)])
            .collect();
        let traced = trace_faces(&ix.ends, &ix.offsets, &rot);
        let mut by_id: Vec<&Node> = model.nodes.iter().collect();
        by_id.sort_by_key(|nd| nd.id);
        let positions: Option<Vec<[f64; 2]>> = by_id.iter().map(|nd| nd.position).collect();

        let mut face_of = vec![usize::MAX; 2 * ix.edge_ids.len()];
        for (f, (darts, _)) in traced.iter().enumerate() {
            for d in darts {
                face_of[d.index()] = f;
            }
        }
        // tile order: tails first met while scanning edges by id
        let mut order: Vec<usize> = Vec::new();
        let mut rank = vec![usize::MAX; traced.len()];
        let mut anchor = vec![Dart { edge: 0, from_black: false }; traced.len()];
        for pass_from_black in [false, true] {
            for e in 0..ix.edge_ids.len() {
                let d = Dart { edge: e, from_black: pass_from_black };
                let f = face_of[d.index()];
                if rank[f] == usize::MAX {
                    rank[f] = order.len();
                    anchor[f] = d;
                    order.push(f);
                }
            }
        }
        let tiles: Vec<Tile> = order
            .iter()
            .map(|&f| {
                let darts = &traced[f].0;
                let s = darts.iter().position(|&d| d == anchor[f]).unwrap();
                let darts: Vec<Dart> = darts[s..].iter().chain(&darts[..s]).copied().collect();
                let mut corners = Vec::with_capacity(darts.len());
                let mut p = V2::ZERO;
                for &d in &darts {
                    corners.push(p);
                    p += dart_shift(&ix.offsets, d);
                }
                // With position hints, use the tile copy whose centroid lies in the unit square.
                if let Some(c) = centroid(&positions, &ix.ends, &darts, &corners) {
                    let s = V2(c[0].floor() as i64, c[1].floor() as i64);
                    for x in corners.iter_mut() {
                        *x -= s;
                    }
                }
                Tile { darts, corners }
            })
            .collect();

        let mut tile_of_dart = vec![(0usize, V2::ZERO); 2 * ix.edge_ids.len()];
        for (t, tile) in tiles.iter().enumerate() {
            for (d, &c) in tile.darts.iter().zip(&tile.corners) {
                tile_of_dart[d.index()] = (t, c);
            }
        }
        let sides = (0..ix.edge_ids.len())
            .map(|e| {
                // dart white -> black has the tail on its left; its origin is the white copy
                let (tail, o_w) = tile_of_dart[Dart { edge: e, from_black: false }.index()];
                let (head, o_b) = tile_of_dart[Dart { edge: e, from_black: true }.index()];
                EdgeSides { tail, head, tail_shift: ix.offsets[e] - o_w, head_shift: -o_b }
            })
            .collect();

        let mut model = model;
        model.nodes.sort_by_key(|n| n.id);
        model.edges.sort_by_key(|e| e.id);
        Ok(Tiling {
            model,
            node_ids: ix.node_ids,
            edge_ids: ix.edge_ids,
            colors: ix.colors,
            ends: ix.ends,
            offsets: ix.offsets,
            rot,
            rot_pos,
            tiles,
            sides,
        })
    }

    pub fn model(&self) -> &DimerModel {
        &self.model
    }

    pub fn name(&self) -> &str {
        &self.model.name
    }

    pub fn n_nodes(&self) -> usize {
        self.node_ids.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn n_tiles(&self) -> usize {
        self.tiles.len()
    }

    pub fn counts(&self) -> Counts {
        Counts { nodes: self.n_nodes(), edges: self.n_edges(), tiles: self.n_tiles() }
    }

    pub fn node_id(&self, v: usize) -> u32 {
        self.node_ids[v]
    }

    pub fn edge_id(&self, e: usize) -> u32 {
        self.edge_ids[e]
    }

    pub fn edge_index(&self, id: u32) -> Option<usize> {
        self.edge_ids.binary_search(&id).ok()
    }

    pub fn node_index(&self, id: u32) -> Option<usize> {
        self.node_ids.binary_search(&id).ok()
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    /// `(black, white)` endpoints of edge `e`.
    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn offset(&self, e: usize) -> V2 {
        self.offsets[e]
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    fn pos(&self, v: usize, e: usize) -> usize {
        let (b, _) = self.ends[e];
        self.rot_pos[e][usize::from(b != v)]
    }

    /// The edge after `e` counterclockwise around `v`.
    pub fn next_ccw(&self, v: usize, e: usize) -> usize {
        let r = &self.rot[v];
        r[(self.pos(v, e) + 1) % r.len()]
    }

    /// The edge after `e` clockwise around `v`.
    pub fn next_cw(&self, v: usize, e: usize) -> usize {
        let r = &self.rot[v];
        r[(self.pos(v, e) + r.len() - 1) % r.len()]
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn sides(&self, e: usize) -> EdgeSides {
        self.sides[e]
    }

    pub fn dart_ends(&self, d: Dart) -> (usize, usize) {
        dart_ends(&self.ends, d)
    }

    /// Translation from the origin copy to the destination copy of a dart.
    pub fn dart_shift(&self, d: Dart) -> V2 {
        dart_shift(&self.offsets, d)
    }

    /// Edge index set from edge ids.
    pub fn edge_set(&self, ids: &[u32]) -> Result<Bits> {
        let mut b = Bits::new(self.n_edges());
        for &id in ids {
            let e = self.edge_index(id).ok_or_else(|| Error::input("", format!("unknown edge id {id}")))?;
            b.insert(e);
        }
        Ok(b)
    }

    pub fn edge_ids_of(&self, set: &Bits) -> Vec<u32> {
        set.iter().map(|e| self.edge_ids[e]).collect()
    }

    pub fn quiver(&self) -> Quiver {
        Quiver::dual(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub tail: usize,
    pub head: usize,
    /// Copy of the head tile minus copy of the tail tile.
    pub offset: V2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverFace {
    /// Dimer node (index) inside the face.
    pub node: usize,
    /// White faces are clockwise cycles, black faces anticlockwise.
    pub color: Color,
    /// The boundary cycle in path order.
    pub arrows: Vec<usize>,
}

/// The dual quiver. Arrow `a` crosses edge `a`.
#[derive(Clone, Debug)]
pub struct Quiver {
    pub n_vertices: usize,
    pub arrows: Vec<Arrow>,
    pub faces: Vec<QuiverFace>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    /// Per arrow: (white face, black face).
    face_of: Vec<(usize, usize)>,
}

impl Quiver {
    fn dual(t: &Tiling) -> Quiver {
        let arrows: Vec<Arrow> = (0..t.n_edges())
            .map(|e| {
                let s = t.sides(e);
                Arrow { tail: s.tail, head: s.head, offset: s.head_shift - s.tail_shift }
            })
            .collect();
        let mut faces = Vec::new();
        let mut face_of = vec![(usize::MAX, usize::MAX); arrows.len()];
        for v in 0..t.n_nodes() {
            let color = t.color(v);
            let mut cyc: Vec<usize> = t.rotation(v).to_vec();
            if color == Color::White {
                cyc.reverse();
            }
            for &a in &cyc {
                if color == Color::White {
                    face_of[a].0 = faces.len();
                } else {
                    face_of[a].1 = faces.len();
                }
            }
            faces.push(QuiverFace { node: v, color, arrows: cyc });
        }
        let mut out = vec![Vec::new(); t.n_tiles()];
        let mut inc = vec![Vec::new(); t.n_tiles()];
        for (a, ar) in arrows.iter().enumerate() {
            out[ar.tail].push(a);
            inc[ar.head].push(a);
        }
        Quiver { n_vertices: t.n_tiles(), arrows, faces, out, inc, face_of }
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn out_arrows(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_arrows(&self, v: usize) -> &[usize] {
        &self.inc[v]
    }

    /// `(p_a^+, p_a^-)`: the rest of the white and black face cycles through
    /// `a`, as paths from the head of `a` back to its tail.
    pub fn relation_paths(&self, a: usize) -> (Vec<usize>, Vec<usize>) {
        let (w, b) = self.face_of[a];
        let rest = |f: usize| {
            let cyc = &self.faces[f].arrows;
            let k = cyc.iter().position(|&x| x == a).unwrap();
            cyc[k + 1..].iter().chain(&cyc[..k]).copied().collect::<Vec<_>>()
        };
        (rest(w), rest(b))
    }

    /// Check that every face is a closed cycle with zero total offset and
    /// that each arrow lies on one white and one black face.
    pub fn check_faces(&self) -> Result<()> {
        for f in &self.faces {
            let k = f.arrows.len();
            let mut sum = V2::ZERO;
            for i in 0..k {
                let a = self.arrows[f.arrows[i]];
                let b = self.arrows[f.arrows[(i + 1) % k]];
                if a.head != b.tail {
                    return Err(Error::invariant(
                        "quiver-face",
                        format!("face of node {} does not close at arrow {}", f.node, f.arrows[i]),
                    ));
                }
                sum += a.offset;
            }
            if !sum.is_zero() {
                return Err(Error::invariant(
                    "quiver-face",
                    format!("face of node {} has offset sum {sum}", f.node),
                ));
            }
        }
        for (a, &(w, b)) in self.face_of.iter().enumerate() {
            if w == usize::MAX || b == usize::MAX {
                return Err(Error::invariant("quiver-face", format!("arrow {a} misses a face")));
            }
        }
        Ok(())
    }

    /// Tails of arrows in `support`, i.e. vertices that are not sinks.
    pub fn sinks(&self, support: &Bits) -> Vec<usize> {
        (0..self.n_vertices)
            .filter(|&v| !self.out[v].iter().any(|&a| support.contains(a)))
            .collect()
    }

    pub fn sources(&self, support: &Bits, within: &[bool]) -> Vec<usize> {
        (0..self.n_vertices)
            .filter(|&v| within[v])
            .filter(|&v| {
                !self.inc[v]
                    .iter()
                    .any(|&a| support.contains(a) && within[self.arrows[a].tail])
            })
            .collect()
    }

    /// Vertices reachable from `from` along arrows in `support`.
    pub fn reachable(&self, support: &Bits, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n_vertices];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.out[v] {
                if support.contains(a) {
                    let h = self.arrows[a].head;
                    if !seen[h] {
                        seen[h] = true;
                        queue.push_back(h);
                    }
                }
            }
        }
        seen
    }

    /// Breadth-first path from `from` to `to` along `support`, visiting
    /// heads in order of vertex id.
    pub fn bfs_path(&self, support: &Bits, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev: Vec<Option<usize>> = vec![None; self.n_vertices];
        let mut seen = vec![false; self.n_vertices];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            let mut outs: Vec<usize> = self.out[v].iter().copied().filter(|&a| support.contains(a)).collect();
            outs.sort_by_key(|&a| (self.arrows[a].head, a));
            for a in outs {
                let h = self.arrows[a].head;
                if !seen[h] {
                    seen[h] = true;
                    prev[h] = Some(a);
                    queue.push_back(h);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut v = to;
        while v != from {
            let a = prev[v].unwrap();
            path.push(a);
            v = self.arrows[a].tail;
        }
        path.reverse();
        Some(path)
    }
}

/// Tile copies placed in the plane by integrating arrow offsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lift {
    pub base: usize,
    pub offsets: Vec<V2>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LiftFailure {
    /// Some vertex is not connected to the base through the subset.
    Unreachable { vertex: usize },
    /// An undirected cycle of the subset with nonzero total offset,
    /// given as (arrow, traversed forwards).
    Inconsistent { cycle: Vec<(usize, bool)>, sum: V2 },
}

/// Lift the arrows of `subset` to the plane, starting with `base` at the origin.
pub fn lift_subquiver(q: &Quiver, subset: &Bits, base: usize) -> std::result::Result<Lift, LiftFailure> {
    let n = q.n_vertices;
    let mut pos: Vec<Option<V2>> = vec![None; n];
    let mut parent: Vec<Option<(usize, bool)>> = vec![None; n];
    pos[base] = Some(V2::ZERO);
    let mut queue = VecDeque::from([base]);
    let path_to_root = |parent: &Vec<Option<(usize, bool)>>, mut v: usize| {
        let mut p = Vec::new();
        while let Some((a, fwd)) = parent[v] {
            p.push((a, fwd));
            v = if fwd { q.arrows[a].tail } else { q.arrows[a].head };
        }
        p.reverse();
        p
    };
    while let Some(v) = queue.pop_front() {
        let here = pos[v].unwrap();
        let mut steps: Vec<(usize, bool)> = q.out[v]
            .iter()
            .map(|&a| (a, true))
            .chain(q.inc[v].iter().map(|&a| (a, false)))
            .filter(|&(a, _)| subset.contains(a))
            .collect();
        steps.sort();
        for (a, fwd) in steps {
            let ar = q.arrows[a];
            let (u, p) = if fwd { (ar.head, here + ar.offset) } else { (ar.tail, here - ar.offset) };
            match pos[u] {
                None => {
                    pos[u] = Some(p);
                    parent[u] = Some((a, fwd));
                    queue.push_back(u);
                }
                Some(existing) if existing != p => {
                    // base -> v, across a, then back from u to base
                    let mut cycle = path_to_root(&parent, v);
                    cycle.push((a, fwd));
                    let back: Vec<(usize, bool)> =
                        path_to_root(&parent, u).into_iter().rev().map(|(b, f)| (b, !f)).collect();
                    cycle.extend(back);
                    return Err(LiftFailure::Inconsistent { cycle, sum: p - existing });
                }
                _ => {}
            }
        }
    }
    if let Some(v) = pos.iter().position(|p| p.is_none()) {
        return Err(LiftFailure::Unreachable { vertex: v });
    }
    Ok(Lift { base, offsets: pos.into_iter().map(|p| p.unwrap()).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn c3() -> DimerModel {
        DimerModel {
            name: "c3".into(),
            nodes: vec![
                Node { id: 0, color: Color::Black, position: None },
                Node { id: 1, color: Color::White, position: None },
            ],
            edges: vec![
                Edge { id: 0, black: 0, white: 1, offset: V2(0, 0) },
                Edge { id: 1, black: 0, white: 1, offset: V2(1, 1) },
                Edge { id: 2, black: 0, white: 1, offset: V2(0, 1) },
            ],
            rotations: BTreeMap::from([(0, vec![0, 1, 2]), (1, vec![0, 1, 2])]),
        }
    }

    #[test]
    fn c3_traces_one_hexagon() {
        let t = Tiling::new(c3()).unwrap();
        assert_eq!(t.counts(), Counts { nodes: 2, edges: 3, tiles: 1 });
        assert_eq!(t.tiles()[0].darts.len(), 6);
        let q = t.quiver();
        q.check_faces().unwrap();
        assert!(q.arrows.iter().all(|a| a.tail == 0 && a.head == 0));
        let mut offs: Vec<V2> = q.arrows.iter().map(|a| a.offset).collect();
        offs.sort();
        assert_eq!(offs.iter().fold(V2::ZERO, |s, &o| s + o), V2::ZERO);
        assert!(offs.iter().all(|o| !o.is_zero()));
    }

    #[test]
    fn reversed_rotation_breaks_faces() {
        let mut m = c3();
        m.rotations.insert(1, vec![2, 1, 0]);
        let r = validate_dimer(&m).unwrap();
        assert!(!r.is_valid());
    }

    #[test]
    fn unknown_node_is_input_error() {
        let mut m = c3();
        m.edges[0].white = 7;
        let err = validate_dimer(&m).unwrap_err();
        assert!(err.is_input());
        assert!(err.to_string().contains("/edges/0/white"));
    }

    #[test]
    fn bivalent_nodes_reported() {
        let mut m = c3();
        m.edges.pop();
        for r in m.rotations.values_mut() {
            r.retain(|&e| e != 2);
        }
        let r = validate_dimer(&m).unwrap();
        let kinds: Vec<_> = r.violations.iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::Valency));
    }

    #[test]
    fn lift_detects_nonzero_loop() {
        let t = Tiling::new(c3()).unwrap();
        let q = t.quiver();
        let a = (0..3).find(|&a| q.arrows[a].offset == V2(1, 0)).or(Some(0)).unwrap();
        let err = lift_subquiver(&q, &Bits::from_indices(3, [a]), 0).unwrap_err();
        assert!(matches!(err, LiftFailure::Inconsistent { .. }));
    }
}
