//! Hexagonal dimer models of cyclic subgroups of SL(3) and the classical
//! recipe as an independent oracle.
//!
//! Characters are realised as `Z²/L` with `L` the kernel of `p ↦ a p₁ + b p₂`
//! mod `r`; the x-, y- and z-arrows translate by `e1`, `e2` and `-e1-e2`.
//! Tiles are lattice points, nodes are the triangles of the triangular lattice:
//! black `B(p) = (p, p+e1, p+e1+e2)` and white `W(p) = (p-e2, p, p+e1)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dimer::{Color, DimerModel, Edge, Node, Tiling};
use crate::error::{Error, Result};
use crate::fan::{build_fan, Fan, Stability};
use crate::jigsaw::jigsaw_pieces;
use crate::lattice::{gcd, V2};
use crate::matchings::characteristic_polygon;
use crate::recipe::run_recipe;

/// Exponents of `x^a y^b z^c`.
pub type Mono = [i64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicGroup {
    pub r: i64,
    pub weights: [i64; 3],
}

impl CyclicGroup {
    /// Weights are reduced mod `r`; they must sum to 0 and act faithfully.
    pub fn new(r: i64, weights: [i64; 3]) -> Result<CyclicGroup> {
        if r < 1 {
            return Err(Error::input("/r", format!("group order must be positive, got {r}")));
        }
        let w = weights.map(|x| x.rem_euclid(r));
        if (w[0] + w[1] + w[2]) % r != 0 {
            return Err(Error::input("/weights", format!("weights {weights:?} do not sum to 0 mod {r}")));
        }
        if gcd(gcd(w[0], w[1]), gcd(w[2], r)) != 1 {
            return Err(Error::input("/weights", format!("weights {weights:?} do not act faithfully for r = {r}")));
        }
        Ok(CyclicGroup { r, weights: w })
    }

    /// Parses `r:a,b,c`.
    pub fn parse(s: &str) -> Result<CyclicGroup> {
        let bad = || Error::input("/group", format!("expected r:a,b,c, got {s:?}"));
        let (r, w) = s.split_once(':').ok_or_else(bad)?;
        let r: i64 = r.trim().parse().map_err(|_| bad())?;
        let w: Vec<i64> = w.split(',').map(|x| x.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        let w: [i64; 3] = w.try_into().map_err(|_| bad())?;
        CyclicGroup::new(r, w)
    }

    pub fn character(&self, m: Mono) -> usize {
        (0..3).map(|k| m[k] * self.weights[k]).sum::<i64>().rem_euclid(self.r) as usize
    }

    pub fn is_invariant(&self, m: Mono) -> bool {
        self.character(m) == 0
    }

    pub fn label(&self) -> String {
        let [a, b, c] = self.weights;
        format!("1/{}({a},{b},{c})", self.r)
    }

    /// Every faithful cyclic group `1/r(a,b,c)` with `0 ≤ a, b, c < r`.
    pub fn all_up_to(max_r: i64) -> Vec<CyclicGroup> {
        let mut out = Vec::new();
        for r in 1..=max_r {
            for a in 0..r {
                for b in 0..r {
                    if let Ok(g) = CyclicGroup::new(r, [a, b, -a - b]) {
                        out.push(g);
                    }
                }
            }
        }
        out
    }
}

/// `L` in Hermite form: basis `(d1, s)`, `(0, d2)` with `d1 d2 = r`.
#[derive(Clone, Copy, Debug)]
struct Kernel {
    d1: i64,
    s: i64,
    d2: i64,
}

impl Kernel {
    fn new(g: &CyclicGroup) -> Kernel {
        let [a, b, _] = g.weights;
        let d2 = g.r / gcd(b, g.r);
        let (d1, s) = (1..=g.r)
            .find_map(|i| (0..d2).find(|&j| (a * i + b * j) % g.r == 0).map(|j| (i, j)))
            .expect("the kernel has full rank");
        Kernel { d1, s, d2 }
    }

    /// Coset representative of `p` and the deck translation to it, in the basis of `L`.
    fn reduce(&self, p: V2) -> (V2, V2) {
        let k1 = p.0.div_euclid(self.d1);
        let y = p.1 - k1 * self.s;
        let k2 = y.div_euclid(self.d2);
        (V2(p.0 - k1 * self.d1, y - k2 * self.d2), V2(k1, k2))
    }

    fn coordinates(&self, p: V2) -> Option<V2> {
        let (rep, k) = self.reduce(p);
        rep.is_zero().then_some(k)
    }
}

fn plane(m: Mono) -> V2 {
    V2(m[0] - m[2], m[1] - m[2])
}

/// The hexagonal dimer model of the group. Edge ids are the x-edges, then the
/// y-edges, then the z-edges, each ordered by the character of the tail tile,
/// so the tile of character `χ` becomes quiver vertex `χ`.
pub fn mckay_dimer(g: &CyclicGroup) -> DimerModel {
    let r = g.r as usize;
    let ker = Kernel::new(g);
    let [a, b, _] = g.weights;
    let mut reps = vec![V2::ZERO; r];
    for i in 0..ker.d1 {
        for j in 0..ker.d2 {
            reps[((a * i + b * j).rem_euclid(g.r)) as usize] = V2(i, j);
        }
    }
    let chi = |p: V2| ((a * p.0 + b * p.1).rem_euclid(g.r)) as u32;
    // node copy of the triangle anchored at p: (node character, deck shift)
    let node = |p: V2| {
        let (rep, k) = ker.reduce(p);
        (chi(rep), k)
    };
    let mut edges = Vec::new();
    for kind in 0..3 {
        for (c, &p) in reps.iter().enumerate() {
            let (bp, wp) = match kind {
                0 => (p, p),
                1 => (p - V2(1, 0), p + V2(0, 1)),
                _ => (p - V2(1, 1), p - V2(1, 0)),
            };
            let (bc, bk) = node(bp);
            let (wc, wk) = node(wp);
            edges.push(Edge { id: (kind * r + c) as u32, black: bc, white: r as u32 + wc, offset: wk - bk });
        }
    }
    let mut rotations = BTreeMap::new();
    for c in 0..r as u32 {
        rotations.insert(c, Vec::new());
        rotations.insert(r as u32 + c, Vec::new());
    }
    // x, y, z is counterclockwise at both colours; x-edges come first
    for e in &edges {
        rotations.get_mut(&e.black).unwrap().push(e.id);
        rotations.get_mut(&e.white).unwrap().push(e.id);
    }
    let nodes = (0..r as u32)
        .map(|c| Node { id: c, color: Color::Black, position: None })
        .chain((0..r as u32).map(|c| Node { id: r as u32 + c, color: Color::White, position: None }))
        .collect();
    DimerModel { name: format!("mckay-{}-{}-{}-{}", g.r, g.weights[0], g.weights[1], g.weights[2]), nodes, edges, rotations }
}

/// Monomial basis of a torus-invariant G-cluster, indexed by character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialGGraph {
    pub monomials: Vec<Mono>,
    /// `(from, to, variable)` with variable 0, 1, 2 for x, y, z.
    pub edges: Vec<(usize, usize, usize)>,
}

impl MonomialGGraph {
    pub fn new(g: &CyclicGroup, monomials: Vec<Mono>) -> Result<MonomialGGraph> {
        if monomials.len() != g.r as usize {
            return Err(Error::invariant("g-graph", format!("{} monomials for {} characters", monomials.len(), g.r)));
        }
        for (c, m) in monomials.iter().enumerate() {
            if m.iter().any(|&e| e < 0) || g.character(*m) != c {
                return Err(Error::invariant("g-graph", format!("monomial {m:?} is not a monomial of character {c}")));
            }
        }
        let index: BTreeMap<Mono, usize> = monomials.iter().enumerate().map(|(c, &m)| (m, c)).collect();
        let mut edges = Vec::new();
        for (c, m) in monomials.iter().enumerate() {
            for v in 0..3 {
                if m[v] > 0 {
                    let mut d = *m;
                    d[v] -= 1;
                    let Some(&from) = index.get(&d) else {
                        return Err(Error::invariant("g-graph", format!("{m:?} is present but its divisor {d:?} is not")));
                    };
                    edges.push((from, c, v));
                }
            }
        }
        edges.sort_unstable();
        Ok(MonomialGGraph { monomials, edges })
    }

    /// Characters `χ` with `x s, y s, z s` all outside the graph.
    pub fn socle(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.monomials.len()];
        for &(from, _, _) in &self.edges {
            has_out[from] = true;
        }
        (0..self.monomials.len()).filter(|&c| !has_out[c]).collect()
    }
}

/// Junior coordinates `r·v` of a ray: the numbers of x-, y- and z-edges in its matching.
pub fn junior_point(g: &CyclicGroup, fan: &Fan, ray: usize) -> [i64; 3] {
    let mut n = [0; 3];
    for e in fan.rays[ray].matching.iter() {
        n[e / g.r as usize] += 1;
    }
    n
}

/// Lattice points of the junior simplex in junior coordinates.
pub fn junior_simplex_points(g: &CyclicGroup) -> Vec<[i64; 3]> {
    let r = g.r;
    let mut out: Vec<[i64; 3]> = vec![[r, 0, 0], [0, r, 0], [0, 0, r]];
    for k in 1..r {
        let p = g.weights.map(|w| (k * w).rem_euclid(r));
        if p.iter().sum::<i64>() == r {
            out.push(p);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// G-graph of the cone spanned by three junior points: per character, the
/// monomial `u` with `w - u` nonnegative on the cone for every `w` of the same
/// character. Exponents below `r` suffice since `x^r`, `y^r`, `z^r` are invariant.
pub fn g_graph_of_cone(g: &CyclicGroup, cone: [[i64; 3]; 3]) -> Result<MonomialGGraph> {
    let r = g.r;
    let mut by_char: Vec<Vec<Mono>> = vec![Vec::new(); r as usize];
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                by_char[g.character([a, b, c])].push([a, b, c]);
            }
        }
    }
    let value = |m: Mono, v: [i64; 3]| m[0] * v[0] + m[1] * v[1] + m[2] * v[2];
    let mut monomials = Vec::new();
    for (c, ms) in by_char.iter().enumerate() {
        let min: Vec<Mono> = ms
            .iter()
            .copied()
            .filter(|&u| ms.iter().all(|&w| cone.iter().all(|&v| value(w, v) >= value(u, v))))
            .collect();
        match min.as_slice() {
            [u] => monomials.push(*u),
            _ => {
                return Err(Error::invariant("g-graph", format!("character {c} has {} minimal monomials on {cone:?}", min.len())))
            }
        }
    }
    MonomialGGraph::new(g, monomials)
}

/// G-graph read from the generic chart: path divisors restricted to the corners.
pub fn chart_g_graph(g: &CyclicGroup, q: &crate::dimer::Quiver, fan: &Fan, triangle: usize, corners: [usize; 3]) -> Result<MonomialGGraph> {
    let monomials = (0..q.n_vertices)
        .map(|i| crate::bundles::path_divisor(q, fan, triangle, i).map(|(_, d)| corners.map(|k| d[k])))
        .collect::<Result<Vec<_>>>()?;
    MonomialGGraph::new(g, monomials)
}

/// Nakamura's G-igsaw: each monomial times the highest power of `x^m` that keeps it a monomial.
pub fn nakamura_gigsaw(s: &MonomialGGraph, g: &CyclicGroup, m: Mono) -> Result<MonomialGGraph> {
    if m.iter().all(|&x| x >= 0) {
        return Err(Error::input("/m", "at least one of m1, m2, m3 must be negative"));
    }
    let monomials = s.monomials.iter().map(|&u| gigsaw_power(u, m)).map(|(_, v)| v).collect();
    MonomialGGraph::new(g, monomials)
}

/// `d(a, b, c)` and the moved monomial.
pub fn gigsaw_power(u: Mono, m: Mono) -> (i64, Mono) {
    let d = (0..3).filter(|&k| m[k] < 0).map(|k| u[k] / -m[k]).min().unwrap_or(0);
    (d, [u[0] + d * m[0], u[1] + d * m[1], u[2] + d * m[2]])
}

fn cross(u: [i64; 3], v: [i64; 3]) -> [i64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

/// Primitive invariant exponent normal to the plane of `u, v`, positive on `w`.
pub fn invariant_normal(g: &CyclicGroup, u: [i64; 3], v: [i64; 3], w: [i64; 3]) -> Mono {
    let n = cross(u, v);
    let k = gcd(gcd(n[0], n[1]), n[2]);
    let n = n.map(|x| x / k);
    let s = if n[0] * w[0] + n[1] * w[1] + n[2] * w[2] < 0 { -1 } else { 1 };
    let j = (1..=g.r).find(|&j| g.is_invariant(n.map(|x| j * x))).expect("r·n is invariant");
    n.map(|x| s * j * x)
}

/// Classical marking of a line segment: the character of the numerator of `x^m`.
pub fn classical_segment_marking(g: &CyclicGroup, m: Mono) -> Result<usize> {
    let num = m.map(|x| x.max(0));
    let den = m.map(|x| (-x).max(0));
    let (a, b) = (g.character(num), g.character(den));
    if a != b {
        return Err(Error::invariant("classical-recipe", format!("x^{m:?} is not invariant")));
    }
    Ok(a)
}

/// Classical marking of a point: characters in the socle of every G-graph at the point.
pub fn classical_point_marking(graphs: &[&MonomialGGraph]) -> Vec<usize> {
    let mut common: Option<Vec<usize>> = None;
    for s in graphs {
        let soc = s.socle();
        common = Some(match common {
            None => soc,
            Some(c) => c.into_iter().filter(|x| soc.contains(x)).collect(),
        });
    }
    common.unwrap_or_default().into_iter().filter(|&c| c != 0).collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CrossCheck {
    pub group: String,
    pub tiles: usize,
    pub rays: usize,
    pub triangles: usize,
    pub segments: usize,
    pub points: usize,
    pub disagreements: Vec<String>,
}

impl CrossCheck {
    pub fn ok(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Runs the generic pipeline on the McKay model and compares with the classical oracles.
pub fn crosscheck_recipes(g: &CyclicGroup) -> Result<CrossCheck> {
    let t = Tiling::new(mckay_dimer(g))?;
    let q = t.quiver();
    let md = characteristic_polygon(&t, &q)?;
    let fan = build_fan(&q, &md, &Stability::default_for(q.n_vertices, 0)?)?;
    let (report, data) = run_recipe(&t, &q, &fan)?;
    let mut out = CrossCheck {
        group: g.label(),
        tiles: q.n_vertices,
        rays: fan.rays.len(),
        triangles: fan.triangles.len(),
        segments: fan.segments.len(),
        points: fan.interior.len(),
        disagreements: Vec::new(),
    };
    let mut bad = Vec::new();
    let mut diff = |s: String| bad.push(s);

    // the quiver is the McKay quiver: x-arrows go from χ to χ + a
    for (k, a) in q.arrows.iter().enumerate() {
        let kind = k / g.r as usize;
        let mut e = [0; 3];
        e[kind] = 1;
        if (a.tail + g.character(e)) % g.r as usize != a.head {
            diff(format!("arrow {k} goes {} -> {}, not along character {}", a.tail, a.head, g.character(e)));
        }
    }
    let ker = Kernel::new(g);
    let pts: Vec<[i64; 3]> = (0..fan.rays.len()).map(|k| junior_point(g, &fan, k)).collect();
    let mut sorted = pts.clone();
    sorted.sort_unstable();
    if sorted != junior_simplex_points(g) {
        diff(format!("rays {sorted:?} are not the junior simplex points {:?}", junior_simplex_points(g)));
        out.disagreements = bad;
        return Ok(out);
    }
    // polygon point ↦ junior point is affine
    let corner = |axis: usize| pts.iter().position(|p| p[axis] == g.r).unwrap();
    let corners = [corner(0), corner(1), corner(2)];
    let base = fan.rays[corners[2]].point;
    let (dx, dy) = (fan.rays[corners[0]].point - base, fan.rays[corners[1]].point - base);
    let det = dx.cross(dy);
    for (k, ray) in fan.rays.iter().enumerate() {
        let p = ray.point - base;
        // barycentric coordinates times det
        let (s, u) = (p.cross(dy), dx.cross(p));
        if det == 0 || s * g.r != pts[k][0] * det || u * g.r != pts[k][1] * det {
            diff(format!("ray {k} at {} has junior point {:?}, off the affine image", ray.point, pts[k]));
        }
    }

    let mut graphs = Vec::new();
    for (k, tri) in fan.triangles.iter().enumerate() {
        let cone = tri.rays.map(|r| pts[r]);
        let classical = g_graph_of_cone(g, cone)?;
        let chart = chart_g_graph(g, &q, &fan, k, corners)?;
        if classical != chart {
            diff(format!("triangle {k}: chart G-graph {:?} differs from {:?}", chart.monomials, classical.monomials));
        }
        graphs.push(classical);
    }
    for (&ray, marks) in &report.points {
        let at: Vec<&MonomialGGraph> = fan.triangles_containing(ray).into_iter().map(|k| &graphs[k]).collect();
        let classical = classical_point_marking(&at);
        if &classical != marks {
            diff(format!("point {:?}: generic {marks:?}, classical {classical:?}", pts[ray]));
        }
    }
    for (s, seg) in fan.segments.iter().enumerate() {
        let [r0, r1, r2, _] = fan.wall_rays(seg);
        let m = invariant_normal(g, pts[r1], pts[r2], pts[r0]);
        let classical = classical_segment_marking(g, m)?;
        let generic = &report.segments[&s];
        if generic != &vec![classical] {
            diff(format!("segment {:?}-{:?}: generic {generic:?}, classical {classical}", pts[seg.rays[0]], pts[seg.rays[1]]));
        }
        let (plus, minus) = (&graphs[seg.plus], &graphs[seg.minus]);
        let den = m.map(|x| (-x).max(0));
        if !plus.monomials.contains(&den) {
            diff(format!("segment {s}: denominator {den:?} is not in the G-graph of σ₊"));
        }
        match nakamura_gigsaw(plus, g, m) {
            Ok(moved) if &moved == minus => {}
            Ok(moved) => diff(format!("segment {s}: G-igsaw gives {:?}, expected {:?}", moved.monomials, minus.monomials)),
            Err(e) => diff(format!("segment {s}: {e}")),
        }
        // combinatorial jigsaw against the monomial map
        let jig = &data[s].jigsaw;
        let step = ker.coordinates(plane(m)).expect("invariant monomials are deck translations");
        for i in 0..q.n_vertices {
            let (d, _) = gigsaw_power(plus.monomials[i], m);
            let tr = jig.translations[jig.piece_of[i]];
            if tr != V2(d * step.0, d * step.1) {
                diff(format!("segment {s}: tile {i} moves by {tr}, G-igsaw power {d} of {step}"));
            }
        }
        // pieces are whole: the jigsaw of the segment is recomputable on its own
        let again = jigsaw_pieces(&t, &q, &fan, s)?;
        if again.translations != jig.translations {
            diff(format!("segment {s}: jigsaw is not deterministic"));
        }
    }
    out.disagreements = bad;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(r: i64, w: [i64; 3]) -> CyclicGroup {
        CyclicGroup::new(r, w).unwrap()
    }

    #[test]
    fn parse_and_validate() {
        assert_eq!(CyclicGroup::parse("3:1,1,1").unwrap(), g(3, [1, 1, 1]));
        assert!(CyclicGroup::parse("3:1,1").is_err());
        assert!(CyclicGroup::parse("3:1,1,2").is_err());
        assert!(CyclicGroup::parse("4:2,2,0").is_err());
        assert_eq!(g(6, [1, 2, -3]).weights, [1, 2, 3]);
    }

    #[test]
    fn kernel_has_index_r() {
        for grp in CyclicGroup::all_up_to(12) {
            let k = Kernel::new(&grp);
            assert_eq!(k.d1 * k.d2, grp.r, "{}", grp.label());
        }
    }

    #[test]
    fn junior_points_of_one_third() {
        assert_eq!(junior_simplex_points(&g(3, [1, 1, 1])), vec![[0, 0, 3], [0, 3, 0], [1, 1, 1], [3, 0, 0]]);
        assert_eq!(junior_simplex_points(&g(2, [1, 1, 0])).len(), 4);
    }

    #[test]
    fn gigsaw_of_a_corner_cluster() {
        let grp = g(3, [1, 1, 1]);
        let plus = MonomialGGraph::new(&grp, vec![[0, 0, 0], [0, 0, 1], [0, 0, 2]]).unwrap();
        let minus = nakamura_gigsaw(&plus, &grp, [0, 1, -1]).unwrap();
        assert_eq!(minus.monomials, vec![[0, 0, 0], [0, 1, 0], [0, 2, 0]]);
        assert_eq!(nakamura_gigsaw(&minus, &grp, [0, -1, 1]).unwrap(), plus);
        assert!(nakamura_gigsaw(&plus, &grp, [0, 1, 1]).is_err());
        assert_eq!(plus.socle(), vec![2]);
    }

    #[test]
    fn g_graph_is_a_staircase() {
        let grp = g(3, [1, 1, 1]);
        assert!(MonomialGGraph::new(&grp, vec![[0, 0, 0], [0, 0, 1], [0, 1, 1]]).is_err());
        let s = g_graph_of_cone(&grp, [[3, 0, 0], [0, 3, 0], [1, 1, 1]]).unwrap();
        assert_eq!(s.monomials, vec![[0, 0, 0], [0, 0, 1], [0, 0, 2]]);
    }

    #[test]
    fn segment_marking_of_one_third() {
        let grp = g(3, [1, 1, 1]);
        let m = invariant_normal(&grp, [0, 0, 3], [1, 1, 1], [3, 0, 0]);
        assert_eq!(m, [1, -1, 0]);
        assert_eq!(classical_segment_marking(&grp, m).unwrap(), 1);
    }
}
