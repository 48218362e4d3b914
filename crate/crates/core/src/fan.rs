//! θ-stable matchings and the triangulation of the characteristic polygon.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::bits::Bits;
use crate::dimer::{lift_subquiver, Lift, LiftFailure, Quiver};
use crate::error::{Error, Result};
use crate::lattice::{locate, on_segment, orient, Location, V2};
use crate::matchings::{MatchingData, PointKind};

/// A 0-generated stability parameter: `θ_zero < 0` and `θ_i > 0` otherwise.
///
/// Weights are integers; rational input is scaled to a common denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stability {
    pub zero: usize,
    pub weights: Vec<i64>,
}

impl Stability {
    /// `(-(n-1), 1, ..., 1)` with the negative entry at `zero`.
    pub fn default_for(n: usize, zero: usize) -> Result<Stability> {
        let weights = (0..n).map(|i| if i == zero { 1 - n as i64 } else { 1 }).collect();
        Stability::new(zero, weights)
    }

    pub fn new(zero: usize, weights: Vec<i64>) -> Result<Stability> {
        if zero >= weights.len() {
            return Err(Error::input("/zero", format!("vertex {zero} is not a quiver vertex")));
        }
        if weights.iter().sum::<i64>() != 0 {
            return Err(Error::input("/weights", "stability weights must sum to zero"));
        }
        if let Some(i) = (0..weights.len()).find(|&i| i != zero && weights[i] <= 0) {
            return Err(Error::input(
                format!("/weights/{i}"),
                "only 0-generated parameters are supported: every weight except the zero vertex must be positive",
            ));
        }
        Ok(Stability { zero, weights })
    }
}

/// Every vertex reachable from the zero vertex along arrows of `support`.
pub fn is_stable_support(q: &Quiver, support: &Bits, theta: &Stability) -> bool {
    q.reachable(support, theta.zero).iter().all(|&r| r)
}

#[derive(Clone, Debug)]
pub struct Ray {
    pub point: V2,
    pub matching: Bits,
    pub kind: PointKind,
}

/// The θ-stable matching at every occupied lattice point, ordered by point.
pub fn stable_matchings(q: &Quiver, md: &MatchingData, theta: &Stability) -> Result<Vec<Ray>> {
    let mut rays = Vec::new();
    let mut bad = Vec::new();
    for (&p, idx) in &md.polygon.points {
        let stable: Vec<usize> = idx
            .iter()
            .copied()
            .filter(|&i| is_stable_support(q, &md.matchings[i].edges.complement(), theta))
            .collect();
        if stable.len() != 1 {
            bad.push(format!("{p}: {} stable matchings", stable.len()));
            continue;
        }
        rays.push(Ray { point: p, matching: md.matchings[stable[0]].edges.clone(), kind: md.polygon.kinds[&p] });
    }
    if !bad.is_empty() {
        return Err(Error::invariant("ray-multiplicity", bad.join("; ")));
    }
    Ok(rays)
}

/// The torus-invariant module of a cone: arrows act by 1 exactly off the
/// union of the cone's matchings.
#[derive(Clone, Debug)]
pub struct ConeModule {
    pub rays: Vec<usize>,
    /// Edges (arrows) acting by zero.
    pub zero: Bits,
    pub support: Bits,
    /// Lift of the support based at the zero vertex (3-cones only).
    pub lift: Option<Lift>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Rejection {
    Unstable { unreached: Vec<usize> },
    Relation { arrow: usize },
    Lift(LiftFailure),
}

pub fn cone_module(q: &Quiver, rays: &[Ray], cone: &[usize], theta: &Stability) -> std::result::Result<ConeModule, Rejection> {
    let mut zero = Bits::new(q.n_arrows());
    for &r in cone {
        zero = zero.union(&rays[r].matching);
    }
    let support = zero.complement();
    let mut module = ConeModule { rays: cone.to_vec(), zero, support, lift: None };
    if cone.len() < 3 {
        return Ok(module);
    }
    let reach = q.reachable(&module.support, theta.zero);
    let unreached: Vec<usize> = (0..q.n_vertices).filter(|&v| !reach[v]).collect();
    if !unreached.is_empty() {
        return Err(Rejection::Unstable { unreached });
    }
    if let Some(arrow) = first_failed_relation(q, &module.support) {
        return Err(Rejection::Relation { arrow });
    }
    module.lift = Some(lift_subquiver(q, &module.support, theta.zero).map_err(Rejection::Lift)?);
    Ok(module)
}

/// First arrow whose two relation paths act differently.
pub fn first_failed_relation(q: &Quiver, support: &Bits) -> Option<usize> {
    (0..q.n_arrows()).find(|&a| {
        let (p, m) = q.relation_paths(a);
        p.iter().all(|&b| support.contains(b)) != m.iter().all(|&b| support.contains(b))
    })
}

#[derive(Clone, Debug)]
pub struct Triangle {
    /// Ray ids, increasing.
    pub rays: [usize; 3],
    pub module: ConeModule,
}

/// An interior segment `τ = σ₊ ∩ σ₋`. `σ₊` is the triangle to the right of
/// the directed segment from `rays[0]` to `rays[1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub rays: [usize; 2],
    pub plus: usize,
    pub minus: usize,
}

#[derive(Clone, Debug)]
pub struct Fan {
    pub theta: Stability,
    pub rays: Vec<Ray>,
    pub triangles: Vec<Triangle>,
    pub segments: Vec<Segment>,
    /// Ray ids of interior lattice points.
    pub interior: Vec<usize>,
    pub corners: Vec<V2>,
}

impl Fan {
    pub fn ray_at(&self, p: V2) -> Option<usize> {
        self.rays.iter().position(|r| r.point == p)
    }

    pub fn ray_of_matching(&self, m: &Bits) -> Option<usize> {
        self.rays.iter().position(|r| &r.matching == m)
    }

    pub fn triangle(&self, rays: [usize; 3]) -> Option<usize> {
        let mut r = rays;
        r.sort();
        self.triangles.iter().position(|t| t.rays == r)
    }

    pub fn segment(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { [a, b] } else { [b, a] };
        self.segments.iter().position(|s| s.rays == key)
    }

    /// `(ρ0, ρ1, ρ2, ρ3)`: opposite ray in σ₊, the two rays of τ, opposite ray in σ₋.
    pub fn wall_rays(&self, s: &Segment) -> [usize; 4] {
        let opp = |t: usize| *self.triangles[t].rays.iter().find(|r| !s.rays.contains(r)).unwrap();
        [opp(s.plus), s.rays[0], s.rays[1], opp(s.minus)]
    }

    /// `(h_ρ, 1)`.
    pub fn ray_vector(&self, r: usize) -> [i64; 3] {
        let p = self.rays[r].point;
        [p.0, p.1, 1]
    }

    /// Primitive `m` vanishing on the segment and positive on `σ₊`.
    pub fn wall_normal(&self, s: &Segment) -> [i64; 3] {
        let [r0, r1, r2, _] = self.wall_rays(s);
        let (a, b) = (self.ray_vector(r1), self.ray_vector(r2));
        let mut m = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        if pair(m, self.ray_vector(r0)) < 0 {
            m = [-m[0], -m[1], -m[2]];
        }
        m
    }

    pub fn triangles_containing(&self, r: usize) -> Vec<usize> {
        (0..self.triangles.len()).filter(|&t| self.triangles[t].rays.contains(&r)).collect()
    }
}

pub fn pair(m: [i64; 3], v: [i64; 3]) -> i64 {
    m[0] * v[0] + m[1] * v[1] + m[2] * v[2]
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct TriangulationReport {
    pub triangle_count: usize,
    pub twice_area: i64,
    pub quiver_vertices: usize,
    pub non_unimodular: Vec<[V2; 3]>,
    pub overlaps: Vec<([V2; 3], [V2; 3])>,
    /// Triangle edges that are used once but are not on the polygon boundary.
    pub gaps: Vec<(V2, V2)>,
    /// Edges used more than twice, or twice from the same side.
    pub bad_edges: Vec<(V2, V2)>,
    pub outside: Vec<V2>,
}

impl TriangulationReport {
    pub fn ok(&self) -> bool {
        self.non_unimodular.is_empty()
            && self.overlaps.is_empty()
            && self.gaps.is_empty()
            && self.bad_edges.is_empty()
            && self.outside.is_empty()
            && self.triangle_count as i64 == self.twice_area
            && self.triangle_count == self.quiver_vertices
    }
}

/// Exact-tiling check of a list of lattice triangles against a convex polygon.
pub fn verify_triangulation(corners: &[V2], triangles: &[[V2; 3]], quiver_vertices: usize) -> TriangulationReport {
    let mut rep = TriangulationReport {
        triangle_count: triangles.len(),
        twice_area: crate::lattice::twice_area(corners),
        quiver_vertices,
        ..Default::default()
    };
    for t in triangles {
        if orient(t[0], t[1], t[2]).abs() != 1 {
            rep.non_unimodular.push(*t);
        }
        for &p in t {
            if locate(corners, p) == Location::Outside {
                rep.outside.push(p);
            }
        }
    }
    for i in 0..triangles.len() {
        for j in i + 1..triangles.len() {
            if interiors_meet(&triangles[i], &triangles[j]) {
                rep.overlaps.push((triangles[i], triangles[j]));
            }
        }
    }
    // edge -> sides of the third vertex
    let mut uses: BTreeMap<(V2, V2), Vec<i64>> = BTreeMap::new();
    for t in triangles {
        for k in 0..3 {
            let (a, b, c) = (t[k], t[(k + 1) % 3], t[(k + 2) % 3]);
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            uses.entry((a, b)).or_default().push(orient(a, b, c).signum());
        }
    }
    let n = corners.len();
    let on_boundary =
        |a: V2, b: V2| (0..n).any(|k| on_segment(corners[k], corners[(k + 1) % n], a) && on_segment(corners[k], corners[(k + 1) % n], b));
    for ((a, b), sides) in uses {
        match sides.len() {
            1 if on_boundary(a, b) => {}
            1 => rep.gaps.push((a, b)),
            2 if sides[0] != sides[1] && !on_boundary(a, b) => {}
            _ => rep.bad_edges.push((a, b)),
        }
    }
    rep
}

/// Whether two counterclockwise-or-not triangles share interior points.
fn interiors_meet(s: &[V2; 3], t: &[V2; 3]) -> bool {
    let separated_by = |a: &[V2; 3], b: &[V2; 3]| {
        let sign = orient(a[0], a[1], a[2]).signum();
        (0..3).any(|k| {
            let (p, q) = (a[k], a[(k + 1) % 3]);
            b.iter().all(|&x| orient(p, q, x) * sign <= 0)
        })
    };
    !(separated_by(s, t) || separated_by(t, s))
}

/// Candidate-then-verify construction of the fan.
pub fn build_fan(q: &Quiver, md: &MatchingData, theta: &Stability) -> Result<Fan> {
    let rays = stable_matchings(q, md, theta)?;
    let n = rays.len();
    let mut triangles = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orient(rays[i].point, rays[j].point, rays[k].point).abs() != 1 {
                    continue;
                }
                if let Ok(module) = cone_module(q, &rays, &[i, j, k], theta) {
                    triangles.push(Triangle { rays: [i, j, k], module });
                }
            }
        }
    }
    let pts: Vec<[V2; 3]> = triangles.iter().map(|t| t.rays.map(|r| rays[r].point)).collect();
    let report = verify_triangulation(&md.polygon.corners, &pts, q.n_vertices);
    if !report.ok() {
        return Err(Error::invariant(
            "triangulation",
            serde_json::to_string(&report).unwrap_or_else(|_| format!("{report:?}")),
        ));
    }
    let mut by_edge: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            by_edge.entry([t.rays[a], t.rays[b]]).or_default().push(ti);
        }
    }
    let mut segments = Vec::new();
    for (key, ts) in by_edge {
        if ts.len() != 2 {
            continue;
        }
        let (p, r) = (rays[key[0]].point, rays[key[1]].point);
        let third = |t: usize| *triangles[t].rays.iter().find(|x| !key.contains(x)).unwrap();
        let right = |t: usize| orient(p, r, rays[third(t)].point) < 0;
        let (plus, minus) = if right(ts[0]) { (ts[0], ts[1]) } else { (ts[1], ts[0]) };
        segments.push(Segment { rays: key, plus, minus });
    }
    let interior = (0..n).filter(|&r| rays[r].kind == PointKind::Interior).collect();
    Ok(Fan { theta: theta.clone(), rays, triangles, segments, interior, corners: md.polygon.corners.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_theta_is_zero_generated() {
        let th = Stability::default_for(4, 0).unwrap();
        assert_eq!(th.weights, vec![-3, 1, 1, 1]);
        assert!(Stability::new(0, vec![1, -1]).is_err());
        assert!(Stability::new(0, vec![-1, 2]).is_err());
    }

    #[test]
    fn removing_a_triangle_leaves_a_gap() {
        let sq = [V2(0, 0), V2(1, 0), V2(1, 1), V2(0, 1)];
        let full = [[V2(0, 0), V2(1, 0), V2(1, 1)], [V2(0, 0), V2(1, 1), V2(0, 1)]];
        assert!(verify_triangulation(&sq, &full, 2).ok());
        let r = verify_triangulation(&sq, &full[..1], 2);
        assert!(!r.ok());
        assert_eq!(r.gaps, vec![(V2(0, 0), V2(1, 1))]);
        let crossing = [[V2(0, 0), V2(1, 0), V2(1, 1)], [V2(0, 0), V2(1, 0), V2(0, 1)]];
        assert!(!verify_triangulation(&sq, &crossing, 2).overlaps.is_empty());
    }
}
