//! Reid's recipe: marking interior points and segments of the fan by quiver vertices.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::dimer::{Quiver, Tiling};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::jigsaw::{jigsaw_pieces, tau_quivers, Jigsaw, TauQuivers};

/// Vertex `i` marks interior ray `ρ` when it is a sink of `Q^σ` for every
/// triangle `σ` at `ρ`. For 0-generated modules with scalars 0/1, `S_i` sits
/// in the socle exactly when every arrow out of `i` acts by zero.
pub fn mark_lattice_points(q: &Quiver, fan: &Fan) -> Result<BTreeMap<usize, Vec<usize>>> {
    let sinks: Vec<BTreeSet<usize>> =
        fan.triangles.iter().map(|t| q.sinks(&t.module.support).into_iter().collect()).collect();
    let mut out = BTreeMap::new();
    for &r in &fan.interior {
        let mut common: Option<BTreeSet<usize>> = None;
        for t in fan.triangles_containing(r) {
            common = Some(match common {
                None => sinks[t].clone(),
                Some(c) => c.intersection(&sinks[t]).copied().collect(),
            });
        }
        let marks: Vec<usize> = common.unwrap_or_default().into_iter().collect();
        if marks.is_empty() {
            return Err(Error::invariant("recipe", format!("interior point {} is unmarked", fan.rays[r].point)));
        }
        out.insert(r, marks);
    }
    Ok(out)
}

/// Per interior segment: its jigsaw, the two quivers and the common sources.
#[derive(Clone, Debug)]
pub struct SegmentData {
    pub jigsaw: Jigsaw,
    pub quivers: TauQuivers,
}

pub fn segment_data(t: &Tiling, q: &Quiver, fan: &Fan) -> Result<Vec<SegmentData>> {
    (0..fan.segments.len())
        .map(|s| {
            let jigsaw = jigsaw_pieces(t, q, fan, s)?;
            let quivers = tau_quivers(q, fan, &jigsaw)?;
            Ok(SegmentData { jigsaw, quivers })
        })
        .collect()
}

/// Segment index to its marking vertices.
pub fn mark_line_segments(data: &[SegmentData]) -> BTreeMap<usize, Vec<usize>> {
    data.iter().enumerate().map(|(s, d)| (s, d.quivers.sources_plus.clone())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexCase {
    ZeroVertex,
    MarksPoints,
    MarksOneSegment,
    MarksManySegments,
    Unmarked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Support {
    None,
    /// Union of divisors of the listed rays.
    Divisors { rays: Vec<usize> },
    Curve { segment: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexClass {
    pub vertex: usize,
    pub case: VertexCase,
    pub points: Vec<usize>,
    pub segments: Vec<usize>,
    pub support: Support,
    /// The support comes from an open conjecture.
    pub conjectural: bool,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecipeReport {
    pub points: BTreeMap<usize, Vec<usize>>,
    pub segments: BTreeMap<usize, Vec<usize>>,
    pub vertices: Vec<VertexClass>,
    /// `n(i, ρ)`: number of marked segments at ray `ρ` marked by `i`, nonzero entries only.
    pub counts: BTreeMap<usize, BTreeMap<usize, usize>>,
}

impl RecipeReport {
    pub fn n(&self, i: usize, r: usize) -> usize {
        self.counts.get(&i).and_then(|m| m.get(&r)).copied().unwrap_or(0)
    }
}

pub fn classify_vertices(
    q: &Quiver,
    fan: &Fan,
    points: BTreeMap<usize, Vec<usize>>,
    segments: BTreeMap<usize, Vec<usize>>,
) -> RecipeReport {
    let n = q.n_vertices;
    let mut pts_of = vec![Vec::new(); n];
    for (&r, vs) in &points {
        for &i in vs {
            pts_of[i].push(r);
        }
    }
    let mut segs_of = vec![Vec::new(); n];
    let mut counts: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    for (&s, vs) in &segments {
        for &i in vs {
            segs_of[i].push(s);
            for r in fan.segments[s].rays {
                *counts.entry(i).or_default().entry(r).or_default() += 1;
            }
        }
    }
    let interior: BTreeSet<usize> = fan.interior.iter().copied().collect();
    let vertices = (0..n)
        .map(|i| {
            let (p, s) = (pts_of[i].clone(), segs_of[i].clone());
            let mut warnings = Vec::new();
            if !p.is_empty() && !s.is_empty() {
                warnings.push("marks both points and segments".to_string());
            }
            let (case, support, conjectural) = if i == fan.theta.zero {
                if !p.is_empty() || !s.is_empty() {
                    warnings.push("the zero vertex marks something".to_string());
                }
                (VertexCase::ZeroVertex, Support::None, false)
            } else if !p.is_empty() {
                if !divisors_connected(fan, &p) {
                    warnings.push("marked divisors are not connected".to_string());
                }
                (VertexCase::MarksPoints, Support::Divisors { rays: p.clone() }, false)
            } else if s.len() == 1 {
                (VertexCase::MarksOneSegment, Support::Curve { segment: s[0] }, false)
            } else if s.len() > 1 {
                let rays: Vec<usize> = counts[&i]
                    .iter()
                    .filter(|(r, &c)| c >= 2 && interior.contains(r))
                    .map(|(&r, _)| r)
                    .collect();
                (VertexCase::MarksManySegments, Support::Divisors { rays }, true)
            } else {
                (VertexCase::Unmarked, Support::None, false)
            };
            VertexClass { vertex: i, case, points: p, segments: s, support, conjectural, warnings }
        })
        .collect();
    RecipeReport { points, segments, vertices, counts }
}

/// Whether the rays are connected through edges of the triangulation.
fn divisors_connected(fan: &Fan, rays: &[usize]) -> bool {
    let set: BTreeSet<usize> = rays.iter().copied().collect();
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for t in &fan.triangles {
        for a in t.rays {
            for b in t.rays {
                if a != b && set.contains(&a) && set.contains(&b) {
                    adj.entry(a).or_default().insert(b);
                }
            }
        }
    }
    let mut seen = BTreeSet::from([rays[0]]);
    let mut stack = vec![rays[0]];
    while let Some(r) = stack.pop() {
        for &s in adj.get(&r).into_iter().flatten() {
            if seen.insert(s) {
                stack.push(s);
            }
        }
    }
    seen.len() == set.len()
}

/// `(triangle, vertex)` pairs where a nonzero sink of `Q^σ` marks neither an
/// edge nor a node of `σ`.
pub fn socle_violations(q: &Quiver, fan: &Fan, report: &RecipeReport) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (k, t) in fan.triangles.iter().enumerate() {
        for i in q.sinks(&t.module.support) {
            if i == fan.theta.zero {
                continue;
            }
            let node = t.rays.iter().any(|r| report.points.get(r).is_some_and(|v| v.contains(&i)));
            let edge = report.segments.iter().any(|(&s, v)| {
                let sg = &fan.segments[s];
                (sg.plus == k || sg.minus == k) && v.contains(&i)
            });
            if !node && !edge {
                out.push((k, i));
            }
        }
    }
    out
}

/// Full recipe from a built fan.
pub fn run_recipe(t: &Tiling, q: &Quiver, fan: &Fan) -> Result<(RecipeReport, Vec<SegmentData>)> {
    let points = mark_lattice_points(q, fan)?;
    let data = segment_data(t, q, fan)?;
    let segments = mark_line_segments(&data);
    Ok((classify_vertices(q, fan, points, segments), data))
}
