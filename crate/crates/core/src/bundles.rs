//! Tautological divisors, their classes, degrees on curves and the Picard relations.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dimer::Quiver;
use crate::error::{Error, Result};
use crate::fan::{Fan, Segment};
use crate::recipe::RecipeReport;
use crate::smith::{smith, Smith};

/// Multiplicity per ray.
pub type Divisor = Vec<i64>;

/// Rays whose stable matching contains the edge dual to `a`.
pub fn arrow_divisor(fan: &Fan, a: usize) -> Divisor {
    fan.rays.iter().map(|r| i64::from(r.matching.contains(a))).collect()
}

pub fn divisor_of_path(fan: &Fan, path: &[usize]) -> Divisor {
    let mut d = vec![0; fan.rays.len()];
    for &a in path {
        for (k, r) in fan.rays.iter().enumerate() {
            if r.matching.contains(a) {
                d[k] += 1;
            }
        }
    }
    d
}

/// Breadth-first path in `Q^σ` from the zero vertex to `target` and its divisor.
pub fn path_divisor(q: &Quiver, fan: &Fan, triangle: usize, target: usize) -> Result<(Vec<usize>, Divisor)> {
    let path = q
        .bfs_path(&fan.triangles[triangle].module.support, fan.theta.zero, target)
        .ok_or_else(|| Error::invariant("stability", format!("vertex {target} unreachable in triangle {triangle}")))?;
    let d = divisor_of_path(fan, &path);
    Ok((path, d))
}

/// `Z^{rays}` modulo the principal divisors `(⟨m, (h_ρ, 1)⟩)_ρ`.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub principal: Vec<Vec<i64>>,
    smith: Smith,
}

impl ClassGroup {
    pub fn new(fan: &Fan) -> ClassGroup {
        let principal = vec![
            fan.rays.iter().map(|r| r.point.0).collect(),
            fan.rays.iter().map(|r| r.point.1).collect(),
            vec![1; fan.rays.len()],
        ];
        let smith = smith(&principal, fan.rays.len());
        ClassGroup { principal, smith }
    }

    pub fn class(&self, d: &[i64]) -> Vec<i64> {
        self.smith.class_of(d)
    }

    pub fn is_principal(&self, d: &[i64]) -> bool {
        self.smith.in_row_lattice(d)
    }

    /// Rank of the free part.
    pub fn rank(&self) -> usize {
        self.smith.v.len() - self.smith.rank
    }

    pub fn torsion(&self) -> Vec<i64> {
        self.smith.torsion()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleClass {
    pub vertex: usize,
    /// Path divisor in the first triangle.
    pub divisor: Divisor,
    pub class: Vec<i64>,
}

/// Class of `L_i`, checked to be the same through every triangle.
pub fn bundle_class(q: &Quiver, fan: &Fan, cg: &ClassGroup, i: usize) -> Result<BundleClass> {
    let (_, divisor) = path_divisor(q, fan, 0, i)?;
    let class = cg.class(&divisor);
    for k in 1..fan.triangles.len() {
        let (_, d) = path_divisor(q, fan, k, i)?;
        let diff: Vec<i64> = d.iter().zip(&divisor).map(|(a, b)| a - b).collect();
        if !cg.is_principal(&diff) {
            return Err(Error::invariant(
                "bundle-class",
                format!("L_{i} differs between triangles 0 and {k}: {diff:?}"),
            ));
        }
    }
    Ok(BundleClass { vertex: i, divisor, class })
}

/// `(α, β)` with `v0 + v3 = α v1 + β v2`.
pub fn wall_coefficients(fan: &Fan, s: &Segment) -> Result<(i64, i64)> {
    let [r0, r1, r2, r3] = fan.wall_rays(s);
    let v = |r| fan.ray_vector(r);
    let (v0, v1, v2, v3) = (v(r0), v(r1), v(r2), v(r3));
    let w = [v0[0] + v3[0], v0[1] + v3[1], v0[2] + v3[2]];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let det = v1[i] * v2[j] - v1[j] * v2[i];
        if det == 0 {
            continue;
        }
        let (an, bn) = (w[i] * v2[j] - w[j] * v2[i], v1[i] * w[j] - v1[j] * w[i]);
        if an % det != 0 || bn % det != 0 {
            break;
        }
        let (a, b) = (an / det, bn / det);
        if (0..3).all(|k| a * v1[k] + b * v2[k] == w[k]) {
            return Ok((a, b));
        }
        break;
    }
    Err(Error::invariant("wall", "no integral wall relation"))
}

#[derive(Clone, Debug, Serialize)]
pub struct Degree {
    pub vertex: usize,
    pub segment: usize,
    /// Multiplicity of ρ3 in a σ₊ path divisor.
    pub degree: i64,
    /// Wall formula applied to a path divisor of the full quiver.
    pub wall_formula: i64,
    /// Multiplicity of ρ0 in a σ₋ path divisor.
    pub minus_multiplicity: i64,
}

pub fn degree_on_curve(q: &Quiver, fan: &Fan, i: usize, segment: usize) -> Result<Degree> {
    let s = &fan.segments[segment];
    let [r0, r1, r2, r3] = fan.wall_rays(s);
    let (_, dp) = path_divisor(q, fan, s.plus, i)?;
    let (_, dm) = path_divisor(q, fan, s.minus, i)?;
    let full = crate::bits::Bits::full(q.n_arrows());
    let path = q
        .bfs_path(&full, fan.theta.zero, i)
        .ok_or_else(|| Error::invariant("stability", format!("vertex {i} unreachable")))?;
    let d = divisor_of_path(fan, &path);
    let (alpha, beta) = wall_coefficients(fan, s)?;
    let out = Degree {
        vertex: i,
        segment,
        degree: dp[r3],
        wall_formula: d[r0] + d[r3] - alpha * d[r1] - beta * d[r2],
        minus_multiplicity: dm[r0],
    };
    if out.degree != out.wall_formula || out.degree != out.minus_multiplicity {
        return Err(Error::invariant("degree", format!("methods disagree: {out:?}")));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PointRelation {
    pub ray: usize,
    /// Vertices marking the point.
    pub lhs: Vec<usize>,
    /// Exponents `n(i, ρ) - 1` over vertices with `n(i, ρ) ≥ 1`, zeros dropped.
    pub rhs: BTreeMap<usize, i64>,
    pub holds: bool,
    /// Exponents `n(i, ρ) - 1` over all vertices, zeros dropped.
    pub rhs_literal: BTreeMap<usize, i64>,
    pub literal_holds: bool,
    /// Class of lhs minus rhs.
    pub witness: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationsReport {
    pub relations: Vec<PointRelation>,
    pub class_rank: usize,
    pub torsion: Vec<i64>,
    pub nonzero_vertices: usize,
    pub interior_points: usize,
    /// The nonzero bundles generate the class group.
    pub generates: bool,
    /// The relations span all relations among the nonzero bundles.
    pub complete: bool,
}

impl RelationsReport {
    pub fn ok(&self) -> bool {
        self.relations.iter().all(|r| r.holds)
            && self.generates
            && self.complete
            && self.nonzero_vertices - self.interior_points == self.class_rank
    }
}

pub fn verify_pic_relations(q: &Quiver, fan: &Fan, report: &RecipeReport) -> Result<RelationsReport> {
    let cg = ClassGroup::new(fan);
    let zero = fan.theta.zero;
    let nonzero: Vec<usize> = (0..q.n_vertices).filter(|&i| i != zero).collect();
    let mut divisors = vec![vec![0; fan.rays.len()]; q.n_vertices];
    for &i in &nonzero {
        divisors[i] = bundle_class(q, fan, &cg, i)?.divisor;
    }
    let combo = |coeffs: &BTreeMap<usize, i64>| {
        let mut d = vec![0i64; fan.rays.len()];
        for (&i, &c) in coeffs {
            for (k, x) in divisors[i].iter().enumerate() {
                d[k] += c * x;
            }
        }
        d
    };
    let mut relations = Vec::new();
    let mut rel_rows = Vec::new();
    for (&ray, marks) in &report.points {
        let lhs: BTreeMap<usize, i64> = marks.iter().map(|&i| (i, 1)).collect();
        let mut rhs = BTreeMap::new();
        let mut rhs_literal = BTreeMap::new();
        for i in 0..q.n_vertices {
            let n = report.n(i, ray) as i64;
            if n - 1 != 0 {
                rhs_literal.insert(i, n - 1);
                if n >= 1 {
                    rhs.insert(i, n - 1);
                }
            }
        }
        let diff = |r: &BTreeMap<usize, i64>| {
            let mut c = lhs.clone();
            for (&i, &e) in r {
                *c.entry(i).or_default() -= e;
            }
            c
        };
        let (c, cl) = (diff(&rhs), diff(&rhs_literal));
        let d = combo(&c);
        rel_rows.push(nonzero.iter().map(|i| c.get(i).copied().unwrap_or(0)).collect::<Vec<i64>>());
        relations.push(PointRelation {
            ray,
            lhs: marks.clone(),
            holds: cg.is_principal(&d),
            literal_holds: cg.is_principal(&combo(&cl)),
            witness: cg.class(&d),
            rhs,
            rhs_literal,
        });
    }
    // generation: principal rows and the bundle divisors span Z^rays
    let mut rows = cg.principal.clone();
    rows.extend(nonzero.iter().map(|&i| divisors[i].clone()));
    let g = smith(&rows, fan.rays.len());
    let generates = g.rank == fan.rays.len() && g.diag.iter().all(|&d| d == 1);
    // completeness: the relation lattice is saturated of full kernel rank
    let skip = cg.torsion().len();
    let class_rows: Vec<Vec<i64>> = nonzero.iter().map(|&i| cg.class(&divisors[i])[skip..].to_vec()).collect();
    let width = class_rows.first().map_or(0, |r| r.len());
    let image_rank = if width == 0 { 0 } else { smith(&class_rows, width).rank };
    let kernel_rank = nonzero.len() - image_rank;
    let complete = if rel_rows.is_empty() {
        kernel_rank == 0
    } else {
        let r = smith(&rel_rows, nonzero.len());
        r.rank == kernel_rank && r.diag.iter().all(|&d| d == 1)
    };
    Ok(RelationsReport {
        relations,
        class_rank: cg.rank(),
        torsion: cg.torsion(),
        nonzero_vertices: nonzero.len(),
        interior_points: report.points.len(),
        generates,
        complete,
    })
}
