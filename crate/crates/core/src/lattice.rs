//! Integer points of the plane and a few exact geometric predicates.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// An integer pair: a lattice point, a deck translation or a homology class.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct V2(pub i64, pub i64);

impl V2 {
    pub const ZERO: V2 = V2(0, 0);

    pub fn x(self) -> i64 {
        self.0
    }

    pub fn y(self) -> i64 {
        self.1
    }

    pub fn dot(self, o: V2) -> i64 {
        self.0 * o.0 + self.1 * o.1
    }

    /// `det[self | o]`, positive when `o` lies counterclockwise of `self`.
    pub fn cross(self, o: V2) -> i64 {
        self.0 * o.1 - self.1 * o.0
    }

    pub fn is_zero(self) -> bool {
        self == V2::ZERO
    }

    pub fn gcd(self) -> i64 {
        gcd(self.0, self.1)
    }
}

impl fmt::Debug for V2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl fmt::Display for V2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl Add for V2 {
    type Output = V2;
    fn add(self, o: V2) -> V2 {
        V2(self.0 + o.0, self.1 + o.1)
    }
}

impl AddAssign for V2 {
    fn add_assign(&mut self, o: V2) {
        self.0 += o.0;
        self.1 += o.1;
    }
}

impl Sub for V2 {
    type Output = V2;
    fn sub(self, o: V2) -> V2 {
        V2(self.0 - o.0, self.1 - o.1)
    }
}

impl SubAssign for V2 {
    fn sub_assign(&mut self, o: V2) {
        self.0 -= o.0;
        self.1 -= o.1;
    }
}

impl Neg for V2 {
    type Output = V2;
    fn neg(self) -> V2 {
        V2(-self.0, -self.1)
    }
}

impl Mul<V2> for i64 {
    type Output = V2;
    fn mul(self, v: V2) -> V2 {
        V2(self * v.0, self * v.1)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Twice the signed area of the triangle `a b c`.
pub fn orient(a: V2, b: V2, c: V2) -> i64 {
    (b - a).cross(c - a)
}

/// Convex hull, counterclockwise, corners only (collinear points dropped),
/// starting from the lexicographically least point.
pub fn convex_hull(points: &[V2]) -> Vec<V2> {
    let mut pts: Vec<V2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<V2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && orient(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<V2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && orient(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area of a counterclockwise polygon.
pub fn twice_area(poly: &[V2]) -> i64 {
    let n = poly.len();
    (0..n).map(|i| poly[i].cross(poly[(i + 1) % n])).sum()
}

/// Position of `p` relative to a counterclockwise convex polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

pub fn locate(poly: &[V2], p: V2) -> Location {
    let n = poly.len();
    if n == 1 {
        return if poly[0] == p { Location::Boundary } else { Location::Outside };
    }
    if n == 2 {
        let on = orient(poly[0], poly[1], p) == 0
            && (p - poly[0]).dot(p - poly[1]) <= 0;
        return if on { Location::Boundary } else { Location::Outside };
    }
    let mut on_edge = false;
    for i in 0..n {
        let s = orient(poly[i], poly[(i + 1) % n], p);
        if s < 0 {
            return Location::Outside;
        }
        if s == 0 {
            on_edge = true;
        }
    }
    if on_edge {
        Location::Boundary
    } else {
        Location::Inside
    }
}

/// Whether the closed segment `p q` contains `r`.
pub fn on_segment(p: V2, q: V2, r: V2) -> bool {
    orient(p, q, r) == 0 && (r - p).dot(r - q) <= 0
}

/// Integer 2x2 determinant of the rows `a`, `b`.
pub fn det2(a: V2, b: V2) -> i64 {
    a.cross(b)
}
