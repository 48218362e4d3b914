//! Smith normal form over the integers, tracking column operations.

/// `U · A · V = diag(d)` for some unimodular `U`; only `V` is kept.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<i64>,
    /// Column transform, `n × n`, unimodular.
    pub v: Vec<Vec<i64>>,
    pub rank: usize,
}

impl Smith {
    /// Whether the row vector `x` lies in the row lattice of the input.
    pub fn in_row_lattice(&self, x: &[i64]) -> bool {
        let y = self.transform(x);
        y.iter().enumerate().all(|(j, &c)| if j < self.rank { c % self.diag[j] == 0 } else { c == 0 })
    }

    /// `x · V`.
    pub fn transform(&self, x: &[i64]) -> Vec<i64> {
        let n = self.v.len();
        (0..n).map(|j| (0..n).map(|i| x[i] * self.v[i][j]).sum()).collect()
    }

    /// Canonical coordinates of `x` modulo the row lattice: torsion parts
    /// reduced modulo their invariant factor, then the free part.
    pub fn class_of(&self, x: &[i64]) -> Vec<i64> {
        let y = self.transform(x);
        let mut out = Vec::new();
        for j in 0..self.rank {
            if self.diag[j] != 1 {
                out.push(y[j].rem_euclid(self.diag[j]));
            }
        }
        out.extend_from_slice(&y[self.rank..]);
        out
    }

    /// Invariant factors different from 1 (torsion of the quotient).
    pub fn torsion(&self) -> Vec<i64> {
        self.diag[..self.rank].iter().copied().filter(|&d| d != 1).collect()
    }
}

pub fn smith(a: &[Vec<i64>], n: usize) -> Smith {
    let m = a.len();
    let mut a: Vec<Vec<i64>> = a.to_vec();
    let mut v: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the remaining block
        let Some((pi, pj)) = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        let mut clean = true;
        for i in t + 1..m {
            let q = a[i][t] / a[t][t];
            if q != 0 {
                for j in t..n {
                    a[i][j] -= q * a[t][j];
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..n {
            let q = a[t][j] / a[t][t];
            if q != 0 {
                add_col(&mut a, &mut v, j, t, -q);
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        let p = a[t][t];
        if let Some(i) = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0)) {
            for j in t..n {
                a[t][j] += a[i][j];
            }
            continue;
        }
        if p < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
        }
        t += 1;
    }
    let diag = (0..t).map(|i| a[i][i]).collect();
    Smith { diag, v, rank: t }
}

fn swap_cols(a: &mut [Vec<i64>], v: &mut [Vec<i64>], x: usize, y: usize) {
    for row in a.iter_mut().chain(v.iter_mut()) {
        row.swap(x, y);
    }
}

/// Column `dst += k · column src`.
fn add_col(a: &mut [Vec<i64>], v: &mut [Vec<i64>], dst: usize, src: usize, k: i64) {
    for row in a.iter_mut().chain(v.iter_mut()) {
        row[dst] += k * row[src];
    }
}
