use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with
/// `d_1 | d_2 | ... | d_t`, all nonnegative, zeros trailing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let t = self.d.rows().min(self.d.cols());
        (0..t)
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        fn apply(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
            let (s, d) = if src < dst {
                let (lo, hi) = m.split_at_mut(dst);
                (&lo[src], &mut hi[0])
            } else {
                let (lo, hi) = m.split_at_mut(src);
                (&hi[0], &mut lo[dst])
            };
            for (x, y) in d.iter_mut().zip(s) {
                if !y.is_zero() {
                    *x -= q * y;
                }
            }
        }
        apply(&mut self.a, dst, src, q);
        if let Some(u) = &mut self.u {
            apply(u, dst, src, q);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        fn apply(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
            for row in m {
                if !row[src].is_zero() {
                    let delta = q * &row[src];
                    row[dst] -= delta;
                }
            }
        }
        apply(&mut self.a, dst, src, q);
        if let Some(v) = &mut self.v {
            apply(v, dst, src, q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }

    /// Smallest-magnitude nonzero entry in the trailing block, ties by (row, col).
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].magnitude() <= x.magnitude() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let rows = self.a.len();
        let cols = self.a.first().map_or(0, Vec::len);
        for t in 0..rows.min(cols) {
            loop {
                let Some((pr, pc)) = self.pivot(t) else {
                    return;
                };
                self.swap_rows(t, pr);
                self.swap_cols(t, pc);

                let mut clean = true;
                for i in t + 1..rows {
                    if !self.a[i][t].is_zero() {
                        let q = &self.a[i][t] / &self.a[t][t];
                        self.row_axpy(i, t, &q);
                        clean &= self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..cols {
                    if !self.a[t][j].is_zero() {
                        let q = &self.a[t][j] / &self.a[t][t];
                        self.col_axpy(j, t, &q);
                        clean &= self.a[t][j].is_zero();
                    }
                }
                if !clean {
                    continue;
                }

                // Enforce divisibility: pull an offending row into row t.
                let p = self.a[t][t].clone();
                let offender =
                    (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&self.a[i][j] % &p).is_zero()));
                match offender {
                    Some(i) => {
                        let minus_one = BigInt::from(-1);
                        self.row_axpy(t, i, &minus_one);
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    IntMatrix::identity(n).to_rows()
}

fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMatrix {
    let r = rows.len();
    IntMatrix::new(r, cols, rows.into_iter().flatten().collect()).expect("rectangular")
}

/// Smith normal form with deterministic transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let mut w = Work {
        a: m.to_rows(),
        u: Some(identity_rows(m.rows())),
        v: Some(identity_rows(m.cols())),
    };
    w.run();
    SnfResult {
        u: from_rows(w.u.take().unwrap(), m.rows()),
        v: from_rows(w.v.take().unwrap(), m.cols()),
        d: from_rows(w.a, m.cols()),
    }
}

/// Nonzero invariant factors only, skipping the transform bookkeeping.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<BigInt> {
    let mut w = Work {
        a: m.to_rows(),
        u: None,
        v: None,
    };
    w.run();
    let t = m.rows().min(m.cols());
    (0..t)
        .map(|i| w.a[i][i].clone())
        .take_while(|x| !x.is_zero())
        .collect()
}
