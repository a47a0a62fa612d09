//! Checked machine-integer fast path for rank computations.
//!
//! Returns `None` on overflow so the caller can redo the work with big integers.

macro_rules! bareiss {
    ($t:ty, $rows:expr, $cols:expr) => {{
        let rows: &[&[i64]] = $rows;
        let cols: usize = $cols;
        let n = rows.len();
        let mut stack = [0 as $t; 64];
        let mut heap = Vec::new();
        let a: &mut [$t] = if n * cols <= stack.len() {
            &mut stack[..n * cols]
        } else {
            heap.resize(n * cols, 0 as $t);
            &mut heap
        };
        for (i, r) in rows.iter().enumerate() {
            debug_assert_eq!(r.len(), cols);
            for (j, &x) in r.iter().enumerate() {
                a[i * cols + j] = x as $t;
            }
        }
        let mut rank = 0;
        let mut prev: $t = 1;
        let mut overflow = false;
        'outer: for c in 0..cols {
            if rank == n {
                break;
            }
            let Some(p) = (rank..n).find(|&i| a[i * cols + c] != 0) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    a.swap(p * cols + j, rank * cols + j);
                }
            }
            let pivot = a[rank * cols + c];
            for i in rank + 1..n {
                let lead = a[i * cols + c];
                for j in c + 1..cols {
                    let v = pivot
                        .checked_mul(a[i * cols + j])
                        .zip(lead.checked_mul(a[rank * cols + j]))
                        .and_then(|(x, y)| x.checked_sub(y));
                    match v {
                        Some(v) => a[i * cols + j] = v / prev,
                        None => {
                            overflow = true;
                            break 'outer;
                        }
                    }
                }
                a[i * cols + c] = 0;
            }
            prev = pivot;
            rank += 1;
        }
        (!overflow).then_some(rank)
    }};
}

/// Rank of the given rows (all of length `cols`) by Bareiss elimination,
/// in `i64` and then `i128` if that overflows. One or two rows and full
/// 3×3 matrices are handled in closed form.
pub fn rank_checked(rows: &[&[i64]], cols: usize) -> Option<usize> {
    match rows {
        [] => return Some(0),
        [a] => return Some(usize::from(a.iter().any(|&x| x != 0))),
        [a, b] => return Some(rank_two(a, b)),
        [a, b, c] if cols == 3 && det3(a, b, c).is_some_and(|d| d != 0) => {
            return Some(3);
        }
        _ => {}
    }
    bareiss!(i64, rows, cols).or_else(|| bareiss!(i128, rows, cols))
}

fn rank_two(a: &[i64], b: &[i64]) -> usize {
    let nonzero = |v: &[i64]| v.iter().any(|&x| x != 0);
    match (nonzero(a), nonzero(b)) {
        (false, false) => return 0,
        (true, false) | (false, true) => return 1,
        _ => {}
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            // i64 × i64 always fits in i128
            if a[i] as i128 * b[j] as i128 != a[j] as i128 * b[i] as i128 {
                return 2;
            }
        }
    }
    1
}

fn det3(a: &[i64], b: &[i64], c: &[i64]) -> Option<i128> {
    let minor = |i: usize, j: usize| b[i] as i128 * c[j] as i128 - b[j] as i128 * c[i] as i128;
    let t0 = (a[0] as i128).checked_mul(minor(1, 2))?;
    let t1 = (a[1] as i128).checked_mul(minor(0, 2))?;
    let t2 = (a[2] as i128).checked_mul(minor(0, 1))?;
    t0.checked_sub(t1)?.checked_add(t2)
}
