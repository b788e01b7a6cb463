//! Exact feasibility for systems of rational linear inequalities.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A point `x` with `rows[i]·x ≥ rhs[i]` for all `i`, or `None` if the
/// system is infeasible. Phase one of the simplex method with Bland's rule
/// on `x = p − q`, `p, q ≥ 0`.
pub(crate) fn feasible(rows: &[Vec<BigRational>], rhs: &[BigRational], n: usize) -> Option<Vec<BigRational>> {
    let m = rows.len();
    if m == 0 {
        return Some(vec![BigRational::zero(); n]);
    }
    // columns: p (n), q (n), surplus (m), artificial (m), rhs
    let width = 2 * n + 2 * m + 1;
    let rhs_col = width - 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
        let flip = b.is_negative();
        let sign = |x: BigRational| if flip { -x } else { x };
        let mut r = vec![BigRational::zero(); width];
        for j in 0..n {
            r[j] = sign(row[j].clone());
            r[n + j] = sign(-row[j].clone());
        }
        r[2 * n + i] = sign(-BigRational::from_integer(1.into()));
        r[2 * n + m + i] = BigRational::from_integer(1.into());
        r[rhs_col] = sign(b.clone());
        t.push(r);
    }
    // reduced costs of minimizing the sum of artificials
    let mut obj = vec![BigRational::zero(); width];
    for r in &t {
        for j in 0..2 * n + m {
            obj[j] -= &r[j];
        }
        obj[rhs_col] -= &r[rhs_col];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (0..m).map(|i| 2 * n + m + i).collect();
    loop {
        let Some(enter) = (0..rhs_col).find(|&j| t[m][j].is_negative()) else { break };
        let mut leave: Option<usize> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][rhs_col] / &t[i][enter];
            leave = match leave {
                None => Some(i),
                Some(l) => {
                    let best = &t[l][rhs_col] / &t[l][enter];
                    if ratio < best || (ratio == best && basis[i] < basis[l]) {
                        Some(i)
                    } else {
                        Some(l)
                    }
                }
            };
        }
        // phase one is bounded below by zero
        let l = leave.expect("phase one cannot be unbounded");
        let pivot = t[l][enter].clone();
        for x in t[l].iter_mut() {
            *x /= &pivot;
        }
        let prow = t[l].clone();
        for (i, r) in t.iter_mut().enumerate() {
            if i == l || r[enter].is_zero() {
                continue;
            }
            let f = r[enter].clone();
            for (x, p) in r.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        basis[l] = enter;
    }
    if !t[m][rhs_col].is_zero() {
        return None;
    }
    let mut y = vec![BigRational::zero(); 2 * n];
    for (i, &b) in basis.iter().enumerate() {
        if b < 2 * n {
            y[b] = t[i][rhs_col].clone();
        }
    }
    Some((0..n).map(|j| &y[j] - &y[n + j]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn satisfies(rows: &[Vec<BigRational>], rhs: &[BigRational], x: &[BigRational]) -> bool {
        rows.iter().zip(rhs).all(|(r, b)| r.iter().zip(x).map(|(a, v)| a * v).sum::<BigRational>() >= *b)
    }

    #[test]
    fn small_systems() {
        // x ≥ 2, y ≥ −1, x + y ≤ 3
        let rows = vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(-1), q(-1)]];
        let rhs = vec![q(2), q(-1), q(-3)];
        let x = feasible(&rows, &rhs, 2).unwrap();
        assert!(satisfies(&rows, &rhs, &x));
        // x ≥ 1 and −x ≥ 0
        assert_eq!(feasible(&[vec![q(1)], vec![q(-1)]], &[q(1), q(0)], 1), None);
        assert_eq!(feasible(&[], &[], 2), Some(vec![q(0), q(0)]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn solutions_satisfy_and_witnesses_stay_feasible(
                a in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 1..7),
                b in proptest::collection::vec(-6i64..=6, 7),
                x0 in proptest::collection::vec(-3i64..=3, 3),
            ) {
                let rows: Vec<Vec<BigRational>> = a.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
                let rhs: Vec<BigRational> = b[..rows.len()].iter().map(|&v| q(v)).collect();
                if let Some(x) = feasible(&rows, &rhs, 3) {
                    prop_assert!(satisfies(&rows, &rhs, &x));
                }
                // a system built around a known point is always feasible
                let x0: Vec<BigRational> = x0.iter().map(|&v| q(v)).collect();
                let tight: Vec<BigRational> = rows.iter().map(|r| r.iter().zip(&x0).map(|(a, v)| a * v).sum()).collect();
                let x = feasible(&rows, &tight, 3);
                prop_assert!(x.is_some());
                prop_assert!(satisfies(&rows, &tight, &x.unwrap()));
            }
        }
    }
}
