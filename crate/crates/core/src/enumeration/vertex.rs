//! Vertex enumeration: every LTF's feasible region `f(x)(w·x − θ) ≥ 1` has a
//! vertex fixed by `n + 1` tight constraints (`n` in zero-threshold mode), so
//! solving `a_j·u = s_j` over all point subsets and sign patterns reaches
//! every LTF. Points that land exactly on the hyperplane are resolved by the
//! lexicographic perturbation `u + ε(1, ε, ε², …)`.

use std::collections::HashMap;

use itertools::Itertools;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{check_dim, Result};
use crate::exact::Q128;
use crate::hypercube::TruthTable;

/// Largest dimension for all-LTF vertex enumeration (one more in
/// zero-threshold mode).
pub const MAX_VERTEX_DIM: usize = 4;

fn inverse(a: &[Vec<i64>]) -> Option<Vec<Vec<Q128>>> {
    let k = a.len();
    let mut m: Vec<Vec<Q128>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Q128> = row.iter().map(|&v| Q128::from_integer(v.into())).collect();
            r.extend((0..k).map(|j| if i == j { Q128::one() } else { Q128::zero() }));
            r
        })
        .collect();
    for col in 0..k {
        let p = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, p);
        let piv = m[col][col];
        m[col].iter_mut().for_each(|v| *v /= piv);
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                m[r].iter_mut().zip(&pivot_row).for_each(|(v, p)| *v -= f * p);
            }
        }
    }
    Some(m.into_iter().map(|r| r[k..].to_vec()).collect())
}

/// Scales a rational matrix to integers by a positive factor.
fn integer_adjugate(inv: &[Vec<Q128>]) -> Vec<Vec<i128>> {
    let l = inv
        .iter()
        .flatten()
        .fold(1i128, |acc, q| acc.lcm(q.denom()));
    inv.iter()
        .map(|r| r.iter().map(|q| q.numer() * (l / q.denom())).collect())
        .collect()
}

fn row(b: usize, n: usize, zero_threshold: bool) -> Vec<i64> {
    let mut r: Vec<i64> = (0..n).map(|i| if b >> i & 1 == 1 { 1 } else { -1 }).collect();
    if !zero_threshold {
        r.push(-1);
    }
    r
}

fn primitive(v: &[i128]) -> Vec<i128> {
    let g = v.iter().fold(0i128, |g, x| g.gcd(x));
    if g <= 1 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

/// All LTFs (or zero-threshold nondegenerate LTFs) with integer witnesses.
pub fn vertex_enumeration(n: usize, zero_threshold: bool) -> Result<Vec<(TruthTable, Vec<i64>, i64)>> {
    check_dim(n, if zero_threshold { MAX_VERTEX_DIM + 1 } else { MAX_VERTEX_DIM })?;
    let size = 1usize << n;
    let rows: Vec<Vec<i64>> = (0..size).map(|b| row(b, n, zero_threshold)).collect();
    let (candidates, k): (Vec<usize>, usize) = if zero_threshold {
        ((size / 2..size).collect(), n)
    } else {
        ((0..size).collect(), n + 1)
    };
    let subsets: Vec<Vec<usize>> = candidates.into_iter().combinations(k).collect();
    let local: Vec<HashMap<TruthTable, Vec<i128>>> = subsets
        .par_iter()
        .map(|subset| {
            let mut found: HashMap<TruthTable, Vec<i128>> = HashMap::new();
            let a: Vec<Vec<i64>> = subset.iter().map(|&b| rows[b].clone()).collect();
            let Some(inv) = inverse(&a) else {
                return found;
            };
            let adj = integer_adjugate(&inv);
            for signs in 0..1u32 << k {
                let u: Vec<i128> = (0..k)
                    .map(|j| {
                        (0..k)
                            .map(|m| if signs >> m & 1 == 1 { adj[j][m] } else { -adj[j][m] })
                            .sum()
                    })
                    .collect();
                let mut t = TruthTable::new(n).unwrap();
                let mut tied = false;
                for (b, r) in rows.iter().enumerate() {
                    let v: i128 = u.iter().zip(r).map(|(x, &y)| x * i128::from(y)).sum();
                    let pos = if v == 0 {
                        tied = true;
                        b & 1 == 1
                    } else {
                        v > 0
                    };
                    t.set(b, pos);
                }
                let witness = if tied {
                    let mut p: Vec<i128> = u.iter().map(|x| 2 * x).collect();
                    p[0] += 1;
                    primitive(&p)
                } else {
                    primitive(&u)
                };
                found
                    .entry(t)
                    .and_modify(|w| {
                        if witness < *w {
                            *w = witness.clone();
                        }
                    })
                    .or_insert(witness);
            }
            found
        })
        .collect();
    let mut merged: HashMap<TruthTable, Vec<i128>> = HashMap::new();
    for m in local {
        for (t, w) in m {
            merged
                .entry(t)
                .and_modify(|cur| {
                    if w < *cur {
                        *cur = w.clone();
                    }
                })
                .or_insert(w);
        }
    }
    let mut out: Vec<(TruthTable, Vec<i64>, i64)> = merged
        .into_iter()
        .map(|(t, u)| {
            let u: Vec<i64> = u.iter().map(|&x| i64::try_from(x).expect("small witness")).collect();
            if zero_threshold {
                (t, u, 0)
            } else {
                (t, u[..n].to_vec(), u[n])
            }
        })
        .collect();
    out.sort_by(|a, b| a.0.lex_cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::scan::{scan_all, verified};

    #[test]
    fn agrees_with_scan() {
        for n in 1..=3 {
            for zt in [false, true] {
                let a = scan_all(n, zt).unwrap();
                let b = vertex_enumeration(n, zt).unwrap();
                let ta: Vec<_> = a.iter().map(|r| r.0.clone()).collect();
                let tb: Vec<_> = b.iter().map(|r| r.0.clone()).collect();
                assert_eq!(ta, tb, "n={n} zero_threshold={zt}");
                for (t, w, th) in &b {
                    assert!(verified(t, w, *th));
                }
            }
        }
    }
}
