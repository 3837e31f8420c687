//! Chamber walk: breadth-first search over the cells of the arrangement
//! `{w·x = θ}` that meet the open proper cone `w_1 > w_2 > … > w_n > 0`.
//!
//! Every orbit under permutations and negations has a member with a weight
//! vector inside that cone, and the cone is convex, so the cells meeting it
//! form a connected graph under wall crossings. Inside the cone each function
//! is monotone for the order `y ≥ x ⇔ every prefix sum of y − x is ≥ 0`, so
//! only order-minimal positive and order-maximal negative points can sit on a
//! crossable wall.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::exact::{primitive_integer_vector, LinearSystem};
use crate::hypercube::TruthTable;

use super::scan::verified;

/// Largest dimension supported by [`chamber_walk`].
pub const MAX_WALK_DIM: usize = 7;

fn coord(b: usize, i: usize) -> i64 {
    if b >> i & 1 == 1 {
        1
    } else {
        -1
    }
}

/// Lower and upper covers of every point in the prefix-sum order.
fn covers(n: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let size = 1usize << n;
    let mut lower = vec![Vec::new(); size];
    let mut upper = vec![Vec::new(); size];
    for b in 0..size {
        // Raise the last coordinate.
        if b >> (n - 1) & 1 == 0 {
            let c = b | 1 << (n - 1);
            upper[b].push(c);
            lower[c].push(b);
        }
        // Move a +1 one place towards the front.
        for i in 0..n - 1 {
            if b >> i & 1 == 0 && b >> (i + 1) & 1 == 1 {
                let c = b ^ (1 << i) ^ (1 << (i + 1));
                upper[b].push(c);
                lower[c].push(b);
            }
        }
    }
    (lower, upper)
}

struct Frontier {
    min_pos: Vec<usize>,
    max_neg: Vec<usize>,
}

fn frontier(t: &TruthTable, lower: &[Vec<usize>], upper: &[Vec<usize>]) -> Frontier {
    let mut f = Frontier {
        min_pos: Vec::new(),
        max_neg: Vec::new(),
    };
    for b in 0..t.len() {
        if t.get(b) {
            if lower[b].iter().all(|&c| !t.get(c)) {
                f.min_pos.push(b);
            }
        } else if upper[b].iter().all(|&c| t.get(c)) {
            f.max_neg.push(b);
        }
    }
    f
}

fn cone_constraints(sys: &mut LinearSystem, n: usize, dim: usize) {
    for i in 0..n {
        let mut r = vec![0i64; dim];
        r[i] = 1;
        if i + 1 < n {
            r[i + 1] = -1;
        }
        sys.at_least(r, 1);
    }
}

fn point_row(b: usize, n: usize, zero_threshold: bool) -> Vec<i64> {
    let mut r: Vec<i64> = (0..n).map(|i| coord(b, i)).collect();
    if !zero_threshold {
        r.push(-1);
    }
    r
}

/// A point of the wall through `x` strictly inside the cone, if any.
fn wall_point(t: &TruthTable, fr: &Frontier, x: usize, zero_threshold: bool) -> Option<Vec<BigRational>> {
    let n = t.n();
    let dim = if zero_threshold { n } else { n + 1 };
    let mut sys = LinearSystem::new(dim);
    sys.equal(point_row(x, n, zero_threshold), 0);
    let neg_side: &[usize] = if zero_threshold { &[] } else { &fr.max_neg };
    for &y in fr.min_pos.iter().chain(neg_side) {
        if y == x {
            continue;
        }
        let s = if t.get(y) { 1 } else { -1 };
        sys.at_least(point_row(y, n, zero_threshold).iter().map(|v| s * v).collect(), 1);
    }
    cone_constraints(&mut sys, n, dim);
    sys.solve()
}

fn to_witness(u: &[BigRational], n: usize, zero_threshold: bool) -> Result<(Vec<i64>, i64)> {
    let ints: Option<Vec<i64>> = primitive_integer_vector(u).iter().map(ToPrimitive::to_i64).collect();
    let ints = ints.ok_or_else(|| Error::Domain("witness does not fit in 64 bits".into()))?;
    Ok(if zero_threshold {
        (ints, 0)
    } else {
        (ints[..n].to_vec(), ints[n])
    })
}

/// Neighbours of `t` across crossable walls, with witnesses.
fn neighbours(
    t: &TruthTable,
    lower: &[Vec<usize>],
    upper: &[Vec<usize>],
    zero_threshold: bool,
) -> Result<Vec<(TruthTable, Vec<i64>, i64)>> {
    let n = t.n();
    let fr = frontier(t, lower, upper);
    let mask = t.len() - 1;
    let candidates: Vec<usize> = if zero_threshold {
        fr.min_pos.clone()
    } else {
        fr.min_pos.iter().chain(&fr.max_neg).copied().collect()
    };
    let mut out = Vec::new();
    for x in candidates {
        let Some(p) = wall_point(t, &fr, x, zero_threshold) else {
            continue;
        };
        let mut g = t.clone();
        let new_val = !t.get(x);
        g.set(x, new_val);
        let sgn = BigRational::from_integer(if new_val { 1 } else { -1 }.into());
        let u: Vec<BigRational> = if zero_threshold {
            g.set(!x & mask, !new_val);
            // w0 + g(x)·x/(2n): |x·y| ≤ n − 2 for y ≠ ±x keeps other margins positive.
            let step = sgn / BigRational::from_integer((2 * n as i64).into());
            p.iter()
                .enumerate()
                .map(|(i, wi)| wi + &step * BigRational::from_integer(coord(x, i).into()))
                .collect()
        } else {
            // Shift θ by half a unit towards the new side.
            let mut u = p.clone();
            u[n] -= sgn / BigRational::from_integer(2.into());
            u
        };
        debug_assert!(!u.iter().all(Zero::is_zero));
        let (w, th) = to_witness(&u, n, zero_threshold)?;
        if !verified(&g, &w, th) {
            return Err(Error::StrategyDisagreement(format!(
                "walk produced an invalid witness {w:?}; {th} for {g:?}"
            )));
        }
        out.push((g, w, th));
    }
    Ok(out)
}

/// One table per cell meeting the open proper cone, with witnesses.
pub fn chamber_walk(n: usize, zero_threshold: bool) -> Result<Vec<(TruthTable, Vec<i64>, i64)>> {
    check_dim(n, MAX_WALK_DIM)?;
    if n == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let (lower, upper) = covers(n);
    let (w0, th0): (Vec<i64>, i64) = if zero_threshold {
        ((0..n).map(|i| 1i64 << (n - 1 - i)).collect(), 0)
    } else {
        ((0..n).map(|i| 1i64 << (n - i)).collect(), 1)
    };
    let wi: Vec<i128> = w0.iter().map(|&v| i128::from(v)).collect();
    let root = crate::ltf::integer_table(&wi, i128::from(th0))?;
    let mut seen: HashMap<TruthTable, (Vec<i64>, i64)> = HashMap::new();
    seen.insert(root.clone(), (w0, th0));
    let mut level = vec![root];
    while !level.is_empty() {
        let found: Vec<Vec<(TruthTable, Vec<i64>, i64)>> = level
            .par_iter()
            .map(|t| neighbours(t, &lower, &upper, zero_threshold))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for (g, w, th) in found.into_iter().flatten() {
            if !seen.contains_key(&g) {
                seen.insert(g.clone(), (w, th));
                next.push(g);
            }
        }
        next.sort_by(|a, b| a.lex_cmp(b));
        level = next;
    }
    let mut out: Vec<_> = seen.into_iter().map(|(t, (w, th))| (t, w, th)).collect();
    out.sort_by(|a, b| a.0.lex_cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dominates(y: usize, x: usize, n: usize) -> bool {
        let mut p = 0i64;
        for i in 0..n {
            p += coord(y, i) - coord(x, i);
            if p < 0 {
                return false;
            }
        }
        true
    }

    #[test]
    fn covers_generate_the_prefix_order() {
        for n in 1..=5 {
            let (lower, _) = covers(n);
            let size = 1usize << n;
            // Reflexive-transitive closure of the cover relation.
            let mut reach = vec![vec![false; size]; size];
            for b in 0..size {
                reach[b][b] = true;
            }
            for _ in 0..size {
                for b in 0..size {
                    for &c in &lower[b] {
                        for a in 0..size {
                            if reach[c][a] {
                                reach[b][a] = true;
                            }
                        }
                    }
                }
            }
            for y in 0..size {
                for x in 0..size {
                    assert_eq!(reach[y][x], dominates(y, x, n), "n={n} y={y} x={x}");
                }
            }
        }
    }
}
