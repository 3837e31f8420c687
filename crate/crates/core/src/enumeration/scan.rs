//! Separability by exact linear programming, and the full function scan.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{check_dim, Result};
use crate::exact::{primitive_integer_vector, LinearSystem};
use crate::hypercube::{point, TruthTable};
use crate::ltf::integer_table;

/// Largest dimension for the full scan in all-LTF mode (one more in
/// zero-threshold mode, where oddness halves the free values).
pub const MAX_SCAN_DIM: usize = 4;

/// Largest dimension accepted by [`separability_witness`].
pub const MAX_WITNESS_DIM: usize = 7;

/// `true` when `f` is monotone (in either direction) in every coordinate.
pub fn is_unate(t: &TruthTable) -> bool {
    let n = t.n();
    (0..n).all(|i| {
        let step = 1usize << i;
        let (mut up, mut down) = (true, true);
        for b in (0..t.len()).filter(|b| b & step == 0) {
            let (lo, hi) = (t.get(b), t.get(b | step));
            up &= !lo || hi;
            down &= lo || !hi;
        }
        up || down
    })
}

/// `f(−x) = −f(x)` for all `x`.
pub fn is_odd(t: &TruthTable) -> bool {
    let mask = t.len() - 1;
    (0..t.len() / 2).all(|b| t.get(b) != t.get(!b & mask))
}

/// Integer `(w, θ)` with `f(x)(w·x − θ) > 0` for every `x`, if one exists.
pub fn separability_witness(t: &TruthTable) -> Result<Option<(Vec<i64>, i64)>> {
    let n = t.n();
    check_dim(n, MAX_WITNESS_DIM)?;
    if !is_unate(t) {
        return Ok(None);
    }
    let mut sys = LinearSystem::new(n + 1);
    for b in 0..t.len() {
        let s = i64::from(t.value(b));
        let mut row: Vec<i64> = point(b, n).iter().map(|&x| s * i64::from(x)).collect();
        row.push(-s);
        sys.at_least(row, 1);
    }
    Ok(sys.solve().and_then(|u| {
        let ints = to_i64(&primitive_integer_vector(&u))?;
        let (w, theta) = (ints[..n].to_vec(), ints[n]);
        verified(t, &w, theta).then_some((w, theta))
    }))
}

/// Integer `w` with `f(x)·(w·x) > 0` for every `x`, if one exists.
pub fn zero_threshold_witness(t: &TruthTable) -> Result<Option<Vec<i64>>> {
    let n = t.n();
    check_dim(n, MAX_WITNESS_DIM)?;
    if !is_odd(t) || !is_unate(t) {
        return Ok(None);
    }
    let mut sys = LinearSystem::new(n);
    // Oddness makes the constraints at x and −x identical.
    for b in t.len() / 2..t.len() {
        let s = i64::from(t.value(b));
        sys.at_least(point(b, n).iter().map(|&x| s * i64::from(x)).collect(), 1);
    }
    Ok(sys.solve().and_then(|u| {
        let w = to_i64(&primitive_integer_vector(&u))?;
        verified(t, &w, 0).then_some(w)
    }))
}

fn to_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}

/// Checks that `(w, θ)` reproduces `t` with no point on the hyperplane.
pub fn verified(t: &TruthTable, w: &[i64], theta: i64) -> bool {
    let wi: Vec<i128> = w.iter().map(|&v| i128::from(v)).collect();
    let vals = crate::ltf::integer_form_values(&wi);
    let theta = i128::from(theta);
    vals.iter().all(|&v| v != theta)
        && integer_table(&wi, theta).map_or(false, |u| &u == t)
}

/// All `n`-variable LTFs (or odd nondegenerate zero-threshold LTFs) by
/// testing every Boolean function, with witnesses.
pub fn scan_all(n: usize, zero_threshold: bool) -> Result<Vec<(TruthTable, Vec<i64>, i64)>> {
    check_dim(n, if zero_threshold { MAX_SCAN_DIM + 1 } else { MAX_SCAN_DIM })?;
    let size = 1usize << n;
    let half = size / 2;
    let count: u64 = if zero_threshold { 1 << half } else { 1 << size };
    let build = |code: u64| -> TruthTable {
        if zero_threshold {
            // Free values on the upper half; the lower half is forced by oddness.
            let mut t = TruthTable::new(n).unwrap();
            for j in 0..half {
                let b = half + j;
                let v = code >> j & 1 == 1;
                t.set(b, v);
                t.set(!b & (size - 1), !v);
            }
            t
        } else {
            TruthTable::from_u64(n, code)
        }
    };
    let found: Vec<Option<(TruthTable, Vec<i64>, i64)>> = (0..count)
        .into_par_iter()
        .map(|code| {
            let t = build(code);
            if zero_threshold {
                zero_threshold_witness(&t).map(|o| o.map(|w| (t, w, 0)))
            } else {
                separability_witness(&t).map(|o| o.map(|(w, th)| (t, w, th)))
            }
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<_> = found.into_iter().flatten().collect();
    out.sort_by(|a, b| a.0.lex_cmp(&b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witness_examples() {
        let xor = TruthTable::from_signs(&[1, -1, -1, 1]).unwrap();
        assert!(separability_witness(&xor).unwrap().is_none());
        let and = TruthTable::from_signs(&[-1, -1, -1, 1]).unwrap();
        let (w, th) = separability_witness(&and).unwrap().unwrap();
        assert!(verified(&and, &w, th));
        let maj = TruthTable::majority(3).unwrap();
        let w = zero_threshold_witness(&maj).unwrap().unwrap();
        assert_eq!(w, vec![1, 1, 1]);
        let (w, th) = separability_witness(&maj).unwrap().unwrap();
        assert!(verified(&maj, &w, th));
    }

    #[test]
    fn unate_and_odd() {
        assert!(!is_unate(&TruthTable::from_signs(&[1, -1, -1, 1]).unwrap()));
        assert!(is_unate(&TruthTable::majority(5).unwrap()));
        assert!(is_odd(&TruthTable::majority(3).unwrap()));
        assert!(!is_odd(&TruthTable::majority(4).unwrap()));
    }

    #[test]
    fn small_scans() {
        assert_eq!(scan_all(1, false).unwrap().len(), 4);
        assert_eq!(scan_all(2, false).unwrap().len(), 14);
        assert_eq!(scan_all(3, false).unwrap().len(), 104);
        assert_eq!(scan_all(2, true).unwrap().len(), 4);
        assert_eq!(scan_all(3, true).unwrap().len(), 14);
    }
}
