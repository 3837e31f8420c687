//! Canonical forms under variable permutations and input negations.
//!
//! The canonical form is the lexicographically least table (see
//! [`TruthTable::lex_cmp`]) in the orbit. It is found by growing the image of
//! the subcube spanned by the first `k` coordinates one coordinate at a time,
//! keeping only the partial maps whose prefix is minimal.

use crate::error::{check_dim, Result};
use crate::hypercube::TruthTable;

/// Largest dimension supported by [`canonicalize`].
pub const MAX_CANONICAL_DIM: usize = 7;

/// A hypercube automorphism: `g(b) = flip ^ spread(b)`, where `spread` sends
/// bit `i` of `b` to bit `coords[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transform {
    pub flip: usize,
    pub coords: Vec<usize>,
}

impl Transform {
    pub fn identity(n: usize) -> Self {
        Self {
            flip: 0,
            coords: (0..n).collect(),
        }
    }

    pub fn map(&self, b: usize) -> usize {
        let mut idx = self.flip;
        for (i, &c) in self.coords.iter().enumerate() {
            if b >> i & 1 == 1 {
                idx ^= 1 << c;
            }
        }
        idx
    }

    /// The table `b ↦ f(g(b))`.
    pub fn apply(&self, t: &TruthTable) -> TruthTable {
        TruthTable::from_fn(t.n(), |b| t.get(self.map(b))).expect("dimension already checked")
    }

    /// Weights `w'` with `sign(w'·x − θ) = f(g(x))` when `f = sign(w·x − θ)`.
    pub fn apply_weights(&self, w: &[i64]) -> Vec<i64> {
        self.coords
            .iter()
            .map(|&c| if self.flip >> c & 1 == 1 { -w[c] } else { w[c] })
            .collect()
    }
}

/// Result of [`canonicalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub table: TruthTable,
    /// Size of the orbit under the group of order `2^n · n!`.
    pub orbit_size: u64,
    /// A group element mapping the input to `table`.
    pub transform: Transform,
}

pub fn group_order(n: usize) -> u64 {
    (1..=n as u64).product::<u64>() << n
}

#[derive(Clone)]
struct Partial {
    flip: usize,
    coords: Vec<usize>,
    used: u32,
}

/// `Less` when bit string `a` precedes `b` (both of the same length).
fn precedes(a: u128, b: u128) -> std::cmp::Ordering {
    let d = a ^ b;
    if d == 0 {
        std::cmp::Ordering::Equal
    } else if a & (d & d.wrapping_neg()) == 0 {
        std::cmp::Ordering::Less
    } else {
        std::cmp::Ordering::Greater
    }
}

pub fn canonicalize(t: &TruthTable) -> Result<Canonical> {
    let n = t.n();
    check_dim(n, MAX_CANONICAL_DIM)?;
    let words = t.words();
    let full: u128 = u128::from(words[0]) | words.get(1).map_or(0, |&w| u128::from(w) << 64);
    let get = |idx: usize| full >> idx & 1;

    // Level 0: the image of index 0 must carry the smallest value.
    let min0 = (0..1usize << n).map(get).min().unwrap();
    let mut frontier: Vec<Partial> = (0..1usize << n)
        .filter(|&v| get(v) == min0)
        .map(|v| Partial {
            flip: v,
            coords: Vec::with_capacity(n),
            used: 0,
        })
        .collect();
    let mut prefix: u128 = min0;

    for k in 0..n {
        let half = 1usize << k;
        let mut best: Option<u128> = None;
        let mut next: Vec<Partial> = Vec::new();
        for p in &frontier {
            // Images of the current subcube.
            let mut imgs = [0usize; 64];
            imgs[0] = p.flip;
            for (i, &c) in p.coords.iter().enumerate() {
                for b in 0..1usize << i {
                    imgs[b | 1 << i] = imgs[b] ^ (1 << c);
                }
            }
            for c in 0..n {
                if p.used >> c & 1 == 1 {
                    continue;
                }
                let mut bits: u128 = 0;
                for (b, img) in imgs.iter().enumerate().take(half) {
                    bits |= get(img ^ (1 << c)) << b;
                }
                let ord = best.map_or(std::cmp::Ordering::Less, |cur| precedes(bits, cur));
                if ord == std::cmp::Ordering::Greater {
                    continue;
                }
                if ord == std::cmp::Ordering::Less {
                    best = Some(bits);
                    next.clear();
                }
                let mut coords = p.coords.clone();
                coords.push(c);
                next.push(Partial {
                    flip: p.flip,
                    coords,
                    used: p.used | 1 << c,
                });
            }
        }
        prefix |= best.expect("a free coordinate exists") << half;
        frontier = next;
    }

    let table = if n <= 6 {
        TruthTable::from_u64(n, prefix as u64)
    } else {
        TruthTable::from_words(n, vec![prefix as u64, (prefix >> 64) as u64])?
    };
    let stab = frontier.len() as u64;
    let first = frontier.swap_remove(0);
    Ok(Canonical {
        table,
        orbit_size: group_order(n) / stab,
        transform: Transform {
            flip: first.flip,
            coords: first.coords,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Orbit by explicit enumeration of the whole group.
    fn brute_orbit(t: &TruthTable) -> Vec<TruthTable> {
        let n = t.n();
        let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let mut out: Vec<TruthTable> = Vec::new();
        for flip in 0..1usize << n {
            for p in &perms {
                let g = Transform {
                    flip,
                    coords: p.clone(),
                };
                out.push(g.apply(t));
            }
        }
        out
    }

    fn random_table(rng: &mut impl Rng, n: usize) -> TruthTable {
        let words = (0..((1usize << n) + 63) / 64).map(|_| rng.gen()).collect();
        TruthTable::from_words(n, words).unwrap()
    }

    #[test]
    fn matches_brute_force_orbits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4 {
            for _ in 0..40 {
                let t = random_table(&mut rng, n);
                let c = canonicalize(&t).unwrap();
                let orbit = brute_orbit(&t);
                let min = orbit.iter().min_by(|a, b| a.lex_cmp(b)).unwrap();
                assert_eq!(&c.table, min);
                let mut distinct = orbit.clone();
                distinct.sort();
                distinct.dedup();
                assert_eq!(c.orbit_size, distinct.len() as u64);
                assert_eq!(c.transform.apply(&t), c.table);
            }
        }
    }

    #[test]
    fn examples() {
        let x1 = TruthTable::dictator(3, 0).unwrap();
        let neg_x2 = TruthTable::dictator(3, 1).unwrap().negated();
        assert_eq!(canonicalize(&x1).unwrap().table, canonicalize(&neg_x2).unwrap().table);
        let maj = TruthTable::majority(3).unwrap();
        let c = canonicalize(&maj).unwrap();
        assert_eq!(c.orbit_size, 8);
        assert_eq!(canonicalize(&c.table).unwrap().table, c.table);
    }

    #[test]
    fn idempotent_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for i in 0..1000 {
            let n = 1 + i % 7;
            let t = random_table(&mut rng, n);
            let c = canonicalize(&t).unwrap();
            let cc = canonicalize(&c.table).unwrap();
            assert_eq!(cc.table, c.table);
            assert_eq!(cc.orbit_size, c.orbit_size);
        }
    }

    #[test]
    fn weights_follow_transform() {
        let w = [5i64, -3, 2, 1];
        let t = TruthTable::from_fn(4, |b| {
            let s: i64 = (0..4).map(|i| if b >> i & 1 == 1 { w[i] } else { -w[i] }).sum();
            s >= 1
        })
        .unwrap();
        let c = canonicalize(&t).unwrap();
        let w2 = c.transform.apply_weights(&w);
        let t2 = TruthTable::from_fn(4, |b| {
            let s: i64 = (0..4).map(|i| if b >> i & 1 == 1 { w2[i] } else { -w2[i] }).sum();
            s >= 1
        })
        .unwrap();
        assert_eq!(t2, c.table);
    }
}
