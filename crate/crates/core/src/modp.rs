//! Reduction of `Z[ζ_N]`-valued matrices to `F_p` with `p ≡ 1 (mod N)`.
//!
//! The map `ζ ↦ ω` for a primitive `N`-th root `ω ∈ F_p` is a ring homomorphism on the
//! `p`-integral part of `Q(ζ_N)`, so a rank computed mod `p` never exceeds the true rank.

use num_traits::ToPrimitive;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::CycloScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
    pub n: u32,
    pub omega: u64,
    barrett: u64,
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // deterministic for n < 3.3e24
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x * x % n;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl PrimeField {
    /// A random prime `p ≡ 1 (mod n)` just below `2^31`, with a primitive `n`-th root of unity.
    pub fn random(n: u32, rng: &mut ChaCha8Rng) -> Self {
        let n64 = n.max(1) as u64;
        let hi = (1u64 << 31) / n64;
        loop {
            let k = rng.gen_range(hi / 2..hi);
            let p = k * n64 + 1;
            if !is_prime(p) {
                continue;
            }
            let qs = prime_factors(n64);
            loop {
                let a = rng.gen_range(2..p - 1);
                let w = pow_mod(a, (p - 1) / n64, p);
                if qs.iter().all(|&q| pow_mod(w, n64 / q, p) != 1) {
                    return PrimeField {
                        p,
                        n,
                        omega: w,
                        barrett: u64::MAX / p,
                    };
                }
            }
        }
    }

    /// `x mod p` for any `x < 2^64`.
    #[inline]
    pub fn rem(&self, x: u64) -> u64 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.rem(a * b)
    }

    pub fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    /// Image of `x`, or `None` when `p` divides a denominator.
    pub fn reduce(&self, x: &CycloScalar) -> Option<u64> {
        let n = self.n;
        let x = if x.conductor() == n {
            x.clone()
        } else {
            assert!(n % x.conductor() == 0, "conductor does not divide the field order");
            x.lift(n)
        };
        let p = self.p as i128;
        let mut acc: u64 = 0;
        let mut w: u64 = 1;
        for c in x.coeffs() {
            if !num_traits::Zero::is_zero(c) {
                let num = (c.numer() % p).to_i128()?.rem_euclid(p) as u64;
                let den = (c.denom() % p).to_i128()?.rem_euclid(p) as u64;
                if den == 0 {
                    return None;
                }
                acc = (acc + num * self.inv(den) % self.p * w) % self.p;
            }
            w = w * self.omega % self.p;
        }
        Some(acc)
    }
}

/// Rank of a dense matrix over `F_p`; rows are consumed.
pub fn rank_dense(mut rows: Vec<Vec<u64>>, f: &PrimeField) -> usize {
    let p = f.p;
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = f.inv(rows[rank][c]);
        for x in rows[rank][c..].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let (top, rest) = rows.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for row in rest.iter_mut() {
            let m = row[c];
            if m != 0 {
                let m = p - m;
                for (x, &y) in row[c..].iter_mut().zip(&pivot[c..]) {
                    *x = f.rem(*x + m * y);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A column-sparse matrix over `F_p`: `cols[j]` lists `(row, value)`.
#[derive(Clone, Debug)]
pub struct SparseModP {
    pub nrows: usize,
    pub cols: Vec<Vec<(u32, u64)>>,
}

impl SparseModP {
    /// `rank(A·R)` for a random `ncols × k` matrix `R`: a lower bound on `rank(A)`,
    /// equal to it with high probability when `k ≥ rank(A)`.
    pub fn projected_rank(&self, k: usize, f: &PrimeField, rng: &mut ChaCha8Rng) -> usize {
        let p = f.p;
        let k = k.min(self.cols.len()).min(self.nrows);
        if k == 0 {
            return 0;
        }
        if self.cols.len() <= k {
            return rank_dense(self.dense_rows(), f);
        }
        let mut prod = vec![vec![0u64; k]; self.nrows];
        let mut r = vec![0u64; k];
        for col in &self.cols {
            if col.is_empty() {
                continue;
            }
            for x in r.iter_mut() {
                *x = rng.gen_range(0..p);
            }
            for &(i, v) in col {
                let row = &mut prod[i as usize];
                for (y, &rr) in row.iter_mut().zip(&r) {
                    *y = f.rem(*y + v * rr);
                }
            }
        }
        rank_dense(prod, f)
    }

    /// Keeps the listed rows and columns, renumbered in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseModP {
        let mut row_pos = vec![u32::MAX; self.nrows];
        for (k, &r) in rows.iter().enumerate() {
            row_pos[r] = k as u32;
        }
        SparseModP {
            nrows: rows.len(),
            cols: cols
                .iter()
                .map(|&c| {
                    self.cols[c]
                        .iter()
                        .filter(|&&(i, _)| row_pos[i as usize] != u32::MAX)
                        .map(|&(i, v)| (row_pos[i as usize], v))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn dense_rows(&self) -> Vec<Vec<u64>> {
        let mut rows = vec![vec![0u64; self.cols.len()]; self.nrows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                rows[i as usize][j] = v;
            }
        }
        rows
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn primitive_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1u32, 2, 3, 4, 6, 8, 12] {
            let f = PrimeField::random(n, &mut rng);
            assert_eq!((f.p - 1) % n as u64, 0);
            assert_eq!(pow_mod(f.omega, n as u64, f.p), 1);
            let z = CycloScalar::root_of_unity(n, 1);
            assert_eq!(f.reduce(&z), Some(f.omega % f.p));
        }
    }

    #[test]
    fn reduction_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = PrimeField::random(12, &mut rng);
        let a = CycloScalar::root_of_unity(12, 5).add_ref(&CycloScalar::from_integer(12, 3));
        let b = CycloScalar::root_of_unity(12, 7).sub_ref(&CycloScalar::root_of_unity(12, 2));
        let ab = f.reduce(&a.mul_ref(&b)).unwrap();
        assert_eq!(ab, f.reduce(&a).unwrap() * f.reduce(&b).unwrap() % f.p);
    }

    #[test]
    fn barrett_matches_remainder() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = PrimeField::random(8, &mut rng);
        for _ in 0..10_000 {
            let x: u64 = rng.gen();
            assert_eq!(f.rem(x), x % f.p);
        }
        assert_eq!(f.rem(u64::MAX), u64::MAX % f.p);
    }
}
