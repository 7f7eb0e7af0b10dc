//! Prime sieving and prime powers.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

/// All primes `p <= n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    primes_in(0, n)
}

/// Primes `p` with `lo < p <= hi`, by a segmented sieve.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi <= lo {
        return Vec::new();
    }
    let root = isqrt(hi);
    let base = simple_sieve(root);
    let start = lo.saturating_add(1).max(2);
    let mut out = Vec::new();
    const SEG: u64 = 1 << 18;
    let mut seg_lo = start;
    while seg_lo <= hi {
        let seg_hi = hi.min(seg_lo.saturating_add(SEG - 1));
        let mut composite = vec![false; (seg_hi - seg_lo + 1) as usize];
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            let first = (p * p).max(seg_lo.div_ceil(p) * p);
            let mut m = first;
            while m <= seg_hi {
                composite[(m - seg_lo) as usize] = true;
                m += p;
            }
        }
        out.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, c)| !**c)
                .map(|(i, _)| seg_lo + i as u64),
        );
        if seg_hi == u64::MAX {
            break;
        }
        seg_lo = seg_hi + 1;
    }
    out
}

fn simple_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut m = i * i;
            while m <= n {
                composite[m] = true;
                m += i;
            }
        }
    }
    out
}

/// `floor(sqrt(n))`, exact for all `u64`.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = 17;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A prime power `p^k <= limit` together with its von Mangoldt weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimePower {
    pub n: u64,
    pub p: u64,
    pub k: u32,
    /// `Λ(n) = ln p`.
    pub lambda: f64,
}

/// All prime powers `2 <= p^k <= limit`, sorted by `n`.
pub fn prime_powers_up_to(limit: u64) -> Vec<PrimePower> {
    let mut out = Vec::new();
    for p in primes_up_to(limit) {
        let lambda = (p as f64).ln();
        let mut n = p;
        let mut k = 1;
        loop {
            out.push(PrimePower { n, p, k, lambda });
            match n.checked_mul(p) {
                Some(m) if m <= limit => {
                    n = m;
                    k += 1;
                }
                _ => break,
            }
        }
    }
    out.sort_unstable_by_key(|pp| pp.n);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranges() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_in(55, 89), vec![59, 61, 67, 71, 73, 79, 83, 89]);
        assert!(primes_in(24, 28).is_empty());
        assert!(primes_in(10, 5).is_empty());
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
    }

    #[test]
    fn segmented_matches_trial_division() {
        let lo = 999_000;
        let hi = 1_300_000;
        let seg = primes_in(lo, hi);
        let direct: Vec<u64> = (lo + 1..=hi).filter(|&n| is_prime(n)).collect();
        assert_eq!(seg, direct);
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    }

    #[test]
    fn prime_power_listing() {
        let pp = prime_powers_up_to(30);
        let ns: Vec<u64> = pp.iter().map(|p| p.n).collect();
        assert_eq!(ns, vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]);
        let sixteen = pp.iter().find(|p| p.n == 16).unwrap();
        assert_eq!((sixteen.p, sixteen.k), (2, 4));
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u64::MAX), 4_294_967_295);
    }
}
