//! Bit-packed prime tables with segmented construction, prime counting,
//! primes in arithmetic progressions, and least-prime-in-progression search.
//!
//! Layout: one bit per odd integer (`bit i` ⇔ `2i+1`), so a table to 1e9
//! costs 62.5 MB. Construction sieves fixed-size segments; segments are
//! disjoint bit ranges processed in parallel, so the resulting table is
//! bit-identical for any worker count. Multiples of primes ≥ 7 are crossed
//! off along a mod-30 wheel (multipliers coprime to 30) since the multiples
//! hit by 2, 3, 5 are handled separately.

use crate::error::{Error, Result};
use rayon::prelude::*;

/// Hard ceiling on table size. Beyond this, `p*m` stride arithmetic and the
/// odd-bit address space are still exact in u64, but memory (1 bit per odd
/// integer, 62.5 GB at 1e12) is the practical limit.
pub const LIMIT_CEILING: u64 = 1_000_000_000_000;

/// Words per parallel construction segment (2^16 words = 8 Mbit segment,
/// covering 2^23 integers: comfortably inside L2 for the marking pass).
const SEG_WORDS: usize = 1 << 16;

/// Words per entry of the sparse cumulative-count index.
const COUNT_BLOCK_WORDS: usize = 1 << 10;

const WHEEL30: [u64; 8] = [1, 7, 11, 13, 17, 19, 23, 29];
/// Gap from WHEEL30[i] to the next multiplier coprime to 30.
const WHEEL30_GAP: [u64; 8] = [6, 4, 2, 4, 2, 4, 6, 2];

/// Residue class `a (mod q)` with `1 <= a <= q` and `gcd(a, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct APClass {
    a: u64,
    q: u64,
}

impl APClass {
    pub fn new(a: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::usage("modulus q must be positive"));
        }
        if a == 0 || a > q {
            return Err(Error::usage(format!(
                "residue a={a} must satisfy 1 <= a <= q={q}"
            )));
        }
        if gcd(a, q) != 1 {
            return Err(Error::usage(format!("gcd(a={a}, q={q}) must be 1")));
        }
        Ok(APClass { a, q })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

/// Outcome of a least-prime search capped at `q^cap_exponent`.
///
/// Exceeding the cap is an observation, not a failure: the search bound
/// itself is one of the audited claims.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeastPrime {
    Found(u64),
    CapExceeded { search_bound: u64 },
}

impl LeastPrime {
    pub fn found(&self) -> Option<u64> {
        match self {
            LeastPrime::Found(p) => Some(*p),
            LeastPrime::CapExceeded { .. } => None,
        }
    }
}

/// Bit-packed primality over odd integers up to `limit`, with a sparse
/// cumulative count index for fast `pi(x)` queries.
pub struct PrimeTable {
    limit: u64,
    words: Vec<u64>,
    count_blocks: Vec<u64>,
}

impl PrimeTable {
    /// Build a table of all primes `<= limit` by segmented sieving.
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with_segment_words(limit, SEG_WORDS)
    }

    /// Segmented construction with an explicit segment size in 64-bit words.
    /// Exposed so tests can compare segmented and monolithic layouts.
    pub fn build_with_segment_words(limit: u64, seg_words: usize) -> Result<Self> {
        if limit < 2 {
            return Err(Error::usage(format!("sieve limit {limit} must be >= 2")));
        }
        if limit > LIMIT_CEILING {
            return Err(Error::usage(format!(
                "sieve limit {limit} exceeds ceiling {LIMIT_CEILING}"
            )));
        }
        let seg_words = seg_words.max(1);
        let n_bits = (limit + 1) / 2; // bits for odds 1, 3, .., <= limit
        let n_words = n_bits.div_ceil(64) as usize;
        let mut words = vec![!0u64; n_words];

        let sqrt = isqrt(limit);
        let base = simple_odd_primes(sqrt);

        words
            .par_chunks_mut(seg_words)
            .enumerate()
            .for_each(|(ci, chunk)| {
                let bit_lo = (ci * seg_words * 64) as u64;
                let bit_hi = bit_lo + (chunk.len() * 64) as u64;
                // odd-number range covered by this chunk: [2*bit_lo+1, 2*bit_hi+1)
                let n_lo = 2 * bit_lo + 1;
                let n_hi = 2 * bit_hi + 1;
                sieve_segment(chunk, n_lo, n_hi, &base);
            });

        // 1 is not prime.
        words[0] &= !1u64;
        // Mask bits past the limit.
        let last_valid = (n_bits - 1) as usize;
        let tail_word = last_valid / 64;
        let tail_bit = last_valid % 64;
        if tail_bit < 63 {
            words[tail_word] &= (1u64 << (tail_bit + 1)) - 1;
        }
        for w in words.iter_mut().skip(tail_word + 1) {
            *w = 0;
        }

        let mut count_blocks = Vec::with_capacity(n_words / COUNT_BLOCK_WORDS + 1);
        let mut running = 0u64;
        for (i, w) in words.iter().enumerate() {
            if i % COUNT_BLOCK_WORDS == 0 {
                count_blocks.push(running);
            }
            running += w.count_ones() as u64;
        }

        Ok(PrimeTable {
            limit,
            words,
            count_blocks,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        if n == 2 {
            return true;
        }
        if n < 2 || n & 1 == 0 {
            return false;
        }
        debug_assert!(n <= self.limit, "is_prime({n}) beyond table limit");
        let i = (n >> 1) as usize;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Exact `pi(x)`: the number of primes `<= x`.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::range(format!(
                "pi({x}) requested beyond table limit {}",
                self.limit
            )));
        }
        if x < 2 {
            return Ok(0);
        }
        if x == 2 {
            return Ok(1);
        }
        let i_max = ((x - 1) >> 1) as usize; // index of largest odd <= x
        let word = i_max / 64;
        let block = word / COUNT_BLOCK_WORDS;
        let mut count = self.count_blocks[block];
        for w in block * COUNT_BLOCK_WORDS..word {
            count += self.words[w].count_ones() as u64;
        }
        let bit = i_max % 64;
        let mask = if bit == 63 { !0u64 } else { (1u64 << (bit + 1)) - 1 };
        count += (self.words[word] & mask).count_ones() as u64;
        Ok(count + 1) // +1 for the prime 2
    }

    /// Iterate all primes in the table in increasing order.
    pub fn primes(&self) -> PrimeIter<'_> {
        self.primes_in(2, self.limit)
    }

    /// Iterate primes `p` with `lo <= p <= hi` (clamped to the table limit).
    pub fn primes_in(&self, lo: u64, hi: u64) -> PrimeIter<'_> {
        let hi = hi.min(self.limit);
        PrimeIter {
            table: self,
            hi,
            two_pending: lo <= 2 && hi >= 2,
            word_idx: (lo.max(3) >> 1) as usize / 64,
            current: if lo.max(3) >> 1 >= (self.limit + 1) / 2 {
                0
            } else {
                let start_bit = (lo.max(3) >> 1) as usize;
                self.words[start_bit / 64] & (!0u64 << (start_bit % 64))
            },
        }
    }

    /// Primes `p <= x` with `p ≡ a (mod q)`, in increasing order.
    pub fn primes_in_ap(&self, x: u64, ap: APClass) -> Result<ApPrimeIter<'_>> {
        if x > self.limit {
            return Err(Error::range(format!(
                "primes_in_ap x={x} beyond table limit {}",
                self.limit
            )));
        }
        Ok(ApPrimeIter {
            table: self,
            next: ap.a(),
            step: ap.q(),
            hi: x,
        })
    }

    /// `pi(x; q, a)`: the number of primes `p <= x` in the class.
    pub fn count_primes_in_ap(&self, x: u64, ap: APClass) -> Result<u64> {
        Ok(self.primes_in_ap(x, ap)?.count() as u64)
    }
}

/// Iterator over the set bits of a table, yielding primes.
pub struct PrimeIter<'a> {
    table: &'a PrimeTable,
    hi: u64,
    two_pending: bool,
    word_idx: usize,
    current: u64,
}

impl Iterator for PrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.two_pending {
            self.two_pending = false;
            if self.hi >= 2 {
                return Some(2);
            }
        }
        loop {
            while self.current == 0 {
                self.word_idx += 1;
                if self.word_idx >= self.table.words.len() {
                    return None;
                }
                self.current = self.table.words[self.word_idx];
            }
            let bit = self.current.trailing_zeros() as u64;
            self.current &= self.current - 1;
            let n = 2 * (self.word_idx as u64 * 64 + bit) + 1;
            if n > self.hi {
                // Mark exhausted.
                self.word_idx = self.table.words.len();
                self.current = 0;
                return None;
            }
            return Some(n);
        }
    }
}

/// Iterator over primes in one residue class, stepping candidates by `q`.
pub struct ApPrimeIter<'a> {
    table: &'a PrimeTable,
    next: u64,
    step: u64,
    hi: u64,
}

impl Iterator for ApPrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        while self.next <= self.hi {
            let c = self.next;
            self.next += self.step;
            if c >= 2 && self.table.is_prime(c) {
                return Some(c);
            }
        }
        None
    }
}

/// Least prime `p ≡ a (mod q)`, searching candidates `a, a+q, ...` below
/// `q^cap_exponent`. Candidates are tested with the deterministic
/// Miller-Rabin bases for u64, so no table build is needed.
pub fn least_prime_in_ap(ap: APClass, cap_exponent: f64) -> LeastPrime {
    let bound = pow_cap(ap.q(), cap_exponent);
    let mut c = ap.a();
    while c < bound {
        if c >= 2 && is_prime_u64(c) {
            return LeastPrime::Found(c);
        }
        match c.checked_add(ap.q()) {
            Some(next) => c = next,
            None => break,
        }
    }
    LeastPrime::CapExceeded {
        search_bound: bound,
    }
}

fn pow_cap(q: u64, exponent: f64) -> u64 {
    let v = (q as f64).powf(exponent);
    if v >= u64::MAX as f64 {
        u64::MAX
    } else {
        v as u64
    }
}

/// Cross out composites in one segment of odd-number bits.
///
/// `chunk` covers the odd integers `[n_lo, n_hi)`; bit `j` of the chunk is
/// `n_lo + 2*(64*w + b)`.
fn sieve_segment(chunk: &mut [u64], n_lo: u64, n_hi: u64, base: &[u64]) {
    let clear = |chunk: &mut [u64], n: u64| {
        let i = ((n - n_lo) >> 1) as usize;
        chunk[i / 64] &= !(1u64 << (i % 64));
    };
    for &p in base {
        if p == 2 {
            continue; // even numbers have no bit in the table
        }
        if p * p >= n_hi {
            break;
        }
        // First multiplier: odd, >= p, and reaching into the segment.
        let mut m = n_lo.div_ceil(p).max(p);
        if p <= 5 {
            if m % 2 == 0 {
                m += 1;
            }
            let mut n = p * m;
            while n < n_hi {
                clear(chunk, n);
                n += 2 * p;
            }
        } else {
            // Walk multipliers coprime to 30; multiples via 2, 3, 5 are
            // cleared by those primes' own passes.
            let mut idx = match WHEEL30.binary_search(&(m % 30)) {
                Ok(i) => i,
                Err(i) => {
                    if i == WHEEL30.len() {
                        m += 31 - m % 30;
                        0
                    } else {
                        m += WHEEL30[i] - m % 30;
                        i
                    }
                }
            };
            let mut n = p * m;
            while n < n_hi {
                clear(chunk, n);
                n += p * WHEEL30_GAP[idx];
                idx = (idx + 1) & 7;
            }
        }
    }
}

/// Plain odd-only sieve returning the primes `<= limit` (used for base
/// primes and small internal prime lists).
pub fn simple_odd_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let mut primes = vec![2];
    if limit < 3 {
        return primes;
    }
    let n_odds = ((limit - 1) / 2) as usize; // 3, 5, ..., indexed from 0
    let mut composite = vec![false; n_odds + 1];
    let mut i = 0usize;
    loop {
        let p = 2 * i as u64 + 3;
        if p * p > limit {
            break;
        }
        if !composite[i] {
            let mut n = p * p;
            while n <= limit {
                composite[((n - 3) / 2) as usize] = true;
                n += 2 * p;
            }
        }
        i += 1;
    }
    for (j, &c) in composite.iter().enumerate() {
        let p = 2 * j as u64 + 3;
        if p > limit {
            break;
        }
        if !c {
            primes.push(p);
        }
    }
    primes
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r.checked_mul(r).map_or(true, |rr| rr > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).map_or(false, |rr| rr <= n) {
        r += 1;
    }
    r
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 (the 12 bases below decide primality
/// for all n < 3.3e24).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
