//! Test-side oracles, independent of the library's computation paths:
//! a naive full-array sieve, trial-division factorization, and the
//! arithmetic functions derived from them.

/// Naive full boolean sieve; the independent primality oracle.
pub fn naive_sieve(limit: usize) -> Vec<bool> {
    let mut is_prime = vec![true; limit + 1];
    if limit >= 1 {
        is_prime[0] = false;
        if limit >= 1 {
            is_prime[1] = false;
        }
    }
    let mut i = 2usize;
    while i * i <= limit {
        if is_prime[i] {
            let mut j = i * i;
            while j <= limit {
                is_prime[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is_prime
}

pub fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn factorize_oracle(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mu_oracle(n: u64) -> i64 {
    if n == 1 {
        return 1;
    }
    let f = factorize_oracle(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn phi_oracle(n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    factorize_oracle(n)
        .iter()
        .map(|&(p, e)| p.pow(e - 1) * (p - 1))
        .product()
}

pub fn lambda_oracle(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let f = factorize_oracle(n);
    if f.len() == 1 {
        (f[0].0 as f64).ln()
    } else {
        0.0
    }
}
