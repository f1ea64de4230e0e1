//! The finite sums over primes and prime pairs that the claim auditor
//! tabulates: Mertens sums in progressions, weighted pair sums and their
//! inversion decomposition, twisted Mobius sums, prime-power pair tails,
//! psi/pi in progressions, pair counts, and Lambda*Lambda partial sums.
//!
//! Summation order is ascending in the summation variable with Kahan
//! compensation everywhere; parallel paths reduce fixed-size segment
//! partials in segment order. Results are therefore reproducible to the bit
//! for any worker count.

use crate::arith::evaluate;
use crate::asymptotic::zeta_and_deriv;
use crate::dirichlet::proper_prime_powers;
use crate::error::{Error, Result};
use crate::factor::FactorSieve;
use crate::kahan::KahanSum;
use crate::sieve::{gcd, least_prime_in_ap, APClass, LeastPrime, PrimeTable};

/// The linear form `p -> m*p + k` with `gcd(m, k) = 1`.
///
/// Forms with `m + k` even are accepted but flagged: for every odd prime p
/// the image is even, so only powers of two can contribute to Lambda-weighted
/// sums and the pair density vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LinearForm {
    m: u64,
    k: i64,
}

impl LinearForm {
    pub fn new(m: u64, k: i64) -> Result<Self> {
        if m == 0 {
            return Err(Error::usage("linear form needs m >= 1"));
        }
        if k == 0 {
            return Err(Error::usage("linear form needs k != 0"));
        }
        if gcd(m, k.unsigned_abs()) != 1 {
            return Err(Error::usage(format!("gcd(m={m}, k={k}) must be 1")));
        }
        Ok(LinearForm { m, k })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    /// True when m + k is odd, so mp + k can be an odd prime infinitely
    /// often.
    pub fn parity_admissible(&self) -> bool {
        (self.m as i128 + self.k as i128) % 2 != 0
    }

    pub fn parity_warning(&self) -> Option<String> {
        if self.parity_admissible() {
            None
        } else {
            Some(format!(
                "form ({}, {}) has m + k even: mp + k is even for every odd prime p",
                self.m, self.k
            ))
        }
    }

    /// `m*p + k` as a u64, or None when the image is below 1.
    #[inline]
    pub fn value_at(&self, p: u64) -> Option<u64> {
        let v = self.m as i128 * p as i128 + self.k as i128;
        if v >= 1 {
            Some(v as u64)
        } else {
            None
        }
    }

    /// Largest image over p <= x.
    fn max_value(&self, x: u64) -> i128 {
        self.m as i128 * x as i128 + self.k as i128
    }

    /// Require every image over p <= x (and x itself) to sit inside the
    /// table.
    fn check_range(&self, table: &PrimeTable, x: u64) -> Result<()> {
        if x > table.limit() {
            return Err(Error::range(format!(
                "x={x} beyond table limit {}",
                table.limit()
            )));
        }
        let vmax = self.max_value(x);
        if vmax > table.limit() as i128 {
            return Err(Error::range(format!(
                "form image {}*{x}{:+} = {vmax} beyond table limit {}",
                self.m,
                self.k,
                table.limit()
            )));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!("({},{})", self.m, self.k)
    }
}

/// One checkpoint of a checkpointed series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub x: f64,
    pub value: f64,
    pub main: Option<f64>,
    pub residual: Option<f64>,
}

/// A checkpointed series with provenance metadata. The CSV schema is
/// `x,value,main,residual` with floats at 12 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub struct SumTrace {
    pub op: String,
    pub params: Vec<(String, String)>,
    pub warning: Option<String>,
    pub checkpoints: Vec<TracePoint>,
}

/// Format a float with 12 significant digits.
pub fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

impl SumTrace {
    pub fn new(op: &str, params: Vec<(String, String)>) -> Self {
        SumTrace {
            op: op.to_string(),
            params,
            warning: None,
            checkpoints: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value,main,residual\n");
        for c in &self.checkpoints {
            out.push_str(&sig12(c.x));
            out.push(',');
            out.push_str(&sig12(c.value));
            out.push(',');
            if let Some(m) = c.main {
                out.push_str(&sig12(m));
            }
            out.push(',');
            if let Some(r) = c.residual {
                out.push_str(&sig12(r));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<SumTrace> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::usage("empty trace file"))?;
        if header.trim() != "x,value,main,residual" {
            return Err(Error::usage(format!(
                "unexpected trace header '{header}' (want 'x,value,main,residual')"
            )));
        }
        let mut trace = SumTrace::new("from-csv", vec![]);
        for (ln, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(Error::usage(format!(
                    "trace line {} has {} columns, want 4",
                    ln + 2,
                    cols.len()
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::usage(format!("bad float '{s}' on line {}", ln + 2)))
            };
            let opt = |s: &str| -> Result<Option<f64>> {
                if s.trim().is_empty() {
                    Ok(None)
                } else {
                    parse(s).map(Some)
                }
            };
            trace.checkpoints.push(TracePoint {
                x: parse(cols[0])?,
                value: parse(cols[1])?,
                main: opt(cols[2])?,
                residual: opt(cols[3])?,
            });
        }
        if trace.checkpoints.is_empty() {
            return Err(Error::usage("trace file has no checkpoints"));
        }
        Ok(trace)
    }
}

/// Geometric checkpoint grid `lo, lo*ratio, lo*ratio^2, ... <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub ratio: f64,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, ratio: f64) -> Result<Self> {
        if !(lo >= 1.0) || !(hi >= lo) || !(ratio > 1.0) {
            return Err(Error::usage(format!(
                "grid lo:hi:ratio = {lo}:{hi}:{ratio} needs 1 <= lo <= hi and ratio > 1"
            )));
        }
        Ok(GridSpec { lo, hi, ratio })
    }

    /// Parse `lo:hi:ratio`, numbers in scientific notation welcome.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::usage(format!(
                "grid spec '{s}' must be lo:hi:ratio"
            )));
        }
        let num = |t: &str| -> Result<f64> {
            t.parse::<f64>()
                .map_err(|_| Error::usage(format!("bad grid number '{t}'")))
        };
        GridSpec::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }

    /// Default scan grid: ratio 10^(1/4) between 1e3 and the table limit.
    pub fn default_scan(limit: u64) -> GridSpec {
        GridSpec {
            lo: 1e3f64.min(limit as f64),
            hi: limit as f64,
            ratio: 10f64.powf(0.25),
        }
    }

    /// Rounded, strictly increasing integer checkpoints.
    pub fn checkpoints(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut x = self.lo;
        while x <= self.hi * (1.0 + 1e-12) {
            let r = x.round() as u64;
            if out.last().map_or(true, |&l| r > l) {
                out.push(r);
            }
            x *= self.ratio;
        }
        out
    }
}

/// Fast Lambda(n) for n within a prime table: a primality bit plus a binary
/// search over the (few thousand) proper prime powers. Bases are stored as
/// integers; log p is taken at call time.
pub struct LambdaLookup<'a> {
    table: &'a PrimeTable,
    powers: Vec<(u64, u64)>,
}

impl<'a> LambdaLookup<'a> {
    pub fn new(table: &'a PrimeTable) -> Self {
        LambdaLookup {
            table,
            powers: proper_prime_powers(table, table.limit()),
        }
    }

    /// The prime p when n = p^e (e >= 1), else None.
    #[inline]
    pub fn prime_power_base(&self, n: u64) -> Option<u64> {
        if n < 2 {
            return None;
        }
        if self.table.is_prime(n) {
            return Some(n);
        }
        self.powers
            .binary_search_by_key(&n, |&(v, _)| v)
            .ok()
            .map(|i| self.powers[i].1)
    }

    #[inline]
    pub fn lambda(&self, n: u64) -> f64 {
        match self.prime_power_base(n) {
            Some(p) => (p as f64).ln(),
            None => 0.0,
        }
    }
}

/// Weight for Mertens-type sums over primes in a progression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MertensWeight {
    /// sum 1/p, compared against loglog x / phi(q) + 1/p(a, q).
    Reciprocal,
    /// sum log p / p.
    LogOverP,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MertensSum {
    pub value: f64,
    /// loglog x / phi(q) + 1/p(a, q); absent for the log weight or when the
    /// least-prime search exceeded its cap.
    pub main: Option<f64>,
    pub residual: Option<f64>,
}

fn mertens_main(x: u64, ap: APClass) -> Option<f64> {
    if x < 2 {
        return None;
    }
    let phi = evaluate(ap.q()).ok()?.phi as f64;
    match least_prime_in_ap(ap, 6.0) {
        LeastPrime::Found(p) => Some((x as f64).ln().ln() / phi + 1.0 / p as f64),
        LeastPrime::CapExceeded { .. } => None,
    }
}

/// `sum_{p <= x, p ≡ a (q)} w(p)` with the requested weight; the reciprocal
/// weight also carries its main-term comparison.
pub fn mertens_ap(
    table: &PrimeTable,
    x: u64,
    ap: APClass,
    weight: MertensWeight,
) -> Result<MertensSum> {
    let mut acc = KahanSum::new();
    for p in table.primes_in_ap(x, ap)? {
        let pf = p as f64;
        match weight {
            MertensWeight::Reciprocal => acc.add(1.0 / pf),
            MertensWeight::LogOverP => acc.add(pf.ln() / pf),
        }
    }
    let value = acc.value();
    let (main, residual) = match weight {
        MertensWeight::Reciprocal => {
            let main = mertens_main(x, ap);
            (main, main.map(|m| value - m))
        }
        MertensWeight::LogOverP => (None, None),
    };
    Ok(MertensSum {
        value,
        main,
        residual,
    })
}

/// Checkpointed version of `mertens_ap` over an increasing grid.
pub fn mertens_ap_trace(
    table: &PrimeTable,
    checkpoints: &[u64],
    ap: APClass,
    weight: MertensWeight,
) -> Result<SumTrace> {
    check_grid(checkpoints)?;
    let x_max = *checkpoints.last().unwrap();
    let mut trace = SumTrace::new(
        match weight {
            MertensWeight::Reciprocal => "mertens-ap-reciprocal",
            MertensWeight::LogOverP => "mertens-ap-log",
        },
        vec![
            ("a".into(), ap.a().to_string()),
            ("q".into(), ap.q().to_string()),
        ],
    );
    let mut acc = KahanSum::new();
    let mut ci = 0usize;
    for p in table.primes_in_ap(x_max, ap)? {
        while ci < checkpoints.len() && checkpoints[ci] < p {
            push_mertens_point(&mut trace, checkpoints[ci], acc.value(), ap, weight);
            ci += 1;
        }
        let pf = p as f64;
        match weight {
            MertensWeight::Reciprocal => acc.add(1.0 / pf),
            MertensWeight::LogOverP => acc.add(pf.ln() / pf),
        }
    }
    while ci < checkpoints.len() {
        push_mertens_point(&mut trace, checkpoints[ci], acc.value(), ap, weight);
        ci += 1;
    }
    Ok(trace)
}

fn push_mertens_point(
    trace: &mut SumTrace,
    x: u64,
    value: f64,
    ap: APClass,
    weight: MertensWeight,
) {
    let main = match weight {
        MertensWeight::Reciprocal => mertens_main(x, ap),
        MertensWeight::LogOverP => None,
    };
    trace.checkpoints.push(TracePoint {
        x: x as f64,
        value,
        main,
        residual: main.map(|m| value - m),
    });
}

fn check_grid(checkpoints: &[u64]) -> Result<()> {
    if checkpoints.is_empty() {
        return Err(Error::usage("empty checkpoint grid"));
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::usage("checkpoint grid must be strictly increasing"));
    }
    Ok(())
}

/// `sum_{p <= x} Lambda(mp + k) / p`.
pub fn pair_weighted_sum(table: &PrimeTable, x: u64, form: LinearForm) -> Result<f64> {
    form.check_range(table, x)?;
    let lookup = LambdaLookup::new(table);
    let mut acc = KahanSum::new();
    for p in table.primes_in(2, x) {
        if let Some(v) = form.value_at(p) {
            let lam = lookup.lambda(v);
            if lam != 0.0 {
                acc.add(lam / p as f64);
            }
        }
    }
    Ok(acc.value())
}

/// Checkpointed `sum_{p <= x} Lambda(mp + k) / p`.
pub fn pair_weighted_trace(
    table: &PrimeTable,
    checkpoints: &[u64],
    form: LinearForm,
) -> Result<SumTrace> {
    check_grid(checkpoints)?;
    let x_max = *checkpoints.last().unwrap();
    form.check_range(table, x_max)?;
    let lookup = LambdaLookup::new(table);
    let mut trace = SumTrace::new(
        "pair-weighted",
        vec![
            ("m".into(), form.m().to_string()),
            ("k".into(), form.k().to_string()),
        ],
    );
    trace.warning = form.parity_warning();
    let mut acc = KahanSum::new();
    let mut ci = 0usize;
    for p in table.primes_in(2, x_max) {
        while ci < checkpoints.len() && checkpoints[ci] < p {
            trace.checkpoints.push(TracePoint {
                x: checkpoints[ci] as f64,
                value: acc.value(),
                main: None,
                residual: None,
            });
            ci += 1;
        }
        if let Some(v) = form.value_at(p) {
            let lam = lookup.lambda(v);
            if lam != 0.0 {
                acc.add(lam / p as f64);
            }
        }
    }
    while ci < checkpoints.len() {
        trace.checkpoints.push(TracePoint {
            x: checkpoints[ci] as f64,
            value: acc.value(),
            main: None,
            residual: None,
        });
        ci += 1;
    }
    Ok(trace)
}

/// One modulus row of the inversion decomposition ledger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionEntry {
    pub d: u64,
    pub mu: i8,
    /// `sum_{p <= x, m p + k ≡ 0 (d)} 1/p`
    pub inner: f64,
    /// `-mu(d) log d * inner`
    pub contribution: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InversionDecomposition {
    pub total: f64,
    pub ledger: Vec<InversionEntry>,
}

/// The summation-order inversion of `pair_weighted_sum`:
/// `-sum_{d <= mx+k} mu(d) log d  sum_{p <= x, mp+k ≡ 0 (d)} 1/p`,
/// evaluated literally as the double sum.
///
/// With `restricted = false` every squarefree modulus d participates and the
/// identity with `pair_weighted_sum` is exact. `restricted = true` imposes
/// the side condition `gcd(d, km) = 1`, which drops the moduli sharing a
/// factor with k; the difference is supported on primes p with
/// `gcd(mp+k, k) > 1`.
pub fn inversion_decomposition(
    table: &PrimeTable,
    x: u64,
    form: LinearForm,
    restricted: bool,
) -> Result<InversionDecomposition> {
    form.check_range(table, x)?;
    let d_max_i = form.max_value(x);
    if d_max_i < 1 {
        return Ok(InversionDecomposition {
            total: 0.0,
            ledger: Vec::new(),
        });
    }
    let d_max = d_max_i as u64;
    if d_max > 100_000_000 {
        return Err(Error::usage(format!(
            "inversion ledger over d <= {d_max} exceeds the 1e8 cap"
        )));
    }

    // mu over [2, d_max] in one factor sweep.
    let mut mu = vec![0i8; (d_max + 1) as usize];
    if d_max >= 1 {
        mu[1] = 1;
    }
    if d_max >= 2 {
        let sieve = FactorSieve::new(d_max);
        let mut lo = 2u64;
        while lo <= d_max {
            let hi = (lo + (1 << 20)).min(d_max + 1);
            let seg = sieve.segment(lo, hi);
            for n in lo..hi {
                mu[n as usize] = seg.mu(n);
            }
            lo = hi;
        }
    }

    let k_abs = form.k().unsigned_abs();
    let mut ledger = Vec::new();
    let mut total = KahanSum::new();
    for d in 1..=d_max {
        if mu[d as usize] == 0 {
            continue;
        }
        if restricted && (gcd(d, k_abs) != 1 || gcd(d, form.m()) != 1) {
            continue;
        }
        if gcd(d, form.m()) != 1 {
            // mp + k ≡ 0 (mod d) needs gcd(m, d) | k; coprimality of m and k
            // rules that out, so the inner sum is empty.
            continue;
        }
        let inner = inner_reciprocal_sum(table, x, form, d)?;
        let contribution = -(mu[d as usize] as f64) * (d as f64).ln() * inner;
        total.add(contribution);
        ledger.push(InversionEntry {
            d,
            mu: mu[d as usize],
            inner,
            contribution,
        });
    }
    Ok(InversionDecomposition {
        total: total.value(),
        ledger,
    })
}

/// `sum_{p <= x, mp + k ≡ 0 (mod d)} 1/p` by stepping candidates in the
/// residue class.
fn inner_reciprocal_sum(table: &PrimeTable, x: u64, form: LinearForm, d: u64) -> Result<f64> {
    if d == 1 {
        let mut acc = KahanSum::new();
        for p in table.primes_in(2, x) {
            if form.value_at(p).is_some() {
                acc.add(1.0 / p as f64);
            }
        }
        return Ok(acc.value());
    }
    let m_inv = mod_inverse(form.m() % d, d)
        .ok_or_else(|| Error::internal(format!("m={} not invertible mod d={d}", form.m())))?;
    // p ≡ -k * m^{-1} (mod d)
    let k_mod = form.k().rem_euclid(d as i64) as u64;
    let r = (d - k_mod) % d;
    let r = (r as u128 * m_inv as u128 % d as u128) as u64;
    let mut acc = KahanSum::new();
    let mut c = if r == 0 { d } else { r };
    while c <= x {
        if c >= 2 && table.is_prime(c) && form.value_at(c).is_some() {
            acc.add(1.0 / c as f64);
        }
        c += d;
    }
    Ok(acc.value())
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogPower {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MobiusCondition {
    Unconditional,
    CoprimeTo(u64),
    Residue { a: u64, q: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistedMobiusSum {
    pub value: f64,
    /// zeta'(s)/zeta(s)^2, available for s > 1, log power 1, no condition.
    pub limit_target: Option<f64>,
    pub gap: Option<f64>,
}

/// `sum_{n <= x} mu(n) log^j n / n^s` under an optional coprimality or
/// residue condition.
pub fn twisted_mobius_sum(
    x: u64,
    s: f64,
    log_power: LogPower,
    condition: MobiusCondition,
) -> Result<TwistedMobiusSum> {
    validate_twisted_args(x, s, condition)?;
    let sieve = FactorSieve::new(x.max(2));
    let value = sieve.sum_over(2, x, |seg, n| twisted_term(seg.mu(n), n, s, log_power, condition));
    let limit_target = twisted_limit_target(s, log_power, condition);
    Ok(TwistedMobiusSum {
        value,
        limit_target,
        gap: limit_target.map(|t| value - t),
    })
}

/// Checkpointed twisted Mobius sum over an increasing grid.
pub fn twisted_mobius_trace(
    checkpoints: &[u64],
    s: f64,
    log_power: LogPower,
    condition: MobiusCondition,
) -> Result<SumTrace> {
    check_grid(checkpoints)?;
    let x_max = *checkpoints.last().unwrap();
    validate_twisted_args(x_max, s, condition)?;
    let sieve = FactorSieve::new(x_max.max(2));
    let values = sieve.scan(checkpoints, |seg, n| {
        twisted_term(seg.mu(n), n, s, log_power, condition)
    });
    let target = twisted_limit_target(s, log_power, condition);
    let mut trace = SumTrace::new(
        "twisted-mobius",
        vec![
            ("s".into(), s.to_string()),
            (
                "log_power".into(),
                match log_power {
                    LogPower::One => "1".into(),
                    LogPower::Two => "2".into(),
                },
            ),
            ("condition".into(), format!("{condition:?}")),
        ],
    );
    for (i, &x) in checkpoints.iter().enumerate() {
        trace.checkpoints.push(TracePoint {
            x: x as f64,
            value: values[i],
            main: target,
            residual: target.map(|t| values[i] - t),
        });
    }
    Ok(trace)
}

fn validate_twisted_args(x: u64, s: f64, condition: MobiusCondition) -> Result<()> {
    if x < 1 {
        return Err(Error::usage("twisted Mobius sum needs x >= 1"));
    }
    if !(0.5..=4.0).contains(&s) {
        return Err(Error::usage(format!(
            "twisted Mobius exponent s={s} outside [1/2, 4]"
        )));
    }
    match condition {
        MobiusCondition::CoprimeTo(q) if q == 0 => {
            Err(Error::usage("coprimality condition needs q >= 1"))
        }
        MobiusCondition::Residue { a, q } => {
            if q == 0 || a == 0 || a > q {
                Err(Error::usage("residue condition needs 1 <= a <= q"))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

#[inline]
fn twisted_term(mu: i8, n: u64, s: f64, log_power: LogPower, condition: MobiusCondition) -> f64 {
    if mu == 0 {
        return 0.0;
    }
    match condition {
        MobiusCondition::Unconditional => {}
        MobiusCondition::CoprimeTo(q) => {
            if gcd(n, q) != 1 {
                return 0.0;
            }
        }
        MobiusCondition::Residue { a, q } => {
            if n % q != a % q {
                return 0.0;
            }
        }
    }
    let nf = n as f64;
    let ln = nf.ln();
    let num = match log_power {
        LogPower::One => ln,
        LogPower::Two => ln * ln,
    };
    mu as f64 * num / nf.powf(s)
}

fn twisted_limit_target(s: f64, log_power: LogPower, condition: MobiusCondition) -> Option<f64> {
    if s > 1.0 && log_power == LogPower::One && condition == MobiusCondition::Unconditional {
        zeta_and_deriv(s).ok().map(|(z, zp)| zp / (z * z))
    } else {
        None
    }
}

/// Range convention for prime-power pair sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PowerWeight {
    /// `sum_{p <= x, mp+k = q^v, v >= 2} Lambda(mp+k)/p` (p ranges to x).
    Reciprocal,
    /// `sum_{mp+k = q^v <= x, v >= 2} Lambda(mp+k)` (the image ranges to x).
    Unweighted,
}

/// Pair sums restricted to p with mp + k a proper prime power (exponent
/// >= 2), enumerated over the prime powers rather than the primes: there
/// are only O(sqrt(N) / log N) of them.
///
/// `tail_from` drops the terms with p <= x0.
pub fn prime_power_pair_sum(
    table: &PrimeTable,
    x: u64,
    form: LinearForm,
    weight: PowerWeight,
    tail_from: Option<u64>,
) -> Result<f64> {
    if x > table.limit() {
        return Err(Error::range(format!(
            "x={x} beyond table limit {}",
            table.limit()
        )));
    }
    let image_bound = match weight {
        PowerWeight::Reciprocal => {
            let v = form.max_value(x);
            if v < 4 {
                return Ok(0.0);
            }
            v as u64
        }
        PowerWeight::Unweighted => x,
    };
    let x0 = tail_from.unwrap_or(0);
    let mut acc = KahanSum::new();
    for (value, base) in enumerate_proper_prime_powers(table, image_bound) {
        // p = (value - k) / m
        let num = value as i128 - form.k() as i128;
        if num < 2 || num % form.m() as i128 != 0 {
            continue;
        }
        let p = (num / form.m() as i128) as u64;
        if p <= x0 {
            continue;
        }
        if weight == PowerWeight::Reciprocal && p > x {
            continue;
        }
        if p > table.limit() || !table.is_prime(p) {
            continue;
        }
        let lam = (base as f64).ln();
        match weight {
            PowerWeight::Reciprocal => acc.add(lam / p as f64),
            PowerWeight::Unweighted => acc.add(lam),
        }
    }
    Ok(acc.value())
}

/// Proper prime powers up to `bound`, falling back to an internal sieve for
/// the bases when the table is too short.
fn enumerate_proper_prime_powers(table: &PrimeTable, bound: u64) -> Vec<(u64, u64)> {
    let root = crate::sieve::isqrt(bound);
    if root <= table.limit() {
        let mut out = Vec::new();
        for p in table.primes_in(2, root) {
            let mut n = p * p;
            loop {
                out.push((n, p));
                match n.checked_mul(p) {
                    Some(next) if next <= bound => n = next,
                    _ => break,
                }
            }
        }
        out.sort_unstable();
        out
    } else {
        let mut out = Vec::new();
        for p in crate::sieve::simple_odd_primes(root) {
            let mut n = p * p;
            loop {
                out.push((n, p));
                match n.checked_mul(p) {
                    Some(next) if next <= bound => n = next,
                    _ => break,
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// `psi(x, q, a) = sum_{n <= x, n ≡ a (q)} Lambda(n)`.
pub fn psi_ap(table: &PrimeTable, x: u64, q: u64, a: u64) -> Result<f64> {
    let ap = APClass::new(a, q)?;
    if x > table.limit() {
        return Err(Error::range(format!(
            "x={x} beyond table limit {}",
            table.limit()
        )));
    }
    let mut acc = KahanSum::new();
    for p in table.primes_in_ap(x, ap)? {
        acc.add((p as f64).ln());
    }
    for (n, p) in proper_prime_powers(table, x) {
        if n % q == a % q {
            acc.add((p as f64).ln());
        }
    }
    Ok(acc.value())
}

/// `pi(x, q, a)`: primes `p <= x` with `p ≡ a (mod q)`.
pub fn pi_ap(table: &PrimeTable, x: u64, q: u64, a: u64) -> Result<u64> {
    let ap = APClass::new(a, q)?;
    table.count_primes_in_ap(x, ap)
}

/// Checkpointed psi(x, q, a) with main term x/phi(q).
pub fn psi_ap_trace(
    table: &PrimeTable,
    checkpoints: &[u64],
    q: u64,
    a: u64,
) -> Result<SumTrace> {
    check_grid(checkpoints)?;
    let ap = APClass::new(a, q)?;
    let x_max = *checkpoints.last().unwrap();
    if x_max > table.limit() {
        return Err(Error::range(format!(
            "grid extends beyond table limit {}",
            table.limit()
        )));
    }
    let phi = evaluate(q)?.phi as f64;
    // Merge primes and proper prime powers in ascending order.
    let powers: Vec<(u64, u64)> = proper_prime_powers(table, x_max)
        .into_iter()
        .filter(|&(n, _)| n % q == a % q)
        .collect();
    let mut trace = SumTrace::new(
        "psi-ap",
        vec![("q".into(), q.to_string()), ("a".into(), a.to_string())],
    );
    let mut acc = KahanSum::new();
    let mut ci = 0usize;
    let mut pi = 0usize;
    let flush_until = |bound: u64, acc: &KahanSum, ci: &mut usize, trace: &mut SumTrace| {
        while *ci < checkpoints.len() && checkpoints[*ci] < bound {
            let x = checkpoints[*ci] as f64;
            trace.checkpoints.push(TracePoint {
                x,
                value: acc.value(),
                main: Some(x / phi),
                residual: Some(acc.value() - x / phi),
            });
            *ci += 1;
        }
    };
    for p in table.primes_in_ap(x_max, ap)? {
        while pi < powers.len() && powers[pi].0 < p {
            flush_until(powers[pi].0, &acc, &mut ci, &mut trace);
            acc.add((powers[pi].1 as f64).ln());
            pi += 1;
        }
        flush_until(p, &acc, &mut ci, &mut trace);
        acc.add((p as f64).ln());
    }
    while pi < powers.len() {
        flush_until(powers[pi].0, &acc, &mut ci, &mut trace);
        acc.add((powers[pi].1 as f64).ln());
        pi += 1;
    }
    flush_until(u64::MAX, &acc, &mut ci, &mut trace);
    Ok(trace)
}

/// `sum_{p <= x} Lambda(mp + k)`.
pub fn lambda_pair_sum(table: &PrimeTable, x: u64, form: LinearForm) -> Result<f64> {
    form.check_range(table, x)?;
    let lookup = LambdaLookup::new(table);
    let mut acc = KahanSum::new();
    for p in table.primes_in(2, x) {
        if let Some(v) = form.value_at(p) {
            let lam = lookup.lambda(v);
            if lam != 0.0 {
                acc.add(lam);
            }
        }
    }
    Ok(acc.value())
}

/// Checkpointed `lambda_pair_sum` with main term li(x) scaled by the caller
/// if desired (main left empty here; the audit layer attaches comparisons).
pub fn lambda_pair_trace(
    table: &PrimeTable,
    checkpoints: &[u64],
    form: LinearForm,
) -> Result<SumTrace> {
    check_grid(checkpoints)?;
    let x_max = *checkpoints.last().unwrap();
    form.check_range(table, x_max)?;
    let lookup = LambdaLookup::new(table);
    let mut trace = SumTrace::new(
        "lambda-pair",
        vec![
            ("m".into(), form.m().to_string()),
            ("k".into(), form.k().to_string()),
        ],
    );
    trace.warning = form.parity_warning();
    let mut acc = KahanSum::new();
    let mut ci = 0usize;
    for p in table.primes_in(2, x_max) {
        while ci < checkpoints.len() && checkpoints[ci] < p {
            trace.checkpoints.push(TracePoint {
                x: checkpoints[ci] as f64,
                value: acc.value(),
                main: None,
                residual: None,
            });
            ci += 1;
        }
        if let Some(v) = form.value_at(p) {
            let lam = lookup.lambda(v);
            if lam != 0.0 {
                acc.add(lam);
            }
        }
    }
    while ci < checkpoints.len() {
        trace.checkpoints.push(TracePoint {
            x: checkpoints[ci] as f64,
            value: acc.value(),
            main: None,
            residual: None,
        });
        ci += 1;
    }
    Ok(trace)
}

/// `pi_f(x)`: primes p with mp + k prime and both p and mp + k at most x.
pub fn pair_count(table: &PrimeTable, x: u64, form: LinearForm) -> Result<u64> {
    if x > table.limit() {
        return Err(Error::range(format!(
            "x={x} beyond table limit {}",
            table.limit()
        )));
    }
    let mut count = 0u64;
    for p in table.primes_in(2, x) {
        match form.value_at(p) {
            Some(v) if v <= x => {
                if table.is_prime(v) {
                    count += 1;
                }
            }
            _ => {
                if form.m() > 0 && form.k() > 0 && form.value_at(p).map_or(false, |v| v > x) {
                    break; // image is increasing in p; nothing further counts
                }
            }
        }
    }
    Ok(count)
}

/// Checkpointed pair counting.
pub fn pair_count_trace(
    table: &PrimeTable,
    checkpoints: &[u64],
    form: LinearForm,
) -> Result<SumTrace> {
    check_grid(checkpoints)?;
    let x_max = *checkpoints.last().unwrap();
    if x_max > table.limit() {
        return Err(Error::range(format!(
            "grid extends beyond table limit {}",
            table.limit()
        )));
    }
    let mut trace = SumTrace::new(
        "pair-count",
        vec![
            ("m".into(), form.m().to_string()),
            ("k".into(), form.k().to_string()),
        ],
    );
    trace.warning = form.parity_warning();
    let mut count = 0u64;
    let mut pending: Vec<(u64, u64)> = Vec::new(); // (image, count at that image)
    // Count pairs ordered by max(p, mp+k) = image when m,k >= 1; walk primes
    // and record at which x each pair becomes visible.
    for p in table.primes_in(2, x_max) {
        if let Some(v) = form.value_at(p) {
            if v <= x_max && table.is_prime(v) {
                let visible_at = v.max(p);
                count += 1;
                pending.push((visible_at, count));
            }
        }
    }
    pending.sort_unstable();
    // Re-number after sorting by visibility point.
    for (i, entry) in pending.iter_mut().enumerate() {
        entry.1 = (i + 1) as u64;
    }
    let mut ci = 0usize;
    let mut current = 0u64;
    let mut pi = 0usize;
    while ci < checkpoints.len() {
        let x = checkpoints[ci];
        while pi < pending.len() && pending[pi].0 <= x {
            current = pending[pi].1;
            pi += 1;
        }
        trace.checkpoints.push(TracePoint {
            x: x as f64,
            value: current as f64,
            main: None,
            residual: None,
        });
        ci += 1;
    }
    Ok(trace)
}

/// `sum_{n <= x} Lambda(n) Lambda(mn + k) / n^s` over prime powers n.
pub fn hl_partial_sum(table: &PrimeTable, x: u64, s: f64, form: LinearForm) -> Result<f64> {
    if !(s >= 1.0) {
        return Err(Error::usage(format!(
            "Lambda*Lambda partial sum needs real s >= 1, got {s}"
        )));
    }
    form.check_range(table, x)?;
    let lookup = LambdaLookup::new(table);
    let mut acc = KahanSum::new();
    let mut add = |n: u64, lam_n: f64| {
        if let Some(v) = form.value_at(n) {
            let lam_v = lookup.lambda(v);
            if lam_v != 0.0 {
                acc.add(lam_n * lam_v / (n as f64).powf(s));
            }
        }
    };
    for p in table.primes_in(2, x) {
        add(p, (p as f64).ln());
    }
    for (n, p) in proper_prime_powers(table, x) {
        add(n, (p as f64).ln());
    }
    Ok(acc.value())
}

/// Tail of the weighted pair sum past x0, split into the part where the
/// image is prime and the part where it is a proper prime power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailSplit {
    pub total: f64,
    pub prime_pair_part: f64,
    pub prime_power_part: f64,
}

/// `sum_{x0 < p <= x} Lambda(mp + k) / p`, split by what the image is.
pub fn chebyshev_tail(table: &PrimeTable, x0: u64, x: u64, form: LinearForm) -> Result<TailSplit> {
    if x0 > x {
        return Err(Error::range(format!("tail needs x0 <= x, got {x0} > {x}")));
    }
    form.check_range(table, x)?;
    let lookup = LambdaLookup::new(table);
    let mut pair = KahanSum::new();
    let mut power = KahanSum::new();
    for p in table.primes_in(x0 + 1, x) {
        if let Some(v) = form.value_at(p) {
            if v >= 2 {
                if table.is_prime(v) {
                    pair.add((v as f64).ln() / p as f64);
                } else {
                    let lam = lookup.lambda(v);
                    if lam != 0.0 {
                        power.add(lam / p as f64);
                    }
                }
            }
        }
    }
    Ok(TailSplit {
        total: pair.value() + power.value(),
        prime_pair_part: pair.value(),
        prime_power_part: power.value(),
    })
}
