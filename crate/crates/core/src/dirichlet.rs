//! Dirichlet character groups with exact root-of-unity values, twisted
//! Chebyshev sums, and the character decomposition of psi(x, q, a).
//!
//! Character values are carried as rational exponents k/N of e^{2*pi*i}
//! (N = group exponent) and combined by modular addition; conversion to
//! complex floats happens once per aggregated sum. Orthogonality checks
//! therefore run in exact integer arithmetic.
//!
//! The unit group is decomposed as a product of cyclic parts: a primitive
//! root for odd prime powers, the {-1, 5} generator pair for 2^e (e >= 3),
//! and CRT across the prime-power factors of q. A single discrete logarithm
//! only parameterizes the cyclic case, so the multi-generator form is used
//! throughout.

use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::sieve::{gcd, PrimeTable};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Group construction keeps a discrete-log table per residue, so q is
/// capped where those tables stay cheap.
pub const GROUP_MODULUS_CEILING: u64 = 1_000_000;

const NO_DLOG: u32 = u32::MAX;

/// One cyclic factor of the unit group mod q.
#[derive(Debug, Clone)]
struct GroupPart {
    /// Generator as a residue mod q (via CRT lifting), kept for reference.
    generator: u64,
    order: u64,
}

/// The full dual group mod q.
pub struct CharacterGroup {
    q: u64,
    parts: Vec<GroupPart>,
    /// lcm of the part orders.
    exponent: u64,
    phi: u64,
    /// Flattened discrete-log vectors: entry `r * parts.len() + j` is the
    /// exponent of residue r on generator j, or NO_DLOG when gcd(r, q) > 1.
    dlog: Vec<u32>,
}

/// Exact character value: zero, or the root of unity e^{2*pi*i*num/den}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharValue {
    Zero,
    Root { num: u64, den: u64 },
}

impl CharValue {
    pub fn to_complex(self) -> Complex64 {
        match self {
            CharValue::Zero => Complex64::new(0.0, 0.0),
            CharValue::Root { num, den } => {
                let theta = 2.0 * std::f64::consts::PI * (num as f64) / (den as f64);
                Complex64::new(theta.cos(), theta.sin())
            }
        }
    }

    /// Exponent reduced to lowest terms.
    pub fn reduced(self) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root { num, den } => {
                if num == 0 {
                    CharValue::Root { num: 0, den: 1 }
                } else {
                    let g = gcd(num, den);
                    CharValue::Root {
                        num: num / g,
                        den: den / g,
                    }
                }
            }
        }
    }
}

/// One character, indexed by its exponent vector over the group generators.
#[derive(Clone)]
pub struct Character<'g> {
    group: &'g CharacterGroup,
    index: Vec<u64>,
}

impl CharacterGroup {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    /// lcm of the cyclic part orders; the common denominator for every
    /// character value exponent.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn part_orders(&self) -> Vec<u64> {
        self.parts.iter().map(|p| p.order).collect()
    }

    pub fn generators(&self) -> Vec<(u64, u64)> {
        self.parts.iter().map(|p| (p.generator, p.order)).collect()
    }

    pub fn is_cyclic(&self) -> bool {
        self.parts.len() <= 1
    }

    /// Discrete-log vector of a residue, or None when gcd(n, q) > 1.
    pub fn dlog_vector(&self, n: u64) -> Option<Vec<u64>> {
        let r = (n % self.q) as usize;
        let w = self.parts.len();
        if w == 0 {
            return if gcd(n % self.q.max(1), self.q) == 1 || self.q == 1 {
                Some(Vec::new())
            } else {
                None
            };
        }
        let slice = &self.dlog[r * w..(r + 1) * w];
        if slice[0] == NO_DLOG {
            None
        } else {
            Some(slice.iter().map(|&v| v as u64).collect())
        }
    }

    pub fn principal(&self) -> Character<'_> {
        Character {
            group: self,
            index: vec![0; self.parts.len()],
        }
    }

    /// All phi(q) characters, principal first, in mixed-radix index order
    /// (last generator's exponent varies fastest).
    pub fn characters(&self) -> Vec<Character<'_>> {
        let mut out = Vec::with_capacity(self.phi as usize);
        let mut index = vec![0u64; self.parts.len()];
        loop {
            out.push(Character {
                group: self,
                index: index.clone(),
            });
            let mut j = self.parts.len();
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                index[j] += 1;
                if index[j] < self.parts[j].order {
                    break;
                }
                index[j] = 0;
            }
        }
    }
}

impl<'g> Character<'g> {
    pub fn group(&self) -> &'g CharacterGroup {
        self.group
    }

    pub fn index(&self) -> &[u64] {
        &self.index
    }

    pub fn is_principal(&self) -> bool {
        self.index.iter().all(|&c| c == 0)
    }

    /// Multiplicative order of the character in the dual group.
    pub fn order(&self) -> u64 {
        let mut ord = 1u64;
        for (c, part) in self.index.iter().zip(&self.group.parts) {
            let o = part.order / gcd(*c, part.order);
            ord = lcm(ord, o);
        }
        ord
    }

    /// Exponent k (over denominator N = group exponent) with
    /// chi(n) = e^{2*pi*i*k/N}, or None when chi(n) = 0.
    #[inline]
    pub fn exponent_of(&self, n: u64) -> Option<u64> {
        if n == 0 {
            return if self.group.q == 1 { Some(0) } else { None };
        }
        let g = self.group;
        if g.parts.is_empty() {
            // q = 1 or 2: the group is trivial.
            return if gcd(n, g.q.max(1)) == 1 || g.q == 1 {
                Some(0)
            } else {
                None
            };
        }
        let r = (n % g.q) as usize;
        let w = g.parts.len();
        let slice = &g.dlog[r * w..(r + 1) * w];
        if slice[0] == NO_DLOG {
            return None;
        }
        let big_n = g.exponent;
        let mut acc = 0u64;
        for j in 0..w {
            let scale = big_n / g.parts[j].order;
            acc = (acc + self.index[j] * slice[j] as u64 % big_n * scale) % big_n;
        }
        Some(acc)
    }

    /// Exact value of chi at n.
    pub fn eval(&self, n: u64) -> CharValue {
        match self.exponent_of(n) {
            None => CharValue::Zero,
            Some(k) => CharValue::Root {
                num: k,
                den: self.group.exponent,
            },
        }
    }

    /// Exponent of the conjugate value at n.
    pub fn conj_exponent_of(&self, n: u64) -> Option<u64> {
        self.exponent_of(n)
            .map(|k| if k == 0 { 0 } else { self.group.exponent - k })
    }
}

/// Build the full dual group mod q.
pub fn character_group(q: u64) -> Result<CharacterGroup> {
    if q == 0 {
        return Err(Error::usage("modulus q must be >= 1"));
    }
    if q > GROUP_MODULUS_CEILING {
        return Err(Error::usage(format!(
            "character group modulus {q} exceeds ceiling {GROUP_MODULUS_CEILING}"
        )));
    }
    // Cyclic parts per prime-power factor of q, each with a local
    // discrete-log table mod that factor.
    struct LocalPart {
        modulus: u64,
        generator: u64,
        order: u64,
        table: Vec<u32>, // residue mod `modulus` -> exponent, NO_DLOG if none
    }

    let mut locals: Vec<LocalPart> = Vec::new();
    for (p, e) in factorize(q) {
        let pe = p.pow(e);
        if p == 2 {
            match e {
                1 => {} // (Z/2)* is trivial
                2 => {
                    locals.push(LocalPart {
                        modulus: 4,
                        generator: 3,
                        order: 2,
                        table: {
                            let mut t = vec![NO_DLOG; 4];
                            t[1] = 0;
                            t[3] = 1;
                            t
                        },
                    });
                }
                _ => {
                    // (Z/2^e)* = <-1> x <5>.
                    let half = pe / 4; // order of 5
                    let mut sign = vec![NO_DLOG; pe as usize];
                    let mut five = vec![NO_DLOG; pe as usize];
                    let mut v = 1u64;
                    for t in 0..half {
                        sign[v as usize] = 0;
                        five[v as usize] = t as u32;
                        let neg = (pe - v) as usize;
                        sign[neg] = 1;
                        five[neg] = t as u32;
                        v = v * 5 % pe;
                    }
                    locals.push(LocalPart {
                        modulus: pe,
                        generator: pe - 1,
                        order: 2,
                        table: sign,
                    });
                    locals.push(LocalPart {
                        modulus: pe,
                        generator: 5,
                        order: half,
                        table: five,
                    });
                }
            }
        } else {
            let order = pe / p * (p - 1);
            let g = smallest_primitive_root(pe, order);
            let mut table = vec![NO_DLOG; pe as usize];
            let mut v = 1u64;
            for t in 0..order {
                table[v as usize] = t as u32;
                v = v * g % pe;
            }
            locals.push(LocalPart {
                modulus: pe,
                generator: g,
                order,
                table,
            });
        }
    }

    let phi: u64 = locals.iter().map(|l| l.order).product();
    let exponent = locals.iter().fold(1u64, |acc, l| lcm(acc, l.order));
    let w = locals.len();
    let mut dlog = vec![NO_DLOG; (q as usize) * w.max(1)];
    if w > 0 {
        for r in 0..q {
            let mut ok = true;
            for l in locals.iter() {
                if l.table[(r % l.modulus) as usize] == NO_DLOG {
                    ok = false;
                    break;
                }
            }
            // r coprime to every sieved factor but sharing a factor with an
            // unrepresented part (only 2^1) must still be rejected.
            if gcd(r, q) != 1 {
                ok = false;
            }
            if ok {
                for (j, l) in locals.iter().enumerate() {
                    dlog[r as usize * w + j] = l.table[(r % l.modulus) as usize];
                }
            }
        }
    }

    let parts = locals
        .iter()
        .map(|l| GroupPart {
            // Lift the local generator to a residue mod q that is 1 at the
            // other factors (CRT); for reference output only.
            generator: crt_lift(l.generator, l.modulus, q),
            order: l.order,
        })
        .collect();

    Ok(CharacterGroup {
        q,
        parts,
        exponent,
        phi,
        dlog,
    })
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn crt_lift(residue: u64, modulus: u64, q: u64) -> u64 {
    if modulus == q {
        return residue;
    }
    let other = q / modulus;
    // x ≡ residue (mod modulus), x ≡ 1 (mod other)
    for k in 0..modulus {
        let x = k * other + 1;
        if x % modulus == residue % modulus {
            return x % q;
        }
    }
    residue % q
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Smallest generator of the (cyclic) unit group mod an odd prime power.
fn smallest_primitive_root(pe: u64, order: u64) -> u64 {
    let factors = factorize(order);
    'next: for g in 2..pe {
        if gcd(g, pe) != 1 {
            continue;
        }
        for &(f, _) in &factors {
            if pow_mod_u64(g, order / f, pe) == 1 {
                continue 'next;
            }
        }
        return g;
    }
    unreachable!("no primitive root mod {pe}")
}

/// Exact sum of a multiset of roots of unity given by exponents over a
/// common denominator `den`.
///
/// The sums this crate needs are always either all-zero exponents (sum = the
/// multiplicity) or a uniform multiset of all m-th roots (sum = 0): character
/// values over a group, or all characters at a fixed element, fall into these
/// shapes by orthogonality. Any other shape signals a bug.
pub fn exact_root_sum<I: IntoIterator<Item = u64>>(exponents: I, den: u64) -> Result<i64> {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut total = 0u64;
    for k in exponents {
        debug_assert!(k < den);
        *counts.entry(k).or_insert(0) += 1;
        total += 1;
    }
    if total == 0 {
        return Ok(0);
    }
    if counts.len() == 1 && counts.contains_key(&0) {
        return Ok(total as i64);
    }
    let mut g = den;
    for &k in counts.keys() {
        g = gcd(g, k);
    }
    let m = den / g;
    let per = total / m;
    let uniform = counts.len() as u64 == m
        && counts.values().all(|&c| c == per)
        && counts.keys().enumerate().all(|(i, &k)| k == i as u64 * g);
    if uniform && m > 1 {
        return Ok(0);
    }
    Err(Error::internal(
        "root-of-unity multiset is neither all-ones nor a uniform cyclic set",
    ))
}

/// Exact value of `sum_{n mod q} chi(n)` (zero terms excluded by
/// definition): phi(q) for the principal character, 0 otherwise.
pub fn character_sum_over_residues(chi: &Character<'_>) -> Result<i64> {
    let g = chi.group();
    let exps = (1..=g.q().max(1)).filter_map(|n| chi.exponent_of(n));
    exact_root_sum(exps, g.exponent())
}

/// Exact value of `sum_{chi mod q} chi(a) * conj(chi(b))` for reduced a, b:
/// phi(q) when a ≡ b (mod q), 0 otherwise.
pub fn character_sum_over_characters(group: &CharacterGroup, a: u64, b: u64) -> Result<i64> {
    if gcd(a % group.q().max(1), group.q()) != 1 && group.q() > 1 {
        return Err(Error::usage(format!("a={a} not coprime to q={}", group.q())));
    }
    if gcd(b % group.q().max(1), group.q()) != 1 && group.q() > 1 {
        return Err(Error::usage(format!("b={b} not coprime to q={}", group.q())));
    }
    let n = group.exponent();
    let exps = group.characters().into_iter().map(|chi| {
        let ka = chi.exponent_of(a).expect("a reduced");
        let kb = chi.conj_exponent_of(b).expect("b reduced");
        (ka + kb) % n
    });
    let exps: Vec<u64> = exps.collect();
    exact_root_sum(exps, n)
}

/// `sum_{chi != chi0 mod q} conj(chi(a))`, computed by direct summation in
/// exact exponent arithmetic. By orthogonality this equals
/// phi(q) - 1 when a ≡ 1 (mod q) and -1 otherwise; the invariant suites
/// compare against that closed form.
pub fn nonprincipal_character_sum(q: u64, a: u64) -> Result<Complex64> {
    let group = character_group(q)?;
    if gcd(a % q.max(1), q) != 1 && q > 1 {
        return Err(Error::usage(format!("gcd(a={a}, q={q}) must be 1")));
    }
    let n = group.exponent();
    let exps: Vec<u64> = group
        .characters()
        .into_iter()
        .map(|chi| chi.conj_exponent_of(a).expect("a reduced"))
        .collect();
    let full = exact_root_sum(exps, n)?;
    // Subtract the principal character's contribution, exactly 1.
    Ok(Complex64::new((full - 1) as f64, 0.0))
}

/// A twisted Chebyshev sum record: the point, the character's exponent
/// vector, and the complex value. |value| <= psi(x) always (term-by-term,
/// since |chi(n)| <= 1).
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedPsi {
    pub x: u64,
    pub q: u64,
    pub chi_index: Vec<u64>,
    pub value: Complex64,
}

/// `psi_twisted` packaged as a record.
pub fn psi_twisted_record(
    table: &PrimeTable,
    x: u64,
    chi: &Character<'_>,
) -> Result<TwistedPsi> {
    Ok(TwistedPsi {
        x,
        q: chi.group().q(),
        chi_index: chi.index().to_vec(),
        value: psi_twisted(table, x, chi)?,
    })
}

/// Twisted Chebyshev sum `psi(x, chi) = sum_{n <= x} chi(n) Lambda(n)`,
/// summed over prime powers in increasing order.
pub fn psi_twisted(table: &PrimeTable, x: u64, chi: &Character<'_>) -> Result<Complex64> {
    if x > table.limit() {
        return Err(Error::range(format!(
            "psi_twisted x={x} beyond table limit {}",
            table.limit()
        )));
    }
    let g = chi.group();
    let q = g.q();
    // Character value exponent per residue class, computed once.
    let mut res_exp: Vec<Option<u64>> = Vec::with_capacity(q.max(1) as usize);
    for r in 0..q.max(1) {
        // exponent_of reduces mod q; q = 1 handled inside.
        res_exp.push(chi.exponent_of(if q <= 1 { 1 } else { r }));
    }
    let n_den = g.exponent();
    let roots: Vec<Complex64> = (0..n_den)
        .map(|k| {
            CharValue::Root { num: k, den: n_den }.to_complex()
        })
        .collect();

    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    let mut add = |n: u64, lambda: f64| {
        let r = if q <= 1 { 0 } else { (n % q) as usize };
        if let Some(k) = res_exp[r] {
            let z = roots[k as usize];
            re.add(z.re * lambda);
            im.add(z.im * lambda);
        }
    };
    for p in table.primes_in(2, x) {
        add(p, (p as f64).ln());
    }
    for (n, p) in proper_prime_powers(table, x) {
        add(n, (p as f64).ln());
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// psi(x, chi) for every character of the group, sharing one sweep.
pub fn psi_twisted_all(
    table: &PrimeTable,
    x: u64,
    group: &CharacterGroup,
) -> Result<Vec<Complex64>> {
    if x > table.limit() {
        return Err(Error::range(format!(
            "psi_twisted x={x} beyond table limit {}",
            table.limit()
        )));
    }
    let chars = group.characters();
    let q = group.q();
    let n_den = group.exponent();
    let roots: Vec<Complex64> = (0..n_den)
        .map(|k| CharValue::Root { num: k, den: n_den }.to_complex())
        .collect();
    // Exponent per (character, residue).
    let mut res_exp: Vec<Vec<Option<u64>>> = Vec::with_capacity(chars.len());
    for chi in &chars {
        let mut v = Vec::with_capacity(q.max(1) as usize);
        for r in 0..q.max(1) {
            v.push(chi.exponent_of(if q <= 1 { 1 } else { r }));
        }
        res_exp.push(v);
    }
    let mut re: Vec<KahanSum> = vec![KahanSum::new(); chars.len()];
    let mut im: Vec<KahanSum> = vec![KahanSum::new(); chars.len()];
    let add = |n: u64, lambda: f64, re: &mut [KahanSum], im: &mut [KahanSum]| {
        let r = if q <= 1 { 0 } else { (n % q) as usize };
        for (ci, exps) in res_exp.iter().enumerate() {
            if let Some(k) = exps[r] {
                let z = roots[k as usize];
                re[ci].add(z.re * lambda);
                im[ci].add(z.im * lambda);
            }
        }
    };
    for p in table.primes_in(2, x) {
        add(p, (p as f64).ln(), &mut re, &mut im);
    }
    for (n, p) in proper_prime_powers(table, x) {
        add(n, (p as f64).ln(), &mut re, &mut im);
    }
    Ok(re
        .iter()
        .zip(&im)
        .map(|(r, i)| Complex64::new(r.value(), i.value()))
        .collect())
}

/// Character decomposition
/// `psi(x, q, a) = (1/phi(q)) sum_chi conj(chi(a)) psi(x, chi)`,
/// evaluated literally; the imaginary part must vanish to rounding.
pub fn psi_ap_via_characters(table: &PrimeTable, x: u64, q: u64, a: u64) -> Result<f64> {
    let group = character_group(q)?;
    if q > 1 && gcd(a % q, q) != 1 {
        return Err(Error::usage(format!("gcd(a={a}, q={q}) must be 1")));
    }
    let twisted = psi_twisted_all(table, x, &group)?;
    psi_ap_from_twisted(&group, &twisted, a)
}

/// Combine precomputed psi(x, chi) values into psi(x, q, a).
pub fn psi_ap_from_twisted(
    group: &CharacterGroup,
    twisted: &[Complex64],
    a: u64,
) -> Result<f64> {
    let chars = group.characters();
    if chars.len() != twisted.len() {
        return Err(Error::usage("twisted array does not match character count"));
    }
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for (chi, &psi) in chars.iter().zip(twisted) {
        let k = chi
            .conj_exponent_of(a)
            .ok_or_else(|| Error::usage(format!("a={a} not reduced mod {}", group.q())))?;
        let z = CharValue::Root {
            num: k,
            den: group.exponent(),
        }
        .to_complex();
        re.add(z.re * psi.re - z.im * psi.im);
        im.add(z.re * psi.im + z.im * psi.re);
    }
    let phi = group.phi() as f64;
    let value = re.value() / phi;
    let imag = im.value() / phi;
    if imag.abs() > 1e-9 * (1.0 + value.abs()) {
        return Err(Error::internal(format!(
            "imaginary part {imag} of psi(x, q, a) decomposition did not vanish"
        )));
    }
    Ok(value)
}

/// Proper prime powers p^e <= x with e >= 2, as (value, base) pairs in
/// increasing value order.
pub fn proper_prime_powers(table: &PrimeTable, x: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let root = crate::sieve::isqrt(x);
    for p in table.primes_in(2, root) {
        let mut n = p * p;
        loop {
            out.push((n, p));
            match n.checked_mul(p) {
                Some(next) if next <= x => n = next,
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_structure_examples() {
        let g8 = character_group(8).unwrap();
        assert_eq!(g8.phi(), 4);
        let mut orders = g8.part_orders();
        orders.sort();
        assert_eq!(orders, vec![2, 2]); // C2 x C2

        let g5 = character_group(5).unwrap();
        assert_eq!(g5.phi(), 4);
        assert_eq!(g5.part_orders(), vec![4]); // cyclic, generator 2
        assert_eq!(g5.generators()[0].0, 2);

        let g1 = character_group(1).unwrap();
        assert_eq!(g1.phi(), 1);
        assert_eq!(g1.characters().len(), 1);
        assert_eq!(g1.principal().eval(7), CharValue::Root { num: 0, den: 1 });
    }

    #[test]
    fn orders_multiply_to_phi() {
        for q in 1..=300u64 {
            let g = character_group(q).unwrap();
            let prod: u64 = g.part_orders().iter().product();
            assert_eq!(prod, g.phi(), "q={q}");
            assert_eq!(g.characters().len() as u64, g.phi(), "q={q}");
            // Recombining generators with stored exponents recovers each
            // residue.
            if q == 1 {
                continue;
            }
            for r in 1..=q {
                if gcd(r, q) != 1 {
                    assert!(g.dlog_vector(r).is_none(), "q={q} r={r}");
                    continue;
                }
                let v = g.dlog_vector(r).expect("reduced residue has a dlog");
                let mut acc = 1u64;
                for ((gen, _), e) in g.generators().into_iter().zip(v) {
                    acc = acc * pow_mod_u64(gen, e, q) % q;
                }
                assert_eq!(acc % q, r % q, "q={q} r={r}");
            }
        }
    }

    #[test]
    fn principal_is_one_on_reduced_residues() {
        for q in [1u64, 2, 4, 7, 12, 16, 45] {
            let g = character_group(q).unwrap();
            let chi0 = g.principal();
            for n in 1..=60u64 {
                match chi0.eval(n) {
                    CharValue::Root { num, .. } => {
                        assert_eq!(num, 0);
                        assert!(q == 1 || gcd(n, q) == 1);
                    }
                    CharValue::Zero => assert!(q > 1 && gcd(n, q) > 1),
                }
            }
        }
    }

    #[test]
    fn nonprincipal_mod4_at_3_is_minus_one() {
        let g = character_group(4).unwrap();
        let chars = g.characters();
        assert_eq!(chars.len(), 2);
        let chi = &chars[1];
        assert!(!chi.is_principal());
        let v = chi.eval(3).reduced();
        assert_eq!(v, CharValue::Root { num: 1, den: 2 }); // -1
        let z = chi.eval(3).to_complex();
        assert!((z.re + 1.0).abs() < 1e-15 && z.im.abs() < 1e-15);
    }

    #[test]
    fn characters_vanish_off_reduced_residues() {
        let g = character_group(6).unwrap();
        for chi in g.characters() {
            assert_eq!(chi.eval(3), CharValue::Zero);
            assert_eq!(chi.eval(4), CharValue::Zero);
        }
    }

    #[test]
    fn complete_multiplicativity() {
        for q in [3u64, 8, 9, 12, 35, 72, 100] {
            let g = character_group(q).unwrap();
            for chi in g.characters() {
                for m in 1..=30u64 {
                    for n in 1..=30u64 {
                        let lhs = chi.eval(m * n);
                        let prod = match (chi.exponent_of(m), chi.exponent_of(n)) {
                            (Some(a), Some(b)) => CharValue::Root {
                                num: (a + b) % g.exponent(),
                                den: g.exponent(),
                            },
                            _ => CharValue::Zero,
                        };
                        assert_eq!(lhs, prod, "q={q} m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn orthogonality_small_moduli_exact() {
        for q in 1..=60u64 {
            let g = character_group(q).unwrap();
            for chi in g.characters() {
                let s = character_sum_over_residues(&chi).unwrap();
                let expect = if chi.is_principal() { g.phi() as i64 } else { 0 };
                assert_eq!(s, expect, "q={q}");
            }
            for a in 1..=q {
                if gcd(a, q) != 1 {
                    continue;
                }
                for b in 1..=q {
                    if gcd(b, q) != 1 {
                        continue;
                    }
                    let s = character_sum_over_characters(&g, a, b).unwrap();
                    let expect = if a % q == b % q { g.phi() as i64 } else { 0 };
                    assert_eq!(s, expect, "q={q} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn nonprincipal_sum_examples() {
        let s = nonprincipal_character_sum(5, 2).unwrap();
        assert_eq!(s, Complex64::new(-1.0, 0.0));
        let s = nonprincipal_character_sum(7, 1).unwrap();
        assert_eq!(s, Complex64::new(5.0, 0.0)); // phi(7) - 1
        let s = nonprincipal_character_sum(12, 5).unwrap();
        assert_eq!(s, Complex64::new(-1.0, 0.0));
        assert!(nonprincipal_character_sum(12, 4).is_err());
    }

    #[test]
    fn psi_twisted_examples() {
        let t = PrimeTable::build(1000).unwrap();
        let g = character_group(4).unwrap();
        let chars = g.characters();

        let v0 = psi_twisted(&t, 10, &chars[0]).unwrap();
        let expect0 = 3f64.ln() + 5f64.ln() + 7f64.ln() + 3f64.ln();
        assert!((v0.re - expect0).abs() < 1e-12 && v0.im.abs() < 1e-12);

        let v1 = psi_twisted(&t, 10, &chars[1]).unwrap();
        let expect1 = 5f64.ln() - 7f64.ln();
        assert!((v1.re - expect1).abs() < 1e-12 && v1.im.abs() < 1e-12);

        let ve = psi_twisted(&t, 1, &chars[1]).unwrap();
        assert_eq!(ve, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn psi_twisted_bounded_by_untwisted() {
        let t = PrimeTable::build(2000).unwrap();
        // psi(x) with the trivial character mod 1.
        let g1 = character_group(1).unwrap();
        let psi_x = psi_twisted(&t, 2000, &g1.principal()).unwrap().re;
        for q in [3u64, 5, 8, 12] {
            let g = character_group(q).unwrap();
            for chi in g.characters() {
                let rec = psi_twisted_record(&t, 2000, &chi).unwrap();
                assert_eq!(rec.x, 2000);
                assert_eq!(rec.q, q);
                assert!(rec.value.norm() <= psi_x + 1e-9, "q={q}");
            }
        }
    }

    #[test]
    fn psi_ap_decomposition_examples() {
        let t = PrimeTable::build(1000).unwrap();
        let v = psi_ap_via_characters(&t, 10, 4, 1).unwrap();
        assert!((v - 15f64.ln()).abs() < 1e-12);

        // Trivial group: psi(10) itself.
        let v = psi_ap_via_characters(&t, 10, 1, 1).unwrap();
        let psi10 = 3.0 * 2f64.ln() + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((v - psi10).abs() < 1e-12);

        assert!(psi_ap_via_characters(&t, 10, 4, 2).is_err());
    }

    #[test]
    fn group_ceiling_enforced() {
        assert!(character_group(0).is_err());
        assert!(character_group(GROUP_MODULUS_CEILING + 1).is_err());
    }

    #[test]
    fn proper_prime_powers_small() {
        let t = PrimeTable::build(1000).unwrap();
        let pp = proper_prime_powers(&t, 100);
        let values: Vec<u64> = pp.iter().map(|&(n, _)| n).collect();
        assert_eq!(values, vec![4, 8, 9, 16, 25, 27, 32, 49, 64, 81]);
        assert!(pp.iter().all(|&(n, p)| {
            let mut m = n;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            m == 1 && e >= 2
        }));
    }
}
