//! Exact integer and rational arithmetic: factorization, valuations,
//! exact roots, and cube-free representatives of classes in Q*/(Q*)^3.
//!
//! Factorization strips primes below 10^6 by trial division, then splits the
//! cofactor with Pollard rho (Brent's cycle detection, fixed seeds) and a
//! Miller-Rabin test. Output is deterministic.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

pub type Rational = BigRational;

const TRIAL_LIMIT: u32 = 1_000_000;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve
            .iter()
            .enumerate()
            .filter_map(|(i, &p)| p.then_some(i as u32))
            .collect()
    })
}

/// Primes p <= bound (bound at most 10^6).
pub fn primes_up_to(bound: u32) -> impl Iterator<Item = u32> {
    small_primes().iter().copied().take_while(move |&p| p <= bound)
}

/// Miller-Rabin with the first 13 prime bases; deterministic below 3.3e24.
pub fn is_prime(n: &BigUint) -> bool {
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &b in &BASES {
        let b = BigUint::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'witness: for &b in &BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_int(p: &BigInt) -> bool {
    p.is_positive() && is_prime(p.magnitude())
}

// Brent's variant of Pollard rho. Returns a nontrivial factor or None when
// this seed cycles without splitting n.
fn pollard_brent(n: &BigUint, seed: u32) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let c = BigUint::from(seed);
    let step = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let absdiff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = step(&y);
                q = (q * absdiff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += BATCH;
        }
        r *= 2;
        if r > 1 << 26 {
            return None;
        }
    }
    if g == *n {
        loop {
            ys = step(&ys);
            g = absdiff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

fn split_cofactor(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let root = n.sqrt();
    if &root * &root == n {
        split_cofactor(root.clone(), out);
        split_cofactor(root, out);
        return;
    }
    for seed in 1u32.. {
        if let Some(d) = pollard_brent(&n, seed) {
            let e = &n / &d;
            split_cofactor(d, out);
            split_cofactor(e, out);
            return;
        }
    }
}

/// Prime factorization of a positive integer, primes ascending.
pub fn factor_natural(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factor_natural(0)");
    let mut rest = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    let mut large = Vec::new();
    split_cofactor(rest, &mut large);
    large.sort();
    for p in large {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// sign * prod p^e for a nonzero rational, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedFactorization {
    pub sign: Sign,
    pub factors: Vec<(BigInt, i64)>,
}

impl SignedFactorization {
    pub fn reconstruct(&self) -> Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.factors {
            let pow = num_traits::pow(p.clone(), e.unsigned_abs() as usize);
            if *e > 0 {
                num *= pow;
            } else {
                den *= pow;
            }
        }
        if self.sign == Sign::Minus {
            num = -num;
        }
        Rational::new(num, den)
    }

    pub fn exponent_of(&self, p: &BigInt) -> i64 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }
}

pub fn factor_signed(q: &Rational) -> Result<SignedFactorization> {
    if q.is_zero() {
        return domain("cannot factor zero");
    }
    let sign = if q.is_negative() { Sign::Minus } else { Sign::Plus };
    let mut factors: Vec<(BigInt, i64)> = factor_natural(q.numer().magnitude())
        .into_iter()
        .map(|(p, e)| (BigInt::from(p), e as i64))
        .collect();
    factors.extend(
        factor_natural(q.denom().magnitude())
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), -(e as i64))),
    );
    // numerator and denominator are coprime, so no prime appears twice
    factors.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(SignedFactorization { sign, factors })
}

/// Canonical positive cube-free representative m = h k^2 of a class in Q*/(Q*)^3.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubeFreeClass {
    pub m: BigInt,
    pub h: BigInt,
    pub k: BigInt,
}

impl CubeFreeClass {
    pub fn one() -> Self {
        CubeFreeClass { m: BigInt::one(), h: BigInt::one(), k: BigInt::one() }
    }

    pub fn is_trivial(&self) -> bool {
        self.m.is_one()
    }

    /// The class of m^2, i.e. h^2 k, which generates the same cubic field.
    pub fn conjugate(&self) -> Self {
        CubeFreeClass {
            m: &self.h * &self.h * &self.k,
            h: self.k.clone(),
            k: self.h.clone(),
        }
    }

    pub fn from_exponents<'a>(pairs: impl IntoIterator<Item = (&'a BigInt, i64)>) -> Self {
        let mut h = BigInt::one();
        let mut k = BigInt::one();
        for (p, e) in pairs {
            match e.rem_euclid(3) {
                1 => h *= p,
                2 => k *= p,
                _ => {}
            }
        }
        CubeFreeClass { m: &h * &k * &k, h, k }
    }
}

pub fn cube_free_class(q: &Rational) -> Result<CubeFreeClass> {
    let f = factor_signed(q)?;
    Ok(CubeFreeClass::from_exponents(f.factors.iter().map(|(p, e)| (p, *e))))
}

/// Exact p-adic valuation; `p` must be prime.
pub fn valuation(q: &Rational, p: &BigInt) -> Result<i64> {
    if q.is_zero() {
        return domain("valuation of zero");
    }
    if !is_prime_int(p) {
        return domain(format!("{p} is not prime"));
    }
    Ok(int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64)
}

pub(crate) fn int_valuation(n: &BigInt, p: &BigInt) -> u64 {
    let mut n = n.abs();
    let mut e = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        e += 1;
    }
    e
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Residue9 {
    PlusOne,
    MinusOne,
    Other,
}

impl Residue9 {
    pub fn is_unit_class(self) -> bool {
        self != Residue9::Other
    }
}

/// Classifies m mod 9 as +1, -1 or neither; m must be prime to 3.
pub fn residue_mod9(m: &BigInt) -> Result<Residue9> {
    let r = m.mod_floor(&BigInt::from(9)).to_u8().expect("residue below 9");
    match r {
        1 => Ok(Residue9::PlusOne),
        8 => Ok(Residue9::MinusOne),
        0 | 3 | 6 => domain(format!("{m} is divisible by 3")),
        _ => Ok(Residue9::Other),
    }
}

/// True when m is congruent to +-1 mod 9. Multiples of 3 are not.
pub fn is_pm_one_mod9(m: &BigInt) -> bool {
    residue_mod9(m).map(Residue9::is_unit_class).unwrap_or(false)
}

pub fn exact_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_nth_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

pub fn rational_nth_root(q: &Rational, k: u32) -> Option<Rational> {
    let num = exact_nth_root(q.numer(), k)?;
    let den = exact_nth_root(q.denom(), k)?;
    Some(Rational::new(num, den))
}

pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    rational_nth_root(q, 2)
}

pub fn rational_cbrt(q: &Rational) -> Option<Rational> {
    rational_nth_root(q, 3)
}

pub fn is_squarefree(n: &BigInt) -> bool {
    !n.is_zero() && factor_natural(n.magnitude()).iter().all(|(_, e)| *e == 1)
}

pub fn is_cube_free(n: &BigInt) -> bool {
    !n.is_zero() && factor_natural(n.magnitude()).iter().all(|(_, e)| *e < 3)
}

/// Distinct prime divisors of a nonzero integer, ascending.
pub fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    factor_natural(n.magnitude())
        .into_iter()
        .map(|(p, _)| BigInt::from(p))
        .collect()
}

fn eval_int(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().fold(BigInt::zero(), |acc, c| acc * x + c)
}

// Integer points bracketing the real roots of a (degree <= 2) polynomial.
fn critical_brackets(deriv: &[BigInt]) -> Vec<BigInt> {
    let deriv: Vec<BigInt> = deriv.iter().skip_while(|c| c.is_zero()).cloned().collect();
    match deriv.len() {
        2 => {
            let est = (-&deriv[1]).div_floor(&deriv[0]);
            vec![&est - 1, est.clone(), &est + 1]
        }
        3 => {
            let (a, b, c) = (&deriv[0], &deriv[1], &deriv[2]);
            let disc = b * b - BigInt::from(4) * a * c;
            if disc.is_negative() {
                return Vec::new();
            }
            let s = disc.sqrt();
            let den = BigInt::from(2) * a;
            let mut out = Vec::new();
            for num in [-b - &s, -b + &s] {
                let est = num.div_floor(&den);
                out.extend([&est - 2, &est - 1, est.clone(), &est + 1, &est + 2]);
            }
            out
        }
        _ => Vec::new(),
    }
}

/// All integer roots of a nonzero integer polynomial of degree at most 3,
/// coefficients from the leading term down. Ascending, without repeats.
pub fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let coeffs: Vec<BigInt> = coeffs.iter().skip_while(|c| c.is_zero()).cloned().collect();
    assert!(coeffs.len() <= 4, "degree above 3");
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Vec::new();
    }
    let lead = coeffs[0].abs();
    let bound: BigInt = coeffs[1..].iter().map(|c| c.abs()).max().unwrap_or_default() / &lead + 1;
    let deriv: Vec<BigInt> = coeffs[..degree]
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigInt::from(degree - i))
        .collect();
    let mut marks = vec![-&bound, bound.clone()];
    marks.extend(critical_brackets(&deriv).into_iter().filter(|x| x.abs() <= bound));
    marks.sort();
    marks.dedup();

    let mut roots = Vec::new();
    for x in &marks {
        if eval_int(&coeffs, x).is_zero() {
            roots.push(x.clone());
        }
    }
    // the polynomial is monotone between consecutive marks
    for w in marks.windows(2) {
        let (mut lo, mut hi) = (w[0].clone(), w[1].clone());
        let flo = eval_int(&coeffs, &lo);
        let fhi = eval_int(&coeffs, &hi);
        if flo.is_zero() || fhi.is_zero() || flo.signum() == fhi.signum() {
            continue;
        }
        let rising = fhi.is_positive();
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) >> 1;
            let fm = eval_int(&coeffs, &mid);
            if fm.is_zero() {
                roots.push(mid);
                break;
            }
            if fm.is_positive() == rising {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// All rational roots of a nonzero rational polynomial of degree at most 3.
pub fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let coeffs: Vec<Rational> = coeffs.iter().skip_while(|c| c.is_zero()).cloned().collect();
    if coeffs.len() <= 1 {
        return Vec::new();
    }
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    // x = y / lead turns the polynomial into a monic integer one in y
    let lead = ints[0].clone();
    let degree = ints.len() - 1;
    let monic: Vec<BigInt> = ints
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if i == 0 {
                BigInt::one()
            } else {
                c * num_traits::pow(lead.clone(), i - 1)
            }
        })
        .collect();
    debug_assert_eq!(monic.len(), degree + 1);
    let mut out: Vec<Rational> = integer_roots(&monic)
        .into_iter()
        .map(|y| Rational::new(y, lead.clone()))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub(crate) fn parse_error(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses "num/den" or an integer, both decimal.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        let t = t.trim();
        let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_error(format!("invalid integer {t:?}")));
        }
        t.parse::<BigInt>().map_err(|e| parse_error(format!("invalid integer {t:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(parse_error(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

pub fn parse_integer(s: &str) -> Result<BigInt> {
    let q = parse_rational(s)?;
    if !q.is_integer() || s.contains('/') {
        return Err(parse_error(format!("expected an integer, got {s:?}")));
    }
    Ok(q.to_integer())
}
