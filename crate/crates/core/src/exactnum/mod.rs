//! Exact arithmetic kernel: big rationals, rational points of the circle,
//! p-adic integers restricted to `Z_(p)` (rationals with p-coprime
//! denominator) and lattices between `Z^r` and `Q^r`.

mod lattice;

pub use lattice::{FracLattice, IntLattice};

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: Int) -> Rat {
    Rat::from_integer(n)
}

/// Always `num/den`, also for integers, so serialized values have one shape.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"n/d"` or `"n"`. Anything else (decimals, symbols) is rejected
/// as not exactly representable.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::NonRationalInput(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: Int = n.parse().map_err(|_| bad())?;
    let d: Int = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(n, d))
}

/// Representative of `r` modulo 1 in `[0, 1)`.
pub fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

/// Representative of `r` modulo `m` in `[0, m)`, for `m > 0`.
pub fn rat_mod(r: &Rat, m: &Rat) -> Rat {
    r - (r / m).floor() * m
}

pub fn pow_u64(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

pub fn int_pow(base: u64, exp: u32) -> Int {
    num_traits::pow(Int::from(base), exp as usize)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Largest power of `p` dividing `n`, and the cofactor.
pub fn split_p_part(n: u64, p: u64) -> (u64, u64) {
    let mut pp = 1;
    let mut rest = n;
    while rest % p == 0 {
        rest /= p;
        pp *= p;
    }
    (pp, rest)
}

/// Smallest `s` with `d | p^s`, if `d` is a power of `p`.
pub fn p_power_exponent(d: &Int, p: u64) -> Option<u32> {
    let pb = Int::from(p);
    let mut d = d.abs();
    let mut s = 0;
    while !d.is_one() {
        if d.is_zero() || !(&d % &pb).is_zero() {
            return None;
        }
        d /= &pb;
        s += 1;
    }
    Some(s)
}

pub fn lcm_int(a: &Int, b: &Int) -> Int {
    a.lcm(b)
}

/// A point of `T = R/Z` with rational angle, kept in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CircleVal(Rat);

impl CircleVal {
    pub fn new(r: Rat) -> Self {
        CircleVal(frac(&r))
    }

    pub fn zero() -> Self {
        CircleVal(Rat::zero())
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        CircleVal::new(rat(n, d))
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn denom(&self) -> &Int {
        self.0.denom()
    }

    pub fn add(&self, other: &CircleVal) -> CircleVal {
        CircleVal::new(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &CircleVal) -> CircleVal {
        CircleVal::new(&self.0 - &other.0)
    }

    pub fn scale(&self, n: &Int) -> CircleVal {
        CircleVal::new(&self.0 * Rat::from_integer(n.clone()))
    }

    /// Arc-length distance on `T`, in `[0, 1/2]`.
    pub fn dist(&self, other: &CircleVal) -> Rat {
        let d = frac(&(&self.0 - &other.0));
        let e = Rat::one() - &d;
        if d < e {
            d
        } else {
            e
        }
    }
}

impl fmt::Display for CircleVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rat(&self.0))
    }
}

/// An element of `Z_p` that happens to be rational: a rational number whose
/// denominator is prime to `p`. Dense in `Z_p`, closed under ring operations
/// and with decidable equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicRat {
    value: Rat,
    p: u64,
}

impl PadicRat {
    pub fn new(value: Rat, p: u64) -> Result<Self> {
        if (value.denom() % Int::from(p)).is_zero() {
            return Err(Error::constraint(format!(
                "{} is not a {}-adic integer",
                fmt_rat(&value),
                p
            )));
        }
        Ok(PadicRat { value, p })
    }

    pub fn from_int(n: i64, p: u64) -> Self {
        PadicRat { value: rat(n, 1), p }
    }

    pub fn zero(p: u64) -> Self {
        PadicRat::from_int(0, p)
    }

    pub fn value(&self) -> &Rat {
        &self.value
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// The integer `b` in `[0, p^m)` with `b == x (mod p^m Z_p)`.
    pub fn reduce(&self, m: u32) -> Int {
        let modulus = int_pow(self.p, m);
        let num = self.value.numer().mod_floor(&modulus);
        let den = self.value.denom().mod_floor(&modulus);
        let inv = mod_inverse(&den, &modulus).expect("denominator is a p-adic unit");
        (num * inv).mod_floor(&modulus)
    }

    /// The first `n` base-`p` digits, least significant first.
    pub fn digits(&self, n: usize) -> Vec<u64> {
        let b = self.reduce(n as u32);
        let pb = Int::from(self.p);
        let mut out = Vec::with_capacity(n);
        let mut rest = b;
        for _ in 0..n {
            let (q, r) = rest.div_mod_floor(&pb);
            out.push(r.to_u64().unwrap());
            rest = q;
        }
        out
    }

    /// p-adic valuation; `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        if self.value.is_zero() {
            return None;
        }
        let pb = Int::from(self.p);
        let mut n = self.value.numer().abs();
        let mut v = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    pub fn add(&self, other: &PadicRat) -> PadicRat {
        debug_assert_eq!(self.p, other.p);
        PadicRat { value: &self.value + &other.value, p: self.p }
    }

    pub fn mul(&self, other: &PadicRat) -> PadicRat {
        debug_assert_eq!(self.p, other.p);
        PadicRat { value: &self.value * &other.value, p: self.p }
    }

    pub fn neg(&self) -> PadicRat {
        PadicRat { value: -&self.value, p: self.p }
    }

    /// Multiplication by a rational that is itself p-integral.
    pub fn scale(&self, r: &Rat) -> Result<PadicRat> {
        PadicRat::new(&self.value * r, self.p)
    }
}

impl fmt::Display for PadicRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rat(&self.value))
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    if m.is_one() {
        return Some(Int::zero());
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// `padic_reduce` as a free function.
pub fn padic_reduce(x: &PadicRat, m: u32) -> Int {
    x.reduce(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rat(" -6/4 ").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("7").unwrap(), rat(7, 1));
        assert_eq!(fmt_rat(&rat(7, 1)), "7/1");
        assert!(matches!(parse_rat("0.3"), Err(Error::NonRationalInput(_))));
        assert!(matches!(parse_rat("1/0"), Err(Error::NonRationalInput(_))));
    }

    #[test]
    fn circle_distance() {
        let a = CircleVal::from_ratio(1, 8);
        let b = CircleVal::from_ratio(7, 8);
        assert_eq!(a.dist(&b), rat(1, 4));
        assert_eq!(CircleVal::from_ratio(-1, 3), CircleVal::from_ratio(2, 3));
        assert_eq!(CircleVal::zero().dist(&CircleVal::from_ratio(1, 2)), rat(1, 2));
    }

    #[test]
    fn padic_reduce_examples() {
        assert_eq!(PadicRat::zero(3).reduce(5), int(0));
        let half = PadicRat::new(rat(1, 2), 3).unwrap();
        assert_eq!(half.reduce(2), int(5));
        assert_eq!(PadicRat::from_int(7, 5).reduce(1), int(2));
        assert_eq!(PadicRat::from_int(-1, 2).reduce(3), int(7));
        assert!(PadicRat::new(rat(1, 3), 3).is_err());
    }

    #[test]
    fn padic_digits_and_valuation() {
        assert_eq!(PadicRat::from_int(1, 2).digits(3), vec![1, 0, 0]);
        assert_eq!(PadicRat::from_int(-1, 3).digits(4), vec![2, 2, 2, 2]);
        assert_eq!(PadicRat::from_int(18, 3).valuation(), Some(2));
        assert_eq!(PadicRat::zero(3).valuation(), None);
    }

    #[test]
    fn reduce_is_compatible_across_levels() {
        let x = PadicRat::new(rat(-17, 11), 2).unwrap();
        let b8 = x.reduce(8);
        for m in 0..8 {
            assert_eq!(b8.mod_floor(&int_pow(2, m)), x.reduce(m));
        }
    }
}
