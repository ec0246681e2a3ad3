//! Subgroups of `Z x Z/n` and `Z^2`: canonical forms, indices, minimal
//! vectors, the sheet chart of `C(Z x Z/n)` and symbolic limits of
//! closed-form families.

pub mod family;

pub use family::{ball_traces_agree, first_difference_radius, Affine, FamilyFG, FgAmbient, FgLimit, FgLimitResult, Periodic};

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// A point of `N ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NBar {
    Finite(u64),
    Infinity,
}

impl fmt::Display for NBar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NBar::Finite(n) => write!(f, "{n}"),
            NBar::Infinity => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZxZnKind {
    FiniteOnly,
    Mixed { a: u64, b: u64 },
}

/// `H = F ⊕ <(a, b)>` with `F = <m> <= Z/n`, or `H = F` alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubZxZn {
    pub n: u64,
    pub m: u64,
    pub kind: ZxZnKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubZ2 {
    Trivial,
    /// Generator with `a > 0`, or `a = 0` and `b > 0`.
    Rank1(i64, i64),
    /// Rows `(d1, 0)` and `(c, d2)` with `d1, d2 > 0` and `0 <= c < d1`.
    Rank2([[i64; 2]; 2]),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FgSub {
    ZxZn(SubZxZn),
    Z2(SubZ2),
}

fn check_modulus(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::constraint("modulus n must be >= 1"));
    }
    Ok(())
}

impl SubZxZn {
    /// Validated constructor for already-canonical data.
    pub fn new(n: u64, m: u64, kind: ZxZnKind) -> Result<Self> {
        check_modulus(n)?;
        if m == 0 || n % m != 0 {
            return Err(Error::constraint(format!("m = {m} does not divide n = {n}")));
        }
        if let ZxZnKind::Mixed { a, b } = kind {
            if a == 0 {
                return Err(Error::constraint("a must be >= 1"));
            }
            if b >= m {
                return Err(Error::constraint(format!("b = {b} not reduced mod m = {m}")));
            }
        }
        Ok(SubZxZn { n, m, kind })
    }

    pub fn finite_only(n: u64, m: u64) -> Result<Self> {
        SubZxZn::new(n, m, ZxZnKind::FiniteOnly)
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        let y = y.rem_euclid(self.n as i64);
        let m = self.m as i64;
        match self.kind {
            ZxZnKind::FiniteOnly => x == 0 && y % m == 0,
            ZxZnKind::Mixed { a, b } => {
                let a = a as i64;
                if x % a != 0 {
                    return false;
                }
                let t = (x / a) as i128;
                (y as i128 - t * b as i128).rem_euclid(m as i128) == 0
            }
        }
    }

    pub fn index(&self) -> NBar {
        match self.kind {
            ZxZnKind::FiniteOnly => NBar::Infinity,
            ZxZnKind::Mixed { a, .. } => NBar::Finite(a * self.m),
        }
    }
}

/// Canonical descriptor of the subgroup of `Z x Z/n` generated by `gens`.
pub fn canon_zxzn(n: u64, gens: &[(i64, i64)]) -> Result<SubZxZn> {
    check_modulus(n)?;
    let nn = n as i128;
    let mut pool: Vec<(i128, i128)> = gens.iter().map(|&(x, y)| (x as i128, (y as i128).rem_euclid(nn))).collect();
    // eliminate the Z-coordinate
    loop {
        let nz: Vec<usize> = (0..pool.len()).filter(|&i| pool[i].0 != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        let piv = *nz.iter().min_by_key(|&&i| pool[i].0.abs()).unwrap();
        let (px, py) = pool[piv];
        for &i in &nz {
            if i != piv {
                let q = pool[i].0.div_euclid(px);
                pool[i].0 -= q * px;
                pool[i].1 = (pool[i].1 - q * py).rem_euclid(nn);
            }
        }
    }
    let pivot = pool.iter().position(|v| v.0 != 0).map(|i| pool.swap_remove(i));
    let m = pool.iter().fold(nn, |g, v| g.gcd(&v.1)) as u64;
    Ok(match pivot {
        None => SubZxZn { n, m, kind: ZxZnKind::FiniteOnly },
        Some((x, y)) => {
            let (a, b) = if x < 0 { (-x, -y) } else { (x, y) };
            SubZxZn { n, m, kind: ZxZnKind::Mixed { a: a as u64, b: b.rem_euclid(m as i128) as u64 } }
        }
    })
}

fn sign_normalize(v: (i64, i64)) -> (i64, i64) {
    if v.0 < 0 || (v.0 == 0 && v.1 < 0) {
        (-v.0, -v.1)
    } else {
        v
    }
}

impl SubZ2 {
    pub fn rank(&self) -> usize {
        match self {
            SubZ2::Trivial => 0,
            SubZ2::Rank1(..) => 1,
            SubZ2::Rank2(_) => 2,
        }
    }

    pub fn contains(&self, x: i64, y: i64) -> bool {
        match *self {
            SubZ2::Trivial => x == 0 && y == 0,
            SubZ2::Rank1(a, b) => {
                if (a as i128) * (y as i128) != (b as i128) * (x as i128) {
                    return false;
                }
                if a != 0 {
                    x % a == 0
                } else {
                    y % b == 0
                }
            }
            SubZ2::Rank2([[d1, _], [c, d2]]) => {
                if y % d2 != 0 {
                    return false;
                }
                let t = (y / d2) as i128;
                (x as i128 - t * c as i128) % d1 as i128 == 0
            }
        }
    }

    pub fn index(&self) -> NBar {
        match self {
            SubZ2::Rank2([[d1, _], [_, d2]]) => NBar::Finite((d1 * d2) as u64),
            _ => NBar::Infinity,
        }
    }

    /// A Z-basis of the subgroup (0, 1 or 2 vectors).
    pub fn basis(&self) -> Vec<(i64, i64)> {
        match *self {
            SubZ2::Trivial => vec![],
            SubZ2::Rank1(a, b) => vec![(a, b)],
            SubZ2::Rank2([[d1, z], [c, d2]]) => vec![(d1, z), (c, d2)],
        }
    }
}

/// Canonical descriptor of the subgroup of `Z^2` generated by `gens`.
pub fn canon_z2(gens: &[(i64, i64)]) -> SubZ2 {
    let mut pool: Vec<(i128, i128)> = gens.iter().map(|&(x, y)| (x as i128, y as i128)).collect();
    loop {
        let nz: Vec<usize> = (0..pool.len()).filter(|&i| pool[i].1 != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        let piv = *nz.iter().min_by_key(|&&i| pool[i].1.abs()).unwrap();
        let (px, py) = pool[piv];
        for &i in &nz {
            if i != piv {
                let q = pool[i].1.div_euclid(py);
                pool[i].0 -= q * px;
                pool[i].1 -= q * py;
            }
        }
    }
    let pivot = pool.iter().position(|v| v.1 != 0).map(|i| pool.swap_remove(i));
    let d1 = pool.iter().fold(0i128, |g, v| g.gcd(&v.0));
    match (pivot, d1) {
        (None, 0) => SubZ2::Trivial,
        (None, d1) => SubZ2::Rank1(d1 as i64, 0),
        (Some((x, y)), 0) => {
            let (x, y) = sign_normalize((x as i64, y as i64));
            SubZ2::Rank1(x, y)
        }
        (Some((x, y)), d1) => {
            let (x, y) = if y < 0 { (-x, -y) } else { (x, y) };
            SubZ2::Rank2([[d1 as i64, 0], [x.rem_euclid(d1) as i64, y as i64]])
        }
    }
}

pub fn index_fg(h: &FgSub) -> NBar {
    match h {
        FgSub::ZxZn(s) => s.index(),
        FgSub::Z2(s) => s.index(),
    }
}

fn norm2(v: (i64, i64)) -> i128 {
    (v.0 as i128).pow(2) + (v.1 as i128).pow(2)
}

/// Shortest nonzero vector by Lagrange-Gauss reduction. Ties go to the
/// lexicographically smallest sign-normalized vector.
pub fn minimal_vector(h: &SubZ2) -> Result<(i64, i64)> {
    let (mut b1, mut b2) = match *h {
        SubZ2::Trivial => return Err(Error::RankTooLow),
        SubZ2::Rank1(a, b) => return Ok(sign_normalize((a, b))),
        SubZ2::Rank2([[d1, z], [c, d2]]) => ((d1, z), (c, d2)),
    };
    if norm2(b1) > norm2(b2) {
        std::mem::swap(&mut b1, &mut b2);
    }
    loop {
        let dot = b1.0 as i128 * b2.0 as i128 + b1.1 as i128 * b2.1 as i128;
        let n1 = norm2(b1);
        // nearest integer to dot / n1
        let q = (2 * dot + n1).div_euclid(2 * n1);
        if q == 0 {
            break;
        }
        b2 = (b2.0 - (q * b1.0 as i128) as i64, b2.1 - (q * b1.1 as i128) as i64);
        if norm2(b2) >= norm2(b1) {
            break;
        }
        std::mem::swap(&mut b1, &mut b2);
    }
    let candidates = [b1, b2, (b1.0 + b2.0, b1.1 + b2.1), (b1.0 - b2.0, b1.1 - b2.1)];
    Ok(candidates
        .iter()
        .map(|&v| sign_normalize(v))
        .filter(|&v| v != (0, 0))
        .min_by_key(|&v| (norm2(v), v))
        .unwrap())
}

/// `h = n * p` with `p` primitive, completed by `q` to a basis with
/// `det(p, q) = 1`. When `p.0 != 0`, `q.0` is the least non-negative
/// choice; otherwise `q.1 = 0`.
pub fn adapted_basis(h: (i64, i64)) -> Result<(i64, (i64, i64), (i64, i64))> {
    if h == (0, 0) {
        return Err(Error::RankTooLow);
    }
    let n = h.0.gcd(&h.1);
    let p = (h.0 / n, h.1 / n);
    let q = if p.0 == 0 {
        // p = (0, ±1): -p.1 * c = 1
        (-p.1, 0)
    } else {
        let m = p.0.unsigned_abs() as i128;
        // p.1 * c ≡ -1 (mod p.0)
        let e = (p.1 as i128).rem_euclid(m).extended_gcd(&m);
        let inv = e.x.rem_euclid(m);
        let c = (-inv).rem_euclid(m);
        let d = (1 + p.1 as i128 * c) / p.0 as i128;
        (c as i64, d as i64)
    };
    debug_assert_eq!(p.0 as i128 * q.1 as i128 - p.1 as i128 * q.0 as i128, 1);
    Ok((n, p, q))
}

/// Sheet `m` and position of `H` in the chart of `C(Z x Z/n)`.
pub fn coord_zxzn(h: &SubZxZn) -> (u64, NBar) {
    match h.kind {
        ZxZnKind::FiniteOnly => (h.m, NBar::Infinity),
        ZxZnKind::Mixed { a, b } => (h.m, NBar::Finite((a - 1) * h.m + b + 1)),
    }
}

pub fn point_from_coord_zxzn(n: u64, m: u64, j: NBar) -> Result<SubZxZn> {
    check_modulus(n)?;
    if m == 0 || n % m != 0 {
        return Err(Error::InvalidSheet { n: n as i64, sheet: m as i64 });
    }
    match j {
        NBar::Infinity => Ok(SubZxZn { n, m, kind: ZxZnKind::FiniteOnly }),
        NBar::Finite(0) => Err(Error::InvalidPosition),
        NBar::Finite(j) => Ok(SubZxZn { n, m, kind: ZxZnKind::Mixed { a: (j - 1) / m + 1, b: (j - 1) % m } }),
    }
}

pub fn divisor_count(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).count() as u64
}
