//! The predual side `Z_p x C_k x Z`: unit decomposition of `Q_p^×`, the
//! pairing with `G_{p,k}` and annihilators of closed subgroups.

mod verify;

pub use verify::{default_z_resolution, verify_orthogonal, VerifyReport};

use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{int_pow, mod_inverse, p_power_exponent, CircleVal, FracLattice, Int, IntLattice, PadicRat, Rat};
use crate::prufer::{quotient_data, ClosedSubG, GElem, Gpk, SubKind, SubPK};

/// `p^v * u0 mod p^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpUnit {
    pub p: u64,
    pub v: i64,
    pub u0: Int,
    pub m: u32,
}

impl QpUnit {
    pub fn new(p: u64, v: i64, u0: Int, m: u32) -> Result<Self> {
        if !crate::exactnum::is_prime(p) {
            return Err(Error::constraint(format!("p = {p} is not prime")));
        }
        let min_m = if p == 2 { 3 } else { 1 };
        if m < min_m {
            return Err(Error::InsufficientPrecision(format!("precision m = {m} is below {min_m} for p = {p}")));
        }
        let modulus = int_pow(p, m);
        let u0 = u0.mod_floor(&modulus);
        if (&u0 % Int::from(p)).is_zero() {
            return Err(Error::constraint(format!("u0 = {u0} is divisible by p = {p}")));
        }
        Ok(QpUnit { p, v, u0, m })
    }

    /// Parses `"p^v * u0 mod p^m"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::constraint(format!("expected \"p^v * u0 mod p^m\", got {s:?}"));
        let (lhs, modulus) = s.split_once("mod").ok_or_else(bad)?;
        let (pv, u0) = lhs.split_once('*').ok_or_else(bad)?;
        let power = |t: &str| -> Result<(u64, i64)> {
            let (b, e) = t.trim().split_once('^').ok_or_else(bad)?;
            Ok((b.trim().parse().map_err(|_| bad())?, e.trim().parse().map_err(|_| bad())?))
        };
        let (p, v) = power(pv)?;
        let (p2, m) = power(modulus)?;
        if p != p2 || m < 0 {
            return Err(bad());
        }
        let u0: Int = u0.trim().parse().map_err(|_| bad())?;
        QpUnit::new(p, v, u0, m as u32)
    }

    fn modulus(&self) -> Int {
        int_pow(self.p, self.m)
    }
}

impl fmt::Display for QpUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{} * {} mod {}^{}", self.p, self.v, self.u0, self.p, self.m)
    }
}

/// Smallest primitive root modulo an odd prime.
pub fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let factors: Vec<u64> = (2..=phi).filter(|q| phi % q == 0 && crate::exactnum::is_prime(*q)).collect();
    (2..p.max(3))
        .find(|&g| factors.iter().all(|q| Int::from(g).modpow(&Int::from(phi / q), &Int::from(p)) != Int::one()))
        .unwrap_or(1)
}

/// The `(p-1)`-st root of unity congruent to `u0` mod `p`, mod `p^m`.
pub fn teichmuller(u0: &Int, p: u64, m: u32) -> Result<Int> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let modulus = int_pow(p, m);
    if (u0 % Int::from(p)).is_zero() {
        return Err(Error::constraint(format!("{u0} is not a unit mod {p}")));
    }
    let pb = Int::from(p);
    let mut u = u0.mod_floor(&modulus);
    loop {
        let next = u.modpow(&pb, &modulus);
        if next == u {
            return Ok(u);
        }
        u = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDecomposition {
    /// Exponent of the principal-unit generator, mod `p^{m-1}` (`2^{m-2}`).
    pub x: Int,
    /// Exponent of the root of unity, mod `p - 1` (`2`).
    pub t: u64,
    pub v: i64,
}

/// `u = p^v * zeta^t * gamma^x`, with `zeta = teichmuller(g0)`,
/// `gamma = 1 + p` for odd `p`, and `zeta = -1`, `gamma = 5` for `p = 2`.
pub fn decompose_unit(u: &QpUnit) -> Result<UnitDecomposition> {
    let modulus = u.modulus();
    let p = u.p;
    let pb = Int::from(p);
    let (t, principal, gamma, first) = if p == 2 {
        if u.m < 3 {
            return Err(Error::InsufficientPrecision("p = 2 needs m >= 3".into()));
        }
        let t = if (&u.u0 % Int::from(4)) == Int::one() { 0 } else { 1 };
        let y = if t == 0 { u.u0.clone() } else { (&modulus - &u.u0).mod_floor(&modulus) };
        (t, y, Int::from(5), 2u32)
    } else {
        let g0 = primitive_root(p);
        let r = (&u.u0 % &pb).to_u64().unwrap();
        let mut t = 0;
        let mut acc = 1u64;
        while acc != r {
            acc = acc * g0 % p;
            t += 1;
        }
        let zeta = teichmuller(&Int::from(g0), p, u.m)?;
        let zt = zeta.modpow(&Int::from(t), &modulus);
        let inv = mod_inverse(&zt, &modulus).unwrap();
        (t, (&u.u0 * inv).mod_floor(&modulus), Int::from(p + 1), 1u32)
    };
    // principal = gamma^x, read off one digit at a time
    let digits = u.m - first;
    let gamma_inv = mod_inverse(&gamma, &modulus).unwrap();
    let mut x = Int::zero();
    let mut rest = principal;
    for i in 0..digits {
        // rest = 1 + p^{i+first} * d mod p^{i+first+1}
        let lo = int_pow(p, i + first);
        let d = ((&rest - Int::one()) / &lo).mod_floor(&pb);
        if !d.is_zero() {
            let step = gamma_inv.modpow(&(&d * int_pow(p, i)), &modulus);
            rest = (rest * step).mod_floor(&modulus);
            x += d * int_pow(p, i);
        }
    }
    debug_assert!(rest.is_one() || modulus.is_one());
    Ok(UnitDecomposition { x, t, v: u.v })
}

/// `p^v * zeta^t * gamma^x mod p^m`, the unit part only (`v` is carried
/// separately).
pub fn recompose_unit(p: u64, m: u32, d: &UnitDecomposition) -> Result<Int> {
    let modulus = int_pow(p, m);
    if p == 2 {
        let sign = if d.t == 0 { Int::one() } else { &modulus - Int::one() };
        return Ok((sign * Int::from(5).modpow(&d.x, &modulus)).mod_floor(&modulus));
    }
    let zeta = teichmuller(&Int::from(primitive_root(p)), p, m)?;
    let z = zeta.modpow(&Int::from(d.t), &modulus);
    Ok((z * Int::from(p + 1).modpow(&d.x, &modulus)).mod_floor(&modulus))
}

/// An element `(x, a, n)` of `Z_p x C_k x Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpSideElem {
    pub x: PadicRat,
    pub a: Int,
    pub n: Int,
}

impl QpSideElem {
    pub fn add(&self, o: &QpSideElem) -> QpSideElem {
        QpSideElem { x: self.x.add(&o.x), a: &self.a + &o.a, n: &self.n + &o.n }
    }
}

/// `x * w + a * c + n * z mod 1`.
pub fn pairing(g: &Gpk, e: &QpSideElem, h: &GElem) -> Result<CircleVal> {
    if e.x.prime() != g.p {
        return Err(Error::MismatchedAmbient(format!("{}-adic element paired with p = {}", e.x.prime(), g.p)));
    }
    let level = h.level(g.p);
    let xw = Rat::from_integer(e.x.reduce(level)) * h.w.value();
    let ac = Rat::from_integer(e.a.clone()) * h.c.value();
    let nz = Rat::from_integer(e.n.clone()) * h.z.value();
    Ok(CircleVal::new(xw + ac + nz))
}

/// Condition on the `Z_p` coordinate of a compact annihilator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XCond {
    /// `x = 0`.
    Zero,
    /// Only `x mod p^m` matters.
    Mod(u32),
}

/// A closed subgroup of `Z_p x C_k x Z` in one of the three shapes that
/// annihilators take.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QpSideSub {
    /// `{(x, a, n) : (x mod p^m, a, n) in lattice}`; `lattice` contains
    /// `(p^m, 0, 0)` and `(0, k, 0)`, and `m` is minimal.
    OpenFinIndex { m: u32, lattice: IntLattice },
    /// `{(x, a, 0) : x satisfies the condition, (x mod p^m, a) in lattice}`.
    CompactSub { x: XCond, lattice: IntLattice },
    /// `{(-n * c0 * x, a, n) : (a, n) in lattice}`.
    GraphDisc { lattice: IntLattice, c0: Rat, x: PadicRat },
}

impl QpSideSub {
    pub fn kind_name(&self) -> &'static str {
        match self {
            QpSideSub::OpenFinIndex { .. } => "OpenFinIndex",
            QpSideSub::CompactSub { .. } => "CompactSub",
            QpSideSub::GraphDisc { .. } => "GraphDisc",
        }
    }

    pub fn contains(&self, k: u64, e: &QpSideElem) -> bool {
        let a = e.a.mod_floor(&Int::from(k));
        match self {
            QpSideSub::OpenFinIndex { m, lattice } => lattice.contains(&[e.x.reduce(*m), a, e.n.clone()]),
            QpSideSub::CompactSub { x, lattice } => {
                if !e.n.is_zero() {
                    return false;
                }
                match x {
                    XCond::Zero => e.x.value().is_zero() && lattice.contains(&[Int::zero(), a]),
                    XCond::Mod(m) => lattice.contains(&[e.x.reduce(*m), a]),
                }
            }
            QpSideSub::GraphDisc { lattice, c0, x } => {
                lattice.contains(&[a, e.n.clone()])
                    && e.x.value() == &-(Rat::from_integer(e.n.clone()) * c0 * x.value())
            }
        }
    }

    /// Whether `self` is contained in `other`, for open subgroups.
    pub fn is_open_subgroup_of(&self, other: &QpSideSub) -> Option<bool> {
        match (self, other) {
            (QpSideSub::OpenFinIndex { lattice: a, .. }, QpSideSub::OpenFinIndex { lattice: b, .. }) => {
                Some(b.contains_lattice(a))
            }
            _ => None,
        }
    }
}

/// `[Z_p x C_k x Z : K]` for an open subgroup.
pub fn index_open(k: &QpSideSub) -> Result<Int> {
    match k {
        QpSideSub::OpenFinIndex { lattice, .. } => Ok(lattice.index()),
        other => Err(Error::constraint(format!("{} is not open of finite index", other.kind_name()))),
    }
}

/// The annihilator `H^⊥` under [`pairing`].
pub fn orthogonal(h: &ClosedSubG) -> Result<QpSideSub> {
    let h = h.canon()?;
    let g = h.g;
    Ok(match &h.kind {
        SubKind::Finite(l) => {
            let lattice = l.lattice().dual();
            let m = p_power_exponent(&l.lattice().coordinate_exponent(0), g.p).unwrap();
            QpSideSub::OpenFinIndex { m, lattice }
        }
        SubKind::OneDim(SubPK::FinD(d)) => {
            let m = p_power_exponent(&d.coordinate_exponent(0), g.p).unwrap();
            QpSideSub::CompactSub { x: XCond::Mod(m), lattice: d.dual() }
        }
        SubKind::OneDim(SubPK::FullD(e)) => QpSideSub::CompactSub {
            x: XCond::Zero,
            lattice: IntLattice::from_generators(&[vec![Int::one(), Int::zero()], vec![Int::zero(), Int::from(*e)]], 2)
                .unwrap(),
        },
        SubKind::Disc { f, x, .. } => {
            let qd = quotient_data(g.k, f);
            QpSideSub::GraphDisc { lattice: f.lattice().dual(), c0: qd.c0, x: x.clone() }
        }
    })
}

/// The generators of `K` reduced into `Z/p^m x Z/k x Z/mz`, as integers.
pub(crate) fn reduced_generators(g: &Gpk, k: &QpSideSub, m: u32) -> Vec<[Int; 3]> {
    let pm = int_pow(g.p, m);
    let red = |x: &Int| x.mod_floor(&pm);
    match k {
        QpSideSub::OpenFinIndex { lattice, .. } => {
            lattice.rows().iter().map(|r| [red(&r[0]), r[1].clone(), r[2].clone()]).collect()
        }
        QpSideSub::CompactSub { x, lattice } => lattice
            .rows()
            .iter()
            .map(|r| {
                let xv = match x {
                    XCond::Zero => Int::zero(),
                    XCond::Mod(_) => red(&r[0]),
                };
                [xv, r[1].clone(), Int::zero()]
            })
            .collect(),
        QpSideSub::GraphDisc { lattice, c0, x } => lattice
            .rows()
            .iter()
            .map(|r| {
                // n * c0 is an integer for (a, n) annihilating F
                let nc = (Rat::from_integer(r[1].clone()) * c0).to_integer();
                let xv = x.reduce(m) * nc;
                [red(&-xv), r[0].clone(), r[1].clone()]
            })
            .collect(),
    }
}

/// `FracLattice` of the trace `H ∩ (C_{p^m} x C_k x C_mz)`.
pub(crate) fn window_box_lattice(h: &ClosedSubG, m: u32, mz: u64) -> FracLattice {
    let g = &h.g;
    let boxl = FracLattice::diagonal(&[int_pow(g.p, m), Int::from(g.k), Int::from(mz)]);
    let base = match &h.kind {
        SubKind::Finite(l) => l.lattice().clone(),
        SubKind::Disc { .. } => h.approximate_by_finite(m.max(1) as u64).lattice().clone(),
        SubKind::OneDim(d) => {
            let t = d.truncation(g, m);
            let mut gens: Vec<Vec<Rat>> = t.rows().iter().map(|r| vec![r[0].clone(), r[1].clone(), Rat::zero()]).collect();
            gens.push(vec![Rat::zero(), Rat::zero(), Rat::new(Int::one(), Int::from(mz))]);
            FracLattice::from_generators(&gens, 3)
        }
    };
    base.intersect(&boxl)
}

#[cfg(test)]
mod tests;
