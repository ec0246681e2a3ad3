//! Point types of the Chabauty space of `G_{p,k}`, coordinates on the
//! residual space `C(G) \ N` and the ordered enumeration of `N`.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{int_pow, p_power_exponent, FracLattice, Int, PadicRat, Rat};
use crate::fgab::{divisor_count, NBar};
use crate::metric::chabauty_dist;
use crate::prufer::{ClosedSubG, FinSubG, FinSubKT, Gpk, SubKind, SubPK};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointClass {
    IsolatedFull,
    IsolatedResidual,
    GluePoint(u64),
    CondensationCantor,
}

impl PointClass {
    pub fn tag(&self) -> &'static str {
        match self {
            PointClass::IsolatedFull => "IsolatedFull",
            PointClass::IsolatedResidual => "IsolatedResidual",
            PointClass::GluePoint(_) => "GluePoint",
            PointClass::CondensationCantor => "CondensationCantor",
        }
    }
}

pub fn classify_point(h: &ClosedSubG) -> Result<PointClass> {
    let h = h.canon()?;
    Ok(match h.kind {
        SubKind::Finite(_) => PointClass::IsolatedFull,
        SubKind::OneDim(SubPK::FinD(_)) => PointClass::IsolatedResidual,
        SubKind::OneDim(SubPK::FullD(d)) => PointClass::GluePoint(d),
        SubKind::Disc { .. } => PointClass::CondensationCantor,
    })
}

/// Number of sheets glued onto the Cantor part: the divisor count of `k`.
pub fn count_sheets(_p: u64, k: u64) -> u64 {
    divisor_count(k)
}

/// Coordinates on `C(G) \ N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidualCoord {
    /// Position `j` on sheet `d`; `j = inf` is the sheet's end.
    Sheet { d: u64, j: NBar },
    /// `F` and the first base-`p` digits of `x`, least significant first.
    CantorAddr { f: FinSubKT, digits: Vec<u64> },
    GlueAddr { d: u64 },
}

impl fmt::Display for ResidualCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidualCoord::Sheet { d, j } => write!(f, "Sheet({d}, {j})"),
            ResidualCoord::CantorAddr { digits, .. } => write!(f, "CantorAddr({digits:?})"),
            ResidualCoord::GlueAddr { d } => write!(f, "GlueAddr({d})"),
        }
    }
}

/// Number of finite `D` on sheet `d` whose `w`-projection is `C_{p^a}`.
fn sheet_level_count(p: u64, k: u64, d: u64, a: u32) -> u64 {
    // gcd(p^a, k/d)
    let kk = k / d;
    let mut out = 1;
    for _ in 0..a {
        if kk % (out * p) != 0 {
            break;
        }
        out *= p;
    }
    out
}

/// Sheet and position of a finite `D <= C_{p^∞} x C_k`.
///
/// The sheet is `d = |D ∩ ({0} x C_k)|`. On sheet `d`, `D` is
/// `<(1/p^a, g/k), (0, 1/d)>` with `0 <= g < k/d` and `(k/d) | p^a g`;
/// positions count level `a` first, then `g`.
pub fn sheet_coord(g: &Gpk, d_lat: &FracLattice) -> Result<(u64, u64)> {
    SubPK::fin(g, d_lat.clone())?;
    let swapped = d_lat.permuted(&[1, 0]);
    let rows = swapped.rows();
    let d = rows[0][0].recip().to_integer().to_u64().unwrap();
    let pa = rows[1][1].recip().to_integer();
    let a = p_power_exponent(&pa, g.p).unwrap();
    let gamma = &rows[1][0];
    let gnum = (gamma * Rat::from_integer(Int::from(g.k))).to_integer().to_u64().unwrap();
    let kk = g.k / d;
    let before: u64 = (0..a).map(|b| sheet_level_count(g.p, g.k, d, b)).sum();
    let step = kk / sheet_level_count(g.p, g.k, d, a);
    Ok((d, before + gnum / step + 1))
}

/// Inverse of [`sheet_coord`].
pub fn sheet_point(g: &Gpk, d: u64, j: u64) -> Result<FracLattice> {
    if d == 0 || g.k % d != 0 {
        return Err(Error::InvalidSheet { n: g.k as i64, sheet: d as i64 });
    }
    if j == 0 {
        return Err(Error::InvalidPosition);
    }
    let kk = g.k / d;
    let mut rest = j - 1;
    let mut a = 0u32;
    loop {
        let c = sheet_level_count(g.p, g.k, d, a);
        if rest < c {
            break;
        }
        rest -= c;
        a += 1;
    }
    let step = kk / sheet_level_count(g.p, g.k, d, a);
    let gens = vec![
        vec![Rat::new(Int::one(), int_pow(g.p, a)), Rat::new(Int::from(rest * step), Int::from(g.k))],
        vec![Rat::zero(), Rat::new(Int::one(), Int::from(d))],
    ];
    Ok(FracLattice::from_generators(&gens, 2))
}

/// Coordinate of a non-finite subgroup on the residual space.
pub fn coord_residual(h: &ClosedSubG, digits: usize) -> Result<ResidualCoord> {
    let h = h.canon()?;
    match &h.kind {
        SubKind::Finite(_) => Err(Error::FiniteInput),
        SubKind::OneDim(SubPK::FinD(l)) => {
            let (d, j) = sheet_coord(&h.g, l)?;
            Ok(ResidualCoord::Sheet { d, j: NBar::Finite(j) })
        }
        SubKind::OneDim(SubPK::FullD(d)) => Ok(ResidualCoord::GlueAddr { d: *d }),
        SubKind::Disc { f, x, .. } => Ok(ResidualCoord::CantorAddr { f: f.clone(), digits: x.digits(digits) }),
    }
}

/// The subgroup at a residual coordinate. A Cantor address names the
/// subgroup whose `x` is the finite digit expansion.
pub fn residual_point(g: &Gpk, c: &ResidualCoord) -> Result<ClosedSubG> {
    match c {
        ResidualCoord::Sheet { d, j: NBar::Infinity } | ResidualCoord::GlueAddr { d } => ClosedSubG::full_d(g, *d)
            .map_err(|_| Error::InvalidSheet { n: g.k as i64, sheet: *d as i64 }),
        ResidualCoord::Sheet { d, j: NBar::Finite(j) } => {
            Ok(ClosedSubG::one_dim(g, SubPK::FinD(sheet_point(g, *d, *j)?)))
        }
        ResidualCoord::CantorAddr { f, digits } => {
            let mut x = Int::zero();
            for (i, dgt) in digits.iter().enumerate() {
                if *dgt >= g.p {
                    return Err(Error::constraint(format!("digit {dgt} is not below p = {}", g.p)));
                }
                x += Int::from(*dgt) * int_pow(g.p, i as u32);
            }
            FinSubKT::new(g.k, f.lattice().clone())?;
            ClosedSubG::disc(g, f.clone(), PadicRat::new(Rat::from_integer(x), g.p)?)
        }
    }
}

/// Whether two coordinates name the same point of the glued space.
pub fn are_glued(a: &ResidualCoord, b: &ResidualCoord) -> bool {
    use ResidualCoord::*;
    match (a, b) {
        (Sheet { d, j: NBar::Infinity }, GlueAddr { d: e }) | (GlueAddr { d: e }, Sheet { d, j: NBar::Infinity }) => {
            d == e
        }
        _ => a == b,
    }
}

/// All finite subgroups of `G_{p,k}` of order `n`, in lattice order.
///
/// They live in `C_{p^v} x C_g x C_n` (`p^v || n`, `g = gcd(n, k)`);
/// each is enumerated once through the upper-triangular normal form of its
/// preimage in `Z^3`.
pub fn finite_subgroups_of_order(g: &Gpk, n: u64) -> Vec<FinSubG> {
    let (pv, _) = crate::exactnum::split_p_part(n, g.p);
    let dims = [pv as i64, n.gcd(&g.k) as i64, n as i64];
    let total = dims[0] * dims[1] * dims[2] / n as i64;
    let mut out = Vec::new();
    for h11 in divisors_i(dims[0]) {
        for h22 in divisors_i(dims[1]) {
            if total % (h11 * h22) != 0 {
                continue;
            }
            let h33 = total / (h11 * h22);
            if dims[2] % h33 != 0 {
                continue;
            }
            let q2 = dims[1] / h22;
            let q1 = dims[0] / h11;
            for h23 in 0..h33 {
                if (q2 * h23) % h33 != 0 {
                    continue;
                }
                for h12 in 0..h22 {
                    if (q1 * h12) % h22 != 0 {
                        continue;
                    }
                    let r = q1 * h12 / h22;
                    for h13 in 0..h33 {
                        if (q1 * h13 - r * h23) % h33 != 0 {
                            continue;
                        }
                        let rows = [[h11, h12, h13], [0, h22, h23], [0, 0, h33]];
                        let gens: Vec<Vec<Rat>> = rows
                            .iter()
                            .map(|row| (0..3).map(|i| Rat::new(Int::from(row[i]), Int::from(dims[i]))).collect())
                            .collect();
                        out.push(FinSubG::new(g, FracLattice::from_generators(&gens, 3)).expect("inside the torsion box"));
                    }
                }
            }
        }
    }
    out.sort_by(|a, b| a.lattice().cmp(b.lattice()));
    out
}

fn divisors_i(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// The first `count` finite subgroups, by order and then lattice order.
pub fn enumerate_finite(g: &Gpk, count: usize) -> Vec<FinSubG> {
    let mut out = Vec::with_capacity(count);
    let mut n = 1;
    while out.len() < count {
        for h in finite_subgroups_of_order(g, n) {
            if out.len() == count {
                break;
            }
            out.push(h);
        }
        n += 1;
    }
    out
}

/// One finite-level isolation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpotCheck {
    pub coord: ResidualCoord,
    pub level: u32,
    /// Smallest truncated distance to the other probed subgroups.
    pub nearest: Rat,
    pub neighbors: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CbReport {
    pub p: u64,
    pub k: u64,
    pub cb_rank: u32,
    /// Classes whose points are isolated in `C(G) \ N`.
    pub removed_at_stage_one: Vec<&'static str>,
    /// Classes making up the perfect kernel.
    pub perfect_core: Vec<&'static str>,
    pub glue_points: u64,
    pub spot_checks: Vec<SpotCheck>,
}

/// Cantor-Bendixson data of `C(G) \ N` by class, with isolation spot
/// checks on the first positions of every sheet.
pub fn cb_report(g: &Gpk) -> Result<CbReport> {
    let sheets = crate::exactnum::divisors(g.k);
    let probes_per_sheet = 4u64;
    let mut probes: Vec<(ResidualCoord, ClosedSubG)> = Vec::new();
    for &d in &sheets {
        for j in 1..=probes_per_sheet {
            let c = ResidualCoord::Sheet { d, j: NBar::Finite(j) };
            probes.push((c.clone(), residual_point(g, &c)?));
        }
        let c = ResidualCoord::GlueAddr { d };
        probes.push((c.clone(), residual_point(g, &c)?));
    }
    for x in 0..g.p as i64 {
        let h = ClosedSubG::disc(g, FinSubKT::trivial(), PadicRat::from_int(x, g.p))?;
        probes.push((coord_residual(&h, 2)?, h));
    }
    let mut spot_checks = Vec::new();
    for (c, h) in &probes {
        if !matches!(c, ResidualCoord::Sheet { .. }) {
            continue;
        }
        let level = h.data_level() + 1;
        let mut nearest: Option<Rat> = None;
        for (c2, h2) in &probes {
            if c2 == c {
                continue;
            }
            let dist = chabauty_dist(h, h2, level)?;
            nearest = Some(nearest.map_or(dist.clone(), |m: Rat| m.min(dist)));
        }
        spot_checks.push(SpotCheck {
            coord: c.clone(),
            level,
            nearest: nearest.unwrap_or_else(Rat::one),
            neighbors: probes.len() - 1,
        });
    }
    Ok(CbReport {
        p: g.p,
        k: g.k,
        cb_rank: 1,
        removed_at_stage_one: vec![PointClass::IsolatedResidual.tag()],
        perfect_core: vec![PointClass::CondensationCantor.tag(), PointClass::GluePoint(1).tag()],
        glue_points: count_sheets(g.p, g.k),
        spot_checks,
    })
}
