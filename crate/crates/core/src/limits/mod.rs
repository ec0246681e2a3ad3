//! Closed-form families of closed subgroups of `G_{p,k}` and their limits.
//!
//! Each constructor carries enough data for the limit to be read off
//! symbolically; `stage(L)` is an index from which every member is within
//! `2^{-(L+1)}` of the limit in the distance truncated at level `L`.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{int_pow, p_power_exponent, rat, FracLattice, Int, PadicRat, Rat};
use crate::fgab::{Affine, Periodic};
use crate::metric::{self, directed_with_witness, KtSub, Witness};
use crate::prufer::{ClosedSubG, FinSubKT, Gpk, QuotientMap, SubKind, SubPK};

pub const TAG_DISC: &str = "Thm-disc-convergence";
pub const TAG_GROWING_F: &str = "Thm-growing-torsion";
pub const TAG_ONE_DIM: &str = "Prop-ZnZ-dual";
pub const TAG_COMPACTIFICATION: &str = "Prop-finite-dense";
pub const TAG_FINDEX: &str = crate::fgab::family::TAG_FINDEX;
pub const TAG_CONSTANT: &str = crate::fgab::family::TAG_CONSTANT;
pub const TAG_DIVERGENT: &str = crate::fgab::family::TAG_DIVERGENT;

/// The sequence `D(j)` of a one-dimensional family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DStream {
    /// `D(j) = <(1/p^{a(j)}, gamma(j)), (0, 1/e)>`, tending to
    /// `C_{p^∞} x C_e`.
    Escape { e: u64, a: Affine, gamma: Periodic<Rat> },
    Periodic(Periodic<SubPK>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyShape {
    /// `Disc(F, x_lim + p^{v(j)} u(j))` with `u(j)` units.
    DiscConvergent { f: FinSubKT, x_limit: PadicRat, v: Affine, u: Periodic<PadicRat> },
    /// `Disc(F(j), x(j))` with `F(j) = <base, (0, 1/t(j))>` and
    /// `|pi_c(base)| = d`.
    DiscGrowingF { d: u64, base: Vec<(Rat, Rat)>, t: Affine, x: Periodic<PadicRat> },
    OneDimFamily(DStream),
    /// Finite approximations of a fixed subgroup.
    FiniteApprox(ClosedSubG),
    EventuallyConstant { prefix: Vec<ClosedSubG>, value: ClosedSubG },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyG {
    pub g: Gpk,
    pub shape: FamilyShape,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GLimit {
    Limit(ClosedSubG),
    Divergent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLimitResult {
    pub limit: GLimit,
    pub justification: &'static str,
}

fn increasing(a: &Affine, what: &str) -> Result<()> {
    if a.slope < 1 || a.at(1) < 0 {
        return Err(Error::malformed(format!("{what} must be a strictly increasing affine sequence with {what}(1) >= 0")));
    }
    Ok(())
}

/// First `j` with `a(j) >= bound`, for increasing `a`.
fn reach(a: &Affine, bound: i64) -> u64 {
    if bound <= 0 && a.at(1) >= bound {
        return 1;
    }
    a.exceeds_from(bound as i128 - 1).unwrap_or(1)
}

fn c_denominator_exponent(gamma: &Rat, e: u64, p: u64) -> Option<u32> {
    // least s with p^s * gamma in (1/e)Z
    let den = gamma.denom().clone();
    let rest = &den / den.gcd(&Int::from(e));
    p_power_exponent(&rest, p)
}

impl DStream {
    fn validate(&self, g: &Gpk) -> Result<u32> {
        match self {
            DStream::Escape { e, a, gamma } => {
                gamma.validate()?;
                if *e == 0 || g.k % e != 0 {
                    return Err(Error::malformed(format!("e = {e} must divide k = {}", g.k)));
                }
                increasing(a, "a")?;
                let mut s_max = 0;
                for gm in gamma.all_values() {
                    if !(Int::from(g.k) % gm.denom()).is_zero() {
                        return Err(Error::malformed(format!("gamma = {gm} is not in (1/k)Z")));
                    }
                    let s = c_denominator_exponent(gm, *e, g.p).ok_or_else(|| {
                        Error::malformed(format!("no power of p moves gamma = {gm} into C_{e}"))
                    })?;
                    s_max = s_max.max(s);
                }
                Ok(s_max)
            }
            DStream::Periodic(seq) => {
                seq.validate()?;
                for d in seq.all_values() {
                    match d {
                        SubPK::FinD(l) => {
                            SubPK::fin(g, l.clone()).map_err(|e| Error::malformed(e.to_string()))?;
                        }
                        SubPK::FullD(e) => {
                            SubPK::full(g, *e).map_err(|e| Error::malformed(e.to_string()))?;
                        }
                    }
                }
                Ok(0)
            }
        }
    }

    fn at(&self, g: &Gpk, j: u64) -> Result<SubPK> {
        match self {
            DStream::Escape { e, a, gamma } => {
                let aw = Rat::new(Int::one(), int_pow(g.p, a.at(j) as u32));
                let gens = vec![vec![aw, gamma.at(j)], vec![Rat::zero(), rat(1, *e as i64)]];
                SubPK::fin(g, FracLattice::from_generators(&gens, 2))
            }
            DStream::Periodic(seq) => Ok(seq.at(j)),
        }
    }
}

fn finite_growing(k: u64, base: &[(Rat, Rat)], t: i64) -> Result<FinSubKT> {
    let mut gens = base.to_vec();
    gens.push((Rat::zero(), rat(1, t)));
    FinSubKT::from_generators(k, &gens)
}

/// First index `s` such that members `s, s+1, ...` of an eventually
/// constant stream agree with the value on all windows up to `level`.
fn constant_stage(prefix: &[ClosedSubG], value: &ClosedSubG, level: u32) -> u64 {
    let mut stage = prefix.len() as u64 + 1;
    while stage > 1 && (0..=level).all(|l| prefix[stage as usize - 2].fibers(l) == value.fibers(l)) {
        stage -= 1;
    }
    stage
}

impl FamilyG {
    pub fn constructor_name(&self) -> &'static str {
        match &self.shape {
            FamilyShape::DiscConvergent { .. } => "DiscConvergent",
            FamilyShape::DiscGrowingF { .. } => "DiscGrowingF",
            FamilyShape::OneDimFamily(_) => "OneDimFamily",
            FamilyShape::FiniteApprox(_) => "FiniteApprox",
            FamilyShape::EventuallyConstant { .. } => "EventuallyConstant",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.g;
        let bad = |e: Error| Error::malformed(e.to_string());
        match &self.shape {
            FamilyShape::DiscConvergent { f, x_limit, v, u } => {
                FinSubKT::new(g.k, f.lattice().clone()).map_err(bad)?;
                u.validate()?;
                increasing(v, "v")?;
                if x_limit.prime() != g.p {
                    return Err(Error::malformed("x_limit has the wrong prime"));
                }
                for ui in u.all_values() {
                    if ui.prime() != g.p || !ui.is_unit() {
                        return Err(Error::malformed(format!("u = {ui} is not a {}-adic unit", g.p)));
                    }
                }
            }
            FamilyShape::DiscGrowingF { d, base, t, x } => {
                x.validate()?;
                if *d == 0 || g.k % d != 0 {
                    return Err(Error::malformed(format!("d = {d} must divide k = {}", g.k)));
                }
                let f = FinSubKT::from_generators(g.k, base).map_err(bad)?;
                if f.lattice().coordinate_exponent(0) != Int::from(*d) {
                    return Err(Error::malformed(format!(
                        "base projects onto C_{} in C_k, expected C_{d}",
                        f.lattice().coordinate_exponent(0)
                    )));
                }
                if t.slope < 1 || t.at(1) < 1 {
                    return Err(Error::malformed("t must be strictly increasing with t(1) >= 1"));
                }
                for xi in x.all_values() {
                    if xi.prime() != g.p {
                        return Err(Error::malformed("x has the wrong prime"));
                    }
                }
            }
            FamilyShape::OneDimFamily(s) => {
                s.validate(g)?;
            }
            FamilyShape::FiniteApprox(h) => {
                g.same(&h.g).map_err(bad)?;
                h.canon().map_err(bad)?;
            }
            FamilyShape::EventuallyConstant { prefix, value } => {
                for h in prefix.iter().chain([value]) {
                    g.same(&h.g).map_err(bad)?;
                    h.canon().map_err(bad)?;
                }
            }
        }
        Ok(())
    }

    /// The `j`-th member, `j >= 1`.
    pub fn member(&self, j: u64) -> Result<ClosedSubG> {
        self.validate()?;
        let j = j.max(1);
        let g = &self.g;
        match &self.shape {
            FamilyShape::DiscConvergent { f, x_limit, v, u } => {
                let shift = u.at(j).scale(&Rat::from_integer(int_pow(g.p, v.at(j) as u32)))?;
                ClosedSubG::disc(g, f.clone(), x_limit.add(&shift))
            }
            FamilyShape::DiscGrowingF { base, t, x, .. } => ClosedSubG::disc(g, finite_growing(g.k, base, t.at(j))?, x.at(j)),
            FamilyShape::OneDimFamily(s) => Ok(ClosedSubG::one_dim(g, s.at(g, j)?)),
            FamilyShape::FiniteApprox(h) => {
                Ok(ClosedSubG::new(*g, SubKind::Finite(h.canon()?.approximate_by_finite(j))))
            }
            FamilyShape::EventuallyConstant { prefix, value } => {
                Ok(prefix.get(j as usize - 1).unwrap_or(value).canon()?)
            }
        }
    }

    pub fn limit(&self) -> Result<GLimitResult> {
        self.limit_and_stage(0).map(|(r, _)| r)
    }

    /// First index from which the level-`L` truncated distance to the
    /// limit stays at most `2^{-(L+1)}`. `None` for divergent families.
    pub fn stage(&self, level: u32) -> Result<Option<u64>> {
        self.limit_and_stage(level).map(|(_, s)| s)
    }

    fn limit_and_stage(&self, level: u32) -> Result<(GLimitResult, Option<u64>)> {
        self.validate()?;
        let g = &self.g;
        let lim = |h: ClosedSubG, tag: &'static str, stage: u64| {
            Ok((GLimitResult { limit: GLimit::Limit(h), justification: tag }, Some(stage)))
        };
        let l = level as i64;
        match &self.shape {
            FamilyShape::DiscConvergent { f, x_limit, v, .. } => {
                // x(j) = x_lim mod p^L once v(j) >= L: windows up to L agree
                lim(ClosedSubG::disc(g, f.clone(), x_limit.clone())?, TAG_DISC, reach(v, l))
            }
            FamilyShape::DiscGrowingF { d, t, .. } => {
                // each fiber is a coset of C_{t'} with t' >= t(j), at distance
                // <= 1/(2 t(j)) from the circle
                lim(ClosedSubG::full_d(g, *d)?, TAG_GROWING_F, reach(t, 1i64 << level.min(62)))
            }
            FamilyShape::OneDimFamily(s) => match s {
                DStream::Escape { e, a, .. } => {
                    let s_max = s.validate(g)? as i64;
                    lim(ClosedSubG::full_d(g, *e)?, TAG_ONE_DIM, reach(a, l + s_max))
                }
                DStream::Periodic(seq) => match seq.eventual_constant() {
                    Some(v) => {
                        let value = ClosedSubG::one_dim(g, v);
                        let prefix: Vec<ClosedSubG> =
                            seq.prefix.iter().map(|d| ClosedSubG::one_dim(g, d.clone())).collect();
                        let stage = constant_stage(&prefix, &value, level);
                        lim(value, TAG_CONSTANT, stage)
                    }
                    None => Ok((GLimitResult { limit: GLimit::Divergent, justification: TAG_DIVERGENT }, None)),
                },
            },
            FamilyShape::FiniteApprox(h) => {
                let h = h.canon()?;
                let stage = match h.kind {
                    SubKind::Finite(_) => 1,
                    SubKind::Disc { .. } => level.max(1) as u64,
                    // fibers are C_n against circles: distance 1/(2n)
                    SubKind::OneDim(_) => 1u64 << level.min(62),
                };
                lim(h, TAG_COMPACTIFICATION, stage)
            }
            FamilyShape::EventuallyConstant { prefix, value } => {
                let value = value.canon()?;
                let prefix: Vec<ClosedSubG> = prefix.iter().map(|h| h.canon()).collect::<Result<_>>()?;
                let tag = if matches!(value.kind, SubKind::Finite(_)) { TAG_FINDEX } else { TAG_CONSTANT };
                let stage = constant_stage(&prefix, &value, level);
                lim(value, tag, stage)
            }
        }
    }
}

/// Streams of closed subgroups of `C_k x T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KtStream {
    /// `<base, (0, 1/t(j))>`, tending to `C_d x T` with `d = |pi_c(base)|`.
    Growing { base: Vec<(Rat, Rat)>, t: Affine },
    Periodic(Periodic<FinSubKT>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KtLimit {
    Limit(KtSub),
    Divergent,
}

impl KtStream {
    pub fn member(&self, k: u64, j: u64) -> Result<FinSubKT> {
        match self {
            KtStream::Growing { base, t } => finite_growing(k, base, t.at(j.max(1))),
            KtStream::Periodic(seq) => Ok(seq.at(j)),
        }
    }
}

/// Limit of a stream of finite subgroups of `C_k x T`.
pub fn fkt_limit(k: u64, stream: &KtStream) -> Result<KtLimit> {
    match stream {
        KtStream::Growing { base, t } => {
            if t.slope < 1 || t.at(1) < 1 {
                return Err(Error::malformed("t must be strictly increasing with t(1) >= 1"));
            }
            let f = FinSubKT::from_generators(k, base).map_err(|e| Error::malformed(e.to_string()))?;
            let d = f.lattice().coordinate_exponent(0);
            Ok(KtLimit::Limit(KtSub::FullKT(crate::prufer::int_u64(&d))))
        }
        KtStream::Periodic(seq) => {
            seq.validate()?;
            for f in seq.all_values() {
                FinSubKT::new(k, f.lattice().clone()).map_err(|e| Error::malformed(e.to_string()))?;
            }
            Ok(match seq.eventual_constant() {
                Some(f) => KtLimit::Limit(KtSub::Fin(f)),
                None => KtLimit::Divergent,
            })
        }
    }
}

/// Least indices from which both halves of Hausdorff convergence hold on
/// one window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCertificate {
    pub level: u32,
    /// Every point of the candidate is `eps`-close to the members from here.
    pub approximated_from: u64,
    /// Every point of the members is `eps`-close to the candidate from here.
    pub no_spurious_from: u64,
}

/// Which half of the convergence criterion failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Failure {
    /// A point of the candidate is far from the member.
    NotApproximated,
    /// A point of the member is far from the candidate.
    Spurious,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Valid for the given prefix and windows `0..=level` only.
    Certified { level: u32, epsilon: Rat, levels: Vec<LevelCertificate> },
    Refuted { level: u32, index: u64, failure: Failure, witness: Witness, distance: Rat },
}

/// Checks, on the windows up to `level`, that the members of `prefix`
/// eventually approximate `h` to within `epsilon` in both directions.
/// A refutation names the last member together with a point witnessing
/// the failure.
pub fn convergence_certificate(prefix: &[ClosedSubG], h: &ClosedSubG, level: u32, epsilon: &Rat) -> Result<Certificate> {
    if prefix.is_empty() {
        return Err(Error::malformed("empty prefix"));
    }
    for m in prefix {
        h.g.same(&m.g)?;
    }
    let mut levels = Vec::new();
    for l in 0..=level {
        let target = h.fibers(l);
        let member_fibers: Vec<_> = prefix.iter().map(|m| m.fibers(l)).collect();
        let last = member_fibers.last().unwrap();
        let n = prefix.len() as u64;
        let (d1, w1) = directed_with_witness(&target, last);
        if &d1 > epsilon {
            return Ok(Certificate::Refuted { level: l, index: n, failure: Failure::NotApproximated, witness: w1.unwrap(), distance: d1 });
        }
        let (d2, w2) = directed_with_witness(last, &target);
        if &d2 > epsilon {
            return Ok(Certificate::Refuted { level: l, index: n, failure: Failure::Spurious, witness: w2.unwrap(), distance: d2 });
        }
        let from = |forward: bool| {
            let mut s = n;
            while s > 1 {
                let f = &member_fibers[s as usize - 2];
                let d = if forward { directed_with_witness(&target, f).0 } else { directed_with_witness(f, &target).0 };
                if &d > epsilon {
                    break;
                }
                s -= 1;
            }
            s
        };
        levels.push(LevelCertificate { level: l, approximated_from: from(true), no_spurious_from: from(false) });
    }
    Ok(Certificate::Certified { level, epsilon: epsilon.clone(), levels })
}

/// Outcome of comparing `lim q_F^{-1}(H_j)` with `q_F^{-1}(lim H_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCheck {
    /// Descriptor equality of the two limits.
    pub symbolic: bool,
    /// First window level where they differ, if any.
    pub window_mismatch: Option<u32>,
    /// Truncated distance from the pulled-back member at the quotient
    /// family's stage to the claimed limit.
    pub member_distance: Rat,
    pub holds: bool,
}

fn preimage_family(q: &QuotientMap, fam: &FamilyG) -> Result<FamilyG> {
    let g = Gpk { p: fam.g.p, k: q.k };
    let shape = match &fam.shape {
        FamilyShape::DiscConvergent { f, x_limit, v, u } => FamilyShape::DiscConvergent {
            f: q.preimage_kt(f),
            x_limit: x_limit.clone(),
            v: *v,
            u: u.clone(),
        },
        FamilyShape::DiscGrowingF { base, t, x, .. } => {
            let b2 = FinSubKT::from_generators(fam.g.k, base)?;
            let b = q.preimage_kt(&b2);
            let d = crate::prufer::int_u64(&b.lattice().coordinate_exponent(0));
            FamilyShape::DiscGrowingF {
                d,
                base: b.lattice().rows().iter().map(|r| (r[0].clone(), r[1].clone())).collect(),
                t: Affine::new(t.slope * q.t as i64, t.offset * q.t as i64),
                x: x.clone(),
            }
        }
        FamilyShape::OneDimFamily(DStream::Escape { e, a, gamma }) => {
            let r = Rat::new(Int::from(q.d), Int::from(q.k));
            FamilyShape::OneDimFamily(DStream::Escape {
                e: q.k * e / q.d,
                a: *a,
                gamma: Periodic {
                    prefix: gamma.prefix.iter().map(|x| x * &r).collect(),
                    cycle: gamma.cycle.iter().map(|x| x * &r).collect(),
                },
            })
        }
        FamilyShape::OneDimFamily(DStream::Periodic(seq)) => {
            let pull = |d: &SubPK| -> Result<SubPK> {
                match q.preimage(&ClosedSubG::one_dim(&fam.g, d.clone()))?.kind {
                    SubKind::OneDim(d) => Ok(d),
                    _ => unreachable!(),
                }
            };
            FamilyShape::OneDimFamily(DStream::Periodic(Periodic {
                prefix: seq.prefix.iter().map(pull).collect::<Result<_>>()?,
                cycle: seq.cycle.iter().map(pull).collect::<Result<_>>()?,
            }))
        }
        // members are not the approximations of the preimage, but the
        // limit is the same; the member check below uses true preimages
        FamilyShape::FiniteApprox(h) => FamilyShape::FiniteApprox(q.preimage(h)?),
        FamilyShape::EventuallyConstant { prefix, value } => FamilyShape::EventuallyConstant {
            prefix: prefix.iter().map(|h| q.preimage(h)).collect::<Result<_>>()?,
            value: q.preimage(value)?,
        },
    };
    Ok(FamilyG { g, shape })
}

/// Checks that pulling a convergent family back along `q_F` commutes with
/// taking limits, on windows up to `level`.
pub fn limit_commutes_with_quotient_check(k: u64, f: &FinSubKT, fam: &FamilyG, level: u32) -> Result<QuotientCheck> {
    let q = QuotientMap::new(k, f)?;
    let pulled = preimage_family(&q, fam)?;
    let claimed = match pulled.limit()?.limit {
        GLimit::Limit(h) => h,
        GLimit::Divergent => return Err(Error::malformed("the quotient family diverges")),
    };
    check_with_claim(&q, fam, &claimed, level)
}

/// As [`limit_commutes_with_quotient_check`], against a supplied claim for
/// the limit of the pulled-back family.
pub fn limit_commutes_with_quotient_check_against(
    k: u64,
    f: &FinSubKT,
    fam: &FamilyG,
    claimed: &ClosedSubG,
    level: u32,
) -> Result<QuotientCheck> {
    let q = QuotientMap::new(k, f)?;
    check_with_claim(&q, fam, claimed, level)
}

fn check_with_claim(q: &QuotientMap, fam: &FamilyG, claimed: &ClosedSubG, level: u32) -> Result<QuotientCheck> {
    if fam.g.k != q.d {
        return Err(Error::MismatchedAmbient(format!("quotient is C_{} x T, family lives over k = {}", q.d, fam.g.k)));
    }
    let lim = match fam.limit()?.limit {
        GLimit::Limit(h) => h,
        GLimit::Divergent => return Err(Error::malformed("the quotient family diverges")),
    };
    let pulled_lim = q.preimage(&lim)?.canon()?;
    let claimed = claimed.canon()?;
    let symbolic = pulled_lim == claimed;
    let window_mismatch = (0..=level).find(|&l| pulled_lim.fibers(l) != claimed.fibers(l));
    let stage = fam.stage(level)?.unwrap_or(1);
    let member = q.preimage(&fam.member(stage)?)?;
    let member_distance = metric::chabauty_dist(&member, &claimed, level)?;
    let bound = Rat::new(Int::one(), int_pow(2, level + 1));
    let holds = symbolic && window_mismatch.is_none() && member_distance <= bound;
    Ok(QuotientCheck { symbolic, window_mismatch, member_distance, holds })
}
