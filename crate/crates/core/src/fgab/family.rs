use super::{adapted_basis, canon_z2, canon_zxzn, FgSub, NBar, SubZ2, SubZxZn, ZxZnKind};
use crate::error::{Error, Result};

/// `j -> slope * j + offset` for `j >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub slope: i64,
    pub offset: i64,
}

impl Affine {
    pub const fn new(slope: i64, offset: i64) -> Self {
        Affine { slope, offset }
    }

    pub const fn constant(c: i64) -> Self {
        Affine { slope: 0, offset: c }
    }

    pub fn at(&self, j: u64) -> i64 {
        self.slope * j as i64 + self.offset
    }

    /// Least `j0 >= 1` with `|self(j)| > bound` for every `j >= j0`.
    /// `None` for constant sequences that never exceed the bound.
    pub fn exceeds_from(&self, bound: i128) -> Option<u64> {
        let (s, o) = (self.slope as i128, self.offset as i128);
        if s == 0 {
            return if o.abs() > bound { Some(1) } else { None };
        }
        // the sign of s*j + o is eventually that of s
        let (s, o) = if s < 0 { (-s, -o) } else { (s, o) };
        let j0 = (bound - o).div_euclid(s) + 1;
        Some(j0.max(1) as u64)
    }
}

/// A sequence indexed from `j = 1`: `prefix` first, then `cycle` forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Periodic<T> {
    pub prefix: Vec<T>,
    pub cycle: Vec<T>,
}

impl<T: Clone + PartialEq> Periodic<T> {
    pub fn constant(v: T) -> Self {
        Periodic { prefix: vec![], cycle: vec![v] }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cycle.is_empty() {
            return Err(Error::malformed("periodic sequence with empty cycle"));
        }
        Ok(())
    }

    pub fn at(&self, j: u64) -> T {
        let j = j.max(1) as usize - 1;
        if j < self.prefix.len() {
            self.prefix[j].clone()
        } else {
            self.cycle[(j - self.prefix.len()) % self.cycle.len()].clone()
        }
    }

    /// The eventual value when the cycle is constant.
    pub fn eventual_constant(&self) -> Option<T> {
        let first = self.cycle.first()?;
        self.cycle.iter().all(|v| v == first).then(|| first.clone())
    }

    pub fn all_values(&self) -> impl Iterator<Item = &T> {
        self.prefix.iter().chain(&self.cycle)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FgAmbient {
    ZxZn(u64),
    Z2,
}

/// Closed-form sequences of subgroups, one constructor per convergence
/// criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyFG {
    /// `<(0, m), (a(j), b(j))>` in `Z x Z/n`.
    MixedEscape { n: u64, m: u64, a: Affine, b: Periodic<i64> },
    /// `jZ x <m>` in `Z x Z/n`.
    ProductEscape { n: u64, m: u64 },
    /// `<g(j)>`, an infinite cyclic group.
    CyclicEscape { ambient: FgAmbient, g: [Affine; 2] },
    /// `<h, g(j)>` in `Z^2`.
    Z2RankOneLimit { h: (i64, i64), g: [Affine; 2] },
    /// `<u1(j), u2(j)>` in `Z^2`.
    Z2MinVecEscape { basis: [[Affine; 2]; 2] },
    EventuallyConstant { prefix: Vec<FgSub>, value: FgSub },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FgLimit {
    Limit(FgSub),
    Divergent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FgLimitResult {
    pub limit: FgLimit,
    pub justification: &'static str,
}

pub const TAG_ZNZ: &str = "Prop-ZnZ";
pub const TAG_INFCYC: &str = "Lemma-infcyc";
pub const TAG_RANK1: &str = "Prop-Z2-rank1";
pub const TAG_MINVEC: &str = "Prop-Z2-minvec";
pub const TAG_FINDEX: &str = "Lemma-findex";
pub const TAG_CONSTANT: &str = "Constant";
pub const TAG_DIVERGENT: &str = "Divergent";

fn sub_ambient(h: &FgSub) -> FgAmbient {
    match h {
        FgSub::ZxZn(s) => FgAmbient::ZxZn(s.n),
        FgSub::Z2(_) => FgAmbient::Z2,
    }
}

/// Polynomial in `j`, coefficients from the constant term up.
fn poly_mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (k, y) in b.iter().enumerate() {
            out[i + k] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[i128], b: &[i128]) -> Vec<i128> {
    let n = a.len().max(b.len());
    (0..n).map(|i| a.get(i).copied().unwrap_or(0) - b.get(i).copied().unwrap_or(0)).collect()
}

fn poly_eval(a: &[i128], j: i128) -> i128 {
    a.iter().rev().fold(0, |acc, c| acc * j + c)
}

fn aff_poly(a: &Affine) -> Vec<i128> {
    vec![a.offset as i128, a.slope as i128]
}

/// Cauchy bound: every real root of `a` has absolute value below the result.
fn cauchy_bound(a: &[i128]) -> i128 {
    let deg = a.iter().rposition(|&c| c != 0).expect("nonzero polynomial");
    let lead = a[deg].abs();
    1 + a[..deg].iter().map(|c| (c.abs() + lead - 1) / lead).max().unwrap_or(0)
}

impl FamilyFG {
    pub fn ambient(&self) -> FgAmbient {
        match self {
            FamilyFG::MixedEscape { n, .. } | FamilyFG::ProductEscape { n, .. } => FgAmbient::ZxZn(*n),
            FamilyFG::CyclicEscape { ambient, .. } => *ambient,
            FamilyFG::Z2RankOneLimit { .. } | FamilyFG::Z2MinVecEscape { .. } => FgAmbient::Z2,
            FamilyFG::EventuallyConstant { value, .. } => sub_ambient(value),
        }
    }

    pub fn constructor_name(&self) -> &'static str {
        match self {
            FamilyFG::MixedEscape { .. } => "MixedEscape",
            FamilyFG::ProductEscape { .. } => "ProductEscape",
            FamilyFG::CyclicEscape { .. } => "CyclicEscape",
            FamilyFG::Z2RankOneLimit { .. } => "Z2RankOneLimit",
            FamilyFG::Z2MinVecEscape { .. } => "Z2MinVecEscape",
            FamilyFG::EventuallyConstant { .. } => "EventuallyConstant",
        }
    }

    /// Shape checks that do not depend on the escape hypotheses.
    pub fn validate(&self) -> Result<()> {
        let divides = |n: u64, m: u64| {
            if n == 0 || m == 0 || n % m != 0 {
                Err(Error::malformed(format!("m = {m} must divide n = {n}")))
            } else {
                Ok(())
            }
        };
        match self {
            FamilyFG::MixedEscape { n, m, a, b } => {
                divides(*n, *m)?;
                b.validate()?;
                if a.slope < 1 {
                    return Err(Error::malformed("MixedEscape needs a(j) = alpha*j + beta with alpha >= 1"));
                }
                if a.at(1) < 1 {
                    return Err(Error::malformed("MixedEscape needs a(j) >= 1 for all j >= 1"));
                }
                Ok(())
            }
            FamilyFG::ProductEscape { n, m } => divides(*n, *m),
            FamilyFG::CyclicEscape { ambient, g } => {
                if let FgAmbient::ZxZn(n) = ambient {
                    if *n == 0 {
                        return Err(Error::malformed("modulus n must be >= 1"));
                    }
                }
                if g[0].slope == 0 && g[1].slope == 0 {
                    return Err(Error::malformed("CyclicEscape generator is constant"));
                }
                Ok(())
            }
            FamilyFG::Z2RankOneLimit { h, .. } => {
                if *h == (0, 0) {
                    return Err(Error::malformed("Z2RankOneLimit needs h != 0"));
                }
                Ok(())
            }
            FamilyFG::Z2MinVecEscape { .. } => {
                let d = self.minvec_det();
                if d.len() < 3 || d[2] == 0 {
                    return Err(Error::malformed(
                        "Z2MinVecEscape needs det(u1(j), u2(j)) of degree 2 to certify escape of the minimal vector",
                    ));
                }
                // no root at an index j >= 1
                let b = cauchy_bound(&d);
                if (1..=b).any(|j| poly_eval(&d, j) == 0) {
                    return Err(Error::malformed("Z2MinVecEscape basis is degenerate for some j"));
                }
                Ok(())
            }
            FamilyFG::EventuallyConstant { prefix, value } => {
                let amb = sub_ambient(value);
                if prefix.iter().any(|h| sub_ambient(h) != amb) {
                    return Err(Error::malformed("EventuallyConstant members live in different ambient groups"));
                }
                Ok(())
            }
        }
    }

    fn minvec_det(&self) -> Vec<i128> {
        let FamilyFG::Z2MinVecEscape { basis } = self else { unreachable!() };
        let [[a, b], [c, d]] = basis;
        poly_sub(&poly_mul(&aff_poly(a), &aff_poly(d)), &poly_mul(&aff_poly(b), &aff_poly(c)))
    }

    /// The `j`-th member, `j >= 1`.
    pub fn member(&self, j: u64) -> Result<FgSub> {
        let j = j.max(1);
        Ok(match self {
            FamilyFG::MixedEscape { n, m, a, b } => {
                FgSub::ZxZn(canon_zxzn(*n, &[(0, *m as i64), (a.at(j), b.at(j))])?)
            }
            FamilyFG::ProductEscape { n, m } => FgSub::ZxZn(canon_zxzn(*n, &[(j as i64, 0), (0, *m as i64)])?),
            FamilyFG::CyclicEscape { ambient, g } => match ambient {
                FgAmbient::ZxZn(n) => FgSub::ZxZn(canon_zxzn(*n, &[(g[0].at(j), g[1].at(j))])?),
                FgAmbient::Z2 => FgSub::Z2(canon_z2(&[(g[0].at(j), g[1].at(j))])),
            },
            FamilyFG::Z2RankOneLimit { h, g } => FgSub::Z2(canon_z2(&[*h, (g[0].at(j), g[1].at(j))])),
            FamilyFG::Z2MinVecEscape { basis } => FgSub::Z2(canon_z2(&[
                (basis[0][0].at(j), basis[0][1].at(j)),
                (basis[1][0].at(j), basis[1][1].at(j)),
            ])),
            FamilyFG::EventuallyConstant { prefix, value } => {
                prefix.get(j as usize - 1).copied().unwrap_or(*value)
            }
        })
    }

    /// Members `1..=period` all equal: the family is constant.
    fn periodic_verdict(&self, period: u64) -> Result<(FgLimitResult, Option<u64>)> {
        let first = self.member(1)?;
        for j in 2..=period.max(1) {
            if self.member(j)? != first {
                return Ok((FgLimitResult { limit: FgLimit::Divergent, justification: TAG_DIVERGENT }, None));
            }
        }
        Ok((FgLimitResult { limit: FgLimit::Limit(first), justification: TAG_CONSTANT }, Some(1)))
    }

    fn rank_one_data(&self) -> Result<((i64, i64), Affine, Affine, u64)> {
        let FamilyFG::Z2RankOneLimit { h, g } = self else { unreachable!() };
        let (n, p, q) = adapted_basis(*h)?;
        // g = s p + beta q with beta = det(p, g), s = det(g, q)
        let beta = Affine::new(p.0 * g[1].slope - p.1 * g[0].slope, p.0 * g[1].offset - p.1 * g[0].offset);
        let s = Affine::new(g[0].slope * q.1 - g[1].slope * q.0, g[0].offset * q.1 - g[1].offset * q.0);
        Ok((p, beta, s, n as u64))
    }

    /// Symbolic limit together with the name of the statement that yields it.
    pub fn limit(&self) -> Result<FgLimitResult> {
        self.limit_and_stage(0).map(|(r, _)| r)
    }

    /// First index from which every member agrees with the limit on the
    /// ball of radius `radius` (`|x| <= radius` in `Z x Z/n`, sup norm in
    /// `Z^2`). `None` for divergent families.
    pub fn stage(&self, radius: u64) -> Result<Option<u64>> {
        self.limit_and_stage(radius).map(|(_, s)| s)
    }

    fn limit_and_stage(&self, radius: u64) -> Result<(FgLimitResult, Option<u64>)> {
        self.validate()?;
        let r = radius as i128;
        let lim = |h: FgSub, tag: &'static str, stage: Option<u64>| {
            Ok((FgLimitResult { limit: FgLimit::Limit(h), justification: tag }, stage))
        };
        match self {
            FamilyFG::MixedEscape { n, m, a, .. } => {
                lim(FgSub::ZxZn(SubZxZn { n: *n, m: *m, kind: ZxZnKind::FiniteOnly }), TAG_ZNZ, a.exceeds_from(r))
            }
            FamilyFG::ProductEscape { n, m } => lim(
                FgSub::ZxZn(SubZxZn { n: *n, m: *m, kind: ZxZnKind::FiniteOnly }),
                TAG_ZNZ,
                Some(radius + 1),
            ),
            FamilyFG::CyclicEscape { ambient, g } => match ambient {
                FgAmbient::ZxZn(n) => {
                    if g[0].slope == 0 {
                        // bounded first coordinate: the family is periodic mod n
                        return self.periodic_verdict(*n);
                    }
                    lim(
                        FgSub::ZxZn(SubZxZn { n: *n, m: *n, kind: ZxZnKind::FiniteOnly }),
                        TAG_INFCYC,
                        g[0].exceeds_from(r),
                    )
                }
                FgAmbient::Z2 => {
                    let stage = g.iter().filter(|a| a.slope != 0).filter_map(|a| a.exceeds_from(r)).min();
                    lim(FgSub::Z2(SubZ2::Trivial), TAG_INFCYC, stage)
                }
            },
            FamilyFG::Z2RankOneLimit { h, .. } => {
                let (p, beta, _, n) = self.rank_one_data()?;
                if beta.slope == 0 {
                    return self.periodic_verdict(n);
                }
                let scale = (p.0.unsigned_abs() + p.1.unsigned_abs()) as i128;
                lim(FgSub::Z2(canon_z2(&[*h])), TAG_RANK1, beta.exceeds_from(scale * r))
            }
            FamilyFG::Z2MinVecEscape { basis } => {
                // all nonzero vectors have sup norm > R once
                // det^2 > 2 R^2 max(|u1|^2, |u2|^2)
                let d = self.minvec_det();
                let d2 = poly_mul(&d, &d);
                let mut last_fail = 0i128;
                for u in basis {
                    let x2 = poly_mul(&aff_poly(&u[0]), &aff_poly(&u[0]));
                    let y2 = poly_mul(&aff_poly(&u[1]), &aff_poly(&u[1]));
                    let n2: Vec<i128> = x2.iter().zip(&y2).map(|(a, b)| a + b).collect();
                    let rhs: Vec<i128> = n2.iter().map(|c| c * 2 * r * r).collect();
                    let diff = poly_sub(&d2, &rhs);
                    let bound = cauchy_bound(&diff);
                    for j in (1..=bound).rev() {
                        if poly_eval(&diff, j) <= 0 {
                            last_fail = last_fail.max(j);
                            break;
                        }
                    }
                }
                lim(FgSub::Z2(SubZ2::Trivial), TAG_MINVEC, Some(last_fail as u64 + 1))
            }
            FamilyFG::EventuallyConstant { prefix, value } => {
                let tag = if matches!(super::index_fg(value), NBar::Finite(_)) { TAG_FINDEX } else { TAG_CONSTANT };
                // the stage is where the constant tail starts, refined by
                // skipping prefix members that already agree on the ball
                let mut stage = prefix.len() as u64 + 1;
                while stage > 1 && ball_traces_agree(&prefix[stage as usize - 2], value, radius) {
                    stage -= 1;
                }
                lim(*value, tag, Some(stage))
            }
        }
    }
}

/// Whether two subgroups of the same ambient group meet the ball of
/// radius `r` in the same set.
pub fn ball_traces_agree(a: &FgSub, b: &FgSub, r: u64) -> bool {
    first_difference_radius(a, b, r).is_none()
}

/// Least radius `R <= r_max` at which the ball traces differ.
pub fn first_difference_radius(a: &FgSub, b: &FgSub, r_max: u64) -> Option<u64> {
    let r_max = r_max as i64;
    match (a, b) {
        (FgSub::ZxZn(a), FgSub::ZxZn(b)) => {
            let n = a.n as i64;
            let differs = |x: i64| (0..n).any(|y| a.contains(x, y) != b.contains(x, y));
            if differs(0) {
                return Some(1);
            }
            (1..=r_max).find(|&x| differs(x) || differs(-x)).map(|x| x as u64)
        }
        (FgSub::Z2(a), FgSub::Z2(b)) => {
            let differs = |x: i64, y: i64| a.contains(x, y) != b.contains(x, y);
            for rr in 1..=r_max {
                // the shell of sup-norm radius rr
                for t in -rr..=rr {
                    if differs(rr, t) || differs(-rr, t) || differs(t, rr) || differs(t, -rr) {
                        return Some(rr as u64);
                    }
                }
            }
            None
        }
        _ => Some(1),
    }
}
