//! Seeded generators of descriptors and families shared by the property
//! tests and the acceptance harness.
#![allow(dead_code)]

use chabauty::exactnum::{divisors, is_prime, Int, PadicRat, Rat};
use chabauty::fgab::{canon_z2, canon_zxzn, Affine, FamilyFG, FgAmbient, FgSub, Periodic, SubZ2};
use chabauty::limits::{DStream, FamilyG, FamilyShape};
use chabauty::prufer::{ClosedSubG, FinSubKT, Gpk, SubPK};
use num_integer::Integer;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn g(p: u64, k: u64) -> Gpk {
    Gpk::new(p, k).unwrap()
}

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

const Z_TORSION: [i64; 6] = [1, 2, 3, 4, 6, 8];

fn pick<T: Copy>(r: &mut StdRng, xs: &[T]) -> T {
    *xs.choose(r).unwrap()
}

/// A rational with denominator prime to `p`.
pub fn p_integral(r: &mut StdRng, p: u64) -> Rat {
    let dens: Vec<i64> = [1i64, 3, 5, 7].into_iter().filter(|d| d % p as i64 != 0).collect();
    q(r.gen_range(-20..=20), pick(r, &dens))
}

pub fn p_unit(r: &mut StdRng, p: u64) -> PadicRat {
    loop {
        let x = p_integral(r, p);
        let x = PadicRat::new(x, p).unwrap();
        if x.is_unit() {
            return x;
        }
    }
}

pub fn finite_kt(r: &mut StdRng, k: u64) -> FinSubKT {
    let n = r.gen_range(0..=2);
    let gens: Vec<(Rat, Rat)> = (0..n)
        .map(|_| (q(r.gen_range(0..k as i64), k as i64), q(r.gen_range(0..8), pick(r, &Z_TORSION))))
        .collect();
    FinSubKT::from_generators(k, &gens).unwrap()
}

pub fn sub_pk(r: &mut StdRng, g: &Gpk) -> SubPK {
    if r.gen_bool(0.3) {
        return SubPK::FullD(pick(r, &divisors(g.k)));
    }
    let n = r.gen_range(0..=2);
    let gens: Vec<Vec<Rat>> = (0..n)
        .map(|_| {
            let e = r.gen_range(0..=3u32);
            let pe = (g.p as i64).pow(e);
            vec![q(r.gen_range(0..pe), pe), q(r.gen_range(0..g.k as i64), g.k as i64)]
        })
        .collect();
    SubPK::fin(g, chabauty::exactnum::FracLattice::from_generators(&gens, 2)).unwrap()
}

/// A finite subgroup with `w`-level at most 3 and small `z`-torsion.
pub fn finite_g(r: &mut StdRng, g: &Gpk) -> ClosedSubG {
    let n = r.gen_range(0..=2);
    let gens: Vec<Vec<Rat>> = (0..n)
        .map(|_| {
            let e = r.gen_range(0..=3u32);
            let pe = (g.p as i64).pow(e);
            vec![q(r.gen_range(0..pe), pe), q(r.gen_range(0..g.k as i64), g.k as i64), q(r.gen_range(0..8), pick(r, &Z_TORSION))]
        })
        .collect();
    ClosedSubG::finite(g, &gens).unwrap()
}

pub fn closed_sub(r: &mut StdRng, g: &Gpk) -> ClosedSubG {
    match r.gen_range(0..3) {
        0 => finite_g(r, g),
        1 => ClosedSubG::disc(g, finite_kt(r, g.k), PadicRat::new(p_integral(r, g.p), g.p).unwrap()).unwrap(),
        _ => ClosedSubG::one_dim(g, sub_pk(r, g)),
    }
}

pub const PK: [(u64, u64); 6] = [(2, 1), (2, 2), (3, 2), (5, 4), (2, 4), (3, 1)];

pub fn random_gpk(r: &mut StdRng) -> Gpk {
    let (p, k) = pick(r, &PK);
    g(p, k)
}

fn increasing(r: &mut StdRng, min_at_one: i64) -> Affine {
    let slope = r.gen_range(1..=2);
    let offset = r.gen_range(min_at_one - slope..=min_at_one - slope + 1);
    Affine::new(slope, offset)
}

fn periodic<T: Clone>(r: &mut StdRng, mut f: impl FnMut(&mut StdRng) -> T) -> Periodic<T> {
    let pre = r.gen_range(0..=2);
    let cyc = r.gen_range(1..=2);
    Periodic { prefix: (0..pre).map(|_| f(r)).collect(), cycle: (0..cyc).map(|_| f(r)).collect() }
}

/// `gamma` values in `(1/k)Z` that a power of `p` moves into `C_e`.
fn escape_gammas(g: &Gpk, e: u64) -> Vec<Rat> {
    (0..g.k as i64)
        .map(|b| q(b, g.k as i64))
        .filter(|gm| {
            let den = gm.denom().clone();
            let mut rest = &den / den.gcd(&Int::from(e));
            while (&rest % Int::from(g.p)).is_zero() && rest > Int::from(1) {
                rest /= Int::from(g.p);
            }
            rest == Int::from(1)
        })
        .collect()
}

pub const G_CONSTRUCTORS: [&str; 6] =
    ["DiscConvergent", "DiscGrowingF", "OneDimEscape", "OneDimPeriodic", "FiniteApprox", "EventuallyConstant"];

/// The `i`-th family cycles through the constructors.
pub fn family_g(r: &mut StdRng, i: usize) -> FamilyG {
    let g = random_gpk(r);
    let shape = match G_CONSTRUCTORS[i % G_CONSTRUCTORS.len()] {
        "DiscConvergent" => FamilyShape::DiscConvergent {
            f: finite_kt(r, g.k),
            x_limit: PadicRat::new(p_integral(r, g.p), g.p).unwrap(),
            v: {
                let lo = r.gen_range(0..=1);
                increasing(r, lo)
            },
            u: periodic(r, |r| p_unit(r, g.p)),
        },
        "DiscGrowingF" => {
            let d = pick(r, &divisors(g.k));
            let base = vec![(q(1, d as i64), q(r.gen_range(0..4), pick(r, &Z_TORSION)))];
            let x = periodic(r, |r| PadicRat::new(p_integral(r, g.p), g.p).unwrap());
            FamilyShape::DiscGrowingF { d, base, t: increasing(r, 1), x }
        }
        "OneDimEscape" => {
            let e = pick(r, &divisors(g.k));
            let gammas = escape_gammas(&g, e);
            let gamma = periodic(r, |r| gammas.choose(r).unwrap().clone());
            let lo = r.gen_range(0..=1);
            FamilyShape::OneDimFamily(DStream::Escape { e, a: increasing(r, lo), gamma })
        }
        "OneDimPeriodic" => {
            let seq = if r.gen_bool(0.7) {
                Periodic { prefix: (0..r.gen_range(0..=3)).map(|_| sub_pk(r, &g)).collect(), cycle: vec![sub_pk(r, &g)] }
            } else {
                periodic(r, |r| sub_pk(r, &g))
            };
            FamilyShape::OneDimFamily(DStream::Periodic(seq))
        }
        "FiniteApprox" => FamilyShape::FiniteApprox(closed_sub(r, &g)),
        _ => FamilyShape::EventuallyConstant {
            prefix: (0..r.gen_range(0..=3)).map(|_| closed_sub(r, &g)).collect(),
            value: closed_sub(r, &g),
        },
    };
    let fam = FamilyG { g, shape };
    fam.validate().unwrap();
    fam
}

pub const FG_CONSTRUCTORS: [&str; 6] =
    ["MixedEscape", "ProductEscape", "CyclicEscape", "Z2RankOneLimit", "Z2MinVecEscape", "EventuallyConstant"];

fn affine(r: &mut StdRng) -> Affine {
    Affine::new(r.gen_range(-2..=2), r.gen_range(-3..=3))
}

pub fn fg_sub(r: &mut StdRng, ambient: FgAmbient) -> FgSub {
    let n = r.gen_range(0..=2);
    let gens: Vec<(i64, i64)> = (0..n).map(|_| (r.gen_range(-4..=4), r.gen_range(-4..=4))).collect();
    match ambient {
        FgAmbient::ZxZn(m) => FgSub::ZxZn(canon_zxzn(m, &gens).unwrap()),
        FgAmbient::Z2 => FgSub::Z2(canon_z2(&gens)),
    }
}

pub fn family_fg(r: &mut StdRng, i: usize) -> FamilyFG {
    let n = r.gen_range(1..=12u64);
    let m = pick(r, &divisors(n));
    loop {
        let fam = match FG_CONSTRUCTORS[i % FG_CONSTRUCTORS.len()] {
            "MixedEscape" => FamilyFG::MixedEscape { n, m, a: increasing(r, 1), b: periodic(r, |r| r.gen_range(-5..=5)) },
            "ProductEscape" => FamilyFG::ProductEscape { n, m },
            "CyclicEscape" => {
                let ambient = if r.gen_bool(0.5) { FgAmbient::ZxZn(n) } else { FgAmbient::Z2 };
                FamilyFG::CyclicEscape { ambient, g: [affine(r), affine(r)] }
            }
            "Z2RankOneLimit" => {
                FamilyFG::Z2RankOneLimit { h: (r.gen_range(-3..=3), r.gen_range(-3..=3)), g: [affine(r), affine(r)] }
            }
            "Z2MinVecEscape" => FamilyFG::Z2MinVecEscape { basis: [[affine(r), affine(r)], [affine(r), affine(r)]] },
            _ => {
                let ambient = if r.gen_bool(0.5) { FgAmbient::ZxZn(n) } else { FgAmbient::Z2 };
                FamilyFG::EventuallyConstant {
                    prefix: (0..r.gen_range(0..=3)).map(|_| fg_sub(r, ambient)).collect(),
                    value: fg_sub(r, ambient),
                }
            }
        };
        if fam.validate().is_ok() && fam.limit().is_ok() {
            return fam;
        }
    }
}

pub fn z2_rank2(r: &mut StdRng, bound: i64) -> SubZ2 {
    loop {
        let gens: Vec<(i64, i64)> = (0..2).map(|_| (r.gen_range(-bound..=bound), r.gen_range(-bound..=bound))).collect();
        let h = canon_z2(&gens);
        if h.rank() == 2 {
            return h;
        }
    }
}

pub fn small_prime(r: &mut StdRng) -> u64 {
    loop {
        let p = r.gen_range(2..=7);
        if is_prime(p) {
            return p;
        }
    }
}
