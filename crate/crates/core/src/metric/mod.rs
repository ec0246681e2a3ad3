//! Window Hausdorff distances and the summed Chabauty distance.
//!
//! Ground metric on `G`: two points are at distance 1 unless they share the
//! `(w, c)` coordinates, in which case their distance is the arc distance
//! of the `z` coordinates.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rat, FracLattice, Int, Rat};
use crate::fgab::{FgSub, FgAmbient};
use crate::prufer::{ClosedSubG, FinSubG, FinSubKT, Fibers, Gpk, SubKind, SubPK};

/// One summand of the Chabauty distance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowMetricReport {
    pub level: u32,
    pub distance: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub distance: Rat,
    pub levels: Vec<WindowMetricReport>,
    /// Upper bound on the omitted tail `sum_{l > L} 2^{-(l+1)}`.
    pub truncation: Rat,
}

fn pow2_inv(e: u32) -> Rat {
    Rat::new(Int::one(), num_traits::pow(Int::from(2), e as usize))
}

/// `max_{x in o1 + C_a} dist(x, o2 + C_b)`.
fn directed_coset(o1: &Rat, a: &Int, o2: &Rat, b: &Int) -> Rat {
    let l = a.lcm(b);
    let m = &l / b;
    let step = Rat::new(Int::one(), l.clone());
    let period = Rat::new(Int::one(), b.clone());
    let diff = o1 - o2;
    let delta = &diff - (&diff / &step).floor() * &step;
    // values delta + j/l, j in [0, m), inside [0, 1/b); the distance to
    // (1/b)Z peaks at the middle of the interval
    let half = &period / Rat::from_integer(Int::from(2));
    let centre = ((&half - &delta) / &step).floor().to_integer();
    let mut best = Rat::zero();
    for j in [centre.clone(), centre + 1] {
        let j = j.max(Int::zero()).min(&m - 1);
        let s = &delta + Rat::from_integer(j) * &step;
        let d = if s < &period - &s { s.clone() } else { &period - &s };
        if d > best {
            best = d;
        }
    }
    best
}

fn fiber_distance(m1: Option<&Int>, o1: &Rat, m2: Option<&Int>, o2: &Rat) -> Rat {
    match (m1, m2) {
        (None, None) => Rat::zero(),
        (None, Some(b)) | (Some(b), None) => Rat::new(Int::one(), b * Int::from(2)),
        (Some(a), Some(b)) => {
            let x = directed_coset(o1, a, o2, b);
            let y = directed_coset(o2, b, o1, a);
            x.max(y)
        }
    }
}

/// Hausdorff distance between two fibered traces over the same window.
pub fn fibers_hausdorff(f1: &Fibers, f2: &Fibers) -> Rat {
    if f1.map.len() != f2.map.len() || f1.map.keys().zip(f2.map.keys()).any(|(a, b)| a != b) {
        return Rat::one();
    }
    let mut best = Rat::zero();
    for (o1, o2) in f1.map.values().zip(f2.map.values()) {
        let d = fiber_distance(f1.modulus.as_ref(), o1, f2.modulus.as_ref(), o2);
        if d > best {
            best = d;
        }
    }
    best
}

/// A point realizing a directed distance: `(w, c, z)`.
pub type Witness = (Rat, Rat, Rat);

/// `sup_{x in a} dist(x, b)` together with a point of `a` attaining it.
pub fn directed_with_witness(a: &Fibers, b: &Fibers) -> (Rat, Option<Witness>) {
    let mut best = Rat::zero();
    let mut witness = None;
    for ((w, c), oa) in &a.map {
        let (d, z) = match b.map.get(&(w.clone(), c.clone())) {
            None => (Rat::one(), oa.clone()),
            Some(ob) => match (a.modulus.as_ref(), b.modulus.as_ref()) {
                (_, None) => (Rat::zero(), oa.clone()),
                (None, Some(bm)) => {
                    let h = Rat::new(Int::one(), bm * Int::from(2));
                    (h.clone(), ob + h)
                }
                (Some(am), Some(bm)) => {
                    let d = directed_coset(oa, am, ob, bm);
                    // locate the point of oa + C_am at distance d
                    let mut z = oa.clone();
                    let mut i = Int::zero();
                    while &i < am {
                        let x = oa + Rat::new(i.clone(), am.clone());
                        let r = &x - ob;
                        let period = Rat::new(Int::one(), bm.clone());
                        let s = &r - (&r / &period).floor() * &period;
                        let dist = if s < &period - &s { s.clone() } else { &period - &s };
                        if dist == d {
                            z = x;
                            break;
                        }
                        i += 1;
                    }
                    (d, z)
                }
            },
        };
        if d > best || (witness.is_none() && d == best && !d.is_zero()) {
            best = d;
            witness = Some((w.clone(), c.clone(), crate::exactnum::frac(&z)));
        }
    }
    (best, witness)
}

pub fn window_hausdorff(h1: &ClosedSubG, h2: &ClosedSubG, level: u32) -> Result<Rat> {
    h1.g.same(&h2.g)?;
    Ok(fibers_hausdorff(&h1.fibers(level), &h2.fibers(level)))
}

pub fn chabauty_report(h1: &ClosedSubG, h2: &ClosedSubG, max_level: u32) -> Result<DistanceReport> {
    h1.g.same(&h2.g)?;
    let mut levels = Vec::new();
    let mut total = Rat::zero();
    for level in 0..=max_level {
        let d = window_hausdorff(h1, h2, level)?;
        total += &d * pow2_inv(level + 1);
        levels.push(WindowMetricReport { level, distance: d });
    }
    Ok(DistanceReport { distance: total, levels, truncation: pow2_inv(max_level + 1) })
}

/// `sum_{l=0}^{L} 2^{-(l+1)} * window_hausdorff(h1, h2, l)`.
pub fn chabauty_dist(h1: &ClosedSubG, h2: &ClosedSubG, max_level: u32) -> Result<Rat> {
    chabauty_report(h1, h2, max_level).map(|r| r.distance)
}

/// Same as [`chabauty_dist`] with one side given by precomputed fibers.
pub fn chabauty_dist_fibers(f1: &[Fibers], f2: &[Fibers]) -> Rat {
    f1.iter()
        .zip(f2)
        .enumerate()
        .fold(Rat::zero(), |acc, (l, (a, b))| acc + fibers_hausdorff(a, b) * pow2_inv(l as u32 + 1))
}

fn fg_ambient(h: &FgSub) -> FgAmbient {
    match h {
        FgSub::ZxZn(s) => FgAmbient::ZxZn(s.n),
        FgSub::Z2(_) => FgAmbient::Z2,
    }
}

/// `sum_{R=1}^{R_max} 2^{-R} [traces on the ball of radius R differ]`.
pub fn fg_chabauty_dist(h1: &FgSub, h2: &FgSub, r_max: u32) -> Result<Rat> {
    if fg_ambient(h1) != fg_ambient(h2) {
        return Err(Error::MismatchedAmbient(format!("{:?} vs {:?}", fg_ambient(h1), fg_ambient(h2))));
    }
    Ok(match crate::fgab::first_difference_radius(h1, h2, r_max as u64) {
        None => Rat::zero(),
        // sum_{R=r0}^{r_max} 2^{-R} = 2^{1-r0} - 2^{-r_max}
        Some(r0) => pow2_inv(r0 as u32 - 1) - pow2_inv(r_max),
    })
}

/// A closed subgroup of `C_k x T`: finite, or `C_d x T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KtSub {
    Fin(FinSubKT),
    FullKT(u64),
}

fn kt_as_g(k: u64, h: &KtSub) -> ClosedSubG {
    let g = Gpk { p: 2, k };
    match h {
        KtSub::Fin(f) => {
            let gens: Vec<Vec<Rat>> =
                f.lattice().rows().iter().map(|r| vec![Rat::zero(), r[0].clone(), r[1].clone()]).collect();
            ClosedSubG::new(g, SubKind::Finite(FinSubG::new(&g, FracLattice::from_generators(&gens, 3)).unwrap()))
        }
        KtSub::FullKT(d) => ClosedSubG::one_dim(&g, SubPK::FullD(*d)),
    }
}

/// Exact Hausdorff distance in the compact group `C_k x T`.
pub fn kt_hausdorff(k: u64, a: &KtSub, b: &KtSub) -> Rat {
    fibers_hausdorff(&kt_as_g(k, a).fibers(0), &kt_as_g(k, b).fibers(0))
}

/// `1/(2j)`, the distance from `C_j` to `T`.
pub fn roots_of_unity_gap(j: u64) -> Rat {
    rat(1, 2 * j as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::PadicRat;
    use crate::fgab::{canon_z2, canon_zxzn, SubZ2};

    fn g(p: u64, k: u64) -> Gpk {
        Gpk::new(p, k).unwrap()
    }

    #[test]
    fn window_examples() {
        let gp = g(2, 1);
        let full = ClosedSubG::full_d(&gp, 1).unwrap();
        let triv = ClosedSubG::trivial(&gp);
        assert_eq!(window_hausdorff(&full, &full, 3).unwrap(), Rat::zero());
        assert_eq!(window_hausdorff(&full, &triv, 0).unwrap(), rat(1, 2));
        assert_eq!(window_hausdorff(&full, &triv, 1).unwrap(), rat(1, 1));
        assert_eq!(chabauty_dist(&full, &triv, 2).unwrap(), rat(5, 8));
        assert_eq!(chabauty_dist(&triv, &full, 2).unwrap(), rat(5, 8));
        assert!(matches!(window_hausdorff(&full, &ClosedSubG::trivial(&g(3, 1)), 0), Err(Error::MismatchedAmbient(_))));
    }

    #[test]
    fn fg_examples() {
        let triv = FgSub::ZxZn(canon_zxzn(1, &[]).unwrap());
        let five = FgSub::ZxZn(canon_zxzn(1, &[(5, 0)]).unwrap());
        assert_eq!(fg_chabauty_dist(&triv, &triv, 10).unwrap(), Rat::zero());
        assert_eq!(fg_chabauty_dist(&triv, &five, 10).unwrap(), rat(1, 16) - rat(1, 1024));
        let lim = FgSub::ZxZn(canon_zxzn(4, &[(0, 2)]).unwrap());
        for j in [3i64, 8, 20] {
            let h = FgSub::ZxZn(canon_zxzn(4, &[(0, 2), (j, 1)]).unwrap());
            let d = fg_chabauty_dist(&lim, &h, 12).unwrap();
            let expected = if j > 12 { Rat::zero() } else { pow2_inv(j as u32 - 1) - pow2_inv(12) };
            assert_eq!(d, expected);
        }
        let z2 = FgSub::Z2(SubZ2::Trivial);
        assert!(fg_chabauty_dist(&triv, &z2, 3).is_err());
        assert!(fg_chabauty_dist(&z2, &FgSub::Z2(canon_z2(&[(7, 0), (0, 7)])), 10).unwrap() > Rat::zero());
    }

    #[test]
    fn kt_examples() {
        let f = KtSub::Fin(FinSubKT::from_generators(2, &[(rat(1, 2), rat(0, 1))]).unwrap());
        let t = KtSub::Fin(FinSubKT::trivial());
        assert_eq!(kt_hausdorff(2, &f, &f), Rat::zero());
        assert_eq!(kt_hausdorff(2, &f, &t), Rat::one());
        for j in 1..=64u64 {
            let cj = KtSub::Fin(FinSubKT::circle_part(j));
            assert_eq!(kt_hausdorff(1, &cj, &KtSub::FullKT(1)), roots_of_unity_gap(j));
        }
    }

    /// Brute-force Hausdorff distance between explicit window traces.
    fn oracle(h1: &ClosedSubG, h2: &ClosedSubG, level: u32) -> Rat {
        let (w1, w2) = (h1.window(level), h2.window(level));
        let circle_d = |a: &Rat, b: &Rat| {
            let d = crate::exactnum::frac(&(a - b));
            let e = Rat::one() - &d;
            d.min(e)
        };
        // distance from a point to a trace
        let to_trace = |w: &crate::prufer::WindowTrace, pw: &Rat, pc: &Rat, pz: &Rat| -> Rat {
            if w.circle_fibers.iter().any(|(a, b)| a.value() == pw && b.value() == pc) {
                return Rat::zero();
            }
            w.isolated_points
                .iter()
                .filter(|e| e.w.value() == pw && e.c.value() == pc)
                .map(|e| circle_d(e.z.value(), pz))
                .min()
                .unwrap_or_else(Rat::one)
        };
        // sup over a circle fiber of the distance to the other trace:
        // half of the largest gap between the other trace's points there
        let circle_to_trace = |w: &crate::prufer::WindowTrace, pw: &Rat, pc: &Rat| -> Rat {
            if w.circle_fibers.iter().any(|(a, b)| a.value() == pw && b.value() == pc) {
                return Rat::zero();
            }
            let mut zs: Vec<Rat> = w
                .isolated_points
                .iter()
                .filter(|e| e.w.value() == pw && e.c.value() == pc)
                .map(|e| e.z.value().clone())
                .collect();
            if zs.is_empty() {
                return Rat::one();
            }
            zs.sort();
            let mut gap = &zs[0] + Rat::one() - zs.last().unwrap();
            for p in zs.windows(2) {
                gap = gap.max(&p[1] - &p[0]);
            }
            gap / Rat::from_integer(Int::from(2))
        };
        let directed = |a: &crate::prufer::WindowTrace, b: &crate::prufer::WindowTrace| -> Rat {
            let mut best = Rat::zero();
            for e in &a.isolated_points {
                best = best.max(to_trace(b, e.w.value(), e.c.value(), e.z.value()));
            }
            for (fw, fc) in &a.circle_fibers {
                best = best.max(circle_to_trace(b, fw.value(), fc.value()));
            }
            best
        };
        directed(&w1, &w2).max(directed(&w2, &w1))
    }

    fn samples(gp: &Gpk) -> Vec<ClosedSubG> {
        let mut out = vec![ClosedSubG::trivial(gp), ClosedSubG::full_d(gp, 1).unwrap()];
        let p = gp.p as i64;
        for x in [0i64, 1, 3] {
            out.push(ClosedSubG::disc(gp, FinSubKT::trivial(), PadicRat::from_int(x, gp.p)).unwrap());
            out.push(ClosedSubG::disc(gp, FinSubKT::circle_part(3), PadicRat::from_int(x, gp.p)).unwrap());
            out.push(ClosedSubG::disc(gp, FinSubKT::circle_part(4), PadicRat::from_int(x, gp.p)).unwrap());
        }
        for n in 1..=5u64 {
            out.push(ClosedSubG::full_d(gp, 1).unwrap().approximate_by_finite(n).into_closed(gp));
        }
        out.push(ClosedSubG::finite(gp, &[vec![rat(1, p), rat(0, 1), rat(1, 5)]]).unwrap());
        out
    }

    trait IntoClosed {
        fn into_closed(self, g: &Gpk) -> ClosedSubG;
    }

    impl IntoClosed for FinSubG {
        fn into_closed(self, g: &Gpk) -> ClosedSubG {
            ClosedSubG::new(*g, SubKind::Finite(self))
        }
    }

    #[test]
    fn closed_form_matches_point_oracle() {
        for gp in [g(2, 1), g(3, 2)] {
            let s = samples(&gp);
            for a in &s {
                for b in &s {
                    for level in 0..=2 {
                        assert_eq!(window_hausdorff(a, b, level).unwrap(), oracle(a, b, level), "{a:?} {b:?} {level}");
                    }
                }
            }
        }
    }

    #[test]
    fn triangle_inequality_on_samples() {
        let gp = g(2, 1);
        let s = samples(&gp);
        let d: Vec<Vec<Rat>> = s.iter().map(|a| s.iter().map(|b| chabauty_dist(a, b, 3).unwrap()).collect()).collect();
        for i in 0..s.len() {
            for j in 0..s.len() {
                assert_eq!(d[i][j], d[j][i]);
                for k in 0..s.len() {
                    assert!(d[i][k] <= &d[i][j] + &d[j][k]);
                }
            }
        }
    }
}
