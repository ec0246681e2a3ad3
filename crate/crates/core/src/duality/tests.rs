use super::*;
use crate::exactnum::{int, rat};
use crate::prufer::FinSubKT;
use proptest::prelude::*;

fn g(p: u64, k: u64) -> Gpk {
    Gpk::new(p, k).unwrap()
}

fn el(p: u64, x: i64, a: i64, n: i64) -> QpSideElem {
    QpSideElem { x: PadicRat::from_int(x, p), a: int(a), n: int(n) }
}

fn ge(g: &Gpk, w: Rat, c: Rat, z: Rat) -> GElem {
    GElem::new(g, w, c, z).unwrap()
}

#[test]
fn teichmuller_examples() {
    assert_eq!(teichmuller(&int(1), 7, 5).unwrap(), int(1));
    assert_eq!(teichmuller(&int(2), 3, 2).unwrap(), int(8));
    assert_eq!(teichmuller(&int(2), 5, 2).unwrap(), int(7));
    assert_eq!(teichmuller(&int(3), 2, 4), Err(Error::EvenPrime));
    // omega^{p-1} = 1 and omega = u0 mod p
    for u0 in 1..7 {
        let w = teichmuller(&int(u0), 7, 6).unwrap();
        assert_eq!(w.modpow(&int(6), &int(7i64.pow(6))), int(1));
        assert_eq!(&w % int(7), int(u0));
    }
}

#[test]
fn decompose_examples() {
    let d = |s: &str| decompose_unit(&QpUnit::parse(s).unwrap()).unwrap();
    assert_eq!(d("3^0 * 4 mod 3^3"), UnitDecomposition { x: int(1), t: 0, v: 0 });
    assert_eq!(d("5^0 * 7 mod 5^2"), UnitDecomposition { x: int(0), t: 1, v: 0 });
    assert_eq!(d("2^0 * 5 mod 2^5"), UnitDecomposition { x: int(1), t: 0, v: 0 });
    assert_eq!(d("7^3 * 8 mod 7^4").v, 3);
    assert!(matches!(QpUnit::parse("2^0 * 3 mod 2^2"), Err(Error::InsufficientPrecision(_))));
    assert!(QpUnit::parse("3^0 * 6 mod 3^2").is_err());
    assert_eq!(primitive_root(7), 3);
    assert_eq!(primitive_root(5), 2);
}

/// The x-digit by exhaustive search over `Z/p^{m-1}` at small precision.
#[test]
fn decompose_matches_exhaustive_log() {
    for (p, m) in [(3u64, 4u32), (5, 3), (2, 6)] {
        let modulus = int_pow(p, m);
        let mut u0 = int(1);
        while u0 < modulus {
            if !(&u0 % int(p as i64)).is_zero() {
                let u = QpUnit::new(p, 0, u0.clone(), m).unwrap();
                let d = decompose_unit(&u).unwrap();
                let range = if p == 2 { int_pow(2, m - 2) } else { int_pow(p, m - 1) };
                let tmod = if p == 2 { 2 } else { p - 1 };
                let mut hits = 0;
                let mut x = int(0);
                while x < range {
                    for t in 0..tmod {
                        let cand = UnitDecomposition { x: x.clone(), t, v: 0 };
                        if recompose_unit(p, m, &cand).unwrap() == u0 {
                            hits += 1;
                            assert_eq!(cand, d);
                        }
                    }
                    x += 1;
                }
                assert_eq!(hits, 1, "p {p} u0 {u0}");
            }
            u0 += 1;
        }
    }
}

proptest! {
    #[test]
    fn recomposition(p in prop::sample::select(vec![2u64, 3, 5, 7]), m in 3u32..=40, seed in any::<u64>()) {
        let modulus = int_pow(p, m);
        let mut u0 = Int::from(seed) * Int::from(seed | 1) % &modulus;
        if (&u0 % Int::from(p)).is_zero() { u0 += 1; }
        let u = QpUnit::new(p, 0, u0.clone(), m).unwrap();
        let d = decompose_unit(&u).unwrap();
        prop_assert_eq!(recompose_unit(p, m, &d).unwrap(), u0);
    }

    #[test]
    fn pairing_bilinear(x1 in -50i64..50, a1 in -9i64..9, n1 in -9i64..9, x2 in -50i64..50, a2 in -9i64..9, n2 in -9i64..9,
                        wn in 0i64..27, cn in 0i64..6, zn in 0i64..35) {
        let gg = g(3, 6);
        let h = ge(&gg, rat(wn, 27), rat(cn, 6), rat(zn, 35));
        let e1 = el(3, x1, a1, n1);
        let e2 = el(3, x2, a2, n2);
        let lhs = pairing(&gg, &e1.add(&e2), &h).unwrap();
        let rhs = pairing(&gg, &e1, &h).unwrap().add(&pairing(&gg, &e2, &h).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn pairing_examples() {
    let gg = g(3, 1);
    let h = ge(&gg, rat(1, 9), Rat::zero(), rat(1, 4));
    assert_eq!(pairing(&gg, &el(3, 0, 0, 0), &h).unwrap(), CircleVal::zero());
    assert_eq!(pairing(&gg, &el(3, 2, 0, 0), &ge(&gg, rat(1, 9), Rat::zero(), Rat::zero())).unwrap(), CircleVal::from_ratio(2, 9));
    assert_eq!(pairing(&gg, &el(3, 0, 0, 3), &ge(&gg, Rat::zero(), Rat::zero(), rat(1, 4))).unwrap(), CircleVal::from_ratio(3, 4));
    assert!(matches!(pairing(&gg, &el(5, 1, 0, 0), &h), Err(Error::MismatchedAmbient(_))));
}

#[test]
fn orthogonal_examples() {
    let gg = g(5, 2);
    let h = ClosedSubG::finite(&gg, &[vec![rat(1, 5), Rat::zero(), Rat::zero()]]).unwrap();
    let k = orthogonal(&h).unwrap();
    let QpSideSub::OpenFinIndex { m, lattice } = &k else { panic!() };
    assert_eq!(*m, 1);
    assert_eq!(lattice.rows(), IntLattice::from_generators(&[vec![int(5), int(0), int(0)], vec![int(0), int(1), int(0)], vec![int(0), int(0), int(1)]], 3).unwrap().rows());
    assert_eq!(index_open(&k).unwrap(), int(5));
    assert!(verify_orthogonal(&h, &k, 1, 2).unwrap().holds);

    // enlarging K breaks maximality
    let big = QpSideSub::OpenFinIndex { m: 0, lattice: IntLattice::full(3) };
    let r = verify_orthogonal(&h, &big, 1, 2).unwrap();
    assert!(!r.holds && !r.trivial);
    assert_eq!(index_open(&big).unwrap(), int(1));

    let full = ClosedSubG::full_d(&gg, 2).unwrap();
    let k = orthogonal(&full).unwrap();
    assert!(k.contains(2, &el(5, 0, 2, 0)));
    assert!(!k.contains(2, &el(5, 0, 1, 0)));
    assert!(!k.contains(2, &el(5, 5, 0, 0)));
    assert!(verify_orthogonal(&full, &k, 2, 3).unwrap().holds);

    let disc = ClosedSubG::disc(&gg, FinSubKT::trivial(), PadicRat::zero(5)).unwrap();
    let k = orthogonal(&disc).unwrap();
    assert_eq!(k.kind_name(), "GraphDisc");
    assert!(k.contains(2, &el(5, 0, 1, 7)));
    assert!(!k.contains(2, &el(5, 1, 1, 7)));
    assert!(verify_orthogonal(&disc, &k, 2, 4).unwrap().holds);
}

#[test]
fn orthogonal_disc_and_one_dim_verify() {
    let gg = g(2, 4);
    let f = FinSubKT::from_generators(4, &[(rat(1, 2), rat(1, 6)), (Rat::zero(), rat(1, 4))]).unwrap();
    for x in [0i64, 1, 3, -5] {
        let h = ClosedSubG::disc(&gg, f.clone(), PadicRat::new(rat(x, 3), 2).unwrap()).unwrap();
        let k = orthogonal(&h).unwrap();
        for (m, mz) in [(0, 12), (2, 12), (3, 24)] {
            let r = verify_orthogonal(&h, &k, m, mz).unwrap();
            assert!(r.holds, "x {x} m {m}: {r:?}");
            assert_eq!(r.annihilator_size * r.h_size, int_pow(2, m).to_u64().unwrap() * 4 * mz);
        }
        // a wrong slope is caught
        let QpSideSub::GraphDisc { lattice, c0, .. } = k else { panic!() };
        let wrong = QpSideSub::GraphDisc { lattice, c0, x: PadicRat::from_int(x + 1, 2) };
        assert!(!verify_orthogonal(&h, &wrong, 3, 24).unwrap().holds);
    }
    let d = FracLattice::from_generators(&[vec![rat(1, 4), rat(1, 2)], vec![Rat::zero(), rat(1, 4)]], 2);
    let h = ClosedSubG::one_dim(&gg, SubPK::fin(&gg, d).unwrap());
    let k = orthogonal(&h).unwrap();
    assert!(verify_orthogonal(&h, &k, 2, 3).unwrap().holds);
    assert!(verify_orthogonal(&h, &k, 4, 1).unwrap().holds);
    assert!(matches!(verify_orthogonal(&h, &k, 1, 3), Err(Error::ResolutionTooCoarse(_))));
}

/// `K` pairs to zero with every point of `H`, checked with the rational
/// pairing on explicit elements.
#[test]
fn finite_orthogonal_annihilates_elements() {
    let gg = g(3, 2);
    let gens = [vec![rat(1, 9), rat(1, 2), rat(1, 4)], vec![rat(1, 3), Rat::zero(), rat(1, 6)]];
    let h = ClosedSubG::finite(&gg, &gens).unwrap();
    let SubKind::Finite(l) = &h.kind else { panic!() };
    let k = orthogonal(&h).unwrap();
    let QpSideSub::OpenFinIndex { lattice, .. } = &k else { panic!() };
    let elems = l.lattice().elements();
    assert_eq!(index_open(&k).unwrap(), int(elems.len() as i64));
    for row in lattice.rows() {
        let e = QpSideElem { x: PadicRat::new(Rat::from_integer(row[0].clone()), 3).unwrap(), a: row[1].clone(), n: row[2].clone() };
        for v in &elems {
            let pt = ge(&gg, v[0].clone(), v[1].clone(), v[2].clone());
            assert_eq!(pairing(&gg, &e, &pt).unwrap(), CircleVal::zero());
        }
    }
}

#[test]
fn inclusion_reversal() {
    let gg = g(2, 2);
    let small = ClosedSubG::finite(&gg, &[vec![rat(1, 2), Rat::zero(), Rat::zero()]]).unwrap();
    let large = ClosedSubG::finite(&gg, &[vec![rat(1, 4), Rat::zero(), Rat::zero()], vec![Rat::zero(), rat(1, 2), rat(1, 3)]]).unwrap();
    let ks = orthogonal(&small).unwrap();
    let kl = orthogonal(&large).unwrap();
    assert_eq!(kl.is_open_subgroup_of(&ks), Some(true));
    assert_eq!(ks.is_open_subgroup_of(&kl), Some(false));
}
