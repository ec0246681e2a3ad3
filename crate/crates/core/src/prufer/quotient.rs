use num_traits::{One, Zero};

use super::{quotient_data, ClosedSubG, FinSubG, FinSubKT, GElem, Gpk, SubKind, SubPK};
use crate::error::{Error, Result};
use crate::exactnum::{CircleVal, Int, Rat};

/// The quotient `q_F : C_k x T -> (C_k x T)/F = C_d x T`, realized as the
/// linear map `(c, z) -> (c * k/d, alpha * c + t * z)` whose kernel on the
/// torus is exactly `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    pub k: u64,
    pub d: u64,
    pub t: u64,
    pub alpha: u64,
    f: FinSubKT,
}

impl QuotientMap {
    pub fn new(k: u64, f: &FinSubKT) -> Result<Self> {
        let qd = quotient_data(k, f);
        let kd = Rat::from_integer(Int::from(k / qd.d));
        let t = Rat::from_integer(Int::from(qd.t));
        for alpha in 0..k.max(1) {
            let a = Rat::from_integer(Int::from(alpha));
            let ok = f.lattice().rows().iter().all(|r| (&r[0] * &kd).is_integer() && (&a * &r[0] + &t * &r[1]).is_integer());
            if ok {
                return Ok(QuotientMap { k, d: qd.d, t: qd.t, alpha, f: f.clone() });
            }
        }
        Err(Error::InconsistentDescriptor("no integral quotient map for F".into()))
    }

    pub fn kernel(&self) -> &FinSubKT {
        &self.f
    }

    pub fn target(&self, p: u64) -> Gpk {
        Gpk { p, k: self.d }
    }

    /// The matrix acting on row vectors `(c, z)`.
    fn matrix(&self) -> Vec<Vec<Rat>> {
        let r = |n: u64| Rat::from_integer(Int::from(n));
        vec![vec![Rat::from_integer(Int::from(self.k)) / r(self.d), r(self.alpha)], vec![Rat::zero(), r(self.t)]]
    }

    /// The same map on `G_{p,k} -> G_{p,d}`, identity on `w`.
    fn matrix3(&self) -> Vec<Vec<Rat>> {
        let m = self.matrix();
        vec![
            vec![Rat::one(), Rat::zero(), Rat::zero()],
            vec![Rat::zero(), m[0][0].clone(), m[0][1].clone()],
            vec![Rat::zero(), m[1][0].clone(), m[1][1].clone()],
        ]
    }

    pub fn image_kt(&self, c: &Rat, z: &Rat) -> (CircleVal, CircleVal) {
        let m = self.matrix();
        (CircleVal::new(c * &m[0][0]), CircleVal::new(c * &m[0][1] + z * &m[1][1]))
    }

    pub fn image(&self, g: &GElem) -> GElem {
        let (c, z) = self.image_kt(g.c.value(), g.z.value());
        GElem { w: g.w.clone(), c, z }
    }

    /// `q_F^{-1}(F'')` for a finite `F'' <= C_d x T`.
    pub fn preimage_kt(&self, f2: &FinSubKT) -> FinSubKT {
        FinSubKT(f2.lattice().preimage_under(&self.matrix()))
    }

    /// `(id x q_F)^{-1}(H'')` for a closed subgroup `H''` of `G_{p,d}`.
    pub fn preimage(&self, h: &ClosedSubG) -> Result<ClosedSubG> {
        if h.g.k != self.d {
            return Err(Error::MismatchedAmbient(format!("quotient has k = {}, subgroup has k = {}", self.d, h.g.k)));
        }
        let g = Gpk { p: h.g.p, k: self.k };
        let kind = match &h.kind {
            SubKind::Finite(l) => SubKind::Finite(FinSubG(l.lattice().preimage_under(&self.matrix3()))),
            SubKind::Disc { f, x, .. } => SubKind::Disc { f: self.preimage_kt(f), x: x.clone(), graph: vec![] },
            SubKind::OneDim(SubPK::FullD(e)) => SubKind::OneDim(SubPK::FullD(self.k * e / self.d)),
            SubKind::OneDim(SubPK::FinD(l)) => {
                let a = vec![
                    vec![Rat::one(), Rat::zero()],
                    vec![Rat::zero(), Rat::from_integer(Int::from(self.k)) / Rat::from_integer(Int::from(self.d))],
                ];
                SubKind::OneDim(SubPK::FinD(l.preimage_under(&a)))
            }
        };
        Ok(ClosedSubG { g, kind })
    }
}
