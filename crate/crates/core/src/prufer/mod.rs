//! Closed subgroups of `G = C_{p^∞} x C_k x T`.
//!
//! Coordinates are `(w, c, z)`, all rationals mod 1: `w` has p-power
//! denominator, `c` has denominator dividing `k`. Every closed subgroup is
//! finite, an infinite discrete `H_{F,f}` or a one-dimensional `D x T`.

mod quotient;

pub use quotient::QuotientMap;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{frac, int_pow, is_prime, p_power_exponent, rat, CircleVal, FracLattice, Int, PadicRat, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gpk {
    pub p: u64,
    pub k: u64,
}

impl Gpk {
    pub fn new(p: u64, k: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::constraint(format!("p = {p} is not prime")));
        }
        if k == 0 {
            return Err(Error::constraint("k must be >= 1"));
        }
        Ok(Gpk { p, k })
    }

    pub(crate) fn same(&self, other: &Gpk) -> Result<()> {
        if self != other {
            return Err(Error::MismatchedAmbient(format!(
                "(p, k) = ({}, {}) vs ({}, {})",
                self.p, self.k, other.p, other.k
            )));
        }
        Ok(())
    }

    fn check_w(&self, w: &Rat) -> Result<u32> {
        p_power_exponent(w.denom(), self.p)
            .ok_or_else(|| Error::constraint(format!("w-denominator {} is not a power of {}", w.denom(), self.p)))
    }

    fn check_c(&self, c: &Rat) -> Result<()> {
        if !(Int::from(self.k) % c.denom()).is_zero() {
            return Err(Error::constraint(format!("c-denominator {} does not divide k = {}", c.denom(), self.k)));
        }
        Ok(())
    }
}

/// An element `(w, c, z)` of `G`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GElem {
    pub w: CircleVal,
    pub c: CircleVal,
    pub z: CircleVal,
}

impl GElem {
    pub fn new(g: &Gpk, w: Rat, c: Rat, z: Rat) -> Result<Self> {
        g.check_w(&w)?;
        g.check_c(&c)?;
        Ok(GElem { w: CircleVal::new(w), c: CircleVal::new(c), z: CircleVal::new(z) })
    }

    pub fn identity() -> Self {
        GElem { w: CircleVal::zero(), c: CircleVal::zero(), z: CircleVal::zero() }
    }

    /// Least `l` with `w` in `C_{p^l}`.
    pub fn level(&self, p: u64) -> u32 {
        p_power_exponent(self.w.denom(), p).expect("validated element")
    }

    pub fn to_vec(&self) -> Vec<Rat> {
        vec![self.w.value().clone(), self.c.value().clone(), self.z.value().clone()]
    }

    pub fn add(&self, o: &GElem) -> GElem {
        GElem { w: self.w.add(&o.w), c: self.c.add(&o.c), z: self.z.add(&o.z) }
    }
}

impl fmt::Display for GElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.w, self.c, self.z)
    }
}

/// A finite subgroup `F` of `C_k x T`, coordinates `(c, z)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSubKT(FracLattice);

impl FinSubKT {
    pub fn new(k: u64, lattice: FracLattice) -> Result<Self> {
        if lattice.rank() != 2 {
            return Err(Error::constraint("a subgroup of C_k x T needs a rank-2 lattice"));
        }
        let e = lattice.coordinate_exponent(0);
        if !(Int::from(k) % &e).is_zero() {
            return Err(Error::constraint(format!("c-part of order {e} does not fit in C_{k}")));
        }
        Ok(FinSubKT(lattice))
    }

    pub fn from_generators(k: u64, gens: &[(Rat, Rat)]) -> Result<Self> {
        let v: Vec<Vec<Rat>> = gens.iter().map(|(c, z)| vec![c.clone(), z.clone()]).collect();
        FinSubKT::new(k, FracLattice::from_generators(&v, 2))
    }

    pub fn trivial() -> Self {
        FinSubKT(FracLattice::identity(2))
    }

    /// `C_t` inside `{0} x T`.
    pub fn circle_part(t: u64) -> Self {
        FinSubKT(FracLattice::from_generators(&[vec![Rat::zero(), rat(1, t as i64)]], 2))
    }

    pub fn lattice(&self) -> &FracLattice {
        &self.0
    }

    pub fn order(&self) -> Int {
        self.0.index()
    }

    pub fn contains(&self, c: &Rat, z: &Rat) -> bool {
        self.0.contains(&[c.clone(), z.clone()])
    }
}

/// A finite subgroup of `G`, coordinates `(w, c, z)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSubG(FracLattice);

impl FinSubG {
    pub fn new(g: &Gpk, lattice: FracLattice) -> Result<Self> {
        if lattice.rank() != 3 {
            return Err(Error::constraint("a finite subgroup of G needs a rank-3 lattice"));
        }
        let ew = lattice.coordinate_exponent(0);
        if p_power_exponent(&ew, g.p).is_none() {
            return Err(Error::constraint(format!("w-part of order {ew} is not a power of {}", g.p)));
        }
        let ec = lattice.coordinate_exponent(1);
        if !(Int::from(g.k) % &ec).is_zero() {
            return Err(Error::constraint(format!("c-part of order {ec} does not fit in C_{}", g.k)));
        }
        Ok(FinSubG(lattice))
    }

    pub fn from_generators(g: &Gpk, gens: &[Vec<Rat>]) -> Result<Self> {
        FinSubG::new(g, FracLattice::from_generators(gens, 3))
    }

    pub fn trivial() -> Self {
        FinSubG(FracLattice::identity(3))
    }

    pub fn lattice(&self) -> &FracLattice {
        &self.0
    }

    pub fn order(&self) -> Int {
        self.0.index()
    }

    /// Least `l` with the subgroup inside `C_{p^l} x C_k x T`.
    pub fn w_level(&self, p: u64) -> u32 {
        p_power_exponent(&self.0.coordinate_exponent(0), p).unwrap()
    }
}

/// A subgroup `D` of `C_{p^∞} x C_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubPK {
    /// Finite `D`, coordinates `(w, c)`.
    FinD(FracLattice),
    /// `C_{p^∞} x C_e`, `e | k`.
    FullD(u64),
}

impl SubPK {
    pub fn fin(g: &Gpk, lattice: FracLattice) -> Result<Self> {
        if lattice.rank() != 2 {
            return Err(Error::constraint("a finite subgroup of C_{p^∞} x C_k needs a rank-2 lattice"));
        }
        let ew = lattice.coordinate_exponent(0);
        if p_power_exponent(&ew, g.p).is_none() {
            return Err(Error::constraint(format!("w-part of order {ew} is not a power of {}", g.p)));
        }
        let ec = lattice.coordinate_exponent(1);
        if !(Int::from(g.k) % &ec).is_zero() {
            return Err(Error::constraint(format!("c-part of order {ec} does not fit in C_{}", g.k)));
        }
        Ok(SubPK::FinD(lattice))
    }

    pub fn full(g: &Gpk, e: u64) -> Result<Self> {
        if e == 0 || g.k % e != 0 {
            return Err(Error::constraint(format!("e = {e} must divide k = {}", g.k)));
        }
        Ok(SubPK::FullD(e))
    }

    pub fn contains(&self, w: &Rat, c: &Rat) -> bool {
        match self {
            SubPK::FinD(l) => l.contains(&[w.clone(), c.clone()]),
            SubPK::FullD(e) => (c * Rat::from_integer(Int::from(*e))).is_integer(),
        }
    }

    /// `D ∩ (C_{p^l} x C_k)` as a list of `(w, c)` reduced into `[0, 1)`.
    pub fn truncated_elements(&self, g: &Gpk, level: u32) -> Vec<(Rat, Rat)> {
        self.truncation(g, level).elements().into_iter().map(|v| (v[0].clone(), v[1].clone())).collect()
    }

    /// `D ∩ (C_{p^l} x C_k)` as a lattice.
    pub fn truncation(&self, g: &Gpk, level: u32) -> FracLattice {
        let pl = int_pow(g.p, level);
        match self {
            SubPK::FinD(l) => l.intersect(&FracLattice::diagonal(&[pl, Int::from(g.k)])),
            SubPK::FullD(e) => FracLattice::diagonal(&[pl, Int::from(*e)]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SubKind {
    Finite(FinSubG),
    /// `H_{F,f}` with `f(w) = c0 * (x * w)` in the identity component of
    /// `(C_k x T)/F`. `graph` holds optional witness points claimed to lie
    /// in the subgroup; canonicalization checks and drops them.
    Disc { f: FinSubKT, x: PadicRat, graph: Vec<GElem> },
    OneDim(SubPK),
}

/// A closed subgroup of `G_{p,k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedSubG {
    pub g: Gpk,
    pub kind: SubKind,
}

/// `(C_k x T)/F ≅ C_d x T`; `T^0` is parametrized by `θ -> (0, c0 θ)`,
/// and `t = 1/c0 = |F ∩ ({0} x T)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    pub d: u64,
    pub c0: Rat,
    pub t: u64,
}

pub fn quotient_data(k: u64, f: &FinSubKT) -> QuotientData {
    let c0 = f.lattice().axis_generator(1);
    let t = c0.recip().to_integer().to_u64().expect("small torsion");
    let pc = f.lattice().coordinate_exponent(0).to_u64().unwrap();
    QuotientData { d: k / pc, c0, t }
}

/// How a subgroup meets `{(w, c)} x T` for each `(w, c)` in a window:
/// either the whole circle, or a coset of the common finite group `C_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fibers {
    pub level: u32,
    /// `None` for circles, `Some(b)` for cosets of `C_b`.
    pub modulus: Option<Int>,
    /// `(w, c)` -> offset of the coset in `[0, 1/b)` (zero for circles).
    pub map: BTreeMap<(Rat, Rat), Rat>,
}

impl Fibers {
    pub fn point_count(&self) -> Option<Int> {
        self.modulus.as_ref().map(|b| b * Int::from(self.map.len()))
    }
}

/// An explicit list form of `H ∩ (C_{p^l} x C_k x T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowTrace {
    pub level: u32,
    pub isolated_points: Vec<GElem>,
    pub circle_fibers: Vec<(CircleVal, CircleVal)>,
}

/// Fibers of the finite subgroup `L / Z^3` over the window of level `l`.
fn fibers_of_lattice(l: &FracLattice, g: &Gpk, level: u32) -> Fibers {
    let nz = l.coordinate_exponent(2);
    let box_l = FracLattice::diagonal(&[int_pow(g.p, level), Int::from(g.k), nz]);
    let w = l.intersect(&box_l).permuted(&[2, 0, 1]);
    let rows = w.rows();
    let beta = rows[0][0].clone();
    let n1 = rows[1][1].recip().to_integer();
    let n2 = rows[2][2].recip().to_integer();
    let mut map = BTreeMap::new();
    let mut u = Int::zero();
    while u < n1 {
        let ur = Rat::from_integer(u.clone());
        let mut v = Int::zero();
        while v < n2 {
            let vr = Rat::from_integer(v.clone());
            let z = &ur * &rows[1][0] + &vr * &rows[2][0];
            let wv = frac(&(&ur * &rows[1][1] + &vr * &rows[2][1]));
            let cv = frac(&(&vr * &rows[2][2]));
            let off = &z - (&z / &beta).floor() * &beta;
            map.insert((wv, cv), off);
            v += 1;
        }
        u += 1;
    }
    Fibers { level, modulus: Some(beta.recip().to_integer()), map }
}

impl ClosedSubG {
    pub fn new(g: Gpk, kind: SubKind) -> Self {
        ClosedSubG { g, kind }
    }

    pub fn finite(g: &Gpk, gens: &[Vec<Rat>]) -> Result<Self> {
        Ok(ClosedSubG { g: *g, kind: SubKind::Finite(FinSubG::from_generators(g, gens)?) })
    }

    pub fn trivial(g: &Gpk) -> Self {
        ClosedSubG { g: *g, kind: SubKind::Finite(FinSubG::trivial()) }
    }

    pub fn disc(g: &Gpk, f: FinSubKT, x: PadicRat) -> Result<Self> {
        if x.prime() != g.p {
            return Err(Error::constraint(format!("x is a {}-adic parameter, expected p = {}", x.prime(), g.p)));
        }
        Ok(ClosedSubG { g: *g, kind: SubKind::Disc { f, x, graph: vec![] } })
    }

    pub fn full_d(g: &Gpk, e: u64) -> Result<Self> {
        Ok(ClosedSubG { g: *g, kind: SubKind::OneDim(SubPK::full(g, e)?) })
    }

    pub fn one_dim(g: &Gpk, d: SubPK) -> Self {
        ClosedSubG { g: *g, kind: SubKind::OneDim(d) }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            SubKind::Finite(_) => "Finite",
            SubKind::Disc { .. } => "Disc",
            SubKind::OneDim(_) => "OneDim",
        }
    }

    /// Whether `g` lies in the subgroup.
    pub fn member(&self, g: &GElem) -> Result<bool> {
        self.g.check_w(g.w.value())?;
        self.g.check_c(g.c.value())?;
        Ok(match &self.kind {
            SubKind::Finite(l) => l.lattice().contains(&g.to_vec()),
            SubKind::OneDim(d) => d.contains(g.w.value(), g.c.value()),
            SubKind::Disc { f, x, .. } => {
                let qd = quotient_data(self.g.k, f);
                let ell = g.level(self.g.p);
                let xw = Rat::from_integer(x.reduce(ell)) * g.w.value();
                let z = g.z.value() - &qd.c0 * frac(&xw);
                f.contains(g.c.value(), &z)
            }
        })
    }

    /// Fiber structure of the trace on `C_{p^l} x C_k x T`.
    pub fn fibers(&self, level: u32) -> Fibers {
        match &self.kind {
            SubKind::Finite(l) => fibers_of_lattice(l.lattice(), &self.g, level),
            SubKind::Disc { .. } => fibers_of_lattice(&self.disc_window_lattice(level), &self.g, level),
            SubKind::OneDim(d) => Fibers {
                level,
                modulus: None,
                map: d.truncated_elements(&self.g, level).into_iter().map(|k| (k, Rat::zero())).collect(),
            },
        }
    }

    /// `F + <(1/p^n, 0, c0 * b_n / p^n)>`: the trace of `H_{F,f}` on
    /// `C_{p^n} x C_k x T`, itself a finite subgroup.
    fn disc_window_lattice(&self, n: u32) -> FracLattice {
        let SubKind::Disc { f, x, .. } = &self.kind else { unreachable!() };
        let qd = quotient_data(self.g.k, f);
        let pn = int_pow(self.g.p, n);
        let b = x.reduce(n);
        let mut gens: Vec<Vec<Rat>> =
            f.lattice().rows().iter().map(|r| vec![Rat::zero(), r[0].clone(), r[1].clone()]).collect();
        gens.push(vec![Rat::new(Int::one(), pn.clone()), Rat::zero(), &qd.c0 * Rat::new(b, pn)]);
        FracLattice::from_generators(&gens, 3)
    }

    /// Exact description of `H ∩ (C_{p^l} x C_k x T)`.
    pub fn window(&self, level: u32) -> WindowTrace {
        let fib = self.fibers(level);
        let mut isolated_points = Vec::new();
        let mut circle_fibers = Vec::new();
        match &fib.modulus {
            None => {
                for (w, c) in fib.map.keys() {
                    circle_fibers.push((CircleVal::new(w.clone()), CircleVal::new(c.clone())));
                }
            }
            Some(b) => {
                for ((w, c), off) in &fib.map {
                    let mut j = Int::zero();
                    while &j < b {
                        let z = off + Rat::new(j.clone(), b.clone());
                        isolated_points.push(GElem {
                            w: CircleVal::new(w.clone()),
                            c: CircleVal::new(c.clone()),
                            z: CircleVal::new(z),
                        });
                        j += 1;
                    }
                }
            }
        }
        isolated_points.sort();
        circle_fibers.sort();
        WindowTrace { level, isolated_points, circle_fibers }
    }

    /// The finite part `F = H ∩ ({0} x C_k x T)` of a discrete infinite
    /// subgroup, read off from the fiber over `w = 0`.
    pub fn extract_f(&self) -> Result<FinSubKT> {
        if !matches!(self.kind, SubKind::Disc { .. }) {
            return Err(Error::constraint("extract_F needs a Disc descriptor"));
        }
        let gens: Vec<(Rat, Rat)> = self
            .window(0)
            .isolated_points
            .iter()
            .map(|e| (e.c.value().clone(), e.z.value().clone()))
            .collect();
        FinSubKT::from_generators(self.g.k, &gens)
    }

    /// A finite subgroup approximating `H`; the sequence over `n`
    /// converges to `H`.
    pub fn approximate_by_finite(&self, n: u64) -> FinSubG {
        let n = n.max(1);
        match &self.kind {
            SubKind::Finite(l) => l.clone(),
            SubKind::Disc { .. } => FinSubG(self.disc_window_lattice(n as u32)),
            SubKind::OneDim(d) => {
                let t = d.truncation(&self.g, n as u32);
                let mut gens: Vec<Vec<Rat>> =
                    t.rows().iter().map(|r| vec![r[0].clone(), r[1].clone(), Rat::zero()]).collect();
                gens.push(vec![Rat::zero(), Rat::zero(), rat(1, n as i64)]);
                FinSubG(FracLattice::from_generators(&gens, 3))
            }
        }
    }

    /// Checks the descriptor against its own semantics and returns the
    /// canonical form (lattices in HNF, witness data dropped).
    pub fn canon(&self) -> Result<ClosedSubG> {
        match &self.kind {
            SubKind::Finite(l) => {
                FinSubG::new(&self.g, l.lattice().clone())?;
                Ok(self.clone())
            }
            SubKind::OneDim(d) => {
                match d {
                    SubPK::FinD(l) => {
                        SubPK::fin(&self.g, l.clone())?;
                    }
                    SubPK::FullD(e) => {
                        SubPK::full(&self.g, *e)?;
                    }
                }
                Ok(self.clone())
            }
            SubKind::Disc { f, x, graph } => {
                FinSubKT::new(self.g.k, f.lattice().clone())?;
                if x.prime() != self.g.p {
                    return Err(Error::InconsistentDescriptor(format!(
                        "x is {}-adic in a group with p = {}",
                        x.prime(),
                        self.g.p
                    )));
                }
                let bare = ClosedSubG { g: self.g, kind: SubKind::Disc { f: f.clone(), x: x.clone(), graph: vec![] } };
                for pt in graph {
                    if !bare.member(pt)? {
                        return Err(Error::InconsistentDescriptor(format!(
                            "graph point {pt} is not in H_(F,f) for x = {x}"
                        )));
                    }
                }
                Ok(bare)
            }
        }
    }

    /// Largest `w`-level carried by the descriptor's own data.
    pub fn data_level(&self) -> u32 {
        match &self.kind {
            SubKind::Finite(l) => l.w_level(self.g.p),
            SubKind::Disc { .. } => 0,
            SubKind::OneDim(SubPK::FinD(l)) => p_power_exponent(&l.coordinate_exponent(0), self.g.p).unwrap(),
            SubKind::OneDim(SubPK::FullD(_)) => 0,
        }
    }
}

/// All subgroups of `C_{p^l} x C_k`, as rank-2 lattices, by closing every
/// pair of elements (every such subgroup is 2-generated).
pub fn subgroups_pk_level(g: &Gpk, level: u32) -> Vec<FracLattice> {
    let all = FracLattice::diagonal(&[int_pow(g.p, level), Int::from(g.k)]).elements();
    let cyclic: std::collections::BTreeSet<FracLattice> =
        all.iter().map(|a| FracLattice::from_generators(std::slice::from_ref(a), 2)).collect();
    let mut seen = std::collections::BTreeSet::new();
    for a in &cyclic {
        for b in &cyclic {
            seen.insert(a.sum(b));
        }
    }
    seen.into_iter().collect()
}

/// `padic_reduce` lifted to a group element: `x * w` in `Q/Z`.
pub fn x_times_w(x: &PadicRat, w: &CircleVal, p: u64) -> CircleVal {
    let ell = p_power_exponent(w.denom(), p).expect("p-power denominator");
    CircleVal::new(Rat::from_integer(x.reduce(ell)) * w.value())
}

pub(crate) fn int_u64(x: &Int) -> u64 {
    x.to_u64().expect("value fits in u64")
}
