//! The JSON descriptor format. Every number that is not a small parameter
//! is an exact string: `"num/den"` for rationals, decimal for integers.

use serde_json::{json, Map, Value};

use crate::duality::{QpSideElem, QpSideSub, XCond};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, parse_rat, FracLattice, Int, IntLattice, PadicRat, Rat};
use crate::fgab::{canon_z2, canon_zxzn, Affine, FamilyFG, FgAmbient, FgSub, NBar, Periodic, SubZ2, SubZxZn, ZxZnKind};
use crate::limits::{DStream, FamilyG, FamilyShape};
use crate::prufer::{ClosedSubG, FinSubG, FinSubKT, GElem, Gpk, SubKind, SubPK};

pub const SCHEMA_VERSION: u64 = 1;

/// A JSON value together with its location, for error reporting.
#[derive(Clone)]
pub struct Node<'a> {
    pub v: &'a Value,
    ptr: String,
}

fn schema(ptr: &str, message: impl Into<String>) -> Error {
    Error::Schema { pointer: if ptr.is_empty() { "/".into() } else { ptr.into() }, message: message.into() }
}

impl<'a> Node<'a> {
    pub fn root(v: &'a Value) -> Self {
        Node { v, ptr: String::new() }
    }

    pub fn pointer(&self) -> &str {
        &self.ptr
    }

    pub fn err(&self, message: impl Into<String>) -> Error {
        schema(&self.ptr, message)
    }

    pub fn has(&self, key: &str) -> bool {
        self.v.get(key).is_some()
    }

    pub fn get(&self, key: &str) -> Result<Node<'a>> {
        let obj = self.v.as_object().ok_or_else(|| self.err("expected an object"))?;
        let v = obj.get(key).ok_or_else(|| self.err(format!("missing key {key:?}")))?;
        Ok(Node { v, ptr: (format!("{}/{}", self.ptr, key)) })
    }

    pub fn opt(&self, key: &str) -> Option<Node<'a>> {
        self.get(key).ok()
    }

    pub fn items(&self) -> Result<Vec<Node<'a>>> {
        let arr = self.v.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(arr.iter().enumerate().map(|(i, v)| Node { v, ptr: (format!("{}/{}", self.ptr, i)) }).collect())
    }

    pub fn str(&self) -> Result<&'a str> {
        self.v.as_str().ok_or_else(|| self.err("expected a string"))
    }

    pub fn u64(&self) -> Result<u64> {
        match self.v {
            Value::Number(n) => n.as_u64().ok_or_else(|| self.err("expected a non-negative integer")),
            Value::String(s) => s.trim().parse().map_err(|_| self.err("expected a non-negative integer")),
            _ => Err(self.err("expected a non-negative integer")),
        }
    }

    pub fn i64(&self) -> Result<i64> {
        match self.v {
            Value::Number(n) => n.as_i64().ok_or_else(|| self.err("expected an integer")),
            Value::String(s) => s.trim().parse().map_err(|_| self.err("expected an integer")),
            _ => Err(self.err("expected an integer")),
        }
    }

    pub fn int(&self) -> Result<Int> {
        match self.v {
            Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string().parse().unwrap()),
            Value::String(s) => s.trim().parse().map_err(|_| self.err("expected an integer")),
            _ => Err(self.err("expected an integer")),
        }
    }

    /// `"num/den"`, `"n"` or a JSON integer. Floats are rejected.
    pub fn rat(&self) -> Result<Rat> {
        match self.v {
            Value::String(s) => parse_rat(s),
            Value::Number(n) if n.is_i64() || n.is_u64() => Ok(Rat::from_integer(n.to_string().parse().unwrap())),
            Value::Number(n) => Err(Error::NonRationalInput(n.to_string())),
            _ => Err(self.err("expected a rational string \"num/den\"")),
        }
    }

    pub fn rat_vec(&self, len: usize) -> Result<Vec<Rat>> {
        let items = self.items()?;
        if items.len() != len {
            return Err(self.err(format!("expected {len} coordinates")));
        }
        items.iter().map(|n| n.rat()).collect()
    }

    pub fn int_vec(&self, len: usize) -> Result<Vec<Int>> {
        let items = self.items()?;
        if items.len() != len {
            return Err(self.err(format!("expected {len} entries")));
        }
        items.iter().map(|n| n.int()).collect()
    }

    fn pair_i64(&self) -> Result<(i64, i64)> {
        let items = self.items()?;
        if items.len() != 2 {
            return Err(self.err("expected a pair"));
        }
        Ok((items[0].i64()?, items[1].i64()?))
    }
}

/// The ambient group named by a document header.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    ZxZn(u64),
    Z2,
    Gpk(Gpk),
    QpSide(Gpk),
}

pub fn parse_ambient(doc: &Node) -> Result<Ambient> {
    if let Some(v) = doc.opt("schema_version") {
        if v.u64()? != SCHEMA_VERSION {
            return Err(v.err(format!("unsupported schema version, expected {SCHEMA_VERSION}")));
        }
    }
    let name = doc.get("ambient")?;
    match name.str()? {
        "ZxZn" => Ok(Ambient::ZxZn(doc.get("n")?.u64()?)),
        "Z2" => Ok(Ambient::Z2),
        "Gpk" | "QpSide" => {
            let g = Gpk::new(doc.get("p")?.u64()?, doc.get("k")?.u64()?)?;
            Ok(if name.str()? == "Gpk" { Ambient::Gpk(g) } else { Ambient::QpSide(g) })
        }
        other => Err(name.err(format!("unknown ambient {other:?}"))),
    }
}

pub fn ambient_header(a: &Ambient) -> Map<String, Value> {
    let mut m = Map::new();
    match a {
        Ambient::ZxZn(n) => {
            m.insert("ambient".into(), json!("ZxZn"));
            m.insert("n".into(), json!(n));
        }
        Ambient::Z2 => {
            m.insert("ambient".into(), json!("Z2"));
        }
        Ambient::Gpk(g) | Ambient::QpSide(g) => {
            m.insert("ambient".into(), json!(if matches!(a, Ambient::Gpk(_)) { "Gpk" } else { "QpSide" }));
            m.insert("p".into(), json!(g.p));
            m.insert("k".into(), json!(g.k));
        }
    }
    m
}

/// A subgroup body merged into a header.
pub fn document(a: &Ambient, body: Value) -> Value {
    let mut m = ambient_header(a);
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn rat_json(r: &Rat) -> Value {
    Value::String(fmt_rat(r))
}

fn int_json(i: &Int) -> Value {
    Value::String(i.to_string())
}

fn nbar_json(n: &NBar) -> Value {
    match n {
        NBar::Finite(j) => json!(j),
        NBar::Infinity => json!("inf"),
    }
}

pub fn parse_nbar(n: &Node) -> Result<NBar> {
    if n.v.as_str() == Some("inf") {
        return Ok(NBar::Infinity);
    }
    Ok(NBar::Finite(n.u64()?))
}

/// Rows of the normal form that are not already in `Z^r`.
fn lattice_gens(l: &FracLattice) -> Value {
    Value::Array(
        l.rows()
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_integer()))
            .map(|r| Value::Array(r.iter().map(rat_json).collect()))
            .collect(),
    )
}

fn int_lattice_json(l: &IntLattice) -> Value {
    Value::Array(l.rows().iter().map(|r| Value::Array(r.iter().map(int_json).collect())).collect())
}

fn parse_gens<'a>(n: Node<'a>, r: usize) -> Result<Vec<Vec<Rat>>> {
    n.items()?.iter().map(|row| row.rat_vec(r)).collect()
}

// ---- G_{p,k} subgroups -------------------------------------------------

pub fn elem_json(e: &GElem) -> Value {
    json!([fmt_rat(e.w.value()), fmt_rat(e.c.value()), fmt_rat(e.z.value())])
}

pub fn parse_gelem<'a>(g: &Gpk, n: Node<'a>) -> Result<GElem> {
    let v = n.rat_vec(3)?;
    GElem::new(g, v[0].clone(), v[1].clone(), v[2].clone())
}

fn d_json(d: &SubPK) -> Value {
    match d {
        SubPK::FullD(e) => json!({ "full": e }),
        SubPK::FinD(l) => json!({ "gens": lattice_gens(l) }),
    }
}

fn parse_d<'a>(g: &Gpk, n: Node<'a>) -> Result<SubPK> {
    if let Some(e) = n.opt("full") {
        return SubPK::full(g, e.u64()?);
    }
    let gens = parse_gens(n.get("gens")?, 2)?;
    SubPK::fin(g, FracLattice::from_generators(&gens, 2))
}

fn kt_gens(f: &FinSubKT) -> Value {
    lattice_gens(f.lattice())
}

fn parse_kt<'a>(k: u64, n: Node<'a>) -> Result<FinSubKT> {
    let gens: Vec<(Rat, Rat)> = parse_gens(n, 2)?.into_iter().map(|v| (v[0].clone(), v[1].clone())).collect();
    FinSubKT::from_generators(k, &gens)
}

pub fn gsub_json(h: &ClosedSubG) -> Value {
    match &h.kind {
        SubKind::Finite(l) => json!({ "kind": "Finite", "gens": lattice_gens(l.lattice()) }),
        SubKind::Disc { f, x, graph } => {
            let mut v = json!({ "kind": "Disc", "F": kt_gens(f), "x": rat_json(x.value()) });
            if !graph.is_empty() {
                v["graph"] = Value::Array(graph.iter().map(elem_json).collect());
            }
            v
        }
        SubKind::OneDim(d) => json!({ "kind": "OneDim", "D": d_json(d) }),
    }
}

pub fn parse_gsub<'a>(g: &Gpk, n: Node<'a>) -> Result<ClosedSubG> {
    let kind = n.get("kind")?;
    match kind.str()? {
        "Finite" => {
            let gens = parse_gens(n.get("gens")?, 3)?;
            Ok(ClosedSubG::new(*g, SubKind::Finite(FinSubG::from_generators(g, &gens)?)))
        }
        "Disc" => {
            let f = parse_kt(g.k, n.get("F")?)?;
            let x = PadicRat::new(n.get("x")?.rat()?, g.p)?;
            let graph = match n.opt("graph") {
                Some(gr) => gr.items()?.into_iter().map(|e| parse_gelem(g, e)).collect::<Result<_>>()?,
                None => vec![],
            };
            Ok(ClosedSubG::new(*g, SubKind::Disc { f, x, graph }))
        }
        "OneDim" => Ok(ClosedSubG::one_dim(g, parse_d(g, n.get("D")?)?)),
        other => Err(kind.err(format!("unknown subgroup kind {other:?}"))),
    }
}

// ---- Z x Z/n and Z^2 ---------------------------------------------------

pub fn fgsub_json(h: &FgSub) -> Value {
    match h {
        FgSub::ZxZn(s) => match s.kind {
            ZxZnKind::FiniteOnly => json!({ "kind": "FiniteOnly", "m": s.m }),
            ZxZnKind::Mixed { a, b } => json!({ "kind": "Mixed", "m": s.m, "a": a, "b": b }),
        },
        FgSub::Z2(s) => match s {
            SubZ2::Trivial => json!({ "kind": "Trivial" }),
            SubZ2::Rank1(a, b) => json!({ "kind": "Rank1", "generator": [a, b] }),
            SubZ2::Rank2(m) => json!({ "kind": "Rank2", "basis": m }),
        },
    }
}

fn parse_pairs<'a>(n: Node<'a>) -> Result<Vec<(i64, i64)>> {
    n.items()?.iter().map(|p| p.pair_i64()).collect()
}

pub fn parse_fgsub<'a>(amb: &Ambient, n: Node<'a>) -> Result<FgSub> {
    match amb {
        Ambient::ZxZn(nn) => {
            if let Some(gens) = n.opt("gens") {
                return Ok(FgSub::ZxZn(canon_zxzn(*nn, &parse_pairs(gens)?)?));
            }
            let kind = n.get("kind")?;
            let m = n.get("m")?.u64()?;
            let k = match kind.str()? {
                "FiniteOnly" => ZxZnKind::FiniteOnly,
                "Mixed" => ZxZnKind::Mixed { a: n.get("a")?.u64()?, b: n.get("b")?.u64()? },
                other => return Err(kind.err(format!("unknown subgroup kind {other:?}"))),
            };
            Ok(FgSub::ZxZn(SubZxZn::new(*nn, m, k)?))
        }
        Ambient::Z2 => {
            if let Some(gens) = n.opt("gens") {
                return Ok(FgSub::Z2(canon_z2(&parse_pairs(gens)?)));
            }
            let kind = n.get("kind")?;
            let h = match kind.str()? {
                "Trivial" => SubZ2::Trivial,
                "Rank1" => {
                    let (a, b) = n.get("generator")?.pair_i64()?;
                    SubZ2::Rank1(a, b)
                }
                "Rank2" => {
                    let rows = parse_pairs(n.get("basis")?)?;
                    if rows.len() != 2 {
                        return Err(kind.err("Rank2 needs two basis rows"));
                    }
                    SubZ2::Rank2([[rows[0].0, rows[0].1], [rows[1].0, rows[1].1]])
                }
                other => return Err(kind.err(format!("unknown subgroup kind {other:?}"))),
            };
            if canon_z2(&h.basis()) != h {
                return Err(Error::constraint("Z^2 descriptor is not in canonical form; give \"gens\" instead"));
            }
            Ok(FgSub::Z2(h))
        }
        _ => Err(n.err("expected a ZxZn or Z2 document")),
    }
}

// ---- families ------------------------------------------------------------

fn affine_json(a: &Affine) -> Value {
    json!({ "slope": a.slope, "offset": a.offset })
}

fn parse_affine(n: Node) -> Result<Affine> {
    Ok(Affine::new(n.get("slope")?.i64()?, n.get("offset")?.i64()?))
}

fn periodic_json<T>(p: &Periodic<T>, f: impl Fn(&T) -> Value) -> Value {
    json!({ "prefix": p.prefix.iter().map(&f).collect::<Vec<_>>(), "cycle": p.cycle.iter().map(&f).collect::<Vec<_>>() })
}

fn parse_periodic<'a, T>(n: Node<'a>, f: impl Fn(Node<'a>) -> Result<T>) -> Result<Periodic<T>> {
    let prefix = n.get("prefix")?.items()?.into_iter().map(&f).collect::<Result<_>>()?;
    let cycle = n.get("cycle")?.items()?.into_iter().map(&f).collect::<Result<_>>()?;
    Ok(Periodic { prefix, cycle })
}

fn affine_pair(a: &[Affine; 2]) -> Value {
    json!([affine_json(&a[0]), affine_json(&a[1])])
}

fn parse_affine_pair<'a>(n: Node<'a>) -> Result<[Affine; 2]> {
    let items = n.items()?;
    if items.len() != 2 {
        return Err(n.err("expected two affine sequences"));
    }
    Ok([parse_affine(items[0].clone())?, parse_affine(items[1].clone())?])
}

pub fn fg_family_json(f: &FamilyFG) -> Value {
    match f {
        FamilyFG::MixedEscape { m, a, b, .. } => {
            json!({ "type": "MixedEscape", "m": m, "a": affine_json(a), "b": periodic_json(b, |x| json!(x)) })
        }
        FamilyFG::ProductEscape { m, .. } => json!({ "type": "ProductEscape", "m": m }),
        FamilyFG::CyclicEscape { g, .. } => json!({ "type": "CyclicEscape", "g": affine_pair(g) }),
        FamilyFG::Z2RankOneLimit { h, g } => json!({ "type": "Z2RankOneLimit", "h": [h.0, h.1], "g": affine_pair(g) }),
        FamilyFG::Z2MinVecEscape { basis } => {
            json!({ "type": "Z2MinVecEscape", "basis": [affine_pair(&basis[0]), affine_pair(&basis[1])] })
        }
        FamilyFG::EventuallyConstant { prefix, value } => json!({
            "type": "EventuallyConstant",
            "prefix": prefix.iter().map(fgsub_json).collect::<Vec<_>>(),
            "value": fgsub_json(value),
        }),
    }
}

pub fn parse_fg_family<'a>(amb: &Ambient, n: Node<'a>) -> Result<FamilyFG> {
    let ty = n.get("type")?;
    let nn = match amb {
        Ambient::ZxZn(nn) => Some(*nn),
        Ambient::Z2 => None,
        _ => return Err(n.err("expected a ZxZn or Z2 family")),
    };
    let need_n = || nn.ok_or_else(|| ty.err("this family lives in Z x Z/n"));
    Ok(match ty.str()? {
        "MixedEscape" => FamilyFG::MixedEscape {
            n: need_n()?,
            m: n.get("m")?.u64()?,
            a: parse_affine(n.get("a")?)?,
            b: parse_periodic(n.get("b")?, |x| x.i64())?,
        },
        "ProductEscape" => FamilyFG::ProductEscape { n: need_n()?, m: n.get("m")?.u64()? },
        "CyclicEscape" => FamilyFG::CyclicEscape {
            ambient: nn.map_or(FgAmbient::Z2, FgAmbient::ZxZn),
            g: parse_affine_pair(n.get("g")?)?,
        },
        "Z2RankOneLimit" => FamilyFG::Z2RankOneLimit {
            h: n.get("h")?.pair_i64()?,
            g: parse_affine_pair(n.get("g")?)?,
        },
        "Z2MinVecEscape" => {
            let rows = n.get("basis")?.items()?;
            if rows.len() != 2 {
                return Err(n.err("basis needs two rows"));
            }
            FamilyFG::Z2MinVecEscape { basis: [parse_affine_pair(rows[0].clone())?, parse_affine_pair(rows[1].clone())?] }
        }
        "EventuallyConstant" => FamilyFG::EventuallyConstant {
            prefix: n.get("prefix")?.items()?.into_iter().map(|x| parse_fgsub(amb, x)).collect::<Result<_>>()?,
            value: parse_fgsub(amb, n.get("value")?)?,
        },
        other => return Err(ty.err(format!("unknown family type {other:?}"))),
    })
}

fn padic_json(x: &PadicRat) -> Value {
    rat_json(x.value())
}

fn parse_padic(p: u64, n: Node) -> Result<PadicRat> {
    PadicRat::new(n.rat()?, p)
}

pub fn g_family_json(f: &FamilyG) -> Value {
    match &f.shape {
        FamilyShape::DiscConvergent { f, x_limit, v, u } => json!({
            "type": "DiscConvergent",
            "F": kt_gens(f),
            "x_limit": padic_json(x_limit),
            "v": affine_json(v),
            "u": periodic_json(u, padic_json),
        }),
        FamilyShape::DiscGrowingF { d, base, t, x } => json!({
            "type": "DiscGrowingF",
            "d": d,
            "base": base.iter().map(|(c, z)| json!([fmt_rat(c), fmt_rat(z)])).collect::<Vec<_>>(),
            "t": affine_json(t),
            "x": periodic_json(x, padic_json),
        }),
        FamilyShape::OneDimFamily(DStream::Escape { e, a, gamma }) => json!({
            "type": "OneDimFamily",
            "escape": { "e": e, "a": affine_json(a), "gamma": periodic_json(gamma, rat_json) },
        }),
        FamilyShape::OneDimFamily(DStream::Periodic(seq)) => json!({
            "type": "OneDimFamily",
            "periodic": periodic_json(seq, d_json),
        }),
        FamilyShape::FiniteApprox(h) => json!({ "type": "FiniteApprox", "target": gsub_json(h) }),
        FamilyShape::EventuallyConstant { prefix, value } => json!({
            "type": "EventuallyConstant",
            "prefix": prefix.iter().map(gsub_json).collect::<Vec<_>>(),
            "value": gsub_json(value),
        }),
    }
}

pub fn parse_g_family<'a>(g: &Gpk, n: Node<'a>) -> Result<FamilyG> {
    let ty = n.get("type")?;
    let p = g.p;
    let shape = match ty.str()? {
        "DiscConvergent" => FamilyShape::DiscConvergent {
            f: parse_kt(g.k, n.get("F")?)?,
            x_limit: parse_padic(p, n.get("x_limit")?)?,
            v: parse_affine(n.get("v")?)?,
            u: parse_periodic(n.get("u")?, |x| parse_padic(p, x))?,
        },
        "DiscGrowingF" => FamilyShape::DiscGrowingF {
            d: n.get("d")?.u64()?,
            base: parse_gens(n.get("base")?, 2)?.into_iter().map(|v| (v[0].clone(), v[1].clone())).collect(),
            t: parse_affine(n.get("t")?)?,
            x: parse_periodic(n.get("x")?, |x| parse_padic(p, x))?,
        },
        "OneDimFamily" => {
            if let Some(e) = n.opt("escape") {
                FamilyShape::OneDimFamily(DStream::Escape {
                    e: e.get("e")?.u64()?,
                    a: parse_affine(e.get("a")?)?,
                    gamma: parse_periodic(e.get("gamma")?, |x| x.rat())?,
                })
            } else {
                let seq = parse_periodic(n.get("periodic")?, |x| parse_d(g, x))?;
                FamilyShape::OneDimFamily(DStream::Periodic(seq))
            }
        }
        "FiniteApprox" => FamilyShape::FiniteApprox(parse_gsub(g, n.get("target")?)?),
        "EventuallyConstant" => FamilyShape::EventuallyConstant {
            prefix: n.get("prefix")?.items()?.into_iter().map(|x| parse_gsub(g, x)).collect::<Result<_>>()?,
            value: parse_gsub(g, n.get("value")?)?,
        },
        other => return Err(ty.err(format!("unknown family type {other:?}"))),
    };
    Ok(FamilyG { g: *g, shape })
}

// ---- predual side --------------------------------------------------------

pub fn qpsub_json(k: &QpSideSub) -> Value {
    match k {
        QpSideSub::OpenFinIndex { m, lattice } => {
            json!({ "kind": "OpenFinIndex", "m": m, "lattice": int_lattice_json(lattice) })
        }
        QpSideSub::CompactSub { x, lattice } => json!({
            "kind": "CompactSub",
            "x": match x { XCond::Zero => json!("zero"), XCond::Mod(m) => json!({ "mod": m }) },
            "lattice": int_lattice_json(lattice),
        }),
        QpSideSub::GraphDisc { lattice, c0, x } => json!({
            "kind": "GraphDisc",
            "lattice": int_lattice_json(lattice),
            "c0": rat_json(c0),
            "x": padic_json(x),
        }),
    }
}

fn parse_int_lattice<'a>(n: Node<'a>, r: usize) -> Result<IntLattice> {
    let rows: Vec<Vec<Int>> = n.items()?.iter().map(|row| row.int_vec(r)).collect::<Result<_>>()?;
    IntLattice::from_generators(&rows, r).ok_or_else(|| n.err(format!("rows do not span a rank-{r} lattice")))
}

pub fn parse_qpsub<'a>(g: &Gpk, n: Node<'a>) -> Result<QpSideSub> {
    let kind = n.get("kind")?;
    match kind.str()? {
        "OpenFinIndex" => Ok(QpSideSub::OpenFinIndex {
            m: n.get("m")?.u64()? as u32,
            lattice: parse_int_lattice(n.get("lattice")?, 3)?,
        }),
        "CompactSub" => {
            let xn = n.get("x")?;
            let x = if xn.v.as_str() == Some("zero") { XCond::Zero } else { XCond::Mod(xn.get("mod")?.u64()? as u32) };
            Ok(QpSideSub::CompactSub { x, lattice: parse_int_lattice(n.get("lattice")?, 2)? })
        }
        "GraphDisc" => Ok(QpSideSub::GraphDisc {
            lattice: parse_int_lattice(n.get("lattice")?, 2)?,
            c0: n.get("c0")?.rat()?,
            x: parse_padic(g.p, n.get("x")?)?,
        }),
        other => Err(kind.err(format!("unknown predual subgroup kind {other:?}"))),
    }
}

pub fn parse_qpelem<'a>(g: &Gpk, n: Node<'a>) -> Result<QpSideElem> {
    Ok(QpSideElem {
        x: parse_padic(g.p, n.get("x")?)?,
        a: n.get("a")?.int()?,
        n: n.get("n")?.int()?,
    })
}

pub fn nbar(n: &NBar) -> Value {
    nbar_json(n)
}

pub fn rat_value(r: &Rat) -> Value {
    rat_json(r)
}

pub fn int_value(i: &Int) -> Value {
    int_json(i)
}

pub fn kt_value(f: &FinSubKT) -> Value {
    kt_gens(f)
}

pub fn parse_kt_value<'a>(k: u64, n: Node<'a>) -> Result<FinSubKT> {
    parse_kt(k, n)
}
