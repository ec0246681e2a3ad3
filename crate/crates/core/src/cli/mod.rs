//! Subcommand dispatch over JSON documents. [`execute`] is pure: it takes
//! the input text and returns the exit code and the output text, so the
//! binary only handles files and the process exit status.

pub mod json;

use std::str::FromStr;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::duality::{self, QpUnit, QpSideSub};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, parse_rat, Rat};
use crate::fgab::{coord_zxzn, point_from_coord_zxzn, FgLimit, FgSub};
use crate::limits::{convergence_certificate, Certificate, Failure, GLimit};
use crate::metric;
use crate::prufer::{ClosedSubG, Gpk, SubKind};
use crate::topo::{self, PointClass, ResidualCoord};

use json::{Ambient, Node};

pub const DEFAULT_MAX_LEVEL: u32 = 8;
pub const DEFAULT_DIGITS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Canon,
    Member,
    Window,
    Dist,
    Limit,
    Certify,
    Dual,
    VerifyDual,
    DecomposeUnit,
    Classify,
    Coord,
    Enum,
    Approx,
    CbReport,
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "canon" => Command::Canon,
            "member" => Command::Member,
            "window" => Command::Window,
            "dist" => Command::Dist,
            "limit" => Command::Limit,
            "certify" => Command::Certify,
            "dual" => Command::Dual,
            "verify-dual" => Command::VerifyDual,
            "decompose-unit" => Command::DecomposeUnit,
            "classify" => Command::Classify,
            "coord" => Command::Coord,
            "enum" => Command::Enum,
            "approx" => Command::Approx,
            "cb-report" => Command::CbReport,
            other => return Err(Error::Schema { pointer: "/".into(), message: format!("unknown command {other:?}") }),
        })
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub level: Option<u32>,
    pub epsilon: Option<String>,
    pub count: Option<usize>,
    pub digits: Option<usize>,
    pub z_resolution: Option<u64>,
    /// Canonicalize subgroup descriptors on load.
    pub canon: bool,
    /// Unit string for `decompose-unit`; read from the document otherwise.
    pub unit: Option<String>,
    pub max_level: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            level: None,
            epsilon: None,
            count: None,
            digits: None,
            z_resolution: None,
            canon: false,
            unit: None,
            max_level: DEFAULT_MAX_LEVEL,
        }
    }
}

impl Options {
    fn level_or(&self, default: u32) -> Result<u32> {
        let level = self.level.unwrap_or(default.min(self.max_level));
        if level > self.max_level {
            return Err(Error::LevelCap { level, cap: self.max_level });
        }
        Ok(level)
    }

    fn required_level(&self, cmd: &str) -> Result<u32> {
        if self.level.is_none() {
            return Err(usage(format!("{cmd} needs --level")));
        }
        self.level_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

fn usage(message: String) -> Error {
    Error::Schema { pointer: "/".into(), message }
}

/// Exit status for an error: 2 for malformed input, 1 for domain errors.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Schema { .. } | Error::Io(_) => 2,
        _ => 1,
    }
}

pub fn error_json(e: &Error) -> Value {
    let mut body = json!({ "code": e.code(), "message": e.to_string() });
    match e {
        Error::Schema { pointer, .. } => body["witness"] = json!({ "pointer": pointer }),
        Error::InvalidSheet { n, sheet } => body["witness"] = json!({ "n": n, "sheet": sheet }),
        Error::LevelCap { level, cap } => body["witness"] = json!({ "level": level, "cap": cap }),
        _ => {}
    }
    json!({ "error": body })
}

/// Runs one command on the input document.
pub fn execute(cmd: Command, opts: &Options, input: &str) -> Outcome {
    match run(cmd, opts, input) {
        Ok(v) => Outcome { code: 0, output: render(&v) },
        Err(e) => Outcome { code: exit_code(&e), output: render(&error_json(&e)) },
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable");
    s.push('\n');
    s
}

fn parse_doc(input: &str) -> Result<Value> {
    serde_json::from_str(input).map_err(|e| Error::Schema { pointer: "/".into(), message: format!("invalid JSON: {e}") })
}

fn gpk_of(amb: &Ambient, doc: &Node) -> Result<Gpk> {
    match amb {
        Ambient::Gpk(g) => Ok(*g),
        _ => Err(doc.err("this command needs a Gpk document")),
    }
}

fn load_gsub(g: &Gpk, n: Node, opts: &Options) -> Result<ClosedSubG> {
    let h = json::parse_gsub(g, n)?;
    if opts.canon {
        h.canon()
    } else {
        Ok(h)
    }
}

fn run(cmd: Command, opts: &Options, input: &str) -> Result<Value> {
    if cmd == Command::DecomposeUnit {
        return decompose(opts, input);
    }
    let value = parse_doc(input)?;
    let doc = Node::root(&value);
    let amb = json::parse_ambient(&doc)?;
    match cmd {
        Command::Canon => canon(&amb, &doc),
        Command::Member => member(&amb, &doc, opts),
        Command::Window => {
            let g = gpk_of(&amb, &doc)?;
            let level = opts.required_level("window")?;
            let w = load_gsub(&g, doc, opts)?.window(level);
            Ok(json!({
                "level": level,
                "points": w.isolated_points.iter().map(json::elem_json).collect::<Vec<_>>(),
                "circles": w.circle_fibers.iter().map(|(a, b)| json!([fmt_rat(a.value()), fmt_rat(b.value())])).collect::<Vec<_>>(),
            }))
        }
        Command::Dist => dist(&amb, &doc, opts),
        Command::Limit => limit(&amb, &doc, opts),
        Command::Certify => certify(&amb, &doc, opts),
        Command::Dual => {
            let g = gpk_of(&amb, &doc)?;
            let h = load_gsub(&g, doc.clone(), opts)?;
            let k = duality::orthogonal(&h)?;
            let mut out = json::document(&amb, json::gsub_json(&h));
            out["dual"] = json::qpsub_json(&k);
            out["index"] = match k {
                QpSideSub::OpenFinIndex { .. } => json::int_value(&duality::index_open(&k)?),
                _ => Value::Null,
            };
            Ok(out)
        }
        Command::VerifyDual => {
            let g = gpk_of(&amb, &doc)?;
            let h = load_gsub(&g, doc.clone(), opts)?;
            let k = match doc.opt("dual") {
                Some(n) => json::parse_qpsub(&g, n)?,
                None => duality::orthogonal(&h)?,
            };
            let m = opts.level_or(h.data_level().max(4))?;
            let mz = opts.z_resolution.unwrap_or_else(|| duality::default_z_resolution(&h));
            let r = duality::verify_orthogonal(&h, &k, m, mz)?;
            Ok(json!({
                "level": r.level,
                "z_resolution": r.z_resolution,
                "h_size": r.h_size,
                "k_image_size": r.k_image_size,
                "annihilator_size": r.annihilator_size,
                "trivial": r.trivial,
                "maximal": r.maximal,
                "holds": r.holds,
            }))
        }
        Command::Classify => {
            let g = gpk_of(&amb, &doc)?;
            let c = topo::classify_point(&load_gsub(&g, doc, opts)?)?;
            Ok(match c {
                PointClass::GluePoint(d) => json!({ "class": c.tag(), "d": d }),
                _ => json!({ "class": c.tag() }),
            })
        }
        Command::Coord => coord(&amb, &doc, opts),
        Command::Enum => {
            let g = gpk_of(&amb, &doc)?;
            let count = opts.count.ok_or_else(|| usage("enum needs --count".into()))?;
            let subs = topo::enumerate_finite(&g, count);
            Ok(json!({ "subgroups": subs.into_iter().map(|h| json::gsub_json(&ClosedSubG::new(g, SubKind::Finite(h)))).collect::<Vec<_>>() }))
        }
        Command::Approx => {
            let g = gpk_of(&amb, &doc)?;
            let h = load_gsub(&g, doc, opts)?;
            let count = opts.count.unwrap_or(4) as u64;
            let approx: Vec<Value> = (1..=count)
                .map(|n| json::gsub_json(&ClosedSubG::new(g, SubKind::Finite(h.approximate_by_finite(n)))))
                .collect();
            Ok(json!({ "approximations": approx }))
        }
        Command::CbReport => {
            let g = gpk_of(&amb, &doc)?;
            let r = topo::cb_report(&g)?;
            Ok(json!({
                "p": r.p,
                "k": r.k,
                "cb_rank": r.cb_rank,
                "removed_at_stage_one": r.removed_at_stage_one,
                "perfect_core": r.perfect_core,
                "glue_points": r.glue_points,
                "spot_checks": r.spot_checks.iter().map(|s| json!({
                    "coord": coord_json(&s.coord),
                    "level": s.level,
                    "nearest": fmt_rat(&s.nearest),
                    "neighbors": s.neighbors,
                })).collect::<Vec<_>>(),
            }))
        }
        Command::DecomposeUnit => unreachable!(),
    }
}

fn canon(amb: &Ambient, doc: &Node) -> Result<Value> {
    let body = match amb {
        Ambient::Gpk(g) => json::gsub_json(&json::parse_gsub(g, doc.clone())?.canon()?),
        Ambient::ZxZn(_) | Ambient::Z2 => json::fgsub_json(&json::parse_fgsub(amb, doc.clone())?),
        Ambient::QpSide(g) => json::qpsub_json(&json::parse_qpsub(g, doc.clone())?),
    };
    Ok(json::document(amb, body))
}

fn fg_contains(h: &FgSub, x: i64, y: i64) -> bool {
    match h {
        FgSub::ZxZn(s) => s.contains(x, y),
        FgSub::Z2(s) => s.contains(x, y),
    }
}

fn member(amb: &Ambient, doc: &Node, opts: &Options) -> Result<Value> {
    let e = doc.get("element")?;
    let inside = match amb {
        Ambient::Gpk(g) => {
            let h = load_gsub(g, doc.clone(), opts)?;
            h.member(&json::parse_gelem(g, e)?)?
        }
        Ambient::ZxZn(_) | Ambient::Z2 => {
            let h = json::parse_fgsub(amb, doc.clone())?;
            let v = e.int_vec(2)?;
            let small = |i: usize| i64::try_from(&v[i]).map_err(|_| e.err("coordinate out of range"));
            fg_contains(&h, small(0)?, small(1)?)
        }
        Ambient::QpSide(g) => {
            let k = json::parse_qpsub(g, doc.clone())?;
            k.contains(g.k, &json::parse_qpelem(g, e)?)
        }
    };
    Ok(json!({ "member": inside }))
}

fn pair<'a>(doc: &Node<'a>) -> Result<(Node<'a>, Node<'a>)> {
    let subs = doc.get("subgroups")?;
    let items = subs.items()?;
    match <[Node; 2]>::try_from(items) {
        Ok([a, b]) => Ok((a, b)),
        Err(_) => Err(subs.err("expected two subgroups")),
    }
}

fn dist(amb: &Ambient, doc: &Node, opts: &Options) -> Result<Value> {
    let level = opts.level_or(4)?;
    let (a, b) = pair(doc)?;
    let d = match amb {
        Ambient::Gpk(g) => metric::chabauty_dist(&load_gsub(g, a, opts)?, &load_gsub(g, b, opts)?, level)?,
        Ambient::ZxZn(_) | Ambient::Z2 => {
            metric::fg_chabauty_dist(&json::parse_fgsub(amb, a)?, &json::parse_fgsub(amb, b)?, level)?
        }
        Ambient::QpSide(_) => return Err(doc.err("dist needs a Gpk, ZxZn or Z2 document")),
    };
    Ok(json!({ "distance": fmt_rat(&d) }))
}

fn stage_json(s: Option<u64>) -> Value {
    s.map_or(Value::Null, |s| json!(s))
}

fn limit(amb: &Ambient, doc: &Node, opts: &Options) -> Result<Value> {
    let fam = doc.get("family")?;
    Ok(match amb {
        Ambient::Gpk(g) => {
            let f = json::parse_g_family(g, fam)?;
            let r = f.limit()?;
            let lim = match &r.limit {
                GLimit::Limit(h) => json::gsub_json(h),
                GLimit::Divergent => json!("Divergent"),
            };
            let mut out = json!({ "limit": lim, "justification": r.justification });
            if opts.level.is_some() {
                out["stage"] = stage_json(f.stage(opts.level_or(0)?)?);
            }
            out
        }
        Ambient::ZxZn(_) | Ambient::Z2 => {
            let f = json::parse_fg_family(amb, fam)?;
            let r = f.limit()?;
            let lim = match &r.limit {
                FgLimit::Limit(h) => json::fgsub_json(h),
                FgLimit::Divergent => json!("Divergent"),
            };
            let mut out = json!({ "limit": lim, "justification": r.justification });
            if let Some(radius) = opts.level {
                out["stage"] = stage_json(f.stage(radius as u64)?);
            }
            out
        }
        Ambient::QpSide(_) => return Err(doc.err("limit needs a Gpk, ZxZn or Z2 document")),
    })
}

fn certify(amb: &Ambient, doc: &Node, opts: &Options) -> Result<Value> {
    let g = gpk_of(amb, doc)?;
    let level = opts.level_or(2)?;
    let eps = match &opts.epsilon {
        Some(s) => parse_rat(s)?,
        None => Rat::new(1.into(), (1u64 << (level + 1)).into()),
    };
    if eps <= Rat::zero() {
        return Err(Error::constraint("epsilon must be positive"));
    }
    let prefix: Vec<ClosedSubG> =
        doc.get("prefix")?.items()?.into_iter().map(|n| load_gsub(&g, n, opts)).collect::<Result<_>>()?;
    let h = load_gsub(&g, doc.get("candidate")?, opts)?;
    Ok(match convergence_certificate(&prefix, &h, level, &eps)? {
        Certificate::Certified { level, epsilon, levels } => json!({
            "certified": true,
            "level": level,
            "epsilon": fmt_rat(&epsilon),
            "levels": levels.iter().map(|l| json!({
                "level": l.level,
                "approximated_from": l.approximated_from,
                "no_spurious_from": l.no_spurious_from,
            })).collect::<Vec<_>>(),
        }),
        Certificate::Refuted { level, index, failure, witness, distance } => json!({
            "certified": false,
            "level": level,
            "index": index,
            "failure": match failure { Failure::NotApproximated => "NotApproximated", Failure::Spurious => "Spurious" },
            "witness": [fmt_rat(&witness.0), fmt_rat(&witness.1), fmt_rat(&witness.2)],
            "distance": fmt_rat(&distance),
        }),
    })
}

pub fn coord_json(c: &ResidualCoord) -> Value {
    match c {
        ResidualCoord::Sheet { d, j } => json!({ "kind": "Sheet", "d": d, "j": json::nbar(j) }),
        ResidualCoord::CantorAddr { f, digits } => json!({ "kind": "CantorAddr", "F": json::kt_value(f), "digits": digits }),
        ResidualCoord::GlueAddr { d } => json!({ "kind": "GlueAddr", "d": d }),
    }
}

fn parse_coord(g: Option<&Gpk>, n: Node) -> Result<ResidualCoord> {
    let kind = n.get("kind")?;
    Ok(match kind.str()? {
        "Sheet" => ResidualCoord::Sheet { d: n.get("d")?.u64()?, j: json::parse_nbar(&n.get("j")?)? },
        "GlueAddr" => ResidualCoord::GlueAddr { d: n.get("d")?.u64()? },
        "CantorAddr" => {
            let g = g.ok_or_else(|| kind.err("Cantor addresses live in Gpk"))?;
            ResidualCoord::CantorAddr {
                f: json::parse_kt_value(g.k, n.get("F")?)?,
                digits: n.get("digits")?.items()?.iter().map(|d| d.u64()).collect::<Result<_>>()?,
            }
        }
        other => return Err(kind.err(format!("unknown coordinate kind {other:?}"))),
    })
}

/// Subgroup to coordinate, or coordinate to subgroup when the document
/// carries a `"coord"` key.
fn coord(amb: &Ambient, doc: &Node, opts: &Options) -> Result<Value> {
    match amb {
        Ambient::Gpk(g) => {
            if let Some(c) = doc.opt("coord") {
                let h = topo::residual_point(g, &parse_coord(Some(g), c)?)?;
                return Ok(json::document(amb, json::gsub_json(&h)));
            }
            let h = load_gsub(g, doc.clone(), opts)?;
            let c = topo::coord_residual(&h, opts.digits.unwrap_or(DEFAULT_DIGITS))?;
            Ok(json!({ "coord": coord_json(&c) }))
        }
        Ambient::ZxZn(n) => {
            if let Some(c) = doc.opt("coord") {
                let ResidualCoord::Sheet { d, j } = parse_coord(None, c.clone())? else {
                    return Err(c.err("ZxZn coordinates are sheets"));
                };
                let h = point_from_coord_zxzn(*n, d, j)?;
                return Ok(json::document(amb, json::fgsub_json(&FgSub::ZxZn(h))));
            }
            let FgSub::ZxZn(h) = json::parse_fgsub(amb, doc.clone())? else { unreachable!() };
            let (m, j) = coord_zxzn(&h);
            Ok(json!({ "coord": coord_json(&ResidualCoord::Sheet { d: m, j }) }))
        }
        _ => Err(doc.err("coord needs a Gpk or ZxZn document")),
    }
}

fn decompose(opts: &Options, input: &str) -> Result<Value> {
    let text = match &opts.unit {
        Some(u) => u.clone(),
        None => {
            let value = parse_doc(input)?;
            let doc = Node::root(&value);
            doc.get("unit")?.str()?.to_string()
        }
    };
    let u = QpUnit::parse(&text)?;
    let d = duality::decompose_unit(&u)?;
    Ok(json!({ "unit": u.to_string(), "v": d.v, "t": d.t, "x": d.x.to_string() }))
}
