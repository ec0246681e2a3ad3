use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{reduced_generators, window_box_lattice, QpSideSub};
use crate::error::{Error, Result};
use crate::exactnum::Int;
use crate::prufer::{quotient_data, ClosedSubG, SubKind};

/// Outcome of the finite-quotient comparison between `K` and `H^⊥`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub level: u32,
    pub z_resolution: u64,
    /// `|H ∩ (C_{p^m} x C_k x C_{M_z})|`.
    pub h_size: u64,
    /// Size of the image of `K` in `Z/p^m x Z/k x Z/M_z`.
    pub k_image_size: u64,
    /// Size of the annihilator of the trace of `H`, by exhaustive search.
    pub annihilator_size: u64,
    /// `K` pairs trivially with `H`.
    pub trivial: bool,
    /// Nothing outside `K` pairs trivially with `H`.
    pub maximal: bool,
    pub holds: bool,
}

const MAX_QUOTIENT: u64 = 1 << 26;

fn to_u64(x: &Int, modulus: u64) -> u64 {
    x.mod_floor(&Int::from(modulus)).to_u64().unwrap()
}

/// Closure of `gens` in `Z/n0 x Z/n1 x Z/n2`, as a membership table.
fn closure(gens: &[[u64; 3]], dims: [u64; 3]) -> (Vec<bool>, u64) {
    let size = (dims[0] * dims[1] * dims[2]) as usize;
    let enc = |v: [u64; 3]| ((v[0] * dims[1] + v[1]) * dims[2] + v[2]) as usize;
    let mut seen = vec![false; size];
    let mut stack = vec![[0u64; 3]];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for g in gens {
            let w = [(v[0] + g[0]) % dims[0], (v[1] + g[1]) % dims[1], (v[2] + g[2]) % dims[2]];
            let i = enc(w);
            if !seen[i] {
                seen[i] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    (seen, count)
}

/// Order of the `z`-torsion the trace of `H` can see.
fn z_torsion(h: &ClosedSubG) -> Int {
    match &h.kind {
        SubKind::Finite(l) => l.lattice().coordinate_exponent(2),
        SubKind::Disc { f, .. } => Int::from(quotient_data(h.g.k, f).t),
        SubKind::OneDim(_) => Int::from(1),
    }
}

/// `M_z = 2 lcm(k, z-torsion of H)`.
pub fn default_z_resolution(h: &ClosedSubG) -> u64 {
    let nz = crate::prufer::int_u64(&z_torsion(h));
    2 * nz.lcm(&h.g.k)
}

fn check_resolution(h: &ClosedSubG, m: u32, mz: u64) -> Result<()> {
    let coarse = |what: String| Err(Error::ResolutionTooCoarse(what));
    let level = h.data_level();
    if level > m {
        return coarse(format!("subgroup data reaches w-level {level} > m = {m}"));
    }
    let nz = z_torsion(h);
    if !(Int::from(mz) % &nz).is_zero() {
        return coarse(format!("z-torsion {nz} does not divide M_z = {mz}"));
    }
    Ok(())
}

/// Compares `K` with the annihilator of `H` in the finite quotients
/// `Z/p^m x Z/k x Z/M_z` and `C_{p^m} x C_k x C_{M_z}`, by enumeration.
pub fn verify_orthogonal(h: &ClosedSubG, k: &QpSideSub, m: u32, mz: u64) -> Result<VerifyReport> {
    let g = h.g;
    if let QpSideSub::GraphDisc { x, .. } = k {
        if x.prime() != g.p {
            return Err(Error::MismatchedAmbient(format!("{}-adic descriptor against p = {}", x.prime(), g.p)));
        }
    }
    if mz == 0 {
        return Err(Error::constraint("M_z must be positive"));
    }
    check_resolution(h, m, mz)?;
    let pm = crate::exactnum::pow_u64(g.p, m).ok_or_else(|| Error::constraint("p^m overflows"))?;
    let dims = [pm, g.k, mz];
    let size = pm.checked_mul(g.k).and_then(|s| s.checked_mul(mz)).filter(|&s| s <= MAX_QUOTIENT);
    let size = size.ok_or_else(|| Error::constraint(format!("quotient of size p^m * k * M_z is above {MAX_QUOTIENT}")))?;

    // generators of the trace of H, scaled to integers
    let trace = window_box_lattice(h, m, mz);
    let h_gens: Vec<[u64; 3]> = trace
        .rows()
        .iter()
        .map(|r| {
            let mut out = [0u64; 3];
            for i in 0..3 {
                let scaled = &r[i] * crate::exactnum::rat_int(Int::from(dims[i]));
                debug_assert!(scaled.is_integer());
                out[i] = to_u64(&scaled.to_integer(), dims[i]);
            }
            out
        })
        .collect();
    let (_, h_size) = closure(&h_gens, dims);

    let l = pm.lcm(&g.k).lcm(&mz);
    let scale = [l / pm, l / g.k, l / mz];
    let mut ann = vec![false; size as usize];
    let mut ann_size = 0u64;
    let mut idx = 0usize;
    for x in 0..pm {
        for a in 0..g.k {
            for n in 0..mz {
                let ok = h_gens.iter().all(|hg| {
                    (x * hg[0] % l * scale[0] + a * hg[1] % l * scale[1] + n * hg[2] % l * scale[2]) % l == 0
                });
                if ok {
                    ann[idx] = true;
                    ann_size += 1;
                }
                idx += 1;
            }
        }
    }

    let k_gens: Vec<[u64; 3]> = reduced_generators(&g, k, m)
        .iter()
        .map(|v| [to_u64(&v[0], pm), to_u64(&v[1], g.k), to_u64(&v[2], mz)])
        .collect();
    let (image, k_image_size) = closure(&k_gens, dims);
    let trivial = image.iter().zip(&ann).all(|(i, a)| !*i || *a);
    let maximal = image.iter().zip(&ann).all(|(i, a)| !*a || *i);
    Ok(VerifyReport {
        level: m,
        z_resolution: mz,
        h_size,
        k_image_size,
        annihilator_size: ann_size,
        trivial,
        maximal,
        holds: trivial && maximal,
    })
}
