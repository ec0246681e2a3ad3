use std::cmp::Ordering;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{frac, Int, Rat};

/// A full-rank lattice `L` with `Z^r <= L < Q^r`, stored by its Hermite
/// normal form: lower-triangular rows, diagonal `1/n_i`, entry `(i, j)`
/// reduced into `[0, d_j)`. Two lattices are equal iff their forms are.
///
/// Finite subgroups of `(Q/Z)^r` are exactly the quotients `L / Z^r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FracLattice {
    rows: Vec<Vec<Rat>>,
}

/// A full-rank sublattice of `Z^r` in the same normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntLattice {
    rows: Vec<Vec<Int>>,
}

impl PartialOrd for FracLattice {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FracLattice {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| self.rows.iter().flatten().cmp(other.rows.iter().flatten()))
    }
}

/// Lower-triangular integer HNF of the lattice spanned by `vecs`, or `None`
/// if they do not span a rank-`r` lattice.
fn integer_hnf(mut pool: Vec<Vec<Int>>, r: usize) -> Option<Vec<Vec<Int>>> {
    let mut rows: Vec<Vec<Int>> = vec![Vec::new(); r];
    for col in (0..r).rev() {
        pool.retain(|v| v.iter().any(|x| !x.is_zero()));
        loop {
            let nonzero: Vec<usize> = (0..pool.len()).filter(|&i| !pool[i][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let piv = *nonzero.iter().min_by_key(|&&i| pool[i][col].abs()).unwrap();
            let pv = pool[piv].clone();
            for &i in &nonzero {
                if i == piv {
                    continue;
                }
                let q = pool[i][col].div_floor(&pv[col]);
                for (x, y) in pool[i].iter_mut().zip(&pv) {
                    *x -= &q * y;
                }
            }
        }
        let idx = (0..pool.len()).find(|&i| !pool[i][col].is_zero())?;
        let mut pivot = pool.swap_remove(idx);
        if pivot[col].is_negative() {
            for x in pivot.iter_mut() {
                *x = -&*x;
            }
        }
        rows[col] = pivot;
    }
    for i in 0..r {
        for j in (0..i).rev() {
            let q = rows[i][j].div_floor(&rows[j][j]);
            if !q.is_zero() {
                let rj = rows[j].clone();
                for (x, y) in rows[i].iter_mut().zip(&rj) {
                    *x -= &q * y;
                }
            }
        }
    }
    Some(rows)
}

fn common_denominator<'a>(it: impl Iterator<Item = &'a Rat>) -> Int {
    it.fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

fn rational_hnf(vecs: &[Vec<Rat>], r: usize) -> Option<Vec<Vec<Rat>>> {
    let den = common_denominator(vecs.iter().flatten());
    let scaled: Vec<Vec<Int>> = vecs
        .iter()
        .map(|v| v.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect())
        .collect();
    let h = integer_hnf(scaled, r)?;
    Some(
        h.into_iter()
            .map(|row| row.into_iter().map(|x| Rat::new(x, den.clone())).collect())
            .collect(),
    )
}

fn identity_rows(r: usize) -> Vec<Vec<Rat>> {
    (0..r)
        .map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

/// Inverse of a square rational matrix (Gauss-Jordan). Panics if singular.
fn invert(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero()).expect("singular matrix");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let pr = a[col].clone();
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = m.len();
    (0..n).map(|j| (0..n).map(|i| m[i][j].clone()).collect()).collect()
}

/// Diagonal of the Smith normal form of an integer matrix, nonzero entries
/// only, arranged so each divides the next.
pub(crate) fn smith_diagonal(mut a: Vec<Vec<Int>>) -> Vec<Int> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    let rt = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(&rt) {
                        *x -= &q * y;
                    }
                }
                if !a[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                }
                if !a[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
            // move the smallest nonzero entry of row/col t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    // fix divisibility: (a, b) -> (gcd, lcm)
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

impl FracLattice {
    /// `Z^r` itself: the trivial subgroup of `(Q/Z)^r`.
    pub fn identity(r: usize) -> Self {
        FracLattice { rows: identity_rows(r) }
    }

    /// Canonical form of the lattice spanned by `gens` and `Z^r`.
    pub fn from_generators(gens: &[Vec<Rat>], r: usize) -> Self {
        let mut vecs = identity_rows(r);
        for g in gens {
            assert_eq!(g.len(), r, "generator has wrong length");
            vecs.push(g.clone());
        }
        FracLattice { rows: rational_hnf(&vecs, r).expect("contains Z^r, so full rank") }
    }

    /// The lattice `diag(1/n_1, ..., 1/n_r) Z^r`.
    pub fn diagonal(ns: &[Int]) -> Self {
        let r = ns.len();
        let gens: Vec<Vec<Rat>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| if i == j { Rat::new(Int::one(), ns[i].clone()) } else { Rat::zero() })
                    .collect()
            })
            .collect();
        FracLattice::from_generators(&gens, r)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }

    pub fn diagonal_entries(&self) -> Vec<Rat> {
        (0..self.rank()).map(|i| self.rows[i][i].clone()).collect()
    }

    /// `[L : Z^r]`, the order of `L / Z^r`.
    pub fn index(&self) -> Int {
        self.rows
            .iter()
            .enumerate()
            .fold(Int::one(), |acc, (i, row)| acc * row[i].recip().to_integer())
    }

    pub fn is_trivial(&self) -> bool {
        self.index().is_one()
    }

    /// Triangular solve of `v` against the basis; member iff the
    /// coordinates are integral.
    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.rank());
        let mut rest = v.to_vec();
        for i in (0..self.rank()).rev() {
            let c = &rest[i] / &self.rows[i][i];
            if !c.is_integer() {
                return false;
            }
            if !c.is_zero() {
                for (x, y) in rest.iter_mut().zip(&self.rows[i]) {
                    *x -= &c * y;
                }
            }
        }
        true
    }

    pub fn contains_lattice(&self, other: &FracLattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &FracLattice) -> FracLattice {
        assert_eq!(self.rank(), other.rank());
        let gens: Vec<Vec<Rat>> = self.rows.iter().chain(&other.rows).cloned().collect();
        FracLattice::from_generators(&gens, self.rank())
    }

    /// Intersection through duality: `(A ∩ B)* = A* + B*`.
    pub fn intersect(&self, other: &FracLattice) -> FracLattice {
        self.dual().sum(&other.dual()).dual()
    }

    /// `L* = { y in Z^r : <y, x> in Z for all x in L }`.
    pub fn dual(&self) -> IntLattice {
        let inv_t = transpose(&invert(&self.rows));
        let gens: Vec<Vec<Int>> = inv_t
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        assert!(x.is_integer(), "L contains Z^r, so L* is integral");
                        x.to_integer()
                    })
                    .collect()
            })
            .collect();
        IntLattice::from_generators(&gens, self.rank()).expect("dual of a full-rank lattice")
    }

    /// Invariant factors of the finite group `L / Z^r` (entries > 1).
    pub fn elementary_divisors(&self) -> Vec<Int> {
        let inv = invert(&self.rows);
        let m: Vec<Vec<Int>> = inv.iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
        smith_diagonal(m).into_iter().filter(|d| !d.is_one()).collect()
    }

    /// Every element of `L / Z^r`, each coordinate reduced into `[0, 1)`.
    pub fn elements(&self) -> Vec<Vec<Rat>> {
        let r = self.rank();
        let orders: Vec<Int> = (0..r).map(|i| self.rows[i][i].recip().to_integer()).collect();
        let mut out = vec![vec![Rat::zero(); r]];
        for i in 0..r {
            let mut next = Vec::new();
            for base in &out {
                let mut a = Int::zero();
                while a < orders[i] {
                    let ra = Rat::from_integer(a.clone());
                    let v: Vec<Rat> = base.iter().zip(&self.rows[i]).map(|(x, y)| x + &ra * y).collect();
                    next.push(v);
                    a += 1;
                }
            }
            out = next;
        }
        for v in out.iter_mut() {
            for x in v.iter_mut() {
                *x = frac(x);
            }
        }
        out
    }

    /// Positive generator of `L ∩ Q e_i`.
    pub fn axis_generator(&self, i: usize) -> Rat {
        let r = self.rank();
        let mut order: Vec<usize> = vec![i];
        order.extend((0..r).filter(|&j| j != i));
        self.permuted(&order).rows[0][0].clone()
    }

    /// The same lattice with coordinates listed in `order`
    /// (new coordinate `t` is old coordinate `order[t]`).
    pub fn permuted(&self, order: &[usize]) -> FracLattice {
        let gens: Vec<Vec<Rat>> =
            self.rows.iter().map(|row| order.iter().map(|&j| row[j].clone()).collect()).collect();
        FracLattice::from_generators(&gens, self.rank())
    }

    /// Least common denominator of coordinate `i` over the lattice: the
    /// exponent of that coordinate's projection.
    pub fn coordinate_exponent(&self, i: usize) -> Int {
        common_denominator(self.rows.iter().map(|r| &r[i]))
    }

    /// Preimage of `self` under the linear map `x -> x A` (row vectors),
    /// intersected with nothing: the caller guarantees `Z^r A <= Z^r`.
    pub fn preimage_under(&self, a: &[Vec<Rat>]) -> FracLattice {
        let inv = invert(a);
        let gens: Vec<Vec<Rat>> = self
            .rows
            .iter()
            .map(|row| {
                (0..row.len())
                    .map(|j| row.iter().zip(&inv).fold(Rat::zero(), |acc, (x, r)| acc + x * &r[j]))
                    .collect()
            })
            .collect();
        FracLattice::from_generators(&gens, self.rank())
    }
}

impl IntLattice {
    pub fn from_generators(gens: &[Vec<Int>], r: usize) -> Option<Self> {
        integer_hnf(gens.to_vec(), r).map(|rows| IntLattice { rows })
    }

    pub fn full(r: usize) -> Self {
        let gens: Vec<Vec<Int>> = identity_rows(r)
            .into_iter()
            .map(|row| row.into_iter().map(|x| x.to_integer()).collect())
            .collect();
        IntLattice::from_generators(&gens, r).unwrap()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.rows
    }

    /// `[Z^r : M]`.
    pub fn index(&self) -> Int {
        self.rows.iter().enumerate().fold(Int::one(), |acc, (i, r)| acc * &r[i])
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        let mut rest = v.to_vec();
        for i in (0..self.rank()).rev() {
            let (c, rem) = rest[i].div_rem(&self.rows[i][i]);
            if !rem.is_zero() {
                return false;
            }
            if !c.is_zero() {
                for (x, y) in rest.iter_mut().zip(&self.rows[i]) {
                    *x -= &c * y;
                }
            }
        }
        true
    }

    pub fn contains_lattice(&self, other: &IntLattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &IntLattice) -> IntLattice {
        let gens: Vec<Vec<Int>> = self.rows.iter().chain(&other.rows).cloned().collect();
        IntLattice::from_generators(&gens, self.rank()).unwrap()
    }

    /// `{ x in Q^r : <x, y> in Z for all y in M }`, which contains `Z^r`.
    pub fn dual(&self) -> FracLattice {
        let m: Vec<Vec<Rat>> =
            self.rows.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()).collect();
        let inv_t = transpose(&invert(&m));
        FracLattice::from_generators(&inv_t, self.rank())
    }

    /// Adds the given vectors to the lattice.
    pub fn extended(&self, extra: &[Vec<Int>]) -> IntLattice {
        let gens: Vec<Vec<Int>> = self.rows.iter().chain(extra).cloned().collect();
        IntLattice::from_generators(&gens, self.rank()).unwrap()
    }
}
