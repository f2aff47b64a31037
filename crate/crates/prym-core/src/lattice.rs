//! Exact arithmetic on integer lattices with a symmetric or skew-symmetric
//! bilinear form: pairings, Smith normal form, discriminant groups,
//! 2-elementarity, parity and signature.
//!
//! Arithmetic is `i128` with overflow checks enabled crate-wide; exact
//! rationals (`num_rational::Ratio<i128>`) are used wherever denominators
//! appear. Floating point is forbidden in this module.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Rat = Ratio<i128>;

/// Integer coefficient vector in the fixed basis of an ambient lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    pub coords: Vec<i128>,
}

impl DivisorClass {
    pub fn new(coords: Vec<i128>) -> Self {
        DivisorClass { coords }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass { coords: vec![0; rank] }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &DivisorClass) -> DivisorClass {
        DivisorClass::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, s: i128) -> DivisorClass {
        DivisorClass::new(self.coords.iter().map(|a| s * a).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryKind {
    Symmetric,
    Skew,
}

/// A finite-rank lattice presented by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramLattice {
    rank: usize,
    gram: Vec<Vec<i128>>,
    kind: SymmetryKind,
}

impl GramLattice {
    pub fn symmetric(gram: Vec<Vec<i128>>) -> Result<Self> {
        Self::with_kind(gram, SymmetryKind::Symmetric)
    }

    pub fn skew(gram: Vec<Vec<i128>>) -> Result<Self> {
        Self::with_kind(gram, SymmetryKind::Skew)
    }

    fn with_kind(gram: Vec<Vec<i128>>, kind: SymmetryKind) -> Result<Self> {
        let rank = gram.len();
        for row in &gram {
            if row.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: row.len() });
            }
        }
        for i in 0..rank {
            for j in 0..rank {
                let ok = match kind {
                    SymmetryKind::Symmetric => gram[i][j] == gram[j][i],
                    SymmetryKind::Skew => gram[i][j] == -gram[j][i],
                };
                if !ok {
                    return Err(Error::InvalidArgument(format!(
                        "Gram matrix is not {kind:?} at ({i},{j})"
                    )));
                }
            }
        }
        Ok(GramLattice { rank, gram, kind })
    }

    pub fn diagonal(entries: &[i128]) -> Self {
        let rank = entries.len();
        let mut gram = vec![vec![0; rank]; rank];
        for (i, &e) in entries.iter().enumerate() {
            gram[i][i] = e;
        }
        GramLattice { rank, gram, kind: SymmetryKind::Symmetric }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &Vec<Vec<i128>> {
        &self.gram
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    /// `u^T * gram * v`, exactly.
    pub fn pair(&self, u: &DivisorClass, v: &DivisorClass) -> Result<i128> {
        if u.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: u.len() });
        }
        if v.len() != self.rank {
            return Err(Error::DimensionMismatch { expected: self.rank, got: v.len() });
        }
        let mut acc: i128 = 0;
        for i in 0..self.rank {
            if u.coords[i] == 0 {
                continue;
            }
            let mut row = 0i128;
            for j in 0..self.rank {
                row += self.gram[i][j] * v.coords[j];
            }
            acc += u.coords[i] * row;
        }
        Ok(acc)
    }

    pub fn det(&self) -> i128 {
        det_bareiss(&self.gram)
    }

    /// Elementary divisors of the Gram matrix, 2-elementarity and the parity
    /// of the discriminant quadratic form.
    pub fn discriminant_data(&self) -> Result<DiscriminantData> {
        if self.det() == 0 {
            return Err(Error::DegenerateGram);
        }
        let snf = smith_normal_form(&self.gram);
        let factors: Vec<i128> = (0..self.rank)
            .filter_map(|i| {
                let d = snf.d[i][i].abs();
                if d > 1 {
                    Some(d)
                } else {
                    None
                }
            })
            .collect();
        let is_two_elementary = factors.iter().all(|&d| d == 2);
        let a = if is_two_elementary { factors.len() } else { 0 };
        let delta = if !is_two_elementary {
            None
        } else if a == 0 {
            // trivial discriminant group, q takes only the value 0
            Some(0)
        } else {
            // Generators of L^vee / L: column i of V divided by d_i, for the
            // nontrivial invariant factors. Parity 0 iff q lands in Z/2Z on
            // every element of the (Z/2)^a group.
            let gen_cols: Vec<usize> = (0..self.rank)
                .filter(|&i| snf.d[i][i].abs() > 1)
                .collect();
            let gens: Vec<Vec<Rat>> = gen_cols
                .iter()
                .map(|&c| {
                    let d = snf.d[c][c].abs();
                    (0..self.rank)
                        .map(|r| Rat::new(snf.v[r][c], d))
                        .collect()
                })
                .collect();
            let mut parity = 0u8;
            'subsets: for mask in 1u64..(1u64 << a) {
                let mut x = vec![Rat::zero(); self.rank];
                for (bit, g) in gens.iter().enumerate() {
                    if mask & (1 << bit) != 0 {
                        for (xi, gi) in x.iter_mut().zip(g) {
                            *xi += gi;
                        }
                    }
                }
                let q = self.quadratic_value(&x);
                // q lives in Q/2Z; it lies in Z/2Z iff it is an integer
                if !q.is_integer() {
                    parity = 1;
                    break 'subsets;
                }
            }
            Some(parity)
        };
        Ok(DiscriminantData {
            invariant_factors: factors,
            is_two_elementary,
            a,
            delta,
        })
    }

    fn quadratic_value(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..self.rank {
            for j in 0..self.rank {
                acc += x[i] * Rat::from_integer(self.gram[i][j]) * x[j];
            }
        }
        acc
    }

    /// Inertia (p, n) with p + n = rank, by exact rational congruence
    /// diagonalization. Symmetric nondegenerate lattices only.
    pub fn signature(&self) -> Result<(usize, usize)> {
        if self.kind != SymmetryKind::Symmetric {
            return Err(Error::InvalidArgument("signature requires a symmetric form".into()));
        }
        let n = self.rank;
        let mut a: Vec<Vec<Rat>> = self
            .gram
            .iter()
            .map(|row| row.iter().map(|&e| Rat::from_integer(e)).collect())
            .collect();
        let mut pos = 0usize;
        let mut neg = 0usize;
        for k in 0..n {
            if a[k][k].is_zero() {
                // bring a nonzero entry onto the diagonal by congruence
                if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                    a.swap(k, j);
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // rows k and j: add row j to row k, column j to column k;
                    // the new (k,k) entry is 2*a[k][j] since both diagonals vanish
                    for c in 0..n {
                        let t = a[j][c];
                        a[k][c] += t;
                    }
                    for r in 0..n {
                        let t = a[r][j];
                        a[r][k] += t;
                    }
                } else {
                    return Err(Error::DegenerateGram);
                }
            }
            let pivot = a[k][k];
            if pivot.is_zero() {
                return Err(Error::DegenerateGram);
            }
            if pivot.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for j in k + 1..n {
                if a[j][k].is_zero() {
                    continue;
                }
                let f = a[j][k] / pivot;
                for c in 0..n {
                    let t = f * a[k][c];
                    a[j][c] -= t;
                }
                for r in 0..n {
                    let t = f * a[r][k];
                    a[r][j] -= t;
                }
            }
        }
        Ok((pos, neg))
    }
}

/// Invariant factors > 1 of a lattice plus the Nikulin-style (a, delta) data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantData {
    pub invariant_factors: Vec<i128>,
    pub is_two_elementary: bool,
    pub a: usize,
    /// `Some(0)` / `Some(1)` for 2-elementary lattices, `None` otherwise —
    /// parity is undefined when the discriminant group is not (Z/2)^a.
    pub delta: Option<u8>,
}

/// `u * m * v = d`, `d` diagonal with successive divisibility, `u`, `v`
/// unimodular.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub d: Vec<Vec<i128>>,
    pub u: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
}

pub fn identity(n: usize) -> Vec<Vec<i128>> {
    let mut m = vec![vec![0; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![0i128; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &[Vec<i128>], x: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, c)| r * c).sum())
        .collect()
}

/// Fraction-free determinant (Bareiss); exact for any square integer matrix.
pub fn det_bareiss(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Smith normal form with transforms, over `i128`.
pub fn smith_normal_form(m: &[Vec<i128>]) -> SmithDecomposition {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let add_row = |a: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, src: usize, dst: usize, f: i128| {
        for j in 0..cols {
            a[dst][j] += f * a[src][j];
        }
        for j in 0..rows {
            u[dst][j] += f * u[src][j];
        }
    };
    let add_col = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, src: usize, dst: usize, f: i128| {
        for row in a.iter_mut() {
            row[dst] += f * row[src];
        }
        for row in v.iter_mut() {
            row[dst] += f * row[src];
        }
    };

    let mut t = 0usize;
    while t < rows.min(cols) {
        // find a pivot in the trailing block
        let mut pivot = None;
        'search: for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            a.swap(pi, t);
            u.swap(pi, t);
        }
        if pj != t {
            for row in a.iter_mut() {
                row.swap(pj, t);
            }
            for row in v.iter_mut() {
                row.swap(pj, t);
            }
        }
        loop {
            // clear column t
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t] != 0 {
                    let q = a[i][t].div_euclid(a[t][t]);
                    add_row(&mut a, &mut u, t, i, -q);
                    if a[i][t] != 0 {
                        // remainder smaller than pivot: swap up and restart
                        a.swap(i, t);
                        u.swap(i, t);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // clear row t
            for j in t + 1..cols {
                if a[t][j] != 0 {
                    let q = a[t][j].div_euclid(a[t][t]);
                    add_col(&mut a, &mut v, t, j, -q);
                    if a[t][j] != 0 {
                        for row in a.iter_mut() {
                            row.swap(j, t);
                        }
                        for row in v.iter_mut() {
                            row.swap(j, t);
                        }
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let p = a[t][t];
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| a[i][j] % p != 0);
            match offender {
                Some((i, _)) => {
                    add_row(&mut a, &mut u, i, t, 1);
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for j in 0..cols {
                a[t][j] = -a[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }
    SmithDecomposition { d: a, u, v }
}

/// Integral basis of the kernel of an integer matrix, via Smith normal form.
/// The returned vectors span a saturated sublattice.
pub fn integer_kernel(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let snf = smith_normal_form(m);
    let r = (0..rows.min(cols)).take_while(|&i| snf.d[i][i] != 0).count();
    (r..cols)
        .map(|j| (0..cols).map(|i| snf.v[i][j]).collect())
        .collect()
}

/// Solve `B x = c` for integer `x`, where the columns of `B` are linearly
/// independent. Returns `None` when no integral solution exists.
pub fn solve_integer(b_cols: &[Vec<i128>], c: &[i128]) -> Option<Vec<i128>> {
    let n = c.len();
    let k = b_cols.len();
    let mut b = vec![vec![0i128; k]; n];
    for (j, col) in b_cols.iter().enumerate() {
        for i in 0..n {
            b[i][j] = col[i];
        }
    }
    let snf = smith_normal_form(&b);
    let uc = mat_vec(&snf.u, c);
    let mut z = vec![0i128; k];
    for i in 0..k {
        let d = snf.d[i][i];
        if d == 0 {
            if uc[i] != 0 {
                return None;
            }
        } else {
            if uc[i] % d != 0 {
                return None;
            }
            z[i] = uc[i] / d;
        }
    }
    for entry in uc.iter().skip(k) {
        if *entry != 0 {
            return None;
        }
    }
    Some(mat_vec(&snf.v, &z))
}
