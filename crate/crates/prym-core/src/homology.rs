//! Integer-homology model of a double cover of curves with involution:
//! the skew intersection lattice of the covering curve, the anti-invariant
//! sublattice, Picard-Lefschetz transvections along vanishing cycles, and
//! the parity obstruction that appears when the cover has only two branch
//! points.
//!
//! Basis ordering is (beta_1..beta_2l, ibeta_1..ibeta_2l, delta_1..delta_2m):
//! two swapped symplectic handle blocks and a chain of anti-invariant
//! vanishing cycles over the branch points (the dependent last cycle
//! delta_{2m+1} is omitted).

use serde::{Deserialize, Serialize};

use crate::lattice::{
    integer_kernel, mat_vec, smith_normal_form, solve_integer, DivisorClass, GramLattice,
};
use crate::{Error, Result};

pub type CycleClass = DivisorClass;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricHomologyModel {
    pub l: usize,
    pub m: usize,
    pub gram: GramLattice,
    pub involution: Vec<Vec<i128>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenerationVerdict {
    Generates,
    /// Full rank but a proper sublattice; the index is the product of the
    /// invariant factors.
    FiniteIndex(i128),
    InfiniteIndex { rank: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParityObstruction {
    EvenForm,
    OddPairingWitness(CycleClass, CycleClass, i128),
}

pub fn build_model(l: i64, m: i64) -> Result<SymmetricHomologyModel> {
    if l < 0 || m < 0 {
        return Err(Error::InvalidArgument(format!("l = {l}, m = {m} must be >= 0")));
    }
    let (l, m) = (l as usize, m as usize);
    let rank = 4 * l + 2 * m;
    let mut g = vec![vec![0i128; rank]; rank];
    // standard symplectic blocks on the beta and ibeta handles
    for block in 0..2 {
        let off = 2 * l * block;
        for j in 0..l {
            g[off + 2 * j][off + 2 * j + 1] = 1;
            g[off + 2 * j + 1][off + 2 * j] = -1;
        }
    }
    // chain block: consecutive deltas share one fixed point
    let off = 4 * l;
    for k in 0..2 * m {
        if k + 1 < 2 * m {
            g[off + k][off + k + 1] = 1;
            g[off + k + 1][off + k] = -1;
        }
    }
    let mut inv = vec![vec![0i128; rank]; rank];
    for j in 0..2 * l {
        inv[j][2 * l + j] = 1;
        inv[2 * l + j][j] = 1;
    }
    for k in 0..2 * m {
        inv[off + k][off + k] = -1;
    }
    Ok(SymmetricHomologyModel { l, m, gram: GramLattice::skew(g)?, involution: inv })
}

impl SymmetricHomologyModel {
    pub fn rank(&self) -> usize {
        4 * self.l + 2 * self.m
    }

    /// Genus of the covering curve.
    pub fn genus(&self) -> usize {
        2 * self.l + self.m
    }

    pub fn fixed_points(&self) -> usize {
        2 * self.m + 2
    }

    pub fn pair(&self, x: &CycleClass, y: &CycleClass) -> Result<i128> {
        self.gram.pair(x, y)
    }

    pub fn apply_involution(&self, c: &CycleClass) -> Result<CycleClass> {
        if c.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), got: c.len() });
        }
        Ok(CycleClass::new(mat_vec(&self.involution, &c.coords)))
    }

    pub fn is_anti_invariant(&self, c: &CycleClass) -> Result<bool> {
        Ok(self.apply_involution(c)?.add(c).is_zero())
    }

    /// Basis vector helpers, using the fixed ordering.
    pub fn beta(&self, j: usize) -> CycleClass {
        self.unit(j - 1)
    }

    pub fn ibeta(&self, j: usize) -> CycleClass {
        self.unit(2 * self.l + j - 1)
    }

    pub fn delta(&self, k: usize) -> CycleClass {
        self.unit(4 * self.l + k - 1)
    }

    fn unit(&self, idx: usize) -> CycleClass {
        let mut c = CycleClass::zero(self.rank());
        c.coords[idx] = 1;
        c
    }
}

/// Integral basis of the anti-invariant sublattice ker(1 + involution),
/// via Smith normal form (the kernel is saturated).
pub fn anti_invariant_sublattice(model: &SymmetricHomologyModel) -> Vec<CycleClass> {
    let mut one_plus = model.involution.clone();
    for (i, row) in one_plus.iter_mut().enumerate() {
        row[i] += 1;
    }
    integer_kernel(&one_plus).into_iter().map(CycleClass::new).collect()
}

/// The canonical anti-invariant basis {beta_j - ibeta_j} followed by the
/// deltas; spans the same lattice as the kernel basis (tested), and keeps
/// parity witnesses readable.
fn anti_invariant_canonical(model: &SymmetricHomologyModel) -> Vec<CycleClass> {
    let mut out = Vec::with_capacity(2 * model.l + 2 * model.m);
    for j in 1..=2 * model.l {
        out.push(model.beta(j).sub(&model.ibeta(j)));
    }
    for k in 1..=2 * model.m {
        out.push(model.delta(k));
    }
    out
}

/// Picard-Lefschetz transvection c -> c + (c.alpha) alpha along an isotropic
/// vanishing cycle.
pub fn picard_lefschetz_twist(
    model: &SymmetricHomologyModel,
    alpha: &CycleClass,
    c: &CycleClass,
) -> Result<CycleClass> {
    if model.pair(alpha, alpha)? != 0 {
        return Err(Error::InvalidArgument("vanishing cycle must be isotropic".into()));
    }
    let coeff = model.pair(c, alpha)?;
    Ok(c.add(&alpha.scale(coeff)))
}

/// The composite T_{i(alpha)} after T_alpha; on anti-invariant classes it
/// acts as c -> c + (c.alpha)(alpha - i(alpha)).
pub fn twist_pair(
    model: &SymmetricHomologyModel,
    alpha: &CycleClass,
    c: &CycleClass,
) -> Result<CycleClass> {
    let ialpha = model.apply_involution(alpha)?;
    let once = picard_lefschetz_twist(model, alpha, c)?;
    picard_lefschetz_twist(model, &ialpha, &once)
}

/// Does the integer span of the cycles equal the full anti-invariant
/// sublattice? Each cycle must itself be anti-invariant.
pub fn generates_anti_invariant(
    model: &SymmetricHomologyModel,
    cycles: &[CycleClass],
) -> Result<GenerationVerdict> {
    let kernel = anti_invariant_sublattice(model);
    let expected = kernel.len();
    let kernel_cols: Vec<Vec<i128>> = kernel.iter().map(|k| k.coords.clone()).collect();
    // coordinates of each cycle in the kernel basis
    let mut coord_cols: Vec<Vec<i128>> = Vec::with_capacity(cycles.len());
    for c in cycles {
        if !model.is_anti_invariant(c)? {
            return Err(Error::NotAntiInvariant);
        }
        let x = if expected == 0 {
            Vec::new()
        } else {
            solve_integer(&kernel_cols, &c.coords).ok_or(Error::Inconsistency(
                "anti-invariant cycle outside the saturated kernel".into(),
            ))?
        };
        coord_cols.push(x);
    }
    if expected == 0 {
        return Ok(GenerationVerdict::Generates);
    }
    let mut mat = vec![vec![0i128; cycles.len()]; expected];
    for (j, col) in coord_cols.iter().enumerate() {
        for i in 0..expected {
            mat[i][j] = col[i];
        }
    }
    let snf = smith_normal_form(&mat);
    let factors: Vec<i128> = (0..expected.min(cycles.len()))
        .map(|i| snf.d[i][i])
        .take_while(|&d| d != 0)
        .collect();
    if factors.len() < expected {
        return Ok(GenerationVerdict::InfiniteIndex { rank: factors.len(), expected });
    }
    let index: i128 = factors.iter().map(|d| d.abs()).product();
    if index == 1 {
        Ok(GenerationVerdict::Generates)
    } else {
        Ok(GenerationVerdict::FiniteIndex(index))
    }
}

/// EvenForm iff the intersection form restricted to the anti-invariant
/// sublattice is even; scans the canonical basis so a witness, when present,
/// is a readable pair of deltas.
pub fn parity_obstruction(model: &SymmetricHomologyModel) -> ParityObstruction {
    let basis = anti_invariant_canonical(model);
    for (i, x) in basis.iter().enumerate() {
        for y in basis.iter().skip(i + 1) {
            let v = model.pair(x, y).expect("basis lengths match");
            if v % 2 != 0 {
                return ParityObstruction::OddPairingWitness(x.clone(), y.clone(), v);
            }
        }
    }
    ParityObstruction::EvenForm
}

/// Pushforward to the base curve: beta_j and ibeta_j both map to the j-th
/// basis vector of a rank-2l symplectic lattice, deltas map to zero. Sanity
/// tool only.
pub fn f_star(model: &SymmetricHomologyModel, c: &CycleClass) -> Result<CycleClass> {
    if c.len() != model.rank() {
        return Err(Error::DimensionMismatch { expected: model.rank(), got: c.len() });
    }
    let coords = (0..2 * model.l)
        .map(|j| c.coords[j] + c.coords[2 * model.l + j])
        .collect();
    Ok(CycleClass::new(coords))
}
