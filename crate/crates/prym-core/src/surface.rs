//! Concrete models of the quotient surfaces: the projective plane and del
//! Pezzo surfaces of degree 1..8 presented as blow-ups of the plane
//! (P^1 x P^1 is excluded). Each model carries its Picard lattice, canonical
//! and branch classes, Nikulin main invariant and the pullback lattice
//! NS(S) = <f^*H, f^*E_i> on the covering K3.

use serde::{Deserialize, Serialize};

use crate::lattice::{DivisorClass, GramLattice};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceKind {
    ProjectivePlane,
    DelPezzo(u8),
}

impl SurfaceKind {
    pub fn degree(&self) -> i128 {
        match self {
            SurfaceKind::ProjectivePlane => 9,
            SurfaceKind::DelPezzo(d) => *d as i128,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub picard: GramLattice,
    pub basis_names: Vec<String>,
    /// K_T in the fixed basis: -3H + E_1 + ... + E_{9-d} (just -3H on P^2).
    pub canonical: DivisorClass,
    /// Branch class B = -2 K_T.
    pub branch: DivisorClass,
    /// Nikulin main invariant (r, a, delta) of the covering involution.
    pub nikulin: (u32, u32, u8),
    /// NS(S) in the basis {f^*H, f^*E_i}: all pairings doubled.
    pub k3: GramLattice,
}

/// Shape of the fixed locus of the involution, per main invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedLocusShape {
    Empty,
    TwoEllipticCurves,
    GenusCurvePlusRationals { g: i128, k: i128 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedLocusDescription {
    pub shape: FixedLocusShape,
    /// B^2 = 4(10 - r).
    pub branch_self_intersection: i128,
    /// Whether (r, a, delta) arises from one of the surface models built by
    /// `make_surface` (advisory only; arbitrary invariants are accepted).
    pub from_supported_surface: bool,
}

/// Dimension of the linear system |C| on the quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LinearSystemDim {
    Exact(i128),
    /// C^2 + 1 - g(C) is only a lower bound: the h^0(omega_T|_C) correction
    /// term is not computed.
    LowerBoundWithTwist { bound: i128, note: String },
}

pub fn make_surface(kind: SurfaceKind) -> Result<SurfaceModel> {
    match kind {
        SurfaceKind::ProjectivePlane => Ok(SurfaceModel {
            kind,
            picard: GramLattice::diagonal(&[1]),
            basis_names: vec!["H".into()],
            canonical: DivisorClass::new(vec![-3]),
            branch: DivisorClass::new(vec![6]),
            nikulin: (1, 1, 1),
            k3: GramLattice::diagonal(&[2]),
        }),
        SurfaceKind::DelPezzo(d) => {
            if !(1..=8).contains(&d) {
                return Err(Error::UnsupportedSurface(format!(
                    "del Pezzo degree must lie in 1..8, got {d} \
                     (P^1 x P^1, the other degree-8 surface, is not supported: \
                     the basis presentation assumes a blow-up of P^2)"
                )));
            }
            let n_exc = (9 - d) as usize;
            let mut pic_entries = vec![1i128];
            pic_entries.extend(std::iter::repeat(-1).take(n_exc));
            let k3_entries: Vec<i128> = pic_entries.iter().map(|e| 2 * e).collect();
            let mut names = vec!["H".to_string()];
            names.extend((1..=n_exc).map(|i| format!("E{i}")));
            let mut canonical = vec![-3i128];
            canonical.extend(std::iter::repeat(1).take(n_exc));
            let branch: Vec<i128> = canonical.iter().map(|c| -2 * c).collect();
            let r = (10 - d) as u32;
            Ok(SurfaceModel {
                kind,
                picard: GramLattice::diagonal(&pic_entries),
                basis_names: names,
                canonical: DivisorClass::new(canonical),
                branch: DivisorClass::new(branch),
                nikulin: (r, r, 1),
                k3: GramLattice::diagonal(&k3_entries),
            })
        }
    }
}

/// Fixed-locus structure of an anti-symplectic involution with main
/// invariant (r, a, delta): empty for (10,10,0), two elliptic curves for
/// (10,8,0), otherwise a genus-g curve plus k rational curves with
/// g = 11 - (r+a)/2 and k = (r-a)/2.
pub fn fixed_locus_invariants(r: u32, a: u32, delta: u8) -> Result<FixedLocusDescription> {
    let b2 = 4 * (10 - r as i128);
    let supported = (r == 1 && a == 1 && delta == 1)
        || ((2..=9).contains(&r) && a == r && delta == 1);
    if (r, a, delta) == (10, 10, 0) {
        return Ok(FixedLocusDescription {
            shape: FixedLocusShape::Empty,
            branch_self_intersection: b2,
            from_supported_surface: supported,
        });
    }
    if (r, a, delta) == (10, 8, 0) {
        return Ok(FixedLocusDescription {
            shape: FixedLocusShape::TwoEllipticCurves,
            branch_self_intersection: b2,
            from_supported_surface: supported,
        });
    }
    if (r + a) % 2 != 0 {
        return Err(Error::UnrealizableInvariant(format!(
            "r + a = {} is odd",
            r + a
        )));
    }
    let g = 11 - ((r + a) / 2) as i128;
    if r < a {
        return Err(Error::UnrealizableInvariant(format!("r = {r} < a = {a}")));
    }
    let k = ((r - a) / 2) as i128;
    if g < 0 {
        return Err(Error::UnrealizableInvariant(format!(
            "genus formula gives g = {g} < 0"
        )));
    }
    Ok(FixedLocusDescription {
        shape: FixedLocusShape::GenusCurvePlusRationals { g, k },
        branch_self_intersection: b2,
        from_supported_surface: supported,
    })
}

impl SurfaceModel {
    pub fn rank(&self) -> usize {
        self.picard.rank()
    }

    /// Pairing in Pic(T); panics on length mismatch (callers hold classes in
    /// the model's own basis).
    pub fn pair(&self, u: &DivisorClass, v: &DivisorClass) -> i128 {
        self.picard.pair(u, v).expect("class length matches Picard rank")
    }

    pub fn anticanonical(&self) -> DivisorClass {
        self.canonical.scale(-1)
    }

    /// Build a class from the (a, b_1, ..., b_{9-d}) convention: aH - sum b_i E_i.
    pub fn class_from_ab(&self, a: i128, b: &[i128]) -> Result<DivisorClass> {
        if b.len() != self.rank() - 1 {
            return Err(Error::DimensionMismatch { expected: self.rank() - 1, got: b.len() });
        }
        let mut coords = vec![a];
        coords.extend(b.iter().map(|bi| -bi));
        Ok(DivisorClass::new(coords))
    }

    /// Arithmetic genus by adjunction: (C^2 + C.K)/2 + 1.
    pub fn genus_of(&self, c: &DivisorClass) -> i128 {
        let c2 = self.pair(c, c);
        let ck = self.pair(c, &self.canonical);
        // C^2 + C.K is even on these lattices (characteristic element)
        assert!((c2 + ck) % 2 == 0, "class not characteristic-consistent");
        (c2 + ck) / 2 + 1
    }

    /// Genus of the double cover D = f^*C: g(D) = 2 g(C) - C.K_T - 1.
    pub fn covering_genus(&self, c: &DivisorClass) -> i128 {
        2 * self.genus_of(c) - self.pair(c, &self.canonical) - 1
    }

    /// dim |C| = C^2 + 1 - g(C) when C.K_T < 0; with C.K_T >= 0 the twist
    /// term h^0(omega_T|_C) is left unresolved.
    pub fn linear_system_dim(&self, c: &DivisorClass) -> LinearSystemDim {
        let ck = self.pair(c, &self.canonical);
        let bound = self.pair(c, c) + 1 - self.genus_of(c);
        if ck < 0 {
            LinearSystemDim::Exact(bound)
        } else if ck == 0 {
            LinearSystemDim::LowerBoundWithTwist {
                bound,
                note: "C.K_T = 0: omega_T|_C may be trivial; h^0(omega_T|_C) unresolved".into(),
            }
        } else {
            LinearSystemDim::LowerBoundWithTwist {
                bound,
                note: "C.K_T > 0: Riemann-Roch lower bound only".into(),
            }
        }
    }

    /// f^*: same coefficient vector, reinterpreted in the doubled Gram.
    pub fn pullback_to_k3(&self, c: &DivisorClass) -> DivisorClass {
        c.clone()
    }
}
