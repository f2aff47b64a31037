//! Assembles the full hypothesis checklist for certifying a relative Prym
//! variety as irreducible symplectic: very-ampleness on both surfaces,
//! branch-degree bounds, the (C^2, C.B) = (4, 4) exclusion, 2-connectedness,
//! and the hyperelliptic clause; plus the dimension, Mukai vector, and
//! codimension bookkeeping.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::ample::{very_ample_on_k3, very_ample_on_quotient, VeryAmpleStatus, VeryAmpleVerdict};
use crate::effective::{classify_positivity, is_two_connected, ConnectednessVerdict};
use crate::lattice::{DivisorClass, Rat};
use crate::surface::{fixed_locus_invariants, FixedLocusShape, SurfaceKind, SurfaceModel};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum HyperellipticClause {
    /// B^2 > 0: non-hyperelliptic for free.
    Vacuous { b_squared: i128 },
    /// B^2 <= 0: needs an external non-hyperellipticity assertion.
    RequiresNonHyperelliptic { b_squared: i128 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub holds: bool,
    pub value: i128,
}

/// The conditions (a)-(d) of the underlying criterion, evaluated on nC.
/// With zero rational branch components (all supported surfaces), (a)
/// reduces to (nC).B > 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm5Conditions {
    pub a_positive_on_branch: bool,
    pub rational_branch_components: i128,
    pub b_not_four_four: bool,
    pub c_two_connected: bool,
    pub d_hyperelliptic: HyperellipticClause,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub cond1_very_ample_c: VeryAmpleVerdict,
    pub cond1_very_ample_d: VeryAmpleVerdict,
    pub cond2_cb_gt_2: BoundCheck,
    pub cond3_not44: BoundCheck,
    pub cond3_values: (i128, i128),
    pub cond4_two_connected: ConnectednessVerdict,
    pub cond5_hyperelliptic: HyperellipticClause,
    pub thm5_conds: Thm5Conditions,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    IrreducibleSymplectic,
    Inconclusive(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedExample {
    pub surface: SurfaceKind,
    pub divisor: DivisorClass,
    pub multiplier: i128,
    pub dimension: i128,
    /// (0, [D], 1 - g(D)) with D = f^*(nC).
    pub mukai_vector: (i128, DivisorClass, i128),
    pub verdict: Verdict,
    pub report: HypothesisReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PullbackLocus {
    Empty(String),
    Codim(Rat),
}

fn rational_branch_components(t: &SurfaceModel) -> i128 {
    let (r, a, delta) = t.nikulin;
    match fixed_locus_invariants(r, a, delta) {
        Ok(desc) => match desc.shape {
            FixedLocusShape::GenusCurvePlusRationals { k, .. } => k,
            _ => 0,
        },
        Err(_) => 0,
    }
}

pub fn hypothesis_report(t: &SurfaceModel, c: &DivisorClass, n: i128) -> Result<HypothesisReport> {
    if n < 1 {
        return Err(Error::InvalidArgument(format!("multiplier n = {n} < 1")));
    }
    if !classify_positivity(t, c).effective {
        return Err(Error::NotEffective(format!("{:?}", c.coords)));
    }
    let nc = c.scale(n);
    let cb = t.pair(&nc, &t.branch);
    let c2 = t.pair(&nc, &nc);
    let b2 = t.pair(&t.branch, &t.branch);
    let cond1_very_ample_c = very_ample_on_quotient(t, &nc);
    let cond1_very_ample_d = very_ample_on_k3(t, c, n)?;
    let cond2_cb_gt_2 = BoundCheck { holds: cb > 2, value: cb };
    let not44 = !(c2 == 4 && cb == 4);
    let cond4_two_connected = is_two_connected(t, &nc)?;
    let cond5 = if b2 > 0 {
        HyperellipticClause::Vacuous { b_squared: b2 }
    } else {
        HyperellipticClause::RequiresNonHyperelliptic { b_squared: b2 }
    };
    let k = rational_branch_components(t);
    let thm5_conds = Thm5Conditions {
        a_positive_on_branch: cb > 0,
        rational_branch_components: k,
        b_not_four_four: not44,
        c_two_connected: cond4_two_connected.two_connected,
        d_hyperelliptic: cond5.clone(),
    };
    Ok(HypothesisReport {
        cond1_very_ample_c,
        cond1_very_ample_d,
        cond2_cb_gt_2,
        cond3_not44: BoundCheck { holds: not44, value: c2 },
        cond3_values: (c2, cb),
        cond4_two_connected,
        cond5_hyperelliptic: cond5,
        thm5_conds,
    })
}

/// n^2 C^2 + n (C.B)/2, asserted against 2 (g(D) - g(C)) for nC.
pub fn prym_dimension(t: &SurfaceModel, c: &DivisorClass, n: i128) -> i128 {
    let c2 = t.pair(c, c);
    let cb = t.pair(c, &t.branch);
    assert!(cb % 2 == 0, "C.B must be even on the supported lattices");
    let dim = n * n * c2 + n * cb / 2;
    let nc = c.scale(n);
    let via_genus = 2 * (t.covering_genus(&nc) - t.genus_of(&nc));
    assert_eq!(dim, via_genus, "dimension formula inconsistency");
    dim
}

/// Codimension of the locus of curves in |C| whose pullback is integral
/// for the wrong reason (the half-class stratum): empty when no half-class
/// can exist (C^2 odd), otherwise C^2/4 + (C.B)/4 - 1 as an exact rational.
pub fn non_integral_pullback_codim(t: &SurfaceModel, c: &DivisorClass) -> Result<PullbackLocus> {
    let c2 = t.pair(c, c);
    let cb = t.pair(c, &t.branch);
    if c2 <= 0 || cb <= 0 {
        return Err(Error::InvalidArgument(format!("need C^2 > 0 and C.B > 0, got {c2}, {cb}")));
    }
    if c2 % 2 != 0 {
        return Ok(PullbackLocus::Empty(
            "no candidate half-class: C^2/2 is not an integer".into(),
        ));
    }
    Ok(PullbackLocus::Codim(
        Ratio::new(c2, 4) + Ratio::new(cb, 4) - Ratio::from_integer(1),
    ))
}

/// Milnor number of a contact point of the given order with the branch
/// curve: order - 1.
pub fn milnor_number(contact_order: i128) -> Result<i128> {
    if contact_order < 1 {
        return Err(Error::InvalidArgument(format!("contact order {contact_order} < 1")));
    }
    Ok(contact_order - 1)
}

pub fn verdict(t: &SurfaceModel, c: &DivisorClass, n: i128) -> Result<CertifiedExample> {
    verdict_with(t, c, n, false)
}

/// Full certification. `assert_non_hyperelliptic` discharges the clause
/// for B^2 <= 0 cases only; it is never needed on the supported surfaces.
pub fn verdict_with(
    t: &SurfaceModel,
    c: &DivisorClass,
    n: i128,
    assert_non_hyperelliptic: bool,
) -> Result<CertifiedExample> {
    let report = hypothesis_report(t, c, n)?;
    let mut failures = Vec::new();
    match &report.cond1_very_ample_c.status {
        VeryAmpleStatus::VeryAmple => {}
        VeryAmpleStatus::NotVeryAmple(r) => failures.push(format!("C not very ample: {r}")),
        VeryAmpleStatus::NotDetermined(r) => {
            failures.push(format!("very-ampleness of C undetermined: {r}"))
        }
    }
    match &report.cond1_very_ample_d.status {
        VeryAmpleStatus::VeryAmple => {}
        VeryAmpleStatus::NotVeryAmple(r) => failures.push(format!("D not very ample: {r}")),
        VeryAmpleStatus::NotDetermined(r) => {
            failures.push(format!("very-ampleness of D undetermined: {r}"))
        }
    }
    if !report.cond2_cb_gt_2.holds {
        failures.push(format!("C.B = {} is not > 2", report.cond2_cb_gt_2.value));
    }
    if !report.cond3_not44.holds {
        failures.push("C^2 = 4 and C.B = 4".into());
    }
    if !report.cond4_two_connected.two_connected {
        let detail = match &report.cond4_two_connected.witness {
            Some((c1, c2, p)) => format!("{:?} + {:?} with pairing {p}", c1.coords, c2.coords),
            None => "no witness".into(),
        };
        failures.push(format!("|C| is not 2-connected: {detail}"));
    }
    if let HyperellipticClause::RequiresNonHyperelliptic { b_squared } =
        report.cond5_hyperelliptic
    {
        if !assert_non_hyperelliptic {
            failures.push(format!(
                "B^2 = {b_squared} <= 0: non-hyperellipticity of |C| not asserted"
            ));
        }
    }
    let nc = c.scale(n);
    let dimension = prym_dimension(t, c, n);
    let d = t.pullback_to_k3(&nc);
    let genus_d = t.covering_genus(&nc);
    let verdict = if failures.is_empty() {
        Verdict::IrreducibleSymplectic
    } else {
        Verdict::Inconclusive(failures)
    };
    Ok(CertifiedExample {
        surface: t.kind,
        divisor: c.clone(),
        multiplier: n,
        dimension,
        mukai_vector: (0, d, 1 - genus_d),
        verdict,
        report,
    })
}
