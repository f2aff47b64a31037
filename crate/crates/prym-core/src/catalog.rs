//! Machine-readable certification records and the golden example table:
//! each record carries the surface, divisor, recomputable numerics, the
//! per-condition outcomes, and the final verdict; the golden table pins the
//! known example families to their expected dimensions and verdicts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ample::VeryAmpleStatus;
use crate::lattice::DivisorClass;
use crate::pipeline::{verdict_with, HyperellipticClause, Verdict};
use crate::surface::{make_surface, LinearSystemDim, SurfaceKind, SurfaceModel};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDescriptor {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u8>,
    pub nikulin: [u32; 3],
}

/// Divisor in the input convention: aH - sum b_i E_i, scaled by n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub a: i128,
    pub b: Vec<i128>,
    pub n: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Numerics {
    pub c2: i128,
    pub cb: i128,
    pub genus_c: i128,
    pub genus_d: i128,
    pub dim_lin_sys: i128,
    pub dim_lin_sys_exact: bool,
    pub prym_dim: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub status: String, // pass | fail | undetermined
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CatalogRecord {
    pub schema_version: u32,
    pub surface: SurfaceDescriptor,
    pub divisor: DivisorEntry,
    pub numerics: Numerics,
    pub checks: BTreeMap<String, CheckOutcome>,
    pub verdict: String,
    pub tool_version: String,
}

pub fn surface_id(kind: SurfaceKind) -> String {
    match kind {
        SurfaceKind::ProjectivePlane => "p2".into(),
        SurfaceKind::DelPezzo(d) => format!("dp{d}"),
    }
}

pub fn parse_surface_id(s: &str) -> Result<SurfaceKind> {
    if s == "p2" {
        return Ok(SurfaceKind::ProjectivePlane);
    }
    if let Some(d) = s.strip_prefix("dp") {
        if let Ok(d) = d.parse::<u8>() {
            if (1..=8).contains(&d) {
                return Ok(SurfaceKind::DelPezzo(d));
            }
        }
    }
    Err(Error::UnsupportedSurface(format!("unknown surface id '{s}' (use p2 or dp1..dp8)")))
}

fn va_outcome(status: &VeryAmpleStatus) -> CheckOutcome {
    match status {
        VeryAmpleStatus::VeryAmple => {
            CheckOutcome { status: "pass".into(), detail: "very ample".into() }
        }
        VeryAmpleStatus::NotVeryAmple(r) => {
            CheckOutcome { status: "fail".into(), detail: r.clone() }
        }
        VeryAmpleStatus::NotDetermined(r) => {
            CheckOutcome { status: "undetermined".into(), detail: r.clone() }
        }
    }
}

fn bool_outcome(ok: bool, detail: String) -> CheckOutcome {
    CheckOutcome { status: if ok { "pass" } else { "fail" }.to_string(), detail }
}

fn divisor_numerics(t: &SurfaceModel, c: &DivisorClass, n: i128) -> Numerics {
    let nc = c.scale(n);
    let (dim_lin_sys, exact) = match t.linear_system_dim(&nc) {
        LinearSystemDim::Exact(v) => (v, true),
        LinearSystemDim::LowerBoundWithTwist { bound, .. } => (bound, false),
    };
    Numerics {
        c2: t.pair(&nc, &nc),
        cb: t.pair(&nc, &t.branch),
        genus_c: t.genus_of(&nc),
        genus_d: t.covering_genus(&nc),
        dim_lin_sys,
        dim_lin_sys_exact: exact,
        prym_dim: 2 * (t.covering_genus(&nc) - t.genus_of(&nc)),
    }
}

pub fn make_record(
    t: &SurfaceModel,
    c: &DivisorClass,
    n: i128,
    assert_non_hyperelliptic: bool,
) -> Result<CatalogRecord> {
    let ex = verdict_with(t, c, n, assert_non_hyperelliptic)?;
    let rep = &ex.report;
    let mut checks = BTreeMap::new();
    checks.insert("veryAmpleC".into(), va_outcome(&rep.cond1_very_ample_c.status));
    checks.insert("veryAmpleD".into(), va_outcome(&rep.cond1_very_ample_d.status));
    checks.insert(
        "cbGt2".into(),
        bool_outcome(rep.cond2_cb_gt_2.holds, format!("C.B = {}", rep.cond2_cb_gt_2.value)),
    );
    checks.insert(
        "not44".into(),
        bool_outcome(
            rep.cond3_not44.holds,
            format!("(C^2, C.B) = {:?}", rep.cond3_values),
        ),
    );
    checks.insert(
        "twoConnected".into(),
        bool_outcome(
            rep.cond4_two_connected.two_connected,
            match &rep.cond4_two_connected.witness {
                Some((_, _, p)) => format!("minimal decomposition pairing {p}"),
                None => "no effective decomposition".into(),
            },
        ),
    );
    checks.insert(
        "hyperellipticClause".into(),
        match &rep.cond5_hyperelliptic {
            HyperellipticClause::Vacuous { b_squared } => CheckOutcome {
                status: "pass".into(),
                detail: format!("vacuous, B^2 = {b_squared} > 0"),
            },
            HyperellipticClause::RequiresNonHyperelliptic { b_squared } => CheckOutcome {
                status: if assert_non_hyperelliptic { "pass" } else { "undetermined" }.into(),
                detail: format!("B^2 = {b_squared} <= 0"),
            },
        },
    );
    let verdict = match &ex.verdict {
        Verdict::IrreducibleSymplectic => "IrreducibleSymplectic".to_string(),
        Verdict::Inconclusive(_) => "Inconclusive".to_string(),
    };
    Ok(CatalogRecord {
        schema_version: SCHEMA_VERSION,
        surface: SurfaceDescriptor {
            kind: surface_id(t.kind),
            degree: match t.kind {
                SurfaceKind::DelPezzo(d) => Some(d),
                SurfaceKind::ProjectivePlane => None,
            },
            nikulin: [t.nikulin.0, t.nikulin.1, t.nikulin.2 as u32],
        },
        divisor: DivisorEntry {
            a: c.coords[0],
            b: c.coords[1..].iter().map(|x| -x).collect(),
            n,
        },
        numerics: divisor_numerics(t, c, n),
        checks,
        verdict,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Recompute the numerics of a record from its surface and divisor fields
/// and compare; the list of mismatched field names is empty on success.
pub fn self_check(record: &CatalogRecord) -> Result<Vec<String>> {
    let kind = parse_surface_id(&record.surface.kind)?;
    let t = make_surface(kind)?;
    let c = t.class_from_ab(record.divisor.a, &record.divisor.b)?;
    let fresh = divisor_numerics(&t, &c, record.divisor.n);
    let mut diffs = Vec::new();
    let got = &record.numerics;
    for (name, a, b) in [
        ("c2", fresh.c2, got.c2),
        ("cb", fresh.cb, got.cb),
        ("genusC", fresh.genus_c, got.genus_c),
        ("genusD", fresh.genus_d, got.genus_d),
        ("dimLinSys", fresh.dim_lin_sys, got.dim_lin_sys),
        ("prymDim", fresh.prym_dim, got.prym_dim),
    ] {
        if a != b {
            diffs.push(format!("{name}: recomputed {a}, stored {b}"));
        }
    }
    if fresh.dim_lin_sys_exact != got.dim_lin_sys_exact {
        diffs.push("dimLinSysExact".into());
    }
    Ok(diffs)
}

/// One pinned example: surface, divisor in (a, b) form, multiplier, the
/// expected Prym dimension and whether certification must succeed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub id: String,
    pub surface: SurfaceKind,
    pub a: i128,
    pub b: Vec<i128>,
    pub n: i128,
    pub expected_dim: i128,
    pub expect_certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenResult {
    pub row: GoldenRow,
    pub computed_dim: i128,
    pub computed_verdict: String,
    pub matches: bool,
}

/// The pinned example families: plane curves of degree 3..6, anticanonical
/// classes on del Pezzo surfaces of degree 3..8, the 4H - 2E_1 - sum E_i
/// family for all degrees and multipliers 1..3, and the double-anticanonical
/// family -2nK (certified exactly when d >= 2 or n >= 2).
pub fn golden_rows() -> Vec<GoldenRow> {
    let mut rows = Vec::new();
    for n in 3..=6i128 {
        rows.push(GoldenRow {
            id: format!("p2 {n}H"),
            surface: SurfaceKind::ProjectivePlane,
            a: 1,
            b: vec![],
            n,
            expected_dim: n * n + 3 * n,
            expect_certified: true,
        });
    }
    for d in 3..=8u8 {
        rows.push(GoldenRow {
            id: format!("dp{d} -K"),
            surface: SurfaceKind::DelPezzo(d),
            a: 3,
            b: vec![1; (9 - d) as usize],
            n: 1,
            expected_dim: 2 * d as i128,
            expect_certified: true,
        });
    }
    for d in 1..=8u8 {
        for n in 1..=3i128 {
            let mut b = vec![1i128; (9 - d) as usize];
            b[0] = 2;
            rows.push(GoldenRow {
                id: format!("dp{d} 4H-2E1-sumE n={n}"),
                surface: SurfaceKind::DelPezzo(d),
                a: 4,
                b,
                n,
                expected_dim: n * n * (4 + d as i128) + n * (2 + d as i128),
                expect_certified: true,
            });
        }
    }
    for d in 1..=8u8 {
        for n in 1..=2i128 {
            rows.push(GoldenRow {
                id: format!("dp{d} -{}K", 2 * n),
                surface: SurfaceKind::DelPezzo(d),
                a: 6 * n,
                b: vec![2 * n; (9 - d) as usize],
                n: 1,
                expected_dim: 2 * n * (2 * n + 1) * d as i128,
                expect_certified: d >= 2 || n >= 2,
            });
        }
    }
    rows
}

pub fn run_golden() -> Result<Vec<GoldenResult>> {
    golden_rows()
        .into_iter()
        .map(|row| {
            let t = make_surface(row.surface)?;
            let c = t.class_from_ab(row.a, &row.b)?;
            let ex = verdict_with(&t, &c, row.n, false)?;
            let certified = ex.verdict == Verdict::IrreducibleSymplectic;
            let computed_verdict = match &ex.verdict {
                Verdict::IrreducibleSymplectic => "IrreducibleSymplectic".to_string(),
                Verdict::Inconclusive(reasons) => format!("Inconclusive({})", reasons.join("; ")),
            };
            let matches = ex.dimension == row.expected_dim && certified == row.expect_certified;
            Ok(GoldenResult { computed_dim: ex.dimension, computed_verdict, matches, row })
        })
        .collect()
}
