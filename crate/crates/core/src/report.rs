//! Machine-readable verification reports.
//!
//! `verify_paper` runs every audit the library implements — predicates on
//! the printed matrices, the classification identities, the invariant table
//! comparison, the derivation/automorphism family audit, the rival-list
//! comparison, and an orbit census summary — and assembles a deterministic
//! JSON report. A refuted or discrepant published claim is a finding, not a
//! tool failure: callers map it to exit code 2.

use crate::classify::{classify, compare_with_k, isomorphic, IsoResult};
use crate::derivations::claims::{verify_claimed_families, ClaimStatus};
use crate::derivations::gl3_order;
use crate::field::{Field, FieldDescriptor, FieldElement};
use crate::fixtures::{self, grid_to_msc};
use crate::invariants::{annihilator, center, derived_subalgebra};
use crate::linalg::Matrix;
use crate::msc::catalog::{self, Family};
use crate::msc::{matrix_to_strings, BasisChange, Msc, MscResult};
use crate::orbits;
use serde::Serialize;
use serde_json::{json, Value};
use num::traits::{One, Zero};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "VERIFIED")]
    Verified,
    #[serde(rename = "REFUTED")]
    Refuted,
    #[serde(rename = "DISCREPANCY")]
    Discrepancy,
    #[serde(rename = "PARTIAL")]
    Partial,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEntry {
    pub claim: String,
    /// Locator inside the source material being audited.
    pub source: String,
    pub computed: Value,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub input_digests: BTreeMap<String, String>,
    pub sections: BTreeMap<String, Vec<ReportEntry>>,
    pub summary: BTreeMap<String, usize>,
}

impl VerificationReport {
    pub fn has_findings(&self) -> bool {
        self.sections.values().flatten().any(|e| {
            matches!(e.status, Status::Refuted | Status::Discrepancy)
        })
    }

    /// Suggested process exit code: 0 all green, 2 when the audit recorded
    /// refuted or discrepant published claims.
    pub fn exit_code(&self) -> i32 {
        if self.has_findings() {
            2
        } else {
            0
        }
    }
}

fn digest(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect::<String>()
}

fn entry(claim: &str, source: &str, computed: Value, status: Status) -> ReportEntry {
    ReportEntry {
        claim: claim.to_string(),
        source: source.to_string(),
        computed,
        status,
        payload: None,
    }
}

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Verified
    } else {
        Status::Refuted
    }
}

fn lambda_samples() -> Vec<FieldElement> {
    [(-2i64, 1i64), (-1, 1), (0, 1), (1, 2), (1, 1), (2, 1)]
        .iter()
        .map(|&(n, d)| FieldElement::rational(n, d))
        .collect()
}

fn tower_i() -> (FieldDescriptor, FieldElement) {
    let desc = FieldDescriptor::tower(&[num::BigInt::from(-1)]).expect("valid tower");
    let i = match &desc {
        FieldDescriptor::Tower(g) => FieldElement::Tower {
            gens: g.clone(),
            coords: vec![num::BigRational::zero(), num::BigRational::one()],
        },
        _ => unreachable!(),
    };
    (desc, i)
}

/// All printed forms instantiated for the audits: (display name, algebra).
fn fixture_instances() -> Vec<(String, Msc)> {
    let fx = fixtures::canonical_fixture();
    let q = FieldDescriptor::Rationals;
    let (desc_i, i) = tower_i();
    let mut out = Vec::new();
    for grid in &fx.dim3 {
        let needs_i = grid.rows.iter().flatten().any(|c| c.contains('i'));
        if grid.parametric {
            let lams = if grid.name == "ZA3" {
                // the printed side condition is lambda != 0
                lambda_samples()
                    .into_iter()
                    .filter(|l| !l.is_zero())
                    .collect::<Vec<_>>()
            } else {
                lambda_samples()
            };
            for lam in lams {
                out.push((
                    format!("{}({})", grid.name, lam),
                    grid_to_msc(grid, Some(&lam), None, &q),
                ));
            }
        } else if needs_i {
            out.push((grid.name.clone(), grid_to_msc(grid, None, Some(&i), &desc_i)));
        } else {
            out.push((grid.name.clone(), grid_to_msc(grid, None, None, &q)));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Sections
// ---------------------------------------------------------------------------

fn section_anticommutativity() -> MscResult<Vec<ReportEntry>> {
    let mut out = Vec::new();
    for (name, alg) in fixture_instances() {
        let ok = alg.is_anticommutative();
        out.push(entry(
            &format!("{name} satisfies a^2 = 0"),
            "printed classification lists",
            json!(ok),
            verdict(ok),
        ));
    }
    let two = catalog::two_dim_canonical(&FieldDescriptor::Rationals);
    out.push(entry(
        "two-dimensional canonical algebra satisfies a^2 = 0",
        "two-dimensional normal form",
        json!(two.is_anticommutative()),
        verdict(two.is_anticommutative()),
    ));
    Ok(out)
}

fn section_jacobi() -> MscResult<Vec<ReportEntry>> {
    let fx = fixtures::canonical_fixture();
    let q = FieldDescriptor::Rationals;
    let mut out = Vec::new();
    // expected Lie members within the classification list
    for fam in Family::all() {
        let lams: Vec<Option<FieldElement>> = if fam.is_parametric() {
            lambda_samples().into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        for lam in lams {
            let alg = catalog::canonical_msc(fam, lam.as_ref(), &q);
            let is_lie = alg.is_lie()?;
            let expected = match fam {
                Family::A4 => lam.as_ref() == Some(&FieldElement::rational(-1, 1)),
                Family::A6 | Family::A8 | Family::A9 => true,
                _ => false,
            };
            let name = match &lam {
                Some(l) => format!("{}({})", fam.name(), l),
                None => fam.name().to_string(),
            };
            out.push(entry(
                &format!("{name} is {}", if expected { "Lie" } else { "non-Lie" }),
                "classification list with Lie markers",
                json!(is_lie),
                verdict(is_lie == expected),
            ));
        }
    }
    // printed jacobiator values
    for jv in &fx.jacobiator_values {
        for lam in [
            FieldElement::rational(1, 1),
            FieldElement::rational(2, 1),
            FieldElement::rational(-3, 1),
        ] {
            let grid = fx
                .dim3
                .iter()
                .find(|g| g.name == jv.family)
                .expect("fixture family");
            let alg = grid_to_msc(grid, Some(&lam), None, &q);
            let e = |k: usize| alg.basis_vector(k - 1);
            let got = alg.jacobiator(&e(jv.triple[0]), &e(jv.triple[1]), &e(jv.triple[2]))?;
            let want: Vec<FieldElement> = jv
                .value
                .iter()
                .map(|c| fixtures::cell_value(c, Some(&lam), None, &q))
                .collect();
            let ok = got == want;
            out.push(entry(
                &format!(
                    "jacobiator of {}({lam}) on (e1, e2, e3) equals the printed value",
                    jv.family
                ),
                "non-Lie checks in the classification argument",
                json!(got.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
                verdict(ok),
            ));
        }
    }
    Ok(out)
}

fn section_classification() -> MscResult<Vec<ReportEntry>> {
    let fx = fixtures::canonical_fixture();
    let q = FieldDescriptor::Rationals;
    let mut out = Vec::new();

    // transcription: code constructors match the printed grids entrywise
    let lam = FieldElement::rational(2, 1);
    for grid in &fx.dim3 {
        let built: Option<Matrix<FieldElement>> = match grid.name.as_str() {
            "A1" => Some(catalog::a1_matrix(&q.zero())),
            "A2" => Some(catalog::a2_matrix(&lam)),
            "A3" => Some(catalog::a3_matrix(&q.zero())),
            "A4" => Some(catalog::a4_matrix(&lam)),
            "A5" => Some(catalog::a5_matrix(&q.zero())),
            "A5param" => Some(catalog::a5_param_matrix(&lam)),
            "A6" => Some(catalog::a6_matrix(&lam)),
            "A7" => Some(catalog::a7_matrix(&lam)),
            "A8" => Some(catalog::a8_matrix(&q.zero())),
            "A9" => Some(catalog::a9_matrix(&q.zero())),
            "sl2" => Some(catalog::sl2_matrix(&q.zero())),
            "r3" => Some(catalog::r3_matrix(&lam)),
            "r3prime1" => Some(catalog::r3_prime_1_matrix(&q.zero())),
            "h3" => Some(catalog::h3_matrix(&q.zero())),
            "ZA1" => Some(catalog::za1_matrix(&q.zero())),
            "ZA2" => Some(catalog::za2_matrix(&q.zero())),
            "ZA3" => Some(catalog::za3_matrix(&lam)),
            "ZA4" => Some(catalog::za4_matrix(&q.zero())),
            "ZA5" => None, // needs i; checked below over the tower
            _ => None,
        };
        if let Some(m) = built {
            let lam_opt = if grid.parametric { Some(&lam) } else { None };
            let grid_m = fixtures::grid_to_matrix(&grid.rows, lam_opt, None, &q);
            let ok = m == grid_m;
            out.push(entry(
                &format!("constructor for {} matches the printed grid", grid.name),
                "printed matrices",
                json!(ok),
                verdict(ok),
            ));
        }
    }
    let (desc_i, i) = tower_i();
    let za5_grid = fx.dim3.iter().find(|g| g.name == "ZA5").unwrap();
    let za5_built = catalog::za5_matrix(&i);
    let za5_fix = fixtures::grid_to_matrix(&za5_grid.rows, None, Some(&i), &desc_i);
    out.push(entry(
        "constructor for ZA5 matches the printed grid",
        "printed matrices",
        json!(za5_built == za5_fix),
        verdict(za5_built == za5_fix),
    ));

    // printed identities
    let ident_checks: Vec<(&str, bool)> = {
        let l = FieldElement::rational(2, 1);
        vec![
            (
                "A6(lambda) equals r3(lambda) entrywise",
                catalog::a6_matrix(&l) == catalog::r3_matrix(&l),
            ),
            (
                "A8 equals r3'(1) entrywise",
                catalog::a8_matrix(&q.zero()) == catalog::r3_prime_1_matrix(&q.zero()),
            ),
            (
                "A9 equals h3 entrywise",
                catalog::a9_matrix(&q.zero()) == catalog::h3_matrix(&q.zero()),
            ),
            (
                "A5param(0) equals A4(1) entrywise",
                catalog::a5_param_matrix(&q.zero())
                    == catalog::a4_matrix(&FieldElement::rational(1, 1)),
            ),
        ]
    };
    for (claim, ok) in ident_checks {
        out.push(entry(claim, "printed identities", json!(ok), verdict(ok)));
    }

    // classification of every printed form; redundant families map to their
    // canonical class, which is recorded rather than judged
    for fam in Family::all() {
        let lams: Vec<Option<FieldElement>> = if fam.is_parametric() {
            lambda_samples().into_iter().map(Some).collect()
        } else {
            vec![None]
        };
        for lam in lams {
            let alg = catalog::canonical_msc(fam, lam.as_ref(), &q);
            let label = classify(&alg).map_err(|e| {
                crate::msc::MscError::Parse(format!("classification failed: {e}"))
            })?;
            let name = match &lam {
                Some(l) => format!("{}({})", fam.name(), l),
                None => fam.name().to_string(),
            };
            let stable = {
                let again = classify(&alg).map_err(|e| {
                    crate::msc::MscError::Parse(format!("classification failed: {e}"))
                })?;
                again.same_class(&label)
            };
            out.push(entry(
                &format!("classify({name}) is deterministic with a verified witness"),
                "classification list",
                json!({
                    "label": label.describe(),
                    "maps_to_other_printed_form": label.family != fam,
                }),
                verdict(stable),
            ));
        }
    }
    Ok(out)
}

fn section_isomorphisms() -> MscResult<Vec<ReportEntry>> {
    let fx = fixtures::canonical_fixture();
    let q = FieldDescriptor::Rationals;
    let mut out = Vec::new();

    // diagonal identity between A5 parameter values
    for (a, b) in [
        (FieldElement::rational(2, 1), FieldElement::rational(3, 1)),
        (FieldElement::rational(1, 1), FieldElement::rational(-1, 1)),
        (FieldElement::rational(1, 2), FieldElement::rational(5, 1)),
    ] {
        let a5b = Msc::new(3, catalog::a5_param_matrix(&b)).unwrap();
        let a5a = Msc::new(3, catalog::a5_param_matrix(&a)).unwrap();
        let g = BasisChange::new(Matrix::from_rows(vec![
            vec![q.one(), q.zero(), q.zero()],
            vec![q.zero(), b.div(&a).unwrap(), q.zero()],
            vec![q.zero(), q.zero(), a.div(&b).unwrap()],
        ]))
        .unwrap();
        let ok = a5b.act(&g)? == a5a;
        out.push(entry(
            &format!("act(Diag(1, b/a, a/b), A5param({b})) = A5param({a})"),
            "diagonal identification of the A5 parameters",
            json!(ok),
            verdict(ok),
        ));
    }

    // A6(lambda) isomorphic to A6(1/lambda)
    for lam in [
        FieldElement::rational(2, 1),
        FieldElement::rational(1, 2),
        FieldElement::rational(-3, 1),
    ] {
        let inv = lam.inv().unwrap();
        let x = catalog::canonical_msc(Family::A6, Some(&lam), &q);
        let y = catalog::canonical_msc(Family::A6, Some(&inv), &q);
        let ok = matches!(
            isomorphic(&x, &y)
                .map_err(|e| crate::msc::MscError::Parse(format!("iso failed: {e}")))?,
            IsoResult::Isomorphic(_)
        );
        out.push(entry(
            &format!("A6({lam}) is isomorphic to A6(1/{lam}) with a verified witness"),
            "parameter inversion identity for r3",
            json!(ok),
            verdict(ok),
        ));
    }

    // the printed sl2 witness (e = e2, f = -2 e3, h = 2 e1)
    let w = &fx.sl2_witness_from_text;
    let cols: Vec<Vec<FieldElement>> = [&w.e, &w.f, &w.h]
        .iter()
        .map(|v| {
            v.iter()
                .map(|c| fixtures::cell_value(c, None, None, &q))
                .collect()
        })
        .collect();
    let g_text = BasisChange::new(Matrix::from_columns(&cols)).unwrap();
    let a4m1 = catalog::canonical_msc(Family::A4, Some(&FieldElement::rational(-1, 1)), &q);
    let sl2 = Msc::new(3, catalog::sl2_matrix(&q.zero())).unwrap();
    let reached = a4m1.act(&g_text)?;
    let ok = reached == sl2;
    let mut e = entry(
        "printed change of basis e = e2, f = -2 e3, h = 2 e1 maps A4(-1) onto the printed sl2 matrix",
        "sl2 identification in the classification argument",
        json!(ok),
        verdict(ok),
    );
    if !ok {
        e.payload = Some(json!({
            "reached": matrix_to_strings(reached.matrix()),
            "expected": matrix_to_strings(sl2.matrix()),
            "note": "the products of the printed basis satisfy [e,f] = -h instead of h",
        }));
    }
    out.push(e);
    // sign-adjusted witness: f = +2 e3
    let cols_fixed = vec![
        cols[0].clone(),
        cols[1].iter().map(|x| x.neg()).collect::<Vec<_>>(),
        cols[2].clone(),
    ];
    let g_fixed = BasisChange::new(Matrix::from_columns(&cols_fixed)).unwrap();
    let ok_fixed = a4m1.act(&g_fixed)? == sl2;
    out.push(entry(
        "sign-adjusted change of basis e = e2, f = 2 e3, h = 2 e1 maps A4(-1) onto the printed sl2 matrix",
        "sl2 identification in the classification argument",
        json!(ok_fixed),
        verdict(ok_fixed),
    ));
    // the isomorphism claim itself, independent of the printed witness
    let iso = isomorphic(&a4m1, &sl2)
        .map_err(|e| crate::msc::MscError::Parse(format!("iso failed: {e}")))?;
    let ok_iso = matches!(iso, IsoResult::Isomorphic(_));
    out.push(entry(
        "A4(-1) is isomorphic to sl2, witness recovered by classification",
        "sl2 identification in the classification argument",
        json!(ok_iso),
        verdict(ok_iso),
    ));
    Ok(out)
}

fn section_invariant_table() -> MscResult<Vec<ReportEntry>> {
    let fx = fixtures::invariant_table_fixture();
    let q = FieldDescriptor::Rationals;
    let mut out = Vec::new();
    let lams: Vec<FieldElement> = fx
        .lambda_samples
        .iter()
        .map(|s| crate::field::parse_scalar(&q, s).expect("fixture scalar"))
        .collect();
    for row in &fx.table {
        let fam = match row.family.as_str() {
            "A2" => Family::A2,
            "A3" => Family::A3,
            "A4" => Family::A4,
            "A5" => Family::A5,
            other => panic!("unexpected family {other} in table fixture"),
        };
        let lam_list: Vec<Option<FieldElement>> = if row.parametric {
            lams.iter().cloned().map(Some).collect()
        } else {
            vec![None]
        };
        for lam in lam_list {
            let alg = catalog::canonical_msc(fam, lam.as_ref(), &q);
            let ann = annihilator(&alg).len();
            let sq = derived_subalgebra(&alg).len();
            let cap = crate::linalg::span_intersection_dim(
                &annihilator(&alg),
                &derived_subalgebra(&alg),
            );
            let name = match &lam {
                Some(l) => format!("{}({})", fam.name(), l),
                None => fam.name().to_string(),
            };
            for (col, claimed, got) in [
                ("dim Ann", row.dim_ann, ann),
                ("dim A^2", row.dim_sq, sq),
                ("dim Ann ∩ A^2", row.dim_ann_cap_sq, cap),
            ] {
                let status = if claimed == got {
                    Status::Verified
                } else {
                    Status::Discrepancy
                };
                let mut e = entry(
                    &format!("table cell {col}({name}) = {claimed}"),
                    "invariant table",
                    json!(got),
                    status,
                );
                if status == Status::Discrepancy {
                    e.payload = Some(json!({
                        "claimed": claimed,
                        "computed": got,
                        "definition": "Ann(A) = { x : x*y = 0 for all y }; A^2 = span of all products",
                    }));
                }
                out.push(e);
            }
        }
    }
    for s in &fx.sentences {
        let fam = match s.family.as_str() {
            "A1" => Family::A1,
            "A7" => Family::A7,
            other => panic!("unexpected family {other} in sentences"),
        };
        let lam = FieldElement::rational(2, 1);
        let alg = if fam.is_parametric() {
            catalog::canonical_msc(fam, Some(&lam), &q)
        } else {
            catalog::canonical_msc(fam, None, &q)
        };
        if let Some(claimed) = s.claimed_dim_center {
            let got = center(&alg).len();
            let status = if got == claimed {
                Status::Verified
            } else {
                Status::Discrepancy
            };
            let mut e = entry(&s.text, "separation sentences", json!(got), status);
            e.payload = Some(json!({
                "claimed": claimed,
                "computed": got,
                "definition": "Z(A) = { x : x*y = y*x for all y } (equals Ann in char != 2)",
            }));
            out.push(e);
        }
        if let Some(claimed) = s.claimed_dim_ann {
            let got = annihilator(&alg).len();
            let status = if got == claimed {
                Status::Verified
            } else {
                Status::Discrepancy
            };
            let mut e = entry(&s.text, "separation sentences", json!(got), status);
            e.payload = Some(json!({
                "claimed": claimed,
                "computed": got,
                "definition": "Ann(A) = { x : x*y = 0 for all y }",
            }));
            out.push(e);
        }
    }
    // the two fixed definitions agree on the whole list (char != 2)
    let mut all_agree = true;
    for lam in &lams {
        for fam in Family::all() {
            let alg = if fam.is_parametric() {
                catalog::canonical_msc(fam, Some(lam), &q)
            } else {
                catalog::canonical_msc(fam, None, &q)
            };
            if annihilator(&alg).len() != center(&alg).len() {
                all_agree = false;
            }
        }
    }
    out.push(entry(
        "computed center and annihilator dimensions agree on every canonical form",
        "fixed definitions of this audit",
        json!(all_agree),
        verdict(all_agree),
    ));
    Ok(out)
}

fn section_claims() -> MscResult<Vec<ReportEntry>> {
    let audits = verify_claimed_families()?;
    let mut out = Vec::new();
    for audit in audits {
        let status = match audit.status {
            ClaimStatus::Verified => Status::Verified,
            ClaimStatus::Refuted => Status::Refuted,
            ClaimStatus::Partial => Status::Partial,
        };
        let computed = json!({
            "sound_standard": audit.sound_standard,
            "sound_transposed": audit.sound_transposed,
            "notes": audit.notes,
        });
        let payload = serde_json::to_value(&audit).ok();
        let mut e = entry(&audit.claim_text, "derivation-automorphism table", computed, status);
        e.payload = payload;
        out.push(e);
    }
    Ok(out)
}

fn section_za_comparison() -> MscResult<Vec<ReportEntry>> {
    let report = compare_with_k()
        .map_err(|e| crate::msc::MscError::Parse(format!("comparison failed: {e}")))?;
    let mut out = Vec::new();
    for z in &report.entries {
        out.push(entry(
            &format!("{} classifies with a verified witness", z.name),
            "rival classification list",
            json!({ "label": z.label, "note": z.parameter_note }),
            verdict(z.witness_verified),
        ));
    }
    let attained: Vec<&str> = report.attained.iter().map(|f| f.name()).collect();
    let missing: Vec<&str> = report.missing.iter().map(|f| f.name()).collect();
    let mut e = entry(
        "the rival list misses some canonical families (\"not complete\")",
        "completeness remark on the rival classification",
        json!({ "attained": attained, "missing": missing, "incomplete": report.incomplete }),
        verdict(report.incomplete),
    );
    e.payload = Some(json!({
        "note": "the verdict field reproduces the qualitative published claim iff the attained set is a proper subset of the six non-Lie families",
    }));
    out.push(e);
    Ok(out)
}

fn section_orbit_census() -> MscResult<Vec<ReportEntry>> {
    let census = orbits::census(3)?;
    let mut out = Vec::new();
    let total_ok = census.orbits.iter().map(|o| o.size).sum::<u64>() == census.total;
    out.push(entry(
        "orbit sizes sum to the number of algebras (3^9)",
        "finite-field oracle",
        json!({ "total": census.total, "orbits": census.orbit_count }),
        verdict(total_ok),
    ));
    let group = gl3_order(3);
    let divides = census.orbits.iter().all(|o| group % o.size == 0);
    out.push(entry(
        "every orbit size divides |GL3(GF(3))| = 11232",
        "finite-field oracle",
        json!(divides),
        verdict(divides),
    ));
    // spot-check profile constancy on a few members per orbit
    let mut constant = true;
    for (k, orbit) in census.orbits.iter().enumerate() {
        if k % 7 != 0 {
            continue;
        }
        let mut seen = 0;
        for idx in 0..census.total {
            if census.roots[idx as usize] as u64 == orbit.representative {
                let alg = orbits::msc_from_digits(3, &orbits::index_to_digits(3, idx));
                if crate::invariants::profile(&alg)? != orbit.profile {
                    constant = false;
                }
                seen += 1;
                if seen >= 3 {
                    break;
                }
            }
        }
    }
    out.push(entry(
        "invariant profiles constant on sampled orbits",
        "finite-field oracle",
        json!(constant),
        verdict(constant),
    ));
    let mut e = entry(
        "orbit census summary",
        "finite-field oracle",
        json!({
            "p": census.p,
            "orbit_count": census.orbit_count,
            "caveat": census.caveat,
        }),
        Status::Verified,
    );
    e.payload = Some(json!({
        "orbit_sizes": census.orbits.iter().map(|o| o.size).collect::<Vec<_>>(),
    }));
    out.push(e);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Assembly and canonical emission
// ---------------------------------------------------------------------------

pub fn verify_paper() -> MscResult<VerificationReport> {
    let mut sections = BTreeMap::new();
    sections.insert("01_anticommutativity".to_string(), section_anticommutativity()?);
    sections.insert("02_jacobi".to_string(), section_jacobi()?);
    sections.insert("03_classification".to_string(), section_classification()?);
    sections.insert("04_isomorphisms".to_string(), section_isomorphisms()?);
    sections.insert("05_invariant_table".to_string(), section_invariant_table()?);
    sections.insert(
        "06_derivation_automorphism_audit".to_string(),
        section_claims()?,
    );
    sections.insert("07_za_comparison".to_string(), section_za_comparison()?);
    sections.insert("08_orbit_census".to_string(), section_orbit_census()?);

    let mut summary: BTreeMap<String, usize> = BTreeMap::new();
    for e in sections.values().flatten() {
        let key = match e.status {
            Status::Verified => "VERIFIED",
            Status::Refuted => "REFUTED",
            Status::Discrepancy => "DISCREPANCY",
            Status::Partial => "PARTIAL",
            Status::Skipped => "SKIPPED",
        };
        *summary.entry(key.to_string()).or_insert(0) += 1;
    }

    let mut input_digests = BTreeMap::new();
    input_digests.insert(
        "derivation_automorphism_claims.json".to_string(),
        digest(crate::derivations::claims::CLAIMS_FIXTURE),
    );
    input_digests.insert(
        "canonical_matrices.json".to_string(),
        digest(fixtures::CANONICAL_MATRICES),
    );
    input_digests.insert(
        "invariant_table_claims.json".to_string(),
        digest(fixtures::INVARIANT_TABLE),
    );

    Ok(VerificationReport {
        tool_version: TOOL_VERSION.to_string(),
        input_digests,
        sections,
        summary,
    })
}

/// Canonical JSON: sorted keys via BTreeMap, stable entry order, pretty
/// printing with a fixed style. Byte-stable across runs on the same build.
pub fn to_canonical_json(report: &VerificationReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Minimal JSON-schema validation (subset: type/properties/required/items/enum)
// ---------------------------------------------------------------------------

pub const REPORT_SCHEMA: &str = include_str!("../fixtures/verification_report.schema.json");

pub fn validate_report_json(value: &Value) -> Result<(), String> {
    let schema: Value =
        serde_json::from_str(REPORT_SCHEMA).map_err(|e| format!("schema parse: {e}"))?;
    validate(value, &schema, "$")
}

fn validate(value: &Value, schema: &Value, path: &str) -> Result<(), String> {
    if let Some(tys) = schema.get("type") {
        let ok = match tys.as_str() {
            Some("object") => value.is_object(),
            Some("array") => value.is_array(),
            Some("string") => value.is_string(),
            Some("integer") => value.is_i64() || value.is_u64(),
            Some("number") => value.is_number(),
            Some("boolean") => value.is_boolean(),
            Some("null") => value.is_null(),
            _ => true,
        };
        if !ok {
            return Err(format!("{path}: expected type {tys}"));
        }
    }
    if let Some(en) = schema.get("enum").and_then(|e| e.as_array()) {
        if !en.contains(value) {
            return Err(format!("{path}: value not in enum"));
        }
    }
    if let Some(req) = schema.get("required").and_then(|r| r.as_array()) {
        for key in req {
            let k = key.as_str().unwrap_or_default();
            if value.get(k).is_none() {
                return Err(format!("{path}: missing required key `{k}`"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(|p| p.as_object()) {
        if let Some(obj) = value.as_object() {
            for (k, sub) in props {
                if let Some(v) = obj.get(k) {
                    validate(v, sub, &format!("{path}.{k}"))?;
                }
            }
        }
    }
    if let Some(ap) = schema.get("additionalProperties") {
        if !ap.is_boolean() {
            if let Some(obj) = value.as_object() {
                let known: Vec<&String> = schema
                    .get("properties")
                    .and_then(|p| p.as_object())
                    .map(|p| p.keys().collect())
                    .unwrap_or_default();
                for (k, v) in obj {
                    if !known.contains(&k) {
                        validate(v, ap, &format!("{path}.{k}"))?;
                    }
                }
            }
        }
    }
    if let Some(items) = schema.get("items") {
        if let Some(arr) = value.as_array() {
            for (i, v) in arr.iter().enumerate() {
                validate(v, items, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}
