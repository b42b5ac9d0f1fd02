//! Audit of the published derivation/automorphism families for the non-Lie
//! canonical algebras.
//!
//! Claims are transcribed verbatim into a checked-in JSON fixture and
//! audited three ways: (a) exact symbolic substitution into the defining
//! equation with the scalar parameters as polynomial indeterminates;
//! (b) dimension comparison against the computed derivation space, both
//! symbolically over ℚ(λ) and at sampled parameter values; (c) for
//! automorphism claims, exhaustive searches over small prime fields. A
//! refuted claim carries a concrete instantiation with a nonzero residual,
//! and is re-audited under the transposed-matrix convention so an
//! alternative reading of the equations is recorded rather than guessed.

use crate::derivations::{
    automorphism_residual, automorphism_search_fp, derivation_residual,
    derivation_system_matrix, derivations, is_automorphism,
};
use crate::field::{Field, FieldDescriptor, FieldElement};
use crate::linalg::Matrix;
use crate::msc::catalog::{self, Family};
use crate::msc::{matrix_to_strings, BasisChange, Msc, MscResult};
use crate::symbolic::{parse_poly_frac, MPoly, PolyFrac, RatFn, UPoly};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Variable universe for the symbolic audits.
const VARS: [&str; 4] = ["lambda", "a", "b", "t"];
const LAMBDA: usize = 0;

/// The checked-in transcription of the published families.
pub const CLAIMS_FIXTURE: &str = include_str!("../../fixtures/derivation_automorphism_claims.json");

#[derive(Debug, Clone, Deserialize)]
pub struct ClaimFixture {
    pub claims: Vec<ClaimSpec>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ClaimSpec {
    pub id: String,
    pub kind: ClaimKind,
    pub family: String,
    /// Parameter treatment: "none" for parameterless families, "any",
    /// "nonzero", "zero", "not_minus_one".
    #[serde(default = "default_lambda_mode")]
    pub lambda: String,
    pub text: String,
    /// When true the claim asserts the automorphism group is exactly {I}.
    #[serde(default)]
    pub identity_only: bool,
    #[serde(default)]
    pub components: Vec<FamilyComponent>,
}

fn default_lambda_mode() -> String {
    "none".into()
}

#[derive(Debug, Clone, Deserialize)]
pub struct FamilyComponent {
    pub params: Vec<String>,
    #[serde(default)]
    pub param_nonzero: Vec<String>,
    pub entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClaimKind {
    Derivation,
    Automorphism,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClaimStatus {
    #[serde(rename = "VERIFIED")]
    Verified,
    #[serde(rename = "REFUTED")]
    Refuted,
    #[serde(rename = "PARTIAL")]
    Partial,
}

/// Counterexample payload: parameter instantiation, the instantiated matrix,
/// and the first nonzero residual entry in column-major order.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualPayload {
    pub instantiation: BTreeMap<String, String>,
    pub matrix: Vec<Vec<String>>,
    pub residual_row: usize,
    pub residual_col: usize,
    pub residual_value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimComparison {
    pub claimed: usize,
    pub generic_symbolic: Option<usize>,
    pub sampled: BTreeMap<String, usize>,
    pub matches: bool,
    /// A derivation outside the claimed family, when the dimensions differ.
    pub extra_derivation: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FfEvidence {
    pub prime: u64,
    pub lambda: Option<u64>,
    pub automorphism_count: usize,
    pub expected_family_count: usize,
    pub matches_family: bool,
    /// Extra automorphisms (beyond the claimed family), as text matrices.
    pub extras: Vec<Vec<Vec<String>>>,
    /// Extras whose symmetric integer lift verifies over ℚ, i.e. genuine
    /// characteristic-zero counterexamples to completeness.
    pub lifted_counterexamples: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimAudit {
    pub id: String,
    pub kind: ClaimKind,
    pub claim_text: String,
    pub status: ClaimStatus,
    /// Family ⊆ Der/Aut as an identity in the parameters, standard reading.
    pub sound_standard: bool,
    /// Same check with every family matrix transposed.
    pub sound_transposed: bool,
    pub residual: Option<ResidualPayload>,
    pub residual_transposed: Option<ResidualPayload>,
    pub dimension: Option<DimComparison>,
    pub ff_evidence: Vec<FfEvidence>,
    pub notes: Vec<String>,
}

pub fn load_claims() -> Result<Vec<ClaimSpec>, String> {
    let fixture: ClaimFixture =
        serde_json::from_str(CLAIMS_FIXTURE).map_err(|e| format!("claims fixture: {e}"))?;
    Ok(fixture.claims)
}

fn family_from_name(name: &str) -> Family {
    match name {
        "A1" => Family::A1,
        "A2" => Family::A2,
        "A3" => Family::A3,
        "A4" => Family::A4,
        "A5" => Family::A5,
        "A6" => Family::A6,
        "A7" => Family::A7,
        "A8" => Family::A8,
        "A9" => Family::A9,
        other => panic!("unknown family in claims fixture: {other}"),
    }
}

fn frac_zero() -> PolyFrac {
    PolyFrac::from_poly(MPoly::zero(VARS.len()))
}

fn lambda_sym() -> PolyFrac {
    PolyFrac::from_poly(MPoly::var(VARS.len(), LAMBDA))
}

/// Symbolic algebra matrix: λ is an indeterminate unless the claim pins it.
fn algebra_sym(family: Family, lambda_mode: &str) -> Matrix<PolyFrac> {
    let proto = frac_zero();
    if family.is_parametric() {
        let lam = match lambda_mode {
            "zero" => frac_zero(),
            _ => lambda_sym(),
        };
        catalog::canonical_matrix(family, Some(&lam), &proto)
    } else {
        catalog::canonical_matrix(family, None, &proto)
    }
}

fn parse_component(c: &FamilyComponent) -> Result<Matrix<PolyFrac>, String> {
    let mut rows = Vec::with_capacity(3);
    for row in &c.entries {
        let mut out = Vec::with_capacity(3);
        for cell in row {
            out.push(parse_poly_frac(cell, &VARS)?);
        }
        rows.push(out);
    }
    Ok(Matrix::from_rows(rows))
}

/// Symbolic residual of the derivation identity: X·A − A·(X⊗I + I⊗X).
fn derivation_residual_sym(x: &Matrix<PolyFrac>, a: &Matrix<PolyFrac>) -> Matrix<PolyFrac> {
    let id = Matrix::identity(3, &frac_zero());
    let rhs = a
        .mul(&x.kron(&id).add(&id.kron(x)).expect("shape"))
        .expect("shape");
    x.mul(a).expect("shape").sub(&rhs).expect("shape")
}

/// Symbolic residual of the automorphism identity: X·A − A·(X⊗X).
fn automorphism_residual_sym(x: &Matrix<PolyFrac>, a: &Matrix<PolyFrac>) -> Matrix<PolyFrac> {
    let rhs = a.mul(&x.kron(x)).expect("shape");
    x.mul(a).expect("shape").sub(&rhs).expect("shape")
}

fn lambda_excluded(mode: &str) -> Vec<BigRational> {
    match mode {
        "nonzero" => vec![BigRational::zero()],
        "not_minus_one" => vec![-BigRational::one()],
        _ => vec![],
    }
}

fn lambda_samples(mode: &str) -> Vec<BigRational> {
    let base: Vec<BigRational> = [
        (2i64, 1i64),
        (3, 1),
        (-2, 1),
        (5, 1),
        (1, 2),
    ]
    .iter()
    .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
    .collect();
    match mode {
        "zero" => vec![BigRational::zero()],
        "none" => vec![BigRational::zero()], // unused placeholder for eval
        _ => {
            let excl = lambda_excluded(mode);
            base.into_iter().filter(|v| !excl.contains(v)).collect()
        }
    }
}

/// Search a small instantiation of (λ, params) making a symbolic residual
/// entry nonzero, for the counterexample payload.
fn find_nonzero_instantiation(
    residual: &Matrix<PolyFrac>,
    x: &Matrix<PolyFrac>,
    lambda_mode: &str,
) -> Option<ResidualPayload> {
    let lam_candidates = lambda_samples(lambda_mode);
    let pvals: [i64; 4] = [1, 2, 3, -1];
    for lam in &lam_candidates {
        for &pa in &pvals {
            for &pb in &pvals {
                for &pt in &pvals {
                    let vals = vec![
                        lam.clone(),
                        BigRational::from(BigInt::from(pa)),
                        BigRational::from(BigInt::from(pb)),
                        BigRational::from(BigInt::from(pt)),
                    ];
                    // column-major scan for the first nonzero residual entry
                    let mut hit: Option<(usize, usize, BigRational)> = None;
                    'scan: for c in 0..residual.cols() {
                        for r in 0..residual.rows() {
                            match residual.at(r, c).eval(&vals) {
                                Some(v) if !v.is_zero() => {
                                    hit = Some((r, c, v));
                                    break 'scan;
                                }
                                Some(_) => {}
                                None => {
                                    hit = None;
                                    break 'scan; // denominator vanished: try next sample
                                }
                            }
                        }
                    }
                    if let Some((r, c, v)) = hit {
                        let mut inst = BTreeMap::new();
                        for (i, name) in VARS.iter().enumerate() {
                            inst.insert(name.to_string(), format_rat_str(&vals[i]));
                        }
                        let mat = (0..3)
                            .map(|rr| {
                                (0..3)
                                    .map(|cc| {
                                        x.at(rr, cc)
                                            .eval(&vals)
                                            .map(|q| format_rat_str(&q))
                                            .unwrap_or_else(|| "undefined".into())
                                    })
                                    .collect()
                            })
                            .collect();
                        return Some(ResidualPayload {
                            instantiation: inst,
                            matrix: mat,
                            residual_row: r,
                            residual_col: c,
                            residual_value: format_rat_str(&v),
                        });
                    }
                }
            }
        }
    }
    None
}

fn format_rat_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Generic derivation dimension over ℚ(λ) for a parametric family, or over ℚ
/// for a fixed algebra.
fn generic_derivation_dim(family: Family, lambda_mode: &str) -> Option<usize> {
    if family.is_parametric() && lambda_mode != "zero" {
        let lam = RatFn::var();
        let a = catalog::canonical_matrix(family, Some(&lam), &lam.zero());
        let sys = derivation_system_matrix(&a, 3);
        Some(sys.nullspace().len())
    } else {
        None
    }
}

fn msc_at_lambda(family: Family, lam: Option<&BigRational>) -> Msc {
    let desc = FieldDescriptor::Rationals;
    let param = lam.map(|v| FieldElement::Rat(v.clone()));
    catalog::canonical_msc(family, param.as_ref(), &desc)
}

/// Instantiate a component matrix at rational parameter values.
fn instantiate_component(
    x: &Matrix<PolyFrac>,
    lam: &BigRational,
    a: &BigRational,
    b: &BigRational,
    t: &BigRational,
) -> Option<Matrix<FieldElement>> {
    let vals = vec![lam.clone(), a.clone(), b.clone(), t.clone()];
    let mut rows = Vec::with_capacity(3);
    for r in 0..3 {
        let mut row = Vec::with_capacity(3);
        for c in 0..3 {
            row.push(FieldElement::Rat(x.at(r, c).eval(&vals)?));
        }
        rows.push(row);
    }
    Some(Matrix::from_rows(rows))
}

/// Membership of a matrix in the span of the claimed family basis (for
/// derivation claims, which are linear in their parameters).
fn family_span_basis(
    comp: &Matrix<PolyFrac>,
    params: &[String],
    lam: &BigRational,
) -> Vec<Matrix<FieldElement>> {
    let mut basis = Vec::new();
    for p in params {
        let pick = |name: &str| -> BigRational {
            if name == p {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        };
        if let Some(m) = instantiate_component(comp, lam, &pick("a"), &pick("b"), &pick("t")) {
            basis.push(m);
        }
    }
    basis
}

fn mat_to_vec(m: &Matrix<FieldElement>) -> Matrix<FieldElement> {
    Matrix::column_vector(
        (0..3)
            .flat_map(|r| (0..3).map(move |c| (r, c)))
            .map(|(r, c)| m.at(r, c).clone())
            .collect(),
    )
}

/// Audit a derivation claim.
fn audit_derivation(spec: &ClaimSpec) -> MscResult<ClaimAudit> {
    let family = family_from_name(&spec.family);
    let a_sym = algebra_sym(family, &spec.lambda);
    let comp = parse_component(&spec.components[0]).expect("fixture parses");
    let res_std = derivation_residual_sym(&comp, &a_sym);
    let res_tr = derivation_residual_sym(&comp.transpose(), &a_sym);
    let sound_standard = res_std.is_zero();
    let sound_transposed = res_tr.is_zero();
    let residual = if sound_standard {
        None
    } else {
        find_nonzero_instantiation(&res_std, &comp, &spec.lambda)
    };
    let residual_transposed = if sound_transposed {
        None
    } else {
        find_nonzero_instantiation(&res_tr, &comp.transpose(), &spec.lambda)
    };

    // dimension comparison
    let claimed = spec.components[0].params.len();
    let generic = generic_derivation_dim(family, &spec.lambda);
    let mut sampled = BTreeMap::new();
    let mut extra = None;
    let lam_list: Vec<Option<BigRational>> = if family.is_parametric() {
        lambda_samples(&spec.lambda).into_iter().map(Some).collect()
    } else {
        vec![None]
    };
    let mut dims_match = generic.map_or(true, |g| g == claimed);
    for lam in &lam_list {
        let alg = msc_at_lambda(family, lam.as_ref());
        let der = derivations(&alg)?;
        let key = lam
            .as_ref()
            .map(|v| format_rat_str(v))
            .unwrap_or_else(|| "-".into());
        sampled.insert(key, der.dimension);
        if der.dimension != claimed {
            dims_match = false;
        }
        if extra.is_none() && der.dimension > 0 {
            // find a computed derivation outside the claimed span
            let lam_val = lam.clone().unwrap_or_else(BigRational::zero);
            let fam_basis = family_span_basis(&comp, &spec.components[0].params, &lam_val);
            let fam_vecs: Vec<Matrix<FieldElement>> =
                fam_basis.iter().map(mat_to_vec).collect();
            for d in &der.basis {
                let dv = mat_to_vec(d);
                let mut cols: Vec<Vec<FieldElement>> =
                    fam_vecs.iter().map(|v| v.column(0)).collect();
                let rank_before = if cols.is_empty() {
                    0
                } else {
                    Matrix::from_columns(&cols).rank()
                };
                cols.push(dv.column(0));
                let rank_after = Matrix::from_columns(&cols).rank();
                if rank_after > rank_before && rank_before == fam_vecs.len() {
                    if der.dimension != claimed || !sound_standard {
                        extra = Some(matrix_to_strings(d));
                    }
                    break;
                }
            }
        }
    }
    let dimension = Some(DimComparison {
        claimed,
        generic_symbolic: generic,
        sampled,
        matches: dims_match,
        extra_derivation: if dims_match && sound_standard {
            None
        } else {
            extra
        },
    });

    let status = if sound_standard && dims_match {
        ClaimStatus::Verified
    } else {
        ClaimStatus::Refuted
    };
    let mut notes = Vec::new();
    if !sound_standard && sound_transposed {
        notes.push("family satisfies the derivation identity only under the transposed-matrix convention".into());
    }
    if !sound_standard && !sound_transposed {
        notes.push("family fails the derivation identity under both conventions".into());
    }
    if sound_standard && !dims_match {
        notes.push(
            "every family member is a derivation, but the derivation space is larger".into(),
        );
    }
    Ok(ClaimAudit {
        id: spec.id.clone(),
        kind: ClaimKind::Derivation,
        claim_text: spec.text.clone(),
        status,
        sound_standard,
        sound_transposed,
        residual,
        residual_transposed,
        dimension,
        ff_evidence: Vec::new(),
        notes,
    })
}

fn admissible_residues(mode: &str, p: u64) -> Vec<Option<u64>> {
    match mode {
        "none" => vec![None],
        "zero" => vec![Some(0)],
        "nonzero" => (1..p).map(Some).collect(),
        "not_minus_one" => (0..p).filter(|&v| v != p - 1).map(Some).collect(),
        _ => (0..p).map(Some).collect(),
    }
}

/// Expected automorphisms over GF(p) from the claimed family components.
fn family_members_fp(
    spec: &ClaimSpec,
    comps: &[Matrix<PolyFrac>],
    p: u64,
    lam: Option<u64>,
) -> Vec<Matrix<FieldElement>> {
    let desc = FieldDescriptor::prime(p).expect("valid prime");
    let mut out: Vec<Matrix<FieldElement>> = Vec::new();
    if spec.identity_only {
        out.push(Matrix::identity(3, &desc.zero()));
        return out;
    }
    let lam_q = BigRational::from(BigInt::from(lam.unwrap_or(0) as i64));
    for (comp, spec_comp) in comps.iter().zip(spec.components.iter()) {
        // single parameter named t or a in practice; enumerate residues
        let values: Vec<u64> = (0..p).collect();
        for &v in &values {
            let vq = BigRational::from(BigInt::from(v as i64));
            let assign = |name: &str| -> BigRational {
                if spec_comp.params.iter().any(|q| q == name) {
                    vq.clone()
                } else {
                    BigRational::zero()
                }
            };
            if spec_comp
                .param_nonzero
                .iter()
                .any(|q| spec_comp.params.contains(q))
                && v == 0
            {
                continue;
            }
            let m = instantiate_component(comp, &lam_q, &assign("a"), &assign("b"), &assign("t"));
            let m = match m {
                Some(m) => m,
                None => continue, // denominator vanished mod p after reduction below
            };
            // reduce entries mod p (denominators must be invertible)
            let mut rows = Vec::with_capacity(3);
            let mut ok = true;
            for r in 0..3 {
                let mut row = Vec::with_capacity(3);
                for c in 0..3 {
                    match m.at(r, c) {
                        FieldElement::Rat(q) => match FieldElement::from_rat(&desc, q) {
                            Ok(v) => row.push(v),
                            Err(_) => {
                                ok = false;
                                break;
                            }
                        },
                        _ => unreachable!(),
                    }
                }
                if !ok {
                    break;
                }
                rows.push(row);
            }
            if !ok {
                continue;
            }
            let mat = Matrix::from_rows(rows);
            if mat.det().is_zero() {
                continue;
            }
            if !out.contains(&mat) {
                out.push(mat);
            }
        }
    }
    out
}

/// Symmetric integer lift of a GF(p) matrix, for characteristic-zero checks.
fn symmetric_lift(m: &Matrix<FieldElement>, p: u64) -> Matrix<FieldElement> {
    m.map(|e| match e {
        FieldElement::Fp { val, .. } => {
            let v = if *val > p / 2 {
                *val as i64 - p as i64
            } else {
                *val as i64
            };
            FieldElement::rational(v, 1)
        }
        _ => unreachable!(),
    })
}

/// Audit an automorphism claim.
fn audit_automorphism(spec: &ClaimSpec) -> MscResult<ClaimAudit> {
    let family = family_from_name(&spec.family);
    let a_sym = algebra_sym(family, &spec.lambda);
    let comps: Vec<Matrix<PolyFrac>> = spec
        .components
        .iter()
        .map(|c| parse_component(c).expect("fixture parses"))
        .collect();

    let mut sound_standard = true;
    let mut sound_transposed = true;
    let mut residual = None;
    let mut residual_transposed = None;
    for comp in &comps {
        let res_std = automorphism_residual_sym(comp, &a_sym);
        if !res_std.is_zero() {
            sound_standard = false;
            if residual.is_none() {
                residual = find_nonzero_instantiation(&res_std, comp, &spec.lambda);
            }
        }
        let ct = comp.transpose();
        let res_tr = automorphism_residual_sym(&ct, &a_sym);
        if !res_tr.is_zero() {
            sound_transposed = false;
            if residual_transposed.is_none() {
                residual_transposed = find_nonzero_instantiation(&res_tr, &ct, &spec.lambda);
            }
        }
    }

    // finite-field completeness evidence
    let mut ff_evidence = Vec::new();
    let mut lifted_refutation = false;
    for p in [3u64, 5, 7] {
        for lam in admissible_residues(&spec.lambda, p) {
            let desc = FieldDescriptor::prime(p)?;
            let alg = catalog::canonical_msc(
                family,
                lam.map(|v| FieldElement::Fp { p, val: v }).as_ref(),
                &desc,
            );
            let found = automorphism_search_fp(&alg)?;
            let expected = family_members_fp(spec, &comps, p, lam);
            let mut extras = Vec::new();
            let mut lifted = Vec::new();
            for g in &found {
                if !expected.contains(g.matrix()) {
                    extras.push(matrix_to_strings(g.matrix()));
                    // try a characteristic-zero lift
                    let lift = symmetric_lift(g.matrix(), p);
                    if !lift.det().is_zero() {
                        let lam_q = lam.map(|v| {
                            let sv = if v > p / 2 {
                                v as i64 - p as i64
                            } else {
                                v as i64
                            };
                            BigRational::from(BigInt::from(sv))
                        });
                        let alg_q = msc_at_lambda(family, lam_q.as_ref());
                        if let Ok(bc) = BasisChange::new(lift.clone()) {
                            if is_automorphism(&bc, &alg_q)? {
                                // must also fall outside the family over ℚ
                                lifted.push(matrix_to_strings(&lift));
                            }
                        }
                    }
                }
            }
            if !lifted.is_empty() {
                lifted_refutation = true;
            }
            ff_evidence.push(FfEvidence {
                prime: p,
                lambda: lam,
                automorphism_count: found.len(),
                expected_family_count: expected.len(),
                matches_family: extras.is_empty() && found.len() == expected.len(),
                extras,
                lifted_counterexamples: lifted,
            });
        }
    }

    let all_ff_match = ff_evidence.iter().all(|e| e.matches_family);
    let status = if !sound_standard || lifted_refutation {
        ClaimStatus::Refuted
    } else {
        // soundness holds; completeness only finite-field-tested
        ClaimStatus::Partial
    };
    let mut notes = Vec::new();
    if !sound_standard && sound_transposed {
        notes.push("family satisfies the automorphism identity only under the transposed-matrix convention".into());
    }
    if !sound_standard && !sound_transposed {
        notes.push("family fails the automorphism identity under both conventions".into());
    }
    if sound_standard && !all_ff_match {
        notes.push("extra automorphisms exist over some small prime fields (recorded; the claim's field hypotheses exclude finite fields)".into());
    }
    if sound_standard && all_ff_match {
        notes.push("sound; completeness exhaustively confirmed over GF(3), GF(5), GF(7)".into());
    }
    if lifted_refutation {
        notes.push("a finite-field extra automorphism lifts to characteristic zero".into());
    }
    Ok(ClaimAudit {
        id: spec.id.clone(),
        kind: ClaimKind::Automorphism,
        claim_text: spec.text.clone(),
        status,
        sound_standard,
        sound_transposed,
        residual,
        residual_transposed,
        dimension: None,
        ff_evidence,
        notes,
    })
}

/// Run the full audit of the checked-in claims fixture.
pub fn verify_claimed_families() -> MscResult<Vec<ClaimAudit>> {
    let specs = load_claims().expect("claims fixture is valid");
    let mut out = Vec::with_capacity(specs.len());
    for spec in &specs {
        let audit = match spec.kind {
            ClaimKind::Derivation => audit_derivation(spec)?,
            ClaimKind::Automorphism => audit_automorphism(spec)?,
        };
        out.push(audit);
    }
    Ok(out)
}

/// Replay a refuted claim's payload: re-evaluate the instantiated matrix
/// against the algebra and confirm the recorded residual is still nonzero.
pub fn replay_residual(
    spec_family: &str,
    kind: ClaimKind,
    payload: &ResidualPayload,
) -> MscResult<bool> {
    let family = family_from_name(spec_family);
    let lam = payload
        .instantiation
        .get("lambda")
        .map(|s| parse_rat_str(s))
        .unwrap_or_else(BigRational::zero);
    let alg = msc_at_lambda(family, Some(&lam));
    let mut rows = Vec::with_capacity(3);
    for r in 0..3 {
        let mut row = Vec::with_capacity(3);
        for c in 0..3 {
            row.push(FieldElement::Rat(parse_rat_str(&payload.matrix[r][c])));
        }
        rows.push(row);
    }
    let m = Matrix::from_rows(rows);
    let res = match kind {
        ClaimKind::Derivation => derivation_residual(&m, &alg)?,
        ClaimKind::Automorphism => automorphism_residual(&m, &alg)?,
    };
    Ok(match res {
        Some((r, c, v)) => {
            r == payload.residual_row
                && c == payload.residual_col
                && format!("{v}") == payload.residual_value
        }
        None => false,
    })
}

fn parse_rat_str(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((n, d)) => BigRational::new(n.parse().unwrap(), d.parse().unwrap()),
        None => BigRational::from(s.parse::<BigInt>().unwrap()),
    }
}

/// Build the A(λ) matrix over ℚ(λ) (used by tests to pin generic ranks).
pub fn algebra_over_ratfn(family: Family) -> Matrix<RatFn> {
    let lam = RatFn::var();
    if family.is_parametric() {
        catalog::canonical_matrix(family, Some(&lam), &RatFn::from_poly(UPoly::zero()))
    } else {
        catalog::canonical_matrix(family, None, &RatFn::from_poly(UPoly::zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_loads_and_covers_every_family_row() {
        let specs = load_claims().unwrap();
        assert_eq!(specs.len(), 14);
        let ids: Vec<&str> = specs.iter().map(|s| s.id.as_str()).collect();
        for expected in [
            "der_A1", "aut_A1", "der_A2", "der_A2_0", "aut_A2", "der_A3", "aut_A3",
            "der_A4", "aut_A4", "der_A5", "aut_A5", "der_A7", "aut_A7", "aut_A7_0",
        ] {
            assert!(ids.contains(&expected), "missing {expected}");
        }
    }

    #[test]
    fn audits_are_deterministic() {
        let a = verify_claimed_families().unwrap();
        let b = verify_claimed_families().unwrap();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn audit_outcomes() {
        let audits = verify_claimed_families().unwrap();
        let get = |id: &str| audits.iter().find(|a| a.id == id).unwrap();

        // the published Der(A1) and Aut(A1) rows fail the defining equations
        // under both conventions; the refutation carries a replayable residual
        let d1 = get("der_A1");
        assert_eq!(d1.status, ClaimStatus::Refuted);
        assert!(!d1.sound_standard && !d1.sound_transposed);
        assert!(d1.residual.is_some());
        let a1 = get("aut_A1");
        assert_eq!(a1.status, ClaimStatus::Refuted);
        assert!(a1.residual.is_some());

        // the derivation rows for A2, A3, A4, A5, A7 hold symbolically and
        // exhaust the derivation space
        for id in ["der_A2", "der_A2_0", "der_A3", "der_A4", "der_A5", "der_A7"] {
            let a = get(id);
            assert_eq!(a.status, ClaimStatus::Verified, "{id}");
            assert!(a.sound_standard);
            assert!(a.dimension.as_ref().unwrap().matches);
        }

        // Aut(A3) and Aut(A5) are sound and exhaustively confirmed over
        // GF(3), GF(5), GF(7); completeness over infinite fields stays open
        for id in ["aut_A3", "aut_A5"] {
            let a = get(id);
            assert_eq!(a.status, ClaimStatus::Partial, "{id}");
            assert!(a.ff_evidence.iter().all(|e| e.matches_family));
        }

        // the identity-only automorphism claims and the diagonal families
        // for A4/A7 miss automorphisms that lift to characteristic zero
        for id in ["aut_A2", "aut_A4", "aut_A7", "aut_A7_0"] {
            let a = get(id);
            assert_eq!(a.status, ClaimStatus::Refuted, "{id}");
            assert!(a
                .ff_evidence
                .iter()
                .any(|e| !e.lifted_counterexamples.is_empty()));
        }
    }

    #[test]
    fn refuted_payloads_replay() {
        let audits = verify_claimed_families().unwrap();
        for a in &audits {
            if let Some(r) = &a.residual {
                let fam = a.id.split('_').nth(1).unwrap();
                let fam = format!("A{}", &fam[1..]);
                assert!(
                    replay_residual(&fam, a.kind, r).unwrap(),
                    "payload of {} must replay",
                    a.id
                );
            }
        }
    }

    #[test]
    fn verified_families_pass_membership_at_sampled_parameters() {
        use crate::derivations::{is_automorphism, is_derivation};
        use crate::msc::BasisChange;
        let specs = load_claims().unwrap();
        let audits = verify_claimed_families().unwrap();
        for (spec, audit) in specs.iter().zip(audits.iter()) {
            if !audit.sound_standard {
                continue;
            }
            let family = family_from_name(&spec.family);
            for comp in &spec.components {
                let comp_m = parse_component(comp).unwrap();
                for k in 1..=5i64 {
                    let lam = BigRational::from(BigInt::from(2));
                    let v = BigRational::from(BigInt::from(k));
                    let inst = match instantiate_component(&comp_m, &lam, &v, &v, &v) {
                        Some(m) => m,
                        None => continue,
                    };
                    let zero = BigRational::zero();
                    let lam_ref = if family.is_parametric() {
                        if spec.lambda == "zero" {
                            Some(&zero)
                        } else {
                            Some(&lam)
                        }
                    } else {
                        None
                    };
                    let alg = msc_at_lambda(family, lam_ref);
                    match spec.kind {
                        ClaimKind::Derivation => {
                            assert!(is_derivation(&inst, &alg).unwrap(), "{} at {k}", spec.id);
                        }
                        ClaimKind::Automorphism => {
                            if inst.det().is_zero() {
                                continue;
                            }
                            let bc = BasisChange::new(inst).unwrap();
                            assert!(is_automorphism(&bc, &alg).unwrap(), "{} at {k}", spec.id);
                        }
                    }
                }
            }
        }
    }
}
