//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see them). Every tolerance here is exact: the
//! whole artifact is integer/rational arithmetic, so equality means equality.
//!
//! Three criteria encode uniqueness statements of the published
//! classification that the artifact itself refutes with verified witnesses
//! (the A7 family coincides with A1, A4(0) with A3, A4(λ) with
//! A2(λ+1/λ−1), A2(1) with A5, and the printed sl2 change of basis has a
//! sign error). Those assertions are kept exactly as stated and fail
//! honestly; the failure messages carry the witnesses.

use acalg::classify::{
    classify, compare_with_k, conic_candidates, find_2dim_subalgebra, isomorphic, IsoResult,
};
use acalg::derivations::claims::{replay_residual, verify_claimed_families, ClaimStatus};
use acalg::derivations::{derivation_system_matrix, gl3_order, leibniz_system_matrix};
use acalg::field::{Field, FieldDescriptor, FieldElement};
use acalg::invariants::profile;
use acalg::linalg::Matrix;
use acalg::msc::catalog::{self, Family, LieAlias};
use acalg::msc::{BasisChange, Msc};
use acalg::orbits;
use acalg::report::{to_canonical_json, verify_paper, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::Instant;

fn q(n: i64, d: i64) -> FieldElement {
    FieldElement::rational(n, d)
}

fn lambda_samples() -> Vec<FieldElement> {
    [(-2i64, 1i64), (-1, 1), (0, 1), (1, 2), (1, 1), (2, 1)]
        .iter()
        .map(|&(n, d)| FieldElement::rational(n, d))
        .collect()
}

fn qdesc() -> FieldDescriptor {
    FieldDescriptor::Rationals
}

fn catalog_forms() -> Vec<(String, Family, Option<FieldElement>, Msc)> {
    let mut out = Vec::new();
    for fam in Family::all() {
        if fam.is_parametric() {
            for lam in lambda_samples() {
                out.push((
                    format!("{}({})", fam.name(), lam),
                    fam,
                    Some(lam.clone()),
                    catalog::canonical_msc(fam, Some(&lam), &qdesc()),
                ));
            }
        } else {
            out.push((
                fam.name().to_string(),
                fam,
                None,
                catalog::canonical_msc(fam, None, &qdesc()),
            ));
        }
    }
    out
}

fn random_invertible(rng: &mut ChaCha8Rng, bound: i64) -> BasisChange {
    loop {
        let m = Matrix::from_fn(3, 3, |_, _| q(rng.gen_range(-bound..=bound), 1));
        if !m.det().is_zero() {
            return BasisChange::new(m).unwrap();
        }
    }
}

fn random_anticommutative(rng: &mut ChaCha8Rng, bound: i64) -> Msc {
    let products: Vec<Vec<FieldElement>> = (0..3)
        .map(|_| (0..3).map(|_| q(rng.gen_range(-bound..=bound), 1)).collect())
        .collect();
    Msc::from_pair_products(3, &qdesc(), &products).unwrap()
}

#[test]
fn acceptance_01_catalog_hygiene() {
    let t0 = Instant::now();
    for (name, _, _, alg) in catalog_forms() {
        assert!(alg.is_anticommutative(), "{name} violates a^2 = 0");
    }
    // Lie list of the three-dimensional classification
    let z = qdesc().zero();
    for (name, mat) in [
        ("sl2", catalog::sl2_matrix(&z)),
        ("r3(2)", catalog::r3_matrix(&q(2, 1))),
        ("r3'(1)", catalog::r3_prime_1_matrix(&z)),
        ("h3", catalog::h3_matrix(&z)),
    ] {
        assert!(Msc::new(3, mat).unwrap().is_anticommutative(), "{name}");
    }
    assert!(catalog::two_dim_canonical(&qdesc()).is_anticommutative());
    // ZA list (ZA5 over the tower with i^2 = -1)
    for k in [1usize, 2, 4] {
        assert!(catalog::za_msc(k, None, &qdesc()).is_anticommutative(), "ZA{k}");
    }
    assert!(catalog::za_msc(3, Some(&q(2, 1)), &qdesc()).is_anticommutative());
    let desc_i = FieldDescriptor::tower(&[num::BigInt::from(-1)]).unwrap();
    let i = acalg::field::parse_scalar(&desc_i, "sqrt(-1)").unwrap();
    assert!(catalog::za_msc(5, Some(&i), &desc_i).is_anticommutative());
    // printed identities hold entrywise
    for lam in lambda_samples() {
        assert_eq!(catalog::a6_matrix(&lam), catalog::r3_matrix(&lam));
    }
    assert_eq!(catalog::a8_matrix(&z), catalog::r3_prime_1_matrix(&z));
    assert_eq!(catalog::a9_matrix(&z), catalog::h3_matrix(&z));
    assert_eq!(
        catalog::a5_param_matrix(&z),
        catalog::a4_matrix(&qdesc().one())
    );
    println!(
        "ACCEPTANCE 01 catalog hygiene: PASS ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_02_jacobi_battery() {
    let t0 = Instant::now();
    for (name, fam, lam, alg) in catalog_forms() {
        let expected = match fam {
            Family::A4 => lam.as_ref() == Some(&q(-1, 1)),
            Family::A6 | Family::A8 | Family::A9 => true,
            Family::Trivial => true,
            _ => false,
        };
        assert_eq!(alg.is_lie().unwrap(), expected, "Lie flag of {name}");
    }
    // printed jacobiator values, exactly
    for a in lambda_samples() {
        let alg = Msc::new(3, catalog::a5_param_matrix(&a)).unwrap();
        let jac = alg
            .jacobiator(&alg.basis_vector(0), &alg.basis_vector(1), &alg.basis_vector(2))
            .unwrap();
        assert_eq!(jac, vec![q(2, 1), a.clone(), q(0, 1)], "A5param({a})");
        let a7 = catalog::canonical_msc(Family::A7, Some(&a), &qdesc());
        let jac7 = a7
            .jacobiator(&a7.basis_vector(0), &a7.basis_vector(1), &a7.basis_vector(2))
            .unwrap();
        assert_eq!(jac7, vec![q(0, 1), q(-1, 1), q(0, 1)], "A7({a})");
    }
    println!("ACCEPTANCE 02 jacobi battery: PASS ({:?})", t0.elapsed());
}

#[test]
fn acceptance_03_known_isomorphisms() {
    let t0 = Instant::now();
    let mut failed = Vec::new();

    // (a) the diagonal identity between A5 parameter values
    for (a, b) in [(q(2, 1), q(3, 1)), (q(1, 1), q(-1, 1)), (q(1, 2), q(5, 1))] {
        let a5b = Msc::new(3, catalog::a5_param_matrix(&b)).unwrap();
        let a5a = Msc::new(3, catalog::a5_param_matrix(&a)).unwrap();
        let g = BasisChange::new(Matrix::from_rows(vec![
            vec![q(1, 1), q(0, 1), q(0, 1)],
            vec![q(0, 1), b.checked_div(&a).unwrap(), q(0, 1)],
            vec![q(0, 1), q(0, 1), a.checked_div(&b).unwrap()],
        ]))
        .unwrap();
        assert_eq!(a5b.act(&g).unwrap(), a5a, "Diag(1, b/a, a/b) identity");
    }
    println!("  03a diagonal A5 identity at (2,3), (1,-1), (1/2,5): PASS");

    // (b) A6(λ) ≅ A6(1/λ) with verified witnesses
    for lam in [q(2, 1), q(1, 2), q(-3, 1)] {
        let inv = q(1, 1).checked_div(&lam).unwrap();
        let x = catalog::canonical_msc(Family::A6, Some(&lam), &qdesc());
        let y = catalog::canonical_msc(Family::A6, Some(&inv), &qdesc());
        match isomorphic(&x, &y).unwrap() {
            IsoResult::Isomorphic(h) => {
                assert_eq!(x.act_iso(&h).unwrap(), y, "A6({lam}) witness");
            }
            other => panic!("A6({lam}) vs A6(1/{lam}): expected witness, got {other:?}"),
        }
    }
    println!("  03b A6(lambda) = A6(1/lambda) witnesses at 2, 1/2, -3: PASS");

    // (c) the printed sl2 change of basis e = e2, f = -2 e3, h = 2 e1
    let a4m1 = catalog::canonical_msc(Family::A4, Some(&q(-1, 1)), &qdesc());
    let sl2 = Msc::new(3, catalog::sl2_matrix(&qdesc().zero())).unwrap();
    let g_printed = BasisChange::new(Matrix::from_columns(&[
        vec![q(0, 1), q(1, 1), q(0, 1)],  // e  = e2
        vec![q(0, 1), q(0, 1), q(-2, 1)], // f  = -2 e3
        vec![q(2, 1), q(0, 1), q(0, 1)],  // h  = 2 e1
    ]))
    .unwrap();
    let reached = a4m1.act(&g_printed).unwrap();
    if reached != sl2 {
        // diagnostic: the sign-adjusted basis (e2, +2 e3, 2 e1) does work
        let g_fixed = BasisChange::new(Matrix::from_columns(&[
            vec![q(0, 1), q(1, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(2, 1)],
            vec![q(2, 1), q(0, 1), q(0, 1)],
        ]))
        .unwrap();
        assert_eq!(a4m1.act(&g_fixed).unwrap(), sl2);
        println!(
            "  03c printed sl2 witness: FAIL — with e = e2, f = -2 e3, h = 2 e1 the \
             product [e, f] = e2·(-2 e3) = -2 e1 equals -h, not h; the column (1,2) \
             of the reached matrix differs from the printed sl2 matrix by a sign. \
             The sign-adjusted witness f = +2 e3 maps A4(-1) onto the printed sl2 \
             matrix exactly (verified), and the verification report records the \
             printed witness as REFUTED alongside the verified adjustment."
        );
        failed.push("03c printed sl2 witness (sign error in the source)");
    } else {
        println!("  03c printed sl2 witness: PASS");
    }

    println!(
        "ACCEPTANCE 03 known isomorphisms: {} ({:?})",
        if failed.is_empty() { "PASS" } else { "FAIL" },
        t0.elapsed()
    );
    assert!(failed.is_empty(), "failed clauses: {failed:?}");
}

#[test]
fn acceptance_04_derivation_solver_vs_oracle() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for trial in 0..200 {
        let a = random_anticommutative(&mut rng, 2);
        let kron = derivation_system_matrix(a.matrix(), 3).nullspace();
        let leib = leibniz_system_matrix(a.matrix(), 3).nullspace();
        assert_eq!(kron.len(), leib.len(), "trial {trial}: dimensions differ");
        // double inclusion: each basis of one lies in the span of the other
        let dim = kron.len();
        if dim > 0 {
            let cols_k: Vec<Vec<FieldElement>> = kron.iter().map(|v| v.column(0)).collect();
            let cols_l: Vec<Vec<FieldElement>> = leib.iter().map(|v| v.column(0)).collect();
            let mut all = cols_k.clone();
            all.extend(cols_l.clone());
            assert_eq!(
                Matrix::from_columns(&all).rank(),
                dim,
                "trial {trial}: subspaces differ"
            );
        }
        // closure of Der under the commutator [D, E] = DE − ED
        let der = acalg::derivations::derivations(&a).unwrap();
        if der.dimension > 0 {
            let basis_vecs: Vec<Vec<FieldElement>> = der
                .basis
                .iter()
                .map(|d| {
                    (0..3)
                        .flat_map(|r| (0..3).map(move |c| (r, c)))
                        .map(|(r, c)| d.at(r, c).clone())
                        .collect()
                })
                .collect();
            let span = Matrix::from_columns(&basis_vecs);
            for x in &der.basis {
                for y in &der.basis {
                    let comm = x.mul(y).unwrap().sub(&y.mul(x).unwrap()).unwrap();
                    let v: Vec<FieldElement> = (0..3)
                        .flat_map(|r| (0..3).map(move |c| (r, c)))
                        .map(|(r, c)| comm.at(r, c).clone())
                        .collect();
                    let mut cols = basis_vecs.clone();
                    cols.push(v);
                    assert_eq!(
                        Matrix::from_columns(&cols).rank(),
                        span.rank(),
                        "trial {trial}: commutator leaves Der"
                    );
                }
            }
        }
    }
    println!(
        "ACCEPTANCE 04 derivation solver vs oracle (200 random): PASS ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_05_derivation_automorphism_audit() {
    let t0 = Instant::now();
    let audits = verify_claimed_families().unwrap();
    let again = verify_claimed_families().unwrap();
    assert_eq!(
        serde_json::to_string(&audits).unwrap(),
        serde_json::to_string(&again).unwrap(),
        "audit must be deterministic"
    );
    for a in &audits {
        assert!(matches!(
            a.status,
            ClaimStatus::Verified | ClaimStatus::Refuted | ClaimStatus::Partial
        ));
        if a.status == ClaimStatus::Refuted && a.residual.is_some() {
            let fam = format!("A{}", &a.id.split('_').nth(1).unwrap()[1..]);
            assert!(
                replay_residual(&fam, a.kind, a.residual.as_ref().unwrap()).unwrap(),
                "{}: refutation payload must replay",
                a.id
            );
        }
    }
    // the published Der(A1)/Aut(A1) rows must exercise the refuted pathway,
    // with the transposed-convention outcome recorded either way
    for id in ["der_A1", "aut_A1"] {
        let a = audits.iter().find(|a| a.id == id).unwrap();
        assert_eq!(a.status, ClaimStatus::Refuted, "{id}");
        assert!(!a.sound_standard, "{id} fails the standard convention");
        // transposed outcome recorded (here: also unsound)
        assert!(!a.sound_transposed, "{id} transposed outcome recorded");
        assert!(a.residual.is_some() && a.residual_transposed.is_some());
    }
    for a in &audits {
        println!("  05 {}: {:?}", a.id, a.status);
    }
    println!(
        "ACCEPTANCE 05 derivation/automorphism audit: PASS ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_06_classifier_round_trip() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut family_mismatches: Vec<(String, String)> = Vec::new();
    let mut label_change_count = 0usize;
    let mut stability_violations = 0usize;
    for (name, fam, _, alg) in catalog_forms() {
        if fam == Family::Trivial {
            continue;
        }
        let base = classify(&alg).unwrap();
        for _ in 0..100 {
            let g = random_invertible(&mut rng, 3);
            let conj = alg.act(&g).unwrap();
            let label = classify(&conj).unwrap();
            // witness re-verified externally on top of classify's own check
            let canonical = label.canonical_msc();
            let reached = conj
                .promote(&label.descriptor)
                .unwrap()
                .act(&label.witness)
                .unwrap();
            assert_eq!(reached, canonical, "{name}: witness equation");
            if !label.same_class(&base) {
                stability_violations += 1;
            }
            if label.family != fam {
                label_change_count += 1;
                if !family_mismatches.iter().any(|(n, _)| n == &name) {
                    family_mismatches.push((name.clone(), label.describe()));
                }
            }
        }
    }
    assert_eq!(stability_violations, 0, "labels must be class invariants");
    // pinned regression value: 100 conjugates for each of the 11 forms whose
    // published family is redundant (the 6 A7 samples, A4 at {−2, 0, 1/2, 2},
    // and A2(1)) classify into the canonical class with a cross-family
    // witness; all other 2900 − 1100 round trips preserve the family.
    assert_eq!(label_change_count, 1100, "pinned cross-class witness count");
    for (name, to) in &family_mismatches {
        println!("  06 cross-class witness: {name} -> {to} (verified entrywise)");
    }
    let pass = family_mismatches.is_empty();
    println!(
        "ACCEPTANCE 06 classifier round-trip: {} ({:?})",
        if pass { "PASS" } else { "FAIL" },
        t0.elapsed()
    );
    assert!(
        pass,
        "classify returned a different family for conjugates of {:?}; these published \
         families are redundant (each mapping carries an entrywise-verified witness): \
         A7(λ) ≅ A1 for every λ, A4(0) ≅ A3, A4(λ) ≅ A2(λ+1/λ−1) for λ ∉ {{0, ±1}}, \
         A2(1) ≅ A5 — so \"returns the same family\" is unattainable for them",
        family_mismatches.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>()
    );
}

#[test]
fn acceptance_07_invariant_table_comparison() {
    let t0 = Instant::now();
    let r1 = verify_paper().unwrap();
    let r2 = verify_paper().unwrap();
    assert_eq!(
        to_canonical_json(&r1),
        to_canonical_json(&r2),
        "report must be deterministic"
    );
    let table = &r1.sections["05_invariant_table"];
    // completeness: all four rows at all six λ samples, three cells each,
    // plus the two separation sentences and the definition cross-check
    let cell_count = table
        .iter()
        .filter(|e| e.claim.starts_with("table cell"))
        .count();
    assert_eq!(cell_count, 3 * (6 + 1 + 6 + 1), "every table cell audited");
    for e in table {
        assert!(
            matches!(e.status, Status::Verified | Status::Discrepancy),
            "cell entries end VERIFIED or DISCREPANCY: {}",
            e.claim
        );
        if e.status == Status::Discrepancy {
            assert!(e.payload.is_some(), "discrepancies carry payloads");
        }
    }
    let verified = table.iter().filter(|e| e.status == Status::Verified).count();
    let discrepant = table.iter().filter(|e| e.status == Status::Discrepancy).count();
    println!("  07 table cells: {verified} VERIFIED, {discrepant} DISCREPANCY");
    println!(
        "ACCEPTANCE 07 invariant-table comparison: PASS ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_08_pairwise_separation() {
    let t0 = Instant::now();
    // first half: pairwise separation of the printed non-Lie forms over Q
    let mut forms: Vec<(String, Msc)> = Vec::new();
    for fam in Family::non_lie_families() {
        if fam.is_parametric() {
            for lam in lambda_samples() {
                if fam == Family::A4 && lam == q(-1, 1) {
                    continue; // A4(−1) is the Lie algebra sl2
                }
                forms.push((
                    format!("{}({})", fam.name(), lam),
                    catalog::canonical_msc(fam, Some(&lam), &qdesc()),
                ));
            }
        } else {
            forms.push((
                fam.name().to_string(),
                catalog::canonical_msc(fam, None, &qdesc()),
            ));
        }
    }
    let mut isomorphic_pairs = Vec::new();
    for i in 0..forms.len() {
        for j in (i + 1)..forms.len() {
            match isomorphic(&forms[i].1, &forms[j].1).unwrap() {
                IsoResult::Isomorphic(_) => {
                    isomorphic_pairs.push(format!("{} ≅ {}", forms[i].0, forms[j].0));
                }
                IsoResult::NonIsomorphic { .. } => {}
            }
        }
    }

    // second half: exhaustive finite-field evidence. Over GF(3) and GF(5),
    // catalog pairs that the classification declares distinct must land in
    // distinct orbits for every parameter value in the prime field.
    for p in [3u64, 5] {
        let census = orbits::census(p).unwrap();
        let desc = FieldDescriptor::prime(p).unwrap();
        let mut catalog_fp: Vec<(String, Msc)> = Vec::new();
        for fam in Family::non_lie_families() {
            if fam.is_parametric() {
                for v in 0..p {
                    let lam = FieldElement::Fp { p, val: v };
                    catalog_fp.push((
                        format!("{}({v}) mod {p}", fam.name()),
                        catalog::canonical_msc(fam, Some(&lam), &desc),
                    ));
                }
            } else {
                catalog_fp.push((
                    format!("{} mod {p}", fam.name()),
                    catalog::canonical_msc(fam, None, &desc),
                ));
            }
        }
        for i in 0..catalog_fp.len() {
            for j in (i + 1)..catalog_fp.len() {
                let (la, lb) = (
                    classify(&catalog_fp[i].1),
                    classify(&catalog_fp[j].1),
                );
                if let (Ok(la), Ok(lb)) = (la, lb) {
                    let oa = census.orbit_of_msc(&catalog_fp[i].1).unwrap();
                    let ob = census.orbit_of_msc(&catalog_fp[j].1).unwrap();
                    if !la.same_class(&lb) {
                        assert_ne!(
                            oa, ob,
                            "{} vs {}: declared distinct but share a GF({p}) orbit",
                            catalog_fp[i].0, catalog_fp[j].0
                        );
                    } else {
                        assert_eq!(
                            oa, ob,
                            "{} vs {}: declared equal but in different GF({p}) orbits",
                            catalog_fp[i].0, catalog_fp[j].0
                        );
                    }
                }
            }
        }
        println!("  08 GF({p}): orbit evidence agrees with the classification on all catalog pairs");
    }

    let pass = isomorphic_pairs.is_empty();
    println!(
        "ACCEPTANCE 08 pairwise separation: {} ({:?})",
        if pass { "PASS" } else { "FAIL" },
        t0.elapsed()
    );
    assert!(
        pass,
        "the published list is not pairwise non-isomorphic; verified witnesses exist for: \
         {isomorphic_pairs:?}"
    );
}

#[test]
fn acceptance_09_orbit_census_gf3() {
    let t0 = Instant::now();
    let census = orbits::census(3).unwrap();
    assert_eq!(census.total, 19683, "3^9 algebras enumerated");
    let sum: u64 = census.orbits.iter().map(|o| o.size).sum();
    assert_eq!(sum, 19683, "orbit sizes sum to the total");
    for o in &census.orbits {
        assert_eq!(gl3_order(3) % o.size, 0, "orbit size divides 11232");
    }
    // pinned regression value, computed once by the full enumeration
    assert_eq!(census.orbit_count, 16, "pinned GF(3) orbit count");
    // invariant profiles constant on every orbit — exhaustive
    for idx in 0..census.total {
        let root = census.roots[idx as usize] as u64;
        let orbit = census
            .orbits
            .iter()
            .find(|o| o.representative == root)
            .unwrap();
        let alg = orbits::msc_from_digits(3, &orbits::index_to_digits(3, idx));
        assert_eq!(
            profile(&alg).unwrap(),
            orbit.profile,
            "profile not constant on orbit {root} at index {idx}"
        );
    }
    // orbit-stabilizer identity on all 16 orbits (the criterion samples 20)
    for o in &census.orbits {
        let stab = orbits::stabilizer_order(&census, o).unwrap();
        assert_eq!(o.size * stab, gl3_order(3), "orbit-stabilizer at {}", o.representative);
    }
    println!(
        "ACCEPTANCE 09 orbit census GF(3): PASS — 16 orbits, profiles constant on all 19683 members ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_10_za_comparison() {
    let t0 = Instant::now();
    let report = compare_with_k().unwrap();
    let names: BTreeSet<String> = report
        .entries
        .iter()
        .map(|e| e.name.split('(').next().unwrap().to_string())
        .collect();
    assert_eq!(
        names,
        ["ZA1", "ZA2", "ZA3", "ZA4", "ZA5"]
            .iter()
            .map(|s| s.to_string())
            .collect::<BTreeSet<_>>(),
        "all five ZA matrices classified"
    );
    for e in &report.entries {
        assert!(e.witness_verified, "{} must carry a verified witness", e.name);
    }
    // pinned attained set among the printed non-Lie families
    let attained: Vec<&str> = report.attained.iter().map(|f| f.name()).collect();
    assert_eq!(attained, vec!["A1", "A2", "A3", "A5"], "pinned attained set");
    // the published qualitative verdict is reproduced iff the attained set
    // is a proper subset of the six printed non-Lie families
    let six: BTreeSet<Family> = Family::non_lie_families().into_iter().collect();
    let proper_subset = report.attained.is_subset(&six) && report.attained != six;
    assert_eq!(report.incomplete, proper_subset);
    assert!(report.incomplete, "the rival list misses families: {:?}", report.missing);
    println!(
        "ACCEPTANCE 10 rival-list comparison: PASS — attained {attained:?}, verdict \"not complete\" ({:?})",
        t0.elapsed()
    );
}

#[test]
fn acceptance_11_subalgebra_lemma() {
    let t0 = Instant::now();
    // 200 random anti-commutative algebras over Q
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    for trial in 0..200 {
        let a = random_anticommutative(&mut rng, 3);
        let w = find_2dim_subalgebra(&a).unwrap();
        // verify u1·u2 ∈ span{u1, u2} by an explicit rank computation
        let desc = w.u1[0].descriptor();
        let a_ext = a.promote(&desc).unwrap();
        let prod = a_ext.product(&w.u1, &w.u2).unwrap();
        let cols = vec![w.u1.clone(), w.u2.clone(), prod];
        assert_eq!(
            Matrix::from_columns(&cols).rank(),
            2,
            "trial {trial}: witness leaves the plane"
        );
        // at most 4 tower generators adjoined
        if let FieldDescriptor::Tower(gens) = &desc {
            assert!(gens.len() <= 4, "trial {trial}: {} generators", gens.len());
        }
    }
    // GF(3): nontrivial-existence agrees with the exhaustive 13-plane search
    let desc3 = FieldDescriptor::prime(3).unwrap();
    let planes: Vec<Vec<FieldElement>> = {
        let fe = |v: u64| FieldElement::Fp { p: 3, val: v };
        let mut out = vec![vec![fe(0), fe(0), fe(1)]];
        for t in 0..3 {
            out.push(vec![fe(0), fe(1), fe(t)]);
        }
        for s in 0..3 {
            for t in 0..3 {
                out.push(vec![fe(1), fe(s), fe(t)]);
            }
        }
        out
    };
    assert_eq!(planes.len(), 13);
    let plane_bases: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = planes
        .iter()
        .map(|w| {
            let ns = Matrix::from_rows(vec![w.clone()]).nullspace();
            (ns[0].column(0), ns[1].column(0))
        })
        .collect();
    let _ = desc3;
    for idx in 0..orbits::total_algebras(3) {
        let alg = orbits::msc_from_digits(3, &orbits::index_to_digits(3, idx));
        // independent exhaustive oracle over the 13 planes
        let mut oracle = false;
        for (u1, u2) in &plane_bases {
            let prod = alg.product(u1, u2).unwrap();
            if prod.iter().all(|x| x.is_zero()) {
                continue;
            }
            let mut cols = vec![u1.clone(), u2.clone()];
            cols.push(prod);
            if Matrix::from_columns(&cols).rank() == 2 {
                oracle = true;
                break;
            }
        }
        let analysis = conic_candidates(&alg).unwrap();
        assert_eq!(
            analysis.nontrivial_exists, oracle,
            "index {idx}: conic analysis disagrees with the 13-plane search"
        );
    }
    println!(
        "ACCEPTANCE 11 subalgebra lemma: PASS — 200 random witnesses + exhaustive GF(3) agreement ({:?})",
        t0.elapsed()
    );
}
