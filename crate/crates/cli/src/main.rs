//! Command-line surface for the exact anti-commutative algebra toolkit.
//!
//! Exit codes: 0 = success with no findings; 1 = usage/IO/parse error;
//! 2 = the run succeeded but the report contains REFUTED or DISCREPANCY
//! entries; 3 = mathematical precondition failure (not anti-commutative,
//! missing square roots over a prime field, wrong dimension).

use acalg::classify::{classify, compare_with_k, isomorphic, ClassifyError, IsoResult};
use acalg::derivations::derivations;
use acalg::field::FieldError;
use acalg::invariants::{center, profile};
use acalg::msc::{matrix_to_strings, parse_msc, serialize_msc, Msc, MscError};
use acalg::orbits;
use acalg::report::{to_canonical_json, verify_paper};
use clap::{Parser, Subcommand};
use serde_json::json;
use sha2::{Digest, Sha256};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "acalg",
    about = "Exact classification and claim auditing for three-dimensional anti-commutative algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an MSC document and check the anti-commutativity predicate.
    Check { msc: PathBuf },
    /// Invariant profile: annihilator, derived subalgebra, derivations.
    Invariants { msc: PathBuf },
    /// Exact basis of the derivation algebra.
    Derivations { msc: PathBuf },
    /// Canonical label with a verified change-of-basis witness.
    Classify { msc: PathBuf },
    /// Isomorphism test with witness or separating evidence.
    Iso { a: PathBuf, b: PathBuf },
    /// Exhaustive orbit census over GF(p).
    Orbits {
        #[arg(long, default_value_t = 3)]
        prime: u64,
        /// Allow the large GF(5) census.
        #[arg(long)]
        long: bool,
        /// Binary cache for the orbit partition.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every implemented audit and emit the verification report.
    VerifyPaper {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify the rival ZA list and report family coverage.
    CompareK {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_msc(path: &PathBuf) -> Result<Msc, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(1)
    })?;
    parse_msc(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(1)
    })
}

fn math_error_code(e: &ClassifyError) -> u8 {
    match e {
        ClassifyError::NotAnticommutative(_, _) | ClassifyError::Dimension(_) => 3,
        ClassifyError::Field(FieldError::NoSquareRoot(_)) => 3,
        ClassifyError::Msc(MscError::NotAnticommutative(_)) => 3,
        _ => 1,
    }
}

fn write_or_print(out: &Option<PathBuf>, text: &str) -> Result<(), ExitCode> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            ExitCode::from(1)
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(code) => code,
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    match cli.command {
        Command::Check { msc } => {
            let a = read_msc(&msc)?;
            match a.anticommutativity_violation() {
                None => {
                    println!(
                        "OK: {}x{} structure constants over {} satisfy a^2 = 0",
                        a.dim(),
                        a.dim() * a.dim(),
                        a.descriptor()
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Some((i, j)) => {
                    eprintln!(
                        "violation of a^2 = 0: column pair ({i}, {j}) breaks anti-commutativity"
                    );
                    Ok(ExitCode::from(3))
                }
            }
        }
        Command::Invariants { msc } => {
            let a = read_msc(&msc)?;
            match profile(&a) {
                Ok(p) => {
                    let doc = json!({
                        "dim_ann": p.dim_ann,
                        "dim_center": center(&a).len(),
                        "dim_sq": p.dim_sq,
                        "dim_ann_cap_sq": p.dim_ann_cap_sq,
                        "dim_der": p.dim_der,
                        "is_lie": p.is_lie,
                        "dim_leftmult_der": p.dim_leftmult_der,
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(3))
                }
            }
        }
        Command::Derivations { msc } => {
            let a = read_msc(&msc)?;
            match derivations(&a) {
                Ok(d) => {
                    let doc = json!({
                        "dimension": d.dimension,
                        "basis": d.basis.iter().map(matrix_to_strings).collect::<Vec<_>>(),
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Classify { msc } => {
            let a = read_msc(&msc)?;
            match classify(&a) {
                Ok(label) => {
                    let doc = json!({
                        "family": label.family.name(),
                        "parameter": label.parameter.as_ref().map(|p| p.to_string()),
                        "lie_alias": label.lie_alias.as_ref().map(|a| a.name()),
                        "field": format!("{}", label.descriptor),
                        "witness": matrix_to_strings(label.witness.matrix()),
                        "canonical": serde_json::from_str::<serde_json::Value>(
                            &serialize_msc(&label.canonical_msc())
                        ).unwrap(),
                    });
                    println!("label: {}", label.describe());
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(math_error_code(&e)))
                }
            }
        }
        Command::Iso { a, b } => {
            let x = read_msc(&a)?;
            let y = read_msc(&b)?;
            match isomorphic(&x, &y) {
                Ok(IsoResult::Isomorphic(h)) => {
                    println!("isomorphic");
                    let doc = json!({
                        "witness_iso_action": matrix_to_strings(h.matrix()),
                        "relation": "B = h A (h^-1 kron h^-1)",
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(ExitCode::SUCCESS)
                }
                Ok(IsoResult::NonIsomorphic {
                    label_a,
                    label_b,
                    separating_invariant,
                }) => {
                    println!("not isomorphic: {label_a} vs {label_b}");
                    if let Some((name, va, vb)) = separating_invariant {
                        println!("separating invariant {name}: {va} vs {vb}");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(ExitCode::from(math_error_code(&e)))
                }
            }
        }
        Command::Orbits {
            prime,
            long,
            cache,
            out,
        } => {
            if prime == 5 && !long {
                eprintln!("error: the GF(5) census enumerates 5^9 algebras; pass --long to confirm");
                return Ok(ExitCode::from(1));
            }
            let census = match cache
                .as_ref()
                .filter(|p| p.exists())
                .map(|p| orbits::read_cache(p))
            {
                Some(Ok(c)) if c.p == prime => c,
                _ => match orbits::census(prime) {
                    Ok(c) => {
                        if let Some(path) = &cache {
                            if let Err(e) = orbits::write_cache(&c, path) {
                                eprintln!("warning: cannot write cache: {e}");
                            }
                        }
                        c
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        return Ok(ExitCode::from(1));
                    }
                },
            };
            let doc = json!({
                "p": census.p,
                "total": census.total,
                "orbit_count": census.orbit_count,
                "caveat": census.caveat,
                "orbits": census.orbits.iter().map(|o| json!({
                    "representative": o.representative,
                    "size": o.size,
                    "profile": o.profile,
                    "catalog_members": o.catalog_members,
                })).collect::<Vec<_>>(),
            });
            println!(
                "GF({}): {} algebras in {} orbits",
                census.p, census.total, census.orbit_count
            );
            write_or_print(&out, &serde_json::to_string_pretty(&doc).unwrap())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyPaper { out } => {
            let report = verify_paper().map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(1)
            })?;
            let text = to_canonical_json(&report);
            let mut hasher = Sha256::new();
            hasher.update(text.as_bytes());
            for (section, entries) in &report.sections {
                let mut counts = std::collections::BTreeMap::new();
                for e in entries {
                    *counts
                        .entry(format!("{:?}", e.status).to_uppercase())
                        .or_insert(0usize) += 1;
                }
                let summary: Vec<String> =
                    counts.iter().map(|(k, v)| format!("{v} {k}")).collect();
                println!("{section}: {}", summary.join(", "));
            }
            println!("summary: {:?}", report.summary);
            if let Some(path) = out {
                std::fs::write(&path, &text).map_err(|e| {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    ExitCode::from(1)
                })?;
                println!("report written to {}", path.display());
            }
            Ok(ExitCode::from(report.exit_code() as u8))
        }
        Command::CompareK { out } => {
            let report = compare_with_k().map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(math_error_code(&e))
            })?;
            for e in &report.entries {
                println!("{} -> {}", e.name, e.label);
            }
            let attained: Vec<&str> = report.attained.iter().map(|f| f.name()).collect();
            let missing: Vec<&str> = report.missing.iter().map(|f| f.name()).collect();
            println!(
                "attained: {:?}; missing: {:?}; verdict: {}",
                attained,
                missing,
                if report.incomplete {
                    "not complete"
                } else {
                    "complete"
                }
            );
            let doc = json!({
                "entries": report.entries.iter().map(|e| json!({
                    "name": e.name,
                    "label": e.label,
                    "note": e.parameter_note,
                    "witness_verified": e.witness_verified,
                })).collect::<Vec<_>>(),
                "attained": attained,
                "missing": missing,
                "incomplete": report.incomplete,
            });
            if let Some(path) = out {
                std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).map_err(
                    |e| {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        ExitCode::from(1)
                    },
                )?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
