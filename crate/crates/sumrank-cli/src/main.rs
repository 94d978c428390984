//! Command-line checks for sum-rank codes.
//!
//! Every command reads a code from a structured file (or, for `sweep`,
//! enumerates a whole family), runs the corresponding library checks, and
//! prints a report: named boolean verdicts, supporting details with any
//! witnesses, and timing. Exit status 0 means every verdict passed, 1
//! means a mathematical check failed, 2 an input problem, 3 a scale guard
//! refusal.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use sumrank::{
    check_code, check_ground, code_wei_duality_check, code_weights, default_modulus,
    duality_commutes, msrd_matrix_criterion, msrd_rank,
    reconstructed_dual_weights, route_equality_check, run_sweep, singleton_check, srank,
    subcode_weights_bruteforce, support_of_subcode, support_of_subcode_exhaustive, CheckOptions,
    Error, FieldLevel, FieldTower, Ground, Matrix, MsrdCertificate, MsrdWitness, ScaleGuard,
    SumMatroid, SumRankCode, SweepFailure,
};

#[derive(Parser)]
#[command(name = "sumrank", version, about = "Weight hierarchies, rank-function axioms, and extremality checks for sum-rank codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the report as one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Ceiling on lattice-scan state counts.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    max_lattice: u64,
    /// Ceiling on codeword and ambient-space enumerations.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    max_codewords: u64,
    /// Ceiling on composition-indexed scans such as the invertibility
    /// criterion.
    #[arg(long, global = true, default_value_t = 1 << 24)]
    max_compositions: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Weight hierarchy along both routes, with bound checks.
    Weights { file: PathBuf },
    /// Rank-function axioms, dual axioms, and duality identities.
    Axioms { file: PathBuf },
    /// Extremality certificate by the chosen method.
    Msrd {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Duality partition of {1..n} on both routes.
    Wei { file: PathBuf },
    /// Run the whole identity battery over every generator of a shape.
    Sweep {
        /// Field characteristic.
        #[arg(long)]
        p: u64,
        /// Extension degree of the top field.
        #[arg(long)]
        m: usize,
        /// Blocks as subfield_degree:length pairs, e.g. 1:2,2:1.
        #[arg(long)]
        blocks: String,
        /// Code dimension to sweep.
        #[arg(long)]
        k: usize,
        /// State ceiling for the sweep and every check inside it.
        #[arg(long, default_value_t = 1 << 24)]
        ceiling: u64,
        /// Check this many randomly sampled codes instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
        /// Seed for --sample; fixed default keeps runs reproducible.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Every brute-force oracle diffed against its fast path.
    Oracle { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Weights,
    Matrix,
    Both,
}

enum CliError {
    Input(String),
    Scale(String),
}

/// Errors raised while reading or constructing inputs.
fn input(e: Error) -> CliError {
    CliError::Input(e.to_string())
}

/// Errors raised mid-check: only the guard refusal is not an input issue.
fn classify(e: Error) -> CliError {
    match e {
        Error::ScaleExceeded { .. } => CliError::Scale(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

struct Report {
    command: &'static str,
    input: Value,
    verdicts: BTreeMap<String, bool>,
    details: Value,
}

/// Structured code file. Field elements appear as coefficient lists over
/// GF(p), never as raw indices, so files stay portable across modulus
/// conventions.
#[derive(Deserialize)]
struct CodeSpecFile {
    p: u64,
    m: usize,
    modulus: Vec<u64>,
    blocks: Vec<BlockSpec>,
    generator: Vec<Vec<Vec<u64>>>,
}

#[derive(Deserialize)]
struct BlockSpec {
    subfield_degree: usize,
    n: usize,
}

fn load_code(path: &Path) -> Result<SumRankCode, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let spec: CodeSpecFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let degrees: Vec<usize> = spec.blocks.iter().map(|b| b.subfield_degree).collect();
    let profile: Vec<usize> = spec.blocks.iter().map(|b| b.n).collect();
    let tower = FieldTower::new(spec.p, spec.m, &spec.modulus, &degrees).map_err(input)?;
    let ground = Ground::new(tower.clone(), profile).map_err(input)?;
    let mut rows = Vec::new();
    for row in &spec.generator {
        let mut out = Vec::new();
        for entry in row {
            out.push(tower.from_coeffs(entry).map_err(input)?);
        }
        rows.push(out);
    }
    SumRankCode::from_rows(ground, rows).map_err(input)
}

fn coeff_vec(tower: &Arc<FieldTower>, v: &[sumrank::FieldElem]) -> Value {
    Value::Array(v.iter().map(|&x| json!(tower.coeffs(x))).collect())
}

fn matrix_json(m: &Matrix) -> Value {
    let tower = m.tower();
    Value::Array((0..m.rows()).map(|r| coeff_vec(tower, m.row(r))).collect())
}

fn witness_json(code: &SumRankCode, witness: &MsrdWitness) -> Value {
    match witness {
        MsrdWitness::ShortCodeword(w) => json!({
            "type": "short_codeword",
            "codeword": coeff_vec(code.ground().tower(), w),
            "weight": srank(code.ground(), w),
        }),
        MsrdWitness::SingularTransform { composition, blocks } => json!({
            "type": "singular_transform",
            "composition": composition,
            "blocks": blocks.iter().map(matrix_json).collect::<Vec<_>>(),
        }),
    }
}

/// Feeds a certificate's witness back through the library.
fn witness_revalidates(code: &SumRankCode, cert: &MsrdCertificate) -> bool {
    match &cert.witness {
        None => true,
        Some(MsrdWitness::ShortCodeword(w)) => {
            code.contains(w)
                && !w.iter().all(|x| x.is_zero())
                && srank(code.ground(), w) <= code.length() - code.dimension()
        }
        Some(MsrdWitness::SingularTransform { blocks, .. }) => {
            !code.generator().mul(&Matrix::block_diag(blocks)).invertible()
        }
    }
}

fn failure_json(f: &SweepFailure) -> Value {
    json!({
        "generator": matrix_json(&f.generator),
        "check": format!("{:?}", f.check),
        "detail": f.detail,
    })
}

fn cmd_weights(file: &Path, guard: ScaleGuard) -> Result<Report, CliError> {
    let code = load_code(file)?;
    let routes = route_equality_check(&code, &guard).map_err(classify)?;
    let n = code.length();
    let k = code.dimension();
    let h = &routes.code_route;
    let mut verdicts = BTreeMap::new();
    verdicts.insert("hierarchies_agree".into(), routes.holds());
    verdicts.insert(
        "strictly_increasing".into(),
        h.is_strictly_increasing() && h.is_within_bounds(n),
    );
    verdicts.insert("singleton_bound".into(), singleton_check(h, n, k).holds());
    Ok(Report {
        command: "weights",
        input: json!({ "file": file.display().to_string() }),
        verdicts,
        details: json!({
            "n": n,
            "k": k,
            "code_hierarchy": h.weights(),
            "matroid_hierarchy": routes.matroid_route.weights(),
        }),
    })
}

fn cmd_axioms(file: &Path, guard: ScaleGuard) -> Result<Report, CliError> {
    let code = load_code(file)?;
    let m = SumMatroid::from_code(code.clone());
    let violations = m.check_axioms(&guard).map_err(classify)?;
    let dual = m.dual();
    let dual_violations = dual.check_axioms(&guard).map_err(classify)?;
    let commutes = duality_commutes(&code, &guard).map_err(classify)?;
    let double_dual = dual.dual().pointwise_equals(&m, &guard).map_err(classify)?;
    let mut verdicts = BTreeMap::new();
    verdicts.insert("rank_axioms".into(), violations.is_empty());
    verdicts.insert("dual_rank_axioms".into(), dual_violations.is_empty());
    verdicts.insert("duality_commutes".into(), commutes);
    verdicts.insert("double_dual_identity".into(), double_dual);
    Ok(Report {
        command: "axioms",
        input: json!({ "file": file.display().to_string() }),
        verdicts,
        details: json!({
            "matroid_rank": m.matroid_rank(),
            "violations": violations.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>(),
            "dual_violations":
                dual_violations.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>(),
        }),
    })
}

fn cmd_msrd(
    file: &Path,
    method: Method,
    lattice_guard: ScaleGuard,
    composition_guard: ScaleGuard,
) -> Result<Report, CliError> {
    let code = load_code(file)?;
    let mut verdicts = BTreeMap::new();
    let mut details = serde_json::Map::new();
    let by_weights = match method {
        Method::Weights | Method::Both => {
            Some(msrd_rank(&code, &lattice_guard).map_err(classify)?)
        }
        Method::Matrix => None,
    };
    let by_matrix = match method {
        Method::Matrix | Method::Both => {
            Some(msrd_matrix_criterion(&code, &composition_guard).map_err(classify)?)
        }
        Method::Weights => None,
    };
    let primary = by_weights.as_ref().or(by_matrix.as_ref()).expect("one method always runs");
    details.insert("is_msrd".into(), json!(primary.is_msrd));
    details.insert("msrd_rank".into(), json!(primary.msrd_rank));
    let mut revalidates = true;
    for cert in [&by_weights, &by_matrix].into_iter().flatten() {
        revalidates &= witness_revalidates(&code, cert);
    }
    verdicts.insert("witness_revalidates".into(), revalidates);
    if let (Some(w), Some(x)) = (&by_weights, &by_matrix) {
        verdicts.insert("methods_agree".into(), w.is_msrd == x.is_msrd);
    }
    let witness =
        [&by_weights, &by_matrix].into_iter().flatten().find_map(|c| c.witness.as_ref());
    details.insert(
        "witness".into(),
        witness.map_or(Value::Null, |w| witness_json(&code, w)),
    );
    if let Some(w) = &by_weights {
        details.insert("first_tight_index".into(), json!(w.msrd_rank));
    }
    Ok(Report {
        command: "msrd",
        input: json!({
            "file": file.display().to_string(),
            "method": match method {
                Method::Weights => "weights",
                Method::Matrix => "matrix",
                Method::Both => "both",
            },
        }),
        verdicts,
        details: Value::Object(details),
    })
}

fn cmd_wei(file: &Path, guard: ScaleGuard) -> Result<Report, CliError> {
    let code = load_code(file)?;
    let by_code = code_wei_duality_check(&code, &guard).map_err(classify)?;
    let m = SumMatroid::from_code(code.clone());
    let by_matroid = sumrank::wei_duality_check(&m, &guard).map_err(classify)?;
    let reconstructed = reconstructed_dual_weights(by_code.primal.weights(), code.length());
    let mut verdicts = BTreeMap::new();
    verdicts.insert("code_partition".into(), by_code.is_partition);
    verdicts.insert("matroid_partition".into(), by_matroid.is_partition);
    verdicts.insert(
        "routes_agree".into(),
        by_code.primal.weights() == by_matroid.primal.weights()
            && by_code.dual.weights() == by_matroid.dual.weights(),
    );
    verdicts.insert("dual_reconstructible".into(), reconstructed == by_code.dual.weights());
    Ok(Report {
        command: "wei",
        input: json!({ "file": file.display().to_string() }),
        verdicts,
        details: json!({
            "primal": by_code.primal.weights(),
            "dual": by_code.dual.weights(),
            "union_sorted": by_code.union_sorted,
        }),
    })
}

fn parse_blocks(s: &str) -> Result<(Vec<usize>, Vec<usize>), CliError> {
    let mut degrees = Vec::new();
    let mut profile = Vec::new();
    for part in s.split(',') {
        let (d, n) = part
            .split_once(':')
            .ok_or_else(|| CliError::Input(format!("block '{part}' is not degree:length")))?;
        degrees.push(
            d.trim().parse().map_err(|e| CliError::Input(format!("block '{part}': {e}")))?,
        );
        profile.push(
            n.trim().parse().map_err(|e| CliError::Input(format!("block '{part}': {e}")))?,
        );
    }
    Ok((degrees, profile))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    p: u64,
    m: usize,
    blocks: &str,
    k: usize,
    ceiling: u64,
    sample: Option<usize>,
    seed: u64,
) -> Result<Report, CliError> {
    let (degrees, profile) = parse_blocks(blocks)?;
    let modulus = default_modulus(p, m).map_err(input)?;
    let tower = FieldTower::new(p, m, &modulus, &degrees).map_err(input)?;
    let ground = Ground::new(tower.clone(), profile).map_err(input)?;
    let guard = ScaleGuard::new(ceiling);
    let options = CheckOptions::default();
    let (codes_run, skipped, failures) = match sample {
        None => {
            let outcome = run_sweep(&ground, k, &guard, &options).map_err(classify)?;
            (outcome.codes_run, outcome.rank_deficient_skipped, outcome.failures)
        }
        Some(count) => {
            if k > ground.n() {
                return Err(CliError::Input(format!(
                    "dimension {k} exceeds length {}",
                    ground.n()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut failures = Vec::new();
            let mut run = 0;
            let mut skipped = 0;
            while run < count {
                if skipped > 1000 * count.max(1) {
                    return Err(CliError::Input(
                        "sampling keeps hitting rank-deficient generators".into(),
                    ));
                }
                let g = Matrix::from_fn(&tower, FieldLevel::Top, k, ground.n(), |_, _| {
                    tower.element(rng.gen_range(0..tower.order()))
                });
                if g.rank() < k {
                    skipped += 1;
                    continue;
                }
                let code = SumRankCode::new(ground.clone(), g).map_err(input)?;
                failures.extend(check_code(&code, &guard, &options).map_err(classify)?);
                run += 1;
            }
            (run, skipped, failures)
        }
    };
    let mut verdicts = BTreeMap::new();
    verdicts.insert("all_codes_pass".into(), failures.is_empty());
    Ok(Report {
        command: "sweep",
        input: json!({
            "p": p, "m": m, "blocks": blocks, "k": k, "ceiling": ceiling,
            "sample": sample, "seed": seed,
        }),
        verdicts,
        details: json!({
            "codes_run": codes_run,
            "rank_deficient_skipped": skipped,
            "failures": failures.iter().map(failure_json).collect::<Vec<_>>(),
        }),
    })
}

fn cmd_oracle(
    file: &Path,
    lattice_guard: ScaleGuard,
    word_guard: ScaleGuard,
) -> Result<Report, CliError> {
    let code = load_code(file)?;
    let ground = code.ground();
    let k = code.dimension();
    let h = code_weights(&code, &lattice_guard).map_err(classify)?;
    let oracle_h = subcode_weights_bruteforce(&code, &word_guard).map_err(classify)?;
    let m = SumMatroid::from_code(code.clone());

    let min_distance = if k == 0 {
        None
    } else {
        Some(code.min_distance_bruteforce(&word_guard).map_err(classify)?)
    };
    let fast = support_of_subcode(ground, code.generator());
    let slow = support_of_subcode_exhaustive(ground, code.generator(), &word_guard)
        .map_err(classify)?;
    let mut projected_rank = true;
    let mut complement = true;
    let mut nullity = true;
    for lam in ground.lattice_elements(lattice_guard).map_err(classify)? {
        projected_rank &= code.rho(&lam) == code.rho_alt(&lam);
        complement &= code.c_of(&lam) == code.c_of_by_intersection(&lam);
        nullity &= code.intersection_dim(&lam) == m.nullity(&lam);
    }

    let mut verdicts = BTreeMap::new();
    verdicts.insert(
        "min_distance_matches_first_weight".into(),
        min_distance.map_or(true, |d| Some(&d) == h.weights().first()),
    );
    verdicts.insert("subcode_oracle_matches_hierarchy".into(), oracle_h == h.weights());
    verdicts.insert(
        "subcode_support_routes_agree".into(),
        fast.canonical_key() == slow.canonical_key(),
    );
    verdicts.insert(
        "support_spaces_match_filter".into(),
        check_ground(ground, &word_guard).map_err(classify)?.is_empty(),
    );
    verdicts.insert("projected_rank_routes_agree".into(), projected_rank);
    verdicts.insert("complement_routes_agree".into(), complement);
    verdicts.insert("nullity_matches_intersection".into(), nullity);
    Ok(Report {
        command: "oracle",
        input: json!({ "file": file.display().to_string() }),
        verdicts,
        details: json!({
            "hierarchy": h.weights(),
            "oracle_hierarchy": oracle_h,
            "min_distance": min_distance,
        }),
    })
}

/// Writes the report. A closed pipe downstream is not an error worth
/// panicking over, so io failures are returned for main to swallow.
fn emit(report: &Report, json_mode: bool, timing_ms: u128) -> std::io::Result<()> {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if json_mode {
        let value = json!({
            "command": report.command,
            "input": report.input,
            "verdicts": report.verdicts,
            "details": report.details,
            "timing_ms": timing_ms,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("report serializes"))?;
    } else {
        writeln!(out, "command: {}", report.command)?;
        writeln!(out, "input: {}", report.input)?;
        for (name, ok) in &report.verdicts {
            writeln!(out, "check {name}: {}", if *ok { "pass" } else { "FAIL" })?;
        }
        writeln!(
            out,
            "details: {}",
            serde_json::to_string_pretty(&report.details).expect("details serialize")
        )?;
        writeln!(out, "timing_ms: {timing_ms}")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let lattice_guard = ScaleGuard::new(cli.max_lattice);
    let word_guard = ScaleGuard::new(cli.max_codewords);
    let composition_guard = ScaleGuard::new(cli.max_compositions);
    let start = Instant::now();
    let result = match &cli.command {
        Command::Weights { file } => cmd_weights(file, lattice_guard),
        Command::Axioms { file } => cmd_axioms(file, lattice_guard),
        Command::Msrd { file, method } => {
            cmd_msrd(file, *method, lattice_guard, composition_guard)
        }
        Command::Wei { file } => cmd_wei(file, lattice_guard),
        Command::Sweep { p, m, blocks, k, ceiling, sample, seed } => {
            cmd_sweep(*p, *m, blocks, *k, *ceiling, *sample, *seed)
        }
        Command::Oracle { file } => cmd_oracle(file, lattice_guard, word_guard),
    };
    match result {
        Ok(report) => {
            let _ = emit(&report, cli.json, start.elapsed().as_millis());
            if report.verdicts.values().all(|&v| v) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("input error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Scale(msg)) => {
            eprintln!("scale guard: {msg}");
            ExitCode::from(3)
        }
    }
}
