//! Command-line surface: argument definitions, one report builder per
//! command, and JSON / table rendering.
//!
//! Reports are `serde_json` objects, so keys come out sorted. Every
//! non-integer number is rounded to 12 significant digits before printing,
//! which makes output byte-stable for fixed inputs and seed.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::distill::{
    plan_distillation, schmidt, BipartiteState, MAXIMAL_SPREAD_TOL, NORMALIZATION_TOL,
    SCHMIDT_RANK_TOL,
};
use crate::error::{Error, Result};
use crate::families::{
    apply_degenerate_mixer, apply_phase_family, degeneracy_structure, distillation_family,
    inconclusive_analysis, phase_transform, DENSITY_TOL, INCONCLUSIVE_RANK_TOL, UNITARY_TOL,
};
use crate::io::{
    read_matrix, read_matrix_list, read_state_set, round_floats, MatrixFile, StateSetFile,
    FILE_PRIOR_SUM_TOL,
};
use crate::numkernel::{norm, ComplexMatrix, C64, DEGENERACY_TOL, HERMITIAN_TOL, SINGULARITY_TOL};
use crate::simulate::{
    conclusive_probabilities, measure_distillation, measure_usd_with_tolerance, ShotResult,
    INCONCLUSIVE, SUCCESS,
};
use crate::usd::{
    analyze, min_pairwise_angle, optimal_pair, orthogonality_residual, population_report,
    synthesize_discriminator, LossyOperator, StateSet, DEFECT_FLOOR, DISCRIMINATION_TOL,
    NON_ORTHOGONAL_TOL, PASSIVITY_TOL, POPULATION_TOL,
};

/// Singular-value analysis of lossy operators for unambiguous state
/// discrimination and entanglement distillation.
#[derive(Debug, Parser)]
#[command(name = "usdkit", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub output: OutputFormat,

    /// Tolerance for output orthogonality checks (largest normalized
    /// off-diagonal of the output Gram matrix).
    #[arg(long, global = true, value_parser = parse_tolerance)]
    pub tol: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    /// Phases on the right singular vectors.
    Phase,
    /// Unitary mixing inside degenerate singular subspaces.
    Mixer,
    /// The set `K⁻¹·U₀`.
    Distillation,
    /// Only list the degenerate singular groups.
    Degeneracy,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singular values, best discriminable angle and its bounds.
    Analyze {
        /// Operator matrix file.
        operator: PathBuf,
        /// Also report how a discriminated set populates the singular vectors.
        #[arg(long)]
        states: Option<PathBuf>,
    },
    /// The closest pair of states the operator maps to orthogonal outputs.
    OptimalPair { operator: PathBuf },
    /// Build an operator that discriminates the given states.
    Discriminate {
        /// State-set file.
        states: PathBuf,
        /// Relative output weights, one per state, in (0, 1].
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Output basis as a unitary matrix file.
        #[arg(long)]
        unitary: Option<PathBuf>,
    },
    /// Local filter that turns a pure bipartite state maximally entangled.
    Distill {
        /// Coefficient matrix `C_ij` of `Σ C_ij |i⟩|j⟩`.
        state: PathBuf,
    },
    /// Further state sets discriminated by the same operator.
    Family {
        operator: PathBuf,
        #[arg(long, value_enum)]
        kind: FamilyKind,
        /// Discriminated state set to transform (phase, mixer).
        #[arg(long)]
        states: Option<PathBuf>,
        /// One phase per singular value, largest first; accepts `pi`, `-pi/2`, `0.25pi`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, value_parser = parse_angle)]
        phases: Option<Vec<f64>>,
        /// `U₀` for the distillation family (default identity).
        #[arg(long)]
        unitary: Option<PathBuf>,
        /// Block unitaries, one per degeneracy group, largest singular value first.
        #[arg(long)]
        blocks: Option<PathBuf>,
        /// Relative tolerance for grouping singular values.
        #[arg(long, value_parser = parse_tolerance)]
        degeneracy_tol: Option<f64>,
    },
    /// Inconclusive branch `M_?·ρ·M_?†` for a density matrix.
    Inconclusive {
        operator: PathBuf,
        #[arg(long)]
        rho: PathBuf,
    },
    /// Monte Carlo sampling of discrimination or distillation.
    Simulate {
        /// Operator matrix file (discrimination mode).
        #[arg(required_unless_present = "bipartite", requires = "states")]
        operator: Option<PathBuf>,
        /// State set to discriminate.
        #[arg(long)]
        states: Option<PathBuf>,
        /// Bipartite coefficient matrix (distillation mode).
        #[arg(long, conflicts_with_all = ["operator", "states"])]
        bipartite: Option<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        shots: u64,
        #[arg(long, env = "USDKIT_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn parse_tolerance(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err("tolerance must be positive and finite".into())
    }
}

/// A real number, optionally times `pi` and over a denominator: `1.5`,
/// `pi`, `-pi/2`, `0.25pi`, `3*pi/4`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let s = s.trim();
    let bad = || format!("invalid angle {s:?}");
    let Some((coef, rest)) = s.split_once("pi") else {
        return s.parse().map_err(|_| bad());
    };
    let coef = coef.trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let den = match rest.trim() {
        "" => 1.0,
        r => r
            .strip_prefix('/')
            .and_then(|d| d.trim().parse::<f64>().ok())
            .filter(|d| *d != 0.0)
            .ok_or_else(bad)?,
    };
    Ok(coef * PI / den)
}

/// Runs a parsed command and renders its report.
pub fn execute(cli: &Cli) -> Result<String> {
    let mut report = run(cli)?;
    round_floats(&mut report);
    Ok(match cli.output {
        OutputFormat::Json => {
            serde_json::to_string_pretty(&report).map_err(|e| Error::Internal(e.to_string()))?
        }
        OutputFormat::Table => render_table(&report),
    })
}

/// Machine-readable error document for stderr.
pub fn error_document(e: &Error) -> String {
    json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

pub fn run(cli: &Cli) -> Result<Value> {
    let tol = cli.tol.unwrap_or(DISCRIMINATION_TOL);
    let mut report = match &cli.command {
        Command::Analyze { operator, states } => cmd_analyze(operator, states.as_deref())?,
        Command::OptimalPair { operator } => cmd_optimal_pair(operator, tol)?,
        Command::Discriminate {
            states,
            weights,
            unitary,
        } => cmd_discriminate(states, weights.as_deref(), unitary.as_deref(), tol)?,
        Command::Distill { state } => cmd_distill(state)?,
        Command::Family {
            operator,
            kind,
            states,
            phases,
            unitary,
            blocks,
            degeneracy_tol,
        } => cmd_family(
            operator,
            *kind,
            FamilyInputs {
                states: states.as_deref(),
                phases: phases.as_deref(),
                unitary: unitary.as_deref(),
                blocks: blocks.as_deref(),
                degeneracy_tol: *degeneracy_tol,
            },
            tol,
        )?,
        Command::Inconclusive { operator, rho } => cmd_inconclusive(operator, rho)?,
        Command::Simulate {
            operator,
            states,
            bipartite,
            shots,
            seed,
        } => match (bipartite, operator, states) {
            (Some(b), _, _) => cmd_simulate_distillation(b, *shots, *seed)?,
            (None, Some(op), Some(st)) => cmd_simulate_usd(op, st, *shots, *seed, tol)?,
            _ => {
                return Err(Error::Parse(
                    "simulate needs OPERATOR with --states, or --bipartite".into(),
                ))
            }
        },
    };
    if let Value::Object(map) = &mut report {
        map.insert("command".into(), json!(command_name(&cli.command)));
        map.insert("tolerances".into(), tolerances(&cli.command, tol));
    }
    Ok(report)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Analyze { .. } => "analyze",
        Command::OptimalPair { .. } => "optimal-pair",
        Command::Discriminate { .. } => "discriminate",
        Command::Distill { .. } => "distill",
        Command::Family { .. } => "family",
        Command::Inconclusive { .. } => "inconclusive",
        Command::Simulate { .. } => "simulate",
    }
}

fn tolerances(c: &Command, orthogonality: f64) -> Value {
    let mut t = Map::new();
    let mut put = |k: &str, v: f64| {
        t.insert(k.into(), json!(v));
    };
    put("passivity", PASSIVITY_TOL);
    put("singularity", SINGULARITY_TOL);
    put("orthogonality", orthogonality);
    match c {
        Command::Analyze { .. } => {
            put("population", POPULATION_TOL);
            put("non_orthogonal", NON_ORTHOGONAL_TOL);
        }
        Command::OptimalPair { .. } => put("degeneracy", DEGENERACY_TOL),
        Command::Discriminate { .. } => {
            put("unitary", UNITARY_TOL);
            put("prior_sum", FILE_PRIOR_SUM_TOL);
        }
        Command::Distill { .. } => {
            put("normalization", NORMALIZATION_TOL);
            put("schmidt_rank", SCHMIDT_RANK_TOL);
            put("maximal_spread", MAXIMAL_SPREAD_TOL);
        }
        Command::Family { degeneracy_tol, .. } => {
            put("unitary", UNITARY_TOL);
            put("degeneracy", degeneracy_tol.unwrap_or(DEGENERACY_TOL));
        }
        Command::Inconclusive { .. } => {
            put("hermitian", HERMITIAN_TOL);
            put("density", DENSITY_TOL);
            put("inconclusive_rank", INCONCLUSIVE_RANK_TOL);
            put("defect_floor", DEFECT_FLOOR);
        }
        Command::Simulate { .. } => {
            put("defect_floor", DEFECT_FLOOR);
            put("normalization", NORMALIZATION_TOL);
        }
    }
    Value::Object(t)
}

fn load_operator(path: &Path) -> Result<LossyOperator> {
    LossyOperator::new(read_matrix(path)?)
}

fn cvec(v: &[C64]) -> Value {
    Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect())
}

fn mat(m: &ComplexMatrix) -> Value {
    json!(MatrixFile::from(m))
}

fn states_doc(s: &StateSet) -> Value {
    json!(StateSetFile::from(s))
}

fn insert_angle(map: &mut Map<String, Value>, prefix: &str, rad: f64) {
    map.insert(format!("{prefix}_rad"), json!(rad));
    map.insert(format!("{prefix}_deg"), json!(rad.to_degrees()));
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn cmd_analyze(operator: &Path, states: Option<&Path>) -> Result<Value> {
    let k = load_operator(operator)?;
    let r = analyze(&k);
    let mut out = Map::new();
    out.insert("dim".into(), json!(k.dim()));
    out.insert("singular_values".into(), json!(r.singular_values));
    out.insert("spectral_norm".into(), json!(r.spectral_norm));
    out.insert("passive".into(), json!(r.passive));
    out.insert("invertible".into(), json!(r.invertible));
    out.insert("non_discriminating".into(), json!(r.non_discriminating));
    insert_angle(&mut out, "best_angle", r.best_angle_rad);
    out.insert("condition_product".into(), json!(r.condition_product));
    let bounds = match (r.angle_lower_bound, r.angle_upper_bound) {
        (Some(lo), Some(hi)) => {
            let mut b = Map::new();
            insert_angle(&mut b, "lower", lo);
            insert_angle(&mut b, "upper", hi);
            Value::Object(b)
        }
        _ => Value::Null,
    };
    out.insert("bounds".into(), bounds);
    if let Some(path) = states {
        let set = read_state_set(path)?;
        let p = population_report(&k, &set)?;
        let mut pm = object(json!(p));
        pm.insert(
            "min_pairwise_angle_deg".into(),
            json!(p.min_pairwise_angle_rad.to_degrees()),
        );
        pm.insert("angle_gap_deg".into(), json!(p.angle_gap_rad.to_degrees()));
        out.insert("population".into(), Value::Object(pm));
    }
    Ok(Value::Object(out))
}

fn cmd_optimal_pair(operator: &Path, tol: f64) -> Result<Value> {
    let k = load_operator(operator)?;
    let p = optimal_pair(&k)?;
    let set = StateSet::from_columns(&[p.g_plus.clone(), p.g_minus.clone()])?;
    let outputs = ComplexMatrix::from_columns(&[p.out_plus.clone(), p.out_minus.clone()]);
    let residual = orthogonality_residual(&outputs);
    let mut out = Map::new();
    out.insert("g_plus".into(), cvec(&p.g_plus));
    out.insert("g_minus".into(), cvec(&p.g_minus));
    out.insert("out_plus".into(), cvec(&p.out_plus));
    out.insert("out_minus".into(), cvec(&p.out_minus));
    insert_angle(&mut out, "angle", p.angle_rad);
    out.insert("cos_angle".into(), json!(p.angle_rad.cos()));
    out.insert(
        "detection_probability".into(),
        json!(p.detection_probability),
    );
    out.insert("degenerate".into(), json!(p.degenerate));
    out.insert("output_gram_residual".into(), json!(residual));
    out.insert("orthogonal".into(), json!(residual <= tol));
    out.insert("states".into(), states_doc(&set));
    Ok(Value::Object(out))
}

fn cmd_discriminate(
    states: &Path,
    weights: Option<&[f64]>,
    unitary: Option<&Path>,
    tol: f64,
) -> Result<Value> {
    let set = read_state_set(states)?;
    let u = unitary.map(read_matrix).transpose()?;
    let d = synthesize_discriminator(&set, weights, u.as_ref())?;
    let k = &d.operator;
    let outputs = k.apply(&set)?;
    let residual = orthogonality_residual(&outputs);
    let success: Vec<f64> = set
        .normalized_states()?
        .iter()
        .map(|g| norm(&k.matrix().mul_vec(g)).powi(2))
        .collect();
    let r = analyze(k);

    let mut out = Map::new();
    out.insert("operator".into(), mat(k.matrix()));
    out.insert("weights".into(), json!(d.weights));
    out.insert("output_basis".into(), mat(&d.output_basis));
    out.insert("singular_values".into(), json!(r.singular_values));
    out.insert("spectral_norm".into(), json!(r.spectral_norm));
    insert_angle(&mut out, "best_angle", r.best_angle_rad);
    if set.len() >= 2 {
        insert_angle(&mut out, "min_pairwise_angle", min_pairwise_angle(&set)?);
    }
    out.insert("success_probabilities".into(), json!(success));
    let average = set
        .priors()
        .map(|p| p.iter().zip(&success).map(|(a, b)| a * b).sum::<f64>());
    out.insert("average_success_probability".into(), json!(average));
    out.insert("output_gram_residual".into(), json!(residual));
    out.insert("orthogonal".into(), json!(residual <= tol));
    Ok(Value::Object(out))
}

fn cmd_distill(state: &Path) -> Result<Value> {
    let input = BipartiteState::new(read_matrix(state)?)?;
    let plan = plan_distillation(&input)?;
    let before = schmidt(&input)?;
    let after = schmidt(&plan.output_state)?;
    let out_norm = plan.output_state.norm();
    let normalized_after: Vec<f64> = after
        .coefficients_lambda
        .iter()
        .map(|l| l / out_norm)
        .collect();

    let mut out = Map::new();
    out.insert(
        "success_probability".into(),
        json!(plan.success_probability),
    );
    out.insert("filtered_norm_squared".into(), json!(out_norm * out_norm));
    out.insert("filter".into(), mat(plan.filter.matrix()));
    out.insert("local_states".into(), mat(&plan.local_states));
    out.insert("output_state".into(), mat(plan.output_state.coefficients()));
    out.insert(
        "schmidt_coefficients".into(),
        json!(before.coefficients_lambda),
    );
    out.insert(
        "output_schmidt_coefficients".into(),
        json!(normalized_after),
    );
    out.insert(
        "output_schmidt_spread".into(),
        json!(after.relative_spread()),
    );
    out.insert(
        "maximally_entangled".into(),
        json!(after.relative_spread() < MAXIMAL_SPREAD_TOL),
    );
    Ok(Value::Object(out))
}

struct FamilyInputs<'a> {
    states: Option<&'a Path>,
    phases: Option<&'a [f64]>,
    unitary: Option<&'a Path>,
    blocks: Option<&'a Path>,
    degeneracy_tol: Option<f64>,
}

fn required<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T> {
    value.ok_or_else(|| Error::Parse(format!("--{flag} is required for --kind {kind}")))
}

fn cmd_family(operator: &Path, kind: FamilyKind, inputs: FamilyInputs, tol: f64) -> Result<Value> {
    let k = load_operator(operator)?;
    let mut out = Map::new();
    match kind {
        FamilyKind::Phase => {
            let set = read_state_set(required(inputs.states, "states", "phase")?)?;
            let phases = required(inputs.phases, "phases", "phase")?;
            let w = phase_transform(&k, phases)?;
            let moved = apply_phase_family(&k, &set, phases)?;
            let outputs = k.apply(&moved)?;
            let residual = orthogonality_residual(&outputs);
            let expected = &w.output_transform * &k.apply(&set)?;
            out.insert("kind".into(), json!("phase"));
            out.insert("phases".into(), json!(w.phases));
            out.insert("input_transform".into(), mat(&w.input_transform));
            out.insert("output_transform".into(), mat(&w.output_transform));
            out.insert("states".into(), states_doc(&moved));
            out.insert("output_gram_residual".into(), json!(residual));
            out.insert("orthogonal".into(), json!(residual <= tol));
            out.insert(
                "output_relation_residual".into(),
                json!(outputs.max_abs_diff(&expected)),
            );
        }
        FamilyKind::Mixer => {
            let set = read_state_set(required(inputs.states, "states", "mixer")?)?;
            let blocks = read_matrix_list(required(inputs.blocks, "blocks", "mixer")?)?;
            let mixed = apply_degenerate_mixer(&k, &set, &blocks)?;
            out.insert("kind".into(), json!("mixer"));
            out.insert(
                "groups".into(),
                json!(degeneracy_structure(&k, None).groups),
            );
            out.insert("mixer".into(), mat(&mixed.mixer));
            out.insert("states".into(), states_doc(&mixed.states));
            out.insert(
                "output_gram_residual".into(),
                json!(mixed.output_gram_residual),
            );
            out.insert(
                "orthogonal".into(),
                json!(mixed.output_gram_residual <= tol),
            );
        }
        FamilyKind::Distillation => {
            let u0 = match inputs.unitary {
                Some(p) => read_matrix(p)?,
                None => ComplexMatrix::identity(k.dim()),
            };
            let fam = distillation_family(&k, &u0)?;
            let outputs = k.apply(&fam.states)?;
            out.insert("kind".into(), json!("distillation"));
            out.insert("states".into(), states_doc(&fam.states));
            out.insert("gram".into(), mat(&fam.gram));
            out.insert("reference_gram".into(), mat(&fam.reference_gram));
            out.insert("output_residual".into(), json!(outputs.max_abs_diff(&u0)));
        }
        FamilyKind::Degeneracy => {
            let d = degeneracy_structure(&k, inputs.degeneracy_tol);
            out.insert("kind".into(), json!("degeneracy"));
            out.insert("singular_values".into(), json!(k.singular_values()));
            out.insert("group_sizes".into(), json!(d.group_sizes()));
            out.insert("groups".into(), json!(d.groups));
            out.insert("tolerance_used".into(), json!(d.tolerance_used));
        }
    }
    Ok(Value::Object(out))
}

fn cmd_inconclusive(operator: &Path, rho: &Path) -> Result<Value> {
    let k = load_operator(operator)?;
    let rho = read_matrix(rho)?;
    let a = inconclusive_analysis(&k, &rho)?;
    let mut out = Map::new();
    out.insert("m_question".into(), mat(&a.m_question));
    out.insert("e_question".into(), mat(&a.e_question));
    out.insert("rho_question".into(), mat(&a.rho_question));
    out.insert("rank".into(), json!(a.rank));
    out.insert("probability".into(), json!(a.probability));
    out.insert(
        "conclusive_probability".into(),
        json!(rho.trace().re - a.probability),
    );
    Ok(Value::Object(out))
}

fn frequency(count: u64, shots: u64) -> Option<f64> {
    (shots > 0).then(|| count as f64 / shots as f64)
}

fn standard_error(p: f64, shots: u64) -> Option<f64> {
    (shots > 0).then(|| (p * (1.0 - p) / shots as f64).sqrt())
}

fn counts_doc(r: &ShotResult) -> Value {
    json!(r.counts)
}

fn cmd_simulate_usd(
    operator: &Path,
    states: &Path,
    shots: u64,
    seed: u64,
    tol: f64,
) -> Result<Value> {
    let k = load_operator(operator)?;
    let set = read_state_set(states)?;
    let results = measure_usd_with_tolerance(&k, &set, shots, seed, tol)?;
    let table = conclusive_probabilities(&k, &set)?;
    let per_input: Vec<Value> = results
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let analytic: f64 = table[i].iter().sum();
            let misidentified: u64 = r
                .counts
                .iter()
                .filter(|(label, _)| label.as_str() != INCONCLUSIVE && **label != i.to_string())
                .map(|(_, c)| c)
                .sum();
            json!({
                "input": i,
                "counts": counts_doc(r),
                "analytic_probabilities": table[i],
                "analytic_conclusive_probability": analytic,
                "conclusive_frequency": frequency(r.conclusive(), shots),
                "standard_error": standard_error(analytic, shots),
                "misidentifications": misidentified,
            })
        })
        .collect();
    Ok(json!({
        "mode": "discrimination",
        "shots": shots,
        "seed": seed,
        "results": per_input,
    }))
}

fn cmd_simulate_distillation(bipartite: &Path, shots: u64, seed: u64) -> Result<Value> {
    let state = BipartiteState::new(read_matrix(bipartite)?)?;
    let plan = plan_distillation(&state)?;
    let r = measure_distillation(&plan, shots, seed)?;
    let p = plan.success_probability;
    Ok(json!({
        "mode": "distillation",
        "shots": shots,
        "seed": seed,
        "counts": counts_doc(&r),
        "success_probability": p,
        "success_frequency": frequency(r.count(SUCCESS), shots),
        "standard_error": standard_error(p, shots),
    }))
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn as_complex(v: &Value) -> Option<(f64, f64)> {
    match v.as_array()?.as_slice() {
        [re, im] => Some((re.as_f64()?, im.as_f64()?)),
        _ => None,
    }
}

fn fmt_complex((re, im): (f64, f64)) -> String {
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn fmt_scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_table(report: &Value) -> String {
    let mut out = String::new();
    walk("", report, &mut out);
    out.trim_end().to_string()
}

fn walk(path: &str, v: &Value, out: &mut String) {
    let child = |key: &str| {
        if path.is_empty() {
            key.to_string()
        } else {
            format!("{path}.{key}")
        }
    };
    match v {
        Value::Object(m) if m.contains_key("rows") && m.contains_key("data") => {
            let _ = writeln!(out, "{path}:");
            for row in m["data"].as_array().into_iter().flatten() {
                let cells: Vec<String> = row
                    .as_array()
                    .into_iter()
                    .flatten()
                    .map(|c| {
                        as_complex(c)
                            .map(fmt_complex)
                            .unwrap_or_else(|| fmt_scalar(c))
                    })
                    .collect();
                let _ = writeln!(out, "    {}", cells.join("  "));
            }
        }
        Value::Object(m) => m.iter().for_each(|(k, x)| walk(&child(k), x, out)),
        Value::Array(items) if items.iter().all(is_scalar) => {
            let cells: Vec<String> = items.iter().map(fmt_scalar).collect();
            let _ = writeln!(out, "{path:<40} [{}]", cells.join(", "));
        }
        Value::Array(items) if items.iter().all(|x| as_complex(x).is_some()) => {
            let cells: Vec<String> = items
                .iter()
                .filter_map(as_complex)
                .map(fmt_complex)
                .collect();
            let _ = writeln!(out, "{path:<40} [{}]", cells.join(", "));
        }
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, x)| walk(&format!("{path}[{i}]"), x, out)),
        scalar => {
            let _ = writeln!(out, "{path:<40} {}", fmt_scalar(scalar));
        }
    }
}
