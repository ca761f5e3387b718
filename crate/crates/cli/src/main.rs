//! `orbconf`: command-line front end for the orbconf library.

mod render;

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use orbconf::arrangement::{
    arrangement_report, enumerate_chambers, ArrangementError, MAX_CHAMBER_DIM, MAX_CHAMBER_HYPERPLANES,
};
use orbconf::covering::{verify_cover, CoverMap, SamplePlan};
use orbconf::exactfield::{GaussianRational, Rational, DEFAULT_EPSILON};
use orbconf::groupoid::{
    identity_hom, is_covering_hom, is_equivalence, morita_triple, subgroup_inclusion, translation_groupoid,
    verify_hom, ActionSpec, FiniteGroupoid, GroupSpec, GroupoidError, GroupoidHom,
};
use orbconf::obstruction::{quasifibration_witness, ObstructionError};
use orbconf::orbit_config::{
    braid_arrangement, case1_arrangement, case2_truncated_arrangement, case3_x_arrangement, ArrangementSpec,
};
use orbconf::orbmodel::{classify, parse_orbifold, OrbifoldError, OrbifoldParseError, PlanarAction};

const SCHEMA: u32 = 1;

/// Exit codes.
mod exit {
    pub const INTERNAL: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const REFLECTOR: u8 = 3;
    pub const GUARD_RAIL: u8 = 4;
    pub const VERIFY_FAILED: u8 = 5;
    pub const NO_WITNESS: u8 = 6;
}

#[derive(Parser, Debug)]
#[command(name = "orbconf", version, about = "Orbit configuration spaces of 2-orbifolds: exact checks")]
struct Cli {
    /// Seed for every sampling step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Tolerance for approximate comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    /// Translation window half-width (qE) or lattice window (case2 builder).
    #[arg(long, global = true, default_value_t = 3)]
    window: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
enum Command {
    /// Classify a 2-orbifold given as JSON.
    Classify {
        /// Spec file, or `-` for stdin.
        input: String,
    },
    /// Invariants of a hyperplane arrangement, from a builder or a JSON file.
    Arrangement {
        /// Spec file, or `-` for stdin.
        #[arg(required_unless_present = "builder", conflicts_with = "builder")]
        input: Option<String>,
        #[arg(long, value_enum)]
        builder: Option<Builder>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Sample-based verification of a covering map.
    VerifyCover {
        #[arg(value_enum)]
        map: MapId,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Fiber pair showing the forgetful projection is not a quasifibration.
    Obstruction {
        /// Action spec file, or `-` for stdin.
        #[arg(required_unless_present = "m", conflicts_with = "m")]
        input: Option<String>,
        /// Rotation of order m about 0, instead of an action file.
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        n: usize,
    },
    /// Checks on a finite groupoid model.
    Groupoid {
        /// Model file, or `-` for stdin.
        input: String,
        #[arg(long, value_enum, default_value_t = Check::Axioms)]
        check: Check,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Builder {
    Braid,
    Case1,
    #[value(name = "case3X")]
    #[serde(rename = "case3X")]
    Case3X,
    Case2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
enum MapId {
    #[value(name = "q")]
    #[serde(rename = "q")]
    Q,
    #[value(name = "squaring")]
    #[serde(rename = "squaring")]
    Squaring,
    #[value(name = "qE")]
    #[serde(rename = "qE")]
    QE,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Check {
    Axioms,
    Hom,
    Covering,
    Equivalence,
    Morita,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn input(message: impl std::fmt::Display) -> Self {
        Failure::new(exit::INPUT, message.to_string())
    }
}

/// Result of a subcommand: its JSON body and whether it passed.
struct Outcome {
    result: Value,
    pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("orbconf: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    if !(cli.epsilon.is_finite() && cli.epsilon > 0.0) {
        return Err(Failure::input("--epsilon must be positive"));
    }
    if cli.samples == 0 {
        return Err(Failure::input("--samples must be at least 1"));
    }
    let outcome = match &cli.command {
        Command::Classify { input } => cmd_classify(input)?,
        Command::Arrangement { input, builder, n, m } => cmd_arrangement(cli, input.as_deref(), *builder, *n, *m)?,
        Command::VerifyCover { map, n } => cmd_verify_cover(cli, *map, *n)?,
        Command::Obstruction { input, m, n } => cmd_obstruction(input.as_deref(), *m, *n)?,
        Command::Groupoid { input, check } => cmd_groupoid(input, *check)?,
    };
    let report = json!({
        "tool": "orbconf",
        "version": env!("CARGO_PKG_VERSION"),
        "schema": SCHEMA,
        "subcommand": subcommand_name(&cli.command),
        "seed": cli.seed,
        "config": {
            "command": cli.command,
            "seed": cli.seed,
            "epsilon": cli.epsilon,
            "samples": cli.samples,
            "window": cli.window,
            "format": cli.format,
            "out": cli.out,
        },
        "pass": outcome.pass,
        "result": outcome.result,
    });
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Table => render::table(&report),
    };
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(exit::INTERNAL, format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(if outcome.pass { 0 } else { failure_code(&cli.command) })
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::Classify { .. } => "classify",
        Command::Arrangement { .. } => "arrangement",
        Command::VerifyCover { .. } => "verify-cover",
        Command::Obstruction { .. } => "obstruction",
        Command::Groupoid { .. } => "groupoid",
    }
}

fn failure_code(c: &Command) -> u8 {
    match c {
        Command::Obstruction { .. } => exit::NO_WITNESS,
        _ => exit::VERIFY_FAILED,
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::input(format!("cannot read stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {path}: {e}")))
    }
}

/// Parses an input file, refusing unknown schema versions.
fn parse_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<(T, String), Failure> {
    let text = read_input(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Failure::input(format!("{path}: {e}")))?;
    if let Some(v) = value.get("schema") {
        if v.as_u64() != Some(SCHEMA as u64) {
            return Err(Failure::input(format!("{path}: unsupported schema {v}")));
        }
    }
    let parsed = serde_json::from_value(value).map_err(|e| Failure::input(format!("{path}: {e}")))?;
    Ok((parsed, text))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serializes")
}

fn cmd_classify(input: &str) -> Result<Outcome, Failure> {
    let (_, text) = parse_json::<Value>(input)?;
    let o = parse_orbifold(&text).map_err(|e| match e {
        OrbifoldParseError::Invalid(OrbifoldError::Reflector) => Failure::new(exit::REFLECTOR, e.to_string()),
        e => Failure::input(e),
    })?;
    Ok(Outcome {
        result: json!({ "orbifold": o, "classification": classify(&o) }),
        pass: true,
    })
}

fn cmd_arrangement(
    cli: &Cli,
    input: Option<&str>,
    builder: Option<Builder>,
    n: Option<usize>,
    m: Option<u32>,
) -> Result<Outcome, Failure> {
    let need_n = || n.ok_or_else(|| Failure::input("this builder needs --n"));
    let a: ArrangementSpec = match (input, builder) {
        (Some(path), _) => parse_json(path)?.0,
        (None, Some(b)) => match b {
            Builder::Braid => braid_arrangement(need_n()?),
            Builder::Case1 => case1_arrangement(need_n()?, m.ok_or_else(|| Failure::input("case1 needs --m"))?),
            Builder::Case3X => case3_x_arrangement(need_n()?),
            Builder::Case2 => case2_truncated_arrangement(need_n()?, cli.window as i64),
        }
        .map_err(Failure::input)?,
        (None, None) => return Err(Failure::input("give an input file or --builder")),
    };
    if a.is_rational() && (a.dim > MAX_CHAMBER_DIM || a.len() > MAX_CHAMBER_HYPERPLANES) {
        return Err(Failure::new(
            exit::GUARD_RAIL,
            format!(
                "arrangement has dimension {} and {} hyperplanes; chamber operations are limited to \
                 dimension {MAX_CHAMBER_DIM} and {MAX_CHAMBER_HYPERPLANES} hyperplanes",
                a.dim,
                a.len()
            ),
        ));
    }
    if a.is_rational() {
        enumerate_chambers(&a, &Rational::one()).map_err(arrangement_failure)?;
    }
    let report = arrangement_report(&a).map_err(arrangement_failure)?;
    let pass = match (&report.chambers, report.enumerated_chambers) {
        (Some(c), Some(e)) => c.total == e as u64,
        _ => true,
    };
    Ok(Outcome {
        result: to_value(&report),
        pass,
    })
}

fn arrangement_failure(e: ArrangementError) -> Failure {
    if e.is_guard_rail() {
        Failure::new(exit::GUARD_RAIL, e.to_string())
    } else {
        Failure::input(e)
    }
}

fn cmd_verify_cover(cli: &Cli, map: MapId, n: Option<usize>) -> Result<Outcome, Failure> {
    let need_n = || n.ok_or_else(|| Failure::input("this map needs --n"));
    let map = match map {
        MapId::Q => CoverMap::Q,
        MapId::Squaring => CoverMap::Squaring { n: need_n()? },
        MapId::QE => CoverMap::QE { n: need_n()? },
    };
    let plan = SamplePlan {
        samples: cli.samples,
        seed: cli.seed,
        epsilon: cli.epsilon,
        window: cli.window,
    };
    let report = verify_cover(map, &plan).map_err(Failure::input)?;
    Ok(Outcome {
        pass: report.pass,
        result: to_value(&report),
    })
}

fn cmd_obstruction(input: Option<&str>, m: Option<u32>, n: usize) -> Result<Outcome, Failure> {
    let action: PlanarAction = match (input, m) {
        (_, Some(m)) => PlanarAction::rotation(m, GaussianRational::zero()).map_err(Failure::input)?,
        (Some(path), None) => parse_json(path)?.0,
        (None, None) => return Err(Failure::input("give an action file or --m")),
    };
    let w = quasifibration_witness(&action, n).map_err(|e| match e {
        ObstructionError::NoWitness(_) => Failure::new(exit::NO_WITNESS, e.to_string()),
        e => Failure::input(e),
    })?;
    Ok(Outcome {
        pass: true,
        result: json!({
            "b1": [w.at_fixed.b1, w.at_free.b1],
            "witness": w,
        }),
    })
}

/// Groupoid model file. Which fields are needed depends on the check.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupoidModel {
    #[serde(default)]
    schema: Option<u32>,
    /// An explicit groupoid, for `axioms`.
    groupoid: Option<FiniteGroupoid>,
    /// A group and its action, for the translation-groupoid checks.
    group: Option<GroupSpec>,
    action: Option<ActionSpec>,
    /// `H' ≤ H` for `covering` on `G(S, H') → G(S, H)`.
    subgroup: Option<Vec<usize>>,
    n1: Option<Vec<usize>>,
    n2: Option<Vec<usize>>,
    /// An explicit homomorphism `source → target`.
    source: Option<FiniteGroupoid>,
    target: Option<FiniteGroupoid>,
    hom: Option<GroupoidHom>,
}

fn missing(field: &str, check: Check) -> Failure {
    Failure::input(format!("the {check:?} check needs `{field}` in the model").to_lowercase())
}

fn model_failure(e: GroupoidError) -> Failure {
    Failure::input(e)
}

impl GroupoidModel {
    fn action(&self, check: Check) -> Result<orbconf::groupoid::GroupAction, Failure> {
        let group = self.group.as_ref().ok_or_else(|| missing("group", check))?;
        let action = self.action.as_ref().ok_or_else(|| missing("action", check))?;
        action.build(group.build().map_err(model_failure)?).map_err(model_failure)
    }

    /// The homomorphism to check: explicit, a subgroup inclusion, or the
    /// identity of a translation groupoid.
    fn hom(&self, check: Check) -> Result<(FiniteGroupoid, FiniteGroupoid, GroupoidHom), Failure> {
        if let Some(hom) = &self.hom {
            let s = self.source.clone().ok_or_else(|| missing("source", check))?;
            let t = self.target.clone().ok_or_else(|| missing("target", check))?;
            return Ok((s, t, hom.clone()));
        }
        let action = self.action(check)?;
        match &self.subgroup {
            Some(sub) => subgroup_inclusion(&action, sub).map_err(model_failure),
            None => {
                let g = translation_groupoid(&action);
                let id = identity_hom(&g);
                Ok((g.clone(), g, id))
            }
        }
    }
}

fn cmd_groupoid(input: &str, check: Check) -> Result<Outcome, Failure> {
    let (model, _) = parse_json::<GroupoidModel>(input)?;
    let _ = model.schema;
    let (pass, result) = match check {
        Check::Axioms => {
            let g = match &model.groupoid {
                Some(g) => g.clone(),
                None => translation_groupoid(&model.action(check)?),
            };
            let r = g.check_axioms();
            (r.pass, json!({ "objects": g.object_count(), "morphisms": g.morphism_count(), "axioms": r }))
        }
        Check::Hom => {
            let (s, t, f) = model.hom(check)?;
            let r = verify_hom(&s, &t, &f);
            (r.pass, json!({ "hom": r }))
        }
        Check::Covering => {
            let (s, t, f) = model.hom(check)?;
            let r = is_covering_hom(&s, &t, &f);
            (r.pass, json!({ "covering": r }))
        }
        Check::Equivalence => {
            let (s, t, f) = model.hom(check)?;
            let r = is_equivalence(&s, &t, &f);
            (r.pass, json!({ "equivalence": r }))
        }
        Check::Morita => {
            let action = model.action(check)?;
            let n1 = model.n1.as_ref().ok_or_else(|| missing("n1", check))?;
            let n2 = model.n2.as_ref().ok_or_else(|| missing("n2", check))?;
            let t = morita_triple(&action, n1, n2).map_err(model_failure)?;
            let size = |g: &FiniteGroupoid| json!({ "objects": g.object_count(), "morphisms": g.morphism_count() });
            (
                t.e1_report.pass && t.e2_report.pass,
                json!({
                    "intersection": t.intersection,
                    "k": size(&t.k),
                    "g1": size(&t.g1),
                    "g2": size(&t.g2),
                    "e1": t.e1_report,
                    "e2": t.e2_report,
                }),
            )
        }
    };
    Ok(Outcome { result, pass })
}
