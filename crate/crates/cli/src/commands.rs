use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{json, Value};

use satsched_core::model::{model_stats, write_mps};
use satsched_core::solver::SOLVE_SCHEMA;
use satsched_core::{
    brute_force, build, generate, normalize_and_clip, preprocess, resource_stats, solve_exact, validate, write_lp,
    GenSpec, ObjectiveKind, PreprocessResult, ReportRow, Schedule, SchedulingInstance, SolveLimits, SolveReport,
};

use crate::io::{
    check_single_stdin, csv_bytes, is_stdin, json_bytes, parse_instance, read_schedule_csv, write_output, Input,
    SCHEDULE_HEADER,
};
use crate::manifest::RunManifest;
use crate::{BuildArgs, Cli, Command, GenerateArgs, ModelFormat, PreprocessArgs, ReportArgs, SolveArgs, StatsArgs,
    UsageError, ValidateArgs};

pub const MODEL_SCHEMA: &str = "satsched/model/v1";

/// Run one subcommand; the returned value is the process exit status.
pub fn run(cli: &Cli) -> Result<u8> {
    let (code, manifest) = match &cli.command {
        Command::Generate(a) => generate_cmd(a)?,
        Command::Preprocess(a) => preprocess_cmd(a)?,
        Command::Stats(a) => stats_cmd(a)?,
        Command::Build(a) => build_cmd(a)?,
        Command::Solve(a) => solve_cmd(a)?,
        Command::Validate(a) => validate_cmd(a)?,
        Command::Report(a) => report_cmd(a)?,
    };
    if let Some(path) = &cli.manifest {
        let mut text = manifest.to_json();
        text.push('\n');
        write_output(Some(path), text.as_bytes())?;
    }
    Ok(code)
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Preprocessing of `inst`, or none at all.
fn prepare(inst: &SchedulingInstance, skip: bool) -> PreprocessResult {
    if skip {
        PreprocessResult::identity(inst)
    } else {
        preprocess(inst)
    }
}

fn generate_cmd(a: &GenerateArgs) -> Result<(u8, RunManifest)> {
    let spec = GenSpec::new(a.style, a.missions, a.resources, a.horizon, a.seed);
    spec.check().map_err(usage)?;
    let config = json!({ "spec": spec });
    let manifest = RunManifest::new("generate", Vec::new(), Some(a.seed), config);
    let inst = generate(&spec);
    let mut text = inst.to_json_with(Some(&manifest.digest));
    text.push('\n');
    write_output(a.output.as_deref(), text.as_bytes())?;
    Ok((0, manifest))
}

fn preprocess_cmd(a: &PreprocessArgs) -> Result<(u8, RunManifest)> {
    let input = Input::read(a.input.as_deref())?;
    let inst = parse_instance(&input)?;
    let manifest = RunManifest::new(
        "preprocess",
        vec![input.record()],
        None,
        json!({ "no_preprocess": a.no_preprocess }),
    );
    let prep = prepare(&inst, a.no_preprocess);
    let mut doc = prep.to_value();
    doc["manifest_digest"] = manifest.digest.clone().into();
    doc["mission_count"] = inst.mission_count().into();
    doc["surviving_windows"] = prep.reduced_instance.windows().len().into();
    doc["instance"] = inst.to_value();
    write_output(a.output.as_deref(), &json_bytes(&doc))?;
    Ok((0, manifest))
}

#[derive(Serialize)]
struct ResourceRow<'a> {
    instance: &'a str,
    resource: &'a str,
    delta: f64,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "T")]
    t: f64,
    #[serde(rename = "F")]
    f: f64,
    rn: usize,
    conf: Option<f64>,
}

#[derive(Serialize)]
struct SummaryRow {
    instance: String,
    paon: f64,
    paot: f64,
    n_prime: usize,
}

const RESOURCE_HEADER: [&str; 8] = ["instance", "resource", "delta", "N", "T", "F", "rn", "conf"];
const SUMMARY_HEADER: [&str; 4] = ["instance", "paon", "paot", "n_prime"];

fn stats_cmd(a: &StatsArgs) -> Result<(u8, RunManifest)> {
    let paths: Vec<Option<&Path>> = if a.inputs.is_empty() {
        vec![None]
    } else {
        a.inputs.iter().map(|p| Some(p.as_path())).collect()
    };
    check_single_stdin(&paths)?;
    if a.name.is_some() && paths.len() > 1 {
        return Err(usage("--name needs exactly one input"));
    }
    let inputs = paths.iter().map(|p| Input::read(*p)).collect::<Result<Vec<_>>>()?;
    let manifest = RunManifest::new(
        "stats",
        inputs.iter().map(Input::record).collect(),
        None,
        json!({ "name": a.name }),
    );

    let mut per_instance = Vec::new();
    for input in &inputs {
        let inst = parse_instance(input)?;
        let name = a.name.clone().unwrap_or_else(|| input.stem());
        let stats = resource_stats(&normalize_and_clip(&inst));
        let n_prime = preprocess(&inst).n_prime;
        per_instance.push((name, stats, n_prime));
    }
    let mut resource_rows = Vec::new();
    let mut summary_rows = Vec::new();
    for (name, stats, n_prime) in &per_instance {
        for r in &stats.per_resource {
            resource_rows.push(ResourceRow {
                instance: name,
                resource: &r.resource,
                delta: r.delta,
                n: r.window_count,
                t: r.total_visible,
                f: r.feasible_time,
                rn: r.capacity,
                conf: r.contention,
            });
        }
        summary_rows.push(SummaryRow {
            instance: name.clone(),
            paon: stats.paon,
            paot: stats.paot,
            n_prime: *n_prime,
        });
    }
    write_output(a.output.as_deref(), &csv_bytes(&manifest.digest, &RESOURCE_HEADER, &resource_rows)?)?;
    if let Some(path) = &a.summary {
        write_output(Some(path), &csv_bytes(&manifest.digest, &SUMMARY_HEADER, &summary_rows)?)?;
    }
    Ok((0, manifest))
}

fn sidecar_path(output: Option<&Path>) -> Option<PathBuf> {
    if is_stdin(output) {
        return None;
    }
    let out = output?;
    let mut name = out.file_name()?.to_os_string();
    name.push(".stats.json");
    Some(out.with_file_name(name))
}

fn build_cmd(a: &BuildArgs) -> Result<(u8, RunManifest)> {
    let format = match a.format {
        Some(f) => f,
        None => match a.output.as_deref().and_then(Path::extension) {
            Some(ext) if ext.eq_ignore_ascii_case("mps") => ModelFormat::Mps,
            _ => ModelFormat::Lp,
        },
    };
    let input = Input::read(a.input.as_deref())?;
    let inst = parse_instance(&input)?;
    let manifest = RunManifest::new(
        "build",
        vec![input.record()],
        None,
        json!({
            "formulation": a.formulation,
            "objective": a.objective,
            "format": format!("{format:?}").to_lowercase(),
            "no_preprocess": a.no_preprocess,
        }),
    );
    let prep = prepare(&inst, a.no_preprocess);
    let model = build(a.formulation, &inst, &prep, a.objective)?;
    let base = normalize_and_clip(&inst);
    let fixed_value = match a.objective {
        ObjectiveKind::Count => prep.preassigned.len() as u64,
        ObjectiveKind::Weight => prep.preassigned_weight(&base),
    };

    let (text, name_map) = match format {
        ModelFormat::Lp => (format!("\\ manifest_digest={}\n{}", manifest.digest, write_lp(&model)?), Vec::new()),
        ModelFormat::Mps => {
            let out = write_mps(&model);
            (format!("* manifest_digest={}\n{}", manifest.digest, out.text), out.name_map)
        }
    };
    write_output(a.output.as_deref(), text.as_bytes())?;

    let sidecar = json!({
        "schema": MODEL_SCHEMA,
        "manifest_digest": manifest.digest,
        "formulation": a.formulation,
        "objective": a.objective,
        "format": format!("{format:?}").to_lowercase(),
        "stats": model_stats(&model),
        "mission_count": inst.mission_count(),
        "n_prime": prep.n_prime,
        "surviving_windows": prep.reduced_instance.windows().len(),
        "preassigned": prep.preassigned.len(),
        "fixed_objective": fixed_value,
        "big_m": model.meta().big_m,
        "name_map": name_map,
    });
    if let Some(path) = a.stats.clone().or_else(|| sidecar_path(a.output.as_deref())) {
        write_output(Some(&path), &json_bytes(&sidecar))?;
    }
    Ok((0, manifest))
}

fn solve_cmd(a: &SolveArgs) -> Result<(u8, RunManifest)> {
    let time_limit = match a.time_limit {
        Some(s) if !(s > 0.0 && s.is_finite()) => return Err(usage(format!("--time-limit must be positive, got {s}"))),
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    let input = Input::read(a.input.as_deref())?;
    let inst = parse_instance(&input)?;
    let name = a.name.clone().unwrap_or_else(|| input.stem());
    let manifest = RunManifest::new(
        "solve",
        vec![input.record()],
        Some(a.seed),
        json!({
            "objective": a.objective,
            "time_limit": a.time_limit,
            "node_limit": a.node_limit,
            "threads": a.threads,
            "oracle": a.oracle,
            "no_preprocess": a.no_preprocess,
            "name": name,
        }),
    );

    let report = if a.oracle {
        let clock = Instant::now();
        let best = brute_force(&inst, a.objective)?;
        SolveReport::optimal("brute_force", a.objective, best, clock.elapsed().as_secs_f64())
    } else {
        let prep = prepare(&inst, a.no_preprocess);
        let limits = SolveLimits {
            time_limit,
            node_limit: a.node_limit,
            threads: a.threads as usize,
        };
        solve_exact(&inst, &prep, a.objective, limits)?
    };

    let mut doc = report.to_value();
    doc["instance"] = name.into();
    doc["manifest_digest"] = manifest.digest.clone().into();
    write_output(a.output.as_deref(), &json_bytes(&doc))?;
    if let Some(path) = &a.schedule {
        write_schedule(path, &manifest.digest, &report.best)?;
    }
    Ok((0, manifest))
}

fn write_schedule(path: &Path, digest: &str, schedule: &Schedule) -> Result<()> {
    let abs = schedule.absolute();
    write_output(Some(path), &csv_bytes(digest, &SCHEDULE_HEADER, &abs.assignments)?)
}

fn validate_cmd(a: &ValidateArgs) -> Result<(u8, RunManifest)> {
    check_single_stdin(&[Some(&a.instance), Some(&a.schedule)])?;
    let inst_input = Input::read(Some(&a.instance))?;
    let sched_input = Input::read(Some(&a.schedule))?;
    let inst = parse_instance(&inst_input)?;
    let assignments = read_schedule_csv(&sched_input)?;
    let manifest = RunManifest::new(
        "validate",
        vec![inst_input.record(), sched_input.record()],
        None,
        json!({}),
    );
    // CSV times are absolute
    let mut schedule = Schedule::from_assignments(&inst, assignments);
    schedule.time_offset = 0.0;
    let report = validate(&inst, &schedule);
    let mut doc = report.to_value();
    doc["manifest_digest"] = manifest.digest.clone().into();
    write_output(a.output.as_deref(), &json_bytes(&doc))?;
    Ok((if report.ok { 0 } else { 1 }, manifest))
}

fn report_cmd(a: &ReportArgs) -> Result<(u8, RunManifest)> {
    let paths: Vec<Option<&Path>> = a.reports.iter().map(|p| Some(p.as_path())).collect();
    check_single_stdin(&paths)?;
    let inputs = paths.iter().map(|p| Input::read(*p)).collect::<Result<Vec<_>>>()?;
    let manifest = RunManifest::new("report", inputs.iter().map(Input::record).collect(), None, json!({}));
    let mut rows = Vec::new();
    for input in &inputs {
        let doc: Value =
            serde_json::from_slice(&input.bytes).with_context(|| format!("{}: not valid JSON", input.label()))?;
        if doc.get("schema").and_then(Value::as_str) != Some(SOLVE_SCHEMA) {
            bail!("{}: not a solve report (expected schema {SOLVE_SCHEMA})", input.label());
        }
        let name = doc
            .get("instance")
            .and_then(Value::as_str)
            .map(str::to_string)
            .unwrap_or_else(|| input.stem());
        let report: SolveReport =
            serde_json::from_value(doc).with_context(|| format!("{}: malformed solve report", input.label()))?;
        rows.push(ReportRow::from_report(name, &report));
    }
    write_output(a.output.as_deref(), &csv_bytes(&manifest.digest, &ReportRow::HEADER, &rows)?)?;
    Ok((0, manifest))
}
