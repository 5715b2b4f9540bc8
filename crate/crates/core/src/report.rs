//! Text and JSON-lines rendering of scenario and bench reports.
//!
//! Every JSON-lines record is one object with a `kind` field. A run emits a
//! `header`, one `step` per executed step and a closing `summary`; a bench
//! emits a `bench_header` followed by one `bench` record per sample. Both
//! headers carry `schema_version`.

use std::fmt::Write as _;

use serde_json::{json, Value as Json};

use crate::bench::{BenchReport, SCHEMA_VERSION};
use crate::sim::{DeliverySchedule, ReplicaSnapshot, Scenario, ScenarioReport, SimOptions, Step};
use crate::wire::WireOpId;

fn ids(stack: &[WireOpId]) -> String {
    let inner: Vec<String> = stack.iter().map(|w| w.0.to_string()).collect();
    format!("[{}]", inner.join(","))
}

fn values(vals: &[Json]) -> String {
    let inner: Vec<String> = vals.iter().map(Json::to_string).collect();
    format!("[{}]", inner.join(","))
}

pub fn describe_step(step: &Step) -> String {
    match step {
        Step::Set {
            replica,
            value: Some(v),
        } => format!("{replica} set {v}"),
        Step::Set {
            replica,
            value: None,
        } => format!("{replica} delete"),
        Step::Undo { replica } => format!("{replica} undo"),
        Step::Redo { replica } => format!("{replica} redo"),
        Step::Sync { from, to } => format!("sync {from} -> {to}"),
        Step::SyncAll => "sync all".to_owned(),
        Step::Check {
            replica,
            values: v,
            label,
        } => {
            format!("check {replica} == {}{}", values(v), label_suffix(label))
        }
        Step::CheckStacks {
            replica,
            undo,
            redo,
            label,
        } => format!(
            "check {replica} stacks undo={} redo={}{}",
            ids(undo),
            ids(redo),
            label_suffix(label)
        ),
    }
}

fn label_suffix(label: &Option<String>) -> String {
    label.as_ref().map(|l| format!(" {l}")).unwrap_or_default()
}

fn snapshot_line(s: &ReplicaSnapshot) -> String {
    format!(
        "{:<10} values={:<16} undo={:<24} redo={}",
        s.replica,
        values(&s.values),
        ids(&s.undo),
        ids(&s.redo)
    )
}

/// Human-readable per-step table.
pub fn render_run(scenario: &Scenario, report: &ScenarioReport) -> String {
    let mut out = String::new();
    if let Some(name) = &scenario.name {
        let _ = writeln!(out, "scenario {name}");
    }
    for step in &report.steps {
        let status = match &step.check {
            Some(c) if c.passed => "  ok",
            Some(_) => "  FAILED",
            None => "",
        };
        let _ = writeln!(
            out,
            "{:>3}  {}{}",
            step.index,
            describe_step(&step.step),
            status
        );
        if let Some(c) = step.check.as_ref().filter(|c| !c.passed) {
            let _ = writeln!(out, "       expected {} got {}", c.expected, c.actual);
        }
        if !step.step.is_check() {
            for snap in &step.snapshots {
                let _ = writeln!(out, "       {}", snapshot_line(snap));
            }
        }
    }
    let total = report.checks().count();
    let _ = writeln!(
        out,
        "{} of {} checks passed; replicas {}",
        total - report.failed_checks(),
        total,
        if report.converged() {
            "agree"
        } else {
            "disagree"
        }
    );
    out
}

pub fn run_json_lines(
    scenario: &Scenario,
    report: &ScenarioReport,
    schedule: &DeliverySchedule,
    options: &SimOptions,
) -> Vec<String> {
    let mut lines = Vec::with_capacity(report.steps.len() + 2);
    lines.push(
        json!({
            "kind": "header",
            "schema_version": SCHEMA_VERSION,
            "scenario": scenario.name,
            "replicas": scenario.replicas,
            "seed": schedule.seed,
            "dup_rate": schedule.duplication_rate,
            "reorder": schedule.reorder_window,
            "caching": options.caching,
        })
        .to_string(),
    );
    for step in &report.steps {
        let mut record = serde_json::to_value(step).expect("reports serialize");
        record["kind"] = json!("step");
        lines.push(record.to_string());
    }
    lines.push(
        json!({
            "kind": "summary",
            "checks": report.checks().count(),
            "failed": report.failed_checks(),
            "converged": report.converged(),
            "delivery": report.delivery,
        })
        .to_string(),
    );
    lines
}

pub fn render_bench(report: &BenchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "median over {} runs ({})",
        report.header.runs, report.header.measures
    );
    let _ = writeln!(
        out,
        "{:<20} {:>6} {:>12} {:>8}",
        "mode", "n", "median_ms", "steps"
    );
    for s in &report.samples {
        let _ = writeln!(
            out,
            "{:<20} {:>6} {:>12.6} {:>8}",
            s.mode.name(),
            s.n,
            s.median_ms,
            s.steps
        );
    }
    out
}

pub fn bench_json_lines(report: &BenchReport) -> Vec<String> {
    let mut header = serde_json::to_value(&report.header).expect("reports serialize");
    header["kind"] = json!("bench_header");
    let mut lines = vec![header.to_string()];
    for s in &report.samples {
        let mut record = serde_json::to_value(s).expect("reports serialize");
        record["kind"] = json!("bench");
        lines.push(record.to_string());
    }
    lines
}
