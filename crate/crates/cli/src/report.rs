//! Renders the files an experiment wrote as plain-text tables, each tagged
//! with the claim the experiment exercises.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::Value;

fn banner(out: &mut String, title: &str, tag: &str) {
    let _ = writeln!(out, "\n== {title}");
    let _ = writeln!(out, "   exercises: {tag}");
}

fn table(out: &mut String, path: &Path) -> Result<()> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows: Vec<Vec<String>> = vec![headers];
    for record in reader.records() {
        rows.push(record?.iter().map(str::to_string).collect());
    }
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| {
            rows.iter()
                .map(|r| r.get(c).map_or(0, String::len))
                .max()
                .unwrap_or(0)
        })
        .collect();
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        let _ = writeln!(out, "   {}", line.join("  "));
        if i == 0 {
            let _ = writeln!(
                out,
                "   {}",
                "-".repeat(widths.iter().sum::<usize>() + 2 * (widths.len() - 1))
            );
        }
    }
    Ok(())
}

fn json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Builds the full report for an output directory.
pub fn render(out_dir: &Path) -> Result<String> {
    let mut out = String::new();
    let mut found = false;

    let sweep = out_dir.join("sweep.csv");
    if sweep.exists() {
        found = true;
        banner(
            &mut out,
            "round growth on cycles",
            "log*-round (d+1)-coloring scaling against the iterated-log reference",
        );
        table(&mut out, &sweep)?;
    }

    let run_csv = out_dir.join("run.csv");
    if run_csv.exists() {
        found = true;
        banner(&mut out, "run data", "checker verdicts per trial");
        table(&mut out, &run_csv)?;
        let summary = json(&out_dir.join("summary.json"))?;
        if let (Some(rate), Some(low), Some(high)) = (
            summary.get("rate").and_then(Value::as_f64),
            summary.get("wilson_low").and_then(Value::as_f64),
            summary.get("wilson_high").and_then(Value::as_f64),
        ) {
            let _ = writeln!(
                out,
                "   failure rate {rate:.6}, 95% Wilson interval [{low:.6}, {high:.6}]"
            );
        }
        if let Some(v) = summary.get("verdict").and_then(Value::as_str) {
            let _ = writeln!(out, "   verdict: {v}");
        }
    }

    let adversary = out_dir.join("adversary.json");
    if adversary.exists() {
        found = true;
        banner(
            &mut out,
            "two-coloring adversary",
            "identifier-swap refutation of claimed local 2-coloring",
        );
        let doc = json(&adversary)?;
        let _ = writeln!(
            out,
            "   algorithm {}  outcome {}",
            doc.get("algorithm").and_then(Value::as_str).unwrap_or("?"),
            doc.get("outcome").and_then(Value::as_str).unwrap_or("?"),
        );
        if let Some(cert) = doc.get("certificate") {
            for field in ["n", "t", "x", "y", "z", "violated_edge", "violated_labels"] {
                if let Some(v) = cert.get(field) {
                    let _ = writeln!(out, "   {field}: {v}");
                }
            }
        }
    }

    let bridge = out_dir.join("bridge.json");
    if bridge.exists() {
        found = true;
        banner(
            &mut out,
            "pseudo-identifier bridge",
            "running a nominal-size algorithm on an oversized host via power-graph coloring",
        );
        let doc = json(&bridge)?;
        for field in ["graph", "algorithm", "problem", "violations", "verdict"] {
            if let Some(v) = doc.get(field) {
                let _ = writeln!(out, "   {field}: {v}");
            }
        }
        if let Some(plan) = doc.get("plan") {
            let _ = writeln!(out, "   plan: {plan}");
        }
    }

    let shift = out_dir.join("shift.json");
    if shift.exists() {
        found = true;
        banner(
            &mut out,
            "window rule on sampled sequences",
            "adaptive finite-window labeling checked along aperiodic samples",
        );
        let doc = json(&shift)?;
        for field in [
            "rule",
            "problem",
            "samples",
            "span",
            "evaluated",
            "cap_errors",
            "violation_count",
            "radius_max",
            "radius_median",
            "verdict",
        ] {
            if let Some(v) = doc.get(field) {
                let _ = writeln!(out, "   {field}: {v}");
            }
        }
        let hist = out_dir.join("shift.csv");
        if hist.exists() {
            let _ = writeln!(out, "   radius histogram:");
            table(&mut out, &hist)?;
        }
    }

    let rotation = out_dir.join("rotation.json");
    if rotation.exists() {
        found = true;
        banner(
            &mut out,
            "rotation interval rule",
            "3-label interval coloring of the irrational rotation checked along orbits",
        );
        table(&mut out, &out_dir.join("rotation.csv"))?;
        let doc = json(&rotation)?;
        if let Some(v) = doc.get("verdict").and_then(Value::as_str) {
            let _ = writeln!(out, "   verdict: {v}");
        }
    }

    if !found {
        anyhow::bail!("no report inputs found in {}", out_dir.display());
    }
    Ok(out)
}

pub fn print(out_dir: &Path) -> Result<()> {
    let text = render(out_dir).with_context(|| format!("reporting on {}", out_dir.display()))?;
    println!("{text}");
    Ok(())
}
