//! Plain-text rendering of a result bundle.

use anyhow::{Context, Result};
use serde_json::Value;
use std::fmt::Write;
use std::path::Path;

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            if i < widths.len() {
                widths[i] = widths[i].max(c.len());
            }
        }
    }
    let line = |cells: &[String]| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{:<w$}", c, w = *w)).collect::<Vec<_>>().join("  ")
    };
    writeln!(out, "{}", line(header).trim_end()).unwrap();
    writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  ")).unwrap();
    for r in rows {
        writeln!(out, "{}", line(r).trim_end()).unwrap();
    }
}

fn weight(v: &Value) -> String {
    let parts: Vec<&str> = v.as_array().map(|a| a.iter().filter_map(|x| x.as_str()).collect()).unwrap_or_default();
    format!("({})", parts.join(", "))
}

/// Renders the bundle in `dir`: a header, then per task its table, extras and assertions.
pub fn render(dir: &Path) -> Result<String> {
    let m = read_json(&dir.join("manifest.json"))?;
    let mut out = String::new();
    let s = |k: &str| m[k].as_str().map(str::to_string).unwrap_or_else(|| m[k].to_string());
    writeln!(out, "scenario  {}", s("scenario")).unwrap();
    writeln!(out, "algebra   {} delta_h={}", s("cartan_type"), m["delta_h"]).unwrap();
    writeln!(out, "module    {}", s("module")).unwrap();
    writeln!(out, "depth     {}", m["depth"]).unwrap();
    writeln!(out, "engine    {} (exact arithmetic: {})", s("engine_version"), m["exact_arithmetic"]).unwrap();
    writeln!(out, "status    {}", s("status")).unwrap();
    let tasks = m["tasks"].as_array().cloned().unwrap_or_default();
    if !tasks.is_empty() {
        writeln!(out).unwrap();
        let header = vec!["task".to_string(), "result".to_string()];
        let rows: Vec<Vec<String>> = tasks
            .iter()
            .map(|t| {
                let pass = t["pass"].as_bool() == Some(true);
                vec![t["task"].as_str().unwrap_or("?").to_string(), if pass { "pass" } else { "FAIL" }.to_string()]
            })
            .collect();
        table(&mut out, &header, &rows);
    }
    for t in &tasks {
        let name = t["task"].as_str().unwrap_or("?");
        writeln!(out, "\n== {} ==", name).unwrap();
        let csv_path = dir.join(format!("{}.csv", name));
        if csv_path.exists() {
            let mut rd =
                csv::Reader::from_path(&csv_path).with_context(|| format!("reading {}", csv_path.display()))?;
            let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
            let rows: Vec<Vec<String>> =
                rd.records().map(|r| r.map(|r| r.iter().map(str::to_string).collect())).collect::<Result<_, _>>()?;
            table(&mut out, &header, &rows);
        }
        let doc = read_json(&dir.join(format!("{}.json", name)))?;
        if name == "kostant" {
            writeln!(out, "\nW1 constituents:").unwrap();
            for c in doc["constituents"].as_array().cloned().unwrap_or_default() {
                writeln!(out, "  length {}  highest weight {}", c["length"], weight(&c["highest_weight"])).unwrap();
            }
        }
        if let Some(e) = doc["error"].as_str() {
            writeln!(out, "error: {}", e).unwrap();
        }
        for a in doc["assertions"].as_array().cloned().unwrap_or_default() {
            let pass = a["pass"].as_bool() == Some(true);
            let detail = a["detail"].as_str().unwrap_or("");
            let tag = if pass { "pass" } else { "FAIL" };
            let line = format!("  [{}] {} {}", tag, a["name"].as_str().unwrap_or("?"), detail);
            writeln!(out, "{}", line.trim_end()).unwrap();
        }
    }
    Ok(out)
}
