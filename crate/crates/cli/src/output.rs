use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::args::Format;
use crate::config::Resolved;
use crate::error::CliResult;

/// Natural stdout form of a command when `--format` is not given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Natural {
    Text,
    Csv,
    Json,
}

/// Everything a command produces.
#[derive(Debug)]
pub struct Report {
    pub natural: Natural,
    pub text: Option<String>,
    pub csv: String,
    pub json: Value,
    /// Key results echoed in the manifest.
    pub summary: Value,
    /// Further files written under `--out`: relative path and contents.
    pub extra: Vec<(String, String)>,
    /// The output is complete but reports a failed check (exit status 1).
    pub failed: bool,
}

impl Report {
    pub fn new(natural: Natural, csv: String, json: Value) -> Self {
        Report {
            natural,
            text: None,
            csv,
            json,
            summary: Value::Null,
            extra: Vec::new(),
            failed: false,
        }
    }

    pub fn failing(mut self) -> Self {
        self.failed = true;
        self
    }

    pub fn text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn summary(mut self, summary: Value) -> Self {
        self.summary = summary;
        self
    }

    pub fn extra(mut self, path: impl Into<String>, contents: String) -> Self {
        self.extra.push((path.into(), contents));
        self
    }

    fn render(&self, format: Option<Format>) -> (String, &'static str) {
        let as_json = || (pretty(&self.json), "json");
        match format {
            Some(Format::Csv) => (self.csv.clone(), "csv"),
            Some(Format::Json) => as_json(),
            None => match self.natural {
                Natural::Text => match &self.text {
                    Some(t) => (t.clone(), "txt"),
                    None => (self.csv.clone(), "csv"),
                },
                Natural::Csv => (self.csv.clone(), "csv"),
                Natural::Json => as_json(),
            },
        }
    }
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialise");
    s.push('\n');
    s
}

/// Run metadata written next to the outputs.
pub struct Manifest<'a> {
    pub command: &'a str,
    pub resolved: &'a Resolved,
    pub config_file: Option<&'a Path>,
}

/// Prints to stdout, or writes the primary output, extra files and
/// `manifest.json` under `out`.
pub fn emit(report: &Report, format: Option<Format>, out: Option<&Path>, manifest: &Manifest) -> CliResult<()> {
    let (body, ext) = report.render(format);
    let Some(dir) = out else {
        print!("{body}");
        return Ok(());
    };
    std::fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let primary = format!("{}.{ext}", manifest.command);
    std::fs::write(dir.join(&primary), &body)?;
    files.push(primary);
    for (rel, contents) in &report.extra {
        let path: PathBuf = dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, contents)?;
        files.push(rel.clone());
    }
    let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let doc = json!({
        "tool": "expprod",
        "version": env!("CARGO_PKG_VERSION"),
        "command": manifest.command,
        "config": manifest.resolved,
        "config_file": manifest.config_file.map(|p| p.display().to_string()),
        "outputs": files,
        "summary": report.summary,
        "created_unix": created,
    });
    std::fs::write(dir.join("manifest.json"), pretty(&doc))?;
    Ok(())
}
