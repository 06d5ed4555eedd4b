//! `--config FILE`: a JSON object whose keys name long options of the chosen
//! subcommand (or the global options). Values fill options not given on the
//! command line; unknown keys are rejected.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgAction, ArgMatches, Command};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// The resolved value of every option of the leaf subcommand.
pub type Resolved = BTreeMap<String, Value>;

/// Subcommand path and leaf matches.
pub fn leaf<'a>(cmd: &'a Command, matches: &'a ArgMatches) -> (Vec<String>, &'a Command, &'a ArgMatches) {
    let mut path = Vec::new();
    let (mut c, mut m) = (cmd, matches);
    while let Some((name, sub)) = m.subcommand() {
        path.push(name.to_string());
        c = c.find_subcommand(name).expect("matched subcommand exists");
        m = sub;
    }
    (path, c, m)
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

/// Command-line tokens that set `key` to `value`.
fn tokens(cmd: &Command, key: &str, value: &Value) -> CliResult<Vec<OsString>> {
    let wanted = key.replace('_', "-");
    let arg = cmd
        .get_arguments()
        .find(|a| a.get_long() == Some(wanted.as_str()))
        .ok_or_else(|| CliError::config(format!("unknown config key {key:?} for this command")))?;
    let flag = format!("--{wanted}");
    match arg.get_action() {
        ArgAction::SetTrue | ArgAction::SetFalse => match value {
            Value::Bool(true) => Ok(vec![flag.into()]),
            Value::Bool(false) => Ok(Vec::new()),
            _ => Err(CliError::config(format!("config key {key:?} must be true or false"))),
        },
        _ => {
            let text = match value {
                Value::Array(items) if items.iter().all(|v| scalar(v).is_some()) && arg.get_value_delimiter().is_some() => {
                    items.iter().filter_map(scalar).collect::<Vec<_>>().join(",")
                }
                Value::Null => return Err(CliError::config(format!("config key {key:?} is null"))),
                other => scalar(other).unwrap_or_else(|| other.to_string()),
            };
            Ok(vec![format!("{flag}={text}").into()])
        }
    }
}

pub fn read_object(path: &Path) -> CliResult<serde_json::Map<String, Value>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::config(format!("config {} is not a JSON object", path.display()))),
        Err(e) => Err(CliError::config(format!("config {}: {e}", path.display()))),
    }
}

/// Arguments with the config file's values appended for every option the
/// command line left unset.
pub fn merged_args(cmd: &Command, matches: &ArgMatches, args: &[OsString], config: &Path) -> CliResult<Vec<OsString>> {
    let object = read_object(config)?;
    let (_, leaf_cmd, leaf_matches) = leaf(cmd, matches);
    let mut out = args.to_vec();
    for (key, value) in &object {
        let id = key.replace('-', "_");
        let explicit = leaf_matches
            .try_get_raw(&id)
            .ok()
            .flatten()
            .is_some()
            && leaf_matches.value_source(&id) == Some(ValueSource::CommandLine);
        if key == "config" {
            return Err(CliError::config("a config file cannot name another config file"));
        }
        let toks = tokens(leaf_cmd, key, value)?;
        if !explicit {
            out.extend(toks);
        }
    }
    Ok(out)
}

/// Every option of the leaf subcommand with its final value.
pub fn resolved(cmd: &Command, matches: &ArgMatches) -> Resolved {
    let (_, leaf_cmd, leaf_matches) = leaf(cmd, matches);
    let mut out = Resolved::new();
    for arg in leaf_cmd.get_arguments() {
        let id = arg.get_id().as_str();
        if matches!(id, "help" | "version") {
            continue;
        }
        let value = match arg.get_action() {
            ArgAction::SetTrue | ArgAction::SetFalse => Value::Bool(leaf_matches.get_flag(id)),
            _ => match leaf_matches.try_get_raw(id).ok().flatten() {
                Some(raw) => {
                    let vals: Vec<Value> = raw.map(|v| Value::String(v.to_string_lossy().into_owned())).collect();
                    let multi = arg.get_value_delimiter().is_some() || matches!(arg.get_action(), ArgAction::Append);
                    if multi || vals.len() != 1 {
                        Value::Array(vals)
                    } else {
                        vals.into_iter().next().expect("one value")
                    }
                }
                None => Value::Null,
            },
        };
        out.insert(id.to_string(), value);
    }
    out
}
