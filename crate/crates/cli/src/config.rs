//! `--config file.json` support: every top-level key names a flag of the
//! chosen subcommand and is applied unless that flag is given explicitly.

use std::ffi::OsString;

use clap::parser::ValueSource;
use clap::{ArgMatches, CommandFactory};
use serde_json::Value;

use crate::{Cli, Failure};

fn leaf(m: &ArgMatches) -> &ArgMatches {
    match m.subcommand() {
        Some((_, sub)) => leaf(sub),
        None => m,
    }
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn render(key: &str, v: &Value) -> Result<Option<String>, Failure> {
    Ok(match v {
        Value::Null => None,
        Value::Bool(_) => return Err(Failure::input(format!("config key {key:?}: boolean flags are not configurable"))),
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Array(items) => {
            let parts: Vec<String> = items
                .iter()
                .map(|i| match i {
                    Value::Array(inner) => inner.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            let sep = if items.iter().any(Value::is_array) { ";" } else { "," };
            Some(parts.join(sep))
        }
        Value::Object(_) => return Err(Failure::input(format!("config key {key:?}: nested objects are not flags"))),
    })
}

/// Returns the argument list with config values appended as flags.
pub fn merge(args: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::input(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let json: Value = serde_json::from_str(&text).map_err(|e| Failure::input(format!("bad config JSON: {e}")))?;
    let Value::Object(map) = json else {
        return Err(Failure::input("config must be a JSON object"));
    };
    let matches = Cli::command().try_get_matches_from(&args).map_err(Failure::Clap)?;
    let leaf = leaf(&matches);
    let mut out = args;
    for (key, value) in &map {
        let id = key.replace('-', "_");
        let explicit = leaf
            .try_contains_id(&id)
            .ok()
            .and_then(|_| leaf.value_source(&id))
            .is_some_and(|s| s == ValueSource::CommandLine);
        if explicit {
            continue;
        }
        if let Some(v) = render(key, value)? {
            out.push(format!("--{}={v}", key.replace('_', "-")).into());
        }
    }
    Ok(out)
}
