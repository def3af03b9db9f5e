//! Option defaults from a JSON or TOML file.
//!
//! Keys are long option names (`-` or `_` both accepted) of the leaf
//! subcommand; an optional `command` key such as `"xray reconstruct"` names
//! the subcommand when the command line does not. Values that the command
//! line already sets are left alone.

use std::ffi::OsString;
use std::path::Path;

use clap::parser::ValueSource;
use clap::{ArgMatches, Command};
use serde_json::{Map, Value};

use crate::Failure;

pub fn load(path: &Path) -> Result<Map<String, Value>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage("config", format!("cannot read {}: {e}", path.display())))?;
    let is_toml = path.extension().is_some_and(|e| e == "toml");
    let value: Value = if is_toml {
        let t: toml::Value =
            toml::from_str(&text).map_err(|e| Failure::usage("config", format!("{}: {e}", path.display())))?;
        serde_json::to_value(t).map_err(|e| Failure::usage("config", e.to_string()))?
    } else {
        serde_json::from_str(&text).map_err(|e| Failure::usage("config", format!("{}: {e}", path.display())))?
    };
    match value {
        Value::Object(m) => Ok(m),
        _ => Err(Failure::usage("config", "config must be a table of option names")),
    }
}

/// Finds `--config` in raw arguments.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

fn leaf<'a>(mut cmd: &'a Command, mut m: &'a ArgMatches) -> (&'a Command, &'a ArgMatches, usize) {
    let mut depth = 0;
    while let Some((name, sub)) = m.subcommand() {
        match cmd.find_subcommand(name) {
            Some(c) => {
                cmd = c;
                m = sub;
                depth += 1;
            }
            None => break,
        }
    }
    (cmd, m, depth)
}

fn scalar(key: &str, v: &Value) -> Result<String, Failure> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Array(items) => items.iter().map(|i| scalar(key, i)).collect::<Result<Vec<_>, _>>().map(|v| v.join(",")),
        _ => Err(Failure::usage("config", format!("`{key}` must be a string, number, boolean or list"))),
    }
}

/// Returns `args` extended by the config entries the command line leaves unset.
pub fn merge(cmd: &Command, args: Vec<OsString>, cfg: &Map<String, Value>) -> Result<Vec<OsString>, Failure> {
    let mut args = args;
    let mut probe = cmd.clone().ignore_errors(true);
    probe.build();
    let m = probe.clone().try_get_matches_from(&args).map_err(|e| Failure::usage("usage", e.to_string()))?;
    if m.subcommand().is_none() {
        if let Some(c) = cfg.get("command") {
            let c = c.as_str().ok_or_else(|| Failure::usage("config", "`command` must be a string"))?;
            let tail = args.split_off(1);
            args.extend(c.split_whitespace().map(OsString::from));
            args.extend(tail);
        }
    }
    let m = probe.clone().try_get_matches_from(&args).map_err(|e| Failure::usage("usage", e.to_string()))?;
    let (leaf_cmd, leaf_m, depth) = leaf(&probe, &m);
    if depth == 0 {
        return Ok(args);
    }
    let mut extra = Vec::new();
    for (key, value) in cfg {
        if key == "command" || key == "config" {
            continue;
        }
        let id = key.replace('-', "_");
        let arg = leaf_cmd
            .get_arguments()
            .find(|a| a.get_id().as_str() == id)
            .ok_or_else(|| Failure::usage("config", format!("unknown option `{key}` for `{}`", leaf_cmd.get_name())))?;
        if leaf_m.value_source(&id) == Some(ValueSource::CommandLine) {
            continue;
        }
        let long = arg.get_long().map(str::to_owned);
        match (value, long) {
            (Value::Bool(true), Some(l)) => extra.push(format!("--{l}")),
            (Value::Bool(false), _) => {}
            (v, Some(l)) => extra.push(format!("--{l}={}", scalar(key, v)?)),
            (v, None) => extra.push(scalar(key, v)?),
        }
    }
    args.extend(extra.into_iter().map(OsString::from));
    Ok(args)
}
