//! `key = value` configuration files merged beneath command line flags.

use std::ffi::OsString;
use std::path::PathBuf;

use crate::error::{CliError, CliResult};
use crate::output::read_to_string;

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = key.trim().trim_start_matches("--");
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", i + 1)));
        }
        entries.push((key.to_owned(), value.trim().to_owned()));
    }
    Ok(entries)
}

/// Position of the `--config` value, accepting `--config PATH` and `--config=PATH`.
fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

fn flag_name(arg: &OsString) -> Option<String> {
    let s = arg.to_string_lossy();
    let body = s.strip_prefix("--")?;
    Some(body.split('=').next().unwrap_or(body).to_owned())
}

/// Index just past the subcommand token.
fn subcommand_end(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if s == "--config" {
            i += 2;
            continue;
        }
        if !s.starts_with('-') {
            return Some(i + 1);
        }
        i += 1;
    }
    None
}

/// Splices config entries after the subcommand unless the same flag is
/// already on the command line. `true` / `false` toggle switches. The
/// `--config` flag itself is removed.
pub fn merge_config(args: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let entries = parse_config(&read_to_string(&path)?)?;
    let Some(at) = subcommand_end(&args) else {
        return Ok(args);
    };
    let present: Vec<String> = args.iter().filter_map(flag_name).collect();
    let mut extra = Vec::new();
    for (key, value) in entries {
        if present.contains(&key) || key == "config" {
            continue;
        }
        match value.as_str() {
            "true" => extra.push(OsString::from(format!("--{key}"))),
            "false" => {}
            _ => {
                extra.push(OsString::from(format!("--{key}")));
                extra.push(OsString::from(value));
            }
        }
    }
    let mut merged: Vec<OsString> = Vec::with_capacity(args.len() + extra.len());
    let mut skip_next = false;
    for (i, a) in args.into_iter().enumerate() {
        if i == at {
            merged.append(&mut extra);
        }
        if skip_next {
            skip_next = false;
            continue;
        }
        let s = a.to_string_lossy();
        if s == "--config" {
            skip_next = true;
            continue;
        }
        if s.starts_with("--config=") {
            continue;
        }
        merged.push(a);
    }
    if !extra.is_empty() {
        merged.append(&mut extra);
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let e = parse_config("# header\nalpha = 2\n\n beta=0.25 # trailing\n").unwrap();
        assert_eq!(e, vec![("alpha".into(), "2".into()), ("beta".into(), "0.25".into())]);
        assert!(parse_config("oops").is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "beta = 0.5\nalpha = 3\nbrute-check = true\n").unwrap();
        let args: Vec<OsString> = ["condlab", "--config", path.to_str().unwrap(), "gamma", "--beta", "0.1"]
            .iter()
            .map(OsString::from)
            .collect();
        let merged = merge_config(args).unwrap();
        let strs: Vec<String> = merged.iter().map(|s| s.to_string_lossy().into_owned()).collect();
        assert_eq!(strs, ["condlab", "gamma", "--alpha", "3", "--brute-check", "--beta", "0.1"]);
    }
}
