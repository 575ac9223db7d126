//! Plain-text `key = value` config files.
//!
//! Each entry becomes `--key=value` on the command line, placed right after
//! the subcommand and before every user argument, so flags given on the
//! command line win. `interferer` may repeat; file interferers are dropped
//! when the command line names any.

use std::ffi::OsString;
use std::fs;

use crate::error::{usage, CliError};

/// Global options that take a value.
const VALUE_GLOBALS: [&str; 6] = [
    "--output",
    "--nodes",
    "--rel-tol",
    "--seed",
    "--samples",
    "--config",
];

pub fn parse(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return usage(format!(
                "config line {}: expected key = value, got '{line}'",
                i + 1
            ));
        };
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key.starts_with('-') {
            return usage(format!("config line {}: invalid key '{}'", i + 1, k.trim()));
        }
        if key == "config" {
            return usage("config files cannot include other config files");
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Result<Option<OsString>, CliError> {
    let mut path = None;
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            match it.next() {
                Some(p) => path = Some(p.clone()),
                None => return usage("--config needs a file path"),
            }
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        }
    }
    Ok(path)
}

fn subcommand_index(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if !s.starts_with('-') {
            return Some(i);
        }
        if VALUE_GLOBALS.contains(&s.as_ref()) {
            i += 1;
        }
        i += 1;
    }
    None
}

/// Splices the entries of the `--config` file, if any, into `args`.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let Some(sub) = subcommand_index(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| {
        CliError::Usage(format!(
            "cannot read config file {}: {e}",
            path.to_string_lossy()
        ))
    })?;
    let user_interferers = args
        .iter()
        .any(|a| a.to_string_lossy().split('=').next() == Some("--interferer"));
    let mut injected = Vec::new();
    for (key, value) in parse(&text)? {
        if key == "interferer" && user_interferers {
            continue;
        }
        match value.as_str() {
            "true" => injected.push(OsString::from(format!("--{key}"))),
            "false" => {}
            _ => injected.push(OsString::from(format!("--{key}={value}"))),
        }
    }
    let mut out = Vec::with_capacity(args.len() + injected.len());
    out.push(args[0].clone());
    out.push(args[sub].clone());
    out.extend(injected);
    out.extend(args[1..sub].iter().cloned());
    out.extend(args[sub + 1..].iter().cloned());
    Ok(out)
}
