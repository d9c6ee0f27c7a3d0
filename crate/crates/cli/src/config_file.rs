//! Flat `key = value` config files.
//!
//! Keys are flag names without the leading dashes (`eta-d`, and `eta_d` is
//! accepted too). `#` starts a comment. Boolean flags take `true` or `false`.
//! File entries are spliced into the argument list right after the
//! subcommand, so any flag given on the command line overrides them.

use std::ffi::OsString;
use std::path::Path;

use crate::CliError;

const BOOLEAN_KEYS: &[&str] = &["pbs", "log"];

/// Flags that set the same quantity; giving either on the command line
/// drops both from the file.
const EXCLUSIVE_GROUPS: &[&[&str]] = &[&["theta", "pc"], &["alpha", "alpha-l0"]];

/// Parses config text into flag tokens.
pub fn parse(text: &str) -> Result<Vec<String>, CliError> {
    let mut tokens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            )));
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
            return Err(CliError::Usage(format!("config line {}: bad key `{key}`", lineno + 1)));
        }
        if key == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        if BOOLEAN_KEYS.contains(&key.as_str()) {
            match value {
                "true" => tokens.push(format!("--{key}")),
                "false" => {}
                other => {
                    return Err(CliError::Usage(format!(
                        "config line {}: `{key}` takes true or false, got `{other}`",
                        lineno + 1
                    )))
                }
            }
        } else {
            tokens.push(format!("--{key}"));
            tokens.push(value.to_string());
        }
    }
    Ok(tokens)
}

fn find_config(args: &[String]) -> Option<String> {
    let mut iter = args.iter();
    while let Some(a) = iter.next() {
        if a == "--config" {
            return iter.next().cloned();
        }
        if let Some(path) = a.strip_prefix("--config=") {
            return Some(path.to_string());
        }
    }
    None
}

fn overridden(key: &str, given: &[&str]) -> bool {
    if given.contains(&key) {
        return true;
    }
    EXCLUSIVE_GROUPS
        .iter()
        .any(|g| g.contains(&key) && g.iter().any(|k| given.contains(k)))
}

fn drop_overridden(tokens: Vec<String>, given: &[&str]) -> Vec<String> {
    let mut kept = Vec::with_capacity(tokens.len());
    let mut iter = tokens.into_iter();
    while let Some(flag) = iter.next() {
        let key = flag.trim_start_matches('-').to_string();
        let value = if BOOLEAN_KEYS.contains(&key.as_str()) { None } else { iter.next() };
        if !overridden(&key, given) {
            kept.push(flag);
            kept.extend(value);
        }
    }
    kept
}

/// Expands `--config FILE` into explicit flags placed before the user's own.
pub fn expand_args<I, T>(args: I) -> Result<Vec<String>, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    if args.len() < 2 || args[1].starts_with('-') {
        return Ok(args);
    }
    let Some(path) = find_config(&args[2..]) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| CliError::Usage(format!("cannot read config file `{path}`: {e}")))?;
    let given: Vec<&str> = args[2..]
        .iter()
        .filter_map(|a| a.strip_prefix("--"))
        .map(|a| a.split('=').next().unwrap_or(a))
        .collect();
    let mut expanded = args[..2].to_vec();
    expanded.extend(drop_overridden(parse(&text)?, &given));
    expanded.extend_from_slice(&args[2..]);
    Ok(expanded)
}
