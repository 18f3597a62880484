//! Flat `flag=value` configuration files.
//!
//! Each non-empty line not starting with `#` is `name=value`, where `name`
//! is a long flag without the dashes. A bare `name` (or `name=true`) turns on
//! a switch. Values from the file are placed before the command-line flags,
//! so flags given on the command line win.

use std::ffi::OsString;

use crate::error::CliError;

pub fn parse_config(text: &str) -> Result<Vec<(String, Option<String>)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), Some(v.trim().to_string())),
            None => (line, None),
        };
        let key = key.trim_start_matches("--");
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(CliError::Usage(format!("config line {}: bad key '{key}'", i + 1)));
        }
        if key == "config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        let value = match value.as_deref() {
            Some("true") => None,
            _ => value,
        };
        out.push((key.to_string(), value));
    }
    Ok(out)
}

/// Removes `--config <path>` / `--config=<path>` from `args` and splices the
/// file's flags in right after the subcommand.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            let p = iter
                .next()
                .ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
            path = Some(p.to_string_lossy().into_owned());
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Input { path: path.clone(), source })?;
    let mut injected: Vec<OsString> = Vec::new();
    for (k, v) in parse_config(&text)? {
        injected.push(format!("--{k}").into());
        if let Some(v) = v {
            injected.push(v.into());
        }
    }
    // program name, then the subcommand, then the file, then the rest
    let split = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|p| p + 2)
        .unwrap_or(rest.len());
    let tail = rest.split_off(split);
    rest.extend(injected);
    rest.extend(tail);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines() {
        let c = parse_config("# comment\nreps = 100\n--seed=4\nreport\n\nmodel=riesz:d=1,alpha=0.5,kappa=1\n").unwrap();
        assert_eq!(
            c,
            vec![
                ("reps".into(), Some("100".into())),
                ("seed".into(), Some("4".into())),
                ("report".into(), None),
                ("model".into(), Some("riesz:d=1,alpha=0.5,kappa=1".into())),
            ]
        );
        assert!(parse_config("bad key=1").is_err());
    }

    #[test]
    fn flags_follow_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "reps=10\nseed=3\n").unwrap();
        let args: Vec<OsString> = ["hyperwave", "--config", path.to_str().unwrap(), "dmt", "--seed", "9"]
            .iter()
            .map(OsString::from)
            .collect();
        let out: Vec<String> = expand_config(args)
            .unwrap()
            .into_iter()
            .map(|a| a.into_string().unwrap())
            .collect();
        assert_eq!(out, ["hyperwave", "dmt", "--reps", "10", "--seed", "3", "--seed", "9"]);
    }
}
