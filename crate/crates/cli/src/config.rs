//! key=value config files merged under explicit command-line flags.

use std::path::Path;

/// Reads a config file of `key = value` lines (# comments allowed) and
/// appends `--key value` pairs for every key not already present in `args`.
/// Explicit flags therefore always win over file entries.
pub fn merge_into_args(path: &Path, args: &mut Vec<String>) -> Result<(), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {} is not key=value: {line:?}", lineno + 1))?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() {
            return Err(format!("config line {} has an empty key", lineno + 1));
        }
        let flag = format!("--{key}");
        let prefix = format!("--{key}=");
        if args.iter().any(|a| *a == flag || a.starts_with(&prefix)) {
            continue;
        }
        args.push(flag);
        args.push(value.to_string());
    }
    Ok(())
}

/// Locates the value of `--config <path>` / `--config=<path>` in raw argv.
pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = a.strip_prefix("--config=") {
            return Some(rest.to_string());
        }
    }
    None
}
