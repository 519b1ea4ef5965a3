//! Merges a JSON config file into the argument list. Keys are long flag
//! names (`n-terms` or `n_terms`); a key is used only when the flag is not
//! already on the command line.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::CommandFactory;
use serde_json::Value;

use crate::cli::Cli;
use crate::error::CliError;

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut iter = args.iter().skip(1);
    while let Some(arg) = iter.next() {
        let arg = arg.to_string_lossy();
        if arg == "--config" {
            return iter.next().map(PathBuf::from);
        }
        if let Some(path) = arg.strip_prefix("--config=") {
            return Some(PathBuf::from(path));
        }
    }
    None
}

fn flag_present(args: &[OsString], flag: &str) -> bool {
    let long = format!("--{flag}");
    let with_value = format!("--{flag}=");
    args.iter().skip(1).any(|a| {
        let a = a.to_string_lossy();
        a == long || a.starts_with(&with_value)
    })
}

/// Long flags accepted by `subcommand` (including global ones), and the
/// union over all subcommands.
fn known_flags(subcommand: Option<&str>) -> (BTreeSet<String>, BTreeSet<String>) {
    let root = Cli::command();
    let longs = |cmd: &clap::Command| -> BTreeSet<String> {
        cmd.get_arguments()
            .filter_map(|a| a.get_long().map(str::to_owned))
            .collect()
    };
    let global = longs(&root);
    let mut selected = global.clone();
    let mut all = global;
    for sub in root.get_subcommands() {
        let flags = longs(sub);
        if Some(sub.get_name()) == subcommand {
            selected.extend(flags.iter().cloned());
        }
        all.extend(flags);
    }
    (selected, all)
}

fn subcommand_name(args: &[OsString]) -> Option<String> {
    let root = Cli::command();
    let names: BTreeSet<&str> = root.get_subcommands().map(|s| s.get_name()).collect();
    args.iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .find(|a| names.contains(a.as_str()))
}

fn render(value: &Value) -> Result<Option<String>, String> {
    Ok(match value {
        Value::Bool(true) => Some(String::new()),
        Value::Bool(false) | Value::Null => None,
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) => {
            let parts: Result<Vec<String>, String> = items
                .iter()
                .map(|v| match v {
                    Value::Number(n) => Ok(n.to_string()),
                    Value::String(s) => Ok(s.clone()),
                    other => Err(format!("unsupported list element {other}")),
                })
                .collect();
            Some(parts?.join(","))
        }
        Value::Object(_) => return Err("nested objects are not supported".into()),
    })
}

pub fn merge_config_file(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    let parsed: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: invalid JSON config: {e}", path.display())))?;
    let Value::Object(entries) = parsed else {
        return Err(CliError::Usage(format!("{}: config must be a JSON object", path.display())));
    };

    let subcommand = subcommand_name(&args);
    let (selected, all) = known_flags(subcommand.as_deref());
    let mut merged = args;
    for (key, value) in entries {
        let flag = key.replace('_', "-");
        if flag == "config" {
            continue;
        }
        if !all.contains(&flag) {
            return Err(CliError::Usage(format!("{}: unknown config key `{key}`", path.display())));
        }
        if !selected.contains(&flag) || flag_present(&merged, &flag) {
            continue;
        }
        let rendered = render(&value).map_err(|e| CliError::Usage(format!("config key `{key}`: {e}")))?;
        match rendered {
            Some(v) if v.is_empty() && value.is_boolean() => merged.push(format!("--{flag}").into()),
            Some(v) => merged.push(format!("--{flag}={v}").into()),
            None => {}
        }
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn finds_config_path_in_both_spellings() {
        assert_eq!(config_path(&os(&["casimir", "--config", "a.json"])), Some(PathBuf::from("a.json")));
        assert_eq!(config_path(&os(&["casimir", "--config=b.json"])), Some(PathBuf::from("b.json")));
        assert_eq!(config_path(&os(&["casimir", "validate"])), None);
    }

    #[test]
    fn detects_flags_given_on_command_line() {
        let args = os(&["casimir", "--n-terms=5", "figure", "fig4-right"]);
        assert!(flag_present(&args, "n-terms"));
        assert!(!flag_present(&args, "accelerate"));
    }

    #[test]
    fn subcommand_flags_are_known() {
        let (selected, all) = known_flags(Some("bhd"));
        assert!(selected.contains("omega-lo"));
        assert!(selected.contains("n-terms"));
        assert!(!selected.contains("y-steps"));
        assert!(all.contains("y-steps"));
    }
}
