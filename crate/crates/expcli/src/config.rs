//! Optional JSON config file support: `--config file.json` supplies
//! default values for any long flag of the invoked subcommand; flags
//! given on the command line take precedence.

use std::ffi::OsString;

/// Long flags with a short alias; a config key is considered overridden
/// if either spelling appears on the command line.
const SHORT_ALIASES: &[(&str, &str)] = &[("users", "-K"), ("eves", "-M")];

pub fn args_with_config() -> Result<Vec<OsString>, String> {
    let args: Vec<String> = std::env::args().collect();
    let Some(path) = find_config_path(&args) else {
        return Ok(args.into_iter().map(OsString::from).collect());
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| format!("cannot read config file {path}: {e}"))?;
    let map: serde_json::Map<String, serde_json::Value> = serde_json::from_str(&text)
        .map_err(|e| format!("config file {path} is not a JSON object: {e}"))?;

    let mut out: Vec<OsString> = args.iter().map(OsString::from).collect();
    for (key, value) in &map {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag_present(&args, &flag, key) {
            continue;
        }
        match value {
            serde_json::Value::Bool(true) => out.push(flag.into()),
            serde_json::Value::Bool(false) => {}
            serde_json::Value::Array(items) => {
                let joined = items
                    .iter()
                    .map(scalar_to_string)
                    .collect::<Result<Vec<_>, _>>()?
                    .join(",");
                out.push(flag.into());
                out.push(joined.into());
            }
            other => {
                out.push(flag.into());
                out.push(scalar_to_string(other)?.into());
            }
        }
    }
    Ok(out)
}

fn scalar_to_string(v: &serde_json::Value) -> Result<String, String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        other => Err(format!("unsupported config value {other}")),
    }
}

fn find_config_path(args: &[String]) -> Option<String> {
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

fn flag_present(args: &[String], flag: &str, key: &str) -> bool {
    let eq_prefix = format!("{flag}=");
    let short = SHORT_ALIASES
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, s)| *s);
    args.iter().any(|a| {
        a == flag
            || a.starts_with(&eq_prefix)
            || short.is_some_and(|s| a == s || a.starts_with(&format!("{s}=")))
    })
}
