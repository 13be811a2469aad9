//! `--config <file>` support: `key=value` lines become `--key value` flags
//! appended after the command line, so they take precedence.

use std::ffi::OsString;

use setlab_core::bench::parse_key_values;

/// Finds `--config <file>` or `--config=<file>` in raw arguments.
fn config_path(args: &[OsString]) -> Option<OsString> {
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

/// Turns config entries into flags. `key=true` becomes a bare switch and
/// `key=false` is dropped.
pub fn config_flags(text: &str) -> setlab_core::Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (k, v) in parse_key_values(text)? {
        let flag = format!("--{}", k.replace('_', "-"));
        match v.as_str() {
            "true" => out.push(flag.into()),
            "false" => {}
            _ => {
                out.push(flag.into());
                out.push(v.into());
            }
        }
    }
    Ok(out)
}

pub enum ExpandError {
    Io(std::io::Error),
    Config(setlab_core::Error),
}

/// Command line with the config file's flags appended.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, ExpandError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path).map_err(ExpandError::Io)?;
    let extra = config_flags(&text).map_err(ExpandError::Config)?;
    let mut out = args;
    out.extend(extra);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_from_lines() {
        let flags = config_flags("# c\nseed=3\nsi=true\nreport=false\nmax_rounds = 5\n").unwrap();
        let flags: Vec<String> = flags.into_iter().map(|f| f.into_string().unwrap()).collect();
        assert_eq!(flags, ["--seed", "3", "--si", "--max-rounds", "5"]);
        assert!(config_flags("nonsense").is_err());
    }

    #[test]
    fn finds_config_flag() {
        let args: Vec<OsString> = ["setlab", "--config=x.cfg", "gen"].iter().map(Into::into).collect();
        assert_eq!(config_path(&args), Some("x.cfg".into()));
        let args: Vec<OsString> = ["setlab", "gen"].iter().map(Into::into).collect();
        assert_eq!(config_path(&args), None);
    }
}
