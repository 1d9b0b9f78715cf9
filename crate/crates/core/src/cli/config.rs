//! `key = value` config files. File entries are turned into `--key=value`
//! flags and placed ahead of the user's own flags, so the user's win.

use std::ffi::OsString;

use crate::error::{Error, Result};

/// Parses config text into (key, value) pairs. Keys may use `_` or `-`;
/// `#` starts a comment; list values are comma separated.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", n + 1)))?;
        let key = k.trim().replace('_', "-");
        if key.is_empty() || key.starts_with('-') {
            return Err(Error::Config(format!("line {}: bad key `{}`", n + 1, k.trim())));
        }
        if key == "config" {
            return Err(Error::Config(format!("line {}: config files cannot include other files", n + 1)));
        }
        let value: String = if v.contains(',') {
            v.split(',').map(str::trim).collect::<Vec<_>>().join(",")
        } else {
            v.trim().to_string()
        };
        out.push((key, value));
    }
    Ok(out)
}

/// Value of the last `--config` flag, if any.
fn config_path(args: &[OsString]) -> Result<Option<OsString>> {
    let mut found = None;
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            let v = it
                .next()
                .ok_or_else(|| Error::Config("--config needs a file name".into()))?;
            found = Some(v.clone());
        } else if let Some(v) = s.strip_prefix("--config=") {
            found = Some(OsString::from(v));
        }
    }
    Ok(found)
}

/// Returns argv with the entries of the `--config` file, if one is named,
/// inserted before the first flag.
pub fn merge_config_file(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.to_string_lossy())))?;
    let injected = parse_config(&text)?
        .into_iter()
        .map(|(k, v)| OsString::from(format!("--{k}={v}")));
    let at = args
        .iter()
        .skip(1)
        .position(|a| a.to_string_lossy().starts_with('-'))
        .map_or(args.len(), |p| p + 1);
    let mut out = args[..at].to_vec();
    out.extend(injected);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_lines() {
        let c = parse_config("# hdr\nm_list = 1, 2 ,3\n\nk = 2 # trailing\n").unwrap();
        assert_eq!(c, vec![("m-list".into(), "1,2,3".into()), ("k".into(), "2".into())]);
        assert!(parse_config("novalue").is_err());
        assert!(parse_config("config = x").is_err());
    }

    #[test]
    fn injection_point() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.txt");
        std::fs::write(&p, "k = 3\n").unwrap();
        let args = os(&["ggsum", "rf", "ber", "--config", p.to_str().unwrap(), "--k", "2"]);
        let merged = merge_config_file(args).unwrap();
        assert_eq!(merged[3], OsString::from("--k=3"));
        assert_eq!(merged.last().unwrap(), &OsString::from("2"));
    }
}
