//! Job configuration from flags and `key = value` files.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;

use super::CliError;
use crate::quad::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Transform,
    Invert,
    Convolve,
    Fracop,
    SolveFde,
    Verify,
}

/// Keys accepted by every command.
pub const SHARED_KEYS: &[&str] = &["f", "psi", "omega", "tol-abs", "tol-rel", "out", "format"];

/// Keys that take no value on the command line.
pub const SWITCHES: &[&str] = &["roundtrip", "residual"];

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Transform, Command::Invert, Command::Convolve, Command::Fracop, Command::SolveFde, Command::Verify];

    pub fn name(self) -> &'static str {
        match self {
            Command::Transform => "transform",
            Command::Invert => "invert",
            Command::Convolve => "convolve",
            Command::Fracop => "fracop",
            Command::SolveFde => "solve-fde",
            Command::Verify => "verify",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Command::Transform => "Forward transform (or bilateral Laplace / Fourier) on a list of p-points",
            Command::Invert => "Inverse transform on an x-grid, from an expression in p or a round trip",
            Command::Convolve => "Convolution of f and g on an x-grid",
            Command::Fracop => "Fractional integral or derivative, direct and conjugated",
            Command::SolveFde => "Solution of psi^alpha D^alpha y = g on an x-grid",
            Command::Verify => "Runs the builtin identity suite and writes a JSON report",
        }
    }

    /// Command-specific keys with their help text.
    pub fn keys(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::Transform => &[
                ("p", "p-points 're[,im]', separated by ';' (k for fourier)"),
                ("method", "direct | conjugated"),
                ("kind", "mellin | laplace | fourier"),
            ],
            Command::Invert => &[
                ("F", "transform as an expression in p"),
                ("roundtrip", "invert the forward transform of f"),
                ("x", "x-grid"),
                ("gamma", "real part of the integration line"),
                ("strip", "'lower,upper' bounds the line must lie in"),
            ],
            Command::Convolve => &[("g", "second function"), ("x", "x-grid")],
            Command::Fracop => &[
                ("kind", "ri | rd | caputo | hilfer"),
                ("alpha", "order 're[,im]'"),
                ("beta", "Hilfer type in [0, 1]"),
                ("a", "base point"),
                ("x", "x-grid"),
            ],
            Command::SolveFde => &[
                ("preset", "case1 | case2 | case3 | case4 | case5"),
                ("g", "right-hand side"),
                ("alpha", "order in (1, 2]"),
                ("x", "x-grid"),
                ("residual", "add the column psi^alpha D^alpha y - g"),
            ],
            Command::Verify => &[
                ("identity", "run only this identity"),
                ("tol", "comparison threshold for every identity"),
            ],
        }
    }

    pub fn accepts(self, key: &str) -> bool {
        SHARED_KEYS.contains(&key) || self.keys().iter().any(|(k, _)| *k == key)
    }

    pub fn from_name(name: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Sections of a config file: `[common]` and one per command.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, BTreeMap<String, String>>, CliError> {
    let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = i + 1;
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| CliError::Config(format!("line {lineno}: unterminated section header")))?
                .trim();
            if name != "common" && Command::from_name(name).is_none() {
                return Err(CliError::Config(format!("line {lineno}: unknown section [{name}]")));
            }
            sections.entry(name.to_string()).or_default();
            current = Some(name.to_string());
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {lineno}: expected key = value")))?;
        let section = current
            .clone()
            .ok_or_else(|| CliError::Config(format!("line {lineno}: key outside a section")))?;
        let key = k.trim().to_string();
        let map = sections.entry(section).or_default();
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("line {lineno}: duplicate key '{key}'")));
        }
    }
    Ok(sections)
}

/// The merged settings of one job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub command: Command,
    pub values: BTreeMap<String, String>,
}

impl JobConfig {
    /// File values (common section first, then the command's section),
    /// overridden by flags. Unknown keys are rejected.
    pub fn merge(
        command: Command,
        file: Option<&Path>,
        flags: BTreeMap<String, String>,
    ) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
            let mut sections = parse_config_text(&text)?;
            for name in ["common", command.name()] {
                if let Some(s) = sections.remove(name) {
                    values.extend(s);
                }
            }
        }
        values.extend(flags);
        for key in values.keys() {
            if !command.accepts(key) {
                return Err(CliError::Config(format!("unknown key '{key}' for {}", command.name())));
            }
        }
        Ok(JobConfig { command, values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key).ok_or_else(|| CliError::Config(format!("missing required --{key}")))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        self.get(key).map_or(Ok(default), |v| parse_f64(key, v))
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(false),
            Some(v) => match v.to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" | "on" => Ok(true),
                "false" | "0" | "no" | "off" => Ok(false),
                _ => Err(CliError::Config(format!("--{key}: expected a boolean, got '{v}'"))),
            },
        }
    }

    pub fn tolerance(&self) -> Result<Tolerance, CliError> {
        let d = Tolerance::default();
        let t = Tolerance::new(self.f64_or("tol-abs", d.abs_tol)?, self.f64_or("tol-rel", d.rel_tol)?);
        if !(t.abs_tol > 0.0 && t.rel_tol > 0.0) {
            return Err(CliError::Config("tolerances must be positive".into()));
        }
        Ok(t)
    }

    pub fn grid(&self, key: &str) -> Result<Vec<f64>, CliError> {
        parse_grid(key, self.require(key)?)
    }
}

pub fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    v.trim().parse::<f64>().map_err(|_| CliError::Config(format!("--{key}: '{v}' is not a number")))
}

/// `re[,im]`.
pub fn parse_complex(key: &str, v: &str) -> Result<Complex64, CliError> {
    let mut parts = v.split(',');
    let re = parse_f64(key, parts.next().unwrap_or(""))?;
    let im = match parts.next() {
        Some(s) => parse_f64(key, s)?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(CliError::Config(format!("--{key}: '{v}' has more than two parts")));
    }
    Ok(Complex64::new(re, im))
}

/// Points separated by ';'.
pub fn parse_points(key: &str, v: &str) -> Result<Vec<Complex64>, CliError> {
    let pts = v
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_complex(key, s))
        .collect::<Result<Vec<_>, _>>()?;
    if pts.is_empty() {
        return Err(CliError::Config(format!("--{key}: no points given")));
    }
    Ok(pts)
}

/// A list `a,b,c` (or `;`-separated), `lin:a:b:n` or `log:a:b:n`.
pub fn parse_grid(key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    let v = v.trim();
    let spaced = |rest: &str, log: bool| -> Result<Vec<f64>, CliError> {
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Config(format!("--{key}: expected a:b:n in '{v}'")));
        }
        let (a, b) = (parse_f64(key, parts[0])?, parse_f64(key, parts[1])?);
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("--{key}: '{}' is not a count", parts[2])))?;
        if n == 0 || (log && !(a > 0.0 && b > 0.0)) {
            return Err(CliError::Config(format!("--{key}: invalid grid '{v}'")));
        }
        if n == 1 {
            return Ok(vec![a]);
        }
        Ok((0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                if log {
                    (a.ln() + s * (b.ln() - a.ln())).exp()
                } else {
                    a + s * (b - a)
                }
            })
            .collect())
    };
    let out = if let Some(rest) = v.strip_prefix("lin:") {
        spaced(rest, false)?
    } else if let Some(rest) = v.strip_prefix("log:") {
        spaced(rest, true)?
    } else {
        v.split([',', ';'])
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| parse_f64(key, s))
            .collect::<Result<Vec<_>, _>>()?
    };
    if out.is_empty() {
        return Err(CliError::Config(format!("--{key}: empty grid")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_and_errors() {
        let s = parse_config_text("# c\n[common]\npsi = x\n[transform]\nf = exp(-x)\np = 2.5; 1.5,2\n").unwrap();
        assert_eq!(s["common"]["psi"], "x");
        assert_eq!(s["transform"]["p"], "2.5; 1.5,2");
        assert!(parse_config_text("[nope]\n").is_err());
        assert!(parse_config_text("f = 1\n").is_err());
        assert!(parse_config_text("[transform]\nf\n").is_err());
        assert!(parse_config_text("[transform]\nf=1\nf=2\n").is_err());
    }

    #[test]
    fn flags_override_and_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("job.cfg");
        std::fs::write(&path, "[common]\npsi = x\n[transform]\nf = exp(-x)\np = 1\n").unwrap();
        let flags = BTreeMap::from([("p".to_string(), "2.5".to_string())]);
        let c = JobConfig::merge(Command::Transform, Some(&path), flags).unwrap();
        assert_eq!(c.get("p"), Some("2.5"));
        assert_eq!(c.get("psi"), Some("x"));
        let bad = BTreeMap::from([("alpha".to_string(), "1".to_string())]);
        assert!(matches!(JobConfig::merge(Command::Transform, None, bad), Err(CliError::Config(_))));
    }

    #[test]
    fn grids_and_points() {
        assert_eq!(parse_grid("x", "0.5, 1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        assert_eq!(parse_grid("x", "lin:0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        let g = parse_grid("x", "log:1:100:3").unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert!(parse_grid("x", "log:0:1:3").is_err());
        let p = parse_points("p", "2.5; 1.5,2").unwrap();
        assert_eq!(p, vec![Complex64::new(2.5, 0.0), Complex64::new(1.5, 2.0)]);
        assert!(parse_points("p", "1,2,3").is_err());
    }
}
