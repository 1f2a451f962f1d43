//! Flat `key = value` configuration with dotted section names.
//!
//! Sources are layered: built-in defaults, then files in the order given,
//! then the `GEO_SEED` environment variable, then `--set` overrides. Every
//! value remembers where it came from so diagnostics can point at it.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qgpe::dynamics::{InitKind, InitSpec, Method};
use qgpe::{Grid, PhysParams};

use crate::error::{CliError, CliResult};

pub const SEED_ENV: &str = "GEO_SEED";

/// Keys of a run configuration and their built-in values.
pub const RUN_DEFAULTS: &[(&str, &str)] = &[
    ("grid.n", "32"),
    ("grid.box_length", "2pi"),
    ("phys.epsilon", "0.1"),
    ("phys.F", "0.6"),
    ("phys.nu", "0.02"),
    ("phys.nu_prime", "0.02"),
    ("trunc.m", "0.1"),
    ("trunc.M", "0.2"),
    ("time.dt", "0.01"),
    ("time.t_end", "1"),
    ("time.method", "if-rk4"),
    ("init.kind", "qg_random"),
    ("init.gamma", "0.02"),
    ("init.delta", "0.1"),
    ("init.alpha0", "1"),
    ("init.amplitude", "1"),
    ("init.seed", "0"),
    ("output.dir", "out"),
    ("output.snapshot_every", "0"),
];

#[derive(Clone, Debug, PartialEq)]
pub enum Origin {
    Default,
    File { path: PathBuf, line: usize },
    Env,
    Override(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Default => f.write_str("built-in default"),
            Origin::File { path, line } => write!(f, "{}:{line}", path.display()),
            Origin::Env => write!(f, "environment {SEED_ENV}"),
            Origin::Override(text) => write!(f, "--set {text}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Setting {
    pub value: String,
    pub origin: Origin,
}

/// Layered settings restricted to a known key set.
#[derive(Clone, Debug)]
pub struct Settings {
    allowed: Vec<&'static str>,
    map: BTreeMap<String, Setting>,
}

pub fn field_error(origin: &Origin, key: &str, msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("{origin}: field `{key}`: {msg}"))
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(a, _)| a).trim()
}

impl Settings {
    /// Defaults for `defaults`; `extra` keys are accepted without a default.
    pub fn new(defaults: &[(&'static str, &'static str)], extra: &[&'static str]) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in defaults {
            map.insert(k.to_string(), Setting { value: v.to_string(), origin: Origin::Default });
        }
        let allowed = defaults.iter().map(|(k, _)| *k).chain(extra.iter().copied()).collect();
        Self { allowed, map }
    }

    fn insert(&mut self, key: &str, value: &str, origin: Origin) -> CliResult<()> {
        if !self.allowed.contains(&key) {
            return Err(field_error(&origin, key, "unknown field"));
        }
        if value.is_empty() {
            return Err(field_error(&origin, key, "empty value"));
        }
        self.map.insert(key.to_string(), Setting { value: value.to_string(), origin });
        Ok(())
    }

    /// Layers a file's `key = value` lines; a key may appear once per file.
    pub fn load_text(&mut self, text: &str, path: &Path) -> CliResult<()> {
        let mut seen = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let origin = Origin::File { path: path.to_path_buf(), line };
            let body = strip_comment(raw);
            if body.is_empty() {
                continue;
            }
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{origin}: expected `key = value`, got `{body}`")))?;
            let key = k.trim();
            if let Some(first) = seen.insert(key.to_string(), line) {
                return Err(field_error(&origin, key, format!("duplicate key (first set on line {first})")));
            }
            self.insert(key, v.trim(), origin)?;
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> CliResult<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.load_text(&text, path)
    }

    pub fn load_env_seed(&mut self, value: Option<String>) -> CliResult<()> {
        match value {
            Some(v) => self.insert("init.seed", v.trim(), Origin::Env),
            None => Ok(()),
        }
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, text: &str) -> CliResult<()> {
        let origin = Origin::Override(text.to_string());
        let (k, v) = text
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("{origin}: expected `key=value`")))?;
        self.insert(k.trim(), strip_comment(v), origin)
    }

    pub fn get(&self, key: &str) -> Option<&Setting> {
        self.map.get(key)
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.get(key).is_some_and(|s| s.origin != Origin::Default)
    }

    fn setting(&self, key: &str) -> CliResult<&Setting> {
        self.get(key).ok_or_else(|| CliError::Config(format!("field `{key}` is required")))
    }

    pub fn origin(&self, key: &str) -> Origin {
        self.get(key).map_or(Origin::Default, |s| s.origin.clone())
    }

    /// Typed value of a key, with a located diagnostic on failure.
    pub fn parse<T: FromStr>(&self, key: &str) -> CliResult<T>
    where
        T::Err: fmt::Display,
    {
        let s = self.setting(key)?;
        s.value.parse::<T>().map_err(|e| field_error(&s.origin, key, format!("cannot parse `{}`: {e}", s.value)))
    }

    pub fn parse_with<T>(&self, key: &str, f: impl FnOnce(&str) -> Result<T, String>) -> CliResult<T> {
        let s = self.setting(key)?;
        f(&s.value).map_err(|e| field_error(&s.origin, key, e))
    }

    /// Every key with its effective value, sorted.
    pub fn dump(&self) -> String {
        self.map.iter().map(|(k, s)| format!("{k} = {}\n", s.value)).collect()
    }
}

/// A length, optionally as a multiple of π: `6.28`, `2pi`, `pi`.
pub fn parse_length(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let v = match t.strip_suffix("pi") {
        Some("") => std::f64::consts::PI,
        Some(m) => m.trim().parse::<f64>().map_err(|e| format!("cannot parse `{t}`: {e}"))? * std::f64::consts::PI,
        None => t.parse::<f64>().map_err(|e| format!("cannot parse `{t}`: {e}"))?,
    };
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive, got {t}"))
    }
}

/// Fully validated settings of a single run.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub box_length: f64,
    pub params: PhysParams,
    pub dt: f64,
    pub t_end: f64,
    pub method: Method,
    pub init: InitSpec,
    pub out_dir: PathBuf,
    pub snapshot_every: u64,
}

fn positive(key: &'static str, s: &Settings) -> CliResult<f64> {
    let v: f64 = s.parse(key)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(field_error(&s.origin(key), key, format!("must be positive, got {v}")))
    }
}

/// Fields each data family needs from the user.
fn kind_fields(kind: InitKind) -> &'static [&'static str] {
    match kind {
        InitKind::QgRandom => &[],
        InitKind::OscRandom => &["init.gamma"],
        InitKind::MixedTheorem2 | InitKind::MixedTheorem4 => &["init.gamma", "init.delta", "init.alpha0"],
    }
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> CliResult<Self> {
        let n: usize = s.parse("grid.n")?;
        let box_length = s.parse_with("grid.box_length", parse_length)?;
        if let Err(e) = Grid::cubic(n, box_length) {
            return Err(field_error(&s.origin("grid.n"), "grid.n", e));
        }
        let epsilon: f64 = s.parse("phys.epsilon")?;
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(field_error(&s.origin("phys.epsilon"), "phys.epsilon", format!("must lie in (0, 1], got {epsilon}")));
        }
        let froude = positive("phys.F", s)?;
        if (froude - 1.0).abs() < 1e-12 {
            return Err(field_error(
                &s.origin("phys.F"),
                "phys.F",
                "F must differ from 1: at F = 1 the wave frequency 1/ε is the same for every mode and the waves do not disperse",
            ));
        }
        let nu = positive("phys.nu", s)?;
        let nu_prime = positive("phys.nu_prime", s)?;
        let m = positive("trunc.m", s)?;
        let big_m = positive("trunc.M", s)?;
        let params = PhysParams::new(epsilon, froude, nu, nu_prime, m, big_m)
            .map_err(|e| field_error(&s.origin("phys.epsilon"), "phys", e))?;
        let dt = positive("time.dt", s)?;
        let t_end: f64 = s.parse("time.t_end")?;
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(field_error(&s.origin("time.t_end"), "time.t_end", format!("must be >= 0, got {t_end}")));
        }
        let method: Method = s.parse("time.method")?;
        let kind: InitKind = s.parse("init.kind")?;
        if s.is_set("init.kind") {
            for key in kind_fields(kind) {
                if !s.is_set(key) {
                    return Err(field_error(
                        &s.origin("init.kind"),
                        key,
                        format!("required when init.kind = {kind}"),
                    ));
                }
            }
        }
        let init = InitSpec {
            kind,
            gamma: s.parse("init.gamma")?,
            delta: s.parse("init.delta")?,
            alpha0: s.parse("init.alpha0")?,
            seed: s.parse("init.seed")?,
            amplitude: s.parse("init.amplitude")?,
        };
        if let Err(e) = init.validate(&params) {
            return Err(field_error(&s.origin("init.kind"), "init", e));
        }
        Ok(Self {
            n,
            box_length,
            params,
            dt,
            t_end,
            method,
            init,
            out_dir: PathBuf::from(&s.setting("output.dir")?.value),
            snapshot_every: s.parse("output.snapshot_every")?,
        })
    }

    pub fn grid(&self) -> Grid {
        Grid::cubic(self.n, self.box_length).expect("validated grid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(text: &str) -> CliResult<Settings> {
        let mut s = Settings::new(RUN_DEFAULTS, &[]);
        s.load_text(text, Path::new("run.cfg"))?;
        Ok(s)
    }

    #[test]
    fn defaults_are_a_complete_valid_config() {
        let c = RunConfig::from_settings(&Settings::new(RUN_DEFAULTS, &[])).unwrap();
        assert_eq!(c.n, 32);
        assert!((c.box_length - 2.0 * std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn comments_blank_lines_and_precedence() {
        let mut s = settings("# header\n\ngrid.n = 16  # trailing\ninit.seed = 3\n").unwrap();
        assert_eq!(s.parse::<usize>("grid.n").unwrap(), 16);
        s.load_env_seed(Some("5".into())).unwrap();
        assert_eq!(s.parse::<u64>("init.seed").unwrap(), 5);
        s.apply_override("init.seed=9").unwrap();
        assert_eq!(s.parse::<u64>("init.seed").unwrap(), 9);
        assert_eq!(s.origin("grid.n"), Origin::File { path: "run.cfg".into(), line: 3 });
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let e = settings("grid.n = 16\nphys.nu = fast\n").unwrap();
        let msg = RunConfig::from_settings(&e).unwrap_err().to_string();
        assert!(msg.contains("run.cfg:2") && msg.contains("phys.nu"), "{msg}");
        let msg = settings("grid.n = 16\ngrid.n = 18\n").unwrap_err().to_string();
        assert!(msg.contains("run.cfg:2") && msg.contains("duplicate"), "{msg}");
        let msg = settings("grid.size = 16\n").unwrap_err().to_string();
        assert!(msg.contains("run.cfg:1: field `grid.size`: unknown field"), "{msg}");
        let msg = settings("just words\n").unwrap_err().to_string();
        assert!(msg.contains("run.cfg:1"), "{msg}");
    }

    #[test]
    fn physical_rules_are_rechecked() {
        let f1 = RunConfig::from_settings(&settings("phys.F = 1\n").unwrap()).unwrap_err();
        assert_eq!(f1.code(), 2);
        assert!(f1.to_string().contains("F must differ from 1"));
        let odd = RunConfig::from_settings(&settings("grid.n = 33\n").unwrap()).unwrap_err();
        assert!(odd.to_string().contains("grid.n"), "{odd}");
        assert!(RunConfig::from_settings(&settings("phys.epsilon = 2\n").unwrap()).is_err());
    }

    #[test]
    fn kind_specific_fields_are_required() {
        let e = RunConfig::from_settings(&settings("init.kind = mixed_theorem2\ninit.gamma = 0.02\n").unwrap());
        assert!(e.unwrap_err().to_string().contains("init.delta"));
        let ok = settings("init.kind = mixed_theorem2\ninit.gamma = 0.02\ninit.delta = 0.1\ninit.alpha0 = 1\n").unwrap();
        assert!(RunConfig::from_settings(&ok).is_ok());
        let bad = settings("init.kind = mixed_theorem2\ninit.gamma = 0.08\ninit.delta = 0.1\ninit.alpha0 = 1\n").unwrap();
        assert!(RunConfig::from_settings(&bad).is_err());
    }

    #[test]
    fn lengths_accept_pi_multiples() {
        assert!((parse_length("2pi").unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(parse_length("pi").unwrap(), std::f64::consts::PI);
        assert_eq!(parse_length("3.5").unwrap(), 3.5);
        assert!(parse_length("-1").is_err());
        assert!(parse_length("xpi").is_err());
    }
}
