//! Line-oriented run configuration: `dotted.key_unit = value`, one per line,
//! `#` starting a comment.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::ConfigError;
use crate::schema::{schema_for, Default, Experiment, KeySpec};

pub const EXPERIMENT_KEY: &str = "experiment";
pub const SEED_KEY: &str = "seed";

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Bool(bool),
    Text(String),
}

/// Shortest decimal that parses back to the same f64, without a trailing
/// `.0` on integers.
pub fn format_number(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 && !(x == 0.0 && x.is_sign_negative()) {
        format!("{}", x as i64)
    } else {
        format!("{x:?}")
    }
}

fn is_bare_word(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
        && s != "true"
        && s != "false"
        && s.parse::<f64>().is_err()
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => f.write_str(&format_number(*x)),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Text(s) if is_bare_word(s) => f.write_str(s),
            Value::Text(s) => f.write_str(&quote(s)),
        }
    }
}

/// `s` in double quotes with `"`, `\\` and newlines escaped.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl Value {
    /// Parses the right-hand side of one line, including any trailing comment.
    pub fn parse(raw: &str) -> Result<Value, String> {
        let raw = raw.trim();
        if let Some(body) = raw.strip_prefix('"') {
            let mut out = String::new();
            let mut chars = body.chars();
            loop {
                match chars.next() {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') => match chars.next() {
                        Some('n') => out.push('\n'),
                        Some(c @ ('"' | '\\')) => out.push(c),
                        other => return Err(format!("bad escape \\{}", other.map_or(String::new(), String::from))),
                    },
                    Some(c) => out.push(c),
                }
            }
            let rest = chars.as_str().trim();
            if !(rest.is_empty() || rest.starts_with('#')) {
                return Err(format!("unexpected text after string: `{rest}`"));
            }
            return Ok(Value::Text(out));
        }
        let token = raw.split('#').next().unwrap_or("").trim();
        if token.is_empty() {
            return Err("missing value".into());
        }
        if token.contains(char::is_whitespace) {
            return Err(format!("`{token}` contains spaces; quote it"));
        }
        match token {
            "true" => return Ok(Value::Bool(true)),
            "false" => return Ok(Value::Bool(false)),
            _ => {}
        }
        match token.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Value::Number(x)),
            Ok(_) => Err(format!("`{token}` is not a finite number")),
            Err(_) => Ok(Value::Text(token.to_string())),
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Value::Number(_) => "number",
            Value::Bool(_) => "boolean",
            Value::Text(_) => "text",
        }
    }
}

fn valid_key(key: &str) -> bool {
    !key.is_empty()
        && key.split('.').all(|part| !part.is_empty() && part.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_'))
}

/// Parsed key-value pairs. Keys are unique; order is irrelevant.
#[derive(Debug, Clone, PartialEq, std::default::Default)]
pub struct Config {
    entries: BTreeMap<String, Value>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut entries = BTreeMap::new();
        for (index, line) in text.lines().enumerate() {
            let line_no = index + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, raw) = trimmed.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: line_no,
                message: "expected `key = value`".into(),
            })?;
            let key = key.trim();
            if !valid_key(key) {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: format!("invalid key `{key}` (lowercase dotted names only)"),
                });
            }
            let value = Value::parse(raw).map_err(|message| ConfigError::Syntax {
                line: line_no,
                message: format!("{key}: {message}"),
            })?;
            if entries.insert(key.to_string(), value).is_some() {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Config { entries })
    }

    /// Applies `key=value`.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, raw) = assignment
            .split_once('=')
            .ok_or_else(|| ConfigError::Override(format!("`{assignment}` is not key=value")))?;
        let key = key.trim();
        if !valid_key(key) {
            return Err(ConfigError::Override(format!("invalid key `{key}`")));
        }
        let value = Value::parse(raw).map_err(|m| ConfigError::Override(format!("{key}: {m}")))?;
        self.entries.insert(key.to_string(), value);
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.entries.insert(key.to_string(), value);
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Checks every key against the experiment's schema, fills defaults and
    /// type-checks values.
    pub fn resolve(mut self, experiment: Experiment) -> Result<Config, ConfigError> {
        match self.entries.get(EXPERIMENT_KEY) {
            None => {}
            Some(Value::Text(name)) if name == experiment.name() => {}
            Some(other) => {
                return Err(ConfigError::WrongExperiment {
                    found: other.to_string(),
                    expected: experiment.name().to_string(),
                })
            }
        }
        let specs = schema_for(experiment);
        for key in self.entries.keys() {
            if key == EXPERIMENT_KEY || key == SEED_KEY {
                continue;
            }
            if !specs.iter().any(|s| s.key == key) {
                return Err(ConfigError::UnknownKey {
                    key: key.clone(),
                    nearest: nearest_key(key, &specs),
                });
            }
        }
        self.entries.insert(EXPERIMENT_KEY.into(), Value::Text(experiment.name().into()));
        self.entries.entry(SEED_KEY.into()).or_insert(Value::Number(0.0));
        for spec in &specs {
            let value = self.entries.entry(spec.key.into()).or_insert_with(|| spec.default.value());
            let ok = matches!(
                (&spec.default, &*value),
                (Default::Number(_), Value::Number(_)) | (Default::Flag(_), Value::Bool(_)) | (Default::Word(_), Value::Text(_))
            );
            if !ok {
                return Err(ConfigError::Type {
                    key: spec.key.into(),
                    expected: spec.default.value().kind(),
                    found: value.kind(),
                });
            }
            if let (Default::Word(_), Value::Text(t)) = (&spec.default, &*value) {
                if !spec.choices.is_empty() && !spec.choices.contains(&t.as_str()) {
                    return Err(ConfigError::Invalid {
                        key: spec.key.into(),
                        message: format!("`{t}` is not one of {}", spec.choices.join(", ")),
                    });
                }
            }
        }
        self.count(SEED_KEY)?;
        Ok(self)
    }

    pub fn number(&self, key: &str) -> Result<f64, ConfigError> {
        match self.entries.get(key) {
            Some(Value::Number(x)) => Ok(*x),
            Some(other) => Err(ConfigError::Type { key: key.into(), expected: "number", found: other.kind() }),
            None => Err(ConfigError::Missing(key.into())),
        }
    }

    /// A non-negative integer.
    pub fn count(&self, key: &str) -> Result<u64, ConfigError> {
        let x = self.number(key)?;
        if x < 0.0 || x != x.trunc() || x > 2f64.powi(53) {
            return Err(ConfigError::Invalid { key: key.into(), message: format!("expected a non-negative integer, got {x}") });
        }
        Ok(x as u64)
    }

    pub fn text(&self, key: &str) -> Result<&str, ConfigError> {
        match self.entries.get(key) {
            Some(Value::Text(s)) => Ok(s),
            Some(other) => Err(ConfigError::Type { key: key.into(), expected: "text", found: other.kind() }),
            None => Err(ConfigError::Missing(key.into())),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool, ConfigError> {
        match self.entries.get(key) {
            Some(Value::Bool(b)) => Ok(*b),
            Some(other) => Err(ConfigError::Type { key: key.into(), expected: "boolean", found: other.kind() }),
            None => Err(ConfigError::Missing(key.into())),
        }
    }

    pub fn seed(&self) -> Result<u64, ConfigError> {
        self.count(SEED_KEY)
    }
}

/// Canonical form: `experiment`, then `seed`, then all other keys sorted.
impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for key in [EXPERIMENT_KEY, SEED_KEY] {
            if let Some(v) = self.entries.get(key) {
                writeln!(f, "{key} = {v}")?;
            }
        }
        for (key, v) in &self.entries {
            if key != EXPERIMENT_KEY && key != SEED_KEY {
                writeln!(f, "{key} = {v}")?;
            }
        }
        Ok(())
    }
}

fn nearest_key(key: &str, specs: &[KeySpec]) -> String {
    specs
        .iter()
        .map(|s| s.key)
        .chain([EXPERIMENT_KEY, SEED_KEY])
        .min_by_key(|candidate| (strsim::levenshtein(key, candidate), *candidate))
        .unwrap_or(SEED_KEY)
        .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_through_text() {
        for x in [0.0, 14.0, -50.0, 0.1, 1.0 / 150.0, 1e-7, 6.02e23, 1.352373e3, -0.035725] {
            let s = format_number(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(format_number(14.0), "14");
        assert_eq!(format_number(-3.0), "-3");
    }

    #[test]
    fn values() {
        assert_eq!(Value::parse(" 14 # ns").unwrap(), Value::Number(14.0));
        assert_eq!(Value::parse("pulsed").unwrap(), Value::Text("pulsed".into()));
        assert_eq!(Value::parse("\"a # b\" # c").unwrap(), Value::Text("a # b".into()));
        assert_eq!(Value::parse("true").unwrap(), Value::Bool(true));
        assert!(Value::parse("inf").is_err());
        assert!(Value::parse("two words").is_err());
        assert!(Value::parse("").is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let text = "# comment\nz.b_mhz = 2.50\nexperiment = ple\n\na.path = \"/tmp/x y.json\"\nseed=7\nflag.on = false\n";
        let c = Config::parse(text).unwrap();
        let canonical = c.to_string();
        assert_eq!(canonical, "experiment = ple\nseed = 7\na.path = \"/tmp/x y.json\"\nflag.on = false\nz.b_mhz = 2.5\n");
        assert_eq!(Config::parse(&canonical).unwrap(), c);
    }

    #[test]
    fn syntax_errors_name_the_line() {
        let err = Config::parse("seed = 1\nbroken line\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 2, .. }), "{err}");
        let err = Config::parse("a = 1\na = 2\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"));
        assert!(Config::parse("Bad.Key = 1").is_err());
    }

    #[test]
    fn unknown_keys_suggest_the_nearest() {
        let c = Config::parse("optics.t1_n = 14\n").unwrap();
        match c.resolve(Experiment::Ple).unwrap_err() {
            ConfigError::UnknownKey { key, nearest } => {
                assert_eq!(key, "optics.t1_n");
                assert_eq!(nearest, "optics.t1_ns");
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn resolve_fills_defaults_and_checks_types() {
        let c = Config::parse("optics.t1_ns = 10\n").unwrap().resolve(Experiment::Ple).unwrap();
        assert_eq!(c.number("optics.t1_ns").unwrap(), 10.0);
        assert_eq!(c.text(EXPERIMENT_KEY).unwrap(), "ple");
        assert_eq!(c.seed().unwrap(), 0);
        assert!(c.number("optics.t2_ns").is_ok());
        let bad = Config::parse("optics.t1_ns = fast\n").unwrap();
        assert!(matches!(bad.resolve(Experiment::Ple), Err(ConfigError::Type { .. })));
        let bad = Config::parse("readout.mode = sideways\n").unwrap();
        assert!(matches!(bad.resolve(Experiment::Ple), Err(ConfigError::Invalid { .. })));
        let wrong = Config::parse("experiment = lzs\n").unwrap();
        assert!(matches!(wrong.resolve(Experiment::Ple), Err(ConfigError::WrongExperiment { .. })));
        let seed = Config::parse("seed = 1.5\n").unwrap();
        assert!(seed.resolve(Experiment::Ple).is_err());
    }

    #[test]
    fn overrides_replace_values() {
        let mut c = Config::parse("optics.t1_ns = 14\n").unwrap();
        c.apply_override("optics.t1_ns=20").unwrap();
        assert_eq!(c.number("optics.t1_ns").unwrap(), 20.0);
        assert!(c.apply_override("no_equals").is_err());
    }
}
