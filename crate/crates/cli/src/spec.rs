//! Channel and code specifications: `name[:key=value,...]`.
//!
//! ```text
//! depolarizing:p=0.19
//! two-pauli:p=0.25
//! indep:ratio=9,p=0.29
//! pauli:px=0.1,py=0.02,pz=0.05
//! cat:m=5,basis=Z
//! concat:inner=3Z,outer=19X
//! ```

use std::fmt;
use std::str::FromStr;

use catcodes::search::Code;
use catcodes::{Basis, CatCodeSpec, ChannelFamily, ConcatSpec, PauliChannel};

/// Parse failure with a 1-based column into the offending input.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecError {
    pub input: String,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "line 1, column {}: {}", self.column, self.message)?;
        writeln!(f, "  {}", self.input)?;
        write!(f, "  {:>width$}", "^", width = self.column)
    }
}

impl std::error::Error for SpecError {}

struct Field<'a> {
    key: &'a str,
    value: &'a str,
    key_col: usize,
    value_col: usize,
}

struct Parsed<'a> {
    input: &'a str,
    name: &'a str,
    fields: Vec<Field<'a>>,
}

impl<'a> Parsed<'a> {
    fn err(&self, column: usize, message: impl Into<String>) -> SpecError {
        SpecError {
            input: self.input.to_string(),
            column,
            message: message.into(),
        }
    }

    fn split(input: &'a str) -> Result<Self, SpecError> {
        let err = |column, message: &str| SpecError {
            input: input.to_string(),
            column,
            message: message.to_string(),
        };
        let (name, rest) = match input.find(':') {
            Some(i) => (&input[..i], Some((i + 1, &input[i + 1..]))),
            None => (input, None),
        };
        if name.is_empty() {
            return Err(err(1, "missing name before ':'"));
        }
        let mut fields = Vec::new();
        if let Some((start, body)) = rest {
            let mut offset = start;
            for part in body.split(',') {
                let col = offset + 1;
                let Some(eq) = part.find('=') else {
                    return Err(err(col, "expected key=value"));
                };
                let (key, value) = (&part[..eq], &part[eq + 1..]);
                if key.is_empty() {
                    return Err(err(col, "empty key"));
                }
                if value.is_empty() {
                    return Err(err(col + eq + 1, &format!("missing value for '{key}'")));
                }
                if fields.iter().any(|f: &Field| f.key == key) {
                    return Err(err(col, &format!("duplicate key '{key}'")));
                }
                fields.push(Field {
                    key,
                    value,
                    key_col: col,
                    value_col: col + eq + 1,
                });
                offset += part.len() + 1;
            }
        }
        Ok(Self { input, name, fields })
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<(), SpecError> {
        match self.fields.iter().find(|f| !allowed.contains(&f.key)) {
            Some(f) => Err(self.err(
                f.key_col,
                format!("unknown key '{}' for '{}' (expected {})", f.key, self.name, allowed.join(", ")),
            )),
            None => Ok(()),
        }
    }

    fn field(&self, key: &str) -> Option<&Field<'a>> {
        self.fields.iter().find(|f| f.key == key)
    }

    fn number(&self, key: &str) -> Result<Option<f64>, SpecError> {
        self.field(key)
            .map(|f| {
                f.value
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| self.err(f.value_col, format!("'{}' is not a number", f.value)))
            })
            .transpose()
    }

    fn required_number(&self, key: &str) -> Result<f64, SpecError> {
        self.number(key)?
            .ok_or_else(|| self.err(self.input.len() + 1, format!("'{}' needs {key}=", self.name)))
    }

    fn parse_with<T>(&self, key: &str, f: impl FnOnce(&str) -> Result<T, String>) -> Result<Option<T>, SpecError> {
        self.field(key)
            .map(|fl| f(fl.value).map_err(|m| self.err(fl.value_col, m)))
            .transpose()
    }
}

/// A channel family with an optional fixed noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    pub family: ChannelFamily,
    pub p: Option<f64>,
    /// Exact error probabilities of a `pauli:` spec.
    errors: Option<[f64; 3]>,
}

impl ChannelSpec {
    pub fn family(family: ChannelFamily) -> Self {
        Self {
            family,
            p: None,
            errors: None,
        }
    }

    /// The channel at `p`, which overrides the spec's own noise level.
    pub fn channel(&self, p: Option<f64>) -> catcodes::Result<PauliChannel> {
        match (p, self.errors) {
            (None, Some([x, y, z])) => PauliChannel::from_errors(x, y, z),
            (Some(p), _) => self.family.evaluate(p),
            (None, None) => match self.p {
                Some(p) => self.family.evaluate(p),
                None => Err(catcodes::Error::InvalidParameter(format!(
                    "channel '{self}' needs a noise level (p=... or --p)"
                ))),
            },
        }
    }
}

impl fmt::Display for ChannelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some([x, y, z]) = self.errors {
            return write!(f, "pauli:px={x},py={y},pz={z}");
        }
        write!(f, "{}", self.family.name())?;
        let mut sep = ':';
        if let ChannelFamily::IndependentXz { ratio } = self.family {
            write!(f, "{sep}ratio={ratio}")?;
            sep = ',';
        }
        if let ChannelFamily::CustomRay { direction: [x, y, z] } = self.family {
            write!(f, "{sep}dx={x},dy={y},dz={z}")?;
            sep = ',';
        }
        if let Some(p) = self.p {
            write!(f, "{sep}p={p}")?;
        }
        Ok(())
    }
}

impl FromStr for ChannelSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        let parsed = Parsed::split(s)?;
        let domain = |e: catcodes::Error| parsed.err(parsed.name.len() + 2, e.to_string());
        let spec = match parsed.name {
            "depolarizing" | "two-pauli" => {
                parsed.check_keys(&["p"])?;
                let family = if parsed.name == "depolarizing" {
                    ChannelFamily::Depolarizing
                } else {
                    ChannelFamily::TwoPauli
                };
                Self {
                    family,
                    p: parsed.number("p")?,
                    errors: None,
                }
            }
            "indep" => {
                parsed.check_keys(&["ratio", "p"])?;
                let ratio = parsed.required_number("ratio")?;
                Self {
                    family: ChannelFamily::independent_xz(ratio).map_err(domain)?,
                    p: parsed.number("p")?,
                    errors: None,
                }
            }
            "pauli" => {
                if parsed.field("px").is_some() || parsed.field("py").is_some() || parsed.field("pz").is_some() {
                    parsed.check_keys(&["px", "py", "pz"])?;
                    let e = [
                        parsed.required_number("px")?,
                        parsed.required_number("py")?,
                        parsed.required_number("pz")?,
                    ];
                    PauliChannel::from_errors(e[0], e[1], e[2]).map_err(domain)?;
                    Self {
                        family: ChannelFamily::custom_ray(e[0], e[1], e[2]).map_err(domain)?,
                        p: None,
                        errors: Some(e),
                    }
                } else {
                    parsed.check_keys(&["dx", "dy", "dz", "p"])?;
                    let d = [
                        parsed.required_number("dx")?,
                        parsed.required_number("dy")?,
                        parsed.required_number("dz")?,
                    ];
                    Self {
                        family: ChannelFamily::custom_ray(d[0], d[1], d[2]).map_err(domain)?,
                        p: parsed.number("p")?,
                        errors: None,
                    }
                }
            }
            other => {
                return Err(parsed.err(
                    1,
                    format!("unknown channel '{other}' (expected depolarizing, two-pauli, indep or pauli)"),
                ))
            }
        };
        if let Some(p) = spec.p {
            spec.family.evaluate(p).map_err(|e| {
                let col = parsed.field("p").map_or(1, |f| f.value_col);
                parsed.err(col, e.to_string())
            })?;
        }
        Ok(spec)
    }
}

fn parse_basis(s: &str) -> Result<Basis, String> {
    s.parse::<Basis>().map_err(|e| e.to_string())
}

fn parse_level(s: &str) -> Result<CatCodeSpec, String> {
    s.parse::<CatCodeSpec>().map_err(|e| e.to_string())
}

/// Parses `cat:m=..,basis=..` or `concat:inner=..,outer=..`.
pub fn parse_code(s: &str) -> Result<Code, SpecError> {
    let parsed = Parsed::split(s)?;
    match parsed.name {
        "cat" => {
            parsed.check_keys(&["m", "basis"])?;
            let m_field = parsed
                .field("m")
                .ok_or_else(|| parsed.err(s.len() + 1, "'cat' needs m="))?;
            let m: usize = m_field
                .value
                .parse()
                .map_err(|_| parsed.err(m_field.value_col, format!("'{}' is not a length", m_field.value)))?;
            let basis = parsed.parse_with("basis", parse_basis)?.unwrap_or_default();
            CatCodeSpec::new(m, basis)
                .map(Code::Cat)
                .map_err(|e| parsed.err(m_field.value_col, e.to_string()))
        }
        "concat" => {
            parsed.check_keys(&["inner", "outer"])?;
            let inner = parsed.parse_with("inner", parse_level)?;
            let outer = parsed.parse_with("outer", parse_level)?;
            match (inner, outer) {
                (Some(i), Some(o)) => Ok(Code::Concat(ConcatSpec::new(i, o))),
                _ => Err(parsed.err(s.len() + 1, "'concat' needs inner= and outer=")),
            }
        }
        other => Err(parsed.err(1, format!("unknown code '{other}' (expected cat or concat)"))),
    }
}
