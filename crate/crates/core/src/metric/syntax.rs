//! Metric-spec strings.
//!
//! ```text
//! spec      = zoo | conformal | custom ;
//! zoo       = name [ ":" "n=" digits ] ;
//! name      = "flat" | "hopf0" | "hopf-standard" | "hopfp" | "hopf-perturbed"
//!           | "fs" | "fubini-study" | "conformal-flat" | "inoue-k" | "inoue-model" ;
//! conformal = "conformal(" spec ";" "f=" expr ")" ;
//! custom    = "custom(" "n=" digit { ";" entry } ")" ;
//! entry     = "g" digit digit "=" expr [ "," expr ] ;
//! ```
//!
//! `n` defaults to 2. `conformal-flat` is `e^{x1}` times the flat metric. Custom
//! entries use 1-based indices on or above the diagonal; the optional second
//! expression is the imaginary part.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::{CustomEntry, MetricKind, MetricSpec};
use crate::dsl::{self, FieldExpr};
use crate::{Error, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

/// Splits at `sep` characters that are not nested inside parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_dim(s: &str) -> Result<usize> {
    let v = s.trim().strip_prefix("n=").ok_or_else(|| invalid(format!("expected `n=<dim>`, found `{s}`")))?;
    v.trim().parse().map_err(|_| invalid(format!("bad dimension `{v}`")))
}

fn parse_expr(s: &str) -> Result<FieldExpr> {
    Ok(dsl::parse(s.trim())?)
}

/// Parses a metric-spec string.
pub fn parse_spec(s: &str) -> Result<MetricSpec> {
    let s = s.trim();
    if let Some(body) = s.strip_prefix("conformal(") {
        let body = body.strip_suffix(')').ok_or_else(|| invalid("unclosed `conformal(`"))?;
        let parts = split_top(body, ';');
        if parts.len() != 2 {
            return Err(invalid("conformal takes `<spec>; f=<expr>`"));
        }
        let base = parse_spec(parts[0])?;
        if base.is_line_bundle_weight() {
            return Err(invalid("cannot rescale a line-bundle weight"));
        }
        let f = parts[1].trim().strip_prefix("f=").ok_or_else(|| invalid("conformal factor must read `f=<expr>`"))?;
        let factor = parse_expr(f)?;
        check_vars(&factor, base.dim())?;
        return Ok(super::conformal_rescale(&base, factor));
    }
    if let Some(body) = s.strip_prefix("custom(") {
        let body = body.strip_suffix(')').ok_or_else(|| invalid("unclosed `custom(`"))?;
        let parts = split_top(body, ';');
        let n = parse_dim(parts[0])?;
        let mut entries: Vec<CustomEntry> = Vec::new();
        for part in &parts[1..] {
            let (key, val) = part.split_once('=').ok_or_else(|| invalid(format!("bad custom entry `{}`", part.trim())))?;
            let key = key.trim();
            let idx: Vec<usize> = key
                .strip_prefix('g')
                .filter(|d| d.len() == 2)
                .map(|d| d.chars().filter_map(|c| c.to_digit(10)).map(|d| d as usize).collect())
                .unwrap_or_default();
            if idx.len() != 2 || idx[0] == 0 || idx[1] == 0 {
                return Err(invalid(format!("bad custom entry name `{key}`")));
            }
            let (i, j) = (idx[0] - 1, idx[1] - 1);
            if entries.iter().any(|e| e.i == i && e.j == j) {
                return Err(invalid(format!("duplicate custom entry `{key}`")));
            }
            let vals = split_top(val, ',');
            let re = parse_expr(vals[0])?;
            let im = match vals.len() {
                1 => None,
                2 => Some(parse_expr(vals[1])?),
                _ => return Err(invalid(format!("entry `{key}` takes at most two expressions"))),
            };
            check_vars(&re, n)?;
            if let Some(im) = &im {
                check_vars(im, n)?;
            }
            entries.push(CustomEntry { i, j, re, im });
        }
        return MetricSpec::custom(n, entries);
    }
    let (name, params) = match s.split_once(':') {
        Some((a, b)) => (a.trim(), Some(b)),
        None => (s, None),
    };
    let n = match params {
        Some(p) => parse_dim(p)?,
        None => 2,
    };
    match name {
        "flat" => MetricSpec::flat(n),
        "hopf0" | "hopf-standard" => MetricSpec::hopf_standard(n),
        "hopfp" | "hopf-perturbed" => MetricSpec::hopf_perturbed(n),
        "fs" | "fubini-study" => MetricSpec::fubini_study(n),
        "conformal-flat" => MetricSpec::conformal_flat(n, parse_expr("x1")?),
        "inoue-k" | "inoue-model" => {
            if params.is_some() && n != 2 {
                return Err(invalid("inoue-k lives on H × C (n=2)"));
            }
            Ok(MetricSpec::inoue_canonical())
        }
        other => Err(invalid(format!("unknown metric `{other}`"))),
    }
}

fn check_vars(f: &FieldExpr, n: usize) -> Result<()> {
    if f.min_dim() > n {
        return Err(invalid(format!("`{f}` refers to coordinate {} but n={n}", f.min_dim())));
    }
    Ok(())
}

impl core::str::FromStr for MetricSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_spec(s)
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        match &self.kind {
            MetricKind::Flat => write!(f, "flat:n={n}"),
            MetricKind::HopfStandard => write!(f, "hopf0:n={n}"),
            MetricKind::HopfPerturbed => write!(f, "hopfp:n={n}"),
            MetricKind::FubiniStudy => write!(f, "fs:n={n}"),
            MetricKind::InoueCanonical => f.write_str("inoue-k"),
            MetricKind::Conformal { base, factor } => write!(f, "conformal({base}; f={factor})"),
            MetricKind::Custom(entries) => {
                write!(f, "custom(n={n}")?;
                for e in entries {
                    write!(f, "; g{}{}={}", e.i + 1, e.j + 1, e.re)?;
                    if let Some(im) = &e.im {
                        write!(f, ", {im}")?;
                    }
                }
                f.write_str(")")
            }
        }
    }
}

/// Zoo names with their dimension constraints, for listings.
pub const ZOO: [(&str, &str, &str); 7] = [
    ("flat", "n >= 1", "Euclidean metric δ"),
    ("hopf0", "n >= 1", "standard Hopf metric δ/|z|² on C^n minus 0"),
    ("hopfp", "n >= 2", "perturbed Hopf metric, Levi-Civita Ricci-flat"),
    ("fs", "n >= 1", "Fubini-Study in an affine chart"),
    ("conformal-flat", "n >= 1", "e^{x1} δ"),
    ("inoue-k", "n = 2", "canonical-bundle weight (Im w)² on H × C"),
    ("custom(n=..; gij=re[, im]; ..)", "1 <= n <= 9", "user entries, lower triangle by conjugation"),
];

impl MetricSpec {
    /// Canonical spec string, the same as `to_string()`.
    pub fn spec_string(&self) -> String {
        self.to_string()
    }
}
