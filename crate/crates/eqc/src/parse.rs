//! Text input format for systems and on-target declarations.
//!
//! ```text
//! # comment                     (blank lines and `#`-to-end-of-line ignored)
//! monomer a
//! polymer A = a a               (body lists monomer occurrences)
//! ontarget A mu=1               (mu=<p>/<q>; mu=1 allowed)
//! ```
//!
//! Declaration order defines index order.  `ontarget` lines may reference any
//! polymer declared anywhere in the file.  All errors carry the 1-based line
//! number of the offending declaration.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::model::{ModelError, MonomerId, OnTargetSpec, Polymer, System};
use crate::multiset::Multiset;
use crate::ratio::{self, render_ratio};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error(transparent)]
    Model(ModelError),
    #[error("ontarget references unknown polymer `{0}`")]
    UnknownPolymer(String),
    #[error("duplicate ontarget declaration for `{0}`")]
    DuplicateOnTarget(String),
    #[error("malformed mu value `{0}`")]
    MuMalformed(String),
    #[error("mu must lie in (0, 1], got `{0}`")]
    MuOutOfRange(String),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// A parsed input file: the system plus the on-target declarations, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedFile {
    pub system: System,
    pub spec: Option<OnTargetSpec>,
}

impl fmt::Display for ParsedFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec {
            Some(spec) => f.write_str(&self.system.render_with_spec(spec)),
            None => f.write_str(&self.system.render()),
        }
    }
}

/// Parses a complete input file.
pub fn parse(text: &str) -> Result<ParsedFile, ParseError> {
    let mut monomers: Vec<(MonomerId, usize)> = Vec::new();
    let mut polymers: Vec<(String, Polymer, usize)> = Vec::new();
    let mut ontarget: Vec<(String, BigRational, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("monomer") => {
                let name = words
                    .next()
                    .ok_or_else(|| err(lineno, ParseErrorKind::Malformed("monomer needs a name".into())))?;
                if words.next().is_some() {
                    return Err(err(lineno, ParseErrorKind::Malformed("trailing tokens after monomer name".into())));
                }
                let id = MonomerId::new(name).map_err(|e| err(lineno, ParseErrorKind::Model(e)))?;
                if monomers.iter().any(|(m, _)| *m == id) {
                    return Err(err(lineno, ParseErrorKind::Model(ModelError::DuplicateMonomer(name.into()))));
                }
                monomers.push((id, lineno));
            }
            Some("polymer") => {
                let rest = line["polymer".len()..].trim();
                let (name, body) = rest.split_once('=').ok_or_else(|| {
                    err(lineno, ParseErrorKind::Malformed("polymer needs `= <monomers>`".into()))
                })?;
                let name = name.trim();
                MonomerId::new(name).map_err(|e| err(lineno, ParseErrorKind::Model(e)))?;
                if polymers.iter().any(|(n, _, _)| n == name) {
                    return Err(err(
                        lineno,
                        ParseErrorKind::Model(ModelError::DuplicatePolymerName(name.into())),
                    ));
                }
                let mut counts = Multiset::new();
                for tok in body.split_whitespace() {
                    let id = MonomerId::new(tok).map_err(|e| err(lineno, ParseErrorKind::Model(e)))?;
                    if !monomers.iter().any(|(m, _)| *m == id) {
                        return Err(err(
                            lineno,
                            ParseErrorKind::Model(ModelError::UnknownMonomer(name.into(), tok.into())),
                        ));
                    }
                    counts.insert(id, 1);
                }
                let p = Polymer::new(counts).map_err(|e| err(lineno, ParseErrorKind::Model(e)))?;
                if let Some((other, _, _)) = polymers.iter().find(|(_, q, _)| *q == p) {
                    return Err(err(
                        lineno,
                        ParseErrorKind::Model(ModelError::DuplicatePolymerContent(other.clone(), name.into())),
                    ));
                }
                polymers.push((name.to_string(), p, lineno));
            }
            Some("ontarget") => {
                let name = words
                    .next()
                    .ok_or_else(|| err(lineno, ParseErrorKind::Malformed("ontarget needs a polymer name".into())))?;
                let mu_tok = words
                    .next()
                    .ok_or_else(|| err(lineno, ParseErrorKind::Malformed("ontarget needs mu=<p>/<q>".into())))?;
                if words.next().is_some() {
                    return Err(err(lineno, ParseErrorKind::Malformed("trailing tokens after mu".into())));
                }
                let mu_str = mu_tok
                    .strip_prefix("mu=")
                    .ok_or_else(|| err(lineno, ParseErrorKind::Malformed("expected mu=<p>/<q>".into())))?;
                let mu = ratio::parse_ratio(mu_str)
                    .map_err(|_| err(lineno, ParseErrorKind::MuMalformed(mu_str.into())))?;
                if mu <= BigRational::from_integer(0.into()) || mu > BigRational::one() {
                    return Err(err(lineno, ParseErrorKind::MuOutOfRange(render_ratio(&mu))));
                }
                if ontarget.iter().any(|(n, _, _)| n == name) {
                    return Err(err(lineno, ParseErrorKind::DuplicateOnTarget(name.into())));
                }
                ontarget.push((name.to_string(), mu, lineno));
            }
            Some(other) => {
                return Err(err(
                    lineno,
                    ParseErrorKind::Malformed(format!("unknown directive `{}`", other)),
                ));
            }
            None => unreachable!("blank lines are skipped"),
        }
    }

    // Unused monomers are reported against their declaration line.
    for (m, lineno) in &monomers {
        if polymers.iter().all(|(_, p, _)| p.count(m) == 0) {
            return Err(err(
                *lineno,
                ParseErrorKind::Model(ModelError::UnusedMonomer(m.to_string())),
            ));
        }
    }

    let system = System::new(
        monomers.into_iter().map(|(m, _)| m).collect(),
        polymers.iter().map(|(n, p, _)| (n.clone(), p.clone())).collect(),
    )
    .map_err(|e| err(0, ParseErrorKind::Model(e)))?;

    let spec = if ontarget.is_empty() {
        None
    } else {
        let mut entries = Vec::new();
        for (name, mu, lineno) in ontarget {
            let j = system
                .polymer_index(&name)
                .ok_or_else(|| err(lineno, ParseErrorKind::UnknownPolymer(name.clone())))?;
            entries.push((j, mu));
        }
        Some(OnTargetSpec::new(&system, entries).map_err(|e| err(0, ParseErrorKind::Model(e)))?)
    };

    Ok(ParsedFile { system, spec })
}

/// Parses just the system part of a file (on-target lines are still
/// validated but may be absent).
pub fn parse_system(text: &str) -> Result<System, ParseError> {
    parse(text).map(|f| f.system)
}
