//! JSON instance files. Parse errors point at the line of the offending
//! field or array element.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use spatial_control::election::ScoringKind;
use spatial_control::{ElectionError, Electorate, Instance, IssueSpace, Norm, Objective, OpinionGroup, ScoringRule};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum IssueSpaceSpec {
    Binary,
    Real,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveSpec {
    Constructive,
    Destructive,
}

/// Norm exponent: a positive integer or the string "inf".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exponent(pub Norm);

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Norm::L(p) => s.serialize_u32(p),
            Norm::Inf => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Exponent, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exponent;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a positive integer or \"inf\"")
            }
            fn visit_u64<E: de::Error>(self, p: u64) -> Result<Exponent, E> {
                match u32::try_from(p) {
                    Ok(p) if p >= 1 => Ok(Exponent(Norm::L(p))),
                    _ => Err(E::invalid_value(de::Unexpected::Unsigned(p), &self)),
                }
            }
            fn visit_i64<E: de::Error>(self, p: i64) -> Result<Exponent, E> {
                Err(E::invalid_value(de::Unexpected::Signed(p), &self))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Exponent, E> {
                if s == "inf" {
                    Ok(Exponent(Norm::Inf))
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(s), &self))
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub p: Exponent,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScoringSpec {
    Plurality,
    Veto,
    Borda,
    KApproval { k: usize },
    Table { values: Vec<f64> },
}

impl ScoringSpec {
    pub fn build(&self, n: usize) -> Result<ScoringRule, ElectionError> {
        match self {
            ScoringSpec::Plurality => Ok(ScoringRule::plurality(n)),
            ScoringSpec::Veto => Ok(ScoringRule::veto(n)),
            ScoringSpec::Borda => Ok(ScoringRule::borda(n)),
            ScoringSpec::KApproval { k } => ScoringRule::k_approval(n, *k),
            ScoringSpec::Table { values } => ScoringRule::from_table(values.clone()),
        }
    }
}

/// Command-line form: `plurality`, `veto`, `borda`, `k-approval:K` or
/// `table:V1,V2,...`.
impl FromStr for ScoringSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<ScoringSpec, String> {
        let (head, arg) = s.split_once(':').map_or((s, None), |(h, a)| (h, Some(a)));
        match (head, arg) {
            ("plurality", None) => Ok(ScoringSpec::Plurality),
            ("veto", None) => Ok(ScoringSpec::Veto),
            ("borda", None) => Ok(ScoringSpec::Borda),
            ("k-approval", Some(k)) => k.parse().map(|k| ScoringSpec::KApproval { k }).map_err(|e| format!("k: {e}")),
            ("table", Some(v)) => v
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map(|values| ScoringSpec::Table { values })
                .map_err(|e| format!("table value: {e}")),
            _ => Err(format!("unknown scoring rule `{s}`")),
        }
    }
}

/// Command-line form: a positive integer or `inf`.
impl FromStr for Exponent {
    type Err = String;

    fn from_str(s: &str) -> Result<Exponent, String> {
        if s == "inf" {
            return Ok(Exponent(Norm::Inf));
        }
        match s.parse::<u32>() {
            Ok(p) if p >= 1 => Ok(Exponent(Norm::L(p))),
            _ => Err(format!("norm exponent must be a positive integer or `inf`, got `{s}`")),
        }
    }
}

impl From<IssueSpaceSpec> for IssueSpace {
    fn from(s: IssueSpaceSpec) -> IssueSpace {
        match s {
            IssueSpaceSpec::Binary => IssueSpace::Binary,
            IssueSpaceSpec::Real => IssueSpace::Real,
        }
    }
}

impl From<ObjectiveSpec> for Objective {
    fn from(s: ObjectiveSpec) -> Objective {
        match s {
            ObjectiveSpec::Constructive => Objective::Constructive,
            ObjectiveSpec::Destructive => Objective::Destructive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub position: Vec<f64>,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub issue_space: IssueSpaceSpec,
    pub dimension: usize,
    pub norm: NormSpec,
    pub epsilon: f64,
    pub objective: ObjectiveSpec,
    pub scoring: ScoringSpec,
    pub candidates: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub voters: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<GroupSpec>>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> InstanceFile {
        let scoring = instance.scoring();
        let scoring = match scoring.kind() {
            ScoringKind::Plurality => ScoringSpec::Plurality,
            ScoringKind::Veto => ScoringSpec::Veto,
            ScoringKind::Borda => ScoringSpec::Borda,
            ScoringKind::KApproval(k) => ScoringSpec::KApproval { k },
            ScoringKind::Table => ScoringSpec::Table { values: scoring.values().to_vec() },
        };
        let (voters, groups) = match instance.electorate() {
            Electorate::Voters(v) => (Some(v.clone()), None),
            Electorate::Groups(g) => (
                None,
                Some(g.iter().map(|g| GroupSpec { position: g.position.clone(), weight: g.weight }).collect()),
            ),
        };
        InstanceFile {
            issue_space: if instance.is_binary() { IssueSpaceSpec::Binary } else { IssueSpaceSpec::Real },
            dimension: instance.dimension(),
            norm: NormSpec { p: Exponent(instance.norm()) },
            epsilon: instance.budget(),
            objective: match instance.objective() {
                Objective::Constructive => ObjectiveSpec::Constructive,
                Objective::Destructive => ObjectiveSpec::Destructive,
            },
            scoring,
            candidates: instance.candidates().to_vec(),
            voters,
            groups,
        }
    }
}

/// Shortest round-trip decimal form for every number.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceFile::from_instance(instance)).expect("plain data serializes");
    s.push('\n');
    s
}

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

/// Byte offset of the value of top-level `key`, and optionally of element
/// `index` of that array value. Falls back to the key itself.
fn locate(text: &str, key: &str, index: Option<usize>) -> Option<usize> {
    let needle = format!("\"{key}\"");
    let start = text.find(&needle)?;
    let Some(index) = index else { return Some(start) };
    let bytes = text.as_bytes();
    let mut i = start + needle.len();
    while i < bytes.len() && bytes[i] != b'[' {
        i += 1;
    }
    let (mut depth, mut count, mut in_str, mut escaped) = (0usize, 0usize, false, false);
    let mut element_start = None;
    while i < bytes.len() {
        let b = bytes[i];
        if in_str {
            if escaped {
                escaped = false;
            } else if b == b'\\' {
                escaped = true;
            } else if b == b'"' {
                in_str = false;
            }
        } else {
            match b {
                b'"' => in_str = true,
                b'[' | b'{' => {
                    depth += 1;
                    if depth == 2 && count == index {
                        element_start = Some(i);
                    }
                }
                b']' | b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                b',' if depth == 1 => count += 1,
                _ if depth == 1 && count == index && !b.is_ascii_whitespace() && element_start.is_none() => {
                    element_start = Some(i);
                }
                _ => {}
            }
        }
        if element_start.is_some() {
            return element_start;
        }
        i += 1;
    }
    Some(start)
}

fn anchored(text: &str, key: &str, index: Option<usize>, message: impl Into<String>) -> FormatError {
    let line = locate(text, key, index).map_or(1, |o| line_of(text, o));
    FormatError { line, message: message.into() }
}

fn election_anchor(text: &str, file: &InstanceFile, err: &ElectionError) -> FormatError {
    let electorate_key = if file.groups.is_some() { "groups" } else { "voters" };
    let key_for = |what: &str| match what {
        "candidate" => "candidates",
        _ => electorate_key,
    };
    let msg = err.to_string();
    match err {
        ElectionError::NonFinite { what, index, .. } | ElectionError::NonBinary { what, index, .. } => {
            anchored(text, key_for(what), Some(*index), msg)
        }
        ElectionError::ZeroWeight(j) => anchored(text, "groups", Some(*j), msg),
        ElectionError::InvalidBudget(_) => anchored(text, "epsilon", None, msg),
        ElectionError::InvalidNorm => anchored(text, "norm", None, msg),
        ElectionError::TooFewCandidates(_) => anchored(text, "candidates", None, msg),
        ElectionError::NoVoters => anchored(text, electorate_key, None, msg),
        ElectionError::ZeroDimension | ElectionError::DimensionMismatch { .. } => {
            anchored(text, "dimension", None, msg)
        }
        _ => anchored(text, "scoring", None, msg),
    }
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: InstanceFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner();
        let full = inner.to_string();
        let message = match full.rfind(" at line ") {
            Some(cut) => full[..cut].to_string(),
            None => full,
        };
        let path = e.path().to_string();
        let message = if path == "." { message } else { format!("`{path}`: {message}") };
        FormatError { line: inner.line().max(1), message }
    })?;
    let electorate = match (&file.voters, &file.groups) {
        (Some(_), Some(_)) => {
            return Err(anchored(text, "groups", None, "give either `voters` or `groups`, not both"));
        }
        (None, None) => return Err(anchored(text, "candidates", None, "missing `voters` or `groups`")),
        (Some(v), None) => Electorate::Voters(v.clone()),
        (None, Some(g)) => Electorate::Groups(
            g.iter().map(|g| OpinionGroup { position: g.position.clone(), weight: g.weight }).collect(),
        ),
    };
    let d = file.dimension;
    let points: Vec<(&str, usize, usize)> = file
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| ("candidates", i, c.len()))
        .chain(file.voters.iter().flatten().enumerate().map(|(i, v)| ("voters", i, v.len())))
        .chain(file.groups.iter().flatten().enumerate().map(|(i, g)| ("groups", i, g.position.len())))
        .collect();
    for (key, i, len) in points {
        if len != d {
            return Err(anchored(text, key, Some(i), format!("{key} entry {i} has {len} coordinates, `dimension` is {d}")));
        }
    }
    let n = file.candidates.len();
    let scoring = file.scoring.build(n).map_err(|e| election_anchor(text, &file, &e))?;
    Instance::new(
        file.issue_space.into(),
        file.candidates.clone(),
        electorate,
        file.norm.p.0,
        scoring,
        file.objective.into(),
        file.epsilon,
    )
        .map_err(|e| election_anchor(text, &file, &e))
}
