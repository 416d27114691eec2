//! JSON documents for environments, reduced forms, functions, and graphs.
//!
//! Rationals travel as strings (`"3/10"`); integers are also accepted on input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadgets::Multigraph;
use crate::interim::ReducedForm;
use crate::model::{Environment, FeasibleFamily, PlayerSet};
use crate::rational::{parse_rational, to_strings, Rational, RationalString};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyDoc {
    SingleItem,
    KUnit {
        k: usize,
    },
    PublicProject,
    SingleMinded {
        bundles: Vec<Vec<String>>,
    },
    GraphicalMatroid {
        vertices: usize,
        edges: Vec<(usize, usize)>,
    },
    Explicit {
        sets: Vec<Vec<usize>>,
    },
}

impl From<&FeasibleFamily> for FamilyDoc {
    fn from(family: &FeasibleFamily) -> Self {
        match family {
            FeasibleFamily::SingleItem => FamilyDoc::SingleItem,
            FeasibleFamily::KUnit { k } => FamilyDoc::KUnit { k: *k },
            FeasibleFamily::PublicProject => FamilyDoc::PublicProject,
            FeasibleFamily::SingleMinded { bundles } => FamilyDoc::SingleMinded {
                bundles: bundles.clone(),
            },
            FeasibleFamily::GraphicalMatroid { vertices, edges } => FamilyDoc::GraphicalMatroid {
                vertices: *vertices,
                edges: edges.clone(),
            },
            FeasibleFamily::Explicit { sets } => FamilyDoc::Explicit {
                sets: sets.iter().map(|s| s.players().collect()).collect(),
            },
        }
    }
}

impl From<FamilyDoc> for FeasibleFamily {
    fn from(doc: FamilyDoc) -> Self {
        match doc {
            FamilyDoc::SingleItem => FeasibleFamily::SingleItem,
            FamilyDoc::KUnit { k } => FeasibleFamily::KUnit { k },
            FamilyDoc::PublicProject => FeasibleFamily::PublicProject,
            FamilyDoc::SingleMinded { bundles } => FeasibleFamily::SingleMinded { bundles },
            FamilyDoc::GraphicalMatroid { vertices, edges } => {
                FeasibleFamily::GraphicalMatroid { vertices, edges }
            }
            FamilyDoc::Explicit { sets } => FeasibleFamily::Explicit {
                sets: sets.into_iter().map(PlayerSet::from_players).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentDoc {
    pub players: usize,
    pub supports: Vec<Vec<RationalString>>,
    pub priors: Vec<Vec<RationalString>>,
    pub family: FamilyDoc,
}

fn unwrap_rows(rows: Vec<Vec<RationalString>>) -> Vec<Vec<Rational>> {
    rows.into_iter()
        .map(|row| row.into_iter().map(|v| v.0).collect())
        .collect()
}

fn wrap_rows(rows: &[Vec<Rational>]) -> Vec<Vec<RationalString>> {
    rows.iter().map(|row| to_strings(row)).collect()
}

impl From<&Environment> for EnvironmentDoc {
    fn from(env: &Environment) -> Self {
        EnvironmentDoc {
            players: env.players(),
            supports: wrap_rows(env.supports()),
            priors: wrap_rows(env.priors()),
            family: env.family().into(),
        }
    }
}

impl EnvironmentDoc {
    /// Validates and builds the environment.
    pub fn into_environment(self) -> Result<Environment> {
        if self.players != self.supports.len() || self.players != self.priors.len() {
            return Err(Error::InvalidInput(format!(
                "players = {} but {} supports and {} priors given",
                self.players,
                self.supports.len(),
                self.priors.len()
            )));
        }
        Environment::new(
            unwrap_rows(self.supports),
            unwrap_rows(self.priors),
            self.family.into(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedFormDoc {
    pub y: Vec<Vec<RationalString>>,
    /// Missing payments default to zero.
    #[serde(default)]
    pub q: Option<Vec<Vec<RationalString>>>,
}

impl From<&ReducedForm> for ReducedFormDoc {
    fn from(rf: &ReducedForm) -> Self {
        ReducedFormDoc {
            y: wrap_rows(&rf.y),
            q: Some(wrap_rows(&rf.q)),
        }
    }
}

impl From<ReducedFormDoc> for ReducedForm {
    fn from(doc: ReducedFormDoc) -> Self {
        let y = unwrap_rows(doc.y);
        match doc.q {
            Some(q) => ReducedForm {
                y,
                q: unwrap_rows(q),
            },
            None => ReducedForm::allocation_only(y),
        }
    }
}

pub fn environment_from_json(text: &str) -> Result<Environment> {
    let doc: EnvironmentDoc =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("environment: {e}")))?;
    doc.into_environment()
}

pub fn environment_to_json(env: &Environment) -> String {
    serde_json::to_string_pretty(&EnvironmentDoc::from(env))
        .expect("environment documents serialize")
}

/// Accepts a full reduced form `{"y": …, "q": …}` or a bare interim rule `[[…], …]`.
pub fn reduced_form_from_json(text: &str) -> Result<ReducedForm> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("reduced form: {e}")))?;
    if value.is_array() {
        let y: Vec<Vec<RationalString>> = serde_json::from_value(value)
            .map_err(|e| Error::InvalidInput(format!("interim rule: {e}")))?;
        return Ok(ReducedForm::allocation_only(unwrap_rows(y)));
    }
    let doc: ReducedFormDoc = serde_json::from_value(value)
        .map_err(|e| Error::InvalidInput(format!("reduced form: {e}")))?;
    Ok(doc.into())
}

pub fn reduced_form_to_json(rf: &ReducedForm) -> String {
    serde_json::to_string_pretty(&ReducedFormDoc::from(rf)).expect("reduced forms serialize")
}

pub fn graph_from_json(text: &str) -> Result<Multigraph> {
    let g: Multigraph =
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("graph: {e}")))?;
    g.validate()?;
    Ok(g)
}

pub fn graph_to_json(g: &Multigraph) -> String {
    serde_json::to_string_pretty(g).expect("graphs serialize")
}

/// Parses a list of rationals written as JSON (`["1/2", 3]`) or loosely
/// (`[1/2, 0.3, 3/10]`, brackets optional).
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    if let Ok(values) = serde_json::from_str::<Vec<RationalString>>(text) {
        return Ok(values.into_iter().map(|v| v.0).collect());
    }
    let inner = text.trim();
    let inner = inner.strip_prefix('[').unwrap_or(inner);
    let inner = inner.strip_suffix(']').unwrap_or(inner).trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|item| parse_rational(item.trim().trim_matches('"')))
        .collect()
}

pub fn rational_list_to_json(values: &[Rational]) -> String {
    serde_json::to_string(&to_strings(values)).expect("rational lists serialize")
}
