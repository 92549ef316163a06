//! JSON input and output formats.
//!
//! Graph: `{"vertices": ["a", ...], "edges": [{"id": "e", "src": "a", "dst": "b"}, ...]}`.
//! Cuts: `{"members": [...]}` for one cut, or `{"cuts": [{"name": .., "members": [..]}, ..]}`
//! for a family. On Cayley balls members may be given as words with
//! `"members_words"`. A cut file may carry its own universe as `"graph"` or as
//! a bare `"vertices"` list.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cuts::{Cut, Universe};
use crate::graph::Graph;
use crate::group::{BallView, GroupSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

impl GraphDoc {
    pub fn build(&self) -> Result<Graph> {
        Graph::build(
            self.vertices.iter().cloned(),
            self.edges.iter().map(|e| (e.id.clone(), e.src.clone(), e.dst.clone())),
        )
    }

    pub fn of(g: &Graph) -> GraphDoc {
        GraphDoc {
            vertices: g.vertex_ids().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    src: g.vertex_id(e.src).to_string(),
                    dst: g.vertex_id(e.dst).to_string(),
                })
                .collect(),
        }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    serde_json::from_str::<GraphDoc>(text)?.build()
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphDoc::of(g)).unwrap()
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    graph_from_json(&read_text(path)?)
}

/// A group given as a file path, a shorthand such as `zd:2`, or inline JSON.
pub fn load_group(arg: &str) -> Result<GroupSpec> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with('{') && path.is_file() {
        GroupSpec::parse(&read_text(path)?)
    } else {
        GroupSpec::parse(arg)
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CutDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members_words: Option<Vec<String>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CutsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<String>>,
    #[serde(flatten)]
    pub single: CutDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cuts: Option<Vec<CutDoc>>,
}

impl CutsDoc {
    pub fn parse(text: &str) -> Result<CutsDoc> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<CutsDoc> {
        Self::parse(&read_text(path)?)
    }

    /// The universe carried by the file, if any.
    pub fn universe(&self) -> Result<Option<Graph>> {
        match (&self.graph, &self.vertices) {
            (Some(g), _) => Ok(Some(g.build()?)),
            (None, Some(vs)) => Ok(Some(Graph::build(vs.iter().cloned(), std::iter::empty())?)),
            (None, None) => Ok(None),
        }
    }

    /// The family, or the single cut as a one-element family.
    pub fn entries(&self) -> Vec<CutDoc> {
        match &self.cuts {
            Some(cs) => cs.clone(),
            None => vec![self.single.clone()],
        }
    }
}

impl CutDoc {
    /// Resolves member ids (or words, on a ball) to a cut of `u`.
    pub fn resolve(&self, u: &Universe, ball: Option<&BallView>) -> Result<Cut> {
        match (&self.members, &self.members_words) {
            (Some(ids), None) => u.cut_by_ids(ids),
            (None, Some(words)) => {
                let ball = ball.ok_or_else(|| Error::Parse("members_words needs a --group ball".into()))?;
                let o = ball.oracle();
                let members = words
                    .iter()
                    .map(|w| {
                        let x = o.normal_form(&o.parse_word(w)?);
                        ball.index_of(&x).ok_or_else(|| Error::RadiusTooSmall(o.format(&x)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                u.cut(members)
            }
            _ => Err(Error::Parse("a cut needs exactly one of members or members_words".into())),
        }
    }
}
