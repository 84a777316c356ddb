//! The dual-graph file format and machine-readable error bodies.

use logkn_core::degen::{DualGraph, Edge, GraphIssue, Vertex};
use serde::{Deserialize, Serialize};

/// On-disk shape of a degeneration: a named dual graph.  Vertices and
/// edges are sorted by id on output so emitted files are stable.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub name: String,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: String,
    pub genus: u32,
    pub multiplicity: u32,
    pub marks: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub ends: [String; 2],
}

impl GraphFile {
    pub fn from_graph(g: &DualGraph) -> Self {
        let mut vertices: Vec<VertexRecord> = g
            .vertices
            .iter()
            .map(|v| VertexRecord {
                id: v.id.clone(),
                genus: v.genus,
                multiplicity: v.multiplicity,
                marks: v.marks,
            })
            .collect();
        let mut edges: Vec<EdgeRecord> = g
            .edges
            .iter()
            .map(|e| EdgeRecord {
                id: e.id.clone(),
                ends: [e.ends.0.clone(), e.ends.1.clone()],
            })
            .collect();
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        GraphFile { name: g.name.clone(), vertices, edges }
    }

    pub fn into_graph(self) -> DualGraph {
        DualGraph {
            name: self.name,
            vertices: self
                .vertices
                .into_iter()
                .map(|v| Vertex {
                    id: v.id,
                    genus: v.genus,
                    multiplicity: v.multiplicity,
                    marks: v.marks,
                })
                .collect(),
            edges: self
                .edges
                .into_iter()
                .map(|e| {
                    let [a, b] = e.ends;
                    Edge { id: e.id, ends: (a, b) }
                })
                .collect(),
        }
    }
}

/// Body printed on exit code 1.
#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub error: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub issues: Vec<IssueRecord>,
}

#[derive(Debug, Serialize)]
pub struct IssueRecord {
    pub code: &'static str,
    pub detail: String,
}

pub fn issue_record(issue: &GraphIssue) -> IssueRecord {
    let code = match issue {
        GraphIssue::EmptyGraph => "EmptyGraph",
        GraphIssue::DuplicateVertexId(_) => "DuplicateVertexId",
        GraphIssue::DuplicateEdgeId(_) => "DuplicateEdgeId",
        GraphIssue::ZeroMultiplicity(_) => "ZeroMultiplicity",
        GraphIssue::UnknownEndpoint { .. } => "UnknownEndpoint",
        GraphIssue::Disconnected => "Disconnected",
    };
    IssueRecord { code, detail: issue.to_string() }
}
