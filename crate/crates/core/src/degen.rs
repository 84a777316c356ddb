//! Dual graphs of normal crossings degenerations.
//!
//! A vertex is an irreducible component of the special fiber with its
//! genus, multiplicity and number of marked points; an edge is a node.
//! Loops are allowed (a component meeting itself) and count twice in
//! the degree.  Euler characteristics, zeta factorizations and blowup
//! moves are pure graph bookkeeping and work for arbitrary
//! multiplicities; fiber-surface constructions downstream insist on
//! the semistable (all multiplicities one) case.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use alloc::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub genus: u32,
    pub multiplicity: u32,
    pub marks: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: (String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphIssue {
    EmptyGraph,
    DuplicateVertexId(String),
    DuplicateEdgeId(String),
    ZeroMultiplicity(String),
    UnknownEndpoint { edge: String, vertex: String },
    Disconnected,
}

impl fmt::Display for GraphIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphIssue::EmptyGraph => write!(f, "graph has no vertices"),
            GraphIssue::DuplicateVertexId(id) => write!(f, "duplicate vertex id {id}"),
            GraphIssue::DuplicateEdgeId(id) => write!(f, "duplicate edge id {id}"),
            GraphIssue::ZeroMultiplicity(id) => write!(f, "vertex {id} has multiplicity 0"),
            GraphIssue::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge} ends at unknown vertex {vertex}")
            }
            GraphIssue::Disconnected => write!(f, "graph is not connected"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlowupMove {
    /// Blow up the node an edge stands for: the edge is subdivided by
    /// an exceptional vertex whose multiplicity is the sum of the two
    /// ends.
    Node { edge: String },
    /// Blow up a smooth point of a component: a new leaf of the same
    /// multiplicity hangs off the vertex.  With `through_mark` the
    /// point is a marked one and the mark moves to the leaf.
    SmoothPoint { vertex: String, through_mark: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    InvalidGraph(GraphIssue),
    UnknownEdge(String),
    UnknownVertex(String),
    NoMarkToMove(String),
}

impl fmt::Display for MoveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveError::InvalidGraph(issue) => write!(f, "invalid graph: {issue}"),
            MoveError::UnknownEdge(id) => write!(f, "no edge named {id}"),
            MoveError::UnknownVertex(id) => write!(f, "no vertex named {id}"),
            MoveError::NoMarkToMove(id) => write!(f, "vertex {id} has no mark to move"),
        }
    }
}

/// Zeta factorization `prod (1 - t^m)^e`, factors sorted by `m`, zero
/// exponents omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Zeta(pub Vec<(u32, i64)>);

impl fmt::Display for Zeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (m, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "(1 - t^{m})^{e}")?;
        }
        Ok(())
    }
}

impl DualGraph {
    pub fn validate(&self) -> Vec<GraphIssue> {
        let mut issues = Vec::new();
        if self.vertices.is_empty() {
            issues.push(GraphIssue::EmptyGraph);
            return issues;
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.id.clone()) {
                issues.push(GraphIssue::DuplicateVertexId(v.id.clone()));
            }
            if v.multiplicity == 0 {
                issues.push(GraphIssue::ZeroMultiplicity(v.id.clone()));
            }
        }
        let mut eseen = BTreeSet::new();
        for e in &self.edges {
            if !eseen.insert(e.id.clone()) {
                issues.push(GraphIssue::DuplicateEdgeId(e.id.clone()));
            }
            for end in [&e.ends.0, &e.ends.1] {
                if !seen.contains(end) {
                    issues.push(GraphIssue::UnknownEndpoint {
                        edge: e.id.clone(),
                        vertex: end.clone(),
                    });
                }
            }
        }
        if issues.is_empty() && !self.is_connected() {
            issues.push(GraphIssue::Disconnected);
        }
        issues
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn is_connected(&self) -> bool {
        let mut reached = BTreeSet::new();
        let mut stack = vec![self.vertices[0].id.clone()];
        while let Some(v) = stack.pop() {
            if !reached.insert(v.clone()) {
                continue;
            }
            for e in &self.edges {
                if e.ends.0 == v {
                    stack.push(e.ends.1.clone());
                }
                if e.ends.1 == v {
                    stack.push(e.ends.0.clone());
                }
            }
        }
        reached.len() == self.vertices.len()
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    /// Number of half-edges at the vertex; loops contribute two.
    pub fn degree(&self, id: &str) -> usize {
        self.edges
            .iter()
            .map(|e| (e.ends.0 == id) as usize + (e.ends.1 == id) as usize)
            .sum()
    }

    /// Reduced normal crossings: every component has multiplicity one.
    pub fn is_semistable(&self) -> bool {
        self.is_valid() && self.vertices.iter().all(|v| v.multiplicity == 1)
    }

    /// First betti number of the graph itself (assumes connected).
    pub fn betti_one(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Euler characteristic of the nearby fiber, computed from the
    /// open strata: each component contributes its multiplicity times
    /// the characteristic of the complement of nodes and marks.
    pub fn euler_characteristic_fiber(&self) -> i64 {
        self.vertices.iter().map(|v| v.multiplicity as i64 * self.stratum_euler(v)).sum()
    }

    fn stratum_euler(&self, v: &Vertex) -> i64 {
        2 - 2 * v.genus as i64 - self.degree(&v.id) as i64 - v.marks as i64
    }

    /// Monodromy zeta factorization: the factor `1 - t^m` appears with
    /// exponent minus the total open-stratum characteristic at
    /// multiplicity `m`.
    pub fn zeta_function(&self) -> Zeta {
        let mut exps: BTreeMap<u32, i64> = BTreeMap::new();
        for v in &self.vertices {
            *exps.entry(v.multiplicity).or_insert(0) -= self.stratum_euler(v);
        }
        Zeta(exps.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    /// First unused exceptional label `E{k}`.
    fn fresh_label(&self) -> String {
        for k in 1.. {
            let v = format!("E{k}");
            let taken = self.vertices.iter().any(|x| x.id == v)
                || self
                    .edges
                    .iter()
                    .any(|e| e.id == format!("{v}.a") || e.id == format!("{v}.b") || e.id == format!("{v}.e"));
            if !taken {
                return v;
            }
        }
        unreachable!()
    }

    pub fn apply_blowup(&self, mv: &BlowupMove) -> Result<DualGraph, MoveError> {
        if let Some(issue) = self.validate().into_iter().next() {
            return Err(MoveError::InvalidGraph(issue));
        }
        let label = self.fresh_label();
        let mut out = self.clone();
        match mv {
            BlowupMove::Node { edge } => {
                let pos = out
                    .edges
                    .iter()
                    .position(|e| &e.id == edge)
                    .ok_or_else(|| MoveError::UnknownEdge(edge.clone()))?;
                let old = out.edges.remove(pos);
                let mu = self.vertex(&old.ends.0).unwrap().multiplicity;
                let mw = self.vertex(&old.ends.1).unwrap().multiplicity;
                out.vertices.push(Vertex {
                    id: label.clone(),
                    genus: 0,
                    multiplicity: mu + mw,
                    marks: 0,
                });
                out.edges.push(Edge {
                    id: format!("{label}.a"),
                    ends: (old.ends.0.clone(), label.clone()),
                });
                out.edges.push(Edge { id: format!("{label}.b"), ends: (label, old.ends.1) });
            }
            BlowupMove::SmoothPoint { vertex, through_mark } => {
                let v = out
                    .vertices
                    .iter_mut()
                    .find(|v| &v.id == vertex)
                    .ok_or_else(|| MoveError::UnknownVertex(vertex.clone()))?;
                let mult = v.multiplicity;
                let mut leaf_marks = 0;
                if *through_mark {
                    if v.marks == 0 {
                        return Err(MoveError::NoMarkToMove(vertex.clone()));
                    }
                    v.marks -= 1;
                    leaf_marks = 1;
                }
                out.vertices.push(Vertex {
                    id: label.clone(),
                    genus: 0,
                    multiplicity: mult,
                    marks: leaf_marks,
                });
                out.edges
                    .push(Edge { id: format!("{label}.e"), ends: (vertex.clone(), label) });
            }
        }
        debug_assert!(out.is_valid());
        Ok(out)
    }
}

/// Cycle of `n` rational curves, the reduced special fiber of the
/// standard one-parameter family with multiplicative reduction.  For
/// `n = 1` the cycle is a single nodal curve: one vertex with a loop.
pub fn tate_ngon(n: u32) -> DualGraph {
    assert!(n >= 1, "cycle needs at least one component");
    let vertices = (0..n)
        .map(|i| Vertex { id: format!("v{i}"), genus: 0, multiplicity: 1, marks: 0 })
        .collect();
    let edges = (0..n)
        .map(|i| Edge {
            id: format!("e{i}"),
            ends: (format!("v{i}"), format!("v{}", (i + 1) % n)),
        })
        .collect();
    DualGraph { name: format!("tate-{n}"), vertices, edges }
}

/// Smooth special fiber of genus `g`: one component, no nodes.
pub fn good_reduction(g: u32) -> DualGraph {
    DualGraph {
        name: format!("good-reduction-{g}"),
        vertices: vec![Vertex { id: "v0".to_string(), genus: g, multiplicity: 1, marks: 0 }],
        edges: vec![],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_are_valid_and_semistable() {
        for n in 1..=6 {
            let g = tate_ngon(n);
            assert!(g.is_semistable(), "tate-{n}");
            assert_eq!(g.betti_one(), 1);
            assert_eq!(g.euler_characteristic_fiber(), 0);
            assert_eq!(g.zeta_function(), Zeta(vec![]));
        }
        for genus in 0..=3 {
            let g = good_reduction(genus);
            assert!(g.is_semistable());
            assert_eq!(g.euler_characteristic_fiber(), 2 - 2 * genus as i64);
            let expect = if genus == 1 { vec![] } else { vec![(1, 2 * genus as i64 - 2)] };
            assert_eq!(g.zeta_function(), Zeta(expect));
        }
    }

    #[test]
    fn loops_count_twice() {
        let g = tate_ngon(1);
        assert_eq!(g.degree("v0"), 2);
        assert_eq!(g.euler_characteristic_fiber(), 0);
    }

    #[test]
    fn validation_finds_each_issue() {
        let mut g = tate_ngon(2);
        g.vertices.push(g.vertices[0].clone());
        assert!(matches!(g.validate()[0], GraphIssue::DuplicateVertexId(_)));

        let mut g = tate_ngon(2);
        g.vertices[1].multiplicity = 0;
        assert!(matches!(g.validate()[0], GraphIssue::ZeroMultiplicity(_)));
        assert!(!g.is_semistable());

        let mut g = tate_ngon(2);
        g.edges[0].ends.1 = "nope".to_string();
        assert!(matches!(g.validate()[0], GraphIssue::UnknownEndpoint { .. }));

        let mut g = good_reduction(0);
        g.vertices.push(Vertex {
            id: "v1".to_string(),
            genus: 0,
            multiplicity: 1,
            marks: 0,
        });
        assert_eq!(g.validate(), vec![GraphIssue::Disconnected]);

        let empty = DualGraph { name: "x".into(), vertices: vec![], edges: vec![] };
        assert_eq!(empty.validate(), vec![GraphIssue::EmptyGraph]);
    }

    #[test]
    fn node_blowup_subdivides_and_sums_multiplicity() {
        let g = tate_ngon(2);
        let b = g.apply_blowup(&BlowupMove::Node { edge: "e0".into() }).unwrap();
        assert_eq!(b.vertices.len(), 3);
        assert_eq!(b.edges.len(), 3);
        let e1 = b.vertex("E1").unwrap();
        assert_eq!(e1.multiplicity, 2);
        assert_eq!(b.degree("E1"), 2);
        // Non-reduced exceptional component: no longer semistable.
        assert!(!b.is_semistable());
        // Chi and zeta are blowup invariants.
        assert_eq!(b.euler_characteristic_fiber(), g.euler_characteristic_fiber());
        assert_eq!(b.zeta_function(), g.zeta_function());
    }

    #[test]
    fn loop_blowup_doubles_multiplicity() {
        let g = tate_ngon(1);
        let b = g.apply_blowup(&BlowupMove::Node { edge: "e0".into() }).unwrap();
        assert_eq!(b.vertex("E1").unwrap().multiplicity, 2);
        assert_eq!(b.degree("v0"), 2);
        assert_eq!(b.degree("E1"), 2);
        assert_eq!(b.euler_characteristic_fiber(), 0);
        assert_eq!(b.zeta_function(), Zeta(vec![]));
    }

    #[test]
    fn smooth_point_blowup_keeps_semistability() {
        let g = good_reduction(2);
        let b = g
            .apply_blowup(&BlowupMove::SmoothPoint { vertex: "v0".into(), through_mark: false })
            .unwrap();
        assert!(b.is_semistable());
        assert_eq!(b.vertex("E1").unwrap().multiplicity, 1);
        assert_eq!(b.euler_characteristic_fiber(), g.euler_characteristic_fiber());
        assert_eq!(b.zeta_function(), g.zeta_function());
    }

    #[test]
    fn mark_transfer() {
        let mut g = good_reduction(1);
        g.vertices[0].marks = 1;
        let b = g
            .apply_blowup(&BlowupMove::SmoothPoint { vertex: "v0".into(), through_mark: true })
            .unwrap();
        assert_eq!(b.vertex("v0").unwrap().marks, 0);
        assert_eq!(b.vertex("E1").unwrap().marks, 1);
        assert_eq!(b.euler_characteristic_fiber(), g.euler_characteristic_fiber());

        let bare = good_reduction(1);
        let err = bare
            .apply_blowup(&BlowupMove::SmoothPoint { vertex: "v0".into(), through_mark: true });
        assert!(matches!(err, Err(MoveError::NoMarkToMove(_))));
    }

    #[test]
    fn fresh_labels_do_not_collide() {
        let g = tate_ngon(2);
        let b1 = g.apply_blowup(&BlowupMove::Node { edge: "e0".into() }).unwrap();
        let b2 = b1.apply_blowup(&BlowupMove::Node { edge: "E1.a".into() }).unwrap();
        assert!(b2.vertex("E2").is_some());
        assert_eq!(b2.vertex("E2").unwrap().multiplicity, 3);
    }

    #[test]
    fn moves_on_missing_targets_fail() {
        let g = tate_ngon(2);
        assert!(matches!(
            g.apply_blowup(&BlowupMove::Node { edge: "zz".into() }),
            Err(MoveError::UnknownEdge(_))
        ));
        assert!(matches!(
            g.apply_blowup(&BlowupMove::SmoothPoint { vertex: "zz".into(), through_mark: false }),
            Err(MoveError::UnknownVertex(_))
        ));
    }

    #[test]
    fn zeta_with_mixed_multiplicities() {
        // Chain u - E - w after blowing the node of a 2-gon twice is
        // not needed; construct directly: multiplicities 1, 2, 1.
        let g = DualGraph {
            name: "chain".into(),
            vertices: vec![
                Vertex { id: "u".into(), genus: 0, multiplicity: 1, marks: 0 },
                Vertex { id: "m".into(), genus: 0, multiplicity: 2, marks: 0 },
                Vertex { id: "w".into(), genus: 1, multiplicity: 1, marks: 0 },
            ],
            edges: vec![
                Edge { id: "a".into(), ends: ("u".into(), "m".into()) },
                Edge { id: "b".into(), ends: ("m".into(), "w".into()) },
            ],
        };
        assert!(g.is_valid());
        assert!(!g.is_semistable());
        // Strata: u has chi 1, m has chi 0, w has chi -1.
        assert_eq!(g.euler_characteristic_fiber(), 1 + 0 - 1);
        assert_eq!(g.zeta_function(), Zeta(vec![(1, 0i64)].into_iter().filter(|&(_, e)| e != 0).collect()));
        let display = format!("{}", g.zeta_function());
        assert_eq!(display, "1");
    }
}
