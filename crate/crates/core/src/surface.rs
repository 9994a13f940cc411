//! Ciliated ribbon graphs, boundary tracing of the fattened surface, and
//! the induced no-relation groupoid presentation.
//!
//! A ciliated graph carries a linear (not just cyclic) order of the
//! half-edges at each vertex; the cilium sits between the last and the
//! first half-edge. Boundary components of the fattening are the orbits of
//! h -> sigma(iota(h)) on half-edges, where sigma is the vertex rotation
//! and iota the edge pairing. The open surface keeps one boundary arc per
//! vertex (the cycle through its cilium corner); every unmarked cycle is
//! capped by a disc with an inner puncture.

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::presentation::{GeneratorArc, HeightOrder, Presentation};

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("half-edge {0} appears {1} times in vertex lists, expected exactly once")]
    VertexIncidence(String, usize),
    #[error("half-edge {0} appears {1} times in edge pairs, expected exactly once")]
    EdgeIncidence(String, usize),
    #[error("vertex {0} has no half-edges")]
    EmptyVertex(String),
    #[error("edge {0} pairs a half-edge with itself")]
    DegenerateEdge(String),
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Deserialize)]
pub struct VertexJson {
    pub id: String,
    pub half_edges: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct EdgeJson {
    pub id: String,
    pub half_edges: (String, String),
}

#[derive(Debug, Clone, Deserialize)]
pub struct CiliatedGraph {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

/// Topological invariants of the fattening and its two punctured surfaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub genus: usize,
    pub boundary_components_of_fattening: usize,
    /// Punctures of the closed surface (one per boundary component).
    pub punctures_closed: usize,
    /// Boundary arcs of the open surface (one per vertex).
    pub boundary_arcs_open: usize,
    /// Inner punctures of the open surface (unmarked boundary cycles).
    pub inner_punctures_open: usize,
}

impl CiliatedGraph {
    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let g: CiliatedGraph =
            serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let mut in_vertices: BTreeMap<&str, usize> = BTreeMap::new();
        let mut ids: BTreeMap<&str, usize> = BTreeMap::new();
        for v in &self.vertices {
            *ids.entry(v.id.as_str()).or_insert(0) += 1;
            if v.half_edges.is_empty() {
                return Err(GraphError::EmptyVertex(v.id.clone()));
            }
            for h in &v.half_edges {
                *in_vertices.entry(h).or_insert(0) += 1;
            }
        }
        let mut in_edges: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &self.edges {
            *ids.entry(e.id.as_str()).or_insert(0) += 1;
            if e.half_edges.0 == e.half_edges.1 {
                return Err(GraphError::DegenerateEdge(e.id.clone()));
            }
            *in_edges.entry(&e.half_edges.0).or_insert(0) += 1;
            *in_edges.entry(&e.half_edges.1).or_insert(0) += 1;
        }
        for (id, n) in ids {
            if n > 1 {
                return Err(GraphError::DuplicateId(id.to_string()));
            }
        }
        for (h, n) in &in_vertices {
            if *n != 1 {
                return Err(GraphError::VertexIncidence(h.to_string(), *n));
            }
            if in_edges.get(h).copied().unwrap_or(0) != 1 {
                return Err(GraphError::EdgeIncidence(
                    h.to_string(),
                    in_edges.get(h).copied().unwrap_or(0),
                ));
            }
        }
        for (h, n) in &in_edges {
            if *n != 1 {
                return Err(GraphError::EdgeIncidence(h.to_string(), *n));
            }
            if !in_vertices.contains_key(h) {
                return Err(GraphError::VertexIncidence(h.to_string(), 0));
            }
        }
        Ok(())
    }

    fn half_edge_tables(&self) -> (Vec<String>, BTreeMap<String, usize>) {
        let mut names = Vec::new();
        let mut index = BTreeMap::new();
        for v in &self.vertices {
            for h in &v.half_edges {
                index.entry(h.clone()).or_insert_with(|| {
                    names.push(h.clone());
                    names.len() - 1
                });
            }
        }
        (names, index)
    }

    /// Boundary cycles of the fattened surface as sequences of half-edges,
    /// each cycle starting at its smallest half-edge index.
    pub fn trace_boundary(&self) -> Result<Vec<Vec<String>>, GraphError> {
        self.validate()?;
        let (names, index) = self.half_edge_tables();
        let n = names.len();
        // sigma: next half-edge in the vertex rotation (cyclically)
        let mut sigma = vec![0usize; n];
        for v in &self.vertices {
            let k = v.half_edges.len();
            for (i, h) in v.half_edges.iter().enumerate() {
                sigma[index[h]] = index[&v.half_edges[(i + 1) % k]];
            }
        }
        // iota: the paired half-edge
        let mut iota = vec![0usize; n];
        for e in &self.edges {
            let a = index[&e.half_edges.0];
            let b = index[&e.half_edges.1];
            iota[a] = b;
            iota[b] = a;
        }
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                cycle.push(names[h].clone());
                h = sigma[iota[h]];
            }
            cycles.push(cycle);
        }
        Ok(cycles)
    }

    fn connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut owner: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            for h in &v.half_edges {
                owner.insert(h, i);
            }
        }
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            let a = owner[e.half_edges.0.as_str()];
            let b = owner[e.half_edges.1.as_str()];
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Genus, boundary counts, and puncture data for the closed and open
    /// surfaces of the graph.
    pub fn surface_invariants(&self) -> Result<SurfaceInvariants, GraphError> {
        let cycles = self.trace_boundary()?;
        let v = self.vertices.len() as i64;
        let e = self.edges.len() as i64;
        let b = cycles.len() as i64;
        // v - e = 2 - 2g - b
        let two_g = 2 - b - v + e;
        assert!(two_g >= 0 && two_g % 2 == 0, "Euler consistency");
        // cycle marked by a vertex: the orbit of its first half-edge
        let (_, index) = self.half_edge_tables();
        let mut cycle_of = BTreeMap::new();
        for (ci, cyc) in cycles.iter().enumerate() {
            for h in cyc {
                cycle_of.insert(index[h], ci);
            }
        }
        let mut marked = vec![false; cycles.len()];
        for vtx in &self.vertices {
            marked[cycle_of[&index[&vtx.half_edges[0]]]] = true;
        }
        let inner = marked.iter().filter(|&&m| !m).count();
        Ok(SurfaceInvariants {
            genus: (two_g / 2) as usize,
            boundary_components_of_fattening: cycles.len(),
            punctures_closed: cycles.len(),
            boundary_arcs_open: self.vertices.len(),
            inner_punctures_open: inner,
        })
    }

    /// The induced no-relation presentation: one boundary arc per vertex,
    /// one generator per edge oriented first -> second half-edge, endpoint
    /// positions given by the ciliated order, loops normalized to type d.
    pub fn build_presentation(&self) -> Result<Presentation, GraphError> {
        self.validate()?;
        if !self.connected() {
            return Err(GraphError::Disconnected);
        }
        // (vertex index, position) of each half-edge
        let mut place: BTreeMap<&str, (usize, i64)> = BTreeMap::new();
        for (vi, v) in self.vertices.iter().enumerate() {
            for (pos, h) in v.half_edges.iter().enumerate() {
                place.insert(h, (vi, pos as i64));
            }
        }
        let mut generators = Vec::new();
        for e in &self.edges {
            let mut source = place[e.half_edges.0.as_str()];
            let mut target = place[e.half_edges.1.as_str()];
            let is_loop = source.0 == target.0;
            if is_loop && source.1 > target.1 {
                // replace the generator by its inverse so the loop runs
                // with the boundary order
                std::mem::swap(&mut source, &mut target);
            }
            generators.push(GeneratorArc {
                id: e.id.clone(),
                source,
                target,
                height: is_loop.then_some(HeightOrder::SourceAbove),
            });
        }
        let p = Presentation {
            boundary_arcs: self.vertices.iter().map(|v| v.id.clone()).collect(),
            generators,
            relations: Vec::new(),
            spin: None,
        };
        p.validate().expect("graph-induced presentations are valid");
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::ArcType;

    fn one_loop_graph() -> CiliatedGraph {
        serde_json::from_str(
            r#"{"vertices":[{"id":"v0","half_edges":["h1","h2"]}],
                "edges":[{"id":"a","half_edges":["h1","h2"]}]}"#,
        )
        .unwrap()
    }

    fn interleaved_two_loops() -> CiliatedGraph {
        serde_json::from_str(
            r#"{"vertices":[{"id":"v0","half_edges":["h1","h3","h2","h4"]}],
                "edges":[{"id":"a","half_edges":["h1","h2"]},
                         {"id":"b","half_edges":["h3","h4"]}]}"#,
        )
        .unwrap()
    }

    fn planar_theta() -> CiliatedGraph {
        serde_json::from_str(
            r#"{"vertices":[{"id":"v0","half_edges":["a1","b1","c1"]},
                            {"id":"v1","half_edges":["c2","b2","a2"]}],
                "edges":[{"id":"a","half_edges":["a1","a2"]},
                         {"id":"b","half_edges":["b1","b2"]},
                         {"id":"c","half_edges":["c1","c2"]}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn boundary_cycle_counts() {
        assert_eq!(one_loop_graph().trace_boundary().unwrap().len(), 2);
        assert_eq!(interleaved_two_loops().trace_boundary().unwrap().len(), 1);
        assert_eq!(planar_theta().trace_boundary().unwrap().len(), 3);
    }

    #[test]
    fn cycles_partition_half_edges() {
        for g in [one_loop_graph(), interleaved_two_loops(), planar_theta()] {
            let cycles = g.trace_boundary().unwrap();
            let total: usize = cycles.iter().map(|c| c.len()).sum();
            assert_eq!(total, 2 * g.edges.len());
        }
    }

    #[test]
    fn invariants() {
        let s = one_loop_graph().surface_invariants().unwrap();
        assert_eq!(s.genus, 0);
        assert_eq!(s.boundary_components_of_fattening, 2);
        assert_eq!(s.punctures_closed, 2);
        assert_eq!(s.boundary_arcs_open, 1);
        assert_eq!(s.inner_punctures_open, 1);

        let s = interleaved_two_loops().surface_invariants().unwrap();
        assert_eq!(s.genus, 1);
        assert_eq!(s.boundary_components_of_fattening, 1);
        assert_eq!(s.inner_punctures_open, 0);

        let s = planar_theta().surface_invariants().unwrap();
        assert_eq!(s.genus, 0);
        assert_eq!(s.boundary_components_of_fattening, 3);
        assert_eq!(s.boundary_arcs_open, 2);
        // both cilium corners sit on the outer cycle, so the two inner
        // cycles are capped
        assert_eq!(s.inner_punctures_open, 2);
    }

    #[test]
    fn cilium_rotation_keeps_cycle_count() {
        // rotating the linear order cyclically never changes the count
        let mut g = interleaved_two_loops();
        let n = g.vertices[0].half_edges.len();
        let base = g.trace_boundary().unwrap().len();
        for _ in 0..n {
            g.vertices[0].half_edges.rotate_left(1);
            assert_eq!(g.trace_boundary().unwrap().len(), base);
        }
    }

    #[test]
    fn presentations_from_graphs() {
        let p = one_loop_graph().build_presentation().unwrap();
        assert_eq!(p.generators.len(), 1);
        assert_eq!(p.generators[0].arc_type(), ArcType::D);

        let p = planar_theta().build_presentation().unwrap();
        assert_eq!(p.generators.len(), 3);
        assert!(p.generators.iter().all(|g| g.arc_type() == ArcType::A));

        let p = interleaved_two_loops().build_presentation().unwrap();
        assert_eq!(p.generators.len(), 2);
        assert!(p.generators.iter().all(|g| g.arc_type() == ArcType::D));
        // endpoint pattern s(a) < s(b) < t(a) < t(b)
        let a = &p.generators[0];
        let b = &p.generators[1];
        assert!(a.source.1 < b.source.1 && b.source.1 < a.target.1 && a.target.1 < b.target.1);
    }

    #[test]
    fn genus_2_daisy_from_graph() {
        let g: CiliatedGraph = serde_json::from_str(
            r#"{"vertices":[{"id":"v0","half_edges":["a1","b1","a2","b2","c1","d1","c2","d2"]}],
                "edges":[{"id":"a","half_edges":["a1","a2"]},
                         {"id":"b","half_edges":["b1","b2"]},
                         {"id":"c","half_edges":["c1","c2"]},
                         {"id":"d","half_edges":["d1","d2"]}]}"#,
        )
        .unwrap();
        let s = g.surface_invariants().unwrap();
        assert_eq!(s.genus, 2);
        assert_eq!(s.boundary_components_of_fattening, 1);
        // generator count 2g matches 2g - 2 + s + n_boundary with s = 1
        // puncture on one boundary component
        assert_eq!(g.edges.len(), 2 * s.genus);
        let p = g.build_presentation().unwrap();
        let d = Presentation::daisy(2);
        for (got, want) in p.generators.iter().zip(&d.generators) {
            assert_eq!((got.source, got.target, got.height), (want.source, want.target, want.height));
        }
    }

    #[test]
    fn disconnected_rejected() {
        let g: CiliatedGraph = serde_json::from_str(
            r#"{"vertices":[{"id":"v0","half_edges":["h1","h2"]},
                            {"id":"v1","half_edges":["h3","h4"]}],
                "edges":[{"id":"a","half_edges":["h1","h2"]},
                         {"id":"b","half_edges":["h3","h4"]}]}"#,
        )
        .unwrap();
        assert_eq!(g.build_presentation(), Err(GraphError::Disconnected));
    }

    #[test]
    fn bad_incidence_rejected() {
        let g: Result<CiliatedGraph, _> = serde_json::from_str(
            r#"{"vertices":[{"id":"v0","half_edges":["h1","h2","h1"]}],
                "edges":[{"id":"a","half_edges":["h1","h2"]}]}"#,
        );
        let g = g.unwrap();
        assert!(matches!(g.validate(), Err(GraphError::VertexIncidence(_, _))));
    }
}
