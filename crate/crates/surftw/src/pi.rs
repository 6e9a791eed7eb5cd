//! The face structure carried along hypergraph contractions.
//!
//! The radial drawing of an embedded hypergraph has one face per hyperedge.
//! What the partition-tree machinery needs from the drawing is only which
//! radial vertices and edges lie on which of those faces. This module keeps
//! exactly that data and updates it under contraction, where merging an
//! edge subset merges the corresponding faces into one and drops everything
//! strictly inside the merged region.

use std::collections::{BTreeMap, BTreeSet};

use crate::embed::{EmbeddedHypergraph, RadialVertexKind};
use crate::error::{Error, Result, ValidationReport};
use crate::hypergraph::Hypergraph;

/// A radial vertex with the labels of its incident faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiVertex {
    pub kind: RadialVertexKind,
    pub name: String,
    pub faces: BTreeSet<String>,
}

/// A radial edge with the labels of its two flanking faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiEdge {
    pub ends: (u32, u32),
    pub sides: (String, String),
}

/// Face incidences of a radial drawing, detached from the surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiCarried {
    pub verts: Vec<PiVertex>,
    pub edges: Vec<PiEdge>,
}

/// The part of a radial drawing lying on the faces of an edge subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub faces: BTreeSet<String>,
    /// Indices of edges with both sides in the subset.
    pub edges: BTreeSet<usize>,
    /// Indices of vertices with every incident face in the subset.
    pub verts: BTreeSet<usize>,
}

/// A hypergraph with its carried face structure, the working object of the
/// partition-tree synthesis.
#[derive(Debug, Clone)]
pub struct PiStructure {
    pub h: Hypergraph,
    pub pi: PiCarried,
    /// Current label -> original labels merged into it.
    pub origin: BTreeMap<String, BTreeSet<String>>,
}

impl PiStructure {
    /// Extracts the structure from a two-cell embedded hypergraph.
    pub fn from_embedding(lam: &EmbeddedHypergraph) -> Result<PiStructure> {
        let h = lam.underlying_hypergraph()?;
        let radial = lam.radial()?;
        let verts = (0..radial.map.n_vertices() as u32)
            .map(|v| PiVertex {
                kind: radial.kind[v as usize],
                name: radial.names[v as usize].clone(),
                faces: radial.vertex_face_labels(v),
            })
            .collect();
        let edges = (0..radial.map.n_edges() as u32)
            .map(|e| {
                let (da, db) = radial.map.edge_ends(e);
                PiEdge {
                    ends: (radial.map.vertex(da), radial.map.vertex(db)),
                    sides: radial.edge_side_labels(e),
                }
            })
            .collect();
        let origin = h
            .edge_labels()
            .map(|l| (l.to_string(), [l.to_string()].into_iter().collect()))
            .collect();
        let out = PiStructure {
            h,
            pi: PiCarried { verts, edges },
            origin,
        };
        out.validate()
            .into_result(|m| Error::Internal(format!("embedding yields bad face structure: {m}")))?;
        Ok(out)
    }

    /// Consistency between the hypergraph and the carried faces: labels
    /// agree, and an element vertex lies exactly on the faces of its edges.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let labels = self.h.edge_label_set();
        let mut seen_elements = BTreeSet::new();
        for (i, v) in self.pi.verts.iter().enumerate() {
            if v.faces.is_empty() {
                report.push(format!("radial vertex {i} lies on no face"));
            }
            for f in &v.faces {
                if !labels.contains(f) {
                    report.push(format!("radial vertex {i} lies on unknown face {f:?}"));
                }
            }
            if v.kind == RadialVertexKind::Element {
                seen_elements.insert(v.name.clone());
                match self.h.vertex_index(&v.name) {
                    None => report.push(format!("element {:?} is not a hypergraph vertex", v.name)),
                    Some(idx) => {
                        let incident: BTreeSet<String> = self
                            .h
                            .edges()
                            .iter()
                            .filter(|e| e.ends.contains(&idx))
                            .map(|e| e.label.clone())
                            .collect();
                        if incident != v.faces {
                            report.push(format!(
                                "element {:?} lies on faces {:?} but its edges are {:?}",
                                v.name, v.faces, incident
                            ));
                        }
                    }
                }
            }
        }
        for name in self.h.vertex_names() {
            if !seen_elements.contains(name) {
                report.push(format!("hypergraph vertex {name:?} has no radial vertex"));
            }
        }
        for (i, e) in self.pi.edges.iter().enumerate() {
            for side in [&e.sides.0, &e.sides.1] {
                if !labels.contains(side) {
                    report.push(format!("radial edge {i} borders unknown face {side:?}"));
                }
            }
            let (a, b) = e.ends;
            if a as usize >= self.pi.verts.len() || b as usize >= self.pi.verts.len() {
                report.push(format!("radial edge {i} has out of range ends"));
                continue;
            }
            for (end, side) in [(a, &e.sides.0), (a, &e.sides.1), (b, &e.sides.0), (b, &e.sides.1)]
            {
                if !self.pi.verts[end as usize].faces.contains(side) {
                    report.push(format!(
                        "radial edge {i} borders {side:?} but end {end} does not"
                    ));
                }
            }
        }
        for label in &labels {
            if !self.origin.contains_key(label) {
                report.push(format!("label {label:?} missing from the origin table"));
            }
        }
        report
    }

    pub fn labels(&self) -> BTreeSet<String> {
        self.h.edge_label_set()
    }

    /// The face adjacency graph: two edges are adjacent when some radial
    /// edge has one on each side.
    pub fn adjacency(&self) -> BTreeMap<String, BTreeSet<String>> {
        let mut adj: BTreeMap<String, BTreeSet<String>> =
            self.labels().into_iter().map(|l| (l, BTreeSet::new())).collect();
        for e in &self.pi.edges {
            let (x, y) = (&e.sides.0, &e.sides.1);
            if x != y {
                adj.get_mut(x).unwrap().insert(y.clone());
                adj.get_mut(y).unwrap().insert(x.clone());
            }
        }
        adj
    }

    fn check_subset(&self, a: &BTreeSet<String>) -> Result<()> {
        if a.is_empty() {
            return Err(Error::BadSubset("edge subset is empty".into()));
        }
        let labels = self.labels();
        for l in a {
            if !labels.contains(l) {
                return Err(Error::BadSubset(format!("unknown edge label {l:?}")));
            }
        }
        Ok(())
    }

    /// Connected components of the face adjacency graph restricted to a
    /// label set, ordered by smallest label.
    pub fn pi_components(&self, within: &BTreeSet<String>) -> Vec<BTreeSet<String>> {
        let adj = self.adjacency();
        let mut left: BTreeSet<String> = within.clone();
        let mut out = Vec::new();
        while let Some(start) = left.iter().next().cloned() {
            let mut comp = BTreeSet::new();
            let mut stack = vec![start.clone()];
            left.remove(&start);
            comp.insert(start);
            while let Some(x) = stack.pop() {
                for y in &adj[&x] {
                    if left.remove(y) {
                        comp.insert(y.clone());
                        stack.push(y.clone());
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Whether the faces of `a` form a connected region.
    pub fn is_pi_connected(&self, a: &BTreeSet<String>) -> Result<bool> {
        self.check_subset(a)?;
        Ok(self.components_within(a).len() == 1)
    }

    /// The faces of `a` together with the radial edges and vertices lying
    /// strictly inside their union.
    pub fn region(&self, a: &BTreeSet<String>) -> Result<Region> {
        self.check_subset(a)?;
        let edges = self
            .pi
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| a.contains(&e.sides.0) && a.contains(&e.sides.1))
            .map(|(i, _)| i)
            .collect();
        let verts = self
            .pi
            .verts
            .iter()
            .enumerate()
            .filter(|(_, v)| v.faces.is_subset(a))
            .map(|(i, _)| i)
            .collect();
        Ok(Region {
            faces: a.clone(),
            edges,
            verts,
        })
    }

    /// Edges whose removal disconnects the face adjacency graph.
    pub fn troublesome_edges(&self) -> Vec<String> {
        let labels = self.labels();
        let mut out = Vec::new();
        for e in &labels {
            let rest: BTreeSet<String> = labels.iter().filter(|l| *l != e).cloned().collect();
            if self.components_within(&rest).len() >= 2 {
                out.push(e.clone());
            }
        }
        out
    }

    /// The partition of the edge set into `{e}` and the components left
    /// after removing `e` from the face adjacency graph.
    pub fn e_partition(&self, e: &str) -> Result<Vec<BTreeSet<String>>> {
        let labels = self.labels();
        if !labels.contains(e) {
            return Err(Error::BadEdge(format!("unknown edge label {e:?}")));
        }
        let rest: BTreeSet<String> = labels.iter().filter(|l| l.as_str() != e).cloned().collect();
        let mut out = vec![[e.to_string()].into_iter().collect::<BTreeSet<String>>()];
        out.extend(self.components_within(&rest));
        Ok(out)
    }

    /// A fresh label naming the contraction of `a`, derived from the
    /// original labels it merges.
    pub fn contraction_label(&self, a: &BTreeSet<String>) -> String {
        let mut originals = BTreeSet::new();
        for l in a {
            if let Some(o) = self.origin.get(l) {
                originals.extend(o.iter().cloned());
            } else {
                originals.insert(l.clone());
            }
        }
        let joined: Vec<String> = originals.into_iter().collect();
        let mut label = format!("c{{{}}}", joined.join("+"));
        let labels = self.labels();
        while labels.contains(&label) {
            label.push('+');
        }
        label
    }

    /// Contracts a connected edge subset: the hypergraph contracts, the
    /// faces of `a` merge into one face named `new_label`, and the radial
    /// part strictly inside the merged region disappears.
    pub fn contract(&self, a: &BTreeSet<String>, new_label: &str) -> Result<PiStructure> {
        if !self.is_pi_connected(a)? {
            return Err(Error::NotPiConnected(format!(
                "cannot merge the faces of a disconnected subset {a:?}"
            )));
        }
        let h = self.h.contract(a, new_label)?;
        let region = self.region(a)?;
        let mut vert_map = vec![None; self.pi.verts.len()];
        let mut verts = Vec::new();
        for (i, v) in self.pi.verts.iter().enumerate() {
            if region.verts.contains(&i) {
                continue;
            }
            let mut faces: BTreeSet<String> =
                v.faces.iter().filter(|f| !a.contains(*f)).cloned().collect();
            if faces.len() != v.faces.len() {
                faces.insert(new_label.to_string());
            }
            vert_map[i] = Some(verts.len() as u32);
            verts.push(PiVertex {
                kind: v.kind,
                name: v.name.clone(),
                faces,
            });
        }
        let mut edges = Vec::new();
        for (i, e) in self.pi.edges.iter().enumerate() {
            if region.edges.contains(&i) {
                continue;
            }
            let map_side = |s: &String| {
                if a.contains(s) {
                    new_label.to_string()
                } else {
                    s.clone()
                }
            };
            let (va, vb) = e.ends;
            let (Some(na), Some(nb)) = (vert_map[va as usize], vert_map[vb as usize]) else {
                return Err(Error::Internal(format!(
                    "radial edge {i} survives contraction but an end does not"
                )));
            };
            edges.push(PiEdge {
                ends: (na, nb),
                sides: (map_side(&e.sides.0), map_side(&e.sides.1)),
            });
        }
        let mut origin = BTreeMap::new();
        let mut merged = BTreeSet::new();
        for (l, o) in &self.origin {
            if a.contains(l) {
                merged.extend(o.iter().cloned());
            } else {
                origin.insert(l.clone(), o.clone());
            }
        }
        origin.insert(new_label.to_string(), merged);
        let out = PiStructure {
            h,
            pi: PiCarried { verts, edges },
            origin,
        };
        out.validate()
            .into_result(|m| Error::Internal(format!("contraction broke the face structure: {m}")))?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::tests::{single_triple_edge, theta_hypergraph};
    use crate::embed::EmbeddedHypergraph;
    use crate::map::tests::torus_bouquet;
    use crate::testutil::planar_map;

    fn set(labels: &[&str]) -> BTreeSet<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    /// Path on four vertices embedded in the sphere.
    fn path_structure() -> PiStructure {
        let map = planar_map(
            &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)],
            &[(0, 1), (1, 2), (2, 3)],
        );
        let lam = EmbeddedHypergraph::from_graph_embedding(
            &map,
            &["u".into(), "v".into(), "w".into(), "x".into()],
            &["p".into(), "q".into(), "r".into()],
        )
        .unwrap();
        PiStructure::from_embedding(&lam).unwrap()
    }

    #[test]
    fn structures_from_embeddings_validate() {
        for s in [
            PiStructure::from_embedding(&single_triple_edge()).unwrap(),
            PiStructure::from_embedding(&theta_hypergraph()).unwrap(),
            path_structure(),
        ] {
            assert!(s.validate().is_valid());
            for l in s.labels() {
                assert!(s.is_pi_connected(&[l].into_iter().collect()).unwrap());
            }
        }
    }

    #[test]
    fn path_has_one_troublesome_edge() {
        let s = path_structure();
        let adj = s.adjacency();
        assert_eq!(adj["p"], set(&["q"]));
        assert_eq!(adj["q"], set(&["p", "r"]));
        assert_eq!(adj["r"], set(&["q"]));
        assert_eq!(s.troublesome_edges(), vec!["q".to_string()]);
        assert_eq!(
            s.e_partition("q").unwrap(),
            vec![set(&["q"]), set(&["p"]), set(&["r"])]
        );
        assert_eq!(
            s.e_partition("p").unwrap(),
            vec![set(&["p"]), set(&["q", "r"])]
        );
        assert!(!s.is_pi_connected(&set(&["p", "r"])).unwrap());
    }

    #[test]
    fn theta_faces_are_pairwise_adjacent() {
        let s = PiStructure::from_embedding(&theta_hypergraph()).unwrap();
        let adj = s.adjacency();
        assert_eq!(adj["p"], set(&["q", "r"]));
        assert!(s.troublesome_edges().is_empty());
        assert!(s.is_pi_connected(&set(&["p", "r"])).unwrap());
    }

    #[test]
    fn bouquet_faces_alternate() {
        let lam = EmbeddedHypergraph::from_graph_embedding(
            &torus_bouquet(),
            &["v".into()],
            &["x".into(), "y".into()],
        )
        .unwrap();
        let s = PiStructure::from_embedding(&lam).unwrap();
        assert_eq!(s.adjacency()["x"], set(&["y"]));
        assert!(s.troublesome_edges().is_empty());
        // The single element lies on both faces.
        let v = s
            .pi
            .verts
            .iter()
            .find(|v| v.kind == RadialVertexKind::Element)
            .unwrap();
        assert_eq!(v.faces, set(&["x", "y"]));
    }

    #[test]
    fn regions_of_a_bipartition_tile_the_radial() {
        let s = PiStructure::from_embedding(&theta_hypergraph()).unwrap();
        for a in [set(&["p"]), set(&["p", "q"]), set(&["q"])] {
            let b: BTreeSet<String> = s.labels().difference(&a).cloned().collect();
            let ra = s.region(&a).unwrap();
            let rb = s.region(&b).unwrap();
            assert!(ra.edges.is_disjoint(&rb.edges));
            assert!(ra.verts.is_disjoint(&rb.verts));
            // Edges outside both regions lie on the border: one side each.
            for (i, e) in s.pi.edges.iter().enumerate() {
                if !ra.edges.contains(&i) && !rb.edges.contains(&i) {
                    let in_a = a.contains(&e.sides.0) || a.contains(&e.sides.1);
                    let in_b = b.contains(&e.sides.0) || b.contains(&e.sides.1);
                    assert!(in_a && in_b);
                }
            }
        }
    }

    #[test]
    fn contraction_merges_faces_and_keeps_consistency() {
        let s = path_structure();
        let c = s.contract(&set(&["p"]), "cp").unwrap();
        assert_eq!(c.h.n_edges(), 3);
        assert_eq!(c.h.ends_named("cp").unwrap(), set(&["v"]));
        // The element u lived only inside the merged region.
        assert!(c.h.vertex_index("u").is_none());
        assert_eq!(c.troublesome_edges(), vec!["q".to_string()]);
        assert_eq!(c.origin["cp"], set(&["p"]));

        let c2 = c.contract(&set(&["cp", "q"]), "cq").unwrap();
        assert_eq!(c2.origin["cq"], set(&["p", "q"]));
        assert_eq!(c2.h.ends_named("cq").unwrap(), set(&["w"]));
        assert!(c2.validate().is_valid());

        // Contracting a disconnected pair is refused.
        assert!(matches!(
            s.contract(&set(&["p", "r"]), "bad"),
            Err(Error::NotPiConnected(_))
        ));
    }

    #[test]
    fn contraction_labels_merge_origins() {
        let s = PiStructure::from_embedding(&theta_hypergraph()).unwrap();
        let label = s.contraction_label(&set(&["p", "q"]));
        assert_eq!(label, "c{p+q}");
        let c = s.contract(&set(&["p", "q"]), &label).unwrap();
        assert_eq!(c.origin[&label], set(&["p", "q"]));
        let again = c.contraction_label(&[label.clone(), "r".to_string()].into_iter().collect());
        assert_eq!(again, "c{p+q+r}");
    }

    #[test]
    fn single_edge_has_trivial_structure() {
        let s = PiStructure::from_embedding(&single_triple_edge()).unwrap();
        assert!(s.troublesome_edges().is_empty());
        assert_eq!(s.e_partition("e").unwrap(), vec![set(&["e"])]);
        let r = s.region(&set(&["e"])).unwrap();
        assert_eq!(r.verts.len(), s.pi.verts.len());
        assert_eq!(r.edges.len(), s.pi.edges.len());
    }
}
