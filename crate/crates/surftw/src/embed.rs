//! Hypergraphs drawn on surfaces.
//!
//! An embedded hypergraph is a bipartite surface map: element vertices carry
//! the hypergraph's vertices, centre vertices carry its edges, and a map
//! edge records an incidence. Faces that are not discs can be marked, which
//! disables the operations that need a two-cell embedding.
//!
//! Two derived drawings matter downstream: the dual, which redraws the
//! hypergraph with one element per face while keeping every centre in
//! place, and the radial, whose faces are in bijection with the centres and
//! which carries the face structure used by partition trees.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::map::{FaceSet, MapData, SurfaceMap};

/// Role of a map vertex in the incidence bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VClass {
    /// Carries a hypergraph vertex.
    Element,
    /// Carries a hyperedge.
    Centre,
}

/// A hypergraph embedded in a surface via its bipartite incidence map.
#[derive(Debug, Clone)]
pub struct EmbeddedHypergraph {
    map: SurfaceMap,
    vclass: Vec<VClass>,
    // Element name or edge label, per map vertex.
    names: Vec<String>,
    marked_non_disc: BTreeSet<u32>,
}

impl EmbeddedHypergraph {
    pub fn new(
        map: SurfaceMap,
        vclass: Vec<VClass>,
        names: Vec<String>,
        marked_non_disc: BTreeSet<u32>,
    ) -> Result<Self> {
        if vclass.len() != map.n_vertices() || names.len() != map.n_vertices() {
            return Err(Error::BadInput(format!(
                "classes/names for {}/{} vertices, map has {}",
                vclass.len(),
                names.len(),
                map.n_vertices()
            )));
        }
        if !map.is_connected() {
            return Err(Error::Disconnected("incidence map must be connected".into()));
        }
        for e in 0..map.n_edges() as u32 {
            let (da, db) = map.edge_ends(e);
            let (a, b) = (map.vertex(da), map.vertex(db));
            if vclass[a as usize] == vclass[b as usize] {
                return Err(Error::BadInput(format!(
                    "incidence edge {e} joins two vertices of the same class"
                )));
            }
        }
        if !vclass.contains(&VClass::Centre) {
            return Err(Error::BadInput("hypergraph needs at least one edge".into()));
        }
        for class in [VClass::Element, VClass::Centre] {
            let mut seen = BTreeSet::new();
            for (v, name) in names.iter().enumerate() {
                if vclass[v] == class && !seen.insert(name.clone()) {
                    return Err(Error::BadInput(format!("duplicate name {name:?}")));
                }
            }
        }
        let n_faces = map.trace_faces()?.count() as u32;
        if let Some(&f) = marked_non_disc.iter().find(|&&f| f >= n_faces) {
            return Err(Error::BadInput(format!(
                "marked face {f} out of range, map has {n_faces} faces"
            )));
        }
        Ok(EmbeddedHypergraph {
            map,
            vclass,
            names,
            marked_non_disc,
        })
    }

    pub fn map(&self) -> &SurfaceMap {
        &self.map
    }

    pub fn class(&self, v: u32) -> VClass {
        self.vclass[v as usize]
    }

    pub fn name(&self, v: u32) -> &str {
        &self.names[v as usize]
    }

    pub fn marked_non_disc(&self) -> &BTreeSet<u32> {
        &self.marked_non_disc
    }

    /// Whether every face is a disc, so dual and radial exist.
    pub fn is_two_cell(&self) -> bool {
        self.marked_non_disc.is_empty()
    }

    pub fn element_vertices(&self) -> Vec<u32> {
        (0..self.map.n_vertices() as u32)
            .filter(|&v| self.vclass[v as usize] == VClass::Element)
            .collect()
    }

    pub fn centre_vertices(&self) -> Vec<u32> {
        (0..self.map.n_vertices() as u32)
            .filter(|&v| self.vclass[v as usize] == VClass::Centre)
            .collect()
    }

    pub fn n_elements(&self) -> usize {
        self.element_vertices().len()
    }

    pub fn n_centres(&self) -> usize {
        self.centre_vertices().len()
    }

    pub fn centre_by_label(&self, label: &str) -> Option<u32> {
        self.centre_vertices()
            .into_iter()
            .find(|&v| self.names[v as usize] == label)
    }

    pub fn centre_labels(&self) -> BTreeSet<String> {
        self.centre_vertices()
            .iter()
            .map(|&v| self.names[v as usize].clone())
            .collect()
    }

    /// Distinct elements incident to a centre vertex.
    fn centre_ends(&self, w: u32) -> BTreeSet<u32> {
        self.map
            .vertex_darts(w)
            .iter()
            .map(|&d| self.map.vertex(self.map.inv(d)))
            .collect()
    }

    /// The abstract hypergraph, forgetting the drawing.
    pub fn underlying_hypergraph(&self) -> Result<Hypergraph> {
        let elements = self.element_vertices();
        let vertices: Vec<String> = elements
            .iter()
            .map(|&v| self.names[v as usize].clone())
            .collect();
        let edges = self
            .centre_vertices()
            .into_iter()
            .map(|w| {
                let ends = self
                    .centre_ends(w)
                    .into_iter()
                    .map(|v| self.names[v as usize].clone())
                    .collect();
                (self.names[w as usize].clone(), ends)
            })
            .collect();
        Hypergraph::new(vertices, edges)
            .map_err(|e| Error::Internal(format!("incidence map yields bad hypergraph: {e}")))
    }

    /// Largest edge size.
    pub fn alpha_max(&self) -> usize {
        self.centre_vertices()
            .into_iter()
            .map(|w| self.centre_ends(w).len())
            .max()
            .unwrap_or(0)
    }

    /// Embeds a graph as a hypergraph by splitting every edge with a new
    /// centre. The drawing, and so the surface, is preserved.
    pub fn from_graph_embedding(
        map: &SurfaceMap,
        vertex_names: &[String],
        edge_labels: &[String],
    ) -> Result<EmbeddedHypergraph> {
        if vertex_names.len() != map.n_vertices() || edge_labels.len() != map.n_edges() {
            return Err(Error::BadInput(format!(
                "got {} names and {} labels for a map with {} vertices and {} edges",
                vertex_names.len(),
                edge_labels.len(),
                map.n_vertices(),
                map.n_edges()
            )));
        }
        let m = map.n_darts();
        let mut rotation = vec![usize::MAX; 2 * m];
        let mut edge_inv = vec![usize::MAX; 2 * m];
        let mut signature = Vec::with_capacity(m);
        for d in 0..m {
            // The old dart keeps its place; its other half moves to the
            // centre splitting the edge.
            rotation[d] = map.rot(d as u32) as usize;
            edge_inv[d] = m + d;
            edge_inv[m + d] = d;
            let partner = map.inv(d as u32) as usize;
            rotation[m + d] = m + partner;
            // The half at the lower dart inherits the edge sign.
            signature.push(if d < partner {
                map.sig(map.edge(d as u32))
            } else {
                1
            });
        }
        let new_map = SurfaceMap::new(MapData {
            darts: 2 * m,
            edge_inv,
            rotation,
            signature,
        })?;
        let old_genus = map.euler_genus()?;
        if new_map.euler_genus()? != old_genus {
            return Err(Error::Internal(
                "edge subdivision changed the euler genus".into(),
            ));
        }
        // Old vertices keep their relative order (same least darts); centres
        // follow in old edge order.
        let mut vclass = vec![VClass::Element; map.n_vertices()];
        vclass.extend(std::iter::repeat(VClass::Centre).take(map.n_edges()));
        let mut names = vertex_names.to_vec();
        names.extend(edge_labels.iter().cloned());
        EmbeddedHypergraph::new(new_map, vclass, names, BTreeSet::new())
    }

    fn require_two_cell(&self, what: &str) -> Result<()> {
        if self.is_two_cell() {
            Ok(())
        } else {
            Err(Error::NotTwoCell(format!(
                "{what} needs a two-cell embedding, {} faces are marked",
                self.marked_non_disc.len()
            )))
        }
    }

    /// The dual drawing on the same surface: elements become one per face
    /// of this drawing, centres stay put, and the edge labels carry over.
    pub fn hyper_dual(&self) -> Result<EmbeddedHypergraph> {
        self.require_two_cell("hyper_dual")?;
        let selected: Vec<bool> = self
            .vclass
            .iter()
            .map(|&c| c == VClass::Centre)
            .collect();
        let corner = self.map.corner_map(&selected)?;
        let mut vclass = vec![VClass::Element; corner.map.n_vertices()];
        let mut names = vec![String::new(); corner.map.n_vertices()];
        for (f, &x) in corner.face_image.iter().enumerate() {
            names[x as usize] = format!("f:{f}");
        }
        for (old, image) in corner.vertex_image.iter().enumerate() {
            if let Some(x) = *image {
                vclass[x as usize] = VClass::Centre;
                names[x as usize] = self.names[old].clone();
            }
        }
        EmbeddedHypergraph::new(corner.map, vclass, names, BTreeSet::new())
    }

    /// Faces incident to centres from at least two parts of a partition of
    /// the edge set.
    pub fn face_border(&self, partition: &[BTreeSet<String>]) -> Result<BTreeSet<u32>> {
        let mut part_of: BTreeMap<String, usize> = BTreeMap::new();
        for (i, part) in partition.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::BadPartition(format!("part {i} is empty")));
            }
            for label in part {
                if part_of.insert(label.clone(), i).is_some() {
                    return Err(Error::BadPartition(format!(
                        "label {label:?} appears in two parts"
                    )));
                }
            }
        }
        let labels = self.centre_labels();
        if part_of.len() != labels.len() || !labels.iter().all(|l| part_of.contains_key(l)) {
            return Err(Error::BadPartition(
                "partition does not cover the edge labels exactly".into(),
            ));
        }
        let faces = self.map.trace_faces()?;
        let mut out = BTreeSet::new();
        for (f, walk) in faces.walks.iter().enumerate() {
            let mut parts = BTreeSet::new();
            for &fl in walk {
                let v = self.map.vertex(self.map.corner_of_flag(fl));
                if self.vclass[v as usize] == VClass::Centre {
                    parts.insert(part_of[&self.names[v as usize]]);
                }
            }
            if parts.len() >= 2 {
                out.insert(f as u32);
            }
        }
        Ok(out)
    }

    /// The radial drawing: element and face vertices, one edge per element
    /// corner, one face per centre.
    pub fn radial(&self) -> Result<RadialEmbedding> {
        self.require_two_cell("radial")?;
        let selected: Vec<bool> = self
            .vclass
            .iter()
            .map(|&c| c == VClass::Element)
            .collect();
        let corner = self.map.corner_map(&selected)?;
        let mut kind = vec![RadialVertexKind::Face; corner.map.n_vertices()];
        let mut names = vec![String::new(); corner.map.n_vertices()];
        for (f, &x) in corner.face_image.iter().enumerate() {
            names[x as usize] = format!("f:{f}");
        }
        for (old, image) in corner.vertex_image.iter().enumerate() {
            if let Some(x) = *image {
                kind[x as usize] = RadialVertexKind::Element;
                names[x as usize] = self.names[old].clone();
            }
        }
        let faces = corner.map.trace_faces()?;
        if faces.count() != self.n_centres() {
            return Err(Error::Internal(format!(
                "radial has {} faces for {} centres",
                faces.count(),
                self.n_centres()
            )));
        }
        // Each radial face encloses exactly one centre: walking a corner at
        // an element, the region past the corner's outer dart holds the
        // centre reached through the next dart in the rotation.
        let mut face_of: Vec<Option<String>> = vec![None; faces.count()];
        for t in 0..self.map.n_darts() as u32 {
            let Some(edge) = corner.corner_edge[t as usize] else {
                continue;
            };
            let outer = 2 * edge;
            let f = faces.face_at(outer, 0) as usize;
            let centre = self.map.vertex(self.map.inv(self.map.rot(t)));
            debug_assert_eq!(self.vclass[centre as usize], VClass::Centre);
            let label = &self.names[centre as usize];
            match &face_of[f] {
                None => face_of[f] = Some(label.clone()),
                Some(prev) if prev == label => {}
                Some(prev) => {
                    return Err(Error::Internal(format!(
                        "radial face {f} matched to centres {prev:?} and {label:?}"
                    )))
                }
            }
        }
        let mut seen = BTreeSet::new();
        let mut resolved = Vec::with_capacity(face_of.len());
        for (f, label) in face_of.into_iter().enumerate() {
            let label = label
                .ok_or_else(|| Error::Internal(format!("radial face {f} matched no centre")))?;
            if !seen.insert(label.clone()) {
                return Err(Error::Internal(format!(
                    "centre {label:?} claimed by two radial faces"
                )));
            }
            resolved.push(label);
        }
        Ok(RadialEmbedding {
            map: corner.map,
            kind,
            names,
            faces,
            face_of: resolved,
        })
    }
}

/// Role of a vertex in the radial drawing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialVertexKind {
    Element,
    Face,
}

/// The radial drawing of an embedded hypergraph, with its faces matched to
/// the hypergraph's edges.
#[derive(Debug, Clone)]
pub struct RadialEmbedding {
    pub map: SurfaceMap,
    pub kind: Vec<RadialVertexKind>,
    // Element names and face names, per radial vertex.
    pub names: Vec<String>,
    pub faces: FaceSet,
    // Radial face index -> label of the enclosed centre.
    pub face_of: Vec<String>,
}

impl RadialEmbedding {
    /// Labels of the radial faces around a vertex.
    pub fn vertex_face_labels(&self, v: u32) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for &d in self.map.vertex_darts(v) {
            for side in 0..2 {
                out.insert(self.face_of[self.faces.face_at(d, side) as usize].clone());
            }
        }
        out
    }

    /// Labels of the two faces flanking a radial edge.
    pub fn edge_side_labels(&self, e: u32) -> (String, String) {
        let (a, b) = self.faces.edge_sides(&self.map, e);
        (
            self.face_of[a as usize].clone(),
            self.face_of[b as usize].clone(),
        )
    }
}
