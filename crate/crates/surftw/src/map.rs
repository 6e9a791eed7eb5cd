//! Combinatorial maps on closed surfaces, encoded as signed rotation systems.
//!
//! A map over darts `0..n` consists of
//! * `edge_inv`, a fixed-point-free involution pairing the two darts of each
//!   edge,
//! * `rotation`, a permutation whose cycles give the darts around each vertex
//!   in local cyclic order, and
//! * a `signature` (+1 or -1) per edge recording whether the local senses at
//!   the two endpoints agree across the edge.
//!
//! Vertices, edges and faces are all orbits derived from this data. Signed
//! rotation systems encode exactly the 2-cell embeddings of connected graphs
//! in closed surfaces, orientable or not; the all-positive systems are the
//! orientable ones.
//!
//! Face tracing works on flags `(dart, side)`. The side bit says on which of
//! the two local sides of the dart the walk currently runs, so that a face is
//! a pair of mutually reversed orbits of the successor map
//! `(d, s) -> (edge_inv(t), s xor [sig(t) < 0])` with `t = rotation(d)` when
//! `s = 0` and `t = rotation^-1(d)` otherwise. One orbit of each pair (the
//! one containing the smallest flag) is stored as the face walk.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationReport};

/// Raw serializable form of a map.
///
/// `signature` has one entry per edge orbit; orbits are ordered by their
/// smallest dart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapData {
    pub darts: usize,
    pub edge_inv: Vec<usize>,
    pub rotation: Vec<usize>,
    pub signature: Vec<i8>,
}

/// A flag `(dart, side)` encoded as `2 * dart + side`.
pub type Flag = usize;

#[inline]
fn flag(dart: u32, side: usize) -> Flag {
    (dart as usize) << 1 | side
}

#[inline]
fn flag_dart(f: Flag) -> u32 {
    (f >> 1) as u32
}

#[inline]
fn flag_side(f: Flag) -> usize {
    f & 1
}

/// Structural check of raw map data. Lists every violation found.
pub fn validate_map(data: &MapData) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = data.darts;
    if n == 0 {
        report.push("map must have at least one edge (two darts)");
        return report;
    }
    if n % 2 != 0 {
        report.push(format!("dart count {n} is odd"));
    }
    if data.edge_inv.len() != n {
        report.push(format!(
            "edge_inv has {} entries, expected {n}",
            data.edge_inv.len()
        ));
    }
    if data.rotation.len() != n {
        report.push(format!(
            "rotation has {} entries, expected {n}",
            data.rotation.len()
        ));
    }
    if !report.is_valid() {
        return report;
    }
    for (d, &e) in data.edge_inv.iter().enumerate() {
        if e >= n {
            report.push(format!("edge_inv[{d}] = {e} out of range"));
        } else if e == d {
            report.push(format!("edge_inv fixes dart {d}"));
        } else if data.edge_inv[e] != d {
            report.push(format!("edge_inv is not an involution at dart {d}"));
        }
    }
    let mut seen = vec![false; n];
    for (d, &r) in data.rotation.iter().enumerate() {
        if r >= n {
            report.push(format!("rotation[{d}] = {r} out of range"));
        } else if seen[r] {
            report.push(format!("rotation maps two darts to {r}"));
        } else {
            seen[r] = true;
        }
    }
    if !report.is_valid() {
        return report;
    }
    let edges = n / 2;
    if data.signature.len() != edges {
        report.push(format!(
            "signature has {} entries, expected {edges}",
            data.signature.len()
        ));
    }
    for (e, &s) in data.signature.iter().enumerate() {
        if s != 1 && s != -1 {
            report.push(format!("signature[{e}] = {s}, expected +1 or -1"));
        }
    }
    report
}

/// A validated signed rotation system with derived orbit structure.
#[derive(Debug, Clone)]
pub struct SurfaceMap {
    n: usize,
    rot: Vec<u32>,
    rot_inv: Vec<u32>,
    inv: Vec<u32>,
    // dart -> edge orbit index; edges ordered by their smallest dart.
    edge_of: Vec<u32>,
    // edge -> (smallest dart, its partner).
    edge_darts: Vec<(u32, u32)>,
    // edge -> +1 / -1.
    sig: Vec<i8>,
    // dart -> vertex orbit index; vertices ordered by their smallest dart.
    vertex_of: Vec<u32>,
    // vertex -> rotation cycle, starting at the smallest dart.
    vertex_darts: Vec<Vec<u32>>,
}

impl SurfaceMap {
    pub fn new(data: MapData) -> Result<Self> {
        validate_map(&data).into_result(Error::BadInput)?;
        let n = data.darts;
        let rot: Vec<u32> = data.rotation.iter().map(|&d| d as u32).collect();
        let inv: Vec<u32> = data.edge_inv.iter().map(|&d| d as u32).collect();
        let mut rot_inv = vec![0u32; n];
        for (d, &r) in rot.iter().enumerate() {
            rot_inv[r as usize] = d as u32;
        }
        let mut edge_of = vec![u32::MAX; n];
        let mut edge_darts = Vec::with_capacity(n / 2);
        for d in 0..n {
            if edge_of[d] == u32::MAX {
                let e = edge_darts.len() as u32;
                edge_of[d] = e;
                edge_of[inv[d] as usize] = e;
                edge_darts.push((d as u32, inv[d]));
            }
        }
        let mut vertex_of = vec![u32::MAX; n];
        let mut vertex_darts = Vec::new();
        for d in 0..n {
            if vertex_of[d] == u32::MAX {
                let v = vertex_darts.len() as u32;
                let mut cycle = Vec::new();
                let mut cur = d as u32;
                loop {
                    vertex_of[cur as usize] = v;
                    cycle.push(cur);
                    cur = rot[cur as usize];
                    if cur as usize == d {
                        break;
                    }
                }
                vertex_darts.push(cycle);
            }
        }
        Ok(SurfaceMap {
            n,
            rot,
            rot_inv,
            inv,
            edge_of,
            edge_darts,
            sig: data.signature,
            vertex_of,
            vertex_darts,
        })
    }

    pub fn n_darts(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edge_darts.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_darts.len()
    }

    #[inline]
    pub fn rot(&self, d: u32) -> u32 {
        self.rot[d as usize]
    }

    #[inline]
    pub fn rot_inv(&self, d: u32) -> u32 {
        self.rot_inv[d as usize]
    }

    #[inline]
    pub fn inv(&self, d: u32) -> u32 {
        self.inv[d as usize]
    }

    #[inline]
    pub fn edge(&self, d: u32) -> u32 {
        self.edge_of[d as usize]
    }

    /// The two darts of an edge, smallest first.
    pub fn edge_ends(&self, e: u32) -> (u32, u32) {
        self.edge_darts[e as usize]
    }

    #[inline]
    pub fn sig(&self, e: u32) -> i8 {
        self.sig[e as usize]
    }

    /// Whether the edge of a dart carries a negative signature.
    #[inline]
    pub fn dart_neg(&self, d: u32) -> bool {
        self.sig[self.edge_of[d as usize] as usize] < 0
    }

    #[inline]
    pub fn vertex(&self, d: u32) -> u32 {
        self.vertex_of[d as usize]
    }

    pub fn vertex_darts(&self, v: u32) -> &[u32] {
        &self.vertex_darts[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.vertex_darts[v as usize].len()
    }

    /// Whether the edge is a loop (both darts at the same vertex).
    pub fn is_loop(&self, e: u32) -> bool {
        let (a, b) = self.edge_darts[e as usize];
        self.vertex(a) == self.vertex(b)
    }

    /// Re-serializes the map.
    pub fn data(&self) -> MapData {
        MapData {
            darts: self.n,
            edge_inv: self.inv.iter().map(|&d| d as usize).collect(),
            rotation: self.rot.iter().map(|&d| d as usize).collect(),
            signature: self.sig.clone(),
        }
    }

    /// Whether all darts form a single component under rotation and edge
    /// involution.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 0usize;
        while let Some(d) = stack.pop() {
            count += 1;
            for next in [self.rot(d), self.inv(d)] {
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    stack.push(next);
                }
            }
        }
        count == self.n
    }

    fn require_connected(&self, op: &str) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected(format!("{op} requires a connected map")))
        }
    }

    /// Successor of a flag along its face walk.
    #[inline]
    pub fn face_step(&self, f: Flag) -> Flag {
        let d = flag_dart(f);
        let s = flag_side(f);
        let t = if s == 0 { self.rot(d) } else { self.rot_inv(d) };
        flag(self.inv(t), s ^ self.dart_neg(t) as usize)
    }

    /// The reversal of a flag: same corner, opposite walking direction.
    #[inline]
    fn flag_mirror(&self, f: Flag) -> Flag {
        let d = flag_dart(f);
        if flag_side(f) == 0 {
            flag(self.rot(d), 1)
        } else {
            flag(self.rot_inv(d), 0)
        }
    }

    /// Crossing to the other side of the dart's edge.
    #[inline]
    fn flag_cross(&self, f: Flag) -> Flag {
        let d = flag_dart(f);
        let s = flag_side(f);
        flag(self.inv(d), (1 - s) ^ self.dart_neg(d) as usize)
    }

    /// The corner a flag traverses: dart `d` for `(d, 0)`, the rotation
    /// predecessor for `(d, 1)`. Corner `c` sits between darts `c` and
    /// `rotation(c)` at their shared vertex.
    #[inline]
    pub fn corner_of_flag(&self, f: Flag) -> u32 {
        let d = flag_dart(f);
        if flag_side(f) == 0 {
            d
        } else {
            self.rot_inv(d)
        }
    }

    /// Traces all faces of a connected map.
    pub fn trace_faces(&self) -> Result<FaceSet> {
        self.require_connected("trace_faces")?;
        let mut face_of_flag = vec![u32::MAX; 2 * self.n];
        let mut on_walk = vec![false; 2 * self.n];
        let mut walks = Vec::new();
        for start in 0..2 * self.n {
            if face_of_flag[start] != u32::MAX {
                continue;
            }
            let id = walks.len() as u32;
            let mut walk = Vec::new();
            let mut cur = start;
            loop {
                debug_assert_eq!(face_of_flag[cur], u32::MAX);
                face_of_flag[cur] = id;
                on_walk[cur] = true;
                walk.push(cur);
                cur = self.face_step(cur);
                if cur == start {
                    break;
                }
            }
            // The reversed orbit is disjoint from the stored one and gets
            // the same face index.
            for &f in &walk {
                let m = self.flag_mirror(f);
                debug_assert_eq!(face_of_flag[m], u32::MAX);
                face_of_flag[m] = id;
            }
            walks.push(walk);
        }
        Ok(FaceSet {
            walks,
            face_of_flag,
            on_walk,
        })
    }

    /// Euler genus: 0 for the sphere, 1 per crosscap, 2 per handle.
    pub fn euler_genus(&self) -> Result<usize> {
        self.require_connected("euler_genus")?;
        let faces = self.trace_faces()?;
        let chi = self.n_vertices() as i64 - self.n_edges() as i64 + faces.count() as i64;
        debug_assert!(chi <= 2);
        Ok((2 - chi) as usize)
    }

    /// Whether the surface is orientable, i.e. every cycle has positive
    /// signature product.
    pub fn is_orientable(&self) -> Result<bool> {
        self.require_connected("is_orientable")?;
        let mut orient = vec![u8::MAX; self.n_vertices()];
        orient[self.vertex(0) as usize] = 0;
        let mut stack = vec![self.vertex(0)];
        while let Some(v) = stack.pop() {
            let o = orient[v as usize];
            for &d in self.vertex_darts(v as u32) {
                let w = self.vertex(self.inv(d));
                let ow = o ^ self.dart_neg(d) as u8;
                if orient[w as usize] == u8::MAX {
                    orient[w as usize] = ow;
                    stack.push(w);
                } else if orient[w as usize] != ow {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The dual map on the same surface: faces become vertices, edges stay
    /// edges. Each dual dart is a flag pair `{x, cross(x)}`; the dual
    /// rotation follows the face walks.
    pub fn graph_dual(&self) -> Result<SurfaceMap> {
        if !self.is_connected() {
            return Err(Error::NotTwoCell(
                "graph_dual requires a 2-cell embedding (connected map)".into(),
            ));
        }
        let faces = self.trace_faces()?;
        let two_n = 2 * self.n;
        // Pair flags across edges; pair ids become dual darts, numbered by
        // each pair's smallest flag.
        let mut pair_id = vec![u32::MAX; two_n];
        let mut pair_walk_flag = Vec::with_capacity(self.n);
        for x in 0..two_n {
            if pair_id[x] != u32::MAX {
                continue;
            }
            let y = self.flag_cross(x);
            debug_assert_ne!(x, y);
            let id = pair_walk_flag.len() as u32;
            pair_id[x] = id;
            pair_id[y] = id;
            // Exactly one flag of the pair lies on a stored walk.
            debug_assert_ne!(faces.on_walk[x], faces.on_walk[y]);
            pair_walk_flag.push(if faces.on_walk[x] { x } else { y });
        }
        let nd = pair_walk_flag.len();
        debug_assert_eq!(nd, self.n);
        let mut rotation = vec![0usize; nd];
        let mut edge_inv = vec![0usize; nd];
        for (id, &x) in pair_walk_flag.iter().enumerate() {
            rotation[id] = pair_id[self.face_step(x)] as usize;
            edge_inv[id] = pair_id[x ^ 1] as usize;
        }
        // Dual signature: positive exactly when crossing the edge from a
        // stored walk lands on the reversed orbit of the opposite face.
        let mut signature = Vec::with_capacity(nd / 2);
        let mut edge_seen = vec![false; nd];
        for id in 0..nd {
            if edge_seen[id] {
                continue;
            }
            edge_seen[id] = true;
            edge_seen[edge_inv[id]] = true;
            let x = pair_walk_flag[id];
            let positive = !faces.on_walk[x ^ 1];
            debug_assert_eq!(positive, !faces.on_walk[pair_walk_flag[edge_inv[id]] ^ 1]);
            signature.push(if positive { 1 } else { -1 });
        }
        SurfaceMap::new(MapData {
            darts: nd,
            edge_inv,
            rotation,
            signature,
        })
    }

    /// The corner construction: keeps the selected vertices, adds one new
    /// vertex per face, and joins them through the corners at selected
    /// vertices. The result lives on the same surface.
    ///
    /// Every face must have at least one corner at a selected vertex.
    pub fn corner_map(&self, selected: &[bool]) -> Result<CornerMap> {
        if selected.len() != self.n_vertices() {
            return Err(Error::BadInput(format!(
                "selected has {} entries, expected {}",
                selected.len(),
                self.n_vertices()
            )));
        }
        if !selected.iter().any(|&s| s) {
            return Err(Error::BadInput("no vertex selected".into()));
        }
        self.require_connected("corner_map")?;
        let faces = self.trace_faces()?;
        // Kept corners in dart order; corner i gets outer dart 2i at the old
        // vertex and inner dart 2i+1 at the face vertex.
        let mut corner_idx = vec![u32::MAX; self.n];
        let mut kept = Vec::new();
        for d in 0..self.n as u32 {
            if selected[self.vertex(d) as usize] {
                corner_idx[d as usize] = kept.len() as u32;
                kept.push(d);
            }
        }
        let nd = 2 * kept.len();
        let mut rotation = vec![usize::MAX; nd];
        let mut edge_inv = vec![0usize; nd];
        let mut signature = Vec::with_capacity(kept.len());
        for (i, &t) in kept.iter().enumerate() {
            let j = corner_idx[self.rot(t) as usize] as usize;
            rotation[2 * i] = 2 * j;
            edge_inv[2 * i] = 2 * i + 1;
            edge_inv[2 * i + 1] = 2 * i;
            // The corner band is untwisted between the vertex rotation and
            // the face walk exactly when the walk runs against the rotation.
            signature.push(if faces.on_walk[flag(t, 0)] { -1 } else { 1 });
        }
        // Face vertices: inner darts of kept corners follow the face walk.
        let mut face_first_corner = vec![u32::MAX; faces.count()];
        for (f, walk) in faces.walks.iter().enumerate() {
            let mut cycle = Vec::new();
            for &fl in walk {
                let c = self.corner_of_flag(fl);
                if corner_idx[c as usize] != u32::MAX {
                    cycle.push(corner_idx[c as usize] as usize);
                }
            }
            if cycle.is_empty() {
                return Err(Error::Internal(format!(
                    "corner_map: face {f} has no corner at a selected vertex"
                )));
            }
            face_first_corner[f] = cycle[0] as u32;
            for (a, b) in cycle.iter().zip(cycle.iter().cycle().skip(1)) {
                rotation[2 * a + 1] = 2 * b + 1;
            }
        }
        let map = SurfaceMap::new(MapData {
            darts: nd,
            edge_inv,
            rotation,
            signature,
        })?;
        // The construction is a drawing on the same surface; check that.
        let old_genus = self.euler_genus()?;
        let new_genus = map.euler_genus()?;
        if old_genus != new_genus {
            return Err(Error::Internal(format!(
                "corner_map changed euler genus from {old_genus} to {new_genus}"
            )));
        }
        let mut vertex_image = vec![None; self.n_vertices()];
        let mut corner_edge = vec![None; self.n];
        for (i, &t) in kept.iter().enumerate() {
            vertex_image[self.vertex(t) as usize] = Some(map.vertex(2 * i as u32));
            corner_edge[t as usize] = Some(map.edge(2 * i as u32));
        }
        let face_image: Vec<u32> = face_first_corner
            .iter()
            .map(|&c| map.vertex(2 * c + 1))
            .collect();
        let mut is_face_vertex = vec![false; map.n_vertices()];
        for &v in &face_image {
            is_face_vertex[v as usize] = true;
        }
        Ok(CornerMap {
            map,
            vertex_image,
            face_image,
            corner_edge,
            is_face_vertex,
        })
    }

    /// Canonical form of a connected map with vertex colors, invariant under
    /// dart relabeling, switching, and reflection. Two maps are isomorphic
    /// exactly when their forms agree.
    pub fn canonical_form(&self, colors: &[u32]) -> Result<Vec<u32>> {
        if self.n > 64 {
            return Err(Error::TooLarge(format!(
                "canonical_form supports up to 64 darts, got {}",
                self.n
            )));
        }
        if colors.len() != self.n_vertices() {
            return Err(Error::BadInput(format!(
                "colors has {} entries, expected {}",
                colors.len(),
                self.n_vertices()
            )));
        }
        if colors.iter().any(|&c| c >= 1 << 17) {
            return Err(Error::BadInput("vertex colors must fit in 17 bits".into()));
        }
        self.require_connected("canonical_form")?;
        let mut best: Option<Vec<u32>> = None;
        let mut label = vec![u32::MAX; self.n];
        let mut orient = vec![u8::MAX; self.n_vertices()];
        let mut order: Vec<u32> = Vec::with_capacity(self.n);
        let mut word: Vec<u32> = Vec::with_capacity(self.n);
        for start in 0..self.n as u32 {
            for chi in 0..2u8 {
                self.canonical_run(start, chi, colors, &mut label, &mut orient, &mut order, &mut word);
                if best.as_ref().is_none_or(|b| word < *b) {
                    best = Some(word.clone());
                }
            }
        }
        Ok(best.unwrap())
    }

    /// One labeling run for `canonical_form`: breadth-first over darts in
    /// label order, following each vertex's rotation in the direction of its
    /// propagated orientation.
    fn canonical_run(
        &self,
        start: u32,
        chi: u8,
        colors: &[u32],
        label: &mut [u32],
        orient: &mut [u8],
        order: &mut Vec<u32>,
        word: &mut Vec<u32>,
    ) {
        label.fill(u32::MAX);
        orient.fill(u8::MAX);
        order.clear();
        word.clear();
        label[start as usize] = 0;
        orient[self.vertex(start) as usize] = chi;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let d = order[head];
            head += 1;
            let o = orient[self.vertex(d) as usize];
            let t = if o == 0 { self.rot(d) } else { self.rot_inv(d) };
            if label[t as usize] == u32::MAX {
                label[t as usize] = order.len() as u32;
                order.push(t);
            }
            let u = self.inv(d);
            let w = self.vertex(u);
            if orient[w as usize] == u8::MAX {
                orient[w as usize] = o ^ self.dart_neg(d) as u8;
            }
            if label[u as usize] == u32::MAX {
                label[u as usize] = order.len() as u32;
                order.push(u);
            }
        }
        for &d in order.iter() {
            let v = self.vertex(d);
            let o = orient[v as usize];
            let t = if o == 0 { self.rot(d) } else { self.rot_inv(d) };
            let u = self.inv(d);
            let w = self.vertex(u);
            // Effective sign: raw for loops, orientation-adjusted otherwise;
            // both are switching invariants.
            let neg = self.dart_neg(d) as u8;
            let eff = if v == w {
                neg
            } else {
                neg ^ orient[v as usize] ^ orient[w as usize]
            };
            let positive = (eff == 0) as u32;
            word.push(label[t as usize] << 25 | label[u as usize] << 18 | positive << 17 | colors[v as usize]);
        }
    }
}

/// Whether two connected maps are isomorphic, allowing dart relabeling,
/// switching at vertices, and reflection of the whole surface.
pub fn map_isomorphic(a: &SurfaceMap, b: &SurfaceMap) -> Result<bool> {
    if a.n_darts() != b.n_darts() {
        return Ok(false);
    }
    let ca = a.canonical_form(&vec![0; a.n_vertices()])?;
    let cb = b.canonical_form(&vec![0; b.n_vertices()])?;
    Ok(ca == cb)
}

/// The faces of a connected map.
#[derive(Debug, Clone)]
pub struct FaceSet {
    /// face -> stored walk, starting at the face's smallest flag.
    pub walks: Vec<Vec<Flag>>,
    /// flag -> face index, covering both orbits of each face.
    pub face_of_flag: Vec<u32>,
    /// flag -> whether it lies on the stored walk of its face.
    pub on_walk: Vec<bool>,
}

impl FaceSet {
    pub fn count(&self) -> usize {
        self.walks.len()
    }

    /// Face index of the flag `(d, side)`.
    pub fn face_at(&self, d: u32, side: usize) -> u32 {
        self.face_of_flag[flag(d, side)]
    }

    /// The two faces flanking an edge (equal when the same face runs along
    /// both sides).
    pub fn edge_sides(&self, map: &SurfaceMap, e: u32) -> (u32, u32) {
        let (d, _) = map.edge_ends(e);
        (self.face_at(d, 0), self.face_at(d, 1))
    }

    /// Number of corners on the face, i.e. the length of its walk.
    pub fn face_degree(&self, f: u32) -> usize {
        self.walks[f as usize].len()
    }
}

/// Result of [`SurfaceMap::corner_map`]: the new map plus provenance tying
/// its pieces back to the source.
#[derive(Debug, Clone)]
pub struct CornerMap {
    pub map: SurfaceMap,
    /// old vertex -> new vertex, `None` when not selected.
    pub vertex_image: Vec<Option<u32>>,
    /// old face -> new vertex.
    pub face_image: Vec<u32>,
    /// old dart -> new edge through its corner, `None` when dropped.
    pub corner_edge: Vec<Option<u32>>,
    /// new vertex -> whether it stands for an old face.
    pub is_face_vertex: Vec<bool>,
}
