//! Abstract hypergraphs, tree decompositions, an exact tree-width oracle,
//! and brambles.
//!
//! Vertices and edges are identified by string names. The tree-width of a
//! hypergraph is defined through its primal graph: every hyperedge must be
//! contained in a bag. Contraction of an edge subset `A` replaces `A` by a
//! single edge on the border of `A`, which is the vertex set met by both
//! sides of the bipartition `{A, E \ A}`.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result, ValidationReport};

/// One hyperedge: a label and a set of vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperEdge {
    pub label: String,
    pub ends: BTreeSet<u32>,
}

/// A hypergraph over named vertices. Parallel edges and nested edges are
/// allowed; labels are the edge identity.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    vertices: Vec<String>,
    vindex: HashMap<String, u32>,
    edges: Vec<HyperEdge>,
    eindex: HashMap<String, u32>,
}

impl Hypergraph {
    pub fn new(vertices: Vec<String>, edges: Vec<(String, Vec<String>)>) -> Result<Self> {
        let mut vindex = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vindex.insert(v.clone(), i as u32).is_some() {
                return Err(Error::BadInput(format!("duplicate vertex name {v:?}")));
            }
        }
        let mut eindex = HashMap::new();
        let mut built = Vec::with_capacity(edges.len());
        for (label, ends) in edges {
            if eindex.insert(label.clone(), built.len() as u32).is_some() {
                return Err(Error::BadInput(format!("duplicate edge label {label:?}")));
            }
            let mut set = BTreeSet::new();
            for v in &ends {
                match vindex.get(v) {
                    Some(&i) => {
                        set.insert(i);
                    }
                    None => {
                        return Err(Error::BadInput(format!(
                            "edge {label:?} references unknown vertex {v:?}"
                        )))
                    }
                }
            }
            built.push(HyperEdge { label, ends: set });
        }
        Ok(Hypergraph {
            vertices,
            vindex,
            edges: built,
            eindex,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, i: u32) -> &str {
        &self.vertices[i as usize]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_index(&self, name: &str) -> Option<u32> {
        self.vindex.get(name).copied()
    }

    pub fn edges(&self) -> &[HyperEdge] {
        &self.edges
    }

    pub fn edge_labels(&self) -> impl Iterator<Item = &str> {
        self.edges.iter().map(|e| e.label.as_str())
    }

    pub fn edge_label_set(&self) -> BTreeSet<String> {
        self.edges.iter().map(|e| e.label.clone()).collect()
    }

    pub fn edge_by_label(&self, label: &str) -> Option<&HyperEdge> {
        self.eindex.get(label).map(|&i| &self.edges[i as usize])
    }

    /// Ends of an edge as sorted vertex names.
    pub fn ends_named(&self, label: &str) -> Result<BTreeSet<String>> {
        let e = self
            .edge_by_label(label)
            .ok_or_else(|| Error::BadEdge(format!("no edge labelled {label:?}")))?;
        Ok(e.ends
            .iter()
            .map(|&v| self.vertices[v as usize].clone())
            .collect())
    }

    /// Largest edge size (the quantity usually written alpha).
    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(|e| e.ends.len()).max().unwrap_or(0)
    }

    /// Union of the end sets of the given edges.
    pub fn union_of(&self, labels: &BTreeSet<String>) -> Result<BTreeSet<u32>> {
        let mut out = BTreeSet::new();
        for l in labels {
            let e = self
                .edge_by_label(l)
                .ok_or_else(|| Error::BadEdge(format!("no edge labelled {l:?}")))?;
            out.extend(e.ends.iter().copied());
        }
        Ok(out)
    }

    fn names_of(&self, set: &BTreeSet<u32>) -> BTreeSet<String> {
        set.iter().map(|&v| self.vertices[v as usize].clone()).collect()
    }

    /// Border of the bipartition `{a, b}` of the edge set: the vertices met
    /// by both sides.
    pub fn border(&self, a: &BTreeSet<String>, b: &BTreeSet<String>) -> Result<BTreeSet<String>> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::BadPartition("both parts must be nonempty".into()));
        }
        if !a.is_disjoint(b) {
            return Err(Error::BadPartition("parts overlap".into()));
        }
        if a.len() + b.len() != self.edges.len() {
            return Err(Error::BadPartition(format!(
                "parts cover {} edges, hypergraph has {}",
                a.len() + b.len(),
                self.edges.len()
            )));
        }
        let ua = self.union_of(a)?;
        let ub = self.union_of(b)?;
        Ok(self.names_of(&(&ua & &ub)))
    }

    /// Border of `{a, E \ a}`.
    pub fn border_of(&self, a: &BTreeSet<String>) -> Result<BTreeSet<String>> {
        let b: BTreeSet<String> = self
            .edges
            .iter()
            .filter(|e| !a.contains(&e.label))
            .map(|e| e.label.clone())
            .collect();
        self.border(a, &b)
    }

    /// Contracts the edge subset `a` into a single edge `new_label` on the
    /// border of `a`. Vertices lying only inside `a` disappear.
    pub fn contract(&self, a: &BTreeSet<String>, new_label: &str) -> Result<Hypergraph> {
        if a.is_empty() {
            return Err(Error::BadSubset("cannot contract an empty edge set".into()));
        }
        if a.len() >= self.edges.len() {
            return Err(Error::BadSubset(
                "cannot contract the whole edge set".into(),
            ));
        }
        for l in a {
            if self.edge_by_label(l).is_none() {
                return Err(Error::BadSubset(format!("no edge labelled {l:?}")));
            }
        }
        if self.eindex.contains_key(new_label) && !a.contains(new_label) {
            return Err(Error::BadInput(format!(
                "contraction label {new_label:?} already in use"
            )));
        }
        let border = self.border_of(a)?;
        let kept: Vec<&HyperEdge> = self.edges.iter().filter(|e| !a.contains(&e.label)).collect();
        let mut alive: BTreeSet<u32> = BTreeSet::new();
        for e in &kept {
            alive.extend(e.ends.iter().copied());
        }
        let vertices: Vec<String> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| alive.contains(&(*i as u32)))
            .map(|(_, v)| v.clone())
            .collect();
        let mut edges: Vec<(String, Vec<String>)> = kept
            .iter()
            .map(|e| {
                (
                    e.label.clone(),
                    e.ends.iter().map(|&v| self.vertices[v as usize].clone()).collect(),
                )
            })
            .collect();
        edges.push((new_label.to_string(), border.into_iter().collect()));
        Hypergraph::new(vertices, edges)
    }

    /// Deletes a vertex together with every edge containing it.
    pub fn delete_vertex(&self, name: &str) -> Result<Hypergraph> {
        let v = self
            .vertex_index(name)
            .ok_or_else(|| Error::BadInput(format!("no vertex named {name:?}")))?;
        let vertices: Vec<String> = self.vertices.iter().filter(|&n| n != name).cloned().collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| !e.ends.contains(&v))
            .map(|e| {
                (
                    e.label.clone(),
                    e.ends.iter().map(|&u| self.vertices[u as usize].clone()).collect(),
                )
            })
            .collect();
        Hypergraph::new(vertices, edges)
    }

    /// Adjacency of the primal graph: every hyperedge becomes a clique.
    pub fn primal_adjacency(&self) -> Vec<BTreeSet<u32>> {
        let mut adj = vec![BTreeSet::new(); self.vertices.len()];
        for e in &self.edges {
            for &u in &e.ends {
                for &v in &e.ends {
                    if u != v {
                        adj[u as usize].insert(v);
                    }
                }
            }
        }
        adj
    }

    /// Whether the primal graph is connected (isolated vertices count as
    /// separate components).
    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let adj = self.primal_adjacency();
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0u32];
        seen[0] = true;
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for &w in &adj[v as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        count == self.vertices.len()
    }
}

/// A tree decomposition with bags of vertex names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<String>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn n_nodes(&self) -> usize {
        self.bags.len()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    fn is_tree(&self) -> bool {
        let n = self.bags.len();
        if n == 0 || self.edges.len() != n - 1 {
            return false;
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            if a >= n || b >= n || a == b {
                return false;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 0;
        while let Some(v) = stack.pop() {
            count += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        count == n
    }
}

/// Checks the three tree decomposition axioms against a hypergraph.
pub fn validate_td(h: &Hypergraph, td: &TreeDecomposition) -> ValidationReport {
    let mut report = ValidationReport::default();
    if !td.is_tree() {
        report.push("decomposition graph is not a tree");
        return report;
    }
    for (i, bag) in td.bags.iter().enumerate() {
        for v in bag {
            if h.vertex_index(v).is_none() {
                report.push(format!("bag {i} contains unknown vertex {v:?}"));
            }
        }
    }
    // Every vertex induces a nonempty connected subtree.
    for v in h.vertex_names() {
        let nodes: Vec<usize> = (0..td.bags.len()).filter(|&i| td.bags[i].contains(v)).collect();
        if nodes.is_empty() {
            report.push(format!("vertex {v:?} appears in no bag"));
            continue;
        }
        let inside: BTreeSet<usize> = nodes.iter().copied().collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![nodes[0]];
        seen.insert(nodes[0]);
        while let Some(x) = stack.pop() {
            for y in td.neighbors(x) {
                if inside.contains(&y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        if seen.len() != nodes.len() {
            report.push(format!("vertex {v:?} induces a disconnected subtree"));
        }
    }
    // Every edge fits in a bag.
    for e in h.edges() {
        let ends: BTreeSet<String> = e.ends.iter().map(|&v| h.vertex_name(v).to_string()).collect();
        if !td.bags.iter().any(|b| ends.is_subset(b)) {
            report.push(format!("edge {:?} is contained in no bag", e.label));
        }
    }
    report
}

/// Repeatedly contracts tree edges whose bags are nested, until none remain.
pub fn normalize_td(td: &TreeDecomposition) -> TreeDecomposition {
    let mut bags = td.bags.clone();
    let mut edges = td.edges.clone();
    loop {
        let mut found = None;
        let mut sorted = edges.clone();
        sorted.sort();
        for &(a, b) in &sorted {
            if bags[a].is_subset(&bags[b]) {
                found = Some((a, b));
                break;
            }
            if bags[b].is_subset(&bags[a]) {
                found = Some((b, a));
                break;
            }
        }
        let Some((drop, keep)) = found else { break };
        // Reattach drop's other neighbors to keep, then remove drop.
        let mut next_edges = Vec::with_capacity(edges.len().saturating_sub(1));
        for &(a, b) in &edges {
            if (a, b) == (drop, keep) || (a, b) == (keep, drop) {
                continue;
            }
            let a2 = if a == drop { keep } else { a };
            let b2 = if b == drop { keep } else { b };
            next_edges.push((a2, b2));
        }
        bags.remove(drop);
        let fix = |x: usize| if x > drop { x - 1 } else { x };
        edges = next_edges
            .into_iter()
            .map(|(a, b)| (fix(a), fix(b)))
            .collect();
    }
    TreeDecomposition { bags, edges }
}

/// Joins decompositions of the two contractions of a bipartition `{a, b}`
/// into a decomposition of the original hypergraph, by adding one tree edge
/// between bags containing the border.
pub fn merge_td(
    h: &Hypergraph,
    a: &BTreeSet<String>,
    b: &BTreeSet<String>,
    td_a: &TreeDecomposition,
    td_b: &TreeDecomposition,
) -> Result<TreeDecomposition> {
    let border = h.border(a, b)?;
    let find = |td: &TreeDecomposition, side: &str| -> Result<usize> {
        td.bags
            .iter()
            .position(|bag| border.is_subset(bag))
            .ok_or_else(|| {
                Error::BadInput(format!(
                    "no bag of the {side} decomposition contains the border"
                ))
            })
    };
    // td_a decomposes the contraction of a, whose vertices avoid the inside
    // of a; the border edge there is covered by some bag, and symmetrically.
    let ua = find(td_a, "first")?;
    let ub = find(td_b, "second")?;
    let offset = td_a.bags.len();
    let mut bags = td_a.bags.clone();
    bags.extend(td_b.bags.iter().cloned());
    let mut edges = td_a.edges.clone();
    edges.extend(td_b.edges.iter().map(|&(x, y)| (x + offset, y + offset)));
    edges.push((ua, ub + offset));
    Ok(TreeDecomposition { bags, edges })
}

/// Restricts a decomposition of `h` to the contraction by `E \ b`: keeps
/// only the vertices met by `b`. Requires the border of `E \ b` to lie
/// inside some bag.
pub fn restrict_td(
    h: &Hypergraph,
    td: &TreeDecomposition,
    b: &BTreeSet<String>,
) -> Result<TreeDecomposition> {
    let complement: BTreeSet<String> = h
        .edges()
        .iter()
        .filter(|e| !b.contains(&e.label))
        .map(|e| e.label.clone())
        .collect();
    let border = h.border(&complement, b)?;
    if !td.bags.iter().any(|bag| border.is_subset(bag)) {
        return Err(Error::BorderNotCovered(
            "no bag contains the border of the contracted side".into(),
        ));
    }
    let keep = h.names_of(&h.union_of(b)?);
    let bags = td
        .bags
        .iter()
        .map(|bag| bag.intersection(&keep).cloned().collect())
        .collect();
    Ok(TreeDecomposition {
        bags,
        edges: td.edges.clone(),
    })
}

fn oracle_limit() -> usize {
    std::env::var("SURFTW_ORACLE_LIMIT")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(18)
        .min(26)
}

/// Exact tree-width with a witness decomposition, by dynamic programming
/// over elimination orders. Rejects hypergraphs with more vertices than the
/// configured limit (default 18, `SURFTW_ORACLE_LIMIT` overrides, capped at
/// 26).
pub fn exact_treewidth(h: &Hypergraph) -> Result<(usize, TreeDecomposition)> {
    let n = h.n_vertices();
    if n == 0 {
        return Err(Error::BadInput("hypergraph has no vertices".into()));
    }
    let limit = oracle_limit();
    if n > limit {
        return Err(Error::TooLarge(format!(
            "exact tree-width limited to {limit} vertices (SURFTW_ORACLE_LIMIT), got {n}"
        )));
    }
    let adj: Vec<u64> = h
        .primal_adjacency()
        .iter()
        .map(|s| s.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    let full: u64 = if n == 64 { !0 } else { (1 << n) - 1 };
    // q(s, v): neighbors outside s|v of the component of v in the graph
    // induced on s|v.
    let q = |s: u64, v: usize| -> u32 {
        let mut comp = 1u64 << v;
        let mut reach = adj[v];
        loop {
            let grow = reach & s & !comp;
            if grow == 0 {
                break;
            }
            comp |= grow;
            let mut m = grow;
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                reach |= adj[u];
            }
        }
        (reach & !(s | 1 << v)).count_ones()
    };
    // f[s] = least width of an elimination of exactly the vertices of s,
    // measured against the rest of the graph.
    let mut f = vec![0u8; 1usize << n];
    for s in 1u64..=full {
        let mut best = u8::MAX;
        let mut m = s;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let rest = s & !(1 << v);
            let cand = f[rest as usize].max(q(rest, v) as u8);
            if cand < best {
                best = cand;
            }
        }
        f[s as usize] = best;
    }
    let width = f[full as usize] as usize;
    // Reconstruct an optimal elimination order backwards.
    let mut order = vec![0usize; n];
    let mut s = full;
    for i in (0..n).rev() {
        let mut m = s;
        let mut picked = None;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            let rest = s & !(1 << v);
            if f[rest as usize].max(q(rest, v) as u8) == f[s as usize] {
                picked = Some(v);
                break;
            }
        }
        let v = picked.expect("some vertex attains the dp optimum");
        order[i] = v;
        s &= !(1 << v);
    }
    // Turn the elimination order into a decomposition: bag i is v_i plus its
    // neighbors in the partially eliminated graph.
    let mut cur = adj.clone();
    let mut bags: Vec<BTreeSet<String>> = Vec::with_capacity(n);
    let mut step_of = vec![0usize; n];
    let mut masks = Vec::with_capacity(n);
    for (i, &v) in order.iter().enumerate() {
        step_of[v] = i;
        let nb = cur[v];
        masks.push(nb | 1 << v);
        let mut bag = BTreeSet::new();
        bag.insert(h.vertex_name(v as u32).to_string());
        let mut m = nb;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            m &= m - 1;
            bag.insert(h.vertex_name(u as u32).to_string());
        }
        bags.push(bag);
        // Remove v and make its neighborhood a clique.
        let mut m = nb;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            m &= m - 1;
            cur[u] = (cur[u] | nb) & !(1 << u) & !(1 << v);
        }
        for c in cur.iter_mut() {
            *c &= !(1 << v);
        }
    }
    let mut edges = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let rest = masks[i] & !(1 << order[i]);
        let parent = if rest == 0 {
            i + 1
        } else {
            // First eliminated among the bag's other vertices.
            let mut best = usize::MAX;
            let mut m = rest;
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                best = best.min(step_of[u]);
            }
            best
        };
        debug_assert!(parent > i);
        edges.push((i, parent));
    }
    let td = TreeDecomposition { bags, edges };
    if td.width() != width {
        return Err(Error::Internal(format!(
            "witness decomposition has width {}, dp computed {width}",
            td.width()
        )));
    }
    validate_td(h, &td).into_result(|m| {
        Error::Internal(format!("witness decomposition invalid: {m}"))
    })?;
    Ok((width, td))
}

/// A bramble candidate: a family of vertex sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bramble {
    pub elements: Vec<BTreeSet<String>>,
}

/// Whether every element is nonempty and connected and every two elements
/// touch (share a vertex or are joined by an edge).
pub fn is_bramble(h: &Hypergraph, bramble: &Bramble) -> Result<bool> {
    let adj = h.primal_adjacency();
    let mut sets: Vec<BTreeSet<u32>> = Vec::with_capacity(bramble.elements.len());
    for el in &bramble.elements {
        let mut set = BTreeSet::new();
        for name in el {
            let v = h
                .vertex_index(name)
                .ok_or_else(|| Error::BadInput(format!("unknown vertex {name:?}")))?;
            set.insert(v);
        }
        sets.push(set);
    }
    for set in &sets {
        if set.is_empty() {
            return Ok(false);
        }
        let start = *set.iter().next().unwrap();
        let mut seen = BTreeSet::new();
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &adj[v as usize] {
                if set.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != set.len() {
            return Ok(false);
        }
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let touch = !sets[i].is_disjoint(&sets[j])
                || sets[i]
                    .iter()
                    .any(|&v| adj[v as usize].iter().any(|w| sets[j].contains(w)));
            if !touch {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Order of a bramble: the least size of a set hitting every element.
/// Branch and bound with iterative deepening; `budget` caps the number of
/// search nodes.
pub fn bramble_order(h: &Hypergraph, bramble: &Bramble, budget: u64) -> Result<usize> {
    let mut sets: Vec<BTreeSet<u32>> = Vec::with_capacity(bramble.elements.len());
    for el in &bramble.elements {
        let mut set = BTreeSet::new();
        for name in el {
            let v = h
                .vertex_index(name)
                .ok_or_else(|| Error::BadInput(format!("unknown vertex {name:?}")))?;
            set.insert(v);
        }
        if set.is_empty() {
            return Err(Error::BadInput("bramble element is empty".into()));
        }
        sets.push(set);
    }
    if sets.is_empty() {
        return Ok(0);
    }
    // Elements that contain another element are hit whenever the smaller one
    // is; drop them.
    let mut minimal: Vec<BTreeSet<u32>> = Vec::new();
    sets.sort_by_key(|s| s.len());
    for s in sets {
        if !minimal.iter().any(|m| m.is_subset(&s)) {
            minimal.push(s);
        }
    }
    fn search(
        minimal: &[BTreeSet<u32>],
        hit: &mut BTreeSet<u32>,
        depth: usize,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::TooLarge(format!(
                "bramble order search exceeded {budget} nodes"
            )));
        }
        let uncovered = minimal.iter().find(|s| s.iter().all(|v| !hit.contains(v)));
        let Some(target) = uncovered else {
            return Ok(true);
        };
        if depth == 0 {
            return Ok(false);
        }
        for &v in target.iter() {
            hit.insert(v);
            let found = search(minimal, hit, depth - 1, nodes, budget)?;
            hit.remove(&v);
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let mut nodes = 0u64;
    for k in 0..=h.n_vertices() {
        let mut hit = BTreeSet::new();
        if search(&minimal, &mut hit, k, &mut nodes, budget)? {
            return Ok(k);
        }
    }
    Err(Error::Internal("hitting set search did not terminate".into()))
}
