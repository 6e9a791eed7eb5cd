//! Partitioning trees: trees whose leaves are bijectively labelled by the
//! hyperedges of a hypergraph.
//!
//! An internal node induces a partition of the edge set, a tree edge a
//! bipartition. Labelling each internal node with the border of its node
//! partition turns the tree into a tree decomposition, which defines the
//! width of the tree. Merging trees of the two contractions of a
//! bipartition undoes contraction and keeps the width.

use std::collections::{BTreeMap, BTreeSet};

use crate::embed::EmbeddedHypergraph;
use crate::error::{Error, Result, ValidationReport};
use crate::hypergraph::{validate_td, Hypergraph, TreeDecomposition};
use crate::pi::PiStructure;

/// A tree with leaves labelled by hyperedge labels. A hypergraph with one
/// edge is carried by a single labelled node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitioningTree {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub leaf_label: BTreeMap<usize, String>,
}

impl PartitioningTree {
    /// The two-node tree for a pair of edges.
    pub fn pair(a: &str, b: &str) -> Self {
        PartitioningTree {
            nodes: 2,
            edges: vec![(0, 1)],
            leaf_label: [(0, a.to_string()), (1, b.to_string())].into_iter().collect(),
        }
    }

    /// The single-node tree for one edge.
    pub fn single(label: &str) -> Self {
        PartitioningTree {
            nodes: 1,
            edges: Vec::new(),
            leaf_label: [(0, label.to_string())].into_iter().collect(),
        }
    }

    /// A star: node 0 internal, one leaf per label.
    pub fn star(labels: &[String]) -> Self {
        PartitioningTree {
            nodes: labels.len() + 1,
            edges: (1..=labels.len()).map(|i| (0, i)).collect(),
            leaf_label: labels
                .iter()
                .enumerate()
                .map(|(i, l)| (i + 1, l.clone()))
                .collect(),
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
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
        out.sort_unstable();
        out
    }

    pub fn is_internal(&self, v: usize) -> bool {
        v < self.nodes && !self.leaf_label.contains_key(&v)
    }

    fn is_tree(&self) -> bool {
        if self.nodes == 0 || self.edges.len() != self.nodes - 1 {
            return false;
        }
        let mut adj = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.edges {
            if a >= self.nodes || b >= self.nodes || a == b {
                return false;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.nodes];
        seen[0] = true;
        let mut stack = vec![0usize];
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
        count == self.nodes
    }

    /// Labels reachable from `start` without crossing into `avoid`.
    fn side_labels(&self, start: usize, avoid: usize) -> BTreeSet<String> {
        let mut seen = vec![false; self.nodes];
        seen[avoid] = true;
        seen[start] = true;
        let mut stack = vec![start];
        let mut out = BTreeSet::new();
        while let Some(v) = stack.pop() {
            if let Some(l) = self.leaf_label.get(&v) {
                out.insert(l.clone());
            }
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        out
    }

    /// The partition of the leaf labels left by removing an internal node,
    /// one part per neighbor in ascending order.
    pub fn node_partition(&self, v: usize) -> Result<Vec<BTreeSet<String>>> {
        if v >= self.nodes {
            return Err(Error::BadInput(format!("node {v} out of range")));
        }
        if !self.is_internal(v) {
            return Err(Error::NotInternal(format!("node {v} is a leaf")));
        }
        Ok(self
            .neighbors(v)
            .into_iter()
            .map(|w| self.side_labels(w, v))
            .collect())
    }

    /// The bipartition of the leaf labels across tree edge `i`, in the
    /// stored end order.
    pub fn edge_partition(&self, i: usize) -> Result<(BTreeSet<String>, BTreeSet<String>)> {
        let &(u, v) = self
            .edges
            .get(i)
            .ok_or_else(|| Error::BadInput(format!("tree edge {i} out of range")))?;
        Ok((self.side_labels(u, v), self.side_labels(v, u)))
    }
}

/// Structural validity: a tree whose labelled nodes are exactly the nodes
/// of degree at most one, bijectively labelled by the hypergraph's edges.
pub fn validate_ptree(h: &Hypergraph, t: &PartitioningTree) -> ValidationReport {
    let mut report = ValidationReport::default();
    if !t.is_tree() {
        report.push("not a tree");
        return report;
    }
    for (&v, label) in &t.leaf_label {
        if v >= t.nodes {
            report.push(format!("labelled node {v} out of range"));
        } else if t.degree(v) > 1 {
            report.push(format!("labelled node {v} has degree {}", t.degree(v)));
        }
        if h.edge_by_label(label).is_none() {
            report.push(format!("label {label:?} is not a hyperedge"));
        }
    }
    for v in 0..t.nodes {
        if t.degree(v) <= 1 && !t.leaf_label.contains_key(&v) {
            report.push(format!("leaf {v} is unlabelled"));
        }
    }
    let labels: BTreeSet<&String> = t.leaf_label.values().collect();
    if labels.len() != t.leaf_label.len() {
        report.push("duplicate leaf labels");
    }
    if labels.len() != h.n_edges() {
        report.push(format!(
            "{} leaves for {} hyperedges",
            labels.len(),
            h.n_edges()
        ));
    }
    report
}

/// Bags: a leaf keeps the ends of its edge, an internal node takes the
/// border of its node partition.
pub fn as_tree_decomposition(h: &Hypergraph, t: &PartitioningTree) -> Result<TreeDecomposition> {
    validate_ptree(h, t).into_result(Error::BadTree)?;
    let mut bags = Vec::with_capacity(t.nodes);
    for v in 0..t.nodes {
        if let Some(label) = t.leaf_label.get(&v) {
            bags.push(h.ends_named(label)?);
        } else {
            let parts = t.node_partition(v)?;
            let mut count: BTreeMap<String, usize> = BTreeMap::new();
            for part in &parts {
                let union = h.union_of(part)?;
                for v in union {
                    *count.entry(h.vertex_name(v).to_string()).or_insert(0) += 1;
                }
            }
            bags.push(
                count
                    .into_iter()
                    .filter(|(_, c)| *c >= 2)
                    .map(|(name, _)| name)
                    .collect(),
            );
        }
    }
    let td = TreeDecomposition {
        bags,
        edges: t.edges.clone(),
    };
    validate_td(h, &td).into_result(|m| {
        Error::Internal(format!("partitioning tree yields invalid decomposition: {m}"))
    })?;
    Ok(td)
}

/// Width of the tree seen as a tree decomposition.
pub fn ptree_width(h: &Hypergraph, t: &PartitioningTree) -> Result<usize> {
    Ok(as_tree_decomposition(h, t)?.width())
}

/// Joins trees of the two contractions of `{a, b}` into a tree of `h`:
/// the leaves labelled by the contraction edges disappear and their
/// neighbours are joined. Contraction leaves are recognized as the unique
/// leaf of each tree whose label is not an edge of `h`.
pub fn merge_ptrees(
    h: &Hypergraph,
    a: &BTreeSet<String>,
    b: &BTreeSet<String>,
    ta: &PartitioningTree,
    tb: &PartitioningTree,
) -> Result<PartitioningTree> {
    let labels = h.edge_label_set();
    let find_contraction = |t: &PartitioningTree, expect: &BTreeSet<String>| -> Result<usize> {
        let foreign: Vec<usize> = t
            .leaf_label
            .iter()
            .filter(|(_, l)| !labels.contains(*l))
            .map(|(&v, _)| v)
            .collect();
        let [leaf] = foreign[..] else {
            return Err(Error::BadInput(format!(
                "expected exactly one contraction leaf, found {}",
                foreign.len()
            )));
        };
        let own: BTreeSet<String> = t
            .leaf_label
            .iter()
            .filter(|(&v, _)| v != leaf)
            .map(|(_, l)| l.clone())
            .collect();
        if &own != expect {
            return Err(Error::BadInput(format!(
                "tree carries labels {own:?}, expected {expect:?}"
            )));
        }
        Ok(leaf)
    };
    // The tree of the contraction of a keeps the edges of b, and the other
    // way round.
    let la = find_contraction(ta, b)?;
    let lb = find_contraction(tb, a)?;
    let na = *ta.neighbors(la).first().ok_or_else(|| {
        Error::BadInput("contraction leaf has no neighbour".into())
    })?;
    let nb = *tb.neighbors(lb).first().ok_or_else(|| {
        Error::BadInput("contraction leaf has no neighbour".into())
    })?;
    // Renumber: ta without la, then tb without lb.
    let map_a: Vec<Option<usize>> = {
        let mut next = 0;
        (0..ta.nodes)
            .map(|v| {
                if v == la {
                    None
                } else {
                    let id = next;
                    next += 1;
                    Some(id)
                }
            })
            .collect()
    };
    let offset = ta.nodes - 1;
    let map_b: Vec<Option<usize>> = {
        let mut next = offset;
        (0..tb.nodes)
            .map(|v| {
                if v == lb {
                    None
                } else {
                    let id = next;
                    next += 1;
                    Some(id)
                }
            })
            .collect()
    };
    let mut edges = Vec::new();
    for &(x, y) in &ta.edges {
        if let (Some(x2), Some(y2)) = (map_a[x], map_a[y]) {
            edges.push((x2, y2));
        }
    }
    for &(x, y) in &tb.edges {
        if let (Some(x2), Some(y2)) = (map_b[x], map_b[y]) {
            edges.push((x2, y2));
        }
    }
    edges.push((map_a[na].unwrap(), map_b[nb].unwrap()));
    let mut leaf_label = BTreeMap::new();
    for (&v, l) in &ta.leaf_label {
        if let Some(v2) = map_a[v] {
            leaf_label.insert(v2, l.clone());
        }
    }
    for (&v, l) in &tb.leaf_label {
        if let Some(v2) = map_b[v] {
            leaf_label.insert(v2, l.clone());
        }
    }
    let merged = PartitioningTree {
        nodes: ta.nodes + tb.nodes - 2,
        edges,
        leaf_label,
    };
    validate_ptree(h, &merged)
        .into_result(|m| Error::Internal(format!("merge produced an invalid tree: {m}")))?;
    Ok(merged)
}

/// Reads a tree of an embedded hypergraph as a tree of its dual. Edge
/// labels carry over unchanged, so the same tree works once it checks out
/// against the dual hypergraph.
pub fn dual_ptree(t: &PartitioningTree, lam: &EmbeddedHypergraph) -> Result<PartitioningTree> {
    let dual = lam.hyper_dual()?;
    let h_dual = dual.underlying_hypergraph()?;
    validate_ptree(&h_dual, t).into_result(Error::BadTree)?;
    Ok(t.clone())
}

/// Checks the two face-structure conditions making a partitioning tree a
/// p-tree: every non-connected edge partition happens across a troublesome
/// leaf, and every internal node of degree other than three is the centre
/// of the partition induced by a neighbouring troublesome edge.
pub fn is_ptree(s: &PiStructure, t: &PartitioningTree) -> Result<(bool, Vec<String>)> {
    validate_ptree(&s.h, t).into_result(Error::BadTree)?;
    let troublesome: BTreeSet<String> = s.troublesome_edges().into_iter().collect();
    let mut cert = Vec::new();
    let is_troublesome_leaf = |v: usize| {
        t.leaf_label
            .get(&v)
            .is_some_and(|l| troublesome.contains(l))
    };
    for (i, &(u, v)) in t.edges.iter().enumerate() {
        let (pa, pb) = t.edge_partition(i)?;
        for side in [&pa, &pb] {
            if !s.is_pi_connected(side)? && !is_troublesome_leaf(u) && !is_troublesome_leaf(v) {
                cert.push(format!(
                    "edge partition across tree edge {i} has a non-connected side {side:?} \
                     and no troublesome leaf"
                ));
            }
        }
    }
    for v in 0..t.nodes {
        if !t.is_internal(v) || t.degree(v) == 3 {
            continue;
        }
        let parts: BTreeSet<BTreeSet<String>> =
            t.node_partition(v)?.into_iter().collect();
        let excused = t.neighbors(v).into_iter().any(|w| {
            t.leaf_label.get(&w).is_some_and(|l| {
                troublesome.contains(l)
                    && s.e_partition(l)
                        .map(|p| p.into_iter().collect::<BTreeSet<_>>() == parts)
                        .unwrap_or(false)
            })
        });
        if !excused {
            cert.push(format!(
                "internal node {v} has degree {} and is not a troublesome star",
                t.degree(v)
            ));
        }
    }
    Ok((cert.is_empty(), cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::tests::{single_triple_edge, theta_hypergraph};
    use crate::embed::EmbeddedHypergraph;
    use crate::hypergraph::exact_treewidth;
    use crate::testutil::planar_map;

    fn set(labels: &[&str]) -> BTreeSet<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    fn strings(labels: &[&str]) -> Vec<String> {
        labels.iter().map(|s| s.to_string()).collect()
    }

    fn path_hypergraph() -> Hypergraph {
        Hypergraph::new(
            strings(&["a", "b", "c", "d"]),
            vec![
                ("ab".into(), vec!["a".into(), "b".into()]),
                ("bc".into(), vec!["b".into(), "c".into()]),
                ("cd".into(), vec!["c".into(), "d".into()]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn partitions_of_stars_and_caterpillars() {
        let star = PartitioningTree::star(&strings(&["e1", "e2", "e3"]));
        assert_eq!(
            star.node_partition(0).unwrap(),
            vec![set(&["e1"]), set(&["e2"]), set(&["e3"])]
        );
        assert!(matches!(star.node_partition(1), Err(Error::NotInternal(_))));
        assert!(matches!(star.node_partition(9), Err(Error::BadInput(_))));

        // Caterpillar: 0 holds ab, bc; 3 holds cd through a degree-2 node.
        let cat = PartitioningTree {
            nodes: 5,
            edges: vec![(0, 1), (0, 2), (0, 3), (3, 4)],
            leaf_label: [(1, "ab".into()), (2, "bc".into()), (4, "cd".into())]
                .into_iter()
                .collect(),
        };
        assert_eq!(
            cat.node_partition(3).unwrap(),
            vec![set(&["ab", "bc"]), set(&["cd"])]
        );
        let (left, right) = cat.edge_partition(2).unwrap();
        assert_eq!(left, set(&["ab", "bc"]));
        assert_eq!(right, set(&["cd"]));
    }

    #[test]
    fn decomposition_widths_of_small_trees() {
        let triangle = Hypergraph::new(
            strings(&["a", "b", "c"]),
            vec![
                ("ab".into(), vec!["a".into(), "b".into()]),
                ("bc".into(), vec!["b".into(), "c".into()]),
                ("ca".into(), vec!["c".into(), "a".into()]),
            ],
        )
        .unwrap();
        let star = PartitioningTree::star(&strings(&["ab", "bc", "ca"]));
        let td = as_tree_decomposition(&triangle, &star).unwrap();
        assert_eq!(td.bags[0], set(&["a", "b", "c"]));
        assert_eq!(ptree_width(&triangle, &star).unwrap(), 2);

        let theta = theta_hypergraph().underlying_hypergraph().unwrap();
        let star = PartitioningTree::star(&strings(&["p", "q", "r"]));
        let td = as_tree_decomposition(&theta, &star).unwrap();
        assert_eq!(td.bags[0], set(&["u", "v"]));
        assert_eq!(ptree_width(&theta, &star).unwrap(), 1);

        let path = path_hypergraph();
        let cat = PartitioningTree {
            nodes: 5,
            edges: vec![(0, 1), (0, 2), (0, 3), (3, 4)],
            leaf_label: [(1, "ab".into()), (2, "bc".into()), (4, "cd".into())]
                .into_iter()
                .collect(),
        };
        assert_eq!(ptree_width(&path, &cat).unwrap(), 1);

        let single = single_triple_edge().underlying_hypergraph().unwrap();
        let t = PartitioningTree::single("e");
        let td = as_tree_decomposition(&single, &t).unwrap();
        assert_eq!(td.bags, vec![set(&["a", "b", "c"])]);
        assert_eq!(ptree_width(&single, &t).unwrap(), 2);
    }

    #[test]
    fn structural_validation_catches_bad_trees() {
        let path = path_hypergraph();
        // Unlabelled leaf.
        let t = PartitioningTree {
            nodes: 4,
            edges: vec![(0, 1), (0, 2), (0, 3)],
            leaf_label: [(1, "ab".into()), (2, "bc".into())].into_iter().collect(),
        };
        assert!(!validate_ptree(&path, &t).is_valid());
        // Label on an internal node.
        let t = PartitioningTree {
            nodes: 4,
            edges: vec![(0, 1), (0, 2), (0, 3)],
            leaf_label: [
                (0, "cd".into()),
                (1, "ab".into()),
                (2, "bc".into()),
                (3, "cd".into()),
            ]
            .into_iter()
            .collect(),
        };
        assert!(!validate_ptree(&path, &t).is_valid());
        // Disconnected.
        let t = PartitioningTree {
            nodes: 3,
            edges: vec![(0, 1), (0, 1)],
            leaf_label: [(1, "ab".into()), (2, "bc".into())].into_iter().collect(),
        };
        assert!(!validate_ptree(&path, &t).is_valid());
        assert!(matches!(
            as_tree_decomposition(&path, &t),
            Err(Error::BadTree(_))
        ));
    }

    #[test]
    fn merge_keeps_width_and_validity() {
        let theta = theta_hypergraph().underlying_hypergraph().unwrap();
        let a = set(&["p"]);
        let b = set(&["q", "r"]);
        let ha = theta.contract(&a, "eA").unwrap();
        let hb = theta.contract(&b, "eB").unwrap();
        let ta = PartitioningTree::star(&strings(&["q", "r", "eA"]));
        let tb = PartitioningTree::pair("p", "eB");
        let merged = merge_ptrees(&theta, &a, &b, &ta, &tb).unwrap();
        assert!(validate_ptree(&theta, &merged).is_valid());
        let wa = ptree_width(&ha, &ta).unwrap();
        let wb = ptree_width(&hb, &tb).unwrap();
        assert_eq!(
            ptree_width(&theta, &merged).unwrap(),
            wa.max(wb),
            "merge must keep the width"
        );
        // Degenerate side: the pair tree contributes just its leaf.
        assert_eq!(merged.nodes, ta.nodes + tb.nodes - 2);

        // Wrong label sets are refused.
        assert!(matches!(
            merge_ptrees(&theta, &b, &a, &ta, &tb),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn dual_tree_of_theta_star_has_width_two() {
        let lam = theta_hypergraph();
        let star = PartitioningTree::star(&strings(&["p", "q", "r"]));
        let dual_t = dual_ptree(&star, &lam).unwrap();
        assert_eq!(dual_t.nodes, star.nodes);
        let h_dual = lam.hyper_dual().unwrap().underlying_hypergraph().unwrap();
        assert_eq!(ptree_width(&h_dual, &dual_t).unwrap(), 2);
        // Matches the exact tree-width of the dual triangle.
        assert_eq!(exact_treewidth(&h_dual).unwrap().0, 2);
    }

    #[test]
    fn ptree_conditions_on_theta_and_path() {
        let s_theta = PiStructure::from_embedding(&theta_hypergraph()).unwrap();
        let star = PartitioningTree::star(&strings(&["p", "q", "r"]));
        let (ok, cert) = is_ptree(&s_theta, &star).unwrap();
        assert!(ok, "{cert:?}");

        // Path graph: q is troublesome, the star is excused by condition i.
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
        let s_path = PiStructure::from_embedding(&lam).unwrap();
        let star = PartitioningTree::star(&strings(&["p", "q", "r"]));
        let (ok, cert) = is_ptree(&s_path, &star).unwrap();
        assert!(ok, "{cert:?}");

        // Separating p and r away from the troublesome leaf q violates
        // condition i at the spine edge (and condition ii at the spine).
        let bad = PartitioningTree {
            nodes: 5,
            edges: vec![(0, 1), (0, 2), (0, 3), (3, 4)],
            leaf_label: [(1, "p".into()), (2, "r".into()), (4, "q".into())]
                .into_iter()
                .collect(),
        };
        let (ok, cert) = is_ptree(&s_path, &bad).unwrap();
        assert!(!ok);
        assert!(!cert.is_empty());
    }

    #[test]
    fn high_degree_stars_need_a_troublesome_excuse() {
        // Four edges around a centre vertex: the face adjacency is a cycle,
        // so nothing is troublesome and a 4-star is rejected.
        let map = planar_map(
            &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)],
            &[(0, 1), (0, 2), (0, 3), (0, 4)],
        );
        let lam = EmbeddedHypergraph::from_graph_embedding(
            &map,
            &["c".into(), "l1".into(), "l2".into(), "l3".into(), "l4".into()],
            &["e1".into(), "e2".into(), "e3".into(), "e4".into()],
        )
        .unwrap();
        let s = PiStructure::from_embedding(&lam).unwrap();
        assert!(s.troublesome_edges().is_empty());
        let star4 = PartitioningTree::star(&strings(&["e1", "e2", "e3", "e4"]));
        let (ok, cert) = is_ptree(&s, &star4).unwrap();
        assert!(!ok);
        assert_eq!(cert.len(), 1);

        // A ternary tree over the same edges passes, pairing neighbours in
        // the rotation so every side stays connected.
        let ternary = PartitioningTree {
            nodes: 6,
            edges: vec![(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)],
            leaf_label: [
                (1, "e1".into()),
                (2, "e2".into()),
                (4, "e3".into()),
                (5, "e4".into()),
            ]
            .into_iter()
            .collect(),
        };
        let (ok, cert) = is_ptree(&s, &ternary).unwrap();
        assert!(ok, "{cert:?}");
    }

    #[test]
    fn merged_ptrees_stay_ptrees() {
        // Lemma-style check: merge trees of the two contractions of a
        // connected bipartition of the theta graph and re-test the result.
        let lam = theta_hypergraph();
        let s = PiStructure::from_embedding(&lam).unwrap();
        let a = set(&["p"]);
        let b = set(&["q", "r"]);
        let sa = s.contract(&a, "eA").unwrap();
        let sb = s.contract(&b, "eB").unwrap();
        let ta = PartitioningTree::star(&strings(&["q", "r", "eA"]));
        let tb = PartitioningTree::pair("p", "eB");
        assert!(is_ptree(&sa, &ta).unwrap().0);
        assert!(is_ptree(&sb, &tb).unwrap().0);
        let merged = merge_ptrees(&s.h, &a, &b, &ta, &tb).unwrap();
        let (ok, cert) = is_ptree(&s, &merged).unwrap();
        assert!(ok, "{cert:?}");
    }

    #[test]
    fn single_leaf_tree_is_a_ptree() {
        let s = PiStructure::from_embedding(&single_triple_edge()).unwrap();
        let t = PartitioningTree::single("e");
        let (ok, cert) = is_ptree(&s, &t).unwrap();
        assert!(ok, "{cert:?}");
    }
}
