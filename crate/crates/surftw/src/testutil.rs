//! Shared helpers for unit tests.

use crate::map::{MapData, SurfaceMap};

/// Builds the map of a straight-line planar drawing: the rotation at each
/// vertex is the counterclockwise order of its neighbors by angle. The
/// drawing must be crossing-free for the result to be planar; tests assert
/// the genus they expect.
pub(crate) fn planar_map(coords: &[(f64, f64)], edges: &[(usize, usize)]) -> SurfaceMap {
    let n = coords.len();
    let darts = 2 * edges.len();
    let mut edge_inv = vec![0usize; darts];
    let mut at_vertex: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        assert_ne!(a, b, "planar_map does not support loops");
        edge_inv[2 * i] = 2 * i + 1;
        edge_inv[2 * i + 1] = 2 * i;
        let angle_ab = (coords[b].1 - coords[a].1).atan2(coords[b].0 - coords[a].0);
        let angle_ba = (coords[a].1 - coords[b].1).atan2(coords[a].0 - coords[b].0);
        at_vertex[a].push((angle_ab, 2 * i));
        at_vertex[b].push((angle_ba, 2 * i + 1));
    }
    let mut rotation = vec![0usize; darts];
    for list in at_vertex.iter_mut() {
        assert!(!list.is_empty(), "isolated vertex in planar_map");
        list.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        for (j, &(_, d)) in list.iter().enumerate() {
            rotation[d] = list[(j + 1) % list.len()].1;
        }
    }
    SurfaceMap::new(MapData {
        darts,
        edge_inv,
        rotation,
        signature: vec![1; edges.len()],
    })
    .unwrap()
}
