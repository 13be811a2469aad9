//! Bipartite-graph encoding: set vertices `v_i`, element vertices `u_x`, and
//! an edge whenever `x ∈ S_i`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::instance::SetSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteEncoding {
    pub m: usize,
    pub u: usize,
    /// Vertex `v_i` is `i - 1`, vertex `u_x` is `m + x - 1`.
    pub adjacency: Vec<Vec<usize>>,
    pub edges: usize,
}

pub fn distoracle_encode(sys: &SetSystem) -> BipartiteEncoding {
    let m = sys.m();
    let u = sys.universe() as usize;
    let mut adjacency = vec![Vec::new(); m + u];
    for (i, s) in sys.sets().iter().enumerate() {
        for &x in s {
            let ux = m + x as usize - 1;
            adjacency[i].push(ux);
            adjacency[ux].push(i);
        }
    }
    BipartiteEncoding {
        m,
        u,
        adjacency,
        edges: sys.total(),
    }
}

impl BipartiteEncoding {
    pub fn vertices(&self) -> usize {
        self.m + self.u
    }

    pub fn average_degree(&self) -> f64 {
        if self.vertices() == 0 {
            0.0
        } else {
            2.0 * self.edges as f64 / self.vertices() as f64
        }
    }

    /// Edges `(i, x)` for `x ∈ S_i`, in set order.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        (0..self.m)
            .flat_map(|i| self.adjacency[i].iter().map(move |&w| (i + 1, w - self.m + 1)))
            .collect()
    }

    /// Two-colourability check.
    pub fn is_bipartite(&self) -> bool {
        self.adjacency
            .iter()
            .enumerate()
            .all(|(v, ns)| ns.iter().all(|&w| (v < self.m) != (w < self.m)))
    }
}

/// Shortest-path length between set vertices `v_i` and `v_j`, `None` when
/// unreachable.
pub fn bfs_distance(enc: &BipartiteEncoding, i: usize, j: usize) -> Result<Option<usize>> {
    for k in [i, j] {
        if k == 0 || k > enc.m {
            return Err(Error::IndexOutOfRange { index: k, m: enc.m });
        }
    }
    let (src, dst) = (i - 1, j - 1);
    let mut dist = vec![usize::MAX; enc.vertices()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        if v == dst {
            return Ok(Some(dist[v]));
        }
        for &w in &enc.adjacency[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(None)
}
