use crate::error::{DsgError, Result};
use crate::graph::{Density, Graph};

/// Charikar's greedy peeling: repeatedly delete a minimum-degree vertex and
/// keep the densest intermediate set. A 2-approximation.
pub fn charikar_greedy(g: &Graph) -> Result<(Vec<usize>, Density)> {
    let n = g.n();
    if n == 0 {
        return Err(DsgError::EmptySet);
    }
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let maxd = g.max_degree();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); maxd + 1];
    for v in 0..n {
        buckets[deg[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut removal_order = Vec::with_capacity(n);
    let mut edges = g.m() as u64;
    let mut best = (0, Density::new(edges, n as u64));
    let mut low = 0;
    for step in 0..n {
        let v = loop {
            while buckets[low].is_empty() {
                low += 1;
            }
            let v = buckets[low].pop().expect("nonempty");
            if !removed[v] && deg[v] == low {
                break v;
            }
        };
        removed[v] = true;
        removal_order.push(v);
        edges -= deg[v] as u64;
        for &u in g.neighbors(v) {
            if !removed[u] {
                deg[u] -= 1;
                buckets[deg[u]].push(u);
                low = low.min(deg[u]);
            }
        }
        let left = n - step - 1;
        if left > 0 {
            let d = Density::new(edges, left as u64);
            if d > best.1 {
                best = (step + 1, d);
            }
        }
    }
    let mut set = removal_order[best.0..].to_vec();
    set.sort_unstable();
    Ok((set, best.1))
}
