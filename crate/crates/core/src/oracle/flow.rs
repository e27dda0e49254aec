use crate::error::{DsgError, Result};
use crate::graph::{Density, Graph};
use std::collections::VecDeque;

/// Dinic's max-flow on integer capacities.
struct Network {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Network {
    fn new(n: usize) -> Self {
        Network {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: i64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }

    fn dfs(&mut self, u: usize, t: usize, f: i64) -> i64 {
        if u == t {
            return f;
        }
        while self.iter[u] < self.head[u].len() {
            let e = self.head[u][self.iter[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && self.level[v] == self.level[u] + 1 {
                let d = self.dfs(v, t, f.min(self.cap[e]));
                if d > 0 {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }
}

/// `max_S (q·|E(S)| − p·|S|)` and a maximising set, via a closure network:
/// source → edge (cap q), edge → endpoints (∞), vertex → sink (cap p).
fn best_surplus(g: &Graph, p: i64, q: i64) -> (i64, Vec<usize>) {
    let (n, m) = (g.n(), g.m());
    let (s, t) = (n + m, n + m + 1);
    let mut net = Network::new(n + m + 2);
    let inf = q * m as i64 + 1;
    for (i, (u, v)) in g.edges().enumerate() {
        net.add(s, n + i, q);
        net.add(n + i, u, inf);
        net.add(n + i, v, inf);
    }
    for v in 0..n {
        net.add(v, t, p);
    }
    let cut = net.max_flow(s, t);
    net.bfs(s);
    let set: Vec<usize> = (0..n).filter(|&v| net.level[v] >= 0).collect();
    (q * m as i64 - cut, set)
}

/// Exact densest subgraph by parametric min-cuts (Dinkelbach iteration on
/// exact rationals, starting from the whole vertex set).
pub fn exact_dsg_flow(g: &Graph) -> Result<(Vec<usize>, Density)> {
    if g.n() == 0 {
        return Err(DsgError::EmptySet);
    }
    if g.m() == 0 {
        return Ok((vec![0], Density::zero()));
    }
    let mut set: Vec<usize> = (0..g.n()).collect();
    let mut best = Density::new(g.m() as u64, g.n() as u64);
    loop {
        let (surplus, s) = best_surplus(g, best.edges as i64, best.size as i64);
        if surplus <= 0 {
            return Ok((set, best));
        }
        let d = g.density(&s)?;
        debug_assert!(d > best);
        set = s;
        best = d;
    }
}
