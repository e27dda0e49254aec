use crate::error::{DsgError, Result};
use crate::graph::{Density, DirectedDensity, DirectedGraph, Graph, NodeWeightedGraph};

pub const BRUTE_FORCE_LIMIT: usize = 20;
pub const DIRECTED_BRUTE_FORCE_LIMIT: usize = 5;

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Sorted vertex lists compare lexicographically; this is the order of the
/// bit-reversed masks, which is easier to compute directly on the lists.
fn lex_smaller(a: u32, b: u32) -> bool {
    members(a) < members(b)
}

fn check_size(what: &'static str, n: usize, limit: usize) -> Result<()> {
    if n == 0 {
        return Err(DsgError::EmptySet);
    }
    if n > limit {
        return Err(DsgError::TooLarge { what, n, limit });
    }
    Ok(())
}

fn masks(g: &Graph) -> Vec<u32> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect()
}

fn induced(adj: &[u32], mask: u32) -> u64 {
    let mut twice = 0;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        twice += (adj[v] & mask).count_ones() as u64;
        rest &= rest - 1;
    }
    twice / 2
}

/// Densest subgraph by enumerating all subsets. Ties go to the
/// lexicographically smallest sorted vertex list.
pub fn exact_dsg_bruteforce(g: &Graph) -> Result<(Vec<usize>, Density)> {
    check_size("brute-force search", g.n(), BRUTE_FORCE_LIMIT)?;
    let adj = masks(g);
    let mut best = (1u32, Density::zero());
    for mask in 1u32..(1 << g.n()) {
        let d = Density::new(induced(&adj, mask), mask.count_ones() as u64);
        if d > best.1 || (d == best.1 && lex_smaller(mask, best.0)) {
            best = (mask, d);
        }
    }
    Ok((members(best.0), best.1))
}

/// Node-weighted densest subgraph `|E(S)|/c(S)` by enumeration.
pub fn exact_weighted_bruteforce(g: &NodeWeightedGraph) -> Result<(Vec<usize>, f64)> {
    check_size("brute-force search", g.n(), BRUTE_FORCE_LIMIT)?;
    let adj = masks(g.graph());
    let c = g.costs();
    let mut best = (1u32, f64::NEG_INFINITY);
    for mask in 1u32..(1 << g.n()) {
        let cost: f64 = members(mask).iter().map(|&v| c[v]).sum();
        let d = induced(&adj, mask) as f64 / cost;
        if d > best.1 || (d == best.1 && lex_smaller(mask, best.0)) {
            best = (mask, d);
        }
    }
    Ok((members(best.0), best.1))
}

/// Directed densest subgraph `|E(S,T)|/sqrt(|S||T|)` over all pairs of
/// nonempty sets.
pub fn exact_directed_bruteforce(
    g: &DirectedGraph,
) -> Result<(Vec<usize>, Vec<usize>, DirectedDensity)> {
    check_size(
        "directed brute-force search",
        g.n(),
        DIRECTED_BRUTE_FORCE_LIMIT,
    )?;
    let out: Vec<u32> = (0..g.n())
        .map(|v| g.out_neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let full = 1u32 << g.n();
    let mut best = (
        1u32,
        1u32,
        DirectedDensity {
            arcs: 0,
            s: 1,
            t: 1,
        },
    );
    for s in 1..full {
        for t in 1..full {
            let arcs: u64 = members(s)
                .iter()
                .map(|&u| (out[u] & t).count_ones() as u64)
                .sum();
            let d = DirectedDensity {
                arcs,
                s: s.count_ones() as u64,
                t: t.count_ones() as u64,
            };
            if d > best.2 {
                best = (s, t, d);
            }
        }
    }
    Ok((members(best.0), members(best.1), best.2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(
            exact_dsg_bruteforce(&Graph::complete(4)).unwrap().1,
            Density::new(3, 2)
        );
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap();
        assert_eq!(exact_dsg_bruteforce(&g).unwrap().1, Density::new(7, 6));
        let k5 = Graph::complete(5);
        let edges: Vec<_> = k5.edges().filter(|&e| e != (0, 1)).collect();
        let g = Graph::new(5, &edges).unwrap();
        assert_eq!(exact_dsg_bruteforce(&g).unwrap().1, Density::new(9, 5));
        let c6 = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        assert_eq!(exact_dsg_bruteforce(&c6).unwrap().1, Density::new(1, 1));
    }

    #[test]
    fn ties_and_empty_graphs() {
        let (s, d) = exact_dsg_bruteforce(&Graph::empty(3)).unwrap();
        assert_eq!((s, d), (vec![0], Density::zero()));
        let two = Graph::new(6, &[(3, 4), (4, 5), (3, 5), (0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(exact_dsg_bruteforce(&two).unwrap().0, vec![0, 1, 2]);
        assert!(exact_dsg_bruteforce(&Graph::empty(0)).is_err());
        assert!(matches!(
            exact_dsg_bruteforce(&Graph::empty(21)),
            Err(DsgError::TooLarge { .. })
        ));
    }

    #[test]
    fn weighted_and_directed() {
        let g = NodeWeightedGraph::new(Graph::complete(3), vec![1.0, 1.0, 2.0]).unwrap();
        let (s, d) = exact_weighted_bruteforce(&g).unwrap();
        assert_eq!((s, d), (vec![0, 1, 2], 0.75));
        let d = DirectedGraph::new(3, &[(0, 1), (0, 2)]).unwrap();
        let (s, t, best) = exact_directed_bruteforce(&d).unwrap();
        assert_eq!((s, t), (vec![0], vec![1, 2]));
        assert!((best.value() - 2f64.sqrt()).abs() < 1e-15);
    }
}
