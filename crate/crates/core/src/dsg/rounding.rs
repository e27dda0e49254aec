use crate::error::{invalid, Result};
use crate::graph::{Density, Graph};

/// `min_σ ⟨x, q(σ)⟩ = Σ_{uv ∈ E} min(x_u, x_v)` for nonnegative `x`.
pub fn cover_value(g: &Graph, x: &[f64]) -> f64 {
    g.edges().map(|(u, v)| x[u].min(x[v])).sum()
}

/// Densest threshold set `{v : x_v ≥ τ}` over all thresholds `τ > 0` taken
/// from the entries of `x`.
pub fn best_threshold_set(g: &Graph, x: &[f64]) -> Result<(Vec<usize>, Density)> {
    if x.len() != g.n() {
        return Err(invalid(
            "x",
            format!("{} entries for {} vertices", x.len(), g.n()),
        ));
    }
    if x.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(invalid("x", "entries must be finite and nonnegative"));
    }
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| x[v] > 0.0).collect();
    if order.is_empty() {
        return Err(invalid("x", "no positive entry"));
    }
    order.sort_by(|&a, &b| x[b].total_cmp(&x[a]).then(a.cmp(&b)));
    let mut inside = vec![false; g.n()];
    let mut edges = 0u64;
    let mut best: Option<(usize, Density)> = None;
    for (i, &v) in order.iter().enumerate() {
        edges += g.neighbors(v).iter().filter(|&&u| inside[u]).count() as u64;
        inside[v] = true;
        // Only evaluate once the whole tie group at this value is in.
        if order.get(i + 1).is_some_and(|&w| x[w] == x[v]) {
            continue;
        }
        let d = Density::new(edges, i as u64 + 1);
        if best.is_none_or(|(_, b)| d > b) {
            best = Some((i + 1, d));
        }
    }
    let (len, d) = best.expect("nonempty");
    let mut set = order[..len].to_vec();
    set.sort_unstable();
    Ok((set, d))
}
