//! Composite 4-point Gauss–Legendre rule and deterministic summation.

use rayon::prelude::*;

const GL4_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL4_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_85,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_85,
];

/// Pairwise (tree) summation; the result depends only on the input order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (l, r) = xs.split_at(n / 2);
            pairwise_sum(l) + pairwise_sum(r)
        }
    }
}

/// Panel boundaries: `panels` equal pieces of `[a, b]`, refined at every
/// breakpoint that falls strictly inside.
pub fn panel_edges(a: f64, b: f64, panels: usize, breakpoints: &[f64]) -> Vec<f64> {
    let panels = panels.max(1);
    let mut edges: Vec<f64> =
        (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
    edges.extend(breakpoints.iter().copied().filter(|&x| x > a && x < b));
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * (b - a));
    edges
}

/// `∫_a^b f` by the 4-point rule on each panel. Panels are evaluated in
/// parallel and combined by [`pairwise_sum`].
pub fn gauss_legendre_composite<F>(f: F, edges: &[f64]) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let panel_values: Vec<f64> = edges
        .par_windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let s: f64 = GL4_NODES
                .iter()
                .zip(GL4_WEIGHTS)
                .map(|(&x, w)| w * f(mid + half * x))
                .sum();
            half * s
        })
        .collect();
    pairwise_sum(&panel_values)
}

/// Nodes and weights of the composite rule on `edges`, panel by panel.
pub fn gauss_legendre_nodes(edges: &[f64]) -> Vec<(f64, f64)> {
    edges
        .windows(2)
        .flat_map(|w| {
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[1] + w[0]);
            GL4_NODES.iter().zip(GL4_WEIGHTS).map(move |(&x, wt)| (mid + half * x, half * wt))
        })
        .collect()
}
