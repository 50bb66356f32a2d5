//! Two-dimensional layout by localized stress majorization.
//!
//! The objective is `sum over edges (i,j) of w_ij * (|p_i - p_j| - d_ij)^2`
//! with `d_ij = 1 - cosine_ij` and `w_ij = cosine_ij`. Each node update
//! minimizes the standard majorizing function at the current positions, so
//! the stress never increases. The final map is centered on the origin and
//! rotated so its first principal axis lies along x.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mapcore::SimilarityGraph;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, Copy)]
pub struct LayoutConfig {
    pub seed: u64,
    pub max_iter: usize,
    /// Stop when the relative stress decrease per sweep falls below this.
    pub tolerance: f64,
}

impl Default for LayoutConfig {
    fn default() -> Self {
        LayoutConfig {
            seed: 42,
            max_iter: 500,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LayoutResult {
    pub coords: Vec<(f64, f64)>,
    /// Stress after initialization, then after every sweep.
    pub stress_history: Vec<f64>,
    pub iterations: usize,
}

fn stress(coords: &[(f64, f64)], edges: &[(usize, usize, f64, f64)]) -> f64 {
    let mut total = 0.0;
    for &(i, j, weight, target) in edges {
        let dx = coords[i].0 - coords[j].0;
        let dy = coords[i].1 - coords[j].1;
        let dist = (dx * dx + dy * dy).sqrt();
        total += weight * (dist - target) * (dist - target);
    }
    total
}

fn center(coords: &mut [(f64, f64)]) {
    let n = coords.len() as f64;
    let cx = coords.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = coords.iter().map(|p| p.1).sum::<f64>() / n;
    for p in coords.iter_mut() {
        p.0 -= cx;
        p.1 -= cy;
    }
}

/// Rotates so the first principal component of the point cloud is the
/// x-axis. The covariance eigenvector's angle is halved out of atan2, which
/// fixes the sign convention deterministically.
fn align_principal_axis(coords: &mut [(f64, f64)]) {
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in coords.iter() {
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    if sxx + syy < 1e-300 {
        return;
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (sin, cos) = (-theta).sin_cos();
    for p in coords.iter_mut() {
        let (x, y) = (p.0, p.1);
        p.0 = cos * x - sin * y;
        p.1 = sin * x + cos * y;
    }
}

/// Lays out a connected similarity graph. Errors on disconnected input;
/// extract the giant component first.
pub fn layout(graph: &SimilarityGraph, config: &LayoutConfig) -> Result<LayoutResult> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::contract("cannot lay out an empty graph"));
    }
    let mut uf = UnionFind::new(n);
    for (i, j, _) in graph.edges() {
        uf.union(i, j);
    }
    if uf.components().len() > 1 {
        return Err(Error::contract(
            "layout requires a connected graph; extract the giant component first",
        ));
    }
    if n == 1 {
        return Ok(LayoutResult {
            coords: vec![(0.0, 0.0)],
            stress_history: vec![0.0],
            iterations: 0,
        });
    }

    // (i, j, weight, target distance)
    let edges: Vec<(usize, usize, f64, f64)> = graph
        .edges()
        .map(|(i, j, cos)| (i, j, cos, 1.0 - cos))
        .collect();
    let adjacency = graph.adjacency();

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut coords: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)))
        .collect();

    let mut history = vec![stress(&coords, &edges)];
    let mut iterations = 0;
    for _ in 0..config.max_iter {
        iterations += 1;
        for i in 0..n {
            let mut weight_sum = 0.0;
            let mut x = 0.0;
            let mut y = 0.0;
            for &(j, cos) in &adjacency[i] {
                let target = 1.0 - cos;
                let dx = coords[i].0 - coords[j].0;
                let dy = coords[i].1 - coords[j].1;
                let dist = (dx * dx + dy * dy).sqrt();
                // Coincident points contribute no direction term.
                let (ux, uy) = if dist > 1e-300 {
                    (dx / dist, dy / dist)
                } else {
                    (0.0, 0.0)
                };
                weight_sum += cos;
                x += cos * (coords[j].0 + target * ux);
                y += cos * (coords[j].1 + target * uy);
            }
            if weight_sum > 0.0 {
                coords[i] = (x / weight_sum, y / weight_sum);
            }
        }
        let current = stress(&coords, &edges);
        let previous = *history.last().unwrap();
        history.push(current);
        if previous - current < config.tolerance * previous || current == 0.0 {
            break;
        }
    }

    center(&mut coords);
    align_principal_axis(&mut coords);
    center(&mut coords);
    Ok(LayoutResult {
        coords,
        stress_history: history,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize, f64)]) -> SimilarityGraph {
        let mut g = SimilarityGraph::new(n);
        for &(i, j, v) in edges {
            g.insert(i, j, v).unwrap();
        }
        g
    }

    fn centroid_norm(coords: &[(f64, f64)]) -> f64 {
        let n = coords.len() as f64;
        let cx = coords.iter().map(|p| p.0).sum::<f64>() / n;
        let cy = coords.iter().map(|p| p.1).sum::<f64>() / n;
        (cx * cx + cy * cy).sqrt()
    }

    #[test]
    fn single_node_sits_at_origin() {
        let g = graph(1, &[]);
        let result = layout(&g, &LayoutConfig::default()).unwrap();
        assert_eq!(result.coords, vec![(0.0, 0.0)]);
    }

    #[test]
    fn two_nodes_sit_at_distance_one_minus_cosine() {
        let cosine = 0.3;
        let g = graph(2, &[(0, 1, cosine)]);
        let result = layout(&g, &LayoutConfig::default()).unwrap();
        let (a, b) = (result.coords[0], result.coords[1]);
        let dist = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        assert!((dist - (1.0 - cosine)).abs() < 1e-9, "distance {dist}");
        assert!(centroid_norm(&result.coords) < 1e-9);
    }

    #[test]
    fn three_node_path_reaches_zero_stress_with_exact_edge_lengths() {
        let c = 0.5;
        let g = graph(3, &[(0, 1, c), (1, 2, c)]);
        let result = layout(&g, &LayoutConfig::default()).unwrap();
        let final_stress = *result.stress_history.last().unwrap();
        assert!(final_stress < 1e-12, "stress {final_stress}");
        for (i, j) in [(0usize, 1usize), (1, 2)] {
            let (a, b) = (result.coords[i], result.coords[j]);
            let dist = ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
            assert!((dist - (1.0 - c)).abs() < 1e-6, "edge ({i},{j}) length {dist}");
        }
        assert!(centroid_norm(&result.coords) < 1e-9);
    }

    #[test]
    fn stress_never_increases() {
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for trial in 0..20 {
            let n = rng.random_range(3..30);
            let mut edges: Vec<(usize, usize, f64)> = (1..n)
                .map(|i| (rng.random_range(0..i), i, rng.random_range(0.05..0.95)))
                .collect();
            for _ in 0..n {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..n);
                if i != j && !edges.iter().any(|&(a, b, _)| (a, b) == (i.min(j), i.max(j))) {
                    edges.push((i.min(j), i.max(j), rng.random_range(0.05..0.95)));
                }
            }
            let g = graph(n, &edges);
            let result = layout(
                &g,
                &LayoutConfig {
                    seed: trial,
                    max_iter: 100,
                    tolerance: 1e-9,
                },
            )
            .unwrap();
            for pair in result.stress_history.windows(2) {
                assert!(
                    pair[1] <= pair[0] * (1.0 + 1e-12) + 1e-15,
                    "stress increased: {:?}",
                    pair
                );
            }
            assert!(centroid_norm(&result.coords) < 1e-9);
        }
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let g = graph(4, &[(0, 1, 0.5), (2, 3, 0.5)]);
        let err = layout(&g, &LayoutConfig::default()).unwrap_err();
        assert!(err.to_string().contains("giant component"));
    }

    #[test]
    fn deterministic_given_seed() {
        let g = graph(4, &[(0, 1, 0.4), (1, 2, 0.6), (2, 3, 0.5), (0, 3, 0.3)]);
        let a = layout(&g, &LayoutConfig::default()).unwrap();
        let b = layout(&g, &LayoutConfig::default()).unwrap();
        assert_eq!(a.coords, b.coords);
    }

    #[test]
    fn principal_axis_lies_along_x() {
        // A path laid out at zero stress spreads mostly along one axis;
        // after alignment the x-variance dominates.
        let g = graph(3, &[(0, 1, 0.5), (1, 2, 0.5)]);
        let result = layout(&g, &LayoutConfig::default()).unwrap();
        let sxx: f64 = result.coords.iter().map(|p| p.0 * p.0).sum();
        let syy: f64 = result.coords.iter().map(|p| p.1 * p.1).sum();
        assert!(sxx >= syy - 1e-12, "sxx {sxx} syy {syy}");
    }
}
