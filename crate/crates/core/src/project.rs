//! Euclidean projections onto the feasible sets used by the bound solver and
//! the SPSA optimizer: the scaled simplex {x >= 0, sum x = total} and its
//! inequality relaxation {x >= 0, sum x <= total}.

/// Projection onto {x >= 0, sum_i x_i = total} by the sorted-threshold rule.
pub fn onto_simplex(x: &[f64], total: f64) -> Vec<f64> {
    assert!(total >= 0.0, "simplex total must be non-negative");
    assert!(!x.is_empty());
    let mut sorted: Vec<f64> = x.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = 0.0;
    let mut tau = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - total) / (j as f64 + 1.0);
        if u - candidate > 0.0 {
            tau = candidate;
        } else {
            break;
        }
    }
    x.iter().map(|&v| (v - tau).max(0.0)).collect()
}

/// Projection onto {x >= 0, sum_i x_i <= total}.
///
/// Clamping to the orthant is the projection when the clamped point already
/// satisfies the budget; otherwise the optimum lies on the simplex face.
pub fn onto_simplex_interior(x: &[f64], total: f64) -> Vec<f64> {
    let clamped: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
    if clamped.iter().sum::<f64>() <= total {
        clamped
    } else {
        onto_simplex(x, total)
    }
}
