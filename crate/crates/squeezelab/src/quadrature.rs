//! Gauss–Hermite quadrature and Gaussian-envelope integrals.
//!
//! A K-node rule integrates ∫ e^{−t²}·f(t) dt exactly (to rounding) whenever f
//! is a polynomial of degree ≤ 2K−1. Every waveform in this crate is a
//! Gaussian envelope times a polynomial, so all norms, moments, overlaps, and
//! residual integrals reduce to such weighted polynomial integrals after
//! completing the square. That makes this module the numerical oracle for the
//! closed forms elsewhere: agreement is exactness, not luck.
//!
//! Nodes are the roots of the degree-K orthonormal Hermite polynomial, found
//! by Newton iteration on the normalized three-term recurrence (which stays
//! O(1) in magnitude, so no overflow at any supported K).

/// Gauss–Hermite rule: nodes t_i (ascending) and weights w_i for the weight
/// function e^{−t²} on the whole real line.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Largest supported rule size; accuracy and the seed heuristics for the
/// Newton solver are validated (machine precision on moment integrals) up to
/// here. Larger rules would need better root seeds, and beyond ~350 nodes the
/// extreme weights (∝ e^{−t²} with t² > 700) leave the f64 range entirely.
pub const MAX_NODES: usize = 192;

impl GaussHermite {
    pub fn new(node_count: usize) -> Self {
        assert!(
            (1..=MAX_NODES).contains(&node_count),
            "node count {node_count} outside 1..={MAX_NODES}"
        );
        let n = node_count;
        let nf = n as f64;
        let half = (n + 1) / 2;
        // Positive roots in descending order, then mirrored.
        let mut positive = vec![0.0f64; half];
        let mut pp_at_root = vec![0.0f64; half];
        let mut z = 0.0f64;
        for i in 0..half {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * positive[0],
                3 => 1.91 * z - 0.91 * positive[1],
                _ => 2.0 * z - positive[i - 2],
            };
            let is_center = n % 2 == 1 && i == half - 1;
            if is_center {
                z = 0.0; // odd rule: middle root is exactly zero by symmetry
            }
            let mut pp = 0.0;
            let mut converged = false;
            let mut previous = f64::NAN;
            for _ in 0..200 {
                let (pn, pn_minus_1) = orthonormal_hermite_pair(n, z);
                pp = (2.0 * nf).sqrt() * pn_minus_1;
                let step = pn / pp;
                let next = z - step;
                // Done on a small step, a fixed point, or a two-cycle at the
                // last bit (Newton often oscillates between adjacent floats).
                if step.abs() <= 1e-15 * z.abs().max(1.0) || next == z || next == previous {
                    z = next;
                    converged = true;
                    break;
                }
                previous = z;
                z = next;
            }
            assert!(converged, "Hermite root {i} of rule {n} did not converge");
            if is_center {
                z = 0.0;
                let (_, pn_minus_1) = orthonormal_hermite_pair(n, z);
                pp = (2.0 * nf).sqrt() * pn_minus_1;
            }
            positive[i] = z;
            pp_at_root[i] = pp;
        }
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        for i in 0..half {
            let w = 2.0 / (pp_at_root[i] * pp_at_root[i]);
            // positive[i] is the (i+1)-th largest root
            nodes[n - 1 - i] = positive[i];
            weights[n - 1 - i] = w;
            nodes[i] = -positive[i];
            weights[i] = w;
        }
        GaussHermite { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// ∫ e^{−t²} f(t) dt ≈ Σ w_i f(t_i); exact for polynomial f of degree
    /// ≤ 2·len − 1.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }
}

/// Evaluates the orthonormal Hermite polynomials (weight e^{−t²}) at z,
/// returning (p_n, p_{n−1}). Recurrence: p_{j} = z·√(2/j)·p_{j−1} − √((j−1)/j)·p_{j−2},
/// p_0 = π^{−1/4}.
fn orthonormal_hermite_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = std::f64::consts::PI.powf(-0.25);
    let mut p2 = 0.0f64;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

/// ∫ exp(−(e2·x² + 2·e1·x + e0)) · poly(x) dx with nodes mapped as
/// x_i = center + t_i/scale. The leftover exponent −(e2x²+2e1x+e0) + t² is
/// combined analytically per node, so nothing overflows as long as the mapping
/// is no narrower than the envelope (scale² ≤ e2). Exact (to rounding) for
/// polynomial `poly` when the mapping matches the envelope exactly.
pub fn integrate_mapped(
    center: f64,
    scale: f64,
    envelope: (f64, f64, f64),
    rule: &GaussHermite,
    poly: impl Fn(f64) -> f64,
) -> f64 {
    let (e2, e1, e0) = envelope;
    debug_assert!(scale > 0.0 && e2 > 0.0);
    debug_assert!(
        scale * scale <= e2 * (1.0 + 1e-9),
        "mapping narrower than envelope overflows the compensation factor"
    );
    let mut sum = 0.0;
    for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
        let x = center + t / scale;
        let residual_exponent = t * t - (e2 * x * x + 2.0 * e1 * x + e0);
        sum += w * residual_exponent.exp() * poly(x);
    }
    sum / scale
}

/// ∫ exp(−(g2·x² + 2·g1·x + g0)) · poly(x) dx with the natural mapping
/// (center = −g1/g2, scale = √g2). This is the full-line integral of a
/// squared-waveform envelope times a polynomial and is exact to rounding for
/// polynomial degree ≤ 2·len − 1.
pub fn integrate_envelope_product(
    g2: f64,
    g1: f64,
    g0: f64,
    rule: &GaussHermite,
    poly: impl Fn(f64) -> f64,
) -> f64 {
    assert!(g2 > 0.0 && g2.is_finite(), "envelope must be Gaussian, got g2 = {g2}");
    integrate_mapped(-g1 / g2, g2.sqrt(), (g2, g1, g0), rule, poly)
}
