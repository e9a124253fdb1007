/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
/// Exact for polynomials up to degree 2n-1.
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0f64;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0f64; n];
        let mut weights = vec![0.0f64; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_with_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // Roots come out in descending order of x.
            nodes[i] = x;
            weights[i] = w;
            nodes[n - 1 - i] = -x;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            let mid = n / 2;
            let (_, dp) = legendre_with_derivative(n, 0.0);
            nodes[mid] = 0.0;
            weights[mid] = 2.0 / (dp * dp);
        }
        Self { nodes, weights }
    }
}

/// Sphere quadrature: Gauss-Legendre in cosθ crossed with a uniform
/// (trapezoid-by-periodicity) φ grid. θ ascending, φ in [0, 2π).
pub struct SphereQuadrature {
    pub thetas: Vec<f64>,
    pub theta_weights: Vec<f64>,
    pub phis: Vec<f64>,
    pub d_phi: f64,
}

pub fn sphere_quadrature(n_theta: usize, n_phi: usize) -> SphereQuadrature {
    let gl = GaussLegendre::new(n_theta);
    // GL nodes are descending in x = cosθ, hence ascending in θ already.
    let thetas: Vec<f64> = gl.nodes.iter().map(|&x| x.clamp(-1.0, 1.0).acos()).collect();
    let d_phi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let phis: Vec<f64> = (0..n_phi).map(|i| i as f64 * d_phi).collect();
    SphereQuadrature {
        thetas,
        theta_weights: gl.weights,
        phis,
        d_phi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_nodes_match_closed_forms() {
        let gl = GaussLegendre::new(2);
        let r = 1.0 / 3.0f64.sqrt();
        assert!((gl.nodes[0] - r).abs() < 1e-15);
        assert!((gl.nodes[1] + r).abs() < 1e-15);
        assert!((gl.weights[0] - 1.0).abs() < 1e-15);

        let gl = GaussLegendre::new(3);
        assert!((gl.nodes[1]).abs() < 1e-15);
        assert!((gl.weights[1] - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn integrates_polynomials_exactly() {
        // x^k on [-1,1] for k up to 2n-1.
        let n = 12;
        let gl = GaussLegendre::new(n);
        for k in 0..(2 * n) {
            let acc: f64 = gl
                .nodes
                .iter()
                .zip(&gl.weights)
                .map(|(&x, &w)| w * x.powi(k as i32))
                .sum();
            let expect = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((acc - expect).abs() < 1e-13, "k={k}: {acc}");
        }
    }

    #[test]
    fn weights_sum_to_two() {
        for n in [1usize, 5, 20, 81, 181] {
            let gl = GaussLegendre::new(n);
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-12, "n={n}: {s}");
        }
    }

    #[test]
    fn sphere_quadrature_measures_the_sphere() {
        let q = sphere_quadrature(16, 32);
        let area: f64 = q
            .theta_weights
            .iter()
            .map(|w| w * q.phis.len() as f64 * q.d_phi)
            .sum();
        assert!((area - 4.0 * std::f64::consts::PI).abs() < 1e-10);
        assert!(q.thetas.windows(2).all(|p| p[0] < p[1]));
    }
}
