use rayon::prelude::*;

use crate::angular::{sphere_quadrature, LegendreTable};
use crate::Complex;

use super::AngularWavePacket;

/// (θ,φ) lattice with complex amplitude and real density per node.
/// θ nodes are Gauss-Legendre in cosθ (ascending θ), φ uniform in [0, 2π);
/// with those weights the quadrature is exact for band-limited densities up
/// to the grid order.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    thetas: Vec<f64>,
    theta_weights: Vec<f64>,
    phis: Vec<f64>,
    d_phi: f64,
    amplitude: Vec<Complex>,
    density: Vec<f64>,
}

impl SphereGrid {
    pub fn n_theta(&self) -> usize {
        self.thetas.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phis.len()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn amplitude_at(&self, i_theta: usize, i_phi: usize) -> Complex {
        self.amplitude[i_theta * self.phis.len() + i_phi]
    }

    pub fn density_at(&self, i_theta: usize, i_phi: usize) -> f64 {
        self.density[i_theta * self.phis.len() + i_phi]
    }

    /// Quadrature weight of every node in θ-row `i_theta`.
    pub fn node_weight(&self, i_theta: usize) -> f64 {
        self.theta_weights[i_theta] * self.d_phi
    }

    /// ∫ density dΩ by the native quadrature.
    pub fn integral(&self) -> f64 {
        let n_phi = self.phis.len();
        self.density
            .chunks(n_phi)
            .zip(&self.theta_weights)
            .map(|(row, w)| w * self.d_phi * row.iter().sum::<f64>())
            .sum()
    }

    pub fn max_density(&self) -> f64 {
        self.density.iter().cloned().fold(0.0, f64::max)
    }

    /// Node indices of the densest point.
    pub fn peak(&self) -> (usize, usize) {
        let mut best = (0usize, 0usize);
        let mut best_v = -1.0;
        let n_phi = self.phis.len();
        for (i, &v) in self.density.iter().enumerate() {
            if v > best_v {
                best_v = v;
                best = (i / n_phi, i % n_phi);
            }
        }
        best
    }
}

/// Evaluate Σ b_lm Y_l^m on the grid; density = |amplitude|² nodewise.
pub fn density_grid(packet: &AngularWavePacket, n_theta: usize, n_phi: usize) -> SphereGrid {
    assert!(n_theta >= 8 && n_phi >= 8, "grid resolution below 8");
    let q = sphere_quadrature(n_theta, n_phi);
    let l_max = packet.l_max();

    let amplitude: Vec<Complex> = q
        .thetas
        .par_iter()
        .flat_map_iter(|&theta| evaluate_row(packet, l_max, theta, &q.phis))
        .collect();
    let density: Vec<f64> = amplitude.iter().map(|a| a.norm_sqr()).collect();

    SphereGrid {
        thetas: q.thetas,
        theta_weights: q.theta_weights,
        phis: q.phis,
        d_phi: q.d_phi,
        amplitude,
        density,
    }
}

/// One θ-row: aggregate over l first (g_m = Σ_l b_lm P̄_lm), then sweep φ
/// with an incremental e^{imφ} factor. O(l_max² + n_phi·l_max) per row.
fn evaluate_row(
    packet: &AngularWavePacket,
    l_max: usize,
    theta: f64,
    phis: &[f64],
) -> Vec<Complex> {
    let table = LegendreTable::new(l_max, theta.cos());
    let width = 2 * l_max + 1;
    let mut g = vec![Complex::default(); width];
    for l in 0..=l_max {
        let block = packet.block(l);
        for (i, &c) in block.iter().enumerate() {
            if c == Complex::default() {
                continue;
            }
            let m = i as i64 - l as i64;
            let ma = m.unsigned_abs() as usize;
            let mut p = table.value(l, ma);
            if m < 0 && ma % 2 == 1 {
                p = -p;
            }
            g[(m + l_max as i64) as usize] += c * p;
        }
    }

    phis.iter()
        .map(|&phi| {
            let step = Complex::from_polar(1.0, phi);
            let mut factor = Complex::from_polar(1.0, -(l_max as f64) * phi);
            let mut acc = Complex::default();
            for gm in &g {
                acc += gm * factor;
                factor *= step;
            }
            acc
        })
        .collect()
}
