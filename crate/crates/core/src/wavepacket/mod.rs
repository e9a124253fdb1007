//! The exponential coherent parent packet, its partial-wave coefficients,
//! and the k-indexed family built by the ℒ₊ ladder.

mod grid;

pub use grid::{density_grid, SphereGrid};

use serde::{Deserialize, Serialize};

use crate::angular::{clebsch_gordan, lnfac, CGKey, LegendreTable};
use crate::intelligent::{SqueezeParameter, UncertaintyReport};
use crate::{Complex, Error, Result};

/// Multi-l coherent packet: coefficient table b_lm for 0 <= l <= l_max,
/// |m| <= l, unit norm, with the construction metadata (N, η, k).
#[derive(Debug, Clone)]
pub struct AngularWavePacket {
    l_max: usize,
    /// Flat (l_max+1)² layout, index l² + l + m.
    coeffs: Vec<Complex>,
    n_spread: f64,
    eta: SqueezeParameter,
    k: usize,
    /// Effective parent normalization prefactor 1/‖s‖ recorded at
    /// construction (for real η this reproduces √(2N/sinh 2N)); None for
    /// packets reloaded from disk.
    prefactor: Option<f64>,
}

impl AngularWavePacket {
    fn index(l: usize, m: i64) -> usize {
        l * l + (l as i64 + m) as usize
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn n_spread(&self) -> f64 {
        self.n_spread
    }

    pub fn eta(&self) -> &SqueezeParameter {
        &self.eta
    }

    /// Family index; the packet is an eigenvector of Lx + iηLy with
    /// eigenvalue k√(1-η²).
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn effective_prefactor(&self) -> Option<f64> {
        self.prefactor
    }

    pub fn coefficient(&self, l: i64, m: i64) -> Complex {
        if l < 0 || l as usize > self.l_max || m.abs() > l {
            return Complex::default();
        }
        self.coeffs[Self::index(l as usize, m)]
    }

    /// One l-shell of coefficients, m ascending.
    pub fn block(&self, l: usize) -> &[Complex] {
        &self.coeffs[l * l..(l + 1) * (l + 1)]
    }

    pub(crate) fn blocks(&self) -> impl Iterator<Item = (i64, &[Complex])> {
        (0..=self.l_max).map(|l| (l as i64, self.block(l)))
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn shell_weight(&self, l: usize) -> f64 {
        self.block(l).iter().map(|c| c.norm_sqr()).sum()
    }

    /// ⟨Lz⟩ = Σ m |b_lm|²
    pub fn lz_mean(&self) -> f64 {
        let mut acc = 0.0;
        for (l, block) in self.blocks() {
            for (i, c) in block.iter().enumerate() {
                acc += (i as i64 - l) as f64 * c.norm_sqr();
            }
        }
        acc
    }

    /// ⟨L²⟩ = Σ l(l+1) |b_lm|²
    pub fn l2_mean(&self) -> f64 {
        (0..=self.l_max)
            .map(|l| (l * (l + 1)) as f64 * self.shell_weight(l))
            .sum()
    }

    pub fn moments(&self) -> UncertaintyReport {
        UncertaintyReport::from_blocks(self.blocks())
    }

    /// Ψ(θ,φ) = Σ b_lm Y_l^m at a single point.
    pub fn evaluate(&self, theta: f64, phi: f64) -> Complex {
        let table = LegendreTable::new(self.l_max, theta.cos());
        let mut acc = Complex::default();
        for (l, block) in self.blocks() {
            for (i, &c) in block.iter().enumerate() {
                if c == Complex::default() {
                    continue;
                }
                let m = i as i64 - l;
                acc += c * crate::angular::harmonic_from_table(&table, l as usize, m, phi);
            }
        }
        acc
    }

    /// Map the phases of every coefficient through `f(l)`, preserving norm.
    pub(crate) fn apply_shell_phases(&self, f: impl Fn(i64) -> Complex) -> AngularWavePacket {
        let mut out = self.clone();
        for l in 0..=self.l_max {
            let phase = f(l as i64);
            for c in &mut out.coeffs[l * l..(l + 1) * (l + 1)] {
                *c *= phase;
            }
        }
        out
    }

    pub(crate) fn from_parts(
        l_max: usize,
        coeffs: Vec<Complex>,
        n_spread: f64,
        eta: SqueezeParameter,
        k: usize,
        prefactor: Option<f64>,
    ) -> Self {
        assert_eq!(coeffs.len(), (l_max + 1) * (l_max + 1));
        Self { l_max, coeffs, n_spread, eta, k, prefactor }
    }

    pub fn to_json(&self) -> String {
        let coeffs: Vec<(i64, i64, f64, f64)> = self
            .blocks()
            .flat_map(|(l, block)| {
                block
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != Complex::default())
                    .map(move |(i, c)| (l, i as i64 - l, c.re, c.im))
                    .collect::<Vec<_>>()
            })
            .collect();
        let doc = PacketDoc {
            n: self.n_spread,
            eta_re: self.eta.eta().re,
            eta_im: self.eta.eta().im,
            k: self.k,
            l_max: self.l_max,
            coeffs,
        };
        serde_json::to_string_pretty(&doc).expect("packet serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PacketDoc =
            serde_json::from_str(text).map_err(|e| Error::PacketDocument(e.to_string()))?;
        let dim = (doc.l_max + 1) * (doc.l_max + 1);
        let mut coeffs = vec![Complex::default(); dim];
        for (l, m, re, im) in doc.coeffs {
            if l < 0 || l as usize > doc.l_max || m.abs() > l {
                return Err(Error::PacketDocument(format!(
                    "coefficient index (l={l}, m={m}) out of range for l_max={}",
                    doc.l_max
                )));
            }
            coeffs[Self::index(l as usize, m)] = Complex::new(re, im);
        }
        if coeffs.iter().all(|c| *c == Complex::default()) {
            return Err(Error::PacketDocument("packet has no coefficients".into()));
        }
        Ok(Self {
            l_max: doc.l_max,
            coeffs,
            n_spread: doc.n,
            eta: SqueezeParameter::from_parts(doc.eta_re, doc.eta_im),
            k: doc.k,
            prefactor: None,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct PacketDoc {
    #[serde(rename = "N")]
    n: f64,
    eta_re: f64,
    eta_im: f64,
    k: usize,
    l_max: usize,
    coeffs: Vec<(i64, i64, f64, f64)>,
}

/// Closed-form parent amplitude √(N/(2π sinh 2N)) e^{Nv} with
/// v = sinθ(cosφ + iη sinφ). The built-in prefactor normalizes the density
/// for real η.
pub fn parent_amplitude(
    n_spread: f64,
    eta: &SqueezeParameter,
    theta: f64,
    phi: f64,
) -> Result<Complex> {
    assert!(n_spread > 0.0, "N must be positive");
    if n_spread > 350.0 {
        return Err(Error::AmplitudeOverflow { n_spread });
    }
    let st = theta.sin();
    let (sp, cp) = phi.sin_cos();
    let v = st * (Complex::new(cp, 0.0) + Complex::new(0.0, 1.0) * eta.eta() * sp);
    let norm = (n_spread / (2.0 * std::f64::consts::PI * (2.0 * n_spread).sinh())).sqrt();
    Ok(norm * (n_spread * v).exp())
}

/// log-magnitude profile of (N(1±η))^li / sqrt((2 li)!), with the common
/// peak subtracted out later so that N up to a few hundred stays finite.
fn power_profile(w: Complex, cut: f64) -> (Vec<f64>, f64) {
    if w.norm() == 0.0 {
        // 0^0 = 1: only the li = 0 term survives.
        return (vec![0.0], 0.0);
    }
    let ln_mag = w.norm().ln();
    let mut mags = Vec::new();
    let mut peak = f64::NEG_INFINITY;
    let mut li = 0i64;
    loop {
        let v = li as f64 * ln_mag - 0.5 * lnfac(2 * li);
        peak = peak.max(v);
        mags.push(v);
        if v < peak - cut && li as f64 > w.norm() {
            break;
        }
        li += 1;
        assert!(li < 2040, "spread parameter too large for the factorial table");
    }
    (mags, w.arg())
}

const TERM_CUT: f64 = 60.0; // e^-60 ≈ 9e-27 relative

/// Raw Eq-style double sums s_lm (no normalization, common magnitude peak
/// divided out); layout matches AngularWavePacket.
fn raw_parent_sums(n_spread: f64, eta: &SqueezeParameter, l_top: usize) -> (Vec<Complex>, f64) {
    let one = Complex::new(1.0, 0.0);
    let w1 = n_spread * (one + eta.eta());
    let w2 = n_spread * (one - eta.eta());
    let (mag1, ph1) = power_profile(w1, TERM_CUT);
    let (mag2, ph2) = power_profile(w2, TERM_CUT);
    let peak1 = mag1.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let peak2 = mag2.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let offset = peak1 + peak2;

    let mut sums = vec![Complex::default(); (l_top + 1) * (l_top + 1)];
    for (l1, m1v) in mag1.iter().enumerate() {
        for (l2, m2v) in mag2.iter().enumerate() {
            let lw = m1v + m2v - offset;
            if lw < -TERM_CUT {
                continue;
            }
            // Condon-Shortley harmonics put the alternating sign on l1.
            let sign = if l1 % 2 == 0 { 1.0 } else { -1.0 };
            let term = sign
                * lw.exp()
                * Complex::from_polar(1.0, l1 as f64 * ph1 + l2 as f64 * ph2);
            let (l1, l2) = (l1 as i64, l2 as i64);
            let m = l1 - l2;
            // ⟨l1 l2 0 0|l 0⟩ vanishes unless l1+l2+l is even.
            let mut l = m.abs();
            if (l1 + l2 + l) % 2 != 0 {
                l += 1;
            }
            while l <= (l1 + l2).min(l_top as i64) {
                let c1 = clebsch_gordan(CGKey::new(l1, l2, 0, 0, l, 0)).unwrap();
                if c1 != 0.0 {
                    let c2 = clebsch_gordan(CGKey::new(l1, l2, l1, -l2, l, m)).unwrap();
                    if c2 != 0.0 {
                        sums[AngularWavePacket::index(l as usize, m)] +=
                            term * c1 * c2 / ((2 * l + 1) as f64).sqrt();
                    }
                }
                l += 2;
            }
        }
    }
    (sums, offset)
}

const TAIL_PROBE: usize = 10;

/// Partial-wave coefficients of the parent packet by the Clebsch-Gordan
/// double sum, normalized numerically (for complex η the closed-form
/// prefactor does not apply; the effective one is recorded on the packet).
pub fn parent_coefficients(
    n_spread: f64,
    eta: &SqueezeParameter,
    l_max: usize,
) -> Result<AngularWavePacket> {
    parent_coefficients_with_tolerance(n_spread, eta, l_max, 1e-12)
}

pub fn parent_coefficients_with_tolerance(
    n_spread: f64,
    eta: &SqueezeParameter,
    l_max: usize,
    tail_tol: f64,
) -> Result<AngularWavePacket> {
    assert!(n_spread > 0.0, "N must be positive");
    let probe_top = l_max + TAIL_PROBE;
    let (sums, offset) = raw_parent_sums(n_spread, eta, probe_top);

    let shell = |l: usize| -> f64 {
        sums[l * l..(l + 1) * (l + 1)]
            .iter()
            .map(|c| c.norm_sqr())
            .sum()
    };
    let total: f64 = (0..=probe_top).map(shell).sum();
    let dropped: f64 = (l_max + 1..=probe_top).map(shell).sum::<f64>() / total;
    if dropped > tail_tol {
        return Err(Error::TruncationTail { l_max, tail: dropped, tol: tail_tol });
    }

    let kept: f64 = (0..=l_max).map(shell).sum();
    let scale = 1.0 / kept.sqrt();
    let coeffs: Vec<Complex> = sums[..(l_max + 1) * (l_max + 1)]
        .iter()
        .map(|c| c * scale)
        .collect();
    // 1/‖s‖ in un-scaled units: exp(-offset)/sqrt(total).
    let prefactor = (-offset - 0.5 * total.ln()).exp();
    Ok(AngularWavePacket::from_parts(
        l_max,
        coeffs,
        n_spread,
        *eta,
        0,
        Some(prefactor),
    ))
}

/// Smallest l_max whose tail is negligible: extend until three consecutive
/// shells each carry less than 1e-14 of the running total.
pub fn auto_l_max(n_spread: f64, eta: &SqueezeParameter) -> usize {
    assert!(n_spread > 0.0);
    let mut l_top = (2.0 * n_spread * (1.0 + eta.modulus())) as usize + 16;
    loop {
        let (sums, _) = raw_parent_sums(n_spread, eta, l_top);
        let shells: Vec<f64> = (0..=l_top)
            .map(|l| {
                sums[l * l..(l + 1) * (l + 1)]
                    .iter()
                    .map(|c| c.norm_sqr())
                    .sum()
            })
            .collect();
        let total: f64 = shells.iter().sum();
        let mut run = 0;
        for (l, w) in shells.iter().enumerate() {
            if w / total < 1e-14 {
                run += 1;
                if run == 3 {
                    return l - 2;
                }
            } else {
                run = 0;
            }
        }
        l_top += 16;
    }
}

/// The closed-form ladder image of v (the exponent of the parent packet),
/// evaluated verbatim with principal-branch square roots:
/// v₊ = ½(cosθ-η)√((1+η)/(1-η)) - ½(cosθ+η)√((1-η)/(1+η))
///      + (η cosφ + i sinφ) sinθ.
pub fn vplus(eta: &SqueezeParameter, theta: f64, phi: f64) -> Result<Complex> {
    let one = Complex::new(1.0, 0.0);
    let e = eta.eta();
    if (one - e).norm() < 1e-14 || (one + e).norm() < 1e-14 {
        return Err(Error::SingularEta { eta: e });
    }
    let sq_plus = ((one + e) / (one - e)).sqrt();
    let sq_minus = ((one - e) / (one + e)).sqrt();
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Ok(0.5 * (ct - e) * sq_plus - 0.5 * (ct + e) * sq_minus
        + (e * cp + Complex::new(0.0, sp)) * st)
}

/// Apply ℒ₊ `steps` times, renormalizing after each application. Partial
/// waves with l < k are exactly zeroed; the ladder annihilates them anyway,
/// this just removes the numerical dust.
pub fn raise_family(packet: &AngularWavePacket, steps: usize) -> Result<AngularWavePacket> {
    packet.eta.ensure_regular()?;
    let ladders: Vec<crate::intelligent::Tridiagonal> = (0..=packet.l_max)
        .map(|l| crate::intelligent::raising_tridiagonal(l as i64, &packet.eta))
        .collect();

    let mut out = packet.clone();
    for _ in 0..steps {
        let k_new = out.k + 1;
        let mut coeffs = Vec::with_capacity(out.coeffs.len());
        for l in 0..=out.l_max {
            if l < k_new {
                coeffs.extend(std::iter::repeat(Complex::default()).take(2 * l + 1));
            } else {
                coeffs.extend(ladders[l].apply(out.block(l)));
            }
        }
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::EmptyPacket);
        }
        for c in &mut coeffs {
            *c /= norm;
        }
        out.coeffs = coeffs;
        out.k = k_new;
    }
    Ok(out)
}

/// One row of the partial-wave weight table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialWave {
    pub l: i64,
    pub m: i64,
    pub weight: f64,
}

/// All |b_lm|² >= 1e-16, sorted by (l, m).
pub fn partial_wave_table(packet: &AngularWavePacket) -> Vec<PartialWave> {
    let mut rows = Vec::new();
    for (l, block) in packet.blocks() {
        for (i, c) in block.iter().enumerate() {
            let weight = c.norm_sqr();
            if weight >= 1e-16 {
                rows.push(PartialWave { l, m: i as i64 - l, weight });
            }
        }
    }
    rows
}
