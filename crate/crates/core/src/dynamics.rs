//! Rigid-rotor time evolution, autocorrelation, fractional-revival
//! snapshots, and clone counting.
//!
//! Evolution multiplies b_lm by exp(-i l(l+1) ω0 t). Every l(l+1) is even,
//! so all packets share the revival time T_rev = 2π/ω0 (the quadratic
//! spectrum reassembles exactly there), and at fractional times (m/n)·T_rev
//! the packet splits into n clones for odd n and n/2 for even n.

use rayon::prelude::*;
use serde::Serialize;

use crate::wavepacket::{density_grid, AngularWavePacket, SphereGrid};
use crate::{Complex, Error, Result};

/// Rotor clock: the frequency ω0 (= ℏ/2J in physical units; 1 by default)
/// and the derived revival time.
#[derive(Debug, Clone, Copy)]
pub struct EvolutionClock {
    omega0: f64,
}

impl Default for EvolutionClock {
    fn default() -> Self {
        Self { omega0: 1.0 }
    }
}

impl EvolutionClock {
    pub fn new(omega0: f64) -> Self {
        assert!(omega0 > 0.0, "omega0 must be positive");
        Self { omega0 }
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Common revival time T_rev = 2π/ω0.
    pub fn revival_time(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega0
    }

    /// t = (m/n)·T_rev.
    pub fn fractional_time(&self, fraction: Fraction) -> f64 {
        fraction.value() * self.revival_time()
    }
}

/// Reduced fraction m/n with 0 <= m < n and gcd(m, n) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Fraction {
    pub fn new(m: u64, n: u64) -> Result<Self> {
        if n == 0 || m >= n || gcd(m, n) != 1 {
            return Err(Error::InvalidFraction { m, n });
        }
        Ok(Self { num: m, den: n })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Fraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Expected clone count at (m/n)·T_rev: n when n is odd, n/2 when even.
pub fn expected_clones(n: u64) -> u64 {
    if n % 2 == 1 {
        n
    } else {
        n / 2
    }
}

/// b_lm ← b_lm · exp(-i l(l+1) ω0 t). Norm is unchanged.
pub fn evolve(packet: &AngularWavePacket, t: f64, clock: &EvolutionClock) -> AngularWavePacket {
    let x = clock.omega0() * t;
    packet.apply_shell_phases(|l| Complex::from_polar(1.0, -((l * (l + 1)) as f64) * x))
}

/// Evolution to t = (m/n)·T_rev with the phase reduced in exact integer
/// arithmetic: exp(-2πi·(l(l+1)·m mod n)/n). At m/n = 1/1 the packet is
/// reproduced bit-exactly.
pub fn evolve_fraction(packet: &AngularWavePacket, fraction: Fraction) -> AngularWavePacket {
    let n = fraction.den;
    let m = fraction.num;
    packet.apply_shell_phases(|l| {
        let r = (l as u64 % n) * ((l as u64 + 1) % n) % n * (m % n) % n;
        if r == 0 {
            Complex::new(1.0, 0.0)
        } else {
            Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * r as f64 / n as f64)
        }
    })
}

/// ⟨Ψ(0)|Ψ(t)⟩ = Σ |b_lm|² exp(-i l(l+1) ω0 t), computed in coefficient
/// space (exact, no quadrature).
pub fn autocorrelation(
    initial: &AngularWavePacket,
    t: f64,
    clock: &EvolutionClock,
) -> Complex {
    let x = clock.omega0() * t;
    (0..=initial.l_max())
        .map(|l| {
            let w = initial.shell_weight(l);
            w * Complex::from_polar(1.0, -((l * (l + 1)) as f64) * x)
        })
        .sum()
}

/// Autocorrelation at (m/n)·T_rev with exact phase reduction.
pub fn autocorrelation_fraction(initial: &AngularWavePacket, fraction: Fraction) -> Complex {
    let n = fraction.den;
    let m = fraction.num;
    (0..=initial.l_max())
        .map(|l| {
            let r = (l as u64 % n) * ((l as u64 + 1) % n) % n * (m % n) % n;
            let w = initial.shell_weight(l);
            w * Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * r as f64 / n as f64)
        })
        .sum()
}

/// One detected density lump.
#[derive(Debug, Clone, Copy)]
pub struct Lump {
    pub theta: f64,
    pub phi: f64,
    /// Integrated density of the super-threshold component.
    pub weight: f64,
    /// Density-weighted RMS angular distance from the center.
    pub radius: f64,
}

/// Geodesic angle between two directions given as (θ, φ).
pub fn angular_separation(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (ta, pa) = a;
    let (tb, pb) = b;
    let dot = ta.sin() * tb.sin() * (pa - pb).cos() + ta.cos() * tb.cos();
    dot.clamp(-1.0, 1.0).acos()
}

/// Connected components of the super-threshold region (threshold =
/// rel_threshold × max density) under 4-neighbor adjacency with periodic φ
/// wraparound. Components below 1% of the total weight are discarded.
/// Returns lumps sorted by weight, heaviest first.
pub fn count_lumps(grid: &SphereGrid, rel_threshold: f64) -> Vec<Lump> {
    assert!(
        rel_threshold > 0.0 && rel_threshold < 1.0,
        "relative threshold must be in (0, 1)"
    );
    let nt = grid.n_theta();
    let np = grid.n_phi();
    let cut = rel_threshold * grid.max_density();
    if cut <= 0.0 {
        return Vec::new();
    }
    let total = grid.integral();

    let mut label = vec![usize::MAX; nt * np];
    let mut lumps: Vec<Lump> = Vec::new();
    let mut stack = Vec::new();

    for start in 0..nt * np {
        if label[start] != usize::MAX || grid.density_at(start / np, start % np) <= cut {
            continue;
        }
        let id = lumps.len();
        label[start] = id;
        stack.push(start);
        let mut nodes = Vec::new();
        while let Some(node) = stack.pop() {
            nodes.push(node);
            let (it, ip) = (node / np, node % np);
            let mut neighbors = [usize::MAX; 4];
            neighbors[0] = it * np + (ip + 1) % np;
            neighbors[1] = it * np + (ip + np - 1) % np;
            if it > 0 {
                neighbors[2] = (it - 1) * np + ip;
            }
            if it + 1 < nt {
                neighbors[3] = (it + 1) * np + ip;
            }
            for &nb in &neighbors {
                if nb != usize::MAX
                    && label[nb] == usize::MAX
                    && grid.density_at(nb / np, nb % np) > cut
                {
                    label[nb] = id;
                    stack.push(nb);
                }
            }
        }

        // Weight and density-weighted mean direction.
        let mut weight = 0.0f64;
        let mut dir = [0.0f64; 3];
        for &node in &nodes {
            let (it, ip) = (node / np, node % np);
            let w = grid.density_at(it, ip) * grid.node_weight(it);
            weight += w;
            let (theta, phi) = (grid.thetas()[it], grid.phis()[ip]);
            dir[0] += w * theta.sin() * phi.cos();
            dir[1] += w * theta.sin() * phi.sin();
            dir[2] += w * theta.cos();
        }
        let len = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
        let (c_theta, c_phi) = if len > 1e-300 {
            let theta = (dir[2] / len).clamp(-1.0, 1.0).acos();
            let mut phi = dir[1].atan2(dir[0]);
            if phi < 0.0 {
                phi += 2.0 * std::f64::consts::PI;
            }
            (theta, phi)
        } else {
            // Symmetric component (e.g. a full ring): fall back to its
            // densest node.
            let &peak = nodes
                .iter()
                .max_by(|&&a, &&b| {
                    grid.density_at(a / np, a % np)
                        .total_cmp(&grid.density_at(b / np, b % np))
                })
                .unwrap();
            (grid.thetas()[peak / np], grid.phis()[peak % np])
        };

        let mut spread = 0.0f64;
        for &node in &nodes {
            let (it, ip) = (node / np, node % np);
            let w = grid.density_at(it, ip) * grid.node_weight(it);
            let sep = angular_separation((c_theta, c_phi), (grid.thetas()[it], grid.phis()[ip]));
            spread += w * sep * sep;
        }
        let radius = (spread / weight).sqrt();

        lumps.push(Lump { theta: c_theta, phi: c_phi, weight, radius });
    }

    lumps.retain(|l| l.weight >= 0.01 * total);
    lumps.sort_by(|a, b| {
        b.weight
            .total_cmp(&a.weight)
            .then(a.theta.total_cmp(&b.theta))
            .then(a.phi.total_cmp(&b.phi))
    });
    lumps
}

/// Grid resolution and detection threshold for snapshots.
#[derive(Debug, Clone, Copy)]
pub struct SnapshotSpec {
    pub n_theta: usize,
    pub n_phi: usize,
    pub rel_threshold: f64,
}

impl Default for SnapshotSpec {
    fn default() -> Self {
        Self { n_theta: 181, n_phi: 360, rel_threshold: 0.2 }
    }
}

/// Snapshot of the packet at a revival fraction.
#[derive(Debug, Clone)]
pub struct RevivalReport {
    pub time: f64,
    pub fraction: Option<Fraction>,
    pub autocorrelation: Complex,
    pub lumps: Vec<Lump>,
}

impl RevivalReport {
    pub fn lump_count(&self) -> usize {
        self.lumps.len()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct LumpDoc {
            theta: f64,
            phi: f64,
            weight: f64,
        }
        #[derive(Serialize)]
        struct Doc {
            t: f64,
            #[serde(skip_serializing_if = "Option::is_none")]
            m: Option<u64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            n: Option<u64>,
            autocorr_re: f64,
            autocorr_im: f64,
            lump_count: usize,
            lumps: Vec<LumpDoc>,
        }
        let doc = Doc {
            t: self.time,
            m: self.fraction.map(|f| f.numerator()),
            n: self.fraction.map(|f| f.denominator()),
            autocorr_re: self.autocorrelation.re,
            autocorr_im: self.autocorrelation.im,
            lump_count: self.lumps.len(),
            lumps: self
                .lumps
                .iter()
                .map(|l| LumpDoc { theta: l.theta, phi: l.phi, weight: l.weight })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
    }
}

/// Evolve to (m/n)·T_rev, build the density grid, run lump detection.
pub fn fractional_snapshot(
    packet: &AngularWavePacket,
    fraction: Fraction,
    clock: &EvolutionClock,
    spec: &SnapshotSpec,
) -> RevivalReport {
    let evolved = evolve_fraction(packet, fraction);
    let grid = density_grid(&evolved, spec.n_theta, spec.n_phi);
    let lumps = count_lumps(&grid, spec.rel_threshold);
    RevivalReport {
        time: clock.fractional_time(fraction),
        fraction: Some(fraction),
        autocorrelation: autocorrelation_fraction(packet, fraction),
        lumps,
    }
}

/// Snapshot at an arbitrary time (no fraction bookkeeping).
pub fn snapshot_at(
    packet: &AngularWavePacket,
    t: f64,
    clock: &EvolutionClock,
    spec: &SnapshotSpec,
) -> RevivalReport {
    let evolved = evolve(packet, t, clock);
    let grid = density_grid(&evolved, spec.n_theta, spec.n_phi);
    let lumps = count_lumps(&grid, spec.rel_threshold);
    RevivalReport {
        time: t,
        fraction: None,
        autocorrelation: autocorrelation(packet, t, clock),
        lumps,
    }
}

/// One row of a revival scan.
#[derive(Debug, Clone)]
pub struct ScanEntry {
    pub fraction: Fraction,
    pub expected: u64,
    pub report: RevivalReport,
}

/// Snapshots for every coprime (m, n) with n <= n_max, m < n (plus the
/// trivial 0/1 row). Fractions are evaluated concurrently; each snapshot
/// owns its grid.
pub fn revival_scan(
    packet: &AngularWavePacket,
    n_max: u64,
    clock: &EvolutionClock,
    spec: &SnapshotSpec,
) -> Vec<ScanEntry> {
    assert!(n_max >= 2, "n_max must be at least 2");
    let mut fractions = vec![Fraction::new(0, 1).unwrap()];
    for n in 2..=n_max {
        for m in 1..n {
            if gcd(m, n) == 1 {
                fractions.push(Fraction::new(m, n).unwrap());
            }
        }
    }
    fractions
        .into_par_iter()
        .map(|fraction| ScanEntry {
            fraction,
            expected: expected_clones(fraction.denominator()),
            report: fractional_snapshot(packet, fraction, clock, spec),
        })
        .collect()
}
