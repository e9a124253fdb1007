//! Eigenstates of Lx + iηLy per l-block, the deformed SU(2) generators, and
//! the squeezing / uncertainty diagnostics.

mod eigen;

use ndarray::Array2;

use crate::angular::{operator_matrix, OperatorKind, OperatorMatrix};
use crate::{Complex, Error, Result};

pub(crate) use eigen::Tridiagonal;

/// |1 - η²| below this is treated as the singular η = ±1 case.
pub const ETA_SINGULAR_TOL: f64 = 1e-12;

/// Complex squeezing parameter η with its derived quantities.
///
/// |η| is the squeezing ratio ΔLx/ΔLy, α = arg η is the covariance angle,
/// and √(1-η²) (principal branch) scales the deformed generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParameter {
    eta: Complex,
}

impl SqueezeParameter {
    pub fn new(eta: Complex) -> Self {
        Self { eta }
    }

    pub fn real(eta: f64) -> Self {
        Self { eta: Complex::new(eta, 0.0) }
    }

    pub fn from_parts(re: f64, im: f64) -> Self {
        Self { eta: Complex::new(re, im) }
    }

    pub fn eta(&self) -> Complex {
        self.eta
    }

    pub fn modulus(&self) -> f64 {
        self.eta.norm()
    }

    /// Covariance angle α = arg η ∈ (-π, π]; zero in the intelligent
    /// (real-η) regime.
    pub fn alpha(&self) -> f64 {
        self.eta.arg()
    }

    /// Principal branch of √(1-η²).
    pub fn root(&self) -> Complex {
        (Complex::new(1.0, 0.0) - self.eta * self.eta).sqrt()
    }

    /// True when 1-η² vanishes to tolerance, i.e. η = ±1.
    pub fn is_singular(&self) -> bool {
        (Complex::new(1.0, 0.0) - self.eta * self.eta).norm() < ETA_SINGULAR_TOL
    }

    pub(crate) fn ensure_regular(&self) -> Result<()> {
        if self.is_singular() {
            Err(Error::SingularEta { eta: self.eta })
        } else {
            Ok(())
        }
    }
}

/// η(θ0, φ0) that points the k = l state along (θ0, φ0), evaluated in the
/// tan-free algebraic form (sinφ0 + i cosθ0 cosφ0)/(cosθ0 sinφ0 + i cosφ0).
pub fn radcliffe_eta(theta0: f64, phi0: f64) -> Result<SqueezeParameter> {
    let ct = theta0.cos();
    let (sp, cp) = phi0.sin_cos();
    let num = Complex::new(sp, ct * cp);
    let den = Complex::new(ct * sp, cp);
    if den.norm() < 1e-14 {
        return Err(Error::ParametrizationSingularity { theta0, phi0 });
    }
    Ok(SqueezeParameter::new(num / den))
}

/// The three k-classes of eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    /// k = 0: only ⟨Lz⟩ is nonzero.
    AxisOnly,
    /// k = ±l: spin coherent states along a rotated axis.
    Radcliffe,
    /// Everything in between.
    Intermediate,
}

pub fn classify(l: i64, k: i64) -> StateClass {
    assert!(k.abs() <= l);
    if k == 0 {
        StateClass::AxisOnly
    } else if k.abs() == l {
        StateClass::Radcliffe
    } else {
        StateClass::Intermediate
    }
}

/// The non-normal operator Lx + iηLy as a dense block.
pub fn build_nonnormal_operator(l: i64, eta: &SqueezeParameter) -> OperatorMatrix {
    let lx = operator_matrix(l, OperatorKind::Lx);
    let ly = operator_matrix(l, OperatorKind::Ly);
    lx.add(&ly.scaled(Complex::new(0.0, 1.0) * eta.eta()))
}

pub(crate) fn nonnormal_tridiagonal(l: i64, eta: &SqueezeParameter) -> Tridiagonal {
    let n = (2 * l + 1) as usize;
    let one = Complex::new(1.0, 0.0);
    let e = eta.eta();
    let mut sub = Vec::with_capacity(n.saturating_sub(1));
    let mut sup = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let m = i as i64 - l;
        let c = crate::angular::ladder_coeff(l, m);
        sub.push(0.5 * c * (one + e));
        sup.push(0.5 * c * (one - e));
    }
    Tridiagonal { diag: vec![Complex::default(); n], sub, sup }
}

/// ℒ₊ = (ηLx + iLy)/√(1-η²) − Lz as a tridiagonal block (sub/sup/diag).
pub(crate) fn raising_tridiagonal(l: i64, eta: &SqueezeParameter) -> Tridiagonal {
    let n = (2 * l + 1) as usize;
    let one = Complex::new(1.0, 0.0);
    let e = eta.eta();
    let root = eta.root();
    let mut sub = Vec::with_capacity(n.saturating_sub(1));
    let mut sup = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n.saturating_sub(1) {
        let m = i as i64 - l;
        let c = crate::angular::ladder_coeff(l, m);
        // ηLx + iLy has sub (η+1)c/2 and sup (η-1)c/2
        sub.push(0.5 * c * (e + one) / root);
        sup.push(0.5 * c * (e - one) / root);
    }
    let diag = (-l..=l).map(|m| Complex::new(-(m as f64), 0.0)).collect();
    Tridiagonal { diag, sub, sup }
}

/// Deformed SU(2) generators (ℒ3, ℒ₊, ℒ₋):
/// ℒ3 = (Lx + iηLy)/√(1-η²), ℒ± = ±(ηLx + iLy)/√(1-η²) − Lz.
pub fn su2_generators(
    l: i64,
    eta: &SqueezeParameter,
) -> Result<(OperatorMatrix, OperatorMatrix, OperatorMatrix)> {
    eta.ensure_regular()?;
    let root = eta.root();
    let e = eta.eta();
    let lx = operator_matrix(l, OperatorKind::Lx);
    let ly = operator_matrix(l, OperatorKind::Ly);
    let lz = operator_matrix(l, OperatorKind::Lz);

    let l3 = lx
        .add(&ly.scaled(Complex::new(0.0, 1.0) * e))
        .scaled(Complex::new(1.0, 0.0) / root);
    let mix = lx
        .scaled(e)
        .add(&ly.scaled(Complex::new(0.0, 1.0)))
        .scaled(Complex::new(1.0, 0.0) / root);
    let l_plus = mix.sub(&lz);
    let l_minus = mix.scaled(Complex::new(-1.0, 0.0)).sub(&lz);
    Ok((l3, l_plus, l_minus))
}

/// A normalized eigenstate of Lx + iηLy in one l-block.
#[derive(Debug, Clone)]
pub struct IntelligentState {
    l: i64,
    k: i64,
    eta: SqueezeParameter,
    coeffs: Vec<Complex>,
    w: Complex,
}

impl IntelligentState {
    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn eta(&self) -> &SqueezeParameter {
        &self.eta
    }

    /// Coefficients over |l,m⟩, m ascending.
    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn eigenvalue(&self) -> Complex {
        self.w
    }

    pub fn class(&self) -> StateClass {
        classify(self.l, self.k)
    }

    /// ‖(Lx + iηLy)v − wv‖ recomputed from scratch.
    pub fn residual(&self) -> f64 {
        nonnormal_tridiagonal(self.l, &self.eta).residual(self.w, &self.coeffs)
    }

    pub fn expectations(&self) -> UncertaintyReport {
        UncertaintyReport::from_blocks([(self.l, self.coeffs.as_slice())].into_iter())
    }
}

/// The closed-form η = ±1 limit: |l, ±l⟩ in the Lz basis, annihilated by
/// Lx ± iLy exactly. The solver rejects |η| = 1, this constructor covers it.
pub fn unit_eta_state(l: i64, positive: bool) -> IntelligentState {
    assert!(l >= 0);
    let dim = (2 * l + 1) as usize;
    let mut coeffs = vec![Complex::default(); dim];
    let idx = if positive { dim - 1 } else { 0 };
    coeffs[idx] = Complex::new(1.0, 0.0);
    IntelligentState {
        l,
        k: if positive { l } else { -l },
        eta: SqueezeParameter::real(if positive { 1.0 } else { -1.0 }),
        coeffs,
        w: Complex::default(),
    }
}

/// All 2l+1 eigenstates of Lx + iηLy, labeled k = -l..+l by nearest match
/// to k√(1-η²), eigenvectors normalized with the largest coefficient made
/// real positive.
pub fn solve_intelligent(l: i64, eta: &SqueezeParameter) -> Result<Vec<IntelligentState>> {
    assert!(l >= 0);
    eta.ensure_regular()?;
    if l == 0 {
        return Ok(vec![IntelligentState {
            l,
            k: 0,
            eta: *eta,
            coeffs: vec![Complex::new(1.0, 0.0)],
            w: Complex::default(),
        }]);
    }

    let tri = nonnormal_tridiagonal(l, eta);
    let pairs = eigen::eigen_tridiag(&tri);
    let values: Vec<Complex> = pairs.iter().map(|p| p.value).collect();
    let ks = eigen::match_to_ladder(&values, eta.root(), l)?;

    let mut states: Vec<IntelligentState> = pairs
        .into_iter()
        .zip(ks)
        .map(|(pair, k)| {
            let mut coeffs = pair.vector;
            fix_phase(&mut coeffs);
            IntelligentState { l, k, eta: *eta, coeffs, w: pair.value }
        })
        .collect();
    states.sort_by_key(|s| s.k);
    Ok(states)
}

/// Rotate a unit vector so its largest-magnitude coefficient is real
/// positive; reproducible across eigensolver backends.
fn fix_phase(v: &mut [Complex]) {
    let mut best = 0usize;
    let mut best_mag = -1.0;
    for (i, z) in v.iter().enumerate() {
        let mag = z.norm();
        if mag > best_mag {
            best_mag = mag;
            best = i;
        }
    }
    if best_mag <= 0.0 {
        return;
    }
    let phase = v[best].conj() / best_mag;
    for z in v.iter_mut() {
        *z *= phase;
    }
}

/// Overlap matrix ⟨v_i|v_j⟩ of a family of states; eigenstates of the
/// non-normal operator are not mutually orthogonal, expansions over them
/// need this.
pub fn gram_matrix(states: &[IntelligentState]) -> Array2<Complex> {
    let n = states.len();
    Array2::from_shape_fn((n, n), |(i, j)| {
        states[i]
            .coeffs
            .iter()
            .zip(&states[j].coeffs)
            .map(|(a, b)| a.conj() * b)
            .sum()
    })
}

/// First and second moments of Lx, Ly, Lz in a state or packet.
///
/// Variances are computed as ‖(L - ⟨L⟩)ψ‖², which is exactly non-negative
/// and free of the ⟨L²⟩ - ⟨L⟩² cancellation.
#[derive(Debug, Clone, Copy)]
pub struct UncertaintyReport {
    pub mean_lx: Complex,
    pub mean_ly: Complex,
    pub mean_lz: Complex,
    pub var_lx: f64,
    pub var_ly: f64,
    /// ⟨{Lx, Ly}⟩, the raw anticommutator moment.
    pub anticommutator: f64,
    /// ΔLx² ΔLy²
    pub product: f64,
}

impl UncertaintyReport {
    /// Build from coefficient blocks (l, coefficients over m = -l..+l).
    pub fn from_blocks<'a, I>(blocks: I) -> Self
    where
        I: Iterator<Item = (i64, &'a [Complex])>,
    {
        let mut norm_sqr = 0.0f64;
        let mut mean_lx = Complex::default();
        let mut mean_ly = Complex::default();
        let mut mean_lz = Complex::default();
        let mut applied: Vec<(i64, Vec<Complex>, Vec<Complex>, Vec<Complex>)> = Vec::new();

        for (l, block) in blocks {
            debug_assert_eq!(block.len(), (2 * l + 1) as usize);
            let lx_v = apply_lx_block(l, block);
            let ly_v = apply_ly_block(l, block);
            for (i, &c) in block.iter().enumerate() {
                let m = i as i64 - l;
                norm_sqr += c.norm_sqr();
                mean_lx += c.conj() * lx_v[i];
                mean_ly += c.conj() * ly_v[i];
                mean_lz += c.conj() * c * m as f64;
            }
            applied.push((l, block.to_vec(), lx_v, ly_v));
        }
        mean_lx /= norm_sqr;
        mean_ly /= norm_sqr;
        mean_lz /= norm_sqr;

        let mut var_lx = 0.0f64;
        let mut var_ly = 0.0f64;
        let mut anticomm = 0.0f64;
        for (_, block, lx_v, ly_v) in &applied {
            for i in 0..block.len() {
                var_lx += (lx_v[i] - mean_lx.re * block[i]).norm_sqr();
                var_ly += (ly_v[i] - mean_ly.re * block[i]).norm_sqr();
                anticomm += 2.0 * (lx_v[i].conj() * ly_v[i]).re;
            }
        }
        var_lx /= norm_sqr;
        var_ly /= norm_sqr;
        anticomm /= norm_sqr;

        UncertaintyReport {
            mean_lx,
            mean_ly,
            mean_lz,
            var_lx,
            var_ly,
            anticommutator: anticomm,
            product: var_lx * var_ly,
        }
    }

    /// Symmetrized covariance ½⟨{Lx,Ly}⟩ - ⟨Lx⟩⟨Ly⟩.
    pub fn covariance(&self) -> f64 {
        0.5 * self.anticommutator - self.mean_lx.re * self.mean_ly.re
    }

    /// ¼⟨Lz⟩², the commutator-only lower bound on the product.
    pub fn robertson_bound(&self) -> f64 {
        0.25 * self.mean_lz.re * self.mean_lz.re
    }

    /// ¼⟨Lz⟩² + Cov², the full lower bound including the covariance term;
    /// equals ¼⟨Lz⟩²/cos²α for the states solved here.
    pub fn schroedinger_bound(&self) -> f64 {
        let c = self.covariance();
        self.robertson_bound() + c * c
    }

    /// ΔLx²/ΔLy², to compare against |η|².
    pub fn squeezing_ratio(&self) -> f64 {
        self.var_lx / self.var_ly
    }
}

/// Tridiagonal action of Lx on one l-block.
pub(crate) fn apply_lx_block(l: i64, v: &[Complex]) -> Vec<Complex> {
    let n = v.len();
    let mut out = vec![Complex::default(); n];
    for i in 0..n {
        let m = i as i64 - l;
        let mut acc = Complex::default();
        if i > 0 {
            acc += 0.5 * crate::angular::ladder_coeff(l, m - 1) * v[i - 1];
        }
        if i + 1 < n {
            acc += 0.5 * crate::angular::ladder_coeff(l, m) * v[i + 1];
        }
        out[i] = acc;
    }
    out
}

/// Tridiagonal action of Ly on one l-block.
pub(crate) fn apply_ly_block(l: i64, v: &[Complex]) -> Vec<Complex> {
    let n = v.len();
    let i_half = Complex::new(0.0, 0.5);
    let mut out = vec![Complex::default(); n];
    for i in 0..n {
        let m = i as i64 - l;
        let mut acc = Complex::default();
        if i > 0 {
            acc -= i_half * crate::angular::ladder_coeff(l, m - 1) * v[i - 1];
        }
        if i + 1 < n {
            acc += i_half * crate::angular::ladder_coeff(l, m) * v[i + 1];
        }
        out[i] = acc;
    }
    out
}
