use crate::{Complex, Error, Result};

/// Normalized associated Legendre values for a fixed polar angle, with the
/// Condon-Shortley phase absorbed: for m >= 0,
/// Y_l^m(θ,φ) = table.value(l, m) · e^{imφ}.
///
/// Built with the fully-normalized three-term recurrence, stable and
/// overflow-free to l of several thousand.
pub struct LegendreTable {
    l_max: usize,
    values: Vec<f64>,
}

impl LegendreTable {
    pub fn new(l_max: usize, cos_theta: f64) -> Self {
        let x = cos_theta;
        let s = (1.0 - x * x).max(0.0).sqrt();
        let len = (l_max + 1) * (l_max + 2) / 2;
        let mut v = vec![0.0f64; len];
        let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;

        v[0] = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
        // Diagonal: P̄_m^m = -sqrt((2m+1)/(2m)) sinθ P̄_{m-1}^{m-1},
        // the minus sign being the Condon-Shortley phase.
        for m in 1..=l_max {
            let mf = m as f64;
            v[idx(m, m)] = -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * v[idx(m - 1, m - 1)];
        }
        // First superdiagonal: P̄_{m+1}^m = sqrt(2m+3) cosθ P̄_m^m
        for m in 0..l_max {
            let mf = m as f64;
            v[idx(m + 1, m)] = (2.0 * mf + 3.0).sqrt() * x * v[idx(m, m)];
        }
        // Upward in l.
        for m in 0..=l_max {
            for l in (m + 2)..=l_max {
                let lf = l as f64;
                let mf = m as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf * mf)
                    / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                    .sqrt();
                v[idx(l, m)] = a * (x * v[idx(l - 1, m)] - b * v[idx(l - 2, m)]);
            }
        }
        Self { l_max, values: v }
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    /// Value for 0 <= m <= l <= l_max.
    pub fn value(&self, l: usize, m: usize) -> f64 {
        debug_assert!(m <= l && l <= self.l_max);
        self.values[l * (l + 1) / 2 + m]
    }
}

/// Orthonormal spherical harmonic Y_l^m(θ,φ) with the Condon-Shortley phase.
pub fn spherical_harmonic(l: i64, m: i64, theta: f64, phi: f64) -> Result<Complex> {
    if l < 0 || m.abs() > l {
        return Err(Error::QuantumNumberRange { l, m });
    }
    let table = LegendreTable::new(l as usize, theta.cos());
    Ok(harmonic_from_table(&table, l as usize, m, phi))
}

/// Assemble Y_l^m from a prebuilt table for the same θ.
/// Negative m via Y_l^{-m} = (-1)^m conj(Y_l^m).
pub(crate) fn harmonic_from_table(table: &LegendreTable, l: usize, m: i64, phi: f64) -> Complex {
    let ma = m.unsigned_abs() as usize;
    let mut p = table.value(l, ma);
    if m < 0 && ma % 2 == 1 {
        p = -p;
    }
    p * Complex::from_polar(1.0, m as f64 * phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::GaussLegendre;
    use std::f64::consts::PI;

    #[test]
    fn constant_mode() {
        let y = spherical_harmonic(0, 0, 1.234, 5.0).unwrap();
        assert!((y.re - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
        assert!(y.im.abs() < 1e-15);
    }

    #[test]
    fn pole_value_l1_m0() {
        let y = spherical_harmonic(1, 0, 0.0, 0.0).unwrap();
        assert!((y.re - (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn equator_value_l1_m1() {
        // Y_1^1 = -sqrt(3/8π) sinθ e^{iφ}
        let y = spherical_harmonic(1, 1, PI / 2.0, 0.0).unwrap();
        assert!((y.re + (3.0 / (8.0 * PI)).sqrt()).abs() < 1e-15, "{y}");
        assert!(y.im.abs() < 1e-15);
    }

    #[test]
    fn negative_m_conjugation() {
        let (theta, phi) = (1.1, 2.3);
        for l in 0..=6i64 {
            for m in 1..=l {
                let plus = spherical_harmonic(l, m, theta, phi).unwrap();
                let minus = spherical_harmonic(l, -m, theta, phi).unwrap();
                let want = plus.conj() * if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!((minus - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn m_out_of_range_is_domain_error() {
        assert!(spherical_harmonic(1, 2, 0.3, 0.4).is_err());
    }

    #[test]
    fn orthonormal_under_sphere_quadrature_to_l_20() {
        // Gauss-Legendre in cosθ is exact for the θ-polynomials up to
        // degree 2·21-1 = 41 >= l + l'; the φ integral is handled
        // analytically (it is 2π δ_{mm'} for the uniform measure).
        let l_max = 20usize;
        let gl = GaussLegendre::new(l_max + 1);
        let tables: Vec<LegendreTable> =
            gl.nodes.iter().map(|&x| LegendreTable::new(l_max, x)).collect();

        for m in 0..=l_max {
            for l in m..=l_max {
                for lp in l..=l_max {
                    let mut acc = 0.0;
                    for (it, t) in tables.iter().enumerate() {
                        acc += gl.weights[it] * t.value(l, m) * t.value(lp, m);
                    }
                    acc *= 2.0 * PI;
                    let expect = if l == lp { 1.0 } else { 0.0 };
                    assert!(
                        (acc - expect).abs() < 1e-10,
                        "l={l} lp={lp} m={m}: {acc}"
                    );
                }
            }
        }
    }
}
