use ndarray::Array2;

use crate::Complex;

/// Ladder matrix element sqrt(l(l+1) - m(m+1)) for raising out of |l,m⟩;
/// zero at and beyond the top of the ladder.
pub fn ladder_coeff(l: i64, m: i64) -> f64 {
    let v = (l * (l + 1) - m * (m + 1)) as f64;
    v.max(0.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Lz,
    LPlus,
    LMinus,
    Lx,
    Ly,
    L2,
}

/// A (2l+1)×(2l+1) operator block in the |l,m⟩ basis, rows and columns
/// indexed by m = -l..+l in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    l: i64,
    entries: Array2<Complex>,
}

impl OperatorMatrix {
    pub fn from_entries(l: i64, entries: Array2<Complex>) -> Self {
        let dim = (2 * l + 1) as usize;
        assert_eq!(entries.shape(), [dim, dim]);
        Self { l, entries }
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn dim(&self) -> usize {
        (2 * self.l + 1) as usize
    }

    pub fn entries(&self) -> &Array2<Complex> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<Complex> {
        self.entries
    }

    /// Matrix element ⟨l m_row| O |l m_col⟩.
    pub fn element(&self, m_row: i64, m_col: i64) -> Complex {
        self.entries[[(m_row + self.l) as usize, (m_col + self.l) as usize]]
    }

    pub fn apply(&self, v: &[Complex]) -> Vec<Complex> {
        assert_eq!(v.len(), self.dim());
        self.entries
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.l, other.l);
        OperatorMatrix {
            l: self.l,
            entries: self.entries.dot(&other.entries),
        }
    }

    pub fn commutator(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.l, other.l);
        OperatorMatrix {
            l: self.l,
            entries: self.entries.dot(&other.entries) - other.entries.dot(&self.entries),
        }
    }

    pub fn scaled(&self, factor: Complex) -> OperatorMatrix {
        OperatorMatrix {
            l: self.l,
            entries: self.entries.mapv(|z| z * factor),
        }
    }

    pub fn add(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.l, other.l);
        OperatorMatrix {
            l: self.l,
            entries: &self.entries + &other.entries,
        }
    }

    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.l, other.l);
        OperatorMatrix {
            l: self.l,
            entries: &self.entries - &other.entries,
        }
    }

    /// Largest entry magnitude; handy for entrywise comparisons.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Standard angular-momentum matrices in the |l,m⟩ basis.
pub fn operator_matrix(l: i64, kind: OperatorKind) -> OperatorMatrix {
    assert!(l >= 0, "l must be non-negative");
    let dim = (2 * l + 1) as usize;
    let mut a = Array2::<Complex>::zeros((dim, dim));
    let idx = |m: i64| (m + l) as usize;
    match kind {
        OperatorKind::Lz => {
            for m in -l..=l {
                a[[idx(m), idx(m)]] = Complex::new(m as f64, 0.0);
            }
        }
        OperatorKind::LPlus => {
            for m in -l..l {
                a[[idx(m + 1), idx(m)]] = Complex::new(ladder_coeff(l, m), 0.0);
            }
        }
        OperatorKind::LMinus => {
            for m in -l..l {
                a[[idx(m), idx(m + 1)]] = Complex::new(ladder_coeff(l, m), 0.0);
            }
        }
        OperatorKind::Lx => {
            for m in -l..l {
                let c = 0.5 * ladder_coeff(l, m);
                a[[idx(m + 1), idx(m)]] = Complex::new(c, 0.0);
                a[[idx(m), idx(m + 1)]] = Complex::new(c, 0.0);
            }
        }
        OperatorKind::Ly => {
            for m in -l..l {
                let c = 0.5 * ladder_coeff(l, m);
                a[[idx(m + 1), idx(m)]] = Complex::new(0.0, -c);
                a[[idx(m), idx(m + 1)]] = Complex::new(0.0, c);
            }
        }
        OperatorKind::L2 => {
            let c = Complex::new((l * (l + 1)) as f64, 0.0);
            for i in 0..dim {
                a[[i, i]] = c;
            }
        }
    }
    OperatorMatrix { l, entries: a }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_block_at_l0() {
        let lz = operator_matrix(0, OperatorKind::Lz);
        assert_eq!(lz.dim(), 1);
        assert_eq!(lz.element(0, 0), Complex::new(0.0, 0.0));
    }

    #[test]
    fn lplus_entries_at_l1() {
        let lp = operator_matrix(1, OperatorKind::LPlus);
        let s2 = 2.0f64.sqrt();
        assert!((lp.element(0, -1).re - s2).abs() < 1e-15);
        assert!((lp.element(1, 0).re - s2).abs() < 1e-15);
        assert_eq!(lp.element(-1, 0).norm(), 0.0);
    }

    #[test]
    fn l2_is_llp1_identity() {
        let l2 = operator_matrix(1, OperatorKind::L2);
        for m in -1..=1 {
            assert_eq!(l2.element(m, m), Complex::new(2.0, 0.0));
        }
    }

    #[test]
    fn lx_ly_hermitian() {
        for l in 0..=12 {
            for kind in [OperatorKind::Lx, OperatorKind::Ly] {
                let op = operator_matrix(l, kind);
                for mr in -l..=l {
                    for mc in -l..=l {
                        let a = op.element(mr, mc);
                        let b = op.element(mc, mr).conj();
                        assert!((a - b).norm() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn commutator_algebra_to_l_30() {
        for l in 0..=30 {
            let lx = operator_matrix(l, OperatorKind::Lx);
            let ly = operator_matrix(l, OperatorKind::Ly);
            let lz = operator_matrix(l, OperatorKind::Lz);
            let comm = lx.commutator(&ly);
            let expect = lz.scaled(Complex::new(0.0, 1.0));
            assert!(
                comm.sub(&expect).max_abs() < 1e-12,
                "l={l}: [Lx,Ly] != iLz"
            );
        }
    }
}
