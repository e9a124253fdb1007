use std::sync::OnceLock;

use crate::{Error, Result};

/// Largest n for which ln(n!) is tabulated. Clebsch-Gordan sums for the
/// packet expansions need arguments up to l1+l2+l+1 ~ 1000 at N ~ 100.
const TABLE_LEN: usize = 4096;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; TABLE_LEN];
        // Kahan-compensated cumulative sum of ln k keeps the absolute error
        // near one ulp across the whole table.
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (n, slot) in t.iter_mut().enumerate().skip(2) {
            let y = (n as f64).ln() - comp;
            let s = sum + y;
            comp = (s - sum) - y;
            sum = s;
            *slot = sum;
        }
        t
    })
}

/// ln(n!) for non-negative n.
pub fn log_factorial(n: i64) -> Result<f64> {
    if n < 0 {
        return Err(Error::NegativeFactorial { n });
    }
    Ok(lnfac(n))
}

/// Table lookup without the sign check; panics beyond the supported range.
pub(crate) fn lnfac(n: i64) -> f64 {
    table()[n as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(log_factorial(0).unwrap(), 0.0);
        assert_eq!(log_factorial(1).unwrap(), 0.0);
    }

    #[test]
    fn ten_factorial_matches_exact_integer() {
        // 10! = 3628800 exactly.
        let expect = (3628800.0f64).ln();
        assert!((log_factorial(10).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn negative_input_is_a_domain_error() {
        assert_eq!(log_factorial(-1), Err(Error::NegativeFactorial { n: -1 }));
    }

    #[test]
    fn matches_exact_u128_factorials() {
        let mut f: u128 = 1;
        for n in 2..=33u32 {
            f *= n as u128;
            let expect = (f as f64).ln();
            let got = log_factorial(n as i64).unwrap();
            assert!(
                (got - expect).abs() <= 1e-13 * expect,
                "n={n}: {got} vs {expect}"
            );
        }
    }

    /// Big-integer oracle: ln(n!) from the exact decimal expansion of n!.
    fn ln_big_factorial(n: u64) -> f64 {
        let mut f = num::BigUint::from(1u64);
        for k in 2..=n {
            f *= k;
        }
        let digits = f.to_str_radix(10);
        let lead: f64 = digits[..digits.len().min(17)].parse().unwrap();
        let rest = digits.len().saturating_sub(17) as f64;
        lead.ln() + rest * std::f64::consts::LN_10
    }

    #[test]
    fn thirteen_significant_digits_up_to_400() {
        for n in [50u64, 100, 171, 200, 300, 400] {
            let expect = ln_big_factorial(n);
            let got = log_factorial(n as i64).unwrap();
            assert!(
                ((got - expect) / expect).abs() < 1e-13,
                "n={n}: {got} vs {expect}"
            );
        }
    }
}
