use crate::Complex;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum Error {
    #[error("factorial argument must be non-negative, got {n}")]
    NegativeFactorial { n: i64 },

    #[error("invalid quantum numbers l={l}, m={m}")]
    QuantumNumberRange { l: i64, m: i64 },

    #[error("eta = {eta} is singular here (|1 - eta^2| or |1 -/+ eta| below tolerance)")]
    SingularEta { eta: Complex },

    #[error(
        "eigenvalue matching for l={l} is ambiguous: {w_a} and {w_b} both map to k={k}"
    )]
    DegenerateKMatch { l: i64, k: i64, w_a: Complex, w_b: Complex },

    #[error("Radcliffe parametrization singular at theta0={theta0}, phi0={phi0}")]
    ParametrizationSingularity { theta0: f64, phi0: f64 },

    #[error("spread parameter N={n_spread} too large; evaluate the density in log space")]
    AmplitudeOverflow { n_spread: f64 },

    #[error(
        "truncation at l_max={l_max} drops weight {tail:.3e} above tolerance {tol:.3e}; increase l_max"
    )]
    TruncationTail { l_max: usize, tail: f64, tol: f64 },

    #[error("packet annihilated: remaining norm below 1e-12")]
    EmptyPacket,

    #[error("invalid fraction {m}/{n}: need n >= 1, 0 <= m < n, gcd(m, n) = 1")]
    InvalidFraction { m: u64, n: u64 },

    #[error("invalid packet document: {0}")]
    PacketDocument(String),
}
