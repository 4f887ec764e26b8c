use thiserror::Error;

/// Errors surfaced by the numeric and physics layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("beta = {beta} is at or beyond the light cylinder (beta must satisfy 0 <= beta < 1)")]
    LightCylinder { beta: f64 },

    #[error("beta = {beta} too close to the light cylinder (gamma^2 overflow risk, limit 0.999)")]
    NearLightCylinder { beta: f64 },

    #[error("zero proper-time lag: the correlation function diverges at dtau = 0")]
    ZeroLag,

    #[error("argument {value} outside the open interval (-{limit}, {limit})")]
    OutOfRange { value: f64, limit: f64 },

    #[error("F_d = {f_d} sits on the pole lattice 2*pi*n of the periodic sum")]
    PoleLattice { f_d: f64 },

    #[error(
        "quadrature node (theta = {theta}, phi = {phi}) pinned to the pole lattice: F_d = {f_d}"
    )]
    PoleAtNode { f_d: f64, theta: f64, phi: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error {error} after {intervals} intervals")]
    QuadratureNotConverged {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("empty spectral band: k_min = {k_min} must be < k_max = {k_max}")]
    EmptyBand { k_min: f64, k_max: f64 },

    #[error("mode sampling needs at least one cell / one harmonic")]
    NoModes,

    #[error("need at least 2 Monte Carlo realizations, got {0}")]
    TooFewRealizations(usize),

    #[error("field projection formulas are derived for Frenet-Serret tetrads only")]
    FermiWalkerProjection,

    #[error("component index {0} outside 1..=3")]
    BadComponentIndex(usize),

    #[error("invalid mode line {line}: {reason}")]
    ModeParse { line: usize, reason: String },

    #[error("series/summation needs at least one term")]
    EmptySeries,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
