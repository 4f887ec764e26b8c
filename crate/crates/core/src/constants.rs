//! Physical constants. The SI defining constants (h, k_B, c) are exact;
//! ħ and σ carry their correctly-rounded derived values so that
//! identities like 4σ/c = π²k_B⁴/(15ħ³c³) hold at machine precision.
//!
//! Only the SI-facing layer uses these; everything internal runs with
//! c = ħ = k₀ = 1.

/// Speed of light in vacuum [m/s] (exact).
pub const C: f64 = 2.997_924_58e8;

/// Planck constant [J s] (exact).
pub const H_PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant ħ = h/2π [J s].
pub const HBAR: f64 = 1.054_571_817_646_156_5e-34;

/// Boltzmann constant [J/K] (exact).
pub const KB: f64 = 1.380_649e-23;

/// Stefan-Boltzmann constant σ = π²k_B⁴/(60ħ³c²) [W m⁻² K⁻⁴].
pub const SIGMA: f64 = 5.670_374_419_184_429_4e-8;

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn hbar_is_h_over_two_pi() {
        assert!((HBAR / (H_PLANCK / (2.0 * PI)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stefan_boltzmann_is_derived() {
        let sigma = PI * PI * KB.powi(4) / (60.0 * HBAR.powi(3) * C * C);
        assert!((sigma / SIGMA - 1.0).abs() < 1e-14, "sigma = {sigma:e}");
    }
}
