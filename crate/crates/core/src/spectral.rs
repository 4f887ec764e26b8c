//! Discrete-spectrum (periodic) correlation machinery: the Abel-Plana
//! formula, regularized sums Σ nᵖ cos(nF), and the discrete correlation
//! functions split into a lag-divergence part and a convergent thermal
//! part with the Planck factor 1/(e^{2πω/Ω} − 1).

use crate::analytic::{component_coeffs, CfComponent, CfLag, FieldPair};
use crate::field::{CfValue, Method};
use crate::kinematics::RotationParams;
use crate::quad;
use crate::summation::{neville_to_zero, NeumaierSum};
use crate::{Error, Result};
use num_complex::Complex64;
use std::cell::Cell;
use std::f64::consts::{PI, TAU};

// ---------------------------------------------------------------------------
// Abel-Plana
// ---------------------------------------------------------------------------

/// The three pieces of the Abel-Plana identity
/// Σ_{n≥0} f(n) = ∫₀^∞ f + f(0)/2 + i∫₀^∞ [f(it) − f(−it)]/(e^{2πt} − 1) dt,
/// together with the directly summed series for cross-checking.
#[derive(Clone, Copy, Debug)]
pub struct AbelPlanaEval {
    /// Σ f(n) by direct summation (meaningful when f decays fast enough
    /// for the term cutoff to converge).
    pub direct_sum: f64,
    pub integral_part: f64,
    pub half_f0: f64,
    pub correction_part: f64,
}

impl AbelPlanaEval {
    pub fn formula_total(&self) -> f64 {
        self.integral_part + self.half_f0 + self.correction_part
    }
}

/// Evaluation controls for [`abel_plana`].
#[derive(Clone, Copy, Debug)]
pub struct AbelPlanaConfig {
    /// Stop the direct sum once |f(n)| < term_tol (after n ≥ 16).
    pub term_tol: f64,
    pub max_terms: usize,
    /// Upper limit of the Planck-weighted correction integral; |f(it)|
    /// must stay well below e^{2πt} up to this point.
    pub t_max: f64,
}

impl Default for AbelPlanaConfig {
    fn default() -> Self {
        Self {
            term_tol: 1e-16,
            max_terms: 2_000_000,
            t_max: 40.0,
        }
    }
}

/// Evaluate both sides of the Abel-Plana identity for an analytic `f`
/// given as a complex function (real on the real axis).
pub fn abel_plana<F: Fn(Complex64) -> Complex64>(
    f: F,
    config: &AbelPlanaConfig,
) -> Result<AbelPlanaEval> {
    // direct sum
    let mut acc = NeumaierSum::new();
    let mut n = 0usize;
    loop {
        let term = f(Complex64::new(n as f64, 0.0)).re;
        acc.add(term);
        n += 1;
        if (n >= 16 && term.abs() < self::abs_cap(&acc, config.term_tol)) || n >= config.max_terms {
            break;
        }
    }
    let direct_sum = acc.total();

    // ∫₀^∞ f(x) dx via x = u/(1-u)
    let real_integrand = |u: f64| {
        let x = u / (1.0 - u);
        let jac = 1.0 / ((1.0 - u) * (1.0 - u));
        f(Complex64::new(x, 0.0)).re * jac
    };
    let integral_part = quad::adaptive(&real_integrand, 0.0, 1.0, 1e-13, 1e-12, 4000)?.value;

    let half_f0 = 0.5 * f(Complex64::new(0.0, 0.0)).re;

    // i[f(it) − f(−it)] = −2 Im f(it) for real-analytic f
    let corr_integrand = |t: f64| {
        if t == 0.0 {
            return 0.0; // finite limit; GK never lands exactly here anyway
        }
        -2.0 * f(Complex64::new(0.0, t)).im / (TAU * t).exp_m1()
    };
    let correction_part =
        quad::adaptive(&corr_integrand, 0.0, config.t_max, 1e-13, 1e-12, 4000)?.value;

    Ok(AbelPlanaEval {
        direct_sum,
        integral_part,
        half_f0,
        correction_part,
    })
}

fn abs_cap(acc: &NeumaierSum, tol: f64) -> f64 {
    tol * acc.total().abs().max(1.0)
}

// ---------------------------------------------------------------------------
// regularized sums and their thermal parts
// ---------------------------------------------------------------------------

/// Descriptor of a divergent zero-point piece: the coefficient of the
/// formal ∫ωᵖdω divergence and, at nonzero lag, its regularized value.
#[derive(Clone, Copy, Debug)]
pub struct DivergentPart {
    /// Power p of the formal ∫ωᵖ dω divergence.
    pub exponent: u32,
    /// Coefficient multiplying that formal integral.
    pub coefficient: f64,
    /// Regularized finite-lag value (6/F⁴ for p = 3, −1/F² for p = 1);
    /// absent when the lag vanishes.
    pub lag_value: Option<f64>,
}

/// An Abel-Plana decomposition: divergent descriptor + convergent thermal
/// value at phase F_d.
#[derive(Clone, Copy, Debug)]
pub struct SpectralSplit {
    pub divergent: DivergentPart,
    pub thermal: f64,
    pub f_d: f64,
}

impl SpectralSplit {
    /// Recombined regularized total, where the lag value exists.
    pub fn recombined(&self) -> Option<f64> {
        self.divergent.lag_value.map(|v| v + self.thermal)
    }
}

/// Distance from F to the nearest point of the pole lattice 2πℤ.
pub fn pole_distance(f_d: f64) -> f64 {
    (f_d - TAU * (f_d / TAU).round()).abs()
}

/// Regularized Σ_{n≥0} n³ cos(nF) in closed form:
/// (3 − 2sin²(F/2)) / (8 sin⁴(F/2)).
pub fn s3_closed_total(f_d: f64) -> f64 {
    let sh = (0.5 * f_d).sin();
    let s2 = sh * sh;
    (3.0 - 2.0 * s2) / (8.0 * s2 * s2)
}

/// Regularized Σ_{n≥0} n cos(nF) in closed form: −1/(4 sin²(F/2)).
pub fn s1_closed_total(f_d: f64) -> f64 {
    let sh = (0.5 * f_d).sin();
    -1.0 / (4.0 * sh * sh)
}

const POLE_TOL: f64 = 1e-9;

/// S_d = Σ n³ cos(nF_d) split into the lag-divergence term 6/F_d⁴ and the
/// periodic thermal remainder.
pub fn s3_closed(f_d: f64) -> Result<SpectralSplit> {
    if pole_distance(f_d) < POLE_TOL {
        return Err(Error::PoleLattice { f_d });
    }
    let lag = 6.0 / f_d.powi(4);
    let total = s3_closed_total(f_d);
    Ok(SpectralSplit {
        divergent: DivergentPart {
            exponent: 3,
            coefficient: 1.0,
            lag_value: Some(lag),
        },
        thermal: total - lag,
        f_d,
    })
}

/// Alternate all-poles series for S_d:
/// 6/F⁴ + 6 Σ_{n≥1} (2πn)^(−4) [(1 + F/2πn)^(−4) + (1 − F/2πn)^(−4)],
/// truncated at `n_terms` (tail ~ 1/(4π⁴ n_terms³)).
pub fn s3_alt_series(f_d: f64, n_terms: usize) -> Result<f64> {
    if f_d.abs() >= TAU {
        return Err(Error::OutOfRange {
            value: f_d,
            limit: TAU,
        });
    }
    if n_terms < 1 {
        return Err(Error::EmptySeries);
    }
    if pole_distance(f_d) < POLE_TOL {
        return Err(Error::PoleLattice { f_d });
    }
    let mut acc = NeumaierSum::new();
    for n in (1..=n_terms).rev() {
        let base = TAU * n as f64;
        let r = f_d / base;
        acc.add(((1.0 + r).powi(-4) + (1.0 - r).powi(-4)) / base.powi(4));
    }
    Ok(6.0 / f_d.powi(4) + 6.0 * acc.total())
}

/// Σ n cos(nF_d) split: thermal part −∫₀^∞ 2t cosh(tF)/(e^{2πt}−1) dt
/// evaluated numerically, divergent descriptor −1/F² for cross-checking
/// against the closed total −1/(4 sin²(F/2)).
pub fn s1_sum(f_d: f64) -> Result<SpectralSplit> {
    if pole_distance(f_d) < POLE_TOL {
        return Err(Error::PoleLattice { f_d });
    }
    let thermal = -thermal_integral_p1_abs(f_d)?;
    Ok(SpectralSplit {
        divergent: DivergentPart {
            exponent: 1,
            coefficient: 1.0,
            lag_value: Some(-1.0 / (f_d * f_d)),
        },
        thermal,
        f_d,
    })
}

/// ∫₀^∞ 2t³ cosh(tF)/(e^{2πt}−1) dt for |F| < 2π, in overflow-free form
/// t³[e^{−t(2π−F)} + e^{−t(2π+F)}]/(1 − e^{−2πt}).
pub fn thermal_integral_p3(f_d: f64) -> Result<f64> {
    thermal_integral(f_d, 3)
}

/// ∫₀^∞ 2t cosh(tF)/(e^{2πt}−1) dt for |F| < 2π.
pub fn thermal_integral_p1_abs(f_d: f64) -> Result<f64> {
    thermal_integral(f_d, 1)
}

fn thermal_integral(f_d: f64, p: i32) -> Result<f64> {
    let fa = f_d.abs();
    if fa >= TAU {
        return Err(Error::OutOfRange {
            value: f_d,
            limit: TAU,
        });
    }
    let decay = TAU - fa;
    let t_max = 60.0 / decay;
    let g = |t: f64| {
        if t < 1e-14 {
            // numerator ~ 2t^p, denominator ~ 2πt
            return if p == 1 { 1.0 / PI } else { t * t / PI };
        }
        let num = t.powi(p) * ((-t * (TAU - fa)).exp() + (-t * (TAU + fa)).exp());
        num / (-(-TAU * t).exp_m1())
    };
    Ok(quad::adaptive(&g, 0.0, t_max, 1e-13, 1e-12, 6000)?.value)
}

/// ε-regularized sum lim_{ε→0} Σ nᵖ cos(nF) e^{−εn}, extrapolated by
/// Neville over a geometric ε grid with compensated accumulation.
///
/// The grid stays on [1e−2, 1e−1]: below that the individual damped terms
/// reach magnitudes whose f64 evaluation noise dominates the limit.
pub fn abel_regularized_sum(p: u32, f_d: f64) -> f64 {
    let ratio = 10f64.powf(-0.125);
    let eps_grid: Vec<f64> = (0..9).map(|j| 0.1 * ratio.powi(j)).collect();
    let vals: Vec<f64> = eps_grid
        .iter()
        .map(|&eps| {
            let n_max = (45.0 / eps) as usize;
            let mut acc = NeumaierSum::new();
            for n in 1..=n_max {
                let x = n as f64;
                acc.add(x.powi(p as i32) * (x * f_d).cos() * (-eps * x).exp());
            }
            acc.total()
        })
        .collect();
    neville_to_zero(&eps_grid, &vals)
}

// ---------------------------------------------------------------------------
// discrete correlation functions
// ---------------------------------------------------------------------------

/// The phase F_d = δ[1 − k̂_y β sin(δ/2)/(δ/2)] at a wave direction given
/// by spherical angles, k̂_y = sinθ sinφ.
#[derive(Clone, Copy, Debug)]
pub struct PhaseArg {
    pub f_d: f64,
    pub theta: f64,
    pub phi: f64,
}

/// Build the phase argument; satisfies |F_d| ≤ |δ|(1 + β).
pub fn phase_arg(delta: f64, beta: f64, theta: f64, phi: f64) -> PhaseArg {
    let ky = theta.sin() * phi.sin();
    let half = 0.5 * delta;
    let s = if half.abs() < 1e-4 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    PhaseArg {
        f_d: delta * (1.0 - ky * beta * s),
        theta,
        phi,
    }
}

/// Controls for the discrete-CF angular quadrature.
#[derive(Clone, Copy, Debug)]
pub struct DiscreteCfConfig {
    pub theta_abs_tol: f64,
    pub theta_rel_tol: f64,
    /// Node cap for the doubling φ trapezoid; 0 means the default 2¹⁴.
    pub phi_nodes: usize,
    /// Nodes with |F_d mod 2π| below this guard are perturbed by half a
    /// φ step and counted.
    pub pole_guard: f64,
}

impl Default for DiscreteCfConfig {
    fn default() -> Self {
        Self {
            theta_abs_tol: 1e-11,
            theta_rel_tol: 1e-10,
            phi_nodes: 0,
            pole_guard: 1e-6,
        }
    }
}

/// A discrete-spectrum CF: regularized total, thermal-only variant, and
/// the number of quadrature nodes nudged off the pole lattice.
#[derive(Clone, Copy, Debug)]
pub struct DiscreteCf {
    pub total: CfValue,
    pub thermal: CfValue,
    pub perturbed_nodes: usize,
}

/// Shared angular quadrature: (1/4π²)∫dO [coeff structure]·S(F_d).
fn discrete_angular<S: Fn(f64) -> f64>(
    coeffs: [f64; 4],
    lag: &CfLag,
    s_of_f: S,
    config: &DiscreteCfConfig,
) -> Result<(f64, f64, usize)> {
    let max_phi_nodes = if config.phi_nodes > 0 {
        config.phi_nodes
    } else {
        1 << 14
    };
    // δ ∈ 2πZ puts F_d on the pole lattice at every wave direction
    // (kconst vanishes there), so no node perturbation can help
    if pole_distance(lag.delta) < config.pole_guard
        && (lag.kconst * lag.delta).abs() < config.pole_guard
    {
        return Err(Error::PoleLattice { f_d: lag.delta });
    }
    let perturbed = Cell::new(0usize);
    let stuck_node = Cell::new(None::<(f64, f64, f64)>);
    let integrand_theta = |theta: f64| {
        let st = theta.sin();
        let phi_integrand = |phi: f64| {
            let mut phi = phi;
            let mut f_d = lag.delta * (1.0 + lag.kconst * st * phi.sin());
            if pole_distance(f_d) < config.pole_guard {
                // nudge the node by half the finest grid step and count it
                phi += 0.5 * TAU / max_phi_nodes as f64;
                f_d = lag.delta * (1.0 + lag.kconst * st * phi.sin());
                perturbed.set(perturbed.get() + 1);
                if pole_distance(f_d) < config.pole_guard {
                    // perturbation cannot move off the lattice (e.g. δ ∈ 2πZ)
                    stuck_node.set(Some((f_d, theta, phi)));
                    return f64::NAN;
                }
            }
            let (sp, cp) = phi.sin_cos();
            let ky = st * sp;
            let kx = st * cp;
            let structure = coeffs[0] + coeffs[1] * ky + coeffs[2] * kx * kx + coeffs[3] * ky * ky;
            structure * s_of_f(f_d)
        };
        let (v, _) = quad::trapezoid_periodic_capped(
            &phi_integrand,
            config.theta_abs_tol,
            1e-13,
            max_phi_nodes,
        );
        v * st
    };
    let pole_error = || match stuck_node.get() {
        Some((f_d, theta, phi)) => Error::PoleAtNode { f_d, theta, phi },
        None => Error::PoleLattice { f_d: lag.delta },
    };
    let q = match quad::adaptive(
        &integrand_theta,
        0.0,
        PI,
        config.theta_abs_tol,
        config.theta_rel_tol,
        4000,
    ) {
        Ok(q) => q,
        Err(Error::QuadratureNotConverged { estimate, .. }) if estimate.is_nan() => {
            return Err(pole_error())
        }
        Err(e) => return Err(e),
    };
    if q.value.is_nan() {
        return Err(pole_error());
    }
    Ok((
        q.value / (4.0 * PI * PI),
        q.error / (4.0 * PI * PI),
        perturbed.get(),
    ))
}

/// Discrete-spectrum ⟨E_(1)E_(1)⟩:
/// (cħk₀⁴/4π²){γ²cosδ ∫dO S_d + 2βγ²cos(δ/2) ∫dO k̂_y S_d + ...} with
/// S_d from the closed form; `thermal` uses the bracketed remainder only.
pub fn discrete_em_cf_e11(lag: &CfLag, config: &DiscreteCfConfig) -> Result<DiscreteCf> {
    let params = RotationParams::from_beta(1.0, lag.beta)?;
    let component = CfComponent::new(FieldPair::Ee, 1, 1)?;
    let coeffs = component_coeffs(&component, &params, lag.delta);
    let (total, terr, p1) = discrete_angular(coeffs, lag, s3_closed_total, config)?;
    let (thermal, herr, p2) = discrete_angular(
        coeffs,
        lag,
        |f| s3_closed_total(f) - 6.0 / f.powi(4),
        config,
    )?;
    Ok(DiscreteCf {
        total: CfValue {
            value: total,
            std_error: terr,
            method: Method::DiscreteSum,
        },
        thermal: CfValue {
            value: thermal,
            std_error: herr,
            method: Method::DiscreteSum,
        },
        perturbed_nodes: p1.max(p2),
    })
}

/// Same angular assembly with the truncated sum Σ_{n≤n_max} n³cos(nF_d);
/// this is the deterministic target of the truncated discrete Monte Carlo.
pub fn discrete_em_cf_e11_truncated(
    lag: &CfLag,
    n_max: u32,
    config: &DiscreteCfConfig,
) -> Result<f64> {
    let params = RotationParams::from_beta(1.0, lag.beta)?;
    let component = CfComponent::new(FieldPair::Ee, 1, 1)?;
    let coeffs = component_coeffs(&component, &params, lag.delta);
    let s_trunc = |f: f64| {
        let mut acc = NeumaierSum::new();
        for n in 1..=n_max {
            let x = n as f64;
            acc.add(x * x * x * (x * f).cos());
        }
        acc.total()
    };
    let (total, _, _) = discrete_angular(coeffs, lag, s_trunc, config)?;
    Ok(total)
}

/// Discrete-spectrum scalar CF (ħck₀²/4π²)∫dO Σ n cos(nF_d).
///
/// The thermal variant integrates the Planck-weighted remainder, whose
/// value equals 1/F² − 1/(4sin²(F/2)) (verified against the numeric
/// Planck integral in tests).
pub fn discrete_scalar_cf(lag: &CfLag, config: &DiscreteCfConfig) -> Result<DiscreteCf> {
    let coeffs = [1.0, 0.0, 0.0, 0.0];
    let (total, terr, p1) = discrete_angular(coeffs, lag, s1_closed_total, config)?;
    let (thermal, herr, p2) =
        discrete_angular(coeffs, lag, |f| s1_closed_total(f) + 1.0 / (f * f), config)?;
    Ok(DiscreteCf {
        total: CfValue {
            value: total,
            std_error: terr,
            method: Method::DiscreteSum,
        },
        thermal: CfValue {
            value: thermal,
            std_error: herr,
            method: Method::DiscreteSum,
        },
        perturbed_nodes: p1.max(p2),
    })
}

/// Scalar analogue of the truncated angular assembly,
/// (ħck₀²/4π²)∫dO Σ_{n≤n_max} n cos(nF_d); the target of the truncated
/// discrete scalar Monte Carlo.
pub fn discrete_scalar_cf_truncated(
    lag: &CfLag,
    n_max: u32,
    config: &DiscreteCfConfig,
) -> Result<f64> {
    let s_trunc = |f: f64| {
        let mut acc = NeumaierSum::new();
        for n in 1..=n_max {
            let x = n as f64;
            acc.add(x * (x * f).cos());
        }
        acc.total()
    };
    let (total, _, _) = discrete_angular([1.0, 0.0, 0.0, 0.0], lag, s_trunc, config)?;
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lag(beta: f64, delta: f64) -> CfLag {
        let p = RotationParams::from_beta(1.0, beta).unwrap();
        CfLag::new(&p, delta / (p.omega * p.gamma)).unwrap()
    }

    #[test]
    fn abel_plana_exponential() {
        let eval = abel_plana(|z| (-z).exp(), &AbelPlanaConfig::default()).unwrap();
        let exact = 1.0 / (1.0 - (-1.0f64).exp());
        assert!((eval.direct_sum - exact).abs() < 1e-12);
        assert!((eval.formula_total() - exact).abs() < 1e-10);
        assert_relative_eq!(eval.half_f0, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn abel_plana_cubic_exponential() {
        let eval = abel_plana(|z| z * z * z * (-z).exp(), &AbelPlanaConfig::default()).unwrap();
        let x = (-1.0f64).exp();
        let exact = x * (1.0 + 4.0 * x + x * x) / (1.0 - x).powi(4);
        assert!((eval.direct_sum - exact).abs() < 1e-12);
        assert!((eval.formula_total() - exact).abs() < 1e-8);
    }

    #[test]
    fn abel_plana_inverse_square() {
        // Σ (1+n)^-2 = π²/6; the direct sum converges too slowly for the
        // term cutoff, so only the formula side is compared to the oracle.
        let one = Complex64::new(1.0, 0.0);
        let eval = abel_plana(
            |z| ((one + z) * (one + z)).inv(),
            &AbelPlanaConfig::default(),
        )
        .unwrap();
        let exact = PI * PI / 6.0;
        assert!(
            (eval.formula_total() - exact).abs() < 1e-8,
            "formula {} vs {}",
            eval.formula_total(),
            exact
        );
    }

    #[test]
    fn s3_closed_at_pi() {
        let s = s3_closed(PI).unwrap();
        let total = s.recombined().unwrap();
        assert!((total - 0.125).abs() < 1e-15);
        // thermal remainder 1/8 - 6/π⁴
        assert_relative_eq!(s.thermal, 0.125 - 6.0 / PI.powi(4), max_relative = 1e-13);
        assert!((s.thermal - 6.340_410_647_2e-2).abs() < 1e-11);
    }

    #[test]
    fn s3_closed_matches_epsilon_regularization() {
        for f in [1.0, 2.0, 3.0] {
            let closed = s3_closed(f).unwrap().recombined().unwrap();
            let reg = abel_regularized_sum(3, f);
            assert!(
                (closed - reg).abs() < 1e-6,
                "F = {f}: closed {closed}, regularized {reg}"
            );
        }
    }

    #[test]
    fn s3_pole_rejected() {
        assert!(matches!(s3_closed(0.0), Err(Error::PoleLattice { .. })));
        assert!(matches!(s3_closed(TAU), Err(Error::PoleLattice { .. })));
    }

    #[test]
    fn s3_alt_series_small_f_constant_via_zeta4() {
        // ζ(4) by direct summation
        let mut zeta4 = NeumaierSum::new();
        for n in (1..=1_000_000u64).rev() {
            zeta4.add(1.0 / (n as f64).powi(4));
        }
        let constant = 12.0 * zeta4.total() / TAU.powi(4);
        assert_relative_eq!(constant, 1.0 / 120.0, max_relative = 1e-10);
        let f = 0.01;
        let series_part = s3_alt_series(f, 100_000).unwrap() - 6.0 / f.powi(4);
        assert!((series_part - constant).abs() < 1e-6);
    }

    #[test]
    fn s3_alt_series_matches_closed() {
        let f = 1.0;
        let alt = s3_alt_series(f, 10_000).unwrap();
        let closed = s3_closed(f).unwrap().recombined().unwrap();
        assert_relative_eq!(alt, closed, max_relative = 1e-10);
    }

    #[test]
    fn s3_alt_series_even_and_guarded() {
        assert_eq!(
            s3_alt_series(1.3, 1000).unwrap(),
            s3_alt_series(-1.3, 1000).unwrap()
        );
        assert!(s3_alt_series(TAU, 10).is_err());
        assert!(s3_alt_series(1.0, 0).is_err());
    }

    #[test]
    fn s1_regularized_total_at_pi() {
        let s = s1_sum(PI).unwrap();
        assert_relative_eq!(s1_closed_total(PI), -0.25, max_relative = 1e-14);
        // ε-regularization oracle
        let reg = abel_regularized_sum(1, PI);
        assert!((reg + 0.25).abs() < 1e-6);
        // recombination against the closed total
        assert_relative_eq!(
            s.recombined().unwrap(),
            s1_closed_total(PI),
            max_relative = 1e-9
        );
    }

    #[test]
    #[allow(clippy::approx_constant)] // 6.28 is a probe point just inside 2π
    fn s1_thermal_blows_up_toward_two_pi() {
        let a = s1_sum(6.2).unwrap().thermal.abs();
        let b = s1_sum(6.28).unwrap().thermal.abs();
        assert!(b > 100.0 * a, "no blow-up trend: {a} vs {b}");
    }

    #[test]
    fn s1_even_in_f() {
        let a = s1_sum(1.7).unwrap();
        let b = s1_sum(-1.7).unwrap();
        assert_relative_eq!(a.thermal, b.thermal, max_relative = 1e-12);
    }

    #[test]
    fn thermal_p3_at_zero_is_one_over_120() {
        let v = thermal_integral_p3(0.0).unwrap();
        assert!((v - 1.0 / 120.0).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn thermal_p3_matches_closed_remainder() {
        for f in [0.5, 1.0, 2.0, 3.0, PI, 6.0] {
            let quad_v = thermal_integral_p3(f).unwrap();
            let closed = s3_closed(f).unwrap().thermal;
            assert!(
                (quad_v - closed).abs() < 1e-10 * closed.abs().max(1.0),
                "F = {f}: {quad_v} vs {closed}"
            );
        }
    }

    #[test]
    fn thermal_p1_matches_closed_remainder() {
        for f in [0.5, 1.0, 2.0, PI] {
            let quad_v = -thermal_integral_p1_abs(f).unwrap();
            let closed = s1_closed_total(f) + 1.0 / (f * f);
            assert!((quad_v - closed).abs() < 1e-10 * closed.abs().max(1.0));
        }
    }

    #[test]
    fn phase_arg_bound() {
        for delta in [0.3, 1.0, 4.0] {
            for beta in [0.2, 0.9] {
                for theta in [0.3, 1.2, 2.8] {
                    for phi in [0.0, 1.0, 4.4] {
                        let pa = phase_arg(delta, beta, theta, phi);
                        assert!(pa.f_d.abs() <= delta.abs() * (1.0 + beta) + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn discrete_em_frozen_oracle() {
        // frozen from an independent implementation of the angular reduction
        let cf = discrete_em_cf_e11(&lag(0.6, 1.0), &DiscreteCfConfig::default()).unwrap();
        assert_relative_eq!(cf.total.value, 17.025_275_733_339_05, max_relative = 1e-9);
        assert_relative_eq!(
            cf.thermal.value,
            2.787_098_062_359_873e-3,
            max_relative = 1e-8
        );
        assert_eq!(cf.perturbed_nodes, 0);
    }

    #[test]
    fn discrete_em_periodic_in_delta() {
        let cfg = DiscreteCfConfig::default();
        let a = discrete_em_cf_e11(&lag(0.6, 1.0), &cfg).unwrap();
        let b = discrete_em_cf_e11(&lag(0.6, 1.0 + TAU), &cfg).unwrap();
        // the CF itself is exactly 2π-periodic; its divergent/thermal split
        // is not (6/F_d⁴ picks a lag branch), so only totals are compared
        assert_relative_eq!(a.total.value, b.total.value, max_relative = 1e-10);
    }

    #[test]
    fn discrete_em_beta_zero_factorizes() {
        let delta = 1.0;
        let cf = discrete_em_cf_e11(&lag(1e-12, delta), &DiscreteCfConfig::default()).unwrap();
        let s = s3_closed_total(delta);
        let ch = (0.5 * delta).cos();
        let sh = (0.5 * delta).sin();
        // angular constants: ∫dO = 4π, ∫dO k̂_y = 0, ∫dO k̂_x² = ∫dO k̂_y² = 4π/3
        let manual =
            (delta.cos() * 4.0 * PI + (-ch * ch) * 4.0 * PI / 3.0 + sh * sh * 4.0 * PI / 3.0) * s
                / (4.0 * PI * PI);
        assert_relative_eq!(cf.total.value, manual, max_relative = 1e-10);
    }

    #[test]
    fn discrete_em_whole_period_is_pole() {
        assert!(discrete_em_cf_e11(&lag(0.5, TAU), &DiscreteCfConfig::default()).is_err());
    }

    #[test]
    fn discrete_scalar_frozen_oracle_and_reduction() {
        let cfg = DiscreteCfConfig::default();
        let cf = discrete_scalar_cf(&lag(0.6, 1.0), &cfg).unwrap();
        assert_relative_eq!(
            cf.total.value,
            -5.038_799_094_537_877e-1,
            max_relative = 1e-9
        );
        // beta -> 0: 4π × s1(δ) / 4π²
        let cf0 = discrete_scalar_cf(&lag(1e-12, 1.0), &cfg).unwrap();
        assert_relative_eq!(
            cf0.total.value,
            s1_closed_total(1.0) / PI,
            max_relative = 1e-10
        );
    }

    #[test]
    fn discrete_scalar_thermal_anisotropic_integrand() {
        // F_d (hence the Planck-weighted integrand) depends on φ when β > 0
        let a = phase_arg(1.0, 0.6, PI / 2.0, PI / 2.0).f_d;
        let b = phase_arg(1.0, 0.6, PI / 2.0, 0.0).f_d;
        assert!((a - b).abs() > 0.1);
    }

    #[test]
    fn discrete_cfs_even_in_delta() {
        let cfg = DiscreteCfConfig::default();
        let a = discrete_em_cf_e11(&lag(0.5, 1.3), &cfg).unwrap();
        let b = discrete_em_cf_e11(&lag(0.5, -1.3), &cfg).unwrap();
        assert_relative_eq!(a.total.value, b.total.value, max_relative = 1e-12);
        let c = discrete_scalar_cf(&lag(0.5, 1.3), &cfg).unwrap();
        let d = discrete_scalar_cf(&lag(0.5, -1.3), &cfg).unwrap();
        assert_relative_eq!(c.total.value, d.total.value, max_relative = 1e-12);
    }
}
