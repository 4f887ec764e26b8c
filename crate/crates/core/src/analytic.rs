//! Continuous-spectrum correlation functions on the rotating worldline,
//! evaluated two independent ways: adaptive angular quadrature of the
//! general reduced expressions, and elementary closed forms.
//!
//! All two-point functions here are *symmetrized over ordering*,
//! CF(a,b; δ) = ½⟨x_(a)(τ₁)y_(b)(τ₂) + y_(b)(τ₁)x_(a)(τ₂)⟩, which is the
//! even-in-δ part. Diagonal components have no odd part, so this only
//! matters for cross components (whose odd part is what the plain product
//! would add); the even part of every EE and HH cross component vanishes.
//!
//! Units: c = ħ = 1 and Ω = 1 by default, so EM values are the
//! dimensionless coefficients of ħcΩ⁴/c⁴ and scalar values those of
//! ħΩ²/c.

use crate::field::{CfValue, Method};
use crate::kinematics::{projection_rows, RotationParams};
use crate::quad;
use crate::summation::neville_to_zero;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Which pair of projected fields a correlation function couples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldPair {
    Ee,
    Hh,
    Eh,
}

/// A correlation-function component: field pair plus 1-based indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CfComponent {
    pub pair: FieldPair,
    pub a: usize,
    pub b: usize,
}

impl CfComponent {
    pub fn new(pair: FieldPair, a: usize, b: usize) -> Result<Self> {
        for idx in [a, b] {
            if !(1..=3).contains(&idx) {
                return Err(Error::BadComponentIndex(idx));
            }
        }
        Ok(Self { pair, a, b })
    }

    /// Row indices into the 6-component projected field vector.
    pub(crate) fn row_indices(&self) -> (usize, usize) {
        match self.pair {
            FieldPair::Ee => (self.a - 1, self.b - 1),
            FieldPair::Hh => (self.a + 2, self.b + 2),
            FieldPair::Eh => (self.a - 1, self.b + 2),
        }
    }
}

/// Dimensionless lag bundle for the continuous-spectrum CFs.
#[derive(Clone, Copy, Debug)]
pub struct CfLag {
    /// δ = Ωγ(τ₂−τ₁).
    pub delta: f64,
    pub beta: f64,
    pub gamma: f64,
    /// The constant k = −β sin(δ/2)/(δ/2) (not a wave vector).
    pub kconst: f64,
    /// Lab-frame interval t₂−t₁ = γ(τ₂−τ₁); cΔt with c = 1.
    pub lab_dt: f64,
}

/// sin(x)/x with a series branch below the cancellation threshold.
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

impl CfLag {
    pub fn new(params: &RotationParams, dtau: f64) -> Result<Self> {
        if dtau == 0.0 {
            return Err(Error::ZeroLag);
        }
        let delta = params.omega * params.gamma * dtau;
        Ok(Self {
            delta,
            beta: params.beta,
            gamma: params.gamma,
            kconst: -params.beta * sinc(0.5 * delta),
            lab_dt: params.gamma * dtau,
        })
    }
}

// ---------------------------------------------------------------------------
// closed-form angular integrals
// ---------------------------------------------------------------------------

/// ∫₀^π sin^p θ (1−k²sin²θ)^(−7/2) dθ for p ∈ {1,3,5}, |k| < 1.
pub fn theta_integral(p: u8, kconst: f64) -> Result<f64> {
    if kconst.abs() >= 1.0 {
        return Err(Error::OutOfRange {
            value: kconst,
            limit: 1.0,
        });
    }
    let d = 1.0 - kconst * kconst;
    Ok(match p {
        1 => 2.0 / (5.0 * d) + 8.0 / (15.0 * d * d) + 16.0 / (15.0 * d * d * d),
        3 => 4.0 / (15.0 * d * d) + 16.0 / (15.0 * d * d * d),
        5 => 16.0 / (15.0 * d * d * d),
        _ => panic!("theta_integral defined for p in {{1,3,5}}"),
    })
}

/// ∫₀^{2π} sin^m φ (1+b sinφ)^(−4) dφ for m ∈ {0,1,2}, |b| < 1.
pub fn azimuthal_integral(m: u8, b: f64) -> Result<f64> {
    if b.abs() >= 1.0 {
        return Err(Error::OutOfRange {
            value: b,
            limit: 1.0,
        });
    }
    let d = (1.0 - b * b).powf(3.5);
    Ok(match m {
        0 => PI * (2.0 + 3.0 * b * b) / d,
        1 => -b * PI * (4.0 + b * b) / d,
        2 => PI * (1.0 + 4.0 * b * b) / d,
        _ => panic!("azimuthal_integral defined for m in {{0,1,2}}"),
    })
}

// ---------------------------------------------------------------------------
// radial kernels
// ---------------------------------------------------------------------------

/// ∫_{k_min}^{k_max} k³ cos(kx) dk in closed form.
pub fn band_k3_cos(x: f64, k_min: f64, k_max: f64) -> f64 {
    if (x * k_max).abs() < 1e-4 {
        // series in (kx)²
        let quart = |k: f64| k.powi(4) / 4.0 - x * x * k.powi(6) / 12.0;
        return quart(k_max) - quart(k_min);
    }
    let anti = |k: f64| {
        let (s, c) = (k * x).sin_cos();
        (k * k * k / x) * s + (3.0 * k * k / (x * x)) * c
            - (6.0 * k / (x * x * x)) * s
            - (6.0 / (x * x * x * x)) * c
    };
    anti(k_max) - anti(k_min)
}

/// ∫_{k_min}^{k_max} k cos(kx) dk in closed form.
pub fn band_k1_cos(x: f64, k_min: f64, k_max: f64) -> f64 {
    if (x * k_max).abs() < 1e-4 {
        let half = |k: f64| k * k / 2.0 - x * x * k.powi(4) / 8.0;
        return half(k_max) - half(k_min);
    }
    let anti = |k: f64| {
        let (s, c) = (k * x).sin_cos();
        c / (x * x) + k * s / x
    };
    anti(k_max) - anti(k_min)
}

/// Abel-regularized ∫₀^∞ k³cos(kx)e^(−εk) dk for one ε.
///
/// Integrated in the scaled variable t = k|x| (one GK15 panel per quarter
/// cosine period, compensated accumulation): the k-space form conditions
/// like x⁷ and drowns in cancellation for large |x|, the t-space form
/// does not.
pub fn regularized_k3_cos(x: f64, eps: f64) -> f64 {
    let eta = eps * x.abs();
    let g = |t: f64| t * t * t * t.cos() * (-eta * t).exp();
    let t_max = 42.0 / eta;
    quad::oscillatory_tail(&g, 0.5 * PI, t_max) / x.powi(4)
}

/// ε→0 extrapolation of the regularized k-integral; converges to 6/x⁴.
///
/// The damped integral is even in ε, so the extrapolation runs in ε².
/// The ε grid scales with 1/x (fixed in the oscillation-count variable
/// η = ε·x); pushing ε lower hits f64 cancellation noise instead of
/// improving the limit.
pub fn regularized_k3_cos_extrapolated(x: f64) -> f64 {
    let etas = [8e-2, 4e-2, 2e-2, 1e-2];
    let vals: Vec<f64> = etas
        .iter()
        .map(|&eta| regularized_k3_cos(x, eta / x.abs()))
        .collect();
    let xs: Vec<f64> = etas.iter().map(|&e| e * e).collect();
    neville_to_zero(&xs, &vals)
}

// ---------------------------------------------------------------------------
// reduction of projected CFs to angular moments
// ---------------------------------------------------------------------------

const EPS3: [[[f64; 3]; 3]; 3] = {
    let mut e = [[[0.0; 3]; 3]; 3];
    e[0][1][2] = 1.0;
    e[1][2][0] = 1.0;
    e[2][0][1] = 1.0;
    e[0][2][1] = -1.0;
    e[2][1][0] = -1.0;
    e[1][0][2] = -1.0;
    e
};

/// Lab-frame two-point averages at symmetric proper times (midpoint
/// azimuth 0), decomposed over the four angular moments
/// (J0, Jy, Jxx, Jyy) of the rotated wave direction against the radial
/// kernel. Entry [A][B] is the moment vector of ⟨A(τ₁)B(τ₂)⟩ with A,B in
/// (E₁,E₂,E₃,H₁,H₂,H₃).
fn lab_moment_table() -> [[[f64; 4]; 6]; 6] {
    let mut t = [[[0.0; 4]; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            // EE and HH share the transverse completeness sum δ_ij − k̂_i k̂_j.
            let mut v = [0.0; 4];
            if i == j {
                v[0] += 1.0;
                match i {
                    0 => v[2] -= 1.0, // Jxx
                    1 => v[3] -= 1.0, // Jyy
                    _ => {
                        // Jzz = J0 − Jxx − Jyy
                        v[0] -= 1.0;
                        v[2] += 1.0;
                        v[3] += 1.0;
                    }
                }
            }
            t[i][j] = v;
            t[i + 3][j + 3] = v;
            // ⟨E_i H_j⟩: Σ_λ ε̂_i (k̂×ε̂)_j = ε_{jli} k̂_l; only the k̂_y
            // moment survives the parity of the kernel.
            t[i][j + 3][1] = EPS3[j][1][i];
            // ⟨H_i E_j⟩: ε_{ilj} k̂_l.
            t[i + 3][j][1] = EPS3[i][1][j];
        }
    }
    t
}

/// Coefficients (c0, cy, cxx, cyy) of a symmetrized projected CF over the
/// angular moments: CF = (1/4π²)∫dO [c0 + cy k̂_y + cxx k̂_x² + cyy k̂_y²]·K(F).
///
/// Generated by contracting the tetrad projection rows at τ = ∓Δτ/2 with
/// the lab moment table; stationarity makes the midpoint choice free.
pub fn component_coeffs(component: &CfComponent, params: &RotationParams, delta: f64) -> [f64; 4] {
    let dtau = delta / (params.omega * params.gamma);
    let r1 = projection_rows(params, -0.5 * dtau);
    let r2 = projection_rows(params, 0.5 * dtau);
    let table = lab_moment_table();
    let (ia, ib) = component.row_indices();
    let mut out = [0.0; 4];
    for a_lab in 0..6 {
        for b_lab in 0..6 {
            // symmetrized over ordering: ½[(a at τ₁)(b at τ₂) + (b at τ₁)(a at τ₂)]
            let w = 0.5 * (r1[ia][a_lab] * r2[ib][b_lab] + r1[ib][a_lab] * r2[ia][b_lab]);
            if w == 0.0 {
                continue;
            }
            for m in 0..4 {
                out[m] += w * table[a_lab][b_lab][m];
            }
        }
    }
    out
}

/// Quadrature tolerances (absolute / relative).
#[derive(Clone, Copy, Debug)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
}

impl Default for QuadTol {
    fn default() -> Self {
        Self {
            abs: 1e-11,
            rel: 1e-10,
        }
    }
}

fn em_cf_quadrature_kernel<K: Fn(f64) -> f64>(
    component: &CfComponent,
    lag: &CfLag,
    kernel: K,
    tol: QuadTol,
) -> Result<CfValue> {
    let coeffs = component_coeffs(
        component,
        &RotationParams::from_beta(1.0, lag.beta)?,
        lag.delta,
    );
    if coeffs.iter().all(|c| c.abs() < 1e-14) {
        // vanishing coefficient structure (off-diagonal EE/HH, diagonal EH)
        return Ok(CfValue::deterministic(0.0, Method::Quadrature));
    }
    let integrand_theta = |theta: f64| {
        let st = theta.sin();
        let phi_integrand = |phi: f64| {
            let (sp, cp) = phi.sin_cos();
            let ky = st * sp;
            let kx = st * cp;
            let f = lag.lab_dt * (1.0 + lag.kconst * ky);
            let structure = coeffs[0] + coeffs[1] * ky + coeffs[2] * kx * kx + coeffs[3] * ky * ky;
            structure * kernel(f)
        };
        let (v, _) = quad::trapezoid_periodic_capped(&phi_integrand, tol.abs, 1e-13, 1 << 14);
        v * st
    };
    let q = quad::adaptive(&integrand_theta, 0.0, PI, tol.abs, tol.rel, 4000)?;
    Ok(CfValue {
        value: q.value / (4.0 * PI * PI),
        std_error: q.error / (4.0 * PI * PI),
        method: Method::Quadrature,
    })
}

/// Full-spectrum CF by angular quadrature; the k-integral is the
/// regularized ∫₀^∞ k³cos(kF) dk = 6/F⁴.
pub fn em_cf_quadrature(
    component: &CfComponent,
    lag: &CfLag,
    tol: Option<QuadTol>,
) -> Result<CfValue> {
    if lag.lab_dt == 0.0 {
        return Err(Error::ZeroLag);
    }
    em_cf_quadrature_kernel(
        component,
        lag,
        |f| 6.0 / (f * f * f * f),
        tol.unwrap_or_default(),
    )
}

/// Band-limited CF by angular quadrature: the k-integral runs over
/// [k_min, k_max] only. This is the deterministic target the band-limited
/// Monte Carlo estimates.
pub fn em_cf_quadrature_banded(
    component: &CfComponent,
    lag: &CfLag,
    k_min: f64,
    k_max: f64,
    tol: Option<QuadTol>,
) -> Result<CfValue> {
    if k_min < 0.0 || k_min >= k_max {
        return Err(Error::EmptyBand { k_min, k_max });
    }
    em_cf_quadrature_kernel(
        component,
        lag,
        |f| band_k3_cos(f, k_min, k_max),
        tol.unwrap_or_default(),
    )
}

/// ⟨E_(1)E_(1)⟩ in elementary functions: the three θ-integral groups with
/// the azimuthal integrals already folded in.
pub fn em_cf_closed_e11(lag: &CfLag) -> Result<f64> {
    if lag.lab_dt == 0.0 {
        return Err(Error::ZeroLag);
    }
    let k = lag.kconst;
    let (b, g) = (lag.beta, lag.gamma);
    let cd = lag.delta.cos();
    let ch = (0.5 * lag.delta).cos();
    let i1 = theta_integral(1, k)?;
    let i3 = theta_integral(3, k)?;
    let i5 = theta_integral(5, k)?;
    let g1 = 2.0 * PI * cd;
    let g3 =
        3.0 * PI * k * k * cd - 2.0 * PI * ch * ch + 2.0 * PI * b * b - 8.0 * PI * b * k * ch + PI;
    let g5 = -3.0 * PI * k * k * ch * ch + 3.0 * PI * b * b * k * k - 2.0 * PI * b * k * k * k * ch
        + 4.0 * PI * k * k;
    let cdt4 = lag.lab_dt.powi(4);
    Ok(3.0 / (2.0 * PI * PI * cdt4) * g * g * (g1 * i1 + g3 * i3 + g5 * i5))
}

/// Scalar-field CF in closed form:
/// −(1/π)·[(γΔτ)² − 4a² sin²(Ωγ Δτ/2)]^(−1).
pub fn scalar_cf_closed(params: &RotationParams, dtau: f64) -> Result<f64> {
    if dtau == 0.0 {
        return Err(Error::ZeroLag);
    }
    let delta = params.omega * params.gamma * dtau;
    let b = params.gamma * dtau;
    let e = 2.0 * params.radius * (0.5 * delta).sin();
    Ok(-1.0 / (PI * (b * b - e * e)))
}

/// Scalar-field CF by θ-quadrature of the azimuthal closed form
/// 2πB/(B²−E²)^{3/2}.
pub fn scalar_cf_quadrature(
    params: &RotationParams,
    dtau: f64,
    tol: Option<QuadTol>,
) -> Result<CfValue> {
    if dtau == 0.0 {
        return Err(Error::ZeroLag);
    }
    let tol = tol.unwrap_or_default();
    let delta = params.omega * params.gamma * dtau;
    let b = params.gamma * dtau.abs();
    let q0 = 2.0 * params.radius * (0.5 * delta).sin();
    let f = |theta: f64| {
        let e = q0 * theta.sin();
        theta.sin() * 2.0 * PI * b / (b * b - e * e).powf(1.5)
    };
    let q = quad::adaptive(&f, 0.0, PI, tol.abs, tol.rel, 4000)?;
    Ok(CfValue {
        value: -q.value / (4.0 * PI * PI),
        std_error: q.error / (4.0 * PI * PI),
        method: Method::Quadrature,
    })
}

/// Band-limited scalar CF: (1/4π²)∫dO ∫_band k cos(kF) dk.
pub fn scalar_cf_quadrature_banded(
    params: &RotationParams,
    dtau: f64,
    k_min: f64,
    k_max: f64,
    tol: Option<QuadTol>,
) -> Result<CfValue> {
    if dtau == 0.0 {
        return Err(Error::ZeroLag);
    }
    if k_min < 0.0 || k_min >= k_max {
        return Err(Error::EmptyBand { k_min, k_max });
    }
    let tol = tol.unwrap_or_default();
    let delta = params.omega * params.gamma * dtau;
    let kc = -params.beta * sinc(0.5 * delta);
    let lab_dt = params.gamma * dtau;
    // no angular prefactors: reduce to the polar moment of the kernel
    let f = |m: f64| band_k1_cos(lab_dt * (1.0 + kc * m), k_min, k_max);
    let q = quad::adaptive(&f, -1.0, 1.0, tol.abs, tol.rel, 4000)?;
    Ok(CfValue {
        value: q.value * 2.0 * PI / (4.0 * PI * PI),
        std_error: q.error / (2.0 * PI),
        method: Method::Quadrature,
    })
}
