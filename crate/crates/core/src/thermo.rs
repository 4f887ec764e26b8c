//! Rotation temperature, Planck energy densities, and the rotating
//! detector's thermal energy densities with their anisotropy masking
//! factors (2/3)(4γ²−1) for the electromagnetic field and (2/9)(4γ²−1)
//! for the massless scalar field.

use crate::constants::{C, HBAR, KB, SIGMA};
use crate::kinematics::{frenet_serret_tetrad, project_scalar_energy, RotationParams};
use crate::quad;
use crate::spectral::DivergentPart;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Absolute temperature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Temperature {
    pub kelvin: f64,
}

/// Which field an energy-density report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Em,
    Scalar,
}

/// Thermal energy density seen by the rotating detector. The zero-point
/// part is never summed; it rides along as a symbolic descriptor.
#[derive(Clone, Copy, Debug)]
pub struct EnergyDensityReport {
    /// Convergent thermal part. SI J/m³ from the `_si` constructors,
    /// units of ħΩ⁴/c³ from the nondimensional ones.
    pub thermal_value: f64,
    /// The divergent zero-point term, present but not evaluated.
    pub divergent: DivergentPart,
    pub masking_factor: f64,
    pub field_kind: FieldKind,
}

/// Rejection threshold ahead of the light cylinder: γ² grows without
/// bound and silent huge outputs help nobody.
const BETA_MAX: f64 = 0.999;

fn check_beta(beta: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::LightCylinder { beta });
    }
    if beta > BETA_MAX {
        return Err(Error::NearLightCylinder { beta });
    }
    Ok(1.0 / (1.0 - beta * beta).sqrt())
}

/// T_rot = ħΩ/(2π k_B) for Ω in rad/s.
pub fn t_rot(omega_si: f64) -> Temperature {
    Temperature {
        kelvin: HBAR * omega_si / (2.0 * PI * KB),
    }
}

/// Planck energy density of the electromagnetic field,
/// (ħ/c³π²)∫ω³/(e^{ħω/kT}−1)dω = 4σT⁴/c  [J/m³].
pub fn planck_em_density(t: Temperature) -> f64 {
    4.0 * SIGMA * t.kelvin.powi(4) / C
}

/// The same density by numerical quadrature of the Planck integral,
/// as an independent route for cross-checking the closed form.
pub fn planck_em_density_quadrature(t: Temperature) -> Result<f64> {
    if t.kelvin <= 0.0 {
        return Ok(0.0);
    }
    // substitute x = ħω/kT
    let scale = (KB * t.kelvin / HBAR).powi(4) * HBAR / (C.powi(3) * PI * PI);
    let f = |x: f64| {
        if x < 1e-12 {
            x * x // x³/(e^x−1) → x²
        } else {
            x * x * x / x.exp_m1()
        }
    };
    let q = quad::adaptive(&f, 0.0, 60.0, 1e-14, 1e-13, 4000)?;
    Ok(scale * q.value)
}

/// EM masking factor (2/3)(4γ²−1) as printed.
pub fn em_masking_factor(beta: f64) -> Result<f64> {
    let gamma = check_beta(beta)?;
    Ok(2.0 / 3.0 * (4.0 * gamma * gamma - 1.0))
}

/// EM masking factor assembled from first principles: the angular
/// integrals v_i = ∫dO(1−k̂_i²) (numerically), the lab-average assembly
/// w(μ) ∝ (1/4π)[(v₁+v₃)γ²(1+β²) + v₂], the inertial normalization
/// ∝ (3/4π)(v/3)Σ, and the Abel-Plana factor 2 at F_d = 0.
pub fn em_masking_factor_assembled(beta: f64) -> Result<f64> {
    let gamma = check_beta(beta)?;
    // ∫dO (1 − k̂_i²) by quadrature, i = x, y, z
    let mut v = [0.0; 3];
    for (i, vi) in v.iter_mut().enumerate() {
        let f = move |theta: f64| {
            let st = theta.sin();
            let ct = theta.cos();
            // azimuthal integral of (1 − k̂_i²) at fixed θ
            let phi_int = match i {
                0 | 1 => 2.0 * PI * (1.0 - 0.5 * st * st),
                _ => 2.0 * PI * (1.0 - ct * ct),
            };
            st * phi_int
        };
        *vi = quad::adaptive(&f, 0.0, PI, 1e-13, 1e-12, 2000)?.value;
    }
    let g2b = gamma * gamma * (1.0 + beta * beta);
    let rotating = (v[0] + v[2]) * g2b + v[1];
    let inertial = v[0] + v[1] + v[2];
    Ok(2.0 * rotating / inertial)
}

/// Scalar masking factor (2/9)(4γ²−1) as printed.
pub fn scalar_masking_factor(beta: f64) -> Result<f64> {
    let gamma = check_beta(beta)?;
    Ok(2.0 / 9.0 * (4.0 * gamma * gamma - 1.0))
}

/// Scalar masking factor assembled from the tetrad contraction: project
/// the isotropic zero-point stress tensor diag(p,p,p,3p) with μ_(4), then
/// apply the Abel-Plana factor 2 and the inertial-bath normalization 3.
pub fn scalar_masking_factor_assembled(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let params = RotationParams::from_beta(1.0, beta)?;
    let tetrad = frenet_serret_tetrad(&params, 0.4);
    let mut t_lab = [[0.0; 4]; 4];
    t_lab[0][0] = 1.0 / 3.0;
    t_lab[1][1] = 1.0 / 3.0;
    t_lab[2][2] = 1.0 / 3.0;
    t_lab[3][3] = 1.0;
    let contraction = project_scalar_energy(&tetrad, &t_lab); // (4γ²−1)/3
    Ok(2.0 * contraction / 3.0)
}

fn zero_point_descriptor() -> DivergentPart {
    DivergentPart {
        exponent: 3,
        coefficient: 0.5,
        lag_value: None,
    }
}

/// Nondimensional EM report: thermal value in units of ħΩ⁴/c³.
///
/// The Planck integral ∫ω³/(e^{2πω}−1)dω = 1/240 in those units, so the
/// inertial bath density is 1/(240π²).
///
/// Note the β → 0 limit of the masking factor is 2, not 1: the periodic
/// (discrete-spectrum) density on the rotation axis is still twice the
/// inertial Planck bath at T_rot. The discontinuity against the plain
/// inertial limit is reported as-is, not smoothed.
pub fn em_density_rotating(beta: f64) -> Result<EnergyDensityReport> {
    let masking = em_masking_factor(beta)?;
    Ok(EnergyDensityReport {
        thermal_value: masking / (240.0 * PI * PI),
        divergent: zero_point_descriptor(),
        masking_factor: masking,
        field_kind: FieldKind::Em,
    })
}

/// SI EM report for a detector at `beta` on a circle rotating at
/// `omega_si` rad/s: thermal value (2/3)(4γ²−1)·4σT_rot⁴/c in J/m³.
pub fn em_density_rotating_si(beta: f64, omega_si: f64) -> Result<EnergyDensityReport> {
    let masking = em_masking_factor(beta)?;
    Ok(EnergyDensityReport {
        thermal_value: masking * planck_em_density(t_rot(omega_si)),
        divergent: zero_point_descriptor(),
        masking_factor: masking,
        field_kind: FieldKind::Em,
    })
}

/// Nondimensional scalar report: thermal value in units of ħΩ⁴/c³.
///
/// The inertial scalar bath is ⟨T₄₄⟩_T-thermal = (3/π)∫ω³/(e^{2πω}−1)dω
/// = 3/(240π) in those units.
pub fn scalar_density_rotating(beta: f64) -> Result<EnergyDensityReport> {
    let masking = scalar_masking_factor(beta)?;
    Ok(EnergyDensityReport {
        thermal_value: masking * 3.0 / (240.0 * PI),
        divergent: zero_point_descriptor(),
        masking_factor: masking,
        field_kind: FieldKind::Scalar,
    })
}

/// SI scalar report: thermal value (2/9)(4γ²−1)·(3ħ/πc³)∫ω³/(e^{ħω/kT_rot}−1)dω.
pub fn scalar_density_rotating_si(beta: f64, omega_si: f64) -> Result<EnergyDensityReport> {
    let masking = scalar_masking_factor(beta)?;
    let t = t_rot(omega_si);
    let planck_integral = (KB * t.kelvin / HBAR).powi(4) * PI.powi(4) / 15.0;
    Ok(EnergyDensityReport {
        thermal_value: masking * 3.0 * HBAR / (PI * C.powi(3)) * planck_integral,
        divergent: zero_point_descriptor(),
        masking_factor: masking,
        field_kind: FieldKind::Scalar,
    })
}

/// Thermal density against radius at fixed Ω (nondimensional): strictly
/// increasing toward the light cylinder.
pub fn density_vs_radius_sweep(
    omega: f64,
    radii: &[f64],
    kind: FieldKind,
) -> Result<Vec<(f64, EnergyDensityReport)>> {
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let beta = omega * r;
        let report = match kind {
            FieldKind::Em => em_density_rotating(beta)?,
            FieldKind::Scalar => scalar_density_rotating(beta)?,
        };
        out.push((r, report));
    }
    Ok(out)
}
