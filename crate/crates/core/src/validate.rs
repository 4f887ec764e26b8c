//! Cross-module invariant suite behind the `validate` CLI command.
//!
//! Each check reports its maximum residual and the tolerance it must
//! meet. Everything is deterministic for a fixed seed, including the
//! Monte Carlo checks (per-realization seeds derive from the master).

use crate::analytic::{
    azimuthal_integral, em_cf_closed_e11, em_cf_quadrature, em_cf_quadrature_banded,
    regularized_k3_cos_extrapolated, scalar_cf_closed, scalar_cf_quadrature, theta_integral,
    CfComponent, CfLag, FieldPair,
};
use crate::field::{mc_correlation, sample_modes, SpectrumSpec};
use crate::kinematics::{
    fermi_walker_tetrad, four_acceleration, four_velocity, frenet_serret_tetrad, project_vector,
    RotationParams,
};
use crate::spectral::{
    abel_plana, abel_regularized_sum, discrete_em_cf_e11, s1_closed_total, s3_alt_series,
    s3_closed, thermal_integral_p3, AbelPlanaConfig, DiscreteCfConfig,
};
use crate::thermo::{
    em_masking_factor, em_masking_factor_assembled, planck_em_density,
    planck_em_density_quadrature, scalar_masking_factor, scalar_masking_factor_assembled, t_rot,
    Temperature,
};
use crate::Result;
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// One invariant check: name, worst residual found, tolerance.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual < self.tolerance
    }
}

fn betas() -> Vec<f64> {
    vec![0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.95, 0.99]
}

fn taus() -> Vec<f64> {
    (0..8).map(|i| -3.5 + i as f64).collect()
}

/// Tetrad orthonormality, rest condition, and acceleration projections.
fn tetrad_checks(out: &mut Vec<Check>) -> Result<()> {
    let mut ortho: f64 = 0.0;
    let mut rest: f64 = 0.0;
    let mut fs_acc: f64 = 0.0;
    let mut fw_acc: f64 = 0.0;
    for beta in betas() {
        let p = RotationParams::from_beta(1.0, beta)?;
        let mag = p.radius * p.omega * p.omega * p.gamma * p.gamma;
        for tau in taus() {
            let fs = frenet_serret_tetrad(&p, tau);
            let fw = fermi_walker_tetrad(&p, tau);
            ortho = ortho
                .max(fs.orthonormality_residual())
                .max(fw.orthonormality_residual());
            let ua = project_vector(&fs, &four_velocity(&p, tau));
            rest = rest
                .max(ua[0].abs())
                .max(ua[1].abs())
                .max(ua[2].abs())
                .max((ua[3] + 1.0).abs());
            let dua = project_vector(&fs, &four_acceleration(&p, tau));
            fs_acc = fs_acc
                .max((dua[0] + mag).abs())
                .max(dua[1].abs())
                .max(dua[2].abs())
                .max(dua[3].abs());
            let dwa = project_vector(&fw, &four_acceleration(&p, tau));
            let ag = p.alpha(tau) * p.gamma;
            fw_acc = fw_acc
                .max((dwa[0] + mag * ag.cos()).abs())
                .max((dwa[1] + mag * ag.sin()).abs())
                .max(dwa[2].abs())
                .max(dwa[3].abs());
        }
    }
    out.push(Check {
        name: "tetrad-orthonormality",
        residual: ortho,
        tolerance: 1e-12,
    });
    out.push(Check {
        name: "tetrad-rest-condition",
        residual: rest,
        tolerance: 1e-12,
    });
    out.push(Check {
        name: "frenet-serret-acceleration",
        residual: fs_acc,
        tolerance: 1e-12,
    });
    out.push(Check {
        name: "fermi-walker-acceleration",
        residual: fw_acc,
        tolerance: 1e-11,
    });
    Ok(())
}

fn closed_integral_checks(out: &mut Vec<Check>) -> Result<()> {
    let mut worst: f64 = 0.0;
    for k in [0.0, 0.3, 0.6, 0.9, 0.99] {
        for p in [1u8, 3, 5] {
            let closed = theta_integral(p, k)?;
            let f = |t: f64| t.sin().powi(p as i32) / (1.0 - k * k * t.sin() * t.sin()).powf(3.5);
            let q = crate::quad::adaptive(&f, 0.0, PI, 1e-13, 1e-12, 4000)?;
            worst = worst.max(((closed - q.value) / closed).abs());
        }
    }
    out.push(Check {
        name: "theta-integral-closed-vs-quadrature",
        residual: worst,
        tolerance: 1e-10,
    });

    let mut worst: f64 = 0.0;
    for b in [0.0, 0.3, -0.6, 0.9, 0.99] {
        for m in [0u8, 1, 2] {
            let closed = azimuthal_integral(m, b)?;
            let f = |p: f64| p.sin().powi(m as i32) / (1.0 + b * p.sin()).powi(4);
            let (v, _) = crate::quad::trapezoid_periodic(&f, 1e-14, 1e-13)?;
            let scale = closed.abs().max(1.0);
            worst = worst.max(((closed - v) / scale).abs());
        }
    }
    out.push(Check {
        name: "azimuthal-integral-closed-vs-quadrature",
        residual: worst,
        tolerance: 1e-10,
    });

    let mut worst: f64 = 0.0;
    for x in [0.5, 1.0, 5.0, 20.0, 50.0] {
        let got = regularized_k3_cos_extrapolated(x);
        worst = worst.max((got * x.powi(4) / 6.0 - 1.0).abs());
    }
    out.push(Check {
        name: "regularized-k-integral",
        residual: worst,
        tolerance: 1e-6,
    });
    Ok(())
}

fn cf_checks(out: &mut Vec<Check>, seed: u64) -> Result<()> {
    // closed vs quadrature on a (β, δ) grid
    let mut worst: f64 = 0.0;
    for beta in [0.1, 0.5, 0.9] {
        let p = RotationParams::from_beta(1.0, beta)?;
        for delta in [0.1, 1.0, 3.0, 6.0] {
            let lag = CfLag::new(&p, delta / (p.omega * p.gamma))?;
            let closed = em_cf_closed_e11(&lag)?;
            let q = em_cf_quadrature(&CfComponent::new(FieldPair::Ee, 1, 1)?, &lag, None)?;
            worst = worst.max(((closed - q.value) / closed).abs());
        }
    }
    out.push(Check {
        name: "em-cf-closed-vs-quadrature",
        residual: worst,
        tolerance: 1e-8,
    });

    // scalar closed vs quadrature
    let mut worst: f64 = 0.0;
    for beta in [1e-12, 0.4, 0.9] {
        let p = RotationParams::from_beta(1.0, beta)?;
        for dtau in [0.4, 1.1, 4.0] {
            let c = scalar_cf_closed(&p, dtau)?;
            let q = scalar_cf_quadrature(&p, dtau, None)?;
            worst = worst.max(((c - q.value) / c).abs());
        }
    }
    out.push(Check {
        name: "scalar-cf-closed-vs-quadrature",
        residual: worst,
        tolerance: 1e-10,
    });

    // band-limited MC vs band-limited quadrature, in units of sigma
    let p = RotationParams::from_beta(1.0, 0.6)?;
    let spec = SpectrumSpec::Continuous {
        k_min: 0.5,
        k_max: 1.5,
        cells: 96,
    };
    let comp = CfComponent::new(FieldPair::Ee, 1, 1)?;
    let mut worst_sigma: f64 = 0.0;
    for (i, delta) in [0.6, 1.5, 3.0].iter().enumerate() {
        let dtau = delta / (p.omega * p.gamma);
        let mc = mc_correlation(&comp, &p, 0.0, dtau, 400, &spec, seed + i as u64)?;
        let lag = CfLag::new(&p, dtau)?;
        let q = em_cf_quadrature_banded(&comp, &lag, 0.5, 1.5, None)?;
        worst_sigma = worst_sigma.max((mc.value - q.value).abs() / mc.std_error);
    }
    out.push(Check {
        name: "band-limited-mc-vs-quadrature-sigmas",
        residual: worst_sigma,
        tolerance: 3.0,
    });
    Ok(())
}

fn spectral_checks(out: &mut Vec<Check>) -> Result<()> {
    // Abel-Plana identity on decaying test functions
    type TestFn = Box<dyn Fn(Complex64) -> Complex64>;
    let cfg = AbelPlanaConfig::default();
    let one = Complex64::new(1.0, 0.0);
    let cases: Vec<(TestFn, f64)> = vec![
        (
            Box::new(|z: Complex64| (-z).exp()),
            1.0 / (1.0 - (-1.0f64).exp()),
        ),
        (Box::new(|z: Complex64| z * z * z * (-z).exp()), {
            let x = (-1.0f64).exp();
            x * (1.0 + 4.0 * x + x * x) / (1.0 - x).powi(4)
        }),
        (
            Box::new(move |z: Complex64| ((one + z) * (one + z)).inv()),
            PI * PI / 6.0,
        ),
    ];
    let mut worst: f64 = 0.0;
    for (f, oracle) in cases {
        let eval = abel_plana(f, &cfg)?;
        worst = worst.max((eval.formula_total() - oracle).abs());
    }
    out.push(Check {
        name: "abel-plana-identity",
        residual: worst,
        tolerance: 1e-8,
    });

    // closed vs alternate series
    let mut worst: f64 = 0.0;
    for f in [0.5, 1.0, 2.5, 4.0] {
        let closed = s3_closed(f)?.recombined().unwrap();
        let alt = s3_alt_series(f, 20_000)?;
        worst = worst.max(((closed - alt) / closed).abs());
    }
    out.push(Check {
        name: "s3-closed-vs-alt-series",
        residual: worst,
        tolerance: 1e-10,
    });

    // ε-regularized sums against closed totals
    let mut worst: f64 = 0.0;
    for f in [1.0, 2.0, 3.0] {
        worst = worst.max((abel_regularized_sum(3, f) - s3_closed(f)?.recombined().unwrap()).abs());
        worst = worst.max((abel_regularized_sum(1, f) - s1_closed_total(f)).abs());
    }
    out.push(Check {
        name: "epsilon-regularized-sums",
        residual: worst,
        tolerance: 1e-6,
    });

    // S_d(π) = 1/8 exactly
    out.push(Check {
        name: "s3-at-pi",
        residual: (s3_closed(PI)?.recombined().unwrap() - 0.125).abs(),
        tolerance: 1e-14,
    });

    // thermal remainder at F_d = 0 equals 1/120
    out.push(Check {
        name: "thermal-p3-at-zero",
        residual: (thermal_integral_p3(0.0)? - 1.0 / 120.0).abs(),
        tolerance: 1e-10,
    });

    // periodicity of the discrete CF
    let p = RotationParams::from_beta(1.0, 0.6)?;
    let cfg_d = DiscreteCfConfig::default();
    let a = discrete_em_cf_e11(&CfLag::new(&p, 1.0 / (p.omega * p.gamma))?, &cfg_d)?;
    let b = discrete_em_cf_e11(&CfLag::new(&p, (1.0 + TAU) / (p.omega * p.gamma))?, &cfg_d)?;
    out.push(Check {
        name: "discrete-cf-periodicity",
        residual: ((a.total.value - b.total.value) / a.total.value).abs(),
        tolerance: 1e-10,
    });
    Ok(())
}

fn thermo_checks(out: &mut Vec<Check>) -> Result<()> {
    // Stefan-Boltzmann constants identity
    let lhs = 4.0 * crate::constants::SIGMA / crate::constants::C;
    let rhs = PI * PI * crate::constants::KB.powi(4)
        / (15.0 * crate::constants::HBAR.powi(3) * crate::constants::C.powi(3));
    out.push(Check {
        name: "stefan-boltzmann-identity",
        residual: (lhs / rhs - 1.0).abs(),
        tolerance: 1e-12,
    });

    // Planck closed form vs quadrature
    let t = Temperature { kelvin: 300.0 };
    out.push(Check {
        name: "planck-closed-vs-quadrature",
        residual: (planck_em_density(t) / planck_em_density_quadrature(t)? - 1.0).abs(),
        tolerance: 1e-10,
    });

    // masking factors from first principles
    let mut worst: f64 = 0.0;
    for beta in betas() {
        worst =
            worst.max((em_masking_factor_assembled(beta)? / em_masking_factor(beta)? - 1.0).abs());
        worst = worst.max(
            (scalar_masking_factor_assembled(beta)? / scalar_masking_factor(beta)? - 1.0).abs(),
        );
    }
    out.push(Check {
        name: "masking-factor-assembly",
        residual: worst,
        tolerance: 1e-12,
    });

    // T_rot constants arithmetic: Ω = 2π → ħ/k_B
    out.push(Check {
        name: "t-rot-constants",
        residual: (t_rot(2.0 * PI).kelvin / (crate::constants::HBAR / crate::constants::KB) - 1.0)
            .abs(),
        tolerance: 1e-14,
    });
    Ok(())
}

/// Determinism and scheduling-independence of the sampling layer.
fn reproducibility_checks(out: &mut Vec<Check>, seed: u64) -> Result<()> {
    let spec = SpectrumSpec::Continuous {
        k_min: 0.4,
        k_max: 1.8,
        cells: 48,
    };
    let a = sample_modes(&spec, seed)?;
    let b = sample_modes(&spec, seed)?;
    let identical = a.modes == b.modes;
    out.push(Check {
        name: "mode-sampling-determinism",
        residual: if identical { 0.0 } else { 1.0 },
        tolerance: 0.5,
    });

    // parallel map and sequential map must agree bit-for-bit
    let f = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64).sqrt();
    let seq = crate::exec::map_indexed_seq(512, f);
    let cfg = crate::exec::map_indexed(512, f);
    let bit_identical = seq
        .iter()
        .zip(cfg.iter())
        .all(|(x, y)| x.to_bits() == y.to_bits());
    out.push(Check {
        name: "parallel-sequential-bit-identity",
        residual: if bit_identical { 0.0 } else { 1.0 },
        tolerance: 0.5,
    });
    Ok(())
}

/// Run the full suite. Deterministic for a fixed seed.
pub fn run_all(seed: u64) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    tetrad_checks(&mut out)?;
    closed_integral_checks(&mut out)?;
    cf_checks(&mut out, seed)?;
    spectral_checks(&mut out)?;
    thermo_checks(&mut out)?;
    reproducibility_checks(&mut out, seed)?;
    Ok(out)
}
