//! Adaptive Gauss-Kronrod quadrature, a spectrally-accurate trapezoid rule
//! for periodic integrands, and a half-period integrator for damped
//! oscillatory tails.

use crate::summation::NeumaierSum;
use crate::{Error, Result};

/// Kronrod abscissas for the 15-point rule on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Kronrod weights.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Embedded 7-point Gauss weights (for the odd Kronrod abscissas).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One 15-point Gauss-Kronrod panel. Returns (integral, error estimate).
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;

    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kron += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }

    let value = kron * half;
    let err = ((kron - gauss) * half).abs();
    (value, err)
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: f64,
    /// Estimated absolute error.
    pub error: f64,
    pub intervals: usize,
}

/// Adaptive Gauss-Kronrod integration of `f` on [a, b].
///
/// Splits the worst interval until the summed error estimate drops below
/// `max(abs_tol, rel_tol * |integral|)` or the interval budget runs out.
pub fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<QuadResult> {
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
    }

    let (v, e) = gk15(f, a, b);
    if !v.is_finite() {
        return Err(Error::QuadratureNotConverged {
            estimate: v,
            error: f64::INFINITY,
            intervals: 1,
        });
    }
    let mut panels = vec![Panel {
        a,
        b,
        value: v,
        error: e,
    }];

    loop {
        let mut total = NeumaierSum::new();
        let mut err_total = 0.0;
        for p in &panels {
            total.add(p.value);
            err_total += p.error;
        }
        let total = total.total();
        let target = abs_tol.max(rel_tol * total.abs());
        if err_total <= target {
            return Ok(QuadResult {
                value: total,
                error: err_total,
                intervals: panels.len(),
            });
        }
        if panels.len() >= max_intervals {
            return Err(Error::QuadratureNotConverged {
                estimate: total,
                error: err_total,
                intervals: panels.len(),
            });
        }
        // split the worst panel
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (v, e) = gk15(f, lo, hi);
            if !v.is_finite() {
                return Err(Error::QuadratureNotConverged {
                    estimate: v,
                    error: f64::INFINITY,
                    intervals: panels.len(),
                });
            }
            panels.push(Panel {
                a: lo,
                b: hi,
                value: v,
                error: e,
            });
        }
    }
}

/// Trapezoid rule for a 2π-periodic integrand, doubling the node count
/// until two successive refinements agree. Spectrally accurate.
pub fn trapezoid_periodic<F: Fn(f64) -> f64>(
    f: &F,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    let two_pi = std::f64::consts::TAU;
    let mut n = 16usize;
    let mut prev = {
        let mut s = NeumaierSum::new();
        for i in 0..n {
            s.add(f(two_pi * i as f64 / n as f64));
        }
        s.total() * two_pi / n as f64
    };
    while n <= (1 << 20) {
        // refine: add midpoints only
        let mut s = NeumaierSum::new();
        for i in 0..n {
            s.add(f(two_pi * (i as f64 + 0.5) / n as f64));
        }
        let cur = 0.5 * prev + s.total() * two_pi / (2 * n) as f64;
        let diff = (cur - prev).abs();
        if diff <= abs_tol.max(rel_tol * cur.abs()) {
            return Ok((cur, diff));
        }
        prev = cur;
        n *= 2;
    }
    Err(Error::QuadratureNotConverged {
        estimate: prev,
        error: f64::NAN,
        intervals: n,
    })
}

/// ∫₀^∞ g(t) dt for a damped oscillatory g, integrated panel-by-panel
/// (one GK15 per `panel_width`, which should be at most a quarter of the
/// oscillation period) with compensated accumulation, cut off at `t_max`.
pub fn oscillatory_tail<F: Fn(f64) -> f64>(g: &F, panel_width: f64, t_max: f64) -> f64 {
    let mut acc = NeumaierSum::new();
    let mut a = 0.0;
    while a < t_max {
        let b = (a + panel_width).min(t_max);
        let (v, _) = gk15(g, a, b);
        acc.add(v);
        a = b;
    }
    acc.total()
}

/// Best-effort doubling trapezoid for a 2π-periodic integrand: refines
/// until two levels agree or the node cap is hit, returning the last
/// estimate and the final refinement difference. Never fails; intended
/// for inner loops of nested quadratures where the outer rule owns the
/// error budget.
pub fn trapezoid_periodic_capped<F: Fn(f64) -> f64>(
    f: &F,
    abs_tol: f64,
    rel_tol: f64,
    max_nodes: usize,
) -> (f64, f64) {
    let two_pi = std::f64::consts::TAU;
    let mut n = 32usize;
    let mut prev = {
        let mut s = NeumaierSum::new();
        for i in 0..n {
            s.add(f(two_pi * i as f64 / n as f64));
        }
        s.total() * two_pi / n as f64
    };
    if !prev.is_finite() {
        return (f64::NAN, f64::NAN);
    }
    let mut diff = f64::INFINITY;
    while n < max_nodes {
        let mut s = NeumaierSum::new();
        for i in 0..n {
            s.add(f(two_pi * (i as f64 + 0.5) / n as f64));
        }
        let cur = 0.5 * prev + s.total() * two_pi / (2 * n) as f64;
        if !cur.is_finite() {
            return (f64::NAN, f64::NAN);
        }
        diff = (cur - prev).abs();
        prev = cur;
        n *= 2;
        if diff <= abs_tol.max(rel_tol * cur.abs()) {
            break;
        }
    }
    (prev, diff)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gk15_exact_on_low_degree() {
        let f = |x: f64| 3.0 * x * x;
        let (v, _) = gk15(&f, 0.0, 2.0);
        assert!((v - 8.0).abs() < 1e-13);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        // int_0^pi sin(t)/(1 - k^2 sin^2 t)^{7/2}, k = 0.99
        let k2 = 0.99f64 * 0.99;
        let f = |t: f64| t.sin() / (1.0 - k2 * t.sin() * t.sin()).powf(3.5);
        let r = adaptive(&f, 0.0, PI, 1e-12, 1e-12, 4000).unwrap();
        let d = 1.0 - k2;
        let exact = 2.0 / (5.0 * d) + 8.0 / (15.0 * d * d) + 16.0 / (15.0 * d * d * d);
        assert!(
            (r.value / exact - 1.0).abs() < 1e-11,
            "got {} want {}",
            r.value,
            exact
        );
    }

    #[test]
    fn adaptive_reports_nonconvergence() {
        let f = |t: f64| 1.0 / t.abs().max(1e-300); // non-integrable at 0
        assert!(matches!(
            adaptive(&f, 0.0, 1.0, 1e-14, 1e-14, 64),
            Err(Error::QuadratureNotConverged { .. })
        ));
    }

    #[test]
    fn periodic_trapezoid_spectral_accuracy() {
        let b: f64 = 0.9;
        let f = |p: f64| 1.0 / (1.0 + b * p.sin()).powi(4);
        let (v, _) = trapezoid_periodic(&f, 1e-13, 1e-13).unwrap();
        let exact = PI * (2.0 + 3.0 * b * b) / (1.0 - b * b).powf(3.5);
        assert!((v / exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_tail_geometric_case() {
        // int_0^inf 2 sin t / (e^{2 pi t} - 1) dt = sum e^{-n} - 1/2 - 1 ≈ 0.0819767
        let g = |t: f64| {
            if t == 0.0 {
                2.0 / (2.0 * PI) // limit of 2 sin t / (e^{2πt}-1)
            } else {
                2.0 * t.sin() / (2.0 * PI * t).exp_m1()
            }
        };
        let v = oscillatory_tail(&g, 0.5 * PI, 30.0);
        let expect = 1.0 / (1.0 - (-1.0f64).exp()) - 1.5;
        assert!((v - expect).abs() < 1e-12, "got {v}, want {expect}");
    }
}
