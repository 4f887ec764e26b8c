//! Rotating worldline, Frenet-Serret and Fermi-Walker tetrads, and
//! projection of lab-frame tensors onto tetrad components.
//!
//! Conventions: metric diag(1,1,1,-1), index order (1,2,3,4) with 4 the
//! time component, c = 1. The worldline is a circle of radius `a` in the
//! x-y plane, α = Ωγτ is the lab azimuth at proper time τ.

use crate::{Error, Result};

/// Rotation configuration: angular velocity Ω, circle radius a, and the
/// derived β = Ωa/c, γ = (1-β²)^(-1/2).
#[derive(Clone, Copy, Debug)]
pub struct RotationParams {
    pub omega: f64,
    pub radius: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl RotationParams {
    /// From angular velocity and radius (nondimensional, c = 1).
    pub fn new(omega: f64, radius: f64) -> Result<Self> {
        let beta = omega * radius;
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::LightCylinder { beta });
        }
        Ok(Self {
            omega,
            radius,
            beta,
            gamma: 1.0 / (1.0 - beta * beta).sqrt(),
        })
    }

    /// From angular velocity and β; the radius follows as β/Ω.
    pub fn from_beta(omega: f64, beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&beta) {
            return Err(Error::LightCylinder { beta });
        }
        Ok(Self {
            omega,
            radius: if omega > 0.0 { beta / omega } else { 0.0 },
            beta,
            gamma: 1.0 / (1.0 - beta * beta).sqrt(),
        })
    }

    /// Lab azimuth α = Ωγτ.
    pub fn alpha(&self, tau: f64) -> f64 {
        self.omega * self.gamma * tau
    }
}

/// A real 4-vector, components ordered (1,2,3,4) = (x,y,z,t).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourVector {
    pub components: [f64; 4],
}

impl FourVector {
    pub fn new(x: f64, y: f64, z: f64, t: f64) -> Self {
        Self {
            components: [x, y, z, t],
        }
    }

    /// Minkowski inner product with signature (+,+,+,-).
    pub fn dot(&self, other: &FourVector) -> f64 {
        let a = &self.components;
        let b = &other.components;
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]
    }

    pub fn spatial_norm(&self) -> f64 {
        let a = &self.components;
        (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
    }
}

/// Which transport rule generated a tetrad.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TetradKind {
    FrenetSerret,
    FermiWalker,
}

/// Four orthonormal 4-vectors μ_(a) attached to the worldline at proper
/// time τ: μ_(a)·μ_(b) = η_(ab) = diag(1,1,1,-1).
#[derive(Clone, Copy, Debug)]
pub struct Tetrad {
    pub vectors: [FourVector; 4],
    pub tau: f64,
    pub kind: TetradKind,
}

impl Tetrad {
    /// Largest |μ_(a)·μ_(b) − η_(ab)| over all index pairs.
    pub fn orthonormality_residual(&self) -> f64 {
        let eta = [1.0, 1.0, 1.0, -1.0];
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let want = if a == b { eta[a] } else { 0.0 };
                worst = worst.max((self.vectors[a].dot(&self.vectors[b]) - want).abs());
            }
        }
        worst
    }
}

/// Lab-frame electromagnetic field at a point, packed as F_41 = E₁,
/// F_42 = E₂, F_43 = E₃, F_23 = H₁, F_31 = H₂, F_12 = H₃.
#[derive(Clone, Copy, Debug, Default)]
pub struct EmTensorLab {
    pub e: [f64; 3],
    pub h: [f64; 3],
}

/// E and H components measured in the tetrad frame.
#[derive(Clone, Copy, Debug)]
pub struct ProjectedEm {
    pub e: [f64; 3],
    pub h: [f64; 3],
}

/// Worldline position: spatial part on the circle of radius a, time
/// component ct = γτ.
pub fn worldline_position(params: &RotationParams, tau: f64) -> FourVector {
    let al = params.alpha(tau);
    FourVector::new(
        params.radius * al.cos(),
        params.radius * al.sin(),
        0.0,
        params.gamma * tau,
    )
}

/// 4-velocity U = c(−βγ sin α, βγ cos α, 0, γ); U·U = −c².
pub fn four_velocity(params: &RotationParams, tau: f64) -> FourVector {
    let (b, g) = (params.beta, params.gamma);
    let al = params.alpha(tau);
    FourVector::new(-b * g * al.sin(), b * g * al.cos(), 0.0, g)
}

/// 4-acceleration U̇ = (−aΩ²γ² cos α, −aΩ²γ² sin α, 0, 0); U̇·U = 0.
pub fn four_acceleration(params: &RotationParams, tau: f64) -> FourVector {
    let mag = params.radius * params.omega * params.omega * params.gamma * params.gamma;
    let al = params.alpha(tau);
    FourVector::new(-mag * al.cos(), -mag * al.sin(), 0.0, 0.0)
}

/// Frenet-Serret tetrad: the rotating frame in which the detector is at
/// rest with a constant acceleration vector.
pub fn frenet_serret_tetrad(params: &RotationParams, tau: f64) -> Tetrad {
    let (b, g) = (params.beta, params.gamma);
    let al = params.alpha(tau);
    let (s, c) = al.sin_cos();
    Tetrad {
        vectors: [
            FourVector::new(c, s, 0.0, 0.0),
            FourVector::new(-g * s, g * c, 0.0, b * g),
            FourVector::new(0.0, 0.0, 1.0, 0.0),
            FourVector::new(-b * g * s, b * g * c, 0.0, g),
        ],
        tau,
        kind: TetradKind::FrenetSerret,
    }
}

/// Fermi-Walker (non-rotating) tetrad, in the real signature
/// (+,+,+,-). The spatial pair precesses by ᾱ = αγ relative to the lab
/// azimuth; in this frame the acceleration direction is τ-dependent.
pub fn fermi_walker_tetrad(params: &RotationParams, tau: f64) -> Tetrad {
    let (b, g) = (params.beta, params.gamma);
    let al = params.alpha(tau);
    let ag = al * g;
    let (s, c) = al.sin_cos();
    let (sg, cg) = ag.sin_cos();
    Tetrad {
        vectors: [
            FourVector::new(c * cg + g * s * sg, s * cg - g * c * sg, 0.0, -b * g * sg),
            FourVector::new(c * sg - g * s * cg, s * sg + g * c * cg, 0.0, b * g * cg),
            FourVector::new(0.0, 0.0, 1.0, 0.0),
            FourVector::new(-b * g * s, b * g * c, 0.0, g),
        ],
        tau,
        kind: TetradKind::FermiWalker,
    }
}

/// Components of a 4-vector in a tetrad frame: V_(a) = μ^i_(a) V_i.
pub fn project_vector(tetrad: &Tetrad, v: &FourVector) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (a, mu) in tetrad.vectors.iter().enumerate() {
        out[a] = mu.dot(v);
    }
    out
}

fn field_tensor(field: &EmTensorLab) -> [[f64; 4]; 4] {
    let mut f = [[0.0; 4]; 4];
    for i in 0..3 {
        f[3][i] = field.e[i];
        f[i][3] = -field.e[i];
    }
    f[1][2] = field.h[0];
    f[2][1] = -field.h[0];
    f[2][0] = field.h[1];
    f[0][2] = -field.h[1];
    f[0][1] = field.h[2];
    f[1][0] = -field.h[2];
    f
}

/// Electric and magnetic field measured in a Frenet-Serret frame:
/// F_(ab) = μ^i_(a) μ^k_(b) F_ik contracted directly, then read out with
/// the same packing as the lab frame.
///
/// Fermi-Walker tetrads are rejected: the reduction used downstream
/// assumes the rotating frame.
pub fn project_em_tensor(tetrad: &Tetrad, field: &EmTensorLab) -> Result<ProjectedEm> {
    if tetrad.kind != TetradKind::FrenetSerret {
        return Err(Error::FermiWalkerProjection);
    }
    let f = field_tensor(field);
    let mu = &tetrad.vectors;
    let fab = |a: usize, b: usize| -> f64 {
        let mut s = 0.0;
        for i in 0..4 {
            for k in 0..4 {
                s += mu[a].components[i] * mu[b].components[k] * f[i][k];
            }
        }
        s
    };
    Ok(ProjectedEm {
        e: [fab(3, 0), fab(3, 1), fab(3, 2)],
        h: [fab(1, 2), fab(2, 0), fab(0, 1)],
    })
}

/// Energy density in the tetrad frame: T_(44) = μ^i_(4) μ^k_(4) T_ik for a
/// symmetric lab-frame energy-momentum tensor (indices down).
pub fn project_scalar_energy(tetrad: &Tetrad, t_lab: &[[f64; 4]; 4]) -> f64 {
    let mu4 = &tetrad.vectors[3].components;
    let mut s = 0.0;
    for i in 0..4 {
        for k in 0..4 {
            s += mu4[i] * mu4[k] * t_lab[i][k];
        }
    }
    s
}

/// The linear map from lab (E₁,E₂,E₃,H₁,H₂,H₃) to the projected
/// (E_(1),E_(2),E_(3),H_(1),H_(2),H_(3)) at proper time τ, as a 6×6 row
/// matrix. Columns are obtained by projecting basis fields.
pub fn projection_rows(params: &RotationParams, tau: f64) -> [[f64; 6]; 6] {
    let tetrad = frenet_serret_tetrad(params, tau);
    let mut m = [[0.0; 6]; 6];
    for col in 0..6 {
        let mut field = EmTensorLab::default();
        if col < 3 {
            field.e[col] = 1.0;
        } else {
            field.h[col - 3] = 1.0;
        }
        let p = project_em_tensor(&tetrad, &field).expect("frenet-serret by construction");
        for row in 0..3 {
            m[row][col] = p.e[row];
            m[row + 3][col] = p.h[row];
        }
    }
    m
}
