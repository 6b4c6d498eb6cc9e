//! Physical parameters, the 8x8 generator of the reduced Bloch system and
//! its steady state (closed form and null space).
//!
//! Bloch vector ordering throughout:
//! (A11, A13, A22, A24, A31, A33, A42, A44).
//! States |1>,|2> are the excited Zeeman sublevels, |3>,|4> the ground ones;
//! the two laser-driven transitions are |1>-|3> and |2>-|4>.

use ndarray::{array, Array1};

use crate::error::{Error, Result};
use crate::numerics::{null_vector, C64, CMatrix, CVector};

pub const IDX_A11: usize = 0;
pub const IDX_A13: usize = 1;
pub const IDX_A22: usize = 2;
pub const IDX_A24: usize = 3;
pub const IDX_A31: usize = 4;
pub const IDX_A33: usize = 5;
pub const IDX_A42: usize = 6;
pub const IDX_A44: usize = 7;

pub type BlochVector = CVector;

/// Drive, detunings and decay in units of gamma.
///
/// delta_z <= 0 is the physical Hg+ ordering but any sign is accepted.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysParams {
    /// Rabi frequency Omega.
    pub omega: f64,
    /// Laser detuning Delta from the |1>-|3> transition.
    pub delta_l: f64,
    /// Difference Zeeman splitting delta between the two pi transitions.
    pub delta_z: f64,
    /// Total decay rate; 1 defines the unit system.
    pub gamma: f64,
    /// Ground Zeeman splitting, informational (enters dressed energies only).
    pub b_ell: f64,
    /// Geometric factor of the pi channel; intensities scale as f_pi^2.
    pub f_pi: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams {
            omega: 1.0,
            delta_l: 0.0,
            delta_z: 0.0,
            gamma: 1.0,
            b_ell: 0.0,
            f_pi: 1.0,
        }
    }
}

impl PhysParams {
    pub fn new(omega: f64, delta_l: f64, delta_z: f64) -> Self {
        PhysParams {
            omega,
            delta_l,
            delta_z,
            ..Default::default()
        }
    }

    pub fn b_pi(&self) -> f64 {
        1.0 / 3.0
    }

    pub fn b_sigma(&self) -> f64 {
        2.0 / 3.0
    }

    /// Decay rate of each individual pi transition, gamma/3.
    pub fn gamma1(&self) -> f64 {
        self.b_pi() * self.gamma
    }

    pub fn gamma2(&self) -> f64 {
        self.b_pi() * self.gamma
    }

    pub fn gamma_sigma(&self) -> f64 {
        self.b_sigma() * self.gamma
    }

    /// Vacuum-coupling cross rate; the reduced dynamics do not depend on it.
    pub fn gamma12(&self) -> f64 {
        -self.gamma1()
    }

    pub fn f_sigma(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.f_pi
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.omega,
            self.delta_l,
            self.delta_z,
            self.gamma,
            self.b_ell,
            self.f_pi,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParams {
                reason: "parameters must be finite".into(),
            });
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParams {
                reason: format!("gamma must be positive, got {}", self.gamma),
            });
        }
        if self.omega < 0.0 {
            return Err(Error::InvalidParams {
                reason: format!("omega must be nonnegative, got {}", self.omega),
            });
        }
        Ok(())
    }
}

/// Difference Zeeman splitting from Lande factors and the ground splitting.
pub fn delta_from_field(g_u: f64, g_ell: f64, b_ell: f64) -> Result<f64> {
    if g_ell == 0.0 {
        return Err(Error::ZeroLande);
    }
    Ok((g_u - g_ell) / g_ell * b_ell)
}

/// The 8x8 generator M of d<R>/dt = M <R>.
pub fn build_liouvillian(p: &PhysParams) -> CMatrix {
    let g = p.gamma;
    let g1 = p.gamma1();
    let g2 = p.gamma2();
    let gs = p.gamma_sigma();
    let om = C64::new(0.0, p.omega); // i*Omega
    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let dl = p.delta_l;
    let dz = p.delta_z;
    array![
        [r(-g), -om, z, z, om, z, z, z],
        [-om, C64::new(-g / 2.0, -dl), z, z, z, om, z, z],
        [z, z, r(-g), om, z, z, -om, z],
        [z, z, om, C64::new(-g / 2.0, -(dl - dz)), z, z, z, -om],
        [om, z, z, z, C64::new(-g / 2.0, dl), -om, z, z],
        [r(g1), om, r(gs), z, -om, z, z, z],
        [z, z, -om, z, z, z, C64::new(-g / 2.0, dl - dz), om],
        [r(gs), z, r(g2), -om, z, z, om, z],
    ]
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub alpha: BlochVector,
    /// The common denominator D, units gamma^2.
    pub d: f64,
}

impl SteadyState {
    pub fn a11(&self) -> f64 {
        self.alpha[IDX_A11].re
    }
    pub fn a22(&self) -> f64 {
        self.alpha[IDX_A22].re
    }
    pub fn a33(&self) -> f64 {
        self.alpha[IDX_A33].re
    }
    pub fn a44(&self) -> f64 {
        self.alpha[IDX_A44].re
    }
    pub fn a13(&self) -> C64 {
        self.alpha[IDX_A13]
    }
    pub fn a24(&self) -> C64 {
        self.alpha[IDX_A24]
    }
    pub fn a31(&self) -> C64 {
        self.alpha[IDX_A31]
    }
    pub fn a42(&self) -> C64 {
        self.alpha[IDX_A42]
    }
}

/// Closed-form steady state.
pub fn steady_state_closed(p: &PhysParams) -> SteadyState {
    let (om, dl, dz, g) = (p.omega, p.delta_l, p.delta_z, p.gamma);
    let d = 2.0 * om * om + (g * g + dz * dz) / 4.0 + (dl - dz / 2.0).powi(2);
    let a11 = om * om / (2.0 * d);
    let a33 = (om * om + g * g / 4.0 + dl * dl) / (2.0 * d);
    let a44 = (om * om + g * g / 4.0 + (dl - dz).powi(2)) / (2.0 * d);
    let a13 = C64::new(dl, g / 2.0) * om / (2.0 * d);
    let a24 = C64::new(dz - dl, -g / 2.0) * om / (2.0 * d);
    let alpha = array![
        C64::from(a11),
        a13,
        C64::from(a11),
        a24,
        a13.conj(),
        C64::from(a33),
        a24.conj(),
        C64::from(a44),
    ];
    SteadyState { alpha, d }
}

/// Null-space steady state; degenerate (2-dimensional kernel) at Omega = 0.
pub fn steady_state_numeric(p: &PhysParams) -> Result<BlochVector> {
    null_vector(&build_liouvillian(p))
}

/// Steady state with the closed form cross-checked against the null space.
///
/// At Omega = 0 the kernel is two-dimensional and the closed-form limit
/// (a11 = a22 = 0) is returned by convention; it is then not the unique
/// stationary state.
pub fn steady_state(p: &PhysParams) -> Result<SteadyState> {
    p.validate()?;
    let closed = steady_state_closed(p);
    if p.omega == 0.0 {
        return Ok(closed);
    }
    let numeric = steady_state_numeric(p)?;
    let diff = closed
        .alpha
        .iter()
        .zip(numeric.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if diff > 1e-10 {
        return Err(Error::SteadyStateMismatch { diff });
    }
    Ok(closed)
}

/// Identity projector onto the populations; <l|M = 0 for every generator.
pub fn trace_row() -> Array1<C64> {
    let mut l = Array1::<C64>::zeros(8);
    for &i in &crate::numerics::POPULATION_SLOTS {
        l[i] = C64::from(1.0);
    }
    l
}
