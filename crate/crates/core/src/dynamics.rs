//! Single-time evolution of the Bloch vector, fluorescence intensities of
//! the pi and sigma channels, and the coherent/incoherent decomposition of
//! the stationary intensity.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::model::{
    build_liouvillian, steady_state, BlochVector, PhysParams, SteadyState, IDX_A11, IDX_A13,
    IDX_A22, IDX_A24, IDX_A31, IDX_A33, IDX_A42, IDX_A44,
};
use crate::numerics::{C64, Propagator, POPULATION_SLOTS};

/// Named initial conditions plus raw 8-vectors.
#[derive(Debug, Clone)]
pub enum InitialState {
    /// All population in ground state |3>.
    Ground3,
    /// All population in ground state |4>.
    Ground4,
    /// Equal ground-state populations 1/2, 1/2 (the beat-friendly start).
    EqualGround,
    Steady,
    Custom(BlochVector),
}

impl InitialState {
    pub fn to_vector(&self, p: &PhysParams) -> Result<BlochVector> {
        let mut v = Array1::<C64>::zeros(8);
        match self {
            InitialState::Ground3 => v[IDX_A33] = C64::from(1.0),
            InitialState::Ground4 => v[IDX_A44] = C64::from(1.0),
            InitialState::EqualGround => {
                v[IDX_A33] = C64::from(0.5);
                v[IDX_A44] = C64::from(0.5);
            }
            InitialState::Steady => v = steady_state(p)?.alpha,
            InitialState::Custom(c) => v = c.clone(),
        }
        validate_state(&v)?;
        Ok(v)
    }
}

/// Physicality of a single-time state: real populations in [0,1] summing to
/// one, and Hermiticity pairing of the coherences.
pub fn validate_state(r: &BlochVector) -> Result<()> {
    if r.len() != 8 {
        return Err(Error::UnphysicalInitialState {
            reason: format!("expected 8 entries, got {}", r.len()),
        });
    }
    let mut sum = 0.0;
    for &i in &POPULATION_SLOTS {
        if r[i].im.abs() > 1e-10 {
            return Err(Error::UnphysicalInitialState {
                reason: format!("population entry {i} has imaginary part {}", r[i].im),
            });
        }
        if r[i].re < -1e-9 || r[i].re > 1.0 + 1e-9 {
            return Err(Error::UnphysicalInitialState {
                reason: format!("population entry {i} = {} outside [0,1]", r[i].re),
            });
        }
        sum += r[i].re;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::UnphysicalInitialState {
            reason: format!("populations sum to {sum}, expected 1"),
        });
    }
    if (r[IDX_A31] - r[IDX_A13].conj()).norm() > 1e-10
        || (r[IDX_A42] - r[IDX_A24].conj()).norm() > 1e-10
    {
        return Err(Error::UnphysicalInitialState {
            reason: "coherences are not Hermitian pairs".into(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<BlochVector>,
}

/// Inclusive uniform grid on [0, t_max].
pub fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|k| t_max * k as f64 / (n - 1) as f64)
        .collect()
}

pub fn evolve(p: &PhysParams, r0: &BlochVector, times: &[f64]) -> Result<Trajectory> {
    p.validate()?;
    validate_state(r0)?;
    let m = build_liouvillian(p);
    let prop = Propagator::new(&m)?;
    let states = times
        .iter()
        .map(|&t| prop.apply(t, r0))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times: times.to_vec(),
        states,
    })
}

/// I_pi(t) = f_pi^2 (<A11> + <A22>).
pub fn intensity_pi(traj: &Trajectory, p: &PhysParams) -> Vec<f64> {
    let f2 = p.f_pi * p.f_pi;
    traj.states
        .iter()
        .map(|s| f2 * (s[IDX_A11].re + s[IDX_A22].re))
        .collect()
}

pub fn intensity_pi_steady(ss: &SteadyState, p: &PhysParams) -> f64 {
    p.f_pi * p.f_pi * (ss.a11() + ss.a22())
}

/// I_sigma(t) = f_sigma^2 (<A11> + <A22>) = 2 I_pi(t).
pub fn intensity_sigma(traj: &Trajectory, p: &PhysParams) -> Vec<f64> {
    let f2 = p.f_sigma() * p.f_sigma();
    traj.states
        .iter()
        .map(|s| f2 * (s[IDX_A11].re + s[IDX_A22].re))
        .collect()
}

/// Stationary pi intensity split into coherent/incoherent direct and cross
/// parts, in units of f_pi^2. The cross terms carry the interference; they
/// cancel in the total.
#[derive(Debug, Clone, Copy)]
pub struct IntensityDecomposition {
    pub coh0: f64,
    pub inc0: f64,
    pub coh_cross: f64,
    pub inc_cross: f64,
    pub total: f64,
}

pub fn decompose_intensity(ss: &SteadyState) -> IntensityDecomposition {
    let coh0 = ss.a13().norm_sqr() + ss.a24().norm_sqr();
    let inc0 = ss.a11() + ss.a22() - coh0;
    let coh_cross = -2.0 * (ss.a13() * ss.a42()).re;
    let inc_cross = -coh_cross;
    IntensityDecomposition {
        coh0,
        inc0,
        coh_cross,
        inc_cross,
        total: coh0 + inc0 + coh_cross + inc_cross,
    }
}
