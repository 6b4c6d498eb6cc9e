//! Closed-form results: dressed-state eigensystem and generalized Rabi
//! frequencies, interference measures C and K, variance/squeezing optima for
//! both quadratures, and the unitary beat model with its optimal
//! initial-population condition.

use crate::error::{Error, Result};
use crate::model::{steady_state_closed, PhysParams};

#[derive(Debug, Clone, Copy)]
pub struct DressedData {
    pub e1_plus: f64,
    pub e1_minus: f64,
    pub e2_plus: f64,
    pub e2_minus: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega_av: f64,
    pub omega_beat: f64,
    pub theta1: f64,
    pub theta2: f64,
}

/// Dressed eigensystem of the two driven transitions. b_ell shifts the
/// second pair of energies but drops out of every frequency difference.
pub fn dressed(p: &PhysParams) -> DressedData {
    let om = p.omega;
    let dl = p.delta_l;
    let dd = p.delta_z - p.delta_l;
    let omega1 = (4.0 * om * om + dl * dl).sqrt();
    let omega2 = (4.0 * om * om + dd * dd).sqrt();
    let theta = |det: f64, rabi: f64| {
        let s = 2.0 * om;
        let c = det + rabi;
        s.atan2(c)
    };
    DressedData {
        e1_plus: -dl / 2.0 + omega1 / 2.0,
        e1_minus: -dl / 2.0 - omega1 / 2.0,
        e2_plus: p.b_ell + dd / 2.0 + omega2 / 2.0,
        e2_minus: p.b_ell + dd / 2.0 - omega2 / 2.0,
        omega1,
        omega2,
        omega_av: (omega2 + omega1) / 2.0,
        omega_beat: (omega2 - omega1) / 2.0,
        theta1: theta(dl, omega1),
        theta2: theta(dd, omega2),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SpecialPoints {
    /// Zero crossing of C.
    pub delta_0: f64,
    /// Location and value of the C minimum.
    pub delta_min: f64,
    pub c_min: f64,
    /// The two C = 1/2 crossings.
    pub delta_half_plus: f64,
    pub delta_half_minus: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct InterferenceReport {
    pub c: f64,
    /// Authoritative value from the stationary alpha moments.
    pub k_alpha: f64,
    /// The printed closed form, kept for comparison with published plots.
    pub k_paper: f64,
    pub special: Option<SpecialPoints>,
}

/// Relative weight of the interference terms in the coherent (C) and
/// incoherent (K) stationary intensity.
pub fn interference_measures(p: &PhysParams) -> Result<InterferenceReport> {
    p.validate()?;
    let (g, dl, dz, om) = (p.gamma, p.delta_l, p.delta_z, p.omega);
    let g2q = g * g / 4.0;
    let c = (g2q + dl * (dl - dz)) / (g2q + dz * dz / 4.0 + (dl - dz / 2.0).powi(2));
    if om == 0.0 {
        return Err(Error::DivisionByZero {
            context: "K measure: incoherent intensity vanishes at Omega = 0",
        });
    }
    let ss = steady_state_closed(p);
    let coh0 = ss.a13().norm_sqr() + ss.a24().norm_sqr();
    let inc0 = ss.a11() + ss.a22() - coh0;
    let inc_cross = 2.0 * (ss.a13() * ss.a42()).re;
    if inc0.abs() < 1e-300 {
        return Err(Error::DivisionByZero {
            context: "K measure: incoherent intensity vanishes",
        });
    }
    let k_alpha = inc_cross / inc0;
    let k_paper = (g2q + dl * (dl - dz)) / (2.0 * (g2q + dz * dz + dl * dl - 2.0 * om * om));
    let special = if dl.abs() > 1e-9 * g {
        let ratio = 1.0 + (g / (2.0 * dl)).powi(2);
        let root = (3.0 * dl * dl + g * g / 2.0).sqrt();
        Some(SpecialPoints {
            delta_0: dl * ratio,
            delta_min: 2.0 * dl * ratio,
            c_min: -1.0 / (1.0 + g * g / (2.0 * dl * dl)),
            delta_half_plus: -dl + root,
            delta_half_minus: -dl - root,
        })
    } else {
        None
    };
    Ok(InterferenceReport {
        c,
        k_alpha,
        k_paper,
        special,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct VarianceReport {
    pub phi: f64,
    /// Total normally-ordered noise of the phi quadrature, units f_pi^2.
    pub v: f64,
    pub squeezed: bool,
    /// Rabi frequency interval with V < 0, when it exists.
    pub window: Option<(f64, f64)>,
    /// Minimizer of V over Omega (other parameters fixed), when V can go
    /// negative; found numerically.
    pub optimal_omega: Option<f64>,
    /// The published closed-form optimum (phi = pi/2 and phi = 0 forms),
    /// reported alongside for comparison.
    pub optimal_omega_printed: Option<f64>,
    pub v_at_optimum: Option<f64>,
}

fn quad_projection(p: &PhysParams, phi: f64) -> f64 {
    (2.0 * p.delta_l - p.delta_z) * phi.cos() + p.gamma * phi.sin()
}

fn denominator(p: &PhysParams) -> f64 {
    2.0 * p.omega * p.omega
        + (p.gamma * p.gamma + p.delta_z * p.delta_z) / 4.0
        + (p.delta_l - p.delta_z / 2.0).powi(2)
}

/// Closed-form variance, units of f_pi^2 included.
pub fn variance_closed(p: &PhysParams, phi: f64) -> f64 {
    let d = denominator(p);
    let k = quad_projection(p, phi);
    p.f_pi * p.f_pi / 2.0 * (p.omega * p.omega / d) * (1.0 - k * k / (2.0 * d))
}

/// Same quantity from the stationary alpha moments, used as a cross-check.
pub fn variance_alpha(p: &PhysParams, phi: f64) -> f64 {
    let ss = steady_state_closed(p);
    let beta = ss.a13() - ss.a24();
    let e2 = num_complex::Complex64::from_polar(1.0, -2.0 * phi);
    p.f_pi * p.f_pi / 2.0
        * ((-beta * beta * e2).re + ss.a11() + ss.a22() - beta.norm_sqr())
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > 1e-12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

pub fn variance(p: &PhysParams, phi: f64) -> VarianceReport {
    let v = variance_closed(p, phi);
    let k = quad_projection(p, phi);
    let rad = k * k
        - (p.gamma * p.gamma + p.delta_z * p.delta_z) / 2.0
        - 2.0 * (p.delta_l - p.delta_z / 2.0).powi(2);
    let window = if rad > 0.0 {
        Some((0.0, 0.5 * rad.sqrt()))
    } else {
        None
    };
    let optimal_omega = window.map(|(_, hi)| {
        let q = p.clone();
        golden_min(
            move |om| {
                let mut pp = q.clone();
                pp.omega = om;
                variance_closed(&pp, phi)
            },
            1e-9,
            hi,
        )
    });
    let v_at_optimum = optimal_omega.map(|om| {
        let mut pp = p.clone();
        pp.omega = om;
        variance_closed(&pp, phi)
    });
    let optimal_omega_printed = printed_optimum(p, phi);
    VarianceReport {
        phi,
        v,
        squeezed: v < 0.0,
        window,
        optimal_omega,
        optimal_omega_printed,
        v_at_optimum,
    }
}

/// Published closed-form optima, evaluated literally. Only stated for the
/// two principal quadratures; the numerical minimizer is authoritative.
fn printed_optimum(p: &PhysParams, phi: f64) -> Option<f64> {
    let g = p.gamma;
    if (phi - std::f64::consts::FRAC_PI_2).abs() < 1e-12 {
        let t = ((p.delta_z - p.delta_l).powi(2) + p.delta_l * p.delta_l).powi(2);
        let num = g.powi(4) / 2.0 - 2.0 * t;
        let den = 3.0 * g * g + 2.0 * t;
        if num > 0.0 {
            return Some(0.5 * (num / den).sqrt());
        }
        return None;
    }
    if phi.abs() < 1e-12 && p.delta_z == 0.0 {
        let num = 16.0 * p.delta_l * p.delta_l - g * g;
        let den = 12.0 * p.delta_l * p.delta_l + g * g;
        if num > 0.0 {
            return Some((num / den).sqrt() / (2.0 * std::f64::consts::SQRT_2));
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct UnitaryBeats {
    pub times: Vec<f64>,
    /// Intensity of the lossless model, units f_pi^2.
    pub intensity: Vec<f64>,
    /// Ground-population ratio a33(0)/a44(0) that makes the beats factorize.
    pub optimal_ratio: f64,
    /// Factorized envelope form, present when the input populations satisfy
    /// the optimal ratio.
    pub factorized: Option<Vec<f64>>,
}

/// Lossless two-oscillator model of the intensity beats.
pub fn unitary_beat_model(
    p: &PhysParams,
    a33_0: f64,
    a44_0: f64,
    times: &[f64],
) -> Result<UnitaryBeats> {
    if a33_0 < 0.0 || a44_0 < 0.0 || (a33_0 + a44_0 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidPopulations {
            reason: format!("a33(0) = {a33_0}, a44(0) = {a44_0} must be nonnegative and sum to 1"),
        });
    }
    let dd = dressed(p);
    let s1 = (2.0 * dd.theta1).sin().powi(2);
    let s2 = (2.0 * dd.theta2).sin().powi(2);
    let f2 = p.f_pi * p.f_pi;
    let intensity: Vec<f64> = times
        .iter()
        .map(|&t| {
            f2 * (a33_0 * s1 * (1.0 - (dd.omega1 * t).cos())
                + a44_0 * s2 * (1.0 - (dd.omega2 * t).cos()))
        })
        .collect();
    let optimal_ratio = if s1 > 0.0 { s2 / s1 } else { f64::INFINITY };
    let at_optimum = a44_0 > 0.0 && (a33_0 / a44_0 - optimal_ratio).abs() < 1e-9;
    let factorized = at_optimum.then(|| {
        times
            .iter()
            .map(|&t| {
                2.0 * f2 * a33_0 * s1 * (1.0 - (dd.omega_beat * t).cos() * (dd.omega_av * t).cos())
            })
            .collect()
    });
    Ok(UnitaryBeats {
        times: times.to_vec(),
        intensity,
        optimal_ratio,
        factorized,
    })
}
