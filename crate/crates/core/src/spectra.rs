//! Frequency-domain outputs: the incoherent power spectrum, the scalar
//! coherent (elastic) weight, quadrature spectra of the AIC channels and the
//! squeezing-spectrum reconstruction identity.
//!
//! All transforms are one-sided cosine transforms evaluated exactly through
//! the resolvent (i omega 1 - M)^{-1} on the eigenbasis with the stationary
//! zero mode deflated, so there are no truncation artifacts and omega = 0 is
//! regular.

use crate::correlations::{aic_third_vector, dipole_fluct_vector, mean_quadrature};
use crate::error::{Error, Result};
use crate::model::{
    build_liouvillian, steady_state, PhysParams, SteadyState, IDX_A13, IDX_A24, IDX_A31, IDX_A42,
};
use crate::numerics::{eig_decompose, C64, CVector, EigDecomposition};

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub omegas: Vec<f64>,
    pub channels: Vec<(String, Vec<f64>)>,
    /// Prefactor of the elastic delta(omega) line, reported separately so the
    /// grid never carries a sentinel bin.
    pub coherent_weight: f64,
}

impl SpectrumResult {
    pub fn channel(&self, name: &str) -> Option<&[f64]> {
        self.channels
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }
}

/// Symmetric default grid: 2001 points over +-max(30 gamma, 1.5 Omega2).
pub fn default_omega_grid(p: &PhysParams) -> Vec<f64> {
    let omega2 = (4.0 * p.omega * p.omega + (p.delta_z - p.delta_l).powi(2)).sqrt();
    let ext = (30.0 * p.gamma).max(1.5 * omega2);
    let n = 2001usize;
    (0..n)
        .map(|k| -ext + 2.0 * ext * k as f64 / (n - 1) as f64)
        .collect()
}

/// Weight of the elastic line, pi Omega^2/D^2 [gamma^2/4 + (Delta-delta/2)^2].
pub fn coherent_weight(p: &PhysParams) -> f64 {
    let d = 2.0 * p.omega * p.omega
        + (p.gamma * p.gamma + p.delta_z * p.delta_z) / 4.0
        + (p.delta_l - p.delta_z / 2.0).powi(2);
    std::f64::consts::PI * p.omega * p.omega / (d * d)
        * (p.gamma * p.gamma / 4.0 + (p.delta_l - p.delta_z / 2.0).powi(2))
}

struct Engine {
    ss: SteadyState,
    decomp: EigDecomposition,
}

impl Engine {
    fn new(p: &PhysParams) -> Result<Engine> {
        if p.omega == 0.0 {
            return Err(Error::ZeroIntensity);
        }
        let ss = steady_state(p)?;
        let decomp = eig_decompose(&build_liouvillian(p))?;
        Ok(Engine { ss, decomp })
    }

    fn resolve(&self, omega: f64, v: &CVector) -> Result<CVector> {
        self.decomp.resolvent_deflated(omega, v)
    }
}

/// Incoherent (fluctuation) power spectrum of the pi emission.
pub fn incoherent_spectrum(p: &PhysParams, omegas: &[f64]) -> Result<SpectrumResult> {
    p.validate()?;
    let eng = Engine::new(p)?;
    let w = dipole_fluct_vector(&eng.ss);
    let vals = omegas
        .iter()
        .map(|&om| {
            let x = eng.resolve(om, &w)?;
            Ok((x[IDX_A31] - x[IDX_A42]).re)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SpectrumResult {
        omegas: omegas.to_vec(),
        channels: vec![("s_inc".into(), vals)],
        coherent_weight: coherent_weight(p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureOrder {
    Second,
    Third,
    Total,
}

fn second_order_kernel(eng: &Engine, phi: f64, omega: f64, w2: &CVector) -> Result<f64> {
    // cos transform of the real channel h^(2): average of the one-sided
    // transforms at +-omega
    let coh = eng.ss.a31() - eng.ss.a42();
    let em = C64::from_polar(1.0, -phi);
    let ep = C64::from_polar(1.0, phi);
    let mut acc = 0.0;
    for w in [omega, -omega] {
        let x = eng.resolve(w, w2)?;
        acc += (coh * (em * (x[IDX_A13] - x[IDX_A24]) + ep * (x[IDX_A31] - x[IDX_A42]))).re;
    }
    Ok(0.5 * acc)
}

fn third_order_kernel(eng: &Engine, phi: f64, omega: f64, t3: &CVector) -> Result<f64> {
    let em = C64::from_polar(1.0, -phi);
    let mut acc = 0.0;
    for w in [omega, -omega] {
        let x = eng.resolve(w, t3)?;
        acc += (em * (x[IDX_A13] - x[IDX_A24])).re;
    }
    Ok(0.5 * acc)
}

/// Normalized quadrature spectra of the AIC channels,
/// S^(q)(omega) = 8 gamma1 integral cos(omega tau) h^(q)(tau) dtau.
pub fn quadrature_spectrum(
    p: &PhysParams,
    phi: f64,
    order: QuadratureOrder,
    omegas: &[f64],
) -> Result<SpectrumResult> {
    p.validate()?;
    let eng = Engine::new(p)?;
    let mq = mean_quadrature(&eng.ss, phi);
    if mq.abs() < 1e-12 {
        return Err(Error::VanishingMeanQuadrature { phi });
    }
    let hinf = (eng.ss.a11() + eng.ss.a22()) * mq;
    let w2 = dipole_fluct_vector(&eng.ss);
    let t3 = aic_third_vector(&eng.ss);
    let scale = 8.0 * p.gamma1() / hinf;

    let mut s2 = Vec::new();
    let mut s3 = Vec::new();
    for &om in omegas {
        if matches!(order, QuadratureOrder::Second | QuadratureOrder::Total) {
            s2.push(scale * second_order_kernel(&eng, phi, om, &w2)?);
        }
        if matches!(order, QuadratureOrder::Third | QuadratureOrder::Total) {
            s3.push(scale * third_order_kernel(&eng, phi, om, &t3)?);
        }
    }
    let mut channels = Vec::new();
    if !s2.is_empty() && !s3.is_empty() {
        let total: Vec<f64> = s2.iter().zip(&s3).map(|(a, b)| a + b).collect();
        channels.push(("s2".into(), s2));
        channels.push(("s3".into(), s3));
        channels.push(("s_total".into(), total));
    } else if !s2.is_empty() {
        channels.push(("s2".into(), s2));
    } else {
        channels.push(("s3".into(), s3));
    }
    Ok(SpectrumResult {
        omegas: omegas.to_vec(),
        channels,
        coherent_weight: coherent_weight(p),
    })
}

/// Unnormalized squeezing spectrum: the cosine transform of the
/// normally-ordered quadrature fluctuation correlation
/// <: dE_phi(0) dE_phi(tau) :>, times 8 gamma1. Defined at every phi,
/// including where the mean quadrature (and hence the normalized channel)
/// vanishes.
pub fn squeezing_spectrum(p: &PhysParams, phi: f64, omegas: &[f64]) -> Result<SpectrumResult> {
    p.validate()?;
    let eng = Engine::new(p)?;
    let w2 = dipole_fluct_vector(&eng.ss);
    let e2m = C64::from_polar(1.0, -2.0 * phi);
    let scale = 8.0 * p.gamma1();
    let vals = omegas
        .iter()
        .map(|&om| {
            let xp = eng.resolve(om, &w2)?;
            let xm = eng.resolve(-om, &w2)?;
            let c = (xp[IDX_A13] - xp[IDX_A24]) + (xm[IDX_A13] - xm[IDX_A24]);
            let d = (xp[IDX_A31] - xp[IDX_A42]) + (xm[IDX_A31] - xm[IDX_A42]);
            Ok(scale * 0.5 * (0.5 * (e2m * c).re + 0.5 * d.re))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(SpectrumResult {
        omegas: omegas.to_vec(),
        channels: vec![("s_squeeze".into(), vals)],
        coherent_weight: coherent_weight(p),
    })
}

/// Max grid deviation of S_inc(omega) from the squeezing-spectrum sum
/// [S_0 + S_{pi/2}] / (8 gamma1); an exact identity of the model.
pub fn reconstruction_check(p: &PhysParams, omegas: &[f64]) -> Result<f64> {
    let s_inc = incoherent_spectrum(p, omegas)?;
    let s0 = squeezing_spectrum(p, 0.0, omegas)?;
    let s90 = squeezing_spectrum(p, std::f64::consts::FRAC_PI_2, omegas)?;
    let inc = s_inc.channel("s_inc").unwrap();
    let a = s0.channel("s_squeeze").unwrap();
    let b = s90.channel("s_squeeze").unwrap();
    let k = 1.0 / (8.0 * p.gamma1());
    Ok(inc
        .iter()
        .zip(a.iter().zip(b))
        .map(|(i, (x, y))| (i - k * (x + y)).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::decompose_intensity;

    #[test]
    fn coherent_weight_value_and_identity() {
        let p = PhysParams::new(1.0, 0.0, 0.0);
        let w = coherent_weight(&p);
        assert!((w - 0.15514).abs() < 1e-5);
        let ss = steady_state(&p).unwrap();
        let d = decompose_intensity(&ss);
        assert!((w - std::f64::consts::PI * (d.coh0 + d.coh_cross)).abs() < 1e-12);
    }

    #[test]
    fn sidebands_near_generalized_rabi() {
        let p = PhysParams::new(9.0, 0.0, -8.0);
        let omegas = default_omega_grid(&p);
        let s = incoherent_spectrum(&p, &omegas).unwrap();
        let vals = s.channel("s_inc").unwrap();
        // local maxima above omega > 5
        let mut peaks = Vec::new();
        for i in 1..vals.len() - 1 {
            if omegas[i] > 5.0 && vals[i] > vals[i - 1] && vals[i] > vals[i + 1] {
                peaks.push((vals[i], omegas[i]));
            }
        }
        peaks.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        let mut locs = [peaks[0].1, peaks[1].1];
        locs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((locs[0] - 18.0).abs() < 0.2);
        assert!((locs[1] - 388f64.sqrt()).abs() < 0.2);
    }

    #[test]
    fn spectrum_even_in_omega() {
        let p = PhysParams::new(9.0, 0.0, -8.0);
        let omegas: Vec<f64> = (0..41).map(|k| -20.0 + k as f64).collect();
        let s = incoherent_spectrum(&p, &omegas).unwrap();
        let v = s.channel("s_inc").unwrap();
        for k in 0..v.len() {
            assert!((v[k] - v[v.len() - 1 - k]).abs() < 1e-12);
        }
    }

    #[test]
    fn deflated_matches_direct_solve_off_zero() {
        let p = PhysParams::new(9.0, 0.0, -8.0);
        let ss = steady_state(&p).unwrap();
        let m = build_liouvillian(&p);
        let w = dipole_fluct_vector(&ss);
        let d = eig_decompose(&m).unwrap();
        for om in [3.0, 18.0, -19.7] {
            let a = d.resolvent_deflated(om, &w).unwrap();
            let b = crate::numerics::resolvent_solve(&m, om, &w).unwrap();
            for (x, y) in a.iter().zip(b.iter()) {
                assert!((x - y).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn squeezing_signature_weak_field() {
        let p = PhysParams::new(0.25, 0.0, 0.0);
        let omegas: Vec<f64> = (0..121).map(|k| k as f64 * 0.025).collect();
        let s = quadrature_spectrum(&p, std::f64::consts::FRAC_PI_2, QuadratureOrder::Second, &omegas)
            .unwrap();
        let min = s
            .channel("s2")
            .unwrap()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        assert!(min < 0.0);
    }

    #[test]
    fn reconstruction_identity_three_regimes() {
        for (om, dl, dz) in [(1.0, 0.0, 0.0), (9.0, 0.0, -8.0), (0.25, 2.0, -2.0)] {
            let p = PhysParams::new(om, dl, dz);
            let omegas = default_omega_grid(&p);
            let dev = reconstruction_check(&p, &omegas).unwrap();
            assert!(dev < 1e-8, "({om},{dl},{dz}): dev = {dev}");
        }
    }

    #[test]
    fn narrow_peak_optical_pumping_regime() {
        let p = PhysParams::new(0.25, 2.0, -2.0);
        let m = build_liouvillian(&p);
        let d = eig_decompose(&m).unwrap();
        // slowest nonzero rate well below gamma/10 gives the sharp peak
        let slowest = d
            .eigenvalues
            .iter()
            .filter(|l| l.norm() > 1e-9)
            .map(|l| -l.re)
            .fold(f64::INFINITY, f64::min);
        assert!(slowest < p.gamma / 10.0);
        assert!(slowest < 0.02);
    }
}
