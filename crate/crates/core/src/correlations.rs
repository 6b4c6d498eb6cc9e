//! Two-time correlations by the quantum regression formula: dipole
//! fluctuation correlation, photon-photon g2, and the amplitude-intensity
//! correlation h_phi with its second/third-order split.
//!
//! Every initial-condition vector is generated from the operator-product
//! moment rules rather than transcribed, so a single pair of formulas covers
//! all 64 coefficients.

use ndarray::Array1;

use crate::error::{Error, Result};
use crate::model::{
    build_liouvillian, steady_state, PhysParams, SteadyState, IDX_A11, IDX_A13, IDX_A22, IDX_A24,
    IDX_A31, IDX_A33, IDX_A42, IDX_A44,
};
use crate::numerics::{C64, CVector, Propagator};

/// (j,k) labels of the Bloch-vector slots, in storage order.
pub const OPERATOR_LABELS: [(usize, usize); 8] = [
    (1, 1),
    (1, 3),
    (2, 2),
    (2, 4),
    (3, 1),
    (3, 3),
    (4, 2),
    (4, 4),
];

/// Stationary alpha_jk; zero for every pair outside the reduced system.
pub fn alpha(ss: &SteadyState, j: usize, k: usize) -> C64 {
    match (j, k) {
        (1, 1) => ss.alpha[IDX_A11],
        (1, 3) => ss.alpha[IDX_A13],
        (2, 2) => ss.alpha[IDX_A22],
        (2, 4) => ss.alpha[IDX_A24],
        (3, 1) => ss.alpha[IDX_A31],
        (3, 3) => ss.alpha[IDX_A33],
        (4, 2) => ss.alpha[IDX_A42],
        (4, 4) => ss.alpha[IDX_A44],
        _ => C64::from(0.0),
    }
}

fn kron(a: usize, b: usize) -> bool {
    a == b
}

/// <A_kl R> or <A_kl R A_pq> from <A_kl A_mn> = alpha_kn delta_lm and
/// <A_ij A_kl A_mn> = alpha_in delta_jk delta_lm.
pub fn product_vector(
    ss: &SteadyState,
    (k, l): (usize, usize),
    right: Option<(usize, usize)>,
) -> CVector {
    let mut v = Array1::<C64>::zeros(8);
    for (slot, &(m, n)) in OPERATOR_LABELS.iter().enumerate() {
        v[slot] = match right {
            None => {
                if kron(l, m) {
                    alpha(ss, k, n)
                } else {
                    C64::from(0.0)
                }
            }
            Some((p, q)) => {
                if kron(l, m) && kron(n, p) {
                    alpha(ss, k, q)
                } else {
                    C64::from(0.0)
                }
            }
        };
    }
    v
}

/// <dA_kl dR> with dA = A - alpha.
pub fn second_fluct_vector(ss: &SteadyState, (k, l): (usize, usize)) -> CVector {
    let mut v = Array1::<C64>::zeros(8);
    for (slot, &(m, n)) in OPERATOR_LABELS.iter().enumerate() {
        let direct = if kron(l, m) {
            alpha(ss, k, n)
        } else {
            C64::from(0.0)
        };
        v[slot] = direct - alpha(ss, k, l) * alpha(ss, m, n);
    }
    v
}

/// <dA_ij dR dA_mn>.
pub fn third_fluct_vector(
    ss: &SteadyState,
    (i, j): (usize, usize),
    (m, n): (usize, usize),
) -> CVector {
    let mut v = Array1::<C64>::zeros(8);
    for (slot, &(k, l)) in OPERATOR_LABELS.iter().enumerate() {
        let mut t = C64::from(0.0);
        if kron(j, k) && kron(l, m) {
            t += alpha(ss, i, n);
        }
        if kron(j, k) {
            t -= alpha(ss, i, l) * alpha(ss, m, n);
        }
        if kron(j, m) {
            t -= alpha(ss, i, n) * alpha(ss, k, l);
        }
        if kron(l, m) {
            t -= alpha(ss, i, j) * alpha(ss, k, n);
        }
        t += 2.0 * alpha(ss, i, j) * alpha(ss, k, l) * alpha(ss, m, n);
        v[slot] = t;
    }
    v
}

/// Initial vector of the dipole fluctuation correlation: the evolved
/// (A31 - A42) channel of this vector yields all four terms of the sum
/// <dA13 dA31(t)> + <dA24 dA42(t)> - <dA13 dA42(t)> - <dA24 dA31(t)>.
pub fn dipole_fluct_vector(ss: &SteadyState) -> CVector {
    &second_fluct_vector(ss, (1, 3)) - &second_fluct_vector(ss, (2, 4))
}

/// Third-order initial vector of the AIC, signs (+ + - -) over the four
/// dipole pairings.
pub fn aic_third_vector(ss: &SteadyState) -> CVector {
    let a = third_fluct_vector(ss, (1, 3), (3, 1));
    let b = third_fluct_vector(ss, (2, 4), (4, 2));
    let c = third_fluct_vector(ss, (1, 3), (4, 2));
    let d = third_fluct_vector(ss, (2, 4), (3, 1));
    &(&a + &b) - &(&c + &d)
}

/// The four scalar fluctuation moments
/// (<dA13 dA31>, <dA24 dA42>, <dA13 dA42>, <dA24 dA31>).
pub fn fluctuation_moments(ss: &SteadyState) -> [C64; 4] {
    let w13 = second_fluct_vector(ss, (1, 3));
    let w24 = second_fluct_vector(ss, (2, 4));
    [w13[IDX_A31], w24[IDX_A42], w13[IDX_A42], w24[IDX_A31]]
}

#[derive(Debug, Clone)]
pub enum ChannelData {
    Real(Vec<f64>),
    Complex(Vec<C64>),
}

#[derive(Debug, Clone)]
pub struct Channel {
    pub name: String,
    pub data: ChannelData,
}

#[derive(Debug, Clone)]
pub struct CorrelationSeries {
    pub taus: Vec<f64>,
    pub channels: Vec<Channel>,
    pub normalization: f64,
}

impl CorrelationSeries {
    pub fn real_channel(&self, name: &str) -> Option<&[f64]> {
        self.channels.iter().find(|c| c.name == name).and_then(|c| {
            if let ChannelData::Real(v) = &c.data {
                Some(v.as_slice())
            } else {
                None
            }
        })
    }

    pub fn complex_channel(&self, name: &str) -> Option<&[C64]> {
        self.channels.iter().find(|c| c.name == name).and_then(|c| {
            if let ChannelData::Complex(v) = &c.data {
                Some(v.as_slice())
            } else {
                None
            }
        })
    }
}

/// e^{M tau} w0 over the grid.
pub fn qrf_correlate(p: &PhysParams, w0: &CVector, taus: &[f64]) -> Result<Vec<CVector>> {
    p.validate()?;
    let prop = Propagator::new(&build_liouvillian(p))?;
    taus.iter().map(|&t| prop.apply(t, w0)).collect()
}

fn require_drive(p: &PhysParams) -> Result<SteadyState> {
    if p.omega == 0.0 {
        return Err(Error::ZeroIntensity);
    }
    steady_state(p)
}

/// Normalized photon-photon correlation of the pi channel.
pub fn g2(p: &PhysParams, taus: &[f64]) -> Result<CorrelationSeries> {
    let ss = require_drive(p)?;
    let v13 = product_vector(&ss, (1, 3), Some((3, 1)));
    let v24 = product_vector(&ss, (2, 4), Some((4, 2)));
    let x13 = qrf_correlate(p, &v13, taus)?;
    let x24 = qrf_correlate(p, &v24, taus)?;
    let ipi = ss.a11() + ss.a22();
    let norm = ipi * ipi;
    let vals: Vec<f64> = x13
        .iter()
        .zip(&x24)
        .map(|(a, b)| {
            (a[IDX_A11] + a[IDX_A22] + b[IDX_A11] + b[IDX_A22]).re / norm
        })
        .collect();
    Ok(CorrelationSeries {
        taus: taus.to_vec(),
        channels: vec![Channel {
            name: "g2".into(),
            data: ChannelData::Real(vals),
        }],
        normalization: norm,
    })
}

/// Four-term dipole fluctuation correlation (the power-spectrum kernel).
pub fn dipole_fluctuation_correlation(p: &PhysParams, taus: &[f64]) -> Result<CorrelationSeries> {
    let ss = require_drive(p)?;
    let w = dipole_fluct_vector(&ss);
    let xs = qrf_correlate(p, &w, taus)?;
    let vals: Vec<C64> = xs.iter().map(|x| x[IDX_A31] - x[IDX_A42]).collect();
    Ok(CorrelationSeries {
        taus: taus.to_vec(),
        channels: vec![Channel {
            name: "dipole".into(),
            data: ChannelData::Complex(vals),
        }],
        normalization: 1.0,
    })
}

/// Re[(alpha13 - alpha24) e^{-i phi}], the stationary mean quadrature of
/// the pi dipole (up to the f_pi field scale).
pub fn mean_quadrature(ss: &SteadyState, phi: f64) -> f64 {
    ((ss.a13() - ss.a24()) * C64::from_polar(1.0, -phi)).re
}

fn aic_normalization(ss: &SteadyState, phi: f64) -> Result<f64> {
    let mq = mean_quadrature(ss, phi);
    if mq.abs() < 1e-12 {
        return Err(Error::VanishingMeanQuadrature { phi });
    }
    Ok((ss.a11() + ss.a22()) * mq)
}

/// Amplitude-intensity correlation h(tau) = 1 + h2(tau) + h3(tau), with the
/// second- and third-order fluctuation channels computed independently from
/// their own initial vectors.
pub fn aic(p: &PhysParams, phi: f64, taus: &[f64]) -> Result<CorrelationSeries> {
    let ss = require_drive(p)?;
    let hinf = aic_normalization(&ss, phi)?;
    let em = C64::from_polar(1.0, -phi);
    let ep = C64::from_polar(1.0, phi);

    let v13 = product_vector(&ss, (1, 3), Some((3, 1)));
    let v24 = product_vector(&ss, (2, 4), Some((4, 2)));
    let w2 = dipole_fluct_vector(&ss);
    let t3 = aic_third_vector(&ss);

    let prop = Propagator::new(&build_liouvillian(p))?;
    let coh = ss.a31() - ss.a42();

    let mut h = Vec::with_capacity(taus.len());
    let mut h2 = Vec::with_capacity(taus.len());
    let mut h3 = Vec::with_capacity(taus.len());
    for &t in taus {
        let x13 = prop.apply(t, &v13)?;
        let x24 = prop.apply(t, &v24)?;
        let big_h = (em * (x13[IDX_A13] - x13[IDX_A24] + x24[IDX_A13] - x24[IDX_A24])).re;
        let w = prop.apply(t, &w2)?;
        let big_h2 = (coh
            * (em * (w[IDX_A13] - w[IDX_A24]) + ep * (w[IDX_A31] - w[IDX_A42])))
        .re;
        let x3 = prop.apply(t, &t3)?;
        let big_h3 = (em * (x3[IDX_A13] - x3[IDX_A24])).re;
        h.push(big_h / hinf);
        h2.push(big_h2 / hinf);
        h3.push(big_h3 / hinf);
    }
    Ok(CorrelationSeries {
        taus: taus.to_vec(),
        channels: vec![
            Channel {
                name: "h".into(),
                data: ChannelData::Real(h),
            },
            Channel {
                name: "h2".into(),
                data: ChannelData::Real(h2),
            },
            Channel {
                name: "h3".into(),
                data: ChannelData::Real(h3),
            },
        ],
        normalization: hinf,
    })
}

/// Closed-form initial values of the AIC split.
pub fn aic_initial_values(p: &PhysParams) -> (f64, f64) {
    let d = steady_state_denominator(p);
    let q = ((2.0 * p.delta_l - p.delta_z).powi(2) + p.gamma * p.gamma) / (2.0 * d);
    (1.0 - q, q - 2.0)
}

fn steady_state_denominator(p: &PhysParams) -> f64 {
    2.0 * p.omega * p.omega
        + (p.gamma * p.gamma + p.delta_z * p.delta_z) / 4.0
        + (p.delta_l - p.delta_z / 2.0).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::time_grid;

    fn ss(om: f64, dl: f64, dz: f64) -> SteadyState {
        steady_state(&PhysParams::new(om, dl, dz)).unwrap()
    }

    #[test]
    fn cross_product_vectors_vanish() {
        let s = ss(9.0, 0.0, -8.0);
        for v in [
            product_vector(&s, (1, 3), Some((4, 2))),
            product_vector(&s, (2, 4), Some((3, 1))),
        ] {
            assert!(v.iter().all(|z| z.norm() == 0.0));
        }
    }

    #[test]
    fn surviving_product_vectors() {
        let s = ss(9.0, 0.0, -8.0);
        let v13 = product_vector(&s, (1, 3), Some((3, 1)));
        let v24 = product_vector(&s, (2, 4), Some((4, 2)));
        for (slot, z) in v13.iter().enumerate() {
            let expect = if slot == IDX_A33 { C64::from(s.a11()) } else { C64::from(0.0) };
            assert!((z - expect).norm() < 1e-15);
        }
        for (slot, z) in v24.iter().enumerate() {
            let expect = if slot == IDX_A44 { C64::from(s.a22()) } else { C64::from(0.0) };
            assert!((z - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn single_operator_vectors_match_transcription() {
        // <A13 R> = (0,0,0,0, a11, a13, 0,0); <A24 R> = (0,...,a22, a24)
        let s = ss(2.0, 1.0, -3.0);
        let v13 = product_vector(&s, (1, 3), None);
        assert!((v13[IDX_A31] - s.alpha[IDX_A11]).norm() < 1e-15);
        assert!((v13[IDX_A33] - s.alpha[IDX_A13]).norm() < 1e-15);
        let v24 = product_vector(&s, (2, 4), None);
        assert!((v24[IDX_A42] - s.alpha[IDX_A22]).norm() < 1e-15);
        assert!((v24[IDX_A44] - s.alpha[IDX_A24]).norm() < 1e-15);
        assert_eq!(
            v13.iter().filter(|z| z.norm() > 0.0).count()
                + v24.iter().filter(|z| z.norm() > 0.0).count(),
            4
        );
    }

    #[test]
    fn table_moments_strong_field() {
        let s = ss(9.0, 0.0, -8.0);
        let m = fluctuation_moments(&s);
        assert!((m[0].re - 0.20836).abs() < 1e-5 && m[0].im.abs() < 1e-12);
        assert!((m[1].re - 0.174014).abs() < 1e-5);
        assert!((m[2] - C64::new(0.000134, 0.002146)).norm() < 1e-5);
        assert!((m[3] - m[2].conj()).norm() < 1e-12);
    }

    #[test]
    fn fluct_vectors_orthogonal_to_zero_mode() {
        let p = PhysParams::new(9.0, 0.0, -8.0);
        let s = steady_state(&p).unwrap();
        let l = crate::model::trace_row();
        for v in [
            second_fluct_vector(&s, (1, 3)),
            second_fluct_vector(&s, (2, 4)),
            aic_third_vector(&s),
        ] {
            assert!(l.dot(&v).norm() < 1e-12);
        }
    }

    #[test]
    fn g2_antibunched_and_decorrelates() {
        let p = PhysParams::new(1.0, 0.0, 0.0);
        let taus = time_grid(30.0, 601);
        let series = g2(&p, &taus).unwrap();
        let vals = series.real_channel("g2").unwrap();
        assert!(vals[0].abs() < 1e-10);
        assert!((vals[vals.len() - 1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn g2_requires_drive() {
        let p = PhysParams::new(0.0, 0.0, 0.0);
        assert!(matches!(g2(&p, &[0.0]), Err(Error::ZeroIntensity)));
    }

    #[test]
    fn aic_zero_at_origin_and_identity() {
        for (om, dl, dz) in [(9.0, 0.0, -8.0), (0.25, 2.0, -2.0), (1.0, 0.0, 0.0)] {
            let p = PhysParams::new(om, dl, dz);
            let taus = time_grid(10.0, 401);
            let series = aic(&p, std::f64::consts::FRAC_PI_2, &taus).unwrap();
            let h = series.real_channel("h").unwrap();
            let h2 = series.real_channel("h2").unwrap();
            let h3 = series.real_channel("h3").unwrap();
            assert!(h[0].abs() < 1e-10);
            assert!((h2[0] + h3[0] + 1.0).abs() < 1e-10);
            for i in 0..taus.len() {
                assert!((h[i] - (1.0 + h2[i] + h3[i])).abs() < 1e-12);
            }
            let (h2c, h3c) = aic_initial_values(&p);
            assert!((h2[0] - h2c).abs() < 1e-10);
            assert!((h3[0] - h3c).abs() < 1e-10);
        }
    }

    #[test]
    fn aic_initial_values_strong_field() {
        let p = PhysParams::new(9.0, 0.0, -8.0);
        let (h2c, h3c) = aic_initial_values(&p);
        assert!((h2c - 0.832690).abs() < 1e-6);
        assert!((h3c + 1.832690).abs() < 1e-6);
    }

    #[test]
    fn vanishing_mean_quadrature_reported() {
        // phi = 0 on resonance with delta = 0: Re[(a13-a24)] = 0
        let p = PhysParams::new(1.0, 0.0, 0.0);
        assert!(matches!(
            aic(&p, 0.0, &[0.0, 1.0]),
            Err(Error::VanishingMeanQuadrature { .. })
        ));
    }

    #[test]
    fn zero_vector_evolves_to_zero() {
        let p = PhysParams::new(1.0, 0.0, 0.0);
        let w0 = Array1::<C64>::zeros(8);
        for x in qrf_correlate(&p, &w0, &[0.0, 1.0, 5.0]).unwrap() {
            assert!(x.iter().all(|z| z.norm() < 1e-300));
        }
    }
}
