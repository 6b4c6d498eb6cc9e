//! Executes a validated RunConfig and renders the result to a string.

use rayon::prelude::*;
use serde_json::json;

use rfbeats::analytics::{dressed, interference_measures, unitary_beat_model, variance};
use rfbeats::correlations::{aic, g2};
use rfbeats::dynamics::{
    decompose_intensity, evolve, intensity_pi, intensity_pi_steady, intensity_sigma, time_grid,
};
use rfbeats::model::{
    steady_state, IDX_A11, IDX_A13, IDX_A22, IDX_A24, IDX_A33, IDX_A44,
};
use rfbeats::spectra::{
    coherent_weight, default_omega_grid, incoherent_spectrum, quadrature_spectrum,
    squeezing_spectrum, QuadratureOrder,
};
use rfbeats::PhysParams;

use crate::config::{Observable, RunConfig, Task};
use crate::output::{fmt_float, render_scalar, Table};
use crate::CliError;

fn omega_grid(p: &PhysParams, omega_max: Option<f64>, n: usize) -> Vec<f64> {
    match omega_max {
        None => default_omega_grid(p),
        Some(ext) => (0..n)
            .map(|k| -ext + 2.0 * ext * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    config.validate()?;
    let p = config.params.to_phys();
    let format = config.format();
    let echo = config.echo_json();
    let task = config.task.name();

    let out = match &config.task {
        Task::Steady => {
            let ss = steady_state(&p)?;
            let dec = decompose_intensity(&ss);
            render_scalar(
                &[
                    ("alpha11", json!(ss.a11())),
                    ("alpha22", json!(ss.a22())),
                    ("alpha33", json!(ss.a33())),
                    ("alpha44", json!(ss.a44())),
                    ("alpha13", json!([ss.a13().re, ss.a13().im])),
                    ("alpha24", json!([ss.a24().re, ss.a24().im])),
                    ("D", json!(ss.d)),
                    ("i_pi", json!(intensity_pi_steady(&ss, &p))),
                    ("coh0", json!(dec.coh0 * p.f_pi * p.f_pi)),
                    ("inc0", json!(dec.inc0 * p.f_pi * p.f_pi)),
                    ("coh_cross", json!(dec.coh_cross * p.f_pi * p.f_pi)),
                    ("inc_cross", json!(dec.inc_cross * p.f_pi * p.f_pi)),
                ],
                format,
                task,
                &echo,
            )
        }
        Task::Evolve {
            t_max,
            n_t,
            initial_state,
        } => {
            let r0 = initial_state.to_state()?.to_vector(&p)?;
            let times = time_grid(*t_max, *n_t);
            let traj = evolve(&p, &r0, &times)?;
            let pick_re = |i: usize| traj.states.iter().map(|s| s[i].re).collect::<Vec<_>>();
            let pick_im = |i: usize| traj.states.iter().map(|s| s[i].im).collect::<Vec<_>>();
            Table::numeric(
                vec![],
                ["t", "a11", "a22", "a33", "a44", "a13_re", "a13_im", "a24_re", "a24_im"]
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                vec![
                    times.clone(),
                    pick_re(IDX_A11),
                    pick_re(IDX_A22),
                    pick_re(IDX_A33),
                    pick_re(IDX_A44),
                    pick_re(IDX_A13),
                    pick_im(IDX_A13),
                    pick_re(IDX_A24),
                    pick_im(IDX_A24),
                ],
            )
            .render(format, task, &echo)
        }
        Task::Intensity {
            t_max,
            n_t,
            initial_state,
        } => {
            let r0 = initial_state.to_state()?.to_vector(&p)?;
            let times = time_grid(*t_max, *n_t);
            let traj = evolve(&p, &r0, &times)?;
            let ss = steady_state(&p)?;
            let dec = decompose_intensity(&ss);
            let f2 = p.f_pi * p.f_pi;
            Table::numeric(
                vec![
                    ("i_pi_steady".into(), fmt_float(intensity_pi_steady(&ss, &p))),
                    ("coh0".into(), fmt_float(dec.coh0 * f2)),
                    ("inc0".into(), fmt_float(dec.inc0 * f2)),
                    ("coh_cross".into(), fmt_float(dec.coh_cross * f2)),
                    ("inc_cross".into(), fmt_float(dec.inc_cross * f2)),
                ],
                vec!["t".into(), "i_pi".into(), "i_sigma".into()],
                vec![times.clone(), intensity_pi(&traj, &p), intensity_sigma(&traj, &p)],
            )
            .render(format, task, &echo)
        }
        Task::G2 { t_max, n_t } => {
            let taus = time_grid(*t_max, *n_t);
            let series = g2(&p, &taus)?;
            let vals = series.real_channel("g2").expect("g2 channel").to_vec();
            Table::numeric(
                vec![("normalization".into(), fmt_float(series.normalization))],
                vec!["tau".into(), "g2".into()],
                vec![taus, vals],
            )
            .render(format, task, &echo)
        }
        Task::Aic { t_max, n_t, phi } => {
            let taus = time_grid(*t_max, *n_t);
            let series = aic(&p, *phi, &taus)?;
            let pick = |name: &str| series.real_channel(name).expect("channel").to_vec();
            Table::numeric(
                vec![("phi".into(), fmt_float(*phi))],
                vec!["tau".into(), "h".into(), "h2".into(), "h3".into()],
                vec![taus, pick("h"), pick("h2"), pick("h3")],
            )
            .render(format, task, &echo)
        }
        Task::Spectrum { omega_max, n_omega } => {
            let omegas = omega_grid(&p, *omega_max, *n_omega);
            let spec = incoherent_spectrum(&p, &omegas)?;
            let vals = spec.channel("s_inc").expect("s_inc channel").to_vec();
            Table::numeric(
                vec![("coherent_weight".into(), fmt_float(spec.coherent_weight))],
                vec!["omega".into(), "s_inc".into()],
                vec![omegas, vals],
            )
            .render(format, task, &echo)
        }
        Task::Qspectrum {
            phi,
            omega_max,
            n_omega,
        } => {
            let omegas = omega_grid(&p, *omega_max, *n_omega);
            let spec = quadrature_spectrum(&p, *phi, QuadratureOrder::Total, &omegas)?;
            let sq = squeezing_spectrum(&p, *phi, &omegas)?;
            let pick = |name: &str| spec.channel(name).expect("channel").to_vec();
            Table::numeric(
                vec![
                    ("phi".into(), fmt_float(*phi)),
                    ("coherent_weight".into(), fmt_float(spec.coherent_weight)),
                ],
                vec![
                    "omega".into(),
                    "s2".into(),
                    "s3".into(),
                    "s_total".into(),
                    "s_squeeze".into(),
                ],
                vec![
                    omegas,
                    pick("s2"),
                    pick("s3"),
                    pick("s_total"),
                    sq.channel("s_squeeze").expect("s_squeeze channel").to_vec(),
                ],
            )
            .render(format, task, &echo)
        }
        Task::Variance { phi } => {
            let r = variance(&p, *phi);
            render_scalar(
                &[
                    ("phi", json!(r.phi)),
                    ("v", json!(r.v)),
                    ("squeezed", json!(r.squeezed)),
                    ("window", json!(r.window.map(|(a, b)| vec![a, b]))),
                    ("optimal_omega", json!(r.optimal_omega)),
                    ("optimal_omega_printed", json!(r.optimal_omega_printed)),
                    ("v_at_optimum", json!(r.v_at_optimum)),
                ],
                format,
                task,
                &echo,
            )
        }
        Task::Interference => {
            let r = interference_measures(&p)?;
            let special = r.special.map(|s| {
                json!({
                    "delta_0": s.delta_0,
                    "delta_min": s.delta_min,
                    "c_min": s.c_min,
                    "delta_half_plus": s.delta_half_plus,
                    "delta_half_minus": s.delta_half_minus,
                })
            });
            render_scalar(
                &[
                    ("C", json!(r.c)),
                    ("K_alpha", json!(r.k_alpha)),
                    ("K_closed_form", json!(r.k_paper)),
                    ("special_points", special.unwrap_or(json!(null))),
                ],
                format,
                task,
                &echo,
            )
        }
        Task::Dressed => {
            let d = dressed(&p);
            render_scalar(
                &[
                    ("Omega1", json!(d.omega1)),
                    ("Omega2", json!(d.omega2)),
                    ("Omega_av", json!(d.omega_av)),
                    ("Omega_beat", json!(d.omega_beat)),
                    ("E1_plus", json!(d.e1_plus)),
                    ("E1_minus", json!(d.e1_minus)),
                    ("E2_plus", json!(d.e2_plus)),
                    ("E2_minus", json!(d.e2_minus)),
                    ("theta1", json!(d.theta1)),
                    ("theta2", json!(d.theta2)),
                ],
                format,
                task,
                &echo,
            )
        }
        Task::Beats {
            t_max,
            n_t,
            a33,
            a44,
        } => {
            let times = time_grid(*t_max, *n_t);
            let ub = unitary_beat_model(&p, *a33, *a44, &times)?;
            let d = dressed(&p);
            let mut columns = vec!["t".into(), "i_unitary".into()];
            let mut series = vec![times, ub.intensity];
            if let Some(f) = ub.factorized {
                columns.push("i_factorized".into());
                series.push(f);
            }
            Table::numeric(
                vec![
                    ("optimal_ratio".into(), fmt_float(ub.optimal_ratio)),
                    ("omega_av".into(), fmt_float(d.omega_av)),
                    ("omega_beat".into(), fmt_float(d.omega_beat)),
                ],
                columns,
                series,
            )
            .render(format, task, &echo)
        }
        Task::Sweep {
            param,
            from,
            to,
            n,
            observable,
            phi,
        } => {
            let values: Vec<f64> = (0..*n)
                .map(|k| from + (to - from) * k as f64 / (*n - 1) as f64)
                .collect();
            let rows = run_sweep(&p, param, &values, observable, *phi)?;
            Table {
                comments: vec![("phi".into(), fmt_float(*phi))],
                columns: vec![
                    "param".into(),
                    "param_value".into(),
                    "observable".into(),
                    "value".into(),
                ],
                rows,
            }
            .render(format, task, &echo)
        }
    };
    Ok(out)
}

fn observe(p: &PhysParams, observable: &Observable, phi: f64) -> Result<Vec<(String, f64)>, CliError> {
    Ok(match observable {
        Observable::Steady => {
            let ss = steady_state(p)?;
            vec![
                ("alpha11".into(), ss.a11()),
                ("alpha22".into(), ss.a22()),
                ("alpha33".into(), ss.a33()),
                ("alpha44".into(), ss.a44()),
                ("i_pi".into(), intensity_pi_steady(&ss, p)),
            ]
        }
        Observable::Variance => {
            let r = variance(p, phi);
            vec![("v".into(), r.v)]
        }
        Observable::Interference => {
            let r = interference_measures(p)?;
            vec![
                ("C".into(), r.c),
                ("K_alpha".into(), r.k_alpha),
                ("coherent_weight".into(), coherent_weight(p)),
            ]
        }
    })
}

fn run_sweep(
    base: &PhysParams,
    param: &crate::config::SweepParam,
    values: &[f64],
    observable: &Observable,
    phi: f64,
) -> Result<Vec<Vec<String>>, CliError> {
    let pool = crate::thread_pool()?;
    let per_point: Vec<Vec<(String, f64)>> = pool.install(|| {
        values
            .par_iter()
            .map(|&v| {
                let mut p = base.clone();
                param.apply(&mut p, v);
                observe(&p, observable, phi)
            })
            .collect::<Result<Vec<_>, CliError>>()
    })?;
    let label = param.label();
    let mut rows = Vec::new();
    for (&v, obs) in values.iter().zip(per_point) {
        for (name, val) in obs {
            rows.push(vec![
                label.to_string(),
                fmt_float(v),
                name,
                fmt_float(val),
            ]);
        }
    }
    Ok(rows)
}
