//! Named experiment presets: each reproduces the data behind one published
//! figure panel, with the caption's parameter set pinned.

use std::f64::consts::FRAC_PI_2;

use rfbeats::Error;

use crate::config::{InitialStateSpec, Observable, Params, RunConfig, SweepParam, Task};

pub const PRESET_NAMES: [&str; 32] = [
    "fig2a", "fig2b", "fig2c", "fig2d", "fig3a", "fig3b", "fig3c", "fig3d", "fig4", "fig5a",
    "fig5b", "fig6", "fig7", "fig8a", "fig8b", "fig8c", "fig9a", "fig9b", "fig9c", "fig9d",
    "fig10", "fig11", "fig12", "fig13a", "fig13b", "fig13c", "fig13d", "fig13e", "fig13f",
    "fig13g", "fig13h", "fig14",
];

pub fn available() -> String {
    PRESET_NAMES.join(", ")
}

fn params(omega: f64, delta_l: f64, delta_z: f64) -> Params {
    Params {
        omega,
        delta_l,
        delta_z,
        gamma: 1.0,
        b_ell: 0.0,
        f_pi: 1.0,
    }
}

fn ground3() -> InitialStateSpec {
    InitialStateSpec::Named("ground3".into())
}

fn equal_ground() -> InitialStateSpec {
    InitialStateSpec::Named("equal-ground".into())
}

pub fn preset(name: &str) -> Result<RunConfig, Error> {
    // transient populations from |3> at weak drive, four detuning panels
    let evolve_panel = |dl: f64, dz: f64| RunConfig {
        task: Task::Evolve {
            t_max: 10.0,
            n_t: 2001,
            initial_state: ground3(),
        },
        params: params(1.0, dl, dz),
        format: None,
        output: None,
    };
    // stationary populations against drive strength, same panels
    let steady_sweep = |dl: f64, dz: f64| RunConfig {
        task: Task::Sweep {
            param: SweepParam::Omega,
            from: 0.05,
            to: 10.0,
            n: 200,
            observable: Observable::Steady,
            phi: FRAC_PI_2,
        },
        params: params(1.0, dl, dz),
        format: None,
        output: None,
    };
    // strong-field intensity beats from the equal ground-state start
    let beat_intensity = |dz: f64| RunConfig {
        task: Task::Intensity {
            t_max: 20.0,
            n_t: 4001,
            initial_state: equal_ground(),
        },
        params: params(9.0, 0.0, dz),
        format: None,
        output: None,
    };
    let weak_g2 = |omega: f64| RunConfig {
        task: Task::G2 {
            t_max: 20.0,
            n_t: 2001,
        },
        params: params(omega, 0.0, 0.0),
        format: None,
        output: None,
    };
    let beat_g2 = |dz: f64| RunConfig {
        task: Task::G2 {
            t_max: 10.0,
            n_t: 4001,
        },
        params: params(9.0, 0.0, dz),
        format: None,
        output: None,
    };
    let beat_aic = |dz: f64| RunConfig {
        task: Task::Aic {
            t_max: 8.0,
            n_t: 4001,
            phi: FRAC_PI_2,
        },
        params: params(9.0, 0.0, dz),
        format: None,
        output: None,
    };
    let beat_qspectrum = |dz: f64| RunConfig {
        task: Task::Qspectrum {
            phi: FRAC_PI_2,
            omega_max: Some(30.0),
            n_omega: 2001,
        },
        params: params(9.0, 0.0, dz),
        format: None,
        output: None,
    };

    let cfg = match name {
        "fig2a" => evolve_panel(0.0, 0.0),
        "fig2b" => evolve_panel(2.0, -2.0),
        "fig2c" => evolve_panel(-2.0, -2.0),
        "fig2d" => evolve_panel(-2.0, -4.0),
        "fig3a" => steady_sweep(0.0, 0.0),
        "fig3b" => steady_sweep(2.0, -2.0),
        "fig3c" => steady_sweep(-2.0, -2.0),
        "fig3d" => steady_sweep(-2.0, -4.0),
        "fig4" => RunConfig {
            task: Task::Intensity {
                t_max: 20.0,
                n_t: 2001,
                initial_state: equal_ground(),
            },
            params: params(1.0, 0.0, 0.0),
            format: None,
            output: None,
        },
        "fig5a" => beat_intensity(-8.0),
        "fig5b" => beat_intensity(-15.0),
        "fig6" => RunConfig {
            // interference weight C against the Zeeman mismatch
            task: Task::Sweep {
                param: SweepParam::DeltaZ,
                from: -10.0,
                to: 10.0,
                n: 401,
                observable: Observable::Interference,
                phi: FRAC_PI_2,
            },
            params: params(0.25, 2.0, 0.0),
            format: None,
            output: None,
        },
        "fig7" => RunConfig {
            task: Task::Spectrum {
                omega_max: Some(30.0),
                n_omega: 2001,
            },
            params: params(9.0, 0.0, -8.0),
            format: None,
            output: None,
        },
        "fig8a" => weak_g2(0.25),
        "fig8b" => weak_g2(0.5),
        "fig8c" => weak_g2(1.0),
        "fig9a" => beat_g2(-8.0),
        "fig9b" => beat_g2(-10.0),
        "fig9c" => beat_g2(-12.0),
        "fig9d" => beat_g2(-15.0),
        "fig10" => RunConfig {
            task: Task::Aic {
                t_max: 20.0,
                n_t: 2001,
                phi: FRAC_PI_2,
            },
            params: params(0.25, 0.0, 0.0),
            format: None,
            output: None,
        },
        "fig11" => RunConfig {
            task: Task::Qspectrum {
                phi: FRAC_PI_2,
                omega_max: Some(5.0),
                n_omega: 2001,
            },
            params: params(0.25, 0.0, 0.0),
            format: None,
            output: None,
        },
        "fig12" => RunConfig {
            // optical-pumping regime: slow decay of the correlations
            task: Task::Aic {
                t_max: 60.0,
                n_t: 3001,
                phi: FRAC_PI_2,
            },
            params: params(0.25, 2.0, -2.0),
            format: None,
            output: None,
        },
        "fig13a" => beat_aic(-8.0),
        "fig13b" => beat_aic(-10.0),
        "fig13c" => beat_aic(-12.0),
        "fig13d" => beat_aic(-15.0),
        "fig13e" => beat_qspectrum(-8.0),
        "fig13f" => beat_qspectrum(-10.0),
        "fig13g" => beat_qspectrum(-12.0),
        "fig13h" => beat_qspectrum(-15.0),
        "fig14" => RunConfig {
            // variance against drive strength, out-of-phase quadrature
            task: Task::Sweep {
                param: SweepParam::Omega,
                from: 0.01,
                to: 2.0,
                n: 400,
                observable: Observable::Variance,
                phi: FRAC_PI_2,
            },
            params: params(1.0, 0.0, 0.0),
            format: None,
            output: None,
        },
        other => {
            return Err(Error::UnknownPreset {
                name: other.to_string(),
                available: available(),
            })
        }
    };
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_documented_presets_resolve() {
        for name in available().split(", ") {
            assert!(preset(name).is_ok(), "preset {name} failed");
        }
    }

    #[test]
    fn unknown_preset_lists_names() {
        match preset("fig99") {
            Err(Error::UnknownPreset { available, .. }) => {
                assert!(available.contains("fig13d"));
            }
            _ => panic!("expected UnknownPreset"),
        }
    }

    #[test]
    fn pinned_examples() {
        let c = preset("fig5a").unwrap();
        assert_eq!(c.params.omega, 9.0);
        assert_eq!(c.params.delta_z, -8.0);
        assert!(matches!(
            c.task,
            Task::Intensity { ref initial_state, .. }
                if *initial_state == InitialStateSpec::Named("equal-ground".into())
        ));

        let c = preset("fig2b").unwrap();
        assert_eq!((c.params.omega, c.params.delta_l, c.params.delta_z), (1.0, 2.0, -2.0));

        let c = preset("fig13d").unwrap();
        assert_eq!(c.params.delta_z, -15.0);
        assert!(matches!(c.task, Task::Aic { phi, .. } if phi == FRAC_PI_2));
    }
}
