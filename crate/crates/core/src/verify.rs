//! Three-way check of the exact sum against simulation and counting.

use serde::Serialize;

use crate::counting::{estimate_c_area_with, CAreaEstimate};
use crate::ekz::{format_rational, rational_to_f64, EkzReport};
use crate::error::Result;
use crate::homology::KzCocycle;
use crate::lyapunov::{simulate_cocycle, LyapunovEstimate, SimConfig};
use crate::origami::Origami;

pub const DEFAULT_T_MAX: f64 = 200.0;
pub const DEFAULT_SAMPLES: usize = 12;
pub const DEFAULT_TOL_LYAP: f64 = 0.02;
pub const DEFAULT_TOL_COUNT: f64 = 0.05;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyConfig {
    pub sim: SimConfig,
    pub t_max: f64,
    pub samples: usize,
    /// Allowed `|simulated − exact|` for the exponent sum.
    pub tol_lyap: f64,
    /// Allowed relative error of the fitted area constant.
    pub tol_count: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            sim: SimConfig::default(),
            t_max: DEFAULT_T_MAX,
            samples: DEFAULT_SAMPLES,
            tol_lyap: DEFAULT_TOL_LYAP,
            tol_count: DEFAULT_TOL_COUNT,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub exact: EkzReport,
    pub simulated: LyapunovEstimate,
    pub counted: CAreaEstimate,
    pub config: VerifyConfig,
    pub lyapunov_error: f64,
    pub lyapunov_ok: bool,
    pub counting_ok: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.lyapunov_ok && self.counting_ok
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "verdict": if self.passed() { "pass" } else { "fail" },
            "exact": self.exact.to_json(),
            "simulated": self.simulated.to_json(),
            "counted": self.counted.to_json(),
            "lyapunov_error": self.lyapunov_error,
            "lyapunov_ok": self.lyapunov_ok,
            "counting_ok": self.counting_ok,
            "tol_lyap": self.config.tol_lyap,
            "tol_count": self.config.tol_count,
        })
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: exact sum {} ({:.6}), simulated {:.6} ± {:.6} (|Δ| = {:.2e}, tol {}), \
             area constant {:.6} vs {:.6} (rel. err {:.2e}, tol {})",
            if self.passed() { "pass" } else { "fail" },
            format_rational(&self.exact.exponent_sum),
            rational_to_f64(&self.exact.exponent_sum),
            self.simulated.positive_sum,
            self.simulated.positive_sum_stderr,
            self.lyapunov_error,
            self.config.tol_lyap,
            self.counted.fitted_coefficient,
            self.counted.target,
            self.counted.relative_error,
            self.config.tol_count,
        )
    }
}

pub fn verify(o: &Origami, cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.sim.validate()?;
    let kz = KzCocycle::new(o)?;
    let exact = EkzReport::from_orbit(&kz.orbit);
    let simulated = simulate_cocycle(&kz, &cfg.sim)?;
    let counted = estimate_c_area_with(o, &exact, cfg.t_max, cfg.samples)?;
    let lyapunov_error = (simulated.positive_sum - rational_to_f64(&exact.exponent_sum)).abs();
    Ok(VerifyReport {
        lyapunov_ok: lyapunov_error <= cfg.tol_lyap,
        counting_ok: counted.relative_error <= cfg.tol_count,
        exact,
        simulated,
        counted,
        config: *cfg,
        lyapunov_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn torus_passes_quickly() {
        let cfg = VerifyConfig {
            sim: SimConfig {
                steps: 10_000,
                runs: 2,
                ..SimConfig::default()
            },
            t_max: 50.0,
            ..VerifyConfig::default()
        };
        let r = verify(&Origami::torus(), &cfg).unwrap();
        assert!(r.passed(), "{}", r.summary());
        assert_eq!(r.to_json()["verdict"], "pass");
    }

    #[test]
    fn impossible_tolerance_fails() {
        let cfg = VerifyConfig {
            sim: SimConfig {
                steps: 2_000,
                runs: 2,
                ..SimConfig::default()
            },
            t_max: 20.0,
            samples: 5,
            tol_lyap: 0.0,
            tol_count: 0.0,
        };
        let r = verify(&catalog::l_shape(2, 2), &cfg).unwrap();
        assert!(!r.passed());
    }
}
