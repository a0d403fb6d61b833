//! End-to-end transfer of correlations along an XX spin chain.
//!
//! Qubit 0 is decoupled and initially correlated with site 1; the state of
//! site N and qubit 0 at time t depends only on the single-excitation
//! amplitude f(t) from site 1 to site N.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix4, C64};
use crate::state::{to_bloch, x_state_params, DensityMatrix, CLASSIFY_TOL};
use crate::tdd::{tdd_numeric, tdd_x_state, MinimizerConfig};

/// Agreement required between the three routes to the discord of a sample.
pub const SERIES_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ChainConfig {
    /// Number of sites, at least 2.
    pub n: usize,
    /// Coupling; times are in units of `1/j`.
    pub j: f64,
    pub times: Vec<f64>,
}

impl ChainConfig {
    /// `steps` equally spaced times from 0 to `t_max`; a single step is `t = 0`.
    pub fn uniform(n: usize, j: f64, t_max: f64, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::InvalidConfig("steps must be positive".into()));
        }
        if !(t_max >= 0.0 && t_max.is_finite()) {
            return Err(Error::InvalidConfig(format!("t_max = {t_max} must be finite and >= 0")));
        }
        let times = if steps == 1 {
            vec![0.0]
        } else {
            (0..steps)
                .map(|i| t_max * i as f64 / (steps - 1) as f64)
                .collect()
        };
        let cfg = ChainConfig { n, j, times };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("chain needs n >= 2, got {}", self.n)));
        }
        if !(self.j > 0.0 && self.j.is_finite()) {
            return Err(Error::InvalidConfig(format!("coupling must be positive, got {}", self.j)));
        }
        if self.times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return Err(Error::InvalidConfig("times must be finite and non-negative".into()));
        }
        if self.times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidConfig("times must be non-decreasing".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainSample {
    pub t: f64,
    pub f: C64,
    /// State of site N (first qubit) and qubit 0 (second qubit).
    pub rho: DensityMatrix,
    /// Closed form in `|f|`.
    pub d: f64,
    /// X-state formula on the assembled state.
    pub d_xstate: f64,
    /// Numeric minimization on the assembled state.
    pub d_numeric: f64,
}

/// Amplitudes `<r| exp(-iHt) |1>` for `r = 1..=n` in the single-excitation
/// sector, from the sine eigenmodes of the open chain.
pub fn amplitude_vector(n: usize, j: f64, t: f64) -> Vec<C64> {
    let l = (n + 1) as f64;
    let norm = 2.0 / l;
    (1..=n)
        .map(|r| {
            (1..=n)
                .map(|k| {
                    let q = k as f64 * PI / l;
                    let energy = 2.0 * j * q.cos();
                    C64::from_polar(norm * q.sin() * (q * r as f64).sin(), -energy * t)
                })
                .sum()
        })
        .collect()
}

/// Amplitude for the excitation to travel from site 1 to site N.
pub fn transition_amplitude(cfg: &ChainConfig, t: f64) -> C64 {
    if t == 0.0 {
        // The mode sum leaves round-off where the overlap <N|1> is exact.
        return C64::new(if cfg.n == 1 { 1.0 } else { 0.0 }, 0.0);
    }
    let l = (cfg.n + 1) as f64;
    let norm = 2.0 / l;
    (1..=cfg.n)
        .map(|k| {
            let q = k as f64 * PI / l;
            C64::from_polar(
                norm * q.sin() * (q * cfg.n as f64).sin(),
                -2.0 * cfg.j * q.cos() * t,
            )
        })
        .sum()
}

/// Two-qubit state of site N and qubit 0 for transfer amplitude `f`.
pub fn output_state(f: C64) -> Result<DensityMatrix> {
    let s = f.norm_sqr();
    if s > 1.0 + 1e-12 {
        return Err(Error::NotPositive {
            min_eigenvalue: (1.0 - s) / 4.0,
        });
    }
    let mut m = ComplexMatrix4::from_real_diag([(2.0 - s) / 4.0, (2.0 - s) / 4.0, s / 4.0, s / 4.0]);
    let q = f / 4.0;
    m.0[0][3] = q;
    m.0[1][2] = q;
    m.0[2][1] = q.conj();
    m.0[3][0] = q.conj();
    DensityMatrix::validate(m)
}

/// Discord of the output state as a function of `|f|` alone.
pub fn tdd_of_f(fabs: f64) -> Result<f64> {
    if !(0.0..=1.0 + 1e-12).contains(&fabs) {
        return Err(Error::Domain(format!("|f| = {fabs} outside [0, 1]")));
    }
    let x = fabs.min(1.0);
    let x2 = x * x;
    Ok(0.5 * x * (1.0 - x2) / (x2 * x2 - x2 + 1.0).sqrt())
}

pub fn run_series(cfg: &ChainConfig, mcfg: &MinimizerConfig) -> Result<Vec<ChainSample>> {
    cfg.validate()?;
    cfg.times
        .iter()
        .map(|&t| {
            let f = transition_amplitude(cfg, t);
            let rho = output_state(f)?;
            let d = tdd_of_f(f.norm())?;
            let x = x_state_params(rho.matrix(), CLASSIFY_TOL)
                .ok_or_else(|| Error::Consistency("output state is not X-shaped".into()))?;
            let d_xstate = tdd_x_state(x.g1, x.g2, x.g3, x.xa3)?.value;
            let d_numeric = tdd_numeric(&to_bloch(&rho), mcfg)?.value;
            for (route, v) in [("x-state formula", d_xstate), ("numeric", d_numeric)] {
                if (v - d).abs() > SERIES_TOL {
                    return Err(Error::Consistency(format!(
                        "t = {t}: {route} gives {v}, closed form gives {d}"
                    )));
                }
            }
            Ok(ChainSample {
                t,
                f,
                rho,
                d,
                d_xstate,
                d_numeric,
            })
        })
        .collect()
}

/// Sample with the largest closed-form discord, as `(|f|, D)`.
pub fn series_peak(samples: &[ChainSample]) -> Option<(f64, f64)> {
    samples
        .iter()
        .max_by(|a, b| a.d.total_cmp(&b.d))
        .map(|s| (s.f.norm(), s.d))
}

/// Maximum of the closed form over `|f|` in `[0, 1]` by golden-section search.
pub fn peak_by_search() -> (f64, f64) {
    let d = |x: f64| tdd_of_f(x).unwrap_or(0.0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (d(x1), d(x2));
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = d(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = d(x1);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, d(x))
}

/// Location of the maximum from the root of the cubic stationarity condition.
pub fn peak_closed_form() -> f64 {
    let tau = (1.0 + 3.0 * 57f64.sqrt()).cbrt();
    1.0 / (3.0 / (1.0 - 8.0 / tau + tau)).sqrt()
}
