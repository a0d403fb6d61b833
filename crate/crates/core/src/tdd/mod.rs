//! One-sided trace distance discord, measured on qubit A.
//!
//! The general path minimizes `h(e)` over measurement axes and reports
//! `D = sqrt(2 min h) / 4`. Families with a known minimizer go through the
//! closed forms in [`closed`]; [`tdd`] picks the route.

mod closed;
mod frame;
mod minimize;
mod objective;

pub use closed::{
    tdd_class_ab, tdd_quantum_classical, tdd_rank_one, tdd_x_state, tdd_x_state_piecewise,
};
pub use frame::{build_frame, CorrelationFrame, Direction};
pub use minimize::MinimizerConfig;
pub use objective::{assemble_m, h_from_ab, objective_ab, objective_h, trace_norm_from_ab};

use crate::error::{Error, Result};
use crate::state::{classify, to_bloch, BlochForm, DensityMatrix, StateClass, CLASSIFY_TOL};

/// Below this, `a^2 - b` at the optimum is treated as round-off.
pub const AB_CLAMP_TOL: f64 = 1e-10;
/// Agreement required between a closed form and the numeric path when
/// verification is requested.
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Numeric,
    ClassAB,
    RankOne,
    QuantumClassical,
    XState,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Numeric => "numeric",
            Method::ClassAB => "class_ab",
            Method::RankOne => "rank_one",
            Method::QuantumClassical => "quantum_classical",
            Method::XState => "x_state",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// `a^2 - b` at the optimum, from the unrearranged formulas.
    pub residual: Option<f64>,
    /// `(theta nodes, phi nodes)` of the coarse grid.
    pub grid: Option<(usize, usize)>,
    /// Smallest `h` seen on the grid, before refinement.
    pub grid_h: Option<f64>,
    /// The compact X-state formula was ill-conditioned and the piecewise
    /// form was used instead.
    pub fallback: bool,
    /// `|closed form - numeric|` when verification ran.
    pub numeric_check: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TddResult {
    pub value: f64,
    /// Optimal axis relative to the frame's `w` triad, upper hemisphere.
    pub direction: Option<Direction>,
    pub method: Method,
    /// `8 value^2`, the minimum of `h`.
    pub h_min: f64,
    pub diagnostics: Diagnostics,
}

fn value_from_h(h: f64) -> f64 {
    (0.25 * (2.0 * h.max(0.0)).sqrt()).min(1.0)
}

pub fn tdd_numeric(b: &BlochForm, cfg: &MinimizerConfig) -> Result<TddResult> {
    let frame = build_frame(b);
    tdd_numeric_in_frame(&frame, cfg)
}

pub(crate) fn tdd_numeric_in_frame(
    frame: &CorrelationFrame,
    cfg: &MinimizerConfig,
) -> Result<TddResult> {
    let min = minimize::minimize_h(frame, cfg)?;
    let (a, b) = objective_ab(frame, &min.direction);
    let residual = a * a - b;
    if residual < -AB_CLAMP_TOL {
        return Err(Error::Consistency(format!(
            "a^2 - b = {residual:e} at the optimum"
        )));
    }
    Ok(TddResult {
        value: value_from_h(min.h),
        direction: Some(min.direction),
        method: Method::Numeric,
        h_min: min.h,
        diagnostics: Diagnostics {
            residual: Some(residual),
            grid: Some((cfg.grid_theta, cfg.grid_phi)),
            grid_h: Some(min.grid_h),
            ..Default::default()
        },
    })
}

fn closed_in_frame(b: &BlochForm, frame: &CorrelationFrame) -> Result<Option<TddResult>> {
    let result = match classify(b, CLASSIFY_TOL) {
        StateClass::ClassA { .. } | StateClass::ClassB { .. } => tdd_class_ab(frame)?,
        StateClass::QuantumClassical { p, s0, s1, phi } => tdd_quantum_classical(p, s0, s1, phi)?,
        StateClass::RankOneGamma { .. } => tdd_rank_one(frame, &b.x_a)?,
        StateClass::XState(x) => tdd_x_state(x.g1, x.g2, x.g3, x.xa3)?,
        StateClass::General => return Ok(None),
    };
    Ok(Some(result))
}

/// Discord through a closed form only; `NotApplicable` for states outside
/// every family with one.
pub fn tdd_closed(rho: &DensityMatrix) -> Result<TddResult> {
    let b = to_bloch(rho);
    closed_in_frame(&b, &build_frame(&b))?.ok_or_else(|| {
        Error::NotApplicable("state is in no family with a closed form".into())
    })
}

/// Discord from A's side, through the most specific closed form available.
pub fn tdd(rho: &DensityMatrix, cfg: &MinimizerConfig) -> Result<TddResult> {
    cfg.validate()?;
    let b = to_bloch(rho);
    let frame = build_frame(&b);
    let Some(mut result) = closed_in_frame(&b, &frame)? else {
        return tdd_numeric_in_frame(&frame, cfg);
    };
    if cfg.verify {
        let numeric = tdd_numeric_in_frame(&frame, cfg)?;
        let diff = (numeric.value - result.value).abs();
        result.diagnostics.numeric_check = Some(diff);
        result.diagnostics.residual = numeric.diagnostics.residual;
        result.diagnostics.grid = numeric.diagnostics.grid;
        if diff > VERIFY_TOL {
            return Err(Error::VerificationFailed {
                method: result.method.as_str(),
                value: result.value,
                numeric: numeric.value,
                diff,
            });
        }
    }
    Ok(result)
}

/// Discord from B's side: the same quantity with the qubits exchanged.
pub fn tdd_left(rho: &DensityMatrix, cfg: &MinimizerConfig) -> Result<TddResult> {
    tdd(&rho.swapped(), cfg)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;
    use crate::linalg::{RealMatrix3, Vec3};
    use crate::state::{make_quantum_classical, DensityMatrix};

    fn class_a_frame() -> CorrelationFrame {
        build_frame(&BlochForm {
            gamma: RealMatrix3::diag([0.8, 0.5, 0.3]),
            ..Default::default()
        })
    }

    #[test]
    fn class_a_objective_example() {
        let f = class_a_frame();
        let d = Direction::new(FRAC_PI_2, 0.0);
        let (a, b) = objective_ab(&f, &d);
        assert!((a - 0.34).abs() < 1e-15);
        assert!((b - 0.09).abs() < 1e-15);
        assert!((objective_h(&f, &d) - 0.5).abs() < 1e-15);
        assert!((h_from_ab(a, b) - 0.5).abs() < 1e-15);
        assert!((value_from_h(0.5) - 0.25).abs() < 1e-16);
    }

    #[test]
    fn zero_local_vector_gives_zero_chi() {
        // With x_a = 0, b reduces to 4 |g|^2.
        let f = class_a_frame();
        let d = Direction::new(0.7, 2.1);
        let (_, b) = objective_ab(&f, &d);
        let g = f.gamma;
        let e = d.e;
        let gv = Vec3::new(g[1] * g[2] * e[0], g[2] * g[0] * e[1], g[0] * g[1] * e[2]);
        assert!((b - 4.0 * gv.norm_sq()).abs() < 1e-15);
    }

    #[test]
    fn rank_one_along_w1_has_b_zero() {
        let f = build_frame(&BlochForm {
            x_a: Vec3::Z * 0.3,
            gamma: RealMatrix3::diag([0.0, 0.0, 0.6]),
            ..Default::default()
        });
        let along = Direction::from_vector(&Vec3::X);
        let (_, b) = objective_ab(&f, &along);
        assert!(b.abs() < 1e-30);
    }

    #[test]
    fn product_state_h_vanishes_on_axis() {
        let rho = make_quantum_classical(1.0, Vec3::Z, Vec3::Z).unwrap();
        let f = build_frame(&to_bloch(&rho));
        let d = Direction::from_vector(&Vec3::X);
        assert!(objective_h(&f, &d).abs() < 1e-30);
    }

    #[test]
    fn singlet_and_mixed() {
        let cfg = MinimizerConfig::default();
        let r = tdd_numeric(&to_bloch(&DensityMatrix::singlet()), &cfg).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        let r = tdd_numeric(&to_bloch(&DensityMatrix::maximally_mixed()), &cfg).unwrap();
        assert_eq!(r.value, 0.0);
        let r = tdd(&DensityMatrix::singlet(), &cfg).unwrap();
        assert_eq!(r.method, Method::ClassAB);
        assert!((r.value - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quantum_classical_closed_examples() {
        let r = tdd_quantum_classical(0.5, 1.0, 1.0, FRAC_PI_2).unwrap();
        assert_eq!(r.value, 0.25);
        assert_eq!(tdd_quantum_classical(0.5, 1.0, 1.0, 0.0).unwrap().value, 0.0);
        let r = tdd_quantum_classical(0.3, 0.9, 0.6, 1.1).unwrap();
        assert!((r.value - 0.5 * 1.1f64.sin() * 0.27).abs() < 1e-16);
        assert!(tdd_quantum_classical(1.2, 1.0, 1.0, 1.0).is_err());
        assert!(tdd_quantum_classical(0.5, 1.0, 1.0, PI + 0.1).is_err());
    }

    #[test]
    fn x_state_closed_examples() {
        let r = tdd_x_state(0.8, 0.5, 0.3, 0.0).unwrap();
        assert!((r.value - 0.25).abs() < 1e-15);
        assert_eq!(tdd_x_state(0.0, 0.0, 0.4, 0.2).unwrap().value, 0.0);
        assert!(tdd_x_state(0.2, 0.5, 0.3, 0.0).is_err());
    }

    #[test]
    fn closed_only_route() {
        let r = tdd_closed(&DensityMatrix::singlet()).unwrap();
        assert_eq!(r.method, Method::ClassAB);
        let b = BlochForm {
            x_a: Vec3::new(0.1, 0.2, 0.0),
            x_b: Vec3::new(0.0, 0.1, 0.3),
            gamma: RealMatrix3([[0.3, 0.1, 0.0], [0.0, 0.2, 0.1], [0.1, 0.0, -0.1]]),
        };
        let rho = crate::state::from_bloch(&b).unwrap();
        assert!(matches!(tdd_closed(&rho), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = MinimizerConfig {
            grid_theta: 0,
            ..Default::default()
        };
        let b = to_bloch(&DensityMatrix::singlet());
        assert!(matches!(tdd_numeric(&b, &cfg), Err(Error::InvalidConfig(_))));
        let cfg = MinimizerConfig {
            tol: -1.0,
            ..Default::default()
        };
        assert!(matches!(tdd_numeric(&b, &cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn left_discord_of_quantum_classical_is_zero() {
        let rho = make_quantum_classical(0.5, Vec3::Z, Vec3::X).unwrap();
        let r = tdd_left(&rho, &MinimizerConfig::default()).unwrap();
        assert!(r.value < 1e-12, "{r:?}");
    }
}
