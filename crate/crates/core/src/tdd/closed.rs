//! Closed forms for the families where the minimization can be done by hand.

use super::frame::CorrelationFrame;
use super::{Diagnostics, Method, TddResult};
use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::state::CLASSIFY_TOL;

const RANK_ONE_COLLINEAR: f64 = 1e-14;
const X_DENOMINATOR_FLOOR: f64 = 1e-15;

fn closed_result(value: f64, method: Method, fallback: bool) -> TddResult {
    TddResult {
        value,
        direction: None,
        method,
        h_min: 8.0 * value * value,
        diagnostics: Diagnostics {
            fallback,
            ..Default::default()
        },
    }
}

/// States with `x_a = 0`, or with all `|gamma_k|` equal: half the middle
/// singular value of the correlation matrix.
pub fn tdd_class_ab(f: &CorrelationFrame) -> Result<TddResult> {
    let g = f.gamma.map(f64::abs);
    let class_a = f.x_a_frame.norm() <= CLASSIFY_TOL;
    let class_b = (g[0] - g[1]).abs() <= CLASSIFY_TOL && (g[1] - g[2]).abs() <= CLASSIFY_TOL;
    if !(class_a || class_b) {
        return Err(Error::NotApplicable(
            "class A/B needs x_a = 0 or equal |gamma_k|".into(),
        ));
    }
    Ok(closed_result(0.5 * g[1], Method::ClassAB, false))
}

/// Correlation matrix of rank one, `gamma = gamma1 w1 v1^T`:
/// `|g ^ x_a| / (2 max |g +- x_a|)` with `g = |gamma1| w1`.
pub fn tdd_rank_one(f: &CorrelationFrame, x_a: &Vec3) -> Result<TddResult> {
    if !f.is_rank_one(CLASSIFY_TOL) {
        return Err(Error::NotApplicable(format!(
            "rank-one formula needs gamma2 = gamma3 = 0, got {:e}, {:e}",
            f.gamma[1], f.gamma[2]
        )));
    }
    Ok(closed_result(
        rank_one_value(&(f.w[0] * f.gamma[0].abs()), x_a),
        Method::RankOne,
        false,
    ))
}

pub(crate) fn rank_one_value(g: &Vec3, x_a: &Vec3) -> f64 {
    let plus = (*g + *x_a).norm();
    let minus = (*g - *x_a).norm();
    let lo = plus.min(minus);
    let hi = plus.max(minus);
    if lo < RANK_ONE_COLLINEAR || hi < RANK_ONE_COLLINEAR {
        return 0.0;
    }
    g.cross(x_a).norm() / (2.0 * hi)
}

/// `p rho0 (x) |0><0| + (1-p) rho1 (x) |1><1|` with `|s0|`, `|s1|` the lengths
/// of the two Bloch vectors and `phi` the angle between them.
pub fn tdd_quantum_classical(p: f64, s0: f64, s1: f64, phi: f64) -> Result<TddResult> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p = {p} outside [0, 1]")));
    }
    for (name, s) in [("s0", s0), ("s1", s1)] {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain(format!("{name} = {s} outside [0, 1]")));
        }
    }
    if !(0.0..=std::f64::consts::PI).contains(&phi) {
        return Err(Error::Domain(format!("phi = {phi} outside [0, pi]")));
    }
    let value = 0.5 * phi.sin() * (p * s0).min((1.0 - p) * s1);
    Ok(closed_result(value, Method::QuantumClassical, false))
}

/// X states in the labeling `g1 = 2(|r32| + |r41|)`, `g2 = 2(|r32| - |r41|)`,
/// `g3 = 1 - 2(r22 + r33)`, `xa3 = 2(r11 + r22) - 1`.
pub fn tdd_x_state(g1: f64, g2: f64, g3: f64, xa3: f64) -> Result<TddResult> {
    check_x_params(g1, g2, g3, xa3)?;
    match x_state_compact(g1, g2, g3, xa3) {
        Ok(v) => Ok(closed_result(v, Method::XState, false)),
        Err(Error::DegenerateDenominator { .. }) => Ok(closed_result(
            x_state_piecewise_value(g1, g2, g3, xa3),
            Method::XState,
            true,
        )),
        Err(e) => Err(e),
    }
}

/// The branch-by-branch form, with the step function taken as 1/2 at zero.
pub fn tdd_x_state_piecewise(g1: f64, g2: f64, g3: f64, xa3: f64) -> Result<TddResult> {
    check_x_params(g1, g2, g3, xa3)?;
    Ok(closed_result(
        x_state_piecewise_value(g1, g2, g3, xa3),
        Method::XState,
        false,
    ))
}

fn check_x_params(g1: f64, g2: f64, g3: f64, xa3: f64) -> Result<()> {
    if ![g1, g2, g3, xa3].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite);
    }
    if g2.abs() > g1.abs() + CLASSIFY_TOL {
        return Err(Error::Domain(format!(
            "x-state labeling needs |g1| >= |g2|, got {g1}, {g2}"
        )));
    }
    Ok(())
}

/// Single-expression form. `N / Den` is evaluated as the weighted mean
/// `(g1^2 (M - m) + m (g1^2 - g2^2)) / ((M - m) + (g1^2 - g2^2))`, which is
/// algebraically identical and avoids cancelling `g1^2 M` against `g2^2 m`.
pub(crate) fn x_state_compact(g1: f64, g2: f64, g3: f64, xa3: f64) -> Result<f64> {
    let (g1s, g2s, g3s) = (g1 * g1, g2 * g2, g3 * g3);
    let big = g3s.max(g2s + xa3 * xa3);
    let small = g3s.min(g1s);
    let spread = big - small;
    let split = (g1.abs() - g2.abs()) * (g1.abs() + g2.abs());
    let den = spread + split;
    let num = g1s * spread + small * split;
    if den < X_DENOMINATOR_FLOOR {
        return Err(Error::DegenerateDenominator { numerator: num });
    }
    Ok(0.5 * (num / den).max(0.0).sqrt())
}

pub(crate) fn x_state_piecewise_value(g1: f64, g2: f64, g3: f64, xa3: f64) -> f64 {
    let (g1s, g2s, g3s, xs) = (g1 * g1, g2 * g2, g3 * g3, xa3 * xa3);
    let s1 = g1s - g3s + xs;
    if s1 < 0.0 || g3.abs() >= g1.abs() {
        return 0.5 * g1.abs();
    }
    let s2 = g2s - g3s + xs;
    let upper = || 0.5 * ((g1s * (g2s + xs) - g2s * g3s) / s1).max(0.0).sqrt();
    let lower = 0.5 * g3.abs();
    if s2 > 0.0 {
        upper()
    } else if s2 < 0.0 {
        lower
    } else {
        0.5 * (upper() + lower)
    }
}
