use std::f64::consts::{PI, TAU};

use crate::linalg::{signed_svd_so3, RealMatrix3, Vec3};
use crate::state::{BlochForm, CLASSIFY_TOL};

/// The correlation matrix in diagonal form, `gamma = o^T diag(gamma) omega`,
/// together with the local Bloch vector of A expressed in the rows of `o`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationFrame {
    pub o: RealMatrix3,
    pub omega: RealMatrix3,
    pub gamma: [f64; 3],
    /// Rows of `o`: a right-handed orthonormal triad.
    pub w: [Vec3; 3],
    /// `x_a . w_k`.
    pub x_a_frame: Vec3,
}

impl CorrelationFrame {
    /// Lab-frame vector for components given in the `w` triad.
    pub fn to_lab(&self, v: &Vec3) -> Vec3 {
        self.o.transpose().mul_vec(v)
    }

    pub fn is_rank_one(&self, tol: f64) -> bool {
        self.gamma[1].abs() <= tol && self.gamma[2].abs() <= tol
    }
}

pub fn build_frame(b: &BlochForm) -> CorrelationFrame {
    let svd = signed_svd_so3(&b.gamma);
    let mut o = svd.o;
    let mut omega = svd.omega;
    let gamma = svd.gamma;

    // With a single nonzero singular value, w2 and w3 are free; put x_a into
    // the (w1, w2) half-plane with x_a . w2 >= 0.
    if gamma[1].abs() <= CLASSIFY_TOL && gamma[2].abs() <= CLASSIFY_TOL {
        let x2 = b.x_a.dot(&o.row(1));
        let x3 = b.x_a.dot(&o.row(2));
        if x2 != 0.0 || x3 != 0.0 {
            let angle = x3.atan2(x2);
            let (s, c) = angle.sin_cos();
            for m in [&mut o, &mut omega] {
                let r2 = m.row(1);
                let r3 = m.row(2);
                m.0[1] = (r2 * c + r3 * s).0;
                m.0[2] = (r3 * c - r2 * s).0;
            }
        }
    }

    let w = [o.row(0), o.row(1), o.row(2)];
    let x_a_frame = Vec3::new(b.x_a.dot(&w[0]), b.x_a.dot(&w[1]), b.x_a.dot(&w[2]));
    CorrelationFrame {
        o,
        omega,
        gamma,
        w,
        x_a_frame,
    }
}

/// Measurement axis in spherical angles relative to the `w` triad.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction {
    pub theta: f64,
    pub phi: f64,
    /// `(sin t cos p, sin t sin p, cos t)` in the `w` triad.
    pub e: Vec3,
}

impl Direction {
    pub fn new(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Direction {
            theta,
            phi,
            e: Vec3::new(st * cp, st * sp, ct),
        }
    }

    /// From a nonzero vector in the `w` triad; `phi` is reported in `[0, 2 pi)`.
    pub fn from_vector(v: &Vec3) -> Self {
        let e = v.normalized();
        let theta = e[2].clamp(-1.0, 1.0).acos();
        let mut phi = e[1].atan2(e[0]);
        if phi < 0.0 {
            phi += TAU;
        }
        if phi >= TAU {
            phi -= TAU;
        }
        Direction { theta, phi, e }
    }

    /// The equivalent axis `-e` when `e` points into the lower hemisphere.
    pub fn upper_hemisphere(&self) -> Self {
        if self.theta > PI / 2.0 {
            Direction::from_vector(&-self.e)
        } else {
            *self
        }
    }
}
