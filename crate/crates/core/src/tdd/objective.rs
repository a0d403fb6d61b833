//! The function `h(e)` whose minimum over unit vectors gives the discord.
//!
//! `objective_ab` follows the textbook decomposition into the scalars `a` and
//! `b`. `objective_h` evaluates the same function without forming `a^2 - b`.
//! For an orthonormal pair `(u, v)` spanning the plane orthogonal to `e`, set
//!
//! ```text
//! z0 = x.u + i x.v,   z_k = gamma_k (w_k.u + i w_k.v)
//! ```
//!
//! Then `a = sum |z|^2` and `a^2 - b = |z0^2 - z1^2 - z2^2 - z3^2|^2`, so
//! `h = a + |z0^2 - z1^2 - z2^2 - z3^2|`. The naive route loses about half
//! the digits near `a^2 = b`, which is exactly where minima of X states sit.

use num_complex::Complex64;

use super::frame::{CorrelationFrame, Direction};
use crate::linalg::{pauli, pauli_dot, ComplexMatrix4, Vec3};
use crate::state::BlochForm;

/// `(a, b)` at direction `d`, from the projected vectors directly.
pub fn objective_ab(f: &CorrelationFrame, d: &Direction) -> (f64, f64) {
    ab_at(f, &d.e)
}

pub(crate) fn ab_at(f: &CorrelationFrame, e: &Vec3) -> (f64, f64) {
    let x_perp = f.x_a_frame.reject(e);
    let g = f.gamma;
    let mut q = 0.0;
    let mut chi = Vec3::ZERO;
    for k in 0..3 {
        let mut wk = Vec3::ZERO;
        wk[k] = 1.0;
        let wk_perp = wk.reject(e);
        q += g[k] * g[k] * wk_perp.norm_sq();
        chi[k] = g[k] * wk_perp.dot(&x_perp);
    }
    let gv = Vec3::new(g[1] * g[2] * e[0], g[2] * g[0] * e[1], g[0] * g[1] * e[2]);
    (q + x_perp.norm_sq(), 4.0 * (chi.norm_sq() + gv.norm_sq()))
}

/// `h = a + sqrt(a^2 - b)` at direction `d`.
pub fn objective_h(f: &CorrelationFrame, d: &Direction) -> f64 {
    let (st, ct) = d.theta.sin_cos();
    let (sp, cp) = d.phi.sin_cos();
    let u = Vec3::new(ct * cp, ct * sp, -st);
    let v = Vec3::new(-sp, cp, 0.0);
    h_in_plane(f, &u, &v)
}

/// `h` at an arbitrary unit vector `e` given in the `w` triad.
pub(crate) fn h_at(f: &CorrelationFrame, e: &Vec3) -> f64 {
    let u = e.any_orthogonal();
    let v = e.cross(&u);
    h_in_plane(f, &u, &v)
}

/// `h` from an orthonormal pair spanning the plane orthogonal to `e`.
/// The value does not depend on which pair is chosen.
#[inline]
fn h_in_plane(f: &CorrelationFrame, u: &Vec3, v: &Vec3) -> f64 {
    let x = &f.x_a_frame;
    let z0 = Complex64::new(x.dot(u), x.dot(v));
    let mut a = z0.norm_sqr();
    let mut det = z0 * z0;
    for k in 0..3 {
        let zk = Complex64::new(u[k], v[k]) * f.gamma[k];
        a += zk.norm_sqr();
        det -= zk * zk;
    }
    a + det.norm()
}

/// `h` from `(a, b)`, clamping `a^2 - b` at zero.
pub fn h_from_ab(a: f64, b: f64) -> f64 {
    a + (a * a - b).max(0.0).sqrt()
}

/// `||M(e)||_1 = 2 (sqrt(a + sqrt b) + sqrt(a - sqrt b))`.
pub fn trace_norm_from_ab(a: f64, b: f64) -> f64 {
    let rb = b.max(0.0).sqrt();
    2.0 * ((a + rb).max(0.0).sqrt() + (a - rb).max(0.0).sqrt())
}

/// The operator `4 (rho - Pi_e(rho))` built term by term from the Bloch form,
/// with `e` a lab-frame unit vector.
pub fn assemble_m(b: &BlochForm, e: &Vec3) -> ComplexMatrix4 {
    let id = crate::linalg::identity2();
    let x_perp = b.x_a.reject(e);
    let mut m = ComplexMatrix4::kron(&pauli_dot(&x_perp), &id);
    for i in 0..3 {
        let mut xi = Vec3::ZERO;
        xi[i] = 1.0;
        let a_op = pauli_dot(&(xi - *e * e[i]));
        for j in 0..3 {
            let gij = b.gamma.0[i][j];
            if gij != 0.0 {
                m += ComplexMatrix4::kron(&a_op, &pauli(j)).scale(gij);
            }
        }
    }
    m
}
