//! Brute-force discord straight from the definition: half the smallest trace
//! norm of `rho - Pi_e(rho)` over projective measurements on A. Shares no
//! code with the engine in `tdd` beyond the eigensolver.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{pauli_dot, trace_norm, ComplexMatrix4, Mat2, Vec3, C64};
use crate::state::DensityMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Points of the Fibonacci lattice on the upper hemisphere.
    pub points: usize,
    /// Angular step at which the local pattern search stops.
    pub tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            points: 20_000,
            tol: 1e-8,
        }
    }
}

impl OracleConfig {
    fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::InvalidConfig("oracle needs at least one point".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "oracle tol must be positive and finite, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

/// `(P (x) I) rho (P (x) I) + (Q (x) I) rho (Q (x) I)` with
/// `P = (I + e.sigma)/2`, `Q = I - P` and `e` a lab-frame unit vector.
pub fn apply_measurement_channel(rho: &DensityMatrix, e: &Vec3) -> ComplexMatrix4 {
    let s = pauli_dot(e);
    let half = C64::new(0.5, 0.0);
    let one = C64::new(1.0, 0.0);
    let mut p: Mat2 = [[C64::new(0.0, 0.0); 2]; 2];
    let mut q = p;
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { one } else { C64::new(0.0, 0.0) };
            p[i][j] = (id + s[i][j]) * half;
            q[i][j] = (id - s[i][j]) * half;
        }
    }
    let mut out = sandwich(&p, rho.matrix());
    out += sandwich(&q, rho.matrix());
    out
}

/// `(k (x) I) m (k (x) I)` for Hermitian `k`.
fn sandwich(k: &Mat2, m: &ComplexMatrix4) -> ComplexMatrix4 {
    let mut out = ComplexMatrix4::ZERO;
    for a in 0..2 {
        for b in 0..2 {
            for x in 0..2 {
                for y in 0..2 {
                    let mut acc = C64::new(0.0, 0.0);
                    for i in 0..2 {
                        for j in 0..2 {
                            acc += k[a][i] * m.0[2 * i + x][2 * j + y] * k[j][b];
                        }
                    }
                    out.0[2 * a + x][2 * b + y] = acc;
                }
            }
        }
    }
    out
}

/// `rho - Pi_e(rho)`, computed as `(rho - S rho S) / 2` with `S = e.sigma (x) I`,
/// which equals the channel form since `P = (I + S)/2` and `Q = (I - S)/2`.
pub fn disturbance_matrix(rho: &DensityMatrix, e: &Vec3) -> ComplexMatrix4 {
    let m = rho.matrix();
    (*m - sandwich(&pauli_dot(e), m)).scale(0.5)
}

/// `||rho - Pi_e(rho)||_1 / 2` for one measurement axis.
pub fn disturbance(rho: &DensityMatrix, e: &Vec3) -> f64 {
    0.5 * trace_norm(&disturbance_matrix(rho, e)).unwrap_or(f64::INFINITY)
}

/// Unit vectors `i = 0..n` of a Fibonacci lattice on the upper hemisphere.
pub fn fibonacci_hemisphere(n: usize) -> impl Iterator<Item = Vec3> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n).map(move |i| {
        let z = 1.0 - (i as f64 + 0.5) / n as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let (s, c) = (i as f64 * golden).sin_cos();
        Vec3::new(r * c, r * s, z)
    })
}

const STARTS: usize = 4;

/// Discord from the definition: lattice scan, then pattern search from the
/// best few well-separated lattice points.
pub fn tdd_definition(rho: &DensityMatrix, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    let spacing = (2.0 * PI / cfg.points as f64).sqrt();

    let mut scored: Vec<(f64, usize, Vec3)> = fibonacci_hemisphere(cfg.points)
        .enumerate()
        .map(|(i, e)| (disturbance(rho, &e), i, e))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut starts: Vec<(f64, Vec3)> = Vec::with_capacity(STARTS);
    for &(v, _, e) in &scored {
        if starts.len() == STARTS {
            break;
        }
        let separated = starts
            .iter()
            .all(|(_, s)| s.dot(&e).abs().min(1.0).acos() > 3.0 * spacing);
        if separated {
            starts.push((v, e));
        }
    }

    let mut best = f64::INFINITY;
    for (v, e) in starts {
        best = best.min(pattern_search(rho, &e, v, spacing, cfg.tol));
    }
    Ok(best)
}

/// Compass search in the chart `cos b (cos a e0 + sin a t1) + sin b t2`:
/// the step doubles after a successful move and halves after a failed one.
fn pattern_search(rho: &DensityMatrix, e0: &Vec3, v0: f64, step0: f64, tol: f64) -> f64 {
    let t1 = e0.any_orthogonal();
    let t2 = e0.cross(&t1);
    let axis = |a: f64, b: f64| {
        let (sa, ca) = a.sin_cos();
        let (sb, cb) = b.sin_cos();
        (*e0 * ca + t1 * sa) * cb + t2 * sb
    };
    let d = std::f64::consts::FRAC_1_SQRT_2;
    let moves = [
        (1.0, 0.0),
        (-1.0, 0.0),
        (0.0, 1.0),
        (0.0, -1.0),
        (d, d),
        (d, -d),
        (-d, d),
        (-d, -d),
    ];

    let (mut a, mut b, mut best) = (0.0, 0.0, v0);
    let mut step = step0;
    while step >= tol {
        let mut candidate = None;
        for (da, db) in moves {
            let (na, nb) = (a + step * da, b + step * db);
            let v = disturbance(rho, &axis(na, nb));
            if v < best {
                best = v;
                candidate = Some((na, nb));
            }
        }
        match candidate {
            Some((na, nb)) => {
                a = na;
                b = nb;
                step = (step * 2.0).min(step0);
            }
            None => step *= 0.5,
        }
    }
    best
}
