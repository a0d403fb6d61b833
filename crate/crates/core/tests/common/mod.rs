//! Random state families shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tdd_core::linalg::{identity2, pauli_dot, Mat2};
use tdd_core::state::{from_bloch, make_quantum_classical, make_x_state, BlochForm};
use tdd_core::{ComplexMatrix4, DensityMatrix, RealMatrix3, Vec3, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; one of the pair is discarded.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

pub fn unit_vector<R: Rng>(rng: &mut R) -> Vec3 {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..TAU);
    let r = (1.0 - z * z).sqrt();
    Vec3::new(r * phi.cos(), r * phi.sin(), z)
}

/// Uniform in the ball of radius `r`.
pub fn ball<R: Rng>(rng: &mut R, r: f64) -> Vec3 {
    unit_vector(rng) * (r * rng.gen::<f64>().cbrt())
}

/// Density matrix from the Ginibre ensemble.
pub fn random_state<R: Rng>(rng: &mut R) -> DensityMatrix {
    let mut g = ComplexMatrix4::ZERO;
    for z in g.0.iter_mut().flatten() {
        *z = C64::new(normal(rng), normal(rng));
    }
    let m = g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::validate(m.scale(1.0 / tr)).expect("Ginibre state is valid")
}

/// Haar-random single-qubit unitary.
pub fn unitary2<R: Rng>(rng: &mut R) -> Mat2 {
    let q = [normal(rng), normal(rng), normal(rng), normal(rng)];
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let [a, b, c, d] = q.map(|v| v / n);
    [
        [C64::new(a, b), C64::new(c, d)],
        [C64::new(-c, d), C64::new(a, -b)],
    ]
}

/// Random diagonal of a density matrix, uniform on the simplex.
fn simplex4<R: Rng>(rng: &mut R) -> [f64; 4] {
    let e = [0; 4].map(|_| -(1.0 - rng.gen::<f64>()).ln());
    let s: f64 = e.iter().sum();
    e.map(|v| v / s)
}

pub fn random_x_state<R: Rng>(rng: &mut R) -> DensityMatrix {
    let d = simplex4(rng);
    let r41 = rng.gen::<f64>() * (d[0] * d[3]).sqrt();
    let r32 = rng.gen::<f64>() * (d[1] * d[2]).sqrt();
    let p41 = rng.gen_range(0.0..TAU);
    let p32 = rng.gen_range(0.0..TAU);
    make_x_state(d, C64::from_polar(r32, p32), C64::from_polar(r41, p41))
        .expect("sampled within constraints")
}

/// Mixture of the four Bell states.
pub fn random_bell_diagonal<R: Rng>(rng: &mut R) -> (DensityMatrix, [f64; 3]) {
    let w = simplex4(rng);
    let corners = [
        [1.0, -1.0, 1.0],
        [-1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0],
        [-1.0, -1.0, -1.0],
    ];
    let mut c = [0.0; 3];
    for (wk, ck) in w.iter().zip(corners) {
        for i in 0..3 {
            c[i] += wk * ck[i];
        }
    }
    let rho = from_bloch(&BlochForm {
        gamma: RealMatrix3::diag(c),
        ..Default::default()
    })
    .expect("inside the tetrahedron");
    (rho, c)
}

fn random_matrix3<R: Rng>(rng: &mut R) -> RealMatrix3 {
    let mut m = RealMatrix3::ZERO;
    for v in m.0.iter_mut().flatten() {
        *v = rng.gen_range(-1.0..=1.0);
    }
    m
}

/// Shrinks the non-identity part of `b` until the state is positive, then
/// applies a random extra contraction.
fn physical<R: Rng>(rng: &mut R, b: BlochForm) -> DensityMatrix {
    let mut s = 1.0;
    loop {
        let scaled = BlochForm {
            x_a: b.x_a * s,
            x_b: b.x_b * s,
            gamma: RealMatrix3(b.gamma.0.map(|r| r.map(|v| v * s))),
        };
        if from_bloch(&scaled).is_ok() {
            let t = rng.gen_range(0.05..=1.0);
            let shrunk = BlochForm {
                x_a: scaled.x_a * t,
                x_b: scaled.x_b * t,
                gamma: RealMatrix3(scaled.gamma.0.map(|r| r.map(|v| v * t))),
            };
            return from_bloch(&shrunk).expect("contraction of a state");
        }
        s *= 0.9;
    }
}

/// `x_a = 0`, random correlations and B marginal.
pub fn random_class_a<R: Rng>(rng: &mut R) -> DensityMatrix {
    let b = BlochForm {
        x_a: Vec3::ZERO,
        x_b: ball(rng, 1.0),
        gamma: random_matrix3(rng),
    };
    physical(rng, b)
}

/// `p rho_a (x) I/2 + (1 - p) singlet`.
pub fn class_b_mixture<R: Rng>(rng: &mut R, p: f64) -> DensityMatrix {
    let rho_a = BlochForm {
        x_a: ball(rng, 1.0),
        ..Default::default()
    };
    let product = from_bloch(&rho_a).unwrap();
    product.mix(p, &DensityMatrix::singlet()).unwrap()
}

/// Correlation matrix `c a b^T` with random local Bloch vectors.
pub fn random_rank_one<R: Rng>(rng: &mut R) -> DensityMatrix {
    loop {
        let a = unit_vector(rng);
        let bv = unit_vector(rng);
        let c = rng.gen_range(-1.0..=1.0);
        let mut gamma = RealMatrix3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                gamma.0[i][j] = c * a[i] * bv[j];
            }
        }
        let b = BlochForm {
            x_a: ball(rng, 1.0),
            x_b: ball(rng, 1.0),
            gamma,
        };
        if let Ok(rho) = from_bloch(&b) {
            return rho;
        }
    }
}

pub fn random_quantum_classical<R: Rng>(rng: &mut R) -> (DensityMatrix, f64, Vec3, Vec3) {
    let p = rng.gen_range(0.0..=1.0);
    let s0 = ball(rng, 1.0);
    let s1 = ball(rng, 1.0);
    (make_quantum_classical(p, s0, s1).unwrap(), p, s0, s1)
}

/// `sum_j p_j |a_j><a_j| (x) rho_j` with a random orthonormal basis on A.
pub fn random_classical_quantum<R: Rng>(rng: &mut R) -> DensityMatrix {
    let (qc, ..) = random_quantum_classical(rng);
    let cq = qc.swapped();
    cq.local_unitary(&unitary2(rng), &unitary2(rng))
}

/// `(id (x) depolarizing_q)(rho) = (1 - q) rho + q rho_a (x) I/2`.
pub fn depolarize_b(rho: &DensityMatrix, q: f64) -> DensityMatrix {
    let m = rho.matrix();
    let mut reduced = ComplexMatrix4::ZERO;
    for a in 0..2 {
        for b in 0..2 {
            let tr = m.0[2 * a][2 * b] + m.0[2 * a + 1][2 * b + 1];
            for k in 0..2 {
                reduced.0[2 * a + k][2 * b + k] = tr * 0.5;
            }
        }
    }
    DensityMatrix::validate(m.scale(1.0 - q) + reduced.scale(q)).unwrap()
}

pub fn identity() -> Mat2 {
    identity2()
}

/// `exp(-i angle n.sigma / 2)`.
pub fn rotation(n: &Vec3, angle: f64) -> Mat2 {
    let s = pauli_dot(&n.normalized());
    let (sn, cs) = (angle / 2.0).sin_cos();
    let mut u = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let id = if i == j { cs } else { 0.0 };
            u[i][j] = C64::new(id, 0.0) - C64::new(0.0, sn) * s[i][j];
        }
    }
    u
}

pub const HALF_PI: f64 = PI / 2.0;
