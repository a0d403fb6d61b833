//! Small dense linear algebra for two-qubit problems.
//!
//! Everything here is fixed-size: 3-vectors, real 3x3 matrices and complex
//! 4x4 matrices. The eigensolver is a cyclic complex Jacobi iteration and the
//! 3x3 SVD is one-sided Jacobi, both of which are accurate to a few ulps at
//! these sizes.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance on `max |m - m^dagger|` below which a matrix counts as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);
    pub const X: Vec3 = Vec3([1.0, 0.0, 0.0]);
    pub const Y: Vec3 = Vec3([0.0, 1.0, 0.0]);
    pub const Z: Vec3 = Vec3([0.0, 0.0, 1.0]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub fn dot(&self, other: &Vec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = other.0;
        Vec3([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.0[0].hypot(self.0[1]).hypot(self.0[2])
    }

    /// Unit vector along `self`; the zero vector is returned unchanged.
    pub fn normalized(&self) -> Vec3 {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            *self * (1.0 / n)
        }
    }

    /// Component orthogonal to the unit vector `axis`.
    pub fn reject(&self, axis: &Vec3) -> Vec3 {
        *self - *axis * self.dot(axis)
    }

    /// Some unit vector orthogonal to `self` (which must be nonzero).
    pub fn any_orthogonal(&self) -> Vec3 {
        let [x, y, z] = self.0.map(f64::abs);
        let seed = if x <= y && x <= z {
            Vec3::X
        } else if y <= z {
            Vec3::Y
        } else {
            Vec3::Z
        };
        self.cross(&seed).normalized()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a.dot(b)
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    a.cross(b)
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3(self.0.map(|v| v * s))
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3(self.0.map(|v| -v))
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RealMatrix3(pub [[f64; 3]; 3]);

impl RealMatrix3 {
    pub const ZERO: RealMatrix3 = RealMatrix3([[0.0; 3]; 3]);
    pub const IDENTITY: RealMatrix3 =
        RealMatrix3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn diag(d: [f64; 3]) -> Self {
        let mut m = Self::ZERO;
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = v;
        }
        m
    }

    pub fn from_rows(r: [Vec3; 3]) -> Self {
        RealMatrix3([r[0].0, r[1].0, r[2].0])
    }

    pub fn from_cols(c: [Vec3; 3]) -> Self {
        Self::from_rows(c).transpose()
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3(self.0[i])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        Vec3([self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v)])
    }

    pub fn det(&self) -> f64 {
        self.row(0).dot(&self.row(1).cross(&self.row(2)))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((self.0[i][j] - other.0[i][j]).abs());
            }
        }
        d
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

impl Mul for RealMatrix3 {
    type Output = RealMatrix3;
    fn mul(self, o: RealMatrix3) -> RealMatrix3 {
        let mut p = RealMatrix3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                p.0[i][j] = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        p
    }
}

/// Complex 2x2 matrix, row-major.
pub type Mat2 = [[C64; 2]; 2];

pub fn identity2() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

/// Pauli matrix `k` (0 = x, 1 = y, 2 = z).
pub fn pauli(k: usize) -> Mat2 {
    match k {
        0 => [[ZERO, ONE], [ONE, ZERO]],
        1 => [[ZERO, -I], [I, ZERO]],
        2 => [[ONE, ZERO], [ZERO, -ONE]],
        _ => panic!("pauli index out of range: {k}"),
    }
}

/// `v . sigma` for a real 3-vector.
pub fn pauli_dot(v: &Vec3) -> Mat2 {
    [
        [C64::new(v[2], 0.0), C64::new(v[0], -v[1])],
        [C64::new(v[0], v[1]), C64::new(-v[2], 0.0)],
    ]
}

/// Complex 4x4 matrix, row-major in the basis |00>, |01>, |10>, |11>.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexMatrix4(pub [[C64; 4]; 4]);

impl Default for ComplexMatrix4 {
    fn default() -> Self {
        Self::ZERO
    }
}

impl ComplexMatrix4 {
    pub const ZERO: ComplexMatrix4 = ComplexMatrix4([[ZERO; 4]; 4]);

    pub fn identity() -> Self {
        Self::from_real_diag([1.0; 4])
    }

    pub fn from_real_diag(d: [f64; 4]) -> Self {
        let mut m = Self::ZERO;
        for (i, v) in d.into_iter().enumerate() {
            m.0[i][i] = C64::new(v, 0.0);
        }
        m
    }

    /// Kronecker product `a (x) b`; `a` acts on the first qubit.
    pub fn kron(a: &Mat2, b: &Mat2) -> Self {
        let mut m = Self::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.0[2 * i + k][2 * j + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut t = Self::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                t.0[i][j] = self.0[j][i].conj();
            }
        }
        t
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|i| self.0[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    /// `max |m - m^dagger|` over all entries.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in i..4 {
                d = d.max((self.0[i][j] - self.0[j][i].conj()).norm_sqr());
            }
        }
        d.sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                d = d.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        d
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Real part of `tr(self * op)`.
    pub fn expectation(&self, op: &ComplexMatrix4) -> C64 {
        let mut s = ZERO;
        for i in 0..4 {
            for k in 0..4 {
                s += self.0[i][k] * op.0[k][i];
            }
        }
        s
    }

    fn symmetrized(&self) -> Self {
        let mut s = *self;
        for i in 0..4 {
            s.0[i][i] = C64::new(self.0[i][i].re, 0.0);
            for j in (i + 1)..4 {
                let z = (self.0[i][j] + self.0[j][i].conj()) * 0.5;
                s.0[i][j] = z;
                s.0[j][i] = z.conj();
            }
        }
        s
    }
}

impl Add for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn add(mut self, o: ComplexMatrix4) -> ComplexMatrix4 {
        self += o;
        self
    }
}

impl AddAssign for ComplexMatrix4 {
    fn add_assign(&mut self, o: ComplexMatrix4) {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] += o.0[i][j];
            }
        }
    }
}

impl Sub for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn sub(mut self, o: ComplexMatrix4) -> ComplexMatrix4 {
        for i in 0..4 {
            for j in 0..4 {
                self.0[i][j] -= o.0[i][j];
            }
        }
        self
    }
}

impl Mul for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn mul(self, o: ComplexMatrix4) -> ComplexMatrix4 {
        let mut p = ComplexMatrix4::ZERO;
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    p.0[i][j] += a * o.0[k][j];
                }
            }
        }
        p
    }
}

impl Mul<C64> for ComplexMatrix4 {
    type Output = ComplexMatrix4;
    fn mul(mut self, s: C64) -> ComplexMatrix4 {
        self.0.iter_mut().flatten().for_each(|z| *z *= s);
        self
    }
}

/// Eigen-decomposition of a Hermitian 4x4 matrix.
#[derive(Clone, Copy, Debug)]
pub struct HermitianEigen {
    /// Ascending eigenvalues.
    pub values: [f64; 4],
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix4,
}

impl HermitianEigen {
    pub fn reconstruct(&self) -> ComplexMatrix4 {
        let v = &self.vectors;
        let mut m = ComplexMatrix4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = (0..4)
                    .map(|k| v.0[i][k] * self.values[k] * v.0[j][k].conj())
                    .sum();
            }
        }
        m
    }
}

fn check_hermitian(m: &ComplexMatrix4) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation });
    }
    Ok(())
}

pub fn hermitian_eigen(m: &ComplexMatrix4) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    let (values, vectors) = jacobi(m.symmetrized());
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = HermitianEigen {
        values: [0.0; 4],
        vectors: ComplexMatrix4::ZERO,
    };
    for (k, &src) in order.iter().enumerate() {
        out.values[k] = values[src];
        for i in 0..4 {
            out.vectors.0[i][k] = vectors.0[i][src];
        }
    }
    Ok(out)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix4) -> Result<[f64; 4]> {
    check_hermitian(m)?;
    Ok(eigenvalues_unchecked(m))
}

fn eigenvalues_unchecked(m: &ComplexMatrix4) -> [f64; 4] {
    let (d, e) = tridiagonalize(m.symmetrized());
    let mut values = tridiagonal_eigenvalues(d, e);
    values.sort_by(f64::total_cmp);
    values
}

/// `sqrt(a^2 + b^2)`, through `hypot` only when the squares leave the normal range.
fn pythag(a: f64, b: f64) -> f64 {
    let r = (a * a + b * b).sqrt();
    if r.is_normal() || (a == 0.0 && b == 0.0) {
        r
    } else {
        a.hypot(b)
    }
}

/// Householder reduction to tridiagonal form. The complex off-diagonal can
/// be made real by a diagonal phase similarity, so only moduli are returned:
/// `(diagonal, subdiagonal)` with the last subdiagonal slot zero.
fn tridiagonalize(mut a: ComplexMatrix4) -> ([f64; 4], [f64; 4]) {
    let mut sub = [0.0; 4];
    for k in 0..2 {
        let norm = ((k + 1)..4).map(|i| a.0[i][k].norm_sqr()).sum::<f64>().sqrt();
        let x0 = a.0[k + 1][k];
        let tail = ((k + 2)..4).map(|i| a.0[i][k].norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            sub[k] = x0.norm();
            continue;
        }
        let phase = if x0 == ZERO { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v = [ZERO; 4];
        v[k + 1] = x0 - alpha;
        for i in (k + 2)..4 {
            v[i] = a.0[i][k];
        }
        let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vv;
        // A <- H A H with H = I - tau v v^dagger, as A - v q^dagger - q v^dagger.
        let mut p = [ZERO; 4];
        for (i, pi) in p.iter_mut().enumerate() {
            *pi = (0..4).map(|j| a.0[i][j] * v[j]).sum::<C64>() * tau;
        }
        let kk = 0.5 * tau * (0..4).map(|i| v[i].conj() * p[i]).sum::<C64>().re;
        let q: [C64; 4] = std::array::from_fn(|i| p[i] - v[i] * kk);
        for i in 0..4 {
            for j in 0..4 {
                a.0[i][j] -= v[i] * q[j].conj() + q[i] * v[j].conj();
            }
        }
        sub[k] = norm;
    }
    sub[2] = a.0[3][2].norm();
    ([0, 1, 2, 3].map(|i| a.0[i][i].re), sub)
}

/// Implicit QL with Wilkinson shifts on a real symmetric tridiagonal matrix.
fn tridiagonal_eigenvalues(mut d: [f64; 4], mut e: [f64; 4]) -> [f64; 4] {
    const N: usize = 4;
    for l in 0..N {
        for _iter in 0..64 {
            let mut m = l;
            while m < N - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m] == 0.0 {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = pythag(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d
}

/// Sum of singular values. Hermitian input takes the `sum |lambda|` path.
pub fn trace_norm(m: &ComplexMatrix4) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    if m.hermitian_deviation() <= HERMITIAN_TOL {
        return Ok(eigenvalues_unchecked(m).iter().map(|v| v.abs()).sum());
    }
    let gram = m.adjoint() * *m;
    let values = hermitian_eigenvalues(&gram)?;
    Ok(values.iter().map(|v| v.max(0.0).sqrt()).sum())
}

/// Cyclic complex Jacobi on a Hermitian matrix. Returns unsorted eigenvalues
/// and the accumulated unitary whose columns are eigenvectors.
fn jacobi(mut a: ComplexMatrix4) -> ([f64; 4], ComplexMatrix4) {
    let mut v = ComplexMatrix4::identity();
    let scale: f64 = a.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return ([0.0; 4], v);
    }
    for _sweep in 0..64 {
        let off: f64 = (0..4)
            .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
            .map(|(i, j)| a.0[i][j].norm_sqr())
            .sum();
        // Off-diagonal mass this small moves eigenvalues by far less than an ulp.
        if off.sqrt() <= 1e-18 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a.0[p][q];
                let r = apq.norm();
                if r <= 1e-20 * scale {
                    continue;
                }
                let app = a.0[p][p].re;
                let aqq = a.0[q][q].re;
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J[:,p] = c e_p - s conj(phase) e_q, J[:,q] = s e_p + c conj(phase) e_q
                let ph = phase.conj();
                let (phs, phc) = (ph * s, ph * c);
                let (pas, pac) = (phase * s, phase * c);
                // A <- A J (columns p, q)
                for k in 0..4 {
                    let akp = a.0[k][p];
                    let akq = a.0[k][q];
                    a.0[k][p] = akp * c - akq * phs;
                    a.0[k][q] = akp * s + akq * phc;
                }
                // A <- J^dagger A (rows p, q)
                for k in 0..4 {
                    let apk = a.0[p][k];
                    let aqk = a.0[q][k];
                    a.0[p][k] = apk * c - aqk * pas;
                    a.0[q][k] = apk * s + aqk * pac;
                }
                a.0[p][q] = ZERO;
                a.0[q][p] = ZERO;
                a.0[p][p].im = 0.0;
                a.0[q][q].im = 0.0;
                for k in 0..4 {
                    let vkp = v.0[k][p];
                    let vkq = v.0[k][q];
                    v.0[k][p] = vkp * c - vkq * phs;
                    v.0[k][q] = vkp * s + vkq * phc;
                }
            }
        }
    }
    ([a.0[0][0].re, a.0[1][1].re, a.0[2][2].re, a.0[3][3].re], v)
}

/// Signed SVD `g = o^T diag(gamma) omega` with `o`, `omega` proper rotations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedSvd {
    pub o: RealMatrix3,
    pub omega: RealMatrix3,
    /// Sorted by decreasing magnitude; only the last entry may be negative.
    pub gamma: [f64; 3],
}

impl SignedSvd {
    pub fn reconstruct(&self) -> RealMatrix3 {
        self.o.transpose() * RealMatrix3::diag(self.gamma) * self.omega
    }
}

pub fn signed_svd_so3(g: &RealMatrix3) -> SignedSvd {
    // One-sided Jacobi: rotate columns of B = g V until they are orthogonal.
    let mut b = [g.col(0), g.col(1), g.col(2)];
    let mut v = [Vec3::X, Vec3::Y, Vec3::Z];
    for _sweep in 0..64 {
        let mut rotated = false;
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let alpha = b[p].norm_sq();
            let beta = b[q].norm_sq();
            let gamma = b[p].dot(&b[q]);
            if gamma.abs() <= f64::EPSILON * 0.5 * (alpha * beta).sqrt() || gamma == 0.0 {
                continue;
            }
            rotated = true;
            let zeta = (beta - alpha) / (2.0 * gamma);
            let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = c * t;
            let (bp, bq) = (b[p], b[q]);
            b[p] = bp * c - bq * s;
            b[q] = bp * s + bq * c;
            let (vp, vq) = (v[p], v[q]);
            v[p] = vp * c - vq * s;
            v[q] = vp * s + vq * c;
        }
        if !rotated {
            break;
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| b[j].norm_sq().total_cmp(&b[i].norm_sq()));
    let b = order.map(|k| b[k]);
    let mut v = order.map(|k| v[k]);

    let s1 = b[0].norm();
    let u1 = if s1 > 0.0 { b[0] * (1.0 / s1) } else { Vec3::X };
    let u2_raw = b[1].reject(&u1);
    let u2 = if u2_raw.norm() > f64::EPSILON * s1.max(f64::MIN_POSITIVE) * 4.0 {
        u2_raw.normalized()
    } else {
        u1.any_orthogonal()
    };
    let u3 = u1.cross(&u2);
    let mut gamma = [s1, u2.dot(&b[1]), u3.dot(&b[2])];

    if RealMatrix3::from_cols(v).det() < 0.0 {
        v[2] = -v[2];
        gamma[2] = -gamma[2];
    }

    SignedSvd {
        o: RealMatrix3::from_rows([u1, u2, u3]),
        omega: RealMatrix3::from_rows(v),
        gamma,
    }
}
