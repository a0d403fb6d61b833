//! Two-qubit states: validation, Bloch form, named families and the
//! structural classification used by the dispatcher.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, identity2, pauli, pauli_dot, signed_svd_so3, ComplexMatrix4, Mat2,
    RealMatrix3, Vec3, C64,
};

pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;
pub const CLASSIFY_TOL: f64 = 1e-12;
const QC_MATCH_TOL: f64 = 1e-10;

/// A validated two-qubit density matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix4,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity. Eigenvalues in
    /// `(-1e-10, 0)` are accepted as round-off.
    pub fn validate(m: ComplexMatrix4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let eig = hermitian_eigenvalues(&m)?;
        let trace = m.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        if eig[0] < -POSITIVITY_TOL {
            return Err(Error::NotPositive {
                min_eigenvalue: eig[0],
            });
        }
        Ok(DensityMatrix { matrix: m })
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.matrix
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix {
            matrix: ComplexMatrix4::from_real_diag([0.25; 4]),
        }
    }

    /// Projector onto the singlet `(|01> - |10>)/sqrt(2)`.
    pub fn singlet() -> Self {
        DensityMatrix {
            matrix: pure_matrix(&[0.0, 1.0, -1.0, 0.0].map(|v| C64::new(v * 0.5f64.sqrt(), 0.0))),
        }
    }

    /// `|psi><psi|` for a (not necessarily normalized) state vector.
    pub fn pure(psi: [C64; 4]) -> Result<Self> {
        let n: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Domain("state vector must be nonzero and finite".into()));
        }
        Self::validate(pure_matrix(&psi.map(|z| z / n)))
    }

    /// The state with the two qubits exchanged.
    pub fn swapped(&self) -> Self {
        const P: [usize; 4] = [0, 2, 1, 3];
        let mut m = ComplexMatrix4::ZERO;
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = self.matrix.0[P[i]][P[j]];
            }
        }
        DensityMatrix { matrix: m }
    }

    /// `(u (x) v) rho (u (x) v)^dagger` for single-qubit unitaries `u`, `v`.
    pub fn local_unitary(&self, u: &Mat2, v: &Mat2) -> Self {
        let w = ComplexMatrix4::kron(u, v);
        DensityMatrix {
            matrix: w * self.matrix * w.adjoint(),
        }
    }

    /// Mixture `p self + (1 - p) other`.
    pub fn mix(&self, p: f64, other: &DensityMatrix) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(format!("mixing weight {p} outside [0, 1]")));
        }
        Self::validate(self.matrix.scale(p) + other.matrix.scale(1.0 - p))
    }
}

fn pure_matrix(psi: &[C64; 4]) -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::ZERO;
    for i in 0..4 {
        for j in 0..4 {
            m.0[i][j] = psi[i] * psi[j].conj();
        }
    }
    m
}

/// Bloch vectors of both qubits and the correlation matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlochForm {
    pub x_a: Vec3,
    pub x_b: Vec3,
    pub gamma: RealMatrix3,
}

impl BlochForm {
    /// The matrix `(I + x_a.s (x) I + I (x) x_b.s + sum G_ij s_i (x) s_j) / 4`,
    /// without any validation.
    pub fn assemble(&self) -> ComplexMatrix4 {
        let id = identity2();
        let mut m = ComplexMatrix4::identity();
        m += ComplexMatrix4::kron(&pauli_dot(&self.x_a), &id);
        m += ComplexMatrix4::kron(&id, &pauli_dot(&self.x_b));
        for i in 0..3 {
            let row = self.gamma.row(i);
            m += ComplexMatrix4::kron(&pauli(i), &pauli_dot(&row));
        }
        m.scale(0.25)
    }
}

pub fn to_bloch(rho: &DensityMatrix) -> BlochForm {
    let m = rho.matrix();
    let id = identity2();
    let mut b = BlochForm::default();
    for i in 0..3 {
        b.x_a[i] = m.expectation(&ComplexMatrix4::kron(&pauli(i), &id)).re;
        b.x_b[i] = m.expectation(&ComplexMatrix4::kron(&id, &pauli(i))).re;
        for j in 0..3 {
            b.gamma.0[i][j] = m.expectation(&ComplexMatrix4::kron(&pauli(i), &pauli(j))).re;
        }
    }
    b
}

pub fn from_bloch(b: &BlochForm) -> Result<DensityMatrix> {
    if !(b.x_a.is_finite() && b.x_b.is_finite() && b.gamma.is_finite()) {
        return Err(Error::NonFinite);
    }
    DensityMatrix::validate(b.assemble())
}

/// Mixture of Bell states with correlation matrix `diag(c1, c2, c3)`.
pub fn make_bell_diagonal(c1: f64, c2: f64, c3: f64) -> Result<DensityMatrix> {
    from_bloch(&BlochForm {
        gamma: RealMatrix3::diag([c1, c2, c3]),
        ..Default::default()
    })
}

/// `p rho0 (x) |0><0| + (1 - p) rho1 (x) |1><1|` with `rho_i = (I + s_i.s)/2`.
pub fn make_quantum_classical(p: f64, s0: Vec3, s1: Vec3) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p = {p} outside [0, 1]")));
    }
    for (name, s) in [("s0", s0), ("s1", s1)] {
        if !s.is_finite() || s.norm() > 1.0 + POSITIVITY_TOL {
            return Err(Error::Domain(format!(
                "|{name}| = {} exceeds 1",
                s.norm()
            )));
        }
    }
    let half = |s: &Vec3| -> Mat2 {
        let mut r = pauli_dot(s);
        r[0][0] += 1.0;
        r[1][1] += 1.0;
        r.map(|row| row.map(|z| z * 0.5))
    };
    let zero = [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0); 2]];
    let one = [[C64::new(0.0, 0.0); 2], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    let m = ComplexMatrix4::kron(&half(&s0), &zero).scale(p)
        + ComplexMatrix4::kron(&half(&s1), &one).scale(1.0 - p);
    DensityMatrix::validate(m)
}

/// X-shaped state from its diagonal and the two independent off-diagonal
/// entries `rho32 = <10|rho|01>` and `rho41 = <11|rho|00>`.
pub fn make_x_state(diag: [f64; 4], rho32: C64, rho41: C64) -> Result<DensityMatrix> {
    if diag.iter().any(|v| !v.is_finite()) || !(rho32.is_finite() && rho41.is_finite()) {
        return Err(Error::NonFinite);
    }
    if let Some(v) = diag.iter().find(|v| **v < 0.0) {
        return Err(Error::Domain(format!("negative diagonal entry {v}")));
    }
    let trace: f64 = diag.iter().sum();
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceNotOne { trace });
    }
    let outer = diag[0] * diag[3];
    if outer < rho41.norm_sqr() {
        return Err(Error::XStatePositivity {
            constraint: "rho11 * rho44 >= |rho41|^2",
            lhs: outer,
            rhs: rho41.norm_sqr(),
        });
    }
    let inner = diag[1] * diag[2];
    if inner < rho32.norm_sqr() {
        return Err(Error::XStatePositivity {
            constraint: "rho22 * rho33 >= |rho32|^2",
            lhs: inner,
            rhs: rho32.norm_sqr(),
        });
    }
    let mut m = ComplexMatrix4::from_real_diag(diag);
    m.0[3][0] = rho41;
    m.0[0][3] = rho41.conj();
    m.0[2][1] = rho32;
    m.0[1][2] = rho32.conj();
    DensityMatrix::validate(m)
}

/// Parameters of an X state in the labeling where `|g1| >= |g2|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XParams {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
    pub xa3: f64,
}

/// X-state parameters read off the matrix, or `None` if some entry outside
/// the diagonal and anti-diagonal exceeds `tol`. Off-diagonal phases are
/// dropped, which amounts to a local phase rotation on each qubit.
pub fn x_state_params(m: &ComplexMatrix4, tol: f64) -> Option<XParams> {
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 && m.0[i][j].norm() > tol {
                return None;
            }
        }
    }
    let r32 = m.0[2][1].norm();
    let r41 = m.0[3][0].norm();
    let d = [0, 1, 2, 3].map(|i| m.0[i][i].re);
    Some(XParams {
        g1: 2.0 * (r32 + r41),
        g2: 2.0 * (r32 - r41),
        g3: 1.0 - 2.0 * (d[1] + d[2]),
        xa3: 2.0 * (d[0] + d[1]) - 1.0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateClass {
    /// `x_a = 0`; `gamma` sorted by decreasing magnitude.
    ClassA { gamma: [f64; 3] },
    /// All three `|gamma_k|` equal.
    ClassB { gamma: [f64; 3] },
    /// Mirror of a classical-quantum state, with `0 < p < 1`; `phi` is the
    /// angle between the two conditional Bloch vectors of A.
    QuantumClassical { p: f64, s0: f64, s1: f64, phi: f64 },
    /// Correlation matrix of rank at most one: `gamma = gamma1 w1 v1^T`.
    RankOneGamma { gamma1: f64, w1: Vec3 },
    XState(XParams),
    General,
}

impl StateClass {
    pub fn tag(&self) -> &'static str {
        match self {
            StateClass::ClassA { .. } => "class_a",
            StateClass::ClassB { .. } => "class_b",
            StateClass::QuantumClassical { .. } => "quantum_classical",
            StateClass::RankOneGamma { .. } => "rank_one",
            StateClass::XState(_) => "x_state",
            StateClass::General => "general",
        }
    }
}

/// Most specific family containing the state. Precedence: class A/B,
/// quantum-classical, rank-one correlations, X state, general.
pub fn classify(b: &BlochForm, tol: f64) -> StateClass {
    let svd = signed_svd_so3(&b.gamma);
    let g = svd.gamma;
    if b.x_a.norm() <= tol {
        return StateClass::ClassA { gamma: g };
    }
    let ag = g.map(f64::abs);
    if (ag[0] - ag[1]).abs() <= tol && (ag[1] - ag[2]).abs() <= tol {
        return StateClass::ClassB { gamma: g };
    }
    if ag[1] <= tol && ag[2] <= tol {
        if let Some(qc) = quantum_classical_params(b, &svd.o.row(0), &svd.omega.row(0), g[0]) {
            return qc;
        }
        return StateClass::RankOneGamma {
            gamma1: ag[0],
            w1: svd.o.row(0),
        };
    }
    if let Some(x) = x_state_params(&b.assemble(), tol) {
        return StateClass::XState(x);
    }
    StateClass::General
}

/// Tries to write a rank-one state as `p rho0 (x) |n><n| + (1-p) rho1 (x) |-n><-n|`.
fn quantum_classical_params(b: &BlochForm, w1: &Vec3, v1: &Vec3, g1: f64) -> Option<StateClass> {
    // With gamma = c n^T the B marginal must lie along n.
    let n = if g1.abs() > QC_MATCH_TOL {
        *v1
    } else if b.x_b.norm() > QC_MATCH_TOL {
        b.x_b.normalized()
    } else {
        return None;
    };
    if b.x_b.reject(&n).norm() > QC_MATCH_TOL {
        return None;
    }
    let p = 0.5 * (1.0 + b.x_b.dot(&n));
    if p <= QC_MATCH_TOL || p >= 1.0 - QC_MATCH_TOL {
        return None;
    }
    let c = *w1 * g1;
    let s0 = (b.x_a + c) * (0.5 / p);
    let s1 = (b.x_a - c) * (0.5 / (1.0 - p));
    let clamp = |s: Vec3| {
        if s.norm() > 1.0 {
            s.normalized()
        } else {
            s
        }
    };
    let (s0, s1) = (clamp(s0), clamp(s1));
    let rebuilt = BlochForm {
        x_a: s0 * p + s1 * (1.0 - p),
        x_b: n * (2.0 * p - 1.0),
        gamma: outer(&(s0 * p - s1 * (1.0 - p)), &n),
    };
    if rebuilt.assemble().max_abs_diff(&b.assemble()) > QC_MATCH_TOL {
        return None;
    }
    let (l0, l1) = (s0.norm(), s1.norm());
    let phi = if l0 == 0.0 || l1 == 0.0 {
        0.0
    } else {
        s0.cross(&s1).norm().atan2(s0.dot(&s1))
    };
    Some(StateClass::QuantumClassical {
        p,
        s0: l0,
        s1: l1,
        phi,
    })
}

fn outer(a: &Vec3, b: &Vec3) -> RealMatrix3 {
    let mut m = RealMatrix3::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            m.0[i][j] = a[i] * b[j];
        }
    }
    m
}

/// `{"matrix": [[[re, im], x4], x4]}`, row-major.
pub fn to_json(rho: &DensityMatrix) -> Value {
    let rows: Vec<Value> = rho
        .matrix()
        .0
        .iter()
        .map(|row| Value::Array(row.iter().map(|z| json!([z.re, z.im])).collect()))
        .collect();
    json!({ "matrix": rows })
}

/// Parses the state schema. Errors name the offending field; the result is
/// not yet validated as a density matrix.
pub fn matrix_from_json(text: &str) -> std::result::Result<ComplexMatrix4, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = value
        .as_object()
        .ok_or("top level: expected an object with field \"matrix\"")?;
    let rows = obj
        .get("matrix")
        .ok_or("missing field \"matrix\"")?
        .as_array()
        .ok_or("matrix: expected an array of 4 rows")?;
    if rows.len() != 4 {
        return Err(format!("matrix: expected 4 rows, found {}", rows.len()));
    }
    let mut m = ComplexMatrix4::ZERO;
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| format!("matrix[{i}]: expected an array of 4 entries"))?;
        if row.len() != 4 {
            return Err(format!("matrix[{i}]: expected 4 entries, found {}", row.len()));
        }
        for (j, entry) in row.iter().enumerate() {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| format!("matrix[{i}][{j}]: expected [re, im]"))?;
            let part = |k: usize| {
                pair[k].as_f64().ok_or_else(|| {
                    let name = if k == 0 { "re" } else { "im" };
                    format!("matrix[{i}][{j}].{name}: expected a number, found {}", pair[k])
                })
            };
            m.0[i][j] = C64::new(part(0)?, part(1)?);
        }
    }
    Ok(m)
}
