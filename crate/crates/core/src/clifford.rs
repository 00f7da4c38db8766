//! Cl(7) acting on the 8-dimensional spin representation.
//!
//! Two independent tables are kept: the complex matrices in the u-basis and
//! the real action on the f-basis written as sums of elementary rotations
//! f^{ij} (fᵢ ↦ fⱼ, fⱼ ↦ −fᵢ). [`basis_change_failures`] checks that they agree.

use serde_json::json;

use crate::certificate::Certificate;
use crate::exactnum::{q, qi, ExactError, ExactMatrix, ExactScalar};

/// Nonzero entry of a signed permutation matrix: (column, re, im).
type Entry = (usize, i64, i64);

// Row r of e_k has a single nonzero entry.
const U_TABLE: [[Entry; 8]; 6] = [
    [(1, 0, 1), (0, 0, 1), (3, 0, 1), (2, 0, 1), (5, 0, 1), (4, 0, 1), (7, 0, 1), (6, 0, 1)],
    [(1, -1, 0), (0, 1, 0), (3, -1, 0), (2, 1, 0), (5, -1, 0), (4, 1, 0), (7, -1, 0), (6, 1, 0)],
    [(2, 0, -1), (3, 0, 1), (0, 0, -1), (1, 0, 1), (6, 0, -1), (7, 0, 1), (4, 0, -1), (5, 0, 1)],
    [(2, 1, 0), (3, -1, 0), (0, -1, 0), (1, 1, 0), (6, 1, 0), (7, -1, 0), (4, -1, 0), (5, 1, 0)],
    [(4, 0, 1), (5, 0, -1), (6, 0, -1), (7, 0, 1), (0, 0, 1), (1, 0, -1), (2, 0, -1), (3, 0, 1)],
    [(4, -1, 0), (5, 1, 0), (6, 1, 0), (7, -1, 0), (0, 1, 0), (1, -1, 0), (2, -1, 0), (3, 1, 0)],
];

const E7_DIAG: [i64; 8] = [-1, 1, 1, -1, 1, -1, -1, 1];

/// e_k on the f-basis as Σ sign·f^{ij} (1-based i, j).
const F_TABLE: [[(i64, usize, usize); 4]; 7] = [
    [(1, 1, 6), (1, 2, 5), (1, 3, 8), (1, 4, 7)],
    [(1, 1, 2), (1, 3, 4), (1, 5, 6), (1, 7, 8)],
    [(-1, 1, 7), (1, 2, 8), (-1, 3, 5), (1, 4, 6)],
    [(-1, 1, 3), (1, 2, 4), (-1, 5, 7), (1, 6, 8)],
    [(-1, 1, 8), (-1, 2, 7), (1, 3, 6), (1, 4, 5)],
    [(1, 1, 4), (1, 2, 3), (-1, 5, 8), (-1, 6, 7)],
    [(-1, 1, 5), (1, 2, 6), (1, 3, 7), (-1, 4, 8)],
];

fn gauss(re: i64, im: i64) -> ExactScalar {
    ExactScalar::gauss(qi(re), qi(im))
}

fn check_index(i: usize) -> Result<(), ExactError> {
    if (1..=7).contains(&i) {
        Ok(())
    } else {
        Err(ExactError::Shape(format!("Clifford index {i} outside 1..=7")))
    }
}

/// The matrix of eᵢ on Δ in the u-basis.
pub fn clifford_matrix(i: usize) -> Result<ExactMatrix, ExactError> {
    check_index(i)?;
    let mut m = ExactMatrix::zeros(8, 8);
    if i == 7 {
        for (r, s) in E7_DIAG.iter().enumerate() {
            m.set(r, r, gauss(0, *s));
        }
    } else {
        for (r, &(c, re, im)) in U_TABLE[i - 1].iter().enumerate() {
            m.set(r, c, gauss(re, im));
        }
    }
    Ok(m)
}

/// The elementary rotation f^{ij}: fᵢ ↦ fⱼ, fⱼ ↦ −fᵢ (1-based).
pub fn f_rotation(i: usize, j: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(8, 8);
    m.set(j - 1, i - 1, ExactScalar::one());
    m.set(i - 1, j - 1, ExactScalar::int(-1));
    m
}

/// The real matrix of eᵢ on [Δ] in the f-basis.
pub fn f_action_matrix(i: usize) -> Result<ExactMatrix, ExactError> {
    check_index(i)?;
    let mut m = ExactMatrix::zeros(8, 8);
    for &(s, a, b) in &F_TABLE[i - 1] {
        m = &m + &f_rotation(a, b).scale(&ExactScalar::int(s));
    }
    Ok(m)
}

pub fn clifford_matrices() -> [ExactMatrix; 7] {
    std::array::from_fn(|k| clifford_matrix(k + 1).unwrap())
}

pub fn f_action_matrices() -> [ExactMatrix; 7] {
    std::array::from_fn(|k| f_action_matrix(k + 1).unwrap())
}

/// A vector Σ vᵢeᵢ of ℝ⁷ (coefficients may be symbolic).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordVector(pub [ExactScalar; 7]);

impl CliffordVector {
    /// The basis vector eᵢ, 1-based.
    pub fn basis(i: usize) -> Self {
        CliffordVector(std::array::from_fn(|k| if k + 1 == i { ExactScalar::one() } else { ExactScalar::zero() }))
    }

    pub fn from_ints(v: [i64; 7]) -> Self {
        CliffordVector(v.map(ExactScalar::int))
    }

    pub fn norm_sqr(&self) -> ExactScalar {
        self.0.iter().map(|x| x * x).sum()
    }
}

/// Coefficients on u₁..u₈.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexSpinor(pub [ExactScalar; 8]);

/// Coefficients on f₁..f₈.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealSpinor(pub [ExactScalar; 8]);

impl ComplexSpinor {
    pub fn basis(k: usize) -> Self {
        ComplexSpinor(std::array::from_fn(|i| if i + 1 == k { ExactScalar::one() } else { ExactScalar::zero() }))
    }

    pub fn scale(&self, z: &ExactScalar) -> Self {
        ComplexSpinor(std::array::from_fn(|i| &self.0[i] * z))
    }

    pub fn apply(&self, m: &ExactMatrix) -> Self {
        ComplexSpinor(m.mul_vec(&self.0).try_into().unwrap())
    }
}

impl RealSpinor {
    pub fn basis(k: usize) -> Self {
        RealSpinor(std::array::from_fn(|i| if i + 1 == k { ExactScalar::one() } else { ExactScalar::zero() }))
    }

    pub fn from_ints(v: [i64; 8]) -> Self {
        RealSpinor(v.map(ExactScalar::int))
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|x| x.conj() == *x)
    }

    pub fn norm_sqr(&self) -> ExactScalar {
        real_product(self, self)
    }

    pub fn scale(&self, z: &ExactScalar) -> Self {
        RealSpinor(std::array::from_fn(|i| &self.0[i] * z))
    }

    pub fn add(&self, other: &RealSpinor) -> Self {
        RealSpinor(std::array::from_fn(|i| &self.0[i] + &other.0[i]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(ExactScalar::is_zero)
    }

    /// The same spinor written in the u-basis.
    pub fn to_complex(&self) -> ComplexSpinor {
        ComplexSpinor(basis_change().mul_vec(&self.0).try_into().unwrap())
    }
}

/// Clifford multiplication v·s on [Δ].
pub fn clifford_mul(v: &CliffordVector, s: &RealSpinor) -> RealSpinor {
    let mut out = RealSpinor(std::array::from_fn(|_| ExactScalar::zero()));
    for (k, m) in f_action_matrices().iter().enumerate() {
        if v.0[k].is_zero() {
            continue;
        }
        let ks = m.mul_vec(&s.0);
        for i in 0..8 {
            out.0[i] += &(&v.0[k] * &ks[i]);
        }
    }
    out
}

/// eᵢ·s for a basis vector, 1-based.
pub fn basis_mul(i: usize, s: &RealSpinor) -> RealSpinor {
    RealSpinor(f_action_matrix(i).unwrap().mul_vec(&s.0).try_into().unwrap())
}

/// The standard Hermitian product Σ conj(uₖ)vₖ.
pub fn hermitian_product(u: &ComplexSpinor, v: &ComplexSpinor) -> ExactScalar {
    u.0.iter().zip(&v.0).map(|(a, b)| &a.conj() * b).sum()
}

/// The Euclidean product on [Δ] in the f-basis.
pub fn real_product(u: &RealSpinor, v: &RealSpinor) -> ExactScalar {
    u.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()
}

/// The antilinear real structure j on Δ.
pub fn real_structure(s: &ComplexSpinor) -> ComplexSpinor {
    // j(Σ vₖuₖ) = Σ sign_k · conj(v_{9−k}) uₖ
    const SIGNS: [i64; 8] = [-1, 1, -1, 1, 1, -1, 1, -1];
    ComplexSpinor(std::array::from_fn(|k| s.0[7 - k].conj().scale(&qi(SIGNS[k]))))
}

/// Columns are f₁..f₈ in u-coordinates.
pub fn basis_change() -> ExactMatrix {
    let h = ExactScalar::sqrt2().scale(&q(1, 2)); // 1/√2
    let ih = &h * &ExactScalar::i();
    let mut p = ExactMatrix::zeros(8, 8);
    // fₖ = (u_k ∓ u_{9−k})/√2, f_{k+4} = i(u_k ± u_{9−k})/√2 for k = 1..4
    for k in 0..4 {
        let s = if k % 2 == 0 { -1 } else { 1 };
        p.set(k, k, h.clone());
        p.set(7 - k, k, h.scale(&qi(s)));
        p.set(k, k + 4, ih.clone());
        p.set(7 - k, k + 4, ih.scale(&qi(-s)));
    }
    p
}

/// Failed anticommutator pairs (1-based) among seven matrices.
pub fn relation_failures(ms: &[ExactMatrix; 7]) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    let id = ExactMatrix::identity(8);
    for i in 0..7 {
        for j in 0..7 {
            let ac = &(&ms[i] * &ms[j]) + &(&ms[j] * &ms[i]);
            let want = if i == j { id.scale(&ExactScalar::int(-2)) } else { ExactMatrix::zeros(8, 8) };
            if ac != want {
                bad.push((i + 1, j + 1));
            }
        }
    }
    bad
}

/// Checks that conjugating the u-basis matrices by the basis change gives
/// the f-basis table.
pub fn basis_change_failures() -> Vec<usize> {
    let p = basis_change();
    let ph = p.conj_transpose();
    (1..=7)
        .filter(|&i| &(&ph * &clifford_matrix(i).unwrap()) * &p != f_action_matrix(i).unwrap())
        .collect()
}

/// eᵢeⱼ + eⱼeᵢ = −2δᵢⱼ in both bases, j² = id, j-equivariance, and the
/// basis-change consistency.
pub fn verify_clifford_relations() -> Vec<Certificate> {
    verify_with(&clifford_matrices(), &f_action_matrices())
}

/// As [`verify_clifford_relations`], for caller-supplied tables.
pub fn verify_with(u: &[ExactMatrix; 7], f: &[ExactMatrix; 7]) -> Vec<Certificate> {
    let mut certs = Vec::new();
    let fu = relation_failures(u);
    certs.push(Certificate::new(
        "clifford.relations.u",
        "e_i e_j + e_j e_i = -2 delta_ij on the u-basis matrices",
        "Clifford relation",
        fu.is_empty(),
        json!({"pairs_checked": 49, "passed": 49 - fu.len(), "failures": fu}),
    ));
    let ff = relation_failures(f);
    certs.push(Certificate::new(
        "clifford.relations.f",
        "e_i e_j + e_j e_i = -2 delta_ij on the real f-basis action",
        "Clifford relation",
        ff.is_empty(),
        json!({"pairs_checked": 49, "passed": 49 - ff.len(), "failures": ff}),
    ));

    let mut j_fail = Vec::new();
    let mut eq_fail = Vec::new();
    for k in 1..=8 {
        let s = ComplexSpinor::basis(k);
        if real_structure(&real_structure(&s)) != s {
            j_fail.push(k);
        }
        for (i, m) in u.iter().enumerate() {
            if real_structure(&s.apply(m)) != real_structure(&s).apply(m) {
                eq_fail.push((i + 1, k));
            }
        }
    }
    certs.push(Certificate::new(
        "clifford.real_structure",
        "j^2 = id and j(e_i s) = e_i j(s) on all basis spinors",
        "real structure",
        j_fail.is_empty() && eq_fail.is_empty(),
        json!({"involution_failures": j_fail, "equivariance_failures": eq_fail}),
    ));

    let p = basis_change();
    let ph = p.conj_transpose();
    let bc: Vec<usize> = (0..7).filter(|&i| &(&ph * &u[i]) * &p != f[i]).map(|i| i + 1).collect();
    let f_fixed: Vec<usize> = (0..8)
        .filter(|&k| {
            let fk = ComplexSpinor(p.column(k).try_into().unwrap());
            real_structure(&fk) != fk
        })
        .map(|k| k + 1)
        .collect();
    certs.push(Certificate::new(
        "clifford.basis_change",
        "P^H e_i P equals the f-basis expansion, and j fixes every f_k",
        "real spinor basis",
        bc.is_empty() && f_fixed.is_empty(),
        json!({"mismatched_generators": bc, "f_not_fixed_by_j": f_fixed}),
    ));
    certs
}
