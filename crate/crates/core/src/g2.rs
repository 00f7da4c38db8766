//! Three-forms and unit spinors: the G2 dictionary, the induced metric,
//! closedness, the intrinsic endomorphism and the metric normal form on h1.

use num_traits::{Num, Signed, Zero};
use serde_json::json;

use crate::certificate::Certificate;
use crate::clifford::{basis_mul, f_action_matrices, real_product, RealSpinor};
use crate::exactnum::{q, qi, rational_root, Assignment, ExactError, ExactMatrix, ExactScalar, Gq, Var, Q};
use crate::liealg::{NilpotentLieAlgebra, SpinConnection, DIM};
use crate::superalg::{indices_of, SuperForm, V_TOP};

/// The seven triples of the standard form and their signs.
pub const STANDARD_TRIPLES: [((usize, usize, usize), i64); 7] =
    [((1, 2, 3), 1), ((1, 4, 5), 1), ((1, 6, 7), 1), ((2, 4, 6), 1), ((2, 5, 7), -1), ((3, 4, 7), -1), ((3, 5, 6), -1)];

/// The 35 increasing triples in lexicographic order.
pub fn triples() -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(35);
    for i in 1..=DIM {
        for j in i + 1..=DIM {
            for k in j + 1..=DIM {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// A 3-form on ℝ⁷, stored as a V-degree-3 [`SuperForm`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeForm(pub SuperForm);

impl ThreeForm {
    pub fn zero() -> Self {
        ThreeForm(SuperForm::zero())
    }

    pub fn from_terms(terms: &[((usize, usize, usize), ExactScalar)]) -> Self {
        let mut f = SuperForm::zero();
        for ((i, j, k), c) in terms {
            f = f.add(&SuperForm::term(&[*i, *j, *k], &[], c.clone()));
        }
        ThreeForm(f)
    }

    /// e¹²³+e¹⁴⁵+e¹⁶⁷+e²⁴⁶−e²⁵⁷−e³⁴⁷−e³⁵⁶.
    pub fn standard() -> Self {
        Self::from_terms(&STANDARD_TRIPLES.map(|(t, s)| (t, ExactScalar::int(s))))
    }

    /// b₁E¹²³+b₂E¹⁴⁵+b₃E¹⁶⁷+b₄E²⁴⁶+b₅E²⁵⁷+b₅E³⁵⁶+b₆E³⁴⁷.
    pub fn phi_b(b: &[ExactScalar; 6]) -> Self {
        Self::from_terms(&[
            ((1, 2, 3), b[0].clone()),
            ((1, 4, 5), b[1].clone()),
            ((1, 6, 7), b[2].clone()),
            ((2, 4, 6), b[3].clone()),
            ((2, 5, 7), b[4].clone()),
            ((3, 5, 6), b[4].clone()),
            ((3, 4, 7), b[5].clone()),
        ])
    }

    /// E¹²³+E¹⁴⁵+a²E¹⁶⁷+aE²⁴⁶−aE²⁵⁷−aE³⁵⁶−aE³⁴⁷ in the unscaled frame.
    pub fn phi_a(a: &ExactScalar) -> Self {
        let one = ExactScalar::one();
        Self::phi_b(&[one.clone(), one, a * a, a.clone(), -a, -a])
    }

    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> ExactScalar {
        match crate::superalg::mask_of(&[i, j, k]) {
            None => ExactScalar::zero(),
            Some((m, s)) => self.0.coeff(m, 0).scale(&qi(s as i64)),
        }
    }

    /// Coefficients on the 35 increasing triples.
    pub fn coefficients(&self) -> Vec<ExactScalar> {
        triples().into_iter().map(|(i, j, k)| self.coefficient(i, j, k)).collect()
    }

    pub fn subst(&self, v: Var, x: &ExactScalar) -> Result<Self, ExactError> {
        Ok(ThreeForm(self.0.subst(v, x)?))
    }
}

/// x⌟α for x = eᵢ on the V-factor.
pub fn interior(i: usize, form: &SuperForm) -> SuperForm {
    let bit = 1u8 << (i - 1);
    let mut out = SuperForm::zero();
    for ((v, e), c) in form.terms() {
        if v & bit == 0 {
            continue;
        }
        let below = (v & (bit - 1)).count_ones();
        let c = if below % 2 == 0 { c.clone() } else { -c };
        out = out.add(&SuperForm::basis(v & !bit, *e, c));
    }
    out
}

/// φ(eᵢ, eⱼ, eₖ) for any (not necessarily increasing) distinct indices.
pub fn form_value(phi: &ThreeForm, i: usize, j: usize, k: usize) -> ExactScalar {
    if i == j || j == k || i == k {
        return ExactScalar::zero();
    }
    phi.coefficient(i, j, k)
}

/// The unit spinor φ = (f₂ + f₄)/√2 compatible with the standard form.
pub fn standard_spinor() -> RealSpinor {
    standard_spinor_unnormalized().scale(&ExactScalar::sqrt2().scale(&q(1, 2)))
}

/// f₂ + f₄, of norm² 2; frame computations use it to stay rational.
pub fn standard_spinor_unnormalized() -> RealSpinor {
    RealSpinor::from_ints([0, 1, 0, 1, 0, 0, 0, 0])
}

/// (eᵢeⱼeₖφ, φ) on every increasing triple. `φ` must have unit norm.
pub fn three_form_from_spinor(phi: &RealSpinor) -> Result<ThreeForm, ExactError> {
    let n = phi.norm_sqr();
    if !n.is_one() {
        return Err(ExactError::Shape(format!("spinor is not of unit norm (norm² = {n})")));
    }
    let mut terms = Vec::new();
    for (i, j, k) in triples() {
        let s = basis_mul(i, &basis_mul(j, &basis_mul(k, phi)));
        let c = real_product(&s, phi);
        if !c.is_zero() {
            terms.push(((i, j, k), c));
        }
    }
    Ok(ThreeForm::from_terms(&terms))
}

/// The 168×8 system (eⱼeₖ + Σᵢ φ(eⱼ,eₖ,eᵢ)eᵢ)ψ = 0, j < k, on the f-basis.
pub fn compatibility_system(phi: &ThreeForm) -> ExactMatrix {
    let f = f_action_matrices();
    let mut blocks: Option<ExactMatrix> = None;
    for j in 1..=DIM {
        for k in j + 1..=DIM {
            let mut m = &f[j - 1] * &f[k - 1];
            for i in 1..=DIM {
                let c = form_value(phi, j, k, i);
                if !c.is_zero() {
                    m = &m + &f[i - 1].scale(&c);
                }
            }
            blocks = Some(match blocks {
                None => m,
                Some(b) => b.vstack(&m).unwrap(),
            });
        }
    }
    blocks.unwrap()
}

/// A unit spinor inducing `phi`, found as the kernel of the compatibility
/// system. The other solution is its negative.
pub fn spinor_from_three_form(phi: &ThreeForm) -> Result<RealSpinor, ExactError> {
    let sys = compatibility_system(phi);
    let cert = sys.rank_certificate(0x5eed)?;
    if cert.nullity() != 1 {
        return Err(ExactError::Shape(format!("not a G2-form: compatibility kernel has dimension {}", cert.nullity())));
    }
    let v = &cert.kernel[0];
    let mut rat = Vec::with_capacity(8);
    for x in v {
        rat.push(x.as_rational().ok_or_else(|| ExactError::Shape("three-form coefficients must be rational".into()))?);
    }
    let n2: Q = rat.iter().map(|x| x * x).sum();
    // 1/√n₂ in Q(√2) when n₂ or 2n₂ is a rational square
    let scale = if let Some(r) = crate::exactnum::rational_sqrt(&n2) {
        ExactScalar::from_rational(r.recip())
    } else if let Some(r) = crate::exactnum::rational_sqrt(&(&n2 * qi(2))) {
        ExactScalar::sqrt2().scale(&r.recip())
    } else {
        return Err(ExactError::Shape(format!("normalization 1/sqrt({n2}) leaves Q(sqrt2)")));
    };
    let s = RealSpinor(std::array::from_fn(|i| ExactScalar::from_rational(rat[i].clone()) * scale.clone()));
    debug_assert!(s.norm_sqr().is_one());
    Ok(s)
}

/// Table of products eⱼeₖφ = σ eᵢφ claimed for the standard form, as
/// (j, k, sign, i).
pub const PRODUCT_TABLE: [(usize, usize, i64, usize); 21] = [
    (2, 3, -1, 1),
    (1, 2, -1, 3),
    (3, 1, -1, 2),
    (4, 5, -1, 1),
    (1, 4, -1, 5),
    (5, 1, -1, 4),
    (6, 7, -1, 1),
    (1, 6, -1, 7),
    (7, 1, -1, 6),
    (4, 6, -1, 2),
    (2, 4, -1, 6),
    (6, 2, -1, 4),
    (5, 7, 1, 2),
    (2, 5, 1, 7),
    (7, 2, 1, 5),
    (5, 6, 1, 3),
    (3, 5, 1, 6),
    (6, 3, 1, 5),
    (4, 7, 1, 3),
    (3, 4, 1, 7),
    (7, 3, 1, 4),
];

/// Entries of [`PRODUCT_TABLE`] that fail for `phi`.
pub fn product_table_failures(phi: &RealSpinor) -> Vec<(usize, usize)> {
    PRODUCT_TABLE
        .iter()
        .filter(|(j, k, s, i)| basis_mul(*j, &basis_mul(*k, phi)) != basis_mul(*i, phi).scale(&ExactScalar::int(*s)))
        .map(|(j, k, _, _)| (*j, *k))
        .collect()
}

/// Clifford multiplication in the orthonormal frame (φ, e₁φ, …, e₇φ).
///
/// `e[i-1]` is the matrix of eᵢ in that frame; it is rational because the
/// frame of f₂ + f₄ is orthogonal with all norms equal.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorFrame {
    pub phi: RealSpinor,
    pub e: [ExactMatrix; DIM],
}

impl SpinorFrame {
    pub fn standard() -> Self {
        let psi = standard_spinor_unnormalized();
        let cols: Vec<RealSpinor> =
            std::iter::once(psi.clone()).chain((1..=DIM).map(|i| basis_mul(i, &psi))).collect();
        let qm = ExactMatrix::from_fn(8, 8, |r, c| cols[c].0[r].clone());
        let half = ExactScalar::frac(1, 2);
        let e = std::array::from_fn(|i| (&(&qm.transpose() * &f_action_matrices()[i]) * &qm).scale(&half));
        SpinorFrame { phi: standard_spinor(), e }
    }

    /// eᵢeⱼ in the frame.
    pub fn bivector(&self, i: usize, j: usize) -> ExactMatrix {
        &self.e[i - 1] * &self.e[j - 1]
    }

    /// The frame vector with index k (0 for φ, i for eᵢφ) as f-coordinates.
    pub fn frame_spinor(&self, k: usize) -> RealSpinor {
        if k == 0 {
            self.phi.clone()
        } else {
            basis_mul(k, &self.phi)
        }
    }
}

/// Result of [`metric_from_three_form`].
#[derive(Clone, Debug)]
pub struct InducedMetric {
    /// bᵢⱼ = ⅙·coefficient of e^{1…7} in (eᵢ⌟φ)∧(eⱼ⌟φ)∧φ.
    pub b: ExactMatrix,
    pub det_b: ExactScalar,
    /// g = b / det(b)^{1/9}, when the ninth root is exact.
    pub g: Option<ExactMatrix>,
    /// √det g, when exact: vol_g = volume · e^{1…7}.
    pub volume: Option<ExactScalar>,
}

impl InducedMetric {
    /// g positive-definite at a numeric point (b definite of either sign).
    pub fn is_positive_at(&self, asg: &Assignment) -> Result<bool, ExactError> {
        let m = self.b.eval(asg)?;
        let re = m.map(|z| z.re);
        let eig = nalgebra::SymmetricEigen::new(re).eigenvalues;
        Ok(eig.iter().all(|&x| x > 1e-12) || eig.iter().all(|&x| x < -1e-12))
    }
}

/// Ninth root of a scalar that is a single monomial with a perfect ninth
/// power coefficient and exponents divisible by 9.
fn monomial_root(x: &ExactScalar, k: u32) -> Option<ExactScalar> {
    if x.num_terms() != 1 {
        return None;
    }
    let (e, c) = x.terms().next().unwrap();
    if !c.im.is_zero() || e.iter().any(|p| p % k as i16 != 0) {
        return None;
    }
    let r = rational_root(&c.re, k)?;
    let mut out = ExactScalar::from_rational(r);
    for v in Var::all() {
        let p = e[v.index()];
        if p != 0 {
            out = &out * &ExactScalar::monomial(Gq::new(qi(1), qi(0)), &[(v, p / k as i16)]);
        }
    }
    Some(out)
}

pub fn metric_from_three_form(phi: &ThreeForm) -> Result<InducedMetric, ExactError> {
    let sixth = ExactScalar::frac(1, 6);
    let ints: Vec<SuperForm> = (1..=DIM).map(|i| interior(i, &phi.0)).collect();
    let mut b = ExactMatrix::zeros(DIM, DIM);
    for i in 0..DIM {
        for j in i..DIM {
            let w = ints[i].mul(&ints[j]).mul(&phi.0);
            let c = &w.coeff(V_TOP, 0) * &sixth;
            b.set(i, j, c.clone());
            b.set(j, i, c);
        }
    }
    let det_b = b.det()?;
    if det_b.is_zero() {
        return Err(ExactError::Shape("not a positive 3-form: degenerate bilinear form".into()));
    }
    let g = monomial_root(&det_b, 9).map(|r| b.scale(&r.inv().unwrap()));
    let volume = g.as_ref().and_then(|g| g.det().ok()).and_then(|d| {
        // √det g with the sign fixed positive on monomials with positive coefficient
        monomial_root(&d, 2).map(|r| {
            let pos = r.terms().next().map(|(_, c)| c.re.is_positive()).unwrap_or(true);
            if pos {
                r
            } else {
                -r
            }
        })
    });
    Ok(InducedMetric { b, det_b, g, volume })
}

/// dφ as a 4-form.
pub fn differential(alg: &NilpotentLieAlgebra, phi: &ThreeForm) -> SuperForm {
    alg.ce_differential(&phi.0)
}

pub fn is_closed(alg: &NilpotentLieAlgebra, phi: &ThreeForm) -> bool {
    differential(alg, phi).is_zero()
}

/// Certificate that dφ = 0 exactly on the relation locus: every
/// coefficient of dφ is a rational multiple of (lhs − rhs), and at least one
/// multiple is nonzero.
pub fn closedness_iff(alg: &NilpotentLieAlgebra, phi: &ThreeForm, var: Var, value: &ExactScalar) -> Certificate {
    let d = differential(alg, phi);
    let rel = &ExactScalar::var(var) - value;
    let mut multiples = Vec::new();
    let mut ok = !d.is_zero();
    for ((v, _), c) in d.terms() {
        // c = λ·rel with λ ∈ Q(i) iff c − λ·rel = 0 for λ read off one term
        let (lead_e, lead_c) = rel.terms().next().unwrap();
        let mut lam = None;
        for (e, cc) in c.terms() {
            if e == lead_e {
                lam = Some(cc / lead_c);
            }
        }
        let good = lam.as_ref().is_some_and(|l| (c - &rel.scale_gq(l)).is_zero());
        ok &= good;
        multiples.push(json!({
            "form": indices_of(*v),
            "coefficient": c.to_string(),
            "multiple_of_relation": good,
        }));
    }
    Certificate::new(
        "g2.closedness",
        format!("d(phi) = 0 if and only if {} = {}", var.name(), value),
        "closedness condition",
        ok,
        json!({"d_phi": multiples}),
    )
}

/// S with S(eᵢ) = Σⱼ S[i][j] eⱼ, from ∇ᵢφ = Ωᵢφ expanded in the frame.
#[derive(Clone, Debug, PartialEq)]
pub struct IntrinsicEndomorphism {
    pub s: ExactMatrix,
}

impl IntrinsicEndomorphism {
    pub fn is_antisymmetric(&self) -> bool {
        self.s.transpose() == -&self.s
    }

    /// Antisymmetry modulo the parameter relation of `alg`.
    pub fn is_antisymmetric_mod(&self, alg: &NilpotentLieAlgebra) -> bool {
        (0..DIM).all(|i| (0..DIM).all(|j| alg.is_zero_mod(&(self.s.get(i, j) + self.s.get(j, i)))))
    }

    /// The derivation induced on forms by x ↦ S(x), applied to `phi`.
    pub fn act_on(&self, phi: &SuperForm) -> SuperForm {
        // S·eᵏ = −Σᵢ S[i][k] eⁱ
        let mut out = SuperForm::zero();
        for ((v, e), c) in phi.terms() {
            let idx = indices_of(*v);
            for (r, &k) in idx.iter().enumerate() {
                for i in 1..=DIM {
                    let sik = self.s.get(i - 1, k - 1);
                    if sik.is_zero() {
                        continue;
                    }
                    let mut new_idx = idx.clone();
                    new_idx[r] = i;
                    out = out.add(&SuperForm::term(&new_idx, &[], -&(c * sik)).mul(&SuperForm::basis(0, *e, ExactScalar::one())));
                }
            }
        }
        out
    }
}

pub fn intrinsic_endomorphism(frame: &SpinorFrame, sc: &SpinConnection) -> Result<IntrinsicEndomorphism, ExactError> {
    let mut s = ExactMatrix::zeros(DIM, DIM);
    for i in 1..=DIM {
        let om = sc.as_matrix(i, &frame.e);
        if !om.get(0, 0).is_zero() {
            return Err(ExactError::Shape(format!("nabla_{i} phi has a component along phi")));
        }
        for j in 1..=DIM {
            s.set(i - 1, j - 1, om.get(j, 0).clone());
        }
    }
    Ok(IntrinsicEndomorphism { s })
}

/// Output of [`normalize_metric_h1`].
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<T> {
    /// The common value g₆₆/(g₁₁g₂₂) = g₇₇/(g₁₁g₃₃).
    pub a_squared: T,
    /// Columns are the images of E₁..E₇ under the composed automorphism
    /// (α, then β); the diagonal rescaling is recorded separately.
    pub automorphism: Vec<Vec<T>>,
    /// sᵢ² for the diagonal automorphism Eᵢ ↦ sᵢEᵢ with s₆ = s₁s₂, s₇ = s₁s₃.
    pub scaling_squares: Vec<T>,
    /// Gram matrix in the basis β(α(Eᵢ)).
    pub gram_after: Vec<Vec<T>>,
}

fn close<T: Num + Clone + PartialOrd>(x: &T, y: &T, tol: &T) -> bool {
    let d = x.clone() - y.clone();
    let nd = T::zero() - d.clone();
    d <= *tol && nd <= *tol
}

/// Bring a Gram matrix on h1 (unscaled frame, [E₁,E₂] = −E₆, [E₁,E₃] = −E₇)
/// to the form diag(1,1,1,1,1,a²,a²) up to automorphism.
///
/// `tol` is the comparison tolerance (zero for exact fields).
pub fn normalize_metric_h1<T: Num + Clone + PartialOrd>(g: &[Vec<T>], tol: &T) -> Result<NormalForm<T>, ExactError> {
    if g.len() != DIM || g.iter().any(|r| r.len() != DIM) {
        return Err(ExactError::Shape("Gram matrix must be 7x7".into()));
    }
    for i in 0..DIM {
        if g[i][i] <= T::zero() {
            return Err(ExactError::Shape("Gram matrix is not positive".into()));
        }
        for j in 0..DIM {
            if !close(&g[i][j], &g[j][i], tol) {
                return Err(ExactError::Shape("Gram matrix is not symmetric".into()));
            }
        }
    }
    let ip = |x: &[T], y: &[T]| -> T {
        let mut acc = T::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                acc = acc + x[i].clone() * g[i][j].clone() * y[j].clone();
            }
        }
        acc
    };
    let unit = |k: usize| -> Vec<T> { (0..DIM).map(|i| if i == k { T::one() } else { T::zero() }).collect() };
    let (g46, g47, g66, g67, g77) = (g[3][5].clone(), g[3][6].clone(), g[5][5].clone(), g[5][6].clone(), g[6][6].clone());
    let den = g66.clone() * g77.clone() - g67.clone() * g67.clone();
    if close(&den, &T::zero(), tol) {
        return Err(ExactError::Shape("degenerate (6,7) block".into()));
    }
    // α
    let mut alpha: Vec<Vec<T>> = (0..DIM).map(unit).collect();
    alpha[3][5] = T::zero() - (g46.clone() * g77.clone() - g47.clone() * g67.clone()) / den.clone();
    alpha[3][6] = T::zero() - (g47 * g66 - g46 * g67) / den;
    // β
    let a4 = alpha[3].clone();
    let n4 = ip(&a4, &a4);
    let mut beta = alpha.clone();
    for i in [0usize, 1, 2, 4] {
        let c = ip(&alpha[i], &a4) / n4.clone();
        beta[i] = (0..DIM).map(|k| unit(i)[k].clone() - c.clone() * a4[k].clone()).collect();
    }
    let gram_after: Vec<Vec<T>> = (0..DIM).map(|i| (0..DIM).map(|j| ip(&beta[i], &beta[j])).collect()).collect();
    for i in 0..DIM {
        for j in 0..DIM {
            if i != j && !close(&gram_after[i][j], &T::zero(), tol) {
                let what = if i == 3 || j == 3 { "alpha(E4) orthogonality" } else { "normal form on the complement" };
                return Err(ExactError::Shape(format!("off-pattern entry ({},{}) after alpha, beta: {what}", i + 1, j + 1)));
            }
        }
    }
    let d: Vec<T> = (0..DIM).map(|i| gram_after[i][i].clone()).collect();
    let a2_6 = d[5].clone() / (d[0].clone() * d[1].clone());
    let a2_7 = d[6].clone() / (d[0].clone() * d[2].clone());
    if !close(&a2_6, &a2_7, tol) {
        return Err(ExactError::Shape("b^2 != c^2: metric not induced by the closed family".into()));
    }
    let mut sq: Vec<T> = (0..5).map(|i| T::one() / d[i].clone()).collect();
    sq.push(sq[0].clone() * sq[1].clone());
    sq.push(sq[0].clone() * sq[2].clone());
    // columns of the automorphism: images of Eᵢ
    let automorphism = (0..DIM).map(|i| beta[i].clone()).collect();
    Ok(NormalForm { a_squared: a2_6, automorphism, scaling_squares: sq, gram_after })
}

/// All g2-module certificates for a case.
pub fn certificates(alg: &NilpotentLieAlgebra, frame: &SpinorFrame, sc: &SpinConnection) -> Vec<Certificate> {
    let mut out = Vec::new();
    let phi0 = ThreeForm::standard();
    let spinor = spinor_from_three_form(&phi0);
    let (sp_ok, table_fail, roundtrip) = match &spinor {
        Ok(s) => {
            let fails = product_table_failures(s);
            let rt = three_form_from_spinor(s).map(|f| f == phi0).unwrap_or(false);
            (true, fails, rt)
        }
        Err(_) => (false, vec![], false),
    };
    out.push(Certificate::new(
        "g2.spinor",
        "the compatibility system of the standard 3-form has a one-dimensional kernel; its unit generator satisfies all 21 product relations and induces the form back",
        "G2 spinor dictionary",
        sp_ok && table_fail.is_empty() && roundtrip,
        json!({
            "spinor_f_coordinates": spinor.as_ref().map(|s| s.0.iter().map(|x| x.to_string()).collect::<Vec<_>>()).unwrap_or_default(),
            "relation_failures": table_fail,
            "round_trip": roundtrip,
        }),
    ));
    let metric = metric_from_three_form(&phi0);
    let id_ok = metric.as_ref().ok().and_then(|m| m.g.clone()).is_some_and(|g| g == ExactMatrix::identity(DIM));
    out.push(Certificate::new(
        "g2.metric",
        "the standard 3-form induces the identity metric",
        "metric from a 3-form",
        id_ok,
        json!({"det_b": metric.as_ref().map(|m| m.det_b.to_string()).unwrap_or_default()}),
    ));
    match alg.case {
        Some(crate::liealg::Case::H2) => {
            let free = NilpotentLieAlgebra::h2_free();
            out.push(closedness_iff(&free, &phi0, Var::A, &(&ExactScalar::var(Var::B) + &ExactScalar::var(Var::C))));
        }
        _ => {
            let closed = is_closed(alg, &phi0);
            out.push(Certificate::new(
                "g2.closedness",
                "d(phi) = 0 for the standard form in the orthonormal frame",
                "closedness condition",
                closed,
                json!({"d_phi": differential(alg, &phi0).to_string()}),
            ));
        }
    }
    match intrinsic_endomorphism(frame, sc) {
        Ok(s) => {
            let entries: Vec<String> = (0..DIM)
                .flat_map(|i| (0..DIM).map(move |j| (i, j)))
                .filter(|&(i, j)| !s.s.get(i, j).is_zero())
                .map(|(i, j)| format!("S(e{}) has {} e{}", i + 1, alg.reduce(s.s.get(i, j)), j + 1))
                .collect();
            let anti = s.is_antisymmetric_mod(alg);
            let annih = s.act_on(&phi0.0).map_coeffs(|c| Ok(alg.reduce(c))).unwrap().is_zero();
            out.push(Certificate::new(
                "g2.intrinsic_endomorphism",
                "nabla_x phi = S(x) phi with S antisymmetric and S annihilating the 3-form",
                "intrinsic endomorphism",
                anti && annih,
                json!({"entries": entries, "antisymmetric": anti, "annihilates_phi": annih}),
            ));
        }
        Err(e) => out.push(Certificate::new(
            "g2.intrinsic_endomorphism",
            "nabla_x phi = S(x) phi",
            "intrinsic endomorphism",
            false,
            json!({"error": e.to_string()}),
        )),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_certificates_pass() {
        for case in [crate::liealg::Case::H1, crate::liealg::Case::H2] {
            let ctx = crate::dirac::DiracContext::for_case(case).unwrap();
            for c in certificates(&ctx.alg, &ctx.frame, &ctx.sc) {
                assert!(c.passed(), "{case:?} {} {}", c.id, c.witness);
            }
        }
    }

    #[test]
    fn standard_spinor_induces_standard_form() {
        let f = three_form_from_spinor(&standard_spinor()).unwrap();
        assert_eq!(f, ThreeForm::standard());
        assert!(three_form_from_spinor(&standard_spinor_unnormalized()).is_err());
    }

    #[test]
    fn spinor_from_standard_form() {
        let s = spinor_from_three_form(&ThreeForm::standard()).unwrap();
        assert!(s == standard_spinor() || s == standard_spinor().scale(&ExactScalar::int(-1)));
        assert!(product_table_failures(&s).is_empty());
        assert!(product_table_failures(&s.scale(&ExactScalar::int(-1))).is_empty());
        assert!(!product_table_failures(&RealSpinor::basis(1)).is_empty());
    }

    #[test]
    fn non_g2_form_rejected() {
        let f = ThreeForm::from_terms(&[((1, 2, 3), ExactScalar::one())]);
        assert!(spinor_from_three_form(&f).is_err());
    }

    #[test]
    fn standard_metric_is_identity() {
        let m = metric_from_three_form(&ThreeForm::standard()).unwrap();
        assert_eq!(m.g.unwrap(), ExactMatrix::identity(DIM));
        assert_eq!(m.volume.unwrap(), ExactScalar::one());
    }

    #[test]
    fn phi_a_metric_and_volume() {
        let a = ExactScalar::var(Var::A);
        let m = metric_from_three_form(&ThreeForm::phi_a(&a)).unwrap();
        let g = m.g.unwrap();
        let a2 = a.pow(2);
        let want = ExactMatrix::from_fn(DIM, DIM, |i, j| match (i == j, i >= 5) {
            (false, _) => ExactScalar::zero(),
            (true, false) => ExactScalar::one(),
            (true, true) => a2.clone(),
        });
        assert_eq!(g, want);
        assert_eq!(m.volume.unwrap(), a2);
    }

    #[test]
    fn frame_matrices_rational_and_clifford() {
        let fr = SpinorFrame::standard();
        for i in 0..DIM {
            for j in 0..DIM {
                let ac = &(&fr.e[i] * &fr.e[j]) + &(&fr.e[j] * &fr.e[i]);
                let want = if i == j { ExactMatrix::identity(8).scale(&ExactScalar::int(-2)) } else { ExactMatrix::zeros(8, 8) };
                assert_eq!(ac, want);
            }
            // e_i φ is the frame vector i
            assert_eq!(*fr.e[i].get(i + 1, 0), ExactScalar::one());
        }
    }

    #[test]
    fn normalize_identity_and_g46() {
        let id: Vec<Vec<Q>> = (0..7).map(|i| (0..7).map(|j| if i == j { qi(1) } else { qi(0) }).collect()).collect();
        let nf = normalize_metric_h1(&id, &qi(0)).unwrap();
        assert_eq!(nf.a_squared, qi(1));
        assert_eq!(nf.automorphism, id);

        let mut g = id.clone();
        g[3][5] = q(1, 3);
        g[5][3] = q(1, 3);
        g[5][5] = qi(2);
        g[6][6] = qi(2);
        let nf = normalize_metric_h1(&g, &qi(0)).unwrap();
        assert_eq!(nf.gram_after[3][5], qi(0));
        assert_eq!(nf.gram_after[3][6], qi(0));
        assert_eq!(nf.a_squared, qi(2));

        let mut bad = id.clone();
        bad[6][6] = qi(3);
        assert!(normalize_metric_h1(&bad, &qi(0)).is_err());
    }
}
