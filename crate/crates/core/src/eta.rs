//! η-invariants: an orientation-reversing isometric automorphism T, its
//! action on forms, and the odd-signature operator on invariant even forms.
//!
//! T anticommutes with ⋆ and commutes with d, hence BT = −TB and the
//! spectrum of B is symmetric. For D the symmetry comes from the even
//! characteristic polynomials certified per sector in [`crate::dirac`].

use nalgebra::DMatrix;
use serde_json::json;

use crate::certificate::Certificate;
use crate::dirac::{character_matrix, invariant_dirac_matrix, mode_sweep, odd_coefficient_failures, symbolic_character, symmetry_defect, DiracContext, ModeSweep};
use crate::exactnum::{Assignment, ExactError, ExactMatrix, ExactScalar};
use crate::liealg::{basis_vector, hodge_star, Case, LatticeSpec, NilpotentLieAlgebra, ParamPoint, DIM};
use crate::superalg::{degree, SuperForm, V_TOP};

/// A linear map of the Lie algebra: column i is T̃eᵢ.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryMap {
    pub t: ExactMatrix,
}

impl IsometryMap {
    pub fn diagonal(signs: [i64; DIM]) -> Self {
        IsometryMap { t: ExactMatrix::from_fn(DIM, DIM, |i, j| if i == j { ExactScalar::int(signs[i]) } else { ExactScalar::zero() }) }
    }

    pub fn identity() -> Self {
        Self::diagonal([1; DIM])
    }

    /// eᵢ ↔ eⱼ.
    pub fn swap(i: usize, j: usize) -> Self {
        let mut t = ExactMatrix::identity(DIM);
        t.set(i - 1, i - 1, ExactScalar::zero());
        t.set(j - 1, j - 1, ExactScalar::zero());
        t.set(i - 1, j - 1, ExactScalar::one());
        t.set(j - 1, i - 1, ExactScalar::one());
        IsometryMap { t }
    }

    pub fn apply(&self, v: &[ExactScalar; DIM]) -> [ExactScalar; DIM] {
        let w = self.t.mul_vec(v);
        std::array::from_fn(|i| w[i].clone())
    }

    /// Pullback on forms: T*eᵏ = Σᵢ T[k][i] eⁱ, extended multiplicatively.
    pub fn pullback(&self, form: &SuperForm) -> SuperForm {
        let one_forms: Vec<SuperForm> = (0..DIM)
            .map(|k| {
                (0..DIM).fold(SuperForm::zero(), |acc, i| acc.add(&SuperForm::term(&[i + 1], &[], self.t.get(k, i).clone())))
            })
            .collect();
        let mut out = SuperForm::zero();
        for ((v, e), c) in form.terms() {
            let mut piece = SuperForm::scalar(c.clone());
            for k in crate::superalg::indices_of(*v) {
                piece = piece.mul(&one_forms[k - 1]);
            }
            out = out.add(&piece.mul(&SuperForm::basis(0, *e, ExactScalar::one())));
        }
        out
    }
}

/// h1: e₄ ↦ −e₄; h2: e₇ ↦ −e₇.
pub fn standard_isometry(case: Case) -> IsometryMap {
    let mut s = [1; DIM];
    match case {
        Case::H1 => s[3] = -1,
        Case::H2 => s[6] = -1,
    }
    IsometryMap::diagonal(s)
}

/// Pairs (i, j) with T[eᵢ,eⱼ] ≠ [Teᵢ,Teⱼ].
pub fn automorphism_failures(alg: &NilpotentLieAlgebra, t: &IsometryMap) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=DIM {
        for j in i + 1..=DIM {
            let lhs = t.apply(&alg.bracket_basis(i, j));
            let rhs = alg.bracket(&t.apply(&basis_vector(i)), &t.apply(&basis_vector(j)));
            if lhs.iter().zip(&rhs).any(|(x, y)| !alg.eq_mod(x, y)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Isometry (orthonormal frame), det = −1, automorphism, and T(ℤ⁷) = ℤ⁷
/// for the basis lattice.
pub fn check_orientation_reversing_isometry(alg: &NilpotentLieAlgebra, t: &IsometryMap) -> Result<Certificate, ExactError> {
    let isometry = &t.t.transpose() * &t.t == ExactMatrix::identity(DIM);
    let det = t.t.det()?;
    let reversing = det == ExactScalar::int(-1);
    let vol = SuperForm::basis(V_TOP, 0, ExactScalar::one());
    let vol_flips = t.pullback(&vol) == vol.scale(&ExactScalar::int(-1));
    let aut = automorphism_failures(alg, t);
    let integral = (0..DIM).all(|i| (0..DIM).all(|j| t.t.get(i, j).as_rational().is_some_and(|r| r.is_integer())));
    let lattice = integral && (det == ExactScalar::one() || reversing);
    let ok = isometry && reversing && vol_flips && aut.is_empty() && lattice;
    Ok(Certificate::new(
        "eta.isometry",
        "T is an orientation-reversing isometric automorphism preserving the basis lattice",
        "orientation-reversing isometry",
        ok,
        json!({
            "t": (0..DIM).map(|i| (0..DIM).map(|j| t.t.get(i, j).to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "isometry": isometry,
            "det": det.to_string(),
            "pullback_vol_is_minus_vol": vol_flips,
            "automorphism_failures": aut,
            "preserves_basis_lattice": lattice,
        }),
    ))
}

/// Masks of even degree in increasing (degree, mask) order: 1 + 21 + 35 + 7.
pub fn even_basis() -> Vec<u8> {
    let mut b: Vec<u8> = (0..=V_TOP).filter(|m| degree(*m) % 2 == 0).collect();
    b.sort_by_key(|m| (degree(*m), *m));
    b
}

/// Bω = (−1)^{p+1}(⋆d − d⋆)ω for deg ω = 2p.
pub fn odd_signature(alg: &NilpotentLieAlgebra, form: &SuperForm) -> SuperForm {
    let mut out = SuperForm::zero();
    for p in 0..=3u32 {
        let part = form.v_degree_part(2 * p);
        if part.is_zero() {
            continue;
        }
        let x = hodge_star(&alg.ce_differential(&part)).sub(&alg.ce_differential(&hodge_star(&part)));
        out = out.add(&x.scale(&ExactScalar::int(if p % 2 == 0 { -1 } else { 1 })));
    }
    out
}

/// Matrix of a form operator on the even basis; column j is the image of
/// the j-th basis form.
pub fn even_block(op: impl Fn(&SuperForm) -> SuperForm) -> ExactMatrix {
    let basis = even_basis();
    let mut m = ExactMatrix::zeros(basis.len(), basis.len());
    for (j, &mj) in basis.iter().enumerate() {
        let img = op(&SuperForm::basis(mj, 0, ExactScalar::one()));
        for (i, &mi) in basis.iter().enumerate() {
            let c = img.coeff(mi, 0);
            if !c.is_zero() {
                m.set(i, j, c);
            }
        }
    }
    m
}

pub fn odd_signature_matrix(alg: &NilpotentLieAlgebra) -> ExactMatrix {
    even_block(|f| odd_signature(alg, f))
}

/// Basis forms (all degrees) where T⋆ ≠ −⋆T, and where Td ≠ dT.
pub fn hodge_and_d_failures(alg: &NilpotentLieAlgebra, t: &IsometryMap) -> (Vec<u8>, Vec<u8>) {
    let mut star = Vec::new();
    let mut d = Vec::new();
    for m in 0..=V_TOP {
        let f = SuperForm::basis(m, 0, ExactScalar::one());
        if t.pullback(&hodge_star(&f)).add(&hodge_star(&t.pullback(&f))).terms().any(|(_, c)| !alg.is_zero_mod(c)) {
            star.push(m);
        }
        if t.pullback(&alg.ce_differential(&f)).sub(&alg.ce_differential(&t.pullback(&f))).terms().any(|(_, c)| !alg.is_zero_mod(c)) {
            d.push(m);
        }
    }
    (star, d)
}

/// BT + TB on the even block, entrywise modulo the relation; returns the
/// columns where it fails.
pub fn anticommutation_failures(alg: &NilpotentLieAlgebra, b: &ExactMatrix, t: &IsometryMap) -> Vec<usize> {
    let tm = even_block(|f| t.pullback(f));
    let s = &(b * &tm) + &(&tm * b);
    (0..s.ncols()).filter(|&j| (0..s.nrows()).any(|i| !alg.is_zero_mod(s.get(i, j)))).collect()
}

/// Sorted eigenvalues of the real symmetric B-block at numeric parameters.
pub fn odd_signature_spectrum(alg: &NilpotentLieAlgebra, b: &ExactMatrix, asg: &Assignment) -> Result<Vec<f64>, ExactError> {
    let asg = alg.complete_assignment(asg)?;
    let c = b.eval(&asg)?;
    let m = DMatrix::from_fn(c.nrows(), c.ncols(), |i, j| c[(i, j)].re);
    let resid = (&m - m.transpose()).amax();
    if resid > 1e-9 {
        return Err(ExactError::Shape(format!("B-block not symmetric (residual {resid:.3e})")));
    }
    let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    Ok(ev)
}

/// Every |λ| > 1e-10 has −λ with the same multiplicity, within `tol`.
pub fn spectrum_paired(ev: &[f64], tol: f64) -> bool {
    symmetry_defect(ev) < tol
}

/// Parity of a single Hermitian matrix: its characteristic polynomial is
/// even. Used per Dirac sector and as a negative control.
pub fn parity_certificate(ctx: &DiracContext, id: &str, m: &ExactMatrix) -> Result<Certificate, ExactError> {
    let odd = odd_coefficient_failures(ctx, m)?;
    Ok(Certificate::new(
        id,
        "the characteristic polynomial has no odd-degree terms",
        "spectral symmetry of D",
        odd.is_empty(),
        json!({"odd_coefficient_failures": odd}),
    ))
}

/// Result of [`eta_vanishing_certificate`].
#[derive(Clone, Debug)]
pub struct EtaReport {
    pub certificates: Vec<Certificate>,
    pub eta_d: i64,
    pub eta_b: i64,
}

impl EtaReport {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed())
    }
}

/// Checks that do not depend on the parameter values: T is an
/// orientation-reversing isometric automorphism, T⋆ = −⋆T, Td = dT,
/// BT = −TB, and the invariant and symbolic character matrices have even
/// characteristic polynomials.
pub fn eta_symbolic_certificates(case: Case) -> Result<Vec<Certificate>, ExactError> {
    let alg = NilpotentLieAlgebra::for_case(case);
    let t = standard_isometry(case);
    let mut certs = vec![check_orientation_reversing_isometry(&alg, &t)?];

    let (star, d) = hodge_and_d_failures(&alg, &t);
    certs.push(Certificate::new(
        "eta.t_star_d",
        "T anticommutes with the Hodge star and commutes with d on all 128 basis forms",
        "orientation-reversing isometry",
        star.is_empty() && d.is_empty(),
        json!({"star_failures": star, "d_failures": d}),
    ));

    let b = odd_signature_matrix(&alg);
    let fails = anticommutation_failures(&alg, &b, &t);
    let symmetric = b.transpose() == b;
    certs.push(Certificate::new(
        "eta.b_anticommutes",
        "B T = -T B on the 64 invariant even forms, and B is symmetric",
        "odd-signature operator",
        fails.is_empty() && symmetric,
        json!({"failing_columns": fails, "dimension": b.nrows(), "symmetric": symmetric}),
    ));

    let ctx = DiracContext::new(alg)?;
    certs.push(parity_certificate(&ctx, "eta.parity.invariant", &invariant_dirac_matrix(&ctx))?);
    certs.push(parity_certificate(&ctx, "eta.parity.character_symbolic", &character_matrix(&ctx, &symbolic_character(case)))?);
    Ok(certs)
}

/// Checks at one rational parameter point: the B-block spectrum is
/// paired, and every enumerated sector matrix has an even characteristic
/// polynomial.
pub fn eta_point_certificates(params: &ParamPoint, sweep: &ModeSweep) -> Result<Vec<Certificate>, ExactError> {
    let alg = NilpotentLieAlgebra::for_case(params.case);
    let b = odd_signature_matrix(&alg);
    let ev = odd_signature_spectrum(&alg, &b, &params.assignment())?;
    let defect = symmetry_defect(&ev);
    let nonzero = ev.iter().filter(|x| x.abs() > 1e-10).count();
    let mut certs = vec![Certificate::new(
        "eta.b_spectrum",
        "the invariant B-block spectrum is symmetric about 0 within 1e-8",
        "odd-signature operator",
        defect < 1e-8,
        json!({"symmetry_defect": defect, "nonzero_eigenvalues": nonzero, "params": params.strings()}),
    )];
    let fmt = |v: &[[i64; DIM]]| v.iter().map(|l| format!("{l:?}")).collect::<Vec<_>>();
    certs.push(Certificate::new(
        "eta.parity.modes",
        format!(
            "even characteristic polynomials on all {} enumerated sectors up to cutoff {}",
            sweep.character_modes + sweep.infinite_modes,
            sweep.cutoff
        ),
        "spectral symmetry of D",
        sweep.parity_failures.is_empty(),
        json!({
            "character_modes": sweep.character_modes,
            "infinite_modes": sweep.infinite_modes,
            "failing": fmt(&sweep.parity_failures),
        }),
    ));
    Ok(certs)
}

/// η(B) = 0 through T, η(D) = 0 through even characteristic polynomials on
/// every sector: the invariant one, the character sector with symbolic
/// β, and each enumerated mode up to `cutoff` at `params`.
pub fn eta_vanishing_certificate(params: &ParamPoint, lattice: &LatticeSpec, cutoff: u32) -> Result<EtaReport, ExactError> {
    let mut certs = eta_symbolic_certificates(params.case)?;
    let sweep = mode_sweep(params, lattice, cutoff, DEFAULT_TRUNCATION)?;
    certs.extend(eta_point_certificates(params, &sweep)?);
    Ok(EtaReport { certificates: certs, eta_d: 0, eta_b: 0 })
}

/// Hermite blocks kept in the numeric spectra of infinite modes.
pub const DEFAULT_TRUNCATION: usize = 4;
