//! The Mathai–Quillen current of an invariant unit spinor ψ.
//!
//! With V the tangent model and E = Δ with orthonormal frame
//! φⱼ = eⱼφ (φ₀ = φ), superform index j+1 stands for φⱼ. After t ↦ t² the
//! current is ∫₀^∞ e^{−t²} ∫ᴮ ψ̂ exp(−R^S − t∇ψ) dt; only products
//! ψ̂ (R^S)ᵐ (∇ψ)ⁿ with 2m + n = 7 reach E-degree 8.

use std::collections::BTreeMap;

use serde_json::json;

use crate::certificate::Certificate;
use crate::exactnum::{q, ExactError, ExactMatrix, ExactScalar, Var, Q};
use crate::g2::{IntrinsicEndomorphism, SpinorFrame};
use crate::liealg::{koszul_christoffel, riemann_curvature, spin_connection, Case, InvariantMetric, NilpotentLieAlgebra, Riemann, SpinConnection, DIM};
use crate::superalg::{berezin, indices_of, super_exp, SuperForm, V_TOP};

/// (m, n) for the products (R^S)ᵐ(∇ψ)ⁿ that can reach top degree.
pub const DEGREE_PAIRS: [(u32, u32); 4] = [(0, 7), (1, 5), (2, 3), (3, 1)];

pub type SpinorCoords = [ExactScalar; 8];

/// Coordinates of φₖ = eₖφ in the frame.
pub fn frame_coords(k: usize) -> SpinorCoords {
    std::array::from_fn(|j| if j == k { ExactScalar::one() } else { ExactScalar::zero() })
}

/// Σⱼ sⱼ φⱼ as an E-form of degree one.
pub fn spinor_one_form(s: &SpinorCoords) -> SuperForm {
    let mut out = SuperForm::zero();
    for (j, c) in s.iter().enumerate() {
        out = out.add(&SuperForm::term(&[], &[j + 1], c.clone()));
    }
    out
}

/// Σᵢ eⁱ ⊗̂ S(eᵢ)φ = Σᵢⱼ S[i][j] eⁱ ⊗̂ φⱼ.
pub fn nabla_phi_superform(s: &IntrinsicEndomorphism) -> SuperForm {
    let mut out = SuperForm::zero();
    for i in 1..=DIM {
        for j in 1..=DIM {
            out = out.add(&SuperForm::term(&[i], &[j + 1], s.s.get(i - 1, j - 1).clone()));
        }
    }
    out
}

/// Σᵢ eⁱ ⊗̂ Ωᵢψ for an invariant spinor ψ with frame coordinates s.
pub fn nabla_spinor_superform(frame: &SpinorFrame, sc: &SpinConnection, s: &SpinorCoords) -> SuperForm {
    let mut out = SuperForm::zero();
    for i in 1..=DIM {
        let om = sc.as_matrix(i, &frame.e);
        for a in 0..8 {
            let c: ExactScalar = (0..8).map(|b| om.get(a, b) * &s[b]).sum();
            out = out.add(&SuperForm::term(&[i], &[a + 1], c));
        }
    }
    out
}

/// R^S(eᵢ,eⱼ) = ½ Σ_{k<l} g(R(eᵢ,eⱼ)eₖ, eₗ) eₖeₗ in the frame, i < j.
pub fn spin_curvature_from_riemann(frame: &SpinorFrame, r: &Riemann) -> BTreeMap<(usize, usize), ExactMatrix> {
    let half = ExactScalar::frac(1, 2);
    let mut out = BTreeMap::new();
    for i in 1..=DIM {
        for j in i + 1..=DIM {
            let mut m = ExactMatrix::zeros(8, 8);
            for k in 1..=DIM {
                for l in k + 1..=DIM {
                    let c = r.component(i, j, k, l);
                    if !c.is_zero() {
                        m = &m + &frame.bivector(k, l).scale(&(c * &half));
                    }
                }
            }
            out.insert((i, j), m);
        }
    }
    out
}

/// [Ωᵢ, Ωⱼ] − Ω_{[eᵢ,eⱼ]}: curvature of the spin connection on invariant
/// spinors, computed without the Riemann tensor.
pub fn spin_curvature_from_connection(alg: &NilpotentLieAlgebra, frame: &SpinorFrame, sc: &SpinConnection) -> BTreeMap<(usize, usize), ExactMatrix> {
    let om: Vec<ExactMatrix> = (1..=DIM).map(|i| sc.as_matrix(i, &frame.e)).collect();
    let mut out = BTreeMap::new();
    for i in 1..=DIM {
        for j in i + 1..=DIM {
            let mut m = &(&om[i - 1] * &om[j - 1]) - &(&om[j - 1] * &om[i - 1]);
            for (k, c) in alg.bracket_basis(i, j).iter().enumerate() {
                if !c.is_zero() {
                    m = &m - &om[k].scale(c);
                }
            }
            out.insert((i, j), m);
        }
    }
    out
}

/// Σ_{α<β} g(φ_α, Mφ_β) φ_α ∧ φ_β.
pub fn endomorphism_two_form(m: &ExactMatrix) -> SuperForm {
    let mut out = SuperForm::zero();
    for a in 0..8 {
        for b in a + 1..8 {
            out = out.add(&SuperForm::term(&[], &[a + 1, b + 1], m.get(a, b).clone()));
        }
    }
    out
}

/// Σ_{i<j} eⁱʲ ⊗̂ f_{ij}.
pub fn spin_curvature_superform(curv: &BTreeMap<(usize, usize), ExactMatrix>) -> SuperForm {
    let mut out = SuperForm::zero();
    for (&(i, j), m) in curv {
        out = out.add(&SuperForm::term(&[i, j], &[], ExactScalar::one()).mul(&endomorphism_two_form(m)));
    }
    out
}

/// V-index pairs on which R^S is nonzero.
pub fn curvature_v_pairs(r: &SuperForm) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = r
        .terms()
        .map(|((v, _), _)| {
            let ix = indices_of(*v);
            (ix[0], ix[1])
        })
        .collect();
    pairs.sort();
    pairs.dedup();
    pairs
}

/// Everything the current depends on for one algebra.
#[derive(Clone, Debug)]
pub struct MqContext {
    pub alg: NilpotentLieAlgebra,
    pub frame: SpinorFrame,
    pub sc: SpinConnection,
    pub curvature: SuperForm,
}

impl MqContext {
    pub fn new(alg: NilpotentLieAlgebra) -> Result<Self, ExactError> {
        let ch = koszul_christoffel(&alg, &InvariantMetric::orthonormal())?;
        let sc = spin_connection(&ch);
        let frame = SpinorFrame::standard();
        let curvature = spin_curvature_superform(&spin_curvature_from_riemann(&frame, &riemann_curvature(&alg, &ch)));
        Ok(MqContext { alg, frame, sc, curvature })
    }

    pub fn for_case(case: Case) -> Result<Self, ExactError> {
        Self::new(NilpotentLieAlgebra::for_case(case))
    }

    /// Both routes to R^S agree modulo the parameter relation.
    pub fn curvature_routes_agree(&self) -> bool {
        let other = spin_curvature_superform(&spin_curvature_from_connection(&self.alg, &self.frame, &self.sc));
        let diff = self.curvature.sub(&other);
        let ok = diff.terms().all(|(_, c)| self.alg.is_zero_mod(c));
        ok
    }

    pub fn nabla(&self, s: &SpinorCoords) -> SuperForm {
        nabla_spinor_superform(&self.frame, &self.sc, s)
    }
}

/// ∫ᴮ ψ̂ (R^S)ᵐ (∇ψ)ⁿ for one (m, n).
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeTerm {
    pub m: u32,
    pub n: u32,
    /// V-mask → coefficient.
    pub integral: BTreeMap<u8, ExactScalar>,
    /// Union of V-supports of the product before integration.
    pub v_support: u8,
}

impl DegreeTerm {
    pub fn label(&self) -> String {
        match (self.m, self.n) {
            (0, n) => format!("(nabla psi)^{n}"),
            (1, n) => format!("R * (nabla psi)^{n}"),
            (m, 1) => format!("R^{m} * nabla psi"),
            (m, n) => format!("R^{m} * (nabla psi)^{n}"),
        }
    }

    pub fn top(&self) -> ExactScalar {
        self.integral.get(&V_TOP).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn vanishes(&self) -> bool {
        self.integral.values().all(|c| c.is_zero())
    }
}

fn v_support(x: &SuperForm) -> u8 {
    x.terms().fold(0, |m, ((v, _), _)| m | v)
}

/// The four products, after checking [R, P] = 0.
pub fn mq_degree_terms(r: &SuperForm, p: &SuperForm, psi_hat: &SuperForm) -> Result<Vec<DegreeTerm>, ExactError> {
    if !r.supercommutator(p).is_zero() {
        return Err(ExactError::Shape("curvature and nabla psi do not commute".into()));
    }
    let mut r_pow = vec![SuperForm::one()];
    for k in 1..=3 {
        r_pow.push(r_pow[k - 1].mul(r));
    }
    let mut p_pow = vec![SuperForm::one()];
    for k in 1..=7 {
        p_pow.push(p_pow[k - 1].mul(p));
    }
    Ok(DEGREE_PAIRS
        .iter()
        .map(|&(m, n)| {
            let prod = psi_hat.mul(&r_pow[m as usize]).mul(&p_pow[n as usize]);
            DegreeTerm { m, n, integral: berezin(&prod), v_support: v_support(&prod) }
        })
        .collect())
}

/// ∫₀^∞ tⁿ e^{−t²} dt = ½Γ((n+1)/2) as (rational r, half-power flag h):
/// the value is r·√π when h is set, r otherwise.
pub fn gaussian_moment(n: u32) -> (Q, bool) {
    if n % 2 == 1 {
        let k = (n as i64 - 1) / 2;
        let f: i64 = (1..=k).product();
        (q(f, 2), false)
    } else {
        // Γ(k + ½) = (2k)!/(4ᵏ k!) √π
        let k = n as i64 / 2;
        let mut r = q(1, 2);
        for j in 1..=k {
            r *= q(2 * j - 1, 2);
        }
        (r, true)
    }
}

/// 2∫ φ*ψ per unit covolume: `value + sqrt_pi_value·√π`.
#[derive(Clone, Debug, PartialEq)]
pub struct MqCurrent {
    pub terms: Vec<DegreeTerm>,
    /// Top-degree coefficient of the integrand as a polynomial in t
    /// (without e^{−t²}).
    pub integrand: ExactScalar,
    pub value: ExactScalar,
    pub sqrt_pi_value: ExactScalar,
}

impl MqCurrent {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero() && self.sqrt_pi_value.is_zero()
    }
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// Assemble the current from the degree terms:
/// exp(−R − tP) contributes (−1)^{m+n} tⁿ/(m! n!) to (m, n).
pub fn current_from_terms(terms: Vec<DegreeTerm>) -> MqCurrent {
    let t = ExactScalar::var(Var::T);
    let mut integrand = ExactScalar::zero();
    let mut value = ExactScalar::zero();
    let mut sqrt_pi_value = ExactScalar::zero();
    for term in &terms {
        let sign = if (term.m + term.n) % 2 == 0 { 1 } else { -1 };
        let c = term.top().scale(&q(sign, factorial(term.m) * factorial(term.n)));
        integrand = &integrand + &(&c * &t.pow(term.n));
        let (r, half) = gaussian_moment(term.n);
        let contrib = c.scale(&(r * q(2, 1)));
        if half {
            sqrt_pi_value = &sqrt_pi_value + &contrib;
        } else {
            value = &value + &contrib;
        }
    }
    MqCurrent { terms, integrand, value, sqrt_pi_value }
}

pub fn mq_current_with(r: &SuperForm, p: &SuperForm, psi_hat: &SuperForm) -> Result<MqCurrent, ExactError> {
    Ok(current_from_terms(mq_degree_terms(r, p, psi_hat)?))
}

pub fn mq_current(ctx: &MqContext, s: &SpinorCoords) -> Result<MqCurrent, ExactError> {
    mq_current_with(&ctx.curvature, &ctx.nabla(s), &spinor_one_form(s))
}

/// The top coefficient of ∫ᴮ ψ̂ exp(−R − tP) from the full exponential
/// series, for comparison with [`MqCurrent::integrand`].
pub fn exponential_route_integrand(r: &SuperForm, p: &SuperForm, psi_hat: &SuperForm) -> Result<ExactScalar, ExactError> {
    let x = r.add(&p.scale(&ExactScalar::var(Var::T))).scale(&ExactScalar::int(-1));
    let ex = super_exp(&x, 7)?;
    let top = berezin(&psi_hat.mul(&ex.form).e_degree_part(8));
    Ok(top.get(&V_TOP).cloned().unwrap_or_else(ExactScalar::zero))
}

/// P = Σᵢ eⁱ ⊗̂ φᵢ, whose seventh power pairs with φ₀ to a nonzero top form.
pub fn positive_control() -> SuperForm {
    let mut p = SuperForm::zero();
    for i in 1..=DIM {
        p = p.add(&SuperForm::term(&[i], &[i + 1], ExactScalar::one()));
    }
    p
}

/// V-directions that no term may touch, when the vanishing is structural.
pub fn excluded_directions(case: Option<Case>) -> u8 {
    match case {
        Some(Case::H1) => 0b0001_1000,
        Some(Case::H2) => 0b0100_0000,
        None => 0,
    }
}

/// The current of the frame spinor φₖ vanishes, with the support argument.
pub fn mq_certificate(ctx: &MqContext, k: usize) -> Result<Certificate, ExactError> {
    let s = frame_coords(k);
    let cur = mq_current(ctx, &s)?;
    let excluded = excluded_directions(ctx.alg.case);
    let nabla = ctx.nabla(&s);
    let support = v_support(&ctx.curvature) | v_support(&nabla);
    let structural = support & excluded == 0;
    let terms_zero = cur.terms.iter().all(|t| t.vanishes());
    let routes = ctx.curvature_routes_agree();
    let ok = cur.is_zero() && terms_zero && structural && routes;
    let name = if k == 0 { "phi".to_string() } else { format!("e{k}phi") };
    Ok(Certificate::new(
        format!("mq.current.{name}"),
        format!("the Mathai-Quillen current of {name} vanishes"),
        "Mathai-Quillen current",
        ok,
        json!({
            "terms": cur.terms.iter().map(|t| json!({
                "product": t.label(),
                "berezin_top": t.top().to_string(),
                "v_support": indices_of(t.v_support),
            })).collect::<Vec<_>>(),
            "v_support": indices_of(support),
            "excluded_directions": indices_of(excluded),
            "curvature_pairs": curvature_v_pairs(&ctx.curvature),
            "curvature_routes_agree": routes,
            "nabla_psi": nabla.map_coeffs(|c| ctx.alg.impose(c))?.to_string(),
            "value": cur.value.to_string(),
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> ExactScalar {
        ExactScalar::parse(s).unwrap()
    }

    #[test]
    fn h1_nabla_phi_matches_closed_form() {
        let ctx = MqContext::for_case(Case::H1).unwrap();
        let p = ctx.nabla(&frame_coords(0));
        let want = SuperForm::term(&[2], &[8], sym("-a/4"))
            .add(&SuperForm::term(&[3], &[7], sym("a/4")))
            .add(&SuperForm::term(&[6], &[4], sym("-a/4")))
            .add(&SuperForm::term(&[7], &[3], sym("a/4")));
        assert_eq!(p, want);
        let s = crate::g2::intrinsic_endomorphism(&ctx.frame, &ctx.sc).unwrap();
        assert_eq!(nabla_phi_superform(&s), p);
    }

    #[test]
    fn h1_curvature_pairs() {
        let ctx = MqContext::for_case(Case::H1).unwrap();
        assert!(ctx.curvature_routes_agree());
        let pairs = curvature_v_pairs(&ctx.curvature);
        let want = vec![(1, 2), (1, 3), (1, 6), (1, 7), (2, 3), (2, 6), (2, 7), (3, 6), (3, 7), (6, 7)];
        assert_eq!(pairs, want);
    }

    #[test]
    fn abelian_is_flat() {
        let ctx = MqContext::new(NilpotentLieAlgebra::abelian()).unwrap();
        assert!(ctx.curvature.is_zero());
        assert!(ctx.nabla(&frame_coords(0)).is_zero());
    }

    #[test]
    fn gaussian_moments() {
        assert_eq!(gaussian_moment(0), (q(1, 2), true));
        assert_eq!(gaussian_moment(1), (q(1, 2), false));
        assert_eq!(gaussian_moment(2), (q(1, 4), true));
        assert_eq!(gaussian_moment(7), (q(3, 1), false));
    }

    #[test]
    fn positive_control_nonzero() {
        let terms = mq_degree_terms(&SuperForm::zero(), &positive_control(), &spinor_one_form(&frame_coords(0))).unwrap();
        assert!(!terms[0].top().is_zero());
        assert!(terms[1..].iter().all(|t| t.vanishes()));
    }

    #[test]
    fn h1_current_vanishes() {
        let ctx = MqContext::for_case(Case::H1).unwrap();
        for k in [0, 1, 4, 5] {
            let c = mq_certificate(&ctx, k).unwrap();
            assert!(c.passed(), "{k}: {}", c.witness);
        }
    }

    #[test]
    fn h2_nabla_support_and_current() {
        let ctx = MqContext::for_case(Case::H2).unwrap();
        assert!(ctx.curvature_routes_agree());
        let p = ctx.nabla(&frame_coords(0)).map_coeffs(|c| ctx.alg.impose(c)).unwrap();
        let want = SuperForm::term(&[1], &[7], sym("c/4"))
            .add(&SuperForm::term(&[2], &[6], sym("-b/4")))
            .add(&SuperForm::term(&[3], &[5], sym("(b+c)/4")))
            .add(&SuperForm::term(&[4], &[4], sym("-(b+c)/4")))
            .add(&SuperForm::term(&[5], &[3], sym("b/4")))
            .add(&SuperForm::term(&[6], &[2], sym("-c/4")));
        assert_eq!(p, want);
        assert_eq!(v_support(&ctx.curvature) & 0b0100_0000, 0);
        for k in [0, 7] {
            let c = mq_certificate(&ctx, k).unwrap();
            assert!(c.passed(), "{k}: {}", c.witness);
        }
    }

    #[test]
    fn exponential_route_matches_terms() {
        let ctx = MqContext::for_case(Case::H1).unwrap();
        let s = frame_coords(0);
        let (r, p, hat) = (ctx.curvature.clone(), ctx.nabla(&s), spinor_one_form(&s));
        let via_exp = exponential_route_integrand(&r, &p, &hat).unwrap();
        assert_eq!(via_exp, mq_current_with(&r, &p, &hat).unwrap().integrand);
        let pc = positive_control();
        let zero = SuperForm::zero();
        let via_exp = exponential_route_integrand(&zero, &pc, &hat).unwrap();
        let cur = mq_current_with(&zero, &pc, &hat).unwrap();
        assert!(!via_exp.is_zero());
        assert_eq!(via_exp, cur.integrand);
        assert!(!cur.value.is_zero());
    }
}
