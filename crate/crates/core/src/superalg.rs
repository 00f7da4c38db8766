//! The graded algebra ΛV* ⊗̂ ΛE* with V = ℝ⁷ and E = ℝ⁸.
//!
//! A basis element is a pair of bitmasks (V-subset, E-subset); bit k−1
//! stands for eᵏ (resp. fᵏ). Products follow
//! (a₁⊗b₁)(a₂⊗b₂) = (−1)^{|b₁||a₂|} a₁a₂ ⊗ b₁b₂ with shuffle signs inside
//! each exterior factor.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::exactnum::{q, ExactError, ExactScalar, Var};

pub const V_DIM: usize = 7;
pub const E_DIM: usize = 8;
pub const V_TOP: u8 = 0x7f;
pub const E_TOP: u8 = 0xff;

/// Sign of eᴵ ∧ eᴶ = ±e^{I∪J}, or None when I ∩ J ≠ ∅.
pub fn wedge_sign(i: u8, j: u8) -> Option<i8> {
    if i & j != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        swaps += ((i as u16) >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps % 2 == 0 { 1 } else { -1 })
}

/// Bitmask and sorting sign for a list of 1-based indices; None on repeats.
pub fn mask_of(indices: &[usize]) -> Option<(u8, i8)> {
    let mut mask = 0u8;
    let mut sign = 1i8;
    for &k in indices {
        assert!((1..=8).contains(&k), "index {k} out of range");
        let s = wedge_sign(mask, 1 << (k - 1))?;
        sign *= s;
        mask |= 1 << (k - 1);
    }
    Some((mask, sign))
}

pub fn indices_of(mask: u8) -> Vec<usize> {
    (0..8).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

pub fn degree(mask: u8) -> u32 {
    mask.count_ones()
}

/// An element of ΛV* ⊗̂ ΛE*.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SuperForm {
    terms: BTreeMap<(u8, u8), ExactScalar>,
}

impl SuperForm {
    pub fn zero() -> Self {
        SuperForm::default()
    }

    pub fn one() -> Self {
        Self::scalar(ExactScalar::one())
    }

    pub fn scalar(c: ExactScalar) -> Self {
        Self::basis(0, 0, c)
    }

    /// c · eⱽ ⊗ fᴱ for masks.
    pub fn basis(v: u8, e: u8, c: ExactScalar) -> Self {
        assert!(v <= V_TOP, "V-mask out of range");
        let mut out = SuperForm::zero();
        out.add_term(v, e, c);
        out
    }

    /// c · e^{v₁}∧…⊗f^{e₁}∧… with unsorted 1-based indices.
    pub fn term(v: &[usize], e: &[usize], c: ExactScalar) -> Self {
        assert!(v.iter().all(|&k| k <= V_DIM), "V index out of range");
        let (Some((vm, vs)), Some((em, es))) = (mask_of(v), mask_of(e)) else {
            return SuperForm::zero();
        };
        let c = if vs * es < 0 { -c } else { c };
        Self::basis(vm, em, c)
    }

    fn add_term(&mut self, v: u8, e: u8, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((v, e)) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u8, u8), &ExactScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, v: u8, e: u8) -> ExactScalar {
        self.terms.get(&(v, e)).cloned().unwrap_or_default()
    }

    /// Union of the V-indices occurring in any term.
    pub fn v_support(&self) -> u8 {
        self.terms.keys().fold(0, |acc, (v, _)| acc | v)
    }

    pub fn e_support(&self) -> u8 {
        self.terms.keys().fold(0, |acc, (_, e)| acc | e)
    }

    /// (V-degree, E-degree) if homogeneous.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|(v, e)| (degree(*v), degree(*e)));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Total parity if homogeneous in parity.
    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|(v, e)| (degree(*v) + degree(*e)) % 2);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        let mut out = SuperForm::zero();
        for ((v, e), x) in &self.terms {
            out.add_term(*v, *e, x * c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&ExactScalar) -> Result<ExactScalar, ExactError>) -> Result<Self, ExactError> {
        let mut out = SuperForm::zero();
        for ((v, e), x) in &self.terms {
            out.add_term(*v, *e, f(x)?);
        }
        Ok(out)
    }

    pub fn add(&self, other: &SuperForm) -> Self {
        let mut out = self.clone();
        for ((v, e), x) in &other.terms {
            out.add_term(*v, *e, x.clone());
        }
        out
    }

    pub fn sub(&self, other: &SuperForm) -> Self {
        self.add(&other.scale(&ExactScalar::int(-1)))
    }

    /// Terms with E-degree exactly `k`.
    pub fn v_degree_part(&self, k: u32) -> Self {
        SuperForm {
            terms: self.terms.iter().filter(|((v, _), _)| degree(*v) == k).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    pub fn e_degree_part(&self, k: u32) -> Self {
        SuperForm {
            terms: self.terms.iter().filter(|((_, e), _)| degree(*e) == k).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// Terms with V-degree at most `cap`.
    pub fn v_truncate(&self, cap: u32) -> Self {
        SuperForm {
            terms: self.terms.iter().filter(|((v, _), _)| degree(*v) <= cap).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// The product with the sign rule.
    pub fn mul(&self, other: &SuperForm) -> Self {
        let mut out = SuperForm::zero();
        for ((v1, e1), x) in &self.terms {
            for ((v2, e2), y) in &other.terms {
                let (Some(sv), Some(se)) = (wedge_sign(*v1, *v2), wedge_sign(*e1, *e2)) else {
                    continue;
                };
                let rule = if (degree(*e1) * degree(*v2)) % 2 == 0 { 1 } else { -1 };
                let c = x * y;
                out.add_term(v1 | v2, e1 | e2, if sv * se * rule > 0 { c } else { -c });
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = SuperForm::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Super-commutator xy − (−1)^{|x||y|}yx for parity-homogeneous inputs.
    pub fn supercommutator(&self, other: &SuperForm) -> Self {
        let s = match (self.parity(), other.parity()) {
            (Some(p), Some(q)) if p * q % 2 == 1 => -1,
            _ => 1,
        };
        let yx = other.mul(self);
        self.mul(other).sub(&yx.scale(&ExactScalar::int(s)))
    }

    /// Substitute an indeterminate in every coefficient.
    pub fn subst(&self, var: Var, value: &ExactScalar) -> Result<Self, ExactError> {
        self.map_coeffs(|c| c.subst(var, value))
    }
}

/// exp(x) written as e^{scalar_exponent} · form, where `form` is the
/// finite exponential series of the nilpotent part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpForm {
    pub scalar_exponent: ExactScalar,
    pub form: SuperForm,
}

impl ExpForm {
    pub fn mul(&self, other: &ExpForm) -> ExpForm {
        ExpForm {
            scalar_exponent: &self.scalar_exponent + &other.scalar_exponent,
            form: self.form.mul(&other.form),
        }
    }
}

/// The exponential Σ xᵏ/k!, truncated at V-degree `v_degree_cap`.
///
/// The degree-(0,0) component is kept symbolically in the exponent; the rest
/// has positive total degree and is therefore nilpotent.
pub fn super_exp(x: &SuperForm, v_degree_cap: u32) -> Result<ExpForm, ExactError> {
    let scalar = x.coeff(0, 0);
    let mut nil = x.clone();
    nil.terms.remove(&(0, 0));
    let mut form = SuperForm::one();
    let mut power = SuperForm::one();
    let max_steps = (V_DIM + E_DIM) as i64;
    for k in 1..=max_steps + 1 {
        power = power.mul(&nil).v_truncate(v_degree_cap);
        if power.is_zero() {
            return Ok(ExpForm { scalar_exponent: scalar, form });
        }
        if k > max_steps {
            break;
        }
        form = form.add(&power.scale(&ExactScalar::from_rational(factorial_inv(k))));
    }
    Err(ExactError::Shape("exponential series did not terminate".into()))
}

fn factorial_inv(k: i64) -> crate::exactnum::Q {
    let mut f = crate::exactnum::Q::one();
    for j in 2..=k {
        f *= q(1, j);
    }
    f
}

/// The Berezin integral over E of rank 8: the fᴱ-top coefficient times
/// (−1)^{36}/π⁴, as a map from V-masks to coefficients.
pub fn berezin(x: &SuperForm) -> BTreeMap<u8, ExactScalar> {
    let norm = ExactScalar::pi().pow(4).inv().expect("pi^4 is a unit");
    let mut out = BTreeMap::new();
    for ((v, e), c) in &x.terms {
        if *e == E_TOP {
            let val = c * &norm;
            if !val.is_zero() {
                out.insert(*v, val);
            }
        }
    }
    out
}

fn fmt_mask(prefix: &str, m: u8) -> String {
    if m == 0 {
        return "1".into();
    }
    let idx: Vec<String> = indices_of(m).iter().map(|k| k.to_string()).collect();
    format!("{prefix}{}", idx.join(""))
}

impl fmt::Display for SuperForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((v, e), c)| format!("[{c}] {}⊗{}", fmt_mask("e", *v), fmt_mask("f", *e)))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for SuperForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperForm({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> ExactScalar {
        ExactScalar::one()
    }

    #[test]
    fn sign_rule_examples() {
        let x = SuperForm::term(&[1], &[1], one());
        let y = SuperForm::term(&[2], &[2], one());
        assert_eq!(x.mul(&y), SuperForm::term(&[1, 2], &[1, 2], ExactScalar::int(-1)));

        let a = SuperForm::term(&[1, 2], &[], one());
        let b = SuperForm::term(&[], &[1, 2], one());
        assert_eq!(a.mul(&b), SuperForm::term(&[1, 2], &[1, 2], one()));
        assert_eq!(b.mul(&a), a.mul(&b));

        let z = SuperForm::term(&[1], &[2], one());
        assert!(x.mul(&z).is_zero());
    }

    #[test]
    fn unsorted_indices_carry_sign() {
        assert_eq!(SuperForm::term(&[2, 1], &[], one()), SuperForm::term(&[1, 2], &[], ExactScalar::int(-1)));
        assert!(SuperForm::term(&[3, 3], &[], one()).is_zero());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(super_exp(&SuperForm::zero(), 7).unwrap().form, SuperForm::one());
        let x = SuperForm::term(&[1, 2], &[1, 2], one());
        assert_eq!(super_exp(&x, 7).unwrap().form, SuperForm::one().add(&x));
        let t2 = SuperForm::scalar(ExactScalar::var(Var::T).pow(2));
        let ex = super_exp(&t2.add(&x), 7).unwrap();
        assert_eq!(ex.scalar_exponent, ExactScalar::var(Var::T).pow(2));
        assert_eq!(ex.form, SuperForm::one().add(&x));
    }

    #[test]
    fn berezin_examples() {
        let all_e: Vec<usize> = (1..=8).collect();
        let pi_m4 = ExactScalar::pi().pow(4).inv().unwrap();
        let b = berezin(&SuperForm::term(&[], &all_e, one()));
        assert_eq!(b.get(&0), Some(&pi_m4));
        assert!(berezin(&SuperForm::term(&[1, 2], &[1, 2], one())).is_empty());
        let all_v: Vec<usize> = (1..=7).collect();
        let b = berezin(&SuperForm::term(&all_v, &all_e, one()));
        assert_eq!(b.get(&V_TOP), Some(&pi_m4));
    }
}
