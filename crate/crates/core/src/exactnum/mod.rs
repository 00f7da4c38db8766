//! Exact scalars: Laurent polynomials with Gaussian-rational coefficients.
//!
//! Every quantity in the certificates lives in this ring. The indeterminate
//! list is fixed (see [`Var`]); `pi` is an ordinary indeterminate so that
//! "is this polynomial in pi nonzero" stays a decidable question, and `sqrt2`
//! is kept reduced to exponent 0 or 1.

mod matrix;
mod parse;

pub use matrix::{ExactMatrix, RankCertificate};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;
pub type Gq = Complex<BigRational>;

pub const NVARS: usize = 15;

const VAR_NAMES: [&str; NVARS] = [
    "pi", "a", "b", "c", "alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "alpha6", "alpha7", "t",
    "c_aux", "lambda", "sqrt2",
];

/// An indeterminate, identified by its slot in the fixed ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u8);

impl Var {
    pub const PI: Var = Var(0);
    pub const A: Var = Var(1);
    pub const B: Var = Var(2);
    pub const C: Var = Var(3);
    pub const T: Var = Var(11);
    pub const C_AUX: Var = Var(12);
    pub const LAMBDA: Var = Var(13);
    pub const SQRT2: Var = Var(14);

    /// `alpha(k)` for k in 1..=7.
    pub fn alpha(k: usize) -> Var {
        assert!((1..=7).contains(&k), "alpha index out of range: {k}");
        Var(3 + k as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn name(self) -> &'static str {
        VAR_NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Option<Var> {
        VAR_NAMES.iter().position(|n| *n == name).map(|i| Var(i as u8))
    }

    pub fn all() -> impl Iterator<Item = Var> {
        (0..NVARS as u8).map(Var)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("missing value for indeterminate `{0}`")]
    MissingVar(&'static str),
    #[error("not invertible in the Laurent ring: {0}")]
    NotInvertible(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("rank certificate failed: {0}")]
    Rank(String),
}

pub type Exps = [i16; NVARS];

/// A Laurent polynomial over Q(i) in the fixed indeterminates.
///
/// Canonical form: a sorted map from exponent vectors to nonzero
/// coefficients, with the `sqrt2` exponent reduced to 0 or 1. Equality of
/// scalars is equality of canonical forms.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    terms: BTreeMap<Exps, Gq>,
}

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn gq_is_zero(c: &Gq) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

fn pow2(e: i64) -> Q {
    let two = qi(2);
    if e >= 0 {
        num_traits::pow(two, e as usize)
    } else {
        num_traits::pow(two, (-e) as usize).recip()
    }
}

/// Multiply exponent vectors, folding `sqrt2^2 = 2` into the coefficient.
fn mul_mono(a: &Exps, b: &Exps) -> (Exps, Option<i64>) {
    let mut m = [0i16; NVARS];
    for i in 0..NVARS {
        m[i] = a[i] + b[i];
    }
    let s = m[Var::SQRT2.index()] as i64;
    if s == 0 || s == 1 {
        (m, None)
    } else {
        let (q2, r) = s.div_mod_floor(&2);
        m[Var::SQRT2.index()] = r as i16;
        (m, Some(q2))
    }
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::default()
    }

    pub fn one() -> Self {
        Self::from_gq(Gq::new(qi(1), qi(0)))
    }

    pub fn i() -> Self {
        Self::from_gq(Gq::new(qi(0), qi(1)))
    }

    pub fn from_gq(c: Gq) -> Self {
        let mut terms = BTreeMap::new();
        if !gq_is_zero(&c) {
            terms.insert([0; NVARS], c);
        }
        ExactScalar { terms }
    }

    pub fn from_rational(r: Q) -> Self {
        Self::from_gq(Gq::new(r, qi(0)))
    }

    pub fn int(n: i64) -> Self {
        Self::from_rational(qi(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rational(q(n, d))
    }

    pub fn gauss(re: Q, im: Q) -> Self {
        Self::from_gq(Gq::new(re, im))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Gq::new(qi(1), qi(0)), &[(v, 1)])
    }

    pub fn pi() -> Self {
        Self::var(Var::PI)
    }

    pub fn sqrt2() -> Self {
        Self::var(Var::SQRT2)
    }

    /// `2*pi*i*x`, the exponent of a unitary character at a functional value x.
    pub fn two_pi_i(x: &ExactScalar) -> Self {
        &(&ExactScalar::gauss(qi(0), qi(2)) * &ExactScalar::pi()) * x
    }

    pub fn monomial(c: Gq, powers: &[(Var, i16)]) -> Self {
        let mut e = [0i16; NVARS];
        for (v, p) in powers {
            e[v.index()] += *p;
        }
        let mut out = ExactScalar::zero();
        out.add_term(e, c);
        out
    }

    fn add_term(&mut self, e: Exps, c: Gq) {
        if gq_is_zero(&c) {
            return;
        }
        let (e, shift) = mul_mono(&e, &[0; NVARS]);
        let c = match shift {
            Some(s) => scale_gq(&c, &pow2(s)),
            None => c,
        };
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if gq_is_zero(&sum) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == ExactScalar::one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Gq)> {
        self.terms.iter()
    }

    /// The constant coefficient if the scalar has no indeterminates.
    pub fn as_constant(&self) -> Option<Gq> {
        match self.terms.len() {
            0 => Some(Gq::new(qi(0), qi(0))),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.as_constant().filter(|c| c.im.is_zero()).map(|c| c.re)
    }

    pub fn conj(&self) -> Self {
        ExactScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, c.conj())).collect(),
        }
    }

    pub fn scale(&self, r: &Q) -> Self {
        if r.is_zero() {
            return ExactScalar::zero();
        }
        ExactScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, scale_gq(c, r))).collect(),
        }
    }

    pub fn scale_gq(&self, z: &Gq) -> Self {
        if gq_is_zero(z) {
            return ExactScalar::zero();
        }
        ExactScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, c * z)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = ExactScalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse, defined only for single-term scalars (Laurent units).
    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.terms.len() != 1 {
            if self.is_zero() {
                return Err(ExactError::DivisionByZero);
            }
            return Err(ExactError::NotInvertible(self.to_string()));
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if e[Var::SQRT2.index()] != 0 {
            // 1/sqrt2 = sqrt2/2
            let mut ne = e.map(|x| -x);
            ne[Var::SQRT2.index()] = 1;
            let c = c.inv() * Gq::new(q(1, 2), qi(0));
            let mut out = ExactScalar::zero();
            out.terms.insert(ne, c);
            return Ok(out);
        }
        let mut out = ExactScalar::zero();
        out.terms.insert(e.map(|x| -x), c.inv());
        Ok(out)
    }

    pub fn div(&self, other: &ExactScalar) -> Result<Self, ExactError> {
        Ok(self * &other.inv()?)
    }

    /// Exact quotient of polynomials (nonnegative exponents, no √2) by
    /// lexicographic long division; None when `other` does not divide.
    pub fn div_exact(&self, other: &ExactScalar) -> Option<ExactScalar> {
        let poly = |x: &ExactScalar| x.terms.keys().all(|e| e.iter().all(|&k| k >= 0) && e[Var::SQRT2.index()] == 0);
        if other.is_zero() || !poly(self) || !poly(other) {
            return None;
        }
        let (de, dc) = other.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
        let mut r = self.clone();
        let mut out = ExactScalar::zero();
        while let Some((re, rc)) = r.terms.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            let mut e = [0i16; NVARS];
            for i in 0..NVARS {
                e[i] = re[i] - de[i];
                if e[i] < 0 {
                    return None;
                }
            }
            let mut t = ExactScalar::zero();
            t.terms.insert(e, rc / &dc);
            r = &r - &(&t * other);
            out = &out + &t;
        }
        Some(out)
    }

    pub fn degree(&self, v: Var) -> Option<i16> {
        self.terms.keys().map(|e| e[v.index()]).max()
    }

    pub fn min_degree(&self, v: Var) -> Option<i16> {
        self.terms.keys().map(|e| e[v.index()]).min()
    }

    /// Exponent of pi when the scalar is pi-homogeneous.
    pub fn pi_power(&self) -> Option<i16> {
        let lo = self.min_degree(Var::PI)?;
        (Some(lo) == self.degree(Var::PI)).then_some(lo)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v.index()] != 0)
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::all().filter(|v| self.contains_var(*v)).collect()
    }

    /// Coefficient of `v^k`, as a scalar free of `v`.
    pub fn coeff(&self, v: Var, k: i16) -> Self {
        let mut out = ExactScalar::zero();
        for (e, c) in &self.terms {
            if e[v.index()] == k {
                let mut e2 = *e;
                e2[v.index()] = 0;
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    /// Substitute `v := value`. Negative powers of `v` require `value` to be a unit.
    pub fn subst(&self, v: Var, value: &ExactScalar) -> Result<Self, ExactError> {
        if !self.contains_var(v) {
            return Ok(self.clone());
        }
        let mut pos_cache: Vec<ExactScalar> = vec![ExactScalar::one()];
        let mut neg_cache: Vec<ExactScalar> = vec![ExactScalar::one()];
        let mut out = ExactScalar::zero();
        for (e, c) in &self.terms {
            let k = e[v.index()];
            let mut e2 = *e;
            e2[v.index()] = 0;
            let mut base = ExactScalar::zero();
            base.terms.insert(e2, c.clone());
            let factor = if k >= 0 {
                while pos_cache.len() <= k as usize {
                    let next = pos_cache.last().unwrap() * value;
                    pos_cache.push(next);
                }
                pos_cache[k as usize].clone()
            } else {
                if neg_cache.len() == 1 {
                    neg_cache.push(value.inv()?);
                }
                while neg_cache.len() <= (-k) as usize {
                    let next = neg_cache.last().unwrap() * &neg_cache[1];
                    neg_cache.push(next);
                }
                neg_cache[(-k) as usize].clone()
            };
            out += &(&base * &factor);
        }
        Ok(out)
    }

    /// Multiply by `v^n` where n is the smallest power clearing negative exponents of `v`.
    pub fn clear_denominator(&self, v: Var) -> Self {
        let lo = self.min_degree(v).unwrap_or(0);
        if lo >= 0 {
            return self.clone();
        }
        self * &ExactScalar::monomial(Gq::new(qi(1), qi(0)), &[(v, -lo)])
    }

    /// Reduce modulo the relation `v^n = r` (r free of v), after clearing
    /// negative powers of v. The result is zero iff self vanishes in the
    /// quotient ring.
    pub fn reduce_power_relation(&self, v: Var, n: i16, r: &ExactScalar) -> Result<Self, ExactError> {
        assert!(n > 0);
        if r.contains_var(v) {
            return Err(ExactError::Shape(format!("relation for {v} mentions {v}")));
        }
        let p = self.clear_denominator(v);
        let mut rpow: Vec<ExactScalar> = vec![ExactScalar::one()];
        let mut out = ExactScalar::zero();
        for (e, c) in &p.terms {
            let k = e[v.index()];
            let (qq, rem) = (k / n, k % n);
            while rpow.len() <= qq as usize {
                let next = rpow.last().unwrap() * r;
                rpow.push(next);
            }
            let mut e2 = *e;
            e2[v.index()] = rem;
            let mut base = ExactScalar::zero();
            base.terms.insert(e2, c.clone());
            out += &(&base * &rpow[qq as usize]);
        }
        Ok(out)
    }

    /// Numeric value. `pi` and `sqrt2` default to their real values.
    pub fn eval(&self, assignment: &Assignment) -> Result<Complex64, ExactError> {
        let mut vals = [None; NVARS];
        vals[Var::PI.index()] = Some(std::f64::consts::PI);
        vals[Var::SQRT2.index()] = Some(std::f64::consts::SQRT_2);
        for (v, x) in &assignment.values {
            vals[v.index()] = Some(*x);
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = 1.0f64;
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    let x = vals[i].ok_or(ExactError::MissingVar(VAR_NAMES[i]))?;
                    m *= x.powi(k as i32);
                }
            }
            let re = c.re.to_f64().unwrap_or(f64::NAN);
            let im = c.im.to_f64().unwrap_or(f64::NAN);
            acc += Complex64::new(re * m, im * m);
        }
        Ok(acc)
    }

    /// Exact value at a rational point. `sqrt2` must not occur.
    pub fn eval_exact(&self, point: &[Option<Q>; NVARS]) -> Result<Gq, ExactError> {
        let mut acc = Gq::new(qi(0), qi(0));
        for (e, c) in &self.terms {
            let mut m = qi(1);
            for (i, &k) in e.iter().enumerate() {
                if k != 0 {
                    let x = point[i].as_ref().ok_or(ExactError::MissingVar(VAR_NAMES[i]))?;
                    if k < 0 && x.is_zero() {
                        return Err(ExactError::DivisionByZero);
                    }
                    let p = num_traits::pow(x.clone(), k.unsigned_abs() as usize);
                    m *= if k < 0 { p.recip() } else { p };
                }
            }
            acc = acc + scale_gq(c, &m);
        }
        Ok(acc)
    }

    /// If every coefficient is real with one common sign and every exponent
    /// is even, the scalar has that sign at every real point where it does
    /// not vanish term-wise. Returns the sign.
    pub fn even_sign_definite(&self) -> Option<i8> {
        let mut sign = 0i8;
        for (e, c) in &self.terms {
            if !c.im.is_zero() || e.iter().any(|k| k % 2 != 0) {
                return None;
            }
            let s = if c.re.is_positive() { 1 } else { -1 };
            if sign == 0 {
                sign = s;
            } else if sign != s {
                return None;
            }
        }
        (sign != 0).then_some(sign)
    }

    /// Real and imaginary parts (all indeterminates are real).
    pub fn re_im(&self) -> (ExactScalar, ExactScalar) {
        let mut re = ExactScalar::zero();
        let mut im = ExactScalar::zero();
        for (e, c) in &self.terms {
            if !c.re.is_zero() {
                re.terms.insert(*e, Gq::new(c.re.clone(), qi(0)));
            }
            if !c.im.is_zero() {
                im.terms.insert(*e, Gq::new(c.im.clone(), qi(0)));
            }
        }
        (re, im)
    }

    /// Squared modulus x * conj(x).
    pub fn norm_sqr(&self) -> Self {
        self * &self.conj()
    }

    pub fn parse(s: &str) -> Result<Self, ExactError> {
        parse::parse_scalar(s)
    }
}

pub(crate) fn scale_gq(c: &Gq, r: &Q) -> Gq {
    Gq::new(&c.re * r, &c.im * r)
}

/// Numeric values for the indeterminates of a scalar.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignment {
    values: BTreeMap<Var, f64>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, v: Var, x: f64) -> Self {
        self.values.insert(v, x);
        self
    }

    pub fn set(&mut self, v: Var, x: f64) {
        self.values.insert(v, x);
    }

    pub fn get(&self, v: Var) -> Option<f64> {
        self.values.get(&v).copied()
    }
}

fn fmt_q(r: &Q) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fmt_gq(c: &Gq) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_q(&c.re),
        (true, false) => format!("{}i", fmt_q(&c.im)),
        (false, false) => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            format!("{}{}{}i", fmt_q(&c.re), sign, fmt_q(&c.im.abs()))
        }
    }
}

impl fmt::Display for ExactScalar {
    /// Canonical text: `(coeff)*var^k*...` terms joined by ` + `, variables
    /// in the fixed order. `pi` always carries its exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({})", fmt_gq(c))?;
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if i == Var::PI.index() || k != 1 {
                    write!(f, "*{}^{}", VAR_NAMES[i], k)?;
                } else {
                    write!(f, "*{}", VAR_NAMES[i])?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::int(n)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out: BTreeMap<Exps, Gq> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let (m, shift) = mul_mono(e1, e2);
                let mut c = c1 * c2;
                if let Some(s) = shift {
                    c = scale_gq(&c, &pow2(s));
                }
                match out.entry(m) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() = o.get() + &c;
                    }
                }
            }
        }
        out.retain(|_, c| !gq_is_zero(c));
        ExactScalar { terms: out }
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        let mut acc = ExactScalar::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}

/// Seeded random rational point used for generic-rank pivot selection.
pub fn random_point(seed: u64) -> [Option<Q>; NVARS] {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pt: [Option<Q>; NVARS] = Default::default();
    for (i, slot) in pt.iter_mut().enumerate() {
        if i == Var::SQRT2.index() {
            continue;
        }
        let n: i64 = rng.gen_range(2..200);
        let d: i64 = rng.gen_range(1..17);
        let s: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
        *slot = Some(q(s * n, d));
    }
    pt
}

/// Exact rational square root, if it exists.
pub fn rational_sqrt(r: &Q) -> Option<Q> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Q::new(n, d))
}

/// Exact rational k-th root of a positive or negative rational, if it exists.
pub fn rational_root(r: &Q, k: u32) -> Option<Q> {
    let neg = r.is_negative();
    if neg && k % 2 == 0 {
        return None;
    }
    let a = r.abs();
    let n = a.numer().nth_root(k);
    let d = a.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *a.numer() && num_traits::pow(d.clone(), k as usize) == *a.denom() {
        let root = Q::new(n, d);
        Some(if neg { -root } else { root })
    } else {
        None
    }
}

/// The largest monomial (coefficient 1) dividing every entry, with
/// exponents taken as the per-variable minimum over all terms.
pub fn monomial_content(xs: &[ExactScalar]) -> ExactScalar {
    let mut lo: Option<Exps> = None;
    for x in xs {
        for e in x.terms.keys() {
            lo = Some(match lo {
                None => *e,
                Some(mut m) => {
                    for i in 0..NVARS {
                        m[i] = m[i].min(e[i]);
                    }
                    m
                }
            });
        }
    }
    let mut out = ExactScalar::zero();
    match lo {
        Some(mut e) => {
            e[Var::SQRT2.index()] = 0;
            out.terms.insert(e, Gq::new(qi(1), qi(0)));
        }
        None => out = ExactScalar::one(),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta(k: usize) -> ExactScalar {
        ExactScalar::two_pi_i(&ExactScalar::var(Var::alpha(k)))
    }

    #[test]
    fn beta_norm_is_four_pi_squared_alpha_squared() {
        let b6 = beta(6);
        let n = &b6 * &b6.conj();
        let expected = ExactScalar::monomial(Gq::new(qi(4), qi(0)), &[(Var::PI, 2), (Var::alpha(6), 2)]);
        assert_eq!(n, expected);
    }

    #[test]
    fn beta_plus_conj_vanishes() {
        let b2 = beta(2);
        assert!((&b2 + &b2.conj()).is_zero());
    }

    #[test]
    fn display_matches_report_format() {
        assert_eq!(beta(6).to_string(), "(2i)*pi^1*alpha6");
        assert_eq!(ExactScalar::zero().to_string(), "0");
    }

    #[test]
    fn sqrt2_reduces() {
        let s = ExactScalar::sqrt2();
        assert_eq!(&s * &s, ExactScalar::int(2));
        assert_eq!(s.inv().unwrap(), s.scale(&q(1, 2)));
        assert_eq!(&(&s * &s) * &s, s.scale(&qi(2)));
    }

    #[test]
    fn eval_inverse_pi_fourth() {
        let x = ExactScalar::monomial(Gq::new(qi(1), qi(0)), &[(Var::PI, -4)]);
        let v = x.eval(&Assignment::new()).unwrap();
        assert!((v.re - 0.010265982254684336).abs() < 1e-15);
    }

    #[test]
    fn eval_missing_var_errors() {
        let a = ExactScalar::var(Var::A);
        assert_eq!(a.eval(&Assignment::new()), Err(ExactError::MissingVar("a")));
        let a2 = a.pow(2);
        assert_eq!(a2.eval(&Assignment::new().with(Var::A, 3.0)).unwrap().re, 9.0);
    }

    #[test]
    fn substitution_and_relations() {
        let a = ExactScalar::var(Var::A);
        let b = ExactScalar::var(Var::B);
        let c = ExactScalar::var(Var::C);
        let expr = &(&a - &b) - &c;
        assert!(expr.subst(Var::A, &(&b + &c)).unwrap().is_zero());
        // a^-1 needs a unit
        assert!(a.inv().unwrap().subst(Var::A, &(&b + &c)).is_err());
        // c^5 = c * r modulo c^4 = r
        let r = ExactScalar::var(Var::B);
        let red = c.pow(5).reduce_power_relation(Var::C, 4, &r).unwrap();
        assert_eq!(red, &c * &r);
    }

    #[test]
    fn pi_grade_queries() {
        let x = &beta(1) * &beta(2);
        assert_eq!(x.pi_power(), Some(2));
        let y = &beta(1) + &ExactScalar::var(Var::A);
        assert_eq!(y.pi_power(), None);
        assert_eq!(y.degree(Var::PI), Some(1));
    }

    #[test]
    fn sign_definite_detection() {
        let a = ExactScalar::var(Var::A);
        let b = ExactScalar::var(Var::B);
        let s = &a.pow(2) + &b.pow(4).scale(&qi(3));
        assert_eq!(s.even_sign_definite(), Some(1));
        assert_eq!((&a.pow(2) - &b.pow(2)).even_sign_definite(), None);
        assert_eq!((&a * &b).even_sign_definite(), None);
    }

    #[test]
    fn roots() {
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&qi(2)), None);
        assert_eq!(rational_root(&qi(-512), 9), Some(qi(-2)));
    }
}
