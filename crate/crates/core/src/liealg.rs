//! Seven-dimensional two-step nilpotent metric Lie algebras in an
//! orthonormal frame: brackets, the Chevalley–Eilenberg differential, the
//! Hodge star, Levi-Civita and spin connections, curvature, lattice data.

use std::fmt;

use num_traits::Zero;

use crate::exactnum::{Assignment, ExactError, ExactMatrix, ExactScalar, Var, Q};
use crate::superalg::{SuperForm, V_TOP};

pub const DIM: usize = 7;

pub type Vector = [ExactScalar; DIM];
type Table3 = [[[ExactScalar; DIM]; DIM]; DIM];

fn zero_table() -> Table3 {
    std::array::from_fn(|_| std::array::from_fn(|_| std::array::from_fn(|_| ExactScalar::zero())))
}

pub fn zero_vector() -> Vector {
    std::array::from_fn(|_| ExactScalar::zero())
}

pub fn basis_vector(i: usize) -> Vector {
    std::array::from_fn(|k| if k + 1 == i { ExactScalar::one() } else { ExactScalar::zero() })
}

fn sym(v: Var) -> ExactScalar {
    ExactScalar::var(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    H1,
    H2,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::H1 => "h1",
            Case::H2 => "h2",
        }
    }

    pub fn parse(s: &str) -> Option<Case> {
        match s {
            "h1" => Some(Case::H1),
            "h2" => Some(Case::H2),
            _ => None,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Structure constants c_{ij}^k of [eᵢ, eⱼ] = Σₖ c_{ij}^k eₖ in an
/// orthonormal frame, plus an optional relation `var = value` among the
/// parameters (the closedness condition a = b + c for h2).
#[derive(Clone, Debug, PartialEq)]
pub struct NilpotentLieAlgebra {
    pub name: String,
    pub case: Option<Case>,
    c: Table3,
    pub relation: Option<(Var, ExactScalar)>,
}

impl NilpotentLieAlgebra {
    pub fn abelian() -> Self {
        NilpotentLieAlgebra { name: "abelian".into(), case: None, c: zero_table(), relation: None }
    }

    /// Sets [eᵢ, eⱼ] = coeff·eₖ (and the antisymmetric partner), 1-based.
    pub fn with_bracket(mut self, i: usize, j: usize, coeff: ExactScalar, k: usize) -> Self {
        self.c[j - 1][i - 1][k - 1] = -&coeff;
        self.c[i - 1][j - 1][k - 1] = coeff;
        self
    }

    /// [e₁,e₂] = −a e₆, [e₁,e₃] = −a e₇.
    pub fn h1() -> Self {
        let a = sym(Var::A);
        let mut g = Self::abelian().with_bracket(1, 2, -&a, 6).with_bracket(1, 3, -&a, 7);
        g.name = "h1".into();
        g.case = Some(Case::H1);
        g
    }

    /// [e₁,e₂] = −a e₄, [e₁,e₃] = −b e₅, [e₂,e₃] = −c e₆, with a, b, c free.
    pub fn h2_free() -> Self {
        let mut g = Self::abelian()
            .with_bracket(1, 2, -sym(Var::A), 4)
            .with_bracket(1, 3, -sym(Var::B), 5)
            .with_bracket(2, 3, -sym(Var::C), 6);
        g.name = "h2".into();
        g.case = Some(Case::H2);
        g
    }

    /// h2 with the closedness relation a = b + c recorded.
    pub fn h2() -> Self {
        let mut g = Self::h2_free();
        g.relation = Some((Var::A, &sym(Var::B) + &sym(Var::C)));
        g
    }

    pub fn for_case(case: Case) -> Self {
        match case {
            Case::H1 => Self::h1(),
            Case::H2 => Self::h2(),
        }
    }

    /// c_{ij}^k, 1-based.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &ExactScalar {
        &self.c[i - 1][j - 1][k - 1]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        self.c[i - 1][j - 1].clone()
    }

    pub fn bracket(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = zero_vector();
        for i in 0..DIM {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..DIM {
                if y[j].is_zero() || i == j {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for k in 0..DIM {
                    if !self.c[i][j][k].is_zero() {
                        out[k] += &(&xy * &self.c[i][j][k]);
                    }
                }
            }
        }
        out
    }

    /// Canonical reduction modulo the parameter relation: clear negative
    /// powers of the related variable, then substitute. Zero iff the input
    /// vanishes on the relation locus (the variable being nonzero there).
    pub fn reduce(&self, x: &ExactScalar) -> ExactScalar {
        match &self.relation {
            None => x.clone(),
            Some((v, val)) => x.clear_denominator(*v).subst(*v, val).expect("polynomial substitution"),
        }
    }

    pub fn is_zero_mod(&self, x: &ExactScalar) -> bool {
        self.reduce(x).is_zero()
    }

    pub fn eq_mod(&self, x: &ExactScalar, y: &ExactScalar) -> bool {
        self.is_zero_mod(&(x - y))
    }

    /// Fill in the value of the relation variable from the others.
    pub fn complete_assignment(&self, asg: &Assignment) -> Result<Assignment, ExactError> {
        let mut out = asg.clone();
        if let Some((v, val)) = &self.relation {
            out.set(*v, val.eval(asg)?.re);
        }
        Ok(out)
    }

    /// Substitute the relation without clearing denominators (the relation
    /// variable must occur with nonnegative powers only).
    pub fn impose(&self, x: &ExactScalar) -> Result<ExactScalar, ExactError> {
        match &self.relation {
            None => Ok(x.clone()),
            Some((v, val)) => x.subst(*v, val),
        }
    }

    /// Triples violating the Jacobi identity.
    pub fn jacobi_failures(&self) -> Vec<(usize, usize, usize)> {
        let mut bad = Vec::new();
        for i in 1..=DIM {
            for j in i + 1..=DIM {
                for k in j + 1..=DIM {
                    let (x, y, z) = (basis_vector(i), basis_vector(j), basis_vector(k));
                    let t1 = self.bracket(&x, &self.bracket(&y, &z));
                    let t2 = self.bracket(&y, &self.bracket(&z, &x));
                    let t3 = self.bracket(&z, &self.bracket(&x, &y));
                    if (0..DIM).any(|m| !(&(&t1[m] + &t2[m]) + &t3[m]).is_zero()) {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    pub fn is_two_step(&self) -> bool {
        (1..=DIM).all(|i| {
            (1..=DIM).all(|j| {
                let inner = self.bracket_basis(i, j);
                (1..=DIM).all(|k| self.bracket(&basis_vector(k), &inner).iter().all(ExactScalar::is_zero))
            })
        })
    }

    /// d eᵏ = −Σ_{i<j} c_{ij}^k eⁱ∧eʲ.
    pub fn d_basis(&self, k: usize) -> SuperForm {
        let mut out = SuperForm::zero();
        for i in 1..=DIM {
            for j in i + 1..=DIM {
                let c = &self.c[i - 1][j - 1][k - 1];
                if !c.is_zero() {
                    out = out.add(&SuperForm::term(&[i, j], &[], -c));
                }
            }
        }
        out
    }

    /// The Chevalley–Eilenberg differential on the V-factor.
    pub fn ce_differential(&self, form: &SuperForm) -> SuperForm {
        let d1: Vec<SuperForm> = (1..=DIM).map(|k| self.d_basis(k)).collect();
        let mut out = SuperForm::zero();
        for ((v, e), coeff) in form.terms() {
            let idx = crate::superalg::indices_of(*v);
            for (r, &k) in idx.iter().enumerate() {
                if d1[k - 1].is_zero() {
                    continue;
                }
                let left = SuperForm::term(&idx[..r], &[], ExactScalar::one());
                let right = SuperForm::term(&idx[r + 1..], &[], ExactScalar::one());
                let sign = if r % 2 == 0 { 1 } else { -1 };
                let piece = left.mul(&d1[k - 1]).mul(&right);
                // d acts on the V-factor; the E-factor rides along on the right
                let piece = piece.mul(&SuperForm::basis(0, *e, coeff.clone()));
                out = out.add(&piece.scale(&ExactScalar::int(sign)));
            }
        }
        out
    }

    /// Parse the text format:
    ///
    /// ```text
    /// name h1
    /// dim 7
    /// [1,2] = -a * e6
    /// [1,3] = -a * e7
    /// ```
    pub fn from_text(src: &str) -> Result<Self, ExactError> {
        let mut g = Self::abelian();
        g.name = "custom".into();
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| ExactError::Parse { pos: lineno + 1, msg: format!("line {}: {msg}", lineno + 1) };
            if let Some(rest) = line.strip_prefix("name") {
                g.name = rest.trim().to_string();
                g.case = Case::parse(&g.name);
                continue;
            }
            if let Some(rest) = line.strip_prefix("dim") {
                if rest.trim() != "7" {
                    return Err(bad("only dimension 7 is supported"));
                }
                continue;
            }
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("expected `[i,j] = coeff * e_k`"))?;
            let lhs = lhs.trim().strip_prefix('[').and_then(|s| s.strip_suffix(']')).ok_or_else(|| bad("bad bracket"))?;
            let (i, j) = lhs.split_once(',').ok_or_else(|| bad("bad bracket"))?;
            let i: usize = i.trim().parse().map_err(|_| bad("bad index"))?;
            let j: usize = j.trim().parse().map_err(|_| bad("bad index"))?;
            let rhs = rhs.trim();
            let pos = rhs.rfind('e').ok_or_else(|| bad("missing basis vector"))?;
            let k: usize = rhs[pos + 1..].trim().parse().map_err(|_| bad("bad target index"))?;
            let coeff_src = rhs[..pos].trim().trim_end_matches('*').trim();
            let coeff = match coeff_src {
                "" | "+" => ExactScalar::one(),
                "-" => ExactScalar::int(-1),
                s => ExactScalar::parse(s)?,
            };
            if !(1..=DIM).contains(&i) || !(1..=DIM).contains(&j) || !(1..=DIM).contains(&k) || i == j {
                return Err(bad("index out of range"));
            }
            let prev = g.c[i - 1][j - 1][k - 1].clone();
            g = g.with_bracket(i, j, &prev + &coeff, k);
        }
        Ok(g)
    }
}

/// Gram matrix of the frame. Only diagonal metrics with invertible entries
/// are supported by [`koszul_christoffel`].
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantMetric {
    pub gram: ExactMatrix,
    pub orthonormal: bool,
}

impl InvariantMetric {
    pub fn orthonormal() -> Self {
        InvariantMetric { gram: ExactMatrix::identity(DIM), orthonormal: true }
    }

    pub fn diagonal(d: [ExactScalar; DIM]) -> Self {
        let gram = ExactMatrix::from_fn(DIM, DIM, |i, j| if i == j { d[i].clone() } else { ExactScalar::zero() });
        let orthonormal = gram == ExactMatrix::identity(DIM);
        InvariantMetric { gram, orthonormal }
    }

    pub fn g(&self, x: &Vector, y: &Vector) -> ExactScalar {
        let gy = self.gram.mul_vec(y);
        x.iter().zip(&gy).map(|(a, b)| a * b).sum()
    }
}

/// Γ[i][j][k]: coefficient of eₖ in ∇_{eᵢ}eⱼ (0-based storage).
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel {
    pub gamma: [[[ExactScalar; DIM]; DIM]; DIM],
}

impl Christoffel {
    /// ∇_{eᵢ}eⱼ, 1-based.
    pub fn nabla(&self, i: usize, j: usize) -> Vector {
        self.gamma[i - 1][j - 1].clone()
    }

    /// ∇ₓy for invariant fields.
    pub fn nabla_vec(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = zero_vector();
        for i in 0..DIM {
            for j in 0..DIM {
                let xy = &x[i] * &y[j];
                if xy.is_zero() {
                    continue;
                }
                for k in 0..DIM {
                    if !self.gamma[i][j][k].is_zero() {
                        out[k] += &(&xy * &self.gamma[i][j][k]);
                    }
                }
            }
        }
        out
    }
}

fn sample_assignment() -> Assignment {
    let mut a = Assignment::new();
    for (k, v) in Var::all().enumerate() {
        a.set(v, 1.0 + 0.37 * k as f64);
    }
    a
}

/// Levi-Civita connection from the Koszul formula
/// 2g(∇ₓy,z) = g([x,y],z) − g([y,z],x) + g([z,x],y).
pub fn koszul_christoffel(alg: &NilpotentLieAlgebra, g: &InvariantMetric) -> Result<Christoffel, ExactError> {
    let mut inv = Vec::with_capacity(DIM);
    for i in 0..DIM {
        for j in 0..DIM {
            if i != j && !g.gram.get(i, j).is_zero() {
                return Err(ExactError::Shape("Koszul formula implemented for diagonal metrics".into()));
            }
        }
        let d = g.gram.get(i, i);
        let val = d.eval(&sample_assignment())?;
        if d.is_zero() || val.re <= 0.0 || val.im.abs() > 1e-12 {
            return Err(ExactError::Shape(format!("degenerate or indefinite metric at index {}", i + 1)));
        }
        inv.push(d.inv()?);
    }
    let half = ExactScalar::frac(1, 2);
    let mut gamma = zero_table();
    for i in 1..=DIM {
        for j in 1..=DIM {
            for k in 1..=DIM {
                let (x, y, z) = (basis_vector(i), basis_vector(j), basis_vector(k));
                let t = &(&g.g(&alg.bracket(&x, &y), &z) - &g.g(&alg.bracket(&y, &z), &x)) + &g.g(&alg.bracket(&z, &x), &y);
                if !t.is_zero() {
                    gamma[i - 1][j - 1][k - 1] = &(&t * &half) * &inv[k - 1];
                }
            }
        }
    }
    Ok(Christoffel { gamma })
}

/// Torsion-freeness and metric compatibility, as lists of failing index tuples.
pub fn christoffel_failures(alg: &NilpotentLieAlgebra, g: &InvariantMetric, ch: &Christoffel) -> (Vec<(usize, usize)>, Vec<(usize, usize, usize)>) {
    let mut torsion = Vec::new();
    for i in 1..=DIM {
        for j in 1..=DIM {
            let lhs = ch.nabla(i, j);
            let rhs = ch.nabla(j, i);
            let br = alg.bracket_basis(i, j);
            if (0..DIM).any(|k| !(&(&lhs[k] - &rhs[k]) - &br[k]).is_zero()) {
                torsion.push((i, j));
            }
        }
    }
    let mut metric = Vec::new();
    for i in 1..=DIM {
        for j in 1..=DIM {
            for k in 1..=DIM {
                let s = &g.g(&ch.nabla(i, j), &basis_vector(k)) + &g.g(&basis_vector(j), &ch.nabla(i, k));
                if !s.is_zero() {
                    metric.push((i, j, k));
                }
            }
        }
    }
    (torsion, metric)
}

/// ω[i][j][k] (j < k): the coefficient of eⱼeₖ in ½Σ_{j<k} g(∇_{eᵢ}eⱼ, eₖ) eⱼeₖ.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinConnection {
    pub omega: [[[ExactScalar; DIM]; DIM]; DIM],
}

impl SpinConnection {
    /// Coefficient of eⱼeₖ (j<k) in direction i, 1-based.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &ExactScalar {
        &self.omega[i - 1][j - 1][k - 1]
    }

    /// Nonzero (j, k, coefficient) entries for direction i, 1-based.
    pub fn entries(&self, i: usize) -> Vec<(usize, usize, ExactScalar)> {
        let mut out = Vec::new();
        for j in 0..DIM {
            for k in j + 1..DIM {
                let c = &self.omega[i - 1][j][k];
                if !c.is_zero() {
                    out.push((j + 1, k + 1, c.clone()));
                }
            }
        }
        out
    }

    /// The endomorphism Σ ω_{ijk} EⱼEₖ for a choice of Clifford matrices.
    pub fn as_matrix(&self, i: usize, e: &[ExactMatrix; DIM]) -> ExactMatrix {
        let n = e[0].nrows();
        let mut m = ExactMatrix::zeros(n, n);
        for (j, k, c) in self.entries(i) {
            m = &m + &(&e[j - 1] * &e[k - 1]).scale(&c);
        }
        m
    }
}

pub fn spin_connection(ch: &Christoffel) -> SpinConnection {
    let half = ExactScalar::frac(1, 2);
    let mut omega = zero_table();
    for i in 0..DIM {
        for j in 0..DIM {
            for k in j + 1..DIM {
                let c = &ch.gamma[i][j][k];
                if !c.is_zero() {
                    omega[i][j][k] = c * &half;
                }
            }
        }
    }
    SpinConnection { omega }
}

/// R[i][j][k] = R(eᵢ,eⱼ)eₖ = ∇ᵢ∇ⱼeₖ − ∇ⱼ∇ᵢeₖ − ∇_{[eᵢ,eⱼ]}eₖ.
#[derive(Clone, Debug, PartialEq)]
pub struct Riemann {
    pub r: [[[Vector; DIM]; DIM]; DIM],
}

impl Riemann {
    /// R(eᵢ,eⱼ)eₖ, 1-based.
    pub fn apply(&self, i: usize, j: usize, k: usize) -> &Vector {
        &self.r[i - 1][j - 1][k - 1]
    }

    /// g(R(eᵢ,eⱼ)eₖ, eₗ) in an orthonormal frame.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> &ExactScalar {
        &self.r[i - 1][j - 1][k - 1][l - 1]
    }
}

pub fn riemann_curvature(alg: &NilpotentLieAlgebra, ch: &Christoffel) -> Riemann {
    let r = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let (x, y, z) = (basis_vector(i + 1), basis_vector(j + 1), basis_vector(k + 1));
                let a = ch.nabla_vec(&x, &ch.nabla_vec(&y, &z));
                let b = ch.nabla_vec(&y, &ch.nabla_vec(&x, &z));
                let c = ch.nabla_vec(&alg.bracket(&x, &y), &z);
                std::array::from_fn(|m| &(&a[m] - &b[m]) - &c[m])
            })
        })
    });
    Riemann { r }
}

/// ⋆ for the orthonormal frame with e¹∧…∧e⁷ positive:
/// ⋆eᴵ = σ e^{Iᶜ} where eᴵ∧e^{Iᶜ} = σ vol.
pub fn hodge_star(form: &SuperForm) -> SuperForm {
    let mut out = SuperForm::zero();
    for ((v, e), c) in form.terms() {
        let comp = V_TOP & !v;
        let s = crate::superalg::wedge_sign(*v, comp).unwrap();
        out = out.add(&SuperForm::basis(comp, *e, c.scale(&crate::exactnum::qi(s as i64))));
    }
    out
}

/// Rational values for the structure constants of one case. For h2 the
/// value of a is b + c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoint {
    pub case: Case,
    pub values: Vec<(Var, Q)>,
}

impl ParamPoint {
    pub fn h1(a: Q) -> Result<Self, ExactError> {
        if a.is_zero() {
            return Err(ExactError::Shape("h1 needs a != 0".into()));
        }
        Ok(ParamPoint { case: Case::H1, values: vec![(Var::A, a)] })
    }

    pub fn h2(b: Q, c: Q) -> Result<Self, ExactError> {
        let a = &b + &c;
        if b.is_zero() || c.is_zero() || a.is_zero() {
            return Err(ExactError::Shape("h2 needs b, c and a = b + c nonzero".into()));
        }
        Ok(ParamPoint { case: Case::H2, values: vec![(Var::A, a), (Var::B, b), (Var::C, c)] })
    }

    pub fn default_for(case: Case) -> Self {
        match case {
            Case::H1 => ParamPoint { case, values: vec![(Var::A, crate::exactnum::qi(1))] },
            Case::H2 => Self::h2(crate::exactnum::qi(1), crate::exactnum::qi(2)).expect("admissible"),
        }
    }

    pub fn get(&self, v: Var) -> Option<&Q> {
        self.values.iter().find(|(w, _)| *w == v).map(|(_, x)| x)
    }

    pub fn subst(&self, x: &ExactScalar) -> Result<ExactScalar, ExactError> {
        let mut out = x.clone();
        for (v, val) in &self.values {
            out = out.subst(*v, &ExactScalar::from_rational(val.clone()))?;
        }
        Ok(out)
    }

    pub fn subst_matrix(&self, m: &ExactMatrix) -> Result<ExactMatrix, ExactError> {
        m.try_map(|x| self.subst(x))
    }

    pub fn assignment(&self) -> Assignment {
        let mut asg = Assignment::new();
        for (v, val) in &self.values {
            asg.set(*v, num_traits::ToPrimitive::to_f64(val).unwrap_or(f64::NAN));
        }
        asg
    }

    /// The algebra with these values substituted into its structure
    /// constants; the parameter relation is dropped.
    pub fn specialize(&self, alg: &NilpotentLieAlgebra) -> Result<NilpotentLieAlgebra, ExactError> {
        let mut out = alg.clone();
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    out.c[i][j][k] = self.subst(&alg.c[i][j][k])?;
                }
            }
        }
        out.relation = None;
        Ok(out)
    }

    /// name → value strings, in a fixed order.
    pub fn strings(&self) -> Vec<(String, String)> {
        self.values.iter().map(|(v, x)| (v.to_string(), x.to_string())).collect()
    }
}

/// Arithmetic data of a lattice. For h1 this is Γ_r with r₁ | r₂; for h2 the
/// periods (s₄, s₅, s₆) of the central directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum LatticeSpec {
    H1 { r1: u32, r2: u32 },
    H2 { s4: u32, s5: u32, s6: u32 },
}

impl LatticeSpec {
    pub fn h1(r1: u32, r2: u32) -> Result<Self, ExactError> {
        if r1 == 0 || r2 == 0 || r2 % r1 != 0 {
            return Err(ExactError::Shape(format!("lattice needs positive r1 | r2, got r1={r1}, r2={r2}")));
        }
        Ok(LatticeSpec::H1 { r1, r2 })
    }

    pub fn h2(s4: u32, s5: u32, s6: u32) -> Result<Self, ExactError> {
        if s4 == 0 || s5 == 0 || s6 == 0 {
            return Err(ExactError::Shape("lattice periods must be positive".into()));
        }
        Ok(LatticeSpec::H2 { s4, s5, s6 })
    }

    pub fn default_for(case: Case) -> Self {
        match case {
            Case::H1 => LatticeSpec::H1 { r1: 1, r2: 1 },
            Case::H2 => LatticeSpec::H2 { s4: 1, s5: 1, s6: 1 },
        }
    }

    pub fn case(&self) -> Case {
        match self {
            LatticeSpec::H1 { .. } => Case::H1,
            LatticeSpec::H2 { .. } => Case::H2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> ExactScalar {
        sym(Var::A)
    }

    #[test]
    fn bracket_examples() {
        let h1 = NilpotentLieAlgebra::h1();
        assert_eq!(h1.bracket_basis(1, 2), {
            let mut v = zero_vector();
            v[5] = -a();
            v
        });
        assert!(h1.bracket_basis(4, 5).iter().all(ExactScalar::is_zero));
        let h2 = NilpotentLieAlgebra::h2();
        assert_eq!(h2.bracket_basis(2, 3)[5], -sym(Var::C));
    }

    #[test]
    fn jacobi_and_two_step() {
        for g in [NilpotentLieAlgebra::h1(), NilpotentLieAlgebra::h2()] {
            assert!(g.jacobi_failures().is_empty());
            assert!(g.is_two_step());
        }
        // Heisenberg-type 3-step: [1,2]=e3, [1,3]=e4
        let bad = NilpotentLieAlgebra::abelian().with_bracket(1, 2, ExactScalar::one(), 3).with_bracket(1, 3, ExactScalar::one(), 4);
        assert!(!bad.is_two_step());
        // [1,2]=e3, [2,3]=e1 fails Jacobi? use [1,2]=e3,[3,4]=e1: J(1,2,?) nonzero
        let nj = NilpotentLieAlgebra::abelian().with_bracket(1, 2, ExactScalar::one(), 3).with_bracket(3, 4, ExactScalar::one(), 1).with_bracket(1, 4, ExactScalar::one(), 5);
        assert!(!nj.jacobi_failures().is_empty());
    }

    #[test]
    fn differential_examples() {
        let h1 = NilpotentLieAlgebra::h1();
        let d6 = h1.ce_differential(&SuperForm::term(&[6], &[], ExactScalar::one()));
        assert_eq!(d6, SuperForm::term(&[1, 2], &[], a()));
        assert!(h1.ce_differential(&SuperForm::term(&[1], &[], ExactScalar::one())).is_zero());
        let h2 = NilpotentLieAlgebra::h2();
        assert_eq!(h2.d_basis(6), SuperForm::term(&[2, 3], &[], sym(Var::C)));
    }

    #[test]
    fn hodge_examples() {
        let star1 = hodge_star(&SuperForm::term(&[1], &[], ExactScalar::one()));
        assert_eq!(star1, SuperForm::term(&[2, 3, 4, 5, 6, 7], &[], ExactScalar::one()));
        assert_eq!(hodge_star(&SuperForm::one()), SuperForm::basis(V_TOP, 0, ExactScalar::one()));
    }

    #[test]
    fn text_format_round_trip() {
        let src = "name h1\ndim 7\n[1,2] = -a * e6\n[1,3] = -a * e7\n";
        let g = NilpotentLieAlgebra::from_text(src).unwrap();
        assert_eq!(g.bracket_basis(1, 2), NilpotentLieAlgebra::h1().bracket_basis(1, 2));
        assert_eq!(g.bracket_basis(3, 1), NilpotentLieAlgebra::h1().bracket_basis(3, 1));
        assert!(NilpotentLieAlgebra::from_text("dim 6").is_err());
        assert!(NilpotentLieAlgebra::from_text("[1,1] = a*e2").is_err());
    }

    #[test]
    fn degenerate_metric_rejected() {
        let mut d: [ExactScalar; DIM] = std::array::from_fn(|_| ExactScalar::one());
        d[3] = ExactScalar::int(-1);
        assert!(koszul_christoffel(&NilpotentLieAlgebra::h1(), &InvariantMetric::diagonal(d)).is_err());
    }

    #[test]
    fn lattice_divisibility() {
        assert!(LatticeSpec::h1(2, 4).is_ok());
        assert!(LatticeSpec::h1(2, 3).is_err());
    }
}
