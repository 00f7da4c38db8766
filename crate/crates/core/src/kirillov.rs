//! Coadjoint orbits of the two-step algebras, polarizers, orbit
//! representatives, and the lattice mode list used by the L² decomposition.
//!
//! Only the differentiated form of each irreducible representation is
//! materialized ([`DifferentiatedAction`]); that is all the Dirac
//! computations need.

use serde::Serialize;
use serde_json::json;

use crate::exactnum::{monomial_content, ExactError, ExactMatrix, ExactScalar, Var};
use crate::liealg::{basis_vector, zero_vector, Case, LatticeSpec, NilpotentLieAlgebra, ParamPoint, Vector, DIM};

const SEED: u64 = 0x6b69_7269;

/// ℓ = Σ αₖ eᵏ on the dual basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFunctional(pub [ExactScalar; DIM]);

impl LinearFunctional {
    pub fn zero() -> Self {
        LinearFunctional(zero_vector())
    }

    pub fn from_ints(v: [i64; DIM]) -> Self {
        LinearFunctional(v.map(ExactScalar::int))
    }

    /// αₖ, 1-based.
    pub fn coeff(&self, k: usize) -> &ExactScalar {
        &self.0[k - 1]
    }

    pub fn apply(&self, x: &Vector) -> ExactScalar {
        self.0.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn strings(&self) -> Vec<String> {
        self.0.iter().map(|x| x.to_string()).collect()
    }
}

impl Serialize for LinearFunctional {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.strings().serialize(s)
    }
}

/// ω[i][j] = ℓ([eᵢ, eⱼ]).
pub fn form_matrix(alg: &NilpotentLieAlgebra, l: &LinearFunctional) -> ExactMatrix {
    ExactMatrix::from_fn(DIM, DIM, |i, j| l.apply(&alg.bracket_basis(i + 1, j + 1)))
}

/// Ad*_{exp y} ℓ = ℓ − ℓ([y, ·]) for a two-step algebra.
pub fn coadjoint_action(alg: &NilpotentLieAlgebra, l: &LinearFunctional, y: &Vector) -> LinearFunctional {
    LinearFunctional(std::array::from_fn(|j| &l.0[j] - &l.apply(&alg.bracket(y, &basis_vector(j + 1)))))
}

fn rows_matrix(alg: &NilpotentLieAlgebra, vs: &[Vector]) -> ExactMatrix {
    ExactMatrix::from_fn(vs.len(), DIM, |i, j| vs[i][j].clone()).map(|x| alg.reduce(x))
}

/// Generic rank of a family of vectors (entries reduced modulo the
/// algebra's parameter relation).
pub fn span_rank(alg: &NilpotentLieAlgebra, vs: &[Vector]) -> Result<usize, ExactError> {
    if vs.is_empty() {
        return Ok(0);
    }
    Ok(rows_matrix(alg, vs).rank_certificate(SEED)?.rank)
}

pub fn in_span(alg: &NilpotentLieAlgebra, v: &Vector, basis: &[Vector]) -> Result<bool, ExactError> {
    let mut all = basis.to_vec();
    all.push(v.clone());
    Ok(span_rank(alg, &all)? == span_rank(alg, basis)?)
}

/// Divide a vector by its monomial content.
fn primitive(v: Vector) -> Vector {
    let m = monomial_content(&v);
    let inv = m.inv().expect("monomial content is a unit");
    v.map(|x| &x * &inv)
}

/// Basis of 𝔯_ℓ = {y : ℓ([y, ·]) = 0}, as generic kernel vectors of ω.
pub fn radical(alg: &NilpotentLieAlgebra, l: &LinearFunctional) -> Result<Vec<Vector>, ExactError> {
    let w = form_matrix(alg, l).map(|x| alg.reduce(x));
    let cert = w.rank_certificate(SEED)?;
    Ok(cert.kernel.into_iter().map(|k| primitive(std::array::from_fn(|i| k[i].clone()))).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitKind {
    Point,
    Plane,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoadjointOrbitInfo {
    pub kind: OrbitKind,
    /// Spanning directions of the affine orbit ℓ + span, as functionals.
    pub directions: Vec<LinearFunctional>,
    pub radical: Vec<Vector>,
    pub dimension: usize,
}

pub fn coadjoint_orbit(alg: &NilpotentLieAlgebra, l: &LinearFunctional) -> Result<CoadjointOrbitInfo, ExactError> {
    let w = form_matrix(alg, l).map(|x| alg.reduce(x));
    let cert = w.rank_certificate(SEED)?;
    // the orbit is ℓ + {−ℓ([y,·])}: the row space of ω
    let directions = cert
        .pivot_rows
        .iter()
        .map(|&r| LinearFunctional(primitive(std::array::from_fn(|j| w.get(r, j).clone()))))
        .collect();
    let radical = cert.kernel.into_iter().map(|k| primitive(std::array::from_fn(|i| k[i].clone()))).collect();
    let dimension = cert.rank;
    let kind = match dimension {
        0 => OrbitKind::Point,
        2 => OrbitKind::Plane,
        d => return Err(ExactError::Shape(format!("orbit of dimension {d} outside the two-step range"))),
    };
    Ok(CoadjointOrbitInfo { kind, directions, radical, dimension })
}

/// Problems with a proposed polarizer: empty when it contains 𝔯_ℓ, is
/// ℓ-isotropic, is a subalgebra, and has codimension ½ dim(orbit).
pub fn polarizer_failures(alg: &NilpotentLieAlgebra, l: &LinearFunctional, p: &[Vector]) -> Result<Vec<String>, ExactError> {
    let mut out = Vec::new();
    let rad = radical(alg, l)?;
    let dim_p = span_rank(alg, p)?;
    for (n, r) in rad.iter().enumerate() {
        if !in_span(alg, r, p)? {
            out.push(format!("radical vector {n} not contained"));
        }
    }
    for (i, x) in p.iter().enumerate() {
        for (j, y) in p.iter().enumerate().skip(i + 1) {
            let br = alg.bracket(x, y);
            if !alg.is_zero_mod(&l.apply(&br)) {
                out.push(format!("l([p{i}, p{j}]) != 0"));
            }
            if !in_span(alg, &br, p)? {
                out.push(format!("[p{i}, p{j}] leaves the span"));
            }
        }
    }
    let orbit = DIM - rad.len();
    if DIM - dim_p != orbit / 2 {
        out.push(format!("codimension {} but half the orbit dimension is {}", DIM - dim_p, orbit / 2));
    }
    Ok(out)
}

/// Candidate generators tried first, before the basis vectors: for h1 the
/// span {e₂,…,e₇}, for h2 the generators α₆e₁+α₄e₃ and −α₅e₂+α₄e₃.
fn preferred_generators(alg: &NilpotentLieAlgebra, l: &LinearFunctional) -> Vec<Vector> {
    match alg.case {
        Some(Case::H1) => vec![basis_vector(2), basis_vector(3)],
        Some(Case::H2) => {
            let (a4, a5, a6) = (l.coeff(4), l.coeff(5), l.coeff(6));
            let mut v1 = zero_vector();
            v1[0] = a6.clone();
            v1[2] = a4.clone();
            let mut v2 = zero_vector();
            v2[1] = -a5;
            v2[2] = a4.clone();
            vec![v1, v2]
        }
        None => vec![],
    }
}

/// A polarizing subalgebra: greedy isotropic extension of the radical,
/// trying the preferred generators for the case before e₁,…,e₇. The
/// result is checked with [`polarizer_failures`].
pub fn polarizing_subalgebra(alg: &NilpotentLieAlgebra, l: &LinearFunctional) -> Result<Vec<Vector>, ExactError> {
    let mut basis = radical(alg, l)?;
    let target = DIM - (DIM - basis.len()) / 2;
    let candidates: Vec<Vector> = preferred_generators(alg, l).into_iter().chain((1..=DIM).map(basis_vector)).collect();
    for c in candidates {
        if basis.len() == target {
            break;
        }
        if c.iter().all(|x| alg.is_zero_mod(x)) || in_span(alg, &c, &basis)? {
            continue;
        }
        let isotropic = basis.iter().all(|b| alg.is_zero_mod(&l.apply(&alg.bracket(&c, b))));
        if isotropic {
            basis.push(c);
        }
    }
    let fails = polarizer_failures(alg, l, &basis)?;
    if !fails.is_empty() {
        return Err(ExactError::Shape(format!("polarizer extension failed: {}", fails.join("; "))));
    }
    Ok(basis)
}

/// Coordinates of the representative cleared by the orbit action, in
/// order of preference.
fn target_sets(case: Option<Case>) -> Vec<Vec<usize>> {
    match case {
        Some(Case::H1) => vec![vec![1, 2], vec![1, 3]],
        Some(Case::H2) => vec![vec![2, 3], vec![1, 3], vec![1, 2]],
        None => {
            let mut v = Vec::new();
            for i in 1..=3 {
                for j in i + 1..=3 {
                    v.push(vec![i, j]);
                }
            }
            v
        }
    }
}

/// A representative ℓ' = Ad*_{exp y} ℓ on the same orbit with some
/// coordinates cleared (α₁, α₂ for h1 when α₆ ≠ 0, else α₁, α₃; α₂, α₃
/// for h2 in general position). Returns ℓ' and the witness y.
pub fn reduce_orbit_representative(alg: &NilpotentLieAlgebra, l: &LinearFunctional) -> Result<(LinearFunctional, Vector), ExactError> {
    let w = form_matrix(alg, l).map(|x| alg.reduce(x));
    let cert = w.rank_certificate(SEED)?;
    let r = cert.rank;
    if r == 0 {
        return Ok((l.clone(), zero_vector()));
    }
    let rows = &cert.pivot_rows;
    for targets in target_sets(alg.case) {
        if targets.len() != r {
            continue;
        }
        // solve Σ_p y_p ω[row_p][t] = ℓ_t for t in targets
        let m = ExactMatrix::from_fn(r, r, |ti, p| w.get(rows[p], targets[ti] - 1).clone());
        let det = m.det()?;
        if alg.is_zero_mod(&det) {
            continue;
        }
        let Ok(det_inv) = det.inv() else { continue };
        let mut y = zero_vector();
        for p in 0..r {
            let mut mp = m.clone();
            for (ti, &t) in targets.iter().enumerate() {
                mp.set(ti, p, l.coeff(t).clone());
            }
            y[rows[p]] = &mp.det()? * &det_inv;
        }
        let reduced = coadjoint_action(alg, l, &y);
        if targets.iter().all(|&t| alg.is_zero_mod(reduced.coeff(t))) {
            return Ok((reduced, y));
        }
    }
    Err(ExactError::Shape("no coordinate pair can be cleared on this orbit".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeKind {
    Character,
    Infinite,
}

/// One irreducible sector of the L² decomposition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModeSpec {
    pub kind: ModeKind,
    /// Integer Fourier labels α₁..α₇ before lattice scaling and reduction.
    pub label: [i64; DIM],
    /// Reduced representative.
    pub functional: LinearFunctional,
    #[serde(serialize_with = "ser_vec")]
    pub orbit_witness: Vector,
}

fn ser_vec<S: serde::Serializer>(v: &Vector, s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
}

impl ModeSpec {
    /// βₖ = 2πi ℓ(eₖ), 1-based.
    pub fn beta(&self, k: usize) -> ExactScalar {
        ExactScalar::two_pi_i(self.functional.coeff(k))
    }

    pub fn is_invariant(&self) -> bool {
        self.label.iter().all(|&x| x == 0)
    }
}

fn functional_for(lattice: &LatticeSpec, label: &[i64; DIM], params: Option<&ParamPoint>) -> Result<LinearFunctional, ExactError> {
    let mut l = LinearFunctional::from_ints(*label);
    let scaled = |num: i64, period: u32, v: Var| ExactScalar::monomial(
        crate::exactnum::Gq::new(crate::exactnum::qi(num * period as i64), crate::exactnum::qi(0)),
        &[(v, -1)],
    );
    match *lattice {
        LatticeSpec::H1 { r1, r2 } => {
            l.0[5] = scaled(label[5], r2, Var::A);
            l.0[6] = scaled(label[6], r1, Var::A);
        }
        LatticeSpec::H2 { s4, s5, s6 } => {
            l.0[3] = scaled(label[3], s4, Var::A);
            l.0[4] = scaled(label[4], s5, Var::B);
            l.0[5] = scaled(label[5], s6, Var::C);
        }
    }
    if let Some(p) = params {
        for x in l.0.iter_mut() {
            *x = p.subst(x)?;
        }
    }
    Ok(l)
}

/// Build the mode with Fourier labels `label` (h1: α₁..α₇ with α₆, α₇ the
/// central frequencies; h2: α₄, α₅, α₆ central).
pub fn mode(alg: &NilpotentLieAlgebra, lattice: &LatticeSpec, label: [i64; DIM]) -> Result<ModeSpec, ExactError> {
    mode_with(alg, lattice, label, None)
}

/// [`mode`] at rational parameter values; `alg` should already be
/// specialized to `params`.
pub fn mode_at(alg: &NilpotentLieAlgebra, lattice: &LatticeSpec, label: [i64; DIM], params: &ParamPoint) -> Result<ModeSpec, ExactError> {
    mode_with(alg, lattice, label, Some(params))
}

fn mode_with(alg: &NilpotentLieAlgebra, lattice: &LatticeSpec, label: [i64; DIM], params: Option<&ParamPoint>) -> Result<ModeSpec, ExactError> {
    let l = functional_for(lattice, &label, params)?;
    let info = coadjoint_orbit(alg, &l)?;
    let kind = if info.dimension == 0 { ModeKind::Character } else { ModeKind::Infinite };
    let (functional, orbit_witness) = reduce_orbit_representative(alg, &l)?;
    Ok(ModeSpec { kind, label, functional, orbit_witness })
}

fn product_range(n: usize, cutoff: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            for x in -cutoff..=cutoff {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Character modes then infinite modes with |αₖ| ≤ cutoff, ordered
/// lexicographically on the central labels and then on the remaining
/// ones. Infinite modes are deduplicated after orbit reduction.
pub fn enumerate_modes(alg: &NilpotentLieAlgebra, lattice: &LatticeSpec, cutoff: u32) -> Result<Vec<ModeSpec>, ExactError> {
    enumerate_with(alg, lattice, cutoff, None)
}

/// Same enumeration at rational parameter values: `alg` should already be
/// specialized to `params`.
pub fn enumerate_modes_at(alg: &NilpotentLieAlgebra, lattice: &LatticeSpec, cutoff: u32, params: &ParamPoint) -> Result<Vec<ModeSpec>, ExactError> {
    enumerate_with(alg, lattice, cutoff, Some(params))
}

fn enumerate_with(alg: &NilpotentLieAlgebra, lattice: &LatticeSpec, cutoff: u32, params: Option<&ParamPoint>) -> Result<Vec<ModeSpec>, ExactError> {
    let n = cutoff as i64;
    let (central, character_free): (Vec<usize>, Vec<usize>) = match lattice.case() {
        Case::H1 => (vec![3, 4, 5, 6], vec![0, 1, 2, 3, 4]),
        Case::H2 => (vec![3, 4, 5, 6], vec![0, 1, 2, 6]),
    };
    let derived: Vec<usize> = match lattice.case() {
        Case::H1 => vec![5, 6],
        Case::H2 => vec![3, 4, 5],
    };
    let others: Vec<usize> = (0..DIM).filter(|i| !central.contains(i)).collect();
    let mut keyed: Vec<(Vec<i64>, ModeSpec)> = Vec::new();
    let mut seen: std::collections::HashSet<[ExactScalar; DIM]> = std::collections::HashSet::new();
    for cv in product_range(central.len(), n) {
        let derived_zero = derived.iter().all(|d| cv[central.iter().position(|c| c == d).unwrap()] == 0);
        for ov in product_range(others.len(), n) {
            let mut label = [0i64; DIM];
            for (i, &c) in central.iter().enumerate() {
                label[c] = cv[i];
            }
            for (i, &o) in others.iter().enumerate() {
                label[o] = ov[i];
            }
            if derived_zero {
                if (0..DIM).any(|i| label[i] != 0 && !character_free.contains(&i)) {
                    continue;
                }
            } else if lattice.case() == Case::H1 && label[0] != 0 {
                // infinite h1 modes carry no α₁ (it lies along the orbit)
                continue;
            }
            let m = mode_with(alg, lattice, label, params)?;
            if m.kind == ModeKind::Infinite {
                if !seen.insert(m.functional.0.clone()) {
                    continue;
                }
            }
            let mut key = vec![if m.kind == ModeKind::Character { 0 } else { 1 }];
            key.extend(central.iter().map(|&c| label[c]));
            key.extend(others.iter().map(|&o| label[o]));
            keyed.push((key, m));
        }
    }
    keyed.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(keyed.into_iter().map(|(_, m)| m).collect())
}

/// (ρ_ℓ)_*(eₖ) = yₖ d/dt + constₖ + t·linₖ on L²(ℝ), for the splitting
/// 𝔤 = ℝX ⊕ 𝔭_ℓ and u(t) = f(exp(tX)).
#[derive(Clone, Debug, PartialEq)]
pub struct DifferentiatedAction {
    pub x: Vector,
    pub polarizer: Vec<Vector>,
    /// yₖ: X-component of eₖ.
    pub y: Vector,
    /// 2πi(ℓ(eₖ) − yₖ ℓ(X)).
    pub constant: Vector,
    /// 2πi ℓ([X, eₖ]).
    pub linear: Vector,
}

impl DifferentiatedAction {
    pub fn witness(&self) -> serde_json::Value {
        let s = |v: &Vector| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        json!({
            "x": s(&self.x),
            "polarizer": self.polarizer.iter().map(s).collect::<Vec<_>>(),
            "y": s(&self.y),
            "constant": s(&self.constant),
            "linear": s(&self.linear),
        })
    }
}

/// When p contains e₄, …, e₇ its normal lives on span(e₁, e₂, e₃) and is
/// the cross product of two independent projections; this keeps the
/// entries free of the large minors a full echelon form produces.
fn quotient_normal(alg: &NilpotentLieAlgebra, p: &[Vector]) -> Result<Option<Vector>, ExactError> {
    for k in 4..=DIM {
        if !in_span(alg, &basis_vector(k), p)? {
            return Ok(None);
        }
    }
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let (u, v) = (&p[i], &p[j]);
            let cross = |a: usize, b: usize| &(&u[a] * &v[b]) - &(&u[b] * &v[a]);
            let mut n = zero_vector();
            n[0] = cross(1, 2);
            n[1] = cross(2, 0);
            n[2] = cross(0, 1);
            if n.iter().any(|x| !alg.is_zero_mod(x)) {
                // impose the relation only where it leaves polynomials
                if let Ok(m) = n.iter().map(|x| alg.impose(x)).collect::<Result<Vec<_>, _>>() {
                    n = std::array::from_fn(|i| m[i].clone());
                }
                return Ok(Some(primitive(n)));
            }
        }
    }
    Ok(None)
}

/// Divide out the non-monomial part of entry `k` when it divides every
/// entry, so that entry becomes a monomial.
fn cancel_common_factor(v: Vector, k: usize) -> Vector {
    if v[k].inv().is_ok() {
        return v;
    }
    let Ok(m) = monomial_content(std::slice::from_ref(&v[k])).inv() else { return v };
    let f = &v[k] * &m;
    let divided: Option<Vec<ExactScalar>> = v.iter().map(|x| x.div_exact(&f)).collect();
    match divided {
        Some(d) => primitive(std::array::from_fn(|i| d[i].clone())),
        None => v,
    }
}

/// Differentiated induced representation of an infinite mode. X is the
/// last basis vector outside the polarizer.
pub fn differentiated_action(alg: &NilpotentLieAlgebra, l: &LinearFunctional) -> Result<DifferentiatedAction, ExactError> {
    let p = polarizing_subalgebra(alg, l)?;
    if p.len() != DIM - 1 {
        return Err(ExactError::Shape("differentiated action needs a two-dimensional orbit".into()));
    }
    let normal = match quotient_normal(alg, &p)? {
        Some(n) => n,
        None => {
            let cert = rows_matrix(alg, &p).rank_certificate(SEED)?;
            primitive(std::array::from_fn(|i| cert.kernel[0][i].clone()))
        }
    };
    let mut x_idx = None;
    for k in (1..=DIM).rev() {
        if !in_span(alg, &basis_vector(k), &p)? {
            x_idx = Some(k);
            break;
        }
    }
    let k0 = x_idx.ok_or_else(|| ExactError::Shape("polarizer is the whole algebra".into()))?;
    let x = basis_vector(k0);
    let normal = cancel_common_factor(normal, k0 - 1);
    let nx_inv = normal[k0 - 1].inv()?;
    let y: Vector = std::array::from_fn(|k| &normal[k] * &nx_inv);
    let lx = l.apply(&x);
    let constant = std::array::from_fn(|k| ExactScalar::two_pi_i(&(&l.0[k] - &(&y[k] * &lx))));
    let linear = std::array::from_fn(|k| ExactScalar::two_pi_i(&l.apply(&alg.bracket(&x, &basis_vector(k + 1)))));
    Ok(DifferentiatedAction { x, polarizer: p, y, constant, linear })
}

/// Report witness for the orbit representative step.
pub fn reduction_witness(alg: &NilpotentLieAlgebra, l: &LinearFunctional) -> Result<serde_json::Value, ExactError> {
    let (r, y) = reduce_orbit_representative(alg, l)?;
    let back = coadjoint_action(alg, l, &y);
    Ok(json!({
        "from": l.strings(),
        "to": r.strings(),
        "y": y.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "same_orbit": back == r,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(v: Var) -> ExactScalar {
        ExactScalar::var(v)
    }

    #[test]
    fn h1_point_and_plane_orbits() {
        let h1 = NilpotentLieAlgebra::h1();
        let o = coadjoint_orbit(&h1, &LinearFunctional::from_ints([1, 2, 3, 4, 5, 0, 0])).unwrap();
        assert_eq!(o.kind, OrbitKind::Point);
        assert_eq!(o.radical.len(), 7);
        let o = coadjoint_orbit(&h1, &LinearFunctional::from_ints([0, 0, 0, 0, 0, 1, 0])).unwrap();
        assert_eq!(o.kind, OrbitKind::Plane);
        let dirs: Vec<Vector> = o.directions.iter().map(|d| d.0.clone()).collect();
        assert!(in_span(&h1, &basis_vector(1), &dirs).unwrap());
        assert!(in_span(&h1, &basis_vector(2), &dirs).unwrap());
    }

    #[test]
    fn h1_radical_matches_closed_form() {
        let h1 = NilpotentLieAlgebra::h1();
        let l = LinearFunctional::from_ints([0, 0, 0, 0, 0, 1, 1]);
        let r = radical(&h1, &l).unwrap();
        assert_eq!(r.len(), 5);
        let mut v = zero_vector();
        v[1] = ExactScalar::one();
        v[2] = ExactScalar::int(-1);
        for w in std::iter::once(v).chain((4..=7).map(basis_vector)) {
            assert!(in_span(&h1, &w, &r).unwrap());
        }
    }

    #[test]
    fn h2_generic_radical_and_polarizer() {
        let h2 = NilpotentLieAlgebra::h2();
        let mut l = LinearFunctional::zero();
        for k in 4..=6 {
            l.0[k - 1] = sym(Var::alpha(k));
        }
        let r = radical(&h2, &l).unwrap();
        assert_eq!(r.len(), 5);
        let mut v = zero_vector();
        v[0] = &sym(Var::C) * &sym(Var::alpha(6));
        v[1] = -&(&sym(Var::B) * &sym(Var::alpha(5)));
        v[2] = &sym(Var::A) * &sym(Var::alpha(4));
        assert!(in_span(&h2, &v, &r).unwrap());
        let p = polarizing_subalgebra(&h2, &l).unwrap();
        assert_eq!(p.len(), 6);
        for g in preferred_generators(&h2, &l) {
            assert!(in_span(&h2, &g, &p).unwrap());
        }
    }

    #[test]
    fn h1_polarizer_is_e2_to_e7() {
        let h1 = NilpotentLieAlgebra::h1();
        for lab in [[0, 0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 0, 1], [0, 3, 1, 0, 0, 2, -1]] {
            let l = LinearFunctional::from_ints(lab);
            let p = polarizing_subalgebra(&h1, &l).unwrap();
            for k in 2..=7 {
                assert!(in_span(&h1, &basis_vector(k), &p).unwrap(), "{lab:?} e{k}");
            }
        }
        let l = LinearFunctional::from_ints([1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(polarizing_subalgebra(&h1, &l).unwrap().len(), 7);
    }

    #[test]
    fn h1_reduction_clears_alpha2_or_alpha3() {
        let h1 = NilpotentLieAlgebra::h1();
        let l = LinearFunctional::from_ints([3, 2, 5, 1, 1, 2, 1]);
        let (r, y) = reduce_orbit_representative(&h1, &l).unwrap();
        assert!(r.coeff(1).is_zero() && r.coeff(2).is_zero());
        assert_eq!(coadjoint_action(&h1, &l, &y), r);
        let l = LinearFunctional::from_ints([3, 2, 5, 1, 1, 0, 1]);
        let (r, _) = reduce_orbit_representative(&h1, &l).unwrap();
        assert!(r.coeff(1).is_zero() && r.coeff(3).is_zero());
        assert_eq!(r.coeff(2), &ExactScalar::int(2));
    }

    #[test]
    fn h1_differentiated_action_matches_closed_form() {
        let h1 = NilpotentLieAlgebra::h1();
        let lat = LatticeSpec::h1(1, 1).unwrap();
        let m = mode(&h1, &lat, [0, 0, 0, 1, 2, 1, 1]).unwrap();
        let d = differentiated_action(&h1, &m.functional).unwrap();
        assert_eq!(d.x, basis_vector(1));
        assert_eq!(d.y, basis_vector(1));
        // ρ_*(e₂) = 2πi(α₂ − a t α₆) with α₆ = 1/a
        assert_eq!(d.linear[1], ExactScalar::two_pi_i(&ExactScalar::int(-1)));
        assert_eq!(d.constant[3], m.beta(4));
    }

    #[test]
    fn mode_counts() {
        let h1 = NilpotentLieAlgebra::h1();
        let lat = LatticeSpec::default_for(Case::H1);
        let modes = enumerate_modes(&h1, &lat, 0).unwrap();
        assert_eq!(modes.len(), 1);
        assert!(modes[0].is_invariant());
        let modes = enumerate_modes(&h1, &lat, 1).unwrap();
        let ch = modes.iter().filter(|m| m.kind == ModeKind::Character).count();
        assert_eq!(ch, 243);
        let inf = modes.iter().find(|m| m.kind == ModeKind::Infinite && m.label[5] == 1).unwrap();
        assert_eq!(inf.functional.coeff(6), &ExactScalar::parse("a^-1").unwrap());
    }
}
