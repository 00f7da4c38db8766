//! One pass/fail line per acceptance criterion. Exits nonzero when a
//! criterion fails for a reason other than the known displayed det A
//! discrepancy.

use std::time::Instant;

use g2nu::certificate::Certificate;
use g2nu::clifford::verify_clifford_relations;
use g2nu::dirac::{
    character_kernel_trivial, character_matrix, determinant_identities, displayed_det_a_certificate, hermite_blocks, infinite_kernel_trivial,
    infinite_shapes, invariant_dirac_matrix, invariant_kernel_certificate, odd_coefficient_failures, symbolic_character, symmetry_defect,
    truncated_spectrum, DiracContext,
};
use g2nu::eta::{anticommutation_failures, check_orientation_reversing_isometry, odd_signature_matrix, odd_signature_spectrum, standard_isometry};
use g2nu::exactnum::{q, qi, ExactScalar, Var, Q};
use g2nu::g2;
use g2nu::kirillov::{reduce_orbit_representative, LinearFunctional};
use g2nu::liealg::{koszul_christoffel, spin_connection, Case, InvariantMetric, LatticeSpec, NilpotentLieAlgebra, ParamPoint, DIM};
use g2nu::mq::{frame_coords, mq_certificate, mq_degree_terms, positive_control, spinor_one_form, MqContext};
use g2nu::nu::{compute_nu_with, parameter_grid, CaseBundle, DEFAULT_CUTOFF};
use g2nu::superalg::SuperForm;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the failure is the documented one.
    known: bool,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into(), known: false }
    }
}

fn failing(certs: &[Certificate]) -> Vec<String> {
    certs.iter().filter(|c| !c.passed()).map(|c| c.id.clone()).collect()
}

fn sym(v: Var, n: i64, d: i64) -> ExactScalar {
    ExactScalar::var(v).scale(&q(n, d))
}

fn clifford_suite() -> Outcome {
    let t = Instant::now();
    let certs = verify_clifford_relations();
    let secs = t.elapsed().as_secs_f64();
    let bad = failing(&certs);
    Outcome::new(bad.is_empty() && secs < 1.0, format!("{} certificates, failing {bad:?}, {secs:.3} s (limit 1 s)", certs.len()))
}

/// ∇_{eᵢ}eⱼ = coef·eₖ as displayed.
type Entry = (usize, usize, usize, ExactScalar);

fn christoffel_table(case: Case) -> Vec<Entry> {
    let half = |v: Var, s: i64| sym(v, s, 2);
    let pairs: Vec<(usize, usize, usize, ExactScalar, i64)> = match case {
        // (i, j, k, ∇ᵢeⱼ coefficient, sign relating ∇ⱼeᵢ)
        Case::H1 => vec![
            (1, 2, 6, half(Var::A, -1), -1),
            (1, 3, 7, half(Var::A, -1), -1),
            (1, 6, 2, half(Var::A, 1), 1),
            (2, 6, 1, half(Var::A, -1), 1),
            (1, 7, 3, half(Var::A, 1), 1),
            (3, 7, 1, half(Var::A, -1), 1),
        ],
        Case::H2 => vec![
            (1, 2, 4, half(Var::A, -1), -1),
            (1, 3, 5, half(Var::B, -1), -1),
            (1, 4, 2, half(Var::A, 1), 1),
            (1, 5, 3, half(Var::B, 1), 1),
            (2, 3, 6, half(Var::C, -1), -1),
            (2, 4, 1, half(Var::A, -1), 1),
            (2, 6, 3, half(Var::C, 1), 1),
            (3, 5, 1, half(Var::B, -1), 1),
            (3, 6, 2, half(Var::C, -1), 1),
        ],
    };
    pairs
        .into_iter()
        .flat_map(|(i, j, k, c, s)| {
            let other = c.scale(&qi(s));
            [(i, j, k, c), (j, i, k, other)]
        })
        .collect()
}

fn spin_table(case: Case) -> Vec<(usize, usize, usize, ExactScalar)> {
    let quarter = |v: Var, s: i64| sym(v, s, 4);
    match case {
        Case::H1 => vec![
            (1, 2, 6, quarter(Var::A, -1)),
            (1, 3, 7, quarter(Var::A, -1)),
            (2, 1, 6, quarter(Var::A, 1)),
            (3, 1, 7, quarter(Var::A, 1)),
            (6, 1, 2, quarter(Var::A, 1)),
            (7, 1, 3, quarter(Var::A, 1)),
        ],
        Case::H2 => vec![
            (1, 2, 4, quarter(Var::A, -1)),
            (1, 3, 5, quarter(Var::B, -1)),
            (2, 3, 6, quarter(Var::C, -1)),
            (2, 1, 4, quarter(Var::A, 1)),
            (3, 1, 5, quarter(Var::B, 1)),
            (3, 2, 6, quarter(Var::C, 1)),
            (4, 1, 2, quarter(Var::A, 1)),
            (5, 1, 3, quarter(Var::B, 1)),
            (6, 2, 3, quarter(Var::C, 1)),
        ],
    }
}

fn connection_tables() -> Outcome {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for case in [Case::H1, Case::H2] {
        let alg = NilpotentLieAlgebra::for_case(case);
        let ch = koszul_christoffel(&alg, &InvariantMetric::orthonormal()).expect("christoffel");
        let table = christoffel_table(case);
        for i in 1..=DIM {
            for j in 1..=DIM {
                let got = ch.nabla(i, j);
                for k in 1..=DIM {
                    let want = table.iter().find(|e| (e.0, e.1, e.2) == (i, j, k)).map(|e| e.3.clone()).unwrap_or_else(ExactScalar::zero);
                    checked += 1;
                    if got[k - 1] != want {
                        mismatches.push(format!("{case:?} nabla_e{i} e{j} along e{k}: {} vs {want}", got[k - 1]));
                    }
                }
            }
        }
        let sc = spin_connection(&ch);
        let stable = spin_table(case);
        for i in 1..=DIM {
            let mut got = sc.entries(i);
            got.sort_by_key(|e| (e.0, e.1));
            let mut want: Vec<(usize, usize, ExactScalar)> = stable.iter().filter(|e| e.0 == i).map(|e| (e.1, e.2, e.3.clone())).collect();
            want.sort_by_key(|e| (e.0, e.1));
            checked += 1;
            if got != want {
                mismatches.push(format!("{case:?} spin direction e{i}: {got:?} vs {want:?}"));
            }
        }
    }
    Outcome::new(mismatches.is_empty(), format!("{checked} entries compared (6 + 9 displayed relations, zeros elsewhere), mismatches {mismatches:?}"))
}

fn g2_dictionary() -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for case in [Case::H1, Case::H2] {
        let ctx = DiracContext::for_case(case).expect("context");
        let certs: Vec<Certificate> =
            g2::certificates(&ctx.alg, &ctx.frame, &ctx.sc).into_iter().filter(|c| ["g2.spinor", "g2.metric", "g2.closedness"].contains(&c.id.as_str())).collect();
        n += certs.len();
        bad.extend(failing(&certs).into_iter().map(|id| format!("{case:?} {id}")));
    }
    Outcome::new(bad.is_empty() && n == 6, format!("spinor table, identity metric and closedness for both cases ({n} certificates), failing {bad:?}"))
}

fn harmonic_spinors() -> Outcome {
    let mut dims = Vec::new();
    let mut ok = true;
    for (case, want) in [(Case::H1, 4), (Case::H2, 2)] {
        let ctx = DiracContext::for_case(case).expect("context");
        let (dim, cert) = invariant_kernel_certificate(&ctx).expect("kernel");
        ok &= cert.passed() && dim == want;
        dims.push(format!("{case:?}: {dim}"));
    }
    Outcome::new(ok, format!("symbolic kernel dimensions {}", dims.join(", ")))
}

fn h1_generic() -> LinearFunctional {
    LinearFunctional(std::array::from_fn(|k| if k == 0 { ExactScalar::zero() } else { ExactScalar::var(Var::alpha(k + 1)) }))
}

fn determinant_identities_h1() -> Outcome {
    let t = Instant::now();
    let ctx = DiracContext::for_case(Case::H1).expect("context");
    let op = hermite_blocks(&ctx, &h1_generic(), &ExactScalar::var(Var::C_AUX)).expect("blocks");
    let ids = determinant_identities(&ctx, &op).expect("identities");
    let get = |id: &str| ids.iter().find(|c| c.id == id).is_some_and(|c| c.passed());
    let (det_c, det_b, det_a_true) = (get("dirac.det_c"), get("dirac.det_b"), get("dirac.det_a"));
    let displayed = displayed_det_a_certificate(&ctx, &op).expect("displayed");
    let secs = t.elapsed().as_secs_f64();
    let plus_x2 = displayed.witness["equals_plus_x_squared_over_16"] == true;
    let pass = det_c && det_b && displayed.passed() && secs < 30.0;
    let mut o = Outcome::new(
        pass,
        format!(
            "det C formula {det_c}, 256 det B = det C {det_b}, displayed det A = -X/16 {}, computed det A = X^2/16 {det_a_true}, {secs:.2} s (limit 30 s)",
            displayed.passed()
        ),
    );
    o.known = !pass && det_c && det_b && !displayed.passed() && plus_x2 && det_a_true && secs < 30.0;
    o
}

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(1..=9), rng.gen_range(1..=5))
}

fn random_params(case: Case, rng: &mut ChaCha8Rng) -> ParamPoint {
    match case {
        Case::H1 => ParamPoint::h1(random_q(rng)).expect("a > 0"),
        Case::H2 => ParamPoint::h2(random_q(rng), random_q(rng)).expect("b, c > 0"),
    }
}

fn random_infinite_functional(case: Case, rng: &mut ChaCha8Rng) -> LinearFunctional {
    let derived: &[usize] = if case == Case::H1 { &[6, 7] } else { &[4, 5, 6] };
    loop {
        let v: [i64; DIM] = std::array::from_fn(|_| rng.gen_range(-3..=3));
        if derived.iter().any(|&k| v[k - 1] != 0) {
            return LinearFunctional::from_ints(v);
        }
    }
}

fn spectral_symmetry() -> Outcome {
    let mut bad = Vec::new();
    for case in [Case::H1, Case::H2] {
        let ctx = DiracContext::for_case(case).expect("context");
        if !odd_coefficient_failures(&ctx, &invariant_dirac_matrix(&ctx)).expect("cp").is_empty() {
            bad.push(format!("{case:?} invariant"));
        }
        if !odd_coefficient_failures(&ctx, &character_matrix(&ctx, &symbolic_character(case))).expect("cp").is_empty() {
            bad.push(format!("{case:?} character"));
        }
        for shape in infinite_shapes(case) {
            let op = hermite_blocks(&ctx, &shape.functional, &ExactScalar::var(Var::C_AUX)).expect("blocks");
            if !odd_coefficient_failures(&ctx, &op.a).expect("cp").is_empty() {
                bad.push(format!("{case:?} block A {}", shape.id()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let trials = 24;
    for trial in 0..trials {
        let case = if trial % 2 == 0 { Case::H1 } else { Case::H2 };
        let p = random_params(case, &mut rng);
        let alg = p.specialize(&NilpotentLieAlgebra::for_case(case)).expect("specialize");
        let ctx = DiracContext::new(alg.clone()).expect("context");
        let (l, _) = reduce_orbit_representative(&alg, &random_infinite_functional(case, &mut rng)).expect("reduce");
        let c_aux = ExactScalar::from_rational(random_q(&mut rng));
        let k = rng.gen_range(1..=8);
        let op = hermite_blocks(&ctx, &l, &c_aux).expect("blocks");
        let ev = truncated_spectrum(&op, k, &p.assignment()).expect("spectrum");
        worst = worst.max(symmetry_defect(&ev));
    }
    Outcome::new(
        bad.is_empty() && worst < 1e-8,
        format!("odd coefficients nonzero in {bad:?}; {trials} random truncations (K <= 8) with largest asymmetry {worst:.2e} (tol 1e-8)"),
    )
}

fn kernel_triviality() -> Outcome {
    let mut bad = Vec::new();
    let h1 = DiracContext::for_case(Case::H1).expect("context");
    let ch = character_kernel_trivial(&h1, &symbolic_character(Case::H1)).expect("character");
    if !ch.passed() {
        bad.push("h1 character".to_string());
    }
    let mut quotient = 0;
    for shape in infinite_shapes(Case::H1) {
        let op = hermite_blocks(&h1, &shape.functional, &ExactScalar::var(Var::C_AUX)).expect("blocks");
        let c = infinite_kernel_trivial(&h1, &op).expect("infinite");
        if c.witness.to_string().contains("degenerate") {
            quotient += 1;
        }
        if !c.passed() {
            bad.push(format!("h1 {}", shape.id()));
        }
    }
    let op = hermite_blocks(&h1, &h1_generic(), &ExactScalar::var(Var::C_AUX)).expect("blocks");
    if !infinite_kernel_trivial(&h1, &op).expect("infinite").passed() {
        bad.push("h1 generic infinite".into());
    }
    let h2 = DiracContext::for_case(Case::H2).expect("context");
    let c2 = character_kernel_trivial(&h2, &symbolic_character(Case::H2)).expect("character");
    let exp = &c2.witness["det_pi_expansion"];
    let degree = exp["pi_degree"].as_i64().unwrap_or(-1);
    let lead_nonzero = exp["leading_coefficient"].as_str().is_some_and(|s| s != "0");
    if !(c2.passed() && degree == 8 && lead_nonzero) {
        bad.push(format!("h2 character (pi degree {degree})"));
    }
    Outcome::new(
        bad.is_empty() && quotient == 3,
        format!("h1 character and infinite shapes with degenerate-branch witness in {quotient} of 3; h2 character deg_pi det D = {degree}; failing {bad:?}"),
    )
}

fn mathai_quillen() -> Outcome {
    let t = Instant::now();
    let mut bad = Vec::new();
    for (case, ks) in [(Case::H1, vec![0, 1, 4, 5]), (Case::H2, vec![0, 7])] {
        let ctx = MqContext::for_case(case).expect("context");
        for k in ks {
            if !mq_certificate(&ctx, k).expect("mq").passed() {
                bad.push(format!("{case:?} k={k}"));
            }
        }
    }
    let terms = mq_degree_terms(&SuperForm::zero(), &positive_control(), &spinor_one_form(&frame_coords(0))).expect("terms");
    let control = terms.iter().find(|t| (t.m, t.n) == (0, 7)).is_some_and(|t| !t.top().is_zero());
    let secs = t.elapsed().as_secs_f64();
    Outcome::new(
        bad.is_empty() && control && secs < 60.0,
        format!("nonvanishing currents {bad:?}; positive control (nabla phi)^7 nonzero {control}; {secs:.2} s (limit 60 s)"),
    )
}

fn eta_certificates() -> Outcome {
    let mut bad = Vec::new();
    for case in [Case::H1, Case::H2] {
        let alg = NilpotentLieAlgebra::for_case(case);
        let t = standard_isometry(case);
        if !check_orientation_reversing_isometry(&alg, &t).expect("isometry").passed() {
            bad.push(format!("{case:?} T"));
        }
        let b = odd_signature_matrix(&alg);
        if !anticommutation_failures(&alg, &b, &t).is_empty() {
            bad.push(format!("{case:?} BT = -TB"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for n in 0..5 {
        let case = if n % 2 == 0 { Case::H1 } else { Case::H2 };
        let p = random_params(case, &mut rng);
        let alg = NilpotentLieAlgebra::for_case(case);
        let ev = odd_signature_spectrum(&alg, &odd_signature_matrix(&alg), &p.assignment()).expect("spectrum");
        worst = worst.max(symmetry_defect(&ev));
    }
    Outcome::new(bad.is_empty() && worst < 1e-8, format!("failing {bad:?}; B-block asymmetry at 5 random points {worst:.2e} (tol 1e-8)"))
}

fn end_to_end() -> Outcome {
    let t = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for case in [Case::H1, Case::H2] {
        let bundle = CaseBundle::new(case).expect("bundle");
        let lattice = LatticeSpec::default_for(case);
        for p in parameter_grid(case) {
            let r = compute_nu_with(&bundle, &p, &lattice, DEFAULT_CUTOFF, None).expect("nu");
            let good = r.passed() && r.orphaned_claims().is_empty() && r.nu.residue == 0;
            ok &= good;
            if !good {
                lines.push(format!("{case:?} {:?}: residue {} failing {:?}", p.strings(), r.nu.residue, r.failing()));
            }
        }
    }
    let secs = t.elapsed().as_secs_f64();
    Outcome::new(ok && secs < 300.0, format!("13 grid points, problems {lines:?}, {secs:.1} s (limit 300 s)"))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "Clifford suite", clifford_suite),
        (2, "connection tables", connection_tables),
        (3, "G2 dictionary", g2_dictionary),
        (4, "harmonic spinors", harmonic_spinors),
        (5, "determinant identities (h1 infinite)", determinant_identities_h1),
        (6, "spectral symmetry", spectral_symmetry),
        (7, "kernel triviality", kernel_triviality),
        (8, "Mathai-Quillen", mathai_quillen),
        (9, "eta certificates", eta_certificates),
        (10, "end-to-end nu", end_to_end),
    ];
    let mut unexpected = 0;
    for (n, name, f) in criteria {
        let t = Instant::now();
        let o = f();
        let status = match (o.pass, o.known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {n:>2} {status:<12} {name}: {} [{:.2} s]", o.detail, t.elapsed().as_secs_f64());
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        std::process::exit(1);
    }
}
