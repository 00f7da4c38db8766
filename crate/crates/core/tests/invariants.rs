//! Property tests for structural invariants at random rational parameters
//! and random Fourier labels.

use g2nu::clifford::{clifford_mul, CliffordVector, RealSpinor};
use g2nu::dirac::{character_matrix, hermite_blocks, matrix_spectrum, odd_coefficient_failures, symmetry_defect, truncated_spectrum, DiracContext};
use g2nu::eta::{odd_signature_matrix, odd_signature_spectrum, spectrum_paired};
use g2nu::exactnum::{q, Q};
use g2nu::kirillov::{coadjoint_action, coadjoint_orbit, mode_at, polarizer_failures, polarizing_subalgebra, reduce_orbit_representative, LinearFunctional, ModeKind};
use g2nu::liealg::{Case, LatticeSpec, NilpotentLieAlgebra, ParamPoint};
use g2nu::nu::nu_residue;
use g2nu::{Assignment, ExactScalar, Var};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn point() -> impl Strategy<Value = ParamPoint> {
    prop_oneof![
        rational().prop_map(|a| ParamPoint::h1(a).unwrap()),
        (rational(), rational())
            .prop_filter("a = b + c must be nonzero", |(b, c)| b + c != q(0, 1))
            .prop_map(|(b, c)| ParamPoint::h2(b, c).unwrap()),
    ]
}

fn label() -> impl Strategy<Value = [i64; 7]> {
    prop::array::uniform7(-2i64..=2)
}

fn lattice(case: Case) -> LatticeSpec {
    match case {
        Case::H1 => LatticeSpec::h1(1, 2).unwrap(),
        Case::H2 => LatticeSpec::h2(1, 2, 1).unwrap(),
    }
}

fn scalar() -> impl Strategy<Value = ExactScalar> {
    let term = (-5i64..=5, 1i64..=3, 0i16..=2, -1i16..=1, 0i16..=1).prop_map(|(n, d, ea, eb, ep)| {
        ExactScalar::monomial(g2nu::exactnum::Gq::new(q(n, d), q(0, 1)), &[(Var::A, ea), (Var::B, eb), (Var::PI, ep)])
    });
    (prop::collection::vec(term, 1..4), any::<bool>()).prop_map(|(ts, imag)| {
        let s = ts.iter().fold(ExactScalar::zero(), |acc, t| &acc + t);
        if imag { &s * &ExactScalar::i() } else { s }
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn scalar_ring_laws(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(x in scalar(), y in scalar(), a in 0.5f64..3.0, b in 0.5f64..3.0) {
        let asg = Assignment::new().with(Var::A, a).with(Var::B, b).with(Var::PI, std::f64::consts::PI);
        let (ex, ey) = (x.eval(&asg).unwrap(), y.eval(&asg).unwrap());
        let exy = (&x * &y).eval(&asg).unwrap();
        prop_assert!((exy - ex * ey).norm() <= 1e-9 * (1.0 + exy.norm()));
    }

    #[test]
    fn monomial_inverse(n in prop_oneof![-7i64..=-1, 1i64..=7], d in 1i64..=5, ea in -3i16..=3, ep in -2i16..=2) {
        let x = ExactScalar::monomial(g2nu::exactnum::Gq::new(q(n, d), q(0, 1)), &[(Var::A, ea), (Var::PI, ep)]);
        prop_assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn clifford_vectors_square_to_minus_norm(v in prop::array::uniform7(-3i64..=3), s in prop::array::uniform8(-3i64..=3)) {
        let v = CliffordVector::from_ints(v);
        let s = RealSpinor::from_ints(s);
        let vvs = clifford_mul(&v, &clifford_mul(&v, &s));
        prop_assert_eq!(vvs, s.scale(&-&v.norm_sqr()));
    }

    #[test]
    fn orbits_polarizers_and_reduction(p in point(), l in label()) {
        let alg = p.specialize(&NilpotentLieAlgebra::for_case(p.case)).unwrap();
        let f = LinearFunctional::from_ints(l);
        let orbit = coadjoint_orbit(&alg, &f).unwrap();
        prop_assert_eq!(orbit.dimension % 2, 0);
        prop_assert_eq!(orbit.dimension + orbit.radical.len(), 7);
        let pol = polarizing_subalgebra(&alg, &f).unwrap();
        prop_assert!(polarizer_failures(&alg, &f, &pol).unwrap().is_empty());
        let (reduced, y) = reduce_orbit_representative(&alg, &f).unwrap();
        prop_assert_eq!(coadjoint_action(&alg, &f, &y), reduced.clone());
        prop_assert_eq!(coadjoint_orbit(&alg, &reduced).unwrap().dimension, orbit.dimension);
    }

    #[test]
    fn sector_spectra_are_symmetric(p in point(), l in label(), k in 1usize..=4) {
        let alg = p.specialize(&NilpotentLieAlgebra::for_case(p.case)).unwrap();
        let ctx = DiracContext::new(alg.clone()).unwrap();
        let mode = mode_at(&alg, &lattice(p.case), l, &p).unwrap();
        let asg = p.assignment();
        let ev = match mode.kind {
            ModeKind::Character => {
                let m = character_matrix(&ctx, &mode.functional);
                prop_assert!(odd_coefficient_failures(&ctx, &m).unwrap().is_empty());
                let ev = matrix_spectrum(&m, &asg).unwrap();
                if !mode.is_invariant() {
                    prop_assert!(ev.iter().all(|x| x.abs() > 1e-6), "kernel on a character sector: {:?}", ev);
                }
                ev
            }
            ModeKind::Infinite => {
                let op = hermite_blocks(&ctx, &mode.functional, &ExactScalar::one()).unwrap();
                truncated_spectrum(&op, k, &asg).unwrap()
            }
        };
        prop_assert!(symmetry_defect(&ev) < 1e-8);
    }

    #[test]
    fn b_block_spectrum_is_paired(p in point()) {
        let alg = NilpotentLieAlgebra::for_case(p.case);
        let b = odd_signature_matrix(&alg);
        let ev = odd_signature_spectrum(&alg, &b, &p.assignment()).unwrap();
        prop_assert!(spectrum_paired(&ev, 1e-8));
    }

    #[test]
    fn nu_residue_periods(mq in -200i64..200, h in 0usize..12, ed in -5i64..5, eb in -40i64..40) {
        let m = q(mq, 1);
        let r = nu_residue(&m, h, ed, eb).unwrap();
        prop_assert!(r < 48);
        prop_assert_eq!(nu_residue(&m, h + 2, ed, eb).unwrap(), r);
        prop_assert_eq!(nu_residue(&m, h, ed, eb + 16).unwrap(), r);
        prop_assert_eq!(nu_residue(&(&m + q(48, 1)), h, ed, eb).unwrap(), r);
        prop_assert!(nu_residue(&q(2 * mq + 1, 2), h, ed, eb).is_err());
    }
}
