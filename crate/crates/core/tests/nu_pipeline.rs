use g2nu::liealg::{Case, LatticeSpec, ParamPoint};
use g2nu::nu::*;

#[test]
fn grid_residues_vanish_with_passing_trees() {
    for case in [Case::H1, Case::H2] {
        let bundle = CaseBundle::new(case).unwrap();
        let lattice = LatticeSpec::default_for(case);
        for p in parameter_grid(case) {
            let r = compute_nu_with(&bundle, &p, &lattice, DEFAULT_CUTOFF, None).unwrap();
            assert!(r.passed(), "{:?} {:?}: {:?}", case, p.strings(), r.failing());
            assert!(r.orphaned_claims().is_empty());
            assert_eq!(r.nu.residue, 0);
            assert_eq!(r.nu.h_d, if case == Case::H1 { 4 } else { 2 });
            assert_eq!(r.nu.mq, "0");
        }
    }
}

#[test]
fn injected_kernel_dimension_three_gives_24() {
    let bundle = CaseBundle::new(Case::H1).unwrap();
    let p = ParamPoint::default_for(Case::H1);
    let r = compute_nu_with(&bundle, &p, &LatticeSpec::default_for(Case::H1), 0, Some(3)).unwrap();
    assert_eq!(r.nu.residue, 24);
}

#[test]
fn structured_report_is_deterministic_and_complete() {
    let p = ParamPoint::default_for(Case::H1);
    let lat = LatticeSpec::default_for(Case::H1);
    let a = emit_report(&compute_nu(Case::H1, &p, &lat, 0).unwrap(), Format::Json);
    let b = emit_report(&compute_nu(Case::H1, &p, &lat, 0).unwrap(), Format::Json);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    for key in ["case", "params", "certificates", "nu"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    for key in ["mq", "h_D", "eta_D", "eta_B", "residue"] {
        assert!(v["nu"].get(key).is_some(), "{key}");
    }
    let ids: Vec<&str> = v["certificates"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    for id in ["dirac.det_c", "dirac.det_b", "dirac.det_a"] {
        assert!(ids.contains(&id), "{id}");
    }
    for c in v["certificates"].as_array().unwrap() {
        for key in ["id", "statement", "paper_ref", "status", "witness"] {
            assert!(c.get(key).is_some());
        }
    }
}

#[test]
fn text_report_has_decomposition_line() {
    let p = ParamPoint::default_for(Case::H2);
    let r = compute_nu(Case::H2, &p, &LatticeSpec::default_for(Case::H2), 0).unwrap();
    let t = emit_report(&r, Format::Text);
    assert!(t.contains("nu = 2∫φ*ψ - 24(η(D) + h(D)) + 3η(B) = 0 - 24(0 + 2) + 3·0 = -48 ≡ 0 mod 48"), "{t}");
}
