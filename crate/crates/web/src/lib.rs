//! wasm-bindgen entry points for the browser demo in `www/`. Every function
//! takes plain strings and numbers and returns a JSON string, with
//! `{"error": ...}` on bad input.

use g2nu::dirac::{character_matrix, hermite_blocks, matrix_spectrum, symmetry_defect, truncated_spectrum, DiracContext};
use g2nu::eta::{odd_signature_matrix, odd_signature_spectrum, spectrum_paired};
use g2nu::exactnum::{ExactScalar, Q};
use g2nu::kirillov::{mode_at, ModeKind};
use g2nu::liealg::{Case, LatticeSpec, NilpotentLieAlgebra, ParamPoint, DIM};
use g2nu::nu::{compute_nu, emit_report, Format};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn parse_case(case: &str) -> Result<Case, String> {
    match case.trim() {
        "h1" => Ok(Case::H1),
        "h2" => Ok(Case::H2),
        other => Err(format!("unknown case {other:?}")),
    }
}

fn parse_q(s: &str) -> Result<Q, String> {
    s.trim().parse::<Q>().map_err(|_| format!("not a rational number: {s:?}"))
}

/// `p1` is a for h1 and b for h2; `p2` is c for h2 and ignored for h1.
pub fn params(case: Case, p1: &str, p2: &str) -> Result<ParamPoint, String> {
    match case {
        Case::H1 => ParamPoint::h1(parse_q(p1)?),
        Case::H2 => ParamPoint::h2(parse_q(p1)?, parse_q(p2)?),
    }
    .map_err(|e| e.to_string())
}

/// `l1`, `l2` are r1, r2 for h1; for h2 the periods s4, s5, s6 are all `l1`.
pub fn lattice(case: Case, l1: u32, l2: u32) -> Result<LatticeSpec, String> {
    match case {
        Case::H1 => LatticeSpec::h1(l1, l2),
        Case::H2 => LatticeSpec::h2(l1, l1, l1),
    }
    .map_err(|e| e.to_string())
}

pub fn parse_label(s: &str) -> Result<[i64; DIM], String> {
    let v: Vec<i64> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| format!("bad label entry {t:?}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<i64>| format!("label needs {DIM} integers, got {}", v.len()))
}

fn wrap(r: Result<Value, String>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e })).to_string()
}

pub fn dirac_spectrum_value(case: &str, p1: &str, p2: &str, label: &str, l1: u32, l2: u32, truncation: u32) -> Result<Value, String> {
    let case = parse_case(case)?;
    let p = params(case, p1, p2)?;
    let lat = lattice(case, l1, l2)?;
    let label = parse_label(label)?;
    let err = |e: g2nu::ExactError| e.to_string();
    let alg = p.specialize(&NilpotentLieAlgebra::for_case(case)).map_err(err)?;
    let ctx = DiracContext::new(alg.clone()).map_err(err)?;
    let mode = mode_at(&alg, &lat, label, &p).map_err(err)?;
    let asg = p.assignment();
    let (kind, ev) = match mode.kind {
        ModeKind::Character => ("character", matrix_spectrum(&character_matrix(&ctx, &mode.functional), &asg).map_err(err)?),
        ModeKind::Infinite => {
            let op = hermite_blocks(&ctx, &mode.functional, &ExactScalar::one()).map_err(err)?;
            ("infinite", truncated_spectrum(&op, truncation.max(1) as usize, &asg).map_err(err)?)
        }
    };
    Ok(json!({
        "kind": if mode.is_invariant() { "invariant" } else { kind },
        "label": label,
        "representative": mode.functional.0.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "eigenvalues": ev,
        "symmetry_defect": symmetry_defect(&ev),
        "zero_modes": ev.iter().filter(|x| x.abs() < 1e-9).count(),
    }))
}

pub fn b_spectrum_value(case: &str, p1: &str, p2: &str) -> Result<Value, String> {
    let case = parse_case(case)?;
    let p = params(case, p1, p2)?;
    let alg = NilpotentLieAlgebra::for_case(case);
    let b = odd_signature_matrix(&alg);
    let ev = odd_signature_spectrum(&alg, &b, &p.assignment()).map_err(|e| e.to_string())?;
    Ok(json!({
        "eigenvalues": ev,
        "paired": spectrum_paired(&ev, 1e-8),
        "symmetry_defect": symmetry_defect(&ev),
    }))
}

pub fn nu_report_value(case: &str, p1: &str, p2: &str, l1: u32, l2: u32, cutoff: u32) -> Result<Value, String> {
    let case = parse_case(case)?;
    let p = params(case, p1, p2)?;
    let lat = lattice(case, l1, l2)?;
    let r = compute_nu(case, &p, &lat, cutoff).map_err(|e| e.to_string())?;
    let structured: Value = serde_json::from_str(&emit_report(&r, Format::Json)).map_err(|e| e.to_string())?;
    Ok(json!({ "text": emit_report(&r, Format::Text), "report": structured }))
}

/// Eigenvalues of D on one Fourier sector: the full 8×8 matrix for a
/// character, the first `truncation` Hermite blocks for an
/// infinite-dimensional representation.
#[wasm_bindgen]
pub fn dirac_spectrum(case: &str, p1: &str, p2: &str, label: &str, l1: u32, l2: u32, truncation: u32) -> String {
    wrap(dirac_spectrum_value(case, p1, p2, label, l1, l2, truncation))
}

/// Eigenvalues of the odd signature operator on invariant even forms.
#[wasm_bindgen]
pub fn b_spectrum(case: &str, p1: &str, p2: &str) -> String {
    wrap(b_spectrum_value(case, p1, p2))
}

/// Full ν report: `text` holds the human-readable form, `report` the
/// structured one.
#[wasm_bindgen]
pub fn nu_report(case: &str, p1: &str, p2: &str, l1: u32, l2: u32, cutoff: u32) -> String {
    wrap(nu_report_value(case, p1, p2, l1, l2, cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_sector_has_kernel() {
        let v = dirac_spectrum_value("h1", "1", "", "0,0,0,0,0,0,0", 1, 1, 1).unwrap();
        assert_eq!(v["kind"], "invariant");
        assert_eq!(v["zero_modes"], 4);
    }

    #[test]
    fn character_and_infinite_sectors() {
        let c = dirac_spectrum_value("h1", "2", "", "1,0,0,0,0,0,0", 1, 1, 1).unwrap();
        assert_eq!(c["kind"], "character");
        assert_eq!(c["zero_modes"], 0);
        let i = dirac_spectrum_value("h2", "1", "2", "0,0,0,1,0,0,0", 1, 1, 3).unwrap();
        assert_eq!(i["kind"], "infinite");
        assert_eq!(i["eigenvalues"].as_array().unwrap().len(), 24);
        assert!(i["symmetry_defect"].as_f64().unwrap() < 1e-8);
    }

    #[test]
    fn b_block_is_paired() {
        for (case, p1, p2) in [("h1", "3", ""), ("h2", "2", "5")] {
            assert_eq!(b_spectrum_value(case, p1, p2).unwrap()["paired"], true);
        }
    }

    #[test]
    fn errors_are_reported_as_json() {
        assert!(b_spectrum("h3", "1", "1").contains("error"));
        assert!(dirac_spectrum("h1", "1", "", "1,2", 1, 1, 1).contains("7 integers"));
        assert!(nu_report("h1", "0", "", 1, 1, 0).contains("error"));
    }

    #[test]
    fn nu_at_cutoff_zero() {
        let v = nu_report_value("h1", "1", "", 1, 1, 0).unwrap();
        assert_eq!(v["report"]["nu"]["residue"], 0);
        assert!(v["text"].as_str().unwrap().contains("mod 48"));
    }
}
