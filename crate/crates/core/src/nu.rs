//! Assembly of ν = 2∫φ*ψ − 24(η + h)(D) + 3η(B) mod 48 from the
//! certified constituents, and the report emitter.
//!
//! Certificates that hold for all admissible parameters are computed once
//! per case in a [`CaseBundle`]; [`compute_nu`] adds the checks at one
//! rational parameter point.


use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::certificate::{Certificate, Status};

/// Wall-clock timer; reads 0 on wasm32, which has no system clock.
struct Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(#[cfg(not(target_arch = "wasm32"))] std::time::Instant::now())
    }

    fn seconds(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed().as_secs_f64();
        #[cfg(target_arch = "wasm32")]
        0.0
    }
}
use crate::clifford::verify_clifford_relations;
use crate::dirac::{invariant_kernel_certificate, mode_sweep, symbolic_sector_certificates, DiracContext, ModeSweep};
use crate::eta::{eta_point_certificates, eta_symbolic_certificates, DEFAULT_TRUNCATION};
use crate::exactnum::{qi, ExactError, Q};
use crate::g2;
use crate::liealg::{Case, LatticeSpec, NilpotentLieAlgebra, ParamPoint};
use crate::mq::{mq_certificate, mq_current, frame_coords, MqContext};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default enumeration cutoff for per-mode checks.
pub const DEFAULT_CUTOFF: u32 = 1;

/// Spinors whose current is certified: φ and the eₖφ listed per case.
pub fn mq_spinors(case: Case) -> &'static [usize] {
    match case {
        Case::H1 => &[0, 1, 4, 5],
        Case::H2 => &[0, 7],
    }
}

/// Parameter-independent certificates for one case, plus 2∫φ*ψ.
#[derive(Clone, Debug)]
pub struct CaseBundle {
    pub case: Case,
    pub certificates: Vec<Certificate>,
    pub mq_value: Q,
    pub seconds: f64,
}

impl CaseBundle {
    pub fn new(case: Case) -> Result<Self, ExactError> {
        let start = Stopwatch::start();
        let mut certs = verify_clifford_relations();
        let ctx = DiracContext::for_case(case)?;
        certs.extend(g2::certificates(&ctx.alg, &ctx.frame, &ctx.sc));
        certs.extend(symbolic_sector_certificates(&ctx)?);
        let mq = MqContext::for_case(case)?;
        for &k in mq_spinors(case) {
            certs.push(mq_certificate(&mq, k)?);
        }
        let cur = mq_current(&mq, &frame_coords(0))?;
        let mq_value = match (cur.value.as_constant(), cur.sqrt_pi_value.is_zero()) {
            (Some(z), true) if z.im.is_zero() => z.re,
            _ if cur.value.is_zero() && cur.sqrt_pi_value.is_zero() => Q::zero(),
            _ => return Err(ExactError::Shape(format!("current of phi is not a rational constant: {}", cur.value))),
        };
        certs.extend(eta_symbolic_certificates(case)?);
        Ok(CaseBundle { case, certificates: certs, mq_value, seconds: start.seconds() })
    }
}

/// The four constituents and the residue.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NuValues {
    /// 2∫φ*ψ.
    pub mq: String,
    #[serde(rename = "h_D")]
    pub h_d: usize,
    #[serde(rename = "eta_D")]
    pub eta_d: i64,
    #[serde(rename = "eta_B")]
    pub eta_b: i64,
    pub residue: u32,
}

/// A number in the report together with the certificates it rests on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Claim {
    pub claim: String,
    pub certificates: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NuReport {
    pub case: String,
    pub params: Value,
    pub certificates: Vec<Certificate>,
    pub nu: NuValues,
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
    pub tool_version: String,
    #[serde(skip)]
    pub seconds: f64,
}

impl NuReport {
    pub fn failing(&self) -> Vec<&str> {
        self.certificates.iter().filter(|c| !c.passed()).map(|c| c.id.as_str()).collect()
    }

    pub fn passed(&self) -> bool {
        self.failing().is_empty()
    }

    /// Claim ids that do not name a passing certificate of this report.
    pub fn orphaned_claims(&self) -> Vec<String> {
        self.claims
            .iter()
            .flat_map(|c| c.certificates.iter())
            .filter(|id| !self.certificates.iter().any(|c| &c.id == *id && c.passed()))
            .cloned()
            .collect()
    }
}

/// (mq − 24(η_D + h) + 3η_B) mod 48 for an integral mq.
pub fn nu_residue(mq: &Q, h: usize, eta_d: i64, eta_b: i64) -> Result<u32, ExactError> {
    if !mq.is_integer() {
        return Err(ExactError::Shape(format!("2∫φ*ψ = {mq} is not an integer")));
    }
    let total = mq.to_integer() - num_bigint::BigInt::from(24 * (eta_d + h as i64)) + num_bigint::BigInt::from(3 * eta_b);
    Ok(total.mod_floor(&num_bigint::BigInt::from(48)).to_u32().expect("residue below 48"))
}

fn sweep_certificates(case: Case, sweep: &ModeSweep) -> Vec<Certificate> {
    let fmt = |v: &[[i64; 7]]| v.iter().map(|l| format!("{l:?}")).collect::<Vec<_>>();
    vec![
        Certificate::new(
            "dirac.modes.covered",
            format!("each of the {} enumerated infinite modes is an instance of a certified shape", sweep.infinite_modes),
            "kernel of D on infinite sectors",
            sweep.uncovered.is_empty(),
            json!({"case": case.name(), "uncovered": fmt(&sweep.uncovered)}),
        ),
        Certificate::new(
            "dirac.modes.spectra",
            format!(
                "numeric spectra of all enumerated sectors (infinite modes truncated to {} blocks) are symmetric within 1e-8, and no character sector has an eigenvalue below 1e-6",
                sweep.truncation
            ),
            "spectral symmetry of D",
            sweep.max_defect < 1e-8 && sweep.min_character_gap > 1e-6,
            json!({"max_defect": sweep.max_defect, "min_character_gap": sweep.min_character_gap}),
        ),
    ]
}

/// The parameter grid sampled for each case.
pub fn parameter_grid(case: Case) -> Vec<ParamPoint> {
    match case {
        Case::H1 => [(1, 2), (1, 1), (2, 1), (3, 1)]
            .into_iter()
            .map(|(n, d)| ParamPoint::h1(Q::new(n.into(), d.into())).expect("a != 0"))
            .collect(),
        Case::H2 => (1..=3)
            .flat_map(|b| (1..=3).map(move |c| ParamPoint::h2(qi(b), qi(c)).expect("b, c > 0")))
            .collect(),
    }
}

fn ids(certs: &[Certificate], prefix: &str) -> Vec<String> {
    certs.iter().filter(|c| c.id.starts_with(prefix)).map(|c| c.id.clone()).collect()
}

/// Full pipeline at one parameter point. `h_override` replaces the
/// certified kernel dimension in the arithmetic only (for testing the
/// modular assembly).
pub fn compute_nu_with(bundle: &CaseBundle, params: &ParamPoint, lattice: &LatticeSpec, cutoff: u32, h_override: Option<usize>) -> Result<NuReport, ExactError> {
    let start = Stopwatch::start();
    let case = bundle.case;
    if params.case != case || lattice.case() != case {
        return Err(ExactError::Shape("parameters, lattice and bundle disagree on the case".into()));
    }
    let mut certs = bundle.certificates.clone();

    let alg = params.specialize(&NilpotentLieAlgebra::for_case(case))?;
    let (h, mut inv) = invariant_kernel_certificate(&DiracContext::new(alg)?)?;
    inv.id = "dirac.invariant_kernel.point".into();
    inv.statement = format!("at these parameters the invariant Dirac matrix has kernel of dimension {h}");
    certs.push(inv);

    let sweep = mode_sweep(params, lattice, cutoff, DEFAULT_TRUNCATION)?;
    certs.extend(sweep_certificates(case, &sweep));
    certs.extend(eta_point_certificates(params, &sweep)?);

    let h_used = h_override.unwrap_or(h);
    let residue = nu_residue(&bundle.mq_value, h_used, 0, 0)?;
    let mut mq_ids = ids(&certs, "mq.current.phi");
    mq_ids.extend(ids(&certs, "g2.spinor"));
    let mut h_ids = vec!["dirac.invariant_kernel".to_string(), "dirac.invariant_kernel.point".to_string(), "dirac.character_kernel".to_string()];
    h_ids.extend(ids(&certs, "dirac.infinite_kernel."));
    h_ids.push("dirac.modes.covered".into());
    let mut eta_d_ids = ids(&certs, "eta.parity.");
    eta_d_ids.push("dirac.modes.spectra".into());
    let claims = vec![
        Claim { claim: format!("2∫φ*ψ = {}", bundle.mq_value), certificates: mq_ids },
        Claim { claim: format!("h(D) = {h}"), certificates: h_ids },
        Claim { claim: "η(D) = 0, symmetry-certified".into(), certificates: eta_d_ids },
        Claim {
            claim: "η(B) = 0, symmetry-certified".into(),
            certificates: vec!["eta.isometry".into(), "eta.t_star_d".into(), "eta.b_anticommutes".into(), "eta.b_spectrum".into()],
        },
    ];
    let mut notes = vec![
        "η(B) = 0 and η(D) = 0 follow from the orientation-reversing isometry T and the even characteristic polynomials; they are not summed series".to_string(),
        "T is homotopic to the identity and preserves every spin structure; recorded, not computed".to_string(),
    ];
    if case == Case::H2 {
        notes.push("h(D) is even on this family, so 24h(D) = 0 mod 48 regardless of its value".into());
    }
    if let Some(o) = h_override {
        notes.push(format!("kernel dimension overridden to {o} in the residue"));
    }
    let params_json = Value::Object(params.strings().into_iter().map(|(k, v)| (k, Value::String(v))).chain(lattice_json(lattice)).collect());
    let report = NuReport {
        case: case.name().to_string(),
        params: params_json,
        certificates: certs,
        nu: NuValues { mq: bundle.mq_value.to_string(), h_d: h_used, eta_d: 0, eta_b: 0, residue },
        claims,
        notes,
        tool_version: TOOL_VERSION.to_string(),
        seconds: bundle.seconds + start.seconds(),
    };
    Ok(report)
}

fn lattice_json(l: &LatticeSpec) -> Option<(String, Value)> {
    Some(("lattice".to_string(), serde_json::to_value(l).ok()?))
}

/// [`compute_nu_with`] building the bundle first; a failing certificate is
/// an error naming it.
pub fn compute_nu(case: Case, params: &ParamPoint, lattice: &LatticeSpec, cutoff: u32) -> Result<NuReport, NuError> {
    let bundle = CaseBundle::new(case)?;
    let report = compute_nu_with(&bundle, params, lattice, cutoff, None)?;
    if !report.passed() {
        let ids = report.failing().into_iter().map(String::from).collect();
        return Err(NuError::Failed { ids, report: Box::new(report) });
    }
    Ok(report)
}

#[derive(Debug, thiserror::Error)]
pub enum NuError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("failing certificates: {}", ids.join(", "))]
    Failed { ids: Vec<String>, report: Box<NuReport> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Format> {
        match s {
            "text" => Some(Format::Text),
            "json" | "json-like" | "structured" => Some(Format::Json),
            _ => None,
        }
    }
}

/// Serialize a report. The structured form is pretty JSON with sorted keys
/// and no timing, so identical inputs give identical bytes.
pub fn emit_report(r: &NuReport, format: Format) -> String {
    match format {
        Format::Json => {
            let v = serde_json::to_value(r).expect("report serializes");
            let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            let params: Vec<String> = match &r.params {
                Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", v.as_str().map(String::from).unwrap_or_else(|| v.to_string()))).collect(),
                _ => vec![],
            };
            s += &format!("case {} ({})\n", r.case, params.join(", "));
            for c in &r.certificates {
                let mark = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                };
                s += &format!("  [{mark}] {:<44} {}\n", c.id, c.statement);
            }
            for c in &r.claims {
                s += &format!("  claim: {} <- {}\n", c.claim, c.certificates.join(", "));
            }
            for n in &r.notes {
                s += &format!("  note: {n}\n");
            }
            let n = &r.nu;
            let total = format!("{}", mq_total(r));
            s += &format!(
                "nu = 2∫φ*ψ - 24(η(D) + h(D)) + 3η(B) = {} - 24({} + {}) + 3·{} = {} ≡ {} mod 48\n",
                n.mq, n.eta_d, n.h_d, n.eta_b, total, n.residue
            );
            s += &format!(
                "{} of {} certificates pass; g2nu {} in {:.2} s\n",
                r.certificates.iter().filter(|c| c.passed()).count(),
                r.certificates.len(),
                r.tool_version,
                r.seconds
            );
            s
        }
    }
}

fn mq_total(r: &NuReport) -> String {
    let mq: Q = r.nu.mq.parse().unwrap_or_else(|_| Q::zero());
    let v = mq - Q::from_integer((24 * (r.nu.eta_d + r.nu.h_d as i64) - 3 * r.nu.eta_b).into());
    v.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_arithmetic() {
        assert_eq!(nu_residue(&Q::zero(), 4, 0, 0).unwrap(), 0);
        assert_eq!(nu_residue(&Q::zero(), 2, 0, 0).unwrap(), 0);
        assert_eq!(nu_residue(&Q::zero(), 3, 0, 0).unwrap(), 24);
        assert_eq!(nu_residue(&qi(2), 0, 0, 1).unwrap(), 5);
        assert_eq!(nu_residue(&qi(-1), 0, 0, 0).unwrap(), 47);
        assert!(nu_residue(&Q::new(1.into(), 2.into()), 0, 0, 0).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parameter_grid(Case::H1).len(), 4);
        let h2 = parameter_grid(Case::H2);
        assert_eq!(h2.len(), 9);
        assert!(h2.iter().all(|p| p.get(crate::exactnum::Var::A) == Some(&(p.get(crate::exactnum::Var::B).unwrap() + p.get(crate::exactnum::Var::C).unwrap()))));
    }

    #[test]
    fn format_names() {
        assert_eq!(Format::parse("json-like"), Some(Format::Json));
        assert_eq!(Format::parse("text"), Some(Format::Text));
        assert_eq!(Format::parse("xml"), None);
    }
}
