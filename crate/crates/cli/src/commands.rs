use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use phinlab::hecke::{coset_classes, theta_closed, theta_enumerated, HeckeParams};
use phinlab::interpolation::{
    beta_value, check_integrality, consistency_check, xi_from_ht, ConsistencyOutcome, HodgeTateWeights, XiWeights,
};
use phinlab::linalg::kernel_profile;
use phinlab::partitions::{partitions_of, stratum_member, strata_thresholds, Partition, PartitionFunction};
use phinlab::sweep::{run_sweep, SweepConfig};
use phinlab::wd::{is_generic, monodromy_partition, psi_from_segments, segments_from_wd, wd_from_module, UnramifiedCharacter};
use phinlab::{Error, FilteredPhiNModule, Matrix, Rational};

use crate::input::{check_size, load_candidates, load_module, max_n, parse, CliError};

/// A finished run: the same verdict in both renderings.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub pass: bool,
}

fn fmt_matrix(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let row: Vec<String> = m.row(i).iter().map(ToString::to_string).collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn fmt_list<T: ToString>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn weights(d: &FilteredPhiNModule, xi: Option<&str>) -> Result<XiWeights, CliError> {
    match xi {
        Some(text) => parse(text, "xi weights"),
        None => HodgeTateWeights::from_module(d)
            .map(|ht| xi_from_ht(&ht))
            .map_err(|e| CliError::Input(format!("{e}; pass --xi explicitly"))),
    }
}

/// Errors caused by the weights argument rather than the mathematics.
fn weight_error(e: Error) -> CliError {
    match e {
        Error::LabelMismatch(_) | Error::IrregularWeights(_) => CliError::Input(e.to_string()),
        e => e.into(),
    }
}

pub fn check_admissible(path: &Path, candidates: Option<&Path>) -> Result<Report, CliError> {
    let d = load_module(path)?;
    let cands = candidates.map(|c| load_candidates(c, d.rank())).transpose()?;
    let rep = d.is_weakly_admissible(cands.as_deref()).map_err(|e| match e {
        Error::RepeatedEigenvalues(_) | Error::NotFullyRational(_) => {
            CliError::Math(format!("{e}; supply stable subspaces with --candidates"))
        }
        Error::UnstableSubspace(_) => CliError::Input(format!("candidate list: {e}")),
        e => e.into(),
    })?;
    let mut text = String::new();
    writeln!(text, "weakly admissible: {}", yes_no(rep.admissible)).ok();
    if cands.is_some() {
        writeln!(text, "  (relative to the supplied candidates)").ok();
    }
    writeln!(text, "t_H = {}, t_N = {}", rep.t_h, rep.t_n).ok();
    writeln!(text, "stable subspaces checked: {}", rep.subspaces_checked).ok();
    if let Some(w) = &rep.witness {
        writeln!(
            text,
            "witness: span {} with t_H = {} > t_N = {}",
            w.subspace.basis_vectors().iter().map(|v| fmt_list(v)).collect::<Vec<_>>().join(" "),
            w.t_h,
            w.t_n
        )
        .ok();
    }
    Ok(Report {
        pass: rep.admissible,
        json: serde_json::to_value(&rep).expect("report serializes"),
        text,
    })
}

pub fn wd(path: &Path) -> Result<Report, CliError> {
    let d = load_module(path)?;
    let w = wd_from_module(&d);
    let px = monodromy_partition(&w)?;
    let mut text = String::new();
    writeln!(text, "q = {}", w.q()).ok();
    writeln!(text, "Frobenius = {}", fmt_matrix(w.frobenius())).ok();
    writeln!(text, "monodromy = {}", fmt_matrix(w.monodromy())).ok();
    for (label, p) in px.iter() {
        writeln!(text, "P_x({label}) = {}", fmt_list(p.parts())).ok();
    }
    Ok(Report {
        json: json!({
            "q": w.q(),
            "frobenius": w.frobenius(),
            "monodromy": w.monodromy(),
            "partition": px,
        }),
        text,
        pass: true,
    })
}

pub fn segments(path: &Path) -> Result<Report, CliError> {
    let d = load_module(path)?;
    let q = d.residue_cardinality();
    let segs = segments_from_wd(&wd_from_module(&d))?;
    let generic = is_generic(&segs, q);
    let psi = psi_from_segments(&segs, q);
    let mut text = String::new();
    writeln!(text, "segments (chi, length): {segs}").ok();
    writeln!(text, "generic: {}", yes_no(generic)).ok();
    writeln!(text, "psi = {}", fmt_list(psi.values())).ok();
    Ok(Report {
        json: json!({"q": q, "segments": segs, "generic": generic, "psi": psi}),
        text,
        pass: true,
    })
}

pub fn hecke(n: usize, r: usize, q: u64, psi: Vec<Rational>) -> Result<Report, CliError> {
    check_size(n)?;
    let h = HeckeParams::new(n, q, r).map_err(|e| CliError::Input(e.to_string()))?;
    let psi = UnramifiedCharacter::new(psi).map_err(|e| CliError::Input(format!("--psi: {e}")))?;
    if psi.len() != n {
        return Err(CliError::Input(format!("--psi has {} values, --n is {n}", psi.len())));
    }
    let closed = theta_closed(&psi, h)?;
    let enumerated = theta_enumerated(&psi, h)?;
    let classes = coset_classes(h);
    let equal = closed == enumerated;
    let mut text = String::new();
    writeln!(text, "theta_{r} (closed form) = {closed}").ok();
    writeln!(text, "theta_{r} (coset sum)   = {enumerated}").ok();
    writeln!(text, "equal: {}", yes_no(equal)).ok();
    writeln!(text, "coset classes: {}", classes.len()).ok();
    Ok(Report {
        json: json!({
            "n": n, "r": r, "q": q, "psi": psi,
            "closed": closed, "enumerated": enumerated, "equal": equal,
            "classes": classes,
        }),
        text,
        pass: equal,
    })
}

pub fn beta(path: &Path, xi: Option<&str>) -> Result<Report, CliError> {
    let d = load_module(path)?;
    let xi = weights(&d, xi)?;
    let rep = check_integrality(&d, &xi).map_err(weight_error)?;
    let mut values = Vec::new();
    let mut text = String::new();
    for r in 1..=d.rank() {
        let b = beta_value(&d, r, &xi).map_err(weight_error)?;
        writeln!(
            text,
            "r = {r}: beta = {}  (val_F = {})",
            b.value.render(d.field()),
            b.valuation
        )
        .ok();
        values.push(b);
    }
    if let Some(w) = &rep.warning {
        writeln!(text, "warning: {w}").ok();
    }
    writeln!(text, "integral: {}", yes_no(rep.integral)).ok();
    Ok(Report {
        json: json!({"xi": xi, "values": values, "integrality": rep}),
        text,
        pass: rep.integral,
    })
}

pub fn consistency(path: &Path, xi: Option<&str>) -> Result<Report, CliError> {
    let d = load_module(path)?;
    let xi = weights(&d, xi)?;
    let rep = consistency_check(&d, &xi).map_err(weight_error)?;
    let mut text = String::new();
    writeln!(text, "segments: {}", rep.segments).ok();
    writeln!(text, "psi = {}", fmt_list(rep.psi.values())).ok();
    let pass = match &rep.outcome {
        ConsistencyOutcome::NotGeneric => {
            writeln!(text, "not generic: linked segments, no verdict").ok();
            false
        }
        ConsistencyOutcome::Checked { records, consistent } => {
            for rec in records {
                writeln!(
                    text,
                    "r = {}: hecke {} {} galois {}  (val_F = {})",
                    rec.r,
                    rec.hecke,
                    if rec.equal { "==" } else { "!=" },
                    rec.galois,
                    rec.valuation
                )
                .ok();
            }
            writeln!(text, "consistent: {}", yes_no(*consistent)).ok();
            *consistent
        }
    };
    writeln!(text, "convention: {}", rep.convention).ok();
    Ok(Report {
        json: serde_json::to_value(&rep).expect("report serializes"),
        text,
        pass,
    })
}

pub fn strata(path: &Path, partition: Option<&str>) -> Result<Report, CliError> {
    let d = load_module(path)?;
    let n = d.rank();
    let labels: Vec<&str> = d.field().embeddings.iter().map(String::as_str).collect();
    let mats = labels.iter().map(|l| (l.to_string(), d.monodromy().clone())).collect();
    let px = monodromy_partition(&wd_from_module(&d))?;
    let profile = kernel_profile(d.monodromy())?;
    let candidates: Vec<Partition> = match partition {
        Some(s) => {
            let parts = s
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Input(format!("--partition: {e}")))?;
            let p = Partition::new(parts).map_err(|e| CliError::Input(format!("--partition: {e}")))?;
            if p.total() != n {
                return Err(CliError::Input(format!("--partition sums to {}, rank is {n}", p.total())));
            }
            vec![p]
        }
        None => partitions_of(n),
    };
    let mut text = String::new();
    for (label, p) in px.iter() {
        writeln!(text, "P_x({label}) = {}", fmt_list(p.parts())).ok();
    }
    writeln!(text, "dim Ker N^i, i = 0..n: {}", fmt_list(&profile)).ok();
    let mut rows = Vec::new();
    for p in candidates {
        let pf = PartitionFunction::constant(labels.iter().copied(), &p);
        let m = strata_thresholds(&pf, n)?;
        let member = stratum_member(&mats, &pf)?;
        writeln!(
            text,
            "P = {}: thresholds {}, in stratum: {}",
            fmt_list(p.parts()),
            fmt_list(&m),
            yes_no(member)
        )
        .ok();
        rows.push(json!({"partition": p, "thresholds": m, "member": member}));
    }
    Ok(Report {
        json: json!({"partition": px, "kernel_dims": profile, "strata": rows}),
        text,
        pass: true,
    })
}

pub fn sweep(seed: u64, cases: usize) -> Result<Report, CliError> {
    let cfg = SweepConfig {
        seed,
        cases_per_kind: cases,
        max_n: max_n()?.min(4),
    };
    let rep = run_sweep(cfg)?;
    let mut text = String::new();
    writeln!(text, "seed {seed}, {} cases", rep.cases.len()).ok();
    for (kind, s) in &rep.summary {
        writeln!(text, "{kind}: {} passed, {} failed", s.passed, s.failed).ok();
    }
    for c in rep.cases.iter().filter(|c| !c.passed) {
        writeln!(text, "FAILED {}", c.id).ok();
    }
    Ok(Report {
        pass: rep.all_passed(),
        json: serde_json::to_value(&rep).expect("report serializes"),
        text,
    })
}
