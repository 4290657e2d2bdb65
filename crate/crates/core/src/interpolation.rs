//! `β(θ̃_r)` at a point: the Frobenius side of the interpolation, its
//! integrality, and the comparison with the Hecke eigenvalue of the
//! representation attached to the module's segments.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::PAdicValuation;
use crate::error::{Error, Result};
use crate::hecke::{theta_tilde, HeckeParams, PiMonomial};
use crate::linalg::exterior_trace;
use crate::phin::{AdmissibilityReport, FilteredPhiNModule};
use crate::wd::{is_generic, psi_from_segments, segments_from_wd, wd_from_module, SegmentList, UnramifiedCharacter};

/// Hodge–Tate weights `i_{κ,1} < … < i_{κ,n}` per embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, Vec<i64>>", into = "BTreeMap<String, Vec<i64>>")]
pub struct HodgeTateWeights(BTreeMap<String, Vec<i64>>);

impl TryFrom<BTreeMap<String, Vec<i64>>> for HodgeTateWeights {
    type Error = Error;
    fn try_from(m: BTreeMap<String, Vec<i64>>) -> Result<Self> {
        HodgeTateWeights::new(m)
    }
}

impl From<HodgeTateWeights> for BTreeMap<String, Vec<i64>> {
    fn from(w: HodgeTateWeights) -> Self {
        w.0
    }
}

fn common_len<'a>(rows: impl Iterator<Item = (&'a String, &'a Vec<i64>)>) -> Result<usize> {
    let mut n = None;
    for (label, v) in rows {
        match n {
            None => n = Some(v.len()),
            Some(k) if k != v.len() => {
                return Err(Error::IrregularWeights(format!("{label} has {} weights, expected {k}", v.len())))
            }
            _ => {}
        }
    }
    n.ok_or_else(|| Error::IrregularWeights("no embeddings".into()))
}

impl HodgeTateWeights {
    pub fn new(weights: BTreeMap<String, Vec<i64>>) -> Result<Self> {
        common_len(weights.iter())?;
        for (label, v) in &weights {
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::IrregularWeights(format!("{label}: {v:?} is not strictly increasing")));
            }
        }
        Ok(HodgeTateWeights(weights))
    }

    /// The jumps of each flag, sorted. Repeated jumps are irregular.
    pub fn from_module(d: &FilteredPhiNModule) -> Result<Self> {
        HodgeTateWeights::new(d.flags().iter().map(|(k, f)| (k.clone(), f.sorted_jumps())).collect())
    }

    pub fn get(&self, label: &str) -> Option<&[i64]> {
        self.0.get(label).map(Vec::as_slice)
    }
}

/// `ξ_{κ,j}` per embedding, `j = 1..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, Vec<i64>>", into = "BTreeMap<String, Vec<i64>>")]
pub struct XiWeights(BTreeMap<String, Vec<i64>>);

impl TryFrom<BTreeMap<String, Vec<i64>>> for XiWeights {
    type Error = Error;
    fn try_from(m: BTreeMap<String, Vec<i64>>) -> Result<Self> {
        XiWeights::new(m)
    }
}

impl From<XiWeights> for BTreeMap<String, Vec<i64>> {
    fn from(w: XiWeights) -> Self {
        w.0
    }
}

impl XiWeights {
    pub fn new(weights: BTreeMap<String, Vec<i64>>) -> Result<Self> {
        common_len(weights.iter())?;
        Ok(XiWeights(weights))
    }

    pub fn zero(labels: &[&str], n: usize) -> Self {
        XiWeights(labels.iter().map(|l| (l.to_string(), vec![0; n])).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.values().next().map_or(0, Vec::len)
    }

    pub fn get(&self, label: &str) -> Option<&[i64]> {
        self.0.get(label).map(Vec::as_slice)
    }

    pub fn labels(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    /// `−Σ_κ Σ_{j=r}^n ξ_{κ,j}`.
    pub fn twist_exponent(&self, r: usize) -> Result<i64> {
        let n = self.rank();
        if r == 0 || r > n {
            return Err(Error::OutOfRange { index: r, max: n });
        }
        Ok(-self.0.values().map(|v| v[r - 1..].iter().sum::<i64>()).sum::<i64>())
    }
}

/// `ξ_{κ,j} = −i_{κ,j} + (j − 1)`.
pub fn xi_from_ht(w: &HodgeTateWeights) -> XiWeights {
    XiWeights(
        w.0.iter()
            .map(|(k, v)| (k.clone(), v.iter().enumerate().map(|(j, i)| j as i64 - i).collect()))
            .collect(),
    )
}

fn check_weights(d: &FilteredPhiNModule, xi: &XiWeights) -> Result<()> {
    let labels: Vec<&String> = xi.labels().collect();
    let expected: Vec<&String> = d.flags().keys().collect();
    if labels != expected {
        return Err(Error::LabelMismatch(format!("weights for {labels:?}, module has {expected:?}")));
    }
    if xi.rank() != d.rank() {
        return Err(Error::IrregularWeights(format!(
            "{} weights per embedding for a rank {} module",
            xi.rank(),
            d.rank()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaValue {
    pub r: usize,
    pub value: PiMonomial,
    pub valuation: PAdicValuation,
}

/// `ϖ^{−Σ_κ Σ_{j=r}^n ξ_{κ,j}}·Tr(∧^r Φ)`.
pub fn beta_value(d: &FilteredPhiNModule, r: usize, xi: &XiWeights) -> Result<BetaValue> {
    check_weights(d, xi)?;
    if r == 0 || r > d.rank() {
        return Err(Error::OutOfRange { index: r, max: d.rank() });
    }
    let value = PiMonomial {
        coeff: exterior_trace(d.phi(), r)?,
        pi_exponent: xi.twist_exponent(r)?,
    };
    let valuation = value.valuation(d.field());
    Ok(BetaValue { r, value, valuation })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityRecord {
    pub r: usize,
    pub value: String,
    pub valuation: PAdicValuation,
    pub integral: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityReport {
    /// `None` when admissibility could not be decided.
    pub admissible: Option<bool>,
    pub warning: Option<String>,
    pub records: Vec<IntegralityRecord>,
    pub integral: bool,
}

/// `val_F(β(θ̃_r)) ≥ 0` for every `r`. Inadmissible or undecided input is
/// still evaluated, with a warning.
pub fn check_integrality(d: &FilteredPhiNModule, xi: &XiWeights) -> Result<IntegralityReport> {
    check_weights(d, xi)?;
    let (admissible, warning) = match d.is_weakly_admissible(None) {
        Ok(AdmissibilityReport { admissible: true, .. }) => (Some(true), None),
        Ok(_) => (Some(false), Some("module is not weakly admissible".to_string())),
        Err(e) => (None, Some(format!("admissibility not decided: {e}"))),
    };
    let records = (1..=d.rank())
        .map(|r| {
            let b = beta_value(d, r, xi)?;
            Ok(IntegralityRecord {
                r,
                value: b.value.render(d.field()),
                integral: b.valuation >= PAdicValuation::Finite(0),
                valuation: b.valuation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let integral = records.iter().all(|r| r.integral);
    Ok(IntegralityReport {
        admissible,
        warning,
        records,
        integral,
    })
}

pub const CONVENTION: &str = "Phi acts as geometric Frobenius; psi lists each segment (a, k) as a*q^(k-1), ..., a; \
both sides carry the twist pi^(-sum_k sum_{j=r..n} xi_{k,j}); pi = p when e = 1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyRecord {
    pub r: usize,
    pub hecke: String,
    pub galois: String,
    pub equal: bool,
    pub valuation: PAdicValuation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConsistencyOutcome {
    Checked { records: Vec<ConsistencyRecord>, consistent: bool },
    NotGeneric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub segments: SegmentList,
    pub psi: UnramifiedCharacter,
    pub outcome: ConsistencyOutcome,
    pub convention: &'static str,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> Option<bool> {
        match &self.outcome {
            ConsistencyOutcome::Checked { consistent, .. } => Some(*consistent),
            ConsistencyOutcome::NotGeneric => None,
        }
    }
}

/// Hecke side `θ̃_r(ψ)` against Galois side `β(θ̃_r)` for every `r`, where
/// `ψ` comes from the segments of the module's Weil–Deligne data.
pub fn consistency_check(d: &FilteredPhiNModule, xi: &XiWeights) -> Result<ConsistencyReport> {
    check_weights(d, xi)?;
    let field = d.field();
    if field.f != field.f0 {
        return Err(Error::BadField(format!(
            "the comparison needs f = f0, got f = {} and f0 = {}",
            field.f, field.f0
        )));
    }
    let q = d.residue_cardinality();
    let segments = segments_from_wd(&wd_from_module(d))?;
    let psi = psi_from_segments(&segments, q);
    if !is_generic(&segments, q) {
        return Ok(ConsistencyReport {
            segments,
            psi,
            outcome: ConsistencyOutcome::NotGeneric,
            convention: CONVENTION,
        });
    }
    let records = (1..=d.rank())
        .map(|r| {
            let hecke = theta_tilde(&psi, HeckeParams::new(d.rank(), q, r)?, xi)?;
            let galois = beta_value(d, r, xi)?;
            Ok(ConsistencyRecord {
                r,
                equal: hecke == galois.value,
                hecke: hecke.render(field),
                galois: galois.value.render(field),
                valuation: galois.valuation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let consistent = records.iter().all(|r| r.equal);
    Ok(ConsistencyReport {
        segments,
        psi,
        outcome: ConsistencyOutcome::Checked { records, consistent },
        convention: CONVENTION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::linalg::Matrix;
    use crate::phin::{build_module, FieldDescriptor, Flag, ModuleSpec};

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn ht(v: &[i64]) -> HodgeTateWeights {
        HodgeTateWeights::new(BTreeMap::from([("k0".to_string(), v.to_vec())])).unwrap()
    }

    fn xi(v: &[i64]) -> XiWeights {
        XiWeights::new(BTreeMap::from([("k0".to_string(), v.to_vec())])).unwrap()
    }

    fn module(p: u64, phi: Matrix, mono: Matrix, flag: Matrix, jumps: Vec<i64>) -> FilteredPhiNModule {
        build_module(ModuleSpec {
            field: FieldDescriptor::desk(p),
            n: phi.rows(),
            phi,
            monodromy: mono,
            filtration: BTreeMap::from([("k0".to_string(), Flag { flag, jumps })]),
        })
        .unwrap()
    }

    fn steinberg(p: u64) -> FilteredPhiNModule {
        module(
            p,
            Matrix::diag(&[r(1), r(p as i64)]),
            Matrix::unit(2, 0, 1),
            Matrix::from_i64_rows(&[&[1, 1], &[1, -1]]),
            vec![1, 0],
        )
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi_from_ht(&ht(&[0, 1, 2])), xi(&[0, 0, 0]));
        assert_eq!(xi_from_ht(&ht(&[0, 2])), xi(&[0, -1]));
        assert_eq!(xi_from_ht(&ht(&[-1, 0, 1])), xi(&[1, 1, 1]));
        assert!(HodgeTateWeights::new(BTreeMap::from([("k0".to_string(), vec![1, 1])])).is_err());
        assert_eq!(HodgeTateWeights::from_module(&steinberg(3)).unwrap(), ht(&[0, 1]));
    }

    #[test]
    fn twist_exponents() {
        let w = xi(&[1, -2, 3]);
        assert_eq!(w.twist_exponent(1).unwrap(), -2);
        assert_eq!(w.twist_exponent(2).unwrap(), -1);
        assert_eq!(w.twist_exponent(3).unwrap(), -3);
        assert!(w.twist_exponent(4).is_err());
        let two = XiWeights::new(BTreeMap::from([("a".to_string(), vec![1, 1]), ("b".to_string(), vec![0, 2])])).unwrap();
        assert_eq!(two.twist_exponent(2).unwrap(), -3);
    }

    #[test]
    fn beta_examples() {
        for p in [2u64, 3, 5] {
            let d = steinberg(p);
            let pr = r(p as i64);
            let zero = xi(&[0, 0]);
            assert_eq!(beta_value(&d, 1, &zero).unwrap().value.evaluate(d.field()), Some(&pr + &r(1)));
            assert_eq!(beta_value(&d, 2, &zero).unwrap().value.evaluate(d.field()), Some(pr.clone()));
            let b = beta_value(&d, 2, &xi(&[0, -1])).unwrap();
            assert_eq!(b.value.evaluate(d.field()), Some(&pr * &pr));
            assert_eq!(b.valuation, PAdicValuation::Finite(2));
            assert!(beta_value(&d, 3, &zero).is_err());
            assert!(beta_value(&d, 1, &xi(&[0])).is_err());
        }
    }

    #[test]
    fn beta_depends_only_on_the_characteristic_polynomial() {
        let d = steinberg(3);
        let s = Matrix::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let e = d.change_basis(&s).unwrap();
        for k in 1..=2 {
            assert_eq!(beta_value(&d, k, &xi(&[0, 0])).unwrap(), beta_value(&e, k, &xi(&[0, 0])).unwrap());
        }
    }

    #[test]
    fn steinberg_is_integral() {
        let d = steinberg(2);
        let rep = check_integrality(&d, &xi_from_ht(&HodgeTateWeights::from_module(&d).unwrap())).unwrap();
        assert_eq!(rep.admissible, Some(true));
        assert!(rep.integral);
        let vals: Vec<_> = rep.records.iter().map(|r| r.valuation).collect();
        assert_eq!(vals, vec![PAdicValuation::Finite(0), PAdicValuation::Finite(1)]);
    }

    #[test]
    fn negative_weight_line_is_not_integral() {
        // Φ = (1/p), jump −1: admissible, HT weight −1, ξ = (1), β = p^{-2}.
        let d = module(3, Matrix::diag(&[Rational::frac(1, 3)]), Matrix::zeros(1, 1), Matrix::identity(1), vec![-1]);
        let rep = check_integrality(&d, &xi_from_ht(&HodgeTateWeights::from_module(&d).unwrap())).unwrap();
        assert_eq!(rep.admissible, Some(true));
        assert_eq!(rep.records[0].valuation, PAdicValuation::Finite(-2));
        assert!(!rep.integral);
    }

    #[test]
    fn inadmissible_module_warns() {
        let d = module(
            3,
            Matrix::diag(&[Rational::frac(1, 3), r(1)]),
            Matrix::zeros(2, 2),
            Matrix::identity(2),
            vec![0, 1],
        );
        let rep = check_integrality(&d, &xi(&[0, 0])).unwrap();
        assert_eq!(rep.admissible, Some(false));
        assert!(rep.warning.is_some());
        assert_eq!(rep.records[0].valuation, PAdicValuation::Finite(-1));
        assert!(!rep.integral);
        let rep = check_integrality(
            &module(3, Matrix::identity(2), Matrix::zeros(2, 2), Matrix::identity(2), vec![0, 1]),
            &xi(&[0, 0]),
        )
        .unwrap();
        assert_eq!(rep.admissible, None);
    }

    #[test]
    fn steinberg_consistency() {
        for p in [2u64, 3, 5] {
            let d = steinberg(p);
            let rep = consistency_check(&d, &xi(&[0, 0])).unwrap();
            assert_eq!(rep.segments.segments().len(), 1);
            assert_eq!(rep.psi.values(), &[r(p as i64), r(1)]);
            let ConsistencyOutcome::Checked { records, consistent } = &rep.outcome else {
                panic!("Steinberg is generic");
            };
            assert!(consistent);
            assert_eq!(records[0].hecke, (p + 1).to_string());
            assert_eq!(records[1].galois, p.to_string());
        }
    }

    #[test]
    fn crystalline_consistency_and_linking() {
        let d = module(5, Matrix::diag(&[r(2), r(15)]), Matrix::zeros(2, 2), Matrix::identity(2), vec![0, 1]);
        assert_eq!(consistency_check(&d, &xi(&[0, 0])).unwrap().consistent(), Some(true));
        let d = module(5, Matrix::diag(&[r(1), r(5)]), Matrix::zeros(2, 2), Matrix::identity(2), vec![0, 1]);
        let rep = consistency_check(&d, &xi(&[0, 0])).unwrap();
        assert_eq!(rep.outcome, ConsistencyOutcome::NotGeneric);
        assert_eq!(rep.consistent(), None);
    }

    #[test]
    fn consistency_json_shape() {
        let rep = consistency_check(&steinberg(2), &xi(&[0, 0])).unwrap();
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["outcome"]["status"], "checked");
        assert_eq!(
            v["outcome"]["records"][0],
            serde_json::json!({"r": 1, "hecke": "3", "galois": "3", "equal": true, "valuation": 0})
        );
        assert_eq!(v["segments"], serde_json::json!([{"chi": "1", "len": 2}]));
    }
}
