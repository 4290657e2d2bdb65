//! Filtered (φ,N)-modules with trivial Galois action.
//!
//! The Frobenius is stored linearized: `phi` is the matrix `Φ = φ^f` on one
//! `L_0`-component, so the semilinear relation `Nφ = pφN` becomes
//! `NΦ = p^f ΦN`. Each embedding carries a full flag: a basis together with
//! a jump per basis vector, and `Fil^i` is spanned by the vectors whose jump
//! is at least `i`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, padic_val_unchecked, PAdicValuation, Rational};
use crate::error::{Error, Result};
use crate::linalg::{intersect, jordan_partition, rational_eigenvalues, Matrix, Spectrum, Subspace};

fn one() -> u32 {
    1
}

/// Numerical data of the base field `F`, the field `L_0` and the embeddings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    /// Residue degree of `F`; `q = p^f0`.
    #[serde(default = "one")]
    pub f0: u32,
    /// Ramification index; `val_F = e * val_p`.
    #[serde(default = "one")]
    pub e: u32,
    /// Residue degree of `L_0`.
    #[serde(default = "one")]
    pub f: u32,
    pub embeddings: Vec<String>,
    /// Degree factor `d` in `t_N = val_F(det Φ) / (d f)`.
    #[serde(default = "one")]
    pub degree_factor: u32,
}

impl FieldDescriptor {
    /// `F = Q_p` with a single embedding `k0`.
    pub fn desk(p: u64) -> Self {
        FieldDescriptor {
            p,
            f0: 1,
            e: 1,
            f: 1,
            embeddings: vec!["k0".to_string()],
            degree_factor: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::BadField(format!("p = {} is not prime", self.p)));
        }
        if self.f0 == 0 || self.e == 0 || self.f == 0 || self.degree_factor == 0 {
            return Err(Error::BadField("degrees must be positive".into()));
        }
        if self.embeddings.is_empty() {
            return Err(Error::BadField("no embeddings".into()));
        }
        let mut seen = self.embeddings.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.embeddings.len() {
            return Err(Error::BadField("duplicate embedding labels".into()));
        }
        if self.q().is_none() || self.p_f().is_none() {
            return Err(Error::BadField("residue cardinality overflows".into()));
        }
        Ok(())
    }

    /// Residue cardinality `q = p^f0` of `F`.
    pub fn q(&self) -> Option<u64> {
        self.p.checked_pow(self.f0)
    }

    /// `p^f`, the factor in `NΦ = p^f ΦN`.
    pub fn p_f(&self) -> Option<u64> {
        self.p.checked_pow(self.f)
    }

    pub(crate) fn q_unchecked(&self) -> u64 {
        self.q().expect("validated field descriptor")
    }

    /// `val_F(x) = e * val_p(x)`.
    pub fn val_f(&self, x: &Rational) -> PAdicValuation {
        padic_val_unchecked(x, self.p).scale(i64::from(self.e))
    }

    /// `ϖ` as a rational number, available when `F` is unramified over `Q_p`.
    pub fn uniformizer(&self) -> Option<Rational> {
        (self.e == 1).then(|| Rational::from_int(self.p))
    }
}

/// A flag on `D_{L,κ}`: basis columns with one jump each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flag {
    pub flag: Matrix,
    pub jumps: Vec<i64>,
}

impl Flag {
    /// `Fil^i`: span of the columns whose jump is `>= i`.
    pub fn fil(&self, i: i64) -> Subspace {
        let cols: Vec<_> = self
            .jumps
            .iter()
            .enumerate()
            .filter(|(_, &j)| j >= i)
            .map(|(c, _)| self.flag.column(c))
            .collect();
        Subspace::span(self.flag.rows(), &cols).expect("flag columns have ambient length")
    }

    /// Distinct jumps, increasing.
    pub fn distinct_jumps(&self) -> Vec<i64> {
        let mut j = self.jumps.clone();
        j.sort_unstable();
        j.dedup();
        j
    }

    /// Jumps with multiplicity, increasing: the Hodge polygon slopes.
    pub fn sorted_jumps(&self) -> Vec<i64> {
        let mut j = self.jumps.clone();
        j.sort_unstable();
        j
    }

    /// `Σ_i i·dim(Fil^i ∩ V / Fil^{i+1} ∩ V)`.
    pub fn hodge_number_on(&self, v: &Subspace) -> Result<i64> {
        let jumps = self.distinct_jumps();
        let mut dims: Vec<usize> = jumps
            .iter()
            .map(|&j| intersect(&self.fil(j), v).map(|s| s.dim()))
            .collect::<Result<_>>()?;
        dims.push(0);
        Ok(jumps
            .iter()
            .enumerate()
            .map(|(k, &j)| j * (dims[k] - dims[k + 1]) as i64)
            .sum())
    }

    fn conjugate_by(&self, s: &Matrix) -> Result<Flag> {
        Ok(Flag {
            flag: s.mul(&self.flag)?,
            jumps: self.jumps.clone(),
        })
    }
}

/// The JSON form of a module, before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub field: FieldDescriptor,
    pub n: usize,
    pub phi: Matrix,
    pub monodromy: Matrix,
    pub filtration: BTreeMap<String, Flag>,
}

impl ModuleSpec {
    /// Every violated invariant, in a fixed order. Empty iff the spec builds.
    pub fn violations(&self) -> Vec<Error> {
        let mut out = Vec::new();
        if let Err(e) = self.field.validate() {
            out.push(e);
            return out;
        }
        let n = self.n;
        let shape_ok = |m: &Matrix| m.rows() == n && m.cols() == n;
        if n == 0 {
            out.push(Error::Shape("rank must be positive".into()));
            return out;
        }
        if !shape_ok(&self.phi) {
            out.push(Error::Shape(format!("phi is {}x{}, expected {n}x{n}", self.phi.rows(), self.phi.cols())));
        }
        if !shape_ok(&self.monodromy) {
            out.push(Error::Shape(format!(
                "monodromy is {}x{}, expected {n}x{n}",
                self.monodromy.rows(),
                self.monodromy.cols()
            )));
        }
        if !out.is_empty() {
            return out;
        }
        if self.phi.det().map_or(true, |d| d.is_zero()) {
            out.push(Error::SingularFrobenius);
        }
        if self.monodromy.pow(n).map_or(true, |m| !m.is_zero()) {
            out.push(Error::NonNilpotentMonodromy { power: n });
        }
        let pf = Rational::from_int(self.field.p_f().expect("validated"));
        let lhs = self.monodromy.mul(&self.phi).expect("square");
        let rhs = self.phi.mul(&self.monodromy).expect("square").scale(&pf);
        if let Some(k) = (0..n * n).find(|&k| lhs.entries()[k] != rhs.entries()[k]) {
            out.push(Error::RelationViolation {
                row: k / n,
                col: k % n,
                lhs: Box::new(lhs.entries()[k].clone()),
                rhs: Box::new(rhs.entries()[k].clone()),
            });
        }
        for label in &self.field.embeddings {
            let bad = |reason: String| Error::BadFlag {
                label: label.clone(),
                reason,
            };
            match self.filtration.get(label) {
                None => out.push(bad("missing".into())),
                Some(fl) => {
                    if !shape_ok(&fl.flag) {
                        out.push(bad(format!("flag is {}x{}, expected {n}x{n}", fl.flag.rows(), fl.flag.cols())));
                    } else if fl.flag.det().map_or(true, |d| d.is_zero()) {
                        out.push(bad("flag basis is singular".into()));
                    }
                    if fl.jumps.len() != n {
                        out.push(bad(format!("{} jumps for rank {n}", fl.jumps.len())));
                    }
                }
            }
        }
        for label in self.filtration.keys() {
            if !self.field.embeddings.contains(label) {
                out.push(Error::BadFlag {
                    label: label.clone(),
                    reason: "not an embedding of the field".into(),
                });
            }
        }
        out
    }
}

/// A validated filtered (φ,N)-module. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredPhiNModule {
    spec: ModuleSpec,
}

/// Validate raw module data.
pub fn build_module(spec: ModuleSpec) -> Result<FilteredPhiNModule> {
    match spec.violations().into_iter().next() {
        Some(e) => Err(e),
        None => Ok(FilteredPhiNModule { spec }),
    }
}

/// Which family of subspaces an admissibility verdict ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// Every (Φ,N)-stable subspace was enumerated.
    Enumerated,
    /// Only user-supplied candidate subspaces were checked.
    RelativeToCandidates,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub subspace: Subspace,
    pub t_h: Rational,
    pub t_n: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub t_h: Rational,
    pub t_n: Rational,
    pub mode: CheckMode,
    pub subspaces_checked: usize,
    pub witness: Option<Witness>,
}

impl FilteredPhiNModule {
    pub fn from_json(text: &str) -> std::result::Result<Self, ModuleInputError> {
        let spec: ModuleSpec = serde_json::from_str(text).map_err(ModuleInputError::Json)?;
        build_module(spec).map_err(ModuleInputError::Invalid)
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.spec.field
    }

    pub fn rank(&self) -> usize {
        self.spec.n
    }

    pub fn phi(&self) -> &Matrix {
        &self.spec.phi
    }

    pub fn monodromy(&self) -> &Matrix {
        &self.spec.monodromy
    }

    pub fn flags(&self) -> &BTreeMap<String, Flag> {
        &self.spec.filtration
    }

    pub fn flag(&self, label: &str) -> Option<&Flag> {
        self.spec.filtration.get(label)
    }

    /// `t_N(D) = val_F(det Φ) / (d f)`.
    pub fn newton_number(&self) -> Rational {
        self.newton_number_of_det(&self.phi().det().expect("square"))
    }

    fn newton_number_of_det(&self, det: &Rational) -> Rational {
        let fd = self.field();
        let v = fd.val_f(det).finite().expect("Φ is invertible");
        Rational::frac(v, i64::from(fd.degree_factor) * i64::from(fd.f))
    }

    /// `t_N` of a Φ-stable subspace.
    pub fn newton_number_on(&self, v: &Subspace) -> Result<Rational> {
        if v.dim() == 0 {
            return Ok(Rational::zero());
        }
        let restricted = v.restrict(self.phi()).map_err(|_| Error::UnstableSubspace("phi"))?;
        Ok(self.newton_number_of_det(&restricted.det()?))
    }

    /// `t_H` of `D`, or of a (Φ,N)-stable `V` with the induced filtration.
    pub fn hodge_number(&self, v: Option<&Subspace>) -> Result<Rational> {
        let total = match v {
            None => self.flags().values().map(|f| f.jumps.iter().sum::<i64>()).sum(),
            Some(v) => {
                self.check_stable(v)?;
                self.flags()
                    .values()
                    .map(|f| f.hodge_number_on(v))
                    .sum::<Result<i64>>()?
            }
        };
        Ok(Rational::from_int(total))
    }

    fn check_stable(&self, v: &Subspace) -> Result<()> {
        if v.ambient_dim() != self.rank() {
            return Err(Error::AmbientMismatch(v.ambient_dim(), self.rank()));
        }
        if !v.is_stable_under(self.phi())? {
            return Err(Error::UnstableSubspace("phi"));
        }
        if !v.is_stable_under(self.monodromy())? {
            return Err(Error::UnstableSubspace("N"));
        }
        Ok(())
    }

    /// Distinct rational Frobenius eigenvalues with one eigenvector each.
    pub fn eigenlines(&self) -> Result<Vec<(Rational, Vec<Rational>)>> {
        let spectrum = match rational_eigenvalues(self.phi())? {
            Spectrum::Rational(s) => s,
            Spectrum::NotFullyRational { unfactored, .. } => return Err(Error::NotFullyRational(unfactored)),
        };
        if let Some((lam, _)) = spectrum.iter().find(|(_, k)| *k > 1) {
            return Err(Error::RepeatedEigenvalues(Box::new(lam.clone())));
        }
        let n = self.rank();
        spectrum
            .into_iter()
            .map(|(lam, _)| {
                let shifted = self.phi().sub(&Matrix::identity(n).scale(&lam))?;
                let mut ns = shifted.nullspace();
                let v = ns.pop().ok_or_else(|| Error::Internal("eigenvalue without eigenvector".into()))?;
                Ok((lam, v))
            })
            .collect()
    }

    /// All (Φ,N)-stable subspaces, including `0` and `D`, ordered by
    /// dimension and then by the increasing eigenvalues they contain.
    pub fn enumerate_stable_subspaces(&self) -> Result<Vec<Subspace>> {
        let lines = self.eigenlines()?;
        let n = lines.len();
        let mut masks: Vec<u64> = (0..1u64 << n).collect();
        masks.sort_by_key(|&m| {
            let bits: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
            (bits.len(), bits)
        });
        let mut out = Vec::new();
        for mask in masks {
            let vecs: Vec<_> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| lines[i].1.clone())
                .collect();
            let v = Subspace::span(n, &vecs)?;
            if v.is_stable_under(self.monodromy())? {
                out.push(v);
            }
        }
        Ok(out)
    }

    /// Weak admissibility: `t_H(D) = t_N(D)` and `t_H(D') <= t_N(D')` for
    /// every stable `D'`. With `candidates`, only those subspaces are checked
    /// and the verdict is relative to them.
    pub fn is_weakly_admissible(&self, candidates: Option<&[Subspace]>) -> Result<AdmissibilityReport> {
        let (subspaces, mode) = match candidates {
            Some(c) => {
                for v in c {
                    self.check_stable(v)?;
                }
                (c.to_vec(), CheckMode::RelativeToCandidates)
            }
            None => (self.enumerate_stable_subspaces()?, CheckMode::Enumerated),
        };
        let t_h = self.hodge_number(None)?;
        let t_n = self.newton_number();
        let mut report = AdmissibilityReport {
            admissible: true,
            t_h: t_h.clone(),
            t_n: t_n.clone(),
            mode,
            subspaces_checked: 0,
            witness: None,
        };
        if t_h != t_n {
            report.admissible = false;
            report.witness = Some(Witness {
                subspace: Subspace::full(self.rank()),
                t_h,
                t_n,
            });
            return Ok(report);
        }
        for v in subspaces {
            report.subspaces_checked += 1;
            let th = self.hodge_number(Some(&v))?;
            let tn = self.newton_number_on(&v)?;
            if th > tn {
                report.admissible = false;
                report.witness = Some(Witness {
                    subspace: v,
                    t_h: th,
                    t_n: tn,
                });
                break;
            }
        }
        Ok(report)
    }

    /// `Tr(Φ^{-a})`.
    pub fn weil_trace(&self, a: i64) -> Rational {
        self.phi()
            .pow_signed(-a)
            .and_then(|m| m.trace())
            .expect("Φ is square and invertible")
    }

    /// Jordan type of the monodromy.
    pub fn monodromy_type(&self) -> crate::partitions::Partition {
        jordan_partition(self.monodromy()).expect("validated nilpotent")
    }

    /// `D ⊕ D'` over the same field.
    pub fn direct_sum(&self, other: &FilteredPhiNModule) -> Result<FilteredPhiNModule> {
        if self.field() != other.field() {
            return Err(Error::BadField("direct sum of modules over different fields".into()));
        }
        let filtration = self
            .flags()
            .iter()
            .map(|(label, a)| {
                let b = &other.flags()[label];
                let mut jumps = a.jumps.clone();
                jumps.extend(&b.jumps);
                (
                    label.clone(),
                    Flag {
                        flag: Matrix::block_diag(&[&a.flag, &b.flag]),
                        jumps,
                    },
                )
            })
            .collect();
        build_module(ModuleSpec {
            field: self.field().clone(),
            n: self.rank() + other.rank(),
            phi: Matrix::block_diag(&[self.phi(), other.phi()]),
            monodromy: Matrix::block_diag(&[self.monodromy(), other.monodromy()]),
            filtration,
        })
    }

    /// The same module in the basis given by the columns of `s^{-1}`:
    /// `Φ ↦ SΦS^{-1}`, `N ↦ SNS^{-1}`, flags `↦ S·flag`.
    pub fn change_basis(&self, s: &Matrix) -> Result<FilteredPhiNModule> {
        let filtration = self
            .flags()
            .iter()
            .map(|(l, f)| Ok((l.clone(), f.conjugate_by(s)?)))
            .collect::<Result<_>>()?;
        build_module(ModuleSpec {
            field: self.field().clone(),
            n: self.rank(),
            phi: self.phi().conjugate_by(s)?,
            monodromy: self.monodromy().conjugate_by(s)?,
            filtration,
        })
    }

    /// `q` for the Hecke side and `p^f` for the monodromy relation coincide
    /// when `L = F`.
    pub fn residue_cardinality(&self) -> u64 {
        self.field().q_unchecked()
    }
}

/// Failure to read a module from JSON text.
#[derive(Debug, thiserror::Error)]
pub enum ModuleInputError {
    #[error("malformed module JSON: {0}")]
    Json(serde_json::Error),
    #[error("invalid module: {0}")]
    Invalid(Error),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn module(p: u64, phi: Matrix, n_mat: Matrix, flag: Matrix, jumps: Vec<i64>) -> Result<FilteredPhiNModule> {
        let n = phi.rows();
        build_module(ModuleSpec {
            field: FieldDescriptor::desk(p),
            n,
            phi,
            monodromy: n_mat,
            filtration: BTreeMap::from([("k0".to_string(), Flag { flag, jumps })]),
        })
    }

    fn steinberg(p: u64, flag: &[&[i64]], jumps: Vec<i64>) -> FilteredPhiNModule {
        module(
            p,
            Matrix::diag(&[r(1), r(p as i64)]),
            Matrix::unit(2, 0, 1),
            Matrix::from_i64_rows(flag),
            jumps,
        )
        .unwrap()
    }

    #[test]
    fn build_examples() {
        let p = 3;
        assert!(module(p, Matrix::diag(&[r(1), r(3)]), Matrix::unit(2, 0, 1), Matrix::identity(2), vec![0, 1]).is_ok());
        let err = module(p, Matrix::identity(2), Matrix::unit(2, 0, 1), Matrix::identity(2), vec![0, 1]).unwrap_err();
        assert_eq!(
            err,
            Error::RelationViolation {
                row: 0,
                col: 1,
                lhs: Box::new(r(1)),
                rhs: Box::new(r(3))
            }
        );
        assert!(module(p, Matrix::diag(&[r(3)]), Matrix::zeros(1, 1), Matrix::identity(1), vec![1]).is_ok());
    }

    #[test]
    fn build_errors() {
        let e = module(2, Matrix::diag(&[r(0), r(1)]), Matrix::zeros(2, 2), Matrix::identity(2), vec![0, 0]);
        assert_eq!(e.unwrap_err(), Error::SingularFrobenius);
        let e = module(2, Matrix::identity(2), Matrix::identity(2), Matrix::identity(2), vec![0, 0]);
        assert!(matches!(e.unwrap_err(), Error::NonNilpotentMonodromy { .. }));
        let e = module(2, Matrix::identity(2), Matrix::zeros(2, 2), Matrix::from_i64_rows(&[&[1, 1], &[1, 1]]), vec![0, 0]);
        assert!(matches!(e.unwrap_err(), Error::BadFlag { .. }));
        let e = module(2, Matrix::identity(2), Matrix::zeros(2, 2), Matrix::identity(2), vec![0]);
        assert!(matches!(e.unwrap_err(), Error::BadFlag { .. }));
        let mut bad_field = FieldDescriptor::desk(4);
        bad_field.embeddings.clear();
        assert!(bad_field.validate().is_err());
    }

    #[test]
    fn violations_are_reported_individually() {
        let spec = ModuleSpec {
            field: FieldDescriptor::desk(2),
            n: 2,
            phi: Matrix::zeros(2, 2),
            monodromy: Matrix::identity(2),
            filtration: BTreeMap::new(),
        };
        let v = spec.violations();
        assert!(v.contains(&Error::SingularFrobenius));
        assert!(v.iter().any(|e| matches!(e, Error::NonNilpotentMonodromy { .. })));
        assert!(v.iter().any(|e| matches!(e, Error::BadFlag { .. })));
    }

    #[test]
    fn newton_numbers() {
        let p = 5;
        let m = |d: Vec<Rational>| module(p, Matrix::diag(&d), Matrix::zeros(2, 2), Matrix::identity(2), vec![0, 0]).unwrap();
        assert_eq!(m(vec![r(1), r(5)]).newton_number(), r(1));
        assert_eq!(m(vec![r(5), r(25)]).newton_number(), r(3));
        assert_eq!(m(vec![Rational::frac(1, 5), r(5)]).newton_number(), r(0));
    }

    #[test]
    fn ramified_field_scales_valuation() {
        let mut field = FieldDescriptor::desk(2);
        field.e = 2;
        field.degree_factor = 2;
        let d = build_module(ModuleSpec {
            field,
            n: 1,
            phi: Matrix::diag(&[r(8)]),
            monodromy: Matrix::zeros(1, 1),
            filtration: BTreeMap::from([("k0".into(), Flag { flag: Matrix::identity(1), jumps: vec![3] })]),
        })
        .unwrap();
        assert_eq!(d.newton_number(), r(3));
    }

    #[test]
    fn hodge_numbers() {
        let d = steinberg(2, &[&[1, 0], &[0, 1]], vec![0, 1]);
        assert_eq!(d.hodge_number(None).unwrap(), r(1));
        let d3 = steinberg(2, &[&[1, 0], &[0, 1]], vec![0, 3]);
        assert_eq!(d3.hodge_number(Some(&Subspace::full(2))).unwrap(), r(3));
        // Fil^1 = span(e1+e2), V = span(e1)
        let g = steinberg(2, &[&[1, 1], &[1, -1]], vec![1, 0]);
        assert_eq!(g.hodge_number(Some(&Subspace::coordinate(2, &[0]))).unwrap(), r(0));
        assert_eq!(
            g.hodge_number(Some(&Subspace::coordinate(2, &[1]))),
            Err(Error::UnstableSubspace("N"))
        );
    }

    #[test]
    fn stable_subspaces() {
        let d = steinberg(3, &[&[1, 0], &[0, 1]], vec![0, 1]);
        let subs = d.enumerate_stable_subspaces().unwrap();
        assert_eq!(subs, vec![Subspace::zero(2), Subspace::coordinate(2, &[0]), Subspace::full(2)]);

        let crys = module(3, Matrix::diag(&[r(1), r(3)]), Matrix::zeros(2, 2), Matrix::identity(2), vec![0, 1]).unwrap();
        assert_eq!(crys.enumerate_stable_subspaces().unwrap().len(), 4);

        let rep = module(3, Matrix::diag(&[r(2), r(2)]), Matrix::zeros(2, 2), Matrix::identity(2), vec![0, 0]).unwrap();
        assert_eq!(rep.enumerate_stable_subspaces(), Err(Error::RepeatedEigenvalues(Box::new(r(2)))));

        let rot = module(3, Matrix::from_i64_rows(&[&[0, -1], &[1, 0]]), Matrix::zeros(2, 2), Matrix::identity(2), vec![0, 0]).unwrap();
        assert!(matches!(rot.enumerate_stable_subspaces(), Err(Error::NotFullyRational(_))));
    }

    #[test]
    fn admissibility_examples() {
        let good = steinberg(2, &[&[1, 1], &[1, -1]], vec![1, 0]);
        let rep = good.is_weakly_admissible(None).unwrap();
        assert!(rep.admissible);
        assert_eq!((rep.t_h.clone(), rep.t_n.clone()), (r(1), r(1)));
        assert_eq!(rep.subspaces_checked, 3);

        let bad = steinberg(2, &[&[1, 0], &[0, 1]], vec![1, 0]);
        let rep = bad.is_weakly_admissible(None).unwrap();
        assert!(!rep.admissible);
        let w = rep.witness.unwrap();
        assert_eq!(w.subspace, Subspace::coordinate(2, &[0]));
        assert_eq!((w.t_h, w.t_n), (r(1), r(0)));

        let rank1 = module(2, Matrix::diag(&[r(2)]), Matrix::zeros(1, 1), Matrix::identity(1), vec![1]).unwrap();
        assert!(rank1.is_weakly_admissible(None).unwrap().admissible);
    }

    #[test]
    fn certificate_mode() {
        let rep = module(3, Matrix::diag(&[r(3), r(3)]), Matrix::zeros(2, 2), Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]), vec![2, 0])
            .unwrap();
        let cands = vec![Subspace::coordinate(2, &[0]), Subspace::coordinate(2, &[1])];
        let r1 = rep.is_weakly_admissible(Some(&cands)).unwrap();
        assert_eq!(r1.mode, CheckMode::RelativeToCandidates);
        // Fil^2 = span(e1): span(e1) has t_H = 2 > t_N = 1.
        assert!(!r1.admissible);
        assert_eq!(r1.witness.unwrap().subspace, Subspace::coordinate(2, &[0]));
    }

    #[test]
    fn weil_traces() {
        let d = steinberg(3, &[&[1, 0], &[0, 1]], vec![0, 1]);
        assert_eq!(d.weil_trace(-1), r(4));
        assert_eq!(d.weil_trace(0), r(2));
        assert_eq!(d.weil_trace(1), Rational::frac(4, 3));
    }

    #[test]
    fn module_json_schema() {
        let text = r#"{"field": {"p":2,"f0":1,"e":1,"f":1,"embeddings":["k0"]}, "n":2,
            "phi":[["1","0"],["0","2"]], "monodromy":[["0","1"],["0","0"]],
            "filtration": {"k0": {"flag": [["1","1"],["1","-1"]], "jumps":[1,0]}}}"#;
        let d = FilteredPhiNModule::from_json(text).unwrap();
        assert!(d.is_weakly_admissible(None).unwrap().admissible);
        let back = serde_json::to_string(d.spec()).unwrap();
        assert_eq!(FilteredPhiNModule::from_json(&back).unwrap(), d);
        assert!(matches!(FilteredPhiNModule::from_json("{"), Err(ModuleInputError::Json(_))));
    }
}
