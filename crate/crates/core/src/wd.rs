//! Weil–Deligne data of a module and its Bernstein–Zelevinsky segments.
//!
//! Only the unramified principal-series block is covered: every segment is
//! a chain `χ(ϖ), χ(ϖ)q, …, χ(ϖ)q^{k−1}` of Frobenius eigenvalues, joined by
//! the monodromy, which lowers eigenvalues by a factor of `q`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::linalg::{jordan_partition, rational_eigenvalues, Matrix, Spectrum, Subspace};
use crate::partitions::{Partition, PartitionFunction};
use crate::phin::FilteredPhiNModule;

/// `(Fr, N)` on an `n`-dimensional space with `N Fr = q Fr N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilDeligneRep {
    frobenius: Matrix,
    monodromy: Matrix,
    q: u64,
    embeddings: Vec<String>,
}

impl WeilDeligneRep {
    pub fn new(frobenius: Matrix, monodromy: Matrix, q: u64, embeddings: Vec<String>) -> Result<Self> {
        let n = frobenius.require_square()?;
        if monodromy.rows() != n || monodromy.cols() != n {
            return Err(Error::Shape("frobenius and monodromy differ in size".into()));
        }
        if frobenius.det()?.is_zero() {
            return Err(Error::SingularFrobenius);
        }
        if !monodromy.pow(n)?.is_zero() {
            return Err(Error::NonNilpotentMonodromy { power: n });
        }
        let lhs = monodromy.mul(&frobenius)?;
        let rhs = frobenius.mul(&monodromy)?.scale(&Rational::from_int(q));
        if let Some(k) = (0..n * n).find(|&k| lhs.entries()[k] != rhs.entries()[k]) {
            return Err(Error::RelationViolation {
                row: k / n,
                col: k % n,
                lhs: Box::new(lhs.entries()[k].clone()),
                rhs: Box::new(rhs.entries()[k].clone()),
            });
        }
        Ok(WeilDeligneRep {
            frobenius,
            monodromy,
            q,
            embeddings,
        })
    }

    pub fn dim(&self) -> usize {
        self.frobenius.rows()
    }

    pub fn frobenius(&self) -> &Matrix {
        &self.frobenius
    }

    pub fn monodromy(&self) -> &Matrix {
        &self.monodromy
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn embeddings(&self) -> &[String] {
        &self.embeddings
    }
}

/// Fontaine's recipe at trivial type: forget the filtration, keep `Φ` as the
/// value on geometric Frobenius and keep `N`.
pub fn wd_from_module(d: &FilteredPhiNModule) -> WeilDeligneRep {
    let q = d.field().p_f().expect("validated field");
    WeilDeligneRep::new(d.phi().clone(), d.monodromy().clone(), q, d.field().embeddings.clone())
        .expect("module invariants imply WD invariants")
}

/// `P_x`: the Jordan type of `N`, at every embedding.
pub fn monodromy_partition(w: &WeilDeligneRep) -> Result<PartitionFunction> {
    let p = jordan_partition(w.monodromy())?;
    Ok(PartitionFunction::constant(w.embeddings.iter().map(String::as_str), &p))
}

/// An unramified segment `χ, χ|·|^{-1}…`: Frobenius eigenvalues
/// `chi, chi*q, …, chi*q^{len−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub chi: Rational,
    pub len: usize,
}

impl Segment {
    pub fn new(chi: Rational, len: usize) -> Result<Self> {
        if chi.is_zero() {
            return Err(Error::ZeroCharacter);
        }
        if len == 0 {
            return Err(Error::BadSegment("length must be positive".into()));
        }
        Ok(Segment { chi, len })
    }

    /// Eigenvalues from bottom to top.
    pub fn chain(&self, q: u64) -> Vec<Rational> {
        let q = Rational::from_int(q);
        let mut v = self.chi.clone();
        (0..self.len)
            .map(|_| {
                let out = v.clone();
                v = &v * &q;
                out
            })
            .collect()
    }
}

/// A multiset of segments, kept sorted so that equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SegmentList(Vec<Segment>);

impl SegmentList {
    pub fn new(mut segments: Vec<Segment>) -> Self {
        segments.sort();
        SegmentList(segments)
    }

    /// Keeps the given order; used where the order is part of the data.
    pub fn ordered(segments: Vec<Segment>) -> Self {
        SegmentList(segments)
    }

    pub fn canonical(&self) -> SegmentList {
        SegmentList::new(self.0.clone())
    }

    pub fn segments(&self) -> &[Segment] {
        &self.0
    }

    pub fn total_len(&self) -> usize {
        self.0.iter().map(|s| s.len).sum()
    }

    pub fn shape(&self) -> Partition {
        Partition::from_unsorted(self.0.iter().map(|s| s.len).collect())
    }

    /// All chain values, sorted.
    pub fn eigenvalues(&self, q: u64) -> Vec<Rational> {
        let mut v: Vec<_> = self.0.iter().flat_map(|s| s.chain(q)).collect();
        v.sort();
        v
    }
}

impl fmt::Display for SegmentList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| format!("({}, {})", s.chi, s.len)).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `(ψ_1(ϖ), …, ψ_n(ϖ))`, all nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rational>", into = "Vec<Rational>")]
pub struct UnramifiedCharacter(Vec<Rational>);

impl TryFrom<Vec<Rational>> for UnramifiedCharacter {
    type Error = Error;
    fn try_from(v: Vec<Rational>) -> Result<Self> {
        UnramifiedCharacter::new(v)
    }
}

impl From<UnramifiedCharacter> for Vec<Rational> {
    fn from(c: UnramifiedCharacter) -> Self {
        c.0
    }
}

impl UnramifiedCharacter {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.iter().any(Rational::is_zero) {
            return Err(Error::ZeroCharacter);
        }
        Ok(UnramifiedCharacter(values))
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `m` with `x = q^m`, if any.
pub fn q_log(x: &Rational, q: u64) -> Option<i64> {
    if x.is_zero() || x.is_negative() || q < 2 {
        return None;
    }
    let (mut y, sign) = if x.numer() >= x.denom() {
        (x.clone(), 1)
    } else {
        (x.recip().ok()?, -1)
    };
    let qr = Rational::from_int(q);
    let mut m = 0;
    while !y.is_one() {
        if !y.is_integer() {
            return None;
        }
        let next = &y / &qr;
        if !next.is_integer() {
            return None;
        }
        y = next;
        m += 1;
    }
    Some(sign * m)
}

/// Two segments are linked when they lie on one `q`-line and their
/// exponent intervals overlap or abut without one containing the other.
pub fn linked(a: &Segment, b: &Segment, q: u64) -> bool {
    let Some(m) = q_log(&(&b.chi / &a.chi), q) else {
        return false;
    };
    let (lo1, hi1) = (0i64, a.len as i64 - 1);
    let (lo2, hi2) = (m, m + b.len as i64 - 1);
    let touches = lo1.max(lo2) <= hi1.min(hi2) + 1;
    let contains = (lo1 <= lo2 && hi2 <= hi1) || (lo2 <= lo1 && hi1 <= hi2);
    touches && !contains
}

/// No two segments linked.
pub fn is_generic(segments: &SegmentList, q: u64) -> bool {
    let s = segments.segments();
    (0..s.len()).all(|i| (i + 1..s.len()).all(|j| !linked(&s[i], &s[j], q)))
}

/// Concatenate the reversed chains: `(a, k)` contributes
/// `a q^{k−1}, …, a q, a`.
pub fn psi_from_segments(segments: &SegmentList, q: u64) -> UnramifiedCharacter {
    let values = segments
        .segments()
        .iter()
        .flat_map(|s| s.chain(q).into_iter().rev())
        .collect();
    UnramifiedCharacter::new(values).expect("segment values are nonzero")
}

/// Basis of `Ker (M − λ)^n`.
fn generalized_eigenspace(m: &Matrix, lambda: &Rational) -> Result<Subspace> {
    let n = m.rows();
    let shifted = m.sub(&Matrix::identity(n).scale(lambda))?;
    Subspace::span(n, &shifted.pow(n)?.nullspace())
}

fn rank_of_image(map: &Matrix, v: &Subspace) -> Result<usize> {
    Ok(v.image(map)?.dim())
}

/// Decompose `(Fr, N)` into segments.
///
/// The count of segments with top `λ` and bottom `λ/q^j` is read off the
/// ranks of `N^j` on generalized eigenspaces:
/// `c(λ, j) − c(λq, j+1)` with `c(λ, j) = rk N^j|G_λ − rk N^{j+1}|G_λ`.
pub fn segments_from_wd(w: &WeilDeligneRep) -> Result<SegmentList> {
    let spectrum = match rational_eigenvalues(w.frobenius())? {
        Spectrum::Rational(s) => s,
        Spectrum::NotFullyRational { unfactored, .. } => {
            return Err(Error::ChainMismatch(format!(
                "Frobenius eigenvalues are not all rational (unfactored {unfactored:?})"
            )))
        }
    };
    let n = w.dim();
    let q = Rational::from_int(w.q());
    let mut powers = vec![Matrix::identity(n)];
    for j in 1..=n {
        powers.push(powers[j - 1].mul(w.monodromy())?);
    }
    let mut ranks: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for (lam, _) in &spectrum {
        let g = generalized_eigenspace(w.frobenius(), lam)?;
        let r = powers.iter().map(|p| rank_of_image(p, &g)).collect::<Result<Vec<_>>>()?;
        ranks.insert(lam.clone(), r);
    }
    let rank = |lam: &Rational, j: usize| ranks.get(lam).map_or(0, |r| r.get(j).copied().unwrap_or(0));
    let c = |lam: &Rational, j: usize| rank(lam, j) as i64 - rank(lam, j + 1) as i64;

    let mut segments = Vec::new();
    for (lam, _) in &spectrum {
        let up = lam * &q;
        for j in 0..n {
            let count = c(lam, j) - c(&up, j + 1);
            if count < 0 {
                return Err(Error::ChainMismatch(format!(
                    "negative multiplicity for the segment ending at {lam} of length {}",
                    j + 1
                )));
            }
            let bottom = lam / &Rational::int_pow(w.q(), j as i64);
            for _ in 0..count {
                segments.push(Segment::new(bottom.clone(), j + 1)?);
            }
        }
    }
    let list = SegmentList::new(segments);

    let mut eig: Vec<Rational> = spectrum
        .iter()
        .flat_map(|(l, k)| std::iter::repeat_n(l.clone(), *k))
        .collect();
    eig.sort();
    if list.total_len() != n || list.eigenvalues(w.q()) != eig {
        return Err(Error::ChainMismatch(format!(
            "segments {list} do not reproduce the eigenvalues {eig:?}"
        )));
    }
    let jordan = jordan_partition(w.monodromy())?;
    if list.shape() != jordan {
        return Err(Error::ChainMismatch(format!(
            "segment lengths {:?} differ from the Jordan type {:?} of N",
            list.shape().parts(),
            jordan.parts()
        )));
    }
    Ok(list)
}

/// Every way of grouping an eigenvalue multiset into `q`-chains whose lengths
/// form `shape`. Knowing only the spectrum and the Jordan type of `N`, these
/// are the candidates `segments_from_wd` can return.
pub fn match_eigenvalue_chains(eigenvalues: &[Rational], shape: &Partition, q: u64) -> Vec<SegmentList> {
    fn go(
        pool: &[Rational],
        lengths: &[usize],
        q: u64,
        cur: &mut Vec<Segment>,
        out: &mut Vec<SegmentList>,
    ) {
        let Some((&k, rest)) = lengths.split_first() else {
            if pool.is_empty() {
                let s = SegmentList::new(cur.clone());
                if !out.contains(&s) {
                    out.push(s);
                }
            }
            return;
        };
        let mut starts = pool.to_vec();
        starts.dedup();
        for a in starts {
            let seg = Segment { chi: a, len: k };
            let chain = seg.chain(q);
            let mut trial = pool.to_vec();
            let ok = chain.iter().all(|v| match trial.iter().position(|x| x == v) {
                Some(i) => {
                    trial.remove(i);
                    true
                }
                None => false,
            });
            if ok {
                cur.push(seg);
                go(&trial, rest, q, cur, out);
                cur.pop();
            }
        }
    }
    let mut pool = eigenvalues.to_vec();
    pool.sort();
    let mut out = Vec::new();
    go(&pool, shape.parts(), q, &mut Vec::new(), &mut out);
    out
}

/// The WD representation with one block per segment:
/// `Fr = diag(a, aq, …, aq^{k−1})` and `N e_{i+1} = e_i` inside the block.
pub fn wd_from_segments(segments: &SegmentList, q: u64, embeddings: Vec<String>) -> Result<WeilDeligneRep> {
    let (frob, mono) = segment_matrices(segments, q);
    WeilDeligneRep::new(frob, mono, q, embeddings)
}

pub(crate) fn segment_matrices(segments: &SegmentList, q: u64) -> (Matrix, Matrix) {
    let values: Vec<Rational> = segments.segments().iter().flat_map(|s| s.chain(q)).collect();
    let n = values.len();
    let mut mono = Matrix::zeros(n, n);
    let mut start = 0;
    for s in segments.segments() {
        for i in start..start + s.len - 1 {
            mono[(i, i + 1)] = Rational::one();
        }
        start += s.len;
    }
    (Matrix::diag(&values), mono)
}
