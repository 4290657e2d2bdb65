//! Integer partitions, the dominance order and its reverse, and the
//! monodromy stratification thresholds.
//!
//! Dominance `λ ⊵ μ` compares partial sums. The order on partition-valued
//! functions used for strata is the pointwise *reverse* of dominance, so the
//! single block `(n)` is the minimum and `(1, …, 1)` is the maximum.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kernel_profile, Matrix};

/// A weakly decreasing list of positive integers. The empty list partitions 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// Outcome of comparing two partitions in the dominance order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Equal,
    /// The left partition strictly dominates the right one.
    Dominates,
    /// The right partition strictly dominates the left one.
    Dominated,
    Incomparable,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        let ok = parts.iter().all(|&x| x > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        if !ok {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zero parts.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn single_block(n: usize) -> Self {
        Partition::from_unsorted(vec![n])
    }

    pub fn all_ones(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `λ^c_i = #{k : λ_k >= i}`.
    pub fn conjugate(&self) -> Partition {
        let width = self.0.first().copied().unwrap_or(0);
        Partition((1..=width).map(|i| self.0.iter().filter(|&&x| x >= i).count()).collect())
    }

    /// Partial sums `λ_1 + … + λ_i` for `i = 1..=len`, padded to `len` with the total.
    pub fn partial_sums(&self, len: usize) -> Vec<usize> {
        let mut acc = 0;
        (0..len)
            .map(|i| {
                acc += self.0.get(i).copied().unwrap_or(0);
                acc
            })
            .collect()
    }

    /// `Σ_k min(i, λ_k)`: the kernel dimension of `N^i` for a nilpotent of this Jordan type.
    pub fn kernel_dim_of_power(&self, i: usize) -> usize {
        self.0.iter().map(|&k| k.min(i)).sum()
    }

    pub fn compare(&self, other: &Partition) -> Result<Dominance> {
        if self.total() != other.total() {
            return Err(Error::UnequalTotals(self.total(), other.total()));
        }
        let len = self.len().max(other.len());
        let (a, b) = (self.partial_sums(len), other.partial_sums(len));
        let ge = a.iter().zip(&b).all(|(x, y)| x >= y);
        let le = a.iter().zip(&b).all(|(x, y)| x <= y);
        Ok(match (ge, le) {
            (true, true) => Dominance::Equal,
            (true, false) => Dominance::Dominates,
            (false, true) => Dominance::Dominated,
            (false, false) => Dominance::Incomparable,
        })
    }

    /// Natural dominance `self ⊵ other`: every partial sum of `self` is at
    /// least the corresponding partial sum of `other`.
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        Ok(matches!(self.compare(other)?, Dominance::Equal | Dominance::Dominates))
    }
}

pub fn conjugate(p: &Partition) -> Partition {
    p.conjugate()
}

pub fn dominates(a: &Partition, b: &Partition) -> Result<bool> {
    a.dominates(b)
}

/// All partitions of `n`, in reverse lexicographic order starting from `(n)`.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Embedding label → partition. Labels are opaque.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartitionFunction(BTreeMap<String, Partition>);

impl PartitionFunction {
    pub fn new(assignments: BTreeMap<String, Partition>) -> Self {
        PartitionFunction(assignments)
    }

    pub fn single(label: &str, p: Partition) -> Self {
        PartitionFunction(BTreeMap::from([(label.to_string(), p)]))
    }

    pub fn constant<'a>(labels: impl IntoIterator<Item = &'a str>, p: &Partition) -> Self {
        PartitionFunction(labels.into_iter().map(|l| (l.to_string(), p.clone())).collect())
    }

    pub fn get(&self, label: &str) -> Option<&Partition> {
        self.0.get(label)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Partition)> {
        self.0.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &String> {
        self.0.keys()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_labels(&self, other: &PartitionFunction) -> Result<()> {
        if self.0.keys().ne(other.0.keys()) {
            let a: Vec<_> = self.labels().collect();
            let b: Vec<_> = other.labels().collect();
            return Err(Error::LabelMismatch(format!("{a:?} vs {b:?}")));
        }
        Ok(())
    }
}

/// `P ≤ P'` in the reversed dominance order: for every label, `P'(σ)` is
/// dominated by `P(σ)`.
pub fn paper_leq(p: &PartitionFunction, p_prime: &PartitionFunction) -> Result<bool> {
    p.check_labels(p_prime)?;
    for (label, lam) in p.iter() {
        if !lam.dominates(&p_prime.0[label])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Thresholds `m_i = Σ_σ Σ_k min(i, P(σ)_k)` for `i = 1..=n`.
pub fn strata_thresholds(p: &PartitionFunction, n: usize) -> Result<Vec<usize>> {
    for (_, lam) in p.iter() {
        if lam.total() != n {
            return Err(Error::WrongTotal {
                parts: lam.0.clone(),
                expected: n,
            });
        }
    }
    Ok((1..=n)
        .map(|i| p.iter().map(|(_, lam)| lam.kernel_dim_of_power(i)).sum())
        .collect())
}

fn kernel_profiles(
    n_per_label: &BTreeMap<String, Matrix>,
    p: &PartitionFunction,
) -> Result<BTreeMap<String, Vec<usize>>> {
    let labels_n: Vec<_> = n_per_label.keys().collect();
    let labels_p: Vec<_> = p.labels().collect();
    if labels_n != labels_p {
        return Err(Error::LabelMismatch(format!("{labels_n:?} vs {labels_p:?}")));
    }
    n_per_label
        .iter()
        .map(|(label, m)| Ok((label.clone(), kernel_profile(m)?)))
        .collect()
}

/// Whether the point with monodromy `N_σ` lies in the closed stratum of `P`,
/// i.e. `P ≤ P_x`. Decided label by label from kernel dimensions:
/// `dim Ker N_σ^i >= Σ_k min(i, P(σ)_k)` for all `i`.
pub fn stratum_member(n_per_label: &BTreeMap<String, Matrix>, p: &PartitionFunction) -> Result<bool> {
    let profiles = kernel_profiles(n_per_label, p)?;
    for (label, lam) in p.iter() {
        let prof = &profiles[label];
        let n = prof.len() - 1;
        let single = PartitionFunction::single(label, lam.clone());
        let m = strata_thresholds(&single, n)?;
        if m.iter().enumerate().any(|(i, &mi)| prof[i + 1] < mi) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The aggregated test `Σ_σ dim Ker N_σ^i >= m_i` for all `i`. Implied by
/// [`stratum_member`]; equivalent to it when there is a single label.
pub fn meets_aggregate_thresholds(
    n_per_label: &BTreeMap<String, Matrix>,
    p: &PartitionFunction,
) -> Result<bool> {
    let profiles = kernel_profiles(n_per_label, p)?;
    let n = match profiles.values().next() {
        Some(prof) => prof.len() - 1,
        None => return Ok(true),
    };
    if profiles.values().any(|prof| prof.len() - 1 != n) {
        return Err(Error::Shape("monodromy matrices of different sizes".into()));
    }
    let m = strata_thresholds(p, n)?;
    Ok(m
        .iter()
        .enumerate()
        .all(|(i, &mi)| profiles.values().map(|prof| prof[i + 1]).sum::<usize>() >= mi))
}

impl PartialOrd for PartitionFunction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let le = paper_leq(self, other).ok()?;
        let ge = paper_leq(other, self).ok()?;
        match (le, ge) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}
