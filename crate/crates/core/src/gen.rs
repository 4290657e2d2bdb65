//! Seeded random inputs for property checks and sweeps.
//!
//! Every generator draws from a caller-owned [`ChaCha8Rng`], so a seed fixes
//! the whole stream.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Rational;
use crate::linalg::Matrix;
use crate::partitions::{partitions_of, Partition, PartitionFunction};
use crate::phin::{build_module, FieldDescriptor, FilteredPhiNModule, Flag, ModuleSpec};
use crate::wd::{is_generic, segment_matrices, Segment, SegmentList, UnramifiedCharacter};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero `a/b` with `|a| ≤ max_num`, `1 ≤ b ≤ max_den`.
pub fn nonzero_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    loop {
        let a = rng.gen_range(-max_num..=max_num);
        if a != 0 {
            return Rational::frac(a, rng.gen_range(1..=max_den));
        }
    }
}

/// A product of a signed permutation and unipotent lower and upper factors
/// with entries in `-2..=2`.
pub fn invertible(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let mut lower = Matrix::identity(n);
    let mut upper = Matrix::identity(n);
    for i in 0..n {
        for j in 0..i {
            lower[(i, j)] = Rational::from_int(rng.gen_range(-2..=2));
            upper[(j, i)] = Rational::from_int(rng.gen_range(-2..=2));
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut signed = Matrix::zeros(n, n);
    for (i, &j) in perm.iter().enumerate() {
        signed[(i, j)] = Rational::from_int(if rng.gen_bool(0.5) { 1 } else { -1 });
    }
    signed.mul(&lower).and_then(|m| m.mul(&upper)).expect("square factors")
}

pub fn partition(rng: &mut ChaCha8Rng, n: usize) -> Partition {
    partitions_of(n).choose(rng).expect("n ≥ 0 has partitions").clone()
}

/// `S J_λ S^{-1}` for a random shape `λ` of `n`.
pub fn conjugated_nilpotent(rng: &mut ChaCha8Rng, n: usize) -> (Matrix, Partition) {
    let shape = partition(rng, n);
    let s = invertible(rng, n);
    let m = Matrix::jordan_nilpotent(&shape).conjugate_by(&s).expect("invertible");
    (m, shape)
}

pub fn character(rng: &mut ChaCha8Rng, n: usize) -> UnramifiedCharacter {
    UnramifiedCharacter::new((0..n).map(|_| nonzero_rational(rng, 12, 6)).collect()).expect("nonzero values")
}

/// Segments with total length `n` and `chi = u·q^m`, `u` a small unit,
/// `m ∈ -1..=2`. Linking is allowed.
pub fn segments(rng: &mut ChaCha8Rng, n: usize, q: u64) -> SegmentList {
    let units = [1i64, -1, 2, -3, 7];
    let mut left = n;
    let mut out = Vec::new();
    while left > 0 {
        let len = rng.gen_range(1..=left.min(3));
        let u = *units.choose(rng).expect("nonempty");
        let chi = Rational::from_int(u) * Rational::int_pow(q, rng.gen_range(-1..=2));
        out.push(Segment::new(chi, len).expect("nonzero chi"));
        left -= len;
    }
    SegmentList::new(out)
}

/// As [`segments`], redrawn until unlinked.
pub fn generic_segments(rng: &mut ChaCha8Rng, n: usize, q: u64) -> SegmentList {
    loop {
        let s = segments(rng, n, q);
        if is_generic(&s, q) {
            return s;
        }
    }
}

/// `n` distinct jumps from `0..=4`, increasing.
pub fn distinct_jumps(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    assert!(n <= 5, "at most five distinct jumps in 0..=4");
    let mut all: Vec<i64> = (0..=4).collect();
    all.shuffle(rng);
    let mut v = all[..n].to_vec();
    v.sort();
    v
}

/// The module with one Jordan block per segment, a random flag with the
/// given jumps, seen in a random basis.
pub fn module_with(rng: &mut ChaCha8Rng, segments: &SegmentList, p: u64, jumps: Vec<i64>) -> FilteredPhiNModule {
    let (phi, monodromy) = segment_matrices(segments, p);
    let n = phi.rows();
    let flag = invertible(rng, n);
    let d = build_module(ModuleSpec {
        field: FieldDescriptor::desk(p),
        n,
        phi,
        monodromy,
        filtration: BTreeMap::from([("k0".to_string(), Flag { flag, jumps })]),
    })
    .expect("segment data satisfies the relation");
    d.change_basis(&invertible(rng, n)).expect("invertible basis change")
}

/// A module built from `segments` with distinct jumps in `0..=4`.
pub fn module_from_segments(rng: &mut ChaCha8Rng, segments: &SegmentList, p: u64) -> FilteredPhiNModule {
    let jumps = distinct_jumps(rng, segments.total_len());
    module_with(rng, segments, p, jumps)
}

/// Candidates for weak admissibility: rank `n ≤ 3`, distinct rational
/// Frobenius eigenvalues, `N` joining some of them, distinct jumps in
/// `0..=4`. Usually the jumps add up to `t_N`, so a fair share is admissible.
pub fn admissibility_candidate(rng: &mut ChaCha8Rng, n: usize, p: u64) -> FilteredPhiNModule {
    let units: Vec<i64> = [1i64, -1, 2, -2, 3, 5, 7].into_iter().filter(|u| u.unsigned_abs() % p != 0).collect();
    let segs = loop {
        let mut left = n;
        let mut out = Vec::new();
        while left > 0 {
            let len = if left > 1 && rng.gen_bool(0.4) { 2 } else { 1 };
            let chi = Rational::from_int(*units.choose(rng).expect("units")) * Rational::int_pow(p, rng.gen_range(-1..=3));
            out.push(Segment::new(chi, len).expect("nonzero"));
            left -= len;
        }
        let s = SegmentList::new(out);
        let mut eig = s.eigenvalues(p);
        eig.dedup();
        if eig.len() == n {
            break s;
        }
    };
    let t_n: i64 = segs
        .eigenvalues(p)
        .iter()
        .map(|x| crate::arith::padic_val(x, p).ok().and_then(|v| v.finite()).expect("nonzero"))
        .sum();
    let mut jumps = distinct_jumps(rng, n);
    if rng.gen_bool(0.8) {
        for _ in 0..64 {
            if jumps.iter().sum::<i64>() == t_n {
                break;
            }
            jumps = distinct_jumps(rng, n);
        }
    }
    module_with(rng, &segs, p, jumps)
}

/// A nilpotent per label, each conjugated into a random basis.
pub fn nilpotents(rng: &mut ChaCha8Rng, labels: &[&str], n: usize) -> BTreeMap<String, Matrix> {
    labels.iter().map(|l| (l.to_string(), conjugated_nilpotent(rng, n).0)).collect()
}

pub fn partition_function(rng: &mut ChaCha8Rng, labels: &[&str], n: usize) -> PartitionFunction {
    PartitionFunction::new(labels.iter().map(|l| (l.to_string(), partition(rng, n))).collect())
}
