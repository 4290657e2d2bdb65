//! The operators `θ_r = [K diag(ϖI_r, I_{n−r}) K]` on unramified principal
//! series of `GL_n`.
//!
//! The double coset splits into classes `Λ_S`, one per `r`-subset `S` of
//! `{1..n}`; `f°` is constant on each class, so an eigenvalue is a weighted
//! sum over subsets. Half-integral powers of `q` appear only in the per-class
//! values and cancel in the total.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::arith::{is_prime, padic_val, PAdicValuation, QExtScalar, Rational};
use crate::error::{Error, Result};
use crate::interpolation::XiWeights;
use crate::linalg::Matrix;
use crate::phin::FieldDescriptor;
use crate::wd::UnramifiedCharacter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HeckeParams {
    pub n: usize,
    pub q: u64,
    pub r: usize,
}

impl HeckeParams {
    pub fn new(n: usize, q: u64, r: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadHeckeParams("n must be positive".into()));
        }
        if q < 2 {
            return Err(Error::BadHeckeParams(format!("q = {q} is below 2")));
        }
        if r == 0 || r > n {
            return Err(Error::BadHeckeParams(format!("r = {r} outside 1..={n}")));
        }
        Ok(HeckeParams { n, q, r })
    }

    fn check_psi(&self, psi: &UnramifiedCharacter) -> Result<()> {
        if psi.len() != self.n {
            return Err(Error::BadHeckeParams(format!(
                "character has {} values, expected {}",
                psi.len(),
                self.n
            )));
        }
        Ok(())
    }
}

/// The class `Λ_S`: `S` is 1-based and increasing. `weight` is the
/// ψ-independent part of `f°` on the class, `δ_B^{1/2}(β)·q^{−r(n−1)/2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetClass {
    pub subset: Vec<usize>,
    #[serde(serialize_with = "ser_bigint")]
    pub count: BigInt,
    pub weight: QExtScalar,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// All `r`-subsets of `1..=n` in lexicographic order.
pub fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, r, &mut Vec::new(), &mut out);
    out
}

/// Exponent of `q` in `|Λ_S|`: the number of free entries `β_ij` with
/// `i ∈ S`, `j ∉ S`, `i < j`.
fn free_entries(subset: &[usize], n: usize) -> usize {
    subset
        .iter()
        .enumerate()
        .map(|(k, &lambda)| n + k + 1 - subset.len() - lambda)
        .sum()
}

/// Twice the exponent of `q` in `δ_B^{1/2}(β)·q^{−r(n−1)/2}`.
fn doubled_weight_exponent(subset: &[usize], n: usize) -> i64 {
    let n = n as i64;
    let delta: i64 = subset.iter().map(|&i| -(n - 2 * i as i64 + 1)).sum();
    delta - subset.len() as i64 * (n - 1)
}

pub fn coset_classes(h: HeckeParams) -> Vec<CosetClass> {
    subsets(h.n, h.r)
        .into_iter()
        .map(|subset| {
            let count = BigInt::from(h.q).pow(free_entries(&subset, h.n) as u32);
            let weight = QExtScalar::sqrt_q_pow(doubled_weight_exponent(&subset, h.n), h.q);
            CosetClass { subset, count, weight }
        })
        .collect()
}

/// `f°(β) = δ_B^{1/2}(β)·ψ'(β)` for `β ∈ Λ_S`.
pub fn spherical_value(subset: &[usize], psi: &UnramifiedCharacter, h: HeckeParams) -> Result<QExtScalar> {
    h.check_psi(psi)?;
    if subset.len() != h.r || subset.windows(2).any(|w| w[0] >= w[1]) || subset.iter().any(|&i| i == 0 || i > h.n) {
        return Err(Error::BadHeckeParams(format!("{subset:?} is not an increasing {}-subset of 1..={}", h.r, h.n)));
    }
    let prod: Rational = subset.iter().map(|&i| psi.values()[i - 1].clone()).product();
    Ok(QExtScalar::sqrt_q_pow(doubled_weight_exponent(subset, h.n), h.q).scale(&prod))
}

/// Elementary symmetric polynomial `e_r`.
pub fn elementary_symmetric(values: &[Rational], r: usize) -> Rational {
    let mut e = vec![Rational::zero(); r + 1];
    e[0] = Rational::one();
    for x in values {
        for k in (1..=r).rev() {
            let t = &e[k - 1] * x;
            e[k] += &t;
        }
    }
    e.swap_remove(r)
}

/// `q^{r(1−r)/2}·e_r(ψ)`.
pub fn theta_closed(psi: &UnramifiedCharacter, h: HeckeParams) -> Result<Rational> {
    h.check_psi(psi)?;
    let r = h.r as i64;
    Ok(Rational::int_pow(h.q, r * (1 - r) / 2) * elementary_symmetric(psi.values(), h.r))
}

/// `Σ_S |Λ_S|·f°(β_S)`, summed in `Q(√q)`.
pub fn theta_enumerated(psi: &UnramifiedCharacter, h: HeckeParams) -> Result<Rational> {
    h.check_psi(psi)?;
    let mut total = QExtScalar::zero(h.q);
    for class in coset_classes(h) {
        let prod: Rational = class.subset.iter().map(|&i| psi.values()[i - 1].clone()).product();
        let term = class.weight.scale(&(prod * Rational::from(class.count.clone())));
        total = total.checked_add(&term)?;
    }
    total
        .to_rational()
        .ok_or_else(|| Error::Internal(format!("√q part survives in θ_{} = {total}", h.r)))
}

/// `coeff·ϖ^pi_exponent`, kept symbolic when the uniformizer is not `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PiMonomial {
    pub coeff: Rational,
    pub pi_exponent: i64,
}

impl PiMonomial {
    pub fn valuation(&self, field: &FieldDescriptor) -> PAdicValuation {
        field.val_f(&self.coeff) + PAdicValuation::Finite(self.pi_exponent)
    }

    /// The rational value, when `ϖ = p`.
    pub fn evaluate(&self, field: &FieldDescriptor) -> Option<Rational> {
        let pi = field.uniformizer()?;
        Some(&self.coeff * &pi.pow(self.pi_exponent).expect("uniformizer is nonzero"))
    }

    /// Rational string when evaluable, `c·ϖ^k` otherwise.
    pub fn render(&self, field: &FieldDescriptor) -> String {
        match self.evaluate(field) {
            Some(v) => v.to_string(),
            None if self.pi_exponent == 0 => self.coeff.to_string(),
            None => format!("{}*pi^{}", self.coeff, self.pi_exponent),
        }
    }
}

/// `θ̃_r = q^{r(r−1)/2}·ϖ^{−Σ_κ Σ_{j=r}^n ξ_{κ,j}}·θ_r`.
pub fn theta_tilde(psi: &UnramifiedCharacter, h: HeckeParams, xi: &XiWeights) -> Result<PiMonomial> {
    let r = h.r as i64;
    let theta = theta_closed(psi, h)?;
    Ok(PiMonomial {
        coeff: Rational::int_pow(h.q, r * (r - 1) / 2) * theta,
        pi_exponent: xi.twist_exponent(h.r)?,
    })
}

/// Every `β ∈ Λ_S` for every `S`, with `ϖ = q` and residues `0..q`.
/// Only meaningful for prime `q`.
pub fn explicit_representatives(h: HeckeParams) -> Result<Vec<Matrix>> {
    if !is_prime(h.q) {
        return Err(Error::BadHeckeParams(format!(
            "explicit representatives need a prime q, got {}",
            h.q
        )));
    }
    let mut out = Vec::new();
    for subset in subsets(h.n, h.r) {
        let free: Vec<(usize, usize)> = (1..=h.n)
            .filter(|i| subset.contains(i))
            .flat_map(|i| (i + 1..=h.n).filter(|j| !subset.contains(j)).map(move |j| (i - 1, j - 1)))
            .collect();
        let mut digits = vec![0u64; free.len()];
        loop {
            let mut beta = Matrix::identity(h.n);
            for &i in &subset {
                beta[(i - 1, i - 1)] = Rational::from_int(h.q);
            }
            for (&(i, j), &d) in free.iter().zip(&digits) {
                beta[(i, j)] = Rational::from_int(d);
            }
            out.push(beta);
            let Some(k) = digits.iter().position(|&d| d + 1 < h.q) else {
                break;
            };
            digits[k] += 1;
            for d in &mut digits[..k] {
                *d = 0;
            }
        }
    }
    Ok(out)
}

fn is_p_integral(m: &Matrix, p: u64) -> bool {
    let p = BigInt::from(p);
    m.entries().iter().all(|x| !(x.denom() % &p).is_zero())
}

/// Rank over `F_p` of a `p`-integral matrix.
fn rank_mod_p(m: &Matrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let reduce = |x: &Rational| -> i64 {
        let inv = x.denom().mod_floor(&pb).extended_gcd(&pb).x;
        let v = (x.numer() * inv).mod_floor(&pb);
        i64::try_from(v).expect("residue fits")
    };
    let p = p as i64;
    let mut a: Vec<Vec<i64>> = (0..m.rows()).map(|i| m.row(i).iter().map(reduce).collect()).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = BigInt::from(a[rank][c]).extended_gcd(&BigInt::from(p)).x.mod_floor(&BigInt::from(p));
        let inv = i64::try_from(inv).expect("residue fits");
        let pivot = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = row[c] * inv % p;
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Checks that `reps` is a full set of representatives of
/// `K diag(pI_r, I_{n−r}) K / K` with `K = GL_n(Z_p)`: each lies in the
/// double coset, no two share a coset, and there are `[n r]_p` of them when
/// `expected` is given.
pub fn verify_representatives(h: HeckeParams, reps: &[Matrix], expected: Option<&BigInt>) -> Result<()> {
    let p = h.q;
    for b in reps {
        if !is_p_integral(b, p) {
            return Err(Error::Internal(format!("{b:?} is not integral")));
        }
        let v = padic_val(&b.det()?, p)?;
        if v != PAdicValuation::Finite(h.r as i64) {
            return Err(Error::Internal(format!("det of {b:?} has valuation {v}")));
        }
        if rank_mod_p(b, p) != h.n - h.r {
            return Err(Error::Internal(format!("{b:?} has the wrong rank mod {p}")));
        }
    }
    let inverses = reps.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    for (i, bi) in inverses.iter().enumerate() {
        for bj in &reps[i + 1..] {
            if is_p_integral(&bi.mul(bj)?, p) {
                return Err(Error::Internal(format!("{:?} and {bj:?} share a coset", reps[i])));
            }
        }
    }
    if let Some(e) = expected {
        if BigInt::from(reps.len()) != *e {
            return Err(Error::Internal(format!("{} representatives, expected {e}", reps.len())));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use std::collections::BTreeMap;

    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn psi(v: &[i64]) -> UnramifiedCharacter {
        UnramifiedCharacter::new(v.iter().map(|&x| r(x)).collect()).unwrap()
    }

    fn hp(n: usize, q: u64, rr: usize) -> HeckeParams {
        HeckeParams::new(n, q, rr).unwrap()
    }

    fn gaussian_binomial(n: usize, k: usize, q: u64) -> BigInt {
        // [n k]_q = [n−1 k]_q + q^{n−k}[n−1 k−1]_q
        let mut t = vec![vec![BigInt::zero(); n + 1]; n + 1];
        for m in 0..=n {
            t[m][0] = BigInt::one();
            for j in 1..=m {
                t[m][j] = &t[m - 1][j] + BigInt::from(q).pow((m - j) as u32) * &t[m - 1][j - 1];
            }
        }
        t[n][k].clone()
    }

    fn counts(h: HeckeParams) -> Vec<BigInt> {
        coset_classes(h).into_iter().map(|c| c.count).collect()
    }

    #[test]
    fn class_counts() {
        for q in [2u64, 3, 7] {
            let b = |x: u64| BigInt::from(x);
            assert_eq!(counts(hp(2, q, 1)), vec![b(q), b(1)]);
            assert_eq!(counts(hp(3, q, 1)), vec![b(q * q), b(q), b(1)]);
            assert_eq!(counts(hp(3, q, 2)), vec![b(q * q), b(q), b(1)]);
        }
        let classes = coset_classes(hp(3, 2, 2));
        let subs: Vec<_> = classes.iter().map(|c| c.subset.clone()).collect();
        assert_eq!(subs, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn counts_sum_to_gaussian_binomials() {
        for n in 1..=6 {
            for k in 1..=n {
                for q in [2u64, 4] {
                    let total: BigInt = counts(hp(n, q, k)).into_iter().sum();
                    assert_eq!(total, gaussian_binomial(n, k, q), "n={n} r={k} q={q}");
                }
            }
        }
    }

    #[test]
    fn spherical_values() {
        assert_eq!(spherical_value(&[1], &psi(&[5]), hp(1, 3, 1)).unwrap(), QExtScalar::rational(r(5), 3));
        // n = 2, r = 1: weights q^{-1} on S = {1} and q^0 on S = {2}
        let h = hp(2, 3, 1);
        assert_eq!(
            spherical_value(&[1], &psi(&[1, 1]), h).unwrap().to_rational(),
            Some(Rational::frac(1, 3))
        );
        assert_eq!(spherical_value(&[2], &psi(&[1, 1]), h).unwrap().to_rational(), Some(r(1)));
        // n = 3, r = 1: odd powers of √q
        let v = spherical_value(&[1], &psi(&[1, 1, 1]), hp(3, 2, 1)).unwrap();
        assert_eq!(v.to_rational(), Some(Rational::frac(1, 4)));
        let v = spherical_value(&[1], &psi(&[1, 1]), hp(2, 2, 1)).unwrap();
        assert_eq!(v.b(), &Rational::zero());
        assert!(spherical_value(&[2, 1], &psi(&[1, 1]), hp(2, 2, 2)).is_err());
    }

    #[test]
    fn trivial_character_sum() {
        for n in 1..=5usize {
            for k in 1..=n {
                let h = hp(n, 3, k);
                let ones = psi(&vec![1; n]);
                let binom: i64 = (0..k as i64).fold(1, |acc, i| acc * (n as i64 - i) / (i + 1));
                let kk = k as i64;
                let expected = Rational::int_pow(3, kk * (1 - kk) / 2) * r(binom);
                assert_eq!(theta_enumerated(&ones, h).unwrap(), expected);
                assert_eq!(theta_closed(&ones, h).unwrap(), expected);
            }
        }
    }

    #[test]
    fn theta_examples() {
        let q = 5;
        assert_eq!(theta_closed(&psi(&[5, 1]), hp(2, q, 1)).unwrap(), r(6));
        assert_eq!(theta_closed(&psi(&[5, 1]), hp(2, q, 2)).unwrap(), r(1));
        assert_eq!(theta_closed(&psi(&[1, 1, 1]), hp(3, q, 1)).unwrap(), r(3));
        assert_eq!(theta_enumerated(&psi(&[5, 1]), hp(2, q, 1)).unwrap(), r(6));
        let p4 = psi(&[2, -3, 7, 11]);
        let h = hp(4, 3, 4);
        assert_eq!(theta_enumerated(&p4, h).unwrap(), theta_closed(&p4, h).unwrap());
        assert_eq!(theta_closed(&p4, h).unwrap(), Rational::int_pow(3, -6) * r(2 * -3 * 7 * 11));
        let v = UnramifiedCharacter::new(vec![Rational::frac(1, 2), r(3), Rational::frac(-2, 7)]).unwrap();
        assert_eq!(theta_enumerated(&v, hp(3, 4, 2)).unwrap(), theta_closed(&v, hp(3, 4, 2)).unwrap());
    }

    #[test]
    fn theta_tilde_examples() {
        let field = FieldDescriptor::desk(5);
        let zero = XiWeights::zero(&["k0"], 2);
        let t = theta_tilde(&psi(&[5, 1]), hp(2, 5, 1), &zero).unwrap();
        assert_eq!(t.evaluate(&field), Some(r(6)));
        let t = theta_tilde(&psi(&[5, 1]), hp(2, 5, 2), &zero).unwrap();
        assert_eq!(t.evaluate(&field), Some(r(5)));
        let xi = XiWeights::new(BTreeMap::from([("k0".to_string(), vec![0, -1])])).unwrap();
        let t = theta_tilde(&psi(&[5, 1]), hp(2, 5, 2), &xi).unwrap();
        assert_eq!(t.pi_exponent, 1);
        assert_eq!(t.evaluate(&field), Some(r(25)));
        assert_eq!(t.valuation(&field), PAdicValuation::Finite(2));
        let ramified = FieldDescriptor { e: 2, ..FieldDescriptor::desk(5) };
        assert_eq!(t.evaluate(&ramified), None);
        assert_eq!(t.render(&ramified), "5*pi^1");
        assert_eq!(t.valuation(&ramified), PAdicValuation::Finite(3));
    }

    #[test]
    fn explicit_representatives_match_counts() {
        for (n, q) in [(2usize, 2u64), (3, 2), (3, 3), (4, 2)] {
            for k in 1..=n {
                let h = hp(n, q, k);
                let reps = explicit_representatives(h).unwrap();
                let expected: BigInt = counts(h).into_iter().sum();
                verify_representatives(h, &reps, Some(&gaussian_binomial(n, k, q))).unwrap();
                assert_eq!(BigInt::from(reps.len()), expected);
            }
        }
        assert!(explicit_representatives(hp(2, 4, 1)).is_err());
    }

    #[test]
    fn verification_catches_duplicates() {
        let h = hp(2, 2, 1);
        let mut reps = explicit_representatives(h).unwrap();
        // diag(2,1) and diag(2,1)·[[1,0],[2,1]] lie in one coset
        let dup = reps[0].mul(&Matrix::from_i64_rows(&[&[1, 0], &[2, 1]])).unwrap();
        reps.push(dup);
        assert!(verify_representatives(h, &reps, None).is_err());
    }

    #[test]
    fn params_are_validated() {
        assert!(HeckeParams::new(0, 2, 1).is_err());
        assert!(HeckeParams::new(2, 1, 1).is_err());
        assert!(HeckeParams::new(2, 2, 3).is_err());
        assert!(HeckeParams::new(2, 2, 0).is_err());
        assert!(theta_closed(&psi(&[1]), hp(2, 2, 1)).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rational() -> impl Strategy<Value = Rational> {
            (-20i64..=20, 1i64..=6).prop_filter_map("nonzero", |(a, b)| (a != 0).then(|| Rational::frac(a, b)))
        }

        proptest! {
            #[test]
            fn enumerated_equals_closed(
                vals in prop::collection::vec(rational(), 1..=5),
                q in prop::sample::select(vec![2u64, 3, 4, 5, 9]),
                k in 1usize..=5,
            ) {
                let n = vals.len();
                let h = hp(n, q, k.min(n));
                let c = UnramifiedCharacter::new(vals).unwrap();
                prop_assert_eq!(theta_enumerated(&c, h).unwrap(), theta_closed(&c, h).unwrap());
            }

            #[test]
            fn closed_form_is_symmetric(
                vals in prop::collection::vec(rational(), 1..=6),
                k in 1usize..=6,
                rot in 0usize..6,
            ) {
                let n = vals.len();
                let h = hp(n, 3, k.min(n));
                let mut perm = vals.clone();
                perm.reverse();
                perm.rotate_left(rot % n);
                let a = theta_closed(&UnramifiedCharacter::new(vals).unwrap(), h).unwrap();
                let b = theta_closed(&UnramifiedCharacter::new(perm).unwrap(), h).unwrap();
                prop_assert_eq!(a, b);
            }
        }
    }
}
