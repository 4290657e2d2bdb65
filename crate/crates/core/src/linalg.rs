//! Dense exact linear algebra over [`Rational`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::partitions::Partition;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::diag(&vec![Rational::one(); n])
    }

    pub fn diag(values: &[Rational]) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Matrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_int(x)).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn from_columns(ambient: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        let mut m = Matrix::zeros(ambient, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != ambient {
                return Err(Error::Shape(format!("column of length {} in dimension {ambient}", col.len())));
            }
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    /// `E_ij`: the matrix unit with a single 1 at `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        m[(i, j)] = Rational::one();
        m
    }

    /// Canonical nilpotent with Jordan blocks of the given sizes, each block
    /// sending `e_{k+1} ↦ e_k`.
    pub fn jordan_nilpotent(blocks: &Partition) -> Self {
        let n = blocks.total();
        let mut m = Matrix::zeros(n, n);
        let mut start = 0;
        for &k in blocks.parts() {
            for i in start..start + k - 1 {
                m[(i, i + 1)] = Rational::one();
            }
            start += k;
        }
        m
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn trace(&self) -> Result<Rational> {
        let n = self.require_square()?;
        Ok((0..n).map(|i| &self[(i, i)]).sum())
    }

    /// Nonnegative integer power.
    pub fn pow(&self, k: usize) -> Result<Matrix> {
        let n = self.require_square()?;
        let mut acc = Matrix::identity(n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Integer power; negative exponents invert first.
    pub fn pow_signed(&self, k: i64) -> Result<Matrix> {
        if k >= 0 {
            self.pow(k as usize)
        } else {
            self.inverse()?.pow(k.unsigned_abs() as usize)
        }
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(i, j)] - &(&f * &m[(r, j)]);
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination on the cleared
    /// integer matrix.
    pub fn det(&self) -> Result<Rational> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let l = self.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            a.push(
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect(),
            );
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(Rational::zero());
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        Rational::new(sign * &a[n - 1][n - 1], scale)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.require_square()?;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// `S M S^{-1}`.
    pub fn conjugate_by(&self, s: &Matrix) -> Result<Matrix> {
        s.mul(self)?.mul(&s.inverse()?)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[Rational]> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Rational>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

pub fn kernel_dim(m: &Matrix) -> Result<usize> {
    let n = m.require_square()?;
    Ok(n - m.rank())
}

/// Coefficients `c_0, …, c_n` of `det(λI − M) = Σ c_k λ^k`, computed with the
/// division-free Berkowitz recursion.
pub fn char_poly(m: &Matrix) -> Result<Vec<Rational>> {
    let n = m.require_square()?;
    // `v` holds the coefficients of the leading r×r principal submatrix,
    // highest degree first.
    let mut v = vec![Rational::one()];
    for r in 0..n {
        let a_rr = &m[(r, r)];
        let row: Vec<Rational> = (0..r).map(|j| m[(r, j)].clone()).collect();
        let mut col: Vec<Rational> = (0..r).map(|i| m[(i, r)].clone()).collect();
        let mut t = Vec::with_capacity(r + 2);
        t.push(Rational::one());
        t.push(-a_rr);
        for _ in 0..r {
            let dot: Rational = row.iter().zip(&col).map(|(a, b)| a * b).sum();
            t.push(-dot);
            col = (0..r)
                .map(|i| (0..r).map(|j| &m[(i, j)] * &col[j]).sum())
                .collect();
        }
        v = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .filter(|&j| i - j < t.len())
                    .map(|j| &t[i - j] * &v[j])
                    .sum()
            })
            .collect();
    }
    v.reverse();
    Ok(v)
}

/// `Tr(∧^r M)`, the r-th elementary symmetric function of the eigenvalues.
pub fn exterior_trace(m: &Matrix, r: usize) -> Result<Rational> {
    let n = m.require_square()?;
    if r > n {
        return Err(Error::OutOfRange { index: r, max: n });
    }
    let c = char_poly(m)?;
    let v = c[n - r].clone();
    Ok(if r.is_multiple_of(2) { v } else { -v })
}

/// `dim Ker N^i` for `i = 0..=n`. Fails when `N^n != 0`.
pub fn kernel_profile(nilpotent: &Matrix) -> Result<Vec<usize>> {
    let n = nilpotent.require_square()?;
    let mut dims = vec![0];
    let mut power = Matrix::identity(n);
    for _ in 0..n {
        power = power.mul(nilpotent)?;
        dims.push(n - power.rank());
    }
    if dims[n] != n {
        return Err(Error::NotNilpotent { power: n });
    }
    Ok(dims)
}

/// Kernel partition `κ_i = dim Ker N^i − dim Ker N^{i−1}`.
pub fn kernel_partition(nilpotent: &Matrix) -> Result<Partition> {
    let dims = kernel_profile(nilpotent)?;
    let kappa: Vec<usize> = dims.windows(2).map(|w| w[1] - w[0]).filter(|&k| k > 0).collect();
    Partition::new(kappa).map_err(|e| Error::Internal(format!("kernel partition not decreasing: {e}")))
}

/// Jordan block sizes of a nilpotent matrix: the conjugate of its kernel partition.
pub fn jordan_partition(nilpotent: &Matrix) -> Result<Partition> {
    Ok(kernel_partition(nilpotent)?.conjugate())
}

/// A subspace of `Q^n`, stored by a basis in reduced column echelon form so
/// that equal subspaces compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient) {
            return Err(Error::Shape(format!("vector not in dimension {ambient}")));
        }
        let rows = if vectors.is_empty() {
            Matrix::zeros(0, ambient)
        } else {
            Matrix::from_rows(vectors.to_vec())?
        };
        let (r, pivots) = rows.rref();
        let k = pivots.len();
        let mut basis = Matrix::zeros(ambient, k);
        for j in 0..k {
            for i in 0..ambient {
                basis[(i, j)] = r[(j, i)].clone();
            }
        }
        Ok(Subspace { ambient, basis })
    }

    /// Column space of `basis`, whose columns must be independent.
    pub fn new(basis: &Matrix) -> Result<Self> {
        let cols: Vec<_> = (0..basis.cols()).map(|j| basis.column(j)).collect();
        let s = Subspace::span(basis.rows(), &cols)?;
        if s.dim() != basis.cols() {
            return Err(Error::DependentBasis);
        }
        Ok(s)
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vecs: Vec<_> = indices
            .iter()
            .map(|&i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::one();
                v
            })
            .collect();
        Subspace::span(ambient, &vecs).expect("coordinate vectors")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.dim()).map(|j| self.basis.column(j)).collect()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let mut vecs = self.basis_vectors();
        vecs.push(v.to_vec());
        Subspace::span(self.ambient, &vecs).is_ok_and(|s| s.dim() == self.dim())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis_vectors().iter().all(|v| other.contains(v))
    }

    /// `M(V)`.
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        let imgs = self
            .basis_vectors()
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(m.rows(), &imgs)
    }

    /// `M(V) ⊆ V`.
    pub fn is_stable_under(&self, m: &Matrix) -> Result<bool> {
        Ok(self.image(m)?.is_subspace_of(self))
    }

    /// Row indices of the leading entries of the canonical basis columns.
    fn pivot_rows(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|j| {
                (0..self.ambient)
                    .find(|&i| !self.basis[(i, j)].is_zero())
                    .expect("basis columns are nonzero")
            })
            .collect()
    }

    /// Coordinates of `v ∈ V` in the canonical basis.
    pub fn coordinates(&self, v: &[Rational]) -> Vec<Rational> {
        self.pivot_rows().into_iter().map(|i| v[i].clone()).collect()
    }

    /// Matrix of `M|_V` in the canonical basis; `V` must be `M`-stable.
    pub fn restrict(&self, m: &Matrix) -> Result<Matrix> {
        let n = m.require_square()?;
        if n != self.ambient {
            return Err(Error::AmbientMismatch(n, self.ambient));
        }
        let cols = self
            .basis_vectors()
            .iter()
            .map(|v| {
                let w = m.mul_vec(v)?;
                if !self.contains(&w) {
                    return Err(Error::UnstableSubspace("the given map"));
                }
                Ok(self.coordinates(&w))
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(self.dim(), &cols)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let mut vecs = self.basis_vectors();
        vecs.extend(other.basis_vectors());
        Subspace::span(self.ambient, &vecs)
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{:?}", self.basis_vectors())
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis_vectors().serialize(s)
    }
}

/// `A ∩ B`, from the null space of `[A | −B]`.
pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace> {
    if a.ambient != b.ambient {
        return Err(Error::AmbientMismatch(a.ambient, b.ambient));
    }
    let (ka, kb) = (a.dim(), b.dim());
    if ka == 0 || kb == 0 {
        return Ok(Subspace::zero(a.ambient));
    }
    let mut m = Matrix::zeros(a.ambient, ka + kb);
    for i in 0..a.ambient {
        for j in 0..ka {
            m[(i, j)] = a.basis[(i, j)].clone();
        }
        for j in 0..kb {
            m[(i, ka + j)] = -&b.basis[(i, j)];
        }
    }
    let vecs = m
        .nullspace()
        .into_iter()
        .map(|x| a.basis.mul_vec(&x[..ka]))
        .collect::<Result<Vec<_>>>()?;
    Subspace::span(a.ambient, &vecs)
}

/// Eigenvalue data of a rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Spectrum {
    /// Distinct eigenvalues in increasing order with algebraic multiplicities.
    Rational(Vec<(Rational, usize)>),
    /// The characteristic polynomial has an irreducible factor of degree > 1;
    /// `unfactored` holds its monic coefficients, constant term first.
    NotFullyRational {
        found: Vec<(Rational, usize)>,
        unfactored: Vec<Rational>,
    },
}

impl Spectrum {
    pub fn rational(&self) -> Option<&[(Rational, usize)]> {
        match self {
            Spectrum::Rational(v) => Some(v),
            Spectrum::NotFullyRational { .. } => None,
        }
    }
}

/// Trial-division factorization; the returned cofactor is 1 unless a factor
/// above the search bound remains.
fn factor(n: &BigInt) -> (Vec<(BigInt, u32)>, BigInt) {
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2u32);
    let bound = BigInt::from(1_000_000u32);
    while &d * &d <= m && d <= bound {
        let mut k = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            k += 1;
        }
        if k > 0 {
            out.push((d.clone(), k));
        }
        d += 1u32;
    }
    if m > BigInt::one() && (m <= (&bound * &bound)) {
        out.push((m, 1));
        return (out, BigInt::one());
    }
    (out, m)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let (fs, rest) = factor(n);
    let mut ds = vec![BigInt::one()];
    for (p, k) in fs {
        let mut next = Vec::new();
        for d in &ds {
            let mut pk = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        ds = next;
    }
    if rest > BigInt::one() {
        let extra: Vec<BigInt> = ds.iter().map(|d| d * &rest).collect();
        ds.extend(extra);
    }
    ds
}

fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Divide by `(λ − root)`; coefficients constant term first.
fn deflate(coeffs: &[Rational], root: &Rational) -> Vec<Rational> {
    let n = coeffs.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (0..n).rev() {
        carry = &coeffs[k + 1] + &(carry * root);
        out[k] = carry.clone();
    }
    out
}

/// A root `a/d` of the integer polynomial (constant term first, nonzero
/// constant term), by the rational root test. Candidates are screened with
/// `(d − a) | f(1)` and `(d + a) | f(−1)` before the exact evaluation.
fn find_rational_root(ints: &[BigInt]) -> Option<Rational> {
    let f1: BigInt = ints.iter().sum();
    let fm1: BigInt = ints
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
        .sum();
    let num_divs = divisors(&ints[0]);
    let den_divs = divisors(ints.last().expect("nonempty"));
    let divides = |k: &BigInt, v: &BigInt| if k.is_zero() { v.is_zero() } else { (v % k).is_zero() };
    let n = ints.len() - 1;
    for d in &den_divs {
        let mut dp = vec![BigInt::one(); n + 1];
        for i in 1..=n {
            dp[i] = &dp[i - 1] * d;
        }
        for a0 in &num_divs {
            if !a0.gcd(d).is_one() {
                continue;
            }
            for a in [a0.clone(), -a0] {
                if !divides(&(d - &a), &f1) || !divides(&(d + &a), &fm1) {
                    continue;
                }
                // d^n f(a/d) = Σ c_i a^i d^{n−i}
                let mut ap = BigInt::one();
                let mut horner = BigInt::zero();
                for (i, c) in ints.iter().enumerate() {
                    horner += c * &ap * &dp[n - i];
                    ap *= &a;
                }
                if horner.is_zero() {
                    return Some(Rational::from(num_rational::BigRational::new(a, d.clone())));
                }
            }
        }
    }
    None
}

/// Eigenvalues when the characteristic polynomial splits over `Q`, found by
/// the rational root test.
pub fn rational_eigenvalues(m: &Matrix) -> Result<Spectrum> {
    let mut poly = char_poly(m)?;
    let mut found: Vec<(Rational, usize)> = Vec::new();
    fn push(found: &mut Vec<(Rational, usize)>, r: Rational) {
        match found.iter_mut().find(|(x, _)| *x == r) {
            Some((_, k)) => *k += 1,
            None => found.push((r, 1)),
        }
    }
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        push(&mut found, Rational::zero());
    }
    while poly.len() > 1 {
        let l = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = poly.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        match find_rational_root(&ints) {
            Some(r) => {
                while poly.len() > 1 && eval_poly(&poly, &r).is_zero() {
                    poly = deflate(&poly, &r);
                    push(&mut found, r.clone());
                }
            }
            None => {
                found.sort();
                return Ok(Spectrum::NotFullyRational {
                    found,
                    unfactored: poly,
                });
            }
        }
    }
    found.sort();
    Ok(Spectrum::Rational(found))
}
