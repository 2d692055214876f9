//! Exact linear algebra over `Z` and over `Z/nZ`.
//!
//! [`IntMatrix`] holds arbitrary-precision integers; [`ModMatrix`] holds
//! residues in `[0, n)` for a modulus `n` that fits in a `u64` (products are
//! formed in `u128`, so no result ever depends on word size).

mod howell;
mod smith;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

pub use howell::{howell_form, kernel_mod_n, reduce_against};
pub use smith::{smith_normal_form, SmithDecomposition};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("{rows}x{cols} matrix is empty")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flatten().cloned().map(Into::into).collect();
        Self::new(rows.len(), cols, data)
    }

    /// Panicking convenience for literals in tests and catalogs.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&rows).expect("well-formed literal matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0);
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, BigInt::from(e));
        }
        m
    }

    /// The standard alternating form `[[0, I_d], [-I_d, 0]]`.
    pub fn symplectic_form(d: usize) -> Self {
        let mut j = Self::zeros(2 * d, 2 * d);
        for i in 0..d {
            j.set(i, d + i, BigInt::one());
            j.set(d + i, i, -BigInt::one());
        }
        j
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows as machine integers, if every entry fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// `self - I`; panics if not square.
    pub fn minus_identity(&self) -> Self {
        assert!(self.is_square());
        self - &Self::identity(self.rows)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Reduction into `Z/nZ`.
    pub fn reduce(&self, n: u64) -> Result<ModMatrix> {
        if n == 0 {
            return Err(Error::ZeroModulus);
        }
        let nb = BigInt::from(n);
        let data = self
            .data
            .iter()
            .map(|a| a.mod_floor(&nb).to_u64().expect("residue below a u64 modulus"))
            .collect();
        Ok(ModMatrix { modulus: n, rows: self.rows, cols: self.cols, data })
    }

    /// True when every entry is divisible by `n`.
    pub fn divisible_by(&self, n: u64) -> bool {
        let nb = BigInt::from(n);
        self.data.iter().all(|a| a.is_multiple_of(&nb))
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Block-diagonal direct sum `diag(self, other)`.
    pub fn direct_sum(&self, other: &IntMatrix) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Submatrix on the given (sorted) row and column index sets.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Self {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        IntMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(Signed::abs).max().unwrap_or_default()
    }
}

fn check_same_shape(a: (usize, usize), b: (usize, usize), op: &str) {
    assert!(a == b, "{op}: shape {a:?} vs {b:?}");
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        check_same_shape((self.rows, self.cols), (rhs.rows, rhs.cols), "add");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        check_same_shape((self.rows, self.cols), (rhs.rows, rhs.cols), "sub");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "mul: inner dimensions differ");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = (0..self.rows).map(|i| format!("[{}]", self.row(i).iter().join(", ")));
        write!(f, "[{}]", rows.format(", "))
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self
            .to_i64_rows()
            .ok_or_else(|| serde::ser::Error::custom("matrix entry exceeds i64"))?;
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        IntMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Characteristic polynomial `det(xI - A)` via the Faddeev-LeVerrier
/// recurrence; every division in it is exact over `Z`.
pub fn char_poly(a: &IntMatrix) -> IntPoly {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    let ident = IntMatrix::identity(n);
    for k in 1..=n {
        m = &(a * &m) + &ident.scale(&coeffs[n - k + 1]);
        let t = (a * &m).trace();
        let (q, r) = t.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = -q;
    }
    IntPoly::new(coeffs)
}

fn check_exterior_degree(dim: usize, k: usize) -> Result<()> {
    if k > dim {
        return Err(Error::ExteriorDegree { k, dim });
    }
    Ok(())
}

/// `k`-th exterior power. Rows and columns are indexed by the `k`-subsets of
/// `0..r` in lexicographic order; entry `(S, T)` is the `S x T` minor.
pub fn exterior_power(a: &IntMatrix, k: usize) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension("exterior power of a non-square matrix".into()));
    }
    let r = a.rows();
    check_exterior_degree(r, k)?;
    if k == 0 {
        return Ok(IntMatrix::identity(1));
    }
    let subsets: Vec<Vec<usize>> = (0..r).combinations(k).collect();
    let size = subsets.len();
    let mut out = IntMatrix::zeros(size, size);
    for (i, s) in subsets.iter().enumerate() {
        for (j, t) in subsets.iter().enumerate() {
            out.set(i, j, a.minor(s, t).determinant());
        }
    }
    Ok(out)
}

/// Exterior power of a residue matrix, through an integer lift.
pub fn exterior_power_mod(a: &ModMatrix, k: usize) -> Result<ModMatrix> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Dimension("exterior power of a non-square matrix".into()));
    }
    check_exterior_degree(a.rows(), k)?;
    exterior_power(&a.lift(), k)?.reduce(a.modulus())
}

/// Unipotency test: `(A - I)^r = 0` for `r = dim A`. The second component is
/// the nilpotency index of `A - I` (`0` for the identity), present only when
/// `A` is unipotent.
pub fn is_unipotent(a: &IntMatrix) -> (bool, Option<usize>) {
    assert!(a.is_square());
    let n = a.rows();
    let nil = a.minus_identity();
    if nil.is_zero() {
        return (true, Some(0));
    }
    let mut p = nil.clone();
    for e in 1..=n {
        if p.is_zero() {
            return (true, Some(e));
        }
        if e < n {
            p = &p * &nil;
        }
    }
    (false, None)
}

/// Dense matrix over `Z/nZ`. Zero-row matrices are allowed and stand for an
/// empty generating set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

pub(crate) fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub(crate) fn addmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

pub(crate) fn submod(a: u64, b: u64, n: u64) -> u64 {
    addmod(a, n - b % n, n)
}

impl ModMatrix {
    /// Entries are reduced modulo `modulus`.
    pub fn new(modulus: u64, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|a| a % modulus).collect();
        Ok(ModMatrix { modulus, rows, cols, data })
    }

    pub fn from_rows(modulus: u64, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(modulus, rows.len(), cols, rows.concat())
    }

    /// Signed literal rows, reduced into `[0, n)`.
    pub fn from_i64(modulus: u64, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let m = modulus as i128;
        let data = rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|&a| (a as i128).rem_euclid(m) as u64)
            .collect();
        Self::new(modulus, rows.len(), cols, data).expect("well-formed literal matrix")
    }

    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Self {
        Self::new(modulus, rows, cols, vec![0; rows * cols]).expect("nonzero modulus")
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let mut m = Self::zeros(modulus, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus;
        }
        m
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
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

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.modulus, self.rows) && self.is_square()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn scale(&self, c: u64) -> Self {
        let n = self.modulus;
        let data = self.data.iter().map(|&a| mulmod(a, c % n, n)).collect();
        ModMatrix { data, ..self.clone() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.modulus, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn minus_identity(&self) -> Self {
        self - &Self::identity(self.modulus, self.rows)
    }

    /// Image of a column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let n = self.modulus;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| addmod(acc, mulmod(a, b, n), n)))
            .collect()
    }

    /// Lift to the integer matrix with entries in `[0, n)`.
    pub fn lift(&self) -> IntMatrix {
        IntMatrix::new(self.rows, self.cols, self.data.iter().map(|&a| BigInt::from(a)).collect())
            .expect("lift of a non-empty matrix")
    }

    /// Stacks `other` below `self`.
    pub fn stack(&self, other: &ModMatrix) -> Self {
        assert_eq!(self.modulus, other.modulus);
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        ModMatrix { modulus: self.modulus, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduction into `Z/mZ` for a divisor `m` of the modulus.
    pub fn reduce(&self, m: u64) -> Result<Self> {
        if m == 0 || self.modulus % m != 0 {
            return Err(Error::Precondition(format!("{m} does not divide {}", self.modulus)));
        }
        Self::new(m, self.rows, self.cols, self.data.clone())
    }
}

impl Add for &ModMatrix {
    type Output = ModMatrix;
    fn add(self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!(self.modulus, rhs.modulus);
        check_same_shape((self.rows, self.cols), (rhs.rows, rhs.cols), "add");
        let n = self.modulus;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| addmod(a, b, n)).collect();
        ModMatrix { data, ..self.clone() }
    }
}

impl Sub for &ModMatrix {
    type Output = ModMatrix;
    fn sub(self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!(self.modulus, rhs.modulus);
        check_same_shape((self.rows, self.cols), (rhs.rows, rhs.cols), "sub");
        let n = self.modulus;
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| submod(a, b, n)).collect();
        ModMatrix { data, ..self.clone() }
    }
}

impl Neg for &ModMatrix {
    type Output = ModMatrix;
    fn neg(self) -> ModMatrix {
        let n = self.modulus;
        ModMatrix { data: self.data.iter().map(|&a| submod(0, a, n)).collect(), ..self.clone() }
    }
}

impl Mul for &ModMatrix {
    type Output = ModMatrix;
    fn mul(self, rhs: &ModMatrix) -> ModMatrix {
        assert_eq!(self.modulus, rhs.modulus);
        assert_eq!(self.cols, rhs.rows, "mul: inner dimensions differ");
        let n = self.modulus as u128;
        let mut data = vec![0u64; self.rows * rhs.cols];
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc = (acc + self.get(i, k) as u128 * rhs.get(k, j) as u128) % n;
                }
                data[i * rhs.cols + j] = acc as u64;
            }
        }
        ModMatrix { modulus: self.modulus, rows: self.rows, cols: rhs.cols, data }
    }
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} mod {}", self.modulus)
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = (0..self.rows).map(|i| format!("[{}]", self.row(i).iter().join(", ")));
        write!(f, "[{}]", rows.format(", "))
    }
}

/// `(A^T)^{-1}` modulo `n`: the contragredient action on the dual module.
pub fn dual_action(a: &ModMatrix) -> Result<ModMatrix> {
    inverse_mod(&a.transpose())
}

/// Inverse over `Z/nZ`, read off the Howell form of `[A | I]`.
pub fn inverse_mod(a: &ModMatrix) -> Result<ModMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = a.modulus();
    let r = a.rows();
    if n == 1 {
        return Ok(ModMatrix::zeros(1, r, r));
    }
    let mut aug = ModMatrix::zeros(n, r, 2 * r);
    for i in 0..r {
        for j in 0..r {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, r + i, 1);
    }
    let h = howell_form(&aug);
    let left_is_identity = h.rows() >= r
        && (0..r).all(|i| (0..r).all(|j| h.get(i, j) == u64::from(i == j)));
    if !left_is_identity {
        return Err(Error::SingularModN(n));
    }
    let mut inv = ModMatrix::zeros(n, r, r);
    for i in 0..r {
        for j in 0..r {
            inv.set(i, j, h.get(i, r + j));
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let sub: Vec<Vec<i64>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&sub)
            })
            .sum()
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&IntMatrix::identity(2)), IntPoly::from_i64(&[1, -2, 1]));
        assert_eq!(char_poly(&(-&IntMatrix::identity(2))), IntPoly::from_i64(&[1, 2, 1]));
        let rot3 = IntMatrix::from_i64(&[&[0, -1], &[1, -1]]);
        assert_eq!(char_poly(&rot3), IntPoly::from_i64(&[1, 1, 1]));
    }

    #[test]
    fn char_poly_agrees_with_cofactor_expansion_at_integer_points() {
        let a = vec![vec![2, -1, 0, 3], vec![1, 1, -2, 0], vec![0, 4, 1, -1], vec![-3, 0, 2, 2]];
        let m = IntMatrix::from_rows(&a).unwrap();
        let p = char_poly(&m);
        for x in -3i64..=3 {
            let shifted: Vec<Vec<i64>> = (0..4)
                .map(|i| (0..4).map(|j| if i == j { x - a[i][j] } else { -a[i][j] }).collect())
                .collect();
            assert_eq!(p.eval(&BigInt::from(x)), BigInt::from(cofactor_det(&shifted)));
        }
    }

    #[test]
    fn determinant_matches_cofactor() {
        let a = vec![vec![0, 2, 1], vec![3, -1, 4], vec![5, 0, -2]];
        let m = IntMatrix::from_rows(&a).unwrap();
        assert_eq!(m.determinant(), BigInt::from(cofactor_det(&a)));
        assert!(IntMatrix::from_i64(&[&[1, 2], &[2, 4]]).determinant().is_zero());
    }

    #[test]
    fn exterior_power_examples() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[5, 3]]);
        assert_eq!(exterior_power(&a, 0).unwrap(), IntMatrix::identity(1));
        assert_eq!(exterior_power(&a, 2).unwrap(), IntMatrix::from_i64(&[&[1]]));
        let d = IntMatrix::diagonal(&[2, 3, 5, 7]);
        assert_eq!(exterior_power(&d, 2).unwrap(), IntMatrix::diagonal(&[6, 10, 14, 15, 21, 35]));
        assert_eq!(exterior_power(&a, 3), Err(Error::ExteriorDegree { k: 3, dim: 2 }));
    }

    #[test]
    fn unipotency() {
        assert_eq!(is_unipotent(&IntMatrix::identity(2)), (true, Some(0)));
        assert_eq!(is_unipotent(&IntMatrix::from_i64(&[&[1, 1], &[0, 1]])), (true, Some(2)));
        assert_eq!(is_unipotent(&(-&IntMatrix::identity(2))), (false, None));
    }

    #[test]
    fn dual_action_examples() {
        let minus = ModMatrix::from_i64(7, &[&[-1, 0], &[0, -1]]);
        assert_eq!(dual_action(&minus).unwrap(), minus);
        let u = ModMatrix::from_i64(5, &[&[1, 1], &[0, 1]]);
        assert_eq!(dual_action(&u).unwrap(), ModMatrix::from_i64(5, &[&[1, 0], &[4, 1]]));
        let sing = ModMatrix::from_i64(4, &[&[2, 0], &[0, 1]]);
        assert_eq!(dual_action(&sing), Err(Error::SingularModN(4)));
    }

    #[test]
    fn dual_of_symplectic_is_conjugate_by_form() {
        let n = 9;
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let j = IntMatrix::symplectic_form(1);
        let jinv = -&j;
        let expected = (&(&j * &a) * &jinv).reduce(n).unwrap();
        assert_eq!(dual_action(&a.reduce(n).unwrap()).unwrap(), expected);
    }

    #[test]
    fn reduction_is_a_ring_map() {
        let a = IntMatrix::from_i64(&[&[3, -7], &[11, 2]]);
        let b = IntMatrix::from_i64(&[&[-5, 4], &[1, 9]]);
        for n in [2, 6, 13] {
            let (ra, rb) = (a.reduce(n).unwrap(), b.reduce(n).unwrap());
            assert_eq!((&a + &b).reduce(n).unwrap(), &ra + &rb);
            assert_eq!((&a * &b).reduce(n).unwrap(), &ra * &rb);
        }
    }
}
