//! Arithmetic in `Z[zeta_N]` and the exceptional moduli.
//!
//! A finite-order algebraic integer `alpha != 1` can only satisfy
//! `(alpha - 1)^k ∈ n O` when `n` is one of finitely many prime powers `N(k)`.
//! The universal instance of that statement is `alpha = zeta_N` in
//! `Z[zeta_N]`, which is what the membership tests here decide exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{char_poly, IntMatrix};
use crate::poly::IntPoly;

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// `Some((l, m))` when `n = l^m` for a prime `l` and `m >= 1`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    match factorize(n).as_slice() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// `N(k)`: the prime powers `l^m` with `m (l - 1) <= k`, together with `1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimePowerSet {
    pub k: u64,
    pub members: Vec<u64>,
}

impl PrimePowerSet {
    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }
}

impl fmt::Display for PrimePowerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.members.iter().map(u64::to_string).collect();
        write!(f, "N({}) = {{{}}}", self.k, items.join(", "))
    }
}

pub fn n_set(k: u64) -> PrimePowerSet {
    let mut members = vec![1u64];
    // l - 1 <= m (l - 1) <= k bounds the prime
    for l in (2..=k + 1).filter(|&l| is_prime(l)) {
        let mut q = 1u64;
        for m in 1.. {
            if m * (l - 1) > k {
                break;
            }
            q *= l;
            members.push(q);
        }
    }
    members.sort_unstable();
    PrimePowerSet { k, members }
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `Phi_N`, by dividing `x^N - 1` by `Phi_e` for the proper divisors `e`.
pub fn cyclotomic_poly(order: u64) -> IntPoly {
    assert!(order >= 1);
    let mut cache = BTreeMap::new();
    cyclotomic_cached(order, &mut cache)
}

fn cyclotomic_cached(order: u64, cache: &mut BTreeMap<u64, IntPoly>) -> IntPoly {
    if let Some(p) = cache.get(&order) {
        return p.clone();
    }
    let mut p = IntPoly::monomial(BigInt::one(), order as usize).sub(&IntPoly::one());
    for e in divisors(order).into_iter().filter(|&e| e < order) {
        let phi_e = cyclotomic_cached(e, cache);
        p = p.exact_div_monic(&phi_e).expect("Phi_e divides x^N - 1");
    }
    cache.insert(order, p.clone());
    p
}

/// Element of `Z[zeta_N]` in the power basis `1, zeta, ..., zeta^{phi(N)-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicInteger {
    order: u64,
    modulus: IntPoly,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInteger {
    fn from_poly(order: u64, modulus: &IntPoly, p: &IntPoly) -> Self {
        let (_, r) = p.div_rem_monic(modulus);
        let deg = modulus.degree().expect("nonzero modulus");
        let coeffs = (0..deg).map(|i| r.coeff(i)).collect();
        CyclotomicInteger { order, modulus: modulus.clone(), coeffs }
    }

    /// `zeta_N^j`.
    pub fn zeta_power(order: u64, j: u64) -> Self {
        let modulus = cyclotomic_poly(order);
        let x = IntPoly::monomial(BigInt::one(), (j % order) as usize);
        Self::from_poly(order, &modulus, &x)
    }

    pub fn integer(order: u64, c: i64) -> Self {
        let modulus = cyclotomic_poly(order);
        Self::from_poly(order, &modulus, &IntPoly::from_i64(&[c]))
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn as_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        Self::from_poly(self.order, &self.modulus, &self.as_poly().add(&other.as_poly()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        Self::from_poly(self.order, &self.modulus, &self.as_poly().sub(&other.as_poly()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        Self::from_poly(self.order, &self.modulus, &self.as_poly().mul(&other.as_poly()))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::integer(self.order, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Membership in `n Z[zeta_N]`: every power-basis coefficient divisible by `n`.
    pub fn divisible_by(&self, n: u64) -> bool {
        let nb = BigInt::from(n);
        self.coeffs.iter().all(|c| c.is_multiple_of(&nb))
    }

    /// Matrix of multiplication by `self` on the power basis (column `j` is
    /// the image of `zeta^j`).
    pub fn multiplication_matrix(&self) -> IntMatrix {
        let deg = self.coeffs.len();
        let mut m = IntMatrix::zeros(deg, deg);
        for j in 0..deg {
            let image = self.mul(&Self::zeta_power(self.order, j as u64));
            for (i, c) in image.coeffs.iter().enumerate() {
                m.set(i, j, c.clone());
            }
        }
        m
    }
}

/// Decides `(zeta_N - 1)^k ∈ n Z[zeta_N]`.
pub fn power_membership(order: u64, k: u64, n: u64) -> bool {
    let z = CyclotomicInteger::zeta_power(order, 1).sub(&CyclotomicInteger::integer(order, 1));
    z.pow(k).divisible_by(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiOracleReport {
    pub k_max: u64,
    pub n_max: u64,
    pub order_max: u64,
    /// Triples with `n` outside `N(k)` that were tested.
    pub checked: u64,
    /// `(order, k, n)` with `n` outside `N(k)` but membership true.
    pub violations: Vec<(u64, u64, u64)>,
}

impl QuasiOracleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Sweeps every `k <= k_max`, `2 <= n <= n_max` with `n` outside `N(k)` and
/// `2 <= N <= order_max`, asserting `(zeta_N - 1)^k` is never in `n O`.
pub fn quasithm_oracle(k_max: u64, n_max: u64, order_max: u64) -> QuasiOracleReport {
    let mut checked = 0;
    let mut violations = Vec::new();
    for order in 2..=order_max {
        let z = CyclotomicInteger::zeta_power(order, 1).sub(&CyclotomicInteger::integer(order, 1));
        let mut power = CyclotomicInteger::integer(order, 1);
        for k in 1..=k_max {
            power = power.mul(&z);
            let exceptional = n_set(k);
            for n in (2..=n_max).filter(|&n| !exceptional.contains(n)) {
                checked += 1;
                if power.divisible_by(n) {
                    violations.push((order, k, n));
                }
            }
        }
    }
    violations.sort_unstable();
    QuasiOracleReport { k_max, n_max, order_max, checked, violations }
}

/// `lcm { N : (zeta_N - 1)^k ∈ n O }`, searched over `N <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DegreeValue {
    Bounded {
        k: u64,
        n: u64,
        value: u64,
        /// Every admissible `N` found; the certificate for `value`.
        admissible: Vec<u64>,
        bound: u64,
    },
    /// `n = 1`: every order is admissible.
    Unbounded { k: u64 },
}

impl DegreeValue {
    pub fn value(&self) -> Option<u64> {
        match self {
            DegreeValue::Bounded { value, .. } => Some(*value),
            DegreeValue::Unbounded { .. } => None,
        }
    }
}

pub const DEFAULT_DEGREE_BOUND: u64 = 1000;

/// Orders `N` with `phi(N) > k` are skipped without computation: there
/// `(x - 1)^k` is already reduced modulo `Phi_N` and its leading coefficient
/// 1 is not divisible by `n >= 2`.
pub fn compute_r(k: u64, n: u64, bound: u64) -> DegreeValue {
    if n == 1 {
        return DegreeValue::Unbounded { k };
    }
    let admissible: Vec<u64> =
        (1..=bound).filter(|&order| euler_phi(order) <= k && power_membership(order, k, n)).collect();
    let value = admissible.iter().fold(1u64, |acc, &x| acc.lcm(&x));
    DegreeValue::Bounded { k, n, value, admissible, bound }
}

/// The degree attached to level `n` for one-way criteria: `compute_r(2, n)`.
pub fn exceptional_degree(n: u64) -> Option<u64> {
    compute_r(2, n, DEFAULT_DEGREE_BOUND).value()
}

/// Factorization of a monic polynomial into cyclotomic polynomials, as
/// `(N, multiplicity)` pairs sorted by `N`.
pub fn cyclotomic_factor(p: &IntPoly) -> Result<Vec<(u64, usize)>> {
    if !p.is_monic() {
        return Err(Error::NonCyclotomicFactor(p.to_string()));
    }
    let deg = p.degree().unwrap_or(0) as u64;
    // phi(N) >= sqrt(N / 2)
    let max_order = (2 * deg * deg).max(2);
    let mut rest = p.clone();
    let mut out = Vec::new();
    let mut cache = BTreeMap::new();
    for order in 1..=max_order {
        if rest.degree() == Some(0) {
            break;
        }
        if euler_phi(order) > rest.degree().unwrap_or(0) as u64 {
            continue;
        }
        let phi = cyclotomic_cached(order, &mut cache);
        let mut mult = 0;
        while let Some(q) = rest.exact_div_monic(&phi) {
            rest = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((order, mult));
        }
    }
    if !rest.is_one() {
        return Err(Error::NonCyclotomicFactor(rest.to_string()));
    }
    Ok(out)
}

/// Whether `(alpha - 1)^2 / n` is an algebraic integer for every root `alpha`
/// of `p`. For each factor `Phi_N` this reads the characteristic polynomial
/// `c(x)` of multiplication by `(zeta_N - 1)^2`; the conjugates of
/// `(zeta_N - 1)^2 / n` are the roots of `n^{-deg} c(n x)`, integral iff the
/// coefficient of `x^{deg - i}` in `c` is divisible by `n^i`.
pub fn eigenvalue_integrality(p: &IntPoly, n: u64) -> Result<bool> {
    let factors = cyclotomic_factor(p)?;
    let nb = BigInt::from(n);
    for (order, _) in factors {
        let z = CyclotomicInteger::zeta_power(order, 1).sub(&CyclotomicInteger::integer(order, 1));
        let square = z.mul(&z);
        let c = char_poly(&square.multiplication_matrix());
        let deg = c.degree().expect("nonzero");
        let mut npow = BigInt::one();
        for i in 0..=deg {
            if !c.coeff(deg - i).is_multiple_of(&npow) {
                return Ok(false);
            }
            npow *= &nb;
        }
    }
    Ok(true)
}

/// `Some(true)` when every root of `p` is an `m`-th root of unity.
pub fn roots_divide(factors: &[(u64, usize)], m: u64) -> bool {
    factors.iter().all(|&(order, _)| m % order == 0)
}

pub(crate) fn lcm_of_orders(factors: &[(u64, usize)]) -> u64 {
    factors.iter().fold(1u64, |acc, &(order, _)| acc.lcm(&order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exceptional_sets() {
        assert_eq!(n_set(1).members, vec![1, 2]);
        assert_eq!(n_set(2).members, vec![1, 2, 3, 4]);
        assert_eq!(n_set(3).members, vec![1, 2, 3, 4, 8]);
        assert_eq!(n_set(4).members, vec![1, 2, 3, 4, 5, 8, 9, 16]);
        assert_eq!(n_set(2).to_string(), "N(2) = {1, 2, 3, 4}");
    }

    #[test]
    fn exceptional_sets_brute_force() {
        for k in 1..=8u64 {
            let brute: Vec<u64> = (1..=1u64 << k)
                .filter(|&q| q == 1 || prime_power(q).is_some_and(|(l, m)| u64::from(m) * (l - 1) <= k))
                .collect();
            assert_eq!(n_set(k).members, brute, "k = {k}");
            assert!(n_set(k).members.iter().all(|&q| n_set(k + 1).contains(q)));
        }
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        for n in 1..=40u64 {
            assert_eq!(cyclotomic_poly(n).degree(), Some(euler_phi(n) as usize));
        }
    }

    #[test]
    fn membership_examples() {
        assert!(power_membership(4, 2, 2));
        assert!(power_membership(3, 2, 3));
        assert!(!power_membership(5, 2, 5));
        assert!(power_membership(2, 2, 4));
        assert!(!power_membership(2, 1, 4));
    }

    #[test]
    fn membership_monotone_in_k() {
        for order in 1..=24 {
            for n in 2..=12 {
                for k in 1..=5 {
                    if power_membership(order, k, n) {
                        assert!(power_membership(order, k + 1, n), "{order} {k} {n}");
                    }
                }
            }
        }
    }

    #[test]
    fn prime_power_boundary_membership() {
        // q = l^m in N(k) with q > 1: (zeta_l - 1)^k ∈ q O, as zeta_l - 1
        // has l-adic valuation 1/(l - 1)
        for k in 1..=6 {
            for &q in n_set(k).members.iter().filter(|&&q| q > 1) {
                let (l, _) = prime_power(q).unwrap();
                assert!(power_membership(l, k, q), "q = {q}, k = {k}");
            }
        }
    }

    #[test]
    fn degree_values() {
        assert_eq!(exceptional_degree(2), Some(4));
        assert_eq!(exceptional_degree(3), Some(3));
        assert_eq!(exceptional_degree(4), Some(2));
        assert_eq!(exceptional_degree(5), Some(1));
        assert_eq!(compute_r(2, 1, 100), DegreeValue::Unbounded { k: 2 });
        match compute_r(2, 2, 100) {
            DegreeValue::Bounded { admissible, .. } => assert_eq!(admissible, vec![1, 2, 4]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pruned_degree_agrees_with_unpruned_search() {
        for n in 2..=12 {
            let unpruned = (1..=60u64).filter(|&o| power_membership(o, 2, n)).fold(1u64, |a, o| a.lcm(&o));
            assert_eq!(compute_r(2, n, 60).value(), Some(unpruned), "n = {n}");
        }
    }

    #[test]
    fn factor_examples() {
        assert_eq!(cyclotomic_factor(&IntPoly::from_i64(&[1, -2, 1])).unwrap(), vec![(1, 2)]);
        assert_eq!(cyclotomic_factor(&IntPoly::from_i64(&[1, 1, 1])).unwrap(), vec![(3, 1)]);
        assert_eq!(cyclotomic_factor(&IntPoly::from_i64(&[1, 0, -1, 0, 1])).unwrap(), vec![(12, 1)]);
        assert!(matches!(
            cyclotomic_factor(&IntPoly::from_i64(&[1, -3, 1])),
            Err(Error::NonCyclotomicFactor(_))
        ));
    }

    #[test]
    fn integrality_examples() {
        assert!(eigenvalue_integrality(&IntPoly::from_i64(&[1, 2, 1]), 4).unwrap());
        assert!(eigenvalue_integrality(&cyclotomic_poly(3), 3).unwrap());
        assert!(!eigenvalue_integrality(&cyclotomic_poly(4), 3).unwrap());
        assert!(eigenvalue_integrality(&IntPoly::from_i64(&[1, -3, 1]), 2).is_err());
    }

    #[test]
    fn integrality_agrees_with_membership() {
        // Z[zeta_N] is integrally closed, so both routes must agree
        for order in 1..=30 {
            for n in 2..=10 {
                let p = cyclotomic_poly(order);
                assert_eq!(eigenvalue_integrality(&p, n).unwrap(), power_membership(order, 2, n), "{order} {n}");
            }
        }
    }

    #[test]
    fn small_sweep_has_no_violations() {
        let report = quasithm_oracle(3, 12, 24);
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.checked > 0);
    }
}
