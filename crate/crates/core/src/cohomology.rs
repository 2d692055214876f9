//! Inertia acting on `H^k = Λ^k H^1`, with `H^1` the dual of the Tate module.
//!
//! For symplectic `τ` the contragredient `(τ^T)^{-1}` equals `J τ J^{-1}`, so
//! the integral action stays integral and its reductions are the actions on
//! `H^k(-, Z/nZ)`.

use crate::cyclotomic::{compute_r, n_set, DEFAULT_DEGREE_BOUND};
use crate::error::{Error, Result};
use crate::inertia::{galois_criterion, InertiaGenerator, Verdict};
use crate::linalg::{exterior_power, IntMatrix};

/// `Λ^k` of the `H^1` action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyAction {
    pub k: usize,
    /// Action on `H^1`.
    pub base: IntMatrix,
    /// Action on `H^k`, of size `C(2d, k)`.
    pub matrix: IntMatrix,
}

/// `(τ^T)^{-1}` for symplectic `τ`.
pub fn h1_action(tau: &IntMatrix) -> IntMatrix {
    let j = IntMatrix::symplectic_form(tau.rows() / 2);
    let j_inv = -&j;
    &(&j * tau) * &j_inv
}

pub fn cohomology_action(tau: &IntMatrix, k: usize) -> Result<CohomologyAction> {
    let base = h1_action(tau);
    let matrix = exterior_power(&base, k)?;
    Ok(CohomologyAction { k, base, matrix })
}

/// `(A_k - I)^{k+1} ≡ 0 (mod n)`, or `= 0` over `Z` when `n = 0`.
pub fn hk_vanishing(g: &InertiaGenerator, k: usize, n: u64) -> Result<bool> {
    let rank = g.tau().rows();
    if k == 0 || k >= rank {
        return Err(Error::ExteriorDegree { k, dim: rank });
    }
    if n != 0 {
        g.check_coprime(n, "the coefficient modulus")?;
    }
    let action = cohomology_action(g.tau(), k)?;
    if n == 0 {
        return Ok(action.matrix.minus_identity().pow(k as u64 + 1).is_zero());
    }
    let reduced = action.matrix.reduce(n)?;
    Ok(reduced.minus_identity().pow(k as u64 + 1).is_zero())
}

/// Semistable, or (for even `k`) purely additive and semistable over a
/// quadratic extension.
pub fn reduction_condition(g: &InertiaGenerator, k: usize) -> bool {
    if galois_criterion(g) {
        return true;
    }
    if k % 2 == 1 {
        return false;
    }
    let m = g.tau().pow(2).minus_identity();
    g.is_purely_additive() && (&m * &m).is_zero()
}

/// The equivalence between the reduction condition and the vanishing of
/// `(σ - 1)^{k+1}` on `H^k(-, Z/nZ)`, for `n` outside `N(k+1)`. For finite
/// order `τ` and even `k` the reduction condition is also checked against
/// `τ = ±I`.
pub fn highercohcor_classify(g: &InertiaGenerator, k: usize, n: u64, strictly_henselian: bool) -> Result<Vec<Verdict>> {
    let rank = g.tau().rows();
    if k == 0 || k >= rank {
        return Err(Error::ExteriorDegree { k, dim: rank });
    }
    g.check_coprime(n, "the coefficient modulus")?;
    if n_set(k as u64 + 1).contains(n) {
        return Err(Error::PreconditionExcluded { n, k: k as u64 + 1 });
    }
    let even = k % 2 == 0;
    if even && g.characteristic() == 2 && !strictly_henselian {
        return Err(Error::HypothesisNotMet(
            "even degree needs residue characteristic other than 2 or a strictly henselian base".into(),
        ));
    }
    let left = reduction_condition(g, k);
    let right = hk_vanishing(g, k, n)?;
    let mut out = vec![Verdict::equivalence(
        &format!("cohomology-k{k}-n{n}"),
        left,
        right,
        if even {
            "semistable or quadratic-semistable purely additive iff (sigma - 1)^{k+1} kills H^k(Z/n)"
        } else {
            "semistable iff (sigma - 1)^{k+1} kills H^k(Z/n)"
        },
    )];
    if even && g.is_potentially_good() {
        let tau = g.tau();
        let plus_minus = tau.is_identity() || (-tau).is_identity();
        out.push(Verdict::equivalence(
            &format!("cohomology-k{k}-sign"),
            left,
            plus_minus,
            "for finite order the even-degree condition means tau = I or tau = -I",
        ));
    }
    Ok(out)
}

/// If `H^k(Z/n)` vanishing holds, probes the conclusion over the totally
/// ramified extension of degree `R(k+1, n)`. `None` when that degree is
/// unbounded or divisible by the residue characteristic.
pub fn extension_probe(g: &InertiaGenerator, k: usize, n: u64) -> Result<Option<Verdict>> {
    let vanishing = hk_vanishing(g, k, n)?;
    let Some(degree) = compute_r(k as u64 + 1, n, DEFAULT_DEGREE_BOUND).value() else {
        return Ok(None);
    };
    let Ok(h) = g.power(degree) else {
        return Ok(None);
    };
    Ok(Some(Verdict::implication(
        &format!("cohomology-extension-k{k}-n{n}"),
        vanishing,
        reduction_condition(&h, k),
        "vanishing on H^k(Z/n) implies the reduction condition over the degree R(k+1, n) extension",
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inertia::classify;

    fn gen(tau: IntMatrix, p: u64) -> InertiaGenerator {
        classify(&tau, p).unwrap()
    }

    fn rot4_pair() -> IntMatrix {
        // the order-4 rotation on both symplectic planes
        IntMatrix::from_i64(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]])
    }

    #[test]
    fn vanishing_examples() {
        let minus = gen(-&IntMatrix::identity(4), 3);
        for n in [0, 2, 4, 5, 7, 11] {
            assert!(hk_vanishing(&minus, 2, n).unwrap());
        }
        assert!(!hk_vanishing(&minus, 1, 5).unwrap());
        let minus = gen(-&IntMatrix::identity(4), 0);
        assert!(!hk_vanishing(&minus, 1, 3).unwrap());
        let uni = gen(IntMatrix::from_i64(&[&[1, 1], &[0, 1]]), 0);
        for n in [0, 2, 3, 9] {
            assert!(hk_vanishing(&uni, 1, n).unwrap());
        }
        assert!(matches!(hk_vanishing(&uni, 2, 5), Err(Error::ExteriorDegree { .. })));
    }

    #[test]
    fn h1_is_contragredient() {
        let tau = rot4_pair();
        let h1 = h1_action(&tau);
        assert!((&h1.transpose() * &tau).is_identity());
    }

    #[test]
    fn worked_classifications() {
        let minus = gen(-&IntMatrix::identity(4), 3);
        let v = highercohcor_classify(&minus, 2, 5, false).unwrap();
        assert!(v[0].hypothesis && v[0].conclusion && v.iter().all(|v| v.agree));

        let rot = gen(rot4_pair(), 3);
        let v = highercohcor_classify(&rot, 2, 5, false).unwrap();
        assert!(!v[0].hypothesis && !v[0].conclusion && v.iter().all(|v| v.agree));

        let uni = IntMatrix::from_i64(&[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let v = highercohcor_classify(&gen(uni, 0), 3, 7, false).unwrap();
        assert!(v[0].hypothesis && v[0].conclusion && v[0].agree);

        assert!(matches!(
            highercohcor_classify(&minus, 2, 4, false),
            Err(Error::PreconditionExcluded { n: 4, k: 3 })
        ));
    }

    #[test]
    fn functoriality() {
        let tau = rot4_pair();
        let a = cohomology_action(&tau, 2).unwrap().matrix;
        let a3 = cohomology_action(&tau.pow(3), 2).unwrap().matrix;
        assert_eq!(a.pow(3), a3);
        let other = IntMatrix::from_i64(&[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let prod = cohomology_action(&(&tau * &other), 2).unwrap().matrix;
        assert_eq!(prod, &a * &cohomology_action(&other, 2).unwrap().matrix);
    }

    #[test]
    fn extension_probe_examples() {
        let rot3 = gen(IntMatrix::from_i64(&[&[0, -1], &[1, -1]]), 0);
        let v = extension_probe(&rot3, 1, 3).unwrap().unwrap();
        assert!(v.agree);
    }
}
