//! Néron-model invariants of potentially good generators.
//!
//! Over a strictly henselian base the `n`-torsion points defined over `F` are
//! the fixed subgroup of `τ`, the abelian rank is half the rank of the fixed
//! lattice, and the component group is the torsion of `Z^{2d} / (τ - I)`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cyclotomic::cyclotomic_factor;
use crate::cyclotomic::lcm_of_orders;
use crate::error::{Error, Result};
use crate::inertia::{witness_exists, InertiaGenerator, Verdict};
use crate::linalg::{char_poly, smith_normal_form, IntMatrix};
use crate::torsion::{fixed_subgroup, Polarization, TorsionModule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeronInvariants {
    pub d: usize,
    pub a: usize,
    pub u: usize,
    pub t: usize,
    /// Elementary divisors `> 1` of the component group.
    pub phi: Vec<u64>,
    /// `phi` with the `p`-primary parts removed.
    pub phi_prime: Vec<u64>,
}

impl NeronInvariants {
    pub fn phi_order(&self) -> u128 {
        self.phi.iter().map(|&x| u128::from(x)).product()
    }

    pub fn phi_prime_order(&self) -> u128 {
        self.phi_prime.iter().map(|&x| u128::from(x)).product()
    }

    /// `Φ[n] = ⊕ Z/gcd(d_i, n)`, as its nontrivial cyclic factors.
    pub fn phi_n(&self, n: u64) -> Vec<u64> {
        self.phi.iter().map(|&x| gcd(x, n)).filter(|&x| x > 1).collect()
    }

    /// `Φ'` is `(Z/q)^r` for some `r`.
    pub fn phi_prime_is_elementary(&self, q: u64) -> bool {
        self.phi_prime.iter().all(|&x| x == q)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn strip_prime(mut x: u64, p: u64) -> u64 {
    if p >= 2 {
        while x % p == 0 {
            x /= p;
        }
    }
    x
}

fn to_u64(x: &BigInt) -> Result<u64> {
    x.to_u64().ok_or_else(|| Error::Overflow(x.to_string()))
}

/// Abelian and unipotent ranks and the component group, from the Smith form
/// of `τ - I`.
pub fn neron_invariants(g: &InertiaGenerator) -> Result<NeronInvariants> {
    if !g.is_potentially_good() {
        return Err(Error::NotPotentiallyGood);
    }
    let d = g.dim();
    let snf = smith_normal_form(&g.tau().minus_identity());
    let zeros = snf.divisors.iter().filter(|x| x.is_zero()).count();
    debug_assert_eq!(zeros % 2, 0);
    let a = zeros / 2;
    let phi = snf.torsion_divisors().iter().map(to_u64).collect::<Result<Vec<_>>>()?;
    let p = g.characteristic();
    let phi_prime: Vec<u64> = phi.iter().map(|&x| strip_prime(x, p)).filter(|&x| x > 1).collect();
    Ok(NeronInvariants { d, a, u: d - a, t: 0, phi, phi_prime })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NeronTorsion {
    pub n: u64,
    pub fixed_order: u128,
    /// Invariant factors of `X_n(F)`.
    pub structure: Vec<u64>,
    pub two_a: usize,
    pub phi_n: Vec<u64>,
    /// `Some(b)` when `X_n(F) ≅ (Z/n)^b`.
    pub b: Option<usize>,
    /// `#X_n(F) = n^{2a} #Φ[n]`.
    pub identity_holds: bool,
}

pub fn neron_torsion(g: &InertiaGenerator, n: u64) -> Result<NeronTorsion> {
    g.check_coprime(n, "the level")?;
    let inv = neron_invariants(g)?;
    let fixed = fixed_subgroup(g.tau(), n)?;
    let structure = fixed.structure();
    let phi_n = inv.phi_n(n);
    let rhs = u128::from(n).pow(2 * inv.a as u32) * phi_n.iter().map(|&x| u128::from(x)).product::<u128>();
    let b = (n == 1 || structure.iter().all(|&x| x == n)).then_some(structure.len());
    Ok(NeronTorsion {
        n,
        fixed_order: fixed.order(),
        structure,
        two_a: 2 * inv.a,
        phi_n,
        b,
        identity_holds: fixed.order() == rhs,
    })
}

fn require_level_structure(g: &InertiaGenerator, n: u64, polarization: &Polarization) -> Result<()> {
    let module = TorsionModule::induced(n, polarization)?;
    if !module.is_nondegenerate() {
        return Err(Error::HypothesisNotMet(format!("the induced pairing is degenerate modulo {n}")));
    }
    if !polarization.is_compatible(g.tau(), n)? {
        return Err(Error::HypothesisNotMet(format!("tau does not preserve the pairing modulo {n}")));
    }
    if !witness_exists(g, &module)? {
        return Err(Error::HypothesisNotMet(format!("no fixed maximal isotropic subgroup of X_{n}")));
    }
    Ok(())
}

fn require_tame_good(g: &InertiaGenerator, n: u64) -> Result<()> {
    if g.characteristic() == n {
        return Err(Error::HypothesisNotMet(format!("residue characteristic {n}")));
    }
    if !g.is_potentially_good() {
        return Err(Error::HypothesisNotMet("reduction is not potentially good".into()));
    }
    Ok(())
}

fn pow_u128(base: u64, e: usize) -> u128 {
    u128::from(base).pow(e as u32)
}

fn conclusion(id: &str, holds: bool, citation: &str) -> Verdict {
    Verdict::implication(id, true, holds, citation)
}

/// Level-2 maximal isotropic structure over a strictly henselian base.
pub fn verify_neron2(g: &InertiaGenerator, polarization: &Polarization) -> Result<Vec<Verdict>> {
    require_tame_good(g, 2)?;
    require_level_structure(g, 2, polarization)?;
    let inv = neron_invariants(g)?;
    let d = inv.d;
    let fixed = fixed_subgroup(g.tau(), 2)?;
    let b = fixed.structure().len();
    let index = pow_u128(2, 2 * d) / fixed.order();
    let all_fixed = b == 2 * d;
    Ok(vec![
        conclusion("neron2-elementary", inv.phi_prime_is_elementary(2), "component group is an elementary abelian 2-group"),
        conclusion(
            "neron2-rank",
            b >= 2 * inv.a && inv.phi_prime.len() == b - 2 * inv.a,
            "component group has 2-rank b - 2a",
        ),
        conclusion(
            "neron2-index",
            index * inv.phi_prime_order() == pow_u128(2, 2 * inv.u),
            "[X_2 : X_2(F)] #Φ' = 2^{2u}",
        ),
        Verdict::equivalence(
            "neron2-good",
            g.is_good(),
            inv.phi_prime.is_empty() && all_fixed,
            "good iff Φ' = 0 and X_2 is fixed",
        ),
    ])
}

/// Level-3 maximal isotropic structure over a strictly henselian base.
pub fn verify_neron3(g: &InertiaGenerator, polarization: &Polarization) -> Result<Vec<Verdict>> {
    require_tame_good(g, 3)?;
    require_level_structure(g, 3, polarization)?;
    let inv = neron_invariants(g)?;
    let d = inv.d;
    let fixed = fixed_subgroup(g.tau(), 3)?;
    let structure = fixed.structure();
    let elementary = structure.iter().all(|&x| x == 3);
    Ok(vec![
        conclusion(
            "neron3-fixed",
            elementary && structure.len() == 2 * d - inv.u,
            "X_3(F) ≅ (Z/3)^{2d-u}",
        ),
        conclusion(
            "neron3-components",
            inv.phi_prime_is_elementary(3) && inv.phi_prime.len() == inv.u,
            "Φ' ≅ (Z/3)^u",
        ),
        Verdict::equivalence("neron3-good", g.is_good(), structure.len() == 2 * d, "good iff X_3(F) = X_3"),
        Verdict::equivalence(
            "neron3-additive",
            g.is_purely_additive(),
            elementary && structure.len() == d,
            "purely additive iff X_3(F) ≅ (Z/3)^d",
        ),
    ])
}

/// Hypothesis variants for level 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Neron4Mode {
    /// `X_2` is fixed.
    A,
    /// A maximal isotropic subgroup of `X_4` is fixed.
    B,
}

/// `X_4(F) ≅ (Z/4)^{2a} × (Z/2)^{2u}` and its consequences.
pub fn verify_neron4(g: &InertiaGenerator, polarization: &Polarization, mode: Neron4Mode) -> Result<Vec<Verdict>> {
    require_tame_good(g, 2)?;
    match mode {
        Neron4Mode::A => {
            if !g.tau().minus_identity().divisible_by(2) {
                return Err(Error::HypothesisNotMet("X_2 is not fixed".into()));
            }
        }
        Neron4Mode::B => require_level_structure(g, 4, polarization)?,
    }
    let inv = neron_invariants(g)?;
    let d = inv.d;
    let fixed = fixed_subgroup(g.tau(), 4)?;
    let mut expected = vec![2u64; 2 * inv.u];
    expected.extend(std::iter::repeat_n(4, 2 * inv.a));
    let module = TorsionModule::standard(4, d)?;
    let x2 = module.subgroup(&(0..2 * d).map(|i| (0..2 * d).map(|j| if i == j { 2 } else { 0 }).collect()).collect::<Vec<_>>())?;
    let contains_x2 = fixed.contains_subgroup(&x2);
    Ok(vec![
        conclusion("neron4-fixed", fixed.structure() == expected, "X_4(F) ≅ (Z/4)^{2a} × (Z/2)^{2u}"),
        conclusion(
            "neron4-components",
            inv.phi_prime_is_elementary(2) && inv.phi_prime.len() == 2 * inv.u,
            "Φ' ≅ (Z/2)^{2u}",
        ),
        conclusion(
            "neron4-indices",
            contains_x2
                && module.order() / fixed.order() == pow_u128(2, 2 * inv.u)
                && fixed.order() / x2.order() == pow_u128(2, 2 * inv.a),
            "X_2 ⊆ X_4(F), [X_4 : X_4(F)] = 2^{2u}, [X_4(F) : X_2] = 2^{2a}",
        ),
        Verdict::equivalence("neron4-good", g.is_good(), fixed == module.whole(), "good iff X_4(F) = X_4"),
        Verdict::equivalence("neron4-additive", g.is_purely_additive(), fixed == x2, "purely additive iff X_4(F) = X_2"),
    ])
}

/// For finite-order `A` with `(A - I)^{m(ℓ-1)ℓ^{r-1}} ≡ 0 (mod ℓ^m)` and
/// `r > 1`: the torsion of `coker(A - I)` is killed by `ℓ^{r-1}` at `ℓ`.
pub fn randm_check(a: &IntMatrix, l: u64, m: u32, r: u32) -> Result<Verdict> {
    if r <= 1 {
        return Err(Error::HypothesisNotMet(format!("r = {r} must exceed 1")));
    }
    if !a.is_square() {
        return Err(Error::Dimension("randm_check needs a square matrix".into()));
    }
    let factors = cyclotomic_factor(&char_poly(a)).map_err(|_| Error::HypothesisNotMet("A has infinite order".into()))?;
    if !a.pow(lcm_of_orders(&factors)).is_identity() {
        return Err(Error::HypothesisNotMet("A has infinite order".into()));
    }
    let exponent = u64::from(m) * (l - 1) * l.pow(r - 1);
    let modulus = l.pow(m);
    if !a.minus_identity().pow(exponent).divisible_by(modulus) {
        return Err(Error::HypothesisNotMet(format!("(A - I)^{exponent} is not divisible by {modulus}")));
    }
    let bound = BigInt::from(l.pow(r - 1));
    let lb = BigInt::from(l);
    let killed = smith_normal_form(&a.minus_identity()).torsion_divisors().iter().all(|x| {
        let mut part = BigInt::from(1);
        let mut rest = x.clone();
        while (&rest % &lb).is_zero() {
            rest /= &lb;
            part *= &lb;
        }
        (&bound % &part).is_zero()
    });
    Ok(conclusion("randm", killed, "torsion of M / (A - 1)M is killed by ℓ^{r-1}"))
}

/// When `Φ'` is an elementary abelian 2-group (3-group) its rank is at most
/// `2u` (at most `u`).
pub fn edixhoven_bound(inv: &NeronInvariants) -> Option<Verdict> {
    if inv.phi_prime.is_empty() {
        return None;
    }
    if inv.phi_prime_is_elementary(2) {
        return Some(conclusion("edixhoven-2", inv.phi_prime.len() <= 2 * inv.u, "elementary 2-group of rank at most 2u"));
    }
    if inv.phi_prime_is_elementary(3) {
        return Some(conclusion("edixhoven-3", inv.phi_prime.len() <= inv.u, "elementary 3-group of rank at most u"));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inertia::classify;

    fn gen(rows: &[&[i64]], p: u64) -> InertiaGenerator {
        classify(&IntMatrix::from_i64(rows), p).unwrap()
    }

    /// Symplectic block sum in `(x_1, .., x_d, y_1, .., y_d)` coordinates.
    fn block_sum(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let (da, db) = (a.rows() / 2, b.rows() / 2);
        let d = da + db;
        let mut out = IntMatrix::zeros(2 * d, 2 * d);
        let place_a = |i: usize| if i < da { i } else { i - da + d };
        let place_b = |i: usize| if i < db { i + da } else { i - db + d + da };
        for i in 0..2 * da {
            for j in 0..2 * da {
                out.set(place_a(i), place_a(j), a.get(i, j).clone());
            }
        }
        for i in 0..2 * db {
            for j in 0..2 * db {
                out.set(place_b(i), place_b(j), b.get(i, j).clone());
            }
        }
        out
    }

    const MINUS: &[&[i64]] = &[&[-1, 0], &[0, -1]];
    const ROT3: &[&[i64]] = &[&[0, -1], &[1, -1]];
    const ROT4: &[&[i64]] = &[&[0, -1], &[1, 0]];

    #[test]
    fn invariant_examples() {
        let inv = neron_invariants(&gen(MINUS, 3)).unwrap();
        assert_eq!((inv.a, inv.u, inv.t), (0, 1, 0));
        assert_eq!(inv.phi, vec![2, 2]);
        assert_eq!(inv.phi_prime, vec![2, 2]);
        let inv = neron_invariants(&gen(&[&[1, 0], &[0, 1]], 0)).unwrap();
        assert_eq!((inv.a, inv.u), (1, 0));
        assert!(inv.phi.is_empty());
        let inv = neron_invariants(&gen(ROT3, 0)).unwrap();
        assert_eq!((inv.a, inv.u, inv.phi.clone()), (0, 1, vec![3]));
        let inv = neron_invariants(&gen(ROT3, 2)).unwrap();
        assert_eq!(inv.phi_prime, vec![3]);
        assert_eq!(strip_prime(12, 2), 3);
        assert_eq!(strip_prime(12, 0), 12);
        assert_eq!(neron_invariants(&gen(&[&[1, 1], &[0, 1]], 0)), Err(Error::NotPotentiallyGood));
    }

    #[test]
    fn torsion_examples() {
        let t = neron_torsion(&gen(MINUS, 3), 4).unwrap();
        assert_eq!(t.structure, vec![2, 2]);
        assert_eq!((t.two_a, t.phi_n.clone()), (0, vec![2, 2]));
        assert!(t.identity_holds);
        let t = neron_torsion(&gen(&[&[1, 0], &[0, 1]], 0), 6).unwrap();
        assert_eq!((t.fixed_order, t.two_a, t.b), (36, 2, Some(2)));
        assert!(t.phi_n.is_empty() && t.identity_holds);
        let t = neron_torsion(&gen(ROT3, 0), 3).unwrap();
        assert_eq!((t.fixed_order, t.phi_n.clone()), (3, vec![3]));
        assert!(t.identity_holds);
        assert!(matches!(neron_torsion(&gen(MINUS, 3), 3), Err(Error::CharacteristicDivides { .. })));
    }

    #[test]
    fn neron2_examples() {
        let p1 = Polarization::principal(1);
        assert!(verify_neron2(&gen(MINUS, 3), &p1).unwrap().iter().all(|v| v.agree));
        assert!(verify_neron2(&gen(&[&[1, 0], &[0, 1]], 0), &p1).unwrap().iter().all(|v| v.agree));
        let tau = block_sum(&IntMatrix::from_i64(MINUS), &IntMatrix::identity(2));
        let g = classify(&tau, 0).unwrap();
        let inv = neron_invariants(&g).unwrap();
        assert_eq!((inv.a, inv.u, inv.phi_prime.clone()), (1, 1, vec![2, 2]));
        assert_eq!(fixed_subgroup(&tau, 2).unwrap().order(), 16);
        assert!(verify_neron2(&g, &Polarization::principal(2)).unwrap().iter().all(|v| v.agree));
        assert!(matches!(verify_neron2(&gen(ROT3, 0), &p1), Err(Error::HypothesisNotMet(_))));
    }

    #[test]
    fn neron3_examples() {
        let p1 = Polarization::principal(1);
        let v = verify_neron3(&gen(ROT3, 0), &p1).unwrap();
        assert!(v.iter().all(|v| v.agree), "{v:?}");
        assert!(v.iter().find(|v| v.id == "neron3-additive").unwrap().hypothesis);
        assert!(verify_neron3(&gen(&[&[1, 0], &[0, 1]], 0), &p1).unwrap().iter().all(|v| v.agree));
        let tau = block_sum(&IntMatrix::from_i64(ROT3), &IntMatrix::identity(2));
        let g = classify(&tau, 0).unwrap();
        assert_eq!(fixed_subgroup(&tau, 3).unwrap().order(), 27);
        assert!(verify_neron3(&g, &Polarization::principal(2)).unwrap().iter().all(|v| v.agree));
    }

    #[test]
    fn neron4_examples() {
        let p1 = Polarization::principal(1);
        let v = verify_neron4(&gen(MINUS, 3), &p1, Neron4Mode::A).unwrap();
        assert!(v.iter().all(|v| v.agree), "{v:?}");
        assert!(v.iter().find(|v| v.id == "neron4-additive").unwrap().conclusion);
        assert!(verify_neron4(&gen(&[&[1, 0], &[0, 1]], 0), &p1, Neron4Mode::B).unwrap().iter().all(|v| v.agree));
        let tau = block_sum(&IntMatrix::from_i64(MINUS), &IntMatrix::identity(2));
        let g = classify(&tau, 0).unwrap();
        assert_eq!(fixed_subgroup(&tau, 4).unwrap().structure(), vec![2, 2, 4, 4]);
        assert!(verify_neron4(&g, &Polarization::principal(2), Neron4Mode::A).unwrap().iter().all(|v| v.agree));
        assert!(matches!(verify_neron4(&gen(ROT4, 0), &p1, Neron4Mode::A), Err(Error::HypothesisNotMet(_))));
    }

    #[test]
    fn randm_examples() {
        let v = randm_check(&IntMatrix::from_i64(MINUS), 2, 1, 2).unwrap();
        assert!(v.conclusion);
        assert!(randm_check(&IntMatrix::identity(2), 2, 1, 2).unwrap().conclusion);
        let r4 = IntMatrix::from_i64(ROT4);
        assert_eq!(smith_normal_form(&r4.minus_identity()).torsion_divisors(), vec![BigInt::from(2)]);
        assert!(randm_check(&r4, 2, 1, 2).unwrap().conclusion);
        assert!(matches!(randm_check(&IntMatrix::from_i64(ROT3), 2, 1, 2), Err(Error::HypothesisNotMet(_))));
        assert!(matches!(randm_check(&IntMatrix::from_i64(&[&[1, 1], &[0, 1]]), 2, 1, 2), Err(Error::HypothesisNotMet(_))));
    }

    #[test]
    fn edixhoven_examples() {
        let inv = neron_invariants(&gen(MINUS, 3)).unwrap();
        assert!(edixhoven_bound(&inv).unwrap().conclusion);
        let inv = neron_invariants(&gen(ROT3, 0)).unwrap();
        assert!(edixhoven_bound(&inv).unwrap().conclusion);
        assert!(edixhoven_bound(&neron_invariants(&gen(&[&[1, 0], &[0, 1]], 0)).unwrap()).is_none());
    }
}
