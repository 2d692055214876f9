//! Tame inertia generators and the semistability criteria.
//!
//! Semistability of the modeled variety means `(τ - I)^2 = 0`; every other
//! criterion is evaluated independently and compared against that.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::cyclotomic::{cyclotomic_factor, exceptional_degree, is_prime, lcm_of_orders};
use crate::error::{Error, Result};
use crate::linalg::{char_poly, is_unipotent, IntMatrix, ModMatrix};
use crate::torsion::{fixed_subgroup, Polarization, Subgroup, SubgroupLattice, TorsionModule};

/// A validated quasi-unipotent symplectic matrix with its residue
/// characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InertiaGenerator {
    tau: IntMatrix,
    p: u64,
    factors: Vec<(u64, usize)>,
    order: u64,
    finite: bool,
}

/// Validates `tau` as a tame inertia generator in residue characteristic `p`
/// (`0` or a prime).
///
/// Besides symplecticity and quasi-unipotence this requires the unipotent
/// part of `tau^m` to square to zero, `m` being the lcm of the eigenvalue
/// orders.
pub fn classify(tau: &IntMatrix, p: u64) -> Result<InertiaGenerator> {
    if !tau.is_square() || tau.rows() % 2 != 0 {
        return Err(Error::Dimension(format!(
            "inertia generator must be square of even size, got {}x{}",
            tau.rows(),
            tau.cols()
        )));
    }
    if p != 0 && !is_prime(p) {
        return Err(Error::InvalidCharacteristic(p));
    }
    let j = IntMatrix::symplectic_form(tau.rows() / 2);
    if &(&tau.transpose() * &j) * tau != j {
        return Err(Error::NotSymplectic);
    }
    let factors = cyclotomic_factor(&char_poly(tau))
        .map_err(|e| match e {
            Error::NonCyclotomicFactor(remainder) => Error::NotQuasiUnipotent { remainder },
            other => other,
        })?;
    let order = lcm_of_orders(&factors);
    let power = tau.pow(order);
    let nilpotent = power.minus_identity();
    if !(&nilpotent * &nilpotent).is_zero() {
        return Err(Error::UnipotentIndexTooLarge { order });
    }
    if p != 0 && order % p == 0 {
        return Err(Error::WildRamification { p, order });
    }
    Ok(InertiaGenerator { tau: tau.clone(), p, factors, order, finite: power.is_identity() })
}

impl InertiaGenerator {
    pub fn tau(&self) -> &IntMatrix {
        &self.tau
    }

    pub fn dim(&self) -> usize {
        self.tau.rows() / 2
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// `(N, multiplicity)` for the cyclotomic factors `Φ_N` of the
    /// characteristic polynomial.
    pub fn cyclotomic_factors(&self) -> &[(u64, usize)] {
        &self.factors
    }

    /// Least `e` with `(τ^e - I)^2 = 0`.
    pub fn semisimple_order(&self) -> u64 {
        self.order
    }

    pub fn is_potentially_good(&self) -> bool {
        self.finite
    }

    pub fn is_good(&self) -> bool {
        self.tau.is_identity()
    }

    /// No eigenvalue equal to 1.
    pub fn is_purely_additive(&self) -> bool {
        self.factors.iter().all(|&(order, _)| order != 1)
    }

    /// Nilpotency index of `τ^m - I` (0 when `τ^m = I`).
    pub fn unipotency_index(&self) -> usize {
        is_unipotent(&self.tau.pow(self.order)).1.expect("validated generator")
    }

    pub fn reduce(&self, n: u64) -> Result<ModMatrix> {
        self.tau.reduce(n)
    }

    /// `τ^e`, itself a valid generator (the totally ramified degree-`e`
    /// base change).
    pub fn power(&self, e: u64) -> Result<InertiaGenerator> {
        self.check_coprime(e, "the extension degree")?;
        classify(&self.tau.pow(e), self.p)
    }

    /// `U τ U^{-1}`.
    pub fn conjugate(&self, u: &IntMatrix, u_inv: &IntMatrix) -> Result<InertiaGenerator> {
        classify(&(&(u * &self.tau) * u_inv), self.p)
    }

    pub(crate) fn check_coprime(&self, n: u64, what: &'static str) -> Result<()> {
        if self.p != 0 && n % self.p == 0 {
            return Err(Error::CharacteristicDivides { p: self.p, what, value: n });
        }
        Ok(())
    }
}

/// One evaluated statement: `hypothesis` and `conclusion` are computed
/// independently, `agree` says whether the statement holds on this instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub id: String,
    pub hypothesis: bool,
    pub conclusion: bool,
    pub agree: bool,
    pub citation: String,
}

impl Verdict {
    /// `hypothesis ⇒ conclusion`.
    pub fn implication(id: &str, hypothesis: bool, conclusion: bool, citation: &str) -> Self {
        Verdict {
            id: id.to_string(),
            hypothesis,
            conclusion,
            agree: !hypothesis || conclusion,
            citation: citation.to_string(),
        }
    }

    /// `hypothesis ⇔ conclusion`.
    pub fn equivalence(id: &str, hypothesis: bool, conclusion: bool, citation: &str) -> Self {
        Verdict {
            id: id.to_string(),
            hypothesis,
            conclusion,
            agree: hypothesis == conclusion,
            citation: citation.to_string(),
        }
    }
}

/// `(τ - I)^2 = 0`: the in-model definition of semistable reduction.
pub fn galois_criterion(g: &InertiaGenerator) -> bool {
    let n = g.tau.minus_identity();
    (&n * &n).is_zero()
}

/// `τ` unipotent, and every eigenvalue equal to 1, checked separately
/// against the square-zero criterion.
pub fn galois_consistency(g: &InertiaGenerator) -> Verdict {
    let square_zero = galois_criterion(g);
    let unipotent = is_unipotent(&g.tau).0;
    let eigen_one = g.factors.iter().all(|&(order, _)| order == 1);
    let both = unipotent == eigen_one && unipotent;
    let mut v = Verdict::equivalence("galois-criterion", square_zero, both, "unipotent action iff (tau - I)^2 = 0");
    v.agree = square_zero == unipotent && unipotent == eigen_one;
    v
}

/// `(τ - I)^2 ≡ 0 (mod n)`.
pub fn check_sigma_squared_mod_n(g: &InertiaGenerator, n: u64) -> Result<bool> {
    g.check_coprime(n, "the level")?;
    let m = g.tau.minus_identity();
    Ok((&m * &m).divisible_by(n))
}

/// Whether some subgroup `S` of `X_n` has `τ` acting trivially on `S` and on
/// `S^⊥`.
///
/// With `F` the fixed subgroup, such an `S` exists iff `F^⊥ ⊆ F`: any
/// witness satisfies `S ⊆ F`, hence `F^⊥ ⊆ S^⊥ ⊆ F`, and conversely `S = F`
/// is then a witness.
pub fn witness_exists(g: &InertiaGenerator, module: &TorsionModule) -> Result<bool> {
    Ok(fixed_witness(g, module)?.is_some())
}

/// The fixed subgroup when it is a witness.
pub fn fixed_witness(g: &InertiaGenerator, module: &TorsionModule) -> Result<Option<Subgroup>> {
    check_module(g, module)?;
    let f = fixed_subgroup(&g.tau, module.level())?;
    let perp = module.orthogonal_complement(&f);
    Ok(f.contains_subgroup(&perp).then_some(f))
}

fn check_module(g: &InertiaGenerator, module: &TorsionModule) -> Result<()> {
    if module.rank() != g.tau.rows() {
        return Err(Error::Dimension("torsion module rank differs from the generator size".into()));
    }
    g.check_coprime(module.level(), "the level")
}

/// The first witness subgroup in canonical lattice order, by exhaustive
/// search over all subgroups of `X_n`.
pub fn find_witness_subgroup(g: &InertiaGenerator, module: &TorsionModule, cap: u64) -> Result<Option<Subgroup>> {
    check_module(g, module)?;
    let lattice = SubgroupLattice::build(module, cap)?;
    find_witness_in(g, &lattice)
}

/// As [`find_witness_subgroup`] over a prebuilt lattice.
pub fn find_witness_in(g: &InertiaGenerator, lattice: &SubgroupLattice) -> Result<Option<Subgroup>> {
    check_module(g, lattice.module())?;
    let t = g.reduce(lattice.module().level())?;
    Ok(lattice.first_witness(&t).cloned())
}

/// `τ ≡ I (mod m)` and `m >= 3` imply semistability.
pub fn raynaud_criterion(g: &InertiaGenerator, m: u64) -> Result<Verdict> {
    g.check_coprime(m, "the level")?;
    let unramified = g.tau.minus_identity().divisible_by(m);
    Ok(Verdict::implication(
        "raynaud",
        unramified && m >= 3,
        galois_criterion(g),
        "level-m points unramified with m >= 3 implies semistable",
    ))
}

/// Both directions of the maximal-isotropic level-structure criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStructureVerdict {
    /// A fixed maximal isotropic subgroup, if one exists.
    pub fixed_lagrangian: Option<Subgroup>,
    pub semistable: bool,
    /// Fixed Lagrangian at `n >= 5` implies semistable.
    pub forward: Verdict,
    /// Semistable implies the construction from the fixed subgroup succeeds.
    pub converse: Verdict,
}

/// Checks the level-`n` criterion with the pairing induced by `polarization`.
///
/// A fixed maximal isotropic `H` exists iff `F^⊥ ⊆ F` (then `H` is built
/// inside `F` by [`TorsionModule::extend_to_maximal_isotropic`]; conversely
/// `F^⊥ ⊆ H^⊥ = H ⊆ F`).
pub fn level_structure_criterion(
    g: &InertiaGenerator,
    n: u64,
    polarization: &Polarization,
) -> Result<LevelStructureVerdict> {
    g.check_coprime(n, "the level")?;
    let degree = polarization.degree();
    if !degree.gcd(&BigInt::from(n)).is_one() {
        return Err(Error::DegreeObstruction { degree: degree.to_string(), n });
    }
    if !polarization.is_compatible(&g.tau, n)? {
        return Err(Error::Precondition("tau does not preserve the induced pairing".into()));
    }
    let module = TorsionModule::induced(n, polarization)?;
    let semistable = galois_criterion(g);
    let t = g.reduce(n)?;
    let fixed_lagrangian = match fixed_witness(g, &module)? {
        Some(f) => {
            let h = module.extend_to_maximal_isotropic(&f)?;
            debug_assert!(h.is_fixed_by(&t));
            Some(h)
        }
        None => None,
    };
    let forward = Verdict::implication(
        "level-structure",
        fixed_lagrangian.is_some() && n >= 5,
        semistable,
        "fixed maximal isotropic subgroup at level n >= 5 implies semistable",
    );
    let constructed = fixed_lagrangian
        .as_ref()
        .is_some_and(|h| h.is_fixed_by(&t) && module.is_maximal_isotropic(h).unwrap_or(false));
    let converse = Verdict::implication(
        "level-structure-converse",
        semistable,
        constructed,
        "semistable with polarization degree prime to n yields a fixed maximal isotropic subgroup",
    );
    Ok(LevelStructureVerdict { fixed_lagrangian, semistable, forward, converse })
}

/// `(τ^e - I)^2 = 0`.
pub fn semistable_after_extension(g: &InertiaGenerator, e: u64) -> Result<bool> {
    g.check_coprime(e, "the extension degree")?;
    let m = g.tau.pow(e).minus_identity();
    Ok((&m * &m).is_zero())
}

pub fn minimal_semistable_degree(g: &InertiaGenerator) -> u64 {
    g.order
}

/// Every eigenvalue is an `m`-th root of unity.
pub fn eigenvalue_order_check(g: &InertiaGenerator, m: u64) -> bool {
    m > 0 && g.factors.iter().all(|&(order, _)| m % order == 0)
}

/// Level-2 maximal isotropic structure forces `(τ - I)^2 ≡ 0 (mod 2)` and
/// semistability over the cyclic quartic extension.
pub fn pressred_check(g: &InertiaGenerator, polarization: &Polarization) -> Result<Verdict> {
    g.check_coprime(2, "the level")?;
    let module = TorsionModule::induced(2, polarization)?;
    if !module.is_nondegenerate() {
        return Err(Error::HypothesisNotMet("the induced pairing is degenerate modulo 2".into()));
    }
    if !polarization.is_compatible(&g.tau, 2)? {
        return Err(Error::HypothesisNotMet("tau does not preserve the induced pairing modulo 2".into()));
    }
    if !witness_exists(g, &module)? {
        return Err(Error::HypothesisNotMet("no fixed maximal isotropic subgroup of X_2".into()));
    }
    let m = g.tau.minus_identity();
    let square_even = (&m * &m).divisible_by(2);
    let quartic = semistable_after_extension(g, 4)?;
    Ok(Verdict::implication(
        "pressred",
        true,
        square_even && quartic,
        "fixed level-2 Lagrangian implies (tau - I)^2 in 2M and semistable over the cyclic quartic extension",
    ))
}

/// Witness at level `n ∈ {2, 3, 4}` implies semistability over the totally
/// ramified extension of degree `R(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalVerdict {
    pub verdict: Verdict,
    pub degree: u64,
    pub witness: Option<Subgroup>,
}

pub fn exceptional_criterion(g: &InertiaGenerator, module: &TorsionModule) -> Result<ExceptionalVerdict> {
    let n = module.level();
    if !(2..=4).contains(&n) {
        return Err(Error::Precondition(format!("exceptional levels are 2, 3, 4; got {n}")));
    }
    let witness = fixed_witness(g, module)?;
    let degree = exceptional_degree(n).expect("bounded for n >= 2");
    let conclusion = semistable_after_extension(g, degree)?;
    Ok(ExceptionalVerdict {
        verdict: Verdict::implication(
            &format!("exceptional-level-{n}"),
            witness.is_some(),
            conclusion,
            "witness subgroup at level n implies semistable over every totally ramified degree-R(n) extension",
        ),
        degree,
        witness,
    })
}

/// Evaluated clauses plus those skipped because of the residue
/// characteristic or a clause hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseReport {
    pub clauses: Vec<Verdict>,
    pub excluded: Vec<(String, String)>,
}

impl ClauseReport {
    pub fn all_agree(&self) -> bool {
        self.clauses.iter().all(|v| v.agree)
    }
}

fn nonzero_fixed(g: &InertiaGenerator, n: u64) -> Result<bool> {
    Ok(fixed_subgroup(&g.tau, n)?.order() > 1)
}

fn fixed_point_of_order_four(g: &InertiaGenerator) -> Result<bool> {
    Ok(fixed_subgroup(&g.tau, 4)?.structure().contains(&4))
}

fn semistable_below(g: &InertiaGenerator, bound: u64) -> bool {
    (1..bound).any(|e| {
        let m = g.tau.pow(e).minus_identity();
        (&m * &m).is_zero()
    })
}

/// The elliptic-curve clauses (a)-(f): invariant torsion points against
/// semistability over small totally ramified extensions.
pub fn elliptic_criteria(g: &InertiaGenerator) -> Result<ClauseReport> {
    if g.dim() != 1 {
        return Err(Error::Dimension("elliptic criteria need a 2x2 generator".into()));
    }
    let p = g.p;
    let mut clauses = Vec::new();
    let mut excluded = Vec::new();
    let mut skip = |id: &str, why: &str| excluded.push((id.to_string(), why.to_string()));
    let all_two_fixed = g.tau.minus_identity().divisible_by(2);

    if p != 2 {
        clauses.push(Verdict::equivalence(
            "elliptic-a",
            nonzero_fixed(g, 2)?,
            semistable_after_extension(g, 4)?,
            "invariant point of order 2 iff semistable over a totally ramified quartic extension",
        ));
        let left = fixed_point_of_order_four(g)? || all_two_fixed;
        clauses.push(Verdict::equivalence(
            "elliptic-c",
            left,
            semistable_after_extension(g, 2)?,
            "invariant point of order 4 or all 2-torsion invariant iff semistable over a quadratic extension",
        ));
        if g.is_potentially_good() && !g.is_good() {
            clauses.push(Verdict::equivalence(
                "elliptic-d",
                !fixed_point_of_order_four(g)? && all_two_fixed,
                g.tau.pow(2).is_identity(),
                "no invariant point of order 4 and all 2-torsion invariant iff good over a quadratic extension",
            ));
        } else {
            skip("elliptic-d", "reduction is good or not potentially good");
        }
    } else {
        for id in ["elliptic-a", "elliptic-c", "elliptic-d"] {
            skip(id, "residue characteristic 2");
        }
    }
    if p != 3 {
        clauses.push(Verdict::equivalence(
            "elliptic-b",
            nonzero_fixed(g, 3)?,
            semistable_after_extension(g, 3)?,
            "invariant point of order 3 iff semistable over a totally ramified cubic extension",
        ));
    } else {
        skip("elliptic-b", "residue characteristic 3");
    }
    if p != 2 && p != 3 {
        clauses.push(Verdict::equivalence(
            "elliptic-e",
            !nonzero_fixed(g, 2)? && !nonzero_fixed(g, 3)?,
            !semistable_below(g, 6),
            "no invariant points of order 2 or 3 iff no semistable extension of degree < 6",
        ));
        clauses.push(Verdict::equivalence(
            "elliptic-f",
            !fixed_point_of_order_four(g)? && !nonzero_fixed(g, 3)? && !all_two_fixed,
            !semistable_below(g, 4),
            "no invariant points of order 4 or 3 and not all 2-torsion invariant iff no semistable extension of degree < 4",
        ));
    } else {
        skip("elliptic-e", "residue characteristic 2 or 3");
        skip("elliptic-f", "residue characteristic 2 or 3");
    }
    clauses.sort_by(|a, b| a.id.cmp(&b.id));
    excluded.sort();
    Ok(ClauseReport { clauses, excluded })
}

/// Purely additive, potentially good generators: witness subgroups at levels
/// 4, 3, 2 against good reduction over quadratic, cubic and cyclic quartic
/// extensions.
pub fn paddcor_criteria(g: &InertiaGenerator) -> Result<ClauseReport> {
    if !g.is_potentially_good() {
        return Err(Error::HypothesisNotMet("reduction is not potentially good".into()));
    }
    if !g.is_purely_additive() {
        return Err(Error::HypothesisNotMet("reduction is not purely additive".into()));
    }
    let d = g.dim();
    let p = g.p;
    let mut clauses = Vec::new();
    let mut excluded = Vec::new();
    if p != 2 {
        let m4 = TorsionModule::standard(4, d)?;
        clauses.push(Verdict::equivalence(
            "additive-quadratic",
            witness_exists(g, &m4)?,
            g.tau.pow(2).is_identity(),
            "witness subgroup of X_4 iff good over a quadratic extension",
        ));
        let squared = g.power(2)?;
        if squared.is_purely_additive() {
            let m2 = TorsionModule::standard(2, d)?;
            clauses.push(Verdict::equivalence(
                "additive-quartic",
                witness_exists(g, &m2)?,
                g.tau.pow(4).is_identity(),
                "witness subgroup of X_2 iff good over the quartic extension with purely additive quadratic step",
            ));
        } else {
            excluded.push(("additive-quartic".to_string(), "reduction over the quadratic step is not purely additive".to_string()));
        }
    } else {
        excluded.push(("additive-quadratic".to_string(), "residue characteristic 2".to_string()));
        excluded.push(("additive-quartic".to_string(), "residue characteristic 2".to_string()));
    }
    if p != 3 {
        let m3 = TorsionModule::standard(3, d)?;
        clauses.push(Verdict::equivalence(
            "additive-cubic",
            witness_exists(g, &m3)?,
            g.tau.pow(3).is_identity(),
            "witness subgroup of X_3 iff good over a totally ramified cubic extension",
        ));
    } else {
        excluded.push(("additive-cubic".to_string(), "residue characteristic 3".to_string()));
    }
    clauses.sort_by(|a, b| a.id.cmp(&b.id));
    excluded.sort();
    Ok(ClauseReport { clauses, excluded })
}

/// Summary of the criteria for one generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub semistable: bool,
    pub potentially_good: bool,
    pub minimal_semistable_degree: u64,
    pub verdicts: Vec<Verdict>,
}

impl CriterionReport {
    pub fn consistent(&self) -> bool {
        self.verdicts.iter().all(|v| v.agree) && (!self.semistable || self.minimal_semistable_degree == 1)
    }
}

/// Runs every applicable criterion at the levels `ns` (those divisible by
/// the residue characteristic are skipped).
pub fn criterion_report(g: &InertiaGenerator, ns: &[u64], polarization: &Polarization) -> Result<CriterionReport> {
    let semistable = galois_criterion(g);
    let mut verdicts = vec![galois_consistency(g)];
    for &n in ns.iter().filter(|&&n| n >= 2 && (g.p == 0 || n % g.p != 0)) {
        let module = TorsionModule::induced(n, polarization)?;
        if n >= 5 {
            let mut v = Verdict::equivalence(
                "sigma-squared",
                check_sigma_squared_mod_n(g, n)?,
                semistable,
                "(tau - I)^2 = 0 mod n iff semistable, for n >= 5",
            );
            v.id = format!("sigma-squared-{n}");
            verdicts.push(v);
            if module.is_nondegenerate() {
                let mut w = Verdict::equivalence(
                    "witness",
                    witness_exists(g, &module)?,
                    semistable,
                    "witness subgroup at level n >= 5 iff semistable",
                );
                w.id = format!("witness-{n}");
                verdicts.push(w);
            }
        } else if module.is_nondegenerate() {
            verdicts.push(exceptional_criterion(g, &module)?.verdict);
        }
        let mut r = raynaud_criterion(g, n)?;
        r.id = format!("raynaud-{n}");
        verdicts.push(r);
        if let Ok(ls) = level_structure_criterion(g, n, polarization) {
            for mut v in [ls.forward, ls.converse] {
                v.id = format!("{}-{n}", v.id);
                verdicts.push(v);
            }
        }
    }
    if let Ok(v) = pressred_check(g, polarization) {
        verdicts.push(v);
    }
    if g.dim() == 1 {
        verdicts.extend(elliptic_criteria(g)?.clauses);
    }
    if g.is_potentially_good() && g.is_purely_additive() {
        verdicts.extend(paddcor_criteria(g)?.clauses);
    }
    Ok(CriterionReport { semistable, potentially_good: g.is_potentially_good(), minimal_semistable_degree: g.order, verdicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::DEFAULT_SUBGROUP_CAP;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    fn gen(rows: &[&[i64]], p: u64) -> InertiaGenerator {
        classify(&m(rows), p).unwrap()
    }

    const MINUS: &[&[i64]] = &[&[-1, 0], &[0, -1]];
    const ROT3: &[&[i64]] = &[&[0, -1], &[1, -1]];
    const ROT4: &[&[i64]] = &[&[0, -1], &[1, 0]];
    const ROT6: &[&[i64]] = &[&[1, -1], &[1, 0]];
    const UNI: &[&[i64]] = &[&[1, 1], &[0, 1]];

    #[test]
    fn classify_examples() {
        let g = gen(MINUS, 3);
        assert_eq!(g.semisimple_order(), 2);
        assert!(g.is_potentially_good() && g.is_purely_additive());
        let u = gen(UNI, 0);
        assert_eq!(u.semisimple_order(), 1);
        assert!(!u.is_potentially_good());
        assert!(galois_criterion(&u));
        assert_eq!(u.unipotency_index(), 2);
        assert_eq!(classify(&IntMatrix::diagonal(&[2, 2]), 0), Err(Error::NotSymplectic));
        assert!(matches!(classify(&m(ROT3), 3), Err(Error::WildRamification { p: 3, order: 3 })));
        assert!(matches!(classify(&m(MINUS), 4), Err(Error::InvalidCharacteristic(4))));
        // hyperbolic: symplectic but not quasi-unipotent
        assert!(matches!(classify(&m(&[&[2, 1], &[1, 1]]), 0), Err(Error::NotQuasiUnipotent { .. })));
        // a symplectic unipotent with (tau - I)^2 != 0
        let big = m(&[&[1, 0, -1, 1], &[1, 1, 0, -1], &[0, 0, 1, -1], &[0, 0, 0, 1]]);
        let j = IntMatrix::symplectic_form(2);
        assert_eq!(&(&big.transpose() * &j) * &big, j);
        assert!(matches!(classify(&big, 0), Err(Error::UnipotentIndexTooLarge { order: 1 })));
    }

    #[test]
    fn galois_examples() {
        assert!(galois_criterion(&gen(&[&[1, 0], &[0, 1]], 0)));
        assert!(galois_criterion(&gen(UNI, 0)));
        assert!(!galois_criterion(&gen(MINUS, 0)));
        for rows in [MINUS, ROT3, ROT4, ROT6, UNI] {
            assert!(galois_consistency(&gen(rows, 0)).agree);
        }
    }

    #[test]
    fn sigma_squared_examples() {
        let g = gen(MINUS, 0);
        assert!(check_sigma_squared_mod_n(&g, 4).unwrap());
        assert!(!check_sigma_squared_mod_n(&g, 5).unwrap());
        for n in 1..=12 {
            assert!(check_sigma_squared_mod_n(&gen(UNI, 0), n).unwrap());
        }
        assert!(matches!(
            check_sigma_squared_mod_n(&gen(MINUS, 5), 5),
            Err(Error::CharacteristicDivides { p: 5, .. })
        ));
    }

    #[test]
    fn witness_examples() {
        let t3 = TorsionModule::standard(3, 1).unwrap();
        let w = find_witness_subgroup(&gen(ROT3, 0), &t3, DEFAULT_SUBGROUP_CAP).unwrap().unwrap();
        assert_eq!(w, t3.subgroup(&[vec![2, 1]]).unwrap());
        let t2 = TorsionModule::standard(2, 1).unwrap();
        let w = find_witness_subgroup(&gen(ROT4, 0), &t2, DEFAULT_SUBGROUP_CAP).unwrap().unwrap();
        assert_eq!(w, t2.subgroup(&[vec![1, 1]]).unwrap());
        let t5 = TorsionModule::standard(5, 1).unwrap();
        assert_eq!(find_witness_subgroup(&gen(MINUS, 0), &t5, DEFAULT_SUBGROUP_CAP).unwrap(), None);
    }

    #[test]
    fn witness_routes_agree() {
        const EXTRA: [&[&[i64]]; 3] = [&[&[1, 0], &[0, 1]], &[&[1, 4], &[0, 1]], &[&[-1, -1], &[0, -1]]];
        let taus = [MINUS, ROT3, ROT4, ROT6, UNI, EXTRA[0], EXTRA[1], EXTRA[2]];
        for n in 2..=9u64 {
            let module = TorsionModule::standard(n, 1).unwrap();
            let lattice = SubgroupLattice::build(&module, DEFAULT_SUBGROUP_CAP).unwrap();
            for rows in taus {
                let g = gen(rows, 0);
                assert_eq!(
                    find_witness_in(&g, &lattice).unwrap().is_some(),
                    witness_exists(&g, &module).unwrap(),
                    "{} at n = {n}",
                    g.tau()
                );
            }
        }
    }

    #[test]
    fn raynaud_examples() {
        let v = raynaud_criterion(&gen(&[&[1, 3], &[0, 1]], 0), 3).unwrap();
        assert!(v.hypothesis && v.conclusion && v.agree);
        let minus = gen(MINUS, 0);
        let v = raynaud_criterion(&minus, 2).unwrap();
        assert!(!v.hypothesis && !v.conclusion && v.agree);
        assert!(minus.tau().minus_identity().divisible_by(2));
        assert!(!raynaud_criterion(&minus, 3).unwrap().hypothesis);
    }

    #[test]
    fn level_structure_examples() {
        let id = gen(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]], 0);
        let v = level_structure_criterion(&id, 7, &Polarization::principal(2)).unwrap();
        let t7 = TorsionModule::standard(7, 2).unwrap();
        assert_eq!(v.fixed_lagrangian.unwrap(), t7.subgroup(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap());
        assert!(v.converse.agree && v.forward.agree);

        let g = gen(&[&[1, 5], &[0, 1]], 0);
        let v = level_structure_criterion(&g, 5, &Polarization::principal(1)).unwrap();
        let h = v.fixed_lagrangian.unwrap();
        let t5 = TorsionModule::standard(5, 1).unwrap();
        assert!(t5.is_maximal_isotropic(&h).unwrap());
        assert!(h.is_fixed_by(&g.reduce(5).unwrap()));
        assert!(v.converse.hypothesis && v.converse.conclusion);

        let v = level_structure_criterion(&gen(MINUS, 0), 5, &Polarization::principal(1)).unwrap();
        assert!(v.fixed_lagrangian.is_none() && !v.semistable && v.forward.agree);

        let two = Polarization::new(IntMatrix::diagonal(&[2, 2])).unwrap();
        assert!(matches!(
            level_structure_criterion(&gen(UNI, 0), 6, &two),
            Err(Error::DegreeObstruction { n: 6, .. })
        ));
    }

    #[test]
    fn fixed_lagrangian_matches_enumeration() {
        const UNI3: &[&[i64]] = &[&[1, 3], &[0, 1]];
        let taus = [MINUS, ROT3, ROT4, ROT6, UNI, UNI3];
        for n in [3u64, 4, 5, 6, 7] {
            let module = TorsionModule::standard(n, 1).unwrap();
            let all = module.enumerate_subgroups(DEFAULT_SUBGROUP_CAP).unwrap();
            for rows in taus {
                let g = gen(rows, 0);
                let t = g.reduce(n).unwrap();
                let brute = all.iter().any(|s| s.is_fixed_by(&t) && module.is_maximal_isotropic(s).unwrap());
                assert_eq!(fixed_witness(&g, &module).unwrap().is_some(), brute, "{} n = {n}", g.tau());
            }
        }
    }

    #[test]
    fn extension_examples() {
        let r3 = gen(ROT3, 0);
        assert!(semistable_after_extension(&r3, 3).unwrap());
        assert!(semistable_after_extension(&gen(MINUS, 0), 2).unwrap());
        let r4 = gen(ROT4, 0);
        assert!(!semistable_after_extension(&r4, 2).unwrap());
        assert!(semistable_after_extension(&r4, 4).unwrap());
        assert_eq!(minimal_semistable_degree(&gen(&[&[1, 0], &[0, 1]], 0)), 1);
        assert_eq!(minimal_semistable_degree(&gen(MINUS, 0)), 2);
        assert_eq!(minimal_semistable_degree(&r3), 3);
        assert!(matches!(semistable_after_extension(&gen(MINUS, 3), 3), Err(Error::CharacteristicDivides { .. })));
    }

    #[test]
    fn eigenvalue_orders() {
        assert!(eigenvalue_order_check(&gen(MINUS, 0), 2));
        assert!(!eigenvalue_order_check(&gen(ROT3, 0), 2));
        assert!(eigenvalue_order_check(&gen(UNI, 0), 1));
    }

    #[test]
    fn pressred_examples() {
        let p = Polarization::principal(1);
        let v = pressred_check(&gen(MINUS, 0), &p).unwrap();
        assert!(v.conclusion && v.agree);
        let v = pressred_check(&gen(ROT4, 0), &p).unwrap();
        assert!(v.conclusion && v.agree);
        assert!(matches!(pressred_check(&gen(ROT3, 0), &p), Err(Error::HypothesisNotMet(_))));
    }

    #[test]
    fn exceptional_examples() {
        let t3 = TorsionModule::standard(3, 1).unwrap();
        let v = exceptional_criterion(&gen(ROT3, 0), &t3).unwrap();
        assert!(v.verdict.hypothesis && v.verdict.conclusion && v.degree == 3);
        let t2 = TorsionModule::standard(2, 1).unwrap();
        let v = exceptional_criterion(&gen(MINUS, 0), &t2).unwrap();
        assert!(v.verdict.hypothesis && v.verdict.conclusion && v.degree == 4);
        let t4 = TorsionModule::standard(4, 1).unwrap();
        let v = exceptional_criterion(&gen(MINUS, 0), &t4).unwrap();
        assert_eq!(v.witness.unwrap(), t4.subgroup(&[vec![2, 0], vec![0, 2]]).unwrap());
        assert!(v.verdict.conclusion && v.degree == 2);
    }

    #[test]
    fn elliptic_examples() {
        let r = elliptic_criteria(&gen(MINUS, 3)).unwrap();
        let c = r.clauses.iter().find(|v| v.id == "elliptic-c").unwrap();
        assert!(c.hypothesis && c.conclusion);
        assert!(r.all_agree());
        assert!(r.excluded.iter().any(|(id, _)| id == "elliptic-b"));
        let r = elliptic_criteria(&gen(ROT3, 0)).unwrap();
        let b = r.clauses.iter().find(|v| v.id == "elliptic-b").unwrap();
        assert!(b.hypothesis && b.conclusion);
        assert!(r.all_agree());
        const ID: &[&[i64]] = &[&[1, 0], &[0, 1]];
        const NEG_UNI: &[&[i64]] = &[&[-1, -1], &[0, -1]];
        const UNI2: &[&[i64]] = &[&[1, 2], &[0, 1]];
        for rows in [ID, ROT4, ROT6, UNI, NEG_UNI, UNI2] {
            assert!(elliptic_criteria(&gen(rows, 0)).unwrap().all_agree(), "{rows:?}");
        }
    }

    #[test]
    fn paddcor_examples() {
        let r = paddcor_criteria(&gen(MINUS, 3)).unwrap();
        let a = r.clauses.iter().find(|v| v.id == "additive-quadratic").unwrap();
        assert!(a.hypothesis && a.conclusion);
        let r = paddcor_criteria(&gen(ROT3, 2)).unwrap();
        let b = r.clauses.iter().find(|v| v.id == "additive-cubic").unwrap();
        assert!(b.hypothesis && b.conclusion);
        let r = paddcor_criteria(&gen(ROT4, 3)).unwrap();
        let a = r.clauses.iter().find(|v| v.id == "additive-quadratic").unwrap();
        assert!(!a.hypothesis && !a.conclusion);
        // exhaustive check of the level-4 prediction
        let t4 = TorsionModule::standard(4, 1).unwrap();
        assert_eq!(find_witness_subgroup(&gen(ROT4, 3), &t4, DEFAULT_SUBGROUP_CAP).unwrap(), None);
        assert!(matches!(paddcor_criteria(&gen(UNI, 0)), Err(Error::HypothesisNotMet(_))));
    }

    #[test]
    fn report_is_consistent() {
        for rows in [MINUS, ROT3, ROT4, ROT6, UNI] {
            let g = gen(rows, 0);
            let r = criterion_report(&g, &[2, 3, 4, 5, 7], &Polarization::principal(1)).unwrap();
            assert!(r.consistent(), "{rows:?}: {:?}", r.verdicts.iter().filter(|v| !v.agree).collect::<Vec<_>>());
        }
    }
}
