//! Property suites.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, trial)`,
//! and results are gathered in trial order, so a report depends only on
//! `(suite, trials, seed, d_max)` and never on the thread count.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::highercohcor_classify;
use crate::cyclotomic::{n_set, power_membership, quasithm_oracle};
use crate::error::{Error, Result};
use crate::harness::catalog::{catalog, finite_order_catalog, CatalogEntry};
use crate::harness::conjugation::{random_symplectic_conjugate_with, trial_rng, ConjugationParams};
use crate::harness::generate::{hypothesis_instance, qualifying_primitives, HypothesisInstance};
use crate::inertia::{
    check_sigma_squared_mod_n, classify, criterion_report, find_witness_in, fixed_witness, galois_criterion,
    level_structure_criterion, pressred_check, InertiaGenerator, Verdict,
};
use crate::linalg::{exterior_power, howell_form, smith_normal_form, IntMatrix, ModMatrix};
use crate::neron::{
    edixhoven_bound, neron_invariants, neron_torsion, randm_check, verify_neron2, verify_neron3, verify_neron4,
    Neron4Mode,
};
use crate::torsion::{all_vectors, Polarization, SubgroupLattice, TorsionModule, DEFAULT_SUBGROUP_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Fixed finite families, checked completely.
    Exhaustive,
    /// Catalog entries plus random symplectic conjugates.
    Randomized,
    /// Instances satisfying the hypothesis by construction.
    HypothesisPreserving,
    /// Unconstrained instances; failures are findings about the model.
    FreeSample,
}

/// A failed check, with enough data to replay it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub case: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<IntMatrix>,
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub regime: Regime,
    pub trials: u64,
    pub seed: u64,
    pub d_max: usize,
    pub checked: u64,
    pub skipped: u64,
    pub violations: Vec<Violation>,
    /// Free-sample mismatches; expected to be empty.
    pub findings: Vec<Violation>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub struct SuiteInfo {
    pub id: &'static str,
    pub regime: Regime,
    pub default_trials: u64,
    pub summary: &'static str,
}

pub const SUITES: [SuiteInfo; 16] = [
    SuiteInfo { id: "sigma-squared-equivalence", regime: Regime::Randomized, default_trials: 10_000, summary: "(tau - I)^2 = 0 mod n iff over Z, n in {5, 6, 7, 9, 25}" },
    SuiteInfo { id: "witness-subgroup", regime: Regime::Exhaustive, default_trials: 1000, summary: "exhaustive witness search at n = 5 against semistability" },
    SuiteInfo { id: "quasithm-sweep", regime: Regime::Exhaustive, default_trials: 0, summary: "(zeta_N - 1)^k outside nO for n outside N(k); boundary memberships" },
    SuiteInfo { id: "neron2", regime: Regime::HypothesisPreserving, default_trials: 500, summary: "level-2 Lagrangian: component group and index identities" },
    SuiteInfo { id: "neron3", regime: Regime::HypothesisPreserving, default_trials: 500, summary: "level-3 Lagrangian: fixed points and components" },
    SuiteInfo { id: "neron4a", regime: Regime::HypothesisPreserving, default_trials: 500, summary: "X_2 fixed: structure of X_4(F) and components" },
    SuiteInfo { id: "neron4b", regime: Regime::HypothesisPreserving, default_trials: 500, summary: "level-4 Lagrangian: structure of X_4(F) and components" },
    SuiteInfo { id: "pressred", regime: Regime::HypothesisPreserving, default_trials: 500, summary: "level-2 Lagrangian: (tau - I)^2 even, quartic semistability" },
    SuiteInfo { id: "level-structure", regime: Regime::HypothesisPreserving, default_trials: 500, summary: "level-5 Lagrangian iff semistable, both directions" },
    SuiteInfo { id: "cokernel-exponent", regime: Regime::HypothesisPreserving, default_trials: 1000, summary: "(A - I)^2 even: cokernel 2-torsion killed by 2" },
    SuiteInfo { id: "neron-free", regime: Regime::FreeSample, default_trials: 2000, summary: "theorem conclusions on unconstrained conjugates" },
    SuiteInfo { id: "torsion-shadow", regime: Regime::Exhaustive, default_trials: 0, summary: "#X_n(F) = n^{2a} #Phi[n] on the finite-order catalog, n in 2..=9" },
    SuiteInfo { id: "cohomology-equivalence", regime: Regime::Exhaustive, default_trials: 0, summary: "reduction condition iff vanishing on H^k(Z/n), n outside N(k + 1)" },
    SuiteInfo { id: "criteria-consistency", regime: Regime::Randomized, default_trials: 500, summary: "all criteria agree and are conjugation invariant" },
    SuiteInfo { id: "edixhoven", regime: Regime::Exhaustive, default_trials: 0, summary: "elementary component groups have bounded rank" },
    SuiteInfo { id: "linalg", regime: Regime::Randomized, default_trials: 1000, summary: "Smith reconstruction, Howell canonicity, exterior multiplicativity" },
];

pub fn suite_info(id: &str) -> Result<&'static SuiteInfo> {
    SUITES.iter().find(|s| s.id == id).ok_or_else(|| Error::Unknown(id.to_string()))
}

#[derive(Default)]
struct Tally {
    checked: u64,
    skipped: u64,
    violations: Vec<Violation>,
    findings: Vec<Violation>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.violations.extend(other.violations);
        self.findings.extend(other.findings);
        self
    }

    fn check(&mut self, ok: bool, case: &str, tau: Option<&IntMatrix>, p: u64, n: Option<u64>, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(Violation { case: case.to_string(), tau: tau.cloned(), p, n, detail: detail() });
        }
    }

    fn verdicts(&mut self, case: &str, g: &InertiaGenerator, n: Option<u64>, vs: &[Verdict]) {
        for v in vs {
            self.check(v.agree, case, Some(g.tau()), g.characteristic(), n, || {
                format!("{}: hypothesis {} conclusion {}", v.id, v.hypothesis, v.conclusion)
            });
        }
    }

    fn error(&mut self, case: &str, tau: Option<&IntMatrix>, p: u64, e: Error) {
        self.check(false, case, tau, p, None, || e.to_string());
    }
}

fn par_trials<F>(count: u64, f: F) -> Tally
where
    F: Fn(u64) -> Tally + Sync + Send,
{
    (0..count).into_par_iter().map(f).collect::<Vec<_>>().into_iter().fold(Tally::default(), Tally::merge)
}

/// The `i`-th instance of a randomized sweep: catalog entries first, then
/// conjugates of the catalog taken cyclically.
struct Sweep {
    entries: Vec<CatalogEntry>,
    seed: u64,
}

struct SweepItem {
    case: String,
    base: InertiaGenerator,
    generator: InertiaGenerator,
}

impl Sweep {
    fn len(&self, trials: u64) -> u64 {
        self.entries.len() as u64 + trials
    }

    fn item(&self, i: u64) -> Result<SweepItem> {
        let len = self.entries.len() as u64;
        let e = &self.entries[(i % len) as usize];
        let base = classify(&e.tau, 0)?;
        if i < len {
            return Ok(SweepItem { case: format!("catalog {}", e.name), generator: base.clone(), base });
        }
        let mut rng = trial_rng(self.seed, i);
        let c = random_symplectic_conjugate_with(&base, &mut rng, &ConjugationParams::default())?;
        Ok(SweepItem { case: format!("conjugate {i} of {}", e.name), base, generator: c.generator })
    }
}

/// Runs a registered suite.
pub fn run_suite(id: &str, trials: u64, seed: u64, d_max: usize) -> Result<SuiteReport> {
    let info = suite_info(id)?;
    if d_max == 0 || d_max > 3 {
        return Err(Error::Precondition(format!("d_max must be 1, 2 or 3, got {d_max}")));
    }
    let tally = match id {
        "sigma-squared-equivalence" => sigma_squared(trials, seed, d_max.min(2))?,
        "witness-subgroup" => witness_subgroup(trials, seed, d_max.min(2))?,
        "quasithm-sweep" => quasithm(),
        "neron2" | "neron3" | "neron4a" | "neron4b" | "pressred" | "level-structure" | "cokernel-exponent" => {
            hypothesis_suite(id, trials, seed, d_max)?
        }
        "neron-free" => neron_free(trials, seed, d_max.min(2))?,
        "torsion-shadow" => torsion_shadow(trials, seed, d_max.min(2))?,
        "cohomology-equivalence" => cohomology(trials, seed)?,
        "criteria-consistency" => criteria(trials, seed, d_max.min(2))?,
        "edixhoven" => edixhoven(d_max.min(2))?,
        "linalg" => linalg(trials, seed),
        _ => unreachable!("registry lookup succeeded"),
    };
    Ok(SuiteReport {
        suite: id.to_string(),
        regime: info.regime,
        trials,
        seed,
        d_max,
        checked: tally.checked,
        skipped: tally.skipped,
        passed: tally.violations.is_empty(),
        violations: tally.violations,
        findings: tally.findings,
    })
}

const SIGMA_LEVELS: [u64; 5] = [5, 6, 7, 9, 25];

fn sigma_squared(trials: u64, seed: u64, d_max: usize) -> Result<Tally> {
    let sweep = Sweep { entries: catalog(d_max)?, seed };
    Ok(par_trials(sweep.len(trials), |i| {
        let mut t = Tally::default();
        let item = match sweep.item(i) {
            Ok(item) => item,
            Err(e) => {
                t.error(&format!("instance {i}"), None, 0, e);
                return t;
            }
        };
        let g = &item.generator;
        let semistable = galois_criterion(g);
        t.check(semistable == galois_criterion(&item.base), &item.case, Some(g.tau()), 0, None, || {
            "semistability not conjugation invariant".into()
        });
        for n in SIGMA_LEVELS {
            let modular = check_sigma_squared_mod_n(g, n).expect("p = 0");
            t.check(modular == semistable, &item.case, Some(g.tau()), 0, Some(n), || {
                format!("(tau - I)^2 = 0 mod {n} is {modular}, over Z {semistable}")
            });
        }
        t
    }))
}

const WITNESS_LEVEL: u64 = 5;

fn witness_subgroup(trials: u64, seed: u64, d_max: usize) -> Result<Tally> {
    let lattices: Vec<SubgroupLattice> = (1..=d_max)
        .map(|d| SubgroupLattice::build(&TorsionModule::standard(WITNESS_LEVEL, d)?, DEFAULT_SUBGROUP_CAP))
        .collect::<Result<_>>()?;
    let sweep = Sweep { entries: catalog(d_max)?, seed };
    Ok(par_trials(sweep.len(trials), |i| {
        let mut t = Tally::default();
        let item = match sweep.item(i) {
            Ok(item) => item,
            Err(e) => {
                t.error(&format!("instance {i}"), None, 0, e);
                return t;
            }
        };
        let g = &item.generator;
        let lattice = &lattices[g.dim() - 1];
        let found = find_witness_in(g, lattice).expect("p = 0");
        let fast = fixed_witness(g, lattice.module()).expect("p = 0");
        let semistable = galois_criterion(g);
        let tau = Some(g.tau());
        let n = Some(WITNESS_LEVEL);
        t.check(found.is_some() == semistable, &item.case, tau, 0, n, || {
            format!("exhaustive witness {:?}, semistable {semistable}", found)
        });
        t.check(found.is_some() == fast.is_some(), &item.case, tau, 0, n, || {
            "exhaustive search and fixed-subgroup route disagree".into()
        });
        if let Some(s) = &found {
            let r = g.reduce(WITNESS_LEVEL).expect("p = 0");
            let perp = lattice.module().orthogonal_complement(s);
            t.check(s.is_fixed_by(&r) && perp.is_fixed_by(&r), &item.case, tau, 0, n, || {
                format!("reported witness {s} is not a witness")
            });
        }
        t
    }))
}

fn quasithm() -> Tally {
    let mut t = Tally::default();
    let report = quasithm_oracle(4, 30, 60);
    t.checked += report.checked;
    for (order, k, n) in report.violations {
        t.violations.push(Violation {
            case: format!("N = {order}, k = {k}"),
            tau: None,
            p: 0,
            n: Some(n),
            detail: "membership for n outside N(k)".into(),
        });
    }
    for (order, k, n) in [(2, 2, 4), (4, 2, 2), (3, 2, 3)] {
        t.check(power_membership(order, k, n), &format!("boundary N = {order}, k = {k}"), None, 0, Some(n), || {
            "boundary membership expected".into()
        });
    }
    for k in 1..=4u64 {
        let brute: Vec<u64> = (1..=1u64 << k)
            .filter(|&q| {
                q == 1
                    || crate::cyclotomic::prime_power(q).is_some_and(|(l, m)| u64::from(m) * (l - 1) <= k)
            })
            .collect();
        t.check(n_set(k).members == brute, &format!("N({k})"), None, 0, None, || format!("{} vs {brute:?}", n_set(k)));
    }
    t
}

fn hypothesis_verdicts(id: &str, inst: &HypothesisInstance, g: &InertiaGenerator) -> Result<Vec<Verdict>> {
    let pol = Polarization::principal(g.dim());
    match id {
        "neron2" => verify_neron2(g, &pol),
        "neron3" => verify_neron3(g, &pol),
        "neron4a" => verify_neron4(g, &pol, Neron4Mode::A),
        "neron4b" => verify_neron4(g, &pol, Neron4Mode::B),
        "pressred" => Ok(vec![pressred_check(g, &pol)?]),
        "level-structure" => {
            let ls = level_structure_criterion(g, inst.level, &pol)?;
            let found = Verdict::implication(
                "level-structure-lagrangian",
                true,
                ls.fixed_lagrangian.is_some(),
                "a witness subgroup yields a fixed maximal isotropic subgroup",
            );
            Ok(vec![ls.forward, ls.converse, found])
        }
        "randm" => Ok(vec![randm_check(g.tau(), 2, 1, 2)?]),
        _ => Err(Error::Unknown(id.to_string())),
    }
}

fn hypothesis_suite(id: &str, trials: u64, seed: u64, d_max: usize) -> Result<Tally> {
    let theorem = if id == "cokernel-exponent" { "randm" } else { id };
    let prims = qualifying_primitives(theorem, d_max)?;
    Ok(par_trials(trials, |i| {
        let mut t = Tally::default();
        let inst = match hypothesis_instance(theorem, i, d_max, seed, &prims) {
            Ok(inst) => inst,
            Err(e) => {
                t.error(&format!("instance {i}"), None, 0, e);
                return t;
            }
        };
        let case = format!("instance {i} from {}", inst.blocks.join("+"));
        let g = inst.generator().expect("generated scenarios classify");
        let p = g.characteristic();
        match hypothesis_verdicts(theorem, &inst, &g) {
            Ok(vs) => {
                t.verdicts(&case, &g, Some(inst.level), &vs);
                let base = inst.base_generator().expect("catalog blocks classify");
                match hypothesis_verdicts(theorem, &inst, &base) {
                    Ok(bs) => {
                        let same = bs.iter().zip(&vs).all(|(a, b)| (a.hypothesis, a.conclusion) == (b.hypothesis, b.conclusion));
                        t.check(same && bs.len() == vs.len(), &case, Some(g.tau()), p, Some(inst.level), || {
                            "verdicts differ from the unconjugated base".into()
                        });
                    }
                    Err(e) => t.error(&case, Some(&inst.base), p, e),
                }
            }
            Err(e) => t.error(&case, Some(g.tau()), p, e),
        }
        if let Some(w) = &inst.witness {
            let module = TorsionModule::standard(inst.level, g.dim()).expect("valid level");
            let r = g.reduce(inst.level).expect("level prime to p");
            let ok = module.subgroup(w).is_ok_and(|s| s.is_fixed_by(&r) && module.orthogonal_complement(&s).is_fixed_by(&r));
            t.check(ok, &case, Some(g.tau()), p, Some(inst.level), || "transported witness is not fixed".into());
        }
        t
    }))
}

const FREE_CHARACTERISTICS: [u64; 4] = [0, 5, 7, 11];

fn neron_free(trials: u64, seed: u64, d_max: usize) -> Result<Tally> {
    let entries = finite_order_catalog(d_max)?;
    Ok(par_trials(trials, |i| {
        let mut t = Tally::default();
        let mut rng: ChaCha8Rng = trial_rng(seed, i);
        let e = &entries[rng.gen_range(0..entries.len())];
        let order = classify(&e.tau, 0).expect("catalog").semisimple_order();
        let ps: Vec<u64> = FREE_CHARACTERISTICS.iter().copied().filter(|&p| p == 0 || order % p != 0).collect();
        let p = ps[rng.gen_range(0..ps.len())];
        let base = classify(&e.tau, p).expect("tame by choice of p");
        let g = match random_symplectic_conjugate_with(&base, &mut rng, &ConjugationParams::default()) {
            Ok(c) => c.generator,
            Err(e) => {
                t.error(&format!("instance {i}"), None, p, e);
                return t;
            }
        };
        let case = format!("instance {i} from {}", e.name);
        let pol = Polarization::principal(g.dim());
        let runs = [
            verify_neron2(&g, &pol),
            verify_neron3(&g, &pol),
            verify_neron4(&g, &pol, Neron4Mode::A),
            verify_neron4(&g, &pol, Neron4Mode::B),
        ];
        for run in runs {
            match run {
                Ok(vs) => {
                    for v in vs {
                        t.checked += 1;
                        if !v.agree {
                            t.findings.push(Violation {
                                case: case.clone(),
                                tau: Some(g.tau().clone()),
                                p,
                                n: None,
                                detail: format!("{}: hypothesis {} conclusion {}", v.id, v.hypothesis, v.conclusion),
                            });
                        }
                    }
                }
                Err(Error::HypothesisNotMet(_)) | Err(Error::CharacteristicDivides { .. }) => t.skipped += 1,
                Err(e) => t.error(&case, Some(g.tau()), p, e),
            }
        }
        t
    }))
}

fn brute_kernel_size(tau: &IntMatrix, n: u64) -> u128 {
    let m = tau.minus_identity().reduce(n).expect("n >= 1");
    all_vectors(n, tau.rows()).filter(|v| m.apply(v).iter().all(|&x| x == 0)).count() as u128
}

fn torsion_shadow(trials: u64, seed: u64, d_max: usize) -> Result<Tally> {
    let sweep = Sweep { entries: finite_order_catalog(d_max)?, seed };
    let total = sweep.len(trials);
    Ok(par_trials(total, |i| {
        let mut t = Tally::default();
        let item = match sweep.item(i) {
            Ok(item) => item,
            Err(e) => {
                t.error(&format!("instance {i}"), None, 0, e);
                return t;
            }
        };
        let g = &item.generator;
        for n in 2..=9u64 {
            let nt = neron_torsion(g, n).expect("finite order, p = 0");
            t.check(nt.identity_holds, &item.case, Some(g.tau()), 0, Some(n), || {
                format!("#X_n(F) = {}, 2a = {}, Phi[n] = {:?}", nt.fixed_order, nt.two_a, nt.phi_n)
            });
            if u128::from(n).pow(g.tau().rows() as u32) <= 10_000 {
                let brute = brute_kernel_size(g.tau(), n);
                t.check(brute == nt.fixed_order, &item.case, Some(g.tau()), 0, Some(n), || {
                    format!("kernel has {brute} elements by enumeration, {} by Howell form", nt.fixed_order)
                });
            }
        }
        t
    }))
}

/// `(k, n)` pairs with `n` in `{5, 7, 8, 9}` outside `N(k + 1)`.
pub fn cohomology_pairs() -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    for k in 1..=3usize {
        for n in [5u64, 7, 8, 9] {
            if !n_set(k as u64 + 1).contains(n) {
                out.push((k, n));
            }
        }
    }
    out
}

fn cohomology(trials: u64, seed: u64) -> Result<Tally> {
    let sweep = Sweep { entries: catalog(2)?.into_iter().filter(|e| e.dim() == 2).collect(), seed };
    let pairs = cohomology_pairs();
    let mut tally = par_trials(sweep.len(trials), |i| {
        let mut t = Tally::default();
        let item = match sweep.item(i) {
            Ok(item) => item,
            Err(e) => {
                t.error(&format!("instance {i}"), None, 0, e);
                return t;
            }
        };
        for &(k, n) in &pairs {
            match highercohcor_classify(&item.generator, k, n, true) {
                Ok(vs) => t.verdicts(&item.case, &item.generator, Some(n), &vs),
                Err(e) => t.error(&item.case, Some(item.generator.tau()), 0, e),
            }
        }
        t
    });
    let rot4_pair = IntMatrix::from_i64(&[&[0, 0, -1, 0], &[0, 0, 0, -1], &[1, 0, 0, 0], &[0, 1, 0, 0]]);
    let unipotent = IntMatrix::from_i64(&[&[1, 0, 1, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
    let worked = [
        (-&IntMatrix::identity(4), 3, 2, 5, (true, true)),
        (rot4_pair, 3, 2, 5, (false, false)),
        (unipotent, 0, 3, 7, (true, true)),
    ];
    for (tau, p, k, n, expected) in worked {
        let case = format!("worked example k = {k}");
        match classify(&tau, p).and_then(|g| highercohcor_classify(&g, k, n, false)) {
            Ok(vs) => {
                let got = (vs[0].hypothesis, vs[0].conclusion);
                tally.check(got == expected && vs.iter().all(|v| v.agree), &case, Some(&tau), p, Some(n), || {
                    format!("got {got:?}, expected {expected:?}")
                });
            }
            Err(e) => tally.error(&case, Some(&tau), p, e),
        }
    }
    Ok(tally)
}

const CRITERIA_LEVELS: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];

fn criteria(trials: u64, seed: u64, d_max: usize) -> Result<Tally> {
    let sweep = Sweep { entries: catalog(d_max)?, seed };
    Ok(par_trials(sweep.len(trials), |i| {
        let mut t = Tally::default();
        let item = match sweep.item(i) {
            Ok(item) => item,
            Err(e) => {
                t.error(&format!("instance {i}"), None, 0, e);
                return t;
            }
        };
        let pol = Polarization::principal(item.generator.dim());
        let report = criterion_report(&item.generator, &CRITERIA_LEVELS, &pol);
        let base = criterion_report(&item.base, &CRITERIA_LEVELS, &pol);
        match (report, base) {
            (Ok(r), Ok(b)) => {
                t.verdicts(&item.case, &item.generator, None, &r.verdicts);
                t.check(r.consistent(), &item.case, Some(item.generator.tau()), 0, None, || "inconsistent report".into());
                t.check(r == b, &item.case, Some(item.generator.tau()), 0, None, || {
                    "report differs from the unconjugated base".into()
                });
            }
            (Err(e), _) | (_, Err(e)) => t.error(&item.case, Some(item.generator.tau()), 0, e),
        }
        t
    }))
}

fn edixhoven(d_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for e in finite_order_catalog(d_max)? {
        for p in [0u64, 2, 3, 5, 7] {
            let Ok(g) = classify(&e.tau, p) else { continue };
            let inv = neron_invariants(&g)?;
            match edixhoven_bound(&inv) {
                Some(v) => t.verdicts(&format!("catalog {}", e.name), &g, None, &[v]),
                None => t.skipped += 1,
            }
        }
    }
    Ok(t)
}

fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_rows(&data).expect("nonempty")
}

fn random_mod_matrix(rng: &mut ChaCha8Rng, n: u64, rows: usize, cols: usize) -> ModMatrix {
    let data: Vec<Vec<u64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(0..n)).collect()).collect();
    ModMatrix::from_rows(n, cols, &data).expect("consistent widths")
}

/// All `Σ c_i r_i`, as a sorted list.
fn brute_span(a: &ModMatrix) -> Vec<Vec<u64>> {
    let n = a.modulus();
    let mut out: Vec<Vec<u64>> = all_vectors(n, a.rows())
        .map(|c| {
            (0..a.cols())
                .map(|j| (0..a.rows()).map(|i| c[i] * a.get(i, j)).sum::<u64>() % n)
                .collect()
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.determinant().abs().is_one()
}

fn linalg(trials: u64, seed: u64) -> Tally {
    par_trials(trials, |i| {
        let mut t = Tally::default();
        let mut rng = trial_rng(seed, i);

        let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random_int_matrix(&mut rng, r, c, 9);
        let snf = smith_normal_form(&a);
        let diag_ok = (0..r).all(|x| (0..c).all(|y| x == y || snf.d.get(x, y).is_zero()))
            && snf.divisors.iter().enumerate().all(|(k, d)| snf.d.get(k, k) == d && !d.is_negative())
            && snf.divisors.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() });
        let ok = &(&snf.u * &a) * &snf.v == snf.d && is_unimodular(&snf.u) && is_unimodular(&snf.v) && diag_ok;
        t.check(ok, &format!("smith {i}"), Some(&a), 0, None, || format!("decomposition {snf:?}"));

        let n = rng.gen_range(2..=4u64);
        let (r, c) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let m = random_mod_matrix(&mut rng, n, r, c);
        let h = howell_form(&m);
        let idempotent = howell_form(&h) == h;
        let span_equal = brute_span(&m) == brute_span(&h);
        let mut shuffled = m.clone();
        let (x, y) = (rng.gen_range(0..r), rng.gen_range(0..r));
        let scale = rng.gen_range(0..n);
        if x != y {
            for j in 0..c {
                let v = (shuffled.get(x, j) + scale * shuffled.get(y, j)) % n;
                shuffled.set(x, j, v);
            }
        }
        let extra = ModMatrix::zeros(n, 1, c);
        let canonical = howell_form(&shuffled.stack(&extra)) == h;
        t.check(idempotent && span_equal && canonical, &format!("howell {i}"), None, 0, Some(n), || {
            format!("input {m}, form {h}: idempotent {idempotent}, span {span_equal}, canonical {canonical}")
        });

        let size = rng.gen_range(2..=4);
        let k = rng.gen_range(1..=size);
        let a = random_int_matrix(&mut rng, size, size, 5);
        let b = random_int_matrix(&mut rng, size, size, 5);
        let ok = match (exterior_power(&(&a * &b), k), exterior_power(&a, k), exterior_power(&b, k)) {
            (Ok(ab), Ok(x), Ok(y)) => ab == &x * &y,
            _ => false,
        };
        t.check(ok, &format!("exterior {i}"), Some(&a), 0, None, || format!("k = {k}, b = {b}"));
        let det_ok = exterior_power(&a, size).is_ok_and(|top| *top.get(0, 0) == a.determinant());
        t.check(det_ok, &format!("exterior top {i}"), Some(&a), 0, None, || "top power is not the determinant".into());
        t
    })
}
