//! Hypothesis-preserving instance generation.
//!
//! A primitive qualifies for a statement when it satisfies the statement's
//! hypothesis on its own (checked by computation, not by a table). The
//! hypotheses used here survive orthogonal block sums, because fixed
//! subgroups and orthogonal complements split along the blocks, and they
//! survive symplectic conjugation, which carries a witness `S` to `U S`.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harness::catalog::{block_sum_all, primitives, CatalogEntry};
use crate::harness::conjugation::{random_symplectic_conjugate_with, trial_rng, ConjugationParams};
use crate::harness::scenario::{Flags, Scenario};
use crate::inertia::{classify, fixed_witness, InertiaGenerator};
use crate::linalg::IntMatrix;
use crate::torsion::{Subgroup, TorsionModule};

/// Statements with a generator, and the level their hypothesis lives at.
pub const THEOREMS: [(&str, u64); 7] = [
    ("neron2", 2),
    ("neron3", 3),
    ("neron4a", 2),
    ("neron4b", 4),
    ("pressred", 2),
    ("level-structure", 5),
    ("randm", 2),
];

/// Residue characteristics drawn for generated scenarios.
const CHARACTERISTICS: [u64; 5] = [0, 5, 7, 11, 13];

pub fn theorem_level(id: &str) -> Result<u64> {
    THEOREMS.iter().find(|(t, _)| *t == id).map(|&(_, n)| n).ok_or_else(|| Error::Unknown(id.to_string()))
}

fn witness_at(g: &InertiaGenerator, n: u64) -> Result<Option<Subgroup>> {
    fixed_witness(g, &TorsionModule::standard(n, g.dim())?)
}

/// Whether a single primitive satisfies the hypothesis of `id`.
pub fn qualifies(id: &str, g: &InertiaGenerator) -> Result<bool> {
    let n = theorem_level(id)?;
    let finite = g.is_potentially_good();
    Ok(match id {
        "neron2" | "neron3" | "neron4b" => finite && witness_at(g, n)?.is_some(),
        "neron4a" => finite && g.tau().minus_identity().divisible_by(2),
        "pressred" | "level-structure" => witness_at(g, n)?.is_some(),
        "randm" => {
            let m = g.tau().minus_identity();
            finite && (&m * &m).divisible_by(2)
        }
        _ => unreachable!("level lookup rejects unknown ids"),
    })
}

/// Primitives of dimension at most `d_max` qualifying for `id`.
pub fn qualifying_primitives(id: &str, d_max: usize) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for e in primitives(d_max.min(2)) {
        if qualifies(id, &classify(&e.tau, 0)?)? {
            out.push(e);
        }
    }
    Ok(out)
}

/// A generated scenario with the base it was conjugated from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisInstance {
    pub theorem: String,
    pub index: u64,
    pub blocks: Vec<String>,
    pub base: IntMatrix,
    pub scenario: Scenario,
    pub level: u64,
    /// Canonical generators of the transported witness, when the hypothesis
    /// is a witness subgroup.
    pub witness: Option<Vec<Vec<u64>>>,
}

impl HypothesisInstance {
    pub fn generator(&self) -> Result<InertiaGenerator> {
        self.scenario.generator()
    }

    pub fn base_generator(&self) -> Result<InertiaGenerator> {
        classify(&self.base, self.scenario.p)
    }
}

/// The `index`-th instance for `id`: a random block sum of qualifying
/// primitives, conjugated by a random symplectic matrix.
pub fn hypothesis_instance(id: &str, index: u64, d_max: usize, seed: u64, prims: &[CatalogEntry]) -> Result<HypothesisInstance> {
    let level = theorem_level(id)?;
    if d_max == 0 {
        return Err(Error::Precondition("d_max must be at least 1".into()));
    }
    let mut rng = trial_rng(seed, index);
    let d = rng.gen_range(1..=d_max);
    let mut left = d;
    let mut chosen: Vec<&CatalogEntry> = Vec::new();
    while left > 0 {
        let fits: Vec<&CatalogEntry> = prims.iter().filter(|e| e.dim() <= left).collect();
        let pick = *fits
            .choose(&mut rng)
            .ok_or_else(|| Error::Precondition(format!("no 2x2 primitive qualifies for {id}")))?;
        left -= pick.dim();
        chosen.push(pick);
    }
    let base = block_sum_all(&chosen.iter().map(|e| &e.tau).collect::<Vec<_>>()).expect("at least one block");
    let order = classify(&base, 0)?.semisimple_order();
    let allowed: Vec<u64> =
        CHARACTERISTICS.iter().copied().filter(|&p| p == 0 || (order % p != 0 && level % p != 0)).collect();
    let p = *allowed.choose(&mut rng).expect("0 is always allowed");
    let base_gen = classify(&base, p)?;
    let conj = random_symplectic_conjugate_with(&base_gen, &mut rng, &ConjugationParams::default())?;
    let witness = match id {
        "neron4a" | "randm" => None,
        _ => {
            let s = witness_at(&base_gen, level)?
                .ok_or_else(|| Error::Precondition(format!("block sum lost the {id} hypothesis")))?;
            let moved = s.transform(&conj.u.reduce(level)?);
            Some(moved.gens().to_rows())
        }
    };
    let scenario = Scenario {
        d,
        p,
        tau: conj.generator.tau().clone(),
        polarization: None,
        n: Some(level),
        flags: Flags { strictly_henselian: true },
        seed,
    };
    Ok(HypothesisInstance {
        theorem: id.to_string(),
        index,
        blocks: chosen.iter().map(|e| e.name.clone()).collect(),
        base,
        scenario,
        level,
        witness,
    })
}

pub fn generate_hypothesis_instances(id: &str, count: u64, d_max: usize, seed: u64) -> Result<Vec<HypothesisInstance>> {
    let prims = qualifying_primitives(id, d_max)?;
    (0..count).map(|i| hypothesis_instance(id, i, d_max, seed, &prims)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(id: &str, d_max: usize) -> Vec<String> {
        qualifying_primitives(id, d_max).unwrap().into_iter().map(|e| e.name).collect()
    }

    #[test]
    fn qualifying_sets() {
        assert_eq!(names("neron4a", 1), ["I", "-I"]);
        assert_eq!(names("neron3", 1), ["I", "rot3", "rot3'"]);
        assert_eq!(names("neron2", 1), ["I", "-I", "rot4", "rot4'"]);
        let pressred = names("pressred", 1);
        for name in ["I", "-I", "rot4", "rot4'"] {
            assert!(pressred.contains(&name.to_string()));
        }
        assert!(names("level-structure", 1).iter().all(|n| n == "I" || n.starts_with("unip")));
        assert!(matches!(qualifying_primitives("nope", 1), Err(Error::Unknown(_))));
    }

    #[test]
    fn pressred_primitives_fix_the_diagonal() {
        let s = [vec![1u64, 1]];
        for e in ["I", "-I", "rot4"].iter().map(|n| primitives(1).into_iter().find(|e| e.name == *n).unwrap()) {
            let t = e.tau.reduce(2).unwrap();
            let sub = Subgroup::generated(2, 2, &s).unwrap();
            assert!(sub.is_fixed_by(&t), "{}", e.name);
        }
    }

    #[test]
    fn witnesses_are_transported() {
        for id in ["neron2", "neron3", "neron4b", "pressred", "level-structure"] {
            for inst in generate_hypothesis_instances(id, 30, 2, 3).unwrap() {
                let g = inst.generator().unwrap();
                let module = TorsionModule::standard(inst.level, g.dim()).unwrap();
                let w = module.subgroup(inst.witness.as_ref().unwrap()).unwrap();
                let t = g.reduce(inst.level).unwrap();
                assert!(w.is_fixed_by(&t));
                assert!(module.orthogonal_complement(&w).is_fixed_by(&t), "{id} {:?}", inst.blocks);
            }
        }
    }

    #[test]
    fn reproducible() {
        let a = generate_hypothesis_instances("neron3", 10, 3, 11).unwrap();
        let b = generate_hypothesis_instances("neron3", 10, 3, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|i| i.scenario.validate().is_ok()));
    }
}
