//! The `analyze` report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::cohomology::highercohcor_classify;
use crate::error::{Error, Result};
use crate::harness::scenario::Scenario;
use crate::inertia::{criterion_report, Verdict};
use crate::linalg::smith_normal_form;
use crate::neron::{
    edixhoven_bound, neron_invariants, neron_torsion, verify_neron2, verify_neron3, verify_neron4, Neron4Mode,
};
use crate::torsion::fixed_subgroup;

/// Levels always examined besides the scenario's own.
pub const DEFAULT_LEVELS: [u64; 5] = [2, 3, 4, 5, 7];
/// Levels whose fixed subgroups are listed.
pub const TORSION_LEVELS: [u64; 3] = [2, 3, 4];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionEntry {
    pub fixed_order: u128,
    pub structure: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Skipped {
    pub id: String,
    pub reason: String,
}

/// Everything `analyze` prints. Ranks are `null` when reduction is neither
/// potentially good nor semistable; component groups are `null` unless
/// reduction is potentially good.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub d: usize,
    pub p: u64,
    pub semistable: bool,
    pub potentially_good: bool,
    pub good: bool,
    pub purely_additive: bool,
    pub min_degree: u64,
    pub a: Option<usize>,
    pub u: Option<usize>,
    pub t: Option<usize>,
    pub phi: Option<Vec<u64>>,
    pub phi_prime: Option<Vec<u64>>,
    pub torsion: BTreeMap<u64, TorsionEntry>,
    pub verdicts: Vec<Verdict>,
    pub skipped: Vec<Skipped>,
}

impl AnalysisReport {
    pub fn violations(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.agree)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let kind = if self.good {
            "good"
        } else if self.semistable {
            "semistable"
        } else if self.potentially_good && self.purely_additive {
            "additive, potentially good"
        } else if self.potentially_good {
            "potentially good"
        } else {
            "potentially semistable"
        };
        let _ = writeln!(s, "dimension {}  residue characteristic {}", self.d, self.p);
        let _ = writeln!(s, "reduction: {kind}");
        let _ = writeln!(s, "semistable after degree {}", self.min_degree);
        let opt = |x: Option<usize>| x.map_or("-".to_string(), |x| x.to_string());
        let _ = writeln!(s, "ranks: a = {}  u = {}  t = {}", opt(self.a), opt(self.u), opt(self.t));
        if let (Some(phi), Some(phi_prime)) = (&self.phi, &self.phi_prime) {
            let _ = writeln!(s, "components: {}  prime-to-p: {}", group(phi), group(phi_prime));
        }
        for (n, e) in &self.torsion {
            let _ = writeln!(s, "X_{n}(F): order {}  ≅ {}", e.fixed_order, group(&e.structure));
        }
        for v in &self.verdicts {
            let mark = if v.agree { "ok" } else { "VIOLATION" };
            let _ = writeln!(s, "[{mark}] {} ({} -> {}): {}", v.id, v.hypothesis, v.conclusion, v.citation);
        }
        for k in &self.skipped {
            let _ = writeln!(s, "[skip] {}: {}", k.id, k.reason);
        }
        s
    }
}

fn group(divisors: &[u64]) -> String {
    if divisors.is_empty() {
        return "0".into();
    }
    divisors.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
}

type NeronCheck<'a> = Box<dyn Fn() -> Result<Vec<Verdict>> + 'a>;

/// Runs every applicable criterion on a scenario; `level` overrides the
/// scenario's `n`.
pub fn analyze(scenario: &Scenario, level: Option<u64>) -> Result<AnalysisReport> {
    scenario.validate()?;
    let g = scenario.generator()?;
    let pol = scenario.polarization()?;
    let p = scenario.p;
    let n = level.or(scenario.n);
    let usable = |m: &u64| p == 0 || m % p != 0;
    let mut levels: Vec<u64> = DEFAULT_LEVELS.iter().copied().chain(n).filter(usable).collect();
    levels.sort_unstable();
    levels.dedup();

    let crit = criterion_report(&g, &levels, &pol)?;
    let mut verdicts = crit.verdicts;
    let mut skipped = Vec::new();
    let mut skip = |id: &str, e: Error| skipped.push(Skipped { id: id.to_string(), reason: e.to_string() });

    let (a, u, t, phi, phi_prime) = if g.is_potentially_good() {
        let inv = neron_invariants(&g)?;
        (Some(inv.a), Some(inv.u), Some(inv.t), Some(inv.phi.clone()), Some(inv.phi_prime.clone()))
    } else if crit.semistable {
        let t = smith_normal_form(&g.tau().minus_identity()).rank();
        (Some(g.dim() - t), Some(0), Some(t), None, None)
    } else {
        (None, None, None, None, None)
    };

    let mut torsion = BTreeMap::new();
    for m in TORSION_LEVELS.iter().copied().chain(n).filter(usable) {
        let f = fixed_subgroup(g.tau(), m)?;
        torsion.insert(m, TorsionEntry { fixed_order: f.order(), structure: f.structure() });
    }

    if g.is_potentially_good() {
        let checks: [(&str, NeronCheck); 4] = [
            ("neron2", Box::new(|| verify_neron2(&g, &pol))),
            ("neron3", Box::new(|| verify_neron3(&g, &pol))),
            ("neron4a", Box::new(|| verify_neron4(&g, &pol, Neron4Mode::A))),
            ("neron4b", Box::new(|| verify_neron4(&g, &pol, Neron4Mode::B))),
        ];
        for (id, check) in checks {
            match check() {
                Ok(vs) => verdicts.extend(vs.into_iter().map(|mut v| {
                    if id == "neron4b" {
                        v.id = v.id.replacen("neron4", "neron4b", 1);
                    }
                    v
                })),
                Err(e) => skip(id, e),
            }
        }
        for &m in torsion.keys() {
            let nt = neron_torsion(&g, m)?;
            verdicts.push(Verdict::implication(
                &format!("torsion-shadow-{m}"),
                true,
                nt.identity_holds,
                "#X_n(F) = n^{2a} #Φ[n]",
            ));
        }
        if let Some(v) = edixhoven_bound(&neron_invariants(&g)?) {
            verdicts.push(v);
        }
    }

    if let Some(m) = n.filter(usable) {
        for k in 1..2 * g.dim() {
            match highercohcor_classify(&g, k, m, scenario.flags.strictly_henselian) {
                Ok(vs) => verdicts.extend(vs),
                Err(e) => skip(&format!("cohomology-k{k}-n{m}"), e),
            }
        }
    }

    Ok(AnalysisReport {
        d: g.dim(),
        p,
        semistable: crit.semistable,
        potentially_good: crit.potentially_good,
        good: g.is_good(),
        purely_additive: g.is_purely_additive(),
        min_degree: crit.minimal_semistable_degree,
        a,
        u,
        t,
        phi,
        phi_prime,
        torsion,
        verdicts,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scenario(text: &str) -> Scenario {
        Scenario::from_json(text).unwrap()
    }

    #[test]
    fn worked_example() {
        let r = analyze(&scenario(r#"{"d": 1, "p": 3, "tau": [[-1, 0], [0, -1]], "seed": 0}"#), None).unwrap();
        assert!(r.potentially_good && r.purely_additive && !r.semistable);
        assert_eq!((r.a, r.u, r.t), (Some(0), Some(1), Some(0)));
        assert_eq!(r.phi_prime, Some(vec![2, 2]));
        assert_eq!(r.torsion[&2], TorsionEntry { fixed_order: 4, structure: vec![2, 2] });
        assert_eq!(r.torsion[&4], TorsionEntry { fixed_order: 4, structure: vec![2, 2] });
        assert!(!r.torsion.contains_key(&3));
        assert_eq!(r.min_degree, 2);
        assert_eq!(r.violations().count(), 0, "{}", r.to_text());
        assert!(r.to_text().contains("additive, potentially good"));
    }

    #[test]
    fn semistable_toric_ranks() {
        let r = analyze(&scenario(r#"{"d": 1, "p": 0, "tau": [[1, 2], [0, 1]], "n": 5}"#), None).unwrap();
        assert!(r.semistable && !r.potentially_good);
        assert_eq!((r.a, r.u, r.t), (Some(0), Some(0), Some(1)));
        assert!(r.phi.is_none());
        assert_eq!(r.torsion[&2].fixed_order, 4);
        assert_eq!(r.torsion[&5].fixed_order, 5);
        assert!(r.verdicts.iter().any(|v| v.id == "cohomology-k1-n5"));
        assert_eq!(r.violations().count(), 0);
    }

    #[test]
    fn level_override_and_json() {
        let s = scenario(r#"{"d": 2, "p": 0, "tau": [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]}"#);
        let r = analyze(&s, Some(9)).unwrap();
        assert!(r.torsion.contains_key(&9));
        let json = r.to_json();
        for key in ["\"semistable\"", "\"min_degree\"", "\"phi_prime\"", "\"torsion\"", "\"fixed_order\"", "\"citation\""] {
            assert!(json.contains(key), "{key}");
        }
        assert_eq!(analyze(&s, Some(9)).unwrap().to_json(), json);
    }
}
