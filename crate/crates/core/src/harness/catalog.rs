//! Generator primitives and their symplectic block sums.
//!
//! The 2x2 primitives are the finite-order classes of `SL_2(Z)` (orders 1, 2,
//! 3, 4, 6, one class per primitive root pair), unipotents `[[1, m], [0, 1]]`
//! and a few negated unipotents. The 4x4 primitives are irreducible
//! finite-order matrices with characteristic polynomial `Φ_5`, `Φ_8`, `Φ_10`,
//! `Φ_12`, and unipotents `[[I, S], [0, I]]` for symmetric `S`. Everything
//! else is a block sum.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inertia::classify;
use crate::linalg::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub tau: IntMatrix,
}

impl CatalogEntry {
    fn new(name: &str, rows: &[&[i64]]) -> Self {
        CatalogEntry { name: name.to_string(), tau: IntMatrix::from_i64(rows) }
    }

    pub fn dim(&self) -> usize {
        self.tau.rows() / 2
    }

    pub fn is_finite_order(&self) -> bool {
        classify(&self.tau, 0).is_ok_and(|g| g.is_potentially_good())
    }
}

/// Symplectic block sum in `(x_1, .., x_d, y_1, .., y_d)` coordinates: `a`
/// acts on the first `d_a` symplectic planes, `b` on the rest.
pub fn block_sum(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
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

pub fn block_sum_all(blocks: &[&IntMatrix]) -> Option<IntMatrix> {
    let (first, rest) = blocks.split_first()?;
    Some(rest.iter().fold((*first).clone(), |acc, b| block_sum(&acc, b)))
}

const UNIPOTENT_SHIFTS: [i64; 7] = [-2, -1, 1, 2, 3, 5, 6];

pub fn primitives_2x2() -> Vec<CatalogEntry> {
    let mut out = vec![
        CatalogEntry::new("I", &[&[1, 0], &[0, 1]]),
        CatalogEntry::new("-I", &[&[-1, 0], &[0, -1]]),
        CatalogEntry::new("rot3", &[&[0, -1], &[1, -1]]),
        CatalogEntry::new("rot3'", &[&[-1, 1], &[-1, 0]]),
        CatalogEntry::new("rot4", &[&[0, -1], &[1, 0]]),
        CatalogEntry::new("rot4'", &[&[0, 1], &[-1, 0]]),
        CatalogEntry::new("rot6", &[&[1, -1], &[1, 0]]),
        CatalogEntry::new("rot6'", &[&[0, 1], &[-1, 1]]),
    ];
    for m in UNIPOTENT_SHIFTS {
        out.push(CatalogEntry::new(&format!("unip({m})"), &[&[1, m], &[0, 1]]));
    }
    for m in [1, 2] {
        out.push(CatalogEntry::new(&format!("-unip({m})"), &[&[-1, -m], &[0, -1]]));
    }
    out
}

pub fn primitives_4x4() -> Vec<CatalogEntry> {
    let irr10: &[&[i64]] = &[&[1, 0, -1, 1], &[0, 0, 0, -1], &[1, 0, 0, 0], &[1, 1, 0, 0]];
    let irr5: Vec<Vec<i64>> = irr10.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    let irr5: Vec<&[i64]> = irr5.iter().map(Vec::as_slice).collect();
    let mut out = vec![
        CatalogEntry::new("irr5", &irr5),
        CatalogEntry::new("irr8", &[&[0, -1, -1, 0], &[-1, 0, 1, -1], &[1, 1, 0, 0], &[0, 1, 0, 0]]),
        CatalogEntry::new("irr10", irr10),
        CatalogEntry::new("irr12", &[&[0, 1, 0, -1], &[1, 0, -1, 0], &[0, -1, 0, 2], &[1, 0, 0, 0]]),
    ];
    for (a, b, c) in [(1, 0, 0), (1, 1, 1), (1, 1, 2), (2, 1, -1)] {
        out.push(CatalogEntry::new(
            &format!("unip4({a},{b},{c})"),
            &[&[1, 0, a, b], &[0, 1, b, c], &[0, 0, 1, 0], &[0, 0, 0, 1]],
        ));
    }
    out
}

/// Every primitive of dimension at most `d_max` (`d_max <= 2`).
pub fn primitives(d_max: usize) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    if d_max >= 1 {
        out.extend(primitives_2x2());
    }
    if d_max >= 2 {
        out.extend(primitives_4x4());
    }
    out
}

/// All block sums of primitives with total dimension exactly `d`, each
/// multiset of primitives once (in nondecreasing primitive order).
pub fn entries_of_dim(d: usize) -> Vec<CatalogEntry> {
    let prims = primitives(d.min(2));
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn walk(prims: &[CatalogEntry], start: usize, left: usize, stack: &mut Vec<usize>, out: &mut Vec<CatalogEntry>) {
        if left == 0 {
            let blocks: Vec<&IntMatrix> = stack.iter().map(|&i| &prims[i].tau).collect();
            let name = stack.iter().map(|&i| prims[i].name.as_str()).collect::<Vec<_>>().join("+");
            out.push(CatalogEntry { name, tau: block_sum_all(&blocks).expect("nonempty") });
            return;
        }
        for i in start..prims.len() {
            if prims[i].dim() <= left {
                stack.push(i);
                walk(prims, i, left - prims[i].dim(), stack, out);
                stack.pop();
            }
        }
    }
    walk(&prims, 0, d, &mut stack, &mut out);
    out
}

/// The catalog for `1 <= d <= d_max`, ordered by dimension.
pub fn catalog(d_max: usize) -> Result<Vec<CatalogEntry>> {
    if d_max == 0 || d_max > 3 {
        return Err(Error::Precondition(format!("catalog dimension bound must be 1, 2 or 3, got {d_max}")));
    }
    Ok((1..=d_max).flat_map(entries_of_dim).collect())
}

/// The finite-order part of [`catalog`].
pub fn finite_order_catalog(d_max: usize) -> Result<Vec<CatalogEntry>> {
    Ok(catalog(d_max)?.into_iter().filter(CatalogEntry::is_finite_order).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::char_poly;
    use crate::cyclotomic::cyclotomic_poly;

    #[test]
    fn every_entry_classifies() {
        let all = catalog(2).unwrap();
        assert_eq!(all.len(), 17 + 17 * 18 / 2 + 8);
        for e in &all {
            classify(&e.tau, 0).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }

    #[test]
    fn two_by_two_orders() {
        let orders: Vec<u64> = primitives_2x2()
            .iter()
            .filter_map(|e| {
                let g = classify(&e.tau, 0).unwrap();
                g.is_potentially_good().then(|| g.semisimple_order())
            })
            .collect();
        assert_eq!(orders, vec![1, 2, 3, 3, 4, 4, 6, 6]);
    }

    #[test]
    fn irreducible_char_polys() {
        for (e, order) in primitives_4x4().iter().zip([5, 8, 10, 12]) {
            assert_eq!(char_poly(&e.tau), cyclotomic_poly(order), "{}", e.name);
            assert!(e.tau.pow(order).is_identity());
        }
    }

    #[test]
    fn block_sum_is_symplectic_and_multiplicative() {
        let a = &primitives_2x2()[2].tau;
        let b = &primitives_2x2()[9].tau;
        let s = block_sum(a, b);
        let j = IntMatrix::symplectic_form(2);
        assert_eq!(&(&s.transpose() * &j) * &s, j);
        assert_eq!(block_sum(&a.pow(3), &b.pow(3)), s.pow(3));
        assert_eq!(s.get(0, 2), a.get(0, 1));
        assert_eq!(s.get(1, 3), b.get(0, 1));
    }

    #[test]
    fn three_dim_entries_classify() {
        let all = entries_of_dim(3);
        assert!(all.len() > 100);
        assert!(all.iter().all(|e| classify(&e.tau, 0).is_ok()));
        assert!(catalog(4).is_err());
    }
}
