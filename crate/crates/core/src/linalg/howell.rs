//! Howell normal form over `Z/nZ`.
//!
//! Over a ring with zero divisors an echelon form is not enough to decide
//! equality of row spans. The Howell form adds, for every pivot row `r` with
//! pivot `g`, the requirement that `(n/g) * r` lies in the span of the rows
//! below it. With pivots normalized to divisors of `n` and the entries above
//! each pivot reduced into `[0, g)`, the form is unique: two matrices span the
//! same submodule iff their Howell forms are identical.

use num_integer::Integer;

use super::{addmod, mulmod, submod, ModMatrix};

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, s, t) with g = s*a + t*b, g >= 0
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn to_residue(c: i128, n: u64) -> u64 {
    c.rem_euclid(n as i128) as u64
}

/// `a*x + b*y` entrywise.
fn combine(a: u64, x: &[u64], b: u64, y: &[u64], n: u64) -> Vec<u64> {
    x.iter().zip(y).map(|(&u, &v)| addmod(mulmod(a, u, n), mulmod(b, v, n), n)).collect()
}

fn scale_row(row: &mut [u64], c: u64, n: u64) {
    for v in row.iter_mut() {
        *v = mulmod(*v, c, n);
    }
}

fn sub_multiple(row: &mut [u64], q: u64, pivot_row: &[u64], n: u64) {
    for (v, &p) in row.iter_mut().zip(pivot_row) {
        *v = submod(*v, mulmod(q, p, n), n);
    }
}

/// A unit `u` of `Z/nZ` with `u * a = gcd(a, n)`.
fn normalizing_unit(a: u64, n: u64) -> u64 {
    let g = a.gcd(&n);
    let (a1, n1) = (a / g, n / g);
    let (_, s, _) = ext_gcd(a1 as i128, n1 as i128);
    let mut u = to_residue(s, n1);
    while u.gcd(&n) != 1 {
        u += n1;
    }
    u % n
}

fn pivot_col(row: &[u64]) -> Option<usize> {
    row.iter().position(|&v| v != 0)
}

/// Howell form of a list of rows of width `cols`, as rows.
pub(crate) fn howell_rows(mut a: Vec<Vec<u64>>, cols: usize, n: u64) -> Vec<Vec<u64>> {
    if n == 1 {
        return Vec::new();
    }
    let mut r = 0;
    for c in 0..cols {
        if r >= a.len() {
            break;
        }
        for i in r + 1..a.len() {
            if a[i][c] == 0 {
                continue;
            }
            let (x, y) = (a[r][c] as i128, a[i][c] as i128);
            let (g, s, t) = ext_gcd(x, y);
            let (xg, yg) = (x / g, y / g);
            let new_r = combine(to_residue(s, n), &a[r], to_residue(t, n), &a[i], n);
            let new_i = combine(to_residue(yg, n), &a[r], to_residue(-xg, n), &a[i], n);
            a[r] = new_r;
            a[i] = new_i;
        }
        if a[r][c] == 0 {
            continue;
        }
        let u = normalizing_unit(a[r][c], n);
        scale_row(&mut a[r], u, n);
        let pivot = a[r][c];
        if pivot != 1 {
            let mut ann = a[r].clone();
            scale_row(&mut ann, n / pivot, n);
            if ann.iter().any(|&v| v != 0) {
                a.push(ann);
            }
        }
        r += 1;
    }
    a.truncate(r);
    for k in 0..a.len() {
        let pc = pivot_col(&a[k]).expect("pivot rows are nonzero");
        let pivot = a[k][pc];
        let (top, rest) = a.split_at_mut(k);
        let pivot_row = &rest[0];
        for row in top.iter_mut() {
            let q = row[pc] / pivot;
            if q != 0 {
                sub_multiple(row, q, pivot_row, n);
            }
        }
    }
    a
}

/// Canonical generator matrix of the row span of `a`; zero rows are dropped.
pub fn howell_form(a: &ModMatrix) -> ModMatrix {
    let n = a.modulus();
    let rows = howell_rows(a.to_rows(), a.cols(), n);
    ModMatrix::from_rows(n, a.cols(), &rows).expect("consistent widths")
}

/// Reduces `v` against Howell rows `h`; the result is zero iff `v` lies in
/// their span.
pub fn reduce_against(h: &ModMatrix, v: &[u64]) -> Vec<u64> {
    let n = h.modulus();
    let mut v: Vec<u64> = v.iter().map(|&x| x % n).collect();
    for i in 0..h.rows() {
        let row = h.row(i);
        let Some(pc) = pivot_col(row) else { continue };
        if v[..pc].iter().any(|&x| x != 0) {
            return v;
        }
        let q = v[pc] / row[pc];
        if q != 0 {
            sub_multiple(&mut v, q, row, n);
        }
    }
    v
}

/// Generators (in Howell form) of `{x : A x = 0 mod n}`.
pub fn kernel_mod_n(a: &ModMatrix) -> ModMatrix {
    let n = a.modulus();
    let (r, c) = (a.rows(), a.cols());
    let aug: Vec<Vec<u64>> = (0..c)
        .map(|j| {
            let mut row: Vec<u64> = (0..r).map(|i| a.get(i, j)).collect();
            row.extend((0..c).map(|k| u64::from(k == j) % n));
            row
        })
        .collect();
    let h = howell_rows(aug, r + c, n);
    let kernel: Vec<Vec<u64>> =
        h.into_iter().filter(|row| row[..r].iter().all(|&v| v == 0)).map(|row| row[r..].to_vec()).collect();
    let rows = howell_rows(kernel, c, n);
    ModMatrix::from_rows(n, c, &rows).expect("consistent widths")
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    fn span(m: &ModMatrix) -> BTreeSet<Vec<u64>> {
        let n = m.modulus();
        let mut out = BTreeSet::new();
        out.insert(vec![0; m.cols()]);
        loop {
            let before = out.len();
            let current: Vec<Vec<u64>> = out.iter().cloned().collect();
            for v in &current {
                for i in 0..m.rows() {
                    let w: Vec<u64> = v.iter().zip(m.row(i)).map(|(&a, &b)| (a + b) % n).collect();
                    out.insert(w);
                }
            }
            if out.len() == before {
                return out;
            }
        }
    }

    #[test]
    fn already_canonical_examples() {
        let a = ModMatrix::from_i64(4, &[&[2, 0], &[0, 2]]);
        assert_eq!(howell_form(&a), a);
        let b = ModMatrix::from_i64(4, &[&[2, 2]]);
        assert_eq!(howell_form(&b), b);
    }

    #[test]
    fn composite_modulus_completion() {
        let a = ModMatrix::from_i64(4, &[&[1, 2], &[2, 0]]);
        let h = howell_form(&a);
        assert_eq!(span(&h), span(&a));
        // (2, 0) = 2 * (1, 2), so the span is cyclic of order 4
        assert_eq!(h, ModMatrix::from_i64(4, &[&[1, 2]]));
    }

    #[test]
    fn annihilator_rows_are_kept() {
        // (2, 1) mod 4 also spans (0, 2) = 2*(2, 1)
        let a = ModMatrix::from_i64(4, &[&[2, 1]]);
        let h = howell_form(&a);
        assert_eq!(h, ModMatrix::from_i64(4, &[&[2, 1], &[0, 2]]));
        assert!(reduce_against(&h, &[0, 2]).iter().all(|&v| v == 0));
        assert!(reduce_against(&h, &[0, 1]).iter().any(|&v| v != 0));
    }

    #[test]
    fn kernel_examples() {
        let zero = ModMatrix::zeros(6, 2, 2);
        assert_eq!(kernel_mod_n(&zero), ModMatrix::identity(6, 2));
        let ident = ModMatrix::identity(6, 2);
        assert_eq!(kernel_mod_n(&ident).rows(), 0);
        // tau - I for the order-3 rotation, mod 3
        let a = ModMatrix::from_i64(3, &[&[-1, -1], &[1, -2]]);
        let k = kernel_mod_n(&a);
        let brute: BTreeSet<Vec<u64>> = (0..9u64)
            .map(|i| vec![i / 3, i % 3])
            .filter(|v| a.apply(v).iter().all(|&x| x == 0))
            .collect();
        assert_eq!(span(&k), brute);
        assert_eq!(brute.len(), 3);
        assert!(brute.contains(&vec![2, 1]));
    }

    #[test]
    fn modulus_one_is_trivial() {
        let a = ModMatrix::from_i64(1, &[&[0, 0]]);
        assert_eq!(howell_form(&a).rows(), 0);
    }
}
