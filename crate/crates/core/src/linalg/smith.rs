//! Smith normal form over `Z` with unimodular transforms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    /// `min(rows, cols)` diagonal entries: nonnegative, each dividing the
    /// next, zeros last.
    pub divisors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Number of zero diagonal entries plus the excess columns, i.e. the
    /// nullity of `A` acting on column vectors.
    pub fn nullity(&self) -> usize {
        self.v.rows() - self.rank()
    }

    /// Invariant factors of the torsion part of the cokernel `Z^rows / A Z^cols`.
    pub fn torsion_divisors(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_i -= q * row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[t].clone();
            for (x, s) in m[i].iter_mut().zip(&src) {
                *x -= q * s;
            }
        }
    }

    /// col_j -= q * col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let s = row[t].clone();
                row[j] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -&*x;
            }
        }
    }

    /// Smallest nonzero |entry| in the trailing block, ties by row-major order.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.a[bi][bj].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

fn to_matrix(rows: Vec<Vec<BigInt>>) -> IntMatrix {
    let r = rows.len();
    let c = rows[0].len();
    IntMatrix::new(r, c, rows.into_iter().flatten().collect()).expect("non-empty")
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Deterministic Smith normal form. The pivot at each stage is the
/// smallest-absolute-value nonzero entry of the remaining block (ties broken
/// by row-major position).
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work { a: a.to_rows(), u: identity_rows(m), v: identity_rows(n) };
    'outer: for t in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = w.pivot(t) else { break 'outer };
            if pi != t {
                w.swap_rows(t, pi);
            }
            if pj != t {
                w.swap_cols(t, pj);
            }
            let p = w.a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&p);
                w.row_axpy(i, t, &q);
                dirty |= !w.a[i][t].is_zero();
            }
            for j in t + 1..n {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&p);
                w.col_axpy(j, t, &q);
                dirty |= !w.a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    // row_t += row_i brings a non-multiple into row t
                    w.row_axpy(t, i, &-BigInt::one());
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    let divisors = (0..m.min(n)).map(|i| w.a[i][i].clone()).collect();
    SmithDecomposition { u: to_matrix(w.u), v: to_matrix(w.v), d: to_matrix(w.a), divisors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divs(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m).divisors.iter().map(|d| i64::try_from(d).unwrap()).collect()
    }

    #[test]
    fn documented_examples() {
        assert_eq!(divs(&IntMatrix::diagonal(&[2, 3])), vec![1, 6]);
        assert_eq!(divs(&IntMatrix::zeros(2, 2)), vec![0, 0]);
        assert_eq!(divs(&IntMatrix::diagonal(&[-2, -2])), vec![2, 2]);
    }

    #[test]
    fn transforms_reconstruct() {
        let a = IntMatrix::from_i64(&[&[4, 6, 2], &[-2, 8, 0], &[6, 0, 10]]);
        let s = smith_normal_form(&a);
        assert_eq!(&(&s.u * &a) * &s.v, s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        assert_eq!(s.d.get(0, 1), &BigInt::zero());
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let a = IntMatrix::from_i64(&[&[2, 4, 6], &[1, 2, 3]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.divisors, vec![BigInt::one(), BigInt::zero()]);
        assert_eq!(s.rank(), 1);
        assert_eq!(s.nullity(), 2);
        assert_eq!(&(&s.u * &a) * &s.v, s.d);
    }

    #[test]
    fn deterministic() {
        let a = IntMatrix::from_i64(&[&[-1, -1], &[1, -2]]);
        assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
        assert_eq!(divs(&a), vec![1, 3]);
    }
}
