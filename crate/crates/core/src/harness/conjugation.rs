//! Random symplectic change of basis.
//!
//! `U` is a product of transvections `x ↦ x + c ω(v, x) v` (matrix
//! `I + c v v^T J`, inverse `I - c v v^T J`) and plane permutations, so the
//! inverse is accumulated exactly alongside `U`.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::Result;
use crate::inertia::InertiaGenerator;
use crate::linalg::IntMatrix;

/// Shape of the random factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjugationParams {
    pub transvections: usize,
    /// Entries of `v` are drawn from `[-bound, bound]`.
    pub entry_bound: i64,
    pub permutations: bool,
}

impl Default for ConjugationParams {
    fn default() -> Self {
        ConjugationParams { transvections: 4, entry_bound: 1, permutations: true }
    }
}

/// The per-trial generator: ChaCha8 keyed by `seed`, stream `trial`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn transvection(v: &[i64], c: i64, j: &IntMatrix) -> IntMatrix {
    let n = v.len();
    let col = IntMatrix::from_rows(&v.iter().map(|&x| vec![x]).collect::<Vec<_>>()).expect("column");
    let outer = &(&col * &col.transpose()) * j;
    &IntMatrix::identity(n) + &outer.scale(&BigInt::from(c))
}

fn plane_permutation(perm: &[usize]) -> IntMatrix {
    let d = perm.len();
    let mut m = IntMatrix::zeros(2 * d, 2 * d);
    for (i, &k) in perm.iter().enumerate() {
        m.set(k, i, BigInt::from(1));
        m.set(k + d, i + d, BigInt::from(1));
    }
    m
}

/// A random `U ∈ Sp_{2d}(Z)` with its inverse.
pub fn random_symplectic<R: Rng>(d: usize, rng: &mut R, params: &ConjugationParams) -> (IntMatrix, IntMatrix) {
    let j = IntMatrix::symplectic_form(d);
    let mut u = IntMatrix::identity(2 * d);
    let mut u_inv = IntMatrix::identity(2 * d);
    if params.permutations && d > 1 {
        let mut perm: Vec<usize> = (0..d).collect();
        perm.shuffle(rng);
        let p = plane_permutation(&perm);
        u = &p * &u;
        u_inv = &u_inv * &p.transpose();
    }
    for _ in 0..params.transvections {
        let v: Vec<i64> = loop {
            let v: Vec<i64> = (0..2 * d).map(|_| rng.gen_range(-params.entry_bound..=params.entry_bound)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let c = if rng.gen_bool(0.5) { 1 } else { -1 };
        u = &transvection(&v, c, &j) * &u;
        u_inv = &u_inv * &transvection(&v, -c, &j);
    }
    (u, u_inv)
}

/// A conjugate of `base` with the change of basis that produced it.
#[derive(Clone, Debug)]
pub struct Conjugate {
    pub generator: InertiaGenerator,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
}

pub fn random_symplectic_conjugate_with(
    base: &InertiaGenerator,
    rng: &mut ChaCha8Rng,
    params: &ConjugationParams,
) -> Result<Conjugate> {
    let (u, u_inv) = random_symplectic(base.dim(), rng, params);
    let generator = base.conjugate(&u, &u_inv)?;
    Ok(Conjugate { generator, u, u_inv })
}

/// `U τ U^{-1}` for a random `U` drawn from stream 0 of `seed`.
pub fn random_symplectic_conjugate(base: &InertiaGenerator, seed: u64) -> Result<Conjugate> {
    random_symplectic_conjugate_with(base, &mut trial_rng(seed, 0), &ConjugationParams::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inertia::{classify, criterion_report};
    use crate::linalg::char_poly;
    use crate::torsion::Polarization;

    #[test]
    fn factors_are_symplectic_with_exact_inverse() {
        for d in 1..=3 {
            let j = IntMatrix::symplectic_form(d);
            for trial in 0..20 {
                let mut rng = trial_rng(5, trial);
                let (u, u_inv) = random_symplectic(d, &mut rng, &ConjugationParams::default());
                assert_eq!(&(&u.transpose() * &j) * &u, j);
                assert!((&u * &u_inv).is_identity());
            }
        }
    }

    #[test]
    fn central_bases_are_fixed() {
        for seed in [0, 1, 42] {
            let i = classify(&IntMatrix::identity(2), 0).unwrap();
            assert!(random_symplectic_conjugate(&i, seed).unwrap().generator.tau().is_identity());
            let m = classify(&-&IntMatrix::identity(4), 0).unwrap();
            assert_eq!(random_symplectic_conjugate(&m, seed).unwrap().generator.tau(), &-&IntMatrix::identity(4));
        }
    }

    #[test]
    fn order_three_conjugate_keeps_verdicts() {
        let base = classify(&IntMatrix::from_i64(&[&[0, -1], &[1, -1]]), 0).unwrap();
        let c = random_symplectic_conjugate(&base, 42).unwrap();
        assert_eq!(char_poly(c.generator.tau()), char_poly(base.tau()));
        let pol = Polarization::principal(1);
        let ns = [2, 3, 4, 5, 7];
        let a = criterion_report(&base, &ns, &pol).unwrap();
        let b = criterion_report(&c.generator, &ns, &pol).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            random_symplectic_conjugate(&base, 42).unwrap().generator.tau(),
            c.generator.tau()
        );
    }

    #[test]
    fn streams_differ_by_trial() {
        let mut a = trial_rng(9, 0);
        let mut b = trial_rng(9, 1);
        assert_ne!(a.gen::<u64>(), b.gen::<u64>());
    }
}
