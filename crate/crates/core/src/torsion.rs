//! The level-`n` torsion module `X_n = (Z/nZ)^{2d}` with an alternating
//! pairing, and its subgroups in Howell-canonical form.
//!
//! `X_n^*` is identified with `X_n` through the standard symplectic form, so
//! orthogonal complements live in the same coordinate module. A polarization
//! other than the principal one is an explicit integer matrix `Λ` and induces
//! the Gram matrix `J Λ`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cyclotomic::factorize;
use crate::error::{Error, Result};
use crate::linalg::{howell_form, kernel_mod_n, reduce_against, smith_normal_form, IntMatrix, ModMatrix};

/// Default refusal threshold for exhaustive subgroup enumeration.
pub const DEFAULT_SUBGROUP_CAP: u64 = 1_000_000;

/// Integer matrix of a polarization in symplectic coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization {
    matrix: IntMatrix,
}

impl Polarization {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() % 2 != 0 {
            return Err(Error::Dimension(format!(
                "polarization must be square of even size, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Polarization { matrix })
    }

    pub fn principal(d: usize) -> Self {
        Polarization { matrix: IntMatrix::identity(2 * d) }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows() / 2
    }

    /// `|det Λ|`.
    pub fn degree(&self) -> BigInt {
        self.matrix.determinant().abs()
    }

    /// `J Λ mod n`.
    pub fn gram(&self, n: u64) -> Result<ModMatrix> {
        let j = IntMatrix::symplectic_form(self.dim());
        (&j * &self.matrix).reduce(n)
    }

    /// `τ^T (J Λ) τ ≡ J Λ (mod n)`.
    pub fn is_compatible(&self, tau: &IntMatrix, n: u64) -> Result<bool> {
        let g = self.gram(n)?;
        let t = tau.reduce(n)?;
        Ok(&(&t.transpose() * &g) * &t == g)
    }
}

/// `X_n` of rank `2d` with pairing `<x, y> = x^T G y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionModule {
    n: u64,
    d: usize,
    gram: ModMatrix,
    nondegenerate: bool,
}

fn is_alternating(g: &ModMatrix) -> bool {
    let n = g.modulus();
    (0..g.rows()).all(|i| g.get(i, i) == 0 && (0..g.cols()).all(|j| (g.get(i, j) + g.get(j, i)) % n == 0))
}

impl TorsionModule {
    /// `X_n` with the standard symplectic pairing.
    pub fn standard(n: u64, d: usize) -> Result<Self> {
        Self::with_gram(n, d, IntMatrix::symplectic_form(d).reduce(n)?)
    }

    pub fn with_gram(n: u64, d: usize, gram: ModMatrix) -> Result<Self> {
        if d == 0 {
            return Err(Error::Dimension("dimension must be at least 1".into()));
        }
        if gram.modulus() != n || gram.rows() != 2 * d || gram.cols() != 2 * d {
            return Err(Error::Dimension(format!("Gram matrix must be {0}x{0} modulo {n}", 2 * d)));
        }
        if !is_alternating(&gram) {
            return Err(Error::NotAlternating(n));
        }
        let det = gram.lift().determinant();
        let nondegenerate = det.gcd(&BigInt::from(n)).is_one();
        Ok(TorsionModule { n, d, gram, nondegenerate })
    }

    /// `X_n` with the pairing `e_{λ,n}`; degenerate pairings are accepted and
    /// flagged.
    pub fn induced(n: u64, polarization: &Polarization) -> Result<Self> {
        Self::with_gram(n, polarization.dim(), polarization.gram(n)?)
    }

    /// Same level and rank, pairing induced by `polarization`.
    pub fn induced_pairing(&self, polarization: &Polarization) -> Result<Self> {
        if polarization.dim() != self.d {
            return Err(Error::Dimension("polarization size differs from the module rank".into()));
        }
        Self::induced(self.n, polarization)
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        2 * self.d
    }

    pub fn gram(&self) -> &ModMatrix {
        &self.gram
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    /// `n^{2d}`.
    pub fn order(&self) -> u128 {
        u128::from(self.n).pow(self.rank() as u32)
    }

    pub fn pairing(&self, x: &[u64], y: &[u64]) -> u64 {
        let gy = self.gram.apply(y);
        x.iter().zip(&gy).fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % self.n as u128) as u64
    }

    pub fn subgroup(&self, gens: &[Vec<u64>]) -> Result<Subgroup> {
        Subgroup::generated(self.n, self.rank(), gens)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_generators(&ModMatrix::identity(self.n, self.rank()))
    }

    pub fn zero(&self) -> Subgroup {
        Subgroup::from_generators(&ModMatrix::zeros(self.n, 0, self.rank()))
    }

    fn check_parent(&self, s: &Subgroup) {
        assert_eq!((s.n, s.rank), (self.n, self.rank()), "subgroup of a different module");
    }

    /// `S^⊥ = {y : <x, y> = 0 for all x in S}`.
    pub fn orthogonal_complement(&self, s: &Subgroup) -> Subgroup {
        self.check_parent(s);
        if s.gens.rows() == 0 {
            return self.whole();
        }
        let m = &s.gens * &self.gram;
        Subgroup { n: self.n, rank: self.rank(), gens: kernel_mod_n(&m) }
    }

    pub fn is_isotropic(&self, s: &Subgroup) -> bool {
        self.check_parent(s);
        let rows = s.gens.to_rows();
        rows.iter().all(|x| rows.iter().all(|y| self.pairing(x, y) == 0))
    }

    /// Isotropic and equal to its own complement.
    pub fn is_maximal_isotropic(&self, s: &Subgroup) -> Result<bool> {
        if !self.nondegenerate {
            return Err(Error::DegeneratePairing(self.n));
        }
        Ok(self.is_isotropic(s) && self.orthogonal_complement(s) == *s)
    }

    /// Exact number of subgroups of `(Z/nZ)^{2d}`.
    pub fn subgroup_count(&self) -> BigInt {
        subgroup_count(self.n, self.rank())
    }

    /// Every subgroup, duplicate-free, sorted by order and then by Howell
    /// generators.
    pub fn enumerate_subgroups(&self, cap: u64) -> Result<Vec<Subgroup>> {
        let estimate = self.subgroup_count();
        if estimate > BigInt::from(cap) {
            return Err(Error::EnumerationCap { estimate: estimate.to_string(), cap });
        }
        let rank = self.rank();
        let zero = self.zero();
        // every subgroup is a join of cyclic ones
        let mut cyclic: Vec<Subgroup> = Vec::new();
        let mut seen_cyclic = HashSet::new();
        for v in all_vectors(self.n, rank) {
            let c = Subgroup::generated(self.n, rank, &[v]).expect("valid width");
            if seen_cyclic.insert(c.gens.clone()) && c != zero {
                cyclic.push(c);
            }
        }
        let mut seen = HashSet::new();
        seen.insert(zero.gens.clone());
        let mut queue = VecDeque::from([zero]);
        let mut out = Vec::new();
        while let Some(h) = queue.pop_front() {
            for c in &cyclic {
                if h.contains_subgroup(c) {
                    continue;
                }
                let joined = h.join(c);
                if seen.insert(joined.gens.clone()) {
                    queue.push_back(joined);
                }
            }
            out.push(h);
        }
        out.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.gens.cmp(&b.gens)));
        Ok(out)
    }

    /// A maximal isotropic `H` with `S^⊥ ⊆ H ⊆ S`, built greedily from `S^⊥`
    /// by adding the first Howell generator of `H^⊥` not yet in `H`.
    pub fn extend_to_maximal_isotropic(&self, s: &Subgroup) -> Result<Subgroup> {
        if !self.nondegenerate {
            return Err(Error::DegeneratePairing(self.n));
        }
        let perp = self.orthogonal_complement(s);
        if !s.contains_subgroup(&perp) {
            return Err(Error::Precondition("S^⊥ is not contained in S".into()));
        }
        let mut h = perp;
        loop {
            let hp = self.orthogonal_complement(&h);
            if hp == h {
                return Ok(h);
            }
            let g = (0..hp.gens.rows())
                .map(|i| hp.gens.row(i).to_vec())
                .find(|g| !h.contains(g))
                .expect("H^⊥ strictly contains H");
            h = h.join(&Subgroup::generated(self.n, self.rank(), &[g])?);
        }
    }
}

/// All vectors of `(Z/nZ)^rank` in lexicographic order.
pub fn all_vectors(n: u64, rank: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = (n as u128).pow(rank as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0u64; rank];
        for slot in v.iter_mut().rev() {
            *slot = (idx % n as u128) as u64;
            idx /= n as u128;
        }
        v
    })
}

fn gaussian_binomial(a: u64, b: u64, p: &BigInt) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..b {
        num *= p.pow((a - i) as u32) - 1;
        den *= p.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Subgroups of `(Z/p^e)^r`, summing Birkhoff's count over all subgroup types
/// (indexed by conjugate partitions `μ'` with `r >= μ'_1 >= ... >= μ'_e`).
fn homocyclic_subgroup_count(p: u64, e: u32, r: u64) -> BigInt {
    let pb = BigInt::from(p);
    let mut total = BigInt::zero();
    let mut mu = vec![0u64; e as usize];
    loop {
        let mut term = BigInt::one();
        for i in 0..e as usize {
            let next = mu.get(i + 1).copied().unwrap_or(0);
            term *= pb.pow((next * (r - mu[i])) as u32);
            term *= gaussian_binomial(r - next, mu[i] - next, &pb);
        }
        total += term;
        // next nonincreasing sequence bounded by r
        let Some(pos) = (0..e as usize).rev().find(|&i| mu[i] < if i == 0 { r } else { mu[i - 1] }) else {
            break;
        };
        mu[pos] += 1;
        for x in mu.iter_mut().skip(pos + 1) {
            *x = 0;
        }
    }
    total
}

/// Number of subgroups of `(Z/nZ)^rank`.
pub fn subgroup_count(n: u64, rank: usize) -> BigInt {
    factorize(n).into_iter().map(|(p, e)| homocyclic_subgroup_count(p, e, rank as u64)).product()
}

/// A subgroup of `(Z/nZ)^rank`, stored as Howell-form generator rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    n: u64,
    rank: usize,
    gens: ModMatrix,
}

impl Subgroup {
    pub fn from_generators(gens: &ModMatrix) -> Self {
        Subgroup { n: gens.modulus(), rank: gens.cols(), gens: howell_form(gens) }
    }

    pub fn generated(n: u64, rank: usize, gens: &[Vec<u64>]) -> Result<Self> {
        Ok(Self::from_generators(&ModMatrix::from_rows(n, rank, gens)?))
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Canonical generators.
    pub fn gens(&self) -> &ModMatrix {
        &self.gens
    }

    /// Product of `n / pivot` over the Howell rows.
    pub fn order(&self) -> u128 {
        (0..self.gens.rows())
            .map(|i| {
                let pivot = self.gens.row(i).iter().find(|&&x| x != 0).copied().expect("nonzero row");
                u128::from(self.n / pivot)
            })
            .product()
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        reduce_against(&self.gens, v).iter().all(|&x| x == 0)
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        (0..other.gens.rows()).all(|i| self.contains(other.gens.row(i)))
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        Self::from_generators(&self.gens.stack(&other.gens))
    }

    /// `τ x = x` for every `x` in the subgroup (`tau` reduced mod `n`).
    pub fn is_fixed_by(&self, tau: &ModMatrix) -> bool {
        (0..self.gens.rows()).all(|i| tau.apply(self.gens.row(i)) == self.gens.row(i))
    }

    /// Image under an automorphism `u` of `X_n`.
    pub fn transform(&self, u: &ModMatrix) -> Subgroup {
        let rows: Vec<Vec<u64>> = (0..self.gens.rows()).map(|i| u.apply(self.gens.row(i))).collect();
        Self::generated(self.n, self.rank, &rows).expect("consistent widths")
    }

    /// Invariant factors `> 1` in ascending order: the subgroup is
    /// `⊕ Z/(n/d_i)` for the Smith divisors `d_i` of `[gens; n I]`.
    pub fn structure(&self) -> Vec<u64> {
        if self.n == 1 {
            return Vec::new();
        }
        let stacked = if self.gens.rows() == 0 {
            ModMatrix::zeros(self.n, 0, self.rank)
        } else {
            self.gens.clone()
        };
        let mut rows: Vec<Vec<BigInt>> =
            stacked.to_rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
        for i in 0..self.rank {
            rows.push((0..self.rank).map(|j| if i == j { BigInt::from(self.n) } else { BigInt::zero() }).collect());
        }
        let snf = smith_normal_form(&IntMatrix::from_rows(&rows).expect("non-empty"));
        let mut out: Vec<u64> = snf
            .divisors
            .iter()
            .map(|d| self.n / d.to_u64().expect("divisor of n"))
            .filter(|&q| q > 1)
            .collect();
        out.sort_unstable();
        out
    }

    /// All elements, by closure under the generators. Intended for small
    /// subgroups.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0u64; self.rank]];
        for i in 0..self.gens.rows() {
            let g = self.gens.row(i);
            let mut next = Vec::new();
            for base in &out {
                let mut v = base.clone();
                loop {
                    next.push(v.clone());
                    v = v.iter().zip(g).map(|(&a, &b)| (a + b) % self.n).collect();
                    if v == *base {
                        break;
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            out = next;
        }
        out.sort_unstable();
        out
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gens.rows() == 0 {
            return write!(f, "0");
        }
        let rows: Vec<String> = (0..self.gens.rows())
            .map(|i| format!("({})", self.gens.row(i).iter().map(u64::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "span{{{}}}", rows.join(", "))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} mod {}", self.n)
    }
}

/// `X_n^τ`: the kernel of `τ - I` modulo `n`.
pub fn fixed_subgroup(tau: &IntMatrix, n: u64) -> Result<Subgroup> {
    let m = tau.minus_identity().reduce(n)?;
    Ok(Subgroup { n, rank: tau.rows(), gens: kernel_mod_n(&m) })
}

/// Subgroups together with their orthogonal complements, for repeated
/// witness searches against many generators.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    module: TorsionModule,
    entries: Vec<(Subgroup, Subgroup)>,
}

impl SubgroupLattice {
    pub fn build(module: &TorsionModule, cap: u64) -> Result<Self> {
        let entries = module
            .enumerate_subgroups(cap)?
            .into_iter()
            .map(|s| {
                let perp = module.orthogonal_complement(&s);
                (s, perp)
            })
            .collect();
        Ok(SubgroupLattice { module: module.clone(), entries })
    }

    pub fn module(&self) -> &TorsionModule {
        &self.module
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Subgroup, Subgroup)> {
        self.entries.iter()
    }

    /// First subgroup (in lattice order) with both it and its complement
    /// fixed pointwise by `tau` (already reduced mod `n`).
    pub fn first_witness(&self, tau: &ModMatrix) -> Option<&Subgroup> {
        self.entries.iter().find(|(s, perp)| s.is_fixed_by(tau) && perp.is_fixed_by(tau)).map(|(s, _)| s)
    }
}
