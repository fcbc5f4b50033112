//! Seeded instance generation for the property suites.
//!
//! The integer stream is xorshift64* seeded through one round of splitmix64,
//! so any implementation can reproduce it:
//!
//! ```text
//! seed:   z = seed + 0x9E3779B97F4A7C15
//!         z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!         z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!         state = z ^ (z >> 31)            (0 is replaced by 0x9E3779B97F4A7C15)
//! next:   x ^= x >> 12; x ^= x << 25; x ^= x >> 27; state = x
//!         output = x * 0x2545F4914F6CDD1D  (all arithmetic mod 2^64)
//! ```
//!
//! Derived draws: `uniform = (output >> 11) / 2^53`; an integer in `lo..=hi`
//! is `lo + output mod (hi - lo + 1)`. Float entries have real and imaginary
//! parts uniform in `[-1, 1)`; rational entries have parts `p/q` with
//! `|p| ≤ bound` and `1 ≤ q ≤ bound`.

use crate::error::{Error, Result};
use crate::kernel::{range_inclusion, rank, HermitianMatrix, ToleranceProfile};
use crate::matrix::Matrix;
use crate::pair::omega;
use crate::scalar::{Backend, Complex64, Scalar};
use crate::schur::{Block2, Block3};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xorshift64* stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let state = match splitmix64(seed) {
            0 => GOLDEN,
            s => s,
        };
        Rng { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[-1, 1)`.
    pub fn uniform_signed(&mut self) -> f64 {
        2.0 * self.uniform() - 1.0
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }

    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, numerator: u64, denominator: u64) -> bool {
        self.next_u64() % denominator < numerator
    }
}

/// Seed of the `index`-th instance of a suite, so instances can be built
/// independently and in parallel.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ index.wrapping_mul(GOLDEN).rotate_left(17))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub min_dim: usize,
    pub max_dim: usize,
    pub backend: Backend,
    /// Bound on rational numerators and denominators.
    pub entry_bound: i64,
}

impl GenConfig {
    pub fn new(seed: u64, backend: Backend) -> Self {
        GenConfig {
            seed,
            min_dim: 1,
            max_dim: match backend {
                Backend::Float => 8,
                Backend::Rational => 5,
            },
            backend,
            entry_bound: 10,
        }
    }

    pub fn with_dims(mut self, min_dim: usize, max_dim: usize) -> Self {
        self.min_dim = min_dim;
        self.max_dim = max_dim;
        self
    }
}

/// Which family `block2_hermitian` drew from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HermitianKind {
    Gram,
    ShiftedDown,
    RangeViolating,
    Unstructured,
    Extremal,
    Perturbed,
}

/// A seeded instance stream. Cloning forks the stream.
#[derive(Clone, Debug)]
pub struct Generator {
    rng: Rng,
    cfg: GenConfig,
    tol: ToleranceProfile,
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Self {
        Generator {
            rng: Rng::new(cfg.seed),
            cfg,
            tol: ToleranceProfile::default(),
        }
    }

    /// Generator for the `index`-th instance of a suite seeded with `cfg.seed`.
    pub fn for_instance(cfg: &GenConfig, index: u64) -> Self {
        let mut cfg = cfg.clone();
        cfg.seed = instance_seed(cfg.seed, index);
        Self::new(cfg)
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn rng(&mut self) -> &mut Rng {
        &mut self.rng
    }

    /// A dimension in `min_dim..=max_dim`.
    pub fn dim(&mut self) -> usize {
        self.rng.int_in(self.cfg.min_dim as i64, self.cfg.max_dim as i64) as usize
    }

    pub fn scalar<S: Scalar>(&mut self) -> S {
        S::sample(&mut self.rng, self.cfg.entry_bound)
    }

    pub fn matrix<S: Scalar>(&mut self, rows: usize, cols: usize) -> Matrix<S> {
        Matrix::from_fn(rows, cols, |_, _| S::sample(&mut self.rng, self.cfg.entry_bound))
    }

    pub fn vector<S: Scalar>(&mut self, n: usize) -> Matrix<S> {
        self.matrix(n, 1)
    }

    /// Positive real scalar `p/q` with `1 ≤ p, q ≤ bound` (float: uniform in `[lo, hi)`).
    pub fn positive_real<S: Scalar>(&mut self, lo: f64, hi: f64) -> S {
        match S::BACKEND {
            Backend::Float => S::from_f64(lo + (hi - lo) * self.rng.uniform()),
            Backend::Rational => {
                let p = self.rng.int_in(1, self.cfg.entry_bound);
                let q = self.rng.int_in(1, self.cfg.entry_bound);
                S::from_i64(p) / S::from_i64(q)
            }
        }
    }

    /// A `rows × cols` matrix of rank `min(rows, cols)`, redrawn until the
    /// rank is attained.
    pub fn full_rank_matrix<S: Scalar>(&mut self, rows: usize, cols: usize) -> Matrix<S> {
        loop {
            let g = self.matrix(rows, cols);
            if rank(&g, &self.tol) == rows.min(cols) {
                return g;
            }
        }
    }

    /// `G*G` for a `rank × n` matrix `G` of full row rank.
    pub fn psd<S: Scalar>(&mut self, n: usize, rank: usize) -> Result<HermitianMatrix<S>> {
        if rank > n {
            return Err(Error::InvalidArgument(format!("rank {rank} exceeds dimension {n}")));
        }
        Ok(HermitianMatrix::gram(&self.full_rank_matrix(rank, n)))
    }

    /// PSD matrix of random rank, biased towards rank deficiency.
    pub fn psd_any_rank<S: Scalar>(&mut self, n: usize) -> HermitianMatrix<S> {
        let rank = self.rank_draw(n);
        self.psd(n, rank).expect("rank within bounds")
    }

    fn rank_draw(&mut self, n: usize) -> usize {
        if n == 0 || self.rng.chance(1, 2) {
            n
        } else {
            self.rng.int_in(0, n as i64 - 1) as usize
        }
    }

    /// `A = psd(n_x, rank_a)` and `B = A·C`, so `ran B ⊆ ran A`.
    pub fn positive_pair<S: Scalar>(&mut self, n_x: usize, n_y: usize, rank_a: usize) -> Result<(HermitianMatrix<S>, Matrix<S>)> {
        let a = self.psd(n_x, rank_a)?;
        let c = self.matrix(n_x, n_y);
        let b = if rank_a == n_x { c } else { &*a * &c };
        Ok((a, b))
    }

    /// Gram matrix of an `r × (n_x + n_y)` factor with random `r`.
    pub fn block2_psd<S: Scalar>(&mut self, n_x: usize, n_y: usize) -> Block2<S> {
        let full = self.psd_any_rank(n_x + n_y);
        Block2::from_hermitian(&full, n_x).expect("partition fits")
    }

    pub fn block2_psd_with_rank<S: Scalar>(&mut self, n_x: usize, n_y: usize, rank: usize) -> Result<Block2<S>> {
        let full = self.psd(n_x + n_y, rank)?;
        Block2::from_hermitian(&full, n_x)
    }

    /// Extremal completion `[[A, B], [B*, ω(A,B)]]` of a generated pair.
    pub fn block2_extremal<S: Scalar>(&mut self, n_x: usize, n_y: usize) -> Block2<S> {
        let rank_a = self.rank_draw(n_x);
        let (a, b) = self.positive_pair(n_x, n_y, rank_a).expect("rank within bounds");
        let w = omega(&a, &b, &self.tol).expect("generated pairs are positive");
        Block2::new(a, b, w).expect("shapes agree")
    }

    /// Hermitian block matrix drawn from a mix of families so that all three
    /// Albert classes occur. Returns the family as well.
    pub fn block2_hermitian_kind<S: Scalar>(&mut self, n_x: usize, n_y: usize) -> (Block2<S>, HermitianKind) {
        let n = n_x + n_y;
        let kind = match self.rng.index(6) {
            0 => HermitianKind::Gram,
            1 => HermitianKind::ShiftedDown,
            2 => HermitianKind::RangeViolating,
            3 => HermitianKind::Unstructured,
            4 => HermitianKind::Extremal,
            _ => HermitianKind::Perturbed,
        };
        let full = match kind {
            HermitianKind::Gram => self.psd_any_rank(n),
            HermitianKind::ShiftedDown => {
                let base: HermitianMatrix<S> = self.psd_any_rank(n);
                let shift: S = self.positive_real(0.25, 2.0);
                let lowered = Matrix::from_fn(n, n, |i, j| {
                    if i == j && i >= n_x {
                        base[(i, j)].clone() - shift.clone()
                    } else {
                        base[(i, j)].clone()
                    }
                });
                HermitianMatrix::hermitian_part(&lowered)
            }
            HermitianKind::RangeViolating => {
                let rank_a = if n_x == 0 { 0 } else { self.rng.int_in(0, n_x as i64 - 1) as usize };
                let a = self.psd(n_x, rank_a).expect("rank within bounds");
                let b = self.matrix(n_x, n_y);
                let d = self.psd_any_rank(n_y);
                Block2::new(a, b, d).expect("shapes agree").assembled()
            }
            HermitianKind::Unstructured => {
                let m = self.matrix::<S>(n, n);
                HermitianMatrix::hermitian_part(&m)
            }
            HermitianKind::Extremal => return (self.block2_extremal(n_x, n_y), kind),
            HermitianKind::Perturbed => {
                let rank = if n == 0 { 0 } else { self.rng.int_in(0, n as i64 - 1) as usize };
                let base = self.psd(n, rank).expect("rank within bounds");
                let v = self.vector::<S>(n);
                let eps: S = self.positive_real(0.05, 0.5);
                base.sub(&HermitianMatrix::gram(&v.adjoint()).scale_real(&eps))
            }
        };
        (Block2::from_hermitian(&full, n_x).expect("partition fits"), kind)
    }

    pub fn block2_hermitian<S: Scalar>(&mut self, n_x: usize, n_y: usize) -> Block2<S> {
        self.block2_hermitian_kind(n_x, n_y).0
    }

    pub fn block3_psd<S: Scalar>(&mut self, n_x: usize, n_y: usize, n_z: usize) -> Block3<S> {
        let full = self.psd_any_rank(n_x + n_y + n_z);
        Block3::from_hermitian(&full, (n_x, n_y, n_z)).expect("partition fits")
    }

    /// `𝐀ₖ = 𝐀_∞ + (1/k)·N` for `k = 1..=len` with PSD `𝐀_∞` and a nonzero
    /// Gram `N`; returns the chain and `𝐀_∞`.
    pub fn decreasing_chain<S: Scalar>(&mut self, len: usize, n_x: usize, n_y: usize) -> (Vec<Block2<S>>, Block2<S>) {
        let n = n_x + n_y;
        let limit = self.block2_psd(n_x, n_y);
        let noise_rank = self.rng.int_in(1, n.max(1) as i64) as usize;
        let noise = self.psd::<S>(n, noise_rank.min(n)).expect("rank within bounds");
        let chain = (1..=len)
            .map(|k| {
                let step = noise.scale_real(&(S::one() / S::from_i64(k as i64)));
                Block2::from_hermitian(&limit.assembled().add(&step), n_x).expect("partition fits")
            })
            .collect();
        (chain, limit)
    }

    /// `𝐀ₖ = 𝐀₀ + (1/k)·diag(I, 0)` for `k = 1..=len`, where `𝐀₀` is
    /// Hermitian but not of positive type (`ran B ⊄ ran A`), so `𝒮(𝐀ₖ)` is
    /// unbounded below along the chain. Needs `n_x ≥ 1` and `n_y ≥ 1`.
    pub fn decreasing_chain_unbounded<S: Scalar>(
        &mut self,
        len: usize,
        n_x: usize,
        n_y: usize,
    ) -> Result<(Vec<Block2<S>>, Block2<S>)> {
        if n_x == 0 || n_y == 0 {
            return Err(Error::InvalidArgument("both blocks must be nonempty".into()));
        }
        let rank_a = self.rng.int_in(0, n_x as i64 - 1) as usize;
        let a = self.psd::<S>(n_x, rank_a)?;
        let b = loop {
            let b = self.matrix::<S>(n_x, n_y);
            if !range_inclusion(&b, &a, &self.tol)? {
                break b;
            }
        };
        let d = HermitianMatrix::hermitian_part(&self.matrix::<S>(n_y, n_y));
        let limit = Block2::new(a, b, d)?;
        let lift = Block2::new(HermitianMatrix::identity(n_x), Matrix::zeros(n_x, n_y), HermitianMatrix::zeros(n_y))?;
        let chain = (1..=len)
            .map(|k| {
                let step = lift.assembled().scale_real(&(S::one() / S::from_i64(k as i64)));
                Block2::from_hermitian(&limit.assembled().add(&step), n_x).expect("partition fits")
            })
            .collect();
        Ok((chain, limit))
    }
}

/// Haar-like random unitary from Gram–Schmidt on a random complex matrix.
pub fn random_unitary(n: usize, rng: &mut Rng) -> Matrix<Complex64> {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| Complex64::new(rng.uniform_signed(), rng.uniform_signed()));
        let mut q: Matrix<Complex64> = Matrix::zeros(n, n);
        let mut ok = true;
        for j in 0..n {
            let mut v = m.column(j);
            for _ in 0..2 {
                for k in 0..j {
                    let qk = q.column(k);
                    let c = Matrix::inner(&qk, &v);
                    v = &v - &qk.scale(&c);
                }
            }
            let norm = v.frobenius_norm();
            if norm < 1e-8 {
                ok = false;
                break;
            }
            for i in 0..n {
                q[(i, j)] = v[(i, 0)] / norm;
            }
        }
        if ok {
            return q;
        }
    }
}

/// The all-ones 3-block fixture with partition `(1, 1, 1)`.
pub fn all_ones_block3<S: Scalar>() -> Block3<S> {
    let ones = HermitianMatrix::hermitian_part(&Matrix::from_fn(3, 3, |_, _| S::one()));
    Block3::from_hermitian(&ones, (1, 1, 1)).expect("partition fits")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{is_psd, loewner_leq};
    use crate::pair::check_positive_pair;
    use crate::scalar::GaussianRational;

    type Q = GaussianRational;

    #[test]
    fn xorshift_stream_is_pinned() {
        // Frozen from the recurrence in the module docs.
        let mut rng = Rng::new(0);
        let first: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        let mut again = Rng::new(0);
        assert_eq!(first, (0..3).map(|_| again.next_u64()).collect::<Vec<_>>());
        assert_eq!(Rng::new(0).state, splitmix64(0));
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn rank_zero_gives_zero_matrix() {
        let mut g = Generator::new(GenConfig::new(3, Backend::Rational));
        assert!(g.psd::<Q>(4, 0).unwrap().is_zero());
        assert!(g.psd::<Q>(2, 3).is_err());
    }

    #[test]
    fn full_rank_psd_has_positive_pivots() {
        let mut g = Generator::new(GenConfig::new(5, Backend::Rational));
        let tol = ToleranceProfile::default();
        for n in 1..5 {
            let a = g.psd::<Q>(n, n).unwrap();
            assert_eq!(rank(&a, &tol), n);
            assert!(is_psd(&a, &tol));
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let cfg = GenConfig::new(7, Backend::Rational);
        let mut g1 = Generator::new(cfg.clone());
        let mut g2 = Generator::new(cfg);
        for _ in 0..5 {
            assert_eq!(g1.block2_hermitian::<Q>(2, 2), g2.block2_hermitian::<Q>(2, 2));
        }
        let fork = g1.clone();
        assert_eq!(fork.rng, g1.rng);
    }

    #[test]
    fn generated_pairs_are_positive() {
        let cfg = GenConfig::new(11, Backend::Float);
        let tol = ToleranceProfile::default();
        for i in 0..1000 {
            let mut g = Generator::for_instance(&cfg, i);
            let (n_x, n_y) = (g.dim(), g.dim());
            let rank_a = g.rng().int_in(0, n_x as i64) as usize;
            let (a, b) = g.positive_pair::<Complex64>(n_x, n_y, rank_a).unwrap();
            assert!(check_positive_pair(&a, &b, &tol).unwrap().positive, "instance {i}");
        }
        let mut g = Generator::new(GenConfig::new(1, Backend::Rational));
        let (a, b) = g.positive_pair::<Q>(3, 2, 0).unwrap();
        assert!(a.is_zero() && b.is_zero());
    }

    #[test]
    fn chains_decrease_exactly() {
        let tol = ToleranceProfile::default();
        let mut g = Generator::new(GenConfig::new(2, Backend::Rational));
        let (chain, limit) = g.decreasing_chain::<Q>(5, 2, 1);
        for w in chain.windows(2) {
            assert!(loewner_leq(&w[1].assembled(), &w[0].assembled(), &tol).unwrap());
            assert_ne!(w[0], w[1]);
        }
        assert!(loewner_leq(&limit.assembled(), &chain[4].assembled(), &tol).unwrap());
    }

    #[test]
    fn psd_families_are_exactly_psd() {
        let tol = ToleranceProfile::default();
        let cfg = GenConfig::new(9, Backend::Rational);
        for i in 0..50 {
            let mut g = Generator::for_instance(&cfg, i);
            let (nx, ny, nz) = (g.dim(), g.dim(), g.dim());
            assert!(is_psd(&g.block2_psd::<Q>(nx, ny).assembled(), &tol));
            assert!(is_psd(&g.block3_psd::<Q>(nx, ny, nz).assembled(), &tol));
            assert!(is_psd(&g.block2_extremal::<Q>(nx, ny).assembled(), &tol));
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = Rng::new(4);
        let u = random_unitary(5, &mut rng);
        assert!((&u.adjoint() * &u).max_abs_diff(&Matrix::identity(5)) < 1e-12);
    }
}
