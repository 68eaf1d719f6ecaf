//! Exact matrix permanents.
//!
//! [`permanent_naive`] is the definition (a sum over all `n!` permutations)
//! and serves as the oracle; [`permanent_ryser`] is Ryser's
//! inclusion–exclusion formula walked in Gray-code order, so consecutive
//! subsets differ in one column and the row sums update in `O(n)`.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{too_large, Error, Result};
use crate::exact::{binomial, BigCount};

pub const MAX_NAIVE: usize = 10;
pub const MAX_RYSER: usize = 30;
pub const MAX_SUBPERMANENT: usize = 8;

/// Square matrix of nonnegative integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<u64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::BadParams(format!(
                "{} entries do not form a {n}x{n} matrix",
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadParams("matrix is not square".into()));
        }
        Ok(Self {
            n,
            entries: rows.concat(),
        })
    }

    /// 0/1 matrix from row bitmasks.
    pub fn from_masks(n: usize, rows: &[u64]) -> Self {
        let entries = rows
            .iter()
            .flat_map(|&r| (0..n).map(move |j| r >> j & 1))
            .collect();
        Self { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn ones(n: usize) -> Self {
        Self {
            n,
            entries: vec![1; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn plus_identity(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.entries[i * self.n + i] += 1;
        }
        m
    }

    /// The submatrix on the given rows and columns (which must have equal
    /// length).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        assert_eq!(rows.len(), cols.len(), "submatrix must be square");
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j)))
            .collect();
        Self {
            n: rows.len(),
            entries,
        }
    }

    /// Rows permuted by `row_perm` and columns by `col_perm`:
    /// `out[i][j] = self[row_perm[i]][col_perm[j]]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        self.submatrix(row_perm, col_perm)
    }

    /// Block-diagonal composition `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut m = Self::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j));
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                m.set(self.n + i, self.n + j, other.get(i, j));
            }
        }
        m
    }

    pub fn row_sums(&self) -> Vec<u64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j)).sum())
            .collect()
    }
}

/// Two-limb accumulator: machine-word sums that spill into big integers on
/// overflow.
#[derive(Default)]
struct Acc {
    small: u128,
    big: BigUint,
}

impl Acc {
    #[inline]
    fn add_small(&mut self, x: u128) {
        match self.small.checked_add(x) {
            Some(s) => self.small = s,
            None => {
                self.big += self.small;
                self.small = x;
            }
        }
    }

    fn add_big(&mut self, x: BigUint) {
        self.big += x;
    }

    fn total(self) -> BigUint {
        self.big + self.small
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.big += other.big;
        self.add_small(other.small);
        self
    }
}

/// Product of the entries as a big integer, used when `u128` overflows.
fn big_product(xs: &[u128]) -> BigUint {
    xs.iter().fold(BigUint::one(), |p, &x| p * x)
}

/// `per(M) = Σ_σ Π_i m_{i,σ(i)}` by enumerating every permutation.
pub fn permanent_naive(m: &IntMatrix) -> Result<BigCount> {
    too_large("naive permanent", m.n, MAX_NAIVE)?;
    let n = m.n;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = Acc::default();
    loop {
        let terms: Vec<u128> = (0..n).map(|i| m.get(i, perm[i]) as u128).collect();
        match terms.iter().try_fold(1u128, |p, &x| p.checked_mul(x)) {
            Some(p) => acc.add_small(p),
            None => acc.add_big(big_product(&terms)),
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(acc.total())
}

/// Advances to the lexicographically next permutation; false after the last.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

const RYSER_CHUNK_BITS: usize = 14;

/// Ryser's formula
/// `per(M) = (-1)^n Σ_{S ⊆ [n]} (-1)^{|S|} Π_i Σ_{j∈S} m_ij`
/// over a Gray-code walk of the column subsets. Large instances split the
/// walk into chunks evaluated in parallel; each chunk rebuilds its starting
/// row sums from the Gray code of its first index.
pub fn permanent_ryser(m: &IntMatrix) -> Result<BigCount> {
    too_large("Ryser permanent", m.n, MAX_RYSER)?;
    let n = m.n;
    if n == 0 {
        return Ok(BigUint::one());
    }
    let total: u64 = 1 << n;
    let chunk: u64 = 1 << RYSER_CHUNK_BITS.min(n);
    let chunks = total / chunk;
    // column-major copy so a Gray step touches contiguous memory
    let cols: Vec<Vec<u128>> = (0..n)
        .map(|j| (0..n).map(|i| m.get(i, j) as u128).collect())
        .collect();

    let run = |c: u64| -> (Acc, Acc) {
        let start = c * chunk;
        let end = start + chunk;
        let mut pos = Acc::default();
        let mut neg = Acc::default();
        let mut gray = start ^ (start >> 1);
        let mut sums = vec![0u128; n];
        for (j, col) in cols.iter().enumerate() {
            if gray >> j & 1 == 1 {
                for (s, &x) in sums.iter_mut().zip(col) {
                    *s += x;
                }
            }
        }
        let mut add_term = |gray: u64, sums: &[u128]| {
            // (-1)^(n - |S|)
            let target = if (n as u32 - gray.count_ones()).is_multiple_of(2) {
                &mut pos
            } else {
                &mut neg
            };
            let mut p = 1u128;
            for &s in sums {
                if s == 0 {
                    return;
                }
                match p.checked_mul(s) {
                    Some(q) => p = q,
                    None => {
                        target.add_big(big_product(sums));
                        return;
                    }
                }
            }
            target.add_small(p);
        };
        if start > 0 {
            add_term(gray, &sums);
        }
        for k in start + 1..end {
            let j = k.trailing_zeros() as usize;
            let col = &cols[j];
            if gray >> j & 1 == 1 {
                for (s, &x) in sums.iter_mut().zip(col) {
                    *s -= x;
                }
            } else {
                for (s, &x) in sums.iter_mut().zip(col) {
                    *s += x;
                }
            }
            gray ^= 1 << j;
            add_term(gray, &sums);
        }
        (pos, neg)
    };

    let (pos, neg) = if chunks == 1 {
        run(0)
    } else {
        (0..chunks)
            .into_par_iter()
            .map(run)
            .reduce(|| (Acc::default(), Acc::default()), |a, b| (a.0.merge(b.0), a.1.merge(b.1)))
    };
    let value = BigInt::from_biguint(Sign::Plus, pos.total()) - BigInt::from(neg.total());
    assert!(value.sign() != Sign::Minus, "Ryser sum went negative");
    Ok(value.magnitude().clone())
}

/// Both sides of
/// `C(n,k)·per(M) = Σ_{S,S' ∈ C([n],k)} per(M(S,S'))·per(M(S̄,S̄'))`.
pub fn subpermanent_sides(m: &IntMatrix, k: usize) -> Result<(BigCount, BigCount)> {
    let n = m.n;
    if k > n {
        return Err(Error::BadK { k, n });
    }
    too_large("subpermanent identity", n, MAX_SUBPERMANENT)?;
    let lhs = binomial(n, k) * permanent_ryser(m)?;
    let subsets: Vec<(Vec<usize>, Vec<usize>)> = (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .map(|s| (0..n).partition(|&i| s >> i & 1 == 1))
        .collect();
    let mut rhs = BigUint::zero();
    for (s, s_bar) in &subsets {
        for (t, t_bar) in &subsets {
            let a = permanent_ryser(&m.submatrix(s, t))?;
            if a.is_zero() {
                continue;
            }
            rhs += a * permanent_ryser(&m.submatrix(s_bar, t_bar))?;
        }
    }
    Ok((lhs, rhs))
}

/// Natural-log permanent bounds for a 0/1 matrix with every row and column
/// summing to `k`: `n!·(k/n)^n ≤ per(A) ≤ (k!)^(n/k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogBounds {
    pub lower: f64,
    pub upper: f64,
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

pub fn log_bounds(n: usize, k: usize) -> Result<LogBounds> {
    if k == 0 || k > n {
        return Err(Error::BadParams(format!("bounds need 1 <= k <= n (got n={n}, k={k})")));
    }
    let (nf, kf) = (n as f64, k as f64);
    Ok(LogBounds {
        lower: ln_factorial(n) + nf * (kf / nf).ln(),
        upper: nf / kf * ln_factorial(k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn j_minus_i(n: usize) -> IntMatrix {
        let mut m = IntMatrix::ones(n);
        for i in 0..n {
            m.set(i, i, 0);
        }
        m
    }

    #[test]
    fn naive_examples() {
        for n in 0..=6 {
            assert_eq!(permanent_naive(&IntMatrix::identity(n)).unwrap(), 1u32.into());
        }
        assert_eq!(permanent_naive(&IntMatrix::ones(3)).unwrap(), 6u32.into());
        assert_eq!(permanent_naive(&j_minus_i(4)).unwrap(), 9u32.into());
        assert!(matches!(
            permanent_naive(&IntMatrix::ones(11)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn ryser_examples() {
        assert_eq!(permanent_ryser(&IntMatrix::identity(20)).unwrap(), 1u32.into());
        assert_eq!(permanent_ryser(&IntMatrix::ones(5)).unwrap(), 120u32.into());
        let mut k44 = IntMatrix::ones(4);
        k44.set(2, 1, 0);
        // oracle: 24 permutations minus the 6 using entry (2,1)
        assert_eq!(permanent_naive(&k44).unwrap(), 18u32.into());
        assert_eq!(permanent_ryser(&k44).unwrap(), 18u32.into());
        assert_eq!(permanent_ryser(&IntMatrix::zeros(0)).unwrap(), 1u32.into());
        assert!(permanent_ryser(&IntMatrix::ones(31)).is_err());
    }

    #[test]
    fn ryser_all_ones_is_factorial() {
        for n in [1, 7, 13, 22] {
            assert_eq!(
                permanent_ryser(&IntMatrix::ones(n)).unwrap(),
                crate::exact::factorial(n)
            );
        }
    }

    #[test]
    fn ryser_large_entries() {
        let m = IntMatrix::new(2, vec![u64::MAX, u64::MAX, u64::MAX, u64::MAX]).unwrap();
        let x = BigUint::from(u64::MAX);
        assert_eq!(permanent_ryser(&m).unwrap(), &x * &x * 2u32);
        assert_eq!(permanent_naive(&m).unwrap(), &x * &x * 2u32);
    }

    #[test]
    fn ryser_parallel_chunks_match_identity_shift() {
        // 16 > RYSER_CHUNK_BITS, exercising chunk restarts
        let n = 16;
        let mut m = IntMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
            m.set(i, (i + 1) % n, 1);
        }
        // circulant I + P has permanent 2 for n ≥ 3
        assert_eq!(permanent_ryser(&m).unwrap(), 2u32.into());
    }

    #[test]
    fn subpermanent_boundaries() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 0], vec![0, 1, 3], vec![4, 0, 1]]).unwrap();
        let per = permanent_naive(&m).unwrap();
        for k in [0, 3] {
            let (l, r) = subpermanent_sides(&m, k).unwrap();
            assert_eq!(l, per);
            assert_eq!(r, per);
        }
        assert!(matches!(subpermanent_sides(&m, 4), Err(Error::BadK { k: 4, n: 3 })));
    }

    #[test]
    fn subpermanent_k2_on_4x4() {
        let m = IntMatrix::from_rows(&[
            vec![1, 0, 1, 1],
            vec![1, 1, 0, 1],
            vec![0, 1, 1, 0],
            vec![1, 1, 1, 0],
        ])
        .unwrap();
        // rhs recomputed with the naive permanent only
        let mut rhs = BigUint::zero();
        let pairs: Vec<(Vec<usize>, Vec<usize>)> = (0u32..16)
            .filter(|s| s.count_ones() == 2)
            .map(|s| (0..4).partition(|&i| s >> i & 1 == 1))
            .collect();
        for (s, sb) in &pairs {
            for (t, tb) in &pairs {
                rhs += permanent_naive(&m.submatrix(s, t)).unwrap()
                    * permanent_naive(&m.submatrix(sb, tb)).unwrap();
            }
        }
        let per = permanent_naive(&m).unwrap();
        assert_eq!(rhs, &per * 6u32);
        assert_eq!(subpermanent_sides(&m, 2).unwrap(), (&per * 6u32, rhs));
    }

    #[test]
    fn bounds_examples() {
        for n in 1..10 {
            let b = log_bounds(n, n).unwrap();
            assert!((b.lower - b.upper).abs() < 1e-12);
            assert!((b.upper - ln_factorial(n)).abs() < 1e-12);
        }
        let b = log_bounds(4, 3).unwrap();
        assert!((b.lower - (24.0f64 * (0.75f64).powi(4)).ln()).abs() < 1e-12);
        assert!((b.upper - (6.0f64).powf(4.0 / 3.0).ln()).abs() < 1e-12);
        assert!((b.lower.exp() - 7.59375).abs() < 1e-9);
        assert!((b.upper.exp() - 10.90272).abs() < 1e-4);
        let b = log_bounds(6, 1).unwrap();
        assert!((b.lower - (720.0f64 / 46656.0).ln()).abs() < 1e-12);
        assert_eq!(b.upper, 0.0);
        assert!(log_bounds(3, 0).is_err());
        assert!(log_bounds(3, 4).is_err());
    }

    #[test]
    fn next_permutation_counts() {
        let mut p: Vec<usize> = (0..5).collect();
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 120);
    }

    fn small_matrix(max_n: usize, max_entry: u64) -> impl Strategy<Value = IntMatrix> {
        (0..=max_n).prop_flat_map(move |n| {
            prop::collection::vec(0..=max_entry, n * n)
                .prop_map(move |e| IntMatrix::new(n, e).unwrap())
        })
    }

    fn perm_of(n: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        #[test]
        fn ryser_equals_naive(m in small_matrix(8, 5)) {
            prop_assert_eq!(permanent_ryser(&m).unwrap(), permanent_naive(&m).unwrap());
        }

        #[test]
        fn invariant_under_row_and_column_permutations(
            (m, r, c) in small_matrix(7, 3).prop_flat_map(|m| {
                let n = m.n();
                (Just(m), perm_of(n), perm_of(n))
            })
        ) {
            prop_assert_eq!(permanent_ryser(&m.permuted(&r, &c)).unwrap(), permanent_ryser(&m).unwrap());
        }

        #[test]
        fn multiplicative_over_direct_sums(a in small_matrix(5, 3), b in small_matrix(5, 3)) {
            prop_assert_eq!(
                permanent_ryser(&a.direct_sum(&b)).unwrap(),
                permanent_ryser(&a).unwrap() * permanent_ryser(&b).unwrap()
            );
        }

        #[test]
        fn subpermanent_identity_holds(m in small_matrix(6, 2), k in 0usize..=6) {
            prop_assume!(k <= m.n());
            let (l, r) = subpermanent_sides(&m, k).unwrap();
            prop_assert_eq!(l, r);
        }
    }
}
