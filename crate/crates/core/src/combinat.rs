//! Exact integer combinatorics: factorials, binomials, multinomials, Stirling
//! numbers of the second kind and integer partitions.
//!
//! Every count is returned as a [`Natural`] (an arbitrary-precision unsigned
//! integer). Out-of-range arguments of the triangular quantities evaluate to
//! zero instead of failing, so sums over ranges that run past the edge of a
//! triangle need no special casing.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Arbitrary-precision nonnegative integer used for every count.
pub type Natural = BigUint;

pub fn factorial(n: usize) -> Natural {
    (2..=n).fold(Natural::one(), |acc, i| acc * i)
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> Natural {
    if n < 0 || k < 0 || k > n {
        return Natural::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    // Each prefix product is itself a binomial coefficient, so the division is exact.
    (0..k).fold(Natural::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `(Σ parts)! / Π parts[i]!`.
pub fn multinomial(parts: &[usize]) -> Natural {
    let mut total = 0i64;
    let mut acc = Natural::one();
    for &p in parts {
        total += p as i64;
        acc *= binomial(total, p as i64);
    }
    acc
}

/// Stirling number of the second kind `S₂(n, k)`.
pub fn stirling2(n: usize, k: usize) -> Natural {
    if k > n {
        return Natural::zero();
    }
    stirling2_row(n).swap_remove(k)
}

/// The full row `S₂(n, 0..=n)` of the triangle.
pub fn stirling2_row(n: usize) -> Vec<Natural> {
    let mut row = vec![Natural::zero(); n + 1];
    row[0] = Natural::one();
    for i in 1..=n {
        // Fill right to left so row[j - 1] still holds the previous row.
        for j in (1..=i).rev() {
            row[j] = &row[j - 1] + &row[j] * j;
        }
        row[0] = Natural::zero();
    }
    row
}

/// An integer partition: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Returns `None` unless `parts` is weakly decreasing with positive entries.
    pub fn new(parts: Vec<usize>) -> Option<Self> {
        let ok = parts.iter().all(|&p| p > 0) && parts.windows(2).all(|w| w[0] >= w[1]);
        ok.then_some(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// The partitioned integer.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts.
    pub fn k(&self) -> usize {
        self.parts.len()
    }

    /// `m_i(λ)`: how many parts equal `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }
}

pub fn multiplicity(lambda: &Partition, i: usize) -> usize {
    lambda.multiplicity(i)
}

/// An ordered sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Option<Self> {
        parts.iter().all(|&p| p > 0).then_some(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }
}

/// All partitions of `n` into exactly `k` parts, reverse-lexicographic order.
///
/// Yields nothing unless `1 <= k <= n`.
pub fn partitions(n: usize, k: usize) -> impl Iterator<Item = Partition> {
    let mut out = Vec::new();
    if k >= 1 && k <= n {
        let mut buf = Vec::with_capacity(k);
        partitions_rec(n, k, n, &mut buf, &mut out);
    }
    out.into_iter()
}

fn partitions_rec(remaining: usize, slots: usize, cap: usize, buf: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if slots == 0 {
        if remaining == 0 {
            out.push(Partition { parts: buf.clone() });
        }
        return;
    }
    // Largest part leaves at least one for every later slot; smallest still
    // lets the remaining slots absorb what is left under the same cap.
    let hi = cap.min(remaining + 1 - slots);
    let lo = remaining.div_ceil(slots);
    for first in (lo..=hi).rev() {
        buf.push(first);
        partitions_rec(remaining - first, slots - 1, first, buf, out);
        buf.pop();
    }
}

/// All compositions of `n` into exactly `k` parts, lexicographic order.
pub fn compositions(n: usize, k: usize) -> impl Iterator<Item = Composition> {
    let mut out = Vec::new();
    if k >= 1 && k <= n {
        let mut buf = Vec::with_capacity(k);
        compositions_rec(n, k, &mut buf, &mut out);
    }
    out.into_iter()
}

fn compositions_rec(remaining: usize, slots: usize, buf: &mut Vec<usize>, out: &mut Vec<Composition>) {
    if slots == 1 {
        buf.push(remaining);
        out.push(Composition { parts: buf.clone() });
        buf.pop();
        return;
    }
    for first in 1..=remaining + 1 - slots {
        buf.push(first);
        compositions_rec(remaining - first, slots - 1, buf, out);
        buf.pop();
    }
}

/// Number of compositions of `n` into `k` parts, each part 1 or 2.
///
/// Equals `C(k, 2k - n)` when `⌈n/2⌉ <= k <= n`, zero otherwise.
pub fn count_compositions_1_2(n: usize, k: usize) -> Natural {
    if k > n || 2 * k < n {
        return Natural::zero();
    }
    binomial(k as i64, (2 * k - n) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), nat(1));
        assert_eq!(factorial(1), nat(1));
        let oracle: u64 = (1..=5).product();
        assert_eq!(factorial(5), nat(oracle));
        assert_eq!(factorial(20), nat(2_432_902_008_176_640_000));
    }

    #[test]
    fn binomial_matches_pascal() {
        let mut row = vec![nat(1)];
        for n in 0..30i64 {
            for k in 0..=n {
                assert_eq!(binomial(n, k), row[k as usize], "C({n},{k})");
            }
            let mut next = vec![nat(1); row.len() + 1];
            for k in 1..row.len() {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
        }
        assert_eq!(binomial(4, 2), nat(6));
        assert_eq!(binomial(3, 5), nat(0));
        assert_eq!(binomial(3, -1), nat(0));
        assert_eq!(binomial(-1, 0), nat(0));
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[3, 1]), nat(4));
        assert_eq!(multinomial(&[2, 2]), nat(6));
        assert_eq!(multinomial(&[7]), nat(1));
        assert_eq!(multinomial(&[]), nat(1));
        assert_eq!(multinomial(&[1, 1, 1, 1]), factorial(4));
    }

    #[test]
    fn stirling2_values() {
        assert_eq!(stirling2(3, 2), nat(3));
        assert_eq!(stirling2(0, 0), nat(1));
        for n in 1..10 {
            assert_eq!(stirling2(n, n), nat(1));
            assert_eq!(stirling2(n, 0), nat(0));
            assert_eq!(stirling2(n, n + 1), nat(0));
        }
        assert_eq!(stirling2(10, 4), nat(34105));
    }

    // Bell numbers via a DP over subsets of [n] that fixes the block of the
    // lowest element, independent of the Stirling triangle.
    fn bell_subset_dp(n: usize) -> Natural {
        let full = (1u32 << n) - 1;
        let mut ways = vec![nat(0); 1 << n];
        ways[0] = nat(1);
        for s in 1..=full {
            let low = s & s.wrapping_neg();
            let rest = s ^ low;
            let mut sub = rest;
            let mut acc = nat(0);
            loop {
                acc += &ways[(rest ^ sub) as usize];
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
            ways[s as usize] = acc;
        }
        ways[full as usize].clone()
    }

    #[test]
    fn stirling_rows_sum_to_bell() {
        for n in 0..=12 {
            let total: Natural = stirling2_row(n).iter().sum();
            assert_eq!(total, bell_subset_dp(n), "n={n}");
        }
    }

    #[test]
    fn partitions_listing() {
        let got: Vec<Vec<usize>> = partitions(4, 2).map(|p| p.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![3, 1], vec![2, 2]]);
        let got: Vec<Vec<usize>> = partitions(6, 1).map(|p| p.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![6]]);
        let got: Vec<Vec<usize>> = partitions(5, 5).map(|p| p.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![1; 5]]);
        assert_eq!(partitions(3, 4).count(), 0);
        assert_eq!(partitions(3, 0).count(), 0);
    }

    fn p_rec(n: usize, k: usize) -> usize {
        match (n, k) {
            (0, 0) => 1,
            (_, 0) => 0,
            _ if k > n => 0,
            _ => p_rec(n - 1, k - 1) + p_rec(n - k, k),
        }
    }

    #[test]
    fn partition_counts_follow_recurrence() {
        for n in 1..=18 {
            for k in 1..=n {
                let all: Vec<Partition> = partitions(n, k).collect();
                assert_eq!(all.len(), p_rec(n, k), "p({n},{k})");
                for p in &all {
                    assert_eq!(p.n(), n);
                    assert_eq!(p.k(), k);
                    assert!(Partition::new(p.parts().to_vec()).is_some());
                }
                // strictly decreasing in lexicographic order
                assert!(all.windows(2).all(|w| w[0].parts() > w[1].parts()));
            }
        }
    }

    #[test]
    fn multiplicity_counts() {
        let p = Partition::new(vec![2, 2, 1]).unwrap();
        assert_eq!(multiplicity(&p, 2), 2);
        let p = Partition::new(vec![3, 1]).unwrap();
        assert_eq!(multiplicity(&p, 2), 0);
        let p = Partition::new(vec![1, 1, 1, 1]).unwrap();
        assert_eq!(multiplicity(&p, 1), 4);
        assert!(Partition::new(vec![1, 2]).is_none());
        assert!(Partition::new(vec![2, 0]).is_none());
    }

    #[test]
    fn set_partition_class_sizes_are_integral() {
        for n in 1..=15 {
            for k in 1..=n {
                for lambda in partitions(n, k) {
                    let m = multinomial(lambda.parts());
                    let denom: Natural = (1..=n).map(|i| factorial(lambda.multiplicity(i))).product();
                    assert!((&m % &denom).is_zero(), "{lambda:?}");
                }
            }
        }
    }

    #[test]
    fn compositions_listing() {
        let got: Vec<Vec<usize>> = compositions(4, 2).map(|c| c.parts().to_vec()).collect();
        assert_eq!(got, vec![vec![1, 3], vec![2, 2], vec![3, 1]]);
        for n in 1..=10 {
            for k in 1..=n {
                assert_eq!(
                    compositions(n, k).count() as u64,
                    binomial(n as i64 - 1, k as i64 - 1).to_u64_digits().first().copied().unwrap_or(0)
                );
            }
        }
    }

    #[test]
    fn one_two_compositions() {
        assert_eq!(count_compositions_1_2(4, 3), nat(3));
        assert_eq!(count_compositions_1_2(6, 6), nat(1));
        assert_eq!(count_compositions_1_2(5, 2), nat(0));
        assert_eq!(count_compositions_1_2(3, 4), nat(0));

        fn direct(n: usize) -> u64 {
            match n {
                0 | 1 => 1,
                _ => direct(n - 1) + direct(n - 2),
            }
        }
        for n in 1..=20 {
            let total: Natural = (1..=n).map(|k| count_compositions_1_2(n, k)).sum();
            assert_eq!(total, nat(direct(n)), "n={n}");
        }
    }
}
