//! Ranking of k-subsets in colexicographic order (combinatorial number system).

use crate::arith::binomial_u64;

/// Precomputed binomial table for ranking subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct SubsetRanker {
    n: usize,
    k: usize,
    table: Vec<Vec<u64>>,
}

impl SubsetRanker {
    /// Returns `None` when `C(n, k)` does not fit in a `u64`.
    pub fn new(n: usize, k: usize) -> Option<Self> {
        binomial_u64(n as u64, k as u64)?;
        let table = (0..=n)
            .map(|m| {
                (0..=k)
                    .map(|j| binomial_u64(m as u64, j as u64).unwrap_or(0))
                    .collect()
            })
            .collect();
        Some(SubsetRanker { n, k, table })
    }

    pub fn count(&self) -> u64 {
        self.table[self.n][self.k]
    }

    /// Rank of a strictly increasing k-subset.
    pub fn rank(&self, sorted: &[u32]) -> u64 {
        debug_assert_eq!(sorted.len(), self.k);
        sorted
            .iter()
            .enumerate()
            .map(|(j, &x)| self.table[x as usize][j + 1])
            .sum()
    }

    pub fn unrank(&self, mut rank: u64, out: &mut Vec<u32>) {
        out.clear();
        out.resize(self.k, 0);
        let mut x = self.n;
        for j in (1..=self.k).rev() {
            x -= 1;
            while self.table[x][j] > rank {
                x -= 1;
            }
            out[j - 1] = x as u32;
            rank -= self.table[x][j];
        }
    }
}

/// Advances `comb` to the next k-subset of `0..n` in lexicographic order.
/// Returns false once the last subset has been passed.
pub fn next_combination(comb: &mut [u32], n: u32) -> bool {
    let k = comb.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - (k - i) as u32 {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn rank_is_a_bijection() {
        let r = SubsetRanker::new(9, 3).unwrap();
        assert_eq!(r.count(), 84);
        let mut seen = [false; 84];
        let mut buf = Vec::new();
        for s in (0..9u32).combinations(3) {
            let k = r.rank(&s) as usize;
            assert!(!seen[k]);
            seen[k] = true;
            r.unrank(k as u64, &mut buf);
            assert_eq!(buf, s);
        }
    }

    #[test]
    fn next_combination_walks_lexicographically() {
        let mut c = vec![0u32, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 5) {
            all.push(c.clone());
        }
        let expected: Vec<Vec<u32>> = (0..5u32).combinations(2).collect();
        assert_eq!(all, expected);
        let mut empty: Vec<u32> = vec![];
        assert!(!next_combination(&mut empty, 3));
    }
}
