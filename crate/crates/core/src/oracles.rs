//! Brute-force reference implementations used to validate the fast routes.
//!
//! Everything here is deliberately naive (recursive path counts, exhaustive
//! tableau enumeration, pentagonal-free partition recurrences) and stays
//! independent of the determinant/product formulas it is used to check.

use crate::partitions::Partition;
use crate::scalar::Nat;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Partition numbers `p(n)` via the recurrence
/// `p(n, max) = p(n - max, max) + p(n, max - 1)`.
pub fn partition_count(n: u64) -> u64 {
    fn rec(n: u64, max: u64, memo: &mut HashMap<(u64, u64), u64>) -> u64 {
        if n == 0 {
            return 1;
        }
        if max == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&(n, max)) {
            return v;
        }
        let mut total = rec(n, max - 1, memo);
        if max <= n {
            total += rec(n - max, max, memo);
        }
        memo.insert((n, max), total);
        total
    }
    rec(n, n, &mut HashMap::new())
}

/// Number of saturated chains `mu = l^0 < l^1 < ... < l^k = nu` in the Young
/// graph (one box added per step), by memoized recursion on `nu`.
pub fn count_paths_young(mu: &Partition, nu: &Partition) -> Nat {
    fn rec(mu: &Partition, nu: &Partition, memo: &mut HashMap<Partition, Nat>) -> Nat {
        if nu == mu {
            return Nat::one();
        }
        if !mu.contained_in(nu) || nu.size() <= mu.size() {
            return Nat::zero();
        }
        if let Some(v) = memo.get(nu) {
            return v.clone();
        }
        let total: Nat = nu
            .down_covers()
            .into_iter()
            .map(|prev| rec(mu, &prev, memo))
            .sum();
        memo.insert(nu.clone(), total.clone());
        total
    }
    rec(mu, nu, &mut HashMap::new())
}

/// All standard tableaux of shape `lambda`, each given as the vector of rows.
pub fn enumerate_standard_tableaux(lambda: &Partition) -> Vec<Vec<Vec<u32>>> {
    let n = lambda.size() as u32;
    let rows = lambda.len();
    let mut tableau: Vec<Vec<u32>> = (0..rows)
        .map(|i| vec![0u32; lambda.part(i) as usize])
        .collect();
    let mut fill: Vec<u32> = vec![0; rows]; // boxes filled per row
    let mut out = Vec::new();
    fn rec(
        next: u32,
        n: u32,
        lambda: &Partition,
        fill: &mut Vec<u32>,
        tableau: &mut Vec<Vec<u32>>,
        out: &mut Vec<Vec<Vec<u32>>>,
    ) {
        if next > n {
            out.push(tableau.clone());
            return;
        }
        for i in 0..lambda.len() {
            let j = fill[i];
            if j >= lambda.part(i) {
                continue;
            }
            // Column strictness: the row above must already extend past j.
            if i > 0 && fill[i - 1] <= j {
                continue;
            }
            tableau[i][j as usize] = next;
            fill[i] += 1;
            rec(next + 1, n, lambda, fill, tableau, out);
            fill[i] -= 1;
        }
    }
    rec(1, n, lambda, &mut fill, &mut tableau, &mut out);
    out
}

/// Number of semistandard tableaux of (straight) shape `lambda` with entries
/// in `1..=n`, by exhaustive row-by-row filling.
pub fn count_ssyt(lambda: &Partition, n: u32) -> Nat {
    count_ssyt_skew(&Partition::empty(), lambda, n)
}

/// Number of semistandard skew tableaux of shape `nu/mu` with entries in
/// `1..=n`: rows weakly increase, columns strictly increase.
pub fn count_ssyt_skew(mu: &Partition, nu: &Partition, n: u32) -> Nat {
    if !mu.contained_in(nu) {
        return Nat::zero();
    }
    let rows = nu.len();
    if rows == 0 {
        return Nat::one();
    }
    let mut grid: Vec<Vec<u32>> = (0..rows)
        .map(|i| vec![0u32; nu.part(i) as usize])
        .collect();
    // Walk the skew boxes row by row; each row starts at its mu offset.
    fn rec(
        mu: &Partition,
        nu: &Partition,
        n: u32,
        i: usize,
        j: usize,
        grid: &mut Vec<Vec<u32>>,
        total: &mut Nat,
    ) {
        if i == nu.len() {
            *total += Nat::one();
            return;
        }
        if j >= nu.part(i) as usize {
            let next_start = mu.part(i + 1) as usize;
            rec(mu, nu, n, i + 1, next_start, grid, total);
            return;
        }
        let mut lo = 1;
        if j > mu.part(i) as usize {
            lo = lo.max(grid[i][j - 1]);
        }
        if i > 0 && (nu.part(i - 1) as usize) > j && j >= mu.part(i - 1) as usize {
            lo = lo.max(grid[i - 1][j] + 1);
        }
        for v in lo..=n {
            grid[i][j] = v;
            rec(mu, nu, n, i, j + 1, grid, total);
        }
        grid[i][j] = 0;
    }
    let mut total = Nat::zero();
    rec(mu, nu, n, 0, mu.part(0) as usize, &mut grid, &mut total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_partitions;

    #[test]
    fn partition_counts() {
        let expect = [1u64, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42];
        for (n, &e) in expect.iter().enumerate() {
            assert_eq!(partition_count(n as u64), e);
        }
    }

    #[test]
    fn standard_tableaux_enumeration() {
        let lam = Partition::new(vec![2, 1]).unwrap();
        let ts = enumerate_standard_tableaux(&lam);
        assert_eq!(ts.len(), 2);
        assert!(ts.contains(&vec![vec![1, 2], vec![3]]));
        assert!(ts.contains(&vec![vec![1, 3], vec![2]]));
    }

    #[test]
    fn ssyt_counts_small() {
        let lam = Partition::new(vec![1]).unwrap();
        assert_eq!(count_ssyt(&lam, 3), Nat::from(3u32));
        let lam = Partition::new(vec![2, 1]).unwrap();
        // s_(2,1)(1,1,1) = 8
        assert_eq!(count_ssyt(&lam, 3), Nat::from(8u32));
        // Two-row shape needs two values.
        assert_eq!(count_ssyt(&lam, 1), Nat::from(0u32));
    }

    #[test]
    fn skew_ssyt_single_entry() {
        let mu = Partition::new(vec![1]).unwrap();
        let nu = Partition::new(vec![2, 1]).unwrap();
        assert_eq!(count_ssyt_skew(&mu, &nu, 1), Nat::from(1u32));
    }

    #[test]
    fn path_counts_cross_check() {
        // dim(3,2) = 5 through pure path counting.
        let lam = Partition::new(vec![3, 2]).unwrap();
        assert_eq!(
            count_paths_young(&Partition::empty(), &lam),
            Nat::from(5u32)
        );
        for lam in enumerate_partitions(5) {
            assert_eq!(
                count_paths_young(&Partition::empty(), &lam),
                Nat::from(enumerate_standard_tableaux(&lam).len() as u64)
            );
        }
    }
}
