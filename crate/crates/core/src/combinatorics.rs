//! Subsets, binomials and permutation signs.

use alloc::vec::Vec;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets_lex(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        match (0..k).rev().find(|&i| cur[i] < n - k + i) {
            None => return out,
            Some(i) => {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
            }
        }
    }
}

/// Lexicographic rank of a strictly increasing subset of `0..n`.
pub fn subset_rank(subset: &[usize], n: usize) -> usize {
    let k = subset.len();
    let mut rank = 0;
    let mut prev = 0;
    for (pos, &s) in subset.iter().enumerate() {
        for skipped in prev..s {
            rank += binomial(n - skipped - 1, k - pos - 1);
        }
        prev = s + 1;
    }
    rank
}

/// Sign of the permutation sorting `items` (all distinct), or 0 when an entry repeats.
pub fn sort_sign(items: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            if items[i] == items[j] {
                return 0;
            }
            if items[i] > items[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Advance `items` to the next lexicographic permutation of its multiset.
/// Returns `false` (leaving `items` sorted ascending) once the last one is passed.
pub fn next_permutation<T: Ord>(items: &mut [T]) -> bool {
    if items.len() < 2 {
        return false;
    }
    let mut i = items.len() - 1;
    while i > 0 && items[i - 1] >= items[i] {
        i -= 1;
    }
    if i == 0 {
        items.reverse();
        return false;
    }
    let mut j = items.len() - 1;
    while items[j] <= items[i - 1] {
        j -= 1;
    }
    items.swap(i - 1, j);
    items[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(7, 2), 21);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(15, 2), 105);
    }

    #[test]
    fn subsets_are_lex_and_ranked() {
        let subs = subsets_lex(6, 3);
        assert_eq!(subs.len(), 20);
        assert_eq!(subs[0], [0, 1, 2]);
        assert_eq!(subs[19], [3, 4, 5]);
        for (r, s) in subs.iter().enumerate() {
            assert_eq!(subset_rank(s, 6), r);
        }
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subsets_lex(3, 0), [Vec::<usize>::new()]);
        assert_eq!(subsets_lex(4, 4), [[0, 1, 2, 3]]);
    }

    #[test]
    fn signs() {
        assert_eq!(sort_sign(&[0, 1, 2]), 1);
        assert_eq!(sort_sign(&[1, 0, 2]), -1);
        assert_eq!(sort_sign(&[2, 0, 1]), 1);
        assert_eq!(sort_sign(&[2, 2, 1]), 0);
    }

    #[test]
    fn multiset_permutations() {
        let mut v = [0, 0, 1, 1];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 6);
        assert_eq!(v, [0, 0, 1, 1]);
    }
}
