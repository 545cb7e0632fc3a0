//! Independent oracles shared by the integration tests. None of these reuse
//! the library's own algorithms.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use itertools::Itertools;

/// Pascal's triangle.
pub fn pascal(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row[k]
}

fn cyclic_neighbours(n: usize, r: usize, s: usize) -> bool {
    r != s && ((r + 1) % n == s || (s + 1) % n == r)
}

/// Sequences whose idempotent vanishes by a derivation of the shape
/// `e(i) = psi_k e(s_k i) psi_k` (strands at `k`, `k+1` not adjacent)
/// starting from the cyclotomic generators `e(i)` with `i_1 != 0`.
///
/// Computed as a least fixed point over all `n!` permutations.
pub fn vanishing_closure(n: usize) -> BTreeSet<Vec<usize>> {
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut zero: BTreeSet<Vec<usize>> = perms.iter().filter(|p| p[0] != 0).cloned().collect();
    loop {
        let mut grew = false;
        for p in &perms {
            if zero.contains(p) {
                continue;
            }
            // At n = 2 the two residues are joined by a double edge.
            let derivable = n > 2
                && (0..n - 1).any(|k| {
                    if cyclic_neighbours(n, p[k], p[k + 1]) {
                        return false;
                    }
                    let mut q = p.clone();
                    q.swap(k, k + 1);
                    zero.contains(&q)
                });
            if derivable {
                zero.insert(p.clone());
                grew = true;
            }
        }
        if !grew {
            return zero;
        }
    }
}

/// All partitions of `r`, parts weakly decreasing.
pub fn partitions(r: usize) -> Vec<Vec<usize>> {
    fn go(r: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if r == 0 {
            out.push(prefix.clone());
            return;
        }
        for p in (1..=r.min(max)).rev() {
            prefix.push(p);
            go(r - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(r, r, &mut Vec::new(), &mut out);
    out
}

/// Number of standard Young tableaux: the largest entry sits in a removable
/// corner, so sum over corners.
pub fn syt_count(shape: &[usize]) -> u128 {
    fn go(shape: Vec<usize>, memo: &mut HashMap<Vec<usize>, u128>) -> u128 {
        if shape.iter().sum::<usize>() <= 1 {
            return 1;
        }
        if let Some(&v) = memo.get(&shape) {
            return v;
        }
        let mut total = 0;
        for row in 0..shape.len() {
            let is_corner = row + 1 == shape.len() || shape[row + 1] < shape[row];
            if is_corner {
                let mut smaller = shape.clone();
                smaller[row] -= 1;
                if smaller[row] == 0 {
                    smaller.pop();
                }
                total += go(smaller, memo);
            }
        }
        memo.insert(shape, total);
        total
    }
    go(shape.to_vec(), &mut HashMap::new())
}

/// Every reduced word carrying `source` to `target` (positions 1-based),
/// found by breadth-first search over adjacent transpositions that remove an
/// inversion.
pub fn all_reduced_words(source: &[usize], target: &[usize]) -> Vec<Vec<usize>> {
    let pos = |r: usize| target.iter().position(|&t| t == r).unwrap();
    let mut done = Vec::new();
    let mut queue = VecDeque::from([(source.to_vec(), Vec::new())]);
    while let Some((cur, word)) = queue.pop_front() {
        if cur == target {
            done.push(word);
            continue;
        }
        for k in 0..cur.len() - 1 {
            if pos(cur[k]) > pos(cur[k + 1]) {
                let mut next = cur.clone();
                next.swap(k, k + 1);
                let mut w = word.clone();
                w.push(k + 1);
                queue.push_back((next, w));
            }
        }
    }
    done
}
