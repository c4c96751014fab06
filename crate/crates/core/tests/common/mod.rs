//! Reference computations written without the library's fast paths.

#![allow(dead_code)]

use std::collections::BTreeSet;

use apnspectra::VectorialFunction;

/// Schoolbook carry-less product reduced by `poly`.
pub fn slow_mul(m: u32, poly: u32, a: u32, b: u32) -> u32 {
    let mut wide: u64 = 0;
    for i in 0..m {
        if b >> i & 1 == 1 {
            wide ^= u64::from(a) << i;
        }
    }
    for bit in (m..2 * m).rev() {
        if wide >> bit & 1 == 1 {
            wide ^= u64::from(poly) << (bit - m);
        }
    }
    wide as u32
}

/// `W(u) = sum_x (-1)^(f(x) + u.x)` by direct summation.
pub fn direct_walsh(table: &[bool]) -> Vec<i64> {
    let n = table.len();
    (0..n)
        .map(|u| {
            table
                .iter()
                .enumerate()
                .map(|(x, &fx)| {
                    let bit = fx as u32 ^ (u & x).count_ones() & 1;
                    if bit == 0 {
                        1
                    } else {
                        -1
                    }
                })
                .sum()
        })
        .collect()
}

/// Largest entry of the difference table over nonzero input differences.
pub fn slow_uniformity(words: &[u32]) -> u32 {
    let n = words.len();
    let mut worst = 0;
    for a in 1..n {
        let mut counts = vec![0u32; n];
        for x in 0..n {
            counts[(words[x] ^ words[x ^ a]) as usize] += 1;
        }
        worst = worst.max(*counts.iter().max().unwrap());
    }
    worst
}

/// Radical of `B(a, b) = f(a + b) + f(a) + f(b) + f(0)` for a Boolean `f`
/// given by its table, listed as a sorted set of points.
pub fn radical(table: &[bool]) -> BTreeSet<usize> {
    let n = table.len().trailing_zeros() as usize;
    let form = |a: usize, b: usize| table[a ^ b] ^ table[a] ^ table[b] ^ table[0];
    // row i: the linear functional b -> B(e_i, b) as a bitmask over the basis
    let rows: Vec<u64> = (0..n)
        .map(|i| (0..n).fold(0u64, |acc, j| acc | (form(1 << i, 1 << j) as u64) << j))
        .collect();
    (0..1usize << n)
        .filter(|&a| {
            let combined = (0..n).filter(|&i| a >> i & 1 == 1).fold(0u64, |acc, i| acc ^ rows[i]);
            combined == 0
        })
        .collect()
}

/// Boolean component `x -> <c, F(x)>` with the plain bit-vector dot product.
pub fn dot_component(f: &VectorialFunction, c: u32) -> Vec<bool> {
    f.words().iter().map(|&w| (w & c).count_ones() & 1 == 1).collect()
}

/// Every element of the span of `basis` (as packed `x | y << m` indices).
pub fn span(basis: &[(u32, u32)], m: u32) -> BTreeSet<usize> {
    let mut out = BTreeSet::from([0usize]);
    for &(x, y) in basis {
        let v = (x | y << m) as usize;
        let shifted: Vec<usize> = out.iter().map(|&w| w ^ v).collect();
        out.extend(shifted);
    }
    out
}
