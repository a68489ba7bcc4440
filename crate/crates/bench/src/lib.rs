//! Shared fixtures for the kernel benchmarks.

use delone_forge::exact::Int;
use delone_forge::matrix::IntMat;

/// Deterministic pseudo-random integer matrix with entries in
/// `[-bound, bound]`.
pub fn pseudo_random_matrix(n: usize, bound: i64, seed: u64) -> IntMat {
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    let span = (2 * bound + 1) as u64;
    let data: Vec<Int> = (0..n * n)
        .map(|_| Int::from((next() % span) as i64 - bound))
        .collect();
    IntMat::new(n, n, data)
}
