//! Counter-based pseudo-random numbers for Monte Carlo evaluation.
//!
//! Sampling uses a pure function of `(seed, counter)` instead of a stateful
//! generator, so a fixed `(seed, index)` pair always yields the same draw on
//! every platform, and sample blocks can be partitioned across workers
//! without changing any result.

/// SplitMix64 finalizer over the pair `(seed, counter)`.
pub(crate) fn mix(seed: u64, counter: u64) -> u64 {
    let mut z = seed
        .wrapping_add(counter.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)` for `(seed, counter)`.
pub(crate) fn uniform(seed: u64, counter: u64) -> f64 {
    (mix(seed, counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
