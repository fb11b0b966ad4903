//! Chunked, counter-addressed normal variates.
//!
//! Draw `i` of a stream is produced by chunk `i / CHUNK_LEN`, which owns a
//! ChaCha8 generator seeded from the user seed with its stream id set to the
//! chunk index. Normals come from the ziggurat `StandardNormal` sampler. A
//! draw therefore depends only on `(seed, i)`, never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Draws per chunk. Part of the reproducibility contract.
pub const CHUNK_LEN: usize = 1 << 16;

/// Pinned in run manifests.
pub const RNG_ALGORITHM: &str =
    "ChaCha8Rng(seed_from_u64(seed), stream=chunk) + StandardNormal ziggurat; rand_chacha 0.9, rand_distr 0.5; chunk_len=65536";

pub(crate) fn chunk_count(n: usize) -> usize {
    n.div_ceil(CHUNK_LEN)
}

/// Half-open draw index range covered by `chunk`.
pub(crate) fn chunk_bounds(n: usize, chunk: usize) -> (usize, usize) {
    let lo = chunk * CHUNK_LEN;
    (lo, (lo + CHUNK_LEN).min(n))
}

pub(crate) fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Standard normals for draw indices `chunk_bounds(n, chunk)`.
pub(crate) fn chunk_normals(seed: u64, n: usize, chunk: usize) -> Vec<f64> {
    let (lo, hi) = chunk_bounds(n, chunk);
    let mut rng = chunk_rng(seed, chunk);
    (lo..hi).map(|_| StandardNormal.sample(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_depend_only_on_index() {
        // a shorter request is a prefix of a longer one
        let short = chunk_normals(9, 100, 0);
        let long = chunk_normals(9, CHUNK_LEN + 5, 0);
        assert_eq!(&short[..], &long[..100]);
        let tail = chunk_normals(9, CHUNK_LEN + 5, 1);
        assert_eq!(tail.len(), 5);
        assert_ne!(tail[0], long[0]);
    }

    #[test]
    fn seeds_differ() {
        assert_ne!(chunk_normals(1, 4, 0), chunk_normals(2, 4, 0));
    }

    #[test]
    fn bounds() {
        assert_eq!(chunk_count(0), 0);
        assert_eq!(chunk_count(1), 1);
        assert_eq!(chunk_count(CHUNK_LEN), 1);
        assert_eq!(chunk_count(CHUNK_LEN + 1), 2);
        assert_eq!(chunk_bounds(CHUNK_LEN + 1, 1), (CHUNK_LEN, CHUNK_LEN + 1));
    }
}
