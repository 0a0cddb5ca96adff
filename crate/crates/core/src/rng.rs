//! Reproducible random streams.
//!
//! Every trial of an experiment owns a ChaCha8 stream keyed by the master
//! seed and a path of indices (e.g. `[point, trial]`). Streams never share
//! state, so results do not depend on scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_id(path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix(path.len() as u64), |acc, &p| splitmix(acc ^ splitmix(p)))
}

/// Returns the stream identified by `(seed, path)`.
pub fn stream(seed: u64, path: &[u64]) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(path));
    rng
}

/// Derives a child stream from a parent by drawing a fresh key.
pub fn child<R: rand::Rng + ?Sized>(parent: &mut R, index: u64) -> StreamRng {
    let key: u64 = parent.gen();
    stream(key, &[index])
}

/// Stream keyed by the contents of a label column. Per-label randomness
/// then travels with the column when columns are reordered.
pub fn column_stream(key: u64, column: &[bool]) -> StreamRng {
    let words: Vec<u64> = column
        .chunks(64)
        .map(|chunk| chunk.iter().enumerate().fold(0u64, |w, (i, &b)| w | (b as u64) << i))
        .chain(std::iter::once(column.len() as u64))
        .collect();
    stream(key, &words)
}
