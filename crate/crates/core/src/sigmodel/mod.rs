//! Array data model: steering vectors, spreading codes, interferer waveforms
//! and blocked snapshots.

pub mod array;
pub mod gold;
pub mod rng;
pub mod scenario;
pub mod synth;

pub use array::{steering, steering_unchecked, ArrayGeometry};
pub use gold::{gold31, GOLD_FAMILY, GOLD_LEN};
pub use scenario::{InterfererKind, InterfererSpec, Path, Realization, Scenario, SoiSpec, Wave};
pub use synth::{synth_blocks, BlockSynth};

/// Chip rate used to normalize tone offsets given in hertz.
pub const CHIP_RATE_HZ: f64 = 3.1e6;

/// Tone offset in cycles per chip.
pub fn normalized_offset(offset_hz: f64) -> f64 {
    offset_hz / CHIP_RATE_HZ
}
