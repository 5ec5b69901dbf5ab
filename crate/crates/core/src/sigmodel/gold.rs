//! Length-31 Gold codes from the degree-5 preferred pair.

use crate::error::{Error, Result};

pub const GOLD_LEN: usize = 31;

/// Number of codes in the family: 31 relative shifts plus the two m-sequences.
pub const GOLD_FAMILY: usize = 33;

/// m-sequence from a recurrence `a[n+5] = Σ a[n+t]` over `taps`, initial state 00001.
fn m_sequence(taps: &[usize]) -> [u8; GOLD_LEN] {
    let mut a = [0u8; GOLD_LEN + 5];
    a[4] = 1;
    for n in 0..GOLD_LEN {
        a[n + 5] = taps.iter().fold(0, |acc, &t| acc ^ a[n + t]);
    }
    let mut out = [0u8; GOLD_LEN];
    out.copy_from_slice(&a[..GOLD_LEN]);
    out
}

/// Gold code `index` mapped to ±1 chips (0 → +1, 1 → −1).
///
/// Indices 0..31 give `m1 ⊕ shift_k(m2)`, 31 gives `m1`, 32 gives `m2`,
/// with `m1` from x⁵+x²+1 and `m2` from x⁵+x⁴+x³+x²+1.
pub fn gold31(index: usize) -> Result<Vec<f64>> {
    if index >= GOLD_FAMILY {
        return Err(Error::InvalidArgument(format!("gold code index {index} >= {GOLD_FAMILY}")));
    }
    // x^5 + x^2 + 1       : a[n+5] = a[n+2] + a[n]
    // x^5+x^4+x^3+x^2+1   : a[n+5] = a[n+4] + a[n+3] + a[n+2] + a[n]
    let m1 = m_sequence(&[0, 2]);
    let m2 = m_sequence(&[0, 2, 3, 4]);
    let bits: Vec<u8> = match index {
        31 => m1.to_vec(),
        32 => m2.to_vec(),
        k => (0..GOLD_LEN).map(|n| m1[n] ^ m2[(n + k) % GOLD_LEN]).collect(),
    };
    Ok(bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_sequences_are_balanced() {
        for taps in [&[0usize, 2][..], &[0, 2, 3, 4]] {
            let m = m_sequence(taps);
            assert_eq!(m.iter().filter(|&&b| b == 1).count(), 16);
        }
    }

    #[test]
    fn range_and_distinctness() {
        assert!(gold31(33).is_err());
        let codes: Vec<_> = (0..GOLD_FAMILY).map(|i| gold31(i).unwrap()).collect();
        for i in 0..GOLD_FAMILY {
            let auto: f64 = codes[i].iter().map(|c| c * c).sum();
            assert_eq!(auto, 31.0);
            for j in 0..i {
                assert_ne!(codes[i], codes[j]);
            }
        }
    }
}
