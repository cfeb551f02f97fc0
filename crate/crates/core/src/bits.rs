//! Bitstring helpers.
//!
//! A bitstring over an ordered qubit list is written most-significant bit
//! first, and the qubit listed first is the least significant bit. For
//! `input_qubits = [0, 1]` the string `"01"` therefore means qubit 0 is set
//! and qubit 1 is clear.

/// Formats `value` as a `width`-character bitstring.
pub fn to_bits(value: usize, width: usize) -> String {
    (0..width)
        .rev()
        .map(|k| if (value >> k) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Parses a bitstring back into its integer value. Returns `None` for
/// characters other than `0`/`1` or for strings wider than `usize`.
pub fn from_bits(bits: &str) -> Option<usize> {
    if bits.len() > usize::BITS as usize {
        return None;
    }
    bits.bytes().try_fold(0usize, |acc, b| match b {
        b'0' => Some(acc << 1),
        b'1' => Some((acc << 1) | 1),
        _ => None,
    })
}

pub fn is_bitstring(s: &str, width: usize) -> bool {
    s.len() == width && s.bytes().all(|b| b == b'0' || b == b'1')
}
