//! Small shared helpers.

/// FNV-1a 64-bit hash, used for short stable identifiers of tag sets and
/// feature lists. Not cryptographic.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Hex id over a list of strings, separator-safe.
pub fn list_id<S: AsRef<str>>(items: &[S]) -> String {
    let mut buf = Vec::new();
    for item in items {
        buf.extend_from_slice(item.as_ref().as_bytes());
        buf.push(0);
    }
    format!("{:016x}", fnv1a64(&buf))
}

/// Formats an `f64` so that parsing the result reproduces the exact bits.
/// 17 significant digits are always enough for a round trip.
pub fn format_exact(v: f64) -> String {
    format!("{v:.16e}")
}
