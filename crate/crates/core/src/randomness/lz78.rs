use alloc::collections::BTreeMap;

/// Length in bits of the LZ78 encoding of `bits`.
///
/// Phrase `i` is written as the index of its longest known prefix
/// (`ceil(log2 k)` bits with `k` dictionary entries, the empty phrase
/// included) followed by one literal bit. A trailing phrase that is already
/// in the dictionary is written as an index alone.
pub fn lz78_bits(bits: &[bool]) -> u64 {
    fn index_bits(k: usize) -> u64 {
        u64::from(usize::BITS - (k - 1).leading_zeros())
    }
    let mut dict: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    let mut size = 1;
    let mut cur = 0;
    let mut pending = false;
    let mut out = 0;
    for &b in bits {
        if let Some(&next) = dict.get(&(cur, b)) {
            cur = next;
            pending = true;
            continue;
        }
        out += index_bits(size) + 1;
        dict.insert((cur, b), size);
        size += 1;
        cur = 0;
        pending = false;
    }
    if pending {
        out += index_bits(size);
    }
    out
}
