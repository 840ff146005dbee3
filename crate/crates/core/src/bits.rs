//! Subsets of `[n]` as `u64` bitmasks; element `i` (1-based) lives at bit `i - 1`.

pub const MAX_N: u32 = 63;

pub fn mask_of(elements: &[u32]) -> u64 {
    elements.iter().fold(0u64, |m, &e| m | (1u64 << (e - 1)))
}

pub fn elements_of(mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let bit = m.trailing_zeros();
        out.push(bit + 1);
        m &= m - 1;
    }
    out
}

/// Mask of `[lo, hi]` (1-based, inclusive), clipped to `[1, 63]`. Empty when `lo > hi`.
pub fn interval(lo: i64, hi: i64) -> u64 {
    let lo = lo.max(1);
    let hi = hi.min(MAX_N as i64);
    if lo > hi {
        return 0;
    }
    let width = (hi - lo + 1) as u32;
    let ones = if width >= 64 { u64::MAX } else { (1u64 << width) - 1 };
    ones << (lo - 1)
}

pub fn full(n: u32) -> u64 {
    interval(1, n as i64)
}

pub fn is_subset(a: u64, b: u64) -> bool {
    a & !b == 0
}

/// Compares two masks by their sorted element lists, lexicographically.
pub fn cmp_lex(a: u64, b: u64) -> std::cmp::Ordering {
    elements_of(a).cmp(&elements_of(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = mask_of(&[1, 4, 7]);
        assert_eq!(m, 0b1001001);
        assert_eq!(elements_of(m), vec![1, 4, 7]);
    }

    #[test]
    fn intervals() {
        assert_eq!(elements_of(interval(3, 5)), vec![3, 4, 5]);
        assert_eq!(interval(4, 3), 0);
        assert_eq!(elements_of(interval(-2, 2)), vec![1, 2]);
        assert_eq!(full(63).count_ones(), 63);
    }

    #[test]
    fn lex_order_on_lists() {
        // {1,5} < {2,3} even though the masks compare the other way round.
        assert!(cmp_lex(mask_of(&[1, 5]), mask_of(&[2, 3])).is_lt());
        assert!(cmp_lex(mask_of(&[2]), mask_of(&[2, 3])).is_lt());
    }
}
