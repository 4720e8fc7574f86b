//! Minimal fixed-width bitset helpers shared by the search engines.
//!
//! Bitsets are plain `&[u64]` / `&mut [u64]` slices; bit `i` lives in word
//! `i / 64`. Keeping this free of wrapper types lets the hot loops stay
//! allocation-free and lets callers choose their own storage layout.

/// Number of 64-bit words needed to hold `n` bits.
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

pub(crate) fn set_bit(words: &mut [u64], i: usize) {
    words[i / 64] |= 1u64 << (i % 64);
}

pub(crate) fn clear_bit(words: &mut [u64], i: usize) {
    words[i / 64] &= !(1u64 << (i % 64));
}

pub(crate) fn test_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

pub(crate) fn count_ones(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

pub(crate) fn is_empty(words: &[u64]) -> bool {
    words.iter().all(|&w| w == 0)
}

/// Iterate over the set bits of `words` in ascending order.
pub(crate) fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        std::iter::successors(
            (w != 0).then_some(w),
            |rest| {
                let rest = rest & (rest - 1);
                (rest != 0).then_some(rest)
            },
        )
        .map(move |rest| wi * 64 + rest.trailing_zeros() as usize)
    })
}

/// Bitset with `n` bits set starting from 0, padded with zeros.
pub(crate) fn full(n: usize) -> Vec<u64> {
    let mut words = vec![!0u64; words_for(n)];
    let tail = n % 64;
    if tail != 0 {
        *words.last_mut().expect("n > 0 implies at least one word") = (1u64 << tail) - 1;
    }
    if n == 0 {
        words.clear();
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_test_clear_roundtrip() {
        let mut w = vec![0u64; 2];
        for i in [0, 1, 63, 64, 100, 127] {
            assert!(!test_bit(&w, i));
            set_bit(&mut w, i);
            assert!(test_bit(&w, i));
        }
        assert_eq!(count_ones(&w), 6);
        clear_bit(&mut w, 64);
        assert!(!test_bit(&w, 64));
        assert_eq!(count_ones(&w), 5);
    }

    #[test]
    fn iter_ones_matches_test_bit() {
        let mut w = vec![0u64; 3];
        let bits = [0usize, 2, 63, 64, 65, 130, 191];
        for &b in &bits {
            set_bit(&mut w, b);
        }
        let seen: Vec<usize> = iter_ones(&w).collect();
        assert_eq!(seen, bits);
    }

    #[test]
    fn full_masks_have_exact_population() {
        for n in [0usize, 1, 63, 64, 65, 128, 129] {
            let w = full(n);
            assert_eq!(w.len(), words_for(n));
            assert_eq!(count_ones(&w), n);
            for i in 0..n {
                assert!(test_bit(&w, i));
            }
        }
    }

    #[test]
    fn is_empty_detects_zero() {
        assert!(is_empty(&[0, 0]));
        assert!(!is_empty(&[0, 1]));
        assert!(is_empty(&[]));
    }
}
