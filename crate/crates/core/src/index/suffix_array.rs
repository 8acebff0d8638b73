//! Suffix array by prefix doubling with counting sorts, `O(n log n)`.

/// Suffix array of `s`; a suffix that is a proper prefix of another sorts
/// first.
pub fn suffix_array(s: &[u32]) -> Vec<u32> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    assert!(n < u32::MAX as usize, "text too long for a u32 suffix array");

    // Initial ranks: compress the symbols.
    let mut symbols: Vec<u32> = s.to_vec();
    symbols.sort_unstable();
    symbols.dedup();
    let mut rank: Vec<u32> = s.iter().map(|c| symbols.binary_search(c).unwrap() as u32).collect();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    sa.sort_unstable_by_key(|&i| rank[i as usize]);

    let mut tmp = vec![0u32; n];
    let mut second = Vec::with_capacity(n);
    let mut count = vec![0u32; n.max(symbols.len()) + 1];
    let mut k = 1usize;
    loop {
        // Order by second key: suffixes shorter than k first, then the rest
        // in the order of their k-shifted suffix.
        second.clear();
        second.extend((n.saturating_sub(k)..n).map(|i| i as u32));
        second.extend(sa.iter().filter(|&&i| i as usize >= k).map(|&i| i - k as u32));

        // Stable counting sort by first key.
        let classes = rank[sa[n - 1] as usize] as usize + 1;
        count[..=classes].iter_mut().for_each(|c| *c = 0);
        for &i in &second {
            count[rank[i as usize] as usize + 1] += 1;
        }
        for c in 1..=classes {
            count[c] += count[c - 1];
        }
        for &i in &second {
            let r = rank[i as usize] as usize;
            sa[count[r] as usize] = i;
            count[r] += 1;
        }

        let key = |i: u32| {
            let i = i as usize;
            (rank[i], if i + k < n { rank[i + k] + 1 } else { 0 })
        };
        tmp[sa[0] as usize] = 0;
        for j in 1..n {
            let bump = (key(sa[j]) != key(sa[j - 1])) as u32;
            tmp[sa[j] as usize] = tmp[sa[j - 1] as usize] + bump;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1] as usize] as usize == n - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

/// Inverse permutation of a suffix array.
pub fn inverse_suffix_array(sa: &[u32]) -> Vec<u32> {
    let mut rank = vec![0u32; sa.len()];
    for (r, &i) in sa.iter().enumerate() {
        rank[i as usize] = r as u32;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(s: &[u32]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..s.len() as u32).collect();
        sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
        sa
    }

    #[test]
    fn banana() {
        let s: Vec<u32> = "banana".bytes().map(u32::from).collect();
        assert_eq!(suffix_array(&s), vec![5, 3, 1, 0, 4, 2]);
        assert!(suffix_array(&[]).is_empty());
        assert_eq!(suffix_array(&[7]), vec![0]);
    }

    proptest! {
        #[test]
        fn agrees_with_naive_sort(s in proptest::collection::vec(0u32..4, 0..200)) {
            prop_assert_eq!(suffix_array(&s), naive(&s));
        }
    }
}
