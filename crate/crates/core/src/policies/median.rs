use crate::model::Tick;

/// Floored median of the remaining bursts in the ready queue.
///
/// For an odd count this is the middle value; for an even count it is the
/// mean of the two middle values rounded down, so `{45, 30}` gives 37.
///
/// Panics on an empty slice; the ready queue is never empty when a round starts.
pub fn median_quantum(remaining: &[Tick]) -> Tick {
    assert!(!remaining.is_empty(), "median of an empty ready queue");
    let mut sorted = remaining.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        let (lo, hi) = (sorted[n / 2 - 1], sorted[n / 2]);
        lo + (hi - lo) / 2
    }
}

/// Re-arranges an ascending sequence as smallest, largest, second smallest,
/// second largest, and so on.
pub fn interleave_min_max<T: Clone>(sorted_ascending: &[T]) -> Vec<T> {
    let n = sorted_ascending.len();
    let mut out = Vec::with_capacity(n);
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        out.push(sorted_ascending[lo].clone());
        lo += 1;
        if lo < hi {
            hi -= 1;
            out.push(sorted_ascending[hi].clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn illustration_first_round() {
        assert_eq!(median_quantum(&[12, 21, 55, 105]), 38);
    }

    #[test]
    fn even_count_is_floored() {
        assert_eq!(median_quantum(&[45, 30]), 37);
        assert_eq!(median_quantum(&[2, 3]), 2);
    }

    #[test]
    fn odd_count_takes_middle() {
        assert_eq!(median_quantum(&[7]), 7);
        assert_eq!(median_quantum(&[35, 45, 60, 90, 105]), 60);
        assert_eq!(median_quantum(&[105, 35, 90, 60, 45]), 60);
    }

    #[test]
    #[should_panic]
    fn empty_queue_panics() {
        median_quantum(&[]);
    }

    #[test]
    fn interleave_examples() {
        assert_eq!(
            interleave_min_max(&[12, 21, 55, 105]),
            vec![12, 105, 21, 55]
        );
        assert_eq!(
            interleave_min_max(&[30, 42, 50, 85, 97]),
            vec![30, 97, 42, 85, 50]
        );
        assert_eq!(interleave_min_max(&[9]), vec![9]);
        assert!(interleave_min_max::<u64>(&[]).is_empty());
    }

    proptest! {
        #[test]
        fn median_within_range(mut v in prop::collection::vec(1u64..1_000, 1..40)) {
            let m = median_quantum(&v);
            prop_assert!(m >= *v.iter().min().unwrap());
            prop_assert!(m <= *v.iter().max().unwrap());
            v.reverse();
            prop_assert_eq!(median_quantum(&v), m);
        }

        #[test]
        fn interleave_index_rule(mut v in prop::collection::vec(0u64..1_000, 0..40)) {
            v.sort_unstable();
            let o = interleave_min_max(&v);
            let n = v.len();
            prop_assert_eq!(o.len(), n);
            for k in 0..n {
                if 2 * k < n { prop_assert_eq!(o[2 * k], v[k]); }
                if 2 * k + 1 < n { prop_assert_eq!(o[2 * k + 1], v[n - 1 - k]); }
            }
        }
    }
}
