const BLOCK: usize = 32;

/// Pairwise (cascade) summation; error grows like `O(log n)` instead of `O(n)`.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= BLOCK {
        v.iter().sum()
    } else {
        let mid = v.len() / 2;
        pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
    }
}
