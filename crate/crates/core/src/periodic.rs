//! Canonical forms for eventually periodic sequences `pre · period^∞`.

/// Reduces `(pre, period)` to the unique shortest representation of the same
/// infinite sequence: minimal period first, then the preperiod is absorbed
/// into the period from the right while possible.
pub(crate) fn canonicalize<T: Clone + Eq>(mut pre: Vec<T>, mut period: Vec<T>) -> (Vec<T>, Vec<T>) {
    debug_assert!(!period.is_empty());
    let n = period.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| period[i] == period[i - p]) {
            period.truncate(p);
            break;
        }
    }
    while let Some(last) = pre.last() {
        if *last == period[period.len() - 1] {
            pre.pop();
            period.rotate_right(1);
        } else {
            break;
        }
    }
    (pre, period)
}

/// Element at 0-based position `j` of `pre · period^∞`.
pub(crate) fn at<T: Copy>(pre: &[T], period: &[T], j: usize) -> T {
    if j < pre.len() {
        pre[j]
    } else {
        period[(j - pre.len()) % period.len()]
    }
}

/// Drops the first `n` symbols of `pre · period^∞`.
pub(crate) fn shift<T: Clone + Eq>(pre: &[T], period: &[T], n: usize) -> (Vec<T>, Vec<T>) {
    if n <= pre.len() {
        canonicalize(pre[n..].to_vec(), period.to_vec())
    } else {
        let mut per = period.to_vec();
        per.rotate_left((n - pre.len()) % period.len());
        canonicalize(Vec::new(), per)
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
