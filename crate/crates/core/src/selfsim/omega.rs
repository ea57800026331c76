use super::SelfSimError;
use crate::periodic;
use crate::treecore::BoundaryRay;

/// Whether every aligned block `ω_{k(i−1)} … ω_{ki−1}` contains all of
/// `0, 1, 2`.
pub fn omega_in_prime(omega: &BoundaryRay, k: usize) -> Result<bool, SelfSimError> {
    if k == 0 {
        return Err(SelfSimError::InvalidParameter("block length must be positive".into()));
    }
    // Blocks starting past the preperiod repeat with period lcm(p, k).
    let pre = omega.preperiod().len();
    let blocks = pre.div_ceil(k) + periodic::lcm(omega.period().len(), k) / k;
    Ok((0..blocks).all(|b| {
        let mut seen = [false; 3];
        for j in b * k..(b + 1) * k {
            let x = omega.digit(j + 1);
            if x < 3 {
                seen[x] = true;
            }
        }
        seen.iter().all(|&s| s)
    }))
}

/// Smallest `k ≤ max_k` with [`omega_in_prime`] true.
pub fn minimal_block_length(omega: &BoundaryRay, max_k: usize) -> Option<usize> {
    (1..=max_k).find(|&k| omega_in_prime(omega, k).unwrap_or(false))
}
