use super::group::PermGroup;
use super::PermGroupError;
use crate::perm::Perm;

fn sorted_set(points: &[usize]) -> Vec<usize> {
    let mut v = points.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Whether `⟨Alt(X), Alt(Y)⟩ = Alt(X ∪ Y)`, decided by comparing orders.
/// Requires `|X|, |Y| ≥ 3` and `X ∩ Y ≠ ∅`.
pub fn alt_generation_check(x: &[usize], y: &[usize]) -> Result<bool, PermGroupError> {
    let (x, y) = (sorted_set(x), sorted_set(y));
    if x.len() < 3 || y.len() < 3 {
        return Err(PermGroupError::Precondition(format!(
            "both sets need at least 3 points (got {} and {})",
            x.len(),
            y.len()
        )));
    }
    if !x.iter().any(|p| y.contains(p)) {
        return Err(PermGroupError::Precondition("the sets are disjoint".into()));
    }
    let union = sorted_set(&[x.clone(), y.clone()].concat());
    let degree = union.last().map_or(0, |&m| m + 1);
    let ax = PermGroup::alternating_on(degree, &x);
    let ay = PermGroup::alternating_on(degree, &y);
    let joined = PermGroup::generated_by(degree, &[&ax, &ay])?;
    Ok(*joined.order() == *PermGroup::alternating_on(degree, &union).order())
}

/// `[g, h] = g⁻¹h⁻¹gh`, the convention under which the double commutator
/// identity below holds.
fn comm(g: &Perm, h: &Perm) -> Perm {
    g.inverse().then(&h.inverse()).then(g).then(h)
}

/// `[[γ, α], β]` with `[g, h] = g⁻¹h⁻¹gh`.
pub fn double_commutator(gamma: &Perm, alpha: &Perm, beta: &Perm) -> Perm {
    comm(&comm(gamma, alpha), beta)
}

/// Checks `[[γ, α], β] = [α, β]` for `α`, `β` supported in `U` and
/// `U ∩ U·γ = ∅`.
pub fn double_commutator_check(gamma: &Perm, alpha: &Perm, beta: &Perm, u: &[usize]) -> Result<bool, PermGroupError> {
    let n = gamma.degree();
    for p in [alpha, beta] {
        if p.degree() != n {
            return Err(PermGroupError::Degree {
                expected: n,
                found: p.degree(),
            });
        }
    }
    let mut in_u = vec![false; n];
    for &x in u {
        if x >= n {
            return Err(PermGroupError::Precondition(format!("point {x} outside the domain")));
        }
        in_u[x] = true;
    }
    if let Some(x) = alpha.support().into_iter().chain(beta.support()).find(|&x| !in_u[x]) {
        return Err(PermGroupError::Precondition(format!("support point {x} lies outside U")));
    }
    if let Some(&x) = u.iter().find(|&&x| in_u[gamma.image(x)]) {
        return Err(PermGroupError::Precondition(format!(
            "U meets its translate: {x}·γ = {} is in U",
            gamma.image(x)
        )));
    }
    Ok(double_commutator(gamma, alpha, beta) == comm(alpha, beta))
}
