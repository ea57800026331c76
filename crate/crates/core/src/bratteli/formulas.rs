use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::clopen::ClopenSet;
use super::diagram::BratteliDiagram;
use super::paths::FinitePath;
use super::BratteliError;

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `|E(v0, v : U)|` for every `v ∈ V_n`: the `n`-paths ending at `v` whose
/// cylinder meets `U`. Needs `n ≥ n_0(U)`.
pub fn meeting_counts(b: &BratteliDiagram, n: usize, u: &ClopenSet) -> Result<Vec<BigUint>, BratteliError> {
    b.check_level(n)?;
    let n0 = u.depth();
    if n < n0 {
        return Err(BratteliError::Precondition(format!("level {n} is below n_0(U) = {n0}")));
    }
    let t = b.transfer(n0, n)?;
    let mut counts = vec![BigUint::zero(); b.level_size(n)];
    for c in u.cylinders() {
        for (v, x) in t[c.end()].iter().enumerate() {
            counts[v] += x;
        }
    }
    Ok(counts)
}

/// `|E(v0, v : U)|` for one vertex `v ∈ V_n`.
pub fn count_meeting(b: &BratteliDiagram, n: usize, v: usize, u: &ClopenSet) -> Result<BigUint, BratteliError> {
    let counts = meeting_counts(b, n, u)?;
    counts
        .get(v)
        .cloned()
        .ok_or_else(|| BratteliError::Precondition(format!("vertex {v} is not in level {n}")))
}

/// `c_v = |E(v0, v : C)|` for a finite set `C` of paths of length at least
/// `n`: the number of distinct `n`-prefixes of `C` ending at each `v ∈ V_n`.
pub fn prefix_counts(b: &BratteliDiagram, n: usize, c: &[FinitePath]) -> Result<Vec<usize>, BratteliError> {
    b.check_level(n)?;
    let mut seen = BTreeSet::new();
    let mut counts = vec![0; b.level_size(n)];
    for p in c {
        b.check_path(p)?;
        let q = p.prefix(b, n)?;
        let end = q.end();
        if seen.insert(q) {
            counts[end] += 1;
        }
    }
    Ok(counts)
}

fn check_degrees(n: usize, degrees: &[BigUint], vertices: impl Iterator<Item = usize>) -> Result<(), BratteliError> {
    let three = BigUint::from(3u32);
    for v in vertices {
        if degrees[v] < three {
            return Err(BratteliError::Degree {
                level: n,
                vertex: v,
                degree: degrees[v].to_string(),
            });
        }
    }
    Ok(())
}

/// `∏_v C(|E(v0,v:U)|, c_v) / C(|E(v0,v)|, c_v)` with `c_v = |E(v0,v:C)|`,
/// the proportion of `g ∈ Γ_n` with `C·g ⊆ U`. Every vertex of `V_n` must
/// carry at least three paths.
pub fn inclusion_probability(b: &BratteliDiagram, c: &[FinitePath], u: &ClopenSet, n: usize) -> Result<BigRational, BratteliError> {
    let degrees = b.path_count(n)?;
    check_degrees(n, &degrees, 0..degrees.len())?;
    let inside = meeting_counts(b, n, u)?;
    let cv = prefix_counts(b, n, c)?;
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for v in 0..degrees.len() {
        let k = BigUint::from(cv[v]);
        if k > inside[v] {
            return Ok(BigRational::zero());
        }
        num *= binomial(inside[v].clone(), k.clone());
        den *= binomial(degrees[v].clone(), k);
    }
    Ok(ratio(num, den))
}

/// Result of [`kset_decay_bound`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsetDecayReport {
    pub n: usize,
    /// Depth of the cylinder `W ⊆ U^c` used.
    pub ell: usize,
    pub m_connect: usize,
    /// `max_{w ∈ V_m} d(v0, w)`.
    pub max_degree_m: BigUint,
    /// `e^{-c} = 1 − 1/max_w d(v0, w)`.
    pub decay: BigRational,
    /// `Σ_v |E(v0, v : C)|`.
    pub exponent: usize,
    pub probability: BigRational,
    /// `(e^{-c})^{exponent}`.
    pub bound: BigRational,
    pub holds: bool,
}

/// Checks `P(C·g ⊆ U) ≤ e^{-c Σ_v |E(v0,v:C)|}` for `g` uniform in `Γ_n`.
/// The complement of `U` must contain a cylinder of some depth `ℓ` with
/// `V_ℓ` fully connected to `V_m`, `ℓ < m ≤ n`. With `m_connect = None` the
/// least such `m` is used.
pub fn kset_decay_bound(
    b: &BratteliDiagram,
    c: &[FinitePath],
    u: &ClopenSet,
    n: usize,
    m_connect: Option<usize>,
) -> Result<KsetDecayReport, BratteliError> {
    b.check_level(n)?;
    let rest = u.complement(b)?;
    if rest.is_empty() {
        return Err(BratteliError::Precondition("U is the whole space, its complement holds no cylinder".into()));
    }
    let mut depths = Vec::new();
    for l in 0..=rest.depth() {
        let mut prefixes = BTreeSet::new();
        for p in rest.cylinders() {
            prefixes.insert(p.prefix(b, l)?);
        }
        let mut found = false;
        for p in &prefixes {
            if ClopenSet::cylinder(b, p).is_subset(b, &rest)? {
                found = true;
                break;
            }
        }
        if found {
            depths.push(l);
        }
    }
    let mut chosen = None;
    for &l in &depths {
        let m = match m_connect {
            Some(m) => (l < m && matches!(b.first_disconnected(l, m), Ok(None))).then_some(m),
            None => b.connecting_level(l, n),
        };
        if let Some(m) = m {
            chosen = Some((l, m));
            break;
        }
    }
    let (ell, m) = chosen.ok_or_else(|| {
        BratteliError::Precondition(format!(
            "no cylinder of the complement of U has its level fully connected to {} within the horizon",
            m_connect.map_or_else(|| format!("a level ≤ {n}"), |m| format!("level {m}"))
        ))
    })?;
    if n < m {
        return Err(BratteliError::Precondition(format!("level n = {n} is below m = {m}")));
    }
    let max_degree_m = b.path_count(m)?.into_iter().max().expect("nonempty level");
    let decay = BigRational::one() - ratio(BigUint::one(), max_degree_m.clone());
    let exponent: usize = prefix_counts(b, n, c)?.iter().sum();
    let probability = inclusion_probability(b, c, u, n)?;
    let mut bound = BigRational::one();
    for _ in 0..exponent {
        bound *= &decay;
    }
    let holds = probability <= bound;
    Ok(KsetDecayReport {
        n,
        ell,
        m_connect: m,
        max_degree_m,
        decay,
        exponent,
        probability,
        bound,
        holds,
    })
}

/// The proportion of `g ∈ Γ_n` with `x·g ∈ U`: `|E(v0,v:U)| / d(v0,v)`
/// where `v` is the end of the `n`-prefix of `x`.
pub fn ergodic_average_point(b: &BratteliDiagram, x: &FinitePath, u: &ClopenSet, n: usize) -> Result<BigRational, BratteliError> {
    b.check_path(x)?;
    let v = x.prefix(b, n)?.end();
    let degrees = b.path_count(n)?;
    check_degrees(n, &degrees, std::iter::once(v))?;
    let inside = meeting_counts(b, n, u)?;
    Ok(ratio(inside[v].clone(), degrees[v].clone()))
}

/// Result of [`product_ratio_bound`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductRatioReport {
    pub k: usize,
    pub n: usize,
    /// `P(K·g ⊆ U)`.
    pub joint: BigRational,
    /// `∏_i P(z_i·g ∈ U)`.
    pub product: BigRational,
    /// `joint / product`; `None` when the product vanishes.
    pub ratio: Option<BigRational>,
    /// `1 − k³ / min_v |E(v0,v:U)|`; `None` when the minimum is 0.
    pub lower: Option<BigRational>,
    /// Whether `lower ≤ ratio ≤ 1`; `None` when the ratio is undefined.
    pub holds: Option<bool>,
}

/// Compares the joint inclusion probability of `K = {z_1, …, z_k}` with the
/// product of the single-point probabilities.
pub fn product_ratio_bound(b: &BratteliDiagram, k: &[FinitePath], u: &ClopenSet, n: usize) -> Result<ProductRatioReport, BratteliError> {
    let mut prefixes = BTreeSet::new();
    for z in k {
        b.check_path(z)?;
        if !prefixes.insert(z.prefix(b, n)?) {
            return Err(BratteliError::Precondition(format!("two points of K share the {n}-prefix {:?}", &z.edges()[..n])));
        }
    }
    let joint = inclusion_probability(b, k, u, n)?;
    let mut product = BigRational::one();
    for z in k {
        product *= ergodic_average_point(b, z, u, n)?;
    }
    let min_inside = meeting_counts(b, n, u)?.into_iter().min().expect("nonempty level");
    let lower = (!min_inside.is_zero()).then(|| {
        let k3 = BigUint::from(k.len()).pow(3);
        BigRational::one() - ratio(k3, min_inside)
    });
    let ratio = (!product.is_zero()).then(|| &joint / &product);
    let holds = ratio.as_ref().map(|r| {
        let above = lower.as_ref().map_or(true, |l| l <= r);
        above && *r <= BigRational::one()
    });
    Ok(ProductRatioReport {
        k: k.len(),
        n,
        joint,
        product,
        ratio,
        lower,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bratteli::builtin::odometer;

    #[test]
    fn trivial_cases() {
        let b = odometer(3, 4);
        let full = ClopenSet::full();
        let x = FinitePath::new(&b, vec![0, 1, 2]).unwrap();
        let y = FinitePath::new(&b, vec![1, 1, 2]).unwrap();
        assert!(inclusion_probability(&b, &[x.clone(), y.clone()], &full, 2).unwrap().is_one());
        assert!(ergodic_average_point(&b, &x, &full, 2).unwrap().is_one());
        let u = ClopenSet::new(&b, &[vec![0]]).unwrap();
        assert_eq!(ergodic_average_point(&b, &x, &u, 2).unwrap(), BigRational::new(1.into(), 3.into()));
        assert_eq!(
            inclusion_probability(&b, &[x.clone()], &u, 2).unwrap(),
            BigRational::new(1.into(), 3.into())
        );
        // two points in a third of the space
        assert_eq!(
            inclusion_probability(&b, &[x.clone(), y.clone()], &u, 2).unwrap(),
            BigRational::new(3.into(), 36.into())
        );
        let r = product_ratio_bound(&b, &[x.clone()], &u, 2).unwrap();
        assert_eq!(r.ratio, Some(BigRational::one()));
        assert!(product_ratio_bound(&b, &[x.clone(), x.clone()], &u, 2).is_err());
        let k = kset_decay_bound(&b, &[], &u, 2, None).unwrap();
        assert!(k.probability.is_one() && k.holds);
        assert_eq!(k.ell, 1);
        assert_eq!(k.m_connect, 2);
        let k = kset_decay_bound(&b, &[x, y], &u, 3, None).unwrap();
        assert!(k.holds);
    }

    #[test]
    fn small_degree_is_rejected() {
        let b = odometer(2, 3);
        let x = FinitePath::new(&b, vec![0]).unwrap();
        assert!(matches!(
            inclusion_probability(&b, &[x], &ClopenSet::full(), 1),
            Err(BratteliError::Degree { .. })
        ));
    }
}
