//! Standard diagrams and the random generator used by property sweeps.

use rand::Rng;

use super::diagram::BratteliDiagram;
use super::BratteliError;

/// One vertex per level joined by `d` parallel edges: the `d`-adic odometer.
pub fn odometer(d: usize, horizon: usize) -> BratteliDiagram {
    assert!(d >= 1, "an odometer needs at least one edge per level");
    let edges = vec![vec![(0, 0); d]; horizon];
    BratteliDiagram::new(vec![1; horizon + 1], edges).expect("odometer is valid")
}

/// One vertex per level joined by a single edge.
pub fn chain(horizon: usize) -> BratteliDiagram {
    odometer(1, horizon)
}

/// Two parallel chains split at level 1; not simple.
pub fn two_chains(horizon: usize) -> BratteliDiagram {
    let mut levels = vec![1];
    let mut edges = Vec::new();
    for i in 1..=horizon {
        levels.push(2);
        edges.push(if i == 1 { vec![(0, 0), (0, 1)] } else { vec![(0, 0), (1, 1)] });
    }
    BratteliDiagram::new(levels, edges).expect("two chains are valid")
}

/// Builtin diagrams by name: `odometerD`, `chain`, `two_chains`.
pub fn by_name(name: &str, horizon: usize) -> Result<BratteliDiagram, BratteliError> {
    let name = name.trim().to_ascii_lowercase().replace('-', "_");
    if let Some(d) = name.strip_prefix("odometer") {
        let d: usize = if d.is_empty() { Ok(2) } else { d.trim_start_matches(':').parse() }
            .map_err(|_| BratteliError::InvalidDiagram(format!("bad odometer name {name:?}")))?;
        if d == 0 {
            return Err(BratteliError::InvalidDiagram("odometer with no edges".into()));
        }
        return Ok(odometer(d, horizon));
    }
    match name.as_str() {
        "chain" => Ok(chain(horizon)),
        "two_chains" => Ok(two_chains(horizon)),
        _ => Err(BratteliError::InvalidDiagram(format!("unknown builtin diagram {name:?}"))),
    }
}

/// A random simple diagram of the given horizon (at least 2). Level sizes
/// are uniform in `1..=4`; each (source, range) pair carries an edge with
/// probability 1/2, with multiplicity uniform in `1..=3`. Draws violating
/// coverage or simplicity at `horizon` are rejected.
pub fn random_simple(rng: &mut impl Rng, horizon: usize) -> BratteliDiagram {
    assert!(horizon >= 2, "simplicity needs horizon at least 2");
    loop {
        let mut levels = vec![1];
        levels.extend((0..horizon).map(|_| rng.gen_range(1..=4)));
        let mut edges = Vec::with_capacity(horizon);
        for i in 0..horizon {
            let mut level = Vec::new();
            for s in 0..levels[i] {
                for r in 0..levels[i + 1] {
                    if rng.gen_bool(0.5) {
                        let mult = rng.gen_range(1..=3);
                        level.extend(std::iter::repeat((s, r)).take(mult));
                    }
                }
            }
            edges.push(level);
        }
        let Ok(b) = BratteliDiagram::new(levels, edges) else {
            continue;
        };
        if b.is_simple(horizon).map_or(false, |r| r.simple) {
            return b;
        }
    }
}
