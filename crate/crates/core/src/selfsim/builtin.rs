//! Recursion tables of the standard examples.

use super::table::{RecursionTable, Rule};
use super::word::{Letter, Word};
use super::SelfSimError;
use crate::perm::Perm;
use crate::treecore::{BoundaryRay, ValencySequence};

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn swap() -> Perm {
    Perm::from_images(vec![1, 0]).expect("valid")
}

fn w(g: usize) -> Word {
    Word::gen(g)
}

fn one() -> Word {
    Word::empty()
}

/// `a = ε, b = (a, c), c = (a, d), d = (1, b)`.
pub fn grigorchuk() -> RecursionTable {
    let id = Perm::identity(2);
    let rules = vec![
        Rule { perm: swap(), sections: vec![one(), one()] },
        Rule { perm: id.clone(), sections: vec![w(0), w(2)] },
        Rule { perm: id.clone(), sections: vec![w(0), w(3)] },
        Rule { perm: id, sections: vec![one(), w(1)] },
    ];
    RecursionTable::new("grigorchuk", ValencySequence::binary(), names(&["a", "b", "c", "d"]), rules)
        .expect("builtin table is valid")
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

/// `a = (0 1 … p−1)`, `t = (a, a⁻¹, 1, …, 1, t)` on the `p`-regular tree.
pub fn gupta_sidki(p: usize) -> Result<RecursionTable, SelfSimError> {
    if p < 3 || !is_prime(p) {
        return Err(SelfSimError::InvalidParameter(format!("p = {p} is not a prime at least 3")));
    }
    let cycle = Perm::from_images((0..p).map(|x| (x + 1) % p).collect()).expect("valid");
    let mut t_sections = vec![one(); p];
    t_sections[0] = w(0);
    t_sections[1] = Word::letter(Letter::new(0).inv());
    t_sections[p - 1] = w(1);
    let rules = vec![
        Rule { perm: cycle, sections: vec![one(); p] },
        Rule { perm: Perm::identity(p), sections: t_sections },
    ];
    RecursionTable::new(
        &format!("gupta_sidki:{p}"),
        ValencySequence::regular(p),
        names(&["a", "t"]),
        rules,
    )
}

/// `a = (1, b), b = (1, a) ε`.
pub fn basilica() -> RecursionTable {
    let rules = vec![
        Rule { perm: Perm::identity(2), sections: vec![one(), w(1)] },
        Rule { perm: swap(), sections: vec![one(), w(0)] },
    ];
    RecursionTable::new("basilica", ValencySequence::binary(), names(&["a", "b"]), rules)
        .expect("builtin table is valid")
}

/// One generator `e = (e, e)` acting trivially on the binary tree.
pub fn trivial() -> RecursionTable {
    let rules = vec![Rule { perm: Perm::identity(2), sections: vec![w(0), w(0)] }];
    RecursionTable::new("trivial", ValencySequence::binary(), names(&["e"]), rules).expect("builtin table is valid")
}

/// The value of letter `ω_j` on `b`, `c`, `d`: each letter kills one of the
/// three and sends the other two to `a`.
fn omega_column(letter: usize, gen: usize) -> bool {
    // gen: 1 = b, 2 = c, 3 = d; letter 0 kills d, 1 kills c, 2 kills b
    !matches!((letter, gen), (0, 3) | (1, 2) | (2, 1))
}

/// `G_ω`: `b_ω = (ω_0(b), b_{sω})` and likewise for `c`, `d`, with `a = ε`.
/// `ω` must be eventually periodic over `{0, 1, 2}`.
pub fn grigorchuk_omega(omega: &BoundaryRay) -> Result<RecursionTable, SelfSimError> {
    if let Some(&bad) = omega.preperiod().iter().chain(omega.period()).find(|&&x| x > 2) {
        return Err(SelfSimError::InvalidParameter(format!("omega letter {bad} is not in {{0,1,2}}")));
    }
    let pre = omega.preperiod().len();
    let period = omega.period().len();
    let rules = (0..pre + period)
        .map(|key| {
            let letter = omega.digit(key + 1);
            let mut row = vec![Rule { perm: swap(), sections: vec![one(), one()] }];
            for gen in 1..4 {
                let first = if omega_column(letter, gen) { w(0) } else { one() };
                row.push(Rule {
                    perm: Perm::identity(2),
                    sections: vec![first, w(gen)],
                });
            }
            row
        })
        .collect();
    RecursionTable::with_levels(
        &format!("grigorchuk_omega:{omega}"),
        ValencySequence::binary(),
        names(&["a", "b", "c", "d"]),
        rules,
        pre,
        period,
        Some(omega.clone()),
    )
}

/// Parses `"pre(period)"`, `"(period)"` or a bare period such as `"012"`.
pub fn parse_omega(text: &str) -> Result<BoundaryRay, SelfSimError> {
    let text = text.trim();
    let digits = |s: &str| -> Result<Vec<usize>, SelfSimError> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| SelfSimError::InvalidParameter(format!("bad omega {text:?}")))
            })
            .collect()
    };
    let (pre, period) = match text.find('(') {
        Some(open) => {
            let close = text
                .find(')')
                .ok_or_else(|| SelfSimError::InvalidParameter(format!("bad omega {text:?}")))?;
            (digits(&text[..open])?, digits(&text[open + 1..close])?)
        }
        None => (Vec::new(), digits(text)?),
    };
    BoundaryRay::new(pre, period).map_err(|e| SelfSimError::InvalidParameter(e.to_string()))
}

/// Looks up a builtin by name: `grigorchuk`, `basilica`, `trivial`,
/// `gupta_sidki:P` and `grigorchuk_omega:PRE(PERIOD)`.
pub fn by_name(spec: &str) -> Result<RecursionTable, SelfSimError> {
    let spec = spec.trim();
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (spec, None),
    };
    match (name.replace('-', "_").to_ascii_lowercase().as_str(), arg) {
        ("grigorchuk", None) => Ok(grigorchuk()),
        ("basilica", None) => Ok(basilica()),
        ("trivial", None) => Ok(trivial()),
        ("gupta_sidki", Some(p)) => {
            let p = p
                .trim_start_matches("p=")
                .parse()
                .map_err(|_| SelfSimError::InvalidParameter(format!("bad prime {p:?}")))?;
            gupta_sidki(p)
        }
        ("gupta_sidki", None) => gupta_sidki(3),
        ("grigorchuk_omega", Some(o)) => grigorchuk_omega(&parse_omega(o)?),
        _ => Err(SelfSimError::InvalidParameter(format!("unknown builtin {spec:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grigorchuk_sections() {
        let g = grigorchuk();
        let b = g.generator("b").unwrap();
        assert_eq!(g.rule(0, b).sections[0], Word::gen(0));
        assert_eq!(g.rule(0, b).sections[1], Word::gen(2));
    }

    #[test]
    fn gupta_sidki_needs_an_odd_prime() {
        assert!(gupta_sidki(4).is_err());
        assert!(gupta_sidki(2).is_err());
        let t = gupta_sidki(5).unwrap();
        assert_eq!(t.display_word(&t.rule(0, 1).sections[1]), "a^-1");
        assert_eq!(t.rule(0, 1).sections[4], Word::gen(1));
    }

    #[test]
    fn omega_tables() {
        let t = by_name("grigorchuk_omega:(2)").unwrap();
        assert!(t.is_level_indexed());
        assert_eq!(t.num_keys(), 1);
        let t = by_name("grigorchuk_omega:(012)").unwrap();
        assert!(t.is_level_indexed());
        assert_eq!(t.num_keys(), 3);
        assert_eq!(t.key(4), 1);
        // letter 2 sends b to 1
        assert!(t.rule(2, 1).sections[0].is_empty());
        assert!(by_name("grigorchuk_omega:(013)").is_err());
        assert_eq!(parse_omega("01(2)").unwrap().digit(5), 2);
    }
}
