use num_bigint::BigInt;
use num_rational::BigRational;

use super::{ClosedSetSpec, Color, ColoringError};
use crate::treecore::{Level, ValencySequence, Vertex};

/// The red/green/blue partition of every level `0..=horizon` induced by a
/// closed set. Level `i` is stored densely in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    valency: ValencySequence,
    set: ClosedSetSpec,
    levels: Vec<Vec<Color>>,
}

impl Coloring {
    pub fn new(set: &ClosedSetSpec, valency: &ValencySequence, horizon: usize) -> Result<Coloring, ColoringError> {
        Level::new(valency, horizon)?;
        let set = set.normalized(valency)?;
        let mut levels = vec![vec![set.color_of(&Vertex::root())]];
        for i in 1..=horizon {
            let d = valency.degree(i);
            let prev = Level::new(valency, i - 1)?;
            let mut row = Vec::with_capacity(levels[i - 1].len() * d);
            for (idx, &c) in levels[i - 1].iter().enumerate() {
                match c {
                    Color::Blue => {
                        let v = prev.vertex_at(idx);
                        row.extend((0..d).map(|x| set.color_of(&v.child(x))));
                    }
                    c => row.extend(std::iter::repeat(c).take(d)),
                }
            }
            levels.push(row);
        }
        Ok(Coloring {
            valency: valency.clone(),
            set,
            levels,
        })
    }

    pub fn horizon(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn valency(&self) -> &ValencySequence {
        &self.valency
    }

    /// The normalized closed set.
    pub fn set(&self) -> &ClosedSetSpec {
        &self.set
    }

    pub fn level(&self, i: usize) -> &[Color] {
        &self.levels[i]
    }

    pub fn color(&self, v: &Vertex) -> Color {
        if v.depth() <= self.horizon() {
            let level = Level::with_cap(&self.valency, v.depth(), usize::MAX).expect("no cap");
            self.levels[v.depth()][level.index_of(v)]
        } else {
            self.set.color_of(v)
        }
    }

    fn with_color(&self, i: usize, c: Color) -> Vec<Vertex> {
        let level = Level::with_cap(&self.valency, i, usize::MAX).expect("no cap");
        self.levels[i]
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == c)
            .map(|(idx, _)| level.vertex_at(idx))
            .collect()
    }

    pub fn red(&self, i: usize) -> Vec<Vertex> {
        self.with_color(i, Color::Red)
    }

    pub fn green(&self, i: usize) -> Vec<Vertex> {
        self.with_color(i, Color::Green)
    }

    pub fn blue(&self, i: usize) -> Vec<Vertex> {
        self.with_color(i, Color::Blue)
    }

    /// `(|R_i|, |G_i|, |B_i|)`.
    pub fn counts(&self, i: usize) -> (usize, usize, usize) {
        self.levels[i].iter().fold((0, 0, 0), |(r, g, b), c| match c {
            Color::Red => (r + 1, g, b),
            Color::Green => (r, g + 1, b),
            Color::Blue => (r, g, b + 1),
        })
    }

    /// `q_b(i) = |B_i| / |L_i|`.
    pub fn q_b(&self, i: usize) -> BigRational {
        BigRational::new(BigInt::from(self.counts(i).2), BigInt::from(self.levels[i].len()))
    }

    /// Maximal red vertices up to the horizon, by depth then
    /// lexicographically.
    pub fn index_set(&self) -> Vec<Vertex> {
        let mut out = Vec::new();
        for i in 0..=self.horizon() {
            let level = Level::with_cap(&self.valency, i, usize::MAX).expect("no cap");
            for (idx, &c) in self.levels[i].iter().enumerate() {
                if c != Color::Red {
                    continue;
                }
                let parent_red = i > 0 && self.levels[i - 1][level.ancestor_index(idx, i - 1)] == Color::Red;
                if !parent_red {
                    out.push(level.vertex_at(idx));
                }
            }
        }
        out
    }
}

/// `I_K` up to `horizon`.
pub fn index_set(set: &ClosedSetSpec, valency: &ValencySequence, horizon: usize) -> Result<Vec<Vertex>, ColoringError> {
    Ok(Coloring::new(set, valency, horizon)?.index_set())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treecore::BoundaryRay;

    #[test]
    fn spine_coloring() {
        let bin = ValencySequence::binary();
        let c = Coloring::new(&ClosedSetSpec::ray(BoundaryRay::constant(1)), &bin, 5).unwrap();
        assert_eq!(c.blue(3), vec![Vertex::new(vec![1, 1, 1])]);
        let names: Vec<String> = c.index_set().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["0", "10", "110", "1110", "11110"]);
        assert_eq!(c.q_b(4), BigRational::new(1.into(), 16.into()));
    }

    #[test]
    fn degenerate_sets() {
        let bin = ValencySequence::binary();
        let c = Coloring::new(&ClosedSetSpec::empty(), &bin, 3).unwrap();
        assert_eq!(c.index_set(), vec![Vertex::root()]);
        assert_eq!(c.counts(3), (8, 0, 0));
        let c = Coloring::new(&ClosedSetSpec::full(), &bin, 3).unwrap();
        assert_eq!(c.counts(2), (0, 4, 0));
        assert!(c.index_set().is_empty());
        let c = Coloring::new(&ClosedSetSpec::new(vec!["00".parse().unwrap()], vec![]), &bin, 4).unwrap();
        let names: Vec<String> = c.index_set().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["1", "01"]);
        assert_eq!(c.counts(3).2, 0);
    }
}
