//! Dense permutations of `{0, …, n-1}` acting on the right.
//!
//! `x.image(p)` is written `x·p` in the math, and `p.then(q)` is the product
//! `pq`: first `p`, then `q`. Every group product in the crate uses this
//! convention.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("image list of length {len} is not a permutation (value {value} repeated or out of range)")]
    NotBijection { len: usize, value: usize },
    #[error("domain mismatch: {left} vs {right} points")]
    DomainMismatch { left: usize, right: usize },
    #[error("domain of {0} points does not fit in u32")]
    TooLarge(usize),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Perm {
    images: Vec<u32>,
}

impl TryFrom<Vec<u32>> for Perm {
    type Error = PermError;
    fn try_from(images: Vec<u32>) -> Result<Self, Self::Error> {
        Perm::from_images(images.into_iter().map(|x| x as usize).collect())
    }
}

impl From<Perm> for Vec<u32> {
    fn from(p: Perm) -> Self {
        p.images
    }
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n as u32).collect(),
        }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Perm, PermError> {
        let n = images.len();
        if n > u32::MAX as usize {
            return Err(PermError::TooLarge(n));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection { len: n, value: x });
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Perm {
        debug_assert!(Perm::from_images(images.iter().map(|&x| x as usize).collect()).is_ok());
        Perm { images }
    }

    /// The permutation given by disjoint cycles on `n` points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x >= n || y >= n {
                    return Err(PermError::NotBijection { len: n, value: x.max(y) });
                }
                images[x] = y;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// The product `self · other` (apply `self` first).
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "permutation degree mismatch");
        Perm {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    pub fn try_then(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DomainMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, e: i64) -> Perm {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = Perm::identity(self.degree());
        for _ in 0..e.unsigned_abs() {
            acc = acc.then(&base);
        }
        acc
    }

    /// `h⁻¹ · self · h`, the conjugate `self^h`.
    pub fn conjugate_by(&self, h: &Perm) -> Perm {
        h.inverse().then(self).then(h)
    }

    /// `[g, h] = g h g⁻¹ h⁻¹`.
    pub fn commutator(g: &Perm, h: &Perm) -> Perm {
        g.then(h).then(&g.inverse()).then(&h.inverse())
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.image(x) == x
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&x| !self.fixes(x)).collect()
    }

    pub fn first_moved(&self) -> Option<usize> {
        (0..self.degree()).find(|&x| !self.fixes(x))
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.fixes(start) {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
