use std::fmt;

use serde::{Deserialize, Serialize};

use super::{TreeError, ValencySequence, Vertex};
use crate::periodic;

/// An eventually periodic boundary point `pre · period^∞` of the tree.
///
/// Only eventually periodic rays are representable. Stored canonically, so
/// derived equality is equality of rays.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RayJson", into = "RayJson")]
pub struct BoundaryRay {
    pre: Vec<usize>,
    period: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RayJson {
    #[serde(default)]
    pre: Vertex,
    period: Vertex,
}

impl TryFrom<RayJson> for BoundaryRay {
    type Error = TreeError;
    fn try_from(r: RayJson) -> Result<Self, Self::Error> {
        BoundaryRay::new(r.pre.digits().to_vec(), r.period.digits().to_vec())
    }
}

impl From<BoundaryRay> for RayJson {
    fn from(r: BoundaryRay) -> Self {
        RayJson {
            pre: Vertex::new(r.pre),
            period: Vertex::new(r.period),
        }
    }
}

impl BoundaryRay {
    pub fn new(pre: Vec<usize>, period: Vec<usize>) -> Result<Self, TreeError> {
        if period.is_empty() {
            return Err(TreeError::Malformed("ray period must be nonempty".into()));
        }
        let (pre, period) = periodic::canonicalize(pre, period);
        Ok(BoundaryRay { pre, period })
    }

    /// The constant ray `x^∞`.
    pub fn constant(x: usize) -> Self {
        BoundaryRay {
            pre: Vec::new(),
            period: vec![x],
        }
    }

    pub fn preperiod(&self) -> &[usize] {
        &self.pre
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    /// Digit at 1-based position `j`.
    pub fn digit(&self, j: usize) -> usize {
        assert!(j >= 1, "ray positions are numbered from 1");
        periodic::at(&self.pre, &self.period, j - 1)
    }

    /// The level-`n` vertex on this ray.
    pub fn prefix(&self, n: usize) -> Vertex {
        Vertex::new((1..=n).map(|j| self.digit(j)).collect())
    }

    pub fn passes_through(&self, v: &Vertex) -> bool {
        v.digits().iter().enumerate().all(|(k, &d)| self.digit(k + 1) == d)
    }

    /// Checks that every digit is below the degree of its level. Both
    /// sequences are eventually periodic, so a finite window decides this.
    pub fn validate(&self, valency: &ValencySequence) -> Result<(), TreeError> {
        let window = self.pre.len().max(valency.preperiod().len())
            + periodic::lcm(self.period.len(), valency.period().len());
        for j in 1..=window {
            let (digit, degree) = (self.digit(j), valency.degree(j));
            if digit >= degree {
                return Err(TreeError::DigitOutOfRange {
                    position: j,
                    digit,
                    degree,
                });
            }
        }
        Ok(())
    }

    /// The ray with its first `n` digits removed.
    pub fn shift(&self, n: usize) -> Self {
        let (pre, period) = periodic::shift(&self.pre, &self.period, n);
        BoundaryRay { pre, period }
    }
}

impl fmt::Display for BoundaryRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = Vertex::new(self.pre.clone());
        if !pre.is_root() {
            write!(f, "{pre}")?;
        }
        write!(f, "({})^∞", Vertex::new(self.period.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_prefix() {
        let r: BoundaryRay = serde_json::from_str(r#"{"pre":"1","period":"1"}"#).unwrap();
        assert_eq!(r, BoundaryRay::constant(1));
        assert_eq!(r.prefix(3).to_string(), "111");
        let r: BoundaryRay = serde_json::from_str(r#"{"pre":"","period":"01"}"#).unwrap();
        assert_eq!(r.digit(4), 1);
        assert_eq!(r.shift(1), BoundaryRay::new(vec![], vec![1, 0]).unwrap());
    }

    #[test]
    fn validation_against_valency() {
        let val = ValencySequence::new(vec![], vec![2, 3]).unwrap();
        assert!(BoundaryRay::new(vec![], vec![0, 2]).unwrap().validate(&val).is_ok());
        assert!(BoundaryRay::new(vec![], vec![2]).unwrap().validate(&val).is_err());
        assert!(BoundaryRay::new(vec![1], vec![0, 2]).unwrap().validate(&val).is_err());
    }
}
