//! sl₅ weights in fundamental-weight coordinates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// (λ₁₂, λ₂₃, λ₃₄, λ₄₅).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub [i32; 4]);

impl Weight {
    pub const ZERO: Weight = Weight([0; 4]);

    pub fn new(a: i32, b: i32, c: i32, d: i32) -> Weight {
        Weight([a, b, c, d])
    }

    /// Projection of a gl₅ weight (coefficients of ε₁..ε₅).
    pub fn from_gl(c: &[i32; 5]) -> Weight {
        Weight([c[0] - c[1], c[1] - c[2], c[2] - c[3], c[3] - c[4]])
    }

    /// λ_{ij} = Σ_{k=i}^{j−1} λ_{k,k+1} (0-based, i < j).
    pub fn lambda_ij(&self, i: usize, j: usize) -> i32 {
        self.0[i..j].iter().sum()
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn dual(&self) -> Weight {
        let [a, b, c, d] = self.0;
        Weight([d, c, b, a])
    }

    pub fn coord_sum(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2], self.0[3] - o.0[3]])
    }

    /// All dominant weights with coordinate sum at most `budget`, in canonical order.
    pub fn dominant_up_to(budget: i32) -> Vec<Weight> {
        let mut out = Vec::new();
        for a in 0..=budget {
            for b in 0..=budget - a {
                for c in 0..=budget - a - b {
                    for d in 0..=budget - a - b - c {
                        out.push(Weight([a, b, c, d]));
                    }
                }
            }
        }
        out.sort_by_key(|w| (w.coord_sum(), std::cmp::Reverse(w.0)));
        out
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "{a},{b},{c},{d}")
    }
}

impl FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("weight needs 4 coordinates: {s:?}")));
        }
        let mut w = [0i32; 4];
        for (k, p) in parts.iter().enumerate() {
            w[k] = p.parse().map_err(|_| Error::Parse(format!("bad weight coordinate {p:?}")))?;
        }
        Ok(Weight(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_examples() {
        assert_eq!(Weight::new(1, 0, 0, 0).dual(), Weight::new(0, 0, 0, 1));
        assert_eq!(Weight::ZERO.dual(), Weight::ZERO);
        assert_eq!(Weight::new(2, 0, 0, 2).dual(), Weight::new(2, 0, 0, 2));
    }

    #[test]
    fn parse_print() {
        let w: Weight = "0,0,0,1".parse().unwrap();
        assert_eq!(w, Weight::new(0, 0, 0, 1));
        assert_eq!(w.to_string(), "0,0,0,1");
        assert!("1,2,3".parse::<Weight>().is_err());
    }

    #[test]
    fn from_gl_projection() {
        // x5* has gl weight -e5
        assert_eq!(Weight::from_gl(&[0, 0, 0, 0, -1]), Weight::new(0, 0, 0, 1));
        // x45* has gl weight -e4 - e5
        assert_eq!(Weight::from_gl(&[0, 0, 0, -1, -1]), Weight::new(0, 0, 1, 0));
        assert_eq!(Weight::new(1, 2, 0, 3).lambda_ij(0, 3), 3);
    }

    #[test]
    fn dominant_enumeration() {
        assert_eq!(Weight::dominant_up_to(0), vec![Weight::ZERO]);
        assert_eq!(Weight::dominant_up_to(3).len(), 35);
    }
}
