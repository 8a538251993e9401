//! Permutations of `{0, .., n-1}` in one-line notation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `{0, .., n-1}`, stored by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from its one-line images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `0..n` from disjoint cycles; omitted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<Option<usize>> = vec![None; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x >= n || y >= n {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle {cycle:?} leaves 0..{n}"
                    )));
                }
                if images[x].is_some() {
                    return Err(Error::InvalidPermutation(format!(
                        "point {x} appears in more than one cycle"
                    )));
                }
                images[x] = Some(y);
            }
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(i, y)| y.unwrap_or(i))
            .collect();
        Self::from_images(images)
    }

    /// Parses one-line (`"2,0,1"`) or cycle (`"(0 1 2)(3)"`) notation.
    ///
    /// In cycle notation the degree is `n` when given, otherwise one more than
    /// the largest point mentioned. One-line input must have exactly `n`
    /// entries when `n` is given.
    pub fn parse(s: &str, n: Option<usize>) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('(') {
            let cycles = parse_cycles(s)?;
            let inferred = cycles.iter().flatten().max().map_or(1, |&m| m + 1);
            let n = match n {
                Some(n) if n < inferred => {
                    return Err(Error::InvalidPermutation(format!(
                        "cycle notation {s:?} mentions points beyond 0..{n}"
                    )))
                }
                Some(n) => n,
                None => inferred,
            };
            Self::from_cycles(n, &cycles)
        } else {
            let images = s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad entry {t:?} in {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(n) = n {
                if images.len() != n {
                    return Err(Error::SizeMismatch {
                        left: images.len(),
                        right: n,
                    });
                }
            }
            Self::from_images(images)
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(
            self.len(),
            other.len(),
            "composing permutations of different degree"
        );
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    /// `self^k` for any integer `k`, computed cycle by cycle.
    pub fn pow(&self, k: i64) -> Self {
        let mut images = vec![0; self.len()];
        for cycle in self.cycles() {
            let m = cycle.len() as i64;
            let shift = k.rem_euclid(m) as usize;
            for (idx, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(idx + shift) % cycle.len()];
            }
        }
        Permutation { images }
    }

    /// `pi ∘ self ∘ pi⁻¹`, i.e. the same permutation after renaming each point `x` to `pi(x)`.
    pub fn conjugate_by(&self, pi: &Self) -> Self {
        let mut images = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[pi.apply(i)] = pi.apply(x);
        }
        Permutation { images }
    }

    /// Disjoint cycles, each starting at its smallest point, ordered by that point.
    /// Fixed points are included as cycles of length one.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// For each point, the index of its cycle in [`Permutation::cycles`].
    pub fn cycle_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.len()];
        for (c, cycle) in self.cycles().iter().enumerate() {
            for &x in cycle {
                idx[x] = c;
            }
        }
        idx
    }

    /// Cycle notation, fixed points omitted (`"()"` for the identity).
    pub fn to_cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                let inner: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("({})", inner.join(" "))
            })
            .collect();
        if parts.is_empty() {
            "()".to_string()
        } else {
            parts.concat()
        }
    }
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::InvalidPermutation(format!("expected '(' in {s:?}")))?;
        let close = open
            .find(')')
            .ok_or_else(|| Error::InvalidPermutation(format!("unbalanced cycle in {s:?}")))?;
        let body = &open[..close];
        let cycle = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidPermutation(format!("bad point {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = open[close + 1..].trim_start();
    }
    Ok(cycles)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, None)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Self::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}
