//! Origamis (square-tiled surfaces) as pairs of permutations.
//!
//! Squares are labelled `0..n`. `h(i)` is the square glued to the right edge
//! of square `i`, `v(i)` the square glued to its top edge. The corner
//! permutation is the commutator `c = v ∘ h ∘ v⁻¹ ∘ h⁻¹`: starting in square
//! `i` and walking left, down, right, up around the bottom-left corner of `i`
//! ends in `c(i)`. Two squares share their bottom-left corner iff they lie in
//! the same cycle of `c`, and a cycle of length `m` is a cone point of angle
//! `2πm`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Origami {
    h: Permutation,
    v: Permutation,
}

/// Zero orders of the holomorphic form together with the genus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Stratum {
    /// Orders `k_i >= 1`, sorted in decreasing order. Empty for genus one.
    pub orders: Vec<u32>,
    pub genus: u32,
    /// Regular vertices (fixed points of the commutator).
    pub marked_points: usize,
}

impl Stratum {
    pub fn order_sum(&self) -> u32 {
        self.orders.iter().sum()
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return f.write_str("H(0)");
        }
        let parts: Vec<String> = self.orders.iter().map(|k| k.to_string()).collect();
        write!(f, "H({})", parts.join(","))
    }
}

impl Origami {
    pub fn new(h: Permutation, v: Permutation) -> Result<Self> {
        if h.len() != v.len() {
            return Err(Error::SizeMismatch {
                left: h.len(),
                right: v.len(),
            });
        }
        if h.is_empty() {
            return Err(Error::Empty);
        }
        let o = Origami { h, v };
        let components = o.components();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(o)
    }

    /// Builds from one-line image vectors.
    pub fn from_images(h: Vec<usize>, v: Vec<usize>) -> Result<Self> {
        Self::new(Permutation::from_images(h)?, Permutation::from_images(v)?)
    }

    /// Parses both permutations with a common degree (see [`Permutation::parse`]).
    pub fn parse(h: &str, v: &str, n: Option<usize>) -> Result<Self> {
        let n = match n {
            Some(n) => Some(n),
            None => {
                let a = Permutation::parse(h, None)?;
                let b = Permutation::parse(v, None)?;
                Some(a.len().max(b.len()))
            }
        };
        Self::new(Permutation::parse(h, n)?, Permutation::parse(v, n)?)
    }

    /// Internal constructor for pairs known to be transitive.
    pub(crate) fn from_parts_unchecked(h: Permutation, v: Permutation) -> Self {
        debug_assert_eq!(h.len(), v.len());
        Origami { h, v }
    }

    pub fn torus() -> Self {
        Origami {
            h: Permutation::identity(1),
            v: Permutation::identity(1),
        }
    }

    /// Number of squares, which is also the area.
    pub fn n(&self) -> usize {
        self.h.len()
    }

    pub fn h(&self) -> &Permutation {
        &self.h
    }

    pub fn v(&self) -> &Permutation {
        &self.v
    }

    fn components(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(x) = stack.pop() {
                for y in [self.h.apply(x), self.v.apply(x)] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    pub fn commutator(&self) -> Permutation {
        let hi = self.h.inverse();
        let vi = self.v.inverse();
        self.v.compose(&self.h).compose(&vi).compose(&hi)
    }

    /// Cycles of the commutator. Together they partition the squares.
    pub fn vertex_cycles(&self) -> Vec<Vec<usize>> {
        self.commutator().cycles()
    }

    pub fn stratum(&self) -> Stratum {
        let cycles = self.vertex_cycles();
        let mut orders: Vec<u32> = cycles
            .iter()
            .filter(|c| c.len() > 1)
            .map(|c| (c.len() - 1) as u32)
            .collect();
        orders.sort_unstable_by(|a, b| b.cmp(a));
        let marked_points = cycles.iter().filter(|c| c.len() == 1).count();
        let genus = orders.iter().sum::<u32>() / 2 + 1;
        Stratum {
            orders,
            genus,
            marked_points,
        }
    }

    pub fn genus(&self) -> u32 {
        self.stratum().genus
    }

    /// Euler-characteristic genus `1 + (n - V)/2`.
    pub fn euler_genus(&self) -> u32 {
        let vertices = self.vertex_cycles().len();
        (1 + (self.n() - vertices) / 2) as u32
    }

    /// For each square, whether its bottom-left corner is a singular point.
    ///
    /// Singular points are the true cone points (angle > 2π). A surface of
    /// genus one has none, so the bottom-left corner of square 0 is
    /// distinguished instead; every genus-one surface is a torus on which
    /// translations move that point to any other vertex, so cylinder and
    /// saddle connection data do not depend on the choice.
    pub fn singular_corners(&self) -> Vec<bool> {
        let cycles = self.vertex_cycles();
        let mut singular = vec![false; self.n()];
        let mut any = false;
        for cycle in &cycles {
            if cycle.len() > 1 {
                any = true;
                for &x in cycle {
                    singular[x] = true;
                }
            }
        }
        if !any {
            singular[0] = true;
        }
        singular
    }

    /// Renames square `x` to `pi(x)`.
    pub fn relabel(&self, pi: &Permutation) -> Self {
        Origami {
            h: self.h.conjugate_by(pi),
            v: self.v.conjugate_by(pi),
        }
    }

    /// Whether `pi` commutes with both gluings, i.e. is a translation automorphism.
    pub fn is_automorphism(&self, pi: &Permutation) -> bool {
        pi.compose(&self.h) == self.h.compose(pi) && pi.compose(&self.v) == self.v.compose(pi)
    }

    /// All translation automorphisms. Each is determined by the image of square 0.
    pub fn translation_automorphisms(&self) -> Vec<Permutation> {
        let n = self.n();
        let hi = self.h.inverse();
        let vi = self.v.inverse();
        let by_label = |base: usize| {
            let mut squares = vec![0; n];
            for (x, l) in self.bfs_labelling(base, &hi, &vi).into_iter().enumerate() {
                squares[l] = x;
            }
            squares
        };
        let from_zero = by_label(0);
        (0..n)
            .filter_map(|j| {
                let from_j = by_label(j);
                let mut images = vec![0; n];
                for l in 0..n {
                    images[from_zero[l]] = from_j[l];
                }
                let pi = Permutation::from_images(images).ok()?;
                self.is_automorphism(&pi).then_some(pi)
            })
            .collect()
    }

    /// Breadth-first relabelling from `base`, visiting neighbours in the
    /// order `h, h⁻¹, v, v⁻¹`. Returns the map old label -> new label.
    fn bfs_labelling(&self, base: usize, hi: &Permutation, vi: &Permutation) -> Vec<usize> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut queue = VecDeque::with_capacity(n);
        label[base] = 0;
        let mut next = 1;
        queue.push_back(base);
        while let Some(x) = queue.pop_front() {
            for y in [self.h.apply(x), hi.apply(x), self.v.apply(x), vi.apply(x)] {
                if label[y] == usize::MAX {
                    label[y] = next;
                    next += 1;
                    queue.push_back(y);
                }
            }
        }
        label
    }

    /// Canonical representative of the relabelling class together with the
    /// relabelling `pi` (old -> new) such that `self.relabel(&pi)` is it.
    pub fn canonical_with_relabeling(&self) -> (Origami, Permutation) {
        let n = self.n();
        let hi = self.h.inverse();
        let vi = self.v.inverse();
        let mut best: Option<(Vec<usize>, Vec<usize>, Vec<usize>)> = None;
        let mut h_new = vec![0; n];
        let mut v_new = vec![0; n];
        for base in 0..n {
            let label = self.bfs_labelling(base, &hi, &vi);
            for x in 0..n {
                h_new[label[x]] = label[self.h.apply(x)];
                v_new[label[x]] = label[self.v.apply(x)];
            }
            let better = match &best {
                None => true,
                Some((_, bh, bv)) => (&h_new, &v_new) < (bh, bv),
            };
            if better {
                best = Some((label, h_new.clone(), v_new.clone()));
            }
        }
        let (label, _, _) = best.expect("origami has at least one square");
        let pi = Permutation::from_images(label).expect("BFS labelling is a bijection");
        (self.relabel(&pi), pi)
    }

    pub fn canonical_form(&self) -> Origami {
        self.canonical_with_relabeling().0
    }
}

impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={} v={}", self.h, self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l3() -> Origami {
        Origami::parse("(0 1)", "(0 2)", Some(3)).unwrap()
    }

    #[test]
    fn torus_and_disconnected() {
        let t = Origami::new(Permutation::identity(1), Permutation::identity(1)).unwrap();
        assert_eq!(t, Origami::torus());
        assert_eq!(t.vertex_cycles(), vec![vec![0]]);
        let s = t.stratum();
        assert!(s.orders.is_empty());
        assert_eq!((s.genus, s.marked_points), (1, 1));

        let err = Origami::new(Permutation::identity(2), Permutation::identity(2)).unwrap_err();
        assert_eq!(err, Error::Disconnected { components: 2 });
        let err = Origami::new(Permutation::identity(2), Permutation::identity(3)).unwrap_err();
        assert!(matches!(err, Error::SizeMismatch { .. }));
    }

    #[test]
    fn l_shape_has_one_cone_point_of_angle_six_pi() {
        let o = l3();
        let cycles = o.vertex_cycles();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 3);
        let s = o.stratum();
        assert_eq!(s.orders, vec![2]);
        assert_eq!(s.genus, 2);
        assert_eq!(o.euler_genus(), 2);
        assert_eq!(s.to_string(), "H(2)");
    }

    #[test]
    fn canonical_form_is_idempotent_and_relabeling_consistent() {
        let o = Origami::parse("(0 1 2)(3 4)", "(0 3)(1 4 5)", Some(6)).unwrap();
        let (c, pi) = o.canonical_with_relabeling();
        assert_eq!(o.relabel(&pi), c);
        assert_eq!(c.canonical_form(), c);
        assert_eq!(Origami::torus().canonical_form(), Origami::torus());
    }

    #[test]
    fn singular_corners_follow_cone_points() {
        assert_eq!(Origami::torus().singular_corners(), vec![true]);
        let two = Origami::parse("(0 1)", "()", Some(2)).unwrap();
        assert_eq!(two.singular_corners(), vec![true, false]);
        assert_eq!(l3().singular_corners(), vec![true; 3]);
    }
}
