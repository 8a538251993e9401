//! Cylinder decompositions in rational directions.
//!
//! A horizontal cylinder is a stack of rows (cycles of `h`). The top edge of
//! square `j` runs from the bottom-left corner of `v(j)` to the bottom-left
//! corner of `v(h(j))`, so a row's top boundary is free of singular points
//! exactly when no square `v(j)`, `j` in the row, has a singular bottom-left
//! corner. In that case `v` carries the row onto another row and the two
//! belong to the same cylinder.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::origami::Origami;
use crate::sl2z::{act_matrix, Sl2};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cylinder {
    /// Circumference in squares of the sheared surface.
    pub width: u64,
    /// Height in rows of the sheared surface.
    pub height: u64,
    /// Primitive direction of the core curves.
    pub direction: (i64, i64),
}

impl Cylinder {
    pub fn area(&self) -> u64 {
        self.width * self.height
    }

    /// Flat length of the core curve, `width · |(p, q)|`.
    pub fn circumference(&self) -> f64 {
        let (p, q) = self.direction;
        self.width as f64 * ((p * p + q * q) as f64).sqrt()
    }

    /// Modulus `height / width`.
    pub fn modulus(&self) -> Ratio<i128> {
        Ratio::new(self.height as i128, self.width as i128)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "w": self.width,
            "h": self.height,
            "p": self.direction.0,
            "q": self.direction.1,
            "circumference": self.circumference(),
            "module": crate::ekz::format_rational(&self.modulus()),
        })
    }
}

/// Maximal horizontal cylinders, ordered by the smallest square of their bottom row.
pub fn horizontal_cylinders(o: &Origami) -> Vec<Cylinder> {
    let n = o.n();
    let singular = o.singular_corners();
    let rows = o.h().cycles();
    let row_of = o.h().cycle_index();
    let bottom_singular: Vec<bool> = rows
        .iter()
        .map(|r| r.iter().any(|&j| singular[j]))
        .collect();
    let mut used = vec![false; rows.len()];
    let mut out = Vec::new();
    for (start, row) in rows.iter().enumerate() {
        if !bottom_singular[start] {
            continue;
        }
        let width = row.len() as u64;
        let mut height = 0;
        let mut r = start;
        loop {
            debug_assert!(!used[r], "row {r} belongs to two cylinders");
            used[r] = true;
            height += 1;
            let above = row_of[o.v().apply(rows[r][0])];
            if bottom_singular[above] {
                break;
            }
            debug_assert_eq!(rows[above].len() as u64, width);
            r = above;
        }
        out.push(Cylinder {
            width,
            height,
            direction: (1, 0),
        });
    }
    debug_assert!(used.iter().all(|&u| u));
    debug_assert_eq!(out.iter().map(Cylinder::area).sum::<u64>(), n as u64);
    out
}

/// Cylinders whose core curves have direction `(p, q)`.
pub fn cylinders_in_direction(o: &Origami, p: i64, q: i64) -> Result<Vec<Cylinder>> {
    cylinders_with_bezout_shift(o, p, q, 0)
}

/// As [`cylinders_in_direction`], reducing with the Bezout pair shifted by `shift`.
pub fn cylinders_with_bezout_shift(
    o: &Origami,
    p: i64,
    q: i64,
    shift: i64,
) -> Result<Vec<Cylinder>> {
    let a = Sl2::to_horizontal(p, q, shift)?;
    Ok(horizontal_cylinders(&act_matrix(&a, o))
        .into_iter()
        .map(|c| Cylinder {
            direction: (p, q),
            ..c
        })
        .collect())
}

/// Canonical unoriented primitive directions of Euclidean norm at most `t`:
/// `(1, 0)` and every primitive `(p, q)` with `q >= 1`.
pub fn primitive_directions(t: f64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if t < 1.0 {
        return out;
    }
    let t2 = t * t;
    out.push((1, 0));
    let qmax = t.floor() as i64;
    for q in 1..=qmax {
        let pmax = (t2 - (q * q) as f64).max(0.0).sqrt().floor() as i64;
        for p in -pmax..=pmax {
            if ((p * p + q * q) as f64) <= t2 && num_integer::gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}
