//! Named surfaces.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::origami::Origami;
use crate::perm::Permutation;

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub origami: Origami,
    pub provenance: String,
}

/// The square torus with its origin marked.
pub fn torus() -> Origami {
    Origami::torus()
}

/// Twelve squares: a 4×2 block, one square above its left column, and a row
/// of three above that. Squares are numbered row by row from the bottom
/// left; every vertical line closes up by vertical translation.
pub fn figure4() -> Origami {
    Origami::from_images(
        vec![1, 2, 3, 0, 5, 6, 7, 4, 8, 10, 11, 9],
        vec![4, 5, 6, 7, 8, 10, 11, 3, 9, 0, 1, 2],
    )
    .expect("figure-4 gluings are valid")
}

/// The eight-square origami with quaternion monodromy. Bottom row
/// `0 1 2 3`, top row `4 5 6 7`, with the top-edge gluings
/// `0→7, 1→6, 2→5, 3→4, 4→1, 5→0, 6→3, 7→2`.
pub fn eierlegende_wollmilchsau() -> Origami {
    Origami::from_images(vec![1, 2, 3, 0, 5, 6, 7, 4], vec![7, 6, 5, 4, 1, 0, 3, 2])
        .expect("wollmilchsau gluings are valid")
}

/// The L-shaped origami with a bottom row of `a` squares and a left column
/// of `b` squares sharing the corner square 0.
pub fn l_shape(a: usize, b: usize) -> Origami {
    assert!(a >= 1 && b >= 1, "L-shape needs positive arms");
    let n = a + b - 1;
    let row: Vec<usize> = (0..a).collect();
    let column: Vec<usize> = std::iter::once(0).chain(a..n).collect();
    let h = Permutation::from_cycles(n, &[row]).expect("row cycle");
    let v = Permutation::from_cycles(n, &[column]).expect("column cycle");
    Origami::new(h, v).expect("L-shapes are connected")
}

fn parse_l_shape(name: &str) -> Option<(usize, usize)> {
    let inner = name.strip_prefix("l(")?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    let a = a.trim().parse().ok()?;
    let b = b.trim().parse().ok()?;
    (a >= 1 && b >= 1).then_some((a, b))
}

pub fn entries() -> Vec<CatalogEntry> {
    let mut out = vec![
        CatalogEntry {
            name: "torus".into(),
            origami: torus(),
            provenance: "one unit square with opposite sides glued".into(),
        },
        CatalogEntry {
            name: "figure4".into(),
            origami: figure4(),
            provenance: "12 squares, horizontal cylinders (4,2), (1,1), (3,1)".into(),
        },
        CatalogEntry {
            name: "eierlegende-wollmilchsau".into(),
            origami: eierlegende_wollmilchsau(),
            provenance: "8 squares, quaternion group monodromy, genus 3".into(),
        },
    ];
    for a in 2..=4 {
        for b in 2..=4 {
            out.push(CatalogEntry {
                name: format!("l({a},{b})"),
                origami: l_shape(a, b),
                provenance: format!("L-shape: row of {a}, column of {b}"),
            });
        }
    }
    out
}

/// Looks up a named surface; `l(a,b)` is accepted for any positive `a`, `b`.
pub fn lookup(name: &str) -> Result<Origami> {
    let key = name.trim().to_ascii_lowercase();
    match key.as_str() {
        "torus" => return Ok(torus()),
        "figure4" | "figure-4" => return Ok(figure4()),
        "eierlegende-wollmilchsau" | "wollmilchsau" | "ew" => return Ok(eierlegende_wollmilchsau()),
        _ => {}
    }
    if let Some((a, b)) = parse_l_shape(&key.replace(' ', "")) {
        return Ok(l_shape(a, b));
    }
    Err(Error::UnknownSurface(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::horizontal_cylinders;

    #[test]
    fn lookup_names() {
        assert_eq!(lookup("torus").unwrap(), Origami::torus());
        assert_eq!(lookup("l(2,3)").unwrap(), l_shape(2, 3));
        assert_eq!(lookup("L(2, 3)").unwrap(), l_shape(2, 3));
        assert!(matches!(lookup("l(0,3)"), Err(Error::UnknownSurface(_))));
        assert!(matches!(lookup("octagon"), Err(Error::UnknownSurface(_))));
    }

    #[test]
    fn l_shape_permutations() {
        let o = l_shape(2, 2);
        assert_eq!(o.h().to_cycle_string(), "(0 1)");
        assert_eq!(o.v().to_cycle_string(), "(0 2)");
        let o = l_shape(3, 4);
        assert_eq!(o.n(), 6);
        assert_eq!(o.h().to_cycle_string(), "(0 1 2)");
        assert_eq!(o.v().to_cycle_string(), "(0 3 4 5)");
    }

    #[test]
    fn regression_locked_entries() {
        let wh = |o: &Origami| -> Vec<(u64, u64)> {
            horizontal_cylinders(o)
                .iter()
                .map(|c| (c.width, c.height))
                .collect()
        };
        for e in entries() {
            let s = e.origami.stratum();
            match e.name.as_str() {
                "torus" => {
                    assert!(s.orders.is_empty());
                    assert_eq!(wh(&e.origami), vec![(1, 1)]);
                }
                "figure4" => {
                    assert_eq!(s.orders, vec![4]);
                    assert_eq!(s.genus, 3);
                    assert_eq!(wh(&e.origami), vec![(4, 2), (1, 1), (3, 1)]);
                }
                "eierlegende-wollmilchsau" => {
                    assert_eq!(s.orders, vec![1, 1, 1, 1]);
                    assert_eq!(wh(&e.origami), vec![(4, 1), (4, 1)]);
                }
                _ => {
                    assert_eq!(s.orders, vec![2], "{}", e.name);
                    assert_eq!(s.genus, 2);
                }
            }
        }
    }
}
