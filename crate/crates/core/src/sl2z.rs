//! The action of `SL(2,Z)` on origamis and breadth-first orbit enumeration.
//!
//! The generator actions on the gluing pair `(h, v)` are
//!
//! * `R = [[1,1],[0,1]]`: `(h, v) ↦ (h, v ∘ h⁻¹)`
//! * `L = [[1,0],[1,1]]`: `(h, v) ↦ (h ∘ v⁻¹, v)`
//! * `S = [[0,-1],[1,0]]`: `(h, v) ↦ (v⁻¹, h)`
//!
//! For `R`, square `i` of the image is the unit square whose lower-right
//! triangle lies in the sheared copy of square `i`; for `L` the upper-left
//! triangle; for `S` it is the rotated square itself.

use std::collections::HashMap;
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::origami::Origami;
use crate::perm::Permutation;

pub const DEFAULT_ORBIT_LIMIT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    R,
    L,
    S,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::R, Generator::L, Generator::S];

    pub fn matrix(self) -> Sl2 {
        match self {
            Generator::R => Sl2::new(1, 1, 0, 1),
            Generator::L => Sl2::new(1, 0, 1, 1),
            Generator::S => Sl2::new(0, -1, 1, 0),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Generator::R => 0,
            Generator::L => 1,
            Generator::S => 2,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Generator::R => "R",
            Generator::L => "L",
            Generator::S => "S",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A 2×2 integer matrix `[[a, b], [c, d]]`; determinant 1 when built from generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sl2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2 {
    pub const IDENTITY: Sl2 = Sl2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Sl2 { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Self {
        debug_assert_eq!(self.det(), 1);
        Sl2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { *self };
        (0..k.unsigned_abs()).fold(Sl2::IDENTITY, |acc, _| acc * base)
    }

    pub fn apply(&self, x: i64, y: i64) -> (i64, i64) {
        (self.a * x + self.b * y, self.c * x + self.d * y)
    }

    /// Writes the matrix as a product of generator powers, leftmost factor first.
    ///
    /// The exponents of `R` and `L` may be negative; `S` only appears with
    /// exponent 1 or 2.
    pub fn word(&self) -> Vec<Letter> {
        assert_eq!(self.det(), 1, "only SL(2,Z) matrices have a word");
        let mut m = *self;
        let mut word = Vec::new();
        while m.c != 0 {
            if m.a.abs() >= m.c.abs() {
                let k = m.a.div_euclid(m.c);
                m = Generator::R.matrix().pow(-k) * m;
                word.push(Letter::new(Generator::R, k));
            } else if m.a == 0 {
                // S⁻¹ * [[0, b], [c, d]] = [[c, d], [0, -b]]
                m = Generator::S.matrix().inverse() * m;
                word.push(Letter::new(Generator::S, 1));
            } else {
                let k = m.c.div_euclid(m.a);
                m = Generator::L.matrix().pow(-k) * m;
                word.push(Letter::new(Generator::L, k));
            }
        }
        if m.a == -1 {
            word.push(Letter::new(Generator::S, 2));
            m = Sl2::new(1, -m.b, 0, 1);
        }
        debug_assert_eq!((m.a, m.c, m.d), (1, 0, 1));
        if m.b != 0 {
            word.push(Letter::new(Generator::R, m.b));
        }
        word.retain(|l| l.power != 0);
        word
    }

    /// A determinant-one matrix sending the primitive vector `(p, q)` to `(1, 0)`.
    ///
    /// Uses the Bezout pair from the extended Euclidean algorithm shifted by
    /// `shift` multiples of `(q, -p)`, so different shifts give different
    /// admissible matrices.
    pub fn to_horizontal(p: i64, q: i64, shift: i64) -> Result<Self> {
        let (g, x, y) = extended_gcd(p, q);
        if g != 1 {
            return Err(Error::NotPrimitive { p, q });
        }
        let a = x + shift * q;
        let b = y - shift * p;
        Ok(Sl2::new(a, b, -q, p))
    }
}

impl Mul for Sl2 {
    type Output = Sl2;

    fn mul(self, o: Sl2) -> Sl2 {
        Sl2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// `gcd(|p|, |q|)` with Bezout coefficients: `x p + y q = g`.
pub fn extended_gcd(p: i64, q: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (p, q);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - k * r1);
        (x0, x1) = (x1, x0 - k * x1);
        (y0, y1) = (y1, y0 - k * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

/// A generator raised to an integer power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub generator: Generator,
    pub power: i64,
}

impl Letter {
    pub fn new(generator: Generator, power: i64) -> Self {
        Letter { generator, power }
    }

    pub fn matrix(&self) -> Sl2 {
        self.generator.matrix().pow(self.power)
    }
}

/// The origami of the surface transformed by `g`, labelled as in the module docs.
pub fn act(g: Generator, o: &Origami) -> Origami {
    act_power(g, 1, o)
}

/// `g^k · o` for any integer `k`, in time linear in the number of squares.
pub fn act_power(g: Generator, k: i64, o: &Origami) -> Origami {
    let (h, v) = (o.h(), o.v());
    let (h2, v2) = match g {
        Generator::R => (h.clone(), v.compose(&h.pow(-k))),
        Generator::L => (h.compose(&v.pow(-k)), v.clone()),
        Generator::S => match k.rem_euclid(4) {
            0 => (h.clone(), v.clone()),
            1 => (v.inverse(), h.clone()),
            2 => (h.inverse(), v.inverse()),
            _ => (v.clone(), h.inverse()),
        },
    };
    Origami::from_parts_unchecked(h2, v2)
}

/// Applies generators in sequence: the first generator acts first.
pub fn act_word(word: &[Generator], o: &Origami) -> Origami {
    word.iter().fold(o.clone(), |acc, &g| act(g, &acc))
}

/// `m · o` for an arbitrary `SL(2,Z)` matrix.
pub fn act_matrix(m: &Sl2, o: &Origami) -> Origami {
    m.word()
        .iter()
        .rev()
        .fold(o.clone(), |acc, l| act_power(l.generator, l.power, &acc))
}

/// The finite `SL(2,Z)` orbit of an origami up to relabelling.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitGraph {
    /// Generators labelling the outgoing edges, in edge order.
    pub generators: Vec<Generator>,
    /// Canonical forms, in breadth-first discovery order.
    pub vertices: Vec<Origami>,
    /// `edges[i][k]` is the vertex reached from `i` by `generators[k]`.
    pub edges: Vec<Vec<usize>>,
    /// `relabelings[i][k]` renames `act(generators[k], vertices[i])` into `vertices[edges[i][k]]`.
    #[serde(skip)]
    pub relabelings: Vec<Vec<Permutation>>,
    pub base: usize,
    /// Renames the input origami into `vertices[base]`.
    #[serde(skip)]
    pub base_relabeling: Permutation,
}

impl OrbitGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, o: &Origami) -> Option<usize> {
        let c = o.canonical_form();
        self.vertices.iter().position(|x| *x == c)
    }

    pub fn edge(&self, vertex: usize, g: Generator) -> Option<usize> {
        let k = self.generators.iter().position(|&x| x == g)?;
        Some(self.edges[vertex][k])
    }

    /// Edge triples `(from, generator, to)`.
    pub fn edge_list(&self) -> Vec<(usize, Generator, usize)> {
        let mut out = Vec::with_capacity(self.len() * self.generators.len());
        for (i, targets) in self.edges.iter().enumerate() {
            for (k, &j) in targets.iter().enumerate() {
                out.push((i, self.generators[k], j));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .map(|o| serde_json::json!({ "h": o.h().to_string(), "v": o.v().to_string() }))
            .collect();
        let edges: Vec<serde_json::Value> = self
            .edge_list()
            .into_iter()
            .map(|(i, g, j)| serde_json::json!([i, g.symbol(), j]))
            .collect();
        serde_json::json!({
            "size": self.len(),
            "base": self.base,
            "vertices": vertices,
            "edges": edges,
        })
    }
}

pub fn orbit(o: &Origami) -> Result<OrbitGraph> {
    orbit_with(o, &Generator::ALL, DEFAULT_ORBIT_LIMIT)
}

/// Breadth-first closure of `o` under `generators`, deduplicated by canonical form.
pub fn orbit_with(o: &Origami, generators: &[Generator], limit: usize) -> Result<OrbitGraph> {
    let (start, base_relabeling) = o.canonical_with_relabeling();
    let mut index: HashMap<Origami, usize> = HashMap::new();
    let mut vertices = vec![start.clone()];
    index.insert(start, 0);
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut relabelings: Vec<Vec<Permutation>> = Vec::new();
    let mut cursor = 0;
    while cursor < vertices.len() {
        let x = vertices[cursor].clone();
        let mut out = Vec::with_capacity(generators.len());
        let mut rel = Vec::with_capacity(generators.len());
        for &g in generators {
            let (y, pi) = act(g, &x).canonical_with_relabeling();
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    if vertices.len() >= limit {
                        return Err(Error::OrbitLimitExceeded { limit });
                    }
                    let j = vertices.len();
                    index.insert(y.clone(), j);
                    vertices.push(y);
                    j
                }
            };
            out.push(j);
            rel.push(pi);
        }
        edges.push(out);
        relabelings.push(rel);
        cursor += 1;
    }
    Ok(OrbitGraph {
        generators: generators.to_vec(),
        vertices,
        edges,
        relabelings,
        base: 0,
        base_relabeling,
    })
}

/// Index of the Veech group in `SL(2,Z)`, i.e. the orbit size.
pub fn veech_index(o: &Origami) -> Result<usize> {
    Ok(orbit(o)?.len())
}
