//! Integral first homology of an origami and the Kontsevich–Zorich cocycle.
//!
//! Cell structure: one vertex per commutator cycle, edges `σ_i` (bottom edge
//! of square `i`, pointing right; index `i`) and `ζ_i` (left edge, pointing
//! up; index `n + i`), and one face per square with
//! `∂(i) = σ_i + ζ_{h(i)} − σ_{v(i)} − ζ_i`. The bottom-left corner of `i`
//! is the vertex of the commutator cycle containing `i`, so
//! `∂σ_i = [h(i)] − [i]` and `∂ζ_i = [v(i)] − [i]`.
//!
//! Intersection numbers are computed against the dual complex, whose
//! vertices are square centres, with dual edges `η_i` (from the centre of
//! `h⁻¹(i)` to the centre of `i`, crossing `ζ_i`; index `i`) and `κ_i` (from
//! the centre of `v⁻¹(i)` to the centre of `i`, crossing `σ_i`; index
//! `n + i`). Sliding every centre down-left to the corner of its square
//! deforms `η_i` onto `σ_{h⁻¹(i)}` and `κ_i` onto `ζ_{v⁻¹(i)}`, which
//! identifies dual cycles with primal homology classes.
//!
//! Chain maps of the generators, writing `'` for cells of the image:
//!
//! | | `σ_i ↦` | `ζ_i ↦` | corner of `i` ↦ |
//! |---|---|---|---|
//! | `R` | `σ'_i` | `σ'_i + ζ'_{h(i)}` | corner of `i` |
//! | `L` | `ζ'_i + σ'_{v(i)}` | `ζ'_i` | corner of `i` |
//! | `S` | `ζ'_{v⁻¹(i)}` | `−σ'_i` | corner of `v⁻¹(i)` |

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::intmat::{smith_normal_form, IntMatrix};
use crate::origami::Origami;
use crate::perm::Permutation;
use crate::sl2z::{act, orbit, Generator, OrbitGraph};

#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub n_vertices: usize,
    pub n_edges: usize,
    pub n_faces: usize,
    /// Vertex index of the bottom-left corner of each square.
    pub corner_vertex: Vec<usize>,
    /// Edges → vertices.
    pub boundary1: IntMatrix,
    /// Faces → edges.
    pub boundary2: IntMatrix,
}

#[inline]
fn sigma(i: usize) -> usize {
    i
}

#[inline]
fn zeta(n: usize, i: usize) -> usize {
    n + i
}

pub fn chain_complex(o: &Origami) -> ChainComplex {
    let n = o.n();
    let c = o.commutator();
    let corner_vertex = c.cycle_index();
    let n_vertices = c.cycles().len();
    let (h, v) = (o.h(), o.v());

    let mut boundary1 = IntMatrix::zeros(n_vertices, 2 * n);
    for i in 0..n {
        boundary1[(corner_vertex[h.apply(i)], sigma(i))] += 1;
        boundary1[(corner_vertex[i], sigma(i))] -= 1;
        boundary1[(corner_vertex[v.apply(i)], zeta(n, i))] += 1;
        boundary1[(corner_vertex[i], zeta(n, i))] -= 1;
    }
    let mut boundary2 = IntMatrix::zeros(2 * n, n);
    for i in 0..n {
        boundary2[(sigma(i), i)] += 1;
        boundary2[(zeta(n, h.apply(i)), i)] += 1;
        boundary2[(sigma(v.apply(i)), i)] -= 1;
        boundary2[(zeta(n, i), i)] -= 1;
    }
    ChainComplex {
        n_vertices,
        n_edges: 2 * n,
        n_faces: n,
        corner_vertex,
        boundary1,
        boundary2,
    }
}

/// A free basis of `H_1(X; Z)` with its coordinate map and intersection form.
#[derive(Clone, Debug, Serialize)]
pub struct H1Basis {
    /// Basis cycles as columns in edge coordinates (`2n × 2g`).
    pub basis: IntMatrix,
    /// Sends an edge-coordinate cycle to its basis coordinates (`2g × 2n`).
    /// Only meaningful on cycles.
    pub projection: IntMatrix,
    /// Intersection numbers of the basis cycles (`2g × 2g`).
    pub intersection: IntMatrix,
    /// Horizontal and vertical holonomy of each basis cycle (`2 × 2g`).
    pub holonomy: IntMatrix,
}

impl H1Basis {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Basis coordinates of an edge-coordinate cycle.
    pub fn coordinates(&self, cycle: &[i64]) -> Vec<i64> {
        self.projection.mul_vec(cycle)
    }
}

pub fn h1_basis(o: &Origami) -> H1Basis {
    let n = o.n();
    let cx = chain_complex(o);

    // Cycles Z_1 = ker ∂1, with a left inverse giving kernel coordinates.
    let s1 = smith_normal_form(&cx.boundary1);
    let kernel = s1.kernel();
    let kernel_coords = s1.v_inv.row_block(s1.rank, 2 * n);

    // Boundaries B_1 in kernel coordinates; the quotient is free.
    let bdry = &kernel_coords * &cx.boundary2;
    let s2 = smith_normal_form(&bdry);
    debug_assert!(s2.diagonal().iter().all(|&d| d == 1), "H_1 has torsion");
    let k = kernel.cols();
    let basis = &kernel * &s2.u_inv.column_block(s2.rank, k);
    let projection = &s2.u.row_block(s2.rank, k) * &kernel_coords;

    let rank = basis.cols();
    let mut holonomy = IntMatrix::zeros(2, rank);
    for b in 0..rank {
        for i in 0..n {
            holonomy[(0, b)] += basis[(sigma(i), b)];
            holonomy[(1, b)] += basis[(zeta(n, i), b)];
        }
    }

    let intersection = intersection_form(o, &basis, &projection);
    H1Basis {
        basis,
        projection,
        intersection,
        holonomy,
    }
}

/// Intersection matrix of the basis columns, via dual representatives.
fn intersection_form(o: &Origami, basis: &IntMatrix, projection: &IntMatrix) -> IntMatrix {
    let n = o.n();
    let rank = basis.cols();
    let (hi, vi) = (o.h().inverse(), o.v().inverse());

    let mut dual_boundary = IntMatrix::zeros(n, 2 * n);
    let mut to_primal = IntMatrix::zeros(2 * n, 2 * n);
    let mut crossing = IntMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        // η_i
        dual_boundary[(i, i)] += 1;
        dual_boundary[(hi.apply(i), i)] -= 1;
        to_primal[(sigma(hi.apply(i)), i)] = 1;
        crossing[(zeta(n, i), i)] = -1;
        // κ_i
        dual_boundary[(i, n + i)] += 1;
        dual_boundary[(vi.apply(i), n + i)] -= 1;
        to_primal[(zeta(n, vi.apply(i)), n + i)] = 1;
        crossing[(sigma(i), n + i)] = 1;
    }

    let dual_cycles = smith_normal_form(&dual_boundary).kernel();
    let classes = &(projection * &to_primal) * &dual_cycles;
    let s = smith_normal_form(&classes);
    debug_assert_eq!(s.rank, rank);
    debug_assert!(s.diagonal().iter().all(|&d| d == 1));
    // classes · v[:, :rank] · u = identity
    let dual_reps = &(&dual_cycles * &s.v.column_block(0, rank)) * &s.u;
    &(&basis.transpose() * &crossing) * &dual_reps
}

/// Edge-level chain map from `o` to `act(g, o)`.
pub fn chain_map(g: Generator, o: &Origami) -> IntMatrix {
    let n = o.n();
    let (h, v) = (o.h(), o.v());
    let vi = v.inverse();
    let mut f = IntMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        match g {
            Generator::R => {
                f[(sigma(i), sigma(i))] += 1;
                f[(sigma(i), zeta(n, i))] += 1;
                f[(zeta(n, h.apply(i)), zeta(n, i))] += 1;
            }
            Generator::L => {
                f[(zeta(n, i), sigma(i))] += 1;
                f[(sigma(v.apply(i)), sigma(i))] += 1;
                f[(zeta(n, i), zeta(n, i))] += 1;
            }
            Generator::S => {
                f[(zeta(n, vi.apply(i)), sigma(i))] += 1;
                f[(sigma(i), zeta(n, i))] -= 1;
            }
        }
    }
    f
}

/// Square whose bottom-left corner is the image of the bottom-left corner of `i`.
pub fn corner_image(g: Generator, o: &Origami, i: usize) -> usize {
    match g {
        Generator::R | Generator::L => i,
        Generator::S => o.v().inverse().apply(i),
    }
}

/// Edge-level chain map of a relabelling `x ↦ pi(x)`.
pub fn relabel_map(pi: &Permutation) -> IntMatrix {
    let n = pi.len();
    let mut f = IntMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        f[(sigma(pi.apply(i)), sigma(i))] = 1;
        f[(zeta(n, pi.apply(i)), zeta(n, i))] = 1;
    }
    f
}

/// Induced map on `H_1` between two origamis, in their [`h1_basis`] bases.
#[derive(Clone, Debug)]
pub struct HomologyAction {
    pub source: Origami,
    pub target: Origami,
    pub matrix: IntMatrix,
}

impl HomologyAction {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "source": { "h": self.source.h().to_string(), "v": self.source.v().to_string() },
            "target": { "h": self.target.h().to_string(), "v": self.target.v().to_string() },
            "matrix": self.matrix.to_rows(),
        })
    }
}

fn induced(source: &H1Basis, target: &H1Basis, edge_map: &IntMatrix) -> IntMatrix {
    &(&target.projection * edge_map) * &source.basis
}

pub fn action_on_h1(g: Generator, o: &Origami) -> HomologyAction {
    let target = act(g, o);
    let matrix = induced(&h1_basis(o), &h1_basis(&target), &chain_map(g, o));
    HomologyAction {
        source: o.clone(),
        target,
        matrix,
    }
}

/// Action of a translation automorphism `pi` of `o` on `H_1(o)`.
pub fn automorphism_action(o: &Origami, pi: &Permutation) -> IntMatrix {
    debug_assert!(o.is_automorphism(pi));
    let b = h1_basis(o);
    induced(&b, &b, &relabel_map(pi))
}

/// Applies `word` left to right (first letter first), returning the final
/// origami and the composed map `H_1(o) → H_1(end)`.
pub fn word_action(word: &[Generator], o: &Origami) -> (Origami, IntMatrix) {
    let mut current = o.clone();
    let mut basis = h1_basis(o);
    let mut total = IntMatrix::identity(basis.rank());
    for &g in word {
        let next = act(g, &current);
        let next_basis = h1_basis(&next);
        let step = induced(&basis, &next_basis, &chain_map(g, &current));
        total = &step * &total;
        current = next;
        basis = next_basis;
    }
    (current, total)
}

/// Whether the absolute periods generate all of `Z²`.
pub fn is_reduced(o: &Origami) -> bool {
    let hol = h1_basis(o).holonomy;
    let mut g = 0i64;
    for a in 0..hol.cols() {
        for b in a + 1..hol.cols() {
            let minor = hol[(0, a)] * hol[(1, b)] - hol[(0, b)] * hol[(1, a)];
            g = num_integer::gcd(g, minor);
        }
    }
    g == 1
}

/// `H_1` bases for every vertex of an orbit and the cocycle matrix along every edge.
#[derive(Clone, Debug)]
pub struct KzCocycle {
    pub orbit: OrbitGraph,
    pub bases: Vec<H1Basis>,
    /// `matrices[i][k]`: `H_1(vertices[i]) → H_1(vertices[edges[i][k]])`.
    pub matrices: Vec<Vec<IntMatrix>>,
}

impl KzCocycle {
    pub fn new(o: &Origami) -> Result<Self> {
        Ok(Self::from_orbit(orbit(o)?))
    }

    pub fn from_orbit(orbit: OrbitGraph) -> Self {
        let bases: Vec<H1Basis> = orbit.vertices.par_iter().map(h1_basis).collect();
        let matrices: Vec<Vec<IntMatrix>> = (0..orbit.len())
            .into_par_iter()
            .map(|i| {
                let x = &orbit.vertices[i];
                orbit
                    .generators
                    .iter()
                    .enumerate()
                    .map(|(k, &g)| {
                        let j = orbit.edges[i][k];
                        let edge_map = &relabel_map(&orbit.relabelings[i][k]) * &chain_map(g, x);
                        induced(&bases[i], &bases[j], &edge_map)
                    })
                    .collect()
            })
            .collect();
        KzCocycle {
            orbit,
            bases,
            matrices,
        }
    }

    pub fn dimension(&self) -> usize {
        self.bases[0].rank()
    }

    pub fn matrix(&self, vertex: usize, g: Generator) -> &IntMatrix {
        let k = self
            .orbit
            .generators
            .iter()
            .position(|&x| x == g)
            .expect("generator in orbit");
        &self.matrices[vertex][k]
    }

    /// Follows `word` from `vertex` along cached edges.
    pub fn word_action(&self, vertex: usize, word: &[Generator]) -> (usize, IntMatrix) {
        let mut at = vertex;
        let mut total = IntMatrix::identity(self.dimension());
        for &g in word {
            total = self.matrix(at, g) * &total;
            at = self.orbit.edge(at, g).expect("generator in orbit");
        }
        (at, total)
    }
}
