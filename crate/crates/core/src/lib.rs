//! Square-tiled translation surfaces: `SL(2,Z)` orbits, cylinder
//! decompositions, the exact sum of positive Lyapunov exponents, Monte-Carlo
//! estimates of the Kontsevich–Zorich spectrum and Siegel–Veech counting.

pub mod catalog;
pub mod counting;
pub mod cylinder;
pub mod ekz;
pub mod error;
pub mod homology;
pub mod intmat;
pub mod lyapunov;
pub mod origami;
pub mod perm;
pub mod sl2z;
pub mod verify;

pub use counting::{estimate_c_area, CAreaEstimate, CountReport};
pub use cylinder::{cylinders_in_direction, horizontal_cylinders, Cylinder};
pub use ekz::{ekz_sum, EkzReport, Rational};
pub use error::{Error, Result};
pub use homology::{action_on_h1, h1_basis, word_action, H1Basis, HomologyAction, KzCocycle};
pub use intmat::IntMatrix;
pub use lyapunov::{simulate, LyapunovEstimate, SimConfig};
pub use origami::{Origami, Stratum};
pub use perm::Permutation;
pub use sl2z::{act, orbit, Generator, OrbitGraph, Sl2};
pub use verify::{verify, VerifyConfig, VerifyReport};
