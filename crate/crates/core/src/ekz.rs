//! Exact sum of the positive Lyapunov exponents of an origami.
//!
//! `λ₁ + … + λ_g = (1/12) Σ k(k + 2)/(k + 1) + (π²/3) C_area`, and for an
//! origami `(π²/3) C_area` is the orbit average of `Σ h/w` over horizontal
//! cylinders.

use num_rational::Ratio;
use serde::Serialize;

use crate::cylinder::horizontal_cylinders;
use crate::error::Result;
use crate::origami::{Origami, Stratum};
use crate::sl2z::{orbit, OrbitGraph};

pub type Rational = Ratio<i128>;

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `(1/12) Σ k(k + 2)/(k + 1)` over the zero orders.
pub fn combinatorial_term(s: &Stratum) -> Rational {
    s.orders
        .iter()
        .map(|&k| {
            let k = k as i128;
            Rational::new(k * (k + 2), k + 1)
        })
        .sum::<Rational>()
        / 12
}

/// `Σ h/w` over the horizontal cylinders of one surface.
pub fn horizontal_moduli_sum(o: &Origami) -> Rational {
    horizontal_cylinders(o).iter().map(|c| c.modulus()).sum()
}

/// Orbit average of [`horizontal_moduli_sum`].
pub fn sv_term(g: &OrbitGraph) -> Rational {
    let total: Rational = g.vertices.iter().map(horizontal_moduli_sum).sum();
    total / g.len() as i128
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EkzReport {
    pub stratum: Stratum,
    pub combinatorial_term: Rational,
    pub sv_term: Rational,
    pub exponent_sum: Rational,
    /// `q` with `C_area = q/π²`.
    pub c_area_coefficient: Rational,
    pub orbit_size: usize,
}

#[derive(Serialize)]
struct EkzJson {
    stratum: String,
    genus: u32,
    orbit_size: usize,
    combinatorial_term: String,
    sv_term: String,
    exponent_sum: String,
    c_area_coefficient: String,
    combinatorial_term_f64: f64,
    sv_term_f64: f64,
    exponent_sum_f64: f64,
    c_area_f64: f64,
}

impl EkzReport {
    pub fn from_orbit(g: &OrbitGraph) -> Self {
        let stratum = g.vertices[g.base].stratum();
        let combinatorial_term = combinatorial_term(&stratum);
        let sv_term = sv_term(g);
        EkzReport {
            stratum,
            combinatorial_term,
            sv_term,
            exponent_sum: combinatorial_term + sv_term,
            c_area_coefficient: sv_term * 3,
            orbit_size: g.len(),
        }
    }

    /// `C_area` as a float.
    pub fn c_area(&self) -> f64 {
        rational_to_f64(&self.c_area_coefficient) / (std::f64::consts::PI * std::f64::consts::PI)
    }

    /// Limit of `T⁻² N_area(T)`, that is `π C_area`.
    pub fn area_growth_rate(&self) -> f64 {
        rational_to_f64(&self.c_area_coefficient) / std::f64::consts::PI
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(EkzJson {
            stratum: self.stratum.to_string(),
            genus: self.stratum.genus,
            orbit_size: self.orbit_size,
            combinatorial_term: format_rational(&self.combinatorial_term),
            sv_term: format_rational(&self.sv_term),
            exponent_sum: format_rational(&self.exponent_sum),
            c_area_coefficient: format_rational(&self.c_area_coefficient),
            combinatorial_term_f64: rational_to_f64(&self.combinatorial_term),
            sv_term_f64: rational_to_f64(&self.sv_term),
            exponent_sum_f64: rational_to_f64(&self.exponent_sum),
            c_area_f64: self.c_area(),
        })
        .expect("report serializes")
    }
}

pub fn ekz_sum(o: &Origami) -> Result<EkzReport> {
    Ok(EkzReport::from_orbit(&orbit(o)?))
}
