//! Brute-force Siegel–Veech counting.
//!
//! Every closed geodesic and saddle connection on an origami has a rational
//! direction. For each primitive `(p, q)` the surface is turned so that
//! `(p, q)` becomes horizontal, and cylinders and saddle connections are read
//! off the horizontal structure. Lengths scale by `|(p, q)|`. Each cylinder
//! and each saddle connection is counted once, without orientation.
//!
//! Counts use the square as unit of length. The quadratic growth constant
//! `π C_area` refers to surfaces of area one, so fitted slopes are multiplied
//! by the number of squares before comparison.

use rayon::prelude::*;
use serde::Serialize;

use crate::cylinder::{horizontal_cylinders, primitive_directions};
use crate::ekz::{ekz_sum, EkzReport};
use crate::error::{Error, Result};
use crate::origami::Origami;
use crate::sl2z::{act_matrix, Sl2};

/// Lengths of horizontal saddle connections. A connection leaves a singular
/// point along the bottom edge of every square whose bottom-left corner is
/// that point and runs right until the next singular corner.
pub fn horizontal_saddle_connections(o: &Origami) -> Vec<u64> {
    let singular = o.singular_corners();
    let h = o.h();
    (0..o.n())
        .filter(|&j| singular[j])
        .map(|j| {
            let mut len = 1;
            let mut k = h.apply(j);
            while !singular[k] {
                len += 1;
                k = h.apply(k);
            }
            len
        })
        .collect()
}

/// What one direction contributes, before the length cut.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionData {
    pub direction: (i64, i64),
    /// `(width, area)` of each cylinder in squares.
    pub cylinders: Vec<(u64, u64)>,
    /// Saddle connection lengths in squares.
    pub saddle_connections: Vec<u64>,
}

impl DirectionData {
    pub fn compute(o: &Origami, p: i64, q: i64) -> Result<Self> {
        Self::compute_with_shift(o, p, q, 0)
    }

    pub fn compute_with_shift(o: &Origami, p: i64, q: i64, shift: i64) -> Result<Self> {
        let turned = act_matrix(&Sl2::to_horizontal(p, q, shift)?, o);
        Ok(DirectionData {
            direction: (p, q),
            cylinders: horizontal_cylinders(&turned)
                .iter()
                .map(|c| (c.width, c.area()))
                .collect(),
            saddle_connections: horizontal_saddle_connections(&turned),
        })
    }

    fn norm2(&self) -> u64 {
        let (p, q) = self.direction;
        (p * p + q * q) as u64
    }
}

/// Every cylinder and saddle connection of length at most `t_max`, sorted by length.
#[derive(Clone, Debug)]
pub struct LengthSpectrum {
    pub n: usize,
    pub t_max: f64,
    /// `(squared length, area weight)`.
    cylinders: Vec<(u64, f64)>,
    saddles: Vec<u64>,
    /// Prefix sums of the cylinder weights.
    cumulative: Vec<f64>,
}

fn within(len2: u64, t: f64) -> bool {
    t >= 0.0 && (len2 as f64) <= t * t
}

impl LengthSpectrum {
    pub fn new(o: &Origami, t_max: f64) -> Self {
        let n = o.n();
        let per_direction: Vec<DirectionData> = primitive_directions(t_max)
            .into_par_iter()
            .map(|(p, q)| DirectionData::compute(o, p, q).expect("directions are primitive"))
            .collect();
        let mut cylinders = Vec::new();
        let mut saddles = Vec::new();
        for d in &per_direction {
            let s = d.norm2();
            for &(w, area) in &d.cylinders {
                if within(w * w * s, t_max) {
                    cylinders.push((w * w * s, area as f64 / n as f64));
                }
            }
            for &l in &d.saddle_connections {
                if within(l * l * s, t_max) {
                    saddles.push(l * l * s);
                }
            }
        }
        cylinders.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        saddles.sort_unstable();
        let cumulative = cylinders
            .iter()
            .scan(0.0, |acc, &(_, w)| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        LengthSpectrum {
            n,
            t_max,
            cylinders,
            saddles,
            cumulative,
        }
    }

    /// `N_area(T)`, for `T <= t_max`.
    pub fn n_area(&self, t: f64) -> f64 {
        debug_assert!(t <= self.t_max);
        let k = self.cylinders.partition_point(|&(l2, _)| within(l2, t));
        if k == 0 {
            0.0
        } else {
            self.cumulative[k - 1]
        }
    }

    /// `N(T)`, the saddle connection count, for `T <= t_max`.
    pub fn n_sc(&self, t: f64) -> u64 {
        debug_assert!(t <= self.t_max);
        self.saddles.partition_point(|&l2| within(l2, t)) as u64
    }

    pub fn report(&self, t: f64) -> CountReport {
        CountReport {
            t,
            n_area: self.n_area(t),
            n_sc: self.n_sc(t),
            per_direction: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectionCount {
    pub p: i64,
    pub q: i64,
    pub n_area: f64,
    pub n_sc: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountReport {
    #[serde(rename = "T")]
    pub t: f64,
    pub n_area: f64,
    pub n_sc: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_direction: Option<Vec<DirectionCount>>,
}

/// Counts at length `t`, optionally broken down by direction.
pub fn count(o: &Origami, t: f64, per_direction: bool) -> CountReport {
    let n = o.n() as f64;
    let rows: Vec<DirectionCount> = primitive_directions(t)
        .into_par_iter()
        .map(|(p, q)| {
            let d = DirectionData::compute(o, p, q).expect("directions are primitive");
            let s = d.norm2();
            DirectionCount {
                p,
                q,
                n_area: d
                    .cylinders
                    .iter()
                    .filter(|&&(w, _)| within(w * w * s, t))
                    .map(|&(_, a)| a as f64 / n)
                    .sum(),
                n_sc: d
                    .saddle_connections
                    .iter()
                    .filter(|&&l| within(l * l * s, t))
                    .count() as u64,
            }
        })
        .collect();
    CountReport {
        t,
        n_area: rows.iter().map(|r| r.n_area).sum(),
        n_sc: rows.iter().map(|r| r.n_sc).sum(),
        per_direction: per_direction.then_some(rows),
    }
}

pub fn count_area(o: &Origami, t: f64) -> CountReport {
    count(o, t, false)
}

pub fn count_saddle_connections(o: &Origami, t: f64) -> CountReport {
    count(o, t, false)
}

/// `samples` geometrically spaced lengths from `t_max / 4` to `t_max`.
pub fn sample_lengths(t_max: f64, samples: usize) -> Vec<f64> {
    let t_min = t_max / 4.0;
    if samples == 1 {
        return vec![t_max];
    }
    let ratio = (t_max / t_min).powf(1.0 / (samples - 1) as f64);
    (0..samples)
        .map(|i| {
            if i + 1 == samples {
                t_max
            } else {
                t_min * ratio.powi(i as i32)
            }
        })
        .collect()
}

/// Rows `(T, N_area, N_area / T², N)` for plotting.
pub fn counting_curve(o: &Origami, t_max: f64, samples: usize) -> Vec<(f64, f64, f64, u64)> {
    let spectrum = LengthSpectrum::new(o, t_max);
    sample_lengths(t_max, samples)
        .into_iter()
        .map(|t| {
            let a = spectrum.n_area(t);
            (t, a, a / (t * t), spectrum.n_sc(t))
        })
        .collect()
}

pub fn curve_to_csv(rows: &[(f64, f64, f64, u64)]) -> String {
    let mut out = String::from("T,n_area,n_area_over_T2,n_sc\n");
    for (t, a, r, s) in rows {
        out.push_str(&format!("{t},{a},{r},{s}\n"));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CAreaEstimate {
    pub t_max: f64,
    pub samples: usize,
    /// Least-squares slope of `N_area` against `T²`, rescaled to a surface
    /// of unit area (lengths shrink by `√n`, so the slope grows by `n`).
    pub fitted_coefficient: f64,
    /// `π C_area` from the exact formula.
    pub target: f64,
    pub relative_error: f64,
}

impl CAreaEstimate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("estimate serializes")
    }
}

/// Slope of the least-squares line through `(x, y)`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn estimate_c_area_with(
    o: &Origami,
    exact: &EkzReport,
    t_max: f64,
    samples: usize,
) -> Result<CAreaEstimate> {
    if t_max.is_nan() || t_max < 20.0 {
        return Err(Error::InvalidConfig(format!(
            "T_max must be at least 20, got {t_max}"
        )));
    }
    if samples < 5 {
        return Err(Error::InvalidConfig(format!(
            "need at least 5 samples, got {samples}"
        )));
    }
    let spectrum = LengthSpectrum::new(o, t_max);
    let points: Vec<(f64, f64)> = sample_lengths(t_max, samples)
        .into_iter()
        .map(|t| (t * t, spectrum.n_area(t)))
        .collect();
    let fitted_coefficient = least_squares_slope(&points) * o.n() as f64;
    let target = exact.area_growth_rate();
    Ok(CAreaEstimate {
        t_max,
        samples,
        fitted_coefficient,
        target,
        relative_error: (fitted_coefficient - target).abs() / target,
    })
}

pub fn estimate_c_area(o: &Origami, t_max: f64, samples: usize) -> Result<CAreaEstimate> {
    estimate_c_area_with(o, &ekz_sum(o)?, t_max, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn torus_small_counts() {
        let t = Origami::torus();
        assert_eq!(count_area(&t, 2.0).n_area, 4.0);
        assert_eq!(count_area(&t, 0.5).n_area, 0.0);
        assert_eq!(count_saddle_connections(&t, 1.0).n_sc, 2);
        assert_eq!(count_saddle_connections(&t, 2.0).n_sc, 4);
    }

    #[test]
    fn l_shape_unit_saddle_connections() {
        let o = catalog::l_shape(2, 2);
        assert_eq!(horizontal_saddle_connections(&o), vec![1, 1, 1]);
        assert_eq!(count_saddle_connections(&o, 1.0).n_sc, 6);
    }

    #[test]
    fn spectrum_matches_direct_count() {
        let o = catalog::l_shape(3, 2);
        let s = LengthSpectrum::new(&o, 15.0);
        for t in [0.5, 1.0, 2.5, 7.0, 15.0] {
            let direct = count(&o, t, true);
            assert!((s.n_area(t) - direct.n_area).abs() < 1e-9);
            assert_eq!(s.n_sc(t), direct.n_sc);
            let rows = direct.per_direction.unwrap();
            assert_eq!(rows.len(), primitive_directions(t).len());
        }
    }

    #[test]
    fn samples_are_geometric() {
        let ts = sample_lengths(200.0, 5);
        assert_eq!(ts.len(), 5);
        assert!((ts[0] - 50.0).abs() < 1e-9);
        assert_eq!(ts[4], 200.0);
        assert!((ts[1] / ts[0] - ts[2] / ts[1]).abs() < 1e-9);
    }

    #[test]
    fn fit_preconditions() {
        let t = Origami::torus();
        assert!(estimate_c_area(&t, 10.0, 8).is_err());
        assert!(estimate_c_area(&t, 50.0, 3).is_err());
    }

    #[test]
    fn slope_of_exact_line() {
        let pts: Vec<(f64, f64)> = (1..6).map(|x| (x as f64, 3.0 * x as f64 + 1.0)).collect();
        assert!((least_squares_slope(&pts) - 3.0).abs() < 1e-12);
    }
}
