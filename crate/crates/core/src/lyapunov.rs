//! Monte-Carlo estimate of the Kontsevich–Zorich Lyapunov spectrum.
//!
//! Each run follows the continued fraction expansion of a random slope,
//! applying `R^{a₁} L^{a₂} R^{a₃} …` one letter at a time along the orbit
//! graph. The `2g`-frame is multiplied by the cocycle matrix of every letter
//! and re-orthonormalized by modified Gram–Schmidt; the logarithms of the
//! triangular diagonal accumulate into the exponents.
//!
//! Slopes are exact dyadic rationals `m / 2^K` with `K = 4096`. Only the
//! partial quotients shared by both ends of `[m, m + 1] / 2^K` are used, so
//! every digit is a genuine digit of a uniform real slope.

use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::KzCocycle;
use crate::origami::Origami;
use crate::sl2z::Generator;

/// `"EKZ"` in ASCII.
pub const DEFAULT_SEED: u64 = 0x454B5A;

const SLOPE_BITS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SimConfig {
    /// Letters applied per run.
    pub steps: u64,
    pub runs: usize,
    /// Re-orthonormalize after this many letters.
    pub qr_every: u64,
    pub seed: u64,
    /// Letters between fresh random slopes.
    pub slope_refresh: u64,
    /// Largest block length; longer partial quotients are truncated.
    pub digit_cap: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            steps: 1_000_000,
            runs: 10,
            qr_every: 1,
            seed: DEFAULT_SEED,
            slope_refresh: 10_000,
            digit_cap: 10_000,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.qr_every < 1 {
            return Err(Error::InvalidConfig("qr_every must be at least 1".into()));
        }
        if self.steps < self.qr_every {
            return Err(Error::InvalidConfig(format!(
                "steps ({}) must be at least qr_every ({})",
                self.steps, self.qr_every
            )));
        }
        if self.runs < 2 {
            return Err(Error::InvalidConfig("runs must be at least 2".into()));
        }
        if self.slope_refresh < 1 || self.digit_cap < 1 {
            return Err(Error::InvalidConfig(
                "slope_refresh and digit_cap must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LyapunovEstimate {
    pub genus: u32,
    pub orbit_size: usize,
    /// Mean per-letter exponents `θ₁ ≥ … ≥ θ_{2g}`.
    pub raw_exponents: Vec<f64>,
    pub raw_stderr: Vec<f64>,
    /// Mean of the per-run ratios `θᵢ / θ₁`.
    pub normalized: Vec<f64>,
    pub stderr: Vec<f64>,
    /// `λ̂₁ + … + λ̂_g`.
    pub positive_sum: f64,
    pub positive_sum_stderr: f64,
    pub truncated_digits: u64,
    pub slopes_drawn: u64,
    pub config: SimConfig,
    pub wall_time_secs: f64,
}

impl LyapunovEstimate {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("estimate serializes")
    }

    /// Largest `|θᵢ + θ_{2g+1−i}| / (σᵢ + σ_{2g+1−i})`.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.raw_exponents.len();
        (0..d / 2)
            .map(|i| {
                let j = d - 1 - i;
                let gap = (self.raw_exponents[i] + self.raw_exponents[j]).abs();
                let err = self.raw_stderr[i] + self.raw_stderr[j];
                if gap == 0.0 {
                    0.0
                } else {
                    gap / err
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Partial quotients of a uniform random slope in `(0, 1)`.
struct SlopeDigits {
    lo: (BigUint, BigUint),
    hi: (BigUint, BigUint),
}

impl SlopeDigits {
    fn draw(rng: &mut ChaCha12Rng) -> Self {
        let words: Vec<u32> = (0..SLOPE_BITS / 32).map(|_| rng.random()).collect();
        let m = BigUint::new(words);
        let den = BigUint::from(1u8) << SLOPE_BITS;
        SlopeDigits {
            hi: (&m + 1u8, den.clone()),
            lo: (m, den),
        }
    }

    fn gauss_step(x: &mut (BigUint, BigUint)) -> Option<BigUint> {
        let (num, den) = x;
        if num.is_zero() {
            return None;
        }
        let (a, r) = den.div_rem(num);
        *den = std::mem::replace(num, r);
        Some(a)
    }
}

impl Iterator for SlopeDigits {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        let a = Self::gauss_step(&mut self.lo)?;
        let b = Self::gauss_step(&mut self.hi)?;
        // The interval stays inside one Gauss cylinder only while the digits agree.
        (a == b && !self.lo.0.is_zero() && !self.hi.0.is_zero()).then_some(a)
    }
}

/// `d × d` matrices stored row-major, one per vertex and driving letter.
struct FloatCocycle {
    d: usize,
    r: Vec<Vec<f64>>,
    l: Vec<Vec<f64>>,
    r_edge: Vec<usize>,
    l_edge: Vec<usize>,
}

impl FloatCocycle {
    fn new(kz: &KzCocycle) -> Self {
        let to_f64 = |g: Generator| -> Vec<Vec<f64>> {
            (0..kz.orbit.len())
                .map(|i| {
                    let m = kz.matrix(i, g);
                    (0..m.rows())
                        .flat_map(|a| m.row(a).iter().map(|&x| x as f64).collect::<Vec<_>>())
                        .collect()
                })
                .collect()
        };
        let edges = |g: Generator| -> Vec<usize> {
            (0..kz.orbit.len())
                .map(|i| kz.orbit.edge(i, g).expect("orbit has R and L edges"))
                .collect()
        };
        FloatCocycle {
            d: kz.dimension(),
            r: to_f64(Generator::R),
            l: to_f64(Generator::L),
            r_edge: edges(Generator::R),
            l_edge: edges(Generator::L),
        }
    }
}

struct RunResult {
    theta: Vec<f64>,
    truncated: u64,
    slopes: u64,
}

/// `frame ← m · frame` for column-major `frame`.
fn apply(m: &[f64], frame: &mut [f64], d: usize, tmp: &mut [f64]) {
    for col in 0..d {
        let f = &frame[col * d..(col + 1) * d];
        for row in 0..d {
            let mrow = &m[row * d..(row + 1) * d];
            tmp[row] = mrow.iter().zip(f).map(|(a, b)| a * b).sum();
        }
        frame[col * d..(col + 1) * d].copy_from_slice(&tmp[..d]);
    }
}

/// Modified Gram–Schmidt on the columns; adds `ln R_jj` to `logs`.
fn reorthonormalize(frame: &mut [f64], d: usize, logs: &mut [f64], step: u64) -> Result<()> {
    for j in 0..d {
        for i in 0..j {
            let (head, tail) = frame.split_at_mut(j * d);
            let qi = &head[i * d..(i + 1) * d];
            let fj = &mut tail[..d];
            let r: f64 = qi.iter().zip(fj.iter()).map(|(a, b)| a * b).sum();
            for (x, q) in fj.iter_mut().zip(qi) {
                *x -= r * q;
            }
        }
        let fj = &mut frame[j * d..(j + 1) * d];
        let norm = fj.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::DegenerateFrame { step });
        }
        for x in fj.iter_mut() {
            *x /= norm;
        }
        logs[j] += norm.ln();
    }
    Ok(())
}

fn run_once(fc: &FloatCocycle, start: usize, cfg: &SimConfig, run: usize) -> Result<RunResult> {
    let d = fc.d;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    rng.set_stream(run as u64);

    let mut frame = vec![0.0; d * d];
    for i in 0..d {
        frame[i * d + i] = 1.0;
    }
    let mut tmp = vec![0.0; d];
    let mut logs = vec![0.0; d];
    let mut vertex = start;
    let mut use_r = true;
    let mut step = 0u64;
    let mut truncated = 0u64;
    let mut slopes = 0u64;
    let cap = BigUint::from(cfg.digit_cap);

    'outer: while step < cfg.steps {
        let digits = SlopeDigits::draw(&mut rng);
        slopes += 1;
        let slope_end = step.saturating_add(cfg.slope_refresh).min(cfg.steps);
        for a in digits {
            let block = if a > cap {
                truncated += 1;
                cfg.digit_cap
            } else {
                u64::try_from(&a).expect("digit below cap")
            };
            let (mats, edges) = if use_r {
                (&fc.r, &fc.r_edge)
            } else {
                (&fc.l, &fc.l_edge)
            };
            use_r = !use_r;
            for _ in 0..block {
                apply(&mats[vertex], &mut frame, d, &mut tmp);
                vertex = edges[vertex];
                step += 1;
                if step.is_multiple_of(cfg.qr_every) || step == cfg.steps {
                    reorthonormalize(&mut frame, d, &mut logs, step)?;
                }
                if step >= slope_end {
                    continue 'outer;
                }
            }
        }
    }

    let mut theta: Vec<f64> = logs.iter().map(|x| x / cfg.steps as f64).collect();
    theta.sort_by(|a, b| b.total_cmp(a));
    Ok(RunResult {
        theta,
        truncated,
        slopes,
    })
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs the simulation on a prebuilt cocycle, starting from its base vertex.
pub fn simulate_cocycle(kz: &KzCocycle, cfg: &SimConfig) -> Result<LyapunovEstimate> {
    cfg.validate()?;
    let started = Instant::now();
    let fc = FloatCocycle::new(kz);
    let d = fc.d;
    let g = d / 2;
    let runs: Vec<RunResult> = (0..cfg.runs)
        .into_par_iter()
        .map(|run| run_once(&fc, kz.orbit.base, cfg, run))
        .collect::<Result<_>>()?;

    let column = |f: &dyn Fn(&RunResult) -> f64| -> (f64, f64) {
        mean_and_stderr(&runs.iter().map(f).collect::<Vec<_>>())
    };
    let mut raw_exponents = Vec::with_capacity(d);
    let mut raw_stderr = Vec::with_capacity(d);
    let mut normalized = Vec::with_capacity(d);
    let mut stderr = Vec::with_capacity(d);
    for i in 0..d {
        let (m, s) = column(&|r| r.theta[i]);
        raw_exponents.push(m);
        raw_stderr.push(s);
        let (m, s) = column(&|r| r.theta[i] / r.theta[0]);
        normalized.push(m);
        stderr.push(s);
    }
    let (positive_sum, positive_sum_stderr) =
        column(&|r| r.theta[..g].iter().sum::<f64>() / r.theta[0]);

    Ok(LyapunovEstimate {
        genus: g as u32,
        orbit_size: kz.orbit.len(),
        raw_exponents,
        raw_stderr,
        normalized,
        stderr,
        positive_sum,
        positive_sum_stderr,
        truncated_digits: runs.iter().map(|r| r.truncated).sum(),
        slopes_drawn: runs.iter().map(|r| r.slopes).sum(),
        config: *cfg,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

pub fn simulate(o: &Origami, cfg: &SimConfig) -> Result<LyapunovEstimate> {
    cfg.validate()?;
    simulate_cocycle(&KzCocycle::new(o)?, cfg)
}
