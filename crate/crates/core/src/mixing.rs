//! Total-variation curves `d(t)`, the coupling bound on `t_mix(ε)`, and
//! seeded trajectory simulation.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chain::{build_m, AlphaParam, ClassDistribution, MultSide};
use crate::linalg::{lcm_of_denominators, rational_to_f64};
use crate::ring::{FiniteRing, RingAnalysis, RingLabel};
use crate::stationary::{stationary_recursive, StationaryError};
use crate::Rational;

/// Longest horizon accepted by [`d_of_t`].
pub const MAX_HORIZON: usize = 64;
/// Largest ring whose powers are taken in exact arithmetic.
pub const EXACT_MAX: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixingError {
    #[error("distributions have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(&'static str),
    #[error("horizon {0} exceeds {MAX_HORIZON}")]
    HorizonTooLarge(usize),
    #[error("start state {0} is not a ring element")]
    BadStart(usize),
    #[error(transparent)]
    Stationary(#[from] StationaryError),
}

/// `(1/2)·Σ|μ(x) − ν(x)|`.
pub fn tv_distance(mu: &[f64], nu: &[f64]) -> Result<f64, MixingError> {
    if mu.len() != nu.len() {
        return Err(MixingError::LengthMismatch(mu.len(), nu.len()));
    }
    Ok(0.5 * mu.iter().zip(nu).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

pub fn tv_distance_exact(mu: &[Rational], nu: &[Rational]) -> Result<Rational, MixingError> {
    if mu.len() != nu.len() {
        return Err(MixingError::LengthMismatch(mu.len(), nu.len()));
    }
    let s: Rational = mu.iter().zip(nu).map(|(a, b)| (a - b).abs()).sum();
    Ok(s / Rational::from_integer(BigInt::from(2)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixPoint {
    pub t: usize,
    pub d: f64,
    /// Present when the powers were exact.
    pub exact: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingCurve {
    pub ring: RingLabel,
    pub alpha: Rational,
    pub points: Vec<MixPoint>,
}

impl MixingCurve {
    pub fn is_exact(&self) -> bool {
        self.points.iter().all(|p| p.exact.is_some())
    }

    /// `(1−α)^t`, exactly.
    pub fn geometric_bound(&self, t: usize) -> Rational {
        num_traits::pow(Rational::one() - &self.alpha, t)
    }

    /// Steps at which `d(t) > (1−α)^t`. Exact points compare exactly; float
    /// points get a relative slack of 1e-12.
    pub fn bound_violations(&self) -> Vec<usize> {
        self.points
            .iter()
            .filter(|p| match &p.exact {
                Some(d) => *d > self.geometric_bound(p.t),
                None => {
                    let b = rational_to_f64(&self.geometric_bound(p.t));
                    p.d > b * (1.0 + 1e-12) + 1e-15
                }
            })
            .map(|p| p.t)
            .collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| match (&w[0].exact, &w[1].exact) {
            (Some(a), Some(b)) => b <= a,
            _ => w[1].d <= w[0].d + 1e-12,
        })
    }

    /// `min{t : d(t) ≤ ε}` within the computed horizon.
    pub fn t_mix(&self, eps: f64) -> Option<usize> {
        self.points.iter().find(|p| p.d <= eps).map(|p| p.t)
    }
}

/// `d(t) = max_x ||M^t(x,·) − π||_TV` for `t = 0..=t_max`, with `π` from the
/// ideal recursion.
pub fn d_of_t(
    r: &FiniteRing,
    an: &RingAnalysis,
    q: &ClassDistribution,
    alpha: &AlphaParam,
    t_max: usize,
) -> Result<MixingCurve, MixingError> {
    if t_max > MAX_HORIZON {
        return Err(MixingError::HorizonTooLarge(t_max));
    }
    let pi = stationary_recursive(r, an, q, alpha)?;
    let m = build_m(r, q, alpha);
    let points = if r.size() <= EXACT_MAX { exact_curve(&m, &pi, t_max) } else { float_curve(&m, &pi, t_max) };
    Ok(MixingCurve { ring: r.label().clone(), alpha: alpha.value().clone(), points })
}

// With N = D·M and π = p/L, row x of M^t differs from π by
// Σ_y |N^t[x,y]·L − p_y·D^t| / (L·D^t).
fn exact_curve(m: &crate::chain::TransitionMatrix, pi: &[Rational], t_max: usize) -> Vec<MixPoint> {
    let n = m.dim();
    let (d, nmat) = m.integer_scaled();
    let l = lcm_of_denominators(pi);
    let p: Vec<BigInt> = pi.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let mut power: Vec<BigInt> = vec![BigInt::zero(); n * n];
    for i in 0..n {
        power[i * n + i] = BigInt::one();
    }
    let mut dt = BigInt::one();
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            power = crate::linalg::int_matmul(&power, &nmat, n);
            dt *= &d;
        }
        let worst = (0..n)
            .map(|x| (0..n).map(|y| (&power[x * n + y] * &l - &p[y] * &dt).abs()).sum::<BigInt>())
            .max()
            .unwrap_or_default();
        let v = Rational::new(worst, BigInt::from(2) * &l * &dt);
        out.push(MixPoint { t, d: rational_to_f64(&v), exact: Some(v) });
    }
    out
}

fn float_curve(m: &crate::chain::TransitionMatrix, pi: &[Rational], t_max: usize) -> Vec<MixPoint> {
    let n = m.dim();
    let mf = m.to_dmatrix();
    let pf: Vec<f64> = pi.iter().map(rational_to_f64).collect();
    let mut power = nalgebra::DMatrix::<f64>::identity(n, n);
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        if t > 0 {
            power = &power * &mf;
        }
        let worst = (0..n)
            .map(|x| 0.5 * (0..n).map(|y| (power[(x, y)] - pf[y]).abs()).sum::<f64>())
            .fold(0.0, f64::max);
        out.push(MixPoint { t, d: worst, exact: None });
    }
    out
}

/// `log ε / log(1−α) + 1`, for `0 < α < 1` and `0 < ε < 1/2`.
pub fn mixing_bound(alpha: f64, eps: f64) -> Result<f64, MixingError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(MixingError::ParamOutOfRange("alpha must lie in (0,1)"));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(MixingError::ParamOutOfRange("epsilon must lie in (0,1/2)"));
    }
    Ok(libm::log(eps) / libm::log(1.0 - alpha) + 1.0)
}

/// Draws from a finite law. Exact integer thresholds when the common
/// denominator fits in `u64`, cumulative doubles otherwise.
#[derive(Debug, Clone)]
enum Sampler {
    Exact { den: u64, cum: Vec<u64>, items: Vec<usize> },
    Float { cum: Vec<f64>, items: Vec<usize> },
}

impl Sampler {
    fn new(weights: &[(usize, &Rational)]) -> Sampler {
        let items: Vec<usize> = weights.iter().map(|w| w.0).collect();
        let den = lcm_of_denominators(weights.iter().map(|w| w.1));
        if let Some(den64) = den.to_u64() {
            let mut acc = 0u64;
            let cum = weights
                .iter()
                .map(|(_, w)| {
                    acc += (*w * Rational::from_integer(den.clone())).to_integer().to_u64().expect("fits");
                    acc
                })
                .collect();
            return Sampler::Exact { den: den64, cum, items };
        }
        let mut acc = 0.0;
        let cum = weights
            .iter()
            .map(|(_, w)| {
                acc += rational_to_f64(w);
                acc
            })
            .collect();
        Sampler::Float { cum, items }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        match self {
            Sampler::Exact { den, cum, items } => {
                let k = rng.random_range(0..*den);
                items[cum.partition_point(|&c| c <= k)]
            }
            Sampler::Float { cum, items } => {
                let total = *cum.last().expect("nonempty law");
                let k = rng.random::<f64>() * total;
                items[cum.partition_point(|&c| c <= k).min(items.len() - 1)]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationResult {
    pub counts: Vec<u64>,
    pub samples: u64,
    pub seed: u64,
    pub start: usize,
    pub steps: usize,
    pub side: MultSide,
}

impl SimulationResult {
    pub fn empirical(&self) -> Vec<f64> {
        let s = self.samples.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / s).collect()
    }

    /// Adds the counts of a disjoint block of sample indices.
    pub fn merge(&mut self, other: &SimulationResult) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.samples += other.samples;
    }
}

/// Simulation inputs shared by every sample block.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    ring: &'a FiniteRing,
    q: Sampler,
    coin: Sampler,
    side: MultSide,
}

impl<'a> Simulator<'a> {
    pub fn new(r: &'a FiniteRing, q: &ClassDistribution, alpha: &AlphaParam, side: MultSide) -> Simulator<'a> {
        let qw: Vec<(usize, &Rational)> = q.support().map(|x| (x, q.prob(x))).collect();
        let tails = alpha.tails();
        let coin = Sampler::new(&[(1, alpha.value()), (0, &tails)]);
        Simulator { ring: r, q: Sampler::new(&qw), coin, side }
    }

    /// One step: heads adds a uniform element, tails multiplies by a draw
    /// from `Q` on the configured side.
    pub fn step(&self, x: usize, rng: &mut ChaCha8Rng) -> usize {
        let r = self.ring;
        if self.coin.draw(rng) == 1 {
            r.add(x, rng.random_range(0..r.size()))
        } else {
            let z = self.q.draw(rng);
            match self.side {
                MultSide::Left => r.mul(z, x),
                MultSide::Right => r.mul(x, z),
            }
        }
    }

    /// Sample `i` runs on `ChaCha8Rng::seed_from_u64(seed)` with stream `i`,
    /// so any split of `0..samples` into blocks merges to the same counts.
    pub fn run_block(&self, x0: usize, t: usize, seed: u64, block: Range<u64>) -> Result<SimulationResult, MixingError> {
        let n = self.ring.size();
        if x0 >= n {
            return Err(MixingError::BadStart(x0));
        }
        let mut counts = vec![0u64; n];
        let base = ChaCha8Rng::seed_from_u64(seed);
        for i in block.clone() {
            let mut rng = base.clone();
            rng.set_stream(i);
            let mut x = x0;
            for _ in 0..t {
                x = self.step(x, &mut rng);
            }
            counts[x] += 1;
        }
        Ok(SimulationResult { counts, samples: block.end - block.start, seed, start: x0, steps: t, side: self.side })
    }
}

/// Runs `samples` independent trajectories of length `t` from `x0`.
#[allow(clippy::too_many_arguments)]
pub fn simulate(
    r: &FiniteRing,
    q: &ClassDistribution,
    alpha: &AlphaParam,
    x0: usize,
    t: usize,
    samples: u64,
    seed: u64,
    side: MultSide,
) -> Result<SimulationResult, MixingError> {
    Simulator::new(r, q, alpha, side).run_block(x0, t, seed, 0..samples)
}
