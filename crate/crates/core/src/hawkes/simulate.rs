use rand::Rng as _;
use rayon::prelude::*;

use super::{stationarity_check, EventHistory, HawkesModel, Intervention};
use crate::error::{Error, Result};
use crate::rng::{self, Rng};

pub const DEFAULT_EVENT_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimulationOptions {
    /// Simulate even when the stationarity check fails.
    pub force: bool,
    pub event_cap: usize,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        SimulationOptions { force: false, event_cap: DEFAULT_EVENT_CAP }
    }
}

/// Ogata thinning on `[0, T]` with the random stream `(seed, 0)`.
pub fn simulate(m: &HawkesModel, seed: u64, opts: SimulationOptions) -> Result<EventHistory> {
    run(m, None, &mut rng::stream(seed, 0), opts)
}

/// As [`simulate`], with the intervened node's events fixed to `iv.times`.
pub fn simulate_intervened(
    m: &HawkesModel,
    iv: &Intervention,
    seed: u64,
    opts: SimulationOptions,
) -> Result<EventHistory> {
    iv.validate(m)?;
    run(m, Some(iv), &mut rng::stream(seed, 0), opts)
}

/// Replicate `i` uses the random stream `(seed, i)`.
pub fn simulate_replicates(
    m: &HawkesModel,
    iv: Option<&Intervention>,
    seed: u64,
    count: usize,
    opts: SimulationOptions,
) -> Result<Vec<EventHistory>> {
    if let Some(iv) = iv {
        iv.validate(m)?;
    }
    check_stationary(m, opts)?;
    let opts = SimulationOptions { force: true, ..opts };
    (0..count)
        .into_par_iter()
        .map(|i| run(m, iv, &mut rng::stream(seed, i as u64), opts))
        .collect()
}

/// Exponentially decaying excitation, kept up to date at `now`.
struct Excitation<'m> {
    m: &'m HawkesModel,
    /// `level[beta][alpha] = sum of a * exp(-b (now - s))` over `alpha` events `s`.
    level: Vec<Vec<f64>>,
    now: f64,
}

impl<'m> Excitation<'m> {
    fn new(m: &'m HawkesModel) -> Self {
        let n = m.dim();
        Excitation { m, level: vec![vec![0.0; n]; n], now: 0.0 }
    }

    fn advance(&mut self, t: f64) {
        let dt = t - self.now;
        for (row, ks) in self.level.iter_mut().zip(&self.m.kernels) {
            for (x, k) in row.iter_mut().zip(ks) {
                *x *= (-k.b * dt).exp();
            }
        }
        self.now = t;
    }

    fn fire(&mut self, alpha: usize) {
        for (row, ks) in self.level.iter_mut().zip(&self.m.kernels) {
            row[alpha] += ks[alpha].a;
        }
    }

    /// Intensities at `now` (after any event at `now`), with `blocked` silenced.
    fn rates(&self, blocked: Option<usize>) -> Vec<f64> {
        (0..self.m.dim())
            .map(|beta| {
                if Some(beta) == blocked {
                    0.0
                } else {
                    self.m.mu[beta] + self.level[beta].iter().sum::<f64>()
                }
            })
            .collect()
    }
}

fn check_stationary(m: &HawkesModel, opts: SimulationOptions) -> Result<()> {
    if !opts.force {
        let s = stationarity_check(m);
        if !s.stationary {
            return Err(Error::NonStationary { rho: s.spectral_radius });
        }
    }
    Ok(())
}

fn run(m: &HawkesModel, iv: Option<&Intervention>, rng: &mut Rng, opts: SimulationOptions) -> Result<EventHistory> {
    check_stationary(m, opts)?;
    let blocked = iv.map(|iv| iv.node);
    let mut forced = iv.map(|iv| iv.times.as_slice()).unwrap_or(&[]).iter().copied().peekable();
    let mut h = EventHistory::empty(m.dim(), m.horizon);
    let mut x = Excitation::new(m);
    let mut total = 0usize;
    let mut record = |h: &mut EventHistory, v: usize, t: f64| {
        total += 1;
        if total > opts.event_cap {
            return Err(Error::EventCapExceeded { cap: opts.event_cap });
        }
        h.times[v].push(t);
        Ok(())
    };
    loop {
        // Intensities only decay until the next event, so the current total
        // bounds them on the whole waiting interval.
        let bound: f64 = x.rates(blocked).iter().sum();
        let candidate = if bound > 0.0 {
            x.now - (1.0 - rng.random::<f64>()).ln() / bound
        } else {
            f64::INFINITY
        };
        if let Some(&tf) = forced.peek() {
            if tf <= candidate {
                forced.next();
                x.advance(tf);
                record(&mut h, blocked.expect("forced times imply an intervention"), tf)?;
                x.fire(blocked.unwrap());
                continue;
            }
        }
        if candidate > m.horizon {
            break;
        }
        x.advance(candidate);
        let rates = x.rates(blocked);
        let sum: f64 = rates.iter().sum();
        if rng.random::<f64>() * bound >= sum {
            continue;
        }
        let mut u = rng.random::<f64>() * sum;
        let mut v = rates.iter().rposition(|&r| r > 0.0).expect("accepted with positive intensity");
        for (i, r) in rates.iter().enumerate() {
            if u < *r {
                v = i;
                break;
            }
            u -= r;
        }
        record(&mut h, v, candidate)?;
        x.fire(v);
    }
    Ok(h)
}
