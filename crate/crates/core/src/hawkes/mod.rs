//! Linear multivariate Hawkes processes with exponential kernels.
//!
//! Kernels are stored target-major: `kernels[beta][alpha]` is the effect of
//! an `alpha` event on the intensity of `beta`.

mod simulate;

use std::io::Write;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dmg, DmgBuilder, NodeId};

pub use simulate::{simulate, simulate_intervened, simulate_replicates, SimulationOptions, DEFAULT_EVENT_CAP};

/// `g(u) = a * exp(-b * u)` for `u >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentialKernel {
    pub a: f64,
    pub b: f64,
}

impl ExponentialKernel {
    pub fn zero() -> Self {
        ExponentialKernel { a: 0.0, b: 1.0 }
    }

    pub fn eval(&self, u: f64) -> f64 {
        if u < 0.0 {
            0.0
        } else {
            self.a * (-self.b * u).exp()
        }
    }

    /// Integral of `g` over `[0, u]`.
    pub fn integral(&self, u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            self.a / self.b * (1.0 - (-self.b * u).exp())
        }
    }

    /// Total mass `a / b`.
    pub fn mass(&self) -> f64 {
        self.a / self.b
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HawkesModel {
    pub mu: Vec<f64>,
    pub kernels: Vec<Vec<ExponentialKernel>>,
    #[serde(rename = "T")]
    pub horizon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl HawkesModel {
    pub fn new(mu: Vec<f64>, kernels: Vec<Vec<ExponentialKernel>>, horizon: f64) -> Result<Self> {
        let m = HawkesModel { mu, kernels, horizon, labels: None };
        m.validate()?;
        Ok(m)
    }

    /// A model with all kernels zero: independent Poisson processes.
    pub fn poisson(mu: Vec<f64>, horizon: f64) -> Result<Self> {
        let n = mu.len();
        Self::new(mu, vec![vec![ExponentialKernel::zero(); n]; n], horizon)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        self.labels = Some(labels);
        self.validate()?;
        Ok(self)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let m: HawkesModel = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.mu.len();
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if n == 0 {
            return bad("no processes".into());
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        if let Some(i) = self.mu.iter().position(|&m| !(m.is_finite() && m >= 0.0)) {
            return bad(format!("mu[{i}] = {} is not a nonnegative rate", self.mu[i]));
        }
        if self.kernels.len() != n || self.kernels.iter().any(|row| row.len() != n) {
            return bad(format!("kernel matrix must be {n}x{n}"));
        }
        for (beta, row) in self.kernels.iter().enumerate() {
            for (alpha, k) in row.iter().enumerate() {
                if !(k.a.is_finite() && k.a >= 0.0 && k.b.is_finite() && k.b > 0.0) {
                    return bad(format!("kernel[{beta}][{alpha}] needs a >= 0 and b > 0, got a={} b={}", k.a, k.b));
                }
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != n {
                return bad(format!("{} labels for {n} processes", labels.len()));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn labels(&self) -> Vec<String> {
        match &self.labels {
            Some(l) => l.clone(),
            None => (0..self.dim()).map(|i| i.to_string()).collect(),
        }
    }

    pub fn node_by_label(&self, label: &str) -> Result<usize> {
        self.labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }

    /// Branching matrix `A[beta][alpha] = a / b`.
    pub fn branching_matrix(&self) -> Vec<Vec<f64>> {
        self.kernels
            .iter()
            .map(|row| row.iter().map(ExponentialKernel::mass).collect())
            .collect()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if (0.0..=self.horizon).contains(&t) {
            Ok(())
        } else {
            Err(Error::TimeOutOfRange { t, horizon: self.horizon })
        }
    }
}

/// Per-node event times, strictly increasing, within `[0, T]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EventHistory {
    pub times: Vec<Vec<f64>>,
    pub horizon: f64,
}

impl EventHistory {
    pub fn empty(n: usize, horizon: f64) -> Self {
        EventHistory { times: vec![Vec::new(); n], horizon }
    }

    pub fn new(times: Vec<Vec<f64>>, horizon: f64) -> Result<Self> {
        for (v, ts) in times.iter().enumerate() {
            check_increasing(ts, horizon).map_err(|e| Error::InvalidModel(format!("history of node {v}: {e}")))?;
        }
        Ok(EventHistory { times, horizon })
    }

    pub fn dim(&self) -> usize {
        self.times.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.times.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.times.iter().map(Vec::len).sum()
    }

    /// All events as `(node, time)`, ordered by time then node.
    pub fn merged(&self) -> Vec<(usize, f64)> {
        let mut all: Vec<(usize, f64)> = self
            .times
            .iter()
            .enumerate()
            .flat_map(|(v, ts)| ts.iter().map(move |&t| (v, t)))
            .collect();
        all.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
        all
    }

    /// CSV `node,time` sorted by time.
    pub fn write_csv<W: Write>(&self, labels: &[String], w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["node", "time"])?;
        for (v, t) in self.merged() {
            out.write_record([labels[v].as_str(), &t.to_string()])?;
        }
        out.flush()?;
        Ok(())
    }
}

fn check_increasing(ts: &[f64], horizon: f64) -> std::result::Result<(), String> {
    if let Some(&t) = ts.iter().find(|&&t| !(0.0..=horizon).contains(&t)) {
        return Err(format!("time {t} outside [0, {horizon}]"));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err("times are not strictly increasing".into());
    }
    Ok(())
}

/// Hard intervention fixing the event times of one node.
#[derive(Clone, Debug, PartialEq)]
pub struct Intervention {
    pub node: usize,
    pub times: Vec<f64>,
}

impl Intervention {
    pub fn new(node: usize, times: Vec<f64>) -> Self {
        Intervention { node, times }
    }

    fn validate(&self, m: &HawkesModel) -> Result<()> {
        if self.node >= m.dim() {
            return Err(Error::InvalidIntervention(format!("node {} out of range", self.node)));
        }
        check_increasing(&self.times, m.horizon).map_err(Error::InvalidIntervention)
    }
}

/// Edge `alpha -> beta` iff `kernels[beta][alpha]` is not identically zero.
/// Loops are always present.
pub fn causal_graph(m: &HawkesModel) -> Dmg {
    let mut g = DmgBuilder::from_labels(m.labels()).expect("model labels are validated");
    for (beta, row) in m.kernels.iter().enumerate() {
        for (alpha, k) in row.iter().enumerate() {
            if k.a > 0.0 && alpha != beta {
                g.add_directed(NodeId(alpha), NodeId(beta)).expect("nodes exist");
            }
        }
        if row[beta].a == 0.0 {
            log::warn!("process {beta} has a zero self-kernel; its loop is kept by convention");
        }
    }
    g.build()
}

/// Intensities at `t`, using only events strictly before `t`.
pub fn intensity(m: &HawkesModel, h: &EventHistory, t: f64) -> Result<Vec<f64>> {
    m.check_time(t)?;
    if h.dim() != m.dim() {
        return Err(Error::InvalidModel(format!("history has {} nodes, model {}", h.dim(), m.dim())));
    }
    Ok((0..m.dim())
        .map(|beta| {
            m.mu[beta]
                + h.times
                    .iter()
                    .enumerate()
                    .map(|(alpha, ts)| {
                        let k = m.kernels[beta][alpha];
                        ts.iter().take_while(|&&s| s < t).map(|&s| k.eval(t - s)).sum::<f64>()
                    })
                    .sum::<f64>()
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stationarity {
    pub stationary: bool,
    pub spectral_radius: f64,
}

pub const POWER_TOLERANCE: f64 = 1e-10;
pub const POWER_MAX_ITER: usize = 100_000;

/// Spectral radius of the branching matrix.
///
/// The radius of a nonnegative matrix is the largest radius among its
/// strongly connected blocks. Each block is irreducible, so power iteration
/// on `B + I` converges; the Collatz-Wielandt bounds bracket `rho(B) + 1`
/// and stop the iteration once they agree.
pub fn stationarity_check(m: &HawkesModel) -> Stationarity {
    let a = m.branching_matrix();
    let mut support = DiGraph::<(), ()>::new();
    let ids: Vec<_> = (0..a.len()).map(|_| support.add_node(())).collect();
    for (beta, row) in a.iter().enumerate() {
        for (alpha, &x) in row.iter().enumerate() {
            if x > 0.0 {
                support.add_edge(ids[alpha], ids[beta], ());
            }
        }
    }
    let rho = tarjan_scc(&support)
        .into_iter()
        .map(|block| {
            let idx: Vec<usize> = block.into_iter().map(|v| v.index()).collect();
            let sub: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).collect()).collect();
            block_radius(&sub)
        })
        .fold(0.0, f64::max);
    Stationarity { stationary: rho < 1.0, spectral_radius: rho }
}

fn block_radius(a: &[Vec<f64>]) -> f64 {
    if a.iter().flatten().all(|&x| x == 0.0) {
        return 0.0;
    }
    let n = a.len();
    let mut x = vec![1.0; n];
    let mut upper = f64::INFINITY;
    for _ in 0..POWER_MAX_ITER {
        let y: Vec<f64> = (0..n)
            .map(|i| x[i] + a[i].iter().zip(&x).map(|(aij, xj)| aij * xj).sum::<f64>())
            .collect();
        let (lo, hi) = y
            .iter()
            .zip(&x)
            .map(|(yi, xi)| yi / xi)
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
        upper = hi;
        if hi - lo <= POWER_TOLERANCE * hi {
            break;
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        x = y.into_iter().map(|v| v / norm).collect();
    }
    (upper - 1.0).max(0.0)
}

/// Compensator increments between consecutive events of each node,
/// `Lambda(t_i) - Lambda(t_{i-1})` with `t_0 = 0`. Under the model these are
/// i.i.d. Exp(1).
pub fn rescaled_intervals(m: &HawkesModel, h: &EventHistory) -> Result<Vec<Vec<f64>>> {
    if h.dim() != m.dim() {
        return Err(Error::InvalidModel(format!("history has {} nodes, model {}", h.dim(), m.dim())));
    }
    let n = m.dim();
    // decay[beta][alpha] = sum over alpha events s < t of exp(-b (t - s))
    let mut decay = vec![vec![0.0; n]; n];
    let mut fired = vec![0usize; n];
    let mut last_lambda = vec![0.0; n];
    let mut now = 0.0;
    let mut out = vec![Vec::new(); n];
    let compensator = |beta: usize, t: f64, decay: &[Vec<f64>], fired: &[usize]| {
        m.mu[beta] * t
            + (0..n)
                .map(|alpha| m.kernels[beta][alpha].mass() * (fired[alpha] as f64 - decay[beta][alpha]))
                .sum::<f64>()
    };
    for (v, t) in h.merged() {
        for beta in 0..n {
            for alpha in 0..n {
                decay[beta][alpha] *= (-m.kernels[beta][alpha].b * (t - now)).exp();
            }
        }
        now = t;
        let lambda = compensator(v, t, &decay, &fired);
        out[v].push(lambda - last_lambda[v]);
        last_lambda[v] = lambda;
        fired[v] += 1;
        for row in decay.iter_mut() {
            row[v] += 1.0;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    pub critical: f64,
    pub pass: bool,
}

/// One-sample Kolmogorov-Smirnov test against Exp(1) at level 0.01, using
/// the asymptotic critical value `1.628 / sqrt(n)`.
pub fn ks_exponential(samples: &[f64]) -> KsResult {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    let nf = n as f64;
    let statistic = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = 1.0 - (-x).exp();
            (f - i as f64 / nf).max((i + 1) as f64 / nf - f)
        })
        .fold(0.0, f64::max);
    let critical = 1.628 / nf.sqrt();
    KsResult { statistic, n, critical, pass: n > 0 && statistic <= critical }
}

/// Pools the rescaled intervals of all nodes and runs [`ks_exponential`].
pub fn time_rescaling_test(m: &HawkesModel, h: &EventHistory) -> Result<KsResult> {
    let pooled: Vec<f64> = rescaled_intervals(m, h)?.into_iter().flatten().collect();
    Ok(ks_exponential(&pooled))
}
