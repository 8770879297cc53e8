use rand::seq::index;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dmg, DmgBuilder, NodeId, ObservedSet};
use crate::rng::{self, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub n: usize,
    pub p_dir: f64,
    pub p_bi: f64,
    pub count: usize,
    pub seed: u64,
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        for (name, p) in [("p_dir", self.p_dir), ("p_bi", self.p_bi)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }

    pub fn graphs(&self) -> impl Iterator<Item = Dmg> + '_ {
        (0..self.count).map(|i| random_dmg(self, i).expect("validated config"))
    }
}

/// Replicate `i` of the corpus, drawn from the stream `(seed, i)`: first every
/// ordered pair gets a directed edge with probability `p_dir`, then every
/// unordered pair a bidirected edge with probability `p_bi`.
pub fn random_dmg(cfg: &CorpusConfig, i: usize) -> Result<Dmg> {
    cfg.validate()?;
    Ok(draw(cfg, &mut rng::stream(cfg.seed, i as u64)))
}

pub(crate) fn draw(cfg: &CorpusConfig, rng: &mut Rng) -> Dmg {
    let n = cfg.n;
    let mut b = DmgBuilder::with_nodes(n);
    for t in 0..n {
        for h in (0..n).filter(|&h| h != t) {
            if rng.random_bool(cfg.p_dir) {
                b.insert_directed(t, h);
            }
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            if rng.random_bool(cfg.p_bi) {
                b.add_bidirected(NodeId(x), NodeId(y)).expect("distinct nodes");
            }
        }
    }
    b.build()
}

/// A uniformly random subset of `0..n` of size `size`.
pub fn random_observed(n: usize, size: usize, rng: &mut Rng) -> ObservedSet {
    index::sample(rng, n, size.min(n)).into_iter().collect()
}
