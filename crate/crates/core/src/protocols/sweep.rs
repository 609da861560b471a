use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::parse_rational;
use crate::error::{Error, Result};
use crate::optics::{ErrorPlacementPolicy, NoiseModel};

use super::microcluster::Settings;
use super::pair::{fuse_pair, PairFusionSpec};

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "MICROCLUSTER_WORKERS";

/// A thread pool sized by [`WORKERS_ENV`], or rayon's default when unset.
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::Usage(format!("{WORKERS_ENV} must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::Domain(format!("cannot start workers: {e}")))
}

/// Inclusive grid `start:stop:steps`, evaluated exactly before conversion.
#[derive(Clone, Debug, PartialEq)]
pub struct PGrid {
    pub start: BigRational,
    pub stop: BigRational,
    pub steps: usize,
}

impl PGrid {
    pub fn new(start: BigRational, stop: BigRational, steps: usize) -> Result<Self> {
        if steps == 0 {
            return Err(Error::Domain("grid needs at least one step".into()));
        }
        Ok(Self { start, stop, steps })
    }

    pub fn exact_points(&self) -> Vec<BigRational> {
        if self.steps == 1 {
            return vec![self.start.clone()];
        }
        let span = &self.stop - &self.start;
        let last = BigRational::from_integer((self.steps as i64 - 1).into());
        (0..self.steps)
            .map(|i| &self.start + &span * BigRational::from_integer((i as i64).into()) / &last)
            .collect()
    }

    pub fn points(&self) -> Vec<f64> {
        self.exact_points().iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

impl FromStr for PGrid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, steps] = parts.as_slice() else {
            return Err(Error::Usage(format!("grid `{s}` must look like start:stop:steps")));
        };
        let steps = steps.trim().parse().map_err(|_| Error::Usage(format!("bad step count in `{s}`")))?;
        PGrid::new(parse_rational(start)?, parse_rational(stop)?, steps)
    }
}

impl fmt::Display for PGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.steps)
    }
}

/// One float-backend pair fidelity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    #[serde(serialize_with = "as_string")]
    pub policy: ErrorPlacementPolicy,
    pub leaves: usize,
    pub attempt: usize,
    pub alpha: f64,
    pub p: f64,
    pub fidelity: f64,
}

fn as_string<S: serde::Serializer>(p: &ErrorPlacementPolicy, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// Pair fidelities at `p_x = p_y = p_z = p` for every grid point, leaf count
/// and attempt, ordered by `(leaves, attempt, p)`. Cells with
/// `attempt > leaves` are skipped.
pub fn sweep_records(
    alpha: f64,
    grid: &PGrid,
    leaves: &[usize],
    attempts: &[usize],
    policy: ErrorPlacementPolicy,
) -> Result<Vec<SweepRecord>> {
    let mut leaves = leaves.to_vec();
    let mut attempts = attempts.to_vec();
    leaves.sort_unstable();
    leaves.dedup();
    attempts.sort_unstable();
    attempts.dedup();
    let points = grid.points();
    for &p in &points {
        NoiseModel::equiprobable(Complex64::new(alpha, 0.0), Complex64::new(p, 0.0)).validate()?;
    }
    if leaves.contains(&0) || attempts.contains(&0) {
        return Err(Error::Domain("leaves and attempts start at 1".into()));
    }
    let jobs: Vec<(usize, usize, f64)> = leaves
        .iter()
        .flat_map(|&n| attempts.iter().filter(move |&&k| k <= n).map(move |&k| (n, k)))
        .flat_map(|(n, k)| points.iter().map(move |&p| (n, k, p)))
        .collect();
    let settings = Settings::dense();
    worker_pool()?.install(|| {
        jobs.par_iter()
            .map(|&(n, k, p)| {
                let noise = NoiseModel::equiprobable(Complex64::new(alpha, 0.0), Complex64::new(p, 0.0));
                let spec = PairFusionSpec::new(n, k, noise, policy)?;
                let fidelity = fuse_pair(&spec, &settings)?.fidelity;
                Ok(SweepRecord { policy, leaves: n, attempt: k, alpha, p, fidelity })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points_are_exact() {
        let g: PGrid = "0:0.05:11".parse().unwrap();
        let pts = g.points();
        assert_eq!(pts.len(), 11);
        assert_eq!(pts[0], 0.0);
        assert_eq!(pts[3], 0.015);
        assert_eq!(pts[10], 0.05);
        assert_eq!("0.1:0.2:1".parse::<PGrid>().unwrap().points(), vec![0.1]);
        assert!("0:1:0".parse::<PGrid>().is_err());
        assert!("0:1".parse::<PGrid>().is_err());
    }

    #[test]
    fn noiseless_records() {
        let g: PGrid = "0:0:1".parse().unwrap();
        let recs = sweep_records(0.0, &g, &[2, 1], &[1, 2, 3], Default::default()).unwrap();
        let cells: Vec<(usize, usize)> = recs.iter().map(|r| (r.leaves, r.attempt)).collect();
        assert_eq!(cells, vec![(1, 1), (2, 1), (2, 2)]);
        for r in recs {
            assert!((r.fidelity - 1.0).abs() < 1e-12);
        }
    }
}
