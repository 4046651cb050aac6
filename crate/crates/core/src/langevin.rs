//! Seeded stochastic ensembles for free and trapped Brownian motion.
//!
//! Every trajectory draws from its own counter-based substream derived from
//! (seed, trajectory index), so ensembles are bit-reproducible regardless of
//! how many threads compute them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::model::TrapParameters;
use crate::{Error, PhysicalConstants, Result};

/// Trajectories per parallel work unit; fixed so streamed statistics merge
/// in a scheduling-independent order.
const CHUNK: usize = 1024;

/// Time step, horizon, ensemble size, seed, and start position of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub n_steps: usize,
    pub n_trajectories: usize,
    pub seed: u64,
    pub x0: f64,
}

impl SimConfig {
    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::domain(format!("dt must be > 0, got {}", self.dt)));
        }
        if self.n_steps < 1 {
            return Err(Error::domain("n_steps must be >= 1".to_string()));
        }
        if self.n_trajectories < 1 {
            return Err(Error::domain("n_trajectories must be >= 1".to_string()));
        }
        if !self.x0.is_finite() {
            return Err(Error::domain(format!("x0 must be finite, got {}", self.x0)));
        }
        Ok(())
    }

    fn times(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|i| i as f64 * self.dt).collect()
    }
}

/// An ensemble of positions, one row of `n_steps + 1` samples per
/// trajectory, all starting from `config.x0` at t = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble {
    positions: Vec<f64>,
    times: Vec<f64>,
    config: SimConfig,
}

impl TrajectoryEnsemble {
    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn n_trajectories(&self) -> usize {
        self.config.n_trajectories
    }

    /// Positions of trajectory `j` at every recorded time.
    pub fn trajectory(&self, j: usize) -> &[f64] {
        let row = self.config.n_steps + 1;
        &self.positions[j * row..(j + 1) * row]
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }
}

/// Per-time sample mean, unbiased sample variance, and mean-square
/// displacement about the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub times: Vec<f64>,
    pub mean_t: Vec<f64>,
    pub variance_t: Vec<f64>,
    /// (1/M)·Σ x², about the origin rather than the sample mean, so
    /// msd = (M-1)/M·variance + mean².
    pub msd_t: Vec<f64>,
}

/// The per-trajectory substream: ChaCha with the run seed, stream = index.
fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// One Euler-Maruyama update rule x -> x + drift(x)·dt + noise_amp·ξ,
/// written so free and trapped runs share the integration loop.
#[derive(Clone, Copy)]
struct Update {
    decay: f64,     // multiplies x each step: 1 - kM·dt (free: 1)
    noise_amp: f64, // per-step noise amplitude
}

impl Update {
    fn step(&self, x: f64, xi: f64) -> f64 {
        self.decay * x + self.noise_amp * xi
    }
}

fn simulate_rows(update: Update, config: &SimConfig) -> TrajectoryEnsemble {
    let row = config.n_steps + 1;
    let mut positions = vec![0.0; config.n_trajectories * row];
    positions
        .par_chunks_mut(row)
        .enumerate()
        .for_each(|(j, out)| {
            let mut rng = trajectory_rng(config.seed, j as u64);
            let mut x = config.x0;
            out[0] = x;
            for slot in out.iter_mut().skip(1) {
                let xi: f64 = StandardNormal.sample(&mut rng);
                x = update.step(x, xi);
                *slot = x;
            }
        });
    TrajectoryEnsemble {
        positions,
        times: config.times(),
        config: *config,
    }
}

/// Free diffusion: x ← x + √(2D·dt)·ξ. Deterministic given the seed.
pub fn simulate_free(diffusion: f64, config: &SimConfig) -> Result<TrajectoryEnsemble> {
    config.validate()?;
    if !(diffusion >= 0.0) {
        return Err(Error::domain(format!(
            "diffusion coefficient must be >= 0, got {diffusion}"
        )));
    }
    Ok(simulate_rows(free_update(diffusion, config.dt), config))
}

/// Overdamped trapped particle, Euler-Maruyama:
/// x ← x - kM·x·dt + √(2·k_B·T·mobility·dt)·ξ.
pub fn simulate_trapped(
    constants: &PhysicalConstants,
    trap: &TrapParameters,
    temperature: f64,
    config: &SimConfig,
) -> Result<TrajectoryEnsemble> {
    config.validate()?;
    let update = trapped_update(constants, trap, temperature, config.dt)?;
    Ok(simulate_rows(update, config))
}

/// Overdamped trapped particle using the exact one-step transition
/// x ← x·e^(-kM·dt) + √(σ0²(1 - e^(-2·kM·dt)))·ξ, free of time-discretization
/// error. Serves as a second oracle next to Euler-Maruyama.
pub fn simulate_trapped_exact(
    constants: &PhysicalConstants,
    trap: &TrapParameters,
    temperature: f64,
    config: &SimConfig,
) -> Result<TrajectoryEnsemble> {
    config.validate()?;
    let update = exact_update(constants, trap, temperature, config.dt)?;
    Ok(simulate_rows(update, config))
}

fn free_update(diffusion: f64, dt: f64) -> Update {
    Update {
        decay: 1.0,
        noise_amp: (2.0 * diffusion * dt).sqrt(),
    }
}

fn trapped_update(
    constants: &PhysicalConstants,
    trap: &TrapParameters,
    temperature: f64,
    dt: f64,
) -> Result<Update> {
    check_trap(trap, temperature)?;
    let km = trap.relaxation_rate_km;
    let bound = 0.05 / km;
    if dt > bound {
        return Err(Error::UnstableTimestep {
            dt,
            bound,
            rule: "dt <= 0.05/kM",
        });
    }
    Ok(Update {
        decay: 1.0 - km * dt,
        noise_amp: (2.0 * constants.boltzmann_kb * temperature * trap.mobility * dt).sqrt(),
    })
}

fn exact_update(
    constants: &PhysicalConstants,
    trap: &TrapParameters,
    temperature: f64,
    dt: f64,
) -> Result<Update> {
    check_trap(trap, temperature)?;
    let km = trap.relaxation_rate_km;
    let sigma0_sq = constants.boltzmann_kb * temperature / trap.stiffness_k;
    Ok(Update {
        decay: (-km * dt).exp(),
        noise_amp: (sigma0_sq * (1.0 - (-2.0 * km * dt).exp())).sqrt(),
    })
}

fn check_trap(trap: &TrapParameters, temperature: f64) -> Result<()> {
    if !(trap.relaxation_rate_km > 0.0) {
        return Err(Error::domain(format!(
            "relaxation rate must be > 0, got {}",
            trap.relaxation_rate_km
        )));
    }
    if !(temperature >= 0.0) {
        return Err(Error::domain(format!(
            "temperature must be >= 0, got {temperature}"
        )));
    }
    Ok(())
}

/// Per-time statistics of a materialized ensemble.
pub fn ensemble_stats(ensemble: &TrajectoryEnsemble) -> Result<EnsembleStats> {
    let n = ensemble.n_trajectories();
    if n < 2 {
        return Err(Error::domain(
            "sample variance needs at least 2 trajectories".to_string(),
        ));
    }
    let row = ensemble.config.n_steps + 1;
    let mut stats = StatsAccumulator::new(row);
    for j in 0..n {
        stats.add_row(ensemble.trajectory(j));
    }
    Ok(stats.finish(ensemble.times.clone()))
}

/// Statistics of a free-diffusion ensemble computed without materializing
/// the trajectories; identical substreams to [`simulate_free`].
pub fn free_stats(diffusion: f64, config: &SimConfig) -> Result<EnsembleStats> {
    config.validate()?;
    if !(diffusion >= 0.0) {
        return Err(Error::domain(format!(
            "diffusion coefficient must be >= 0, got {diffusion}"
        )));
    }
    streamed_stats(free_update(diffusion, config.dt), config)
}

/// Statistics of a trapped Euler-Maruyama ensemble computed without
/// materializing the trajectories; identical substreams to
/// [`simulate_trapped`].
pub fn trapped_stats(
    constants: &PhysicalConstants,
    trap: &TrapParameters,
    temperature: f64,
    config: &SimConfig,
) -> Result<EnsembleStats> {
    config.validate()?;
    let update = trapped_update(constants, trap, temperature, config.dt)?;
    streamed_stats(update, config)
}

fn streamed_stats(update: Update, config: &SimConfig) -> Result<EnsembleStats> {
    if config.n_trajectories < 2 {
        return Err(Error::domain(
            "sample variance needs at least 2 trajectories".to_string(),
        ));
    }
    let row = config.n_steps + 1;
    let n_chunks = config.n_trajectories.div_ceil(CHUNK);
    let partials: Vec<StatsAccumulator> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(config.n_trajectories);
            let mut acc = StatsAccumulator::new(row);
            let mut buf = vec![0.0; row];
            for j in lo..hi {
                let mut rng = trajectory_rng(config.seed, j as u64);
                let mut x = config.x0;
                buf[0] = x;
                for slot in buf.iter_mut().skip(1) {
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    x = update.step(x, xi);
                    *slot = x;
                }
                acc.add_row(&buf);
            }
            acc
        })
        .collect();
    // Chunks merge in index order, so the result does not depend on the
    // thread schedule.
    let total = partials
        .into_iter()
        .reduce(StatsAccumulator::merge)
        .expect("at least one chunk");
    Ok(total.finish(config.times()))
}

/// Positions of every trajectory at a few requested steps, plus the full
/// per-step statistics, computed without materializing the whole ensemble.
#[derive(Debug, Clone)]
pub struct SnapshotEnsemble {
    pub snapshot_steps: Vec<usize>,
    pub snapshot_times: Vec<f64>,
    /// One position vector (length n_trajectories) per requested step.
    pub positions: Vec<Vec<f64>>,
    pub stats: EnsembleStats,
}

/// Run the trapped Euler-Maruyama ensemble, keeping full statistics but
/// retaining positions only at the requested step indices. Substreams are
/// identical to [`simulate_trapped`].
pub fn trapped_snapshots(
    constants: &PhysicalConstants,
    trap: &TrapParameters,
    temperature: f64,
    config: &SimConfig,
    steps: &[usize],
) -> Result<SnapshotEnsemble> {
    config.validate()?;
    if config.n_trajectories < 2 {
        return Err(Error::domain(
            "sample variance needs at least 2 trajectories".to_string(),
        ));
    }
    if let Some(&bad) = steps.iter().find(|&&s| s > config.n_steps) {
        return Err(Error::domain(format!(
            "snapshot step {bad} beyond n_steps = {}",
            config.n_steps
        )));
    }
    let update = trapped_update(constants, trap, temperature, config.dt)?;
    let row = config.n_steps + 1;
    let n_chunks = config.n_trajectories.div_ceil(CHUNK);
    let partials: Vec<(StatsAccumulator, Vec<Vec<f64>>)> = (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(config.n_trajectories);
            let mut acc = StatsAccumulator::new(row);
            let mut captured: Vec<Vec<f64>> = vec![Vec::with_capacity(hi - lo); steps.len()];
            let mut buf = vec![0.0; row];
            for j in lo..hi {
                let mut rng = trajectory_rng(config.seed, j as u64);
                let mut x = config.x0;
                buf[0] = x;
                for slot in buf.iter_mut().skip(1) {
                    let xi: f64 = StandardNormal.sample(&mut rng);
                    x = update.step(x, xi);
                    *slot = x;
                }
                acc.add_row(&buf);
                for (k, &s) in steps.iter().enumerate() {
                    captured[k].push(buf[s]);
                }
            }
            (acc, captured)
        })
        .collect();
    let mut positions: Vec<Vec<f64>> =
        vec![Vec::with_capacity(config.n_trajectories); steps.len()];
    let mut total: Option<StatsAccumulator> = None;
    for (acc, captured) in partials {
        total = Some(match total {
            Some(t) => t.merge(acc),
            None => acc,
        });
        for (k, mut chunk_positions) in captured.into_iter().enumerate() {
            positions[k].append(&mut chunk_positions);
        }
    }
    Ok(SnapshotEnsemble {
        snapshot_steps: steps.to_vec(),
        snapshot_times: steps.iter().map(|&s| s as f64 * config.dt).collect(),
        positions,
        stats: total.expect("at least one chunk").finish(config.times()),
    })
}

/// Welford accumulators per time index, mergeable across trajectory chunks.
struct StatsAccumulator {
    count: usize,
    mean: Vec<f64>,
    m2: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl StatsAccumulator {
    fn new(row: usize) -> Self {
        StatsAccumulator {
            count: 0,
            mean: vec![0.0; row],
            m2: vec![0.0; row],
            sum_sq: vec![0.0; row],
        }
    }

    fn add_row(&mut self, row: &[f64]) {
        self.count += 1;
        let n = self.count as f64;
        for (i, &x) in row.iter().enumerate() {
            let delta = x - self.mean[i];
            self.mean[i] += delta / n;
            self.m2[i] += delta * (x - self.mean[i]);
            self.sum_sq[i] += x * x;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        if other.count == 0 {
            return self;
        }
        if self.count == 0 {
            return other;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let total = na + nb;
        for i in 0..self.mean.len() {
            let delta = other.mean[i] - self.mean[i];
            self.m2[i] += other.m2[i] + delta * delta * na * nb / total;
            self.mean[i] = (na * self.mean[i] + nb * other.mean[i]) / total;
            self.sum_sq[i] += other.sum_sq[i];
        }
        self.count += other.count;
        self
    }

    fn finish(self, times: Vec<f64>) -> EnsembleStats {
        let n = self.count as f64;
        EnsembleStats {
            times,
            mean_t: self.mean,
            variance_t: self.m2.iter().map(|m2| m2 / (n - 1.0)).collect(),
            msd_t: self.sum_sq.iter().map(|s| s / n).collect(),
        }
    }
}
