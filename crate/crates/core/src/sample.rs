//! Perfect sampling by monotone coupling from the past, and plain heat-bath
//! chains, on the lattice of partitions in a box.
//!
//! All randomness is counter-based: the update at time `t < 0` is a pure
//! function of `(seed, t)`, read from a ChaCha8 keystream at word offset
//! `4 * (-t - 1)`. Replaying earlier epochs needs no stored state.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::partition::{BoxDims, PlanePartition};

/// One heat-bath update: resample cell `(row, col)` using `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpdateEvent {
    pub time: i64,
    pub row: usize,
    pub col: usize,
    pub u: f64,
}

/// Keyed update stream for one seed.
#[derive(Clone)]
pub struct EventStream {
    dims: BoxDims,
    seed: u64,
    rng: ChaCha8Rng,
}

const WORDS_PER_EVENT: u128 = 4;
const CHUNK: usize = 4096;

impl EventStream {
    pub fn new(dims: BoxDims, seed: u64) -> Self {
        EventStream {
            dims,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn decode(&self, x: u64, y: u64) -> (usize, f64) {
        let cells = self.dims.cells() as u128;
        let site = ((u128::from(x) * cells) >> 64) as usize;
        let u = (y >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        (site, u)
    }

    /// The event at time `t`, which must be negative.
    pub fn event(&self, t: i64) -> UpdateEvent {
        assert!(t < 0, "update times are negative");
        let counter = (-(t + 1)) as u128;
        let mut rng = self.rng.clone();
        rng.set_word_pos(counter * WORDS_PER_EVENT);
        let (site, u) = self.decode(rng.next_u64(), rng.next_u64());
        UpdateEvent {
            time: t,
            row: site / self.dims.b + 1,
            col: site % self.dims.b + 1,
            u,
        }
    }

    /// Events for times `start .. start + len` (all negative) in increasing
    /// time order, as `(row-major site, u)`.
    fn fill(&mut self, start: i64, len: usize, out: &mut Vec<(usize, f64)>) {
        out.clear();
        if len == 0 {
            return;
        }
        let end = start + len as i64 - 1;
        debug_assert!(end < 0);
        // latest time has the smallest counter
        let low_counter = (-(end + 1)) as u128;
        self.rng.set_word_pos(low_counter * WORDS_PER_EVENT);
        for _ in 0..len {
            let x = self.rng.next_u64();
            let y = self.rng.next_u64();
            out.push(self.decode(x, y));
        }
        out.reverse();
    }
}

/// Per-sample seed derived from a base seed and a sample index.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}

#[inline]
fn update_cell(z: &mut [u32], dims: BoxDims, pos: usize, u: f64) {
    let b = dims.b;
    let (r, j) = (pos / b, pos % b);
    let mut lo = 0;
    let mut hi = dims.c;
    if r + 1 < dims.a {
        lo = lo.max(z[pos + b]);
    }
    if j + 1 < b {
        lo = lo.max(z[pos + 1]);
    }
    if r > 0 {
        hi = hi.min(z[pos - b]);
    }
    if j > 0 {
        hi = hi.min(z[pos - 1]);
    }
    let width = f64::from(hi - lo + 1);
    z[pos] = lo + (u * width) as u32;
}

/// Resample cell `(r, j)` (1-based) uniformly on its allowed interval:
/// `lo + floor(u * (hi - lo + 1))`.
pub fn heat_bath_step(state: &PlanePartition, site: (usize, usize), u: f64) -> PlanePartition {
    let dims = state.dims();
    assert!((1..=dims.a).contains(&site.0) && (1..=dims.b).contains(&site.1));
    assert!((0.0..1.0).contains(&u));
    let mut next = state.clone();
    update_cell(
        next.as_mut_slice(),
        dims,
        (site.0 - 1) * dims.b + (site.1 - 1),
        u,
    );
    next
}

/// Componentwise order `x <= y`.
pub fn dominance(x: &PlanePartition, y: &PlanePartition) -> Result<bool> {
    x.dominated_by(y)
}

#[derive(Debug, Clone, Copy)]
pub struct CftpConfig {
    /// First epoch length; later epochs double it.
    pub initial_t: u64,
    /// Give up (with an error) once an epoch would exceed this many ticks.
    pub max_t: u64,
}

impl Default for CftpConfig {
    fn default() -> Self {
        CftpConfig {
            initial_t: 1,
            max_t: 1 << 30,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CftpStats {
    /// Epoch length at which top and bottom coalesced.
    pub coalescence_t: u64,
    /// Total single-site updates applied, both trajectories counted once.
    pub ticks: u64,
}

/// An exactly uniform sample, deterministic in `(dims, seed)`.
pub fn cftp_sample(dims: BoxDims, seed: u64) -> Result<PlanePartition> {
    cftp_sample_with(dims, seed, CftpConfig::default()).map(|(p, _)| p)
}

pub fn cftp_sample_with(
    dims: BoxDims,
    seed: u64,
    config: CftpConfig,
) -> Result<(PlanePartition, CftpStats)> {
    let mut stream = EventStream::new(dims, seed);
    let mut buf = Vec::with_capacity(CHUNK);
    let mut t = config.initial_t.max(1);
    let mut ticks = 0u64;
    loop {
        if t > config.max_t {
            return Err(Error::NoCoalescence { ticks: t / 2, seed });
        }
        let mut lower = PlanePartition::bottom(dims);
        let mut upper = PlanePartition::top(dims);
        let mut time = -(t as i64);
        while time < 0 {
            let len = ((-time) as usize).min(CHUNK);
            stream.fill(time, len, &mut buf);
            let (lo, hi) = (lower.as_mut_slice(), upper.as_mut_slice());
            for &(pos, u) in &buf {
                update_cell(lo, dims, pos, u);
                update_cell(hi, dims, pos, u);
            }
            time += len as i64;
        }
        ticks += t;
        if lower == upper {
            return Ok((
                lower,
                CftpStats {
                    coalescence_t: t,
                    ticks,
                },
            ));
        }
        t *= 2;
    }
}

/// Starting point for [`mcmc_chain`].
#[derive(Debug, Clone)]
pub enum ChainStart {
    Bottom,
    Top,
    State(PlanePartition),
}

/// `sweeps * a * b` heat-bath updates driven by the events at times
/// `-(sweeps*a*b) .. -1`, so a chain from the bottom reproduces the lower
/// CFTP trajectory of the same length.
pub fn mcmc_chain(
    dims: BoxDims,
    seed: u64,
    sweeps: u64,
    start: ChainStart,
) -> Result<PlanePartition> {
    let mut state = match start {
        ChainStart::Bottom => PlanePartition::bottom(dims),
        ChainStart::Top => PlanePartition::top(dims),
        ChainStart::State(p) => {
            if p.dims() != dims {
                return Err(Error::ShapeMismatch {
                    expected_rows: dims.a,
                    expected_cols: dims.b,
                    found: p.dims().to_string(),
                });
            }
            p
        }
    };
    let n = sweeps * dims.cells() as u64;
    let mut stream = EventStream::new(dims, seed);
    let mut buf = Vec::with_capacity(CHUNK);
    let mut time = -(n as i64);
    while time < 0 {
        let len = ((-time) as usize).min(CHUNK);
        stream.fill(time, len, &mut buf);
        let z = state.as_mut_slice();
        for &(pos, u) in &buf {
            update_cell(z, dims, pos, u);
        }
        time += len as i64;
    }
    Ok(state)
}
