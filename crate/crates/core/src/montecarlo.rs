//! Monte Carlo estimation of `P`, `P_p` and `P_s` over an SNR grid.
//!
//! Frame `f` of grid point `i` always draws its information bits and noise
//! from [`frame_rng`]`(seed, i, f)`. Frames are processed in fixed-size
//! chunks and the stopping rule is checked only between chunks, so results
//! do not depend on the number of workers.

use std::ops::ControlFlow;
use std::path::Path;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{codeword_llrs, frame_rng, ChannelParams, SnrPoint};
use crate::code::LdpcCode;
use crate::codec::{self, encode_into, SpaDecoder};
use crate::error::{Error, Result};
use crate::secrecy::{CurvePoint, ErrorRateCurve, FrameLayout, Scrambler, Target};

/// Stop a point once every target has `min_errors` error events, or after
/// `max_frames` frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_errors: u64,
    pub max_frames: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_errors: 100,
            max_frames: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub snr_grid: Vec<SnrPoint>,
    pub stop: StopRule,
    pub master_seed: u64,
    /// Worker threads; does not affect results.
    #[serde(skip)]
    pub workers: usize,
    pub max_iterations: usize,
    /// Frames per scheduling chunk; part of the result contract.
    pub chunk_frames: u64,
}

impl SimConfig {
    pub fn new(snr_grid: Vec<SnrPoint>, stop: StopRule, master_seed: u64) -> Self {
        SimConfig {
            snr_grid,
            stop,
            master_seed,
            workers: 1,
            max_iterations: codec::DEFAULT_MAX_ITERATIONS,
            chunk_frames: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.stop.min_errors < 1 || self.stop.max_frames < 1 {
            return Err(Error::InvalidConfig("min_errors and max_frames must be at least 1".into()));
        }
        if self.snr_grid.is_empty() {
            return Err(Error::InvalidConfig("empty SNR grid".into()));
        }
        if self.snr_grid.windows(2).any(|w| w[1].db() <= w[0].db()) {
            return Err(Error::InvalidConfig("SNR grid must be strictly increasing".into()));
        }
        if self.workers < 1 || self.chunk_frames < 1 || self.max_iterations < 1 {
            return Err(Error::InvalidConfig("workers, chunk size and iterations must be positive".into()));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameStats {
    pub iterations: u64,
    pub converged: bool,
}

/// One transmission of a `k`-bit information block to Bob.
pub trait FrameSimulator: Sync {
    type Workspace: Send;

    fn layout(&self) -> &FrameLayout;

    fn workspace(&self) -> Self::Workspace;

    /// Transmits `info` and writes the decoded information block to `decoded`.
    fn transmit(
        &self,
        info: &[u8],
        params: &ChannelParams,
        max_iterations: usize,
        rng: &mut ChaCha8Rng,
        ws: &mut Self::Workspace,
        decoded: &mut [u8],
    ) -> FrameStats;
}

struct Segment {
    code: LdpcCode,
    decoder: SpaDecoder,
    info_offset: usize,
}

/// Encoder, BPSK/AWGN channel and sum-product decoder for one or two codes.
pub struct CodedLink {
    layout: FrameLayout,
    segments: Vec<Segment>,
}

pub struct LinkWorkspace {
    codeword: Vec<u8>,
    llrs: Vec<f64>,
    decoders: Vec<codec::Workspace>,
}

impl CodedLink {
    pub fn uep(code: LdpcCode) -> Result<Self> {
        let layout = FrameLayout::uep(&code)?;
        Ok(CodedLink {
            layout,
            segments: vec![Segment {
                decoder: SpaDecoder::new(&code),
                code,
                info_offset: 0,
            }],
        })
    }

    /// Public codeword first, secret codeword second.
    pub fn two_codes(public: LdpcCode, secret: LdpcCode) -> Result<Self> {
        let layout = FrameLayout::two_codes(&public, &secret)?;
        let offset = public.k();
        Ok(CodedLink {
            layout,
            segments: vec![
                Segment {
                    decoder: SpaDecoder::new(&public),
                    code: public,
                    info_offset: 0,
                },
                Segment {
                    decoder: SpaDecoder::new(&secret),
                    code: secret,
                    info_offset: offset,
                },
            ],
        })
    }

    pub fn codes(&self) -> impl Iterator<Item = &LdpcCode> {
        self.segments.iter().map(|s| &s.code)
    }
}

impl FrameSimulator for CodedLink {
    type Workspace = LinkWorkspace;

    fn layout(&self) -> &FrameLayout {
        &self.layout
    }

    fn workspace(&self) -> LinkWorkspace {
        let n = self.segments.iter().map(|s| s.code.n()).max().unwrap_or(0);
        LinkWorkspace {
            codeword: vec![0; n],
            llrs: vec![0.0; n],
            decoders: self.segments.iter().map(|s| s.decoder.workspace()).collect(),
        }
    }

    fn transmit(
        &self,
        info: &[u8],
        params: &ChannelParams,
        max_iterations: usize,
        rng: &mut ChaCha8Rng,
        ws: &mut LinkWorkspace,
        decoded: &mut [u8],
    ) -> FrameStats {
        let mut stats = FrameStats {
            iterations: 0,
            converged: true,
        };
        for (segment, dws) in self.segments.iter().zip(ws.decoders.iter_mut()) {
            let (n, k) = (segment.code.n(), segment.code.k());
            let range = segment.info_offset..segment.info_offset + k;
            let codeword = &mut ws.codeword[..n];
            encode_into(&segment.code, &info[range.clone()], codeword);
            let llrs = &mut ws.llrs[..n];
            codeword_llrs(codeword, params, rng, llrs);
            let status = segment.decoder.decode_into(llrs, max_iterations, dws);
            debug_assert!(!status.converged || segment.code.h().is_codeword(dws.decision()));
            decoded[range].copy_from_slice(&dws.decision()[..k]);
            stats.iterations += status.iterations_used as u64;
            stats.converged &= status.converged;
        }
        stats
    }
}

/// Bypasses coding: every information bit flips independently with
/// probability `p`. Used to check the error-event bookkeeping.
pub struct BitFlipLink {
    pub layout: FrameLayout,
    pub p: f64,
}

impl FrameSimulator for BitFlipLink {
    type Workspace = ();

    fn layout(&self) -> &FrameLayout {
        &self.layout
    }

    fn workspace(&self) {}

    fn transmit(
        &self,
        info: &[u8],
        _params: &ChannelParams,
        _max_iterations: usize,
        rng: &mut ChaCha8Rng,
        _ws: &mut (),
        decoded: &mut [u8],
    ) -> FrameStats {
        for (d, &b) in decoded.iter_mut().zip(info) {
            *d = b ^ rng.gen_bool(self.p) as u8;
        }
        FrameStats::default()
    }
}

/// Error events of one frame: any information, public or secret bit wrong.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameEvents {
    pub frame: bool,
    pub public: bool,
    pub secret: bool,
}

pub fn frame_events(layout: &FrameLayout, info: &[u8], decoded: &[u8]) -> FrameEvents {
    let wrong = |p: &usize| info[*p] != decoded[*p];
    FrameEvents {
        frame: info != decoded,
        public: layout.public_positions.iter().any(wrong),
        secret: layout.secret_positions.iter().any(wrong),
    }
}

fn random_bits(rng: &mut ChaCha8Rng, out: &mut [u8]) {
    for chunk in out.chunks_mut(64) {
        let word: u64 = rng.gen();
        for (i, b) in chunk.iter_mut().enumerate() {
            *b = ((word >> i) & 1) as u8;
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    frames: u64,
    errors: [u64; 3],
    iterations: u64,
}

impl Tally {
    fn add(mut self, other: Tally) -> Tally {
        self.frames += other.frames;
        self.iterations += other.iterations;
        for (a, b) in self.errors.iter_mut().zip(other.errors) {
            *a += b;
        }
        self
    }
}

/// Counts for one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub gamma_db: f64,
    pub frames: u64,
    /// Error events for `P`, `P_p`, `P_s`.
    pub errors: [u64; 3],
    pub total_iterations: u64,
    /// Some target stopped short of `min_errors`.
    pub low_confidence: bool,
    #[serde(skip)]
    pub elapsed_secs: f64,
}

impl PointResult {
    pub fn p_hat(&self, target: Target) -> f64 {
        self.errors[target_index(target)] as f64 / self.frames as f64
    }

    pub fn mean_iterations(&self) -> f64 {
        self.total_iterations as f64 / self.frames as f64
    }
}

fn target_index(t: Target) -> usize {
    match t {
        Target::FrameP => 0,
        Target::PublicPp => 1,
        Target::SecretPs => 2,
    }
}

fn check_point_index(config: &SimConfig, point: usize) -> Result<SnrPoint> {
    config
        .snr_grid
        .get(point)
        .copied()
        .ok_or_else(|| Error::InvalidConfig(format!("grid has no point {point}")))
}

fn run_point_in<S: FrameSimulator>(sim: &S, config: &SimConfig, point: usize) -> Result<PointResult> {
    let snr = check_point_index(config, point)?;
    let layout = sim.layout();
    let params = ChannelParams::new(snr, layout.rate())?;
    let started = Instant::now();
    let mut tally = Tally::default();
    while tally.frames < config.stop.max_frames && tally.errors.iter().any(|&e| e < config.stop.min_errors) {
        let start = tally.frames;
        let end = (start + config.chunk_frames).min(config.stop.max_frames);
        let chunk = (start..end)
            .into_par_iter()
            .map_init(
                || (sim.workspace(), vec![0u8; layout.k], vec![0u8; layout.k]),
                |(ws, info, decoded), frame| {
                    let mut rng = frame_rng(config.master_seed, point as u64, frame);
                    random_bits(&mut rng, info);
                    let stats = sim.transmit(info, &params, config.max_iterations, &mut rng, ws, decoded);
                    let ev = frame_events(layout, info, decoded);
                    debug_assert!(ev.frame || !(ev.public || ev.secret));
                    Tally {
                        frames: 1,
                        errors: [ev.frame as u64, ev.public as u64, ev.secret as u64],
                        iterations: stats.iterations,
                    }
                },
            )
            .reduce(Tally::default, Tally::add);
        tally = tally.add(chunk);
    }
    Ok(PointResult {
        gamma_db: snr.db(),
        frames: tally.frames,
        errors: tally.errors,
        total_iterations: tally.iterations,
        low_confidence: tally.errors.iter().any(|&e| e < config.stop.min_errors),
        elapsed_secs: started.elapsed().as_secs_f64(),
    })
}

/// Simulates grid point `point` of `config`.
pub fn run_point<S: FrameSimulator>(sim: &S, config: &SimConfig, point: usize) -> Result<PointResult> {
    config.validate()?;
    config.pool()?.install(|| run_point_in(sim, config, point))
}

/// Curves for `P`, `P_p` and `P_s` plus per-point statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub frame: ErrorRateCurve,
    pub public: ErrorRateCurve,
    pub secret: ErrorRateCurve,
    pub points: Vec<PointResult>,
}

impl SimResult {
    pub fn from_points(points: Vec<PointResult>) -> Result<Self> {
        let curve = |target: Target| {
            ErrorRateCurve::new(
                target,
                points
                    .iter()
                    .map(|p| CurvePoint {
                        gamma_db: p.gamma_db,
                        frames: p.frames,
                        errors: p.errors[target_index(target)],
                    })
                    .collect(),
            )
        };
        Ok(SimResult {
            frame: curve(Target::FrameP)?,
            public: curve(Target::PublicPp)?,
            secret: curve(Target::SecretPs)?,
            points,
        })
    }

    pub fn curve(&self, target: Target) -> &ErrorRateCurve {
        match target {
            Target::FrameP => &self.frame,
            Target::PublicPp => &self.public,
            Target::SecretPs => &self.secret,
        }
    }

    /// CSV with columns `gamma_db,target,errors,frames,p_hat`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gamma_db,target,errors,frames,p_hat\n");
        for (i, p) in self.points.iter().enumerate() {
            for target in Target::ALL {
                let c = &self.curve(target).points[i];
                out.push_str(&format!(
                    "{},{},{},{},{:e}\n",
                    p.gamma_db,
                    target.name(),
                    c.errors,
                    c.frames,
                    c.p_hat()
                ));
            }
        }
        out
    }
}

/// Runs every grid point not already in `done`, calling `on_point` with
/// all results so far after each new point (for checkpointing).
///
/// Returns `None` if `on_point` asked to stop before the grid was complete.
pub fn run_sweep_resumable<S: FrameSimulator>(
    sim: &S,
    config: &SimConfig,
    mut done: Vec<PointResult>,
    mut on_point: impl FnMut(&[PointResult]) -> Result<ControlFlow<()>>,
) -> Result<Option<SimResult>> {
    config.validate()?;
    let pool = config.pool()?;
    done.retain(|p| config.snr_grid.iter().any(|s| s.db() == p.gamma_db));
    for (i, snr) in config.snr_grid.iter().enumerate() {
        if done.iter().any(|p| p.gamma_db == snr.db()) {
            continue;
        }
        let result = pool.install(|| run_point_in(sim, config, i))?;
        done.push(result);
        done.sort_by(|a, b| a.gamma_db.total_cmp(&b.gamma_db));
        if on_point(&done)?.is_break() && done.len() < config.snr_grid.len() {
            return Ok(None);
        }
    }
    SimResult::from_points(done).map(Some)
}

pub fn run_sweep<S: FrameSimulator>(sim: &S, config: &SimConfig) -> Result<SimResult> {
    let result = run_sweep_resumable(sim, config, Vec::new(), |_| Ok(ControlFlow::Continue(())))?;
    Ok(result.expect("never interrupted"))
}

/// Outcome of simulating groups of `L` frames whose secret blocks are
/// concatenated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupedResult {
    pub l: u32,
    pub blocks: u64,
    /// Blocks in which some secret message was not recovered.
    pub block_errors: u64,
    pub frames: u64,
    /// Frames whose own secret bits were wrong.
    pub secret_frame_errors: u64,
}

impl GroupedResult {
    pub fn block_rate(&self) -> f64 {
        self.block_errors as f64 / self.blocks as f64
    }

    pub fn secret_rate(&self) -> f64 {
        self.secret_frame_errors as f64 / self.frames as f64
    }
}

const GROUP_STREAM_SALT: u64 = 0x5eed_0f_a0a7;

/// Simulates `blocks` groups of `l` consecutive frames at grid point `point`.
///
/// Without a scrambler a block fails iff some frame has a secret error.
/// With one, the `l · k_s` secret bits of a block are drawn as one message,
/// scrambled, carried as `l` fragments in the secret positions, and the
/// block fails iff the descrambled estimate differs from the message.
pub fn run_grouped_point<S: FrameSimulator>(
    sim: &S,
    config: &SimConfig,
    point: usize,
    l: u32,
    blocks: u64,
    scrambler: Option<&Scrambler>,
) -> Result<GroupedResult> {
    config.validate()?;
    if l < 1 {
        return Err(Error::InvalidConcatenation);
    }
    let layout = sim.layout();
    let ks = layout.k_s();
    if let Some(s) = scrambler {
        if s.size() != l as usize * ks {
            return Err(Error::LengthMismatch {
                expected: l as usize * ks,
                found: s.size(),
            });
        }
    }
    let snr = check_point_index(config, point)?;
    let params = ChannelParams::new(snr, layout.rate())?;
    let run_block = |ws: &mut S::Workspace, block: u64| -> Result<(bool, u64)> {
        let mut message = vec![0u8; l as usize * ks];
        let mut salted = frame_rng(config.master_seed ^ GROUP_STREAM_SALT, point as u64, block);
        random_bits(&mut salted, &mut message);
        let fragments = match scrambler {
            Some(s) => s.scramble(&message)?,
            None => message.clone(),
        };
        let mut received = vec![0u8; fragments.len()];
        let mut info = vec![0u8; layout.k];
        let mut decoded = vec![0u8; layout.k];
        let mut secret_errors = 0;
        for j in 0..l as usize {
            let frame = block * l as u64 + j as u64;
            let mut rng = frame_rng(config.master_seed, point as u64, frame);
            random_bits(&mut rng, &mut info);
            for (i, &pos) in layout.secret_positions.iter().enumerate() {
                info[pos] = fragments[j * ks + i];
            }
            sim.transmit(&info, &params, config.max_iterations, &mut rng, ws, &mut decoded);
            let ev = frame_events(layout, &info, &decoded);
            secret_errors += ev.secret as u64;
            for (i, &pos) in layout.secret_positions.iter().enumerate() {
                received[j * ks + i] = decoded[pos];
            }
        }
        let recovered = match scrambler {
            Some(s) => s.descramble(&received)?,
            None => received,
        };
        Ok((recovered != message, secret_errors))
    };
    let (block_errors, secret_frame_errors) = config.pool()?.install(|| {
        (0..blocks)
            .into_par_iter()
            .map_init(|| sim.workspace(), |ws, b| run_block(ws, b).map(|(e, s)| (e as u64, s)))
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
    })?;
    Ok(GroupedResult {
        l,
        blocks,
        block_errors,
        frames: blocks * l as u64,
        secret_frame_errors,
    })
}

/// Completed points of a sweep, keyed by the hash of its configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub config_hash: String,
    pub points: Vec<PointResult>,
}

impl Checkpoint {
    /// Loads the checkpoint at `path` if it exists and matches `config_hash`.
    pub fn load(path: &Path, config_hash: &str) -> std::io::Result<Vec<PointResult>> {
        match std::fs::read_to_string(path) {
            Ok(text) => {
                let cp: Checkpoint = serde_json::from_str(&text)
                    .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
                Ok(if cp.config_hash == config_hash { cp.points } else { Vec::new() })
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
            Err(e) => Err(e),
        }
    }

    /// Writes atomically through a temporary file.
    pub fn save(path: &Path, config_hash: &str, points: &[PointResult]) -> std::io::Result<()> {
        let cp = Checkpoint {
            config_hash: config_hash.to_string(),
            points: points.to_vec(),
        };
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string_pretty(&cp).map_err(std::io::Error::other)?)?;
        std::fs::rename(tmp, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::ProtectionClass;
    use crate::construct::{build_zigzag_random, BuildOptions, ClassAssignment};
    use crate::degree_dist::{DegreePolynomial, EnsembleSpec, NodeKind, Perspective};

    fn small_code() -> LdpcCode {
        let nu = DegreePolynomial::new(Perspective::Node, NodeKind::Variable, [(2, 0.5), (3, 0.4), (8, 0.1)]).unwrap();
        let spec = EnsembleSpec::with_concentrated_checks(96, 0.5, nu).unwrap();
        build_zigzag_random(&spec, ClassAssignment::Uep { pc1_fraction: 0.2 }, 5, &BuildOptions::default()).unwrap()
    }

    fn grid(dbs: &[f64]) -> Vec<SnrPoint> {
        dbs.iter().map(|&d| SnrPoint::from_db(d).unwrap()).collect()
    }

    #[test]
    fn saturated_and_noiseless_regimes() {
        let link = CodedLink::uep(small_code()).unwrap();
        let config = SimConfig::new(
            grid(&[-10.0, 20.0]),
            StopRule {
                min_errors: 20,
                max_frames: 300,
            },
            1,
        );
        let low = run_point(&link, &config, 0).unwrap();
        assert!(low.p_hat(Target::FrameP) > 0.95);
        assert!(low.p_hat(Target::SecretPs) > 0.9);
        let high = run_point(&link, &config, 1).unwrap();
        assert_eq!(high.errors, [0, 0, 0]);
        assert_eq!(high.frames, 300);
        assert!(high.low_confidence);
    }

    #[test]
    fn event_counts_are_nested() {
        let link = CodedLink::uep(small_code()).unwrap();
        let config = SimConfig::new(grid(&[1.0, 2.0, 3.0]), StopRule { min_errors: 10, max_frames: 500 }, 3);
        let result = run_sweep(&link, &config).unwrap();
        for p in &result.points {
            assert!(p.errors[1] <= p.errors[0] && p.errors[2] <= p.errors[0]);
        }
        assert_eq!(result.to_csv().lines().count(), 1 + 9);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let link = CodedLink::uep(small_code()).unwrap();
        let mut config = SimConfig::new(grid(&[1.0, 2.5]), StopRule { min_errors: 15, max_frames: 700 }, 9);
        let one = run_sweep(&link, &config).unwrap();
        config.workers = 4;
        let four = run_sweep(&link, &config).unwrap();
        assert_eq!(one.to_csv(), four.to_csv());
        assert_eq!(one.points[0].total_iterations, four.points[0].total_iterations);
    }

    #[test]
    fn single_point_sweep_matches_run_point() {
        let link = CodedLink::uep(small_code()).unwrap();
        let config = SimConfig::new(grid(&[2.0]), StopRule { min_errors: 5, max_frames: 200 }, 2);
        let sweep = run_sweep(&link, &config).unwrap();
        let point = run_point(&link, &config, 0).unwrap();
        assert_eq!(sweep.points[0].errors, point.errors);
        assert_eq!(sweep.points[0].frames, point.frames);
    }

    #[test]
    fn resume_skips_completed_points() {
        let link = CodedLink::uep(small_code()).unwrap();
        let config = SimConfig::new(grid(&[1.0, 2.0, 3.0]), StopRule { min_errors: 5, max_frames: 200 }, 4);
        let full = run_sweep(&link, &config).unwrap();
        let mut calls = 0;
        let resumed = run_sweep_resumable(&link, &config, full.points[..2].to_vec(), |_| {
            calls += 1;
            Ok(ControlFlow::Continue(()))
        })
        .unwrap()
        .unwrap();
        assert_eq!(calls, 1);
        assert_eq!(resumed.to_csv(), full.to_csv());
        let stopped = run_sweep_resumable(&link, &config, Vec::new(), |_| Ok(ControlFlow::Break(()))).unwrap();
        assert!(stopped.is_none());
    }

    #[test]
    fn two_code_link_decodes_both_halves() {
        let nu = DegreePolynomial::regular(Perspective::Node, NodeKind::Variable, 3).unwrap();
        let public = build_zigzag_random(
            &EnsembleSpec::with_concentrated_checks(64, 0.25, nu.clone()).unwrap(),
            ClassAssignment::Uniform { class: ProtectionClass::Pc1 },
            1,
            &BuildOptions::default(),
        )
        .unwrap();
        let secret = build_zigzag_random(
            &EnsembleSpec::with_concentrated_checks(64, 0.75, nu).unwrap(),
            ClassAssignment::Uniform { class: ProtectionClass::Pc2 },
            2,
            &BuildOptions::default(),
        )
        .unwrap();
        let link = CodedLink::two_codes(public, secret).unwrap();
        assert_eq!(link.layout().k, 64);
        let config = SimConfig::new(grid(&[30.0]), StopRule { min_errors: 1, max_frames: 50 }, 1);
        assert_eq!(run_point(&link, &config, 0).unwrap().errors, [0, 0, 0]);
    }

    #[test]
    fn grouped_without_scrambler_counts_any_failure() {
        let link = CodedLink::uep(small_code()).unwrap();
        let config = SimConfig::new(grid(&[1.5]), StopRule::default(), 6);
        let g = run_grouped_point(&link, &config, 0, 3, 100, None).unwrap();
        assert_eq!(g.frames, 300);
        assert!(g.block_errors <= g.secret_frame_errors);
        assert!(g.block_errors * 3 >= g.secret_frame_errors);
    }

    #[test]
    fn grouped_rejects_mismatched_scrambler() {
        let link = CodedLink::uep(small_code()).unwrap();
        let config = SimConfig::new(grid(&[1.5]), StopRule::default(), 6);
        let s = Scrambler::build(10, 0);
        assert!(run_grouped_point(&link, &config, 0, 2, 10, Some(&s)).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = SimConfig::new(grid(&[2.0, 1.0]), StopRule::default(), 0);
        assert!(c.validate().is_err());
        c.snr_grid = Vec::new();
        assert!(c.validate().is_err());
        c.snr_grid = grid(&[1.0]);
        c.stop.min_errors = 0;
        assert!(c.validate().is_err());
    }
}
