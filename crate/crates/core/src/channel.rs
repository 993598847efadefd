//! BPSK over AWGN at a given SNR per information bit.
//!
//! Noise samples come from [`rand_distr::StandardNormal`] (ziggurat) drawn
//! from a ChaCha8 stream dedicated to one frame, see [`frame_rng`]. The
//! stream depends only on `(master seed, point, frame)`, so the set of
//! samples does not depend on how frames are spread over workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `E_b/N_0` per information bit, in dB.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SnrPoint(f64);

impl SnrPoint {
    pub fn from_db(gamma_db: f64) -> Result<Self> {
        if gamma_db.is_finite() {
            Ok(SnrPoint(gamma_db))
        } else {
            Err(Error::InvalidSnr(gamma_db))
        }
    }

    pub fn db(self) -> f64 {
        self.0
    }

    pub fn linear(self) -> f64 {
        10f64.powf(self.0 / 10.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    snr: SnrPoint,
    rate: f64,
}

impl ChannelParams {
    /// `rate` is the overall information rate `k / n` of the transmitted frame.
    pub fn new(snr: SnrPoint, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidRate(rate));
        }
        let params = ChannelParams { snr, rate };
        let variance = params.noise_variance();
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::InvalidNoiseVariance(variance));
        }
        Ok(params)
    }

    pub fn snr(&self) -> SnrPoint {
        self.snr
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// `σ² = 1 / (2 R γ)`.
    pub fn noise_variance(&self) -> f64 {
        1.0 / (2.0 * self.rate * self.snr.linear())
    }
}

/// 0 → +1, 1 → −1.
pub fn modulate_bpsk(bits: &[u8]) -> Vec<f64> {
    bits.iter().map(|&b| 1.0 - 2.0 * (b & 1) as f64).collect()
}

/// Hard decision: non-negative → 0.
pub fn demodulate_hard(received: &[f64]) -> Vec<u8> {
    received.iter().map(|&y| (y < 0.0) as u8).collect()
}

pub fn transmit_awgn<R: Rng + ?Sized>(symbols: &[f64], params: &ChannelParams, rng: &mut R) -> Vec<f64> {
    let sigma = params.noise_variance().sqrt();
    symbols
        .iter()
        .map(|&x| x + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// `LLR_i = 2 y_i / σ²`; positive favours bit 0.
pub fn channel_llr(received: &[f64], params: &ChannelParams) -> Result<Vec<f64>> {
    channel_llr_with_variance(received, params.noise_variance())
}

pub fn channel_llr_with_variance(received: &[f64], variance: f64) -> Result<Vec<f64>> {
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::InvalidNoiseVariance(variance));
    }
    let scale = 2.0 / variance;
    Ok(received.iter().map(|&y| scale * y).collect())
}

/// Modulates, adds noise and computes LLRs in one pass, writing into `llrs`.
pub(crate) fn codeword_llrs<R: Rng + ?Sized>(codeword: &[u8], params: &ChannelParams, rng: &mut R, llrs: &mut [f64]) {
    let variance = params.noise_variance();
    let sigma = variance.sqrt();
    let scale = 2.0 / variance;
    for (l, &b) in llrs.iter_mut().zip(codeword) {
        let x = 1.0 - 2.0 * (b & 1) as f64;
        *l = scale * (x + sigma * rng.sample::<f64, _>(StandardNormal));
    }
}

fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random stream for frame `frame` of simulation point `point`.
pub fn frame_rng(master_seed: u64, point: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(master_seed, point));
    rng.set_stream(frame);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bpsk_mapping() {
        assert_eq!(modulate_bpsk(&[0, 1, 0]), vec![1.0, -1.0, 1.0]);
        assert_eq!(modulate_bpsk(&[0; 4]), vec![1.0; 4]);
        let bits = vec![1, 1, 0, 1, 0];
        assert_eq!(demodulate_hard(&modulate_bpsk(&bits)), bits);
    }

    #[test]
    fn variance_formula() {
        let p = ChannelParams::new(SnrPoint::from_db(2.0).unwrap(), 0.5).unwrap();
        assert!((p.noise_variance() - 1.0 / 10f64.powf(0.2)).abs() < 1e-12);
        assert!(ChannelParams::new(SnrPoint::from_db(0.0).unwrap(), 0.0).is_err());
        assert!(SnrPoint::from_db(f64::NAN).is_err());
    }

    #[test]
    fn high_snr_is_noiseless() {
        let p = ChannelParams::new(SnrPoint::from_db(300.0).unwrap(), 0.5).unwrap();
        let x = modulate_bpsk(&[0, 1, 1, 0]);
        let y = transmit_awgn(&x, &p, &mut frame_rng(1, 0, 0));
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn llr_closed_forms() {
        let p = ChannelParams::new(SnrPoint::from_db(1.0).unwrap(), 0.5).unwrap();
        let s2 = p.noise_variance();
        let l = channel_llr(&[0.0, s2 / 2.0], &p).unwrap();
        assert_eq!(l[0], 0.0);
        assert!((l[1] - 1.0).abs() < 1e-12);
        // doubling the variance halves the LLR
        let l2 = channel_llr_with_variance(&[0.7], 2.0 * s2).unwrap();
        let l1 = channel_llr_with_variance(&[0.7], s2).unwrap();
        assert!((l1[0] - 2.0 * l2[0]).abs() < 1e-12);
        assert!(channel_llr_with_variance(&[1.0], 0.0).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let draw = |rng: &mut ChaCha8Rng| (0..8).map(|_| rng.gen::<u64>()).collect::<Vec<_>>();
        assert_eq!(draw(&mut frame_rng(5, 1, 2)), draw(&mut frame_rng(5, 1, 2)));
        assert_ne!(draw(&mut frame_rng(5, 1, 2)), draw(&mut frame_rng(5, 1, 3)));
        assert_ne!(draw(&mut frame_rng(5, 1, 2)), draw(&mut frame_rng(5, 2, 2)));
        assert_ne!(draw(&mut frame_rng(5, 1, 2)), draw(&mut frame_rng(6, 1, 2)));
    }

    #[test]
    fn fused_llrs_match_pipeline() {
        let p = ChannelParams::new(SnrPoint::from_db(2.0).unwrap(), 0.5).unwrap();
        let bits = [0u8, 1, 1, 0, 1];
        let y = transmit_awgn(&modulate_bpsk(&bits), &p, &mut frame_rng(3, 0, 0));
        let expected = channel_llr(&y, &p).unwrap();
        let mut fused = [0.0; 5];
        codeword_llrs(&bits, &p, &mut frame_rng(3, 0, 0), &mut fused);
        for (a, b) in expected.iter().zip(&fused) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
