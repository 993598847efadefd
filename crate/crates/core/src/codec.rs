//! Systematic zigzag encoding and LLR sum-product decoding.

use serde::{Deserialize, Serialize};

use crate::code::LdpcCode;
use crate::error::{Error, Result};

/// Magnitude limit applied to channel and variable-to-check LLRs.
pub const LLR_CLIP: f64 = 25.0;

/// Iteration limit used throughout the lab.
pub const DEFAULT_MAX_ITERATIONS: usize = 100;

/// Encodes `info` (length `k`) into a codeword (length `n`).
pub fn encode(code: &LdpcCode, info: &[u8]) -> Result<Vec<u8>> {
    if info.len() != code.k() {
        return Err(Error::LengthMismatch {
            expected: code.k(),
            found: info.len(),
        });
    }
    let mut out = vec![0u8; code.n()];
    encode_into(code, info, &mut out);
    Ok(out)
}

/// Allocation-free encoder; `info.len() == k` and `out.len() == n`.
///
/// Row `i` determines redundancy bit `i` from the information bits and the
/// earlier redundancy bits.
pub fn encode_into(code: &LdpcCode, info: &[u8], out: &mut [u8]) {
    let k = code.k();
    debug_assert_eq!(info.len(), k);
    debug_assert_eq!(out.len(), code.n());
    out[..k].copy_from_slice(info);
    for i in 0..code.r() {
        let diagonal = k + i;
        let mut parity = 0u8;
        for &c in code.h().row(i) {
            let c = c as usize;
            if c != diagonal {
                // redundancy columns on this row are at or before the diagonal
                parity ^= out[c];
            }
        }
        out[diagonal] = parity;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodeResult {
    pub decision: Vec<u8>,
    /// A zero syndrome was reached.
    pub converged: bool,
    pub iterations_used: usize,
}

/// Outcome of [`SpaDecoder::decode_into`]; the decision stays in the workspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeStatus {
    pub converged: bool,
    pub iterations_used: usize,
}

/// Flooding sum-product decoder over a fixed Tanner graph.
///
/// Immutable and shareable between threads; per-call state lives in a
/// [`Workspace`].
#[derive(Debug, Clone)]
pub struct SpaDecoder {
    n: usize,
    /// Edge ranges per check, edges stored check-major.
    check_start: Vec<u32>,
    edge_var: Vec<u32>,
    /// Edge indices per variable.
    var_start: Vec<u32>,
    var_edges: Vec<u32>,
}

/// Scratch memory for one decoding thread.
///
/// Messages are kept as likelihood ratios `e^LLR`, which turns the tanh rule
/// into rational arithmetic.
#[derive(Debug, Clone)]
pub struct Workspace {
    check_to_var: Vec<f64>,
    tanh_in: Vec<f64>,
    suffix: Vec<f64>,
    channel: Vec<f64>,
    posterior: Vec<f64>,
    decision: Vec<u8>,
}

impl Workspace {
    pub fn decision(&self) -> &[u8] {
        &self.decision
    }

    /// Posterior LLRs after the last iteration.
    pub fn posterior_llrs(&self) -> Vec<f64> {
        self.posterior.iter().map(|p| p.ln()).collect()
    }
}

impl SpaDecoder {
    pub fn new(code: &LdpcCode) -> Self {
        let h = code.h();
        let n = code.n();
        let mut check_start = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.edge_count());
        check_start.push(0);
        for r in 0..h.rows() {
            edge_var.extend_from_slice(h.row(r));
            check_start.push(edge_var.len() as u32);
        }
        let mut var_start = vec![0u32; n + 1];
        for &v in &edge_var {
            var_start[v as usize + 1] += 1;
        }
        for v in 0..n {
            var_start[v + 1] += var_start[v];
        }
        let mut fill = var_start.clone();
        let mut var_edges = vec![0u32; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v as usize] as usize] = e as u32;
            fill[v as usize] += 1;
        }
        SpaDecoder {
            n,
            check_start,
            edge_var,
            var_start,
            var_edges,
        }
    }

    pub fn workspace(&self) -> Workspace {
        let max_check = self
            .check_start
            .windows(2)
            .map(|w| (w[1] - w[0]) as usize)
            .max()
            .unwrap_or(0);
        Workspace {
            check_to_var: vec![1.0; self.edge_var.len()],
            tanh_in: vec![0.0; self.edge_var.len()],
            suffix: vec![0.0; max_check + 1],
            channel: vec![1.0; self.n],
            posterior: vec![1.0; self.n],
            decision: vec![0; self.n],
        }
    }

    fn syndrome_ok(&self, decision: &[u8]) -> bool {
        self.check_start.windows(2).all(|w| {
            self.edge_var[w[0] as usize..w[1] as usize]
                .iter()
                .fold(0u8, |acc, &v| acc ^ decision[v as usize])
                == 0
        })
    }

    fn hard_decide(ws: &mut Workspace) {
        for (d, &p) in ws.decision.iter_mut().zip(&ws.posterior) {
            // ratio below 1 means a negative LLR; ties decide 0
            *d = (p < 1.0) as u8;
        }
    }

    /// Decodes `channel_llrs` (positive favours bit 0) with at most
    /// `max_iterations` flooding iterations, stopping at the first zero
    /// syndrome.
    pub fn decode_into(&self, channel_llrs: &[f64], max_iterations: usize, ws: &mut Workspace) -> DecodeStatus {
        self.run(channel_llrs, max_iterations, ws, |_| {})
    }

    fn run(
        &self,
        channel_llrs: &[f64],
        max_iterations: usize,
        ws: &mut Workspace,
        mut observe: impl FnMut(&Workspace),
    ) -> DecodeStatus {
        assert_eq!(channel_llrs.len(), self.n, "one LLR per code bit");
        for ((c, p), &l) in ws.channel.iter_mut().zip(ws.posterior.iter_mut()).zip(channel_llrs) {
            *c = l.clamp(-LLR_CLIP, LLR_CLIP).exp();
            *p = *c;
        }
        ws.check_to_var.fill(1.0);
        Self::hard_decide(ws);
        observe(ws);
        if self.syndrome_ok(&ws.decision) {
            return DecodeStatus {
                converged: true,
                iterations_used: 0,
            };
        }
        // tanh(LLR_CLIP / 2): clipping a message at ±LLR_CLIP clips its tanh here
        let tanh_limit = (LLR_CLIP / 2.0).tanh();
        for iteration in 1..=max_iterations {
            for (e, t) in ws.tanh_in.iter_mut().enumerate() {
                let post = ws.posterior[self.edge_var[e] as usize];
                let ratio = ws.check_to_var[e];
                // tanh((ln post - ln ratio) / 2)
                *t = ((post - ratio) / (post + ratio)).clamp(-tanh_limit, tanh_limit);
            }
            for w in self.check_start.windows(2) {
                let (start, end) = (w[0] as usize, w[1] as usize);
                let d = end - start;
                // exclusive products via suffix products, no division
                let ins = &ws.tanh_in[start..end];
                let suffix = &mut ws.suffix;
                suffix[d] = 1.0;
                for i in (0..d).rev() {
                    suffix[i] = suffix[i + 1] * ins[i];
                }
                let mut prefix = 1.0;
                for i in 0..d {
                    let y = (prefix * suffix[i + 1]).clamp(-tanh_limit, tanh_limit);
                    // exp(2 atanh y)
                    ws.check_to_var[start + i] = (1.0 + y) / (1.0 - y);
                    prefix *= ins[i];
                }
            }
            for v in 0..self.n {
                let mut product = ws.channel[v];
                for &e in &self.var_edges[self.var_start[v] as usize..self.var_start[v + 1] as usize] {
                    product *= ws.check_to_var[e as usize];
                }
                // keeps ratios finite for any column degree
                ws.posterior[v] = product.clamp(1e-300, 1e300);
            }
            Self::hard_decide(ws);
            observe(ws);
            if self.syndrome_ok(&ws.decision) {
                return DecodeStatus {
                    converged: true,
                    iterations_used: iteration,
                };
            }
        }
        DecodeStatus {
            converged: false,
            iterations_used: max_iterations,
        }
    }

    pub fn decode(&self, channel_llrs: &[f64], max_iterations: usize) -> DecodeResult {
        let mut ws = self.workspace();
        let status = self.decode_into(channel_llrs, max_iterations, &mut ws);
        DecodeResult {
            decision: ws.decision,
            converged: status.converged,
            iterations_used: status.iterations_used,
        }
    }

    /// Like [`Self::decode`], also returning the posterior LLRs after every
    /// iteration (index 0 is the clipped channel input). Only for codes with
    /// at most 256 bits.
    pub fn decode_traced(&self, channel_llrs: &[f64], max_iterations: usize) -> Result<(DecodeResult, Vec<Vec<f64>>)> {
        if self.n > 256 {
            return Err(Error::InvalidConfig(format!("trace requested for n = {}", self.n)));
        }
        let mut ws = self.workspace();
        let mut trace = Vec::new();
        let status = self.run(channel_llrs, max_iterations, &mut ws, |w| trace.push(w.posterior_llrs()));
        Ok((
            DecodeResult {
                decision: ws.decision,
                converged: status.converged,
                iterations_used: status.iterations_used,
            },
            trace,
        ))
    }
}

/// One-shot LLR sum-product decoding.
pub fn decode_llr_spa(code: &LdpcCode, channel_llrs: &[f64], max_iterations: usize) -> Result<DecodeResult> {
    if channel_llrs.len() != code.n() {
        return Err(Error::LengthMismatch {
            expected: code.n(),
            found: channel_llrs.len(),
        });
    }
    let result = SpaDecoder::new(code).decode(channel_llrs, max_iterations);
    debug_assert!(!result.converged || code.h().is_codeword(&result.decision));
    Ok(result)
}
