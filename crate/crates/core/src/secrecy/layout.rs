use serde::{Deserialize, Serialize};

use crate::code::{LdpcCode, ProtectionClass};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    UepSingleCode,
    TwoCodes,
}

/// Where public and secret bits sit in the `k`-bit information block of a frame.
///
/// For one UEP code the information block is the code's information columns.
/// For two codes it is the public code's information bits followed by the
/// secret code's, and the frame is the public codeword followed by the
/// secret codeword.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameLayout {
    pub scheme: Scheme,
    pub n: usize,
    pub k: usize,
    pub public_positions: Vec<usize>,
    pub secret_positions: Vec<usize>,
    /// Redundancy bits of the public and secret codes (two-code scheme only).
    pub split_redundancy: Option<(usize, usize)>,
}

impl FrameLayout {
    /// Public bits on PC1 columns, secret bits on PC2 columns.
    pub fn uep(code: &LdpcCode) -> Result<Self> {
        if code.classes().is_none() {
            return Err(Error::InvalidLayout("code has no class map".into()));
        }
        let public_positions = code.columns_in(ProtectionClass::Pc1);
        let secret_positions = code.columns_in(ProtectionClass::Pc2);
        if public_positions.is_empty() || secret_positions.is_empty() {
            return Err(Error::InvalidLayout("UEP layout needs both PC1 and PC2 columns".into()));
        }
        let layout = FrameLayout {
            scheme: Scheme::UepSingleCode,
            n: code.n(),
            k: code.k(),
            public_positions,
            secret_positions,
            split_redundancy: None,
        };
        layout.validate()?;
        Ok(layout)
    }

    /// Two codewords of equal length; the public code carries all public bits.
    pub fn two_codes(public: &LdpcCode, secret: &LdpcCode) -> Result<Self> {
        if public.n() != secret.n() {
            return Err(Error::InvalidLayout(format!(
                "codeword lengths differ: {} vs {}",
                public.n(),
                secret.n()
            )));
        }
        let (kp, ks) = (public.k(), secret.k());
        let layout = FrameLayout {
            scheme: Scheme::TwoCodes,
            n: public.n() + secret.n(),
            k: kp + ks,
            public_positions: (0..kp).collect(),
            secret_positions: (kp..kp + ks).collect(),
            split_redundancy: Some((public.r(), secret.r())),
        };
        layout.validate()?;
        Ok(layout)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_p() + self.k_s() != self.k {
            return Err(Error::InvalidLayout(format!(
                "k_p + k_s = {} but k = {}",
                self.k_p() + self.k_s(),
                self.k
            )));
        }
        let mut seen = vec![false; self.k];
        for &p in self.public_positions.iter().chain(&self.secret_positions) {
            if p >= self.k || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidLayout(format!("position {p} out of range or repeated")));
            }
        }
        if let Some((rp, rs)) = self.split_redundancy {
            if self.k_p() + rp != self.n / 2 || self.k_s() + rs != self.n / 2 || self.n % 2 != 0 {
                return Err(Error::InvalidLayout("two-code frames split into halves".into()));
            }
        }
        Ok(())
    }

    pub fn k_p(&self) -> usize {
        self.public_positions.len()
    }

    pub fn k_s(&self) -> usize {
        self.secret_positions.len()
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn secret_rate(&self) -> f64 {
        self.k_s() as f64 / self.n as f64
    }

    pub fn public_rate(&self) -> f64 {
        self.k_p() as f64 / self.n as f64
    }

    /// `R_c^(s)`, two-code scheme only.
    pub fn secret_code_rate(&self) -> Option<f64> {
        self.split_redundancy
            .map(|(_, rs)| self.k_s() as f64 / (self.k_s() + rs) as f64)
    }

    /// `R_c^(p)`, two-code scheme only.
    pub fn public_code_rate(&self) -> Option<f64> {
        self.split_redundancy
            .map(|(rp, _)| self.k_p() as f64 / (self.k_p() + rp) as f64)
    }

    /// `ρ = (k_s + r_s) / n`, two-code scheme only.
    pub fn secret_share(&self) -> Option<f64> {
        self.split_redundancy
            .map(|(_, rs)| (self.k_s() + rs) as f64 / self.n as f64)
    }

    /// Checks `R_s + R_p = R` and, for two codes,
    /// `R = R_c^(s) ρ + R_c^(p) (1 - ρ)` in exact integer arithmetic.
    pub fn rate_identities_hold(&self) -> bool {
        let (n, k, ks, kp) = (self.n as u128, self.k as u128, self.k_s() as u128, self.k_p() as u128);
        // k_s/n + k_p/n = k/n
        if ks + kp != k {
            return false;
        }
        match self.split_redundancy {
            None => true,
            Some((rp, rs)) => {
                let (rp, rs) = (rp as u128, rs as u128);
                let (ns, np) = (ks + rs, kp + rp);
                // ks/ns * ns/n + kp/np * np/n == k/n, multiplied through by n ns np
                ks * ns * np + kp * np * ns == k * ns * np && ns + np == n
            }
        }
    }
}
