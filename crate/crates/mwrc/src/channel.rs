//! Channel instances, scheme tags and unit conversions.
//!
//! Powers are linear watts everywhere in the library; decibels only appear at
//! the command-line boundary.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Gaussian point-to-point capacity `log2(1 + x)` in bit/s/Hz.
///
/// Uses `ln_1p` so that tiny SNRs keep full relative precision.
#[inline]
pub fn capacity(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

#[inline]
pub fn snr_db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

#[inline]
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// One symmetric instance: every user sends with `p_s`, the relay with `p_r`,
/// users see noise `n_s` and the relay sees noise `n_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricChannel {
    pub p_s: f64,
    pub p_r: f64,
    pub n_s: f64,
    pub n_r: f64,
}

impl SymmetricChannel {
    pub fn new(p_s: f64, p_r: f64, n_s: f64, n_r: f64) -> Result<Self> {
        for (name, v) in [("p_s", p_s), ("p_r", p_r), ("n_s", n_s), ("n_r", n_r)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidChannel(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        if n_s <= 0.0 || n_r <= 0.0 {
            return Err(Error::InvalidChannel(format!("noise powers must be positive (n_s = {n_s}, n_r = {n_r})")));
        }
        Ok(Self { p_s, p_r, n_s, n_r })
    }

    /// Completely symmetric channel: `p_s = p_r = p` and `n_s = n_r = n`.
    pub fn completely_symmetric(p: f64, n: f64) -> Result<Self> {
        Self::new(p, p, n, n)
    }

    /// Common SNR `p_s / n_r`, defined only when it equals `p_r / n_s`.
    pub fn snr(&self) -> Option<f64> {
        let up = self.p_s / self.n_r;
        let down = self.p_r / self.n_s;
        let scale = up.abs().max(down.abs()).max(f64::MIN_POSITIVE);
        ((up - down).abs() <= 1e-12 * scale).then_some(up)
    }

    pub fn with_powers(&self, p_s: f64, p_r: f64) -> Self {
        Self { p_s, p_r, ..*self }
    }
}

/// The relaying schemes and the cut-set outer bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    OuterBound,
    DF,
    NNC,
    AfSnd,
    AfIan,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [Self::OuterBound, Self::DF, Self::NNC, Self::AfSnd, Self::AfIan];

    pub const ACHIEVABLE: [SchemeId; 4] = [Self::DF, Self::NNC, Self::AfSnd, Self::AfIan];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::OuterBound => "outer-bound",
            Self::DF => "df",
            Self::NNC => "nnc",
            Self::AfSnd => "af-snd",
            Self::AfIan => "af-ian",
        }
    }

    /// Schemes whose sum rate is a minimum of an uplink and a downlink term.
    pub fn is_min_form(&self) -> bool {
        matches!(self, Self::OuterBound | Self::DF)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "outerbound" | "ob" | "bound" => Ok(Self::OuterBound),
            "df" => Ok(Self::DF),
            "nnc" => Ok(Self::NNC),
            "afsnd" | "snd" => Ok(Self::AfSnd),
            "afian" | "ian" => Ok(Self::AfIan),
            _ => Err(Error::Config(format!("unknown scheme '{s}'"))),
        }
    }
}

/// Per-node transmit power caps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLimits {
    pub p_s_max: f64,
    pub p_r_max: f64,
}

impl PowerLimits {
    pub fn new(p_s_max: f64, p_r_max: f64) -> Result<Self> {
        for (name, v) in [("p_s_max", p_s_max), ("p_r_max", p_r_max)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be finite and > 0")));
            }
        }
        Ok(Self { p_s_max, p_r_max })
    }

    pub fn contains(&self, p_s: f64, p_r: f64) -> bool {
        (0.0..=self.p_s_max).contains(&p_s) && (0.0..=self.p_r_max).contains(&p_r)
    }
}
