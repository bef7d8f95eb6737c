//! Closed-form sum rates of the relaying schemes and their analytic comparisons.
//!
//! Every function takes a [`SymmetricChannel`] and returns bit/s/Hz. The two
//! min-form expressions (outer bound and DF) also report which term is active.

use crate::channel::{capacity, snr_db_to_linear, SchemeId, SymmetricChannel};
use crate::error::{Error, Result};
use crate::scalar;

/// Which term of a min-form sum rate attains the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// The multiple-access phase towards the relay limits the rate.
    UplinkLimited,
    /// The broadcast phase from the relay limits the rate.
    DownlinkLimited,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::UplinkLimited => "uplink",
            Self::DownlinkLimited => "downlink",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRate {
    pub value: f64,
    pub branch: Option<Branch>,
}

impl SumRate {
    fn plain(value: f64) -> Self {
        Self { value, branch: None }
    }

    /// Ties go to the downlink branch.
    fn min_form(downlink: f64, uplink: f64) -> Self {
        if downlink <= uplink {
            Self { value: downlink, branch: Some(Branch::DownlinkLimited) }
        } else {
            Self { value: uplink, branch: Some(Branch::UplinkLimited) }
        }
    }
}

/// Cut-set bound on the sum capacity.
pub fn outer_bound(ch: &SymmetricChannel) -> SumRate {
    SumRate::min_form(1.5 * capacity(ch.p_r / ch.n_s), 3.0 * capacity(ch.p_s / ch.n_r))
}

/// Decode-and-forward at the relay.
pub fn df_rate(ch: &SymmetricChannel) -> SumRate {
    SumRate::min_form(1.5 * capacity(ch.p_r / ch.n_s), capacity(3.0 * ch.p_s / ch.n_r))
}

/// Noisy network coding with simultaneous non-unique decoding.
pub fn nnc_rate(ch: &SymmetricChannel) -> SumRate {
    if ch.p_s == 0.0 || ch.p_r == 0.0 {
        return SumRate::plain(0.0);
    }
    let snr = 2.0 * ch.p_s * ch.p_r / (ch.n_r * ch.p_r + 2.0 * ch.p_s * ch.n_s + ch.n_s * ch.n_r);
    SumRate::plain(1.5 * capacity(snr))
}

/// Compression noise that maximizes the NNC sum rate; absent when the relay is silent.
pub fn nnc_q0_opt(ch: &SymmetricChannel) -> Option<f64> {
    (ch.p_r > 0.0).then(|| ch.n_s * (ch.n_r + 2.0 * ch.p_s) / ch.p_r)
}

/// Amplify-and-forward with simultaneous non-unique decoding.
pub fn af_snd_rate(ch: &SymmetricChannel) -> SumRate {
    if ch.p_s == 0.0 || ch.p_r == 0.0 {
        return SumRate::plain(0.0);
    }
    let snr = 2.0 * ch.p_s * ch.p_r / (ch.n_r * ch.p_r + 3.0 * ch.p_s * ch.n_s + ch.n_s * ch.n_r);
    SumRate::plain(1.5 * capacity(snr))
}

/// Amplify-and-forward, interference treated as noise, with time sharing over
/// the three decoding slots.
pub fn af_ian_rate(ch: &SymmetricChannel) -> SumRate {
    if ch.p_s == 0.0 || ch.p_r == 0.0 {
        return SumRate::plain(0.0);
    }
    let snr = 3.0 * ch.p_s * ch.p_r / (ch.n_r * ch.p_r + 3.0 * ch.p_s * ch.n_s + ch.n_s * ch.n_r);
    SumRate::plain(capacity(snr))
}

/// AF with interference as noise when every user always transmits at full power.
pub fn af_ian_max_power_rate(ch: &SymmetricChannel) -> SumRate {
    if ch.p_s == 0.0 || ch.p_r == 0.0 {
        return SumRate::plain(0.0);
    }
    let (ps, pr, ns, nr) = (ch.p_s, ch.p_r, ch.n_s, ch.n_r);
    let sinr = pr * ps / (pr * ps + pr * nr + 3.0 * ps * ns + nr * ns);
    SumRate::plain(3.0 * capacity(sinr))
}

/// `af_ian_rate - af_ian_max_power_rate`, evaluated without cancellation.
///
/// With `g1 = p_s p_r / d` and `g2 = p_s p_r / (d + p_s p_r)` the two rates are
/// `C(3 g1)` and `3 C(g2)`, and `g1 - g2 = g1 g2` gives
/// `(1 + 3 g1) / (1 + g2)^3 = 1 + g2^2 (3 g1 - g2) / (1 + g2)^3`. At low SNR the
/// gain is third order in the SNR, below the resolution of the rates themselves.
pub fn af_ian_time_sharing_gain(ch: &SymmetricChannel) -> f64 {
    if ch.p_s == 0.0 || ch.p_r == 0.0 {
        return 0.0;
    }
    let (ps, pr, ns, nr) = (ch.p_s, ch.p_r, ch.n_s, ch.n_r);
    let d = nr * pr + 3.0 * ps * ns + ns * nr;
    let g1 = ps * pr / d;
    let g2 = ps * pr / (d + ps * pr);
    (g2 * g2 * (3.0 * g1 - g2) / (1.0 + g2).powi(3)).ln_1p() / std::f64::consts::LN_2
}

/// AF with interference as noise when two users transmit simultaneously
/// without time sharing.
pub fn af_ian_no_timesharing_rate(ch: &SymmetricChannel) -> SumRate {
    if ch.p_s == 0.0 || ch.p_r == 0.0 {
        return SumRate::plain(0.0);
    }
    let snr = 2.0 * ch.p_s * ch.p_r / (ch.n_r * ch.p_r + 2.0 * ch.p_s * ch.n_s + ch.n_s * ch.n_r);
    SumRate::plain(capacity(snr))
}

pub fn sum_rate(scheme: SchemeId, ch: &SymmetricChannel) -> SumRate {
    match scheme {
        SchemeId::OuterBound => outer_bound(ch),
        SchemeId::DF => df_rate(ch),
        SchemeId::NNC => nnc_rate(ch),
        SchemeId::AfSnd => af_snd_rate(ch),
        SchemeId::AfIan => af_ian_rate(ch),
    }
}

/// True when DF reaches the outer bound: `p_r/n_s <= (1 + 3 p_s/n_r)^(2/3) - 1`,
/// up to a relative rounding slack of `1e-12`.
pub fn df_meets_outer_bound(ch: &SymmetricChannel) -> bool {
    let threshold = (1.0 + 3.0 * ch.p_s / ch.n_r).powf(2.0 / 3.0) - 1.0;
    ch.p_r / ch.n_s <= threshold * (1.0 + 1e-12)
}

/// Largest common SNR for which DF meets the outer bound, `3 + 2 sqrt(3)`.
pub fn df_optimality_snr() -> f64 {
    3.0 + 2.0 * 3f64.sqrt()
}

/// Largest SNR in dB where DF and the outer bound coincide on completely
/// symmetric channels, located by bisection on `[lo_db, hi_db]`.
pub fn df_outer_bound_threshold_db(lo_db: f64, hi_db: f64, tol_db: f64) -> Result<f64> {
    let equal = |x_db: f64| {
        let ch = unit_noise(snr_db_to_linear(x_db));
        let (ob, df) = (outer_bound(&ch).value, df_rate(&ch).value);
        ob - df <= 1e-12 * ob.max(1.0)
    };
    if !equal(lo_db) || equal(hi_db) {
        return Err(Error::BracketFailure { what: "DF / outer bound equality", limit: hi_db });
    }
    let (mut lo, mut hi) = (lo_db, hi_db);
    while hi - lo > tol_db {
        let mid = 0.5 * (lo + hi);
        if equal(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// SNR in dB where the DF and NNC sum rates cross on completely symmetric
/// channels, searched on `[8.1, 30]` dB.
pub fn df_nnc_crossing_db() -> Result<f64> {
    let diff = |x_db: f64| {
        let ch = unit_noise(snr_db_to_linear(x_db));
        df_rate(&ch).value - nnc_rate(&ch).value
    };
    scalar::bisect_root(diff, 8.1, 30.0, 1e-12, 200)
        .map_err(|_| Error::BracketFailure { what: "DF / NNC crossing", limit: 30.0 })
}

/// Scheme whose rate serves as the reference in [`high_snr_gap`].
///
/// AF-IAN is compared against DF (both have one degree of freedom); every
/// other scheme against the outer bound.
pub fn gap_reference(scheme: SchemeId) -> SchemeId {
    match scheme {
        SchemeId::AfIan => SchemeId::DF,
        _ => SchemeId::OuterBound,
    }
}

/// Rate gap to the reference scheme at common SNR `s` (unit noise).
pub fn high_snr_gap(scheme: SchemeId, s: f64) -> f64 {
    let ch = unit_noise(s);
    sum_rate(gap_reference(scheme), &ch).value - sum_rate(scheme, &ch).value
}

/// Limit of [`high_snr_gap`] as `s -> infinity`; `None` when the gap grows
/// without bound (DF against the outer bound).
pub fn gap_limit(scheme: SchemeId) -> Option<f64> {
    match scheme {
        SchemeId::OuterBound => Some(0.0),
        SchemeId::DF => None,
        SchemeId::NNC => Some(1.5 * 1.5f64.log2()),
        SchemeId::AfSnd => Some(1.5),
        SchemeId::AfIan => Some(2.0),
    }
}

/// High-SNR slope of the sum rate per `log2(S)`.
pub fn degrees_of_freedom(scheme: SchemeId) -> f64 {
    match scheme {
        SchemeId::OuterBound | SchemeId::NNC | SchemeId::AfSnd => 1.5,
        SchemeId::DF | SchemeId::AfIan => 1.0,
    }
}

fn unit_noise(s: f64) -> SymmetricChannel {
    SymmetricChannel { p_s: s, p_r: s, n_s: 1.0, n_r: 1.0 }
}
