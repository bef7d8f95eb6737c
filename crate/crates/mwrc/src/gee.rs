//! Global energy efficiency (GEE) and the per-node utilities.
//!
//! The sum rates split into two families that the solvers treat differently:
//!
//! - min-form: `min{a1 C(alpha1 p_r / n_s), a2 C(alpha2 p_s / n_r)}` (outer bound, DF)
//! - compound: `alpha C(gamma)` with `gamma = p_s p_r / (a p_s + b p_r + c)` (NNC, AF-SND, AF-IAN)
//!
//! GEE is `rate / (phi p_s + psi p_r + p_c)` in bit/s/Hz per watt; the
//! bandwidth factor is applied by callers that want bit/J.

use crate::channel::{capacity, SchemeId};
use crate::error::{Error, Result};

/// Parameters of the min-form rate `min{a1 C(alpha1 p_r / n_s), a2 C(alpha2 p_s / n_r)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gee1Params {
    pub a1: f64,
    pub alpha1: f64,
    pub a2: f64,
    pub alpha2: f64,
}

impl Gee1Params {
    pub fn new(a1: f64, alpha1: f64, a2: f64, alpha2: f64) -> Result<Self> {
        positive(&[("a1", a1), ("alpha1", alpha1), ("a2", a2), ("alpha2", alpha2)])?;
        Ok(Self { a1, alpha1, a2, alpha2 })
    }

    pub fn for_scheme(scheme: SchemeId) -> Result<Self> {
        match scheme {
            SchemeId::OuterBound => Ok(Self { a1: 1.5, alpha1: 1.0, a2: 3.0, alpha2: 1.0 }),
            SchemeId::DF => Ok(Self { a1: 1.5, alpha1: 1.0, a2: 1.0, alpha2: 3.0 }),
            other => Err(Error::UnsupportedScheme(other)),
        }
    }

    /// Relay-limited (broadcast) term.
    pub fn downlink(&self, p_r: f64, n_s: f64) -> f64 {
        self.a1 * capacity(self.alpha1 * p_r / n_s)
    }

    /// Source-limited (multiple access) term.
    pub fn uplink(&self, p_s: f64, n_r: f64) -> f64 {
        self.a2 * capacity(self.alpha2 * p_s / n_r)
    }
}

/// Parameters of the compound rate `alpha C(p_s p_r / (a p_s + b p_r + c))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gee2Params {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Gee2Params {
    pub fn new(alpha: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        positive(&[("alpha", alpha), ("a", a), ("b", b), ("c", c)])?;
        Ok(Self { alpha, a, b, c })
    }

    pub fn for_scheme(scheme: SchemeId, n_s: f64, n_r: f64) -> Result<Self> {
        match scheme {
            SchemeId::AfSnd => Self::new(1.5, 1.5 * n_s, n_r / 2.0, n_s * n_r / 2.0),
            SchemeId::AfIan => Self::new(1.0, n_s, n_r / 3.0, n_s * n_r / 3.0),
            SchemeId::NNC => Self::new(1.5, n_s, n_r / 2.0, n_s * n_r / 2.0),
            other => Err(Error::UnsupportedScheme(other)),
        }
    }

    /// `c / (a b)`; governs the monotonicity of the best responses.
    pub fn d(&self) -> f64 {
        self.c / (self.a * self.b)
    }

    /// Effective SNR `p_s p_r / (a p_s + b p_r + c)`.
    pub fn gamma(&self, p_s: f64, p_r: f64) -> f64 {
        if p_s <= 0.0 || p_r <= 0.0 {
            return 0.0;
        }
        p_s * p_r / (self.a * p_s + self.b * p_r + self.c)
    }

    pub fn rate(&self, p_s: f64, p_r: f64) -> f64 {
        self.alpha * capacity(self.gamma(p_s, p_r))
    }

    /// Partial derivative of [`Self::gamma`] with respect to `p_s`.
    pub fn dgamma_dps(&self, p_s: f64, p_r: f64) -> f64 {
        let den = self.a * p_s + self.b * p_r + self.c;
        p_r * (self.b * p_r + self.c) / (den * den)
    }

    /// Partial derivative of [`Self::gamma`] with respect to `p_r`.
    pub fn dgamma_dpr(&self, p_s: f64, p_r: f64) -> f64 {
        let den = self.a * p_s + self.b * p_r + self.c;
        p_s * (self.a * p_s + self.c) / (den * den)
    }
}

/// Sum rate as a function of the two transmit powers, for a fixed noise pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateModel {
    MinForm { params: Gee1Params, n_s: f64, n_r: f64 },
    Compound(Gee2Params),
}

impl RateModel {
    pub fn for_scheme(scheme: SchemeId, n_s: f64, n_r: f64) -> Result<Self> {
        if !(n_s > 0.0 && n_r > 0.0 && n_s.is_finite() && n_r.is_finite()) {
            return Err(Error::InvalidChannel(format!("noise powers must be positive (n_s = {n_s}, n_r = {n_r})")));
        }
        match scheme {
            SchemeId::OuterBound | SchemeId::DF => {
                Ok(Self::MinForm { params: Gee1Params::for_scheme(scheme)?, n_s, n_r })
            }
            _ => Ok(Self::Compound(Gee2Params::for_scheme(scheme, n_s, n_r)?)),
        }
    }

    pub fn rate(&self, p_s: f64, p_r: f64) -> f64 {
        match self {
            Self::MinForm { params, n_s, n_r } => params.downlink(p_r, *n_s).min(params.uplink(p_s, *n_r)),
            Self::Compound(params) => params.rate(p_s, p_r),
        }
    }
}

/// Amplifier inefficiencies and circuit powers.
///
/// `phi` weights the common source power (all three users), `psi` the relay
/// power. `p_c` enters the GEE; `p_c_s` and `p_c_r` enter the utilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerCost {
    pub phi: f64,
    pub psi: f64,
    pub p_c: f64,
    pub p_c_s: f64,
    pub p_c_r: f64,
}

impl PowerCost {
    pub fn new(phi: f64, psi: f64, p_c: f64, p_c_s: f64, p_c_r: f64) -> Result<Self> {
        positive(&[("phi", phi), ("psi", psi), ("p_c", p_c), ("p_c_s", p_c_s), ("p_c_r", p_c_r)])?;
        if phi < 3.0 || psi < 1.0 {
            return Err(Error::InvalidParameter(format!("need phi >= 3 and psi >= 1 (phi = {phi}, psi = {psi})")));
        }
        Ok(Self { phi, psi, p_c, p_c_s, p_c_r })
    }

    /// Circuit power shared equally among the four nodes: the sources get
    /// three quarters of `p_c`, the relay one quarter.
    pub fn equal_share(phi: f64, psi: f64, p_c: f64) -> Result<Self> {
        Self::new(phi, psi, p_c, 0.75 * p_c, 0.25 * p_c)
    }

    pub fn consumed(&self, profile: PowerProfile) -> f64 {
        self.phi * profile.p_s + self.psi * profile.p_r + self.p_c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PowerProfile {
    pub p_s: f64,
    pub p_r: f64,
}

impl PowerProfile {
    pub fn new(p_s: f64, p_r: f64) -> Self {
        Self { p_s, p_r }
    }
}

pub fn gee_value(model: &RateModel, profile: PowerProfile, cost: &PowerCost) -> f64 {
    let rate = model.rate(profile.p_s, profile.p_r);
    if rate == 0.0 {
        return 0.0;
    }
    rate / cost.consumed(profile)
}

/// Individual energy efficiencies `(u_s, u_r)` of the sources and the relay.
pub fn utilities(model: &RateModel, profile: PowerProfile, cost: &PowerCost) -> (f64, f64) {
    let rate = model.rate(profile.p_s, profile.p_r);
    (rate / (profile.p_s + cost.p_c_s), rate / (profile.p_r + cost.p_c_r))
}

fn positive(values: &[(&str, f64)]) -> Result<()> {
    for (name, v) in values {
        if !(v.is_finite() && *v > 0.0) {
            return Err(Error::InvalidParameter(format!("{name} = {v} must be finite and > 0")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SymmetricChannel;
    use crate::rates;

    #[test]
    fn min_form_parameters() {
        let df = Gee1Params::for_scheme(SchemeId::DF).unwrap();
        assert_eq!((df.a1, df.alpha1, df.a2, df.alpha2), (1.5, 1.0, 1.0, 3.0));
        let ob = Gee1Params::for_scheme(SchemeId::OuterBound).unwrap();
        assert_eq!((ob.a1, ob.alpha1, ob.a2, ob.alpha2), (1.5, 1.0, 3.0, 1.0));
        assert!(Gee1Params::for_scheme(SchemeId::NNC).is_err());

        let ch = SymmetricChannel::completely_symmetric(10.0, 1.0).unwrap();
        let m = RateModel::for_scheme(SchemeId::DF, 1.0, 1.0).unwrap();
        assert!((m.rate(10.0, 10.0) - rates::df_rate(&ch).value).abs() < 1e-14);
        let m = RateModel::for_scheme(SchemeId::OuterBound, 1.0, 1.0).unwrap();
        assert!((m.rate(10.0, 10.0) - rates::outer_bound(&ch).value).abs() < 1e-14);
    }

    #[test]
    fn compound_parameters() {
        let nnc = Gee2Params::for_scheme(SchemeId::NNC, 1.0, 1.0).unwrap();
        assert_eq!((nnc.alpha, nnc.a, nnc.b, nnc.c), (1.5, 1.0, 0.5, 0.5));
        assert!((nnc.d() - 1.0).abs() < 1e-15);
        let snd = Gee2Params::for_scheme(SchemeId::AfSnd, 1.0, 1.0).unwrap();
        assert_eq!((snd.alpha, snd.a, snd.b, snd.c), (1.5, 1.5, 0.5, 0.5));
        assert!((snd.d() - 2.0 / 3.0).abs() < 1e-15);
        let ian = Gee2Params::for_scheme(SchemeId::AfIan, 2.0, 0.3).unwrap();
        assert!((ian.d() - 1.0).abs() < 1e-15);
        assert!(Gee2Params::for_scheme(SchemeId::DF, 1.0, 1.0).is_err());
    }

    #[test]
    fn gee_examples() {
        let cost = PowerCost::new(3.0, 1.0, 1.0, 0.75, 0.25).unwrap();
        let df = RateModel::for_scheme(SchemeId::DF, 1.0, 1.0).unwrap();
        let nnc = RateModel::for_scheme(SchemeId::NNC, 1.0, 1.0).unwrap();
        let p = PowerProfile::new(10.0, 10.0);
        assert!((gee_value(&df, p, &cost) - 0.120834).abs() < 1e-6);
        assert!((gee_value(&nnc, p, &cost) - 0.106008).abs() < 1e-6);
        for s in SchemeId::ALL {
            let m = RateModel::for_scheme(s, 1.0, 1.0).unwrap();
            assert_eq!(gee_value(&m, PowerProfile::default(), &cost), 0.0);
        }
    }

    #[test]
    fn utility_examples() {
        let cost = PowerCost::new(3.0, 1.0, 1.0, 0.75, 0.25).unwrap();
        let df = RateModel::for_scheme(SchemeId::DF, 1.0, 1.0).unwrap();
        let (us, ur) = utilities(&df, PowerProfile::new(10.0, 10.0), &cost);
        assert!((us - 0.460856).abs() < 1e-6);
        assert!((ur - 0.483336).abs() < 1e-6);
        let nnc = RateModel::for_scheme(SchemeId::NNC, 1.0, 1.0).unwrap();
        assert_eq!(utilities(&nnc, PowerProfile::new(0.0, 4.0), &cost), (0.0, 0.0));
    }

    #[test]
    fn cost_validation() {
        assert!(PowerCost::new(2.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(PowerCost::new(3.0, 0.5, 1.0, 1.0, 1.0).is_err());
        assert!(PowerCost::new(3.0, 1.0, 0.0, 1.0, 1.0).is_err());
        let c = PowerCost::equal_share(3.0, 1.0, 1.0).unwrap();
        assert_eq!((c.p_c_s, c.p_c_r), (0.75, 0.25));
    }

    #[test]
    fn gee_rises_then_falls() {
        let cost = PowerCost::new(3.0, 1.0, 1.0, 0.75, 0.25).unwrap();
        for s in SchemeId::ALL {
            let m = RateModel::for_scheme(s, 1.0, 1.0).unwrap();
            let low = gee_value(&m, PowerProfile::new(1e-3, 1e-3), &cost);
            let mid = gee_value(&m, PowerProfile::new(0.8, 1.5), &cost);
            let high = gee_value(&m, PowerProfile::new(100.0, 100.0), &cost);
            assert!(low < mid && high < mid, "{s}: {low} {mid} {high}");
        }
    }

    #[test]
    fn compound_rate_concave_per_coordinate() {
        for s in [SchemeId::NNC, SchemeId::AfSnd, SchemeId::AfIan] {
            let p = Gee2Params::for_scheme(s, 1.0, 1.0).unwrap();
            let h = 0.01;
            for i in 1..1000 {
                let x = i as f64 * h;
                for other in [0.1, 1.0, 10.0] {
                    let dd_s = p.rate(x + h, other) - 2.0 * p.rate(x, other) + p.rate(x - h, other);
                    let dd_r = p.rate(other, x + h) - 2.0 * p.rate(other, x) + p.rate(other, x - h);
                    assert!(dd_s < 0.0 && dd_r < 0.0);
                    assert!(p.gamma(x + h, other) > p.gamma(x, other));
                    assert!(p.gamma(other, x + h) > p.gamma(other, x));
                }
            }
        }
    }
}
