//! Circuit power and link budget of a mmWave board-to-board link.
//!
//! Every node has an analog front end (receive chain, ADC, DAC, transmit
//! chain); schemes differ in how much decoding each node performs. Power
//! amplifiers have efficiency `eta`, so radiated power costs `1/eta` at the
//! relay and `3/eta` for the three sources together.

use crate::channel::SchemeId;
use crate::error::{Error, Result};
use crate::gee::PowerCost;

pub const BOLTZMANN: f64 = 1.380649e-23;

/// Per-component figures behind the front-end totals, in watts. Kept for
/// reference; the model uses the totals in [`ComponentPowers`] directly.
pub mod components {
    pub const MIXER: f64 = 0.017;
    pub const LO_DRIVER: f64 = 0.024;
    pub const LNA: f64 = 0.018;
    /// One ADC; I and Q need two.
    pub const ADC: f64 = 0.406;
    /// One DAC; I and Q need two.
    pub const DAC: f64 = 0.400;
    pub const PA_EFFICIENCY: f64 = 0.062;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentPowers {
    pub p_rx: f64,
    pub p_adc: f64,
    pub p_dec: f64,
    pub p_dac: f64,
    pub p_tx: f64,
    pub eta: f64,
}

impl Default for ComponentPowers {
    fn default() -> Self {
        Self { p_rx: 0.346, p_adc: 0.812, p_dec: 0.300, p_dac: 0.800, p_tx: 0.058, eta: components::PA_EFFICIENCY }
    }
}

impl ComponentPowers {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("p_rx", self.p_rx),
            ("p_adc", self.p_adc),
            ("p_dec", self.p_dec),
            ("p_dac", self.p_dac),
            ("p_tx", self.p_tx),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be > 0")));
            }
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(Error::InvalidParameter(format!("eta = {} must lie in (0, 1]", self.eta)));
        }
        Ok(())
    }

    /// Front end without any decoding: receive chain, ADC, DAC and transmit chain.
    pub fn p_c_analog(&self) -> f64 {
        self.p_rx + self.p_adc + self.p_dac + self.p_tx
    }
}

pub fn default_component_powers() -> ComponentPowers {
    ComponentPowers::default()
}

/// Circuit and amplifier cost of a scheme.
///
/// `pessimistic_nnc` charges NNC users one extra decoder and the relay four
/// decoders' worth of signal processing.
pub fn scheme_power_profile(scheme: SchemeId, cp: &ComponentPowers, pessimistic_nnc: bool) -> Result<PowerCost> {
    cp.validate()?;
    let analog = cp.p_c_analog();
    let af_relay = cp.p_rx + cp.p_tx;
    let (p_c_s, p_c_r) = match scheme {
        SchemeId::OuterBound => return Err(Error::UnsupportedScheme(scheme)),
        SchemeId::DF => (analog + 2.0 * cp.p_dec, analog + 3.0 * cp.p_dec),
        SchemeId::AfSnd => (analog + 2.0 * cp.p_dec, af_relay),
        SchemeId::AfIan => (analog + cp.p_dec, af_relay),
        SchemeId::NNC if pessimistic_nnc => (analog + 3.0 * cp.p_dec, analog + 4.0 * cp.p_dec),
        SchemeId::NNC => (analog + 2.0 * cp.p_dec, analog + 0.1 * cp.p_dec),
    };
    PowerCost::new(3.0 / cp.eta, 1.0 / cp.eta, 3.0 * p_c_s + p_c_r, p_c_s, p_c_r)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub gain_db: f64,
    pub bandwidth_hz: f64,
    pub temperature_k: f64,
}

impl Default for LinkBudget {
    fn default() -> Self {
        Self { gain_db: -65.8, bandwidth_hz: 25e9, temperature_k: 290.0 }
    }
}

impl LinkBudget {
    pub fn new(gain_db: f64, bandwidth_hz: f64, temperature_k: f64) -> Result<Self> {
        if !(bandwidth_hz > 0.0 && temperature_k > 0.0 && gain_db.is_finite()) {
            return Err(Error::InvalidParameter("bandwidth and temperature must be > 0".into()));
        }
        Ok(Self { gain_db, bandwidth_hz, temperature_k })
    }

    /// Thermal noise power `k_B T B` in watts.
    pub fn noise_power(&self) -> f64 {
        BOLTZMANN * self.temperature_k * self.bandwidth_hz
    }

    pub fn gain(&self) -> f64 {
        10f64.powf(self.gain_db / 10.0)
    }

    /// Noise referred to the transmitter, `k_B T B / gain`. Feeding transmit
    /// powers in watts together with this noise into the rate formulas gives
    /// received SNRs.
    pub fn effective_noise(&self) -> f64 {
        self.noise_power() / self.gain()
    }
}

/// Received SNR for transmit power `p_tx_w`.
pub fn effective_channel(lb: &LinkBudget, p_tx_w: f64) -> f64 {
    p_tx_w * lb.gain() / lb.noise_power()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn defaults() {
        let cp = default_component_powers();
        assert_eq!(cp.p_dec, 0.300);
        assert_eq!(cp.eta, 0.062);
        assert!(close(cp.p_c_analog(), 2.016));
        assert!(close(cp.p_adc, 2.0 * components::ADC));
        assert!(close(cp.p_dac, 2.0 * components::DAC));
    }

    #[test]
    fn scheme_costs() {
        let cp = default_component_powers();
        let df = scheme_power_profile(SchemeId::DF, &cp, false).unwrap();
        assert!(close(df.p_c_s, 2.616) && close(df.p_c_r, 2.916) && close(df.p_c, 10.764));
        let ian = scheme_power_profile(SchemeId::AfIan, &cp, false).unwrap();
        assert!(close(ian.p_c_s, 2.316) && close(ian.p_c_r, 0.404) && close(ian.p_c, 7.352));
        let snd = scheme_power_profile(SchemeId::AfSnd, &cp, false).unwrap();
        assert!(close(snd.p_c_s, 2.616) && close(snd.p_c_r, 0.404) && close(snd.p_c, 8.252));
        let nnc = scheme_power_profile(SchemeId::NNC, &cp, false).unwrap();
        assert!(close(nnc.p_c_s, 2.616) && close(nnc.p_c_r, 2.046) && close(nnc.p_c, 9.894));
        let pes = scheme_power_profile(SchemeId::NNC, &cp, true).unwrap();
        assert!(close(pes.p_c_s, 2.916) && close(pes.p_c_r, 3.216) && close(pes.p_c, 11.964));
        assert!(close(df.phi, 3.0 / 0.062) && close(df.psi, 1.0 / 0.062));
        assert!(matches!(
            scheme_power_profile(SchemeId::OuterBound, &cp, false),
            Err(Error::UnsupportedScheme(SchemeId::OuterBound))
        ));
        assert!(ian.p_c < snd.p_c && snd.p_c < nnc.p_c && nnc.p_c < df.p_c && df.p_c < pes.p_c);
    }

    #[test]
    fn link_budget() {
        let lb = LinkBudget::default();
        assert!((lb.noise_power() - 1.00097e-10).abs() < 1e-14);
        assert!((lb.gain() - 2.63027e-7).abs() < 1e-11);
        let snr = effective_channel(&lb, 1.0);
        assert!((snr - 2627.7).abs() < 1.0, "{snr}");
        assert!((10.0 * snr.log10() - 34.2).abs() < 0.05);
        assert!((1.0 / lb.effective_noise() - snr).abs() < 1e-9 * snr);
    }
}
