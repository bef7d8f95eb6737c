//! Sum rates, energy-efficiency optimizers and power-control games for the
//! symmetric three-user multi-way relay channel.
//!
//! Three users exchange messages through a relay with no direct links. Every
//! user transmits with power `p_s`, the relay with `p_r`, and the noise powers
//! seen at the users and at the relay are `n_s` and `n_r`.
//!
//! - [`rates`]: closed-form sum rates of the relaying schemes and the outer bound.
//! - [`gee`]: global energy efficiency and per-node utilities.
//! - [`fractional`]: Dinkelbach's method, the full-power-coupled solver and
//!   alternating maximization.
//! - [`monotonic`]: polyblock outer approximation for the global optimum.
//! - [`game`]: best responses and best-response dynamics between sources and relay.
//! - [`power_model`]: circuit power and link budget of a mmWave board-to-board link.
//! - [`oracle`]: brute-force references (LP over rate regions, grid search).
//! - [`sweep`] and [`verify`]: batch experiments and named checks used by the CLI;
//!   [`config`] reads its key=value files.

pub mod channel;
pub mod config;
pub mod error;
pub mod fractional;
pub mod game;
pub mod gee;
pub mod monotonic;
pub mod oracle;
pub mod power_model;
pub mod rates;
pub mod scalar;
pub mod sweep;
pub mod verify;

pub use channel::{capacity, linear_to_db, snr_db_to_linear, PowerLimits, SchemeId, SymmetricChannel};
pub use error::{Error, Result};
pub use gee::{PowerCost, PowerProfile, RateModel};
