//! Error exponents and typical error geometry for the AWGN channel and the
//! dithered mod-lattice channel, with Monte Carlo validation.
//!
//! All rates and exponents are in nats, angles in radians, and distances are
//! normalised by `sqrt(nP)`.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod awgn_exponents;
pub mod error;
pub mod lattice;
pub mod modlambda;
pub mod numerics;
pub mod regions_geometry;
pub mod simulator;
pub mod stats;
pub mod validation;

pub use awgn_exponents::{ChannelSpec, CriticalRates, ExponentRegime, ExponentValue, RateNats};
pub use error::{Error, Result};
pub use lattice::{Lattice, LatticeSpec};
pub use modlambda::{LatticeTypicalEvent, ModLambdaExponent, ScalingSpec};
pub use regions_geometry::{EventRegime, RegionSpec, TypicalEvent};
pub use simulator::{Decoder, Ensemble, SimConfig, SimResult};
