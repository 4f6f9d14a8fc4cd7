//! Rate analysis and link-level simulation for the two-phase star relay
//! network: three source/sink pairs exchanging messages through a central
//! half-duplex relay over AWGN channels.
//!
//! * [`rates`]: closed-form exchange-rate bounds (cut-set, DF, AF, lattice),
//!   phase-split optimisation and gap analysis.
//! * [`lattice`]: dithered nested-lattice codec on cubic lattices.
//! * [`netsim`]: seeded Monte Carlo simulator of the DF, AF and lattice
//!   strategies.

pub mod lattice;
pub mod netsim;
pub mod rates;
pub mod snr;

pub use lattice::{LatticeCodeword, LatticeError, MessageIndex, NestedLatticePair};
pub use netsim::{BcMode, SimConfig, SimError, Strategy, StrategyResult};
pub use rates::{curve_point, gap_report, GapSummary, RateCurvePoint, RateError};
pub use snr::{ExchangeRate, PhaseSplit, SnrPoint};
