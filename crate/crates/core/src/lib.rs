//! Quality-factor modeling for resonant microcantilever mass sensors.
//!
//! * [`physics`]: flexural modes, air / support / thermoelastic loss channels,
//!   composite Q and minimum detectable mass.
//! * [`response`]: synthetic resonance peaks, Q extraction and residual-loss
//!   decomposition of measured Q.
//! * [`explorer`]: pressure, geometry and mode sweeps plus constrained
//!   geometry optimization.
//! * [`io`]: material database, run configuration, file output and the
//!   `cantq` command line.

pub mod error;
pub mod explorer;
pub mod io;
pub mod physics;
pub mod response;

pub use error::{Error, Result};
