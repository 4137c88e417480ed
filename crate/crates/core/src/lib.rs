pub mod boxcat;
pub mod catalg;
pub mod coeff;
pub mod cubset;
pub mod error;
pub mod fixtures;
pub mod homcalc;
pub mod par;
pub mod report;
pub mod zlinalg;

pub use error::{Error, Result};
