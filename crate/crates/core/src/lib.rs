pub mod affweyl;
pub mod brauer;
pub mod cli;
pub mod coweight;
pub mod criteria;
pub mod error;
pub mod exactq;
pub mod isospace;
pub mod newton;
