//! Decomposition-driven forecasting for non-stationary series.
//!
//! A series is decomposed into intrinsic mode functions with EMD or EEMD.
//! Slow components are forecast directly by a small neural regressor. Fast
//! components are cut into overlapping windows, and the windows most similar
//! (by dynamic time warping) to the latest one form the regressor's training
//! set. The component forecasts are summed into the final prediction.

pub mod decomposition;
pub mod dtw;
pub mod error;
pub mod evaluation;
pub mod grouping;
pub mod pipeline;
pub mod predictors;
pub mod series;

pub use error::{Error, Result};
pub use series::{Column, Decomposition, FrequencySplit, MinMaxScale, RngSeed, TimeSeries};
