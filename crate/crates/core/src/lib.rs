//! End-to-end pipeline for predicting obesity-status improvement from
//! wearable step-count activity.
//!
//! The crate is organized around the stages of the pipeline:
//!
//! - [`cohort`] — CSV ingestion, day×slot aggregation, mean imputation,
//!   standardization, and BMI-change labeling.
//! - [`synth`] — deterministic synthetic cohort generator with a planted
//!   activity→BMI effect, used for desk-scale validation.
//! - [`features`] — non-overlapping k-day windowing and the fixed-length
//!   per-window feature vector (slot averages + extracted step statistics +
//!   encoded demographics).
//! - [`model`] — from-scratch embedding + stacked-LSTM classifier trained by
//!   backpropagation through time, plus logistic-regression and
//!   random-forest baselines.
//! - [`interpret`] — hidden-state response profiles and feature-ablation
//!   analysis of a trained network.
//! - [`eval`] — participant-grouped cross-validation, experiment sweeps,
//!   week-subset augmentation, and report rendering.

pub mod cohort;
pub mod error;
pub mod eval;
pub mod features;
pub mod interpret;
pub mod manifest;
pub mod model;
pub mod synth;
pub mod util;

pub use error::{Error, Result};
