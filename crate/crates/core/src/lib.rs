//! Dynamic-keypoint suppression for RGB-D visual odometry.
//!
//! Feature points that land on moving objects corrupt pose estimation in
//! feature-based SLAM. This crate removes them in two sweeps before any
//! geometry runs:
//!
//! 1. keypoints inside a (dilated) instance-segmentation mask of a dynamic
//!    class are dropped outright ([`filter::classify_keypoints`], rule 1);
//! 2. remaining keypoints inside the object's bounding box whose depth falls
//!    in the object's depth band `[m_obj - alpha*d, M_obj + alpha*d]` are
//!    dropped as well (rule 2), catching points the mask missed.
//!
//! Around that core sit TUM RGB-D dataset ingestion ([`tum`]), mask loading
//! and dilation ([`mask`]), a deterministic synthetic RGB-D scene generator
//! ([`synth`]), a RANSAC 3D-3D odometry harness ([`vo`]), trajectory error
//! metrics ([`metrics`]), and SVG plotting ([`plot`]).

pub mod filter;
pub mod geom;
pub mod mask;
pub mod metrics;
pub mod plot;
pub mod synth;
pub mod tum;
pub mod vo;

mod io_util;
mod rng;

pub use geom::{backproject, project, umeyama_align, PinholeIntrinsics, Point3, Pose};
pub use io_util::write_atomic;
