//! Geometric primitives shared across the pipeline: pinhole projection,
//! SE(3) poses, and closed-form rigid point-set alignment.

use nalgebra::{Matrix3, Matrix4, Quaternion, Rotation3, UnitQuaternion, Vector3};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// 3D point in meters, camera or world frame depending on context.
pub type Point3 = nalgebra::Point3<f64>;

/// Errors from geometric operations.
#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    /// Back-projection needs a strictly positive depth.
    #[error("depth must be positive, got {0}")]
    NonPositiveDepth(f64),
    /// Rigid alignment needs at least 3 point pairs.
    #[error("alignment needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    /// Point configuration spans fewer than two dimensions (collinear or
    /// coincident points); the aligning rotation is not unique.
    #[error("degenerate point configuration: covariance rank < 2")]
    DegenerateConfiguration,
    /// Intrinsics violate their invariants.
    #[error("invalid intrinsics: {0}")]
    InvalidIntrinsics(&'static str),
}

/// Pinhole camera intrinsics plus the raw-depth-to-meters scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinholeIntrinsics {
    /// Focal length along u, pixels.
    pub fx: f64,
    /// Focal length along v, pixels.
    pub fy: f64,
    /// Principal point u, pixels.
    pub cx: f64,
    /// Principal point v, pixels.
    pub cy: f64,
    /// Raw depth units per meter; 5000 for TUM 16-bit depth PNGs.
    pub depth_scale: f64,
}

impl PinholeIntrinsics {
    pub fn new(fx: f64, fy: f64, cx: f64, cy: f64, depth_scale: f64) -> Result<Self, GeomError> {
        if !(fx > 0.0 && fy > 0.0) {
            return Err(GeomError::InvalidIntrinsics("focal lengths must be positive"));
        }
        if !(cx.is_finite() && cy.is_finite()) {
            return Err(GeomError::InvalidIntrinsics("principal point must be finite"));
        }
        if !(depth_scale > 0.0) {
            return Err(GeomError::InvalidIntrinsics("depth scale must be positive"));
        }
        Ok(Self { fx, fy, cx, cy, depth_scale })
    }

    /// Default TUM RGB-D calibration (fr sequences, rounded) with the
    /// conventional 5000 raw units per meter.
    pub fn tum_default() -> Self {
        Self { fx: 525.0, fy: 525.0, cx: 319.5, cy: 239.5, depth_scale: 5000.0 }
    }
}

/// Back-projects pixel `(u, v)` at depth `z` meters into the camera frame.
pub fn backproject(u: f64, v: f64, z: f64, k: &PinholeIntrinsics) -> Result<Point3, GeomError> {
    if !(z > 0.0) {
        return Err(GeomError::NonPositiveDepth(z));
    }
    Ok(Point3::new((u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z))
}

/// Perspective projection of a camera-frame point onto the image plane.
/// Returns `None` for points at or behind the camera.
pub fn project(p: &Point3, k: &PinholeIntrinsics) -> Option<(f64, f64)> {
    if p.z <= 0.0 {
        return None;
    }
    Some((k.fx * p.x / p.z + k.cx, k.fy * p.y / p.z + k.cy))
}

/// Rigid SE(3) transform. `apply` computes `R * p + t`.
///
/// On the wire (TUM trajectory format) the rotation is the quaternion in
/// `qx qy qz qw` order; internal storage is a nalgebra unit quaternion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    rotation: UnitQuaternion<f64>,
    translation: Vector3<f64>,
}

impl Pose {
    pub fn identity() -> Self {
        Self { rotation: UnitQuaternion::identity(), translation: Vector3::zeros() }
    }

    pub fn new(rotation: UnitQuaternion<f64>, translation: Vector3<f64>) -> Self {
        Self { rotation, translation }
    }

    /// Builds a pose from TUM wire fields. The quaternion is renormalized;
    /// returns `None` if its norm is too close to zero to normalize.
    #[allow(clippy::too_many_arguments)]
    pub fn from_wire(
        tx: f64,
        ty: f64,
        tz: f64,
        qx: f64,
        qy: f64,
        qz: f64,
        qw: f64,
    ) -> Option<Self> {
        let q = Quaternion::new(qw, qx, qy, qz);
        let rotation = UnitQuaternion::try_new(q, 1e-9)?;
        Some(Self { rotation, translation: Vector3::new(tx, ty, tz) })
    }

    /// Wire-order fields `[tx, ty, tz, qx, qy, qz, qw]`.
    pub fn wire_fields(&self) -> [f64; 7] {
        let t = self.translation;
        let q = self.rotation.into_inner().coords; // x, y, z, w
        [t.x, t.y, t.z, q.x, q.y, q.z, q.w]
    }

    pub fn rotation(&self) -> &UnitQuaternion<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Vector3<f64> {
        &self.translation
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Pose) -> Pose {
        let mut rotation = self.rotation * other.rotation;
        rotation.renormalize();
        Pose { rotation, translation: self.rotation * other.translation + self.translation }
    }

    pub fn inverse(&self) -> Pose {
        let inv = self.rotation.inverse();
        Pose { rotation: inv, translation: -(inv * self.translation) }
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        self.rotation * p + self.translation
    }

    /// Rotation angle in radians, in `[0, pi]`.
    pub fn rotation_angle(&self) -> f64 {
        self.rotation.angle()
    }

    pub fn to_homogeneous(&self) -> Matrix4<f64> {
        let mut m = self.rotation.to_rotation_matrix().to_homogeneous();
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }
}

impl Serialize for Pose {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let q = self.rotation.into_inner().coords;
        let mut s = serializer.serialize_struct("Pose", 2)?;
        s.serialize_field("translation", &[self.translation.x, self.translation.y, self.translation.z])?;
        s.serialize_field("rotation_xyzw", &[q.x, q.y, q.z, q.w])?;
        s.end()
    }
}

/// Result of a rigid (optionally similarity) point-set alignment.
#[derive(Debug, Clone, Copy)]
pub struct Alignment {
    /// Transform mapping `src` points onto `dst` points.
    pub pose: Pose,
    /// Uniform scale; 1.0 unless alignment ran with `with_scale`.
    pub scale: f64,
}

/// Closed-form least-squares rigid alignment (Umeyama): finds the transform
/// minimizing `sum_i ||dst_i - (s * R * src_i + t)||^2`, with `s = 1` unless
/// `with_scale` is set.
///
/// The rotation is forced proper (det +1) by flipping the singular direction
/// with the smallest singular value whenever the raw SVD solution reflects.
pub fn umeyama_align(
    src: &[Point3],
    dst: &[Point3],
    with_scale: bool,
) -> Result<Alignment, GeomError> {
    assert_eq!(src.len(), dst.len(), "point lists must have equal length");
    let n = src.len();
    if n < 3 {
        return Err(GeomError::TooFewPoints(n));
    }
    let inv_n = 1.0 / n as f64;
    let mut mu_src = Vector3::zeros();
    let mut mu_dst = Vector3::zeros();
    for (s, d) in src.iter().zip(dst) {
        mu_src += s.coords;
        mu_dst += d.coords;
    }
    mu_src *= inv_n;
    mu_dst *= inv_n;

    let mut cov = Matrix3::zeros();
    let mut src_var = 0.0;
    for (s, d) in src.iter().zip(dst) {
        let sc = s.coords - mu_src;
        let dc = d.coords - mu_dst;
        cov += dc * sc.transpose();
        src_var += sc.norm_squared();
    }
    cov *= inv_n;
    src_var *= inv_n;

    let svd = cov.svd(true, true);
    let u = svd.u.expect("svd of 3x3 always yields u");
    let v_t = svd.v_t.expect("svd of 3x3 always yields v_t");
    let sv = svd.singular_values;

    let mut sorted = [sv[0], sv[1], sv[2]];
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if sorted[1] <= sorted[0].max(f64::MIN_POSITIVE) * 1e-12 {
        return Err(GeomError::DegenerateConfiguration);
    }

    // Proper-rotation correction: flip the smallest singular direction when
    // the unconstrained optimum is a reflection.
    let mut d_sign = Vector3::new(1.0, 1.0, 1.0);
    if (u.determinant() * v_t.determinant()) < 0.0 {
        let mut min_idx = 0;
        for i in 1..3 {
            if sv[i] < sv[min_idx] {
                min_idx = i;
            }
        }
        d_sign[min_idx] = -1.0;
    }
    let r = u * Matrix3::from_diagonal(&d_sign) * v_t;

    let scale = if with_scale {
        if src_var <= f64::MIN_POSITIVE {
            return Err(GeomError::DegenerateConfiguration);
        }
        (sv[0] * d_sign[0] + sv[1] * d_sign[1] + sv[2] * d_sign[2]) / src_var
    } else {
        1.0
    };

    let rotation = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(r));
    let translation = mu_dst - scale * (rotation * mu_src);
    Ok(Alignment { pose: Pose::new(rotation, translation), scale })
}
