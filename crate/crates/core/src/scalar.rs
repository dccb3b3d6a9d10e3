use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumCast, ToPrimitive};

/// Floating-point type the estimators are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumCast + Sum + Debug + Display + Send + Sync + 'static
{
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable as a float")
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable as a float")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// A value that may be infinite in the model sense (e.g. a mean hitting time
/// when the extremal index is zero). Kept distinct from a float overflow.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(untagged)]
pub enum Magnitude<F> {
    Finite(F),
    #[serde(serialize_with = "serialize_infinite")]
    Infinite,
}

fn serialize_infinite<S: serde::Serializer>(s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str("infinite")
}

impl<F: Scalar> Magnitude<F> {
    pub fn finite(self) -> Option<F> {
        match self {
            Magnitude::Finite(v) => Some(v),
            Magnitude::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Magnitude::Infinite)
    }
}

impl<F: Display> Display for Magnitude<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Magnitude::Finite(v) => write!(f, "{v}"),
            Magnitude::Infinite => f.write_str("infinite"),
        }
    }
}

/// Ascending sort of a float slice; NaNs are rejected by callers beforehand.
pub(crate) fn sorted_ascending<F: Scalar>(values: &[F]) -> Vec<F> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}
