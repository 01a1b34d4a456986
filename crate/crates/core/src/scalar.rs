use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};
use serde::Serialize;

/// Real scalar used by the eigensolver and the numeric reports.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Default + Serialize + Send + Sync + 'static {
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts")
    }

    fn of_u64(x: u64) -> Self {
        Self::from_u64(x).expect("u64 converts")
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + Default + Serialize + Send + Sync + 'static {}
