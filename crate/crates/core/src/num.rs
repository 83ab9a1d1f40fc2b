//! The integer types counts may be accumulated in.

use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// Exact signed integer with checked arithmetic. Implemented for `i64`,
/// `i128` and `BigInt`.
pub trait Count:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Signed
    + Integer
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Count for T where
    T: Clone
        + Debug
        + Display
        + PartialOrd
        + Signed
        + Integer
        + CheckedAdd
        + CheckedSub
        + CheckedMul
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}
