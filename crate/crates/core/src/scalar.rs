//! Coefficient fields.
//!
//! Everything in the engine is generic over [`Field`]. Groebner computations
//! are unstable under rounding, so the trait is only implemented for exact
//! rational types (`Ratio<T>` over any signed integer type).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// An exact coefficient field. `Signed` is only used for rendering.
pub trait Field:
    Num + Signed + Clone + Eq + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn neg(&self) -> Self {
        Self::zero() - self.clone()
    }
}

impl<T> Field for Ratio<T>
where
    T: Integer + Signed + Clone + Hash + Debug + Display + Send + Sync + 'static,
    Ratio<T>: FromStr,
{
}
