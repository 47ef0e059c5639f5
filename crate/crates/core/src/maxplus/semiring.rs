use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Scalar;

/// Element of the max-plus semiring: a finite value or ε (minus infinity).
///
/// `oplus` is `max`, `otimes` is `+`. ε is the neutral element of `oplus`
/// and absorbing for `otimes`; `e()` (zero) is the neutral element of
/// `otimes`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MaxPlus<S>(Option<S>);

impl<S: Scalar> MaxPlus<S> {
    pub const EPSILON: Self = MaxPlus(None);

    /// Finite element. Float minus infinity maps to ε.
    pub fn new(value: S) -> Self {
        if value.is_neg_infinite() {
            MaxPlus(None)
        } else {
            MaxPlus(Some(value))
        }
    }

    pub fn e() -> Self {
        MaxPlus(Some(S::zero()))
    }

    pub fn value(self) -> Option<S> {
        self.0
    }

    pub fn is_epsilon(self) -> bool {
        self.0.is_none()
    }

    pub fn oplus(self, other: Self) -> Self {
        match (self.0, other.0) {
            (None, _) => other,
            (_, None) => self,
            (Some(a), Some(b)) => MaxPlus(Some(a.max_of(b))),
        }
    }

    pub fn otimes(self, other: Self) -> Self {
        match (self.0, other.0) {
            (Some(a), Some(b)) => MaxPlus(Some(a + b)),
            _ => MaxPlus(None),
        }
    }

    /// Shift by an ordinary scalar; ε stays ε.
    pub fn shift(self, by: S) -> Self {
        MaxPlus(self.0.map(|a| a + by))
    }

    /// `⊕` over an iterator; ε for an empty iterator.
    pub fn sum<I: IntoIterator<Item = Self>>(items: I) -> Self {
        items.into_iter().fold(Self::EPSILON, Self::oplus)
    }

    /// Equality up to the scalar tolerance, with ε equal only to ε.
    pub fn approx_eq(self, other: Self) -> bool {
        match (self.0, other.0) {
            (None, None) => true,
            (Some(a), Some(b)) => a.approx_eq(b),
            _ => false,
        }
    }
}

impl<S: Scalar> From<S> for MaxPlus<S> {
    fn from(value: S) -> Self {
        MaxPlus::new(value)
    }
}

impl<S: Scalar> Default for MaxPlus<S> {
    fn default() -> Self {
        Self::EPSILON
    }
}

impl<S: Scalar> PartialOrd for MaxPlus<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.0, other.0) {
            (None, None) => Some(Ordering::Equal),
            (None, Some(_)) => Some(Ordering::Less),
            (Some(_), None) => Some(Ordering::Greater),
            (Some(a), Some(b)) => a.partial_cmp(&b),
        }
    }
}

impl<S: Scalar> fmt::Display for MaxPlus<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("ε"),
        }
    }
}
