use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Parameter of the Λ-case, a rational strictly inside (−1, 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lambda(BigRational);

impl Lambda {
    pub fn new(value: BigRational) -> Result<Self> {
        if value > -BigRational::one() && value < BigRational::zero() {
            Ok(Self(value))
        } else {
            Err(Error::LambdaOutOfRange(value.to_string()))
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }
}

impl FromStr for Lambda {
    type Err = Error;

    /// Accepts `p/q` or an integer literal (the latter is always out of range).
    fn from_str(s: &str) -> Result<Self> {
        let r: BigRational = s.trim().parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("`{s}` is not a rational number"),
        })?;
        Self::new(r)
    }
}

/// The three classes of regular irreducible representations on a Krein space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RepresentationKind {
    /// Vacuum annihilated by `a`; spectrum of `N` is {0, 1, 2, ...}.
    Fock,
    /// Vector annihilated by `a⁺`; spectrum of `N` is {-1, -2, ...}.
    AntiFock,
    /// Two-sided spectrum `λ + ℤ`.
    Lambda(Lambda),
}

impl RepresentationKind {
    pub fn lambda(value: BigRational) -> Result<Self> {
        Lambda::new(value).map(Self::Lambda)
    }

    /// Whether `k` belongs to the index set of the unnormalized basis `e_k`.
    pub fn contains_index(&self, k: i64) -> bool {
        match self {
            Self::Fock | Self::AntiFock => k >= 0,
            Self::Lambda(_) => true,
        }
    }

    /// Basis indices with `|k| ≤ depth`, in ascending order.
    pub fn indices(&self, depth: u32) -> Vec<i64> {
        let d = i64::from(depth);
        match self {
            Self::Fock | Self::AntiFock => (0..=d).collect(),
            Self::Lambda(_) => (-d..=d).collect(),
        }
    }

    pub fn short_name(&self) -> &'static str {
        match self {
            Self::Fock => "fock",
            Self::AntiFock => "antifock",
            Self::Lambda(_) => "lambda",
        }
    }
}

impl fmt::Display for RepresentationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fock => f.write_str("fock"),
            Self::AntiFock => f.write_str("antifock"),
            Self::Lambda(l) => write!(f, "lambda({})", l.value()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_range_is_open() {
        assert!("-1/2".parse::<Lambda>().is_ok());
        assert!("-1/3".parse::<Lambda>().is_ok());
        assert!("-1".parse::<Lambda>().is_err());
        assert!("0".parse::<Lambda>().is_err());
        assert!("1/2".parse::<Lambda>().is_err());
        assert!("-3/2".parse::<Lambda>().is_err());
        assert!("abc".parse::<Lambda>().is_err());
    }

    #[test]
    fn index_sets() {
        assert!(!RepresentationKind::Fock.contains_index(-1));
        let l = RepresentationKind::lambda(BigRational::new((-1).into(), 2.into())).unwrap();
        assert!(l.contains_index(-5));
        assert_eq!(l.indices(1), vec![-1, 0, 1]);
        assert_eq!(RepresentationKind::AntiFock.indices(2), vec![0, 1, 2]);
    }
}
