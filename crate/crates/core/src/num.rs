//! Exact arithmetic used throughout the crate.
//!
//! Every amount is an exact rational. The integer regime is the same type
//! restricted (and validated) to denominator one on the inputs; gadget
//! capacities like `c(v)/2` still need halves.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

/// Exact rational amount.
pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qr(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn is_integral(x: &Q) -> bool {
    x.is_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn min_q(a: &Q, b: &Q) -> Q {
    if a <= b {
        *a
    } else {
        *b
    }
}

pub fn max_q(a: &Q, b: &Q) -> Q {
    if a >= b {
        *a
    } else {
        *b
    }
}

/// Positive part `max{0, x}`.
pub fn pos(x: Q) -> Q {
    if x.is_positive() {
        x
    } else {
        Q::zero()
    }
}

/// Least common multiple of the denominators of `xs`.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Q>) -> i128 {
    xs.into_iter().fold(1i128, |acc, x| acc.lcm(x.denom()))
}

/// `p/q` or `p` for integers; the inverse of [`parse_q`].
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid number `{0}`")]
pub struct ParseNumberError(pub String);

/// Accepts integers, `p/q` ratios and finite decimals (`2.25`), all converted exactly.
pub fn parse_q(s: &str) -> Result<Q, ParseNumberError> {
    let err = || ParseNumberError(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| err())?;
        let d: i128 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, dec)) = s.split_once('.') {
        if dec.is_empty() || !dec.bytes().all(|b| b.is_ascii_digit()) || dec.len() > 30 {
            return Err(err());
        }
        let negative = int.starts_with('-');
        let whole: i128 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| err())?
        };
        let scale = 10i128.pow(dec.len() as u32);
        let digits: i128 = dec.parse().map_err(|_| err())?;
        let magnitude = whole.abs() * scale + digits;
        let numer = if negative { -magnitude } else { magnitude };
        return Ok(Q::new(numer, scale));
    }
    s.parse::<i128>().map(Q::from_integer).map_err(|_| err())
}

/// Arc or vertex capacity: a nonnegative rational or infinity.
///
/// `Infinite` orders above every finite value and absorbs subtraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cap {
    Finite(Q),
    Infinite,
}

impl Cap {
    pub fn zero() -> Cap {
        Cap::Finite(Q::zero())
    }

    pub fn int(n: i128) -> Cap {
        Cap::Finite(q(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Cap::Infinite)
    }

    pub fn finite(&self) -> Option<Q> {
        match self {
            Cap::Finite(x) => Some(*x),
            Cap::Infinite => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Cap::Finite(x) => x.is_positive(),
            Cap::Infinite => true,
        }
    }

    /// `self - x`, saturating at infinity.
    pub fn minus(&self, x: &Q) -> Cap {
        match self {
            Cap::Finite(c) => Cap::Finite(c - x),
            Cap::Infinite => Cap::Infinite,
        }
    }

    pub fn plus(&self, x: &Q) -> Cap {
        match self {
            Cap::Finite(c) => Cap::Finite(c + x),
            Cap::Infinite => Cap::Infinite,
        }
    }

    /// True when `x <= self`.
    pub fn admits(&self, x: &Q) -> bool {
        match self {
            Cap::Finite(c) => x <= c,
            Cap::Infinite => true,
        }
    }

    pub fn min(self, other: Cap) -> Cap {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl From<Q> for Cap {
    fn from(x: Q) -> Cap {
        Cap::Finite(x)
    }
}

impl PartialOrd for Cap {
    fn partial_cmp(&self, other: &Cap) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cap {
    fn cmp(&self, other: &Cap) -> Ordering {
        match (self, other) {
            (Cap::Finite(a), Cap::Finite(b)) => a.cmp(b),
            (Cap::Finite(_), Cap::Infinite) => Ordering::Less,
            (Cap::Infinite, Cap::Finite(_)) => Ordering::Greater,
            (Cap::Infinite, Cap::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cap::Finite(x) => f.write_str(&format_q(x)),
            Cap::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Cap {
    type Err = ParseNumberError;

    fn from_str(s: &str) -> Result<Cap, ParseNumberError> {
        if s == "inf" {
            Ok(Cap::Infinite)
        } else {
            parse_q(s).map(Cap::Finite)
        }
    }
}
