//! The Bernoulli model: probabilities, predictive decisions, extended reals,
//! binary entropy and the Kullback-Leibler loss.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// A real number or `+∞`. Finite values are never NaN, so the order is total.
///
/// Multiplication is only defined by a nonnegative real scalar, with
/// `0 · ∞ = 0` (the `0 log 0 = 0` convention).
#[derive(Debug, Clone, Copy)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Wraps a float. `+∞` maps to [`ExtReal::PosInf`]; NaN and `-∞` are rejected.
    pub fn new(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::NaN)
        } else if x == f64::INFINITY {
            Ok(ExtReal::PosInf)
        } else if x == f64::NEG_INFINITY {
            Err(Error::domain("-inf is not an extended-real value"))
        } else {
            Ok(ExtReal::Finite(x))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::PosInf)
    }

    pub fn is_finite(self) -> bool {
        !self.is_infinite()
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::PosInf => None,
        }
    }

    /// Lossy conversion to `f64`, mapping `+∞` to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtReal::Finite(x) => x,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// `c · self` for `c >= 0`, with `0 · ∞ = 0`.
    pub fn scale(self, c: f64) -> ExtReal {
        debug_assert!(
            c >= 0.0,
            "extended reals are only scaled by nonnegative reals"
        );
        match self {
            _ if c == 0.0 => ExtReal::ZERO,
            ExtReal::Finite(x) => ExtReal::Finite(c * x),
            ExtReal::PosInf => ExtReal::PosInf,
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::PosInf, ExtReal::PosInf) => Ordering::Equal,
            (ExtReal::PosInf, ExtReal::Finite(_)) => Ordering::Greater,
            (ExtReal::Finite(_), ExtReal::PosInf) => Ordering::Less,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a
                .partial_cmp(b)
                .expect("finite extended reals are never NaN"),
        }
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        match (self, rhs) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::PosInf,
        }
    }
}

impl Add<f64> for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: f64) -> ExtReal {
        debug_assert!(rhs.is_finite());
        self + ExtReal::Finite(rhs)
    }
}

impl Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        iter.fold(ExtReal::ZERO, Add::add)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => fmt::Display::fmt(x, f),
            ExtReal::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(x) => s.serialize_f64(*x),
            ExtReal::PosInf => s.serialize_str("+inf"),
        }
    }
}

/// A probability in `[0, 1]`, validated at construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const HALF: Probability = Probability(0.5);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() {
            Err(Error::NaN)
        } else if !(0.0..=1.0).contains(&p) {
            Err(Error::OutOfRange(p))
        } else {
            Ok(Probability(p))
        }
    }

    /// For values computed internally that may overshoot `[0, 1]` by rounding.
    pub(crate) fn saturating(p: f64) -> Self {
        debug_assert!(!p.is_nan() && (-1e-9..=1.0 + 1e-9).contains(&p), "{p}");
        Probability(p.clamp(0.0, 1.0))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Probability {
        Probability(1.0 - self.0)
    }

    /// Strictly inside `(0, 1)`.
    pub fn is_interior(self) -> bool {
        self.0 > 0.0 && self.0 < 1.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Probability::new(p)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// An observation `x` or a future outcome `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinaryOutcome {
    Zero,
    One,
}

impl BinaryOutcome {
    pub const BOTH: [BinaryOutcome; 2] = [BinaryOutcome::Zero, BinaryOutcome::One];

    /// `p_θ(x) = θ^x (1 - θ)^(1 - x)`.
    pub fn likelihood(self, theta: Probability) -> f64 {
        match self {
            BinaryOutcome::Zero => 1.0 - theta.get(),
            BinaryOutcome::One => theta.get(),
        }
    }
}

/// A nonrandomized predictive rule: the estimate `δ0` used after observing
/// `x = 0` and `δ1` used after observing `x = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub delta0: Probability,
    pub delta1: Probability,
}

impl Decision {
    /// The maximum-likelihood plug-in rule `(0, 1)`.
    pub const MLE: Decision = Decision {
        delta0: Probability::ZERO,
        delta1: Probability::ONE,
    };

    /// The unique minimax rule `(1/5, 4/5)`.
    pub const MINIMAX: Decision = Decision {
        delta0: Probability(0.2),
        delta1: Probability(0.8),
    };

    pub fn new(delta0: f64, delta1: f64) -> Result<Self> {
        Ok(Decision {
            delta0: Probability::new(delta0)?,
            delta1: Probability::new(delta1)?,
        })
    }

    pub fn d0(&self) -> f64 {
        self.delta0.get()
    }

    pub fn d1(&self) -> f64 {
        self.delta1.get()
    }

    pub fn estimate(&self, x: BinaryOutcome) -> Probability {
        match x {
            BinaryOutcome::Zero => self.delta0,
            BinaryOutcome::One => self.delta1,
        }
    }

    /// Both components strictly inside `(0, 1)`.
    pub fn is_interior(&self) -> bool {
        self.delta0.is_interior() && self.delta1.is_interior()
    }

    /// Largest componentwise distance to `other`.
    pub fn max_abs_diff(&self, other: &Decision) -> f64 {
        (self.d0() - other.d0())
            .abs()
            .max((self.d1() - other.d1()).abs())
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.delta0, self.delta1)
    }
}

/// `p · ln(p / q)` with `0 ln(0/q) = 0` and `p ln(p/0) = +∞` for `p > 0`.
fn relative_entropy_term(p: f64, q: f64) -> ExtReal {
    if p == 0.0 {
        ExtReal::ZERO
    } else if q == 0.0 {
        ExtReal::PosInf
    } else {
        ExtReal::Finite(p * (p / q).ln())
    }
}

/// `-p ln p` with `0 ln 0 = 0`.
fn entropy_term(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

/// Binary entropy `S(θ) = -θ ln θ - (1-θ) ln(1-θ)` in nats.
pub fn binary_entropy(theta: Probability) -> f64 {
    entropy_term(theta.get()) + entropy_term(1.0 - theta.get())
}

/// `D(Bernoulli(θ) || Bernoulli(δ))`, the loss of predicting with `δ` when the
/// truth is `θ`.
pub fn kl_bernoulli(theta: Probability, delta: Probability) -> ExtReal {
    let t = theta.get();
    let d = delta.get();
    if t == d {
        return ExtReal::ZERO;
    }
    let kl = relative_entropy_term(t, d) + relative_entropy_term(1.0 - t, 1.0 - d);
    // Each term may be negative but the sum is not; clip rounding noise.
    match kl {
        ExtReal::Finite(x) => ExtReal::Finite(x.max(0.0)),
        inf => inf,
    }
}
