//! Exact scalars: arbitrary-precision integers and reduced rationals.
//!
//! Every geometric decision in this crate is made on these types; no
//! floating point participates anywhere. Rationals are kept gcd-reduced
//! with a positive denominator (the representation `num-rational`
//! maintains), so equality is structural and serialized certificates are
//! bit-reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer.
pub type Int = BigInt;
/// Reduced rational with positive denominator; zero is 0/1.
pub type Rat = BigRational;

/// Shorthand for small integer constants.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Shorthand for small rational constants. Panics on zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(Int::from(numer), Int::from(denom))
}

/// Parses the text encoding used in all file formats: `p/q`, or `p` when
/// the denominator is 1. Whitespace is not accepted.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let n: Int = numer
        .parse()
        .map_err(|_| Error::Parse(format!("invalid integer {numer:?}")))?;
    let d: Int = match denom {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("invalid integer {d:?}")))?,
        None => Int::from(1),
    };
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Formats a rational as `p/q`, or `p` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom() == &Int::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_int(s: &str) -> Result<Int> {
    s.parse()
        .map_err(|_| Error::Parse(format!("invalid integer {s:?}")))
}

/// Largest integer `m` with `m <= r`.
pub fn rat_floor(r: &Rat) -> Int {
    r.floor().to_integer()
}

/// Smallest integer `m` with `m >= r`.
pub fn rat_ceil(r: &Rat) -> Int {
    r.ceil().to_integer()
}

/// Largest integer `m >= 0` with `m^2 <= r`. Requires `r >= 0`.
///
/// Uses `floor(sqrt(p/q)) = floor(isqrt(p*q) / q)`, which is exact because
/// `floor(floor(x)/q) = floor(x/q)` for integer `q >= 1`.
pub fn floor_sqrt(r: &Rat) -> Int {
    assert!(!r.is_negative(), "floor_sqrt of negative rational");
    let pq = r.numer() * r.denom();
    pq.sqrt().div_floor(r.denom())
}

/// Smallest integer `m >= 0` with `m^2 >= r`. Requires `r >= 0`.
pub fn ceil_sqrt(r: &Rat) -> Int {
    let lo = floor_sqrt(r);
    if &Rat::from(lo.clone() * lo.clone()) >= r {
        lo
    } else {
        lo + 1
    }
}

/// `true` iff `m <= c + sqrt(t)`, decided exactly (`t >= 0`).
pub fn le_center_plus_sqrt(m: &Int, c: &Rat, t: &Rat) -> bool {
    let diff = Rat::from(m.clone()) - c;
    !diff.is_positive() || &(&diff * &diff) <= t
}

/// `true` iff `m >= c - sqrt(t)`, decided exactly (`t >= 0`).
pub fn ge_center_minus_sqrt(m: &Int, c: &Rat, t: &Rat) -> bool {
    let diff = c - Rat::from(m.clone());
    !diff.is_positive() || &(&diff * &diff) <= t
}

/// Largest integer `m` with `m <= c + sqrt(t)` for rational `c`, `t >= 0`.
pub fn floor_center_plus_sqrt(c: &Rat, t: &Rat) -> Int {
    let base = rat_floor(c) + floor_sqrt(t);
    // The true floor lies in [base, base + 1].
    let candidate = &base + 1;
    if le_center_plus_sqrt(&candidate, c, t) {
        candidate
    } else {
        base
    }
}

/// Smallest integer `m` with `m >= c - sqrt(t)` for rational `c`, `t >= 0`.
pub fn ceil_center_minus_sqrt(c: &Rat, t: &Rat) -> Int {
    let base = rat_ceil(c) - floor_sqrt(t);
    // The true ceiling lies in [base - 1, base].
    let candidate = &base - 1;
    if ge_center_minus_sqrt(&candidate, c, t) {
        candidate
    } else {
        base
    }
}
