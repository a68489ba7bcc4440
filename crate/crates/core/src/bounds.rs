//! Exact tabulation of the known bounds: lower bounds on the maximum
//! relative volume `mv(d)` via literature seeds plus the product
//! recurrence, the difference-body/Minkowski upper bound, bounds on the
//! minimum number `dt(d)` of translational simplex orbits, and the
//! cube-triangulation size bounds.
//!
//! Everything integer-valued is computed with exact integers. The only
//! non-integer outputs are the log-ratio columns and the growth
//! constants, which use certified fixed-point evaluation (directed
//! rounding from both sides) so that every printed digit is stable under
//! precision changes.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::{binomial, Integer};
use num_traits::{pow, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ceil_sqrt, Int, Rat};
use crate::hadamard::hadamard_relative_volume;

/// Decimal places printed in the ratio columns.
pub const RATIO_DECIMALS: u32 = 6;
/// Default certified precision (fractional bits) for ratio evaluation.
pub const RATIO_FRAC_BITS: u32 = 64;
/// Asymptotic upper growth constant for cube triangulations, reported as
/// table metadata only.
pub const CUBE_UPPER_GROWTH: &str = "0.816";

/// Where a lower-bound table value comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundSource {
    /// A literature value, by seed name (`mv5`, `ryshkov`, ...).
    Seed(&'static str),
    /// Carried over from dimension `d - 1`.
    Monotone,
    /// Product split `lb(a) * lb(b)` with `a <= b`.
    Product(usize, usize),
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundSource::Seed(name) => write!(f, "seed-{name}"),
            BoundSource::Monotone => write!(f, "monotone"),
            BoundSource::Product(a, b) => write!(f, "product({a},{b})"),
        }
    }
}

/// One entry of the lower-bound table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub value: Int,
    pub source: BoundSource,
}

/// Literature seeds available at dimension `d`, in tie-break precedence
/// order: known small values, then the linear constructions, then the
/// Hadamard formula, then the Leech value.
fn seeds(d: usize) -> Vec<(&'static str, Int)> {
    let mut out = Vec::new();
    match d {
        1 => out.push(("mv1", Int::one())),
        2 => out.push(("mv2", Int::one())),
        3 => out.push(("mv3", Int::one())),
        4 => out.push(("mv4", Int::one())),
        5 => out.push(("mv5", Int::from(2))),
        6 => out.push(("mv6", Int::from(3))),
        _ => {}
    }
    if d >= 3 {
        out.push(("ryshkov", Int::from((d - 1) / 2)));
    }
    if d >= 4 {
        out.push(("erdahl-rybnikov", Int::from(d - 3)));
    }
    if d >= 3 && (d + 1).is_power_of_two() {
        let value = hadamard_relative_volume(d).expect("d = 2^n - 1 is odd and divisible");
        out.push(("hadamard", value));
    }
    if d == 24 {
        out.push(("leech", Int::from(20480)));
    }
    out
}

/// Lower bounds `lb(1..=dmax)` on `mv(d)`:
/// `lb(d) = max { seeds(d), lb(d-1), max_{a+b=d} lb(a) * lb(b) }`,
/// with ties resolved by precedence seed > monotone > product and, among
/// product splits, by the smallest `a`.
pub fn mv_lower_table(dmax: usize) -> Vec<LowerBound> {
    assert!(dmax >= 1);
    let mut table: Vec<LowerBound> = Vec::with_capacity(dmax);
    for d in 1..=dmax {
        let mut best: Option<LowerBound> = None;
        let mut offer = |value: Int, source: BoundSource| {
            let better = best.as_ref().is_none_or(|b| value > b.value);
            if better {
                best = Some(LowerBound { value, source });
            }
        };
        for (name, value) in seeds(d) {
            if value.is_positive() {
                offer(value, BoundSource::Seed(name));
            }
        }
        if d >= 2 {
            offer(table[d - 2].value.clone(), BoundSource::Monotone);
        }
        for a in 1..=d / 2 {
            let b = d - a;
            offer(
                &table[a - 1].value * &table[b - 1].value,
                BoundSource::Product(a, b),
            );
        }
        table.push(best.expect("every dimension has at least one candidate"));
    }
    table
}

fn factorial(n: usize) -> Int {
    (1..=n).map(Int::from).fold(Int::one(), |acc, k| acc * k)
}

/// `floor(2^d * d! / binomial(2d, d))`: the difference-body/Minkowski
/// upper bound on `mv(d)`.
pub fn mv_upper(d: usize) -> Int {
    assert!(d >= 1);
    let numer = pow(Int::from(2), d) * factorial(d);
    numer / binomial(Int::from(2 * d), Int::from(d))
}

/// `ceil(binomial(2d, d) / 2^d)`: the volume lower bound on the number of
/// translational simplex orbits in any Delone triangulation.
pub fn dt_lower(d: usize) -> Int {
    assert!(d >= 1);
    binomial(Int::from(2 * d), Int::from(d)).div_ceil(&pow(Int::from(2), d))
}

/// Upper bounds on `dt` extended from `seeds` by the submultiplicative
/// combiner `dt(a + b) <= binomial(a + b, a) * dt(a) * dt(b)`, minimized
/// over all splits. With only the trivial seed `{1 -> 1}` this yields
/// `dt_ub(d) = d!`.
pub fn dt_combine(seeds: &BTreeMap<usize, Int>, dmax: usize) -> Result<Vec<Int>> {
    if seeds.is_empty() {
        return Err(Error::Invalid("empty seed map".into()));
    }
    if !seeds.contains_key(&1) {
        return Err(Error::Invalid("seed map must cover d = 1".into()));
    }
    if seeds.values().any(|v| !v.is_positive()) {
        return Err(Error::Invalid("seed values must be positive".into()));
    }
    let mut table: Vec<Int> = Vec::with_capacity(dmax);
    for d in 1..=dmax {
        let mut best: Option<Int> = seeds.get(&d).cloned();
        for a in 1..=d / 2 {
            let b = d - a;
            let split = binomial(Int::from(d), Int::from(a)) * &table[a - 1] * &table[b - 1];
            if best.as_ref().is_none_or(|v| split < *v) {
                best = Some(split);
            }
        }
        table.push(best.expect("d = 1 is seeded"));
    }
    Ok(table)
}

/// Lower bounds `t_lb(2..=dmax)` on the size of a cube triangulation:
/// `ceil( d! * 6^{d/2} / (2 * (d+1)^{(d+1)/2}) )`, fixed exactly by
/// comparing squared integers (`ceil(x) = ceil_sqrt(x²)` for `x > 0`).
pub fn cube_bounds(dmax: usize) -> Vec<Int> {
    assert!(dmax >= 2);
    (2..=dmax)
        .map(|d| {
            let numer = pow(Rat::from(factorial(d)), 2) * pow(Rat::from(Int::from(6)), d);
            let denom = Rat::from(Int::from(4)) * pow(Rat::from(Int::from(d + 1)), d + 1);
            ceil_sqrt(&(numer / denom))
        })
        .collect()
}

/// Integer `r` with `r / 2^frac_bits <= log2(n)` (`round_up = false`) or
/// `>= log2(n)` (`round_up = true`), by squaring a directed-rounded
/// fixed-point mantissa.
fn log2_directed(n: &Int, frac_bits: u32, round_up: bool) -> Int {
    assert!(n.is_positive());
    let k = n.bits() - 1; // floor(log2 n)
    let work = 2 * frac_bits as u64 + 16;
    let scale = Int::one() << work;
    let bound = &scale * Int::from(2);
    let div = |v: Int, by: &Int| -> Int {
        if round_up {
            let (q, r) = v.div_rem(by);
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        } else {
            v.div_floor(by)
        }
    };
    // mantissa n / 2^k in [1, 2) at scale 2^work
    let mut x = div(n << work, &(Int::one() << k));
    let mut result = Int::from(k);
    for _ in 0..frac_bits {
        result <<= 1;
        x = div(&x * &x, &scale);
        if x >= bound {
            result += 1;
            x = div(x, &Int::from(2));
        }
    }
    result
}

/// Certified bracket of `log2(v) / (d * log2(d))` at scale `2^frac_bits`.
fn ratio_interval(v: &Int, d: usize, frac_bits: u32) -> (Int, Int) {
    let v_lo = log2_directed(v, frac_bits, false);
    let v_hi = log2_directed(v, frac_bits, true);
    let d_lo = log2_directed(&Int::from(d), frac_bits, false) * Int::from(d);
    let d_hi = log2_directed(&Int::from(d), frac_bits, true) * Int::from(d);
    debug_assert!(d_lo.is_positive(), "ratios need d >= 2");
    let scale = Int::one() << frac_bits;
    let lo = (v_lo * &scale).div_floor(&d_hi);
    let hi = {
        let (q, r) = (v_hi * &scale).div_rem(&d_lo);
        if r.is_zero() {
            q
        } else {
            q + 1
        }
    };
    (lo, hi)
}

/// Smallest-base perfect-power decomposition `n = base^exp` with `base`
/// itself not a perfect power.
fn perfect_power_base(n: &Int) -> (Int, usize) {
    debug_assert!(n >= &Int::from(2));
    let max_exp = n.bits() as u32; // 2^e <= n bounds e
    for e in (2..=max_exp).rev() {
        let root = n.nth_root(e);
        if pow(root.clone(), e as usize) == *n {
            let (base, inner) = perfect_power_base(&root);
            return (base, inner * e as usize);
        }
    }
    (n.clone(), 1)
}

/// `log2(v) / (d * log2 d)` as an exact rational, when one exists.
/// That happens exactly when `v = 1` or `v` and `d` are powers of a
/// common integer base; otherwise the ratio is irrational.
fn exact_ratio(v: &Int, d: usize) -> Option<Rat> {
    if v.is_one() {
        return Some(Rat::zero());
    }
    let (vb, ve) = perfect_power_base(v);
    let (db, de) = perfect_power_base(&Int::from(d));
    (vb == db).then(|| Rat::new(Int::from(ve), Int::from(d * de)))
}

fn format_scaled_decimal(scaled: &Int, decimals: u32) -> String {
    let base = pow(Int::from(10), decimals as usize);
    let (int_part, frac_part) = scaled.div_rem(&base);
    let sign = if scaled.is_negative() && int_part.is_zero() {
        "-"
    } else {
        ""
    };
    format!(
        "{sign}{int_part}.{frac:0>width$}",
        frac = frac_part.abs(),
        width = decimals as usize
    )
}

/// Rounds an exact rational to `decimals` places, half away from zero.
fn round_rat_decimal(r: &Rat, decimals: u32) -> String {
    let base = pow(Int::from(10), decimals as usize);
    let scaled = r * Rat::from(base);
    let two = Int::from(2);
    let shifted = (scaled.numer() * &two + scaled.denom()) / (scaled.denom() * &two);
    format_scaled_decimal(&shifted, decimals)
}

/// The printed ratio column `log2(v) / (d * log2 d)` at `decimals`
/// places, certified: on the exact-rational path the rounding is exact;
/// otherwise the fixed-point bracket is tightened until both endpoints
/// round to the same digits.
pub fn ratio_decimal(v: &Int, d: usize, decimals: u32, frac_bits: u32) -> String {
    assert!(d >= 2, "log-ratio columns start at d = 2");
    assert!(v.is_positive());
    if let Some(exact) = exact_ratio(v, d) {
        return round_rat_decimal(&exact, decimals);
    }
    let ten_pow = pow(Int::from(10), decimals as usize);
    let mut bits = frac_bits;
    loop {
        let (lo, hi) = ratio_interval(v, d, bits);
        let scale = Int::one() << bits;
        let two = Int::from(2);
        // floor(x * 10^decimals + 1/2) at both endpoints
        let round = |end: &Int| (end * &ten_pow * &two + &scale).div_floor(&(&scale * &two));
        let (a, b) = (round(&lo), round(&hi));
        if a == b {
            return format_scaled_decimal(&a, decimals);
        }
        bits *= 2;
        assert!(
            bits <= 4096,
            "ratio failed to certify; value sits on a rounding boundary"
        );
    }
}

/// Verified growth constants: `round(2^(1/5), 4) = 1.1487` and
/// `round(20480^(1/24), 4) = 1.5123`.
pub fn growth_constants() -> (String, String) {
    (
        nth_root_decimal(&Int::from(2), 5, 4),
        nth_root_decimal(&Int::from(20480), 24, 4),
    )
}

/// Log-ratio columns `log2(bound) / (d log2 d)` for both bound sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRow {
    pub d: usize,
    pub lower: String,
    pub upper: String,
}

/// The bracket view of the bound table: per-row certified ratio columns
/// plus the verified growth constants of the two exponential families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioBracket {
    pub rows: Vec<RatioRow>,
    /// `2^(1/5)` at 4 decimals: the growth base from stacking the d = 5
    /// value.
    pub mv5_growth: String,
    /// `20480^(1/24)` at 4 decimals: the growth base from stacking the
    /// d = 24 value.
    pub leech_growth: String,
}

pub fn ratio_bracket(dmax: usize) -> RatioBracket {
    assert!(dmax >= 2);
    let lower = mv_lower_table(dmax);
    let rows = (2..=dmax)
        .map(|d| RatioRow {
            d,
            lower: ratio_decimal(&lower[d - 1].value, d, RATIO_DECIMALS, RATIO_FRAC_BITS),
            upper: ratio_decimal(&mv_upper(d), d, RATIO_DECIMALS, RATIO_FRAC_BITS),
        })
        .collect();
    let (mv5_growth, leech_growth) = growth_constants();
    assert_eq!(mv5_growth, "1.1487");
    assert_eq!(leech_growth, "1.5123");
    RatioBracket {
        rows,
        mv5_growth,
        leech_growth,
    }
}

/// `round(base^(1/k) * 10^decimals)` (half up), computed exactly with
/// integer k-th roots: `m - 1/2 <= y  <=>  (2m - 1)^k <= 2^k * y^k`.
pub fn nth_root_decimal(base: &Int, k: u32, decimals: u32) -> String {
    assert!(base.is_positive() && k >= 1);
    let target = base * pow(Int::from(10), (k * decimals) as usize);
    let root = target.nth_root(k);
    let two_k = pow(Int::from(2), k as usize);
    let candidate = &root + 1;
    let rounded = if pow(&candidate * 2 - 1, k as usize) <= two_k * &target {
        candidate
    } else {
        root
    };
    format_scaled_decimal(&rounded, decimals)
}

/// One row of the merged bound table. Ratio and cube columns are defined
/// from `d = 2` on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTableRow {
    pub d: usize,
    pub mv_lower: Int,
    pub mv_lower_source: BoundSource,
    pub mv_upper: Int,
    pub lower_ratio: Option<String>,
    pub upper_ratio: Option<String>,
    pub dt_lower: Int,
    pub t_lower: Option<Int>,
}

/// The full table for `d = 1..=dmax` at the default certified precision.
pub fn bound_table(dmax: usize) -> Vec<BoundTableRow> {
    bound_table_with_bits(dmax, RATIO_FRAC_BITS)
}

pub fn bound_table_with_bits(dmax: usize, frac_bits: u32) -> Vec<BoundTableRow> {
    assert!(dmax >= 1);
    let lower = mv_lower_table(dmax);
    let cubes = if dmax >= 2 {
        cube_bounds(dmax)
    } else {
        Vec::new()
    };
    (1..=dmax)
        .map(|d| {
            let lb = &lower[d - 1];
            let ub = mv_upper(d);
            let (lower_ratio, upper_ratio, t_lower) = if d >= 2 {
                (
                    Some(ratio_decimal(&lb.value, d, RATIO_DECIMALS, frac_bits)),
                    Some(ratio_decimal(&ub, d, RATIO_DECIMALS, frac_bits)),
                    Some(cubes[d - 2].clone()),
                )
            } else {
                (None, None, None)
            };
            BoundTableRow {
                d,
                mv_lower: lb.value.clone(),
                mv_lower_source: lb.source.clone(),
                mv_upper: ub,
                lower_ratio,
                upper_ratio,
                dt_lower: dt_lower(d),
                t_lower,
            }
        })
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV rendering with the fixed column set; the source column is quoted
/// when it contains a comma (product splits).
pub fn table_to_csv(rows: &[BoundTableRow]) -> String {
    let mut out = String::from("d,mv_lower,mv_lower_source,mv_upper,lower_ratio,upper_ratio,dt_lower,t_lower\n");
    for row in rows {
        let cells = [
            row.d.to_string(),
            row.mv_lower.to_string(),
            row.mv_lower_source.to_string(),
            row.mv_upper.to_string(),
            row.lower_ratio.clone().unwrap_or_default(),
            row.upper_ratio.clone().unwrap_or_default(),
            row.dt_lower.to_string(),
            row.t_lower.as_ref().map(Int::to_string).unwrap_or_default(),
        ];
        let line: Vec<String> = cells.iter().map(|c| csv_field(c)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}
