//! Integer money arithmetic backing the cost metrics.
//!
//! Transaction amounts are held as whole micro-units so sums are exact and
//! order-independent. Cost totals carry two further decimal digits
//! ("ticks") so products with multipliers quantized to hundredths — like
//! the 2.40 missed-fraud multiplier — stay exact integers.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// Micro-units per currency unit.
pub const MICROS_PER_UNIT: i64 = 1_000_000;

/// Cost ticks per micro-unit.
const TICKS_PER_MICRO: i128 = 100;
/// Cost ticks per currency unit.
const TICKS_PER_UNIT: i128 = TICKS_PER_MICRO * MICROS_PER_UNIT as i128;

/// A monetary amount in integer micro-units.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Money(i64);

impl Money {
    pub const ZERO: Money = Money(0);

    /// Quantizes a currency amount to the nearest micro-unit.
    pub fn from_units(units: f64) -> Money {
        Money((units * MICROS_PER_UNIT as f64).round() as i64)
    }

    pub const fn from_micros(micros: i64) -> Money {
        Money(micros)
    }

    pub const fn micros(self) -> i64 {
        self.0
    }

    pub fn as_units(self) -> f64 {
        self.0 as f64 / MICROS_PER_UNIT as f64
    }

    /// Exact decimal rendering with trailing zeros trimmed: `149.62`, `-3`.
    pub fn to_decimal_string(self) -> String {
        decimal_string(self.0 as i128, MICROS_PER_UNIT as i128)
    }

    /// Parses an exact decimal string (at most six fractional digits).
    pub fn parse_decimal(text: &str) -> Option<Money> {
        let micros = parse_decimal(text, MICROS_PER_UNIT as i128)?;
        i64::try_from(micros).ok().map(Money)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        self.0 += rhs.0;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0 - rhs.0)
    }
}

impl Neg for Money {
    type Output = Money;
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        Money(iter.map(|m| m.0).sum())
    }
}

/// A fraud-cost total in integer ticks (hundredths of a micro-unit).
/// Negative totals are net savings.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(i128);

impl Cost {
    pub const ZERO: Cost = Cost(0);

    pub const fn from_ticks(ticks: i128) -> Cost {
        Cost(ticks)
    }

    pub const fn ticks(self) -> i128 {
        self.0
    }

    /// Exact lift of a money amount into cost ticks.
    pub fn from_money(amount: Money) -> Cost {
        Cost(amount.micros() as i128 * TICKS_PER_MICRO)
    }

    pub fn from_units(units: f64) -> Cost {
        Cost((units * TICKS_PER_UNIT as f64).round() as i128)
    }

    pub fn as_units(self) -> f64 {
        self.0 as f64 / TICKS_PER_UNIT as f64
    }

    /// Nearest whole micro-unit, ties away from zero.
    pub fn micros_rounded(self) -> i64 {
        round_div(self.0, TICKS_PER_MICRO) as i64
    }

    /// Exact decimal rendering in currency units (up to 8 fractional digits).
    pub fn to_decimal_string(self) -> String {
        decimal_string(self.0, TICKS_PER_UNIT)
    }

    /// Parses an exact decimal string (at most eight fractional digits).
    pub fn parse_decimal(text: &str) -> Option<Cost> {
        parse_decimal(text, TICKS_PER_UNIT).map(Cost)
    }
}

impl fmt::Display for Cost {
    /// Currency units with two decimals, half away from zero: `-90.00`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cents = round_div(self.0, TICKS_PER_UNIT / 100);
        let sign = if cents < 0 { "-" } else { "" };
        let abs = cents.unsigned_abs();
        write!(f, "{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        self.0 += rhs.0;
    }
}

impl Sub for Cost {
    type Output = Cost;
    fn sub(self, rhs: Cost) -> Cost {
        Cost(self.0 - rhs.0)
    }
}

impl SubAssign for Cost {
    fn sub_assign(&mut self, rhs: Cost) {
        self.0 -= rhs.0;
    }
}

impl Neg for Cost {
    type Output = Cost;
    fn neg(self) -> Cost {
        Cost(-self.0)
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        Cost(iter.map(|c| c.0).sum())
    }
}

fn decimal_string(value: i128, denom: i128) -> String {
    let sign = if value < 0 { "-" } else { "" };
    let abs = value.unsigned_abs();
    let denom = denom.unsigned_abs();
    let whole = abs / denom;
    let frac = abs % denom;
    if frac == 0 {
        return format!("{sign}{whole}");
    }
    let width = denom.ilog10() as usize;
    let frac = format!("{frac:0width$}");
    format!("{sign}{whole}.{}", frac.trim_end_matches('0'))
}

fn parse_decimal(text: &str, denom: i128) -> Option<i128> {
    let text = text.trim();
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1i128, rest),
        None => (1i128, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    let width = denom.ilog10() as usize;
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if frac.len() > width || !whole.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let whole: i128 = if whole.is_empty() { 0 } else { whole.parse().ok()? };
    let mut frac_ticks: i128 = 0;
    if !frac.is_empty() {
        let scale = 10i128.pow((width - frac.len()) as u32);
        frac_ticks = frac.parse::<i128>().ok()? * scale;
    }
    Some(sign * (whole.checked_mul(denom)? + frac_ticks))
}

fn round_div(value: i128, denom: i128) -> i128 {
    let half = denom / 2;
    if value >= 0 {
        (value + half) / denom
    } else {
        -((-value + half) / denom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn money_decimal_round_trip() {
        for (units, text) in [
            (149.62, "149.62"),
            (0.0, "0"),
            (3.0, "3"),
            (0.000001, "0.000001"),
            (-25.5, "-25.5"),
        ] {
            let m = Money::from_units(units);
            assert_eq!(m.to_decimal_string(), text);
            assert_eq!(Money::parse_decimal(text), Some(m));
        }
    }

    #[test]
    fn money_quantizes_to_nearest_micro() {
        assert_eq!(Money::from_units(1.0000004).micros(), 1_000_000);
        assert_eq!(Money::from_units(1.0000006).micros(), 1_000_001);
    }

    #[test]
    fn cost_display_rounds_to_cents() {
        assert_eq!(Cost::from_units(-90.0).to_string(), "-90.00");
        assert_eq!(Cost::from_units(250.0).to_string(), "250.00");
        assert_eq!(Cost::from_ticks(1_499_999).to_string(), "0.01");
        assert_eq!(Cost::from_ticks(-1_499_999).to_string(), "-0.01");
    }

    #[test]
    fn cost_decimal_string_is_exact_and_parseable() {
        let c = Cost::from_money(Money::from_units(12.34)) + Cost::from_ticks(7);
        let text = c.to_decimal_string();
        assert_eq!(Cost::parse_decimal(&text), Some(c));
        assert_eq!(Cost::parse_decimal("-90"), Some(Cost::from_units(-90.0)));
    }

    #[test]
    fn cost_sums_are_order_independent() {
        let parts = [
            Cost::from_units(10.0),
            Cost::from_units(-100.01),
            Cost::from_ticks(3),
            Cost::from_units(240.0),
        ];
        let forward: Cost = parts.iter().copied().sum();
        let backward: Cost = parts.iter().rev().copied().sum();
        assert_eq!(forward, backward);
    }
}
