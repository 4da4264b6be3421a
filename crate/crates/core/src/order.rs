//! The Sharkovsky ordering
//! `3 ≺ 5 ≺ 7 ≺ ... ≺ 2·3 ≺ 2·5 ≺ ... ≺ 2²·3 ≺ ... ≺ 2³ ≺ 2² ≺ 2 ≺ 1`
//! and the period arithmetic of iterates.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_integer::Integer;

use crate::error::{Error, Result};

/// `n = 2^two_exponent · odd_part` with `odd_part` odd.
///
/// `Ord` on keys is the Sharkovsky order: `a < b` iff `a ≺ b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SharkovskyKey {
    pub two_exponent: u32,
    pub odd_part: u64,
}

impl SharkovskyKey {
    pub fn value(&self) -> Option<u64> {
        1u64.checked_shl(self.two_exponent)
            .and_then(|p| p.checked_mul(self.odd_part))
    }

    pub fn is_power_of_two(&self) -> bool {
        self.odd_part == 1
    }
}

impl Ord for SharkovskyKey {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_power_of_two(), other.is_power_of_two()) {
            (false, false) => {
                (self.two_exponent, self.odd_part).cmp(&(other.two_exponent, other.odd_part))
            }
            (false, true) => Ordering::Less,
            (true, false) => Ordering::Greater,
            (true, true) => other.two_exponent.cmp(&self.two_exponent),
        }
    }
}

impl PartialOrd for SharkovskyKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Panics on `n == 0`.
pub fn decompose(n: u64) -> SharkovskyKey {
    assert!(n >= 1, "periods are positive");
    let two_exponent = n.trailing_zeros();
    SharkovskyKey {
        two_exponent,
        odd_part: n >> two_exponent,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precedence {
    Precedes,
    Equal,
    Succeeds,
}

impl Precedence {
    pub fn as_str(self) -> &'static str {
        match self {
            Precedence::Precedes => "precedes",
            Precedence::Equal => "equal",
            Precedence::Succeeds => "succeeds",
        }
    }
}

pub fn sharkovsky_compare(m: u64, n: u64) -> Precedence {
    match decompose(m).cmp(&decompose(n)) {
        Ordering::Less => Precedence::Precedes,
        Ordering::Equal => Precedence::Equal,
        Ordering::Greater => Precedence::Succeeds,
    }
}

/// Strict `m ≺ n`.
pub fn precedes(m: u64, n: u64) -> bool {
    sharkovsky_compare(m, n) == Precedence::Precedes
}

/// A period-`m` point forces a period-`n` point: `m = n` or `m ≺ n`.
pub fn forces(m: u64, n: u64) -> bool {
    m == n || precedes(m, n)
}

pub fn forced_periods_upto(m: u64, upto: u64) -> Vec<u64> {
    (1..=upto).filter(|&n| forces(m, n)).collect()
}

/// Least period under `f^n` of a point of least period `m` under `f`.
pub fn iterate_least_period(m: u64, n: u64) -> u64 {
    m / m.gcd(&n)
}

/// Possible least periods under `f` of a point of least period `k` under
/// `f^n`: `{ kn/s : s | n, gcd(s, k) = 1 }`.
pub fn lift_least_periods(k: u64, n: u64) -> Result<BTreeSet<u64>> {
    let kn = k.checked_mul(n).ok_or(Error::Overflow)?;
    Ok((1..=n)
        .filter(|s| n.is_multiple_of(*s) && s.gcd(&k) == 1)
        .map(|s| kn / s)
        .collect())
}
