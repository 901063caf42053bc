//! Finite-field arithmetic for linear storage codes.
//!
//! Prime fields use modular arithmetic. Fields of order `2^m` (m ≤ 16)
//! use carry-less multiplication reduced by a fixed primitive polynomial.

use crate::error::{Error, Result};

/// Reduction polynomials for GF(2^m), indexed by `m`, with the `x^m` term
/// included. Each is primitive, so `x` generates the multiplicative group.
pub const BINARY_POLYNOMIALS: [u32; 17] = [
    0,       // unused
    0x3,     // x + 1
    0x7,     // x^2 + x + 1
    0xB,     // x^3 + x + 1
    0x13,    // x^4 + x + 1
    0x25,    // x^5 + x^2 + 1
    0x43,    // x^6 + x + 1
    0x89,    // x^7 + x^3 + 1
    0x11D,   // x^8 + x^4 + x^3 + x^2 + 1
    0x211,   // x^9 + x^4 + 1
    0x409,   // x^10 + x^3 + 1
    0x805,   // x^11 + x^2 + 1
    0x1053,  // x^12 + x^6 + x^4 + x + 1
    0x201B,  // x^13 + x^4 + x^3 + x + 1
    0x4443,  // x^14 + x^10 + x^6 + x + 1
    0x8003,  // x^15 + x + 1
    0x1100B, // x^16 + x^12 + x^3 + x + 1
];

pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Prime(u32),
    Binary { m: u32 },
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Field of the given order. Order 2 is treated as the prime field.
    pub fn with_order(order: u64) -> Result<Self> {
        if !(2..=MAX_FIELD_ORDER).contains(&order) {
            return Err(Error::UnsupportedField(order));
        }
        if is_prime(order) {
            return Ok(Field::Prime(order as u32));
        }
        if order.is_power_of_two() {
            return Ok(Field::Binary {
                m: order.trailing_zeros(),
            });
        }
        Err(Error::UnsupportedField(order))
    }

    pub fn order(&self) -> u64 {
        match *self {
            Field::Prime(p) => p as u64,
            Field::Binary { m } => 1 << m,
        }
    }

    /// Maps an integer into the field: reduced mod `p` for prime fields,
    /// taken as a bit pattern (and range-checked) for binary fields.
    pub fn element(&self, value: i64) -> Result<u32> {
        match *self {
            Field::Prime(p) => Ok(value.rem_euclid(p as i64) as u32),
            Field::Binary { m } => {
                if value < 0 || value >= (1i64 << m) {
                    Err(Error::InvalidCode(format!(
                        "entry {value} is not an element of GF(2^{m})"
                    )))
                } else {
                    Ok(value as u32)
                }
            }
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        match *self {
            Field::Prime(p) => ((a as u64 + b as u64) % p as u64) as u32,
            Field::Binary { .. } => a ^ b,
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        match *self {
            Field::Prime(p) => {
                if a == 0 {
                    0
                } else {
                    p - a
                }
            }
            Field::Binary { .. } => a,
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match *self {
            Field::Prime(p) => ((a as u64 * b as u64) % p as u64) as u32,
            Field::Binary { m } => {
                let poly = BINARY_POLYNOMIALS[m as usize];
                let mut acc: u32 = 0;
                let mut a = a;
                let mut b = b;
                while b != 0 {
                    if b & 1 == 1 {
                        acc ^= a;
                    }
                    b >>= 1;
                    a <<= 1;
                    if a & (1 << m) != 0 {
                        a ^= poly;
                    }
                }
                acc
            }
        }
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.order() - 2))
    }
}
