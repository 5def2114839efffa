//! Arithmetic in GF(2^w) for 2 <= w <= 8.
//!
//! Elements are stored in polynomial basis as the low `w` bits of a `u8`.
//! Every supported field uses a modulus for which `x` is primitive, so the
//! distinguished generator `alpha` is always the element `2`.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result, ValidationError};

/// A field element in polynomial basis, `0 <= value < q`.
pub type Symbol = u8;

pub const MIN_W: u32 = 2;
pub const MAX_W: u32 = 8;

/// Modulus polynomials, indexed by `w - MIN_W`. Bit `i` is the coefficient of `x^i`.
const MODULI: [u32; 7] = [
    0b111,       // x^2 + x + 1
    0b1011,      // x^3 + x + 1
    0b1_0011,    // x^4 + x + 1
    0b10_0101,   // x^5 + x^2 + 1
    0b100_0011,  // x^6 + x + 1
    0b1000_0011, // x^7 + x + 1
    0x11d,       // x^8 + x^4 + x^3 + x^2 + 1
];

static FIELDS: [OnceLock<Field>; 7] = [const { OnceLock::new() }; 7];

/// Log/antilog and full multiplication tables for one GF(2^w).
///
/// Instances are built once per extension degree and shared as `&'static`,
/// so matrices and codes can carry a field reference without lifetimes.
pub struct Field {
    w: u32,
    modulus: u32,
    q: usize,
    /// `exp[i] = alpha^i`, stored twice over so `exp[log a + log b]` needs no reduction.
    exp: Vec<Symbol>,
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<usize>,
    mul: Vec<Symbol>,
    inv: Vec<Symbol>,
}

impl Field {
    /// The shared field of size `2^w`.
    pub fn get(w: u32) -> Result<&'static Field> {
        if !(MIN_W..=MAX_W).contains(&w) {
            return Err(ValidationError::UnsupportedField(w).into());
        }
        let slot = &FIELDS[(w - MIN_W) as usize];
        Ok(slot.get_or_init(|| Field::build(w, MODULI[(w - MIN_W) as usize])))
    }

    fn build(w: u32, modulus: u32) -> Field {
        let q = 1usize << w;
        let order = q - 1;
        let mut exp = vec![0 as Symbol; 2 * order];
        let mut log = vec![0usize; q];
        let mut x: u32 = 1;
        for i in 0..order {
            exp[i] = x as Symbol;
            log[x as usize] = i;
            x <<= 1;
            if x & (1 << w) != 0 {
                x ^= modulus;
            }
        }
        debug_assert_eq!(x, 1, "x must be primitive for the chosen modulus");
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }

        let mut mul = vec![0 as Symbol; q * q];
        let mut inv = vec![0 as Symbol; q];
        for a in 1..q {
            for b in 1..q {
                mul[a * q + b] = exp[log[a] + log[b]];
            }
            inv[a] = exp[(order - log[a]) % order];
        }
        Field {
            w,
            modulus,
            q,
            exp,
            log,
            mul,
            inv,
        }
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, `2^w`.
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn alpha(&self) -> Symbol {
        2
    }

    /// Multiplicative order of `alpha`, which is `q - 1`.
    pub fn alpha_order(&self) -> usize {
        self.q - 1
    }

    pub fn contains(&self, a: Symbol) -> bool {
        (a as usize) < self.q
    }

    #[inline]
    pub fn add(&self, a: Symbol, b: Symbol) -> Symbol {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Symbol, b: Symbol) -> Symbol {
        self.mul[a as usize * self.q + b as usize]
    }

    /// Row of the multiplication table for a fixed left factor.
    #[inline]
    pub fn mul_row(&self, a: Symbol) -> &[Symbol] {
        let start = a as usize * self.q;
        &self.mul[start..start + self.q]
    }

    pub fn inv(&self, a: Symbol) -> Result<Symbol> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv[a as usize])
    }

    pub fn div(&self, a: Symbol, b: Symbol) -> Result<Symbol> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `alpha^e`, for any (possibly negative) exponent.
    #[inline]
    pub fn alpha_pow(&self, e: i64) -> Symbol {
        let order = self.alpha_order() as i64;
        self.exp[e.rem_euclid(order) as usize]
    }

    pub fn pow(&self, a: Symbol, e: u64) -> Symbol {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.alpha_order() as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// Discrete logarithm base `alpha`; `None` for zero.
    pub fn log(&self, a: Symbol) -> Option<usize> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Smallest `e >= 1` with `a^e = 1`.
    pub fn order(&self, a: Symbol) -> Result<usize> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.alpha_order();
        let mut x = a;
        let mut e = 1;
        while x != 1 {
            x = self.mul(x, a);
            e += 1;
            debug_assert!(e <= n);
        }
        Ok(e)
    }

    /// `dst[i] += c * src[i]`.
    #[inline]
    pub fn axpy(&self, dst: &mut [Symbol], c: Symbol, src: &[Symbol]) {
        if c == 0 {
            return;
        }
        let row = self.mul_row(c);
        for (d, &s) in dst.iter_mut().zip(src) {
            *d ^= row[s as usize];
        }
    }

    /// `v[i] *= c`.
    #[inline]
    pub fn scale(&self, v: &mut [Symbol], c: Symbol) {
        let row = self.mul_row(c);
        for x in v.iter_mut() {
            *x = row[*x as usize];
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#b}", self.w, self.modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.w == other.w
    }
}

impl Eq for Field {}
