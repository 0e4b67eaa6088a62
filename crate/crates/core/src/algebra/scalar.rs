//! Scalar abstraction shared by the polynomial and matrix code.
//!
//! Everything in this crate that does linear algebra is written against
//! [`Field`], so the same elimination routines run over exact rationals
//! (`BigRational`, `Ratio<i64>`) and over word-sized prime fields ([`Fp`]).

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, NumAssignRef, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A commutative field with exact equality.
///
/// `is_zero` must be exact: the pivoting code treats any nonzero value as
/// invertible.
pub trait Field: NumAssignRef + Neg<Output = Self> + Clone + fmt::Debug + Send + Sync {
    fn from_i64(v: i64) -> Self;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

impl Field for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

impl Field for Ratio<i128> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
}

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a plain decimal integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Wire format: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact conversion to `i64`, if the value is an integer in range.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.denom().is_one() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Least common multiple of the denominators of `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales a rational vector to a primitive integer vector (gcd 1, first
/// nonzero entry positive). Returns the integer vector and the positive
/// factor `f` with `vector = f * primitive`.
pub fn primitive_integer_vector(v: &[Rational]) -> Option<(Vec<BigInt>, Rational)> {
    let lead = v.iter().find(|x| !x.is_zero())?;
    let den = common_denominator(v);
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    for x in ints.iter_mut() {
        *x /= &g;
    }
    let mut factor = Rational::new(g, den);
    if lead.is_negative() {
        for x in ints.iter_mut() {
            *x = -x.clone();
        }
        factor = -factor;
    }
    Some((ints, factor))
}

// ---------------------------------------------------------------------------
// Prime field

/// Element of Z/pZ for a runtime prime `p < 2^63`.
///
/// The modulus travels with the value; mixing moduli is a logic error and
/// panics in debug builds. `Zero`/`One` produce modulus-free constants that
/// adopt the modulus of whatever they are combined with.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: u64, modulus: u64) -> Self {
        Fp { value: value % modulus, modulus }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Reduces a rational modulo `p`; `None` when `p` divides the denominator.
    pub fn from_rational(r: &Rational, p: u64) -> Option<Self> {
        let den = bigint_mod(r.denom(), p);
        if den == 0 {
            return None;
        }
        let num = bigint_mod(r.numer(), p);
        Some(Fp::new(num, p) * Fp::new(den, p).inv())
    }

    fn pick_modulus(a: u64, b: u64) -> u64 {
        debug_assert!(a == 0 || b == 0 || a == b, "mixed moduli {a} and {b}");
        a.max(b)
    }

    fn pow(self, mut e: u64) -> Self {
        let m = self.modulus;
        let mut base = self.value as u128;
        let mut acc: u128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m as u128;
            }
            base = base * base % m as u128;
            e >>= 1;
        }
        Fp { value: acc as u64, modulus: m }
    }
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i128().expect("residue fits");
    if r < 0 {
        (r + p as i128) as u64
    } else {
        r as u64
    }
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        let m = Fp::pick_modulus(self.modulus, o.modulus);
        if m == 0 {
            // both are unreduced constants (0 or 1)
            return Fp { value: self.value + o.value, modulus: 0 };
        }
        let s = if m < (1 << 62) {
            (self.value + o.value) % m
        } else {
            ((self.value as u128 + o.value as u128) % m as u128) as u64
        };
        Fp { value: s, modulus: m }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        let m = Fp::pick_modulus(self.modulus, o.modulus);
        if m == 0 {
            assert!(self.value >= o.value, "negative modulus-free constant");
            return Fp { value: self.value - o.value, modulus: 0 };
        }
        Fp { value: (self.value % m + m - o.value % m) % m, modulus: m }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        if self.value == 0 {
            self
        } else {
            assert!(self.modulus != 0, "negating a modulus-free constant");
            Fp { value: self.modulus - self.value, modulus: self.modulus }
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        let m = Fp::pick_modulus(self.modulus, o.modulus);
        if m == 0 {
            return Fp { value: self.value * o.value, modulus: 0 };
        }
        let p = if m < (1 << 32) {
            self.value * o.value % m
        } else {
            ((self.value as u128 * o.value as u128) % m as u128) as u64
        };
        Fp { value: p, modulus: m }
    }
}

impl Div for Fp {
    type Output = Fp;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Fp) -> Fp {
        self * o.inv()
    }
}

impl Rem for Fp {
    type Output = Fp;
    fn rem(self, _o: Fp) -> Fp {
        Fp { value: 0, modulus: self.modulus }
    }
}

macro_rules! fp_assign {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for Fp {
            fn $method(&mut self, o: Fp) {
                *self = *self $op o;
            }
        }
        impl<'a> $tr<&'a Fp> for Fp {
            fn $method(&mut self, o: &'a Fp) {
                *self = *self $op *o;
            }
        }
    };
}
fp_assign!(AddAssign, add_assign, +);
fp_assign!(SubAssign, sub_assign, -);
fp_assign!(MulAssign, mul_assign, *);
fp_assign!(DivAssign, div_assign, /);
fp_assign!(RemAssign, rem_assign, %);

impl Zero for Fp {
    fn zero() -> Self {
        Fp { value: 0, modulus: 0 }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp { value: 1, modulus: 0 }
    }
}

impl Num for Fp {
    type FromStrRadixErr = std::num::ParseIntError;
    fn from_str_radix(s: &str, radix: u32) -> std::result::Result<Self, Self::FromStrRadixErr> {
        Ok(Fp { value: u64::from_str_radix(s, radix)?, modulus: 0 })
    }
}

impl Field for Fp {
    fn from_i64(v: i64) -> Self {
        assert!(v >= 0, "negative constants need a modulus");
        Fp { value: v as u64, modulus: 0 }
    }

    fn inv(&self) -> Self {
        assert!(self.value != 0, "inverse of zero in Z/{}", self.modulus);
        assert!(self.modulus != 0, "inverse of a modulus-free constant");
        self.pow(self.modulus - 2)
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = Fp { value: a, modulus: n }.pow(d).value;
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes just below `2^62`, in decreasing order.
pub fn large_primes() -> impl Iterator<Item = u64> {
    let mut candidate = (1u64 << 62) - 1;
    std::iter::from_fn(move || {
        while !is_prime_u64(candidate) {
            candidate -= 2;
        }
        let p = candidate;
        candidate -= 2;
        Some(p)
    })
}

/// Rational reconstruction of `a mod m`: the unique `p/q` with
/// `|p|, q <= sqrt(m/2)` and `p ≡ a q (mod m)`, if one exists.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if r1.gcd(&t1) != BigInt::one() {
        return None;
    }
    if t1.sign() == Sign::Minus {
        r1 = -r1;
        t1 = -t1;
    }
    Some(Rational::new(r1, t1))
}
