//! Prime fields, the rational field, and their scalars.
//!
//! A [`Scalar`] carries its field with it, so mixing elements of different
//! fields is detectable. Arithmetic between scalars of different fields is a
//! programming error and panics; every public constructor that accepts
//! user-supplied scalars (matrices, points) validates the field first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Smallest prime accepted for a working session (CLI prime lists, defaults).
pub const WORKING_PRIME_FLOOR: u64 = 1 << 20;

/// The built-in working primes, all just below 2^31.
pub const DEFAULT_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// Integer draws over the rationals are uniform in `[0, RATIONAL_SAMPLE_BOUND)`.
pub const RATIONAL_SAMPLE_BOUND: u64 = 2_147_483_647;

/// The seedable generator used everywhere: ChaCha with 8 rounds.
///
/// Streams are portable across platforms, so a recorded seed replays
/// bit-for-bit.
pub type Rng = ChaCha8Rng;

/// Generator for trial `index` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, index: u64) -> Rng {
    Rng::seed_from_u64(seed.wrapping_add(index))
}

/// Deterministic Miller-Rabin, exact for every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The prime field F_p for an odd prime p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Any odd prime that fits comfortably in 63 bits.
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || p >= 1 << 63 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    /// A prime suitable for a working session: prime and at least 2^20.
    pub fn working(p: u64) -> Result<Self> {
        let field = Self::new(p)?;
        if p < WORKING_PRIME_FLOOR {
            return Err(Error::PrimeTooSmall {
                prime: p,
                floor: WORKING_PRIME_FLOOR,
            });
        }
        Ok(field)
    }

    pub fn defaults() -> Vec<PrimeField> {
        DEFAULT_PRIMES
            .iter()
            .map(|&p| Self::working(p).expect("built-in primes are prime"))
            .collect()
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    /// Inverse by Fermat; `None` for zero.
    pub fn inv(self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(pow_mod(a, self.p - 2, self.p))
        }
    }

    pub fn reduce_i128(self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    pub fn reduce_bigint(self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }

    /// Image of a rational number; `None` when p divides the denominator.
    pub fn reduce_rational(self, v: &BigRational) -> Option<u64> {
        let den = self.reduce_bigint(v.denom());
        let inv = self.inv(den)?;
        Some(self.mul(self.reduce_bigint(v.numer()), inv))
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// Which field a computation happens in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(PrimeField),
    Rational,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        Ok(FieldSpec::Prime(PrimeField::new(p)?))
    }

    pub fn as_prime(self) -> Option<PrimeField> {
        match self {
            FieldSpec::Prime(f) => Some(f),
            FieldSpec::Rational => None,
        }
    }

    pub fn is_rational(self) -> bool {
        matches!(self, FieldSpec::Rational)
    }

    /// Uniform draw used by the samplers: a residue in `[0, p)` over a prime
    /// field, an integer in `[0, RATIONAL_SAMPLE_BOUND)` over the rationals.
    pub(crate) fn draw(self, rng: &mut Rng) -> Scalar {
        match self {
            FieldSpec::Prime(field) => Scalar::Mod {
                value: rng.gen_range(0..field.p),
                field,
            },
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(
                rng.gen_range(0..RATIONAL_SAMPLE_BOUND),
            ))),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(p) => p.fmt(f),
            FieldSpec::Rational => f.write_str("Q"),
        }
    }
}

/// Uniform element of F_p drawn from `rng`.
pub fn random_scalar(field: FieldSpec, rng: &mut Rng) -> Result<Scalar> {
    match field {
        FieldSpec::Prime(_) => Ok(field.draw(rng)),
        FieldSpec::Rational => Err(Error::Unsupported(
            "uniform sampling over the rationals".into(),
        )),
    }
}

/// An element of a prime field (canonical representative in `[0, p)`) or a
/// rational number in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u64, field: PrimeField },
    Rational(BigRational),
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldSpec, v: i64) -> Self {
        match field {
            FieldSpec::Prime(f) => Scalar::Mod {
                value: f.reduce_i128(v as i128),
                field: f,
            },
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(v.into())),
        }
    }

    pub fn from_bigint(field: FieldSpec, v: &BigInt) -> Self {
        match field {
            FieldSpec::Prime(f) => Scalar::Mod {
                value: f.reduce_bigint(v),
                field: f,
            },
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
        }
    }

    /// `num / den` in the given field; fails when the denominator vanishes.
    pub fn from_ratio(field: FieldSpec, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        match field {
            FieldSpec::Prime(f) => {
                let d = f
                    .inv(f.reduce_i128(den as i128))
                    .ok_or_else(|| Error::InvalidInput(format!("{den} vanishes mod {}", f.p)))?;
                Ok(Scalar::Mod {
                    value: f.mul(f.reduce_i128(num as i128), d),
                    field: f,
                })
            }
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(num.into(), den.into()))),
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Mod { field, .. } => FieldSpec::Prime(*field),
            Scalar::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Mod { value, field } => field.inv(*value).map(|value| Scalar::Mod {
                value,
                field: *field,
            }),
            Scalar::Rational(q) if q.is_zero() => None,
            Scalar::Rational(q) => Some(Scalar::Rational(q.recip())),
        }
    }

    /// Canonical residue, for prime-field scalars.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Mod { .. } => None,
        }
    }

    fn zip_with(
        &self,
        other: &Scalar,
        modop: impl Fn(PrimeField, u64, u64) -> u64,
        ratop: impl Fn(&BigRational, &BigRational) -> BigRational,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Mod { value: a, field: f }, Scalar::Mod { value: b, field: g }) if f == g => {
                Scalar::Mod {
                    value: modop(*f, *a, *b),
                    field: *f,
                }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(ratop(a, b)),
            _ => panic!(
                "scalar field mismatch: {} vs {}",
                self.field(),
                other.field()
            ),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.zip_with(rhs, PrimeField::add, |a, b| a + b)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.zip_with(rhs, PrimeField::sub, |a, b| a - b)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.zip_with(rhs, PrimeField::mul, |a, b| a * b)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod { value, field } => Scalar::Mod {
                value: field.neg(*value),
                field: *field,
            },
            Scalar::Rational(q) => Scalar::Rational(-q),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, .. } => write!(f, "{value}"),
            Scalar::Rational(q) => write!(f, "{q}"),
        }
    }
}

/// Clears denominators of a rational vector and divides out the content,
/// giving the primitive integer vector on the same line through the origin
/// whose first nonzero entry is positive.
pub fn primitive_integers(values: &[BigRational]) -> Vec<BigInt> {
    let lcm = values
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut ints: Vec<BigInt> = values
        .iter()
        .map(|q| (q.numer() * &lcm) / q.denom())
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if !gcd.is_zero() {
        for v in &mut ints {
            *v /= &gcd;
        }
    }
    if ints
        .iter()
        .find(|v| !v.is_zero())
        .is_some_and(|v| v.is_negative())
    {
        for v in &mut ints {
            *v = -&*v;
        }
    }
    ints
}
