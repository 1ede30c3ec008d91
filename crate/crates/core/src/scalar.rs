//! Exact coefficient rings: the p-local integers `Z_(p)` and the prime field `F_p`.
//!
//! Every scalar carries its prime. Mixing scalars of different primes is a
//! programming error and panics.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Which coefficient ring a scalar type lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// Integers localized at p.
    Local,
    /// The prime field.
    Field,
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Local => write!(f, "Z_(p)"),
            RingKind::Field => write!(f, "F_p"),
        }
    }
}

/// Common interface of the two coefficient rings.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const RING: RingKind;

    fn from_i64(n: i64, p: u64) -> Self;
    fn from_bigint(n: &BigInt, p: u64) -> Self;
    fn prime(&self) -> u64;
    fn is_zero(&self) -> bool;

    /// p-adic valuation; `None` for zero. Nonzero elements of `F_p` have valuation 0.
    fn valuation(&self) -> Option<u32>;

    /// Inverse when the element is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;

    /// Exact division by `p^k`, if the valuation allows it.
    fn div_p_pow(&self, k: u32) -> Option<Self>;

    /// Reduction modulo p.
    fn to_fp(&self) -> Fp;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;

    fn zero(p: u64) -> Self {
        Self::from_i64(0, p)
    }

    fn one(p: u64) -> Self {
        Self::from_i64(1, p)
    }

    fn is_one(&self) -> bool {
        *self == Self::one(self.prime())
    }

    fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// `p^k` in this ring (zero in `F_p` for `k > 0`).
    fn p_pow(k: u32, p: u64) -> Self {
        Self::from_bigint(&BigInt::from(p).pow(k), p)
    }

    /// `self += a * b`.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = self.add_ref(&a.mul_ref(b));
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.prime());
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }
}

/// Element of `F_p`, stored as its least non-negative residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    p: u64,
}

impl Fp {
    pub fn new(n: i64, p: u64) -> Self {
        let v = n.rem_euclid(p as i64) as u64;
        Fp { value: v, p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    fn check(&self, other: &Fp) {
        assert_eq!(self.p, other.p, "mixed primes in F_p arithmetic");
    }

    pub fn inverse(&self) -> Option<Fp> {
        if self.value == 0 {
            return None;
        }
        // Fermat: a^(p-2).
        let mut base = self.value;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, base, self.p);
            }
            base = mulmod(base, base, self.p);
            e >>= 1;
        }
        Some(Fp {
            value: acc,
            p: self.p,
        })
    }

    /// Lift to the canonical representative in `Z_(p)`.
    pub fn lift(&self) -> PLocal {
        PLocal::from_i64(self.value as i64, self.p)
    }
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        self.add_ref(&o)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        self.sub_ref(&o)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        self.mul_ref(&o)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: if self.value == 0 {
                0
            } else {
                self.p - self.value
            },
            p: self.p,
        }
    }
}

impl Scalar for Fp {
    const RING: RingKind = RingKind::Field;

    fn from_i64(n: i64, p: u64) -> Self {
        Fp::new(n, p)
    }

    fn from_bigint(n: &BigInt, p: u64) -> Self {
        let r = n.mod_floor(&BigInt::from(p));
        Fp {
            value: r.to_u64().expect("residue fits"),
            p,
        }
    }

    fn prime(&self) -> u64 {
        self.p
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn valuation(&self) -> Option<u32> {
        if self.value == 0 {
            None
        } else {
            Some(0)
        }
    }

    fn unit_inverse(&self) -> Option<Self> {
        self.inverse()
    }

    fn div_p_pow(&self, k: u32) -> Option<Self> {
        (k == 0 || self.value == 0).then_some(*self)
    }

    fn to_fp(&self) -> Fp {
        *self
    }

    #[inline]
    fn add_ref(&self, o: &Self) -> Self {
        self.check(o);
        let s = self.value + o.value;
        Fp {
            value: if s >= self.p { s - self.p } else { s },
            p: self.p,
        }
    }

    #[inline]
    fn sub_ref(&self, o: &Self) -> Self {
        self.check(o);
        let v = if self.value >= o.value {
            self.value - o.value
        } else {
            self.value + self.p - o.value
        };
        Fp {
            value: v,
            p: self.p,
        }
    }

    #[inline]
    fn mul_ref(&self, o: &Self) -> Self {
        self.check(o);
        Fp {
            value: mulmod(self.value, o.value, self.p),
            p: self.p,
        }
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        let prod = mulmod(a.value, b.value, self.p);
        let s = self.value + prod;
        self.value = if s >= self.p { s - self.p } else { s };
    }
}

/// Element of `Z_(p)`: a reduced fraction whose denominator is prime to p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLocal {
    num: BigInt,
    den: BigInt,
    p: u64,
}

/// Error raised when a fraction is not p-local.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{num}/{den} is not in Z_({p}): denominator divisible by p")]
pub struct NotLocal {
    pub num: BigInt,
    pub den: BigInt,
    pub p: u64,
}

impl PLocal {
    /// Builds `num/den`, failing when p divides the reduced denominator or `den == 0`.
    pub fn from_fraction(num: BigInt, den: BigInt, p: u64) -> Result<Self, NotLocal> {
        if den.is_zero() {
            return Err(NotLocal { num, den, p });
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_zero() {
            (num.clone(), den.clone())
        } else {
            (&num / &g, &den / &g)
        };
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        if n.is_zero() {
            d = BigInt::one();
        }
        if (&d % BigInt::from(p)).is_zero() {
            return Err(NotLocal { num, den, p });
        }
        Ok(PLocal { num: n, den: d, p })
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    fn reduced(num: BigInt, den: BigInt, p: u64) -> Self {
        PLocal::from_fraction(num, den, p).expect("Z_(p) is closed under ring operations")
    }

    fn check(&self, other: &PLocal) {
        assert_eq!(self.p, other.p, "mixed primes in Z_(p) arithmetic");
    }
}

impl fmt::Debug for PLocal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PLocal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Add for PLocal {
    type Output = PLocal;
    fn add(self, o: PLocal) -> PLocal {
        self.add_ref(&o)
    }
}

impl Sub for PLocal {
    type Output = PLocal;
    fn sub(self, o: PLocal) -> PLocal {
        self.sub_ref(&o)
    }
}

impl Mul for PLocal {
    type Output = PLocal;
    fn mul(self, o: PLocal) -> PLocal {
        self.mul_ref(&o)
    }
}

impl Neg for PLocal {
    type Output = PLocal;
    fn neg(self) -> PLocal {
        PLocal {
            num: -self.num,
            den: self.den,
            p: self.p,
        }
    }
}

impl Scalar for PLocal {
    const RING: RingKind = RingKind::Local;

    fn from_i64(n: i64, p: u64) -> Self {
        PLocal {
            num: BigInt::from(n),
            den: BigInt::one(),
            p,
        }
    }

    fn from_bigint(n: &BigInt, p: u64) -> Self {
        PLocal {
            num: n.clone(),
            den: BigInt::one(),
            p,
        }
    }

    fn prime(&self) -> u64 {
        self.p
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn valuation(&self) -> Option<u32> {
        if self.num.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p);
        let mut n = self.num.clone();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                return Some(v);
            }
            n = q;
            v += 1;
        }
    }

    fn unit_inverse(&self) -> Option<Self> {
        if self.valuation() != Some(0) {
            return None;
        }
        Some(PLocal::reduced(self.den.clone(), self.num.clone(), self.p))
    }

    fn div_p_pow(&self, k: u32) -> Option<Self> {
        if self.num.is_zero() {
            return Some(self.clone());
        }
        let pk = BigInt::from(self.p).pow(k);
        let (q, r) = self.num.div_rem(&pk);
        if r.is_zero() {
            Some(PLocal {
                num: q,
                den: self.den.clone(),
                p: self.p,
            })
        } else {
            None
        }
    }

    fn to_fp(&self) -> Fp {
        let p = BigInt::from(self.p);
        let n = Fp::from_bigint(&self.num, self.p);
        let d = Fp::from_bigint(&self.den.mod_floor(&p), self.p);
        n * d.inverse().expect("denominator is a unit")
    }

    fn add_ref(&self, o: &Self) -> Self {
        self.check(o);
        if o.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return o.clone();
        }
        if self.den.is_one() && o.den.is_one() {
            return PLocal {
                num: &self.num + &o.num,
                den: BigInt::one(),
                p: self.p,
            };
        }
        PLocal::reduced(
            &self.num * &o.den + &o.num * &self.den,
            &self.den * &o.den,
            self.p,
        )
    }

    fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&-o.clone())
    }

    fn mul_ref(&self, o: &Self) -> Self {
        self.check(o);
        if self.num.is_zero() || o.num.is_zero() {
            return PLocal::zero(self.p);
        }
        if self.den.is_one() && o.den.is_one() {
            return PLocal {
                num: &self.num * &o.num,
                den: BigInt::one(),
                p: self.p,
            };
        }
        PLocal::reduced(&self.num * &o.num, &self.den * &o.den, self.p)
    }
}

/// Checks that `p` is an odd prime.
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> PLocal {
        PLocal::from_fraction(BigInt::from(n), BigInt::from(d), 3).unwrap()
    }

    #[test]
    fn fractions_are_reduced_and_canonical() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(0, 5).denominator(), &BigInt::one());
        assert_eq!(q(1, -2), q(-1, 2));
        assert!(PLocal::from_fraction(BigInt::from(1), BigInt::from(3), 3).is_err());
        assert!(PLocal::from_fraction(BigInt::from(3), BigInt::from(3), 3).is_ok());
    }

    #[test]
    fn valuation_is_additive() {
        let a = q(18, 5);
        let b = q(-9, 7);
        assert_eq!(a.valuation(), Some(2));
        assert_eq!(b.valuation(), Some(2));
        assert_eq!(a.mul_ref(&b).valuation(), Some(4));
        assert_eq!(q(0, 1).valuation(), None);
    }

    #[test]
    fn unit_inverse_only_for_units() {
        assert_eq!(q(2, 5).unit_inverse(), Some(q(5, 2)));
        assert_eq!(q(3, 1).unit_inverse(), None);
    }

    #[test]
    fn reduction_mod_p() {
        assert_eq!(q(1, 2).to_fp(), Fp::new(2, 3));
        assert_eq!(q(6, 1).to_fp(), Fp::new(0, 3));
        assert_eq!(q(-1, 1).to_fp(), Fp::new(2, 3));
    }

    #[test]
    fn fp_inverse() {
        for p in [3u64, 5, 7, 11] {
            for a in 1..p {
                let x = Fp::new(a as i64, p);
                assert_eq!(x * x.inverse().unwrap(), Fp::new(1, p));
            }
        }
    }

    #[test]
    fn odd_primes() {
        assert!(is_odd_prime(3));
        assert!(is_odd_prime(101));
        assert!(!is_odd_prime(2));
        assert!(!is_odd_prime(9));
        assert!(!is_odd_prime(1));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), BigInt::from(20));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
