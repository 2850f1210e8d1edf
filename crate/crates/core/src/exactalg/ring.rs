//! Coefficient rings and exact scalar arithmetic.
//!
//! All arithmetic is context-based: a [`CoeffRing`] value carries the ring data
//! (the prime of a prime field, the base field and variable count of a graded
//! polynomial ring) and scalars are operated on through it. Mixing scalars from
//! different rings is a programming error and panics.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Supported coefficient rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoeffRing {
    /// The ring of integers.
    Integers,
    /// The field of rationals.
    Rationals,
    /// The field with `p` elements, `p` prime (checked on construction).
    PrimeField(u64),
    /// Polynomial ring over a field in `nvars` variables, graded by total degree
    /// with every variable in degree 1.
    GradedPoly { base: Box<CoeffRing>, nvars: usize },
}

/// A scalar of one of the supported rings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Fp(u64),
    Poly(Poly),
}

/// A multivariate polynomial. Keys are exponent vectors of length `nvars`
/// (lexicographically ordered by `BTreeMap`); values are nonzero base-field
/// scalars, never nested polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Scalar>,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map_or(false, |sq| sq <= n) {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl CoeffRing {
    /// The field with `p` elements. Fails unless `p` is prime.
    pub fn prime_field(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(CoeffRing::PrimeField(p))
    }

    /// Polynomial ring over `base` in `nvars >= 1` variables.
    pub fn graded_poly(base: CoeffRing, nvars: usize) -> Result<Self> {
        match base {
            CoeffRing::Rationals | CoeffRing::PrimeField(_) => {}
            other => {
                return Err(Error::UnsupportedRing(format!(
                    "polynomial base must be a field, got {other}"
                )))
            }
        }
        if nvars == 0 {
            return Err(Error::UnsupportedRing(
                "polynomial ring needs at least one variable".into(),
            ));
        }
        Ok(CoeffRing::GradedPoly { base: Box::new(base), nvars })
    }

    pub fn is_field(&self) -> bool {
        matches!(self, CoeffRing::Rationals | CoeffRing::PrimeField(_))
    }

    pub fn is_graded(&self) -> bool {
        matches!(self, CoeffRing::GradedPoly { .. })
    }

    /// Base field of a graded polynomial ring; the ring itself otherwise.
    pub fn base_field(&self) -> &CoeffRing {
        match self {
            CoeffRing::GradedPoly { base, .. } => base,
            other => other,
        }
    }

    pub fn nvars(&self) -> usize {
        match self {
            CoeffRing::GradedPoly { nvars, .. } => *nvars,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            CoeffRing::Integers => Scalar::Int(BigInt::zero()),
            CoeffRing::Rationals => Scalar::Rat(BigRational::zero()),
            CoeffRing::PrimeField(_) => Scalar::Fp(0),
            CoeffRing::GradedPoly { nvars, .. } => {
                Scalar::Poly(Poly { nvars: *nvars, terms: BTreeMap::new() })
            }
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            CoeffRing::Integers => Scalar::Int(BigInt::from(n)),
            CoeffRing::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            CoeffRing::PrimeField(p) => Scalar::Fp((n.rem_euclid(*p as i64)) as u64),
            CoeffRing::GradedPoly { base, nvars } => {
                let c = base.from_i64(n);
                let mut terms = BTreeMap::new();
                if !base.is_zero(&c) {
                    terms.insert(vec![0u32; *nvars], c);
                }
                Scalar::Poly(Poly { nvars: *nvars, terms })
            }
        }
    }

    /// The monomial `c * x_{var}^{exp}`.
    pub fn monomial(&self, c: Scalar, var: usize, exp: u32) -> Scalar {
        match self {
            CoeffRing::GradedPoly { base, nvars } => {
                assert!(var < *nvars, "variable index out of range");
                let mut terms = BTreeMap::new();
                if !base.is_zero(&c) {
                    let mut e = vec![0u32; *nvars];
                    e[var] = exp;
                    terms.insert(e, c);
                }
                Scalar::Poly(Poly { nvars: *nvars, terms })
            }
            _ => panic!("monomial only makes sense over a polynomial ring"),
        }
    }

    pub fn is_zero(&self, s: &Scalar) -> bool {
        match s {
            Scalar::Int(a) => a.is_zero(),
            Scalar::Rat(a) => a.is_zero(),
            Scalar::Fp(a) => *a == 0,
            Scalar::Poly(p) => p.terms.is_empty(),
        }
    }

    pub fn is_one(&self, s: &Scalar) -> bool {
        *s == self.one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (CoeffRing::Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (CoeffRing::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (CoeffRing::PrimeField(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            (CoeffRing::GradedPoly { base, nvars }, Scalar::Poly(x), Scalar::Poly(y)) => {
                let mut terms = x.terms.clone();
                for (m, c) in &y.terms {
                    let entry = terms.entry(m.clone()).or_insert_with(|| base.zero());
                    *entry = base.add(entry, c);
                    if base.is_zero(entry) {
                        terms.remove(m);
                    }
                }
                Scalar::Poly(Poly { nvars: *nvars, terms })
            }
            _ => panic!("scalar/ring mismatch in add: {self} with {a:?}, {b:?}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (CoeffRing::Integers, Scalar::Int(x)) => Scalar::Int(-x),
            (CoeffRing::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (CoeffRing::PrimeField(p), Scalar::Fp(x)) => Scalar::Fp((p - x) % p),
            (CoeffRing::GradedPoly { base, nvars }, Scalar::Poly(x)) => Scalar::Poly(Poly {
                nvars: *nvars,
                terms: x.terms.iter().map(|(m, c)| (m.clone(), base.neg(c))).collect(),
            }),
            _ => panic!("scalar/ring mismatch in neg"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (CoeffRing::Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (CoeffRing::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (CoeffRing::PrimeField(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 * *y as u128) % (*p as u128)) as u64)
            }
            (CoeffRing::GradedPoly { base, nvars }, Scalar::Poly(x), Scalar::Poly(y)) => {
                let mut terms: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
                for (mx, cx) in &x.terms {
                    for (my, cy) in &y.terms {
                        let m: Vec<u32> =
                            mx.iter().zip(my.iter()).map(|(a, b)| a + b).collect();
                        let c = base.mul(cx, cy);
                        let entry = terms.entry(m.clone()).or_insert_with(|| base.zero());
                        *entry = base.add(entry, &c);
                        if base.is_zero(entry) {
                            terms.remove(&m);
                        }
                    }
                }
                Scalar::Poly(Poly { nvars: *nvars, terms })
            }
            _ => panic!("scalar/ring mismatch in mul"),
        }
    }

    pub fn pow(&self, a: &Scalar, n: u32) -> Scalar {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match (self, a) {
            (CoeffRing::Integers, Scalar::Int(x)) => x.is_one() || (-x).is_one(),
            (CoeffRing::Rationals, Scalar::Rat(x)) => !x.is_zero(),
            (CoeffRing::PrimeField(_), Scalar::Fp(x)) => *x != 0,
            (CoeffRing::GradedPoly { base, .. }, Scalar::Poly(p)) => {
                p.terms.len() == 1
                    && p.terms.keys().next().map_or(false, |m| m.iter().all(|&e| e == 0))
                    && p.terms.values().next().map_or(false, |c| base.is_unit(c))
            }
            _ => panic!("scalar/ring mismatch in is_unit"),
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        match (self, a) {
            (CoeffRing::Integers, Scalar::Int(x)) => {
                if x.is_one() || (-x).is_one() {
                    Ok(Scalar::Int(x.clone()))
                } else {
                    Err(Error::NoSolution(format!("{x} is not a unit in Z")))
                }
            }
            (CoeffRing::Rationals, Scalar::Rat(x)) => {
                if x.is_zero() {
                    Err(Error::NoSolution("0 has no inverse".into()))
                } else {
                    Ok(Scalar::Rat(x.recip()))
                }
            }
            (CoeffRing::PrimeField(p), Scalar::Fp(x)) => {
                if *x == 0 {
                    return Err(Error::NoSolution("0 has no inverse".into()));
                }
                // Fermat: x^(p-2) mod p.
                let mut result: u128 = 1;
                let mut b = *x as u128;
                let mut e = *p as u128 - 2;
                let m = *p as u128;
                while e > 0 {
                    if e & 1 == 1 {
                        result = result * b % m;
                    }
                    b = b * b % m;
                    e >>= 1;
                }
                Ok(Scalar::Fp(result as u64))
            }
            _ => Err(Error::NoSolution("inverse unsupported over this ring".into())),
        }
    }

    /// Does `d` divide `n`? Only meaningful over `Z` and fields.
    pub fn divides(&self, d: &Scalar, n: &Scalar) -> bool {
        match (self, d, n) {
            (CoeffRing::Integers, Scalar::Int(x), Scalar::Int(y)) => {
                if x.is_zero() {
                    y.is_zero()
                } else {
                    (y % x).is_zero()
                }
            }
            _ if self.is_field() => !self.is_zero(d) || self.is_zero(n),
            _ => panic!("divides unsupported over {self}"),
        }
    }

    /// Exact quotient `n / d`; panics if `d` does not divide `n`.
    pub fn div_exact(&self, n: &Scalar, d: &Scalar) -> Scalar {
        match (self, n, d) {
            (CoeffRing::Integers, Scalar::Int(y), Scalar::Int(x)) => {
                let (q, r) = y.div_rem(x);
                assert!(r.is_zero(), "non-exact division {y} / {x}");
                Scalar::Int(q)
            }
            _ if self.is_field() => self.mul(n, &self.inv(d).expect("division by zero")),
            _ => panic!("div_exact unsupported over {self}"),
        }
    }

    /// Absolute value used for pivot selection over `Z`.
    pub fn abs_int(&self, a: &Scalar) -> BigInt {
        match a {
            Scalar::Int(x) => x.abs(),
            _ => panic!("abs_int on non-integer scalar"),
        }
    }

    /// Total degree of a nonzero homogeneous polynomial (`Some(0)` for nonzero
    /// constants in any ring); `None` for zero. Errs if not homogeneous.
    pub fn homogeneous_degree(&self, s: &Scalar) -> Result<Option<i64>> {
        match s {
            Scalar::Poly(p) => {
                if p.terms.is_empty() {
                    return Ok(None);
                }
                let mut deg: Option<i64> = None;
                for m in p.terms.keys() {
                    let d: i64 = m.iter().map(|&e| e as i64).sum();
                    match deg {
                        None => deg = Some(d),
                        Some(prev) if prev != d => {
                            return Err(Error::NotCompatible(format!(
                                "non-homogeneous polynomial {s}"
                            )))
                        }
                        _ => {}
                    }
                }
                Ok(deg)
            }
            _ => Ok(if self.is_zero(s) { None } else { Some(0) }),
        }
    }

    /// Reinterpret a scalar of this ring in `target`. Supported conversions:
    /// identity, `Z -> Q`, and `Z -> F_p` (reduction mod p).
    pub fn convert(&self, s: &Scalar, target: &CoeffRing) -> Result<Scalar> {
        if self == target {
            return Ok(s.clone());
        }
        match (self, target, s) {
            (CoeffRing::Integers, CoeffRing::Rationals, Scalar::Int(x)) => {
                Ok(Scalar::Rat(BigRational::from_integer(x.clone())))
            }
            (CoeffRing::Integers, CoeffRing::PrimeField(p), Scalar::Int(x)) => {
                let m = x.mod_floor(&BigInt::from(*p));
                Ok(Scalar::Fp(m.to_u64().expect("reduced residue fits u64")))
            }
            _ => Err(Error::UnsupportedRing(format!(
                "no base change {self} -> {target}"
            ))),
        }
    }

    /// Parse a scalar literal in the context of this ring.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        match self {
            CoeffRing::Integers => t
                .parse::<BigInt>()
                .map(Scalar::Int)
                .map_err(|_| Error::Parse(format!("bad integer {t:?}"))),
            CoeffRing::Rationals => {
                if let Some((a, b)) = t.split_once('/') {
                    let num = a.trim().parse::<BigInt>();
                    let den = b.trim().parse::<BigInt>();
                    match (num, den) {
                        (Ok(n), Ok(d)) if !d.is_zero() => Ok(Scalar::Rat(BigRational::new(n, d))),
                        _ => Err(Error::Parse(format!("bad rational {t:?}"))),
                    }
                } else {
                    t.parse::<BigInt>()
                        .map(|n| Scalar::Rat(BigRational::from_integer(n)))
                        .map_err(|_| Error::Parse(format!("bad rational {t:?}")))
                }
            }
            CoeffRing::PrimeField(p) => t
                .parse::<i64>()
                .map(|n| Scalar::Fp(n.rem_euclid(*p as i64) as u64))
                .map_err(|_| Error::Parse(format!("bad residue {t:?}"))),
            CoeffRing::GradedPoly { .. } => parse_poly(self, t),
        }
    }
}

/// Recursive-descent parser for polynomial literals like `2*x0^2*x1 - 1/3`.
fn parse_poly(ring: &CoeffRing, text: &str) -> Result<Scalar> {
    let base = ring.base_field().clone();
    let nvars = ring.nvars();
    let mut acc = ring.zero();
    let bytes: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0usize;
    let n = bytes.len();
    if n == 0 {
        return Err(Error::Parse("empty polynomial".into()));
    }
    while i < n {
        // sign
        let mut sign = 1i64;
        while i < n && (bytes[i] == '+' || bytes[i] == '-') {
            if bytes[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        if i >= n {
            return Err(Error::Parse(format!("dangling sign in {text:?}")));
        }
        // term: factors separated by '*'
        let mut coef = base.from_i64(sign);
        let mut expo = vec![0u32; nvars];
        loop {
            if bytes[i] == 'x' {
                i += 1;
                let start = i;
                while i < n && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let var: usize = bytes[start..i]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad variable in {text:?}")))?;
                if var >= nvars {
                    return Err(Error::Parse(format!("variable x{var} out of range")));
                }
                let mut e = 1u32;
                if i < n && bytes[i] == '^' {
                    i += 1;
                    let start = i;
                    while i < n && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    e = bytes[start..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {text:?}")))?;
                }
                expo[var] += e;
            } else {
                let start = i;
                while i < n && (bytes[i].is_ascii_digit() || bytes[i] == '/') {
                    i += 1;
                }
                if start == i {
                    return Err(Error::Parse(format!("unexpected {:?} in {text:?}", bytes[i])));
                }
                let lit: String = bytes[start..i].iter().collect();
                let c = base.parse_scalar(&lit)?;
                coef = base.mul(&coef, &c);
            }
            if i < n && bytes[i] == '*' {
                i += 1;
                continue;
            }
            break;
        }
        let mut term = BTreeMap::new();
        if !base.is_zero(&coef) {
            term.insert(expo, coef);
        }
        acc = ring.add(&acc, &Scalar::Poly(Poly { nvars, terms: term }));
    }
    Ok(acc)
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => write!(f, "Z"),
            CoeffRing::Rationals => write!(f, "Q"),
            CoeffRing::PrimeField(p) => write!(f, "F{p}"),
            CoeffRing::GradedPoly { base, nvars } => {
                write!(f, "{base}[")?;
                for v in 0..*nvars {
                    if v > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "x{v}")?;
                }
                write!(f, "]")
            }
        }
    }
}

fn scalar_is_structural_one(s: &Scalar) -> bool {
    match s {
        Scalar::Int(x) => x.is_one(),
        Scalar::Rat(x) => x.is_one(),
        Scalar::Fp(x) => *x == 1,
        Scalar::Poly(_) => false,
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(x) => write!(f, "{x}"),
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Poly(p) => {
                if p.terms.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (m, c) in &p.terms {
                    let cs = c.to_string();
                    let (sign, mag) = match cs.strip_prefix('-') {
                        Some(rest) => ("-", rest.to_string()),
                        None => ("+", cs),
                    };
                    if first {
                        if sign == "-" {
                            write!(f, "-")?;
                        }
                        first = false;
                    } else {
                        write!(f, " {sign} ")?;
                    }
                    let vars: Vec<String> = m
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(v, &e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
                        .collect();
                    if vars.is_empty() {
                        write!(f, "{mag}")?;
                    } else if scalar_is_structural_one(c) {
                        write!(f, "{}", vars.join("*"))?;
                    } else {
                        write!(f, "{}*{}", mag, vars.join("*"))?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(CoeffRing::prime_field(6).is_err());
        assert!(CoeffRing::prime_field(1).is_err());
        assert!(CoeffRing::prime_field(2).is_ok());
        assert!(CoeffRing::prime_field(97).is_ok());
    }

    #[test]
    fn fp_arithmetic() {
        let f5 = CoeffRing::prime_field(5).unwrap();
        let a = f5.from_i64(7); // 2
        let b = f5.from_i64(-1); // 4
        assert_eq!(f5.add(&a, &b), f5.from_i64(1));
        assert_eq!(f5.mul(&a, &b), f5.from_i64(3));
        let inv = f5.inv(&a).unwrap();
        assert_eq!(f5.mul(&a, &inv), f5.one());
    }

    #[test]
    fn poly_arithmetic_and_parse() {
        let r = CoeffRing::graded_poly(CoeffRing::Rationals, 2).unwrap();
        let x = r.monomial(CoeffRing::Rationals.one(), 0, 1);
        let y = r.monomial(CoeffRing::Rationals.one(), 1, 1);
        let s = r.add(&x, &y);
        let sq = r.mul(&s, &s); // x^2 + 2xy + y^2
        let parsed = r.parse_scalar("x0^2 + 2*x0*x1 + x1^2").unwrap();
        assert_eq!(sq, parsed);
        assert_eq!(r.homogeneous_degree(&sq).unwrap(), Some(2));
        assert!(r.homogeneous_degree(&r.add(&sq, &x)).is_err());
        assert_eq!(r.parse_scalar("x0 - x0").unwrap(), r.zero());
    }

    #[test]
    fn display_round_trip() {
        let z = CoeffRing::Integers;
        let s = z.from_i64(-42);
        assert_eq!(z.parse_scalar(&s.to_string()).unwrap(), s);
        let q = CoeffRing::Rationals;
        let s = q.parse_scalar("-3/4").unwrap();
        assert_eq!(q.parse_scalar(&s.to_string()).unwrap(), s);
        let r = CoeffRing::graded_poly(CoeffRing::prime_field(3).unwrap(), 2).unwrap();
        let p = r.parse_scalar("2*x0^2 + x1").unwrap();
        assert_eq!(r.parse_scalar(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn conversions() {
        let z = CoeffRing::Integers;
        let f3 = CoeffRing::prime_field(3).unwrap();
        assert_eq!(z.convert(&z.from_i64(-1), &f3).unwrap(), Scalar::Fp(2));
        assert_eq!(
            z.convert(&z.from_i64(2), &CoeffRing::Rationals).unwrap(),
            CoeffRing::Rationals.from_i64(2)
        );
    }
}
