//! Exact arithmetic in the cyclotomic fields `Q(ζ_N)`.
//!
//! An element is a rational vector over the power basis `1, ζ, …, ζ^(φ(N)-1)`,
//! reduced modulo the `N`-th cyclotomic polynomial.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Per-conductor reduction data.
#[derive(Debug)]
pub struct Field {
    n: u32,
    phi: usize,
    /// `powers[j]` is `ζ^j` (for `0 <= j < n`) in the power basis.
    powers: Vec<Vec<i64>>,
    poly: Vec<i64>,
}

impl Field {
    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    /// Coefficients of `Φ_N`, constant term first.
    pub fn cyclotomic_polynomial(&self) -> &[i64] {
        &self.poly
    }

    pub fn power(&self, j: i64) -> &[i64] {
        &self.powers[j.rem_euclid(self.n as i64) as usize]
    }
}

pub fn field(n: u32) -> &'static Field {
    static CACHE: OnceLock<Mutex<HashMap<u32, &'static Field>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("cyclotomic cache poisoned");
    if let Some(f) = guard.get(&n) {
        return f;
    }
    let f: &'static Field = Box::leak(Box::new(build_field(n)));
    guard.insert(n, f);
    f
}

/// `Φ_n` as integer coefficients, constant term first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd];
    assert!(lead == 1);
    let qlen = rem.len() - dd;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

fn build_field(n: u32) -> Field {
    let poly = cyclotomic_polynomial(n);
    let phi = poly.len() - 1;
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by ζ and reduce
        let top = cur[phi - 1];
        let mut next = vec![0i64; phi];
        for i in (1..phi).rev() {
            next[i] = cur[i - 1];
        }
        if top != 0 {
            for (i, slot) in next.iter_mut().enumerate() {
                *slot -= top * poly[i];
            }
        }
        cur = next;
    }
    Field {
        n,
        phi,
        powers,
        poly,
    }
}

#[derive(Clone)]
pub struct CycloScalar {
    field: &'static Field,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl CycloScalar {
    pub fn zero(n: u32) -> Self {
        let field = field(n);
        CycloScalar {
            field,
            coeffs: vec![BigRational::zero(); field.phi],
        }
    }

    pub fn one(n: u32) -> Self {
        Self::from_integer(n, 1)
    }

    pub fn from_integer(n: u32, v: i64) -> Self {
        Self::from_rational(n, rat(v))
    }

    pub fn from_rational(n: u32, v: BigRational) -> Self {
        let mut s = Self::zero(n);
        s.coeffs[0] = v;
        s
    }

    pub fn from_coeffs(n: u32, coeffs: &[BigRational]) -> Self {
        let field = field(n);
        let mut out = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, &p) in field.power(i as i64).iter().enumerate() {
                if p != 0 {
                    out.coeffs[k] += c * rat(p);
                }
            }
        }
        out
    }

    /// `ζ_N^j`.
    pub fn root_of_unity(n: u32, j: i64) -> Self {
        assert!(n >= 1, "conductor must be positive");
        let field = field(n);
        CycloScalar {
            field,
            coeffs: field.power(j).iter().map(|&c| rat(c)).collect(),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.field.n
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Re-expresses the element in `Q(ζ_m)`; `m` must be a multiple of the conductor.
    pub fn lift(&self, m: u32) -> Self {
        let n = self.field.n;
        if m == n {
            return self.clone();
        }
        assert!(m % n == 0, "cannot lift conductor {n} to {m}");
        let step = (m / n) as i64;
        let target = field(m);
        let mut out = Self::zero(m);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, &p) in target.power(i as i64 * step).iter().enumerate() {
                if p != 0 {
                    out.coeffs[k] += c * rat(p);
                }
            }
        }
        out
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        let (n, m) = (a.field.n, b.field.n);
        if n == m {
            return (a.clone(), b.clone());
        }
        let l = n.lcm(&m);
        (a.lift(l), b.lift(l))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if self.field.n != other.field.n {
            let (a, b) = Self::common(self, other);
            return a.add_ref(&b);
        }
        CycloScalar {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        CycloScalar {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.field.n != other.field.n {
            let (a, b) = Self::common(self, other);
            return a.mul_ref(&b);
        }
        let field = self.field;
        let phi = field.phi;
        if other.is_rational() {
            let c = &other.coeffs[0];
            return self.scale(c);
        }
        if self.is_rational() {
            let c = &self.coeffs[0];
            return other.scale(c);
        }
        let mut prod = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out: Vec<BigRational> = prod[..phi].to_vec();
        for (d, c) in prod.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (k, &p) in field.power(d as i64).iter().enumerate() {
                if p != 0 {
                    out[k] += c * rat(p);
                }
            }
        }
        CycloScalar { field, coeffs: out }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CycloScalar {
            field: self.field,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `ζ_N^j` where `N` is this element's conductor.
    pub fn mul_root(&self, j: i64) -> Self {
        let j = j.rem_euclid(self.field.n as i64);
        if j == 0 {
            return self.clone();
        }
        self.mul_ref(&Self::root_of_unity(self.field.n, j))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rational(self.field.n, self.coeffs[0].recip()));
        }
        // Solve (multiplication by self) x = 1 over Q.
        let phi = self.field.phi;
        let n = self.field.n;
        let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); phi + 1]; phi];
        for j in 0..phi {
            let col = self.mul_ref(&Self::root_of_unity(n, j as i64));
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col.coeffs[i].clone();
            }
        }
        m[0][phi] = BigRational::one();
        for c in 0..phi {
            let p = (c..phi)
                .find(|&r| !m[r][c].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(c, p);
            let inv = m[c][c].recip();
            for x in m[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..phi {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    let pivot_row = m[c].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let coeffs = m.into_iter().map(|row| row[phi].clone()).collect();
        Ok(CycloScalar {
            field: self.field,
            coeffs,
        })
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut r = Self::one(self.field.n);
        for _ in 0..k {
            r = r.mul_ref(self);
        }
        r
    }

    /// Complex conjugate, i.e. the automorphism `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        let n = self.field.n;
        let mut out = Self::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, &p) in self.field.power(-(i as i64)).iter().enumerate() {
                if p != 0 {
                    out.coeffs[k] += c * rat(p);
                }
            }
        }
        out
    }

    /// If this is a root of unity, returns `(m, j)` in lowest terms with value `ζ_m^j`.
    pub fn as_root_of_unity(&self) -> Option<(u32, u32)> {
        let n = self.field.n;
        let m = if n % 2 == 0 { n } else { 2 * n };
        let me = self.lift(m);
        for j in 0..m {
            if me.coeffs == Self::root_of_unity(m, j as i64).coeffs {
                let g = j.gcd(&m).max(1);
                let (c, p) = if j == 0 { (1, 0) } else { (m / g, j / g) };
                return Some((c, p));
            }
        }
        None
    }

    pub fn to_json(&self) -> Value {
        if let Some((c, p)) = self.as_root_of_unity() {
            return json!({"conductor": c, "power": p});
        }
        json!({
            "conductor": self.field.n,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    /// Parses `{"conductor":N,"power":j}`, `{"conductor":N,"coeffs":[..]}`, an integer, or a rational string.
    pub fn from_json(v: &Value, default_conductor: u32) -> Result<Self> {
        match v {
            Value::Number(x) => {
                let i = x
                    .as_i64()
                    .ok_or_else(|| Error::Parse(format!("non-integer number {x}")))?;
                Ok(Self::from_integer(default_conductor, i))
            }
            Value::String(s) => {
                let r = parse_rational(s)?;
                Ok(Self::from_rational(default_conductor, r))
            }
            Value::Object(map) => {
                let n = map
                    .get("conductor")
                    .and_then(|c| c.as_u64())
                    .ok_or_else(|| Error::Parse("missing conductor".into()))?
                    as u32;
                if n == 0 {
                    return Err(Error::Parse("conductor must be positive".into()));
                }
                if let Some(p) = map.get("power") {
                    let j = p
                        .as_i64()
                        .ok_or_else(|| Error::Parse("power must be an integer".into()))?;
                    return Ok(Self::root_of_unity(n, j));
                }
                let coeffs = map
                    .get("coeffs")
                    .and_then(|c| c.as_array())
                    .ok_or_else(|| Error::Parse("expected power or coeffs".into()))?;
                let mut rs = Vec::new();
                for c in coeffs {
                    rs.push(match c {
                        Value::Number(x) => rat(x
                            .as_i64()
                            .ok_or_else(|| Error::Parse(format!("bad coefficient {x}")))?),
                        Value::String(s) => parse_rational(s)?,
                        _ => return Err(Error::Parse("bad coefficient".into())),
                    });
                }
                Ok(Self::from_coeffs(n, &rs))
            }
            _ => Err(Error::Parse(format!("cannot read scalar from {v}"))),
        }
    }

    /// Numerators and common denominator of the coefficients, if they fit in `i64`.
    pub fn small_parts(&self) -> Option<(Vec<i64>, i64)> {
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let d = den.to_i64()?;
        let mut nums = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let v = c.numer() * (&den / c.denom());
            nums.push(v.to_i64()?);
        }
        Some((nums, d))
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(BigRational::new(a, b))
    } else {
        let a: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(a))
    }
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.field.n == other.field.n {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloScalar {}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match i {
                0 => c.to_string(),
                1 if c.is_one() => "z".to_string(),
                1 if (-c).is_one() => "-z".to_string(),
                1 => format!("{c}*z"),
                _ if c.is_one() => format!("z^{i}"),
                _ if (-c).is_one() => format!("-z^{i}"),
                _ => format!("{c}*z^{i}"),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        if self.is_rational() {
            write!(f, "{s}")
        } else {
            write!(f, "{s} (z = zeta_{})", self.field.n)
        }
    }
}

impl Add for CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<'a> Add<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        self.add_ref(rhs)
    }
}

impl AddAssign<&CycloScalar> for CycloScalar {
    fn add_assign(&mut self, rhs: &CycloScalar) {
        if self.field.n == rhs.field.n {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = self.add_ref(rhs);
        }
    }
}

impl Sub for CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<'a> Sub<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn sub(self, rhs: &CycloScalar) -> CycloScalar {
        self.sub_ref(rhs)
    }
}

impl Mul for CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a CycloScalar> for &'a CycloScalar {
    type Output = CycloScalar;
    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        self.mul_ref(rhs)
    }
}

impl Neg for CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<'a> Neg for &'a CycloScalar {
    type Output = CycloScalar;
    fn neg(self) -> CycloScalar {
        self.neg_ref()
    }
}
