//! Arithmetic in GF(3^r) with a polynomial basis.
//!
//! Elements are stored as their base-3 index `c0 + 3 c1 + 9 c2 + ...`, where
//! `c_i` is the coefficient of `x^i` modulo the field's irreducible modulus.
//! That index order is the deterministic element order used everywhere else
//! (first nonsquare, coordinate grouping, JSON keys).
//!
//! Multiplication goes through discrete log tables built from a primitive
//! element; addition uses a full table when `q <= 729` and digit-wise
//! arithmetic otherwise.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 12;

/// Largest `q` for which the `q * q` addition table is materialized.
const ADD_TABLE_MAX_Q: u32 = 729;

/// Default irreducible moduli for r = 1..=12, constant term first. Each is
/// the irreducible monic of its degree with the smallest base-3 index and a
/// nonzero constant term.
const DEFAULT_MODULI: [&[u8]; MAX_DEGREE] = [
    &[1, 1],
    &[1, 0, 1],
    &[1, 2, 0, 1],
    &[2, 1, 0, 0, 1],
    &[1, 2, 0, 0, 0, 1],
    &[2, 1, 0, 0, 0, 0, 1],
    &[2, 0, 1, 0, 0, 0, 0, 1],
    &[2, 0, 1, 0, 0, 0, 0, 0, 1],
    &[1, 0, 1, 2, 0, 0, 0, 0, 0, 1],
    &[1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 1],
    &[2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    &[2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
];

/// An element of a [`Field`], identified by its base-3 coefficient index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub(crate) fn from_raw(v: u32) -> Elem {
        Elem(v)
    }

    #[inline]
    pub fn raw(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(3^r) with a validated irreducible modulus.
///
/// Immutable after construction and `Sync`, so one instance can be shared
/// freely across worker threads.
pub struct Field {
    r: usize,
    q: u32,
    modulus: Vec<u8>,
    pow3: Vec<u32>,
    generator: Elem,
    // exp[k] = g^k for k in 0..q-1
    exp: Vec<u32>,
    // log[x] for x != 0
    log: Vec<u32>,
    trace: Vec<u8>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("q", &self.q)
            .field("modulus", &format_poly(&self.modulus))
            .finish()
    }
}

impl Field {
    /// Builds GF(3^r). With `modulus = None` the shipped default for `r` is used.
    pub fn new(r: usize, modulus: Option<&[u8]>) -> Result<Field> {
        if r == 0 || r > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange(r));
        }
        let modulus = match modulus {
            Some(m) => m.to_vec(),
            None => DEFAULT_MODULI[r - 1].to_vec(),
        };
        validate_modulus(r, &modulus)?;
        Ok(Field::build(r, modulus))
    }

    /// Builds the field whose degree is read off the modulus.
    pub fn with_modulus(modulus: &[u8]) -> Result<Field> {
        if modulus.len() < 2 {
            return Err(Error::InvalidModulus {
                modulus: format!("{modulus:?}"),
                reason: "need at least a degree-1 polynomial".into(),
            });
        }
        Field::new(modulus.len() - 1, Some(modulus))
    }

    pub fn default_modulus(r: usize) -> Option<&'static [u8]> {
        (1..=MAX_DEGREE).contains(&r).then(|| DEFAULT_MODULI[r - 1])
    }

    fn build(r: usize, modulus: Vec<u8>) -> Field {
        let q = 3u32.pow(r as u32);
        let pow3: Vec<u32> = (0..r as u32).map(|i| 3u32.pow(i)).collect();

        let generator = find_primitive(r, q, &modulus);
        let gen_coeffs = index_to_coeffs(generator, r);
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![0u8; r];
        cur[0] = 1;
        for k in 0..q - 1 {
            let idx = coeffs_to_index(&cur);
            exp.push(idx);
            log[idx as usize] = k;
            cur = poly_mulmod(&cur, &gen_coeffs, &modulus);
        }

        let neg: Vec<u32> = (0..q)
            .map(|x| {
                pow3.iter()
                    .map(|p| ((3 - (x / p) % 3) % 3) * p)
                    .sum()
            })
            .collect();

        let mut field = Field {
            r,
            q,
            modulus,
            pow3,
            generator: Elem(generator),
            exp,
            log,
            trace: Vec::new(),
            neg,
            add: None,
        };
        if q <= ADD_TABLE_MAX_Q {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = field.add_digits(a, b);
                }
            }
            field.add = Some(table);
        }
        field.trace = (0..q).map(|x| field.trace_by_powers(Elem(x))).collect();
        field
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    /// The primitive element the log tables are built from.
    pub fn generator(&self) -> Elem {
        self.generator
    }

    /// All elements in index order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q).map(Elem)
    }

    pub fn element(&self, index: u32) -> Result<Elem> {
        if index < self.q {
            Ok(Elem(index))
        } else {
            Err(Error::Domain(format!(
                "element index {index} out of range for q = {}",
                self.q
            )))
        }
    }

    /// The image of an integer under Z -> F_3 -> F_q.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(3) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u8]) -> Result<Elem> {
        if coeffs.len() > self.r {
            return Err(Error::Domain(format!(
                "{} coefficients given for a degree-{} field",
                coeffs.len(),
                self.r
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c > 2) {
            return Err(Error::Domain(format!("coefficient {c} is not in F_3")));
        }
        Ok(Elem(coeffs_to_index(coeffs)))
    }

    pub fn coeffs(&self, x: Elem) -> Vec<u8> {
        index_to_coeffs(x.0, self.r)
    }

    /// Comma-separated coefficients, constant term first.
    pub fn key(&self, x: Elem) -> String {
        join_coeffs(&self.coeffs(x))
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let mut out = 0;
        for p in &self.pow3 {
            let s = ((a / p) % 3 + (b / p) % 3) % 3;
            out += s * p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.add {
            Some(t) => Elem(t[(a.0 * self.q + b.0) as usize]),
            None => Elem(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let n = self.q - 1;
        let k = self.log[a.index()] + self.log[b.index()];
        Elem(self.exp[(if k >= n { k - n } else { k }) as usize])
    }

    /// Multiplicative inverse; `None` at zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        let n = self.q - 1;
        let k = self.log[a.index()];
        Some(Elem(self.exp[((n - k) % n) as usize]))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let n = (self.q - 1) as u64;
        let k = (self.log[a.index()] as u64 * (e % n)) % n;
        Elem(self.exp[k as usize])
    }

    /// Absolute trace to F_3, returned as 0, 1 or 2.
    #[inline]
    pub fn trace(&self, x: Elem) -> u8 {
        self.trace[x.index()]
    }

    /// tr(x) = x + x^3 + ... + x^(3^(r-1)), summed in the field.
    fn trace_by_powers(&self, x: Elem) -> u8 {
        let mut acc = Elem::ZERO;
        let mut p = x;
        for _ in 0..self.r {
            acc = self.add(acc, p);
            p = self.pow(p, 3);
        }
        assert!(acc.0 < 3, "trace left the prime field");
        acc.0 as u8
    }

    /// Whether a nonzero `x` is a square in F_q^*.
    pub fn is_square(&self, x: Elem) -> Result<bool> {
        if x.is_zero() {
            return Err(Error::ZeroArgument("is_square"));
        }
        Ok(self.log[x.index()].is_multiple_of(2))
    }

    /// The first nonsquare in element index order.
    pub fn first_nonsquare(&self) -> Elem {
        self.nonzero()
            .find(|&x| self.log[x.index()] % 2 == 1)
            .expect("odd q always has nonsquares")
    }
}

fn validate_modulus(r: usize, modulus: &[u8]) -> Result<()> {
    let shown = format_poly(modulus);
    let invalid = |reason: &str| Error::InvalidModulus {
        modulus: shown.clone(),
        reason: reason.into(),
    };
    if modulus.len() != r + 1 {
        return Err(invalid(&format!(
            "expected {} coefficients for degree {r}, got {}",
            r + 1,
            modulus.len()
        )));
    }
    if modulus.iter().any(|&c| c > 2) {
        return Err(invalid("coefficients must lie in {0, 1, 2}"));
    }
    if modulus[r] != 1 {
        return Err(invalid("polynomial must be monic"));
    }
    if let Some(factor) = find_factor(modulus) {
        return Err(Error::ReducibleModulus {
            modulus: shown,
            factor: format_poly(&factor),
        });
    }
    Ok(())
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn find_factor(poly: &[u8]) -> Option<Vec<u8>> {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..3u32.pow(d as u32) {
            let mut f = index_to_coeffs(low, d);
            f.push(1);
            if poly_rem(poly, &f).iter().all(|&c| c == 0) {
                return Some(f);
            }
        }
    }
    None
}

fn find_primitive(r: usize, q: u32, modulus: &[u8]) -> u32 {
    let order = (q - 1) as u64;
    let primes = prime_factors(order);
    let one = {
        let mut v = vec![0u8; r];
        v[0] = 1;
        v
    };
    (1..q)
        .find(|&cand| {
            let c = index_to_coeffs(cand, r);
            primes
                .iter()
                .all(|&p| poly_powmod(&c, order / p, modulus) != one)
        })
        .expect("GF(q)^* is cyclic")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn index_to_coeffs(mut idx: u32, r: usize) -> Vec<u8> {
    let mut out = vec![0u8; r];
    for c in out.iter_mut() {
        *c = (idx % 3) as u8;
        idx /= 3;
    }
    out
}

fn coeffs_to_index(coeffs: &[u8]) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * 3 + c as u32)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u8], m: &[u8]) -> Vec<u8> {
    let dm = m.len() - 1;
    let mut a = a.to_vec();
    while a.len() > dm {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - dm;
            for (i, &mc) in m[..dm].iter().enumerate() {
                a[shift + i] = ((a[shift + i] as u32 + 3 * 3 - (lead * mc) as u32) % 3) as u8;
            }
        }
    }
    a.resize(dm, 0);
    a
}

fn poly_mulmod(a: &[u8], b: &[u8], m: &[u8]) -> Vec<u8> {
    let mut prod = vec![0u8; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % 3;
        }
    }
    poly_rem(&prod, m)
}

fn poly_powmod(base: &[u8], mut e: u64, m: &[u8]) -> Vec<u8> {
    let r = m.len() - 1;
    let mut result = vec![0u8; r];
    result[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, m);
        }
        b = poly_mulmod(&b, &b, m);
        e >>= 1;
    }
    result
}

/// Human-readable polynomial, e.g. `x^2 + 1`.
pub fn format_poly(coeffs: &[u8]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let coef = if c == 1 && i > 0 {
                String::new()
            } else {
                c.to_string()
            };
            match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn join_coeffs(coeffs: &[u8]) -> String {
    coeffs
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses `"1,0,1"` (constant term first) into F_3 coefficients.
pub fn parse_coeffs(s: &str) -> Result<Vec<u8>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<u8>() {
                Ok(c) if c <= 2 => Ok(c),
                _ => Err(Error::Parse(format!(
                    "'{t}' is not an F_3 coefficient (expected 0, 1 or 2)"
                ))),
            }
        })
        .collect()
}
