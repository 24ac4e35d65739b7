//! Closed-form combinatorics: q-binomials, Stirling numbers, group orders
//! and the A/B/N constants of the eight double-coset families.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One of the eight families DC_i^±(n, q), i ∈ 1..=4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetFamily {
    index: u8,
    sign: Sign,
}

impl CosetFamily {
    pub fn new(index: u8, sign: Sign) -> Result<Self> {
        if !(1..=4).contains(&index) {
            return Err(Error::Domain(format!(
                "coset family index must be 1..=4, got {index}"
            )));
        }
        Ok(CosetFamily { index, sign })
    }

    pub fn index(self) -> u8 {
        self.index
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    /// All eight families, plus signs first.
    pub fn all() -> [CosetFamily; 8] {
        let mut out = [CosetFamily {
            index: 1,
            sign: Sign::Plus,
        }; 8];
        for (k, slot) in out.iter_mut().enumerate() {
            let sign = if k < 4 { Sign::Plus } else { Sign::Minus };
            *slot = CosetFamily {
                index: (k % 4) as u8 + 1,
                sign,
            };
        }
        out
    }

    /// Families 1 and 3 carry K(λ; a²); families 2 and 4 carry its square.
    pub fn is_even(self) -> bool {
        self.index.is_multiple_of(2)
    }

    /// Whether the coset is ρ Q σ_r Q rather than Q σ_r Q.
    pub fn uses_rho(self) -> bool {
        self.index >= 3
    }

    fn min_n(self) -> u32 {
        match (self.index, self.sign) {
            (4, Sign::Plus) => 4,
            (_, Sign::Plus) => 2,
            (1, Sign::Minus) => 1,
            (_, Sign::Minus) => 3,
        }
    }

    pub fn validity_rule(self) -> &'static str {
        match (self.index, self.sign) {
            (4, Sign::Plus) => "defined for n = 4, 6, 8, ...",
            (_, Sign::Plus) => "defined for n = 2, 4, 6, ...",
            (1, Sign::Minus) => "defined for n = 1, 3, 5, ...",
            (_, Sign::Minus) => "defined for n = 3, 5, 7, ...",
        }
    }

    pub fn valid_n(self, n: u32) -> bool {
        let parity_ok = match self.sign {
            Sign::Plus => n.is_multiple_of(2),
            Sign::Minus => n % 2 == 1,
        };
        parity_ok && n >= self.min_n()
    }

    pub fn check_n(self, n: u32) -> Result<()> {
        if self.valid_n(n) {
            Ok(())
        } else {
            Err(Error::InvalidFamily {
                family: self.to_string(),
                n,
                rule: self.validity_rule(),
            })
        }
    }

    /// The Bruhat index r with DC = (ρ)Q σ_r Q.
    pub fn bruhat_r(self, n: u32) -> u32 {
        match self.index {
            1 => n - 1,
            2 | 3 => n - 2,
            _ => n - 3,
        }
    }

    /// Valid n values up to and including `n_max`.
    pub fn valid_ns(self, n_max: u32) -> impl Iterator<Item = u32> {
        (1..=n_max).filter(move |&n| self.valid_n(n))
    }
}

impl fmt::Display for CosetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DC{}{}", self.index, self.sign.symbol())
    }
}

impl FromStr for CosetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix("DC")
            .or_else(|| t.strip_prefix("dc"))
            .unwrap_or(t);
        let bad = || Error::Parse(format!("'{s}' is not a family name (expected DC1+ .. DC4-)"));
        let mut chars = t.chars();
        let digit = chars.next().and_then(|c| c.to_digit(10)).ok_or_else(bad)?;
        let sign = match chars.next() {
            Some('+') => Sign::Plus,
            Some('-') => Sign::Minus,
            _ => return Err(bad()),
        };
        if chars.next().is_some() {
            return Err(bad());
        }
        CosetFamily::new(digit as u8, sign).map_err(|_| bad())
    }
}

impl Serialize for CosetFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CosetFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A, B and N = A·B = |DC| for one family instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyConstants {
    #[serde(rename = "A", serialize_with = "crate::json::ser_big")]
    pub a: BigUint,
    #[serde(rename = "B", serialize_with = "crate::json::ser_big")]
    pub b: BigUint,
    #[serde(rename = "N", serialize_with = "crate::json::ser_big")]
    pub n: BigUint,
}

fn pow(q: u64, e: u32) -> BigUint {
    BigUint::from(q).pow(e)
}

fn qm1(q: u64, e: u32) -> BigUint {
    pow(q, e) - 1u32
}

/// Π_{j=1}^{upper} (q^{step·j - offset} - 1); empty products are 1.
fn prod_minus_one(q: u64, upper: i64, step: u32, offset: u32) -> BigUint {
    (1..=upper.max(0) as u32)
        .map(|j| qm1(q, step * j - offset))
        .product()
}

/// An exponent of the form num/4, which must be a nonnegative integer.
fn quarter(num: i64, what: &str) -> Result<u32> {
    if num < 0 || num % 4 != 0 {
        return Err(Error::consistency(format!(
            "exponent {num}/4 in {what} is not a nonnegative integer"
        )));
    }
    Ok((num / 4) as u32)
}

/// Gaussian binomial [n r]_q; zero when r > n.
pub fn q_binom(n: u32, r: u32, q: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..r {
        num *= qm1(q, n - j);
        den *= qm1(q, r - j);
    }
    let (quot, rem) = num.div_rem(&den);
    debug_assert!(rem.is_zero());
    quot
}

/// Binomial coefficient C(n, k) for big n and small k.
pub fn binomial(n: &BigUint, k: u64) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - BigUint::from(i);
        acc /= i + 1;
    }
    acc
}

/// c! / (a! b! (c-a-b)!), and 0 when a + b > c.
pub fn multinomial(c: &BigUint, a: u64, b: u64) -> BigUint {
    if BigUint::from(a + b) > *c {
        return BigUint::zero();
    }
    binomial(c, a) * binomial(&(c - BigUint::from(a)), b)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Stirling number of the second kind via the alternating-sum formula.
pub fn stirling2(h: u32, t: u32) -> BigUint {
    use num_bigint::BigInt;
    let mut sum = BigInt::zero();
    for j in 0..=t {
        let term =
            BigInt::from(binomial(&BigUint::from(t), j as u64)) * BigInt::from(j).pow(h);
        if (t - j).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (quot, rem) = sum.div_rem(&BigInt::from(factorial(t as u64)));
    debug_assert!(rem.is_zero());
    quot.to_biguint().expect("Stirling numbers are nonnegative")
}

/// |GL(n, q)| = q^C(n,2) Π_{j=1}^n (q^j - 1).
pub fn gl_order(n: u32, q: u64) -> BigUint {
    pow(q, n * n.saturating_sub(1) / 2) * prod_minus_one(q, n as i64, 1, 0)
}

/// The sixteen A/B formulas.
pub fn family_constants(family: CosetFamily, n: u32, q: u64) -> Result<FamilyConstants> {
    family.check_n(n)?;
    let ni = n as i64;
    let what = family.to_string();
    let q1 = BigUint::from(q + 1);
    let (a, b) = match (family.index(), family.sign()) {
        (1, Sign::Plus) => {
            let e = quarter(5 * ni * ni - 2 * ni - 4, &what)?;
            let half = (ni - 2) / 2;
            let a = pow(q, e) * qm1(q, n - 1) * prod_minus_one(q, half, 2, 1);
            let b = &q1 * pow(q, quarter(ni * ni, &what)?) * prod_minus_one(q, half, 2, 0);
            (a, b)
        }
        (2, Sign::Plus) | (3, Sign::Plus) => {
            let e = quarter(5 * ni * ni - 2 * ni - 8, &what)?;
            let half = (ni - 2) / 2;
            let mut a = pow(q, e) * q_binom(n - 1, 1, q) * prod_minus_one(q, half, 2, 1);
            let mut b = pow(q, quarter((ni - 2) * (ni - 2), &what)?)
                * qm1(q, n - 1)
                * prod_minus_one(q, half, 2, 0);
            if family.index() == 2 {
                b *= &q1;
            } else {
                a *= &q1;
            }
            (a, b)
        }
        (4, Sign::Plus) => {
            let e = quarter(5 * ni * ni - 6 * ni - 4, &what)?;
            let half = (ni - 2) / 2;
            let a = &q1 * pow(q, e) * q_binom(n - 1, 2, q) * prod_minus_one(q, half, 2, 1);
            let b = pow(q, quarter((ni - 2) * (ni - 2), &what)?)
                * qm1(q, n - 1)
                * prod_minus_one(q, half, 2, 0);
            (a, b)
        }
        (1, Sign::Minus) => {
            let e = quarter(5 * (ni * ni - 1), &what)?;
            let half = (ni - 1) / 2;
            let a = pow(q, e) * prod_minus_one(q, half, 2, 1);
            let b = &q1
                * pow(q, quarter((ni - 1) * (ni - 1), &what)?)
                * prod_minus_one(q, half, 2, 0);
            (a, b)
        }
        (2, Sign::Minus) | (3, Sign::Minus) => {
            let e = quarter(5 * ni * ni - 4 * ni - 5, &what)?;
            let half = (ni - 1) / 2;
            let mut a = pow(q, e) * q_binom(n - 1, 1, q) * prod_minus_one(q, half, 2, 1);
            let mut b =
                pow(q, quarter((ni - 1) * (ni - 1), &what)?) * prod_minus_one(q, half, 2, 0);
            if family.index() == 2 {
                b *= &q1;
            } else {
                a *= &q1;
            }
            (a, b)
        }
        (4, Sign::Minus) => {
            let e = quarter(5 * ni * ni - 4 * ni - 9, &what)?;
            let half = (ni - 3) / 2;
            let a = &q1 * pow(q, e) * q_binom(n - 1, 2, q) * prod_minus_one(q, half, 2, 1);
            let b = pow(q, quarter((ni - 3) * (ni - 3), &what)?)
                * qm1(q, n - 2)
                * qm1(q, n - 1)
                * prod_minus_one(q, half, 2, 0);
            (a, b)
        }
        _ => unreachable!("family index checked at construction"),
    };
    if a.is_zero() || b.is_zero() {
        return Err(Error::consistency(format!(
            "{family}(n={n}, q={q}) produced a zero constant"
        )));
    }
    let n_len = &a * &b;
    Ok(FamilyConstants { a, b, n: n_len })
}

/// Orders attached to the Bruhat cell P σ_r Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetOrders {
    /// |B_r \ Q|
    pub b_r_quotient: BigUint,
    /// |Q σ_r Q| (= |ρ Q σ_r Q|), from the explicit product formula.
    pub double_coset: BigUint,
    /// |P(2n, q)|
    pub parabolic: BigUint,
}

pub fn coset_orders(n: u32, q: u64, r: u32) -> Result<CosetOrders> {
    if n == 0 || r >= n {
        return Err(Error::Domain(format!(
            "coset orders need 0 <= r <= n-1, got n = {n}, r = {r}"
        )));
    }
    let b_r_quotient = q_binom(n - 1, r, q) * pow(q, r * (r + 3) / 2);
    let parabolic =
        BigUint::from(2 * (q + 1)) * gl_order(n - 1, q) * pow(q, (n - 1) * (n + 2) / 2);
    let double_coset = BigUint::from(q + 1)
        * pow(q, n * n - n)
        * prod_minus_one(q, n as i64 - 1, 1, 0)
        * q_binom(n - 1, r, q)
        * pow(q, r * r.saturating_sub(1) / 2)
        * pow(q, 2 * r);
    let half = &parabolic * &b_r_quotient / 2u32;
    if half != double_coset {
        return Err(Error::consistency(format!(
            "|Qσ_rQ| product formula {double_coset} != |P||B_r\\Q|/2 = {half} (n={n}, q={q}, r={r})"
        )));
    }
    Ok(CosetOrders {
        b_r_quotient,
        double_coset,
        parabolic,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantsMismatch {
    pub family: CosetFamily,
    pub n: u32,
    pub q: u64,
    pub from_family: String,
    pub from_bruhat: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ConsistencyReport {
    pub checked: usize,
    pub mismatches: Vec<ConstantsMismatch>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.checked > 0
    }
}

/// N_i^± from the A/B formulas against |Q σ_r Q| at the family's r.
pub fn family_constants_consistency(n_max: u32, q: u64) -> Result<ConsistencyReport> {
    let mut report = ConsistencyReport::default();
    for family in CosetFamily::all() {
        for n in family.valid_ns(n_max) {
            let fc = family_constants(family, n, q)?;
            let orders = coset_orders(n, q, family.bruhat_r(n))?;
            report.checked += 1;
            if fc.n != orders.double_coset {
                report.mismatches.push(ConstantsMismatch {
                    family,
                    n,
                    q,
                    from_family: fc.n.to_string(),
                    from_bruhat: orders.double_coset.to_string(),
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fam(s: &str) -> CosetFamily {
        s.parse().unwrap()
    }

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Set partitions of {0..h} into exactly t blocks, by restricted growth strings.
    fn partitions_bruteforce(h: usize, t: usize) -> u64 {
        fn rec(pos: usize, h: usize, max: usize, t: usize) -> u64 {
            if pos == h {
                return (max == t) as u64;
            }
            (0..=max.min(t - 1))
                .map(|b| rec(pos + 1, h, max.max(b + 1), t))
                .sum()
        }
        if t == 0 {
            return (h == 0) as u64;
        }
        rec(0, h, 0, t)
    }

    #[test]
    fn q_binom_examples() {
        assert_eq!(q_binom(2, 1, 3), u(4));
        assert_eq!(q_binom(5, 0, 3), u(1));
        assert_eq!(q_binom(5, 0, 27), u(1));
        assert_eq!(q_binom(4, 2, 3), u(130));
        assert_eq!(q_binom(2, 3, 3), u(0));
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling2(3, 2), u(3));
        assert_eq!(stirling2(0, 0), u(1));
        assert_eq!(stirling2(2, 3), u(0));
        for h in 1..10 {
            assert_eq!(stirling2(h, 1), u(1));
            assert_eq!(stirling2(h, h), u(1));
        }
        for h in 0..8 {
            for t in 0..=h {
                assert_eq!(stirling2(h as u32, t as u32), u(partitions_bruteforce(h, t)));
            }
        }
    }

    #[test]
    fn gl_order_examples() {
        assert_eq!(gl_order(0, 3), u(1));
        assert_eq!(gl_order(1, 3), u(2));
        assert_eq!(gl_order(2, 3), u(48));
        assert_eq!(gl_order(2, 9), u(5760));
        assert_eq!(gl_order(2, 9), u((81 - 1) * (81 - 9)));
    }

    #[test]
    fn family_constant_examples() {
        let c = family_constants(fam("DC1-"), 1, 3).unwrap();
        assert_eq!((c.a, c.b, c.n), (u(1), u(4), u(4)));
        let c = family_constants(fam("DC3+"), 2, 3).unwrap();
        assert_eq!((c.a, c.b, c.n), (u(36), u(2), u(72)));
        let c = family_constants(fam("DC2+"), 2, 3).unwrap();
        assert_eq!((c.a, c.b, c.n), (u(9), u(8), u(72)));
        let c = family_constants(fam("DC1+"), 2, 3).unwrap();
        assert_eq!((c.a, c.b, c.n), (u(54), u(12), u(648)));
    }

    #[test]
    fn parity_rules() {
        assert!(matches!(
            family_constants(fam("DC1+"), 3, 3),
            Err(Error::InvalidFamily { .. })
        ));
        assert!(family_constants(fam("DC4+"), 2, 3).is_err());
        assert!(family_constants(fam("DC2-"), 1, 3).is_err());
        assert!(family_constants(fam("DC4-"), 3, 3).is_ok());
        let valid: Vec<u32> = fam("DC4+").valid_ns(8).collect();
        assert_eq!(valid, vec![4, 6, 8]);
        let valid: Vec<u32> = fam("DC1-").valid_ns(5).collect();
        assert_eq!(valid, vec![1, 3, 5]);
    }

    #[test]
    fn family_names_round_trip() {
        for f in CosetFamily::all() {
            assert_eq!(f.to_string().parse::<CosetFamily>().unwrap(), f);
        }
        assert!("DC5+".parse::<CosetFamily>().is_err());
        assert!("DC1".parse::<CosetFamily>().is_err());
        assert!("DC1+x".parse::<CosetFamily>().is_err());
    }

    #[test]
    fn coset_order_examples() {
        let o = coset_orders(2, 3, 1).unwrap();
        assert_eq!(o.double_coset, u(648));
        let o0 = coset_orders(2, 3, 0).unwrap();
        assert_eq!(o0.double_coset, u(72));
        assert_eq!(u(2) * (o.double_coset + o0.double_coset), u(1440));
        assert!(coset_orders(2, 3, 2).is_err());
    }

    #[test]
    fn consistency_examples() {
        let n1 = family_constants(fam("DC1+"), 2, 3).unwrap().n;
        assert_eq!(n1, coset_orders(2, 3, 1).unwrap().double_coset);
        let n4 = family_constants(fam("DC4-"), 3, 3).unwrap().n;
        assert_eq!(n4, coset_orders(3, 3, 0).unwrap().double_coset);
        for q in [3, 9] {
            let rep = family_constants_consistency(8, q).unwrap();
            assert!(rep.passed(), "{:?}", rep.mismatches);
        }
    }

    #[test]
    fn constants_positive_up_to_20() {
        for q in [3u64, 9, 27] {
            for family in CosetFamily::all() {
                for n in family.valid_ns(20) {
                    let c = family_constants(family, n, q).unwrap();
                    assert!(!c.a.is_zero() && !c.b.is_zero());
                }
            }
        }
    }

    #[test]
    fn multinomial_convention() {
        assert_eq!(multinomial(&u(4), 1, 1), u(12));
        assert_eq!(multinomial(&u(4), 3, 2), u(0));
        assert_eq!(multinomial(&u(0), 0, 0), u(1));
    }

    proptest! {
        #[test]
        fn q_pascal(n in 1u32..10, r in 1u32..10, e in 1u32..4) {
            prop_assume!(r <= n);
            let q = 3u64.pow(e);
            prop_assert_eq!(
                q_binom(n, r, q),
                q_binom(n - 1, r - 1, q) + BigUint::from(q).pow(r) * q_binom(n - 1, r, q)
            );
            prop_assert_eq!(q_binom(n, r, q), q_binom(n, n - r, q));
        }

        #[test]
        fn stirling_recurrence(h in 1u32..25, t in 1u32..25) {
            prop_assert_eq!(
                stirling2(h, t),
                BigUint::from(t) * stirling2(h - 1, t) + stirling2(h - 1, t - 1)
            );
        }
    }
}
