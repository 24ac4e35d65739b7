//! Kloosterman sums over GF(3^r) for the canonical additive character λ,
//! their GL(t) analogues, the counts δ(m, q; β), and moment sums.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::eisenstein::Eisenstein;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Largest q for which O(q²) tables (Kloosterman values, δ convolutions) are built.
pub const MAX_TABLE_Q: u32 = 6561;

/// Largest m accepted by [`delta`].
pub const MAX_DELTA_M: usize = 4;

/// Largest q for the GL(2, q) enumeration.
pub const MAX_GL2_Q: u32 = 27;

fn table_guard(field: &Field, what: &str) -> Result<()> {
    if field.q() > MAX_TABLE_Q {
        return Err(Error::guard(
            format!("{what} at q = {}", field.q()),
            format!("q <= {MAX_TABLE_Q}"),
        ));
    }
    Ok(())
}

/// Σ_{α ∈ F_q^*} λ(α + a/α) as an Eisenstein integer.
fn kloosterman_raw(field: &Field, a: Elem) -> Eisenstein {
    let mut counts = [0i64; 3];
    for alpha in field.nonzero() {
        let inv = field.inv(alpha).expect("nonzero");
        let arg = field.add(alpha, field.mul(a, inv));
        counts[field.trace(arg) as usize] += 1;
    }
    Eisenstein::from_trace_counts(counts)
}

fn check_real(v: Eisenstein, what: &str) -> Result<i64> {
    v.as_integer()
        .ok_or_else(|| Error::consistency(format!("{what} is not real: {v}")))
}

fn weil_ok(k: i64, q: u32) -> bool {
    // |K| <= 2 sqrt(q)  <=>  K² <= 4q
    (k as i128) * (k as i128) <= 4 * q as i128
}

/// K(λ; a) for nonzero `a`.
pub fn kloosterman(field: &Field, a: Elem) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("kloosterman"));
    }
    let k = check_real(kloosterman_raw(field, a), "Kloosterman sum")?;
    if !weil_ok(k, field.q()) {
        return Err(Error::consistency(format!(
            "K(λ; {}) = {k} violates the Weil bound",
            field.key(a)
        )));
    }
    Ok(k)
}

/// K(λ; a) for every a ∈ F_q^*, computed once and reused for all moments.
#[derive(Debug, Clone)]
pub struct KloostermanTable<'f> {
    field: &'f Field,
    // values[0] is unused
    values: Vec<i64>,
}

impl<'f> KloostermanTable<'f> {
    pub fn new(field: &'f Field) -> Result<Self> {
        table_guard(field, "Kloosterman table")?;
        let mut values: Vec<i64> = (1..field.q())
            .into_par_iter()
            .map(|a| kloosterman(field, Elem::from_raw(a)))
            .collect::<Result<_>>()?;
        values.insert(0, 0);
        Ok(KloostermanTable { field, values })
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    /// K(λ; a); `None` at a = 0.
    pub fn get(&self, a: Elem) -> Option<i64> {
        (!a.is_zero()).then(|| self.values[a.index()])
    }

    /// K(λ; a²) for nonzero `a`.
    pub fn at_square_of(&self, a: Elem) -> Option<i64> {
        self.get(self.field.mul(a, a))
    }

    pub fn entries(&self) -> impl Iterator<Item = (Elem, i64)> + '_ {
        self.field.nonzero().map(|a| (a, self.values[a.index()]))
    }

    /// SK^h: Σ over square a ∈ F_q^* of K(λ; a)^h.
    pub fn sk_moment(&self, h: u32) -> BigInt {
        self.entries()
            .filter(|&(a, _)| self.field.is_square(a).expect("nonzero"))
            .map(|(_, k)| BigInt::from(k).pow(h))
            .sum()
    }

    /// MK^h: Σ over all a ∈ F_q^* of K(λ; a)^h.
    pub fn mk_moment(&self, h: u32) -> BigInt {
        self.entries().map(|(_, k)| BigInt::from(k).pow(h)).sum()
    }

    /// SK^0..=SK^h_max.
    pub fn sk_moments(&self, h_max: u32) -> Vec<BigInt> {
        (0..=h_max).map(|h| self.sk_moment(h)).collect()
    }

    pub fn mk_moments(&self, h_max: u32) -> Vec<BigInt> {
        (0..=h_max).map(|h| self.mk_moment(h)).collect()
    }
}

pub fn sk_moment(field: &Field, h: u32) -> Result<BigInt> {
    Ok(KloostermanTable::new(field)?.sk_moment(h))
}

pub fn mk_moment(field: &Field, h: u32) -> Result<BigInt> {
    Ok(KloostermanTable::new(field)?.mk_moment(h))
}

/// K_{GL(t,q)}(λ; a) from the three-term recursion in t, seeded with
/// K_{GL(0)} = 1 and K_{GL(1)} = K(λ; a).
pub fn kloosterman_gl(field: &Field, t: u32, a: Elem) -> Result<BigInt> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("kloosterman_gl"));
    }
    let q = BigInt::from(field.q());
    let k = BigInt::from(kloosterman(field, a)?);
    let mut prev = BigInt::one(); // t - 2
    if t == 0 {
        return Ok(prev);
    }
    let mut cur = k.clone(); // t - 1
    for s in 2..=t {
        let qs1 = q.pow(s - 1);
        let next = &qs1 * &cur * &k + q.pow(2 * s - 2) * (&qs1 - 1) * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

/// K_{GL(t,q)}(λ; a) = Σ_{w ∈ GL(t,q)} λ(Tr w + a Tr w⁻¹) by enumeration, t ∈ {1, 2}.
pub fn kloosterman_gl_bruteforce(field: &Field, t: u32, a: Elem) -> Result<i64> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("kloosterman_gl_bruteforce"));
    }
    match t {
        1 => check_real(kloosterman_raw(field, a), "GL(1) Kloosterman sum"),
        2 => {
            if field.q() > MAX_GL2_Q {
                return Err(Error::guard(
                    format!("GL(2, {}) enumeration", field.q()),
                    format!("q <= {MAX_GL2_Q}"),
                ));
            }
            let f = field;
            let mut counts = [0i64; 3];
            for w11 in f.elements() {
                for w12 in f.elements() {
                    for w21 in f.elements() {
                        let off = f.mul(w12, w21);
                        for w22 in f.elements() {
                            let det = f.sub(f.mul(w11, w22), off);
                            let Some(det_inv) = f.inv(det) else { continue };
                            let tr = f.add(w11, w22);
                            // Tr w⁻¹ = Tr w / det for 2x2
                            let arg = f.add(tr, f.mul(a, f.mul(tr, det_inv)));
                            counts[f.trace(arg) as usize] += 1;
                        }
                    }
                }
            }
            check_real(Eisenstein::from_trace_counts(counts), "GL(2) Kloosterman sum")
        }
        _ => Err(Error::Domain(format!(
            "brute-force GL(t) Kloosterman sums support t in {{1, 2}}, got {t}"
        ))),
    }
}

/// Fiber sizes of x ↦ x + x⁻¹ on F_q^*.
fn fiber_histogram(field: &Field) -> Vec<u64> {
    let mut hist = vec![0u64; field.q() as usize];
    for x in field.nonzero() {
        let y = field.add(x, field.inv(x).expect("nonzero"));
        hist[y.index()] += 1;
    }
    hist
}

/// δ(m, q; β) for every β, by m-fold additive convolution of the fiber
/// histogram of x ↦ x + x⁻¹.
pub fn delta_table(field: &Field, m: usize) -> Result<Vec<u64>> {
    if m > MAX_DELTA_M {
        return Err(Error::guard(format!("δ with m = {m}"), format!("m <= {MAX_DELTA_M}")));
    }
    table_guard(field, "δ convolution")?;
    let q = field.q() as usize;
    let mut acc = vec![0u64; q];
    acc[0] = 1;
    if m == 0 {
        return Ok(acc);
    }
    let fiber = fiber_histogram(field);
    for _ in 0..m {
        let mut next = vec![0u64; q];
        for (s, &c) in acc.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = Elem::from_raw(s as u32);
            for (y, &f) in fiber.iter().enumerate() {
                if f != 0 {
                    next[field.add(s, Elem::from_raw(y as u32)).index()] += c * f;
                }
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// δ(m, q; β) = #{(α_1..α_m) ∈ (F_q^*)^m : Σ (α_i + α_i⁻¹) = β}.
pub fn delta(field: &Field, m: usize, beta: Elem) -> Result<u64> {
    Ok(delta_table(field, m)?[beta.index()])
}

/// δ(1, q; β) from the squareness of β² - 1: 2 if a nonzero square, 1 if
/// β = ±1, 0 if a nonsquare.
pub fn delta1_closed_form(field: &Field, beta: Elem) -> u64 {
    let d = field.sub(field.mul(beta, beta), Elem::ONE);
    if d.is_zero() {
        1
    } else if field.is_square(d).expect("nonzero") {
        2
    } else {
        0
    }
}

/// Both sides of an exact identity between a character sum and an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub lhs: Eisenstein,
    pub rhs: i64,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(lhs: Eisenstein, rhs: i64) -> Self {
        IdentityCheck {
            lhs,
            rhs,
            holds: lhs == Eisenstein::new(rhs, 0),
        }
    }
}

/// Cached Kloosterman values and δ tables for the identity checks.
pub struct SumTables<'f> {
    pub kloosterman: KloostermanTable<'f>,
    deltas: Vec<Vec<u64>>,
}

impl<'f> SumTables<'f> {
    /// Largest m for which δ is cached.
    pub const MAX_M: usize = 3;

    pub fn new(field: &'f Field) -> Result<Self> {
        let kloosterman = KloostermanTable::new(field)?;
        let deltas = (0..=Self::MAX_M)
            .map(|m| delta_table(field, m))
            .collect::<Result<_>>()?;
        Ok(SumTables { kloosterman, deltas })
    }

    pub fn field(&self) -> &'f Field {
        self.kloosterman.field()
    }

    pub fn delta(&self, m: usize) -> &[u64] {
        &self.deltas[m]
    }

    fn check_m(m: usize) -> Result<()> {
        if m > Self::MAX_M {
            return Err(Error::Domain(format!(
                "identity checks support m <= {}, got {m}",
                Self::MAX_M
            )));
        }
        Ok(())
    }

    /// Σ_β δ(m, q; β) λ(aβ)  versus  K(λ; a²)^m.
    pub fn lemma_m(&self, m: usize, a: Elem) -> Result<IdentityCheck> {
        Self::check_m(m)?;
        if a.is_zero() {
            return Err(Error::ZeroArgument("verify_lemma_m"));
        }
        let f = self.field();
        let mut counts = [0i64; 3];
        for (beta, &d) in f.elements().zip(&self.deltas[m]) {
            counts[f.trace(f.mul(a, beta)) as usize] += d as i64;
        }
        let k = self.kloosterman.at_square_of(a).expect("nonzero");
        Ok(IdentityCheck::new(
            Eisenstein::from_trace_counts(counts),
            k.pow(m as u32),
        ))
    }

    /// Σ_{a ∈ F_q^*} λ(-aβ) K(λ; a²)^m  versus  q δ(m, q; β) - (q-1)^m.
    pub fn prop_f(&self, m: usize, beta: Elem) -> Result<IdentityCheck> {
        Self::check_m(m)?;
        let f = self.field();
        let mut weighted = [0i64; 3];
        for a in f.nonzero() {
            let k = self.kloosterman.at_square_of(a).expect("nonzero");
            let t = f.trace(f.neg(f.mul(a, beta)));
            weighted[t as usize] += k.pow(m as u32);
        }
        let q = f.q() as i64;
        let rhs = q * self.deltas[m][beta.index()] as i64 - (q - 1).pow(m as u32);
        Ok(IdentityCheck::new(Eisenstein::from_trace_counts(weighted), rhs))
    }
}

pub fn verify_lemma_m(field: &Field, m: usize, a: Elem) -> Result<IdentityCheck> {
    SumTables::new(field)?.lemma_m(m, a)
}

pub fn verify_prop_f(field: &Field, m: usize, beta: Elem) -> Result<IdentityCheck> {
    SumTables::new(field)?.prop_f(m, beta)
}

/// Σ_{a ∈ F_q^*} K(λ; a²)^h, which must equal 2·SK^h.
pub fn square_argument_sum(table: &KloostermanTable<'_>, h: u32) -> BigInt {
    let f = table.field();
    f.nonzero()
        .map(|a| BigInt::from(table.at_square_of(a).expect("nonzero")).pow(h))
        .fold(BigInt::zero(), |acc, x| acc + x)
}
