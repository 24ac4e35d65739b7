//! The ternary code attached to a double coset: its trace profile, the
//! weights of the q dual codewords, and low-weight prefixes of its weight
//! distribution.
//!
//! Coordinates are grouped by the trace value β of the coset element they
//! come from. Every quantity here depends only on the profile β ↦ N(β), so
//! the grouping loses nothing.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::charsum::{KloostermanTable, SumTables, MAX_TABLE_Q};
use crate::constants::{family_constants, multinomial, CosetFamily, FamilyConstants};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::json;

/// Largest weight-distribution cutoff.
pub const MAX_J: usize = 12;

/// Largest code length for exhaustive enumeration (3^12 vectors).
pub const MAX_TINY_N: u64 = 12;

/// Largest q for the weight-distribution dynamic program.
pub const MAX_DP_Q: u32 = 729;

/// β ↦ #{w ∈ DC : Tr w = β}, indexed by element index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceProfile {
    pub family: CosetFamily,
    pub n: u32,
    pub q: u32,
    pub counts: Vec<BigUint>,
}

impl TraceProfile {
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn count(&self, beta: Elem) -> &BigUint {
        &self.counts[beta.index()]
    }

    pub fn to_json(&self, field: &Field) -> Value {
        keyed(field, &self.counts)
    }
}

fn keyed(field: &Field, xs: &[BigUint]) -> Value {
    let map: Map<String, Value> = field
        .elements()
        .zip(xs)
        .map(|(e, x)| (field.key(e), json::value(x)))
        .collect();
    Value::Object(map)
}

fn exact_div_q(num: BigInt, q: u32, beta: Elem, field: &Field) -> Result<BigUint> {
    let (quot, rem) = num.div_rem(&BigInt::from(q));
    if !rem.is_zero() {
        return Err(Error::consistency(format!(
            "column count at β = {} is not divisible by q",
            field.key(beta)
        )));
    }
    quot.to_biguint().ok_or_else(|| {
        Error::consistency(format!(
            "negative column count at β = {}",
            field.key(beta)
        ))
    })
}

/// δ(2, q; β) by direct enumeration of pairs, independent of the
/// convolution tables.
pub fn delta2_pairs(field: &Field) -> Result<Vec<u64>> {
    if field.q() > MAX_TABLE_Q {
        return Err(Error::guard(
            format!("δ(2) pair count at q = {}", field.q()),
            format!("q <= {MAX_TABLE_Q}"),
        ));
    }
    let sums: Vec<Elem> = field
        .nonzero()
        .map(|x| field.add(x, field.inv(x).expect("nonzero")))
        .collect();
    let mut out = vec![0u64; field.q() as usize];
    for &s in &sums {
        for &t in &sums {
            out[field.add(s, t).index()] += 1;
        }
    }
    Ok(out)
}

/// The trace profile of DC_i^±(n, q) from δ(1) and δ(2).
pub fn trace_profile(family: CosetFamily, n: u32, tables: &SumTables<'_>) -> Result<TraceProfile> {
    let field = tables.field();
    let consts = family_constants(family, n, field.q() as u64)?;
    let q = BigInt::from(field.q());
    let a = BigInt::from(consts.a.clone());
    let ab = BigInt::from(consts.n.clone());
    let sign = BigInt::from(family.sign().as_i64());
    let one = BigInt::from(1);
    let (d1, d2) = (tables.delta(1), tables.delta(2));
    let counts = field
        .elements()
        .map(|beta| {
            let i = beta.index();
            let num = match family.index() {
                1 | 3 => {
                    let x = &q * d1[i] - &q + &one;
                    &ab + &sign * &a * x
                }
                2 => {
                    let x = &q * d2[i] - (&q - &one).pow(2);
                    &ab - &sign * &a * x
                }
                _ => {
                    let x = if beta.is_zero() {
                        &q * d2[i] + (&q - &one).pow(3)
                    } else {
                        &q * d2[i] - 2 * &q * &q + 3 * &q - &one
                    };
                    &ab - &sign * &a * x
                }
            };
            exact_div_q(num, field.q(), beta, field)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TraceProfile {
        family,
        n,
        q: field.q(),
        counts,
    })
}

/// Column counts as displayed in the closed-form weight distributions: the
/// squareness of β² - 1 for i = 1, 3 and a direct δ(2) pair count for i = 2, 4.
pub fn printed_column_counts(family: CosetFamily, n: u32, field: &Field) -> Result<Vec<BigUint>> {
    let consts = family_constants(family, n, field.q() as u64)?;
    let qi = field.q() as i64;
    let q = BigInt::from(qi);
    let b = BigInt::from(consts.b.clone());
    let a = BigInt::from(consts.a.clone());
    let pm = BigInt::from(family.sign().as_i64());
    let d2 = match family.index() {
        2 | 4 => delta2_pairs(field)?,
        _ => Vec::new(),
    };
    field
        .elements()
        .map(|beta| {
            let shift = match family.index() {
                1 | 3 => {
                    let d = field.sub(field.mul(beta, beta), Elem::ONE);
                    let c = if d.is_zero() {
                        1
                    } else if field.is_square(d)? {
                        qi + 1
                    } else {
                        -qi + 1
                    };
                    &pm * c
                }
                2 => &pm * ((&q - 1u32).pow(2) - &q * d2[beta.index()]),
                _ => {
                    let x = if beta.is_zero() {
                        &q * d2[0] + (&q - 1u32).pow(3)
                    } else {
                        &q * d2[beta.index()] - 2 * &q * &q + 3 * &q - 1
                    };
                    -&pm * x
                }
            };
            exact_div_q(&a * (&b + shift), field.q(), beta, field)
        })
        .collect()
}

/// First β at which two column-count vectors differ.
pub fn first_column_mismatch(field: &Field, x: &[BigUint], y: &[BigUint]) -> Option<String> {
    field
        .elements()
        .zip(x.iter().zip(y))
        .find(|(_, (a, b))| a != b)
        .map(|(beta, _)| field.key(beta))
}

/// Weights w(c(a)) of the dual codewords, indexed by element index; the
/// entry at a = 0 is the zero word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualWeights {
    pub weights: Vec<BigUint>,
}

impl DualWeights {
    pub fn get(&self, a: Elem) -> &BigUint {
        &self.weights[a.index()]
    }

    /// Smallest weight of a nonzero dual codeword.
    pub fn min_nonzero(&self) -> BigUint {
        self.weights[1..].iter().min().cloned().unwrap_or_default()
    }

    pub fn to_json(&self, field: &Field) -> Value {
        let map: Map<String, Value> = field
            .nonzero()
            .map(|a| (field.key(a), json::value(self.get(a))))
            .collect();
        Value::Object(map)
    }
}

/// w(c(a)) = (2/3)·A·(B' + s·X) with X = K(a²) or K(a²)².
pub fn dual_weight_closed_form(
    family: CosetFamily,
    consts: &FamilyConstants,
    q: u64,
    k: i64,
) -> Result<BigUint> {
    let (b_shift, s) = moment_shape(family, consts, q);
    let x = if family.is_even() { k * k } else { k };
    let num: BigInt = 2 * BigInt::from(consts.a.clone()) * (b_shift + s * x);
    let (w, rem) = num.div_rem(&BigInt::from(3));
    if !rem.is_zero() {
        return Err(Error::consistency(format!(
            "dual weight for {family} with K = {k} is not an integer"
        )));
    }
    w.to_biguint()
        .ok_or_else(|| Error::consistency(format!("negative dual weight for {family}, K = {k}")))
}

/// (B', s) in the weight expansion w = (2/3)A(B' + s·X).
///
/// s is the sign of the Kloosterman term; B' equals B except for i = 4,
/// where it is shifted by ±(q² - q).
pub fn moment_shape(family: CosetFamily, consts: &FamilyConstants, q: u64) -> (BigInt, i64) {
    let pm = family.sign().as_i64();
    let s = if family.is_even() { pm } else { -pm };
    let mut b = BigInt::from(consts.b.clone());
    if family.index() == 4 {
        b += pm * BigInt::from(q * q - q);
    }
    (b, s)
}

/// Dual weights from the closed form in K(λ; a²).
pub fn dual_weights_closed_form(
    family: CosetFamily,
    n: u32,
    table: &KloostermanTable<'_>,
) -> Result<DualWeights> {
    let field = table.field();
    let consts = family_constants(family, n, field.q() as u64)?;
    let mut weights = vec![BigUint::zero()];
    for a in field.nonzero() {
        let k = table.at_square_of(a).expect("nonzero");
        weights.push(dual_weight_closed_form(family, &consts, field.q() as u64, k)?);
    }
    Ok(DualWeights { weights })
}

/// Dual weights from the profile: w(c(a)) = N - Σ_{tr(aβ) = 0} N(β).
pub fn dual_weights_from_profile(profile: &TraceProfile, field: &Field) -> DualWeights {
    let total = profile.total();
    let weights = field
        .elements()
        .map(|a| {
            let zeros: BigUint = field
                .elements()
                .filter(|&beta| field.trace(field.mul(a, beta)) == 0)
                .map(|beta| profile.count(beta))
                .sum();
            &total - zeros
        })
        .collect();
    DualWeights { weights }
}

/// w(c(a)) by the closed form, checked against the profile route.
pub fn dual_weight(family: CosetFamily, n: u32, tables: &SumTables<'_>, a: Elem) -> Result<BigUint> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("dual_weight"));
    }
    let field = tables.field();
    let consts = family_constants(family, n, field.q() as u64)?;
    let k = tables.kloosterman.at_square_of(a).expect("nonzero");
    let closed = dual_weight_closed_form(family, &consts, field.q() as u64, k)?;
    let profile = trace_profile(family, n, tables)?;
    let via_profile = dual_weights_from_profile(&profile, field);
    if via_profile.get(a) != &closed {
        return Err(Error::consistency(format!(
            "dual weight of {family}(n={n}) at a = {}: closed form {closed}, profile {}",
            field.key(a),
            via_profile.get(a)
        )));
    }
    Ok(closed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub family: CosetFamily,
    pub n: u32,
    pub q: u32,
    pub injective: bool,
    #[serde(serialize_with = "json::ser_big")]
    pub min_weight: BigUint,
    /// Nonzero a whose dual codeword vanishes.
    pub vanishing: Vec<String>,
}

/// a ↦ c(a) is injective iff no nonzero a gives a weight-0 codeword.
pub fn check_injectivity(family: CosetFamily, n: u32, tables: &SumTables<'_>) -> Result<InjectivityReport> {
    let field = tables.field();
    let weights = dual_weights_closed_form(family, n, &tables.kloosterman)?;
    let vanishing: Vec<String> = field
        .nonzero()
        .filter(|&a| weights.get(a).is_zero())
        .map(|a| field.key(a))
        .collect();
    Ok(InjectivityReport {
        family,
        n,
        q: field.q(),
        injective: vanishing.is_empty(),
        min_weight: weights.min_nonzero(),
        vanishing,
    })
}

/// C_0..C_{j_max}: numbers of codewords of each low weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightPrefix {
    pub j_max: usize,
    #[serde(serialize_with = "json::ser_big_vec")]
    pub values: Vec<BigUint>,
}

impl WeightPrefix {
    pub fn get(&self, j: usize) -> Option<&BigUint> {
        self.values.get(j)
    }
}

fn prefix_guard(field: &Field, j_max: usize) -> Result<()> {
    if j_max > MAX_J {
        return Err(Error::guard(format!("j_max = {j_max}"), format!("j_max <= {MAX_J}")));
    }
    if field.q() > MAX_DP_Q {
        return Err(Error::guard(
            format!("weight distribution at q = {}", field.q()),
            format!("q <= {MAX_DP_Q}"),
        ));
    }
    Ok(())
}

/// coef[t][d] = Σ_{ν+μ=t, ν-μ ≡ d (3)} N!/(ν! μ! (N-ν-μ)!).
fn column_coefficients(n: &BigUint, j_max: usize) -> Vec<[BigUint; 3]> {
    (0..=j_max)
        .map(|t| {
            let mut row: [BigUint; 3] = Default::default();
            for nu in 0..=t {
                let mu = t - nu;
                let d = (nu + 2 * mu) % 3;
                row[d] += multinomial(n, nu as u64, mu as u64);
            }
            row
        })
        .collect()
}

/// Dynamic program over β with state (weight so far, Σνβ - Σμβ).
pub fn prefix_from_columns(field: &Field, columns: &[BigUint], j_max: usize) -> Result<WeightPrefix> {
    prefix_guard(field, j_max)?;
    let q = field.q() as usize;
    let mut dp = vec![vec![BigUint::zero(); q]; j_max + 1];
    dp[0][0] = BigUint::from(1u32);
    for (beta, n) in field.elements().zip(columns) {
        if n.is_zero() {
            continue;
        }
        let coef = column_coefficients(n, j_max);
        let two_beta = field.add(beta, beta);
        let shifted: Vec<[usize; 3]> = field
            .elements()
            .map(|s| {
                [
                    s.index(),
                    field.add(s, beta).index(),
                    field.add(s, two_beta).index(),
                ]
            })
            .collect();
        let mut next = vec![vec![BigUint::zero(); q]; j_max + 1];
        for j in 0..=j_max {
            for s in 0..q {
                let cur = &dp[j][s];
                if cur.is_zero() {
                    continue;
                }
                for (t, row) in coef.iter().enumerate().take(j_max - j + 1) {
                    for d in 0..3 {
                        if !row[d].is_zero() {
                            next[j + t][shifted[s][d]] += cur * &row[d];
                        }
                    }
                }
            }
        }
        dp = next;
    }
    Ok(WeightPrefix {
        j_max,
        values: dp.into_iter().map(|row| row[0].clone()).collect(),
    })
}

/// C_0..C_{j_max} from the trace profile.
pub fn weight_distribution_prefix(profile: &TraceProfile, field: &Field, j_max: usize) -> Result<WeightPrefix> {
    prefix_from_columns(field, &profile.counts, j_max)
}

/// C_0..C_{j_max} from the closed-form column counts.
pub fn theorem_r_closed_forms(family: CosetFamily, n: u32, field: &Field, j_max: usize) -> Result<WeightPrefix> {
    let columns = printed_column_counts(family, n, field)?;
    prefix_from_columns(field, &columns, j_max)
}

/// The full weight distribution by enumerating all u ∈ F_3^N with
/// Σ u_k β_k = 0.
pub fn enumerate_code_tiny(profile: &TraceProfile, field: &Field) -> Result<Vec<u64>> {
    let total = profile.total();
    let len = total
        .to_u64()
        .filter(|&l| l <= MAX_TINY_N)
        .ok_or_else(|| {
            Error::guard(
                format!("exhaustive enumeration with N = {total}"),
                format!("N <= {MAX_TINY_N}"),
            )
        })? as usize;
    let mut coords = Vec::with_capacity(len);
    for beta in field.elements() {
        let c = profile.count(beta).to_usize().expect("bounded by N");
        coords.extend(std::iter::repeat_n(beta, c));
    }
    fn rec(field: &Field, coords: &[Elem], acc: Elem, weight: usize, dist: &mut [u64]) {
        match coords.split_first() {
            None => {
                if acc.is_zero() {
                    dist[weight] += 1;
                }
            }
            Some((&beta, rest)) => {
                rec(field, rest, acc, weight, dist);
                let once = field.add(acc, beta);
                rec(field, rest, once, weight + 1, dist);
                rec(field, rest, field.add(once, beta), weight + 1, dist);
            }
        }
    }
    let mut dist = vec![0u64; len + 1];
    rec(field, &coords, Elem::ZERO, 0, &mut dist);
    Ok(dist)
}

/// Everything about one family instance that the moment solver needs.
#[derive(Clone, Debug)]
pub struct FamilyCode {
    pub family: CosetFamily,
    pub n: u32,
    pub q: u32,
    pub constants: FamilyConstants,
    pub profile: TraceProfile,
    pub printed_columns: Vec<BigUint>,
    pub weights: DualWeights,
    pub profile_weights: DualWeights,
    pub prefix: WeightPrefix,
    pub printed_prefix: WeightPrefix,
}

impl FamilyCode {
    pub fn build(family: CosetFamily, n: u32, tables: &SumTables<'_>, j_max: usize) -> Result<Self> {
        let field = tables.field();
        let constants = family_constants(family, n, field.q() as u64)?;
        let profile = trace_profile(family, n, tables)?;
        let printed_columns = printed_column_counts(family, n, field)?;
        let weights = dual_weights_closed_form(family, n, &tables.kloosterman)?;
        let profile_weights = dual_weights_from_profile(&profile, field);
        let prefix = weight_distribution_prefix(&profile, field, j_max)?;
        let printed_prefix = prefix_from_columns(field, &printed_columns, j_max)?;
        Ok(FamilyCode {
            family,
            n,
            q: field.q(),
            constants,
            profile,
            printed_columns,
            weights,
            profile_weights,
            prefix,
            printed_prefix,
        })
    }

    pub fn to_json(&self, field: &Field) -> Value {
        serde_json::json!({
            "family": self.family,
            "n": self.n,
            "q": self.q,
            "N": json::value(&self.constants.n),
            "profile": self.profile.to_json(field),
            "dual_weights": self.weights.to_json(field),
            "C_prefix": json::array(&self.prefix.values),
        })
    }
}
