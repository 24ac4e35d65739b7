//! Explicit matrix models of SO^-(2,q), O^-(2,q), the parabolic Q(2n,q)
//! for n ≤ 2, and brute-force enumeration of small double cosets.
//!
//! These are ground truth for the closed forms elsewhere in the crate, so
//! every enumerated orthogonal matrix can be checked against ᵗwJw = J.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::Serialize;

use crate::charsum;
use crate::constants::CosetFamily;
use crate::eisenstein::Eisenstein;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Upper bound on x·σ·y products formed when enumerating a double coset.
pub const MAX_PRODUCTS: usize = 10_000_000;

/// Largest q for which Q(4, q) is enumerated.
pub const MAX_Q4_Q: u32 = 9;

/// Largest q for the r = 2 Ω_r × h sum.
pub const MAX_BR2_Q: u32 = 9;

/// Square matrix over a [`Field`], row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    dim: usize,
    entries: Vec<Elem>,
}

impl Matrix {
    pub fn zero(dim: usize) -> Self {
        Matrix {
            dim,
            entries: vec![Elem::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Matrix::from_fn(dim, |i, j| if i == j { Elem::ONE } else { Elem::ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Matrix { dim, entries }
    }

    pub fn from_rows(rows: &[&[Elem]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        Matrix {
            dim,
            entries: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn mul(&self, o: &Matrix, f: &Field) -> Matrix {
        assert_eq!(self.dim, o.dim);
        let d = self.dim;
        Matrix::from_fn(d, |i, j| {
            (0..d).fold(Elem::ZERO, |acc, k| {
                f.add(acc, f.mul(self.get(i, k), o.get(k, j)))
            })
        })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.dim, |i, j| self.get(j, i))
    }

    pub fn trace(&self, f: &Field) -> Elem {
        (0..self.dim).fold(Elem::ZERO, |acc, i| f.add(acc, self.get(i, i)))
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, f: &Field) -> Elem {
        let d = self.dim;
        let mut m = self.entries.clone();
        let mut det = Elem::ONE;
        for col in 0..d {
            let Some(piv) = (col..d).find(|&r| !m[r * d + col].is_zero()) else {
                return Elem::ZERO;
            };
            if piv != col {
                for k in 0..d {
                    m.swap(piv * d + k, col * d + k);
                }
                det = f.neg(det);
            }
            let p = m[col * d + col];
            det = f.mul(det, p);
            let p_inv = f.inv(p).expect("pivot is nonzero");
            for r in col + 1..d {
                let factor = f.mul(m[r * d + col], p_inv);
                if factor.is_zero() {
                    continue;
                }
                for k in col..d {
                    m[r * d + k] = f.sub(m[r * d + k], f.mul(factor, m[col * d + k]));
                }
            }
        }
        det
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupLabel {
    SO2Minus,
    O2Minus,
    Q { n: u32 },
    DoubleCoset { family: CosetFamily, n: u32 },
    BruhatCell { rho: bool, r: u32, n: u32 },
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::SO2Minus => write!(f, "SO-(2,q)"),
            GroupLabel::O2Minus => write!(f, "O-(2,q)"),
            GroupLabel::Q { n } => write!(f, "Q({},q)", 2 * n),
            GroupLabel::DoubleCoset { family, n } => write!(f, "{family}(n={n})"),
            GroupLabel::BruhatCell { rho, r, n } => {
                let pre = if *rho { "ρ" } else { "" };
                write!(f, "{pre}Qσ_{r}Q(n={n})")
            }
        }
    }
}

/// A deduplicated, sorted set of matrices.
#[derive(Clone, Debug)]
pub struct GroupSet {
    pub label: GroupLabel,
    elements: Vec<Matrix>,
}

impl GroupSet {
    fn from_unique(label: GroupLabel, set: HashSet<Matrix>) -> Self {
        let mut elements: Vec<Matrix> = set.into_iter().collect();
        elements.sort_unstable();
        GroupSet { label, elements }
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }
}

/// β ↦ #{w ∈ set : Tr w = β}, indexed by element index.
pub fn trace_histogram(field: &Field, set: &GroupSet) -> Vec<u64> {
    let mut hist = vec![0u64; field.q() as usize];
    for w in set.elements() {
        hist[w.trace(field).index()] += 1;
    }
    hist
}

/// Σ_{w ∈ set} λ(a Tr w).
pub fn gauss_sum_dc(field: &Field, set: &GroupSet, a: Elem) -> Result<Eisenstein> {
    if a.is_zero() {
        return Err(Error::ZeroArgument("gauss_sum_dc"));
    }
    let mut counts = [0i64; 3];
    for (beta, &c) in field.elements().zip(&trace_histogram(field, set)) {
        counts[field.trace(field.mul(a, beta)) as usize] += c as i64;
    }
    Ok(Eisenstein::from_trace_counts(counts))
}

/// The three sums of the SO^-(2,q) / O^-(2,q) evaluation for ψ = λ(a·).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropCReport {
    /// K(ψ; 1) = Σ_α ψ(α + α⁻¹), summed directly.
    pub kloosterman_psi: i64,
    pub so2_sum: Eisenstein,
    pub twisted_sum: Eisenstein,
    pub o2_sum: Eisenstein,
    pub holds: bool,
}

/// b_r(ψ) in closed form (independent of ψ).
pub fn b_r_closed_form(r: u32, q: u64) -> BigInt {
    let qb = BigUint::from(q);
    let prod = |upper: u32| -> BigUint {
        (1..=upper)
            .map(|j| qb.pow(2 * j - 1) - 1u32)
            .product()
    };
    if r.is_multiple_of(2) {
        BigInt::from(qb.pow(r * (r + 6) / 4) * prod(r / 2))
    } else {
        -BigInt::from(qb.pow((r * r + 4 * r - 1) / 4) * prod(r.div_ceil(2)))
    }
}

/// The minus-type quadratic form data: a fixed nonsquare ε and the matrices
/// J, δ_ε, ρ, σ_r built from it.
#[derive(Clone, Copy, Debug)]
pub struct MinusForm<'f> {
    field: &'f Field,
    eps: Elem,
}

impl<'f> MinusForm<'f> {
    /// Uses the first nonsquare in element order as ε.
    pub fn new(field: &'f Field) -> Self {
        MinusForm {
            field,
            eps: field.first_nonsquare(),
        }
    }

    pub fn with_nonsquare(field: &'f Field, eps: Elem) -> Result<Self> {
        if eps.is_zero() || field.is_square(eps)? {
            return Err(Error::Domain(format!(
                "ε = {} must be a nonsquare",
                field.key(eps)
            )));
        }
        Ok(MinusForm { field, eps })
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    pub fn eps(&self) -> Elem {
        self.eps
    }

    /// δ_ε = diag(1, -ε).
    pub fn delta_eps(&self) -> Matrix {
        let f = self.field;
        Matrix::from_rows(&[&[Elem::ONE, Elem::ZERO], &[Elem::ZERO, f.neg(self.eps)]])
    }

    /// J for O^-(2n, q): [[0, 1, 0], [1, 0, 0], [0, 0, δ_ε]] in (n-1, n-1, 2) blocks.
    pub fn form(&self, n: u32) -> Matrix {
        let k = n as usize - 1;
        let mut j = Matrix::zero(2 * n as usize);
        for i in 0..k {
            j.set(i, k + i, Elem::ONE);
            j.set(k + i, i, Elem::ONE);
        }
        j.set(2 * k, 2 * k, Elem::ONE);
        j.set(2 * k + 1, 2 * k + 1, self.field.neg(self.eps));
        j
    }

    pub fn is_orthogonal(&self, w: &Matrix) -> bool {
        let f = self.field;
        let n = (w.dim() / 2) as u32;
        let j = self.form(n);
        w.transpose().mul(&j, f).mul(w, f) == j
    }

    /// ρ = diag(1_{n-1}, 1_{n-1}, 1, -1).
    pub fn rho(&self, n: u32) -> Matrix {
        let d = 2 * n as usize;
        let mut m = Matrix::identity(d);
        m.set(d - 1, d - 1, self.field.neg(Elem::ONE));
        m
    }

    /// The Bruhat representative σ_r, swapping the first r coordinates of
    /// the two isotropic blocks.
    pub fn sigma(&self, n: u32, r: u32) -> Matrix {
        let k = n as usize - 1;
        let d = 2 * n as usize;
        let mut m = Matrix::zero(d);
        for i in 0..d {
            let target = if i < r as usize {
                k + i
            } else if i >= k && i < k + r as usize {
                i - k
            } else {
                i
            };
            m.set(i, target, Elem::ONE);
        }
        m
    }

    fn so2_pairs(&self) -> Vec<(Elem, Elem)> {
        let f = self.field;
        let mut out = Vec::new();
        for a in f.elements() {
            for b in f.elements() {
                let norm = f.sub(f.mul(a, a), f.mul(f.mul(b, b), self.eps));
                if norm == Elem::ONE {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn so2_matrix(&self, a: Elem, b: Elem) -> Matrix {
        let f = self.field;
        Matrix::from_rows(&[&[a, f.mul(b, self.eps)], &[b, a]])
    }

    /// {[[a, bε], [b, a]] : a² - b²ε = 1}.
    pub fn so2_minus(&self) -> GroupSet {
        let set = self
            .so2_pairs()
            .into_iter()
            .map(|(a, b)| self.so2_matrix(a, b))
            .collect();
        GroupSet::from_unique(GroupLabel::SO2Minus, set)
    }

    /// SO^-(2,q) ⊔ diag(1, -1)·SO^-(2,q).
    pub fn o2_minus(&self) -> GroupSet {
        let f = self.field;
        let flip = self.delta_one();
        let so = self.so2_minus();
        let set = so
            .elements()
            .iter()
            .flat_map(|w| [w.clone(), flip.mul(w, f)])
            .collect();
        GroupSet::from_unique(GroupLabel::O2Minus, set)
    }

    /// δ_1 = diag(1, -1).
    fn delta_one(&self) -> Matrix {
        let f = self.field;
        Matrix::from_rows(&[&[Elem::ONE, Elem::ZERO], &[Elem::ZERO, f.neg(Elem::ONE)]])
    }

    /// Q(2n, q) for n ∈ {1, 2}.
    ///
    /// For n = 2 each element is diag(A, A⁻¹, i)·U(h), where U(h) is the
    /// unipotent factor with the 1x1 block B = ᵗhδ_εh; in characteristic 3,
    /// 2B = -ᵗhδ_εh gives B = ᵗhδ_εh.
    pub fn q_group(&self, n: u32) -> Result<GroupSet> {
        let f = self.field;
        match n {
            1 => Ok(GroupSet {
                label: GroupLabel::Q { n: 1 },
                elements: self.so2_minus().elements,
            }),
            2 => {
                if f.q() > MAX_Q4_Q {
                    return Err(Error::guard(
                        format!("Q(4, {}) enumeration", f.q()),
                        format!("q <= {MAX_Q4_Q}"),
                    ));
                }
                let so2 = self.so2_pairs();
                let mut set = HashSet::new();
                for a in f.nonzero() {
                    let a_inv = f.inv(a).expect("nonzero");
                    for &(c, d) in &so2 {
                        let i_blk = self.so2_matrix(c, d);
                        let mut levi = Matrix::zero(4);
                        levi.set(0, 0, a);
                        levi.set(1, 1, a_inv);
                        for r in 0..2 {
                            for s in 0..2 {
                                levi.set(2 + r, 2 + s, i_blk.get(r, s));
                            }
                        }
                        for h1 in f.elements() {
                            for h2 in f.elements() {
                                let u = self.unipotent(h1, h2);
                                set.insert(levi.mul(&u, f));
                            }
                        }
                    }
                }
                Ok(GroupSet::from_unique(GroupLabel::Q { n: 2 }, set))
            }
            _ => Err(Error::guard(
                format!("Q({}, q) enumeration", 2 * n),
                "n <= 2",
            )),
        }
    }

    /// [[1, B, -ᵗhδ_ε], [0, 1, 0], [0, h, 1_2]] for h = (h1, h2)ᵗ.
    fn unipotent(&self, h1: Elem, h2: Elem) -> Matrix {
        let f = self.field;
        let eps_h2 = f.mul(self.eps, h2);
        // ᵗhδ_ε = (h1, -ε h2)
        let b = f.sub(f.mul(h1, h1), f.mul(eps_h2, h2));
        let mut u = Matrix::identity(4);
        u.set(0, 1, b);
        u.set(0, 2, f.neg(h1));
        u.set(0, 3, eps_h2);
        u.set(2, 1, h1);
        u.set(3, 1, h2);
        u
    }

    /// (ρ) Q σ_r Q for n ≤ 2.
    pub fn bruhat_cell(&self, n: u32, r: u32, with_rho: bool) -> Result<GroupSet> {
        let f = self.field;
        if r >= n {
            return Err(Error::Domain(format!("σ_r needs r <= n-1, got r = {r}, n = {n}")));
        }
        let q = self.q_group(n)?;
        let label = GroupLabel::BruhatCell {
            rho: with_rho,
            r,
            n,
        };
        let left: Vec<Matrix> = if with_rho {
            let rho = self.rho(n);
            q.elements().iter().map(|x| rho.mul(x, f)).collect()
        } else {
            q.elements().to_vec()
        };
        if r == 0 {
            // σ_0 = 1 and Q·Q = Q
            return Ok(GroupSet {
                label,
                elements: {
                    let mut v = left;
                    v.sort_unstable();
                    v
                },
            });
        }
        let products = q.len() * q.len();
        if products > MAX_PRODUCTS {
            return Err(Error::guard(
                format!("{products} products for Qσ_{r}Q at q = {}", f.q()),
                format!("|Q|² <= {MAX_PRODUCTS}"),
            ));
        }
        let sigma = self.sigma(n, r);
        let right = q.elements();
        let set: HashSet<Matrix> = left
            .par_iter()
            .flat_map_iter(|x| {
                let xs = x.mul(&sigma, f);
                right.iter().map(move |y| xs.mul(y, f))
            })
            .collect();
        Ok(GroupSet::from_unique(label, set))
    }

    /// DC_i^±(n, q) by enumeration, for the families reachable with n ≤ 2.
    pub fn double_coset(&self, family: CosetFamily, n: u32) -> Result<GroupSet> {
        family.check_n(n)?;
        if n > 2 {
            return Err(Error::guard(
                format!("{family}(n={n}) enumeration"),
                "n <= 2",
            ));
        }
        let mut set = self.bruhat_cell(n, family.bruhat_r(n), family.uses_rho())?;
        set.label = GroupLabel::DoubleCoset { family, n };
        Ok(set)
    }

    /// b_r(λ(a·)) = Σ_{B ∈ Ω_r} Σ_{h ∈ F_q^{r×2}} λ(a Tr(δ_ε ᵗh B h)), r ∈ {1, 2}.
    pub fn b_r_bruteforce(&self, r: u32, a: Elem) -> Result<Eisenstein> {
        let f = self.field;
        if a.is_zero() {
            return Err(Error::ZeroArgument("b_r_bruteforce"));
        }
        if !(1..=2).contains(&r) {
            return Err(Error::Domain(format!("b_r brute force supports r in {{1, 2}}, got {r}")));
        }
        if r == 2 && f.q() > MAX_BR2_Q {
            return Err(Error::guard(
                format!("Ω_2 × F_q^(2×2) sum at q = {}", f.q()),
                format!("q <= {MAX_BR2_Q}"),
            ));
        }
        let r = r as usize;
        let q = f.q();
        let sym_count = q.pow((r * (r + 1) / 2) as u32);
        let h_count = q.pow(2 * r as u32);
        let digits = |mut idx: u32, len: usize| -> Vec<Elem> {
            (0..len)
                .map(|_| {
                    let e = Elem::from_raw(idx % q);
                    idx /= q;
                    e
                })
                .collect()
        };
        let neg_eps = f.neg(self.eps);
        let mut counts = [0i64; 3];
        for s in 0..sym_count {
            let d = digits(s, r * (r + 1) / 2);
            let mut bm = Matrix::zero(r);
            let mut it = d.into_iter();
            for i in 0..r {
                for j in i..r {
                    let v = it.next().unwrap();
                    bm.set(i, j, v);
                    bm.set(j, i, v);
                }
            }
            if bm.det(f).is_zero() {
                continue;
            }
            for hi in 0..h_count {
                // h is r×2, column-major: h[i][k] = hd[k*r + i]
                let hd = digits(hi, 2 * r);
                let quad = |k: usize| {
                    let mut acc = Elem::ZERO;
                    for i in 0..r {
                        for j in 0..r {
                            let t = f.mul(hd[k * r + i], f.mul(bm.get(i, j), hd[k * r + j]));
                            acc = f.add(acc, t);
                        }
                    }
                    acc
                };
                // Tr(δ_ε M) = M_00 - ε M_11
                let tr = f.add(quad(0), f.mul(neg_eps, quad(1)));
                counts[f.trace(f.mul(a, tr)) as usize] += 1;
            }
        }
        Ok(Eisenstein::from_trace_counts(counts))
    }

    /// The three SO^-(2,q)/O^-(2,q) sums for ψ = λ(a·).
    pub fn prop_c_check(&self, a: Elem) -> Result<PropCReport> {
        let f = self.field;
        if a.is_zero() {
            return Err(Error::ZeroArgument("prop_c_check"));
        }
        let psi_sum = |mats: &mut dyn Iterator<Item = Elem>| {
            let mut counts = [0i64; 3];
            for t in mats {
                counts[f.trace(f.mul(a, t)) as usize] += 1;
            }
            Eisenstein::from_trace_counts(counts)
        };
        let kloosterman_psi = {
            let mut it = f
                .nonzero()
                .map(|x| f.add(x, f.inv(x).expect("nonzero")));
            psi_sum(&mut it)
                .as_integer()
                .ok_or_else(|| Error::consistency("K(ψ;1) is not real"))?
        };
        let so2 = self.so2_minus();
        let so2_sum = psi_sum(&mut so2.elements().iter().map(|w| w.trace(f)));
        let d1 = self.delta_one();
        let twisted_sum = psi_sum(&mut so2.elements().iter().map(|w| d1.mul(w, f).trace(f)));
        let o2 = self.o2_minus();
        let o2_sum = psi_sum(&mut o2.elements().iter().map(|w| w.trace(f)));
        let q1 = f.q() as i64 + 1;
        let holds = so2_sum == Eisenstein::new(-kloosterman_psi, 0)
            && twisted_sum == Eisenstein::new(q1, 0)
            && o2_sum == Eisenstein::new(q1 - kloosterman_psi, 0);
        Ok(PropCReport {
            kloosterman_psi,
            so2_sum,
            twisted_sum,
            o2_sum,
            holds,
        })
    }
}

/// Σ_{w ∈ DC} λ(a Tr w) in closed form, given K = K(λ; a²).
pub fn coset_sum_closed_form(family: CosetFamily, a_const: &BigUint, q: u64, k: i64) -> BigInt {
    let a = BigInt::from(a_const.clone());
    let k = BigInt::from(k);
    let s = BigInt::from(family.sign().as_i64());
    match family.index() {
        1 | 3 => s * a * k,
        2 => -s * a * &k * &k,
        _ => {
            let q = BigInt::from(q);
            -s * a * (&k * &k + &q * &q - q)
        }
    }
}

/// Kloosterman-value helper for closed-form comparisons.
pub fn k_at_square(field: &Field, a: Elem) -> Result<i64> {
    charsum::kloosterman(field, field.mul(a, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::family_constants;

    fn fam(s: &str) -> CosetFamily {
        s.parse().unwrap()
    }

    #[test]
    fn so2_q3() {
        let f = Field::new(1, None).unwrap();
        let form = MinusForm::new(&f);
        assert_eq!(form.eps(), f.from_int(2));
        let so2 = form.so2_minus();
        assert_eq!(so2.len(), 4);
        let mut traces: Vec<u32> = so2.elements().iter().map(|w| w.trace(&f).raw()).collect();
        traces.sort();
        assert_eq!(traces, vec![0, 0, 1, 2]);
    }

    #[test]
    fn so2_and_o2_orders() {
        for r in 1..=3 {
            let f = Field::new(r, None).unwrap();
            let form = MinusForm::new(&f);
            let so2 = form.so2_minus();
            assert_eq!(so2.len() as u32, f.q() + 1);
            let o2 = form.o2_minus();
            assert_eq!(o2.len() as u32, 2 * (f.q() + 1));
            let mut det_one = 0;
            for w in o2.elements() {
                assert!(form.is_orthogonal(w));
                if w.det(&f) == Elem::ONE {
                    det_one += 1;
                }
            }
            assert_eq!(det_one, f.q() + 1);
        }
    }

    #[test]
    fn q4_is_orthogonal_and_closed() {
        let f = Field::new(1, None).unwrap();
        let form = MinusForm::new(&f);
        let q = form.q_group(2).unwrap();
        assert_eq!(q.len(), 72);
        for w in q.elements() {
            assert!(form.is_orthogonal(w));
            assert_eq!(w.det(&f), Elem::ONE);
        }
        for x in q.elements().iter().step_by(5) {
            for y in q.elements().iter().step_by(7) {
                assert!(q.contains(&x.mul(y, &f)));
            }
        }
        assert_eq!(form.q_group(1).unwrap().len(), 4);
        assert!(form.q_group(3).is_err());
    }

    #[test]
    fn sigma_and_rho_are_orthogonal() {
        let f = Field::new(2, None).unwrap();
        let form = MinusForm::new(&f);
        for n in 1..=3 {
            for r in 0..n {
                assert!(form.is_orthogonal(&form.sigma(n, r)));
            }
            assert!(form.is_orthogonal(&form.rho(n)));
        }
        assert_eq!(form.sigma(2, 0), Matrix::identity(4));
    }

    #[test]
    fn dc_sizes_q3() {
        let f = Field::new(1, None).unwrap();
        let form = MinusForm::new(&f);
        let cases = [("DC1-", 1, 4usize), ("DC3+", 2, 72), ("DC2+", 2, 72), ("DC1+", 2, 648)];
        for (name, n, size) in cases {
            let family = fam(name);
            let set = form.double_coset(family, n).unwrap();
            assert_eq!(set.len(), size, "{name}");
            let consts = family_constants(family, n, 3).unwrap();
            assert_eq!(BigUint::from(set.len()), consts.n);
        }
        assert!(matches!(
            form.double_coset(fam("DC1+"), 3),
            Err(Error::InvalidFamily { .. })
        ));
        assert!(form.double_coset(fam("DC4-"), 3).is_err());
    }

    #[test]
    fn dc_guard_at_q9() {
        let f = Field::new(2, None).unwrap();
        let form = MinusForm::new(&f);
        assert!(matches!(
            form.double_coset(fam("DC1+"), 2),
            Err(Error::Guard { .. })
        ));
        assert_eq!(form.double_coset(fam("DC3+"), 2).unwrap().len(), 6480);
    }

    #[test]
    fn histograms_q3() {
        let f = Field::new(1, None).unwrap();
        let form = MinusForm::new(&f);
        let dc = form.double_coset(fam("DC1-"), 1).unwrap();
        assert_eq!(trace_histogram(&f, &dc), vec![2, 1, 1]);
        let dc = form.double_coset(fam("DC3+"), 2).unwrap();
        assert_eq!(trace_histogram(&f, &dc), vec![0, 36, 36]);
    }

    #[test]
    fn gauss_sums_q3() {
        let f = Field::new(1, None).unwrap();
        let form = MinusForm::new(&f);
        let one = Elem::ONE;
        let dc = form.double_coset(fam("DC1-"), 1).unwrap();
        assert_eq!(gauss_sum_dc(&f, &dc, one).unwrap(), Eisenstein::new(1, 0));
        let dc = form.double_coset(fam("DC3+"), 2).unwrap();
        assert_eq!(gauss_sum_dc(&f, &dc, one).unwrap(), Eisenstein::new(-36, 0));
        let dc = form.double_coset(fam("DC2+"), 2).unwrap();
        assert_eq!(gauss_sum_dc(&f, &dc, one).unwrap(), Eisenstein::new(-9, 0));
    }

    #[test]
    fn b_r_small() {
        let f = Field::new(1, None).unwrap();
        let form = MinusForm::new(&f);
        assert_eq!(form.b_r_bruteforce(1, Elem::ONE).unwrap(), Eisenstein::new(-6, 0));
        assert_eq!(form.b_r_bruteforce(2, Elem::ONE).unwrap(), Eisenstein::new(162, 0));
        assert_eq!(b_r_closed_form(1, 3), BigInt::from(-6));
        assert_eq!(b_r_closed_form(2, 3), BigInt::from(162));
        assert!(form.b_r_bruteforce(3, Elem::ONE).is_err());
    }

    #[test]
    fn prop_c_q3() {
        let f = Field::new(1, None).unwrap();
        let form = MinusForm::new(&f);
        let rep = form.prop_c_check(Elem::ONE).unwrap();
        assert_eq!(rep.so2_sum, Eisenstein::new(1, 0));
        assert_eq!(rep.twisted_sum, Eisenstein::new(4, 0));
        assert!(rep.holds);
    }

    #[test]
    fn determinant_matches_2x2_formula() {
        let f = Field::new(2, None).unwrap();
        for (a, b, c, d) in [(1u32, 2, 3, 4), (0, 5, 7, 0), (8, 8, 8, 8)] {
            let e = |i| f.element(i).unwrap();
            let m = Matrix::from_rows(&[&[e(a), e(b)], &[e(c), e(d)]]);
            let expect = f.sub(f.mul(e(a), e(d)), f.mul(e(b), e(c)));
            assert_eq!(m.det(&f), expect);
        }
    }
}
