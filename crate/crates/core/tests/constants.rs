use num_bigint::BigUint;
use num_traits::{One, Zero};
use proptest::prelude::*;

use kloos::constants::{
    binomial, coset_orders, family_constants, family_constants_consistency, factorial, gl_order,
    q_binom, stirling2, CosetFamily, Sign,
};
use kloos::Error;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn family(s: &str) -> CosetFamily {
    s.parse().unwrap()
}

/// Number of k-dimensional subspaces of F_3^n, by collecting row-reduced spans.
fn subspace_count(n: u32, k: u32) -> usize {
    let total = 3usize.pow(n);
    let digits = |v: usize| -> Vec<u8> { (0..n).map(|i| (v / 3usize.pow(i) % 3) as u8).collect() };
    let encode = |d: &[u8]| -> usize { d.iter().rev().fold(0, |acc, &x| acc * 3 + x as usize) };
    let mut spans = std::collections::BTreeSet::new();
    let mut choose = vec![0usize; k as usize];
    fn rec(
        pos: usize,
        start: usize,
        total: usize,
        choose: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if pos == choose.len() {
            f(choose);
            return;
        }
        for v in start..total {
            choose[pos] = v;
            rec(pos + 1, v + 1, total, choose, f);
        }
    }
    rec(0, 1, total, &mut choose, &mut |basis: &[usize]| {
        let vecs: Vec<Vec<u8>> = basis.iter().map(|&b| digits(b)).collect();
        let mut span = std::collections::BTreeSet::new();
        for coeffs in 0..3usize.pow(k) {
            let mut acc = vec![0u8; n as usize];
            for (i, v) in vecs.iter().enumerate() {
                let c = (coeffs / 3usize.pow(i as u32) % 3) as u8;
                for (a, &x) in acc.iter_mut().zip(v) {
                    *a = (*a + c * x) % 3;
                }
            }
            span.insert(encode(&acc));
        }
        if span.len() == 3usize.pow(k) {
            spans.insert(span);
        }
    });
    spans.len()
}

#[test]
fn q_binomial_values() {
    assert_eq!(q_binom(2, 1, 3), big(4));
    assert_eq!(q_binom(5, 0, 3), big(1));
    assert_eq!(q_binom(5, 0, 9), big(1));
    assert_eq!(q_binom(4, 2, 3), big(130));
    assert_eq!(subspace_count(4, 2), 130);
    assert_eq!(q_binom(3, 1, 3), big(subspace_count(3, 1) as u64));
    assert!(q_binom(2, 3, 3).is_zero());
}

#[test]
fn q_binomial_pascal() {
    for q in [3u64, 9] {
        for n in 1..=10 {
            for r in 1..=n {
                assert_eq!(
                    q_binom(n, r, q),
                    q_binom(n - 1, r - 1, q) + big(q).pow(r) * q_binom(n - 1, r, q)
                );
            }
        }
    }
}

#[test]
fn stirling_values() {
    assert_eq!(stirling2(3, 2), big(3));
    assert_eq!(stirling2(0, 0), big(1));
    for h in 1..12 {
        assert_eq!(stirling2(h, 1), big(1));
        assert_eq!(stirling2(h, h), big(1));
        assert!(stirling2(h, h + 1).is_zero());
        assert!(stirling2(h, 0).is_zero());
        for t in 1..=h {
            assert_eq!(stirling2(h, t), big(t as u64) * stirling2(h - 1, t) + stirling2(h - 1, t - 1));
        }
    }
}

#[test]
fn binomials_and_factorials() {
    assert_eq!(factorial(0), big(1));
    assert_eq!(factorial(6), big(720));
    assert_eq!(binomial(&big(10), 3), big(120));
    assert!(binomial(&big(2), 3).is_zero());
}

#[test]
fn gl_orders() {
    assert!(gl_order(0, 3).is_one());
    assert_eq!(gl_order(1, 3), big(2));
    assert_eq!(gl_order(2, 9), big(5760));
    assert_eq!(gl_order(2, 9), big((81 - 1) * (81 - 9)));
    let mut invertible = 0;
    for m in 0..81u32 {
        let d: Vec<u32> = (0..4).map(|i| m / 3u32.pow(i) % 3).collect();
        if !(d[0] * d[3] + 2 * d[1] * d[2]).is_multiple_of(3) {
            invertible += 1;
        }
    }
    assert_eq!(gl_order(2, 3), big(invertible));
    assert_eq!(invertible, 48);
}

#[test]
fn family_constant_examples() {
    let c = family_constants(family("DC1-"), 1, 3).unwrap();
    assert_eq!((c.a, c.b, c.n), (big(1), big(4), big(4)));
    let c = family_constants(family("DC3+"), 2, 3).unwrap();
    assert_eq!((c.a, c.b, c.n), (big(36), big(2), big(72)));
    let c = family_constants(family("DC2+"), 2, 3).unwrap();
    assert_eq!((c.a, c.b, c.n), (big(9), big(8), big(72)));
}

#[test]
fn parity_rules() {
    for f in CosetFamily::all() {
        for n in 1..=8 {
            let r = family_constants(f, n, 3);
            assert_eq!(r.is_ok(), f.valid_n(n), "{f} n={n}");
            if let Err(e) = r {
                assert!(matches!(e, Error::InvalidFamily { .. }), "{e}");
                assert!(e.is_usage());
            }
        }
    }
    assert!(CosetFamily::new(5, Sign::Plus).is_err());
    assert!("DC5+".parse::<CosetFamily>().is_err());
    assert!("DC1".parse::<CosetFamily>().is_err());
    assert_eq!(family("dc4-").to_string(), "DC4-");
}

#[test]
fn coset_order_examples() {
    let o = coset_orders(2, 3, 1).unwrap();
    assert_eq!(o.double_coset, big(648));
    let o0 = coset_orders(2, 3, 0).unwrap();
    assert_eq!(o0.double_coset, big(72));
    assert_eq!(big(2) * (o.double_coset + o0.double_coset), big(1440));
    assert!(coset_orders(2, 3, 2).is_err());
    let n1 = family_constants(family("DC1+"), 2, 3).unwrap().n;
    assert_eq!(n1, big(648));
    let n4 = family_constants(family("DC4-"), 3, 3).unwrap().n;
    assert_eq!(n4, coset_orders(3, 3, 0).unwrap().double_coset);
}

#[test]
fn consistency_sweep() {
    for q in [3, 9] {
        let rep = family_constants_consistency(8, q).unwrap();
        assert!(rep.passed(), "{:?}", rep.mismatches);
        let expected: usize = CosetFamily::all().iter().map(|f| f.valid_ns(8).count()).sum();
        assert_eq!(rep.checked, expected);
    }
}

#[test]
fn positivity_to_n20() {
    for q in [3, 9, 27] {
        for f in CosetFamily::all() {
            for n in f.valid_ns(20) {
                let c = family_constants(f, n, q).unwrap();
                assert!(!c.a.is_zero() && !c.b.is_zero(), "{f} n={n} q={q}");
                assert_eq!(c.n, &c.a * &c.b);
            }
        }
    }
}

proptest! {
    #[test]
    fn q_binom_symmetric(n in 0u32..12, r in 0u32..12, e in 1u32..4) {
        prop_assume!(r <= n);
        let q = 3u64.pow(e);
        prop_assert_eq!(q_binom(n, r, q), q_binom(n, n - r, q));
    }

    #[test]
    fn stirling_row_sums_to_bell(h in 0u32..14) {
        let row: BigUint = (0..=h).map(|t| stirling2(h, t)).sum();
        // Bell numbers via the triangle
        let mut tri = vec![BigUint::one()];
        for _ in 0..h {
            let mut next = vec![tri.last().unwrap().clone()];
            for x in &tri {
                let v = next.last().unwrap() + x;
                next.push(v);
            }
            tri = next;
        }
        prop_assert_eq!(row, tri[0].clone());
    }
}
