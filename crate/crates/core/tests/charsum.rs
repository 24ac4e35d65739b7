use num_bigint::BigInt;

use kloos::charsum::{
    delta, delta1_closed_form, delta_table, kloosterman, kloosterman_gl, kloosterman_gl_bruteforce,
    mk_moment, sk_moment, square_argument_sum, verify_lemma_m, verify_prop_f, KloostermanTable,
    SumTables,
};
use kloos::{Elem, Error, Field};

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

/// Moments from a separate, table-free evaluation, h = 0..=10.
const SK9: [i64; 11] = [4, 5, 31, 131, 643, 3155, 15691, 78251, 390883, 1953635, 9766651];
const MK9: [i64; 11] = [8, 1, 71, 19, 1187, 1171, 24011, 45739, 522467, 1430371, 11865851];
const SK27: [i64; 11] = [
    13, -13, 337, -337, 13945, -11353, 674257, -188257, 35440105, 18229847, 1953610177,
];
const MK27: [i64; 11] = [
    26, 1, 701, 55, 37097, -15929, 2473361, -3945185, 185969897, -579900329, 15177987521,
];

#[test]
fn prime_field_values() {
    let f = Field::new(1, None).unwrap();
    assert_eq!(kloosterman(&f, Elem::ONE).unwrap(), -1);
    assert_eq!(kloosterman(&f, f.from_int(2)).unwrap(), 2);
    assert!(matches!(kloosterman(&f, Elem::ZERO), Err(Error::ZeroArgument(_))));
    let t = KloostermanTable::new(&f).unwrap();
    assert_eq!(t.sk_moments(10), ints(&[1, -1, 1, -1, 1, -1, 1, -1, 1, -1, 1]));
    assert_eq!(t.mk_moments(10), ints(&[2, 1, 5, 7, 17, 31, 65, 127, 257, 511, 1025]));
}

#[test]
fn q9_values_under_both_moduli() {
    for m in [[1u8, 0, 1], [2, 2, 1]] {
        let f = Field::new(2, Some(&m)).unwrap();
        let t = KloostermanTable::new(&f).unwrap();
        let mut ks: Vec<i64> = t.entries().map(|(_, k)| k).collect();
        ks.sort();
        assert_eq!(ks, vec![-4, -4, -1, -1, 2, 2, 2, 5]);
        assert_eq!(t.sk_moments(10), ints(&SK9));
        assert_eq!(t.mk_moments(10), ints(&MK9));
    }
}

#[test]
fn q27_values() {
    let f = Field::new(3, None).unwrap();
    let t = KloostermanTable::new(&f).unwrap();
    assert_eq!(t.sk_moments(10), ints(&SK27));
    assert_eq!(t.mk_moments(10), ints(&MK27));
    assert_eq!(sk_moment(&f, 4).unwrap(), BigInt::from(SK27[4]));
    assert_eq!(mk_moment(&f, 3).unwrap(), BigInt::from(MK27[3]));
}

#[test]
fn weil_bound_and_square_sums() {
    for r in 1..=5 {
        let f = Field::new(r, None).unwrap();
        let t = KloostermanTable::new(&f).unwrap();
        let q = f.q() as i64;
        assert!(t.entries().all(|(_, k)| k * k <= 4 * q));
        for h in 0..=6 {
            assert_eq!(square_argument_sum(&t, h), 2 * t.sk_moment(h));
        }
    }
}

#[test]
fn gl_recursion_against_enumeration() {
    let f = Field::new(1, None).unwrap();
    assert_eq!(kloosterman_gl(&f, 2, Elem::ONE).unwrap(), BigInt::from(21));
    for r in 1..=2 {
        let f = Field::new(r, None).unwrap();
        for a in f.nonzero() {
            for t in 1..=2 {
                assert_eq!(
                    kloosterman_gl(&f, t, a).unwrap(),
                    BigInt::from(kloosterman_gl_bruteforce(&f, t, a).unwrap())
                );
            }
        }
    }
    assert_eq!(kloosterman_gl(&f, 0, Elem::ONE).unwrap(), BigInt::from(1));
    assert!(kloosterman_gl_bruteforce(&f, 3, Elem::ONE).is_err());
}

#[test]
fn delta_against_nested_enumeration() {
    for r in 1..=2 {
        let f = Field::new(r, None).unwrap();
        let sums: Vec<Elem> = f.nonzero().map(|x| f.add(x, f.inv(x).unwrap())).collect();
        let q = f.q() as usize;
        let mut d1 = vec![0u64; q];
        let mut d2 = vec![0u64; q];
        let mut d3 = vec![0u64; q];
        for &a in &sums {
            d1[a.index()] += 1;
            for &b in &sums {
                let ab = f.add(a, b);
                d2[ab.index()] += 1;
                for &c in &sums {
                    d3[f.add(ab, c).index()] += 1;
                }
            }
        }
        assert_eq!(delta_table(&f, 1).unwrap(), d1);
        assert_eq!(delta_table(&f, 2).unwrap(), d2);
        assert_eq!(delta_table(&f, 3).unwrap(), d3);
        for beta in f.elements() {
            assert_eq!(delta1_closed_form(&f, beta), d1[beta.index()]);
        }
        assert_eq!(delta(&f, 0, Elem::ZERO).unwrap(), 1);
    }
}

#[test]
fn delta2_bound_with_equality_at_zero() {
    for r in 1..=4 {
        let f = Field::new(r, None).unwrap();
        let d2 = delta_table(&f, 2).unwrap();
        let bound = 2 * f.q() as u64 - 4;
        assert!(d2.iter().all(|&d| d <= bound));
        assert_eq!(d2[0], bound);
    }
}

#[test]
fn lemma_m_and_prop_f() {
    for r in 1..=3 {
        let f = Field::new(r, None).unwrap();
        let t = SumTables::new(&f).unwrap();
        for m in 0..=SumTables::MAX_M {
            for a in f.nonzero() {
                assert!(t.lemma_m(m, a).unwrap().holds, "q={} m={m}", f.q());
            }
            for beta in f.elements() {
                assert!(t.prop_f(m, beta).unwrap().holds, "q={} m={m}", f.q());
            }
        }
        assert!(t.lemma_m(4, Elem::ONE).is_err());
    }
    let f = Field::new(1, None).unwrap();
    assert!(verify_lemma_m(&f, 2, Elem::ONE).unwrap().holds);
    assert!(verify_prop_f(&f, 1, Elem::ZERO).unwrap().holds);
}
