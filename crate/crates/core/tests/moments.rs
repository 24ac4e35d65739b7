use num_bigint::BigInt;

use kloos::charsum::{KloostermanTable, SumTables};
use kloos::code::FamilyCode;
use kloos::constants::CosetFamily;
use kloos::moments::{
    full_verification, oracle_series, pless_lhs, pless_rhs, sk_via_pless, sk_via_printed_formula,
    PlessInstance, Status, VerificationReport, MAX_H,
};
use kloos::{Error, Field};

fn family(s: &str) -> CosetFamily {
    s.parse().unwrap()
}

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn instance(f: &Field, name: &str, n: u32, j: usize) -> PlessInstance {
    let tables = SumTables::new(f).unwrap();
    let code = FamilyCode::build(family(name), n, &tables, j).unwrap();
    PlessInstance::from_code(&code, f.r() as u32).unwrap()
}

#[test]
fn pless_small_instances() {
    let f = Field::new(1, None).unwrap();
    let inst = instance(&f, "DC1-", 1, 4);
    assert_eq!(pless_lhs(&inst, 0), BigInt::from(3));
    assert_eq!(pless_rhs(&inst, 0).unwrap(), BigInt::from(3));
    assert_eq!(pless_lhs(&inst, 1), BigInt::from(4));
    assert_eq!(pless_rhs(&inst, 1).unwrap(), BigInt::from(4));
    let inst = instance(&f, "DC2+", 2, 3);
    assert_eq!(pless_lhs(&inst, 3), pless_rhs(&inst, 3).unwrap());
}

#[test]
fn pless_identity_through_h10() {
    for r in 1..=2 {
        let f = Field::new(r, None).unwrap();
        for fam in CosetFamily::all() {
            for n in fam.valid_ns(4) {
                let tables = SumTables::new(&f).unwrap();
                let code = FamilyCode::build(fam, n, &tables, 10).unwrap();
                for inst in [
                    PlessInstance::from_code(&code, r as u32).unwrap(),
                    PlessInstance::from_code_alt(&code, r as u32).unwrap(),
                ] {
                    for h in 0..=10 {
                        assert_eq!(pless_lhs(&inst, h), pless_rhs(&inst, h).unwrap(), "{fam} n={n} h={h}");
                    }
                }
            }
        }
    }
}

#[test]
fn insufficient_prefix() {
    let f = Field::new(1, None).unwrap();
    let inst = instance(&f, "DC2+", 2, 2);
    assert!(matches!(pless_rhs(&inst, 3), Err(Error::InsufficientPrefix { .. })));
}

#[test]
fn series_examples() {
    let f = Field::new(1, None).unwrap();
    let tables = SumTables::new(&f).unwrap();
    assert_eq!(sk_via_pless(family("DC1-"), 1, &tables, 4).unwrap().values, ints(&[-1, 1, -1, 1]));
    assert_eq!(sk_via_pless(family("DC2+"), 2, &tables, 3).unwrap().values, ints(&[1, 1, 1]));
    let printed = sk_via_printed_formula(family("DC1-"), 1, &tables, 4).unwrap();
    assert!(printed.agrees());
    assert_eq!(printed.series().unwrap().values, ints(&[-1, 1, -1, 1]));
    for (name, n, h) in [("DC3+", 2, 4), ("DC4-", 3, 3)] {
        let derived = sk_via_pless(family(name), n, &tables, h).unwrap();
        let printed = sk_via_printed_formula(family(name), n, &tables, h).unwrap();
        assert!(printed.agrees());
        assert_eq!(printed.series().unwrap().values, derived.values);
    }
}

#[test]
fn oracle_equality_and_family_independence() {
    for r in 1..=3 {
        let f = Field::new(r, None).unwrap();
        let tables = SumTables::new(&f).unwrap();
        let table = KloostermanTable::new(&f).unwrap();
        let mut odd = Vec::new();
        for fam in CosetFamily::all() {
            for n in fam.valid_ns(if r == 3 { 4 } else { 6 }) {
                let s = sk_via_pless(fam, n, &tables, 8).unwrap();
                assert_eq!(s.values, oracle_series(fam, n, &table, 8).values, "{fam} n={n}");
                if !fam.is_even() {
                    odd.push(s.values);
                }
            }
        }
        assert!(odd.windows(2).all(|w| w[0] == w[1]));
    }
}

#[test]
fn h_guard() {
    let f = Field::new(1, None).unwrap();
    let tables = SumTables::new(&f).unwrap();
    assert!(matches!(
        sk_via_pless(family("DC1-"), 1, &tables, MAX_H + 1),
        Err(Error::Guard { .. })
    ));
}

#[test]
fn verification_q3() {
    let f = Field::new(1, None).unwrap();
    let rep = full_verification(&f, 4, 8).unwrap();
    assert!(rep.passed, "{:?}", rep.failures());
    assert!(rep.all_checks().all(|c| c.status != Status::Fail));
    let text = serde_json::to_string(&rep).unwrap();
    let back: VerificationReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, rep);
}

#[test]
fn verification_q9() {
    let f = Field::new(2, None).unwrap();
    let rep = full_verification(&f, 3, 6).unwrap();
    assert!(rep.passed, "{:?}", rep.failures());
    assert!(!rep.instances.is_empty());
}
