//! Ring axioms, degree oracle and the h0 brute-force oracle.

use dpfib::chowring::{
    admissible_monomials, frac, h0, q, BundleSpec, ChowClass, DivisorClass, WeightedBundleSpec, Q,
};
use proptest::prelude::*;

fn bundle_strategy() -> impl Strategy<Value = BundleSpec> {
    (1usize..=5)
        .prop_flat_map(|n| proptest::collection::vec(0i64..=4, n))
        .prop_map(|mut tail| {
            tail.sort_unstable();
            BundleSpec::from_tail(&tail).unwrap()
        })
}

fn class_strategy(n: usize) -> impl Strategy<Value = ChowClass> {
    proptest::collection::vec((-6i64..=6, 1i64..=3), 2 * (n + 1)).prop_map(move |cs| {
        let terms: Vec<(usize, usize, Q)> = cs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| (i / 2, i % 2, frac(a, b)))
            .collect();
        ChowClass::from_terms(n, &terms)
    })
}

fn ring_and_triple() -> impl Strategy<Value = (BundleSpec, ChowClass, ChowClass, ChowClass)> {
    bundle_strategy().prop_flat_map(|b| {
        let n = b.n();
        (
            Just(b),
            class_strategy(n),
            class_strategy(n),
            class_strategy(n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms((b, x, y, z) in ring_and_triple()) {
        let r = b.ring();
        let xy = r.mul(&x, &y).unwrap();
        prop_assert_eq!(&xy, &r.mul(&y, &x).unwrap());
        prop_assert_eq!(
            r.mul(&xy, &z).unwrap(),
            r.mul(&x, &r.mul(&y, &z).unwrap()).unwrap()
        );
        let yz = &y + &z;
        prop_assert_eq!(
            r.mul(&x, &yz).unwrap(),
            &r.mul(&x, &y).unwrap() + &r.mul(&x, &z).unwrap()
        );
        prop_assert_eq!(r.mul(&r.one(), &x).unwrap(), x.clone());
        prop_assert!((&x - &x).is_zero());
    }
}

/// Degree of a product of `n + 1` divisors `alpha_i H + beta_i F` on a
/// `P^n`-bundle with `deg H^{n+1} = c1` and `deg H^n F = 1`: only terms with at
/// most one `F` survive.
fn degree_oracle(c1: i64, divisors: &[(i64, i64)]) -> i64 {
    let all_h: i64 = divisors.iter().map(|d| d.0).product();
    let one_f: i64 = (0..divisors.len())
        .map(|j| {
            divisors
                .iter()
                .enumerate()
                .map(|(i, d)| if i == j { d.1 } else { d.0 })
                .product::<i64>()
        })
        .sum();
    c1 * all_h + one_f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn top_degree_matches_oracle(
        b in bundle_strategy(),
        ds in proptest::collection::vec((-4i64..=4, -4i64..=4), 6),
    ) {
        let n = b.n();
        let ds = &ds[..n + 1];
        let r = b.ring();
        let classes: Vec<ChowClass> = ds.iter().map(|&(a, c)| r.divisor(&DivisorClass::int(a, c))).collect();
        let got = r.degree(&r.product(&classes).unwrap()).unwrap();
        prop_assert_eq!(got, q(degree_oracle(b.c1(), ds)));
    }

    #[test]
    fn weighted_degree_matches_oracle(
        a in 0i64..=4,
        k in -3i64..=3,
        ds in proptest::collection::vec((-4i64..=4, -4i64..=4), 4),
    ) {
        let wb = WeightedBundleSpec::new(a, -2 * k, -3 * k);
        let r = wb.ring();
        let classes: Vec<ChowClass> = ds.iter().map(|&(x, y)| r.divisor(&DivisorClass::int(x, y))).collect();
        let got = r.degree(&r.product(&classes).unwrap()).unwrap();
        // deg(H^3 F) = 1/6 and deg(H^4) = (a + b/2 + c/3)/6 = (a - 2k)/6.
        let all_h: i64 = ds.iter().map(|d| d.0).product();
        let one_f: i64 = (0..4)
            .map(|j| ds.iter().enumerate().map(|(i, d)| if i == j { d.1 } else { d.0 }).product::<i64>())
            .sum();
        let expected = (q(a - 2 * k) * q(all_h) + q(one_f)) / q(6);
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn mixing_bundles_is_rejected() {
    let r = BundleSpec::from_tail(&[0, 1]).unwrap().ring();
    let x = ChowClass::monomial(3, 1, 0);
    assert!(r.mul(&r.h(), &x).is_err());
}

/// Every exponent vector of `rank` entries summing to `a`, by brute force over
/// the full cube `[0, a]^rank`.
fn brute_monomials(rank: usize, a: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (a as usize + 1).pow(rank as u32);
    for code in 0..total {
        let mut e = Vec::with_capacity(rank);
        let mut c = code;
        for _ in 0..rank {
            e.push((c % (a as usize + 1)) as u32);
            c /= a as usize + 1;
        }
        if e.iter().sum::<u32>() == a {
            out.push(e);
        }
    }
    out
}

fn tails(n: usize, max: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for t in tails(n - 1, max) {
        let start = t.last().copied().unwrap_or(0);
        for x in start..=max {
            let mut u = t.clone();
            u.push(x);
            out.push(u);
        }
    }
    out
}

#[test]
fn h0_matches_brute_force() {
    let mut bundles = 0;
    for n in 1..=5 {
        for tail in tails(n, 3) {
            let b = BundleSpec::from_tail(&tail).unwrap();
            bundles += 1;
            for a in 0..=3u32 {
                let mons = brute_monomials(b.rank(), a);
                for bb in -6..=6i64 {
                    let expected: u64 = mons
                        .iter()
                        .map(|e| {
                            let w: i64 =
                                e.iter().zip(b.weights()).map(|(&x, &y)| x as i64 * y).sum();
                            (w + bb + 1).max(0) as u64
                        })
                        .sum();
                    assert_eq!(h0(&b, a, bb), expected, "{b} a={a} b={bb}");
                    let admissible = mons
                        .iter()
                        .filter(|e| {
                            e.iter()
                                .zip(b.weights())
                                .map(|(&x, &y)| x as i64 * y)
                                .sum::<i64>()
                                + bb
                                >= 0
                        })
                        .count();
                    assert_eq!(admissible_monomials(&b, a, bb).len(), admissible);
                }
            }
        }
    }
    assert_eq!(bundles, 4 + 10 + 20 + 35 + 56);
}

#[test]
fn h0_of_tautological_bundle_is_sum_of_sections() {
    // h0(O(H + bF)) = sum h0(P1, O(a_i + b)).
    let b = BundleSpec::from_tail(&[1, 2, 2]).unwrap();
    assert_eq!(h0(&b, 1, -1), 1 + 2 + 2);
    assert_eq!(h0(&b, 0, 3), 4);
}
