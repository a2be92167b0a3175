use hsprob::conjecture::{
    conjecture_search, exact_ratio, factorize, reconstruct, search, Factorization, Ranking, SearchOptions,
};
use hsprob::Rational;
use proptest::prelude::*;

fn top(p: f64, hw: f64, primes: &[u64], max_den: u64, ranking: Ranking) -> (i64, i64) {
    let opts = SearchOptions {
        primes: primes.to_vec(),
        max_denominator: max_den,
        ranking,
        limit: Some(1),
    };
    let c = search(p, p - hw, p + hw, &opts).unwrap();
    (c[0].num, c[0].den)
}

#[test]
fn closest_smooth_fraction_examples() {
    assert_eq!(top(0.00774006, 2e-5, &[2, 3, 5], 100_000, Ranking::Distance), (387, 50000));
    assert_eq!(top(0.000707020, 5e-6, &[2, 3, 5, 7, 11], 10_000, Ranking::Distance), (7, 9900));
    assert_eq!(top(0.5, 0.001, &[2], 16, Ranking::Distance), (1, 2));
}

#[test]
fn coincidence_ranking_examples() {
    assert_eq!(top(0.000707020, 5e-6, &[2, 3, 5, 7, 11], 10_000, Ranking::Coincidence), (7, 9900));
    assert_eq!(top(0.5, 0.001, &[2], 16, Ranking::Coincidence), (1, 2));
    // A 3-smooth denominator near 0.00774 is the likelier coincidence here.
    assert_eq!(top(0.00774006, 2e-5, &[2, 3, 5], 100_000, Ranking::Coincidence), (107, 13824));
}

#[test]
fn smallest_denominator_ranking_prefers_coarse_fractions() {
    assert_eq!(top(0.00774006, 2e-5, &[2, 3, 5], 100_000, Ranking::Denominator), (29, 3750));
    assert_eq!(top(0.000707020, 5e-6, &[2, 3, 5, 7, 11], 10_000, Ranking::Denominator), (1, 1408));
}

#[test]
fn exact_ratio_examples() {
    let cases = [
        ((387, 50000), (860, 6561), (59049, 1000000), "3^10 / 2^6·5^6"),
        ((7, 9900), (27, 1000), (70, 2673), "2·5·7 / 3^5·11"),
        ((169, 3093750), (16, 12375), (169, 4000), "13^2 / 2^5·5^3"),
    ];
    for (a, b, want, factored) in cases {
        let r = exact_ratio(Rational::new(a.0, a.1), Rational::new(b.0, b.1)).unwrap();
        assert_eq!((r.num, r.den), want);
        assert!(r.to_string().ends_with(factored), "{r}");
    }
}

#[test]
fn factorize_examples() {
    let f: Factorization = [(3, 8)].into_iter().collect();
    assert_eq!(factorize(6561), f);
    assert!(factorize(1).is_empty());
    assert_eq!(factorize(59049), [(3, 10)].into_iter().collect());
    assert_eq!(factorize(1 << 62), [(2, 62)].into_iter().collect());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn candidates_respect_the_contract(
        p in 0.001f64..0.999,
        hw in 0.0f64..0.002,
        mask in 1u8..64,
        max_den in 1u64..20_000,
    ) {
        let all = [2u64, 3, 5, 7, 11, 13];
        let primes: Vec<u64> = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        let (lo, hi) = (p - hw, p + hw);
        let c = conjecture_search(p, lo, hi, &primes, max_den).unwrap();
        for x in &c {
            prop_assert!(lo <= x.value && x.value <= hi);
            prop_assert!(x.den as u64 <= max_den);
            prop_assert_eq!(num_integer::gcd(x.num, x.den), 1);
            prop_assert!(x.den_factors.keys().all(|q| primes.contains(q)));
            prop_assert_eq!(reconstruct(&x.den_factors), Some(x.den as u64));
            prop_assert_eq!(reconstruct(&x.num_factors), Some(x.num.unsigned_abs()));
            prop_assert_eq!((x.value - p).abs(), x.distance);
        }
        prop_assert!(c.windows(2).all(|w| w[0].score <= w[1].score));
        // Completeness against brute force over every denominator.
        let smooth = |mut d: u64| { for &q in &primes { while d.is_multiple_of(q) { d /= q; } } d == 1 };
        let mut expected = 0;
        for d in (1..=max_den).filter(|&d| smooth(d)) {
            for n in (lo * d as f64).floor() as i64..=(hi * d as f64).ceil() as i64 {
                let v = n as f64 / d as f64;
                if lo <= v && v <= hi && num_integer::gcd(n, d as i64) == 1 {
                    expected += 1;
                }
            }
        }
        prop_assert_eq!(c.len(), expected);
    }
}
