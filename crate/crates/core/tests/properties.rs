use proptest::prelude::*;
use qknot::arith::{cf_expand, dedekind_sum, gcd, mod_inverse, sigma_r, ContinuedFraction, Fraction};
use qknot::knots::kashaev_41;
use qknot::special::{bracket, e_frac, pochhammer, PComplex};
use qknot::stats::{hexfloat, parse_hexfloat, stable_cdf, Cache, StableLawSpec};

fn coprime_pair(max: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max).prop_flat_map(|k| (1..k).prop_map(move |h| (h, k))).prop_filter("coprime", |(h, k)| gcd(*h, *k) == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fraction_text_roundtrip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let f = Fraction::new(n, d).unwrap();
        prop_assert_eq!(f.to_string().parse::<Fraction>().unwrap(), f);
        prop_assert_eq!(gcd(f.num(), f.den()), 1);
    }

    #[test]
    fn continued_fraction_roundtrip((h, k) in coprime_pair(5000)) {
        let a = Fraction::new(h, k).unwrap();
        let cf = cf_expand(a).unwrap();
        prop_assert_eq!(cf.value(), a);
        let (sigma, r) = sigma_r(a).unwrap();
        prop_assert!(sigma >= r && r >= 1);
    }

    #[test]
    fn quotients_determine_value(q in prop::collection::vec(1i64..20, 1..8)) {
        let mut q = q;
        q[0] = q[0].max(2);
        if q.len() > 1 && *q.last().unwrap() == 1 {
            *q.last_mut().unwrap() = 2;
        }
        let cf = ContinuedFraction::from_quotients(q.clone()).unwrap();
        let a = cf.value();
        prop_assert_eq!(cf_expand(a).map(|c| c.value()).ok(), Some(a));
        prop_assert_eq!(sigma_r(a).unwrap().1, q.len() as i64);
    }

    #[test]
    fn dedekind_reciprocity((p, q) in coprime_pair(2000)) {
        let lhs = dedekind_sum(p, q).unwrap().to_f64() + dedekind_sum(q, p).unwrap().to_f64();
        let rhs = (p as f64 / q as f64 + q as f64 / p as f64 + 1.0 / (p * q) as f64) / 12.0 - 0.25;
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()));
    }

    #[test]
    fn inverse_is_inverse((a, m) in coprime_pair(100_000)) {
        prop_assert_eq!((a * mod_inverse(a, m).unwrap()).rem_euclid(m), 1);
    }

    #[test]
    fn hexfloat_roundtrip(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let back = parse_hexfloat(&hexfloat(x)).unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn root_of_unity_has_order_den((h, k) in coprime_pair(60)) {
        let z = e_frac(Fraction::new(h, k).unwrap(), 128);
        let one = PComplex::one(128);
        prop_assert!((&z.powi(k) - &one).abs().to_f64() < 1e-30);
        // (q)_{k−1} = k
        let p = pochhammer(Fraction::new(h, k).unwrap(), k - 1, 128);
        prop_assert!((&p - &PComplex::from_f64(128, k as f64, 0.0)).abs().to_f64() < 1e-25);
    }

    #[test]
    fn bracket_reflection((h, k) in coprime_pair(40), n in 0i64..40) {
        let n = n % k;
        let a = Fraction::new(h, k).unwrap();
        let abar = Fraction::new(-h, k).unwrap();
        let prod = &bracket(a, n, 128) * &bracket(abar, k - 1 - n, 128);
        prop_assert!((&prod - &PComplex::one(128)).abs().to_f64() < 1e-30);
    }

    #[test]
    fn figure_eight_values_are_real_and_symmetric((h, k) in coprime_pair(80)) {
        let j = kashaev_41(Fraction::new(h, k).unwrap(), 96).unwrap();
        let jc = kashaev_41(Fraction::new(k - h, k).unwrap(), 96).unwrap();
        prop_assert!(j.im.to_f64().abs() < 1e-20);
        prop_assert!(j.re.to_f64() >= 1.0);
        prop_assert!((&j - &jc).abs().to_f64() < 1e-20 * j.re.to_f64());
    }

    #[test]
    fn stable_cdf_is_monotone(a in -10.0f64..60.0, w in 0.01f64..5.0) {
        let s = StableLawSpec::conjectured();
        let (fa, fb) = (stable_cdf(a, &s), stable_cdf(a + w, &s));
        prop_assert!((0.0..=1.0).contains(&fa) && fa <= fb + 1e-14);
    }
}

#[test]
fn cache_is_last_write_wins() {
    let dir = tempfile::tempdir().unwrap();
    let c = Cache::new(dir.path());
    c.append("4_1", 64, &[(1, 3, 2.5), (2, 5, 1.0)]).unwrap();
    c.append("4_1", 64, &[(2, 5, 3.75)]).unwrap();
    c.append("4_1", 128, &[(1, 3, 9.0)]).unwrap();
    let m = c.load("4_1", 64).unwrap();
    assert_eq!(m[&(1, 3)], 2.5);
    assert_eq!(m[&(2, 5)], 3.75);
    assert!(c.load("5_2", 64).unwrap().is_empty());
}
