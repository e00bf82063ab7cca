use qknot::arith::{gcd, Fraction};
use qknot::knots::{kashaev_41, kashaev_41_row, kashaev_eval, kashaev_naive, knot, vol_cs, KNOTS};

// hyperbolic volumes from standard census tables
const VOLUMES: [(&str, f64); 10] = [
    ("4_1", 2.029883212819307),
    ("5_2", 2.828122088330783),
    ("6_1", 3.163963228883143),
    ("6_2", 4.400832516123045),
    ("6_3", 5.693021091281301),
    ("7_3", 4.592125697027284),
    ("7_4", 5.137941201873418),
    ("7_5", 6.443537380850870),
    ("7_6", 7.084925953510994),
    ("7_7", 7.643375172359955),
];

#[test]
fn volumes_match_tables() {
    assert_eq!(KNOTS.len(), VOLUMES.len());
    for (name, want) in VOLUMES {
        let (vol, _) = vol_cs(knot(name).unwrap(), 128).unwrap();
        assert!((vol.to_f64() - want).abs() < 1e-9, "{name}: {} vs {want}", vol.to_f64());
    }
}

#[test]
fn amphichiral_knots_have_zero_cs() {
    for name in ["4_1", "6_3"] {
        let (_, cs) = vol_cs(knot(name).unwrap(), 128).unwrap();
        assert!(cs.to_f64().abs() < 1e-25, "{name}");
    }
}

#[test]
fn evaluators_agree_for_figure_eight() {
    let k41 = knot("4_1").unwrap();
    for k in 1..=60 {
        let row = kashaev_41_row(k, 96).unwrap();
        for (h, v) in row {
            let x = Fraction::new(h, k).unwrap();
            let a = kashaev_41(x, 96).unwrap();
            let b = kashaev_eval(k41, x, 96).unwrap();
            let scale = a.abs().to_f64();
            assert!((&a - &b).abs().to_f64() < 1e-22 * scale, "{x}");
            assert!((a.re.to_f64() - v.to_f64()).abs() < 1e-22 * scale, "{x}");
        }
    }
}

#[test]
fn state_sum_matches_naive_sum() {
    for kn in KNOTS.iter() {
        for (h, k) in [(1, 2), (1, 3), (2, 5), (3, 7)] {
            if gcd(h, k) != 1 {
                continue;
            }
            let x = Fraction::new(h, k).unwrap();
            let a = kashaev_eval(kn, x, 96).unwrap();
            let b = kashaev_naive(kn, x, 96).unwrap();
            assert!((&a - &b).abs().to_f64() < 1e-20 * (1.0 + a.abs().to_f64()), "{} at {x}", kn.name);
        }
    }
}
