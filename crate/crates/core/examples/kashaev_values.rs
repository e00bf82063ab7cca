// Kashaev invariants at a few roots of unity, three ways: the literal sum of
// `|(q)_r|²`, the 4₁ row evaluator, and the general state sum.

use qknot::arith::Fraction;
use qknot::knots::{kashaev_41, kashaev_41_row, kashaev_eval, knot};
use qknot::special::{pochhammer, PComplex};

pub fn run_example() -> qknot::Result<()> {
    let prec = 128;
    let fig8 = knot("4_1")?;
    for x in ["0/1", "1/2", "1/3", "2/5", "3/7"] {
        let x: Fraction = x.parse()?;
        let mut lit = PComplex::zero(prec);
        for r in 0..x.den() {
            let p = pochhammer(x, r, prec);
            lit += &(&p * &p.conj());
        }
        let fast = kashaev_41(x, prec)?;
        let general = kashaev_eval(fig8, x, prec)?;
        let gap = (&fast - &general).abs().to_f64().max((&fast - &lit).abs().to_f64());
        println!("J_4_1(e({x})) = {:.12}  (spread {gap:.1e})", fast.re.to_f64());
        assert!(gap < 1e-30);
    }

    // one row h/7 for every h coprime to 7
    for (h, v) in kashaev_41_row(7, prec)? {
        println!("  h = {h}: {:.6}", v.to_f64());
    }

    let x: Fraction = "1/5".parse()?;
    for name in ["5_2", "6_1", "7_4"] {
        let j = kashaev_eval(knot(name)?, x, prec)?;
        println!("J_{name}(e(1/5)) = {j:.10}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qknot::Result<()> {
    run_example()
}
