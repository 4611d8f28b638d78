// scratch validation: brute-force pseudocritical point vs golden-section search
use xychain::criticality::{find_pseudocritical, PseudocritSearch};
use xychain::model::ModelParams;
use xychain::quadrature::QuadratureSpec;
use xychain::thermo::{susceptibility, susceptibility_finite_n, ThermalPoint};

fn main() {
    let quad = QuadratureSpec::default();
    let t = (-5.0f64).exp();
    let tp = ThermalPoint::new(t).unwrap();

    let r = find_pseudocritical(1.0, t, &PseudocritSearch::default(), &quad).unwrap();
    println!("search:      lambda_m={:.12} chi_max={:.12}", r.lambda_m, r.chi_max);

    // brute force: dense grid around the search result
    let mut best = (0.0, f64::NEG_INFINITY);
    let n = 2000;
    for i in 0..=n {
        let lambda = r.lambda_m - 5e-4 + 1e-3 * i as f64 / n as f64;
        let chi = susceptibility(ModelParams::new(1.0, lambda).unwrap(), tp, &quad).unwrap();
        if chi > best.1 {
            best = (lambda, chi);
        }
    }
    println!("brute force: lambda_m={:.12} chi_max={:.12}", best.0, best.1);
    println!("difference:  {:.3e}", (best.0 - r.lambda_m).abs());

    // independent chi check at the peak via the discrete mode sum
    let chi_n = susceptibility_finite_n(ModelParams::new(1.0, r.lambda_m).unwrap(), tp, 1 << 15)
        .unwrap();
    println!("chi integral={:.12} finite-N={:.12} diff={:.3e}", r.chi_max, chi_n, (r.chi_max - chi_n).abs());

    // drift fit over two windows
    for (label, lo, hi) in [("spec window e-6..e-3", -6.0, -3.0), ("warm window e-4.5..e-1.5", -4.5, -1.5)] {
        let temps: Vec<f64> = (0..7).map(|i| (lo + (hi - lo) * i as f64 / 6.0).exp()).collect();
        let fit = xychain::criticality::pseudocritical_exponent(
            1.0, &temps, &PseudocritSearch::default(), &quad).unwrap();
        println!("{label}: slope={:.4} r2={:.6}", fit.slope, fit.r_squared);
    }
}
