//! Tour of the Lorentz machinery on a sampled field: distribution function,
//! decreasing rearrangement, maximal function, quasinorms vs norms, and an
//! interpolation-of-norms check.

use mild_ns::grid::{Field, Grid};
use mild_ns::lorentz::{
    decreasing_rearrangement, distribution_function, field_lorentz, interpolation_check,
    lorentz_value, maximal_function, Exponent, LorentzIndex, NormKind,
};

fn main() -> mild_ns::Result<()> {
    let grid = Grid::new(2, 64, 2.0 * std::f64::consts::PI)?;
    // a bump plus a ridge: nontrivial level sets
    let f = Field::from_fn(grid, 0, |_, x| {
        let (dx, dy) = (x[0] - 3.0, x[1] - 3.0);
        2.0 * (-(dx * dx + dy * dy)).exp() + 0.5 * x[0].sin().abs()
    })?;

    println!("lambda_f(0.25) = {:.6}", distribution_function(&f, 0.25)?);
    println!("lambda_f(1.0)  = {:.6}", distribution_function(&f, 1.0)?);

    let rearr = decreasing_rearrangement(&f);
    println!(
        "rearrangement: {} pieces, support measure {:.6}, L1 = {:.6}",
        rearr.piece_count(),
        rearr.total_measure(),
        rearr.total_integral()
    );
    println!(
        "f*(1)  = {:.6}, f**(1) = {:.6}",
        rearr.value_at(1.0),
        maximal_function(&rearr, 1.0)?
    );

    for &(p, q) in &[(2.0, 1.0), (2.0, 2.0), (2.0, f64::INFINITY)] {
        let qidx = if q.is_infinite() {
            LorentzIndex::new(Exponent::Finite(p), Exponent::Infinity, NormKind::Quasinorm)?
        } else {
            LorentzIndex::quasinorm(p, q)?
        };
        let nidx = if q.is_infinite() {
            LorentzIndex::new(Exponent::Finite(p), Exponent::Infinity, NormKind::Norm)?
        } else {
            LorentzIndex::norm(p, q)?
        };
        let star = lorentz_value(&rearr, &qidx)?;
        let full = lorentz_value(&rearr, &nidx)?;
        println!(
            "(p,q) = ({p},{q}): quasinorm {star:.6} <= norm {full:.6} <= p' quasinorm {:.6}",
            p / (p - 1.0) * star
        );
    }

    // L^{p,p} = L^p
    println!(
        "||f||*_(3,3) = {:.12}, ||f||_L3 = {:.12}",
        field_lorentz(&f, &LorentzIndex::quasinorm(3.0, 3.0)?)?,
        f.lp_norm(3.0)
    );

    let report = interpolation_check(&f, 2.0, Exponent::Infinity, 0.5)?;
    println!(
        "interpolation at p = {}: weak margin {:.3e}, strong margin {:.3e}",
        report.p, report.weak.margin, report.strong.margin
    );
    Ok(())
}
