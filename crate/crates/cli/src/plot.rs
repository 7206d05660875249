//! Tab-separated samples of `f`, `ln f` and `h = f″f − f′²`.

use crate::CliError;
use dhlab_core::polycert::{logconcavity_defect, Interval, Polynomial};
use dhlab_core::rational::to_f64;
use dhlab_core::Rational;
use num_traits::Signed;
use std::fmt::Write;

pub struct PlotSource {
    pub pieces: Vec<(Interval, Polynomial)>,
}

/// `%.12g`-style rendering: 12 significant digits, trailing zeros dropped.
pub fn decimal12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `resolution` evenly spaced interior points per piece:
/// `l + (i+1)(u−l)/(resolution+1)`.
pub fn plot_pieces(source: &PlotSource, resolution: usize) -> Result<String, CliError> {
    if resolution == 0 {
        return Err(CliError::Invalid("resolution must be positive".into()));
    }
    let mut out = String::from("t\tf\tln_f\th\n");
    let steps = Rational::from_integer((resolution as i64 + 1).into());
    for (index, (interval, density)) in source.pieces.iter().enumerate() {
        let (Some(lo), Some(hi)) = (interval.lower(), interval.upper()) else {
            return Err(CliError::Invalid(format!(
                "piece {index} on {interval} is unbounded and cannot be sampled"
            )));
        };
        let defect = logconcavity_defect(density);
        writeln!(out, "# piece {index} {interval}: f = {density}").unwrap();
        let width = (hi - lo) / &steps;
        for i in 1..=resolution {
            let t = lo + &width * Rational::from_integer((i as i64).into());
            let f = density.evaluate(&t);
            if !f.is_positive() {
                return Err(CliError::Invalid(format!(
                    "NonPositiveDensity: f({t}) = {f} in piece {index}, ln f undefined"
                )));
            }
            let ff = to_f64(&f);
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                decimal12(to_f64(&t)),
                decimal12(ff),
                decimal12(ff.ln()),
                decimal12(to_f64(&defect.evaluate(&t)))
            )
            .unwrap();
        }
    }
    Ok(out)
}
