use crate::algebra::LeibnizAlgebra;
use crate::error::{Error, Result};
use crate::rack::structure::RackStructure;
use crate::scalar::Scalar;

/// Structure constants recovered from a rack by finite differences.
#[derive(Debug, Clone)]
pub struct TangentBracket {
    pub table: LeibnizAlgebra<f64>,
    /// Richardson estimate per constant, flat in the same order as the table.
    pub error: Vec<f64>,
}

impl TangentBracket {
    pub fn max_error(&self) -> f64 {
        self.error.iter().copied().fold(0.0, f64::max)
    }
}

/// `max |c - c₀| / max(1, max |c₀|)` over all structure constants.
pub fn relative_table_error(table: &LeibnizAlgebra<f64>, oracle: &LeibnizAlgebra<f64>) -> f64 {
    let denom = oracle.flat_table().iter().map(|c| c.abs()).fold(1.0, f64::max);
    table.max_constant_diff(oracle) / denom
}

fn mixed_difference<S: Scalar>(rack: &RackStructure<S>, dim: usize, t: f64, eps: f64) -> Result<Vec<f64>> {
    let chart = rack.chart().ok_or_else(|| Error::Chart(format!("rack '{}' has no chart at the unit", rack.name())))?;
    let carrier = rack.carrier();
    let point = |i: usize, s: f64| -> Result<Vec<S>> {
        let mut c = vec![0.0; dim];
        c[i] = s;
        let p = (chart.point)(&c)?;
        if !carrier.contains(&p) {
            return Err(Error::Chart(format!("chart point at step {s:e} along axis {i} leaves the carrier")));
        }
        Ok(p)
    };
    let mut table = vec![0.0; dim * dim * dim];
    for i in 0..dim {
        let (xp, xm) = (point(i, t)?, point(i, -t)?);
        for j in 0..dim {
            let (yp, ym) = (point(j, eps)?, point(j, -eps)?);
            let c = |x: &[S], y: &[S]| -> Result<Vec<f64>> {
                let p = rack.product(x, y)?;
                if !carrier.contains(&p) {
                    return Err(Error::Chart("product of chart points leaves the carrier".into()));
                }
                (chart.coords)(&p)
            };
            let (pp, mp, pm, mm) = (c(&xp, &yp)?, c(&xm, &yp)?, c(&xp, &ym)?, c(&xm, &ym)?);
            for k in 0..dim {
                table[(i * dim + j) * dim + k] = (pp[k] - mp[k] - pm[k] + mm[k]) / (4.0 * t * eps);
            }
        }
    }
    Ok(table)
}

/// Mixed second derivative of `(t e_i) ▷ (ε e_j)` at the unit in the rack's
/// chart, by the four-point central difference. The error estimate compares
/// steps `(t, ε)` and `(t/2, ε/2)`: `|D(h) - D(h/2)| · 4/3`.
pub fn tangent_leibniz<S: Scalar>(rack: &RackStructure<S>, t: f64, eps: f64) -> Result<TangentBracket> {
    if !(t > 0.0 && eps > 0.0) {
        return Err(Error::Precondition("finite-difference steps must be positive".into()));
    }
    let dim = rack
        .chart()
        .ok_or_else(|| Error::Chart(format!("rack '{}' has no chart at the unit", rack.name())))?
        .dim;
    let coarse = mixed_difference(rack, dim, t, eps)?;
    let fine = mixed_difference(rack, dim, t / 2.0, eps / 2.0)?;
    let error = coarse.iter().zip(&fine).map(|(a, b)| (a - b).abs() * 4.0 / 3.0).collect();
    Ok(TangentBracket {
        table: LeibnizAlgebra::from_flat(dim, coarse)?,
        error,
    })
}
