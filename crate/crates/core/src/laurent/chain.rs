use super::series::solve_wp;
use super::{LaurentSeries, SeriesError, Walk};
use crate::rami::IndexSequence;

/// Default number of known orders for [`chain_expand`]. Enough for the
/// principal part of `1/m_j` up to `j = 12`.
pub const DEFAULT_PRECISION: i64 = 128;

/// Expansions `m_0, ..., m_i` with `x_j = a_j + m_j(t)`, `t = x_0 + a_0`.
///
/// Each `m_j` is the positive-order root of
/// `m_j^2 + m_j = f(a_{j-1} + m_{j-1}) + a_j^2 + a_j`, where
/// `f(x) = x + 1 + 1/x`. The constant terms cancel along an alternating
/// chain, so the right-hand side has positive order.
pub fn chain_expand(seq: &IndexSequence, precision: i64) -> Result<Vec<LaurentSeries>, SeriesError> {
    let walk = Walk::new(seq)?;
    let f4 = walk.field();
    let one = LaurentSeries::constant(f4.one(), precision);
    let mut out = vec![LaurentSeries::parameter(f4, precision)];
    for j in 1..=walk.level() {
        let prev = &out[j - 1];
        let x_prev = LaurentSeries::constant(walk.coordinate(j - 1), precision).add(prev)?;
        let f = x_prev.add(&one)?.add(&x_prev.inv()?)?;
        let a = walk.coordinate(j);
        let wp_a = a.square().add(a).expect("F_4");
        let rhs = f.add(&LaurentSeries::constant(wp_a, precision))?;
        let m = solve_wp(&rhs)?;
        if m.is_zero() {
            // m_j never vanishes; its leading term lies past the precision
            return Err(SeriesError::InsufficientPrecision { needed: precision + 1, available: precision });
        }
        out.push(m);
    }
    Ok(out)
}
