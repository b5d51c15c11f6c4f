use super::GeometryError;
use crate::lifting::{ray_from, LiftKind, LiftOptions, LiftPoint, RamDatum};
use crate::numerics::{Chart, C64};

/// A slit on the boundary of a star.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundarySlit {
    pub theta: f64,
    pub rho: f64,
    pub foot: RamDatum,
}

/// The terminated rays out of the star of `w` (which lies over `z0`): one
/// candidate direction per singular value.
pub fn star_boundary(chart: &Chart, w: C64, z0: C64) -> Result<Vec<BoundarySlit>, GeometryError> {
    let start = LiftPoint { w, value: z0 };
    let opts = LiftOptions::default();
    let mut out = Vec::new();
    for c in chart.singular_value_points() {
        let theta = (c - z0).arg();
        let res = ray_from(chart, start, theta, &opts)?;
        if res.kind == LiftKind::Terminated {
            out.push(BoundarySlit {
                theta,
                rho: res.rho,
                foot: res.terminal.expect("terminated lift has a terminal"),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::Order;
    use crate::numerics::{CPoly, PQForm};

    #[test]
    fn square_has_one_slit() {
        let chart = Chart::new(PQForm::from_polynomial(&CPoly::from_real(&[0.0, 0.0, 1.0])).unwrap()).unwrap();
        let s = star_boundary(&chart, C64::new(1.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0].theta - std::f64::consts::PI).abs() < 1e-15);
        assert!((s[0].rho - 1.0).abs() < 1e-12);
        assert_eq!(s[0].foot.order, Order::Finite(2));
    }

    #[test]
    fn exponential_slit_has_infinite_foot() {
        let form = PQForm::new(
            CPoly::identity(),
            CPoly::from_real(&[1.0]),
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
        )
        .unwrap();
        let s = star_boundary(&Chart::new(form).unwrap(), C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].foot.order, Order::Infinite);
    }
}
