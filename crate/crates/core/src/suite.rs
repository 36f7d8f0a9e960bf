//! Builtin nets covering moderate, negligible and mixed behaviour on the
//! real line, the half line and the plane.

use crate::error::Result;
use crate::nets::{Amplitude, BoxDomain, DerivativeMode, Factor, Family, Interval, Net};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct SuiteNet<T> {
    pub name: &'static str,
    pub net: Net<T>,
}

/// Names of [`builtin_suite`] in order.
pub const SUITE_NAMES: [&str; 9] = [
    "gaussian_peak",
    "delta_net",
    "oscillatory",
    "super_small",
    "poly_weight",
    "decaying_bump",
    "half_line_gaussian",
    "half_line_delta",
    "tensor_2d",
];

pub fn suite_net<T: Scalar>(name: &str) -> Option<Result<Net<T>>> {
    let one = T::one();
    let line = |family| Net::on_real_line(family);
    let half = |family| {
        BoxDomain::new(vec![Interval::positive_half_line()])
            .and_then(|d| Net::new(family, d, DerivativeMode::Analytic))
    };
    Some(match name {
        "gaussian_peak" => line(Family::GaussianPeak { p: one }),
        "delta_net" => line(Family::DeltaNet { p: one }),
        "oscillatory" => line(Family::Oscillatory),
        "super_small" => line(Family::SuperSmall),
        "poly_weight" => line(Family::PolyWeight { p: one + one, d: 3 }),
        "decaying_bump" => line(Family::Product {
            amplitude: Amplitude::power(-one),
            factors: vec![Factor::Bump],
        }),
        "half_line_gaussian" => half(Family::GaussianPeak { p: one }),
        "half_line_delta" => half(Family::DeltaNet { p: one }),
        "tensor_2d" => BoxDomain::whole_space(2).and_then(|d| {
            Net::new(
                Family::Product {
                    amplitude: Amplitude::power(one),
                    factors: vec![Factor::gaussian(), Factor::ScaledBump],
                },
                d,
                DerivativeMode::Analytic,
            )
        }),
        _ => return None,
    })
}

pub fn builtin_suite<T: Scalar>() -> Result<Vec<SuiteNet<T>>> {
    SUITE_NAMES
        .iter()
        .map(|&name| {
            let net = suite_net(name).expect("suite names resolve")?;
            Ok(SuiteNet { name, net })
        })
        .collect()
}

/// The members of [`builtin_suite`] defined on the whole space.
pub fn whole_space_suite<T: Scalar>() -> Result<Vec<SuiteNet<T>>> {
    Ok(builtin_suite()?
        .into_iter()
        .filter(|s| s.net.domain().is_whole_space())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_builds() {
        let suite = builtin_suite::<f64>().unwrap();
        assert_eq!(suite.len(), SUITE_NAMES.len());
        assert_eq!(whole_space_suite::<f64>().unwrap().len(), 7);
        assert!(suite_net::<f64>("nope").is_none());
    }
}
