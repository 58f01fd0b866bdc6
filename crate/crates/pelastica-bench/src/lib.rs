//! Shared setup helpers for the benchmark targets.

use pelastica::curvekit::{m_leafed_curve, omega_tuple_spatial, LeafedSpec, SampledCurve};
use pelastica::pelliptic::PExponent;

/// The closed spatial 3-leafed curve at p = 2, sampled at the given step.
pub fn clover(ds: f64) -> SampledCurve {
    let p = PExponent::new(2.0).expect("p > 1");
    let tuple = omega_tuple_spatial(3, p).expect("p > p_3*");
    let spec = LeafedSpec::new(tuple, 1.0, vec![0.0; 3]).expect("valid spec");
    m_leafed_curve(&spec, ds).expect("constructible")
}
