//! The standard test battery used by region scans and end-to-end checks.

use crate::sequences::SequenceSpec;

/// Weight side: const:1, geom:1/2, pow:-2.
pub fn lambda_battery() -> Vec<SequenceSpec> {
    vec![
        SequenceSpec::Const(1.0),
        SequenceSpec::Geom { r: 0.5, v: 0.5 },
        SequenceSpec::Pow(-2.0),
    ]
}

/// Summable weight side only (families built on tail sums).
pub fn summable_lambda_battery() -> Vec<SequenceSpec> {
    vec![SequenceSpec::Geom { r: 0.5, v: 0.5 }, SequenceSpec::Pow(-2.0)]
}

/// Test-sequence side: unit:1, unit:3, pow:-2, geom:1/3.
pub fn x_battery() -> Vec<SequenceSpec> {
    vec![
        SequenceSpec::Unit(1),
        SequenceSpec::Unit(3),
        SequenceSpec::Pow(-2.0),
        SequenceSpec::Geom { r: 1.0 / 3.0, v: 1.0 / 3.0 },
    ]
}
