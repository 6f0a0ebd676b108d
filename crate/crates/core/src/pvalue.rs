use core::fmt;

/// Below this base-10 exponent a p-value is carried in log space.
pub const LOG10_THRESHOLD: f64 = -300.0;

/// A p-value that stays meaningful far below the range of `f64`.
///
/// Values at or above `1e-300` are stored directly; smaller ones keep only
/// their base-10 logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PValue {
    Value(f64),
    Log10(f64),
}

impl PValue {
    pub const ONE: PValue = PValue::Value(1.0);

    /// Builds a p-value from its natural logarithm, clamping at 1.
    pub fn from_ln(ln_p: f64) -> Self {
        let ln_p = ln_p.min(0.0);
        let log10 = ln_p / core::f64::consts::LN_10;
        if log10 < LOG10_THRESHOLD {
            PValue::Log10(log10)
        } else {
            PValue::Value(libm::exp(ln_p).min(1.0))
        }
    }

    pub fn from_value(p: f64) -> Self {
        PValue::Value(p.clamp(0.0, 1.0))
    }

    pub fn log10(&self) -> f64 {
        match *self {
            PValue::Value(p) => libm::log10(p),
            PValue::Log10(l) => l,
        }
    }

    /// Linear value; underflows to zero in the log-space range.
    pub fn value(&self) -> f64 {
        match *self {
            PValue::Value(p) => p,
            PValue::Log10(_) => 0.0,
        }
    }

    pub fn is_below(&self, alpha: f64) -> bool {
        match *self {
            PValue::Value(p) => p < alpha,
            PValue::Log10(l) => l < libm::log10(alpha),
        }
    }

    /// Significance stars: `*` < 0.05, `**` < 0.01, `***` < 0.001, `****` < 0.0001.
    pub fn stars(&self) -> &'static str {
        if self.is_below(1e-4) {
            "****"
        } else if self.is_below(1e-3) {
            "***"
        } else if self.is_below(1e-2) {
            "**"
        } else if self.is_below(0.05) {
            "*"
        } else {
            ""
        }
    }
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PValue::Value(p) => write!(f, "{p:e}"),
            PValue::Log10(l) => write!(f, "10^{l:.2}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn switches_to_log_space_below_threshold() {
        assert!(matches!(PValue::from_ln(-10.0), PValue::Value(_)));
        let tiny = PValue::from_ln(-1000.0);
        assert!(matches!(tiny, PValue::Log10(_)));
        assert!((tiny.log10() + 1000.0 / core::f64::consts::LN_10).abs() < 1e-9);
        assert!(tiny.is_below(1e-100));
        assert_eq!(tiny.stars(), "****");
    }

    #[test]
    fn clamps_at_one() {
        assert_eq!(PValue::from_ln(1e-12), PValue::Value(1.0));
        assert_eq!(PValue::ONE.stars(), "");
    }
}
