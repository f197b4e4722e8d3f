use serde::{Deserialize, Serialize};

/// Shape of the length normalizer applied to a hypothesis' summed log-probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PenaltyStyle {
    /// `length^alpha`
    #[default]
    Power,
    /// `((5 + length) / 6)^alpha`
    Gnmt,
}

impl std::str::FromStr for PenaltyStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "power" => Ok(Self::Power),
            "gnmt" => Ok(Self::Gnmt),
            other => Err(format!(
                "unknown penalty style `{other}` (expected power|gnmt)"
            )),
        }
    }
}

/// Length-penalty divisor. `length` counts generated tokens (BOS excluded, EOS included).
pub fn length_penalty(length: usize, alpha: f64, style: PenaltyStyle) -> f64 {
    debug_assert!(length >= 1, "length penalty is defined for length >= 1");
    let len = length as f64;
    match style {
        PenaltyStyle::Power => len.powf(alpha),
        PenaltyStyle::Gnmt => ((5.0 + len) / 6.0).powf(alpha),
    }
}

/// `alpha` and `style` bundled; what `extend` needs to rescore.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthPenalty {
    pub alpha: f64,
    pub style: PenaltyStyle,
}

impl LengthPenalty {
    pub fn new(alpha: f64, style: PenaltyStyle) -> Self {
        Self { alpha, style }
    }

    pub fn factor(&self, length: usize) -> f64 {
        length_penalty(length, self.alpha, self.style)
    }

    /// `sum_logprob / factor(length)`. A zero-length (BOS-only) prefix scores its raw sum.
    pub fn normalize(&self, sum_logprob: f64, length: usize) -> f64 {
        if length == 0 {
            return sum_logprob;
        }
        sum_logprob / self.factor(length)
    }
}

pub fn normalized_score(sum_logprob: f64, length: usize, penalty: &LengthPenalty) -> f64 {
    penalty.normalize(sum_logprob, length)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn penalty_examples() {
        assert_eq!(length_penalty(4, 1.0, PenaltyStyle::Power), 4.0);
        assert_eq!(length_penalty(7, 0.0, PenaltyStyle::Power), 1.0);
        assert_eq!(length_penalty(1, 2.5, PenaltyStyle::Gnmt), 1.0);
    }

    #[test]
    fn normalized_examples() {
        let power = |a| LengthPenalty::new(a, PenaltyStyle::Power);
        assert_eq!(normalized_score(-4.0, 4, &power(1.0)), -1.0);
        assert_eq!(normalized_score(-4.0, 4, &power(0.0)), -4.0);
        let gnmt = LengthPenalty::new(2.0, PenaltyStyle::Gnmt);
        assert_eq!(normalized_score(-3.3, 1, &gnmt), -3.3);
    }

    #[test]
    fn gnmt_grows_with_length() {
        let g = LengthPenalty::new(1.0, PenaltyStyle::Gnmt);
        assert!((g.factor(7) - 2.0).abs() < 1e-15);
        assert!(g.factor(8) > g.factor(7));
    }
}
