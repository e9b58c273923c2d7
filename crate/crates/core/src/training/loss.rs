use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Convex, non-negative, 1-Lipschitz regression losses with `l(y, y) = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LossKind {
    #[default]
    Absolute,
    /// Quadratic within `kappa` of the label, linear outside; `kappa <= 1`.
    Huber { kappa: f64 },
}

impl LossKind {
    pub fn huber(kappa: f64) -> Result<Self> {
        if kappa > 0.0 && kappa <= 1.0 {
            Ok(LossKind::Huber { kappa })
        } else {
            Err(invalid(format!("huber kappa must lie in (0, 1], got {kappa}")))
        }
    }

    pub fn value(&self, prediction: f64, label: f64) -> f64 {
        let r = prediction - label;
        match *self {
            LossKind::Absolute => r.abs(),
            LossKind::Huber { kappa } => {
                if r.abs() <= kappa {
                    r * r / (2.0 * kappa)
                } else {
                    r.abs() - kappa / 2.0
                }
            }
        }
    }

    /// Derivative in the prediction; the absolute loss uses 0 at its kink.
    pub fn derivative(&self, prediction: f64, label: f64) -> f64 {
        let r = prediction - label;
        match *self {
            LossKind::Absolute => {
                if r > 0.0 {
                    1.0
                } else if r < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            LossKind::Huber { kappa } => (r / kappa).clamp(-1.0, 1.0),
        }
    }
}

impl std::str::FromStr for LossKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "absolute" | "abs" => Ok(LossKind::Absolute),
            _ => match s.strip_prefix("huber") {
                Some(rest) => {
                    let kappa = rest
                        .trim_start_matches([':', '='])
                        .parse::<f64>()
                        .map_err(|_| invalid(format!("bad huber spec `{s}`, use huber:0.5")))?;
                    LossKind::huber(kappa)
                }
                None => Err(invalid(format!("unknown loss `{s}`"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_at_label_and_kink_convention() {
        for l in [LossKind::Absolute, LossKind::Huber { kappa: 0.5 }] {
            assert_eq!(l.value(0.3, 0.3), 0.0);
            assert_eq!(l.derivative(0.3, 0.3), 0.0);
        }
        assert!((LossKind::Absolute.value(0.3, 1.0) - 0.7).abs() < 1e-15);
    }

    #[test]
    fn parsing() {
        assert_eq!("absolute".parse::<LossKind>().unwrap(), LossKind::Absolute);
        assert_eq!("huber:0.5".parse::<LossKind>().unwrap(), LossKind::Huber { kappa: 0.5 });
        assert!("huber:2".parse::<LossKind>().is_err());
        assert!("squared".parse::<LossKind>().is_err());
    }

    fn loss_strategy() -> impl Strategy<Value = LossKind> {
        prop_oneof![
            Just(LossKind::Absolute),
            (0.01f64..=1.0).prop_map(|kappa| LossKind::Huber { kappa }),
        ]
    }

    proptest! {
        #[test]
        fn lipschitz_convex_nonnegative(
            loss in loss_strategy(),
            a1 in -3.0f64..3.0,
            a2 in -3.0f64..3.0,
            y in -1.0f64..1.0,
        ) {
            let (l1, l2) = (loss.value(a1, y), loss.value(a2, y));
            prop_assert!(l1 >= 0.0 && l2 >= 0.0);
            prop_assert!((l1 - l2).abs() <= (a1 - a2).abs() + 1e-12);
            let mid = loss.value(0.5 * (a1 + a2), y);
            prop_assert!(mid <= 0.5 * (l1 + l2) + 1e-12);
            prop_assert!(loss.derivative(a1, y).abs() <= 1.0);
        }
    }
}
