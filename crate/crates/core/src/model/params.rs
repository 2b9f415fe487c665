use crate::error::{invalid, Result};

/// Functional form of the interaction `W(s)` between the two particles as a
/// function of their distance `s = |y - x|`.
#[derive(Clone, Debug, PartialEq)]
pub enum InteractionShape {
    /// `W(s) = U exp(-γ s)`.
    Exponential,
    /// Hubbard contact interaction: `W(0) = U`, zero otherwise.
    OnsiteOnly,
    /// `W(0) = U` and `W(s) = tail[s - 1]` for `s >= 1`; zero past the table.
    Custom(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistics {
    Distinguishable,
    Bosonic,
}

/// Physical constants of the two-particle extended Hubbard problem. Energies
/// are measured in units of the hopping, times in units of its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct HubbardParams {
    pub hopping: f64,
    pub onsite: f64,
    /// Inverse interaction range γ (per site).
    pub range: f64,
    pub shape: InteractionShape,
    pub statistics: Statistics,
}

impl HubbardParams {
    pub fn exponential(hopping: f64, onsite: f64, range: f64) -> Self {
        Self {
            hopping,
            onsite,
            range,
            shape: InteractionShape::Exponential,
            statistics: Statistics::Distinguishable,
        }
    }

    pub fn onsite_only(hopping: f64, onsite: f64) -> Self {
        Self {
            hopping,
            onsite,
            range: f64::INFINITY,
            shape: InteractionShape::OnsiteOnly,
            statistics: Statistics::Distinguishable,
        }
    }

    pub fn with_statistics(mut self, statistics: Statistics) -> Self {
        self.statistics = statistics;
        self
    }

    /// The same model with the interaction sign flipped.
    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.onsite = -out.onsite;
        if let InteractionShape::Custom(tail) = &mut out.shape {
            tail.iter_mut().for_each(|v| *v = -*v);
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        if !self.hopping.is_finite() || self.hopping < 0.0 {
            return Err(invalid("hopping", "must be finite and non-negative"));
        }
        if !self.onsite.is_finite() {
            return Err(invalid("onsite", "must be finite"));
        }
        match &self.shape {
            InteractionShape::Exponential => {
                if !(self.range.is_finite() && self.range > 0.0) {
                    return Err(invalid("range", "exponential shape needs finite γ > 0"));
                }
            }
            InteractionShape::OnsiteOnly => {}
            InteractionShape::Custom(tail) => {
                if tail.iter().any(|v| !v.is_finite()) {
                    return Err(invalid("shape", "custom table has non-finite entries"));
                }
            }
        }
        Ok(())
    }

    /// Interaction energy at integer distance `s`.
    pub fn interaction(&self, s: usize) -> f64 {
        if s == 0 {
            return self.onsite;
        }
        match &self.shape {
            InteractionShape::Exponential => self.onsite * (-self.range * s as f64).exp(),
            InteractionShape::OnsiteOnly => 0.0,
            InteractionShape::Custom(tail) => tail.get(s - 1).copied().unwrap_or(0.0),
        }
    }

    /// Slope `dV/ds` of the interaction at a real distance `s > 0`. The
    /// custom table is interpolated linearly.
    pub fn interaction_slope(&self, s: f64) -> f64 {
        let s = s.abs();
        match &self.shape {
            InteractionShape::Exponential => -self.range * self.onsite * (-self.range * s).exp(),
            InteractionShape::OnsiteOnly => 0.0,
            InteractionShape::Custom(_) => {
                let lo = s.floor() as usize;
                self.interaction(lo + 1) - self.interaction(lo)
            }
        }
    }

    /// First distance beyond which `|W(s)|` stays below `threshold`.
    pub fn decay_distance(&self, threshold: f64) -> usize {
        match &self.shape {
            InteractionShape::Exponential => {
                if self.onsite.abs() <= threshold {
                    return 0;
                }
                ((self.onsite.abs() / threshold).ln() / self.range).ceil() as usize + 1
            }
            InteractionShape::OnsiteOnly => usize::from(self.onsite.abs() > threshold),
            InteractionShape::Custom(tail) => tail
                .iter()
                .rposition(|v| v.abs() > threshold)
                .map(|i| i + 2)
                .unwrap_or(usize::from(self.onsite.abs() > threshold)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_values() {
        let p = HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0);
        assert_eq!(p.interaction(0), -6.0);
        assert!((p.interaction(10) - (-6.0 * (-10.0f64 / 12.0).exp())).abs() < 1e-15);
        assert!((p.interaction(10) + 2.6075).abs() < 1e-4);
    }

    #[test]
    fn onsite_only_vanishes_off_site() {
        let p = HubbardParams::onsite_only(1.0, 3.0);
        assert_eq!(p.interaction(0), 3.0);
        assert_eq!(p.interaction(1), 0.0);
    }

    #[test]
    fn custom_tail_keeps_onsite() {
        let mut p = HubbardParams::onsite_only(1.0, 2.0);
        p.shape = InteractionShape::Custom(vec![0.5, 0.25]);
        assert_eq!(p.interaction(0), 2.0);
        assert_eq!(p.interaction(2), 0.25);
        assert_eq!(p.interaction(3), 0.0);
        assert_eq!(p.decay_distance(0.1), 3);
    }

    #[test]
    fn validation() {
        assert!(HubbardParams::exponential(1.0, -6.0, 0.0)
            .validate()
            .is_err());
        assert!(HubbardParams::exponential(1.0, f64::NAN, 0.1)
            .validate()
            .is_err());
        assert!(HubbardParams::exponential(0.0, -6.0, 0.1)
            .validate()
            .is_ok());
        assert!(HubbardParams::onsite_only(1.0, 1.0).validate().is_ok());
    }

    #[test]
    fn decay_distance_exponential() {
        let p = HubbardParams::exponential(1.0, -6.0, 1.0 / 12.0);
        let s = p.decay_distance(1e-12);
        assert!(p.interaction(s).abs() < 1e-12);
        assert!(p.interaction(s - 2).abs() > 1e-12);
    }
}
