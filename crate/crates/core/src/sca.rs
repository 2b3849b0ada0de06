//! Sine cosine position update and its linearly decaying amplitude.

use std::f64::consts::TAU;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaConfig {
    /// Initial step amplitude; decays linearly to zero.
    pub a: f64,
    pub max_iterations: usize,
    pub population_size: usize,
}

impl ScaConfig {
    pub fn new(a: f64, max_iterations: usize, population_size: usize) -> Result<Self> {
        let c = Self { a, max_iterations, population_size };
        c.validate()?;
        Ok(c)
    }

    /// `max_iterations == 0` is accepted: the run then reports the best
    /// initial agent.
    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidParameter(format!("a = {} must be positive", self.a)));
        }
        if self.population_size < 2 {
            return Err(Error::InvalidParameter(format!(
                "population size {} must be at least 2",
                self.population_size
            )));
        }
        Ok(())
    }
}

impl Default for ScaConfig {
    fn default() -> Self {
        Self { a: 2.0, max_iterations: 300, population_size: 20 }
    }
}

/// `a - t * a / T`, from `a` at `t = 0` down to 0 at `t = T`.
pub fn r1_schedule(t: usize, max_iterations: usize, a: f64) -> Result<f64> {
    if t > max_iterations {
        return Err(Error::IterationOutOfRange { t, max: max_iterations });
    }
    if max_iterations == 0 {
        return Ok(a);
    }
    Ok(a - t as f64 * (a / max_iterations as f64))
}

/// Per-coordinate random parameters of one update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRandoms {
    /// Phase, uniform on [0, 2π].
    pub r2: f64,
    /// Destination weight, uniform on [0, 2].
    pub r3: f64,
    /// Branch selector, uniform on [0, 1]; below 0.5 takes the sine branch.
    pub r4: f64,
}

impl StepRandoms {
    pub fn draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            r2: rng.gen::<f64>() * TAU,
            r3: rng.gen::<f64>() * 2.0,
            r4: rng.gen::<f64>(),
        }
    }
}

/// Moves coordinate `x` relative to destination coordinate `p`.
#[inline]
pub fn sca_update_dim(x: f64, p: f64, r1: f64, r: StepRandoms) -> f64 {
    let reach = (r.r3 * p - x).abs();
    if r.r4 < 0.5 {
        x + r1 * r.r2.sin() * reach
    } else {
        x + r1 * r.r2.cos() * reach
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn schedule_points() {
        assert_eq!(r1_schedule(0, 300, 2.0).unwrap(), 2.0);
        assert_eq!(r1_schedule(300, 300, 2.0).unwrap(), 0.0);
        assert_eq!(r1_schedule(150, 300, 2.0).unwrap(), 1.0);
        assert!(matches!(
            r1_schedule(301, 300, 2.0),
            Err(Error::IterationOutOfRange { t: 301, max: 300 })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(ScaConfig::new(2.0, 300, 20).is_ok());
        assert!(ScaConfig::new(0.0, 300, 20).is_err());
        assert!(ScaConfig::new(2.0, 300, 1).is_err());
    }

    #[test]
    fn randoms_are_in_range_and_reproducible() {
        let mut a = ChaCha8Rng::seed_from_u64(11);
        let mut b = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let r = StepRandoms::draw(&mut a);
            assert!((0.0..=TAU).contains(&r.r2));
            assert!((0.0..=2.0).contains(&r.r3));
            assert!((0.0..=1.0).contains(&r.r4));
            assert_eq!(r, StepRandoms::draw(&mut b));
        }
    }

    #[test]
    fn r4_mean_is_one_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let mean = (0..n).map(|_| StepRandoms::draw(&mut rng).r4).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn update_examples() {
        let r = StepRandoms { r2: 1.0, r3: 1.0, r4: 0.7 };
        assert_eq!(sca_update_dim(0.4, 0.4, 1.5, r), 0.4);
        assert_eq!(sca_update_dim(0.4, -3.0, 0.0, r), 0.4);
        let sine = StepRandoms { r2: FRAC_PI_2, r3: 1.0, r4: 0.2 };
        assert_eq!(sca_update_dim(0.0, 1.0, 1.0, sine), 1.0);
        let cosine = StepRandoms { r4: 0.5, ..sine };
        assert!((sca_update_dim(0.0, 1.0, 1.0, cosine)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn step_is_bounded(x in -1e3f64..1e3, p in -1e3f64..1e3, r1 in 0.0f64..2.0,
                           r2 in 0.0f64..TAU, r3 in 0.0f64..2.0, r4 in 0.0f64..1.0) {
            let r = StepRandoms { r2, r3, r4 };
            let y = sca_update_dim(x, p, r1, r);
            prop_assert!((y - x).abs() <= r1 * (r3 * p - x).abs() * (1.0 + 1e-12) + 1e-12);
        }

        #[test]
        fn low_r4_always_takes_sine(x in -5.0f64..5.0, p in -5.0f64..5.0, r2 in 0.0f64..TAU, r4 in 0.0f64..0.5) {
            let r = StepRandoms { r2, r3: 1.3, r4 };
            prop_assert_eq!(sca_update_dim(x, p, 0.8, r), x + 0.8 * r2.sin() * (1.3 * p - x).abs());
        }

        #[test]
        fn schedule_is_linear(t1 in 0usize..=300, t2 in 0usize..=300) {
            let d = r1_schedule(t1, 300, 2.0).unwrap() - r1_schedule(t2, 300, 2.0).unwrap();
            prop_assert!((d - (t2 as f64 - t1 as f64) * 2.0 / 300.0).abs() < 1e-12);
        }
    }
}
