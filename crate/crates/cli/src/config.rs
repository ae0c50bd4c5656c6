use cmrig::cyclo::{DEFAULT_LOXTON_C, DEFAULT_LOXTON_D};
use cmrig::modforms::Place;
use cmrig::padic::check_prime;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("p = {0} must be an odd prime")]
    BadPrime(u64),
    #[error("precision must be positive, got {0}")]
    BadPrecision(i64),
    #[error("truncation must be positive")]
    BadTruncation,
    #[error("levels must be a non-empty strictly increasing list of positive integers")]
    BadLevels,
    #[error("Loxton constants need c > 0 and d > ln 2, got c = {c}, d = {d}")]
    BadLoxton { c: f64, d: f64 },
    #[error("place index {t} is not prime to p − 1 = {}", .p - 1)]
    BadPlace { p: u64, t: u64 },
}

/// Shared run parameters, validated once before any subcommand runs.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub p: u64,
    /// Absolute p-adic precision N.
    pub prec: i64,
    /// Series truncation L.
    pub trunc: usize,
    pub levels: Vec<u32>,
    pub loxton_c: f64,
    pub loxton_d: f64,
    /// Index t of the place above p.
    pub place: u64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 5,
            prec: 40,
            trunc: 64,
            levels: vec![1, 2],
            loxton_c: DEFAULT_LOXTON_C,
            loxton_d: DEFAULT_LOXTON_D,
            place: 1,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.p == 2 || check_prime(self.p).is_err() {
            return Err(ConfigError::BadPrime(self.p));
        }
        if self.prec <= 0 {
            return Err(ConfigError::BadPrecision(self.prec));
        }
        if self.trunc == 0 {
            return Err(ConfigError::BadTruncation);
        }
        if self.levels.is_empty() || self.levels[0] == 0 || self.levels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::BadLevels);
        }
        if !(self.loxton_c > 0.0 && self.loxton_d > std::f64::consts::LN_2) {
            return Err(ConfigError::BadLoxton { c: self.loxton_c, d: self.loxton_d });
        }
        self.place_at()?;
        Ok(())
    }

    pub fn place_at(&self) -> Result<Place, ConfigError> {
        Place::new(self.p, self.place).map_err(|_| ConfigError::BadPlace { p: self.p, t: self.place })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        assert_eq!(RunConfig::default().validate(), Ok(()));
    }

    #[test]
    fn rejects_bad_parameters() {
        let base = RunConfig::default();
        let cases = [
            RunConfig { p: 2, ..base.clone() },
            RunConfig { p: 9, ..base.clone() },
            RunConfig { prec: 0, ..base.clone() },
            RunConfig { trunc: 0, ..base.clone() },
            RunConfig { levels: vec![2, 1], ..base.clone() },
            RunConfig { levels: vec![], ..base.clone() },
            RunConfig { loxton_d: 0.5, ..base.clone() },
            RunConfig { place: 2, ..base.clone() },
        ];
        for c in cases {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }
}
