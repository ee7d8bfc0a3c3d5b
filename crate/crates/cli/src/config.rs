use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;
use sylow_d4_core::ffield::Field;

/// Run settings; every field can also come from the command line, which
/// wins over the file.
#[derive(Debug, Clone, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub p: Option<u32>,
    pub a: Option<u32>,
    /// Defining polynomial coefficients, constant term first, monic.
    pub poly: Option<Vec<u32>>,
    pub seed: Option<u64>,
    /// Pairs for sampled orthogonality.
    pub pairs: Option<usize>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Config> {
        Ok(toml::from_str(text)?)
    }

    /// Fills unset fields from `other`.
    pub fn or(self, other: Config) -> Config {
        Config {
            p: self.p.or(other.p),
            a: self.a.or(other.a),
            poly: self.poly.or(other.poly),
            seed: self.seed.or(other.seed),
            pairs: self.pairs.or(other.pairs),
        }
    }

    pub fn field(&self) -> Result<Field> {
        let p = self.p.context("the characteristic p is required")?;
        let a = self.a.unwrap_or(1);
        Ok(Field::new(p, a, self.poly.as_deref())?)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    pub fn pairs(&self) -> usize {
        self.pairs.unwrap_or(10_000)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_values_fill_gaps() {
        let file = Config::parse("p = 2\na = 2\npoly = [1, 1, 1]\nseed = 9\n").unwrap();
        let cli = Config { a: Some(3), ..Config::default() };
        let c = cli.or(file);
        assert_eq!((c.p, c.a, c.seed()), (Some(2), Some(3), 9));
        assert!(Config::parse("colour = 1").is_err());
    }
}
