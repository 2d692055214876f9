//! Scenario files.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inertia::{classify, InertiaGenerator};
use crate::linalg::IntMatrix;
use crate::torsion::Polarization;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[serde(default)]
    pub strictly_henselian: bool,
}

/// One modeled variety: an inertia generator with optional polarization and
/// level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub d: usize,
    pub p: u64,
    pub tau: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default)]
    pub flags: Flags,
    #[serde(default)]
    pub seed: u64,
}

impl Scenario {
    pub fn new(tau: IntMatrix, p: u64) -> Self {
        Scenario { d: tau.rows() / 2, p, tau, polarization: None, n: None, flags: Flags::default(), seed: 0 }
    }

    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::Scenario("d must be at least 1".into()));
        }
        if self.tau.rows() != 2 * self.d || self.tau.cols() != 2 * self.d {
            return Err(Error::Scenario(format!(
                "tau is {}x{} but d = {} needs {}x{}",
                self.tau.rows(),
                self.tau.cols(),
                self.d,
                2 * self.d,
                2 * self.d
            )));
        }
        if let Some(pol) = &self.polarization {
            if pol.rows() != 2 * self.d || pol.cols() != 2 * self.d {
                return Err(Error::Scenario(format!("polarization must be {}x{}", 2 * self.d, 2 * self.d)));
            }
            if pol.determinant() == 0.into() {
                return Err(Error::Scenario("polarization is singular".into()));
            }
        }
        if self.n.is_some_and(|n| n < 2) {
            return Err(Error::Scenario("level n must be at least 2".into()));
        }
        self.generator().map_err(|e| Error::Scenario(format!("tau rejected: {e}")))?;
        Ok(())
    }

    pub fn generator(&self) -> Result<InertiaGenerator> {
        classify(&self.tau, self.p)
    }

    /// The given polarization, or the principal one.
    pub fn polarization(&self) -> Result<Polarization> {
        match &self.polarization {
            Some(m) => Polarization::new(m.clone()),
            None => Ok(Polarization::principal(self.d)),
        }
    }
}
