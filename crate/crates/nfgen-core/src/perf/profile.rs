//! Performance profile documents (PPD): per-op unit costs plus measured
//! `(k, m, time)` samples, and the bundled settings mirroring published
//! relative op costs of common MPC deployments.

use serde::{Deserialize, Serialize};

use super::PerfError;

/// Unit costs in milliseconds per 100-element vector operation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeDict {
    pub add: f64,
    pub mul: f64,
    pub gt: f64,
    pub reciprocal: f64,
    pub sqrt: f64,
    pub log: f64,
    pub exp: f64,
}

impl TimeDict {
    fn validate(&self) -> Result<(), PerfError> {
        let entries = [
            ("add", self.add),
            ("mul", self.mul),
            ("gt", self.gt),
            ("reciprocal", self.reciprocal),
            ("sqrt", self.sqrt),
            ("log", self.log),
            ("exp", self.exp),
        ];
        for (name, v) in entries {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(PerfError::BadProfile(format!(
                    "time_dict.{name} must be a finite nonnegative cost"
                )));
            }
        }
        if self.mul <= 0.0 {
            return Err(PerfError::BadProfile(
                "time_dict.mul must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A deployment's performance profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerfProfile {
    pub time_dict: TimeDict,
    /// Measured `(k, m, milliseconds)` evaluation times.
    pub samples: Vec<(u32, u32, f64)>,
}

impl PerfProfile {
    pub fn validate(&self) -> Result<(), PerfError> {
        self.time_dict.validate()?;
        for &(k, m, t) in &self.samples {
            if k < 1 || m < 1 || !t.is_finite() || t < 0.0 {
                return Err(PerfError::BadProfile(format!(
                    "malformed sample ({k}, {m}, {t})"
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, PerfError> {
        let profile: PerfProfile = serde_json::from_str(text)
            .map_err(|e| PerfError::BadProfile(format!("profile JSON: {e}")))?;
        profile.validate()?;
        Ok(profile)
    }
}

/// The six bundled deployment flavors, identified by the published
/// `mul : gt : reciprocal : sqrt : log : exp` cost ratios and absolute
/// multiplication times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MpcSetting {
    PrivPyRep2k,
    Rep2k,
    RepF,
    Shamir,
    PsRep2k,
    PsRepF,
}

impl MpcSetting {
    pub const ALL: [MpcSetting; 6] = [
        MpcSetting::PrivPyRep2k,
        MpcSetting::Rep2k,
        MpcSetting::RepF,
        MpcSetting::Shamir,
        MpcSetting::PsRep2k,
        MpcSetting::PsRepF,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            MpcSetting::PrivPyRep2k => "privpy-rep2k",
            MpcSetting::Rep2k => "rep2k",
            MpcSetting::RepF => "repf",
            MpcSetting::Shamir => "shamir",
            MpcSetting::PsRep2k => "ps-rep2k",
            MpcSetting::PsRepF => "ps-repf",
        }
    }

    pub fn from_id(id: &str) -> Option<MpcSetting> {
        Self::ALL.into_iter().find(|s| s.id() == id)
    }

    /// Absolute multiply time (ms per 100-element op) and the relative
    /// costs of the remaining operations. Additions are local in additive
    /// sharing and cost nothing.
    pub fn time_dict(&self) -> TimeDict {
        let (mul, ratios) = match self {
            MpcSetting::PrivPyRep2k => (1.0, [11.0, 67.0, 55.0, 118.0, 44.0]),
            MpcSetting::Rep2k => (2.0, [4.0, 31.0, 75.0, 68.0, 107.0]),
            MpcSetting::RepF => (32.0, [1.0, 11.0, 28.0, 26.0, 47.0]),
            MpcSetting::Shamir => (81.0, [1.0, 8.0, 16.0, 15.0, 29.0]),
            MpcSetting::PsRep2k => (851.0, [1.0, 16.0, 35.0, 26.0, 97.0]),
            MpcSetting::PsRepF => (84.0, [2.0, 24.0, 56.0, 44.0, 137.0]),
        };
        let [gt, reciprocal, sqrt, log, exp] = ratios;
        TimeDict {
            add: 0.0,
            mul,
            gt: gt * mul,
            reciprocal: reciprocal * mul,
            sqrt: sqrt * mul,
            log: log * mul,
            exp: exp * mul,
        }
    }

    /// Synthetic evaluation time of one `(k, m)` plan on this deployment.
    ///
    /// The interpreter-style runtime dispatches whole vectorized rounds, so
    /// its latency scales with round count; the compiled runtimes pay per
    /// element of each secure vector op while plaintext-scalar products
    /// stay local. Both shapes are what profiling the respective platforms
    /// produces; the constants below only fix the units.
    pub fn sample_time(&self, k: u32, m: u32) -> f64 {
        let td = self.time_dict();
        let (k, m) = (k as f64, m as f64);
        let ckx = ckx_elements(k as usize) as f64;
        match self {
            MpcSetting::PrivPyRep2k => {
                let rounds = (k.log2().floor()) + 1.0;
                td.mul * (rounds + 4.0 + (ckx + 2.0 * (k + 1.0)) / 100.0)
                    + td.gt * (1.0 + m / 100.0)
            }
            _ => td.mul * (ckx + 2.0 * (k + 1.0)) + 2.0 * td.gt * m,
        }
    }

    /// The full bundled profile: the time dictionary plus noise-free
    /// synthetic samples over the standard profiling grid.
    pub fn profile(&self) -> PerfProfile {
        let mut samples = Vec::new();
        for k in 3..=10 {
            for m in 2..=50 {
                samples.push((k, m, self.sample_time(k, m)));
            }
        }
        PerfProfile {
            time_dict: self.time_dict(),
            samples,
        }
    }
}

/// Ciphertext multiplications performed by the doubling power table:
/// `(floor(log2 k) + 1)(k+1) - 2^(floor(log2 k)+1) + 1`.
pub fn ckx_elements(k: usize) -> usize {
    crate::fxp::power_round_lengths(k).iter().sum()
}
