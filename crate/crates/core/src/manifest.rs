//! Study manifest: the structured description of a cohort dataset.
//!
//! The manifest travels with the three CSVs and declares everything the
//! loader needs to interpret them: the per-instance horizon `n`, the number
//! of daily time slots `m`, the study start date, the labeling threshold
//! (CRT), the period policy (which milestone pairs form instances), and the
//! closed vocabularies for the categorical demographic attributes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three BMI measurement milestones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Milestone {
    Enrollment,
    Midpoint,
    Closeout,
}

impl fmt::Display for Milestone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Milestone::Enrollment => write!(f, "enrollment"),
            Milestone::Midpoint => write!(f, "midpoint"),
            Milestone::Closeout => write!(f, "closeout"),
        }
    }
}

impl FromStr for Milestone {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "enrollment" => Ok(Milestone::Enrollment),
            "midpoint" => Ok(Milestone::Midpoint),
            "closeout" => Ok(Milestone::Closeout),
            other => Err(format!("unknown milestone {other:?}")),
        }
    }
}

/// One instance-forming period: activity from `n_days` starting at
/// `start_day`, labeled by the BMI change from `start_milestone` to
/// `end_milestone`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSpec {
    pub start_milestone: Milestone,
    pub end_milestone: Milestone,
    pub start_day: u32,
}

/// The seven categorical demographic attributes (age is numeric and has no
/// vocabulary). Listed in the fixed encoding order.
pub const CATEGORICAL_ATTRS: [&str; 7] = [
    "gender",
    "marital",
    "adults_in_household",
    "highest_degree",
    "hispanic_or_latino",
    "race",
    "occupation",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StudySection {
    n_days: u32,
    m_slots: u32,
    study_start: String,
    crt: f64,
    #[serde(default = "default_min_events")]
    min_events_per_period: u32,
    #[serde(rename = "period")]
    periods: Vec<PeriodSpec>,
    #[serde(default)]
    fallback_period: Option<PeriodSpec>,
}

fn default_min_events() -> u32 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ManifestFile {
    study: StudySection,
    vocabulary: BTreeMap<String, Vec<String>>,
}

/// Parsed and validated study manifest.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub n_days: u32,
    pub m_slots: u32,
    pub study_start: NaiveDate,
    pub crt: f64,
    /// Minimum recorded events a (participant, period) needs to form a
    /// usable instance. Instances below the threshold are dropped and
    /// counted in the cleaning report.
    pub min_events_per_period: u32,
    pub periods: Vec<PeriodSpec>,
    /// Used for a participant only when none of the primary periods is
    /// satisfiable (e.g. enrollment and closeout BMIs present but no
    /// midpoint).
    pub fallback_period: Option<PeriodSpec>,
    /// Closed vocabulary per categorical attribute; the ordinal code of a
    /// value is its index in the declared list.
    pub vocabulary: BTreeMap<String, Vec<String>>,
}

impl Manifest {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let parsed: ManifestFile =
            toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        let study = parsed.study;
        let study_start = NaiveDate::parse_from_str(&study.study_start, "%Y-%m-%d")
            .map_err(|e| Error::Manifest(format!("bad study_start: {e}")))?;
        let manifest = Manifest {
            n_days: study.n_days,
            m_slots: study.m_slots,
            study_start,
            crt: study.crt,
            min_events_per_period: study.min_events_per_period,
            periods: study.periods,
            fallback_period: study.fallback_period,
            vocabulary: parsed.vocabulary,
        };
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        let file = ManifestFile {
            study: StudySection {
                n_days: self.n_days,
                m_slots: self.m_slots,
                study_start: self.study_start.format("%Y-%m-%d").to_string(),
                crt: self.crt,
                min_events_per_period: self.min_events_per_period,
                periods: self.periods.clone(),
                fallback_period: self.fallback_period.clone(),
            },
            vocabulary: self.vocabulary.clone(),
        };
        toml::to_string(&file).expect("manifest serializes")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string()).map_err(|e| Error::io(path, e))
    }

    fn validate(&self) -> Result<()> {
        if self.n_days == 0 {
            return Err(Error::Manifest("n_days must be >= 1".into()));
        }
        if !(self.m_slots >= 1 && 24 % self.m_slots == 0) {
            return Err(Error::Manifest(format!(
                "m_slots must divide 24 evenly, got {}",
                self.m_slots
            )));
        }
        if !(self.crt > 0.0 && self.crt < 1.0) {
            return Err(Error::Manifest(format!(
                "crt must lie in (0, 1), got {}",
                self.crt
            )));
        }
        if self.periods.is_empty() {
            return Err(Error::Manifest("at least one period must be declared".into()));
        }
        for attr in CATEGORICAL_ATTRS {
            let vocab = self
                .vocabulary
                .get(attr)
                .ok_or_else(|| Error::Manifest(format!("missing vocabulary for {attr}")))?;
            if vocab.is_empty() {
                return Err(Error::Manifest(format!("empty vocabulary for {attr}")));
            }
        }
        Ok(())
    }

    /// Ordinal code of `value` within the declared vocabulary of `attr`.
    pub fn encode(&self, attr: &str, value: &str) -> Option<usize> {
        self.vocabulary
            .get(attr)
            .and_then(|vocab| vocab.iter().position(|v| v == value))
    }

    /// Total days covered by the declared periods (maximum period end).
    pub fn study_span_days(&self) -> u32 {
        self.periods
            .iter()
            .chain(self.fallback_period.iter())
            .map(|p| p.start_day + self.n_days)
            .max()
            .unwrap_or(self.n_days)
    }

    /// The default vocabulary used by the synthetic generator.
    pub fn default_vocabulary() -> BTreeMap<String, Vec<String>> {
        let mut vocab = BTreeMap::new();
        let insert = |vocab: &mut BTreeMap<String, Vec<String>>, k: &str, vs: &[&str]| {
            vocab.insert(k.to_string(), vs.iter().map(|s| s.to_string()).collect());
        };
        insert(&mut vocab, "gender", &["female", "male", "nonbinary"]);
        insert(&mut vocab, "marital", &["single", "married", "divorced", "widowed"]);
        insert(&mut vocab, "adults_in_household", &["1", "2", "3", "4plus"]);
        insert(
            &mut vocab,
            "highest_degree",
            &["high_school", "associate", "bachelor", "master", "doctorate"],
        );
        insert(&mut vocab, "hispanic_or_latino", &["no", "yes"]);
        insert(
            &mut vocab,
            "race",
            &["white", "black", "asian", "native", "pacific", "multiple", "other"],
        );
        insert(
            &mut vocab,
            "occupation",
            &["employed", "self_employed", "unemployed", "retired", "student", "homemaker"],
        );
        vocab
    }

    /// Manifest matching the synthetic generator defaults: two consecutive
    /// 3-month periods (enrollment→midpoint, midpoint→closeout).
    pub fn default_two_period(n_days: u32, m_slots: u32, study_start: NaiveDate, crt: f64) -> Self {
        Manifest {
            n_days,
            m_slots,
            study_start,
            crt,
            min_events_per_period: 1,
            periods: vec![
                PeriodSpec {
                    start_milestone: Milestone::Enrollment,
                    end_milestone: Milestone::Midpoint,
                    start_day: 0,
                },
                PeriodSpec {
                    start_milestone: Milestone::Midpoint,
                    end_milestone: Milestone::Closeout,
                    start_day: n_days,
                },
            ],
            fallback_period: None,
            vocabulary: Self::default_vocabulary(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_toml() -> String {
        let manifest = Manifest::default_two_period(
            90,
            6,
            NaiveDate::from_ymd_opt(2024, 1, 6).unwrap(),
            0.05,
        );
        manifest.to_toml_string()
    }

    #[test]
    fn round_trips_through_toml() {
        let text = sample_toml();
        let manifest = Manifest::from_toml_str(&text).unwrap();
        assert_eq!(manifest.n_days, 90);
        assert_eq!(manifest.m_slots, 6);
        assert_eq!(manifest.crt, 0.05);
        assert_eq!(manifest.periods.len(), 2);
        assert_eq!(manifest.periods[1].start_day, 90);
        assert_eq!(manifest.to_toml_string(), text);
    }

    #[test]
    fn rejects_bad_slot_count() {
        let text = sample_toml().replace("m_slots = 6", "m_slots = 5");
        assert!(matches!(
            Manifest::from_toml_str(&text),
            Err(Error::Manifest(_))
        ));
    }

    #[test]
    fn rejects_missing_vocabulary() {
        let text = sample_toml().replace("[vocabulary]", "[vocabulary_x]\ny = 1\n[vocabulary]");
        let text = text.replace("gender = ", "gender_renamed = ");
        assert!(Manifest::from_toml_str(&text).is_err());
    }

    #[test]
    fn encodes_by_declared_order() {
        let manifest = Manifest::from_toml_str(&sample_toml()).unwrap();
        assert_eq!(manifest.encode("gender", "female"), Some(0));
        assert_eq!(manifest.encode("gender", "male"), Some(1));
        assert_eq!(manifest.encode("gender", "martian"), None);
        assert_eq!(manifest.study_span_days(), 180);
    }
}
