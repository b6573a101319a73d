//! CSV readers for the three cohort input files.
//!
//! Parsing is strict: every malformed or schema-violating row produces an
//! error naming the file and 1-based line number.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDateTime;
use csv::StringRecord;

use super::{DemographicProfile, MilestoneRecord, ObservationEvent};
use crate::error::{Error, Result};
use crate::manifest::{Manifest, Milestone, CATEGORICAL_ATTRS};

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn open_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::io(
                path,
                std::io::Error::new(std::io::ErrorKind::NotFound, e.to_string()),
            ),
            _ => Error::MalformedRow {
                file: file_name(path),
                line: 1,
                msg: e.to_string(),
            },
        })
}

fn record_line(record: &StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn field<'r>(
    record: &'r StringRecord,
    idx: usize,
    name: &str,
    file: &str,
) -> Result<&'r str> {
    record.get(idx).ok_or_else(|| Error::MalformedRow {
        file: file.to_string(),
        line: record_line(record),
        msg: format!("missing column {name:?}"),
    })
}

fn check_header(record: &StringRecord, expected: &[&str], file: &str) -> Result<()> {
    let got: Vec<&str> = record.iter().collect();
    if got != expected {
        return Err(Error::Schema {
            file: file.to_string(),
            line: 1,
            msg: format!("header must be {expected:?}, got {got:?}"),
        });
    }
    Ok(())
}

/// Reads `events.csv` (`participant_id,timestamp,step_count`).
pub fn read_events(path: &Path) -> Result<Vec<ObservationEvent>> {
    let file = file_name(path);
    let mut reader = open_reader(path)?;
    check_header(
        reader.headers().map_err(|e| Error::MalformedRow {
            file: file.clone(),
            line: 1,
            msg: e.to_string(),
        })?,
        &["participant_id", "timestamp", "step_count"],
        &file,
    )?;

    let mut events = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedRow {
            file: file.clone(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let line = record_line(&record);
        let participant_id = field(&record, 0, "participant_id", &file)?.to_string();
        let ts_text = field(&record, 1, "timestamp", &file)?;
        let timestamp = NaiveDateTime::parse_from_str(ts_text, "%Y-%m-%dT%H:%M:%S")
            .map_err(|e| Error::MalformedRow {
                file: file.clone(),
                line,
                msg: format!("bad timestamp {ts_text:?}: {e}"),
            })?;
        let steps_text = field(&record, 2, "step_count", &file)?;
        let step_count = u32::from_str(steps_text).map_err(|_| Error::MalformedRow {
            file: file.clone(),
            line,
            msg: format!("step_count must be a non-negative integer, got {steps_text:?}"),
        })?;
        events.push(ObservationEvent {
            participant_id,
            timestamp,
            step_count,
        });
    }
    Ok(events)
}

/// Reads `milestones.csv` (`participant_id,milestone,bmi`) into a map
/// `participant -> milestone -> bmi`.
pub fn read_milestones(path: &Path) -> Result<BTreeMap<String, BTreeMap<Milestone, f64>>> {
    let file = file_name(path);
    let mut reader = open_reader(path)?;
    check_header(
        reader.headers().map_err(|e| Error::MalformedRow {
            file: file.clone(),
            line: 1,
            msg: e.to_string(),
        })?,
        &["participant_id", "milestone", "bmi"],
        &file,
    )?;

    let mut map: BTreeMap<String, BTreeMap<Milestone, f64>> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedRow {
            file: file.clone(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let line = record_line(&record);
        let rec = MilestoneRecord {
            participant_id: field(&record, 0, "participant_id", &file)?.to_string(),
            milestone: field(&record, 1, "milestone", &file)?
                .parse()
                .map_err(|e| Error::Schema {
                    file: file.clone(),
                    line,
                    msg: e,
                })?,
            bmi: f64::from_str(field(&record, 2, "bmi", &file)?).map_err(|e| {
                Error::MalformedRow {
                    file: file.clone(),
                    line,
                    msg: format!("bad bmi: {e}"),
                }
            })?,
        };
        if !(rec.bmi > 0.0 && rec.bmi.is_finite()) {
            return Err(Error::Schema {
                file: file.clone(),
                line,
                msg: format!("bmi must be positive, got {}", rec.bmi),
            });
        }
        let per_participant = map.entry(rec.participant_id.clone()).or_default();
        if per_participant.contains_key(&rec.milestone) {
            return Err(Error::Schema {
                file: file.clone(),
                line,
                msg: format!(
                    "duplicate milestone {} for participant {}",
                    rec.milestone, rec.participant_id
                ),
            });
        }
        per_participant.insert(rec.milestone, rec.bmi);
    }
    Ok(map)
}

/// Reads `demographics.csv` and validates every categorical value against
/// the manifest vocabulary and the age range.
pub fn read_demographics(
    path: &Path,
    manifest: &Manifest,
) -> Result<BTreeMap<String, DemographicProfile>> {
    let file = file_name(path);
    let mut reader = open_reader(path)?;
    let mut expected = vec!["participant_id", "gender", "age"];
    expected.extend(CATEGORICAL_ATTRS.iter().skip(1)); // marital..occupation
    check_header(
        reader.headers().map_err(|e| Error::MalformedRow {
            file: file.clone(),
            line: 1,
            msg: e.to_string(),
        })?,
        &expected,
        &file,
    )?;

    let mut map = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedRow {
            file: file.clone(),
            line: e.position().map(|p| p.line()).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let line = record_line(&record);
        let participant_id = field(&record, 0, "participant_id", &file)?.to_string();
        let age_text = field(&record, 2, "age", &file)?;
        let age = u32::from_str(age_text).map_err(|_| Error::MalformedRow {
            file: file.clone(),
            line,
            msg: format!("age must be an integer, got {age_text:?}"),
        })?;
        if !(18..=120).contains(&age) {
            return Err(Error::Schema {
                file: file.clone(),
                line,
                msg: format!("age must lie in [18, 120], got {age}"),
            });
        }
        let mut categorical = Vec::with_capacity(7);
        for (attr_idx, attr) in CATEGORICAL_ATTRS.iter().enumerate() {
            // gender is column 1, the rest follow age
            let col = if attr_idx == 0 { 1 } else { attr_idx + 2 };
            let value = field(&record, col, attr, &file)?.to_string();
            if manifest.encode(attr, &value).is_none() {
                return Err(Error::Schema {
                    file: file.clone(),
                    line,
                    msg: format!("value {value:?} for {attr} is not in the declared vocabulary"),
                });
            }
            categorical.push(value);
        }
        let mut it = categorical.into_iter();
        let profile = DemographicProfile {
            gender: it.next().unwrap(),
            age,
            marital: it.next().unwrap(),
            adults_in_household: it.next().unwrap(),
            highest_degree: it.next().unwrap(),
            hispanic_or_latino: it.next().unwrap(),
            race: it.next().unwrap(),
            occupation: it.next().unwrap(),
        };
        if map.insert(participant_id.clone(), profile).is_some() {
            return Err(Error::Schema {
                file: file.clone(),
                line,
                msg: format!("duplicate demographics row for participant {participant_id}"),
            });
        }
    }
    Ok(map)
}
