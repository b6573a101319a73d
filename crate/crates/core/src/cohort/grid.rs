//! Day×slot grids: aggregation of raw events and cohort-mean imputation.

use chrono::{NaiveDate, Timelike};

use super::ObservationEvent;
use crate::error::{Error, Result};

/// An `n_days × m_slots` grid of optional step counts. `None` means the
/// cell was never recorded (distinct from a recorded zero).
#[derive(Debug, Clone, PartialEq)]
pub struct DayGrid {
    n_days: usize,
    m_slots: usize,
    cells: Vec<Option<f64>>,
}

impl DayGrid {
    pub fn new(n_days: usize, m_slots: usize) -> Self {
        DayGrid {
            n_days,
            m_slots,
            cells: vec![None; n_days * m_slots],
        }
    }

    pub fn n_days(&self) -> usize {
        self.n_days
    }

    pub fn m_slots(&self) -> usize {
        self.m_slots
    }

    pub fn get(&self, day: usize, slot: usize) -> Option<f64> {
        self.cells[day * self.m_slots + slot]
    }

    pub fn set(&mut self, day: usize, slot: usize, value: Option<f64>) {
        self.cells[day * self.m_slots + slot] = value;
    }

    /// Value of a cell after imputation. Panics if the grid still has
    /// absent cells; callers must impute first.
    pub fn value(&self, day: usize, slot: usize) -> f64 {
        self.get(day, slot).expect("grid not imputed")
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    /// Sum of all recorded cells.
    pub fn observed_total(&self) -> f64 {
        self.cells.iter().flatten().sum()
    }

    pub fn observed_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// Total steps on one day (requires a complete grid).
    pub fn day_total(&self, day: usize) -> f64 {
        (0..self.m_slots).map(|j| self.value(day, j)).sum()
    }
}

/// Slot index of a timestamp's time-of-day under `m` equal slots anchored
/// at midnight, left-closed/right-open.
pub fn slot_of_time(time: chrono::NaiveTime, m: usize) -> usize {
    let hour_frac =
        time.hour() as f64 + time.minute() as f64 / 60.0 + time.second() as f64 / 3600.0;
    let slot = (hour_frac * m as f64 / 24.0) as usize;
    slot.min(m - 1)
}

/// Sums a participant's events into a day×slot grid over the `n_days`
/// window starting at `period_start`. Cells with no events stay absent.
/// Returns the grid and the number of events that fell outside the window
/// (skipped, never summed).
pub fn slot_aggregate(
    events: &[ObservationEvent],
    m: usize,
    period_start: NaiveDate,
    n_days: usize,
) -> (DayGrid, usize) {
    let mut grid = DayGrid::new(n_days, m);
    let mut skipped = 0usize;
    for event in events {
        let day = (event.timestamp.date() - period_start).num_days();
        if day < 0 || day >= n_days as i64 {
            skipped += 1;
            continue;
        }
        let day = day as usize;
        let slot = slot_of_time(event.timestamp.time(), m);
        let cell = grid.get(day, slot).unwrap_or(0.0) + event.step_count as f64;
        grid.set(day, slot, Some(cell));
    }
    (grid, skipped)
}

/// Outcome of one imputation pass.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ImputeStats {
    /// Cohort-wide mean of the recorded values in each slot column; the
    /// fill value used for that column's absent cells.
    pub slot_means: Vec<f64>,
    pub filled_cells: usize,
    /// Slot columns with no recorded value anywhere in the cohort; filled
    /// with 0.
    pub degenerate_slots: Vec<usize>,
}

/// Replaces every absent cell with the cohort-wide mean of the recorded
/// values in the same slot column. Recorded cells are never touched, so the
/// pass is idempotent. Grids are reduced in participant-id order
/// internally, making the result independent of the slice ordering.
pub fn impute<'a, G>(grids: G) -> Result<ImputeStats>
where
    G: IntoIterator<Item = (&'a str, &'a mut DayGrid)>,
{
    let mut grids: Vec<(&str, &mut DayGrid)> = grids.into_iter().collect();
    if grids.is_empty() {
        return Ok(ImputeStats::default());
    }
    grids.sort_by(|a, b| a.0.cmp(b.0));
    let m = grids[0].1.m_slots();
    for (_, grid) in &grids {
        if grid.m_slots() != m {
            return Err(Error::Data(
                "imputation requires a uniform slot count across the cohort".into(),
            ));
        }
    }

    let mut sums = vec![0.0f64; m];
    let mut counts = vec![0usize; m];
    for (_, grid) in &grids {
        for day in 0..grid.n_days() {
            for slot in 0..m {
                if let Some(v) = grid.get(day, slot) {
                    sums[slot] += v;
                    counts[slot] += 1;
                }
            }
        }
    }

    let mut stats = ImputeStats {
        slot_means: Vec::with_capacity(m),
        ..Default::default()
    };
    for slot in 0..m {
        if counts[slot] == 0 {
            log::warn!("slot column {slot} has no recorded value in the whole cohort; imputing 0");
            stats.degenerate_slots.push(slot);
            stats.slot_means.push(0.0);
        } else {
            stats.slot_means.push(sums[slot] / counts[slot] as f64);
        }
    }

    for (_, grid) in &mut grids {
        for day in 0..grid.n_days() {
            for slot in 0..m {
                if grid.get(day, slot).is_none() {
                    grid.set(day, slot, Some(stats.slot_means[slot]));
                    stats.filled_cells += 1;
                }
            }
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::{NaiveDate, NaiveDateTime};

    fn event(ts: &str, steps: u32) -> ObservationEvent {
        ObservationEvent {
            participant_id: "p1".into(),
            timestamp: NaiveDateTime::parse_from_str(ts, "%Y-%m-%dT%H:%M:%S").unwrap(),
            step_count: steps,
        }
    }

    fn day0() -> NaiveDate {
        NaiveDate::from_ymd_opt(2024, 1, 6).unwrap()
    }

    #[test]
    fn event_at_13_30_lands_in_fourth_slot_at_m6() {
        let (grid, skipped) = slot_aggregate(&[event("2024-01-06T13:30:00", 42)], 6, day0(), 3);
        assert_eq!(skipped, 0);
        assert_eq!(grid.get(0, 3), Some(42.0));
        for slot in [0, 1, 2, 4, 5] {
            assert_eq!(grid.get(0, slot), None);
        }
    }

    #[test]
    fn same_slot_events_sum_at_m4() {
        let events = [event("2024-01-06T09:00:00", 100), event("2024-01-06T11:59:00", 50)];
        let (grid, _) = slot_aggregate(&events, 4, day0(), 1);
        assert_eq!(grid.get(0, 1), Some(150.0));
    }

    #[test]
    fn midnight_is_slot_zero_at_m12() {
        let (grid, _) = slot_aggregate(&[event("2024-01-06T00:00:00", 7)], 12, day0(), 1);
        assert_eq!(grid.get(0, 0), Some(7.0));
    }

    #[test]
    fn out_of_window_events_are_skipped_and_counted() {
        let events = [
            event("2024-01-05T10:00:00", 10), // day -1
            event("2024-01-06T10:00:00", 20),
            event("2024-01-09T10:00:00", 30), // day 3, window is 3 days
        ];
        let (grid, skipped) = slot_aggregate(&events, 6, day0(), 3);
        assert_eq!(skipped, 2);
        assert_eq!(grid.observed_total(), 20.0);
    }

    #[test]
    fn aggregation_conserves_in_range_steps() {
        // across a spread of timestamps, total cell mass equals total event mass
        let mut events = Vec::new();
        let mut expected = 0.0;
        for (i, hour) in [0u32, 3, 7, 11, 12, 15, 19, 23].iter().enumerate() {
            let ts = format!("2024-01-{:02}T{:02}:17:00", 6 + (i % 3), hour);
            events.push(event(&ts, (i as u32 + 1) * 11));
            expected += ((i + 1) * 11) as f64;
        }
        let (grid, skipped) = slot_aggregate(&events, 6, day0(), 3);
        assert_eq!(skipped, 0);
        assert_eq!(grid.observed_total(), expected);
    }

    #[test]
    fn impute_fills_with_column_mean() {
        // slot column values [100, absent, 200] -> absent becomes 150
        let mut g = DayGrid::new(3, 1);
        g.set(0, 0, Some(100.0));
        g.set(2, 0, Some(200.0));
        let stats = impute([("p1", &mut g)]).unwrap();
        assert_eq!(g.get(1, 0), Some(150.0));
        assert_eq!(stats.filled_cells, 1);
        assert_eq!(stats.slot_means, vec![150.0]);
    }

    #[test]
    fn impute_is_identity_on_complete_grids() {
        let mut g = DayGrid::new(2, 2);
        for d in 0..2 {
            for s in 0..2 {
                g.set(d, s, Some((d * 2 + s) as f64 + 0.5));
            }
        }
        let before = g.clone();
        let stats = impute([("p1", &mut g)]).unwrap();
        assert_eq!(g, before);
        assert_eq!(stats.filled_cells, 0);
    }

    #[test]
    fn impute_shares_one_cohort_mean_across_participants() {
        // three participants, one absent cell each in slot 1; all filled with
        // the cohort slot-1 mean of the six recorded values
        let mut grids: Vec<DayGrid> = (0..3)
            .map(|i| {
                let mut g = DayGrid::new(3, 2);
                for d in 0..3 {
                    g.set(d, 0, Some(10.0));
                    g.set(d, 1, Some(100.0 + (i * 3 + d) as f64));
                }
                g.set(i, 1, None);
                g
            })
            .collect();
        // recorded slot-1 values: all of 100..=108 except 100, 104, 108
        let expected = (101.0 + 102.0 + 103.0 + 105.0 + 106.0 + 107.0) / 6.0;
        let ids = ["a", "b", "c"];
        let stats = impute(
            grids
                .iter_mut()
                .enumerate()
                .map(|(i, g)| (ids[i], g)),
        )
        .unwrap();
        assert_eq!(stats.filled_cells, 3);
        for (i, g) in grids.iter().enumerate() {
            assert_eq!(g.get(i, 1), Some(expected));
        }
    }

    #[test]
    fn impute_is_idempotent_and_preserves_observed() {
        let mut g = DayGrid::new(4, 3);
        g.set(0, 0, Some(5.0));
        g.set(1, 1, Some(7.0));
        g.set(3, 2, Some(9.0));
        let mut h = g.clone();
        impute([("p", &mut h)]).unwrap();
        assert_eq!(h.get(0, 0), Some(5.0));
        assert_eq!(h.get(1, 1), Some(7.0));
        assert_eq!(h.get(3, 2), Some(9.0));
        let once = h.clone();
        let stats = impute([("p", &mut h)]).unwrap();
        assert_eq!(h, once);
        assert_eq!(stats.filled_cells, 0);
    }

    #[test]
    fn fully_absent_column_imputes_zero_with_warning() {
        let mut g = DayGrid::new(2, 2);
        g.set(0, 0, Some(4.0));
        g.set(1, 0, Some(6.0));
        let stats = impute([("p", &mut g)]).unwrap();
        assert_eq!(stats.degenerate_slots, vec![1]);
        assert_eq!(g.get(0, 1), Some(0.0));
        assert_eq!(g.get(1, 1), Some(0.0));
    }
}
