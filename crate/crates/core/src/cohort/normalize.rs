//! Per-feature standardization with statistics fitted on the training
//! split only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-feature mean and standard deviation. Features with zero spread map
/// to 0 rather than dividing by zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    /// Fits means and (population) standard deviations over `rows`, all of
    /// which must share a dimension.
    pub fn fit<'a, I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a [f64]> + Clone,
    {
        let mut count = 0usize;
        let mut means: Vec<f64> = Vec::new();
        for row in rows.clone() {
            if means.is_empty() {
                means = vec![0.0; row.len()];
            } else if row.len() != means.len() {
                return Err(Error::Data(format!(
                    "standardizer fit: row of length {} among rows of length {}",
                    row.len(),
                    means.len()
                )));
            }
            for (m, x) in means.iter_mut().zip(row) {
                *m += x;
            }
            count += 1;
        }
        if count == 0 {
            return Err(Error::Data("standardizer fit: no rows".into()));
        }
        for m in &mut means {
            *m /= count as f64;
        }
        let mut vars = vec![0.0f64; means.len()];
        for row in rows {
            for ((v, m), x) in vars.iter_mut().zip(&means).zip(row) {
                let d = x - m;
                *v += d * d;
            }
        }
        let stds = vars
            .into_iter()
            .map(|v| (v / count as f64).sqrt())
            .collect();
        Ok(Standardizer { means, stds })
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    /// Standardizes one feature vector in place.
    pub fn transform(&self, row: &mut [f64]) -> Result<()> {
        if row.len() != self.dim() {
            return Err(Error::Data(format!(
                "standardizer: expected {} features, got {}",
                self.dim(),
                row.len()
            )));
        }
        for (x, (m, s)) in row.iter_mut().zip(self.means.iter().zip(&self.stds)) {
            *x = if *s == 0.0 { 0.0 } else { (*x - m) / s };
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn train_split_means_vanish() {
        let rows = vec![
            vec![1.0, 10.0, 5.0],
            vec![2.0, 20.0, 5.0],
            vec![3.0, 33.0, 5.0],
            vec![4.0, 47.0, 5.0],
        ];
        let stdzr = Standardizer::fit(rows.iter().map(|r| r.as_slice())).unwrap();
        let mut sums = vec![0.0; 3];
        for row in &rows {
            let mut r = row.clone();
            stdzr.transform(&mut r).unwrap();
            for (s, x) in sums.iter_mut().zip(&r) {
                *s += x;
            }
        }
        for s in sums {
            assert!((s / rows.len() as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_column_maps_to_zero_without_fault() {
        let rows = vec![vec![5.0, 1.0], vec![5.0, 3.0]];
        let stdzr = Standardizer::fit(rows.iter().map(|r| r.as_slice())).unwrap();
        assert_eq!(stdzr.stds[0], 0.0);
        let mut r = vec![5.0, 2.0];
        stdzr.transform(&mut r).unwrap();
        assert_eq!(r[0], 0.0);
        assert_eq!(r[1], 0.0); // 2.0 equals the column mean
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let rows = vec![vec![1.0, 2.0]];
        let stdzr = Standardizer::fit(rows.iter().map(|r| r.as_slice())).unwrap();
        let mut bad = vec![1.0, 2.0, 3.0];
        assert!(stdzr.transform(&mut bad).is_err());
        assert!(Standardizer::fit([&[1.0, 2.0][..], &[1.0][..]]).is_err());
    }
}
