//! Rank-based comparisons of journal metrics across databases: Spearman's
//! rho and top-k rank-difference tables.

use crate::error::{Error, Result};

/// Ranks `values` descending (rank 1 = largest); tied values receive the
/// mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .partial_cmp(&values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && values[order[end + 1]] == values[order[start]] {
            end += 1;
        }
        // Positions start..=end hold ranks start+1 ..= end+1; ties share the mean.
        let rank = (start + 1 + end + 1) as f64 / 2.0;
        for &idx in &order[start..=end] {
            ranks[idx] = rank;
        }
        start = end + 1;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        cov += (a - mean_x) * (b - mean_y);
        var_x += (a - mean_x) * (a - mean_x);
        var_y += (b - mean_y) * (b - mean_y);
    }
    if var_x == 0.0 || var_y == 0.0 {
        return Err(Error::contract(
            "correlation undefined: a ranked vector has zero variance",
        ));
    }
    Ok(cov / (var_x * var_y).sqrt())
}

/// Spearman rank correlation: Pearson correlation of average-ranked values.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::contract(format!(
            "vector lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::contract("need at least 2 observations"));
    }
    pearson(&average_ranks(x), &average_ranks(y))
}

/// One journal's row in a rank-difference table.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDiffRow {
    /// Index into the aligned metric vectors.
    pub journal: usize,
    pub metric_a: f64,
    pub metric_b: f64,
    pub rank_a: f64,
    pub rank_b: f64,
    pub abs_diff: f64,
}

/// Ranks both metric vectors descending and lists the `k` journals whose
/// ranks differ most, ties broken by journal index.
///
/// Also returns the full distribution of absolute rank differences sorted
/// ascending, for distribution plots.
pub fn rank_difference_table(
    metric_a: &[f64],
    metric_b: &[f64],
    k: usize,
) -> Result<(Vec<RankDiffRow>, Vec<f64>)> {
    if metric_a.len() != metric_b.len() {
        return Err(Error::contract(format!(
            "metric vectors differ in length: {} vs {}",
            metric_a.len(),
            metric_b.len()
        )));
    }
    let ranks_a = average_ranks(metric_a);
    let ranks_b = average_ranks(metric_b);
    let mut rows: Vec<RankDiffRow> = (0..metric_a.len())
        .map(|i| RankDiffRow {
            journal: i,
            metric_a: metric_a[i],
            metric_b: metric_b[i],
            rank_a: ranks_a[i],
            rank_b: ranks_b[i],
            abs_diff: (ranks_a[i] - ranks_b[i]).abs(),
        })
        .collect();
    let mut distribution: Vec<f64> = rows.iter().map(|r| r.abs_diff).collect();
    distribution.sort_by(|a, b| a.partial_cmp(b).unwrap());
    rows.sort_by(|a, b| {
        b.abs_diff
            .partial_cmp(&a.abs_diff)
            .unwrap()
            .then(a.journal.cmp(&b.journal))
    });
    rows.truncate(k);
    Ok((rows, distribution))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_descending_with_tie_averaging() {
        assert_eq!(average_ranks(&[10.0, 9.0, 8.0, 7.0]), vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0]), vec![1.5, 3.0, 1.5]);
    }

    #[test]
    fn spearman_identity_and_reversal() {
        let x = [4.0, 1.0, 3.0, 2.0];
        assert!((spearman_rho(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        let reversed = [1.0, 4.0, 2.0, 3.0];
        assert!((spearman_rho(&x, &reversed).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_is_symmetric() {
        let x = [4.0, 1.0, 3.0, 2.0, 2.0];
        let y = [1.0, 2.0, 5.0, 3.0, 0.5];
        let a = spearman_rho(&x, &y).unwrap();
        let b = spearman_rho(&y, &x).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn spearman_rejects_degenerate_input() {
        assert!(spearman_rho(&[1.0], &[1.0]).is_err());
        assert!(spearman_rho(&[1.0, 2.0], &[1.0]).is_err());
        assert!(spearman_rho(&[1.0, 2.0], &[5.0, 5.0]).is_err());
    }

    #[test]
    fn rank_difference_hand_example() {
        let a = [10.0, 9.0, 8.0, 7.0];
        let b = [7.0, 8.0, 9.0, 10.0];
        let (rows, distribution) = rank_difference_table(&a, &b, 4).unwrap();
        let diffs: Vec<f64> = {
            let mut by_journal = rows.clone();
            by_journal.sort_by_key(|r| r.journal);
            by_journal.iter().map(|r| r.abs_diff).collect()
        };
        assert_eq!(diffs, vec![3.0, 1.0, 1.0, 3.0]);
        assert_eq!(distribution, vec![1.0, 1.0, 3.0, 3.0]);
        // Sorted by difference desc, then journal index.
        assert_eq!(rows[0].journal, 0);
        assert_eq!(rows[1].journal, 3);
    }

    #[test]
    fn identical_metrics_have_zero_differences() {
        let a = [5.0, 3.0, 4.0];
        let (rows, _) = rank_difference_table(&a, &a, 3).unwrap();
        assert!(rows.iter().all(|r| r.abs_diff == 0.0));
    }
}
