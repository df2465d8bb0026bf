use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlations {
    /// Spearman rank correlation.
    pub rho: f64,
    /// Pearson product-moment correlation.
    pub r: f64,
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidInput("zero variance".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based ranks; tied values share the mean of the ranks they span.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    check_lengths(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

pub fn rank_correlations(pred: &[f64], gold: &[f64]) -> Result<Correlations> {
    Ok(Correlations {
        rho: spearman(pred, gold)?,
        r: pearson(pred, gold)?,
    })
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::InvalidInput(format!("length mismatch: {} vs {}", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::InvalidInput("at least 3 points required".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite value".into()));
    }
    Ok(())
}

/// Two-tailed p-value for the difference of two independent correlations.
pub fn fisher_z_test(r1: f64, n1: usize, r2: f64, n2: usize) -> Result<f64> {
    for (r, n) in [(r1, n1), (r2, n2)] {
        if !(r.abs() < 1.0) {
            return Err(Error::InvalidInput(format!("|r| must be below 1, got {r}")));
        }
        if n <= 3 {
            return Err(Error::InvalidInput(format!("sample size must exceed 3, got {n}")));
        }
    }
    let z = |r: f64| 0.5 * ((1.0 + r) / (1.0 - r)).ln();
    let se = (1.0 / (n1 - 3) as f64 + 1.0 / (n2 - 3) as f64).sqrt();
    let stat = (z(r1) - z(r2)) / se;
    Ok(erfc(stat.abs() / std::f64::consts::SQRT_2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassificationMetrics {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Set when precision, recall or F had a zero denominator and was
    /// reported as 0.
    pub undefined: bool,
}

pub fn classification_metrics(predictions: &[bool], labels: &[bool]) -> Result<ClassificationMetrics> {
    if predictions.len() != labels.len() {
        return Err(Error::InvalidInput("length mismatch".into()));
    }
    if labels.is_empty() {
        return Err(Error::InvalidInput("no items".into()));
    }
    let (mut tp, mut fp, mut tn, mut fn_) = (0, 0, 0, 0);
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p, l) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, false) => tn += 1,
            (false, true) => fn_ += 1,
        }
    }
    let mut undefined = false;
    let mut ratio = |num: usize, den: usize| {
        if den == 0 {
            undefined = true;
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall == 0.0 {
        undefined = true;
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(ClassificationMetrics {
        tp,
        fp,
        tn,
        fn_,
        accuracy: (tp + tn) as f64 / labels.len() as f64,
        precision,
        recall,
        f1,
        undefined,
    })
}

/// Positive iff `score > threshold`.
pub fn paraphrase_decide(score: f64, threshold: f64) -> bool {
    score > threshold
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Objective {
    Accuracy,
    F1,
}

pub const GRID_STEPS: usize = 200;

/// Exhaustive search over thresholds `i / 200`, `i = 0..=200`; the lowest
/// optimal threshold wins.
pub fn tune_threshold(scores: &[f64], labels: &[bool], objective: Objective) -> Result<(f64, f64)> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidInput("length mismatch".into()));
    }
    if !labels.iter().any(|&l| l) || labels.iter().all(|&l| l) {
        return Err(Error::InvalidInput("need both positive and negative examples".into()));
    }
    let mut best: Option<(f64, f64)> = None;
    for i in 0..=GRID_STEPS {
        let t = i as f64 / GRID_STEPS as f64;
        let preds: Vec<bool> = scores.iter().map(|&s| paraphrase_decide(s, t)).collect();
        let m = classification_metrics(&preds, labels)?;
        let value = match objective {
            Objective::Accuracy => m.accuracy,
            Objective::F1 => m.f1,
        };
        if best.is_none_or(|(_, bv)| value > bv) {
            best = Some((t, value));
        }
    }
    Ok(best.expect("grid is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn perfect_and_reversed() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let c = rank_correlations(&x, &x).unwrap();
        assert!((c.rho - 1.0).abs() < 1e-12 && (c.r - 1.0).abs() < 1e-12);
        let rev = [5.0, 4.0, 3.0, 2.0, 1.0];
        assert!((spearman(&x, &rev).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn tied_ranks_by_hand() {
        let pred = [1.0, 2.0, 2.0, 3.0, 4.0];
        let gold = [1.0, 3.0, 2.0, 4.0, 5.0];
        assert_eq!(average_ranks(&pred), [1.0, 2.5, 2.5, 4.0, 5.0]);
        // ranks p = (1, 2.5, 2.5, 4, 5), g = (1, 3, 2, 4, 5), both mean 3
        // dp = (-2, -.5, -.5, 1, 2), dg = (-2, 0, -1, 1, 2)
        // sum dp·dg = 4 + 0 + .5 + 1 + 4 = 9.5; sum dp² = 9.5; sum dg² = 10
        let expected = 9.5 / (9.5f64 * 10.0).sqrt();
        assert!((spearman(&pred, &gold).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn correlation_errors() {
        assert!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn fisher_cases() {
        assert_eq!(fisher_z_test(0.5, 30, 0.5, 30).unwrap(), 1.0);
        let p = fisher_z_test(0.9, 30, 0.3, 30).unwrap();
        // z1 = atanh .9 = 1.47222, z2 = atanh .3 = 0.30952, se = sqrt(2/27)
        let stat = (0.9f64.atanh() - 0.3f64.atanh()) / (2.0f64 / 27.0).sqrt();
        assert!((p - erfc(stat / std::f64::consts::SQRT_2)).abs() < 1e-15);
        assert!(p < 0.01);
        assert_eq!(p, fisher_z_test(0.3, 30, 0.9, 30).unwrap());
        assert!(fisher_z_test(1.0, 30, 0.3, 30).is_err());
        assert!(fisher_z_test(0.5, 3, 0.3, 30).is_err());
    }

    #[test]
    fn decisions_are_strict() {
        assert!(paraphrase_decide(0.25, 0.2));
        assert!(!paraphrase_decide(0.2, 0.2));
        assert!(!paraphrase_decide(0.0, 0.1));
    }

    #[test]
    fn metrics_cases() {
        let all = classification_metrics(&[true, false], &[true, false]).unwrap();
        assert_eq!((all.accuracy, all.f1), (1.0, 1.0));
        let pos = classification_metrics(&[true; 4], &[true, false, true, false]).unwrap();
        assert_eq!((pos.recall, pos.precision), (1.0, 0.5));
        // 8 items, one false positive and one false negative
        let preds = [true, true, true, false, false, false, true, false];
        let labels = [true, true, false, false, false, true, true, false];
        let m = classification_metrics(&preds, &labels).unwrap();
        assert_eq!((m.tp, m.fp, m.tn, m.fn_), (3, 1, 3, 1));
        assert_eq!((m.accuracy, m.precision, m.recall, m.f1), (0.75, 0.75, 0.75, 0.75));
        let none = classification_metrics(&[false; 2], &[false; 2]).unwrap();
        assert!(none.undefined);
        assert_eq!(none.f1, 0.0);
    }

    #[test]
    fn separable_threshold() {
        let scores = [0.1, 0.32, 0.5, 0.9];
        let labels = [false, false, true, true];
        let (t, acc) = tune_threshold(&scores, &labels, Objective::Accuracy).unwrap();
        assert_eq!(acc, 1.0);
        assert_eq!(t, 0.32);
        assert!(tune_threshold(&scores, &[true; 4], Objective::Accuracy).is_err());
    }

    #[test]
    fn six_pair_grid_oracle() {
        let scores = [0.05, 0.21, 0.33, 0.4, 0.47, 0.8];
        let labels = [false, true, false, true, false, true];
        for objective in [Objective::Accuracy, Objective::F1] {
            let mut expected = (0.0, f64::NEG_INFINITY);
            for i in 0..=200 {
                let t = i as f64 / 200.0;
                let preds: Vec<bool> = scores.iter().map(|s| *s > t).collect();
                let (mut tp, mut fp, mut fn_, mut correct) = (0.0, 0.0, 0.0, 0.0);
                for (p, l) in preds.iter().zip(labels) {
                    if *p == l {
                        correct += 1.0;
                    }
                    match (*p, l) {
                        (true, true) => tp += 1.0,
                        (true, false) => fp += 1.0,
                        (false, true) => fn_ += 1.0,
                        _ => {}
                    }
                }
                let v = match objective {
                    Objective::Accuracy => correct / 6.0,
                    Objective::F1 => {
                        if tp == 0.0 {
                            0.0
                        } else {
                            2.0 * tp / (2.0 * tp + fp + fn_)
                        }
                    }
                };
                if v > expected.1 {
                    expected = (t, v);
                }
            }
            let got = tune_threshold(&scores, &labels, objective).unwrap();
            assert_eq!(got.0, expected.0);
            assert!((got.1 - expected.1).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn spearman_invariant_under_squaring(pairs in prop::collection::vec((0.01f64..10.0, -5.0f64..5.0), 3..30)) {
            let pred: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let gold: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let squared: Vec<f64> = pred.iter().map(|v| v * v).collect();
            if let (Ok(a), Ok(b)) = (spearman(&pred, &gold), spearman(&squared, &gold)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
