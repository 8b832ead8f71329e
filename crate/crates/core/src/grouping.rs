//! Overlapping segmentation of a component and DTW similarity grouping
//! against its most recent window.

use serde::{Deserialize, Serialize};

use crate::dtw::{dtw, znormalize};
use crate::error::{Error, Result};

/// A length-`L` window of a parent series starting at `start` (0-based).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub start: usize,
    pub values: Vec<f64>,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GroupingConfig {
    pub segment_length: usize,
    /// Number of most similar segments kept (top-k mode).
    pub group_size: usize,
    pub dtw_weight: f64,
    /// Compare z-normalized segments instead of raw values.
    pub znormalize: bool,
    /// When set, keep every candidate with distance at most
    /// `threshold * median distance` instead of a fixed top-k.
    pub threshold: Option<f64>,
}

impl Default for GroupingConfig {
    fn default() -> Self {
        GroupingConfig {
            segment_length: 4,
            group_size: 10,
            dtw_weight: 1.0,
            znormalize: false,
            threshold: None,
        }
    }
}

impl GroupingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.segment_length < 2 {
            return Err(Error::InvalidParameter(format!(
                "segment_length must be at least 2, got {}",
                self.segment_length
            )));
        }
        if self.group_size == 0 {
            return Err(Error::InvalidParameter("group_size must be at least 1".into()));
        }
        if !(self.dtw_weight > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dtw_weight must be positive, got {}",
                self.dtw_weight
            )));
        }
        if let Some(alpha) = self.threshold {
            if !(alpha > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "threshold must be positive, got {alpha}"
                )));
            }
        }
        Ok(())
    }
}

/// A candidate with its DTW distance to the reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedSegment {
    pub segment: Segment,
    pub distance: f64,
}

/// Where one training pair came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub start: usize,
    pub distance: f64,
}

/// Supervised window-to-next-value pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainingSet {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    pub provenance: Vec<Provenance>,
}

impl TrainingSet {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn input_length(&self) -> usize {
        self.inputs.first().map_or(0, Vec::len)
    }

    /// Every length-`window` slice of `series` paired with the value after it.
    pub fn sliding(series: &[f64], window: usize) -> Result<TrainingSet> {
        if window == 0 || series.len() <= window {
            return Err(Error::TooShort {
                required: window + 1,
                actual: series.len(),
            });
        }
        let count = series.len() - window;
        Ok(TrainingSet {
            inputs: (0..count).map(|s| series[s..s + window].to_vec()).collect(),
            targets: (0..count).map(|s| series[s + window]).collect(),
            provenance: (0..count)
                .map(|start| Provenance {
                    start,
                    distance: 0.0,
                })
                .collect(),
        })
    }
}

/// All `T - L + 1` stride-one windows of length `L`.
pub fn segmentize(series: &[f64], segment_length: usize) -> Result<Vec<Segment>> {
    if segment_length < 2 || segment_length > series.len() {
        return Err(Error::InvalidParameter(format!(
            "segment length {segment_length} outside [2, {}]",
            series.len()
        )));
    }
    Ok(series
        .windows(segment_length)
        .enumerate()
        .map(|(start, w)| Segment {
            start,
            values: w.to_vec(),
        })
        .collect())
}

/// Ranks candidates by DTW distance to `reference`, nearest first, with ties
/// going to the more recent segment. Only candidates whose successor lies
/// within `parent_len` are eligible; the reference itself never is.
pub fn rank_by_similarity(
    segments: &[Segment],
    reference: &Segment,
    parent_len: usize,
    cfg: &GroupingConfig,
) -> Result<Vec<RankedSegment>> {
    let prepare = |v: &[f64]| if cfg.znormalize { znormalize(v) } else { v.to_vec() };
    let query = prepare(&reference.values);
    let mut ranked = segments
        .iter()
        .filter(|s| s.start != reference.start && s.start + s.len() < parent_len)
        .map(|s| {
            Ok(RankedSegment {
                distance: dtw(&prepare(&s.values), &query, cfg.dtw_weight)?,
                segment: s.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if ranked.is_empty() {
        return Err(Error::NoCandidates {
            len: parent_len,
            segment_length: reference.len(),
        });
    }
    ranked.sort_by(|a, b| {
        a.distance
            .total_cmp(&b.distance)
            .then(b.segment.start.cmp(&a.segment.start))
    });
    Ok(ranked)
}

/// Keeps the leading `k` ranked candidates (all of them if fewer exist).
pub fn select_top_k(ranked: &[RankedSegment], k: usize) -> &[RankedSegment] {
    &ranked[..k.min(ranked.len())]
}

/// Keeps candidates within `alpha` times the median distance; at least one.
pub fn select_by_threshold(ranked: &[RankedSegment], alpha: f64) -> &[RankedSegment] {
    let n = ranked.len();
    let median = if n % 2 == 1 {
        ranked[n / 2].distance
    } else {
        0.5 * (ranked[n / 2 - 1].distance + ranked[n / 2].distance)
    };
    let keep = ranked.iter().take_while(|r| r.distance <= alpha * median).count();
    &ranked[..keep.max(1)]
}

/// Applies the configured selection rule.
pub fn select<'a>(ranked: &'a [RankedSegment], cfg: &GroupingConfig) -> &'a [RankedSegment] {
    match cfg.threshold {
        Some(alpha) => select_by_threshold(ranked, alpha),
        None => select_top_k(ranked, cfg.group_size),
    }
}

/// Pairs each chosen segment with the value following it in `parent`.
pub fn build_training_set(chosen: &[RankedSegment], parent: &[f64]) -> Result<TrainingSet> {
    if chosen.is_empty() {
        return Err(Error::InvalidParameter("no segments selected for training".into()));
    }
    let mut set = TrainingSet {
        inputs: Vec::with_capacity(chosen.len()),
        targets: Vec::with_capacity(chosen.len()),
        provenance: Vec::with_capacity(chosen.len()),
    };
    for r in chosen {
        let next = r.segment.start + r.segment.len();
        let target = *parent.get(next).ok_or(Error::NoCandidates {
            len: parent.len(),
            segment_length: r.segment.len(),
        })?;
        set.inputs.push(r.segment.values.clone());
        set.targets.push(target);
        set.provenance.push(Provenance {
            start: r.segment.start,
            distance: r.distance,
        });
    }
    Ok(set)
}

/// Segmentize, rank against the trailing window and build the grouped
/// training set in one go. Returns the set and the reference window.
pub fn group_for_next(series: &[f64], cfg: &GroupingConfig) -> Result<(TrainingSet, Segment)> {
    cfg.validate()?;
    let segments = segmentize(series, cfg.segment_length)?;
    let reference = segments.last().cloned().expect("segmentize returns at least one segment");
    let ranked = rank_by_similarity(&segments, &reference, series.len(), cfg)?;
    let set = build_training_set(select(&ranked, cfg), series)?;
    Ok((set, reference))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn starts(ranked: &[RankedSegment]) -> Vec<usize> {
        ranked.iter().map(|r| r.segment.start).collect()
    }

    #[test]
    fn segment_counts() {
        assert_eq!(segmentize(&[0.0; 5], 3).unwrap().len(), 3);
        let whole = segmentize(&[1.0, 2.0, 3.0], 3).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].values, vec![1.0, 2.0, 3.0]);
        let segs = segmentize(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        let values: Vec<_> = segs.iter().map(|s| s.values.clone()).collect();
        assert_eq!(values, vec![vec![1.0, 2.0], vec![2.0, 3.0], vec![3.0, 4.0]]);
        assert_eq!(starts_of(&segs), vec![0, 1, 2]);
    }

    fn starts_of(segs: &[Segment]) -> Vec<usize> {
        segs.iter().map(|s| s.start).collect()
    }

    #[test]
    fn segment_length_out_of_range() {
        assert!(segmentize(&[0.0; 5], 1).is_err());
        assert!(segmentize(&[0.0; 5], 6).is_err());
    }

    #[test]
    fn exact_copy_ranks_first() {
        let imf = [0.0, 1.0, 0.0, -1.0, 0.0, 1.0, 0.0];
        let cfg = GroupingConfig {
            segment_length: 3,
            ..Default::default()
        };
        let segs = segmentize(&imf, 3).unwrap();
        let reference = segs.last().unwrap().clone();
        let ranked = rank_by_similarity(&segs, &reference, imf.len(), &cfg).unwrap();
        // Brute force: reference [0,1,0] against each eligible window.
        //   start 0 [0,1,0]   -> 0
        //   start 1 [1,0,-1]  -> 2
        //   start 2 [0,-1,0]  -> 2
        //   start 3 [-1,0,1]  -> 2
        let mut expected: Vec<(f64, usize)> = (0..4)
            .map(|s| (dtw(&imf[s..s + 3], &reference.values, 1.0).unwrap(), s))
            .collect();
        assert_eq!(
            expected.iter().map(|e| e.0).collect::<Vec<_>>(),
            vec![0.0, 2.0, 2.0, 2.0]
        );
        expected.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        assert_eq!(starts(&ranked), expected.iter().map(|e| e.1).collect::<Vec<_>>());
        assert_eq!(ranked[0].segment.start, 0);
        assert_eq!(ranked[0].distance, 0.0);
        let anti_phase = ranked.iter().position(|r| r.segment.start == 2).unwrap();
        assert!(anti_phase > 0);
    }

    #[test]
    fn ties_prefer_recent() {
        // Windows at 1 and 4 are identical copies of [5, 5].
        let series = [0.0, 5.0, 5.0, 9.0, 5.0, 5.0, 7.0, 1.0, 1.0];
        let cfg = GroupingConfig {
            segment_length: 2,
            ..Default::default()
        };
        let segs = segmentize(&series, 2).unwrap();
        let reference = Segment {
            start: 7,
            values: vec![5.0, 5.0],
        };
        let ranked = rank_by_similarity(&segs, &reference, series.len(), &cfg).unwrap();
        assert_eq!(starts(&ranked)[..2], [4, 1]);
    }

    #[test]
    fn reference_and_successorless_windows_are_excluded() {
        let series = [1.0, 2.0, 3.0, 4.0, 5.0];
        let cfg = GroupingConfig {
            segment_length: 2,
            ..Default::default()
        };
        let segs = segmentize(&series, 2).unwrap();
        let reference = segs.last().unwrap().clone();
        let ranked = rank_by_similarity(&segs, &reference, series.len(), &cfg).unwrap();
        assert_eq!(ranked.len(), 3);
        assert!(ranked.iter().all(|r| r.segment.start != 3));
    }

    #[test]
    fn no_candidates() {
        let series = [1.0, 2.0, 3.0];
        let segs = segmentize(&series, 3).unwrap();
        let cfg = GroupingConfig {
            segment_length: 3,
            ..Default::default()
        };
        assert!(matches!(
            rank_by_similarity(&segs, &segs[0], 3, &cfg),
            Err(Error::NoCandidates { .. })
        ));
    }

    #[test]
    fn successor_indexing() {
        let imf = [10.0, 20.0, 30.0, 40.0, 50.0];
        let chosen = [RankedSegment {
            segment: Segment {
                start: 1,
                values: vec![20.0, 30.0],
            },
            distance: 0.5,
        }];
        let set = build_training_set(&chosen, &imf).unwrap();
        assert_eq!(set.inputs, vec![vec![20.0, 30.0]]);
        assert_eq!(set.targets, vec![40.0]);
        assert_eq!(set.provenance[0].start, 1);
    }

    #[test]
    fn oversized_k_uses_everything() {
        let series: Vec<f64> = (0..12).map(|t| (t as f64 * 0.9).sin()).collect();
        let cfg = GroupingConfig {
            segment_length: 4,
            group_size: 100,
            ..Default::default()
        };
        let (set, reference) = group_for_next(&series, &cfg).unwrap();
        assert_eq!(set.len(), 12 - 4);
        assert_eq!(reference.start, 8);
    }

    #[test]
    fn threshold_mode_keeps_close_candidates() {
        let series: Vec<f64> = (0..40).map(|t| (t as f64 * std::f64::consts::PI / 4.0).sin()).collect();
        let cfg = GroupingConfig {
            segment_length: 4,
            threshold: Some(0.5),
            ..Default::default()
        };
        let (set, _) = group_for_next(&series, &cfg).unwrap();
        assert!(!set.is_empty());
        let segs = segmentize(&series, 4).unwrap();
        let ranked = rank_by_similarity(&segs, segs.last().unwrap(), series.len(), &cfg).unwrap();
        let n = ranked.len();
        let mut d: Vec<f64> = ranked.iter().map(|r| r.distance).collect();
        d.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 { d[n / 2] } else { 0.5 * (d[n / 2 - 1] + d[n / 2]) };
        assert!(set.provenance.iter().all(|p| p.distance <= 0.5 * median) || set.len() == 1);
    }

    #[test]
    fn sliding_pairs() {
        let set = TrainingSet::sliding(&[1.0, 2.0, 3.0, 4.0], 2).unwrap();
        assert_eq!(set.inputs, vec![vec![1.0, 2.0], vec![2.0, 3.0]]);
        assert_eq!(set.targets, vec![3.0, 4.0]);
        assert!(TrainingSet::sliding(&[1.0, 2.0], 2).is_err());
    }

    proptest! {
        #[test]
        fn grouping_invariants(
            series in prop::collection::vec(-5.0f64..5.0, 6..40),
            l in 2usize..5,
            k in 1usize..12,
        ) {
            prop_assume!(series.len() >= 2 * l);
            let segs = segmentize(&series, l).unwrap();
            prop_assert_eq!(segs.len(), series.len() - l + 1);
            let cfg = GroupingConfig { segment_length: l, group_size: k, ..Default::default() };
            let reference = segs.last().unwrap().clone();
            let ranked = rank_by_similarity(&segs, &reference, series.len(), &cfg).unwrap();

            // A permutation of the eligible starts, distances non-decreasing.
            let mut got = starts(&ranked);
            got.sort();
            prop_assert_eq!(got, (0..series.len() - l).collect::<Vec<_>>());
            prop_assert!(ranked.windows(2).all(|w| w[0].distance <= w[1].distance));

            let set = build_training_set(select_top_k(&ranked, k), &series).unwrap();
            prop_assert_eq!(set.len(), k.min(ranked.len()));
            for (input, (target, p)) in set.inputs.iter().zip(set.targets.iter().zip(&set.provenance)) {
                prop_assert!(p.start != reference.start);
                prop_assert_eq!(input.as_slice(), &series[p.start..p.start + l]);
                prop_assert_eq!(*target, series[p.start + l]);
            }

            // Prefix stability under shrinking k.
            for smaller in 1..k {
                let a = select_top_k(&ranked, smaller);
                prop_assert_eq!(a, &select_top_k(&ranked, k)[..a.len()]);
            }
        }
    }
}
