//! Agglomerative clustering with the Ward criterion.
//!
//! Merge height is the increase in total within-cluster sum of squares
//! caused by the merge (for two singletons: ||a - b||^2 / 2), maintained via
//! Lance-Williams updates. Ties break toward the smallest (left, right)
//! node-id pair. Leaf ids are 0..n-1, internal ids n..2n-2 in merge order.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::ClusterError;
use crate::matrix::{squared_distance, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy)]
pub struct Merge<S> {
    pub left: usize,
    pub right: usize,
    pub height: S,
    pub size: usize,
}

#[derive(Debug, Clone)]
pub struct Dendrogram<S> {
    pub merges: Vec<Merge<S>>,
}

impl<S: Scalar> Dendrogram<S> {
    pub fn n_leaves(&self) -> usize {
        self.merges.len() + 1
    }
}

// Wire shape: {"merges": [[left, right, height, size], ...]}.
impl<S: Scalar> Serialize for Dendrogram<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        struct MergeWire<'a, S>(&'a Merge<S>);
        impl<S: Scalar> Serialize for MergeWire<'_, S> {
            fn serialize<Ser: Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
                let mut seq = serializer.serialize_seq(Some(4))?;
                seq.serialize_element(&self.0.left)?;
                seq.serialize_element(&self.0.right)?;
                seq.serialize_element(&self.0.height.to_f64_c())?;
                seq.serialize_element(&self.0.size)?;
                seq.end()
            }
        }
        let wires: Vec<MergeWire<'_, S>> = self.merges.iter().map(MergeWire).collect();
        let mut st = serializer.serialize_struct("Dendrogram", 1)?;
        st.serialize_field("merges", &wires)?;
        st.end()
    }
}

/// Ward agglomerative clustering over the rows of `x`.
pub fn ward_hac<S: Scalar>(x: &Matrix<S>) -> Result<Dendrogram<S>, ClusterError> {
    let n = x.rows();
    if n < 2 {
        return Err(ClusterError::TooFewPoints { n, min: 2 });
    }
    if !x.is_finite() {
        return Err(ClusterError::NonFiniteInput);
    }
    // Active clusters occupy slots 0..n; merged clusters reuse the left slot.
    let mut node_id: Vec<usize> = (0..n).collect();
    let mut size: Vec<usize> = vec![1; n];
    let mut active: Vec<bool> = vec![true; n];
    // dist[i][j] (i < j): Ward SSE increase for merging slots i and j.
    let mut dist = vec![S::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = squared_distance(x.row(i), x.row(j)) * S::from_f(0.5);
            dist[i * n + j] = d;
        }
    }
    let at = |i: usize, j: usize| if i < j { i * n + j } else { j * n + i };

    let mut merges = Vec::with_capacity(n - 1);
    let mut prev_height = S::zero();
    for step in 0..(n - 1) {
        // Global minimum with smallest (left, right) node-id tie-breaking.
        let mut best: Option<(S, usize, usize, (usize, usize))> = None;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in (i + 1)..n {
                if !active[j] {
                    continue;
                }
                let d = dist[i * n + j];
                let pair = if node_id[i] < node_id[j] {
                    (node_id[i], node_id[j])
                } else {
                    (node_id[j], node_id[i])
                };
                let replace = match best {
                    None => true,
                    Some((bd, _, _, bpair)) => d < bd || (d == bd && pair < bpair),
                };
                if replace {
                    best = Some((d, i, j, pair));
                }
            }
        }
        let (height, si, sj, (left, right)) = best.expect("at least two active clusters");
        assert!(
            height >= prev_height,
            "Ward merge heights must be non-decreasing: {height} after {prev_height}"
        );
        prev_height = height;
        let merged_size = size[si] + size[sj];
        merges.push(Merge {
            left,
            right,
            height,
            size: merged_size,
        });
        // Lance-Williams update against every other active slot.
        let (ni, nj) = (S::from_n(size[si]), S::from_n(size[sj]));
        for k in 0..n {
            if !active[k] || k == si || k == sj {
                continue;
            }
            let nk = S::from_n(size[k]);
            let updated = ((ni + nk) * dist[at(k, si)] + (nj + nk) * dist[at(k, sj)]
                - nk * height)
                / (ni + nj + nk);
            dist[at(k, si)] = updated;
        }
        active[sj] = false;
        size[si] = merged_size;
        node_id[si] = n + step;
    }
    Ok(Dendrogram { merges })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KSuggestion {
    pub k: usize,
    /// All merge heights equal or zero; the suggestion fell back to `k_min`.
    pub degenerate: bool,
}

/// Picks k in [k_min, k_max] maximizing the relative merge-height gap
/// h(n-k+1) / h(n-k) over the 1-based merge sequence. Ties take the smallest
/// k; degenerate height sequences fall back to `k_min`.
pub fn suggest_k<S: Scalar>(dendrogram: &Dendrogram<S>, k_min: usize, k_max: usize) -> KSuggestion {
    let n = dendrogram.n_leaves();
    let k_min = k_min.max(2);
    let k_max = k_max.min(n.saturating_sub(1)).max(k_min);
    let h = |i: usize| dendrogram.merges[i - 1].height; // 1-based
    let all_equal = dendrogram
        .merges
        .windows(2)
        .all(|w| w[0].height == w[1].height);
    if all_equal {
        return KSuggestion {
            k: k_min,
            degenerate: true,
        };
    }
    let mut best: Option<(S, usize)> = None;
    for k in k_min..=k_max {
        let den = h(n - k);
        if den <= S::zero() {
            continue;
        }
        let gap = h(n - k + 1) / den;
        if best.is_none_or(|(bg, _)| gap > bg) {
            best = Some((gap, k));
        }
    }
    match best {
        Some((_, k)) => KSuggestion {
            k,
            degenerate: false,
        },
        None => KSuggestion {
            k: k_min,
            degenerate: true,
        },
    }
}

/// Adjusted Rand index between two labelings of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let ka = a.iter().max().map_or(0, |&m| m + 1);
    let kb = b.iter().max().map_or(0, |&m| m + 1);
    let mut table = vec![0u64; ka * kb];
    let mut rows = vec![0u64; ka];
    let mut cols = vec![0u64; kb];
    for (&x, &y) in a.iter().zip(b) {
        table[x * kb + y] += 1;
        rows[x] += 1;
        cols[y] += 1;
    }
    let choose2 = |v: u64| (v * v.saturating_sub(1)) as f64 / 2.0;
    let sum_cells: f64 = table.iter().map(|&v| choose2(v)).sum();
    let sum_rows: f64 = rows.iter().map(|&v| choose2(v)).sum();
    let sum_cols: f64 = cols.iter().map(|&v| choose2(v)).sum();
    let total = choose2(a.len() as u64);
    let expected = sum_rows * sum_cols / total;
    let max_index = (sum_rows + sum_cols) / 2.0;
    if (max_index - expected).abs() < f64::EPSILON {
        return 1.0;
    }
    (sum_cells - expected) / (max_index - expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{derive_rng, unit};

    #[test]
    fn two_points_merge_at_half_squared_distance() {
        let x: Matrix<f64> = Matrix::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0]]);
        let d = ward_hac(&x).unwrap();
        assert_eq!(d.merges.len(), 1);
        assert_eq!(d.merges[0].left, 0);
        assert_eq!(d.merges[0].right, 1);
        assert!((d.merges[0].height - 12.5).abs() < 1e-12);
        assert_eq!(d.merges[0].size, 2);
    }

    // Brute-force oracle: smallest SSE increase over all pairs merges first.
    #[test]
    fn closest_pair_merges_first_in_one_dimension() {
        let x: Matrix<f64> = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![10.0]]);
        let d = ward_hac(&x).unwrap();
        // Candidate first merges: (0,1) costs 0.5, (0,2) costs 50, (1,2) 40.5.
        assert_eq!((d.merges[0].left, d.merges[0].right), (0, 1));
        assert!((d.merges[0].height - 0.5).abs() < 1e-12);
    }

    #[test]
    fn identical_points_merge_at_zero() {
        let x: Matrix<f64> = Matrix::from_rows(&vec![vec![2.0, 2.0]; 5]);
        let d = ward_hac(&x).unwrap();
        for m in &d.merges {
            assert_eq!(m.height, 0.0);
        }
        assert_eq!(d.merges.last().unwrap().size, 5);
    }

    #[test]
    fn duplicates_merge_before_any_positive_height() {
        let x = Matrix::from_rows(&[vec![0.0], vec![5.0], vec![0.0], vec![5.0], vec![9.0]]);
        let d = ward_hac(&x).unwrap();
        assert_eq!(d.merges[0].height, 0.0);
        assert_eq!(d.merges[1].height, 0.0);
        assert!(d.merges[2].height > 0.0);
    }

    #[test]
    fn heights_are_monotone_on_random_data() {
        for seed in 0..20 {
            let mut rng = derive_rng(seed, 1);
            let rows: Vec<Vec<f64>> = (0..30)
                .map(|_| (0..5).map(|_| unit::<f64>(&mut rng) * 10.0).collect())
                .collect();
            let d = ward_hac(&Matrix::from_rows(&rows)).unwrap();
            for pair in d.merges.windows(2) {
                assert!(pair[1].height >= pair[0].height);
            }
        }
    }

    #[test]
    fn suggest_k_finds_the_relative_jump() {
        // heights [1, 1, 1, 10] with n = 5: gap(2) = 10, all others 1.
        let d = Dendrogram {
            merges: vec![
                Merge { left: 0, right: 1, height: 1.0, size: 2 },
                Merge { left: 2, right: 3, height: 1.0, size: 2 },
                Merge { left: 5, right: 6, height: 1.0, size: 4 },
                Merge { left: 4, right: 7, height: 10.0, size: 5 },
            ],
        };
        let s = suggest_k(&d, 2, 4);
        assert_eq!(s.k, 2);
        assert!(!s.degenerate);
    }

    #[test]
    fn equal_heights_fall_back_to_k_min() {
        let d = Dendrogram {
            merges: vec![
                Merge { left: 0, right: 1, height: 2.0, size: 2 },
                Merge { left: 2, right: 3, height: 2.0, size: 2 },
                Merge { left: 4, right: 5, height: 2.0, size: 4 },
            ],
        };
        let s = suggest_k(&d, 2, 3);
        assert_eq!(s.k, 2);
        assert!(s.degenerate);
    }

    #[test]
    fn dendrogram_serializes_to_wire_shape() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![10.0]]);
        let d = ward_hac(&x).unwrap();
        let json = serde_json::to_value(&d).unwrap();
        let merges = json["merges"].as_array().unwrap();
        assert_eq!(merges.len(), 2);
        assert_eq!(merges[0][0], 0);
        assert_eq!(merges[0][1], 1);
        assert_eq!(merges[0][3], 2);
    }

    #[test]
    fn ari_is_one_for_identical_partitions() {
        let a = vec![0, 0, 1, 1, 2, 2];
        assert!((adjusted_rand_index(&a, &a) - 1.0).abs() < 1e-12);
        let relabeled = vec![2, 2, 0, 0, 1, 1];
        assert!((adjusted_rand_index(&a, &relabeled) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ari_is_near_zero_for_random_partitions() {
        let mut rng = derive_rng(4, 2);
        let a: Vec<usize> = (0..500).map(|_| (unit::<f64>(&mut rng) * 4.0) as usize).collect();
        let b: Vec<usize> = (0..500).map(|_| (unit::<f64>(&mut rng) * 4.0) as usize).collect();
        assert!(adjusted_rand_index(&a, &b).abs() < 0.05);
    }
}
