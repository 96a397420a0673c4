//! Class rebalancing: SMOTE oversampling and random undersampling.

use rand::seq::SliceRandom;
use rand::Rng;

use super::LearnError;
use crate::matrix::{squared_distance, Matrix};
use crate::random::{unit, ChaCha8Rng};
use crate::scalar::Scalar;

/// Synthesizes minority samples until the classes balance.
///
/// Each synthetic row is `x + u * (nn - x)` for a random minority row `x`,
/// one of its `k_neighbors` nearest minority neighbors `nn` (Euclidean in
/// the space the caller provides, conventionally standardized) and uniform
/// `u` in [0, 1]. Originals are retained; `k_neighbors` is clamped to
/// `minority - 1` when necessary.
pub fn smote<S: Scalar>(
    x: &Matrix<S>,
    y: &[bool],
    k_neighbors: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Matrix<S>, Vec<bool>), LearnError> {
    let minority_label = minority_class(y)?;
    let minority: Vec<usize> = (0..y.len()).filter(|&i| y[i] == minority_label).collect();
    let majority_count = y.len() - minority.len();
    if minority.len() < 2 {
        return Err(LearnError::MinorityTooSmall(minority.len()));
    }
    let needed = majority_count - minority.len();
    let k = k_neighbors.clamp(1, minority.len() - 1);

    // Nearest minority neighbors per minority row, ties by lower index.
    let neighbors: Vec<Vec<usize>> = minority
        .iter()
        .map(|&i| {
            let mut dists: Vec<(S, usize)> = minority
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| (squared_distance(x.row(i), x.row(j)), j))
                .collect();
            dists.sort_by(|a, b| {
                a.0.partial_cmp(&b.0)
                    .expect("finite distances")
                    .then(a.1.cmp(&b.1))
            });
            dists.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect();

    let mut rows: Vec<Vec<S>> = x.iter_rows().map(<[S]>::to_vec).collect();
    let mut labels = y.to_vec();
    for _ in 0..needed {
        let pick = rng.gen_range(0..minority.len());
        let base = minority[pick];
        let nn = neighbors[pick][rng.gen_range(0..k)];
        let u: S = unit(rng);
        let synthetic: Vec<S> = x
            .row(base)
            .iter()
            .zip(x.row(nn))
            .map(|(&a, &b)| a + u * (b - a))
            .collect();
        rows.push(synthetic);
        labels.push(minority_label);
    }
    Ok((Matrix::from_rows(&rows), labels))
}

/// Keeps all minority samples and uniformly subsamples the majority class
/// (without replacement) down to the minority count.
pub fn random_undersample<S: Scalar>(
    x: &Matrix<S>,
    y: &[bool],
    rng: &mut ChaCha8Rng,
) -> Result<(Matrix<S>, Vec<bool>), LearnError> {
    let minority_label = minority_class(y)?;
    let minority: Vec<usize> = (0..y.len()).filter(|&i| y[i] == minority_label).collect();
    let mut majority: Vec<usize> = (0..y.len()).filter(|&i| y[i] != minority_label).collect();
    if majority.len() == minority.len() {
        return Ok((x.clone(), y.to_vec()));
    }
    majority.shuffle(rng);
    majority.truncate(minority.len());
    majority.sort_unstable();
    let mut keep = minority;
    keep.extend(majority);
    keep.sort_unstable();
    let labels = keep.iter().map(|&i| y[i]).collect();
    Ok((x.select_rows(&keep), labels))
}

/// Label of the smaller class; positive wins ties so balanced inputs pass
/// through unchanged.
fn minority_class(y: &[bool]) -> Result<bool, LearnError> {
    let pos = y.iter().filter(|&&l| l).count();
    let neg = y.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(LearnError::EmptyClass);
    }
    Ok(pos <= neg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::derive_rng;

    fn counts(y: &[bool]) -> (usize, usize) {
        let pos = y.iter().filter(|&&l| l).count();
        (pos, y.len() - pos)
    }

    #[test]
    fn smote_balances_classes_exactly() {
        let mut rows = vec![vec![0.0, 0.0]; 90];
        rows.extend(vec![vec![5.0, 5.0]; 10]);
        let mut y = vec![false; 90];
        y.extend(vec![true; 10]);
        // Perturb so neighbors are distinct.
        for (i, r) in rows.iter_mut().enumerate() {
            r[0] += i as f64 * 1e-3;
        }
        let x = Matrix::from_rows(&rows);
        let mut rng = derive_rng(5, 0);
        let (_, y2) = smote(&x, &y, 5, &mut rng).unwrap();
        assert_eq!(counts(&y2), (90, 90));
    }

    #[test]
    fn smote_synthetic_lies_on_the_segment() {
        let x: Matrix<f64> = Matrix::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![10.0, 0.0],
            vec![11.0, 0.0],
            vec![12.0, 0.0],
        ]);
        let y = vec![true, true, false, false, false];
        let mut rng = derive_rng(8, 0);
        let (x2, y2) = smote(&x, &y, 1, &mut rng).unwrap();
        assert_eq!(counts(&y2), (3, 3));
        // The one synthetic interpolates (0,0)..(1,1): both coordinates equal
        // some t in [0, 1].
        let s = x2.row(5);
        assert!((s[0] - s[1]).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&s[0]));
    }

    #[test]
    fn smote_is_seed_deterministic() {
        let mut rows = vec![vec![0.0]; 8];
        rows.extend(vec![vec![1.0], vec![1.1], vec![1.2]]);
        for (i, r) in rows.iter_mut().enumerate() {
            r[0] += i as f64 * 0.01;
        }
        let x = Matrix::from_rows(&rows);
        let mut y = vec![false; 8];
        y.extend(vec![true; 3]);
        let (a, _) = smote(&x, &y, 2, &mut derive_rng(3, 1)).unwrap();
        let (b, _) = smote(&x, &y, 2, &mut derive_rng(3, 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn smote_rejects_tiny_minority() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]);
        let y = vec![true, false, false];
        assert!(matches!(
            smote(&x, &y, 5, &mut derive_rng(0, 0)),
            Err(LearnError::MinorityTooSmall(1))
        ));
    }

    #[test]
    fn undersample_keeps_minority_and_subsets_majority() {
        let rows: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64]).collect();
        let x = Matrix::from_rows(&rows);
        let mut y = vec![false; 90];
        y.extend(vec![true; 10]);
        let (x2, y2) = random_undersample(&x, &y, &mut derive_rng(2, 0)).unwrap();
        assert_eq!(counts(&y2), (10, 10));
        // Kept minority rows are exactly the originals 90..99.
        let kept: Vec<f64> = (0..x2.rows())
            .filter(|&i| y2[i])
            .map(|i| x2.get(i, 0))
            .collect();
        assert_eq!(kept, (90..100).map(f64::from).collect::<Vec<_>>());
        // Majority survivors come from the original majority value set.
        for i in 0..x2.rows() {
            if !y2[i] {
                assert!(x2.get(i, 0) < 90.0);
            }
        }
    }

    #[test]
    fn balanced_input_passes_through() {
        let x = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]]);
        let y = vec![true, false, true, false];
        let (x2, y2) = random_undersample(&x, &y, &mut derive_rng(2, 0)).unwrap();
        assert_eq!(x2, x);
        assert_eq!(y2, y);
    }
}
