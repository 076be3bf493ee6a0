use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// A hard partition of `n` objects into `k` clusters together with one
/// representative vector per cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    assignment: Vec<usize>,
    // k × m, row-major
    representatives: Vec<f64>,
    k: usize,
    m: usize,
}

/// JSON interchange layout: `{"k": .., "assignment": [..], "representatives": [[..], ..]}`.
#[derive(Serialize, Deserialize)]
struct ClusteringFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    assignment: Vec<usize>,
    representatives: Vec<Vec<f64>>,
}

impl Clustering {
    pub fn new(assignment: Vec<usize>, representatives: Vec<Vec<f64>>) -> Result<Self> {
        let k = representatives.len();
        if k == 0 {
            return Err(Error::invalid("clustering needs at least one representative"));
        }
        let m = representatives[0].len();
        if m == 0 || representatives.iter().any(|r| r.len() != m) {
            return Err(Error::invalid("representatives must share one non-zero dimension"));
        }
        if representatives.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("representatives must be finite"));
        }
        if let Some(&bad) = assignment.iter().find(|&&c| c >= k) {
            return Err(Error::invalid(format!("cluster index {bad} out of range for k={k}")));
        }
        Ok(Self {
            assignment,
            representatives: representatives.concat(),
            k,
            m,
        })
    }

    pub(crate) fn from_parts(assignment: Vec<usize>, representatives: Vec<f64>, k: usize, m: usize) -> Self {
        debug_assert_eq!(representatives.len(), k * m);
        debug_assert!(assignment.iter().all(|&c| c < k));
        Self {
            assignment,
            representatives,
            k,
            m,
        }
    }

    /// Assigns each object and sets every representative to its cluster centroid.
    pub fn with_centroids(d: &Dataset, assignment: Vec<usize>, k: usize) -> Result<Self> {
        if assignment.len() != d.n() {
            return Err(Error::invalid(format!(
                "{} assignments for {} objects",
                assignment.len(),
                d.n()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&c| c >= k) {
            return Err(Error::invalid(format!("cluster index {bad} out of range for k={k}")));
        }
        let reps = centroids(d, &assignment, k);
        if reps.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("cannot take the centroid of an empty cluster"));
        }
        Ok(Self::from_parts(assignment, reps, k, d.m()))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn cluster_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn representative(&self, c: usize) -> &[f64] {
        &self.representatives[c * self.m..(c + 1) * self.m]
    }

    pub(crate) fn representative_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.representatives[c * self.m..(c + 1) * self.m]
    }

    pub(crate) fn assignment_mut(&mut self) -> &mut [usize] {
        &mut self.assignment
    }

    pub fn representatives(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.representatives.chunks_exact(self.m)
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Indices of the objects assigned to cluster `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &a)| a == c)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_empty_cluster(&self) -> bool {
        self.cluster_sizes().contains(&0)
    }

    /// Checks that this clustering covers exactly the objects of `d` in the
    /// same attribute space.
    pub fn check_consistent(&self, d: &Dataset) -> Result<()> {
        if self.n() != d.n() {
            return Err(Error::invalid(format!(
                "clustering has {} assignments but dataset has {} objects",
                self.n(),
                d.n()
            )));
        }
        if self.m != d.m() {
            return Err(Error::invalid(format!(
                "representatives have {} attributes but dataset has {}",
                self.m,
                d.m()
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = ClusteringFile {
            k: Some(self.k),
            assignment: self.assignment.clone(),
            representatives: self.representatives().map(<[f64]>::to_vec).collect(),
        };
        serde_json::to_string_pretty(&file).expect("clustering serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ClusteringFile = serde_json::from_str(s)?;
        if let Some(k) = file.k {
            if k != file.representatives.len() {
                return Err(Error::invalid(format!(
                    "k={k} but {} representatives given",
                    file.representatives.len()
                )));
            }
        }
        Self::new(file.assignment, file.representatives)
    }
}

/// Per-cluster arithmetic mean; empty clusters get NaN rows.
pub(crate) fn centroids(d: &Dataset, assignment: &[usize], k: usize) -> Vec<f64> {
    let m = d.m();
    let mut sums = vec![0.0; k * m];
    let mut counts = vec![0.0f64; k];
    for (row, &c) in d.rows().zip(assignment) {
        counts[c] += 1.0;
        for (s, v) in sums[c * m..(c + 1) * m].iter_mut().zip(row) {
            *s += v;
        }
    }
    for c in 0..k {
        for s in &mut sums[c * m..(c + 1) * m] {
            *s /= counts[c];
        }
    }
    sums
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let c = Clustering::new(vec![0, 1, 1], vec![vec![0.1, 0.2], vec![1.0 / 3.0, 2.5]]).unwrap();
        let back = Clustering::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);

        // `k` is optional on input.
        let c = Clustering::from_json(r#"{"assignment":[0,0],"representatives":[[1.0]]}"#).unwrap();
        assert_eq!(c.k(), 1);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Clustering::new(vec![0, 2], vec![vec![0.0], vec![1.0]]).is_err());
        assert!(Clustering::new(vec![0], vec![]).is_err());
        assert!(Clustering::new(vec![0], vec![vec![0.0], vec![1.0, 2.0]]).is_err());
        assert!(Clustering::new(vec![0], vec![vec![f64::NAN]]).is_err());
        assert!(Clustering::from_json(r#"{"k":3,"assignment":[0],"representatives":[[1.0]]}"#).is_err());
    }

    #[test]
    fn centroids_and_members() {
        let d = Dataset::from_rows(&[[0.0, 0.0], [2.0, 0.0], [10.0, 10.0]]).unwrap();
        let c = Clustering::with_centroids(&d, vec![0, 0, 1], 2).unwrap();
        assert_eq!(c.representative(0), &[1.0, 0.0]);
        assert_eq!(c.representative(1), &[10.0, 10.0]);
        assert_eq!(c.members(0), vec![0, 1]);
        assert_eq!(c.cluster_sizes(), vec![2, 1]);
        assert!(Clustering::with_centroids(&d, vec![0, 0, 0], 2).is_err());
        assert!(Clustering::with_centroids(&d, vec![0, 0], 2).is_err());
    }
}
