//! Shannon quantities of a finite joint distribution over secrets and views.

use std::collections::BTreeMap;

/// Probabilities below this are treated as impossible when counting support.
pub const SUPPORT_EPSILON: f64 = 1e-12;

pub fn entropy(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    probabilities
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Joint distribution `P(S, V)` of a secret `S` and what an observer sees, `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint<S: Ord, V: Ord> {
    by_view: BTreeMap<V, BTreeMap<S, f64>>,
}

impl<S: Ord + Clone, V: Ord + Clone> Default for Joint<S, V> {
    fn default() -> Self {
        Self {
            by_view: BTreeMap::new(),
        }
    }
}

impl<S: Ord + Clone, V: Ord + Clone> Joint<S, V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, probability: f64, secret: S, view: V) {
        *self.by_view.entry(view).or_default().entry(secret).or_default() += probability;
    }

    pub fn total(&self) -> f64 {
        self.by_view.values().flat_map(|m| m.values()).sum()
    }

    pub fn views(&self) -> impl Iterator<Item = &V> {
        self.by_view.keys()
    }

    pub fn secret_marginal(&self) -> BTreeMap<S, f64> {
        let mut out = BTreeMap::new();
        for m in self.by_view.values() {
            for (s, p) in m {
                *out.entry(s.clone()).or_insert(0.0) += p;
            }
        }
        out
    }

    /// `P(S | V = view)`, or `None` if the view never occurs.
    pub fn posterior(&self, view: &V) -> Option<BTreeMap<S, f64>> {
        let m = self.by_view.get(view)?;
        let pv: f64 = m.values().sum();
        if pv <= 0.0 {
            return None;
        }
        Some(m.iter().map(|(s, p)| (s.clone(), p / pv)).collect())
    }

    pub fn secret_entropy(&self) -> f64 {
        entropy(self.secret_marginal().into_values())
    }

    /// `H(S | V)`.
    pub fn conditional_entropy(&self) -> f64 {
        self.by_view
            .values()
            .map(|m| {
                let pv: f64 = m.values().sum();
                if pv <= 0.0 {
                    0.0
                } else {
                    pv * entropy(m.values().map(|p| p / pv))
                }
            })
            .sum()
    }

    /// `I(S; V) = H(S) − H(S | V)`.
    pub fn mutual_information(&self) -> f64 {
        (self.secret_entropy() - self.conditional_entropy()).max(0.0)
    }

    /// Smallest number of secrets still possible after any single view.
    pub fn min_support(&self) -> usize {
        self.by_view
            .keys()
            .filter_map(|v| self.posterior(v))
            .map(|post| post.values().filter(|&&p| p > SUPPORT_EPSILON).count())
            .min()
            .unwrap_or(0)
    }

    /// Smallest posterior entropy over views.
    pub fn min_view_entropy(&self) -> f64 {
        self.by_view
            .keys()
            .filter_map(|v| self.posterior(v))
            .map(|post| entropy(post.into_values()))
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_of_uniform() {
        assert!((entropy([0.25; 4]) - 2.0).abs() < 1e-15);
        assert_eq!(entropy([1.0, 0.0]), 0.0);
    }

    #[test]
    fn independent_view_carries_no_information() {
        let mut j = Joint::new();
        for s in 0..4 {
            for v in 0..3 {
                j.add(1.0 / 12.0, s, v);
            }
        }
        assert!(j.mutual_information().abs() < 1e-12);
        assert!((j.conditional_entropy() - 2.0).abs() < 1e-12);
        assert_eq!(j.min_support(), 4);
    }

    #[test]
    fn revealing_view_carries_everything() {
        let mut j = Joint::new();
        for s in 0..4 {
            j.add(0.25, s, s);
        }
        assert!((j.mutual_information() - 2.0).abs() < 1e-12);
        assert_eq!(j.min_support(), 1);
        assert_eq!(j.posterior(&2).unwrap().get(&2), Some(&1.0));
        assert!(j.posterior(&9).is_none());
    }
}
