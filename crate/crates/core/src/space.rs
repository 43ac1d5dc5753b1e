use std::fmt;
use std::sync::Arc;

/// An ordered tensor product of named spaces. The empty product is the base field.
///
/// Split images may be zero-dimensional, so factor dimensions of 0 are accepted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SpaceSig {
    factors: Arc<[(String, usize)]>,
}

impl SpaceSig {
    pub fn unit() -> SpaceSig {
        SpaceSig::default()
    }

    pub fn atom(name: &str, dim: usize) -> SpaceSig {
        SpaceSig {
            factors: Arc::from(vec![(name.to_string(), dim)]),
        }
    }

    pub fn from_factors(factors: Vec<(String, usize)>) -> SpaceSig {
        SpaceSig {
            factors: Arc::from(factors),
        }
    }

    pub fn factors(&self) -> &[(String, usize)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.1).product()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.1).collect()
    }

    pub fn tensor(&self, other: &SpaceSig) -> SpaceSig {
        if self.is_unit() {
            return other.clone();
        }
        if other.is_unit() {
            return self.clone();
        }
        let mut v = self.factors.to_vec();
        v.extend(other.factors.iter().cloned());
        SpaceSig {
            factors: Arc::from(v),
        }
    }

    pub fn power(&self, n: usize) -> SpaceSig {
        (0..n).fold(SpaceSig::unit(), |acc, _| acc.tensor(self))
    }

    /// Splits a flat index into per-factor indices (first factor most significant).
    pub fn unflatten(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.len()];
        for (k, (_, d)) in self.factors.iter().enumerate().rev() {
            out[k] = idx % d;
            idx /= d;
        }
        out
    }

    pub fn flatten(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(self.factors.iter())
            .fold(0, |acc, (i, (_, d))| acc * d + i)
    }
}

impl fmt::Display for SpaceSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "K");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(n, d)| format!("{n}({d})"))
            .collect();
        write!(f, "{}", parts.join("⊗"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_indexing() {
        let s = SpaceSig::atom("A", 2).tensor(&SpaceSig::atom("B", 3));
        assert_eq!(s.dim(), 6);
        assert_eq!(s.unflatten(4), vec![1, 1]);
        assert_eq!(s.flatten(&[1, 2]), 5);
        assert_eq!(SpaceSig::unit().tensor(&s), s);
        assert_eq!(SpaceSig::unit().dim(), 1);
        assert_eq!(s.to_string(), "A(2)⊗B(3)");
    }
}
