use crate::Error;

/// Finite set of distinct labels kept in canonical (lexicographic) order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteSetObj {
    labels: Vec<String>,
}

impl FiniteSetObj {
    pub fn new(mut labels: Vec<String>) -> Result<Self, Error> {
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicateLabel);
        }
        Ok(FiniteSetObj { labels })
    }

    pub fn from_strs(labels: &[&str]) -> Result<Self, Error> {
        Self::new(labels.iter().map(|s| s.to_string()).collect())
    }

    pub fn empty() -> Self {
        FiniteSetObj { labels: Vec::new() }
    }

    /// Canonical set `{x1, .., xn}`.
    pub fn numbered(n: usize) -> Self {
        FiniteSetObj {
            labels: (1..=n).map(|i| format!("x{}", i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn contains(&self, l: &str) -> bool {
        self.labels.binary_search_by(|x| x.as_str().cmp(l)).is_ok()
    }

    pub fn position(&self, l: &str) -> Option<usize> {
        self.labels.binary_search_by(|x| x.as_str().cmp(l)).ok()
    }

    /// `X u_x Y = (X \ {x}) u Y`; clashing labels from `Y` are renamed by
    /// appending `#k` with the smallest free counter `k`.
    pub fn graft(&self, x: &str, y: &FiniteSetObj) -> Result<FiniteSetObj, Error> {
        if !self.contains(x) {
            return Err(Error::MissingLabel(x.to_string()));
        }
        let mut out: Vec<String> = self
            .labels
            .iter()
            .filter(|l| l.as_str() != x)
            .cloned()
            .collect();
        for l in &y.labels {
            let mut candidate = l.clone();
            let mut k = 1;
            while out.contains(&candidate) {
                candidate = format!("{}#{}", l, k);
                k += 1;
            }
            out.push(candidate);
        }
        FiniteSetObj::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graft_basic() {
        let x = FiniteSetObj::from_strs(&["a", "b"]).unwrap();
        let y = FiniteSetObj::from_strs(&["c", "d"]).unwrap();
        let z = x.graft("b", &y).unwrap();
        assert_eq!(z, FiniteSetObj::from_strs(&["a", "c", "d"]).unwrap());
    }

    #[test]
    fn graft_with_empty_removes_label() {
        let x = FiniteSetObj::from_strs(&["a", "b"]).unwrap();
        let z = x.graft("a", &FiniteSetObj::empty()).unwrap();
        assert_eq!(z, FiniteSetObj::from_strs(&["b"]).unwrap());
    }

    #[test]
    fn graft_renames_on_clash() {
        let x = FiniteSetObj::from_strs(&["a", "b"]).unwrap();
        let y = FiniteSetObj::from_strs(&["a"]).unwrap();
        let z = x.graft("b", &y).unwrap();
        assert_eq!(z, FiniteSetObj::from_strs(&["a", "a#1"]).unwrap());
    }

    #[test]
    fn graft_missing_label_errors() {
        let x = FiniteSetObj::from_strs(&["a"]).unwrap();
        assert!(matches!(
            x.graft("z", &FiniteSetObj::empty()),
            Err(Error::MissingLabel(_))
        ));
    }
}
