/// Permutation of `{0, .., n-1}` in one-line notation: `map[i]` is the image
/// of `i`. Composition is function composition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            map: (0..n).collect(),
        }
    }

    pub fn from_one_line(map: Vec<usize>) -> Option<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(Perm { map })
    }

    /// Adjacent transposition swapping `i` and `i + 1`.
    pub fn adjacent(n: usize, i: usize) -> Self {
        assert!(i + 1 < n);
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(i, i + 1);
        Perm { map }
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn one_line(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self o other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n());
        Perm {
            map: (0..self.n()).map(|i| self.map[other.map[i]]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0; self.n()];
        for (i, &v) in self.map.iter().enumerate() {
            map[v] = i;
        }
        Perm { map }
    }

    pub fn sign(&self) -> i64 {
        crate::chain_sign::permutation_sign(&self.map)
    }

    /// Write `self` as a composite of adjacent transpositions
    /// `s_{d[0]} o s_{d[1]} o ...` (apply right to left).
    pub fn adjacent_decomposition(&self) -> Vec<usize> {
        let mut v = self.map.clone();
        let mut swaps = Vec::new();
        // bubble-sort v to the identity; each swap right-multiplies by s_i
        loop {
            let mut done = true;
            for i in 0..v.len().saturating_sub(1) {
                if v[i] > v[i + 1] {
                    v.swap(i, i + 1);
                    swaps.push(i);
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        // self o s_{i1} o ... o s_{ik} = id, so self = s_{ik} o ... o s_{i1}
        swaps.reverse();
        swaps
    }

    /// All permutations of `S_n` in lexicographic one-line order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Perm { map: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    /// Block composition `self o_x other` for `self` in `S_m`, `other` in
    /// `S_n`, slot `x` in `0..m`: slot `x` expands to a block of size `n`
    /// permuted by `other`, and `self` permutes the blocks.
    pub fn block_compose(&self, x: usize, other: &Perm) -> Perm {
        let m = self.n();
        let n = other.n();
        assert!(x < m);
        let out_n = m + n - 1;
        // size of the source block b
        let size = |b: usize| if b == x { n } else { 1 };
        // start of output block j (blocks travel with their sizes)
        let inv = self.inverse();
        let start = |j: usize| -> usize { (0..j).map(|j2| size(inv.apply(j2))).sum() };
        let mut map = vec![0; out_n];
        for i in 0..out_n {
            let (b, off) = if i < x {
                (i, 0)
            } else if i < x + n {
                (x, i - x)
            } else {
                (i - n + 1, 0)
            };
            let off2 = if b == x { other.apply(off) } else { off };
            map[i] = start(self.apply(b)) + off2;
        }
        Perm { map }
    }
}

impl std::fmt::Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}]",
            self.map
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )
    }
}
