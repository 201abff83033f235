use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::{ChainComplex, ChainMap};
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use setf_sym::{Perm, SymmetricComplex};

use crate::builtins::all_ones_augmentation;
use crate::operad::composition_table;
use crate::{Error, OperadElement, TruncatedOperad};

/// A free generator: one planar corolla of the given arity in degree 0,
/// spanning a free orbit under the symmetric group.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GeneratorSymbol {
    pub name: String,
    pub arity: usize,
}

impl GeneratorSymbol {
    pub fn new(name: &str, arity: usize) -> Self {
        GeneratorSymbol {
            name: name.to_string(),
            arity,
        }
    }
}

/// Basis tree: children are ordered, leaves carry a bijective labeling of
/// the input set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OperadTree {
    Leaf(usize),
    Node {
        symbol: usize,
        children: Vec<OperadTree>,
    },
}

impl OperadTree {
    pub fn arity(&self) -> usize {
        match self {
            OperadTree::Leaf(_) => 1,
            OperadTree::Node { children, .. } => children.iter().map(|c| c.arity()).sum(),
        }
    }

    /// Leaf labels in planar left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        match self {
            OperadTree::Leaf(l) => vec![*l],
            OperadTree::Node { children, .. } => {
                children.iter().flat_map(|c| c.leaves()).collect()
            }
        }
    }

    fn relabel(&self, f: &dyn Fn(usize) -> usize) -> OperadTree {
        match self {
            OperadTree::Leaf(l) => OperadTree::Leaf(f(*l)),
            OperadTree::Node { symbol, children } => OperadTree::Node {
                symbol: *symbol,
                children: children.iter().map(|c| c.relabel(f)).collect(),
            },
        }
    }

    fn render(&self, symbols: &[GeneratorSymbol]) -> String {
        match self {
            OperadTree::Leaf(l) => l.to_string(),
            OperadTree::Node { symbol, children } => {
                let inner: Vec<String> = children.iter().map(|c| c.render(symbols)).collect();
                format!("{}({})", symbols[*symbol].name, inner.join(","))
            }
        }
    }
}

/// Replace the leaf labeled `x` of `a` by `b`, shifting labels so the
/// result is again bijectively labeled.
pub fn graft(a: &OperadTree, x: usize, b: &OperadTree) -> OperadTree {
    let nb = b.arity();
    match a {
        OperadTree::Leaf(l) if *l == x => b.relabel(&|j| j + x),
        OperadTree::Leaf(l) => OperadTree::Leaf(if *l < x { *l } else { *l + nb - 1 }),
        OperadTree::Node { symbol, children } => OperadTree::Node {
            symbol: *symbol,
            children: children.iter().map(|c| graft(c, x, b)).collect(),
        },
    }
}

fn ordered_set_partitions(labels: &[usize], k: usize) -> Vec<Vec<Vec<usize>>> {
    let n = labels.len();
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    loop {
        let mut blocks = vec![Vec::new(); k];
        for (i, &a) in assign.iter().enumerate() {
            blocks[a].push(labels[i]);
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            out.push(blocks);
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

fn trees_on(symbols: &[GeneratorSymbol], labels: &[usize]) -> Vec<OperadTree> {
    if labels.len() == 1 {
        return vec![OperadTree::Leaf(labels[0])];
    }
    let mut out = Vec::new();
    for (si, s) in symbols.iter().enumerate() {
        if s.arity < 2 || s.arity > labels.len() {
            continue;
        }
        for blocks in ordered_set_partitions(labels, s.arity) {
            let lists: Vec<Vec<OperadTree>> =
                blocks.iter().map(|b| trees_on(symbols, b)).collect();
            let mut combos: Vec<Vec<OperadTree>> = vec![Vec::new()];
            for list in &lists {
                let mut next = Vec::new();
                for c in &combos {
                    for t in list {
                        let mut c2 = c.clone();
                        c2.push(t.clone());
                        next.push(c2);
                    }
                }
                combos = next;
            }
            for children in combos {
                out.push(OperadTree::Node {
                    symbol: si,
                    children,
                });
            }
        }
    }
    out.sort();
    out
}

/// The free operad on the given symbols, truncated at `max_arity`: basis
/// trees with ordered children and bijective leaf labels, grafting as
/// composition, leaf relabeling as the action.
pub struct FreeOperad {
    pub operad: TruncatedOperad,
    pub symbols: Vec<GeneratorSymbol>,
    pub trees: BTreeMap<usize, Vec<OperadTree>>,
}

impl FreeOperad {
    pub fn tree_index(&self, t: &OperadTree) -> Option<usize> {
        self.trees
            .get(&t.arity())
            .and_then(|ts| ts.iter().position(|u| u == t))
    }

    pub fn element_of(&self, t: &OperadTree) -> Result<OperadElement, Error> {
        let n = t.arity();
        let idx = self
            .tree_index(t)
            .ok_or_else(|| Error::Shape("tree outside the truncation".into()))?;
        Ok(self.operad.basis_element(n, 0, idx))
    }
}

pub fn free_operad(symbols: &[GeneratorSymbol], max_arity: usize) -> Result<FreeOperad, Error> {
    if max_arity == 0 {
        return Err(Error::Shape("arity bound must be at least 1".into()));
    }
    for s in symbols {
        if s.arity < 2 {
            return Err(Error::Shape(format!(
                "generator {} has arity {}, generators must branch",
                s.name, s.arity
            )));
        }
        if s.arity > max_arity {
            return Err(Error::TruncationOverflow {
                needed: s.arity,
                max: max_arity,
            });
        }
    }

    let mut trees: BTreeMap<usize, Vec<OperadTree>> = BTreeMap::new();
    let mut complexes: BTreeMap<usize, Arc<ChainComplex>> = BTreeMap::new();
    for n in 1..=max_arity {
        let labels: Vec<usize> = (0..n).collect();
        let ts = trees_on(symbols, &labels);
        let names: Vec<String> = ts.iter().map(|t| t.render(symbols)).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        complexes.insert(n, ChainComplex::build(&[(0, &refs)], &[])?.shared());
        trees.insert(n, ts);
    }
    let index = |n: usize, t: &OperadTree| -> Result<usize, Error> {
        trees[&n]
            .iter()
            .position(|u| u == t)
            .ok_or_else(|| Error::Shape("grafted tree missing from basis".into()))
    };

    let mut components = BTreeMap::new();
    for n in 1..=max_arity {
        let c = complexes[&n].clone();
        let ts = &trees[&n];
        let mut gens = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let s = Perm::adjacent(n, i);
            let mut m = IntegerMatrix::zeros(ts.len(), ts.len());
            for (col, t) in ts.iter().enumerate() {
                let moved = t.relabel(&|l| s.apply(l));
                m.set(index(n, &moved)?, col, BigInt::one());
            }
            let mut g = ChainMap::zero(c.clone(), c.clone(), 0);
            g.set_block(0, m)?;
            gens.push(g);
        }
        components.insert(n, SymmetricComplex::new(c, n, gens)?);
    }

    let mut compositions = BTreeMap::new();
    for m in 1..=max_arity {
        for n in 1..=max_arity {
            if m + n - 1 > max_arity {
                continue;
            }
            let out = complexes[&(m + n - 1)].clone();
            for x in 0..m {
                let comp = composition_table(&complexes[&m], &complexes[&n], &out, |_, ia, _, ib| {
                    let g = graft(&trees[&m][ia], x, &trees[&n][ib]);
                    let mut v = vec![BigInt::zero(); out.rank(0)];
                    v[index(m + n - 1, &g)?] = BigInt::one();
                    Ok(v)
                })?;
                compositions.insert((m, x, n), comp);
            }
        }
    }

    let one = ChainComplex::unit().shared();
    let augmentations = (1..=max_arity)
        .map(|n| (n, all_ones_augmentation(&complexes[&n], &one)))
        .collect();
    let operad = TruncatedOperad::new(
        max_arity,
        true,
        components,
        vec![BigInt::one()],
        compositions,
        augmentations,
    )?;
    Ok(FreeOperad {
        operad,
        symbols: symbols.to_vec(),
        trees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check_operad_axioms;

    fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 1 {
            return vec![vec![n]];
        }
        let mut out = Vec::new();
        for first in 1..=n.saturating_sub(k - 1) {
            for rest in compositions(n - first, k - 1) {
                let mut v = vec![first];
                v.extend(rest);
                out.push(v);
            }
        }
        out
    }

    // label-set tree count without building trees
    fn count_oracle(symbols: &[GeneratorSymbol], n: usize) -> usize {
        if n == 1 {
            return 1;
        }
        let mut total = 0;
        for s in symbols {
            let k = s.arity;
            if k < 2 || k > n {
                continue;
            }
            for parts in compositions(n, k) {
                let mut ways = factorial(n);
                for &p in &parts {
                    ways /= factorial(p);
                }
                for &p in &parts {
                    ways *= count_oracle(symbols, p);
                }
                total += ways;
            }
        }
        total
    }

    fn factorial(n: usize) -> usize {
        (1..=n).product()
    }

    #[test]
    fn empty_generators_leave_only_the_unit() {
        let f = free_operad(&[], 3).unwrap();
        assert_eq!(f.operad.component(1).unwrap().complex.total_rank(), 1);
        for n in 2..=3 {
            assert_eq!(f.operad.component(n).unwrap().complex.total_rank(), 0);
        }
        let report = check_operad_axioms(&f.operad).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn one_binary_symbol_counts() {
        let f = free_operad(&[GeneratorSymbol::new("g", 2)], 4).unwrap();
        let expect = [1usize, 2, 12, 120];
        for n in 1..=4usize {
            assert_eq!(
                f.operad.component(n).unwrap().complex.rank(0),
                expect[n - 1],
                "arity {}",
                n
            );
            assert_eq!(f.trees[&n].len(), count_oracle(&f.symbols, n), "arity {}", n);
        }
    }

    #[test]
    fn one_binary_symbol_passes_axioms() {
        let f = free_operad(&[GeneratorSymbol::new("g", 2)], 4).unwrap();
        let report = check_operad_axioms(&f.operad).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn mixed_arities_pass_axioms() {
        let f = free_operad(
            &[GeneratorSymbol::new("g", 2), GeneratorSymbol::new("h", 3)],
            4,
        )
        .unwrap();
        assert_eq!(f.trees[&3].len(), count_oracle(&f.symbols, 3));
        assert_eq!(f.trees[&4].len(), count_oracle(&f.symbols, 4));
        let report = check_operad_axioms(&f.operad).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn composition_grafts_trees() {
        let f = free_operad(&[GeneratorSymbol::new("g", 2)], 3).unwrap();
        let g = OperadTree::Node {
            symbol: 0,
            children: vec![OperadTree::Leaf(0), OperadTree::Leaf(1)],
        };
        let a = f.element_of(&g).unwrap();
        let c = f.operad.compose(&a, 1, &a).unwrap();
        let expect = f
            .element_of(&OperadTree::Node {
                symbol: 0,
                children: vec![
                    OperadTree::Leaf(0),
                    OperadTree::Node {
                        symbol: 0,
                        children: vec![OperadTree::Leaf(1), OperadTree::Leaf(2)],
                    },
                ],
            })
            .unwrap();
        assert_eq!(c, expect);
    }

    #[test]
    fn low_arity_generators_are_rejected() {
        assert!(free_operad(&[GeneratorSymbol::new("u", 1)], 3).is_err());
        assert!(matches!(
            free_operad(&[GeneratorSymbol::new("g", 5)], 3),
            Err(Error::TruncationOverflow { needed: 5, max: 3 })
        ));
    }
}
