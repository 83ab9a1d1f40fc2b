//! Prefix trie from ordered host-vertex tuples to exact integer counts.
//!
//! Every node carries the sum of all counts stored below it, so prefix
//! queries are a walk down the trie. Depth-`r` products and differences
//! traverse two tries in lockstep and truncate at depth `r`.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::num::Count;

/// Children are kept sorted by key; most trie nodes have very few.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Node<T> {
    total: T,
    children: Vec<(u32, Node<T>)>,
}

impl<T: Count> Node<T> {
    fn empty() -> Self {
        Node {
            total: T::zero(),
            children: Vec::new(),
        }
    }

    fn leaf(total: T) -> Self {
        Node {
            total,
            children: Vec::new(),
        }
    }

    fn child(&self, k: u32) -> Option<&Node<T>> {
        self.children
            .binary_search_by_key(&k, |c| c.0)
            .ok()
            .map(|i| &self.children[i].1)
    }

    fn child_entry(&mut self, k: u32) -> usize {
        match self.children.binary_search_by_key(&k, |c| c.0) {
            Ok(i) => i,
            Err(i) => {
                self.children.insert(i, (k, Node::empty()));
                i
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTrie<T> {
    depth: usize,
    root: Node<T>,
}

impl<T: Count> CountTrie<T> {
    pub fn new(depth: usize) -> Self {
        CountTrie {
            depth,
            root: Node::empty(),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Sum of all stored counts.
    pub fn total(&self) -> &T {
        &self.root.total
    }

    pub fn is_empty(&self) -> bool {
        if self.depth == 0 {
            self.root.total.is_zero()
        } else {
            self.root.children.is_empty()
        }
    }

    fn check_key(&self, key: &[u32], exact: bool) -> Result<()> {
        if (exact && key.len() != self.depth) || key.len() > self.depth {
            return Err(Error::Input(format!(
                "key of length {} for trie of depth {}",
                key.len(),
                self.depth
            )));
        }
        if key.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!("key {key:?} is not strictly increasing")));
        }
        Ok(())
    }

    pub fn increment(&mut self, key: &[u32], delta: T) -> Result<()> {
        self.check_key(key, true)?;
        self.add_unchecked(key, delta)
    }

    /// Adds without validating key order; the caller guarantees the key has
    /// length `depth` and is increasing.
    pub(crate) fn add_unchecked(&mut self, key: &[u32], delta: T) -> Result<()> {
        if delta.is_zero() {
            return Ok(());
        }
        fn go<T: Count>(node: &mut Node<T>, key: &[u32], delta: &T) -> Result<()> {
            node.total = node
                .total
                .checked_add(delta)
                .ok_or(Error::Overflow("trie increment"))?;
            if let Some((&first, rest)) = key.split_first() {
                let i = node.child_entry(first);
                let child = &mut node.children[i].1;
                go(child, rest, delta)?;
                let dead = if rest.is_empty() {
                    child.total.is_zero()
                } else {
                    child.children.is_empty()
                };
                if dead {
                    node.children.remove(i);
                }
            }
            Ok(())
        }
        go(&mut self.root, key, &delta)
    }

    /// Builds a trie from keys in strictly increasing lexicographic order.
    pub fn from_sorted<'a>(depth: usize, entries: impl IntoIterator<Item = (&'a [u32], T)>) -> Result<Self> {
        let mut t: Self = CountTrie::new(depth);
        let mut prev: Option<Vec<u32>> = None;
        for (key, c) in entries {
            t.check_key(key, true)?;
            if let Some(p) = &prev {
                if p.as_slice() >= key {
                    return Err(Error::Input("keys are not sorted".into()));
                }
            }
            if c.is_zero() {
                continue;
            }
            // sorted input: every insertion happens along the rightmost path
            let mut node = &mut t.root;
            for &k in key {
                node.total = node.total.checked_add(&c).ok_or(Error::Overflow("trie build"))?;
                if node.children.last().map_or(true, |l| l.0 != k) {
                    node.children.push((k, Node::empty()));
                }
                node = &mut node.children.last_mut().unwrap().1;
            }
            node.total = c;
            prev = Some(key.to_vec());
        }
        Ok(t)
    }

    /// Sum of counts over all stored keys extending `key`.
    pub fn prefix_query(&self, key: &[u32]) -> Result<T> {
        self.check_key(key, false)?;
        let mut node = &self.root;
        for k in key {
            match node.child(*k) {
                Some(c) => node = c,
                None => return Ok(T::zero()),
            }
        }
        Ok(node.total.clone())
    }

    /// Number of stored keys.
    pub fn key_count(&self) -> usize {
        fn go<T>(node: &Node<T>, depth: usize) -> usize {
            if depth == 0 {
                1
            } else {
                node.children.iter().map(|(_, c)| go(c, depth - 1)).sum()
            }
        }
        if self.is_empty() {
            0
        } else {
            go(&self.root, self.depth)
        }
    }

    /// All stored keys with their counts, in lexicographic order.
    pub fn entries(&self) -> Vec<(Vec<u32>, T)> {
        fn go<T: Clone>(node: &Node<T>, depth: usize, key: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, T)>) {
            if depth == 0 {
                out.push((key.clone(), node.total.clone()));
                return;
            }
            for (k, c) in &node.children {
                key.push(*k);
                go(c, depth - 1, key, out);
                key.pop();
            }
        }
        let mut out = Vec::new();
        if !self.is_empty() {
            go(&self.root, self.depth, &mut Vec::new(), &mut out);
        }
        out
    }

    /// The trie of depth `r` holding every length-`r` prefix total.
    pub fn truncated(&self, r: usize) -> Result<Self> {
        if r > self.depth {
            return Err(Error::Input(format!("cannot truncate depth {} trie to {r}", self.depth)));
        }
        fn go<T: Count>(node: &Node<T>, r: usize) -> Node<T> {
            if r == 0 {
                return Node::leaf(node.total.clone());
            }
            let mut out = Node::empty();
            for (k, c) in &node.children {
                let t = go(c, r - 1);
                if !t.total.is_zero() || !t.children.is_empty() {
                    out.children.push((*k, t));
                }
            }
            out.total = node.total.clone();
            out
        }
        let mut root = go(&self.root, r);
        prune(&mut root, r);
        Ok(CountTrie { depth: r, root })
    }

    /// Multiplies every stored count by `gamma`; each product must be an
    /// integer.
    pub fn scale(&self, gamma: &Ratio<i64>) -> Result<Self> {
        let num = T::from_i64(*gamma.numer()).ok_or(Error::Overflow("scale numerator"))?;
        let den = T::from_i64(*gamma.denom()).ok_or(Error::Overflow("scale denominator"))?;
        fn go<T: Count>(node: &Node<T>, depth: usize, num: &T, den: &T) -> Result<Node<T>> {
            if depth == 0 {
                let prod = node.total.checked_mul(num).ok_or(Error::Overflow("scale"))?;
                let (q, r) = prod.div_rem(den);
                if !r.is_zero() {
                    return Err(Error::Integrality(format!(
                        "count {} times {}/{} is not an integer",
                        node.total, num, den
                    )));
                }
                return Ok(Node::leaf(q));
            }
            let mut out: Node<T> = Node::empty();
            for (k, c) in &node.children {
                let t = go(c, depth - 1, num, den)?;
                out.total = out.total.checked_add(&t.total).ok_or(Error::Overflow("scale"))?;
                out.children.push((*k, t));
            }
            Ok(out)
        }
        let mut root = go(&self.root, self.depth, &num, &den)?;
        prune(&mut root, self.depth);
        Ok(CountTrie { depth: self.depth, root })
    }

    /// `(a -_r b)[y] = a[y] - b[y]` for every length-`r` prefix `y`.
    pub fn sub_at_depth(&self, other: &Self, r: usize) -> Result<Self> {
        self.combine(other, r, Combine::Sub)
    }

    /// `(a ⊙_r b)[y] = a[y] · b[y]` for every length-`r` prefix `y`.
    pub fn mul_at_depth(&self, other: &Self, r: usize) -> Result<Self> {
        self.combine(other, r, Combine::Mul)
    }

    /// Keywise sum of two tries of equal depth.
    pub fn merge_add(&self, other: &Self) -> Result<Self> {
        if self.depth != other.depth {
            return Err(Error::Input(format!(
                "cannot merge tries of depth {} and {}",
                self.depth, other.depth
            )));
        }
        self.combine(other, self.depth, Combine::Add)
    }

    /// In-place keywise sum, consuming `other`.
    pub fn absorb(&mut self, other: Self) -> Result<()> {
        if self.depth != other.depth {
            return Err(Error::Input("depth mismatch in absorb".into()));
        }
        fn go<T: Count>(a: &mut Node<T>, b: Node<T>) -> Result<()> {
            a.total = a.total.checked_add(&b.total).ok_or(Error::Overflow("merge"))?;
            let old = std::mem::take(&mut a.children);
            let mut merged = Vec::with_capacity(old.len() + b.children.len());
            let mut ia = old.into_iter().peekable();
            let mut ib = b.children.into_iter().peekable();
            loop {
                let take_a = match (ia.peek(), ib.peek()) {
                    (None, None) => break,
                    (Some(_), None) => true,
                    (None, Some(_)) => false,
                    (Some(x), Some(y)) => {
                        if x.0 == y.0 {
                            let (k, mut ca) = ia.next().unwrap();
                            let (_, cb) = ib.next().unwrap();
                            go(&mut ca, cb)?;
                            merged.push((k, ca));
                            continue;
                        }
                        x.0 < y.0
                    }
                };
                merged.push(if take_a { ia.next().unwrap() } else { ib.next().unwrap() });
            }
            a.children = merged;
            Ok(())
        }
        go(&mut self.root, other.root)?;
        let d = self.depth;
        prune(&mut self.root, d);
        Ok(())
    }

    fn combine(&self, other: &Self, r: usize, op: Combine) -> Result<Self> {
        if r > self.depth || r > other.depth {
            return Err(Error::Input(format!(
                "depth {r} exceeds trie depths {} and {}",
                self.depth, other.depth
            )));
        }
        let mut root = combine_nodes(Some(&self.root), Some(&other.root), r, op)?.unwrap_or_else(Node::empty);
        prune(&mut root, r);
        Ok(CountTrie { depth: r, root })
    }

    /// One line per key: `v1 v2 … vd count`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (key, c) in self.entries() {
            for k in key {
                s.push_str(&k.to_string());
                s.push(' ');
            }
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    }

    /// Checks that every internal counter equals the sum of its children.
    pub fn is_consistent(&self) -> bool {
        fn go<T: Count>(node: &Node<T>, depth: usize) -> bool {
            if depth == 0 {
                return node.children.is_empty();
            }
            let mut sum = T::zero();
            for (_, c) in &node.children {
                if !go(c, depth - 1) {
                    return false;
                }
                sum = sum + c.total.clone();
            }
            sum == node.total
        }
        go(&self.root, self.depth)
    }
}

#[derive(Clone, Copy)]
enum Combine {
    Add,
    Sub,
    Mul,
}

fn combine_nodes<T: Count>(a: Option<&Node<T>>, b: Option<&Node<T>>, r: usize, op: Combine) -> Result<Option<Node<T>>> {
    let zero = T::zero();
    if r == 0 {
        let x = a.map_or(&zero, |n| &n.total);
        let y = b.map_or(&zero, |n| &n.total);
        let v = match op {
            Combine::Add => x.checked_add(y),
            Combine::Sub => x.checked_sub(y),
            Combine::Mul => x.checked_mul(y),
        }
        .ok_or(Error::Overflow("trie combine"))?;
        return Ok(if v.is_zero() { None } else { Some(Node::leaf(v)) });
    }
    let mut out = Node::empty();
    let push = |k: u32, n: Option<Node<T>>, out: &mut Node<T>| -> Result<()> {
        if let Some(n) = n {
            out.total = out.total.checked_add(&n.total).ok_or(Error::Overflow("trie combine"))?;
            out.children.push((k, n));
        }
        Ok(())
    };
    match op {
        Combine::Mul => {
            let (small, large, swapped) = match (a, b) {
                (Some(x), Some(y)) if x.children.len() <= y.children.len() => (x, y, false),
                (Some(x), Some(y)) => (y, x, true),
                _ => return Ok(None),
            };
            for (k, cs) in &small.children {
                if let Some(cl) = large.child(*k) {
                    let (ca, cb) = if swapped { (cl, cs) } else { (cs, cl) };
                    let n = combine_nodes(Some(ca), Some(cb), r - 1, op)?;
                    push(*k, n, &mut out)?;
                }
            }
        }
        Combine::Add | Combine::Sub => {
            let ac: &[(u32, Node<T>)] = a.map_or(&[], |n| &n.children);
            let bc: &[(u32, Node<T>)] = b.map_or(&[], |n| &n.children);
            let mut ia = ac.iter().peekable();
            let mut ib = bc.iter().peekable();
            loop {
                let next = match (ia.peek(), ib.peek()) {
                    (None, None) => break,
                    (Some((ka, _)), None) => (*ka, true, false),
                    (None, Some((kb, _))) => (*kb, false, true),
                    (Some((ka, _)), Some((kb, _))) => {
                        let (ka, kb) = (*ka, *kb);
                        if ka < kb {
                            (ka, true, false)
                        } else if kb < ka {
                            (kb, false, true)
                        } else {
                            (ka, true, true)
                        }
                    }
                };
                let (k, take_a, take_b) = next;
                let ca = if take_a { ia.next().map(|(_, n)| n) } else { None };
                let cb = if take_b { ib.next().map(|(_, n)| n) } else { None };
                let n = combine_nodes(ca, cb, r - 1, op)?;
                push(k, n, &mut out)?;
            }
        }
    }
    Ok(if out.children.is_empty() { None } else { Some(out) })
}

/// Removes zero leaves and childless internal nodes.
fn prune<T: Count>(node: &mut Node<T>, depth: usize) {
    if depth == 0 {
        return;
    }
    node.children.retain_mut(|(_, c)| {
        prune(c, depth - 1);
        if depth == 1 {
            !c.total.is_zero()
        } else {
            !c.children.is_empty()
        }
    });
}

impl<T: Count> fmt::Display for CountTrie<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Trie = CountTrie<i64>;

    fn trie(depth: usize, items: &[(&[u32], i64)]) -> Trie {
        let mut t = Trie::new(depth);
        for (k, v) in items {
            t.increment(k, *v).unwrap();
        }
        t
    }

    #[test]
    fn increment_and_prefix() {
        let t = trie(3, &[(&[1, 2, 3], 1)]);
        assert_eq!(t.prefix_query(&[1]).unwrap(), 1);
        let t = trie(2, &[(&[1, 2], 2), (&[1, 2], 3)]);
        assert_eq!(t.prefix_query(&[1, 2]).unwrap(), 5);
        let t = trie(2, &[(&[1, 2], 1), (&[1, 3], 1)]);
        assert_eq!(t.prefix_query(&[1]).unwrap(), 2);
        assert_eq!(t.prefix_query(&[]).unwrap(), 2);
        assert_eq!(t.prefix_query(&[4]).unwrap(), 0);
        assert!(t.prefix_query(&[1, 2, 3]).is_err());
    }

    #[test]
    fn bad_keys_are_rejected() {
        let mut t = Trie::new(2);
        assert!(t.increment(&[1], 1).is_err());
        assert!(t.increment(&[2, 1], 1).is_err());
        assert!(t.increment(&[1, 1], 1).is_err());
    }

    #[test]
    fn scale_examples() {
        let t = trie(2, &[(&[1, 2], 3), (&[1, 3], 4)]);
        assert_eq!(t.scale(&Ratio::from_integer(1)).unwrap(), t);
        let d = t.scale(&Ratio::from_integer(2)).unwrap();
        assert_eq!(d.prefix_query(&[1, 2]).unwrap(), 6);
        assert_eq!(d.total(), &14);
        assert!(matches!(t.scale(&Ratio::new(1, 2)), Err(Error::Integrality(_))));
    }

    #[test]
    fn depth_products_and_differences() {
        let a = trie(2, &[(&[1, 2], 3)]);
        let b = trie(2, &[(&[1, 3], 1)]);
        let m = a.mul_at_depth(&b, 1).unwrap();
        assert_eq!(m.depth(), 1);
        assert_eq!(m.prefix_query(&[1]).unwrap(), 3);
        assert!(a.mul_at_depth(&b, 2).unwrap().is_empty());
        let z = a.sub_at_depth(&a, 1).unwrap();
        assert!(z.is_empty());
        let s = a.sub_at_depth(&b, 2).unwrap();
        assert_eq!(s.prefix_query(&[1, 2]).unwrap(), 3);
        assert_eq!(s.prefix_query(&[1, 3]).unwrap(), -1);
        assert!(a.sub_at_depth(&b, 3).is_err());
    }

    #[test]
    fn merge_examples() {
        let a = trie(2, &[(&[1, 2], 3), (&[2, 5], 1)]);
        let e = Trie::new(2);
        assert_eq!(a.merge_add(&e).unwrap(), a);
        let b = trie(2, &[(&[0, 7], 2)]);
        let ab = a.merge_add(&b).unwrap();
        assert_eq!(ab, b.merge_add(&a).unwrap());
        assert_eq!(ab.key_count(), 3);
        assert!(a.merge_add(&Trie::new(1)).is_err());
        let mut c = a.clone();
        c.absorb(b).unwrap();
        assert_eq!(c, ab);
    }

    #[test]
    fn dump_format() {
        let t = trie(2, &[(&[1, 2], 3), (&[0, 4], 1)]);
        assert_eq!(t.dump(), "0 4 1\n1 2 3\n");
    }

    #[test]
    fn depth_zero_holds_a_total() {
        let t = trie(2, &[(&[1, 2], 3), (&[0, 4], 1)]).truncated(0).unwrap();
        assert!(!t.is_empty());
        assert_eq!(t.entries(), vec![(vec![], 4)]);
        assert_eq!(t.key_count(), 1);
        assert_eq!(t.prefix_query(&[]).unwrap(), 4);
        assert!(trie(1, &[(&[1], 2), (&[1], -2)]).truncated(0).unwrap().is_empty());
    }
}
