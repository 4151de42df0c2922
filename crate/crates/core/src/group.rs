//! Finite groups stored as full Cayley tables, plus homomorphisms between them.
//!
//! Every group is an indexed element set `0..order` with a multiplication
//! table. Downstream code never looks at anything else, so permutation input
//! is converted to a table eagerly.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, GroupAxiomFailure, Result};

/// Default cap on group orders (and on the order of intermediate product groups).
pub const DEFAULT_ORDER_CAP: usize = 1024;

/// Groups up to this order have associativity checked on every triple.
const EXHAUSTIVE_AXIOM_ORDER: usize = 64;
const SAMPLED_TRIPLES: usize = 10_000;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: Option<String>,
    order: usize,
    mul: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

impl FiniteGroup {
    /// Validates a Cayley table and builds the group.
    pub fn from_cayley(table: &[Vec<usize>]) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup(GroupAxiomFailure::Shape(
                "empty table".into(),
            )));
        }
        let mut mul = Vec::with_capacity(n * n);
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotAGroup(GroupAxiomFailure::Shape(format!(
                    "row {i} has length {} but the table has {n} rows",
                    row.len()
                ))));
            }
            for &x in row {
                if x >= n {
                    return Err(Error::NotAGroup(GroupAxiomFailure::Shape(format!(
                        "entry {x} in row {i} is out of range 0..{n}"
                    ))));
                }
            }
            mul.extend_from_slice(row);
        }
        Self::from_flat_table(n, mul)
    }

    pub(crate) fn from_flat_table(order: usize, mul: Vec<usize>) -> Result<FiniteGroup> {
        debug_assert_eq!(mul.len(), order * order);
        let at = |a: usize, b: usize| mul[a * order + b];

        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(Error::NotAGroup(GroupAxiomFailure::NoIdentity))?;

        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or(Error::NotAGroup(GroupAxiomFailure::NoInverse { element: x }))?;
            inv[x] = y;
        }

        let group = FiniteGroup {
            name: None,
            order,
            mul,
            identity,
            inv,
            labels: None,
        };
        if let Some((a, b, c)) = group.associativity_witness() {
            return Err(Error::NotAGroup(GroupAxiomFailure::Associativity { a, b, c }));
        }
        Ok(group)
    }

    /// First triple violating associativity; exhaustive for small orders,
    /// seeded random sampling above.
    fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        let assoc = |a, b, c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        if n <= EXHAUSTIVE_AXIOM_ORDER {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Some((a, b, c));
                        }
                    }
                }
            }
            None
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
            (0..SAMPLED_TRIPLES)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .find(|&(a, b, c)| !assoc(a, b, c))
        }
    }

    /// Closure of a set of permutations (one-line image notation) under
    /// composition. Element 0 is the identity; products are `(p*q)(i) = p(q(i))`.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>], cap: usize) -> Result<FiniteGroup> {
        for (k, gen) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if gen.len() != degree {
                return Err(Error::Invalid(format!(
                    "generator {k} has length {} but degree is {degree}",
                    gen.len()
                )));
            }
            for &x in gen {
                if x >= degree || seen[x] {
                    return Err(Error::Invalid(format!("generator {k} is not a permutation")));
                }
                seen[x] = true;
            }
        }

        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for gen in generators {
                let p: Vec<usize> = elements[i].iter().map(|&x| gen[x]).collect();
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::TooLarge {
                            what: "permutation group",
                            size: elements.len() + 1,
                            cap,
                        });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }

        let n = elements.len();
        let mut mul = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                let ab: Vec<usize> = b.iter().map(|&x| a[x]).collect();
                mul.push(index[&ab]);
            }
        }
        let mut group = Self::from_flat_table(n, mul)?;
        group.labels = Some(
            elements
                .iter()
                .map(|p| {
                    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                    format!("[{}]", parts.join(" "))
                })
                .collect(),
        );
        Ok(group)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.order);
        self.labels = Some(labels);
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g⁻¹ x g`
    #[inline]
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv[g], x), g)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(labels) => labels[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    /// Same element set and multiplication; names and labels are ignored.
    pub fn same_table(&self, other: &FiniteGroup) -> bool {
        self.order == other.order && self.mul == other.mul
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn pow(&self, x: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, x))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> usize {
        self.elements()
            .map(|x| self.element_order(x))
            .fold(1, num_integer::lcm)
    }
}

/// Fixed-width bitset over the elements of a group.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            words: vec![0; universe.div_ceil(64).max(1)],
        }
    }

    pub fn from_elements(universe: usize, elements: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for x in elements {
            s.insert(x);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        let (w, b) = (x / 64, x % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.words[x / 64] & (1 << (x % 64)) != 0
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| i * 64 + b)
        })
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A homomorphism between two groups given by the image of every element.
#[derive(Clone)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupHom")
            .field("source", &self.source.name())
            .field("target", &self.target.name())
            .field("images", &self.images)
            .finish()
    }
}

impl GroupHom {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<usize>) -> Result<GroupHom> {
        if images.len() != source.order() {
            return Err(Error::NotAHomomorphism(format!(
                "{} images given for a source of order {}",
                images.len(),
                source.order()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&y| y >= target.order()) {
            return Err(Error::NotAHomomorphism(format!("image {bad} is out of range")));
        }
        for x in source.elements() {
            for y in source.elements() {
                if images[source.mul(x, y)] != target.mul(images[x], images[y]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "f({x}*{y}) != f({x})*f({y})"
                    )));
                }
            }
        }
        Ok(GroupHom {
            source,
            target,
            images,
        })
    }

    /// Extends an assignment on generators to a homomorphism. Fails if the
    /// generators do not generate the source or the assignment is inconsistent.
    pub fn from_generator_images(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        assignment: &[(usize, usize)],
    ) -> Result<GroupHom> {
        let mut images = vec![usize::MAX; source.order()];
        images[source.identity()] = target.identity();
        let mut queue = VecDeque::from([source.identity()]);
        while let Some(x) = queue.pop_front() {
            for &(s, t) in assignment {
                let y = source.mul(x, s);
                let fy = target.mul(images[x], t);
                if images[y] == usize::MAX {
                    images[y] = fy;
                    queue.push_back(y);
                } else if images[y] != fy {
                    return Err(Error::NotAHomomorphism(format!(
                        "generator assignment is inconsistent at element {y}"
                    )));
                }
            }
        }
        if images.contains(&usize::MAX) {
            return Err(Error::NotAHomomorphism(
                "generators do not generate the source group".into(),
            ));
        }
        Self::new(source, target, images)
    }

    pub fn identity(group: Arc<FiniteGroup>) -> GroupHom {
        let images = group.elements().collect();
        GroupHom {
            source: group.clone(),
            target: group,
            images,
        }
    }

    /// The homomorphism onto the trivial group.
    pub fn to_trivial(source: Arc<FiniteGroup>) -> GroupHom {
        let images = vec![0; source.order()];
        GroupHom {
            source,
            target: Arc::new(trivial_group()),
            images,
        }
    }

    /// Inner automorphism `x ↦ g⁻¹ x g`.
    pub fn conjugation(group: Arc<FiniteGroup>, g: usize) -> GroupHom {
        let images = group.elements().map(|x| group.conjugate(x, g)).collect();
        GroupHom {
            source: group.clone(),
            target: group,
            images,
        }
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `other ∘ self`
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if !self.target.same_table(&other.source) {
            return Err(Error::GroupMismatch(
                "target of the first map is not the source of the second".into(),
            ));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        })
    }

    pub fn injectivity_witness(&self) -> Option<(usize, usize)> {
        let mut seen = vec![usize::MAX; self.target.order()];
        for (x, &y) in self.images.iter().enumerate() {
            if seen[y] != usize::MAX {
                return Some((seen[y], x));
            }
            seen[y] = x;
        }
        None
    }

    pub fn is_injective(&self) -> bool {
        self.injectivity_witness().is_none()
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.source
            .elements()
            .filter(|&x| self.images[x] == self.target.identity())
            .collect()
    }
}

pub fn trivial_group() -> FiniteGroup {
    FiniteGroup::from_flat_table(1, vec![0])
        .expect("trivial table")
        .with_name("trivial")
}

/// A direct product `G × H` with its coordinate maps. The element `(g, h)`
/// has index `g·|H| + h`.
#[derive(Clone, Debug)]
pub struct DirectProduct {
    pub group: Arc<FiniteGroup>,
    pub left: Arc<FiniteGroup>,
    pub right: Arc<FiniteGroup>,
}

impl DirectProduct {
    pub fn new(left: Arc<FiniteGroup>, right: Arc<FiniteGroup>, cap: usize) -> Result<DirectProduct> {
        let (m, k) = (left.order(), right.order());
        let n = m * k;
        if n > cap {
            return Err(Error::TooLarge {
                what: "direct product",
                size: n,
                cap,
            });
        }
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let g = left.mul(a / k, b / k);
                let h = right.mul(a % k, b % k);
                mul.push(g * k + h);
            }
        }
        let mut group = FiniteGroup::from_flat_table(n, mul)?;
        if left.labels.is_some() || right.labels.is_some() {
            let labels = (0..n)
                .map(|x| format!("({},{})", left.label(x / k), right.label(x % k)))
                .collect();
            group.labels = Some(labels);
        }
        if let (Some(a), Some(b)) = (left.name(), right.name()) {
            group.name = Some(format!("{a}×{b}"));
        }
        Ok(DirectProduct {
            group: Arc::new(group),
            left,
            right,
        })
    }

    #[inline]
    pub fn pair(&self, g: usize, h: usize) -> usize {
        g * self.right.order() + h
    }

    #[inline]
    pub fn split(&self, x: usize) -> (usize, usize) {
        (x / self.right.order(), x % self.right.order())
    }

    pub fn inclusion_left(&self) -> GroupHom {
        let e = self.right.identity();
        GroupHom {
            source: self.left.clone(),
            target: self.group.clone(),
            images: self.left.elements().map(|g| self.pair(g, e)).collect(),
        }
    }

    pub fn inclusion_right(&self) -> GroupHom {
        let e = self.left.identity();
        GroupHom {
            source: self.right.clone(),
            target: self.group.clone(),
            images: self.right.elements().map(|h| self.pair(e, h)).collect(),
        }
    }

    pub fn projection_left(&self) -> GroupHom {
        GroupHom {
            source: self.group.clone(),
            target: self.left.clone(),
            images: self.group.elements().map(|x| self.split(x).0).collect(),
        }
    }

    pub fn projection_right(&self) -> GroupHom {
        GroupHom {
            source: self.group.clone(),
            target: self.right.clone(),
            images: self.group.elements().map(|x| self.split(x).1).collect(),
        }
    }
}

pub fn direct_product(left: &Arc<FiniteGroup>, right: &Arc<FiniteGroup>, cap: usize) -> Result<DirectProduct> {
    DirectProduct::new(left.clone(), right.clone(), cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> FiniteGroup {
        FiniteGroup::from_cayley(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn trivial_and_c2_tables() {
        let e = FiniteGroup::from_cayley(&[vec![0]]).unwrap();
        assert_eq!(e.order(), 1);
        let g = c2();
        assert_eq!(g.order(), 2);
        assert_eq!(g.identity(), 0);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn klein_table_all_involutions() {
        let t = vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ];
        let g = FiniteGroup::from_cayley(&t).unwrap();
        assert!((1..4).all(|x| g.element_order(x) == 2));
    }

    #[test]
    fn identity_not_at_zero() {
        let g = FiniteGroup::from_cayley(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(g.identity(), 1);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(
            FiniteGroup::from_cayley(&[vec![0, 1], vec![1, 1]]),
            Err(Error::NotAGroup(_))
        ));
        assert!(matches!(
            FiniteGroup::from_cayley(&[vec![0, 2], vec![1, 0]]),
            Err(Error::NotAGroup(GroupAxiomFailure::Shape(_)))
        ));
        // a loop of order 5: identity and inverses exist, associativity fails
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_cayley(&loop5) {
            Err(Error::NotAGroup(GroupAxiomFailure::Associativity { a, b, c })) => {
                let t = &loop5;
                assert_ne!(t[t[a][b]][c], t[a][t[b][c]]);
            }
            other => panic!("expected an associativity witness, got {other:?}"),
        }
    }

    #[test]
    fn permutation_closures() {
        let v4 = FiniteGroup::from_permutations(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 1024).unwrap();
        assert_eq!(v4.order(), 4);
        let a4 = FiniteGroup::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]], 1024).unwrap();
        assert_eq!(a4.order(), 12);
        let d8 = FiniteGroup::from_permutations(4, &[vec![1, 2, 3, 0], vec![2, 1, 0, 3]], 1024).unwrap();
        assert_eq!(d8.order(), 8);
        assert_eq!(d8.identity(), 0);
    }

    #[test]
    fn permutation_cap() {
        let s5 = [vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]];
        assert!(matches!(
            FiniteGroup::from_permutations(5, &s5, 100),
            Err(Error::TooLarge { .. })
        ));
        assert!(FiniteGroup::from_permutations(3, &[vec![0, 0, 1]], 100).is_err());
    }

    #[test]
    fn products() {
        let c2 = Arc::new(c2());
        let e = Arc::new(trivial_group());
        let p = direct_product(&e, &c2, 1024).unwrap();
        assert!(p.group.same_table(&c2));

        let v = direct_product(&c2, &c2, 1024).unwrap();
        assert_eq!(v.group.order(), 4);
        assert!((1..4).all(|x| v.group.element_order(x) == 2));

        let w = direct_product(&v.group, &c2, 1024).unwrap();
        assert_eq!(w.group.order(), 8);
        assert_eq!(w.group.exponent(), 2);
        assert!(direct_product(&w.group, &w.group, 32).is_err());

        for hom in [w.inclusion_left(), w.inclusion_right(), w.projection_left(), w.projection_right()] {
            GroupHom::new(hom.source().clone(), hom.target().clone(), hom.images().to_vec()).unwrap();
        }
    }

    #[test]
    fn homs_from_generators() {
        let c2 = Arc::new(c2());
        let c4 = Arc::new(
            FiniteGroup::from_cayley(
                &(0..4).map(|a| (0..4).map(|b| (a + b) % 4).collect()).collect::<Vec<_>>(),
            )
            .unwrap(),
        );
        let q = GroupHom::from_generator_images(c4.clone(), c2.clone(), &[(1, 1)]).unwrap();
        assert_eq!(q.images(), &[0, 1, 0, 1]);
        assert_eq!(q.kernel(), vec![0, 2]);
        // C2 → C4 sending the generator to an element of order 4 is not a hom
        assert!(GroupHom::from_generator_images(c2.clone(), c4.clone(), &[(1, 1)]).is_err());
        let i = GroupHom::from_generator_images(c2, c4, &[(1, 2)]).unwrap();
        assert!(i.is_injective());
        assert!(!q.is_injective());
        assert_eq!(i.then(&q).unwrap().images(), &[0, 0]);
    }
}
