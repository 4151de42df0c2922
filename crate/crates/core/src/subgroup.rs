//! Subgroups, their conjugacy classes, and minimal generator counts.
//!
//! Class order is canonical: subgroup order ascending, ties broken by the
//! lexicographically least sorted element list among the conjugates. That
//! least conjugate is also the class representative. Nothing in the group
//! theory fixes this choice; it only has to be deterministic and to list
//! smaller subgroups first so that tables of marks come out triangular.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup, GroupHom};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
    mask: ElementSet,
}

impl Subgroup {
    /// Wraps an element set that is already known to be a subgroup.
    pub(crate) fn from_mask(mask: ElementSet) -> Subgroup {
        Subgroup {
            elements: mask.iter().collect(),
            mask,
        }
    }

    /// Checks closure, identity and Lagrange before accepting the set.
    pub fn new(group: &FiniteGroup, elements: &[usize]) -> Result<Subgroup> {
        if elements.iter().any(|&x| x >= group.order()) {
            return Err(Error::Invalid("subgroup element out of range".into()));
        }
        let mask = ElementSet::from_elements(group.order(), elements.iter().copied());
        let sub = Subgroup::from_mask(mask);
        if !sub.contains(group.identity()) {
            return Err(Error::Invalid("subgroup does not contain the identity".into()));
        }
        for &a in &sub.elements {
            if !sub.contains(group.inv(a)) {
                return Err(Error::Invalid(format!("not closed under inverse at {a}")));
            }
            for &b in &sub.elements {
                if !sub.contains(group.mul(a, b)) {
                    return Err(Error::Invalid(format!("not closed under product at ({a}, {b})")));
                }
            }
        }
        if !group.order().is_multiple_of(sub.order()) {
            return Err(Error::Invalid("subgroup order does not divide group order".into()));
        }
        Ok(sub)
    }

    pub fn trivial(group: &FiniteGroup) -> Subgroup {
        Subgroup::from_mask(ElementSet::from_elements(group.order(), [group.identity()]))
    }

    pub fn whole(group: &FiniteGroup) -> Subgroup {
        Subgroup::from_mask(ElementSet::from_elements(group.order(), group.elements()))
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn mask(&self) -> &ElementSet {
        &self.mask
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask.is_subset(&other.mask)
    }

    /// `g⁻¹ U g`
    pub fn conjugate(&self, group: &FiniteGroup, g: usize) -> Subgroup {
        Subgroup::from_mask(ElementSet::from_elements(
            group.order(),
            self.elements.iter().map(|&x| group.conjugate(x, g)),
        ))
    }

    pub fn is_normal(&self, group: &FiniteGroup) -> bool {
        group
            .elements()
            .all(|g| self.elements.iter().all(|&x| self.contains(group.conjugate(x, g))))
    }

    pub fn normalizer_order(&self, group: &FiniteGroup) -> usize {
        group
            .elements()
            .filter(|&g| self.elements.iter().all(|&x| self.contains(group.conjugate(x, g))))
            .count()
    }
}

/// Least subgroup containing `seeds`.
pub fn subgroup_generated(group: &FiniteGroup, seeds: &[usize]) -> Subgroup {
    extend_subgroup(group, &[group.identity()], seeds)
}

/// `⟨base, extra⟩` where `base` is the element list of a subgroup. Right
/// multiplication by generators reaches every element of a finite group.
fn extend_subgroup(group: &FiniteGroup, base: &[usize], extra: &[usize]) -> Subgroup {
    let mut mask = ElementSet::from_elements(group.order(), base.iter().copied());
    let mut list: Vec<usize> = base.to_vec();
    let mut gens: Vec<usize> = extra.to_vec();
    gens.extend(base.iter().copied().filter(|&x| x != group.identity()));
    let mut i = 0;
    while i < list.len() {
        let x = list[i];
        for &s in &gens {
            let y = group.mul(x, s);
            if mask.insert(y) {
                list.push(y);
            }
        }
        i += 1;
    }
    Subgroup::from_mask(mask)
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    /// All conjugates, sorted by element list; the first one is the representative.
    pub conjugates: Vec<Subgroup>,
    pub min_generators: usize,
    pub normalizer_order: usize,
    /// `|N_G(H)| / |H|`
    pub weyl_order: usize,
}

impl SubgroupClass {
    pub fn order(&self) -> usize {
        self.representative.order()
    }

    pub fn is_normal(&self) -> bool {
        self.conjugates.len() == 1
    }

    pub fn is_cyclic(&self) -> bool {
        self.min_generators <= 1
    }
}

#[derive(Clone, Debug)]
pub struct SubgroupClassification {
    pub classes: Vec<SubgroupClass>,
    lookup: HashMap<ElementSet, usize>,
    cyclic_class_of_element: Vec<usize>,
}

impl SubgroupClassification {
    /// Canonical class index of an arbitrary subgroup.
    pub fn class_of(&self, sub: &Subgroup) -> usize {
        self.lookup[sub.mask()]
    }

    pub fn class_of_mask(&self, mask: &ElementSet) -> Option<usize> {
        self.lookup.get(mask).copied()
    }

    /// Class of the cyclic subgroup `⟨x⟩`.
    pub fn class_of_cyclic(&self, x: usize) -> usize {
        self.cyclic_class_of_element[x]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn subgroup_count(&self) -> usize {
        self.lookup.len()
    }

    pub fn all_subgroups(&self) -> impl Iterator<Item = (usize, &Subgroup)> {
        self.classes
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.conjugates.iter().map(move |s| (i, s)))
    }

    /// Index of the class of the whole group (always the last).
    pub fn whole_class(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn trivial_class(&self) -> usize {
        0
    }
}

/// Enumerates every subgroup by the layered closure (cyclic seeds, then
/// single-element extensions to a fixed point) and sorts them into
/// canonical conjugacy classes.
pub fn classify_subgroups(group: &FiniteGroup, cap: usize) -> Result<SubgroupClassification> {
    if group.order() > cap {
        return Err(Error::TooLarge {
            what: "group",
            size: group.order(),
            cap,
        });
    }
    let n = group.order();

    // cyclic subgroups, one generator each
    let mut cyclic_gens: Vec<usize> = Vec::new();
    let mut known: HashSet<ElementSet> = HashSet::new();
    let mut all: Vec<Subgroup> = Vec::new();
    let mut cyclic_mask_of = Vec::with_capacity(n);
    for x in group.elements() {
        let c = subgroup_generated(group, &[x]);
        cyclic_mask_of.push(c.mask().clone());
        if known.insert(c.mask().clone()) {
            if x != group.identity() {
                cyclic_gens.push(x);
            }
            all.push(c);
        }
    }

    let mut frontier: Vec<usize> = (0..all.len()).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            for &c in &cyclic_gens {
                if all[i].contains(c) {
                    continue;
                }
                let ext = extend_subgroup(group, all[i].elements(), &[c]);
                if known.insert(ext.mask().clone()) {
                    next.push(all.len());
                    all.push(ext);
                }
            }
        }
        frontier = next;
    }

    // conjugacy classes
    let mut assigned: HashSet<ElementSet> = HashSet::new();
    let mut classes = Vec::new();
    for sub in &all {
        if assigned.contains(sub.mask()) {
            continue;
        }
        let mut conj: Vec<Subgroup> = Vec::new();
        let mut seen: HashSet<ElementSet> = HashSet::new();
        for g in group.elements() {
            let c = sub.conjugate(group, g);
            if seen.insert(c.mask().clone()) {
                conj.push(c);
            }
        }
        conj.sort_by(|a, b| a.elements().cmp(b.elements()));
        assigned.extend(seen);
        let representative = conj[0].clone();
        let normalizer_order = n / conj.len();
        let weyl_order = normalizer_order / representative.order();
        let min_generators = min_generator_count(group, &representative);
        classes.push(SubgroupClass {
            representative,
            conjugates: conj,
            min_generators,
            normalizer_order,
            weyl_order,
        });
    }
    classes.sort_by(|a, b| {
        (a.order(), a.representative.elements()).cmp(&(b.order(), b.representative.elements()))
    });

    let mut lookup = HashMap::new();
    for (i, class) in classes.iter().enumerate() {
        for s in &class.conjugates {
            lookup.insert(s.mask().clone(), i);
        }
    }
    let cyclic_class_of_element = cyclic_mask_of.iter().map(|m| lookup[m]).collect();
    Ok(SubgroupClassification {
        classes,
        lookup,
        cyclic_class_of_element,
    })
}

/// Smallest `k` such that some `k` elements of `sub` generate it.
///
/// Breadth-first over the subgroups generated by `i`-tuples: level `i+1`
/// extends each level-`i` subgroup by one element, taking one generator per
/// cyclic subgroup of `sub` since `⟨S, x⟩` only depends on `⟨x⟩`.
pub fn min_generator_count(group: &FiniteGroup, sub: &Subgroup) -> usize {
    if sub.order() == 1 {
        return 0;
    }
    let mut cyclic: Vec<Subgroup> = Vec::new();
    let mut cyclic_gens: Vec<usize> = Vec::new();
    let mut seen: HashSet<ElementSet> = HashSet::new();
    for &x in sub.elements() {
        if group.element_order(x) == sub.order() {
            return 1;
        }
        let c = subgroup_generated(group, &[x]);
        if x != group.identity() && seen.insert(c.mask().clone()) {
            cyclic_gens.push(x);
            cyclic.push(c);
        }
    }

    let mut level = cyclic;
    let mut k = 1;
    loop {
        k += 1;
        let mut next = Vec::new();
        for s in &level {
            for &c in &cyclic_gens {
                if s.contains(c) {
                    continue;
                }
                let ext = extend_subgroup(group, s.elements(), &[c]);
                if ext.order() == sub.order() {
                    return k;
                }
                if seen.insert(ext.mask().clone()) {
                    next.push(ext);
                }
            }
        }
        debug_assert!(!next.is_empty(), "generation search stalled below the target");
        level = next;
    }
}

/// A conjugacy class of elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementClass {
    pub representative: usize,
    pub members: Vec<usize>,
    pub element_order: usize,
}

/// Conjugacy classes ordered by (element order, least member).
pub fn conjugacy_classes_of_elements(group: &FiniteGroup) -> Vec<ElementClass> {
    let mut done = vec![false; group.order()];
    let mut classes = Vec::new();
    for x in group.elements() {
        if done[x] {
            continue;
        }
        let mut members: Vec<usize> = group.elements().map(|g| group.conjugate(x, g)).collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            done[m] = true;
        }
        classes.push(ElementClass {
            representative: members[0],
            element_order: group.element_order(x),
            members,
        });
    }
    classes.sort_by_key(|c| (c.element_order, c.representative));
    classes
}

/// A subgroup as a group in its own right; element `i` is the `i`-th
/// smallest element of the subgroup. Returns the inclusion as well.
pub fn subgroup_as_group(parent: &Arc<FiniteGroup>, sub: &Subgroup) -> (Arc<FiniteGroup>, GroupHom) {
    let elems = sub.elements();
    let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let n = elems.len();
    let mut mul = Vec::with_capacity(n * n);
    for &a in elems {
        for &b in elems {
            mul.push(pos[&parent.mul(a, b)]);
        }
    }
    let mut group = FiniteGroup::from_flat_table(n, mul).expect("subgroup table is a group");
    group = group.with_labels(elems.iter().map(|&x| parent.label(x)).collect());
    if let Some(name) = parent.name() {
        let gens: Vec<String> = elems.iter().map(|x| x.to_string()).collect();
        group = group.with_name(format!("{name}[{}]", gens.join(",")));
    }
    let group = Arc::new(group);
    let inclusion = GroupHom::new(group.clone(), parent.clone(), elems.to_vec())
        .expect("inclusion is a homomorphism");
    (group, inclusion)
}

/// `G/N` for a normal subgroup `N`, cosets indexed by their least element.
pub fn quotient_group(parent: &Arc<FiniteGroup>, normal: &Subgroup) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    if !normal.is_normal(parent) {
        return Err(Error::Invalid("quotient by a non-normal subgroup".into()));
    }
    let mut coset_of = vec![usize::MAX; parent.order()];
    let mut reps = Vec::new();
    for x in parent.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        for &k in normal.elements() {
            coset_of[parent.mul(x, k)] = reps.len();
        }
        reps.push(x);
    }
    let m = reps.len();
    let mut mul = Vec::with_capacity(m * m);
    for &a in &reps {
        for &b in &reps {
            mul.push(coset_of[parent.mul(a, b)]);
        }
    }
    let mut group = FiniteGroup::from_flat_table(m, mul)?;
    if let Some(name) = parent.name() {
        group = group.with_name(format!("{name}/N{}", normal.order()));
    }
    let group = Arc::new(group);
    let q = GroupHom::new(parent.clone(), group.clone(), coset_of)?;
    Ok((group, q))
}

/// `φ(U)` as a subgroup of the target.
pub fn image_subgroup(hom: &GroupHom, sub: &Subgroup) -> Subgroup {
    let target = hom.target();
    Subgroup::from_mask(ElementSet::from_elements(
        target.order(),
        sub.elements().iter().map(|&x| hom.apply(x)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_group;

    fn brute_force_subgroup_count(g: &FiniteGroup) -> usize {
        let n = g.order();
        assert!(n <= 24);
        let mut count = 0;
        let rest: Vec<usize> = g.elements().filter(|&x| x != g.identity()).collect();
        for bits in 0u32..(1 << rest.len()) {
            let size = bits.count_ones() as usize + 1;
            if !n.is_multiple_of(size) {
                continue;
            }
            let mut set = ElementSet::from_elements(n, [g.identity()]);
            for (i, &x) in rest.iter().enumerate() {
                if bits & (1 << i) != 0 {
                    set.insert(x);
                }
            }
            let elems: Vec<usize> = set.iter().collect();
            // a finite nonempty subset closed under multiplication is a subgroup
            if elems.iter().all(|&a| elems.iter().all(|&b| set.contains(g.mul(a, b)))) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn generated_subgroups() {
        let a4 = catalog_group("A4").unwrap();
        assert_eq!(subgroup_generated(&a4, &[]).order(), 1);
        let three_cycle = a4.elements().find(|&x| a4.element_order(x) == 3).unwrap();
        assert_eq!(subgroup_generated(&a4, &[three_cycle]).order(), 3);
        let v4 = catalog_group("V4").unwrap();
        assert_eq!(subgroup_generated(&v4, &[1, 2]).order(), 4);
    }

    #[test]
    fn klein_classes() {
        let v4 = catalog_group("V4").unwrap();
        let cls = classify_subgroups(&v4, 1024).unwrap();
        let profile: Vec<usize> = cls.classes.iter().map(|c| c.min_generators).collect();
        assert_eq!(profile, vec![0, 1, 1, 1, 2]);
        let orders: Vec<usize> = cls.classes.iter().map(|c| c.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 4]);
    }

    #[test]
    fn alternating_classes_by_order() {
        let a4 = catalog_group("A4").unwrap();
        let cls = classify_subgroups(&a4, 1024).unwrap();
        let orders: Vec<usize> = cls.classes.iter().map(|c| c.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 12]);
        assert_eq!(cls.subgroup_count(), 10);
    }

    #[test]
    fn trivial_group_classes() {
        let e = catalog_group("trivial").unwrap();
        let cls = classify_subgroups(&e, 1024).unwrap();
        assert_eq!(cls.len(), 1);
        assert_eq!(cls.classes[0].min_generators, 0);
    }

    #[test]
    fn classification_cap() {
        let s4 = catalog_group("S4").unwrap();
        assert!(matches!(classify_subgroups(&s4, 10), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn min_generators_examples() {
        let v4 = catalog_group("V4").unwrap();
        assert_eq!(min_generator_count(&v4, &Subgroup::trivial(&v4)), 0);
        assert_eq!(min_generator_count(&v4, &subgroup_generated(&v4, &[1])), 1);
        assert_eq!(min_generator_count(&v4, &Subgroup::whole(&v4)), 2);
        let e8 = catalog_group("E(2,3)").unwrap();
        assert_eq!(min_generator_count(&e8, &Subgroup::whole(&e8)), 3);
        let s4 = catalog_group("S4").unwrap();
        assert_eq!(min_generator_count(&s4, &Subgroup::whole(&s4)), 2);
        let c12 = catalog_group("C12").unwrap();
        assert_eq!(min_generator_count(&c12, &Subgroup::whole(&c12)), 1);
    }

    #[test]
    fn element_classes() {
        assert_eq!(conjugacy_classes_of_elements(&catalog_group("trivial").unwrap()).len(), 1);
        assert_eq!(conjugacy_classes_of_elements(&catalog_group("A4").unwrap()).len(), 4);
        let d8 = conjugacy_classes_of_elements(&catalog_group("D8").unwrap());
        assert_eq!(d8.len(), 5);
        assert!(d8.windows(2).all(|w| (w[0].element_order, w[0].representative)
            < (w[1].element_order, w[1].representative)));
    }

    #[test]
    fn subgroup_counts_match_subset_filtering() {
        for name in ["trivial", "C2", "C6", "V4", "S3", "D8", "Q8", "A4", "C2×C4", "E(2,3)", "D12", "C3×C3"] {
            let g = catalog_group(name).unwrap();
            let cls = classify_subgroups(&g, 1024).unwrap();
            let total: usize = cls.classes.iter().map(|c| c.conjugates.len()).sum();
            assert_eq!(total, brute_force_subgroup_count(&g), "{name}");
        }
    }

    #[test]
    fn class_invariants() {
        for name in ["S4", "D8", "Q8", "C2×C4", "E(2,3)", "D12", "A4", "C3×S3"] {
            let g = catalog_group(name).unwrap();
            let cls = classify_subgroups(&g, 1024).unwrap();
            for class in &cls.classes {
                let log2 = (usize::BITS - 1 - class.order().leading_zeros()) as usize;
                assert!(class.min_generators <= log2);
                assert_eq!(class.min_generators == 0, class.order() == 1);
                for conj in &class.conjugates {
                    assert_eq!(min_generator_count(&g, conj), class.min_generators);
                    assert_eq!(conj.normalizer_order(&g) / conj.order(), class.weyl_order);
                    assert!(Subgroup::new(&g, conj.elements()).is_ok());
                }
                let cyclic = class
                    .representative
                    .elements()
                    .iter()
                    .any(|&x| g.element_order(x) == class.order());
                assert_eq!(class.min_generators == 1, cyclic && class.order() > 1);
            }
        }
    }

    #[test]
    fn quotient_and_inclusion() {
        let d8 = Arc::new(catalog_group("D8").unwrap());
        let cls = classify_subgroups(&d8, 1024).unwrap();
        let center = cls.classes.iter().find(|c| c.order() == 2 && c.is_normal()).unwrap();
        let (q, map) = quotient_group(&d8, &center.representative).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.exponent(), 2);
        assert_eq!(map.kernel(), center.representative.elements());
        let (sub, inc) = subgroup_as_group(&d8, &center.representative);
        assert_eq!(sub.order(), 2);
        assert!(inc.is_injective());
    }

    #[test]
    fn subgroup_validation() {
        let v4 = catalog_group("V4").unwrap();
        assert!(Subgroup::new(&v4, &[0, 1]).is_ok());
        assert!(Subgroup::new(&v4, &[1]).is_err());
        assert!(Subgroup::new(&v4, &[0, 1, 2]).is_err());
    }
}
