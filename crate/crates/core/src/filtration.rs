//! The filtration `A(G) ⊇ J₀ ⊇ J₁ ⊇ …` by vanishing of marks on subgroups
//! with few generators, linearization to permutation characters, and
//! generalized characters on commuting tuples of p-power order.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup};
use crate::lattice::IntegerLattice;
use crate::subgroup::{conjugacy_classes_of_elements, subgroup_generated, ElementClass};

/// Classes whose subgroups need at most `n` generators.
fn low_classes(ring: &BurnsideRing, n: usize) -> Vec<usize> {
    ring.classes()
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.min_generators <= n)
        .map(|(j, _)| j)
        .collect()
}

/// `J_n(G)`: coefficient vectors whose marks vanish on every subgroup
/// generated by at most `n` elements.
pub fn jn_ideal(ring: &BurnsideRing, n: usize) -> Result<IntegerLattice> {
    let cols = low_classes(ring, n);
    let matrix: Vec<Vec<i64>> = ring
        .table_of_marks()
        .rows()
        .iter()
        .map(|row| cols.iter().map(|&j| row[j]).collect())
        .collect();
    IntegerLattice::left_kernel(&matrix, cols.len())
}

pub fn jn_membership(x: &BurnsideElement, n: usize) -> bool {
    low_classes(x.ring(), n).into_iter().all(|j| x.mark(j) == 0)
}

/// Least `n` with `J_n(G) = 0`.
pub fn max_nontrivial_level(ring: &BurnsideRing) -> Result<usize> {
    let mut n = 0;
    while !jn_ideal(ring, n)?.is_zero() {
        n += 1;
    }
    Ok(n)
}

/// Kernel of `[G/H] ↦ |G:H|`, built from subgroup orders alone.
pub fn augmentation_kernel(ring: &BurnsideRing) -> Result<IntegerLattice> {
    let n = ring.group().order() as i64;
    let column: Vec<Vec<i64>> = ring
        .classes()
        .classes
        .iter()
        .map(|c| vec![n / c.order() as i64])
        .collect();
    IntegerLattice::left_kernel(&column, 1)
}

/// A virtual permutation character, one value per conjugacy class of
/// elements (classes ordered by element order, then least member).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterVector {
    #[serde(skip)]
    pub group: Arc<FiniteGroup>,
    pub class_representatives: Vec<usize>,
    pub values: Vec<i64>,
}

/// The character of the linearization of `x`: at `g` it is the mark of `x`
/// at `⟨g⟩`.
pub fn permutation_character(x: &BurnsideElement) -> CharacterVector {
    let ring = x.ring();
    let reps: Vec<usize> = conjugacy_classes_of_elements(ring.group())
        .iter()
        .map(|c| c.representative)
        .collect();
    let values = reps
        .iter()
        .map(|&g| x.mark(ring.classes().class_of_cyclic(g)))
        .collect();
    CharacterVector {
        group: ring.group().clone(),
        class_representatives: reps,
        values,
    }
}

/// `χ_{G/H}(g) = |{y : y⁻¹gy ∈ H}| / |H|`, evaluated by scanning `G`.
fn coset_character(group: &FiniteGroup, h: &ElementSet, h_order: usize, classes: &[ElementClass]) -> Vec<i64> {
    classes
        .iter()
        .map(|c| {
            let g = c.representative;
            let hits = group.elements().filter(|&y| h.contains(group.conjugate(g, y))).count();
            (hits / h_order) as i64
        })
        .collect()
}

/// Kernel of linearization, from the character table of the transitive
/// permutation representations. Does not consult the table of marks.
pub fn linearization_kernel(ring: &BurnsideRing) -> Result<IntegerLattice> {
    let group = ring.group();
    let classes = conjugacy_classes_of_elements(group);
    let matrix: Vec<Vec<i64>> = ring
        .classes()
        .classes
        .iter()
        .map(|c| coset_character(group, c.representative.mask(), c.order(), &classes))
        .collect();
    IntegerLattice::left_kernel(&matrix, classes.len())
}

/// Values of `x` on commuting `level`-tuples of `prime`-power-order elements,
/// one tuple per simultaneous conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralizedCharacter {
    #[serde(skip)]
    pub group: Arc<FiniteGroup>,
    pub prime: usize,
    pub level: usize,
    /// Lexicographically least member of each conjugacy class of tuples.
    pub tuples: Vec<Vec<usize>>,
    pub values: Vec<i64>,
}

impl GeneralizedCharacter {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn is_prime_power_order(group: &FiniteGroup, x: usize, p: usize) -> bool {
    let mut o = group.element_order(x);
    while o.is_multiple_of(p) {
        o /= p;
    }
    o == 1
}

/// Commuting tuples of `p`-power elements, least member of each conjugacy
/// class, in lexicographic order.
pub fn commuting_tuple_classes(group: &FiniteGroup, p: usize, level: usize) -> Vec<Vec<usize>> {
    let candidates: Vec<usize> = group
        .elements()
        .filter(|&x| is_prime_power_order(group, x, p))
        .collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out = Vec::new();
    let mut tuple = Vec::with_capacity(level);
    walk(group, &candidates, level, &mut tuple, &mut seen, &mut out);
    out
}

fn walk(
    group: &FiniteGroup,
    candidates: &[usize],
    level: usize,
    tuple: &mut Vec<usize>,
    seen: &mut HashSet<Vec<usize>>,
    out: &mut Vec<Vec<usize>>,
) {
    if tuple.len() == level {
        if seen.contains(tuple.as_slice()) {
            return;
        }
        // lexicographic walk: the first member met is the least of its class
        for y in group.elements() {
            seen.insert(tuple.iter().map(|&a| group.conjugate(a, y)).collect());
        }
        out.push(tuple.clone());
        return;
    }
    for &x in candidates {
        if tuple.iter().all(|&a| group.mul(a, x) == group.mul(x, a)) {
            tuple.push(x);
            walk(group, candidates, level, tuple, seen, out);
            tuple.pop();
        }
    }
}

/// Value at a tuple is the mark of `x` at the subgroup the tuple generates.
pub fn generalized_character(x: &BurnsideElement, prime: usize, level: usize) -> Result<GeneralizedCharacter> {
    if !is_prime(prime) {
        return Err(Error::Invalid(format!("{prime} is not prime")));
    }
    if level == 0 {
        return Err(Error::Invalid("level must be positive".into()));
    }
    let ring = x.ring();
    let group = ring.group();
    let tuples = commuting_tuple_classes(group, prime, level);
    let mut class_cache: HashMap<Vec<usize>, usize> = HashMap::new();
    let values = tuples
        .iter()
        .map(|t| {
            let sub = subgroup_generated(group, t);
            let class = *class_cache
                .entry(sub.elements().to_vec())
                .or_insert_with(|| ring.classes().class_of(&sub));
            x.mark(class)
        })
        .collect();
    Ok(GeneralizedCharacter {
        group: group.clone(),
        prime,
        level,
        tuples,
        values,
    })
}

/// The HNF basis of `J_n(G)` as ring elements.
pub fn jn_generators(ring: &Arc<BurnsideRing>, n: usize) -> Result<Vec<BurnsideElement>> {
    jn_ideal(ring, n)?
        .basis()
        .iter()
        .map(|b| ring.element(b.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::{induce, klein_generator, restrict_along};
    use crate::catalog::catalog_group;
    use crate::group::GroupHom;
    use crate::subgroup::{quotient_group, subgroup_as_group};
    use proptest::prelude::*;

    fn ring(name: &str) -> Arc<BurnsideRing> {
        BurnsideRing::new(Arc::new(catalog_group(name).unwrap())).unwrap()
    }

    #[test]
    fn klein_level_one() {
        let r = ring("V4");
        let j1 = jn_ideal(&r, 1).unwrap();
        assert_eq!(j1.rank(), 1);
        let g = klein_generator(&r);
        let neg: Vec<i64> = g.coeffs().iter().map(|c| -c).collect();
        assert!(j1.basis()[0] == g.coeffs() || j1.basis()[0] == neg);
        assert!(jn_membership(&g, 1));
        assert!(!jn_membership(&g, 2));
        assert!(jn_ideal(&r, 2).unwrap().is_zero());
        assert_eq!(max_nontrivial_level(&r).unwrap(), 2);
    }

    #[test]
    fn alternating_level_one() {
        let r = ring("A4");
        // classes: e, C2, C3, V4, A4
        let a = [1, 0, -3, -1, 3];
        let b = [0, 1, -1, -1, 1];
        let expected = IntegerLattice::from_generators(5, &[a.to_vec(), b.to_vec()]).unwrap();
        assert_eq!(jn_ideal(&r, 1).unwrap(), expected);
    }

    #[test]
    fn levels_of_small_groups() {
        assert_eq!(max_nontrivial_level(&ring("trivial")).unwrap(), 0);
        for n in [2, 3, 5, 6, 12] {
            assert_eq!(max_nontrivial_level(&ring(&format!("C{n}"))).unwrap(), 1);
            assert!(linearization_kernel(&ring(&format!("C{n}"))).unwrap().is_zero());
        }
        assert_eq!(max_nontrivial_level(&ring("E(2,3)")).unwrap(), 3);
    }

    #[test]
    fn characters() {
        let r = ring("C2");
        assert_eq!(permutation_character(&r.basis(0)).values, vec![2, 0]);
        assert_eq!(permutation_character(&r.one()).values, vec![1, 1]);
        let v = ring("V4");
        assert!(permutation_character(&klein_generator(&v)).values.iter().all(|&x| x == 0));
    }

    #[test]
    fn marks_route_matches_scan_route() {
        for name in ["S3", "D8", "Q8", "A4", "S4", "C3×S3"] {
            let r = ring(name);
            let classes = conjugacy_classes_of_elements(r.group());
            for (i, c) in r.classes().classes.iter().enumerate() {
                let scanned = coset_character(r.group(), c.representative.mask(), c.order(), &classes);
                assert_eq!(permutation_character(&r.basis(i)).values, scanned, "{name}");
            }
            assert_eq!(linearization_kernel(&r).unwrap(), jn_ideal(&r, 1).unwrap(), "{name}");
            assert_eq!(augmentation_kernel(&r).unwrap(), jn_ideal(&r, 0).unwrap(), "{name}");
        }
    }

    #[test]
    fn klein_generalized_characters() {
        let r = ring("V4");
        let g = klein_generator(&r);
        assert!(generalized_character(&g, 2, 1).unwrap().is_zero());
        let level2 = generalized_character(&g, 2, 2).unwrap();
        for (t, &v) in level2.tuples.iter().zip(&level2.values) {
            let whole = subgroup_generated(r.group(), t).order() == 4;
            assert_eq!(v, if whole { -2 } else { 0 });
        }
        let one = generalized_character(&r.one(), 2, 3).unwrap();
        assert!(one.values.iter().all(|&v| v == 1));
        assert!(generalized_character(&g, 4, 1).is_err());
    }

    #[test]
    fn tuple_classes_are_conjugation_closed() {
        let g = catalog_group("S4").unwrap();
        let tuples = commuting_tuple_classes(&g, 2, 2);
        let set: HashSet<_> = tuples.iter().cloned().collect();
        for t in &tuples {
            for y in g.elements() {
                let c: Vec<usize> = t.iter().map(|&a| g.conjugate(a, y)).collect();
                assert!(c >= *t);
                if c != *t {
                    assert!(!set.contains(&c));
                }
            }
        }
        // (e, e) is first and evaluates to the augmentation
        assert_eq!(tuples[0], vec![g.identity(); 2]);
    }

    fn chain_holds(r: &BurnsideRing) {
        let top = max_nontrivial_level(r).unwrap();
        for n in 0..=top {
            assert!(jn_ideal(r, n + 1).unwrap().is_sublattice_of(&jn_ideal(r, n).unwrap()));
        }
    }

    #[test]
    fn chain() {
        for name in ["D8", "Q8", "C2×C4", "A4", "C2×D8"] {
            chain_holds(&ring(name));
        }
    }

    fn combination(ring: &Arc<BurnsideRing>, lattice: &IntegerLattice, weights: &[i64]) -> BurnsideElement {
        let mut coeffs = vec![0i64; ring.rank()];
        for (row, w) in lattice.basis().iter().zip(weights.iter().cycle()) {
            for (c, b) in coeffs.iter_mut().zip(row) {
                *c += w * b;
            }
        }
        ring.element(coeffs).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ideal_closure(group in prop::sample::select(vec!["V4", "S3", "D8", "Q8", "A4", "C2×C4"]),
                         n in 0usize..3,
                         weights in prop::collection::vec(-3i64..4, 1..6),
                         x in prop::collection::vec(-3i64..4, 16)) {
            let r = ring(group);
            let j = jn_ideal(&r, n).unwrap();
            let y = combination(&r, &j, &weights);
            let x = r.element(x[..r.rank()].to_vec()).unwrap();
            let xy = x.multiply(&y).unwrap();
            prop_assert!(j.contains(xy.coeffs()));
            prop_assert!(jn_membership(&xy, n));
            if n >= 1 {
                prop_assert!(generalized_character(&y, 2, n).unwrap().is_zero());
            }
        }

        #[test]
        fn restriction_and_induction_preserve_levels(n in 0usize..3,
                                                    weights in prop::collection::vec(-3i64..4, 1..6),
                                                    which in 0usize..64) {
            let f = Arc::new(catalog_group("D8").unwrap());
            let rf = BurnsideRing::new(f.clone()).unwrap();
            let y = combination(&rf, &jn_ideal(&rf, n).unwrap(), &weights);
            let subs: Vec<_> = rf.classes().all_subgroups().map(|(_, s)| s.clone()).collect();
            let sub = &subs[which % subs.len()];

            // restriction along an inclusion
            let (h, incl) = subgroup_as_group(&f, sub);
            let rh = BurnsideRing::new(h.clone()).unwrap();
            let res = restrict_along(&incl, &rh, &y).unwrap();
            prop_assert!(jn_membership(&res, n));

            // induction back up
            let x = combination(&rh, &jn_ideal(&rh, n).unwrap(), &weights);
            prop_assert!(jn_membership(&induce(&incl, &x, &rf).unwrap(), n));

            // restriction along a quotient map, when the subgroup is normal
            if sub.is_normal(&f) {
                let (q, proj) = quotient_group(&f, sub).unwrap();
                let rq = BurnsideRing::new(q).unwrap();
                let z = combination(&rq, &jn_ideal(&rq, n).unwrap(), &weights);
                prop_assert!(jn_membership(&restrict_along(&proj, &rf, &z).unwrap(), n));
            }

            // conjugation automorphisms
            let conj = GroupHom::conjugation(f.clone(), which % f.order());
            prop_assert!(jn_membership(&restrict_along(&conj, &rf, &y).unwrap(), n));
        }
    }
}
