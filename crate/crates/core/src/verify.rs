//! The published computations and structural properties as named checks.
//!
//! Each check recomputes its claim from scratch and records the expected and
//! actual values. Randomized checks use a seeded generator, so a report is a
//! deterministic function of its options.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::biset::{
    compose_set_left, compose_set_right, jn_bivariant, jn_bivariant_direct, BisetSpace, Composition,
};
use crate::burnside::{induce, klein_generator, restrict_along, BurnsideRing};
use crate::catalog::{catalog_group, SMALL_CATALOG};
use crate::error::{Error, Result};
use crate::filtration::{
    augmentation_kernel, generalized_character, is_prime, jn_ideal, jn_membership, linearization_kernel,
    max_nontrivial_level,
};
use crate::group::{direct_product, trivial_group, DirectProduct, FiniteGroup, GroupHom};
use crate::lattice::IntegerLattice;
use crate::oracle::{hom_biset_set, transfer_biset_set, ConcreteGSet};
use crate::subgroup::{quotient_group, subgroup_as_group};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub expected: Value,
    pub actual: Value,
    /// Which published statement the check reproduces.
    pub reference: String,
}

impl Check {
    fn new(name: &str, reference: &str, passed: bool, expected: Value, actual: Value) -> Check {
        Check {
            name: name.to_string(),
            status: if passed { Status::Pass } else { Status::Fail },
            expected,
            actual,
            reference: reference.to_string(),
        }
    }

    fn errored(name: &str, reference: &str, expected: Value, err: Error) -> Check {
        Check::new(name, reference, false, expected, json!({ "error": err.to_string() }))
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Deliberate corruptions used to confirm that the report localizes faults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of the constant term of the expected Klein generator.
    KleinSign,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub fault: Option<Fault>,
    pub seed: u64,
    /// Randomized instances per group in the ideal suite.
    pub ideal_instances: usize,
    /// Largest group order in the ideal suite.
    pub ideal_max_order: usize,
    /// Groups whose triples are composed both ways.
    pub composition_groups: Vec<String>,
    /// Basis pairs compared per triple; triples with fewer pairs are exhaustive.
    pub composition_pairs: usize,
}

/// Groups of order at most 8 from the catalog.
pub fn groups_up_to_eight() -> Vec<String> {
    SMALL_CATALOG
        .iter()
        .filter(|n| catalog_group(n).map(|g| g.order() <= 8).unwrap_or(false))
        .map(|n| n.to_string())
        .collect()
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            fault: None,
            seed: 0x5eed,
            ideal_instances: 200,
            ideal_max_order: 16,
            composition_groups: groups_up_to_eight(),
            composition_pairs: 4000,
        }
    }
}

pub fn run(options: &VerifyOptions) -> VerificationReport {
    let checks = vec![
        klein_level_one(options.fault),
        klein_product(),
        alternating_level_one(),
        alternating_restriction(),
        dihedral_pullback(),
        linearization_equals_level_one(SMALL_CATALOG),
        level_zero_is_augmentation_kernel(SMALL_CATALOG),
        ideal_suite(SMALL_CATALOG, options.ideal_max_order, options.ideal_instances, options.seed),
        right_transfer_closure(SMALL_CATALOG, options.ideal_max_order),
        marks_and_products_against_sets(SMALL_CATALOG),
        composition_against_double_cosets(&options.composition_groups, options.composition_pairs, options.seed),
        generalized_characters_vanish(SMALL_CATALOG, 3),
        hausdorff_and_chain(SMALL_CATALOG),
    ];
    VerificationReport { checks }
}

fn ring_of(name: &str) -> Result<Arc<BurnsideRing>> {
    BurnsideRing::new(Arc::new(catalog_group(name)?))
}

/// Class indices of `ring` whose subgroups have the given order.
fn classes_of_order(ring: &BurnsideRing, order: usize) -> Vec<usize> {
    ring.classes()
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.order() == order)
        .map(|(i, _)| i)
        .collect()
}

const KLEIN_REF: &str = "the level-one ideal of the Klein four-group is free on one generator";

pub fn klein_level_one(fault: Option<Fault>) -> Check {
    let name = "klein_level_one_generator";
    let mut expected = vec![-1i64, 1, 1, 1, -2];
    if fault == Some(Fault::KleinSign) {
        expected[4] = -expected[4];
    }
    let result = (|| {
        let ring = ring_of("V4")?;
        let j1 = jn_ideal(&ring, 1)?;
        let negated: Vec<i64> = expected.iter().map(|c| -c).collect();
        let ok = j1.rank() == 1 && (j1.basis()[0] == expected || j1.basis()[0] == negated);
        Ok((ok, json!({ "rank": j1.rank(), "basis": j1.basis() })))
    })();
    let exp = json!({ "rank": 1, "generator_up_to_sign": expected });
    match result {
        Ok((ok, actual)) => Check::new(name, KLEIN_REF, ok, exp, actual),
        Err(e) => Check::errored(name, KLEIN_REF, exp, e),
    }
}

/// `1 + g` against `∏_C ([V4/C] − 1)`, by mark multiplication and by
/// expanding the product into explicit products of coset sets.
pub fn klein_product() -> Check {
    let name = "klein_product_factorization";
    let reference = "one plus the Klein generator factors as a product over the order-two subgroups";
    let result = (|| -> Result<(bool, Value, Value)> {
        let ring = ring_of("V4")?;
        let one = ring.one();
        let lhs = &one + &klein_generator(&ring);
        let cs = classes_of_order(&ring, 2);
        let mut rhs = ring.one();
        for &c in &cs {
            rhs = rhs.multiply(&(&ring.basis(c) - &one))?;
        }
        // Σ_{S ⊆ classes} (−1)^{3−|S|} ∏_{C∈S} V4/C, each product built as a set
        let group = ring.group();
        let mut oracle = ring.zero();
        for mask in 0u32..(1 << cs.len()) {
            let mut set = ConcreteGSet::point(group);
            for (k, &c) in cs.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    let coset = ConcreteGSet::cosets(group, &ring.classes().classes[c].representative)?;
                    set = set.product(&coset)?;
                }
            }
            let sign = if (cs.len() - mask.count_ones() as usize).is_multiple_of(2) { 1 } else { -1 };
            oracle = &oracle + &(sign * &set.orbit_decompose(&ring)?);
        }
        let ok = lhs == rhs && rhs == oracle;
        Ok((
            ok,
            json!(lhs.coeffs()),
            json!({ "mark_product": rhs.coeffs(), "explicit_sets": oracle.coeffs() }),
        ))
    })();
    match result {
        Ok((ok, e, a)) => Check::new(name, reference, ok, e, a),
        Err(err) => Check::errored(name, reference, Value::Null, err),
    }
}

/// The two published generators of the level-one ideal of `A4`, in canonical
/// class order (e, C2, C3, V4, A4).
pub fn alternating_generators(ring: &BurnsideRing) -> Result<[Vec<i64>; 2]> {
    let pick = |order: usize| -> Result<usize> {
        match classes_of_order(ring, order).as_slice() {
            [c] => Ok(*c),
            _ => Err(Error::Invalid(format!("A4 should have one class of order {order}"))),
        }
    };
    let (e, c2, c3, v4, a4) = (pick(1)?, pick(2)?, pick(3)?, pick(4)?, pick(12)?);
    let mut first = vec![0i64; ring.rank()];
    first[e] = 1;
    first[c3] = -3;
    first[v4] = -1;
    first[a4] = 3;
    let mut second = vec![0i64; ring.rank()];
    second[c2] = 1;
    second[c3] = -1;
    second[v4] = -1;
    second[a4] = 1;
    Ok([first, second])
}

pub fn alternating_level_one() -> Check {
    let name = "alternating_level_one_lattice";
    let reference = "the level-one ideal of A4 is free of rank two on the two published generators";
    let result = (|| -> Result<(bool, Value, Value)> {
        let ring = ring_of("A4")?;
        let gens = alternating_generators(&ring)?;
        let expected = IntegerLattice::from_generators(ring.rank(), &gens)?;
        let actual = jn_ideal(&ring, 1)?;
        Ok((actual == expected && actual.rank() == 2, json!(expected), json!(actual)))
    })();
    match result {
        Ok((ok, e, a)) => Check::new(name, reference, ok, e, a),
        Err(err) => Check::errored(name, reference, Value::Null, err),
    }
}

pub fn alternating_restriction() -> Check {
    let name = "alternating_restriction_to_klein";
    let reference = "[A4/C2] - [A4/C3] - [A4/V4] + 1 restricts to the Klein generator on V4";
    let expected = vec![-1i64, 1, 1, 1, -2];
    let result = (|| -> Result<(bool, Value)> {
        let ring = ring_of("A4")?;
        let [_, second] = alternating_generators(&ring)?;
        let x = ring.element(second)?;
        let v4 = classes_of_order(&ring, 4)[0];
        let (sub, incl) = subgroup_as_group(ring.group(), &ring.classes().classes[v4].representative);
        let sub_ring = BurnsideRing::new(sub)?;
        let res = restrict_along(&incl, &sub_ring, &x)?;
        Ok((res.coeffs() == expected.as_slice(), json!(res.coeffs())))
    })();
    match result {
        Ok((ok, a)) => Check::new(name, reference, ok, json!(expected), a),
        Err(err) => Check::errored(name, reference, json!(expected), err),
    }
}

/// `q*g` for `q: D8 → D8/Z(D8) ≅ V4`, with the D8 classes named by order,
/// cyclicity and normality.
pub fn dihedral_pullback() -> Check {
    let name = "dihedral_pullback_expansion";
    let reference = "pulling the Klein generator back to D8 gives W4 + W4' + C4 - C2 - 2";
    let result = (|| -> Result<(bool, Value, Value)> {
        let ring = ring_of("D8")?;
        let group = ring.group();
        let classes = &ring.classes().classes;
        let center = classes_of_order(&ring, 2)
            .into_iter()
            .find(|&c| classes[c].is_normal())
            .ok_or_else(|| Error::Invalid("D8 has no normal subgroup of order two".into()))?;
        let (quotient, q) = quotient_group(group, &classes[center].representative)?;
        let qring = BurnsideRing::new(quotient)?;
        let pulled = restrict_along(&q, &ring, &klein_generator(&qring))?;

        let mut expected = vec![0i64; ring.rank()];
        for c in classes_of_order(&ring, 4) {
            expected[c] = 1; // W4, W4' and C4
        }
        expected[center] = -1;
        expected[ring.classes().whole_class()] = -2;
        let cyclic4 = classes_of_order(&ring, 4).into_iter().filter(|&c| classes[c].is_cyclic()).count();
        let ok = pulled.coeffs() == expected.as_slice() && cyclic4 == 1 && classes_of_order(&ring, 4).len() == 3;
        Ok((ok, json!(expected), json!(pulled.coeffs())))
    })();
    match result {
        Ok((ok, e, a)) => Check::new(name, reference, ok, e, a),
        Err(err) => Check::errored(name, reference, Value::Null, err),
    }
}

/// Runs `per_group` on each named group and collects the names that fail.
fn over_groups(names: &[&str], mut per_group: impl FnMut(&Arc<BurnsideRing>) -> Result<Option<String>>) -> Vec<String> {
    let mut failures = Vec::new();
    for name in names {
        match ring_of(name).and_then(|r| per_group(&r)) {
            Ok(None) => {}
            Ok(Some(why)) => failures.push(format!("{name}: {why}")),
            Err(e) => failures.push(format!("{name}: {e}")),
        }
    }
    failures
}

fn summary(name: &str, reference: &str, count: usize, failures: Vec<String>) -> Check {
    Check::new(
        name,
        reference,
        failures.is_empty(),
        json!({ "groups": count, "failures": [] }),
        json!({ "groups": count, "failures": failures }),
    )
}

pub fn linearization_equals_level_one(names: &[&str]) -> Check {
    let failures = over_groups(names, |r| {
        let lin = linearization_kernel(r)?;
        let j1 = jn_ideal(r, 1)?;
        Ok((lin != j1).then(|| format!("kernel rank {} vs level-one rank {}", lin.rank(), j1.rank())))
    });
    summary(
        "linearization_kernel_is_level_one",
        "the level-one ideal is the kernel of linearization",
        names.len(),
        failures,
    )
}

pub fn level_zero_is_augmentation_kernel(names: &[&str]) -> Check {
    let failures = over_groups(names, |r| {
        Ok((augmentation_kernel(r)? != jn_ideal(r, 0)?).then(|| "lattices differ".to_string()))
    });
    summary(
        "level_zero_is_augmentation_ideal",
        "the level-zero ideal is the augmentation ideal",
        names.len(),
        failures,
    )
}

pub fn hausdorff_and_chain(names: &[&str]) -> Check {
    let failures = over_groups(names, |r| {
        let order = r.group().order();
        let log = usize::BITS as usize - 1 - order.leading_zeros() as usize;
        let level = max_nontrivial_level(r)?;
        if level > log {
            return Ok(Some(format!("level {level}, floor(log2 |G|) = {log}")));
        }
        if log > order - 1 {
            return Ok(Some(format!("floor(log2 |G|) = {log} exceeds |G| - 1")));
        }
        let lattices: Vec<IntegerLattice> = (0..=level + 1).map(|n| jn_ideal(r, n)).collect::<Result<_>>()?;
        for n in 0..=level {
            if !lattices[n + 1].is_sublattice_of(&lattices[n]) {
                return Ok(Some(format!("level {} not inside level {n}", n + 1)));
            }
        }
        if !lattices[level].is_zero() {
            return Ok(Some("filtration does not reach zero".into()));
        }
        Ok(None)
    });
    summary(
        "hausdorff_bound_and_chain",
        "the filtration is decreasing and vanishes by level floor(log2 |G|)",
        names.len(),
        failures,
    )
}

pub fn generalized_characters_vanish(names: &[&str], max_level: usize) -> Check {
    let failures = over_groups(names, |r| {
        let order = r.group().order();
        for p in (2..=order).filter(|&p| is_prime(p) && order % p == 0) {
            for n in 1..=max_level {
                for b in jn_ideal(r, n)?.basis() {
                    let chi = generalized_character(&r.element(b.clone())?, p, n)?;
                    if !chi.is_zero() {
                        return Ok(Some(format!("p = {p}, level {n}, generator {b:?}")));
                    }
                }
            }
        }
        Ok(None)
    });
    summary(
        "generalized_characters_vanish",
        "level-n generalized characters vanish on the level-n ideal",
        names.len(),
        failures,
    )
}

/// Every table-of-marks entry as a fixed-point count on an explicit coset
/// set, and every product of basis elements as an explicit product set.
pub fn marks_and_products_against_sets(names: &[&str]) -> Check {
    let failures = over_groups(names, |r| {
        let classes = &r.classes().classes;
        let sets: Vec<ConcreteGSet> = classes
            .iter()
            .map(|c| ConcreteGSet::cosets(r.group(), &c.representative))
            .collect::<Result<_>>()?;
        for (i, set) in sets.iter().enumerate() {
            for (j, k) in classes.iter().enumerate() {
                if set.fixed_points(&k.representative) as i64 != r.table_of_marks().get(i, j) {
                    return Ok(Some(format!("mark ({i}, {j})")));
                }
            }
        }
        for i in 0..sets.len() {
            for j in i..sets.len() {
                let explicit = sets[i].product(&sets[j])?.orbit_decompose(r)?;
                if explicit != r.basis(i).multiply(&r.basis(j))? {
                    return Ok(Some(format!("product ({i}, {j})")));
                }
            }
        }
        Ok(None)
    });
    summary(
        "marks_and_products_match_explicit_sets",
        "marks count fixed points and multiplication is the product of sets",
        names.len(),
        failures,
    )
}

/// Basis-pair compositions through explicit sets against the double coset
/// formula, for every triple drawn from `names`.
/// Compares the concrete composition with the double coset formula on every
/// triple of `names`, over all basis pairs or a seeded sample of
/// `max_pairs` of them when a triple has more.
pub fn composition_against_double_cosets(names: &[String], max_pairs: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut pairs = 0usize;
    let result = (|| -> Result<()> {
        let groups: Vec<Arc<FiniteGroup>> = names
            .iter()
            .map(|n| catalog_group(n).map(Arc::new))
            .collect::<Result<_>>()?;
        let rings: Vec<Arc<BurnsideRing>> = groups.iter().map(|g| BurnsideRing::new(g.clone())).collect::<Result<_>>()?;
        let mut spaces: HashMap<(usize, usize), Arc<BisetSpace>> = HashMap::new();
        let mut space = |a: usize, b: usize| -> Result<Arc<BisetSpace>> {
            if let Some(s) = spaces.get(&(a, b)) {
                return Ok(s.clone());
            }
            let s = BisetSpace::over(rings[a].clone(), groups[b].clone())?;
            spaces.insert((a, b), s.clone());
            Ok(s)
        };
        for g in 0..groups.len() {
            for h in 0..groups.len() {
                for i in 0..groups.len() {
                    let comp = Composition::with_output(space(g, h)?, space(h, i)?, space(g, i)?)?;
                    let (left, right) = (space(g, h)?.rank(), space(h, i)?.rank());
                    let total = left * right;
                    let chosen: Vec<usize> = if total <= max_pairs {
                        (0..total).collect()
                    } else {
                        rand::seq::index::sample(&mut rng, total, max_pairs).into_vec()
                    };
                    for k in chosen {
                        let (a, b) = (k / right, k % right);
                        pairs += 1;
                        if comp.basis_pair(a, b)? != comp.basis_pair_double_coset(a, b)? {
                            failures.push(format!("{}, {}, {}: pair ({a}, {b})", names[g], names[h], names[i]));
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = result {
        failures.push(e.to_string());
    }
    let triples = names.len().pow(3);
    Check::new(
        "composition_matches_double_cosets",
        "composition of bisets is computed by the product over the middle group",
        failures.is_empty(),
        json!({ "triples": triples, "failures": [] }),
        json!({ "triples": triples, "basis_pairs": pairs, "failures": failures }),
    )
}

/// A random element of `lattice` with small weights on its HNF basis.
fn random_member(lattice: &IntegerLattice, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut v = vec![0i64; lattice.ambient_rank()];
    for row in lattice.basis() {
        let w: i64 = rng.gen_range(-3..=3);
        for (x, b) in v.iter_mut().zip(row) {
            *x += w * b;
        }
    }
    v
}

/// `J_n` lattices memoized by level.
struct Levels {
    ring: Arc<BurnsideRing>,
    cache: Vec<IntegerLattice>,
}

impl Levels {
    fn new(ring: Arc<BurnsideRing>) -> Levels {
        Levels { ring, cache: Vec::new() }
    }

    fn get(&mut self, n: usize) -> Result<&IntegerLattice> {
        while self.cache.len() <= n {
            let next = jn_ideal(&self.ring, self.cache.len())?;
            self.cache.push(next);
        }
        Ok(&self.cache[n])
    }
}

/// A biset space with its bivariant levels memoized.
struct BivariantLevels {
    space: Arc<BisetSpace>,
    cache: Vec<IntegerLattice>,
}

impl BivariantLevels {
    fn new(space: Arc<BisetSpace>) -> BivariantLevels {
        BivariantLevels { space, cache: Vec::new() }
    }

    fn get(&mut self, n: usize) -> Result<&IntegerLattice> {
        while self.cache.len() <= n {
            let level = self.cache.len();
            let pre = jn_bivariant(&self.space, level)?;
            if pre != jn_bivariant_direct(&self.space, level)? {
                return Err(Error::Invalid(format!("bivariant level {level}: preimage and direct kernel differ")));
            }
            self.cache.push(pre);
        }
        Ok(&self.cache[n])
    }
}

/// A subgroup or quotient of the group under test, with its rings.
struct Neighbour {
    map: GroupHom,
    levels: Levels,
    bivariant: BivariantLevels,
}

/// Composition with one generating morphism as a matrix on basis coefficients.
type Matrix = Vec<Vec<i64>>;

fn apply(matrix: &Matrix, v: &[i64], width: usize) -> Vec<i64> {
    let mut out = vec![0i64; width];
    for (row, &c) in matrix.iter().zip(v) {
        if c != 0 {
            for (o, &m) in out.iter_mut().zip(row) {
                *o += c * m;
            }
        }
    }
    out
}

/// Rows are the images of basis elements under `x ↦ R ×_G x`.
fn left_matrix(r: &ConcreteGSet, fg: &DirectProduct, input: &Arc<BisetSpace>, out: &Arc<BisetSpace>) -> Result<Matrix> {
    (0..input.rank())
        .map(|i| Ok(compose_set_left(r, fg, &input.basis_element(i), out)?.coeffs().to_vec()))
        .collect()
}

fn right_matrix(input: &Arc<BisetSpace>, t: &ConcreteGSet, hk: &DirectProduct, out: &Arc<BisetSpace>) -> Result<Matrix> {
    (0..input.rank())
        .map(|i| Ok(compose_set_right(&input.basis_element(i), t, hk, out)?.coeffs().to_vec()))
        .collect()
}

/// Randomized closure checks for one group: products with arbitrary
/// elements, restriction along inclusions, quotients and conjugations,
/// induction from subgroups, and composition of bivariant elements with
/// generating morphisms on either side.
fn ideal_suite_for(ring: &Arc<BurnsideRing>, instances: usize, rng: &mut ChaCha8Rng, failures: &mut Vec<String>) -> Result<()> {
    let group = ring.group().clone();
    let c2 = Arc::new(catalog_group("C2")?);
    let e = Arc::new(trivial_group());
    let top = max_nontrivial_level(ring)? + 1;
    let mut levels = Levels::new(ring.clone());
    let right_space = BisetSpace::over(ring.clone(), c2.clone())?;
    let mut biv = BivariantLevels::new(right_space.clone());

    let classes = &ring.classes().classes;
    let mut subs: Vec<Neighbour> = Vec::new();
    for c in classes {
        let (k, incl) = subgroup_as_group(&group, &c.representative);
        let kring = BurnsideRing::new(k)?;
        subs.push(Neighbour {
            map: incl,
            levels: Levels::new(kring.clone()),
            bivariant: BivariantLevels::new(BisetSpace::over(kring, c2.clone())?),
        });
    }
    let mut quotients: Vec<Neighbour> = Vec::new();
    for c in classes.iter().filter(|c| c.is_normal()) {
        let (q, proj) = quotient_group(&group, &c.representative)?;
        let qring = BurnsideRing::new(q)?;
        quotients.push(Neighbour {
            map: proj,
            levels: Levels::new(qring.clone()),
            bivariant: BivariantLevels::new(BisetSpace::over(qring, c2.clone())?),
        });
    }

    // right-hand homomorphisms out of C2; the embedding e ↪ C2 has its own exhaustive check
    let flip = GroupHom::identity(c2.clone());
    let kill = GroupHom::to_trivial(c2.clone());
    let zero_c2 = GroupHom::new(c2.clone(), c2.clone(), vec![0, 0])?;
    let to_e = BisetSpace::over(ring.clone(), e.clone())?;
    let mut to_e_levels = BivariantLevels::new(to_e.clone());
    let mut same_levels = BivariantLevels::new(right_space.clone());
    let c2c2 = direct_product(&c2, &c2, usize::MAX)?;
    let c2e = direct_product(&c2, &e, usize::MAX)?;
    let right_morphisms: Vec<(ConcreteGSet, DirectProduct, bool)> = vec![
        (hom_biset_set(&c2c2, &flip)?, c2c2.clone(), true),
        (hom_biset_set(&c2c2, &zero_c2)?, c2c2.clone(), true),
        (hom_biset_set(&c2e, &kill)?, c2e.clone(), false),
    ];
    let mut right_cache: HashMap<usize, Matrix> = HashMap::new();
    let mut left_cache: HashMap<(u8, usize), Matrix> = HashMap::new();

    for instance in 0..instances {
        let n = rng.gen_range(0..=top);
        let fail = |what: &str| format!("instance {instance}, level {n}: {what}");

        // x·y ∈ J_n
        let y = ring.element(random_member(levels.get(n)?, rng))?;
        let x = ring.element((0..ring.rank()).map(|_| rng.gen_range(-3..=3)).collect())?;
        let xy = x.multiply(&y)?;
        if !jn_membership(&xy, n) || !levels.get(n)?.contains(xy.coeffs()) {
            failures.push(fail("product left the ideal"));
        }

        // restriction to a subgroup and induction back
        let k = rng.gen_range(0..subs.len());
        let sub = &mut subs[k];
        let kring = sub.levels.ring.clone();
        if !jn_membership(&restrict_along(&sub.map, &kring, &y)?, n) {
            failures.push(fail("restriction to a subgroup left the ideal"));
        }
        let z = kring.element(random_member(sub.levels.get(n)?, rng))?;
        if !jn_membership(&induce(&sub.map, &z, ring)?, n) {
            failures.push(fail("induction from a subgroup left the ideal"));
        }

        // pullback along a quotient map
        let qi = rng.gen_range(0..quotients.len());
        let quo = &mut quotients[qi];
        let qring = quo.levels.ring.clone();
        let w = qring.element(random_member(quo.levels.get(n)?, rng))?;
        if !jn_membership(&restrict_along(&quo.map, ring, &w)?, n) {
            failures.push(fail("pullback along a quotient left the ideal"));
        }

        // conjugation
        let conj = GroupHom::conjugation(group.clone(), rng.gen_range(0..group.order()));
        if !jn_membership(&restrict_along(&conj, ring, &y)?, n) {
            failures.push(fail("conjugation left the ideal"));
        }

        // bivariant: S ∈ J_n(G, C2) composed with generating morphisms
        let s = random_member(biv.get(n)?, rng);

        // hom_biset(K ↪ G) ×_G S ∈ J_n(K, C2)
        let key = (0u8, k);
        if let std::collections::hash_map::Entry::Vacant(e) = left_cache.entry(key) {
            let kg = direct_product(sub.map.source(), &group, usize::MAX)?;
            let r = hom_biset_set(&kg, &sub.map)?;
            e.insert(left_matrix(&r, &kg, &right_space, &sub.bivariant.space)?);
        }
        let out = apply(&left_cache[&key], &s, sub.bivariant.space.rank());
        if !sub.bivariant.get(n)?.contains(&out) {
            failures.push(fail("restriction of a bivariant element left the ideal"));
        }

        // transfer_biset(K ↪ G) ×_K S' ∈ J_n(G, C2)
        let s_k = random_member(sub.bivariant.get(n)?, rng);
        let key = (1u8, k);
        if let std::collections::hash_map::Entry::Vacant(e) = left_cache.entry(key) {
            let gk = direct_product(&group, sub.map.source(), usize::MAX)?;
            let r = transfer_biset_set(&gk, &sub.map)?;
            e.insert(left_matrix(&r, &gk, &sub.bivariant.space, &right_space)?);
        }
        let out = apply(&left_cache[&key], &s_k, right_space.rank());
        if !biv.get(n)?.contains(&out) {
            failures.push(fail("induction of a bivariant element left the ideal"));
        }

        // hom_biset(G → G/N) ×_{G/N} S'' ∈ J_n(G, C2)
        let s_q = random_member(quo.bivariant.get(n)?, rng);
        let key = (2u8, qi);
        if let std::collections::hash_map::Entry::Vacant(e) = left_cache.entry(key) {
            let gq = direct_product(&group, quo.map.target(), usize::MAX)?;
            let r = hom_biset_set(&gq, &quo.map)?;
            e.insert(left_matrix(&r, &gq, &quo.bivariant.space, &right_space)?);
        }
        let out = apply(&left_cache[&key], &s_q, right_space.rank());
        if !biv.get(n)?.contains(&out) {
            failures.push(fail("pullback of a bivariant element left the ideal"));
        }

        // S ×_{C2} T for T a generating morphism out of C2
        let t = rng.gen_range(0..right_morphisms.len());
        let (t_set, t_product, lands_in_c2) = &right_morphisms[t];
        let (target_space, target_levels) = if *lands_in_c2 {
            (&right_space, &mut same_levels)
        } else {
            (&to_e, &mut to_e_levels)
        };
        if let std::collections::hash_map::Entry::Vacant(e) = right_cache.entry(t) {
            e.insert(right_matrix(&right_space, t_set, t_product, target_space)?);
        }
        let out = apply(&right_cache[&t], &s, target_space.rank());
        if !target_levels.get(n)?.contains(&out) {
            failures.push(fail("right composition with a homomorphism left the ideal"));
        }
    }
    Ok(())
}

pub fn ideal_suite(names: &[&str], max_order: usize, instances: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut groups = 0;
    for name in names {
        let ring = match ring_of(name) {
            Ok(r) if r.group().order() <= max_order => r,
            Ok(_) => continue,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        groups += 1;
        let mut local = Vec::new();
        if let Err(e) = ideal_suite_for(&ring, instances, &mut rng, &mut local) {
            local.push(e.to_string());
        }
        failures.extend(local.into_iter().map(|f| format!("{name}: {f}")));
    }
    Check::new(
        "ideal_and_functoriality_suite",
        "the filtration is a two-sided ideal preserved by restriction, induction and composition",
        failures.is_empty(),
        json!({ "groups": groups, "instances_per_group": instances, "failures": [] }),
        json!({ "groups": groups, "instances_per_group": instances, "failures": failures }),
    )
}

/// Exhaustive check that `S ×_{C2} C2` lies in `J_n(G)` for every HNF
/// generator `S` of `J_n(G, C2)`, where `C2` is the `(C2, e)`-biset of the
/// embedding `e ↪ C2`. This fails for V4 already at level 1: the difference
/// of the graph of `C ↠ C2` and `C × e` has zero quotient, but as a plain
/// `G`-set it is `[G/e] - 2[G/C]`. Membership of `S` is a condition on
/// `S/C2`, and a map `S → S/C2` says nothing about fixed points of a
/// virtual difference.
pub fn right_transfer_closure(names: &[&str], max_order: usize) -> Check {
    let mut failures = Vec::new();
    let mut groups = 0;
    let mut generators = 0;
    for name in names {
        let ring = match ring_of(name) {
            Ok(r) if r.group().order() <= max_order => r,
            Ok(_) => continue,
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                continue;
            }
        };
        groups += 1;
        let result = (|| -> Result<()> {
            let c2 = Arc::new(catalog_group("C2")?);
            let e = Arc::new(trivial_group());
            let point = GroupHom::new(e.clone(), c2.clone(), vec![c2.identity()])?;
            let c2e = direct_product(&c2, &e, usize::MAX)?;
            let t = transfer_biset_set(&c2e, &point)?;
            let input = BisetSpace::over(ring.clone(), c2)?;
            let out = BisetSpace::over(ring.clone(), e)?;
            let matrix = right_matrix(&input, &t, &c2e, &out)?;
            let mut biv = BivariantLevels::new(input.clone());
            let mut levels = Levels::new(ring.clone());
            for n in 0..=max_nontrivial_level(&ring)? + 1 {
                let basis = biv.get(n)?.basis().to_vec();
                for s in basis {
                    generators += 1;
                    let image = apply(&matrix, &s, out.rank());
                    if !levels.get(n)?.contains(&image) {
                        failures.push(format!("{name}: level {n}: {s:?} maps to {image:?}"));
                    }
                }
            }
            Ok(())
        })();
        if let Err(e) = result {
            failures.push(format!("{name}: {e}"));
        }
    }
    Check::new(
        "bivariant_right_transfer_closure",
        "composing J_n(G, C2) on the right with the embedding e -> C2 stays in J_n(G)",
        failures.is_empty(),
        json!({ "groups": groups, "failures": [] }),
        json!({ "groups": groups, "generators": generators, "failures": failures }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_examples_pass() {
        for check in [
            klein_level_one(None),
            klein_product(),
            alternating_level_one(),
            alternating_restriction(),
            dihedral_pullback(),
        ] {
            assert!(check.passed(), "{}: {:?} vs {:?}", check.name, check.expected, check.actual);
        }
    }

    #[test]
    fn injected_fault_is_localized() {
        let options = VerifyOptions {
            fault: Some(Fault::KleinSign),
            ideal_instances: 2,
            ideal_max_order: 4,
            composition_groups: vec!["C2".into()],
            ..VerifyOptions::default()
        };
        let names = |report: &VerificationReport| -> Vec<String> { report.failures().map(|c| c.name.clone()).collect() };
        let faulty = names(&run(&options));
        let clean = names(&run(&VerifyOptions { fault: None, ..options }));
        let added: Vec<&String> = faulty.iter().filter(|n| !clean.contains(n)).collect();
        assert_eq!(added, ["klein_level_one_generator"]);
        assert_eq!(faulty.len(), clean.len() + 1);
    }

    #[test]
    fn small_ideal_suite() {
        let check = ideal_suite(&["V4", "S3", "D8"], 8, 10, 7);
        assert!(check.passed(), "{:?}", check.actual);
    }

    #[test]
    fn right_transfer_fails_exactly_where_expected() {
        // cyclic groups of odd order have no room for the counterexample
        assert!(right_transfer_closure(&["C3", "C5", "trivial"], 16).passed());
        let check = right_transfer_closure(&["V4"], 16);
        assert!(!check.passed());
        let failures = check.actual["failures"].as_array().unwrap();
        assert!(failures.iter().all(|f| f.as_str().unwrap().starts_with("V4: level ")));
        assert!(failures.iter().any(|f| f.as_str().unwrap().starts_with("V4: level 1:")));
    }
}
