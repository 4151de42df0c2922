//! Morphism groups `A(G,H)` of the Burnside category.
//!
//! A `(G,H)`-biset is a `G×H`-set through `(g,h)·s = g s h⁻¹`. Elements of
//! `A(G,H)` are integer combinations of the transitive bisets on which `H`
//! acts freely, i.e. of classes of `U ≤ G×H` with `U ∩ ({e}×H) = e`. Every
//! such `U` is the graph of a homomorphism from `p₁(U) ≤ G` to `H`; labels
//! use that description.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::error::{Error, Result};
use crate::filtration::jn_ideal;
use crate::group::{DirectProduct, ElementSet, FiniteGroup, GroupHom, DEFAULT_ORDER_CAP};
use crate::lattice::IntegerLattice;
use crate::oracle::{twisted_product, ConcreteGSet};
use crate::subgroup::Subgroup;

/// The basis of `A(G,H)` inside `A(G×H)`, with the quotient map to `A(G)`.
pub struct BisetSpace {
    product: DirectProduct,
    product_ring: Arc<BurnsideRing>,
    source_ring: Arc<BurnsideRing>,
    /// product-ring class of each basis element, increasing
    basis: Vec<usize>,
    index_of: HashMap<usize, usize>,
    /// source-ring class of `p₁(U)` for each basis element
    quotient: Vec<usize>,
}

impl fmt::Debug for BisetSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BisetSpace")
            .field("source", &self.product.left.name())
            .field("target", &self.product.right.name())
            .field("rank", &self.rank())
            .finish()
    }
}

fn is_right_free(product: &DirectProduct, sub: &Subgroup) -> bool {
    let e = product.left.identity();
    sub.elements()
        .iter()
        .all(|&x| x == product.group.identity() || product.split(x).0 != e)
}

fn first_projection(product: &DirectProduct, sub: &Subgroup) -> Subgroup {
    Subgroup::from_mask(ElementSet::from_elements(
        product.left.order(),
        sub.elements().iter().map(|&x| product.split(x).0),
    ))
}

impl BisetSpace {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>) -> Result<Arc<BisetSpace>> {
        Self::with_cap(source, target, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, cap: usize) -> Result<Arc<BisetSpace>> {
        let source_ring = BurnsideRing::with_cap(source, cap)?;
        Self::over(source_ring, target)
    }

    /// Reuses an existing ring for the source group; the cap is the ring's.
    pub fn over(source_ring: Arc<BurnsideRing>, target: Arc<FiniteGroup>) -> Result<Arc<BisetSpace>> {
        let cap = source_ring.cap();
        let product = DirectProduct::new(source_ring.group().clone(), target, cap)?;
        let product_ring = BurnsideRing::with_cap(product.group.clone(), cap)?;
        let mut basis = Vec::new();
        let mut quotient = Vec::new();
        for (i, class) in product_ring.classes().classes.iter().enumerate() {
            if is_right_free(&product, &class.representative) {
                basis.push(i);
                let p1 = first_projection(&product, &class.representative);
                quotient.push(source_ring.classes().class_of(&p1));
            }
        }
        let index_of = basis.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        Ok(Arc::new(BisetSpace {
            product,
            product_ring,
            source_ring,
            basis,
            index_of,
            quotient,
        }))
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.product.left
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.product.right
    }

    pub fn product(&self) -> &DirectProduct {
        &self.product
    }

    pub fn product_ring(&self) -> &Arc<BurnsideRing> {
        &self.product_ring
    }

    pub fn source_ring(&self) -> &Arc<BurnsideRing> {
        &self.source_ring
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Product-ring class indices of the basis, in canonical order.
    pub fn basis_classes(&self) -> &[usize] {
        &self.basis
    }

    /// Representative stabilizer of the `i`-th basis biset.
    pub fn basis_subgroup(&self, i: usize) -> &Subgroup {
        &self.product_ring.classes().classes[self.basis[i]].representative
    }

    /// Basis position of the class of `sub`; fails when `H` does not act freely.
    pub fn basis_index_of(&self, sub: &Subgroup) -> Result<usize> {
        let class = self.product_ring.classes().class_of(sub);
        self.index_of.get(&class).copied().ok_or_else(|| {
            Error::Invalid(format!(
                "subgroup of order {} meets the right factor nontrivially",
                sub.order()
            ))
        })
    }

    /// `(K ≤ G, φ: K→H)` for the graph `U = {(k, φ(k))}`.
    pub fn label(&self, i: usize) -> String {
        let p = &self.product;
        let mut pairs: Vec<(usize, usize)> = self.basis_subgroup(i).elements().iter().map(|&x| p.split(x)).collect();
        pairs.sort_unstable();
        let k: Vec<String> = pairs.iter().map(|&(g, _)| p.left.label(g)).collect();
        let phi: Vec<String> = pairs
            .iter()
            .map(|&(g, h)| format!("{}↦{}", p.left.label(g), p.right.label(h)))
            .collect();
        format!(
            "({{{}}} ≤ {}, φ: {})",
            k.join(","),
            p.left.name().unwrap_or("G"),
            phi.join(",")
        )
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.rank()).map(|i| self.label(i)).collect()
    }

    /// Source-ring class of `[G/p₁(U_i)]`.
    pub fn quotient_class(&self, i: usize) -> usize {
        self.quotient[i]
    }

    /// Row `i` is the coefficient vector of the quotient of basis element `i`.
    pub fn quotient_matrix(&self) -> Vec<Vec<i64>> {
        self.quotient
            .iter()
            .map(|&c| (0..self.source_ring.rank()).map(|j| i64::from(j == c)).collect())
            .collect()
    }

    pub fn zero(self: &Arc<Self>) -> BisetElement {
        BisetElement {
            space: self.clone(),
            coeffs: vec![0; self.rank()],
        }
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> BisetElement {
        let mut x = self.zero();
        x.coeffs[i] = 1;
        x
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<i64>) -> Result<BisetElement> {
        if coeffs.len() != self.rank() {
            return Err(Error::Invalid(format!(
                "{} coefficients for a biset space of rank {}",
                coeffs.len(),
                self.rank()
            )));
        }
        Ok(BisetElement {
            space: self.clone(),
            coeffs,
        })
    }

    /// The transitive biset `G×H/U` for a free `U`.
    pub fn transitive(self: &Arc<Self>, sub: &Subgroup) -> Result<BisetElement> {
        Ok(self.basis_element(self.basis_index_of(sub)?))
    }

    /// The basis biset as an explicit `G×H`-set.
    pub fn realize(&self, i: usize) -> Result<ConcreteGSet> {
        ConcreteGSet::cosets(&self.product.group, self.basis_subgroup(i))
    }

    /// An element of `A(G×H)` supported on free classes, as a biset element.
    pub fn from_product_element(self: &Arc<Self>, x: &BurnsideElement) -> Result<BisetElement> {
        if !x.ring().same_ring(&self.product_ring) {
            return Err(Error::GroupMismatch("element is not over this product".into()));
        }
        let mut coeffs = vec![0; self.rank()];
        for (c, &v) in x.coeffs().iter().enumerate() {
            if v == 0 {
                continue;
            }
            let k = self.index_of.get(&c).ok_or_else(|| {
                Error::Invalid("an orbit has point stabilizers meeting the right factor".into())
            })?;
            coeffs[*k] = v;
        }
        self.element(coeffs)
    }

    /// Free part of an explicit `G×H`-set.
    pub fn decompose(self: &Arc<Self>, set: &ConcreteGSet) -> Result<BisetElement> {
        self.from_product_element(&set.orbit_decompose(&self.product_ring)?)
    }

    fn same_space(&self, other: &BisetSpace) -> bool {
        std::ptr::eq(self, other)
            || (self.source().same_table(other.source()) && self.target().same_table(other.target()))
    }
}

#[derive(Clone)]
pub struct BisetElement {
    space: Arc<BisetSpace>,
    coeffs: Vec<i64>,
}

impl fmt::Debug for BisetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BisetElement").field("coeffs", &self.coeffs).finish()
    }
}

impl PartialEq for BisetElement {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_space(&other.space) && self.coeffs == other.coeffs
    }
}

impl fmt::Display for BisetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if wrote { "+" } else { "" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            write!(f, "{sign}{mag}{}", self.space.label(i))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl BisetElement {
    pub fn space(&self) -> &Arc<BisetSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn checked_add(&self, other: &BisetElement) -> Result<BisetElement> {
        if !self.space.same_space(&other.space) {
            return Err(Error::GroupMismatch("bisets over different group pairs".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("biset sum")))
            .collect::<Result<_>>()?;
        Ok(BisetElement {
            space: self.space.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, k: i64) -> Result<BisetElement> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow("biset scale")))
            .collect::<Result<_>>()?;
        Ok(BisetElement {
            space: self.space.clone(),
            coeffs,
        })
    }

    /// The same element viewed in `A(G×H)`.
    pub fn to_product_element(&self) -> BurnsideElement {
        let ring = self.space.product_ring();
        let mut coeffs = vec![0; ring.rank()];
        for (k, &c) in self.space.basis.iter().enumerate() {
            coeffs[c] = self.coeffs[k];
        }
        ring.element(coeffs).expect("rank matches")
    }
}

pub fn biset_basis(space: &BisetSpace) -> Vec<&Subgroup> {
    (0..space.rank()).map(|i| space.basis_subgroup(i)).collect()
}

/// `S ↦ S/H`, extending `[G×H/U] ↦ [G/p₁(U)]` linearly.
pub fn quotient_to_burnside(s: &BisetElement) -> Result<BurnsideElement> {
    let space = s.space();
    let ring = space.source_ring();
    let mut coeffs = vec![0i64; ring.rank()];
    for (i, &c) in s.coeffs().iter().enumerate() {
        let slot = &mut coeffs[space.quotient_class(i)];
        *slot = slot.checked_add(c).ok_or(Error::Overflow("quotient"))?;
    }
    ring.element(coeffs)
}

/// `G` as a `(G,G)`-biset.
pub fn identity_biset(space: &Arc<BisetSpace>) -> Result<BisetElement> {
    if !space.source().same_table(space.target()) {
        return Err(Error::GroupMismatch("identity biset needs equal groups".into()));
    }
    let p = space.product();
    let diag = ElementSet::from_elements(p.group.order(), p.left.elements().map(|g| p.pair(g, g)));
    space.transitive(&Subgroup::from_mask(diag))
}

/// `H` with `G` acting on the left through `φ: G → H`; stabilizer `{(g, φ(g))}`.
pub fn hom_biset(space: &Arc<BisetSpace>, phi: &GroupHom) -> Result<BisetElement> {
    if !phi.source().same_table(space.source()) || !phi.target().same_table(space.target()) {
        return Err(Error::GroupMismatch("homomorphism does not match the biset space".into()));
    }
    let p = space.product();
    let graph = ElementSet::from_elements(
        p.group.order(),
        p.left.elements().map(|g| p.pair(g, phi.apply(g))),
    );
    space.transitive(&Subgroup::from_mask(graph))
}

/// `G` with `H` acting on the right through an injective `θ: H → G`;
/// stabilizer `{(θ(h), h)}`.
pub fn transfer_biset(space: &Arc<BisetSpace>, theta: &GroupHom) -> Result<BisetElement> {
    if let Some((a, b)) = theta.injectivity_witness() {
        return Err(Error::NotInjective(a, b));
    }
    if !theta.source().same_table(space.target()) || !theta.target().same_table(space.source()) {
        return Err(Error::GroupMismatch("embedding does not match the biset space".into()));
    }
    let p = space.product();
    let graph = ElementSet::from_elements(
        p.group.order(),
        p.right.elements().map(|h| p.pair(theta.apply(h), h)),
    );
    space.transitive(&Subgroup::from_mask(graph))
}

/// Composition `A(G,H) × A(H,I) → A(G,I)` with the products of basis pairs
/// cached.
pub struct Composition {
    left: Arc<BisetSpace>,
    right: Arc<BisetSpace>,
    out: Arc<BisetSpace>,
    cache: Mutex<HashMap<(usize, usize), Vec<i64>>>,
}

impl Composition {
    pub fn new(left: Arc<BisetSpace>, right: Arc<BisetSpace>) -> Result<Composition> {
        let out = BisetSpace::over(left.source_ring().clone(), right.target().clone())?;
        Self::with_output(left, right, out)
    }

    pub fn with_output(left: Arc<BisetSpace>, right: Arc<BisetSpace>, out: Arc<BisetSpace>) -> Result<Composition> {
        if !left.target().same_table(right.source()) {
            return Err(Error::GroupMismatch("middle groups of a composition differ".into()));
        }
        if !out.source().same_table(left.source()) || !out.target().same_table(right.target()) {
            return Err(Error::GroupMismatch("output space does not match the composition".into()));
        }
        Ok(Composition {
            left,
            right,
            out,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn output(&self) -> &Arc<BisetSpace> {
        &self.out
    }

    /// Basis pair composed through explicit sets: realize both bisets, take
    /// the middle-group orbits of the product, decompose into orbits.
    pub fn basis_pair(&self, i: usize, j: usize) -> Result<Vec<i64>> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(&(i, j)) {
            return Ok(v.clone());
        }
        let s = self.left.realize(i)?;
        let t = self.right.realize(j)?;
        let st = twisted_product(&s, self.left.product(), &t, self.right.product(), self.out.product())?;
        let coeffs = self.out.decompose(&st)?.coeffs;
        self.cache.lock().expect("cache lock").insert((i, j), coeffs.clone());
        Ok(coeffs)
    }

    /// Basis pair composed by the double coset formula
    /// `Σ_{h ∈ p₂(L)\H/p₁(M)} [G×I / L * ^(h,1)M]`, where
    /// `L * M = {(g,i) : (g,h) ∈ L, (h,i) ∈ M for some h}`.
    pub fn basis_pair_double_coset(&self, i: usize, j: usize) -> Result<Vec<i64>> {
        let (lp, rp, op) = (self.left.product(), self.right.product(), self.out.product());
        let middle = &lp.right;
        let l = self.left.basis_subgroup(i);
        let m = self.right.basis_subgroup(j);
        let p2l: Vec<usize> = dedup(l.elements().iter().map(|&x| lp.split(x).1));
        let p1m: Vec<usize> = dedup(m.elements().iter().map(|&x| rp.split(x).0));

        let mut coeffs = vec![0i64; self.out.rank()];
        let mut covered = vec![false; middle.order()];
        for h in middle.elements() {
            if covered[h] {
                continue;
            }
            for &a in &p2l {
                for &b in &p1m {
                    covered[middle.mul(middle.mul(a, h), b)] = true;
                }
            }
            // ^(h,1)M = {(h a h⁻¹, i) : (a, i) ∈ M}, indexed by first coordinate
            let hinv = middle.inv(h);
            let mut over: HashMap<usize, Vec<usize>> = HashMap::new();
            for &x in m.elements() {
                let (a, k) = rp.split(x);
                over.entry(middle.conjugate(a, hinv)).or_default().push(k);
            }
            let mut star = ElementSet::empty(op.group.order());
            for &x in l.elements() {
                let (g, b) = lp.split(x);
                for &k in over.get(&b).map(Vec::as_slice).unwrap_or(&[]) {
                    star.insert(op.pair(g, k));
                }
            }
            let class = self.out.product_ring().classes().class_of_mask(&star).ok_or_else(|| {
                Error::Invalid("double coset product is not a subgroup".into())
            })?;
            let k = self.out.index_of.get(&class).ok_or_else(|| {
                Error::Invalid("double coset product is not free on the right".into())
            })?;
            coeffs[*k] += 1;
        }
        Ok(coeffs)
    }

    fn bilinear(
        &self,
        s: &BisetElement,
        t: &BisetElement,
        pair: impl Fn(usize, usize) -> Result<Vec<i64>>,
    ) -> Result<BisetElement> {
        if !s.space.same_space(&self.left) || !t.space.same_space(&self.right) {
            return Err(Error::GroupMismatch("operands do not match the composition".into()));
        }
        let mut acc = vec![0i64; self.out.rank()];
        for (i, &a) in s.coeffs().iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in t.coeffs().iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let ab = a.checked_mul(b).ok_or(Error::Overflow("composition"))?;
                accumulate(&mut acc, &pair(i, j)?, ab)?;
            }
        }
        self.out.element(acc)
    }

    pub fn apply(&self, s: &BisetElement, t: &BisetElement) -> Result<BisetElement> {
        self.bilinear(s, t, |i, j| self.basis_pair(i, j))
    }

    pub fn apply_double_coset(&self, s: &BisetElement, t: &BisetElement) -> Result<BisetElement> {
        self.bilinear(s, t, |i, j| self.basis_pair_double_coset(i, j))
    }
}

fn accumulate(acc: &mut [i64], part: &[i64], k: i64) -> Result<()> {
    for (slot, &v) in acc.iter_mut().zip(part) {
        *slot = v
            .checked_mul(k)
            .and_then(|w| slot.checked_add(w))
            .ok_or(Error::Overflow("composition"))?;
    }
    Ok(())
}

/// `R ×_G S` for an explicit `(F,G)`-biset `R`, landing in `out = A(F,H)`.
pub fn compose_set_left(
    r: &ConcreteGSet,
    fg: &DirectProduct,
    s: &BisetElement,
    out: &Arc<BisetSpace>,
) -> Result<BisetElement> {
    let mut acc = vec![0i64; out.rank()];
    for (i, &c) in s.coeffs().iter().enumerate() {
        if c != 0 {
            let set = twisted_product(r, fg, &s.space.realize(i)?, s.space.product(), out.product())?;
            accumulate(&mut acc, out.decompose(&set)?.coeffs(), c)?;
        }
    }
    out.element(acc)
}

/// `S ×_H T` for an explicit `(H,K)`-biset `T`, landing in `out = A(G,K)`.
pub fn compose_set_right(
    s: &BisetElement,
    t: &ConcreteGSet,
    hk: &DirectProduct,
    out: &Arc<BisetSpace>,
) -> Result<BisetElement> {
    let mut acc = vec![0i64; out.rank()];
    for (i, &c) in s.coeffs().iter().enumerate() {
        if c != 0 {
            let set = twisted_product(&s.space.realize(i)?, s.space.product(), t, hk, out.product())?;
            accumulate(&mut acc, out.decompose(&set)?.coeffs(), c)?;
        }
    }
    out.element(acc)
}

fn dedup(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = it.collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// `S ×_H T` through explicit sets.
pub fn compose(s: &BisetElement, t: &BisetElement) -> Result<BisetElement> {
    Composition::new(s.space.clone(), t.space.clone())?.apply(s, t)
}

/// `S ×_H T` through the double coset formula.
pub fn compose_double_coset(s: &BisetElement, t: &BisetElement) -> Result<BisetElement> {
    Composition::new(s.space.clone(), t.space.clone())?.apply_double_coset(s, t)
}

/// `J_n(G,H)`: the preimage of `J_n(G)` under the quotient to `A(G)`.
pub fn jn_bivariant(space: &BisetSpace, n: usize) -> Result<IntegerLattice> {
    let target = jn_ideal(space.source_ring(), n)?;
    IntegerLattice::preimage(&space.quotient_matrix(), &target)
}

/// `J_n(G,H)` read off directly: the marks of `S/H` vanish on every subgroup
/// of `G` with at most `n` generators.
pub fn jn_bivariant_direct(space: &BisetSpace, n: usize) -> Result<IntegerLattice> {
    let ring = space.source_ring();
    let cols: Vec<usize> = ring
        .classes()
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.min_generators <= n)
        .map(|(j, _)| j)
        .collect();
    let table = ring.table_of_marks();
    let matrix: Vec<Vec<i64>> = (0..space.rank())
        .map(|i| cols.iter().map(|&j| table.get(space.quotient_class(i), j)).collect())
        .collect();
    IntegerLattice::left_kernel(&matrix, cols.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_group;
    use crate::filtration::permutation_character;
    use crate::oracle::h_quotient;
    use crate::subgroup::subgroup_as_group;

    fn group(name: &str) -> Arc<FiniteGroup> {
        Arc::new(catalog_group(name).unwrap())
    }

    fn space(g: &str, h: &str) -> Arc<BisetSpace> {
        BisetSpace::new(group(g), group(h)).unwrap()
    }

    #[test]
    fn basis_sizes() {
        for name in ["C2", "S3", "D8", "A4"] {
            let s = space(name, "trivial");
            assert_eq!(s.rank(), s.source_ring().rank());
            let e = space("trivial", name);
            assert_eq!(e.rank(), 1);
        }
        assert_eq!(space("C2", "C2").rank(), 3);
    }

    #[test]
    fn quotients_of_generators() {
        let sp = space("S3", "S3");
        let id = identity_biset(&sp).unwrap();
        let q = quotient_to_burnside(&id).unwrap();
        assert_eq!(q, sp.source_ring().one());

        let v4 = group("V4");
        let ring = BurnsideRing::new(v4.clone()).unwrap();
        let c = ring.classes().classes[1].representative.clone();
        let (cg, incl) = subgroup_as_group(&v4, &c);
        let tr = transfer_biset(&BisetSpace::new(v4.clone(), cg.clone()).unwrap(), &incl).unwrap();
        assert_eq!(quotient_to_burnside(&tr).unwrap().coeffs(), &[0, 1, 0, 0, 0]);

        let to_e = GroupHom::to_trivial(v4.clone());
        let h = hom_biset(&BisetSpace::new(v4.clone(), to_e.target().clone()).unwrap(), &to_e).unwrap();
        assert_eq!(quotient_to_burnside(&h).unwrap(), quotient_to_burnside(&h).unwrap().ring().one());

        let pinch = GroupHom::to_trivial(v4.clone());
        let e = pinch.target().clone();
        let point = GroupHom::new(e.clone(), v4.clone(), vec![0]).unwrap();
        let free = transfer_biset(&BisetSpace::new(v4.clone(), e.clone()).unwrap(), &point).unwrap();
        assert_eq!(quotient_to_burnside(&free).unwrap().coeffs(), &[1, 0, 0, 0, 0]);
        assert!(matches!(
            transfer_biset(&BisetSpace::new(e, v4).unwrap(), &pinch),
            Err(Error::NotInjective(..))
        ));
    }

    #[test]
    fn transfer_then_collapse() {
        // [V4/C] arises as C ↪ V4 followed by C → e
        let v4 = group("V4");
        let ring = BurnsideRing::new(v4.clone()).unwrap();
        for k in 1..=3 {
            let c = ring.classes().classes[k].representative.clone();
            let (cg, incl) = subgroup_as_group(&v4, &c);
            let tr = transfer_biset(&BisetSpace::new(v4.clone(), cg.clone()).unwrap(), &incl).unwrap();
            let collapse = GroupHom::to_trivial(cg.clone());
            let h = hom_biset(&BisetSpace::new(cg, collapse.target().clone()).unwrap(), &collapse).unwrap();
            let st = compose(&tr, &h).unwrap();
            let q = quotient_to_burnside(&st).unwrap();
            assert_eq!(q, ring.basis(k));
        }
    }

    #[test]
    fn identity_laws_and_formula() {
        let names = ["C2", "C3", "V4", "S3", "C4"];
        for g in names {
            for h in names {
                let sp = space(g, h);
                let left_id = identity_biset(&space(g, g)).unwrap();
                let right_id = identity_biset(&space(h, h)).unwrap();
                for i in 0..sp.rank() {
                    let b = sp.basis_element(i);
                    assert_eq!(compose(&left_id, &b).unwrap(), b);
                    assert_eq!(compose(&b, &right_id).unwrap(), b);
                }
            }
        }
        for (g, h, k) in [("S3", "C2", "C3"), ("V4", "V4", "C2"), ("C4", "C2", "V4"), ("S3", "S3", "C2")] {
            let comp = Composition::new(space(g, h), space(h, k)).unwrap();
            for i in 0..comp.left.rank() {
                for j in 0..comp.right.rank() {
                    assert_eq!(
                        comp.basis_pair(i, j).unwrap(),
                        comp.basis_pair_double_coset(i, j).unwrap(),
                        "{g},{h},{k} pair ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn quotient_is_composition_with_collapse() {
        for (g, h) in [("S3", "C2"), ("V4", "C2"), ("C4", "S3")] {
            let sp = space(g, h);
            let collapse = GroupHom::to_trivial(sp.target().clone());
            let to_e = hom_biset(&BisetSpace::new(sp.target().clone(), collapse.target().clone()).unwrap(), &collapse).unwrap();
            for i in 0..sp.rank() {
                let b = sp.basis_element(i);
                let st = compose(&b, &to_e).unwrap();
                assert_eq!(
                    quotient_to_burnside(&st).unwrap().coeffs(),
                    quotient_to_burnside(&b).unwrap().coeffs()
                );
            }
        }
    }

    #[test]
    fn characters_agree_with_concrete_quotient() {
        for (g, h) in [("S3", "C2"), ("D8", "C2"), ("C4", "V4"), ("Q8", "C2")] {
            let sp = space(g, h);
            for i in 0..sp.rank() {
                let x = sp.realize(i).unwrap();
                let quotient_set = h_quotient(&x, sp.product()).unwrap();
                let concrete = quotient_set.orbit_decompose(sp.source_ring()).unwrap();
                let formula = quotient_to_burnside(&sp.basis_element(i)).unwrap();
                assert_eq!(permutation_character(&concrete), permutation_character(&formula));
                assert_eq!(concrete, formula);
            }
        }
    }

    #[test]
    fn bivariant_levels() {
        let sp = space("V4", "C2");
        let j1 = jn_bivariant(&sp, 1).unwrap();
        assert_eq!(j1.rank(), sp.rank() - sp.source_ring().rank() + 1);
        assert_eq!(j1, jn_bivariant_direct(&sp, 1).unwrap());
        let plain = space("A4", "trivial");
        for n in 0..3 {
            assert_eq!(jn_bivariant(&plain, n).unwrap(), jn_ideal(plain.source_ring(), n).unwrap());
        }
        let e = space("trivial", "S3");
        for n in 0..3 {
            assert!(jn_bivariant(&e, n).unwrap().is_zero());
        }
    }

    #[test]
    fn explicit_generators_match_basis_classes() {
        let s3 = group("S3");
        let c2 = group("C2");
        let inv = s3.elements().find(|&x| s3.element_order(x) == 2).unwrap();
        let into = GroupHom::from_generator_images(c2.clone(), s3.clone(), &[(1, inv)]).unwrap();
        let sp = BisetSpace::new(c2.clone(), s3.clone()).unwrap();
        let set = crate::oracle::hom_biset_set(sp.product(), &into).unwrap();
        assert_eq!(set.size(), 6);
        assert_eq!(sp.decompose(&set).unwrap(), hom_biset(&sp, &into).unwrap());

        let back = BisetSpace::new(s3.clone(), c2.clone()).unwrap();
        let set = crate::oracle::transfer_biset_set(back.product(), &into).unwrap();
        assert_eq!(back.decompose(&set).unwrap(), transfer_biset(&back, &into).unwrap());

        // the explicit route agrees with basis-pair composition
        let middle = BisetSpace::new(s3.clone(), group("C3")).unwrap();
        let out = BisetSpace::new(c2.clone(), group("C3")).unwrap();
        let r = hom_biset(&sp, &into).unwrap();
        let r_set = crate::oracle::hom_biset_set(sp.product(), &into).unwrap();
        let comp = Composition::with_output(sp.clone(), middle.clone(), out.clone()).unwrap();
        for i in 0..middle.rank() {
            let b = middle.basis_element(i);
            assert_eq!(
                compose_set_left(&r_set, sp.product(), &b, &out).unwrap(),
                comp.apply(&r, &b).unwrap()
            );
        }
        let t_space = BisetSpace::new(s3.clone(), c2.clone()).unwrap();
        let t = transfer_biset(&t_space, &into).unwrap();
        let t_set = crate::oracle::transfer_biset_set(t_space.product(), &into).unwrap();
        let left = BisetSpace::new(c2.clone(), s3.clone()).unwrap();
        let out = BisetSpace::new(c2.clone(), c2.clone()).unwrap();
        let comp = Composition::with_output(left.clone(), t_space.clone(), out.clone()).unwrap();
        for i in 0..left.rank() {
            let b = left.basis_element(i);
            assert_eq!(
                compose_set_right(&b, &t_set, t_space.product(), &out).unwrap(),
                comp.apply(&b, &t).unwrap()
            );
        }
    }

    #[test]
    fn right_transfer_can_leave_the_filtration() {
        // S = [graph(C ↠ C2)] − [C × e] has S/C2 = 0, yet S restricted along e ↪ C2
        // is 2[V4/C] − [V4/e], whose mark at C is 4
        let sp = space("V4", "C2");
        let c2 = sp.target().clone();
        let e = Arc::new(crate::group::trivial_group());
        let point = GroupHom::new(e.clone(), c2.clone(), vec![c2.identity()]).unwrap();
        let t = transfer_biset(&BisetSpace::new(c2, e).unwrap(), &point).unwrap();
        let j1 = jn_bivariant(&sp, 1).unwrap();
        let ring = sp.source_ring().clone();
        let level_one = jn_ideal(&ring, 1).unwrap();
        let mut escapes = Vec::new();
        for i in 0..sp.rank() {
            for j in 0..sp.rank() {
                if i == j || sp.quotient_class(i) != sp.quotient_class(j) {
                    continue;
                }
                let mut coeffs = vec![0; sp.rank()];
                coeffs[i] = 1;
                coeffs[j] = -1;
                assert!(j1.contains(&coeffs));
                let s = sp.element(coeffs).unwrap();
                let st = compose(&s, &t).unwrap();
                if !level_one.contains(st.coeffs()) {
                    let marks = ring.element(st.coeffs().to_vec()).unwrap().marks().unwrap().values().to_vec();
                    assert_eq!(marks[0], 0);
                    escapes.push(marks);
                }
            }
        }
        assert!(escapes.contains(&vec![0, -4, 0, 0, 0]), "{escapes:?}");
    }

    #[test]
    fn labels() {
        let sp = space("C2", "C2");
        let labels = sp.labels();
        assert_eq!(labels.len(), 3);
        assert_eq!(labels[0], "({0} ≤ C2, φ: 0↦0)");
        assert!(labels.iter().any(|l| l == "({0,1} ≤ C2, φ: 0↦0,1↦1)"));
        assert!(labels.iter().any(|l| l == "({0,1} ≤ C2, φ: 0↦0,1↦0)"));
    }
}
