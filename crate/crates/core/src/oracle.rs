//! Explicit finite group actions, used as brute-force ground truth.
//!
//! Everything here works point by point: orbits by breadth-first search,
//! stabilizers and fixed points by scanning the whole group. No formula from
//! the mark or biset modules is reused, except for looking up which
//! conjugacy class a stabilizer belongs to.

use std::sync::Arc;

use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::error::{Error, Result};
use crate::group::{DirectProduct, ElementSet, FiniteGroup, GroupHom};
use crate::subgroup::Subgroup;

/// Largest concrete set the oracle will build.
pub const MAX_POINTS: usize = 1_000_000;

/// A finite `G`-set: `action[g·size + x]` is the image of point `x` under `g`.
#[derive(Clone, Debug)]
pub struct ConcreteGSet {
    group: Arc<FiniteGroup>,
    size: usize,
    action: Vec<usize>,
}

impl ConcreteGSet {
    /// Validates an action table `action[g][x]`.
    pub fn new(group: Arc<FiniteGroup>, action: Vec<Vec<usize>>) -> Result<ConcreteGSet> {
        if action.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} rows for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        let size = action.first().map_or(0, Vec::len);
        if size > MAX_POINTS {
            return Err(Error::TooLarge {
                what: "G-set",
                size,
                cap: MAX_POINTS,
            });
        }
        if action.iter().any(|row| row.len() != size || row.iter().any(|&y| y >= size)) {
            return Err(Error::InvalidAction("ragged or out-of-range action table".into()));
        }
        let set = ConcreteGSet {
            group,
            size,
            action: action.concat(),
        };
        set.validate()?;
        Ok(set)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.group;
        for x in 0..self.size {
            if self.act(g.identity(), x) != x {
                return Err(Error::InvalidAction(format!("identity moves point {x}")));
            }
        }
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for x in 0..self.size {
                    if self.act(ab, x) != self.act(a, self.act(b, x)) {
                        return Err(Error::InvalidAction(format!(
                            "({a}·{b})·{x} differs from {a}·({b}·{x})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Left cosets `G/U` with left translation; the coset of the identity is point 0.
    pub fn cosets(group: &Arc<FiniteGroup>, sub: &Subgroup) -> Result<ConcreteGSet> {
        let n = group.order();
        let size = n / sub.order();
        if size > MAX_POINTS {
            return Err(Error::TooLarge {
                what: "coset set",
                size,
                cap: MAX_POINTS,
            });
        }
        let mut coset_of = vec![usize::MAX; n];
        let mut reps = Vec::with_capacity(size);
        // start at the identity so that U itself is point 0
        let order = std::iter::once(group.identity()).chain(group.elements());
        for x in order {
            if coset_of[x] != usize::MAX {
                continue;
            }
            for &u in sub.elements() {
                coset_of[group.mul(x, u)] = reps.len();
            }
            reps.push(x);
        }
        let mut action = Vec::with_capacity(n * size);
        for g in group.elements() {
            action.extend(reps.iter().map(|&r| coset_of[group.mul(g, r)]));
        }
        Ok(ConcreteGSet {
            group: group.clone(),
            size,
            action,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.size + x]
    }

    pub fn action_table(&self) -> Vec<Vec<usize>> {
        if self.size == 0 {
            return vec![Vec::new(); self.group.order()];
        }
        self.action.chunks(self.size).map(|c| c.to_vec()).collect()
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut orbits = Vec::new();
        for start in 0..self.size {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut orbit = vec![start];
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                for g in self.group.elements() {
                    let y = self.act(g, x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup::from_mask(ElementSet::from_elements(
            self.group.order(),
            self.group.elements().filter(|&g| self.act(g, x) == x),
        ))
    }

    /// Number of points fixed by every element of `sub`.
    pub fn fixed_points(&self, sub: &Subgroup) -> usize {
        (0..self.size)
            .filter(|&x| sub.elements().iter().all(|&g| self.act(g, x) == x))
            .count()
    }

    pub fn fixed_points_of(&self, g: usize) -> usize {
        (0..self.size).filter(|&x| self.act(g, x) == x).count()
    }

    /// Orbit count through the average number of fixed points per element.
    pub fn orbit_count_by_averaging(&self) -> usize {
        let total: usize = self.group.elements().map(|g| self.fixed_points_of(g)).sum();
        assert_eq!(total % self.group.order(), 0, "fixed-point total not divisible by |G|");
        total / self.group.order()
    }

    /// Isomorphism class in `A(G)`: one `[G/Stab]` per orbit.
    pub fn orbit_decompose(&self, ring: &Arc<BurnsideRing>) -> Result<BurnsideElement> {
        if !ring.group().same_table(&self.group) {
            return Err(Error::GroupMismatch("G-set and ring over different groups".into()));
        }
        let mut coeffs = vec![0i64; ring.rank()];
        for orbit in self.orbits() {
            let stab = self.stabilizer(orbit[0]);
            coeffs[ring.classes().class_of(&stab)] += 1;
        }
        ring.element(coeffs)
    }

    /// Diagonal action on `X × Y`; the pair `(x, y)` is point `x·|Y| + y`.
    pub fn product(&self, other: &ConcreteGSet) -> Result<ConcreteGSet> {
        if !self.group.same_table(&other.group) {
            return Err(Error::GroupMismatch("product of G-sets over different groups".into()));
        }
        let size = self
            .size
            .checked_mul(other.size)
            .filter(|&s| s <= MAX_POINTS)
            .ok_or(Error::TooLarge {
                what: "product G-set",
                size: self.size.saturating_mul(other.size),
                cap: MAX_POINTS,
            })?;
        let mut action = Vec::with_capacity(self.group.order() * size);
        for g in self.group.elements() {
            for x in 0..self.size {
                for y in 0..other.size {
                    action.push(self.act(g, x) * other.size + other.act(g, y));
                }
            }
        }
        Ok(ConcreteGSet {
            group: self.group.clone(),
            size,
            action,
        })
    }

    /// The one-point set.
    pub fn point(group: &Arc<FiniteGroup>) -> ConcreteGSet {
        ConcreteGSet {
            group: group.clone(),
            size: 1,
            action: vec![0; group.order()],
        }
    }

    pub fn empty(group: &Arc<FiniteGroup>) -> ConcreteGSet {
        ConcreteGSet {
            group: group.clone(),
            size: 0,
            action: Vec::new(),
        }
    }

    /// `G` acting on itself by left translation.
    pub fn regular(group: &Arc<FiniteGroup>) -> ConcreteGSet {
        let n = group.order();
        ConcreteGSet {
            group: group.clone(),
            size: n,
            action: (0..n).flat_map(|g| (0..n).map(move |x| group.mul(g, x))).collect(),
        }
    }
}

/// `H` as a `(G,H)`-biset with `G` acting through `φ: G → H`:
/// `(g,h)·s = φ(g) s h⁻¹`.
pub fn hom_biset_set(product: &DirectProduct, phi: &GroupHom) -> Result<ConcreteGSet> {
    if !phi.source().same_table(&product.left) || !phi.target().same_table(&product.right) {
        return Err(Error::GroupMismatch("homomorphism does not match the product".into()));
    }
    let h = &product.right;
    let mut action = Vec::with_capacity(product.group.order() * h.order());
    for x in product.group.elements() {
        let (a, b) = product.split(x);
        let (left, right) = (phi.apply(a), h.inv(b));
        action.extend(h.elements().map(|s| h.mul(h.mul(left, s), right)));
    }
    Ok(ConcreteGSet {
        group: product.group.clone(),
        size: h.order(),
        action,
    })
}

/// `G` as a `(G,H)`-biset with `H` acting through an embedding `θ: H → G`:
/// `(g,h)·s = g s θ(h)⁻¹`.
pub fn transfer_biset_set(product: &DirectProduct, theta: &GroupHom) -> Result<ConcreteGSet> {
    if !theta.source().same_table(&product.right) || !theta.target().same_table(&product.left) {
        return Err(Error::GroupMismatch("embedding does not match the product".into()));
    }
    if let Some((a, b)) = theta.injectivity_witness() {
        return Err(Error::NotInjective(a, b));
    }
    let g = &product.left;
    let mut action = Vec::with_capacity(product.group.order() * g.order());
    for x in product.group.elements() {
        let (a, b) = product.split(x);
        let right = g.inv(theta.apply(b));
        action.extend(g.elements().map(|s| g.mul(g.mul(a, s), right)));
    }
    Ok(ConcreteGSet {
        group: product.group.clone(),
        size: g.order(),
        action,
    })
}

/// Labels each point with its orbit under the subgroup acting through
/// `elements`; returns the labels and the orbit count.
fn orbit_labels(set: &ConcreteGSet, elements: &[usize]) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; set.size];
    let mut count = 0;
    for start in 0..set.size {
        if label[start] != usize::MAX {
            continue;
        }
        for &h in elements {
            label[set.act(h, start)] = count;
        }
        count += 1;
    }
    (label, count)
}

/// The `G`-set `X/H` of right `H`-orbits of a `(G, H)`-biset realized as a
/// `G×H`-set.
pub fn h_quotient(set: &ConcreteGSet, product: &DirectProduct) -> Result<ConcreteGSet> {
    if !set.group.same_table(&product.group) {
        return Err(Error::GroupMismatch("biset is not over the given product".into()));
    }
    let e = product.left.identity();
    let right: Vec<usize> = product.right.elements().map(|h| product.pair(e, h)).collect();
    let (label, count) = orbit_labels(set, &right);
    let mut rep = vec![usize::MAX; count];
    for (x, &l) in label.iter().enumerate() {
        if rep[l] == usize::MAX {
            rep[l] = x;
        }
    }
    let eh = product.right.identity();
    let mut action = Vec::with_capacity(product.left.order() * count);
    for g in product.left.elements() {
        let gg = product.pair(g, eh);
        action.extend(rep.iter().map(|&x| label[set.act(gg, x)]));
    }
    Ok(ConcreteGSet {
        group: product.left.clone(),
        size: count,
        action,
    })
}

/// `S ×_H T` for a `(G,H)`-biset `S` and an `(H,I)`-biset `T`, as a
/// `G×I`-set. Pairs `(s·h, t)` and `(s, h·t)` are identified, where
/// `s·h = (e, h⁻¹)s` and `h·t = (h, e)t`.
pub fn twisted_product(
    s: &ConcreteGSet,
    gh: &DirectProduct,
    t: &ConcreteGSet,
    hi: &DirectProduct,
    gi: &DirectProduct,
) -> Result<ConcreteGSet> {
    if !s.group.same_table(&gh.group) || !t.group.same_table(&hi.group) {
        return Err(Error::GroupMismatch("bisets do not match their product groups".into()));
    }
    if !gh.right.same_table(&hi.left) {
        return Err(Error::GroupMismatch("middle groups differ".into()));
    }
    if !gi.left.same_table(&gh.left) || !gi.right.same_table(&hi.right) {
        return Err(Error::GroupMismatch("outer product does not match".into()));
    }
    let size = s
        .size
        .checked_mul(t.size)
        .filter(|&n| n <= MAX_POINTS)
        .ok_or(Error::TooLarge {
            what: "twisted product",
            size: s.size.saturating_mul(t.size),
            cap: MAX_POINTS,
        })?;
    let middle = &gh.right;
    let (eg, ei) = (gh.left.identity(), hi.right.identity());
    let pair = |x: usize, y: usize| x * t.size + y;

    // H acts on S × T by h·(s, t) = ((e,h)s, (h,e)t); its orbits are the points
    let mut label = vec![usize::MAX; size];
    let mut reps = Vec::new();
    for x in 0..s.size {
        for y in 0..t.size {
            if label[pair(x, y)] != usize::MAX {
                continue;
            }
            for h in middle.elements() {
                let sx = s.act(gh.pair(eg, h), x);
                let ty = t.act(hi.pair(h, ei), y);
                label[pair(sx, ty)] = reps.len();
            }
            reps.push((x, y));
        }
    }

    let count = reps.len();
    let mut action = Vec::with_capacity(gi.group.order() * count);
    for gi_elem in gi.group.elements() {
        let (g, i) = gi.split(gi_elem);
        let on_s = gh.pair(g, middle.identity());
        let on_t = hi.pair(middle.identity(), i);
        action.extend(reps.iter().map(|&(x, y)| label[pair(s.act(on_s, x), t.act(on_t, y))]));
    }
    Ok(ConcreteGSet {
        group: gi.group.clone(),
        size: count,
        action,
    })
}
