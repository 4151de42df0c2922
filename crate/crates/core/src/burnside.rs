//! The Burnside ring `A(G)` in the basis of transitive sets `[G/H]`, one per
//! conjugacy class of subgroups, together with its mark (ghost) coordinates.
//!
//! Products, restriction and the inverse of the mark map all run through
//! mark coordinates: pointwise arithmetic, then a triangular solve against
//! the table of marks. Virtual elements are handled by linearity.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, DEFAULT_ORDER_CAP};
use crate::subgroup::{classify_subgroups, image_subgroup, Subgroup, SubgroupClassification};

/// `marks[i][j] = Φ^{K_j}([G/H_i])` in canonical class order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableOfMarks {
    marks: Vec<Vec<i64>>,
}

impl TableOfMarks {
    fn compute(classes: &SubgroupClassification) -> TableOfMarks {
        let r = classes.len();
        let mut marks = vec![vec![0i64; r]; r];
        for (i, h) in classes.classes.iter().enumerate() {
            for (j, k) in classes.classes.iter().enumerate().take(i + 1) {
                if h.order() % k.order() != 0 {
                    continue;
                }
                // |{g : g⁻¹Kg ⊆ H}| = (#conjugates of K inside H)·|N(K)|
                let inside = k
                    .conjugates
                    .iter()
                    .filter(|kc| kc.is_subgroup_of(&h.representative))
                    .count();
                marks[i][j] = (inside * k.normalizer_order / h.order()) as i64;
            }
        }
        TableOfMarks { marks }
    }

    pub fn rank(&self) -> usize {
        self.marks.len()
    }

    /// `Φ^{K_col}([G/H_row])`
    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.marks[row][col]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.marks
    }
}

/// The Burnside ring of one group: its subgroup classes and table of marks.
/// Built once per group and shared behind an `Arc`.
pub struct BurnsideRing {
    group: Arc<FiniteGroup>,
    classes: SubgroupClassification,
    table: TableOfMarks,
    cap: usize,
}

impl fmt::Debug for BurnsideRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BurnsideRing")
            .field("group", &self.group)
            .field("rank", &self.rank())
            .finish()
    }
}

impl BurnsideRing {
    pub fn new(group: Arc<FiniteGroup>) -> Result<Arc<BurnsideRing>> {
        Self::with_cap(group, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(group: Arc<FiniteGroup>, cap: usize) -> Result<Arc<BurnsideRing>> {
        let classes = classify_subgroups(&group, cap)?;
        let table = TableOfMarks::compute(&classes);
        Ok(Arc::new(BurnsideRing {
            group,
            classes,
            table,
            cap,
        }))
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> &SubgroupClassification {
        &self.classes
    }

    pub fn table_of_marks(&self) -> &TableOfMarks {
        &self.table
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Number of subgroup classes, the rank of `A(G)` as an abelian group.
    pub fn rank(&self) -> usize {
        self.classes.len()
    }

    pub fn class_label(&self, i: usize) -> String {
        format!("H(order={},idx={i})", self.classes.classes[i].order())
    }

    pub fn same_ring(&self, other: &BurnsideRing) -> bool {
        std::ptr::eq(self, other) || self.group.same_table(&other.group)
    }

    pub fn zero(self: &Arc<Self>) -> BurnsideElement {
        BurnsideElement {
            ring: self.clone(),
            coeffs: vec![0; self.rank()],
        }
    }

    /// `[G/G]`, the multiplicative unit.
    pub fn one(self: &Arc<Self>) -> BurnsideElement {
        self.basis(self.classes.whole_class())
    }

    /// `[G/H_i]`
    pub fn basis(self: &Arc<Self>, class: usize) -> BurnsideElement {
        let mut coeffs = vec![0; self.rank()];
        coeffs[class] = 1;
        BurnsideElement {
            ring: self.clone(),
            coeffs,
        }
    }

    /// `[G/U]` for an arbitrary subgroup `U`.
    pub fn transitive(self: &Arc<Self>, sub: &Subgroup) -> BurnsideElement {
        self.basis(self.classes.class_of(sub))
    }

    pub fn element(self: &Arc<Self>, coeffs: Vec<i64>) -> Result<BurnsideElement> {
        if coeffs.len() != self.rank() {
            return Err(Error::Invalid(format!(
                "{} coefficients for a Burnside ring of rank {}",
                coeffs.len(),
                self.rank()
            )));
        }
        Ok(BurnsideElement {
            ring: self.clone(),
            coeffs,
        })
    }

    fn marks_of_coeffs(&self, coeffs: &[i64]) -> Result<Vec<i64>> {
        let r = self.rank();
        (0..r)
            .map(|j| {
                let s: i128 = (j..r)
                    .filter(|&i| coeffs[i] != 0)
                    .map(|i| coeffs[i] as i128 * self.table.get(i, j) as i128)
                    .sum();
                i64::try_from(s).map_err(|_| Error::Overflow("marks"))
            })
            .collect()
    }

    /// Inverse of the mark embedding.
    pub fn from_marks(self: &Arc<Self>, values: &[i64]) -> Result<BurnsideElement> {
        let r = self.rank();
        if values.len() != r {
            return Err(Error::Invalid(format!(
                "mark vector of length {} for a Burnside ring of rank {r}",
                values.len()
            )));
        }
        // marks at class j only involve coefficients of classes i ≥ j
        let mut coeffs = vec![0i128; r];
        let mut exact = true;
        for j in (0..r).rev() {
            let rest: i128 = (j + 1..r)
                .map(|i| coeffs[i] * self.table.get(i, j) as i128)
                .sum();
            let num = values[j] as i128 - rest;
            let d = self.table.get(j, j) as i128;
            if num % d != 0 {
                exact = false;
                break;
            }
            coeffs[j] = num / d;
        }
        if !exact {
            return Err(self.first_fractional_class(values));
        }
        let coeffs = coeffs
            .into_iter()
            .map(|c| i64::try_from(c).map_err(|_| Error::Overflow("from_marks")))
            .collect::<Result<_>>()?;
        Ok(BurnsideElement {
            ring: self.clone(),
            coeffs,
        })
    }

    /// Solves over the rationals and reports the lowest class with a
    /// non-integral coefficient.
    fn first_fractional_class(&self, values: &[i64]) -> Error {
        let r = self.rank();
        let mut q = vec![BigRational::zero(); r];
        for j in (0..r).rev() {
            let mut num = BigRational::from_integer(BigInt::from(values[j]));
            for i in j + 1..r {
                num -= &q[i] * BigRational::from_integer(BigInt::from(self.table.get(i, j)));
            }
            q[j] = num / BigRational::from_integer(BigInt::from(self.table.get(j, j)));
        }
        let class = q.iter().position(|x| !x.is_integer()).expect("solve was inexact");
        Error::NotInImage {
            class,
            value: q[class].to_string(),
        }
    }
}

/// A virtual `G`-set, as integer coefficients of the transitive sets `[G/H]`.
#[derive(Clone)]
pub struct BurnsideElement {
    ring: Arc<BurnsideRing>,
    coeffs: Vec<i64>,
}

impl PartialEq for BurnsideElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.coeffs == other.coeffs
    }
}

impl Eq for BurnsideElement {}

impl fmt::Debug for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BurnsideElement({self})")
    }
}

impl fmt::Display for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            let coef = if mag == 1 { String::new() } else { mag.to_string() };
            write!(f, "{sign}{coef}[{}]", self.ring.class_label(i))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl BurnsideElement {
    pub fn ring(&self) -> &Arc<BurnsideRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, class: usize) -> i64 {
        self.coeffs[class]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn marks(&self) -> Result<MarkVector> {
        Ok(MarkVector {
            ring: self.ring.clone(),
            values: self.ring.marks_of_coeffs(&self.coeffs)?,
        })
    }

    /// Mark at class `j`.
    pub fn mark(&self, j: usize) -> i64 {
        let table = self.ring.table_of_marks();
        let s: i128 = (j..self.coeffs.len())
            .map(|i| self.coeffs[i] as i128 * table.get(i, j) as i128)
            .sum();
        i64::try_from(s).expect("mark overflows i64")
    }

    /// Virtual cardinality, the mark at the trivial subgroup.
    pub fn augmentation(&self) -> i64 {
        self.mark(self.ring.classes().trivial_class())
    }

    fn check_same_ring(&self, other: &BurnsideElement) -> Result<()> {
        if self.ring.same_ring(&other.ring) {
            Ok(())
        } else {
            Err(Error::GroupMismatch(
                "Burnside elements over different groups".into(),
            ))
        }
    }

    pub fn checked_add(&self, other: &BurnsideElement) -> Result<BurnsideElement> {
        self.check_same_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("add")))
            .collect::<Result<_>>()?;
        Ok(BurnsideElement {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, k: i64) -> Result<BurnsideElement> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow("scale")))
            .collect::<Result<_>>()?;
        Ok(BurnsideElement {
            ring: self.ring.clone(),
            coeffs,
        })
    }

    /// Ring product: pointwise product of marks, solved back to coefficients.
    pub fn multiply(&self, other: &BurnsideElement) -> Result<BurnsideElement> {
        self.check_same_ring(other)?;
        let a = self.ring.marks_of_coeffs(&self.coeffs)?;
        let b = self.ring.marks_of_coeffs(&other.coeffs)?;
        let prod = a
            .iter()
            .zip(&b)
            .map(|(x, y)| x.checked_mul(*y).ok_or(Error::Overflow("multiply")))
            .collect::<Result<Vec<_>>>()?;
        self.ring.from_marks(&prod)
    }
}

impl Add for &BurnsideElement {
    type Output = BurnsideElement;
    fn add(self, rhs: &BurnsideElement) -> BurnsideElement {
        self.checked_add(rhs).expect("Burnside sum")
    }
}

impl Add for BurnsideElement {
    type Output = BurnsideElement;
    fn add(self, rhs: BurnsideElement) -> BurnsideElement {
        &self + &rhs
    }
}

impl Neg for &BurnsideElement {
    type Output = BurnsideElement;
    fn neg(self) -> BurnsideElement {
        self.scale(-1).expect("Burnside negation")
    }
}

impl Neg for BurnsideElement {
    type Output = BurnsideElement;
    fn neg(self) -> BurnsideElement {
        -&self
    }
}

impl Sub for &BurnsideElement {
    type Output = BurnsideElement;
    fn sub(self, rhs: &BurnsideElement) -> BurnsideElement {
        self + &(-rhs)
    }
}

impl Sub for BurnsideElement {
    type Output = BurnsideElement;
    fn sub(self, rhs: BurnsideElement) -> BurnsideElement {
        &self - &rhs
    }
}

impl Mul for &BurnsideElement {
    type Output = BurnsideElement;
    fn mul(self, rhs: &BurnsideElement) -> BurnsideElement {
        self.multiply(rhs).expect("Burnside product")
    }
}

impl Mul for BurnsideElement {
    type Output = BurnsideElement;
    fn mul(self, rhs: BurnsideElement) -> BurnsideElement {
        &self * &rhs
    }
}

impl Mul<&BurnsideElement> for i64 {
    type Output = BurnsideElement;
    fn mul(self, rhs: &BurnsideElement) -> BurnsideElement {
        rhs.scale(self).expect("Burnside scalar multiple")
    }
}

/// Mark (ghost) coordinates of a Burnside element, one per subgroup class.
#[derive(Clone, Debug)]
pub struct MarkVector {
    ring: Arc<BurnsideRing>,
    values: Vec<i64>,
}

impl PartialEq for MarkVector {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.values == other.values
    }
}

impl MarkVector {
    pub fn new(ring: Arc<BurnsideRing>, values: Vec<i64>) -> Result<MarkVector> {
        if values.len() != ring.rank() {
            return Err(Error::Invalid("mark vector length does not match the ring".into()));
        }
        Ok(MarkVector { ring, values })
    }

    pub fn ring(&self) -> &Arc<BurnsideRing> {
        &self.ring
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn to_element(&self) -> Result<BurnsideElement> {
        self.ring.from_marks(&self.values)
    }
}

/// Restriction along `φ: G → F`: the mark of the result at `U ≤ G` is the
/// mark of `y` at `φ(U) ≤ F`.
pub fn restrict_along(
    phi: &GroupHom,
    source_ring: &Arc<BurnsideRing>,
    y: &BurnsideElement,
) -> Result<BurnsideElement> {
    if !phi.source().same_table(source_ring.group()) || !phi.target().same_table(y.ring().group()) {
        return Err(Error::GroupMismatch(
            "restriction: homomorphism does not match the rings".into(),
        ));
    }
    let target_classes = y.ring().classes();
    let values: Vec<i64> = source_ring
        .classes()
        .classes
        .iter()
        .map(|class| {
            let image = image_subgroup(phi, &class.representative);
            y.mark(target_classes.class_of(&image))
        })
        .collect();
    source_ring.from_marks(&values).map_err(|e| match e {
        Error::NotInImage { class, value } => Error::Invalid(format!(
            "restriction produced a non-integral coefficient {value} at class {class}"
        )),
        other => other,
    })
}

/// Induction along an injective `θ: G → F`, extending `[G/H] ↦ [F/θ(H)]`.
pub fn induce(
    theta: &GroupHom,
    x: &BurnsideElement,
    target_ring: &Arc<BurnsideRing>,
) -> Result<BurnsideElement> {
    if let Some((a, b)) = theta.injectivity_witness() {
        return Err(Error::NotInjective(a, b));
    }
    if !theta.source().same_table(x.ring().group()) || !theta.target().same_table(target_ring.group()) {
        return Err(Error::GroupMismatch(
            "induction: homomorphism does not match the rings".into(),
        ));
    }
    let mut coeffs = vec![0i64; target_ring.rank()];
    for (i, class) in x.ring().classes().classes.iter().enumerate() {
        if x.coeff(i) == 0 {
            continue;
        }
        let image = image_subgroup(theta, &class.representative);
        let j = target_ring.classes().class_of(&image);
        coeffs[j] = coeffs[j]
            .checked_add(x.coeff(i))
            .ok_or(Error::Overflow("induce"))?;
    }
    target_ring.element(coeffs)
}

/// The element `Σ_C [G/C] − [G/e] − 2` summed over the classes of subgroups
/// of order two. For `G ≅ V4` this generates the kernel of linearization.
pub fn klein_generator(ring: &Arc<BurnsideRing>) -> BurnsideElement {
    let mut x = ring.zero();
    for (i, class) in ring.classes().classes.iter().enumerate() {
        if class.order() == 2 {
            x.coeffs[i] += 1;
        }
    }
    x.coeffs[ring.classes().trivial_class()] -= 1;
    x.coeffs[ring.classes().whole_class()] -= 2;
    x
}
