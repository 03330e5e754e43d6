//! Baker–Campbell–Hausdorff series and the group law it induces on a graded
//! nilpotent quotient.
//!
//! `bch(a, b)` is `log(exp(a) exp(b))` computed in the truncated free
//! associative algebra and projected back onto the Lyndon basis. The group
//! law on a quotient evaluates the universal series in two letters with the
//! quotient's structure constants. Inverses are negatives.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::free_lie::{FreeLieAlgebra, LieElement};
use crate::linalg::{is_zero_vec, Matrix, Q};
use crate::nilpotent::GradedQuotient;
use crate::Limits;

/// `log(exp(a) exp(b))` truncated at `class` (and at the algebra's cap).
pub fn bch(a: &LieElement, b: &LieElement, class: usize) -> Result<LieElement> {
    bch_with(a, b, class, &Limits::default())
}

pub fn bch_with(a: &LieElement, b: &LieElement, class: usize, limits: &Limits) -> Result<LieElement> {
    if class > limits.max_bch_class {
        return Err(Error::ClassLimitExceeded { requested: class, limit: limits.max_bch_class });
    }
    if !a.compatible(b) {
        return Err(Error::MismatchedAlgebras);
    }
    let alg = a.algebra();
    let cap = class.min(alg.class_cap());
    if cap == 0 {
        return Ok(alg.zero());
    }
    let ea = alg.expand(a).truncated(cap).exp_truncated(cap);
    let eb = alg.expand(b).truncated(cap).exp_truncated(cap);
    let mut z = ea.mul_truncated(&eb, cap);
    z.add_term(Vec::new(), -Q::one());
    let log = z.log1p_truncated(cap);
    let projected = alg.project(&log)?;
    // drop anything between `cap` and the algebra's own cap
    Ok(alg.element_from_terms(projected.terms().filter(|(w, _)| w.len() <= cap).map(|(w, c)| (w.clone(), c.clone()))))
}

/// The BCH series in two letters `X`, `Y` up to `class`, cached per class.
pub fn universal_bch(class: usize) -> Result<LieElement> {
    static CACHE: OnceLock<Mutex<HashMap<usize, LieElement>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&class) {
        return Ok(hit.clone());
    }
    let alg = FreeLieAlgebra::with_names(&["X", "Y"], class.max(1))?;
    let series = bch_with(
        &alg.generator("X")?,
        &alg.generator("Y")?,
        class,
        &Limits { max_bch_class: class, ..Limits::default() },
    )?;
    cache.lock().unwrap().insert(class, series.clone());
    Ok(series)
}

/// Coordinates of an element of a quotient's Malcev group. The group's
/// underlying set is the Lie algebra; the identity has coordinates zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    quotient: u64,
    log: Vec<Q>,
}

impl GroupElement {
    pub fn new(q: &GradedQuotient, log: Vec<Q>) -> Result<Self> {
        if log.len() != q.dim() {
            return Err(Error::InvalidInput(format!(
                "group element has {} coordinates, quotient has dimension {}",
                log.len(),
                q.dim()
            )));
        }
        Ok(GroupElement { quotient: q.id(), log })
    }

    pub fn from_lie(q: &GradedQuotient, e: &LieElement) -> Result<Self> {
        Ok(GroupElement { quotient: q.id(), log: q.reduce(e)? })
    }

    pub fn identity(q: &GradedQuotient) -> Self {
        GroupElement { quotient: q.id(), log: vec![Q::zero(); q.dim()] }
    }

    pub fn log(&self) -> &[Q] {
        &self.log
    }

    pub fn log_element(&self, q: &GradedQuotient) -> LieElement {
        q.lift(&self.log)
    }

    pub fn is_identity(&self) -> bool {
        is_zero_vec(&self.log)
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement { quotient: self.quotient, log: self.log.iter().map(|x| -x).collect() }
    }

    fn check(&self, q: &GradedQuotient) -> Result<()> {
        if self.quotient != q.id() {
            return Err(Error::MismatchedQuotients);
        }
        Ok(())
    }
}

/// Product in the group `exp(u)`: `log(a·b) = BCH(log a, log b)` evaluated
/// with the quotient's brackets.
pub fn group_mul(q: &GradedQuotient, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    group_mul_with(q, a, b, &Limits::default())
}

pub fn group_mul_with(q: &GradedQuotient, a: &GroupElement, b: &GroupElement, limits: &Limits) -> Result<GroupElement> {
    a.check(q)?;
    b.check(q)?;
    let class = q.class();
    if class == 0 {
        return Ok(GroupElement::identity(q));
    }
    if class > limits.max_bch_class {
        return Err(Error::ClassLimitExceeded { requested: class, limit: limits.max_bch_class });
    }
    let series = universal_bch(class)?;
    let log = q.map_free_element(&series, &[a.log.clone(), b.log.clone()]);
    Ok(GroupElement { quotient: q.id(), log })
}

/// `a b a⁻¹ b⁻¹`.
pub fn group_commutator(q: &GradedQuotient, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
    let ab = group_mul(q, a, b)?;
    let aba = group_mul(q, &ab, &a.inverse())?;
    group_mul(q, &aba, &b.inverse())
}

/// Candidate integral lattice: its points are the integer combinations of `basis`.
#[derive(Clone, Debug)]
pub struct LatticeSpec {
    pub basis: Vec<LieElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeOp {
    Product,
    Inverse,
}

/// First operation whose result leaves the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeFailure {
    pub op: LatticeOp,
    pub left: usize,
    /// Equal to `left` for inverses.
    pub right: usize,
    /// Coordinates of the result in the lattice basis.
    pub coordinates: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeVerdict {
    Closed,
    Open(LatticeFailure),
}

impl LatticeVerdict {
    pub fn is_closed(&self) -> bool {
        matches!(self, LatticeVerdict::Closed)
    }
}

/// Checks that products `b_i · b_j` of lattice basis elements (all ordered
/// pairs) and inverses have integral coordinates in the lattice basis.
pub fn lattice_closed(q: &GradedQuotient, lat: &LatticeSpec) -> Result<LatticeVerdict> {
    let d = q.dim();
    if lat.basis.len() != d {
        return Err(Error::NonSpanningLattice(format!(
            "{} basis elements for a {d}-dimensional quotient",
            lat.basis.len()
        )));
    }
    let cols = lat.basis.iter().map(|e| q.reduce(e)).collect::<Result<Vec<_>>>()?;
    let to_lattice = Matrix::from_columns(d, &cols)
        .inverse()
        .ok_or_else(|| Error::NonSpanningLattice("basis elements are linearly dependent".into()))?;
    let elements: Vec<GroupElement> = cols.iter().map(|c| GroupElement { quotient: q.id(), log: c.clone() }).collect();
    let integral = |v: &[Q]| v.iter().all(Q::is_integer);
    for i in 0..d {
        for j in 0..d {
            let p = group_mul(q, &elements[i], &elements[j])?;
            let c = to_lattice.mul_vec(&p.log);
            if !integral(&c) {
                return Ok(LatticeVerdict::Open(LatticeFailure { op: LatticeOp::Product, left: i, right: j, coordinates: c }));
            }
        }
        let c = to_lattice.mul_vec(&elements[i].inverse().log);
        if !integral(&c) {
            return Ok(LatticeVerdict::Open(LatticeFailure { op: LatticeOp::Inverse, left: i, right: i, coordinates: c }));
        }
    }
    Ok(LatticeVerdict::Closed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutomorphismFailure {
    /// A defining relation does not map to zero.
    RelationNotPreserved { relation: usize, image: Vec<Q> },
    /// The induced linear map has this nonzero kernel vector.
    NotInvertible { kernel: Vec<Q> },
    /// `φ(a·b) ≠ φ(a)·φ(b)` on a sample pair of basis elements.
    GroupLawMismatch { left: usize, right: usize },
}

#[derive(Clone, Debug)]
pub struct AutomorphismReport {
    /// Column `i` is the image of basis element `i`. Present when the
    /// assignment extends to a Lie endomorphism.
    pub matrix: Option<Matrix>,
    pub failure: Option<AutomorphismFailure>,
}

impl AutomorphismReport {
    pub fn is_automorphism(&self) -> bool {
        self.failure.is_none()
    }
}

/// Extends `generator ↦ image` bracket-multiplicatively and checks that the
/// result is a well-defined, invertible Lie endomorphism of the quotient.
pub fn automorphism_check(q: &GradedQuotient, images: &BTreeMap<String, LieElement>) -> Result<AutomorphismReport> {
    let alg = q.algebra();
    for name in images.keys() {
        alg.generator_index(name)?;
    }
    let image_vecs = alg
        .generators()
        .iter()
        .map(|g| {
            let e = images
                .get(g.name())
                .ok_or_else(|| Error::InvalidInput(format!("no image given for generator `{}`", g.name())))?;
            q.reduce(e).map_err(|_| Error::InvalidInput(format!("image of `{}` lies outside the quotient", g.name())))
        })
        .collect::<Result<Vec<_>>>()?;

    for (i, r) in q.presentation().relations().iter().enumerate() {
        let img = q.map_free_element(r, &image_vecs);
        if !is_zero_vec(&img) {
            return Ok(AutomorphismReport {
                matrix: None,
                failure: Some(AutomorphismFailure::RelationNotPreserved { relation: i, image: img }),
            });
        }
    }

    let d = q.dim();
    let cols: Vec<Vec<Q>> = q
        .basis_words()
        .iter()
        .map(|w| q.map_free_element(&alg.basis_element(w.clone()), &image_vecs))
        .collect();
    let matrix = Matrix::from_columns(d, &cols);
    if let Some(kernel) = matrix.kernel().into_iter().next() {
        return Ok(AutomorphismReport { matrix: Some(matrix), failure: Some(AutomorphismFailure::NotInvertible { kernel }) });
    }

    let apply = |v: &[Q]| matrix.mul_vec(v);
    for i in 0..d {
        for j in 0..d {
            let a = GroupElement { quotient: q.id(), log: q.unit_vector(i) };
            let b = GroupElement { quotient: q.id(), log: q.unit_vector(j) };
            let lhs = apply(&group_mul(q, &a, &b)?.log);
            let fa = GroupElement { quotient: q.id(), log: apply(&a.log) };
            let fb = GroupElement { quotient: q.id(), log: apply(&b.log) };
            if lhs != group_mul(q, &fa, &fb)?.log {
                return Ok(AutomorphismReport {
                    matrix: Some(matrix),
                    failure: Some(AutomorphismFailure::GroupLawMismatch { left: i, right: j }),
                });
            }
        }
    }
    Ok(AutomorphismReport { matrix: Some(matrix), failure: None })
}
