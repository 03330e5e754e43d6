//! Graded nilpotent quotients `L(V) / (J + Γ_{c+1})` of free Lie algebras.
//!
//! The ideal `J` is generated by the homogeneous components of the relations.
//! Its degree-`n` part is the span of the degree-`n` relation components and
//! of `[g, j]` for generators `g` and `j` in `J_{n-1}`, so it is built degree
//! by degree with exact elimination. The quotient basis in each degree is the
//! set of Lyndon words that are not pivots of `J_n`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::free_lie::{FreeLieAlgebra, Generator, LieElement, Word};
use crate::linalg::{axpy, is_zero_vec, zero_vec, Echelon, Q};
use crate::Limits;

/// A homogeneous piece of one relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationComponent {
    /// Index of the relation it came from.
    pub relation: usize,
    pub degree: usize,
    pub element: LieElement,
}

/// Records that an inhomogeneous relation was replaced by its components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRecord {
    pub relation: usize,
    pub degrees: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct LiePresentation {
    algebra: Arc<FreeLieAlgebra>,
    relations: Vec<LieElement>,
    components: Vec<RelationComponent>,
    splits: Vec<SplitRecord>,
}

impl LiePresentation {
    pub fn new(algebra: Arc<FreeLieAlgebra>, relations: Vec<LieElement>) -> Result<Self> {
        let mut components = Vec::new();
        let mut splits = Vec::new();
        for (i, r) in relations.iter().enumerate() {
            if !algebra.same_shape(r.algebra()) {
                return Err(Error::InvalidPresentation(format!(
                    "relation {} uses a different generator set or class cap",
                    i + 1
                )));
            }
            if r.is_zero() {
                return Err(Error::InvalidPresentation(format!("relation {} is zero", i + 1)));
            }
            let parts = r.homogeneous_components();
            if parts.contains_key(&1) {
                return Err(Error::InvalidPresentation(format!(
                    "relation {} has a degree-1 component; generators must be independent",
                    i + 1
                )));
            }
            if parts.len() > 1 {
                splits.push(SplitRecord { relation: i, degrees: parts.keys().copied().collect() });
            }
            for (degree, element) in parts {
                components.push(RelationComponent { relation: i, degree, element: element.transport(&algebra)? });
            }
        }
        let relations = relations.iter().map(|r| r.transport(&algebra)).collect::<Result<_>>()?;
        Ok(LiePresentation { algebra, relations, components, splits })
    }

    /// No relations: the free nilpotent algebra of the algebra's class cap.
    pub fn free(algebra: Arc<FreeLieAlgebra>) -> Self {
        LiePresentation { algebra, relations: Vec::new(), components: Vec::new(), splits: Vec::new() }
    }

    pub fn algebra(&self) -> &Arc<FreeLieAlgebra> {
        &self.algebra
    }

    pub fn generators(&self) -> &[Generator] {
        self.algebra.generators()
    }

    pub fn class_cap(&self) -> usize {
        self.algebra.class_cap()
    }

    pub fn relations(&self) -> &[LieElement] {
        &self.relations
    }

    pub fn components(&self) -> &[RelationComponent] {
        &self.components
    }

    pub fn splits(&self) -> &[SplitRecord] {
        &self.splits
    }
}

/// Degreewise elimination data shared by the quotient and the relation-degree count.
struct Elimination {
    free_bases: Vec<Vec<Word>>,
    ideal: Vec<Echelon>,
    /// Indices into `components` forming a minimal generating set, by degree.
    minimal: Vec<usize>,
}

fn coords(e: &LieElement, index: &HashMap<Word, usize>, dim: usize) -> Vec<Q> {
    let mut v = zero_vec(dim);
    for (w, c) in e.terms() {
        v[index[w]] = c.clone();
    }
    v
}

fn element(alg: &Arc<FreeLieAlgebra>, basis: &[Word], v: &[Q]) -> LieElement {
    alg.element_from_terms(basis.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(w, c)| (w.clone(), c.clone())))
}

fn eliminate(pres: &LiePresentation, limits: &Limits) -> Result<Elimination> {
    let alg = &pres.algebra;
    let cap = alg.class_cap();
    if cap > limits.max_class {
        return Err(Error::ClassLimitExceeded { requested: cap, limit: limits.max_class });
    }
    let gens: Vec<LieElement> = (0..alg.rank()).map(|i| alg.basis_element(Word::letter(i as u8))).collect();
    let mut free_bases: Vec<Vec<Word>> = Vec::with_capacity(cap);
    let mut ideal: Vec<Echelon> = Vec::with_capacity(cap);
    let mut minimal = Vec::new();
    for n in 1..=cap {
        let words = alg.basis_words(n);
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let mut jn = Echelon::new(words.len());
        if n >= 2 {
            let prev_basis: &[Word] = &free_bases[n - 2];
            let prev: &Echelon = &ideal[n - 2];
            for row in prev.rows() {
                let j = element(alg, prev_basis, row);
                for g in &gens {
                    let b = g.bracket(&j)?;
                    jn.insert(coords(&b, &index, words.len()));
                }
            }
        }
        for (ci, comp) in pres.components.iter().enumerate().filter(|(_, c)| c.degree == n) {
            if jn.insert(coords(&comp.element, &index, words.len())) {
                minimal.push(ci);
            }
        }
        free_bases.push(words);
        ideal.push(jn);
    }
    Ok(Elimination { free_bases, ideal, minimal })
}

/// Degrees, with multiplicity and in ascending order, of a minimal homogeneous
/// generating set of the relation ideal.
pub fn minimal_relation_degrees(pres: &LiePresentation) -> Result<Vec<usize>> {
    minimal_relation_degrees_with(pres, &Limits::default())
}

pub fn minimal_relation_degrees_with(pres: &LiePresentation, limits: &Limits) -> Result<Vec<usize>> {
    Ok(minimal_relations_with(pres, limits)?.into_iter().map(|c| c.degree).collect())
}

/// A minimal generating set of the ideal chosen greedily among the relation
/// components, in degree order.
pub fn minimal_relations_with(pres: &LiePresentation, limits: &Limits) -> Result<Vec<RelationComponent>> {
    let elim = eliminate(pres, limits)?;
    Ok(elim.minimal.iter().map(|&i| pres.components[i].clone()).collect())
}

pub fn nilpotent_quotient(pres: &LiePresentation) -> Result<GradedQuotient> {
    nilpotent_quotient_with(pres, &Limits::default())
}

pub fn nilpotent_quotient_with(pres: &LiePresentation, limits: &Limits) -> Result<GradedQuotient> {
    let elim = eliminate(pres, limits)?;
    GradedQuotient::build(pres.clone(), elim)
}

/// Sparse coordinate vector `(index, coefficient)` with increasing indices.
pub type SparseVec = Vec<(usize, Q)>;

static NEXT_QUOTIENT_ID: AtomicU64 = AtomicU64::new(1);

/// Finite-dimensional graded Lie algebra `L(V) / (J + Γ_{c+1})` with its
/// basis, degrees and structure constants.
#[derive(Debug)]
pub struct GradedQuotient {
    id: u64,
    presentation: LiePresentation,
    free_bases: Vec<Vec<Word>>,
    free_index: Vec<HashMap<Word, usize>>,
    ideal: Vec<Echelon>,
    minimal: Vec<usize>,
    basis: Vec<Word>,
    degrees: Vec<usize>,
    dims: Vec<usize>,
    /// Position of each free-basis column of degree `n` in the quotient basis, if any.
    column_slot: Vec<Vec<Option<usize>>>,
    table: Vec<Vec<SparseVec>>,
}

impl GradedQuotient {
    fn build(presentation: LiePresentation, elim: Elimination) -> Result<Self> {
        let Elimination { free_bases, ideal, minimal } = elim;
        let mut basis = Vec::new();
        let mut degrees = Vec::new();
        let mut dims = Vec::new();
        let mut column_slot = Vec::new();
        for (n0, (words, jn)) in free_bases.iter().zip(&ideal).enumerate() {
            let free_cols = jn.non_pivots();
            let mut slots = vec![None; words.len()];
            for &c in &free_cols {
                slots[c] = Some(basis.len());
                basis.push(words[c].clone());
                degrees.push(n0 + 1);
            }
            dims.push(free_cols.len());
            column_slot.push(slots);
        }
        let free_index = free_bases
            .iter()
            .map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect())
            .collect();
        let mut q = GradedQuotient {
            id: NEXT_QUOTIENT_ID.fetch_add(1, Ordering::Relaxed),
            presentation,
            free_bases,
            free_index,
            ideal,
            minimal,
            basis,
            degrees,
            dims,
            column_slot,
            table: Vec::new(),
        };
        let alg = Arc::clone(q.presentation.algebra());
        let d = q.basis.len();
        let mut table = vec![vec![SparseVec::new(); d]; d];
        for i in 0..d {
            for j in (i + 1)..d {
                if q.degrees[i] + q.degrees[j] > alg.class_cap() {
                    continue;
                }
                let a = alg.basis_element(q.basis[i].clone());
                let b = alg.basis_element(q.basis[j].clone());
                let v = q.reduce(&a.bracket(&b)?)?;
                let sparse: SparseVec = v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                table[j][i] = sparse.iter().map(|(k, c)| (*k, -c.clone())).collect();
                table[i][j] = sparse;
            }
        }
        q.table = table;
        Ok(q)
    }

    /// Identifier distinguishing quotients built separately.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn presentation(&self) -> &LiePresentation {
        &self.presentation
    }

    pub fn algebra(&self) -> &Arc<FreeLieAlgebra> {
        self.presentation.algebra()
    }

    /// Dimension of each degree `1..=c`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Largest degree with a nonzero component (0 for the trivial algebra).
    pub fn class(&self) -> usize {
        self.dims.iter().rposition(|&d| d > 0).map_or(0, |i| i + 1)
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Lyndon words representing the quotient basis, grouped by degree.
    pub fn basis_words(&self) -> &[Word] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Basis indices of degree `n`.
    pub fn degree_range(&self, n: usize) -> std::ops::Range<usize> {
        let start: usize = self.dims[..n - 1].iter().sum();
        start..start + self.dims[n - 1]
    }

    pub fn basis_label(&self, i: usize) -> String {
        self.algebra().format_word(&self.basis[i])
    }

    /// `[e_i, e_j]` in quotient coordinates.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    pub fn bracket(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let d = self.dim();
        assert!(a.len() == d && b.len() == d, "vector length does not match quotient dimension");
        let mut out = zero_vec(d);
        for (i, ai) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, bj) in b.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let ab = ai * bj;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    pub fn unit_vector(&self, i: usize) -> Vec<Q> {
        let mut v = zero_vec(self.dim());
        v[i] = Q::from_integer(1.into());
        v
    }

    /// Image of a free Lie element in quotient coordinates.
    pub fn reduce(&self, e: &LieElement) -> Result<Vec<Q>> {
        if !e.algebra().same_shape(self.algebra()) {
            return Err(Error::MismatchedAlgebras);
        }
        let mut out = zero_vec(self.dim());
        for (n, comp) in e.homogeneous_components() {
            let idx = &self.free_index[n - 1];
            let mut v = zero_vec(self.free_bases[n - 1].len());
            for (w, c) in comp.terms() {
                v[idx[w]] = c.clone();
            }
            self.ideal[n - 1].reduce(&mut v);
            for (col, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    let slot = self.column_slot[n - 1][col].expect("reduced vector has a pivot entry");
                    out[slot] = c;
                }
            }
        }
        Ok(out)
    }

    /// The normal-form free representative of quotient coordinates.
    pub fn lift(&self, v: &[Q]) -> LieElement {
        element(self.algebra(), &self.basis, v)
    }

    /// Applies the homomorphism from the free Lie algebra of `e` that sends
    /// generator `i` to `images[i]`.
    pub fn map_free_element(&self, e: &LieElement, images: &[Vec<Q>]) -> Vec<Q> {
        assert_eq!(images.len(), e.algebra().rank(), "one image per generator required");
        let mut memo: HashMap<Word, Vec<Q>> = HashMap::new();
        let mut out = zero_vec(self.dim());
        for (w, c) in e.terms() {
            let v = self.map_word(w, images, &mut memo);
            axpy(&mut out, c, &v);
        }
        out
    }

    fn map_word(&self, w: &Word, images: &[Vec<Q>], memo: &mut HashMap<Word, Vec<Q>>) -> Vec<Q> {
        if let Some(v) = memo.get(w) {
            return v.clone();
        }
        let v = match w.standard_factorization() {
            None => images[w.letters()[0] as usize].clone(),
            Some(_) if w.len() > self.class() => zero_vec(self.dim()),
            Some((u, v)) => {
                let (a, b) = (self.map_word(&u, images, memo), self.map_word(&v, images, memo));
                if is_zero_vec(&a) || is_zero_vec(&b) {
                    zero_vec(self.dim())
                } else if u.len() <= v.len() {
                    self.bracket(&a, &b)
                } else {
                    self.bracket(&b, &a)
                }
            }
        };
        memo.insert(w.clone(), v.clone());
        v
    }

    /// Degrees of the minimal relations found during elimination.
    pub fn minimal_relation_degrees(&self) -> Vec<usize> {
        self.minimal.iter().map(|&i| self.presentation.components[i].degree).collect()
    }

    /// Dimension of `J_n` for each degree.
    pub fn ideal_dims(&self) -> Vec<usize> {
        self.ideal.iter().map(Echelon::rank).collect()
    }

    /// First basis triple violating the Jacobi identity, if any.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let d = self.dim();
        for i in 0..d {
            for j in (i + 1)..d {
                for k in (j + 1)..d {
                    let (ei, ej, ek) = (self.unit_vector(i), self.unit_vector(j), self.unit_vector(k));
                    let mut s = self.bracket(&ei, &self.bracket(&ej, &ek));
                    let t = self.bracket(&ej, &self.bracket(&ek, &ei));
                    let u = self.bracket(&ek, &self.bracket(&ei, &ej));
                    axpy(&mut s, &Q::from_integer(1.into()), &t);
                    axpy(&mut s, &Q::from_integer(1.into()), &u);
                    if !is_zero_vec(&s) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }
}

/// Dimensions of the lower central series quotients `Γ_n / Γ_{n+1}`, computed
/// from the structure constants alone. Stops at the first vanishing term.
pub fn lcs_dims(q: &GradedQuotient) -> Vec<usize> {
    let d = q.dim();
    let mut gamma = Echelon::from_rows(d, (0..d).map(|i| q.unit_vector(i)));
    let mut out = Vec::new();
    while gamma.rank() > 0 {
        let mut next = Echelon::new(d);
        for i in 0..d {
            let ei = q.unit_vector(i);
            for row in gamma.rows() {
                let b = q.bracket(&ei, row);
                if !is_zero_vec(&b) {
                    next.insert(b);
                }
            }
        }
        out.push(gamma.rank() - next.rank());
        gamma = next;
    }
    out
}
