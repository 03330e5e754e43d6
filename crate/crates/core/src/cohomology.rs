//! Chevalley–Eilenberg cohomology of graded nilpotent quotients with trivial
//! rational coefficients.
//!
//! Cochains are exterior forms in the dual basis `ξ_0, ξ_1, …` of the
//! quotient, stored sparsely as sorted index tuples. The differential is the
//! derivation determined by `(dξ)(a, b) = -ξ([a, b])`, i.e.
//! `dξ_k = -Σ_{i<j} c_{ij}^k ξ_i ∧ ξ_j`. Evaluation follows
//! `(ξ_i ∧ ξ_j)(e_i, e_j) = 1`. Because the quotient is graded, the complex
//! splits by weight (sum of the degrees of the dual basis vectors involved)
//! and every computation below works one weight at a time.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{q, zero_vec, ColumnOrder, Echelon, Matrix, Q};
use crate::nilpotent::GradedQuotient;
use crate::obstruction::CupData;
use crate::Limits;

/// Sparse exterior form: sorted index tuple to coefficient.
pub type Cochain = BTreeMap<Vec<usize>, Q>;

fn add_to(c: &mut Cochain, key: Vec<usize>, x: Q) {
    if x.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match c.entry(key) {
        Entry::Vacant(e) => {
            e.insert(x);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += x;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

pub fn scale(c: &Cochain, x: &Q) -> Cochain {
    let mut out = Cochain::new();
    for (k, v) in c {
        add_to(&mut out, k.clone(), v * x);
    }
    out
}

pub fn add(a: &Cochain, b: &Cochain) -> Cochain {
    let mut out = a.clone();
    for (k, v) in b {
        add_to(&mut out, k.clone(), v.clone());
    }
    out
}

/// Sorts a concatenated index tuple, returning the permutation sign, or
/// `None` if an index repeats.
fn sort_with_sign(mut idx: Vec<usize>) -> Option<(bool, Vec<usize>)> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
        if j > 0 && idx[j - 1] == idx[j] {
            return None;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((negative, idx))
}

pub fn wedge(a: &Cochain, b: &Cochain) -> Cochain {
    let mut out = Cochain::new();
    for (s, x) in a {
        for (t, y) in b {
            let mut idx = s.clone();
            idx.extend_from_slice(t);
            if let Some((negative, sorted)) = sort_with_sign(idx) {
                let v = x * y;
                add_to(&mut out, sorted, if negative { -v } else { v });
            }
        }
    }
    out
}

/// The 1-form `ξ_i`.
pub fn dual(i: usize) -> Cochain {
    Cochain::from([(vec![i], Q::one())])
}

/// Degree of a cochain (length of its index tuples), or `None` if zero or mixed.
pub fn cochain_degree(c: &Cochain) -> Option<usize> {
    let mut lens = c.keys().map(Vec::len);
    let first = lens.next()?;
    lens.all(|l| l == first).then_some(first)
}

/// Value of a 2-form on a pair of vectors.
pub fn evaluate2(c: &Cochain, u: &[Q], v: &[Q]) -> Q {
    let mut out = Q::zero();
    for (k, x) in c {
        assert_eq!(k.len(), 2, "evaluate2 needs a 2-form");
        let (i, j) = (k[0], k[1]);
        out += x * (&u[i] * &v[j] - &u[j] * &v[i]);
    }
    out
}

/// Prints a cochain with dual basis vectors labelled `b∨`, e.g. `x∨∧[x,y]∨ - 1/2*x∨∧y∨`.
pub fn format_cochain(u: &GradedQuotient, c: &Cochain) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (t, x)) in c.iter().enumerate() {
        let mono = if t.is_empty() {
            "1".to_string()
        } else {
            t.iter().map(|&i| format!("{}∨", u.basis_label(i))).collect::<Vec<_>>().join("∧")
        };
        let neg = x < &Q::zero();
        let mag = if neg { -x.clone() } else { x.clone() };
        let body = if mag.is_one() { mono } else { format!("{mag}*{mono}") };
        match (n, neg) {
            (0, false) => out += &body,
            (0, true) => out += &format!("-{body}"),
            (_, false) => out += &format!(" + {body}"),
            (_, true) => out += &format!(" - {body}"),
        }
    }
    out
}

/// Chevalley–Eilenberg complex of a graded quotient.
pub struct CochainComplex<'a> {
    quotient: &'a GradedQuotient,
    /// `dξ_k` for each basis index.
    d_dual: Vec<Cochain>,
}

impl<'a> CochainComplex<'a> {
    pub fn new(quotient: &'a GradedQuotient) -> Self {
        let d = quotient.dim();
        let mut d_dual = vec![Cochain::new(); d];
        for i in 0..d {
            for j in (i + 1)..d {
                for (k, c) in quotient.bracket_basis(i, j) {
                    add_to(&mut d_dual[*k], vec![i, j], -c.clone());
                }
            }
        }
        CochainComplex { quotient, d_dual }
    }

    pub fn quotient(&self) -> &GradedQuotient {
        self.quotient
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn d_dual(&self, k: usize) -> &Cochain {
        &self.d_dual[k]
    }

    pub fn tuple_weight(&self, t: &[usize]) -> usize {
        t.iter().map(|&i| self.quotient.degree(i)).sum()
    }

    /// Weights present in a cochain.
    pub fn weights(&self, c: &Cochain) -> BTreeSet<usize> {
        c.keys().map(|t| self.tuple_weight(t)).collect()
    }

    pub fn weight_component(&self, c: &Cochain, w: usize) -> Cochain {
        c.iter().filter(|(t, _)| self.tuple_weight(t) == w).map(|(t, x)| (t.clone(), x.clone())).collect()
    }

    /// Sorted `p`-tuples of basis indices, lexicographic, restricted to one
    /// weight if given.
    pub fn basis(&self, p: usize, weight: Option<usize>) -> Vec<Vec<usize>> {
        let degrees = self.quotient.degrees();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(p);
        fn rec(
            degrees: &[usize],
            p: usize,
            start: usize,
            remaining: Option<usize>,
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if cur.len() == p {
                if remaining.is_none_or(|r| r == 0) {
                    out.push(cur.clone());
                }
                return;
            }
            for i in start..degrees.len() {
                let rem = match remaining {
                    Some(r) if degrees[i] > r => break,
                    Some(r) => Some(r - degrees[i]),
                    None => None,
                };
                cur.push(i);
                rec(degrees, p, i + 1, rem, cur, out);
                cur.pop();
            }
        }
        rec(degrees, p, 0, weight, &mut cur, &mut out);
        out
    }

    /// Possible weights of `p`-cochains.
    pub fn weight_range(&self, p: usize) -> Vec<usize> {
        if p == 0 {
            return vec![0];
        }
        let mut degs = self.quotient.degrees().to_vec();
        if degs.len() < p {
            return Vec::new();
        }
        let lo: usize = degs[..p].iter().sum();
        degs.reverse();
        let hi: usize = degs[..p].iter().sum();
        (lo..=hi).collect()
    }

    pub fn d(&self, c: &Cochain) -> Cochain {
        let mut out = Cochain::new();
        for (t, x) in c {
            for (r, &k) in t.iter().enumerate() {
                let prefix: Cochain = Cochain::from([(t[..r].to_vec(), Q::one())]);
                let suffix: Cochain = Cochain::from([(t[r + 1..].to_vec(), Q::one())]);
                let term = wedge(&wedge(&prefix, &self.d_dual[k]), &suffix);
                let sign = if r % 2 == 0 { x.clone() } else { -x.clone() };
                for (s, y) in term {
                    add_to(&mut out, s, y * &sign);
                }
            }
        }
        out
    }

    /// Matrix of `d: Λ^p → Λ^{p+1}` on the given bases.
    pub fn differential_matrix(&self, src: &[Vec<usize>], dst: &[Vec<usize>]) -> Matrix {
        let index: HashMap<&Vec<usize>, usize> = dst.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (j, t) in src.iter().enumerate() {
            let img = self.d(&Cochain::from([(t.clone(), Q::one())]));
            for (s, x) in img {
                m.set(index[&s], j, x);
            }
        }
        m
    }

    pub fn to_vector(&self, c: &Cochain, basis: &[Vec<usize>]) -> Vec<Q> {
        let index: HashMap<&Vec<usize>, usize> = basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut v = zero_vec(basis.len());
        for (t, x) in c {
            v[index[t]] = x.clone();
        }
        v
    }

    pub fn from_vector(&self, v: &[Q], basis: &[Vec<usize>]) -> Cochain {
        basis.iter().zip(v).filter(|(_, x)| !x.is_zero()).map(|(t, x)| (t.clone(), x.clone())).collect()
    }

    /// Coboundaries `d(Λ^{p-1})` of one weight, as cochains.
    pub fn coboundaries(&self, p: usize, weight: usize) -> Vec<Cochain> {
        if p == 0 {
            return Vec::new();
        }
        let src = self.basis(p - 1, Some(weight));
        let dst = self.basis(p, Some(weight));
        let m = self.differential_matrix(&src, &dst);
        let e = Echelon::from_rows(dst.len(), (0..m.ncols()).map(|j| m.column(j)));
        e.rows().iter().map(|r| self.from_vector(r, &dst)).collect()
    }

    /// Builds a class, reducing the representative modulo coboundaries.
    pub fn class(&self, representative: Cochain) -> Result<CohomologyClass> {
        let degree = match cochain_degree(&representative) {
            Some(p) => p,
            None if representative.is_empty() => 0,
            None => return Err(Error::InvalidInput("cochain mixes degrees".into())),
        };
        self.class_of_degree(degree, representative)
    }

    fn class_of_degree(&self, degree: usize, representative: Cochain) -> Result<CohomologyClass> {
        if !self.d(&representative).is_empty() {
            return Err(Error::NotCocycle);
        }
        let weights = self.weights(&representative);
        let mut reduced = Cochain::new();
        let mut modulo = Vec::new();
        for &w in &weights {
            let basis = self.basis(degree, Some(w));
            let cob = self.coboundaries(degree, w);
            let e = Echelon::from_rows(basis.len(), cob.iter().map(|c| self.to_vector(c, &basis)));
            let mut v = self.to_vector(&self.weight_component(&representative, w), &basis);
            e.reduce(&mut v);
            reduced = add(&reduced, &self.from_vector(&v, &basis));
            modulo.extend(cob);
        }
        let weight = if weights.len() == 1 { weights.first().copied() } else { None };
        Ok(CohomologyClass { degree, weight, representative: reduced, modulo })
    }

    /// Closed 1-forms: a basis of `H^1` (no 1-coboundaries with trivial coefficients).
    pub fn h1_basis(&self) -> Vec<CohomologyClass> {
        let mut out = Vec::new();
        for w in self.weight_range(1) {
            let src = self.basis(1, Some(w));
            let dst = self.basis(2, Some(w));
            for v in self.differential_matrix(&src, &dst).kernel() {
                let rep = self.from_vector(&v, &src);
                out.push(CohomologyClass { degree: 1, weight: Some(w), representative: rep, modulo: Vec::new() });
            }
        }
        out
    }
}

/// A cohomology class with its representative (reduced modulo coboundaries)
/// and the coboundary space it is taken modulo.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub weight: Option<usize>,
    pub representative: Cochain,
    pub modulo: Vec<Cochain>,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        in_span(&self.representative, &self.modulo)
    }

    /// Same class as `other` (both taken modulo their coboundaries).
    pub fn same_class(&self, other: &CohomologyClass) -> bool {
        let diff = add(&self.representative, &scale(&other.representative, &q(-1)));
        let mut span = self.modulo.clone();
        span.extend(other.modulo.iter().cloned());
        in_span(&diff, &span)
    }
}

/// Whether `c` lies in the span of `span`.
pub fn in_span(c: &Cochain, span: &[Cochain]) -> bool {
    if c.is_empty() {
        return true;
    }
    let keys: Vec<Vec<usize>> =
        c.keys().chain(span.iter().flat_map(|s| s.keys())).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let index: HashMap<&Vec<usize>, usize> = keys.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let vec_of = |c: &Cochain| {
        let mut v = zero_vec(keys.len());
        for (t, x) in c {
            v[index[t]] = x.clone();
        }
        v
    };
    let e = Echelon::from_rows(keys.len(), span.iter().map(vec_of));
    e.contains(&vec_of(c))
}

#[derive(Clone, Debug)]
pub struct BettiResult {
    pub degree: usize,
    pub betti: usize,
    /// `(weight, dimension)` for every weight with nonzero cohomology.
    pub by_weight: Vec<(usize, usize)>,
    pub representatives: Vec<CohomologyClass>,
}

/// `dim H^p(u)`, with weight-graded pieces and representative cocycles.
pub fn betti(u: &GradedQuotient, p: usize) -> Result<BettiResult> {
    betti_with(u, p, &Limits::default())
}

pub fn betti_with(u: &GradedQuotient, p: usize, limits: &Limits) -> Result<BettiResult> {
    if u.dim() > limits.max_cohomology_dim {
        return Err(Error::DimensionCapExceeded { dim: u.dim(), cap: limits.max_cohomology_dim });
    }
    let cx = CochainComplex::new(u);
    let mut by_weight = Vec::new();
    let mut representatives = Vec::new();
    if p > u.dim() {
        return Ok(BettiResult { degree: p, betti: 0, by_weight, representatives });
    }
    for w in cx.weight_range(p) {
        let here = cx.basis(p, Some(w));
        if here.is_empty() {
            continue;
        }
        let next = cx.basis(p + 1, Some(w));
        let kernel = cx.differential_matrix(&here, &next).kernel();
        let mut span = if p == 0 {
            Echelon::new(here.len())
        } else {
            let prev = cx.basis(p - 1, Some(w));
            let m = cx.differential_matrix(&prev, &here);
            Echelon::from_rows(here.len(), (0..m.ncols()).map(|j| m.column(j)))
        };
        let modulo: Vec<Cochain> = span.rows().iter().map(|r| cx.from_vector(r, &here)).collect();
        let mut count = 0;
        for k in kernel {
            if span.insert(k.clone()) {
                count += 1;
                let mut rep = k;
                // canonical representative: reduce by the coboundaries only
                let cob = Echelon::from_rows(here.len(), modulo.iter().map(|c| cx.to_vector(c, &here)));
                cob.reduce(&mut rep);
                representatives.push(CohomologyClass {
                    degree: p,
                    weight: Some(w),
                    representative: cx.from_vector(&rep, &here),
                    modulo: modulo.clone(),
                });
            }
        }
        if count > 0 {
            by_weight.push((w, count));
        }
    }
    let betti = by_weight.iter().map(|(_, n)| n).sum();
    Ok(BettiResult { degree: p, betti, by_weight, representatives })
}

fn expect_degree(c: &CohomologyClass, expected: usize) -> Result<()> {
    if c.degree != expected {
        return Err(Error::DegreeMismatch { expected, found: c.degree });
    }
    Ok(())
}

/// `α ∪ β` for degree-1 classes.
pub fn cup(u: &GradedQuotient, alpha: &CohomologyClass, beta: &CohomologyClass) -> Result<CohomologyClass> {
    expect_degree(alpha, 1)?;
    expect_degree(beta, 1)?;
    let cx = CochainComplex::new(u);
    cx.class_of_degree(2, wedge(&alpha.representative, &beta.representative))
}

/// Why a Massey product is not defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MasseyUndefined {
    /// `a ∪ b ≠ 0`.
    LeftCupNonzero,
    /// `b ∪ c ≠ 0`.
    RightCupNonzero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasseyProduct {
    /// Class of `a∧t + s∧c`.
    pub class: CohomologyClass,
    /// Basis of `a∪H¹ + H¹∪c`, representatives reduced modulo coboundaries.
    pub indeterminacy: Vec<Cochain>,
    /// Chosen 1-cochains with `ds = -a∧b`, `dt = -b∧c`.
    pub s: Cochain,
    pub t: Cochain,
    pub vanishing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MasseyOutcome {
    Undefined(MasseyUndefined),
    Defined(MasseyProduct),
}

impl MasseyOutcome {
    pub fn is_nonvanishing(&self) -> bool {
        matches!(self, MasseyOutcome::Defined(m) if !m.vanishing)
    }
}

/// Triple Massey product `⟨a, b, c⟩` of degree-1 classes.
pub fn massey(u: &GradedQuotient, a: &CohomologyClass, b: &CohomologyClass, c: &CohomologyClass) -> Result<MasseyOutcome> {
    massey_ordered(u, a, b, c, ColumnOrder::Forward)
}

/// As [`massey`], choosing the defining cochains with the given column preference.
pub fn massey_ordered(
    u: &GradedQuotient,
    a: &CohomologyClass,
    b: &CohomologyClass,
    c: &CohomologyClass,
    order: ColumnOrder,
) -> Result<MasseyOutcome> {
    for x in [a, b, c] {
        expect_degree(x, 1)?;
    }
    let cx = CochainComplex::new(u);
    let (ra, rb, rc) = (&a.representative, &b.representative, &c.representative);
    let ab = wedge(ra, rb);
    let bc = wedge(rb, rc);
    let Some(s) = solve_coboundary(&cx, &scale(&ab, &q(-1)), order) else {
        return Ok(MasseyOutcome::Undefined(MasseyUndefined::LeftCupNonzero));
    };
    let Some(t) = solve_coboundary(&cx, &scale(&bc, &q(-1)), order) else {
        return Ok(MasseyOutcome::Undefined(MasseyUndefined::RightCupNonzero));
    };
    let rep = add(&wedge(ra, &t), &wedge(&s, rc));
    let class = cx.class_of_degree(2, rep)?;

    let h1 = cx.h1_basis();
    let weights: BTreeSet<usize> = h1
        .iter()
        .flat_map(|h| {
            let mut v = cx.weights(&wedge(ra, &h.representative));
            v.extend(cx.weights(&wedge(&h.representative, rc)));
            v
        })
        .chain(cx.weights(&class.representative))
        .collect();
    let mut coboundaries = Vec::new();
    for &w in &weights {
        coboundaries.extend(cx.coboundaries(2, w));
    }
    let mut indeterminacy: Vec<Cochain> = Vec::new();
    for h in &h1 {
        for cand in [wedge(ra, &h.representative), wedge(&h.representative, rc)] {
            let mut span = coboundaries.clone();
            span.extend(indeterminacy.iter().cloned());
            if !in_span(&cand, &span) {
                indeterminacy.push(reduce_modulo(&cand, &coboundaries));
            }
        }
    }
    let mut span = coboundaries;
    span.extend(indeterminacy.iter().cloned());
    let vanishing = in_span(&class.representative, &span);
    Ok(MasseyOutcome::Defined(MasseyProduct { class, indeterminacy, s, t, vanishing }))
}

/// Canonical representative of `c` modulo the span of `span`.
fn reduce_modulo(c: &Cochain, span: &[Cochain]) -> Cochain {
    let keys: Vec<Vec<usize>> =
        c.keys().chain(span.iter().flat_map(|s| s.keys())).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let index: HashMap<&Vec<usize>, usize> = keys.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let vec_of = |c: &Cochain| {
        let mut v = zero_vec(keys.len());
        for (t, x) in c {
            v[index[t]] = x.clone();
        }
        v
    };
    let e = Echelon::from_rows(keys.len(), span.iter().map(vec_of));
    let mut v = vec_of(c);
    e.reduce(&mut v);
    keys.iter().zip(v).filter(|(_, x)| !x.is_zero()).map(|(t, x)| (t.clone(), x)).collect()
}

/// Some 1-cochain `s` with `ds = target`, weight by weight.
fn solve_coboundary(cx: &CochainComplex<'_>, target: &Cochain, order: ColumnOrder) -> Option<Cochain> {
    let mut out = Cochain::new();
    for w in cx.weights(target) {
        let src = cx.basis(1, Some(w));
        let dst = cx.basis(2, Some(w));
        let m = cx.differential_matrix(&src, &dst);
        let x = m.solve_ordered(&cx.to_vector(&cx.weight_component(target, w), &dst), order)?;
        out = add(&out, &cx.from_vector(&x, &src));
    }
    Some(out)
}

/// A linear map between quotients given by the images of basis vectors
/// (column `a` is the image of basis element `a` of the source).
#[derive(Clone, Debug)]
pub struct LieMap {
    pub matrix: Matrix,
}

impl LieMap {
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.matrix.mul_vec(v)
    }

    /// First basis pair `(a, b)` with `φ[a,b] ≠ [φa, φb]`.
    pub fn homomorphism_violation(&self, source: &GradedQuotient, target: &GradedQuotient) -> Option<(usize, usize)> {
        for a in 0..source.dim() {
            for b in (a + 1)..source.dim() {
                let lhs = self.apply(&source.bracket(&source.unit_vector(a), &source.unit_vector(b)));
                let rhs = target.bracket(&self.matrix.column(a), &self.matrix.column(b));
                if lhs != rhs {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// `φ^*ξ_i = Σ_a φ[i][a] ξ_a` on the source.
    pub fn pullback(&self, c: &Cochain) -> Cochain {
        let forms: Vec<Cochain> = (0..self.matrix.nrows())
            .map(|i| {
                self.matrix.row(i).iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(a, x)| (vec![a], x.clone())).collect()
            })
            .collect();
        let mut out = Cochain::new();
        for (t, x) in c {
            let mut acc = Cochain::from([(Vec::new(), x.clone())]);
            for &i in t {
                acc = wedge(&acc, &forms[i]);
            }
            out = add(&out, &acc);
        }
        out
    }
}

/// Obstruction to lifting `φ: g → h` through the central extension of `h`
/// by `V = Q^m` defined by the 2-cocycle `ω = (ω_1, …, ω_m)`.
#[derive(Clone, Debug)]
pub struct ExtensionLift {
    /// Class of `φ^*ω_k` in `H²(g)` for each coordinate of `V`.
    pub obstruction: Vec<CohomologyClass>,
    /// When the obstruction vanishes: `λ: g → V` (row `k`, column `a`) such
    /// that `a ↦ (φa, λa)` is a homomorphism into the extension.
    pub lift: Option<Matrix>,
}

impl ExtensionLift {
    pub fn vanishes(&self) -> bool {
        self.lift.is_some()
    }
}

pub fn extension_lift_obstruction(
    g: &GradedQuotient,
    h: &GradedQuotient,
    omega: &[Cochain],
    phi: &LieMap,
) -> Result<ExtensionLift> {
    if phi.matrix.nrows() != h.dim() || phi.matrix.ncols() != g.dim() {
        return Err(Error::InvalidInput(format!(
            "map matrix is {}x{}, expected {}x{}",
            phi.matrix.nrows(),
            phi.matrix.ncols(),
            h.dim(),
            g.dim()
        )));
    }
    let hx = CochainComplex::new(h);
    for w in omega {
        if cochain_degree(w).is_some_and(|d| d != 2) {
            return Err(Error::DegreeMismatch { expected: 2, found: cochain_degree(w).unwrap() });
        }
        if !hx.d(w).is_empty() {
            return Err(Error::NotCocycle);
        }
    }
    if let Some((a, b)) = phi.homomorphism_violation(g, h) {
        return Err(Error::NotHomomorphism(format!("bracket of basis elements {a} and {b} is not preserved")));
    }
    let gx = CochainComplex::new(g);
    let src = gx.basis(1, None);
    let dst = gx.basis(2, None);
    let d1 = gx.differential_matrix(&src, &dst);
    let mut obstruction = Vec::new();
    let mut lambda_rows = Vec::new();
    for w in omega {
        let pb = phi.pullback(w);
        let class = gx.class_of_degree(2, pb.clone())?;
        // φ^*ω = dη  ⇒  λ = -η satisfies λ([a,b]) = ω(φa, φb)
        if let Some(eta) = d1.solve(&gx.to_vector(&pb, &dst)) {
            lambda_rows.push(eta.iter().map(|x| -x).collect::<Vec<Q>>());
        }
        obstruction.push(class);
    }
    let lift = (lambda_rows.len() == omega.len()).then(|| Matrix::from_rows(g.dim(), lambda_rows));
    if let Some(l) = &lift {
        debug_assert!(lift_is_homomorphism(g, h, omega, phi, l));
    }
    Ok(ExtensionLift { obstruction, lift })
}

/// Checks `a ↦ (φa, λa)` against the extension bracket
/// `[(x,v),(y,w)] = ([x,y], ω(x,y))` on every pair of basis elements.
pub fn lift_is_homomorphism(g: &GradedQuotient, h: &GradedQuotient, omega: &[Cochain], phi: &LieMap, lambda: &Matrix) -> bool {
    for a in 0..g.dim() {
        for b in (a + 1)..g.dim() {
            let ab = g.bracket(&g.unit_vector(a), &g.unit_vector(b));
            let (pa, pb) = (phi.matrix.column(a), phi.matrix.column(b));
            if phi.apply(&ab) != h.bracket(&pa, &pb) {
                return false;
            }
            let lam = lambda.mul_vec(&ab);
            for (k, w) in omega.iter().enumerate() {
                if lam[k] != evaluate2(w, &pa, &pb) {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether `v ↦ v ∪ (-)` is injective on `H¹`.
pub fn pairing_nondegenerate(data: &CupData) -> Result<bool> {
    data.validate()?;
    let n = data.dim_h1();
    let m = data.dim_h2();
    let rows: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).flat_map(|j| data.value(i, j).to_vec()).collect())
        .collect();
    Ok(Matrix::from_rows(n * m, rows).rank() == n)
}

/// Cup product on `H¹` against the bracket `Λ²(u/[u,u]) → Γ₂/Γ₃`.
#[derive(Clone, Debug)]
pub struct CupDuality {
    /// Index pairs `(i, j)`, `i < j`, of degree-1 basis elements.
    pub pairs: Vec<(usize, usize)>,
    /// Bracket map: column per pair, row per degree-2 basis element.
    pub bracket: Matrix,
    /// Cup map: column per pair, entries are coordinates of the reduced
    /// class `ξ_i ∪ ξ_j` on the weight-2 part of `Λ²`.
    pub cup: Matrix,
    /// `dξ_k = -Σ B[k][(i,j)] ξ_i∧ξ_j` for every degree-2 `k`.
    pub differential_is_negative_transpose: bool,
    /// Kernel of the cup map equals the row space of the bracket matrix.
    pub kernel_matches: bool,
    /// Evaluating each cup class on each vector of `ker B` returns that
    /// vector's coordinate on the pair.
    pub pairing_matches: bool,
}

impl CupDuality {
    pub fn holds(&self) -> bool {
        self.differential_is_negative_transpose && self.kernel_matches && self.pairing_matches
    }
}

pub fn cup_duality(u: &GradedQuotient) -> Result<CupDuality> {
    let cx = CochainComplex::new(u);
    let ones: Vec<usize> = u.degree_range(1).collect();
    let twos: Vec<usize> = if u.dims().len() >= 2 { u.degree_range(2).collect() } else { Vec::new() };
    let pairs: Vec<(usize, usize)> =
        ones.iter().flat_map(|&i| ones.iter().filter(move |&&j| j > i).map(move |&j| (i, j))).collect();

    let mut bracket = Matrix::zeros(twos.len(), pairs.len());
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for (k, c) in u.bracket_basis(i, j) {
            let row = twos.iter().position(|t| t == k).expect("bracket of degree-1 elements has degree 2");
            bracket.set(row, p, c.clone());
        }
    }

    let differential_is_negative_transpose = twos.iter().enumerate().all(|(row, &k)| {
        let expected: Cochain = pairs
            .iter()
            .enumerate()
            .filter(|(p, _)| !bracket.get(row, *p).is_zero())
            .map(|(p, &(i, j))| (vec![i, j], -bracket.get(row, p).clone()))
            .collect();
        *cx.d_dual(k) == expected
    });

    let wt2 = cx.basis(2, Some(2));
    let cob = Echelon::from_rows(wt2.len(), cx.coboundaries(2, 2).iter().map(|c| cx.to_vector(c, &wt2)));
    let mut cup_cols = Vec::new();
    for &(i, j) in &pairs {
        let mut v = cx.to_vector(&wedge(&dual(i), &dual(j)), &wt2);
        cob.reduce(&mut v);
        cup_cols.push(v);
    }
    let cup = Matrix::from_columns(wt2.len(), &cup_cols);

    let cup_kernel = Echelon::from_rows(pairs.len(), cup.kernel());
    let bracket_rows = Echelon::from_rows(pairs.len(), bracket.rows().iter().cloned());
    let kernel_matches = cup_kernel.rank() == bracket_rows.rank()
        && bracket_rows.rows().iter().all(|r| cup_kernel.contains(r));

    let pairing_matches = bracket.kernel().iter().all(|k| {
        pairs.iter().enumerate().all(|(p, _)| {
            let class = cx.from_vector(&cup_cols[p], &wt2);
            let value: Q = class
                .iter()
                .map(|(t, x)| {
                    let pos = pairs.iter().position(|&(a, b)| t == &vec![a, b]).expect("weight-2 tuple of degree-1 indices");
                    x * &k[pos]
                })
                .sum();
            value == k[p]
        })
    });

    Ok(CupDuality { pairs, bracket, cup, differential_is_negative_transpose, kernel_matches, pairing_matches })
}
