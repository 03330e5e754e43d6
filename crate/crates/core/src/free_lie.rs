//! Free Lie algebras on weighted generators, truncated at a class cap.
//!
//! Elements are stored in the Lyndon basis. Each Lyndon word `w` with standard
//! factorization `(u, v)` (longest proper Lyndon suffix `v`) names the basis
//! bracket `b(w) = [b(u), b(v)]` when `|u| <= |v|` and `[b(v), b(u)]`
//! otherwise, so the shorter factor is written first: `xxy -> [x,[x,y]]`,
//! `xyy -> [y,[x,y]]`, `xxyy -> [x,[y,[x,y]]]`. Internally brackets are
//! computed on the classical standard bracketing `P_w = [P_u, P_v]`, which
//! differs from `b(w)` by a sign.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::assoc::AssocPoly;
use crate::error::{Error, Result};
use crate::linalg::{q, Q};

pub const MAX_GENERATORS: usize = 255;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    name: String,
    weight: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, weight: u32) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::InvalidGenerators("empty generator name".into()));
        }
        if weight == 0 {
            return Err(Error::InvalidGenerators(format!("generator `{name}` has weight 0")));
        }
        Ok(Generator { name, weight })
    }

    /// Weight-1 generator.
    pub fn unit(name: impl Into<String>) -> Result<Self> {
        Generator::new(name, 1)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }
}

/// Word over generator indices. Ordered by length first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letter(l: u8) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_lyndon(&self) -> bool {
        is_lyndon(&self.0)
    }

    /// `(u, v)` with `v` the longest proper Lyndon suffix. `None` for letters.
    pub fn standard_factorization(&self) -> Option<(Word, Word)> {
        standard_split(&self.0).map(|i| (Word(self.0[..i].to_vec()), Word(self.0[i..].to_vec())))
    }

    fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

pub fn is_lyndon(w: &[u8]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

fn standard_split(w: &[u8]) -> Option<usize> {
    (1..w.len()).find(|&i| is_lyndon(&w[i..]))
}

/// All Lyndon words of exactly `len` letters over `k` letters, in lexicographic order.
pub fn lyndon_words(k: usize, len: usize) -> Vec<Word> {
    assert!(k <= MAX_GENERATORS);
    let mut out = Vec::new();
    if k == 0 || len == 0 {
        return out;
    }
    let top = (k - 1) as u8;
    // Duval's generation of Lyndon words of length <= len.
    let mut w: Vec<u8> = vec![0];
    while !w.is_empty() {
        if w.len() == len {
            out.push(Word(w.clone()));
        }
        let m = w.len();
        while w.len() < len {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        if let Some(last) = w.last_mut() {
            *last += 1;
        }
    }
    out
}

/// Number of Lyndon words of length `n` over `k` letters, i.e. the dimension
/// of the degree-`n` part of the free Lie algebra on `k` generators.
pub fn witt_dim(k: usize, n: usize) -> u128 {
    assert!(k >= 1 && n >= 1, "witt_dim needs positive arguments");
    let k = k as i128;
    let mut total: i128 = 0;
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let p = k.checked_pow((n / d) as u32).expect("witt_dim overflow");
        total += mu as i128 * p;
    }
    (total / n as i128) as u128
}

fn mobius(mut n: usize) -> i8 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// An iterated bracket of generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BracketWord {
    Gen(usize),
    Pair(Box<BracketWord>, Box<BracketWord>),
}

impl BracketWord {
    pub fn pair(left: BracketWord, right: BracketWord) -> Self {
        BracketWord::Pair(Box::new(left), Box::new(right))
    }

    pub fn length(&self) -> usize {
        match self {
            BracketWord::Gen(_) => 1,
            BracketWord::Pair(l, r) => l.length() + r.length(),
        }
    }

    pub fn weight(&self, generators: &[Generator]) -> u32 {
        match self {
            BracketWord::Gen(i) => generators[*i].weight,
            BracketWord::Pair(l, r) => l.weight(generators) + r.weight(generators),
        }
    }

    /// Generator sequence read left to right.
    pub fn letters(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.collect_letters(&mut out);
        out
    }

    fn collect_letters(&self, out: &mut Vec<u8>) {
        match self {
            BracketWord::Gen(i) => out.push(*i as u8),
            BracketWord::Pair(l, r) => {
                l.collect_letters(out);
                r.collect_letters(out);
            }
        }
    }

    /// The basis bracket attached to a Lyndon word.
    pub fn canonical(word: &Word) -> BracketWord {
        match word.standard_factorization() {
            None => BracketWord::Gen(word.0[0] as usize),
            Some((u, v)) => {
                let (bu, bv) = (BracketWord::canonical(&u), BracketWord::canonical(&v));
                if u.len() <= v.len() {
                    BracketWord::pair(bu, bv)
                } else {
                    BracketWord::pair(bv, bu)
                }
            }
        }
    }

    /// Whether this bracket is the basis bracket of a Lyndon word.
    pub fn is_basis(&self) -> bool {
        self.lyndon_word().is_some()
    }

    /// The Lyndon word whose basis bracket is exactly this tree, if any.
    pub fn lyndon_word(&self) -> Option<Word> {
        match self {
            BracketWord::Gen(i) => Some(Word(vec![*i as u8])),
            BracketWord::Pair(l, r) => {
                let (wl, wr) = (l.lyndon_word()?, r.lyndon_word()?);
                [wl.concat(&wr), wr.concat(&wl)]
                    .into_iter()
                    .find(|cand| cand.is_lyndon() && BracketWord::canonical(cand) == *self)
            }
        }
    }

    pub fn display<'a>(&'a self, generators: &'a [Generator]) -> impl fmt::Display + 'a {
        DisplayBracket { word: self, generators }
    }
}

struct DisplayBracket<'a> {
    word: &'a BracketWord,
    generators: &'a [Generator],
}

impl fmt::Display for DisplayBracket<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.word {
            BracketWord::Gen(i) => f.write_str(&self.generators[*i].name),
            BracketWord::Pair(l, r) => write!(
                f,
                "[{},{}]",
                l.display(self.generators),
                r.display(self.generators)
            ),
        }
    }
}

/// Basis words of the free Lie algebra of the given degree, in lexicographic
/// order of their Lyndon words.
pub fn lyndon_basis(generators: &[Generator], degree: usize) -> Vec<BracketWord> {
    assert!(degree >= 1, "degree must be positive");
    assert!(!generators.is_empty(), "generator list must be nonempty");
    lyndon_words(generators.len(), degree).iter().map(BracketWord::canonical).collect()
}

/// Formal bracket expression over named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Gen(String),
    Bracket(Box<Expr>, Box<Expr>),
    Sum(Vec<(Q, Expr)>),
}

impl Expr {
    pub fn gen(name: &str) -> Expr {
        Expr::Gen(name.to_string())
    }

    pub fn bracket(a: Expr, b: Expr) -> Expr {
        Expr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn sum(terms: Vec<(Q, Expr)>) -> Expr {
        Expr::Sum(terms)
    }

    pub fn neg(self) -> Expr {
        Expr::Sum(vec![(q(-1), self)])
    }
}

type BracketTable = HashMap<(Word, Word), Arc<Vec<(Word, Q)>>>;

/// Free Lie algebra on an ordered generator list, truncated above `class_cap`.
pub struct FreeLieAlgebra {
    generators: Vec<Generator>,
    class_cap: usize,
    brackets: Mutex<BracketTable>,
    expansions: Mutex<HashMap<Word, Arc<AssocPoly>>>,
}

impl fmt::Debug for FreeLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeLieAlgebra")
            .field("generators", &self.generators)
            .field("class_cap", &self.class_cap)
            .finish()
    }
}

impl FreeLieAlgebra {
    pub fn new(generators: Vec<Generator>, class_cap: usize) -> Result<Arc<Self>> {
        if generators.is_empty() {
            return Err(Error::InvalidGenerators("no generators".into()));
        }
        if generators.len() > MAX_GENERATORS {
            return Err(Error::InvalidGenerators(format!(
                "{} generators, at most {MAX_GENERATORS} supported",
                generators.len()
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidGenerators(format!("duplicate generator `{}`", g.name)));
            }
        }
        if class_cap == 0 {
            return Err(Error::InvalidInput("class cap must be at least 1".into()));
        }
        Ok(Arc::new(FreeLieAlgebra {
            generators,
            class_cap,
            brackets: Mutex::new(HashMap::new()),
            expansions: Mutex::new(HashMap::new()),
        }))
    }

    /// Weight-1 generators with the given names.
    pub fn with_names(names: &[&str], class_cap: usize) -> Result<Arc<Self>> {
        let gens = names.iter().map(|n| Generator::unit(*n)).collect::<Result<Vec<_>>>()?;
        FreeLieAlgebra::new(gens, class_cap)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn class_cap(&self) -> usize {
        self.class_cap
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn same_shape(&self, other: &FreeLieAlgebra) -> bool {
        self.class_cap == other.class_cap && self.generators == other.generators
    }

    /// Lyndon words of one degree, lexicographic.
    pub fn basis_words(&self, degree: usize) -> Vec<Word> {
        lyndon_words(self.rank(), degree)
    }

    pub fn lyndon_basis(&self, degree: usize) -> Vec<BracketWord> {
        lyndon_basis(&self.generators, degree)
    }

    pub fn word_weight(&self, w: &Word) -> u32 {
        w.0.iter().map(|&l| self.generators[l as usize].weight).sum()
    }

    pub fn format_word(&self, w: &Word) -> String {
        BracketWord::canonical(w).display(&self.generators).to_string()
    }

    pub fn zero(self: &Arc<Self>) -> LieElement {
        LieElement { algebra: Arc::clone(self), terms: BTreeMap::new() }
    }

    pub fn generator(self: &Arc<Self>, name: &str) -> Result<LieElement> {
        let i = self.generator_index(name)?;
        Ok(self.basis_element(Word::letter(i as u8)))
    }

    /// `b(w)` for a Lyndon word `w`, zero if `w` is longer than the cap.
    pub fn basis_element(self: &Arc<Self>, w: Word) -> LieElement {
        debug_assert!(w.is_lyndon());
        let mut e = self.zero();
        if w.len() <= self.class_cap {
            e.terms.insert(w, Q::one());
        }
        e
    }

    pub fn element_from_terms(self: &Arc<Self>, terms: impl IntoIterator<Item = (Word, Q)>) -> LieElement {
        let mut e = self.zero();
        for (w, c) in terms {
            assert!(w.is_lyndon(), "element keys must be Lyndon words");
            if w.len() <= self.class_cap {
                e.add_term(w, c);
            }
        }
        e
    }

    /// Normal form of a formal bracket expression, truncated at the class cap.
    pub fn rewrite(self: &Arc<Self>, expr: &Expr) -> Result<LieElement> {
        match expr {
            Expr::Gen(name) => self.generator(name),
            Expr::Bracket(a, b) => {
                let (a, b) = (self.rewrite(a)?, self.rewrite(b)?);
                a.bracket(&b)
            }
            Expr::Sum(terms) => {
                let mut acc = self.zero();
                for (c, e) in terms {
                    acc = acc.add(&self.rewrite(e)?.scale(c));
                }
                Ok(acc)
            }
        }
    }

    /// Evaluates a bracket tree; the result is normal-formed.
    pub fn evaluate(self: &Arc<Self>, tree: &BracketWord) -> Result<LieElement> {
        match tree {
            BracketWord::Gen(i) if *i < self.rank() => Ok(self.basis_element(Word::letter(*i as u8))),
            BracketWord::Gen(i) => Err(Error::UnknownGenerator(format!("#{i}"))),
            BracketWord::Pair(l, r) => self.evaluate(l)?.bracket(&self.evaluate(r)?),
        }
    }

    /// Sign relating the basis bracket to the standard bracketing: `b(w) = sign(w) P_w`.
    pub fn sign(w: &Word) -> i32 {
        match w.standard_factorization() {
            None => 1,
            Some((u, v)) => {
                let flip = if u.len() <= v.len() { 1 } else { -1 };
                flip * Self::sign(&u) * Self::sign(&v)
            }
        }
    }

    /// `[P_u, P_v]` in the standard basis, for Lyndon words `u`, `v`.
    fn std_bracket(&self, u: &Word, v: &Word) -> Arc<Vec<(Word, Q)>> {
        use std::cmp::Ordering::*;
        match u.0.cmp(&v.0) {
            Equal => return Arc::new(Vec::new()),
            Greater => {
                let r = self.std_bracket(v, u);
                return Arc::new(r.iter().map(|(w, c)| (w.clone(), -c)).collect());
            }
            Less => {}
        }
        let key = (u.clone(), v.clone());
        if let Some(hit) = self.brackets.lock().unwrap().get(&key) {
            return Arc::clone(hit);
        }
        let (u1, u2) = match u.standard_factorization() {
            Some((u1, u2)) if u2.0 < v.0 => (u1, u2),
            // u is a letter, or its right factor is >= v: (u, v) is the
            // standard factorization of the Lyndon word uv
            _ => {
                let out = Arc::new(vec![(u.concat(v), Q::one())]);
                self.brackets.lock().unwrap().insert(key, Arc::clone(&out));
                return out;
            }
        };
        // Jacobi: [[u1,u2],v] = [u1,[u2,v]] + [[u1,v],u2]
        let mut acc: BTreeMap<Word, Q> = BTreeMap::new();
        for (w, c) in self.std_bracket(&u2, v).iter() {
            for (z, d) in self.std_bracket(&u1, w).iter() {
                *acc.entry(z.clone()).or_insert_with(Q::zero) += c * d;
            }
        }
        for (w, c) in self.std_bracket(&u1, v).iter() {
            for (z, d) in self.std_bracket(w, &u2).iter() {
                *acc.entry(z.clone()).or_insert_with(Q::zero) += c * d;
            }
        }
        let out: Arc<Vec<(Word, Q)>> = Arc::new(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        self.brackets.lock().unwrap().insert(key, Arc::clone(&out));
        out
    }

    /// Associative expansion of the standard bracketing `P_w`.
    fn std_expansion(&self, w: &Word) -> Arc<AssocPoly> {
        if let Some(hit) = self.expansions.lock().unwrap().get(w) {
            return Arc::clone(hit);
        }
        let p = match w.standard_factorization() {
            None => AssocPoly::letter(w.0[0]),
            Some((u, v)) => self.std_expansion(&u).commutator(&self.std_expansion(&v)),
        };
        let p = Arc::new(p);
        self.expansions.lock().unwrap().insert(w.clone(), Arc::clone(&p));
        p
    }

    /// Image of a Lie element in the free associative algebra.
    pub fn expand(&self, e: &LieElement) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (w, c) in &e.terms {
            let s = q(Self::sign(w) as i64);
            out.add_scaled(&self.std_expansion(w), &(c * s));
        }
        out
    }

    /// Writes an associative polynomial as a Lie element, failing if it is not
    /// a Lie polynomial. Words longer than the class cap are dropped first.
    ///
    /// Uses triangularity: `P_w = w + (lexicographically larger words)`, so the
    /// smallest word of every homogeneous component of a Lie polynomial is
    /// Lyndon and carries the coefficient of its basis bracket.
    pub fn project(self: &Arc<Self>, p: &AssocPoly) -> Result<LieElement> {
        let mut by_len: BTreeMap<usize, BTreeMap<Vec<u8>, Q>> = BTreeMap::new();
        for (w, c) in p.terms() {
            if w.is_empty() {
                return Err(Error::NotLie("(empty word)".into()));
            }
            if w.len() <= self.class_cap {
                by_len.entry(w.len()).or_default().insert(w.clone(), c.clone());
            }
        }
        let mut out = self.zero();
        for (_, mut comp) in by_len {
            while let Some((w, c)) = comp.pop_first() {
                let word = Word(w);
                if !word.is_lyndon() {
                    let letters: String = word.0.iter().map(|&l| self.generators[l as usize].name.as_str()).collect::<Vec<_>>().join("");
                    return Err(Error::NotLie(letters));
                }
                for (u, d) in self.std_expansion(&word).terms() {
                    if u.as_slice() == word.0.as_slice() {
                        continue;
                    }
                    let entry = comp.entry(u.clone()).or_insert_with(Q::zero);
                    *entry -= &c * d;
                    if entry.is_zero() {
                        comp.remove(u);
                    }
                }
                let s = q(Self::sign(&word) as i64);
                out.add_term(word, c * s);
            }
        }
        Ok(out)
    }
}

/// Element of a truncated free Lie algebra, stored in the Lyndon basis with
/// exact rational coefficients. No stored coefficient is zero.
#[derive(Clone)]
pub struct LieElement {
    algebra: Arc<FreeLieAlgebra>,
    terms: BTreeMap<Word, Q>,
}

impl LieElement {
    pub fn algebra(&self) -> &Arc<FreeLieAlgebra> {
        &self.algebra
    }

    pub fn class_cap(&self) -> usize {
        self.algebra.class_cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn compatible(&self, other: &LieElement) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra.same_shape(&other.algebra)
    }

    fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Sum. Panics if the operands live in differently shaped algebras.
    pub fn add(&self, other: &LieElement) -> LieElement {
        self.try_add(other).expect("adding elements of different algebras")
    }

    pub fn try_add(&self, other: &LieElement) -> Result<LieElement> {
        if !self.compatible(other) {
            return Err(Error::MismatchedAlgebras);
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    /// Difference. Panics if the operands live in differently shaped algebras.
    pub fn sub(&self, other: &LieElement) -> LieElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LieElement {
        self.scale(&q(-1))
    }

    pub fn scale(&self, c: &Q) -> LieElement {
        let mut out = self.algebra.zero();
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect();
        }
        out
    }

    pub fn bracket(&self, other: &LieElement) -> Result<LieElement> {
        if !self.compatible(other) {
            return Err(Error::MismatchedAlgebras);
        }
        let alg = &self.algebra;
        let mut out = alg.zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() > alg.class_cap {
                    continue;
                }
                let s = FreeLieAlgebra::sign(u) * FreeLieAlgebra::sign(v);
                let ab = a * b;
                for (w, c) in alg.std_bracket(u, v).iter() {
                    let sw = s * FreeLieAlgebra::sign(w);
                    out.add_term(w.clone(), &ab * c * q(sw as i64));
                }
            }
        }
        Ok(out)
    }

    /// Bracket lengths present in the support, ascending.
    pub fn lengths(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(Word::len).collect();
        v.dedup();
        v
    }

    pub fn is_homogeneous(&self) -> bool {
        self.lengths().len() <= 1
    }

    /// Part of bracket length `n`.
    pub fn component(&self, n: usize) -> LieElement {
        let mut out = self.algebra.zero();
        out.terms = self.terms.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), c.clone())).collect();
        out
    }

    /// Nonzero bracket-length components, keyed by length.
    pub fn homogeneous_components(&self) -> BTreeMap<usize, LieElement> {
        self.lengths().into_iter().map(|n| (n, self.component(n))).collect()
    }

    /// Nonzero components under a generator weighting (indexed like the generators).
    pub fn weight_components(&self, weights: &[u32]) -> BTreeMap<u32, LieElement> {
        let mut out: BTreeMap<u32, LieElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            let wt: u32 = w.0.iter().map(|&l| weights[l as usize]).sum();
            out.entry(wt).or_insert_with(|| self.algebra.zero()).add_term(w.clone(), c.clone());
        }
        out
    }

    /// Weights under the generators' own weights.
    pub fn weights(&self) -> Vec<u32> {
        let ws: Vec<u32> = self.algebra.generators.iter().map(|g| g.weight).collect();
        self.weight_components(&ws).into_keys().collect()
    }

    /// Coordinates on the Lyndon basis of degree `n`, in `basis_words(n)` order.
    pub fn coordinates(&self, n: usize, basis: &[Word]) -> Vec<Q> {
        basis.iter().map(|w| if w.len() == n { self.coefficient(w) } else { Q::zero() }).collect()
    }

    /// Same coefficients viewed in another algebra with identical generators.
    pub fn transport(&self, target: &Arc<FreeLieAlgebra>) -> Result<LieElement> {
        if self.algebra.generators != target.generators {
            return Err(Error::MismatchedAlgebras);
        }
        Ok(target.element_from_terms(self.terms.iter().map(|(w, c)| (w.clone(), c.clone()))))
    }
}

impl PartialEq for LieElement {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other) && self.terms == other.terms
    }
}

impl Eq for LieElement {}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieElement({self})")
    }
}

/// Rationals print in lowest terms as `n/d`, the sign on the numerator.
/// Terms are joined with ` + ` / ` - `; unit coefficients are omitted.
impl fmt::Display for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let body = self.algebra.format_word(w);
            let negative = c < &Q::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                f.write_str(&body)?;
            } else {
                write!(f, "{mag}*{body}")?;
            }
        }
        Ok(())
    }
}
