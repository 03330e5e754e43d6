//! Necessary conditions on a presented nilpotent Lie algebra: relation
//! degrees, weight gradings of generators and relations, and vanishing of
//! triple Massey products. Also builds the quadratic presentation dual to a
//! cup-product tensor.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::cohomology::{self, Cochain, CochainComplex};
use crate::error::{Error, Result};
use crate::free_lie::{Expr, FreeLieAlgebra, Generator, LieElement, Word};
use crate::linalg::Q;
use crate::nilpotent::{minimal_relations_with, nilpotent_quotient_with, GradedQuotient, LiePresentation};
use crate::Limits;

/// Printed with every verdict.
pub const CAVEAT: &str =
    "consistent only means the checked necessary conditions hold; it does not show the group is a fundamental group";

/// Generator weights under which every minimal relation splits into
/// weight-homogeneous components of allowed weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightAssignment {
    /// `(generator, weight)` in generator order.
    pub weights: Vec<(String, u32)>,
    /// Weights of the homogeneous relation components, ascending with multiplicity.
    pub relation_weights: Vec<u32>,
}

/// One relation component whose weight is not allowed under one assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub assignment: Vec<u32>,
    /// Index of the original relation.
    pub relation: usize,
    /// Bracket length of the minimal relation component.
    pub degree: usize,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(WeightAssignment),
    /// One violation for every assignment, in search order.
    Infeasible(Vec<Violation>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

fn check_weight_set(name: &str, set: &BTreeSet<u32>) -> Result<()> {
    if set.is_empty() || set.contains(&0) {
        return Err(Error::InvalidInput(format!("allowed {name} weights must be a nonempty set of positive integers")));
    }
    Ok(())
}

/// All generator weight vectors over `allowed`, lexicographic with the first
/// generator most significant.
struct Assignments {
    allowed: Vec<u32>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Assignments {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.digits.iter().map(|&d| self.allowed[d]).collect();
        self.done = true;
        for d in self.digits.iter_mut().rev() {
            if *d + 1 < self.allowed.len() {
                *d += 1;
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(out)
    }
}

fn search_size(allowed: usize, rank: usize) -> u128 {
    (allowed as u128).checked_pow(rank as u32).unwrap_or(u128::MAX)
}

fn first_violation(components: &[(usize, usize, LieElement)], assignment: &[u32], rels: &BTreeSet<u32>) -> Option<Violation> {
    for (relation, degree, element) in components {
        for weight in element.weight_components(assignment).into_keys() {
            if !rels.contains(&weight) {
                return Some(Violation { assignment: assignment.to_vec(), relation: *relation, degree: *degree, weight });
            }
        }
    }
    None
}

fn minimal_components(pres: &LiePresentation, limits: &Limits) -> Result<Vec<(usize, usize, LieElement)>> {
    Ok(minimal_relations_with(pres, limits)?.into_iter().map(|c| (c.relation, c.degree, c.element)).collect())
}

pub fn weight_feasibility(pres: &LiePresentation, gens: &BTreeSet<u32>, rels: &BTreeSet<u32>) -> Result<Feasibility> {
    weight_feasibility_with(pres, gens, rels, &Limits::default())
}

/// Exhaustive search over generator weights drawn from `gens`.
pub fn weight_feasibility_with(
    pres: &LiePresentation,
    gens: &BTreeSet<u32>,
    rels: &BTreeSet<u32>,
    limits: &Limits,
) -> Result<Feasibility> {
    check_weight_set("generator", gens)?;
    check_weight_set("relation", rels)?;
    let rank = pres.generators().len();
    let size = search_size(gens.len(), rank);
    if size > limits.max_weight_assignments {
        return Err(Error::SearchCapExceeded { size, cap: limits.max_weight_assignments });
    }
    let components = minimal_components(pres, limits)?;
    let assignments = Assignments { allowed: gens.iter().copied().collect(), digits: vec![0; rank], done: false };
    let mut certificate = Vec::new();
    for a in assignments {
        match first_violation(&components, &a, rels) {
            Some(v) => certificate.push(v),
            None => {
                let mut relation_weights: Vec<u32> =
                    components.iter().flat_map(|(_, _, e)| e.weight_components(&a).into_keys()).collect();
                relation_weights.sort_unstable();
                let weights = pres.generators().iter().map(|g| g.name().to_string()).zip(a).collect();
                return Ok(Feasibility::Feasible(WeightAssignment { weights, relation_weights }));
            }
        }
    }
    Ok(Feasibility::Infeasible(certificate))
}

/// Re-checks an infeasibility certificate from scratch.
pub fn verify_infeasibility(
    pres: &LiePresentation,
    gens: &BTreeSet<u32>,
    rels: &BTreeSet<u32>,
    certificate: &[Violation],
    limits: &Limits,
) -> Result<bool> {
    let rank = pres.generators().len();
    if certificate.len() as u128 != search_size(gens.len(), rank) {
        return Ok(false);
    }
    let components = minimal_components(pres, limits)?;
    let assignments = Assignments { allowed: gens.iter().copied().collect(), digits: vec![0; rank], done: false };
    for (a, v) in assignments.zip(certificate) {
        if v.assignment != a || rels.contains(&v.weight) {
            return Ok(false);
        }
        let found = components.iter().any(|(r, d, e)| {
            *r == v.relation && *d == v.degree && e.weight_components(&a).contains_key(&v.weight)
        });
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Smooth,
    SmoothProper,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Smooth => "smooth",
            Mode::SmoothProper => "smooth-proper",
        }
    }

    /// Allowed minimal relation degrees.
    pub fn allowed_degrees(self) -> BTreeSet<usize> {
        match self {
            Mode::Smooth => [2, 3, 4].into(),
            Mode::SmoothProper => [2].into(),
        }
    }

    pub fn generator_weights(self) -> BTreeSet<u32> {
        match self {
            Mode::Smooth => [1, 2].into(),
            Mode::SmoothProper => [1].into(),
        }
    }

    pub fn relation_weights(self) -> BTreeSet<u32> {
        match self {
            Mode::Smooth => [2, 3, 4].into(),
            Mode::SmoothProper => [2].into(),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckName {
    RelationDegrees,
    WeightFeasibility,
    MasseySweep,
}

impl CheckName {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::RelationDegrees => "relation-degrees",
            CheckName::WeightFeasibility => "weight-feasibility",
            CheckName::MasseySweep => "massey-sweep",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckRun {
    pub check: CheckName,
    pub passed: bool,
    /// Run on request only; does not affect the outcome.
    pub informational: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Consistent,
    Excluded,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Consistent => "consistent",
            Outcome::Excluded => "excluded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    RelationDegrees {
        /// Full minimal relation degree multiset.
        degrees: Vec<usize>,
        allowed: Vec<usize>,
        /// Degrees outside `allowed`, with multiplicity.
        offending: Vec<usize>,
    },
    WeightInfeasible {
        generator_weights: Vec<u32>,
        relation_weights: Vec<u32>,
        certificate: Vec<Violation>,
    },
    Massey {
        /// Indices into the `H¹` basis of the sweep quotient.
        triple: [usize; 3],
        labels: [String; 3],
        /// Class of the product, reduced modulo coboundaries.
        class: Cochain,
        /// `class` printed with quotient basis labels.
        class_text: String,
        /// Class cap of the quotient the sweep ran on.
        class_cap: usize,
    },
}

impl Witness {
    pub fn check(&self) -> CheckName {
        match self {
            Witness::RelationDegrees { .. } => CheckName::RelationDegrees,
            Witness::WeightInfeasible { .. } => CheckName::WeightFeasibility,
            Witness::Massey { .. } => CheckName::MasseySweep,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub mode: Mode,
    pub outcome: Outcome,
    pub witnesses: Vec<Witness>,
    pub checks_run: Vec<CheckRun>,
    /// Witnesses of informational checks.
    pub notes: Vec<Witness>,
}

impl Verdict {
    pub fn is_excluded(&self) -> bool {
        self.outcome == Outcome::Excluded
    }

    pub fn caveat(&self) -> &'static str {
        CAVEAT
    }
}

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Run every check instead of stopping at the first failure; in smooth
    /// mode also runs the Massey sweep as an informational check.
    pub full_battery: bool,
    pub limits: Limits,
}

fn degree_check(pres: &LiePresentation, mode: Mode, limits: &Limits) -> Result<Option<Witness>> {
    let degrees: Vec<usize> = minimal_relations_with(pres, limits)?.iter().map(|c| c.degree).collect();
    let allowed = mode.allowed_degrees();
    let offending: Vec<usize> = degrees.iter().copied().filter(|d| !allowed.contains(d)).collect();
    Ok((!offending.is_empty()).then(|| Witness::RelationDegrees { degrees, allowed: allowed.into_iter().collect(), offending }))
}

fn weight_check(pres: &LiePresentation, mode: Mode, limits: &Limits) -> Result<Option<Witness>> {
    let (gens, rels) = (mode.generator_weights(), mode.relation_weights());
    Ok(match weight_feasibility_with(pres, &gens, &rels, limits)? {
        Feasibility::Feasible(_) => None,
        Feasibility::Infeasible(certificate) => Some(Witness::WeightInfeasible {
            generator_weights: gens.into_iter().collect(),
            relation_weights: rels.into_iter().collect(),
            certificate,
        }),
    })
}

/// Class cap used for the Massey sweep: weight-3 cohomology needs class at least 3.
pub fn massey_class_cap(pres: &LiePresentation) -> usize {
    pres.class_cap().max(3)
}

/// Quotient the Massey sweep runs on.
pub fn massey_quotient(pres: &LiePresentation, limits: &Limits) -> Result<GradedQuotient> {
    let cap = massey_class_cap(pres);
    if cap == pres.class_cap() {
        return nilpotent_quotient_with(pres, limits);
    }
    let alg = FreeLieAlgebra::new(pres.generators().to_vec(), cap)?;
    let rels = pres.relations().iter().map(|r| r.transport(&alg)).collect::<Result<Vec<_>>>()?;
    let lifted = if rels.is_empty() { LiePresentation::free(alg) } else { LiePresentation::new(alg, rels)? };
    nilpotent_quotient_with(&lifted, limits)
}

/// First nonvanishing defined Massey product `⟨h_i, h_j, h_k⟩` over an `H¹` basis.
pub fn massey_sweep(pres: &LiePresentation, limits: &Limits) -> Result<Option<Witness>> {
    let u = massey_quotient(pres, limits)?;
    let cx = CochainComplex::new(&u);
    let h1 = cx.h1_basis();
    let n = h1.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if let cohomology::MasseyOutcome::Defined(m) = cohomology::massey(&u, &h1[i], &h1[j], &h1[k])? {
                    if !m.vanishing {
                        let labels = [i, j, k].map(|x| cohomology::format_cochain(&u, &h1[x].representative));
                        return Ok(Some(Witness::Massey {
                            triple: [i, j, k],
                            labels,
                            class_text: cohomology::format_cochain(&u, &m.class.representative),
                            class: m.class.representative,
                            class_cap: massey_class_cap(pres),
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn check_smooth_proper(pres: &LiePresentation) -> Result<Verdict> {
    check(pres, Mode::SmoothProper, &CheckOptions::default())
}

pub fn check_smooth(pres: &LiePresentation) -> Result<Verdict> {
    check(pres, Mode::Smooth, &CheckOptions::default())
}

/// Runs the checks of `mode` cheapest first. Smooth-proper mode always runs
/// all three checks so that every failing witness is reported.
pub fn check(pres: &LiePresentation, mode: Mode, opts: &CheckOptions) -> Result<Verdict> {
    let limits = &opts.limits;
    let run_all = opts.full_battery || mode == Mode::SmoothProper;
    let mut witnesses = Vec::new();
    let mut checks_run = Vec::new();
    let mut notes = Vec::new();

    type Check = fn(&LiePresentation, Mode, &Limits) -> Result<Option<Witness>>;
    let mut checks: Vec<(CheckName, Check)> =
        vec![(CheckName::RelationDegrees, degree_check), (CheckName::WeightFeasibility, weight_check)];
    if mode == Mode::SmoothProper {
        checks.push((CheckName::MasseySweep, |p, _, l| massey_sweep(p, l)));
    }
    for (name, f) in checks {
        if !witnesses.is_empty() && !run_all {
            break;
        }
        let w = f(pres, mode, limits)?;
        checks_run.push(CheckRun { check: name, passed: w.is_none(), informational: false });
        witnesses.extend(w);
    }
    if mode == Mode::Smooth && opts.full_battery {
        let w = massey_sweep(pres, limits)?;
        checks_run.push(CheckRun { check: CheckName::MasseySweep, passed: w.is_none(), informational: true });
        notes.extend(w);
    }
    let outcome = if witnesses.is_empty() { Outcome::Consistent } else { Outcome::Excluded };
    Ok(Verdict { mode, outcome, witnesses, checks_run, notes })
}

/// Recomputes a witness from the presentation alone.
pub fn verify_witness(pres: &LiePresentation, witness: &Witness, limits: &Limits) -> Result<bool> {
    match witness {
        Witness::RelationDegrees { degrees, allowed, offending } => {
            let fresh: Vec<usize> = minimal_relations_with(pres, limits)?.iter().map(|c| c.degree).collect();
            let expected: Vec<usize> = fresh.iter().copied().filter(|d| !allowed.contains(d)).collect();
            Ok(&fresh == degrees && &expected == offending && !offending.is_empty())
        }
        Witness::WeightInfeasible { generator_weights, relation_weights, certificate } => verify_infeasibility(
            pres,
            &generator_weights.iter().copied().collect(),
            &relation_weights.iter().copied().collect(),
            certificate,
            limits,
        ),
        Witness::Massey { triple, class, class_cap, .. } => {
            let u = massey_quotient(pres, limits)?;
            if massey_class_cap(pres) != *class_cap {
                return Ok(false);
            }
            let cx = CochainComplex::new(&u);
            let h1 = cx.h1_basis();
            if triple.iter().any(|&i| i >= h1.len()) {
                return Ok(false);
            }
            let [i, j, k] = *triple;
            Ok(match cohomology::massey_ordered(&u, &h1[i], &h1[j], &h1[k], crate::linalg::ColumnOrder::Reverse)? {
                cohomology::MasseyOutcome::Defined(m) => {
                    let mut span = m.indeterminacy.clone();
                    span.extend(m.class.modulo.iter().cloned());
                    let diff = cohomology::add(class, &cohomology::scale(&m.class.representative, &Q::from_integer((-1).into())));
                    !m.vanishing && cohomology::in_span(&diff, &span)
                }
                cohomology::MasseyOutcome::Undefined(_) => false,
            })
        }
    }
}

/// Cup product `H¹ × H¹ → H²` given as coordinates: `cup[i][j][k]` is the
/// `k`-th coordinate of `h_i ∪ h_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupData {
    dim_h1: usize,
    dim_h2: usize,
    names: Vec<String>,
    cup: Vec<Vec<Vec<Q>>>,
}

impl CupData {
    /// `names` label the dual generators; `a1, a2, …` when absent.
    pub fn new(dim_h1: usize, dim_h2: usize, names: Option<Vec<String>>, cup: Vec<Vec<Vec<Q>>>) -> Result<Self> {
        let names = names.unwrap_or_else(|| (1..=dim_h1).map(|i| format!("a{i}")).collect());
        let data = CupData { dim_h1, dim_h2, names, cup };
        data.validate()?;
        Ok(data)
    }

    /// Builds the tensor from entries `(i, j, k, value)` with the `(j, i)`
    /// entries filled in by antisymmetry.
    pub fn from_entries(
        dim_h1: usize,
        dim_h2: usize,
        names: Option<Vec<String>>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Q)>,
    ) -> Result<Self> {
        let mut cup = vec![vec![vec![Q::zero(); dim_h2]; dim_h1]; dim_h1];
        let mut seen = BTreeSet::new();
        for (i, j, k, x) in entries {
            if i >= dim_h1 || j >= dim_h1 || k >= dim_h2 {
                return Err(Error::InvalidInput(format!("cup entry ({i}, {j}, {k}) is out of range")));
            }
            if i == j && !x.is_zero() {
                return Err(Error::InvalidInput(format!("cup of class {i} with itself must vanish")));
            }
            if seen.contains(&(i, j, k)) && cup[i][j][k] != x {
                return Err(Error::InvalidInput(format!("conflicting cup entries for ({i}, {j}, {k})")));
            }
            seen.insert((i, j, k));
            seen.insert((j, i, k));
            cup[j][i][k] = -x.clone();
            cup[i][j][k] = x;
        }
        CupData::new(dim_h1, dim_h2, names, cup)
    }

    pub fn validate(&self) -> Result<()> {
        if self.names.len() != self.dim_h1 {
            return Err(Error::InvalidInput(format!("{} names for {} classes", self.names.len(), self.dim_h1)));
        }
        if self.cup.len() != self.dim_h1
            || self.cup.iter().any(|r| r.len() != self.dim_h1 || r.iter().any(|v| v.len() != self.dim_h2))
        {
            return Err(Error::InvalidInput("cup tensor shape does not match the stated dimensions".into()));
        }
        for i in 0..self.dim_h1 {
            for j in 0..self.dim_h1 {
                for k in 0..self.dim_h2 {
                    if self.cup[i][j][k] != -self.cup[j][i][k].clone() {
                        return Err(Error::InvalidInput(format!("cup tensor is not antisymmetric at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim_h1(&self) -> usize {
        self.dim_h1
    }

    pub fn dim_h2(&self) -> usize {
        self.dim_h2
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn value(&self, i: usize, j: usize) -> &[Q] {
        &self.cup[i][j]
    }

    pub fn tensor(&self) -> &[Vec<Vec<Q>>] {
        &self.cup
    }
}

/// Default nilpotency depth for presentations built from cup data.
pub const DEFAULT_DEPTH: usize = 2;

/// `r_k = Σ_{i<j} cup[i][j][k] [a_i, a_j]`, one per coordinate of `H²` (possibly zero).
pub fn cup_relations(data: &CupData, algebra: &Arc<FreeLieAlgebra>) -> Result<Vec<LieElement>> {
    let n = data.dim_h1();
    (0..data.dim_h2())
        .map(|k| {
            let mut terms = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let c = &data.value(i, j)[k];
                    if !c.is_zero() {
                        let (a, b) = (Expr::gen(&data.names()[i]), Expr::gen(&data.names()[j]));
                        terms.push((c.clone(), Expr::bracket(a, b)));
                    }
                }
            }
            algebra.rewrite(&Expr::sum(terms))
        })
        .collect()
}

/// `L(H¹∨)/(∪∨ H²∨)` truncated at class `2 × depth`. Zero relations are dropped.
pub fn presentation_from_cup(data: &CupData, depth: usize) -> Result<LiePresentation> {
    data.validate()?;
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be positive".into()));
    }
    if data.dim_h1() == 0 {
        return Err(Error::InvalidInput("H¹ must be nonzero to give generators".into()));
    }
    let gens = data.names().iter().map(Generator::unit).collect::<Result<Vec<_>>>()?;
    let alg = FreeLieAlgebra::new(gens, 2 * depth)?;
    let rels: Vec<LieElement> = cup_relations(data, &alg)?.into_iter().filter(|r| !r.is_zero()).collect();
    if rels.is_empty() {
        Ok(LiePresentation::free(alg))
    } else {
        LiePresentation::new(alg, rels)
    }
}

/// Cup tensor of the quotient of [`presentation_from_cup`], paired against
/// the relations `r_k`: `⟨ξ_i ∪ ξ_j, r_k⟩`.
pub fn recovered_cup_tensor(data: &CupData, depth: usize, limits: &Limits) -> Result<Vec<Vec<Vec<Q>>>> {
    let pres = presentation_from_cup(data, depth)?;
    let u = nilpotent_quotient_with(&pres, limits)?;
    let relations = cup_relations(data, pres.algebra())?;
    let cx = CochainComplex::new(&u);
    let n = data.dim_h1();
    let mut out = vec![vec![vec![Q::zero(); data.dim_h2()]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let class = cohomology::cup(&u, &cx.class(cohomology::dual(i))?, &cx.class(cohomology::dual(j))?)?;
            for (k, r) in relations.iter().enumerate() {
                out[i][j][k] = class
                    .representative
                    .iter()
                    .map(|(t, x)| x * r.coefficient(&Word::new(vec![t[0] as u8, t[1] as u8])))
                    .sum();
            }
        }
    }
    Ok(out)
}
