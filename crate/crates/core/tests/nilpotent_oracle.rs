mod common;

use std::collections::BTreeMap;

use common::{abelian, free, free2_quintic, genus, heisenberg, n5, q, rank};
use nilpotent_lie::cohomology::betti;
use nilpotent_lie::{lcs_dims, minimal_relation_degrees, nilpotent_quotient, witt_dim, LiePresentation, Q};
use num_traits::Zero;

/// Structure constants of strictly upper triangular `n×n` matrices on the
/// basis `E_ij` (i < j), graded by `j - i`.
fn upper_triangular(n: usize) -> (Vec<usize>, Vec<Vec<BTreeMap<usize, i64>>>) {
    let basis: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    let index: BTreeMap<(usize, usize), usize> = basis.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let d = basis.len();
    let mut table = vec![vec![BTreeMap::new(); d]; d];
    for (a, &(i, j)) in basis.iter().enumerate() {
        for (b, &(k, l)) in basis.iter().enumerate() {
            // E_ij E_kl - E_kl E_ij
            if j == k {
                *table[a][b].entry(index[&(i, l)]).or_insert(0) += 1;
            }
            if l == i {
                *table[a][b].entry(index[&(k, j)]).or_insert(0) -= 1;
            }
        }
    }
    (basis.iter().map(|&(i, j)| j - i).collect(), table)
}

/// `dim H²` in each weight, from ranks of `d: Λ¹ → Λ²` and `d: Λ² → Λ³`
/// assembled directly from the structure constants.
fn h2_by_weight(degrees: &[usize], table: &[Vec<BTreeMap<usize, i64>>]) -> BTreeMap<usize, usize> {
    let d = degrees.len();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|a| ((a + 1)..d).map(move |b| (a, b))).collect();
    let triples: Vec<(usize, usize, usize)> =
        (0..d).flat_map(|a| ((a + 1)..d).flat_map(move |b| ((b + 1)..d).map(move |c| (a, b, c)))).collect();
    let max_w = degrees.iter().sum::<usize>();
    let mut out = BTreeMap::new();
    for w in 1..=max_w {
        let l1: Vec<usize> = (0..d).filter(|&k| degrees[k] == w).collect();
        let l2: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(a, b)| degrees[a] + degrees[b] == w).collect();
        let l3: Vec<(usize, usize, usize)> =
            triples.iter().copied().filter(|&(a, b, c)| degrees[a] + degrees[b] + degrees[c] == w).collect();
        if l2.is_empty() {
            continue;
        }
        // (dξ_k)(e_a, e_b) = -ξ_k([e_a, e_b])
        let d1: Vec<Vec<Q>> = l1
            .iter()
            .map(|&k| l2.iter().map(|&(a, b)| q(-table[a][b].get(&k).copied().unwrap_or(0))).collect())
            .collect();
        // (dω)(e_a, e_b, e_c) = -ω([a,b],c) + ω([a,c],b) - ω([b,c],a)
        let omega_on = |p: (usize, usize), x: usize, y: usize| -> i64 {
            if (x, y) == p {
                1
            } else if (y, x) == p {
                -1
            } else {
                0
            }
        };
        let d2: Vec<Vec<Q>> = l2
            .iter()
            .map(|&p| {
                l3.iter()
                    .map(|&(a, b, c)| {
                        let mut v = 0;
                        for (&m, &s) in &table[a][b] {
                            v -= s * omega_on(p, m, c);
                        }
                        for (&m, &s) in &table[a][c] {
                            v += s * omega_on(p, m, b);
                        }
                        for (&m, &s) in &table[b][c] {
                            v -= s * omega_on(p, m, a);
                        }
                        q(v)
                    })
                    .collect()
            })
            .collect();
        let r1 = if l1.is_empty() { 0 } else { rank(d1) };
        let r2 = if l3.is_empty() { 0 } else { rank(d2) };
        let h = l2.len() - r1 - r2;
        if h > 0 {
            out.insert(w, h);
        }
    }
    out
}

fn fixture_degrees() -> Vec<usize> {
    let text = std::fs::read_to_string(common::fixture_path("n5.degrees")).unwrap();
    text.lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect::<Vec<usize>>())
        .collect()
}

#[test]
fn n5_degrees_match_cohomology_oracle() {
    let (degrees, table) = upper_triangular(5);
    let oracle: Vec<usize> =
        h2_by_weight(&degrees, &table).into_iter().flat_map(|(w, h)| std::iter::repeat_n(w, h)).collect();
    assert_eq!(oracle, fixture_degrees());

    let pres = n5();
    assert_eq!(minimal_relation_degrees(&pres).unwrap(), oracle);
    let u = nilpotent_quotient(&pres).unwrap();
    assert_eq!(u.dims(), &[4, 3, 2, 1, 0]);
    assert!(u.jacobi_violation().is_none());
}

#[test]
fn quotient_is_isomorphic_to_matrix_algebra_in_dimension() {
    for n in 3..=5 {
        let (degrees, _) = upper_triangular(n);
        let mut per_degree = vec![0; n - 1];
        for d in degrees {
            per_degree[d - 1] += 1;
        }
        let names: Vec<String> = (1..n).map(|i| format!("e{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let mut rels = Vec::new();
        let e = |i: usize| common::g(&format!("e{i}"));
        for i in 1..n {
            for j in (i + 1)..n {
                if j - i >= 2 {
                    rels.push(common::br(e(i), e(j)));
                } else {
                    rels.push(common::br(e(i), common::br(e(i), e(j))));
                    rels.push(common::br(e(j), common::br(e(j), e(i))));
                }
            }
        }
        let pres = if rels.is_empty() { free(&refs, n) } else { common::presentation(&refs, n, &rels) };
        let u = nilpotent_quotient(&pres).unwrap();
        assert_eq!(&u.dims()[..n - 1], &per_degree[..], "n = {n}");
    }
}

fn corpus() -> Vec<LiePresentation> {
    vec![heisenberg(), abelian(), free(&["x", "y"], 4), free(&["x", "y", "z"], 3), genus(1), genus(2), n5(), free2_quintic()]
}

#[test]
fn dimension_count_identity() {
    for pres in corpus() {
        let u = nilpotent_quotient(&pres).unwrap();
        let k = pres.generators().len();
        for (n, (&dim, &ideal)) in u.dims().iter().zip(u.ideal_dims().iter()).enumerate() {
            assert_eq!(dim as u128 + ideal as u128, witt_dim(k, n + 1));
        }
        assert_eq!(lcs_dims(&u), u.dims().iter().copied().take_while(|&d| d > 0).collect::<Vec<_>>());
    }
}

#[test]
fn relation_degrees_match_second_cohomology_below_the_cap() {
    for pres in corpus() {
        let u = nilpotent_quotient(&pres).unwrap();
        if u.dim() > 20 {
            continue;
        }
        let cap = pres.class_cap();
        let h2 = betti(&u, 2).unwrap();
        let from_h2: Vec<usize> = h2
            .by_weight
            .iter()
            .filter(|(w, _)| *w <= cap)
            .flat_map(|&(w, n)| std::iter::repeat_n(w, n))
            .collect();
        assert_eq!(minimal_relation_degrees(&pres).unwrap(), from_h2);
    }
}

#[test]
fn quintic_presentation_has_degree_five_relations() {
    let degrees = minimal_relation_degrees(&free2_quintic()).unwrap();
    assert_eq!(degrees, vec![5; 6]);
    let u = nilpotent_quotient(&free2_quintic()).unwrap();
    assert_eq!(u.dims(), &[2, 1, 2, 3, 0]);
    assert!(u.reduce(&u.algebra().zero()).unwrap().iter().all(Q::is_zero));
}
