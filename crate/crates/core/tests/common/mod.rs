#![allow(dead_code)]

use std::sync::Arc;

use nilpotent_lie::{Expr, FreeLieAlgebra, LiePresentation, Q};
use num_traits::{One, Zero};

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn g(n: &str) -> Expr {
    Expr::gen(n)
}

pub fn br(a: Expr, b: Expr) -> Expr {
    Expr::bracket(a, b)
}

/// Rank by plain Gaussian elimination, kept separate from the library's
/// echelon code.
pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Q::one() / rows[r][c].clone();
        for i in (r + 1)..rows.len() {
            if rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone() * &inv;
            for j in c..ncols {
                let sub = rows[r][j].clone() * &f;
                rows[i][j] -= sub;
            }
        }
        r += 1;
    }
    r
}

pub fn presentation(names: &[&str], class: usize, rels: &[Expr]) -> LiePresentation {
    let alg = FreeLieAlgebra::with_names(names, class).unwrap();
    build(&alg, rels)
}

fn build(alg: &Arc<FreeLieAlgebra>, rels: &[Expr]) -> LiePresentation {
    if rels.is_empty() {
        return LiePresentation::free(alg.clone());
    }
    let rels = rels.iter().map(|r| alg.rewrite(r).unwrap()).collect();
    LiePresentation::new(alg.clone(), rels).unwrap()
}

pub fn heisenberg() -> LiePresentation {
    presentation(&["x", "y"], 3, &[br(g("x"), br(g("x"), g("y"))), br(g("y"), br(g("x"), g("y")))])
}

pub fn abelian() -> LiePresentation {
    presentation(&["x", "y"], 2, &[br(g("x"), g("y"))])
}

pub fn free(names: &[&str], class: usize) -> LiePresentation {
    presentation(names, class, &[])
}

pub fn genus(n: usize) -> LiePresentation {
    let names: Vec<String> = (1..=n).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let rel = Expr::sum((1..=n).map(|i| (q(1), br(g(&format!("a{i}")), g(&format!("b{i}"))))).collect());
    presentation(&refs, 4, &[rel])
}

/// Serre-type relations of the strictly upper triangular 5×5 matrices on
/// the simple root vectors `e1..e4`.
pub fn n5() -> LiePresentation {
    let e = |i: usize| g(&format!("e{i}"));
    let mut rels = Vec::new();
    for i in 1..=4 {
        for j in (i + 1)..=4 {
            if j - i >= 2 {
                rels.push(br(e(i), e(j)));
            } else {
                rels.push(br(e(i), br(e(i), e(j))));
                rels.push(br(e(j), br(e(j), e(i))));
            }
        }
    }
    presentation(&["e1", "e2", "e3", "e4"], 5, &rels)
}

/// Two generators, class 5, every length-5 basis bracket imposed.
pub fn free2_quintic() -> LiePresentation {
    let alg = FreeLieAlgebra::with_names(&["x", "y"], 5).unwrap();
    let rels = alg.basis_words(5).into_iter().map(|w| alg.basis_element(w)).collect();
    LiePresentation::new(alg, rels).unwrap()
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}
