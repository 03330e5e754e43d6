mod common;

use std::collections::BTreeMap;

use common::{free, q};
use nilpotent_lie::bch::{bch, group_commutator, group_mul, lattice_closed, GroupElement, LatticeSpec};
use nilpotent_lie::{nilpotent_quotient, FreeLieAlgebra, LieElement, Q};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Poly = BTreeMap<Vec<u8>, Q>;

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (u, x) in a {
        for (v, y) in b {
            let mut uv = u.clone();
            uv.extend(v);
            *out.entry(uv).or_insert_with(Q::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (w, c) in b {
        *out.entry(w.clone()).or_insert_with(Q::zero) -= c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn right_normed(word: &[u8]) -> Poly {
    let letter = |l: u8| Poly::from([(vec![l], Q::one())]);
    let mut acc = letter(word[word.len() - 1]);
    for &l in word[..word.len() - 1].iter().rev() {
        let x = letter(l);
        acc = sub(&mul(&x, &acc), &mul(&acc, &x));
    }
    acc
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).map(q).product()
}

/// Dynkin's closed form for `log(e^X e^Y)` (X = letter 0, Y = letter 1), up to degree `n`.
fn dynkin(n: usize) -> Poly {
    let mut out = Poly::new();
    // all sequences ((p1,q1),…,(pk,qk)) with p_i+q_i ≥ 1 and total ≤ n
    fn rec(n: usize, used: usize, seq: &mut Vec<(usize, usize)>, out: &mut Poly) {
        if !seq.is_empty() {
            let k = seq.len() as i64;
            let total = used;
            let mut coeff = Q::new(if k % 2 == 1 { 1.into() } else { (-1).into() }, k.into());
            coeff /= q(total as i64);
            let mut word = Vec::new();
            for &(p, r) in seq.iter() {
                coeff /= factorial(p) * factorial(r);
                word.extend(std::iter::repeat_n(0u8, p));
                word.extend(std::iter::repeat_n(1u8, r));
            }
            for (w, c) in right_normed(&word) {
                *out.entry(w).or_insert_with(Q::zero) += c * &coeff;
            }
        }
        for p in 0..=(n - used) {
            for r in 0..=(n - used - p) {
                if p + r == 0 {
                    continue;
                }
                seq.push((p, r));
                rec(n, used + p + r, seq, out);
                seq.pop();
            }
        }
    }
    rec(n, 0, &mut Vec::new(), &mut out);
    out.retain(|_, c| !c.is_zero());
    out
}

#[test]
fn bch_matches_dynkin_form() {
    for n in 1..=5 {
        let alg = FreeLieAlgebra::with_names(&["x", "y"], n).unwrap();
        let z = bch(&alg.generator("x").unwrap(), &alg.generator("y").unwrap(), n).unwrap();
        let expanded: Poly = alg.expand(&z).terms().map(|(w, c)| (w.clone(), c.clone())).collect();
        assert_eq!(expanded, dynkin(n), "degree {n}");
    }
}

fn random_element(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Q> {
    (0..dim).map(|_| Q::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=2).into())).collect()
}

#[test]
fn group_law_is_associative() {
    let u = nilpotent_quotient(&free(&["x", "y"], 6)).unwrap();
    assert_eq!(u.dims(), &[2, 1, 2, 3, 6, 9]);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let [a, b, c] = [0; 3].map(|_| GroupElement::new(&u, random_element(&mut rng, u.dim())).unwrap());
        let left = group_mul(&u, &group_mul(&u, &a, &b).unwrap(), &c).unwrap();
        let right = group_mul(&u, &a, &group_mul(&u, &b, &c).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

fn integral_lattice(alg: &std::sync::Arc<FreeLieAlgebra>, denominators: [i64; 3]) -> Vec<LieElement> {
    let e = |s: &str| alg.rewrite(&parse(s)).unwrap();
    let [d2, d12, d24] = denominators.map(|d| Q::new(1.into(), d.into()));
    vec![
        e("x"),
        e("y"),
        e("[x,y]").scale(&d2),
        e("[x,[x,y]]").scale(&d12),
        e("[y,[x,y]]").scale(&d12),
        e("[x,[x,[x,y]]]").scale(&d24),
        e("[x,[y,[x,y]]]").scale(&d24),
        e("[y,[y,[x,y]]]").scale(&d24),
    ]
}

/// Bracket expressions over single-letter names.
fn parse(s: &str) -> nilpotent_lie::Expr {
    fn go(s: &[u8], i: &mut usize) -> nilpotent_lie::Expr {
        if s[*i] == b'[' {
            *i += 1;
            let a = go(s, i);
            *i += 1; // ','
            let b = go(s, i);
            *i += 1; // ']'
            nilpotent_lie::Expr::bracket(a, b)
        } else {
            *i += 1;
            nilpotent_lie::Expr::gen(std::str::from_utf8(&s[*i - 1..*i]).unwrap())
        }
    }
    go(s.as_bytes(), &mut 0)
}

#[test]
fn class_four_lattice_closure() {
    let u = nilpotent_quotient(&free(&["x", "y"], 4)).unwrap();
    let alg = u.algebra().clone();
    let full = LatticeSpec { basis: integral_lattice(&alg, [2, 12, 24]) };
    assert!(lattice_closed(&u, &full).unwrap().is_closed());
    for drop in 0..3 {
        let mut dens = [2, 12, 24];
        dens[drop] = 1;
        let lat = LatticeSpec { basis: integral_lattice(&alg, dens) };
        assert!(!lattice_closed(&u, &lat).unwrap().is_closed(), "denominators {dens:?} should fail");
    }
}

#[test]
fn commutator_matches_free_bch() {
    let u = nilpotent_quotient(&free(&["x", "y"], 4)).unwrap();
    let alg = u.algebra().clone();
    let (x, y) = (alg.generator("x").unwrap(), alg.generator("y").unwrap());
    let free_comm = bch(&bch(&bch(&x, &y, 4).unwrap(), &x.neg(), 4).unwrap(), &y.neg(), 4).unwrap();
    let gx = GroupElement::from_lie(&u, &x).unwrap();
    let gy = GroupElement::from_lie(&u, &y).unwrap();
    let c = group_commutator(&u, &gx, &gy).unwrap();
    assert_eq!(c.log_element(&u), free_comm);
}
