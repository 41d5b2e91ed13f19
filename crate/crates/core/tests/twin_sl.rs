use kmlat::coxeter::Sign;
use kmlat::field::GaloisField;
use kmlat::laurent::{LaurentMatrix, LaurentPoly};
use kmlat::sl::{AffinePerm, TwinSl};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn twin(n: usize, q: u64) -> TwinSl {
    TwinSl::new(n, GaloisField::from_order(q).unwrap()).unwrap()
}

const CASES: [(usize, u64); 5] = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn products_stay_unimodular(case in 0usize..5, seed in any::<u64>(), factors in 1usize..12) {
        let (n, q) = CASES[case];
        let g = twin(n, q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..n {
            prop_assert_eq!(g.gen_lift(i).unwrap().det(), LaurentPoly::constant(1));
            prop_assert_eq!(g.gen_x(i, g.random_elem(&mut rng, false)).unwrap().det(), LaurentPoly::constant(1));
        }
        let m = g.random_element(&mut rng, factors).unwrap();
        prop_assert_eq!(m.det(), LaurentPoly::constant(1));
        prop_assert_eq!(m.mul(&m.inverse().unwrap()).unwrap(), g.identity());
    }

    #[test]
    fn bruhat_recomposes_exactly(case in 0usize..5, seed in any::<u64>(), plus in any::<bool>()) {
        let (n, q) = CASES[case];
        let g = twin(n, q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = g.random_element(&mut rng, 8).unwrap();
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let f = g.bruhat_decompose(&m, sign).unwrap();
        let back = f.u.mul(&g.lift_perm(&f.w).unwrap()).unwrap().mul(&f.b).unwrap();
        prop_assert_eq!(back, m);
        prop_assert!(g.in_borel(&f.b, sign));
        prop_assert_eq!(g.to_perm(&f.word), f.w);
    }

    #[test]
    fn codistance_is_inverse_symmetric_and_well_defined(case in 0usize..5, seed in any::<u64>()) {
        let (n, q) = CASES[case];
        let g = twin(n, q);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = g.random_element(&mut rng, 6).unwrap();
        let y = g.random_element(&mut rng, 6).unwrap();
        let d = g.codistance(&x, &y).unwrap();
        prop_assert_eq!(g.codistance_from_negative(&y, &x).unwrap(), d.inverse());
        let xb = x.mul(&g.random_borel(&mut rng, Sign::Plus, 3).unwrap()).unwrap();
        let yb = y.mul(&g.random_borel(&mut rng, Sign::Minus, 3).unwrap()).unwrap();
        prop_assert_eq!(g.codistance(&xb, &yb).unwrap(), d);
        let xb2 = x.mul(&g.random_borel(&mut rng, Sign::Plus, 3).unwrap()).unwrap();
        prop_assert_eq!(g.distance(&xb, &xb2).unwrap(), AffinePerm::identity(n));
    }
}

/// Polynomials over a prime field in `s = t^-1`, lowest coefficient first.
fn polys(p: u32, degree: usize) -> Vec<Vec<u32>> {
    let total = (p as usize).pow(degree as u32 + 1);
    (0..total)
        .map(|mut code| {
            (0..=degree)
                .map(|_| {
                    let c = (code % p as usize) as u32;
                    code /= p as usize;
                    c
                })
                .collect()
        })
        .collect()
}

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut out = vec![0; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Exact quotient `a / b`, if any.
fn poly_div(a: &[u32], b: &[u32], p: u32) -> Option<Vec<u32>> {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    let lead_inv = (1..p).find(|x| x * b[b.len() - 1] % p == 1)?;
    let mut quot = vec![0; rem.len().max(b.len())];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem[rem.len() - 1] * lead_inv % p;
        quot[shift] = c;
        for (i, &y) in b.iter().enumerate() {
            rem[shift + i] = (rem[shift + i] + p - c * y % p) % p;
        }
        rem = trim(rem);
    }
    rem.is_empty().then(|| trim(quot))
}

fn laurent(field: &GaloisField, a: &[u32]) -> LaurentPoly {
    LaurentPoly::from_terms(field, a.iter().enumerate().map(|(k, &c)| (-(k as i64), c)))
}

/// Elements `[[a, b], [c, d]]` of `B-` with `a(0) != 0`, `b(0) = 0` and
/// degrees in `t^-1` at most `degree`.
fn negative_borel(g: &TwinSl, degree: usize) -> Vec<LaurentMatrix> {
    let p = g.q();
    let all = polys(p, degree);
    let mut out = Vec::new();
    for a in all.iter().filter(|a| a[0] != 0) {
        for b in all.iter().filter(|b| b[0] == 0) {
            for c in &all {
                let mut rhs = poly_mul(b, c, p);
                if rhs.is_empty() {
                    rhs.push(0);
                }
                rhs[0] = (rhs[0] + 1) % p;
                let Some(d) = poly_div(&rhs, a, p) else {
                    continue;
                };
                if d.len() > degree + 1 {
                    continue;
                }
                let f = g.field();
                let m = LaurentMatrix::from_rows(
                    g.ring(),
                    vec![
                        vec![laurent(f, a), laurent(f, b)],
                        vec![laurent(f, c), laurent(f, &d)],
                    ],
                )
                .unwrap();
                assert_eq!(m.det(), LaurentPoly::constant(1));
                assert!(g.in_borel(&m, Sign::Minus), "{m}");
                out.push(m);
            }
        }
    }
    out
}

#[test]
fn opposition_matches_stabilizer_intersections() {
    for q in [2u64, 3] {
        let g = twin(2, q);
        let borel_minus = negative_borel(&g, 2);
        let mut by_codistance = 0;
        let mut by_stabilizer = 0;
        let mut chambers = 0;
        for w in g.weyl_group().ball(2).unwrap().into_iter().flatten() {
            let lift = g.lift(&w).unwrap();
            for u in g.twisted_unipotent(&w).unwrap() {
                let chamber = u.mul(&lift).unwrap();
                let inv = chamber.inverse().unwrap();
                let opposite =
                    g.codistance(&chamber, &g.identity()).unwrap() == AffinePerm::identity(2);
                let common = borel_minus
                    .iter()
                    .filter(|b| g.in_borel(&inv.mul(b).unwrap().mul(&chamber).unwrap(), Sign::Plus))
                    .count();
                assert!(common >= (q - 1) as usize);
                assert_eq!(
                    opposite,
                    common == (q - 1) as usize,
                    "q = {q}, w = {}",
                    g.weyl_group().format(&w)
                );
                by_codistance += usize::from(opposite);
                by_stabilizer += usize::from(common == (q - 1) as usize);
                chambers += 1;
            }
        }
        assert_eq!(chambers as u64, 1 + 2 * q + 2 * q * q);
        assert_eq!(by_codistance, by_stabilizer);
        assert!(by_codistance > 0 && by_codistance < chambers);
    }
}

#[test]
fn sl3_panels_have_q_plus_one_chambers() {
    for q in [2u64, 3] {
        let g = twin(3, q);
        let mut rng = ChaCha8Rng::seed_from_u64(q);
        for _ in 0..4 {
            let m = g.random_element(&mut rng, 5).unwrap();
            for i in 0..3 {
                assert_eq!(g.thickness_at_panel(&m, i).unwrap().thickness as u64, q + 1);
            }
        }
    }
}
