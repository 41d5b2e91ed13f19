//! `SL_n(F_q[t, t^-1])` for `n` in {2, 3}: root groups, Borel subgroups,
//! Bruhat and Birkhoff factorizations and local structure of the twin building.
//!
//! Matrices act on `F_q[t, t^-1]^n`; the basis vector `e_i t^m` gets the
//! integer position `i - n m`. In these positions `B+` is upper triangular,
//! `B-` is lower triangular and monomial matrices are affine permutations.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::coxeter::{Sign, WeylElement, WeylGroup};
use crate::datum::affine_a;
use crate::error::{Error, Result};
use crate::field::{Elem, GaloisField};
use crate::laurent::{LaurentMatrix, LaurentPoly, LaurentRing};

/// An element of the affine symmetric group: a bijection `f` of the integers
/// with `f(x + n) = f(x) + n` and `sum f(0..n) = sum 0..n`, stored by its
/// window `f(0), ..., f(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffinePerm {
    window: Vec<i64>,
}

impl AffinePerm {
    pub fn identity(n: usize) -> Self {
        Self {
            window: (0..n as i64).collect(),
        }
    }

    pub fn from_window(window: Vec<i64>) -> Result<Self> {
        let n = window.len() as i64;
        if n == 0 {
            return Err(Error::NotAPermutation("empty window".into()));
        }
        let mut residues: Vec<i64> = window.iter().map(|x| x.rem_euclid(n)).collect();
        residues.sort_unstable();
        if residues != (0..n).collect::<Vec<_>>() {
            return Err(Error::NotAPermutation(format!(
                "{window:?} is not a bijection mod {n}"
            )));
        }
        if window.iter().sum::<i64>() != n * (n - 1) / 2 {
            return Err(Error::NotAPermutation(format!(
                "{window:?} has the wrong sum"
            )));
        }
        Ok(Self { window })
    }

    /// The simple reflection `s_i`: for `i >= 1` it swaps `i-1` and `i`,
    /// `s_0` swaps `-1` and `0`.
    pub fn generator(n: usize, i: usize) -> Self {
        Self::identity(n).times_generator(i)
    }

    pub fn from_word(n: usize, word: &[usize]) -> Self {
        word.iter()
            .fold(Self::identity(n), |f, &i| f.times_generator(i))
    }

    pub fn n(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn apply(&self, x: i64) -> i64 {
        let n = self.n() as i64;
        let r = x.rem_euclid(n);
        self.window[r as usize] + (x - r)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            window: other.window.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let n = self.n() as i64;
        let mut window = vec![0; self.n()];
        for (j, &v) in self.window.iter().enumerate() {
            let r = v.rem_euclid(n);
            window[r as usize] = j as i64 - (v - r);
        }
        Self { window }
    }

    /// `self ∘ s_i`.
    pub fn times_generator(&self, i: usize) -> Self {
        let n = self.n();
        let mut window = self.window.clone();
        if i == 0 {
            let ni = n as i64;
            window[0] = self.window[n - 1] - ni;
            window[n - 1] = self.window[0] + ni;
        } else {
            window.swap(i - 1, i);
        }
        Self { window }
    }

    /// Number of inversions, counted up to translation by `n`.
    pub fn length(&self) -> usize {
        let n = self.n() as i64;
        let mut total = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                total += (self.window[j] - self.window[i])
                    .div_euclid(n)
                    .unsigned_abs() as usize;
            }
        }
        total
    }

    pub fn has_right_descent(&self, i: usize) -> bool {
        if i == 0 {
            self.window[self.n() - 1] - self.n() as i64 > self.window[0]
        } else {
            self.window[i - 1] > self.window[i]
        }
    }

    /// A reduced word, built by stripping the smallest right descent.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut f = self.clone();
        let mut word = Vec::with_capacity(self.length());
        while let Some(i) = (0..f.n()).find(|&i| f.has_right_descent(i)) {
            word.push(i);
            f = f.times_generator(i);
        }
        word.reverse();
        word
    }

    /// Conjugation by `x -> n - 1 - x`; on generators `s_i <-> s_{n-i}`.
    pub fn flip(&self) -> Self {
        let n = self.n() as i64;
        Self {
            window: (0..n).map(|x| n - 1 - self.apply(n - 1 - x)).collect(),
        }
    }
}

impl fmt::Display for AffinePerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.window.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// `M = u · ŵ · b` with `u` in `U_w` and `b` in the Borel subgroup of `sign`.
#[derive(Debug, Clone)]
pub struct BruhatFactorization {
    pub sign: Sign,
    pub w: AffinePerm,
    pub word: WeylElement,
    pub u: LaurentMatrix,
    pub b: LaurentMatrix,
}

/// Chambers through one panel of a positive chamber.
#[derive(Debug, Clone)]
pub struct PanelReport {
    pub panel: usize,
    pub chambers: Vec<LaurentMatrix>,
    pub thickness: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellReport {
    pub w: String,
    pub length: usize,
    pub size: usize,
    pub expected: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefinedBruhatReport {
    pub q: u32,
    pub max_len: usize,
    pub cells: Vec<CellReport>,
    /// Pairs of distinct `(w, u)` whose cosets `u ŵ B+` coincide.
    pub collisions: usize,
    /// Sampled products `u ŵ b` whose factorization returned another `(w, u)`.
    pub mismatches: usize,
    pub samples: usize,
}

impl RefinedBruhatReport {
    pub fn passed(&self) -> bool {
        self.collisions == 0
            && self.mismatches == 0
            && self.cells.iter().all(|c| c.size as u64 == c.expected)
    }
}

/// `SL_n` over `F_q[t, t^-1]` together with its affine Weyl group.
#[derive(Debug, Clone)]
pub struct TwinSl {
    n: usize,
    ring: Arc<LaurentRing>,
    weyl: WeylGroup,
}

impl TwinSl {
    pub fn new(n: usize, field: GaloisField) -> Result<Self> {
        Self::with_ring(n, LaurentRing::new(field))
    }

    pub fn with_ring(n: usize, ring: Arc<LaurentRing>) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::UnsupportedSize(n));
        }
        Ok(Self {
            n,
            ring,
            weyl: WeylGroup::new(affine_a(n)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Arc<LaurentRing> {
        &self.ring
    }

    pub fn field(&self) -> &GaloisField {
        self.ring.field()
    }

    pub fn q(&self) -> u32 {
        self.field().order()
    }

    pub fn weyl_group(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn identity(&self) -> LaurentMatrix {
        LaurentMatrix::identity(&self.ring, self.n)
    }

    fn check_elem(&self, r: Elem) -> Result<()> {
        if self.field().contains(r) {
            Ok(())
        } else {
            Err(Error::InvalidField(format!(
                "{r} is not an element of GF({})",
                self.q()
            )))
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::BadGenerator {
                index: i,
                rank: self.n,
            })
        }
    }

    /// `I + r t^k E_{ij}`, `i != j`.
    pub fn elementary(&self, i: usize, j: usize, k: i64, r: Elem) -> Result<LaurentMatrix> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_elem(r)?;
        if i == j {
            return Err(Error::BadGenerator {
                index: i,
                rank: self.n,
            });
        }
        let mut m = self.identity();
        m.set(i, j, LaurentPoly::monomial(r, k));
        Ok(m)
    }

    /// Simple root group element: `x_i(r) = I + r E_{i-1,i}` for `i >= 1`,
    /// and `x_0(r) = I + r t E_{n-1,0}`.
    pub fn gen_x(&self, i: usize, r: Elem) -> Result<LaurentMatrix> {
        self.check_index(i)?;
        if i == 0 {
            self.elementary(self.n - 1, 0, 1, r)
        } else {
            self.elementary(i - 1, i, 0, r)
        }
    }

    /// Diagonal torus element. For `n = 2` the parameter `[u]` gives
    /// `diag(u, u^-1)`; for `n = 3`, `[u, v]` gives `diag(u, u^-1 v, v^-1)`.
    pub fn gen_torus(&self, params: &[Elem]) -> Result<LaurentMatrix> {
        if params.len() != self.n - 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n - 1,
                got: params.len(),
            });
        }
        let f = self.field();
        let mut inv = Vec::with_capacity(params.len());
        for &p in params {
            self.check_elem(p)?;
            inv.push(
                f.inv(p)
                    .ok_or_else(|| Error::InvalidField("torus parameter is zero".into()))?,
            );
        }
        let diag = if self.n == 2 {
            vec![params[0], inv[0]]
        } else {
            vec![params[0], f.mul(inv[0], params[1]), inv[1]]
        };
        let mut m = self.identity();
        for (i, d) in diag.into_iter().enumerate() {
            m.set(i, i, LaurentPoly::constant(d));
        }
        Ok(m)
    }

    /// Monomial lift of `s_i`: the block `[[0, 1], [-1, 0]]` in rows and
    /// columns `i-1, i` for `i >= 1`; for `s_0`, `-t^-1` at `(0, n-1)` and
    /// `t` at `(n-1, 0)`.
    pub fn gen_lift(&self, i: usize) -> Result<LaurentMatrix> {
        self.check_index(i)?;
        let minus_one = self.field().neg(1);
        let mut m = self.identity();
        let (a, b, up, down) = if i == 0 {
            (
                0,
                self.n - 1,
                LaurentPoly::monomial(minus_one, -1),
                LaurentPoly::monomial(1, 1),
            )
        } else {
            (
                i - 1,
                i,
                LaurentPoly::constant(1),
                LaurentPoly::constant(minus_one),
            )
        };
        m.set(a, a, LaurentPoly::zero());
        m.set(b, b, LaurentPoly::zero());
        m.set(a, b, up);
        m.set(b, a, down);
        Ok(m)
    }

    /// Canonical lift `ŵ`: product of the generator lifts along the normal form.
    pub fn lift(&self, w: &WeylElement) -> Result<LaurentMatrix> {
        let lifts = w
            .word()
            .iter()
            .map(|&i| self.gen_lift(i))
            .collect::<Result<Vec<_>>>()?;
        LaurentMatrix::product(&self.ring, self.n, &lifts)
    }

    pub fn lift_perm(&self, w: &AffinePerm) -> Result<LaurentMatrix> {
        self.lift(&self.to_weyl(w)?)
    }

    pub fn to_weyl(&self, w: &AffinePerm) -> Result<WeylElement> {
        if w.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: w.n(),
            });
        }
        self.weyl.from_word(&w.reduced_word())
    }

    pub fn to_perm(&self, w: &WeylElement) -> AffinePerm {
        AffinePerm::from_word(self.n, w.word())
    }

    /// The affine permutation of a monomial matrix.
    pub fn monomial_perm(&self, m: &LaurentMatrix) -> Option<AffinePerm> {
        let n = self.n as i64;
        let mut window = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut hit = None;
            for i in 0..self.n {
                let p = m.get(i, j);
                if p.is_zero() {
                    continue;
                }
                let (_, k) = p.as_monomial()?;
                if hit.is_some() {
                    return None;
                }
                hit = Some(i as i64 - n * k);
            }
            window.push(hit?);
        }
        AffinePerm::from_window(window).ok()
    }

    /// Membership in `B+` (entries in `K[t]`, strictly lower part in `tK[t]`)
    /// or `B-` (entries in `K[t^-1]`, strictly upper part in `t^-1 K[t^-1]`).
    pub fn in_borel(&self, m: &LaurentMatrix, sign: Sign) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let p = m.get(i, j);
                match (sign, p.valuation(), p.degree()) {
                    (_, None, _) => true,
                    (Sign::Plus, Some(v), _) => v >= i64::from(i > j),
                    (Sign::Minus, _, Some(d)) => d <= -i64::from(i < j),
                    (Sign::Minus, _, None) => true,
                }
            })
        })
    }

    /// Membership in the unipotent radical `U+` or `U-`.
    pub fn in_unipotent(&self, m: &LaurentMatrix, sign: Sign) -> bool {
        self.in_borel(m, sign) && (0..self.n).all(|i| m.get(i, i).coeff(0) == 1)
    }

    /// Membership in `U_w = U+ ∩ ŵ U- ŵ^-1` (or the opposite for `sign = -`).
    pub fn in_twisted_unipotent(
        &self,
        u: &LaurentMatrix,
        w: &AffinePerm,
        sign: Sign,
    ) -> Result<bool> {
        if !self.in_unipotent(u, sign) {
            return Ok(false);
        }
        let lift = self.lift_perm(w)?;
        let conj = lift.inverse()?.mul(u)?.mul(&lift)?;
        Ok(self.in_unipotent(&conj, sign.flip()))
    }

    /// The automorphism `M(t) -> P M(t^-1) P`, `P` antidiagonal. It swaps
    /// `B+` and `B-`.
    pub fn opposite(&self, m: &LaurentMatrix) -> LaurentMatrix {
        m.map(LaurentPoly::invert_variable).flip()
    }

    /// Column elimination to a matrix whose column pivots sit in distinct
    /// rows. Column operations are right multiplications by elementary
    /// matrices of `B+` (`target = Plus`) or `B-` (`target = Minus`).
    fn eliminate(
        &self,
        m: &LaurentMatrix,
        target: Sign,
    ) -> Result<(AffinePerm, LaurentMatrix, LaurentMatrix)> {
        let n = self.n;
        let f = self.field().clone();
        let mut y = m.clone();
        let mut track = self.identity();
        loop {
            let pivots: Vec<(i64, usize)> = (0..n).map(|j| pivot(&y, j)).collect::<Result<_>>()?;
            let clash = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .find(|&(a, b)| pivots[a].1 == pivots[b].1);
            let Some((a, b)) = clash else {
                let window = pivots
                    .iter()
                    .map(|&(k, i)| i as i64 - n as i64 * k)
                    .collect();
                let w = AffinePerm::from_window(window)?;
                return Ok((w, y, track));
            };
            let (ka, kb) = (pivots[a].0, pivots[b].0);
            // (cleared column, pivot column); the cleared column loses its pivot
            let (x, z) = match target {
                Sign::Plus if ka == kb => (b, a),
                Sign::Plus => {
                    if ka > kb {
                        (a, b)
                    } else {
                        (b, a)
                    }
                }
                Sign::Minus if ka == kb => (a, b),
                Sign::Minus => {
                    if ka > kb {
                        (b, a)
                    } else {
                        (a, b)
                    }
                }
            };
            let row = pivots[x].1;
            let shift = pivots[x].0 - pivots[z].0;
            let lead_x = y.get(row, x).coeff(pivots[x].0);
            let lead_z = y.get(row, z).coeff(pivots[z].0);
            let c = f.mul(lead_x, f.inv(lead_z).expect("pivot is nonzero"));
            column_op(&f, &mut y, x, z, c, shift);
            column_op(&f, &mut track, x, z, c, shift);
            for i in 0..n {
                if y.get(i, x)
                    .terms()
                    .any(|(e, _)| e.abs() > self.ring.degree_cap())
                {
                    return Err(Error::DegreeBudgetExceeded {
                        exponent: y
                            .get(i, x)
                            .terms()
                            .map(|(e, _)| e)
                            .max_by_key(|e| e.abs())
                            .unwrap_or(0),
                        cap: self.ring.degree_cap(),
                    });
                }
            }
        }
    }

    /// The unique `(w, u)` with `M ∈ u ŵ B_sign`, `u ∈ U_w`.
    pub fn bruhat_decompose(&self, m: &LaurentMatrix, sign: Sign) -> Result<BruhatFactorization> {
        self.check_special(m)?;
        match sign {
            Sign::Plus => self.bruhat_plus(m),
            Sign::Minus => {
                let opp = self.bruhat_plus(&self.opposite(m))?;
                let w = opp.w.flip();
                let lift = self.lift_perm(&w)?;
                let u = self.opposite(&opp.u);
                let d = lift
                    .inverse()?
                    .mul(&self.opposite(&self.lift_perm(&opp.w)?))?;
                let b = d.mul(&self.opposite(&opp.b))?;
                debug_assert_eq!(u.mul(&lift)?.mul(&b)?, *m);
                Ok(BruhatFactorization {
                    sign,
                    word: self.to_weyl(&w)?,
                    w,
                    u,
                    b,
                })
            }
        }
    }

    fn bruhat_plus(&self, m: &LaurentMatrix) -> Result<BruhatFactorization> {
        let (w, y, _) = self.eliminate(m, Sign::Plus)?;
        let lift = self.lift_perm(&w)?;
        // z = y ŵ^-1 is upper triangular in positions, hence in B+
        let z = y.mul(&lift.inverse()?)?;
        let u_inv = self.twisted_part(&z, &w)?;
        let u = u_inv.inverse()?;
        let b = lift.inverse()?.mul(&u_inv)?.mul(m)?;
        if !self.in_borel(&b, Sign::Plus) || u.mul(&lift)?.mul(&b)? != *m {
            return Err(Error::VerificationFailed(
                "Bruhat factorization does not recompose".into(),
            ));
        }
        Ok(BruhatFactorization {
            sign: Sign::Plus,
            word: self.to_weyl(&w)?,
            w,
            u,
            b,
        })
    }

    /// For `z` in `B+`, the unique `x` in `U_w` with `ŵ^-1 x z ŵ ∈ B+`,
    /// solved entry by entry over the inversion pairs of `w^-1`.
    fn twisted_part(&self, z: &LaurentMatrix, w: &AffinePerm) -> Result<LaurentMatrix> {
        let n = self.n as i64;
        let f = self.field().clone();
        let v = w.inverse();
        let reach = v
            .window()
            .iter()
            .enumerate()
            .map(|(j, &x)| (x - j as i64).abs())
            .max()
            .unwrap_or(0);
        let entry = |rho: i64, kappa: i64| -> Elem {
            let (ir, mr) = split(rho, n);
            let (ik, mk) = split(kappa, n);
            z.get(ir, ik).coeff(mr - mk)
        };
        let mut x = self.identity();
        for rho in 0..n {
            let mut solved: Vec<(i64, Elem)> = Vec::new();
            for kappa in rho + 1..rho + 2 * reach + 1 {
                if v.apply(kappa) >= v.apply(rho) {
                    continue;
                }
                let mut acc = entry(rho, kappa);
                for &(sigma, val) in &solved {
                    acc = f.add(acc, f.mul(val, entry(sigma, kappa)));
                }
                let diag = f.inv(entry(kappa, kappa)).expect("z has a unit diagonal");
                let val = f.neg(f.mul(acc, diag));
                solved.push((kappa, val));
                let (ik, mk) = split(kappa, n);
                let mut p = x.get(rho as usize, ik).clone();
                p.add_term(&f, -mk, val);
                x.set(rho as usize, ik, p);
            }
        }
        Ok(x)
    }

    /// The `w` with `X ∈ B_sign ŵ B_{-sign}`.
    pub fn birkhoff(&self, x: &LaurentMatrix, sign: Sign) -> Result<AffinePerm> {
        self.check_special(x)?;
        match sign {
            Sign::Plus => Ok(self.eliminate(x, Sign::Minus)?.0),
            Sign::Minus => Ok(self.eliminate(&self.opposite(x), Sign::Minus)?.0.flip()),
        }
    }

    /// W-distance between the positive chambers `gB+` and `hB+`.
    pub fn distance(&self, g: &LaurentMatrix, h: &LaurentMatrix) -> Result<AffinePerm> {
        Ok(self.bruhat_decompose(&g.inverse()?.mul(h)?, Sign::Plus)?.w)
    }

    /// Codistance from the positive chamber `gB+` to the negative chamber `hB-`.
    pub fn codistance(&self, g: &LaurentMatrix, h: &LaurentMatrix) -> Result<AffinePerm> {
        self.birkhoff(&g.inverse()?.mul(h)?, Sign::Plus)
    }

    /// Codistance from the negative chamber `hB-` to the positive chamber `gB+`.
    pub fn codistance_from_negative(
        &self,
        h: &LaurentMatrix,
        g: &LaurentMatrix,
    ) -> Result<AffinePerm> {
        self.birkhoff(&h.inverse()?.mul(g)?, Sign::Minus)
    }

    fn check_special(&self, m: &LaurentMatrix) -> Result<()> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: m.n(),
            });
        }
        let d = m.det();
        if d != LaurentPoly::constant(1) {
            return Err(Error::NotUnimodular(format!(
                "determinant is {}",
                d.format()
            )));
        }
        Ok(())
    }

    /// All `q^l(w)` elements of `U_w`, as products of root group elements
    /// over the inversion set of `w^-1`.
    pub fn twisted_unipotent(&self, w: &WeylElement) -> Result<Vec<LaurentMatrix>> {
        let word = w.word();
        let mut conjugators = Vec::with_capacity(word.len());
        let mut prefix = self.identity();
        for &i in word {
            conjugators.push((prefix.clone(), prefix.inverse()?, i));
            prefix = prefix.mul(&self.gen_lift(i)?)?;
        }
        let mut out = vec![self.identity()];
        for (p, p_inv, i) in conjugators {
            let mut next = Vec::with_capacity(out.len() * self.q() as usize);
            for u in &out {
                for r in self.field().elements() {
                    let root = p.mul(&self.gen_x(i, r)?)?.mul(&p_inv)?;
                    next.push(u.mul(&root)?);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// All elements of the constant diagonal torus `T(F_q)`.
    pub fn torus(&self) -> Result<Vec<LaurentMatrix>> {
        let units: Vec<Elem> = self.field().elements().filter(|&x| x != 0).collect();
        let mut out = Vec::new();
        if self.n == 2 {
            for &u in &units {
                out.push(self.gen_torus(&[u])?);
            }
        } else {
            for &u in &units {
                for &v in &units {
                    out.push(self.gen_torus(&[u, v])?);
                }
            }
        }
        Ok(out)
    }

    /// `B+ ∩ ŵ B- ŵ^-1 = T U_w`, the fixator of the chambers `B+` and `ŵ B-`.
    /// Every element is checked against both stabilizers.
    pub fn fixator(&self, w: &WeylElement) -> Result<Vec<LaurentMatrix>> {
        let lift = self.lift(w)?;
        let lift_inv = lift.inverse()?;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for t in self.torus()? {
            for u in self.twisted_unipotent(w)? {
                let g = t.mul(&u)?;
                let fixes_minus = self.in_borel(&lift_inv.mul(&g)?.mul(&lift)?, Sign::Minus);
                if self.in_borel(&g, Sign::Plus) && fixes_minus && seen.insert(g.clone()) {
                    out.push(g);
                }
            }
        }
        Ok(out)
    }

    /// `|B+ ∩ B-|`, counted over all constant matrices of determinant one
    /// (the intersection consists of constant matrices).
    pub fn opposite_stabilizer_order(&self, cap: usize) -> Result<usize> {
        let q = self.q() as usize;
        let cells = self.n * self.n;
        let total = q.checked_pow(cells as u32).filter(|&t| t <= cap);
        let Some(total) = total else {
            return Err(Error::ResourceBudgetExceeded {
                what: "constant matrices",
                cap,
            });
        };
        let mut count = 0;
        let mut digits = vec![0u32; cells];
        for _ in 0..total {
            let rows = (0..self.n)
                .map(|i| {
                    (0..self.n)
                        .map(|j| LaurentPoly::constant(digits[i * self.n + j]))
                        .collect()
                })
                .collect();
            let m = LaurentMatrix::from_rows(&self.ring, rows)?;
            if m.det() == LaurentPoly::constant(1)
                && self.in_borel(&m, Sign::Plus)
                && self.in_borel(&m, Sign::Minus)
            {
                count += 1;
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < q as u32 {
                    break;
                }
                *d = 0;
            }
        }
        Ok(count)
    }

    /// The chambers `g x_i(r) ŝ_i B+` (`r ∈ F_q`) together with `gB+`; checks
    /// that they are pairwise distinct and pairwise `s_i`-adjacent.
    pub fn thickness_at_panel(&self, g: &LaurentMatrix, i: usize) -> Result<PanelReport> {
        self.check_special(g)?;
        let lift = self.gen_lift(i)?;
        let mut chambers = vec![g.clone()];
        for r in self.field().elements() {
            chambers.push(g.mul(&self.gen_x(i, r)?)?.mul(&lift)?);
        }
        let s = AffinePerm::generator(self.n, i);
        for a in 0..chambers.len() {
            for b in a + 1..chambers.len() {
                let d = self.distance(&chambers[a], &chambers[b])?;
                if d != s {
                    return Err(Error::VerificationFailed(format!(
                        "chambers {a} and {b} through panel {i} are at distance {d}"
                    )));
                }
            }
        }
        Ok(PanelReport {
            panel: i,
            thickness: chambers.len(),
            chambers,
        })
    }

    /// Exhaustive check of `G = ⊔ U_w ŵ B+` over `l(w) <= max_len`.
    pub fn verify_refined_bruhat<R: Rng>(
        &self,
        max_len: usize,
        samples: usize,
        rng: &mut R,
    ) -> Result<RefinedBruhatReport> {
        if max_len > 4 {
            return Err(Error::ResourceBudgetExceeded {
                what: "refined Bruhat length",
                cap: 4,
            });
        }
        let q = self.q();
        let mut cells = Vec::new();
        let mut reps: Vec<(AffinePerm, LaurentMatrix, LaurentMatrix)> = Vec::new();
        for sphere in self.weyl.ball(max_len)? {
            for w in sphere {
                let perm = self.to_perm(&w);
                let lift = self.lift(&w)?;
                let us = self.twisted_unipotent(&w)?;
                let distinct: HashSet<&LaurentMatrix> = us.iter().collect();
                let mut size = distinct.len();
                for u in &us {
                    if !self.in_twisted_unipotent(u, &perm, Sign::Plus)? {
                        size = 0;
                    }
                }
                cells.push(CellReport {
                    w: self.weyl.format(&w),
                    length: w.length(),
                    size,
                    expected: u64::from(q).pow(w.length() as u32),
                });
                for u in distinct {
                    reps.push((perm.clone(), u.clone(), u.mul(&lift)?));
                }
            }
        }
        let inverses = reps
            .iter()
            .map(|(_, _, g)| g.inverse())
            .collect::<Result<Vec<_>>>()?;
        let mut collisions = 0;
        for a in 0..reps.len() {
            for b in a + 1..reps.len() {
                if self.in_borel(&inverses[a].mul(&reps[b].2)?, Sign::Plus) {
                    collisions += 1;
                }
            }
        }
        let mut mismatches = 0;
        for _ in 0..samples {
            let (w, u, g) = &reps[rng.gen_range(0..reps.len())];
            let b = self.random_borel(rng, Sign::Plus, 3)?;
            let fact = self.bruhat_decompose(&g.mul(&b)?, Sign::Plus)?;
            if fact.w != *w || fact.u != *u {
                mismatches += 1;
            }
        }
        Ok(RefinedBruhatReport {
            q,
            max_len,
            cells,
            collisions,
            mismatches,
            samples,
        })
    }

    /// A random field element, nonzero if asked.
    pub fn random_elem<R: Rng>(&self, rng: &mut R, nonzero: bool) -> Elem {
        let q = self.q();
        if nonzero {
            rng.gen_range(1..q)
        } else {
            rng.gen_range(0..q)
        }
    }

    /// Product of `factors` random elements of `B_sign` of small degree.
    pub fn random_borel<R: Rng>(
        &self,
        rng: &mut R,
        sign: Sign,
        factors: usize,
    ) -> Result<LaurentMatrix> {
        let mut m = self.identity();
        for _ in 0..factors {
            let i = rng.gen_range(0..self.n);
            let j = (i + rng.gen_range(1..self.n)) % self.n;
            let k = rng.gen_range(i64::from(i > j)..3);
            let r = self.random_elem(rng, false);
            m = m.mul(&self.elementary(i, j, k, r)?)?;
        }
        let params: Vec<Elem> = (1..self.n).map(|_| self.random_elem(rng, true)).collect();
        m = m.mul(&self.gen_torus(&params)?)?;
        Ok(match sign {
            Sign::Plus => m,
            Sign::Minus => self.opposite(&m),
        })
    }

    /// Product of `factors` random root group elements and generator lifts.
    pub fn random_element<R: Rng>(&self, rng: &mut R, factors: usize) -> Result<LaurentMatrix> {
        let mut m = self.identity();
        for _ in 0..factors {
            let i = rng.gen_range(0..self.n);
            let g = if rng.gen_bool(0.3) {
                self.gen_lift(i)?
            } else {
                self.gen_x(i, self.random_elem(rng, false))?
            };
            m = m.mul(&g)?;
        }
        Ok(m)
    }
}

/// `(k, i)`: the lowest exponent `k` in column `j` and the last row `i`
/// where it occurs.
fn pivot(m: &LaurentMatrix, j: usize) -> Result<(i64, usize)> {
    let mut best: Option<(i64, usize)> = None;
    for i in 0..m.n() {
        if let Some(v) = m.get(i, j).valuation() {
            if best.map_or(true, |(k, _)| v <= k) {
                best = Some((v, i));
            }
        }
    }
    best.ok_or_else(|| Error::NotUnimodular(format!("column {j} vanished")))
}

/// `col_x -= c t^shift col_z`.
fn column_op(f: &GaloisField, m: &mut LaurentMatrix, x: usize, z: usize, c: Elem, shift: i64) {
    let minus_c = f.neg(c);
    for i in 0..m.n() {
        let delta = m.get(i, z).scale(f, minus_c, shift);
        if !delta.is_zero() {
            let v = m.get(i, x).add(f, &delta);
            m.set(i, x, v);
        }
    }
}

/// Position `p = i - n m` to `(i, m)`.
fn split(p: i64, n: i64) -> (usize, i64) {
    let i = p.rem_euclid(n);
    (i as usize, (i - p) / n)
}
