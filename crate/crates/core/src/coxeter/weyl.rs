//! Weyl group arithmetic.
//!
//! Elements are identified with the image `w·x0` of the point `x0 = (1,...,1)`
//! of the open fundamental chamber, written in coordinates `x_s = a_s(x)`.
//! This orbit map is injective, and `l(sw) < l(w)` exactly when the `s`
//! coordinate of `w·x0` is negative, which gives both the length and the
//! ShortLex normal form by greedy descent.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::gcm::GeneralizedCartanMatrix;
use super::vector::RootVector;
use crate::error::{Error, Result};

/// Default cap on the number of elements held by a ball enumeration.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// A Weyl group element stored as its ShortLex-least reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeylElement {
    word: Vec<usize>,
}

impl WeylElement {
    pub fn identity() -> Self {
        Self { word: Vec::new() }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("e");
        }
        let letters: Vec<String> = self.word.iter().map(|s| format!("s{s}")).collect();
        f.write_str(&letters.join(" "))
    }
}

/// Outcome of [`WeylGroup::order_of_product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductOrder {
    Finite(usize),
    /// No power up to the cutoff is trivial; this is not a proof of infinite order.
    ExceedsCutoff(usize),
}

/// The Weyl group of a generalized Cartan matrix.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    gcm: GeneralizedCartanMatrix,
    cap: usize,
}

impl WeylGroup {
    pub fn new(gcm: GeneralizedCartanMatrix) -> Self {
        Self {
            gcm,
            cap: DEFAULT_ELEMENT_CAP,
        }
    }

    /// Sets the element cap used by ball and sphere enumeration.
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap.max(1);
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn gcm(&self) -> &GeneralizedCartanMatrix {
        &self.gcm
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    fn check_generator(&self, s: usize) -> Result<()> {
        if s >= self.rank() {
            return Err(Error::BadGenerator {
                index: s,
                rank: self.rank(),
            });
        }
        Ok(())
    }

    pub fn generator(&self, s: usize) -> Result<WeylElement> {
        self.check_generator(s)?;
        Ok(WeylElement { word: vec![s] })
    }

    /// Normal form of an arbitrary (not necessarily reduced) word.
    pub fn from_word(&self, word: &[usize]) -> Result<WeylElement> {
        for &s in word {
            self.check_generator(s)?;
        }
        let mut y = self.base_point();
        for &s in word.iter().rev() {
            self.reflect_point(s, &mut y);
        }
        Ok(self.from_point(y))
    }

    /// The point `x0` with every coordinate 1.
    pub fn base_point(&self) -> Vec<BigInt> {
        vec![BigInt::one(); self.rank()]
    }

    /// In-place action of `s` on a point of the dual space:
    /// `(s·x)_t = x_t - A[s][t] x_s`.
    pub fn reflect_point(&self, s: usize, x: &mut [BigInt]) {
        let xs = x[s].clone();
        if xs.is_zero() {
            return;
        }
        for (t, xt) in x.iter_mut().enumerate() {
            let a = self.gcm.get(s, t);
            if a != 0 {
                *xt -= &xs * a;
            }
        }
    }

    /// `w·x` for a point in dual coordinates.
    pub fn act_on_point(&self, w: &WeylElement, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = x.to_vec();
        for &s in w.word.iter().rev() {
            self.reflect_point(s, &mut y);
        }
        y
    }

    /// The point `w·x0` identifying `w`.
    pub fn key(&self, w: &WeylElement) -> Vec<BigInt> {
        self.act_on_point(w, &self.base_point())
    }

    /// Recovers the normal form of the element whose key is `y`.
    ///
    /// `y` must be a genuine key, i.e. lie in the W-orbit of `x0`.
    pub fn from_point(&self, mut y: Vec<BigInt>) -> WeylElement {
        let mut word = Vec::new();
        while let Some(s) = y.iter().position(Signed::is_negative) {
            word.push(s);
            self.reflect_point(s, &mut y);
        }
        WeylElement { word }
    }

    /// In-place simple reflection of a root-lattice vector:
    /// `s·v = v - (sum_t A[s][t] v_t) a_s`.
    pub fn reflect_root(&self, s: usize, v: &mut RootVector) {
        let c: BigInt = v
            .coords()
            .iter()
            .enumerate()
            .filter(|(t, _)| self.gcm.get(s, *t) != 0)
            .map(|(t, vt)| vt * self.gcm.get(s, t))
            .sum();
        if !c.is_zero() {
            v.coords_mut()[s] -= c;
        }
    }

    /// `w·v` on the root lattice, letter by letter from the right.
    pub fn apply(&self, w: &WeylElement, v: &RootVector) -> Result<RootVector> {
        if v.dim() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: v.dim(),
            });
        }
        let mut out = v.clone();
        for &s in w.word.iter().rev() {
            self.reflect_root(s, &mut out);
        }
        Ok(out)
    }

    /// Applies a raw word (rightmost letter first) to a root vector.
    pub fn apply_word(&self, word: &[usize], v: &RootVector) -> RootVector {
        let mut out = v.clone();
        for &s in word.iter().rev() {
            self.reflect_root(s, &mut out);
        }
        out
    }

    /// Right descent: `l(ws) < l(w)`, read off the sign of `w·a_s`.
    pub fn descent(&self, w: &WeylElement, s: usize) -> Result<bool> {
        self.check_generator(s)?;
        let image = self.apply_word(&w.word, &RootVector::simple(self.rank(), s));
        Ok(image.is_negative())
    }

    /// Left descent: `l(sw) < l(w)`.
    pub fn left_descent(&self, w: &WeylElement, s: usize) -> Result<bool> {
        self.check_generator(s)?;
        Ok(self.key(w)[s].is_negative())
    }

    pub fn multiply(&self, u: &WeylElement, v: &WeylElement) -> WeylElement {
        let y = self.act_on_point(u, &self.key(v));
        self.from_point(y)
    }

    pub fn inverse(&self, w: &WeylElement) -> WeylElement {
        let rev: Vec<usize> = w.word.iter().rev().copied().collect();
        self.from_point(self.act_on_point(&WeylElement { word: rev }, &self.base_point()))
    }

    /// Least `k <= cutoff` with `(uv)^k = e`.
    pub fn order_of_product(
        &self,
        u: &WeylElement,
        v: &WeylElement,
        cutoff: usize,
    ) -> ProductOrder {
        let uv = self.multiply(u, v);
        let x0 = self.base_point();
        let mut y = x0.clone();
        for k in 1..=cutoff.max(1) {
            y = self.act_on_point(&uv, &y);
            if y == x0 {
                return ProductOrder::Finite(k);
            }
        }
        ProductOrder::ExceedsCutoff(cutoff.max(1))
    }

    /// All elements of length at most `radius`, grouped by length and sorted
    /// by normal form within each length.
    pub fn ball(&self, radius: usize) -> Result<Vec<Vec<WeylElement>>> {
        let mut levels = Vec::new();
        let mut total = 0usize;
        self.walk_spheres(radius, |_, sphere| {
            total += sphere.len();
            let mut elems: Vec<WeylElement> =
                sphere.iter().map(|y| self.from_point(y.clone())).collect();
            elems.sort();
            levels.push(elems);
            total
        })?;
        Ok(levels)
    }

    /// Sizes of the spheres of radius `0..=radius`. Stops early (with
    /// trailing zeros) once a sphere is empty.
    pub fn sphere_counts(&self, radius: usize) -> Result<Vec<u64>> {
        let mut counts = Vec::with_capacity(radius + 1);
        self.walk_spheres(radius, |_, sphere| {
            counts.push(sphere.len() as u64);
            sphere.len()
        })?;
        counts.resize(radius + 1, 0);
        Ok(counts)
    }

    /// Level-by-level BFS on keys. `visit` returns the number of elements
    /// it is holding, which is compared against the cap.
    fn walk_spheres<F>(&self, radius: usize, mut visit: F) -> Result<()>
    where
        F: FnMut(usize, &[Vec<BigInt>]) -> usize,
    {
        let n = self.rank();
        let mut sphere = vec![self.base_point()];
        for len in 0..=radius {
            let held = visit(len, &sphere);
            if held.max(sphere.len()) > self.cap {
                return Err(Error::ResourceBudgetExceeded {
                    what: "Weyl group ball",
                    cap: self.cap,
                });
            }
            if len == radius || sphere.is_empty() {
                break;
            }
            let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
            let mut next = Vec::new();
            for y in &sphere {
                for s in 0..n {
                    if y[s].is_positive() {
                        let mut z = y.clone();
                        self.reflect_point(s, &mut z);
                        if !seen.contains(&z) {
                            seen.insert(z.clone());
                            next.push(z);
                        }
                    }
                    if next.len() > self.cap {
                        return Err(Error::ResourceBudgetExceeded {
                            what: "Weyl group ball",
                            cap: self.cap,
                        });
                    }
                }
            }
            if next.is_empty() {
                visit(len + 1, &next);
                break;
            }
            sphere = next;
        }
        Ok(())
    }

    /// Finite-type test on a subset of generators.
    pub fn is_finite_type(&self, j: &[usize]) -> bool {
        self.gcm.is_finite_type(j)
    }

    /// Formats a word using the generator labels.
    pub fn format(&self, w: &WeylElement) -> String {
        if w.word.is_empty() {
            return "e".to_string();
        }
        let labels = self.gcm.labels();
        w.word
            .iter()
            .map(|&s| format!("s{}", labels[s]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}
