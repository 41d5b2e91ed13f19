//! Real roots, chamber sides, prenilpotent pairs and intervals.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::coxeter::{ProductOrder, RootVector, Sign, WeylElement, WeylGroup};
use crate::error::{Error, Result};

/// Default height cap for interval searches.
pub const DEFAULT_HEIGHT_CAP: usize = 64;
/// Default chamber search radius.
pub const DEFAULT_RADIUS: usize = 12;

/// A real root together with the reflection in its wall.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Root {
    vector: RootVector,
    reflection: WeylElement,
}

impl Root {
    pub fn vector(&self) -> &RootVector {
        &self.vector
    }

    pub fn reflection(&self) -> &WeylElement {
        &self.reflection
    }

    pub fn height(&self) -> BigInt {
        self.vector.height()
    }

    pub fn is_positive(&self) -> bool {
        self.vector.is_positive()
    }

    /// The opposite root; it shares the wall and the reflection.
    pub fn opposite(&self) -> Root {
        Root {
            vector: -&self.vector,
            reflection: self.reflection.clone(),
        }
    }
}

/// Three-valued answer of the prenilpotence test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Prenilpotence {
    Yes,
    No,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalResult {
    pub members: Vec<Root>,
    /// True when membership was decided exactly rather than against a finite
    /// sample of chambers.
    pub certified: bool,
    pub search_radius: usize,
}

/// Root system attached to a Weyl group.
#[derive(Debug)]
pub struct RootSystem {
    group: WeylGroup,
    chamber_cache: Mutex<HashMap<usize, Arc<Vec<Vec<BigInt>>>>>,
}

impl Clone for RootSystem {
    fn clone(&self) -> Self {
        RootSystem::new(self.group.clone())
    }
}

impl RootSystem {
    pub fn new(group: WeylGroup) -> Self {
        Self {
            group,
            chamber_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn simple_root(&self, s: usize) -> Result<Root> {
        let reflection = self.group.generator(s)?;
        Ok(Root {
            vector: RootVector::simple(self.rank(), s),
            reflection,
        })
    }

    /// Certifies that `v` is a real root by lowering its height with simple
    /// reflections until a simple root is reached.
    pub fn root(&self, v: &RootVector) -> Result<Root> {
        if v.dim() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                got: v.dim(),
            });
        }
        let mut cur = match v.sign() {
            Some(Sign::Plus) => v.clone(),
            Some(Sign::Minus) => -v,
            None => return Err(Error::NotARoot(v.to_string())),
        };
        let gcm = self.group.gcm();
        let mut letters = Vec::new();
        loop {
            if let Some(s) = simple_index(&cur) {
                // v = ±(t_1 ... t_k) a_s where t_i are the letters applied
                let u = &letters;
                let mut word = u.clone();
                word.push(s);
                word.extend(u.iter().rev());
                let reflection = self.group.from_word(&word)?;
                return Ok(Root {
                    vector: v.clone(),
                    reflection,
                });
            }
            let step = (0..self.rank()).find(|&s| {
                let c: BigInt = (0..self.rank())
                    .map(|t| &cur.coords()[t] * gcm.get(s, t))
                    .sum();
                c.is_positive()
            });
            let Some(s) = step else {
                return Err(Error::NotARoot(v.to_string()));
            };
            self.group.reflect_root(s, &mut cur);
            if !cur.is_positive() {
                return Err(Error::NotARoot(v.to_string()));
            }
            letters.push(s);
        }
    }

    /// Positive real roots of height at most `h`, sorted by height.
    pub fn positive_roots(&self, h: usize) -> Result<Vec<Root>> {
        self.positive_roots_in(&(0..self.rank()).collect::<Vec<_>>(), h)
    }

    /// Positive roots of the parabolic subsystem spanned by the simple roots in `j`.
    pub fn positive_roots_in(&self, j: &[usize], h: usize) -> Result<Vec<Root>> {
        let n = self.rank();
        let cap = self.group.cap();
        // root -> (w, s) with root = w a_s
        let mut found: HashMap<RootVector, (Vec<usize>, usize)> = HashMap::new();
        let mut queue = VecDeque::new();
        if h >= 1 {
            for &s in j {
                let v = RootVector::simple(n, s);
                found.insert(v.clone(), (Vec::new(), s));
                queue.push_back(v);
            }
        }
        let bound = BigInt::from(h);
        while let Some(v) = queue.pop_front() {
            let (w, s0) = found[&v].clone();
            for &t in j {
                let mut r = v.clone();
                self.group.reflect_root(t, &mut r);
                if r.height() <= v.height() || r.height() > bound || found.contains_key(&r) {
                    continue;
                }
                let mut w2 = vec![t];
                w2.extend(&w);
                found.insert(r.clone(), (w2, s0));
                if found.len() > cap {
                    return Err(Error::ResourceBudgetExceeded {
                        what: "root enumeration",
                        cap,
                    });
                }
                queue.push_back(r);
            }
        }
        let mut out = Vec::with_capacity(found.len());
        for (v, (w, s)) in found {
            let mut word = w.clone();
            word.push(s);
            word.extend(w.iter().rev());
            let reflection = self.group.from_word(&word)?;
            out.push(Root {
                vector: v,
                reflection,
            });
        }
        // by height, then simple-root order (a_0 before a_1 ...)
        out.sort_by(|a, b| {
            a.height()
                .cmp(&b.height())
                .then_with(|| b.vector.cmp(&a.vector))
        });
        Ok(out)
    }

    /// Real roots of either sign with |height| at most `h`.
    pub fn roots(&self, h: usize) -> Result<Vec<Root>> {
        let pos = self.positive_roots(h)?;
        let mut out: Vec<Root> = pos.iter().map(Root::opposite).collect();
        out.reverse();
        out.extend(pos);
        Ok(out)
    }

    /// Side of the wall of `alpha` on which chamber `w` lies.
    pub fn chamber_side(&self, w: &WeylElement, alpha: &Root) -> Result<Sign> {
        let y = self.group.key(w);
        side(&alpha.vector, &y)
    }

    /// The integer `a` with `s_beta(alpha) = alpha - a beta`.
    pub fn pairing(&self, alpha: &Root, beta: &Root) -> Result<BigInt> {
        let image = self.group.apply(&beta.reflection, &alpha.vector)?;
        let diff = &alpha.vector - &image;
        let i = beta
            .vector
            .coords()
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::NotARoot(beta.vector.to_string()))?;
        Ok(&diff.coords()[i] / &beta.vector.coords()[i])
    }

    fn dihedral_order(&self, alpha: &Root, beta: &Root) -> Result<Option<usize>> {
        let a = self.pairing(alpha, beta)?;
        let b = self.pairing(beta, alpha)?;
        let ab = &a * &b;
        if ab.is_negative() || ab >= BigInt::from(4) {
            return Ok(None);
        }
        match self
            .group
            .order_of_product(&alpha.reflection, &beta.reflection, 12)
        {
            ProductOrder::Finite(k) => Ok(Some(k)),
            ProductOrder::ExceedsCutoff(_) => Ok(None),
        }
    }

    /// Keys `w·x0` of all chambers within `radius` of the fundamental chamber.
    pub fn chambers(&self, radius: usize) -> Result<Arc<Vec<Vec<BigInt>>>> {
        if let Some(hit) = self
            .chamber_cache
            .lock()
            .expect("cache poisoned")
            .get(&radius)
        {
            return Ok(hit.clone());
        }
        let keys: Vec<Vec<BigInt>> = self
            .group
            .ball(radius)?
            .into_iter()
            .flatten()
            .map(|w| self.group.key(&w))
            .collect();
        let keys = Arc::new(keys);
        self.chamber_cache
            .lock()
            .expect("cache poisoned")
            .insert(radius, keys.clone());
        Ok(keys)
    }

    /// Whether some chamber lies in both roots and some chamber lies in both
    /// opposite roots.
    pub fn is_prenilpotent(
        &self,
        alpha: &Root,
        beta: &Root,
        radius: usize,
    ) -> Result<Prenilpotence> {
        if alpha.vector == beta.vector {
            return Ok(Prenilpotence::Yes);
        }
        if alpha.vector == -&beta.vector {
            return Ok(Prenilpotence::No);
        }
        if self.dihedral_order(alpha, beta)?.is_some() {
            return Ok(Prenilpotence::Yes);
        }
        let a = self.pairing(alpha, beta)?;
        let b = self.pairing(beta, alpha)?;
        if !a.is_positive() && !b.is_positive() {
            // infinite dihedral pair pointing away from each other: the cone
            // N alpha + N beta holds infinitely many roots
            return Ok(Prenilpotence::No);
        }
        let mut both = false;
        let mut neither = false;
        for y in self.chambers(radius)?.iter() {
            let sa = side(&alpha.vector, y)?;
            let sb = side(&beta.vector, y)?;
            both |= sa == Sign::Plus && sb == Sign::Plus;
            neither |= sa == Sign::Minus && sb == Sign::Minus;
            if both && neither {
                return Ok(Prenilpotence::Yes);
            }
        }
        Ok(Prenilpotence::Unresolved)
    }

    /// Roots `gamma` of height at most `height_cap` with `gamma ⊇ alpha ∩ beta`
    /// and `-gamma ⊇ (-alpha) ∩ (-beta)`.
    pub fn interval(
        &self,
        alpha: &Root,
        beta: &Root,
        height_cap: usize,
        radius: usize,
    ) -> Result<IntervalResult> {
        match self.is_prenilpotent(alpha, beta, radius)? {
            Prenilpotence::No => return Err(Error::NotPrenilpotent),
            Prenilpotence::Unresolved => return Err(Error::Unresolved(radius)),
            Prenilpotence::Yes => {}
        }
        if alpha.vector == beta.vector {
            return Ok(IntervalResult {
                members: vec![alpha.clone()],
                certified: true,
                search_radius: radius,
            });
        }
        if self.dihedral_order(alpha, beta)?.is_some() {
            // walls meet in a spherical facet; inside its finite residue the
            // interval is the set of roots in the closed cone spanned by the pair
            let members = self.linear_interval(alpha, beta, height_cap)?;
            let need = 4 * (abs_usize(&alpha.height()) + abs_usize(&beta.height()));
            return Ok(IntervalResult {
                members,
                certified: height_cap >= need,
                search_radius: radius,
            });
        }
        let chambers = self.chambers(radius)?;
        let mut pos_pos = Vec::new();
        let mut neg_neg = Vec::new();
        for y in chambers.iter() {
            let sa = side(&alpha.vector, y)?;
            let sb = side(&beta.vector, y)?;
            if sa == Sign::Plus && sb == Sign::Plus {
                pos_pos.push(y);
            } else if sa == Sign::Minus && sb == Sign::Minus {
                neg_neg.push(y);
            }
        }
        let mut members = Vec::new();
        for gamma in self.roots(height_cap)? {
            let ok = pos_pos.iter().all(|y| gamma.vector.eval(y).is_positive())
                && neg_neg.iter().all(|y| gamma.vector.eval(y).is_negative());
            if ok {
                members.push(gamma);
            }
        }
        Ok(IntervalResult {
            members,
            certified: false,
            search_radius: radius,
        })
    }

    /// Roots `lambda alpha + mu beta` with rational `lambda, mu >= 0` and
    /// |height| at most `height_cap`.
    pub fn linear_interval(
        &self,
        alpha: &Root,
        beta: &Root,
        height_cap: usize,
    ) -> Result<Vec<Root>> {
        if alpha.vector == beta.vector {
            return Ok(vec![alpha.clone()]);
        }
        if alpha.vector == -&beta.vector {
            let mut out = vec![alpha.clone(), beta.clone()];
            out.sort();
            return Ok(out);
        }
        let solve = PlaneSolver::new(&alpha.vector, &beta.vector)
            .ok_or_else(|| Error::NotARoot(format!("{} and {}", alpha.vector, beta.vector)))?;
        let mut out = Vec::new();
        for gamma in self.roots(height_cap)? {
            if let Some((l, m)) = solve.coefficients(&gamma.vector) {
                if !l.is_negative() && !m.is_negative() {
                    out.push(gamma);
                }
            }
        }
        Ok(out)
    }
}

fn abs_usize(x: &BigInt) -> usize {
    x.abs().to_usize().unwrap_or(usize::MAX / 8)
}

fn simple_index(v: &RootVector) -> Option<usize> {
    let mut idx = None;
    for (i, c) in v.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if !c.is_one() || idx.is_some() {
            return None;
        }
        idx = Some(i);
    }
    idx
}

/// Sign of `alpha` evaluated at a chamber key.
pub(crate) fn side(alpha: &RootVector, key: &[BigInt]) -> Result<Sign> {
    let v = alpha.eval(key);
    if v.is_positive() {
        Ok(Sign::Plus)
    } else if v.is_negative() {
        Ok(Sign::Minus)
    } else {
        Err(Error::WallIncidence)
    }
}

/// Exact solver for `gamma = lambda alpha + mu beta` with independent `alpha, beta`.
struct PlaneSolver<'a> {
    alpha: &'a RootVector,
    beta: &'a RootVector,
    i: usize,
    j: usize,
    det: BigInt,
}

impl<'a> PlaneSolver<'a> {
    fn new(alpha: &'a RootVector, beta: &'a RootVector) -> Option<Self> {
        let (a, b) = (alpha.coords(), beta.coords());
        let n = a.len();
        for i in 0..n {
            for j in i + 1..n {
                let det = &a[i] * &b[j] - &a[j] * &b[i];
                if !det.is_zero() {
                    return Some(Self {
                        alpha,
                        beta,
                        i,
                        j,
                        det,
                    });
                }
            }
        }
        None
    }

    fn coefficients(&self, gamma: &RootVector) -> Option<(BigRational, BigRational)> {
        let (a, b, g) = (self.alpha.coords(), self.beta.coords(), gamma.coords());
        let (i, j) = (self.i, self.j);
        let l = BigRational::new(&g[i] * &b[j] - &g[j] * &b[i], self.det.clone());
        let m = BigRational::new(&a[i] * &g[j] - &a[j] * &g[i], self.det.clone());
        let consistent = (0..a.len()).all(|k| {
            &l * BigRational::from(a[k].clone()) + &m * BigRational::from(b[k].clone())
                == BigRational::from(g[k].clone())
        });
        consistent.then_some((l, m))
    }
}

/// Groups roots by height, mostly for reporting.
pub fn by_height(roots: &[Root]) -> BTreeMap<BigInt, Vec<&Root>> {
    let mut out: BTreeMap<BigInt, Vec<&Root>> = BTreeMap::new();
    for r in roots {
        out.entry(r.height()).or_default().push(r);
    }
    out
}

/// All distinct vectors in a root list.
pub fn vector_set(roots: &[Root]) -> HashSet<RootVector> {
    roots.iter().map(|r| r.vector.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::GeneralizedCartanMatrix;

    fn system(rows: Vec<Vec<i64>>) -> RootSystem {
        RootSystem::new(WeylGroup::new(
            GeneralizedCartanMatrix::from_rows(rows).unwrap(),
        ))
    }

    fn a2() -> RootSystem {
        system(vec![vec![2, -1], vec![-1, 2]])
    }

    fn dinf() -> RootSystem {
        system(vec![vec![2, -2], vec![-2, 2]])
    }

    fn v(c: &[i64]) -> RootVector {
        RootVector::from_i64(c)
    }

    #[test]
    fn enumeration_examples() {
        let a2 = a2().positive_roots(2).unwrap();
        let got: Vec<_> = a2.iter().map(|r| r.vector().to_i64().unwrap()).collect();
        assert_eq!(got, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let d = dinf().positive_roots(5).unwrap();
        let got: HashSet<_> = d.iter().map(|r| r.vector().to_i64().unwrap()).collect();
        let want: HashSet<Vec<i64>> = [[1, 0], [0, 1], [2, 1], [1, 2], [3, 2], [2, 3]]
            .iter()
            .map(|x| x.to_vec())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn reflections_negate_their_roots() {
        let rs = system(vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]);
        for r in rs.roots(6).unwrap() {
            let image = rs.group().apply(r.reflection(), r.vector()).unwrap();
            assert_eq!(image, -r.vector());
            let sq = rs.group().multiply(r.reflection(), r.reflection());
            assert!(sq.is_identity());
        }
    }

    #[test]
    fn root_certification() {
        let d = dinf();
        assert!(d.root(&v(&[3, 2])).is_ok());
        assert!(d.root(&v(&[-2, -3])).is_ok());
        assert!(matches!(d.root(&v(&[1, 1])), Err(Error::NotARoot(_))));
        assert!(matches!(d.root(&v(&[1, -1])), Err(Error::NotARoot(_))));
    }

    #[test]
    fn chamber_sides() {
        let d = dinf();
        let a1 = d.simple_root(0).unwrap();
        let e = WeylElement::identity();
        assert_eq!(d.chamber_side(&e, &a1).unwrap(), Sign::Plus);
        let s1 = d.group().generator(0).unwrap();
        assert_eq!(d.chamber_side(&s1, &a1).unwrap(), Sign::Minus);
        let s2 = d.group().generator(1).unwrap();
        assert_eq!(d.chamber_side(&s2, &a1).unwrap(), Sign::Plus);
    }

    #[test]
    fn prenilpotence_examples() {
        let a2 = a2();
        let a1 = a2.simple_root(0).unwrap();
        let b = a2.simple_root(1).unwrap();
        assert_eq!(
            a2.is_prenilpotent(&a1, &a1.opposite(), 6).unwrap(),
            Prenilpotence::No
        );
        for x in [a1.clone(), a1.opposite()] {
            for y in [b.clone(), b.opposite()] {
                assert_eq!(a2.is_prenilpotent(&x, &y, 6).unwrap(), Prenilpotence::Yes);
            }
        }
        let d = dinf();
        let a1 = d.simple_root(0).unwrap();
        let a2r = d.simple_root(1).unwrap();
        assert_eq!(d.is_prenilpotent(&a1, &a2r, 12).unwrap(), Prenilpotence::No);
        assert_eq!(
            d.is_prenilpotent(&a1, &a2r.opposite(), 12).unwrap(),
            Prenilpotence::Yes
        );
    }

    #[test]
    fn interval_examples() {
        let a2 = a2();
        let a1 = a2.simple_root(0).unwrap();
        let b = a2.simple_root(1).unwrap();
        let iv = a2.interval(&a1, &b, 10, 6).unwrap();
        assert!(iv.certified);
        let got = vector_set(&iv.members);
        assert_eq!(
            got,
            [v(&[1, 0]), v(&[0, 1]), v(&[1, 1])].into_iter().collect()
        );
        let lin = a2.linear_interval(&a1, &b, 10).unwrap();
        assert_eq!(vector_set(&lin), got);

        let d = dinf();
        let a1 = d.simple_root(0).unwrap();
        let m2 = d.simple_root(1).unwrap().opposite();
        let iv = d.interval(&a1, &m2, 9, 12).unwrap();
        assert_eq!(
            vector_set(&iv.members),
            [v(&[1, 0]), v(&[0, -1])].into_iter().collect()
        );
        let lin = d.linear_interval(&a1, &m2, 9).unwrap();
        assert_eq!(vector_set(&lin), vector_set(&iv.members));
        let same = d.interval(&a1, &a1, 9, 12).unwrap();
        assert_eq!(same.members, vec![a1.clone()]);
        assert_eq!(
            d.interval(&a1, &d.simple_root(1).unwrap(), 9, 12)
                .unwrap_err(),
            Error::NotPrenilpotent
        );
    }
}
