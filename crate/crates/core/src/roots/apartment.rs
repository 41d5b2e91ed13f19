//! Points of the twin apartment and the root sets of two-point balanced subsets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::system::{Root, RootSystem};
use crate::coxeter::{RootVector, Sign, WeylElement, WeylGroup};
use crate::error::{Error, Result};

/// Steps allowed to the greedy chamber walk before a point is declared
/// outside the Tits cone.
const WALK_LIMIT: usize = 100_000;

/// A point of the positive or negative half of the standard twin apartment.
///
/// Negative points live in minus the Tits cone; their opposite in the
/// positive half has coordinates `-coords`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApartmentPoint {
    #[serde(serialize_with = "serialize_rationals")]
    coords: Vec<BigRational>,
    sign: Sign,
}

/// Position of a Tits-cone point: `point = chamber · base` with `base` in the
/// closed fundamental chamber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub chamber: WeylElement,
    pub base: Vec<BigInt>,
    pub facet_type: Vec<usize>,
}

impl ApartmentPoint {
    /// Validates that the point lies in the Tits cone of its sign and has
    /// spherical facet type.
    pub fn new(group: &WeylGroup, coords: Vec<BigRational>, sign: Sign) -> Result<Self> {
        if coords.len() != group.rank() {
            return Err(Error::DimensionMismatch {
                expected: group.rank(),
                got: coords.len(),
            });
        }
        let p = Self { coords, sign };
        p.normalize(group)?;
        Ok(p)
    }

    /// The point `w·x` where `x` is given by integer coordinates.
    pub fn from_chamber(group: &WeylGroup, w: &WeylElement, x: &[i64], sign: Sign) -> Result<Self> {
        let x: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
        let y = group.act_on_point(w, &x);
        let coords = y
            .into_iter()
            .map(|c| match sign {
                Sign::Plus => BigRational::from(c),
                Sign::Minus => BigRational::from(-c),
            })
            .collect();
        Self::new(group, coords, sign)
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Coordinates of the point, or of its opposite if negative, scaled to
    /// integers by a positive factor.
    pub fn positive_image(&self) -> Vec<BigInt> {
        let l = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.coords
            .iter()
            .map(|c| {
                let v = c.numer() * (&l / c.denom());
                match self.sign {
                    Sign::Plus => v,
                    Sign::Minus => -v,
                }
            })
            .collect()
    }

    /// Greedy walk into the closed fundamental chamber.
    pub fn normalize(&self, group: &WeylGroup) -> Result<Normalized> {
        normalize_point(group, self.positive_image())
    }

    /// Image under `w`, keeping the sign.
    pub fn translate(&self, group: &WeylGroup, w: &WeylElement) -> ApartmentPoint {
        let y = group.act_on_point(w, &self.positive_image());
        let coords = y
            .into_iter()
            .map(|c| match self.sign {
                Sign::Plus => BigRational::from(c),
                Sign::Minus => BigRational::from(-c),
            })
            .collect();
        ApartmentPoint {
            coords,
            sign: self.sign,
        }
    }
}

pub(crate) fn normalize_point(group: &WeylGroup, mut x: Vec<BigInt>) -> Result<Normalized> {
    let mut letters = Vec::new();
    while let Some(s) = x.iter().position(Signed::is_negative) {
        if letters.len() >= WALK_LIMIT {
            return Err(Error::DegenerateSegment(
                "point is not in the Tits cone".into(),
            ));
        }
        group.reflect_point(s, &mut x);
        letters.push(s);
    }
    let facet_type: Vec<usize> = (0..x.len()).filter(|&s| x[s].is_zero()).collect();
    if !group.is_finite_type(&facet_type) {
        return Err(Error::DegenerateSegment(format!(
            "facet type {facet_type:?} is not spherical"
        )));
    }
    let chamber = group.from_word(&letters)?;
    Ok(Normalized {
        chamber,
        base: x,
        facet_type,
    })
}

/// A positive and a negative point of the standard twin apartment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedPair {
    pub x_plus: ApartmentPoint,
    pub x_minus: ApartmentPoint,
}

impl BalancedPair {
    pub fn new(x_plus: ApartmentPoint, x_minus: ApartmentPoint) -> Result<Self> {
        if x_plus.sign != Sign::Plus || x_minus.sign != Sign::Minus {
            return Err(Error::DegenerateSegment(
                "points must have signs + and -".into(),
            ));
        }
        Ok(Self { x_plus, x_minus })
    }

    /// Points interior to `c+` and to the negative chamber `w c-`.
    pub fn chambers(group: &WeylGroup, w: &WeylElement) -> Result<Self> {
        let ones = vec![1; group.rank()];
        let plus =
            ApartmentPoint::from_chamber(group, &WeylElement::identity(), &ones, Sign::Plus)?;
        let minus = ApartmentPoint::from_chamber(group, w, &ones, Sign::Minus)?;
        Self::new(plus, minus)
    }

    pub fn translate(&self, group: &WeylGroup, w: &WeylElement) -> Self {
        Self {
            x_plus: self.x_plus.translate(group, w),
            x_minus: self.x_minus.translate(group, w),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiSets {
    /// Roots strongly separating the positive point from the opposite of the negative one.
    pub unipotent: Vec<RootVector>,
    /// Roots whose wall contains both.
    pub levi: Vec<RootVector>,
}

impl RootSystem {
    /// Exact `(Phi^u, Phi^m)` for a two-point balanced subset.
    ///
    /// After moving the positive point into the closed fundamental chamber,
    /// every separating root is either inverted by the chamber of the other
    /// point, vanishes on one of the two facets, or both; these finite
    /// candidate sets are then filtered by exact evaluation.
    pub fn phi_sets(&self, pair: &BalancedPair) -> Result<PhiSets> {
        let group = self.group();
        let n = self.rank();
        let plus = pair.x_plus.normalize(group)?;
        let back = group.inverse(&plus.chamber);
        let xp = plus.base.clone();
        let xm = group.act_on_point(&back, &pair.x_minus.positive_image());
        let minus = normalize_point(group, xm.clone())?;
        if xp.iter().all(Zero::is_zero) && xm.iter().all(Zero::is_zero) {
            return Err(Error::DegenerateSegment(
                "both points are the cone vertex".into(),
            ));
        }

        let mut candidates: Vec<RootVector> = Vec::new();
        // positive roots sent negative by the inverse of the chamber of x-
        let word = minus.chamber.word();
        for i in 0..word.len() {
            let r = group.apply_word(&word[..i], &RootVector::simple(n, word[i]));
            candidates.push(r);
        }
        for r in self.positive_roots_in(&minus.facet_type, usize::MAX)? {
            candidates.push(group.apply(&minus.chamber, r.vector())?);
        }
        for r in self.positive_roots_in(&plus.facet_type, usize::MAX)? {
            candidates.push(-r.vector());
        }
        candidates.sort();
        candidates.dedup();

        let mut unipotent = Vec::new();
        let mut levi = Vec::new();
        for r in candidates {
            let at_plus = r.eval(&xp);
            let at_minus = r.eval(&xm);
            if at_plus.is_negative() || at_minus.is_positive() {
                continue;
            }
            let image = group.apply(&plus.chamber, &r)?;
            if at_plus.is_zero() && at_minus.is_zero() {
                levi.push(image);
            } else {
                unipotent.push(image);
            }
        }
        unipotent.sort();
        levi.sort();
        Ok(PhiSets { unipotent, levi })
    }

    /// Order of `T ⋉ U(Ω)` over `F_q` when the Levi part is trivial.
    pub fn fixator_order_formula(
        &self,
        pair: &BalancedPair,
        q: u64,
        torus_rank: usize,
    ) -> Result<BigInt> {
        let sets = self.phi_sets(pair)?;
        if !sets.levi.is_empty() {
            return Err(Error::NonEmptyLeviPart(sets.levi.len()));
        }
        let q = BigInt::from(q);
        let torus = num_traits::pow(&q - 1u32, torus_rank);
        Ok(torus * num_traits::pow(q, sets.unipotent.len()))
    }

    /// Roots `alpha` with `w^{-1} alpha` negative among positive roots: the
    /// set crossed by a minimal gallery from `c+` to `w c+`.
    pub fn inversion_set(&self, w: &WeylElement) -> Vec<RootVector> {
        let group = self.group();
        let word = w.word();
        let mut out: Vec<RootVector> = (0..word.len())
            .map(|i| group.apply_word(&word[..i], &RootVector::simple(self.rank(), word[i])))
            .collect();
        out.sort();
        out
    }

    /// Validates that `alpha` is a root and wraps it.
    pub fn wrap(&self, alpha: &RootVector) -> Result<Root> {
        self.root(alpha)
    }
}

fn serialize_rationals<S: serde::Serializer>(
    v: &[BigRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&crate::io::rational_string(c))?;
    }
    seq.end()
}
