//! Quasi-split forms from diagram automorphisms: orbits, relative apartment,
//! relative Weyl group, panel thicknesses, and the unitary `SU_3` example.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::coxeter::{CoxeterEntry, GeneralizedCartanMatrix, ProductOrder, WeylElement, WeylGroup};
use crate::datum::affine_a;
use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::io::{rational_string, GcmSpec};
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::sl::TwinSl;

pub const DEFAULT_CUTOFF: usize = 64;

/// A permutation of the generators preserving the GCM.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
    order: usize,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize) -> Self {
        Self {
            perm: (0..rank).collect(),
            order: 1,
        }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn apply(&self, s: usize) -> usize {
        self.perm[s]
    }
}

/// Checks that `perm` is a permutation with `A[π s][π t] = A[s][t]`.
pub fn validate_automorphism(
    gcm: &GeneralizedCartanMatrix,
    perm: &[usize],
) -> Result<DiagramAutomorphism> {
    let n = gcm.rank();
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotAPermutation(format!("{perm:?}")));
        }
    }
    for s in 0..n {
        for t in 0..n {
            if gcm.get(perm[s], perm[t]) != gcm.get(s, t) {
                return Err(Error::InvarianceViolation { s, t });
            }
        }
    }
    let mut order = 1;
    let mut power: Vec<usize> = perm.to_vec();
    while power.iter().enumerate().any(|(i, &p)| i != p) {
        power = power.iter().map(|&p| perm[p]).collect();
        order += 1;
    }
    Ok(DiagramAutomorphism {
        perm: perm.to_vec(),
        order,
    })
}

/// The orthogonal-pair / A2-pair / singleton classification of an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitKind {
    Singleton,
    OrthogonalPair,
    A2Pair,
    /// Contained in the anisotropic kernel.
    Anisotropic,
    /// Generates an infinite group; no relative panel has this type.
    NonSpherical,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub members: Vec<usize>,
    pub kind: OrbitKind,
}

impl Orbit {
    /// The longest element of the parabolic subgroup of the orbit.
    pub fn relative_generator(&self, group: &WeylGroup) -> Result<Option<WeylElement>> {
        let m = &self.members;
        let word = match self.kind {
            OrbitKind::Singleton => vec![m[0]],
            OrbitKind::OrthogonalPair => vec![m[0], m[1]],
            OrbitKind::A2Pair => vec![m[0], m[1], m[0]],
            OrbitKind::Anisotropic | OrbitKind::NonSpherical => return Ok(None),
        };
        group.from_word(&word).map(Some)
    }
}

/// Thickness of a relative panel of the given orbit type.
pub fn panel_thickness(orbit: &[usize], gcm: &GeneralizedCartanMatrix, q: u64) -> Result<u64> {
    match classify(orbit, gcm)? {
        OrbitKind::Singleton => Ok(q + 1),
        OrbitKind::OrthogonalPair => Ok(q * q + 1),
        OrbitKind::A2Pair => Ok(q * q * q + 1),
        kind => Err(Error::UnsupportedOrbit {
            orbit: orbit.to_vec(),
            reason: format!("{kind:?} orbits have no panels"),
        }),
    }
}

fn classify(orbit: &[usize], gcm: &GeneralizedCartanMatrix) -> Result<OrbitKind> {
    match orbit {
        [_] => Ok(OrbitKind::Singleton),
        [s, t] => match gcm.coxeter_matrix().get(*s, *t) {
            CoxeterEntry::Finite(2) => Ok(OrbitKind::OrthogonalPair),
            CoxeterEntry::Finite(3) => Ok(OrbitKind::A2Pair),
            CoxeterEntry::Infinite => Ok(OrbitKind::NonSpherical),
            CoxeterEntry::Finite(m) => Err(Error::UnsupportedOrbit {
                orbit: orbit.to_vec(),
                reason: format!("pair with Coxeter entry {m}"),
            }),
        },
        _ => {
            if gcm.is_finite_type(orbit) {
                Err(Error::UnsupportedOrbit {
                    orbit: orbit.to_vec(),
                    reason: format!("spherical orbit of size {}", orbit.len()),
                })
            } else {
                Ok(OrbitKind::NonSpherical)
            }
        }
    }
}

/// A quasi-split form: GCM, automorphism, anisotropic kernel and residue field order.
#[derive(Debug, Clone)]
pub struct QuasiSplitForm {
    gcm: GeneralizedCartanMatrix,
    aut: DiagramAutomorphism,
    s0: Vec<usize>,
    q: u64,
}

impl QuasiSplitForm {
    pub fn new(
        gcm: GeneralizedCartanMatrix,
        aut: DiagramAutomorphism,
        mut s0: Vec<usize>,
        q: u64,
    ) -> Result<Self> {
        crate::field::prime_power(q)?;
        if aut.perm.len() != gcm.rank() {
            return Err(Error::DimensionMismatch {
                expected: gcm.rank(),
                got: aut.perm.len(),
            });
        }
        s0.sort_unstable();
        s0.dedup();
        for &s in &s0 {
            if s >= gcm.rank() {
                return Err(Error::BadGenerator {
                    index: s,
                    rank: gcm.rank(),
                });
            }
            if s0.binary_search(&aut.apply(s)).is_err() {
                return Err(Error::NotAPermutation(format!(
                    "anisotropic kernel is not stable at {s}"
                )));
            }
        }
        Ok(Self { gcm, aut, s0, q })
    }

    pub fn gcm(&self) -> &GeneralizedCartanMatrix {
        &self.gcm
    }

    pub fn automorphism(&self) -> &DiagramAutomorphism {
        &self.aut
    }

    pub fn anisotropic_kernel(&self) -> &[usize] {
        &self.s0
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Orbits sorted by smallest member.
    pub fn orbits(&self) -> Result<Vec<Orbit>> {
        let n = self.gcm.rank();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if done[s] {
                continue;
            }
            let mut members = vec![s];
            done[s] = true;
            let mut t = self.aut.apply(s);
            while t != s {
                members.push(t);
                done[t] = true;
                t = self.aut.apply(t);
            }
            members.sort_unstable();
            let kind = if self.s0.contains(&s) {
                OrbitKind::Anisotropic
            } else {
                classify(&members, &self.gcm)?
            };
            out.push(Orbit { members, kind });
        }
        Ok(out)
    }

    /// Null space of `a_s = 0` (`s ∈ S0`) and `a_s = a_πs`, in the coordinates
    /// given by the simple roots.
    pub fn relative_apartment(&self) -> Vec<Vec<BigRational>> {
        let n = self.gcm.rank();
        let mut rows = Vec::new();
        for &s in &self.s0 {
            let mut r = vec![BigRational::zero(); n];
            r[s] = BigRational::one();
            rows.push(r);
        }
        for s in 0..n {
            let t = self.aut.apply(s);
            if t != s {
                let mut r = vec![BigRational::zero(); n];
                r[s] = BigRational::one();
                r[t] = -BigRational::one();
                rows.push(r);
            }
        }
        null_space(rows, n)
    }

    /// One generator per supported orbit and their pairwise product orders.
    pub fn relative_weyl(&self, cutoff: usize) -> Result<RelativeWeyl> {
        let group = WeylGroup::new(self.gcm.clone());
        let absolute = self.gcm.coxeter_matrix();
        let mut orbits = Vec::new();
        let mut gens = Vec::new();
        for o in self.orbits()? {
            if let Some(g) = o.relative_generator(&group)? {
                gens.push(g);
                orbits.push(o);
            }
        }
        let k = orbits.len();
        let mut matrix = vec![vec![RelativeEntry::Finite(1); k]; k];
        for a in 0..k {
            for b in a + 1..k {
                let entry = match (&orbits[a].members[..], &orbits[b].members[..]) {
                    ([s], [t]) => match absolute.get(*s, *t) {
                        CoxeterEntry::Finite(m) => RelativeEntry::Finite(m),
                        CoxeterEntry::Infinite => RelativeEntry::Infinite,
                    },
                    _ => match group.order_of_product(&gens[a], &gens[b], cutoff) {
                        ProductOrder::Finite(m) => RelativeEntry::Finite(m as u32),
                        ProductOrder::ExceedsCutoff(c) => RelativeEntry::ExceedsCutoff(c),
                    },
                };
                matrix[a][b] = entry;
                matrix[b][a] = entry;
            }
        }
        let labels = orbits
            .iter()
            .map(|o| orbit_label(&self.gcm, &o.members))
            .collect();
        let generators = gens.iter().map(|g| group.format(g)).collect();
        Ok(RelativeWeyl {
            labels,
            generators,
            matrix,
            orbits,
        })
    }

    pub fn report(&self, cutoff: usize) -> Result<RelativeData> {
        let orbits = self.orbits()?;
        let basis = self.relative_apartment();
        let relative = self.relative_weyl(cutoff)?;
        let mut thickness = BTreeMap::new();
        for o in &relative.orbits {
            thickness.insert(
                orbit_label(&self.gcm, &o.members),
                panel_thickness(&o.members, &self.gcm, self.q)?,
            );
        }
        let geometric_dim = self.geometric_dim(&relative.orbits);
        let valency_sequence = if geometric_dim == 1 && relative.orbits.len() == 2 {
            let v: Vec<u64> = relative.labels.iter().map(|l| thickness[l]).collect();
            (0..6).map(|i| v[i % 2]).collect()
        } else {
            Vec::new()
        };
        let split = self.aut.perm.iter().enumerate().all(|(i, &p)| i == p) && self.s0.is_empty();
        Ok(RelativeData {
            q: self.q,
            apartment_dim: basis.len(),
            apartment_basis: basis
                .iter()
                .map(|v| v.iter().map(rational_string).collect())
                .collect(),
            geometric_dim,
            orbits: orbits
                .iter()
                .map(|o| OrbitReport {
                    label: orbit_label(&self.gcm, &o.members),
                    members: o
                        .members
                        .iter()
                        .map(|&s| self.gcm.labels()[s].clone())
                        .collect(),
                    kind: o.kind,
                })
                .collect(),
            relative_labels: relative.labels,
            relative_generators: relative.generators,
            relative_coxeter: relative.matrix,
            panel_thickness: thickness,
            valency_sequence,
            split,
        })
    }

    /// Largest number of relative generators spanning a finite subgroup,
    /// i.e. the dimension of the relative building.
    fn geometric_dim(&self, orbits: &[Orbit]) -> usize {
        let k = orbits.len();
        let mut best = 0;
        for mask in 0u64..(1u64 << k.min(20)) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let union: Vec<usize> = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .flat_map(|i| orbits[i].members.iter().copied())
                .collect();
            if self.gcm.is_finite_type(&union) {
                best = size;
            }
        }
        best
    }
}

fn orbit_label(gcm: &GeneralizedCartanMatrix, members: &[usize]) -> String {
    let names: Vec<&str> = members.iter().map(|&s| gcm.labels()[s].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// Entry of the relative Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelativeEntry {
    Finite(u32),
    /// Certified infinite from the Coxeter matrix of two singleton orbits.
    Infinite,
    ExceedsCutoff(usize),
}

impl Serialize for RelativeEntry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RelativeEntry::Finite(m) => s.serialize_u32(*m),
            RelativeEntry::Infinite => s.serialize_str("inf"),
            RelativeEntry::ExceedsCutoff(c) => s.serialize_str(&format!("exceeds-cutoff:{c}")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RelativeWeyl {
    pub labels: Vec<String>,
    pub generators: Vec<String>,
    pub matrix: Vec<Vec<RelativeEntry>>,
    pub orbits: Vec<Orbit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub label: String,
    pub members: Vec<String>,
    pub kind: OrbitKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelativeData {
    pub q: u64,
    /// Dimension of the solution space of the fixed-point equations.
    pub apartment_dim: usize,
    pub apartment_basis: Vec<Vec<String>>,
    /// Dimension of the relative building.
    pub geometric_dim: usize,
    pub orbits: Vec<OrbitReport>,
    pub relative_labels: Vec<String>,
    pub relative_generators: Vec<String>,
    pub relative_coxeter: Vec<Vec<RelativeEntry>>,
    pub panel_thickness: BTreeMap<String, u64>,
    /// Valencies met walking along a relative apartment of a tree.
    pub valency_sequence: Vec<u64>,
    pub split: bool,
}

/// Basis of the rational null space, one vector per free column of the RREF.
pub fn null_space(mut rows: Vec<Vec<BigRational>>, n: usize) -> Vec<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in 0..n {
                    let d = &factor * &rows[r][j];
                    rows[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -rows[i][f].clone();
            }
            if v.iter().any(|x| x.is_negative()) && v.iter().all(|x| !x.is_positive()) {
                v.iter_mut().for_each(|x| *x = -x.clone());
            }
            v
        })
        .collect()
}

/// The right-angled `r`-gon GCM on `Z/r`: `0` between cyclic neighbours,
/// `-2` between all other distinct generators.
pub fn fuchsian_gcm(r: usize) -> Result<GeneralizedCartanMatrix> {
    if r < 5 {
        return Err(Error::UnsupportedSize(r));
    }
    let entries = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        2
                    } else if (i + 1) % r == j || (j + 1) % r == i {
                        0
                    } else {
                        -2
                    }
                })
                .collect()
        })
        .collect();
    GeneralizedCartanMatrix::from_rows(entries)
}

/// The reflection `i -> -i mod r` of the `r`-gon.
pub fn polygon_reflection(r: usize) -> Vec<usize> {
    (0..r).map(|i| (r - i) % r).collect()
}

/// The form of `SL_3` over `F_q[t, t^-1]` twisted by the swap of types 1 and 2.
pub fn su3_form(q: u64) -> Result<QuasiSplitForm> {
    let gcm = affine_a(3);
    let aut = validate_automorphism(&gcm, &[0, 2, 1])?;
    QuasiSplitForm::new(gcm, aut, Vec::new(), q)
}

/// Form JSON: `{"gcm": ..., "perm": {"0": "0", ...}, "s0": [], "q": 2}`.
#[derive(Debug, Clone, Deserialize)]
pub struct FormSpec {
    pub gcm: GcmSpec,
    #[serde(default)]
    pub perm: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub s0: Vec<String>,
    pub q: u64,
}

impl FormSpec {
    pub fn build(self) -> Result<QuasiSplitForm> {
        let gcm = self.gcm.build()?;
        let index = |l: &str| {
            gcm.index_of(l)
                .ok_or_else(|| Error::Parse(format!("unknown label {l:?}")))
        };
        let mut perm: Vec<usize> = (0..gcm.rank()).collect();
        if let Some(map) = &self.perm {
            for (from, to) in map {
                perm[index(from)?] = index(to)?;
            }
        }
        let s0 = self
            .s0
            .iter()
            .map(|l| index(l))
            .collect::<Result<Vec<_>>>()?;
        let aut = validate_automorphism(&gcm, &perm)?;
        QuasiSplitForm::new(gcm, aut, s0, self.q)
    }
}

/// Outcome of the unitary involution checks over `F_{q^2}`.
#[derive(Debug, Clone, Serialize)]
pub struct Su3Report {
    pub q: u64,
    pub seed: u64,
    pub field: crate::field::FieldSpec,
    /// `*` is an involution on the generators and on random products.
    pub involutive: bool,
    /// `x_1(r)* = x_2(r^σ)`, `x_2(r)* = x_1(r^σ)`, `x_0(r)* = x_0(r^σ)` literally.
    pub root_formulas_literal: bool,
    /// The same formulas with `-r^σ` in place of `r^σ`.
    pub root_formulas_signed: bool,
    /// `D_{u,v}* = D_{v^σ, u^σ}`.
    pub torus_formula: bool,
    pub a2_group_order: usize,
    pub a2_fixed: usize,
    pub singleton_group_order: usize,
    pub singleton_fixed: usize,
}

/// `M* = τ(σ(M)^-1)` on `SL_3(F_{q^2}[t, t^-1])`, with `τ` the antidiagonal
/// transpose and `σ` the Frobenius `x -> x^q` on coefficients.
pub fn su3_star(twin: &TwinSl, q: u64, m: &LaurentMatrix) -> Result<LaurentMatrix> {
    let f = twin.field().clone();
    let conj = m.map(|p| p.map_coeffs(|c| f.pow(c, q)));
    Ok(conj.inverse()?.transpose().flip())
}

pub fn su3_involution_check(q: u64, seed: u64) -> Result<Su3Report> {
    let big = GaloisField::from_order(q * q)?;
    let twin = TwinSl::new(3, big.clone())?;
    let star = |m: &LaurentMatrix| su3_star(&twin, q, m);
    let sigma = |r: u32| big.pow(r, q);
    let mut involutive = true;
    let mut literal = true;
    let mut signed = true;
    let mut torus_formula = true;
    for r in big.elements() {
        let pairs = [(1, 2), (2, 1), (0, 0)];
        for (a, b) in pairs {
            let x = twin.gen_x(a, r)?;
            let image = star(&x)?;
            literal &= image == twin.gen_x(b, sigma(r))?;
            signed &= image == twin.gen_x(b, big.neg(sigma(r)))?;
            involutive &= star(&image)? == x;
        }
    }
    let units: Vec<u32> = big.elements().filter(|&x| x != 0).collect();
    for &u in &units {
        for &v in &units {
            let d = twin.gen_torus(&[u, v])?;
            torus_formula &= star(&d)? == twin.gen_torus(&[sigma(v), sigma(u)])?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let m = twin.random_element(&mut rng, 6)?;
        involutive &= star(&star(&m)?)? == m;
    }
    // upper unitriangular constant matrices: the group of the orbit {1, 2}
    let mut a2_group_order = 0;
    let mut a2_fixed = 0;
    for a in big.elements() {
        for b in big.elements() {
            for c in big.elements() {
                let mut m = twin.identity();
                m.set(0, 1, LaurentPoly::constant(a));
                m.set(0, 2, LaurentPoly::constant(c));
                m.set(1, 2, LaurentPoly::constant(b));
                a2_group_order += 1;
                if star(&m)? == m {
                    a2_fixed += 1;
                }
            }
        }
    }
    let mut singleton_fixed = 0;
    for r in big.elements() {
        let x = twin.gen_x(0, r)?;
        if star(&x)? == x {
            singleton_fixed += 1;
        }
    }
    Ok(Su3Report {
        q,
        seed,
        field: big.spec(),
        involutive,
        root_formulas_literal: literal,
        root_formulas_signed: signed,
        torus_formula,
        a2_group_order,
        a2_fixed,
        singleton_group_order: big.order() as usize,
        singleton_fixed,
    })
}
