//! Root systems for the groups the catalog needs: powers of A1, products of
//! type A factors, and bare tori. Weyl chambers, dominance projection and
//! the parabolic/Levi root subsets attached to a weight.

use crate::polycore::Cone;
use crate::rat::{Rat, RatVec};
use num_traits::Zero;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("coordinate length {got} does not match ambient dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("point is not in the required chamber: root #{root} evaluates with the wrong sign")]
    NotInChamber { root: usize },
    #[error("unknown root system descriptor {0:?}")]
    BadDescriptor(String),
}

/// Supported families, hardwired.
///
/// * `A1Power(k)`: k commuting A1 factors in "coroot coordinates" — the i-th
///   simple root is `2 e_i`, its coroot `e_i`, the Weyl group flips signs.
/// * `TypeAProduct(ns)`: one block of `n` coordinates per special-linear
///   factor; roots are coordinate differences within a block, all weights
///   live in the per-block sum-zero subspace, the Weyl group permutes block
///   coordinates.
/// * `Torus(k)`: no roots at all; the chamber is everything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootSystemKind {
    A1Power(usize),
    TypeAProduct(Vec<usize>),
    Torus(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    kind: RootSystemKind,
    dim: usize,
    roots: Vec<RatVec>,
    coroots: Vec<RatVec>,
    simple_indices: Vec<usize>,
}

impl RootSystem {
    pub fn a1_power(k: usize) -> RootSystem {
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        let mut simple = Vec::new();
        for i in 0..k {
            simple.push(roots.len());
            roots.push(RatVec::unit(k, i).scale(&crate::rat::rat(2)));
            coroots.push(RatVec::unit(k, i));
            roots.push(RatVec::unit(k, i).scale(&crate::rat::rat(-2)));
            coroots.push(-&RatVec::unit(k, i));
        }
        RootSystem {
            kind: RootSystemKind::A1Power(k),
            dim: k,
            roots,
            coroots,
            simple_indices: simple,
        }
    }

    pub fn type_a(n: usize) -> RootSystem {
        Self::type_a_product(vec![n])
    }

    /// Product of special-linear factors of the given matrix sizes.
    pub fn type_a_product(ns: Vec<usize>) -> RootSystem {
        assert!(ns.iter().all(|&n| (2..=5).contains(&n)), "factor size out of range");
        let dim: usize = ns.iter().sum();
        let mut roots = Vec::new();
        let mut coroots = Vec::new();
        let mut simple = Vec::new();
        let mut offset = 0;
        for &n in &ns {
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let root = &RatVec::unit(dim, offset + i) - &RatVec::unit(dim, offset + j);
                    if j == i + 1 {
                        simple.push(roots.len());
                    }
                    coroots.push(root.clone()); // type A: coroot = root
                    roots.push(root);
                }
            }
            offset += n;
        }
        RootSystem {
            kind: RootSystemKind::TypeAProduct(ns),
            dim,
            roots,
            coroots,
            simple_indices: simple,
        }
    }

    pub fn torus(k: usize) -> RootSystem {
        RootSystem {
            kind: RootSystemKind::Torus(k),
            dim: k,
            roots: vec![],
            coroots: vec![],
            simple_indices: vec![],
        }
    }

    pub fn kind(&self) -> &RootSystemKind {
        &self.kind
    }

    /// Ambient coordinate dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rank (number of simple roots).
    pub fn rank(&self) -> usize {
        self.simple_indices.len()
    }

    pub fn roots(&self) -> &[RatVec] {
        &self.roots
    }

    pub fn coroots(&self) -> &[RatVec] {
        &self.coroots
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple_indices
    }

    pub fn simple_roots(&self) -> Vec<RatVec> {
        self.simple_indices
            .iter()
            .map(|&i| self.roots[i].clone())
            .collect()
    }

    pub fn positive_roots(&self) -> Vec<RatVec> {
        // positive = nonnegative combination of simples; in both families
        // this is "first nonzero coordinate positive"
        self.roots
            .iter()
            .filter(|r| {
                r.iter()
                    .find(|x| !x.is_zero())
                    .map(|x| x > &Rat::zero())
                    .unwrap_or(false)
            })
            .cloned()
            .collect()
    }

    /// Evaluates the invariant pairing of a root against a point of the
    /// (co)weight space. Both live in the same coordinates here, so this is
    /// the dot product.
    pub fn pairing(&self, root: &RatVec, x: &RatVec) -> Rat {
        root.dot(x)
    }

    /// The negative Weyl chamber: all positive roots evaluate <= 0. For
    /// type A products the per-block sum-zero equalities are part of the
    /// chamber.
    pub fn negative_chamber(&self) -> Cone {
        let mut normals: Vec<RatVec> = self.simple_roots().iter().map(|a| -a).collect();
        if let RootSystemKind::TypeAProduct(ns) = &self.kind {
            let mut offset = 0;
            for &n in ns {
                let mut ones = RatVec::zeros(self.dim);
                for i in 0..n {
                    ones.0[offset + i] = crate::rat::rat(1);
                }
                normals.push(ones.clone());
                normals.push(-&ones);
                offset += n;
            }
        }
        Cone::from_inequalities(normals, self.dim)
    }

    /// Enumerates the Weyl group as coordinate transforms (for tests and
    /// desk-scale sampling; the largest supported group has 120 elements
    /// per factor).
    pub fn weyl_elements(&self) -> Vec<Box<dyn Fn(&RatVec) -> RatVec>> {
        match &self.kind {
            RootSystemKind::Torus(_) => vec![Box::new(|x: &RatVec| x.clone())],
            RootSystemKind::A1Power(k) => {
                let k = *k;
                (0..(1usize << k))
                    .map(|mask| {
                        let f: Box<dyn Fn(&RatVec) -> RatVec> = Box::new(move |x: &RatVec| {
                            RatVec(
                                x.iter()
                                    .enumerate()
                                    .map(|(i, v)| if mask & (1 << i) != 0 { -v } else { v.clone() })
                                    .collect(),
                            )
                        });
                        f
                    })
                    .collect()
            }
            RootSystemKind::TypeAProduct(ns) => {
                let mut elements: Vec<Vec<usize>> = vec![vec![]];
                for &n in ns {
                    let perms = permutations(n);
                    let mut next = Vec::new();
                    for e in &elements {
                        for p in &perms {
                            let mut e2 = e.clone();
                            let base = e.len();
                            e2.extend(p.iter().map(|&i| base + i));
                            next.push(e2);
                        }
                    }
                    elements = next;
                }
                elements
                    .into_iter()
                    .map(|perm| {
                        let f: Box<dyn Fn(&RatVec) -> RatVec> = Box::new(move |x: &RatVec| {
                            RatVec(perm.iter().map(|&i| x[i].clone()).collect())
                        });
                        f
                    })
                    .collect()
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// Exact or floating coordinates of a chamber point.
#[derive(Clone, Debug, PartialEq)]
pub enum ChamberCoords {
    Exact(RatVec),
    Numeric(Vec<f64>),
}

/// Which chamber a point has been normalized into.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChamberSide {
    /// all positive roots evaluate <= 0
    Antidominant,
    /// all positive roots evaluate >= 0
    Dominant,
}

/// A point of a Weyl chamber, validated on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ChamberPoint {
    pub coords: ChamberCoords,
    pub side: ChamberSide,
}

impl ChamberPoint {
    pub fn new_exact(
        rs: &RootSystem,
        coords: RatVec,
        side: ChamberSide,
    ) -> Result<ChamberPoint, RootError> {
        if coords.len() != rs.dim() {
            return Err(RootError::DimensionMismatch {
                got: coords.len(),
                want: rs.dim(),
            });
        }
        for (i, a) in rs.positive_roots().iter().enumerate() {
            let v = rs.pairing(a, &coords);
            let ok = match side {
                ChamberSide::Antidominant => v <= Rat::zero(),
                ChamberSide::Dominant => v >= Rat::zero(),
            };
            if !ok {
                return Err(RootError::NotInChamber { root: i });
            }
        }
        Ok(ChamberPoint {
            coords: ChamberCoords::Exact(coords),
            side,
        })
    }

    pub fn new_numeric(
        rs: &RootSystem,
        coords: Vec<f64>,
        side: ChamberSide,
        tol: f64,
    ) -> Result<ChamberPoint, RootError> {
        if coords.len() != rs.dim() {
            return Err(RootError::DimensionMismatch {
                got: coords.len(),
                want: rs.dim(),
            });
        }
        for (i, a) in rs.positive_roots().iter().enumerate() {
            let v: f64 = a
                .to_f64_vec()
                .iter()
                .zip(&coords)
                .map(|(r, c)| r * c)
                .sum();
            let ok = match side {
                ChamberSide::Antidominant => v <= tol,
                ChamberSide::Dominant => v >= -tol,
            };
            if !ok {
                return Err(RootError::NotInChamber { root: i });
            }
        }
        Ok(ChamberPoint {
            coords: ChamberCoords::Numeric(coords),
            side,
        })
    }

    pub fn as_f64(&self) -> Vec<f64> {
        match &self.coords {
            ChamberCoords::Exact(v) => v.to_f64_vec(),
            ChamberCoords::Numeric(v) => v.clone(),
        }
    }
}

/// A word in the simple reflections, indices into `simple_indices`.
pub type WeylWord = Vec<usize>;

trait ProjScalar: Clone + PartialOrd {
    fn flip(&self) -> Self;
    fn positive(&self) -> bool;
}

impl ProjScalar for Rat {
    fn flip(&self) -> Rat {
        -self
    }
    fn positive(&self) -> bool {
        self > &Rat::zero()
    }
}

impl ProjScalar for f64 {
    fn flip(&self) -> f64 {
        -self
    }
    fn positive(&self) -> bool {
        *self > 0.0
    }
}

fn project_coords<S: ProjScalar>(rs: &RootSystem, x: &[S]) -> (Vec<S>, WeylWord) {
    let mut v: Vec<S> = x.to_vec();
    let mut word = WeylWord::new();
    match &rs.kind {
        RootSystemKind::Torus(_) => {}
        RootSystemKind::A1Power(k) => {
            // flip only strictly positive coordinates: minimal word, ties fixed
            for i in 0..*k {
                if v[i].positive() {
                    v[i] = v[i].flip();
                    word.push(i);
                }
            }
        }
        RootSystemKind::TypeAProduct(ns) => {
            // bubble sort ascending per block, always the leftmost strict
            // inversion: length = inversion count, so the word is reduced
            let mut offset = 0;
            let mut simple_offset = 0;
            for &n in ns {
                loop {
                    let mut swapped = false;
                    for i in 0..n - 1 {
                        if v[offset + i] > v[offset + i + 1] {
                            v.swap(offset + i, offset + i + 1);
                            word.push(simple_offset + i);
                            swapped = true;
                            break;
                        }
                    }
                    if !swapped {
                        break;
                    }
                }
                offset += n;
                simple_offset += n - 1;
            }
        }
    }
    (v, word)
}

/// Unique antidominant representative of the Weyl orbit, with a reduced word
/// achieving it. Idempotent on chamber points.
pub fn dominance_project(rs: &RootSystem, x: &RatVec) -> Result<(ChamberPoint, WeylWord), RootError> {
    if x.len() != rs.dim() {
        return Err(RootError::DimensionMismatch {
            got: x.len(),
            want: rs.dim(),
        });
    }
    let (coords, word) = project_coords(rs, &x.0);
    let cp = ChamberPoint::new_exact(rs, RatVec(coords), ChamberSide::Antidominant)?;
    Ok((cp, word))
}

pub fn dominance_project_f64(
    rs: &RootSystem,
    x: &[f64],
) -> Result<(ChamberPoint, WeylWord), RootError> {
    if x.len() != rs.dim() {
        return Err(RootError::DimensionMismatch {
            got: x.len(),
            want: rs.dim(),
        });
    }
    let (coords, word) = project_coords(rs, x);
    let cp = ChamberPoint::new_numeric(rs, coords, ChamberSide::Antidominant, 1e-12)?;
    Ok((cp, word))
}

/// Indices of roots alpha with `<alpha, mu> >= 0` — the roots of the
/// parabolic attached to `mu`.
pub fn parabolic_roots(rs: &RootSystem, mu: &RatVec) -> BTreeSet<usize> {
    (0..rs.roots().len())
        .filter(|&i| rs.pairing(&rs.roots()[i], mu) >= Rat::zero())
        .collect()
}

/// Indices of roots orthogonal to `mu` — the roots of the Levi factor.
/// Always equals `parabolic_roots(mu) ∩ parabolic_roots(-mu)`.
pub fn levi_roots(rs: &RootSystem, mu: &RatVec) -> BTreeSet<usize> {
    (0..rs.roots().len())
        .filter(|&i| rs.pairing(&rs.roots()[i], mu).is_zero())
        .collect()
}

/// Wire format for root-system descriptors: `"A1^3"`, `"A(4)"`,
/// `"A(2)xA(2)"`, `"T^2"`.
pub fn descriptor_string(rs: &RootSystem) -> String {
    match rs.kind() {
        RootSystemKind::A1Power(k) => format!("A1^{k}"),
        RootSystemKind::TypeAProduct(ns) => ns
            .iter()
            .map(|n| format!("A({n})"))
            .collect::<Vec<_>>()
            .join("x"),
        RootSystemKind::Torus(k) => format!("T^{k}"),
    }
}

pub fn parse_descriptor(s: &str) -> Result<RootSystem, RootError> {
    let bad = || RootError::BadDescriptor(s.to_string());
    if let Some(k) = s.strip_prefix("A1^") {
        return k.parse::<usize>().map(RootSystem::a1_power).map_err(|_| bad());
    }
    if let Some(k) = s.strip_prefix("T^") {
        return k.parse::<usize>().map(RootSystem::torus).map_err(|_| bad());
    }
    if s.contains("A(") {
        let ns: Result<Vec<usize>, _> = s
            .split('x')
            .map(|part| {
                part.strip_prefix("A(")
                    .and_then(|p| p.strip_suffix(')'))
                    .ok_or_else(bad)?
                    .parse::<usize>()
                    .map_err(|_| bad())
            })
            .collect();
        return Ok(RootSystem::type_a_product(ns?));
    }
    Err(bad())
}

impl Serialize for RootSystem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&descriptor_string(self))
    }
}

impl<'de> Deserialize<'de> for RootSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_descriptor(&s).map_err(DeError::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn iv(xs: &[i64]) -> RatVec {
        RatVec::from_ints(xs)
    }

    #[test]
    fn a1_negative_chamber_is_half_line() {
        let rs = RootSystem::a1_power(1);
        let c = rs.negative_chamber();
        assert_eq!(c.rays(), &[iv(&[-1])]);
        assert!(c.lineality().is_empty());
    }

    #[test]
    fn a1_cubed_negative_chamber_is_octant() {
        let rs = RootSystem::a1_power(3);
        let c = rs.negative_chamber();
        assert_eq!(
            c.rays(),
            &[iv(&[-1, 0, 0]), iv(&[0, -1, 0]), iv(&[0, 0, -1])]
        );
    }

    #[test]
    fn a2_negative_chamber_is_simplicial() {
        // direct inequality assembly: alpha_i(x) <= 0 plus sum-zero
        let rs = RootSystem::type_a(3);
        let c = rs.negative_chamber();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.rays().len(), 2);
        assert!(c.lineality().is_empty());
        for a in rs.simple_roots() {
            assert!(c.facet_normals().contains(&-&a));
        }
        assert!(c.contains(&iv(&[-1, 0, 1])));
        assert!(!c.contains(&iv(&[1, 0, -1])));
    }

    #[test]
    fn dominance_a1_power_flips_signs() {
        let rs = RootSystem::a1_power(3);
        let (cp, word) = dominance_project(&rs, &iv(&[3, -1, 2])).unwrap();
        assert_eq!(cp.coords, ChamberCoords::Exact(iv(&[-3, -1, -2])));
        assert_eq!(word, vec![0, 2]);
        // idempotent on chamber points
        let (cp2, word2) = dominance_project(&rs, &iv(&[-3, -1, -2])).unwrap();
        assert_eq!(cp2.coords, ChamberCoords::Exact(iv(&[-3, -1, -2])));
        assert!(word2.is_empty());
    }

    #[test]
    fn dominance_type_a_sorts_ascending() {
        let rs = RootSystem::type_a(4);
        let (cp, word) = dominance_project(&rs, &iv(&[2, -1, 3, -4])).unwrap();
        assert_eq!(cp.coords, ChamberCoords::Exact(iv(&[-4, -1, 2, 3])));
        assert!(!word.is_empty());

        // sorting oracle over all permutations: every Weyl translate projects
        // to the same chamber point
        for w in rs.weyl_elements() {
            let moved = w(&iv(&[2, -1, 3, -4]));
            let (cpw, _) = dominance_project(&rs, &moved).unwrap();
            assert_eq!(cpw.coords, cp.coords);
        }
    }

    #[test]
    fn dominance_word_is_reduced() {
        let rs = RootSystem::type_a(4);
        let x = iv(&[3, 2, 1, 0]);
        let (_, word) = dominance_project(&rs, &x).unwrap();
        assert_eq!(word.len(), 6); // inversion count of the full reversal
    }

    #[test]
    fn parabolic_and_levi() {
        let rs = RootSystem::type_a(3);
        // mu = 0: all roots
        let all: BTreeSet<usize> = (0..rs.roots().len()).collect();
        assert_eq!(parabolic_roots(&rs, &iv(&[0, 0, 0])), all);
        assert_eq!(levi_roots(&rs, &iv(&[0, 0, 0])), all);

        // strictly dominant: exactly the positive roots, empty Levi
        let mu = iv(&[2, 0, -2]);
        let par = parabolic_roots(&rs, &mu);
        assert_eq!(par.len(), 3);
        for &i in &par {
            assert!(rs.pairing(&rs.roots()[i], &mu) > rat(0));
        }
        assert!(levi_roots(&rs, &mu).is_empty());

        // on one wall of the dominant chamber: positives plus one negative
        // (enumerated pairings oracle: wall <alpha_1, mu> = 0)
        let wall = iv(&[1, 1, -2]);
        let par_wall = parabolic_roots(&rs, &wall);
        assert_eq!(par_wall.len(), 4);
        let levi_wall = levi_roots(&rs, &wall);
        assert_eq!(levi_wall.len(), 2);
        for &i in &levi_wall {
            assert!(rs.pairing(&rs.roots()[i], &wall).is_zero());
        }
    }

    #[test]
    fn levi_of_a1_cubed() {
        let rs = RootSystem::a1_power(3);
        let mu = iv(&[0, 1, 1]);
        let levi = levi_roots(&rs, &mu);
        let vecs: Vec<&RatVec> = levi.iter().map(|&i| &rs.roots()[i]).collect();
        assert_eq!(vecs.len(), 2);
        for v in vecs {
            assert!(v == &iv(&[2, 0, 0]) || v == &iv(&[-2, 0, 0]));
        }
    }

    #[test]
    fn parabolic_union_covers_all_roots() {
        let rs = RootSystem::type_a(4);
        for mu in [iv(&[1, 2, 3, -6]), iv(&[0, 0, 1, -1]), iv(&[5, 5, -5, -5])] {
            let plus = parabolic_roots(&rs, &mu);
            let minus = parabolic_roots(&rs, &(-&mu));
            let union: BTreeSet<usize> = plus.union(&minus).cloned().collect();
            assert_eq!(union.len(), rs.roots().len());
            let inter: BTreeSet<usize> = plus.intersection(&minus).cloned().collect();
            assert_eq!(inter, levi_roots(&rs, &mu));
        }
    }

    #[test]
    fn descriptor_round_trip() {
        for rs in [
            RootSystem::a1_power(3),
            RootSystem::type_a(4),
            RootSystem::type_a_product(vec![2, 2]),
            RootSystem::torus(2),
        ] {
            let s = descriptor_string(&rs);
            assert_eq!(parse_descriptor(&s).unwrap(), rs);
        }
    }

    #[test]
    fn chamber_point_validation() {
        let rs = RootSystem::type_a(2);
        assert!(ChamberPoint::new_exact(&rs, iv(&[-1, 1]), ChamberSide::Antidominant).is_ok());
        assert!(ChamberPoint::new_exact(&rs, iv(&[1, -1]), ChamberSide::Antidominant).is_err());
        assert!(ChamberPoint::new_exact(&rs, iv(&[1, -1]), ChamberSide::Dominant).is_ok());
    }

    #[test]
    fn fundamental_domain_at_desk_scale() {
        let rs = RootSystem::a1_power(2);
        let x = iv(&[2, -3]);
        let mut in_chamber = 0;
        for w in rs.weyl_elements() {
            let y = w(&x);
            if ChamberPoint::new_exact(&rs, y, ChamberSide::Antidominant).is_ok() {
                in_chamber += 1;
            }
        }
        assert_eq!(in_chamber, 1);
    }
}
