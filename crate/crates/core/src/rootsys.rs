//! Restricted root systems, Weyl groups and the catalog of model spaces.
//!
//! Every space stores its flat `a` in coordinates that are orthonormal for the
//! trace form of its matrix realization, so the stored pairing matrix is the
//! identity and `trace_scale` records the factor relating it to the Killing form.

use std::collections::{BTreeMap, VecDeque};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WALL_TOL: f64 = 1e-12;
const MAX_WEYL: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub coords: Vec<f64>,
    pub multiplicity: u32,
}

impl Root {
    pub fn new(coords: Vec<f64>, multiplicity: u32) -> Result<Self> {
        if multiplicity == 0 {
            return Err(Error::InvalidArgument("root multiplicity must be positive".into()));
        }
        if coords.iter().all(|c| *c == 0.0) {
            return Err(Error::InvalidArgument("root must be nonzero".into()));
        }
        Ok(Root { coords, multiplicity })
    }

    /// Value of the root on `h`.
    pub fn eval(&self, h: &[f64]) -> f64 {
        dot(&self.coords, h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Duality {
    Noncompact,
    Compact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Realization {
    /// SL(2,R)/SO(2)
    Sl2R,
    /// SL(2,C)/SU(2)
    Sl2C,
    /// SL(3,R)/SO(3)
    Sl3R,
    /// SO(3)/SO(2)
    So3Sphere,
    /// SU(2) as a symmetric space
    Su2Group,
    /// SU(3) as a symmetric space
    Su3Group,
    /// Product of two copies of SL(2,R)/SO(2)
    Sl2RSquared,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub rank: usize,
    pub positive_roots: Vec<Root>,
    /// Indices into `positive_roots`.
    pub simple: Vec<usize>,
    pub coroots: Vec<Vec<f64>>,
    pub killing: DMatrix<f64>,
    pub rho: Vec<f64>,
    /// Coefficients of each positive root in the simple roots.
    pub simple_coeffs: Vec<Vec<u32>>,
    killing_inv: DMatrix<f64>,
}

impl RootSystem {
    /// Builds a root system from its positive roots; `simple` indexes the simple ones.
    pub fn new(positive_roots: Vec<Root>, simple: Vec<usize>, killing: DMatrix<f64>) -> Result<Self> {
        let rank = killing.nrows();
        if killing.ncols() != rank || simple.len() != rank {
            return Err(Error::InvalidArgument("rank mismatch".into()));
        }
        if positive_roots.iter().any(|a| a.coords.len() != rank) {
            return Err(Error::InvalidArgument("root dimension mismatch".into()));
        }
        let killing_inv = killing.clone().try_inverse().ok_or(Error::SingularKilling)?;
        if killing_inv.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularKilling);
        }
        let mut rs = RootSystem {
            rank,
            positive_roots,
            simple,
            coroots: Vec::new(),
            killing,
            rho: vec![0.0; rank],
            simple_coeffs: Vec::new(),
            killing_inv,
        };
        for a in &rs.positive_roots {
            for (r, c) in rs.rho.iter_mut().zip(&a.coords) {
                *r += 0.5 * a.multiplicity as f64 * c;
            }
        }
        rs.coroots = rs
            .positive_roots
            .iter()
            .map(|a| {
                let h = rs.dual(&a.coords);
                let n = rs.pair(&a.coords, &a.coords);
                h.iter().map(|x| 2.0 * x / n).collect()
            })
            .collect();
        rs.simple_coeffs = rs.compute_simple_coeffs()?;
        Ok(rs)
    }

    fn compute_simple_coeffs(&self) -> Result<Vec<Vec<u32>>> {
        let r = self.rank;
        let s = DMatrix::from_fn(r, r, |i, j| self.positive_roots[self.simple[j]].coords[i]);
        let s_inv = s.try_inverse().ok_or_else(|| Error::InvalidArgument("simple roots are dependent".into()))?;
        let mut out = Vec::new();
        for a in &self.positive_roots {
            let c = &s_inv * DVector::from_column_slice(&a.coords);
            let mut row = Vec::with_capacity(r);
            for v in c.iter() {
                let k = v.round();
                if (v - k).abs() > 1e-9 || k < 0.0 {
                    return Err(Error::InvalidArgument(
                        "positive root is not a nonnegative integer combination of simple roots".into(),
                    ));
                }
                row.push(k as u32);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Vector `H_a` in `a` with `<H_a, H> = a(H)`.
    pub fn dual(&self, functional: &[f64]) -> Vec<f64> {
        let v = &self.killing_inv * DVector::from_column_slice(functional);
        v.iter().copied().collect()
    }

    /// Pairing of two functionals.
    pub fn pair(&self, a: &[f64], b: &[f64]) -> f64 {
        let h = self.dual(b);
        dot(a, &h)
    }

    /// Pairing of two vectors in `a`.
    pub fn pair_vectors(&self, h1: &[f64], h2: &[f64]) -> f64 {
        let v = &self.killing * DVector::from_column_slice(h2);
        dot(h1, v.as_slice())
    }

    pub fn simple_roots(&self) -> Vec<&Root> {
        self.simple.iter().map(|&i| &self.positive_roots[i]).collect()
    }

    /// Total multiplicity over the positive roots.
    pub fn positive_mass(&self) -> u32 {
        self.positive_roots.iter().map(|a| a.multiplicity).sum()
    }

    /// Reflection of `a` in the root hyperplane of `alpha`, as a matrix on `a`.
    pub fn reflection(&self, alpha: &Root) -> DMatrix<f64> {
        let h = self.dual(&alpha.coords);
        let n = self.pair(&alpha.coords, &alpha.coords);
        let mut m = DMatrix::identity(self.rank, self.rank);
        for i in 0..self.rank {
            for j in 0..self.rank {
                m[(i, j)] -= 2.0 * h[i] * alpha.coords[j] / n;
            }
        }
        m
    }

    /// Coroot basis: `omega_i` with `alpha_j(omega_i) = delta_ij` for simple `alpha_j`.
    pub fn coroot_basis(&self) -> Vec<Vec<f64>> {
        let r = self.rank;
        let s = DMatrix::from_fn(r, r, |i, j| self.positive_roots[self.simple[i]].coords[j]);
        let inv = s.try_inverse().expect("simple roots independent");
        (0..r).map(|i| inv.column(i).iter().copied().collect()).collect()
    }

    /// Whether the Dynkin diagram is connected.
    pub fn is_irreducible(&self) -> bool {
        let r = self.rank;
        let mut seen = vec![false; r];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..r {
                if !seen[j] && self.simple_linked(i, j) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|s| *s)
    }

    /// Whether simple roots `i` and `j` are joined in the Dynkin diagram.
    pub fn simple_linked(&self, i: usize, j: usize) -> bool {
        i != j
            && self
                .pair(&self.positive_roots[self.simple[i]].coords, &self.positive_roots[self.simple[j]].coords)
                .abs()
                > 1e-12
    }

    /// Index of the positive root equal to `±functional`, with the sign.
    pub fn find_root(&self, functional: &[f64]) -> Option<(usize, f64)> {
        for (i, a) in self.positive_roots.iter().enumerate() {
            let d_plus: f64 = a.coords.iter().zip(functional).map(|(x, y)| (x - y).abs()).sum();
            let d_minus: f64 = a.coords.iter().zip(functional).map(|(x, y)| (x + y).abs()).sum();
            if d_plus < 1e-9 {
                return Some((i, 1.0));
            }
            if d_minus < 1e-9 {
                return Some((i, -1.0));
            }
        }
        None
    }
}

#[derive(Debug, Clone)]
pub struct WeylElement {
    pub matrix: DMatrix<f64>,
    /// Reduced word in the simple reflections (indices into the simple list).
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// `w H`.
    pub fn act(&self, h: &[f64]) -> Vec<f64> {
        let v = &self.matrix * DVector::from_column_slice(h);
        v.iter().copied().collect()
    }

    /// `w lambda`, i.e. the functional `H -> lambda(w^{-1} H)`.
    pub fn act_functional(&self, lambda: &[f64]) -> Vec<f64> {
        let inv = self.matrix.clone().try_inverse().expect("weyl element invertible");
        let v = inv.transpose() * DVector::from_column_slice(lambda);
        v.iter().copied().collect()
    }
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    pub identity: usize,
    pub longest: usize,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Generates the Weyl group from the simple reflections.
///
/// Elements are ordered by word length, then lexicographically by word.
pub fn generate_weyl(rs: &RootSystem) -> Result<WeylGroup> {
    generate_weyl_bounded(rs, MAX_WEYL)
}

pub fn generate_weyl_bounded(rs: &RootSystem, bound: usize) -> Result<WeylGroup> {
    let gens: Vec<DMatrix<f64>> = rs.simple_roots().iter().map(|a| rs.reflection(a)).collect();
    let id = DMatrix::identity(rs.rank, rs.rank);
    let mut found: Vec<WeylElement> = vec![WeylElement { matrix: id, word: Vec::new() }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (g, s) in gens.iter().enumerate() {
            let m = s * &found[i].matrix;
            if found.iter().any(|e| (&e.matrix - &m).abs().max() < 1e-9) {
                continue;
            }
            if found.len() >= bound {
                return Err(Error::NonClosure(bound));
            }
            let mut word = vec![g];
            word.extend(&found[i].word);
            found.push(WeylElement { matrix: m, word });
            queue.push_back(found.len() - 1);
        }
    }
    found.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
    let longest = found.len() - 1;
    Ok(WeylGroup { elements: found, identity: 0, longest })
}

#[derive(Debug, Clone)]
pub struct SpaceDescriptor {
    pub id: String,
    pub duality: Duality,
    pub n: usize,
    pub r: usize,
    pub roots: RootSystem,
    pub weyl: WeylGroup,
    pub realization: Realization,
    /// Basis of the spherical weight lattice (compact spaces only).
    pub weight_lattice_basis: Option<Vec<Vec<f64>>>,
    /// Killing form = `trace_scale` x trace form of the realization.
    pub trace_scale: f64,
}

impl SpaceDescriptor {
    pub fn is_compact(&self) -> bool {
        self.duality == Duality::Compact
    }

    pub fn irreducible(&self) -> bool {
        self.roots.is_irreducible()
    }

    /// `m(Delta)`, the multiplicity summed over all roots.
    pub fn total_mass(&self) -> u32 {
        2 * self.roots.positive_mass()
    }

    /// Whether `mu` is a dominant element of the spherical weight lattice.
    pub fn is_lattice_weight(&self, mu: &[f64]) -> bool {
        self.roots.positive_roots.iter().all(|a| {
            let q = self.roots.pair(mu, &a.coords) / self.roots.pair(&a.coords, &a.coords);
            (q - q.round()).abs() < 1e-9 && q > -1e-9
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberVector {
    pub coords: Vec<f64>,
    pub dominant_flag: bool,
}

impl ChamberVector {
    pub fn new(rs: &RootSystem, coords: Vec<f64>) -> Self {
        let dominant_flag = rs.positive_roots.iter().all(|a| a.eval(&coords) >= -WALL_TOL);
        ChamberVector { coords, dominant_flag }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralParameter {
    pub direction: Vec<f64>,
    pub scale: f64,
}

impl SpectralParameter {
    pub fn new(rs: &RootSystem, direction: Vec<f64>, scale: f64) -> Result<Self> {
        if scale <= 0.0 {
            return Err(Error::InvalidArgument("scale must be positive".into()));
        }
        if direction.len() != rs.rank {
            return Err(Error::InvalidArgument("direction has wrong dimension".into()));
        }
        if rs.positive_roots.iter().any(|a| rs.pair(&direction, &a.coords) <= 0.0) {
            return Err(Error::InvalidArgument("direction must be strictly dominant".into()));
        }
        Ok(SpectralParameter { direction, scale })
    }

    /// `t * direction`.
    pub fn scaled(&self) -> Vec<f64> {
        self.direction.iter().map(|x| x * self.scale).collect()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `H_alpha`, checked against the defining pairing on a basis.
pub fn dual_vector(rs: &RootSystem, alpha: &Root) -> Result<Vec<f64>> {
    let h = rs.dual(&alpha.coords);
    for i in 0..rs.rank {
        let mut e = vec![0.0; rs.rank];
        e[i] = 1.0;
        if (rs.pair_vectors(&h, &e) - alpha.eval(&e)).abs() > 1e-10 {
            return Err(Error::SingularKilling);
        }
    }
    Ok(h)
}

/// Finds the first `w` (in group order) with `w H` dominant.
pub fn chamber_decompose(space: &SpaceDescriptor, h: &[f64]) -> (usize, ChamberVector) {
    let rs = &space.roots;
    for (i, w) in space.weyl.elements.iter().enumerate() {
        let wh = w.act(h);
        if rs.positive_roots.iter().all(|a| a.eval(&wh) >= -WALL_TOL) {
            return (i, ChamberVector::new(rs, wh));
        }
    }
    unreachable!("the Weyl group acts transitively on chambers")
}

/// `min |alpha(H)|` over the roots.
pub fn regularity_gap(rs: &RootSystem, h: &[f64]) -> f64 {
    rs.positive_roots.iter().map(|a| a.eval(h).abs()).fold(f64::INFINITY, f64::min)
}

fn a1(id: &str, duality: Duality, n: usize, m: u32, alpha: f64, realization: Realization, scale: f64) -> SpaceDescriptor {
    let roots = vec![Root::new(vec![alpha], m).unwrap()];
    let rs = RootSystem::new(roots, vec![0], DMatrix::identity(1, 1)).unwrap();
    let weyl = generate_weyl(&rs).unwrap();
    let weight_lattice_basis = match duality {
        Duality::Compact => Some(vec![vec![alpha]]),
        Duality::Noncompact => None,
    };
    SpaceDescriptor {
        id: id.into(),
        duality,
        n,
        r: 1,
        roots: rs,
        weyl,
        realization,
        weight_lattice_basis,
        trace_scale: scale,
    }
}

/// Diagonal realization basis of the trace-zero diagonal in sl(3): `E1, E2`.
pub fn sl3_basis() -> [[f64; 3]; 2] {
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    [[1.0 / s2, -1.0 / s2, 0.0], [1.0 / s6, 1.0 / s6, -2.0 / s6]]
}

/// Coordinates of the diagonal functional `e_i - e_j`.
fn sl3_root(i: usize, j: usize) -> Vec<f64> {
    let b = sl3_basis();
    vec![b[0][i] - b[0][j], b[1][i] - b[1][j]]
}

fn a2(id: &str, duality: Duality, n: usize, m: u32, scale_root: f64, realization: Realization, trace_scale: f64) -> SpaceDescriptor {
    let mk = |i, j| {
        let c: Vec<f64> = sl3_root(i, j).iter().map(|x| x * scale_root).collect();
        Root::new(c, m).unwrap()
    };
    let roots = vec![mk(0, 1), mk(1, 2), mk(0, 2)];
    let rs = RootSystem::new(roots, vec![0, 1], DMatrix::identity(2, 2)).unwrap();
    let weyl = generate_weyl(&rs).unwrap();
    let weight_lattice_basis = match duality {
        Duality::Compact => {
            // fundamental weights e1 and e1 + e2 as functionals on the diagonal
            let b = sl3_basis();
            let w1 = vec![b[0][0], b[1][0]];
            let w2 = vec![b[0][0] + b[0][1], b[1][0] + b[1][1]];
            Some(vec![w1, w2])
        }
        Duality::Noncompact => None,
    };
    SpaceDescriptor {
        id: id.into(),
        duality,
        n,
        r: 2,
        roots: rs,
        weyl,
        realization,
        weight_lattice_basis,
        trace_scale,
    }
}

/// Product of two hyperbolic planes.
pub fn product_h2_h2() -> SpaceDescriptor {
    let s2 = 2f64.sqrt();
    let roots = vec![Root::new(vec![s2, 0.0], 1).unwrap(), Root::new(vec![0.0, s2], 1).unwrap()];
    let rs = RootSystem::new(roots, vec![0, 1], DMatrix::identity(2, 2)).unwrap();
    let weyl = generate_weyl(&rs).unwrap();
    SpaceDescriptor {
        id: "H2xH2".into(),
        duality: Duality::Noncompact,
        n: 4,
        r: 2,
        roots: rs,
        weyl,
        realization: Realization::Sl2RSquared,
        weight_lattice_basis: None,
        trace_scale: 4.0,
    }
}

/// The model spaces, keyed by id.
pub fn build_catalog() -> BTreeMap<String, SpaceDescriptor> {
    let s2 = 2f64.sqrt();
    let list = vec![
        a1("H2", Duality::Noncompact, 2, 1, s2, Realization::Sl2R, 4.0),
        a1("H3", Duality::Noncompact, 3, 2, s2, Realization::Sl2C, 8.0),
        a2("SL3R", Duality::Noncompact, 5, 1, 1.0, Realization::Sl3R, 6.0),
        a1("S2", Duality::Compact, 2, 1, 1.0 / s2, Realization::So3Sphere, 1.0),
        a1("SU2group", Duality::Compact, 3, 2, 1.0 / s2, Realization::Su2Group, 4.0),
        a2("SU3group", Duality::Compact, 8, 2, 0.5, Realization::Su3Group, 6.0),
    ];
    list.into_iter().map(|s| (s.id.clone(), s)).collect()
}

/// Looks up a catalog space, including the product space `H2xH2`.
pub fn space(id: &str) -> Result<SpaceDescriptor> {
    if id == "H2xH2" {
        return Ok(product_h2_h2());
    }
    build_catalog().remove(id).ok_or_else(|| Error::UnknownSpace(id.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub duality: Duality,
    pub n: usize,
    pub r: usize,
    pub simple_roots: Vec<Vec<f64>>,
    pub positive_roots: Vec<Vec<f64>>,
    pub multiplicities: Vec<u32>,
    pub killing: Vec<Vec<f64>>,
    pub realization: Realization,
}

impl From<&SpaceDescriptor> for CatalogEntry {
    fn from(s: &SpaceDescriptor) -> Self {
        let rs = &s.roots;
        CatalogEntry {
            id: s.id.clone(),
            duality: s.duality,
            n: s.n,
            r: s.r,
            simple_roots: rs.simple_roots().iter().map(|a| a.coords.clone()).collect(),
            positive_roots: rs.positive_roots.iter().map(|a| a.coords.clone()).collect(),
            multiplicities: rs.positive_roots.iter().map(|a| a.multiplicity).collect(),
            killing: (0..rs.rank).map(|i| rs.killing.row(i).iter().copied().collect()).collect(),
            realization: s.realization,
        }
    }
}

pub fn catalog_json() -> String {
    let mut entries: Vec<CatalogEntry> = build_catalog().values().map(CatalogEntry::from).collect();
    entries.push(CatalogEntry::from(&product_h2_h2()));
    serde_json::to_string_pretty(&entries).expect("catalog serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_dimensions() {
        let c = build_catalog();
        let sl3 = &c["SL3R"];
        assert_eq!((sl3.n, sl3.r), (5, 2));
        for s in c.values() {
            assert_eq!(s.total_mass() as usize, 2 * s.n - 2 * s.r, "{}", s.id);
        }
        assert!(c["SU3group"].roots.positive_roots.iter().all(|a| a.multiplicity == 2));
        assert_eq!(product_h2_h2().total_mass(), 4);
    }

    #[test]
    fn weyl_orders() {
        let c = build_catalog();
        assert_eq!(c["H2"].weyl.order(), 2);
        assert_eq!(c["SL3R"].weyl.order(), 6);
        assert_eq!(product_h2_h2().weyl.order(), 4);
        assert_eq!(c["SL3R"].weyl.elements[c["SL3R"].weyl.longest].len(), 3);
    }

    #[test]
    fn weyl_bound_reports_non_closure() {
        let c = build_catalog();
        assert_eq!(generate_weyl_bounded(&c["SL3R"].roots, 4).unwrap_err(), Error::NonClosure(4));
    }

    #[test]
    fn a1_dual_vector() {
        let c = build_catalog();
        let rs = &c["H2"].roots;
        let a = &rs.positive_roots[0];
        assert!((rs.pair(&a.coords, &a.coords) - 2.0).abs() < 1e-14);
        let h = dual_vector(rs, a).unwrap();
        assert!((a.eval(&h) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn a2_dual_vectors() {
        let c = build_catalog();
        let rs = &c["SL3R"].roots;
        let (a, b) = (&rs.positive_roots[0], &rs.positive_roots[1]);
        assert!((rs.pair(&a.coords, &b.coords) + 1.0).abs() < 1e-12);
        assert!((a.eval(&dual_vector(rs, b).unwrap()) + 1.0).abs() < 1e-12);
        for x in &rs.positive_roots {
            for y in &rs.positive_roots {
                let hx = dual_vector(rs, x).unwrap();
                let hy = dual_vector(rs, y).unwrap();
                assert!((rs.pair_vectors(&hx, &hy) - rs.pair(&x.coords, &y.coords)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_killing_rejected() {
        let roots = vec![Root::new(vec![1.0], 1).unwrap()];
        let err = RootSystem::new(roots, vec![0], DMatrix::zeros(1, 1)).unwrap_err();
        assert_eq!(err, Error::SingularKilling);
    }

    #[test]
    fn chamber_examples() {
        let c = build_catalog();
        let h2 = &c["H2"];
        let (w, hp) = chamber_decompose(h2, &[0.5]);
        assert_eq!(w, h2.weyl.identity);
        assert_eq!(hp.coords, vec![0.5]);
        let (w, hp) = chamber_decompose(h2, &[-2.0]);
        assert_eq!(h2.weyl.elements[w].len(), 1);
        assert!((hp.coords[0] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn gaps() {
        let c = build_catalog();
        let h2 = &c["H2"];
        assert_eq!(regularity_gap(&h2.roots, &[0.0]), 0.0);
        let y = 0.3 / 2f64.sqrt();
        assert!((regularity_gap(&h2.roots, &[y]) - 0.3).abs() < 1e-15);
        let sl3 = &c["SL3R"];
        // on the wall of e1 - e2
        assert!(regularity_gap(&sl3.roots, &[0.0, 0.7]).abs() < 1e-15);
    }

    #[test]
    fn compact_lattices() {
        let c = build_catalog();
        for id in ["S2", "SU2group", "SU3group"] {
            let s = &c[id];
            for w in s.weight_lattice_basis.as_ref().unwrap() {
                assert!(s.is_lattice_weight(w), "{id}");
            }
        }
    }

    #[test]
    fn catalog_json_keys() {
        let v: serde_json::Value = serde_json::from_str(&catalog_json()).unwrap();
        let first = &v.as_array().unwrap()[0];
        for k in ["id", "duality", "n", "r", "simple_roots", "positive_roots", "multiplicities", "killing", "realization"] {
            assert!(first.get(k).is_some(), "{k}");
        }
    }
}
