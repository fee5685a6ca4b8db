//! Pure simplicial complexes: squeezed balls and spheres, face numbers,
//! the g-theorem predicates, and dual graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::OrderIdeal;

/// A simplex as its strictly increasing vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts and deduplicates `vertices`.
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// The codimension-one faces, in order of the dropped vertex.
    pub fn ridges(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |k| {
            let mut r = self.0.clone();
            r.remove(k);
            Simplex(r)
        })
    }

    pub fn cone(&self, apex: usize) -> Simplex {
        let mut v = self.0.clone();
        v.push(apex);
        Simplex::new(v)
    }

    pub fn common(&self, other: &Simplex) -> usize {
        self.0.iter().filter(|v| other.contains(**v)).count()
    }
}

impl From<&[usize]> for Simplex {
    fn from(v: &[usize]) -> Self {
        Simplex::new(v.to_vec())
    }
}

impl<const N: usize> From<[usize; N]> for Simplex {
    fn from(v: [usize; N]) -> Self {
        Simplex::new(v.to_vec())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&labels.join(" "))
    }
}

/// A pure complex given by its facets, all of dimension `dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureComplex {
    dim: usize,
    facets: BTreeSet<Simplex>,
}

impl PureComplex {
    pub fn new(dim: usize, facets: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let facets: BTreeSet<Simplex> = facets.into_iter().collect();
        if facets.is_empty() {
            return Err(Error::InvalidParameters("complex has no facets".into()));
        }
        if let Some(bad) = facets.iter().find(|f| f.len() != dim + 1) {
            return Err(Error::InvalidParameters(format!(
                "facet {{{bad}}} does not have {} vertices",
                dim + 1
            )));
        }
        Ok(PureComplex { dim, facets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &BTreeSet<Simplex> {
        &self.facets
    }

    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.facets
            .iter()
            .flat_map(|f| f.vertices().iter().copied())
            .collect()
    }

    /// Number of facets containing each ridge.
    pub fn ridge_incidence(&self) -> BTreeMap<Simplex, usize> {
        let mut count = BTreeMap::new();
        for f in &self.facets {
            for r in f.ridges() {
                *count.entry(r).or_insert(0) += 1;
            }
        }
        count
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("complex serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: PureComplex = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        PureComplex::new(raw.dim, raw.facets)
    }
}

impl fmt::Display for PureComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim={} facets={}", self.dim, self.facets.len())?;
        for facet in &self.facets {
            writeln!(f, "{facet}")?;
        }
        Ok(())
    }
}

impl FromStr for PureComplex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty complex".into()))?;
        let mut dim = None;
        let mut count = None;
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("dim", v)) => dim = v.parse::<usize>().ok(),
                Some(("facets", v)) => count = v.parse::<usize>().ok(),
                _ => return Err(Error::Parse(format!("bad header {header:?}"))),
            }
        }
        let (dim, count) = dim
            .zip(count)
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let mut facets = Vec::new();
        for line in lines {
            let labels = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad label {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if labels.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse(format!("labels not increasing: {line:?}")));
            }
            facets.push(Simplex(labels));
        }
        if facets.len() != count {
            return Err(Error::Parse(format!(
                "header promises {count} facets, found {}",
                facets.len()
            )));
        }
        PureComplex::new(dim, facets)
    }
}

/// The 3-ball `B(I')` spanned by the ideal, without the cone vertex.
pub fn ball_prime_facets(ideal: &OrderIdeal) -> PureComplex {
    PureComplex::new(
        3,
        ideal.elements().iter().map(|e| Simplex::from(e.vertices())),
    )
    .expect("ideals are nonempty")
}

/// The squeezed 4-ball `B(I) = 0 * B(I')`.
pub fn ball_facets(ideal: &OrderIdeal) -> PureComplex {
    PureComplex::new(4, ball_prime_facets(ideal).facets.iter().map(|f| f.cone(0)))
        .expect("ideals are nonempty")
}

/// Ridges lying in exactly one facet.
pub fn boundary_complex(ball: &PureComplex) -> PureComplex {
    assert!(ball.dim >= 1, "boundary of a 0-dimensional complex");
    let boundary = ball
        .ridge_incidence()
        .into_iter()
        .filter(|(_, c)| *c == 1)
        .map(|(r, _)| r);
    PureComplex::new(ball.dim - 1, boundary).expect("a finite ball has nonempty boundary")
}

/// The squeezed 3-sphere `S(I) = B(I') ∪ 0 * ∂B(I')`.
pub fn sphere_facets(ideal: &OrderIdeal) -> PureComplex {
    let inner = ball_prime_facets(ideal);
    let coned: Vec<Simplex> = boundary_complex(&inner)
        .facets
        .iter()
        .map(|t| t.cone(0))
        .collect();
    PureComplex::new(3, inner.facets.into_iter().chain(coned)).expect("nonempty")
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, m| acc * (n - m) / (m + 1))
}

/// f-, h- and g-vectors of a simplicial `(d-1)`-sphere candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FhgVectors {
    /// `f[0] = f_{-1} = 1`, then `f_0, ..., f_{d-1}`.
    pub f: Vec<i64>,
    pub h: Vec<i64>,
    pub g: Vec<i64>,
}

impl FhgVectors {
    pub fn dehn_sommerville(&self) -> bool {
        let d = self.h.len() - 1;
        (0..=d).all(|k| self.h[k] == self.h[d - k])
    }

    pub fn is_m_sequence(&self) -> bool {
        is_m_sequence(&self.g)
    }
}

/// Counts every face of `complex` by expanding facets into subsets.
pub fn face_counts(complex: &PureComplex) -> Vec<i64> {
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for facet in &complex.facets {
        let v = facet.vertices();
        for mask in 1u32..(1 << v.len()) {
            faces.insert(
                (0..v.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| v[b])
                    .collect(),
            );
        }
    }
    let mut f = vec![0i64; complex.dim + 2];
    f[0] = 1;
    for face in faces {
        f[face.len()] += 1;
    }
    f
}

/// The h-vector from `f` (with `f[0] = f_{-1}`), for dimension `d`.
pub fn h_vector(f: &[i64], d: usize) -> Vec<i64> {
    let d = d as i64;
    (0..=d)
        .map(|k| {
            (0..=k)
                .map(|i| {
                    let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(d - i, d - k) * f[i as usize]
                })
                .sum()
        })
        .collect()
}

pub fn fhg_vectors(complex: &PureComplex) -> FhgVectors {
    let d = complex.dim + 1;
    let f = face_counts(complex);
    let h = h_vector(&f, d);
    let g = (0..=d / 2)
        .map(|k| if k == 0 { h[0] } else { h[k] - h[k - 1] })
        .collect();
    FhgVectors { f, h, g }
}

/// Greedy expansion `value = C(a_k, k) + ... + C(a_1, 1)` with
/// `a_k > ... > a_1 >= 0`, returned as `[a_k, ..., a_1]`.
pub fn binomial_expansion(value: i64, k: usize) -> Vec<i64> {
    assert!(value >= 0);
    let mut rem = value;
    let mut out = Vec::with_capacity(k);
    for m in (1..=k as i64).rev() {
        let mut a = m - 1;
        while binomial(a + 1, m) <= rem {
            a += 1;
        }
        rem -= binomial(a, m);
        out.push(a);
    }
    debug_assert_eq!(rem, 0);
    out
}

/// `∂^k(g)`, from the expansion of `g - 1`, plus whether the last term hit
/// the `C(-1, 0)` edge case (counted as 1).
pub fn lower_shadow(g: i64, k: usize) -> (i64, bool) {
    if g <= 0 {
        return (0, false);
    }
    let a = binomial_expansion(g - 1, k);
    let mut total = 0;
    let mut edge = false;
    for (pos, &am) in a.iter().enumerate() {
        let m = (k - pos) as i64;
        if m == 1 && am == 0 {
            edge = true;
            total += 1;
        } else {
            total += binomial(am - 1, m - 1);
        }
    }
    (total, edge)
}

pub fn is_m_sequence(g: &[i64]) -> bool {
    if g.first() != Some(&1) || g.iter().any(|x| *x < 0) {
        return false;
    }
    (1..g.len()).all(|k| g[k - 1] >= lower_shadow(g[k], k).0)
}

/// Whether deciding the M-sequence property for `g` relied on `C(-1, 0)`.
pub fn uses_edge_convention(g: &[i64]) -> bool {
    (1..g.len()).any(|k| lower_shadow(g[k], k).1)
}

/// Facet-adjacency graph: two facets are adjacent iff they share a ridge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub nodes: Vec<Simplex>,
    pub adjacency: Vec<Vec<usize>>,
}

impl DualGraph {
    pub fn index_of(&self, facet: &Simplex) -> Option<usize> {
        self.nodes.binary_search(facet).ok()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].contains(&b)
    }

    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Edge set as sorted facet pairs, for label-level comparisons.
    pub fn edge_set(&self) -> BTreeSet<(Simplex, Simplex)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, ns)| {
                ns.iter()
                    .filter(move |&&b| a < b)
                    .map(move |&b| (self.nodes[a].clone(), self.nodes[b].clone()))
            })
            .collect()
    }
}

pub fn dual_graph(complex: &PureComplex) -> DualGraph {
    let nodes: Vec<Simplex> = complex.facets.iter().cloned().collect();
    let mut by_ridge: HashMap<Simplex, Vec<usize>> = HashMap::new();
    for (k, f) in nodes.iter().enumerate() {
        for r in f.ridges() {
            by_ridge.entry(r).or_default().push(k);
        }
    }
    let mut adjacency = vec![Vec::new(); nodes.len()];
    for owners in by_ridge.values() {
        for (x, &a) in owners.iter().enumerate() {
            for &b in &owners[x + 1..] {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    DualGraph { nodes, adjacency }
}

/// Every ridge in exactly two facets and a connected dual graph.
pub fn check_closed_pseudomanifold(complex: &PureComplex) -> bool {
    complex.ridge_incidence().values().all(|&c| c == 2) && dual_graph(complex).is_connected()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{enumerate_ideals, ideal_from_generators, PairElement};

    fn simplex_boundary() -> PureComplex {
        let full = Simplex::from([0, 1, 2, 3, 4]);
        PureComplex::new(3, full.ridges()).unwrap()
    }

    fn ideal_25() -> OrderIdeal {
        ideal_from_generators(&[PairElement::new(2, 5)], 6).unwrap()
    }

    fn set(facets: &[&[usize]]) -> BTreeSet<Simplex> {
        facets.iter().map(|f| Simplex::from(*f)).collect()
    }

    #[test]
    fn squeezed_balls() {
        let single = ideal_from_generators(&[PairElement::new(1, 3)], 4).unwrap();
        assert_eq!(ball_facets(&single).facets(), &set(&[&[0, 1, 2, 3, 4]]));
        let b = ball_facets(&ideal_25());
        assert_eq!(
            b.facets(),
            &set(&[
                &[0, 1, 2, 3, 4],
                &[0, 1, 2, 4, 5],
                &[0, 1, 2, 5, 6],
                &[0, 2, 3, 4, 5],
                &[0, 2, 3, 5, 6]
            ])
        );
    }

    #[test]
    fn boundaries() {
        let tet = PureComplex::new(3, [Simplex::from([1, 2, 3, 4])]).unwrap();
        assert_eq!(boundary_complex(&tet).facets().len(), 4);
        let inner = ball_prime_facets(&ideal_25());
        let interior = inner
            .ridge_incidence()
            .values()
            .filter(|&&c| c == 2)
            .count();
        assert_eq!(interior, 6);
        let bd = boundary_complex(&inner);
        assert_eq!(
            bd.facets(),
            &set(&[
                &[1, 2, 3],
                &[1, 3, 4],
                &[1, 4, 5],
                &[1, 2, 6],
                &[1, 5, 6],
                &[2, 3, 6],
                &[3, 4, 5],
                &[3, 5, 6]
            ])
        );
        assert!(bd.ridge_incidence().values().all(|&c| c == 2));
    }

    #[test]
    fn squeezed_spheres() {
        let single = ideal_from_generators(&[PairElement::new(1, 3)], 4).unwrap();
        assert_eq!(sphere_facets(&single), simplex_boundary());
        let s = sphere_facets(&ideal_25());
        assert_eq!(s.facets().len(), 13);
        assert_eq!(s, boundary_complex(&ball_facets(&ideal_25())));
    }

    #[test]
    fn face_numbers() {
        let v = fhg_vectors(&simplex_boundary());
        assert_eq!(v.f, vec![1, 5, 10, 10, 5]);
        assert_eq!(v.h, vec![1, 1, 1, 1, 1]);
        assert_eq!(v.g, vec![1, 0, 0]);
        let v = fhg_vectors(&sphere_facets(&ideal_25()));
        assert_eq!(v.f, vec![1, 7, 20, 26, 13]);
        assert_eq!(v.h, vec![1, 3, 5, 3, 1]);
        assert_eq!(v.g, vec![1, 2, 2]);
        assert!(v.dehn_sommerville() && v.is_m_sequence());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(1, 2), 0);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial(6, 6), 1);
        assert_eq!(binomial_expansion(1, 2), vec![2, 0]);
        assert_eq!(binomial_expansion(2, 2), vec![2, 1]);
        assert_eq!(binomial_expansion(3, 2), vec![3, 0]);
        assert_eq!(binomial_expansion(0, 2), vec![1, 0]);
        assert_eq!(binomial_expansion(9, 3), vec![4, 3, 2]);
    }

    #[test]
    fn shadow_pinned_values() {
        assert_eq!(lower_shadow(2, 2), (2, true));
        assert_eq!(lower_shadow(3, 2), (2, false));
        assert_eq!(lower_shadow(4, 2), (3, true));
        assert_eq!(lower_shadow(1, 2), (1, true));
        assert_eq!(lower_shadow(0, 2).0, 0);
    }

    #[test]
    fn m_sequences() {
        assert!(is_m_sequence(&[1, 0, 0]));
        assert!(is_m_sequence(&[1, 2, 2]));
        assert!(uses_edge_convention(&[1, 2, 2]));
        assert!(!is_m_sequence(&[1, 0, 5]));
        assert!(!is_m_sequence(&[2, 0, 0]));
        assert!(!is_m_sequence(&[1, 3, -1]));
        assert!(is_m_sequence(&[1, 2, 3]));
        assert!(!is_m_sequence(&[1, 2, 4]));
    }

    /// Macaulay's upper pseudo-power `x^<i>`.
    fn pseudo_power(x: i64, i: i64) -> i64 {
        let mut rem = x;
        let mut total = 0;
        let mut m = i;
        while rem > 0 && m >= 1 {
            let mut a = m;
            while binomial(a + 1, m) <= rem {
                a += 1;
            }
            rem -= binomial(a, m);
            total += binomial(a + 1, m + 1);
            m -= 1;
        }
        total
    }

    #[test]
    fn shadow_condition_matches_macaulay() {
        // g_{k-1} >= ∂^k(g_k)  <=>  g_k <= g_{k-1}^<k-1>, for k = 2, 3.
        for k in 2..=3usize {
            for prev in 0..40 {
                for cur in 0..200 {
                    let ours = prev >= lower_shadow(cur, k).0;
                    let macaulay = cur <= pseudo_power(prev, k as i64 - 1);
                    assert_eq!(ours, macaulay, "k={k} prev={prev} cur={cur}");
                }
            }
        }
    }

    #[test]
    fn dual_graphs() {
        let g = dual_graph(&simplex_boundary());
        assert_eq!(g.nodes.len(), 5);
        assert!((0..5).all(|v| g.degree(v) == 4));
        let g = dual_graph(&sphere_facets(&ideal_25()));
        assert_eq!(g.nodes.len(), 13);
        assert!((0..13).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn pseudomanifolds() {
        assert!(check_closed_pseudomanifold(&simplex_boundary()));
        let tet = PureComplex::new(3, [Simplex::from([1, 2, 3, 4])]).unwrap();
        assert!(!check_closed_pseudomanifold(&tet));
        // Two disjoint spheres: ridges fine, dual graph disconnected.
        let a = Simplex::from([0, 1, 2, 3, 4]);
        let b = Simplex::from([5, 6, 7, 8, 9]);
        let two = PureComplex::new(3, a.ridges().chain(b.ridges())).unwrap();
        assert!(!check_closed_pseudomanifold(&two));
    }

    /// Face count by scanning vertex subsets for containment in a facet.
    fn face_counts_by_vertex_subsets(c: &PureComplex) -> Vec<i64> {
        let verts: Vec<usize> = c.vertex_set().into_iter().collect();
        let mut f = vec![0i64; c.dim() + 2];
        for mask in 0u64..(1 << verts.len()) {
            let subset: Vec<usize> = (0..verts.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| verts[b])
                .collect();
            if subset.len() <= c.dim() + 1
                && c.facets()
                    .iter()
                    .any(|fct| subset.iter().all(|v| fct.contains(*v)))
            {
                f[subset.len()] += 1;
            }
        }
        f
    }

    #[test]
    fn sphere_properties_exhaustive() {
        for n in 4..=10 {
            for ideal in enumerate_ideals(n).unwrap() {
                let s = sphere_facets(&ideal);
                assert_eq!(s, boundary_complex(&ball_facets(&ideal)), "{ideal}");
                assert_eq!(s.vertex_set(), (0..=n).collect(), "{ideal}");
                assert!(check_closed_pseudomanifold(&s), "{ideal}");
                let g = dual_graph(&s);
                assert!((0..g.nodes.len()).all(|v| g.degree(v) == 4), "{ideal}");
                let v = fhg_vectors(&s);
                let f = &v.f;
                assert_eq!(f[1] - f[2] + f[3] - f[4], 0, "{ideal}");
                assert_eq!(f[3], 2 * f[4], "{ideal}");
                assert!(v.dehn_sommerville(), "{ideal}");
                assert!(v.is_m_sequence(), "{ideal}");
                if n <= 8 {
                    assert_eq!(face_counts_by_vertex_subsets(&s), v.f, "{ideal}");
                }
            }
        }
    }

    #[test]
    fn text_and_json_formats() {
        let s = sphere_facets(&ideal_25());
        let text = s.to_string();
        assert!(text.starts_with("dim=3 facets=13\n"));
        assert_eq!(text.parse::<PureComplex>().unwrap(), s);
        assert_eq!(PureComplex::from_json(&s.to_json()).unwrap(), s);
        assert!("dim=3 facets=2\n0 1 2 3\n".parse::<PureComplex>().is_err());
        assert!("dim=3 facets=1\n0 2 1 3\n".parse::<PureComplex>().is_err());
    }
}
