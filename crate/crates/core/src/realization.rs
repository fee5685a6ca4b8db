//! Exact convex realization of `S(I)`.
//!
//! Curve parameters are placed so that every generator of `I'` has
//! product `N' - δ` and every complement minimum has product `N' + δ`;
//! monotonicity of the products along the poset then separates `I'` from
//! its complement. A viewpoint `v` just below `μ(ε)` sees exactly the
//! facets `{0} * I'` of the cyclic polytope, and the vertex figure at `v`
//! is the realization.

use std::collections::BTreeSet;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::{check_closed_pseudomanifold, sphere_facets, PureComplex, Simplex};
use crate::cyclic::{
    expansion_self_check, gale_facets, hyperplane_of, moment_point, FacetIndices, Orientation,
    ParamVector, Point5,
};
use crate::error::{Error, Result};
use crate::poset::{enumerate_poset, merged_sequence, OrderIdeal, PairElement, Tag};
use crate::{Rational, Scalar};

/// Precisions (significant bits) tried in turn when rounding the LP guide.
const PLACEMENT_BITS: [u32; 5] = [12, 20, 32, 44, 53];
const EPSILON_HALVINGS: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationParams {
    pub nprime: Rational,
    pub delta: Rational,
    pub epsilon: Rational,
    pub ts: ParamVector<Rational>,
}

pub fn default_nprime() -> Rational {
    Rational::one()
}

pub fn default_delta() -> Rational {
    Rational::new(1.into(), 4.into())
}

/// `t_i t_{i+1} t_j t_{j+1}`.
pub fn pair_product(e: &PairElement, ts: &[Rational]) -> Rational {
    e.vertices()
        .iter()
        .fold(Rational::one(), |acc, &k| acc * &ts[k])
}

/// For each entry of `E'`, the index whose value is solved exactly: an
/// index of the entry not used by any earlier entry (the largest such).
fn pivots(entries: &[(PairElement, Tag)]) -> Result<Vec<usize>> {
    let mut used = BTreeSet::new();
    let mut out = Vec::with_capacity(entries.len());
    for (e, _) in entries {
        let v = e.vertices();
        let p = v
            .iter()
            .rev()
            .copied()
            .find(|k| !used.contains(k))
            .ok_or_else(|| Error::PlacementFailure(format!("no free index for {e}")))?;
        used.extend(v);
        out.push(p);
    }
    Ok(out)
}

/// The generator through `t_1`, if any. Its S1′ equality conflicts with
/// S2 for some ideals; it is then only held to `<= N' - δ`, which is what
/// shrinking `t_1` produces and still implies S1.
fn touches_t1(e: &PairElement, tag: Tag) -> bool {
    tag == Tag::Gen && e.i == 1
}

/// Log-space guide. First maximizes the margin `s` subject to
/// `x_{k+1} - x_k >= s`, the `E'` equalities and S2 with margin `s`; then,
/// keeping half that margin, minimizes `Σ |x_k|` so the parameters stay
/// near 1 and their exact versions stay short. With `relax`, the equality
/// through `t_1` becomes an upper bound.
fn log_guide(
    n: usize,
    entries: &[(PairElement, Tag)],
    nprime: f64,
    delta: f64,
    relax: bool,
) -> Result<Vec<f64>> {
    let margin = solve_guide(n, entries, nprime, delta, relax, None)?.1;
    if margin <= 1e-9 {
        return Err(Error::PlacementFailure(format!(
            "log-space guide has no positive margin ({margin})"
        )));
    }
    Ok(solve_guide(n, entries, nprime, delta, relax, Some(margin / 2.0))?.0)
}

fn solve_guide(
    n: usize,
    entries: &[(PairElement, Tag)],
    nprime: f64,
    delta: f64,
    relax: bool,
    margin_floor: Option<f64>,
) -> Result<(Vec<f64>, f64)> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let x: Vec<_> = (0..=n).map(|_| lp.add_var(0.0, (-60.0, 60.0))).collect();
    let s = match margin_floor {
        None => lp.add_var(1.0, (-10.0, 0.5)),
        Some(floor) => {
            let s = lp.add_var(0.0, (floor, 0.5));
            for &xk in &x[1..] {
                let u = lp.add_var(-1.0, (0.0, f64::INFINITY));
                lp.add_constraint([(u, 1.0), (xk, -1.0)], ComparisonOp::Ge, 0.0);
                lp.add_constraint([(u, 1.0), (xk, 1.0)], ComparisonOp::Ge, 0.0);
            }
            s
        }
    };
    for k in 1..n {
        lp.add_constraint(
            [(x[k + 1], 1.0), (x[k], -1.0), (s, -1.0)],
            ComparisonOp::Ge,
            0.0,
        );
    }
    for (e, tag) in entries {
        let m = match tag {
            Tag::Gen => nprime - delta,
            Tag::Min => nprime + delta,
        };
        let terms: Vec<_> = e.vertices().iter().map(|&k| (x[k], 1.0)).collect();
        let op = if relax && touches_t1(e, *tag) {
            ComparisonOp::Le
        } else {
            ComparisonOp::Eq
        };
        lp.add_constraint(terms, op, m.ln());
    }
    let mut s2: Vec<_> = [1, n - 2, n - 1, n].iter().map(|&k| (x[k], 1.0)).collect();
    s2.push((s, 1.0));
    lp.add_constraint(s2, ComparisonOp::Le, nprime.ln());
    let sol = lp
        .solve()
        .map_err(|e| Error::PlacementFailure(format!("log-space guide: {e}")))?;
    let margin = *sol.var_value(s);
    Ok(((0..=n).map(|k| *sol.var_value(x[k])).collect(), margin))
}

/// Whether raising `t_1` until the generator through it reaches `target`
/// would break the ordering `t_1 < t_2` or S2. Only then may that product
/// fall short of `N' - δ`.
pub fn relaxation_needed(
    product: &Rational,
    ts: &[Rational],
    target: &Rational,
    nprime: &Rational,
) -> bool {
    let n = ts.len() - 1;
    if n < 5 {
        // S2 is the generator's own product; equality never conflicts.
        return false;
    }
    let t1 = &ts[1] * target / product;
    let s2 = [n - 2, n - 1, n]
        .iter()
        .fold(t1.clone(), |acc, &k| acc * &ts[k]);
    t1 >= ts[2] || &s2 >= nprime
}

/// Reasons `ts` fails S1′, S1 or S2, if any. The generator through `t_1`
/// may lie strictly below `N' - δ` when [`relaxation_needed`].
pub fn placement_violation(
    ideal: &OrderIdeal,
    ts: &[Rational],
    nprime: &Rational,
    delta: &Rational,
) -> Option<String> {
    let n = ideal.n();
    if ts.len() != n + 1 || !ts[0].is_zero() {
        return Some("parameter vector shape".into());
    }
    if let Some(k) = (1..=n).find(|&k| ts[k - 1] >= ts[k]) {
        return Some(format!("not increasing at t_{k}"));
    }
    for (e, tag) in &merged_sequence(ideal).entries {
        let target = match tag {
            Tag::Gen => nprime - delta,
            Tag::Min => nprime + delta,
        };
        let p = pair_product(e, ts);
        if p != target
            && !(touches_t1(e, *tag) && p < target && relaxation_needed(&p, ts, &target, nprime))
        {
            return Some(format!("S1′ equality fails at {e}"));
        }
    }
    for e in enumerate_poset(n).expect("valid ground set") {
        let p = pair_product(&e, ts);
        if ideal.contains(&e) != (&p < nprime) || &p == nprime {
            return Some(format!("S1 fails at {e}"));
        }
    }
    let s2 = [1, n - 2, n - 1, n]
        .iter()
        .fold(Rational::one(), |acc, &k| acc * &ts[k]);
    if &s2 >= nprime {
        return Some("S2 fails".into());
    }
    None
}

/// Places `0 = t_0 < t_1 < ... < t_n` satisfying S1′ exactly, S1 and S2.
pub fn place_parameters(
    ideal: &OrderIdeal,
    nprime: &Rational,
    delta: &Rational,
) -> Result<ParamVector<Rational>> {
    if !delta.is_positive() || delta >= nprime {
        return Err(Error::InvalidParameters("need 0 < δ < N′".into()));
    }
    let n = ideal.n();
    let entries = merged_sequence(ideal).entries;
    let piv = pivots(&entries)?;
    let (nf, df) = (
        nprime.to_f64().unwrap_or(f64::NAN),
        delta.to_f64().unwrap_or(f64::NAN),
    );
    let (guide, relaxed) = match log_guide(n, &entries, nf, df, false) {
        Ok(g) => (g, false),
        Err(_) => (log_guide(n, &entries, nf, df, true)?, true),
    };
    let mut last = String::new();
    for bits in PLACEMENT_BITS {
        let mut ts: Vec<Rational> = guide
            .iter()
            .map(|x| Rational::approximate(x.exp(), bits))
            .collect();
        ts[0] = Rational::zero();
        for ((e, tag), &p) in entries.iter().zip(&piv) {
            if relaxed && touches_t1(e, *tag) {
                continue;
            }
            let target = match tag {
                Tag::Gen => nprime - delta,
                Tag::Min => nprime + delta,
            };
            let others = e
                .vertices()
                .iter()
                .filter(|&&k| k != p)
                .fold(Rational::one(), |acc, &k| acc * &ts[k]);
            ts[p] = target / others;
        }
        let (e, tag) = entries.last().expect("nonempty");
        if relaxed && touches_t1(e, *tag) {
            let mut exact = ts.clone();
            exact[1] = &ts[1] * (nprime - delta) / pair_product(e, &ts);
            if placement_violation(ideal, &exact, nprime, delta).is_none() {
                return ParamVector::new(exact);
            }
        }
        match placement_violation(ideal, &ts, nprime, delta) {
            None => return ParamVector::new(ts),
            Some(why) => last = format!("{why} at {bits} bits"),
        }
    }
    Err(Error::PlacementFailure(last))
}

/// `μ(ε) - ε N' e_5`.
pub fn viewpoint(epsilon: &Rational, nprime: &Rational) -> Point5<Rational> {
    let mut v = moment_point(epsilon);
    v[4] = &v[4] - epsilon * nprime;
    v
}

fn four_face(e: &PairElement) -> FacetIndices {
    [0, e.i, e.i + 1, e.j, e.j + 1]
}

/// `{0} * I'` as 5-subsets.
pub fn squeezed_ball_facets(ideal: &OrderIdeal) -> BTreeSet<FacetIndices> {
    ideal.elements().iter().map(four_face).collect()
}

/// Facets of `C` whose outer side contains `v`.
pub fn visible_set(
    ts: &ParamVector<Rational>,
    v: &Point5<Rational>,
) -> Result<BTreeSet<FacetIndices>> {
    let mut visible = BTreeSet::new();
    for (f, _) in gale_facets(ts.len()) {
        let h = hyperplane_of(&f, ts);
        let roots: Vec<Rational> = f.iter().map(|&k| ts.values()[k].clone()).collect();
        if !expansion_self_check(&roots) {
            return Err(Error::Internal(format!("γ expansion of {f:?}")));
        }
        let value = h.outer_value(v);
        if value.is_zero() {
            return Err(Error::DegenerateViewpoint(f.to_vec()));
        }
        if value.is_positive() {
            visible.insert(f);
        }
    }
    Ok(visible)
}

/// Whether `ε` satisfies the separation S3(a) and the visibility system S4.
pub fn epsilon_admissible(
    ideal: &OrderIdeal,
    ts: &ParamVector<Rational>,
    nprime: &Rational,
    epsilon: &Rational,
) -> bool {
    let mu = moment_point(epsilon);
    let threshold = epsilon * nprime;
    let separated = enumerate_poset(ideal.n())
        .expect("valid ground set")
        .iter()
        .all(|e| {
            let h = hyperplane_of(&four_face(e), ts);
            let value = crate::cyclic::dot(&h.gamma, &mu);
            if ideal.contains(e) {
                value < threshold
            } else {
                value > threshold
            }
        });
    separated
        && matches!(
            visible_set(ts, &viewpoint(epsilon, nprime)),
            Ok(vis) if vis == squeezed_ball_facets(ideal)
        )
}

/// The first `ε = t_1 / 2^k`, `k >= 1`, passing S3(a) and S4.
pub fn choose_epsilon(
    ideal: &OrderIdeal,
    ts: &ParamVector<Rational>,
    nprime: &Rational,
) -> Result<(Rational, Point5<Rational>)> {
    let mut epsilon = ts.values()[1].clone();
    for _ in 0..EPSILON_HALVINGS {
        epsilon /= Rational::two();
        if epsilon_admissible(ideal, ts, nprime, &epsilon) {
            let v = viewpoint(&epsilon, nprime);
            return Ok((epsilon, v));
        }
    }
    Err(Error::EpsilonSearchExhausted(EPSILON_HALVINGS))
}

pub type Point4 = [Rational; 4];

#[derive(Debug, Clone, PartialEq)]
pub struct RealizedPolytope {
    /// Indexed by label `0..=n`.
    pub vertices: Vec<Point4>,
    pub facets: PureComplex,
}

/// Central projection of the moment-curve points from `v` onto the
/// hyperplane `x_5 = v_5 / 2`, with the constant coordinate dropped.
pub fn vertex_figure(
    ts: &ParamVector<Rational>,
    v: &Point5<Rational>,
    sphere: &PureComplex,
) -> RealizedPolytope {
    let level = &v[4] / Rational::two();
    let vertices = (0..ts.len())
        .map(|w| {
            let x = ts.point(w);
            let lambda = (&level - &v[4]) / (&x[4] - &v[4]);
            std::array::from_fn(|c| &v[c] + &lambda * (&x[c] - &v[c]))
        })
        .collect();
    RealizedPolytope {
        vertices,
        facets: sphere.clone(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FacetHyperplane {
    pub facet: [usize; 4],
    /// Outer normal: every other vertex has `normal · x < offset`.
    pub normal: Point4,
    pub offset: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityEntry {
    pub facet: FacetIndices,
    pub orientation: Orientation,
    pub visible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub hyperplanes: Vec<FacetHyperplane>,
    /// Every facet of `C` with its verdict; empty when certifying a bare polytope.
    pub visibility: Vec<VisibilityEntry>,
    pub params: Option<RealizationParams>,
}

fn det3(m: [[&BigInt; 3]; 3]) -> BigInt {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn dot_int(a: &[BigInt; 4], b: &[BigInt; 4]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Integer normal and offset of the hyperplane through four integer
/// points, by cofactor expansion, divided by the content of the normal.
pub fn hyperplane_through(p: [&[BigInt; 4]; 4]) -> ([BigInt; 4], BigInt) {
    let d: Vec<Vec<BigInt>> = (1..4)
        .map(|r| (0..4).map(|c| &p[r][c] - &p[0][c]).collect())
        .collect();
    let mut normal: [BigInt; 4] = std::array::from_fn(|k| {
        let cols: Vec<usize> = (0..4).filter(|&c| c != k).collect();
        let minor = det3(std::array::from_fn(|r| {
            std::array::from_fn(|c| &d[r][cols[c]])
        }));
        if k % 2 == 0 {
            minor
        } else {
            -minor
        }
    });
    let content = normal.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    if !content.is_zero() {
        normal = normal.map(|a| a / &content);
    }
    let offset = dot_int(&normal, p[0]);
    (normal, offset)
}

/// The points scaled by the least common denominator `L` of all their
/// coordinates, and `L`. Scaling preserves every side test.
pub fn clear_denominators(points: &[Point4]) -> (Vec<[BigInt; 4]>, BigInt) {
    let l = points
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled = points
        .iter()
        .map(|p| std::array::from_fn(|c| (&p[c] * &l).to_integer()))
        .collect();
    (scaled, l)
}

/// Proves every claimed facet is a facet of the convex hull by a strictly
/// supporting hyperplane.
pub fn certify_boundary(p: &RealizedPolytope) -> Result<Certificate> {
    if p.facets.dim() != 3 || !check_closed_pseudomanifold(&p.facets) {
        return Err(Error::InvalidCertificate {
            facet: Vec::new(),
            reason: "facets do not form a closed 3-pseudomanifold".into(),
        });
    }
    let covered = p.facets.vertex_set();
    if let Some(w) = (0..p.vertices.len()).find(|w| !covered.contains(w)) {
        return Err(Error::InvalidCertificate {
            facet: Vec::new(),
            reason: format!("vertex {w} lies on no facet"),
        });
    }
    if covered.iter().any(|&w| w >= p.vertices.len()) {
        return Err(Error::InvalidCertificate {
            facet: Vec::new(),
            reason: "facet uses an unknown vertex".into(),
        });
    }
    let (points, scale) = clear_denominators(&p.vertices);
    let mut hyperplanes = Vec::with_capacity(p.facets.facets().len());
    for f in p.facets.facets() {
        let labels: [usize; 4] = f.vertices().try_into().expect("tetrahedron");
        let (mut normal, mut offset) = hyperplane_through(labels.map(|w| &points[w]));
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::DegenerateFacet(labels.to_vec()));
        }
        let mut side = None;
        for (w, x) in points.iter().enumerate() {
            if labels.contains(&w) {
                continue;
            }
            let s = (dot_int(&normal, x) - &offset).signum();
            if s.is_zero() || side.as_ref().is_some_and(|t| *t != s) {
                return Err(Error::InvalidCertificate {
                    facet: labels.to_vec(),
                    reason: format!("vertex {w} is not strictly on the common side"),
                });
            }
            side = Some(s);
        }
        if side.is_some_and(|s| s.is_positive()) {
            normal = normal.map(|a| -a);
            offset = -offset;
        }
        hyperplanes.push(FacetHyperplane {
            facet: labels,
            normal: normal.map(Rational::from_integer),
            offset: Rational::new(offset, scale.clone()),
        });
    }
    Ok(Certificate {
        hyperplanes,
        visibility: Vec::new(),
        params: None,
    })
}

/// Places parameters, finds a viewpoint, builds the vertex figure and
/// certifies it, with the default `N' = 1`, `δ = 1/4`.
pub fn realize(ideal: &OrderIdeal) -> Result<(RealizedPolytope, Certificate)> {
    realize_with(ideal, &default_nprime(), &default_delta())
}

pub fn realize_with(
    ideal: &OrderIdeal,
    nprime: &Rational,
    delta: &Rational,
) -> Result<(RealizedPolytope, Certificate)> {
    let ts = place_parameters(ideal, nprime, delta).map_err(|e| e.at("placement"))?;
    let (epsilon, v) = choose_epsilon(ideal, &ts, nprime).map_err(|e| e.at("epsilon"))?;
    let visible = visible_set(&ts, &v).map_err(|e| e.at("visibility"))?;
    let ball = squeezed_ball_facets(ideal);
    if visible != ball {
        let extra: Vec<_> = visible.difference(&ball).collect();
        let missing: Vec<_> = ball.difference(&visible).collect();
        return Err(
            Error::VisibilityMismatch(format!("extra {extra:?}, missing {missing:?}"))
                .at("visibility"),
        );
    }
    let sphere = sphere_facets(ideal);
    let polytope = vertex_figure(&ts, &v, &sphere);
    let mut certificate = certify_boundary(&polytope).map_err(|e| e.at("certification"))?;
    certificate.visibility = gale_facets(ts.len())
        .into_iter()
        .map(|(facet, orientation)| VisibilityEntry {
            facet,
            orientation,
            visible: visible.contains(&facet),
        })
        .collect();
    certificate.params = Some(RealizationParams {
        nprime: nprime.clone(),
        delta: delta.clone(),
        epsilon,
        ts,
    });
    Ok((polytope, certificate))
}

/// Facets of a realized polytope as a complex, for comparison with `S(I)`.
pub fn certified_facets(certificate: &Certificate) -> Result<PureComplex> {
    PureComplex::new(
        3,
        certificate
            .hyperplanes
            .iter()
            .map(|h| Simplex::from(h.facet)),
    )
}
