//! Text and JSON files for realized polytopes, and an independent checker.
//!
//! The checker does not reuse the construction: it recomputes the vertex
//! coordinates from the stored parameters, re-evaluates every supporting
//! hyperplane, checks the facets close up into a pseudomanifold, recovers
//! the ideal from the facets avoiding vertex 0 and re-checks the product
//! inequalities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::sphere_facets;
use crate::error::{Error, Result};
use crate::poset::{ideal_from_generators, OrderIdeal, PairElement};
use crate::realization::{Certificate, RealizedPolytope};
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeFile {
    pub vertices: Vec<[Rational; 4]>,
    pub facets: Vec<[usize; 4]>,
    pub hyperplanes: Vec<([usize; 4], [Rational; 4], Rational)>,
    pub nprime: Rational,
    pub delta: Rational,
    pub epsilon: Rational,
    pub ts: Vec<Rational>,
}

/// What the checker established about a valid file.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub vertices: usize,
    pub facets: usize,
    pub ideal: OrderIdeal,
}

fn reject(reason: impl Into<String>) -> Error {
    Error::InvalidCertificate {
        facet: Vec::new(),
        reason: reason.into(),
    }
}

fn reject_at(facet: &[usize; 4], reason: impl Into<String>) -> Error {
    Error::InvalidCertificate {
        facet: facet.to_vec(),
        reason: reason.into(),
    }
}

/// Parses a rational in canonical `p/q` (or integer) form.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let value: Rational = token
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {token:?}")))?;
    if value.to_string() != token {
        return Err(Error::Parse(format!("non-canonical rational {token:?}")));
    }
    Ok(value)
}

fn parse_label(token: &str) -> Result<usize> {
    let v: usize = token
        .parse()
        .map_err(|_| Error::Parse(format!("bad label {token:?}")))?;
    if v.to_string() != token {
        return Err(Error::Parse(format!("non-canonical label {token:?}")));
    }
    Ok(v)
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

impl PolytopeFile {
    pub fn from_realization(p: &RealizedPolytope, c: &Certificate) -> Result<Self> {
        let params = c
            .params
            .as_ref()
            .ok_or_else(|| Error::Internal("certificate without parameters".into()))?;
        Ok(PolytopeFile {
            vertices: p.vertices.clone(),
            facets: p
                .facets
                .facets()
                .iter()
                .map(|f| f.vertices().try_into().expect("tetrahedron"))
                .collect(),
            hyperplanes: c
                .hyperplanes
                .iter()
                .map(|h| (h.facet, h.normal.clone(), h.offset.clone()))
                .collect(),
            nprime: params.nprime.clone(),
            delta: params.delta.clone(),
            epsilon: params.epsilon.clone(),
            ts: params.ts.values().to_vec(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "polytope dim=4 vertices={} facets={}\n",
            self.vertices.len(),
            self.facets.len()
        );
        for (w, x) in self.vertices.iter().enumerate() {
            writeln!(out, "v {w} {}", join(x, " ")).unwrap();
        }
        for f in &self.facets {
            writeln!(out, "f {}", join(f, " ")).unwrap();
        }
        for (f, a, b) in &self.hyperplanes {
            writeln!(out, "H {} : {} {b}", join(f, " "), join(a, " ")).unwrap();
        }
        writeln!(
            out,
            "params N'={} delta={} eps={} t={}",
            self.nprime,
            self.delta,
            self.epsilon,
            join(&self.ts, ",")
        )
        .unwrap();
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::Parse("empty file".into()))?
            .split_whitespace()
            .collect();
        let count = |tok: Option<&&str>, key: &str| -> Result<usize> {
            tok.and_then(|t| t.strip_prefix(key))
                .ok_or_else(|| Error::Parse(format!("header lacks {key}")))
                .and_then(parse_label)
        };
        if header.len() != 4 || header[0] != "polytope" || header[1] != "dim=4" {
            return Err(Error::Parse("bad header".into()));
        }
        let nv = count(header.get(2), "vertices=")?;
        let nf = count(header.get(3), "facets=")?;
        let mut file = PolytopeFile {
            vertices: Vec::new(),
            facets: Vec::new(),
            hyperplanes: Vec::new(),
            nprime: Rational::zero(),
            delta: Rational::zero(),
            epsilon: Rational::zero(),
            ts: Vec::new(),
        };
        let mut saw_params = false;
        for line in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens[0] {
                "v" if tokens.len() == 6 => {
                    if parse_label(tokens[1])? != file.vertices.len() {
                        return Err(Error::Parse(format!("vertex label out of order: {line}")));
                    }
                    let coords: Vec<Rational> = tokens[2..]
                        .iter()
                        .map(|t| parse_rational(t))
                        .collect::<Result<_>>()?;
                    file.vertices
                        .push(coords.try_into().expect("four coordinates"));
                }
                "f" if tokens.len() == 5 => {
                    let labels: Vec<usize> = tokens[1..]
                        .iter()
                        .map(|t| parse_label(t))
                        .collect::<Result<_>>()?;
                    file.facets.push(labels.try_into().expect("four labels"));
                }
                "H" if tokens.len() == 11 && tokens[5] == ":" => {
                    let labels: Vec<usize> = tokens[1..5]
                        .iter()
                        .map(|t| parse_label(t))
                        .collect::<Result<_>>()?;
                    let nums: Vec<Rational> = tokens[6..]
                        .iter()
                        .map(|t| parse_rational(t))
                        .collect::<Result<_>>()?;
                    file.hyperplanes.push((
                        labels.try_into().expect("four labels"),
                        std::array::from_fn(|c| nums[c].clone()),
                        nums[4].clone(),
                    ));
                }
                "params" if tokens.len() == 5 && !saw_params => {
                    let field = |tok: &str, key: &str| -> Result<String> {
                        tok.strip_prefix(key)
                            .map(str::to_owned)
                            .ok_or_else(|| Error::Parse(format!("params lacks {key}")))
                    };
                    file.nprime = parse_rational(&field(tokens[1], "N'=")?)?;
                    file.delta = parse_rational(&field(tokens[2], "delta=")?)?;
                    file.epsilon = parse_rational(&field(tokens[3], "eps=")?)?;
                    file.ts = field(tokens[4], "t=")?
                        .split(',')
                        .map(parse_rational)
                        .collect::<Result<_>>()?;
                    saw_params = true;
                }
                _ => return Err(Error::Parse(format!("unrecognized line: {line}"))),
            }
        }
        if !saw_params {
            return Err(Error::Parse("missing params line".into()));
        }
        if file.vertices.len() != nv || file.facets.len() != nf {
            return Err(Error::Parse("counts disagree with header".into()));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let strs = |xs: &[Rational]| xs.iter().map(ToString::to_string).collect::<Vec<_>>();
        let mirror = JsonPolytope {
            dim: 4,
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(label, x)| JsonVertex {
                    label,
                    coords: strs(x),
                })
                .collect(),
            facets: self.facets.clone(),
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|(f, a, b)| JsonHyperplane {
                    facet: *f,
                    normal: strs(a),
                    offset: b.to_string(),
                })
                .collect(),
            params: JsonParams {
                nprime: self.nprime.to_string(),
                delta: self.delta.to_string(),
                eps: self.epsilon.to_string(),
                t: strs(&self.ts),
            },
        };
        serde_json::to_string_pretty(&mirror).expect("serializable") + "\n"
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let m: JsonPolytope =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if m.dim != 4 {
            return Err(Error::Parse("dim must be 4".into()));
        }
        let rats = |xs: &[String]| {
            xs.iter()
                .map(|t| parse_rational(t))
                .collect::<Result<Vec<_>>>()
        };
        let four = |xs: &[String]| -> Result<[Rational; 4]> {
            rats(xs)?
                .try_into()
                .map_err(|_| Error::Parse("expected four rationals".into()))
        };
        let mut vertices = Vec::new();
        for (k, v) in m.vertices.iter().enumerate() {
            if v.label != k {
                return Err(Error::Parse("vertex labels out of order".into()));
            }
            vertices.push(four(&v.coords)?);
        }
        let hyperplanes = m
            .hyperplanes
            .iter()
            .map(|h| Ok((h.facet, four(&h.normal)?, parse_rational(&h.offset)?)))
            .collect::<Result<_>>()?;
        Ok(PolytopeFile {
            vertices,
            facets: m.facets,
            hyperplanes,
            nprime: parse_rational(&m.params.nprime)?,
            delta: parse_rational(&m.params.delta)?,
            epsilon: parse_rational(&m.params.eps)?,
            ts: rats(&m.params.t)?,
        })
    }

    /// Parses either format, choosing JSON when the text starts with `{`.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonPolytope {
    dim: usize,
    vertices: Vec<JsonVertex>,
    facets: Vec<[usize; 4]>,
    hyperplanes: Vec<JsonHyperplane>,
    params: JsonParams,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonVertex {
    label: usize,
    coords: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonHyperplane {
    facet: [usize; 4],
    normal: Vec<String>,
    offset: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonParams {
    nprime: String,
    delta: String,
    eps: String,
    t: Vec<String>,
}

fn curve_point(t: &Rational) -> [Rational; 5] {
    let mut out: [Rational; 5] = std::array::from_fn(|_| t.clone());
    for k in 1..5 {
        out[k] = &out[k - 1] * t;
    }
    out
}

/// Vertex coordinates implied by the stored parameters.
fn implied_vertices(ts: &[Rational], epsilon: &Rational, nprime: &Rational) -> Vec<[Rational; 4]> {
    let mut v = curve_point(epsilon);
    v[4] -= epsilon * nprime;
    let half = &v[4] / Rational::from_integer(2.into());
    ts.iter()
        .map(|t| {
            let x = curve_point(t);
            let lambda = (&half - &v[4]) / (&x[4] - &v[4]);
            std::array::from_fn(|c| &v[c] + (&x[c] - &v[c]) * &lambda)
        })
        .collect()
}

fn product(ts: &[Rational], idx: [usize; 4]) -> Rational {
    idx.iter().fold(Rational::one(), |acc, &k| acc * &ts[k])
}

fn quad(i: usize, j: usize) -> [usize; 4] {
    [i, i + 1, j, j + 1]
}

fn check_parameters(file: &PolytopeFile) -> Result<usize> {
    let ts = &file.ts;
    if ts.len() < 5 || !ts[0].is_zero() {
        return Err(reject("parameters must start with t_0 = 0 and have n >= 4"));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(reject("parameters not strictly increasing"));
    }
    if !file.delta.is_positive() || file.delta >= file.nprime {
        return Err(reject("need 0 < delta < N'"));
    }
    if !file.epsilon.is_positive() || file.epsilon >= ts[1] {
        return Err(reject("need 0 < eps < t_1"));
    }
    if file.vertices.len() != ts.len() {
        return Err(reject("one vertex per parameter expected"));
    }
    Ok(ts.len() - 1)
}

fn check_supports(file: &PolytopeFile) -> Result<()> {
    let facet_set: BTreeSet<[usize; 4]> = file.facets.iter().copied().collect();
    if facet_set.len() != file.facets.len() {
        return Err(reject("repeated facet"));
    }
    for f in &file.facets {
        if f.windows(2).any(|w| w[0] >= w[1]) || f[3] >= file.vertices.len() {
            return Err(reject_at(f, "labels must be increasing vertex labels"));
        }
    }
    let planes: BTreeSet<[usize; 4]> = file.hyperplanes.iter().map(|h| h.0).collect();
    if planes != facet_set || file.hyperplanes.len() != file.facets.len() {
        return Err(reject("hyperplanes do not match the facet list one to one"));
    }
    // Each vertex scaled by its own positive denominator; signs are unchanged.
    let scaled: Vec<(Vec<BigInt>, BigInt)> = file
        .vertices
        .iter()
        .map(|x| {
            let d = x.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            (x.iter().map(|c| (c * &d).to_integer()).collect(), d)
        })
        .collect();
    for (f, normal, offset) in &file.hyperplanes {
        if normal.iter().all(Zero::is_zero) {
            return Err(reject_at(f, "zero normal"));
        }
        let nd = normal
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let a: Vec<BigInt> = normal.iter().map(|c| (c * &nd).to_integer()).collect();
        let b = offset * Rational::from_integer(nd);
        for (w, (x, d)) in scaled.iter().enumerate() {
            let ax: BigInt = a.iter().zip(x).map(|(p, q)| p * q).sum();
            let value = ax * b.denom() - b.numer() * d;
            if f.contains(&w) && !value.is_zero() {
                return Err(reject_at(f, format!("vertex {w} is off its hyperplane")));
            }
            if !f.contains(&w) && !value.is_negative() {
                return Err(reject_at(f, format!("vertex {w} is not strictly inside")));
            }
        }
    }
    Ok(())
}

fn check_closed(file: &PolytopeFile) -> Result<()> {
    let mut ridges: BTreeMap<[usize; 3], Vec<usize>> = BTreeMap::new();
    for (k, f) in file.facets.iter().enumerate() {
        for skip in 0..4 {
            let mut r = [0; 3];
            let mut m = 0;
            for (c, &w) in f.iter().enumerate() {
                if c != skip {
                    r[m] = w;
                    m += 1;
                }
            }
            ridges.entry(r).or_default().push(k);
        }
    }
    if let Some((r, _)) = ridges.iter().find(|(_, owners)| owners.len() != 2) {
        return Err(reject(format!("ridge {r:?} is not in exactly two facets")));
    }
    let mut seen = vec![false; file.facets.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(k) = stack.pop() {
        for owners in ridges.values().filter(|o| o.contains(&k)) {
            for &m in owners {
                if !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(reject("facets are not connected"));
    }
    let covered: BTreeSet<usize> = file.facets.iter().flatten().copied().collect();
    if covered.len() != file.vertices.len() {
        return Err(reject("some vertex lies on no facet"));
    }
    Ok(())
}

/// The ideal read off the facets avoiding vertex 0, with the product
/// inequalities re-checked against the stored parameters.
fn check_ideal(file: &PolytopeFile, n: usize) -> Result<OrderIdeal> {
    let mut elements = BTreeSet::new();
    for f in file.facets.iter().filter(|f| f[0] != 0) {
        let (i, j) = (f[0], f[2]);
        if *f != quad(i, j) || j < i + 2 || j + 1 > n {
            return Err(reject_at(
                f,
                "facet avoiding 0 is not of the form {i,i+1,j,j+1}",
            ));
        }
        elements.insert((i, j));
    }
    let maximal: Vec<PairElement> = elements
        .iter()
        .filter(|&&(i, j)| {
            !elements
                .iter()
                .any(|&(a, b)| (a, b) != (i, j) && i <= a && j <= b)
        })
        .map(|&(i, j)| PairElement::new(i, j))
        .collect();
    let ideal = ideal_from_generators(&maximal, n)
        .map_err(|e| reject(format!("recovered generators: {e}")))?;
    let recovered: BTreeSet<(usize, usize)> = ideal.elements().iter().map(|e| (e.i, e.j)).collect();
    if recovered != elements {
        return Err(reject("facets avoiding 0 are not down-closed"));
    }
    let claimed: BTreeSet<Vec<usize>> = file.facets.iter().map(|f| f.to_vec()).collect();
    let sphere: BTreeSet<Vec<usize>> = sphere_facets(&ideal)
        .facets()
        .iter()
        .map(|s| s.vertices().to_vec())
        .collect();
    if claimed != sphere {
        return Err(reject(
            "facets differ from the squeezed sphere of the recovered ideal",
        ));
    }

    let ts = &file.ts;
    let low = &file.nprime - &file.delta;
    let high = &file.nprime + &file.delta;
    let all: Vec<(usize, usize)> = (1..n)
        .flat_map(|i| (i + 2..n).map(move |j| (i, j)))
        .collect();
    for &(i, j) in &all {
        let p = product(ts, quad(i, j));
        if p == file.nprime || elements.contains(&(i, j)) != (p < file.nprime) {
            return Err(reject(format!(
                "product at ({i},{j}) on the wrong side of N'"
            )));
        }
    }
    let s2 = product(ts, [1, n - 2, n - 1, n]);
    if s2 >= file.nprime {
        return Err(reject("t_1 t_(n-2) t_(n-1) t_n is not below N'"));
    }
    for &(i, j) in &maximal.iter().map(|g| (g.i, g.j)).collect::<Vec<_>>() {
        let p = product(ts, quad(i, j));
        let raised_t1 = &ts[1] * &low / &p;
        let shortfall_forced = raised_t1 >= ts[2]
            || product(ts, [2, n - 2, n - 1, n]) / &ts[2] * &raised_t1 >= file.nprime;
        if p != low && !(i == 1 && n >= 5 && p < low && shortfall_forced) {
            return Err(reject(format!(
                "generator ({i},{j}) does not have product N'-delta"
            )));
        }
    }
    let outside: Vec<&(usize, usize)> = all.iter().filter(|e| !elements.contains(e)).collect();
    for &&(i, j) in &outside {
        let minimal = !outside
            .iter()
            .any(|&&(a, b)| (a, b) != (i, j) && a <= i && b <= j);
        if minimal && product(ts, quad(i, j)) != high {
            return Err(reject(format!(
                "minimum ({i},{j}) does not have product N'+delta"
            )));
        }
    }
    Ok(ideal)
}

pub fn verify_polytope(file: &PolytopeFile) -> Result<VerifyReport> {
    let n = check_parameters(file)?;
    if implied_vertices(&file.ts, &file.epsilon, &file.nprime) != file.vertices {
        return Err(reject(
            "vertices differ from those implied by the parameters",
        ));
    }
    check_supports(file)?;
    check_closed(file)?;
    let ideal = check_ideal(file, n)?;
    Ok(VerifyReport {
        vertices: file.vertices.len(),
        facets: file.facets.len(),
        ideal,
    })
}

/// Parses (text or JSON) and verifies.
pub fn verify_polytope_text(text: &str) -> Result<VerifyReport> {
    verify_polytope(&PolytopeFile::parse_any(text)?)
}
