//! Hamiltonian circuits in the dual graph of `S(I)`.
//!
//! Facets of `S(I)` are named by grid coordinates: `(i,j) = {i,i+1,j,j+1}`
//! in the ball, `(i+½,j) = {0,i+1,j,j+1}` and `(i,j+½) = {0,i,i+1,j+1}` on
//! the cone, and `(0,j) = {0,1,j,j+1}` for the zero row.
//!
//! The circuit starts at `(1,3)`, sweeps the ball together with the half
//! coordinates, runs down the top row `(i, n-½)` and returns through
//! `(0,n-1), ..., (0,2)`. Within the sweep the route passes the step
//! endpoints `(i_k+½, j_k)` and `(i_{k+1}+½, j_k+1)` in order; the moves
//! between them are found by a depth-first search over ridge-adjacent
//! facets, and every result is checked by [`verify_circuit`].

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::complex::{dual_graph, sphere_facets, DualGraph, PureComplex, Simplex};
use crate::error::{Error, Result};
use crate::poset::OrderIdeal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FacetCoord {
    /// `(i,j) = {i,i+1,j,j+1}`
    Ball(usize, usize),
    /// `(i+½,j) = {0,i+1,j,j+1}`
    HalfI(usize, usize),
    /// `(i,j+½) = {0,i,i+1,j+1}`
    HalfJ(usize, usize),
    /// `(0,j) = {0,1,j,j+1}`
    ZeroRow(usize),
}

impl FacetCoord {
    pub fn facet(&self) -> Simplex {
        match *self {
            FacetCoord::Ball(i, j) => Simplex::from([i, i + 1, j, j + 1]),
            FacetCoord::HalfI(i, j) => Simplex::from([0, i + 1, j, j + 1]),
            FacetCoord::HalfJ(i, j) => Simplex::from([0, i, i + 1, j + 1]),
            FacetCoord::ZeroRow(j) => Simplex::from([0, 1, j, j + 1]),
        }
    }

    /// The coordinate of a 4-set, if it has one of the four shapes. A set
    /// `{0,a,a+1,a+2}` fits two shapes; it is read as `(0,2)` for `a = 1`
    /// and as `(a-1+½, a+1)` otherwise.
    pub fn of(facet: &Simplex) -> Option<FacetCoord> {
        let v = facet.vertices();
        if v.len() != 4 {
            return None;
        }
        if v[0] != 0 {
            let (i, j) = (v[0], v[2]);
            return (v[1] == i + 1 && v[3] == j + 1 && j >= i + 2)
                .then_some(FacetCoord::Ball(i, j));
        }
        let (a, b, c) = (v[1], v[2], v[3]);
        if a == 1 && c == b + 1 && b >= 2 {
            Some(FacetCoord::ZeroRow(b))
        } else if c == b + 1 && a >= 2 {
            Some(FacetCoord::HalfI(a - 1, b))
        } else if b == a + 1 {
            Some(FacetCoord::HalfJ(a, c - 1))
        } else {
            None
        }
    }
}

impl fmt::Display for FacetCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FacetCoord::Ball(i, j) => write!(f, "BALL({i},{j})"),
            FacetCoord::HalfI(i, j) => write!(f, "HALF_I({i},{j})"),
            FacetCoord::HalfJ(i, j) => write!(f, "HALF_J({i},{j})"),
            FacetCoord::ZeroRow(j) => write!(f, "ZERO_ROW({j})"),
        }
    }
}

impl FromStr for FacetCoord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad facet coordinate {s:?}"));
        let (kind, rest) = s.trim().split_once('(').ok_or_else(bad)?;
        let args: Vec<usize> = rest
            .strip_suffix(')')
            .ok_or_else(bad)?
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        match (kind, args.as_slice()) {
            ("BALL", [i, j]) => Ok(FacetCoord::Ball(*i, *j)),
            ("HALF_I", [i, j]) => Ok(FacetCoord::HalfI(*i, *j)),
            ("HALF_J", [i, j]) => Ok(FacetCoord::HalfJ(*i, *j)),
            ("ZERO_ROW", [j]) => Ok(FacetCoord::ZeroRow(*j)),
            _ => Err(bad()),
        }
    }
}

/// Coordinates for every facet of `S(I)`.
pub fn facet_coordinates(
    sphere: &PureComplex,
    ideal: &OrderIdeal,
) -> Result<BTreeMap<Simplex, FacetCoord>> {
    let mut out = BTreeMap::new();
    for f in sphere.facets() {
        let c = FacetCoord::of(f)
            .ok_or_else(|| Error::Internal(format!("facet {f} of {ideal} has no coordinate")))?;
        if let FacetCoord::Ball(i, j) = c {
            if !ideal.contains(&crate::poset::PairElement::new(i, j)) {
                return Err(Error::Internal(format!("ball facet {f} outside the ideal")));
            }
        }
        out.insert(f.clone(), c);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub facets: Vec<FacetCoord>,
}

impl Circuit {
    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// One facet per line with its coordinate as a comment.
    pub fn to_text(&self) -> String {
        self.facets
            .iter()
            .map(|c| format!("{} # coord={c}\n", c.facet()))
            .collect()
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut facets = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (labels, comment) = line
                .split_once('#')
                .ok_or_else(|| Error::Parse(format!("missing coordinate: {line}")))?;
            let coord: FacetCoord = comment
                .trim()
                .strip_prefix("coord=")
                .ok_or_else(|| Error::Parse(format!("missing coord=: {line}")))?
                .parse()?;
            let vertices: Vec<usize> = labels
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Parse(format!("bad label in {line}")))
                })
                .collect::<Result<_>>()?;
            if Simplex::new(vertices) != coord.facet() {
                return Err(Error::Parse(format!(
                    "labels disagree with coordinate: {line}"
                )));
            }
            facets.push(coord);
        }
        Ok(Circuit { facets })
    }
}

/// Every facet exactly once, and cyclically consecutive facets share
/// exactly three vertices.
pub fn verify_circuit(c: &Circuit, sphere: &PureComplex) -> bool {
    let listed: Vec<Simplex> = c.facets.iter().map(FacetCoord::facet).collect();
    let distinct: std::collections::BTreeSet<&Simplex> = listed.iter().collect();
    if listed.len() != sphere.facets().len()
        || distinct.len() != listed.len()
        || !listed.iter().all(|f| sphere.facets().contains(f))
    {
        return false;
    }
    (0..listed.len()).all(|k| listed[k].common(&listed[(k + 1) % listed.len()]) == 3)
}

/// How much of the intended route structure a search level keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RouteLevel {
    /// Step endpoints in order, top-row descent, zero-row return.
    Waypoints,
    /// Top-row descent and zero-row return only.
    TopRow,
    /// Zero-row return only.
    ZeroRow,
}

const SEARCH_BUDGET: usize = 2_000_000;

pub fn build_circuit(ideal: &OrderIdeal) -> Result<Circuit> {
    build_circuit_with_level(ideal).map(|(c, _)| c)
}

/// The circuit and the most structured route level that succeeded.
pub fn build_circuit_with_level(ideal: &OrderIdeal) -> Result<(Circuit, RouteLevel)> {
    let sphere = sphere_facets(ideal);
    let coords = facet_coordinates(&sphere, ideal)?;
    let graph = dual_graph(&sphere);
    let mut last = None;
    for level in [
        RouteLevel::Waypoints,
        RouteLevel::TopRow,
        RouteLevel::ZeroRow,
    ] {
        match route(ideal, &graph, level) {
            Ok(order) => {
                let circuit = Circuit {
                    facets: order.iter().map(|&k| coords[&graph.nodes[k]]).collect(),
                };
                if !verify_circuit(&circuit, &sphere) {
                    return Err(Error::CircuitConstruction {
                        step: "verify",
                        detail: format!("{ideal}: search produced an invalid circuit"),
                    });
                }
                return Ok((circuit, level));
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one level tried"))
}

fn node(graph: &DualGraph, c: FacetCoord, step: &'static str) -> Result<usize> {
    graph
        .index_of(&c.facet())
        .ok_or_else(|| Error::CircuitConstruction {
            step,
            detail: format!("{c} is not a facet"),
        })
}

fn route(ideal: &OrderIdeal, graph: &DualGraph, level: RouteLevel) -> Result<Vec<usize>> {
    let n = ideal.n();
    let gens = ideal.generators();
    let start = node(graph, FacetCoord::Ball(1, 3), "over the top")?;
    let mut tail = Vec::new();
    if level <= RouteLevel::TopRow {
        let i_r = gens.last().expect("nonempty").i;
        for i in (1..=i_r).rev() {
            tail.push(node(graph, FacetCoord::HalfJ(i, n - 1), "down")?);
        }
    }
    for j in (2..n).rev() {
        tail.push(node(graph, FacetCoord::ZeroRow(j), "finish")?);
    }
    let mut waypoints = Vec::new();
    if level == RouteLevel::Waypoints {
        for (k, g) in gens.iter().enumerate() {
            waypoints.push(FacetCoord::HalfI(g.i, g.j));
            if let Some(next) = gens.get(k + 1) {
                waypoints.push(FacetCoord::HalfI(next.i, g.j + 1));
            }
        }
        // With Δj_k = 1 the end of Down is already the next generator's box.
        waypoints.dedup();
    }
    let waypoints: Vec<usize> = waypoints
        .into_iter()
        .map(|c| node(graph, c, "across"))
        .collect::<Result<_>>()?;
    if tail.contains(&start) || waypoints.iter().any(|w| tail.contains(w)) {
        return Err(Error::CircuitConstruction {
            step: "over the top",
            detail: "route endpoints overlap the return path".into(),
        });
    }
    for w in tail.windows(2) {
        if !graph.is_adjacent(w[0], w[1]) {
            return Err(Error::CircuitConstruction {
                step: "finish",
                detail: "return path is not ridge-connected".into(),
            });
        }
    }
    if !graph.is_adjacent(*tail.last().expect("n >= 4"), start) {
        return Err(Error::CircuitConstruction {
            step: "finish",
            detail: "return path does not close at (1,3)".into(),
        });
    }
    let mut search = Search::new(graph, &tail, tail[0], waypoints);
    let body = search
        .run(start)
        .ok_or_else(|| Error::CircuitConstruction {
            step: match level {
                RouteLevel::Waypoints => "across",
                RouteLevel::TopRow => "down",
                RouteLevel::ZeroRow => "finish",
            },
            detail: format!("{ideal}: no route at level {level:?}"),
        })?;
    Ok(body.into_iter().chain(tail).collect())
}

/// Depth-first search for a Hamiltonian path through the non-tail facets
/// from the start to a neighbour of `end_anchor`, visiting waypoints in
/// order.
struct Search<'a> {
    graph: &'a DualGraph,
    visited: Vec<bool>,
    remaining: usize,
    end_anchor: usize,
    waypoints: Vec<usize>,
    waypoint_rank: Vec<Option<usize>>,
    next_waypoint: usize,
    path: Vec<usize>,
    budget: usize,
}

impl<'a> Search<'a> {
    fn new(graph: &'a DualGraph, tail: &[usize], end_anchor: usize, waypoints: Vec<usize>) -> Self {
        let mut visited = vec![false; graph.nodes.len()];
        for &t in tail {
            visited[t] = true;
        }
        let mut waypoint_rank = vec![None; graph.nodes.len()];
        for (r, &w) in waypoints.iter().enumerate() {
            waypoint_rank[w] = Some(r);
        }
        Search {
            graph,
            remaining: visited.iter().filter(|v| !**v).count(),
            visited,
            end_anchor,
            waypoints,
            waypoint_rank,
            next_waypoint: 0,
            path: Vec::new(),
            budget: SEARCH_BUDGET,
        }
    }

    fn run(&mut self, start: usize) -> Option<Vec<usize>> {
        self.enter(start);
        if self.extend() {
            Some(std::mem::take(&mut self.path))
        } else {
            None
        }
    }

    fn enter(&mut self, v: usize) {
        self.visited[v] = true;
        self.remaining -= 1;
        self.path.push(v);
        if self.waypoint_rank[v].is_some() {
            self.next_waypoint += 1;
        }
    }

    fn leave(&mut self) {
        let v = self.path.pop().expect("nonempty path");
        self.visited[v] = false;
        self.remaining += 1;
        if self.waypoint_rank[v].is_some() {
            self.next_waypoint -= 1;
        }
    }

    fn allowed(&self, v: usize) -> bool {
        !self.visited[v] && self.waypoint_rank[v].is_none_or(|r| r == self.next_waypoint)
    }

    fn free_degree(&self, v: usize) -> usize {
        self.graph.adjacency[v]
            .iter()
            .filter(|&&u| !self.visited[u])
            .count()
    }

    fn extend(&mut self) -> bool {
        let here = *self.path.last().expect("nonempty path");
        if self.remaining == 0 {
            return self.next_waypoint == self.waypoints.len()
                && self.graph.is_adjacent(here, self.end_anchor);
        }
        if self.budget == 0 || !self.viable(here) {
            return false;
        }
        self.budget -= 1;
        let mut moves: Vec<usize> = self.graph.adjacency[here]
            .iter()
            .copied()
            .filter(|&u| self.allowed(u))
            .collect();
        moves.sort_by_key(|&u| (self.free_degree(u), u));
        for u in moves {
            self.enter(u);
            if self.extend() {
                return true;
            }
            self.leave();
        }
        false
    }

    /// Every unvisited facet can still get two path neighbours (one of
    /// them possibly the current end or the end anchor), and the unvisited
    /// facets stay connected to the current end.
    fn viable(&self, here: usize) -> bool {
        let g = self.graph;
        for v in 0..g.nodes.len() {
            if self.visited[v] {
                continue;
            }
            let options = self.free_degree(v)
                + usize::from(g.is_adjacent(v, here))
                + usize::from(g.is_adjacent(v, self.end_anchor));
            if options < 2 {
                return false;
            }
        }
        let mut seen = vec![false; g.nodes.len()];
        let mut queue = VecDeque::from([here]);
        seen[here] = true;
        let mut reached = 0;
        while let Some(v) = queue.pop_front() {
            for &u in &g.adjacency[v] {
                if !seen[u] && !self.visited[u] {
                    seen[u] = true;
                    reached += 1;
                    queue.push_back(u);
                }
            }
        }
        reached == self.remaining
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{enumerate_ideals, ideal_from_generators, PairElement};

    fn ideal(n: usize, gens: &[(usize, usize)]) -> OrderIdeal {
        let g: Vec<PairElement> = gens.iter().map(|&(i, j)| PairElement::new(i, j)).collect();
        ideal_from_generators(&g, n).unwrap()
    }

    #[test]
    fn coordinates() {
        let i = ideal(4, &[(1, 3)]);
        let coords = facet_coordinates(&sphere_facets(&i), &i).unwrap();
        assert_eq!(coords[&Simplex::from([1, 2, 3, 4])], FacetCoord::Ball(1, 3));
        assert_eq!(coords[&Simplex::from([0, 1, 3, 4])], FacetCoord::ZeroRow(3));
        let i = ideal(6, &[(2, 5)]);
        let coords = facet_coordinates(&sphere_facets(&i), &i).unwrap();
        assert_eq!(coords.len(), 13);
        let distinct: std::collections::BTreeSet<_> = coords.values().collect();
        assert_eq!(distinct.len(), 13);
        for (f, c) in &coords {
            assert_eq!(&c.facet(), f);
            assert_eq!(c.to_string().parse::<FacetCoord>().unwrap(), *c);
        }
    }

    #[test]
    fn simplex_circuit() {
        let i = ideal(4, &[(1, 3)]);
        let c = build_circuit(&i).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.facets[0], FacetCoord::Ball(1, 3));
        assert!(verify_circuit(&c, &sphere_facets(&i)));
    }

    #[test]
    fn verifier_rejects_broken_circuits() {
        let i = ideal(6, &[(2, 5)]);
        let s = sphere_facets(&i);
        let c = build_circuit(&i).unwrap();
        assert_eq!(c.len(), 13);
        assert!(verify_circuit(&c, &s));
        let mut missing = c.clone();
        missing.facets.pop();
        assert!(!verify_circuit(&missing, &s));
        let mut twice = c.clone();
        twice.facets[1] = twice.facets[0];
        assert!(!verify_circuit(&twice, &s));
        // Some swap of two entries breaks adjacency.
        let broken = (0..c.len())
            .flat_map(|a| (a + 1..c.len()).map(move |b| (a, b)))
            .any(|(a, b)| {
                let mut sw = c.clone();
                sw.facets.swap(a, b);
                !verify_circuit(&sw, &s)
            });
        assert!(broken);
    }

    #[test]
    fn text_round_trip() {
        let i = ideal(7, &[(3, 5), (1, 6)]);
        let c = build_circuit(&i).unwrap();
        let text = c.to_text();
        assert!(text.starts_with("1 2 3 4 # coord=BALL(1,3)\n"));
        assert_eq!(Circuit::parse_text(&text).unwrap(), c);
        assert!(Circuit::parse_text("1 2 3 5 # coord=BALL(1,3)\n").is_err());
    }

    #[test]
    fn every_small_ideal_has_a_circuit() {
        for n in 4..=10 {
            for i in enumerate_ideals(n).unwrap() {
                let s = sphere_facets(&i);
                let (c, level) =
                    build_circuit_with_level(&i).unwrap_or_else(|e| panic!("{i}: {e}"));
                assert_eq!(level, RouteLevel::Waypoints, "{i}");
                assert!(verify_circuit(&c, &s));
                assert_eq!(c.facets[0], FacetCoord::Ball(1, 3));
                let zero: Vec<usize> = c
                    .facets
                    .iter()
                    .filter_map(|f| match f {
                        FacetCoord::ZeroRow(j) => Some(*j),
                        _ => None,
                    })
                    .collect();
                assert_eq!(zero, (2..n).rev().collect::<Vec<_>>());
                let first_zero = c
                    .facets
                    .iter()
                    .position(|f| matches!(f, FacetCoord::ZeroRow(_)))
                    .unwrap();
                assert_eq!(first_zero + n - 2, c.len());
            }
        }
    }
}
