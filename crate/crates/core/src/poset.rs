//! The poset F3(n) of "double pairs" `{i, i+1, j, j+1}`, its order
//! ideals, and their enumeration by lattice paths.
//!
//! An element is stored as the pair `(i, j)` of block starts. Because the two
//! blocks are disjoint, componentwise comparison of the pairs coincides with
//! componentwise comparison of the sorted 4-sets.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The element `{i, i+1, j, j+1}` of F3(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PairElement {
    pub i: usize,
    pub j: usize,
}

impl PairElement {
    pub const fn new(i: usize, j: usize) -> Self {
        PairElement { i, j }
    }

    /// Number of integers strictly between `i + 1` and `j`.
    pub fn gap(&self) -> usize {
        self.j - self.i - 2
    }

    pub fn is_leq(&self, other: &PairElement) -> bool {
        self.i <= other.i && self.j <= other.j
    }

    pub fn vertices(&self) -> [usize; 4] {
        [self.i, self.i + 1, self.j, self.j + 1]
    }

    /// Whether this is a well-formed element of F3(n).
    pub fn in_poset(&self, n: usize) -> bool {
        self.i >= 1 && self.j >= self.i + 2 && self.j < n
    }
}

impl fmt::Display for PairElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

pub fn is_leq(e: &PairElement, f: &PairElement) -> bool {
    e.is_leq(f)
}

pub fn gap(e: &PairElement) -> usize {
    e.gap()
}

/// All elements of F3(n), in lexicographic order.
pub fn enumerate_poset(n: usize) -> Result<BTreeSet<PairElement>> {
    if n < 4 {
        return Err(Error::InvalidGroundSet(n));
    }
    Ok((1..n)
        .flat_map(|i| (i + 2..n).map(move |j| PairElement::new(i, j)))
        .collect())
}

/// An order ideal of F3(n) that uses every label `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderIdeal {
    n: usize,
    generators: Vec<PairElement>,
    elements: BTreeSet<PairElement>,
}

impl OrderIdeal {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Maximal elements, in increasing gap order.
    pub fn generators(&self) -> &[PairElement] {
        &self.generators
    }

    pub fn elements(&self) -> &BTreeSet<PairElement> {
        &self.elements
    }

    pub fn contains(&self, e: &PairElement) -> bool {
        self.elements.contains(e)
    }

    /// Canonical text form, e.g. `n=6; G=(2,4),(1,5)`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for OrderIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; G=", self.n)?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl FromStr for OrderIdeal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("malformed ideal spec {s:?}"));
        let (n_part, g_part) = compact.split_once(';').ok_or_else(bad)?;
        let n: usize = n_part
            .strip_prefix("n=")
            .ok_or_else(bad)?
            .parse()
            .map_err(|_| bad())?;
        let body = g_part.strip_prefix("G=").ok_or_else(bad)?;
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut gens = Vec::new();
        for pair in body.split("),(") {
            let (a, b) = pair.split_once(',').ok_or_else(bad)?;
            let i = a.parse().map_err(|_| bad())?;
            let j = b.parse().map_err(|_| bad())?;
            gens.push(PairElement::new(i, j));
        }
        ideal_from_generators(&gens, n)
    }
}

/// Builds the ideal generated by `generators` in F3(n).
///
/// The generators must form an antichain and at least one of them must
/// use the label `n` (that is, have `j = n - 1`).
pub fn ideal_from_generators(generators: &[PairElement], n: usize) -> Result<OrderIdeal> {
    let poset = enumerate_poset(n)?;
    if generators.is_empty() {
        return Err(Error::EmptyIdeal);
    }
    for g in generators {
        if !poset.contains(g) {
            return Err(Error::NotInPoset(*g, n));
        }
    }
    for (a, g) in generators.iter().enumerate() {
        for h in &generators[a + 1..] {
            if g.is_leq(h) || h.is_leq(g) {
                return Err(Error::NotAnAntichain(*g, *h));
            }
        }
    }
    if !generators.iter().any(|g| g.j + 1 == n) {
        return Err(Error::GroundMismatch(n));
    }
    let mut gens = generators.to_vec();
    gens.sort_by_key(|g| g.gap());
    let elements = poset
        .into_iter()
        .filter(|e| gens.iter().any(|g| e.is_leq(g)))
        .collect();
    Ok(OrderIdeal {
        n,
        generators: gens,
        elements,
    })
}

/// The minimal elements of `F3(n) \ I`, by gap. Brute force over the poset.
pub fn complement_minima(ideal: &OrderIdeal) -> Vec<PairElement> {
    let poset = enumerate_poset(ideal.n).expect("ideal has a valid ground set");
    let outside: Vec<PairElement> = poset.into_iter().filter(|e| !ideal.contains(e)).collect();
    let mut minima: Vec<PairElement> = outside
        .iter()
        .filter(|e| !outside.iter().any(|f| f != *e && f.is_leq(e)))
        .copied()
        .collect();
    minima.sort_by_key(|e| e.gap());
    minima
}

/// Closed form for the complement minima lying between consecutive
/// generators: `(i_{k+1} + 1, j_k + 1)` for `g_k ⊏ g_{k+1}`.
pub fn interleaved_minima(ideal: &OrderIdeal) -> Vec<PairElement> {
    ideal
        .generators
        .windows(2)
        .map(|w| PairElement::new(w[1].i + 1, w[0].j + 1))
        .collect()
}

/// The one complement minimum of smaller gap than every generator, if any.
///
/// With `g_1 = (i, j)` the generator of least gap, the element
/// `(i + 1, i + 3)` is minimal outside the ideal exactly when `g_1` has
/// positive gap and `i + 4 <= n`.
pub fn leading_minimum(ideal: &OrderIdeal) -> Option<PairElement> {
    let g1 = ideal.generators[0];
    (g1.gap() >= 1 && g1.i + 4 <= ideal.n).then(|| PairElement::new(g1.i + 1, g1.i + 3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tag {
    Gen,
    Min,
}

/// The generators and complement minima of an ideal, merged by gap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedSequence {
    pub entries: Vec<(PairElement, Tag)>,
}

impl MergedSequence {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = &PairElement> {
        self.entries.iter().map(|(e, _)| e)
    }

    /// Tags alternate, the last entry is a generator, and only a leading
    /// minimum may precede the first generator.
    pub fn is_well_formed(&self) -> bool {
        let strictly_increasing = self.entries.windows(2).all(|w| w[0].0.gap() < w[1].0.gap());
        let alternating = self.entries.windows(2).all(|w| w[0].1 != w[1].1);
        strictly_increasing && alternating && matches!(self.entries.last(), Some((_, Tag::Gen)))
    }
}

pub fn merged_sequence(ideal: &OrderIdeal) -> MergedSequence {
    let mut entries: Vec<(PairElement, Tag)> = ideal
        .generators
        .iter()
        .map(|g| (*g, Tag::Gen))
        .chain(complement_minima(ideal).into_iter().map(|h| (h, Tag::Min)))
        .collect();
    entries.sort_by_key(|(e, _)| e.gap());
    MergedSequence { entries }
}

pub fn count_ideals(n: usize) -> Result<u64> {
    if n < 4 {
        return Err(Error::InvalidGroundSet(n));
    }
    Ok(1u64 << (n - 4))
}

/// Ideal traced out by a lattice path from `(1, n-1)`; bit `s` of `steps`
/// set means step `s` goes in the positive `i` direction, clear means
/// negative `j`. The path ends on the gap-0 diagonal after `n - 4` steps,
/// and the ideal is the down-closure of its points.
pub fn ideal_from_path(n: usize, steps: u64) -> Result<OrderIdeal> {
    if n < 4 {
        return Err(Error::InvalidGroundSet(n));
    }
    let mut points = vec![PairElement::new(1, n - 1)];
    let mut at = points[0];
    for s in 0..n - 4 {
        at = if steps >> s & 1 == 1 {
            PairElement::new(at.i + 1, at.j)
        } else {
            PairElement::new(at.i, at.j - 1)
        };
        points.push(at);
    }
    // A path point is maximal iff it is not followed by a step right
    // and not preceded by a step down.
    let last = points.len() - 1;
    let gens: Vec<PairElement> = (0..=last)
        .filter(|&s| {
            let next_right = s < last && steps >> s & 1 == 1;
            let prev_down = s > 0 && steps >> (s - 1) & 1 == 0;
            !next_right && !prev_down
        })
        .map(|s| points[s])
        .collect();
    ideal_from_generators(&gens, n)
}

fn sort_ideals(ideals: &mut [OrderIdeal]) {
    ideals.sort_by(|a, b| a.generators.cmp(&b.generators));
}

/// All ideals over ground `n`, generated from lattice paths, ordered
/// lexicographically by generator list.
pub fn enumerate_ideals(n: usize) -> Result<Vec<OrderIdeal>> {
    let count = count_ideals(n)?;
    let mut ideals = (0..count)
        .map(|steps| ideal_from_path(n, steps))
        .collect::<Result<Vec<_>>>()?;
    sort_ideals(&mut ideals);
    Ok(ideals)
}

/// Every antichain of F3(n), including the empty one.
pub fn antichains(n: usize) -> Result<Vec<Vec<PairElement>>> {
    let elems: Vec<PairElement> = enumerate_poset(n)?.into_iter().collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn extend(
        from: usize,
        elems: &[PairElement],
        current: &mut Vec<PairElement>,
        out: &mut Vec<Vec<PairElement>>,
    ) {
        out.push(current.clone());
        for k in from..elems.len() {
            let e = elems[k];
            if current.iter().all(|c| !c.is_leq(&e) && !e.is_leq(c)) {
                current.push(e);
                extend(k + 1, elems, current, out);
                current.pop();
            }
        }
    }
    extend(0, &elems, &mut current, &mut out);
    Ok(out)
}

/// Same set as [`enumerate_ideals`], found by filtering all antichains.
pub fn enumerate_ideals_brute_force(n: usize) -> Result<Vec<OrderIdeal>> {
    let mut ideals: Vec<OrderIdeal> = antichains(n)?
        .into_iter()
        .filter(|a| a.iter().any(|g| g.j + 1 == n))
        .map(|a| ideal_from_generators(&a, n))
        .collect::<Result<_>>()?;
    sort_ideals(&mut ideals);
    Ok(ideals)
}
