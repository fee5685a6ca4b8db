//! The cyclic 5-polytope `C = conv{μ(t_0), ..., μ(t_n)}` on the moment
//! curve `μ(t) = (t, t², t³, t⁴, t⁵)`.
//!
//! A 5-subset `F` of indices spans the hyperplane whose equation is the
//! monic polynomial `∏_{i∈F} (t - t_i) = γ_0 + γ·μ(t)`. Facets are decided
//! combinatorially by Gale's evenness criterion; upper/lower orientation by
//! the parity of facet indices beyond a non-facet index, which is the sign
//! of `∏ (t_j - t_i)`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{sign, Scalar};

pub type Point5<T> = [T; 5];
pub type FacetIndices = [usize; 5];

/// Strictly increasing curve parameters with `t_0 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamVector<T> {
    t: Vec<T>,
}

impl<T: Scalar> ParamVector<T> {
    pub fn new(t: Vec<T>) -> Result<Self> {
        if t.first() != Some(&T::zero()) {
            return Err(Error::InvalidParameters("t_0 must be 0".into()));
        }
        Self::increasing(t)
    }

    /// Strictly increasing parameters without the `t_0 = 0` requirement,
    /// for configurations used only by the geometric oracle.
    pub fn increasing(t: Vec<T>) -> Result<Self> {
        if let Some(k) = (1..t.len()).find(|&k| t[k - 1] >= t[k]) {
            return Err(Error::InvalidParameters(format!(
                "parameters not strictly increasing at index {k}"
            )));
        }
        Ok(ParamVector { t })
    }

    pub fn values(&self) -> &[T] {
        &self.t
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// The largest label `n`.
    pub fn n(&self) -> usize {
        self.t.len() - 1
    }

    pub fn point(&self, k: usize) -> Point5<T> {
        moment_point(&self.t[k])
    }

    pub fn into_values(self) -> Vec<T> {
        self.t
    }
}

pub fn moment_point<T: Scalar>(t: &T) -> Point5<T> {
    let t2 = t.clone() * t.clone();
    let t3 = t2.clone() * t.clone();
    let t4 = t3.clone() * t.clone();
    let t5 = t4.clone() * t.clone();
    [t.clone(), t2, t3, t4, t5]
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneData<T> {
    pub gamma0: T,
    /// `γ_1, ..., γ_5`; always `γ_5 = 1`.
    pub gamma: [T; 5],
    pub orientation: Orientation,
    pub alpha0: T,
    pub alpha: [T; 5],
}

impl<T: Scalar> HyperplaneData<T> {
    /// `α·x - α_0`; negative on the polytope side.
    pub fn outer_value(&self, x: &[T]) -> T {
        dot(&self.alpha, x) - self.alpha0.clone()
    }

    /// `γ_0 + γ·x`, which equals `∏ (t - t_i)` at `x = μ(t)`.
    pub fn gamma_value(&self, x: &[T]) -> T {
        self.gamma0.clone() + dot(&self.gamma, x)
    }
}

/// Coefficients of `∏ (t - r)` over `roots`, lowest degree first.
pub fn expand_monic<T: Scalar>(roots: &[T]) -> Vec<T> {
    let mut coeffs = vec![T::one()];
    for r in roots {
        let mut next = vec![T::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].clone() + c.clone();
            next[k] = next[k].clone() - r.clone() * c.clone();
        }
        coeffs = next;
    }
    coeffs
}

fn eval_poly<T: Scalar>(coeffs: &[T], x: &T) -> T {
    coeffs
        .iter()
        .rev()
        .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
}

pub fn hyperplane_of<T: Scalar>(facet: &FacetIndices, ts: &ParamVector<T>) -> HyperplaneData<T> {
    let roots: Vec<T> = facet.iter().map(|&k| ts.values()[k].clone()).collect();
    let coeffs = expand_monic(&roots);
    let gamma0 = coeffs[0].clone();
    let gamma: [T; 5] = std::array::from_fn(|k| coeffs[k + 1].clone());
    let orientation = orientation_by_parity(facet, ts.n() + 1);
    let (alpha0, alpha) = match orientation {
        Orientation::Upper => (-gamma0.clone(), gamma.clone()),
        Orientation::Lower => (gamma0.clone(), gamma.clone().map(|g| -g)),
    };
    HyperplaneData {
        gamma0,
        gamma,
        orientation,
        alpha0,
        alpha,
    }
}

/// Compares the expanded coefficients of `∏ (t - r)` with direct evaluation
/// of the product at three fixed arguments. Only meaningful for exact scalars.
pub fn expansion_self_check<T: Scalar>(roots: &[T]) -> bool {
    let coeffs = expand_monic(roots);
    [
        T::from_int(-2),
        T::one() / T::from_int(3),
        T::from_int(7) / T::two(),
    ]
    .iter()
    .all(|probe| {
        let direct = roots
            .iter()
            .fold(T::one(), |acc, r| acc * (probe.clone() - r.clone()));
        eval_poly(&coeffs, probe) == direct
    })
}

/// Gale's evenness criterion on the ground set `0..ground_size`.
pub fn is_gale_facet(facet: &FacetIndices, ground_size: usize) -> bool {
    let outside: Vec<usize> = (0..ground_size).filter(|k| !facet.contains(k)).collect();
    outside.windows(2).all(|w| {
        let between = facet.iter().filter(|&&f| w[0] < f && f < w[1]).count();
        between % 2 == 0
    })
}

/// Upper iff an odd number of facet indices exceed a (any) non-facet index.
/// For Gale facets the parity does not depend on the chosen index.
/// With five points in total the single facet counts as lower.
pub fn orientation_by_parity(facet: &FacetIndices, ground_size: usize) -> Orientation {
    let parity = |j: usize| facet.iter().filter(|&&f| f > j).count() % 2;
    let mut outside = (0..ground_size).filter(|k| !facet.contains(k));
    let Some(first) = outside.next() else {
        return Orientation::Lower;
    };
    let p = parity(first);
    if is_gale_facet(facet, ground_size) {
        debug_assert!(outside.all(|j| parity(j) == p));
    }
    if p == 1 {
        Orientation::Upper
    } else {
        Orientation::Lower
    }
}

pub fn classify_upper_lower(facet: &FacetIndices, ground_size: usize) -> Orientation {
    orientation_by_parity(facet, ground_size)
}

/// Size of the right-most contiguous block of `facet`, when the block does
/// not start at 0.
pub fn end_set_size(facet: &FacetIndices) -> Option<usize> {
    let max = *facet.iter().max()?;
    let r = (0..max).rev().find(|i| !facet.contains(i))?;
    Some(max - r)
}

/// Orientation decided by the exact sign of `∏ (t_j - t_i)` at every
/// non-facet index `j`; `None` if the signs disagree or one vanishes.
/// With no non-facet index the facet counts as lower.
pub fn orientation_by_sign_test<T: Scalar>(
    facet: &FacetIndices,
    ts: &ParamVector<T>,
) -> Option<Orientation> {
    let mut seen = None;
    for j in (0..ts.len()).filter(|k| !facet.contains(k)) {
        let prod = facet.iter().fold(T::one(), |acc, &i| {
            acc * (ts.values()[j].clone() - ts.values()[i].clone())
        });
        let o = match sign(&prod) {
            Ordering::Less => Orientation::Upper,
            Ordering::Greater => Orientation::Lower,
            Ordering::Equal => return None,
        };
        if seen.is_some_and(|s| s != o) {
            return None;
        }
        seen = Some(o);
    }
    Some(seen.unwrap_or(Orientation::Lower))
}

/// All 5-subsets of `0..ground_size`, lexicographically.
pub fn five_subsets(ground_size: usize) -> Vec<FacetIndices> {
    let mut out = Vec::new();
    let mut idx = [0, 1, 2, 3, 4];
    if ground_size < 5 {
        return out;
    }
    loop {
        out.push(idx);
        let mut k = 5;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < ground_size - 5 + k {
                idx[k] += 1;
                for m in k + 1..5 {
                    idx[m] = idx[m - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Facets of `C_5(ground_size)` with their orientation.
pub fn gale_facets(ground_size: usize) -> Vec<(FacetIndices, Orientation)> {
    five_subsets(ground_size)
        .into_iter()
        .filter(|f| is_gale_facet(f, ground_size))
        .map(|f| (f, orientation_by_parity(&f, ground_size)))
        .collect()
}

pub fn lower_facets(ground_size: usize) -> Vec<FacetIndices> {
    gale_facets(ground_size)
        .into_iter()
        .filter(|(_, o)| *o == Orientation::Lower)
        .map(|(f, _)| f)
        .collect()
}

/// Determinant by exact Gaussian elimination.
#[allow(clippy::needless_range_loop)]
pub fn determinant<T: Scalar>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    let mut det = T::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return T::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * p.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone() / p.clone();
            for c in col..n {
                let v = m[col][c].clone() * factor.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    det
}

/// Facets of the convex hull of the moment-curve points, found by testing
/// every 5-subset against all remaining points with orientation
/// determinants. Meant as an independent check on small inputs.
pub fn geometric_facets_oracle<T: Scalar>(ts: &ParamVector<T>) -> Result<Vec<FacetIndices>> {
    ParamVector::increasing(ts.values().to_vec())?;
    if ts.len() > 10 {
        return Err(Error::InvalidParameters(format!(
            "oracle limited to 10 points, got {}",
            ts.len()
        )));
    }
    let points: Vec<Point5<T>> = (0..ts.len()).map(|k| ts.point(k)).collect();
    let row =
        |p: &Point5<T>| -> Vec<T> { std::iter::once(T::one()).chain(p.iter().cloned()).collect() };
    let mut facets = Vec::new();
    for f in five_subsets(ts.len()) {
        let base: Vec<Vec<T>> = f.iter().map(|&k| row(&points[k])).collect();
        let mut side = None;
        let mut ok = true;
        for k in (0..ts.len()).filter(|k| !f.contains(k)) {
            let mut m = base.clone();
            m.push(row(&points[k]));
            let s = sign(&determinant(m));
            if s == Ordering::Equal || side.is_some_and(|x| x != s) {
                ok = false;
                break;
            }
            side = Some(s);
        }
        if ok {
            facets.push(f);
        }
    }
    Ok(facets)
}
