//! Chain complexes of semicubical sets and their integral homology.
//!
//! The ordinary differential is `d_n σ = Σ_i (-1)^i (∂_i^1 σ − ∂_i^0 σ)`. The
//! directed (Goubault) differentials keep one side only:
//! `d_n^ε σ = Σ_i (-1)^i ∂_i^ε σ`, with `ε = 0` giving initial and `ε = 1`
//! final homology.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::cubical::{build_q, SemicubicalSet};
use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;
use crate::net::StateSpace;
use crate::snf::smith_normal_form;

/// Free abelian groups `C_n` given by their ranks, with `d_n: C_n → C_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    differentials: Vec<IntegerMatrix>,
}

impl ChainComplex {
    /// `differentials[k]` is `d_{k+1}`; shapes must compose.
    pub fn new(ranks: Vec<usize>, differentials: Vec<IntegerMatrix>) -> Result<Self> {
        let ranks = if ranks.is_empty() { vec![0] } else { ranks };
        if differentials.len() + 1 != ranks.len() {
            return Err(Error::MalformedComplex(format!(
                "{} ranks need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            if d.cols() != ranks[k + 1] || d.rows() != ranks[k] {
                return Err(Error::MalformedComplex(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    k + 1,
                    d.rows(),
                    d.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
        }
        Ok(ChainComplex { ranks, differentials })
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Highest degree with a chain group.
    pub fn top(&self) -> usize {
        self.ranks.len() - 1
    }

    /// `d_n` for `1 ≤ n ≤ top`.
    pub fn differential(&self, n: usize) -> Option<&IntegerMatrix> {
        n.checked_sub(1).and_then(|k| self.differentials.get(k))
    }

    /// Checks `d_{n-1} ∘ d_n = 0` as an exact matrix product, for every `n ≥ 2`.
    pub fn check_closed(&self) -> Result<()> {
        for k in 1..self.differentials.len() {
            if !self.differentials[k - 1].mul(&self.differentials[k]).is_zero() {
                return Err(Error::BoundaryNotClosed { degree: k });
            }
        }
        Ok(())
    }
}

/// Which face family a directed differential keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    /// `ε = 0`: initial homology.
    Initial,
    /// `ε = 1`: final homology.
    Final,
}

impl Endpoint {
    pub const BOTH: [Endpoint; 2] = [Endpoint::Initial, Endpoint::Final];

    pub fn bit(self) -> u8 {
        match self {
            Endpoint::Initial => 0,
            Endpoint::Final => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Endpoint::Initial),
            1 => Some(Endpoint::Final),
            _ => None,
        }
    }
}

fn sign(i: usize) -> BigInt {
    if i.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn assemble(x: &SemicubicalSet, coeffs: &[(u8, bool)]) -> ChainComplex {
    let top = x.dim().unwrap_or(0);
    let ranks: Vec<usize> = (0..=top).map(|n| x.len(n)).collect();
    let mut differentials = Vec::with_capacity(top);
    for n in 1..=top {
        let mut d = IntegerMatrix::zeros(ranks[n - 1], ranks[n]);
        for k in 0..ranks[n] {
            for i in 1..=n {
                let s = sign(i);
                for &(eps, negate) in coeffs {
                    let f = x
                        .face_index(n, i, eps, k)
                        .expect("face tables of a validated set are in range");
                    let v = if negate { -&s } else { s.clone() };
                    d.add_to(f, k, &v);
                }
            }
        }
        differentials.push(d);
    }
    ChainComplex { ranks, differentials }
}

/// Chain complex with `d_n σ = Σ_i (-1)^i (∂_i^1 σ − ∂_i^0 σ)`.
pub fn boundary_matrices(x: &SemicubicalSet) -> ChainComplex {
    assemble(x, &[(1, false), (0, true)])
}

/// Goubault complex with `d_n^ε σ = Σ_i (-1)^i ∂_i^ε σ`.
pub fn directed_boundary_matrices(x: &SemicubicalSet, endpoint: Endpoint) -> ChainComplex {
    assemble(x, &[(endpoint.bit(), false)])
}

/// A finitely generated abelian group `Z^betti ⊕ Z/t_1 ⊕ ⋯ ⊕ Z/t_k`, with
/// `t_i ≥ 2` and `t_i | t_{i+1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup::default()
    }

    pub fn free(betti: usize) -> Self {
        HomologyGroup {
            betti,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" ⊕ "))
        }
    }
}

struct Torsion<'a>(&'a [BigInt]);

impl Serialize for Torsion<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for t in self.0 {
            match t.to_u64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&t.to_string())?,
            }
        }
        seq.end()
    }
}

/// Machine-readable record `{degree, betti, torsion}`.
#[derive(Serialize)]
pub struct HomologyRecord<'a> {
    pub degree: usize,
    pub betti: usize,
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: &'a [BigInt],
}

fn serialize_torsion<S: Serializer>(t: &&[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    Torsion(t).serialize(s)
}

/// Records for a list of groups indexed by degree.
pub fn records(groups: &[HomologyGroup]) -> Vec<HomologyRecord<'_>> {
    groups
        .iter()
        .enumerate()
        .map(|(degree, g)| HomologyRecord {
            degree,
            betti: g.betti,
            torsion: &g.torsion,
        })
        .collect()
}

/// Group of degree `k`, zero above the listed degrees.
pub fn degree(groups: &[HomologyGroup], k: usize) -> HomologyGroup {
    groups.get(k).cloned().unwrap_or_default()
}

/// `H_n` for `n = 0..=top`. Fails when `d ∘ d ≠ 0`.
pub fn homology(complex: &ChainComplex) -> Result<Vec<HomologyGroup>> {
    complex.check_closed()?;
    let snfs: Vec<_> = complex.differentials.iter().map(smith_normal_form).collect();
    let rank_of = |n: usize| -> usize { n.checked_sub(1).and_then(|k| snfs.get(k)).map_or(0, |r| r.rank()) };
    Ok((0..=complex.top())
        .map(|n| HomologyGroup {
            betti: complex.ranks[n] - rank_of(n) - rank_of(n + 1),
            torsion: snfs.get(n).map(|r| r.torsion()).unwrap_or_default(),
        })
        .collect())
}

/// Integral homology of a semicubical set.
pub fn cubical_homology(x: &SemicubicalSet) -> Result<Vec<HomologyGroup>> {
    homology(&boundary_matrices(x))
}

/// Goubault homology of a semicubical set.
pub fn directed_cubical_homology(x: &SemicubicalSet, endpoint: Endpoint) -> Result<Vec<HomologyGroup>> {
    homology(&directed_boundary_matrices(x, endpoint))
}

/// Integral homology of a state space, through `Q(S, E, I)`.
pub fn space_homology(space: &StateSpace) -> Result<Vec<HomologyGroup>> {
    cubical_homology(&build_q(space)?)
}

/// Directed homology of a state space, through `Q(S, E, I)`.
pub fn directed_homology(space: &StateSpace, endpoint: Endpoint) -> Result<Vec<HomologyGroup>> {
    directed_cubical_homology(&build_q(space)?, endpoint)
}

/// Exactness data of `0 → C(X1∩X2) → C(X1)⊕C(X2) → C(X1∪X2) → 0` in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvGrade {
    pub degree: usize,
    pub intersection: usize,
    pub left: usize,
    pub right: usize,
    pub union: usize,
    /// `θ(σ) = σ ⊕ σ` is injective.
    pub theta_injective: bool,
    /// The invariant factors of `θ` are all one, so its image is saturated.
    pub theta_saturated: bool,
    /// `σ_1 ⊕ σ_2 ↦ σ_1 − σ_2` is onto.
    pub difference_surjective: bool,
    /// The composite of the two maps is zero.
    pub composite_zero: bool,
    /// `rank θ` equals the nullity of the difference map.
    pub ranks_match: bool,
}

impl MvGrade {
    pub fn exact(&self) -> bool {
        self.theta_injective
            && self.theta_saturated
            && self.difference_surjective
            && self.composite_zero
            && self.ranks_match
    }
}

/// Result of [`mv_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MvReport {
    pub grades: Vec<MvGrade>,
    /// Both maps commute with the differentials.
    pub chain_maps: bool,
    /// `H_0(θ)` on component classes: rows are the components of `X1` then
    /// of `X2`, columns the components of `X1∩X2`.
    pub h0_theta: Vec<Vec<i64>>,
    pub intersection_components: usize,
    /// Euler characteristics of `X1`, `X2`, `X1∪X2`, `X1∩X2`.
    pub euler: [i64; 4],
}

impl MvReport {
    pub fn exact(&self) -> bool {
        self.chain_maps && self.grades.iter().all(MvGrade::exact)
    }

    pub fn euler_additive(&self) -> bool {
        let [a, b, u, i] = self.euler;
        a + b == u + i
    }
}

/// Verifies the Mayer–Vietoris short exact sequence of chain complexes for
/// two subcomplexes of a common ambient set.
pub fn mv_check(x1: &SemicubicalSet, x2: &SemicubicalSet) -> Result<MvReport> {
    let meet = x1.intersection(x2)?;
    let join = x1.union(x2)?;
    let top = join.dim().unwrap_or(0);

    let theta = |n: usize| -> IntegerMatrix {
        let (l, r) = (x1.len(n), x2.len(n));
        let mut m = IntegerMatrix::zeros(l + r, meet.len(n));
        for (k, c) in meet.grade(n).iter().enumerate() {
            m.set(x1.index_of(n, c).expect("meet ⊆ x1"), k, BigInt::one());
            m.set(l + x2.index_of(n, c).expect("meet ⊆ x2"), k, BigInt::one());
        }
        m
    };
    let difference = |n: usize| -> IntegerMatrix {
        let l = x1.len(n);
        let mut m = IntegerMatrix::zeros(join.len(n), l + x2.len(n));
        for (k, c) in x1.grade(n).iter().enumerate() {
            m.set(join.index_of(n, c).expect("x1 ⊆ join"), k, BigInt::one());
        }
        for (k, c) in x2.grade(n).iter().enumerate() {
            m.set(join.index_of(n, c).expect("x2 ⊆ join"), l + k, -BigInt::one());
        }
        m
    };

    let mut grades = Vec::with_capacity(top + 1);
    let mut thetas = Vec::new();
    let mut diffs = Vec::new();
    for n in 0..=top {
        let t = theta(n);
        let d = difference(n);
        let ts = smith_normal_form(&t);
        let rank_t = ts.rank();
        let rank_d = smith_normal_form(&d).rank();
        let middle = x1.len(n) + x2.len(n);
        grades.push(MvGrade {
            degree: n,
            intersection: meet.len(n),
            left: x1.len(n),
            right: x2.len(n),
            union: join.len(n),
            theta_injective: rank_t == meet.len(n),
            theta_saturated: ts.diagonal.iter().take(rank_t).all(One::is_one),
            difference_surjective: rank_d == join.len(n),
            composite_zero: d.mul(&t).is_zero(),
            ranks_match: rank_t == middle - rank_d,
        });
        thetas.push(t);
        diffs.push(d);
    }

    let (c1, c2, cm, cj) = (
        boundary_matrices(x1),
        boundary_matrices(x2),
        boundary_matrices(&meet),
        boundary_matrices(&join),
    );
    let direct_sum = |n: usize| -> IntegerMatrix {
        let (a, b) = (x1.len(n), x2.len(n));
        let (a0, b0) = (x1.len(n - 1), x2.len(n - 1));
        let mut m = IntegerMatrix::zeros(a0 + b0, a + b);
        if let Some(d) = c1.differential(n) {
            for i in 0..d.rows() {
                for (j, v) in d.row(i) {
                    m.set(i, j, v.clone());
                }
            }
        }
        if let Some(d) = c2.differential(n) {
            for i in 0..d.rows() {
                for (j, v) in d.row(i) {
                    m.set(a0 + i, a + j, v.clone());
                }
            }
        }
        m
    };
    let or_zero = |c: &ChainComplex, n: usize, rows: usize, cols: usize| {
        c.differential(n)
            .cloned()
            .unwrap_or_else(|| IntegerMatrix::zeros(rows, cols))
    };
    let chain_maps = (1..=top).all(|n| {
        let sum = direct_sum(n);
        let dm = or_zero(&cm, n, meet.len(n - 1), meet.len(n));
        let dj = or_zero(&cj, n, join.len(n - 1), join.len(n));
        sum.mul(&thetas[n]) == thetas[n - 1].mul(&dm) && dj.mul(&diffs[n]) == diffs[n - 1].mul(&sum)
    });

    let (k1, k2, km) = (x1.components(), x2.components(), meet.components());
    let mut h0_theta = vec![vec![0i64; km.count]; k1.count + k2.count];
    for (v, cube) in meet.grade(0).iter().enumerate() {
        let col = km.labels[v];
        let r1 = k1.labels[x1.index_of(0, cube).expect("meet ⊆ x1")];
        let r2 = k2.labels[x2.index_of(0, cube).expect("meet ⊆ x2")];
        h0_theta[r1][col] = 1;
        h0_theta[k1.count + r2][col] = 1;
    }

    Ok(MvReport {
        grades,
        chain_maps,
        h0_theta,
        intersection_components: km.count,
        euler: [
            x1.euler_characteristic(),
            x2.euler_characteristic(),
            join.euler_characteristic(),
            meet.euler_characteristic(),
        ],
    })
}

/// Whether every group is zero.
pub fn all_zero(groups: &[HomologyGroup]) -> bool {
    groups.iter().all(HomologyGroup::is_zero)
}

/// Whether the list is `Z, 0, 0, …`.
pub fn is_point_like(groups: &[HomologyGroup]) -> bool {
    degree(groups, 0) == HomologyGroup::free(1) && groups.iter().skip(1).all(HomologyGroup::is_zero)
}
