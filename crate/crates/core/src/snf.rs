//! Smith normal form over the integers.
//!
//! Two routes produce the same canonical diagonal:
//! [`smith_normal_form`] eliminates on sparse rows and only tracks the
//! diagonal, which is what homology needs for large boundary matrices;
//! [`smith_normal_form_with_transforms`] works densely and also returns
//! unimodular `U`, `V` with `U·M·V = D`.
//!
//! Both pivot on an entry of minimal absolute value.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntegerMatrix;

/// Diagonal of the Smith form, and optionally the transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// `min(rows, cols)` non-negative entries; the nonzero ones come first and
    /// form a divisibility chain.
    pub diagonal: Vec<BigInt>,
    /// `(U, V)` with `U·M·V = diag`, when requested.
    pub transforms: Option<(IntegerMatrix, IntegerMatrix)>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().take_while(|d| !d.is_zero()).count()
    }

    /// Diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect()
    }

    /// The diagonal as a `rows × cols` matrix.
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(rows, cols);
        for (i, v) in self.diagonal.iter().enumerate() {
            d.set(i, i, v.clone());
        }
        d
    }
}

/// Rewrites nonzero diagonal entries into a divisibility chain by replacing
/// pairs with `(gcd, lcm)`, then pads with zeros to `len`.
fn canonical_diagonal(mut nonzero: Vec<BigInt>, len: usize) -> Vec<BigInt> {
    let ones = nonzero.iter().filter(|d| d.is_one()).count();
    nonzero.retain(|d| !d.is_one());
    for i in 0..nonzero.len() {
        for j in i + 1..nonzero.len() {
            let g = nonzero[i].gcd(&nonzero[j]);
            if g != nonzero[i] {
                let l = &nonzero[i] / &g * &nonzero[j];
                nonzero[i] = g;
                nonzero[j] = l;
            }
        }
    }
    let mut out = vec![BigInt::one(); ones];
    out.extend(nonzero);
    out.resize(len, BigInt::zero());
    out
}

/// Invariant factors of `m` by sparse elimination; no transforms.
pub fn smith_normal_form(m: &IntegerMatrix) -> SnfResult {
    let len = m.rows().min(m.cols());
    let mut rows = m.clone().into_rows();
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols()];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            cols[j].insert(i);
        }
    }
    let mut live: BTreeSet<usize> = (0..rows.len()).filter(|&i| !rows[i].is_empty()).collect();
    let mut diagonal = Vec::new();

    while let Some((mut r, mut c)) = pick_pivot(&rows, &live) {
        loop {
            let p = rows[r][&c].clone();
            let mut best: Option<(usize, usize, BigInt)> = None;
            let others: Vec<usize> = cols[c].iter().copied().filter(|&k| k != r).collect();
            for k in others {
                let q = rows[k][&c].div_floor(&p);
                subtract_row(&mut rows, &mut cols, k, r, &q);
                if let Some(rem) = rows[k].get(&c) {
                    if best.as_ref().is_none_or(|b| rem.abs() < b.2) {
                        best = Some((k, c, rem.abs()));
                    }
                }
                if rows[k].is_empty() {
                    live.remove(&k);
                }
            }
            if best.is_none() {
                // column c is now clear apart from the pivot, so column
                // operations only touch row r
                let entries: Vec<usize> = rows[r].keys().copied().filter(|&j| j != c).collect();
                for j in entries {
                    let rem = rows[r][&j].mod_floor(&p);
                    if rem.is_zero() {
                        rows[r].remove(&j);
                        cols[j].remove(&r);
                    } else {
                        if best.as_ref().is_none_or(|b| rem.abs() < b.2) {
                            best = Some((r, j, rem.abs()));
                        }
                        rows[r].insert(j, rem);
                    }
                }
            }
            match best {
                Some((k, j, _)) => {
                    r = k;
                    c = j;
                }
                None => break,
            }
        }
        let p = rows[r].remove(&c).expect("pivot present");
        cols[c].remove(&r);
        live.remove(&r);
        diagonal.push(p.abs());
    }
    SnfResult {
        diagonal: canonical_diagonal(diagonal, len),
        transforms: None,
    }
}

fn pick_pivot(rows: &[BTreeMap<usize, BigInt>], live: &BTreeSet<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for &i in live {
        for (&j, v) in &rows[i] {
            let a = v.abs();
            if a.is_one() {
                return Some((i, j));
            }
            if best.as_ref().is_none_or(|b| a < b.2) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// `row[k] -= q · row[r]`, keeping the column index in sync.
fn subtract_row(
    rows: &mut [BTreeMap<usize, BigInt>],
    cols: &mut [BTreeSet<usize>],
    k: usize,
    r: usize,
    q: &BigInt,
) {
    if q.is_zero() {
        return;
    }
    let src: Vec<(usize, BigInt)> = rows[r].iter().map(|(&j, v)| (j, v * q)).collect();
    let dst = &mut rows[k];
    for (j, v) in src {
        let e = dst.entry(j).or_default();
        *e -= v;
        if e.is_zero() {
            dst.remove(&j);
            cols[j].remove(&k);
        } else {
            cols[j].insert(k);
        }
    }
}

/// Dense Smith normal form with unimodular transforms `U·M·V = D`.
pub fn smith_normal_form_with_transforms(m: &IntegerMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_dense();
    let mut u = IntegerMatrix::identity(rows).to_dense();
    let mut v = IntegerMatrix::identity(cols).to_dense();

    let min_in = |a: &[Vec<BigInt>], t: usize| -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.as_ref().is_none_or(|b| x.abs() < b.2) {
                    best = Some((i, j, x.abs()));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    };

    for t in 0..rows.min(cols) {
        let mut done = false;
        loop {
            let Some((pi, pj)) = min_in(&a, t) else {
                done = true;
                break;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                dirty |= !a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                dirty |= !a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if done {
            break;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }

    let diagonal = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    SnfResult {
        diagonal,
        transforms: Some((
            IntegerMatrix::from_rows(rows, rows, &u),
            IntegerMatrix::from_rows(cols, cols, &v),
        )),
    }
}

/// `row[dst] -= q · row[src]`.
fn row_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let (d, s) = if dst < src {
        let (lo, hi) = a.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// `col[dst] -= q · col[src]`.
fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let delta = q * &row[src];
            row[dst] -= delta;
        }
    }
}

/// Rank of `m` over the rationals.
pub fn rank(m: &IntegerMatrix) -> usize {
    smith_normal_form(m).rank()
}
