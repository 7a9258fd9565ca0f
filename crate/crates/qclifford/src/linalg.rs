//! Sparse exact linear algebra over the Scalar field Q(s, u).
//!
//! Everything reduces to the reduced row-echelon form: rank, kernels,
//! canonical subspace bases, sums and intersections. Subspace equality is
//! structural equality of canonical bases. Pivoting prefers the entry of
//! lowest total degree, since degree growth (not numerics) is the cost
//! driver over a function field.

use crate::scalar::{rat, Rat, Scalar, ScalarError};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("bad specialization point (denominator vanished {0} times in a row)")]
    RepeatedBadSpecialization(usize),
    #[error("trials must be at least 1 in randomized mode")]
    NoTrials,
}

/// Sparse vector: finite map basis index → nonzero Scalar.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseVec {
    ambient: usize,
    entries: BTreeMap<usize, Scalar>,
}

impl SparseVec {
    pub fn zero(ambient: usize) -> Self {
        SparseVec {
            ambient,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(ambient: usize, idx: usize) -> Self {
        let mut v = Self::zero(ambient);
        v.set(idx, Scalar::one());
        v
    }

    pub fn from_entries(ambient: usize, entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = Self::zero(ambient);
        for (i, c) in entries {
            v.add_to(i, c);
        }
        v
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: usize) -> Option<&Scalar> {
        self.entries.get(&idx)
    }

    pub fn set(&mut self, idx: usize, c: Scalar) {
        assert!(idx < self.ambient, "index {idx} out of ambient {}", self.ambient);
        if c.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, c);
        }
    }

    pub fn add_to(&mut self, idx: usize, c: Scalar) {
        assert!(idx < self.ambient);
        if c.is_zero() {
            return;
        }
        match self.entries.entry(idx) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// First (lowest-index) nonzero coordinate.
    pub fn first(&self) -> Option<(usize, &Scalar)> {
        self.entries.iter().next().map(|(i, c)| (*i, c))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero(self.ambient);
        }
        SparseVec {
            ambient: self.ambient,
            entries: self.entries.iter().map(|(i, v)| (*i, v.mul(c))).collect(),
        }
    }

    /// self += coeff · other
    pub fn add_scaled(&mut self, other: &SparseVec, coeff: &Scalar) {
        debug_assert_eq!(self.ambient, other.ambient);
        if coeff.is_zero() {
            return;
        }
        for (i, c) in &other.entries {
            self.add_to(*i, c.mul(coeff));
        }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        for (i, c) in &other.entries {
            out.add_to(*i, c.clone());
        }
        out
    }

    pub fn specialize(&self, s_val: &Rat, u_val: &Rat) -> Result<SparseVec, ScalarError> {
        let mut out = SparseVec::zero(self.ambient);
        for (i, c) in &self.entries {
            out.add_to(*i, Scalar::from_rat(c.specialize(s_val, u_val)?));
        }
        Ok(out)
    }
}

/// List of sparse rows sharing an ambient column count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseMat {
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl SparseMat {
    pub fn new(ncols: usize) -> Self {
        SparseMat {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Self {
        for r in &rows {
            assert_eq!(r.ambient(), ncols, "row ambient mismatch");
        }
        SparseMat { ncols, rows }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat {
            ncols: n,
            rows: (0..n).map(|i| SparseVec::unit(n, i)).collect(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn push_row(&mut self, row: SparseVec) {
        assert_eq!(row.ambient(), self.ncols);
        self.rows.push(row);
    }

    pub fn transpose(&self) -> SparseMat {
        let mut rows = vec![SparseVec::zero(self.rows.len()); self.ncols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row.iter() {
                rows[c].set(r, v.clone());
            }
        }
        SparseMat {
            ncols: self.rows.len(),
            rows,
        }
    }

    /// Matrix–vector product M·x (rows of M dotted with x).
    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        assert_eq!(x.ambient(), self.ncols);
        let mut out = SparseVec::zero(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = Scalar::zero();
            for (c, v) in row.iter() {
                if let Some(xc) = x.get(c) {
                    acc = acc.add(&v.mul(xc));
                }
            }
            out.set(r, acc);
        }
        out
    }

    pub fn specialize(&self, s_val: &Rat, u_val: &Rat) -> Result<SparseMat, ScalarError> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.specialize(s_val, u_val))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SparseMat {
            ncols: self.ncols,
            rows,
        })
    }
}

/// Reduced row-echelon form and rank.
pub fn rref(m: &SparseMat) -> (SparseMat, usize) {
    let reduced = echelonize(m.rows.to_vec());
    let rank = reduced.len();
    (SparseMat::from_rows(m.ncols, reduced), rank)
}

pub fn rank(m: &SparseMat) -> usize {
    rref(m).1
}

/// Core elimination: returns fully reduced rows sorted by pivot column.
fn echelonize(rows: Vec<SparseVec>) -> Vec<SparseVec> {
    let mut pending: Vec<SparseVec> = rows.into_iter().filter(|r| !r.is_zero()).collect();
    let mut done: Vec<SparseVec> = Vec::new(); // invariant: sorted by pivot, fully reduced
    while !pending.is_empty() {
        // lowest column currently reachable
        let col = pending.iter().filter_map(|r| r.first().map(|(i, _)| i)).min().unwrap();
        // among the rows pivoting there, take the cheapest entry
        let mut best: Option<(usize, (u32, usize))> = None;
        for (k, r) in pending.iter().enumerate() {
            if let Some((i, c)) = r.first() {
                if i == col {
                    let cx = c.complexity();
                    if best.map_or(true, |(_, b)| cx < b) {
                        best = Some((k, cx));
                    }
                }
            }
        }
        let mut pivot = pending.swap_remove(best.unwrap().0);
        let inv = pivot.first().unwrap().1.inv().expect("pivot nonzero");
        pivot = pivot.scale(&inv);
        for r in pending.iter_mut() {
            if let Some(c) = r.get(col) {
                let c = c.clone();
                r.add_scaled(&pivot, &c.neg());
            }
        }
        for r in done.iter_mut() {
            if let Some(c) = r.get(col) {
                let c = c.clone();
                r.add_scaled(&pivot, &c.neg());
            }
        }
        done.push(pivot);
        pending.retain(|r| !r.is_zero());
    }
    done.sort_by_key(|r| r.first().map(|(i, _)| i));
    done
}

/// Right null space of M, as a canonical subspace: {x : M x = 0}.
pub fn kernel(m: &SparseMat) -> Subspace {
    let (r, _) = rref(m);
    let pivots: Vec<usize> = r.rows.iter().map(|row| row.first().unwrap().0).collect();
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..m.ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = SparseVec::zero(m.ncols);
        v.set(free, Scalar::one());
        for (row, &p) in r.rows.iter().zip(&pivots) {
            if let Some(c) = row.get(free) {
                v.set(p, c.neg());
            }
        }
        basis.push(v);
    }
    Subspace::from_rows(SparseMat::from_rows(m.ncols, basis))
}

/// Subspace of a finite-dimensional space, held as a canonical reduced
/// row-echelon basis, so subspace equality is structural equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    basis: SparseMat,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            basis: SparseMat::new(ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            basis: SparseMat::identity(ambient),
        }
    }

    pub fn from_rows(m: SparseMat) -> Self {
        let (basis, _) = rref(&m);
        Subspace { basis }
    }

    /// Builds the canonical basis with a per-column grading key: rows must be
    /// homogeneous (all their columns in one class), which makes the union of
    /// the blockwise echelon forms the global echelon form.
    pub fn from_rows_graded(m: SparseMat, col_class: &[usize]) -> Self {
        let (basis, _) = rref_graded(&m, col_class);
        Subspace { basis }
    }

    pub fn ambient(&self) -> usize {
        self.basis.ncols()
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &SparseMat {
        &self.basis
    }

    pub fn is_zero_space(&self) -> bool {
        self.dim() == 0
    }

    /// Reduce v against the basis; returns the remainder.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        for row in self.basis.rows() {
            let (p, _) = row.first().unwrap();
            if let Some(c) = v.get(p) {
                let c = c.clone();
                v.add_scaled(row, &c.neg());
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of v in the canonical basis, if v lies in the subspace.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Scalar>> {
        let mut v = v.clone();
        let mut coords = Vec::with_capacity(self.dim());
        for row in self.basis.rows() {
            let (p, _) = row.first().unwrap();
            let c = v.get(p).cloned().unwrap_or_else(Scalar::zero);
            if !c.is_zero() {
                v.add_scaled(row, &c.neg());
            }
            coords.push(c);
        }
        if v.is_zero() {
            Some(coords)
        } else {
            None
        }
    }

    pub fn sum(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
        if a.ambient() != b.ambient() {
            return Err(LinalgError::AmbientMismatch(a.ambient(), b.ambient()));
        }
        let mut rows = a.basis.rows.clone();
        rows.extend(b.basis.rows.clone());
        Ok(Subspace::from_rows(SparseMat::from_rows(a.ambient(), rows)))
    }

    /// Zassenhaus intersection: echelonize [A|A; B|0]; rows with zero left
    /// half carry a spanning set of A ∩ B in the right half.
    pub fn intersect(a: &Subspace, b: &Subspace) -> Result<Subspace, LinalgError> {
        Self::intersect_impl(a, b, None)
    }

    pub fn intersect_graded(
        a: &Subspace,
        b: &Subspace,
        col_class: &[usize],
    ) -> Result<Subspace, LinalgError> {
        Self::intersect_impl(a, b, Some(col_class))
    }

    fn intersect_impl(
        a: &Subspace,
        b: &Subspace,
        col_class: Option<&[usize]>,
    ) -> Result<Subspace, LinalgError> {
        if a.ambient() != b.ambient() {
            return Err(LinalgError::AmbientMismatch(a.ambient(), b.ambient()));
        }
        let d = a.ambient();
        let mut stacked = Vec::new();
        for row in a.basis.rows() {
            let mut v = SparseVec::zero(2 * d);
            for (i, c) in row.iter() {
                v.set(i, c.clone());
                v.set(i + d, c.clone());
            }
            stacked.push(v);
        }
        for row in b.basis.rows() {
            let mut v = SparseVec::zero(2 * d);
            for (i, c) in row.iter() {
                v.set(i, c.clone());
            }
            stacked.push(v);
        }
        let m = SparseMat::from_rows(2 * d, stacked);
        let reduced = match col_class {
            Some(classes) => {
                debug_assert_eq!(classes.len(), d);
                let doubled: Vec<usize> = (0..2 * d).map(|i| classes[i % d]).collect();
                rref_graded(&m, &doubled).0
            }
            None => rref(&m).0,
        };
        let mut inter = Vec::new();
        for row in reduced.rows() {
            let (first, _) = row.first().unwrap();
            if first >= d {
                let mut v = SparseVec::zero(d);
                for (i, c) in row.iter() {
                    v.set(i - d, c.clone());
                }
                inter.push(v);
            }
        }
        Ok(Subspace::from_rows(SparseMat::from_rows(d, inter)))
    }
}

/// Echelonization that splits the columns into grading classes. Every row
/// must be homogeneous: all of its nonzero columns in a single class. The
/// blocks are eliminated independently and the union, sorted by pivot, is
/// the global reduced echelon form.
pub fn rref_graded(m: &SparseMat, col_class: &[usize]) -> (SparseMat, usize) {
    assert_eq!(col_class.len(), m.ncols());
    // columns of each class, in ascending order
    let mut class_cols: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (col, cls) in col_class.iter().enumerate() {
        class_cols.entry(*cls).or_default().push(col);
    }
    let mut col_pos: BTreeMap<usize, usize> = BTreeMap::new();
    for cols in class_cols.values() {
        for (k, col) in cols.iter().enumerate() {
            col_pos.insert(*col, k);
        }
    }
    let mut blocks: BTreeMap<usize, Vec<SparseVec>> = BTreeMap::new();
    for row in m.rows() {
        if row.is_zero() {
            continue;
        }
        let cls = col_class[row.first().unwrap().0];
        let local = SparseVec::from_entries(
            class_cols[&cls].len(),
            row.iter().map(|(i, c)| {
                debug_assert_eq!(col_class[i], cls, "row is not grading-homogeneous");
                (col_pos[&i], c.clone())
            }),
        );
        blocks.entry(cls).or_default().push(local);
    }
    let mut rows = Vec::new();
    for (cls, block_rows) in blocks {
        let cols = &class_cols[&cls];
        for local in echelonize(block_rows) {
            rows.push(SparseVec::from_entries(
                m.ncols(),
                local.iter().map(|(i, c)| (cols[i], c.clone())),
            ));
        }
    }
    rows.sort_by_key(|r| r.first().map(|(i, _)| i));
    let rank = rows.len();
    (SparseMat::from_rows(m.ncols(), rows), rank)
}

/// Generic rank with a two-tier contract. `trials = 0` requests the full
/// symbolic computation. Otherwise the rank is taken as the maximum over
/// random specializations of (s, u) and certified from below by a symbolic
/// echelon run on the witnessing pivot submatrix: a specialization rank can
/// only underestimate the generic rank, never exceed it.
pub fn rank_certified(m: &SparseMat, trials: usize, seed: u64) -> Result<usize, LinalgError> {
    if trials == 0 {
        return Ok(rank(m));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    let mut consecutive_bad = 0usize;
    let mut done = 0usize;
    while done < trials {
        let s_val = rat(rng.gen_range(2..64));
        let u_val = rat(rng.gen_range(2..64));
        match m.specialize(&s_val, &u_val) {
            Err(_) => {
                consecutive_bad += 1;
                if consecutive_bad > 16 {
                    return Err(LinalgError::RepeatedBadSpecialization(consecutive_bad));
                }
            }
            Ok(spec) => {
                consecutive_bad = 0;
                done += 1;
                let (witness_rows, witness_cols) = pivot_witness(&spec);
                let r = witness_rows.len();
                if best.as_ref().map_or(true, |(b, _, _)| r > *b) {
                    best = Some((r, witness_rows, witness_cols));
                }
            }
        }
    }
    let (r, rows, cols) = best.unwrap();
    if r == 0 {
        return Ok(0);
    }
    // symbolic confirmation of a nonzero r×r minor
    let col_idx: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let sub_rows: Vec<SparseVec> = rows
        .iter()
        .map(|&ri| {
            SparseVec::from_entries(
                r,
                m.rows()[ri]
                    .iter()
                    .filter_map(|(c, v)| col_idx.get(&c).map(|k| (*k, v.clone()))),
            )
        })
        .collect();
    let confirmed = rank(&SparseMat::from_rows(r, sub_rows));
    assert_eq!(
        confirmed, r,
        "specialization rank exceeded the symbolic rank of its own witness"
    );
    Ok(r)
}

/// Rows and columns of a maximal pivot submatrix of a specialized matrix.
fn pivot_witness(m: &SparseMat) -> (Vec<usize>, Vec<usize>) {
    let mut rows: Vec<(usize, SparseVec)> = m
        .rows()
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_zero())
        .map(|(i, r)| (i, r.clone()))
        .collect();
    let mut witness_rows = Vec::new();
    let mut witness_cols = Vec::new();
    while let Some(col) = rows.iter().filter_map(|(_, r)| r.first().map(|(i, _)| i)).min() {
        let k = rows
            .iter()
            .position(|(_, r)| r.first().map(|(i, _)| i) == Some(col))
            .unwrap();
        let (orig, pivot) = rows.swap_remove(k);
        witness_rows.push(orig);
        witness_cols.push(col);
        let inv = pivot.first().unwrap().1.inv().expect("pivot nonzero");
        let pivot = pivot.scale(&inv);
        for (_, r) in rows.iter_mut() {
            if let Some(c) = r.get(col) {
                let c = c.clone();
                r.add_scaled(&pivot, &c.neg());
            }
        }
        rows.retain(|(_, r)| !r.is_zero());
    }
    (witness_rows, witness_cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_frac;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    fn sv(ambient: usize, entries: &[(usize, Scalar)]) -> SparseVec {
        SparseVec::from_entries(ambient, entries.iter().cloned())
    }

    fn random_row(
        rng: &mut ChaCha8Rng,
        ambient: usize,
        density: f64,
        with_s: bool,
    ) -> SparseVec {
        let mut row = SparseVec::zero(ambient);
        for i in 0..ambient {
            if rng.gen_bool(density) {
                let mut c = Scalar::from_int(rng.gen_range(-3..4));
                if with_s {
                    c = c.mul(&Scalar::s_pow(rng.gen_range(-1..2)));
                }
                row.add_to(i, c);
            }
        }
        row
    }

    fn q(k: i64) -> Scalar {
        Scalar::q_pow(k, 2)
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = SparseMat::identity(3);
        let (r, rank) = rref(&id);
        assert_eq!(rank, 3);
        assert_eq!(r, id);

        let z = SparseMat::from_rows(4, vec![SparseVec::zero(4); 3]);
        let (r, rank) = rref(&z);
        assert_eq!(rank, 0);
        assert_eq!(r.nrows(), 0);
    }

    #[test]
    fn rref_proportional_rows() {
        // rows (1, q), (q^{-1}, 1): the second is q^{-1} × the first.
        // Oracle: the 2×2 determinant 1·1 − q·q^{-1} = 0.
        let det = Scalar::one().mul(&Scalar::one()).sub(&q(1).mul(&q(-1)));
        assert!(det.is_zero());
        let m = SparseMat::from_rows(
            2,
            vec![
                sv(2, &[(0, Scalar::one()), (1, q(1))]),
                sv(2, &[(0, q(-1)), (1, Scalar::one())]),
            ],
        );
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn kernel_identity_and_zero_map() {
        assert_eq!(kernel(&SparseMat::identity(4)).dim(), 0);
        let z = SparseMat::from_rows(5, vec![SparseVec::zero(5); 2]);
        let k = kernel(&z);
        assert_eq!(k.dim(), 5);
        assert_eq!(k, Subspace::full(5));
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let ncols = 6;
            let rows: Vec<SparseVec> =
                (0..4).map(|_| random_row(&mut rng, ncols, 0.5, false)).collect();
            let m = SparseMat::from_rows(ncols, rows);
            let k = kernel(&m);
            assert_eq!(k.dim() + rank(&m), ncols);
            for v in k.basis().rows() {
                assert!(m.apply(v).is_zero());
            }
        }
    }

    #[test]
    fn intersect_idempotent_and_complementary() {
        let a = Subspace::from_rows(SparseMat::from_rows(
            4,
            vec![sv(4, &[(0, Scalar::one()), (2, q(1))]), sv(4, &[(1, Scalar::one())])],
        ));
        assert_eq!(Subspace::intersect(&a, &a).unwrap(), a);

        let x = Subspace::from_rows(SparseMat::from_rows(4, vec![sv(4, &[(0, Scalar::one())])]));
        let y = Subspace::from_rows(SparseMat::from_rows(4, vec![sv(4, &[(1, Scalar::one())])]));
        assert!(Subspace::intersect(&x, &y).unwrap().is_zero_space());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::full(3);
        let b = Subspace::full(4);
        assert!(matches!(
            Subspace::intersect(&a, &b),
            Err(LinalgError::AmbientMismatch(3, 4))
        ));
    }

    #[test]
    fn grassmann_identity_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..8 {
            let d = 6;
            let mk = |rng: &mut ChaCha8Rng| {
                let rows: Vec<SparseVec> =
                    (0..3).map(|_| random_row(rng, d, 0.6, false)).collect();
                Subspace::from_rows(SparseMat::from_rows(d, rows))
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let sum = Subspace::sum(&a, &b).unwrap();
            let inter = Subspace::intersect(&a, &b).unwrap();
            assert_eq!(a.dim() + b.dim(), sum.dim() + inter.dim());
            for v in inter.basis().rows() {
                assert!(a.contains(v) && b.contains(v));
            }
        }
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..6 {
            let rows: Vec<SparseVec> =
                (0..4).map(|_| random_row(&mut rng, 5, 0.4, true)).collect();
            let m = SparseMat::from_rows(5, rows);
            assert_eq!(rank(&m), rank(&m.transpose()));
        }
    }

    #[test]
    fn coordinates_reconstruct() {
        let a = Subspace::from_rows(SparseMat::from_rows(
            4,
            vec![
                sv(4, &[(0, Scalar::one()), (3, q(1))]),
                sv(4, &[(1, Scalar::one()), (3, Scalar::from_int(2))]),
            ],
        ));
        let v = sv(4, &[(0, q(2)), (1, Scalar::from_int(3)), (3, q(3).add(&Scalar::from_int(6)))]);
        let coords = a.coordinates(&v).unwrap();
        let mut rebuilt = SparseVec::zero(4);
        for (c, row) in coords.iter().zip(a.basis().rows()) {
            rebuilt.add_scaled(row, c);
        }
        assert_eq!(rebuilt, v);
        let outside = sv(4, &[(2, Scalar::one())]);
        assert!(a.coordinates(&outside).is_none());
    }

    #[test]
    fn rank_certified_identity() {
        let m = SparseMat::identity(4);
        assert_eq!(rank_certified(&m, 3, 42).unwrap(), 4);
        assert_eq!(rank_certified(&m, 0, 0).unwrap(), 4);
    }

    #[test]
    fn rank_certified_proportional_rows_in_u() {
        // rows (1, u), (u, u²): determinant u² − u² = 0
        let u = Scalar::u_pow(1);
        let m = SparseMat::from_rows(
            2,
            vec![
                sv(2, &[(0, Scalar::one()), (1, u.clone())]),
                sv(2, &[(0, u.clone()), (1, u.mul(&u))]),
            ],
        );
        assert_eq!(rank_certified(&m, 4, 3).unwrap(), 1);
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn graded_rref_matches_plain() {
        // rows homogeneous for the parity grading of columns
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let d = 8;
        let classes: Vec<usize> = (0..d).map(|i| i % 2).collect();
        for _ in 0..6 {
            let mut rows = Vec::new();
            for _ in 0..6 {
                let cls = rng.gen_range(0..2usize);
                let mut row = SparseVec::zero(d);
                for i in (0..d).filter(|i| i % 2 == cls) {
                    if rng.gen_bool(0.7) {
                        row.add_to(i, Scalar::from_int(rng.gen_range(-2..3)));
                    }
                }
                rows.push(row);
            }
            let m = SparseMat::from_rows(d, rows);
            let (plain, rank_plain) = rref(&m);
            let (graded, rank_graded) = rref_graded(&m, &classes);
            assert_eq!(rank_plain, rank_graded);
            assert_eq!(plain, graded);
        }
    }

    #[test]
    fn specialization_rejects_poles() {
        let pole = Scalar::one()
            .div(&Scalar::s_pow(1).sub(&Scalar::from_rat(rat_frac(2, 1))))
            .unwrap();
        let m = SparseMat::from_rows(1, vec![sv(1, &[(0, pole)])]);
        assert!(m.specialize(&rat(2), &rat(1)).is_err());
        assert!(m.specialize(&rat(3), &rat(1)).is_ok());
    }
}
