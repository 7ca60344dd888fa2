//! Exact sparse linear algebra over `Q`.
//!
//! Everything goes through [`Echelon`], an incremental row-echelon basis in
//! which every stored row is normalised to leading coefficient one and no two
//! rows share a leading column. Row processing order is fixed by the caller,
//! so results are reproducible run to run.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A sparse vector: `(index, value)` pairs with strictly increasing indices
/// and no zero values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVector {
    entries: Vec<(usize, Rational)>,
}

impl SparseVector {
    pub fn new() -> Self {
        SparseVector { entries: Vec::new() }
    }

    /// Builds a vector from unordered pairs; repeated indices are summed.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut map: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, c) in pairs {
            *map.entry(i).or_insert_with(Rational::zero) += &c;
        }
        SparseVector { entries: map.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn from_dense(values: &[Rational]) -> Self {
        SparseVector {
            entries: values.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect(),
        }
    }

    pub fn unit(i: usize) -> Self {
        SparseVector { entries: vec![(i, Rational::one())] }
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.entries[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn min_index(&self) -> Option<usize> {
        self.entries.first().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &Rational) -> SparseVector {
        if c.is_zero() {
            return SparseVector::new();
        }
        SparseVector { entries: self.entries.iter().map(|(i, a)| (*i, a * c)).collect() }
    }

    /// `self - c·other`, merged in one pass.
    pub fn sub_scaled(&self, c: &Rational, other: &SparseVector) -> SparseVector {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, -(c * y)));
                        b.next();
                    } else {
                        let v = x - &(c * y);
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, -(c * y)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        SparseVector { entries: out }
    }

    pub fn add(&self, other: &SparseVector) -> SparseVector {
        self.sub_scaled(&Rational::from_int(-1), other)
    }

    fn check_range(&self, n_cols: usize) -> Result<()> {
        match self.max_index() {
            Some(i) if i >= n_cols => Err(Error::IndexOutOfRange { index: i, len: n_cols }),
            _ => Ok(()),
        }
    }
}

/// A sparse matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: Vec<SparseVector>,
    n_cols: usize,
}

impl SparseMatrix {
    pub fn new(rows: Vec<SparseVector>, n_cols: usize) -> Result<Self> {
        for r in &rows {
            r.check_range(n_cols)?;
        }
        Ok(SparseMatrix { rows, n_cols })
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.n_cols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row.entries() {
                cols[*c].push((r, v.clone()));
            }
        }
        SparseMatrix {
            rows: cols.into_iter().map(|entries| SparseVector { entries }).collect(),
            n_cols: self.rows.len(),
        }
    }

    /// `A·x`, indexed by row.
    pub fn mul_vec(&self, x: &SparseVector) -> Result<SparseVector> {
        x.check_range(self.n_cols)?;
        let mut out = Vec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = Rational::zero();
            for (c, v) in row.entries() {
                let xc = x.get(*c);
                if !xc.is_zero() {
                    acc += &(v * &xc);
                }
            }
            if !acc.is_zero() {
                out.push((r, acc));
            }
        }
        Ok(SparseVector { entries: out })
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(Lead::Min);
        for r in sparsity_order(&self.rows) {
            ech.insert(self.rows[r].clone());
        }
        ech.rank()
    }
}

/// Which end of a row is its pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lead {
    /// Largest column index; used when indices follow a graded term order.
    Max,
    /// Smallest column index.
    Min,
}

/// Incremental row-echelon basis.
#[derive(Debug, Clone)]
pub struct Echelon {
    lead: Lead,
    pivots: BTreeMap<usize, SparseVector>,
}

impl Echelon {
    pub fn new(lead: Lead) -> Self {
        Echelon { lead, pivots: BTreeMap::new() }
    }

    fn lead_of(&self, v: &SparseVector) -> Option<usize> {
        match self.lead {
            Lead::Max => v.max_index(),
            Lead::Min => v.min_index(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Number of pivots whose column lies in `range`.
    pub fn pivots_in(&self, range: std::ops::Range<usize>) -> usize {
        self.pivots.range(range).count()
    }

    /// Reduces `v` until its lead is not a pivot column. Returns the
    /// remainder, which is zero exactly when `v` is in the span.
    pub fn top_reduce(&self, mut v: SparseVector) -> SparseVector {
        while let Some(l) = self.lead_of(&v) {
            match self.pivots.get(&l) {
                Some(p) => {
                    let c = v.get(l);
                    v = v.sub_scaled(&c, p);
                }
                None => break,
            }
        }
        v
    }

    /// Eliminates every pivot column from `v`; the result is the canonical
    /// representative of `v` modulo the span.
    pub fn reduce(&self, mut v: SparseVector) -> SparseVector {
        // walk columns from the lead end; pivot rows only reach further in
        loop {
            let next = match self.lead {
                Lead::Max => v.entries.iter().rev().map(|(i, _)| *i).find(|i| self.pivots.contains_key(i)),
                Lead::Min => v.entries.iter().map(|(i, _)| *i).find(|i| self.pivots.contains_key(i)),
            };
            match next {
                Some(col) => {
                    let c = v.get(col);
                    v = v.sub_scaled(&c, &self.pivots[&col]);
                }
                None => return v,
            }
        }
    }

    /// Adds `v` to the span. Returns the new pivot column, or `None` when
    /// `v` was already in the span.
    pub fn insert(&mut self, v: SparseVector) -> Option<usize> {
        let r = self.top_reduce(v);
        let l = self.lead_of(&r)?;
        let inv = r.get(l).recip().expect("lead is nonzero");
        self.pivots.insert(l, r.scale(&inv));
        Some(l)
    }

    pub fn contains(&self, v: &SparseVector) -> bool {
        self.top_reduce(v.clone()).is_zero()
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVector)> + '_ {
        self.pivots.iter().map(|(k, v)| (*k, v))
    }
}

fn sparsity_order(vectors: &[SparseVector]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..vectors.len()).collect();
    order.sort_by_key(|&i| (vectors[i].nnz(), i));
    order
}

/// Rank of the span of `vectors`, all of whose indices must be `< n_cols`.
pub fn span_dim(vectors: &[SparseVector], n_cols: usize) -> Result<usize> {
    for v in vectors {
        v.check_range(n_cols)?;
    }
    let mut ech = Echelon::new(Lead::Min);
    for i in sparsity_order(vectors) {
        ech.insert(vectors[i].clone());
    }
    Ok(ech.rank())
}

/// Solves `A·x = b` exactly. Returns `None` when the system is inconsistent;
/// when it is underdetermined, free variables are set to zero in the reduced
/// row-echelon form. `b` is indexed by the rows of `A`.
pub fn solve(a: &SparseMatrix, b: &SparseVector) -> Result<Option<SparseVector>> {
    b.check_range(a.n_rows()).map_err(|_| Error::ShapeMismatch(format!("right-hand side longer than {} rows", a.n_rows())))?;
    let rhs_col = a.n_cols();
    let augmented: Vec<SparseVector> = a
        .rows()
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut entries = row.entries().to_vec();
            let br = b.get(r);
            if !br.is_zero() {
                entries.push((rhs_col, br));
            }
            SparseVector { entries }
        })
        .collect();
    let mut ech = Echelon::new(Lead::Min);
    for i in sparsity_order(&augmented) {
        ech.insert(augmented[i].clone());
    }
    if ech.is_pivot(rhs_col) {
        return Ok(None);
    }
    // back-substitute from the right so each pivot row loses its other pivots
    let cols: Vec<usize> = ech.pivot_columns().collect();
    let mut reduced: BTreeMap<usize, SparseVector> = BTreeMap::new();
    for &c in cols.iter().rev() {
        let mut row = ech.pivots[&c].clone();
        loop {
            let next = row.entries.iter().map(|(i, _)| *i).find(|i| *i != c && reduced.contains_key(i));
            match next {
                Some(k) => {
                    let coef = row.get(k);
                    row = row.sub_scaled(&coef, &reduced[&k]);
                }
                None => break,
            }
        }
        reduced.insert(c, row);
    }
    let x = SparseVector::from_pairs(reduced.iter().map(|(c, row)| (*c, row.get(rhs_col))));
    Ok(Some(x))
}

/// An ordered list of labels with its inverse lookup.
#[derive(Debug, Clone)]
pub struct IndexedBasis<L> {
    items: Vec<L>,
    lookup: HashMap<L, usize>,
}

impl<L: Clone + Eq + Hash> IndexedBasis<L> {
    pub fn new() -> Self {
        IndexedBasis { items: Vec::new(), lookup: HashMap::new() }
    }

    pub fn from_items(items: impl IntoIterator<Item = L>) -> Self {
        let mut b = IndexedBasis::new();
        for it in items {
            b.push(it);
        }
        b
    }

    /// Appends `label` unless present; returns its position either way.
    pub fn push(&mut self, label: L) -> usize {
        if let Some(&i) = self.lookup.get(&label) {
            return i;
        }
        let i = self.items.len();
        self.lookup.insert(label.clone(), i);
        self.items.push(label);
        i
    }

    pub fn index_of(&self, label: &L) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    pub fn get(&self, i: usize) -> Option<&L> {
        self.items.get(i)
    }

    pub fn items(&self) -> &[L] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

impl<L: Clone + Eq + Hash> Default for IndexedBasis<L> {
    fn default() -> Self {
        IndexedBasis::new()
    }
}

/// `dim(ambient) − dim(span(sub))`, with `sub` written in ambient coordinates.
pub fn quotient_dims<L: Clone + Eq + Hash>(ambient: &IndexedBasis<L>, sub: &[SparseVector]) -> Result<usize> {
    Ok(ambient.len() - span_dim(sub, ambient.len())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[(i64, i64)]) -> SparseVector {
        SparseVector::from_dense(&xs.iter().map(|&(p, q)| Rational::new(p, q)).collect::<Vec<_>>())
    }

    fn ints(xs: &[i64]) -> SparseVector {
        SparseVector::from_dense(&xs.iter().map(|&p| Rational::from_int(p)).collect::<Vec<_>>())
    }

    #[test]
    fn span_dim_examples() {
        assert_eq!(span_dim(&[ints(&[1, 0]), ints(&[0, 1]), ints(&[1, 1])], 2).unwrap(), 2);
        assert_eq!(span_dim(&[], 2).unwrap(), 0);
        assert_eq!(span_dim(&[v(&[(1, 2), (1, 3)]), ints(&[3, 2])], 2).unwrap(), 1);
        assert_eq!(
            span_dim(&[SparseVector::unit(5)], 3),
            Err(Error::IndexOutOfRange { index: 5, len: 3 })
        );
    }

    #[test]
    fn solve_examples() {
        let id = SparseMatrix::new(vec![SparseVector::unit(0), SparseVector::unit(1)], 2).unwrap();
        let b = v(&[(2, 3), (-1, 1)]);
        assert_eq!(solve(&id, &b).unwrap(), Some(b.clone()));

        let a = SparseMatrix::new(vec![ints(&[1]), ints(&[1])], 1).unwrap();
        assert_eq!(solve(&a, &ints(&[1, 2])).unwrap(), None);

        let a = SparseMatrix::new(vec![ints(&[2, 4]), ints(&[1, 2])], 2).unwrap();
        assert_eq!(solve(&a, &ints(&[2, 1])).unwrap(), Some(ints(&[1, 0])));

        assert!(matches!(solve(&a, &SparseVector::unit(4)), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn quotient_dims_examples() {
        let amb = IndexedBasis::from_items(["a", "b", "c"]);
        assert_eq!(quotient_dims(&amb, &[ints(&[1, 0, 0]), ints(&[0, 1, 0])]).unwrap(), 1);
        assert_eq!(quotient_dims(&amb, &[ints(&[1, 0, 0]), ints(&[0, 1, 0]), ints(&[0, 0, 1])]).unwrap(), 0);
        // F_1 of D_1 has basis (1, x, ∂); sub = {x, ∂ + 1}
        let f1 = IndexedBasis::from_items(["1", "x", "dx"]);
        assert_eq!(quotient_dims(&f1, &[ints(&[0, 1, 0]), ints(&[1, 0, 1])]).unwrap(), 1);
    }

    #[test]
    fn echelon_reduce_is_canonical() {
        let mut e = Echelon::new(Lead::Max);
        e.insert(ints(&[1, 1, 0]));
        e.insert(ints(&[0, 1, 1]));
        let r1 = e.reduce(ints(&[0, 0, 5]));
        let r2 = e.reduce(ints(&[0, 5, 0]).add(&ints(&[0, -5, -5])).add(&ints(&[0, 0, 10])));
        assert_eq!(r1, r2);
        assert_eq!(r1.max_index(), Some(0));
    }
}
