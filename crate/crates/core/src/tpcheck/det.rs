//! Minor determinants over the polynomial ring.
//!
//! The production path is cofactor expansion along the smallest selected row,
//! memoized by `(row mask, col mask)`. Every subminor it needs is itself a
//! minor of the same matrix, so across an exhaustive sweep each determinant is
//! computed once. Fraction-free elimination is kept as an independent check.

use std::sync::Arc;

use dashmap::DashMap;

use crate::poly::Polynomial;
use crate::triangle::Triangle;

use super::minors::MinorSpec;

/// Shared cache of minor determinants of one matrix.
pub struct MinorCache<'a> {
    tri: &'a Triangle,
    cache: DashMap<(u32, u32), Arc<Polynomial>>,
}

impl<'a> MinorCache<'a> {
    pub fn new(tri: &'a Triangle) -> MinorCache<'a> {
        MinorCache {
            tri,
            cache: DashMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.cache.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cache.is_empty()
    }

    /// Drops every cached minor of order below `order`.
    pub fn evict_below(&self, order: u32) {
        self.cache.retain(|&(r, _), _| r.count_ones() >= order);
    }

    pub fn det_spec(&self, spec: &MinorSpec) -> Arc<Polynomial> {
        let (r, c) = spec.masks();
        self.det(r, c)
    }

    pub fn det(&self, rows: u32, cols: u32) -> Arc<Polynomial> {
        debug_assert_eq!(rows.count_ones(), cols.count_ones());
        if rows.count_ones() == 1 {
            let (r, c) = (rows.trailing_zeros() as usize, cols.trailing_zeros() as usize);
            return Arc::new(self.tri.get(r, c).clone());
        }
        if let Some(hit) = self.cache.get(&(rows, cols)) {
            return Arc::clone(hit.value());
        }
        let value = Arc::new(self.expand(rows, cols));
        // concurrent writers compute identical values, first insert wins
        Arc::clone(self.cache.entry((rows, cols)).or_insert(value).value())
    }

    fn expand(&self, rows: u32, cols: u32) -> Polynomial {
        let r0 = rows.trailing_zeros() as usize;
        let rest = rows & (rows - 1);
        let mut acc = Polynomial::zero(self.tri.table());
        let mut c = cols;
        let mut pos = 0;
        while c != 0 {
            let col = c.trailing_zeros() as usize;
            c &= c - 1;
            let entry = self.tri.get(r0, col);
            if !entry.is_zero() {
                let sub = self.det(rest, cols & !(1 << col));
                if !sub.is_zero() {
                    let term = entry * &sub;
                    acc = if pos % 2 == 0 { &acc + &term } else { &acc - &term };
                }
            }
            pos += 1;
        }
        acc
    }
}

/// One-shot determinant of a selected minor via the memoized expansion.
pub fn minor_det(tri: &Triangle, spec: &MinorSpec) -> Polynomial {
    MinorCache::new(tri).det_spec(spec).as_ref().clone()
}

/// Fraction-free (Bareiss) elimination. Each division by the previous pivot
/// is exact over the integral domain `Z[x]`.
pub fn det_bareiss(mut m: Vec<Vec<Polynomial>>, table: &Arc<crate::poly::VariableTable>) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(table);
    }
    let mut sign = 1i64;
    let mut prev = Polynomial::one(table);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return Polynomial::zero(table),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss quotients are exact");
            }
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(sign)
}

/// Bareiss determinant of the submatrix selected by `spec`.
pub fn minor_det_bareiss(tri: &Triangle, spec: &MinorSpec) -> Polynomial {
    let m = spec
        .rows
        .iter()
        .map(|&r| spec.cols.iter().map(|&c| tri.get(r, c).clone()).collect())
        .collect();
    det_bareiss(m, tri.table())
}
