//! Projective geometry PG(d, q): canonical point enumeration, subspaces in
//! reduced row echelon form, and projective maps.
//!
//! Points are normalized so the first nonzero coordinate is 1. The global
//! point index walks blocks by leading-coordinate position: first all points
//! with leading coordinate x_0 = 1 (tail enumerated as a base-q integer,
//! most significant digit first), then those starting (0, 1, ...), and so
//! on down to the final point (0, ..., 0, 1).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::matrix::{vec_add, vec_scale, Mat};

/// Resource cap on enumerated point sets.
pub const MAX_POINTS: u64 = 1 << 24;

#[derive(Clone)]
pub struct ProjSpace {
    pub field: Arc<Field>,
    /// Projective dimension d; vectors have d+1 coordinates.
    pub dim: usize,
    n_points: u64,
    /// block_start[i] = index of the first point with leading position i.
    block_start: Vec<u64>,
    /// q^k for k = 0..=d.
    q_pow: Vec<u64>,
}

impl ProjSpace {
    pub fn new(field: Arc<Field>, dim: usize) -> Result<ProjSpace> {
        let q = field.size() as u64;
        let mut q_pow = vec![1u64; dim + 2];
        for k in 1..dim + 2 {
            q_pow[k] = q_pow[k - 1].saturating_mul(q);
        }
        let n_points = (q_pow[dim + 1] - 1) / (q - 1);
        if n_points > MAX_POINTS {
            return Err(Error::Resource(format!(
                "PG({dim},{q}) has {n_points} points, cap is {MAX_POINTS}"
            )));
        }
        let mut block_start = vec![0u64; dim + 2];
        for i in 0..=dim {
            block_start[i + 1] = block_start[i] + q_pow[dim - i];
        }
        Ok(ProjSpace {
            field,
            dim,
            n_points,
            block_start,
            q_pow,
        })
    }

    pub fn n_points(&self) -> usize {
        self.n_points as usize
    }

    /// Scale so the first nonzero coordinate becomes 1. Panics on zero.
    pub fn normalize(&self, v: &[u16]) -> Vec<u16> {
        let f = &self.field;
        let lead = v.iter().position(|&c| c != 0).expect("zero vector");
        if v[lead] == 1 {
            return v.to_vec();
        }
        vec_scale(f, f.inv(v[lead]), v)
    }

    pub fn index_of(&self, v: &[u16]) -> u32 {
        debug_assert_eq!(v.len(), self.dim + 1);
        let w = self.normalize(v);
        let lead = w.iter().position(|&c| c != 0).unwrap();
        let mut tail = 0u64;
        for &c in &w[lead + 1..] {
            tail = tail * self.field.size() as u64 + c as u64;
        }
        (self.block_start[lead] + tail) as u32
    }

    pub fn coords_of(&self, index: u32) -> Vec<u16> {
        let idx = index as u64;
        assert!(idx < self.n_points, "point index out of range");
        let lead = (0..=self.dim)
            .find(|&i| idx < self.block_start[i + 1])
            .unwrap();
        let mut tail = idx - self.block_start[lead];
        let mut v = vec![0u16; self.dim + 1];
        v[lead] = 1;
        for pos in (lead + 1..=self.dim).rev() {
            v[pos] = (tail % self.field.size() as u64) as u16;
            tail /= self.field.size() as u64;
        }
        v
    }

    pub fn points(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.n_points as u32
    }

    /// Apply an invertible map to a point, re-normalizing.
    pub fn apply_point(&self, m: &Mat, index: u32) -> u32 {
        self.index_of(&m.apply(&self.coords_of(index)))
    }
}

/// A projective subspace held as the unique reduced-echelon basis of its
/// row space; equal subspaces have identical representations.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    pub field: Arc<Field>,
    /// Projective dimension of the ambient space.
    pub ambient: usize,
    rows: Vec<Vec<u16>>,
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} in PG({}))", self.proj_dim(), self.ambient)?;
        for r in &self.rows {
            write!(f, " {r:?}")?;
        }
        Ok(())
    }
}

impl Subspace {
    /// Canonicalize a spanning set (rows need not be independent).
    pub fn from_spanning(field: Arc<Field>, ambient: usize, spanning: &[Vec<u16>]) -> Subspace {
        if spanning.is_empty() {
            return Subspace {
                field,
                ambient,
                rows: Vec::new(),
            };
        }
        let mut m = Mat::from_rows(field.clone(), spanning);
        let pivots = m.rref();
        let rows = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        Subspace {
            field,
            ambient,
            rows,
        }
    }

    pub fn empty(field: Arc<Field>, ambient: usize) -> Subspace {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(field: Arc<Field>, ambient: usize) -> Subspace {
        let rows = (0..=ambient)
            .map(|i| {
                let mut v = vec![0u16; ambient + 1];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            field,
            ambient,
            rows,
        }
    }

    pub fn rows(&self) -> &[Vec<u16>] {
        &self.rows
    }

    /// Vector-space dimension (number of basis rows).
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension; -1 for the empty subspace.
    pub fn proj_dim(&self) -> i64 {
        self.rows.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains_point(&self, v: &[u16]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains_point(r))
    }

    /// Residue of v after elimination against the echelon basis.
    fn reduce(&self, v: &[u16]) -> Vec<u16> {
        let f = &self.field;
        let mut w = v.to_vec();
        for row in &self.rows {
            let pivot = row.iter().position(|&c| c != 0).unwrap();
            if w[pivot] != 0 {
                let factor = w[pivot];
                for j in 0..w.len() {
                    w[j] = f.sub(w[j], f.mul(factor, row[j]));
                }
            }
        }
        w
    }

    /// Span with one extra vector; returns None if v already lies inside.
    pub fn extended(&self, v: &[u16]) -> Option<Subspace> {
        let residue = self.reduce(v);
        if residue.iter().all(|&c| c == 0) {
            return None;
        }
        let mut rows = self.rows.clone();
        rows.push(residue);
        Some(Subspace::from_spanning(
            self.field.clone(),
            self.ambient,
            &rows,
        ))
    }

    pub fn span(&self, other: &Subspace) -> Subspace {
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Subspace::from_spanning(self.field.clone(), self.ambient, &rows)
    }

    /// Intersection, computed from the left kernel of the stacked bases.
    pub fn meet(&self, other: &Subspace) -> Subspace {
        if self.is_empty() || other.is_empty() {
            return Subspace::empty(self.field.clone(), self.ambient);
        }
        let stacked: Vec<Vec<u16>> = self
            .rows
            .iter()
            .chain(other.rows.iter())
            .cloned()
            .collect();
        let m = Mat::from_rows(self.field.clone(), &stacked).transpose();
        let kernel = m.right_kernel();
        let f = &self.field;
        let mut vectors = Vec::new();
        for coeffs in kernel {
            let mut v = vec![0u16; self.ambient + 1];
            for (i, row) in self.rows.iter().enumerate() {
                if coeffs[i] != 0 {
                    v = vec_add(f, &v, &vec_scale(f, coeffs[i], row));
                }
            }
            vectors.push(v);
        }
        Subspace::from_spanning(self.field.clone(), self.ambient, &vectors)
    }

    /// All points of the subspace as global indices.
    pub fn point_indices(&self, space: &ProjSpace) -> Vec<u32> {
        let f = &self.field;
        let r = self.rows.len();
        let mut out = Vec::new();
        // Enumerate normalized coefficient vectors over the basis.
        for lead in 0..r {
            let tail_count = (f.size() as u64).pow((r - lead - 1) as u32);
            for t in 0..tail_count {
                let mut v = self.rows[lead].clone();
                let mut tt = t;
                for pos in (lead + 1..r).rev() {
                    let c = (tt % f.size() as u64) as u16;
                    tt /= f.size() as u64;
                    if c != 0 {
                        v = vec_add(f, &v, &vec_scale(f, c, &self.rows[pos]));
                    }
                }
                out.push(space.index_of(&v));
            }
        }
        out.sort_unstable();
        out
    }

    /// Coordinates of an ambient point with respect to the echelon basis,
    /// or None if the point lies outside.
    pub fn local_coords(&self, v: &[u16]) -> Option<Vec<u16>> {
        let f = &self.field;
        let mut w = v.to_vec();
        let mut coeffs = vec![0u16; self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let pivot = row.iter().position(|&c| c != 0).unwrap();
            if w[pivot] != 0 {
                coeffs[i] = w[pivot];
                let factor = w[pivot];
                for j in 0..w.len() {
                    w[j] = f.sub(w[j], f.mul(factor, row[j]));
                }
            }
        }
        if w.iter().all(|&c| c == 0) {
            Some(coeffs)
        } else {
            None
        }
    }

    /// Rebuild an ambient vector from basis coordinates.
    pub fn global_coords(&self, local: &[u16]) -> Vec<u16> {
        let f = &self.field;
        let mut v = vec![0u16; self.ambient + 1];
        for (c, row) in local.iter().zip(&self.rows) {
            if *c != 0 {
                v = vec_add(f, &v, &vec_scale(f, *c, row));
            }
        }
        v
    }

    /// Image under an invertible map, re-echelonized.
    pub fn apply(&self, m: &Mat) -> Subspace {
        let rows: Vec<Vec<u16>> = self.rows.iter().map(|r| m.apply(r)).collect();
        Subspace::from_spanning(self.field.clone(), self.ambient, &rows)
    }

    /// Compact canonical key (4 bits per coordinate) for hashing.
    pub fn key(&self) -> Vec<u64> {
        debug_assert!(self.field.size() <= 16);
        self.rows
            .iter()
            .map(|row| {
                let mut w = 0u64;
                for (k, &c) in row.iter().enumerate() {
                    w |= (c as u64) << (4 * k);
                }
                w
            })
            .collect()
    }
}

/// Apply an invertible map to a point or subspace, with an invertibility
/// check up front.
pub fn apply_map_checked(m: &Mat, space: &ProjSpace, index: u32) -> Result<u32> {
    if m.inverse().is_none() {
        return Err(Error::Domain("map matrix is singular".into()));
    }
    Ok(space.apply_point(m, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn pg(p: u16, e: u32, d: usize) -> ProjSpace {
        ProjSpace::new(Field::new(p, e).unwrap(), d).unwrap()
    }

    #[test]
    fn point_counts() {
        assert_eq!(pg(2, 1, 2).n_points(), 7);
        assert_eq!(pg(2, 1, 9).n_points(), 1023);
        assert_eq!(pg(2, 2, 5).n_points(), 1365);
    }

    #[test]
    fn first_point_is_e0() {
        let s = pg(2, 1, 2);
        assert_eq!(s.coords_of(0), vec![1, 0, 0]);
        assert_eq!(s.coords_of(6), vec![0, 0, 1]);
    }

    #[test]
    fn index_round_trip() {
        for (p, e, d) in [(2u16, 1u32, 9usize), (2, 2, 4), (2, 2, 5), (3, 1, 4)] {
            let s = pg(p, e, d);
            for i in s.points() {
                let v = s.coords_of(i);
                assert_eq!(s.index_of(&v), i);
                assert_eq!(v.iter().find(|&&c| c != 0), Some(&1));
            }
        }
    }

    #[test]
    fn normalization_idempotent_and_scale_invariant() {
        let s = pg(2, 2, 3);
        let f = &s.field;
        for i in s.points().step_by(7) {
            let v = s.coords_of(i);
            for c in 1..f.size() as u16 {
                let scaled = vec_scale(f, c, &v);
                assert_eq!(s.index_of(&scaled), i);
            }
        }
    }

    fn random_subspace(s: &ProjSpace, rng: &mut StdRng, rank: usize) -> Subspace {
        let rows: Vec<Vec<u16>> = (0..rank)
            .map(|_| {
                (0..=s.dim)
                    .map(|_| rng.random_range(0..s.field.size()) as u16)
                    .collect()
            })
            .collect();
        Subspace::from_spanning(s.field.clone(), s.dim, &rows)
    }

    #[test]
    fn span_point_idempotent() {
        let s = pg(2, 1, 4);
        let p = Subspace::from_spanning(s.field.clone(), 4, &[vec![1, 0, 1, 0, 0]]);
        assert_eq!(p.span(&p), p);
    }

    #[test]
    fn hyperplane_meets_line_in_point() {
        let s = pg(2, 1, 3);
        // Hyperplane x0 = 0, line through (1,0,0,0) and (0,1,0,0).
        let h = Subspace::from_spanning(
            s.field.clone(),
            3,
            &[vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
        );
        let l = Subspace::from_spanning(s.field.clone(), 3, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert!(!h.contains(&l));
        let m = h.meet(&l);
        assert_eq!(m.proj_dim(), 0);
    }

    #[test]
    fn modular_law_random_pairs() {
        let s = pg(2, 1, 9);
        let mut rng = StdRng::seed_from_u64(0x706f6c61);
        for _ in 0..1000 {
            let ra = rng.random_range(1..=5);
            let rb = rng.random_range(1..=5);
            let a = random_subspace(&s, &mut rng, ra);
            let b = random_subspace(&s, &mut rng, rb);
            let span = a.span(&b);
            let meet = a.meet(&b);
            assert_eq!(
                span.proj_dim() + meet.proj_dim(),
                a.proj_dim() + b.proj_dim(),
                "dimension formula failed"
            );
            assert!(span.contains(&a) && span.contains(&b));
            assert!(a.contains(&meet) && b.contains(&meet));
        }
    }

    #[test]
    fn canonical_form_unique_for_row_equivalent_bases() {
        let s = pg(2, 1, 9);
        let f = &s.field;
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..1000 {
            let rank = rng.random_range(1..=6);
            let sub = random_subspace(&s, &mut rng, rank);
            if sub.is_empty() {
                continue;
            }
            // Random invertible recombination of the basis rows.
            let r = sub.rank();
            let recombined: Vec<Vec<u16>> = (0..3 * r)
                .map(|_| {
                    let mut v = vec![0u16; s.dim + 1];
                    for row in sub.rows() {
                        if rng.random_range(0..2) == 1 {
                            v = vec_add(f, &v, row);
                        }
                    }
                    v
                })
                .filter(|v| v.iter().any(|&c| c != 0))
                .collect();
            let rebuilt = Subspace::from_spanning(s.field.clone(), s.dim, &recombined);
            if rebuilt.rank() == sub.rank() {
                assert_eq!(rebuilt, sub);
            } else {
                assert!(sub.contains(&rebuilt));
            }
        }
    }

    #[test]
    fn apply_map_composition() {
        let s = pg(2, 1, 4);
        let f = s.field.clone();
        let mut rng = StdRng::seed_from_u64(7);
        let random_invertible = |rng: &mut StdRng| loop {
            let rows: Vec<Vec<u16>> = (0..5)
                .map(|_| (0..5).map(|_| rng.random_range(0..2) as u16).collect())
                .collect();
            let m = Mat::from_rows(f.clone(), &rows);
            if m.inverse().is_some() {
                return m;
            }
        };
        for _ in 0..50 {
            let m1 = random_invertible(&mut rng);
            let m2 = random_invertible(&mut rng);
            let prod = m2.mul(&m1);
            for i in s.points() {
                assert_eq!(
                    s.apply_point(&m2, s.apply_point(&m1, i)),
                    s.apply_point(&prod, i)
                );
            }
        }
    }

    #[test]
    fn identity_fixes_everything() {
        let s = pg(2, 2, 3);
        let id = Mat::identity(s.field.clone(), 4);
        for i in s.points() {
            assert_eq!(s.apply_point(&id, i), i);
        }
    }

    #[test]
    fn singular_map_rejected() {
        let s = pg(2, 1, 2);
        let m = Mat::zero(s.field.clone(), 3, 3);
        assert!(apply_map_checked(&m, &s, 0).is_err());
    }

    #[test]
    fn resource_cap_enforced() {
        let f = Field::new(2, 2).unwrap();
        assert!(matches!(
            ProjSpace::new(f, 13),
            Err(crate::error::Error::Resource(_))
        ));
    }

    #[test]
    fn local_coords_round_trip() {
        let s = pg(2, 1, 5);
        let sub = Subspace::from_spanning(
            s.field.clone(),
            5,
            &[vec![1, 0, 1, 0, 1, 0], vec![0, 1, 1, 0, 0, 1], vec![0, 0, 0, 1, 1, 1]],
        );
        for idx in sub.point_indices(&s) {
            let v = s.coords_of(idx);
            let local = sub.local_coords(&v).expect("point of the subspace");
            let back = sub.global_coords(&local);
            assert_eq!(s.index_of(&back), idx);
        }
        assert_eq!(sub.local_coords(&[0, 0, 0, 0, 0, 1]), None);
    }
}
