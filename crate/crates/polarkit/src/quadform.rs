//! Quadratic and alternating bilinear forms: evaluation, polarization,
//! classification into elliptic / hyperbolic / parabolic / cone, nucleus and
//! perp computations, the canonical coordinate frames used throughout, and
//! the pencil of quadrics sharing a hyperplane section together with the
//! shear maps that permute its members.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::Field;
use crate::matrix::Mat;
use crate::projective::{ProjSpace, Subspace};

/// A quadratic form given by its upper-triangular Gram data:
/// Q(x) = sum over i <= j of upper[i][j] * x_i * x_j.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    pub field: Arc<Field>,
    /// Projective dimension of the ambient space.
    pub dim: usize,
    upper: Vec<Vec<u16>>,
    /// Nonzero terms (i, j, coefficient), cached for fast evaluation.
    terms: Vec<(usize, usize, u16)>,
}

impl std::fmt::Debug for QuadraticForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuadraticForm(PG({},{}))", self.dim, self.field.size())?;
        for &(i, j, c) in &self.terms {
            write!(f, " +{c}*x{i}x{j}")?;
        }
        Ok(())
    }
}

impl QuadraticForm {
    pub fn from_upper(field: Arc<Field>, upper: Vec<Vec<u16>>) -> QuadraticForm {
        let dim = upper.len() - 1;
        let mut terms = Vec::new();
        for (i, row) in upper.iter().enumerate() {
            assert_eq!(row.len(), upper.len(), "Gram data must be square");
            for (j, &c) in row.iter().enumerate() {
                assert!(j >= i || c == 0, "Gram data must be upper triangular");
                if c != 0 {
                    terms.push((i, j, c));
                }
            }
        }
        QuadraticForm {
            field,
            dim,
            upper,
            terms,
        }
    }

    pub fn from_terms(field: Arc<Field>, dim: usize, terms: &[(usize, usize, u16)]) -> QuadraticForm {
        let mut upper = vec![vec![0u16; dim + 1]; dim + 1];
        for &(i, j, c) in terms {
            let (i, j) = if i <= j { (i, j) } else { (j, i) };
            upper[i][j] = field.add(upper[i][j], c);
        }
        Self::from_upper(field, upper)
    }

    pub fn upper(&self) -> &[Vec<u16>] {
        &self.upper
    }

    #[inline]
    pub fn eval(&self, x: &[u16]) -> u16 {
        let f = &self.field;
        let mut acc = 0u16;
        for &(i, j, c) in &self.terms {
            let prod = f.mul(x[i], x[j]);
            if prod != 0 {
                acc = f.add(acc, f.mul(c, prod));
            }
        }
        acc
    }

    /// Polarization B(x, y) = Q(x + y) - Q(x) - Q(y); alternating in
    /// characteristic 2.
    pub fn polarize(&self) -> BilinearForm {
        let f = &self.field;
        let n = self.dim + 1;
        let mut gram = vec![vec![0u16; n]; n];
        for &(i, j, c) in &self.terms {
            if i == j {
                // squares polarize to 2c x_i y_i
                let two_c = f.add(c, c);
                gram[i][i] = f.add(gram[i][i], two_c);
            } else {
                gram[i][j] = f.add(gram[i][j], c);
                gram[j][i] = f.add(gram[j][i], c);
            }
        }
        BilinearForm::new(self.field.clone(), gram)
    }

    /// The composed form Q(M x), upper-normalized.
    pub fn compose(&self, m: &Mat) -> QuadraticForm {
        let f = &self.field;
        let n = self.dim + 1;
        assert_eq!(m.rows, n);
        assert_eq!(m.cols, n);
        // V = M^T U M, then fold to upper triangular.
        let u = Mat::from_rows(self.field.clone(), &self.upper);
        let v = m.transpose().mul(&u).mul(m);
        let mut upper = vec![vec![0u16; n]; n];
        for i in 0..n {
            upper[i][i] = v[(i, i)];
            for j in i + 1..n {
                upper[i][j] = f.add(v[(i, j)], v[(j, i)]);
            }
        }
        QuadraticForm::from_upper(self.field.clone(), upper)
    }

    pub fn is_preserved_by(&self, m: &Mat) -> bool {
        self.compose(m) == *self
    }

    /// Restriction to a subspace, expressed in its basis coordinates.
    pub fn restrict(&self, sub: &Subspace) -> QuadraticForm {
        let b = self.polarize();
        let rows = sub.rows();
        let r = rows.len();
        let mut upper = vec![vec![0u16; r]; r];
        for i in 0..r {
            upper[i][i] = self.eval(&rows[i]);
            for j in i + 1..r {
                upper[i][j] = b.eval(&rows[i], &rows[j]);
            }
        }
        QuadraticForm::from_upper(self.field.clone(), upper)
    }
}

/// A symmetric bilinear form; alternating (zero diagonal) when the
/// characteristic is 2.
#[derive(Clone, PartialEq, Eq)]
pub struct BilinearForm {
    pub field: Arc<Field>,
    pub dim: usize,
    gram: Vec<Vec<u16>>,
}

impl std::fmt::Debug for BilinearForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BilinearForm(PG({},{}))", self.dim, self.field.size())
    }
}

impl BilinearForm {
    pub fn new(field: Arc<Field>, gram: Vec<Vec<u16>>) -> BilinearForm {
        let dim = gram.len() - 1;
        for (i, row) in gram.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                debug_assert_eq!(c, gram[j][i], "Gram matrix must be symmetric");
                let _ = (i, c);
            }
        }
        BilinearForm { field, dim, gram }
    }

    pub fn gram(&self) -> &[Vec<u16>] {
        &self.gram
    }

    pub fn gram_mat(&self) -> Mat {
        Mat::from_rows(self.field.clone(), &self.gram)
    }

    #[inline]
    pub fn eval(&self, x: &[u16], y: &[u16]) -> u16 {
        let f = &self.field;
        let mut acc = 0u16;
        for (i, row) in self.gram.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let mut inner = 0u16;
            for (j, &c) in row.iter().enumerate() {
                if c != 0 && y[j] != 0 {
                    inner = f.add(inner, f.mul(c, y[j]));
                }
            }
            acc = f.add(acc, f.mul(x[i], inner));
        }
        acc
    }

    pub fn is_alternating(&self) -> bool {
        (0..=self.dim).all(|i| self.gram[i][i] == 0)
    }

    pub fn rank(&self) -> usize {
        self.gram_mat().rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rank() == self.dim + 1
    }

    /// Radical of the bilinear form as a subspace.
    pub fn radical(&self) -> Subspace {
        let kernel = self.gram_mat().right_kernel();
        Subspace::from_spanning(self.field.clone(), self.dim, &kernel)
    }
}

/// Family of a quadric. A cone records the family of its nondegenerate
/// base; a base of rank zero (quadric equal to its vertex) is None.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Elliptic,
    Hyperbolic,
    Parabolic,
    Cone { base: Option<Box<Family>> },
}

impl Family {
    pub fn label(&self) -> String {
        match self {
            Family::Elliptic => "elliptic".into(),
            Family::Hyperbolic => "hyperbolic".into(),
            Family::Parabolic => "parabolic".into(),
            Family::Cone { base: Some(b) } => format!("cone({})", b.label()),
            Family::Cone { base: None } => "cone(subspace)".into(),
        }
    }
}

/// Classification data for a quadric: its singular locus (the cone vertex,
/// empty for nondegenerate quadrics), the vector-space dimension of a
/// maximal totally singular subspace, and the family.
#[derive(Clone, Debug)]
pub struct QuadricClass {
    pub radical: Subspace,
    pub witt_index: usize,
    pub family: Family,
}

fn family_of_rank(rank: usize, witt: usize) -> Option<Family> {
    if rank == 0 {
        return None;
    }
    if rank % 2 == 1 {
        Some(Family::Parabolic)
    } else if witt == rank / 2 {
        Some(Family::Hyperbolic)
    } else {
        Some(Family::Elliptic)
    }
}

/// Classify a quadric by computing its singular locus and building a
/// maximal totally singular subspace by greedy extension.
pub fn classify_quadric(q: &QuadraticForm) -> Result<QuadricClass> {
    let field = q.field.clone();
    let space = ProjSpace::new(field.clone(), q.dim)?;
    let b = q.polarize();
    let rad_b = b.radical();

    // Singular locus: points of the bilinear radical where Q vanishes.
    // In characteristic 2, x -> sqrt(Q(x)) is linear on the radical, so the
    // locus is the kernel of that functional; in odd characteristic Q
    // vanishes on the whole radical.
    let vertex = if rad_b.is_empty() {
        Subspace::empty(field.clone(), q.dim)
    } else if field.p() == 2 {
        let vals: Vec<u16> = rad_b.rows().iter().map(|r| field.sqrt(q.eval(r))).collect();
        let m = Mat::from_rows(field.clone(), &[vals]);
        let kernel = m.right_kernel();
        let vectors: Vec<Vec<u16>> = kernel
            .iter()
            .map(|coeffs| rad_b.global_coords(coeffs))
            .collect();
        Subspace::from_spanning(field.clone(), q.dim, &vectors)
    } else {
        rad_b.clone()
    };

    // Greedy maximal totally singular subspace through the vertex.
    let mut ts = vertex.clone();
    loop {
        let mut extended = false;
        for idx in space.points() {
            let v = space.coords_of(idx);
            if q.eval(&v) != 0 {
                continue;
            }
            if ts.rows().iter().any(|r| b.eval(r, &v) != 0) {
                continue;
            }
            if let Some(bigger) = ts.extended(&v) {
                ts = bigger;
                extended = true;
                break;
            }
        }
        if !extended {
            break;
        }
    }

    let witt_index = ts.rank();
    let k = vertex.rank();
    let n = q.dim + 1;
    let family = if k == 0 {
        family_of_rank(n, witt_index)
            .ok_or_else(|| Error::Internal("zero-dimensional ambient".into()))?
    } else {
        let base = family_of_rank(n - k, witt_index - k).map(Box::new);
        Family::Cone { base }
    };

    Ok(QuadricClass {
        radical: vertex,
        witt_index,
        family,
    })
}

/// Nucleus of a parabolic quadric in even characteristic: the unique point
/// spanning the radical of the polarized form, off the quadric.
pub fn nucleus_of(q: &QuadraticForm) -> Result<Vec<u16>> {
    if q.field.p() != 2 {
        return Err(Error::Domain("nucleus requires characteristic 2".into()));
    }
    let rad = q.polarize().radical();
    if rad.rank() != 1 {
        return Err(Error::Domain(format!(
            "form is not parabolic: bilinear radical has rank {}",
            rad.rank()
        )));
    }
    let n = rad.rows()[0].clone();
    if q.eval(&n) == 0 {
        return Err(Error::Domain(
            "radical point lies on the quadric; form is degenerate, not parabolic".into(),
        ));
    }
    let space = ProjSpace::new(q.field.clone(), q.dim)?;
    Ok(space.normalize(&n))
}

/// Polar subspace S^perp with respect to a nondegenerate bilinear form.
pub fn perp_of(s: &Subspace, b: &BilinearForm) -> Result<Subspace> {
    if !b.is_nondegenerate() {
        return Err(Error::Domain("bilinear form is degenerate".into()));
    }
    if s.is_empty() {
        return Ok(Subspace::full(b.field.clone(), b.dim));
    }
    let gram = b.gram_mat();
    let rows: Vec<Vec<u16>> = s.rows().iter().map(|r| gram.apply(r)).collect();
    let m = Mat::from_rows(b.field.clone(), &rows);
    let kernel = m.right_kernel();
    Ok(Subspace::from_spanning(b.field.clone(), b.dim, &kernel))
}

/// The coordinate frame used by every construction in this crate: on
/// PG(2k+1, q) with coordinates (x0, y1..y2k, z),
///
///   F = x0^2 + x0 z + delta z^2 + (y1 y2 + y3 y4 + ... + y_{2k-1} y_{2k}).
///
/// Its z = 0 section is parabolic with nucleus (1, 0, ..., 0), and the maps
/// x0 -> x0 + c z fix the section pointwise while permuting the members of
/// the pencil F + s z^2.
#[derive(Clone)]
pub struct EllipticFrame {
    pub field: Arc<Field>,
    /// Number of hyperbolic pairs in the y block.
    pub y_pairs: usize,
    pub delta: u16,
    pub form: QuadraticForm,
    pub bilinear: BilinearForm,
    /// The hyperplane z = 0.
    pub sigma: Subspace,
    /// Nucleus of the z = 0 section, equal to sigma's pole.
    pub nucleus: Vec<u16>,
}

impl EllipticFrame {
    pub fn ambient_dim(&self) -> usize {
        2 * self.y_pairs + 1
    }

    pub fn z_index(&self) -> usize {
        2 * self.y_pairs + 1
    }

    /// The quadratic form restricted to the y block, on its own 2k
    /// coordinates.
    pub fn y_form(&self) -> QuadraticForm {
        let k = self.y_pairs;
        let terms: Vec<(usize, usize, u16)> =
            (0..k).map(|i| (2 * i, 2 * i + 1, 1u16)).collect();
        QuadraticForm::from_terms(self.field.clone(), 2 * k - 1, &terms)
    }

    /// The pencil member F + s z^2.
    pub fn member(&self, s: u16) -> QuadraticForm {
        let z = self.z_index();
        let f = &self.field;
        let mut upper = self.form.upper().to_vec();
        upper[z][z] = f.add(upper[z][z], s);
        QuadraticForm::from_upper(self.field.clone(), upper)
    }

    /// The degenerate pencil member z^2.
    pub fn degenerate_member(&self) -> QuadraticForm {
        let z = self.z_index();
        QuadraticForm::from_terms(self.field.clone(), self.ambient_dim(), &[(z, z, 1)])
    }

    /// The map x0 -> x0 + c z, all other coordinates fixed. Satisfies
    /// F o shear(c) = F + (c^2 + c) z^2, fixes sigma pointwise and the
    /// nucleus.
    pub fn shear(&self, c: u16) -> Mat {
        let n = self.ambient_dim() + 1;
        let mut m = Mat::identity(self.field.clone(), n);
        m[(0, self.z_index())] = c;
        m
    }

    /// The involution fixing sigma pointwise and the nucleus linewise.
    pub fn tau(&self) -> Mat {
        self.shear(1)
    }
}

/// Build the construction frame on PG(2k+1, q).
pub fn construction_frame(field: Arc<Field>, y_pairs: usize, delta: u16) -> Result<EllipticFrame> {
    if field.p() != 2 {
        return Err(Error::Domain("construction frame requires q even".into()));
    }
    if field.abs_trace(delta) != 1 {
        return Err(Error::Domain(
            "delta must have absolute trace 1 for an elliptic frame".into(),
        ));
    }
    if y_pairs == 0 {
        return Err(Error::InvalidParameter("need at least one y pair".into()));
    }
    let k = y_pairs;
    let dim = 2 * k + 1;
    let z = dim;
    let mut terms: Vec<(usize, usize, u16)> = vec![(0, 0, 1), (0, z, 1), (z, z, delta)];
    for i in 0..k {
        terms.push((2 * i + 1, 2 * i + 2, 1));
    }
    let form = QuadraticForm::from_terms(field.clone(), dim, &terms);
    let bilinear = form.polarize();
    let sigma_rows: Vec<Vec<u16>> = (0..dim)
        .map(|i| {
            let mut v = vec![0u16; dim + 1];
            v[i] = 1;
            v
        })
        .collect();
    let sigma = Subspace::from_spanning(field.clone(), dim, &sigma_rows);
    let mut nucleus = vec![0u16; dim + 1];
    nucleus[0] = 1;
    Ok(EllipticFrame {
        field,
        y_pairs,
        delta,
        form,
        bilinear,
        sigma,
        nucleus,
    })
}

/// The elliptic quadric in the layout
/// x0 x_{2n+1} + x1 x_{2n} + ... + x_{n-1} x_{n+2} + x_n^2 + x_n x_{n+1}
/// + delta x_{n+1}^2 on PG(2n+1, q).
pub fn paper_elliptic(field: Arc<Field>, n: usize, delta: u16) -> QuadraticForm {
    let dim = 2 * n + 1;
    let mut terms: Vec<(usize, usize, u16)> = (0..n).map(|i| (i, dim - i, 1u16)).collect();
    terms.push((n, n, 1));
    terms.push((n, n + 1, 1));
    terms.push((n + 1, n + 1, delta));
    QuadraticForm::from_terms(field, dim, &terms)
}

/// The hyperbolic companion: same layout with the delta term removed.
pub fn paper_hyperbolic(field: Arc<Field>, n: usize) -> QuadraticForm {
    let dim = 2 * n + 1;
    let mut terms: Vec<(usize, usize, u16)> = (0..n).map(|i| (i, dim - i, 1u16)).collect();
    terms.push((n, n, 1));
    terms.push((n, n + 1, 1));
    QuadraticForm::from_terms(field, dim, &terms)
}

/// Standard parabolic form x0^2 + y1 y2 + ... + y_{2m-1} y_{2m} on PG(2m, q).
pub fn parabolic_form(field: Arc<Field>, m: usize) -> QuadraticForm {
    let mut terms: Vec<(usize, usize, u16)> = vec![(0, 0, 1)];
    for i in 0..m {
        terms.push((2 * i + 1, 2 * i + 2, 1));
    }
    QuadraticForm::from_terms(field, 2 * m, &terms)
}

/// One member of the pencil through the frame quadric and its hyperplane
/// section.
pub struct PencilMember {
    /// Pencil parameter; None marks the degenerate member z^2.
    pub s: Option<u16>,
    pub form: QuadraticForm,
    pub class: QuadricClass,
}

/// All members of the pencil {F + s z^2} plus the degenerate member, with
/// their classifications. For q even there are exactly q/2 elliptic and
/// q/2 hyperbolic members: F + s z^2 is elliptic iff Tr(delta + s) = 1.
pub fn pencil_members(frame: &EllipticFrame) -> Result<Vec<PencilMember>> {
    let f = &frame.field;
    let mut out = Vec::new();
    for s in f.elements() {
        let form = frame.member(s);
        let class = classify_quadric(&form)?;
        out.push(PencilMember {
            s: Some(s),
            form,
            class,
        });
    }
    let degen = frame.degenerate_member();
    let class = classify_quadric(&degen)?;
    out.push(PencilMember {
        s: None,
        form: degen,
        class,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn gf(p: u16, e: u32) -> Arc<Field> {
        Field::new(p, e).unwrap()
    }

    fn enumerate_zeros(q: &QuadraticForm) -> Vec<u32> {
        let space = ProjSpace::new(q.field.clone(), q.dim).unwrap();
        space
            .points()
            .filter(|&i| q.eval(&space.coords_of(i)) == 0)
            .collect()
    }

    #[test]
    fn polarization_basics() {
        let f = gf(2, 1);
        // Q = x0 x1 on PG(1,2)
        let q = QuadraticForm::from_terms(f.clone(), 1, &[(0, 1, 1)]);
        let b = q.polarize();
        assert_eq!(b.eval(&[1, 0], &[0, 1]), 1);
        // Q = x0^2 polarizes to zero in characteristic 2.
        let sq = QuadraticForm::from_terms(f.clone(), 1, &[(0, 0, 1)]);
        assert!(sq.polarize().gram().iter().flatten().all(|&c| c == 0));
    }

    #[test]
    fn elliptic_frame_polarization_nondegenerate() {
        let f = gf(2, 1);
        let frame = construction_frame(f, 4, 1).unwrap();
        let b = &frame.bilinear;
        assert!(b.is_alternating());
        assert_eq!(b.rank(), 10);
    }

    #[test]
    fn polarization_identity_random() {
        let f = gf(2, 2);
        let q = paper_elliptic(f.clone(), 2, f.find_delta());
        let b = q.polarize();
        let space = ProjSpace::new(f.clone(), 5).unwrap();
        // char 2: B(x,y) = Q(x+y) + Q(x) + Q(y)
        for step in [1usize, 7, 13, 29] {
            for i in space.points().step_by(step).take(40) {
                let x = space.coords_of(i);
                for j in space.points().step_by(step + 3).take(40) {
                    let y = space.coords_of(j);
                    let sum: Vec<u16> =
                        x.iter().zip(&y).map(|(&a, &c)| f.add(a, c)).collect();
                    let lhs = b.eval(&x, &y);
                    let rhs = f.add(f.add(q.eval(&sum), q.eval(&x)), q.eval(&y));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn classify_paper_forms() {
        let f2 = gf(2, 1);
        let e = paper_elliptic(f2.clone(), 4, 1);
        let c = classify_quadric(&e).unwrap();
        assert_eq!(c.family, Family::Elliptic);
        assert_eq!(c.witt_index, 4);
        assert!(c.radical.is_empty());

        let h = QuadraticForm::from_terms(f2.clone(), 3, &[(0, 3, 1), (1, 2, 1)]);
        let c = classify_quadric(&h).unwrap();
        assert_eq!(c.family, Family::Hyperbolic);
        assert_eq!(c.witt_index, 2);

        let hyp = paper_hyperbolic(f2.clone(), 4);
        let c = classify_quadric(&hyp).unwrap();
        assert_eq!(c.family, Family::Hyperbolic);
        assert_eq!(c.witt_index, 5);
    }

    #[test]
    fn degenerate_pencil_member_is_sigma() {
        let f = gf(2, 1);
        let frame = construction_frame(f.clone(), 4, 1).unwrap();
        let degen = frame.degenerate_member();
        let class = classify_quadric(&degen).unwrap();
        // Singular locus equals the hyperplane z = 0, and the zero set
        // coincides with it.
        assert_eq!(class.radical, frame.sigma);
        assert!(matches!(class.family, Family::Cone { .. }));
        let zeros = enumerate_zeros(&degen);
        let space = ProjSpace::new(f, frame.ambient_dim()).unwrap();
        let sigma_points = frame.sigma.point_indices(&space);
        assert_eq!(zeros, sigma_points);
    }

    #[test]
    fn point_counts_match_families() {
        let f = gf(2, 1);
        let elliptic = paper_elliptic(f.clone(), 4, 1);
        assert_eq!(enumerate_zeros(&elliptic).len(), 495);
        let hyperbolic = paper_hyperbolic(f.clone(), 4);
        assert_eq!(enumerate_zeros(&hyperbolic).len(), 527);
        let frame = construction_frame(f.clone(), 4, 1).unwrap();
        let section = frame.form.restrict(&frame.sigma);
        assert_eq!(enumerate_zeros(&section).len(), 255);
        let class = classify_quadric(&section).unwrap();
        assert_eq!(class.family, Family::Parabolic);
    }

    #[test]
    fn construction_frame_section_nucleus() {
        let f = gf(2, 1);
        let frame = construction_frame(f.clone(), 4, 1).unwrap();
        let c = classify_quadric(&frame.form).unwrap();
        assert_eq!(c.family, Family::Elliptic);
        assert_eq!(c.witt_index, 4);
        // The z = 0 section in its own coordinates is parabolic with
        // nucleus (1, 0, ..., 0).
        let section = frame.form.restrict(&frame.sigma);
        let n = nucleus_of(&section).unwrap();
        let mut expected = vec![0u16; 9];
        expected[0] = 1;
        assert_eq!(n, expected);
    }

    #[test]
    fn nucleus_standard_parabolic() {
        let f = gf(2, 1);
        let q = parabolic_form(f.clone(), 2); // Q(4,2)
        let n = nucleus_of(&q).unwrap();
        assert_eq!(n, vec![1, 0, 0, 0, 0]);
        // Every tangent hyperplane P^perp passes through N.
        let b = q.polarize();
        let space = ProjSpace::new(f.clone(), 4).unwrap();
        let mut count = 0;
        for i in space.points() {
            let p = space.coords_of(i);
            if q.eval(&p) != 0 {
                continue;
            }
            count += 1;
            assert_eq!(b.eval(&p, &n), 0, "tangent hyperplane misses the nucleus");
        }
        assert_eq!(count, 15);
    }

    #[test]
    fn nucleus_of_conic_by_tangent_lines() {
        // Conic x2^2 + x0 x2... the stated conic is X2^2 + X1 X3 in 1-based
        // coordinates, i.e. x1^2 + x0 x2 here.
        let f = gf(2, 1);
        let q = QuadraticForm::from_terms(f.clone(), 2, &[(1, 1, 1), (0, 2, 1)]);
        let n = nucleus_of(&q).unwrap();
        assert_eq!(n, vec![0, 1, 0]);

        // Oracle: intersect the three tangent lines found by brute force.
        let space = ProjSpace::new(f.clone(), 2).unwrap();
        let conic: Vec<u32> = enumerate_zeros(&q);
        assert_eq!(conic.len(), 3);
        let mut tangents: Vec<Subspace> = Vec::new();
        for i in space.points() {
            for j in space.points() {
                if j <= i {
                    continue;
                }
                let line = Subspace::from_spanning(
                    f.clone(),
                    2,
                    &[space.coords_of(i), space.coords_of(j)],
                );
                let on = line
                    .point_indices(&space)
                    .iter()
                    .filter(|p| conic.contains(p))
                    .count();
                if on == 1 && !tangents.contains(&line) {
                    tangents.push(line);
                }
            }
        }
        assert_eq!(tangents.len(), 3);
        let mut common = tangents[0].clone();
        for t in &tangents[1..] {
            common = common.meet(t);
        }
        assert_eq!(common.proj_dim(), 0);
        assert_eq!(space.normalize(&common.rows()[0]), n);
    }

    #[test]
    fn perp_examples() {
        let f = gf(2, 1);
        let frame = construction_frame(f.clone(), 4, 1).unwrap();
        let b = &frame.bilinear;
        // Perp of the full space is empty.
        let full = Subspace::full(f.clone(), 9);
        assert!(perp_of(&full, b).unwrap().is_empty());
        // N^perp = sigma for the construction frame.
        let n_sub = Subspace::from_spanning(f.clone(), 9, &[frame.nucleus.clone()]);
        assert_eq!(perp_of(&n_sub, b).unwrap(), frame.sigma);
    }

    #[test]
    fn perp_involution_random() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let f = gf(2, 1);
        let frame = construction_frame(f.clone(), 4, 1).unwrap();
        let b = &frame.bilinear;
        let mut rng = StdRng::seed_from_u64(99);
        for _ in 0..100 {
            let rank = rng.random_range(1..=5);
            let rows: Vec<Vec<u16>> = (0..rank)
                .map(|_| (0..10).map(|_| rng.random_range(0..2) as u16).collect())
                .collect();
            let s = Subspace::from_spanning(f.clone(), 9, &rows);
            if s.is_empty() {
                continue;
            }
            let perp = perp_of(&s, b).unwrap();
            // dim S + dim S^perp = d - 1 projectively.
            assert_eq!(perp.proj_dim(), 8 - s.proj_dim());
            assert_eq!(perp_of(&perp, b).unwrap(), s);
            if s.proj_dim() == 2 {
                assert_eq!(perp.proj_dim(), 6);
            }
        }
    }

    #[test]
    fn pencil_census_q2() {
        let f = gf(2, 1);
        let frame = construction_frame(f.clone(), 1, 1).unwrap();
        let members = pencil_members(&frame).unwrap();
        let elliptic = members
            .iter()
            .filter(|m| m.family_is(Family::Elliptic))
            .count();
        let hyperbolic = members
            .iter()
            .filter(|m| m.family_is(Family::Hyperbolic))
            .count();
        let degenerate = members.iter().filter(|m| m.s.is_none()).count();
        assert_eq!((elliptic, hyperbolic, degenerate), (1, 1, 1));
    }

    impl PencilMember {
        fn family_is(&self, fam: Family) -> bool {
            self.s.is_some() && self.class.family == fam
        }
    }

    #[test]
    fn pencil_census_q4_and_trace_rule() {
        let f = gf(2, 2);
        let delta = f.find_delta();
        let frame = construction_frame(f.clone(), 1, delta).unwrap();
        let members = pencil_members(&frame).unwrap();
        let mut census = (0, 0, 0);
        for m in &members {
            match m.s {
                None => census.2 += 1,
                Some(s) => {
                    let expected_elliptic = f.abs_trace(f.add(delta, s)) == 1;
                    assert_eq!(
                        m.class.family == Family::Elliptic,
                        expected_elliptic,
                        "member s={s} misclassified"
                    );
                    if m.class.family == Family::Elliptic {
                        census.0 += 1;
                    } else {
                        census.1 += 1;
                    }
                }
            }
        }
        assert_eq!(census, (2, 2, 1));
    }

    #[test]
    fn pencil_members_share_section_and_polarization() {
        let f = gf(2, 2);
        let delta = f.find_delta();
        let frame = construction_frame(f.clone(), 1, delta).unwrap();
        let base_section = frame.form.restrict(&frame.sigma);
        let base_polar = frame.form.polarize();
        for s in f.elements() {
            let m = frame.member(s);
            assert_eq!(m.restrict(&frame.sigma), base_section);
            assert_eq!(m.polarize(), base_polar);
        }
    }

    #[test]
    fn pencil_partitions_off_points() {
        for (p, e) in [(2u16, 1u32), (2, 2)] {
            let f = gf(p, e);
            let delta = f.find_delta();
            let frame = construction_frame(f.clone(), 1, delta).unwrap();
            let space = ProjSpace::new(f.clone(), frame.ambient_dim()).unwrap();
            let z = frame.z_index();
            for i in space.points() {
                let v = space.coords_of(i);
                if v[z] == 0 {
                    continue;
                }
                let on_count = f
                    .elements()
                    .filter(|&s| frame.member(s).eval(&v) == 0)
                    .count();
                assert_eq!(on_count, 1, "off point must lie on exactly one member");
                assert_ne!(frame.degenerate_member().eval(&v), 0);
            }
        }
    }

    #[test]
    fn shear_properties() {
        let f = gf(2, 2);
        let delta = f.find_delta();
        let frame = construction_frame(f.clone(), 1, delta).unwrap();
        assert_eq!(frame.shear(0), Mat::identity(f.clone(), 4));
        // Composition is additive in the parameter.
        for c1 in f.elements() {
            for c2 in f.elements() {
                assert_eq!(
                    frame.shear(c1).mul(&frame.shear(c2)),
                    frame.shear(f.add(c1, c2))
                );
            }
        }
        // F o shear(c) = F + (c^2 + c) z^2
        let omega = 2u16;
        let shift = f.add(f.mul(omega, omega), omega); // = 1
        assert_eq!(shift, 1);
        let composed = frame.form.compose(&frame.shear(omega));
        assert_eq!(composed, frame.member(shift));
        // tau = shear(1) preserves F for every even q.
        assert!(frame.form.is_preserved_by(&frame.tau()));
    }

    #[test]
    fn shears_permute_elliptic_members() {
        let f = gf(2, 2);
        let delta = f.find_delta();
        let elliptic: Vec<u16> = f
            .elements()
            .filter(|&s| f.abs_trace(f.add(delta, s)) == 1)
            .collect();
        // Image parameters of the base member under all shears cover
        // exactly the elliptic members (c -> c^2 + c maps onto trace-0).
        let image: std::collections::BTreeSet<u16> = f
            .elements()
            .map(|c| f.add(f.mul(c, c), c))
            .collect();
        let elliptic_set: std::collections::BTreeSet<u16> = elliptic.iter().copied().collect();
        assert_eq!(image, elliptic_set);
    }

    #[test]
    fn q2_shear_is_tau_on_forms() {
        let f = gf(2, 1);
        let frame = construction_frame(f.clone(), 2, 1).unwrap();
        // c = 1: c^2 + c = 0, so the shear preserves the form exactly.
        assert!(frame.form.is_preserved_by(&frame.shear(1)));
    }
}
