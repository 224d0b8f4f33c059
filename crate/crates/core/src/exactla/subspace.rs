use super::field::{GroundField, Scalar};
use super::matrix::Matrix;

/// Which coordinate order drives pivot selection.
///
/// `RowEchelon` picks leftmost pivots; `Reversed` runs the same elimination
/// on reversed coordinates, so pivots land rightmost-first. Both yield valid
/// but generally different complements and representatives.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Convention {
    #[default]
    RowEchelon,
    Reversed,
}

impl Convention {
    fn apply(self, v: &[Scalar]) -> Vec<Scalar> {
        match self {
            Convention::RowEchelon => v.to_vec(),
            Convention::Reversed => v.iter().rev().cloned().collect(),
        }
    }

    fn index(self, i: usize, n: usize) -> usize {
        match self {
            Convention::RowEchelon => i,
            Convention::Reversed => n - 1 - i,
        }
    }
}

/// A subspace of `k^n` held as a reduced echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: GroundField,
    ambient: usize,
    convention: Convention,
    /// Echelon rows in convention coordinates.
    rows: Vec<Vec<Scalar>>,
    /// Pivot columns in convention coordinates.
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(field: GroundField, ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        Self::span_with(field, ambient, vectors, Convention::RowEchelon)
    }

    pub fn span_with(
        field: GroundField,
        ambient: usize,
        vectors: &[Vec<Scalar>],
        convention: Convention,
    ) -> Self {
        let rows: Vec<Vec<Scalar>> = vectors.iter().map(|v| convention.apply(v)).collect();
        let ech = Matrix::from_rows(field, ambient, rows).echelon();
        Subspace {
            field,
            ambient,
            convention,
            rows: ech.rows,
            pivots: ech.pivots,
        }
    }

    /// Column space of `m`.
    pub fn column_space(m: &Matrix, convention: Convention) -> Self {
        Self::span_with(m.field(), m.rows(), &m.columns(), convention)
    }

    pub fn zero(field: GroundField, ambient: usize) -> Self {
        Self::span(field, ambient, &[])
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Echelon basis in original coordinates.
    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.rows.iter().map(|r| self.from_conv(r)).collect()
    }

    fn from_conv(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.convention.apply(v)
    }

    /// Reduces `v` against the basis; the result vanishes at every pivot and
    /// is zero iff `v` lies in the subspace. Convention coordinates.
    fn reduce_conv(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = self.convention.apply(v);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !self.field.is_zero(&w[p]) {
                let c = self.field.neg(&w[p]);
                self.field.axpy(&mut w, &c, row);
            }
        }
        w
    }

    /// Canonical residue of `v` modulo the subspace, in original coordinates.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let w = self.reduce_conv(v);
        self.from_conv(&w)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.field.is_zero_vec(&self.reduce_conv(v))
    }

    /// Coordinates of `v` on [`Subspace::basis`], if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let w = self.convention.apply(v);
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| w[p].clone()).collect();
        self.contains(v).then_some(coords)
    }

    /// Original-coordinate indices of the standard basis vectors that
    /// complete this subspace to the whole space, in increasing order.
    pub fn complement_indices(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut idx: Vec<usize> = (0..self.ambient)
            .filter(|&c| !is_pivot[c])
            .map(|c| self.convention.index(c, self.ambient))
            .collect();
        idx.sort_unstable();
        idx
    }

    pub fn quotient(&self) -> Quotient {
        Quotient {
            sub: self.clone(),
            complement: self.complement_indices(),
        }
    }
}

/// `k^n / W` with the standard-basis complement of `W` as quotient basis.
#[derive(Clone, Debug)]
pub struct Quotient {
    sub: Subspace,
    complement: Vec<usize>,
}

impl Quotient {
    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn ambient(&self) -> usize {
        self.sub.ambient
    }

    pub fn kernel(&self) -> &Subspace {
        &self.sub
    }

    /// Indices of the ambient basis vectors chosen as quotient basis.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.sub.reduce(v);
        self.complement.iter().map(|&i| r[i].clone()).collect()
    }

    /// Section of the projection: places `q` on the complement basis.
    pub fn lift(&self, q: &[Scalar]) -> Vec<Scalar> {
        let mut v = self.sub.field.zero_vec(self.sub.ambient);
        for (&i, s) in self.complement.iter().zip(q) {
            v[i] = s.clone();
        }
        v
    }

    pub fn projection_matrix(&self) -> Matrix {
        let f = self.sub.field;
        let n = self.sub.ambient;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|j| self.project(&f.unit_vec(n, j))).collect();
        Matrix::from_columns(f, self.dim(), &cols)
    }
}

/// A subquotient `Z / B` with `B ⊆ Z ⊆ k^n`, e.g. cycles modulo boundaries.
///
/// Representatives are obtained by reducing a basis of `Z` modulo `B` and
/// echelonizing the residues; the coordinate of a class is read off at the
/// representatives' pivots after reduction modulo `B`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    field: GroundField,
    boundaries: Subspace,
    reps: Subspace,
}

impl Subquotient {
    pub fn new(
        field: GroundField,
        ambient: usize,
        cycles: &[Vec<Scalar>],
        boundaries: &[Vec<Scalar>],
        convention: Convention,
    ) -> Self {
        let b = Subspace::span_with(field, ambient, boundaries, convention);
        let residues: Vec<Vec<Scalar>> = cycles.iter().map(|z| b.reduce(z)).collect();
        let reps = Subspace::span_with(field, ambient, &residues, convention);
        Subquotient {
            field,
            boundaries: b,
            reps,
        }
    }

    /// `ker(outgoing) / im(incoming)`, assuming `outgoing ∘ incoming = 0`.
    ///
    /// Gives the same representatives as [`Subquotient::new`] on a kernel
    /// basis, but without reducing every cycle: since `B ⊆ Z`, the reduced
    /// cycles are exactly the cycles vanishing at the pivots of `B`, i.e. the
    /// kernel of `outgoing` restricted to the remaining coordinates.
    pub fn of_maps(outgoing: &Matrix, incoming: &Matrix, convention: Convention) -> Self {
        assert_eq!(outgoing.cols(), incoming.rows());
        let field = outgoing.field();
        let n = outgoing.cols();
        let b = Subspace::span_with(field, n, &incoming.columns(), convention);
        let mut is_pivot = vec![false; n];
        for &p in &b.pivots {
            is_pivot[convention.index(p, n)] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let all = outgoing.columns();
        let kept: Vec<Vec<Scalar>> = free.iter().map(|&j| all[j].clone()).collect();
        let restricted = Matrix::from_columns(field, outgoing.rows(), &kept);
        let residues: Vec<Vec<Scalar>> = restricted
            .kernel_basis()
            .into_iter()
            .map(|k| {
                let mut v = field.zero_vec(n);
                for (&j, c) in free.iter().zip(k) {
                    v[j] = c;
                }
                v
            })
            .collect();
        let reps = Subspace::span_with(field, n, &residues, convention);
        Subquotient {
            field,
            boundaries: b,
            reps,
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }

    pub fn ambient(&self) -> usize {
        self.reps.ambient
    }

    pub fn boundaries(&self) -> &Subspace {
        &self.boundaries
    }

    /// Class representatives, one per coordinate.
    pub fn representatives(&self) -> Vec<Vec<Scalar>> {
        self.reps.basis()
    }

    /// Class coordinates of a cycle. The caller guarantees `z ∈ Z`.
    pub fn coords(&self, z: &[Scalar]) -> Vec<Scalar> {
        let r = self.boundaries.reduce(z);
        self.reps
            .coordinates(&r)
            .expect("vector is not a cycle of this subquotient")
    }

    /// Class coordinates, or `None` when `z` is not in `B + span(reps)`.
    pub fn try_coords(&self, z: &[Scalar]) -> Option<Vec<Scalar>> {
        let r = self.boundaries.reduce(z);
        self.reps.coordinates(&r)
    }

    /// Cycle representing the class with coordinates `c`.
    pub fn lift(&self, c: &[Scalar]) -> Vec<Scalar> {
        let mut v = self.field.zero_vec(self.ambient());
        for (coef, rep) in c.iter().zip(self.representatives()) {
            self.field.axpy(&mut v, coef, &rep);
        }
        v
    }

    pub fn is_boundary(&self, z: &[Scalar]) -> bool {
        self.boundaries.contains(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_projection_kills_subspace() {
        let f = GroundField::prime(3).unwrap();
        let w = vec![vec![f.from_i64(1), f.from_i64(2), f.from_i64(0)]];
        for conv in [Convention::RowEchelon, Convention::Reversed] {
            let q = Subspace::span_with(f, 3, &w, conv).quotient();
            assert_eq!(q.dim(), 2);
            assert!(f.is_zero_vec(&q.project(&w[0])));
            let back = q.project(&q.lift(&[f.from_i64(1), f.from_i64(2)]));
            assert_eq!(back, vec![f.from_i64(1), f.from_i64(2)]);
        }
    }

    #[test]
    fn conventions_choose_different_complements() {
        let f = GroundField::Rationals;
        let w = vec![vec![f.from_i64(1), f.from_i64(1)]];
        let a = Subspace::span_with(f, 2, &w, Convention::RowEchelon).complement_indices();
        let b = Subspace::span_with(f, 2, &w, Convention::Reversed).complement_indices();
        assert_eq!(a, vec![1]);
        assert_eq!(b, vec![0]);
    }

    #[test]
    fn subquotient_coordinates() {
        let f = GroundField::prime(2).unwrap();
        // d1 = [1,1]: k^2 -> k, no incoming boundaries: H = ker = span (1,1)
        let d1 = Matrix::from_i64(f, &[&[1, 1]]);
        let d2 = Matrix::zeros(f, 2, 0);
        let h = Subquotient::of_maps(&d1, &d2, Convention::RowEchelon);
        assert_eq!(h.dim(), 1);
        assert_eq!(h.coords(&[f.one(), f.one()]), vec![f.one()]);
    }
}
