//! Finite-dimensional associative unital algebras, their bimodules, and
//! bimodule homomorphisms and automorphisms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::caps::{checked_pow, Caps};
use crate::error::{Error, Result};
use crate::exactla::{GroundField, Matrix, Scalar, Subspace};

/// An associative unital algebra given by structure constants.
///
/// `e_i · e_j = Σ_k table[i][j][k] e_k`. Construction only checks shapes;
/// [`Algebra::validate`] checks the axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    field: GroundField,
    basis: Vec<String>,
    unit: Vec<Scalar>,
    table: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraReport {
    /// Basis triples `(i, j, k)` with `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub associativity_failures: Vec<(usize, usize, usize)>,
    /// Basis indices `i` with `1 · e_i != e_i` or `e_i · 1 != e_i`.
    pub unit_failures: Vec<usize>,
}

impl AlgebraReport {
    pub fn is_valid(&self) -> bool {
        self.associativity_failures.is_empty() && self.unit_failures.is_empty()
    }
}

impl Algebra {
    pub fn new(
        field: GroundField,
        basis: Vec<String>,
        unit: Vec<Scalar>,
        triples: &[(usize, usize, usize, Scalar)],
    ) -> Result<Self> {
        let n = basis.len();
        if unit.len() != n {
            return Err(Error::invalid("unit has wrong length"));
        }
        let mut table = vec![field.zero_vec(n); n * n];
        for (idx, (i, j, k, c)) in triples.iter().enumerate() {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::invalid(format!(
                    "structure constant #{idx} ({i}, {j}, {k}) indexes outside a basis of size {n}"
                )));
            }
            let slot = &mut table[i * n + j][*k];
            *slot = field.add(slot, c);
        }
        Ok(Algebra {
            field,
            basis,
            unit,
            table,
        })
    }

    /// Builds an algebra from a full multiplication table.
    pub fn from_table(
        field: GroundField,
        basis: Vec<String>,
        unit: Vec<Scalar>,
        table: Vec<Vec<Scalar>>,
    ) -> Result<Self> {
        let n = basis.len();
        if table.len() != n * n || table.iter().any(|v| v.len() != n) || unit.len() != n {
            return Err(Error::invalid("multiplication table has wrong shape"));
        }
        Ok(Algebra {
            field,
            basis,
            unit,
            table,
        })
    }

    pub fn ground(field: GroundField) -> Self {
        Self::truncated_polynomial(field, 1)
    }

    /// `k[x]/x^len` with basis `1, x, ..., x^{len-1}`.
    pub fn truncated_polynomial(field: GroundField, len: usize) -> Self {
        let basis = (0..len)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        let mut triples = Vec::new();
        for i in 0..len {
            for j in 0..len {
                if i + j < len {
                    triples.push((i, j, i + j, field.one()));
                }
            }
        }
        Self::new(field, basis, field.unit_vec(len, 0), &triples).expect("well-formed")
    }

    /// The full matrix algebra `M_n(k)` with basis of matrix units `E_ab`.
    pub fn matrix_algebra(field: GroundField, n: usize) -> Self {
        let idx = |a: usize, b: usize| a * n + b;
        let basis = (0..n)
            .flat_map(|a| (0..n).map(move |b| format!("E{a}{b}")))
            .collect();
        let mut triples = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    triples.push((idx(a, b), idx(b, c), idx(a, c), field.one()));
                }
            }
        }
        let mut unit = field.zero_vec(n * n);
        for a in 0..n {
            unit[idx(a, a)] = field.one();
        }
        Self::new(field, basis, unit, &triples).expect("well-formed")
    }

    /// Upper triangular `n x n` matrices.
    pub fn upper_triangular(field: GroundField, n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let pos = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).unwrap();
        let basis = pairs.iter().map(|(a, b)| format!("E{a}{b}")).collect();
        let mut triples = Vec::new();
        for &(a, b) in &pairs {
            for &(b2, c) in &pairs {
                if b == b2 {
                    triples.push((pos(a, b), pos(b2, c), pos(a, c), field.one()));
                }
            }
        }
        let mut unit = field.zero_vec(pairs.len());
        for a in 0..n {
            unit[pos(a, a)] = field.one();
        }
        Self::new(field, basis, unit, &triples).expect("well-formed")
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// Coordinates of `e_i · e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[Scalar] {
        &self.table[i * self.dim() + j]
    }

    pub fn set_product(&mut self, i: usize, j: usize, value: Vec<Scalar>) {
        let n = self.dim();
        self.table[i * n + j] = value;
    }

    /// Nonzero structure constants as `(i, j, k, c)`.
    pub fn triples(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in self.product(i, j).iter().enumerate() {
                    if !self.field.is_zero(c) {
                        out.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let n = self.dim();
        let mut out = f.zero_vec(n);
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if f.is_zero(bj) {
                    continue;
                }
                f.axpy(&mut out, &f.mul(ai, bj), self.product(i, j));
            }
        }
        out
    }

    /// Matrix of `x ↦ a x`.
    pub fn left_mul(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| self.mul(a, &self.field.unit_vec(n, j)))
            .collect();
        Matrix::from_columns(self.field, n, &cols)
    }

    /// Matrix of `x ↦ x a`.
    pub fn right_mul(&self, a: &[Scalar]) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|j| self.mul(&self.field.unit_vec(n, j), a))
            .collect();
        Matrix::from_columns(self.field, n, &cols)
    }

    pub fn validate(&self) -> AlgebraReport {
        let n = self.dim();
        let f = self.field;
        let mut report = AlgebraReport::default();
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j);
                for k in 0..n {
                    let lhs = self.mul(ij, &f.unit_vec(n, k));
                    let rhs = self.mul(&f.unit_vec(n, i), self.product(j, k));
                    if lhs != rhs {
                        report.associativity_failures.push((i, j, k));
                    }
                }
            }
        }
        for i in 0..n {
            let e = f.unit_vec(n, i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                report.unit_failures.push(i);
            }
        }
        report
    }

    /// Stable content hash of the structure (field, unit, constants).
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("algebra;{};{};", self.field, self.dim()));
        for s in &self.unit {
            h.update(format!("{s},"));
        }
        for (i, j, k, c) in self.triples() {
            h.update(format!("({i},{j},{k},{c})"));
        }
        hex16(&h.finalize())
    }

    /// Whether multiplication is commutative on basis elements.
    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.product(i, j) == self.product(j, i)))
    }

    /// Tensor product `A ⊗ B` with basis pairs `(a, b)` in row-major order.
    pub fn tensor(&self, other: &Algebra) -> Result<Algebra> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("tensor product of algebras".into()));
        }
        let f = self.field;
        let (n, m) = (self.dim(), other.dim());
        let basis = self
            .basis
            .iter()
            .flat_map(|a| other.basis.iter().map(move |b| format!("{a}⊗{b}")))
            .collect();
        let mut table = vec![f.zero_vec(n * m); n * m * n * m];
        for i in 0..n {
            for j in 0..m {
                for k in 0..n {
                    for l in 0..m {
                        let pa = self.product(i, k);
                        let pb = other.product(j, l);
                        let slot = &mut table[(i * m + j) * n * m + (k * m + l)];
                        for (a, ca) in pa.iter().enumerate() {
                            if f.is_zero(ca) {
                                continue;
                            }
                            for (b, cb) in pb.iter().enumerate() {
                                if !f.is_zero(cb) {
                                    slot[a * m + b] = f.add(&slot[a * m + b], &f.mul(ca, cb));
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut unit = f.zero_vec(n * m);
        for (a, ca) in self.unit.iter().enumerate() {
            for (b, cb) in other.unit.iter().enumerate() {
                unit[a * m + b] = f.mul(ca, cb);
            }
        }
        Algebra::from_table(f, basis, unit, table)
    }

    /// The same algebra in the basis given by the columns of `p`
    /// (new basis vector `j` is column `j` of `p` in old coordinates).
    pub fn change_basis(&self, p: &Matrix) -> Result<Algebra> {
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::invalid("change of basis is not invertible"))?;
        let n = self.dim();
        let cols = p.columns();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(pinv.mul_vec(&self.mul(&cols[i], &cols[j])));
            }
        }
        let basis = (0..n).map(|i| format!("b{i}")).collect();
        Algebra::from_table(self.field, basis, pinv.mul_vec(&self.unit), table)
    }
}

pub(crate) fn hex16(bytes: &[u8]) -> String {
    bytes[..8].iter().map(|b| format!("{b:02x}")).collect()
}

/// A bimodule over an [`Algebra`], given by left and right action matrices
/// for each algebra basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    field: GroundField,
    algebra: String,
    basis: Vec<String>,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BimoduleReport {
    /// `(i, j)` with `L_i L_j != L_{e_i e_j}`.
    pub left_failures: Vec<(usize, usize)>,
    /// `(i, j)` with `R_j R_i != R_{e_i e_j}`.
    pub right_failures: Vec<(usize, usize)>,
    /// `(i, j)` with `L_i R_j != R_j L_i`.
    pub commute_failures: Vec<(usize, usize)>,
    /// The unit does not act as the identity.
    pub unit_failure: bool,
}

impl BimoduleReport {
    pub fn is_valid(&self) -> bool {
        self.left_failures.is_empty()
            && self.right_failures.is_empty()
            && self.commute_failures.is_empty()
            && !self.unit_failure
    }
}

impl Bimodule {
    pub fn new(
        algebra: &Algebra,
        basis: Vec<String>,
        left: Vec<Matrix>,
        right: Vec<Matrix>,
    ) -> Result<Self> {
        let d = basis.len();
        if left.len() != algebra.dim() || right.len() != algebra.dim() {
            return Err(Error::invalid(format!(
                "bimodule needs {} left and right action matrices",
                algebra.dim()
            )));
        }
        for m in left.iter().chain(&right) {
            if m.rows() != d || m.cols() != d {
                return Err(Error::invalid(format!("action matrix must be {d}x{d}")));
            }
            if m.field() != algebra.field() {
                return Err(Error::FieldMismatch("bimodule action".into()));
            }
        }
        Ok(Bimodule {
            field: algebra.field(),
            algebra: algebra.fingerprint(),
            basis,
            left,
            right,
        })
    }

    /// `A` as a bimodule over itself.
    pub fn regular(a: &Algebra) -> Self {
        let n = a.dim();
        let f = a.field();
        let left = (0..n).map(|i| a.left_mul(&f.unit_vec(n, i))).collect();
        let right = (0..n).map(|i| a.right_mul(&f.unit_vec(n, i))).collect();
        Self::new(a, a.basis().to_vec(), left, right).expect("regular bimodule")
    }

    /// The one-dimensional bimodule on which `e_i` acts by `chi[i]` on both sides.
    pub fn from_character(a: &Algebra, chi: &[Scalar]) -> Result<Self> {
        if chi.len() != a.dim() {
            return Err(Error::invalid("character has wrong length"));
        }
        let f = a.field();
        let acts: Vec<Matrix> = chi
            .iter()
            .map(|c| Matrix::from_rows(f, 1, vec![vec![c.clone()]]))
            .collect();
        Self::new(a, vec!["m".into()], acts.clone(), acts)
    }

    /// The augmentation bimodule `k` of an algebra whose first basis element
    /// is the unit and whose other basis elements span an ideal.
    pub fn augmentation(a: &Algebra) -> Result<Self> {
        let f = a.field();
        let chi = f.unit_vec(a.dim(), 0);
        let m = Self::from_character(a, &chi)?;
        if !m.validate().is_valid() {
            return Err(Error::invalid("algebra has no augmentation of that shape"));
        }
        Ok(m)
    }

    pub fn zero(a: &Algebra) -> Self {
        let f = a.field();
        let z: Vec<Matrix> = (0..a.dim()).map(|_| Matrix::zeros(f, 0, 0)).collect();
        Self::new(a, Vec::new(), z.clone(), z).expect("zero bimodule")
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn left(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    pub fn right(&self, i: usize) -> &Matrix {
        &self.right[i]
    }

    pub fn left_all(&self) -> &[Matrix] {
        &self.left
    }

    pub fn right_all(&self) -> &[Matrix] {
        &self.right
    }

    pub fn algebra_fingerprint(&self) -> &str {
        &self.algebra
    }

    pub fn algebra_dim(&self) -> usize {
        self.left.len()
    }

    pub fn is_over(&self, a: &Algebra) -> bool {
        self.algebra == a.fingerprint()
    }

    pub fn check_over(&self, a: &Algebra) -> Result<()> {
        if self.is_over(a) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(format!(
                "bimodule is over algebra {}, not {}",
                self.algebra,
                a.fingerprint()
            )))
        }
    }

    /// Matrix of `m ↦ a · m` for an algebra element `a`.
    pub fn left_action(&self, a: &[Scalar]) -> Matrix {
        combine(self.field, self.dim(), &self.left, a)
    }

    /// Matrix of `m ↦ m · a`.
    pub fn right_action(&self, a: &[Scalar]) -> Matrix {
        combine(self.field, self.dim(), &self.right, a)
    }

    /// Checks the module axioms against the algebra's structure constants.
    pub fn validate_against(&self, a: &Algebra) -> Result<BimoduleReport> {
        self.check_over(a)?;
        Ok(self.validate_with(a))
    }

    fn validate_with(&self, a: &Algebra) -> BimoduleReport {
        let n = a.dim();
        let mut report = BimoduleReport::default();
        for i in 0..n {
            for j in 0..n {
                let prod = a.product(i, j);
                if self.left[i].mul(&self.left[j]) != self.left_action(prod) {
                    report.left_failures.push((i, j));
                }
                if self.right[j].mul(&self.right[i]) != self.right_action(prod) {
                    report.right_failures.push((i, j));
                }
                if self.left[i].mul(&self.right[j]) != self.right[j].mul(&self.left[i]) {
                    report.commute_failures.push((i, j));
                }
            }
        }
        let id = Matrix::identity(self.field, self.dim());
        report.unit_failure =
            self.left_action(a.unit()) != id || self.right_action(a.unit()) != id;
        report
    }

    /// Axiom check when only the action matrices are at hand: products are
    /// not available, so only commutation of the two actions is tested.
    pub fn validate(&self) -> BimoduleReport {
        let n = self.algebra_dim();
        let mut report = BimoduleReport::default();
        for i in 0..n {
            for j in 0..n {
                if self.left[i].mul(&self.right[j]) != self.right[j].mul(&self.left[i]) {
                    report.commute_failures.push((i, j));
                }
            }
        }
        report
    }

    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("bimodule;{};{};{};", self.field, self.algebra, self.dim()));
        for m in self.left.iter().chain(&self.right) {
            for s in m.entries() {
                h.update(format!("{s},"));
            }
            h.update(";");
        }
        hex16(&h.finalize())
    }

    /// The same bimodule in the basis given by the columns of `p`.
    pub fn change_basis(&self, p: &Matrix) -> Result<Bimodule> {
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::invalid("change of basis is not invertible"))?;
        let conj = |m: &Matrix| pinv.mul(m).mul(p);
        Ok(Bimodule {
            field: self.field,
            algebra: self.algebra.clone(),
            basis: (0..self.dim()).map(|i| format!("b{i}")).collect(),
            left: self.left.iter().map(conj).collect(),
            right: self.right.iter().map(conj).collect(),
        })
    }

    /// Restriction of scalars along an algebra map `phi: a -> (algebra of self)`
    /// given as a matrix in basis coordinates.
    pub fn pullback(&self, a: &Algebra, phi: &Matrix) -> Result<Bimodule> {
        if phi.cols() != a.dim() || phi.rows() != self.algebra_dim() {
            return Err(Error::invalid("pullback map has wrong shape"));
        }
        let left = (0..a.dim())
            .map(|i| self.left_action(&phi.column(i)))
            .collect();
        let right = (0..a.dim())
            .map(|i| self.right_action(&phi.column(i)))
            .collect();
        Bimodule::new(a, self.basis.clone(), left, right)
    }

    pub fn direct_sum(&self, other: &Bimodule) -> Result<Bimodule> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch("direct sum".into()));
        }
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().cloned());
        Ok(Bimodule {
            field: self.field,
            algebra: self.algebra.clone(),
            basis,
            left: self
                .left
                .iter()
                .zip(&other.left)
                .map(|(a, b)| a.direct_sum(b))
                .collect(),
            right: self
                .right
                .iter()
                .zip(&other.right)
                .map(|(a, b)| a.direct_sum(b))
                .collect(),
        })
    }

    /// The sub-bimodule spanned by `vectors`, which must be closed under
    /// both actions. Basis: the echelon basis of the span.
    pub fn sub_bimodule(&self, a: &Algebra, vectors: &[Vec<Scalar>]) -> Result<Bimodule> {
        let sub = Subspace::span(self.field, self.dim(), vectors);
        let basis = sub.basis();
        let restrict = |act: &Matrix| -> Result<Matrix> {
            let cols = basis
                .iter()
                .map(|v| {
                    sub.coordinates(&act.mul_vec(v))
                        .ok_or_else(|| Error::invalid("span is not closed under the action"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_columns(self.field, basis.len(), &cols))
        };
        let left = self.left.iter().map(restrict).collect::<Result<Vec<_>>>()?;
        let right = self.right.iter().map(restrict).collect::<Result<Vec<_>>>()?;
        let names = (0..basis.len()).map(|i| format!("j{i}")).collect();
        Bimodule::new(a, names, left, right)
    }
}

fn combine(field: GroundField, d: usize, mats: &[Matrix], a: &[Scalar]) -> Matrix {
    let mut out = Matrix::zeros(field, d, d);
    for (m, c) in mats.iter().zip(a) {
        if !field.is_zero(c) {
            out = out.add(&m.scale(c));
        }
    }
    out
}

/// A linear map between bimodules over the same algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BimoduleMap {
    pub matrix: Matrix,
}

impl BimoduleMap {
    pub fn identity(m: &Bimodule) -> Self {
        BimoduleMap {
            matrix: Matrix::identity(m.field(), m.dim()),
        }
    }

    /// Whether the matrix intertwines every left and right action.
    pub fn is_hom(&self, source: &Bimodule, target: &Bimodule) -> bool {
        let phi = &self.matrix;
        phi.rows() == target.dim()
            && phi.cols() == source.dim()
            && (0..source.algebra_dim()).all(|i| {
                phi.mul(source.left(i)) == target.left(i).mul(phi)
                    && phi.mul(source.right(i)) == target.right(i).mul(phi)
            })
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &BimoduleMap) -> BimoduleMap {
        BimoduleMap {
            matrix: after.matrix.mul(&self.matrix),
        }
    }

    pub fn inverse(&self) -> Option<BimoduleMap> {
        self.matrix.inverse().map(|matrix| BimoduleMap { matrix })
    }
}

/// Canonical basis of `Hom_{A-A}(m1, m2)`.
pub fn bimodule_hom_space(m1: &Bimodule, m2: &Bimodule) -> Result<Vec<BimoduleMap>> {
    if m1.field() != m2.field() {
        return Err(Error::FieldMismatch("hom space".into()));
    }
    if m1.algebra_fingerprint() != m2.algebra_fingerprint() {
        return Err(Error::AlgebraMismatch(
            "hom space between bimodules over different algebras".into(),
        ));
    }
    let f = m1.field();
    let (d1, d2) = (m1.dim(), m2.dim());
    let unknowns = d1 * d2;
    let var = |r: usize, c: usize| r * d1 + c;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut add_conditions = |a1: &Matrix, a2: &Matrix| {
        // (phi a1 - a2 phi)[r][c] = 0
        for r in 0..d2 {
            for c in 0..d1 {
                let mut row = f.zero_vec(unknowns);
                for k in 0..d1 {
                    let v = var(r, k);
                    row[v] = f.add(&row[v], a1.get(k, c));
                }
                for k in 0..d2 {
                    let v = var(k, c);
                    row[v] = f.sub(&row[v], a2.get(r, k));
                }
                if !f.is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
    };
    for i in 0..m1.algebra_dim() {
        add_conditions(m1.left(i), m2.left(i));
        add_conditions(m1.right(i), m2.right(i));
    }
    let system = Matrix::from_rows(f, unknowns, rows);
    Ok(system
        .kernel_basis()
        .into_iter()
        .map(|v| BimoduleMap {
            matrix: Matrix::from_rows(f, d1, v.chunks(d1.max(1)).take(d2).map(|c| c.to_vec()).collect()),
        })
        .collect())
}

/// Linear combination of hom-space basis maps.
pub fn combine_maps(field: GroundField, rows: usize, cols: usize, basis: &[BimoduleMap], coeffs: &[Scalar]) -> Matrix {
    let mut out = Matrix::zeros(field, rows, cols);
    for (b, c) in basis.iter().zip(coeffs) {
        if !field.is_zero(c) {
            out = out.add(&b.matrix.scale(c));
        }
    }
    out
}

/// Digits of `index` in base `p`, most significant first, `len` digits.
pub(crate) fn digits(field: GroundField, mut index: u64, len: usize) -> Vec<Scalar> {
    let p = field.order().expect("prime field");
    let mut out = vec![field.zero(); len];
    for slot in out.iter_mut().rev() {
        *slot = field.element(index % p);
        index /= p;
    }
    out
}

/// All bimodule automorphisms of `m`, ordered lexicographically by their
/// coefficient vectors on the canonical endomorphism basis.
pub fn bimodule_aut_group(m: &Bimodule, caps: &Caps) -> Result<Vec<BimoduleMap>> {
    let f = m.field();
    let p = f.order().ok_or_else(|| {
        Error::Unsupported(
            "Aut(M) over Q is an infinite enumeration; orbits under a possibly infinite group are unsupported"
                .into(),
        )
    })?;
    let basis = bimodule_hom_space(m, m)?;
    let d = basis.len();
    if d > caps.aut_dim {
        return Err(Error::cap(
            "endomorphism space dimension",
            d,
            caps.aut_dim as u64,
        ));
    }
    let count = checked_pow(p, d)
        .filter(|&c| c <= caps.enumeration)
        .ok_or_else(|| Error::cap("Aut(M) candidates", format!("{p}^{d}"), caps.enumeration))?;
    let dim = m.dim();
    Ok((0..count)
        .into_par_iter()
        .filter_map(|idx| {
            let coeffs = digits(f, idx, d);
            let mat = combine_maps(f, dim, dim, &basis, &coeffs);
            mat.is_invertible().then_some(BimoduleMap { matrix: mat })
        })
        .collect())
}

/// Some bimodule isomorphism `m1 -> m2`, if one exists.
///
/// Over a prime field the hom space is enumerated exhaustively (subject to
/// `caps`). Over Q a seeded sequence of random integer combinations is
/// tried: the determinant is a polynomial of degree `dim` in the
/// coefficients, so 64 draws from `[-100, 100]` miss a nonzero polynomial
/// with probability below `2^-64`.
pub fn find_bimodule_isomorphism(
    m1: &Bimodule,
    m2: &Bimodule,
    caps: &Caps,
) -> Result<Option<BimoduleMap>> {
    if m1.dim() != m2.dim() {
        return Ok(None);
    }
    let basis = bimodule_hom_space(m1, m2)?;
    let f = m1.field();
    let n = m1.dim();
    if n == 0 {
        return Ok(Some(BimoduleMap {
            matrix: Matrix::zeros(f, 0, 0),
        }));
    }
    match f.order() {
        Some(p) => {
            let d = basis.len();
            let count = checked_pow(p, d)
                .filter(|&c| c <= caps.enumeration)
                .ok_or_else(|| {
                    Error::cap("bimodule isomorphism search", format!("{p}^{d}"), caps.enumeration)
                })?;
            for idx in 0..count {
                let mat = combine_maps(f, n, n, &basis, &digits(f, idx, d));
                if mat.is_invertible() {
                    return Ok(Some(BimoduleMap { matrix: mat }));
                }
            }
            Ok(None)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6b74_6f77_6572);
            for _ in 0..64 {
                let coeffs: Vec<Scalar> = basis
                    .iter()
                    .map(|_| f.from_i64(rng.gen_range(-100..=100)))
                    .collect();
                let mat = combine_maps(f, n, n, &basis, &coeffs);
                if mat.is_invertible() {
                    return Ok(Some(BimoduleMap { matrix: mat }));
                }
            }
            Ok(None)
        }
    }
}

/// Some algebra isomorphism `a -> b` (matrix in basis coordinates).
///
/// Identical structure constants give the identity. Otherwise, over a
/// prime field, all unit-preserving linear maps are enumerated; over Q the
/// non-identical case is unsupported.
pub fn find_algebra_isomorphism(a: &Algebra, b: &Algebra, caps: &Caps) -> Result<Option<Matrix>> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch("algebra isomorphism".into()));
    }
    let f = a.field();
    let n = a.dim();
    if n != b.dim() {
        return Ok(None);
    }
    if a.unit() == b.unit() && (0..n).all(|i| (0..n).all(|j| a.product(i, j) == b.product(i, j))) {
        return Ok(Some(Matrix::identity(f, n)));
    }
    let p = f.order().ok_or_else(|| {
        Error::Unsupported("algebra isomorphism search over Q for distinct structure constants".into())
    })?;
    let free = n * n;
    let count = checked_pow(p, free)
        .filter(|&c| c <= caps.enumeration)
        .ok_or_else(|| Error::cap("algebra isomorphism search", format!("{p}^{free}"), caps.enumeration))?;
    for idx in 0..count {
        let entries = digits(f, idx, free);
        let phi = Matrix::from_rows(f, n, entries.chunks(n).map(|c| c.to_vec()).collect());
        if is_algebra_map(a, b, &phi) && phi.is_invertible() {
            return Ok(Some(phi));
        }
    }
    Ok(None)
}

/// Whether `phi` (in basis coordinates) is a unital algebra map `a -> b`.
pub fn is_algebra_map(a: &Algebra, b: &Algebra, phi: &Matrix) -> bool {
    if phi.mul_vec(a.unit()) != b.unit() {
        return false;
    }
    let cols = phi.columns();
    (0..a.dim()).all(|i| {
        (0..a.dim()).all(|j| phi.mul_vec(a.product(i, j)) == b.mul(&cols[i], &cols[j]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GroundField {
        GroundField::prime(2).unwrap()
    }

    fn f3() -> GroundField {
        GroundField::prime(3).unwrap()
    }

    #[test]
    fn validate_examples() {
        let dual = Algebra::truncated_polynomial(f2(), 2);
        assert!(dual.validate().is_valid());
        assert!(Algebra::matrix_algebra(f2(), 2).validate().is_valid());
        assert!(Algebra::upper_triangular(f3(), 3).validate().is_valid());

        // x^3 algebra with x*x^2 corrupted to 1
        let mut bad = Algebra::truncated_polynomial(f2(), 3);
        bad.set_product(1, 2, vec![Scalar::Mod(1), Scalar::Mod(0), Scalar::Mod(0)]);
        let r = bad.validate();
        assert!(!r.is_valid());
        assert!(r.associativity_failures.contains(&(1, 1, 1)));
    }

    #[test]
    fn hom_space_examples() {
        let a = Algebra::truncated_polynomial(f2(), 2);
        let reg = Bimodule::regular(&a);
        let k = Bimodule::augmentation(&a).unwrap();
        assert_eq!(bimodule_hom_space(&reg, &reg).unwrap().len(), 2);
        assert_eq!(bimodule_hom_space(&k, &k).unwrap().len(), 1);
        // exhaustive over the 4 linear maps A -> k
        let brute = (0..4u64)
            .filter(|&i| {
                let phi = Matrix::from_rows(f2(), 2, vec![vec![Scalar::Mod(i & 1), Scalar::Mod(i >> 1)]]);
                BimoduleMap { matrix: phi }.is_hom(&reg, &k)
            })
            .count();
        assert_eq!(brute, 2); // the zero map and the augmentation
        assert_eq!(bimodule_hom_space(&reg, &k).unwrap().len(), 1);
    }

    #[test]
    fn hom_space_rejects_mismatch() {
        let a = Algebra::truncated_polynomial(f2(), 2);
        let b = Algebra::truncated_polynomial(f2(), 3);
        let err = bimodule_hom_space(&Bimodule::regular(&a), &Bimodule::regular(&b));
        assert!(matches!(err, Err(Error::AlgebraMismatch(_))));
    }

    fn brute_aut_count(m: &Bimodule) -> usize {
        let f = m.field();
        let p = f.order().unwrap();
        let d = m.dim();
        let total = p.pow((d * d) as u32);
        (0..total)
            .filter(|&idx| {
                let e = digits(f, idx, d * d);
                let phi = Matrix::from_rows(f, d, e.chunks(d).map(|c| c.to_vec()).collect());
                phi.is_invertible() && BimoduleMap { matrix: phi }.is_hom(m, m)
            })
            .count()
    }

    #[test]
    fn aut_group_examples() {
        let caps = Caps::default();
        let a2 = Algebra::truncated_polynomial(f2(), 2);
        let reg2 = Bimodule::regular(&a2);
        let aut = bimodule_aut_group(&reg2, &caps).unwrap();
        assert_eq!(aut.len(), brute_aut_count(&reg2));
        assert_eq!(aut.len(), 2);
        assert!(aut[0].matrix.is_identity() || aut[1].matrix.is_identity());

        let k = Bimodule::augmentation(&a2).unwrap();
        assert_eq!(bimodule_aut_group(&k, &caps).unwrap().len(), 1);

        let a3 = Algebra::truncated_polynomial(f3(), 2);
        let reg3 = Bimodule::regular(&a3);
        assert_eq!(brute_aut_count(&reg3), 6);
        assert_eq!(bimodule_aut_group(&reg3, &caps).unwrap().len(), 6);
    }

    #[test]
    fn aut_group_errors() {
        let q = Algebra::truncated_polynomial(GroundField::Rationals, 2);
        assert!(matches!(
            bimodule_aut_group(&Bimodule::regular(&q), &Caps::default()),
            Err(Error::Unsupported(_))
        ));
        let m2 = Algebra::matrix_algebra(f2(), 2);
        let reg = Bimodule::regular(&m2);
        let caps = Caps {
            aut_dim: 0,
            ..Caps::default()
        };
        assert!(matches!(
            bimodule_aut_group(&reg, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn isomorphism_search() {
        let a = Algebra::truncated_polynomial(f3(), 2);
        let reg = Bimodule::regular(&a);
        let p = Matrix::from_i64(f3(), &[&[1, 1], &[0, 2]]);
        let conj = reg.change_basis(&p).unwrap();
        let iso = find_bimodule_isomorphism(&reg, &conj, &Caps::default())
            .unwrap()
            .unwrap();
        assert!(iso.is_hom(&reg, &conj));
        let k = Bimodule::augmentation(&a).unwrap();
        assert!(find_bimodule_isomorphism(&reg, &k, &Caps::default())
            .unwrap()
            .is_none());

        let b = a.change_basis(&Matrix::from_i64(f3(), &[&[1, 0], &[0, 2]])).unwrap();
        let phi = find_algebra_isomorphism(&a, &b, &Caps::default()).unwrap().unwrap();
        assert!(is_algebra_map(&a, &b, &phi));
    }
}
