//! Connective DG algebras with a finite basis in each degree of a window
//! `[0, hi]`, maps between them, and the constructions built on them:
//! quotient truncation, tensor products, trivial square-zero extensions,
//! the `H_0`-bimodule structure on homology and on relative homology.

mod poly;
pub mod random;
mod semifree;

pub use poly::{parse_poly, Poly, Word};
pub use semifree::{Generator, SemifreeDga};

use sha2::{Digest, Sha256};

use crate::algebras::{
    find_algebra_isomorphism, find_bimodule_isomorphism, hex16, is_algebra_map, Algebra, Bimodule,
};
use crate::caps::Caps;
use crate::complexes::{cone, ChainComplex, ChainMap, Homology};
use crate::error::{Error, Result};
use crate::exactla::{GroundField, Matrix, Quotient, Scalar, Subspace};

/// Sparse vector: `(index, nonzero coefficient)` pairs in increasing index order.
pub type Sparse = Vec<(usize, Scalar)>;

/// One structure constant `e^{p}_i · e^{q}_j ∋ c · e^{p+q}_k`.
pub type ProductTerm = (usize, usize, usize, usize, usize, Scalar);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    complex: ChainComplex,
    /// `products[p][q][i * dim(q) + j]` is `e^p_i e^q_j`, for `p + q <= hi`.
    products: Vec<Vec<Vec<Sparse>>>,
    unit: Vec<Scalar>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DgaReport {
    /// Degrees `i` with `d_{i-1} d_i != 0`.
    pub d_squared: Vec<usize>,
    /// Basis pairs `((p, i), (q, j))` violating the Leibniz rule.
    pub leibniz: Vec<((usize, usize), (usize, usize))>,
    /// Basis triples violating associativity.
    pub associativity: Vec<((usize, usize), (usize, usize), (usize, usize))>,
    /// Basis elements `(p, i)` on which the unit does not act as identity.
    pub unit: Vec<(usize, usize)>,
}

impl DgaReport {
    pub fn is_valid(&self) -> bool {
        self.d_squared.is_empty()
            && self.leibniz.is_empty()
            && self.associativity.is_empty()
            && self.unit.is_empty()
    }

    /// First failure in words, if any.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(i) = self.d_squared.first() {
            return Some(format!("d_{} d_{} != 0", i - 1, i));
        }
        if let Some(((p, i), (q, j))) = self.leibniz.first() {
            return Some(format!("Leibniz rule fails on e{p}_{i} * e{q}_{j}"));
        }
        if let Some((a, b, c)) = self.associativity.first() {
            return Some(format!(
                "associativity fails on (e{}_{}, e{}_{}, e{}_{})",
                a.0, a.1, b.0, b.1, c.0, c.1
            ));
        }
        if let Some((p, i)) = self.unit.first() {
            return Some(format!("unit law fails on e{p}_{i}"));
        }
        None
    }
}

/// `H_0` as an algebra, with the quotient map `C_0 -> H_0`.
#[derive(Clone, Debug)]
pub struct H0 {
    pub algebra: Algebra,
    pub quotient: Quotient,
}

/// `H_n(C)` as an `H_0(C)`-bimodule.
#[derive(Clone, Debug)]
pub struct HomologyBimodule {
    pub h0: H0,
    pub homology: Homology,
    pub bimodule: Bimodule,
}

fn sparse_to_dense(field: GroundField, n: usize, s: &Sparse) -> Vec<Scalar> {
    let mut v = field.zero_vec(n);
    for (k, c) in s {
        v[*k] = c.clone();
    }
    v
}

fn dense_to_sparse(field: GroundField, v: &[Scalar]) -> Sparse {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !field.is_zero(c))
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

impl DgAlgebra {
    /// Builds a DGA on the window `[0, labels.len() - 1]`. Shapes are
    /// checked; the algebra axioms are checked by [`DgAlgebra::validate`].
    pub fn new(
        field: GroundField,
        labels: Vec<Vec<String>>,
        diffs: Vec<Matrix>,
        product: &[ProductTerm],
        unit: Vec<Scalar>,
        top_exact: bool,
    ) -> Result<Self> {
        let dims: Vec<usize> = labels.iter().map(Vec::len).collect();
        let complex =
            ChainComplex::with_labels_unchecked(field, 0, dims.clone(), labels, diffs, top_exact)?;
        let hi = dims.len() - 1;
        if unit.len() != dims[0] {
            return Err(Error::invalid("unit has wrong length"));
        }
        let mut dense = empty_products(&dims);
        let mut acc: Vec<Vec<Vec<Vec<Scalar>>>> = (0..=hi)
            .map(|p| {
                (0..=hi - p)
                    .map(|q| vec![field.zero_vec(dims[p + q]); dims[p] * dims[q]])
                    .collect()
            })
            .collect();
        for (idx, (p, i, q, j, k, c)) in product.iter().enumerate() {
            let (p, q) = (*p, *q);
            if p > hi || q > hi || p + q > hi {
                return Err(Error::invalid(format!(
                    "product constant #{idx} lands in degree {} outside window [0, {hi}]",
                    p + q
                )));
            }
            if *i >= dims[p] || *j >= dims[q] || *k >= dims[p + q] {
                return Err(Error::invalid(format!(
                    "product constant #{idx} ({p}, {i}, {q}, {j}, {k}) indexes outside the basis"
                )));
            }
            let slot = &mut acc[p][q][i * dims[q] + j][*k];
            *slot = field.add(slot, c);
        }
        for p in 0..=hi {
            for q in 0..=hi - p {
                dense[p][q] = acc[p][q].iter().map(|v| dense_to_sparse(field, v)).collect();
            }
        }
        Ok(DgAlgebra {
            complex,
            products: dense,
            unit,
        })
    }

    fn from_parts(complex: ChainComplex, products: Vec<Vec<Vec<Sparse>>>, unit: Vec<Scalar>) -> Self {
        DgAlgebra {
            complex,
            products,
            unit,
        }
    }

    /// An ordinary algebra in degree 0 with zero differential.
    pub fn from_algebra(a: &Algebra) -> Self {
        let f = a.field();
        let product: Vec<ProductTerm> = a
            .triples()
            .into_iter()
            .map(|(i, j, k, c)| (0, i, 0, j, k, c))
            .collect();
        DgAlgebra::new(f, vec![a.basis().to_vec()], vec![], &product, a.unit().to_vec(), true)
            .expect("algebra in degree 0")
    }

    /// The ground field in degree 0.
    pub fn ground(field: GroundField) -> Self {
        Self::from_algebra(&Algebra::ground(field))
    }

    pub fn field(&self) -> GroundField {
        self.complex.field()
    }

    pub fn hi(&self) -> usize {
        self.complex.hi() as usize
    }

    pub fn top_exact(&self) -> bool {
        self.complex.top_exact()
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn dim(&self, p: usize) -> usize {
        self.complex.dim(p as i64)
    }

    pub fn dims(&self) -> &[usize] {
        self.complex.dims()
    }

    pub fn total_dim(&self) -> usize {
        self.dims().iter().sum()
    }

    pub fn labels(&self, p: usize) -> &[String] {
        self.complex.labels(p as i64)
    }

    /// `d_p: C_p -> C_{p-1}`.
    pub fn d(&self, p: usize) -> Matrix {
        self.complex.d(p as i64)
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn product(&self, p: usize, i: usize, q: usize, j: usize) -> &Sparse {
        &self.products[p][q][i * self.dim(q) + j]
    }

    /// All nonzero structure constants in `(p, i, q, j, k)` order.
    pub fn product_terms(&self) -> Vec<ProductTerm> {
        let mut out = Vec::new();
        for p in 0..=self.hi() {
            for q in 0..=self.hi() - p {
                for i in 0..self.dim(p) {
                    for j in 0..self.dim(q) {
                        for (k, c) in self.product(p, i, q, j) {
                            out.push((p, i, q, j, *k, c.clone()));
                        }
                    }
                }
            }
        }
        out
    }

    /// `a · b` for `a` in degree `p` and `b` in degree `q`; `None` when
    /// `p + q` is outside the window.
    pub fn mul(&self, p: usize, a: &[Scalar], q: usize, b: &[Scalar]) -> Option<Vec<Scalar>> {
        if p + q > self.hi() {
            return None;
        }
        let f = self.field();
        let mut out = f.zero_vec(self.dim(p + q));
        for (i, ai) in a.iter().enumerate() {
            if f.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if f.is_zero(bj) {
                    continue;
                }
                let c = f.mul(ai, bj);
                for (k, s) in self.product(p, i, q, j) {
                    out[*k] = f.add(&out[*k], &f.mul(&c, s));
                }
            }
        }
        Some(out)
    }

    /// Matrix of `x ↦ a x` from degree `q` to degree `p + q`.
    pub fn left_mul_matrix(&self, p: usize, a: &[Scalar], q: usize) -> Matrix {
        let f = self.field();
        let cols: Vec<Vec<Scalar>> = (0..self.dim(q))
            .map(|j| {
                self.mul(p, a, q, &f.unit_vec(self.dim(q), j))
                    .expect("product inside window")
            })
            .collect();
        Matrix::from_columns(f, self.dim(p + q), &cols)
    }

    /// Matrix of `x ↦ x b` from degree `p` to degree `p + q`.
    pub fn right_mul_matrix(&self, q: usize, b: &[Scalar], p: usize) -> Matrix {
        let f = self.field();
        let cols: Vec<Vec<Scalar>> = (0..self.dim(p))
            .map(|i| {
                self.mul(p, &f.unit_vec(self.dim(p), i), q, b)
                    .expect("product inside window")
            })
            .collect();
        Matrix::from_columns(f, self.dim(p + q), &cols)
    }

    fn basis_vec(&self, p: usize, i: usize) -> Vec<Scalar> {
        self.field().unit_vec(self.dim(p), i)
    }

    fn d_vec(&self, p: usize, v: &[Scalar]) -> Vec<Scalar> {
        if p == 0 {
            Vec::new()
        } else {
            self.d(p).mul_vec(v)
        }
    }

    pub fn validate(&self) -> DgaReport {
        let f = self.field();
        let hi = self.hi();
        let mut report = DgaReport::default();
        for i in 2..=hi {
            if !self.d(i - 1).mul(&self.d(i)).is_zero() {
                report.d_squared.push(i);
            }
        }
        for p in 0..=hi {
            for q in 0..=hi - p {
                if p + q == 0 {
                    continue;
                }
                for i in 0..self.dim(p) {
                    let a = self.basis_vec(p, i);
                    for j in 0..self.dim(q) {
                        let b = self.basis_vec(q, j);
                        let lhs = self.d_vec(p + q, &self.mul(p, &a, q, &b).unwrap());
                        let mut rhs = f.zero_vec(self.dim(p + q - 1));
                        if p > 0 {
                            let t = self.mul(p - 1, &self.d_vec(p, &a), q, &b).unwrap();
                            rhs = f.add_vec(&rhs, &t);
                        }
                        if q > 0 {
                            let t = self.mul(p, &a, q - 1, &self.d_vec(q, &b)).unwrap();
                            f.axpy(&mut rhs, &f.sign(p as i64), &t);
                        }
                        if lhs != rhs {
                            report.leibniz.push(((p, i), (q, j)));
                        }
                    }
                }
            }
        }
        for p in 0..=hi {
            for q in 0..=hi - p {
                for r in 0..=hi - p - q {
                    for i in 0..self.dim(p) {
                        for j in 0..self.dim(q) {
                            let ab = sparse_to_dense(f, self.dim(p + q), self.product(p, i, q, j));
                            for k in 0..self.dim(r) {
                                let c = self.basis_vec(r, k);
                                let lhs = self.mul(p + q, &ab, r, &c).unwrap();
                                let bc =
                                    sparse_to_dense(f, self.dim(q + r), self.product(q, j, r, k));
                                let rhs = self.mul(p, &self.basis_vec(p, i), q + r, &bc).unwrap();
                                if lhs != rhs {
                                    report.associativity.push(((p, i), (q, j), (r, k)));
                                }
                            }
                        }
                    }
                }
            }
        }
        for p in 0..=hi {
            for i in 0..self.dim(p) {
                let e = self.basis_vec(p, i);
                if self.mul(0, &self.unit, p, &e).unwrap() != e
                    || self.mul(p, &e, 0, &self.unit).unwrap() != e
                {
                    report.unit.push((p, i));
                }
            }
        }
        report
    }

    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "dga;{};{:?};{};",
            self.field(),
            self.dims(),
            self.top_exact()
        ));
        for p in 1..=self.hi() {
            for s in self.d(p).entries() {
                h.update(format!("{s},"));
            }
            h.update(";");
        }
        for s in &self.unit {
            h.update(format!("{s},"));
        }
        for (p, i, q, j, k, c) in self.product_terms() {
            h.update(format!("({p},{i},{q},{j},{k},{c})"));
        }
        hex16(&h.finalize())
    }

    /// The degree-0 part as an algebra.
    pub fn degree0_algebra(&self) -> Algebra {
        let f = self.field();
        let n = self.dim(0);
        let table = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| sparse_to_dense(f, n, self.product(0, i, 0, j)))
            .collect();
        Algebra::from_table(f, self.labels(0).to_vec(), self.unit.clone(), table)
            .expect("degree-0 table has the right shape")
    }

    pub fn homology(&self, i: usize) -> Result<Homology> {
        self.complex.homology(i as i64)
    }

    /// `H_0 = C_0 / im d_1` with its induced product.
    pub fn h0(&self) -> Result<H0> {
        if self.hi() == 0 && !self.top_exact() {
            return Err(Error::WindowLimited(
                "H_0 needs degree 1 inside the window".into(),
            ));
        }
        let f = self.field();
        let quotient = Subspace::column_space(&self.d(1), Default::default()).quotient();
        let n = quotient.dim();
        let lifts: Vec<Vec<Scalar>> = (0..n).map(|i| quotient.lift(&f.unit_vec(n, i))).collect();
        let table = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| quotient.project(&self.mul(0, &lifts[i], 0, &lifts[j]).unwrap()))
            .collect();
        let basis = quotient
            .complement()
            .iter()
            .map(|&i| self.labels(0)[i].clone())
            .collect();
        let algebra = Algebra::from_table(f, basis, quotient.project(&self.unit), table)?;
        Ok(H0 { algebra, quotient })
    }

    /// `H_n` with its `H_0`-bimodule structure from chain-level products.
    pub fn hn_bimodule(&self, n: usize) -> Result<HomologyBimodule> {
        if n > self.hi() {
            return Err(Error::DegreeOutOfWindow {
                degree: n as i64,
                lo: 0,
                hi: self.hi() as i64,
            });
        }
        let homology = self.homology(n)?;
        if homology.window_limited {
            return Err(Error::WindowLimited(format!(
                "H_{n} needs degree {} inside the window",
                n + 1
            )));
        }
        let h0 = self.h0()?;
        let f = self.field();
        let reps = homology.representatives();
        let d0 = h0.algebra.dim();
        let act = |left: bool| -> Vec<Matrix> {
            (0..d0)
                .map(|i| {
                    let c = h0.quotient.lift(&f.unit_vec(d0, i));
                    let cols: Vec<Vec<Scalar>> = reps
                        .iter()
                        .map(|z| {
                            let prod = if left {
                                self.mul(0, &c, n, z)
                            } else {
                                self.mul(n, z, 0, &c)
                            };
                            homology.coords(&prod.unwrap())
                        })
                        .collect();
                    Matrix::from_columns(f, reps.len(), &cols)
                })
                .collect()
        };
        let (left, right) = (act(true), act(false));
        let labels = (0..reps.len()).map(|i| format!("h{n}_{i}")).collect();
        let bimodule = Bimodule::new(&h0.algebra, labels, left, right)?;
        Ok(HomologyBimodule {
            h0,
            homology,
            bimodule,
        })
    }

    /// Quotient truncation: `C_n` replaced by `C_n / im d_{n+1}` and all
    /// degrees above `n` set to zero. The window is kept.
    pub fn truncate(&self, n: usize) -> Result<DgAlgebra> {
        Ok(self.truncation_map(n)?.target)
    }

    /// The quotient map `C -> P_n C`.
    pub fn truncation_map(&self, n: usize) -> Result<DgaMap> {
        let hi = self.hi();
        if n > hi {
            return Err(Error::DegreeOutOfWindow {
                degree: n as i64,
                lo: 0,
                hi: hi as i64,
            });
        }
        if n == hi && !self.top_exact() {
            return Err(Error::WindowLimited(format!(
                "truncation at {n} needs d_{} inside the window",
                n + 1
            )));
        }
        let f = self.field();
        let quotient = Subspace::column_space(&self.d(n + 1), Default::default()).quotient();
        let new_dim = |p: usize| match p.cmp(&n) {
            std::cmp::Ordering::Less => self.dim(p),
            std::cmp::Ordering::Equal => quotient.dim(),
            std::cmp::Ordering::Greater => 0,
        };
        // coordinates of old basis vector (p, i) in the truncation
        let proj_matrix = quotient.projection_matrix();
        let project = |p: usize, v: &[Scalar]| -> Vec<Scalar> {
            match p.cmp(&n) {
                std::cmp::Ordering::Less => v.to_vec(),
                std::cmp::Ordering::Equal => quotient.project(v),
                std::cmp::Ordering::Greater => Vec::new(),
            }
        };
        let old_index = |p: usize, i: usize| -> usize {
            if p == n {
                quotient.complement()[i]
            } else {
                i
            }
        };
        let mut labels = Vec::new();
        for p in 0..=hi {
            labels.push(
                (0..new_dim(p))
                    .map(|i| self.labels(p)[old_index(p, i)].clone())
                    .collect(),
            );
        }
        let mut diffs = Vec::new();
        for p in 1..=hi {
            let cols: Vec<Vec<Scalar>> = (0..new_dim(p))
                .map(|i| project(p - 1, &self.d(p).column(old_index(p, i))))
                .collect();
            diffs.push(Matrix::from_columns(f, new_dim(p - 1), &cols));
        }
        let mut products = empty_products(&(0..=hi).map(new_dim).collect::<Vec<_>>());
        for p in 0..=n {
            for q in 0..=n - p {
                let entries = (0..new_dim(p))
                    .flat_map(|i| (0..new_dim(q)).map(move |j| (i, j)))
                    .map(|(i, j)| {
                        let v = sparse_to_dense(
                            f,
                            self.dim(p + q),
                            self.product(p, old_index(p, i), q, old_index(q, j)),
                        );
                        dense_to_sparse(f, &project(p + q, &v))
                    })
                    .collect();
                products[p][q] = entries;
            }
        }
        let dims: Vec<usize> = (0..=hi).map(new_dim).collect();
        let complex = ChainComplex::with_labels_unchecked(f, 0, dims, labels, diffs, true)?;
        let unit = project(0, &self.unit);
        let target = DgAlgebra::from_parts(complex, products, unit);
        let maps = (0..=hi)
            .map(|p| match p.cmp(&n) {
                std::cmp::Ordering::Less => Matrix::identity(f, self.dim(p)),
                std::cmp::Ordering::Equal => proj_matrix.clone(),
                std::cmp::Ordering::Greater => Matrix::zeros(f, 0, self.dim(p)),
            })
            .collect();
        DgaMap::new(self.clone(), target, maps)
    }

    /// Graded tensor product with Koszul signs. Basis of degree `k`: pairs
    /// `(a, b)` with `|a|` ascending, row-major within each `(|a|, |b|)` block.
    pub fn tensor(&self, other: &DgAlgebra) -> Result<DgAlgebra> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch("tensor product of DG algebras".into()));
        }
        let f = self.field();
        let (ha, hb) = (self.hi(), other.hi());
        let (hi, top_exact) = match (self.top_exact(), other.top_exact()) {
            (true, true) => (ha + hb, true),
            (true, false) => (hb, false),
            (false, true) => (ha, false),
            (false, false) => (ha.min(hb), false),
        };
        let da = |p: usize| if p <= ha { self.dim(p) } else { 0 };
        let db = |q: usize| if q <= hb { other.dim(q) } else { 0 };
        // offsets[k][p] = start of the (p, k - p) block in degree k
        let mut offsets = vec![Vec::new(); hi + 1];
        let mut dims = vec![0usize; hi + 1];
        let mut labels = vec![Vec::new(); hi + 1];
        for k in 0..=hi {
            for p in 0..=k {
                offsets[k].push(dims[k]);
                let q = k - p;
                for i in 0..da(p) {
                    for j in 0..db(q) {
                        labels[k].push(format!("{}⊗{}", self.labels(p)[i], other.labels(q)[j]));
                    }
                }
                dims[k] += da(p) * db(q);
            }
        }
        let idx = |p: usize, i: usize, q: usize, j: usize| offsets[p + q][p] + i * db(q) + j;
        let mut diffs = Vec::new();
        for k in 1..=hi {
            let mut d = Matrix::zeros(f, dims[k - 1], dims[k]);
            for p in 0..=k {
                let q = k - p;
                for i in 0..da(p) {
                    for j in 0..db(q) {
                        let col = idx(p, i, q, j);
                        if p > 0 {
                            let dai = self.d(p).column(i);
                            for (r, c) in dai.iter().enumerate() {
                                if !f.is_zero(c) {
                                    d.add_at(idx(p - 1, r, q, j), col, c);
                                }
                            }
                        }
                        if q > 0 {
                            let dbj = other.d(q).column(j);
                            let s = f.sign(p as i64);
                            for (r, c) in dbj.iter().enumerate() {
                                if !f.is_zero(c) {
                                    d.add_at(idx(p, i, q - 1, r), col, &f.mul(&s, c));
                                }
                            }
                        }
                    }
                }
            }
            diffs.push(d);
        }
        let mut products = empty_products(&dims);
        for k1 in 0..=hi {
            for k2 in 0..=hi - k1 {
                let mut table = vec![Vec::new(); dims[k1] * dims[k2]];
                for p1 in 0..=k1 {
                    let q1 = k1 - p1;
                    for p2 in 0..=k2 {
                        let q2 = k2 - p2;
                        if p1 + p2 > ha || q1 + q2 > hb {
                            continue;
                        }
                        let sign = f.sign((q1 * p2) as i64);
                        for i1 in 0..da(p1) {
                            for j1 in 0..db(q1) {
                                for i2 in 0..da(p2) {
                                    for j2 in 0..db(q2) {
                                        let pa = self.product(p1, i1, p2, i2);
                                        let pb = other.product(q1, j1, q2, j2);
                                        if pa.is_empty() || pb.is_empty() {
                                            continue;
                                        }
                                        let mut acc = f.zero_vec(dims[k1 + k2]);
                                        for (ka, ca) in pa {
                                            for (kb, cb) in pb {
                                                let t = idx(p1 + p2, *ka, q1 + q2, *kb);
                                                acc[t] = f.add(
                                                    &acc[t],
                                                    &f.mul(&sign, &f.mul(ca, cb)),
                                                );
                                            }
                                        }
                                        let slot = &mut table[idx(p1, i1, q1, j1) * dims[k2]
                                            + idx(p2, i2, q2, j2)];
                                        *slot = dense_to_sparse(f, &acc);
                                    }
                                }
                            }
                        }
                    }
                }
                products[k1][k2] = table;
            }
        }
        let mut unit = f.zero_vec(dims[0]);
        for (i, ci) in self.unit.iter().enumerate() {
            for (j, cj) in other.unit.iter().enumerate() {
                unit[idx(0, i, 0, j)] = f.mul(ci, cj);
            }
        }
        let complex = ChainComplex::with_labels_unchecked(f, 0, dims, labels, diffs, top_exact)?;
        Ok(DgAlgebra::from_parts(complex, products, unit))
    }

    /// The same DGA in new bases: column `j` of `mats[p]` is the new basis
    /// vector `j` of degree `p`, in old coordinates.
    pub fn change_basis(&self, mats: &[Matrix]) -> Result<DgAlgebra> {
        let hi = self.hi();
        if mats.len() != hi + 1 {
            return Err(Error::invalid("one change-of-basis matrix per degree required"));
        }
        let f = self.field();
        let invs = mats
            .iter()
            .map(|m| {
                m.inverse()
                    .ok_or_else(|| Error::invalid("change of basis is not invertible"))
            })
            .collect::<Result<Vec<_>>>()?;
        let diffs = (1..=hi)
            .map(|p| invs[p - 1].mul(&self.d(p)).mul(&mats[p]))
            .collect();
        let mut products = empty_products(self.dims());
        for p in 0..=hi {
            for q in 0..=hi - p {
                let cp = mats[p].columns();
                let cq = mats[q].columns();
                let mut table = Vec::with_capacity(cp.len() * cq.len());
                for a in &cp {
                    for b in &cq {
                        let v = invs[p + q].mul_vec(&self.mul(p, a, q, b).unwrap());
                        table.push(dense_to_sparse(f, &v));
                    }
                }
                products[p][q] = table;
            }
        }
        let labels = (0..=hi)
            .map(|p| (0..self.dim(p)).map(|i| format!("b{p}_{i}")).collect())
            .collect();
        let complex = ChainComplex::with_labels_unchecked(
            f,
            0,
            self.dims().to_vec(),
            labels,
            diffs,
            self.top_exact(),
        )?;
        Ok(DgAlgebra::from_parts(
            complex,
            products,
            invs[0].mul_vec(&self.unit),
        ))
    }

    /// The same algebra viewed on a larger window (only for exact tops).
    pub fn extend_to(&self, hi: usize) -> Result<DgAlgebra> {
        if hi <= self.hi() {
            return Ok(self.clone());
        }
        let complex = self.complex.extend_to(hi as i64)?;
        let mut products = empty_products(complex.dims());
        for p in 0..=self.hi() {
            for q in 0..=self.hi() - p {
                products[p][q] = self.products[p][q].clone();
            }
        }
        Ok(DgAlgebra::from_parts(complex, products, self.unit.clone()))
    }

    /// `base ∨ M[shift]`: `M` placed in degree `shift` as a square-zero
    /// ideal on which degree-0 chains act through `H_0`.
    ///
    /// `m` may be a bimodule over `H_0(base)` or over the degree-0 algebra
    /// `C_0`; in the latter case boundaries must act as zero.
    pub fn trivial_extension(&self, m: &Bimodule, shift: usize) -> Result<DgAlgebra> {
        Ok(self.trivial_extension_maps(m, shift)?.0.target)
    }

    /// The trivial extension with its inclusion `base -> base ∨ M[shift]`
    /// and projection `base ∨ M[shift] -> base`.
    pub fn trivial_extension_maps(&self, m: &Bimodule, shift: usize) -> Result<(DgaMap, DgaMap)> {
        if shift == 0 {
            return Err(Error::invalid("trivial extension needs shift >= 1"));
        }
        let f = self.field();
        if m.field() != f {
            return Err(Error::FieldMismatch("trivial extension".into()));
        }
        let c0 = self.degree0_algebra();
        let h0 = self.h0()?;
        let (left, right): (Vec<Matrix>, Vec<Matrix>) = if m.is_over(&h0.algebra) {
            (0..self.dim(0))
                .map(|k| {
                    let x = h0.quotient.project(&f.unit_vec(self.dim(0), k));
                    (m.left_action(&x), m.right_action(&x))
                })
                .unzip()
        } else if m.is_over(&c0) {
            for (col, b) in self.d(1).columns().iter().enumerate() {
                if !m.left_action(b).is_zero() || !m.right_action(b).is_zero() {
                    return Err(Error::invalid(format!(
                        "boundary d({}) acts nontrivially on M, so the action does not factor through H_0",
                        self.labels(1)[col]
                    )));
                }
            }
            (0..self.dim(0))
                .map(|k| (m.left(k).clone(), m.right(k).clone()))
                .unzip()
        } else {
            return Err(Error::AlgebraMismatch(
                "bimodule is neither over H_0 nor over the degree-0 algebra of the base".into(),
            ));
        };
        if shift > self.hi() && !self.top_exact() {
            return Err(Error::WindowLimited(format!(
                "base is only known up to degree {}, below the shift {shift}",
                self.hi()
            )));
        }
        let base = self.extend_to(shift)?;
        let hi = base.hi();
        let dm = m.dim();
        let mut dims = base.dims().to_vec();
        dims[shift] += dm;
        let off = base.dim(shift);
        let mut labels: Vec<Vec<String>> = (0..=hi).map(|p| base.labels(p).to_vec()).collect();
        labels[shift].extend(m.basis().iter().map(|s| format!("m:{s}")));
        let mut diffs = Vec::new();
        for p in 1..=hi {
            let mut d = Matrix::zeros(f, dims[p - 1], dims[p]);
            d.set_block(0, 0, &base.d(p));
            diffs.push(d);
        }
        let mut products = empty_products(&dims);
        for p in 0..=hi {
            for q in 0..=hi - p {
                let mut table = vec![Vec::new(); dims[p] * dims[q]];
                for i in 0..base.dim(p) {
                    for j in 0..base.dim(q) {
                        table[i * dims[q] + j] = base.product(p, i, q, j).clone();
                    }
                }
                if p == 0 && q == shift {
                    for k in 0..base.dim(0) {
                        for j in 0..dm {
                            table[k * dims[q] + off + j] = left[k]
                                .column(j)
                                .iter()
                                .enumerate()
                                .filter(|(_, c)| !f.is_zero(c))
                                .map(|(r, c)| (off + r, c.clone()))
                                .collect();
                        }
                    }
                }
                if q == 0 && p == shift {
                    for i in 0..dm {
                        for k in 0..base.dim(0) {
                            table[(off + i) * dims[0] + k] = right[k]
                                .column(i)
                                .iter()
                                .enumerate()
                                .filter(|(_, c)| !f.is_zero(c))
                                .map(|(r, c)| (off + r, c.clone()))
                                .collect();
                        }
                    }
                }
                products[p][q] = table;
            }
        }
        let complex =
            ChainComplex::with_labels_unchecked(f, 0, dims.clone(), labels, diffs, base.top_exact())?;
        let ext = DgAlgebra::from_parts(complex, products, base.unit.clone());
        let incl: Vec<Matrix> = (0..=hi)
            .map(|p| {
                let mut mat = Matrix::zeros(f, dims[p], base.dim(p));
                mat.set_block(0, 0, &Matrix::identity(f, base.dim(p)));
                mat
            })
            .collect();
        let proj: Vec<Matrix> = (0..=hi)
            .map(|p| {
                let mut mat = Matrix::zeros(f, base.dim(p), dims[p]);
                mat.set_block(0, 0, &Matrix::identity(f, base.dim(p)));
                mat
            })
            .collect();
        let inclusion = DgaMap::new(base.clone(), ext.clone(), incl)?;
        let projection = DgaMap::new(ext, base, proj)?;
        Ok((inclusion, projection))
    }

    /// Searches for a witness that `self` is a Postnikov extension of type
    /// `(m, n)` over `a`.
    pub fn is_postnikov_extension(
        &self,
        a: &Algebra,
        m: &Bimodule,
        n: usize,
        caps: &Caps,
    ) -> Result<Option<PostnikovExtensionWitness>> {
        if n == 0 {
            return Err(Error::invalid("extension level must be at least 1"));
        }
        if self.hi() < n + 1 && !self.top_exact() {
            return Err(Error::WindowLimited(format!(
                "window must reach degree {}",
                n + 1
            )));
        }
        m.check_over(a)?;
        for i in 1..=self.hi() {
            if i == n {
                continue;
            }
            let h = self.homology(i)?;
            if h.dim != 0 && !h.window_limited {
                return Ok(None);
            }
        }
        let hn = self.hn_bimodule(n)?;
        if hn.bimodule.dim() != m.dim() {
            return Ok(None);
        }
        for phi in algebra_isomorphisms(&hn.h0.algebra, a, caps)? {
            let psi = phi.inverse().expect("isomorphism");
            let pulled = hn.bimodule.pullback(a, &psi)?;
            if let Some(iso) = find_bimodule_isomorphism(&pulled, m, caps)? {
                return Ok(Some(PostnikovExtensionWitness {
                    extension: self.clone(),
                    algebra: a.clone(),
                    bimodule: m.clone(),
                    n,
                    algebra_iso: phi,
                    bimodule_iso: iso.matrix,
                }));
            }
        }
        Ok(None)
    }
}

/// Algebra isomorphisms `a -> b`: just the identity when the structures
/// coincide, otherwise every isomorphism found by exhaustive search.
fn algebra_isomorphisms(a: &Algebra, b: &Algebra, caps: &Caps) -> Result<Vec<Matrix>> {
    let f = a.field();
    let n = a.dim();
    if n != b.dim() {
        return Ok(Vec::new());
    }
    if a.unit() == b.unit() && a.triples() == b.triples() {
        return Ok(vec![Matrix::identity(f, n)]);
    }
    match f.order() {
        None => Ok(find_algebra_isomorphism(a, b, caps)?.into_iter().collect()),
        Some(_) => {
            let free = n * n;
            let p = f.order().unwrap();
            let count = crate::caps::checked_pow(p, free)
                .filter(|&c| c <= caps.enumeration)
                .ok_or_else(|| {
                    Error::cap("algebra isomorphism search", format!("{p}^{free}"), caps.enumeration)
                })?;
            Ok((0..count)
                .map(|idx| {
                    let e = crate::algebras::digits(f, idx, free);
                    Matrix::from_rows(f, n, e.chunks(n).map(|c| c.to_vec()).collect())
                })
                .filter(|phi| is_algebra_map(a, b, phi) && phi.is_invertible())
                .collect())
        }
    }
}

fn empty_products(dims: &[usize]) -> Vec<Vec<Vec<Sparse>>> {
    let hi = dims.len() - 1;
    (0..=hi)
        .map(|p| {
            (0..=hi - p)
                .map(|q| vec![Vec::new(); dims[p] * dims[q]])
                .collect()
        })
        .collect()
}

/// Explicit data showing that a DGA is a Postnikov extension of type
/// `(M, n)` over `A`.
#[derive(Clone, Debug)]
pub struct PostnikovExtensionWitness {
    pub extension: DgAlgebra,
    pub algebra: Algebra,
    pub bimodule: Bimodule,
    pub n: usize,
    /// `H_0(Y) -> A`.
    pub algebra_iso: Matrix,
    /// `H_n(Y) -> M`, a bimodule map once `H_n(Y)` is pulled back along
    /// the inverse of `algebra_iso`.
    pub bimodule_iso: Matrix,
}

/// A unital multiplicative chain map, with components in degrees
/// `0..=min(source.hi, target.hi)`.
#[derive(Clone, Debug)]
pub struct DgaMap {
    source: DgAlgebra,
    target: DgAlgebra,
    maps: Vec<Matrix>,
}

impl DgaMap {
    pub fn new(source: DgAlgebra, target: DgAlgebra, maps: Vec<Matrix>) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch("DG algebra map".into()));
        }
        let h = source.hi().min(target.hi());
        let mut maps = maps;
        maps.truncate(h + 1);
        if maps.len() != h + 1 {
            return Err(Error::invalid(format!("a DGA map needs components in degrees 0..={h}")));
        }
        for (p, m) in maps.iter().enumerate() {
            if m.rows() != target.dim(p) || m.cols() != source.dim(p) {
                return Err(Error::invalid(format!("map component in degree {p} has wrong shape")));
            }
        }
        let f = source.field();
        for p in 1..=h {
            if target.d(p).mul(&maps[p]) != maps[p - 1].mul(&source.d(p)) {
                return Err(Error::invalid(format!(
                    "map does not commute with d in degree {p}"
                )));
            }
        }
        if maps[0].mul_vec(source.unit()) != target.unit() {
            return Err(Error::invalid("map does not preserve the unit"));
        }
        for p in 0..=h {
            for q in 0..=h - p {
                for i in 0..source.dim(p) {
                    for j in 0..source.dim(q) {
                        let ab = sparse_to_dense(f, source.dim(p + q), source.product(p, i, q, j));
                        let lhs = maps[p + q].mul_vec(&ab);
                        let rhs = target
                            .mul(p, &maps[p].column(i), q, &maps[q].column(j))
                            .unwrap();
                        if lhs != rhs {
                            return Err(Error::invalid(format!(
                                "map is not multiplicative on e{p}_{i} * e{q}_{j}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(DgaMap {
            source,
            target,
            maps,
        })
    }

    pub fn identity(c: &DgAlgebra) -> Self {
        let maps = (0..=c.hi())
            .map(|p| Matrix::identity(c.field(), c.dim(p)))
            .collect();
        DgaMap {
            source: c.clone(),
            target: c.clone(),
            maps,
        }
    }

    /// The unit map `k -> c`.
    pub fn unit_map(c: &DgAlgebra) -> Self {
        let f = c.field();
        let k = DgAlgebra::ground(f);
        let maps = vec![Matrix::from_columns(f, c.dim(0), &[c.unit().to_vec()])];
        DgaMap::new(k, c.clone(), maps).expect("unit map")
    }

    /// `c -> c ⊗ e`, `x ↦ x ⊗ 1`.
    pub fn tensor_inclusion(c: &DgAlgebra, e: &DgAlgebra) -> Result<Self> {
        let t = c.tensor(e)?;
        let f = c.field();
        let maps = (0..=c.hi().min(t.hi()))
            .map(|p| {
                // the (p, 0) block starts at offset 0 + sum of lower blocks; in
                // degree p the block (p, 0) is the last one
                let mut m = Matrix::zeros(f, t.dim(p), c.dim(p));
                let start = t.dim(p) - c.dim(p) * e.dim(0);
                for i in 0..c.dim(p) {
                    for (j, u) in e.unit().iter().enumerate() {
                        if !f.is_zero(u) {
                            m.set(start + i * e.dim(0) + j, i, u.clone());
                        }
                    }
                }
                m
            })
            .collect();
        DgaMap::new(c.clone(), t, maps)
    }

    /// `c ⊗ e -> c`, `x ⊗ y ↦ x ε(y)` for an augmentation `ε` of `e`
    /// given on `e_0` and vanishing in positive degrees.
    pub fn tensor_augmentation(c: &DgAlgebra, e: &DgAlgebra, eps: &[Scalar]) -> Result<Self> {
        let t = c.tensor(e)?;
        let f = c.field();
        let maps = (0..=c.hi().min(t.hi()))
            .map(|p| {
                let mut m = Matrix::zeros(f, c.dim(p), t.dim(p));
                let start = t.dim(p) - c.dim(p) * e.dim(0);
                for i in 0..c.dim(p) {
                    for (j, u) in eps.iter().enumerate() {
                        if !f.is_zero(u) {
                            m.set(i, start + i * e.dim(0) + j, u.clone());
                        }
                    }
                }
                m
            })
            .collect();
        DgaMap::new(t, c.clone(), maps)
    }

    pub fn source(&self) -> &DgAlgebra {
        &self.source
    }

    pub fn target(&self) -> &DgAlgebra {
        &self.target
    }

    pub fn component(&self, p: usize) -> &Matrix {
        &self.maps[p]
    }

    pub fn hi(&self) -> usize {
        self.maps.len() - 1
    }

    /// `after ∘ self`.
    pub fn then(&self, after: &DgaMap) -> Result<DgaMap> {
        if self.target != after.source {
            return Err(Error::invalid("composition of non-composable DGA maps"));
        }
        let h = self.hi().min(after.hi());
        let maps = (0..=h).map(|p| after.maps[p].mul(&self.maps[p])).collect();
        DgaMap::new(self.source.clone(), after.target.clone(), maps)
    }

    /// The underlying chain map on a common window: a shorter exact side is
    /// padded with zeros, otherwise the longer side is cut down.
    pub fn chain_map(&self) -> Result<ChainMap> {
        let (s, t) = (self.source.complex(), self.target.complex());
        let (s, t) = if s.hi() == t.hi() {
            (s.clone(), t.clone())
        } else if s.hi() < t.hi() {
            if s.top_exact() {
                (s.clone(), t.clone())
            } else {
                (s.clone(), t.restrict(s.hi())?)
            }
        } else if t.top_exact() {
            (s.clone(), t.clone())
        } else {
            (s.restrict(t.hi())?, t.clone())
        };
        let h = s.hi().max(t.hi()) as usize;
        let f = self.source.field();
        let maps = (0..=h)
            .map(|p| {
                if p < self.maps.len() {
                    self.maps[p].clone()
                } else {
                    Matrix::zeros(f, t.dim(p as i64), s.dim(p as i64))
                }
            })
            .collect();
        ChainMap::new(s, t, maps)
    }

    /// Relative homology `H_i(cone f)` as an `H_0(source)`-bimodule, with
    /// the connecting map to `H_{i-1}(source)`.
    pub fn relative_structure(&self, i: usize) -> Result<RelativeStructure> {
        rel_action_and_connecting(self, i)
    }
}

/// Output of [`rel_action_and_connecting`].
#[derive(Clone, Debug)]
pub struct RelativeStructure {
    pub h0: H0,
    pub cone: ChainComplex,
    pub homology: Homology,
    /// `H_i(cone f)` over `H_0(source)`.
    pub bimodule: Bimodule,
    /// `H_{i-1}(source)` over `H_0(source)`.
    pub source_bimodule: Bimodule,
    /// `∂: H_i(cone f) -> H_{i-1}(source)`, induced by `(b, a) ↦ a`.
    pub connecting: Matrix,
}

/// Bimodule structure on relative homology and the connecting map.
///
/// The cone of `f: A -> B` has `cone_i = B_i ⊕ A_{i-1}`. A degree-0 chain
/// `c` of `A` acts by `c (b, a) = (f(c) b, c a)` and
/// `(b, a) c = (b f(c), a c)`; both commute with the cone differential, and
/// boundaries act by null-homotopic maps.
pub fn rel_action_and_connecting(f: &DgaMap, i: usize) -> Result<RelativeStructure> {
    let field = f.source.field();
    let cm = f.chain_map()?;
    let cone_c = cone(&cm)?;
    if i as i64 > cone_c.hi() {
        return Err(Error::DegreeOutOfWindow {
            degree: i as i64,
            lo: 0,
            hi: cone_c.hi(),
        });
    }
    let homology = cone_c.homology(i as i64)?;
    if homology.window_limited {
        return Err(Error::WindowLimited(format!(
            "relative H_{i} needs degree {} inside the window",
            i + 1
        )));
    }
    let src = &f.source;
    let tgt = &f.target;
    let h0 = src.h0()?;
    let d0 = h0.algebra.dim();
    let tb = tgt.complex().dim(i as i64);
    let sa = src.complex().dim(i as i64 - 1);
    let reps = homology.representatives();
    let source_h = if i >= 1 {
        if i - 1 > src.hi() {
            None
        } else {
            Some(src.hn_bimodule(i - 1)?)
        }
    } else {
        None
    };
    let mut left = Vec::new();
    let mut right = Vec::new();
    for k in 0..d0 {
        let c = h0.quotient.lift(&field.unit_vec(d0, k));
        let fc = f.maps[0].mul_vec(&c);
        let act = |is_left: bool| -> Matrix {
            let cols: Vec<Vec<Scalar>> = reps
                .iter()
                .map(|z| {
                    let (b, a) = z.split_at(tb);
                    let mut out = if tb > 0 {
                        if is_left {
                            tgt.mul(0, &fc, i, b).unwrap()
                        } else {
                            tgt.mul(i, b, 0, &fc).unwrap()
                        }
                    } else {
                        Vec::new()
                    };
                    if sa > 0 {
                        out.extend(if is_left {
                            src.mul(0, &c, i - 1, a).unwrap()
                        } else {
                            src.mul(i - 1, a, 0, &c).unwrap()
                        });
                    }
                    homology.coords(&out)
                })
                .collect();
            Matrix::from_columns(field, reps.len(), &cols)
        };
        left.push(act(true));
        right.push(act(false));
    }
    let labels = (0..reps.len()).map(|j| format!("r{i}_{j}")).collect();
    let bimodule = Bimodule::new(&h0.algebra, labels, left, right)?;
    let (source_bimodule, connecting) = match source_h {
        Some(sh) => {
            let cols: Vec<Vec<Scalar>> = reps
                .iter()
                .map(|z| sh.homology.coords(&z[tb..]))
                .collect();
            let conn = Matrix::from_columns(field, sh.bimodule.dim(), &cols);
            (sh.bimodule, conn)
        }
        None => (
            Bimodule::zero(&h0.algebra),
            Matrix::zeros(field, 0, reps.len()),
        ),
    };
    Ok(RelativeStructure {
        h0,
        cone: cone_c,
        homology,
        bimodule,
        source_bimodule,
        connecting,
    })
}
