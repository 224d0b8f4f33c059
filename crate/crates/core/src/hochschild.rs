//! Hochschild cochains `Hom(Ā^{⊗s}, M)` of a finite-dimensional algebra with
//! bimodule coefficients, their cohomology, the `Aut(M)` action on it,
//! derivations, the kernel-of-multiplication bimodule, and Hochschild
//! cohomology of connected DG algebras with trivial coefficients.

use sha2::{Digest, Sha256};

use crate::algebras::{hex16, Algebra, Bimodule, BimoduleMap};
use crate::caps::Caps;
use crate::complexes::ChainComplex;
use crate::dga::{DgAlgebra, SemifreeDga};
use crate::error::{Error, Result};
use crate::exactla::{Convention, GroundField, Matrix, Scalar, Subquotient};

/// Cochain complex `C^s = Hom(X^{⊗s}, M)` with `X = Ā` (normalized) or
/// `X = A`.
///
/// For the normalized complex `Ā` is spanned by the standard basis vectors
/// other than the pivot `p`, the first coordinate where the unit `u` is
/// nonzero; `v ∈ A` projects to `Ā` by `β_j = v_j - (v_p / u_p) u_j`.
///
/// A cochain is a coordinate vector indexed by `tuple * dim M + m`, with
/// tuples of `X`-basis indices read as base-`dim X` numbers, first slot
/// most significant.
#[derive(Clone, Debug)]
pub struct HochschildComplex {
    algebra: Algebra,
    bimodule: Bimodule,
    normalized: bool,
    /// Algebra basis indices spanning `X`.
    slots: Vec<usize>,
    pivot: usize,
    caps: Caps,
}

/// Cohomology of a [`HochschildComplex`] at one level.
#[derive(Clone, Debug)]
pub struct HochschildCohomology {
    pub level: usize,
    pub dim: usize,
    pub classes: Subquotient,
    pub context: String,
}

impl HochschildCohomology {
    /// Canonical class representatives.
    pub fn representatives(&self) -> Vec<CohomologyClass> {
        self.classes
            .representatives()
            .into_iter()
            .map(|v| CohomologyClass {
                level: self.level,
                cochain: v,
                context: self.context.clone(),
            })
            .collect()
    }

    /// Coordinates of a cocycle's class.
    pub fn coords(&self, cocycle: &[Scalar]) -> Vec<Scalar> {
        self.classes.coords(cocycle)
    }

    /// The cocycle `Σ c_i rep_i`.
    pub fn class_from_coords(&self, coords: &[Scalar]) -> CohomologyClass {
        CohomologyClass {
            level: self.level,
            cochain: self.classes.lift(coords),
            context: self.context.clone(),
        }
    }
}

/// A cocycle of a Hochschild complex, tagged with the context hash of
/// `(A, M, s, normalized)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CohomologyClass {
    pub level: usize,
    pub cochain: Vec<Scalar>,
    pub context: String,
}

impl HochschildComplex {
    pub fn new(a: &Algebra, m: &Bimodule, normalized: bool) -> Result<Self> {
        Self::with_caps(a, m, normalized, Caps::default())
    }

    pub fn with_caps(a: &Algebra, m: &Bimodule, normalized: bool, caps: Caps) -> Result<Self> {
        if a.field() != m.field() {
            return Err(Error::FieldMismatch("Hochschild coefficients".into()));
        }
        m.check_over(a)?;
        let f = a.field();
        let pivot = a.unit().iter().position(|c| !f.is_zero(c));
        let pivot = match (pivot, a.dim()) {
            (Some(p), _) => p,
            (None, 0) => 0,
            (None, _) => return Err(Error::invalid("algebra unit is zero")),
        };
        let slots = if normalized {
            (0..a.dim()).filter(|&j| j != pivot).collect()
        } else {
            (0..a.dim()).collect()
        };
        Ok(HochschildComplex {
            algebra: a.clone(),
            bimodule: m.clone(),
            normalized,
            slots,
            pivot,
            caps,
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn bimodule(&self) -> &Bimodule {
        &self.bimodule
    }

    pub fn normalized(&self) -> bool {
        self.normalized
    }

    pub fn field(&self) -> GroundField {
        self.algebra.field()
    }

    /// Number of tensor slots' basis elements, `dim X`.
    pub fn slot_dim(&self) -> usize {
        self.slots.len()
    }

    /// Algebra basis indices spanning `X`.
    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    /// Hash binding a cochain to `(A, M, s, normalized)`.
    pub fn context(&self, s: usize) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "hochschild;{};{};{s};{}",
            self.algebra.fingerprint(),
            self.bimodule.fingerprint(),
            self.normalized
        ));
        hex16(&h.finalize())
    }

    fn tuples(&self, s: usize) -> Result<usize> {
        let n = self.slots.len() as u64;
        let count = crate::caps::checked_pow(n, s)
            .and_then(|t| t.checked_mul(self.bimodule.dim().max(1) as u64))
            .filter(|&t| t <= self.caps.tensor)
            .ok_or_else(|| {
                Error::cap(
                    format!("cochain space at level {s}"),
                    format!("{n}^{s} x {}", self.bimodule.dim()),
                    self.caps.tensor,
                )
            })?;
        let _ = count;
        Ok(self.slots.len().pow(s as u32))
    }

    /// `dim C^s`.
    pub fn cochain_dim(&self, s: usize) -> Result<usize> {
        Ok(self.tuples(s)? * self.bimodule.dim())
    }

    /// Tuple index to slot indices.
    pub fn decode(&self, mut t: usize, s: usize) -> Vec<usize> {
        let n = self.slots.len();
        let mut out = vec![0; s];
        for slot in out.iter_mut().rev() {
            *slot = t % n;
            t /= n;
        }
        out
    }

    pub fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &i| acc * self.slots.len() + i)
    }

    /// `X`-coordinates of an algebra element.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.field();
        if !self.normalized {
            return v.to_vec();
        }
        let u = self.algebra.unit();
        let r = f.mul(&v[self.pivot], &f.inv(&u[self.pivot]).expect("pivot"));
        self.slots
            .iter()
            .map(|&j| f.sub(&v[j], &f.mul(&r, &u[j])))
            .collect()
    }

    fn slot_vector(&self, k: usize) -> Vec<Scalar> {
        self.field().unit_vec(self.algebra.dim(), self.slots[k])
    }

    /// Matrix of `δ: C^s -> C^{s+1}`.
    pub fn delta(&self, s: usize) -> Result<Matrix> {
        let f = self.field();
        let dm = self.bimodule.dim();
        let n_in = self.tuples(s)?;
        let n_out = self.tuples(s + 1)?;
        let mut d = Matrix::zeros(f, n_out * dm, n_in * dm);
        let mut products = Vec::new();
        for a in 0..self.slots.len() {
            for b in 0..self.slots.len() {
                let ab = self.algebra.mul(&self.slot_vector(a), &self.slot_vector(b));
                products.push(self.project(&ab));
            }
        }
        let left: Vec<&Matrix> = self.slots.iter().map(|&j| self.bimodule.left(j)).collect();
        let right: Vec<&Matrix> = self.slots.iter().map(|&j| self.bimodule.right(j)).collect();
        let nx = self.slots.len();
        for t in 0..n_out {
            let a = self.decode(t, s + 1);
            // a_1 · f(a_2, ..., a_{s+1})
            let inner = self.encode(&a[1..]);
            for r in 0..dm {
                for c in 0..dm {
                    let v = left[a[0]].get(r, c);
                    if !f.is_zero(v) {
                        d.add_at(t * dm + r, inner * dm + c, v);
                    }
                }
            }
            // (-1)^i f(..., a_i a_{i+1}, ...)
            for i in 1..=s {
                let sign = f.sign(i as i64);
                let prod = &products[a[i - 1] * nx + a[i]];
                for (k, c) in prod.iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    let mut tup = Vec::with_capacity(s);
                    tup.extend_from_slice(&a[..i - 1]);
                    tup.push(k);
                    tup.extend_from_slice(&a[i + 1..]);
                    let col = self.encode(&tup);
                    let coeff = f.mul(&sign, c);
                    for r in 0..dm {
                        d.add_at(t * dm + r, col * dm + r, &coeff);
                    }
                }
            }
            // (-1)^{s+1} f(a_1, ..., a_s) · a_{s+1}
            let sign = f.sign(s as i64 + 1);
            let inner = self.encode(&a[..s]);
            for r in 0..dm {
                for c in 0..dm {
                    let v = right[a[s]].get(r, c);
                    if !f.is_zero(v) {
                        d.add_at(t * dm + r, inner * dm + c, &f.mul(&sign, v));
                    }
                }
            }
        }
        Ok(d)
    }

    /// `δf` evaluated tuple by tuple, without assembling the matrix.
    pub fn apply_delta(&self, s: usize, cochain: &[Scalar]) -> Result<Vec<Scalar>> {
        let f = self.field();
        let dm = self.bimodule.dim();
        if cochain.len() != self.cochain_dim(s)? {
            return Err(Error::invalid(format!(
                "cochain has {} coordinates, level {s} needs {}",
                cochain.len(),
                self.cochain_dim(s)?
            )));
        }
        let n_out = self.tuples(s + 1)?;
        let nx = self.slots.len();
        let mut products = Vec::with_capacity(nx * nx);
        for a in 0..nx {
            for b in 0..nx {
                let ab = self.algebra.mul(&self.slot_vector(a), &self.slot_vector(b));
                products.push(self.project(&ab));
            }
        }
        let mut out = f.zero_vec(n_out * dm);
        for t in 0..n_out {
            let a = self.decode(t, s + 1);
            let mut acc = self
                .bimodule
                .left(self.slots[a[0]])
                .mul_vec(self.evaluate(cochain, &a[1..]).as_slice());
            for i in 1..=s {
                let sign = f.sign(i as i64);
                for (k, c) in products[a[i - 1] * nx + a[i]].iter().enumerate() {
                    if f.is_zero(c) {
                        continue;
                    }
                    let mut tup = Vec::with_capacity(s);
                    tup.extend_from_slice(&a[..i - 1]);
                    tup.push(k);
                    tup.extend_from_slice(&a[i + 1..]);
                    f.axpy(&mut acc, &f.mul(&sign, c), &self.evaluate(cochain, &tup));
                }
            }
            let last = self
                .bimodule
                .right(self.slots[a[s]])
                .mul_vec(&self.evaluate(cochain, &a[..s]));
            f.axpy(&mut acc, &f.sign(s as i64 + 1), &last);
            out[t * dm..(t + 1) * dm].clone_from_slice(&acc);
        }
        Ok(out)
    }

    /// Values of an unnormalized cochain on tuples of `Ā`-basis elements.
    pub fn restrict(&self, s: usize, full_cochain: &[Scalar]) -> Result<Vec<Scalar>> {
        let full = HochschildComplex::with_caps(&self.algebra, &self.bimodule, false, self.caps)?;
        let dm = self.bimodule.dim();
        let mut out = Vec::with_capacity(self.cochain_dim(s)?);
        for t in 0..self.tuples(s)? {
            let idx: Vec<usize> = self.decode(t, s).iter().map(|&k| self.slots[k]).collect();
            let u = full.encode(&idx);
            out.extend_from_slice(&full_cochain[u * dm..(u + 1) * dm]);
        }
        Ok(out)
    }

    /// Coordinates in normalized `HH^s` of an unnormalized cocycle. Cocycles
    /// vanishing whenever an argument is the unit are read off directly;
    /// others go through [`Self::normalize_class`].
    pub fn class_of_unnormalized(&self, s: usize, full_cocycle: &[Scalar]) -> Result<Vec<Scalar>> {
        self.class_of_unnormalized_in(&self.cohomology(s)?, full_cocycle)
    }

    /// [`Self::class_of_unnormalized`] with `HH^s` already computed.
    pub fn class_of_unnormalized_in(&self, hh: &HochschildCohomology, full_cocycle: &[Scalar]) -> Result<Vec<Scalar>> {
        let s = hh.level;
        if !self.normalized {
            return Ok(hh.coords(full_cocycle));
        }
        let restricted = self.restrict(s, full_cocycle)?;
        if self.to_unnormalized(s, &restricted)? == full_cocycle {
            if !self.field().is_zero_vec(&self.apply_delta(s, &restricted)?) {
                return Err(Error::invalid("cochain is not a cocycle"));
            }
            return Ok(hh.coords(&restricted));
        }
        self.normalize_class_in(hh, full_cocycle)
    }

    /// `HH^s`, with canonical representatives.
    pub fn cohomology(&self, s: usize) -> Result<HochschildCohomology> {
        let out = self.delta(s)?;
        let incoming = if s == 0 {
            Matrix::zeros(self.field(), self.cochain_dim(0)?, 0)
        } else {
            self.delta(s - 1)?
        };
        let classes = Subquotient::of_maps(&out, &incoming, Convention::RowEchelon);
        Ok(HochschildCohomology {
            level: s,
            dim: classes.dim(),
            classes,
            context: self.context(s),
        })
    }

    pub fn is_cocycle(&self, s: usize, cochain: &[Scalar]) -> Result<bool> {
        if cochain.len() != self.cochain_dim(s)? {
            return Err(Error::invalid(format!(
                "cochain has {} coordinates, level {s} needs {}",
                cochain.len(),
                self.cochain_dim(s)?
            )));
        }
        Ok(self.field().is_zero_vec(&self.delta(s)?.mul_vec(cochain)))
    }

    /// Postcomposition `f ↦ σ ∘ f`.
    pub fn postcompose(&self, sigma: &Matrix, cochain: &[Scalar]) -> Vec<Scalar> {
        let dm = self.bimodule.dim();
        cochain
            .chunks(dm.max(1))
            .flat_map(|block| sigma.mul_vec(block))
            .collect()
    }

    /// Evaluates a cochain on a tuple of `X`-basis indices.
    pub fn evaluate(&self, cochain: &[Scalar], tuple: &[usize]) -> Vec<Scalar> {
        let dm = self.bimodule.dim();
        let t = self.encode(tuple);
        cochain[t * dm..(t + 1) * dm].to_vec()
    }

    /// The cochain on the full tensor power `A^{⊗s}` given by precomposing a
    /// normalized cochain with the projection `A -> Ā` in every slot.
    pub fn to_unnormalized(&self, s: usize, cochain: &[Scalar]) -> Result<Vec<Scalar>> {
        if !self.normalized {
            return Ok(cochain.to_vec());
        }
        let full = HochschildComplex::with_caps(&self.algebra, &self.bimodule, false, self.caps)?;
        let f = self.field();
        let dm = self.bimodule.dim();
        let n = self.algebra.dim();
        let proj: Vec<Vec<Scalar>> = (0..n).map(|j| self.project(&f.unit_vec(n, j))).collect();
        let mut out = f.zero_vec(full.cochain_dim(s)?);
        for t in 0..full.tuples(s)? {
            let idx = full.decode(t, s);
            // multilinear expansion over the projected slots
            let mut acc: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), f.one())];
            for &i in &idx {
                let mut next = Vec::new();
                for (tup, c) in &acc {
                    for (k, pk) in proj[i].iter().enumerate() {
                        if !f.is_zero(pk) {
                            let mut t2 = tup.clone();
                            t2.push(k);
                            next.push((t2, f.mul(c, pk)));
                        }
                    }
                }
                acc = next;
            }
            for (tup, c) in acc {
                let val = self.evaluate(cochain, &tup);
                f.axpy(&mut out[t * dm..(t + 1) * dm], &c, &val);
            }
        }
        Ok(out)
    }

    /// Normalized class of an unnormalized cocycle: the coordinates `c` in
    /// normalized `HH^s` with `to_unnormalized(lift(c)) - F` a coboundary.
    pub fn normalize_class(&self, s: usize, full_cocycle: &[Scalar]) -> Result<Vec<Scalar>> {
        self.normalize_class_in(&self.cohomology(s)?, full_cocycle)
    }

    fn normalize_class_in(&self, hh: &HochschildCohomology, full_cocycle: &[Scalar]) -> Result<Vec<Scalar>> {
        let s = hh.level;
        if !self.normalized {
            return Ok(hh.coords(full_cocycle));
        }
        let f = self.field();
        let full = HochschildComplex::with_caps(&self.algebra, &self.bimodule, false, self.caps)?;
        if !full.is_cocycle(s, full_cocycle)? {
            return Err(Error::invalid("cochain is not a cocycle"));
        }
        let reps = hh.classes.representatives();
        let mut cols: Vec<Vec<Scalar>> = reps
            .iter()
            .map(|r| self.to_unnormalized(s, r))
            .collect::<Result<_>>()?;
        if s > 0 {
            cols.extend(full.delta(s - 1)?.columns());
        }
        let system = Matrix::from_columns(f, full.cochain_dim(s)?, &cols);
        let x = system.solve(full_cocycle).ok_or_else(|| {
            Error::Internal("normalized cochains do not reach every Hochschild class".into())
        })?;
        Ok(x[..reps.len()].to_vec())
    }
}

/// `HH^s(A, M)`: dimension and canonical class representatives.
pub fn hh(
    a: &Algebra,
    m: &Bimodule,
    s: usize,
    normalized: bool,
    caps: &Caps,
) -> Result<HochschildCohomology> {
    HochschildComplex::with_caps(a, m, normalized, *caps)?.cohomology(s)
}

/// `σ · c`, the class of `σ ∘ c`, as coordinates in `hh`.
pub fn aut_action_on_hh(
    complex: &HochschildComplex,
    hh: &HochschildCohomology,
    sigma: &BimoduleMap,
    class: &CohomologyClass,
) -> Result<CohomologyClass> {
    let m = complex.bimodule();
    if class.context != hh.context {
        return Err(Error::BimoduleMismatch(
            "class belongs to a different Hochschild complex".into(),
        ));
    }
    if !sigma.is_hom(m, m) || !sigma.matrix.is_invertible() {
        return Err(Error::BimoduleMismatch(
            "map is not a bimodule automorphism of the coefficients".into(),
        ));
    }
    let moved = complex.postcompose(&sigma.matrix, &class.cochain);
    let coords = hh.coords(&moved);
    Ok(hh.class_from_coords(&coords))
}

/// `Ω¹(A) = ker(A ⊗ A -> A)` with the outer bimodule structure.
#[derive(Clone, Debug)]
pub struct Omega1 {
    pub bimodule: Bimodule,
    /// Columns: basis of `J` inside `A ⊗ A` (basis pairs row-major).
    pub inclusion: Matrix,
    /// `A ⊗ A -> A`.
    pub multiplication: Matrix,
}

pub fn omega1(a: &Algebra) -> Result<Omega1> {
    let f = a.field();
    let n = a.dim();
    let cols: Vec<Vec<Scalar>> = (0..n * n)
        .map(|t| a.mul(&f.unit_vec(n, t / n), &f.unit_vec(n, t % n)))
        .collect();
    let mult = Matrix::from_columns(f, n, &cols);
    let ker = mult.kernel_basis();
    // A ⊗ A with a (x ⊗ y) b = a x ⊗ y b
    let tensor_left: Vec<Matrix> = (0..n)
        .map(|i| a.left_mul(&f.unit_vec(n, i)).kron(&Matrix::identity(f, n)))
        .collect();
    let tensor_right: Vec<Matrix> = (0..n)
        .map(|i| Matrix::identity(f, n).kron(&a.right_mul(&f.unit_vec(n, i))))
        .collect();
    let labels = (0..n * n)
        .map(|t| format!("{}⊗{}", a.basis()[t / n], a.basis()[t % n]))
        .collect();
    let aa = Bimodule::new(a, labels, tensor_left, tensor_right)?;
    let j = aa.sub_bimodule(a, &ker)?;
    let inclusion = Matrix::from_columns(
        f,
        n * n,
        &crate::exactla::Subspace::span(f, n * n, &ker).basis(),
    );
    Ok(Omega1 {
        bimodule: j,
        inclusion,
        multiplication: mult,
    })
}

/// Basis of `Der(A, M)`, each a `dim M x dim A` matrix.
pub fn derivations(a: &Algebra, m: &Bimodule) -> Result<Vec<Matrix>> {
    m.check_over(a)?;
    let f = a.field();
    let (n, dm) = (a.dim(), m.dim());
    let unknowns = dm * n;
    let var = |r: usize, c: usize| r * n + c;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // D(e_i e_j) - e_i D(e_j) - D(e_i) e_j = 0, one row per M-coordinate
            let prod = a.product(i, j);
            for r in 0..dm {
                let mut row = f.zero_vec(unknowns);
                for (k, c) in prod.iter().enumerate() {
                    row[var(r, k)] = f.add(&row[var(r, k)], c);
                }
                for k in 0..dm {
                    let l = m.left(i).get(r, k);
                    row[var(k, j)] = f.sub(&row[var(k, j)], l);
                    let rr = m.right(j).get(r, k);
                    row[var(k, i)] = f.sub(&row[var(k, i)], rr);
                }
                if !f.is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
    }
    let system = Matrix::from_rows(f, unknowns, rows);
    Ok(system
        .kernel_basis()
        .into_iter()
        .map(|v| Matrix::from_rows(f, n, v.chunks(n.max(1)).take(dm).map(|c| c.to_vec()).collect()))
        .collect())
}

/// Result of [`dg_hh`].
#[derive(Clone, Debug)]
pub struct DgHochschild {
    /// Total degree `n + 2`.
    pub degree: usize,
    pub dim: usize,
    /// `dim H_{n+2}` of the reduced bar construction.
    pub bar_homology: usize,
    /// The reduced bar complex around the relevant degree.
    pub bar: ChainComplex,
}

/// Reduced bar construction `B̄C` of a connected DGA in bar degrees
/// `0..=top`, which needs `C` through degree `top - 1`. The bar word `[a_1 | ... | a_s]` has degree `Σ (|a_i| + 1)`
/// and differential `d_0 + d_1` with `ε_i = Σ_{j<i} (|a_j| + 1)`:
///
/// ```text
/// d_0 [a_1|...|a_s] = -Σ_i (-1)^{ε_i} [a_1|...|d a_i|...|a_s]
/// d_1 [a_1|...|a_s] =  Σ_{i≥2} (-1)^{ε_i} [a_1|...|a_{i-1} a_i|...|a_s]
/// ```
pub fn reduced_bar_complex(c: &DgAlgebra, top: usize) -> Result<ChainComplex> {
    let f = c.field();
    if c.dim(0) != 1 {
        return Err(Error::invalid("DG Hochschild cohomology needs dim C_0 = 1"));
    }
    if c.hi() >= 1 && !c.d(1).is_zero() {
        return Err(Error::invalid("DG Hochschild cohomology needs H_0 = k (d_1 must vanish)"));
    }
    if c.hi() + 1 < top && !c.top_exact() {
        return Err(Error::WindowLimited(format!(
            "bar degree {top} needs the algebra through degree {}",
            top - 1
        )));
    }
    let cdim = |p: usize| if p <= c.hi() { c.dim(p) } else { 0 };
    // bar words: sequences of (degree, index) with degrees >= 1
    let mut words: Vec<Vec<Vec<(usize, usize)>>> = vec![Vec::new(); top + 1];
    words[0].push(Vec::new());
    for k in 2..=top {
        let mut ws = Vec::new();
        for p in 1..k {
            let rest = k - p - 1;
            for i in 0..cdim(p) {
                for tail in &words[rest] {
                    let mut w = vec![(p, i)];
                    w.extend_from_slice(tail);
                    ws.push(w);
                }
            }
        }
        words[k] = ws;
    }
    let index: Vec<std::collections::HashMap<Vec<(usize, usize)>, usize>> = words
        .iter()
        .map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect())
        .collect();
    let mut diffs = Vec::new();
    for k in 1..=top {
        let mut d = Matrix::zeros(f, words[k - 1].len(), words[k].len());
        for (col, w) in words[k].iter().enumerate() {
            let mut eps = 0usize;
            for (i, &(p, a)) in w.iter().enumerate() {
                // d_0 on slot i
                if p >= 2 {
                    let da = c.d(p).column(a);
                    let sign = f.neg(&f.sign(eps as i64));
                    for (r, coeff) in da.iter().enumerate() {
                        if f.is_zero(coeff) {
                            continue;
                        }
                        let mut w2 = w.clone();
                        w2[i] = (p - 1, r);
                        d.add_at(index[k - 1][&w2], col, &f.mul(&sign, coeff));
                    }
                }
                // d_1 merging slots i-1, i
                if i >= 1 {
                    let (q, b) = w[i - 1];
                    let sign = f.sign(eps as i64);
                    if p + q <= c.hi() {
                        for (r, coeff) in c.product(q, b, p, a) {
                            let mut w2 = w[..i - 1].to_vec();
                            w2.push((p + q, *r));
                            w2.extend_from_slice(&w[i + 1..]);
                            d.add_at(index[k - 1][&w2], col, &f.mul(&sign, coeff));
                        }
                    }
                }
                eps += p + 1;
            }
        }
        diffs.push(d);
    }
    let labels = words
        .iter()
        .map(|ws| {
            ws.iter()
                .map(|w| {
                    let parts: Vec<String> =
                        w.iter().map(|&(p, i)| c.labels(p)[i].clone()).collect();
                    format!("[{}]", parts.join("|"))
                })
                .collect()
        })
        .collect();
    let dims = words.iter().map(Vec::len).collect();
    ChainComplex::with_labels(f, 0, dims, labels, diffs, false)
}

/// Hochschild cohomology in total degree `n + 2` of a connected DGA with
/// coefficients in a `dim_m`-dimensional vector space acted on through the
/// augmentation. Equal to `Hom(H_{n+2}(B̄C), M)`.
pub fn dg_hh(c: &DgAlgebra, dim_m: usize, n: usize) -> Result<DgHochschild> {
    let degree = n + 2;
    let bar = reduced_bar_complex(c, degree + 1)?;
    let h = bar.homology(degree as i64)?;
    Ok(DgHochschild {
        degree,
        dim: h.dim * dim_m,
        bar_homology: h.dim,
        bar,
    })
}

/// Result of [`der_classes`].
#[derive(Clone, Debug)]
pub struct DerClasses {
    pub dim: usize,
    /// Representatives: values on the degree-`(n+1)` generators, one
    /// scalar per generator and `M`-coordinate (generator-major).
    pub representatives: Vec<Vec<Scalar>>,
    /// Names of the degree-`(n+1)` generators, in order.
    pub generators: Vec<String>,
}

/// Homotopy classes of derivations `C -> Σ^{n+1} M` of a connected
/// semifree DGA with trivial coefficients `M = k^{dim_m}`.
///
/// Such a derivation is its value `D(g) ∈ M` on each generator of degree
/// `n + 1`; the chain condition asks `D` to vanish on the linear part of
/// `d(g')` for generators of degree `n + 2`, and homotopies change `D` by
/// `H ∘ d` for `H` given on generators of degree `n`.
pub fn der_classes(s: &SemifreeDga, dim_m: usize, n: usize) -> Result<DerClasses> {
    if s.window() < n + 2 {
        return Err(Error::WindowLimited(format!(
            "derivation classes at level {n} need window >= {}",
            n + 2
        )));
    }
    let f = s.field();
    let gens = s.generators();
    let of_degree = |k: usize| -> Vec<usize> {
        (0..gens.len()).filter(|&g| gens[g].degree == k).collect()
    };
    // linear part of d from degree-k generators to degree-(k-1) generators
    let linear = |k: usize| -> Matrix {
        let rows = of_degree(k - 1);
        let cols = of_degree(k);
        let mut m = Matrix::zeros(f, rows.len(), cols.len());
        for (c, &g) in cols.iter().enumerate() {
            for (w, coeff) in gens[g].boundary.terms() {
                if w.len() == 1 {
                    let r = rows.iter().position(|&x| x == w[0]).expect("degree matches");
                    m.add_at(r, c, coeff);
                }
            }
        }
        m
    };
    let top = of_degree(n + 1);
    let l_out = linear(n + 2); // G_{n+2} -> G_{n+1}
    let l_in = if n == 0 {
        Matrix::zeros(f, 0, top.len())
    } else {
        linear(n + 1) // G_{n+1} -> G_n
    };
    // D: G_{n+1} -> k as row vectors; cycle: D L_out = 0; boundary: H L_in
    let cycles = l_out.transpose();
    let boundaries = l_in.transpose();
    let sq = Subquotient::of_maps(&cycles, &boundaries, Convention::RowEchelon);
    let mut reps = Vec::new();
    for r in sq.representatives() {
        for j in 0..dim_m {
            let mut v = f.zero_vec(top.len() * dim_m);
            for (g, c) in r.iter().enumerate() {
                v[g * dim_m + j] = c.clone();
            }
            reps.push(v);
        }
    }
    Ok(DerClasses {
        dim: sq.dim() * dim_m,
        representatives: reps,
        generators: top.iter().map(|&g| gens[g].name.clone()).collect(),
    })
}

#[cfg(test)]
mod tests;
