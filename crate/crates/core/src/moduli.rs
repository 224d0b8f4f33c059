//! Postnikov extensions of a discrete algebra by a bimodule: minimal
//! models, their coherence check, k-invariants of strict DG models by
//! homotopy transfer, equivalence, and orbit counting of
//! `HH^{n+2}(A, M) / Aut(M)`.

use rayon::prelude::*;

use crate::algebras::{bimodule_aut_group, digits, Algebra, Bimodule, BimoduleMap};
use crate::caps::{checked_pow, Caps};
use crate::dga::DgAlgebra;
use crate::error::{Error, Result};
use crate::exactla::{Convention, GroundField, Matrix, Scalar, Subquotient, Subspace};
use crate::hochschild::{aut_action_on_hh, CohomologyClass, HochschildComplex};

/// Homology `A ⊕ M[n]` with the product of `A`, both actions on `M`,
/// `M · M = 0`, and one higher operation `m_{n+2}: A^{⊗(n+2)} -> M`.
///
/// `operation` is a coordinate tensor indexed like an unnormalized
/// Hochschild cochain: tuple of algebra basis indices (first slot most
/// significant) times `dim M`, plus the `M`-coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalExtensionModel {
    pub algebra: Algebra,
    pub bimodule: Bimodule,
    pub n: usize,
    pub operation: Vec<Scalar>,
}

impl MinimalExtensionModel {
    /// The trivial square-zero extension: `m_{n+2} = 0`.
    pub fn trivial(a: &Algebra, m: &Bimodule, n: usize) -> Result<Self> {
        check_level(n)?;
        let full = HochschildComplex::new(a, m, false)?;
        Ok(MinimalExtensionModel {
            algebra: a.clone(),
            bimodule: m.clone(),
            n,
            operation: a.field().zero_vec(full.cochain_dim(n + 2)?),
        })
    }

    pub fn field(&self) -> GroundField {
        self.algebra.field()
    }

    /// Arity of the higher operation.
    pub fn arity(&self) -> usize {
        self.n + 2
    }

    /// `m_{n+2}(e_{i_1}, ..., e_{i_{n+2}})`.
    pub fn operation_at(&self, tuple: &[usize]) -> Vec<Scalar> {
        let dm = self.bimodule.dim();
        let t = tuple.iter().fold(0, |acc, &i| acc * self.algebra.dim() + i);
        self.operation[t * dm..(t + 1) * dm].to_vec()
    }

    fn same_structure(&self, other: &Self) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch("extension models".into()));
        }
        if self.algebra.fingerprint() != other.algebra.fingerprint() {
            return Err(Error::AlgebraMismatch("extension models over different algebras".into()));
        }
        if self.bimodule.fingerprint() != other.bimodule.fingerprint() {
            return Err(Error::BimoduleMismatch(
                "extension models with different coefficients".into(),
            ));
        }
        if self.n != other.n {
            return Err(Error::invalid(format!(
                "extension levels differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }
}

fn check_level(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("extension level must be at least 1"));
    }
    Ok(())
}

/// Failures found by [`a_infinity_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoherenceReport {
    /// Arity 3, all inputs in `A`: `(e_i e_j) e_k != e_i (e_j e_k)`.
    pub associativity: Vec<(usize, usize, usize)>,
    /// Arity 3 with one input in `M`, and unit laws.
    pub module: Vec<String>,
    /// Arity `n + 3`, all inputs in `A`: tuples where `δ m_{n+2} != 0`,
    /// with the offending value.
    pub cocycle: Vec<(Vec<usize>, Vec<Scalar>)>,
    /// Malformed data (wrong tensor shape, bimodule over another algebra).
    pub shape: Vec<String>,
}

impl CoherenceReport {
    pub fn passed(&self) -> bool {
        self.associativity.is_empty()
            && self.module.is_empty()
            && self.cocycle.is_empty()
            && self.shape.is_empty()
    }
}

/// Number of cocycle witnesses listed before the report stops collecting.
const WITNESS_LIMIT: usize = 16;

/// Checks the coherence identities that can be nonzero for a two-stage
/// homology profile: associativity of the binary part and `δ m_{n+2} = 0`.
pub fn a_infinity_check(e: &MinimalExtensionModel) -> CoherenceReport {
    let mut report = CoherenceReport::default();
    let ar = e.algebra.validate();
    report.associativity = ar.associativity_failures.clone();
    for i in ar.unit_failures {
        report.module.push(format!("unit does not act as identity on e{i}"));
    }
    match e.bimodule.validate_against(&e.algebra) {
        Ok(br) => {
            for (i, j) in br.left_failures {
                report.module.push(format!("left action: (e{i} e{j}) m != e{i} (e{j} m)"));
            }
            for (i, j) in br.right_failures {
                report.module.push(format!("right action: m (e{i} e{j}) != (m e{i}) e{j}"));
            }
            for (i, j) in br.commute_failures {
                report.module.push(format!("actions do not commute: (e{i} m) e{j}"));
            }
            if br.unit_failure {
                report.module.push("unit does not act as identity on M".into());
            }
        }
        Err(err) => report.shape.push(err.to_string()),
    }
    if e.n == 0 {
        report.shape.push("extension level must be at least 1".into());
        return report;
    }
    let full = match HochschildComplex::new(&e.algebra, &e.bimodule, false) {
        Ok(c) => c,
        Err(err) => {
            report.shape.push(err.to_string());
            return report;
        }
    };
    let s = e.n + 2;
    match full.apply_delta(s, &e.operation) {
        Ok(delta) => {
            let f = e.field();
            let dm = e.bimodule.dim().max(1);
            for (t, chunk) in delta.chunks(dm).enumerate() {
                if !f.is_zero_vec(chunk) {
                    report.cocycle.push((full.decode(t, s + 1), chunk.to_vec()));
                    if report.cocycle.len() == WITNESS_LIMIT {
                        break;
                    }
                }
            }
        }
        Err(err) => report.shape.push(err.to_string()),
    }
    report
}

/// Which inputs a coherence identity is evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    A,
    M,
}

/// One Stasheff identity `Σ m_i(1^r ⊗ m_j ⊗ 1^t) = 0` on a fixed input
/// pattern, keeping only the compositions that can be nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceIdentity {
    pub inputs: Vec<Slot>,
    /// `(outer arity, inner arity, position r)`.
    pub terms: Vec<(usize, usize, usize)>,
}

/// Output slot of `m_k` on `inputs` when the operation can be nonzero for
/// homology concentrated in degrees `0` and `n`: `m_k` has degree `k - 2`.
pub fn operation_output(n: usize, inputs: &[Slot]) -> Option<Slot> {
    let k = inputs.len();
    if k < 2 {
        return None;
    }
    let ms = inputs.iter().filter(|&&s| s == Slot::M).count();
    match ms * n + k - 2 {
        0 => Some(Slot::A),
        d if d == n => Some(Slot::M),
        _ => None,
    }
}

/// The identities with at least one possibly-nonzero composition, over
/// all input patterns of arity `3..=max_arity`.
pub fn coherence_identities(n: usize, max_arity: usize) -> Vec<CoherenceIdentity> {
    let mut out = Vec::new();
    for arity in 3..=max_arity {
        for mask in 0u64..(1u64 << arity) {
            let inputs: Vec<Slot> = (0..arity)
                .map(|b| if mask >> (arity - 1 - b) & 1 == 1 { Slot::M } else { Slot::A })
                .collect();
            let mut terms = Vec::new();
            for j in 2..arity {
                let i = arity + 1 - j;
                for r in 0..=arity - j {
                    let Some(inner) = operation_output(n, &inputs[r..r + j]) else {
                        continue;
                    };
                    let mut outer_in = inputs[..r].to_vec();
                    outer_in.push(inner);
                    outer_in.extend_from_slice(&inputs[r + j..]);
                    if operation_output(n, &outer_in).is_some() {
                        terms.push((i, j, r));
                    }
                }
            }
            if !terms.is_empty() {
                out.push(CoherenceIdentity { inputs, terms });
            }
        }
    }
    out
}

/// Complexes over `(A, M)` at level `n + 2` in both presentations.
fn complexes(a: &Algebra, m: &Bimodule, caps: &Caps) -> Result<(HochschildComplex, HochschildComplex)> {
    Ok((
        HochschildComplex::with_caps(a, m, true, *caps)?,
        HochschildComplex::with_caps(a, m, false, *caps)?,
    ))
}

/// The minimal model whose higher operation represents `c`.
pub fn realize(
    a: &Algebra,
    m: &Bimodule,
    n: usize,
    c: &CohomologyClass,
    caps: &Caps,
) -> Result<MinimalExtensionModel> {
    check_level(n)?;
    let s = n + 2;
    if c.level != s {
        return Err(Error::invalid(format!(
            "class lives at level {}, an extension of level {n} needs level {s}",
            c.level
        )));
    }
    let (norm, full) = complexes(a, m, caps)?;
    let operation = if c.context == norm.context(s) {
        if !norm.is_cocycle(s, &c.cochain)? {
            return Err(Error::invalid("class representative is not a cocycle"));
        }
        norm.to_unnormalized(s, &c.cochain)?
    } else if c.context == full.context(s) {
        if !full.field().is_zero_vec(&full.apply_delta(s, &c.cochain)?) {
            return Err(Error::invalid("class representative is not a cocycle"));
        }
        c.cochain.clone()
    } else {
        return Err(Error::BimoduleMismatch(
            "class was computed for a different (A, M, level)".into(),
        ));
    };
    Ok(MinimalExtensionModel {
        algebra: a.clone(),
        bimodule: m.clone(),
        n,
        operation,
    })
}

/// The model with `m_{n+2}` given directly as an unnormalized tensor.
pub fn realize_cochain(
    a: &Algebra,
    m: &Bimodule,
    n: usize,
    operation: Vec<Scalar>,
) -> Result<MinimalExtensionModel> {
    check_level(n)?;
    let full = HochschildComplex::new(a, m, false)?;
    if !full.field().is_zero_vec(&full.apply_delta(n + 2, &operation)?) {
        return Err(Error::invalid("operation is not a Hochschild cocycle"));
    }
    Ok(MinimalExtensionModel {
        algebra: a.clone(),
        bimodule: m.clone(),
        n,
        operation,
    })
}

/// The class of a model's higher operation in normalized `HH^{n+2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelClass {
    pub coords: Vec<Scalar>,
    /// The canonical normalized representative `Σ coords_i rep_i`.
    pub class: CohomologyClass,
}

impl ModelClass {
    pub fn is_zero(&self) -> bool {
        self.class.cochain.iter().all(|c| c.is_zero())
    }
}

/// Reads off the k-invariant of a minimal model: the class of `m_{n+2}`.
pub fn model_class(e: &MinimalExtensionModel, caps: &Caps) -> Result<ModelClass> {
    let norm = HochschildComplex::with_caps(&e.algebra, &e.bimodule, true, *caps)?;
    let s = e.n + 2;
    let hh = norm.cohomology(s)?;
    let coords = norm.class_of_unnormalized_in(&hh, &e.operation)?;
    let class = hh.class_from_coords(&coords);
    Ok(ModelClass { coords, class })
}

/// Applies `mat` to every tensor slot of an `arity`-ary operation with
/// `dim_out`-dimensional values: `op'(x_1, ..., x_k) = op(mat x_1, ..., mat x_k)`
/// where `mat: k^{dim_new} -> k^{dim_old}`.
fn precompose_all_slots(
    field: GroundField,
    op: &[Scalar],
    dim_old: usize,
    arity: usize,
    dim_out: usize,
    mat: &Matrix,
) -> Vec<Scalar> {
    let dim_new = mat.cols();
    let mut cur = op.to_vec();
    // slots are rewritten one at a time, last slot first; after each pass
    // the rewritten slots use the new dimension
    for slot in (0..arity).rev() {
        let before: usize = dim_old.pow(slot as u32);
        let after: usize = dim_new.pow((arity - 1 - slot) as u32) * dim_out;
        let mut next = field.zero_vec(before * dim_new * after);
        for b in 0..before {
            for j in 0..dim_new {
                let dst = (b * dim_new + j) * after;
                for i in 0..dim_old {
                    let c = mat.get(i, j);
                    if field.is_zero(c) {
                        continue;
                    }
                    let src = (b * dim_old + i) * after;
                    field.axpy(&mut next[dst..dst + after], c, &cur[src..src + after]);
                }
            }
        }
        cur = next;
    }
    cur
}

/// Transports a model along an algebra isomorphism `phi: A -> A'` and a
/// bimodule isomorphism `psi: M -> M'` (an `A'`-bimodule map once `M` is
/// pulled back along `phi^{-1}`).
pub fn transport_class(
    e: &MinimalExtensionModel,
    a2: &Algebra,
    m2: &Bimodule,
    phi: &Matrix,
    psi: &Matrix,
) -> Result<MinimalExtensionModel> {
    let f = e.field();
    if !crate::algebras::is_algebra_map(&e.algebra, a2, phi) {
        return Err(Error::AlgebraMismatch("phi is not an algebra map".into()));
    }
    let phi_inv = phi
        .inverse()
        .ok_or_else(|| Error::AlgebraMismatch("phi is not invertible".into()))?;
    let pulled = e.bimodule.pullback(a2, &phi_inv)?;
    if !(BimoduleMap { matrix: psi.clone() }).is_hom(&pulled, m2) || !psi.is_invertible() {
        return Err(Error::BimoduleMismatch("psi is not a bimodule isomorphism".into()));
    }
    let moved = precompose_all_slots(
        f,
        &e.operation,
        e.algebra.dim(),
        e.arity(),
        e.bimodule.dim(),
        &phi_inv,
    );
    let dm = e.bimodule.dim().max(1);
    let operation = moved.chunks(dm).flat_map(|v| psi.mul_vec(v)).collect();
    Ok(MinimalExtensionModel {
        algebra: a2.clone(),
        bimodule: m2.clone(),
        n: e.n,
        operation,
    })
}

/// Outcome of [`equivalent`].
#[derive(Clone, Debug)]
pub struct Equivalence {
    pub equivalent: bool,
    /// `σ ∈ Aut(M)` and an unnormalized cochain `g` with
    /// `σ ∘ m^{(1)} - m^{(2)} = δ g`.
    pub witness: Option<(BimoduleMap, Vec<Scalar>)>,
}

fn action_matrix(
    norm: &HochschildComplex,
    hh: &crate::hochschild::HochschildCohomology,
    sigma: &BimoduleMap,
) -> Result<Matrix> {
    let cols = hh
        .representatives()
        .iter()
        .map(|r| Ok(aut_action_on_hh(norm, hh, sigma, r)?.cochain))
        .map(|c: Result<Vec<Scalar>>| c.map(|v| hh.coords(&v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_columns(norm.field(), hh.dim, &cols))
}

/// Decides whether two models over the same `(A, M, n)` are equivalent.
pub fn equivalent(
    e1: &MinimalExtensionModel,
    e2: &MinimalExtensionModel,
    caps: &Caps,
) -> Result<Equivalence> {
    e1.same_structure(e2)?;
    let f = e1.field();
    let c1 = model_class(e1, caps)?;
    let c2 = model_class(e2, caps)?;
    let norm = HochschildComplex::with_caps(&e1.algebra, &e1.bimodule, true, *caps)?;
    let hh = norm.cohomology(e1.n + 2)?;
    let identity = BimoduleMap::identity(&e1.bimodule);
    let found = if c1.coords == c2.coords {
        Some(identity)
    } else {
        bimodule_aut_group(&e1.bimodule, caps)?
            .into_iter()
            .map(|sigma| action_matrix(&norm, &hh, &sigma).map(|t| (sigma, t)))
            .find(|r| match r {
                Ok((_, t)) => t.mul_vec(&c1.coords) == c2.coords,
                Err(_) => true,
            })
            .transpose()?
            .map(|(sigma, _)| sigma)
    };
    let Some(sigma) = found else {
        return Ok(Equivalence {
            equivalent: false,
            witness: None,
        });
    };
    let full = HochschildComplex::with_caps(&e1.algebra, &e1.bimodule, false, *caps)?;
    let target = f.sub_vec(&full.postcompose(&sigma.matrix, &e1.operation), &e2.operation);
    let s = e1.n + 2;
    let g = full.delta(s - 1)?.solve(&target).ok_or_else(|| {
        Error::Internal("classes agree but the difference is not a coboundary".into())
    })?;
    Ok(Equivalence {
        equivalent: true,
        witness: Some((sigma, g)),
    })
}

/// One orbit of `Aut(M)` on `HH^{n+2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRepresentative {
    /// Lexicographically minimal coordinates in the orbit.
    pub coords: Vec<Scalar>,
    pub class: CohomologyClass,
    pub orbit_size: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationStats {
    pub classes_enumerated: u64,
    pub aut_elements: u64,
    pub action_applications: u64,
}

/// `π_0` of the moduli of Postnikov extensions of type `(M, n)` over `A`:
/// the orbits of `Aut(M)` on `HH^{n+2}(A, M)`.
#[derive(Clone, Debug)]
pub struct ModuliReport {
    pub field: GroundField,
    pub n: usize,
    pub hh_dim: usize,
    pub aut_order: u64,
    pub orbit_count: u64,
    pub representatives: Vec<OrbitRepresentative>,
    pub stats: EnumerationStats,
    /// Action of each automorphism on class coordinates.
    pub action: Vec<Matrix>,
}

impl ModuliReport {
    /// Coordinates of the representative of the orbit containing `coords`.
    pub fn orbit_representative(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        self.action
            .iter()
            .map(|t| t.mul_vec(coords))
            .min_by_key(|v| index_of(f, v))
            .unwrap_or_else(|| coords.to_vec())
    }
}

/// Position of a coordinate vector in the enumeration order (first
/// coordinate most significant).
fn index_of(f: GroundField, v: &[Scalar]) -> u64 {
    let p = f.order().expect("prime field");
    v.iter().fold(0, |acc, c| acc * p + f.index_of(c))
}

pub fn classify(a: &Algebra, m: &Bimodule, n: usize, caps: &Caps) -> Result<ModuliReport> {
    check_level(n)?;
    let f = a.field();
    let Some(p) = f.order() else {
        return Err(Error::Unsupported(
            "orbit counting needs a finite field; HH over Q is an infinite set".into(),
        ));
    };
    let norm = HochschildComplex::with_caps(a, m, true, *caps)?;
    let hh = norm.cohomology(n + 2)?;
    let d = hh.dim;
    let total = checked_pow(p, d)
        .filter(|&t| t <= caps.enumeration)
        .ok_or_else(|| Error::cap("HH classes", format!("{p}^{d}"), caps.enumeration))?;
    let auts = bimodule_aut_group(m, caps)?;
    let action = auts
        .iter()
        .map(|sigma| action_matrix(&norm, &hh, sigma))
        .collect::<Result<Vec<_>>>()?;
    let orbits: Vec<(u64, u64)> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let v = digits(f, idx, d);
            let mut images: Vec<u64> = action.iter().map(|t| index_of(f, &t.mul_vec(&v))).collect();
            images.sort_unstable();
            images.dedup();
            (images[0] == idx).then_some((idx, images.len() as u64))
        })
        .collect();
    let representatives = orbits
        .iter()
        .map(|&(idx, size)| {
            let coords = digits(f, idx, d);
            OrbitRepresentative {
                class: hh.class_from_coords(&coords),
                coords,
                orbit_size: size,
            }
        })
        .collect();
    Ok(ModuliReport {
        field: f,
        n,
        hh_dim: d,
        aut_order: auts.len() as u64,
        orbit_count: orbits.len() as u64,
        representatives,
        stats: EnumerationStats {
            classes_enumerated: total,
            aut_elements: auts.len() as u64,
            action_applications: total * auts.len() as u64,
        },
        action,
    })
}

/// Result of [`oracle_classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub count: usize,
    /// First cocycle met in each class, as a normalized cochain.
    pub classes: Vec<Vec<Scalar>>,
    pub cochains_enumerated: u64,
    pub cocycles: u64,
    pub aut_order: u64,
}

/// Brute-force classification: enumerates every normalized cochain,
/// keeps the cocycles by direct evaluation of `δ`, enumerates `Aut(M)` as
/// invertible matrices commuting with both actions, and partitions the
/// cocycles by testing `σ ∘ z - r ∈ im δ` against each class found so far.
pub fn oracle_classify(a: &Algebra, m: &Bimodule, n: usize, cap: u64) -> Result<OracleReport> {
    check_level(n)?;
    m.check_over(a)?;
    let f = a.field();
    let Some(p) = f.order() else {
        return Err(Error::Unsupported("the oracle enumerates over finite fields only".into()));
    };
    let s = n + 2;
    let oracle = Oracle::new(a, m);
    let dim = oracle.cochain_dim(s);
    let total = checked_pow(p, dim)
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::cap("oracle cochains", format!("{p}^{dim}"), cap))?;
    let dm = m.dim();
    let mats = checked_pow(p, dm * dm)
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::cap("oracle Aut(M) candidates", format!("{p}^{}", dm * dm), cap))?;
    let auts: Vec<Matrix> = (0..mats)
        .into_par_iter()
        .filter_map(|idx| {
            let e = digits(f, idx, dm * dm);
            let sigma = Matrix::from_rows(f, dm, e.chunks(dm.max(1)).map(|c| c.to_vec()).collect());
            let commutes = (0..a.dim()).all(|i| {
                sigma.mul(m.left(i)) == m.left(i).mul(&sigma)
                    && sigma.mul(m.right(i)) == m.right(i).mul(&sigma)
            });
            (commutes && sigma.is_invertible()).then_some(sigma)
        })
        .collect();
    let cocycles: Vec<Vec<Scalar>> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let z = digits(f, idx, dim);
            f.is_zero_vec(&oracle.delta(s, &z)).then_some(z)
        })
        .collect();
    let prev_dim = oracle.cochain_dim(s - 1);
    let boundary_vectors: Vec<Vec<Scalar>> = (0..prev_dim)
        .map(|j| oracle.delta(s - 1, &f.unit_vec(prev_dim, j)))
        .collect();
    let boundaries = Subspace::span(f, dim, &boundary_vectors);
    let mut classes: Vec<Vec<Scalar>> = Vec::new();
    for z in &cocycles {
        let moved: Vec<Vec<Scalar>> = auts
            .iter()
            .map(|sigma| {
                z.chunks(dm.max(1))
                    .flat_map(|v| sigma.mul_vec(v))
                    .collect()
            })
            .collect();
        let known = classes.iter().any(|r| {
            moved
                .iter()
                .any(|w| boundaries.contains(&f.sub_vec(w, r)))
        });
        if !known {
            classes.push(z.clone());
        }
    }
    Ok(OracleReport {
        count: classes.len(),
        classes,
        cochains_enumerated: total,
        cocycles: cocycles.len() as u64,
        aut_order: auts.len() as u64,
    })
}

/// Direct evaluation of the normalized Hochschild differential, written
/// independently of [`HochschildComplex`].
struct Oracle {
    field: GroundField,
    /// `Ā`-basis vectors as elements of `A`.
    bar: Vec<Vec<Scalar>>,
    /// `Ā`-coordinates of `e_i e_j` for `Ā`-basis elements.
    products: Vec<Vec<Scalar>>,
    left: Vec<Matrix>,
    right: Vec<Matrix>,
    dm: usize,
}

impl Oracle {
    fn new(a: &Algebra, m: &Bimodule) -> Self {
        let f = a.field();
        let n = a.dim();
        let u = a.unit();
        let pivot = u.iter().position(|c| !f.is_zero(c)).unwrap_or(0);
        let keep: Vec<usize> = (0..n).filter(|&j| j != pivot).collect();
        let bar: Vec<Vec<Scalar>> = keep.iter().map(|&j| f.unit_vec(n, j)).collect();
        // x = (x_p / u_p) 1 + Σ_{j != p} (x_j - (x_p / u_p) u_j) e_j
        let to_bar = |x: &[Scalar]| -> Vec<Scalar> {
            let r = f.mul(&x[pivot], &f.inv(&u[pivot]).expect("unit pivot"));
            keep.iter().map(|&j| f.sub(&x[j], &f.mul(&r, &u[j]))).collect()
        };
        let products = bar
            .iter()
            .flat_map(|x| bar.iter().map(|y| a.mul(x, y)).collect::<Vec<_>>())
            .map(|xy| to_bar(&xy))
            .collect();
        let left = bar.iter().map(|x| m.left_action(x)).collect();
        let right = bar.iter().map(|x| m.right_action(x)).collect();
        Oracle {
            field: f,
            bar,
            products,
            left,
            right,
            dm: m.dim(),
        }
    }

    fn cochain_dim(&self, s: usize) -> usize {
        self.bar.len().pow(s as u32) * self.dm
    }

    fn value(&self, f: &[Scalar], tuple: &[usize]) -> Vec<Scalar> {
        let t = tuple.iter().fold(0, |acc, &i| acc * self.bar.len() + i);
        f[t * self.dm..(t + 1) * self.dm].to_vec()
    }

    fn delta(&self, s: usize, f: &[Scalar]) -> Vec<Scalar> {
        let k = self.field;
        let nb = self.bar.len();
        let count = nb.pow(s as u32 + 1);
        let mut out = Vec::with_capacity(count * self.dm);
        for t in 0..count {
            let mut a = vec![0; s + 1];
            let mut r = t;
            for slot in a.iter_mut().rev() {
                *slot = r % nb;
                r /= nb;
            }
            let mut acc = self.left[a[0]].mul_vec(&self.value(f, &a[1..]));
            for i in 0..s {
                let sign = k.sign(i as i64 + 1);
                for (c, coeff) in self.products[a[i] * nb + a[i + 1]].iter().enumerate() {
                    if k.is_zero(coeff) {
                        continue;
                    }
                    let mut merged = a[..i].to_vec();
                    merged.push(c);
                    merged.extend_from_slice(&a[i + 2..]);
                    k.axpy(&mut acc, &k.mul(&sign, coeff), &self.value(f, &merged));
                }
            }
            let tail = self.right[a[s]].mul_vec(&self.value(f, &a[..s]));
            k.axpy(&mut acc, &k.sign(s as i64 + 1), &tail);
            out.extend(acc);
        }
        out
    }
}

/// A contraction of a DGA onto its homology in degrees `0..=top`:
/// `Y_i = B_i ⊕ H'_i ⊕ C_i` with `B` the boundaries, `H'` chosen cycle
/// representatives and `C` a complement of the cycles, all picked by
/// echelon pivots in the given convention; `h` sends `B_i` to `C_{i+1}`
/// through `-d^{-1}` and kills `H' ⊕ C`, so that `i p - 1 = d h + h d`.
struct Contraction {
    /// Columns: representatives of a homology basis, per degree.
    reps: Vec<Vec<Vec<Scalar>>>,
    /// `p_i: Y_i -> H_i`.
    proj: Vec<Matrix>,
    /// `h_i: Y_i -> Y_{i+1}`, for `i < top`.
    homotopy: Vec<Matrix>,
}

impl Contraction {
    fn new(y: &DgAlgebra, top: usize, convention: Convention) -> Result<Self> {
        let f = y.field();
        let dim = |i: usize| if i <= y.hi() { y.dim(i) } else { 0 };
        let d_at = |i: usize| -> Matrix {
            if i == 0 || i > y.hi() {
                Matrix::zeros(f, dim(i.saturating_sub(1)), dim(i))
            } else {
                y.d(i)
            }
        };
        let mut reps = Vec::new();
        let mut proj = Vec::new();
        // per degree: boundary basis, inverse of [B | H' | C], indices of C
        let mut splits: Vec<(usize, Matrix, Vec<usize>)> = Vec::new();
        for i in 0..=top {
            let boundaries = Subspace::column_space(&d_at(i + 1), convention).basis();
            let cycles = Subspace::span_with(f, dim(i), &d_at(i).kernel_basis(), convention);
            let b_space = Subspace::span(f, dim(i), &boundaries);
            let h: Vec<Vec<Scalar>> = if i == 0 && !b_space.contains(y.unit()) {
                // the unit first, so the transferred operations are strictly unital
                let mut with_unit = boundaries.clone();
                with_unit.push(y.unit().to_vec());
                let rest = Subspace::span_with(f, dim(0), &with_unit, convention);
                std::iter::once(y.unit().to_vec())
                    .chain(rest.complement_indices().into_iter().map(|j| f.unit_vec(dim(0), j)))
                    .collect()
            } else {
                Subquotient::of_maps(&d_at(i), &d_at(i + 1), convention).representatives()
            };
            let complement = cycles.complement_indices();
            let mut cols = boundaries.clone();
            cols.extend(h.iter().cloned());
            cols.extend(complement.iter().map(|&j| f.unit_vec(dim(i), j)));
            let inv = Matrix::from_columns(f, dim(i), &cols)
                .inverse()
                .ok_or_else(|| Error::Internal(format!("degree {i} splitting is not a basis")))?;
            let (nb, nh) = (boundaries.len(), h.len());
            let rows: Vec<Vec<Scalar>> = (nb..nb + nh).map(|r| inv.row(r).to_vec()).collect();
            proj.push(Matrix::from_rows(f, dim(i), rows));
            reps.push(h);
            splits.push((nb, inv, complement));
        }
        let mut homotopy = Vec::new();
        for i in 0..top {
            let (nb, inv, _) = &splits[i];
            let above = &splits[i + 1].2;
            // d: C_{i+1} -> B_i in boundary coordinates; invertible
            let d = d_at(i + 1);
            let dc: Vec<Vec<Scalar>> = above
                .iter()
                .map(|&j| inv.mul_vec(&d.column(j))[..*nb].to_vec())
                .collect();
            let g = Matrix::from_columns(f, *nb, &dc).inverse().ok_or_else(|| {
                Error::Internal(format!("d is not injective on the degree-{} complement", i + 1))
            })?;
            let mut h = Matrix::zeros(f, dim(i + 1), dim(i));
            let minus = f.neg(&f.one());
            for col in 0..dim(i) {
                let beta = &inv.column(col)[..*nb];
                let c = g.mul_vec(beta);
                for (k, &j) in above.iter().enumerate() {
                    if !f.is_zero(&c[k]) {
                        h.add_at(j, col, &f.mul(&minus, &c[k]));
                    }
                }
            }
            homotopy.push(h);
        }
        Ok(Contraction {
            reps,
            proj,
            homotopy,
        })
    }
}

/// The k-invariant of a strict DG model of an extension.
#[derive(Clone, Debug)]
pub struct KInvariant {
    /// The transferred minimal model over `(H_0(y), H_n(y))`, presented in
    /// the bases of [`DgAlgebra::hn_bimodule`].
    pub model: MinimalExtensionModel,
    pub class: ModelClass,
    pub convention: Convention,
}

/// The k-invariant with the default (row-echelon) contraction.
pub fn k_invariant_strict(y: &DgAlgebra, n: usize, caps: &Caps) -> Result<KInvariant> {
    k_invariant_with(y, n, Convention::RowEchelon, caps)
}

/// Transfers the product of `y` along a contraction onto homology and
/// returns the class of the resulting `(n+2)`-ary operation on `H_0`.
///
/// With `λ_2 = μ`, `hλ_1 = id` and, for `k ≥ 3`,
/// `λ_k = Σ_{j + l = k} (-1)^{j(l+1)} μ(hλ_j ⊗ hλ_l)`, the operation is
/// `m_k = p λ_k i^{⊗k}`. All inputs sit in degree 0, so no Koszul signs
/// arise from passing maps over inputs.
pub fn k_invariant_with(
    y: &DgAlgebra,
    n: usize,
    convention: Convention,
    caps: &Caps,
) -> Result<KInvariant> {
    check_level(n)?;
    if y.hi() < n + 1 && !y.top_exact() {
        return Err(Error::WindowLimited(format!(
            "the k-invariant at level {n} needs the window to reach degree {}",
            n + 1
        )));
    }
    for i in 1..=y.hi() {
        if i == n {
            continue;
        }
        let h = y.homology(i)?;
        if h.dim != 0 && !h.window_limited {
            return Err(Error::invalid(format!(
                "homology profile violated: H_{i} has dimension {} (only degrees 0 and {n} may be nonzero)",
                h.dim
            )));
        }
    }
    let hb = y.hn_bimodule(n)?;
    let a = hb.h0.algebra.clone();
    let m = hb.bimodule.clone();
    let f = y.field();
    let k = n + 2;
    checked_pow(a.dim() as u64, k)
        .and_then(|t| t.checked_mul(m.dim().max(1) as u64))
        .filter(|&t| t <= caps.tensor)
        .ok_or_else(|| {
            Error::cap("transferred operation", format!("{}^{k} x {}", a.dim(), m.dim()), caps.tensor)
        })?;
    let c = Contraction::new(y, n, convention)?;
    let r0 = &c.reps[0];
    let da = r0.len();
    // hλ_j on every tuple of length j, as elements of Y_{j-1}
    let mut h_lambda: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(), r0.clone()];
    let lambda = |j: usize, t: usize, table: &Vec<Vec<Vec<Scalar>>>| -> Vec<Scalar> {
        let mut acc = f.zero_vec(if j - 2 <= y.hi() { y.dim(j - 2) } else { 0 });
        for left in 1..j {
            let right = j - left;
            let sign = f.sign((left * (right + 1)) as i64);
            let scale = da.pow(right as u32);
            let (tl, tr) = (t / scale, t % scale);
            let u = &table[left][tl];
            let v = &table[right][tr];
            if let Some(prod) = y.mul(left - 1, u, right - 1, v) {
                f.axpy(&mut acc, &sign, &prod);
            }
        }
        acc
    };
    for j in 2..k {
        let count = da.pow(j as u32);
        let level: Vec<Vec<Scalar>> = (0..count)
            .into_par_iter()
            .map(|t| c.homotopy[j - 2].mul_vec(&lambda(j, t, &h_lambda)))
            .collect();
        h_lambda.push(level);
    }
    let count = da.pow(k as u32);
    let values: Vec<Vec<Scalar>> = (0..count)
        .into_par_iter()
        .map(|t| c.proj[n].mul_vec(&lambda(k, t, &h_lambda)))
        .collect();
    let raw = values.concat();
    // from contraction bases to the bases of hn_bimodule
    let phi_cols: Vec<Vec<Scalar>> = r0.iter().map(|r| hb.h0.quotient.project(r)).collect();
    let phi = Matrix::from_columns(f, a.dim(), &phi_cols);
    let psi_cols: Vec<Vec<Scalar>> = c.reps[n].iter().map(|z| hb.homology.coords(z)).collect();
    let psi = Matrix::from_columns(f, m.dim(), &psi_cols);
    let phi_inv = phi
        .inverse()
        .ok_or_else(|| Error::Internal("contraction representatives do not span H_0".into()))?;
    let moved = precompose_all_slots(f, &raw, da, k, m.dim(), &phi_inv);
    let dm = m.dim().max(1);
    let operation: Vec<Scalar> = moved.chunks(dm).flat_map(|v| psi.mul_vec(v)).collect();
    let model = MinimalExtensionModel {
        algebra: a,
        bimodule: m,
        n,
        operation,
    };
    let report = a_infinity_check(&model);
    if !report.passed() {
        return Err(Error::Internal(format!(
            "transferred operation fails coherence: {:?}",
            report
        )));
    }
    let class = model_class(&model, caps)?;
    Ok(KInvariant {
        model,
        class,
        convention,
    })
}

#[cfg(test)]
mod tests;
