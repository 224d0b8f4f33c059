//! Bounded connective chain complexes, chain maps, mapping cones and
//! connectivity of maps.
//!
//! Grading is homological: `d_i` lowers degree by one. A complex stores a
//! window `[lo, hi]`; when `top_exact` is false the complex is the visible
//! part of something larger, so `d_{hi+1}` is unknown and any answer that
//! depends on it is flagged as window-limited.

use crate::error::{Error, Result};
use crate::exactla::{Convention, GroundField, Matrix, Scalar, Subquotient};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    field: GroundField,
    lo: i64,
    hi: i64,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    /// `diffs[k]` is `d_{lo+k+1}`.
    diffs: Vec<Matrix>,
    top_exact: bool,
}

/// Homology in one degree together with canonical representatives.
#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: i64,
    pub dim: usize,
    pub window_limited: bool,
    pub classes: Subquotient,
}

impl Homology {
    pub fn representatives(&self) -> Vec<Vec<Scalar>> {
        self.classes.representatives()
    }

    pub fn coords(&self, cycle: &[Scalar]) -> Vec<Scalar> {
        self.classes.coords(cycle)
    }
}

impl ChainComplex {
    /// `dims` covers degrees `lo..=hi`; `diffs` holds `d_{lo+1} ..= d_hi`.
    pub fn new(
        field: GroundField,
        lo: i64,
        dims: Vec<usize>,
        diffs: Vec<Matrix>,
        top_exact: bool,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::invalid("chain complex needs a nonempty window"));
        }
        let labels = dims
            .iter()
            .enumerate()
            .map(|(k, &n)| (0..n).map(|i| format!("e{}_{}", lo + k as i64, i)).collect())
            .collect();
        Self::with_labels(field, lo, dims, labels, diffs, top_exact)
    }

    pub fn with_labels(
        field: GroundField,
        lo: i64,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
        diffs: Vec<Matrix>,
        top_exact: bool,
    ) -> Result<Self> {
        Self::assemble(field, lo, dims, labels, diffs, top_exact, true)
    }

    /// Shape-checked but without the `d∘d = 0` check, for callers that
    /// report that condition themselves.
    pub(crate) fn with_labels_unchecked(
        field: GroundField,
        lo: i64,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
        diffs: Vec<Matrix>,
        top_exact: bool,
    ) -> Result<Self> {
        Self::assemble(field, lo, dims, labels, diffs, top_exact, false)
    }

    fn assemble(
        field: GroundField,
        lo: i64,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
        diffs: Vec<Matrix>,
        top_exact: bool,
        check_square: bool,
    ) -> Result<Self> {
        let hi = lo + dims.len() as i64 - 1;
        if diffs.len() + 1 != dims.len() {
            return Err(Error::invalid(format!(
                "expected {} differentials, got {}",
                dims.len() - 1,
                diffs.len()
            )));
        }
        if labels.len() != dims.len() || labels.iter().zip(&dims).any(|(l, &n)| l.len() != n) {
            return Err(Error::invalid("basis labels do not match dimensions"));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.field() != field {
                return Err(Error::FieldMismatch(format!("d_{}", lo + k as i64 + 1)));
            }
            if d.rows() != dims[k] || d.cols() != dims[k + 1] {
                return Err(Error::invalid(format!(
                    "d_{} has shape {}x{}, expected {}x{}",
                    lo + k as i64 + 1,
                    d.rows(),
                    d.cols(),
                    dims[k],
                    dims[k + 1]
                )));
            }
        }
        for k in 1..diffs.len() {
            if check_square && !diffs[k - 1].mul(&diffs[k]).is_zero() {
                return Err(Error::invalid(format!(
                    "d_{} * d_{} != 0",
                    lo + k as i64,
                    lo + k as i64 + 1
                )));
            }
        }
        Ok(ChainComplex {
            field,
            lo,
            hi,
            dims,
            labels,
            diffs,
            top_exact,
        })
    }

    /// The zero complex on a window.
    pub fn zero(field: GroundField, lo: i64, hi: i64) -> Self {
        let n = (hi - lo + 1) as usize;
        let diffs = (1..n).map(|_| Matrix::zeros(field, 0, 0)).collect();
        Self::new(field, lo, vec![0; n], diffs, true).expect("zero complex")
    }

    pub fn field(&self) -> GroundField {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// True when everything above `hi` is known to vanish.
    pub fn top_exact(&self) -> bool {
        self.top_exact
    }

    pub fn in_window(&self, i: i64) -> bool {
        self.lo <= i && i <= self.hi
    }

    /// Dimension in degree `i`; zero outside the window.
    pub fn dim(&self, i: i64) -> usize {
        if self.in_window(i) {
            self.dims[(i - self.lo) as usize]
        } else {
            0
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self, i: i64) -> &[String] {
        if self.in_window(i) {
            &self.labels[(i - self.lo) as usize]
        } else {
            &[]
        }
    }

    /// `d_i: C_i -> C_{i-1}`, a zero matrix of the right shape outside the
    /// stored range.
    pub fn d(&self, i: i64) -> Matrix {
        if i > self.lo && i <= self.hi {
            self.diffs[(i - self.lo - 1) as usize].clone()
        } else {
            Matrix::zeros(self.field, self.dim(i - 1), self.dim(i))
        }
    }

    fn check_degree(&self, i: i64) -> Result<()> {
        if self.in_window(i) {
            Ok(())
        } else {
            Err(Error::DegreeOutOfWindow {
                degree: i,
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    pub fn homology(&self, i: i64) -> Result<Homology> {
        self.homology_with(i, Convention::RowEchelon)
    }

    pub fn homology_with(&self, i: i64, convention: Convention) -> Result<Homology> {
        self.check_degree(i)?;
        let classes = Subquotient::of_maps(&self.d(i), &self.d(i + 1), convention);
        Ok(Homology {
            degree: i,
            dim: classes.dim(),
            window_limited: i == self.hi && !self.top_exact,
            classes,
        })
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        (self.lo..=self.hi)
            .map(|i| self.homology_dim(i).expect("in window"))
            .collect()
    }

    /// `dim H_i` from ranks alone. Vanishing is first tried with rank lower
    /// bounds, which certify `H_i = 0` when they already fill `C_i`.
    pub fn homology_dim(&self, i: i64) -> Result<usize> {
        self.check_degree(i)?;
        let (out, inc) = (self.d(i), self.d(i + 1));
        let n = self.dim(i);
        if out.rank_lower_bound() + inc.rank_lower_bound() == n {
            return Ok(0);
        }
        Ok(n - out.rank() - inc.rank())
    }

    /// Whether `H_i = 0`, settled by rank bounds when they suffice.
    pub fn homology_vanishes(&self, i: i64) -> Result<bool> {
        self.check_degree(i)?;
        let (out, inc) = (self.d(i), self.d(i + 1));
        let n = self.dim(i);
        let most = out.rows().min(out.cols()) + inc.rows().min(inc.cols());
        if most < n {
            return Ok(false);
        }
        Ok(self.homology_dim(i)? == 0)
    }

    /// Whether `H_i` may change when the window grows.
    pub fn window_limited_at(&self, i: i64) -> bool {
        i == self.hi && !self.top_exact
    }

    /// Pads an exact complex with zeros up to `hi`.
    pub fn extend_to(&self, hi: i64) -> Result<Self> {
        if hi <= self.hi {
            return Ok(self.clone());
        }
        if !self.top_exact {
            return Err(Error::WindowLimited(format!(
                "cannot extend a window-limited complex past degree {}",
                self.hi
            )));
        }
        let mut dims = self.dims.clone();
        let mut labels = self.labels.clone();
        let mut diffs = self.diffs.clone();
        for _ in self.hi..hi {
            let prev = *dims.last().unwrap();
            dims.push(0);
            labels.push(Vec::new());
            diffs.push(Matrix::zeros(self.field, prev, 0));
        }
        Self::with_labels(self.field, self.lo, dims, labels, diffs, true)
    }

    /// Window restricted to `[lo, hi]`; dropping degrees loses exactness.
    pub fn restrict(&self, hi: i64) -> Result<Self> {
        self.check_degree(hi)?;
        if hi == self.hi {
            return Ok(self.clone());
        }
        let n = (hi - self.lo + 1) as usize;
        Self::with_labels(
            self.field,
            self.lo,
            self.dims[..n].to_vec(),
            self.labels[..n].to_vec(),
            self.diffs[..n - 1].to_vec(),
            false,
        )
    }

    /// `C[k]`: degree `i` holds `C_{i-k}`, differential `(-1)^k d`.
    pub fn shift(&self, k: i64) -> Self {
        let sign = self.field.sign(k);
        ChainComplex {
            field: self.field,
            lo: self.lo + k,
            hi: self.hi + k,
            dims: self.dims.clone(),
            labels: self.labels.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(&sign)).collect(),
            top_exact: self.top_exact,
        }
    }
}

/// Degreewise linear maps commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    /// `maps[k]` acts in degree `lo + k`.
    maps: Vec<Matrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, maps: Vec<Matrix>) -> Result<Self> {
        if source.field != target.field {
            return Err(Error::FieldMismatch("chain map endpoints".into()));
        }
        let (source, target) = align(source, target)?;
        let n = source.dims.len();
        let mut maps = maps;
        if maps.len() > n {
            return Err(Error::invalid("more component maps than degrees"));
        }
        while maps.len() < n {
            let i = source.lo + maps.len() as i64;
            if source.dim(i) != 0 && target.dim(i) != 0 {
                return Err(Error::invalid(format!("missing chain map component in degree {i}")));
            }
            maps.push(Matrix::zeros(source.field, target.dim(i), source.dim(i)));
        }
        for (k, m) in maps.iter().enumerate() {
            let i = source.lo + k as i64;
            if m.rows() != target.dim(i) || m.cols() != source.dim(i) {
                return Err(Error::invalid(format!("chain map shape wrong in degree {i}")));
            }
        }
        let f = ChainMap {
            source,
            target,
            maps,
        };
        for i in f.source.lo + 1..=f.source.hi {
            let lhs = f.target.d(i).mul(f.at(i));
            let rhs = f.at(i - 1).mul(&f.source.d(i));
            if lhs != rhs {
                return Err(Error::invalid(format!(
                    "chain map does not commute with d in degree {i}"
                )));
            }
        }
        Ok(f)
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let maps = c.dims.iter().map(|&n| Matrix::identity(c.field, n)).collect();
        ChainMap {
            source: c.clone(),
            target: c.clone(),
            maps,
        }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Result<Self> {
        let (s, t) = align(source.clone(), target.clone())?;
        let maps = (s.lo..=s.hi)
            .map(|i| Matrix::zeros(s.field, t.dim(i), s.dim(i)))
            .collect();
        Self::new(s, t, maps)
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn lo(&self) -> i64 {
        self.source.lo
    }

    pub fn hi(&self) -> i64 {
        self.source.hi
    }

    /// Component in degree `i`; out-of-window degrees give a zero matrix.
    pub fn at(&self, i: i64) -> &Matrix {
        &self.maps[(i - self.source.lo) as usize]
    }

    pub fn component(&self, i: i64) -> Matrix {
        if self.source.in_window(i) {
            self.at(i).clone()
        } else {
            Matrix::zeros(self.source.field, self.target.dim(i), self.source.dim(i))
        }
    }

    pub fn compose(&self, after: &ChainMap) -> Result<ChainMap> {
        if self.target != after.source {
            return Err(Error::invalid("composition of non-composable chain maps"));
        }
        let maps = (self.lo()..=self.hi())
            .map(|i| after.at(i).mul(self.at(i)))
            .collect();
        ChainMap::new(self.source.clone(), after.target.clone(), maps)
    }

    /// Matrix of `H_i(f)` in canonical homology coordinates.
    pub fn on_homology(&self, i: i64) -> Result<Matrix> {
        let hs = self.source.homology(i)?;
        let ht = self.target.homology(i)?;
        let f = self.source.field;
        let cols: Vec<Vec<Scalar>> = hs
            .representatives()
            .iter()
            .map(|z| ht.coords(&self.at(i).mul_vec(z)))
            .collect();
        Ok(Matrix::from_columns(f, ht.dim, &cols))
    }
}

fn align(a: ChainComplex, b: ChainComplex) -> Result<(ChainComplex, ChainComplex)> {
    if a.lo != b.lo {
        return Err(Error::invalid(format!(
            "windows start at different degrees ({} vs {})",
            a.lo, b.lo
        )));
    }
    let hi = a.hi.max(b.hi);
    Ok((a.extend_to(hi)?, b.extend_to(hi)?))
}

/// Mapping cone: degree `i` is `target_i ⊕ source_{i-1}` with differential
/// `(b, a) ↦ (d b + f a, -d a)`.
///
/// When the target is window-limited the cone keeps the window `[lo, hi]`;
/// otherwise it extends one degree further to hold `source_hi`.
pub fn cone(f: &ChainMap) -> Result<ChainComplex> {
    let src = &f.source;
    let tgt = &f.target;
    let field = src.field;
    let lo = src.lo;
    let hi = if tgt.top_exact { src.hi + 1 } else { src.hi };
    let mut dims = Vec::new();
    let mut labels = Vec::new();
    for i in lo..=hi {
        dims.push(tgt.dim(i) + src.dim(i - 1));
        let mut l: Vec<String> = tgt.labels(i).iter().map(|s| format!("B:{s}")).collect();
        l.extend(src.labels(i - 1).iter().map(|s| format!("A:{s}")));
        labels.push(l);
    }
    let minus_one = field.from_i64(-1);
    let mut diffs = Vec::new();
    for i in lo + 1..=hi {
        let (tb, ta) = (tgt.dim(i), src.dim(i - 1));
        let (sb, sa) = (tgt.dim(i - 1), src.dim(i - 2));
        let mut d = Matrix::zeros(field, sb + sa, tb + ta);
        d.set_block(0, 0, &tgt.d(i));
        d.set_block(0, tb, &f.component(i - 1));
        d.set_block(sb, tb, &src.d(i - 1).scale(&minus_one));
        diffs.push(d);
    }
    let top_exact = tgt.top_exact && src.top_exact;
    ChainComplex::with_labels(field, lo, dims, labels, diffs, top_exact)
}

/// Measured connectivity of a chain map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connectivity {
    /// Largest `c` with `H_i(cone f) = 0` for all visible `i <= c`.
    pub c: i64,
    /// Set when a larger window could reveal a larger `c`.
    pub window_limited: bool,
    /// First degree with nonzero cone homology and its dimension, when seen.
    pub first_nonvanishing: Option<(i64, usize)>,
}

/// Connectivity of `f` measured on the map's window `[lo, hi]`.
pub fn connectivity(f: &ChainMap) -> Result<Connectivity> {
    let c = cone(f)?;
    for i in f.lo()..=f.hi() {
        let window_limited = c.window_limited_at(i);
        let first = if window_limited {
            if c.homology_vanishes(i)? {
                continue;
            }
            None
        } else {
            match c.homology_dim(i)? {
                0 => continue,
                dim => Some((i, dim)),
            }
        };
        return Ok(Connectivity {
            c: i - 1,
            window_limited,
            first_nonvanishing: first,
        });
    }
    Ok(Connectivity {
        c: f.hi(),
        window_limited: true,
        first_nonvanishing: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GroundField {
        GroundField::prime(2).unwrap()
    }

    fn point(field: GroundField) -> ChainComplex {
        ChainComplex::new(field, 0, vec![1], vec![], true).unwrap()
    }

    #[test]
    fn identity_differential_is_acyclic() {
        let f = f2();
        let c = ChainComplex::new(f, 0, vec![1, 1], vec![Matrix::identity(f, 1)], true).unwrap();
        assert_eq!(c.homology_dims(), vec![0, 0]);
    }

    #[test]
    fn zero_differential_homology_is_chains() {
        let f = GroundField::Rationals;
        let c = ChainComplex::new(f, 0, vec![2, 3], vec![Matrix::zeros(f, 2, 3)], true).unwrap();
        assert_eq!(c.homology_dims(), vec![2, 3]);
    }

    #[test]
    fn rank_nullity_example() {
        let f = f2();
        let d1 = Matrix::from_i64(f, &[&[1, 1]]);
        let c = ChainComplex::new(f, 0, vec![1, 2], vec![d1.clone()], true).unwrap();
        // H0 = 1 - rank d1, H1 = 2 - rank d1
        assert_eq!(c.homology(0).unwrap().dim, 1 - d1.rank());
        assert_eq!(c.homology(1).unwrap().dim, 2 - d1.rank());
        assert_eq!(c.homology_dims(), vec![0, 1]);
    }

    #[test]
    fn rejects_nonzero_square() {
        let f = f2();
        let one = Matrix::identity(f, 1);
        let err = ChainComplex::new(f, 0, vec![1, 1, 1], vec![one.clone(), one], true);
        assert!(err.is_err());
    }

    #[test]
    fn homology_at_top_of_window_is_flagged() {
        let f = f2();
        let c = ChainComplex::new(f, 0, vec![1, 1], vec![Matrix::zeros(f, 1, 1)], false).unwrap();
        assert!(!c.homology(0).unwrap().window_limited);
        assert!(c.homology(1).unwrap().window_limited);
        assert!(c.homology(2).is_err());
    }

    #[test]
    fn cone_examples() {
        let f = f2();
        let k = point(f);
        let id = ChainMap::identity(&k);
        assert_eq!(cone(&id).unwrap().homology_dims(), vec![0, 0]);

        let zero_src = ChainComplex::zero(f, 0, 0);
        let c = ChainComplex::new(f, 0, vec![2], vec![], true).unwrap();
        let inc = ChainMap::zero(&zero_src, &c).unwrap();
        let cn = cone(&inc).unwrap();
        assert_eq!(cn.dim(0), 2);
        assert_eq!(cn.homology_dims(), vec![2, 0]);

        let z = ChainMap::zero(&k, &k).unwrap();
        assert_eq!(cone(&z).unwrap().homology_dims(), vec![1, 1]);
    }

    #[test]
    fn connectivity_examples() {
        let f = f2();
        let k = point(f);
        let id = connectivity(&ChainMap::identity(&k)).unwrap();
        assert_eq!((id.c, id.window_limited), (0, true));

        let zero = ChainComplex::new(f, 0, vec![0], vec![], true).unwrap();
        let to_zero = ChainMap::zero(&k, &zero).unwrap();
        let cn = cone(&to_zero).unwrap();
        assert_eq!(cn.homology(1).unwrap().dim, 1);
        assert_eq!(connectivity(&to_zero).unwrap().c, 0);

        // F_2[x]/x^2 -> F_2, both in degree 0: 1 -> 1, x -> 0
        let a = ChainComplex::new(f, 0, vec![2], vec![], true).unwrap();
        let q = ChainMap::new(a, k, vec![Matrix::from_i64(f, &[&[1, 0]])]).unwrap();
        let conn = connectivity(&q).unwrap();
        assert_eq!(conn.c, 0);
        assert_eq!(cone(&q).unwrap().homology(1).unwrap().dim, 1);
    }

    #[test]
    fn shift_moves_homology() {
        let f = GroundField::prime(3).unwrap();
        let c = ChainComplex::new(f, 0, vec![1, 2], vec![Matrix::from_i64(f, &[&[1, 2]])], true)
            .unwrap();
        let s = c.shift(2);
        for i in 0..=1 {
            assert_eq!(s.homology(i + 2).unwrap().dim, c.homology(i).unwrap().dim);
        }
    }
}
