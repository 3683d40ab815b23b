//! Order-4 symmetric tensors in compressed canonical storage.
//!
//! A symmetric tensor of order 4 and dimension `n` is determined by its
//! entries on sorted index tuples `i <= j <= k <= l`; there are `C(n+3, 4)`
//! of them. Every full-tensor sum (form value, inner product, ...) is computed
//! over canonical slots weighted by how many of the `n^4` index tuples
//! collapse onto that slot.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{exact_sqrt, Rational, Scalar};

/// Sorted, zero-based index tuple of a canonical slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalIndex([usize; 4]);

impl CanonicalIndex {
    pub fn new(mut index: [usize; 4]) -> Self {
        index.sort_unstable();
        Self(index)
    }

    /// Build from one-based indices, as written in the text format.
    pub fn from_one_based(index: [usize; 4], dim: usize) -> Result<Self> {
        if index.iter().any(|&i| i == 0 || i > dim) {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        Ok(Self::new(index.map(|i| i - 1)))
    }

    /// Index of the monomial `x^exponents`; exponents must sum to 4.
    pub fn from_exponents(exponents: &[usize]) -> Self {
        debug_assert_eq!(exponents.iter().sum::<usize>(), 4);
        let mut index = [0; 4];
        let mut slot = 0;
        for (var, &e) in exponents.iter().enumerate() {
            for _ in 0..e {
                index[slot] = var;
                slot += 1;
            }
        }
        Self(index)
    }

    pub fn as_array(&self) -> [usize; 4] {
        self.0
    }

    pub fn one_based(&self) -> [usize; 4] {
        self.0.map(|i| i + 1)
    }

    /// Exponent vector of the associated monomial.
    pub fn exponents(&self, dim: usize) -> Vec<usize> {
        let mut e = vec![0; dim];
        for &i in &self.0 {
            e[i] += 1;
        }
        e
    }

    /// Number of index tuples that are permutations of this one:
    /// 1, 4, 6, 12 or 24.
    pub fn multiplicity(&self) -> u32 {
        let mut denom = 1;
        let mut run = 1;
        for w in self.0.windows(2) {
            if w[0] == w[1] {
                run += 1;
                denom *= run;
            } else {
                run = 1;
            }
        }
        24 / denom
    }

    /// Number of index tuples `(k, i2, i3, i4)` that collapse onto this slot,
    /// i.e. the weight of this entry in component `k` of `T x^3`.
    pub fn gradient_weight(&self, k: usize) -> u32 {
        let mut rest = Vec::with_capacity(3);
        let mut removed = false;
        for &i in &self.0 {
            if i == k && !removed {
                removed = true;
            } else {
                rest.push(i);
            }
        }
        if !removed {
            return 0;
        }
        let mut denom = 1;
        let mut run = 1;
        for w in rest.windows(2) {
            if w[0] == w[1] {
                run += 1;
                denom *= run;
            } else {
                run = 1;
            }
        }
        6 / denom
    }

    /// All canonical slots of a dimension-`dim` tensor, in lexicographic order.
    pub fn all(dim: usize) -> impl Iterator<Item = CanonicalIndex> {
        let mut out = Vec::new();
        for i in 0..dim {
            for j in i..dim {
                for k in j..dim {
                    for l in k..dim {
                        out.push(CanonicalIndex([i, j, k, l]));
                    }
                }
            }
        }
        out.into_iter()
    }

    /// `C(dim + 3, 4)`.
    pub fn count(dim: usize) -> usize {
        (dim * (dim + 1) * (dim + 2) * (dim + 3)) / 24
    }
}

impl fmt::Display for CanonicalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k, l] = self.one_based();
        write!(f, "t{i}{j}{k}{l}")
    }
}

/// Order-4 symmetric tensor. Unset slots read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor4<S = Rational> {
    dim: usize,
    entries: BTreeMap<CanonicalIndex, S>,
}

/// Exact tensor, the default everywhere outside the numeric oracle.
pub type ExactTensor = SymmetricTensor4<Rational>;

impl<S: Scalar> SymmetricTensor4<S> {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            dim,
            entries: BTreeMap::new(),
        })
    }

    /// Tensor with `t_iiii = 1` and every other entry zero, i.e. `sum x_i^4`.
    pub fn diagonal_ones(dim: usize) -> Result<Self> {
        let mut t = Self::zeros(dim)?;
        for i in 0..dim {
            t.set(CanonicalIndex::new([i; 4]), S::one());
        }
        Ok(t)
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = ([usize; 4], S)>) -> Result<Self> {
        let mut t = Self::zeros(dim)?;
        for (index, value) in entries {
            if index.iter().any(|&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index, dim });
            }
            t.set(CanonicalIndex::new(index), value);
        }
        Ok(t)
    }

    /// Build the tensor of the quartic form `sum c_m x^m` from monomial
    /// coefficients, dividing each by the multiplicity of its slot
    /// (4 for `x_i^3 x_j`, 6 for `x_i^2 x_j^2`, 12 for `x_i^2 x_j x_k`, ...).
    /// Repeated monomials accumulate.
    pub fn from_monomials(dim: usize, terms: impl IntoIterator<Item = (CanonicalIndex, S)>) -> Result<Self> {
        let mut t = Self::zeros(dim)?;
        for (index, coeff) in terms {
            if index.0[3] >= dim {
                return Err(Error::IndexOutOfRange {
                    index: index.0,
                    dim,
                });
            }
            let weight = S::from_u32(index.multiplicity()).expect("small integer");
            let value = t.get(index) + coeff / weight;
            t.set(index, value);
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, index: CanonicalIndex) -> S {
        self.entries.get(&index).cloned().unwrap_or_else(S::zero)
    }

    /// Entry at any (possibly unsorted) zero-based index tuple.
    pub fn entry(&self, index: [usize; 4]) -> S {
        self.get(CanonicalIndex::new(index))
    }

    pub fn set(&mut self, index: CanonicalIndex, value: S) {
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    /// Nonzero canonical entries in lexicographic order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (CanonicalIndex, &S)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> SymmetricTensor4<T> {
        let mut out = SymmetricTensor4::<T> {
            dim: self.dim,
            entries: BTreeMap::new(),
        };
        for (k, v) in &self.entries {
            out.set(*k, f(v));
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: len,
            });
        }
        Ok(())
    }

    /// `T x^4 = sum_{i,j,k,l} t_ijkl x_i x_j x_k x_l`.
    pub fn evaluate_form(&self, x: &[S]) -> Result<S> {
        self.check_dim(x.len())?;
        let mut total = S::zero();
        for (index, value) in &self.entries {
            let [i, j, k, l] = index.0;
            let weight = S::from_u32(index.multiplicity()).expect("small integer");
            total = total + weight * value.clone() * x[i].clone() * x[j].clone() * x[k].clone() * x[l].clone();
        }
        Ok(total)
    }

    /// `T x^3`, the vector with components `sum t_{k i j l} x_i x_j x_l`.
    /// Its dot product with `x` is `T x^4`.
    pub fn evaluate_gradient(&self, x: &[S]) -> Result<Vec<S>> {
        self.check_dim(x.len())?;
        let mut out = vec![S::zero(); self.dim];
        for (index, value) in &self.entries {
            let idx = index.0;
            for (k, slot) in out.iter_mut().enumerate() {
                let w = index.gradient_weight(k);
                if w == 0 {
                    continue;
                }
                // Product of the three remaining coordinates.
                let pos = idx.iter().position(|&i| i == k).expect("k occurs in index");
                let mut term = value.clone() * S::from_u32(w).expect("small integer");
                for (p, &i) in idx.iter().enumerate() {
                    if p != pos {
                        term = term * x[i].clone();
                    }
                }
                *slot = slot.clone() + term;
            }
        }
        Ok(out)
    }

    /// `T x^k y^(4-k)`: the multilinear form with `k` slots fed `x` and the
    /// rest fed `y`.
    pub fn evaluate_mixed(&self, x: &[S], k: usize, y: &[S]) -> Result<S> {
        if k > 4 {
            return Err(Error::MixedOrder(k));
        }
        self.check_dim(x.len())?;
        self.check_dim(y.len())?;
        let n = self.dim;
        let mut total = S::zero();
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    for l in 0..n {
                        let t = self.entry([i, j, m, l]);
                        if t.is_zero() {
                            continue;
                        }
                        let mut term = t;
                        for (slot, &idx) in [i, j, m, l].iter().enumerate() {
                            let v = if slot < k { &x[idx] } else { &y[idx] };
                            term = term * v.clone();
                        }
                        total = total + term;
                    }
                }
            }
        }
        Ok(total)
    }

    /// `<T, A> = sum_{i,j,k,l} t_ijkl a_ijkl`.
    pub fn inner_product(&self, other: &Self) -> Result<S> {
        self.check_dim(other.dim)?;
        let mut total = S::zero();
        for (index, value) in &self.entries {
            if let Some(a) = other.entries.get(index) {
                let weight = S::from_u32(index.multiplicity()).expect("small integer");
                total = total + weight * value.clone() * a.clone();
            }
        }
        Ok(total)
    }

    pub fn frobenius_norm_squared(&self) -> S {
        self.inner_product(self).expect("same dimension")
    }

    /// Average a dense row-major `n^4` array over index permutations.
    ///
    /// Returns the symmetric tensor and the largest deviation of any raw entry
    /// from its canonical average (zero iff the input was already symmetric).
    pub fn symmetrize(dim: usize, raw: &[S]) -> Result<(Self, S)> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let expected = dim.pow(4);
        if raw.len() != expected {
            return Err(Error::EntryCount {
                expected,
                found: raw.len(),
            });
        }
        let flat = |[i, j, k, l]: [usize; 4]| ((i * dim + j) * dim + k) * dim + l;
        let mut sums: BTreeMap<CanonicalIndex, S> = BTreeMap::new();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        let v = raw[flat([i, j, k, l])].clone();
                        let slot = sums.entry(CanonicalIndex::new([i, j, k, l])).or_insert_with(S::zero);
                        *slot = slot.clone() + v;
                    }
                }
            }
        }
        let mut t = Self::zeros(dim)?;
        for (index, sum) in sums {
            let weight = S::from_u32(index.multiplicity()).expect("small integer");
            t.set(index, sum / weight);
        }
        let mut deviation = S::zero();
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        let d = (raw[flat([i, j, k, l])].clone() - t.entry([i, j, k, l])).abs();
                        if d > deviation {
                            deviation = d;
                        }
                    }
                }
            }
        }
        Ok((t, deviation))
    }
}

impl SymmetricTensor4<Rational> {
    pub fn to_f64(&self) -> SymmetricTensor4<f64> {
        self.map(crate::scalar::to_f64)
    }

    /// Frobenius norm as a float.
    pub fn frobenius_norm(&self) -> f64 {
        crate::scalar::to_f64(&self.frobenius_norm_squared()).sqrt()
    }

    /// Frobenius norm when it is rational (e.g. for rank-one tensors).
    pub fn frobenius_norm_exact(&self) -> Option<Rational> {
        exact_sqrt(&self.frobenius_norm_squared())
    }
}

impl SymmetricTensor4<f64> {
    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_squared().sqrt()
    }
}

/// `x^{⊗4}`, stored through its generator.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneTensor4<S = Rational> {
    generator: Vec<S>,
}

impl<S: Scalar> RankOneTensor4<S> {
    pub fn new(generator: Vec<S>) -> Result<Self> {
        if generator.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { generator })
    }

    pub fn generator(&self) -> &[S] {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    pub fn entry(&self, index: [usize; 4]) -> S {
        index.iter().fold(S::one(), |acc, &i| acc * self.generator[i].clone())
    }

    pub fn to_tensor(&self) -> SymmetricTensor4<S> {
        let n = self.dim();
        let mut t = SymmetricTensor4::zeros(n).expect("nonempty generator");
        for index in CanonicalIndex::all(n) {
            t.set(index, self.entry(index.as_array()));
        }
        t
    }
}
