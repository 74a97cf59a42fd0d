//! Sparse exact symmetric tensors `Symⁿ𝒞_F`.
//!
//! A [`SymTensor`] stores one coefficient per sorted multi-index. The stored
//! value is the *plain-basis* coefficient: the coefficient of every single
//! arrangement `e_{i₁} ⊗ ⋯ ⊗ e_{i_n}` of that multi-index. Orbit sizes only
//! enter inside [`SymTensor::mul`], [`SymTensor::graft`] and
//! [`symmetrize`].
//!
//! Products use the identity `x·y = Σ_I c_I·A(I)·(e_I·y)^∨`, where `e_I` is a
//! single arrangement of the key `I` and `A(I) = n!/∏μ_j!` is the number of
//! its distinct arrangements.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraKind, FieldTag, MulTable, UnitImaginary, OCTONION_TABLE};
use crate::error::{arg_err, Error, Result};
use crate::linalg;
use crate::scalars::{factorial, GaussRational, Rational};

/// Default limit on `dⁿ` for dense computations.
pub const DEFAULT_DENSE_BOUND: usize = 4096;

/// A sorted multiset of basis indices, the label of one symmetric-group orbit
/// of tensor monomials.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    /// Sorts `entries` into canonical order.
    pub fn new(mut entries: Vec<u8>) -> Self {
        entries.sort_unstable();
        Self(entries)
    }

    pub fn entries(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Multiplicity of each basis index `0..d`.
    pub fn multiplicities(&self, d: usize) -> Vec<usize> {
        let mut m = vec![0; d.max(self.0.iter().map(|&i| i as usize + 1).max().unwrap_or(0))];
        for &i in &self.0 {
            m[i as usize] += 1;
        }
        m
    }

    /// `A(I) = n!/∏μ_j!`, the number of distinct arrangements.
    pub fn arrangement_count(&self) -> u64 {
        let mut count = 1u64;
        let mut placed = 0u64;
        for run in self.0.chunk_by(|a, b| a == b) {
            for k in 1..=run.len() as u64 {
                placed += 1;
                count = count * placed / k;
            }
        }
        count
    }

    /// `∏μ_j!/n!`, the plain coefficient of `(e_M)^∨` at its sorted key.
    pub fn orbit_weight(&self) -> Rational {
        let num = self
            .0
            .chunk_by(|a, b| a == b)
            .fold(BigInt::one(), |acc, run| acc * factorial(run.len() as u32));
        Rational::new(num, factorial(self.0.len() as u32))
    }

    /// All distinct arrangements, in lexicographic order.
    pub fn arrangements(&self) -> Vec<Vec<u8>> {
        let mut cur = self.0.clone();
        let mut out = vec![cur.clone()];
        while next_permutation(&mut cur) {
            out.push(cur.clone());
        }
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let Some(i) = (0..v.len() - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..v.len()).rev().find(|&j| v[j] > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// Every sorted multi-index of degree `n` over `0..d`, in lexicographic order.
/// Its length is `C(n+d−1, d−1)`.
pub fn all_keys(kind: AlgebraKind, n: usize) -> Vec<MultiIndex> {
    keyspace(kind.dim(), n).keys.clone()
}

enum Lookup {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

/// Precomputed key enumeration for one `(d, n)`.
pub(crate) struct KeySpace {
    n: usize,
    keys: Vec<MultiIndex>,
    weights: Vec<Rational>,
    pow: [u64; 8],
    lookup: Lookup,
}

impl KeySpace {
    fn build(d: usize, n: usize) -> Self {
        let mut keys = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fn rec(d: usize, n: usize, start: u8, cur: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
            if cur.len() == n {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..d as u8 {
                cur.push(i);
                rec(d, n, i, cur, out);
                cur.pop();
            }
        }
        rec(d, n, 0, &mut cur, &mut keys);
        let mut pow = [0u64; 8];
        let mut p = 1u64;
        for slot in pow.iter_mut().take(d) {
            *slot = p;
            p *= n as u64 + 1;
        }
        let code_of = |k: &MultiIndex| k.0.iter().map(|&i| pow[i as usize]).sum::<u64>();
        let lookup = if p <= 1 << 22 {
            let mut table = vec![u32::MAX; p as usize];
            for (idx, k) in keys.iter().enumerate() {
                table[code_of(k) as usize] = idx as u32;
            }
            Lookup::Dense(table)
        } else {
            Lookup::Sparse(keys.iter().enumerate().map(|(idx, k)| (code_of(k), idx as u32)).collect())
        };
        let weights = keys.iter().map(MultiIndex::orbit_weight).collect();
        Self { n, keys, weights, pow, lookup }
    }

    #[inline]
    fn index_of_code(&self, code: u64) -> usize {
        match &self.lookup {
            Lookup::Dense(t) => t[code as usize] as usize,
            Lookup::Sparse(m) => m[&code] as usize,
        }
    }

    pub(crate) fn index_of(&self, key: &MultiIndex) -> usize {
        self.index_of_code(key.0.iter().map(|&i| self.pow[i as usize]).sum())
    }

    pub(crate) fn len(&self) -> usize {
        self.keys.len()
    }
}

pub(crate) fn keyspace(d: usize, n: usize) -> Arc<KeySpace> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Arc<KeySpace>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(ks) = cache.lock().unwrap().get(&(d, n)) {
        return ks.clone();
    }
    let ks = Arc::new(KeySpace::build(d, n));
    cache.lock().unwrap().entry((d, n)).or_insert(ks).clone()
}

/// An unsorted monomial with a coefficient, i.e. `coeff · e_{m₁} ⊗ ⋯ ⊗ e_{m_n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainTerm {
    pub monomial: Vec<u8>,
    pub coeff: GaussRational,
}

/// An element of `Symⁿ𝒞_F`.
#[derive(Clone, PartialEq, Eq)]
pub struct SymTensor {
    kind: AlgebraKind,
    field: FieldTag,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, GaussRational>,
}

impl fmt::Debug for SymTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sym^{}({}, {}){{", self.degree, self.kind, self.field)?;
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k:?}: {c}")?;
        }
        f.write_str("}")
    }
}

/// `(x⊗y)^∨` of plain monomials, summed into sorted keys with orbit weights.
pub fn symmetrize(terms: &[PlainTerm], kind: AlgebraKind, field: FieldTag, n: usize) -> Result<SymTensor> {
    let mut out = SymTensor::zero(kind, field, n);
    for t in terms {
        if t.monomial.len() != n {
            return arg_err(format!("monomial {:?} has length {}, expected {n}", t.monomial, t.monomial.len()));
        }
        if let Some(&bad) = t.monomial.iter().find(|&&i| i as usize >= kind.dim()) {
            return arg_err(format!("index {bad} out of range for {kind}"));
        }
        if field == FieldTag::RationalReal && !t.coeff.is_real() {
            return arg_err("complex coefficient in a RationalReal tensor");
        }
        let key = MultiIndex::new(t.monomial.clone());
        let w = key.orbit_weight();
        out.add_at(key, &t.coeff.scale(&w));
    }
    Ok(out)
}

impl SymTensor {
    pub fn zero(kind: AlgebraKind, field: FieldTag, degree: usize) -> Self {
        Self { kind, field, degree, coeffs: BTreeMap::new() }
    }

    /// `1^{⊗n}`; for `n = 0` the scalar 1.
    pub fn unit(kind: AlgebraKind, field: FieldTag, n: usize) -> Self {
        Self::monomial(kind, field, vec![0; n], GaussRational::one()).expect("valid key")
    }

    /// `coeff` at the sorted key of `entries` (the symmetric tensor whose every
    /// arrangement of `entries` has coefficient `coeff`).
    pub fn monomial(kind: AlgebraKind, field: FieldTag, entries: Vec<u8>, coeff: GaussRational) -> Result<Self> {
        let n = entries.len();
        Self::from_terms(kind, field, n, [(entries, coeff)])
    }

    /// Builds a tensor from `(key, plain coefficient)` pairs; keys are sorted
    /// and repeated keys accumulate.
    pub fn from_terms<I>(kind: AlgebraKind, field: FieldTag, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u8>, GaussRational)>,
    {
        let mut out = Self::zero(kind, field, degree);
        for (k, c) in terms {
            if k.len() != degree {
                return arg_err(format!("key {k:?} has length {}, expected {degree}", k.len()));
            }
            if let Some(&bad) = k.iter().find(|&&i| i as usize >= kind.dim()) {
                return arg_err(format!("index {bad} out of range for {kind}"));
            }
            if field == FieldTag::RationalReal && !c.is_real() {
                return arg_err("complex coefficient in a RationalReal tensor");
            }
            out.add_at(MultiIndex::new(k), &c);
        }
        Ok(out)
    }

    /// `x^{⊗n}` for an algebra element.
    pub fn tensor_power(x: &AlgebraElement, n: usize) -> Self {
        let mut out = Self::zero(x.kind(), x.field(), n);
        let support: Vec<u8> = (0..x.kind().dim()).filter(|&i| !x.coord(i).is_zero()).map(|i| i as u8).collect();
        if n == 0 {
            return Self::unit(x.kind(), x.field(), 0);
        }
        for key in keyspace(support.len(), n).keys.iter() {
            let entries: Vec<u8> = key.0.iter().map(|&i| support[i as usize]).collect();
            let c = entries.iter().fold(GaussRational::one(), |acc, &i| &acc * x.coord(i as usize));
            out.add_at(MultiIndex(entries), &c);
        }
        out
    }

    /// A degree-1 tensor equal to `x`.
    pub fn from_element(x: &AlgebraElement) -> Self {
        Self::tensor_power(x, 1)
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored (nonzero) keys.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &GaussRational)> {
        self.coeffs.iter()
    }

    /// Plain coefficient at the sorted key of `entries`.
    pub fn coeff(&self, entries: &[u8]) -> GaussRational {
        self.coeffs.get(&MultiIndex::new(entries.to_vec())).cloned().unwrap_or_default()
    }

    fn add_at(&mut self, key: MultiIndex, c: &GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind || self.field != other.field || self.degree != other.degree {
            return arg_err(format!(
                "operands differ: Sym^{} {}/{} vs Sym^{} {}/{}",
                self.degree, self.kind, self.field, other.degree, other.kind, other.field
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_at(k.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_at(k.clone(), &-c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussRational::from_int(-1))
    }

    /// Scalar multiple; a non-real scalar promotes the field.
    pub fn scale(&self, s: &GaussRational) -> Self {
        let field = if s.is_real() { self.field } else { FieldTag::GaussianComplex };
        let mut out = Self::zero(self.kind, field, self.degree);
        if s.is_zero() {
            return out;
        }
        out.coeffs = self.coeffs.iter().map(|(k, c)| (k.clone(), c * s)).collect();
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&GaussRational::real(r.clone()))
    }

    /// Sum of a nonempty family sharing one space.
    pub fn sum<'a, I: IntoIterator<Item = &'a SymTensor>>(items: I) -> Result<Self> {
        let mut it = items.into_iter();
        let first = it.next().ok_or_else(|| Error::Argument("empty sum".into()))?.clone();
        it.try_fold(first, |acc, x| acc.add(x))
    }

    /// The same tensor regarded over `ℚ[√−1]`.
    pub fn complexify(&self) -> Self {
        Self { field: FieldTag::GaussianComplex, ..self.clone() }
    }

    /// Demotes to `RationalReal` if every coefficient is real.
    pub fn try_realify(&self) -> Result<Self> {
        if self.coeffs.values().any(|c| !c.is_real()) {
            return arg_err("tensor has non-real coefficients");
        }
        Ok(Self { field: FieldTag::RationalReal, ..self.clone() })
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.values().all(GaussRational::is_real)
    }

    /// Coefficientwise Gaussian conjugation.
    pub fn conj_sym(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), c.conj())).collect(), ..self.clone() }
    }

    /// Reinterprets keys in a larger algebra.
    pub fn embed_sym(&self, into: AlgebraKind) -> Result<Self> {
        if into.dim() < self.kind.dim() {
            return arg_err(format!("cannot embed Sym {} into smaller {}", self.kind, into));
        }
        Ok(Self { kind: into, ..self.clone() })
    }

    /// Coordinates in the key order of [`all_keys`].
    pub fn to_vector(&self) -> Vec<GaussRational> {
        let ks = keyspace(self.kind.dim(), self.degree);
        let mut v = vec![GaussRational::zero(); ks.len()];
        for (k, c) in &self.coeffs {
            v[ks.index_of(k)] = c.clone();
        }
        v
    }

    /// Plain expansion over all arrangements of every key.
    pub fn plain_terms(&self) -> Vec<PlainTerm> {
        self.coeffs
            .iter()
            .flat_map(|(k, c)| k.arrangements().into_iter().map(move |m| PlainTerm { monomial: m, coeff: c.clone() }))
            .collect()
    }

    /// `(x ⊗ y)^∨` for `x` of degree `k` and `y` of degree `n − k`.
    pub fn graft(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind || self.field != other.field {
            return arg_err(format!(
                "graft operands differ: {}/{} vs {}/{}",
                self.kind, self.field, other.kind, other.field
            ));
        }
        let n = self.degree + other.degree;
        let mut out = Self::zero(self.kind, self.field, n);
        let nf = factorial(n as u32);
        for (ki, ci) in &self.coeffs {
            let ai = BigInt::from(ki.arrangement_count());
            for (kj, cj) in &other.coeffs {
                let aj = BigInt::from(kj.arrangement_count());
                let mut entries = ki.0.clone();
                entries.extend_from_slice(&kj.0);
                let key = MultiIndex::new(entries);
                // A(I)·A(J) arrangement pairs land on `key`, each with weight ∏μ!/n!
                let w = key.orbit_weight() * Rational::from_integer(&ai * &aj);
                debug_assert!(w.denom() <= &nf);
                out.add_at(key, &(ci * cj).scale(&w));
            }
        }
        Ok(out)
    }

    /// Iterated graft `(x ⊗ x ⊗ ⋯ ⊗ x)^∨` with `count` factors; `count = 0`
    /// gives the degree-0 unit.
    pub fn graft_power(&self, count: usize) -> Result<Self> {
        let mut acc = Self::unit(self.kind, self.field, 0);
        for _ in 0..count {
            acc = acc.graft(self)?;
        }
        Ok(acc)
    }

    /// The product in `Symⁿ𝒞_F`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with_table(other, &OCTONION_TABLE)
    }

    /// The product using explicit structure constants.
    pub fn mul_with_table(&self, other: &Self, table: &MulTable) -> Result<Self> {
        self.check_same_space(other)?;
        let n = self.degree;
        if n == 0 {
            let c = &self.coeff(&[]) * &other.coeff(&[]);
            return Self::from_terms(self.kind, self.field, 0, [(vec![], c)]);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.kind, self.field, n));
        }
        let ks = keyspace(self.kind.dim(), n);
        let (dx, nx) = scaled_numerators(self);
        let (dy, ny) = scaled_numerators(other);

        // cost of expanding the right (resp. left) operand over arrangements
        let expand_right: u64 = self.len() as u64 * other.coeffs.keys().map(MultiIndex::arrangement_count).sum::<u64>();
        let expand_left: u64 = other.len() as u64 * self.coeffs.keys().map(MultiIndex::arrangement_count).sum::<u64>();
        let right_side = expand_right <= expand_left;

        let small = n <= 8
            && nx.iter().chain(&ny).all(|(_, re, im)| re.bits() <= 40 && im.bits() <= 40);
        let acc: Vec<(BigInt, BigInt)> = if small {
            let (l, r) = operands::<(i128, i128)>(&nx, &ny, right_side);
            kernel(&ks, table, &l, &r)
                .into_iter()
                .map(|(a, b)| (BigInt::from(a), BigInt::from(b)))
                .collect()
        } else {
            let (l, r) = operands::<(BigInt, BigInt)>(&nx, &ny, right_side);
            kernel(&ks, table, &l, &r)
        };

        let denom = Rational::from_integer(dx * dy);
        let mut out = Self::zero(self.kind, self.field, n);
        for (idx, (re, im)) in acc.into_iter().enumerate() {
            if re.is_zero() && im.is_zero() {
                continue;
            }
            let w = &ks.weights[idx] / &denom;
            let c = GaussRational::new(Rational::from_integer(re) * &w, Rational::from_integer(im) * &w);
            out.coeffs.insert(ks.keys[idx].clone(), c);
        }
        Ok(out)
    }

    /// The product computed literally as `Σ_I c_I·A(I)·(e_I·y)^∨` through
    /// [`PlainTerm`]s and [`symmetrize`]. Slow; a cross-check for [`mul`](Self::mul).
    pub fn mul_via_symmetrize(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let n = self.degree;
        if n == 0 {
            return self.mul(other);
        }
        let expanded = other.plain_terms();
        let mut terms = Vec::new();
        for (key, c) in &self.coeffs {
            let scale = c * &GaussRational::from_int(key.arrangement_count() as i64);
            for t in &expanded {
                let mut sign = 1i8;
                let monomial: Vec<u8> = key
                    .0
                    .iter()
                    .zip(&t.monomial)
                    .map(|(&i, &j)| {
                        let (s, k) = self.kind.basis_mul(i as usize, j as usize).expect("indices in range");
                        sign *= s;
                        k as u8
                    })
                    .collect();
                let coeff = &scale * &t.coeff;
                terms.push(PlainTerm { monomial, coeff: if sign > 0 { coeff } else { -coeff } });
            }
        }
        symmetrize(&terms, self.kind, self.field, n)
    }

    /// Dense reference product: both operands are expanded to full `dⁿ`
    /// coordinate vectors and multiplied slot by slot. Fails with a resource
    /// error if `dⁿ > bound`.
    pub fn dense_mul_oracle(&self, other: &Self, bound: usize) -> Result<Self> {
        self.check_same_space(other)?;
        let d = self.kind.dim();
        let n = self.degree;
        let size = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if size > bound as u128 {
            return Err(Error::Resource { required: size.min(usize::MAX as u128) as usize, bound });
        }
        dense::product(self, other)
    }

    /// `x_e = Σ_K c_K · A(K) · ∏_p (e_{K_p})_e`, an element of the plane `F[e]`.
    pub fn epart_n(&self, e: &UnitImaginary) -> Result<AlgebraElement> {
        if e.element().kind() != self.kind {
            return arg_err(format!("unit imaginary of {} used on Sym {}", e.element().kind(), self.kind));
        }
        let e = match (self.field, e.element().field()) {
            (FieldTag::GaussianComplex, FieldTag::RationalReal) => e.complexify(),
            (FieldTag::RationalReal, FieldTag::GaussianComplex) => {
                return arg_err("complex unit imaginary on a real tensor");
            }
            _ => e.clone(),
        };
        let parts: Vec<AlgebraElement> = (0..self.kind.dim())
            .map(|i| AlgebraElement::basis(self.kind, self.field, i).epart(&e))
            .collect::<Result<_>>()?;
        let mut total = AlgebraElement::zero(self.kind, self.field);
        for (key, c) in &self.coeffs {
            let mut prod = AlgebraElement::one(self.kind, self.field);
            for &i in &key.0 {
                prod = prod.mul(&parts[i as usize])?;
            }
            let w = c * &GaussRational::from_int(key.arrangement_count() as i64);
            total = total.add(&prod.scale(&w))?;
        }
        Ok(total)
    }

    /// `dim_F (Symⁿ𝒞_F · f)`, the dimension of the left ideal generated by the
    /// idempotent `f`, by exact row reduction of `{b·f}` over the monomial
    /// basis `b`.
    pub fn left_ideal_rank(&self) -> Result<usize> {
        if &self.mul(self)? != self {
            return Err(Error::Contract("left_ideal_rank requires an idempotent".into()));
        }
        let width = keyspace(self.kind.dim(), self.degree).len();
        let rows = self
            .left_multiples()?
            .into_iter()
            .map(|t| t.to_vector())
            .collect::<Vec<_>>();
        Ok(linalg::rank(width, rows))
    }

    /// `{b·self}` for every monomial basis element `b` of the ambient space.
    pub fn left_multiples(&self) -> Result<Vec<SymTensor>> {
        all_keys(self.kind, self.degree)
            .into_iter()
            .map(|k| Self::monomial(self.kind, self.field, k.0, GaussRational::one())?.mul(self))
            .collect()
    }

    /// A seeded random tensor with `terms` keys and small rational
    /// coefficients (Gaussian rationals when `field` is complex).
    pub fn random<R: Rng>(kind: AlgebraKind, field: FieldTag, degree: usize, terms: usize, rng: &mut R) -> Self {
        let mut out = Self::zero(kind, field, degree);
        let d = kind.dim() as u8;
        let small = |rng: &mut R| GaussRational::from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
        for _ in 0..terms {
            let key: Vec<u8> = (0..degree).map(|_| rng.gen_range(0..d)).collect();
            let mut c = small(rng);
            if field == FieldTag::GaussianComplex {
                c = &c + &(&small(rng) * &GaussRational::i());
            }
            out.add_at(MultiIndex::new(key), &c);
        }
        out
    }
}

/// Common denominator and integer numerators `(key, re, im)` of a tensor.
fn scaled_numerators(t: &SymTensor) -> (BigInt, Vec<(&MultiIndex, BigInt, BigInt)>) {
    let denom = t.coeffs.values().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
    let nums = t
        .coeffs
        .iter()
        .map(|(k, c)| {
            let re = (&c.re * Rational::from_integer(denom.clone())).to_integer();
            let im = (&c.im * Rational::from_integer(denom.clone())).to_integer();
            (k, re, im)
        })
        .collect();
    (denom, nums)
}

/// Coefficient arithmetic for the product kernel.
trait KernelScalar: Clone {
    fn zero() -> Self;
    fn from_big(re: &BigInt, im: &BigInt, mult: u64) -> Self;
    /// `acc += sign · a · b`.
    fn mul_acc(acc: &mut Self, a: &Self, b: &Self, negative: bool);
}

impl KernelScalar for (i128, i128) {
    fn zero() -> Self {
        (0, 0)
    }
    fn from_big(re: &BigInt, im: &BigInt, mult: u64) -> Self {
        let m = mult as i128;
        (re.to_i128().expect("bounded") * m, im.to_i128().expect("bounded") * m)
    }
    #[inline]
    fn mul_acc(acc: &mut Self, a: &Self, b: &Self, negative: bool) {
        let (re, im) = if a.1 == 0 && b.1 == 0 {
            (a.0 * b.0, 0)
        } else {
            (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
        };
        if negative {
            acc.0 -= re;
            acc.1 -= im;
        } else {
            acc.0 += re;
            acc.1 += im;
        }
    }
}

impl KernelScalar for (BigInt, BigInt) {
    fn zero() -> Self {
        (BigInt::zero(), BigInt::zero())
    }
    fn from_big(re: &BigInt, im: &BigInt, mult: u64) -> Self {
        (re * mult, im * mult)
    }
    fn mul_acc(acc: &mut Self, a: &Self, b: &Self, negative: bool) {
        let re = &a.0 * &b.0 - &a.1 * &b.1;
        let im = &a.0 * &b.1 + &a.1 * &b.0;
        if negative {
            acc.0 -= re;
            acc.1 -= im;
        } else {
            acc.0 += re;
            acc.1 += im;
        }
    }
}

type Side<C> = Vec<(Vec<u8>, C)>;

/// Builds the two kernel operands. With `expand_right` the left operand is one
/// arrangement per key weighted by `A(I)` and the right operand runs over all
/// arrangements; otherwise the roles swap (`x·y = Σ_J c_J·A(J)·(x·e_J)^∨`).
fn operands<C: KernelScalar>(
    x: &[(&MultiIndex, BigInt, BigInt)],
    y: &[(&MultiIndex, BigInt, BigInt)],
    expand_right: bool,
) -> (Side<C>, Side<C>) {
    let keyed = |v: &[(&MultiIndex, BigInt, BigInt)]| -> Side<C> {
        v.iter().map(|(k, re, im)| (k.0.clone(), C::from_big(re, im, k.arrangement_count()))).collect()
    };
    let expanded = |v: &[(&MultiIndex, BigInt, BigInt)]| -> Side<C> {
        v.iter()
            .flat_map(|(k, re, im)| {
                let c = C::from_big(re, im, 1);
                k.arrangements().into_iter().map(move |m| (m, c.clone()))
            })
            .collect()
    };
    if expand_right {
        (keyed(x), expanded(y))
    } else {
        (expanded(x), keyed(y))
    }
}

/// Positionwise products of every left/right pair, accumulated by result key.
fn kernel<C: KernelScalar>(ks: &KeySpace, table: &MulTable, left: &[(Vec<u8>, C)], right: &[(Vec<u8>, C)]) -> Vec<C> {
    let mut acc = vec![C::zero(); ks.len()];
    let n = ks.n;
    // flattened table: sign in the high bit, product index below
    let mut flat = [[(false, 0u64); 8]; 8];
    for (i, row) in flat.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let (s, k) = table.product(i, j);
            *slot = (s < 0, ks.pow[k]);
        }
    }
    for (lm, lc) in left {
        let rows: Vec<&[(bool, u64); 8]> = lm.iter().map(|&i| &flat[i as usize]).collect();
        for (rm, rc) in right {
            let mut negative = false;
            let mut code = 0u64;
            for p in 0..n {
                let (s, c) = rows[p][rm[p] as usize];
                negative ^= s;
                code += c;
            }
            C::mul_acc(&mut acc[ks.index_of_code(code)], lc, rc, negative);
        }
    }
    acc
}

mod dense {
    //! Full `dⁿ` coordinate expansion; independent of the orbit-compressed kernel.

    use super::*;

    type Numerators<'a> = [(&'a MultiIndex, BigInt, BigInt)];

    /// One entry per arrangement: positional digits and the scaled coefficient.
    fn dense_vector<C: KernelScalar>(nums: &Numerators<'_>) -> Vec<(Vec<u8>, C)> {
        nums.iter()
            .flat_map(|(k, re, im)| {
                let c = C::from_big(re, im, 1);
                k.arrangements().into_iter().map(move |m| (m, c.clone()))
            })
            .collect()
    }

    fn expand<C: KernelScalar>(d: usize, n: usize, x: &Numerators<'_>, y: &Numerators<'_>) -> Vec<C> {
        let xs = dense_vector::<C>(x);
        let ys = dense_vector::<C>(y);
        let mut out = vec![C::zero(); d.pow(n as u32)];
        for (mx, cx) in &xs {
            for (my, cy) in &ys {
                let mut negative = false;
                let mut code = 0usize;
                for p in (0..n).rev() {
                    let (s, k) = OCTONION_TABLE.product(mx[p] as usize, my[p] as usize);
                    negative ^= s < 0;
                    code = code * d + k;
                }
                C::mul_acc(&mut out[code], cx, cy, negative);
            }
        }
        out
    }

    pub(super) fn product(x: &SymTensor, y: &SymTensor) -> Result<SymTensor> {
        let d = x.kind.dim();
        let n = x.degree;
        let (dx, nx) = scaled_numerators(x);
        let (dy, ny) = scaled_numerators(y);
        let small = nx.iter().chain(&ny).all(|(_, re, im)| re.bits() <= 40 && im.bits() <= 40);
        let out: Vec<(BigInt, BigInt)> = if small {
            expand::<(i128, i128)>(d, n, &nx, &ny)
                .into_iter()
                .map(|(a, b)| (BigInt::from(a), BigInt::from(b)))
                .collect()
        } else {
            expand::<(BigInt, BigInt)>(d, n, &nx, &ny)
        };
        let denom = Rational::from_integer(dx * dy);
        let digits = |code: usize| -> Vec<u8> {
            let mut c = code;
            (0..n)
                .map(|_| {
                    let r = c % d;
                    c /= d;
                    r as u8
                })
                .collect()
        };
        let code_of = |m: &[u8]| m.iter().rev().fold(0usize, |acc, &i| acc * d + i as usize);
        let mut result = SymTensor::zero(x.kind, x.field, n);
        for (code, (re, im)) in out.iter().enumerate() {
            if re.is_zero() && im.is_zero() {
                continue;
            }
            let key = MultiIndex::new(digits(code));
            if result.coeffs.contains_key(&key) {
                continue;
            }
            // every arrangement of the key must carry the same value
            if key.arrangements().iter().any(|m| out[code_of(m)] != out[code]) {
                return Err(Error::Contract(format!("dense product is not symmetric at {key:?}")));
            }
            let c = GaussRational::new(
                Rational::from_integer(re.clone()) / &denom,
                Rational::from_integer(im.clone()) / &denom,
            );
            result.coeffs.insert(key, c);
        }
        Ok(result)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    key: Vec<u8>,
    coeff: GaussRational,
}

#[derive(Serialize, Deserialize)]
struct SymTensorJson {
    kind: AlgebraKind,
    field: FieldTag,
    degree: usize,
    terms: Vec<TermJson>,
}

impl Serialize for SymTensor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SymTensorJson {
            kind: self.kind,
            field: self.field,
            degree: self.degree,
            terms: self.coeffs.iter().map(|(k, c)| TermJson { key: k.0.clone(), coeff: c.clone() }).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymTensor {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = SymTensorJson::deserialize(deserializer)?;
        for t in &j.terms {
            if t.key.windows(2).any(|w| w[0] > w[1]) {
                return Err(serde::de::Error::custom(format!("key {:?} is not sorted", t.key)));
            }
        }
        SymTensor::from_terms(j.kind, j.field, j.degree, j.terms.into_iter().map(|t| (t.key, t.coeff)))
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{binomial, rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const H: AlgebraKind = AlgebraKind::Quaternion;
    const O: AlgebraKind = AlgebraKind::Octonion;
    const R: FieldTag = FieldTag::RationalReal;
    const C: FieldTag = FieldTag::GaussianComplex;

    fn q(n: i64, d: i64) -> GaussRational {
        GaussRational::from_ratio(n, d)
    }

    fn triangle(kind: AlgebraKind) -> SymTensor {
        let d = kind.dim();
        SymTensor::from_terms(kind, R, 2, (0..d as u8).map(|i| (vec![i, i], q(1, d as i64)))).unwrap()
    }

    #[test]
    fn symmetrize_examples() {
        let t = symmetrize(&[PlainTerm { monomial: vec![0, 1], coeff: q(1, 1) }], H, R, 2).unwrap();
        assert_eq!(t.coeff(&[0, 1]), q(1, 2));
        assert_eq!(t.len(), 1);
        let t = symmetrize(&[PlainTerm { monomial: vec![1, 1], coeff: q(1, 1) }], H, R, 2).unwrap();
        assert_eq!(t.coeff(&[1, 1]), q(1, 1));
        let all: Vec<PlainTerm> = MultiIndex::new(vec![0, 1, 2])
            .arrangements()
            .into_iter()
            .map(|m| PlainTerm { monomial: m, coeff: q(1, 1) })
            .collect();
        assert_eq!(all.len(), 6);
        let t = symmetrize(&all, H, R, 3).unwrap();
        assert_eq!(t.coeff(&[0, 1, 2]), q(1, 1));
        assert!(symmetrize(&[PlainTerm { monomial: vec![0], coeff: q(1, 1) }], H, R, 2).is_err());
    }

    #[test]
    fn symmetrize_is_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..5 {
            let x = SymTensor::random(H, C, n, 6, &mut rng);
            assert_eq!(symmetrize(&x.plain_terms(), H, C, n).unwrap(), x);
        }
    }

    #[test]
    fn unit_tensor() {
        let u = SymTensor::unit(H, R, 3);
        assert_eq!(u.len(), 1);
        assert_eq!(u.coeff(&[0, 0, 0]), q(1, 1));
        let u0 = SymTensor::unit(H, R, 0);
        assert_eq!(u0.coeff(&[]), q(1, 1));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..4 {
            let x = SymTensor::random(O, C, n, 5, &mut rng);
            let u = SymTensor::unit(O, C, n);
            assert_eq!(x.mul(&u).unwrap(), x);
            assert_eq!(u.mul(&x).unwrap(), x);
        }
    }

    #[test]
    fn key_counts() {
        for kind in AlgebraKind::ALL {
            let d = kind.dim() as i64;
            for n in 0..=6 {
                assert_eq!(BigInt::from(all_keys(kind, n).len()), binomial(n as i64 + d - 1, d - 1));
            }
        }
        let total: u64 = all_keys(O, 3).iter().map(MultiIndex::arrangement_count).sum();
        assert_eq!(total, 512);
    }

    #[test]
    fn triangle_products() {
        let th = triangle(H);
        assert_eq!(th.mul(&th).unwrap(), th);
        let to = triangle(O);
        assert_eq!(to.mul(&th.embed_sym(O).unwrap()).unwrap(), to);
        assert_eq!(th.embed_sym(O).unwrap().mul(&to).unwrap(), to);
    }

    #[test]
    fn a_squared_kills_triangle() {
        // a⊗a with a = ½(1 + i e1): plain coefficients 1/4, i/4, -1/4
        let a = AlgebraElement::new(H, C, vec![q(1, 2), GaussRational::new(rat(0, 1), rat(1, 2)), q(0, 1), q(0, 1)])
            .unwrap();
        let aa = SymTensor::tensor_power(&a, 2);
        assert!(aa.mul(&triangle(H).complexify()).unwrap().is_zero());
    }

    #[test]
    fn three_routes_agree_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (kind, n) in [(H, 1), (H, 2), (H, 3), (O, 2), (O, 3), (AlgebraKind::Re1, 3)] {
            for field in [R, C] {
                for _ in 0..8 {
                    let x = SymTensor::random(kind, field, n, 5, &mut rng);
                    let y = SymTensor::random(kind, field, n, 7, &mut rng);
                    let fast = x.mul(&y).unwrap();
                    assert_eq!(fast, x.mul_via_symmetrize(&y).unwrap());
                    assert_eq!(fast, x.dense_mul_oracle(&y, DEFAULT_DENSE_BOUND).unwrap());
                }
            }
        }
    }

    #[test]
    fn big_coefficients_use_fallback_path() {
        let big = GaussRational::new(rat(1 << 50, 3), rat(-(1 << 45), 7));
        let x = SymTensor::from_terms(H, C, 2, [(vec![0, 1], big.clone()), (vec![2, 3], q(5, 11))]).unwrap();
        let y = SymTensor::from_terms(H, C, 2, [(vec![1, 2], big), (vec![0, 0], q(1, 13))]).unwrap();
        assert_eq!(x.mul(&y).unwrap(), x.dense_mul_oracle(&y, 4096).unwrap());
        assert_eq!(x.mul(&y).unwrap(), x.mul_via_symmetrize(&y).unwrap());
    }

    #[test]
    fn quaternionic_associativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 1..4 {
            let x = SymTensor::random(H, C, n, 4, &mut rng);
            let y = SymTensor::random(H, C, n, 4, &mut rng);
            let z = SymTensor::random(H, C, n, 4, &mut rng);
            let l = x.mul(&y).unwrap().mul(&z).unwrap();
            let r = x.mul(&y.mul(&z).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn mismatches_rejected() {
        let x = SymTensor::unit(H, R, 2);
        assert!(x.mul(&SymTensor::unit(H, R, 3)).is_err());
        assert!(x.mul(&SymTensor::unit(O, R, 2)).is_err());
        assert!(x.mul(&SymTensor::unit(H, C, 2)).is_err());
        assert!(x.graft(&SymTensor::unit(O, R, 1)).is_err());
        assert!(SymTensor::unit(O, R, 2).embed_sym(H).is_err());
        assert!(matches!(
            SymTensor::unit(O, R, 5).dense_mul_oracle(&SymTensor::unit(O, R, 5), 4096),
            Err(Error::Resource { required: 32768, bound: 4096 })
        ));
    }

    #[test]
    fn graft_matches_literal_symmetrization() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for (k, m) in [(1, 1), (2, 1), (1, 2), (2, 2), (0, 3)] {
            let x = SymTensor::random(H, C, k, 3, &mut rng);
            let y = SymTensor::random(H, C, m, 3, &mut rng);
            let mut terms = Vec::new();
            for a in x.plain_terms() {
                for b in y.plain_terms() {
                    let mut mono = a.monomial.clone();
                    mono.extend_from_slice(&b.monomial);
                    terms.push(PlainTerm { monomial: mono, coeff: &a.coeff * &b.coeff });
                }
            }
            assert_eq!(x.graft(&y).unwrap(), symmetrize(&terms, H, C, k + m).unwrap());
        }
    }

    #[test]
    fn graft_identities() {
        let th = triangle(H);
        let t3 = th.graft(&SymTensor::unit(H, R, 1)).unwrap();
        // (△⊗1)^∨: [0,0,0] gets 1/4, [0,i,i] gets 1/4 · (1/3)
        assert_eq!(t3.coeff(&[0, 0, 0]), q(1, 4));
        assert_eq!(t3.coeff(&[0, 2, 2]), q(1, 12));
        assert_eq!(th.graft(&SymTensor::unit(H, R, 0)).unwrap(), th);
        // □ = 2(a⊗a^c)^∨ in Sym²ℂ[e₁]
        let re1 = AlgebraKind::Re1;
        let a = AlgebraElement::new(re1, C, vec![q(1, 2), GaussRational::new(rat(0, 1), rat(1, 2))]).unwrap();
        let ac = AlgebraElement::new(re1, C, vec![q(1, 2), GaussRational::new(rat(0, 1), rat(-1, 2))]).unwrap();
        let g = SymTensor::from_element(&a).graft(&SymTensor::from_element(&ac)).unwrap();
        let square = triangle(re1).complexify();
        assert_eq!(g.scale(&q(2, 1)), square);
    }

    #[test]
    fn tensor_power_examples() {
        let e2 = AlgebraElement::basis(H, R, 2);
        let p = SymTensor::tensor_power(&e2, 4);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&[2, 2, 2, 2]), q(1, 1));
        let x = AlgebraElement::basis(H, R, 0).add(&AlgebraElement::basis(H, R, 1)).unwrap();
        let p = SymTensor::tensor_power(&x, 2);
        assert_eq!(p.len(), 3);
        for k in [[0, 0], [0, 1], [1, 1]] {
            assert_eq!(p.coeff(&k), q(1, 1));
        }
        let deg1 = SymTensor::from_element(&x);
        assert_eq!(deg1.graft(&deg1).unwrap(), p);
    }

    #[test]
    fn conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let th = triangle(H);
        assert_eq!(th.conj_sym(), th);
        for _ in 0..5 {
            let x = SymTensor::random(H, C, 2, 4, &mut rng);
            let y = SymTensor::random(H, C, 2, 4, &mut rng);
            assert_eq!(x.mul(&y).unwrap().conj_sym(), x.conj_sym().mul(&y.conj_sym()).unwrap());
            assert!(x.add(&x.conj_sym()).unwrap().try_realify().is_ok());
        }
    }

    #[test]
    fn embedding_commutes_with_mul() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for n in 1..4 {
            let x = SymTensor::random(H, R, n, 4, &mut rng);
            let y = SymTensor::random(H, R, n, 4, &mut rng);
            let l = x.mul(&y).unwrap().embed_sym(O).unwrap();
            let r = x.embed_sym(O).unwrap().mul(&y.embed_sym(O).unwrap()).unwrap();
            assert_eq!(l, r);
        }
        assert_eq!(SymTensor::unit(H, R, 3).embed_sym(O).unwrap(), SymTensor::unit(O, R, 3));
    }

    #[test]
    fn epart_examples() {
        let samples = crate::algebra::im1_rational_samples(H, 5, 0).unwrap();
        for s in &samples {
            let one = SymTensor::unit(H, R, 3).epart_n(s).unwrap();
            assert_eq!(one, AlgebraElement::one(H, R));
            assert!(triangle(H).epart_n(s).unwrap().is_zero());
        }
        let mut c = vec![GaussRational::zero(); 4];
        c[2] = q(3, 5);
        c[3] = q(4, 5);
        let s = UnitImaginary::new(AlgebraElement::new(H, R, c).unwrap()).unwrap();
        let e22 = SymTensor::tensor_power(&AlgebraElement::basis(H, R, 2), 2);
        assert_eq!(e22.epart_n(&s).unwrap(), AlgebraElement::one(H, R).scale(&q(-9, 25)));
        assert!(e22.epart_n(&s.embed(O).unwrap()).is_err());
    }

    #[test]
    fn epart_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let samples = crate::algebra::im1_rational_samples(O, 4, 2).unwrap();
        for s in &samples {
            let x = SymTensor::random(O, C, 3, 5, &mut rng);
            let y = SymTensor::random(O, C, 3, 5, &mut rng);
            let lhs = x.add(&y).unwrap().epart_n(s).unwrap();
            let rhs = x.epart_n(s).unwrap().add(&y.epart_n(s).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn left_ideal_ranks() {
        assert_eq!(triangle(H).complexify().left_ideal_rank().unwrap(), 1);
        assert_eq!(SymTensor::unit(H, C, 1).left_ideal_rank().unwrap(), 4);
        let a = AlgebraElement::new(H, C, vec![q(1, 2), GaussRational::new(rat(0, 1), rat(1, 2)), q(0, 1), q(0, 1)])
            .unwrap();
        assert_eq!(SymTensor::from_element(&a).left_ideal_rank().unwrap(), 2);
        let not_idem = SymTensor::unit(H, R, 2).scale(&q(2, 1));
        assert!(matches!(not_idem.left_ideal_rank(), Err(Error::Contract(_))));
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let x = SymTensor::random(O, C, 3, 6, &mut rng);
        let s = serde_json::to_string(&x).unwrap();
        let back: SymTensor = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let th = serde_json::to_value(triangle(H)).unwrap();
        assert_eq!(th["terms"][0]["key"], serde_json::json!([0, 0]));
        assert_eq!(th["terms"][0]["coeff"], "1/4");
        assert_eq!(th["kind"], "Quaternion");
        let unsorted = r#"{"kind":"Quaternion","field":"RationalReal","degree":2,"terms":[{"key":[1,0],"coeff":"1/1"}]}"#;
        assert!(serde_json::from_str::<SymTensor>(unsorted).is_err());
    }
}
