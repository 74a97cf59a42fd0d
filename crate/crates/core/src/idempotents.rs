//! Distinguished elements and idempotent families of `Symⁿℍ` and `Symⁿ𝕆`.
//!
//! Central idempotents `e⁽ⁿ⁾_m` are available through three independent
//! constructions ([`central_idempotent_product`],
//! [`central_idempotent_recursive`], [`central_idempotent_closed`]); the
//! cached [`central_idempotent`] uses the product formula.
//!
//! Primitive families are assembled by [`theorem1_set`] (components of
//! `Symⁿℍ`), [`theorem3_set`] (components `Symⁿℍ·e⁽ⁿ⁾_{m,𝕆}` inside `Symⁿ𝕆`)
//! and their unions [`corollary2_set`], [`corollary4_set`].

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, AlgebraKind, FieldTag};
use crate::error::{arg_err, Error, Result};
use crate::scalars::{binomial, int, rat, GaussRational, Rational};
use crate::symtensor::SymTensor;

const H: AlgebraKind = AlgebraKind::Quaternion;
const O: AlgebraKind = AlgebraKind::Octonion;

/// `⌈n/2⌉..=n`, the admissible range of `m` (and `ℓ`).
pub fn m_range(n: usize) -> RangeInclusive<usize> {
    n.div_ceil(2)..=n
}

fn check_m(n: usize, m: usize, name: &str) -> Result<()> {
    let r = m_range(n);
    if !r.contains(&m) {
        return arg_err(format!(
            "{name} must lie in [⌈n/2⌉, n] = [{}, {}], got {name}={m} for n={n}",
            r.start(),
            r.end()
        ));
    }
    Ok(())
}

fn binom(n: usize, k: usize) -> Rational {
    Rational::from_integer(binomial(n as i64, k as i64))
}

/// `△ = (1/d)·Σ_i e_i⊗e_i`.
pub fn triangle(kind: AlgebraKind, field: FieldTag) -> SymTensor {
    let d = kind.dim();
    let c = GaussRational::from_ratio(1, d as i64);
    SymTensor::from_terms(kind, field, 2, (0..d as u8).map(|i| (vec![i, i], c.clone()))).expect("valid keys")
}

/// `△⁽ⁿ⁾ = (△⊗1^{⊗(n−2)})^∨`.
pub fn triangle_n(kind: AlgebraKind, field: FieldTag, n: usize) -> Result<SymTensor> {
    if n < 2 {
        return arg_err(format!("△^(n) needs n ≥ 2, got n={n}"));
    }
    triangle(kind, field).graft(&SymTensor::unit(kind, field, n - 2))
}

/// `β⁽ⁿ⁾_m` for an algebra of dimension `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaValue {
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub value: Rational,
}

/// `β⁽ⁿ⁾_m = 2(n−m)(2m+d−2) / (d·n·(n−1))`.
pub fn beta(n: usize, m: usize, d: usize) -> Result<BetaValue> {
    if n < 2 {
        return arg_err(format!("β needs n ≥ 2, got n={n}"));
    }
    check_m(n, m, "m")?;
    let (ni, mi, di) = (n as i64, m as i64, d as i64);
    let value = rat(2 * (ni - mi) * (2 * mi + di - 2), di * ni * (ni - 1));
    Ok(BetaValue { n, m, d, value })
}

fn check_field_complexify(t: SymTensor, field: FieldTag) -> SymTensor {
    match field {
        FieldTag::RationalReal => t,
        FieldTag::GaussianComplex => t.complexify(),
    }
}

/// `e⁽ⁿ⁾_m = Π_{m'≠m} (△⁽ⁿ⁾ − β_{m'}·1^{⊗n}) / (β_m − β_{m'})`.
pub fn central_idempotent_product(n: usize, m: usize, kind: AlgebraKind, field: FieldTag) -> Result<SymTensor> {
    check_m(n, m, "m")?;
    if n < 2 {
        return Ok(SymTensor::unit(kind, field, n));
    }
    let d = kind.dim();
    let tri = triangle_n(kind, FieldTag::RationalReal, n)?;
    let one = SymTensor::unit(kind, FieldTag::RationalReal, n);
    let bm = beta(n, m, d)?.value;
    let mut acc = one.clone();
    for other in m_range(n).filter(|&x| x != m) {
        let b = beta(n, other, d)?.value;
        let factor = tri.sub(&one.scale_rational(&b))?.scale_rational(&(Rational::one() / (&bm - &b)));
        acc = acc.mul(&factor)?;
    }
    Ok(check_field_complexify(acc, field))
}

/// `e⁽ⁿ⁾_m = (1/β⁽ⁿ⁾_m)·(△⊗e⁽ⁿ⁻²⁾_{m−1})^∨` for `m < n`, with
/// `e⁽ⁿ⁾_n = 1^{⊗n} − Σ_{m<n} e⁽ⁿ⁾_m` and `e⁽⁰⁾_0`, `e⁽¹⁾_1` the units.
pub fn central_idempotent_recursive(n: usize, m: usize, kind: AlgebraKind, field: FieldTag) -> Result<SymTensor> {
    check_m(n, m, "m")?;
    let t = recursive_real(n, m, kind)?;
    Ok(check_field_complexify(t, field))
}

fn recursive_real(n: usize, m: usize, kind: AlgebraKind) -> Result<SymTensor> {
    let field = FieldTag::RationalReal;
    if n < 2 {
        return Ok(SymTensor::unit(kind, field, n));
    }
    if m == n {
        let mut acc = SymTensor::unit(kind, field, n);
        for lower in m_range(n).filter(|&x| x < n) {
            acc = acc.sub(&recursive_real(n, lower, kind)?)?;
        }
        return Ok(acc);
    }
    let b = beta(n, m, kind.dim())?.value;
    let inner = recursive_real(n - 2, m - 1, kind)?;
    Ok(triangle(kind, field).graft(&inner)?.scale_rational(&(Rational::one() / b)))
}

/// Closed-form coefficient in front of `(△^{⊗(n−m)} ⊗ e⁽²ᵐ⁻ⁿ⁾_{2m−n})^∨`.
pub fn closed_form_coefficient(n: usize, m: usize, kind: AlgebraKind) -> Result<Rational> {
    check_m(n, m, "m")?;
    let j = (2 * m - n) as i64;
    let mi = m as i64;
    let c = binom(n, m);
    match kind {
        AlgebraKind::Quaternion => Ok(rat(j + 1, mi + 1) * c),
        AlgebraKind::Octonion => {
            let pow = Rational::from_integer(BigInt::from(2).pow((n - m) as u32));
            Ok(pow * rat((j + 1) * (j + 2) * (j + 3), (mi + 1) * (mi + 2) * (mi + 3)) * c)
        }
        AlgebraKind::Re1 => arg_err("closed form is stated for Quaternion and Octonion only"),
    }
}

/// `e⁽ⁿ⁾_m` from the closed form, for `⌈n/2⌉ ≤ m ≤ n−1`. The top idempotent
/// `e⁽ʲ⁾_j` appearing inside is itself `1^{⊗j}` minus the closed forms of
/// degree `j`.
pub fn central_idempotent_closed(n: usize, m: usize, kind: AlgebraKind) -> Result<SymTensor> {
    check_m(n, m, "m")?;
    if m == n {
        return arg_err(format!("closed form needs m ≤ n−1, got m=n={n}"));
    }
    let field = FieldTag::RationalReal;
    let c = closed_form_coefficient(n, m, kind)?;
    let j = 2 * m - n;
    let top = closed_top(j, kind)?;
    let tri_pow = triangle(kind, field).graft_power(n - m)?;
    Ok(tri_pow.graft(&top)?.scale_rational(&c))
}

fn closed_top(j: usize, kind: AlgebraKind) -> Result<SymTensor> {
    let mut acc = SymTensor::unit(kind, FieldTag::RationalReal, j);
    for m in m_range(j).filter(|&x| x < j) {
        acc = acc.sub(&central_idempotent_closed(j, m, kind)?)?;
    }
    Ok(acc)
}

/// Cached `e⁽ⁿ⁾_m` (product formula).
pub fn central_idempotent(n: usize, m: usize, kind: AlgebraKind, field: FieldTag) -> Result<SymTensor> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize, AlgebraKind), SymTensor>>> = OnceLock::new();
    check_m(n, m, "m")?;
    let cache = CACHE.get_or_init(Default::default);
    let key = (n, m, kind);
    let hit = cache.lock().unwrap().get(&key).cloned();
    let real = match hit {
        Some(t) => t,
        None => {
            let t = central_idempotent_product(n, m, kind, FieldTag::RationalReal)?;
            cache.lock().unwrap().insert(key, t.clone());
            t
        }
    };
    Ok(check_field_complexify(real, field))
}

/// All `e⁽ⁿ⁾_m`, `m = ⌈n/2⌉..n`, as a set whose unit is `1^{⊗n}`.
pub fn central_set(n: usize, kind: AlgebraKind, field: FieldTag) -> Result<IdempotentSet> {
    let mut set = IdempotentSet::new(
        format!("central idempotents of Sym^{n} {kind}"),
        SymTensor::unit(kind, field, n),
        m_range(n).count(),
    );
    for m in m_range(n) {
        set.push(
            IdempotentLabel { family: Family::Central, n, ell: None, m: Some(m), k: None, delta: None },
            central_idempotent(n, m, kind, field)?,
        );
    }
    Ok(set)
}

/// `a = ½(1 + √−1·e₁)` in `kind ⊗ ℂ`.
pub fn a_element(kind: AlgebraKind, field: FieldTag) -> Result<AlgebraElement> {
    half_plus_minus_i_e1(kind, field, 1)
}

/// `aᶜ = ½(1 − √−1·e₁)`.
pub fn ac_element(kind: AlgebraKind, field: FieldTag) -> Result<AlgebraElement> {
    half_plus_minus_i_e1(kind, field, -1)
}

fn half_plus_minus_i_e1(kind: AlgebraKind, field: FieldTag, sign: i64) -> Result<AlgebraElement> {
    if field != FieldTag::GaussianComplex {
        return arg_err("a and aᶜ live over ℚ[√−1]; pass GaussianComplex");
    }
    let mut c = vec![GaussRational::zero(); kind.dim()];
    c[0] = GaussRational::from_ratio(1, 2);
    c[1] = GaussRational::new(Rational::zero(), rat(sign, 2));
    AlgebraElement::new(kind, field, c)
}

/// `□ = ½(1⊗1 + e₁⊗e₁)`, i.e. `△` of `ℝ[e₁]`, inside `Sym² kind`.
pub fn square_element(kind: AlgebraKind, field: FieldTag) -> Result<SymTensor> {
    triangle(AlgebraKind::Re1, field).embed_sym(kind)
}

/// `(−1)^k · n/(n−k) · C(n−k, k)`, the coefficient of `(x+y)^{n−2k}(xy)^k` in
/// `xⁿ + yⁿ`.
pub fn waring_coeff(n: usize, k: usize) -> Result<Rational> {
    if n == 0 || k > n / 2 {
        return arg_err(format!("Waring coefficient needs n ≥ 1 and 0 ≤ k ≤ ⌊n/2⌋, got n={n}, k={k}"));
    }
    let sign = if k % 2 == 0 { 1 } else { -1 };
    Ok(rat(sign * n as i64, (n - k) as i64) * binom(n - k, k))
}

/// Which family a labelled idempotent belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Thm1a,
    Thm1b,
    #[serde(rename = "Thm1c-square")]
    Thm1cSquare,
    #[serde(rename = "Thm1c-delta")]
    Thm1cDelta,
    Thm3a,
    Thm3b,
    #[serde(rename = "Thm3c-square")]
    Thm3cSquare,
    #[serde(rename = "Thm3c-delta")]
    Thm3cDelta,
    Central,
}

impl Family {
    fn lift(self) -> Self {
        match self {
            Family::Thm1a => Family::Thm3a,
            Family::Thm1b => Family::Thm3b,
            Family::Thm1cSquare => Family::Thm3cSquare,
            Family::Thm1cDelta => Family::Thm3cDelta,
            other => other,
        }
    }
}

/// Indices identifying one idempotent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdempotentLabel {
    pub family: Family,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<i8>,
}

impl IdempotentLabel {
    /// Canonical order: `(m, ℓ, square element first, k, δ = +1 before −1)`.
    pub fn sort_key(&self) -> (usize, usize, bool, usize, i8) {
        let square = matches!(self.family, Family::Thm1cSquare | Family::Thm3cSquare);
        (self.m.unwrap_or(0), self.ell.unwrap_or(0), !square, self.k.unwrap_or(0), -self.delta.unwrap_or(0))
    }
}

impl fmt::Display for IdempotentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(n={}", self.family, self.n)?;
        if let Some(m) = self.m {
            write!(f, ",m={m}")?;
        }
        if let Some(l) = self.ell {
            write!(f, ",ℓ={l}")?;
        }
        if let Some(k) = self.k {
            write!(f, ",k={k}")?;
        }
        if let Some(d) = self.delta {
            write!(f, ",δ={d:+}")?;
        }
        f.write_str(")")
    }
}

/// A labelled family of idempotents together with the unit it should sum to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentSet {
    pub description: String,
    pub labels: Vec<IdempotentLabel>,
    pub tensors: Vec<SymTensor>,
    pub expected_unit: SymTensor,
    pub expected_count: usize,
}

impl IdempotentSet {
    pub fn new(description: impl Into<String>, expected_unit: SymTensor, expected_count: usize) -> Self {
        Self { description: description.into(), labels: Vec::new(), tensors: Vec::new(), expected_unit, expected_count }
    }

    pub fn push(&mut self, label: IdempotentLabel, tensor: SymTensor) {
        self.labels.push(label);
        self.tensors.push(tensor);
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IdempotentLabel, &SymTensor)> {
        self.labels.iter().zip(&self.tensors)
    }
}

#[derive(Serialize, Deserialize)]
struct SetMetadata {
    description: String,
    kind: AlgebraKind,
    field: FieldTag,
    degree: usize,
    expected_count: usize,
    expected_unit: SymTensor,
}

#[derive(Serialize, Deserialize)]
struct SetJson {
    metadata: SetMetadata,
    labels: Vec<IdempotentLabel>,
    tensors: Vec<SymTensor>,
}

impl Serialize for IdempotentSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SetJson {
            metadata: SetMetadata {
                description: self.description.clone(),
                kind: self.expected_unit.kind(),
                field: self.expected_unit.field(),
                degree: self.expected_unit.degree(),
                expected_count: self.expected_count,
                expected_unit: self.expected_unit.clone(),
            },
            labels: self.labels.clone(),
            tensors: self.tensors.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IdempotentSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let j = SetJson::deserialize(deserializer)?;
        if j.labels.len() != j.tensors.len() {
            return Err(serde::de::Error::custom("labels and tensors differ in length"));
        }
        let u = &j.metadata.expected_unit;
        if (u.kind(), u.field(), u.degree()) != (j.metadata.kind, j.metadata.field, j.metadata.degree) {
            return Err(serde::de::Error::custom("expected_unit disagrees with metadata"));
        }
        if let Some(t) = j.tensors.iter().find(|t| (t.kind(), t.field(), t.degree()) != (u.kind(), u.field(), u.degree())) {
            return Err(serde::de::Error::custom(format!(
                "tensor in Sym^{} {}/{} does not match the set",
                t.degree(),
                t.kind(),
                t.field()
            )));
        }
        Ok(IdempotentSet {
            description: j.metadata.description,
            labels: j.labels,
            tensors: j.tensors,
            expected_unit: j.metadata.expected_unit,
            expected_count: j.metadata.expected_count,
        })
    }
}

/// Upper summation limit used by the even real branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumLimit {
    /// `⌊(n−2k)/4⌋`, the last index with a nonzero term.
    #[default]
    Support,
    /// `⌊n/4 − ⌊k/2⌋⌋`; any extra indices carry a vanishing binomial and are
    /// skipped.
    AlternateReading,
}

impl SumLimit {
    fn upper(self, n: usize, k: usize) -> usize {
        match self {
            SumLimit::Support => (n - 2 * k) / 4,
            SumLimit::AlternateReading => (n - 4 * (k / 2)) / 4,
        }
    }
}

/// `C(n,k)·(a^{⊗k} ⊗ (aᶜ)^{⊗(n−k)})^∨` in `Symⁿℍ ⊗ ℂ` (before multiplying by
/// a central idempotent).
pub fn a_ac_tensor(n: usize, k: usize) -> Result<SymTensor> {
    if k > n {
        return arg_err(format!("k must lie in [0, n], got k={k}, n={n}"));
    }
    let c = FieldTag::GaussianComplex;
    let a = SymTensor::tensor_power(&a_element(H, c)?, k);
    let ac = SymTensor::tensor_power(&ac_element(H, c)?, n - k);
    Ok(a.graft(&ac)?.scale_rational(&binom(n, k)))
}

/// The complex family element for any `0 ≤ k ≤ n`; zero outside `n−ℓ ≤ k ≤ ℓ`.
pub fn theorem1a_element(n: usize, ell: usize, k: usize) -> Result<SymTensor> {
    check_m(n, ell, "ℓ")?;
    a_ac_tensor(n, k)?.mul(&central_idempotent(n, ell, H, FieldTag::GaussianComplex)?)
}

/// Odd-`n` real element, from the explicit sum over `i`.
pub fn theorem1b_element(n: usize, ell: usize, k: usize) -> Result<SymTensor> {
    check_m(n, ell, "ℓ")?;
    if n % 2 == 0 || k < n - ell || 2 * k + 1 > n {
        return arg_err(format!("odd branch needs n odd and k in [n−ℓ, (n−1)/2], got n={n}, ℓ={ell}, k={k}"));
    }
    let f = FieldTag::RationalReal;
    let sq = square_element(H, f)?;
    let lead = binom(n, k) * rat((n - 2 * k) as i64, 1 << k);
    let mut sum = SymTensor::zero(H, f, n);
    for i in 0..=(n - 1) / 2 - k {
        let top = n - 2 * k - i;
        let coeff = &lead * rat(-1, 2).pow(i as i32) * binom(top, i) / int(top as i64);
        let term = SymTensor::unit(H, f, n - 2 * k - 2 * i).graft(&sq.graft_power(k + i)?)?;
        sum = sum.add(&term.scale_rational(&coeff))?;
    }
    sum.mul(&central_idempotent(n, ell, H, f)?)
}

/// `(½)^{n/2}·C(n, n/2)·(□^{⊗n/2})^∨·e⁽ⁿ⁾_ℓ` for even `n`.
pub fn theorem1c_square_element(n: usize, ell: usize) -> Result<SymTensor> {
    check_m(n, ell, "ℓ")?;
    if n % 2 == 1 {
        return arg_err(format!("even branch needs n even, got n={n}"));
    }
    let f = FieldTag::RationalReal;
    let coeff = rat(1, 1 << (n / 2)) * binom(n, n / 2);
    let t = square_element(H, f)?.graft_power(n / 2)?.scale_rational(&coeff);
    t.mul(&central_idempotent(n, ell, H, f)?)
}

/// `½(1^{⊗n} + δ·e₂^{⊗n})`.
pub fn e2_projector(kind: AlgebraKind, field: FieldTag, n: usize, delta: i8) -> Result<SymTensor> {
    if delta != 1 && delta != -1 {
        return arg_err(format!("δ must be ±1, got {delta}"));
    }
    let e2 = SymTensor::tensor_power(&AlgebraElement::basis(kind, field, 2), n);
    let half = rat(1, 2);
    SymTensor::unit(kind, field, n)
        .add(&e2.scale_rational(&int(delta as i64)))
        .map(|t| t.scale_rational(&half))
}

/// Even-`n` real element indexed by `(k, δ)`, from the explicit sum over `i`.
pub fn theorem1c_delta_element(n: usize, ell: usize, k: usize, delta: i8, limit: SumLimit) -> Result<SymTensor> {
    check_m(n, ell, "ℓ")?;
    if n % 2 == 1 || k < n - ell || k + 1 > n / 2 {
        return arg_err(format!("even branch needs n even and k in [n−ℓ, n/2−1], got n={n}, ℓ={ell}, k={k}"));
    }
    let f = FieldTag::RationalReal;
    let sq = square_element(H, f)?;
    let co_sq = SymTensor::unit(H, f, 2).sub(&sq)?;
    let half_n = n / 2;
    let lead = binom(n, k) * rat((half_n - k) as i64, 1 << k);
    let mut sum = SymTensor::zero(H, f, n);
    for i in 0..=limit.upper(n, k) {
        // terms past the support have a vanishing binomial
        if half_n < k + 2 * i {
            continue;
        }
        let top = half_n - k - i;
        let b = binom(top, i);
        if b.is_zero() {
            continue;
        }
        let coeff = &lead * rat(-1, 4).pow(i as i32) * b / int(top as i64);
        let term = sq.graft_power(k + 2 * i)?.graft(&co_sq.graft_power(half_n - k - 2 * i)?)?;
        sum = sum.add(&term.scale_rational(&coeff))?;
    }
    sum.mul(&e2_projector(H, f, n, delta)?)?.mul(&central_idempotent(n, ell, H, f)?)
}

/// The real elements obtained from conjugate pairs of the complex family:
/// `C(n,k)((a^{⊗k}⊗(aᶜ)^{⊗(n−k)})^∨ + (a^{⊗(n−k)}⊗(aᶜ)^{⊗k})^∨)·e⁽ⁿ⁾_ℓ`,
/// further split by `½(1 + δ·e₂^{⊗n})` when `delta` is given. For `2k = n` the
/// single middle element is returned.
pub fn conjugate_pair_element(n: usize, ell: usize, k: usize, delta: Option<i8>) -> Result<SymTensor> {
    check_m(n, ell, "ℓ")?;
    let c = FieldTag::GaussianComplex;
    let mut t = a_ac_tensor(n, k)?;
    if 2 * k != n {
        // C(n,k) = C(n,n−k), so the partner carries the same coefficient
        t = t.add(&a_ac_tensor(n, n - k)?)?;
    }
    if let Some(d) = delta {
        t = t.mul(&e2_projector(H, c, n, d)?)?;
    }
    t.mul(&central_idempotent(n, ell, H, c)?)?.try_realify()
}

/// Count of a complete primitive family in the `ℓ` component of `Symⁿℍ_F`.
pub fn theorem1_count(n: usize, ell: usize, field: FieldTag) -> usize {
    let size = 2 * ell + 1 - n;
    match field {
        FieldTag::RationalReal if n % 2 == 1 => size / 2,
        _ => size,
    }
}

/// Count for `(Symⁿℍ_F)·e⁽ⁿ⁾_{m,𝕆}`.
pub fn theorem3_count(n: usize, m: usize, field: FieldTag) -> usize {
    let j = 2 * m - n;
    match (n % 2, field) {
        (0, _) => (j + 2) * (j + 2) / 4,
        (_, FieldTag::GaussianComplex) => (j + 1) * (j + 3) / 4,
        (_, FieldTag::RationalReal) => (j + 1) * (j + 3) / 8,
    }
}

/// Count for all of `Symⁿℍ_F`.
pub fn corollary2_count(n: usize, field: FieldTag) -> usize {
    match (n % 2, field) {
        (0, _) => (n + 2) * (n + 2) / 4,
        (_, FieldTag::GaussianComplex) => (n + 1) * (n + 3) / 4,
        (_, FieldTag::RationalReal) => (n + 1) * (n + 3) / 8,
    }
}

/// Count for `⊕_m (Symⁿℍ_F)·e⁽ⁿ⁾_{m,𝕆}`.
pub fn corollary4_count(n: usize, field: FieldTag) -> usize {
    match (n % 2, field) {
        (0, _) => (n + 2) * (n + 3) * (n + 4) / 24,
        (_, FieldTag::GaussianComplex) => (n + 1) * (n + 3) * (n + 5) / 24,
        (_, FieldTag::RationalReal) => (n + 1) * (n + 3) * (n + 5) / 48,
    }
}

fn theorem1_items(n: usize, ell: usize, field: FieldTag) -> Result<Vec<(IdempotentLabel, SymTensor)>> {
    check_m(n, ell, "ℓ")?;
    let label = |family, k, delta| IdempotentLabel { family, n, ell: Some(ell), m: None, k, delta };
    let mut out = Vec::new();
    match field {
        FieldTag::GaussianComplex => {
            for k in n - ell..=ell {
                out.push((label(Family::Thm1a, Some(k), None), theorem1a_element(n, ell, k)?));
            }
        }
        FieldTag::RationalReal if n % 2 == 1 => {
            for k in n - ell..=(n - 1) / 2 {
                out.push((label(Family::Thm1b, Some(k), None), theorem1b_element(n, ell, k)?));
            }
        }
        FieldTag::RationalReal => {
            out.push((label(Family::Thm1cSquare, None, None), theorem1c_square_element(n, ell)?));
            for k in n - ell..n / 2 {
                for delta in [1, -1] {
                    let t = theorem1c_delta_element(n, ell, k, delta, SumLimit::Support)?;
                    out.push((label(Family::Thm1cDelta, Some(k), Some(delta)), t));
                }
            }
        }
    }
    Ok(out)
}

/// Complete primitive family of the component `Symⁿℍ_F·e⁽ⁿ⁾_{ℓ,ℍ}`. The
/// complex field gives the `a/aᶜ` family; the real field gives the odd or
/// even `□` family.
pub fn theorem1_set(n: usize, ell: usize, field: FieldTag) -> Result<IdempotentSet> {
    let mut set = IdempotentSet::new(
        format!("primitive idempotents of Sym^{n} Quaternion·e_{ell} over {field}"),
        central_idempotent(n, ell, H, field)?,
        theorem1_count(n, ell, field),
    );
    for (l, t) in theorem1_items(n, ell, field)? {
        set.push(l, t);
    }
    Ok(set)
}

/// Real family rebuilt from conjugate pairs of the complex family; it must
/// coincide with the real [`theorem1_set`] element by element.
pub fn theorem1_set_via_pairs(n: usize, ell: usize) -> Result<IdempotentSet> {
    let f = FieldTag::RationalReal;
    let mut set = IdempotentSet::new(
        format!("conjugate-pair idempotents of Sym^{n} Quaternion·e_{ell}"),
        central_idempotent(n, ell, H, f)?,
        theorem1_count(n, ell, f),
    );
    let label = |family, k, delta| IdempotentLabel { family, n, ell: Some(ell), m: None, k, delta };
    if n % 2 == 1 {
        for k in n - ell..=(n - 1) / 2 {
            set.push(label(Family::Thm1b, Some(k), None), conjugate_pair_element(n, ell, k, None)?);
        }
    } else {
        set.push(label(Family::Thm1cSquare, None, None), conjugate_pair_element(n, ell, n / 2, None)?);
        for k in n - ell..n / 2 {
            for delta in [1, -1] {
                set.push(label(Family::Thm1cDelta, Some(k), Some(delta)), conjugate_pair_element(n, ell, k, Some(delta))?);
            }
        }
    }
    Ok(set)
}

/// Complete primitive family of `(Symⁿℍ_F)·e⁽ⁿ⁾_{m,𝕆}` inside `Symⁿ𝕆_F`.
pub fn theorem3_set(n: usize, m: usize, field: FieldTag) -> Result<IdempotentSet> {
    check_m(n, m, "m")?;
    let e_m = central_idempotent(n, m, O, field)?;
    let mut set = IdempotentSet::new(
        format!("primitive idempotents of Sym^{n} Quaternion·e_{m},Octonion over {field}"),
        e_m.clone(),
        theorem3_count(n, m, field),
    );
    for ell in m_range(n).filter(|&l| l <= m) {
        for (mut label, t) in theorem1_items(n, ell, field)? {
            label.family = label.family.lift();
            label.m = Some(m);
            set.push(label, t.embed_sym(O)?.mul(&e_m)?);
        }
    }
    Ok(set)
}

/// Union of [`theorem1_set`] over `ℓ`; sums to `1^{⊗n}` in `Symⁿℍ_F`.
pub fn corollary2_set(n: usize, field: FieldTag) -> Result<IdempotentSet> {
    if n == 0 {
        return arg_err("n must be at least 1");
    }
    let mut set = IdempotentSet::new(
        format!("primitive idempotents of Sym^{n} Quaternion over {field}"),
        SymTensor::unit(H, field, n),
        corollary2_count(n, field),
    );
    for ell in m_range(n) {
        for (l, t) in theorem1_items(n, ell, field)? {
            set.push(l, t);
        }
    }
    Ok(set)
}

/// Union of [`theorem3_set`] over `m`; sums to `Σ_m e⁽ⁿ⁾_{m,𝕆} = 1^{⊗n}`.
pub fn corollary4_set(n: usize, field: FieldTag) -> Result<IdempotentSet> {
    if n == 0 {
        return arg_err("n must be at least 1");
    }
    let mut set = IdempotentSet::new(
        format!("primitive idempotents of ⊕_m Sym^{n} Quaternion·e_m,Octonion over {field}"),
        SymTensor::unit(O, field, n),
        corollary4_count(n, field),
    );
    for m in m_range(n) {
        let part = theorem3_set(n, m, field)?;
        set.labels.extend(part.labels);
        set.tensors.extend(part.tensors);
    }
    Ok(set)
}

/// Coefficients `c_m` with `(1^{⊗(n−2ℓ)} ⊗ △^{⊗ℓ})^∨ = Σ_m c_m·e⁽ⁿ⁾_m`,
/// found by exact linear solve over the monomial basis.
pub fn triangle_power_coefficients(n: usize, ell: usize, kind: AlgebraKind) -> Result<Vec<(usize, Rational)>> {
    if 2 * ell > n {
        return arg_err(format!("ℓ must lie in [0, ⌊n/2⌋], got ℓ={ell}, n={n}"));
    }
    let f = FieldTag::RationalReal;
    let target = SymTensor::unit(kind, f, n - 2 * ell).graft(&triangle(kind, f).graft_power(ell)?)?;
    let basis: Vec<SymTensor> =
        m_range(n).map(|m| central_idempotent(n, m, kind, f)).collect::<Result<_>>()?;
    let cols: Vec<_> = basis.iter().map(SymTensor::to_vector).collect();
    let sol = crate::linalg::solve(&cols, &target.to_vector())
        .ok_or_else(|| Error::Contract("tensor is not in the span of the central idempotents".into()))?;
    Ok(m_range(n).zip(sol).map(|(m, c)| (m, c.re)).collect())
}
