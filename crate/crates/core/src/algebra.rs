//! The composition algebras `ℝ[e₁] ⊂ ℍ ⊂ 𝕆` over `ℚ` or `ℚ[√−1]`.
//!
//! There is exactly one table of structure constants, the 8×8 octonion
//! table below. The quaternion and `ℝ[e₁]` products are its restrictions to
//! the index ranges `0..4` and `0..2`.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{arg_err, Error, Result};
use crate::scalars::{int, GaussRational};

/// Signed basis product table. Entry `t[i][j] = ±(k + 1)` encodes
/// `e_i · e_j = ±e_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MulTable {
    entries: [[i8; 8]; 8],
}

/// The octonion multiplication table, rows `e_i`, columns `e_j`.
pub const OCTONION_TABLE: MulTable = MulTable {
    entries: [
        [1, 2, 3, 4, 5, 6, 7, 8],
        [2, -1, 4, -3, 6, -5, -8, 7],
        [3, -4, -1, 2, 7, 8, -5, -6],
        [4, 3, -2, -1, 8, -7, 6, -5],
        [5, -6, -7, -8, -1, 2, 3, 4],
        [6, 5, -8, 7, -2, -1, -4, 3],
        [7, 8, 5, -6, -3, 4, -1, -2],
        [8, -7, 6, 5, -4, -3, 2, -1],
    ],
};

impl MulTable {
    /// `e_i · e_j = sign · e_k`, returned as `(sign, k)`.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> (i8, usize) {
        let v = self.entries[i][j];
        (v.signum(), (v.unsigned_abs() - 1) as usize)
    }

    /// A copy of this table with the sign of entry `(i, j)` negated. Used by
    /// mutation tests.
    pub fn with_flipped_sign(&self, i: usize, j: usize) -> MulTable {
        let mut t = *self;
        t.entries[i][j] = -t.entries[i][j];
        t
    }
}

/// Which composition algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlgebraKind {
    /// `ℝ[e₁]`, dimension 2.
    Re1,
    Quaternion,
    Octonion,
}

impl AlgebraKind {
    pub const ALL: [AlgebraKind; 3] = [AlgebraKind::Re1, AlgebraKind::Quaternion, AlgebraKind::Octonion];

    pub fn dim(self) -> usize {
        match self {
            AlgebraKind::Re1 => 2,
            AlgebraKind::Quaternion => 4,
            AlgebraKind::Octonion => 8,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AlgebraKind::Re1 => "Re1",
            AlgebraKind::Quaternion => "Quaternion",
            AlgebraKind::Octonion => "Octonion",
        }
    }

    pub fn is_associative(self) -> bool {
        self != AlgebraKind::Octonion
    }

    /// `e_i · e_j` in this algebra.
    pub fn basis_mul(self, i: usize, j: usize) -> Result<(i8, usize)> {
        let d = self.dim();
        if i >= d || j >= d {
            return arg_err(format!("basis index out of range for {} (d = {d}): ({i}, {j})", self.name()));
        }
        Ok(OCTONION_TABLE.product(i, j))
    }
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Coefficient field: `ℚ` or `ℚ[√−1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldTag {
    RationalReal,
    GaussianComplex,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldTag::RationalReal => "RationalReal",
            FieldTag::GaussianComplex => "GaussianComplex",
        })
    }
}

/// `Σ α_i e_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    kind: AlgebraKind,
    field: FieldTag,
    coords: Vec<GaussRational>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.kind)?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl AlgebraElement {
    pub fn new(kind: AlgebraKind, field: FieldTag, coords: Vec<GaussRational>) -> Result<Self> {
        if coords.len() != kind.dim() {
            return arg_err(format!("{} element needs {} coordinates, got {}", kind, kind.dim(), coords.len()));
        }
        if field == FieldTag::RationalReal && coords.iter().any(|c| !c.is_real()) {
            return arg_err("RationalReal element with a non-real coordinate");
        }
        Ok(Self { kind, field, coords })
    }

    pub fn zero(kind: AlgebraKind, field: FieldTag) -> Self {
        Self { kind, field, coords: vec![GaussRational::zero(); kind.dim()] }
    }

    pub fn one(kind: AlgebraKind, field: FieldTag) -> Self {
        Self::basis(kind, field, 0)
    }

    /// `e_i`. Panics if `i` is out of range.
    pub fn basis(kind: AlgebraKind, field: FieldTag, i: usize) -> Self {
        let mut x = Self::zero(kind, field);
        x.coords[i] = GaussRational::one();
        x
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn coords(&self) -> &[GaussRational] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &GaussRational {
        &self.coords[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(GaussRational::is_zero)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind || self.field != other.field {
            return arg_err(format!(
                "operands differ: {}/{} vs {}/{}",
                self.kind, self.field, other.kind, other.field
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        Ok(Self { coords, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(Self { coords, ..self.clone() })
    }

    /// Scalar multiple. A non-real scalar promotes the field to `GaussianComplex`.
    pub fn scale(&self, s: &GaussRational) -> Self {
        let field = if s.is_real() { self.field } else { FieldTag::GaussianComplex };
        Self { kind: self.kind, field, coords: self.coords.iter().map(|c| c * s).collect() }
    }

    /// The same element with coefficients regarded in `ℚ[√−1]`.
    pub fn complexify(&self) -> Self {
        Self { field: FieldTag::GaussianComplex, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_with_table(other, &OCTONION_TABLE)
    }

    /// Product using an explicit structure-constant table.
    pub fn mul_with_table(&self, other: &Self, table: &MulTable) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.kind, self.field);
        for (i, a) in self.coords.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coords.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let (sign, k) = table.product(i, j);
                let p = a * b;
                if sign > 0 {
                    out.coords[k] += &p;
                } else {
                    out.coords[k] -= &p;
                }
            }
        }
        Ok(out)
    }

    /// The quadratic form `N(x) = Σ α_i²` (no conjugation of the coefficients).
    pub fn norm(&self) -> GaussRational {
        self.coords.iter().map(|c| c * c).sum()
    }

    /// `x_e = ½(x − e·x·e)`.
    pub fn epart(&self, e: &UnitImaginary) -> Result<Self> {
        let e = e.element();
        self.check_compatible(e)?;
        let exe = e.mul(self)?.mul(e)?;
        Ok(self.sub(&exe)?.scale(&GaussRational::from_ratio(1, 2)))
    }

    /// Reinterprets the element in a larger algebra, padding with zeros.
    pub fn embed(&self, into: AlgebraKind) -> Result<Self> {
        if into.dim() < self.kind.dim() {
            return arg_err(format!("cannot embed {} into smaller {}", self.kind, into));
        }
        let mut coords = self.coords.clone();
        coords.resize(into.dim(), GaussRational::zero());
        Ok(Self { kind: into, field: self.field, coords })
    }
}

/// An element `e` with `e² = −1`, i.e. `e = Σ_{i≥1} α_i e_i` with `Σ α_i² = 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct UnitImaginary(AlgebraElement);

impl fmt::Debug for UnitImaginary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitImaginary({:?})", self.0)
    }
}

impl UnitImaginary {
    pub fn new(element: AlgebraElement) -> Result<Self> {
        if !element.coords[0].is_zero() {
            return Err(Error::Contract("unit imaginary must have zero real part".into()));
        }
        if !element.norm().is_one() {
            return Err(Error::Contract(format!("imaginary part {element:?} has norm {} ≠ 1", element.norm())));
        }
        Ok(Self(element))
    }

    pub fn element(&self) -> &AlgebraElement {
        &self.0
    }

    /// The same unit imaginary over `ℚ[√−1]`.
    pub fn complexify(&self) -> Self {
        Self(self.0.complexify())
    }

    pub fn embed(&self, into: AlgebraKind) -> Result<Self> {
        Ok(Self(self.0.embed(into)?))
    }
}

/// Integer tuples `(t, q)` with `Σ t_i² = q²`, i.e. rational points of the unit
/// sphere after dividing by `q`.
fn pythagorean_pool(imag_dims: usize) -> Vec<(Vec<i64>, i64)> {
    let raw: &[(&[i64], i64)] = match imag_dims {
        1 => &[(&[1], 1), (&[-1], 1)],
        3 => &[
            (&[3, 4, 0], 5),
            (&[1, 2, 2], 3),
            (&[2, 3, 6], 7),
            (&[0, 0, 1], 1),
            (&[1, 4, 8], 9),
            (&[4, 4, 7], 9),
            (&[2, 6, 9], 11),
            (&[6, 6, 7], 11),
            (&[2, 10, 11], 15),
        ],
        _ => &[
            (&[3, 4, 0, 0, 0, 0, 0], 5),
            (&[1, 2, 2, 0, 0, 0, 0], 3),
            (&[2, 3, 6, 0, 0, 0, 0], 7),
            (&[1, 1, 1, 1, 0, 0, 0], 2),
            (&[1, 2, 2, 4, 0, 0, 0], 5),
            (&[1, 1, 1, 1, 2, 2, 2], 4),
            (&[0, 0, 0, 0, 3, 4, 0], 5),
            (&[1, 1, 3, 5, 0, 0, 0], 6),
            (&[2, 2, 2, 1, 1, 1, 1], 4),
        ],
    };
    raw.iter().map(|(t, q)| (t.to_vec(), *q)).collect()
}

/// Exact rational points of `Im₁`. The first samples are the canonical pool
/// tuples in order (e.g. `(3/5, 4/5, 0)` for quaternions); later samples are
/// seeded random coordinate permutations and sign changes of pool tuples.
pub fn im1_rational_samples(kind: AlgebraKind, count: usize, seed: u64) -> Result<Vec<UnitImaginary>> {
    if count == 0 {
        return arg_err("sample count must be at least 1");
    }
    let k = kind.dim() - 1;
    let pool = pythagorean_pool(k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let (mut tuple, q) = if idx < pool.len() {
            pool[idx].clone()
        } else {
            pool[rng.gen_range(0..pool.len())].clone()
        };
        if idx >= pool.len() {
            tuple.shuffle(&mut rng);
            for t in tuple.iter_mut() {
                if rng.gen_bool(0.5) {
                    *t = -*t;
                }
            }
        }
        out.push(sample_from(kind, &tuple, q)?);
    }
    Ok(out)
}

fn sample_from(kind: AlgebraKind, tuple: &[i64], q: i64) -> Result<UnitImaginary> {
    let mut coords = vec![GaussRational::zero()];
    coords.extend(tuple.iter().map(|&t| GaussRational::real(int(t) / int(q))));
    UnitImaginary::new(AlgebraElement::new(kind, FieldTag::RationalReal, coords)?)
}
