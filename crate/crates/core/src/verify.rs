//! Executable checks of the algebraic claims, with structured results.
//!
//! Every check returns a [`CheckResult`]. Failures carry [`Witness`]es that
//! can be replayed in isolation with [`Witness::refails`]. Checks that would
//! exceed the dense bound report [`Status::Skip`] with a reason instead of
//! failing.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{im1_rational_samples, AlgebraElement, AlgebraKind, FieldTag, MulTable, OCTONION_TABLE};
use crate::error::{Error, Result};
use crate::idempotents::{self as idem, m_range, IdempotentSet};
use crate::linalg::{self, Echelon};
use crate::scalars::{binomial, GaussRational, Rational};
use crate::symtensor::{all_keys, SymTensor, DEFAULT_DENSE_BOUND};

const RE1: AlgebraKind = AlgebraKind::Re1;
const H: AlgebraKind = AlgebraKind::Quaternion;
const O: AlgebraKind = AlgebraKind::Octonion;
const R: FieldTag = FieldTag::RationalReal;
const C: FieldTag = FieldTag::GaussianComplex;

/// Default seed for sampled checks.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Default number of random elements per sampled property.
pub const DEFAULT_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// A replayable counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// `left·right` should equal `expected`.
    Product { note: String, left: SymTensor, right: SymTensor, expected: SymTensor },
    /// `Σ terms` should equal `expected`.
    Sum { note: String, terms: Vec<SymTensor>, expected: SymTensor },
    /// A scalar or structural mismatch.
    Value { note: String, expected: String, actual: String },
}

impl Witness {
    /// Recomputes the witnessed relation under `table`; `true` means it still
    /// fails.
    pub fn refails(&self, table: &MulTable) -> bool {
        match self {
            Witness::Product { left, right, expected, .. } => {
                left.mul_with_table(right, table).map(|p| &p != expected).unwrap_or(true)
            }
            Witness::Sum { terms, expected, .. } => {
                SymTensor::sum(terms).map(|s| &s != expected).unwrap_or(true)
            }
            Witness::Value { expected, actual, .. } => expected != actual,
        }
    }

    pub fn note(&self) -> &str {
        match self {
            Witness::Product { note, .. } | Witness::Sum { note, .. } | Witness::Value { note, .. } => note,
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub check_id: String,
    pub status: Status,
    pub detail: String,
    pub witnesses: Vec<Witness>,
    pub elapsed: Duration,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn skipped(&self) -> bool {
        self.status == Status::Skip
    }

    fn skip(check_id: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            check_id: check_id.into(),
            status: Status::Skip,
            detail: reason.into(),
            witnesses: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }
}

/// Collects witnesses while a check runs.
struct Probe {
    id: String,
    start: Instant,
    witnesses: Vec<Witness>,
    checked: usize,
    failures: usize,
}

/// Witness payloads are capped so that reports stay readable; the detail
/// line still counts every failure.
const MAX_WITNESSES: usize = 4;

impl Probe {
    fn new(id: impl Into<String>) -> Self {
        Self { id: id.into(), start: Instant::now(), witnesses: Vec::new(), checked: 0, failures: 0 }
    }

    fn fail(&mut self, w: Witness) {
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    fn value(&mut self, note: impl Into<String>, expected: impl ToString, actual: impl ToString) {
        self.checked += 1;
        let (e, a) = (expected.to_string(), actual.to_string());
        if e != a {
            self.fail(Witness::Value { note: note.into(), expected: e, actual: a });
        }
    }

    fn product(&mut self, note: impl Into<String>, left: &SymTensor, right: &SymTensor, expected: &SymTensor, table: &MulTable) {
        self.checked += 1;
        match left.mul_with_table(right, table) {
            Ok(p) if &p == expected => {}
            Ok(_) => self.fail(Witness::Product {
                note: note.into(),
                left: left.clone(),
                right: right.clone(),
                expected: expected.clone(),
            }),
            Err(e) => self.error(note, e),
        }
    }

    fn equal(&mut self, note: impl Into<String>, expected: &SymTensor, actual: &SymTensor) {
        self.checked += 1;
        if expected != actual {
            self.fail(Witness::Sum { note: note.into(), terms: vec![actual.clone()], expected: expected.clone() });
        }
    }

    fn error(&mut self, note: impl Into<String>, e: Error) {
        self.fail(Witness::Value { note: note.into(), expected: "no error".into(), actual: e.to_string() });
    }

    /// Runs `f`, recording any error as a failure.
    fn guard(&mut self, note: &str, f: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = f(self) {
            self.error(note, e);
        }
    }

    fn finish(self) -> CheckResult {
        let status = if self.witnesses.is_empty() { Status::Pass } else { Status::Fail };
        let detail = if status == Status::Pass {
            format!("{} assertions hold", self.checked)
        } else {
            format!("{} of {} assertions failed", self.failures, self.checked.max(self.failures))
        };
        CheckResult { check_id: self.id, status, detail, witnesses: self.witnesses, elapsed: self.start.elapsed() }
    }
}

/// The octonion table transcribed as text, row `i` listing `e_i·e_j` for `j = 0..7`.
/// Kept as text so that it is an independent transcription of the numeric
/// table used by the library.
const TEXT_TABLE: [&str; 8] = [
    "e0 e1 e2 e3 e4 e5 e6 e7",
    "e1 -e0 e3 -e2 e5 -e4 -e7 e6",
    "e2 -e3 -e0 e1 e6 e7 -e4 -e5",
    "e3 e2 -e1 -e0 e7 -e6 e5 -e4",
    "e4 -e5 -e6 -e7 -e0 e1 e2 e3",
    "e5 e4 -e7 e6 -e1 -e0 -e3 e2",
    "e6 e7 e4 -e5 -e2 e3 -e0 -e1",
    "e7 -e6 e5 e4 -e3 -e2 e1 -e0",
];

fn parse_cell(cell: &str) -> (i8, usize) {
    let (sign, rest) = match cell.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, cell),
    };
    (sign, rest.trim_start_matches('e').parse().expect("table cell"))
}

/// All 64 products against the text table, the quaternion relations, and
/// multiplicativity of the norm on seeded random elements.
pub fn check_mult_table(table: &MulTable) -> CheckResult {
    let mut p = Probe::new("table/octonion");
    for (i, row) in TEXT_TABLE.iter().enumerate() {
        for (j, cell) in row.split_whitespace().enumerate() {
            let expected = parse_cell(cell);
            let got = table.product(i, j);
            p.value(format!("e{i}·e{j}"), fmt_signed(expected), fmt_signed(got));
        }
    }
    // e1e2 = e3, e2e3 = e1, e3e1 = e2, e_i² = −1
    for (i, j, k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
        p.value(format!("quaternion e{i}e{j}"), fmt_signed((1, k)), fmt_signed(table.product(i, j)));
        p.value(format!("quaternion e{j}e{i}"), fmt_signed((-1, k)), fmt_signed(table.product(j, i)));
    }
    for i in 1..8 {
        p.value(format!("e{i}²"), fmt_signed((-1, 0)), fmt_signed(table.product(i, i)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for s in 0..DEFAULT_SAMPLES {
        let x = random_element(O, R, &mut rng);
        let y = random_element(O, R, &mut rng);
        p.guard("norm", |p| {
            let xy = x.mul_with_table(&y, table)?;
            p.value(format!("N(xy)=N(x)N(y), sample {s}"), &x.norm() * &y.norm(), xy.norm());
            Ok(())
        });
    }
    p.finish()
}

fn fmt_signed((s, k): (i8, usize)) -> String {
    if s < 0 {
        format!("-e{k}")
    } else {
        format!("e{k}")
    }
}

fn random_element(kind: AlgebraKind, field: FieldTag, rng: &mut ChaCha8Rng) -> AlgebraElement {
    use rand::Rng;
    let coords = (0..kind.dim())
        .map(|_| {
            let re = GaussRational::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
            if field == C {
                &re + &(&GaussRational::from_ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4)) * &GaussRational::i())
            } else {
                re
            }
        })
        .collect();
    AlgebraElement::new(kind, field, coords).expect("valid coordinates")
}

/// Pairwise orthogonality, idempotency, nonzeroness, sum and cardinality.
pub fn check_set(set: &IdempotentSet) -> CheckResult {
    check_set_with(set, &OCTONION_TABLE)
}

/// [`check_set`] with explicit structure constants.
pub fn check_set_with(set: &IdempotentSet, table: &MulTable) -> CheckResult {
    let mut p = Probe::new(format!("set/{}", set.description));
    probe_set(&mut p, set, table);
    p.finish()
}

fn probe_set(p: &mut Probe, set: &IdempotentSet, table: &MulTable) {
    p.value("cardinality", set.expected_count, set.len());
    p.value("labels match tensors", set.labels.len(), set.tensors.len());
    let zero = set.expected_unit.scale(&GaussRational::zero());
    for (i, (li, fi)) in set.iter().enumerate() {
        if fi.is_zero() {
            p.value(format!("{li} nonzero"), "nonzero", "zero");
        }
        for (j, (lj, fj)) in set.iter().enumerate() {
            let expected = if i == j { fi } else { &zero };
            p.product(format!("{li}·{lj}"), fi, fj, expected, table);
        }
    }
    match SymTensor::sum(&set.tensors) {
        Ok(s) if s == set.expected_unit => p.checked += 1,
        Ok(_) => p.fail(Witness::Sum {
            note: "sum equals the unit".into(),
            terms: set.tensors.clone(),
            expected: set.expected_unit.clone(),
        }),
        Err(e) => p.error("sum", e),
    }
}

/// Expected dimensions of one simple component `Symⁿℍ_F·e⁽ⁿ⁾_ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDescriptor {
    pub n: usize,
    pub ell: usize,
    pub field: FieldTag,
    /// Size of the matrix algebra (over ℝ, ℂ or ℍ) the component is isomorphic to.
    pub matrix_size: usize,
    pub expected_component_dim: usize,
    pub expected_minimal_ideal_dim: usize,
}

impl ComponentDescriptor {
    pub fn quaternion(n: usize, ell: usize, field: FieldTag) -> Result<Self> {
        if !m_range(n).contains(&ell) {
            return Err(Error::Argument(format!("ℓ must lie in [⌈n/2⌉, n], got ℓ={ell}, n={n}")));
        }
        let j = 2 * ell + 1 - n;
        let (matrix_size, minimal) = match field {
            FieldTag::GaussianComplex => (j, j),
            FieldTag::RationalReal if n % 2 == 0 => (j, j),
            FieldTag::RationalReal => (j / 2, 2 * j),
        };
        Ok(Self { n, ell, field, matrix_size, expected_component_dim: j * j, expected_minimal_ideal_dim: minimal })
    }
}

fn dense_guard(id: &str, kind: AlgebraKind, n: usize, bound: usize) -> Option<CheckResult> {
    let size = (kind.dim() as u128).pow(n as u32);
    (size > bound as u128).then(|| {
        CheckResult::skip(id, format!("dense dimension {size} exceeds bound {bound}"))
    })
}

/// Rank of each left ideal `Symⁿℍ_F·f` against the descriptor, plus the
/// component dimension `rank(Symⁿℍ_F·e⁽ⁿ⁾_ℓ)`.
pub fn check_primitivity(set: &IdempotentSet, desc: &ComponentDescriptor, bound: usize) -> CheckResult {
    let id = format!("primitivity/h/{}/n{}/l{}", field_code(desc.field), desc.n, desc.ell);
    if let Some(skip) = dense_guard(&id, H, desc.n, bound) {
        return skip;
    }
    let mut p = Probe::new(id);
    for (l, f) in set.iter() {
        match f.left_ideal_rank() {
            Ok(r) => p.value(format!("rank of ideal of {l}"), desc.expected_minimal_ideal_dim, r),
            Err(e) => p.error(format!("rank of ideal of {l}"), e),
        }
    }
    p.guard("component", |p| {
        let e = idem::central_idempotent(desc.n, desc.ell, H, desc.field)?;
        p.value("component dimension", desc.expected_component_dim, e.left_ideal_rank()?);
        Ok(())
    });
    p.finish()
}

fn field_code(f: FieldTag) -> &'static str {
    match f {
        FieldTag::RationalReal => "R",
        FieldTag::GaussianComplex => "C",
    }
}

fn sym2(kind: AlgebraKind, terms: &[(u8, i64)], scale: Rational) -> SymTensor {
    SymTensor::from_terms(kind, R, 2, terms.iter().map(|&(i, c)| (vec![i, i], GaussRational::from_int(c))))
        .expect("valid keys")
        .scale_rational(&scale)
}

/// The `n = 2`, `m = 2` fixtures: `τ₀..τ₃` by construction and by their
/// explicit forms, `ρ₁..ρ₇`, and the relations between them.
pub fn check_golden_n2m2() -> CheckResult {
    let mut p = Probe::new("golden/n2m2");
    p.guard("golden", |p| {
        let t = &OCTONION_TABLE;
        let e22 = idem::central_idempotent(2, 2, O, R)?;
        let quarter = Rational::new(1.into(), 4.into());
        let set = idem::theorem3_set(2, 2, R)?;
        p.value("τ count", 4, set.len());
        let explicit: [[i64; 4]; 4] = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]];
        for (idx, signs) in explicit.iter().enumerate() {
            let terms: Vec<(u8, i64)> = (0..4u8).zip(signs.iter().copied()).collect();
            let tau = sym2(O, &terms, quarter.clone()).mul(&e22)?;
            if let Some(built) = set.tensors.get(idx) {
                p.equal(format!("τ{idx} explicit form"), &tau, built);
            }
        }
        let tri_h = idem::triangle(H, R).embed_sym(O)?;
        if let Some(t0) = set.tensors.first() {
            p.equal("τ0 = △_ℍ·e", &tri_h.mul(&e22)?, t0);
        }
        let rho_keys: [[u8; 3]; 7] = [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]];
        let rho: Vec<SymTensor> = rho_keys
            .iter()
            .map(|k| {
                let terms = [(0, 1), (k[0], 1), (k[1], 1), (k[2], 1)];
                sym2(O, &terms, quarter.clone()).mul(&e22)
            })
            .collect::<Result<_>>()?;
        let zero = SymTensor::zero(O, R, 2);
        for (i, ri) in rho.iter().enumerate() {
            for (j, rj) in rho.iter().enumerate() {
                let expected = if i == j { ri } else { &zero };
                p.product(format!("ρ{}·ρ{}", i + 1, j + 1), ri, rj, expected, t);
            }
        }
        p.equal("Σρ = e⁽²⁾_{2,𝕆}", &e22, &SymTensor::sum(&rho)?);
        let tri_o = idem::triangle(O, R);
        p.product("△_𝕆·e⁽²⁾_{2,𝕆} = 0", &tri_o, &e22, &zero, t);
        let parts = [(0usize, vec![0usize]), (1, vec![1, 2]), (2, vec![3, 4]), (3, vec![5, 6])];
        for (tau_idx, rs) in parts {
            let s = SymTensor::sum(rs.iter().map(|&r| &rho[r]))?;
            if let Some(tau) = set.tensors.get(tau_idx) {
                p.equal(format!("τ{tau_idx} as a sum of ρ"), tau, &s);
            }
        }
        Ok(())
    });
    p.finish()
}

/// Both directions of the local-global criterion for `Symⁿℍ·△⁽ⁿ⁾`: every
/// random member has vanishing `e`-parts, and for a battery of structured
/// tensors exact membership agrees with vanishing at all rational samples.
pub fn check_local_global(n: usize, samples: usize, seed: u64) -> CheckResult {
    let mut p = Probe::new(format!("local-global/h/n{n}"));
    p.guard("local-global", |p| {
        let tri = idem::triangle_n(H, R, n)?;
        let es = im1_rational_samples(H, samples.max(1), seed)?;
        let ideal: Vec<_> = SymTensor::left_multiples(&tri)?.iter().map(SymTensor::to_vector).collect();
        let ideal = Echelon::from_rows(all_keys(H, n).len(), ideal);
        let vanishes = |r: &SymTensor| -> Result<bool> {
            for e in &es {
                if !r.epart_n(e)?.is_zero() {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in 0..samples {
            let r = SymTensor::random(H, R, n, 4, &mut rng).mul(&tri)?;
            p.value(format!("random member {s} vanishes"), true, vanishes(&r)?);
        }
        let e_top = idem::central_idempotent(n, n, H, R)?;
        p.product("e⁽ⁿ⁾_n·△⁽ⁿ⁾ = 0", &e_top, &tri, &SymTensor::zero(H, R, n), &OCTONION_TABLE);
        let mut battery = vec![
            ("1^{⊗n}".to_string(), SymTensor::unit(H, R, n)),
            ("△⁽ⁿ⁾".to_string(), tri.clone()),
            ("e⁽ⁿ⁾_n".to_string(), e_top),
            ("e₁^{⊗n}".to_string(), SymTensor::tensor_power(&AlgebraElement::basis(H, R, 1), n)),
        ];
        for m in m_range(n).filter(|&m| m < n) {
            battery.push((format!("e⁽ⁿ⁾_{m}"), idem::central_idempotent(n, m, H, R)?));
        }
        for s in 0..4 {
            battery.push((format!("random {s}"), SymTensor::random(H, R, n, 3, &mut rng)));
        }
        for (name, r) in battery {
            let member = ideal.contains(r.to_vector());
            p.value(format!("{name}: membership vs vanishing e-parts"), member, vanishes(&r)?);
        }
        Ok(())
    });
    p.finish()
}

/// `Symⁿℝ[e₁] ∩ Symⁿℍ·△⁽ⁿ⁾_ℍ = 0` (part a) and `Symⁿℍ ∩ Symⁿ𝕆·△⁽ⁿ⁾_𝕆 = 0`
/// (part b), by exact rank computations.
pub fn check_zero_intersection(n: usize, part_b: bool, bound: usize) -> CheckResult {
    let (small, big) = if part_b { (H, O) } else { (RE1, H) };
    let id = format!("zero-intersection/{}/n{n}", if part_b { "b" } else { "a" });
    if let Some(skip) = dense_guard(&id, big, n, bound) {
        return skip;
    }
    let mut p = Probe::new(id);
    p.guard("intersection", |p| {
        let sub: Vec<_> = all_keys(small, n)
            .into_iter()
            .map(|k| Ok(SymTensor::monomial(small, R, k.entries().to_vec(), GaussRational::one())?.embed_sym(big)?.to_vector()))
            .collect::<Result<_>>()?;
        let tri = idem::triangle_n(big, R, n)?;
        let ideal: Vec<_> = tri.left_multiples()?.iter().map(SymTensor::to_vector).collect();
        let width = all_keys(big, n).len();
        p.value("intersection dimension", 0, linalg::intersection_dim(width, &sub, &ideal));
        Ok(())
    });
    p.finish()
}

/// For the pair `(n, m)`: `e⁽ⁿ⁾_{ℓ,ℍ}·e⁽ⁿ⁾_{m,𝕆} = 0` for `ℓ > m`, and for
/// `ℓ ≤ m` right multiplication by `e⁽ⁿ⁾_{m,𝕆}` is injective on
/// `Symⁿℍ·e⁽ⁿ⁾_{ℓ,ℍ}` and multiplicative on samples.
pub fn check_isomorphism_kernel(n: usize, m: usize, bound: usize, seed: u64) -> CheckResult {
    let id = format!("isomorphism/n{n}/m{m}");
    if let Some(skip) = dense_guard(&id, O, n, bound) {
        return skip;
    }
    let mut p = Probe::new(id);
    p.guard("isomorphism", |p| {
        let e_m = idem::central_idempotent(n, m, O, R)?;
        let zero = SymTensor::zero(O, R, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for ell in m_range(n) {
            let e_l = idem::central_idempotent(n, ell, H, R)?;
            let e_l_o = e_l.embed_sym(O)?;
            if ell > m {
                p.product(format!("e_{{{ell},ℍ}}·e_{{{m},𝕆}} = 0"), &e_l_o, &e_m, &zero, &OCTONION_TABLE);
                continue;
            }
            let sources = e_l.left_multiples()?;
            let src_rank = linalg::rank(all_keys(H, n).len(), sources.iter().map(SymTensor::to_vector));
            let images: Vec<_> = sources
                .iter()
                .map(|s| Ok(s.embed_sym(O)?.mul(&e_m)?.to_vector()))
                .collect::<Result<_>>()?;
            let img_rank = linalg::rank(all_keys(O, n).len(), images);
            p.value(format!("ℓ={ell}: rank preserved"), src_rank, img_rank);
            for s in 0..3 {
                let x = SymTensor::random(H, R, n, 3, &mut rng).mul(&e_l)?;
                let y = SymTensor::random(H, R, n, 3, &mut rng).mul(&e_l)?;
                let lhs = x.mul(&y)?.embed_sym(O)?.mul(&e_m)?;
                let xo = x.embed_sym(O)?.mul(&e_m)?;
                let yo = y.embed_sym(O)?.mul(&e_m)?;
                p.product(format!("ℓ={ell}: multiplicative, sample {s}"), &xo, &yo, &lhs, &OCTONION_TABLE);
            }
        }
        Ok(())
    });
    p.finish()
}

/// `△(x⊗x) = N(x)△ = (x⊗x)△` on the basis and on seeded random `x`.
pub fn check_triangle_lemma(kind: AlgebraKind, samples: usize, seed: u64) -> CheckResult {
    let mut p = Probe::new(format!("triangle-lemma/{}", kind.name()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = (0..kind.dim()).map(|i| AlgebraElement::basis(kind, C, i));
    let random: Vec<_> = (0..samples).map(|_| random_element(kind, C, &mut rng)).collect();
    let tri = idem::triangle(kind, C);
    for (s, x) in basis.chain(random).enumerate() {
        let xx = SymTensor::tensor_power(&x, 2);
        let expected = tri.scale(&x.norm());
        p.product(format!("△(x⊗x), element {s}"), &tri, &xx, &expected, &OCTONION_TABLE);
        p.product(format!("(x⊗x)△, element {s}"), &xx, &tri, &expected, &OCTONION_TABLE);
    }
    let tri_r = idem::triangle(kind, R);
    p.product("△² = △", &tri_r, &tri_r, &tri_r, &OCTONION_TABLE);
    p.finish()
}

/// Injectivity of `s ↦ (s ⊗ △^{⊗ℓ})^∨` on `Sym^{n−2ℓ}`: the images of a
/// basis stay linearly independent, for every `ℓ ≤ ⌊n/2⌋`.
pub fn check_zero_cond(kind: AlgebraKind, n: usize) -> CheckResult {
    let mut p = Probe::new(format!("zero-cond/{}/n{n}", kind.name()));
    p.guard("zero-cond", |p| {
        for ell in 0..=n / 2 {
            let tri_pow = idem::triangle(kind, R).graft_power(ell)?;
            let keys = all_keys(kind, n - 2 * ell);
            let rows: Vec<_> = keys
                .iter()
                .map(|k| Ok(SymTensor::monomial(kind, R, k.entries().to_vec(), GaussRational::one())?.graft(&tri_pow)?.to_vector()))
                .collect::<Result<_>>()?;
            p.value(format!("ℓ={ell}: images independent"), keys.len(), linalg::rank(all_keys(kind, n).len(), rows));
        }
        Ok(())
    });
    p.finish()
}

/// The family `C(n,k)·(a^{⊗k}⊗(aᶜ)^{⊗(n−k)})^∨`, `k = 0..n`, in `Symⁿℂ[e₁]`.
pub fn sce_set(n: usize) -> Result<IdempotentSet> {
    let a = idem::a_element(RE1, C)?;
    let ac = idem::ac_element(RE1, C)?;
    let mut set = IdempotentSet::new(format!("a/ac family of Sym^{n} Re1 over GaussianComplex"), SymTensor::unit(RE1, C, n), n + 1);
    for k in 0..=n {
        let c = Rational::from_integer(binomial(n as i64, k as i64));
        let t = SymTensor::tensor_power(&a, k).graft(&SymTensor::tensor_power(&ac, n - k))?.scale_rational(&c);
        set.push(
            idem::IdempotentLabel { family: idem::Family::Thm1a, n, ell: None, m: None, k: Some(k), delta: None },
            t,
        );
    }
    Ok(set)
}

/// The central family: idempotent, orthogonal, summing to `1^{⊗n}`, and
/// commuting and associating with seeded random elements.
pub fn check_central_family(n: usize, kind: AlgebraKind, samples: usize, seed: u64, table: &MulTable) -> CheckResult {
    let mut p = Probe::new(format!("central/{}/n{n}", kind.name()));
    let set = match idem::central_set(n, kind, R) {
        Ok(s) => s,
        Err(e) => {
            p.error("construction", e);
            return p.finish();
        }
    };
    probe_set(&mut p, &set, table);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        let x = SymTensor::random(kind, R, n, 6, &mut rng);
        let y = SymTensor::random(kind, R, n, 6, &mut rng);
        for (m, e) in m_range(n).zip(&set.tensors) {
            p.guard("centrality", |p| {
                let ex = e.mul_with_table(&x, table)?;
                p.product(format!("e_{m}·x = x·e_{m}, sample {s}"), &x, e, &ex, table);
                let xy = x.mul_with_table(&y, table)?;
                let e_xy = e.mul_with_table(&xy, table)?;
                p.product(format!("(e_{m}·x)·y = e_{m}·(x·y), sample {s}"), &ex, &y, &e_xy, table);
                Ok(())
            });
        }
    }
    p.finish()
}

/// Product formula, recursion and closed form give identical tensors.
pub fn check_central_routes(n: usize, kind: AlgebraKind) -> CheckResult {
    let mut p = Probe::new(format!("central-routes/{}/n{n}", kind.name()));
    for m in m_range(n) {
        p.guard("routes", |p| {
            let prod = idem::central_idempotent_product(n, m, kind, R)?;
            p.equal(format!("m={m}: recursion"), &prod, &idem::central_idempotent_recursive(n, m, kind, R)?);
            if m < n && matches!(kind, H | O) {
                p.equal(format!("m={m}: closed form"), &prod, &idem::central_idempotent_closed(n, m, kind)?);
            }
            Ok(())
        });
    }
    p.finish()
}

/// `n(n−1)(β_k − β_ℓ) = (n−2)(n−3)(β⁽ⁿ⁻²⁾_{k−1} − β⁽ⁿ⁻²⁾_{ℓ−1})` for all
/// valid `k, ℓ` and `n ≤ max_n`, plus the three special values.
pub fn check_beta_identity(max_n: usize, dims: &[usize]) -> CheckResult {
    let mut p = Probe::new("beta-identity");
    p.guard("beta", |p| {
        for &d in dims {
            for n in 4..=max_n {
                for k in m_range(n) {
                    for l in m_range(n) {
                        // β⁽ⁿ⁻²⁾_{n−1} lies outside its range; the identity needs both sides defined
                        if k == n || l == n {
                            continue;
                        }
                        let nn = Rational::from_integer(BigInt::from(n * (n - 1)));
                        let lhs = nn * (idem::beta(n, k, d)?.value - idem::beta(n, l, d)?.value);
                        let mm = Rational::from_integer(BigInt::from((n - 2) * (n - 3)));
                        let rhs = mm * (idem::beta(n - 2, k - 1, d)?.value - idem::beta(n - 2, l - 1, d)?.value);
                        p.value(format!("d={d} n={n} k={k} ℓ={l}"), &lhs, &rhs);
                    }
                }
            }
            let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
            p.value(format!("β⁽²⁾_1, d={d}"), r(1, 1), idem::beta(2, 1, d)?.value);
            p.value(format!("β⁽²⁾_2, d={d}"), r(0, 1), idem::beta(2, 2, d)?.value);
            p.value(format!("β⁽³⁾_2, d={d}"), r(d as i64 + 2, 3 * d as i64), idem::beta(3, 2, d)?.value);
        }
        Ok(())
    });
    p.finish()
}

/// `(1^{⊗(n−2ℓ)} ⊗ △^{⊗ℓ})^∨ = Σ c_m·e⁽ⁿ⁾_m` with `c_m ≠ 0` exactly for
/// `m ≤ n−ℓ`.
pub fn check_trianglel(n: usize, kind: AlgebraKind) -> CheckResult {
    let mut p = Probe::new(format!("trianglel/{}/n{n}", kind.name()));
    p.guard("trianglel", |p| {
        for ell in 0..=n / 2 {
            for (m, c) in idem::triangle_power_coefficients(n, ell, kind)? {
                p.value(format!("ℓ={ell} m={m}: coefficient nonzero"), m <= n - ell, !c.is_zero());
            }
        }
        Ok(())
    });
    p.finish()
}

/// The ideals `Symⁿℍ_F·e⁽ⁿ⁾_m` have dimensions `(2m−n+1)²` and together
/// span the whole space.
pub fn check_rank_additivity(n: usize, field: FieldTag, bound: usize) -> CheckResult {
    let id = format!("rank-additivity/h/{}/n{n}", field_code(field));
    if let Some(skip) = dense_guard(&id, H, n, bound) {
        return skip;
    }
    let mut p = Probe::new(id);
    p.guard("ranks", |p| {
        let width = all_keys(H, n).len();
        let mut all = Echelon::new(width);
        let mut total = 0;
        for m in m_range(n) {
            let e = idem::central_idempotent(n, m, H, field)?;
            let rows: Vec<_> = e.left_multiples()?.iter().map(SymTensor::to_vector).collect();
            let r = linalg::rank(width, rows.iter().cloned());
            p.value(format!("m={m}: dimension"), (2 * m + 1 - n).pow(2), r);
            total += r;
            for row in rows {
                all.insert(row);
            }
        }
        p.value("Σ dimensions = C(n+3,3)", binomial(n as i64 + 3, 3), total);
        p.value("direct sum spans", width, all.rank());
        Ok(())
    });
    p.finish()
}

/// The real families built from explicit sums equal the conjugate-pair sums of
/// the complex family.
pub fn check_real_via_pairs(n: usize) -> CheckResult {
    let mut p = Probe::new(format!("real-via-pairs/h/n{n}"));
    for ell in m_range(n) {
        p.guard("pairs", |p| {
            let a = idem::theorem1_set(n, ell, R)?;
            let b = idem::theorem1_set_via_pairs(n, ell)?;
            p.value(format!("ℓ={ell}: size"), a.len(), b.len());
            for ((la, ta), tb) in a.iter().zip(&b.tensors) {
                p.equal(format!("{la}"), tb, ta);
            }
            Ok(())
        });
    }
    p.finish()
}

/// Vanishing of `C(n,k)(a^{⊗k}⊗(aᶜ)^{⊗(n−k)})^∨·e⁽ⁿ⁾_ℓ` outside `n−ℓ ≤ k ≤ ℓ`.
pub fn check_vanishing_family(n: usize) -> CheckResult {
    let mut p = Probe::new(format!("vanishing-family/h/n{n}"));
    for ell in m_range(n) {
        for k in (0..n - ell).chain(ell + 1..=n) {
            p.guard("vanishing", |p| {
                let t = idem::theorem1a_element(n, ell, k)?;
                p.value(format!("ℓ={ell} k={k} vanishes"), true, t.is_zero());
                Ok(())
            });
        }
    }
    p.finish()
}

/// Sparse products equal the dense oracle on seeded random pairs.
pub fn check_oracle_random(pairs: usize, seed: u64, bound: usize) -> CheckResult {
    use rand::Rng;
    let mut p = Probe::new("oracle/random");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes: Vec<(AlgebraKind, usize)> = [(RE1, 6), (H, 5), (O, 4)]
        .into_iter()
        .flat_map(|(k, top)| (1..=top).map(move |n| (k, n)))
        .filter(|&(k, n)| k.dim().pow(n as u32) <= bound)
        .collect();
    for s in 0..pairs {
        let (kind, n) = shapes[s % shapes.len()];
        let field = if rng.gen_bool(0.5) { C } else { R };
        let x = SymTensor::random(kind, field, n, rng.gen_range(1..=8), &mut rng);
        let y = SymTensor::random(kind, field, n, rng.gen_range(1..=8), &mut rng);
        p.guard("oracle", |p| {
            let dense = x.dense_mul_oracle(&y, bound)?;
            p.product(format!("pair {s}: {kind} n={n}"), &x, &y, &dense, &OCTONION_TABLE);
            Ok(())
        });
    }
    p.finish()
}

/// Every pairwise product of `set` agrees with the dense oracle.
pub fn check_oracle_set(set: &IdempotentSet, bound: usize) -> CheckResult {
    let u = &set.expected_unit;
    let id = format!("oracle/{}", set.description);
    if let Some(skip) = dense_guard(&id, u.kind(), u.degree(), bound) {
        return skip;
    }
    let mut p = Probe::new(id);
    for (li, fi) in set.iter() {
        for (lj, fj) in set.iter() {
            p.guard("oracle", |p| {
                let dense = fi.dense_mul_oracle(fj, bound)?;
                p.product(format!("{li}·{lj}"), fi, fj, &dense, &OCTONION_TABLE);
                Ok(())
            });
        }
    }
    p.finish()
}

/// Verification profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

/// Inputs of [`run_suite`].
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub profile: Profile,
    pub dense_bound: usize,
    pub seed: u64,
    pub samples: usize,
    /// Structure constants used by the table and product checks; replace to
    /// plant a fault.
    pub table: MulTable,
}

impl SuiteOptions {
    pub fn new(profile: Profile) -> Self {
        Self { profile, dense_bound: DEFAULT_DENSE_BOUND, seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES, table: OCTONION_TABLE }
    }
}

fn set_check(id_prefix: &str, set: Result<IdempotentSet>, table: &MulTable) -> CheckResult {
    match set {
        Ok(s) => {
            let mut r = check_set_with(&s, table);
            r.check_id = id_prefix.to_string();
            r
        }
        Err(e) => {
            let mut p = Probe::new(id_prefix);
            p.error("construction", e);
            p.finish()
        }
    }
}

/// Runs every check at the sizes of `profile`. Results are ordered by
/// `check_id`.
pub fn run_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    let quick = opts.profile == Profile::Quick;
    let (h_max, o_max, h_central_max) = if quick { (3, 2, 3) } else { (5, 4, 6) };
    let (samples, seed, bound, table) = (opts.samples, opts.seed, opts.dense_bound, &opts.table);
    let mut out = vec![check_mult_table(table), check_golden_n2m2(), check_beta_identity(10, &[2, 4, 8])];
    for kind in [RE1, H, O] {
        out.push(check_triangle_lemma(kind, samples, seed));
    }
    for n in 2..=h_central_max {
        out.push(check_central_family(n, H, samples, seed, table));
        out.push(check_central_routes(n, H));
        out.push(check_trianglel(n, H));
    }
    for n in 2..=o_max {
        out.push(check_central_family(n, O, samples, seed, table));
        out.push(check_central_routes(n, O));
    }
    for n in 1..=h_max {
        for ell in m_range(n) {
            for field in [C, R] {
                let id = format!("thm1/h/{}/n{n}/l{ell}", field_code(field));
                out.push(set_check(&id, idem::theorem1_set(n, ell, field), table));
                if (2..=4).contains(&n) {
                    let set = idem::theorem1_set(n, ell, field);
                    out.push(match (set, ComponentDescriptor::quaternion(n, ell, field)) {
                        (Ok(s), Ok(d)) => check_primitivity(&s, &d, bound),
                        (Err(e), _) | (_, Err(e)) => {
                            let mut p = Probe::new(format!("primitivity/h/{}/n{n}/l{ell}", field_code(field)));
                            p.error("construction", e);
                            p.finish()
                        }
                    });
                }
            }
        }
        out.push(check_real_via_pairs(n));
        out.push(check_vanishing_family(n));
        out.push(set_check(&format!("sce/n{n}"), sce_set(n), table));
        for field in [C, R] {
            out.push(set_check(&format!("cor2/h/{}/n{n}", field_code(field)), idem::corollary2_set(n, field), table));
        }
        out.push(check_zero_cond(H, n));
        for field in [C, R] {
            out.push(check_rank_additivity(n, field, bound));
        }
    }
    for n in 2..=o_max {
        for m in m_range(n) {
            for field in [C, R] {
                let id = format!("thm3/{}/n{n}/m{m}", field_code(field));
                out.push(set_check(&id, idem::theorem3_set(n, m, field), table));
            }
            if n <= 3 || !quick {
                out.push(check_isomorphism_kernel(n, m, bound, seed));
            }
        }
        for field in [C, R] {
            out.push(set_check(&format!("cor4/{}/n{n}", field_code(field)), idem::corollary4_set(n, field), table));
        }
    }
    for n in 2..=3 {
        out.push(check_local_global(n, 8, seed));
        out.push(check_zero_intersection(n, false, bound));
    }
    out.push(check_zero_intersection(2, true, bound));
    if !quick {
        out.push(check_zero_intersection(3, true, bound));
    }
    out.push(check_oracle_random(if quick { 100 } else { 500 }, seed, bound));
    out.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    out
}

/// Counts of passed, failed and skipped checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(results: &[CheckResult]) -> Self {
        let mut s = Summary::default();
        for r in results {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Skip => s.skipped += 1,
            }
        }
        s
    }
}

#[derive(Serialize)]
struct ResultJson<'a> {
    check_id: &'a str,
    status: Status,
    passed: bool,
    detail: &'a str,
    #[serde(skip_serializing_if = "<[Witness]>::is_empty")]
    witnesses: &'a [Witness],
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    suite: &'a str,
    profile: Profile,
    results: Vec<ResultJson<'a>>,
    summary: Summary,
}

/// The report document. Elapsed times are included only with `timings`, so
/// that the default output is byte-identical across runs.
pub fn report_json(profile: Profile, results: &[CheckResult], timings: bool) -> serde_json::Value {
    let doc = ReportJson {
        suite: "symidem",
        profile,
        results: results
            .iter()
            .map(|r| ResultJson {
                check_id: &r.check_id,
                status: r.status,
                passed: r.passed(),
                detail: &r.detail,
                witnesses: &r.witnesses,
                elapsed_ms: timings.then_some(r.elapsed.as_millis()),
            })
            .collect(),
        summary: Summary::of(results),
    };
    serde_json::to_value(doc).expect("report serializes")
}
