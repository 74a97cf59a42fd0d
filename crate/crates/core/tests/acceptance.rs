//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use symidem::algebra::{AlgebraKind, FieldTag, OCTONION_TABLE};
use symidem::idempotents::{self as idem, m_range, IdempotentSet};
use symidem::symtensor::{SymTensor, DEFAULT_DENSE_BOUND};
use symidem::verify::{self, CheckResult, ComponentDescriptor, DEFAULT_SAMPLES, DEFAULT_SEED};

const H: AlgebraKind = AlgebraKind::Quaternion;
const O: AlgebraKind = AlgebraKind::Octonion;
const R: FieldTag = FieldTag::RationalReal;
const C: FieldTag = FieldTag::GaussianComplex;
const BOUND: usize = DEFAULT_DENSE_BOUND;

/// Outcome of one criterion: the list of problems found (empty means pass).
type Outcome = Vec<String>;

fn expect(out: &mut Outcome, r: CheckResult) {
    if !r.passed() {
        let notes: Vec<&str> = r.witnesses.iter().map(|w| w.note()).collect();
        out.push(format!("{} {:?}: {} {:?}", r.check_id, r.status, r.detail, notes));
    }
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(out: &mut Outcome, what: &str, expected: T, actual: T) {
    if expected != actual {
        out.push(format!("{what}: expected {expected:?}, got {actual:?}"));
    }
}

fn set_or_fail(out: &mut Outcome, what: &str, s: symidem::error::Result<IdempotentSet>) -> Option<IdempotentSet> {
    match s {
        Ok(s) => Some(s),
        Err(e) => {
            out.push(format!("{what}: {e}"));
            None
        }
    }
}

fn table_fidelity() -> Outcome {
    let mut out = Vec::new();
    expect(&mut out, verify::check_mult_table(&OCTONION_TABLE));
    for kind in [AlgebraKind::Re1, H] {
        for i in 0..kind.dim() {
            for j in 0..kind.dim() {
                let (s, k) = kind.basis_mul(i, j).unwrap();
                expect_eq(&mut out, &format!("{kind} e{i}e{j} restricts the octonion product"), OCTONION_TABLE.product(i, j), (s, k));
                if k >= kind.dim() {
                    out.push(format!("{kind} not closed at e{i}e{j}"));
                }
            }
        }
    }
    out
}

fn central_family() -> Outcome {
    let mut out = Vec::new();
    for (kind, top) in [(H, 6), (O, 4)] {
        for n in 2..=top {
            expect(&mut out, verify::check_central_family(n, kind, DEFAULT_SAMPLES, DEFAULT_SEED, &OCTONION_TABLE));
            expect(&mut out, verify::check_central_routes(n, kind));
        }
    }
    out
}

fn theorem1_sets() -> Outcome {
    let mut out = Vec::new();
    for n in 1..=5 {
        for ell in m_range(n) {
            for field in [C, R] {
                let expected = match field {
                    FieldTag::RationalReal if n % 2 == 1 => (2 * ell + 1 - n) / 2,
                    _ => 2 * ell + 1 - n,
                };
                if let Some(s) = set_or_fail(&mut out, "theorem1_set", idem::theorem1_set(n, ell, field)) {
                    expect_eq(&mut out, &format!("n={n} ℓ={ell} {field} count"), expected, s.len());
                    expect(&mut out, verify::check_set(&s));
                }
            }
        }
        expect(&mut out, verify::check_real_via_pairs(n));
    }
    out
}

fn theorem3_sets() -> Outcome {
    let mut out = Vec::new();
    for n in 2..=4 {
        for m in m_range(n) {
            for field in [C, R] {
                if let Some(s) = set_or_fail(&mut out, "theorem3_set", idem::theorem3_set(n, m, field)) {
                    match idem::central_idempotent(n, m, O, field) {
                        Ok(e) => expect_eq(&mut out, "unit is e_{m,𝕆}", &e, &s.expected_unit),
                        Err(e) => out.push(e.to_string()),
                    }
                    expect(&mut out, verify::check_set(&s));
                }
            }
            let e_m = idem::central_idempotent(n, m, O, R).unwrap();
            for ell in m_range(n).filter(|&l| l > m) {
                let e_l = idem::central_idempotent(n, ell, H, R).unwrap().embed_sym(O).unwrap();
                expect_eq(&mut out, &format!("n={n}: e_{{{ell},ℍ}}·e_{{{m},𝕆}} = 0"), true, e_l.mul(&e_m).unwrap().is_zero());
            }
        }
        for field in [C, R] {
            let formula = if n % 2 == 0 {
                (n + 2) * (n + 3) * (n + 4) / 24
            } else if field == C {
                (n + 1) * (n + 3) * (n + 5) / 24
            } else {
                (n + 1) * (n + 3) * (n + 5) / 48
            };
            if let Some(s) = set_or_fail(&mut out, "corollary4_set", idem::corollary4_set(n, field)) {
                expect_eq(&mut out, &format!("n={n} {field} octonion total count"), formula, s.len());
                expect(&mut out, verify::check_set(&s));
            }
        }
    }
    expect_eq(&mut out, "n=2 complex total", 5, idem::corollary4_count(2, C));
    expect_eq(&mut out, "n=3 complex total", 8, idem::corollary4_count(3, C));
    out
}

fn golden() -> Outcome {
    let mut out = Vec::new();
    expect(&mut out, verify::check_golden_n2m2());
    out
}

fn primitivity() -> Outcome {
    let mut out = Vec::new();
    for n in 2..=4 {
        for ell in m_range(n) {
            for field in [C, R] {
                let desc = ComponentDescriptor::quaternion(n, ell, field).unwrap();
                let expected = match field {
                    FieldTag::RationalReal if n % 2 == 1 => 2 * (2 * ell + 1 - n),
                    _ => 2 * ell + 1 - n,
                };
                expect_eq(&mut out, "descriptor", expected, desc.expected_minimal_ideal_dim);
                let s = idem::theorem1_set(n, ell, field).unwrap();
                expect(&mut out, verify::check_primitivity(&s, &desc, BOUND));
            }
        }
    }
    out
}

fn oracle_equivalence() -> Outcome {
    let mut out = Vec::new();
    expect(&mut out, verify::check_oracle_random(500, DEFAULT_SEED, BOUND));
    let mut sets = Vec::new();
    for (kind, top) in [(H, 6), (O, 4)] {
        for n in 2..=top {
            sets.push(idem::central_set(n, kind, R));
        }
    }
    for n in 1..=5 {
        for ell in m_range(n) {
            sets.push(idem::theorem1_set(n, ell, C));
            sets.push(idem::theorem1_set(n, ell, R));
        }
    }
    for n in 2..=4 {
        sets.push(idem::corollary4_set(n, C));
        sets.push(idem::corollary4_set(n, R));
    }
    for s in sets {
        if let Some(s) = set_or_fail(&mut out, "structured set", s) {
            expect(&mut out, verify::check_oracle_set(&s, BOUND));
        }
    }
    out
}

fn beta_identity() -> Outcome {
    let mut out = Vec::new();
    expect(&mut out, verify::check_beta_identity(10, &[2, 4, 8]));
    out
}

fn local_global_and_intersection() -> Outcome {
    let mut out = Vec::new();
    for n in [2, 3] {
        expect(&mut out, verify::check_local_global(n, 8, DEFAULT_SEED));
        expect(&mut out, verify::check_zero_intersection(n, false, BOUND));
    }
    expect(&mut out, verify::check_zero_intersection(2, true, BOUND));
    out
}

fn negative_controls() -> Outcome {
    let mut out = Vec::new();
    // degree 2 is blind to single sign flips; degree 3 sees every one
    let degree3 = idem::corollary4_set(3, R).unwrap();
    let degree2 = idem::theorem3_set(2, 2, R).unwrap();
    for i in 0..8 {
        for j in 0..8 {
            let bad = OCTONION_TABLE.with_flipped_sign(i, j);
            if verify::check_mult_table(&bad).passed() {
                out.push(format!("flip ({i},{j}) not detected by the table check"));
            }
            let r = verify::check_set_with(&degree3, &bad);
            if r.passed() {
                out.push(format!("flip ({i},{j}) not detected by check_set in degree 3"));
            }
            for w in &r.witnesses {
                if !w.refails(&bad) || w.refails(&OCTONION_TABLE) {
                    out.push(format!("flip ({i},{j}): witness {} does not replay", w.note()));
                }
            }
        }
    }
    if !verify::check_set_with(&degree2, &OCTONION_TABLE.with_flipped_sign(1, 1)).passed() {
        out.push("degree-2 set unexpectedly sensitive to a single flip".into());
    }
    let flip = OCTONION_TABLE.with_flipped_sign(1, 2);
    if verify::check_set_with(&idem::theorem1_set(3, 2, C).unwrap(), &flip).passed() {
        out.push("flip (1,2) not detected by check_set".into());
    }
    let mut perturbed = idem::theorem1_set(3, 2, C).unwrap();
    let one = SymTensor::unit(H, C, 3);
    perturbed.tensors[1] = perturbed.tensors[1].add(&one).unwrap();
    let r = verify::check_set(&perturbed);
    if r.passed() || r.witnesses.iter().any(|w| !w.refails(&OCTONION_TABLE)) {
        out.push("perturbed coefficient not detected with replayable witnesses".into());
    }
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("multiplication table fidelity", table_fidelity),
        ("central idempotent family", central_family),
        ("quaternionic primitive sets and conjugate-pair cross-check", theorem1_sets),
        ("octonionic component sets, annihilation and counts", theorem3_sets),
        ("golden n=2, m=2 fixtures", golden),
        ("primitivity by rank", primitivity),
        ("sparse product equals dense oracle", oracle_equivalence),
        ("beta identity and special values", beta_identity),
        ("local-global and zero-intersection lemmas", local_global_and_intersection),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let problems = run();
        let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {:>2}: {verdict}  {name} ({:.2?})", idx + 1, start.elapsed());
        for p in problems.iter().take(10) {
            println!("    {p}");
        }
        if !problems.is_empty() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
