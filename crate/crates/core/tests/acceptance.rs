//! Acceptance suite. Prints one line per criterion and exits nonzero when a
//! criterion fails unexpectedly.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use pseudoalg::constructions::{annihilation_build, coeff_build, curr_build, plus_minus, w_build, Sign, WindowKey};
use pseudoalg::dual::{fourier, FourierKind};
use pseudoalg::hopf::{hopf_axiom_suite, FiniteGroup, SmashAlgebra, TensorElement};
use pseudoalg::linalg::Matrix;
use pseudoalg::ordinary::{ordinary_tkk, IsoSearch};
use pseudoalg::scalar::int;
use pseudoalg::tkk::{cend_bracket, current_iso_check, is_pseudoderivation, left_mul, tkk_build, IsoOutcome};
use pseudoalg::varieties::{check_variety, n_product, Variety};
use pseudoalg::{
    CanonicalTensor, HElement, HopfAlgebra, LieData, LinComb, MultiIndex, OrdinaryAlgebra, PModuleElement,
    PseudoAlgebra, Result, Scalar,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_517;

enum Verdict {
    Pass(String),
    Fail(String),
    /// A criterion that cannot hold as stated; the check asserts the exact
    /// shape of the failure together with the statements that do hold.
    Deviation(String),
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Result<Verdict>,
}

fn hopf(lie: LieData, cutoff: u32) -> Arc<HopfAlgebra> {
    Arc::new(HopfAlgebra::new(lie, cutoff).expect("valid Lie data"))
}

fn spin_factor() -> OrdinaryAlgebra {
    OrdinaryAlgebra::jordan_bilinear(&Matrix::identity(2)).expect("symmetric form")
}

fn random_multi(rng: &mut ChaCha8Rng, dim: usize, max_degree: u32) -> MultiIndex {
    let total = rng.gen_range(0..=max_degree);
    let mut v = vec![0u32; dim];
    for _ in 0..total {
        v[rng.gen_range(0..dim)] += 1;
    }
    MultiIndex(v)
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Scalar {
    let c = rng.gen_range(-3..=3);
    int(if c == 0 { 1 } else { c })
}

fn random_tensor(rng: &mut ChaCha8Rng, dim: usize, arity: usize, max_degree: u32) -> TensorElement {
    let mut t = TensorElement::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let slots = (0..arity).map(|_| random_multi(rng, dim, max_degree)).collect();
        t.add_term(slots, random_coeff(rng));
    }
    t
}

fn random_element(rng: &mut ChaCha8Rng, dim: usize, rank: usize, max_degree: u32) -> PModuleElement {
    let mut p = PModuleElement::zero();
    for _ in 0..rng.gen_range(1..=3) {
        p.add_term((random_multi(rng, dim, max_degree), rng.gen_range(0..rank)), random_coeff(rng));
    }
    p
}

fn verdict(ok: bool, detail: String) -> Verdict {
    if ok {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(detail)
    }
}

fn hopf_axioms() -> Result<Verdict> {
    let mut failures = Vec::new();
    for (name, lie) in [("U(abelian^2)", LieData::abelian(2)), ("U(aff(1))", LieData::aff1())] {
        let report = hopf_axiom_suite(&HopfAlgebra::new(lie, 4)?, 4)?;
        if !report.all_passed() {
            failures.push(format!("{name}: {report:?}"));
        }
    }
    let base = HopfAlgebra::new(LieData::abelian(1), 4)?;
    let flip = vec![Matrix::identity(1), Matrix::from_rows(vec![vec![int(-1)]])];
    let smash = SmashAlgebra::new(base, FiniteGroup::cyclic(2), flip)?;
    let report = hopf_axiom_suite(&smash, 4)?;
    if !report.all_passed() {
        failures.push(format!("U(k)#k[Z/2]: {report:?}"));
    }
    Ok(verdict(failures.is_empty(), if failures.is_empty() { "3 Hopf algebras, degree <= 4".into() } else { failures.join("; ") }))
}

fn fourier_inverses() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let h = HopfAlgebra::new(LieData::aff1(), 12)?;
    for i in 0..200 {
        let t = random_tensor(&mut rng, 2, 2 + i % 2, 3);
        let round = fourier(&h, FourierKind::Finv, &fourier(&h, FourierKind::F, &t)?)?;
        let round_prime = fourier(&h, FourierKind::FprimeInv, &fourier(&h, FourierKind::Fprime, &t)?)?;
        if round != t || round_prime != t {
            return Ok(Verdict::Fail(format!("sample {i} does not round-trip")));
        }
    }
    Ok(Verdict::Pass("200 tensors of arity 2-3 over U(aff(1))".into()))
}

fn canonical_raw(t: &CanonicalTensor) -> Vec<(TensorElement, PModuleElement)> {
    t.terms()
        .iter()
        .map(|((hs, g, k), c)| {
            let mut slots = hs.clone();
            slots.push(MultiIndex::zero(g.dim()));
            (TensorElement::term(slots, c.clone()), PModuleElement::basis((g.clone(), *k)))
        })
        .collect()
}

fn canonical_forms() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let h = hopf(LieData::aff1(), 8);
    let p = curr_build(h.clone(), &OrdinaryAlgebra::sl2())?;
    for i in 0..200 {
        let arity = 2 + i % 2;
        let f = random_tensor(&mut rng, 2, arity, 3);
        let m = random_element(&mut rng, 2, 3, 1);
        let canon = p.normalize_arity(arity, &[(f.clone(), m.clone())])?;
        if p.normalize_arity(arity, &canonical_raw(&canon))? != canon {
            return Ok(Verdict::Fail(format!("sample {i}: normalize is not idempotent")));
        }
        // (F Δ(g)) ⊗_H m = F ⊗_H g m
        let g = HElement::basis(random_multi(&mut rng, 2, 2));
        let moved = h.tensor_mul(&f, &h.coproduct_n(&g, arity)?)?;
        let lhs = p.normalize_arity(arity, &[(moved, m.clone())])?;
        let rhs = p.normalize_arity(arity, &[(f, p.act(&g, &m)?)])?;
        if lhs != rhs {
            return Ok(Verdict::Fail(format!("sample {i}: normal form depends on the representative")));
        }
    }
    Ok(Verdict::Pass("200 raw tensors over U(aff(1))".into()))
}

fn perturbed(p: &PseudoAlgebra) -> Result<PseudoAlgebra> {
    let mut table: Vec<Vec<CanonicalTensor>> =
        (0..p.rank()).map(|i| (0..p.rank()).map(|j| p.entry(i, j).clone()).collect()).collect();
    // (e_1 ⊗ 1) ⊗_H v_0 breaks both commutativity and anticommutativity.
    let d = p.hopf().dim();
    let bump = CanonicalTensor::from_terms(2, LinComb::basis((vec![MultiIndex::unit(d, 0)], MultiIndex::zero(d), 0)));
    table[0][0] = table[0][0].add(&bump);
    p.with_table(table)
}

fn variety_checks() -> Result<Verdict> {
    let line = hopf(LieData::abelian(1), 6);
    let jordan = [
        ("Curr k", curr_build(line.clone(), &OrdinaryAlgebra::field())?),
        ("Curr k^2", curr_build(line.clone(), &OrdinaryAlgebra::field_squared())?),
        ("Curr J(f)", curr_build(line.clone(), &spin_factor())?),
    ];
    let lie = [
        ("Curr sl2", curr_build(line.clone(), &OrdinaryAlgebra::sl2())?),
        ("W(1)", w_build(line)?),
        ("W(abelian^2)", w_build(hopf(LieData::abelian(2), 6))?),
        ("W(aff(1))", w_build(hopf(LieData::aff1(), 6))?),
    ];
    let cases = jordan.iter().map(|c| (c, Variety::Jordan)).chain(lie.iter().map(|c| (c, Variety::Lie)));
    for ((name, p), variety) in cases {
        if !check_variety(p, variety)?.passed() {
            return Ok(Verdict::Fail(format!("{name} is not {}", variety.name())));
        }
        let report = check_variety(&perturbed(p)?, variety)?;
        match report.first_failure() {
            Some(f) if f.witness.is_some() => {}
            _ => return Ok(Verdict::Fail(format!("perturbed {name} still passes {}", variety.name()))),
        }
    }
    Ok(Verdict::Pass("7 algebras pass, each perturbation fails with a witness".into()))
}

fn plus_minus_functors() -> Result<Verdict> {
    let p = curr_build(hopf(LieData::aff1(), 6), &OrdinaryAlgebra::matrices2())?;
    let plus = check_variety(&plus_minus(&p, Sign::Plus)?, Variety::Jordan)?.passed();
    let minus = check_variety(&plus_minus(&p, Sign::Minus)?, Variety::Lie)?.passed();
    Ok(verdict(plus && minus, format!("Curr(M2)(+) jordan={plus}, Curr(M2)(-) lie={minus}")))
}

fn virasoro_witt() -> Result<Verdict> {
    let w = w_build(hopf(LieData::abelian(1), 6))?;
    let v = w.basis_element(0);
    let ev = PModuleElement::basis((MultiIndex(vec![1]), 0));
    if n_product(&w, &v, &v, 0)? != -&ev || n_product(&w, &v, &v, 1)? != v.scale(&int(-2)) {
        return Ok(Verdict::Fail("low n-products differ from -e.v, -2v".into()));
    }
    for n in 2..=6 {
        if !n_product(&w, &v, &v, n)?.is_zero() {
            return Ok(Verdict::Fail(format!("v (n={n}) v is nonzero")));
        }
    }
    let c = coeff_build(&w, 5)?;
    let mut checked = 0;
    for n in -5..=5i64 {
        for m in -5..=5i64 {
            let (Some(a), Some(b)) = (c.index_of(&WindowKey::Coefficient(0, n)), c.index_of(&WindowKey::Coefficient(0, m)))
            else {
                continue;
            };
            let Some(t) = c.index_of(&WindowKey::Coefficient(0, n + m - 1)) else { continue };
            let want = if m == n { LinComb::zero() } else { LinComb::term(t, int(m - n)) };
            if c.product(a, b) != &want {
                return Ok(Verdict::Fail(format!("[v({n}), v({m})] is wrong")));
            }
            checked += 1;
        }
    }
    Ok(Verdict::Pass(format!("n-products exact, {checked} window pairs satisfy the Witt relation")))
}

fn pseudoderivation_closure() -> Result<Verdict> {
    let p = curr_build(hopf(LieData::aff1(), 4), &spin_factor())?;
    let mut ders = Vec::new();
    for a in 0..p.rank() {
        let la = left_mul(&p, &p.basis_element(a))?;
        for b in 0..p.rank() {
            let lb = left_mul(&p, &p.basis_element(b))?;
            for (h, d) in cend_bracket(&p, &la, &lb)? {
                if let Some(w) = is_pseudoderivation(&p, &d)? {
                    return Ok(Verdict::Fail(format!("[L_{a} * L_{b}] coefficient {h} fails on {:?}", w.tuple)));
                }
                ders.push(d);
            }
        }
    }
    let mut pairs = 0;
    for d in &ders {
        for e in &ders {
            for (_, c) in cend_bracket(&p, d, e)? {
                if is_pseudoderivation(&p, &c)?.is_some() {
                    return Ok(Verdict::Fail("a bracket of pseudoderivations is not one".into()));
                }
            }
            pairs += 1;
        }
    }
    Ok(Verdict::Pass(format!("{} coefficients, {pairs} brackets, Curr J(f) over U(aff(1))", ders.len())))
}

fn tkk_field() -> Result<Verdict> {
    let oracle = ordinary_tkk(&OrdinaryAlgebra::field())?;
    if oracle.algebra.find_isomorphism(&OrdinaryAlgebra::sl2(), &IsoSearch::default()).is_none() {
        return Ok(Verdict::Fail("ordinary TKK of k is not sl2".into()));
    }
    let k = curr_build(hopf(LieData::abelian(1), 4), &OrdinaryAlgebra::field())?;
    let t = tkk_build(&k, 1)?;
    if t.algebra.rank() != 3 || !check_variety(&t.algebra, Variety::Lie)?.passed() {
        return Ok(Verdict::Fail(format!("T(Curr k) has rank {} or is not Lie", t.algebra.rank())));
    }
    Ok(match current_iso_check(&t.algebra, &OrdinaryAlgebra::sl2(), &IsoSearch::default())? {
        IsoOutcome::Iso(_) => Verdict::Pass("T(Curr k) rank 3, Lie, isomorphic to Curr sl2".into()),
        IsoOutcome::Fail(why) => Verdict::Fail(why),
    })
}

fn tkk_functoriality() -> Result<Verdict> {
    let oracle = ordinary_tkk(&spin_factor())?;
    let p = curr_build(hopf(LieData::abelian(1), 4), &spin_factor())?;
    let t = tkk_build(&p, 1)?;
    if t.algebra.rank() != oracle.algebra.dim() {
        return Ok(Verdict::Fail(format!("rank {} vs dim T(J(f)) = {}", t.algebra.rank(), oracle.algebra.dim())));
    }
    Ok(match current_iso_check(&t.algebra, &oracle.algebra, &IsoSearch::default())? {
        IsoOutcome::Iso(_) => Verdict::Pass(format!("T(Curr J(f)) = Curr T(J(f)), rank {}", t.algebra.rank())),
        IsoOutcome::Fail(why) => Verdict::Fail(why),
    })
}

/// `Σ c (e^(μ) ⊗ 1) ⊗_H (e^(ν) ⊗ [a_α b_β])` where the H-part `e^(α) S(e^(β-ν))`
/// is computed either by the closed sign rule or by the true antipode.
fn closed_formula(p: &PseudoAlgebra, g: &OrdinaryAlgebra, a: &PModuleElement, b: &PModuleElement, true_antipode: bool) -> Result<CanonicalTensor> {
    let h = p.hopf();
    let mut terms = LinComb::zero();
    for ((alpha, i), ca) in a {
        for ((beta, j), cb) in b {
            let bracket = g.product(*i, *j);
            for nu in beta.sub_indices() {
                let rest = beta.checked_sub(&nu).expect("sub-index");
                let head = if true_antipode {
                    h.mul(&HElement::basis(alpha.clone()), &h.antipode_monomial(&rest)?)?
                } else {
                    let sign = if rest.degree() % 2 == 0 { int(1) } else { int(-1) };
                    h.pbw_mul(alpha, &rest)?.scale(&sign)
                };
                for (mu, ch) in &head {
                    for (k, ck) in bracket.iter().enumerate() {
                        terms.add_term((vec![mu.clone()], nu.clone(), k), ca * cb * ch * ck);
                    }
                }
            }
        }
    }
    Ok(CanonicalTensor::from_terms(2, terms))
}

fn closed_bracket_formula() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let sl2 = OrdinaryAlgebra::sl2();
    let aff = curr_build(hopf(LieData::aff1(), 8), &sl2)?;
    let plane = curr_build(hopf(LieData::abelian(2), 8), &sl2)?;
    let mut literal_mismatch = None;
    for i in 0..100 {
        let a = random_element(&mut rng, 2, 3, 3);
        let b = random_element(&mut rng, 2, 3, 3);
        let on_aff = aff.mul_elements(&a, &b)?;
        if closed_formula(&aff, &sl2, &a, &b, true)? != on_aff {
            return Ok(Verdict::Fail(format!("pair {i}: antipode form disagrees over U(aff(1))")));
        }
        if closed_formula(&plane, &sl2, &a, &b, false)? != plane.mul_elements(&a, &b)? {
            return Ok(Verdict::Fail(format!("pair {i}: closed formula disagrees over U(abelian^2)")));
        }
        if literal_mismatch.is_none() && closed_formula(&aff, &sl2, &a, &b, false)? != on_aff {
            literal_mismatch = Some(i);
        }
    }
    // S(e1 e2) = e1 e2 - e2 in U(aff(1)), so the sign rule drops a term.
    let h = aff.hopf();
    let mixed = MultiIndex(vec![1, 1]);
    let sign_rule_holds = h.antipode_monomial(&mixed)? == HElement::basis(mixed.clone());
    match literal_mismatch {
        Some(i) if !sign_rule_holds => Ok(Verdict::Deviation(format!(
            "sign rule (-1)^|b-v| fails over U(aff(1)) from pair {i} (S(e1e2) = e1e2 - e2); \
             exact over U(abelian^2) and with the true antipode over U(aff(1)), 100 pairs each"
        ))),
        Some(i) => Ok(Verdict::Fail(format!("pair {i} disagrees for an unexplained reason"))),
        None => Ok(Verdict::Pass("100 pairs over U(aff(1)) and U(abelian^2)".into())),
    }
}

fn commuting_coefficients() -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let sl2 = OrdinaryAlgebra::sl2();
    let p = curr_build(hopf(LieData::aff1(), 8), &sl2)?;
    let direction = |rng: &mut ChaCha8Rng| -> Vec<Scalar> { (0..3).map(|_| int(rng.gen_range(-2..=2))).collect() };
    let along = |rng: &mut ChaCha8Rng, x: &[Scalar], noise: bool| -> PModuleElement {
        let mut p = PModuleElement::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let alpha = random_multi(rng, 2, 2);
            let c = random_coeff(rng);
            for (k, xk) in x.iter().enumerate() {
                p.add_term((alpha.clone(), k), &c * xk);
            }
            if noise && rng.gen_bool(0.3) {
                p.add_term((alpha, rng.gen_range(0..3)), random_coeff(rng));
            }
        }
        p
    };
    let coefficient_brackets_vanish = |a: &PModuleElement, b: &PModuleElement| {
        let coeffs = |p: &PModuleElement| {
            let mut by_alpha: std::collections::BTreeMap<MultiIndex, Vec<Scalar>> = Default::default();
            for ((alpha, k), c) in p {
                by_alpha.entry(alpha.clone()).or_insert_with(|| vec![int(0); 3])[*k] = c.clone();
            }
            by_alpha
        };
        let (ca, cb) = (coeffs(a), coeffs(b));
        ca.values().all(|x| cb.values().all(|y| sl2.mul(x, y).iter().all(|c| *c == int(0))))
    };
    for i in 0..100 {
        let x = direction(&mut rng);
        let (a, b) = (along(&mut rng, &x, false), along(&mut rng, &x, false));
        if !p.mul_elements(&a, &b)?.is_zero() {
            return Ok(Verdict::Fail(format!("pair {i}: commuting coefficients give a nonzero bracket")));
        }
    }
    let mut zero_brackets = 0;
    for i in 0..1000 {
        let x = direction(&mut rng);
        let (a, b) = (along(&mut rng, &x, true), along(&mut rng, &x, true));
        if p.mul_elements(&a, &b)?.is_zero() {
            zero_brackets += 1;
            if !coefficient_brackets_vanish(&a, &b) {
                return Ok(Verdict::Fail(format!("trial {i}: [a*b] = 0 with a noncommuting coefficient pair")));
            }
        }
    }
    Ok(Verdict::Pass(format!("100 forward pairs; 1000 trials, {zero_brackets} with [a*b] = 0, no counterexample")))
}

fn annihilation_slice() -> Result<Verdict> {
    let m2 = OrdinaryAlgebra::matrices2();
    let p = curr_build(hopf(LieData::aff1(), 6), &m2)?;
    let win = annihilation_build(&p, 2)?;
    let zero = MultiIndex::zero(2);
    let slice: Option<Vec<usize>> = (0..4).map(|k| win.index_of(&WindowKey::Annihilation(zero.clone(), k))).collect();
    let Some(a) = slice.and_then(|s| win.restrict(&s)) else {
        return Ok(Verdict::Fail("degree-0 slice is not closed".into()));
    };
    let same = (0..4).all(|i| (0..4).all(|j| a.product(i, j) == m2.product(i, j)));
    Ok(verdict(same, "degree-0 slice of A(Curr M2) equals M2".into()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "hopf-axioms", limit: Some(Duration::from_secs(15)), run: hopf_axioms },
        Criterion { id: 2, name: "fourier-inverses", limit: None, run: fourier_inverses },
        Criterion { id: 3, name: "canonical-form", limit: None, run: canonical_forms },
        Criterion { id: 4, name: "variety-checks", limit: Some(Duration::from_secs(60)), run: variety_checks },
        Criterion { id: 5, name: "plus-minus", limit: None, run: plus_minus_functors },
        Criterion { id: 6, name: "virasoro-witt", limit: Some(Duration::from_secs(5)), run: virasoro_witt },
        Criterion { id: 7, name: "pseudoderivations", limit: Some(Duration::from_secs(60)), run: pseudoderivation_closure },
        Criterion { id: 8, name: "tkk-field", limit: Some(Duration::from_secs(10)), run: tkk_field },
        Criterion { id: 9, name: "tkk-functoriality", limit: Some(Duration::from_secs(120)), run: tkk_functoriality },
        Criterion { id: 10, name: "closed-bracket-formula", limit: None, run: closed_bracket_formula },
        Criterion { id: 11, name: "commuting-coefficients", limit: None, run: commuting_coefficients },
        Criterion { id: 12, name: "annihilation-slice", limit: None, run: annihilation_slice },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let slow = c.limit.is_some_and(|l| elapsed > l);
        let (tag, detail) = match outcome {
            Ok(Verdict::Pass(d)) if !slow => ("PASS", d),
            Ok(Verdict::Pass(d)) => ("FAIL", format!("{d}; over the {:?} limit", c.limit.unwrap())),
            Ok(Verdict::Fail(d)) => ("FAIL", d),
            Ok(Verdict::Deviation(d)) => ("FAIL*", d),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag:5} {:2} {:24} {:8.2}s  {detail}", c.id, c.name, elapsed.as_secs_f64());
    }
    println!("FAIL* marks a criterion that does not hold as stated; the line names the counterexample.");
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
