//! Conformal endomorphisms of `H ⊗ V`, pseudoderivations, the operators
//! `U_{a,b}`, the H-module `S_0(J)` and the Lie pseudoalgebra
//! `T(J) = J⁻ ⊕ S_0(J) ⊕ J⁺`.
//!
//! A conformal endomorphism `φ` is stored by its values `φ * (1 ⊗ v_j)` in
//! ambient coordinates of `H^⊗2 ⊗ V`; arity-2 families over `Cend` (the
//! Fourier-coefficient families of a pseudoproduct) are stored in the
//! canonical form `Σ (h ⊗ 1) ⊗_H φ_h`, keyed by the PBW monomial `h`.

use std::collections::BTreeMap;

use num::One;
use rayon::prelude::*;

use crate::constructions::current_part;
use crate::dual::{fourier, FourierKind};
use crate::error::{Error, Result};
use crate::hopf::{HElement, HopfAlgebra, MultiIndex, TensorElement};
use crate::linalg::{Echelon, Matrix};
use crate::ordinary::{IsoSearch, OrdinaryAlgebra};
use crate::pseudo::{permute_ambient, Ambient, CanonicalTensor, PModuleElement, Permutation, PseudoAlgebra, Sector};
use crate::scalar::{LinComb, Scalar};
use crate::varieties::{check_variety, Variety, Witness};

/// Coordinate of a conformal endomorphism: the coefficient of
/// `(s_1 ⊗ s_2) ⊗ v_k` in `φ * (1 ⊗ v_j)`.
pub type CendKey = (usize, Vec<MultiIndex>, usize);

/// A conformal endomorphism `φ` with `φ(h a) = (1 ⊗ h) φ(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CendElement {
    values: Vec<Ambient>,
}

impl CendElement {
    pub fn zero(rank: usize) -> Self {
        Self { values: vec![Ambient::zero(); rank] }
    }

    /// `values[j] = φ * (1 ⊗ v_j)` in ambient coordinates.
    pub fn from_values(values: Vec<Ambient>) -> Self {
        Self { values }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, j: usize) -> &Ambient {
        &self.values[j]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(LinComb::is_zero)
    }

    pub fn coords(&self) -> LinComb<CendKey> {
        let mut out = LinComb::zero();
        for (j, v) in self.values.iter().enumerate() {
            for ((slots, k), c) in v {
                out.add_term((j, slots.clone(), *k), c.clone());
            }
        }
        out
    }

    pub fn from_coords(rank: usize, coords: &LinComb<CendKey>) -> Self {
        let mut values = vec![Ambient::zero(); rank];
        for ((j, slots, k), c) in coords {
            values[*j].add_term((slots.clone(), *k), c.clone());
        }
        Self { values }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self { values: self.values.iter().map(|v| v.scale(c)).collect() }
    }

    /// The H-module structure `(h φ) * a = (h ⊗ 1)(φ * a)`.
    pub fn act(&self, hopf: &HopfAlgebra, h: &MultiIndex) -> Result<Self> {
        if h.is_zero() {
            return Ok(self.clone());
        }
        let mut values = Vec::with_capacity(self.values.len());
        for v in &self.values {
            let mut out = Ambient::zero();
            for ((slots, k), c) in v {
                for (mu, cm) in &hopf.pbw_mul(h, &slots[0])? {
                    let mut s = slots.clone();
                    s[0] = mu.clone();
                    out.add_term((s, *k), c * cm);
                }
            }
            values.push(out);
        }
        Ok(Self { values })
    }
}

/// `L_a` with `L_a * (1 ⊗ v_j) = a * (1 ⊗ v_j)`.
pub fn left_mul(p: &PseudoAlgebra, a: &PModuleElement) -> Result<CendElement> {
    let amb = p.element_ambient(a);
    let values = (0..p.rank())
        .map(|j| p.mul_ambient(&amb, &p.element_ambient(&p.basis_element(j))))
        .collect::<Result<Vec<_>>>()?;
    Ok(CendElement { values })
}

/// `φ * T` for `T ∈ H^⊗n ⊗_H M` in ambient coordinates: each
/// `(g_1, ..., g_n) ⊗ v_k` becomes `(p_1, (g_1, ..., g_n) Δ^[n](p_2)) ⊗ v_l`
/// summed over `φ * v_k = Σ (p_1, p_2) ⊗ v_l`.
pub fn cend_apply_ambient(p: &PseudoAlgebra, phi: &CendElement, t: &Ambient) -> Result<Ambient> {
    let h = p.hopf();
    let mut out = Ambient::zero();
    for ((g, k), c) in t {
        let n = g.len();
        let g_tensor = TensorElement::basis(g.clone());
        for ((ps, l), cp) in &phi.values[*k] {
            let split = h.coproduct_n(&HElement::basis(ps[1].clone()), n)?;
            let moved = h.tensor_mul(&g_tensor, &split)?;
            for (slots, cm) in &moved {
                let mut key = Vec::with_capacity(n + 1);
                key.push(ps[0].clone());
                key.extend(slots.iter().cloned());
                out.add_term((key, *l), c * cp * cm);
            }
        }
    }
    Ok(out)
}

/// `φ * m` in canonical form.
pub fn cend_apply(p: &PseudoAlgebra, phi: &CendElement, m: &PModuleElement) -> Result<CanonicalTensor> {
    let amb = cend_apply_ambient(p, phi, &p.element_ambient(m))?;
    p.from_ambient(2, &amb)
}

/// Arity-2 family `Σ (h ⊗ 1) ⊗_H φ_h` over `Cend`.
pub type CendFamily = BTreeMap<MultiIndex, CendElement>;

/// Reads the family off its action: `values[j] = F * (1 ⊗ v_j)` in
/// `H^⊗3 ⊗ V`, which equals `Σ (h φ_h(1), φ_h(2), ...)`; the inverse
/// Fourier transform on the first two slots separates `h`.
fn family_from_action(p: &PseudoAlgebra, values: &[Ambient]) -> Result<CendFamily> {
    let h = p.hopf();
    let r = p.rank();
    let mut out: BTreeMap<MultiIndex, Vec<Ambient>> = BTreeMap::new();
    for (j, v) in values.iter().enumerate() {
        for ((slots, k), c) in v {
            let head = TensorElement::basis(vec![slots[0].clone(), slots[1].clone()]);
            for (pair, cp) in &fourier(h, FourierKind::Finv, &head)? {
                let entry = out.entry(pair[0].clone()).or_insert_with(|| vec![Ambient::zero(); r]);
                entry[j].add_term((vec![pair[1].clone(), slots[2].clone()], *k), c * cp);
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|(m, vals)| (m, CendElement { values: vals }))
        .filter(|(_, e)| !e.is_zero())
        .collect())
}

/// `[φ * ψ]`, determined by `[φ*ψ] * a = φ*(ψ*a) - (σ12 ⊗ id) ψ*(φ*a)`.
pub fn cend_bracket(p: &PseudoAlgebra, phi: &CendElement, psi: &CendElement) -> Result<CendFamily> {
    let swap = Permutation::transposition(3, 0, 1);
    let values = (0..p.rank())
        .into_par_iter()
        .map(|j| -> Result<Ambient> {
            let v = p.element_ambient(&p.basis_element(j));
            let a = cend_apply_ambient(p, phi, &cend_apply_ambient(p, psi, &v)?)?;
            let b = cend_apply_ambient(p, psi, &cend_apply_ambient(p, phi, &v)?)?;
            Ok(&a - &permute_ambient(&swap, &b))
        })
        .collect::<Result<Vec<_>>>()?;
    family_from_action(p, &values)
}

/// Checks `T*(a*b) = (T*a)*b + (σ12 ⊗ id)(a*(T*b))` on all basis pairs;
/// returns the first failing pair.
pub fn is_pseudoderivation(p: &PseudoAlgebra, t: &CendElement) -> Result<Option<Witness>> {
    let r = p.rank();
    let swap = Permutation::transposition(3, 0, 1);
    let basis: Vec<Ambient> = (0..r).map(|j| p.element_ambient(&p.basis_element(j))).collect();
    let found = (0..r * r).into_par_iter().map(|idx| -> Result<Option<Witness>> {
        let (a, b) = (idx / r, idx % r);
        let lhs = cend_apply_ambient(p, t, p.ambient_entry(a, b))?;
        let first = p.mul_ambient(t.value(a), &basis[b])?;
        let second = permute_ambient(&swap, &p.mul_ambient(&basis[a], t.value(b))?);
        let total = &(&lhs - &first) - &second;
        if total.is_zero() {
            return Ok(None);
        }
        Ok(Some(Witness { tuple: vec![a, b], residual: p.from_ambient(3, &total)? }))
    });
    found
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()
        .map(Option::flatten)
}

/// `L_a + D` in the formal direct sum `L(J) ⊕ Derr(J)`, with the first part
/// stored as the operator `L_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureElement {
    pub mult: CendElement,
    pub der: CendElement,
}

/// Coordinates of a structure element: `(false, ...)` for the `L` part,
/// `(true, ...)` for the derivation part.
pub type StructureKey = (bool, CendKey);

impl StructureElement {
    pub fn zero(rank: usize) -> Self {
        Self { mult: CendElement::zero(rank), der: CendElement::zero(rank) }
    }

    pub fn from_mult(p: &PseudoAlgebra, a: &PModuleElement) -> Result<Self> {
        Ok(Self { mult: left_mul(p, a)?, der: CendElement::zero(p.rank()) })
    }

    pub fn is_zero(&self) -> bool {
        self.mult.is_zero() && self.der.is_zero()
    }

    /// `Σ* = -L_a + D`.
    pub fn star(&self) -> Self {
        Self { mult: self.mult.scale(&-Scalar::one()), der: self.der.clone() }
    }

    pub fn coords(&self) -> LinComb<StructureKey> {
        let mut out = LinComb::zero();
        for (k, c) in &self.mult.coords() {
            out.add_term((false, k.clone()), c.clone());
        }
        for (k, c) in &self.der.coords() {
            out.add_term((true, k.clone()), c.clone());
        }
        out
    }

    pub fn from_coords(rank: usize, coords: &LinComb<StructureKey>) -> Self {
        let mult = coords.iter().filter(|((d, _), _)| !d).map(|((_, k), c)| (k.clone(), c.clone())).collect();
        let der = coords.iter().filter(|((d, _), _)| *d).map(|((_, k), c)| (k.clone(), c.clone())).collect();
        Self { mult: CendElement::from_coords(rank, &mult), der: CendElement::from_coords(rank, &der) }
    }

    pub fn act(&self, hopf: &HopfAlgebra, h: &MultiIndex) -> Result<Self> {
        Ok(Self { mult: self.mult.act(hopf, h)?, der: self.der.act(hopf, h)? })
    }

    /// `Σ * b = L_a * b + D * b` in ambient coordinates.
    pub fn apply_ambient(&self, p: &PseudoAlgebra, b: &Ambient) -> Result<Ambient> {
        Ok(&cend_apply_ambient(p, &self.mult, b)? + &cend_apply_ambient(p, &self.der, b)?)
    }

    pub fn apply(&self, p: &PseudoAlgebra, b: &PModuleElement) -> Result<CanonicalTensor> {
        p.from_ambient(2, &self.apply_ambient(p, &p.element_ambient(b))?)
    }
}

/// Arity-2 family `Σ (h ⊗ 1) ⊗_H Σ_h` over `S(J)`, in coordinates.
pub type StructureFamily = LinComb<(MultiIndex, StructureKey)>;

fn family_coords(f: &CendFamily, der: bool) -> StructureFamily {
    let mut out = StructureFamily::zero();
    for (h, e) in f {
        for (k, c) in &e.coords() {
            out.add_term((h.clone(), (der, k.clone())), c.clone());
        }
    }
    out
}

/// Splits a family into its coefficients.
pub fn family_members(rank: usize, f: &StructureFamily) -> BTreeMap<MultiIndex, StructureElement> {
    let mut grouped: BTreeMap<MultiIndex, LinComb<StructureKey>> = BTreeMap::new();
    for ((h, k), c) in f {
        grouped.entry(h.clone()).or_default().add_term(k.clone(), c.clone());
    }
    grouped.into_iter().map(|(h, c)| (h, StructureElement::from_coords(rank, &c))).collect()
}

/// `(σ12 ⊗_H id)` on a family: `(1 ⊗ h) ⊗_H Σ = Σ (S(h_(1)) ⊗ 1) ⊗_H h_(2) Σ`.
pub fn family_swap(p: &PseudoAlgebra, f: &StructureFamily) -> Result<StructureFamily> {
    let hopf = p.hopf();
    let mut out = StructureFamily::zero();
    for (h, member) in family_members(p.rank(), f) {
        for (pieces, cp) in &hopf.coproduct_monomial(&h, 2) {
            let s = hopf.antipode_monomial(&pieces[0])?;
            let moved = member.act(hopf, &pieces[1])?;
            for (k, ck) in &moved.coords() {
                for (mu, cs) in &s {
                    out.add_term((mu.clone(), k.clone()), cp * ck * cs);
                }
            }
        }
    }
    Ok(out)
}

/// `U_{a,b} = L_{a*b} + [L_a * L_b]` as a family over `S(J)`.
pub fn u_op(p: &PseudoAlgebra, a: &PModuleElement, b: &PModuleElement) -> Result<StructureFamily> {
    u_family(p, a, b, false)
}

/// `U*_{a,b} = -L_{a*b} + [L_a * L_b]`.
pub fn u_star_op(p: &PseudoAlgebra, a: &PModuleElement, b: &PModuleElement) -> Result<StructureFamily> {
    u_family(p, a, b, true)
}

fn u_family(p: &PseudoAlgebra, a: &PModuleElement, b: &PModuleElement, star: bool) -> Result<StructureFamily> {
    let prod = p.mul_elements(a, b)?;
    let mut mult = CendFamily::new();
    for (hs, c) in prod.coefficients() {
        let l = left_mul(p, &c)?;
        mult.insert(hs[0].clone(), if star { l.scale(&-Scalar::one()) } else { l });
    }
    let br = cend_bracket(p, &left_mul(p, a)?, &left_mul(p, b)?)?;
    let mut out = family_coords(&mult, false);
    out += &family_coords(&br, true);
    Ok(out)
}

/// `[(M_1 + D_1) * (M_2 + D_2)] = [D_1 * M_2] - σ12 [D_2 * M_1] + [M_1 * M_2] + [D_1 * D_2]`,
/// where `[D * L_b] = L_{D*b}` for a pseudoderivation `D`.
pub fn structure_bracket(p: &PseudoAlgebra, x: &StructureElement, y: &StructureElement) -> Result<StructureFamily> {
    let mut out = family_coords(&cend_bracket(p, &x.der, &y.mult)?, false);
    let back = family_coords(&cend_bracket(p, &y.der, &x.mult)?, false);
    out -= &family_swap(p, &back)?;
    out += &family_coords(&cend_bracket(p, &x.mult, &y.mult)?, true);
    out += &family_coords(&cend_bracket(p, &x.der, &y.der)?, true);
    Ok(out)
}

/// H-generators of `S_0(J)` with the scalar echelon of their monomial
/// multiples `e^(γ) u_l`, `|γ| <= bound`.
#[derive(Clone, Debug)]
pub struct S0Basis {
    pub generators: Vec<StructureElement>,
    /// `(a, b, h)`: the generator is the `h`-coefficient of `U_{v_a, v_b}`.
    pub provenance: Vec<(usize, usize, MultiIndex)>,
    pub bound: u32,
    echelon: Echelon<StructureKey>,
    rows: Vec<(MultiIndex, usize)>,
}

impl S0Basis {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Scalar rank of the span of multiples at the bound.
    pub fn rank_at_bound(&self) -> usize {
        self.echelon.rank()
    }

    /// Writes `x` as `Σ c e^(γ) ⊗ u_l` over the generators, if it lies in the
    /// span at the bound.
    pub fn express(&self, x: &StructureElement) -> Option<PModuleElement> {
        let combo = self.echelon.express(&x.coords())?;
        Some(combo.map_keys(|&i| self.rows[i].clone()))
    }
}

/// Collects the coefficients of `U_{v_a, v_b}` over all basis pairs, in
/// `(h, a, b)` order, and keeps those not already in the H-span of earlier
/// ones. Fails when the multiples of the kept generators are dependent at
/// the bound, since then `S_0(J)` is not visibly free.
pub fn s0_basis(p: &PseudoAlgebra, bound: u32) -> Result<S0Basis> {
    let r = p.rank();
    let hopf = p.hopf();
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|a| (0..r).map(move |b| (a, b))).collect();
    let families = pairs
        .par_iter()
        .map(|&(a, b)| u_op(p, &p.basis_element(a), &p.basis_element(b)).map(|f| ((a, b), f)))
        .collect::<Result<Vec<_>>>()?;
    let mut candidates: Vec<(MultiIndex, usize, usize, StructureElement)> = Vec::new();
    for ((a, b), f) in families {
        for (h, member) in family_members(r, &f) {
            if !member.is_zero() {
                candidates.push((h, a, b, member));
            }
        }
    }
    candidates.sort_by(|x, y| (&x.0, x.1, x.2).cmp(&(&y.0, y.1, y.2)));
    let monomials = MultiIndex::up_to_degree(hopf.dim(), bound);
    let mut basis = S0Basis {
        generators: Vec::new(),
        provenance: Vec::new(),
        bound,
        echelon: Echelon::new(),
        rows: Vec::new(),
    };
    for (h, a, b, member) in candidates {
        if basis.echelon.contains(&member.coords()) {
            continue;
        }
        let l = basis.generators.len();
        for gamma in &monomials {
            let multiple = member.act(hopf, gamma)?;
            basis.rows.push((gamma.clone(), l));
            if basis.echelon.insert(&multiple.coords()).is_some() {
                return Err(Error::S0NotFree {
                    bound,
                    detail: format!(
                        "e^{gamma} times the {h}-coefficient of U({}, {}) depends on earlier generators",
                        p.names()[a],
                        p.names()[b]
                    ),
                });
            }
        }
        basis.generators.push(member);
        basis.provenance.push((a, b, h));
    }
    Ok(basis)
}

/// `T(J)` with its sectors and the embedding of the `S_0` sector.
#[derive(Clone, Debug)]
pub struct TkkAlgebra {
    pub algebra: PseudoAlgebra,
    pub s0: S0Basis,
    pub rank: usize,
}

impl TkkAlgebra {
    pub fn minus(&self, a: usize) -> usize {
        a
    }

    pub fn zero_sector(&self, l: usize) -> usize {
        self.rank + l
    }

    pub fn plus(&self, a: usize) -> usize {
        self.rank + self.s0.len() + a
    }

    /// The sector of each basis index.
    pub fn sector_of(&self, i: usize) -> Sector {
        self.algebra.sectors().expect("TKK algebras carry sectors")[i]
    }
}

fn relabel(t: &CanonicalTensor, offset: usize, sign: &Scalar) -> LinComb<crate::pseudo::CanonKey> {
    t.terms().map_keys(|(h, g, k)| (h.clone(), g.clone(), k + offset)).scale(sign)
}

/// Canonical entry for a family over `S(J)` expressed in the `S_0` generators.
fn express_family(
    p: &PseudoAlgebra,
    s0: &S0Basis,
    f: &StructureFamily,
    offset: usize,
    what: &str,
) -> Result<LinComb<crate::pseudo::CanonKey>> {
    let mut out = LinComb::zero();
    for (h, member) in family_members(p.rank(), f) {
        if member.is_zero() {
            continue;
        }
        let e = s0.express(&member).ok_or_else(|| Error::S0NotFree {
            bound: s0.bound,
            detail: format!("the {h}-coefficient of {what} is outside the span of S0 at the bound"),
        })?;
        for ((gamma, l), c) in &e {
            out.add_term((vec![h.clone()], gamma.clone(), offset + l), c.clone());
        }
    }
    Ok(out)
}

/// Assembles `T(J)`: `[a⁻*b⁺] = U_{a,b}`, `[a⁺*b⁻] = U*_{a,b}`,
/// `[a^±*b^±] = 0`, `[Σ*a⁻] = (Σ*a)⁻`, `[a⁻*Σ] = -σ12(Σ*a)⁻`,
/// `[Σ*a⁺] = (Σ**a)⁺`, `[a⁺*Σ] = -σ12(Σ**a)⁺`, and the structure bracket on `S_0`.
pub fn tkk_build(j: &PseudoAlgebra, bound: u32) -> Result<TkkAlgebra> {
    if let Some(fail) = check_variety(j, Variety::Jordan)?.first_failure() {
        let w = fail.witness.as_ref().expect("failures carry witnesses");
        return Err(Error::JordanPreconditionFailed(format!(
            "{} fails at basis tuple {:?}",
            fail.name,
            w.tuple.iter().map(|i| i + 1).collect::<Vec<_>>()
        )));
    }
    let r = j.rank();
    let s0 = s0_basis(j, bound)?;
    let s = s0.len();
    let n = 2 * r + s;
    let minus = |a: usize| a;
    let zero = |l: usize| r + l;
    let plus = |a: usize| r + s + a;
    let swap = Permutation::transposition(2, 0, 1);
    let one = Scalar::one();
    let neg = -Scalar::one();
    let mut table = vec![vec![LinComb::zero(); n]; n];

    let pair_entries = (0..r * r)
        .into_par_iter()
        .map(|idx| -> Result<(usize, usize, LinComb<_>, LinComb<_>)> {
            let (a, b) = (idx / r, idx % r);
            let (va, vb) = (j.basis_element(a), j.basis_element(b));
            let u = express_family(j, &s0, &u_op(j, &va, &vb)?, r, "U")?;
            let us = express_family(j, &s0, &u_star_op(j, &va, &vb)?, r, "U*")?;
            Ok((a, b, u, us))
        })
        .collect::<Result<Vec<_>>>()?;
    for (a, b, u, us) in pair_entries {
        table[minus(a)][plus(b)] = u;
        table[plus(a)][minus(b)] = us;
    }
    for (l, sigma) in s0.generators.iter().enumerate() {
        let star = sigma.star();
        for a in 0..r {
            let va = j.basis_element(a);
            let act = sigma.apply(j, &va)?;
            let act_star = star.apply(j, &va)?;
            table[zero(l)][minus(a)] = relabel(&act, minus(0), &one);
            table[minus(a)][zero(l)] = relabel(&j.sigma_act(&swap, &act)?, minus(0), &neg);
            table[zero(l)][plus(a)] = relabel(&act_star, plus(0), &one);
            table[plus(a)][zero(l)] = relabel(&j.sigma_act(&swap, &act_star)?, plus(0), &neg);
        }
    }
    let brackets = (0..s * s)
        .into_par_iter()
        .map(|idx| -> Result<(usize, usize, LinComb<_>)> {
            let (l, m) = (idx / s, idx % s);
            let f = structure_bracket(j, &s0.generators[l], &s0.generators[m])?;
            Ok((l, m, express_family(j, &s0, &f, r, "a structure bracket")?))
        })
        .collect::<Result<Vec<_>>>()?;
    for (l, m, e) in brackets {
        table[zero(l)][zero(m)] = e;
    }

    let mut names: Vec<String> = j.names().iter().map(|x| format!("{x}-")).collect();
    names.extend((1..=s).map(|l| format!("u{l}")));
    names.extend(j.names().iter().map(|x| format!("{x}+")));
    let mut sectors = vec![Sector::Minus; r];
    sectors.extend(vec![Sector::Zero; s]);
    sectors.extend(vec![Sector::Plus; r]);
    let table = table.into_iter().map(|row| row.into_iter().map(|t| CanonicalTensor::from_terms(2, t)).collect()).collect();
    let algebra = PseudoAlgebra::new(j.hopf_arc().clone(), names, table)?.with_sectors(sectors)?;
    check_sector_grammar(&algebra)?;
    if let Some(fail) = check_variety(&algebra, Variety::Lie)?.first_failure() {
        return Err(Error::Internal(format!(
            "T(J) fails {} at basis tuple {:?}",
            fail.name,
            fail.witness.as_ref().map(|w| w.tuple.clone()).unwrap_or_default()
        )));
    }
    Ok(TkkAlgebra { algebra, s0, rank: r })
}

/// `[J⁺*J⁺] = [J⁻*J⁻] = 0`, `[J∓*J±] ⊆ S_0`, and `S_0` preserves each sector.
pub fn check_sector_grammar(t: &PseudoAlgebra) -> Result<()> {
    let sectors = t.sectors().ok_or_else(|| Error::Internal("algebra has no sector labels".into()))?;
    for (i, si) in sectors.iter().enumerate() {
        for (j, sj) in sectors.iter().enumerate() {
            let allowed: &[Sector] = match (si, sj) {
                (Sector::Minus, Sector::Minus) | (Sector::Plus, Sector::Plus) => &[],
                (Sector::Minus, Sector::Plus) | (Sector::Plus, Sector::Minus) => &[Sector::Zero],
                (Sector::Zero, other) | (other, Sector::Zero) => std::slice::from_ref(other),
            };
            for (_, _, k) in t.entry(i, j).terms().keys() {
                if !allowed.contains(&sectors[*k]) {
                    return Err(Error::Internal(format!(
                        "[{} * {}] has a component in the {} sector",
                        t.names()[i],
                        t.names()[j],
                        sectors[*k].label()
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Result of comparing a pseudoalgebra with a current algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    /// Columns are the images of the pseudoalgebra's generators in the basis of `g`.
    Iso(Matrix),
    Fail(String),
}

/// Searches for a scalar basis change of `V` carrying the table of `lhs` to
/// that of `Curr g`. A scalar change of basis cannot create or remove
/// nontrivial H-parts, so a table with any is rejected outright.
pub fn current_iso_check(lhs: &PseudoAlgebra, g: &OrdinaryAlgebra, options: &IsoSearch) -> Result<IsoOutcome> {
    if lhs.rank() != g.dim() {
        return Err(Error::RankMismatch(format!("rank {} against dimension {}", lhs.rank(), g.dim())));
    }
    let Some(ordinary) = current_part(lhs) else {
        return Ok(IsoOutcome::Fail("the table has nontrivial H-parts".into()));
    };
    Ok(match ordinary.find_isomorphism(g, options) {
        Some(x) => IsoOutcome::Iso(x),
        None => IsoOutcome::Fail("no basis change found".into()),
    })
}
