//! Pseudoalgebra structures on free modules `P = H ⊗ V`.
//!
//! An element of `H^⊗n ⊗_H P` has two coordinate systems:
//!
//! * the canonical form `Σ (h_1 ⊗ ... ⊗ h_{n-1} ⊗ 1) ⊗_H p`, which is unique
//!   and is what every public result is reported in;
//! * the ambient form `Σ (f_1 ⊗ ... ⊗ f_n) ⊗ v_k`, from the isomorphism
//!   `H^⊗n ⊗_H (H ⊗ V) ≅ H^⊗n ⊗ V`, in which pseudoproducts and slot
//!   permutations are plain termwise operations.
//!
//! The two are related by the Fourier transforms: canonical to ambient is
//! `F` on `(h_1, ..., h_{n-1}, g)`, and ambient to canonical is `F⁻¹`
//! followed by moving the last slot into the module.

use std::fmt;
use std::sync::Arc;

use crate::dual::{pair_eval, XElement};
use crate::error::{Error, Result};
use crate::hopf::{HElement, HopfAlgebra, MultiIndex, TensorElement};
use crate::scalar::{render_terms, LinComb, Scalar};

/// `Σ c e^(a) ⊗ v_k`, keyed by `(a, k)`.
pub type PModuleElement = LinComb<(MultiIndex, usize)>;

/// An element of `H^⊗n ⊗ V ≅ H^⊗n ⊗_H P`, keyed by `(f_1..f_n, k)`.
pub type Ambient = LinComb<(Vec<MultiIndex>, usize)>;

/// Key `(h_1..h_{n-1}, g, k)` of the canonical term `(e^(h) ⊗ 1) ⊗_H (e^(g) ⊗ v_k)`.
pub type CanonKey = (Vec<MultiIndex>, MultiIndex, usize);

/// An element of `H^⊗n ⊗_H P` in canonical form (last tensor slot `1`).
#[derive(Clone, PartialEq, Eq)]
pub struct CanonicalTensor {
    arity: usize,
    terms: LinComb<CanonKey>,
}

impl CanonicalTensor {
    pub fn zero(arity: usize) -> Self {
        assert!(arity >= 1);
        Self { arity, terms: LinComb::zero() }
    }

    pub fn from_terms(arity: usize, terms: LinComb<CanonKey>) -> Self {
        assert!(terms.keys().all(|(h, _, _)| h.len() + 1 == arity), "canonical key arity");
        Self { arity, terms }
    }

    /// The arity-1 tensor `1 ⊗_H p`.
    pub fn lift(p: &PModuleElement) -> Self {
        Self { arity: 1, terms: p.map_keys(|(g, k)| (Vec::new(), g.clone(), *k)) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &LinComb<CanonKey> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Fourier coefficients: the module element attached to each `(h_1..h_{n-1})`.
    pub fn coefficients(&self) -> Vec<(Vec<MultiIndex>, PModuleElement)> {
        let mut out: Vec<(Vec<MultiIndex>, PModuleElement)> = Vec::new();
        for ((h, g, k), c) in &self.terms {
            match out.last_mut() {
                Some((last, p)) if last == h => p.add_term((g.clone(), *k), c.clone()),
                _ => out.push((h.clone(), PModuleElement::term((g.clone(), *k), c.clone()))),
            }
        }
        out
    }

    /// For arity 1, the underlying module element.
    pub fn as_element(&self) -> PModuleElement {
        assert_eq!(self.arity, 1);
        self.terms.map_keys(|(_, g, k)| (g.clone(), *k))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        Self { arity: self.arity, terms: &self.terms + &other.terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        Self { arity: self.arity, terms: &self.terms - &other.terms }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self { arity: self.arity, terms: self.terms.scale(c) }
    }

    /// Largest H-degree appearing in any slot.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|(h, g, _)| h.iter().map(MultiIndex::degree).max().unwrap_or(0).max(g.degree()))
            .max()
            .unwrap_or(0)
    }

    /// One row per Fourier coefficient: `(a_1|...|a_{n-1}) -> p`.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let rows: Vec<String> = self
            .coefficients()
            .iter()
            .map(|(h, p)| {
                let slots: Vec<String> = h.iter().map(|a| a.to_string()).collect();
                format!("({}) -> {}", slots.join("|"), render_element(p, names))
            })
            .collect();
        rows.join("; ")
    }
}

impl fmt::Debug for CanonicalTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..64).map(|k| format!("v{}", k + 1)).collect();
        write!(f, "[{}] {}", self.arity, self.render(&names))
    }
}

/// `c e^(a)⊗name` terms joined with signs.
pub fn render_element(p: &PModuleElement, names: &[String]) -> String {
    render_terms(p.iter().map(|((g, k), c)| (c, format!("e^{g}⊗{}", names[*k]))))
}

/// An element of `S_n`; `images[k]` is the slot the `k`-th factor moves to.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Internal(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// From 1-based images, as written in identities.
    pub fn from_one_based(images: &[usize]) -> Self {
        Self::new(images.iter().map(|&i| i - 1).collect()).expect("valid permutation")
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// The transposition of 0-based slots `i` and `j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &i)| k == i)
    }

    /// `self ∘ other`: acting by the result is acting by `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Self { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (k, &i) in self.images.iter().enumerate() {
            images[i] = k;
        }
        Self { images }
    }

    /// Extension to `S_{n+m}` fixing the last `m` slots.
    pub fn extend(&self, m: usize) -> Permutation {
        let n = self.len();
        Self { images: self.images.iter().copied().chain(n..n + m).collect() }
    }

    /// Extension to `S_{n+m}` acting on the last `m` slots, fixing the first `n`.
    pub fn shift(&self, n: usize) -> Permutation {
        Self { images: (0..n).chain(self.images.iter().map(|&i| i + n)).collect() }
    }

    pub fn apply_slots<T: Clone>(&self, slots: &[T]) -> Vec<T> {
        assert_eq!(slots.len(), self.len());
        let mut out = slots.to_vec();
        for (k, s) in slots.iter().enumerate() {
            out[self.images[k]] = s.clone();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Which part of a TKK algebra a basis element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    Minus,
    Zero,
    Plus,
}

impl Sector {
    pub fn label(self) -> &'static str {
        match self {
            Sector::Minus => "minus",
            Sector::Zero => "s0",
            Sector::Plus => "plus",
        }
    }
}

/// `H ⊗ V` with a pseudoproduct given on basis pairs.
#[derive(Clone)]
pub struct PseudoAlgebra {
    hopf: Arc<HopfAlgebra>,
    names: Vec<String>,
    table: Vec<Vec<CanonicalTensor>>,
    ambient: Vec<Vec<Ambient>>,
    sectors: Option<Vec<Sector>>,
}

impl fmt::Debug for PseudoAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PseudoAlgebra").field("names", &self.names).field("table", &self.table).finish()
    }
}

impl PseudoAlgebra {
    /// `table[i][j]` is `v_i * v_j`, an arity-2 canonical tensor.
    pub fn new(hopf: Arc<HopfAlgebra>, names: Vec<String>, table: Vec<Vec<CanonicalTensor>>) -> Result<Self> {
        let r = names.len();
        if table.len() != r || table.iter().any(|row| row.len() != r) {
            return Err(Error::RankMismatch(format!("table is not {r}x{r}")));
        }
        let dim = hopf.dim();
        for (i, row) in table.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                if entry.arity != 2 {
                    return Err(Error::ArityMismatch { expected: 2, found: entry.arity });
                }
                for (h, g, k) in entry.terms.keys() {
                    if *k >= r {
                        return Err(Error::RankMismatch(format!(
                            "product {} {} refers to basis index {}",
                            names[i],
                            names[j],
                            k + 1
                        )));
                    }
                    if h[0].dim() != dim || g.dim() != dim {
                        return Err(Error::Internal(format!(
                            "product {} {} uses multi-indices of the wrong length",
                            names[i], names[j]
                        )));
                    }
                }
                hopf.check_degree(entry.degree())?;
            }
        }
        let mut alg = Self { hopf, names, table, ambient: Vec::new(), sectors: None };
        let ambient = alg
            .table
            .iter()
            .map(|row| row.iter().map(|t| alg.to_ambient(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        alg.ambient = ambient;
        Ok(alg)
    }

    /// Builds the algebra from arity-2 ambient products.
    pub fn from_ambient_table(hopf: Arc<HopfAlgebra>, names: Vec<String>, ambient: Vec<Vec<Ambient>>) -> Result<Self> {
        let probe = Self { hopf: hopf.clone(), names: names.clone(), table: Vec::new(), ambient: Vec::new(), sectors: None };
        let table = ambient
            .iter()
            .map(|row| row.iter().map(|a| probe.from_ambient(2, a)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(hopf, names, table)
    }

    pub fn with_sectors(mut self, sectors: Vec<Sector>) -> Result<Self> {
        if sectors.len() != self.rank() {
            return Err(Error::RankMismatch(format!(
                "{} sector labels for rank {}",
                sectors.len(),
                self.rank()
            )));
        }
        self.sectors = Some(sectors);
        Ok(self)
    }

    pub fn sectors(&self) -> Option<&[Sector]> {
        self.sectors.as_deref()
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        &self.hopf
    }

    pub fn hopf_arc(&self) -> &Arc<HopfAlgebra> {
        &self.hopf
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn entry(&self, i: usize, j: usize) -> &CanonicalTensor {
        &self.table[i][j]
    }

    pub fn ambient_entry(&self, i: usize, j: usize) -> &Ambient {
        &self.ambient[i][j]
    }

    /// Same module, new table (products given canonically).
    pub fn with_table(&self, table: Vec<Vec<CanonicalTensor>>) -> Result<Self> {
        Self::new(self.hopf.clone(), self.names.clone(), table)
    }

    /// The basis element `1 ⊗ v_k`.
    pub fn basis_element(&self, k: usize) -> PModuleElement {
        PModuleElement::basis((MultiIndex::zero(self.hopf.dim()), k))
    }

    /// Left action `h · p` on `H ⊗ V`.
    pub fn act(&self, h: &HElement, p: &PModuleElement) -> Result<PModuleElement> {
        let mut out = PModuleElement::zero();
        for ((g, k), c) in p {
            for (mu, cm) in &self.hopf.mul(h, &HElement::basis(g.clone()))? {
                out.add_term((mu.clone(), *k), c * cm);
            }
        }
        Ok(out)
    }

    /// Ambient form of a module element viewed in arity 1.
    pub fn element_ambient(&self, p: &PModuleElement) -> Ambient {
        p.map_keys(|(g, k)| (vec![g.clone()], *k))
    }

    /// Canonical to ambient: `(h, 1) ⊗_H (g ⊗ v) = (h, 1) Δ^[n](g) ⊗ v`.
    pub fn to_ambient(&self, t: &CanonicalTensor) -> Result<Ambient> {
        let mut out = Ambient::zero();
        let n = t.arity;
        for ((h, g, k), c) in &t.terms {
            let mut slots = h.clone();
            slots.push(MultiIndex::zero(self.hopf.dim()));
            let moved = self.hopf.tensor_right_act(&TensorElement::basis(slots), &HElement::basis(g.clone()))?;
            debug_assert!(moved.keys().all(|s| s.len() == n));
            for (s, cs) in moved {
                out.add_term((s, *k), c * cs);
            }
        }
        Ok(out)
    }

    /// Ambient to canonical; `arity` is needed only for the zero element.
    pub fn from_ambient(&self, arity: usize, a: &Ambient) -> Result<CanonicalTensor> {
        let zero = MultiIndex::zero(self.hopf.dim());
        let raw: Vec<(TensorElement, PModuleElement)> = a
            .iter()
            .map(|((slots, k), c)| (TensorElement::term(slots.clone(), c.clone()), PModuleElement::basis((zero.clone(), *k))))
            .collect();
        self.normalize_arity(arity, &raw)
    }

    /// Canonical form of `Σ (f_1 ⊗ ... ⊗ f_n) ⊗_H p`, via
    /// `(f_1, ..., f_n) ⊗_H p = Σ (f_1 S(f_n(1)), ..., f_{n-1} S(f_n(n-1)), 1) ⊗_H f_n(n) p`.
    pub fn normalize(&self, raw: &[(TensorElement, PModuleElement)]) -> Result<CanonicalTensor> {
        let arity = raw
            .iter()
            .flat_map(|(t, _)| t.keys().map(Vec::len))
            .next()
            .ok_or_else(|| Error::Internal("cannot infer the arity of an empty tensor".into()))?;
        self.normalize_arity(arity, raw)
    }

    pub fn normalize_arity(&self, arity: usize, raw: &[(TensorElement, PModuleElement)]) -> Result<CanonicalTensor> {
        let h = &*self.hopf;
        let mut out = LinComb::zero();
        for (tensor, p) in raw {
            for (slots, c) in tensor {
                if slots.len() != arity {
                    return Err(Error::ArityMismatch { expected: arity, found: slots.len() });
                }
                let n = arity;
                let last = &slots[n - 1];
                for (pieces, cp) in &h.coproduct_monomial(last, n) {
                    let mut heads: Vec<HElement> = Vec::with_capacity(n - 1);
                    for i in 0..n - 1 {
                        let s = h.antipode_monomial(&pieces[i])?;
                        heads.push(h.mul(&HElement::basis(slots[i].clone()), &s)?);
                    }
                    let moved = self.act(&HElement::basis(pieces[n - 1].clone()), p)?;
                    let head_tensor = crate::dual::tensor_of(&heads);
                    for (hs, ch) in &head_tensor {
                        for ((g, k), cg) in &moved {
                            out.add_term((hs.clone(), g.clone(), *k), c * cp * ch * cg);
                        }
                    }
                }
            }
        }
        Ok(CanonicalTensor { arity, terms: out })
    }

    /// Right action of a monomial on a pure tensor, memo-free.
    fn slots_times(&self, slots: &[MultiIndex], x: &MultiIndex) -> Result<TensorElement> {
        if x.is_zero() {
            return Ok(TensorElement::basis(slots.to_vec()));
        }
        self.hopf.tensor_right_act(&TensorElement::basis(slots.to_vec()), &HElement::basis(x.clone()))
    }

    /// The expanded pseudoproduct in ambient coordinates: for `A` of arity
    /// `n` and `B` of arity `m`, `Σ (F Δ^[n](x)) ⊗ (G Δ^[m](y)) ⊗ v_k` where
    /// `lookup(i, j) = Σ (x ⊗ y) ⊗ v_k` is the arity-2 product of generators.
    pub fn expand_mul<'t>(
        &self,
        a: &Ambient,
        b: &Ambient,
        lookup: impl Fn(usize, usize) -> &'t Ambient,
    ) -> Result<Ambient> {
        let mut out = Ambient::zero();
        for ((f, i), ca) in a {
            for ((g, j), cb) in b {
                for ((xy, k), ct) in lookup(*i, *j) {
                    let left = self.slots_times(f, &xy[0])?;
                    let right = self.slots_times(g, &xy[1])?;
                    let coeff = ca * cb * ct;
                    for (l, cl) in &left {
                        for (r, cr) in &right {
                            let mut key = l.clone();
                            key.extend(r.iter().cloned());
                            out.add_term((key, *k), &coeff * cl * cr);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_ambient(&self, a: &Ambient, b: &Ambient) -> Result<Ambient> {
        self.expand_mul(a, b, |i, j| &self.ambient[i][j])
    }

    /// `A * B` for canonical tensors of arities `n` and `m`.
    pub fn pseudo_mul(&self, a: &CanonicalTensor, b: &CanonicalTensor) -> Result<CanonicalTensor> {
        let prod = self.mul_ambient(&self.to_ambient(a)?, &self.to_ambient(b)?)?;
        self.from_ambient(a.arity + b.arity, &prod)
    }

    /// `a * b` for module elements.
    pub fn mul_elements(&self, a: &PModuleElement, b: &PModuleElement) -> Result<CanonicalTensor> {
        let prod = self.mul_ambient(&self.element_ambient(a), &self.element_ambient(b))?;
        self.from_ambient(2, &prod)
    }

    /// `(σ ⊗_H id)(A)`.
    pub fn sigma_act(&self, sigma: &Permutation, a: &CanonicalTensor) -> Result<CanonicalTensor> {
        if sigma.len() != a.arity {
            return Err(Error::ArityMismatch { expected: a.arity, found: sigma.len() });
        }
        let amb = self.to_ambient(a)?;
        self.from_ambient(a.arity, &permute_ambient(sigma, &amb))
    }

    /// `(a ⊙_x b) = Σ ⟨x, S(h_i)⟩ c_i` for `A = Σ (h_i ⊗ 1) ⊗_H c_i`.
    pub fn x_coeff(&self, a: &CanonicalTensor, x: &XElement) -> Result<PModuleElement> {
        if a.arity != 2 {
            return Err(Error::ArityMismatch { expected: 2, found: a.arity });
        }
        let mut out = PModuleElement::zero();
        if x.is_zero() {
            return Ok(out);
        }
        for ((h, g, k), c) in &a.terms {
            let w = pair_eval(x, &self.hopf.antipode_monomial(&h[0])?);
            out.add_term((g.clone(), *k), c * w);
        }
        Ok(out)
    }

    /// `{v : (v_a ⊙_{t^v} v_b) != 0}`. Only finitely many `t^v` pair with
    /// `S(h_i)` for the finitely many `h_i` of the canonical form, namely
    /// those of degree at most the largest `|h_i|`.
    pub fn support(&self, a: usize, b: usize) -> Result<Vec<MultiIndex>> {
        let entry = &self.table[a][b];
        let bound = entry.terms.keys().map(|(h, _, _)| h[0].degree()).max();
        let Some(bound) = bound else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        for nu in MultiIndex::up_to_degree(self.hopf.dim(), bound) {
            if !self.x_coeff(entry, &XElement::basis(nu.clone()))?.is_zero() {
                out.push(nu);
            }
        }
        Ok(out)
    }

    /// Largest H-degree in the table.
    pub fn table_degree(&self) -> u32 {
        self.table.iter().flatten().map(CanonicalTensor::degree).max().unwrap_or(0)
    }

    /// Largest H-degree of a module element.
    pub fn element_degree(p: &PModuleElement) -> u32 {
        p.keys().map(|(g, _)| g.degree()).max().unwrap_or(0)
    }

    pub fn is_zero_table(&self) -> bool {
        self.table.iter().flatten().all(CanonicalTensor::is_zero)
    }
}

/// Permutes ambient slots: factor `k` moves to slot `σ(k)`.
pub fn permute_ambient(sigma: &Permutation, a: &Ambient) -> Ambient {
    if sigma.is_identity() {
        return a.clone();
    }
    a.map_keys(|(slots, k)| (sigma.apply_slots(slots), *k))
}
