//! The universal enveloping algebra `H = U(h)` of a finite-dimensional Lie
//! algebra, in the divided-power PBW basis `e^(a) = e_1^a1 ... e_n^an / a!`.

mod axioms;
mod smash;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{factorial, render_terms, LinComb, Scalar};

pub use axioms::{hopf_axiom_suite, AxiomReport, AxiomResult, HopfStructure};
pub use smash::{FiniteGroup, SmashAlgebra, SmashBasis};

/// Exponent vector of a PBW monomial, ordered deg-lex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

/// An element of `H`, as a combination of divided-power monomials.
pub type HElement = LinComb<MultiIndex>;

/// An element of `H^⊗n`.
pub type TensorElement = LinComb<Vec<MultiIndex>>;

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise `self <= other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `a! = a_1! ... a_n!`.
    pub fn factorial(&self) -> Scalar {
        self.0.iter().fold(Scalar::one(), |acc, &a| acc * factorial(a))
    }

    /// All `v` with `v <= self` componentwise, in deg-lex order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=a).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        let mut out: Vec<MultiIndex> = out.into_iter().map(MultiIndex).collect();
        out.sort();
        out
    }

    /// All monomials of exactly degree `d`, in lex order.
    pub fn of_degree(dim: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(dim: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == dim {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=d).rev() {
                prefix.push(a);
                rec(dim, d - a, prefix, out);
                prefix.pop();
            }
        }
        if dim == 0 {
            return if d == 0 { vec![MultiIndex(Vec::new())] } else { Vec::new() };
        }
        let mut out = Vec::new();
        rec(dim, d, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// All monomials of degree at most `d`, in deg-lex order.
    pub fn up_to_degree(dim: usize, d: u32) -> Vec<MultiIndex> {
        (0..=d).flat_map(|k| MultiIndex::of_degree(dim, k)).collect()
    }

    /// Every ordered decomposition `self = v_1 + ... + v_n`.
    pub fn splits(&self, n: usize) -> Vec<Vec<MultiIndex>> {
        assert!(n >= 1);
        if n == 1 {
            return vec![vec![self.clone()]];
        }
        let mut out = Vec::new();
        for first in self.sub_indices() {
            let rest = self.checked_sub(&first).expect("sub-index");
            for mut tail in rest.splits(n - 1) {
                tail.insert(0, first.clone());
                out.push(tail);
            }
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Highest degree of a term, 0 for the zero element.
pub fn element_degree(h: &HElement) -> u32 {
    h.keys().map(MultiIndex::degree).max().unwrap_or(0)
}

pub fn render_h(h: &HElement) -> String {
    render_terms(h.iter().map(|(k, c)| (c, format!("e^{k}"))))
}

pub fn render_tensor(t: &TensorElement) -> String {
    render_terms(t.iter().map(|(k, c)| {
        let slots: Vec<String> = k.iter().map(|a| format!("e^{a}")).collect();
        (c, slots.join("⊗"))
    }))
}

/// Structure constants `[e_i, e_j] = Σ_k c^k_ij e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieData {
    dim: usize,
    constants: Vec<Scalar>,
}

/// Why a set of structure constants is not a Lie algebra; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieViolation {
    /// `c^k_ij != -c^k_ji`.
    Antisymmetry(usize, usize, usize),
    Jacobi(usize, usize, usize),
}

impl fmt::Display for LieViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieViolation::Antisymmetry(i, j, k) => {
                write!(f, "antisymmetry fails at ({}, {}, {})", i + 1, j + 1, k + 1)
            }
            LieViolation::Jacobi(i, j, k) => {
                write!(f, "Jacobi identity fails at ({}, {}, {})", i + 1, j + 1, k + 1)
            }
        }
    }
}

impl LieData {
    pub fn abelian(dim: usize) -> Self {
        Self { dim, constants: vec![Scalar::zero(); dim * dim * dim] }
    }

    /// The two-dimensional non-abelian algebra `[e1, e2] = e2`.
    pub fn aff1() -> Self {
        let mut lie = Self::abelian(2);
        lie.set_bracket(0, 1, &[(1, Scalar::one())]);
        lie
    }

    /// `sl_2` with basis `e, h, f`: `[e,f] = h`, `[h,e] = 2e`, `[h,f] = -2f`.
    pub fn sl2() -> Self {
        use crate::scalar::int;
        let mut lie = Self::abelian(3);
        lie.set_bracket(0, 2, &[(1, int(1))]);
        lie.set_bracket(1, 0, &[(0, int(2))]);
        lie.set_bracket(1, 2, &[(2, int(-2))]);
        lie
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Sets `c^k_ij` without touching `c^k_ji`.
    pub fn set_constant(&mut self, i: usize, j: usize, k: usize, c: Scalar) {
        let d = self.dim;
        self.constants[(i * d + j) * d + k] = c;
    }

    /// Sets `[e_i, e_j]` and, antisymmetrically, `[e_j, e_i]`.
    pub fn set_bracket(&mut self, i: usize, j: usize, value: &[(usize, Scalar)]) {
        for k in 0..self.dim {
            self.set_constant(i, j, k, Scalar::zero());
            self.set_constant(j, i, k, Scalar::zero());
        }
        for (k, c) in value {
            let old = self.constant(i, j, *k).clone();
            self.set_constant(i, j, *k, &old + c);
            self.set_constant(j, i, *k, -(&old + c));
        }
    }

    /// `[e_i, e_j]` as `(k, c)` pairs with nonzero `c`.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<(usize, Scalar)> {
        (0..self.dim)
            .filter_map(|k| {
                let c = self.constant(i, j, k);
                (!c.is_zero()).then(|| (k, c.clone()))
            })
            .collect()
    }

    /// Bracket of two vectors given in coordinates.
    pub fn bracket_vectors(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                for (k, c) in self.bracket(i, j) {
                    out[k] += xi * yj * c;
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.iter().all(Zero::is_zero)
    }

    /// Checks antisymmetry and the Jacobi identity, reporting the first
    /// violating index triple in lex order.
    pub fn validate(&self) -> std::result::Result<(), LieViolation> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !(self.constant(i, j, k) + self.constant(j, i, k)).is_zero() {
                        return Err(LieViolation::Antisymmetry(i, j, k));
                    }
                }
            }
        }
        let basis = |i: usize| -> Vec<Scalar> {
            (0..n).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect()
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (a, b, c) = (basis(i), basis(j), basis(k));
                    let t1 = self.bracket_vectors(&a, &self.bracket_vectors(&b, &c));
                    let t2 = self.bracket_vectors(&b, &self.bracket_vectors(&c, &a));
                    let t3 = self.bracket_vectors(&c, &self.bracket_vectors(&a, &b));
                    if (0..n).any(|l| !(&t1[l] + &t2[l] + &t3[l]).is_zero()) {
                        return Err(LieViolation::Jacobi(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `U(h)` with memoized PBW straightening and a global degree cutoff.
pub struct HopfAlgebra {
    lie: LieData,
    cutoff: u32,
    /// Ordinary-power monomial times a generator, in ordinary powers.
    mono_gen: RwLock<HashMap<(MultiIndex, usize), LinComb<MultiIndex>>>,
    gamma: RwLock<HashMap<(MultiIndex, MultiIndex), HElement>>,
    antipode: RwLock<HashMap<MultiIndex, HElement>>,
}

impl fmt::Debug for HopfAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HopfAlgebra").field("lie", &self.lie).field("cutoff", &self.cutoff).finish()
    }
}

impl HopfAlgebra {
    pub fn new(lie: LieData, cutoff: u32) -> Result<Self> {
        if let Err(v) = lie.validate() {
            return Err(match v {
                LieViolation::Jacobi(i, j, k) => Error::JacobiViolation(i + 1, j + 1, k + 1),
                other => Error::InvalidLieData(other.to_string()),
            });
        }
        Ok(Self {
            lie,
            cutoff,
            mono_gen: RwLock::new(HashMap::new()),
            gamma: RwLock::new(HashMap::new()),
            antipode: RwLock::new(HashMap::new()),
        })
    }

    pub fn lie(&self) -> &LieData {
        &self.lie
    }

    pub fn dim(&self) -> usize {
        self.lie.dim
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn is_abelian(&self) -> bool {
        self.lie.is_abelian()
    }

    pub fn check_degree(&self, degree: u32) -> Result<()> {
        if degree > self.cutoff {
            Err(Error::CutoffExceeded { degree, cutoff: self.cutoff })
        } else {
            Ok(())
        }
    }

    pub fn one(&self) -> HElement {
        HElement::basis(MultiIndex::zero(self.dim()))
    }

    /// The primitive generator `e_i`.
    pub fn generator(&self, i: usize) -> HElement {
        HElement::basis(MultiIndex::unit(self.dim(), i))
    }

    pub fn monomial(&self, exps: &[u32]) -> HElement {
        assert_eq!(exps.len(), self.dim());
        HElement::basis(MultiIndex(exps.to_vec()))
    }

    /// `e^a · e_j` in ordinary powers.
    fn mono_times_gen(&self, alpha: &MultiIndex, j: usize) -> LinComb<MultiIndex> {
        let key = (alpha.clone(), j);
        if let Some(v) = self.mono_gen.read().unwrap().get(&key) {
            return v.clone();
        }
        let top = alpha.0.iter().rposition(|&a| a > 0);
        let result = match top {
            Some(k) if k > j => {
                // e^a e_j = (e^(a-e_k) e_j) e_k + e^(a-e_k) [e_k, e_j]
                let mut rest = alpha.clone();
                rest.0[k] -= 1;
                let mut out = LinComb::zero();
                for (mu, c) in &self.mono_times_gen(&rest, j) {
                    out.add_scaled(&self.mono_times_gen(mu, k), c);
                }
                for (l, c) in self.lie.bracket(k, j) {
                    out.add_scaled(&self.mono_times_gen(&rest, l), &c);
                }
                out
            }
            _ => {
                let mut next = alpha.clone();
                next.0[j] += 1;
                LinComb::basis(next)
            }
        };
        self.mono_gen.write().unwrap().insert(key, result.clone());
        result
    }

    /// Recomputes `e^(a) e^(b)` by straightening, bypassing the cache.
    fn straighten(&self, alpha: &MultiIndex, beta: &MultiIndex) -> HElement {
        let mut acc = LinComb::basis(alpha.clone());
        for (j, &b) in beta.0.iter().enumerate() {
            for _ in 0..b {
                let mut next = LinComb::zero();
                for (mu, c) in &acc {
                    next.add_scaled(&self.mono_times_gen(mu, j), c);
                }
                acc = next;
            }
        }
        let scale = Scalar::one() / (alpha.factorial() * beta.factorial());
        acc.iter().map(|(mu, c)| (mu.clone(), c * mu.factorial() * &scale)).collect()
    }

    /// `e^(a) e^(b) = Σ γ^{a,b}_μ e^(μ)`.
    pub fn pbw_mul(&self, alpha: &MultiIndex, beta: &MultiIndex) -> Result<HElement> {
        self.check_degree(alpha.degree() + beta.degree())?;
        let key = (alpha.clone(), beta.clone());
        if let Some(v) = self.gamma.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let value = if alpha.is_zero() {
            HElement::basis(beta.clone())
        } else if beta.is_zero() {
            HElement::basis(alpha.clone())
        } else {
            self.straighten(alpha, beta)
        };
        self.gamma.write().unwrap().entry(key).or_insert_with(|| value.clone());
        Ok(value)
    }

    pub fn mul(&self, a: &HElement, b: &HElement) -> Result<HElement> {
        let mut out = HElement::zero();
        for (alpha, ca) in a {
            for (beta, cb) in b {
                out.add_scaled(&self.pbw_mul(alpha, beta)?, &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn mul_many(&self, factors: &[HElement]) -> Result<HElement> {
        let mut acc = self.one();
        for f in factors {
            acc = self.mul(&acc, f)?;
        }
        Ok(acc)
    }

    /// `Δ^[n](e^(a)) = Σ e^(v_1) ⊗ ... ⊗ e^(v_n)` over decompositions `a = Σ v_i`.
    pub fn coproduct_monomial(&self, alpha: &MultiIndex, n: usize) -> TensorElement {
        alpha.splits(n).into_iter().map(|parts| (parts, Scalar::one())).collect()
    }

    pub fn coproduct_n(&self, h: &HElement, n: usize) -> Result<TensorElement> {
        assert!(n >= 1);
        self.check_degree(element_degree(h))?;
        let mut out = TensorElement::zero();
        for (alpha, c) in h {
            out.add_scaled(&self.coproduct_monomial(alpha, n), c);
        }
        Ok(out)
    }

    pub fn coproduct(&self, h: &HElement) -> Result<TensorElement> {
        self.coproduct_n(h, 2)
    }

    pub fn counit(&self, h: &HElement) -> Scalar {
        h.coeff(&MultiIndex::zero(self.dim()))
    }

    /// `S(e^(a)) = (-1)^|a| e_n^(a_n) ... e_1^(a_1)`.
    pub fn antipode_monomial(&self, alpha: &MultiIndex) -> Result<HElement> {
        self.check_degree(alpha.degree())?;
        if let Some(v) = self.antipode.read().unwrap().get(alpha) {
            return Ok(v.clone());
        }
        let dim = self.dim();
        let mut acc = self.one();
        for i in (0..dim).rev() {
            if alpha.0[i] > 0 {
                let mut power = MultiIndex::zero(dim);
                power.0[i] = alpha.0[i];
                acc = self.mul(&acc, &HElement::basis(power))?;
            }
        }
        if alpha.degree() % 2 == 1 {
            acc = -&acc;
        }
        self.antipode.write().unwrap().insert(alpha.clone(), acc.clone());
        Ok(acc)
    }

    pub fn antipode(&self, h: &HElement) -> Result<HElement> {
        let mut out = HElement::zero();
        for (alpha, c) in h {
            out.add_scaled(&self.antipode_monomial(alpha)?, c);
        }
        Ok(out)
    }

    /// Slotwise product in `H^⊗n`.
    pub fn tensor_mul(&self, a: &TensorElement, b: &TensorElement) -> Result<TensorElement> {
        let mut out = TensorElement::zero();
        for (ka, ca) in a {
            for (kb, cb) in b {
                assert_eq!(ka.len(), kb.len(), "tensor arity");
                let mut partial: TensorElement = LinComb::basis(Vec::new());
                for (x, y) in ka.iter().zip(kb) {
                    let prod = self.pbw_mul(x, y)?;
                    let mut next = TensorElement::zero();
                    for (prefix, cp) in &partial {
                        for (mu, cm) in &prod {
                            let mut key = prefix.clone();
                            key.push(mu.clone());
                            next.add_term(key, cp * cm);
                        }
                    }
                    partial = next;
                }
                out.add_scaled(&partial, &(ca * cb));
            }
        }
        Ok(out)
    }

    /// The right action of `H` on `H^⊗n`: `(h_1 ⊗ ... ⊗ h_n) f = h_1 f_(1) ⊗ ... ⊗ h_n f_(n)`.
    pub fn tensor_right_act(&self, t: &TensorElement, f: &HElement) -> Result<TensorElement> {
        let Some(n) = t.keys().next().map(Vec::len) else { return Ok(TensorElement::zero()) };
        let df = self.coproduct_n(f, n)?;
        self.tensor_mul(t, &df)
    }

    /// Inserts a precomputed product, overriding straightening. Used only to
    /// exercise the axiom checks against corrupted tables.
    #[doc(hidden)]
    pub fn inject_gamma_entry(&self, alpha: MultiIndex, beta: MultiIndex, value: HElement) {
        self.gamma.write().unwrap().insert((alpha, beta), value);
        self.antipode.write().unwrap().clear();
    }

    /// Cached products that disagree with a fresh straightening.
    pub fn verify_gamma_cache(&self) -> Vec<(MultiIndex, MultiIndex)> {
        let entries: Vec<_> = self
            .gamma
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let mut bad: Vec<_> = entries
            .into_iter()
            .filter(|((a, b), v)| {
                let fresh = if a.is_zero() {
                    HElement::basis(b.clone())
                } else if b.is_zero() {
                    HElement::basis(a.clone())
                } else {
                    self.straighten(a, b)
                };
                &fresh != v
            })
            .map(|(k, _)| k)
            .collect();
        bad.sort();
        bad
    }
}
