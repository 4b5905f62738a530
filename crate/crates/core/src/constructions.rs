//! Builders: current pseudoalgebras and their base extensions, the plus and
//! minus functors, `W(h)`, and finite windows of annihilation and
//! coefficient algebras.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num::Zero;
use rayon::prelude::*;

use crate::dual::{h_action, pair_eval, x_mul, Side, XElement};
use crate::error::{Error, Result};
use crate::hopf::{HElement, HopfAlgebra, MultiIndex};
use crate::linalg::Matrix;
use crate::ordinary::OrdinaryAlgebra;
use crate::pseudo::{permute_ambient, Ambient, CanonicalTensor, PModuleElement, Permutation, PseudoAlgebra};
use crate::scalar::{binomial, format_scalar, LinComb, Scalar};

/// `Curr A = H ⊗ A` with `v_i * v_j = (1 ⊗ 1) ⊗_H Σ m^k_ij (1 ⊗ v_k)`.
pub fn curr_build(hopf: Arc<HopfAlgebra>, a: &OrdinaryAlgebra) -> Result<PseudoAlgebra> {
    let zero = MultiIndex::zero(hopf.dim());
    let r = a.dim();
    let table = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let terms = a
                        .product(i, j)
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| ((vec![zero.clone()], zero.clone(), k), c.clone()))
                        .collect();
                    CanonicalTensor::from_terms(2, terms)
                })
                .collect()
        })
        .collect();
    PseudoAlgebra::new(hopf, a.names().to_vec(), table)
}

/// Reads off the ordinary algebra of a pseudoalgebra whose products all have
/// trivial H-parts.
pub fn current_part(p: &PseudoAlgebra) -> Option<OrdinaryAlgebra> {
    let r = p.rank();
    let mut out = OrdinaryAlgebra::zero(p.names().to_vec());
    for i in 0..r {
        for j in 0..r {
            for ((h, g, k), c) in p.entry(i, j).terms() {
                if !h[0].is_zero() || !g.is_zero() {
                    return None;
                }
                out.add_to_product(i, j, *k, c);
            }
        }
    }
    Some(out)
}

/// An injective Lie homomorphism `h' → h`, given by the images of the basis
/// of `h'` as coordinate columns in `h`.
#[derive(Clone, Debug)]
pub struct Inclusion {
    images: Matrix,
}

impl Inclusion {
    pub fn new(sub: &HopfAlgebra, ambient: &HopfAlgebra, images: Matrix) -> Result<Self> {
        if images.rows != ambient.dim() || images.cols != sub.dim() {
            return Err(Error::NotASubalgebra(format!(
                "expected a {}x{} inclusion matrix, found {}x{}",
                ambient.dim(),
                sub.dim(),
                images.rows,
                images.cols
            )));
        }
        if images.rank() != sub.dim() {
            return Err(Error::NotASubalgebra("inclusion is not injective".into()));
        }
        for i in 0..sub.dim() {
            for j in 0..sub.dim() {
                let mut lhs = vec![Scalar::zero(); ambient.dim()];
                for (k, c) in sub.lie().bracket(i, j) {
                    for (l, slot) in lhs.iter_mut().enumerate() {
                        *slot += &c * images.get(l, k);
                    }
                }
                let rhs = ambient.lie().bracket_vectors(&images.column(i), &images.column(j));
                if lhs != rhs {
                    return Err(Error::NotASubalgebra(format!(
                        "bracket of sub-generators {} and {} is not preserved",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { images })
    }

    /// Image of `e'^(α) = Π e'_i^(α_i)` in `U(h)`.
    pub fn map_monomial(&self, ambient: &HopfAlgebra, alpha: &MultiIndex) -> Result<HElement> {
        let mut factors = Vec::new();
        for (i, &a) in alpha.0.iter().enumerate() {
            let gen: HElement = (0..ambient.dim())
                .filter(|&l| !self.images.get(l, i).is_zero())
                .map(|l| (MultiIndex::unit(ambient.dim(), l), self.images.get(l, i).clone()))
                .collect();
            // divided power of the image
            let mut pow = ambient.one();
            for step in 1..=a {
                pow = ambient.mul(&pow, &gen)?.scale(&Scalar::new(1.into(), step.into()));
            }
            factors.push(pow);
        }
        ambient.mul_many(&factors)
    }
}

/// `Curr_{H'}^H P'`: the same generators with each product
/// `(h' ⊗ 1) ⊗_H (g' ⊗ v_k)` pushed forward along `U(h') → U(h)`.
pub fn curr_extend(hopf: Arc<HopfAlgebra>, inclusion: &Inclusion, sub: &PseudoAlgebra) -> Result<PseudoAlgebra> {
    let r = sub.rank();
    let mut table = Vec::with_capacity(r);
    for i in 0..r {
        let mut row = Vec::with_capacity(r);
        for j in 0..r {
            let mut terms = LinComb::zero();
            for ((h, g, k), c) in sub.entry(i, j).terms() {
                let hh = inclusion.map_monomial(&hopf, &h[0])?;
                let gg = inclusion.map_monomial(&hopf, g)?;
                for (a, ca) in &hh {
                    for (b, cb) in &gg {
                        terms.add_term((vec![a.clone()], b.clone(), *k), c * ca * cb);
                    }
                }
            }
            row.push(CanonicalTensor::from_terms(2, terms));
        }
        table.push(row);
    }
    PseudoAlgebra::new(hopf, sub.names().to_vec(), table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `a ∘ b = a*b ± σ12(b*a)`: Jordan for `Plus`, Lie for `Minus` when `P` is associative.
pub fn plus_minus(p: &PseudoAlgebra, sign: Sign) -> Result<PseudoAlgebra> {
    let r = p.rank();
    let swap = Permutation::transposition(2, 0, 1);
    let ambient: Vec<Vec<Ambient>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let twisted = permute_ambient(&swap, p.ambient_entry(j, i));
                    match sign {
                        Sign::Plus => p.ambient_entry(i, j) + &twisted,
                        Sign::Minus => p.ambient_entry(i, j) - &twisted,
                    }
                })
                .collect()
        })
        .collect();
    PseudoAlgebra::from_ambient_table(p.hopf_arc().clone(), p.names().to_vec(), ambient)
}

/// `W(h) = H ⊗ h` inside the associative pseudoalgebra `H ⊗ H` with
/// `(h ⊗ a) * (g ⊗ b) = (h b_(1) ⊗ g) ⊗_H (1 ⊗ a b_(2))`, bracketed and read
/// back in the basis `v_i = 1 ⊗ e_i`.
pub fn w_build(hopf: Arc<HopfAlgebra>) -> Result<PseudoAlgebra> {
    let d = hopf.dim();
    if d == 0 {
        return Err(Error::WrongHopfAlgebra("W(h) needs dim h >= 1".into()));
    }
    hopf.check_degree(2)?;
    // Second tensor factors of H ⊗ H up to degree 2, used as module labels.
    let labels = MultiIndex::up_to_degree(d, 2);
    let label_of: BTreeMap<MultiIndex, usize> = labels.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let names: Vec<String> = labels.iter().map(|m| format!("e^{m}")).collect();
    let scratch = PseudoAlgebra::new(
        hopf.clone(),
        names,
        vec![vec![CanonicalTensor::zero(2); labels.len()]; labels.len()],
    )?;
    let zero = MultiIndex::zero(d);
    // (1 ⊗ e_i) * (1 ⊗ e_j) in ambient coordinates.
    let assoc = |i: usize, j: usize| -> Result<Ambient> {
        let ei = MultiIndex::unit(d, i);
        let ej = MultiIndex::unit(d, j);
        let mut out = Ambient::zero();
        out.add_term((vec![ej.clone(), zero.clone()], label_of[&ei]), Scalar::from_integer(1.into()));
        for (mu, c) in &hopf.pbw_mul(&ei, &ej)? {
            out.add_term((vec![zero.clone(), zero.clone()], label_of[mu]), c.clone());
        }
        Ok(out)
    };
    let swap = Permutation::transposition(2, 0, 1);
    let mut table = Vec::with_capacity(d);
    for i in 0..d {
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let bracket = &assoc(i, j)? - &permute_ambient(&swap, &assoc(j, i)?);
            let canon = scratch.from_ambient(2, &bracket)?;
            let mut terms = LinComb::zero();
            for ((h, g, label), c) in canon.terms() {
                let m = &labels[*label];
                if m.degree() != 1 {
                    return Err(Error::Internal(format!(
                        "[v{} * v{}] leaves H ⊗ h through the component e^{m}",
                        i + 1,
                        j + 1
                    )));
                }
                let k = m.0.iter().position(|&x| x == 1).expect("degree-one index");
                terms.add_term((h.clone(), g.clone(), k), c.clone());
            }
            row.push(CanonicalTensor::from_terms(2, terms));
        }
        table.push(row);
    }
    let names = (1..=d).map(|i| format!("v{i}")).collect();
    PseudoAlgebra::new(hopf, names, table)
}

/// A generator of a window algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum WindowKey {
    /// `t^m ⊗_H v_k` in the annihilation algebra.
    Annihilation(MultiIndex, usize),
    /// `v_k(n)` in the coefficient algebra.
    Coefficient(usize, i64),
}

/// A finite window of an infinite-dimensional ordinary algebra. Products
/// with components outside the window keep their in-window part and are
/// flagged.
#[derive(Clone)]
pub struct WindowAlgebra {
    keys: Vec<WindowKey>,
    labels: Vec<String>,
    index: BTreeMap<WindowKey, usize>,
    products: Vec<Vec<LinComb<usize>>>,
    overflow: Vec<Vec<bool>>,
}

impl WindowAlgebra {
    fn new(keys: Vec<WindowKey>, labels: Vec<String>) -> Self {
        let n = keys.len();
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Self {
            keys,
            labels,
            index,
            products: vec![vec![LinComb::zero(); n]; n],
            overflow: vec![vec![false; n]; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[WindowKey] {
        &self.keys
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, key: &WindowKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn product(&self, i: usize, j: usize) -> &LinComb<usize> {
        &self.products[i][j]
    }

    /// Whether the product of generators `i` and `j` had terms outside the window.
    pub fn overflows(&self, i: usize, j: usize) -> bool {
        self.overflow[i][j]
    }

    pub fn overflow_count(&self) -> usize {
        self.overflow.iter().flatten().filter(|&&b| b).count()
    }

    /// Product of two in-window elements, or `None` if any needed generator
    /// product overflows.
    pub fn mul(&self, a: &LinComb<usize>, b: &LinComb<usize>) -> Option<LinComb<usize>> {
        let mut out = LinComb::zero();
        for (i, ca) in a {
            for (j, cb) in b {
                if self.overflow[*i][*j] {
                    return None;
                }
                out.add_scaled(&self.products[*i][*j], &(ca * cb));
            }
        }
        Some(out)
    }

    /// The sub-window on the given generators, as an ordinary algebra, if it is closed.
    pub fn restrict(&self, generators: &[usize]) -> Option<OrdinaryAlgebra> {
        let pos: BTreeMap<usize, usize> = generators.iter().enumerate().map(|(p, &g)| (g, p)).collect();
        let mut out = OrdinaryAlgebra::zero(generators.iter().map(|&g| self.labels[g].clone()).collect());
        for (pi, &i) in generators.iter().enumerate() {
            for (pj, &j) in generators.iter().enumerate() {
                if self.overflow[i][j] {
                    return None;
                }
                for (k, c) in &self.products[i][j] {
                    out.add_to_product(pi, pj, *pos.get(k)?, c);
                }
            }
        }
        Some(out)
    }

    /// One line per nonzero product, `a · b = ...`, with a trailing
    /// `[overflow]` marker where terms left the window.
    pub fn render(&self) -> Vec<String> {
        let mut lines = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let p = &self.products[i][j];
                if p.is_zero() && !self.overflow[i][j] {
                    continue;
                }
                let body = if p.is_zero() {
                    "0".to_string()
                } else {
                    p.iter()
                        .map(|(k, c)| format!("{} {}", format_scalar(c), self.labels[*k]))
                        .collect::<Vec<_>>()
                        .join(" + ")
                };
                let flag = if self.overflow[i][j] { " [overflow]" } else { "" };
                lines.push(format!("{} · {} = {}{}", self.labels[i], self.labels[j], body, flag));
            }
        }
        lines
    }
}

impl fmt::Debug for WindowAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.render() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// `S*(x S(e^(v)))` against `e^(g)` for `|g| <= bound`: `⟨x, S(e^(g)) e^(v)⟩`.
fn twisted_first_factor(h: &HopfAlgebra, x: &MultiIndex, nu: &MultiIndex, bound: u32) -> Result<XElement> {
    let xt = XElement::basis(x.clone());
    let mut out = XElement::zero();
    for g in MultiIndex::up_to_degree(h.dim(), bound) {
        let s = h.antipode_monomial(&g)?;
        let prod = h.mul(&s, &HElement::basis(nu.clone()))?;
        out.add_term(g, pair_eval(&xt, &prod));
    }
    Ok(out)
}

/// Window `|m| <= probe` of the annihilation algebra `X ⊗_H P` with
/// `(x ⊗_H a)(y ⊗_H b) = Σ S*(x_(1)) y ⊗_H (a ⊙_{x_(2)} b)`.
///
/// Over abelian `h` the products are exact. Otherwise `S*` of a finite
/// functional has unbounded support and is truncated at `probe` plus the
/// table degree; in-window coefficients are then exact as long as that
/// bound stays within the cutoff.
pub fn annihilation_build(p: &PseudoAlgebra, probe: u32) -> Result<WindowAlgebra> {
    let h = p.hopf();
    let d = h.dim();
    let table_deg = p.table_degree();
    h.check_degree(probe + table_deg)?;
    let window = MultiIndex::up_to_degree(d, probe);
    let mut keys = Vec::new();
    let mut labels = Vec::new();
    for m in &window {
        for k in 0..p.rank() {
            keys.push(WindowKey::Annihilation(m.clone(), k));
            labels.push(format!("t^{m}⊗{}", p.names()[k]));
        }
    }
    let mut out = WindowAlgebra::new(keys.clone(), labels);
    // x-products of generators: (v_i ⊙_{t^v} v_j) for the finitely many v in the support.
    let r = p.rank();
    let mut coeffs: Vec<Vec<Vec<(MultiIndex, PModuleElement)>>> = vec![vec![Vec::new(); r]; r];
    for i in 0..r {
        for j in 0..r {
            for nu in p.support(i, j)? {
                let c = p.x_coeff(p.entry(i, j), &XElement::basis(nu.clone()))?;
                coeffs[i][j].push((nu, c));
            }
        }
    }
    let rows: Vec<(usize, Vec<(LinComb<usize>, bool)>)> = (0..keys.len())
        .into_par_iter()
        .map(|a| -> Result<(usize, Vec<(LinComb<usize>, bool)>)> {
            let WindowKey::Annihilation(x, i) = &keys[a] else { unreachable!() };
            let mut row = Vec::with_capacity(keys.len());
            for key in &keys {
                let WindowKey::Annihilation(y, j) = key else { unreachable!() };
                let mut acc = LinComb::zero();
                let mut overflow = false;
                for (nu, c) in &coeffs[*i][*j] {
                    let bound = if h.is_abelian() { x.degree() } else { probe + table_deg };
                    let bound = bound.min(h.cutoff() - nu.degree());
                    let first = twisted_first_factor(h, x, nu, bound)?;
                    let z = x_mul(&first, &XElement::basis(y.clone()));
                    for ((beta, k), cb) in c {
                        let moved = if beta.is_zero() {
                            z.clone()
                        } else {
                            h_action(h, Side::Right, &HElement::basis(beta.clone()), &z)?
                        };
                        for (mu, cm) in &moved {
                            if mu.degree() > probe {
                                overflow = true;
                                continue;
                            }
                            let idx = out.index[&WindowKey::Annihilation(mu.clone(), *k)];
                            acc.add_term(idx, cb * cm);
                        }
                    }
                }
                row.push((acc, overflow));
            }
            Ok((a, row))
        })
        .collect::<Result<Vec<_>>>()?;
    for (a, row) in rows {
        for (b, (prod, flag)) in row.into_iter().enumerate() {
            out.products[a][b] = prod;
            out.overflow[a][b] = flag;
        }
    }
    Ok(out)
}

/// Window `|n| <= window` of the coefficient algebra over `H = k[D]`:
/// `a(n) b(m) = Σ_s C(n, s) (a ⊙_s b)(n + m - s)` with `(D a)(n) = -n a(n-1)`.
pub fn coeff_build(p: &PseudoAlgebra, window: i64) -> Result<WindowAlgebra> {
    let h = p.hopf();
    if h.dim() != 1 || !h.is_abelian() {
        return Err(Error::WrongHopfAlgebra(format!(
            "coefficient algebras need H = k[D], found dim h = {}",
            h.dim()
        )));
    }
    if window < 1 {
        return Err(Error::Internal("window must be at least 1".into()));
    }
    let r = p.rank();
    let mut keys = Vec::new();
    let mut labels = Vec::new();
    for k in 0..r {
        for n in -window..=window {
            keys.push(WindowKey::Coefficient(k, n));
            labels.push(format!("{}({n})", p.names()[k]));
        }
    }
    let mut out = WindowAlgebra::new(keys.clone(), labels);
    let mut nprods: Vec<Vec<Vec<(u32, PModuleElement)>>> = vec![vec![Vec::new(); r]; r];
    for i in 0..r {
        for j in 0..r {
            for nu in p.support(i, j)? {
                let c = p.x_coeff(p.entry(i, j), &XElement::basis(nu.clone()))?;
                nprods[i][j].push((nu.0[0], c));
            }
        }
    }
    for (a, ka) in keys.iter().enumerate() {
        let WindowKey::Coefficient(i, n) = *ka else { unreachable!() };
        for (b, kb) in keys.iter().enumerate() {
            let WindowKey::Coefficient(j, m) = *kb else { unreachable!() };
            let mut acc = LinComb::zero();
            let mut overflow = false;
            for (s, c) in &nprods[i][j] {
                let cs = binomial(n, *s);
                if cs.is_zero() {
                    continue;
                }
                let target = n + m - *s as i64;
                // (e^(β) v_k)(q) = (-1)^β C(q, β) v_k(q - β)
                for ((beta, k), cb) in c {
                    let bdeg = beta.0[0];
                    let mut coeff = &cs * cb * binomial(target, bdeg);
                    if bdeg % 2 == 1 {
                        coeff = -coeff;
                    }
                    if coeff.is_zero() {
                        continue;
                    }
                    let q = target - bdeg as i64;
                    match out.index.get(&WindowKey::Coefficient(*k, q)) {
                        Some(&idx) => acc.add_term(idx, coeff),
                        None => overflow = true,
                    }
                }
            }
            out.products[a][b] = acc;
            out.overflow[a][b] = overflow;
        }
    }
    Ok(out)
}
