//! The dual algebra `X = H*` of finitely supported functionals, its
//! `H`-bimodule structure, the truncated coproduct `Δ_X`, and the Fourier
//! transforms on tensor powers of `H`.
//!
//! `t^v` denotes the functional dual to the divided-power monomial `e^(v)`,
//! so `t^m t^v = t^(m+v)`: `X` is an ordinary polynomial ring.

use crate::error::{Error, Result};
use crate::hopf::{element_degree, HElement, HopfAlgebra, MultiIndex, TensorElement};
use crate::scalar::{render_terms, LinComb, Scalar};

/// A finitely supported functional `Σ c_v t^v`.
pub type XElement = LinComb<MultiIndex>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FourierKind {
    /// `h_1 ⊗ ... ⊗ h_n ⊗ f ↦ h_1 f_(1) ⊗ ... ⊗ h_n f_(n) ⊗ f_(n+1)`.
    F,
    /// `h_1 ⊗ ... ⊗ h_n ⊗ f ↦ h_1 S(f_(1)) ⊗ ... ⊗ h_n S(f_(n)) ⊗ f_(n+1)`.
    Finv,
    /// `h ⊗ f_1 ⊗ ... ⊗ f_n ↦ h_(1) ⊗ h_(2) f_1 ⊗ ... ⊗ h_(n+1) f_n`.
    Fprime,
    /// `h ⊗ f_1 ⊗ ... ⊗ f_n ↦ h_(1) ⊗ S(h_(2)) f_1 ⊗ ... ⊗ S(h_(n+1)) f_n`.
    FprimeInv,
}

pub fn render_x(x: &XElement) -> String {
    render_terms(x.iter().map(|(k, c)| (c, format!("t^{k}"))))
}

/// `⟨x, h⟩`.
pub fn pair_eval(x: &XElement, h: &HElement) -> Scalar {
    x.iter().map(|(k, c)| c * h.coeff(k)).sum()
}

/// Product in `X`, dual to the coproduct of `H`.
pub fn x_mul(x: &XElement, y: &XElement) -> XElement {
    let mut out = XElement::zero();
    for (a, ca) in x {
        for (b, cb) in y {
            out.add_term(a.add(b), ca * cb);
        }
    }
    out
}

fn degree_range(h: &HopfAlgebra, x: &XElement, act: &HElement) -> Result<u32> {
    let dh = element_degree(act);
    h.check_degree(dh)?;
    if h.is_abelian() {
        // Pairing e^(k) S(h) against t^v needs |k| + (degree of a term of S(h)) = |v|.
        Ok(element_degree(x))
    } else {
        // Lower-order terms of a non-commutative product can meet the support of
        // `x` from arbitrarily high |k|; the result is exact up to this degree.
        Ok(h.cutoff() - dh)
    }
}

/// The `H`-bimodule structure: `⟨x h, g⟩ = ⟨x, g S(h)⟩` and `⟨h x, g⟩ = ⟨x, S(h) g⟩`.
///
/// Over abelian `𝔥` the result is exact. Otherwise the coefficients are exact
/// for every `t^k` with `|k| + deg h` within the cutoff and omitted beyond it.
pub fn h_action(h: &HopfAlgebra, side: Side, act: &HElement, x: &XElement) -> Result<XElement> {
    if x.is_zero() || act.is_zero() {
        return Ok(XElement::zero());
    }
    let bound = degree_range(h, x, act)?;
    let s = h.antipode(act)?;
    let mut out = XElement::zero();
    for kappa in MultiIndex::up_to_degree(h.dim(), bound) {
        let g = HElement::basis(kappa.clone());
        let prod = match side {
            Side::Right => h.mul(&g, &s)?,
            Side::Left => h.mul(&s, &g)?,
        };
        out.add_term(kappa, pair_eval(x, &prod));
    }
    Ok(out)
}

/// The components `(x S(e^(v)), t^v)` of `Δ_X(x)` with `|v| <= probe`,
/// dropping those whose first factor vanishes.
pub fn delta_x(h: &HopfAlgebra, x: &XElement, probe: u32) -> Result<Vec<(XElement, XElement)>> {
    h.check_degree(probe)?;
    let mut out = Vec::new();
    for nu in MultiIndex::up_to_degree(h.dim(), probe) {
        let s = h.antipode_monomial(&nu)?;
        let first = h_action(h, Side::Right, &s, x)?;
        if !first.is_zero() {
            out.push((first, XElement::basis(nu)));
        }
    }
    Ok(out)
}

/// Applies a Fourier transform termwise to an element of `H^⊗(n+1)`, `n >= 1`.
pub fn fourier(h: &HopfAlgebra, kind: FourierKind, t: &TensorElement) -> Result<TensorElement> {
    let mut out = TensorElement::zero();
    for (slots, c) in t {
        if slots.len() < 2 {
            return Err(Error::ArityMismatch { expected: 2, found: slots.len() });
        }
        let n = slots.len() - 1;
        let image = match kind {
            FourierKind::F | FourierKind::Finv => {
                let f = &slots[n];
                let pieces = h.coproduct_monomial(f, n + 1);
                let mut acc = TensorElement::zero();
                for (parts, cp) in &pieces {
                    let mut factors = Vec::with_capacity(n + 1);
                    for i in 0..n {
                        let g = HElement::basis(parts[i].clone());
                        let g = if kind == FourierKind::Finv { h.antipode(&g)? } else { g };
                        factors.push(h.mul(&HElement::basis(slots[i].clone()), &g)?);
                    }
                    factors.push(HElement::basis(parts[n].clone()));
                    acc.add_scaled(&tensor_of(&factors), cp);
                }
                acc
            }
            FourierKind::Fprime | FourierKind::FprimeInv => {
                let head = &slots[0];
                let pieces = h.coproduct_monomial(head, n + 1);
                let mut acc = TensorElement::zero();
                for (parts, cp) in &pieces {
                    let mut factors = Vec::with_capacity(n + 1);
                    factors.push(HElement::basis(parts[0].clone()));
                    for i in 1..=n {
                        let g = HElement::basis(parts[i].clone());
                        let g = if kind == FourierKind::FprimeInv { h.antipode(&g)? } else { g };
                        factors.push(h.mul(&g, &HElement::basis(slots[i].clone()))?);
                    }
                    acc.add_scaled(&tensor_of(&factors), cp);
                }
                acc
            }
        };
        out.add_scaled(&image, c);
    }
    Ok(out)
}

/// `h_1 ⊗ ... ⊗ h_n` expanded into pure tensors of monomials.
pub fn tensor_of(factors: &[HElement]) -> TensorElement {
    let mut acc: TensorElement = LinComb::basis(Vec::new());
    for f in factors {
        let mut next = TensorElement::zero();
        for (prefix, cp) in &acc {
            for (mu, cm) in f {
                let mut key = prefix.clone();
                key.push(mu.clone());
                next.add_term(key, cp * cm);
            }
        }
        acc = next;
    }
    acc
}
