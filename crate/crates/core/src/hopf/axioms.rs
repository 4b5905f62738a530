//! Exact verification of the Hopf algebra axioms on all basis elements up to
//! a degree, for any Hopf algebra given by its action on a basis.

use std::fmt;

use rayon::prelude::*;

use super::{HopfAlgebra, MultiIndex};
use crate::error::Result;
use crate::scalar::LinComb;
use crate::scalar::Scalar;

/// A Hopf algebra presented through its structure maps on a basis.
pub trait HopfStructure: Sync {
    type Basis: Ord + Clone + fmt::Display + Send + Sync;

    /// Basis elements of degree at most `degree`, in the order witnesses are reported.
    fn basis_up_to(&self, degree: u32) -> Vec<Self::Basis>;
    fn unit(&self) -> Self::Basis;
    fn mul_basis(&self, a: &Self::Basis, b: &Self::Basis) -> Result<LinComb<Self::Basis>>;
    fn coproduct_basis(&self, a: &Self::Basis) -> Result<LinComb<(Self::Basis, Self::Basis)>>;
    fn counit_basis(&self, a: &Self::Basis) -> Scalar;
    fn antipode_basis(&self, a: &Self::Basis) -> Result<LinComb<Self::Basis>>;
}

impl HopfStructure for HopfAlgebra {
    type Basis = MultiIndex;

    fn basis_up_to(&self, degree: u32) -> Vec<MultiIndex> {
        MultiIndex::up_to_degree(self.dim(), degree)
    }

    fn unit(&self) -> MultiIndex {
        MultiIndex::zero(self.dim())
    }

    fn mul_basis(&self, a: &MultiIndex, b: &MultiIndex) -> Result<LinComb<MultiIndex>> {
        self.pbw_mul(a, b)
    }

    fn coproduct_basis(&self, a: &MultiIndex) -> Result<LinComb<(MultiIndex, MultiIndex)>> {
        Ok(self
            .coproduct_monomial(a, 2)
            .into_iter()
            .map(|(mut k, c)| {
                let second = k.pop().unwrap();
                let first = k.pop().unwrap();
                ((first, second), c)
            })
            .collect())
    }

    fn counit_basis(&self, a: &MultiIndex) -> Scalar {
        if a.is_zero() {
            num::One::one()
        } else {
            num::Zero::zero()
        }
    }

    fn antipode_basis(&self, a: &MultiIndex) -> Result<LinComb<MultiIndex>> {
        self.antipode_monomial(a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomResult {
    pub name: &'static str,
    /// First failing basis element, rendered.
    pub witness: Option<String>,
}

impl AxiomResult {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(AxiomResult::passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

pub const AXIOMS: [&str; 5] = ["coassociativity", "counit", "antipode", "involutive-antipode", "cocommutativity"];

fn mul_lin<H: HopfStructure>(
    h: &H,
    a: &LinComb<H::Basis>,
    b: &LinComb<H::Basis>,
) -> Result<LinComb<H::Basis>> {
    let mut out = LinComb::zero();
    for (x, cx) in a {
        for (y, cy) in b {
            out.add_scaled(&h.mul_basis(x, y)?, &(cx * cy));
        }
    }
    Ok(out)
}

fn antipode_lin<H: HopfStructure>(h: &H, a: &LinComb<H::Basis>) -> Result<LinComb<H::Basis>> {
    let mut out = LinComb::zero();
    for (x, c) in a {
        out.add_scaled(&h.antipode_basis(x)?, c);
    }
    Ok(out)
}

/// Which axioms fail on one basis element, in `AXIOMS` order.
fn failures_at<H: HopfStructure>(h: &H, b: &H::Basis) -> Result<[bool; 5]> {
    let delta = h.coproduct_basis(b)?;
    let single = LinComb::basis(b.clone());

    let mut left = LinComb::zero();
    let mut right = LinComb::zero();
    for ((x, y), c) in &delta {
        for ((x1, x2), c1) in &h.coproduct_basis(x)? {
            left.add_term((x1.clone(), x2.clone(), y.clone()), c * c1);
        }
        for ((y1, y2), c2) in &h.coproduct_basis(y)? {
            right.add_term((x.clone(), y1.clone(), y2.clone()), c * c2);
        }
    }
    let coassoc = left != right;

    let mut eps_left = LinComb::zero();
    let mut eps_right = LinComb::zero();
    for ((x, y), c) in &delta {
        eps_left.add_term(y.clone(), c * h.counit_basis(x));
        eps_right.add_term(x.clone(), c * h.counit_basis(y));
    }
    let counit = eps_left != single || eps_right != single;

    let unit_eps = LinComb::term(h.unit(), h.counit_basis(b));
    let mut s_left = LinComb::zero();
    let mut s_right = LinComb::zero();
    for ((x, y), c) in &delta {
        let sx = h.antipode_basis(x)?;
        let sy = h.antipode_basis(y)?;
        s_left.add_scaled(&mul_lin(h, &sx, &LinComb::basis(y.clone()))?, c);
        s_right.add_scaled(&mul_lin(h, &LinComb::basis(x.clone()), &sy)?, c);
    }
    let antipode = s_left != unit_eps || s_right != unit_eps;

    let involutive = antipode_lin(h, &h.antipode_basis(b)?)? != single;

    let swapped: LinComb<(H::Basis, H::Basis)> =
        delta.iter().map(|((x, y), c)| ((y.clone(), x.clone()), c.clone())).collect();
    let cocomm = swapped != delta;

    Ok([coassoc, counit, antipode, involutive, cocomm])
}

/// Checks every axiom exactly on all basis elements of degree `<= max_degree`,
/// reporting the first failing basis element per axiom.
pub fn hopf_axiom_suite<H: HopfStructure>(h: &H, max_degree: u32) -> Result<AxiomReport> {
    let basis = h.basis_up_to(max_degree);
    let flags: Vec<[bool; 5]> =
        basis.par_iter().map(|b| failures_at(h, b)).collect::<Result<Vec<_>>>()?;
    let results = AXIOMS
        .iter()
        .enumerate()
        .map(|(i, name)| AxiomResult {
            name,
            witness: basis.iter().zip(&flags).find(|(_, f)| f[i]).map(|(b, _)| b.to_string()),
        })
        .collect();
    Ok(AxiomReport { results })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{HElement, LieData};
    use crate::scalar::int;

    #[test]
    fn enveloping_algebras_pass() {
        for lie in [LieData::abelian(2), LieData::aff1(), LieData::sl2()] {
            let h = HopfAlgebra::new(lie, 4).unwrap();
            let degree = if h.dim() == 3 { 3 } else { 4 };
            let report = hopf_axiom_suite(&h, degree).unwrap();
            assert!(report.all_passed(), "{report:?}");
        }
    }

    #[test]
    fn corrupted_product_breaks_antipode_law() {
        let h = HopfAlgebra::new(LieData::abelian(1), 4).unwrap();
        h.inject_gamma_entry(MultiIndex(vec![1]), MultiIndex(vec![1]), HElement::term(MultiIndex(vec![2]), int(3)));
        let report = hopf_axiom_suite(&h, 4).unwrap();
        let antipode = report.get("antipode").unwrap();
        assert_eq!(antipode.witness.as_deref(), Some("(2)"));
        assert!(report.get("coassociativity").unwrap().passed());
    }
}
