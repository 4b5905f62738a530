//! The smash product `U(h) # k[Γ]` for a finite group `Γ` acting on `h` by
//! Lie algebra automorphisms.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num::{One, Zero};

use super::axioms::HopfStructure;
use super::{HElement, HopfAlgebra, MultiIndex};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{factorial, LinComb, Scalar};

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    pub names: Vec<String>,
    /// `table[g][h]` is the index of `g h`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        let bad = |m: String| Err(Error::InvalidAction(m));
        if n == 0 || table.len() != n || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return bad("group table must be a square table over the listed elements".into());
        }
        let Some(identity) =
            (0..n).find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
        else {
            return bad("group table has no identity".into());
        };
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == identity && table[h][g] == identity) {
                Some(h) => inverses.push(h),
                None => return bad(format!("element {} has no inverse", names[g])),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!(
                            "group table is not associative at ({}, {}, {})",
                            names[a], names[b], names[c]
                        ));
                    }
                }
            }
        }
        Ok(Self { names, table, identity, inverses })
    }

    pub fn trivial() -> Self {
        Self::new(vec!["1".into()], vec![vec![0]]).unwrap()
    }

    /// `Z/n` with elements `1, g, g^2, ...`.
    pub fn cyclic(n: usize) -> Self {
        let names = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(names, table).unwrap()
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }
}

/// Basis element `e^(a) ⊗ g` of the smash product.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SmashBasis(pub MultiIndex, pub usize);

impl fmt::Display for SmashBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e^{}⊗g{}", self.0, self.1)
    }
}

pub struct SmashAlgebra {
    base: HopfAlgebra,
    group: FiniteGroup,
    /// Column convention: `g · e_i = Σ_k action[g][k][i] e_k`.
    action: Vec<Matrix>,
    act_cache: RwLock<HashMap<(usize, MultiIndex), HElement>>,
}

impl fmt::Debug for SmashAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmashAlgebra")
            .field("base", &self.base)
            .field("group", &self.group)
            .field("action", &self.action)
            .finish()
    }
}

impl SmashAlgebra {
    /// Validates that each matrix is an invertible Lie automorphism and that
    /// `g ↦ action[g]` is a homomorphism.
    pub fn new(base: HopfAlgebra, group: FiniteGroup, action: Vec<Matrix>) -> Result<Self> {
        let n = base.dim();
        if action.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        let lie = base.lie();
        for (g, a) in action.iter().enumerate() {
            let name = &group.names[g];
            if a.rows != n || a.cols != n {
                return Err(Error::InvalidAction(format!("matrix of {name} is not {n}x{n}")));
            }
            if a.inverse().is_none() {
                return Err(Error::InvalidAction(format!("matrix of {name} is singular")));
            }
            for i in 0..n {
                for j in 0..n {
                    let lhs = a.apply(&unit_bracket(lie, i, j));
                    let rhs = lie.bracket_vectors(&a.column(i), &a.column(j));
                    if lhs != rhs {
                        return Err(Error::InvalidAction(format!(
                            "{name} does not preserve [e{}, e{}]",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if action[group.mul(g, h)] != action[g].mul(&action[h]) {
                    return Err(Error::InvalidAction(format!(
                        "action is not a homomorphism at ({}, {})",
                        group.names[g], group.names[h]
                    )));
                }
            }
        }
        Ok(Self { base, group, action, act_cache: RwLock::new(HashMap::new()) })
    }

    pub fn base(&self) -> &HopfAlgebra {
        &self.base
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// `(e^(a))^g`, the image of a monomial under the automorphism `g`.
    pub fn act_monomial(&self, g: usize, alpha: &MultiIndex) -> Result<HElement> {
        let key = (g, alpha.clone());
        if let Some(v) = self.act_cache.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let n = self.base.dim();
        let h = &self.base;
        let mut acc = h.one();
        for i in 0..n {
            let image: HElement = (0..n)
                .map(|k| (MultiIndex::unit(n, k), self.action[g].get(k, i).clone()))
                .collect();
            let mut power = h.one();
            for _ in 0..alpha.0[i] {
                power = h.mul(&power, &image)?;
            }
            acc = h.mul(&acc, &power.scale(&(Scalar::one() / factorial(alpha.0[i]))))?;
        }
        self.act_cache.write().unwrap().insert(key, acc.clone());
        Ok(acc)
    }

    pub fn act(&self, g: usize, h: &HElement) -> Result<HElement> {
        let mut out = HElement::zero();
        for (alpha, c) in h {
            out.add_scaled(&self.act_monomial(g, alpha)?, c);
        }
        Ok(out)
    }

    fn attach(h: HElement, g: usize) -> LinComb<SmashBasis> {
        h.into_iter().map(|(a, c)| (SmashBasis(a, g), c)).collect()
    }

    /// `(h1 ⊗ g1)(h2 ⊗ g2) = h1 h2^{g1} ⊗ g1 g2`.
    pub fn mul(&self, a: &SmashBasis, b: &SmashBasis) -> Result<LinComb<SmashBasis>> {
        let twisted = self.act_monomial(a.1, &b.0)?;
        let prod = self.base.mul(&HElement::basis(a.0.clone()), &twisted)?;
        Ok(Self::attach(prod, self.group.mul(a.1, b.1)))
    }
}

fn unit_bracket(lie: &super::LieData, i: usize, j: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); lie.dim()];
    for (k, c) in lie.bracket(i, j) {
        v[k] = c;
    }
    v
}

impl HopfStructure for SmashAlgebra {
    type Basis = SmashBasis;

    fn basis_up_to(&self, degree: u32) -> Vec<SmashBasis> {
        MultiIndex::up_to_degree(self.base.dim(), degree)
            .into_iter()
            .flat_map(|a| (0..self.group.order()).map(move |g| SmashBasis(a.clone(), g)))
            .collect()
    }

    fn unit(&self) -> SmashBasis {
        SmashBasis(MultiIndex::zero(self.base.dim()), self.group.identity)
    }

    fn mul_basis(&self, a: &SmashBasis, b: &SmashBasis) -> Result<LinComb<SmashBasis>> {
        self.mul(a, b)
    }

    fn coproduct_basis(&self, a: &SmashBasis) -> Result<LinComb<(SmashBasis, SmashBasis)>> {
        Ok(self
            .base
            .coproduct_monomial(&a.0, 2)
            .into_iter()
            .map(|(mut k, c)| {
                let second = k.pop().unwrap();
                let first = k.pop().unwrap();
                ((SmashBasis(first, a.1), SmashBasis(second, a.1)), c)
            })
            .collect())
    }

    fn counit_basis(&self, a: &SmashBasis) -> Scalar {
        if a.0.is_zero() {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    }

    /// `S(h ⊗ g) = S(h)^{g^-1} ⊗ g^-1`.
    fn antipode_basis(&self, a: &SmashBasis) -> Result<LinComb<SmashBasis>> {
        let inv = self.group.inverse(a.1);
        let s = self.base.antipode_monomial(&a.0)?;
        Ok(Self::attach(self.act(inv, &s)?, inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{hopf_axiom_suite, LieData};
    use crate::scalar::int;

    fn z2_on_line() -> SmashAlgebra {
        let base = HopfAlgebra::new(LieData::abelian(1), 6).unwrap();
        let action = vec![Matrix::identity(1), Matrix::from_rows(vec![vec![int(-1)]])];
        SmashAlgebra::new(base, FiniteGroup::cyclic(2), action).unwrap()
    }

    #[test]
    fn reflection_twists_the_product() {
        let s = z2_on_line();
        let e = MultiIndex(vec![1]);
        let got = s.mul(&SmashBasis(e.clone(), 1), &SmashBasis(e, 0)).unwrap();
        assert_eq!(got, LinComb::term(SmashBasis(MultiIndex(vec![2]), 1), int(-2)));
        let one = MultiIndex(vec![0]);
        let gg = s.mul(&SmashBasis(one.clone(), 1), &SmashBasis(one.clone(), 1)).unwrap();
        assert_eq!(gg, LinComb::basis(SmashBasis(one, 0)));
    }

    #[test]
    fn trivial_group_reduces_to_base_product() {
        let base = HopfAlgebra::new(LieData::aff1(), 6).unwrap();
        let s = SmashAlgebra::new(base, FiniteGroup::trivial(), vec![Matrix::identity(2)]).unwrap();
        let a = MultiIndex(vec![0, 1]);
        let b = MultiIndex(vec![1, 0]);
        let want = SmashAlgebra::attach(s.base().pbw_mul(&a, &b).unwrap(), 0);
        assert_eq!(s.mul(&SmashBasis(a, 0), &SmashBasis(b, 0)).unwrap(), want);
    }

    #[test]
    fn smash_axioms_hold() {
        let report = hopf_axiom_suite(&z2_on_line(), 4).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let base = || HopfAlgebra::new(LieData::aff1(), 4).unwrap();
        // Swapping e1 and e2 does not preserve [e1, e2] = e2.
        let swap = Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        let err = SmashAlgebra::new(base(), FiniteGroup::cyclic(2), vec![Matrix::identity(2), swap]);
        assert!(matches!(err, Err(Error::InvalidAction(_))));
        let singular = Matrix::zeros(2, 2);
        let err = SmashAlgebra::new(base(), FiniteGroup::cyclic(2), vec![Matrix::identity(2), singular]);
        assert!(matches!(err, Err(Error::InvalidAction(_))));
        // e2 ↦ -e2 is an automorphism of aff(1) of order 2.
        let flip = Matrix::from_rows(vec![vec![int(1), int(0)], vec![int(0), int(-1)]]);
        let ok = SmashAlgebra::new(base(), FiniteGroup::cyclic(2), vec![Matrix::identity(2), flip]);
        assert!(ok.is_ok());
    }
}
