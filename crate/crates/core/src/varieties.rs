//! Polylinear pseudo-identities with permutation twists, variety checks over
//! basis tuples, conformal n-products and left annihilators.

use std::fmt;

use rayon::prelude::*;

use crate::dual::XElement;
use crate::error::{Error, Result};
use crate::hopf::MultiIndex;
use crate::linalg::nullspace;
use crate::pseudo::{permute_ambient, Ambient, CanonKey, CanonicalTensor, PModuleElement, Permutation, PseudoAlgebra};
use crate::scalar::{int, LinComb, Scalar};

/// A binary product tree whose leaves are variable indices (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Word {
    Var(usize),
    Mul(Box<Word>, Box<Word>),
}

impl Word {
    pub fn var(i: usize) -> Self {
        Word::Var(i)
    }

    pub fn mul(a: Word, b: Word) -> Self {
        Word::Mul(Box::new(a), Box::new(b))
    }

    /// Variables in leaf order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Word::Var(i) => out.push(*i),
            Word::Mul(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Ambient value with tensor slots in leaf order.
    fn eval(&self, p: &PseudoAlgebra, args: &[Ambient]) -> Result<Ambient> {
        match self {
            Word::Var(i) => Ok(args[*i].clone()),
            Word::Mul(a, b) => {
                let x = a.eval(p, args)?;
                let y = b.eval(p, args)?;
                p.mul_ambient(&x, &y)
            }
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Word::Var(i) => write!(f, "{}", (b'a' + *i as u8) as char),
            Word::Mul(a, b) => write!(f, "({a}{b})"),
        }
    }
}

/// One summand `c · (σ ⊗_H id) w(a_1, ..., a_n)` of a pseudo-identity. The
/// twist moves the factor at leaf `k` to the slot of the variable sitting
/// there, so every summand lands in the variable order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityTerm {
    pub coeff: Scalar,
    pub word: Word,
    twist: Permutation,
}

impl IdentityTerm {
    pub fn new(coeff: Scalar, word: Word) -> Result<Self> {
        let twist = Permutation::new(word.leaves())
            .map_err(|_| Error::Internal(format!("identity word {word} must use each variable once")))?;
        Ok(Self { coeff, word, twist })
    }

    pub fn twist(&self) -> &Permutation {
        &self.twist
    }

    pub fn arity(&self) -> usize {
        self.twist.len()
    }
}

/// A named pseudo-identity `Σ terms = 0`.
#[derive(Clone, Debug)]
pub struct Identity {
    pub name: &'static str,
    pub terms: Vec<IdentityTerm>,
}

impl Identity {
    pub fn arity(&self) -> usize {
        self.terms.first().map_or(0, IdentityTerm::arity)
    }

    fn build(name: &'static str, terms: &[(i64, Word)]) -> Self {
        let terms = terms
            .iter()
            .map(|(c, w)| IdentityTerm::new(int(*c), w.clone()).expect("built-in identity words are polylinear"))
            .collect();
        Self { name, terms }
    }

    /// `a*b - σ12(b*a)`.
    pub fn commutativity() -> Self {
        let (a, b) = (Word::var(0), Word::var(1));
        Self::build("commutativity", &[(1, Word::mul(a.clone(), b.clone())), (-1, Word::mul(b, a))])
    }

    /// `[a*b] + σ12[b*a]`.
    pub fn anticommutativity() -> Self {
        let (a, b) = (Word::var(0), Word::var(1));
        Self::build("anticommutativity", &[(1, Word::mul(a.clone(), b.clone())), (1, Word::mul(b, a))])
    }

    /// `(a*b)*c - a*(b*c)`.
    pub fn associativity() -> Self {
        let (a, b, c) = (Word::var(0), Word::var(1), Word::var(2));
        Self::build(
            "associativity",
            &[
                (1, Word::mul(Word::mul(a.clone(), b.clone()), c.clone())),
                (-1, Word::mul(a, Word::mul(b, c))),
            ],
        )
    }

    /// `[a*[b*c]] - [[a*b]*c] - σ12[b*[a*c]]`.
    pub fn jacobi() -> Self {
        let (a, b, c) = (Word::var(0), Word::var(1), Word::var(2));
        Self::build(
            "jacobi",
            &[
                (1, Word::mul(a.clone(), Word::mul(b.clone(), c.clone()))),
                (-1, Word::mul(Word::mul(a.clone(), b.clone()), c.clone())),
                (-1, Word::mul(b, Word::mul(a, c))),
            ],
        )
    }

    /// Linearized Jordan identity
    /// `[abcd] + σ14[dbca] + σ13[cbad] = {abcd} + σ23{acbd} + σ24{adcb}`
    /// with `[abcd] = a(b(cd))` and `{abcd} = (ab)(cd)`.
    pub fn jordan() -> Self {
        let v = |i| Word::var(i);
        let right = |a, b, c, d| Word::mul(v(a), Word::mul(v(b), Word::mul(v(c), v(d))));
        let pair = |a, b, c, d| Word::mul(Word::mul(v(a), v(b)), Word::mul(v(c), v(d)));
        Self::build(
            "jordan",
            &[
                (1, right(0, 1, 2, 3)),
                (1, right(3, 1, 2, 0)),
                (1, right(2, 1, 0, 3)),
                (-1, pair(0, 1, 2, 3)),
                (-1, pair(0, 2, 1, 3)),
                (-1, pair(0, 3, 2, 1)),
            ],
        )
    }
}

/// The built-in varieties.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variety {
    Commutative,
    Jordan,
    Lie,
    Associative,
}

impl Variety {
    pub fn identities(self) -> Vec<Identity> {
        match self {
            Variety::Commutative => vec![Identity::commutativity()],
            Variety::Jordan => vec![Identity::commutativity(), Identity::jordan()],
            Variety::Lie => vec![Identity::anticommutativity(), Identity::jacobi()],
            Variety::Associative => vec![Identity::associativity()],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variety::Commutative => "commutative",
            Variety::Jordan => "jordan",
            Variety::Lie => "lie",
            Variety::Associative => "associative",
        }
    }
}

impl std::str::FromStr for Variety {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "commutative" => Ok(Variety::Commutative),
            "jordan" => Ok(Variety::Jordan),
            "lie" => Ok(Variety::Lie),
            "associative" => Ok(Variety::Associative),
            other => Err(format!("unknown variety `{other}`")),
        }
    }
}

fn eval_ambient(p: &PseudoAlgebra, terms: &[IdentityTerm], args: &[Ambient]) -> Result<Ambient> {
    let mut total = Ambient::zero();
    for term in terms {
        let value = term.word.eval(p, args)?;
        total.add_scaled(&permute_ambient(&term.twist, &value), &term.coeff);
    }
    Ok(total)
}

/// The canonical form of `Σ c · σ(w(args))`; zero iff the identity holds on `args`.
pub fn eval_identity(p: &PseudoAlgebra, terms: &[IdentityTerm], args: &[PModuleElement]) -> Result<CanonicalTensor> {
    let n = terms.first().map_or(args.len(), IdentityTerm::arity);
    if terms.iter().any(|t| t.arity() != n) || args.len() != n {
        return Err(Error::ArityMismatch { expected: n, found: args.len() });
    }
    let args: Vec<Ambient> = args.iter().map(|a| p.element_ambient(a)).collect();
    p.from_ambient(n, &eval_ambient(p, terms, &args)?)
}

/// First failing basis tuple of one identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub tuple: Vec<usize>,
    pub residual: CanonicalTensor,
}

#[derive(Clone, Debug)]
pub struct IdentityResult {
    pub name: &'static str,
    pub witness: Option<Witness>,
}

impl IdentityResult {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct VarietyReport {
    pub variety: Variety,
    pub results: Vec<IdentityResult>,
}

impl VarietyReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(IdentityResult::passed)
    }

    pub fn first_failure(&self) -> Option<&IdentityResult> {
        self.results.iter().find(|r| !r.passed())
    }
}

fn tuple_of(mut index: usize, rank: usize, arity: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % rank;
        index /= rank;
    }
    out
}

/// Runs one identity over every basis tuple, in lex order, and returns the
/// first failure.
pub fn check_identity(p: &PseudoAlgebra, identity: &Identity) -> Result<Option<Witness>> {
    let r = p.rank();
    let n = identity.arity();
    if r == 0 {
        return Ok(None);
    }
    let count = r.pow(n as u32);
    let basis: Vec<Ambient> = (0..r).map(|k| p.element_ambient(&p.basis_element(k))).collect();
    let found = (0..count).into_par_iter().map(|idx| -> Result<Option<Witness>> {
        let tuple = tuple_of(idx, r, n);
        let args: Vec<Ambient> = tuple.iter().map(|&k| basis[k].clone()).collect();
        let total = eval_ambient(p, &identity.terms, &args)?;
        if total.is_zero() {
            return Ok(None);
        }
        let residual = p.from_ambient(n, &total)?;
        Ok((!residual.is_zero()).then_some(Witness { tuple, residual }))
    });
    found
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()
        .map(Option::flatten)
}

/// Checks every identity of a variety on all basis tuples; H-multilinearity
/// and sesqui-linearity make basis tuples sufficient.
pub fn check_variety(p: &PseudoAlgebra, variety: Variety) -> Result<VarietyReport> {
    let mut results = Vec::new();
    for identity in variety.identities() {
        let witness = check_identity(p, &identity)?;
        results.push(IdentityResult { name: identity.name, witness });
    }
    Ok(VarietyReport { variety, results })
}

/// The conformal `n`-product `a ⊙_{t^n} b` over a one-dimensional `H`, so that
/// `a*b = Σ (1/n!) ((-D)^n ⊗ 1) ⊗_H (a ⊙_n b)`.
pub fn n_product(p: &PseudoAlgebra, a: &PModuleElement, b: &PModuleElement, n: u32) -> Result<PModuleElement> {
    if p.hopf().dim() != 1 {
        return Err(Error::WrongHopfAlgebra(format!(
            "n-products need a one-dimensional h, found dimension {}",
            p.hopf().dim()
        )));
    }
    let prod = p.mul_elements(a, b)?;
    p.x_coeff(&prod, &XElement::basis(MultiIndex(vec![n])))
}

/// Basis of `{a : a * v_j = 0 for all j}` among elements of H-degree at most
/// `probe`. Emptiness here says nothing about higher degrees.
pub fn ann_l(p: &PseudoAlgebra, probe: u32) -> Result<Vec<PModuleElement>> {
    p.hopf().check_degree(probe + p.table_degree())?;
    let unknowns: Vec<(MultiIndex, usize)> = MultiIndex::up_to_degree(p.hopf().dim(), probe)
        .into_iter()
        .flat_map(|alpha| (0..p.rank()).map(move |k| (alpha.clone(), k)))
        .collect();
    let columns = unknowns
        .par_iter()
        .map(|key| -> Result<LinComb<(usize, CanonKey)>> {
            let a = PModuleElement::basis(key.clone());
            let mut col = LinComb::zero();
            for j in 0..p.rank() {
                let prod = p.mul_elements(&a, &p.basis_element(j))?;
                for (ck, c) in prod.terms() {
                    col.add_term((j, ck.clone()), c.clone());
                }
            }
            Ok(col)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(nullspace(&columns)
        .into_iter()
        .map(|rel| rel.map_keys(|&i| unknowns[i].clone()))
        .collect())
}
