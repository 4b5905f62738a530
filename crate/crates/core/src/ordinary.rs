//! Finite-dimensional ordinary algebras given by structure constants, the
//! classical TKK construction for Jordan algebras, and an exact isomorphism
//! search between algebras.

use std::fmt;

use num::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Matrix};
use crate::scalar::{frac, int, LinComb, Scalar};

/// `v_i v_j = Σ_k m^k_ij v_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct OrdinaryAlgebra {
    names: Vec<String>,
    /// `products[i][j][k] = m^k_ij`.
    products: Vec<Vec<Vec<Scalar>>>,
}

impl fmt::Debug for OrdinaryAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OrdinaryAlgebra {:?}", self.names)?;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = self.product(i, j);
                if v.iter().any(|c| !c.is_zero()) {
                    let terms: Vec<String> = v
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| format!("{} {}", crate::scalar::format_scalar(c), self.names[k]))
                        .collect();
                    writeln!(f, "  {} {} = {}", self.names[i], self.names[j], terms.join(" + "))?;
                }
            }
        }
        Ok(())
    }
}

fn zero_vec(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

fn to_lin(v: &[Scalar]) -> LinComb<usize> {
    v.iter().enumerate().map(|(i, c)| (i, c.clone())).collect()
}

fn from_lin(v: &LinComb<usize>, n: usize) -> Vec<Scalar> {
    let mut out = zero_vec(n);
    for (i, c) in v {
        out[*i] = c.clone();
    }
    out
}

impl OrdinaryAlgebra {
    pub fn zero(names: Vec<String>) -> Self {
        let n = names.len();
        Self { names, products: vec![vec![zero_vec(n); n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn product(&self, i: usize, j: usize) -> &[Scalar] {
        &self.products[i][j]
    }

    pub fn set_product(&mut self, i: usize, j: usize, value: Vec<Scalar>) {
        assert_eq!(value.len(), self.dim());
        self.products[i][j] = value;
    }

    pub fn add_to_product(&mut self, i: usize, j: usize, k: usize, c: &Scalar) {
        self.products[i][j][k] += c;
    }

    /// The one-dimensional algebra `k` with `1 · 1 = 1`.
    pub fn field() -> Self {
        let mut a = Self::zero(vec!["v".into()]);
        a.set_product(0, 0, vec![int(1)]);
        a
    }

    /// `k ⊕ k` with two orthogonal idempotents.
    pub fn field_squared() -> Self {
        let mut a = Self::zero(vec!["p1".into(), "p2".into()]);
        a.set_product(0, 0, vec![int(1), int(0)]);
        a.set_product(1, 1, vec![int(0), int(1)]);
        a
    }

    /// 2x2 matrices in the matrix-unit basis `E11, E12, E21, E22`.
    pub fn matrices2() -> Self {
        let names = ["E11", "E12", "E21", "E22"].map(String::from).to_vec();
        let mut a = Self::zero(names);
        let idx = |r: usize, c: usize| 2 * r + c;
        for r in 0..2 {
            for c in 0..2 {
                for c2 in 0..2 {
                    a.set_product(idx(r, c), idx(c, c2), unit_vec(4, idx(r, c2)));
                }
            }
        }
        a
    }

    /// `sl_2` with basis `e, h, f`.
    pub fn sl2() -> Self {
        let mut a = Self::zero(["e", "h", "f"].map(String::from).to_vec());
        a.set_product(0, 2, vec![int(0), int(1), int(0)]);
        a.set_product(2, 0, vec![int(0), int(-1), int(0)]);
        a.set_product(1, 0, vec![int(2), int(0), int(0)]);
        a.set_product(0, 1, vec![int(-2), int(0), int(0)]);
        a.set_product(1, 2, vec![int(0), int(0), int(-2)]);
        a.set_product(2, 1, vec![int(0), int(0), int(2)]);
        a
    }

    pub fn abelian(n: usize) -> Self {
        Self::zero((1..=n).map(|i| format!("a{i}")).collect())
    }

    /// The Jordan algebra `J(f) = k 1 ⊕ W` of a symmetric bilinear form `f`
    /// on `W`: `(a + w)(b + u) = (ab + f(w, u)) + (a u + b w)`.
    pub fn jordan_bilinear(form: &Matrix) -> Result<Self> {
        let m = form.rows;
        if form.cols != m {
            return Err(Error::Internal("bilinear form must be square".into()));
        }
        let n = m + 1;
        let mut names = vec!["1".to_string()];
        names.extend((1..=m).map(|i| format!("w{i}")));
        let mut a = Self::zero(names);
        for i in 0..n {
            a.set_product(0, i, unit_vec(n, i));
            a.set_product(i, 0, unit_vec(n, i));
        }
        for i in 0..m {
            for j in 0..m {
                let mut v = zero_vec(n);
                v[0] = form.get(i, j).clone();
                a.set_product(i + 1, j + 1, v);
            }
        }
        Ok(a)
    }

    /// Structure constants `[x, y]` from an anticommutative product; the
    /// minus-algebra of an associative algebra.
    pub fn commutator_algebra(&self) -> Self {
        let mut out = Self::zero(self.names.clone());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = self.product(i, j).iter().zip(self.product(j, i)).map(|(a, b)| a - b).collect();
                out.set_product(i, j, v);
            }
        }
        out
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, m) in self.products[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        out[k] += &c * m;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `y ↦ x y`, column convention.
    pub fn left_mul_matrix(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.mul(x, &unit_vec(n, j));
            for (i, c) in col.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        m
    }

    fn basis_triples(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let n = self.dim();
        (0..n).flat_map(move |i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.product(i, j) == self.product(j, i)))
    }

    pub fn is_anticommutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| self.product(i, j).iter().zip(self.product(j, i)).all(|(a, b)| (a + b).is_zero()))
        })
    }

    pub fn is_associative(&self) -> bool {
        let n = self.dim();
        self.basis_triples().all(|(i, j, k)| {
            let (a, b, c) = (unit_vec(n, i), unit_vec(n, j), unit_vec(n, k));
            self.mul(&self.mul(&a, &b), &c) == self.mul(&a, &self.mul(&b, &c))
        })
    }

    pub fn is_lie(&self) -> bool {
        let n = self.dim();
        self.is_anticommutative()
            && self.basis_triples().all(|(i, j, k)| {
                let (a, b, c) = (unit_vec(n, i), unit_vec(n, j), unit_vec(n, k));
                let t1 = self.mul(&a, &self.mul(&b, &c));
                let t2 = self.mul(&b, &self.mul(&c, &a));
                let t3 = self.mul(&c, &self.mul(&a, &b));
                (0..n).all(|l| (&t1[l] + &t2[l] + &t3[l]).is_zero())
            })
    }

    /// Commutativity plus the linearized identity
    /// `[abcd] + [dbca] + [cbad] = {abcd} + {acbd} + {adcb}` on basis quadruples.
    pub fn is_jordan(&self) -> bool {
        if !self.is_commutative() {
            return false;
        }
        let n = self.dim();
        let right = |a: &[Scalar], b: &[Scalar], c: &[Scalar], d: &[Scalar]| {
            self.mul(a, &self.mul(b, &self.mul(c, d)))
        };
        let pair = |a: &[Scalar], b: &[Scalar], c: &[Scalar], d: &[Scalar]| {
            self.mul(&self.mul(a, b), &self.mul(c, d))
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let (a, b, c, d) = (unit_vec(n, i), unit_vec(n, j), unit_vec(n, k), unit_vec(n, l));
                        let lhs = [right(&a, &b, &c, &d), right(&d, &b, &c, &a), right(&c, &b, &a, &d)];
                        let rhs = [pair(&a, &b, &c, &d), pair(&a, &c, &b, &d), pair(&a, &d, &c, &b)];
                        for m in 0..n {
                            let l_sum: Scalar = lhs.iter().map(|v| v[m].clone()).sum();
                            let r_sum: Scalar = rhs.iter().map(|v| v[m].clone()).sum();
                            if l_sum != r_sum {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Dimension of the span of all products.
    pub fn derived_dim(&self) -> usize {
        let mut ech = Echelon::new();
        for row in &self.products {
            for v in row {
                ech.insert(&to_lin(v));
            }
        }
        ech.rank()
    }

    /// Dimension of `{x : x y = y x = 0 for all y}`.
    pub fn annihilator_dim(&self) -> usize {
        let n = self.dim();
        // x ↦ (x v_j, v_j x)_j as a linear map; its kernel.
        let columns: Vec<LinComb<(usize, usize, usize)>> = (0..n)
            .map(|i| {
                let mut col = LinComb::zero();
                for j in 0..n {
                    for (k, c) in self.products[i][j].iter().enumerate() {
                        col.add_term((0, j, k), c.clone());
                    }
                    for (k, c) in self.products[j][i].iter().enumerate() {
                        col.add_term((1, j, k), c.clone());
                    }
                }
                col
            })
            .collect();
        crate::linalg::nullspace(&columns).len()
    }

    /// Image of this algebra's structure under `X` (columns are the images of
    /// basis vectors in `other`) agrees with `other`'s product.
    pub fn is_homomorphism(&self, other: &OrdinaryAlgebra, x: &Matrix) -> bool {
        let n = self.dim();
        let images: Vec<Vec<Scalar>> = (0..n).map(|i| x.column(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let lhs = x.apply(self.product(i, j));
                let rhs = other.mul(&images[i], &images[j]);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Searches for an algebra isomorphism `self → other`, returned as the
    /// matrix whose columns are the images of `self`'s basis vectors.
    pub fn find_isomorphism(&self, other: &OrdinaryAlgebra, options: &IsoSearch) -> Option<Matrix> {
        if self.dim() != other.dim()
            || self.derived_dim() != other.derived_dim()
            || self.annihilator_dim() != other.annihilator_dim()
        {
            return None;
        }
        let n = self.dim();
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let words = WordBasis::new(self);
        let gens = &words.generators;
        let try_seed = |seed: &[Vec<Scalar>]| -> Option<Matrix> {
            let x = words.extend(self, other, seed)?;
            self.is_homomorphism(other, &x).then_some(x)
        };

        let scales = [int(1), int(-1), int(2), int(-2), frac(1, 2), frac(-1, 2), int(3), int(-3), frac(1, 3), frac(-1, 3)];
        // Same-index seeds with per-generator scales.
        let mut counter = vec![0usize; gens.len()];
        loop {
            let seed: Vec<Vec<Scalar>> = gens
                .iter()
                .zip(&counter)
                .map(|(&g, &s)| unit_vec(n, g).into_iter().map(|c| c * &scales[s]).collect())
                .collect();
            if let Some(x) = try_seed(&seed) {
                return Some(x);
            }
            if !advance(&mut counter, scales.len()) {
                break;
            }
        }

        // Small boxes of candidate images, pruned by the characteristic
        // polynomial of left multiplication.
        if n <= 4 {
            let entries = [int(0), int(1), int(-1), int(2), int(-2), frac(1, 2), frac(-1, 2)];
            let mut all: Vec<Vec<Scalar>> = vec![Vec::new()];
            for _ in 0..n {
                all = all
                    .into_iter()
                    .flat_map(|p| {
                        entries.iter().map(move |e| {
                            let mut q = p.clone();
                            q.push(e.clone());
                            q
                        })
                    })
                    .collect();
            }
            all.retain(|v| v.iter().any(|c| !c.is_zero()));
            let candidates: Vec<Vec<Vec<Scalar>>> = gens
                .iter()
                .map(|&g| {
                    let target = charpoly(&self.left_mul_matrix(&unit_vec(n, g)));
                    all.iter()
                        .filter(|v| charpoly(&other.left_mul_matrix(v)) == target)
                        .cloned()
                        .collect()
                })
                .collect();
            let mut counter = vec![0usize; gens.len()];
            let mut budget = options.box_budget;
            if candidates.iter().all(|c| !c.is_empty()) {
                loop {
                    if budget == 0 {
                        break;
                    }
                    budget -= 1;
                    let seed: Vec<Vec<Scalar>> =
                        counter.iter().zip(&candidates).map(|(&i, c)| c[i].clone()).collect();
                    if let Some(x) = try_seed(&seed) {
                        return Some(x);
                    }
                    if !advance_mixed(&mut counter, &candidates.iter().map(Vec::len).collect::<Vec<_>>()) {
                        break;
                    }
                }
            }
        }

        // Random signed, scaled permutations of basis vectors.
        let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
        let mut perm: Vec<usize> = (0..n).collect();
        for _ in 0..options.random_budget {
            perm.shuffle(&mut rng);
            let seed: Vec<Vec<Scalar>> = gens
                .iter()
                .enumerate()
                .map(|(i, _)| {
                    let s = &scales[rng.gen_range(0..scales.len())];
                    unit_vec(n, perm[i]).into_iter().map(|c| c * s).collect()
                })
                .collect();
            if let Some(x) = try_seed(&seed) {
                return Some(x);
            }
        }
        None
    }
}

/// Knobs for the isomorphism search.
#[derive(Clone, Debug)]
pub struct IsoSearch {
    pub seed: u64,
    pub box_budget: usize,
    pub random_budget: usize,
}

impl Default for IsoSearch {
    fn default() -> Self {
        Self { seed: 0x5eed, box_budget: 2_000_000, random_budget: 20_000 }
    }
}

fn advance(counter: &mut [usize], base: usize) -> bool {
    for c in counter.iter_mut() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

fn advance_mixed(counter: &mut [usize], bases: &[usize]) -> bool {
    for (c, &b) in counter.iter_mut().zip(bases) {
        *c += 1;
        if *c < b {
            return true;
        }
        *c = 0;
    }
    false
}

/// Characteristic polynomial coefficients by Faddeev-LeVerrier.
pub fn charpoly(m: &Matrix) -> Vec<Scalar> {
    let n = m.rows;
    let mut coeffs = vec![Scalar::zero(); n + 1];
    coeffs[n] = Scalar::one();
    let mut mk = Matrix::zeros(n, n);
    let id = Matrix::identity(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = m.mul(&mk);
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1] * id.get(i, i);
            next.set(i, i, v);
        }
        let am = m.mul(&next);
        let trace: Scalar = (0..n).map(|i| am.get(i, i).clone()).sum();
        coeffs[n - k] = -trace / int(k as i64);
        mk = next;
    }
    coeffs
}

/// A basis of an algebra made of iterated products of a few basis vectors.
struct WordBasis {
    generators: Vec<usize>,
    /// Each entry is a generator (by position in `generators`) or the product of two earlier entries.
    words: Vec<Word>,
    /// Columns: the word vectors in the source algebra.
    inverse: Matrix,
}

#[derive(Clone, Copy)]
enum Word {
    Gen(usize),
    Mul(usize, usize),
}

impl WordBasis {
    fn closure(alg: &OrdinaryAlgebra, gens: &[usize]) -> (Vec<Word>, Vec<Vec<Scalar>>) {
        let n = alg.dim();
        let mut ech = Echelon::new();
        let mut words = Vec::new();
        let mut vecs: Vec<Vec<Scalar>> = Vec::new();
        for (p, &g) in gens.iter().enumerate() {
            let v = unit_vec(n, g);
            if ech.insert(&to_lin(&v)).is_none() {
                words.push(Word::Gen(p));
                vecs.push(v);
            }
        }
        let mut frontier = 0;
        while frontier < vecs.len() {
            let upto = vecs.len();
            for a in 0..upto {
                for b in 0..upto {
                    if a < frontier && b < frontier {
                        continue;
                    }
                    let v = alg.mul(&vecs[a], &vecs[b]);
                    if ech.insert(&to_lin(&v)).is_none() {
                        words.push(Word::Mul(a, b));
                        vecs.push(v);
                    }
                }
            }
            frontier = upto;
        }
        (words, vecs)
    }

    fn new(alg: &OrdinaryAlgebra) -> Self {
        let n = alg.dim();
        let mut gens: Vec<usize> = Vec::new();
        for i in 0..n {
            if Self::closure(alg, &gens).1.len() == n {
                break;
            }
            gens.push(i);
        }
        let mut k = gens.len();
        while k > 0 {
            k -= 1;
            let mut trial = gens.clone();
            trial.remove(k);
            if Self::closure(alg, &trial).1.len() == n {
                gens = trial;
            }
        }
        let (words, vecs) = Self::closure(alg, &gens);
        let w = Matrix::from_rows((0..n).map(|i| vecs.iter().map(|v| v[i].clone()).collect()).collect());
        let inverse = w.inverse().expect("word basis spans");
        Self { generators: gens, words, inverse }
    }

    /// The linear map sending each generator to the given image and each
    /// word to the corresponding product of images.
    fn extend(&self, _src: &OrdinaryAlgebra, dst: &OrdinaryAlgebra, images: &[Vec<Scalar>]) -> Option<Matrix> {
        let n = dst.dim();
        let mut vecs: Vec<Vec<Scalar>> = Vec::with_capacity(self.words.len());
        for w in &self.words {
            let v = match *w {
                Word::Gen(p) => images[p].clone(),
                Word::Mul(a, b) => dst.mul(&vecs[a], &vecs[b]),
            };
            vecs.push(v);
        }
        let y = Matrix::from_rows((0..n).map(|i| vecs.iter().map(|v| v[i].clone()).collect()).collect());
        let x = y.mul(&self.inverse);
        x.inverse().map(|_| x)
    }
}

/// Element of the structure algebra of a Jordan algebra: `L_a + D` stored as
/// the pair of matrices `(L_a, D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructurePair {
    pub mult: Matrix,
    pub der: Matrix,
}

impl StructurePair {
    fn coords(&self) -> LinComb<usize> {
        let n = self.mult.rows;
        let mut out = LinComb::zero();
        for i in 0..n {
            for j in 0..n {
                out.add_term(i * n + j, self.mult.get(i, j).clone());
                out.add_term(n * n + i * n + j, self.der.get(i, j).clone());
            }
        }
        out
    }

    fn bracket(&self, other: &Self) -> Self {
        let comm = |a: &Matrix, b: &Matrix| a.mul(b).sub(&b.mul(a));
        // [L_a + D, L_b + T] = L_{Db} - L_{Ta} + [L_a, L_b] + [D, T], with L_{Db} = [D, L_b].
        let mult = comm(&self.der, &other.mult).sub(&comm(&other.der, &self.mult));
        let der = {
            let a = comm(&self.mult, &other.mult);
            let b = comm(&self.der, &other.der);
            let mut s = a.clone();
            for i in 0..a.rows {
                for j in 0..a.cols {
                    s.set(i, j, a.get(i, j) + b.get(i, j));
                }
            }
            s
        };
        Self { mult, der }
    }

    fn apply(&self, x: &[Scalar], star: bool) -> Vec<Scalar> {
        let m = self.mult.apply(x);
        let d = self.der.apply(x);
        m.iter().zip(&d).map(|(a, b)| if star { b - a } else { a + b }).collect()
    }
}

/// The classical TKK Lie algebra `T(j) = j⁻ ⊕ S_0(j) ⊕ j⁺`.
#[derive(Clone, Debug)]
pub struct OrdinaryTkk {
    pub algebra: OrdinaryAlgebra,
    pub s0: Vec<StructurePair>,
    pub rank: usize,
}

/// Builds `T(j)` for a Jordan algebra `j`, with `S_0(j)` spanned greedily by
/// `U_{a,b} = L_{ab} + [L_a, L_b]` over basis pairs in lex order, then closed
/// under the structure bracket.
pub fn ordinary_tkk(j: &OrdinaryAlgebra) -> Result<OrdinaryTkk> {
    if !j.is_jordan() {
        return Err(Error::JordanPreconditionFailed("input algebra is not Jordan".into()));
    }
    let r = j.dim();
    let l: Vec<Matrix> = (0..r).map(|i| j.left_mul_matrix(&unit_vec(r, i))).collect();
    let comm = |a: &Matrix, b: &Matrix| a.mul(b).sub(&b.mul(a));
    let mut ech = Echelon::new();
    let mut s0: Vec<StructurePair> = Vec::new();
    let push = |p: StructurePair, ech: &mut Echelon<usize>, s0: &mut Vec<StructurePair>| {
        if ech.insert(&p.coords()).is_none() {
            s0.push(p);
        }
    };
    for a in 0..r {
        for b in 0..r {
            let ab = j.product(a, b);
            let mult = j.left_mul_matrix(ab);
            push(StructurePair { mult, der: comm(&l[a], &l[b]) }, &mut ech, &mut s0);
        }
    }
    let mut frontier = 0;
    while frontier < s0.len() {
        let upto = s0.len();
        for x in 0..upto {
            for y in 0..upto {
                if x < frontier && y < frontier {
                    continue;
                }
                let br = s0[x].bracket(&s0[y]);
                push(br, &mut ech, &mut s0);
            }
        }
        frontier = upto;
    }
    let s = s0.len();
    let n = 2 * r + s;
    let mut names: Vec<String> = (0..r).map(|i| format!("{}-", j.names()[i])).collect();
    names.extend((1..=s).map(|i| format!("u{i}")));
    names.extend((0..r).map(|i| format!("{}+", j.names()[i])));
    let mut out = OrdinaryAlgebra::zero(names);
    let minus = |i: usize| i;
    let zero = |i: usize| r + i;
    let plus = |i: usize| r + s + i;

    // Express structure pairs in the S0 basis.
    let mut basis_ech = Echelon::new();
    for p in &s0 {
        basis_ech.insert(&p.coords());
    }
    let express = |p: &StructurePair| -> Result<Vec<Scalar>> {
        let combo = basis_ech
            .express(&p.coords())
            .ok_or_else(|| Error::Internal("S0 is not closed under the bracket".into()))?;
        Ok(from_lin(&combo, s))
    };
    let place = |v: &[Scalar], offset: usize| -> Vec<Scalar> {
        let mut out = zero_vec(n);
        for (i, c) in v.iter().enumerate() {
            out[offset + i] = c.clone();
        }
        out
    };
    for a in 0..r {
        for b in 0..r {
            let ab = j.product(a, b);
            let u = StructurePair { mult: j.left_mul_matrix(ab), der: comm(&l[a], &l[b]) };
            let u_star = StructurePair { mult: u.mult.sub(&u.mult).sub(&u.mult), der: u.der.clone() };
            out.set_product(minus(a), plus(b), place(&express(&u)?, r));
            out.set_product(plus(a), minus(b), place(&express(&u_star)?, r));
        }
    }
    for x in 0..s {
        for a in 0..r {
            let e = unit_vec(r, a);
            let sa = s0[x].apply(&e, false);
            let sa_star = s0[x].apply(&e, true);
            out.set_product(zero(x), minus(a), place(&sa, 0));
            out.set_product(minus(a), zero(x), place(&sa.iter().map(|c| -c).collect::<Vec<_>>(), 0));
            out.set_product(zero(x), plus(a), place(&sa_star, r + s));
            out.set_product(plus(a), zero(x), place(&sa_star.iter().map(|c| -c).collect::<Vec<_>>(), r + s));
        }
        for y in 0..s {
            out.set_product(zero(x), zero(y), place(&express(&s0[x].bracket(&s0[y]))?, r));
        }
    }
    if !out.is_lie() {
        return Err(Error::Internal("classical TKK bracket fails the Lie identities".into()));
    }
    Ok(OrdinaryTkk { algebra: out, s0, rank: r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_examples_lie_in_their_varieties() {
        assert!(OrdinaryAlgebra::field().is_jordan());
        assert!(OrdinaryAlgebra::field_squared().is_jordan());
        assert!(OrdinaryAlgebra::matrices2().is_associative());
        assert!(!OrdinaryAlgebra::matrices2().is_commutative());
        assert!(OrdinaryAlgebra::sl2().is_lie());
        assert!(OrdinaryAlgebra::matrices2().commutator_algebra().is_lie());
        let j = OrdinaryAlgebra::jordan_bilinear(&Matrix::identity(2)).unwrap();
        assert!(j.is_jordan());
        assert!(!j.is_associative() || j.dim() < 3);
    }

    #[test]
    fn tkk_of_the_field_is_sl2() {
        let t = ordinary_tkk(&OrdinaryAlgebra::field()).unwrap();
        assert_eq!(t.algebra.dim(), 3);
        let x = t.algebra.find_isomorphism(&OrdinaryAlgebra::sl2(), &IsoSearch::default()).unwrap();
        assert!(t.algebra.is_homomorphism(&OrdinaryAlgebra::sl2(), &x));
    }

    #[test]
    fn tkk_of_a_spin_factor() {
        let j = OrdinaryAlgebra::jordan_bilinear(&Matrix::identity(2)).unwrap();
        let t = ordinary_tkk(&j).unwrap();
        assert_eq!(t.s0.len(), 4);
        assert_eq!(t.algebra.dim(), 10);
        assert_eq!(t.algebra.derived_dim(), 10);
        assert_eq!(t.algebra.annihilator_dim(), 0);
    }

    #[test]
    fn isomorphism_search_rejects_abelian() {
        assert!(OrdinaryAlgebra::sl2().find_isomorphism(&OrdinaryAlgebra::abelian(3), &IsoSearch::default()).is_none());
        let id = OrdinaryAlgebra::sl2().find_isomorphism(&OrdinaryAlgebra::sl2(), &IsoSearch::default()).unwrap();
        assert_eq!(id, Matrix::identity(3));
    }

    #[test]
    fn charpoly_of_diagonal() {
        let m = Matrix::from_rows(vec![vec![int(2), int(0)], vec![int(0), int(3)]]);
        assert_eq!(charpoly(&m), vec![int(6), int(-5), int(1)]);
    }

    #[test]
    fn box_search_finds_a_nontrivial_basis_change() {
        // sl2 in the basis (h, e+f, e-f) has no same-index scaled isomorphism to (e, h, f).
        let sl2 = OrdinaryAlgebra::sl2();
        let p = Matrix::from_rows(vec![
            vec![int(0), int(1), int(1)],
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(-1)],
        ]);
        let pinv = p.inverse().unwrap();
        let mut other = OrdinaryAlgebra::zero(["a", "b", "c"].map(String::from).to_vec());
        for i in 0..3 {
            for j in 0..3 {
                let prod = sl2.mul(&p.column(i), &p.column(j));
                other.set_product(i, j, pinv.apply(&prod));
            }
        }
        assert!(other.is_lie());
        let x = other.find_isomorphism(&sl2, &IsoSearch::default()).unwrap();
        assert!(other.is_homomorphism(&sl2, &x));
    }
}
