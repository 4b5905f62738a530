use std::sync::Arc;

use proptest::prelude::*;
use pseudoalg::constructions::curr_build;
use pseudoalg::dual::{fourier, FourierKind};
use pseudoalg::format::{emit, parse_file};
use pseudoalg::hopf::TensorElement;
use pseudoalg::pseudo::Ambient;
use pseudoalg::scalar::int;
use pseudoalg::{
    CanonicalTensor, HElement, HopfAlgebra, LieData, LinComb, MultiIndex, OrdinaryAlgebra, PModuleElement,
    PseudoAlgebra,
};

fn aff1() -> Arc<HopfAlgebra> {
    Arc::new(HopfAlgebra::new(LieData::aff1(), 10).unwrap())
}

fn multi(max: u32) -> impl Strategy<Value = MultiIndex> {
    (0..=max, 0..=max).prop_filter("bounded degree", move |(a, b)| a + b <= max).prop_map(|(a, b)| MultiIndex(vec![a, b]))
}

fn coeff() -> impl Strategy<Value = i64> {
    prop_oneof![-3i64..=-1, 1i64..=3]
}

fn tensor(arity: usize) -> impl Strategy<Value = TensorElement> {
    prop::collection::vec((prop::collection::vec(multi(3), arity), coeff()), 1..4)
        .prop_map(|terms| terms.into_iter().map(|(s, c)| (s, int(c))).collect())
}

fn element(rank: usize) -> impl Strategy<Value = PModuleElement> {
    prop::collection::vec((multi(2), 0..rank, coeff()), 1..4)
        .prop_map(|terms| terms.into_iter().map(|(m, k, c)| ((m, k), int(c))).collect())
}

/// `(g ⊗ 1) · A` (slot 0) or `(1 ⊗ g) · A` (slot 1) in ambient coordinates.
fn left_act(h: &HopfAlgebra, slot: usize, g: &MultiIndex, a: &Ambient) -> Ambient {
    let mut factors = vec![MultiIndex::zero(g.dim()); 2];
    factors[slot] = g.clone();
    let left = TensorElement::basis(factors);
    let mut out = Ambient::zero();
    for ((slots, k), c) in a {
        for (s, cs) in &h.tensor_mul(&left, &TensorElement::basis(slots.clone())).unwrap() {
            out.add_term((s.clone(), *k), c * cs);
        }
    }
    out
}

fn matrices(h: Arc<HopfAlgebra>) -> PseudoAlgebra {
    curr_build(h, &OrdinaryAlgebra::matrices2()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coproduct_is_multiplicative(a in multi(3), b in multi(3)) {
        let h = aff1();
        let ab = h.pbw_mul(&a, &b).unwrap();
        let lhs = h.coproduct(&ab).unwrap();
        let da = h.coproduct(&HElement::basis(a)).unwrap();
        let db = h.coproduct(&HElement::basis(b)).unwrap();
        prop_assert_eq!(lhs, h.tensor_mul(&da, &db).unwrap());
    }

    #[test]
    fn fourier_transforms_invert(t in tensor(3)) {
        let h = aff1();
        let f = fourier(&h, FourierKind::F, &t).unwrap();
        prop_assert_eq!(fourier(&h, FourierKind::Finv, &f).unwrap(), t.clone());
        let f = fourier(&h, FourierKind::Fprime, &t).unwrap();
        prop_assert_eq!(fourier(&h, FourierKind::FprimeInv, &f).unwrap(), t);
    }

    #[test]
    fn pseudoproduct_is_h_bilinear(a in element(4), b in element(4), g in multi(2)) {
        let h = aff1();
        let p = matrices(h.clone());
        let ga = p.act(&HElement::basis(g.clone()), &a).unwrap();
        let lhs = p.mul_elements(&ga, &b).unwrap();
        let ab = p.to_ambient(&p.mul_elements(&a, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, p.from_ambient(2, &left_act(&h, 0, &g, &ab)).unwrap());
        let gb = p.act(&HElement::basis(g.clone()), &b).unwrap();
        let lhs = p.mul_elements(&a, &gb).unwrap();
        prop_assert_eq!(lhs, p.from_ambient(2, &left_act(&h, 1, &g, &ab)).unwrap());
    }

    #[test]
    fn canonical_form_is_a_fixed_point(a in element(4), b in element(4)) {
        let p = matrices(aff1());
        let ab = p.mul_elements(&a, &b).unwrap();
        prop_assert_eq!(p.from_ambient(2, &p.to_ambient(&ab).unwrap()).unwrap(), ab);
    }

    #[test]
    fn definition_files_round_trip(entries in prop::collection::vec(
        prop::collection::vec((multi(2), multi(2), 0..2usize, coeff()), 0..3), 4)) {
        let h = aff1();
        let table: Vec<Vec<CanonicalTensor>> = entries
            .chunks(2)
            .map(|row| {
                row.iter()
                    .map(|terms| {
                        let lc: LinComb<_> = terms.iter().map(|(x, y, k, c)| ((vec![x.clone()], y.clone(), *k), int(*c))).collect();
                        CanonicalTensor::from_terms(2, lc)
                    })
                    .collect()
            })
            .collect();
        let p = PseudoAlgebra::new(h, vec!["a".into(), "b".into()], table).unwrap();
        let text = emit(&p, None);
        let back = parse_file(&text, None).unwrap();
        prop_assert_eq!(emit(&back.algebra, None), text);
        for i in 0..2 {
            for j in 0..2 {
                prop_assert_eq!(back.algebra.entry(i, j), p.entry(i, j));
            }
        }
    }
}
