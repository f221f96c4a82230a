//! Randomized cross-module properties.

use std::collections::BTreeMap;

use proptest::prelude::*;

use thv_core::algebra::{Algebra, AlgebraElement, Generator};
use thv_core::kernel::{Param, ParamPoly, Rational};
use thv_core::modules::{levels_up_to, Module, ModuleDescriptor, ModuleVector, PBWMonomial};

fn descriptor(t: u32) -> ModuleDescriptor {
    if t == 1 {
        ModuleDescriptor::vacuum_symbolic()
    } else {
        ModuleDescriptor::twisted_symbolic(t).unwrap()
    }
}

fn generator(t: u32) -> impl Strategy<Value = Generator> {
    let alg = Algebra::new(t).unwrap();
    let offset = alg.i_offset();
    prop_oneof![
        (-6i64..=6).prop_map(Generator::l),
        (-6i64..=5).prop_map(move |n| Generator::i(&Rational::from_int(n) + &offset)),
    ]
}

fn basis_vector(t: u32) -> impl Strategy<Value = PBWMonomial> {
    let desc = descriptor(t);
    let all: Vec<PBWMonomial> = levels_up_to(&desc, &Rational::from_int(5))
        .iter()
        .flat_map(|l| thv_core::modules::basis_at_level(&desc, l))
        .collect();
    prop::sample::select(all)
}

fn case() -> impl Strategy<Value = (u32, Generator, Generator, PBWMonomial)> {
    (1u32..=4).prop_flat_map(|t| (Just(t), generator(t), generator(t), basis_vector(t)))
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Rational::new(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representation_property((t, x, y, b) in case()) {
        let m = Module::new(descriptor(t));
        let alg = m.algebra();
        let v = ModuleVector::mono(b);
        let xy = m.act(&x, &m.act(&y, &v).unwrap()).unwrap();
        let yx = m.act(&y, &m.act(&x, &v).unwrap()).unwrap();
        let rhs = m.act_elem(&alg.bracket(&x, &y).unwrap(), &v).unwrap();
        prop_assert_eq!(xy.sub(&yx), rhs);
    }

    #[test]
    fn straightening_commutes_with_specialization(
        (t, x, _y, b) in case(),
        l1 in small_rational(),
        l2 in small_rational(),
        l3 in small_rational(),
        h in small_rational(),
    ) {
        let sym = Module::new(descriptor(t));
        let conc = if t == 1 {
            ModuleDescriptor::vacuum_rational(l1.clone(), l2.clone(), l3.clone())
        } else {
            ModuleDescriptor::twisted_rational(t, l1.clone(), l3.clone(), h.clone()).unwrap()
        };
        let conc = Module::new(conc);
        let bind: BTreeMap<Param, Rational> =
            [(Param::L1, l1), (Param::L2, l2), (Param::L3, l3), (Param::H, h)].into();
        let v = ModuleVector::mono(b);
        let a = sym.act(&x, &v).unwrap().map_coeffs(|c| ParamPoly::constant(c.eval(&bind).unwrap()));
        let b = conc.act(&x, &v).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn bracket_is_bilinear(
        (t, x, y, z) in (1u32..=4).prop_flat_map(|t| (Just(t), generator(t), generator(t), generator(t))),
        c in small_rational(),
    ) {
        let alg = Algebra::new(t).unwrap();
        let mut left = AlgebraElement::gen(x.clone());
        left.add_term(z.clone(), &ParamPoly::constant(c.clone()));
        let right = AlgebraElement::gen(y.clone());
        let whole = alg.bracket_elem(&left, &right).unwrap();
        let parts = alg
            .bracket(&x, &y)
            .unwrap()
            .add(&alg.bracket(&z, &y).unwrap().scale(&ParamPoly::constant(c)));
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn algebra_text_round_trip((t, x, y, _b) in case(), c in small_rational()) {
        let alg = Algebra::new(t).unwrap();
        let mut e = alg.bracket(&x, &y).unwrap();
        e.add_term(x, &ParamPoly::constant(c));
        let back: AlgebraElement = e.to_string().parse().unwrap();
        prop_assert_eq!(back, e);
    }
}
