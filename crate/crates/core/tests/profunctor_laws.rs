mod common;

use equipment::prof::{
    associator, associator_inv, companion, companion_identities_hold, compose, conjoint, conjoint_identities_hold,
    left_unitor, left_unitor_inv, right_unitor, right_unitor_inv,
};
use equipment::{FinFunctor, ProCell, Profunctor};
use proptest::prelude::*;

use common::{poset, posets_with_functor, profunctor, relation};

proptest! {
    #[test]
    fn unitors_are_inverse_isos(j in profunctor(4)) {
        let (l, r) = (left_unitor(&j), right_unitor(&j));
        prop_assert!(l.is_iso() && r.is_iso());
        prop_assert_eq!(left_unitor_inv(&j).vcompose(&l).unwrap(), ProCell::identity(&j));
        prop_assert_eq!(right_unitor_inv(&j).vcompose(&r).unwrap(), ProCell::identity(&j));
    }

    #[test]
    fn composition_is_associative_up_to_iso(
        (a, b, c, d) in (poset(3), poset(3), poset(3), poset(3)),
        s in proptest::collection::vec((0..8usize, 0..8usize), 0..3),
        t in proptest::collection::vec((0..8usize, 0..8usize), 0..3),
        u in proptest::collection::vec((0..8usize, 0..8usize), 0..3),
    ) {
        let (j, h, l) = (relation(a, b.clone(), &s), relation(b, c.clone(), &t), relation(c, d, &u));
        let alpha = associator(&j, &h, &l).unwrap();
        prop_assert!(alpha.is_iso());
        let back = alpha.vcompose(&associator_inv(&j, &h, &l).unwrap()).unwrap();
        prop_assert_eq!(back, ProCell::identity(alpha.src()));
    }

    #[test]
    fn companions_and_conjoints(f in posets_with_functor(4)) {
        prop_assert!(companion_identities_hold(&f));
        prop_assert!(conjoint_identities_hold(&f));
        let (cs, cj) = (companion(&f), conjoint(&f));
        prop_assert!(cs.cart.is_cartesian() && cs.opcart.is_opcartesian());
        prop_assert!(cj.cart.is_cartesian() && cj.opcart.is_opcartesian());
        // f_*(x, y) = C(fx, y) and f^*(y, x) = C(y, fx)
        let c = f.cod();
        for x in 0..f.dom().objects() {
            for y in 0..c.objects() {
                prop_assert_eq!(cs.prof.size(x, y), c.hom(f.obj(x), y).len());
                prop_assert_eq!(cj.prof.size(y, x), c.hom(y, f.obj(x)).len());
            }
        }
    }

    #[test]
    fn restrictions_are_cartesian(k in profunctor(3), fi in any::<prop::sample::Index>(), gi in any::<prop::sample::Index>()) {
        let fs = equipment::fincat::enumerate_functors(k.dom(), k.dom(), 1 << 12);
        let gs = equipment::fincat::enumerate_functors(k.cod(), k.cod(), 1 << 12);
        let (f, g) = (&fs[fi.index(fs.len())], &gs[gi.index(gs.len())]);
        let (r, cell) = k.restrict(f, g).unwrap();
        prop_assert!(cell.is_cartesian());
        prop_assert!(r.validate().is_ok());
    }

    #[test]
    fn composing_with_homs_keeps_sizes(j in profunctor(4)) {
        let l = compose(&Profunctor::hom(j.dom()), &j).unwrap().prof;
        let r = compose(&j, &Profunctor::hom(j.cod())).unwrap().prof;
        prop_assert_eq!(l.size_table(), j.size_table());
        prop_assert_eq!(r.size_table(), j.size_table());
    }

    #[test]
    fn companion_of_a_composite(f in posets_with_functor(3), i in any::<prop::sample::Index>()) {
        // (h f)_* ≅ f_* ⊙ h_*, compared by fiber sizes
        let hs = equipment::fincat::enumerate_functors(f.cod(), f.cod(), 1 << 12);
        let h = &hs[i.index(hs.len())];
        let hf: FinFunctor = f.then(h).unwrap();
        let composite = compose(&companion(&f).prof, &companion(h).prof).unwrap().prof;
        prop_assert_eq!(companion(&hf).prof.size_table(), composite.size_table());
    }
}
