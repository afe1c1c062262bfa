mod common;

use equipment::kanext::{pointwise_lan, product_comparison, tensor, Presheaf};
use equipment::sifted::{category_of_elements, is_cosifted, k_span_components};
use equipment::FinCat;
use proptest::prelude::*;

use common::{copresheaf, lattices, poset};

fn join(m: &FinCat, xs: &[usize]) -> Option<usize> {
    let ubs: Vec<usize> = (0..m.objects()).filter(|&u| xs.iter().all(|&x| m.leq(x, u))).collect();
    ubs.iter().copied().find(|&u| ubs.iter().all(|&v| m.leq(u, v)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lan_into_a_lattice_is_the_join_formula(a in poset(3), b in poset(3), m in 0..6usize, i in any::<prop::sample::Index>(), k in any::<prop::sample::Index>()) {
        let m = lattices()[m].clone();
        let js = equipment::fincat::enumerate_functors(&a, &b, 1 << 12);
        let ds = equipment::fincat::enumerate_functors(&a, &m, 1 << 12);
        let (j, d) = (&js[i.index(js.len())], &ds[k.index(ds.len())]);
        let w = pointwise_lan(d, j).unwrap();
        for y in 0..b.objects() {
            let below: Vec<usize> = (0..a.objects()).filter(|&x| b.leq(j.obj(x), y)).map(|x| d.obj(x)).collect();
            prop_assert_eq!(Some(w.l.obj(y)), join(&m, &below));
        }
    }

    #[test]
    fn co_yoneda_sizes(d in copresheaf(4)) {
        let a = d.cat();
        for y in 0..a.objects() {
            prop_assert_eq!(tensor(&Presheaf::representable(a.clone(), y), &d).size(), d.size(y));
        }
    }

    #[test]
    fn span_connectivity_is_symmetric(c in poset(4)) {
        for x in 0..c.objects() {
            for y in 0..c.objects() {
                prop_assert_eq!(k_span_components(&c, &[x, y]), k_span_components(&c, &[y, x]));
            }
        }
    }

    #[test]
    fn two_spans_control_all_k_spans(d in copresheaf(3)) {
        let el = category_of_elements(&d);
        let n = el.cat.objects();
        prop_assert_eq!(n, d.sizes().iter().sum::<usize>());
        if is_cosifted(&el.cat) && n <= 6 {
            let objs: Vec<usize> = (0..n).collect();
            for k in 1..=4 {
                for t in equipment::fpmonad::product(&vec![objs.clone(); k]) {
                    prop_assert_eq!(k_span_components(&el.cat, &t), 1);
                }
            }
        }
    }

    #[test]
    fn empty_product_comparison_counts_components(d in copresheaf(4)) {
        // d ⋆ 1 is the set of components of El d
        let el = category_of_elements(&d);
        let c = product_comparison(&d, &[]);
        prop_assert_eq!(c.domain, el.cat.components().0);
        prop_assert_eq!(c.bijective, el.cat.components().0 == 1);
    }
}
