mod common;

use std::sync::Arc;

use equipment::algebra::{adjunction_data, rbc_colax_crosscheck, BinaryProduct, ProductChoice};
use equipment::fincat::enumerate_functors;
use equipment::fpmonad::Truncation;
use equipment::FinCat;
use proptest::prelude::*;

use common::{lattices, poset};

/// Meets and top of a poset, when they exist.
fn meet(c: &FinCat, x: usize, y: usize) -> Option<usize> {
    let lbs: Vec<usize> = (0..c.objects()).filter(|&z| c.leq(z, x) && c.leq(z, y)).collect();
    lbs.iter().copied().find(|&z| lbs.iter().all(|&w| c.leq(w, z)))
}

proptest! {
    #[test]
    fn found_choices_are_meets(c in poset(5)) {
        let n = c.objects();
        let top = (0..n).find(|&t| (0..n).all(|x| c.leq(x, t)));
        let meets_exist = (0..n).all(|x| (0..n).all(|y| meet(&c, x, y).is_some()));
        match ProductChoice::find(&c) {
            Ok(p) => {
                prop_assert_eq!(Some(p.terminal()), top);
                for x in 0..n {
                    for y in 0..n {
                        prop_assert_eq!(Some(p.pair(x, y).apex), meet(&c, x, y));
                    }
                }
                let pairs: Vec<BinaryProduct> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| *p.pair(x, y)).collect();
                prop_assert!(ProductChoice::new(&c, p.terminal(), pairs).is_ok());
                prop_assert!(adjunction_data(&p, 2).holds());
            }
            Err(_) => prop_assert!(top.is_none() || !meets_exist),
        }
    }
}

#[test]
fn structure_cells_agree_with_rbc_on_lattice_maps() {
    let lats = lattices();
    for a in &lats {
        for c in &lats {
            if a.objects() + c.objects() > 8 {
                continue;
            }
            let (pa, pc) = (ProductChoice::find(a).unwrap(), ProductChoice::find(c).unwrap());
            for f in enumerate_functors(a, c, 1 << 16) {
                let x = rbc_colax_crosscheck(&f, &pa, &pc, Truncation::default()).unwrap();
                // oracle: f preserves top and binary meets
                let preserves = f.obj(pa.terminal()) == pc.terminal()
                    && (0..a.objects()).all(|p| {
                        (0..a.objects()).all(|q| f.obj(pa.pair(p, q).apex) == pc.pair(f.obj(p), f.obj(q)).apex)
                    });
                assert_eq!(x.structure_iso, preserves);
                assert!(x.agree(), "{:?}", f.obj_map());
            }
        }
    }
}

#[test]
fn swapped_projections_are_rejected() {
    let sq: Arc<FinCat> = common::square();
    let p = ProductChoice::find(&sq).unwrap();
    let mut pairs: Vec<BinaryProduct> =
        (0..4).flat_map(|x| (0..4).map(move |y| (x, y))).map(|(x, y)| *p.pair(x, y)).collect();
    // x × y with the projections of y × x
    let (a, b) = (pairs[1], pairs[4]);
    pairs[1] = BinaryProduct { p1: b.p1, p2: b.p2, ..a };
    assert!(ProductChoice::new(&sq, 3, pairs).is_err());
}
