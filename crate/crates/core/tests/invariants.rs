//! Cross-module invariants on randomly generated inputs.

use std::sync::OnceLock;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use fellbundle::act::{self, criterion_d1t_closed, germ_groupoid, groupoid_is_hausdorff, universal_action};
use fellbundle::corpus::{self, FdFixture};
use fellbundle::gpdalg::{convolution_algebra, inner_exactness_check, FiniteGroupoid};
use fellbundle::isg::{self, InverseSemigroup, PartialBijection};
use fellbundle::linalg::seeded;
use fellbundle::topo::{semilattice_spectrum, Semilattice};
use fellbundle::xprod::{CrossedProduct, SlotOrder};

/// The inverse semigroup generated by one to three random partial
/// bijections of at most three points.
fn random_semigroup(seed: u64) -> InverseSemigroup {
    let mut rng = seeded(seed);
    let n = rng.random_range(1..=3);
    let gens: Vec<PartialBijection> = (0..rng.random_range(1..=3))
        .map(|_| {
            let mut image: Vec<usize> = (0..n).collect();
            image.shuffle(&mut rng);
            let pairs: Vec<(usize, usize)> = (0..n).filter(|_| rng.random_bool(0.7)).map(|p| (p, image[p])).collect();
            PartialBijection::new(n, &pairs).unwrap()
        })
        .collect();
    InverseSemigroup::from_partial_bijections(n, &gens, isg::DEFAULT_CAP).unwrap().0
}

/// `random_semigroup` with a unit and a zero adjoined where missing.
fn random_monoid_with_zero(seed: u64) -> InverseSemigroup {
    let s = random_semigroup(seed).with_unit();
    if s.zero().is_some() {
        s
    } else {
        s.adjoin_zero()
    }
}

fn fd_corpus() -> &'static [FdFixture] {
    static CORPUS: OnceLock<Vec<FdFixture>> = OnceLock::new();
    CORPUS.get_or_init(|| corpus::random_fd_actions(corpus::RANDOM_FD_COUNT).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn natural_order_is_a_partial_order(seed in any::<u64>()) {
        let s = random_semigroup(seed);
        prop_assert!(isg::validate(&s.table(), s.inverse_table(), s.unit(), s.zero()).unwrap().is_valid());
        for t in s.elements() {
            prop_assert!(s.leq(t, t));
            for u in s.elements() {
                prop_assert_eq!(s.leq(t, u), s.lower_bounds(t, u).contains(&t));
                prop_assert_eq!(s.lower_bounds(t, u), s.lower_bounds(u, t));
                if t != u && s.leq(t, u) {
                    prop_assert!(!s.leq(u, t));
                }
                for v in s.elements() {
                    if s.leq(t, u) && s.leq(u, v) {
                        prop_assert!(s.leq(t, v));
                    }
                }
            }
        }
    }

    #[test]
    fn e_star_unitary_equivalences(seed in any::<u64>()) {
        let s = random_semigroup(seed);
        let s0 = random_monoid_with_zero(seed);
        let star = s0.is_e_star_unitary().unwrap();
        prop_assert_eq!(star.holds, s0.order_condition().unwrap().holds);
        prop_assert_eq!(s.is_e_unitary().holds, s.adjoin_zero().is_e_star_unitary().unwrap().holds);
        let report = act::e_unitary_cross_check(&s0, &[]).unwrap();
        prop_assert!(report.consistent);
        prop_assert_eq!(report.universal_units_closed, star.holds);
    }

    #[test]
    fn universal_action_closed_units_and_hausdorffness(seed in any::<u64>()) {
        let s = random_monoid_with_zero(seed);
        let action = universal_action(&s).unwrap();
        let g = germ_groupoid(&action).unwrap();
        let closed = act::units_closed(&g).unwrap();
        prop_assert_eq!(closed, criterion_d1t_closed(&action).unwrap().holds);
        prop_assert_eq!(groupoid_is_hausdorff(&g).unwrap(), closed && action.space().is_hausdorff().unwrap());
        for a in 0..g.len() {
            let inv = g.inverse(a);
            prop_assert_eq!(g.compose(a, inv), Some(g.unit_at(g.range(a))));
            prop_assert_eq!(g.compose(inv, a), Some(g.unit_at(g.source(a))));
        }
    }

    #[test]
    fn spectrum_basis_law(seed in any::<u64>()) {
        let s = random_monoid_with_zero(seed);
        let lattice = Semilattice::of_idempotents(&s).unwrap();
        let spec = semilattice_spectrum(&lattice).unwrap();
        for e in 0..lattice.len() {
            for f in 0..lattice.len() {
                let mut meet = spec.basic_open(e).clone();
                meet.intersect_with(spec.basic_open(f));
                prop_assert_eq!(&meet, spec.basic_open(lattice.meet(e, f)));
            }
        }
        prop_assert!(spec.ideal_open_bijection_check(isg::DEFAULT_CAP).unwrap());
        prop_assert_eq!(spec.space().is_hausdorff().unwrap(), spec.space().is_discrete());
    }

    #[test]
    fn crossed_product_algebra_laws(index in 0..corpus::RANDOM_FD_COUNT, seed in any::<u64>()) {
        let cp = CrossedProduct::new(fd_corpus()[index].action.clone(), SlotOrder::Index).unwrap();
        let mut rng = seeded(seed);
        let (x, y, z) = (cp.random_element(&mut rng), cp.random_element(&mut rng), cp.random_element(&mut rng));
        let left = cp.multiply(&cp.multiply(&x, &y), &z);
        let right = cp.multiply(&x, &cp.multiply(&y, &z));
        prop_assert!(left.is_close(&right, 1e-9));
        prop_assert!(cp.star(&cp.multiply(&x, &y)).is_close(&cp.multiply(&cp.star(&y), &cp.star(&x)), 1e-9));
        prop_assert!(cp.star(&cp.star(&x)).is_close(&cp.normal_form(&x), 1e-9));
        let nf = cp.normal_form(&x);
        prop_assert!(cp.normal_form(&nf).is_close(&nf, 1e-10));
        prop_assert!(cp.expectation(&cp.star(&x)).is_close(&cp.expectation(&x).star(), 1e-10));
    }

    #[test]
    fn slot_order_does_not_change_the_algebra(index in 0..corpus::RANDOM_FD_COUNT) {
        let action = &fd_corpus()[index].action;
        let by_index = CrossedProduct::new(action.clone(), SlotOrder::Index).unwrap();
        let by_label = CrossedProduct::new(action.clone(), SlotOrder::Lex).unwrap();
        prop_assert_eq!(by_index.dim(), by_label.dim());
        prop_assert_eq!(by_index.relation_report().unwrap().normal_form_dim, by_label.relation_report().unwrap().normal_form_dim);
    }
}

#[test]
fn discrete_groupoid_algebras_have_one_dimension_per_arrow() {
    for f in corpus::discrete_actions().unwrap() {
        let g = FiniteGroupoid::from_discrete_action(&f.action).unwrap();
        let alg = convolution_algebra(&g, 1).unwrap();
        assert_eq!(alg.dim, g.len(), "{}", f.name);
        assert_eq!(alg.blocks.iter().map(|b| b.size * b.size).sum::<usize>(), g.len(), "{}", f.name);
        let invariant: Vec<usize> = (0..g.unit_count()).filter(|&x| g.is_invariant(&[x])).collect();
        for x in invariant {
            let r = inner_exactness_check(&g, &[x]).unwrap();
            assert!(r.exact, "{}", f.name);
            assert_eq!(r.dim_ideal + r.dim_quotient, r.dim_total);
        }
    }
}
