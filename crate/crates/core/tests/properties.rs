use std::sync::OnceLock;

use proptest::prelude::*;

use jennings::catalog::{build_abelian, build_from_spec, builtin_catalog, CatalogEntry};
use jennings::classifier::{profile, FingerprintIndex};
use jennings::dvector_analysis::{
    enumerate_admissible, enumerate_weight, lemma_constraints_ok, sort_canonical, theta_p_prime,
};
use jennings::fp_linalg::{FpMatrix, FpSubspace, LinearMap};
use jennings::group_engine::{Element, PcPresentation};
use jennings::lie_dimension::{d_sequence, lie_dimension_subgroup};
use jennings::structure::{
    abelian_invariants, center, derived_subgroup, intersection, lower_central_series,
    power_subgroup, subgroup_product, Subgroup, DEFAULT_CAP,
};

fn pool() -> &'static [CatalogEntry] {
    static POOL: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    POOL.get_or_init(|| {
        builtin_catalog()
            .unwrap()
            .into_iter()
            .filter(|e| e.order() <= 1 << 12)
            .collect()
    })
}

fn group_and_elements(k: usize) -> impl Strategy<Value = (PcPresentation, Vec<Element>)> {
    (0..pool().len()).prop_flat_map(move |i| {
        let g = pool()[i].presentation.clone();
        let n = g.order() as u64;
        proptest::collection::vec(0..n, k).prop_map(move |keys| {
            let xs = keys.iter().map(|&key| g.element_of_key(key)).collect();
            (g.clone(), xs)
        })
    })
}

fn prime() -> impl Strategy<Value = u32> {
    prop_oneof![Just(2u32), Just(3), Just(5)]
}

fn matrix() -> impl Strategy<Value = (u32, Vec<Vec<i64>>)> {
    (prime(), 1usize..=6, 1usize..=6).prop_flat_map(|(p, r, c)| {
        proptest::collection::vec(proptest::collection::vec(0i64..p as i64, c), r)
            .prop_map(move |rows| (p, rows))
    })
}

/// `p^rank` counted by enumerating every combination of the rows.
fn row_space_size(p: u32, rows: &[Vec<i64>]) -> usize {
    let cols = rows[0].len();
    let mut seen = std::collections::BTreeSet::new();
    let total = (p as usize).pow(rows.len() as u32);
    for mut code in 0..total {
        let mut v = vec![0i64; cols];
        for r in rows {
            let c = (code % p as usize) as i64;
            code /= p as usize;
            for (x, y) in v.iter_mut().zip(r) {
                *x = (*x + c * y).rem_euclid(p as i64);
            }
        }
        seen.insert(v);
    }
    seen.len()
}

fn subspace(p: u32, n: usize) -> impl Strategy<Value = FpSubspace> {
    proptest::collection::vec(proptest::collection::vec(0i64..p as i64, n), 0..4)
        .prop_map(move |vs| FpSubspace::span(p, n, &vs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent_and_rank_matches_row_space((p, rows) in matrix()) {
        let a = FpMatrix::from_rows(p, &rows).unwrap();
        let (r, rank) = a.rref();
        prop_assert_eq!(r.rref().0.to_rows(), r.to_rows());
        prop_assert!(rank <= rows.len().min(rows[0].len()));
        prop_assert_eq!((p as usize).pow(rank as u32), row_space_size(p, &rows));
    }

    #[test]
    fn join_and_meet_dimensions(u in subspace(3, 5), w in subspace(3, 5)) {
        let j = u.join(&w).unwrap();
        let m = u.meet(&w).unwrap();
        prop_assert_eq!(j.dim() + m.dim(), u.dim() + w.dim());
        prop_assert!(m.is_subspace_of(&u).unwrap() && m.is_subspace_of(&w).unwrap());
        prop_assert!(u.is_subspace_of(&j).unwrap() && w.is_subspace_of(&j).unwrap());
        let common = (0..243u32)
            .map(|code| (0..5).map(|i| (code / 3u32.pow(i) % 3) as u8).collect::<Vec<_>>())
            .filter(|v| u.contains(v).unwrap() && w.contains(v).unwrap())
            .count();
        prop_assert_eq!(common, 3usize.pow(m.dim() as u32));
    }

    #[test]
    fn closure_is_an_invariant_fixed_point(
        u in subspace(2, 6),
        rows in proptest::collection::vec(proptest::collection::vec(0i64..2, 6), 6),
    ) {
        let op = FpMatrix::from_rows(2, &rows).unwrap();
        let c = u.close_under(&[&op as &dyn LinearMap]).unwrap();
        prop_assert!(u.is_subspace_of(&c).unwrap());
        prop_assert_eq!(c.close_under(&[&op as &dyn LinearMap]).unwrap().dim(), c.dim());
        for b in c.basis() {
            let mut image = vec![0u8; 6];
            op.apply(b, &mut image);
            prop_assert!(c.contains(&image).unwrap());
        }
    }

    #[test]
    fn group_axioms((g, xs) in group_and_elements(3)) {
        let (x, y, z) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(
            g.multiply(&g.multiply(x, y), z),
            g.multiply(x, &g.multiply(y, z))
        );
        prop_assert!(g.multiply(x, &g.inverse(x)).is_identity());
        prop_assert!(g.multiply(&g.inverse(x), x).is_identity());
        prop_assert_eq!(g.element_of_key(g.key(x)), x.clone());
        let o = g.element_order(x);
        prop_assert!(g.power(x, o as i64).is_identity());
        if o > 1 {
            prop_assert!(!g.power(x, (o / g.p() as u64) as i64).is_identity());
        }
        prop_assert_eq!(g.power(x, -1), g.inverse(x));
        // [x,y] = x⁻¹y⁻¹xy
        prop_assert_eq!(
            g.multiply(x, y),
            g.multiply(&g.multiply(y, x), &g.commutator(x, y))
        );
        prop_assert_eq!(g.conjugate(x, y), g.multiply(x, &g.commutator(x, y)));
    }

    #[test]
    fn abelian_round_trip(p in prime(), parts in proptest::collection::vec(1u32..4, 1..4)) {
        let total: u32 = parts.iter().sum();
        prop_assume!(total <= 7);
        let mut factors: Vec<u64> = parts.iter().map(|&e| (p as u64).pow(e)).collect();
        factors.sort_unstable_by(|a, b| b.cmp(a));
        let g = build_abelian(p, &factors).unwrap().presentation;
        prop_assert_eq!(g.order(), (p as u128).pow(total));
        prop_assert_eq!(abelian_invariants(&Subgroup::whole(&g), DEFAULT_CAP).unwrap(), factors);
    }

    #[test]
    fn theta_strips_exactly_p(p in prime(), k in 0u32..5, m in 1u64..200) {
        let t = theta_p_prime(p, m).unwrap();
        prop_assert_eq!(theta_p_prime(p, m * (p as u64).pow(k)).unwrap(), t);
        prop_assert!(t % p as u64 != 0 && m % t == 0);
    }

    #[test]
    fn normal_closure_by_random_elements((g, xs) in group_and_elements(2)) {
        let n = jennings::structure::normal_closure(&g, &xs, DEFAULT_CAP).unwrap();
        for x in &xs {
            prop_assert!(n.contains(x));
        }
        for y in g.generators() {
            for x in n.generators() {
                prop_assert!(n.contains(&g.conjugate(x, &y)));
            }
        }
        prop_assert_eq!(g.order() % n.order(), 0);
    }
}

#[test]
fn normal_form_count_equals_order() {
    for e in pool().iter().filter(|e| e.order() <= 256) {
        let g = &e.presentation;
        let keys = Subgroup::whole(g).keys(DEFAULT_CAP).unwrap();
        assert_eq!(keys.len() as u128, g.order(), "{}", e.name);
        // closure from the generators reaches every normal form exactly once
        assert_eq!(
            *keys,
            (0..g.order() as u64).collect::<Vec<_>>(),
            "{}",
            e.name
        );
    }
}

#[test]
fn series_and_power_chains_descend() {
    for e in pool() {
        let g = &e.presentation;
        let lcs = lower_central_series(g, DEFAULT_CAP).unwrap();
        for w in lcs.windows(2) {
            assert!(w[1].is_subgroup_of(&w[0]), "{}", e.name);
            assert!(w[1].order() < w[0].order(), "{}", e.name);
        }
        for gamma in &lcs {
            let mut prev = gamma.clone();
            let mut q = g.p() as u64;
            loop {
                let h = power_subgroup(gamma, q, DEFAULT_CAP).unwrap();
                assert!(h.is_subgroup_of(&prev), "{}", e.name);
                if h.is_trivial() {
                    break;
                }
                prev = h;
                q *= g.p() as u64;
            }
        }
    }
}

#[test]
fn product_formula_for_normal_subgroups() {
    for e in pool().iter().filter(|e| e.order() <= 1024) {
        let g = &e.presentation;
        let lcs = lower_central_series(g, DEFAULT_CAP).unwrap();
        let derived = derived_subgroup(&Subgroup::whole(g), DEFAULT_CAP).unwrap();
        let z = center(&Subgroup::whole(g), DEFAULT_CAP).unwrap();
        let pw = power_subgroup(&Subgroup::whole(g), g.p() as u64, DEFAULT_CAP).unwrap();
        let normals = [derived, z, pw, lcs.last().unwrap().clone()];
        for h in &normals {
            for k in &normals {
                let hk = subgroup_product(h, k, DEFAULT_CAP).unwrap();
                let m = intersection(h, k, DEFAULT_CAP).unwrap();
                assert_eq!(hk.order() * m.order(), h.order() * k.order(), "{}", e.name);
                assert!(h.is_subgroup_of(&hk) && m.is_subgroup_of(h) && m.is_subgroup_of(k));
            }
        }
    }
}

#[test]
fn class_two_center_contains_derived() {
    for spec in [
        "heisenberg:3",
        "heisenberg:5",
        "free_class2:2,4",
        "free_class2:3,3",
        "extraspecial5:3",
        "dihedral:8",
        "quaternion:8",
    ] {
        let g = build_from_spec(spec).unwrap().presentation;
        let whole = Subgroup::whole(&g);
        let d = derived_subgroup(&whole, DEFAULT_CAP).unwrap();
        assert!(
            d.is_subgroup_of(&center(&whole, DEFAULT_CAP).unwrap()),
            "{spec}"
        );
    }
}

#[test]
fn d_sequence_mass_and_lemma_on_catalog() {
    for e in pool() {
        let g = &e.presentation;
        let p = g.p();
        let d = d_sequence(g, p, DEFAULT_CAP).unwrap();
        let derived = derived_subgroup(&Subgroup::whole(g), DEFAULT_CAP).unwrap();
        assert_eq!(d.total(), derived.log_order() as u64, "{}", e.name);
        assert_eq!(
            lie_dimension_subgroup(g, p, 2, DEFAULT_CAP).unwrap(),
            derived,
            "{}",
            e.name
        );
        let (ok, why) = lemma_constraints_ok(&d);
        assert!(ok, "{} {d}: {why:?}", e.name);
    }
}

#[test]
fn profile_flags_agree_with_orders() {
    let index = FingerprintIndex::empty();
    for e in pool().iter().filter(|e| e.order() <= 1024) {
        let g = &e.presentation;
        let prof = profile(g, g.p(), &index, DEFAULT_CAP).unwrap();
        for pw in &prof.derived_powers {
            assert!(pw.facts.order <= prof.derived.order);
            for (m, gamma) in pw.gamma.iter().zip(&prof.gamma) {
                assert_eq!(m.gamma_in_power, m.meet_order == gamma.order, "{}", e.name);
                assert_eq!(
                    m.power_in_gamma,
                    m.meet_order == pw.facts.order,
                    "{}",
                    e.name
                );
            }
        }
        assert!(prof.derived_powers.last().unwrap().facts.order == 1);
        for w in prof.gamma.windows(2) {
            assert_eq!(w[0].order % w[1].order, 0);
        }
    }
}

#[test]
fn enumeration_is_complete_and_canonical() {
    // p(n) for n = 1..=12
    let partitions = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77];
    for (k, &count) in partitions.iter().enumerate() {
        let w = k as u64 + 1;
        for p in [2, 3, 7] {
            let all = enumerate_weight(p, w);
            assert_eq!(all.len(), count);
            assert!(all.iter().all(|d| d.weight() == w && d.p() == p));
            let mut sorted = all.clone();
            sort_canonical(&mut sorted);
            assert_eq!(sorted, all);
            let mut dedup = all.clone();
            dedup.dedup();
            assert_eq!(dedup.len(), all.len());
            let adm = enumerate_admissible(p, w);
            assert!(adm
                .iter()
                .all(|d| all.contains(d) && lemma_constraints_ok(d).0));
        }
    }
}
