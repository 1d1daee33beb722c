use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use supercohom::cochain::{differential_matrix, Cochain, CochainSpace};
use supercohom::cohomology::{ordinary_cohomology, restricted_cohomology};
use supercohom::filiform::restricted_model_filiform;
use supercohom::io::{algebra_to_json, parse_algebra, CochainJson, RestrictedTwoJson};
use supercohom::linalg::Matrix;
use supercohom::repr::Representation;
use supercohom::restricted::{d_star_matrix, RestrictedSpace, RestrictedTwoCochain};
use supercohom::superalg::SuperAlgebra;

fn prime() -> impl Strategy<Value = u64> {
    prop_oneof![Just(3u64), Just(5u64)]
}

fn algebra() -> impl Strategy<Value = SuperAlgebra> {
    (prime(), any::<u64>()).prop_map(|(p, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda: Vec<u32> = (0..p).map(|_| rng.gen_range(0..p as u32)).collect();
        restricted_model_filiform(p, &lambda).unwrap()
    })
}

fn parity_change(l: &SuperAlgebra, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = l.dim();
    loop {
        let mut g = Matrix::zeros(n, n, l.p());
        for r in 0..n {
            for c in 0..n {
                if l.parity(r) == l.parity(c) {
                    g.set(r, c, rng.gen_range(0..l.p()));
                }
            }
        }
        if g.inverse().is_some() {
            return g;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn algebra_json_round_trip(l in algebra()) {
        let back = parse_algebra(&algebra_to_json(&l)).unwrap();
        prop_assert_eq!(back, l);
    }

    #[test]
    fn dimensions_survive_basis_change(l in algebra(), seed in any::<u64>()) {
        let g = parity_change(&l, seed);
        let moved = Arc::new(l.change_basis(&g).unwrap());
        let l = Arc::new(l);
        prop_assert!(moved.check_restricted().passed());
        for q in 0..3 {
            let a = restricted_cohomology(&l, &Representation::trivial(l.clone()), q).unwrap().report;
            let b = restricted_cohomology(&moved, &Representation::trivial(moved.clone()), q).unwrap().report;
            prop_assert_eq!((a.dim_h, a.dim_h_even, a.dim_h_odd), (b.dim_h, b.dim_h_even, b.dim_h_odd));
        }
    }

    #[test]
    fn boundaries_are_cycles(l in algebra(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = Arc::new(l);
        let t = Representation::trivial(l.clone());
        let p = l.p();
        for q in 0..2 {
            let src = CochainSpace::new(&l, &t, q).unwrap().len();
            let c: Vec<u32> = (0..src).map(|_| rng.gen_range(0..p)).collect();
            let b = differential_matrix(&l, &t, q).unwrap().mul_vec(&c);
            prop_assert!(differential_matrix(&l, &t, q + 1).unwrap().mul_vec(&b).iter().all(|&v| v == 0));
            let src = RestrictedSpace::new(&l, &t, q).unwrap().len();
            let c: Vec<u32> = (0..src).map(|_| rng.gen_range(0..p)).collect();
            let b = d_star_matrix(&l, &t, q).unwrap().mul_vec(&c);
            prop_assert!(d_star_matrix(&l, &t, q + 1).unwrap().mul_vec(&b).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn restricted_contains_ordinary_in_degree_one(l in algebra()) {
        let l = Arc::new(l);
        let t = Representation::trivial(l.clone());
        let h = ordinary_cohomology(&l, &t, 1).unwrap();
        let hr = restricted_cohomology(&l, &t, 1).unwrap();
        prop_assert!(h.cycles.contains_subspace(&hr.cycles));
        prop_assert!(h.report.dim_h >= hr.report.dim_h);
    }

    #[test]
    fn representatives_are_cycles_and_round_trip(l in algebra()) {
        let l = Arc::new(l);
        let t = Representation::trivial(l.clone());
        let h = restricted_cohomology(&l, &t, 2).unwrap();
        let rs = RestrictedSpace::new(&l, &t, 2).unwrap();
        prop_assert!(h.classes_form_basis(&h.report.representatives));
        for v in &h.report.representatives {
            let pair = RestrictedTwoCochain::from_coords(&rs, v).unwrap();
            let json = serde_json::to_string(&RestrictedTwoJson::from_pair(&rs, &pair)).unwrap();
            let parsed: RestrictedTwoJson = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(parsed.to_pair(&rs, &l).unwrap(), pair);
        }
        let space = CochainSpace::new(&l, &t, 2).unwrap();
        let ho = ordinary_cohomology(&l, &t, 2).unwrap();
        for v in &ho.report.representatives {
            let c = Cochain::from_coords(&space, v.clone()).unwrap();
            let json = serde_json::to_string(&CochainJson::from_cochain(&space, &c)).unwrap();
            let parsed: CochainJson = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(parsed.to_cochain(&space, &l).unwrap().coords, c.coords);
        }
    }
}
