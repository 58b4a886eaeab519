use proptest::prelude::*;

use prolong_core::lie::groups::group_by_name;
use prolong_core::prolongation::prolong_element;
use prolong_core::{
    act_on_tangent, apply, apply_inverse_action, space_by_name, theta, theta_inverse, DifferentialPath,
    ProlongedBundle, Representation, Sampler, StarElement,
};

const SPACES: [&str; 3] = ["circle", "sphere", "euclidean"];

fn star(name: &str, s: &mut Sampler) -> StarElement {
    let d = group_by_name(name).unwrap();
    StarElement::new(s.algebra_element(&d), s.group_element(&d).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_round_trips(seed in any::<u64>(), group in prop::sample::select(vec!["so2", "so3", "se2"])) {
        let mut s = Sampler::new(seed);
        let p = star(group, &mut s);
        let back = theta_inverse(&theta(&p)).unwrap();
        prop_assert!(back.distance(&p) <= 1e-10);
    }

    #[test]
    fn prolongation_is_multiplicative(seed in any::<u64>(), space in prop::sample::select(SPACES.to_vec())) {
        let space = space_by_name(space).unwrap();
        let mut s = Sampler::new(seed);
        for id in space.representations() {
            let rep = Representation::by_id(id, space.subgroup()).unwrap();
            let k1 = space.random_subgroup_element(&mut s).unwrap();
            let k2 = space.random_subgroup_element(&mut s).unwrap();
            let lhs = prolong_element(&rep, &k1.multiply(&k2).unwrap(), DifferentialPath::Analytic).unwrap();
            let rhs = prolong_element(&rep, &k1, DifferentialPath::Analytic).unwrap()
                .product(&prolong_element(&rep, &k2, DifferentialPath::Analytic).unwrap());
            let gap = (lhs.matrix() - rhs.matrix()).amax();
            prop_assert!(gap <= 1e-10, "{id}: {gap}");
            prop_assert!(lhs.block_structure_valid());
        }
    }

    #[test]
    fn inverse_action_undoes_action(seed in any::<u64>(), space in prop::sample::select(SPACES.to_vec())) {
        let bundle = ProlongedBundle::from_catalog(space, None).unwrap();
        let mut s = Sampler::new(seed);
        let k = bundle.space().random_subgroup_element(&mut s).unwrap();
        let v = bundle.random_fiber(&mut s);
        let p = prolong_element(bundle.representation(), &k, DifferentialPath::Analytic).unwrap();
        let w = apply_inverse_action(bundle.representation(), k.a(), k.g(), &apply(&p, &v).unwrap()).unwrap();
        prop_assert!(w.distance(&v) <= 1e-10);
    }

    #[test]
    fn tangent_action_is_a_left_action(seed in any::<u64>(), space in prop::sample::select(SPACES.to_vec())) {
        let space = space_by_name(space).unwrap();
        let mut s = Sampler::new(seed);
        let p = space.random_star(&mut s).unwrap();
        let q = space.random_star(&mut s).unwrap();
        let v = space.coset_label(&space.random_star(&mut s).unwrap()).unwrap();
        let lhs = act_on_tangent(&p, &act_on_tangent(&q, &v).unwrap()).unwrap();
        let rhs = act_on_tangent(&p.multiply(&q).unwrap(), &v).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-9);
    }

    #[test]
    fn equivalence_witness_reproduces_target(seed in any::<u64>(), space in prop::sample::select(SPACES.to_vec())) {
        let bundle = ProlongedBundle::from_catalog(space, None).unwrap();
        let mut s = Sampler::new(seed);
        let p = bundle.random_point_in_chart(&mut s).unwrap();
        let k = bundle.space().random_subgroup_element(&mut s).unwrap();
        let q = bundle.prolonged_action(&p, &k).unwrap();
        let w = bundle.are_equivalent(&p, &q).expect("witness");
        prop_assert!(bundle.prolonged_action(&p, &w).unwrap().distance(&q) <= 1e-8);
        let c = bundle.canonicalize(&q).unwrap();
        prop_assert!(c.distance(&bundle.canonicalize(&p).unwrap()) <= 1e-8);
    }
}
