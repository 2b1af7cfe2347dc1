//! Combinator-built brackets against the catalog, Poisson maps between
//! levels, and electromagnetic couplings in limiting cases.

use std::sync::Arc;

use hamcouple::brackets::dense::{assemble, jacobi_study_with, make_divergence_free, skew_residual, tiny_domain};
use hamcouple::brackets::{self, *};
use hamcouple::functional::random_state;
use hamcouple::grid::Grid3;
use hamcouple::reduction::{self, verify_poisson_map, ProjectionMap, STRICT_TOL};
use hamcouple::state::{Constants, Domain, State};
use hamcouple::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cube(dims: [usize; 3]) -> Arc<Domain> {
    Domain::spatial(Grid3::new(dims, [1.0, 1.2, 0.9]).unwrap())
}

fn gap(a: &State, b: &State) -> f64 {
    let mut d = a.clone();
    d.axpy(-1.0, b).unwrap();
    d.max_abs()
}

fn neutral() -> Constants {
    let mut k = Constants::default();
    k.species[0].z = 0.0;
    k
}

/// Hydrodynamics in `(M, rho, s)` times Maxwell, with `M` dragging `E` as a
/// dual one-form and `B` as a two-form.
fn semidirect_total() -> Semidirect {
    let base = Arc::new(direct_product(Arc::new(hydro_named("M", "rho", "s")), Arc::new(em())).unwrap());
    semidirect_vector(
        base,
        "M",
        vec![
            Action::new("E", Role::Dual, ActionKind::OneForm),
            Action::new("B", Role::Primal, ActionKind::TwoForm),
        ],
    )
    .unwrap()
}

#[test]
fn semidirect_reproduces_neutral_total_momentum_bracket() {
    let k = neutral();
    let cat = emhd_total();
    let sd = semidirect_total();
    let dom = cube([8, 8, 8]);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for seed in 0..3 {
        let mut x = random_state(&dom, &cat.schema(), seed, 1, 0.3).unwrap();
        make_divergence_free(&mut x, &mut rng, &["E", "B"]).unwrap();
        let dh = random_state(&dom, &cat.schema(), 50 + seed, 1, 1.0).unwrap();
        let a = cat.apply(&k, &x, &dh).unwrap();
        let b = sd
            .apply(&k, &x.project_onto(&sd.schema()).unwrap(), &dh.project_onto(&sd.schema()).unwrap())
            .unwrap()
            .project_onto(&cat.schema())
            .unwrap();
        assert!(gap(&a, &b) < 1e-12 * (1.0 + a.max_abs()), "seed {seed}: {:e}", gap(&a, &b));
    }
}

#[test]
fn semidirect_differs_once_charged() {
    let k = Constants::default();
    let cat = emhd_total();
    let sd = semidirect_total();
    let dom = cube([6, 5, 4]);
    let mut x = random_state(&dom, &cat.schema(), 1, 1, 0.3).unwrap();
    make_divergence_free(&mut x, &mut ChaCha8Rng::seed_from_u64(1), &["E", "B"]).unwrap();
    let dh = random_state(&dom, &cat.schema(), 2, 1, 1.0).unwrap();
    let a = cat.apply(&k, &x, &dh).unwrap();
    let b = sd
        .apply(&k, &x.project_onto(&sd.schema()).unwrap(), &dh.project_onto(&sd.schema()).unwrap())
        .unwrap()
        .project_onto(&cat.schema())
        .unwrap();
    assert!(gap(&a, &b) > 1e-3);
}

#[test]
fn canonical_field_drag_is_poisson() {
    let base = Arc::new(direct_product(Arc::new(hydro_named("M", "rho", "s")), Arc::new(em_canonical())).unwrap());
    let sd = semidirect_vector(
        base,
        "M",
        vec![
            Action::new("A", Role::Primal, ActionKind::OneForm),
            Action::new("Y", Role::Dual, ActionKind::OneForm),
        ],
    )
    .unwrap();
    let k = Constants::default();
    let dom = tiny_domain(&sd, 5).unwrap();
    let x = random_state(&dom, &sd.schema(), 3, 1, 0.3).unwrap();
    assert!(skew_residual(&assemble(&sd, &k, &x).unwrap()) < 1e-12);
    for n in [5, 6] {
        let j = jacobi_study_with(&sd, &k, n, 1, 2, &[]).unwrap();
        assert!(j.residual < 1e-10 * (1.0 + j.scale), "n = {n}: {j:?}");
    }
}

#[test]
fn direct_product_of_two_maxwell_copies() {
    let a: Arc<dyn Bracket> = Arc::new(em());
    let b: Arc<dyn Bracket> = Arc::new(renamed(Arc::new(em()), &[("E", "E2"), ("B", "B2")]).unwrap());
    let p = direct_product(a.clone(), b.clone()).unwrap();
    assert_eq!(p.schema().names(), vec!["E", "B", "E2", "B2"]);
    assert_eq!(p.structure(), Structure::Constant);
    let k = Constants::default();
    let dom = cube([4, 4, 3]);
    let x = random_state(&dom, &p.schema(), 0, 1, 1.0).unwrap();
    let dh = random_state(&dom, &p.schema(), 1, 1, 1.0).unwrap();
    let xdot = p.apply(&k, &x, &dh).unwrap();
    for part in [&a, &b] {
        let s = part.schema();
        let direct = part.apply(&k, &x.project_onto(&s).unwrap(), &dh.project_onto(&s).unwrap()).unwrap();
        assert!(gap(&xdot.project_onto(&s).unwrap(), &direct) < 1e-14);
    }
    assert_eq!(p.constraints().len(), 4);
    assert!(matches!(direct_product(a.clone(), a), Err(Error::Schema(_))));
}

#[test]
fn neutral_emhd_decouples() {
    let k = neutral();
    let b = emhd();
    let h = hydro();
    let m = em();
    let dom = cube([6, 5, 4]);
    let x = random_state(&dom, &b.schema(), 0, 1, 0.3).unwrap();
    let dh = random_state(&dom, &b.schema(), 1, 1, 1.0).unwrap();
    let xdot = b.apply(&k, &x, &dh).unwrap();
    for part in [&h as &dyn Bracket, &m] {
        let s = part.schema();
        let direct = part.apply(&k, &x.project_onto(&s).unwrap(), &dh.project_onto(&s).unwrap()).unwrap();
        assert!(gap(&xdot.project_onto(&s).unwrap(), &direct) < 1e-13, "{}", part.name());
    }
}

#[test]
fn uniform_field_pulls_charged_fluid() {
    let mut k = Constants::default();
    k.species[0].z = 2.0;
    k.species[0].m = 3.0;
    k.eps0 = 0.5;
    let b = emhd();
    let dom = cube([4, 4, 4]);
    let n = dom.space().len();
    let x = random_state(&dom, &b.schema(), 0, 0, 0.0).unwrap();
    let mut dh = x.zeros_like();
    dh.set_vector("E", [vec![0.2; n], vec![-0.1; n], vec![0.3; n]]).unwrap();
    let xdot = b.apply(&k, &x, &dh).unwrap();
    let c = k.charge_over_mass(0).unwrap() / k.eps0;
    let rho = x.scalar("rho").unwrap()[0];
    let u = xdot.vector("u").unwrap();
    for (i, he) in [0.2, -0.1, 0.3].iter().enumerate() {
        assert!(u[i].iter().all(|v| (v - c * rho * he).abs() < 1e-14));
    }
    assert_eq!(xdot.vector("E").unwrap()[0].iter().fold(0.0f64, |m, v| m.max(v.abs())), 0.0);
}

#[test]
fn momentum_shift_pushes_emhd_to_total_momentum_form() {
    let k = Constants::default();
    let map = reduction::momentum_shift(k.eps0);
    let dom = cube([8, 8, 8]);
    for seed in 0..3 {
        let x = random_state(&dom, &map.fine_schema(), seed, 1, 0.3).unwrap();
        let dh = random_state(&dom, &map.coarse_schema(), 40 + seed, 1, 1.0).unwrap();
        let r = reduction::pushforward_residual(&map, &emhd(), &emhd_total(), &k, &x, &dh).unwrap();
        assert!(r < 1e-9, "seed {seed}: {r:e}");
    }
}

fn map_states(b: &dyn Bracket, dom: &Arc<Domain>) -> Vec<State> {
    (0..3).map(|s| random_state(dom, &b.schema(), s, 1, 0.3).unwrap()).collect()
}

#[test]
fn binary_reductions_are_poisson_maps() {
    let k = Constants::binary();
    let dom = cube([6, 5, 4]);
    let hb = hydro_binary();
    let cases: Vec<(Arc<dyn ProjectionMap>, Arc<dyn Bracket>, Arc<dyn Bracket>)> = vec![
        (Arc::new(reduction::binary_sum()), hb.clone(), Arc::new(classical_binary())),
        (Arc::new(reduction::total_density()), Arc::new(classical_binary()), Arc::new(hydro())),
        (Arc::new(reduction::charged_binary_sum()), Arc::new(bemhd()), Arc::new(cbemhd())),
    ];
    for (map, fine, coarse) in cases {
        let xs = map_states(fine.as_ref(), &dom);
        let r = verify_poisson_map(map.as_ref(), fine.as_ref(), coarse.as_ref(), &k, &xs, 9).unwrap();
        assert!(r.passed() && r.max_relative < STRICT_TOL, "{r}");
    }
}

#[test]
fn classical_binary_rhs_is_projected_binary_rhs() {
    let k = Constants::binary();
    let dom = cube([6, 5, 4]);
    let map = reduction::binary_sum();
    let (fine, coarse) = (hydro_binary(), classical_binary());
    let x = random_state(&dom, &fine.schema(), 4, 1, 0.3).unwrap();
    let dh = random_state(&dom, &coarse.schema(), 5, 1, 1.0).unwrap();
    let r = reduction::pushforward_residual(&map, fine.as_ref(), &coarse, &k, &x, &dh).unwrap();
    assert!(r < 1e-10, "{r:e}");
    let map = reduction::charged_binary_sum();
    let x = random_state(&dom, &bemhd().schema(), 4, 1, 0.3).unwrap();
    let dh = random_state(&dom, &cbemhd().schema(), 5, 1, 1.0).unwrap();
    let r = reduction::pushforward_residual(&map, &bemhd(), &cbemhd(), &k, &x, &dh).unwrap();
    assert!(r < 1e-10, "{r:e}");
}

#[test]
fn mismatched_map_schemas_rejected() {
    let k = Constants::binary();
    let dom = cube([4, 4, 4]);
    let xs = map_states(&hydro(), &dom);
    let err = verify_poisson_map(&reduction::binary_sum(), &hydro(), &classical_binary(), &k, &xs, 0).unwrap_err();
    assert!(matches!(err, Error::Schema(_)));
    assert!(reduction::by_name("nosuch", &k, None).is_err());
    assert!(brackets::by_name("nosuch").is_err());
}
