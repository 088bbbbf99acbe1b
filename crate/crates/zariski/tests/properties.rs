//! Property tests for the algebraic invariants: exact rational
//! arithmetic, normal-form linearity and idempotence, saturation and
//! elimination laws, containment as a partial order, Plucker
//! transversality, and the closed-subgroup certificates on computed
//! closures.

use num::{One, Zero};
use proptest::prelude::*;

use zariski::bounds::Bounds;
use zariski::constructible::{
    rank_stratum, witness_point, BoolOp, Cell, ConstructibleSet, WitnessConfig,
};
use zariski::groebner::reduce;
use zariski::group::{cyclic_closure, group_closure};
use zariski::ideal::{Ideal, QuotientBasis};
use zariski::matideal::{flatten, ideal_of_matrices, inverse_stable, product_contained_in};
use zariski::matrix::{
    finite_order, one_param_closure, plucker, transversal, wedge, QMatrix, Subspace,
};
use zariski::monomial::{Monomial, MonomialOrder};
use zariski::poly::Polynomial;
use zariski::rat::{int, rat, Rat};
use zariski::semigroup::{max_rank_closure, semigroup_closure, Generators};
use zariski::vars::VarSpace;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| !r.is_zero())
}

fn xy() -> VarSpace {
    VarSpace::new(["x", "y"]).unwrap()
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec(((0u32..3, 0u32..3), -4i64..=4), 1..4).prop_map(|terms| {
        let space = xy();
        Polynomial::from_terms(
            &space,
            terms
                .into_iter()
                .map(|((a, b), c)| (Monomial::new(vec![a, b]), int(c))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_inverses_multiply_to_one(a in nonzero_rat(), b in nonzero_rat()) {
        let q = a.clone() / b.clone();
        let p = b / a;
        prop_assert!((q * p).is_one());
    }

    #[test]
    fn reduce_is_linear_and_idempotent(p in small_poly(), q in small_poly()) {
        let space = xy();
        let basis = Ideal::parse(&space, &["x^2 - y", "y^2 - 1"]).unwrap();
        let gb = basis.gb(MonomialOrder::GrevLex);
        let red = |f: &Polynomial| reduce(f, &gb, MonomialOrder::GrevLex);
        prop_assert_eq!(red(&p.add(&q)), red(&p).add(&red(&q)));
        prop_assert_eq!(red(&red(&p)), red(&p));
    }

    #[test]
    fn reduce_zero_iff_member(p in small_poly()) {
        let space = xy();
        let ideal = Ideal::parse(&space, &["x*y - 1"]).unwrap();
        let witness = ideal.gens()[0].mul(&p);
        prop_assert!(ideal.contains_poly(&witness));
    }

    #[test]
    fn saturation_contains_and_idempotent(p in small_poly()) {
        prop_assume!(!p.is_zero() && !p.is_constant());
        let space = xy();
        let base = Ideal::new(&space, vec![p.mul(&Polynomial::var(&space, 0))]);
        let divisor = Ideal::parse(&space, &["x"]).unwrap();
        let once = base.saturate(&divisor).unwrap();
        prop_assert!(once.contains(&base).unwrap());
        let twice = once.saturate(&divisor).unwrap();
        prop_assert_eq!(&once, &twice);
        // the factored picture: (x * p) : x^infty recovers exactly (p)
        // whenever x does not divide p
        if !base.in_radical(&Polynomial::var(&space, 0)) {
            let direct = Ideal::new(&space, vec![p.clone()]);
            let x = Polynomial::var(&space, 0);
            let p_without_x = p.terms().all(|(m, _)| m.exp(0) == 0);
            if p_without_x {
                let _ = x;
                prop_assert_eq!(&once, &direct);
            }
        }
    }

    #[test]
    fn elimination_composes(p in small_poly(), q in small_poly()) {
        let space = VarSpace::new(["a", "b", "x", "y"]).unwrap();
        let lift = |f: &Polynomial| f.embed(&space, &[2, 3]);
        let a = Polynomial::var(&space, 0);
        let b = Polynomial::var(&space, 1);
        let ideal = Ideal::new(&space, vec![a.sub(&lift(&p)), b.sub(&lift(&q))]);
        let both = ideal.eliminate(&[0, 1]);
        let stepwise = ideal.eliminate(&[0]).eliminate(&[1]);
        prop_assert_eq!(both, stepwise);
    }

    #[test]
    fn containment_is_a_partial_order(p in small_poly(), q in small_poly()) {
        prop_assume!(!p.is_zero() && !q.is_zero());
        let space = xy();
        let i = Ideal::new(&space, vec![p.clone()]);
        let j = Ideal::new(&space, vec![p.clone(), q.clone()]);
        let k = Ideal::new(&space, vec![p.clone(), q.clone(), p.mul(&q)]);
        // reflexive, and transitive along a constructed chain
        prop_assert!(i.contains(&i).unwrap());
        prop_assert!(j.contains(&i).unwrap());
        prop_assert!(k.contains(&j).unwrap());
        prop_assert!(k.contains(&i).unwrap());
    }

    #[test]
    fn plucker_wedge_matches_transversality(
        u in proptest::collection::vec(-3i64..=3, 3),
        v in proptest::collection::vec(-3i64..=3, 3),
        w in proptest::collection::vec(-3i64..=3, 3),
    ) {
        let uu: Vec<Rat> = u.iter().map(|&c| int(c)).collect();
        let vv: Vec<Rat> = v.iter().map(|&c| int(c)).collect();
        let ww: Vec<Rat> = w.iter().map(|&c| int(c)).collect();
        let plane = Subspace::span_of(3, &[uu, vv]);
        let line = Subspace::span_of(3, &[ww]);
        prop_assume!(plane.dim() == 2 && line.dim() == 1);
        let wedge_vec = wedge(&plucker(&plane).unwrap(), &plucker(&line).unwrap());
        let nonzero = wedge_vec.coords.iter().any(|c| !c.is_zero());
        prop_assert_eq!(nonzero, transversal(&plane, &line).unwrap());
    }

    #[test]
    fn degree_truncation_members_reduce_to_zero(p in small_poly()) {
        prop_assume!(!p.is_zero());
        let space = xy();
        let ideal = Ideal::new(&space, vec![p]);
        for member in ideal.degree_truncate(3) {
            prop_assert!(ideal.contains_poly(&member));
            prop_assert!(member.total_degree().unwrap_or(0) <= 3);
        }
    }
}

#[test]
fn closure_keeps_every_member_point() {
    // for sampled rational points, membership in the set implies every
    // generator of the closure ideal vanishes
    let space = xy();
    let cell = Cell::new(
        Ideal::parse(&space, &["x*y"]).unwrap(),
        Ideal::parse(&space, &["x - 1"]).unwrap(),
    )
    .unwrap();
    let set = ConstructibleSet::from_cells(&space, vec![cell]).unwrap();
    let closure = set.closure().unwrap();
    let mut hits = 0;
    for a in -5i64..=5 {
        for b in -5i64..=5 {
            let pt = vec![int(a), int(b)];
            if set.member(&pt) {
                hits += 1;
                for g in closure.gens() {
                    assert!(g.evaluate(&pt).is_zero());
                }
            }
        }
    }
    assert!(hits > 0);
}

#[test]
fn witness_points_are_members() {
    let space = xy();
    let cfg = WitnessConfig::default();
    for texts in [
        vec!["x^2 - 1", "y"],
        vec!["x - 3", "y + 2"],
        vec!["y - x^2"],
    ] {
        let set = ConstructibleSet::closed(Ideal::parse(&space, &texts).unwrap());
        let pt = witness_point(&set, &cfg).unwrap();
        assert!(set.member(&pt));
    }
}

#[test]
fn boolean_ops_respect_denotation_on_a_grid() {
    let space = xy();
    let sa = ConstructibleSet::from_cells(
        &space,
        vec![Cell::new(
            Ideal::parse(&space, &["x*y - 1"]).unwrap(),
            Ideal::parse(&space, &["x - 1"]).unwrap(),
        )
        .unwrap()],
    )
    .unwrap();
    let sb = ConstructibleSet::closed(Ideal::parse(&space, &["x - y"]).unwrap());
    let union = sa.boolean(&sb, BoolOp::Union).unwrap();
    let meet = sa.boolean(&sb, BoolOp::Intersect).unwrap();
    let minus = sa.boolean(&sb, BoolOp::Minus).unwrap();
    for a in -4i64..=4 {
        for b in -4i64..=4 {
            for (num, den) in [(a, 1i64), (a, 2)] {
                let pt = vec![rat(num, den), int(b)];
                let ia = sa.member(&pt);
                let ib = sb.member(&pt);
                assert_eq!(union.member(&pt), ia || ib);
                assert_eq!(meet.member(&pt), ia && ib);
                assert_eq!(minus.member(&pt), ia && !ib);
            }
        }
    }
}

#[test]
fn one_param_closure_contains_powers() {
    let u = QMatrix::from_i64(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
    let ideal = one_param_closure(&u).unwrap();
    for k in 1..=3u64 {
        assert!(ideal.vanishes_at(&flatten(&u.pow(k))));
    }
    // the 3x3 elementary unipotent pins everything except one entry
    let e13 = QMatrix::from_i64(&[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]);
    let line = one_param_closure(&e13).unwrap();
    assert_eq!(line.dimension(), 1);
    for k in 1..=3u64 {
        assert!(line.vanishes_at(&flatten(&e13.pow(k))));
    }
}

#[test]
fn closed_subgroup_certificates_hold_on_outputs() {
    // products, identity, generators, and inverse stability on the
    // computed group closures: a closed subsemigroup of the invertible
    // matrices is a subgroup, and the certificates witness it
    let bounds = Bounds::default();
    let cases: Vec<Vec<QMatrix>> = vec![
        vec![QMatrix::from_i64(&[&[0, -1], &[1, 0]])],
        vec![QMatrix::from_i64(&[&[1, 1], &[0, 1]])],
        vec![QMatrix::from_i64(&[&[2, 0], &[0, 3]])],
        vec![
            QMatrix::from_i64(&[&[0, -1], &[1, 0]]),
            QMatrix::from_i64(&[&[1, 1], &[0, 1]]),
        ],
    ];
    for gens in cases {
        let result = group_closure(&gens, &bounds).unwrap();
        assert!(result.status.is_exact());
        let h = result.variety.ideal();
        // (a) generators and (b) identity lie on H
        for g in &gens {
            assert!(result.variety.contains(g));
        }
        assert!(result.variety.contains_identity());
        // (c) product stability as ideal containment through pullbacks
        assert!(product_contained_in(2, h, h, h).unwrap());
        // (d) inverse stability under the adjugate substitution
        assert!(inverse_stable(2, h).unwrap());
    }
}

#[test]
fn cyclic_closure_point_count_equals_order() {
    for (m, order) in [
        (QMatrix::from_i64(&[&[0, -1], &[1, 0]]), 4usize),
        (QMatrix::from_i64(&[&[-1, 0], &[0, -1]]), 2),
        (QMatrix::from_i64(&[&[0, 1], &[1, 0]]), 2),
    ] {
        assert_eq!(finite_order(&m).unwrap(), Some(order as u64));
        let closure = cyclic_closure(&m).unwrap();
        match closure.ideal().quotient_basis() {
            QuotientBasis::Finite(b) => assert_eq!(b.len(), order),
            QuotientBasis::Infinite => panic!("finite order must give finitely many points"),
        }
    }
}

#[test]
fn pseudo_inverse_lands_in_the_closure() {
    // for the scaling projector, the pseudo-inverse of the generator is
    // in the closure of the generated semigroup
    let a = QMatrix::from_i64(&[&[2, 0], &[0, 0]]);
    let bounds = Bounds::default();
    let closure = semigroup_closure(&[a.clone()], &bounds).unwrap();
    assert!(closure.status.is_exact());
    let a_plus = QMatrix::from_rows(vec![vec![rat(1, 2), int(0)], vec![int(0), int(0)]]);
    assert!(closure.contains_matrix(&a_plus));
    assert!(closure.contains_matrix(&QMatrix::from_i64(&[&[1, 0], &[0, 0]])));
}

#[test]
fn rank_filter_identity_on_small_pool() {
    // the maximum-rank closure has the same denotation as the full
    // closure intersected with the rank stratum, where both are exact
    let bounds = Bounds::default();
    let pool: Vec<Vec<QMatrix>> = vec![
        vec![QMatrix::from_i64(&[&[1, 0], &[0, 0]])],
        vec![QMatrix::from_i64(&[&[2, 0], &[0, 0]])],
        vec![QMatrix::from_i64(&[&[0, 1], &[1, 0]])],
    ];
    for gens in pool {
        let r = gens[0].rank();
        let (stratum_closure, status) = max_rank_closure(&gens, r, &bounds).unwrap();
        assert!(status.is_exact());
        let full = semigroup_closure(&gens, &bounds).unwrap();
        assert!(full.status.is_exact());
        let full_cell = ConstructibleSet::closed(full.combined().unwrap());
        let cut = full_cell
            .boolean(&rank_stratum(2, r).unwrap(), BoolOp::Intersect)
            .unwrap();
        // denotation comparison on a grid of rational matrix points
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    for d in -2i64..=2 {
                        let m = QMatrix::from_i64(&[&[a, b], &[c, d]]);
                        let pt = flatten(&m);
                        assert_eq!(
                            stratum_closure.member(&pt),
                            cut.member(&pt),
                            "mismatch at {m:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn certified_closures_reject_missing_generators() {
    let bounds = Bounds::default();
    let swap = QMatrix::from_i64(&[&[0, 1], &[1, 0]]);
    let closure = semigroup_closure(&[swap.clone()], &bounds).unwrap();
    assert!(zariski::semigroup::certify(&closure, &Generators::Matrices(vec![swap])).unwrap());
    let stranger = QMatrix::from_i64(&[&[3, 0], &[0, 1]]);
    assert!(!zariski::semigroup::certify(&closure, &Generators::Matrices(vec![stranger])).unwrap());
}

#[test]
fn invariant_stability_under_edges() {
    // f(V_p) subseteq V_q checked by pullback reduction, plus init
    // soundness
    let program = zariski::affine::parse_program(
        "vars x y; locations q1 q2; init q1;\n\
         edge q1 -> q2 { x := 3, y := 2 };\n\
         edge q2 -> q2 { x := 10*x - 8*y, y := 6*x - 4*y };",
    )
    .unwrap();
    let report = zariski::affine::location_invariants(&program, &Bounds::default()).unwrap();
    let zero = vec![Rat::zero(), Rat::zero()];
    assert!(report.locations[program.init].ideal.vanishes_at(&zero));
    for (src, f, tgt) in &program.edges {
        let v_src = &report.locations[*src].ideal;
        let v_tgt = &report.locations[*tgt].ideal;
        // pull each target generator back through the affine map
        let images: Vec<Polynomial> = (0..program.num_vars())
            .map(|i| {
                let mut p = Polynomial::constant(&program.variables, f.offset[i].clone());
                for j in 0..program.num_vars() {
                    let c = f.matrix.get(i, j);
                    if !c.is_zero() {
                        p = p.add(&Polynomial::var(&program.variables, j).scale(c));
                    }
                }
                p
            })
            .collect();
        for g in v_tgt.gens() {
            let pulled = g.substitute(&images);
            assert!(
                v_src.contains_poly(&pulled),
                "edge {src}->{tgt} does not preserve the invariant"
            );
        }
    }
}

#[test]
fn fin_plus_irred_dimension_never_drops() {
    use zariski::group::{fin_plus_irred_closure, GLVariety};
    let space = VarSpace::matrix(2);
    let torus = GLVariety::new(
        2,
        Ideal::parse(&space, &["x_1_2", "x_2_1", "x_1_1*x_2_2 - 1"]).unwrap(),
    )
    .unwrap();
    let start_dim = torus.ideal().dimension();
    let t = QMatrix::from_i64(&[&[1, 1], &[0, 1]]);
    let result = fin_plus_irred_closure(&[t], &torus, &Bounds::default()).unwrap();
    assert!(result.variety.ideal().dimension() >= start_dim);
    assert!(result.variety.contains_identity());
}

#[test]
fn scc_closure_of_the_loop_block_is_a_one_dimensional_torus() {
    // the encoded self-loop of the two-location program: a rank-3 block
    // with eigenvalues 2, 4, 1, whose relation lattice cuts a
    // one-dimensional torus
    use zariski::semigroup::{build_graph, nontrivial_sccs, scc_closure};
    let program = zariski::affine::parse_program(
        "vars x y; locations q1 q2; init q1;\n\
         edge q1 -> q2 { x := 3, y := 2 };\n\
         edge q2 -> q2 { x := 10*x - 8*y, y := 6*x - 4*y };",
    )
    .unwrap();
    let (encoded, _) = zariski::affine::encode(&program);
    let m2 = encoded[1].clone();
    assert_eq!(m2.rank(), 3);
    let graph = build_graph(&[m2.clone()], 3).unwrap();
    let sccs = nontrivial_sccs(&graph);
    assert_eq!(sccs.len(), 1);
    let (pieces, status) = scc_closure(&graph, &sccs[0], &Bounds::default()).unwrap();
    assert!(status.is_exact());
    assert_eq!(pieces.len(), 1);
    assert_eq!(pieces[0].dimension(), 1);
    for k in 1..=4u64 {
        assert!(pieces[0].vanishes_at(&flatten(&m2.pow(k))));
    }
}

#[test]
fn finite_point_ideals_count_points() {
    let pts = vec![
        QMatrix::identity(2),
        QMatrix::from_i64(&[&[0, 1], &[1, 0]]),
        QMatrix::from_i64(&[&[2, 0], &[0, 2]]),
    ];
    let ideal = ideal_of_matrices(2, &pts);
    match ideal.quotient_basis() {
        QuotientBasis::Finite(b) => assert_eq!(b.len(), 3),
        QuotientBasis::Infinite => panic!("three points"),
    }
    for p in &pts {
        assert!(ideal.vanishes_at(&flatten(p)));
    }
}
