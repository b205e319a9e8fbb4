use proptest::prelude::*;

use super::*;
use crate::builder::{build_inclusion, inclusion_supported, ComplexKind, FrameSlices, TargetSpec};
use crate::complex::tests::{cell, medusa};
use crate::complex::ColorScope;
use crate::fixtures;
use crate::geometry::{alpha_values, delaunay, BigRational, SitePoint};
use crate::persistence::{extended_persistence, image_persistence};
use crate::synth::random_instance;

fn big(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn alpha_multi() -> TargetSpec {
    TargetSpec::new(ComplexKind::Alpha, ColorScope::Multi)
}

#[test]
fn single_vertex_ranks() {
    let m = medusa(vec![cell(&[0], (0, 3), &[])]);
    let rt = rank_table_extended(&m).unwrap();
    assert_eq!(rt.len(), 8);
    assert_eq!(rt.beta(0, 1, 4), 1);
    // relative homology of the pair (M, M) vanishes
    assert_eq!(rt.beta(0, 5, 5), 0);
    assert!(rt.sanity().is_ok());
    assert_eq!(diagram_from_ranks(&rt).unwrap(), vec![(0, Subdiagram::Hor, r(0, 1), r(1, 1))]);
}

#[test]
fn two_vertices_and_zero_table() {
    let m = medusa(vec![cell(&[0], (0, 3), &[]), cell(&[1], (0, 3), &[])]);
    let rt = rank_table_extended(&m).unwrap();
    for i in 1..=4 {
        for j in i..=4 {
            assert_eq!(rt.beta(0, i, j), 2);
        }
    }
    let zero = RankTable { positions: rt.positions.clone(), ranks: vec![vec![vec![0; 8]; 8]] };
    assert!(diagram_from_ranks(&zero).unwrap().is_empty());
}

#[test]
fn flip_gadget_ranks_have_no_top_dimensional_sublevel_classes() {
    let ts = fixtures::flip_gadget();
    let target = TargetSpec::new(ComplexKind::Delaunay, ColorScope::Multi);
    let (m, _) = FrameSlices::compute(&ts, &big(100.0)).unwrap().build(&ts, target).unwrap();
    let dots = diagram_from_ranks(&rank_table_extended(&m).unwrap()).unwrap();
    assert!(dots.iter().all(|k| k.0 < 2 || matches!(k.1, Subdiagram::Ver | Subdiagram::Rel)));
    assert_eq!(dots, vec![(0, Subdiagram::Hor, r(0, 1), r(1, 1))]);
}

#[test]
fn identity_image_ranks_equal_extended_ranks() {
    let ts = fixtures::hexagon_with_center(1.0);
    let (m, _) = FrameSlices::compute(&ts, &big(1.0)).unwrap().build(&ts, alpha_multi()).unwrap();
    assert_eq!(rank_table_image(&InclusionMap::identity(&m)).unwrap(), rank_table_extended(&m).unwrap());
}

#[test]
fn hexagon_ring_ranks() {
    let ts = fixtures::hexagon_ring(1.0, 1);
    let (m, _) = FrameSlices::compute(&ts, &big(0.6)).unwrap().build(&ts, alpha_multi()).unwrap();
    let rt = rank_table_extended(&m).unwrap();
    assert!(rt.sanity().is_ok());
    assert_eq!(
        diagram_from_ranks(&rt).unwrap(),
        vec![(0, Subdiagram::Hor, r(0, 1), r(1, 1)), (1, Subdiagram::Hor, r(0, 1), r(1, 1))]
    );
}

#[test]
fn blue_ring_image_matches_engine() {
    let ts = fixtures::hexagon_with_center(1.0);
    let slices = FrameSlices::compute(&ts, &big(1.0)).unwrap();
    let blue = TargetSpec::new(ComplexKind::Alpha, ColorScope::Mono(2));
    let (sub, _) = slices.build(&ts, blue).unwrap();
    let (amb, _) = slices.build(&ts, alpha_multi()).unwrap();
    let inc = build_inclusion(&sub, blue, &amb, alpha_multi()).unwrap();
    let oracle = diagram_from_ranks(&rank_table_image(&inc).unwrap()).unwrap();
    assert!(oracle.iter().all(|k| k.0 != 1));
    // last absolute position is the full complex
    let rt = rank_table_image(&inc).unwrap();
    assert_eq!(rt.beta(1, 2, 2), 0);
    assert_eq!(rank_table_extended(&sub).unwrap().beta(1, 2, 2), 1);
    assert_eq!(diagram_diff(&image_persistence(&inc).unwrap().keys(false), &oracle), Vec::<String>::new());
}

#[test]
fn empty_sub_has_no_ranks() {
    let m = medusa(vec![cell(&[0], (0, 3), &[])]);
    let empty = Medusa::empty(2, ColorScope::Multi, m.grid.clone());
    let inc = InclusionMap { sub: &empty, ambient: &m, cell_map: vec![] };
    assert!(diagram_from_ranks(&rank_table_image(&inc).unwrap()).unwrap().is_empty());
}

#[test]
fn oversized_instances_are_refused() {
    let cells = (0..MAX_CELLS as u32 + 1).map(|v| cell(&[v], (0, 3), &[])).collect();
    assert!(matches!(rank_table_extended(&medusa(cells)), Err(Error::TooLarge { .. })));
}

#[test]
fn diff_reports_both_sides() {
    let a = vec![(0, Subdiagram::Hor, r(0, 1), r(1, 1))];
    let b = vec![(1, Subdiagram::Ord, r(0, 1), r(1, 2))];
    let d = diagram_diff(&a, &b);
    assert_eq!(d.len(), 2);
    assert!(d[0].starts_with("engine only") && d[1].starts_with("oracle only"));
}

#[test]
fn simplicial_betti_of_circle_and_disk() {
    let circle: Vec<Vec<u32>> = vec![vec![0], vec![1], vec![2], vec![0, 1], vec![1, 2], vec![0, 2]];
    assert_eq!(simplicial_betti(&circle), vec![1, 1]);
    let mut disk = circle.clone();
    disk.push(vec![0, 1, 2]);
    assert_eq!(simplicial_betti(&disk), vec![1, 0, 0]);
    assert!(simplicial_betti(&[]).is_empty());
}

fn hexagon(side: f64, center: bool) -> Vec<SitePoint> {
    let mut p: Vec<SitePoint> = (0..6)
        .map(|k| {
            let a = std::f64::consts::PI / 3.0 * k as f64;
            SitePoint::new(k, &[side * a.cos(), side * a.sin()], 1)
        })
        .collect();
    if center {
        p.push(SitePoint::new(6, &[0.0, 0.0], 2));
    }
    p
}

#[test]
fn raster_of_isolated_points() {
    let one = [SitePoint::new(0, &[0.3, -1.0], 1)];
    assert_eq!(rasterized_betti(&one, ColorScope::Multi, 0.7, 256), (1, 0));
    let two = [SitePoint::new(0, &[0.0, 0.0], 1), SitePoint::new(1, &[3.0, 0.0], 2)];
    assert_eq!(rasterized_betti(&two, ColorScope::Multi, 1.0, 256), (2, 0));
    assert_eq!(rasterized_betti(&two, ColorScope::Mono(2), 1.0, 256), (1, 0));
}

#[test]
fn raster_sees_the_ring_hole() {
    let pts = hexagon(1.0, false);
    assert_eq!(rasterized_betti(&pts, ColorScope::Multi, 0.6, 256), (1, 1));
    assert_eq!(rasterized_betti(&pts, ColorScope::Multi, 0.4, 256), (6, 0));
    assert_eq!(rasterized_betti(&pts, ColorScope::Multi, 1.2, 256), (1, 0));
}

#[test]
fn raster_agrees_with_alpha_complex_on_examples() {
    for (center, a0, scope) in [
        (false, 0.6, ColorScope::Multi),
        (true, 0.8, ColorScope::Multi),
        (true, 0.8, ColorScope::Mono(1)),
        (true, 0.8, ColorScope::Mono(2)),
    ] {
        let pts = hexagon(1.0, center);
        let mut s = delaunay(&pts, 2).unwrap();
        alpha_values(&mut s, &big(a0));
        assert!(is_generic(&s, a0, 0.05));
        let rep = lemma_a(&s, scope, a0);
        assert!(rep.agrees(), "{center} {a0} {scope:?}: {rep:?}");
    }
}

fn engine_vs_oracle_extended(seed: u64, dim: usize, a: f64, target: TargetSpec) -> std::result::Result<(), TestCaseError> {
    let ts = random_instance(seed, dim, 7, 4);
    let (m, _) = FrameSlices::compute(&ts, &big(a)).unwrap().build(&ts, target).unwrap();
    let rt = rank_table_extended(&m).unwrap();
    prop_assert!(rt.sanity().is_ok());
    let oracle = diagram_from_ranks(&rt).unwrap();
    let engine = extended_persistence(&m).unwrap().keys(false);
    let diff = diagram_diff(&engine, &oracle);
    prop_assert!(diff.is_empty(), "{:?}", diff);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_characteristic_matches_oracle_betti(seed in any::<u64>(), dim in 2usize..=3, a in 0.3f64..2.5) {
        let ts = random_instance(seed, dim, 7, 4);
        let (m, _) = FrameSlices::compute(&ts, &big(a)).unwrap().build(&ts, alpha_multi()).unwrap();
        let rt = rank_table_extended(&m).unwrap();
        for (i, &t) in m.grid.times().iter().enumerate() {
            let chi: i64 = (0..=rt.max_dim()).map(|p| (-1i64).pow(p as u32) * rt.beta(p, i + 1, i + 1) as i64).sum();
            prop_assert_eq!(chi, m.euler_characteristic_at(t));
        }
    }

    #[test]
    fn extended_matches_oracle_in_plane(seed in any::<u64>(), a in 0.3f64..2.5) {
        engine_vs_oracle_extended(seed, 2, a, alpha_multi())?;
    }

    #[test]
    fn extended_matches_oracle_in_space(seed in any::<u64>(), a in 0.3f64..2.5) {
        engine_vs_oracle_extended(seed, 3, a, alpha_multi())?;
    }

    #[test]
    fn extended_matches_oracle_for_delaunay(seed in any::<u64>()) {
        engine_vs_oracle_extended(seed, 2, 1.0, TargetSpec::new(ComplexKind::Delaunay, ColorScope::Multi))?;
    }

    #[test]
    fn image_matches_oracle(seed in any::<u64>(), dim in 2usize..=3, a in 0.3f64..2.5, pick in 0usize..4) {
        let ts = random_instance(seed, dim, 7, 4);
        let slices = FrameSlices::compute(&ts, &big(a)).unwrap();
        let specs = [
            (TargetSpec::new(ComplexKind::Alpha, ColorScope::Mono(1)), alpha_multi()),
            (TargetSpec::new(ComplexKind::Alpha, ColorScope::Mono(2)), alpha_multi()),
            (alpha_multi(), TargetSpec::new(ComplexKind::Delaunay, ColorScope::Multi)),
            (
                TargetSpec::new(ComplexKind::Alpha, ColorScope::Mono(1)),
                TargetSpec::new(ComplexKind::Delaunay, ColorScope::Mono(1)),
            ),
        ];
        let (s, a_spec) = specs[pick];
        prop_assume!(inclusion_supported(s, a_spec));
        let colors = ts.colors();
        prop_assume!([s.scope, a_spec.scope].iter().all(|c| match c {
            ColorScope::Mono(k) => colors.contains(k),
            ColorScope::Multi => true,
        }));
        let (sub, _) = slices.build(&ts, s).unwrap();
        let (amb, _) = slices.build(&ts, a_spec).unwrap();
        let inc = build_inclusion(&sub, s, &amb, a_spec).unwrap();
        let rt = rank_table_image(&inc).unwrap();
        let oracle = diagram_from_ranks(&rt).unwrap();
        let engine = image_persistence(&inc).unwrap().keys(false);
        let diff = diagram_diff(&engine, &oracle);
        prop_assert!(diff.is_empty(), "{:?}", diff);
    }
}

