use proptest::prelude::*;

use super::*;
use crate::builder::{build_inclusion, ComplexKind, FrameSlices, TargetSpec};
use crate::complex::tests::{cell, grid4, medusa};
use crate::complex::ColorScope;
use crate::fixtures;
use crate::geometry::BigRational;
use crate::synth::random_instance;

fn big(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn keys(d: &PersistenceDiagram) -> Vec<(usize, Subdiagram, Rational, Rational)> {
    d.keys(false)
}

#[test]
fn single_vertex_lives_throughout() {
    let m = medusa(vec![cell(&[0], (0, 3), &[])]);
    let d = extended_persistence(&m).unwrap();
    assert_eq!(keys(&d), vec![(0, Subdiagram::Hor, r(0, 1), r(1, 1))]);
}

#[test]
fn late_vertex_merges_instantly() {
    // grid4 is 0, 1/2, 7/10, 1
    let m = medusa(vec![cell(&[0], (0, 3), &[]), cell(&[1], (1, 3), &[]), cell(&[0, 1], (1, 3), &[0, 1])]);
    let d = extended_persistence(&m).unwrap();
    assert_eq!(keys(&d), vec![(0, Subdiagram::Hor, r(0, 1), r(1, 1))]);
    // the instant merge is kept as a trivial dot
    assert!(d.keys(true).contains(&(0, Subdiagram::Ord, r(1, 2), r(1, 2))));
    assert_eq!(d.len(), 3);
    let _ = grid4();
}

#[test]
fn vertex_leaving_early_gives_a_vertical_class() {
    // two vertices joined during [0, 1/2]; the second one disappears at 1/2
    let m = medusa(vec![cell(&[0], (0, 3), &[]), cell(&[1], (0, 1), &[]), cell(&[0, 1], (0, 1), &[0, 1])]);
    let d = extended_persistence(&m).unwrap();
    assert_eq!(d.len(), 3);
    assert!(d.dots.iter().all(|x| x.subdiagram != Subdiagram::Ver || x.birth > x.death));
}

fn alpha_multi() -> TargetSpec {
    TargetSpec::new(ComplexKind::Alpha, ColorScope::Multi)
}

#[test]
fn hexagon_ring_is_one_loop() {
    let ts = fixtures::hexagon_ring(1.0, 1);
    let (m, _) = FrameSlices::compute(&ts, &big(0.6)).unwrap().build(&ts, alpha_multi()).unwrap();
    assert_eq!(m.len(), 12);
    let d = extended_persistence(&m).unwrap();
    assert_eq!(
        keys(&d),
        vec![(0, Subdiagram::Hor, r(0, 1), r(1, 1)), (1, Subdiagram::Hor, r(0, 1), r(1, 1))]
    );
    let curve = betti_curve(&m, 1).unwrap();
    assert!(curve.iter().all(|&(_, b)| b == 1));
}

#[test]
fn center_point_fills_the_blue_ring_in_the_image() {
    let ts = fixtures::hexagon_with_center(1.0);
    let slices = FrameSlices::compute(&ts, &big(1.0)).unwrap();
    let blue = TargetSpec::new(ComplexKind::Alpha, ColorScope::Mono(2));
    let (sub, _) = slices.build(&ts, blue).unwrap();
    let (amb, _) = slices.build(&ts, alpha_multi()).unwrap();
    let own = extended_persistence(&sub).unwrap();
    assert!(own.keys(true).contains(&(1, Subdiagram::Hor, r(0, 1), r(1, 1))));
    let inc = build_inclusion(&sub, blue, &amb, alpha_multi()).unwrap();
    let img = image_persistence(&inc).unwrap();
    assert!(img.visible(r(0, 1)).all(|x| x.dim != 1), "{:?}", img.keys(true));
    assert!(img.keys(true).contains(&(0, Subdiagram::Hor, r(0, 1), r(1, 1))));
}

#[test]
fn empty_sub_gives_empty_image() {
    let ts = fixtures::hexagon_with_center(1.0);
    let m = FrameSlices::compute(&ts, &big(1.0)).unwrap().build(&ts, alpha_multi()).unwrap().0;
    let empty = Medusa::empty(2, ColorScope::Multi, m.grid.clone());
    let inc = InclusionMap { sub: &empty, ambient: &m, cell_map: vec![] };
    assert!(image_persistence(&inc).unwrap().is_empty());
}

#[test]
fn flip_gadget_has_no_dimension_two_classes() {
    let ts = fixtures::flip_gadget();
    let target = TargetSpec::new(ComplexKind::Delaunay, ColorScope::Multi);
    let (m, _) = FrameSlices::compute(&ts, &big(100.0)).unwrap().build(&ts, target).unwrap();
    let d = extended_persistence(&m).unwrap();
    assert!(d.visible(r(0, 1)).all(|x| x.dim < 2 || matches!(x.subdiagram, Subdiagram::Ver | Subdiagram::Rel)));
    assert_eq!(d.keys(false), vec![(0, Subdiagram::Hor, r(0, 1), r(1, 1))]);
}

#[test]
fn csv_layout() {
    let m = medusa(vec![cell(&[0], (0, 3), &[])]);
    let csv = extended_persistence(&m).unwrap().to_csv(Rational::from_integer(0));
    assert_eq!(
        csv,
        "dim,subdiagram,birth,death,persistence,hole_type,creator,destroyer\n\
         0,Hor,0.000000,1.000000,1.000000,gap,0,0\n"
    );
}

#[test]
fn invalid_medusa_rejected() {
    let m = medusa(vec![cell(&[0], (1, 2), &[]), cell(&[0, 1], (0, 2), &[0])]);
    assert!(matches!(extended_persistence(&m), Err(Error::InvalidMedusa(_))));
}

fn relabel(ts: &crate::builder::TrajectorySet, seed: u64) -> crate::builder::TrajectorySet {
    let mut ids: Vec<u32> = (0..ts.trajectories.len() as u32).map(|i| i * 3 + 5).collect();
    crate::rng::SplitMix64::new(seed).shuffle(&mut ids);
    let mut out = ts.clone();
    for (t, id) in out.trajectories.iter_mut().zip(ids) {
        t.id = id;
    }
    crate::builder::TrajectorySet::new(out.dim, out.grid.clone(), out.trajectories).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn diagrams_obey_pairing_and_coordinate_rules(seed in any::<u64>(), dim in 2usize..=3, a in 0.3f64..2.5) {
        let ts = random_instance(seed, dim, 8, 5);
        let (m, _) = FrameSlices::compute(&ts, &big(a)).unwrap().build(&ts, alpha_multi()).unwrap();
        let d = extended_persistence(&m).unwrap();
        prop_assert_eq!(2 * d.len(), 2 * m.len());
        for x in &d.dots {
            match x.subdiagram {
                Subdiagram::Hor => prop_assert!(x.birth <= x.death),
                Subdiagram::Ver => prop_assert!(x.birth > x.death),
                _ => {}
            }
            prop_assert!(x.is_trivial() || crate::summary::hole_type(x, dim).is_some(), "{:?}", x);
        }
    }

    #[test]
    fn diagram_ignores_point_labels(seed in any::<u64>(), relabel_seed in any::<u64>(), a in 0.3f64..2.5) {
        let ts = random_instance(seed, 2, 8, 5);
        let other = relabel(&ts, relabel_seed);
        let (m1, _) = FrameSlices::compute(&ts, &big(a)).unwrap().build(&ts, alpha_multi()).unwrap();
        let (m2, _) = FrameSlices::compute(&other, &big(a)).unwrap().build(&other, alpha_multi()).unwrap();
        prop_assert_eq!(
            extended_persistence(&m1).unwrap().keys(false),
            extended_persistence(&m2).unwrap().keys(false)
        );
    }

    #[test]
    fn identity_image_is_the_extended_diagram(seed in any::<u64>(), a in 0.3f64..2.5) {
        let ts = random_instance(seed, 2, 8, 5);
        let (m, _) = FrameSlices::compute(&ts, &big(a)).unwrap().build(&ts, alpha_multi()).unwrap();
        let ext = extended_persistence(&m).unwrap();
        let img = image_persistence(&InclusionMap::identity(&m)).unwrap();
        prop_assert_eq!(ext.dots, img.dots);
    }
}
