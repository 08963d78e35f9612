//! The bridged run must agree with a genuine run wherever a
//! view-preserving embedding exists: a window of a long host cycle whose
//! pseudo-identifiers are copied into a legal nominal-size instance sees
//! identical views, so the algorithm must answer identically.

use lcl_core::algorithms::LinialColoring;
use lcl_core::bits::BitString;
use lcl_core::bridge;
use lcl_core::engine::{find_close_collision, run, IdAssignment, IdScope, PayloadSource};
use lcl_core::graph::{ball, make_cycle};
use lcl_core::problems::coloring_problem;

#[test]
fn bridged_output_matches_genuine_instance_on_embedded_windows() {
    let host = make_cycle(2000).unwrap();
    let n_nominal = 256usize;
    let alg = LinialColoring::new(2, 8);
    let t = alg.rounds();

    let (pseudo, plan) = bridge::pseudo_ids(&host, t, n_nominal).unwrap();
    assert!(plan.colors_used <= n_nominal);
    let host_out = run(&host, &alg, n_nominal, PayloadSource::Ids(&pseudo)).unwrap();

    // Genuine instance: a nominal-size cycle whose identifier window
    // around its center copies the host's window around `center`. The
    // rest keeps sequential identifiers; positions close to the window
    // carry values above the color count, so nothing collides within the
    // algorithm's reach.
    let guest = make_cycle(n_nominal).unwrap();
    let guest_center = n_nominal / 2;
    assert!(plan.colors_used + 2 * t < guest_center - t);
    for center in [300usize, 777, 1500] {
        let mut guest_ids: Vec<BitString> = (0..n_nominal)
            .map(|v| BitString::from_value(v as u128, plan.id_bits))
            .collect();
        for offset in -(t as i64)..=(t as i64) {
            let host_v = (center as i64 + offset).rem_euclid(2000) as usize;
            let guest_v = (guest_center as i64 + offset).rem_euclid(n_nominal as i64) as usize;
            guest_ids[guest_v] = pseudo.id(host_v);
        }
        assert!(find_close_collision(&guest, &guest_ids, 2 * t).is_none());
        let guest_assignment =
            IdAssignment::from_strings(&guest, guest_ids, IdScope::DistinctWithin(2 * t)).unwrap();

        // The embedding preserves views...
        let host_view = ball(&host, center, t, pseudo.ids()).unwrap();
        let guest_view = ball(&guest, guest_center, t, guest_assignment.ids()).unwrap();
        assert_eq!(
            host_view, guest_view,
            "views differ at host center {center}"
        );

        // ...and therefore outputs.
        let guest_out = run(
            &guest,
            &alg,
            n_nominal,
            PayloadSource::Ids(&guest_assignment),
        )
        .unwrap();
        assert_eq!(
            host_out.labeling.get(center),
            guest_out.labeling.get(guest_center),
            "bridged output diverged at host {center}"
        );
    }

    // And the bridged labeling is a proper 3-coloring to begin with.
    let problem = coloring_problem(3).unwrap();
    assert!(problem.check(&host, &host_out.labeling).unwrap().is_empty());
}

#[test]
fn pseudo_ids_are_distinct_in_every_ball() {
    let host = make_cycle(500).unwrap();
    let t = 4;
    let (pseudo, plan) = bridge::pseudo_ids(&host, t, 128).unwrap();
    assert!(find_close_collision(&host, pseudo.ids(), plan.power_radius).is_none());
}

#[test]
fn radius_override_is_honored() {
    let host = make_cycle(300).unwrap();
    let (_, plan) = bridge::pseudo_ids_with_radius(&host, 3, 64, 5).unwrap();
    assert_eq!(plan.power_radius, 5);
    assert_eq!(plan.power_max_degree, 10);
}
