use std::io::Write;

use lebp::graph_fomin::{
    brute_force_fomin, fomin_det, lerw_weights, read_network, walk_green, walk_partial_sum,
    walk_tail_bound, BoundaryTuple, Network,
};
use lebp::Error;

fn grid_tuple(net: &Network, a: &[(usize, usize)], b: &[(usize, usize)]) -> BoundaryTuple {
    let id = |&(i, j): &(usize, usize)| Network::grid_vertex(3, 3, i, j).unwrap();
    BoundaryTuple::new(net, a.iter().map(id).collect(), b.iter().map(id).collect()).unwrap()
}

#[test]
fn three_paths_on_the_grid() {
    let net = Network::grid(3, 3, 0.25).unwrap();
    let ab = grid_tuple(&net, &[(0, 1), (0, 2), (0, 3)], &[(4, 1), (4, 2), (4, 3)]);
    let det = fomin_det(&net, &ab).unwrap();
    let brute = brute_force_fomin(&net, &ab, 12).unwrap();
    assert!(det > 0.0);
    assert!((det - brute.value).abs() <= brute.bound, "{det} vs {brute:?}");
}

#[test]
fn crossed_ends_give_zero_on_planar_grid() {
    // a_1 below a_2 but b_1 above b_2: no nonintersecting pair, det ≤ 0
    let net = Network::grid(3, 3, 0.25).unwrap();
    let ab = grid_tuple(&net, &[(0, 1), (0, 3)], &[(4, 3), (4, 1)]);
    let det = fomin_det(&net, &ab).unwrap();
    let straight = fomin_det(&net, &grid_tuple(&net, &[(0, 1), (0, 3)], &[(4, 1), (4, 3)])).unwrap();
    assert!((det + straight).abs() < 1e-18);
}

#[test]
fn loop_erasures_partition_all_walks() {
    let net = Network::grid(3, 3, 0.25).unwrap();
    let a = Network::grid_vertex(3, 3, 0, 2).unwrap();
    let b = Network::grid_vertex(3, 3, 4, 1).unwrap();
    for max_len in [6, 9, 12] {
        let by_erasure: f64 = lerw_weights(&net, a, b, max_len).unwrap().values().sum();
        let all = walk_partial_sum(&net, a, b, max_len).unwrap();
        assert!((by_erasure - all).abs() < 1e-15);
        let green = walk_green(&net, a, b).unwrap();
        assert!(green - all <= walk_tail_bound(&net, a, b, max_len));
        assert!(green >= all);
    }
}

#[test]
fn recurrent_weights_are_rejected() {
    // ρ(Q) = 2w·2cos(π/4) on the 3×3 grid, above 1 for w = 0.4
    match Network::grid(3, 3, 0.4) {
        Err(Error::NonConvergent { radius, .. }) => assert!(radius > 1.0),
        other => panic!("expected a non-convergence error, got {other:?}"),
    }
}

#[test]
fn network_file_round_trip() {
    let net = Network::grid(2, 3, 0.25).unwrap();
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "{net}").unwrap();
    let back = read_network(file.path()).unwrap();
    assert_eq!(back.interior(), net.interior());
    assert_eq!(back.boundary(), net.boundary());
    let a = net.boundary()[0];
    let b = *net.boundary().last().unwrap();
    assert_eq!(walk_green(&back, a, b).unwrap(), walk_green(&net, a, b).unwrap());
}

#[test]
fn missing_file_is_an_io_error() {
    assert!(matches!(read_network(std::path::Path::new("/nonexistent/net.txt")), Err(Error::Io(_))));
}
