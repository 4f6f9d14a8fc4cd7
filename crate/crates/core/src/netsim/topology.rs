//! Star adjacency and the Gaussian observation model of both phases.

use super::channel::NoiseModel;
use rand::Rng;

/// Fixed star topology: receiver `b_i` overhears `a_j` and `a_k` for the
/// cyclic triples `(i, j, k)`, the relay hears all three sources, and every
/// receiver hears the relay in the broadcast phase.
#[derive(Debug, Clone, Copy, Default)]
pub struct Topology;

/// Zero-based cyclic triples `(i, j, k)`.
pub const CYCLIC_TRIPLES: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

impl Topology {
    /// Sources overheard by receiver `i` in the first phase.
    pub fn overheard(receiver: usize) -> (usize, usize) {
        let (_, j, k) = CYCLIC_TRIPLES[receiver];
        (j, k)
    }

    pub fn hears(receiver: usize, source: usize) -> bool {
        receiver != source
    }
}

/// First-phase receptions.
#[derive(Debug, Clone)]
pub struct MacObservations {
    pub relay: Vec<f64>,
    pub receivers: [Vec<f64>; 3],
}

/// `Y_r = X_1 + X_2 + X_3 + Z_r` and `Y_{b_i} = X_j + X_k + Z_{b_i}`.
///
/// Noise is drawn relay first, then receivers in order.
pub fn mac_phase<R: Rng + ?Sized>(x: [&[f64]; 3], noise: &NoiseModel, rng: &mut R) -> MacObservations {
    let len = x[0].len();
    let mut relay: Vec<f64> = (0..len).map(|t| x[0][t] + x[1][t] + x[2][t]).collect();
    noise.add_to(rng, &mut relay);
    let receivers = [0, 1, 2].map(|i| {
        let (j, k) = Topology::overheard(i);
        let mut y: Vec<f64> = (0..len).map(|t| x[j][t] + x[k][t]).collect();
        noise.add_to(rng, &mut y);
        y
    });
    MacObservations { relay, receivers }
}

/// `Y_{b_i} = X_r + Z_{b_i}` for the three receivers.
pub fn bc_phase<R: Rng + ?Sized>(relay_tx: &[f64], noise: &NoiseModel, rng: &mut R) -> [Vec<f64>; 3] {
    [0, 1, 2].map(|_| {
        let mut y = relay_tx.to_vec();
        noise.add_to(rng, &mut y);
        y
    })
}
