//! Seeded interior point sampling: uniform rejection and the dyadic-collar
//! profile that places equal counts in depth bands delta in [2^-k-1, 2^-k] D.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::DomainModel;
use crate::rng::stage_rng;
use crate::types::ComplexPoint2;

/// Depth profile for interior sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DepthProfile {
    Uniform,
    /// Equal counts per dyadic depth band, k = 1..=bands.
    DyadicCollar { bands: u32 },
}

const MAX_ATTEMPTS_PER_POINT: usize = 20_000;

pub fn sample_interior(
    domain: &DomainModel,
    count: usize,
    profile: DepthProfile,
    seed: u64,
) -> Result<Vec<ComplexPoint2>> {
    if count == 0 {
        return Err(Error::Sampling("requested zero samples".into()));
    }
    let mut rng = stage_rng(seed, &format!("interior/{}", domain.name), 0);
    let mut out = Vec::with_capacity(count);

    match profile {
        DepthProfile::Uniform => {
            for _ in 0..count {
                let mut attempts = 0;
                loop {
                    attempts += 1;
                    if attempts > MAX_ATTEMPTS_PER_POINT {
                        return Err(Error::Sampling(format!(
                            "uniform rejection sampling exhausted on {}",
                            domain.name
                        )));
                    }
                    let z = random_in_bbox(domain, &mut rng);
                    if domain.is_interior(z) {
                        out.push(z);
                        break;
                    }
                }
            }
        }
        DepthProfile::DyadicCollar { bands } => {
            if bands == 0 {
                return Err(Error::Sampling("dyadic profile needs at least one band".into()));
            }
            let d = domain.inradius;
            let per_band = count / bands as usize;
            let remainder = count % bands as usize;
            for k in 1..=bands {
                let lo = d * 2f64.powi(-(k as i32) - 1);
                let hi = d * 2f64.powi(-(k as i32));
                let want = per_band + if (k as usize) <= remainder { 1 } else { 0 };
                let mut got = 0;
                let mut attempts = 0;
                while got < want {
                    attempts += 1;
                    if attempts > MAX_ATTEMPTS_PER_POINT * want.max(1) {
                        return Err(Error::Sampling(format!(
                            "dyadic band k={k} exhausted on {}",
                            domain.name
                        )));
                    }
                    let z = random_in_bbox(domain, &mut rng);
                    if !domain.is_interior(z) {
                        continue;
                    }
                    let delta = domain.boundary_distance(z)?;
                    if delta >= lo && delta < hi {
                        out.push(z);
                        got += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn random_in_bbox(domain: &DomainModel, rng: &mut impl Rng) -> ComplexPoint2 {
    let mut c = [0.0; 4];
    for i in 0..4 {
        c[i] = rng.gen_range(domain.bbox.lo[i]..domain.bbox.hi[i]);
    }
    ComplexPoint2::from_reals(c[0], c[1], c[2], c[3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    #[test]
    fn uniform_point_is_interior() {
        let ball = fixtures::registry().get("ball").unwrap();
        let pts = sample_interior(ball, 1, DepthProfile::Uniform, 42).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(ball.eval_r(pts[0]).unwrap() < 0.0);
    }

    #[test]
    fn dyadic_band_counts() {
        let egg2 = fixtures::registry().get("egg2").unwrap();
        let pts = sample_interior(egg2, 100, DepthProfile::DyadicCollar { bands: 5 }, 7).unwrap();
        assert_eq!(pts.len(), 100);
        // 20 points per band.
        let mut counts = [0usize; 5];
        for z in &pts {
            let d = egg2.boundary_distance(*z).unwrap();
            for k in 1..=5u32 {
                let lo = 2f64.powi(-(k as i32) - 1);
                let hi = 2f64.powi(-(k as i32));
                if d >= lo && d < hi {
                    counts[(k - 1) as usize] += 1;
                }
            }
        }
        assert_eq!(counts, [20, 20, 20, 20, 20]);
    }

    #[test]
    fn zero_count_rejected() {
        let ball = fixtures::registry().get("ball").unwrap();
        assert!(matches!(
            sample_interior(ball, 0, DepthProfile::Uniform, 1),
            Err(Error::Sampling(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let ball = fixtures::registry().get("ball").unwrap();
        let a = sample_interior(ball, 5, DepthProfile::Uniform, 9).unwrap();
        let b = sample_interior(ball, 5, DepthProfile::Uniform, 9).unwrap();
        assert_eq!(a, b);
    }
}
