//! Seeded generators of valid random transform instances.
//!
//! Finite groups make `tau`-orbits finite, so the orbit hypotheses can fail for every
//! choice of points (a prime-order group has a single orbit under any `tau != Id`).
//! Generators therefore sample and filter, returning `None` after `tries` misses.

use rand::Rng;

use crate::group::{Group, GroupError};
use crate::helix::{CubicHelixSpec, Helix, QuadraticHelixSpec};
use crate::picard::{DivisorClass, Translation};
use crate::transforms::{sigma_compatible, BlowDownSpec, BlowUpSpec, CremonaSpec};

/// Curves `(p, a, b)` of small order used for randomized checks: orders 13, 18, 30 and 48.
pub const TEST_CURVES: [(u64, i64, i64); 4] = [(11, 1, 6), (13, 1, 1), (29, 0, 1), (37, 1, 1)];

pub const DEFAULT_TRIES: usize = 200;

fn sample<T, R, F>(rng: &mut R, tries: usize, mut draw: F) -> Result<Option<T>, GroupError>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Result<Option<T>, GroupError>,
{
    for _ in 0..tries {
        if let Some(found) = draw(rng)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Quadratic host with `tau = psi^3 != Id`.
pub fn random_quadratic_host<R: Rng + ?Sized>(
    group: &Group,
    rng: &mut R,
    tries: usize,
) -> Result<Option<QuadraticHelixSpec>, GroupError> {
    sample(rng, tries, |rng| {
        let l = DivisorClass::new(3, group.random_element(rng)?);
        let host = QuadraticHelixSpec { l, psi: Translation(group.random_element(rng)?) };
        Ok((!group.is_identity(&host.tau(group)?.0)).then_some(host))
    })
}

/// Cubic host with `tau = alpha^2 != Id`.
pub fn random_cubic_host<R: Rng + ?Sized>(
    group: &Group,
    rng: &mut R,
    tries: usize,
) -> Result<Option<CubicHelixSpec>, GroupError> {
    sample(rng, tries, |rng| {
        let host = CubicHelixSpec {
            l0: DivisorClass::new(2, group.random_element(rng)?),
            l1: DivisorClass::new(2, group.random_element(rng)?),
            alpha: Translation(group.random_element(rng)?),
        };
        Ok((!group.is_identity(&host.tau(group)?.0)).then_some(host))
    })
}

pub fn random_blow_up<R: Rng + ?Sized>(
    group: &Group,
    rng: &mut R,
    tries: usize,
) -> Result<Option<BlowUpSpec>, GroupError> {
    sample(rng, tries, |rng| {
        let Some(host) = random_quadratic_host(group, rng, 1)? else {
            return Ok(None);
        };
        let spec = BlowUpSpec { host, p: group.random_element(rng)?, q: group.random_element(rng)? };
        Ok(spec.validate(group).is_ok().then_some(spec))
    })
}

pub fn random_blow_down<R: Rng + ?Sized>(
    group: &Group,
    rng: &mut R,
    tries: usize,
) -> Result<Option<BlowDownSpec>, GroupError> {
    sample(rng, tries, |rng| {
        let Some(host) = random_cubic_host(group, rng, 1)? else {
            return Ok(None);
        };
        Ok(Some(BlowDownSpec { host, p: group.random_element(rng)? }))
    })
}

pub fn random_cremona<R: Rng + ?Sized>(
    group: &Group,
    rng: &mut R,
    tries: usize,
) -> Result<Option<CremonaSpec>, GroupError> {
    sample(rng, tries, |rng| {
        let Some(host) = random_quadratic_host(group, rng, 1)? else {
            return Ok(None);
        };
        let spec = CremonaSpec {
            host,
            p: group.random_element(rng)?,
            q: group.random_element(rng)?,
            r: group.random_element(rng)?,
        };
        Ok(spec.validate(group).is_ok().then_some(spec))
    })
}

/// Blow-up whose second point is `q = p + t_sigma` with `2 t_sigma = -t_tau`.
pub fn random_sigma_compatible<R: Rng + ?Sized>(
    group: &Group,
    rng: &mut R,
    tries: usize,
) -> Result<Option<BlowUpSpec>, GroupError> {
    sample(rng, tries, |rng| {
        let Some(host) = random_quadratic_host(group, rng, 1)? else {
            return Ok(None);
        };
        let tau = host.tau(group)?;
        let sigmas = group.solve_division(2, &group.neg(&tau.0)?)?;
        if sigmas.is_empty() {
            return Ok(None);
        }
        let sigma = sigmas[rng.gen_range(0..sigmas.len())];
        let p = group.random_element(rng)?;
        let spec = BlowUpSpec { host, p, q: group.add(&p, &sigma)? };
        Ok(spec.validate(group).is_ok().then_some(spec))
    })
}

/// Valid blow-up that is not sigma-compatible.
pub fn random_generic_blow_up<R: Rng + ?Sized>(
    group: &Group,
    rng: &mut R,
    tries: usize,
) -> Result<Option<BlowUpSpec>, GroupError> {
    sample(rng, tries, |rng| {
        let Some(spec) = random_blow_up(group, rng, 1)? else {
            return Ok(None);
        };
        let tau = spec.host.tau(group)?;
        Ok((!sigma_compatible(group, &tau, &spec.p, &spec.q)?).then_some(spec))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_instances_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = Group::cyclic(60).unwrap();
        for _ in 0..20 {
            random_blow_up(&g, &mut rng, DEFAULT_TRIES).unwrap().unwrap().validate(&g).unwrap();
            random_blow_down(&g, &mut rng, DEFAULT_TRIES).unwrap().unwrap().validate(&g).unwrap();
            random_cremona(&g, &mut rng, DEFAULT_TRIES).unwrap().unwrap().validate(&g).unwrap();
        }
    }

    #[test]
    fn prime_order_curve_has_no_blow_up_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (p, a, b) = TEST_CURVES[0];
        let g = Group::weierstrass(p, a, b).unwrap();
        assert_eq!(random_blow_up(&g, &mut rng, 50).unwrap(), None);
        assert!(random_blow_down(&g, &mut rng, 50).unwrap().is_some());
    }

    #[test]
    fn sigma_instances_are_compatible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = Group::cyclic(40).unwrap();
        let spec = random_sigma_compatible(&g, &mut rng, DEFAULT_TRIES).unwrap().unwrap();
        let tau = spec.host.tau(&g).unwrap();
        assert!(sigma_compatible(&g, &tau, &spec.p, &spec.q).unwrap());
    }
}
