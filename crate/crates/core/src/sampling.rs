//! Seeded sampling of random subspaces. One user seed is expanded into an
//! independent stream per instance key, so results do not depend on the order
//! or parallelism of the instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{precondition, Result};
use crate::gf2::{canonicalize, Gf2Subspace, Gf2Vector};

/// Independent stream for `(seed, key)`.
pub fn instance_rng(seed: u64, key: &str) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(key.as_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Gf2Vector {
    let bits: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
    Gf2Vector::from_bits(&bits)
}

/// Row space of a uniformly random full-rank `d x n` matrix, resampled until
/// the rank is `d`. Uniform over `d`-dimensional subspaces.
pub fn random_subspace_of_dim<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Gf2Subspace> {
    if d > n {
        return Err(precondition(format!("dimension {d} exceeds ambient {n}")));
    }
    loop {
        let rows: Vec<Gf2Vector> = (0..d).map(|_| random_vector(n, rng)).collect();
        let v = canonicalize(n, &rows)?;
        if v.dim() == d {
            return Ok(v);
        }
    }
}

/// Subspace of codimension `c`, the dual of a random `c`-dimensional subspace.
pub fn random_subspace_of_codim<R: Rng + ?Sized>(n: usize, c: usize, rng: &mut R) -> Result<Gf2Subspace> {
    if c > n {
        return Err(precondition(format!("codimension {c} exceeds ambient {n}")));
    }
    Ok(random_subspace_of_dim(n, c, rng)?.orthogonal_complement())
}

/// Dimension uniform in `[d_min, d_max]`, then a uniform subspace of it.
pub fn random_subspace<R: Rng + ?Sized>(n: usize, d_min: usize, d_max: usize, rng: &mut R) -> Result<Gf2Subspace> {
    if d_min > d_max || d_max > n {
        return Err(precondition(format!(
            "bad dimension range [{d_min}, {d_max}] in F_2^{n}"
        )));
    }
    let d = rng.random_range(d_min..=d_max);
    random_subspace_of_dim(n, d, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = instance_rng(7, "x").random();
        let b: u64 = instance_rng(7, "x").random();
        let c: u64 = instance_rng(7, "y").random();
        let d: u64 = instance_rng(8, "x").random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn dimensions_are_exact() {
        let mut rng = instance_rng(1, "dims");
        for n in 1..40 {
            for d in [0, 1, n / 2, n] {
                assert_eq!(random_subspace_of_dim(n, d, &mut rng).unwrap().dim(), d);
                assert_eq!(random_subspace_of_codim(n, d, &mut rng).unwrap().dim(), n - d);
            }
        }
        assert!(random_subspace_of_dim(3, 4, &mut rng).is_err());
        assert!(random_subspace(3, 2, 1, &mut rng).is_err());
    }

    #[test]
    fn one_dimensional_subspaces_are_roughly_uniform() {
        let mut rng = instance_rng(2, "uniform");
        let mut counts = [0u32; 8];
        for _ in 0..7000 {
            let v = random_subspace_of_dim(3, 1, &mut rng).unwrap();
            counts[v.basis()[0].as_word().unwrap() as usize] += 1;
        }
        assert_eq!(counts[0], 0);
        for &c in &counts[1..] {
            assert!((800..1200).contains(&c), "{counts:?}");
        }
    }
}
