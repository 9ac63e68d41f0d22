//! Seeded random inputs for randomized verification batches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclic::cyclic_sum;
use crate::free_group::{GroupWord, Letter};
use crate::rational::Rational;
use crate::tensor::{AlgebraContext, Monomial, Tensor};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A reduced word of length at most `max_len` (before reduction).
pub fn random_word<R: Rng>(rng: &mut R, genus: usize, max_len: usize) -> GroupWord {
    let len = rng.gen_range(1..=max_len);
    let letters = (0..len).map(|_| Letter {
        generator: rng.gen_range(0..2 * genus) as u8,
        inverse: rng.gen_bool(0.5),
    });
    GroupWord::new(genus, letters).expect("generators in range")
}

/// A homogeneous tensor of the given degree with a few small integer terms.
pub fn random_homogeneous<R: Rng>(rng: &mut R, ctx: AlgebraContext, degree: usize, terms: usize) -> Tensor {
    let mut t = Tensor::zero(ctx);
    for _ in 0..terms {
        let m: Monomial = (0..degree).map(|_| rng.gen_range(0..ctx.rank()) as u8).collect();
        let c = rng.gen_range(-3i64..=3);
        t.add_term(m, Rational::from_int(c));
    }
    t
}

/// A nonzero rotation-invariant homogeneous tensor.
pub fn random_invariant<R: Rng>(rng: &mut R, ctx: AlgebraContext, degree: usize) -> Tensor {
    loop {
        let t = cyclic_sum(&random_homogeneous(rng, ctx, degree, 3));
        if !t.is_zero() {
            return t;
        }
    }
}
