#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use strongclean::ring::{dual_numbers_f2_tables, f4_tables, zmod_tables};
use strongclean::{Poly, Ring, RingDescriptor};

pub fn zmod(n: u64) -> RingDescriptor {
    RingDescriptor::Zmod { n }
}

pub fn zloc(p: u64) -> RingDescriptor {
    RingDescriptor::Zloc { p }
}

pub fn table((add, mul): (Vec<Vec<usize>>, Vec<Vec<usize>>)) -> RingDescriptor {
    RingDescriptor::Table { add, mul }
}

pub fn product(factors: Vec<RingDescriptor>) -> RingDescriptor {
    RingDescriptor::Product { factors }
}

pub fn build(d: RingDescriptor) -> Ring {
    Ring::build(&d).unwrap()
}

/// Small finite rings covering every backend.
pub fn finite_rings() -> Vec<Ring> {
    let mut out: Vec<Ring> = [2, 3, 4, 5, 6, 8, 9, 12, 16, 18, 25, 27, 30].into_iter().map(|n| build(zmod(n))).collect();
    out.push(build(table(f4_tables())));
    out.push(build(table(dual_numbers_f2_tables())));
    out.push(build(table(zmod_tables(6))));
    out.push(build(product(vec![zmod(4), table(f4_tables())])));
    out.push(build(product(vec![table(dual_numbers_f2_tables()), zmod(3)])));
    out
}

pub fn infinite_rings() -> Vec<Ring> {
    vec![
        build(zloc(2)),
        build(zloc(3)),
        build(zloc(5)),
        build(product(vec![zloc(2), zloc(2)])),
        build(product(vec![zmod(4), zloc(3)])),
        build(product(vec![zloc(2), table(f4_tables())])),
    ]
}

pub fn all_rings() -> Vec<Ring> {
    let mut v = finite_rings();
    v.extend(infinite_rings());
    v
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_monic(ring: &Ring, deg: usize, r: &mut ChaCha8Rng) -> Poly {
    let mut c: Vec<_> = (0..deg).map(|_| ring.random_element(r)).collect();
    c.push(ring.one());
    Poly::new(ring, c)
}
