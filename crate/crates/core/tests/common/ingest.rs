//! Random fact bases over every term shape the format allows.

use healthgraph::ingest::{Fact, FactBase, Term};
use rand::Rng;

fn symbol<R: Rng>(rng: &mut R) -> String {
    const FIRST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
    const REST: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
    let mut name = String::new();
    name.push(FIRST[rng.gen_range(0..FIRST.len())] as char);
    for _ in 0..rng.gen_range(0..8) {
        name.push(REST[rng.gen_range(0..REST.len())] as char);
    }
    name
}

fn term<R: Rng>(rng: &mut R, depth: u32) -> Term {
    match rng.gen_range(0..if depth == 0 { 2 } else { 3 }) {
        0 => Term::Int(match rng.gen_range(0..4) {
            0 => i64::MIN,
            1 => i64::MAX,
            _ => rng.gen_range(-1000..1000),
        }),
        1 => Term::Sym(symbol(rng)),
        _ => {
            let args = (0..rng.gen_range(1..4)).map(|_| term(rng, depth - 1)).collect();
            Term::Compound(symbol(rng), args)
        }
    }
}

pub fn random_fact_base<R: Rng>(rng: &mut R) -> FactBase {
    let mut base = FactBase::new();
    for _ in 0..rng.gen_range(0..30) {
        let args: Vec<Term> = (0..rng.gen_range(0..5)).map(|_| term(rng, 2)).collect();
        base.insert(Fact::new(symbol(rng), args));
    }
    base
}
