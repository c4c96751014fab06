//! Parameter grids per family: complete enumeration up to
//! `exhaustive_max_m`, seeded uniform samples above.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::VerifyConfig;
use crate::families::{carlet11_degenerate_coefficients, coprime_to, FamilyParams};
use crate::gf2m::FieldSpec;

pub(crate) struct Grid {
    pub params: Vec<FamilyParams>,
    pub exhaustive: bool,
}

impl Grid {
    pub(crate) fn describe(&self, m: u32, samples: usize) -> String {
        if self.exhaustive {
            format!("m={m}: exhaustive, {} instances", self.params.len())
        } else {
            format!("m={m}: {samples} seeded samples, {} instances", self.params.len())
        }
    }
}

pub(crate) fn coprime_steps(m: u32) -> Vec<u32> {
    (1..m.max(2)).filter(|&k| coprime_to(m, i64::from(k))).collect()
}

/// Ordered pairs `i != j` in `0..m` with `gcd(i - j, m) = 1`.
pub(crate) fn carlet_exponent_pairs(m: u32) -> Vec<(u32, u32)> {
    (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && coprime_to(m, i64::from(i) - i64::from(j)))
        .collect()
}

#[derive(Clone, Copy)]
pub(crate) enum Tag {
    Taniguchi = 1,
    Carlet11 = 2,
    ZhouPott = 3,
    Butterfly = 4,
    Carlet11Degenerate = 5,
}

/// Independent stream per `(seed, family, m)` so grids do not depend on
/// which other sweeps ran.
pub(crate) fn rng(config: &VerifyConfig, tag: Tag, m: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(config.seed ^ (tag as u64) << 40 ^ u64::from(m) << 32)
}

fn nonzero(field: &FieldSpec, rng: &mut ChaCha8Rng) -> u32 {
    rng.gen_range(1..field.order())
}

fn any(field: &FieldSpec, rng: &mut ChaCha8Rng) -> u32 {
    rng.gen_range(0..field.order())
}

pub(crate) fn taniguchi(field: FieldSpec, config: &VerifyConfig) -> Grid {
    let m = field.m();
    let ks = coprime_steps(m);
    if m <= config.exhaustive_max_m {
        let params = ks
            .iter()
            .flat_map(|&k| {
                field.nonzero_elements().flat_map(move |a| {
                    field
                        .nonzero_elements()
                        .map(move |b| FamilyParams::taniguchi(field, k, a, b).expect("valid grid point"))
                })
            })
            .collect();
        return Grid {
            params,
            exhaustive: true,
        };
    }
    let mut rng = rng(config, Tag::Taniguchi, m);
    let params = (0..config.samples)
        .map(|_| {
            let k = *ks.choose(&mut rng).expect("some k is coprime");
            let (a, b) = (nonzero(&field, &mut rng), nonzero(&field, &mut rng));
            FamilyParams::taniguchi(field, k, a, b).expect("valid grid point")
        })
        .collect();
    Grid {
        params,
        exhaustive: false,
    }
}

/// Generic Carlet-2011 tuples: exhaustive for `m <= 2`, sampled otherwise.
pub(crate) fn carlet11(field: FieldSpec, config: &VerifyConfig) -> Grid {
    let m = field.m();
    let pairs = carlet_exponent_pairs(m);
    if m <= 2 {
        let mut params = Vec::new();
        for &(i, j) in &pairs {
            for s in field.nonzero_elements() {
                for t in field.nonzero_elements() {
                    for u in field.elements() {
                        for v in field.elements() {
                            params.push(FamilyParams::carlet11(field, i, j, s, t, u, v).expect("valid grid point"));
                        }
                    }
                }
            }
        }
        return Grid {
            params,
            exhaustive: true,
        };
    }
    let mut rng = rng(config, Tag::Carlet11, m);
    let params = (0..config.samples)
        .map(|_| {
            let (i, j) = *pairs.choose(&mut rng).expect("some exponent pair");
            let (s, t) = (nonzero(&field, &mut rng), nonzero(&field, &mut rng));
            let (u, v) = (any(&field, &mut rng), any(&field, &mut rng));
            FamilyParams::carlet11(field, i, j, s, t, u, v).expect("valid grid point")
        })
        .collect();
    Grid {
        params,
        exhaustive: false,
    }
}

/// Degenerate Carlet-2011 triples generated from `(i, j, T, alpha)`: all of
/// them up to `exhaustive_max_m`, seeded samples above.
pub(crate) fn carlet11_degenerate(field: FieldSpec, config: &VerifyConfig) -> Vec<FamilyParams> {
    let m = field.m();
    let pairs = carlet_exponent_pairs(m);
    let make = |(i, j): (u32, u32), t: u32, alpha: u32| {
        let (s, u, v) = carlet11_degenerate_coefficients(&field, i, j, t, alpha);
        FamilyParams::carlet11(field, i, j, s, t, u, v).expect("valid grid point")
    };
    if m <= config.exhaustive_max_m {
        let mut params = Vec::new();
        for &pair in &pairs {
            for t in field.nonzero_elements() {
                for alpha in field.nonzero_elements() {
                    params.push(make(pair, t, alpha));
                }
            }
        }
        return params;
    }
    let mut rng = rng(config, Tag::Carlet11Degenerate, m);
    (0..config.samples)
        .map(|_| {
            let pair = *pairs.choose(&mut rng).expect("some exponent pair");
            make(pair, nonzero(&field, &mut rng), nonzero(&field, &mut rng))
        })
        .collect()
}

pub(crate) fn zhou_pott(field: FieldSpec, config: &VerifyConfig) -> Grid {
    let m = field.m();
    let ks = coprime_steps(m);
    if m <= config.exhaustive_max_m {
        let mut params = Vec::new();
        for &k in &ks {
            for j in 0..m {
                for alpha in field.nonzero_elements() {
                    params.push(FamilyParams::zhou_pott(field, k, j, alpha).expect("valid grid point"));
                }
            }
        }
        return Grid {
            params,
            exhaustive: true,
        };
    }
    let mut rng = rng(config, Tag::ZhouPott, m);
    let params = (0..config.samples)
        .map(|_| {
            let k = *ks.choose(&mut rng).expect("some k is coprime");
            let j = rng.gen_range(0..m);
            FamilyParams::zhou_pott(field, k, j, nonzero(&field, &mut rng)).expect("valid grid point")
        })
        .collect();
    Grid {
        params,
        exhaustive: false,
    }
}

/// Butterfly grid for odd `m`; the sampled variant also contains every
/// degenerate pair `beta = (1 + alpha)^3`.
pub(crate) fn butterfly(field: FieldSpec, config: &VerifyConfig) -> Grid {
    let m = field.m();
    let make = |a, b| FamilyParams::butterfly(field, a, b).expect("valid grid point");
    if m <= config.exhaustive_max_m {
        let params = field
            .nonzero_elements()
            .flat_map(|a| field.nonzero_elements().map(move |b| (a, b)))
            .map(|(a, b)| make(a, b))
            .collect();
        return Grid {
            params,
            exhaustive: true,
        };
    }
    let mut rng = rng(config, Tag::Butterfly, m);
    let mut params: Vec<FamilyParams> = (0..config.samples)
        .map(|_| make(nonzero(&field, &mut rng), nonzero(&field, &mut rng)))
        .collect();
    params.extend((2..field.order()).map(|a| make(a, field.pow(1 ^ a, 3))));
    Grid {
        params,
        exhaustive: false,
    }
}
