#![allow(dead_code)] // each test crate uses its own subset of the generators

//! Seeded configuration generators shared by the property and acceptance
//! suites. Every generator is deterministic in its RNG and validates its
//! output through the classifier, retrying until the requested class is hit.

use minsum_coverage::algorithms::analyze;
use minsum_coverage::configuration::Configuration;
use minsum_coverage::geometry::{int, normalize, rat, Scalar};
use minsum_coverage::{ConfigClass, Space};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const DENOMS: [i64; 4] = [120, 360, 840, 2520];

pub fn unit_circle() -> Space {
    Space::circle(int(1)).unwrap()
}

fn random_coord(rng: &mut ChaCha8Rng, den: i64) -> Scalar {
    rat(rng.gen_range(0..den), den)
}

/// `n` distinct coordinates on the unit circle with a common denominator.
pub fn random_positions(rng: &mut ChaCha8Rng, n: usize) -> Vec<Scalar> {
    let den = DENOMS[rng.gen_range(0..DENOMS.len())];
    let mut positions: Vec<Scalar> = Vec::with_capacity(n);
    while positions.len() < n {
        let p = random_coord(rng, den);
        if !positions.contains(&p) {
            positions.push(p);
        }
    }
    positions
}

pub fn random_circle_config(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    Configuration::new(unit_circle(), random_positions(rng, n)).unwrap()
}

/// Random segment configuration on a random rational interval.
pub fn random_segment_config(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    let den = DENOMS[rng.gen_range(0..DENOMS.len())];
    let a = rat(rng.gen_range(-24..24), 12);
    let b = &a + rat(rng.gen_range(1..=36), 12);
    let span = &b - &a;
    let mut positions: Vec<Scalar> = Vec::with_capacity(n);
    while positions.len() < n {
        let p = &a + &span * rat(rng.gen_range(0..=den), den);
        if !positions.contains(&p) {
            positions.push(p);
        }
    }
    Configuration::new(Space::segment(a, b).unwrap(), positions).unwrap()
}

fn classify(config: &Configuration) -> ConfigClass {
    analyze(config).symmetry.class
}

/// Asymmetric configuration with a unique optimal anchor.
///
/// `n` must be odd: for even `n` the anchored cost as a function of the
/// n-gon rotation is piecewise linear with even slopes, so its minimum sits
/// on a plateau whose both endpoints are anchored candidates — at least two
/// robots are always extremal.
pub fn gen_i1_unique(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    assert!(n % 2 == 1, "unique extremal anchors require odd n");
    loop {
        let config = random_circle_config(rng, n);
        let analysis = analyze(&config);
        if analysis.symmetry.class == ConfigClass::I1 && analysis.cost.extremal.len() == 1 {
            return config;
        }
    }
}

/// Asymmetric configuration with several optimal anchors. Built by parking
/// one robot exactly one n-gon step clockwise of another (their anchored
/// assignments then coincide) and scattering the rest close to the remaining
/// vertices.
pub fn gen_i1_multi(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    assert!(n >= 3);
    let step = rat(1, n as i64);
    loop {
        let den = 16 * n as i64;
        let base = random_coord(rng, den);
        let mut positions = vec![base.clone(), normalize(&(&base + &step), &int(1))];
        for k in 2..n {
            // near vertex k, jittered clockwise by less than half a step
            let jitter = rat(rng.gen_range(1..(8 * n as i64)), 16 * (n as i64) * n as i64);
            positions.push(normalize(
                &(&base + &step * rat(k as i64, 1) + jitter),
                &int(1),
            ));
        }
        let Ok(config) = Configuration::new(unit_circle(), positions) else {
            continue;
        };
        let analysis = analyze(&config);
        if analysis.symmetry.class == ConfigClass::I1 && analysis.cost.extremal.len() >= 2 {
            return config;
        }
    }
}

/// Single axis with a robot (the anchor) on it: one on-axis robot plus
/// mirror pairs, rejected unless the classifier agrees on I2.
pub fn gen_i2(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    assert!(n >= 3);
    let den = 8 * n as i64;
    loop {
        let foot = random_coord(rng, den);
        let mut positions = vec![foot.clone()];
        if n % 2 == 0 {
            positions.push(normalize(&(&foot + rat(1, 2)), &int(1)));
        }
        let pairs = (n - positions.len()) / 2;
        for _ in 0..pairs {
            let offset = rat(rng.gen_range(1..(2 * den - 1)), 4 * den);
            positions.push(normalize(&(&foot + &offset), &int(1)));
            positions.push(normalize(&(&foot - &offset), &int(1)));
        }
        let Ok(config) = Configuration::new(unit_circle(), positions) else {
            continue;
        };
        if classify(&config) == ConfigClass::I2 {
            return config;
        }
    }
}

/// Single axis with nothing on it: mirror pairs only (even n).
pub fn gen_i3(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    assert!(n >= 2 && n % 2 == 0);
    let den = 8 * n as i64;
    loop {
        let foot = random_coord(rng, den);
        let mut positions = Vec::with_capacity(n);
        for _ in 0..n / 2 {
            let offset = rat(rng.gen_range(1..(2 * den - 1)), 4 * den);
            positions.push(normalize(&(&foot + &offset), &int(1)));
            positions.push(normalize(&(&foot - &offset), &int(1)));
        }
        let Ok(config) = Configuration::new(unit_circle(), positions) else {
            continue;
        };
        if classify(&config) == ConfigClass::I3 {
            return config;
        }
    }
}

/// Like [`gen_i4`] but without the single-extremal-class filter: rare
/// anchored-cost ties across classes are allowed through.
pub fn gen_i4_any(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    let divisors: Vec<usize> = (2..n).filter(|w| n % w == 0 && n / w >= 3).collect();
    assert!(
        !divisors.is_empty(),
        "n = {n} admits no rotational class structure compatible with I4"
    );
    loop {
        let w = divisors[rng.gen_range(0..divisors.len())];
        let cell = n / w;
        let den = (8 * n) as i64;
        let mut base: Vec<Scalar> = Vec::with_capacity(cell);
        while base.len() < cell {
            let p = rat(rng.gen_range(0..(den / w as i64)), den);
            if !base.contains(&p) {
                base.push(p);
            }
        }
        let spin = random_coord(rng, den);
        let mut positions = Vec::with_capacity(n);
        for k in 0..w {
            for b in &base {
                positions.push(normalize(
                    &(b + rat(k as i64, w as i64) + &spin),
                    &int(1),
                ));
            }
        }
        let Ok(config) = Configuration::new(unit_circle(), positions) else {
            continue;
        };
        if classify(&config) == ConfigClass::I4 {
            return config;
        }
    }
}

/// Rotational symmetry of order `w >= 2`, no axis: a base cell replicated by
/// rotation, rejected unless the classifier agrees on I4 and the extremal
/// set is exactly one rotational class (the generic case; cost ties across
/// classes exist but are degenerate coincidences, pinned separately in the
/// regression tests).
///
/// The cell must hold at least three robots: a two-robot cell {a, b} always
/// admits the reflection axis through (a+b)/2, so such configurations are
/// never in I4. The smallest I4 configurations have n = 6 (w = 2).
pub fn gen_i4(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    loop {
        let config = gen_i4_any(rng, n);
        let analysis = analyze(&config);
        let classes = config.rotational_classes().unwrap();
        let single = classes.iter().any(|class| {
            class.len() == analysis.cost.extremal.len()
                && class.iter().all(|i| analysis.cost.extremal.contains(i))
        });
        if single {
            return config;
        }
    }
}

/// A regular n-gon at a random rotation (the already-formed class).
pub fn gen_i5(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    let den = (8 * n) as i64;
    loop {
        let spin = random_coord(rng, den);
        let positions: Vec<Scalar> = (0..n as i64)
            .map(|k| normalize(&(&spin + rat(k, n as i64)), &int(1)))
            .collect();
        let config = Configuration::new(unit_circle(), positions).unwrap();
        if classify(&config) == ConfigClass::I5 {
            return config;
        }
    }
}

/// Multiple axes with no extremal robot on any of them: two rotational
/// orbits offset so that reflections exchange them (n = 2w robots).
pub fn gen_i6(rng: &mut ChaCha8Rng, w: usize) -> Configuration {
    assert!(w >= 2);
    let den = (16 * w) as i64;
    loop {
        let spin = random_coord(rng, den);
        let offset = rat(rng.gen_range(1..(den / w as i64)), den);
        let mut positions = Vec::with_capacity(2 * w);
        for k in 0..w {
            let turn = rat(k as i64, w as i64);
            positions.push(normalize(&(&spin + &turn), &int(1)));
            positions.push(normalize(&(&spin + &turn + &offset), &int(1)));
        }
        let Ok(config) = Configuration::new(unit_circle(), positions) else {
            continue;
        };
        if classify(&config) == ConfigClass::I6 {
            return config;
        }
    }
}

/// Any configuration admitting at least one reflection axis (for the
/// mirror-cost lemma): alternates between the on-axis and off-axis shapes.
pub fn gen_single_axis(rng: &mut ChaCha8Rng, n: usize) -> Configuration {
    if n % 2 == 0 && rng.gen_bool(0.5) {
        gen_i3(rng, n)
    } else {
        gen_i2(rng, n)
    }
}
