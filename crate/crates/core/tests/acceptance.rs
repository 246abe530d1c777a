//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! verdict lines are always printed; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sasaki::brieskorn::{fano_index, parse_exponent_file, census_of, s3_join, ExponentVector};
use sasaki::circle_bundle::{
    blowup_bundle, hirzebruch_bundle, orthogonality_check, explicit_blowup_matrix, wang_ziller,
};
use sasaki::exact_lattice::IntVec;
use sasaki::sasaki_join::{
    identity_circle, join, join_is_smooth, Regularity, SasakiDescriptor, SasakiType,
};
use sasaki::smale_barden::{classify, BardenInvariant, BardenName, FinAbGroup, Manifold5};
use sasaki::toric_surface::{is_ample, ToricSurface};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn c1_fano_index() -> Verdict {
    let a = ExponentVector::new([2, 3, 7, 35]).unwrap();
    let mut best = Duration::MAX;
    let mut value = BigInt::zero();
    for _ in 0..50 {
        let t = Instant::now();
        value = fano_index(&a);
        best = best.min(t.elapsed());
    }
    verdict(
        value == BigInt::from(1) && best < Duration::from_millis(1),
        format!("I(2,3,7,35) = {value}, fastest of 50 runs {best:?}"),
    )
}

fn c2_barden_table() -> Verdict {
    let rows: [(&str, u32, &[u64], BardenInvariant); 6] = [
        ("X_-1", 0, &[2], BardenInvariant::Finite(1)),
        ("S5", 0, &[], BardenInvariant::Finite(0)),
        ("X_3", 0, &[8, 8], BardenInvariant::Finite(3)),
        ("X_inf", 1, &[], BardenInvariant::Infinite),
        ("M_6", 0, &[6, 6], BardenInvariant::Finite(0)),
        ("S2xS3", 1, &[], BardenInvariant::Finite(0)),
    ];
    let mut bad = Vec::new();
    for (name, rank, orders, i) in rows {
        let m = Manifold5::new(FinAbGroup::from_cyclic_orders(rank, orders).unwrap(), i).unwrap();
        let forward = classify(&m).map(|n| n.to_string());
        let back = name.parse::<BardenName>().and_then(|n| n.to_manifold());
        if forward.as_deref() != Ok(name) || back.as_ref() != Ok(&m) {
            bad.push(name);
        }
    }
    // aliases from the table
    for (alias, canonical) in [("SU(3)/SO(3)", "X_-1"), ("M_0", "S5"), ("X_0", "S5"), ("M_inf", "S2xS3")] {
        let parsed = alias.parse::<BardenName>().map(|n| n.to_string());
        if parsed.as_deref() != Ok(canonical) {
            bad.push(alias);
        }
    }
    verdict(bad.is_empty(), format!("6 rows + 4 aliases, mismatches {bad:?}"))
}

fn c3_hirzebruch() -> Verdict {
    let t = Instant::now();
    let mut cases = 0;
    let mut bad = Vec::new();
    for l1 in 1..=20i64 {
        for l2 in 1..=20i64 {
            if l1.gcd(&l2) != 1 {
                continue;
            }
            for n in 0..=10u32 {
                cases += 1;
                let r = hirzebruch_bundle(l1, l2, n).unwrap();
                let closed = -(2 * l2 - l1 * (2 - i64::from(n)));
                let parity = (i64::from(n) * l1).rem_euclid(2) as u8;
                let expected = if parity == 0 { "S2xS3" } else { "X_inf" };
                let lattice = &r.method.lattice;
                let c1d = lattice.c1d.entries()[0].clone();
                if c1d.abs() != BigInt::from(closed).abs()
                    || lattice.w2_class.bits() != [parity]
                    || lattice.diffeo_name.as_deref() != Some(expected)
                {
                    bad.push((l1, l2, n));
                }
            }
        }
    }
    let elapsed = t.elapsed();
    verdict(
        bad.is_empty() && elapsed < Duration::from_secs(5),
        format!("{cases} cases in {elapsed:?}, disagreements {}", bad.len()),
    )
}

fn c4_ample_cone() -> Verdict {
    let mut bad = Vec::new();
    for n in 0..=8u32 {
        let s = ToricSurface::hirzebruch(n);
        for l1 in -5..=5i64 {
            for l2 in -5..=5i64 {
                let class = s.kahler_class(&[l1, l2]).unwrap();
                let ample = is_ample(s.fan(), &class).unwrap().ample;
                if ample != (l1 > 0 && l2 > 0) {
                    bad.push((n, l1, l2));
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("9 x 121 classes, mismatches {bad:?}"))
}

fn c5_blowup_positivity() -> Verdict {
    let mut bad = Vec::new();
    let mut cases = 0;
    for n in 0..=6u32 {
        for k in 0..=6usize {
            let s = ToricSurface::blown_up_hirzebruch(n, k);
            let g = s.intersection_matrix();
            for l2 in 1..=10i64 {
                cases += 1;
                let mut l = vec![1, l2];
                l.extend(std::iter::repeat_n(1, k));
                let v = IntVec::from_i64(&l, "CFE").unwrap();
                let gv = g.mul_vec(&v).unwrap();
                let square: BigInt = v.entries().iter().zip(&gv).map(|(a, b)| a * b).sum();
                let expected = 2 * l2 + i64::from(n) - k as i64;
                if square != BigInt::from(expected)
                    || square.is_positive() != (2 * l2 + i64::from(n) > k as i64)
                {
                    bad.push((n, k, l2));
                }
            }
        }
    }
    verdict(bad.is_empty(), format!("{cases} cases, mismatches {bad:?}"))
}

fn admissible_blowups(n_max: u32, k_max: usize, l2_max: i64) -> Vec<(u32, usize, i64)> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        for k in 0..=k_max {
            for l2 in 1..=l2_max {
                if 2 * l2 + i64::from(n) > k as i64 {
                    out.push((n, k, l2));
                }
            }
        }
    }
    out
}

fn c6_blowup_parity() -> Verdict {
    let cells = admissible_blowups(4, 4, 8);
    let mut bad = Vec::new();
    for &(n, k, l2) in &cells {
        let r = blowup_bundle(n, k, l2).unwrap();
        let w2_is_n = if r.lattice.spin { 0 } else { 1 } == n % 2;
        if !w2_is_n {
            bad.push((n, k, l2));
        }
    }
    let sample: Vec<_> = bad.iter().take(4).collect();
    verdict(
        bad.is_empty(),
        format!(
            "{} admissible cells, {} where the lattice w2 differs from n mod 2, e.g. {sample:?}",
            cells.len(),
            bad.len()
        ),
    )
}

fn c7_wang_ziller() -> Verdict {
    let mut formula_bad = Vec::new();
    for p1 in 1..=4u32 {
        for p2 in 1..=4u32 {
            for k1 in 1..=10u64 {
                for k2 in 1..=10u64 {
                    if k1.gcd(&k2) != 1 {
                        continue;
                    }
                    let r = wang_ziller(p1, p2, k1, k2).unwrap();
                    let (p1b, p2b) = (u64::from(p1) + 1, u64::from(p2) + 1);
                    let w2 = ((k2 * p1b + k1 * p2b) % 2) as u8;
                    let c1d = k2 as i64 * p1b as i64 - k1 as i64 * p2b as i64;
                    let lattice = &r.method.lattice;
                    if r.w2 != w2
                        || lattice.spin != (w2 == 0)
                        || lattice.c1d.entries()[0].abs() != BigInt::from(c1d).abs()
                    {
                        formula_bad.push((p1, p2, k1, k2));
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nonspin = Vec::new();
    let mut sampled = 0;
    while sampled < 100 {
        let (k1, k2) = (rng.gen_range(1..=1_000_000u64), rng.gen_range(1..=1_000_000u64));
        if k1.gcd(&k2) != 1 {
            continue;
        }
        sampled += 1;
        let r = wang_ziller(1, 1, k1, k2).unwrap();
        if !(r.spin && r.w2 == 0 && r.method.lattice.diffeo_name.as_deref() == Some("S2xS3")) {
            nonspin.push((k1, k2));
        }
    }
    let mut table_bad = Vec::new();
    for q in 1..=10u32 {
        for k in 1..=10u64 {
            let r = wang_ziller(1, q, k, 1).unwrap();
            if r.bundle_trivial != Some(q % 2 == 1 || k % 2 == 0) {
                table_bad.push((q, k));
            }
        }
    }
    verdict(
        formula_bad.is_empty() && nonspin.is_empty() && table_bad.is_empty(),
        format!(
            "formula mismatches {}, non-spin M^(1,1) {}/100, triviality mismatches {}",
            formula_bad.len(),
            nonspin.len(),
            table_bad.len()
        ),
    )
}

fn random_descriptor(rng: &mut ChaCha8Rng, tag: usize) -> SasakiDescriptor {
    let n = rng.gen_range(1..=4u32);
    let regular = rng.gen_bool(0.4);
    let order = if regular { 1 } else { rng.gen_range(1..=12u64) };
    let stype = [SasakiType::Positive, SasakiType::Negative, SasakiType::Null][rng.gen_range(0..3)];
    let index = if stype.is_definite() && rng.gen_bool(0.7) {
        Some(rng.gen_range(1..=8u64))
    } else {
        None
    };
    SasakiDescriptor {
        n,
        order: Some(order),
        index,
        stype,
        regularity: if regular { Regularity::Regular } else { Regularity::QuasiRegular },
        smooth: regular || rng.gen_bool(0.8),
        simply_connected: Some(rng.gen_bool(0.5)),
        toric_rank: if rng.gen_bool(0.5) { Some(rng.gen_range(1..=n + 1)) } else { None },
        eta_einstein: rng.gen_bool(0.5),
        label: format!("R{tag}"),
    }
}

fn c8_joins() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut failures: BTreeMap<&str, usize> = BTreeMap::new();
    let mut fail = |what| *failures.entry(what).or_insert(0) += 1;
    for t in 0..1000 {
        let a = random_descriptor(&mut rng, 2 * t);
        let b = random_descriptor(&mut rng, 2 * t + 1);
        let (k1, k2) = (rng.gen_range(1..=12u64), rng.gen_range(1..=12u64));
        let r = join(&a, &b, k1, k2).unwrap();
        let s = join(&b, &a, k2, k1).unwrap();
        let d = &r.descriptor;
        if d.dimension() != a.dimension() + b.dimension() - 1 {
            fail("dimension");
        }
        if d != &s.descriptor || r.k_pair != (s.k_pair.1, s.k_pair.0) {
            fail("swap");
        }
        let unit = join(&identity_circle(), &a, 1, 1).unwrap().descriptor;
        let unit_r = join(&a, &identity_circle(), 1, 1).unwrap().descriptor;
        if unit != a || unit_r != a {
            fail("unit");
        }
        let m = k1.gcd(&k2);
        let (o1, o2) = (a.order.unwrap(), b.order.unwrap());
        let smooth = a.smooth && b.smooth && (o1 * (k2 / m)).gcd(&(o2 * (k1 / m))) == 1;
        if d.smooth != smooth {
            fail("smoothness");
        }
        let expected_type = if a.stype == b.stype { a.stype } else { SasakiType::Undetermined };
        if d.stype != expected_type {
            fail("type");
        }
        if a.regularity == Regularity::Regular
            && b.regularity == Regularity::Regular
            && m == 1
            && !d.smooth
        {
            fail("regular coprime not smooth");
        }
        if a.regularity == Regularity::Regular
            && b.regularity == Regularity::Regular
            && !join_is_smooth(1, 1, k1 / m, k2 / m)
        {
            fail("regular smoothness predicate");
        }
    }
    verdict(failures.is_empty(), format!("1000 random joins, failures {failures:?}"))
}

fn fixture_path() -> Option<PathBuf> {
    let dir = std::env::var_os("SASAKI_FIXTURES")?;
    let p = PathBuf::from(dir).join("s5_exponents.txt");
    p.is_file().then_some(p)
}

fn c9_s2xs5() -> Verdict {
    let mut checked = 0;
    let mut bad = Vec::new();
    for a0 in 1..=12u64 {
        for a1 in a0..=12 {
            for a2 in a1..=12 {
                for a3 in a2..=42 {
                    let a = ExponentVector::new([a0, a1, a2, a3]).unwrap();
                    let i = fano_index(&a);
                    if i != BigInt::from(1) && i != BigInt::from(2) {
                        continue;
                    }
                    checked += 1;
                    let r = s3_join(&a, 1).unwrap();
                    if r.weights.1 != BigInt::from(1) || !r.homeo_s2xs5 {
                        bad.push(a);
                    }
                }
            }
        }
    }
    let census = match fixture_path() {
        None => "census SKIPPED (no fixture under SASAKI_FIXTURES)".to_string(),
        Some(p) => {
            let f = std::fs::File::open(&p).unwrap();
            let vectors = parse_exponent_file(std::io::BufReader::new(f)).unwrap();
            let c = census_of(&vectors);
            let ok = c.total == 80 && c.count(1) == 16 && c.count(2) == 3;
            if !ok {
                bad.push(ExponentVector::new([1, 1, 1, 1]).unwrap());
            }
            format!(
                "census over {} vectors: I=1 x{}, I=2 x{}",
                c.total,
                c.count(1),
                c.count(2)
            )
        }
    };
    verdict(
        bad.is_empty() && checked > 0,
        format!("{checked} links with I in {{1,2}} all give l2 = 1 and S2xS5; {census}"),
    )
}

fn c10_explicit_matrix() -> Verdict {
    let mut ortho_bad = Vec::new();
    for k in 0..=6usize {
        for l2 in 1..=10i64 {
            let m = explicit_blowup_matrix(k, l2);
            let mut l = vec![1, l2];
            l.extend(std::iter::repeat_n(1, k));
            let cols = orthogonality_check(&m, &IntVec::from_i64(&l, "alpha").unwrap()).unwrap();
            if cols.len() != k + 1 || !cols.iter().all(|&c| c) {
                ortho_bad.push((k, l2));
            }
        }
    }
    let cells = admissible_blowups(6, 6, 10);
    let mut mod2_bad = Vec::new();
    for &(n, k, l2) in &cells {
        let r = blowup_bundle(n, k, l2).unwrap();
        if r.explicit_matrix.spin != r.lattice.spin {
            mod2_bad.push((n, k, l2));
        }
    }
    verdict(
        ortho_bad.is_empty() && mod2_bad.is_empty(),
        format!(
            "orthogonality failures {}/77; mod-2 class differs from the SNF projection in {}/{} cells",
            ortho_bad.len(),
            mod2_bad.len(),
            cells.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 10] = [
        ("Fano index of (2,3,7,35)", c1_fano_index),
        ("Smale-Barden table both ways", c2_barden_table),
        ("Hirzebruch closed form vs lattice", c3_hirzebruch),
        ("ample cone of S_n", c4_ample_cone),
        ("blow-up positivity", c5_blowup_positivity),
        ("blow-up bundle parity w2 = n mod 2", c6_blowup_parity),
        ("Wang-Ziller spin formula", c7_wang_ziller),
        ("join properties", c8_joins),
        ("S3 join with Brieskorn links", c9_s2xs5),
        ("explicit matrix orthogonality and mod-2 class", c10_explicit_matrix),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({})",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            name,
            v.detail
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
