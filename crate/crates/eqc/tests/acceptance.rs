//! Acceptance suite: one test per acceptance criterion.
//!
//! Criteria 1-4 pin the published golden values of the bundled scenarios;
//! criterion 5 compares the level sweep against a brute-force oracle on a
//! random corpus; criterion 6 verifies every instance's equilibrium both
//! symbolically and numerically; criterion 7 checks the structural
//! invariants (floor, monotonicity, ratio growth, mediant, bound ordering);
//! criterion 8 checks generating-set completeness by decomposition.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eqc::bounds::{per_polymer_bound, tbn_bound, BoundMethod};
use eqc::hilbert::{build_cone, hilbert_basis, GeneratingSet, HilbertConfig};
use eqc::levelize::{check_stable, imbalance_novelty, levelize, LevelAssignment, PartialAssignment};
use eqc::model::{check_on_target, MonomerId, Polymer};
use eqc::ratio::{pow_decimal, rat, to_f64};
use eqc::scenarios::{
    gen_and_gate, gen_example_51, gen_translator, translator_leak_bound, AndGateInputs,
    TranslatorMode, TranslatorParams,
};
use eqc::verify::{check_balance, enumerate_canonical, numeric_equilibrium, numeric_equilibrium_hp};
use eqc::{OnTargetSpec, ReactionVec, System};

const CORPUS_SEED: u64 = 20260823;
const CORPUS_SIZE: usize = 200;
const ORACLE_BOUND: u64 = 8;

struct Instance {
    label: String,
    system: System,
    spec: OnTargetSpec,
    basis: GeneratingSet,
    assignment: LevelAssignment,
}

fn build_instance(label: &str, system: System, spec: OnTargetSpec) -> Instance {
    let cone = build_cone(&system, &spec);
    let basis = hilbert_basis(&cone, &HilbertConfig::default())
        .unwrap_or_else(|e| panic!("{label}: basis computation failed: {e}"));
    assert!(
        check_on_target(&system, &spec, basis.vectors()).pass(),
        "{label}: on-target conditions violated"
    );
    let assignment = levelize(&system, &spec, basis.vectors())
        .unwrap_or_else(|e| panic!("{label}: level sweep failed: {e}"));
    Instance { label: label.to_string(), system, spec, basis, assignment }
}

/// The named scenario instances of criteria 1-3.
fn scenario_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    let (system, spec) = gen_example_51();
    out.push(build_instance("example51", system, spec));
    for (inputs, label) in
        [(AndGateInputs::None, "and_gate_none"), (AndGateInputs::BOnly, "and_gate_b")]
    {
        let (system, spec) = gen_and_gate(inputs);
        out.push(build_instance(label, system, spec));
    }
    for n in 2..=8u64 {
        let params = TranslatorParams::new(n, 2).expect("valid parameters");
        let t = gen_translator(params, TranslatorMode::Uniform).expect("uniform generation");
        let spec = t.exact_spec().expect("uniform spec is exact").clone();
        out.push(build_instance(&format!("translator_n{n}"), t.system, spec));
    }
    out
}

fn reactant_copies(v: &ReactionVec) -> u64 {
    v.net().iter().filter(|&&x| x > 0).map(|&x| x as u64).sum()
}

/// Deterministic random corpus per criterion 5: at most 4 monomer types and
/// 6 polymers, entries at most 3, a uniform on-target subset that passes the
/// validity check, and at least one first-level reaction small enough for
/// the brute-force oracle's reactant bound.
fn random_corpus(count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let mut out = Vec::new();
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        assert!(attempts < 200_000, "corpus generation stalled");
        let m = rng.gen_range(1..=4usize);
        let p = rng.gen_range(2..=6usize);

        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut contents: Vec<Vec<u64>> = Vec::with_capacity(p);
        let mut ok = true;
        for _ in 0..p {
            let counts: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=3u64)).collect();
            if counts.iter().all(|&c| c == 0) || !seen.insert(counts.clone()) {
                ok = false;
                break;
            }
            contents.push(counts);
        }
        if !ok || (0..m).any(|i| contents.iter().all(|c| c[i] == 0)) {
            continue;
        }

        let monomers: Vec<MonomerId> =
            (0..m).map(|i| MonomerId::new(&format!("m{i}")).expect("static name")).collect();
        let polymers: Vec<(String, Polymer)> = contents
            .iter()
            .enumerate()
            .map(|(j, counts)| {
                let mut names: Vec<String> = Vec::new();
                for (i, &c) in counts.iter().enumerate() {
                    for _ in 0..c {
                        names.push(format!("m{i}"));
                    }
                }
                let poly = Polymer::from_names(names.iter().map(String::as_str))
                    .expect("nonempty contents");
                (format!("P{j}"), poly)
            })
            .collect();
        let system = match System::new(monomers, polymers) {
            Ok(s) => s,
            Err(_) => continue,
        };

        let mut order: Vec<usize> = (0..p).collect();
        order.shuffle(&mut rng);
        let s_size = rng.gen_range(1..p);
        let spec = OnTargetSpec::uniform(&system, order[..s_size].iter().copied())
            .expect("indices are in range");

        let cone = build_cone(&system, &spec);
        let basis = match hilbert_basis(&cone, &HilbertConfig::default()) {
            Ok(b) => b,
            Err(_) => continue,
        };
        if !check_on_target(&system, &spec, basis.vectors()).pass() {
            continue;
        }
        let assignment = match levelize(&system, &spec, basis.vectors()) {
            Ok(a) => a,
            Err(_) => continue,
        };
        let Some(first) = assignment.levels().first() else { continue };
        if !first.reactions.iter().any(|v| reactant_copies(v) <= ORACLE_BOUND) {
            continue;
        }
        let label = format!("random{:03}", out.len());
        out.push(Instance { label, system, spec, basis, assignment });
    }
    out
}

fn ratio(k: &BigRational, l: u64) -> BigRational {
    k / BigRational::from(BigInt::from(l))
}

/// Brute-force minimum k/l over all canonical reactions within the
/// reactant bound.
fn oracle_min(system: &System, spec: &OnTargetSpec, bound: u64) -> Option<BigRational> {
    let reactions = enumerate_canonical(system, spec, bound).expect("enumeration within budget");
    let partial = PartialAssignment::from_spec(spec);
    let mut best: Option<BigRational> = None;
    for v in &reactions {
        let (k, l) = imbalance_novelty(v, &partial);
        if l == 0 {
            continue;
        }
        let r = ratio(&k, l);
        if best.as_ref().map_or(true, |b| r < *b) {
            best = Some(r);
        }
    }
    best
}

/// Numeric equilibrium recovery for criterion 6: doubles where the depth
/// allows, escalating to software precision for deep exponent ranges where
/// double rounding swamps the smallest concentrations.
fn numeric_roundtrip(inst: &Instance, c: &BigRational) {
    let mu = inst.assignment.mu_vector();
    let log10_inv_c = -to_f64(c).log10();
    let depth = mu.iter().map(|m| to_f64(m) * log10_inv_c).fold(0.0f64, f64::max);
    // Negative exponents make some concentrations large; what doubles must
    // span is the full decimal range between the largest and the smallest.
    // Rounding the reference concentrations to doubles perturbs the totals
    // at 1e-16 relative, and the equilibrium map amplifies that by the
    // decimal range, so past ~7 decades doubles cannot hit 1e-6 and the
    // instance escalates to software precision.
    let elevation = mu.iter().map(|m| -to_f64(m) * log10_inv_c).fold(0.0f64, f64::max);
    let rel_tol = rat(1, 1_000_000);
    if depth + elevation <= 7.0 {
        let x_true: Vec<f64> = mu
            .iter()
            .map(|m| to_f64(&pow_decimal(c, m, 30).expect("exponent in range")))
            .collect();
        let x0 = inst.system.monomer_totals_f64(&x_true);
        let x = numeric_equilibrium(&inst.system, &x0, 1e-11, 500)
            .unwrap_or_else(|e| panic!("{}: numeric recovery failed: {e}", inst.label));
        for (j, (got, want)) in x.iter().zip(&x_true).enumerate() {
            let rel = ((got - want) / want).abs();
            assert!(
                rel <= 1e-6,
                "{}: polymer {} off by {rel:e} at base {}",
                inst.label,
                inst.system.polymer_name(j),
                c
            );
        }
    } else {
        let range = (depth + elevation).ceil() as u32;
        let digits = range + 15;
        let x_true: Vec<BigRational> = mu
            .iter()
            .map(|m| pow_decimal(c, m, digits + 10).expect("exponent in range"))
            .collect();
        let x0 = inst.system.monomer_totals(&x_true);
        let tol = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(range + 8));
        let x = numeric_equilibrium_hp(&inst.system, &x0, digits, &tol, 200)
            .unwrap_or_else(|e| panic!("{}: precise recovery failed: {e}", inst.label));
        for (j, (got, want)) in x.iter().zip(&x_true).enumerate() {
            let rel = ((got - want) / want).abs();
            assert!(
                rel <= rel_tol,
                "{}: polymer {} off by {} at base {}",
                inst.label,
                inst.system.polymer_name(j),
                to_f64(&rel),
                c
            );
        }
    }
}

#[test]
fn criterion_1_cascade_exponents() {
    let start = Instant::now();
    let inst = {
        let (system, spec) = gen_example_51();
        build_instance("example51", system, spec)
    };
    let s = &inst.system;
    let a = &inst.assignment;
    for (name, num) in [("X", 2), ("Y", 3), ("Z", 4)] {
        let j = s.polymer_index(name).expect("polymer exists");
        assert_eq!(a.mu_tilde(j), Some(&rat(num, 1)), "exponent of {name}");
    }
    let levels = a.levels();
    assert_eq!(levels.len(), 3);
    for (i, (name, num)) in [("X", 2), ("Y", 3), ("Z", 4)].iter().enumerate() {
        assert_eq!(levels[i].mu, rat(*num, 1));
        let members: Vec<&str> = levels[i].members.iter().map(|&j| s.polymer_name(j)).collect();
        assert_eq!(members, vec![*name]);
    }
    assert!(start.elapsed() < Duration::from_secs(1), "took {:?}", start.elapsed());
    println!("acceptance criterion 1: PASS — cascade exponents 2, 3, 4 in {:?}", start.elapsed());
}

#[test]
fn criterion_2_and_gate_entropy_bounds() {
    let start = Instant::now();
    for (inputs, expected) in
        [(AndGateInputs::None, rat(3, 2)), (AndGateInputs::BOnly, rat(4, 3))]
    {
        let (system, spec) = gen_and_gate(inputs);
        let inst = build_instance("and_gate", system, spec);
        let report = tbn_bound(&inst.spec, inst.basis.vectors());
        assert!(report.closed);
        assert_eq!(report.mu1, Some(expected));
    }
    assert!(start.elapsed() < Duration::from_secs(1), "took {:?}", start.elapsed());
    println!(
        "acceptance criterion 2: PASS — entropy bounds 3/2 and 4/3 in {:?}",
        start.elapsed()
    );
}

#[test]
fn criterion_3_translator_uniform_family() {
    let mut previous: Option<BigRational> = None;
    for n in 2..=8i64 {
        let params = TranslatorParams::new(n as u64, 2).expect("valid parameters");
        let t = gen_translator(params, TranslatorMode::Uniform).expect("uniform generation");
        let spec = t.exact_spec().expect("uniform spec is exact").clone();
        let inst = build_instance(&format!("translator_n{n}"), t.system, spec);
        let expected = rat(n - 1, n + 3) + rat(1, 1);
        let report = tbn_bound(&inst.spec, inst.basis.vectors());
        assert_eq!(report.mu1, Some(expected.clone()), "entropy bound at N={n}");
        assert_eq!(inst.assignment.mu1(), Some(&expected), "sweep bound at N={n}");
        if let Some(prev) = &previous {
            assert!(expected > *prev, "sequence must strictly increase at N={n}");
        }
        assert!(expected < rat(2, 1), "bounded above by the limit");
        // Distance to the limit is exactly 4/(N+3), so it tends to zero.
        assert_eq!(rat(2, 1) - &expected, rat(4, n + 3));
        previous = Some(expected);
    }
    println!("acceptance criterion 3: PASS — first-round bound (N-1)/(N+3)+1 for N=2..8, increasing to 2");
}

#[test]
fn criterion_4_translator_leak_bound() {
    let params = TranslatorParams::new(3, 2).expect("valid parameters");
    let c = 0.0064;
    let lb = translator_leak_bound(params, c, c / 4.0).expect("parameters in range");
    let per_fuel = lb.k_beta_lower / lb.n as f64;
    assert!((per_fuel - 0.25).abs() <= 0.01, "surplus per fuel was {per_fuel}");
    assert!(lb.meets_quarter_regime);
    // In the quarter regime the leak exponent is n/8 = (N+1)/4.
    assert!((lb.leak_exponent - (3.0 + 1.0) / 4.0).abs() < 1e-9);
    println!("acceptance criterion 4: PASS — leak surplus n/4 and exponent (N+1)/4 at c=0.0064");
}

#[test]
fn criterion_5_oracle_equivalence() {
    let start = Instant::now();
    let corpus = random_corpus(CORPUS_SIZE);
    for inst in &corpus {
        let mu1 = inst.assignment.mu1().expect("first level exists");
        let oracle = oracle_min(&inst.system, &inst.spec, ORACLE_BOUND)
            .expect("an off-target-producing reaction within the bound");
        assert_eq!(&oracle, mu1, "oracle disagreed on {}", inst.label);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "acceptance criterion 5: PASS — sweep minimum equals brute-force minimum on {} systems in {elapsed:?}",
        corpus.len()
    );
}

#[test]
fn criterion_6_equilibrium_verification() {
    let start = Instant::now();
    let mut instances = scenario_instances();
    instances.extend(random_corpus(CORPUS_SIZE));
    let bases = [rat(1, 10), rat(1, 100)];
    for inst in &instances {
        let mu = inst.assignment.mu_vector();
        let cert = check_balance(&inst.system, &mu, inst.basis.vectors());
        assert!(cert.pass(), "symbolic certificate failed on {}", inst.label);
        for c in &bases {
            numeric_roundtrip(inst, c);
        }
    }
    println!(
        "acceptance criterion 6: PASS — exact certificate and numeric recovery on {} instances in {:?}",
        instances.len(),
        start.elapsed()
    );
}

#[test]
fn criterion_7_invariant_suite() {
    let scenarios = scenario_instances();
    let corpus = random_corpus(CORPUS_SIZE);

    // Floor, strict monotonicity, and per-round ratio growth.
    for inst in scenarios.iter().chain(&corpus) {
        let a = &inst.assignment;
        let stable = check_stable(&inst.spec, inst.basis.vectors()).stable;
        let uniform = inst.spec.iter().all(|(_, m)| m.is_one());
        let mut prev: Option<&BigRational> = None;
        for level in a.levels() {
            if let Some(p) = prev {
                assert!(level.mu > *p, "{}: level exponents must strictly increase", inst.label);
            }
            prev = Some(&level.mu);
        }
        if stable && uniform {
            for j in 0..inst.system.polymer_count() {
                if !inst.spec.contains(j) {
                    let mu = a.mu_tilde(j).expect("assigned by the sweep");
                    assert!(
                        *mu > BigRational::one(),
                        "{}: off-target exponent floor violated at {}",
                        inst.label,
                        inst.system.polymer_name(j)
                    );
                }
            }
        }
        for level in a.levels() {
            let partial = a.prefix(&inst.spec, level.index);
            let mut attained = false;
            for v in inst.basis.vectors() {
                let (k, l) = imbalance_novelty(v, &partial);
                if l == 0 {
                    continue;
                }
                let r = ratio(&k, l);
                assert!(
                    r >= level.mu,
                    "{}: a candidate ratio dipped below the round minimum",
                    inst.label
                );
                attained |= r == level.mu;
            }
            assert!(attained, "{}: round minimum must be attained", inst.label);
        }
    }

    // Mediant property on 1,000 random draws.
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED ^ 0x6d65_6469);
    for _ in 0..1000 {
        let a = rat(rng.gen_range(-50..=50), rng.gen_range(1..=10));
        let b = rat(rng.gen_range(-50..=50), rng.gen_range(1..=10));
        let alpha = rng.gen_range(1..=20u64);
        let beta = rng.gen_range(1..=20u64);
        let ra = ratio(&a, alpha);
        let rb = ratio(&b, beta);
        let mediant = ratio(&(&a + &b), alpha + beta);
        let lo = ra.clone().min(rb.clone());
        let hi = ra.max(rb);
        assert!(lo <= mediant && mediant <= hi, "mediant property violated");
    }

    // Bound ordering: the linear-programming bound never exceeds the
    // enumeration bound, and certified bounds sit between the round
    // exponent and the final assignment.
    let mut checked = 0usize;
    for inst in scenarios.iter().take(3).chain(corpus.iter().take(40)) {
        let mu1 = match inst.assignment.mu1() {
            Some(m) => m.clone(),
            None => continue,
        };
        for j in 0..inst.system.polymer_count() {
            if inst.spec.contains(j) {
                continue;
            }
            let run = |method| {
                per_polymer_bound(
                    &inst.system,
                    &inst.spec,
                    &inst.assignment,
                    inst.basis.vectors(),
                    j,
                    1,
                    method,
                    4,
                )
                .unwrap_or_else(|e| panic!("{}: bound failed: {e}", inst.label))
            };
            let lp = run(BoundMethod::LpCertified);
            let en = run(BoundMethod::EnumExact);
            assert!(lp.value <= en.value, "{}: lp bound exceeded enum bound", inst.label);
            let mu_final = inst.assignment.mu_tilde(j).expect("assigned").clone();
            for report in [&lp, &en] {
                if report.certified {
                    assert!(
                        mu1 <= report.value && report.value <= mu_final,
                        "{}: certified bound left the sandwich for {}",
                        inst.label,
                        inst.system.polymer_name(j)
                    );
                }
            }
            checked += 1;
        }
    }
    assert!(checked >= 40, "bound ordering needs a meaningful sample, got {checked}");
    println!("acceptance criterion 7: PASS — floor, monotonicity, ratio growth, mediant, and bound ordering hold");
}

#[test]
fn criterion_8_hilbert_completeness() {
    let corpus = random_corpus(CORPUS_SIZE);
    let mut decomposed = 0usize;
    for inst in &corpus {
        let reactions = enumerate_canonical(&inst.system, &inst.spec, ORACLE_BOUND)
            .expect("enumeration within budget");
        for v in &reactions {
            let l1: u64 = v.net().iter().map(|x| x.unsigned_abs()).sum();
            if l1 > 8 {
                continue;
            }
            let combo = inst
                .basis
                .decompose(v)
                .unwrap_or_else(|| panic!("{}: {} does not decompose", inst.label, v.render(&inst.system)));
            let mut acc = vec![0i64; inst.system.polymer_count()];
            for (idx, coeff) in combo {
                for (pos, &val) in inst.basis.vectors()[idx].net().iter().enumerate() {
                    acc[pos] += coeff as i64 * val;
                }
            }
            assert_eq!(acc, v.net(), "{}: decomposition must recompose", inst.label);
            decomposed += 1;
        }
    }
    assert!(decomposed > 0, "the corpus must exercise decompositions");
    println!(
        "acceptance criterion 8: PASS — {} enumerated cone points decomposed over the generating sets of {} systems",
        decomposed,
        corpus.len()
    );
}
