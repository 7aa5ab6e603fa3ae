//! Worked scenario generators.
//!
//! Three families of ready-made systems exercise the full pipeline:
//!
//! * a three-species cascade whose off-target exponents come out 2, 3, 4;
//! * an AND gate computing `C` from inputs `X`, `Y`, `Z` (with an optional
//!   partial input `B`), whose output-leak bounds are `c^{3/2}` and
//!   `c^{4/3}`;
//! * a two-layer catalytic translator with redundancy `N`, whose
//!   full-leak pathway pins the first-round bound at `(N-1)/(N+3) + 1`.
//!
//! The translator's with-input regime prescribes fuel and waste exponents
//! containing `log_c 2` terms.  Those are irrational, so the exact sweep
//! cannot accept them; the regime is covered instead by the closed-form
//! calculator [`translator_leak_bound`], which reproduces the leak exponent
//! bound numerically.
//!
//! [`DomainPolymer`] is a light helper for domain-level strand encodings:
//! a polymer is admissible when no complement (starred) domain outnumbers
//! its plain partner within the polymer.

use serde_json::json;
use thiserror::Error;

use crate::model::{ModelError, MonomerId, OnTargetSpec, Polymer, System};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("redundancy parameter must be at least 2")]
    RedundancyTooSmall,
    #[error("layer count must be at least 1")]
    NoLayers,
    #[error("with-input exponents are irrational; no exact on-target spec exists")]
    IrrationalExponents,
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("empty domain token")]
    BadDomainToken,
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn uniform_spec(system: &System, members: impl IntoIterator<Item = usize>) -> OnTargetSpec {
    OnTargetSpec::uniform(system, members).expect("generated on-target sets are valid")
}

/// The worked cascade: monomer pool {a, b, c}, on-target dimers and
/// catalyst {A, B, C}, off-target {X, Y, Z}.
pub fn gen_example_51() -> (System, OnTargetSpec) {
    let system = crate::parse::parse_system(
        "monomer a\nmonomer b\nmonomer c\n\
         polymer A = a a\npolymer B = a b\npolymer C = c\n\
         polymer X = a a a b\npolymer Y = b b c c\npolymer Z = b b c c c\n",
    )
    .expect("static scenario text parses");
    let spec = uniform_spec(&system, [0, 1, 2]);
    (system, spec)
}

/// Which inputs of the AND gate are present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AndGateInputs {
    None,
    BOnly,
}

impl std::str::FromStr for AndGateInputs {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(AndGateInputs::None),
            "b" | "b_only" => Ok(AndGateInputs::BOnly),
            other => Err(format!("unknown input selection `{other}`")),
        }
    }
}

/// An AND gate producing `C` by consuming all of `X`, `Y`, `Z` (and, when
/// present, the partial input `B` through the split gates `G2`, `G3`).
/// The monomer composition realizes the two gate reactions
/// `X + Y + Z -> G1 + C` and `B + X + Y + Z -> G2 + G3 + C` with entropy
/// losses 1 and novelties 2 and 3 respectively.
pub fn gen_and_gate(inputs: AndGateInputs) -> (System, OnTargetSpec) {
    let m = |names: &[&str]| -> Vec<MonomerId> {
        names
            .iter()
            .map(|n| MonomerId::new(n).expect("static name"))
            .collect()
    };
    let p = |names: &[&str]| Polymer::from_names(names.iter().copied()).expect("static polymer");
    let x = ("X".to_string(), p(&["x1", "x2"]));
    let y = ("Y".to_string(), p(&["y1", "y2"]));
    let z = ("Z".to_string(), p(&["z1", "z2"]));
    let c = ("C".to_string(), p(&["x2", "y1"]));
    let g1 = ("G1".to_string(), p(&["x1", "y2", "z1", "z2"]));
    match inputs {
        AndGateInputs::None => {
            let system = System::new(
                m(&["x1", "x2", "y1", "y2", "z1", "z2"]),
                vec![x, y, z, c, g1],
            )
            .expect("static system validates");
            let spec = uniform_spec(&system, [0, 1, 2]);
            (system, spec)
        }
        AndGateInputs::BOnly => {
            let b = ("B".to_string(), p(&["b1", "b2"]));
            let g2 = ("G2".to_string(), p(&["b1", "x1"]));
            let g3 = ("G3".to_string(), p(&["b2", "y2", "z1", "z2"]));
            let system = System::new(
                m(&["x1", "x2", "y1", "y2", "z1", "z2", "b1", "b2"]),
                vec![b, x, y, z, c, g1, g2, g3],
            )
            .expect("static system validates");
            let spec = uniform_spec(&system, [0, 1, 2, 3]);
            (system, spec)
        }
    }
}

/// Translator-cascade shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranslatorParams {
    redundancy: u64,
    layers: u64,
}

impl TranslatorParams {
    pub fn new(redundancy: u64, layers: u64) -> Result<Self, ScenarioError> {
        if redundancy < 2 {
            return Err(ScenarioError::RedundancyTooSmall);
        }
        if layers == 0 {
            return Err(ScenarioError::NoLayers);
        }
        Ok(TranslatorParams { redundancy, layers })
    }

    /// Redundancy `N`: bound signal domains per fuel.
    pub fn redundancy(&self) -> u64 {
        self.redundancy
    }

    pub fn layers(&self) -> u64 {
        self.layers
    }

    /// Signal-chain length `n = layers * (N + 1)`.
    pub fn n(&self) -> u64 {
        self.layers * (self.redundancy + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranslatorMode {
    Uniform,
    WithInput,
}

impl std::str::FromStr for TranslatorMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(TranslatorMode::Uniform),
            "with_input" | "with-input" => Ok(TranslatorMode::WithInput),
            other => Err(format!("unknown translator mode `{other}`")),
        }
    }
}

/// A generated translator instance.  `exact_spec` is available in uniform
/// mode only; the with-input exponents are irrational (see module notes).
#[derive(Debug, Clone)]
pub struct TranslatorScenario {
    pub system: System,
    pub params: TranslatorParams,
    pub mode: TranslatorMode,
    /// Indices of the on-target polymers.
    pub on_target: Vec<usize>,
    spec: Option<OnTargetSpec>,
}

impl TranslatorScenario {
    pub fn exact_spec(&self) -> Result<&OnTargetSpec, ScenarioError> {
        self.spec.as_ref().ok_or(ScenarioError::IrrationalExponents)
    }

    pub fn metadata_json(&self) -> serde_json::Value {
        json!({
            "redundancy": self.params.redundancy(),
            "layers": self.params.layers(),
            "n": self.params.n(),
            "mode": match self.mode {
                TranslatorMode::Uniform => "uniform",
                TranslatorMode::WithInput => "with_input",
            },
        })
    }
}

/// Builds the translator cascade.
///
/// Monomers are signal strands `s_i` and bottom strands `b_i`; fuels are
/// `F_i = {s_i, b_i}`, wastes `W_i = {s_{i-1}, b_i}`, free signals
/// `X_i = {s_i}`, and `G` is the large leak complex — the first-layer fuels
/// merged minus the released top strand, `{s_1..s_N, b_1..b_{N+1}}`.
///
/// Uniform mode puts exactly the fuels on target (everything reachable
/// from fuels alone is included: wastes and free signals past the first
/// layer, plus `G`).  With-input mode adds the input signal `s_0` and the
/// polymers of the intended pathway (`X_0..X_n`, `W_1..W_n`); its on-target
/// set is all of those except the leak products `G` and `X_n`.
pub fn gen_translator(
    params: TranslatorParams,
    mode: TranslatorMode,
) -> Result<TranslatorScenario, ScenarioError> {
    let n = params.n();
    let nn = params.redundancy(); // N
    let s = |i: u64| format!("s{i}");
    let b = |i: u64| format!("b{i}");

    let mut monomers: Vec<MonomerId> = Vec::new();
    let start = match mode {
        TranslatorMode::Uniform => 1,
        TranslatorMode::WithInput => 0,
    };
    for i in start..=n {
        monomers.push(MonomerId::new(&s(i))?);
    }
    for i in 1..=n {
        monomers.push(MonomerId::new(&b(i))?);
    }

    let fuel = |i: u64| Polymer::from_names([s(i).as_str(), b(i).as_str()]);
    let waste = |i: u64| Polymer::from_names([s(i - 1).as_str(), b(i).as_str()]);
    let signal = |i: u64| Polymer::from_names([s(i).as_str()]);
    let big_g = || {
        let mut names: Vec<String> = (1..=nn).map(s).collect();
        names.extend((1..=nn + 1).map(b));
        Polymer::from_names(names.iter().map(String::as_str))
    };

    let mut polymers: Vec<(String, Polymer)> = Vec::new();
    for i in 1..=n {
        polymers.push((format!("F{i}"), fuel(i)?));
    }
    match mode {
        TranslatorMode::Uniform => {
            for i in nn + 2..=n {
                polymers.push((format!("W{i}"), waste(i)?));
            }
            for i in nn + 1..=n {
                polymers.push((format!("X{i}"), signal(i)?));
            }
        }
        TranslatorMode::WithInput => {
            for i in 1..=n {
                polymers.push((format!("W{i}"), waste(i)?));
            }
            for i in 0..=n {
                polymers.push((format!("X{i}"), signal(i)?));
            }
        }
    }
    polymers.push(("G".to_string(), big_g()?));

    let system = System::new(monomers, polymers)?;
    let on_target: Vec<usize> = match mode {
        TranslatorMode::Uniform => (0..n as usize).collect(),
        TranslatorMode::WithInput => {
            let leak = [format!("X{n}"), "G".to_string()];
            (0..system.polymer_count())
                .filter(|&j| !leak.contains(&system.polymer_name(j).to_string()))
                .collect()
        }
    };
    let spec = match mode {
        TranslatorMode::Uniform => {
            Some(uniform_spec(&system, on_target.iter().copied()))
        }
        TranslatorMode::WithInput => None,
    };
    Ok(TranslatorScenario { system, params, mode, on_target, spec })
}

/// Closed-form lower bound on the leak-pathway surplus in the with-input
/// regime, and the leak exponent it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakBound {
    pub n: u64,
    /// Lower bound on the surplus of the full-leak pathway.
    pub k_beta_lower: f64,
    /// Surplus per unit novelty (the leak pathway makes two off-target
    /// products), hence the bound on the leak exponent.
    pub ratio: f64,
    pub leak_exponent: f64,
    /// Whether the surplus reaches `n/4`, the regime in which the leak
    /// concentration is at most `c^{n/8}`.
    pub meets_quarter_regime: bool,
}

impl LeakBound {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "k_beta_lower": self.k_beta_lower,
            "ratio": self.ratio,
            "leak_exponent": self.leak_exponent,
            "meets_quarter_regime": self.meets_quarter_regime,
        })
    }
}

/// Evaluates `k_beta_lower = n log_c(2c+2y) - (n/2) log_c(c-2y)` for fuel
/// excess `y` over consumed signal, requiring `0 < y <= c/4` (which keeps
/// `c - 2y` positive) and `0 < c < 1`.
pub fn translator_leak_bound(
    params: TranslatorParams,
    c: f64,
    y: f64,
) -> Result<LeakBound, ScenarioError> {
    if !(c > 0.0 && c < 1.0) || !c.is_finite() {
        return Err(ScenarioError::ParameterRange(format!("base c = {c}")));
    }
    if !(y > 0.0 && y <= c / 4.0) {
        return Err(ScenarioError::ParameterRange(format!("fuel excess y = {y}")));
    }
    if c - 2.0 * y <= 0.0 {
        return Err(ScenarioError::ParameterRange(
            "c - 2y must be positive".to_string(),
        ));
    }
    let n = params.n() as f64;
    let log_c = |z: f64| z.ln() / c.ln();
    let k_beta_lower = n * log_c(2.0 * c + 2.0 * y) - (n / 2.0) * log_c(c - 2.0 * y);
    let ratio = k_beta_lower / 2.0;
    Ok(LeakBound {
        n: params.n(),
        k_beta_lower,
        ratio,
        leak_exponent: ratio,
        meets_quarter_regime: k_beta_lower >= n / 4.0 - 1e-12,
    })
}

/// One strand: an ordered list of domain tokens (`name` or `name*`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Strand(Vec<(String, bool)>);

impl Strand {
    pub fn parse<'a, I: IntoIterator<Item = &'a str>>(tokens: I) -> Result<Self, ScenarioError> {
        let mut out = Vec::new();
        for t in tokens {
            let (name, starred) = match t.strip_suffix('*') {
                Some(base) => (base, true),
                None => (t, false),
            };
            if name.is_empty() {
                return Err(ScenarioError::BadDomainToken);
            }
            out.push((name.to_string(), starred));
        }
        Ok(Strand(out))
    }
}

/// A polymer at domain resolution: a collection of strands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainPolymer {
    strands: Vec<Strand>,
}

impl DomainPolymer {
    pub fn new(strands: Vec<Strand>) -> Self {
        DomainPolymer { strands }
    }

    pub fn parse(strands: &[&[&str]]) -> Result<Self, ScenarioError> {
        Ok(DomainPolymer {
            strands: strands
                .iter()
                .map(|s| Strand::parse(s.iter().copied()))
                .collect::<Result<_, _>>()?,
        })
    }
}

/// A domain polymer is admissible when, for every domain name, the starred
/// (complement) occurrences do not outnumber the plain ones: every
/// complement can find a partner inside the polymer.
pub fn domain_admissible(p: &DomainPolymer) -> bool {
    let mut balance: std::collections::BTreeMap<&str, i64> = std::collections::BTreeMap::new();
    for strand in &p.strands {
        for (name, starred) in &strand.0 {
            *balance.entry(name.as_str()).or_insert(0) += if *starred { -1 } else { 1 };
        }
    }
    balance.values().all(|&v| v >= 0)
}

/// The domain-level encoding of a translator fuel: a signal strand of `n`
/// domains hybridized to its full complement.
pub fn translator_fuel_domains(index: u64, domains: u64) -> DomainPolymer {
    let top: Vec<String> = (1..=domains).map(|d| format!("d{index}_{d}")).collect();
    let bottom: Vec<String> = (1..=domains).map(|d| format!("d{index}_{d}*")).collect();
    let strand = |names: &[String]| {
        Strand::parse(names.iter().map(String::as_str)).expect("generated tokens are nonempty")
    };
    DomainPolymer::new(vec![strand(&top), strand(&bottom)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::tbn_bound;
    use crate::hilbert::{build_cone, hilbert_basis, HilbertConfig};
    use crate::levelize::levelize;
    use crate::model::check_on_target;
    use crate::ratio::rat;

    fn basis_of(system: &System, spec: &OnTargetSpec) -> Vec<crate::model::ReactionVec> {
        hilbert_basis(&build_cone(system, spec), &HilbertConfig::default())
            .unwrap()
            .vectors()
            .to_vec()
    }

    #[test]
    fn example_51_round_trip() {
        let (s, spec) = gen_example_51();
        let basis = basis_of(&s, &spec);
        assert!(check_on_target(&s, &spec, &basis).pass());
        let a = levelize(&s, &spec, &basis).unwrap();
        assert_eq!(a.mu_tilde(s.polymer_index("X").unwrap()), Some(&rat(2, 1)));
        assert_eq!(a.mu_tilde(s.polymer_index("Y").unwrap()), Some(&rat(3, 1)));
        assert_eq!(a.mu_tilde(s.polymer_index("Z").unwrap()), Some(&rat(4, 1)));
        let st = crate::levelize::check_stable(&spec, &basis);
        assert!(st.stable);
        assert_eq!(st.min_ratio, Some(rat(2, 1)));
    }

    #[test]
    fn and_gate_without_inputs() {
        let (s, spec) = gen_and_gate(AndGateInputs::None);
        let basis = basis_of(&s, &spec);
        assert!(check_on_target(&s, &spec, &basis).pass());
        // The single generator is the gate reaction, with e = 1 and l = 2.
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].render(&s), "X + Y + Z -> C + G1");
        assert_eq!(basis[0].entropy_loss(), 1);
        let partial = crate::levelize::PartialAssignment::from_spec(&spec);
        assert_eq!(
            crate::levelize::imbalance_novelty(&basis[0], &partial),
            (rat(3, 1), 2)
        );
        let bound = tbn_bound(&spec, &basis);
        assert!(bound.closed);
        assert_eq!(bound.mu1, Some(rat(3, 2)));
        let a = levelize(&s, &spec, &basis).unwrap();
        assert_eq!(a.mu_tilde(s.polymer_index("C").unwrap()), Some(&rat(3, 2)));
        assert_eq!(a.mu_tilde(s.polymer_index("G1").unwrap()), Some(&rat(3, 2)));
    }

    #[test]
    fn and_gate_with_partial_input() {
        let (s, spec) = gen_and_gate(AndGateInputs::BOnly);
        let basis = basis_of(&s, &spec);
        assert!(check_on_target(&s, &spec, &basis).pass());
        assert_eq!(basis.len(), 2);
        let rendered: Vec<String> = basis.iter().map(|v| v.render(&s)).collect();
        assert!(rendered.contains(&"X + Y + Z -> C + G1".to_string()));
        assert!(rendered.contains(&"B + X + Y + Z -> C + G2 + G3".to_string()));
        let bound = tbn_bound(&spec, &basis);
        assert!(bound.closed);
        assert_eq!(bound.worst_ratio, Some(rat(1, 3)));
        assert_eq!(bound.mu1, Some(rat(4, 3)));
        let a = levelize(&s, &spec, &basis).unwrap();
        assert_eq!(a.levels().len(), 2);
        assert_eq!(a.levels()[0].mu, rat(4, 3));
        assert_eq!(a.levels()[1].mu, rat(5, 3));
        assert_eq!(a.mu_tilde(s.polymer_index("C").unwrap()), Some(&rat(4, 3)));
        assert_eq!(a.mu_tilde(s.polymer_index("G1").unwrap()), Some(&rat(5, 3)));
    }

    #[test]
    fn translator_uniform_shape() {
        let params = TranslatorParams::new(3, 2).unwrap();
        assert_eq!(params.n(), 8);
        let t = gen_translator(params, TranslatorMode::Uniform).unwrap();
        let s = &t.system;
        // 8 fuels, wastes W5..W8, signals X4..X8, and G.
        assert_eq!(s.polymer_count(), 8 + 4 + 5 + 1);
        let spec = t.exact_spec().unwrap();
        assert_eq!(spec.len(), 8);
        for i in 1..=8u64 {
            assert!(spec.contains(s.polymer_index(&format!("F{i}")).unwrap()));
        }
        for name in ["W5", "W8", "X4", "X8", "G"] {
            assert!(!spec.contains(s.polymer_index(name).unwrap()), "{name}");
        }
        let basis = basis_of(s, spec);
        assert!(check_on_target(s, spec, &basis).pass());
        assert_eq!(basis.len(), 5); // short-circuit plus one stop per waste layer
    }

    #[test]
    fn translator_uniform_bounds() {
        for n in 2..=5u64 {
            let params = TranslatorParams::new(n, 2).unwrap();
            let t = gen_translator(params, TranslatorMode::Uniform).unwrap();
            let spec = t.exact_spec().unwrap();
            let basis = basis_of(&t.system, spec);
            let bound = tbn_bound(spec, &basis);
            assert!(bound.closed, "N={n}");
            let expected = rat(n as i64 - 1, n as i64 + 3) + rat(1, 1);
            assert_eq!(bound.mu1, Some(expected.clone()), "N={n}");
            let a = levelize(&t.system, spec, &basis).unwrap();
            assert_eq!(a.mu1(), Some(&expected), "N={n}");
            // One round for the leak pathway, then one per free signal.
            assert_eq!(a.levels().len(), n as usize + 2, "N={n}");
        }
    }

    #[test]
    fn translator_level_two_value() {
        let params = TranslatorParams::new(3, 2).unwrap();
        let t = gen_translator(params, TranslatorMode::Uniform).unwrap();
        let spec = t.exact_spec().unwrap();
        let basis = basis_of(&t.system, spec);
        let a = levelize(&t.system, spec, &basis).unwrap();
        // (3N+1)/(N+3) at N=3.
        assert_eq!(a.levels()[1].mu, rat(5, 3));
        // The first round assigns the full-leak products.
        let names: Vec<&str> = a.levels()[0]
            .members
            .iter()
            .map(|&j| t.system.polymer_name(j))
            .collect();
        assert_eq!(names, vec!["W5", "W6", "W7", "W8", "X8", "G"]);
    }

    #[test]
    fn translator_with_input_is_numeric_only() {
        let params = TranslatorParams::new(3, 2).unwrap();
        let t = gen_translator(params, TranslatorMode::WithInput).unwrap();
        assert_eq!(t.exact_spec(), Err(ScenarioError::IrrationalExponents));
        let s = &t.system;
        // The intended step X0 + F1 -> X1 + W1 conserves monomers.
        let mut net = vec![0i64; s.polymer_count()];
        net[s.polymer_index("X0").unwrap()] = 1;
        net[s.polymer_index("F1").unwrap()] = 1;
        net[s.polymer_index("X1").unwrap()] = -1;
        net[s.polymer_index("W1").unwrap()] = -1;
        assert!(s.reaction(net).is_ok());
        // Leak products are off target, the rest is on.
        assert!(!t.on_target.contains(&s.polymer_index("G").unwrap()));
        assert!(!t.on_target.contains(&s.polymer_index("X8").unwrap()));
        assert!(t.on_target.contains(&s.polymer_index("X0").unwrap()));
        assert!(t.on_target.contains(&s.polymer_index("W1").unwrap()));
        assert_eq!(t.metadata_json()["mode"], "with_input");
    }

    #[test]
    fn params_validate() {
        assert_eq!(TranslatorParams::new(1, 2), Err(ScenarioError::RedundancyTooSmall));
        assert_eq!(TranslatorParams::new(3, 0), Err(ScenarioError::NoLayers));
        assert_eq!(TranslatorParams::new(3, 2).unwrap().n(), 8);
    }

    #[test]
    fn leak_bound_quarter_regime() {
        // c = 0.0064 makes 2c+2y = 2.5c and c-2y = c/2 with y = c/4, and
        // (2.5 sqrt 2)^4 = 156.25 = 1/c, so the surplus is exactly n/4.
        let params = TranslatorParams::new(3, 2).unwrap();
        let c = 0.0064;
        let lb = translator_leak_bound(params, c, c / 4.0).unwrap();
        assert!((lb.k_beta_lower / lb.n as f64 - 0.25).abs() < 1e-9);
        assert!(lb.meets_quarter_regime);
        // Leak exponent n/8 = (N+1)/4 = 1 for N = 3.
        assert!((lb.leak_exponent - 1.0).abs() < 1e-9);
        assert_eq!(lb.ratio, lb.leak_exponent);
    }

    #[test]
    fn leak_bound_limit_and_monotonicity() {
        let params = TranslatorParams::new(3, 2).unwrap();
        let c = 0.01f64;
        let y = 1e-9 * c;
        let lb = translator_leak_bound(params, c, y).unwrap();
        let n = lb.n as f64;
        let closed_form = n * (1.0 + 2.0f64.ln() / c.ln()) - n / 2.0;
        assert!((lb.k_beta_lower - closed_form).abs() < 1e-5);

        let mut last = f64::MIN;
        for nn in 3..=10u64 {
            let p = TranslatorParams::new(nn, 2).unwrap();
            let lb = translator_leak_bound(p, 0.0064, 0.0016).unwrap();
            assert!(lb.leak_exponent > last);
            last = lb.leak_exponent;
        }
    }

    #[test]
    fn leak_bound_domain_errors() {
        let params = TranslatorParams::new(3, 2).unwrap();
        for (c, y) in [(0.0, 0.001), (1.0, 0.001), (0.01, 0.0), (0.01, 0.01)] {
            assert!(matches!(
                translator_leak_bound(params, c, y),
                Err(ScenarioError::ParameterRange(_))
            ));
        }
    }

    #[test]
    fn domain_admissibility() {
        let ok = DomainPolymer::parse(&[&["d1", "d2"], &["d1*", "d2*"]]).unwrap();
        assert!(domain_admissible(&ok));
        let lone = DomainPolymer::parse(&[&["d1*"]]).unwrap();
        assert!(!domain_admissible(&lone));
        let fuel = translator_fuel_domains(4, 3);
        assert!(domain_admissible(&fuel));
        assert!(DomainPolymer::parse(&[&["*"]]).is_err());
    }
}
