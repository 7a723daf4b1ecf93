//! Generation certificates: each claim builds a finite generating set,
//! closes it, and compares the closure with an independently computed
//! target. Hypothesis failures are reported as such, never as `fail`.

mod commutator;
mod probe;
mod skew;
mod words;

pub use commutator::{
    identity_suite, lemma1_certificate, lemma2_certificate, lemma3_jordan_check, theorem1_certify, IdentityReport,
};
pub use probe::{lemma8_check, lemma9_check, stagnation_probe};
pub use skew::{
    lemma4_check, lemma5_certificate, lemma5_sets, lemma6_check, lemma7_reduction_check, theorem2_certify, Lemma5Sets,
};
pub use words::{lemma2_generating_set, PairGenerators, Witness, WitnessTerm, Word, WordBasis};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::algebra::{hypothesis_report, AlgebraPresentation, Element, HypothesisReport};
use crate::closure::{lie_span, ClosureTrace, GeneratorSet, Span};
use crate::decomposition::{kh_split, z_grading_with, KHSplit, ZGrading};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    Lemma1,
    Lemma2,
    Lemma3,
    Lemma4,
    Lemma5,
    Lemma6,
    Lemma7,
    Lemma8,
    Lemma9,
    Theorem1,
    Theorem2,
    Stagnation,
}

impl Claim {
    pub const ALL: [Claim; 12] = [
        Claim::Lemma1,
        Claim::Lemma2,
        Claim::Lemma3,
        Claim::Lemma4,
        Claim::Lemma5,
        Claim::Lemma6,
        Claim::Lemma7,
        Claim::Lemma8,
        Claim::Lemma9,
        Claim::Theorem1,
        Claim::Theorem2,
        Claim::Stagnation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Claim::Lemma1 => "lemma1",
            Claim::Lemma2 => "lemma2",
            Claim::Lemma3 => "lemma3",
            Claim::Lemma4 => "lemma4",
            Claim::Lemma5 => "lemma5",
            Claim::Lemma6 => "lemma6",
            Claim::Lemma7 => "lemma7",
            Claim::Lemma8 => "lemma8",
            Claim::Lemma9 => "lemma9",
            Claim::Theorem1 => "thm1",
            Claim::Theorem2 => "thm2",
            Claim::Stagnation => "stagnation",
        }
    }
}

impl std::fmt::Display for Claim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = match s {
            "theorem1" => "thm1",
            "theorem2" => "thm2",
            other => other,
        };
        Claim::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisNotMet,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 2,
            Verdict::HypothesisNotMet => 3,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub claim: Claim,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failed_hypotheses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<GeneratorSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<ClosureTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Span>,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Certificate {
    fn not_met(claim: Claim, failed: Vec<String>) -> Self {
        Certificate {
            claim,
            verdict: Verdict::HypothesisNotMet,
            failed_hypotheses: failed,
            generators: None,
            trace: None,
            target: None,
            detail: Value::Null,
            seed: None,
        }
    }

    /// Pass exactly when the closure's final span equals the target and every
    /// side check in `extra_ok` holds.
    fn compare(claim: Claim, generators: GeneratorSet, trace: ClosureTrace, target: Span, extra_ok: bool, detail: Value) -> Self {
        let verdict = Verdict::from_bool(trace.final_span == target && extra_ok);
        Certificate {
            claim,
            verdict,
            failed_hypotheses: Vec::new(),
            generators: Some(generators),
            trace: Some(trace),
            target: Some(target),
            detail,
            seed: None,
        }
    }

    fn checked(claim: Claim, ok: bool, detail: Value) -> Self {
        Certificate {
            claim,
            verdict: Verdict::from_bool(ok),
            failed_hypotheses: Vec::new(),
            generators: None,
            trace: None,
            target: None,
            detail,
            seed: None,
        }
    }

    fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Which derived algebra a probe aims at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeTarget {
    /// `[R, R]`
    Rr,
    /// `[K, K]`
    Kk,
}

impl std::str::FromStr for ProbeTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rr" => Ok(ProbeTarget::Rr),
            "kk" => Ok(ProbeTarget::Kk),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertOptions {
    pub seed: u64,
    /// Maximal word length in decomposition-witness searches.
    pub cap: usize,
    pub trials: usize,
    pub max_gen: usize,
    /// Random substitutions per identity or membership check.
    pub samples: usize,
    pub n_bound: usize,
    pub target: Option<ProbeTarget>,
    pub exec: Exec,
}

impl Default for CertOptions {
    fn default() -> Self {
        CertOptions {
            seed: 0,
            cap: 6,
            trials: 50,
            max_gen: 5,
            samples: 100,
            n_bound: 2,
            target: None,
            exec: Exec::default(),
        }
    }
}

/// Runs one claim for the idempotent `e` (named `e_name`).
pub fn certify(p: &AlgebraPresentation, claim: Claim, e_name: &str, opts: &CertOptions) -> Result<Certificate> {
    let idempotent = || p.named(e_name).cloned();
    match claim {
        Claim::Lemma1 => lemma1_certificate(p, &idempotent()?, opts),
        Claim::Lemma2 => lemma2_certificate(p, &idempotent()?, opts),
        Claim::Lemma3 => lemma3_jordan_check(p, &idempotent()?, opts),
        Claim::Theorem1 => theorem1_certify(p, &idempotent()?, opts),
        Claim::Lemma4 => lemma4_check(p, &idempotent()?, opts),
        Claim::Lemma5 => lemma5_certificate(p, &idempotent()?, opts),
        Claim::Lemma6 => lemma6_check(p, &idempotent()?, opts),
        Claim::Lemma7 => lemma7_reduction_check(p, &idempotent()?, opts),
        Claim::Theorem2 => theorem2_certify(p, &idempotent()?, opts),
        Claim::Lemma8 => lemma8_check(p, &idempotent()?, opts),
        Claim::Lemma9 => lemma9_check(p, opts),
        Claim::Stagnation => {
            let which = opts.target.unwrap_or(if p.has_involution() { ProbeTarget::Kk } else { ProbeTarget::Rr });
            let target = match which {
                ProbeTarget::Rr => derived_subspace(p, opts.exec)?,
                ProbeTarget::Kk => match derived_k_subspace(p, opts.exec) {
                    Ok(d) => d,
                    Err(Error::MissingInvolution(_)) => {
                        return Ok(Certificate::not_met(claim, vec![hyp::INVOLUTION.into()]));
                    }
                    Err(other) => return Err(other),
                },
            };
            stagnation_probe(p, &target.closure, opts.trials, opts.max_gen, opts.seed, opts.exec)
        }
    }
}

/// Hypothesis names as they appear in certificates.
pub mod hyp {
    pub const IDEMPOTENT: &str = "e^2 = e";
    pub const VALID: &str = "presentation validates";
    pub const GENERATES: &str = "generators generate R";
    pub const INVOLUTION: &str = "involution present";
    pub const RER: &str = "ReR = R";
    pub const RFR: &str = "RfR = R";
    pub const COMPLEMENT: &str = "R(1-e)R = R";
    pub const ORTHOGONAL: &str = "ee* = e*e = 0";
    pub const S_IDEAL: &str = "R(1-e-e*)R = R";
    pub const S_ZERO: &str = "e + e* = 1";
    pub const SIMPLE: &str = "simple (desk check: ideals generated by basis and K-basis vectors)";
    pub const SEMIPRIME: &str = "semiprime (desk check: ideals generated by basis and K-basis vectors)";
}

/// The spans `[R,R]` or `[K,K]` and their Lie closures.
#[derive(Clone, Debug)]
pub struct Derived {
    pub span: Subspace,
    pub closure: Subspace,
}

impl Derived {
    pub fn rank(&self) -> usize {
        self.closure.rank()
    }
}

fn derived_from(p: &AlgebraPresentation, basis: &[Element], exec: Exec) -> Result<Derived> {
    let n = basis.len();
    let brackets = exec.map_range(n, |i| ((i + 1)..n).map(|j| p.bracket(&basis[i], &basis[j])).collect::<Vec<_>>());
    let mut span = Subspace::zero(p.field(), p.dim());
    for x in brackets.iter().flatten() {
        span.push(x.coords());
    }
    let closure = lie_span(p, &elements_of(&span), exec)?.single().clone();
    Ok(Derived { span, closure })
}

/// Span of all `[b_i, b_j]`, and its Lie closure.
pub fn derived_subspace(p: &AlgebraPresentation, exec: Exec) -> Result<Derived> {
    derived_from(p, &p.basis_elements(), exec)
}

/// Span of all `[k_i, k_j]` over a basis of `K`, and its Lie closure.
pub fn derived_k_subspace(p: &AlgebraPresentation, exec: Exec) -> Result<Derived> {
    let k = kh_split(p, None)?.k;
    derived_from(p, &elements_of(&k), exec)
}

pub(crate) fn elements_of(s: &Subspace) -> Vec<Element> {
    s.basis().iter().map(|v| Element::new(v.clone())).collect()
}

pub(crate) fn span_of(p: &AlgebraPresentation, xs: &[Element]) -> Subspace {
    let mut s = Subspace::zero(p.field(), p.dim());
    for x in xs {
        s.push(x.coords());
    }
    s
}

/// Keeps the elements that enlarge the running span.
pub(crate) fn independent(p: &AlgebraPresentation, xs: impl IntoIterator<Item = Element>) -> Vec<Element> {
    let mut s = Subspace::zero(p.field(), p.dim());
    xs.into_iter().filter(|x| s.push(x.coords())).collect()
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random nonzero combination of `basis` with coefficients in `-3..=3`;
/// the zero vector when `basis` is empty.
pub(crate) fn random_in(p: &AlgebraPresentation, rng: &mut ChaCha8Rng, basis: &[Vector]) -> Element {
    let f = p.field();
    if basis.is_empty() {
        return p.zero();
    }
    loop {
        let mut x = p.zero();
        for b in basis {
            let c = f.from_i64(rng.gen_range(-3..=3));
            if !c.is_zero() {
                x = x.add_scaled(&c, &Element::new(b.clone()));
            }
        }
        if !x.is_zero() {
            return x;
        }
    }
}

/// Checks the listed hypotheses, in order, and collects the failures.
#[derive(Default)]
pub(crate) struct Hypotheses {
    failed: Vec<String>,
}

impl Hypotheses {
    pub fn require(&mut self, ok: bool, name: &str) {
        if !ok {
            self.failed.push(name.to_string());
        }
    }

    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn into_failed(self) -> Vec<String> {
        self.failed
    }
}

pub(crate) fn report_for(p: &AlgebraPresentation, e: &Element) -> HypothesisReport {
    hypothesis_report(p, "e", e)
}

/// Whether the declared generators (or the basis) generate `R` as an algebra.
pub(crate) fn generators_generate(p: &AlgebraPresentation, exec: Exec) -> Result<bool> {
    let gens: Vec<Element> = p.generators_or_basis().into_iter().map(|(_, x)| x).collect();
    Ok(crate::closure::assoc_span(p, &gens, exec)?.single().is_full())
}

/// Grading and K/H split for the `[K, K]` claims.
pub(crate) struct SkewContext {
    pub grading: ZGrading,
    pub kh: KHSplit,
}

impl SkewContext {
    pub fn k(&self, degree: i32) -> &Subspace {
        self.kh.k_deg(degree)
    }

    pub fn h(&self, degree: i32) -> &Subspace {
        self.kh.h_deg(degree)
    }

    pub fn r(&self, degree: i32) -> &Subspace {
        self.grading.component(degree)
    }
}

/// Checks the involution and idempotent conditions, builds the grading, and
/// adds the ideal hypotheses selected by `need`.
pub(crate) fn skew_context(
    p: &AlgebraPresentation,
    e: &Element,
    need_valid: bool,
    need_s_ideal: bool,
    exec: Exec,
) -> Result<std::result::Result<SkewContext, Vec<String>>> {
    p.check_element(e)?;
    let mut h = Hypotheses::default();
    if need_valid {
        h.require(p.validate().is_clean(), hyp::VALID);
    }
    h.require(p.has_involution(), hyp::INVOLUTION);
    h.require(p.is_idempotent(e), hyp::IDEMPOTENT);
    if !h.ok() {
        return Ok(Err(h.into_failed()));
    }
    let rep = report_for(p, e);
    h.require(rep.orthogonal_to_involute == Some(true), hyp::ORTHOGONAL);
    h.require(rep.rer_full, hyp::RER);
    if need_s_ideal {
        h.require(rep.s_ideal_full == Some(true), hyp::S_IDEAL);
    }
    if !h.ok() {
        return Ok(Err(h.into_failed()));
    }
    let grading = z_grading_with(p, e, exec)?;
    let kh = kh_split(p, Some(&grading))?;
    Ok(Ok(SkewContext { grading, kh }))
}
