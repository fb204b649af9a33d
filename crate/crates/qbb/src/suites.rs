//! The acceptance criteria as runnable suites. Each suite returns an
//! `Outcome` with a verdict, counts, failure witnesses and notes; the CLI
//! and the `acceptance` test target print them.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use num_traits::{One, Zero};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::binf::{build_binf, build_crystal_lambda, BInfinity, BLambda};
use crate::cartan::{BorcherdsCartanDatum, GenIndex, RootVector, Weight};
use crate::crystal::{compare_rules, find_isomorphism, tensor, validate_axioms, AbstractCrystal};
use crate::freealg::{
    coproduct, lusztig_to_kashiwara_factor, words_of_weight, FormKind, FreeElement, TwistedTensor, Word,
};
use crate::lattice::CrystalBasis;
use crate::perfect::{
    core_checks, crystal_limit_data, duality_checks, dualize, filtration_checks, induced_crystal, kernel_checks,
    lexicographic_checks, limit_index, perturb, uniqueness_isomorphism, verify_lower_perfect, GoodSequence,
};
use crate::strings::StringModule;
use crate::uqminus::{radical_generators, UqMinus, DEFAULT_WORD_CAP};
use crate::vector::GradedVector;
use crate::{Error, Rat, Result, ScalarQ};

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub max_height: u32,
    pub word_cap: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_height: 4, word_cap: DEFAULT_WORD_CAP, seed: 2024 }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {} {} ({} checks, {} failures, {:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.checked,
            self.failures.len(),
            self.seconds
        )
    }
}

/// Suite names in criterion order.
pub const SUITES: [&str; 10] = [
    "rank-one-counts",
    "compare-forms",
    "radical",
    "crystal-axioms",
    "global-basis",
    "pi-lambda",
    "tensor",
    "perfect",
    "highest-weight",
    "orthogonality",
];

/// Criteria that fail for mathematical reasons, with the analysis printed
/// next to the FAIL line. Their checks still run and still report FAIL.
pub const KNOWN_RED: [(usize, &str); 2] = [
    (
        2,
        "The exact identity L * prod(1 - q_i^{2l}) = K holds on every pair of words. The congruence \
         val0(L - K) >= 1 does not follow on raw words: for (b_1 b_1, b_1 b_1) with a real vertex, K = q^-2 + 1 \
         and L - K has val0 0. The congruence holds on all L(inf) lattice basis pairs, and val0(L - K) > val0(K) \
         holds on all word pairs; both are recorded as notes.",
    ),
    (
        5,
        "Bar invariance and residues of G(b) hold everywhere. E_il G(b) = G(e_il b) holds only mod qL: \
         E_il G(b) - G(e_il b) is q^k times a global basis vector (for example e'_21(b_1 b_2) = q b_1 on the \
         mixed datum, and E_11 G(b_11 v) = (1 + q^2) v for an isotropic vertex with lambda = 2 Lambda). A nonzero \
         q^k G(b') is not bar invariant, so no choice of G satisfies the exact identity. Every failing pair is \
         congruent mod qL, which the suite checks separately.",
    ),
];

#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            // keep reports readable; the count still records every failure
            if self.failures.len() < 200 {
                self.failures.push(msg());
            } else if self.failures.len() == 200 {
                self.failures.push("further failures omitted".into());
            }
        }
    }

    fn fail(&mut self, msg: String) {
        self.check(false, || msg);
    }

    fn absorb<T>(&mut self, r: Result<T>, ctx: &str) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                self.fail(format!("{}: {}", ctx, e));
                None
            }
        }
    }
}

/// A datum with an optional highest weight; `None` means `U^-` / `B(∞)`.
#[derive(Clone, Debug)]
pub struct Case {
    pub name: String,
    pub datum: BorcherdsCartanDatum,
    pub lambda: Option<Weight>,
}

/// `B(∞)` and `B(λ)` on the mixed datum (`Λ_1`, `Λ_2`, `Λ_1+Λ_2`) and on the
/// three rank-one data (`mΛ`, `m = 0, 1, 2`).
pub fn crystal_cases() -> Vec<Case> {
    let mut out = Vec::new();
    let mixed = BorcherdsCartanDatum::mixed();
    out.push(Case { name: "mixed B(inf)".into(), datum: mixed.clone(), lambda: None });
    for (name, f) in [("L1", vec![1, 0]), ("L2", vec![0, 1]), ("L1+L2", vec![1, 1])] {
        out.push(Case { name: format!("mixed B({})", name), datum: mixed.clone(), lambda: Some(Weight::from_fund(f)) });
    }
    for (kind, a) in [("real", 2), ("isotropic", 0), ("imaginary", -2)] {
        let d = BorcherdsCartanDatum::rank_one(a);
        out.push(Case { name: format!("{} B(inf)", kind), datum: d.clone(), lambda: None });
        for m in 0..=2 {
            out.push(Case {
                name: format!("{} B({}L)", kind, m),
                datum: d.clone(),
                lambda: Some(Weight::from_fund(vec![m])),
            });
        }
    }
    out
}

/// Builds are shared between suites of one run.
pub struct Workbench {
    pub cfg: SuiteConfig,
    binf: Mutex<BTreeMap<String, Arc<BInfinity>>>,
    blambda: Mutex<BTreeMap<String, Arc<BLambda>>>,
}

fn datum_key(d: &BorcherdsCartanDatum) -> String {
    format!("{:?}/{:?}", d.a, d.s)
}

impl Workbench {
    pub fn new(cfg: SuiteConfig) -> Self {
        Workbench { cfg, binf: Mutex::new(BTreeMap::new()), blambda: Mutex::new(BTreeMap::new()) }
    }

    pub fn binf(&self, d: &BorcherdsCartanDatum) -> Result<Arc<BInfinity>> {
        let key = datum_key(d);
        if let Some(b) = self.binf.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let b = Arc::new(build_binf(d.clone(), self.cfg.max_height, self.cfg.word_cap)?);
        self.binf.lock().unwrap().insert(key, b.clone());
        Ok(b)
    }

    pub fn blambda(&self, d: &BorcherdsCartanDatum, lambda: &Weight) -> Result<Arc<BLambda>> {
        let key = format!("{}/{:?}", datum_key(d), lambda.fund);
        if let Some(b) = self.blambda.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let b = Arc::new(build_crystal_lambda(d.clone(), lambda.clone(), self.cfg.max_height, self.cfg.word_cap)?);
        self.blambda.lock().unwrap().insert(key, b.clone());
        Ok(b)
    }
}

pub fn run_suite(name: &str, wb: &Workbench) -> Result<Outcome> {
    let id =
        SUITES.iter().position(|s| *s == name).ok_or_else(|| Error::Domain(format!("unknown suite `{}`", name)))? + 1;
    let start = Instant::now();
    let tally = match id {
        1 => rank_one_counts(wb),
        2 => compare_forms(wb),
        3 => radical(wb),
        4 => crystal_axioms(wb),
        5 => global_basis(wb),
        6 => pi_lambda(wb),
        7 => tensor_suite(wb),
        8 => perfect_suite(wb),
        9 => highest_weight(wb),
        _ => orthogonality(wb),
    };
    let seconds = start.elapsed().as_secs_f64();
    let mut t = tally;
    let limit = match id {
        1 => Some(10.0),
        2 | 3 => Some(60.0),
        _ => None,
    };
    if let Some(limit) = limit {
        t.check(seconds < limit, || format!("runtime {:.1} s exceeds {} s", seconds, limit));
    }
    Ok(Outcome {
        id,
        name: SUITES[id - 1],
        passed: t.failures.is_empty(),
        checked: t.checked,
        failures: t.failures,
        notes: t.notes,
        seconds,
    })
}

pub fn run_all(wb: &Workbench) -> Vec<Outcome> {
    SUITES.iter().map(|s| run_suite(s, wb).expect("known suite")).collect()
}

/// Number of partitions of `n`, by the coin-change recurrence.
fn partition_count(n: usize) -> usize {
    let mut p = vec![0usize; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for k in part..=n {
            p[k] += p[k - part];
        }
    }
    p[n]
}

fn composition_count(n: usize) -> usize {
    if n == 0 {
        1
    } else {
        1 << (n - 1)
    }
}

fn rank_one_oracle(a: i64, n: usize) -> usize {
    match a {
        2 => 1,
        0 => partition_count(n),
        _ => composition_count(n),
    }
}

fn rank_one_counts(wb: &Workbench) -> Tally {
    let mut t = Tally::default();
    for a in [0, -2, 2] {
        let Some(b) = t.absorb(build_binf(BorcherdsCartanDatum::rank_one(a), 6, wb.cfg.word_cap), "build") else {
            continue;
        };
        let sizes = b.graph.level_sizes();
        let want: Vec<usize> = (0..=6).map(|n| rank_one_oracle(a, n)).collect();
        t.check(sizes == want, || format!("a = {}: level sizes {:?}, expected {:?}", a, sizes, want));
        t.check(b.anomalies.is_empty(), || format!("a = {}: anomalies {:?}", a, b.anomalies));
        t.notes.push(format!("a = {}: level sizes {:?}", a, sizes));
    }
    t
}

/// `(x, y)_L` from the coproduct: `(b_g r, y) = (b_g ⊗ r, Δ y)`.
fn lusztig_by_coproduct(u: &UqMinus, x: &Word, y: &Word) -> ScalarQ {
    let d = u.datum();
    if x.is_empty() {
        return if y.is_empty() { ScalarQ::one() } else { ScalarQ::zero() };
    }
    let mut lhs = TwistedTensor { terms: Default::default() };
    lhs.add_term((Word(vec![x.0[0]]), Word(x.0[1..].to_vec())), ScalarQ::one());
    let rhs = coproduct(d, &FreeElement::word(y.clone(), d.n()));
    u.forms().lusztig_tensor(&lhs, &rhs)
}

fn compare_forms(wb: &Workbench) -> Tally {
    let mut t = Tally::default();
    let u = UqMinus::new(BorcherdsCartanDatum::mixed(), wb.cfg.word_cap);
    let d = u.datum().clone();
    let forms = u.forms();
    let h = wb.cfg.max_height.max(5);
    let mut relative_bad = 0usize;
    for height in 1..=h {
        for alpha in RootVector::of_height(d.n(), height) {
            let Some(words) = t.absorb(words_of_weight(&d, &alpha, wb.cfg.word_cap), "words") else { continue };
            for x in &words {
                let factor = lusztig_to_kashiwara_factor(&d, x);
                for y in &words {
                    let l = forms.words(FormKind::Lusztig, x, y);
                    let k = forms.words(FormKind::Kashiwara, x, y);
                    t.check(&l * &factor == k, || {
                        format!("{} vs {}: L = {}, K = {}", x.render(&d), y.render(&d), l, k)
                    });
                    let gap = (&l - &k).val0();
                    t.check(gap.is_none_or(|v| v >= 1), || {
                        format!("val0(L - K) = {:?} for {} vs {} (K = {})", gap, x.render(&d), y.render(&d), k)
                    });
                    // relative form of the congruence, valid on all words
                    let rel = match (gap, k.val0()) {
                        (Some(g), Some(kv)) => g > kv,
                        _ => true,
                    };
                    if !rel {
                        relative_bad += 1;
                    }
                }
            }
            // the recursive L against the coproduct definition, first words only
            for x in words.iter().take(6) {
                for y in words.iter().take(6) {
                    let l = forms.words(FormKind::Lusztig, x, y);
                    let oracle = lusztig_by_coproduct(&u, x, y);
                    t.check(l == oracle, || {
                        format!("L({}, {}) = {} but the coproduct gives {}", x.render(&d), y.render(&d), l, oracle)
                    });
                }
            }
        }
    }
    t.notes.push(format!("val0(L - K) > val0(K) fails on {} word pairs", relative_bad));
    // the congruence on the crystal lattice L(∞)
    match wb.binf(&d) {
        Ok(b) => {
            let mut bad = 0;
            let mut total = 0;
            for lat in b.lattices.values() {
                for x in &lat.basis {
                    for y in &lat.basis {
                        total += 1;
                        let ok = match (u.lusztig_form(x, y), u.kashiwara_form(x, y)) {
                            (Ok(l), Ok(k)) => (&l - &k).val0().is_none_or(|v| v >= 1),
                            _ => false,
                        };
                        if !ok {
                            bad += 1;
                        }
                    }
                }
            }
            t.notes.push(format!("val0(L - K) >= 1 on L(inf) lattice bases: {} of {} pairs fail", bad, total));
        }
        Err(e) => t.notes.push(format!("lattice comparison skipped: {}", e)),
    }
    t
}

fn radical(wb: &Workbench) -> Tally {
    let mut t = Tally::default();
    let h = wb.cfg.max_height.max(5);
    let u = UqMinus::new(BorcherdsCartanDatum::mixed(), wb.cfg.word_cap);
    for (name, x) in radical_generators(u.datum(), h) {
        let r = u.is_in_radical(&x);
        t.check(matches!(r, Ok(true)), || format!("{} is not in the radical ({:?})", name, r));
    }
    for a in [0, -2, 2] {
        let u = UqMinus::new(BorcherdsCartanDatum::rank_one(a), wb.cfg.word_cap);
        for n in 0..=h {
            let dim = u.dim(&RootVector(vec![n]));
            let want = rank_one_oracle(a, n as usize);
            t.check(matches!(dim, Ok(x) if x == want), || {
                format!("a = {}, height {}: dimension {:?}, expected {}", a, n, dim, want)
            });
        }
    }
    t
}

/// Lattice stability: `f̃` and `ẽ` of every lattice basis vector have
/// coordinates with `val0 ≥ 0` in the target lattice.
fn stability<M: StringModule>(cb: &CrystalBasis<M>, t: &mut Tally, case: &str) {
    let eng = cb.engine();
    let d = cb.graph.datum.clone();
    for (alpha, lat) in &cb.lattices {
        for &g in &cb.graph.gens {
            for v in &lat.basis {
                if let Some(tl) = cb.lattices.get(&alpha.plus_gen(g)) {
                    if let Some(x) = t.absorb(eng.kashiwara_f(g, v), case) {
                        let mv = tl.min_val(&x);
                        t.check(mv.is_none_or(|m| m >= 0), || {
                            format!("{}: f{} leaves the lattice at {:?}", case, d.fmt_gen(g), alpha.0)
                        });
                    }
                }
                if let Some(beta) = alpha.minus_gen(g) {
                    if let Some(tl) = cb.lattices.get(&beta) {
                        if let Some(Some(x)) = t.absorb(eng.kashiwara_e(g, v), case) {
                            let mv = tl.min_val(&x);
                            t.check(mv.is_none_or(|m| m >= 0), || {
                                format!("{}: e{} leaves the lattice at {:?}", case, d.fmt_gen(g), alpha.0)
                            });
                        }
                    }
                }
            }
        }
    }
}

fn crystal_axioms(wb: &Workbench) -> Tally {
    let mut t = Tally::default();
    let h = wb.cfg.max_height;
    for case in crystal_cases() {
        match &case.lambda {
            None => {
                let Some(b) = t.absorb(wb.binf(&case.datum), &case.name) else { continue };
                let rep = validate_axioms(&b.graph, h);
                t.check(rep.passed(), || format!("{}: {:?}", case.name, rep.violations.first()));
                t.check(b.anomalies.is_empty(), || format!("{}: {:?}", case.name, b.anomalies));
                stability(&b, &mut t, &case.name);
                t.notes.push(format!("{}: level sizes {:?}", case.name, b.graph.level_sizes()));
            }
            Some(l) => {
                let Some(b) = t.absorb(wb.blambda(&case.datum, l), &case.name) else { continue };
                let rep = validate_axioms(&b.graph, h);
                t.check(rep.passed(), || format!("{}: {:?}", case.name, rep.violations.first()));
                t.check(b.anomalies.is_empty(), || format!("{}: {:?}", case.name, b.anomalies));
                stability(&b, &mut t, &case.name);
                t.notes.push(format!("{}: level sizes {:?}", case.name, b.graph.level_sizes()));
            }
        }
    }
    t
}

/// Bar invariance and residues of the global basis, plus `E G(b) = G(ẽ b)`
/// for the given lowering action at imaginary vertices.
fn global_checks<M: StringModule>(
    cb: &CrystalBasis<M>,
    t: &mut Tally,
    case: &str,
    lower: &dyn Fn(GenIndex, &GradedVector) -> Result<GradedVector>,
) {
    let d = cb.graph.datum.clone();
    for b in 0..cb.graph.len() {
        let Some(g) = t.absorb(cb.global(b), case) else { continue };
        t.check(g.bar() == g, || format!("{}: G(#{}) is not bar-invariant", case, b));
        let r = cb.residue_node(&g);
        t.check(matches!(r, Ok(Some(x)) if x == b), || format!("{}: residue of G(#{}) is {:?}", case, b, r));
        for &gen in &cb.graph.gens {
            if d.is_real(gen.i) || cb.graph.nodes[b].root.minus_gen(gen).is_none() {
                continue;
            }
            let Some(lhs) = t.absorb(lower(gen, &g), case) else { continue };
            let rhs = match cb.graph.e.get(&(b, gen)).copied().flatten() {
                Some(x) => t.absorb(cb.global(x), case),
                None => Some(GradedVector::zero(lhs.root.clone(), lhs.dim())),
            };
            let Some(rhs) = rhs else { continue };
            let diff = lhs.sub(&rhs);
            let congruent = match cb.lattice(&diff.root) {
                Some(lat) => lat.min_val(&diff).is_none_or(|m| m >= 1),
                None => diff.is_zero(),
            };
            // the congruence mod qL is the weaker statement; losing it is a defect
            t.check(congruent, || {
                format!(
                    "{}: E{} G(#{}) is not congruent to G(e{} #{}) mod qL",
                    case,
                    d.fmt_gen(gen),
                    b,
                    d.fmt_gen(gen),
                    b
                )
            });
            t.check(lhs == rhs, || {
                let shown: Vec<String> = diff.coords.iter().filter(|c| !c.is_zero()).map(|c| c.to_string()).collect();
                format!(
                    "{}: E{} G(#{}) - G(e{} #{}) = {:?} (congruent mod qL: {})",
                    case,
                    d.fmt_gen(gen),
                    b,
                    d.fmt_gen(gen),
                    b,
                    shown,
                    congruent
                )
            });
        }
    }
}

fn global_basis(wb: &Workbench) -> Tally {
    let mut t = Tally::default();
    for case in crystal_cases() {
        match &case.lambda {
            None => {
                let Some(b) = t.absorb(wb.binf(&case.datum), &case.name) else { continue };
                let u = b.module().clone();
                global_checks(&b, &mut t, &case.name, &|g, x| u.act_e_prime(g, x));
            }
            Some(l) => {
                let Some(b) = t.absorb(wb.blambda(&case.datum, l), &case.name) else { continue };
                let v = b.module().clone();
                global_checks(&b, &mut t, &case.name, &|g, x| v.e_action(g, x));
            }
        }
    }
    t
}

fn residue_rank(lat: &crate::lattice::WeightLattice, xs: &[GradedVector]) -> Option<usize> {
    let mut rows = Vec::new();
    for x in xs {
        rows.push(lat.residue(x)?);
    }
    if rows.is_empty() {
        return Some(0);
    }
    let n = rows[0].len();
    Some(crate::linalg::Matrix::from_rows(rows, n).rank())
}

fn pi_lambda(wb: &Workbench) -> Tally {
    let mut t = Tally::default();
    for case in crystal_cases() {
        let Some(lambda) = &case.lambda else { continue };
        let Some(binf) = t.absorb(wb.binf(&case.datum), &case.name) else { continue };
        let Some(bl) = t.absorb(wb.blambda(&case.datum, lambda), &case.name) else { continue };
        let u = binf.module().clone();
        let v = bl.module().clone();
        let pi = |x: &GradedVector| v.pi_lambda(&u, x);
        let name = &case.name;
        let d = binf.graph.datum.clone();
        // H: the image of L(∞) is L(λ)
        for (alpha, lat) in &binf.lattices {
            let Some(images) = t.absorb(lat.basis.iter().map(&pi).collect::<Result<Vec<_>>>(), name) else { continue };
            match bl.lattice(alpha) {
                Some(ll) => {
                    let inside = images.iter().all(|x| ll.min_val(x).is_none_or(|m| m >= 0));
                    let rank = residue_rank(ll, &images);
                    t.check(inside && rank == Some(ll.dim()), || {
                        format!("{}: image of L(inf) at {:?} is not L(lambda)", name, alpha.0)
                    });
                }
                None => {
                    t.check(images.iter().all(|x| x.is_zero()), || format!("{}: nonzero image at {:?}", name, alpha.0))
                }
            }
        }
        // I: f̃ commutes with π mod q L(λ)
        for b in 0..binf.graph.len() {
            let s = binf.lift(b).clone();
            let alpha = binf.graph.nodes[b].root.clone();
            for &g in &binf.graph.gens {
                let target = alpha.plus_gen(g);
                if target.height() > wb.cfg.max_height {
                    continue;
                }
                let Some(ps) = t.absorb(pi(&s), name) else { continue };
                let lhs = if ps.dim() == 0 {
                    Ok(GradedVector::zero(target.clone(), v.dim(&target).unwrap_or(0)))
                } else {
                    bl.engine().kashiwara_f(g, &ps)
                };
                let rhs = binf.engine().kashiwara_f(g, &s).and_then(|x| pi(&x));
                let (Some(lhs), Some(rhs)) = (t.absorb(lhs, name), t.absorb(rhs, name)) else { continue };
                let diff = lhs.sub(&rhs);
                let ok = match bl.lattice(&target) {
                    Some(ll) => ll.min_val(&diff).is_none_or(|m| m >= 1),
                    None => diff.is_zero(),
                };
                t.check(ok, || format!("{}: f{} and pi differ beyond q L at #{}", name, d.fmt_gen(g), b));
            }
        }
        // J: B^λ → B(λ) is a bijection; K: ẽ commutes with π̄
        let mut bar: BTreeMap<usize, usize> = BTreeMap::new();
        for b in 0..binf.graph.len() {
            if let Some(Some(x)) = t.absorb(pi(binf.lift(b)).and_then(|y| bl.residue_node(&y)), name) {
                bar.insert(b, x);
            }
        }
        let image: BTreeSet<usize> = bar.values().copied().collect();
        t.check(image.len() == bar.len() && image.len() == bl.graph.len(), || {
            format!(
                "{}: B^lambda has {} elements with {} images; B(lambda) has {}",
                name,
                bar.len(),
                image.len(),
                bl.graph.len()
            )
        });
        for (&b, &x) in &bar {
            for &g in &binf.graph.gens {
                if binf.graph.nodes[b].root.minus_gen(g).is_none() {
                    continue;
                }
                let via_binf = binf.graph.e.get(&(b, g)).copied().flatten().and_then(|y| bar.get(&y).copied());
                let via_bl = bl.graph.e.get(&(x, g)).copied().flatten();
                t.check(via_binf == via_bl, || {
                    format!("{}: e{} and pi-bar do not commute at #{}", name, d.fmt_gen(g), b)
                });
            }
        }
    }
    t
}

fn tensor_suite(wb: &Workbench) -> Tally {
    let mut t = Tally::default();
    let bound = 3.min(wb.cfg.max_height);
    let mixed = BorcherdsCartanDatum::mixed();
    let mut pairs: Vec<(String, BorcherdsCartanDatum, Vec<i64>, Vec<i64>)> = vec![
        ("mixed L1 x L2".into(), mixed.clone(), vec![1, 0], vec![0, 1]),
        ("mixed L2 x L1".into(), mixed.clone(), vec![0, 1], vec![1, 0]),
        ("mixed L2 x L2".into(), mixed.clone(), vec![0, 1], vec![0, 1]),
        ("mixed L1 x L1+L2".into(), mixed, vec![1, 0], vec![1, 1]),
    ];
    for (kind, a) in [("real", 2), ("isotropic", 0), ("imaginary", -2)] {
        for (m1, m2) in [(1, 1), (1, 2), (2, 1)] {
            pairs.push((format!("{} {}L x {}L", kind, m1, m2), BorcherdsCartanDatum::rank_one(a), vec![m1], vec![m2]));
        }
    }
    for (name, d, l1, l2) in pairs {
        let w1 = Weight::from_fund(l1.clone());
        let w2 = Weight::from_fund(l2.clone());
        let sum = Weight::from_fund(l1.iter().zip(&l2).map(|(a, b)| a + b).collect());
        let (Some(b1), Some(b2), Some(b12)) = (
            t.absorb(wb.blambda(&d, &w1), &name),
            t.absorb(wb.blambda(&d, &w2), &name),
            t.absorb(wb.blambda(&d, &sum), &name),
        ) else {
            continue;
        };
        let tp = tensor(&b1.graph, &b2.graph);
        let rep = validate_axioms(&tp, bound);
        t.check(rep.passed(), || format!("{}: tensor axioms {:?}", name, rep.violations.first()));
        let iso = find_isomorphism(&tp, &(0, 0), &b12.graph, &0, bound);
        t.check(iso.is_ok(), || format!("{}: component is not B(lambda+mu): {}", name, iso.as_ref().unwrap_err()));
        let mut sample = Vec::new();
        for x in 0..b1.graph.len() {
            for y in 0..b2.graph.len() {
                if tp.depth(&(x, y)) <= bound {
                    sample.push((x, y));
                }
            }
        }
        let diffs = compare_rules(&b1.graph, &b2.graph, &sample);
        t.check(diffs.is_empty(), || format!("{}: rules disagree at {:?}", name, diffs.first()));
    }
    t
}

fn perfect_case(graph: &crate::lattice::CrystalGraph, name: &str, wb: &Workbench, t: &mut Tally, rng: &mut ChaCha8Rng) {
    let h = graph.max_height;
    let Some((space, basis)) = t.absorb(crystal_limit_data(graph), name) else { return };
    let Some(rep) = t.absorb(verify_lower_perfect(&space, &basis), name) else { return };
    t.check(rep.passed, || format!("{}: not lower perfect: {:?}", name, rep.violations.first()));
    if !rep.passed {
        return;
    }
    let one = Rat::from_integer(1.into());
    t.check(rep.constants.values().all(|c| *c == one), || format!("{}: a constant differs from 1", name));
    let src = limit_index(&rep, 0).expect("source element");
    let Some(c0) = t.absorb(induced_crystal(&space, &rep), name) else { return };
    let iso = find_isomorphism(&c0, &src, graph, &0, h);
    t.check(iso.as_ref().is_ok_and(|p| p.len() == graph.len()), || {
        format!("{}: induced crystal differs from the graph", name)
    });
    for msg in filtration_checks(&space, &basis, &rep, h).into_iter().chain(core_checks(&space, &basis, &rep)) {
        t.fail(format!("{}: {}", name, msg));
    }
    t.checked += 1;
    if let Some(bad) =
        t.absorb(lexicographic_checks(&space, &basis, &rep, &GoodSequence::cyclic(&space.gens), 3, 3), name)
    {
        t.check(bad.is_empty(), || format!("{}: {:?}", name, bad.first()));
    }
    // rescaling
    let scaled = basis.rescaled(rng);
    let Some(rs) = t.absorb(verify_lower_perfect(&space, &scaled), name) else { return };
    t.check(rs.passed, || format!("{}: rescaled basis fails", name));
    if let Some(c1) = t.absorb(induced_crystal(&space, &rs), name) {
        let iso = find_isomorphism(&c1, &src, &c0, &src, h);
        t.check(iso.as_ref().is_ok_and(|p| p.len() == graph.len()), || format!("{}: rescaled crystal differs", name));
    }
    // duality
    if let Some((up, dual, urep)) = t.absorb(dualize(&space, &scaled), name) {
        t.check(urep.passed, || format!("{}: dual basis is not upper perfect: {:?}", name, urep.violations.first()));
        let bad: Vec<String> =
            duality_checks(&rs, &urep).into_iter().chain(kernel_checks(&up, &dual, &urep, h)).collect();
        t.check(bad.is_empty(), || format!("{}: {:?}", name, bad.first()));
        if let Some(cu) = t.absorb(induced_crystal(&up, &urep), name) {
            t.check(find_isomorphism(&cu, &src, &c0, &src, h).is_ok(), || format!("{}: upper crystal differs", name));
        }
    }
    // uniqueness against a perturbation
    if let Some((moved, dim)) = t.absorb(perturb(&space, &basis, &rep, rng), name) {
        let Some(rm) = t.absorb(verify_lower_perfect(&space, &moved), name) else { return };
        let psi = uniqueness_isomorphism(&space, &basis, &rep, &moved, &rm);
        t.check(psi.as_ref().is_ok_and(|p| p.iter().all(|(a, b)| a == b)), || {
            format!("{}: uniqueness map {:?}", name, psi.as_ref().err())
        });
        if dim == 0 {
            t.notes.push(format!("{}: no admissible perturbation besides the identity", name));
        } else {
            t.notes.push(format!("{}: perturbation space of dimension {}", name, dim));
        }
    }
    let _ = wb;
}

fn perfect_suite(wb: &Workbench) -> Tally {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(wb.cfg.seed);
    let mut moved_somewhere = false;
    for case in crystal_cases() {
        let graph = match &case.lambda {
            None => t.absorb(wb.binf(&case.datum), &case.name).map(|b| b.graph.clone()),
            Some(l) => t.absorb(wb.blambda(&case.datum, l), &case.name).map(|b| b.graph.clone()),
        };
        let Some(graph) = graph else { continue };
        let before = t.notes.len();
        perfect_case(&graph, &case.name, wb, &mut t, &mut rng);
        moved_somewhere |= t.notes[before..].iter().any(|n| n.contains("dimension"));
    }
    t.check(moved_somewhere, || "no case admitted a nontrivial perturbation".into());
    t
}

fn highest_weight(wb: &Workbench) -> Tally {
    let mut t = Tally::default();
    let sl2 = BorcherdsCartanDatum::rank_one(2);
    let g = GenIndex::new(0, 1);
    for m in 0..=4i64 {
        let lambda = Weight::from_fund(vec![m]);
        let Some(v) = t.absorb(crate::hwmod::HWModule::new(sl2.clone(), lambda, wb.cfg.word_cap), "sl2") else {
            continue;
        };
        let eng = crate::strings::StringEngine::new(Arc::new(v));
        let mut x = eng.module().highest();
        let mut zero_at = None;
        for k in 1..=(m as u32 + 1) {
            let Some(y) = t.absorb(eng.kashiwara_f(g, &x), "sl2") else { break };
            if y.is_zero() && zero_at.is_none() {
                zero_at = Some(k);
            }
            x = y;
        }
        t.check(zero_at == Some(m as u32 + 1), || format!("sl2 m = {}: f^k v vanishes first at k = {:?}", m, zero_at));
    }
    let mut cases = vec![(BorcherdsCartanDatum::mixed(), vec![1, 0]), (BorcherdsCartanDatum::mixed(), vec![1, 1])];
    for a in [0, -2] {
        for m in 0..=2 {
            cases.push((BorcherdsCartanDatum::rank_one(a), vec![m]));
        }
    }
    for (d, fund) in cases {
        let lambda = Weight::from_fund(fund.clone());
        let Some(v) = t.absorb(crate::hwmod::HWModule::new(d.clone(), lambda.clone(), wb.cfg.word_cap), "module")
        else {
            continue;
        };
        for i in (0..d.n()).filter(|&i| !d.is_real(i)) {
            for l in 1..=wb.cfg.max_height {
                let gen = GenIndex::new(i, l);
                let Some(x) = t.absorb(v.act_mul_b(gen, &v.highest()), "b v") else { continue };
                let zero = x.is_zero();
                let expect_zero = d.pairing(i, &lambda) == 0;
                t.check(zero == expect_zero, || {
                    format!("lambda {:?}: b{} v is {}zero", fund, d.fmt_gen(gen), if zero { "" } else { "non" })
                });
            }
            if let Some(degs) = t.absorb(v.realized(wb.cfg.max_height), "realized") {
                for a in degs {
                    let h = d.pairing(i, &lambda.minus_root(&a));
                    t.check(h >= 0, || format!("lambda {:?}: <h_{}, mu> = {} at {:?}", fund, d.id(i), h, a.0));
                }
            }
        }
    }
    t
}

fn orthogonality(wb: &Workbench) -> Tally {
    let mut t = Tally::default();
    let data = [
        ("mixed", BorcherdsCartanDatum::mixed()),
        ("isotropic", BorcherdsCartanDatum::rank_one(0)),
        ("imaginary", BorcherdsCartanDatum::rank_one(-2)),
        ("real", BorcherdsCartanDatum::rank_one(2)),
    ];
    for (name, d) in data {
        let Some(b) = t.absorb(wb.binf(&d), name) else { continue };
        let u = b.module().clone();
        for (alpha, lat) in &b.lattices {
            let Some(gs) = t.absorb(b.global_basis(alpha), name) else { continue };
            for (x, &bx) in lat.nodes.iter().enumerate() {
                for (y, &by) in lat.nodes.iter().enumerate() {
                    let Some(v) = t.absorb(u.kashiwara_form(&gs[x], &gs[y]), name) else { continue };
                    let Ok(v0) = v.eval0() else {
                        t.fail(format!("{}: (G(#{}), G(#{}))_K = {} has a pole at 0", name, bx, by, v));
                        continue;
                    };
                    if x == y {
                        t.check(v0 > Rat::from_integer(0.into()), || {
                            format!("{}: diagonal at #{} is {}", name, bx, v0)
                        });
                        t.notes.push(format!("{}: #{} at {:?}: constant {}", name, bx, alpha.0, v0));
                        if !v0.is_integer() {
                            t.notes.push(format!("{}: non-integral diagonal constant {} at #{}", name, v0, bx));
                        }
                    } else {
                        t.check(v0 == Rat::from_integer(0.into()), || {
                            format!("{}: off-diagonal #{}, #{} is {}", name, bx, by, v0)
                        });
                    }
                }
            }
        }
    }
    t
}

/// Renders `x` over the global basis of its degree (binf) for reports.
pub fn describe_in_global_basis<M: StringModule>(cb: &CrystalBasis<M>, x: &GradedVector) -> Result<String> {
    let gs = cb.global_basis(&x.root)?;
    let lat = cb.lattice(&x.root).ok_or_else(|| Error::Domain("degree outside the crystal".into()))?;
    let cols: Vec<Vec<ScalarQ>> = gs.iter().map(|g| g.coords.clone()).collect();
    let m = crate::linalg::Matrix::from_cols(&cols, x.dim());
    let c = m.solve(&x.coords).ok_or_else(|| Error::Internal("global basis does not span".into()))?;
    let parts: Vec<String> =
        c.iter().zip(&lat.nodes).filter(|(c, _)| !c.is_zero()).map(|(c, n)| format!("({})*G(#{})", c, n)).collect();
    Ok(if parts.is_empty() { "0".into() } else { parts.join(" + ") })
}
