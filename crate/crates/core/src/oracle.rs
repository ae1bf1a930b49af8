//! Brute-force and cross-check machinery. `e_Y` is recomputed here through
//! the telescoped form `(1/(d+1)) sum_k [M^k (M - Y)^(d-k) Y]` of the
//! alternating sum, sharing only the intersection table and Euler
//! characteristics with the main engine.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{
    eventual_sign, factorial, frac, isolate_real_roots, MultiPoly, Poly, Rational, RealPoint, Ring, Sign, UPoly,
};
use crate::par::Exec;
use crate::sncmodel::{ClassExpr, ComponentSet, Configuration};
use crate::stability::{self, Mode};
use crate::twistenum::{bfs_edges, is_canonical, Twist};

/// Largest component count accepted by the exhaustive searches.
pub const MAX_COMPONENTS: usize = 12;
pub const DEFAULT_WINDOW: u32 = 10;

/// `e_Y(M)` over any coefficient ring. `Y` may be the whole fiber.
pub fn defect<R: Ring>(config: &Configuration, y: ComponentSet, m: &[R]) -> Result<R> {
    if y.is_empty() {
        return Err(Error::EmptyUnion);
    }
    let d = config.dim();
    let yv: Vec<R> = config.union_vector(y);
    let xv: Vec<R> = config.union_vector(config.full());
    let shifted: Vec<R> = m.iter().zip(&yv).map(|(a, b)| a.clone() - b.clone()).collect();
    let mut tele = R::zero();
    for k in 0..=d {
        let mut args: Vec<&[R]> = Vec::with_capacity(d + 1);
        args.extend(std::iter::repeat_n(m, k));
        args.extend(std::iter::repeat_n(shifted.as_slice(), d - k));
        args.push(&yv);
        tele = tele + config.intersect_vectors(&args)?;
    }
    let mut args: Vec<&[R]> = vec![m; d];
    args.push(&xv);
    let deg_x = config.intersect_vectors(&args)?;
    let chi_x = config.chi_union_vector(config.full(), m)?;
    let chi_y = config.chi_union_vector(y, m)?;
    let inv = Rational::new(BigInt::one(), BigInt::from(d + 1));
    let inner = chi_x * tele.scale(&inv) - deg_x * chi_y;
    Ok(inner.scale(&Rational::from_integer(factorial(d))))
}

pub fn defect_value(config: &Configuration, y: ComponentSet, m: &ClassExpr) -> Result<Rational> {
    let v: Vec<Rational> = config.vector(m)?;
    defect(config, y, &v)
}

/// `e_Y(L + mH)` as a polynomial in `m`.
pub fn defect_in_m(config: &Configuration, y: ComponentSet, l: &ClassExpr, h: &ClassExpr) -> Result<UPoly> {
    let lv: Vec<Rational> = config.vector(l)?;
    let hv: Vec<Rational> = config.vector(h)?;
    let v: Vec<UPoly> = lv
        .into_iter()
        .zip(hv)
        .map(|(a, b)| UPoly::new(vec![a, b]))
        .collect();
    defect(config, y, &v)
}

/// `e_Y(L + mH + bY)` as a polynomial in `m` and `b`.
pub fn defect_in_mb(config: &Configuration, y: ComponentSet, l: &ClassExpr, h: &ClassExpr) -> Result<Poly> {
    let lv: Vec<Rational> = config.vector(l)?;
    let hv: Vec<Rational> = config.vector(h)?;
    let yv: Vec<Rational> = config.union_vector(y);
    let v: Vec<Poly> = (0..lv.len())
        .map(|s| Poly::constant(lv[s].clone()) + Poly::m().scale(&hv[s]) + Poly::b().scale(&yv[s]))
        .collect();
    defect(config, y, &v)
}

struct Term {
    m_deg: usize,
    coeff: Rational,
    powers: Vec<(usize, u32)>,
}

/// `e_Y(L + mH + t)` with the twist coordinates left symbolic, indexed by
/// their position in the search order.
struct Compiled {
    terms: Vec<Term>,
    top: usize,
}

impl Compiled {
    fn sign(&self, values: &[i64]) -> Sign {
        let mut coeffs = vec![Rational::zero(); self.top + 1];
        for t in &self.terms {
            let mut k = BigInt::one();
            for &(slot, e) in &t.powers {
                k *= BigInt::from(values[slot]).pow(e);
            }
            if !k.is_zero() {
                coeffs[t.m_deg] += &t.coeff * Rational::from_integer(k);
            }
        }
        coeffs
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .map_or(Sign::Zero, Sign::of)
    }
}

struct Search {
    n: usize,
    order: Vec<usize>,
    /// Checks that become decidable once the slot is assigned.
    by_level: Vec<Vec<Compiled>>,
    window: i64,
    mode: Mode,
}

impl Search {
    fn new(config: &Configuration, l: &ClassExpr, h: &ClassExpr, mode: Mode, window: u32) -> Result<Search> {
        let n = config.num_components();
        let mut order = vec![0];
        if n > 0 {
            order.extend(bfs_edges(config, 0).into_iter().map(|e| e.1));
        }
        for i in 0..n {
            if !order.contains(&i) {
                order.push(i);
            }
        }
        let mut slot = vec![0; n];
        for (k, &i) in order.iter().enumerate() {
            slot[i] = k;
        }
        let lv: Vec<Rational> = config.vector(l)?;
        let hv: Vec<Rational> = config.vector(h)?;
        let vars: Vec<MultiPoly> = (0..config.num_symbols())
            .map(|s| {
                let mut p = MultiPoly::constant(lv[s].clone()) + MultiPoly::var(0).scale(&hv[s]);
                if s < n && s != 0 {
                    p = p + MultiPoly::var(s + 1);
                }
                p
            })
            .collect();
        let mut by_level: Vec<Vec<Compiled>> = (0..n).map(|_| Vec::new()).collect();
        for y in ComponentSet::proper_unions(n) {
            let poly = defect(config, y, &vars)?;
            let mut terms = Vec::new();
            let mut level = 0;
            let mut top = 0;
            for (exps, c) in poly.terms() {
                let m_deg = exps.first().copied().unwrap_or(0) as usize;
                let powers: Vec<(usize, u32)> = exps
                    .iter()
                    .enumerate()
                    .skip(1)
                    .filter(|&(_, &e)| e > 0)
                    .map(|(k, &e)| (slot[k - 1], e))
                    .collect();
                level = powers.iter().map(|p| p.0).fold(level, usize::max);
                top = top.max(m_deg);
                terms.push(Term {
                    m_deg,
                    coeff: c.clone(),
                    powers,
                });
            }
            by_level[level].push(Compiled { terms, top });
        }
        Ok(Search {
            n,
            order,
            by_level,
            window: i64::from(window),
            mode,
        })
    }

    fn passes(&self, level: usize, values: &[i64]) -> bool {
        self.by_level[level].iter().all(|c| self.mode.allows(c.sign(values)))
    }

    fn dfs(&self, level: usize, values: &mut Vec<i64>, out: &mut Vec<Twist>) {
        if level == self.n {
            let mut raw = vec![0; self.n];
            for (k, &i) in self.order.iter().enumerate() {
                raw[i] = values[k];
            }
            out.push(Twist::new(&raw));
            return;
        }
        for v in -self.window..=self.window {
            values[level] = v;
            if self.passes(level, values) {
                self.dfs(level + 1, values, out);
            }
        }
        values[level] = 0;
    }
}

/// Every normalized twist with coordinates in `[-W, W]` whose application
/// to `L` is semistable, deciding every proper union.
pub fn brute_force_twists(
    config: &Configuration,
    l: &ClassExpr,
    h: &ClassExpr,
    mode: Mode,
    window: u32,
) -> Result<Vec<Twist>> {
    brute_force_with(config, l, h, mode, window, Exec::default())
}

pub fn brute_force_with(
    config: &Configuration,
    l: &ClassExpr,
    h: &ClassExpr,
    mode: Mode,
    window: u32,
    exec: Exec,
) -> Result<Vec<Twist>> {
    let n = config.num_components();
    if n > MAX_COMPONENTS {
        return Err(Error::TooManyComponents(n, MAX_COMPONENTS));
    }
    let search = Search::new(config, l, h, mode, window)?;
    let mut values = vec![0i64; n];
    if !search.passes(0, &values) {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![Twist::zero(1)]);
    }
    let first: Vec<i64> = (-search.window..=search.window)
        .filter(|&v| {
            let mut vals = values.clone();
            vals[1] = v;
            search.passes(1, &vals)
        })
        .collect();
    let parts = exec.map(&first, |&v| {
        let mut vals = vec![0i64; n];
        vals[1] = v;
        let mut out = Vec::new();
        search.dfs(2, &mut vals, &mut out);
        out
    });
    values.clear();
    let mut all: Vec<Twist> = parts.into_iter().flatten().collect();
    all.sort();
    all.dedup();
    Ok(all)
}

/// A window containing every semistable twist: on a tree the difference of
/// the coordinates across an edge lies in that edge's interval for `L`, so
/// coordinates are bounded by the sum of the per-edge bounds. Falls back to
/// `base` when some edge has no unit interval.
pub fn oracle_window(config: &Configuration, l: &ClassExpr, h: &ClassExpr, mode: Mode, base: u32) -> Result<u32> {
    if !config.is_tree() {
        return Ok(base);
    }
    let mut total: u64 = 1;
    for (p, v) in bfs_edges(config, 0) {
        let report = stability::twistable_interval(config, config.side_of(p, v), l, h, mode)?;
        let Some(u) = report.unit() else {
            return Ok(base);
        };
        total += u.candidates.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
    }
    Ok(base.max(u32::try_from(total).unwrap_or(u32::MAX)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub runs: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub check: String,
    pub union: Vec<usize>,
    pub class: String,
    pub detail: String,
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub instance: String,
    pub checks: Vec<OracleCheck>,
    pub counterexamples: Vec<Counterexample>,
}

const KEEP_PER_CHECK: usize = 3;

impl OracleReport {
    pub fn new(instance: impl Into<String>) -> OracleReport {
        OracleReport {
            instance: instance.into(),
            checks: Vec::new(),
            counterexamples: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn check(&self, name: &str) -> Option<&OracleCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn entry(&mut self, name: &str) -> &mut OracleCheck {
        if let Some(i) = self.checks.iter().position(|c| c.name == name) {
            return &mut self.checks[i];
        }
        self.checks.push(OracleCheck {
            name: name.to_string(),
            runs: 0,
            failures: 0,
        });
        self.checks.last_mut().unwrap()
    }

    /// Registers a check without running it, so vacuous batteries still list it.
    fn declare(&mut self, name: &str) {
        self.entry(name);
    }

    fn record<F>(&mut self, config: &Configuration, name: &str, ok: bool, witness: F)
    where
        F: FnOnce() -> (ComponentSet, String, String),
    {
        let e = self.entry(name);
        e.runs += 1;
        if ok {
            return;
        }
        e.failures += 1;
        if e.failures > KEEP_PER_CHECK {
            return;
        }
        let (y, class, detail) = witness();
        self.counterexamples.push(Counterexample {
            check: name.to_string(),
            union: y.iter().collect(),
            class,
            detail,
            config: serde_json::to_value(config.to_file()).unwrap_or(serde_json::Value::Null),
        });
    }
}

fn random_class<R: Rng>(config: &Configuration, rng: &mut R) -> ClassExpr {
    let n = config.num_components();
    let mut c = ClassExpr::twist(&(0..n).map(|_| rng.gen_range(-4..=4)).collect::<Vec<_>>());
    for name in config.bundle_names() {
        c = c.plus(&ClassExpr::bundle(name).scaled(rng.gen_range(-4..=4)));
    }
    c
}

/// Components meeting both `y` and its complement.
fn boundary(config: &Configuration, y: ComponentSet) -> ComponentSet {
    let n = config.num_components();
    ComponentSet::from_indices((0..n).filter(|&i| {
        config
            .neighbors(i)
            .iter()
            .any(|&j| y.contains(j) != y.contains(i))
    }))
}

/// Randomized exact checks of the structural identities of `e_Y`.
pub fn identity_battery(config: &Configuration, samples: usize, seed: u64) -> Result<OracleReport> {
    let n = config.num_components();
    let mut report = OracleReport::new(format!(
        "identity battery: d = {}, n = {}, samples = {samples}, seed = {seed}",
        config.dim(),
        n
    ));
    for name in [
        "engine_agreement",
        "complement_identity",
        "locality",
        "additivity",
        "pair_decomposition",
        "full_vanishing",
        "full_twist_invariance",
        "pairs_suffice",
    ] {
        report.declare(name);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = config.full();
    let xclass = ClassExpr::union(full);
    let polarization = config
        .canonical_name()
        .or_else(|| config.bundle_names().first().map(|s| s.as_str()))
        .map(ClassExpr::bundle);
    for _ in 0..samples {
        let m = random_class(config, &mut rng);
        let show = |c: &ClassExpr| config.format_class(c);

        let ex = defect_value(config, full, &m)?;
        report.record(config, "full_vanishing", ex.is_zero(), || {
            (full, show(&m), format!("e_X = {ex}"))
        });
        if n < 2 {
            continue;
        }
        let y = ComponentSet::from_mask(rng.gen_range(1..full.mask()));
        let z = y.complement(n);
        let ey = defect_value(config, y, &m)?;

        let engine = stability::e_value(config, y, &m)?;
        report.record(config, "engine_agreement", engine == ey, || {
            (y, show(&m), format!("oracle {ey}, engine {engine}"))
        });

        let lhs = defect_value(config, z, &m)?;
        let rhs = -defect_value(config, y, &m.plus(&ClassExpr::union(y)))?;
        report.record(config, "complement_identity", lhs == rhs, || {
            (y, show(&m), format!("e_Z(M) = {lhs}, -e_Y(M + Y) = {rhs}"))
        });

        let t: Vec<i64> = (0..n).map(|_| rng.gen_range(-4..=4)).collect();
        let j = boundary(config, y);
        let t_j: Vec<i64> = (0..n).map(|i| if j.contains(i) { t[i] } else { 0 }).collect();
        let a = defect_value(config, y, &m.plus(&ClassExpr::twist(&t)))?;
        let b = defect_value(config, y, &m.plus(&ClassExpr::twist(&t_j)))?;
        report.record(config, "locality", a == b, || {
            (y, show(&m), format!("twist {t:?}: full {a}, restricted {b}"))
        });

        let parts = config.connected_parts(y);
        let mut sum = Rational::zero();
        for p in &parts {
            sum += defect_value(config, *p, &m)?;
        }
        report.record(config, "additivity", sum == ey, || {
            (y, show(&m), format!("e_Y = {ey}, sum over parts = {sum}"))
        });

        if parts.len() == 1 {
            let mut sum = Rational::zero();
            for zi in config.connected_parts(z) {
                sum += defect_value(config, zi.complement(n), &m)?;
            }
            report.record(config, "pair_decomposition", sum == ey, || {
                (y, show(&m), format!("e_Y = {ey}, sum over complements of parts of Z = {sum}"))
            });
        }

        let shifted = defect_value(config, y, &m.plus(&xclass))?;
        report.record(config, "full_twist_invariance", shifted == ey, || {
            (y, show(&m), format!("e_Y(M) = {ey}, e_Y(M + X) = {shifted}"))
        });

        if let (Some(h), true) = (&polarization, n <= 8) {
            let pairs = config.connected_pairs();
            for mode in [Mode::Minus, Mode::Plus] {
                let mut on_pairs = true;
                let mut on_all = true;
                for u in ComponentSet::proper_unions(n) {
                    let ok = mode.allows(eventual_sign(&defect_in_m(config, u, &m, h)?));
                    on_all &= ok;
                    if pairs.contains(&u) {
                        on_pairs &= ok;
                    }
                }
                report.record(config, "pairs_suffice", on_pairs == on_all, || {
                    (y, show(&m), format!("{mode:?}: pairs {on_pairs}, all unions {on_all}"))
                });
            }
        }
    }
    Ok(report)
}

/// Degree bounds on the coefficients `A_i(m)` of `e_Y(L + mH + aY) = sum A_i(m) a^i`,
/// and their leading terms when `H` is the canonical class.
pub fn degree_bound_battery(
    config: &Configuration,
    y: ComponentSet,
    l: &ClassExpr,
    h: &ClassExpr,
) -> Result<OracleReport> {
    if y.is_empty() {
        return Err(Error::EmptyUnion);
    }
    if y == config.full() {
        return Err(Error::FullUnion);
    }
    let d = config.dim();
    let mut report = OracleReport::new(format!(
        "degree bounds: d = {d}, Y = {}, L = {}, H = {}",
        config.format_union(y),
        config.format_class(l),
        config.format_class(h)
    ));
    let p = defect_in_mb(config, y, l, h)?;
    let coeffs = p.b_coeffs_in_m();
    let show = || config.format_class(l);
    let deg = |i: usize| coeffs.get(i).and_then(|c| c.degree());

    for i in 0..=d {
        let ok = deg(i).is_none_or(|k| k + i < 2 * d);
        report.record(config, "coefficient_degrees", ok, || {
            (y, show(), format!("A_{i} has degree {:?} > {}", deg(i), 2 * d - 1 - i))
        });
    }
    if !is_canonical(config, h) {
        return Ok(report);
    }
    let ok = deg(0).is_none_or(|k| k + 2 <= 2 * d);
    report.record(config, "constant_term_degree", ok, || {
        (y, show(), format!("A_0 has degree {:?} > {}", deg(0), 2 * d - 2))
    });

    let kv: Vec<Rational> = config.vector(h)?;
    let yv: Vec<Rational> = config.union_vector(y);
    let xv: Vec<Rational> = config.union_vector(config.full());
    let mut args: Vec<&[Rational]> = vec![&kv; d];
    args.push(&xv);
    let k_top = config.intersect_vectors(&args)?;
    let mut args: Vec<&[Rational]> = vec![&kv; d - 1];
    args.push(&yv);
    args.push(&yv);
    let k_y = config.intersect_vectors(&args)?;
    let expected = -frac(d as i64, 2) * &k_top * &k_y;
    let got = coeffs.get(1).map_or_else(Rational::zero, |c| c.coeff(2 * d - 2));
    report.record(config, "linear_term_leading", got == expected, || {
        (y, show(), format!("coefficient {got}, expected {expected}"))
    });

    if d == 2 {
        let lv: Vec<Rational> = config.vector(l)?;
        let y3 = config.intersect_vectors(&[&yv, &yv, &yv])?;
        let k2 = config.intersect_vectors(&[&kv, &kv, &xv])?;
        let lk = config.intersect_vectors(&[&lv, &kv, &xv])?;
        let zero = vec![Rational::zero(); config.num_symbols()];
        let chi_o = config.chi_union_vector(config.full(), &zero)?;
        let two = Rational::from_integer(BigInt::from(2));
        let expected = UPoly::new(vec![-&y3 * &lk + two * &y3 * chi_o, -&y3 * k2]);
        let got = coeffs.get(2).cloned().unwrap_or_else(UPoly::zero);
        report.record(config, "surface_quadratic_term", got == expected, || {
            (y, show(), format!("A_2 = {got}, expected {expected}"))
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalancedRow {
    #[serde(serialize_with = "ser_union")]
    pub union: ComponentSet,
    #[serde(with = "crate::exactnum::rational_str")]
    pub degree: Rational,
    #[serde(with = "crate::exactnum::rational_str")]
    pub genus: Rational,
    #[serde(with = "crate::exactnum::rational_str")]
    pub nodes: Rational,
    #[serde(with = "crate::exactnum::rational_str")]
    pub bound: Rational,
    pub balanced: bool,
    #[serde(with = "crate::exactnum::rational_str")]
    pub e: Rational,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalancedReport {
    #[serde(with = "crate::exactnum::rational_str")]
    pub genus: Rational,
    #[serde(with = "crate::exactnum::rational_str")]
    pub degree: Rational,
    pub rows: Vec<BalancedRow>,
}

impl BalancedReport {
    pub fn balanced(&self) -> bool {
        self.rows.iter().all(|r| r.balanced)
    }

    pub fn all_agree(&self) -> bool {
        self.rows.iter().all(|r| r.agrees)
    }
}

fn ser_union<S: Serializer>(y: &ComponentSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(y.iter())
}

/// The balanced multidegree inequality
/// `d_Y >= d_X/(g_X - 1) (g_Y - 1 + k_Y/2) - k_Y/2` for every union of a
/// curve, compared with `e_Y(L) <= 0`.
pub fn balanced_check(config: &Configuration, l: &ClassExpr) -> Result<BalancedReport> {
    if config.dim() != 1 {
        return Err(Error::Hypothesis("balanced check needs a curve".into()));
    }
    let n = config.num_components();
    if n > MAX_COMPONENTS {
        return Err(Error::TooManyComponents(n, MAX_COMPONENTS));
    }
    let zero = ClassExpr::default();
    let genus = |y: ComponentSet| -> Result<Rational> { Ok(Rational::one() - config.chi_union(y, &zero)?) };
    let full = config.full();
    let g_x = genus(full)?;
    if g_x < Rational::from_integer(BigInt::from(2)) {
        return Err(Error::Hypothesis(format!("arithmetic genus {g_x} < 2")));
    }
    let d_x = config.intersect(&[l.clone(), ClassExpr::union(full)])?;
    let half = frac(1, 2);
    let mut rows = Vec::new();
    for y in ComponentSet::proper_unions(n) {
        let yc = ClassExpr::union(y);
        let d_y = config.intersect(&[l.clone(), yc.clone()])?;
        let g_y = genus(y)?;
        let k_y = -config.intersect(&[yc.clone(), yc])?;
        let bound = &d_x / (&g_x - Rational::one()) * (&g_y - Rational::one() + &k_y * &half) - &k_y * &half;
        let balanced = d_y >= bound;
        let e = defect_value(config, y, l)?;
        let agrees = balanced == (e <= Rational::zero());
        rows.push(BalancedRow {
            union: y,
            degree: d_y,
            genus: g_y,
            nodes: k_y,
            bound,
            balanced,
            e,
            agrees,
        });
    }
    Ok(BalancedReport {
        genus: g_x,
        degree: d_x,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Threshold {
    #[serde(serialize_with = "ser_display")]
    pub m0: BigInt,
    #[serde(with = "crate::exactnum::rational_str")]
    pub bound: Rational,
    pub eventual: Sign,
    /// Sampled signs on `[m0, m0 + 1000]` and above the bound all equal `eventual`.
    pub samples_agree: bool,
}

fn ser_display<S: Serializer, T: std::fmt::Display>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

const SAMPLE_SPAN: u32 = 1000;

/// Smallest integer `m0 >= 1` from which the sign of `p` at every integer
/// equals its eventual sign, with the Cauchy root bound as analytic bound.
pub fn m_threshold_poly(p: &UPoly) -> Threshold {
    let eventual = eventual_sign(p);
    let bound = p.cauchy_bound();
    let m0 = last_disagreement(p, eventual).map_or_else(BigInt::one, |m| m + 1);
    let mut samples_agree = true;
    for start in [Rational::from_integer(m0.clone()), bound.ceil()] {
        for k in 0..=SAMPLE_SPAN {
            let m = &start + Rational::from_integer(BigInt::from(k));
            if p.sign_at(&m) != eventual {
                samples_agree = false;
            }
        }
    }
    Threshold {
        m0,
        bound,
        eventual,
        samples_agree,
    }
}

/// Largest integer `m >= 1` where the sign differs from the eventual sign.
fn last_disagreement(p: &UPoly, eventual: Sign) -> Option<BigInt> {
    if p.is_constant() {
        return None;
    }
    let roots: Vec<RealPoint> = isolate_real_roots(p)
        .ok()?
        .into_iter()
        .map(|r| RealPoint::from_box(r.boxed))
        .collect();
    let one = BigInt::one();
    for k in (0..roots.len()).rev() {
        let r = &roots[k];
        if let Some(q) = r.as_rational() {
            if q.is_integer() {
                let m = q.to_integer();
                return (m >= one).then_some(m);
            }
        }
        let below = if k == 0 {
            r.bounds().0 - Rational::one()
        } else {
            RealPoint::rational_between(&roots[k - 1], r)
        };
        if p.sign_at(&below) != eventual {
            let c = r.ceil() - BigInt::one();
            let inside = k == 0 || roots[k - 1].cmp_exact(&RealPoint::from(Rational::from_integer(c.clone()))).is_lt();
            if inside {
                return (c >= one).then_some(c);
            }
        }
        if r.ceil() <= one {
            return None;
        }
    }
    None
}

pub fn m_threshold(config: &Configuration, y: ComponentSet, l: &ClassExpr, h: &ClassExpr) -> Result<Threshold> {
    Ok(m_threshold_poly(&defect_in_m(config, y, l, h)?))
}

/// Numeric helper for reports: the largest absolute twist coordinate.
pub fn max_abs_coordinate(twists: &[Twist]) -> u64 {
    twists
        .iter()
        .flat_map(|t| t.coords().iter())
        .map(|c| c.unsigned_abs())
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::exactnum::rat;
    use crate::sncmodel::{curve_builder, synth_generator};
    use crate::twistenum::enumerate_semistable_twists;

    fn curve(genera: &[u32], edges: &[(usize, usize, u32)], l: &[i64]) -> Configuration {
        let deg = BTreeMap::from([("L".to_string(), l.to_vec())]);
        curve_builder(genera, edges, &deg).unwrap()
    }

    fn fix_c1() -> Configuration {
        curve(&[2, 1], &[(0, 1, 1)], &[3, 2])
    }

    fn fix_c2() -> Configuration {
        curve(&[2, 2], &[(0, 1, 1)], &[1, 2])
    }

    fn lk(c: &Configuration) -> (ClassExpr, ClassExpr) {
        (c.parse_class("L").unwrap(), c.parse_class("K").unwrap())
    }

    #[test]
    fn defect_matches_hand_values() {
        let c = fix_c1();
        let (l, _) = lk(&c);
        assert_eq!(defect_value(&c, ComponentSet::singleton(0), &l).unwrap(), frac(1, 2));
        assert_eq!(defect_value(&c, c.full(), &l).unwrap(), rat(0));
        let c = fix_c2();
        let (l, _) = lk(&c);
        assert_eq!(defect_value(&c, ComponentSet::singleton(0), &l).unwrap(), rat(0));
    }

    #[test]
    fn brute_force_fixtures() {
        let c = fix_c1();
        let (l, k) = lk(&c);
        assert_eq!(brute_force_twists(&c, &l, &k, Mode::Minus, 10).unwrap(), vec![Twist::new(&[0, 1])]);
        assert_eq!(brute_force_twists(&c, &l, &k, Mode::Minus, 0).unwrap(), Vec::<Twist>::new());
        let c = fix_c2();
        let (l, k) = lk(&c);
        assert_eq!(
            brute_force_twists(&c, &l, &k, Mode::Minus, 10).unwrap(),
            vec![Twist::new(&[0, 0]), Twist::new(&[0, 1])]
        );
        assert_eq!(brute_force_twists(&c, &l, &k, Mode::Minus, 0).unwrap(), vec![Twist::zero(2)]);
    }

    #[test]
    fn brute_force_agrees_with_enumeration_on_a_path() {
        let c = curve(&[2, 1, 0, 3], &[(0, 1, 2), (1, 2, 1), (1, 3, 1)], &[7, -3, 2, 5]);
        let (l, k) = lk(&c);
        let w = oracle_window(&c, &l, &k, Mode::Minus, DEFAULT_WINDOW).unwrap();
        let brute = brute_force_with(&c, &l, &k, Mode::Minus, w, Exec::Sequential).unwrap();
        let fast = enumerate_semistable_twists(&c, &l, &k, Mode::Minus).unwrap().twists;
        assert_eq!(brute, fast);
    }

    #[test]
    fn exhaustive_guard() {
        let genera = vec![2; 13];
        let edges: Vec<(usize, usize, u32)> = (1..13).map(|i| (i - 1, i, 1)).collect();
        let c = curve(&genera, &edges, &[0; 13]);
        let (l, k) = lk(&c);
        assert_eq!(
            brute_force_twists(&c, &l, &k, Mode::Minus, 1).unwrap_err(),
            Error::TooManyComponents(13, 12)
        );
    }

    #[test]
    fn balanced_fixtures() {
        let c = curve(&[2, 1], &[(0, 1, 1)], &[4, 1]);
        let (l, _) = lk(&c);
        let r = balanced_check(&c, &l).unwrap();
        assert!(r.balanced() && r.all_agree());
        assert_eq!(r.rows[0].bound, frac(13, 4));
        assert_eq!(r.rows[1].bound, frac(3, 4));

        let c = fix_c1();
        let (l, _) = lk(&c);
        let r = balanced_check(&c, &l).unwrap();
        assert!(!r.rows[0].balanced && r.all_agree());

        let c = fix_c2();
        let (l, _) = lk(&c);
        let r = balanced_check(&c, &l).unwrap();
        assert!(r.balanced() && r.all_agree());
        assert_eq!(r.rows[0].degree, r.rows[0].bound);

        let c = curve(&[1, 0], &[(0, 1, 1)], &[1, 1]);
        let (l, _) = lk(&c);
        assert!(matches!(balanced_check(&c, &l).unwrap_err(), Error::Hypothesis(_)));
    }

    #[test]
    fn identity_battery_passes_on_valid_and_catches_corruption() {
        let c = fix_c1();
        let r = identity_battery(&c, 100, 1).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.check("complement_identity").unwrap().runs, 100);

        let single = curve(&[2], &[], &[3]);
        assert!(identity_battery(&single, 20, 1).unwrap().passed());

        let mut parts = c.parts().clone();
        let v = parts.form.get(&[0, 0]);
        parts.form.set(&[0, 0], v + rat(1));
        let bad = Configuration::from_parts(parts).unwrap();
        let r = identity_battery(&bad, 100, 1).unwrap();
        assert!(r.check("complement_identity").unwrap().failures > 0);
        assert!(r.counterexamples.iter().any(|x| x.check == "complement_identity"));
    }

    #[test]
    fn degree_bounds_on_curve_and_surface() {
        let c = fix_c1();
        let (l, k) = lk(&c);
        let r = degree_bound_battery(&c, ComponentSet::singleton(0), &l, &k).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.check("linear_term_leading").is_some());

        let s = synth_generator(2, &[(0, 1)], 7).unwrap();
        let (l, k) = lk(&s);
        for y in [ComponentSet::singleton(0), ComponentSet::singleton(1)] {
            let r = degree_bound_battery(&s, y, &l, &k).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.check("surface_quadratic_term").unwrap().runs, 1);
            let r = degree_bound_battery(&s, y, &l, &l).unwrap();
            assert!(r.passed());
            assert!(r.check("linear_term_leading").is_none());
        }
    }

    #[test]
    fn thresholds() {
        let c = fix_c1();
        let (l, k) = lk(&c);
        let t = m_threshold(&c, ComponentSet::singleton(0), &l, &k).unwrap();
        assert_eq!(t.m0, BigInt::one());
        assert!(t.samples_agree);

        let t = m_threshold_poly(&UPoly::from_ints(&[1000, -1]));
        assert_eq!(t.m0, BigInt::from(1001));
        assert_eq!(t.bound, rat(1001));
        assert!(t.samples_agree);

        let t = m_threshold_poly(&UPoly::zero());
        assert_eq!((t.m0, t.eventual), (BigInt::one(), Sign::Zero));

        // (m - 5/2)(m - 7/2): negative only at 3
        let t = m_threshold_poly(&UPoly::new(vec![frac(35, 4), rat(-6), rat(1)]));
        assert_eq!(t.m0, BigInt::from(4));
        // roots at 1/3 and 2/3 with nothing to see at integers
        let t = m_threshold_poly(&UPoly::new(vec![frac(2, 9), rat(-1), rat(1)]));
        assert_eq!(t.m0, BigInt::one());
    }
}
