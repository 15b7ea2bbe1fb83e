//! Searches over families of hyperelliptic curves with rational branch points.
//!
//! Genus 2 curves are swept as y^2 = x(x-1)(x-λ)(x-t1)(x-t2) with t1 < t2 in
//! code order; genus 3 curves as y^2 = x(x-1)Π(x-b_i) over five increasing
//! free points. In both, {∞, 0, 1} are fixed branch points and the free
//! parameters avoid them and each other.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartier::{self, HyperellipticCurve};
use crate::covers::{self, partition_masks, CoverRecord, SubsetRanks};
use crate::error::{Error, Result};
use crate::gf::{Field, FieldElement, TableField};
use crate::poly::{dense, Poly};
use crate::zeta;

/// Largest parameter space scanned exhaustively by default.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 1 << 24;
/// Largest field for which tables are built during scans.
pub const SCAN_FIELD_CAP: u128 = 1 << 22;
/// Field cap for point counts when re-deriving certificates.
pub const VERIFY_COUNT_CAP: u128 = 1 << 24;

const CHUNK: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum ScanMode {
    Exhaustive,
    Random { seed: u64, samples: u64 },
}

impl ScanMode {
    pub fn name(&self) -> &'static str {
        match self {
            ScanMode::Exhaustive => "exhaustive",
            ScanMode::Random { .. } => "random",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            ScanMode::Exhaustive => None,
            ScanMode::Random { seed, .. } => Some(*seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSpec {
    pub p: u32,
    pub k: usize,
    pub genus: usize,
    pub mode: ScanMode,
    /// Restricts the reported rows to one stratum.
    pub target: Option<(usize, usize)>,
    pub exhaustive_cap: u64,
}

impl ScanSpec {
    pub fn new(p: u32, k: usize, genus: usize, mode: ScanMode) -> ScanSpec {
        ScanSpec { p, k, genus, mode, target: None, exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP }
    }

    fn validate(&self) -> Result<()> {
        if self.p < 3 || !crate::gf::fp::is_prime(self.p) {
            return Err(Error::BadCharacteristic(self.p));
        }
        if self.k == 0 {
            return Err(Error::InvalidScan("extension degree must be positive".into()));
        }
        check_genus(self.genus)?;
        if let Some(t) = self.target {
            check_target(self.genus, t)?;
        }
        Ok(())
    }
}

fn check_genus(genus: usize) -> Result<()> {
    if genus == 2 || genus == 3 {
        Ok(())
    } else {
        Err(Error::InvalidScan(format!("genus {genus} is not scanned (2 or 3 only)")))
    }
}

fn check_target(genus: usize, (f, fp): (usize, usize)) -> Result<()> {
    if f > genus || fp + 1 > genus {
        Err(Error::InvalidScan(format!("target ({f}, {fp}) outside 0..={genus} x 0..={}", genus - 1)))
    } else {
        Ok(())
    }
}

/// One family of parameter tuples: a head parameter followed by `rest`
/// further points, all distinct and outside {0, 1}.
struct Slice {
    table: Arc<TableField>,
    /// F_q minus {0, 1}, code order
    free: Vec<u32>,
    heads: Vec<u32>,
    rest: usize,
    /// rest points come after the head in `free` (sorted tuples) rather than
    /// from all of `free` minus the head
    after_head: bool,
}

fn binomial(n: u64, m: u64) -> u64 {
    if m > n {
        return 0;
    }
    (0..m).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

impl Slice {
    fn new(table: Arc<TableField>, genus: usize, supersingular_head: bool) -> Slice {
        let free: Vec<u32> = (2..table.order()).map(|c| table.from_code(c)).collect();
        let heads = if supersingular_head {
            supersingular_lambdas(&table)
        } else {
            free.clone()
        };
        let (rest, after_head) = match genus {
            2 => (2, false),
            _ => (4, !supersingular_head),
        };
        Slice { table, free, heads, rest, after_head }
    }

    fn available(&self, head_pos: usize) -> Vec<u32> {
        let h = self.heads[head_pos];
        if self.after_head {
            let i = self.free.iter().position(|&e| e == h).expect("head is free");
            self.free[i + 1..].to_vec()
        } else {
            self.free.iter().copied().filter(|&e| e != h).collect()
        }
    }

    fn block_size(&self, head_pos: usize) -> u64 {
        let avail = if self.after_head {
            let i = self.free.iter().position(|&e| e == self.heads[head_pos]).expect("head is free");
            self.free.len() - i - 1
        } else {
            self.free.len() - 1
        };
        binomial(avail as u64, self.rest as u64)
    }

    fn size(&self) -> u64 {
        (0..self.heads.len()).map(|i| self.block_size(i)).fold(0u64, u64::saturating_add)
    }

    fn offsets(&self) -> Vec<u64> {
        let mut acc = 0;
        (0..self.heads.len())
            .map(|i| {
                let o = acc;
                acc += self.block_size(i);
                o
            })
            .collect()
    }

    /// Tuples of block `head_pos` in order.
    fn block(&self, head_pos: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
        let h = self.heads[head_pos];
        self.available(head_pos).into_iter().combinations(self.rest).map(move |mut c| {
            c.insert(0, h);
            c
        })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        if self.after_head {
            let mut idx = index::sample(rng, self.free.len(), self.rest + 1).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| self.free[i]).collect()
        } else {
            let h = self.heads[rng.gen_range(0..self.heads.len())];
            let others: Vec<u32> = self.free.iter().copied().filter(|&e| e != h).collect();
            let mut idx = index::sample(rng, others.len(), self.rest).into_vec();
            idx.sort_unstable();
            std::iter::once(h).chain(idx.into_iter().map(|i| others[i])).collect()
        }
    }

    /// Branch points (∞ first) of the curve with free parameters `params`.
    fn points(&self, params: &[u32]) -> Vec<Option<u32>> {
        let t = &self.table;
        [None, Some(t.zero()), Some(t.one())]
            .into_iter()
            .chain(params.iter().map(|&e| Some(e)))
            .collect()
    }
}

fn supersingular_lambdas(table: &TableField) -> Vec<u32> {
    let h: Vec<u32> = cartier::deuring_polynomial(table.characteristic())
        .expect("odd prime")
        .coeffs()
        .iter()
        .map(|c| table.from_int(c.coeffs()[0] as i64))
        .collect();
    (2..table.order())
        .map(|c| table.from_code(c))
        .filter(|&l| table.is_zero(dense::eval(table, &h, l)))
        .collect()
}

fn rng_for(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Counts of covers by stratum. Cover-wise counts add one per cover; the
/// curve-wise view adds one per curve for each distinct (f, f') among its
/// covers.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct Counts {
    covers: BTreeMap<(usize, usize), u64>,
    curves: BTreeMap<(usize, usize), u64>,
    total: u64,
}

impl Counts {
    fn add(&mut self, f: usize, f_primes: &[usize]) {
        self.total += 1;
        let mut seen = [false; 4];
        for &fp in f_primes {
            *self.covers.entry((f, fp)).or_default() += 1;
            seen[fp] = true;
        }
        for (fp, _) in seen.iter().enumerate().filter(|(_, &s)| s) {
            *self.curves.entry((f, fp)).or_default() += 1;
        }
    }

    fn merge(mut self, other: Counts) -> Counts {
        for (k, v) in other.covers {
            *self.covers.entry(k).or_default() += v;
        }
        for (k, v) in other.curves {
            *self.curves.entry(k).or_default() += v;
        }
        self.total += other.total;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountView {
    Covers,
    Curves,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRow {
    pub f: usize,
    pub f_prime: usize,
    pub covers: u64,
    pub curves: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumTable {
    pub p: u32,
    pub k: usize,
    pub q: u64,
    pub genus: usize,
    pub mode: String,
    pub seed: Option<u64>,
    /// number of curves scanned
    pub total: u64,
    pub rows: Vec<StratumRow>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    q: u64,
    genus: usize,
    f: usize,
    f_prime: usize,
    count: u64,
    mode: &'a str,
    seed: Option<u64>,
}

impl StratumTable {
    pub fn count(&self, stratum: (usize, usize), view: CountView) -> u64 {
        self.rows
            .iter()
            .find(|r| (r.f, r.f_prime) == stratum)
            .map(|r| match view {
                CountView::Covers => r.covers,
                CountView::Curves => r.curves,
            })
            .unwrap_or(0)
    }

    pub fn covers_per_curve(&self) -> u64 {
        (1 << (2 * self.genus)) - 1
    }

    pub fn to_csv(&self, view: CountView) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(CsvRow {
                q: self.q,
                genus: self.genus,
                f: r.f,
                f_prime: r.f_prime,
                count: match view {
                    CountView::Covers => r.covers,
                    CountView::Curves => r.curves,
                },
                mode: &self.mode,
                seed: self.seed,
            })
            .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

fn scan_table(spec: &ScanSpec) -> Result<Arc<TableField>> {
    zeta::table_for(spec.p, spec.k, SCAN_FIELD_CAP)
}

pub fn scan(spec: &ScanSpec) -> Result<StratumTable> {
    spec.validate()?;
    let table = scan_table(spec)?;
    let slice = Slice::new(table.clone(), spec.genus, false);
    let masks = partition_masks(2 * spec.genus + 2);
    let profile = |params: &[u32]| {
        let points = slice.points(params);
        let mut sub = SubsetRanks::new(table.as_ref(), &points);
        let f = sub.rank((1 << points.len()) - 1);
        let f_primes: Vec<usize> = masks.iter().map(|&m| sub.prym(m)).collect();
        (f, f_primes)
    };
    let counts = match spec.mode {
        ScanMode::Exhaustive => {
            let size = slice.size();
            if size > spec.exhaustive_cap {
                return Err(Error::CapExceeded {
                    what: "exhaustive parameter space",
                    size: size as u128,
                    cap: spec.exhaustive_cap as u128,
                });
            }
            (0..slice.heads.len())
                .into_par_iter()
                .map(|h| {
                    let mut c = Counts::default();
                    for params in slice.block(h) {
                        let (f, fps) = profile(&params);
                        c.add(f, &fps);
                    }
                    c
                })
                .reduce(Counts::default, Counts::merge)
        }
        ScanMode::Random { seed, samples } => {
            if slice.size() == 0 {
                Counts::default()
            } else {
                (0..samples.div_ceil(CHUNK))
                    .into_par_iter()
                    .map(|chunk| {
                        let mut rng = rng_for(seed, chunk);
                        let mut c = Counts::default();
                        let n = CHUNK.min(samples - chunk * CHUNK);
                        for _ in 0..n {
                            let (f, fps) = profile(&slice.sample(&mut rng));
                            c.add(f, &fps);
                        }
                        c
                    })
                    .reduce(Counts::default, Counts::merge)
            }
        }
    };
    let rows = (0..=spec.genus)
        .flat_map(|f| (0..spec.genus).map(move |fp| (f, fp)))
        .filter(|&s| spec.target.map_or(true, |t| t == s))
        .map(|s| StratumRow {
            f: s.0,
            f_prime: s.1,
            covers: counts.covers.get(&s).copied().unwrap_or(0),
            curves: counts.curves.get(&s).copied().unwrap_or(0),
        })
        .collect();
    Ok(StratumTable {
        p: spec.p,
        k: spec.k,
        q: table.order() as u64,
        genus: spec.genus,
        mode: spec.mode.name().to_string(),
        seed: spec.mode.seed(),
        total: counts.total,
        rows,
    })
}

/// Limits for [`witness_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessBudget {
    /// extension degrees 1..=max_k are tried first
    pub max_k: usize,
    /// then max_k+1..=escalate_k, if larger
    pub escalate_k: usize,
    /// samples per field when the space is too large to scan exhaustively
    pub samples: u64,
    pub seed: u64,
    pub exhaustive_cap: u64,
}

impl Default for WitnessBudget {
    fn default() -> Self {
        WitnessBudget {
            max_k: 4,
            escalate_k: 4,
            samples: 1 << 20,
            seed: 0,
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
        }
    }
}

/// What was covered at one extension degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchedField {
    pub k: usize,
    pub q: u64,
    pub mode: String,
    pub slice: String,
    pub tuples: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub p: u32,
    pub k: usize,
    pub genus: usize,
    pub target: (usize, usize),
    pub field: String,
    /// free parameters (λ, t1, t2) or (b1, ..., b5)
    pub params: Vec<String>,
    pub slice: String,
    pub mode: String,
    pub seed: Option<u64>,
    pub scan_index: u64,
    pub escalated: bool,
    pub cover: CoverRecord,
}

/// p-ranks recomputed from a certificate along both routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub cartier: (usize, usize),
    /// None when point counts exceed the cap
    pub zeta: Option<(usize, usize)>,
}

impl CertificateCheck {
    pub fn reproduces(&self, target: (usize, usize)) -> bool {
        self.cartier == target && self.zeta.map_or(true, |z| z == target)
    }
}

impl WitnessCertificate {
    pub fn curve(&self) -> Result<HyperellipticCurve> {
        Ok(self.cover.to_datum()?.base)
    }

    /// Recomputes (f, f') with Cartier matrices and, within `count_cap`, from
    /// L-polynomials.
    pub fn verify(&self, count_cap: u128) -> Result<CertificateCheck> {
        let datum = self.cover.to_datum()?;
        let x = &datum.base;
        let cartier = (cartier::p_rank(x)?, covers::prym_p_rank(x, &datum.partition)?);
        let zeta = match (zeta::l_polynomial_with_cap(x.f(), count_cap), {
            covers::cover_p_rank_zeta(x, &datum.partition, count_cap)
        }) {
            (Ok(lx), Ok((fp, _))) => Some((lx.degree_mod(x.ctx().p() as u64), fp)),
            (Err(Error::CapExceeded { .. }), _) | (_, Err(Error::CapExceeded { .. })) => None,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        Ok(CertificateCheck { cartier, zeta })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessOutcome {
    Found { certificate: WitnessCertificate, searched: Vec<SearchedField> },
    Exhausted { searched: Vec<SearchedField> },
}

impl WitnessOutcome {
    pub fn certificate(&self) -> Option<&WitnessCertificate> {
        match self {
            WitnessOutcome::Found { certificate, .. } => Some(certificate),
            WitnessOutcome::Exhausted { .. } => None,
        }
    }

    pub fn searched(&self) -> &[SearchedField] {
        match self {
            WitnessOutcome::Found { searched, .. } | WitnessOutcome::Exhausted { searched } => searched,
        }
    }
}

/// First mask in partition order whose cover lands in `target`, if the curve
/// has p-rank `target.0`.
fn match_target<F: Field>(field: &F, points: &[Option<F::Elem>], masks: &[u32], target: (usize, usize)) -> Option<u32> {
    let mut sub = SubsetRanks::new(field, points);
    if sub.rank((1 << points.len()) - 1) != target.0 {
        return None;
    }
    masks.iter().copied().find(|&m| sub.prym(m) == target.1)
}

/// Searches F_{p^k} for k = 1, 2, ... for a curve with a cover in stratum
/// `target`. Each field is scanned exhaustively when small enough and sampled
/// otherwise; the first hit in scan order wins.
///
/// In genus 2 a cover with f' = 0 has a supersingular elliptic part, which a
/// fractional-linear change of coordinates moves to {∞, 0, 1, λ}; such targets
/// only scan supersingular λ. In genus 3 the supersingular-λ slice is tried
/// before the full family.
pub fn witness_search(p: u32, genus: usize, target: (usize, usize), budget: &WitnessBudget) -> Result<WitnessOutcome> {
    ScanSpec::new(p, 1, genus, ScanMode::Exhaustive).validate()?;
    check_target(genus, target)?;
    let masks = partition_masks(2 * genus + 2);
    let mut searched = Vec::new();
    let last_k = budget.max_k.max(budget.escalate_k);
    for k in 1..=last_k {
        let size = (p as u128).pow(k as u32);
        if size > SCAN_FIELD_CAP {
            break;
        }
        let table = zeta::table_for(p, k, SCAN_FIELD_CAP)?;
        let slices: Vec<(bool, &str)> = match (genus, target.1) {
            (2, 0) => vec![(true, "supersingular-lambda")],
            (3, 0) => vec![(true, "supersingular-lambda"), (false, "full")],
            _ => vec![(false, "full")],
        };
        for (ss, name) in slices {
            let slice = Slice::new(table.clone(), genus, ss);
            let total = slice.size();
            if slice.heads.is_empty() || total == 0 {
                searched.push(SearchedField { k, q: size as u64, mode: "exhaustive".into(), slice: name.into(), tuples: 0 });
                continue;
            }
            let test = |params: &[u32]| match_target(table.as_ref(), &slice.points(params), &masks, target);
            let (hit, mode, seed, tuples) = if total <= budget.exhaustive_cap {
                let offsets = slice.offsets();
                let hit = (0..slice.heads.len()).into_par_iter().find_map_first(|h| {
                    slice
                        .block(h)
                        .enumerate()
                        .find(|(_, params)| test(params).is_some())
                        .map(|(i, params)| (offsets[h] + i as u64, params))
                });
                let tuples = hit.as_ref().map_or(total, |(i, _)| i + 1);
                (hit, "exhaustive", None, tuples)
            } else {
                let seed = budget.seed ^ ((k as u64) << 32) ^ (ss as u64) << 40;
                let hit = (0..budget.samples.div_ceil(CHUNK)).into_par_iter().find_map_first(|chunk| {
                    let mut rng = rng_for(seed, chunk);
                    let n = CHUNK.min(budget.samples - chunk * CHUNK);
                    (0..n).find_map(|i| {
                        let params = slice.sample(&mut rng);
                        test(&params).map(|_| (chunk * CHUNK + i, params))
                    })
                });
                let tuples = hit.as_ref().map_or(budget.samples, |(i, _)| i + 1);
                (hit, "random", Some(seed), tuples)
            };
            searched.push(SearchedField { k, q: size as u64, mode: mode.into(), slice: name.into(), tuples });
            if let Some((scan_index, params)) = hit {
                let certificate = certify(&table, genus, target, &params)?;
                return Ok(WitnessOutcome::Found {
                    certificate: WitnessCertificate {
                        p,
                        k,
                        slice: name.into(),
                        mode: mode.into(),
                        seed,
                        scan_index,
                        escalated: k > budget.max_k,
                        ..certificate
                    },
                    searched,
                });
            }
        }
    }
    Ok(WitnessOutcome::Exhausted { searched })
}

/// Builds the curve for `params` over the residue representation and records
/// the first cover (in canonical partition order) in the target stratum.
fn certify(table: &TableField, genus: usize, target: (usize, usize), params: &[u32]) -> Result<WitnessCertificate> {
    let ctx = table.ctx().clone();
    let values: Vec<FieldElement> = params.iter().map(|&e| table.to_element(e)).collect();
    let roots: Vec<FieldElement> = [ctx.zero(), ctx.one()].into_iter().chain(values.iter().copied()).collect();
    let curve = HyperellipticCurve::new(Poly::from_roots(&ctx, &roots)?)?;
    let datum = covers::cover_profile(&curve)?
        .into_iter()
        .find(|d| (d.f, d.f_prime) == target)
        .ok_or_else(|| Error::InconsistentCounts("table and residue profiles disagree".into()))?;
    Ok(WitnessCertificate {
        p: ctx.p(),
        k: ctx.degree(),
        genus,
        target,
        field: ctx.spec(),
        params: values.iter().map(|v| v.encode()).collect(),
        slice: String::new(),
        mode: String::new(),
        seed: None,
        scan_index: 0,
        escalated: false,
        cover: datum.record(),
    })
}

/// Growth of curve-wise stratum counts between consecutive fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthStep {
    pub q_small: u64,
    pub q_large: u64,
    pub count_small: u64,
    pub count_large: u64,
    /// log(count_large / count_small) / log(q_large / q_small); approximate,
    /// None when either count is zero
    pub exponent: Option<f64>,
}

pub fn growth_exponent(p: u32, genus: usize, stratum: (usize, usize), k_list: &[usize]) -> Result<Vec<GrowthStep>> {
    check_target(genus, stratum)?;
    let counts: Vec<(u64, u64)> = k_list
        .iter()
        .map(|&k| {
            let t = scan(&ScanSpec::new(p, k, genus, ScanMode::Exhaustive))?;
            Ok((t.q, t.count(stratum, CountView::Curves)))
        })
        .collect::<Result<_>>()?;
    Ok(growth_steps(&counts))
}

/// Growth steps from (q, count) pairs in order.
pub fn growth_steps(counts: &[(u64, u64)]) -> Vec<GrowthStep> {
    counts
        .windows(2)
        .map(|w| {
            let ((qs, ns), (ql, nl)) = (w[0], w[1]);
            let exponent = (ns > 0 && nl > 0)
                .then(|| (nl as f64 / ns as f64).ln() / (ql as f64 / qs as f64).ln());
            GrowthStep { q_small: qs, q_large: ql, count_small: ns, count_large: nl, exponent }
        })
        .collect()
}

pub const SLICE_LABEL: &str = "hyperelliptic slice only; non-hyperelliptic genus-3 curves not searched";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Question {
    /// genus 3 covers with f = f_Y = 0
    #[serde(rename = "Q9.2")]
    ZeroRankCover,
    /// genus 3 stratum table
    #[serde(rename = "Q9.5-table")]
    GenusThreeTable,
}

impl std::str::FromStr for Question {
    type Err = Error;

    fn from_str(s: &str) -> Result<Question> {
        match s {
            "Q9.2" => Ok(Question::ZeroRankCover),
            "Q9.5-table" => Ok(Question::GenusThreeTable),
            _ => Err(Error::Parse(format!("unknown question {s:?} (Q9.2 or Q9.5-table)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreReport {
    pub question: Question,
    pub p: u32,
    pub label: String,
    /// smallest (f, f_Y) seen, ordered by f_Y then f
    pub best: Option<(usize, usize)>,
    pub witness: Option<WitnessCertificate>,
    pub table: Option<StratumTable>,
    pub searched: Vec<SearchedField>,
    pub note: String,
}

/// Best-effort probe of a genus 3 question on hyperelliptic curves. Never
/// claims emptiness.
pub fn explore_question(question: Question, p: u32, budget: &WitnessBudget) -> Result<ExploreReport> {
    let table_for_budget = |k: usize| -> Result<StratumTable> {
        let size = binomial((p as u64).pow(k as u32) - 2, 5);
        let mode = if size <= budget.exhaustive_cap {
            ScanMode::Exhaustive
        } else {
            ScanMode::Random { seed: budget.seed, samples: budget.samples }
        };
        scan(&ScanSpec { exhaustive_cap: budget.exhaustive_cap, ..ScanSpec::new(p, k, 3, mode) })
    };
    // smallest field with at least 8 rational points on the line
    let first_k = (1..).find(|&k| (p as u64).pow(k) >= 7).unwrap() as usize;
    let k_table = budget.max_k.max(first_k);
    match question {
        Question::ZeroRankCover => {
            let outcome = witness_search(p, 3, (0, 0), budget)?;
            let searched = outcome.searched().to_vec();
            if let Some(c) = outcome.certificate() {
                return Ok(ExploreReport {
                    question,
                    p,
                    label: SLICE_LABEL.into(),
                    best: Some((0, 0)),
                    witness: Some(c.clone()),
                    table: None,
                    searched,
                    note: format!("found a hyperelliptic cover with f = f_Y = 0 over F_{}", (p as u64).pow(c.k as u32)),
                });
            }
            let table = table_for_budget(k_table)?;
            let best = table
                .rows
                .iter()
                .filter(|r| r.covers > 0)
                .map(|r| (r.f, r.f + r.f_prime))
                .min_by_key(|&(f, fy)| (fy, f));
            Ok(ExploreReport {
                question,
                p,
                label: SLICE_LABEL.into(),
                best,
                witness: None,
                table: Some(table),
                searched,
                note: "no cover with f = f_Y = 0 found within budget; this is not evidence of emptiness".into(),
            })
        }
        Question::GenusThreeTable => {
            let table = table_for_budget(k_table)?;
            let best = table
                .rows
                .iter()
                .filter(|r| r.covers > 0)
                .map(|r| (r.f, r.f + r.f_prime))
                .min_by_key(|&(f, fy)| (fy, f));
            Ok(ExploreReport {
                question,
                p,
                label: SLICE_LABEL.into(),
                best,
                witness: None,
                note: format!("genus 3 stratum table over F_{}", table.q),
                table: Some(table),
                searched: Vec::new(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_wise_conservation() {
        for (p, k, g) in [(5, 2, 2), (7, 1, 2), (3, 2, 2), (5, 2, 3)] {
            let t = scan(&ScanSpec::new(p, k, g, ScanMode::Exhaustive)).unwrap();
            let covers: u64 = t.rows.iter().map(|r| r.covers).sum();
            assert_eq!(covers, t.total * t.covers_per_curve());
            assert!(t.rows.iter().all(|r| r.curves <= t.total && r.curves <= r.covers));
        }
    }

    #[test]
    fn exhaustive_sizes() {
        // (q - 2) choices of λ, then unordered pairs from the q - 3 others
        let t = scan(&ScanSpec::new(5, 2, 2, ScanMode::Exhaustive)).unwrap();
        assert_eq!(t.total, 23 * 22 * 21 / 2);
        let t = scan(&ScanSpec::new(5, 2, 3, ScanMode::Exhaustive)).unwrap();
        assert_eq!(t.total, binomial(23, 5));
        let t = scan(&ScanSpec::new(5, 1, 2, ScanMode::Exhaustive)).unwrap();
        assert_eq!(t.total, 3);
    }

    #[test]
    fn random_scan_is_deterministic() {
        let spec = ScanSpec::new(7, 2, 2, ScanMode::Random { seed: 11, samples: 5000 });
        let a = scan(&spec).unwrap();
        let b = scan(&spec).unwrap();
        assert_eq!(a.to_csv(CountView::Covers).unwrap(), b.to_csv(CountView::Covers).unwrap());
        assert_eq!(a.total, 5000);
        let c = scan(&ScanSpec::new(7, 2, 2, ScanMode::Random { seed: 12, samples: 5000 })).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampled_tuples_avoid_degenerate_locus() {
        let table = zeta::table_for(5, 2, SCAN_FIELD_CAP).unwrap();
        for (g, ss) in [(2, false), (2, true), (3, false), (3, true)] {
            let slice = Slice::new(table.clone(), g, ss);
            let mut rng = rng_for(3, 0);
            for _ in 0..500 {
                let params = slice.sample(&mut rng);
                assert_eq!(params.len(), 2 * g - 1);
                let pts = slice.points(&params);
                assert!(pts.iter().enumerate().all(|(i, a)| pts[..i].iter().all(|b| a != b)));
            }
        }
    }

    #[test]
    fn csv_layout() {
        let t = scan(&ScanSpec::new(5, 2, 2, ScanMode::Random { seed: 1, samples: 100 })).unwrap();
        let csv = t.to_csv(CountView::Covers).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("q,genus,f,f_prime,count,mode,seed"));
        assert_eq!(lines.count(), 6);
        assert!(csv.contains("25,2,2,1,"));
        assert!(csv.contains(",random,1"));
    }

    #[test]
    fn target_filters_rows() {
        let spec = ScanSpec { target: Some((2, 0)), ..ScanSpec::new(5, 2, 2, ScanMode::Exhaustive) };
        let t = scan(&spec).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert!(scan(&ScanSpec { target: Some((3, 0)), ..spec }).is_err());
    }

    #[test]
    fn exhaustive_cap_enforced() {
        let spec = ScanSpec { exhaustive_cap: 10, ..ScanSpec::new(5, 2, 2, ScanMode::Exhaustive) };
        assert!(matches!(scan(&spec), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn certificates_reproduce() {
        let budget = WitnessBudget::default();
        for target in [(2, 1), (1, 0), (0, 1)] {
            let out = witness_search(5, 2, target, &budget).unwrap();
            let cert = out.certificate().expect("stratum is non-empty over small fields");
            let check = cert.verify(VERIFY_COUNT_CAP).unwrap();
            assert!(check.reproduces(target), "{check:?}");
            assert!(check.zeta.is_some());
            let json = serde_json::to_string(cert).unwrap();
            let back: WitnessCertificate = serde_json::from_str(&json).unwrap();
            assert_eq!(&back, cert);
        }
    }

    #[test]
    fn p3_supersingular_prym_search_exhausts() {
        let budget = WitnessBudget { max_k: 3, escalate_k: 3, ..WitnessBudget::default() };
        let out = witness_search(3, 2, (0, 0), &budget).unwrap();
        assert!(out.certificate().is_none());
        assert_eq!(out.searched().len(), 3);
    }

    #[test]
    fn growth_undefined_on_zero() {
        let steps = growth_steps(&[(25, 0), (125, 10), (625, 250)]);
        assert_eq!(steps[0].exponent, None);
        assert!((steps[1].exponent.unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn malformed_targets() {
        let b = WitnessBudget::default();
        assert!(witness_search(5, 2, (3, 0), &b).is_err());
        assert!(witness_search(5, 2, (0, 2), &b).is_err());
        assert!(witness_search(5, 4, (0, 0), &b).is_err());
        assert!(witness_search(4, 2, (0, 0), &b).is_err());
    }
}
