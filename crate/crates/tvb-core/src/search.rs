//! Rainbow face enumeration, Tverberg partition search, and randomized
//! verification campaigns.
//!
//! The search walks r-tuples of pairwise disjoint rainbow faces in
//! lexicographic order of their canonical encoding (faces sorted by
//! smallest vertex, compared as sorted index lists), pruning by
//! disjointness and by exact bounding-box intersection before any LP is
//! solved. The first feasible tuple is therefore a deterministic function
//! of the input, and parallel runs reduce per-subtree results with a
//! minimum over the same order.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::criterion::{self, PrimePower};
use crate::geometry::{
    common_point_feasible, random_configuration, verify_witness, ColoredConfiguration, Rational,
    RationalPoint, TverbergWitness,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("intersection multiplicity must be at least 2, got {0}")]
    MultiplicityTooSmall(u64),
    #[error("cards {cards:?} do not satisfy the {theorem} hypothesis: {reason}")]
    HypothesisMismatch {
        theorem: String,
        cards: Vec<usize>,
        reason: String,
    },
    #[error("face {0:?} is not rainbow: two vertices share class {1}")]
    NotRainbow(Vec<usize>, usize),
    #[error("face is empty")]
    EmptyFace,
    #[error("face has {got} vertices; a common point needs at most {cap}")]
    FaceTooLarge { got: usize, cap: usize },
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
}

/// A face of the point configuration using at most one vertex per color
/// class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RainbowFace {
    pub vertex_indices: Vec<usize>,
    pub colors_used: Vec<usize>,
}

impl RainbowFace {
    pub fn new(
        config: &ColoredConfiguration,
        mut vertices: Vec<usize>,
    ) -> Result<Self, SearchError> {
        if vertices.is_empty() {
            return Err(SearchError::EmptyFace);
        }
        vertices.sort_unstable();
        vertices.dedup();
        // a face beyond d+1 vertices never helps: any common point already
        // lies in the hull of at most d+1 of them
        let cap = config.dimension() + 1;
        if vertices.len() > cap {
            return Err(SearchError::FaceTooLarge {
                got: vertices.len(),
                cap,
            });
        }
        let mut seen = vec![false; config.num_colors()];
        let mut colors = Vec::with_capacity(vertices.len());
        for &v in &vertices {
            if v >= config.num_points() {
                return Err(SearchError::VertexOutOfRange(v));
            }
            let c = config.color_of(v);
            if seen[c] {
                return Err(SearchError::NotRainbow(vertices.clone(), c));
            }
            seen[c] = true;
            colors.push(c);
        }
        Ok(RainbowFace {
            vertex_indices: vertices,
            colors_used: colors,
        })
    }

    pub fn min_vertex(&self) -> usize {
        self.vertex_indices[0]
    }

    pub fn points(&self, config: &ColoredConfiguration) -> Vec<RationalPoint> {
        self.vertex_indices
            .iter()
            .map(|&v| config.point(v).clone())
            .collect()
    }
}

/// Pairwise disjoint rainbow faces in canonical order (sorted by smallest
/// vertex index).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RainbowPartition {
    pub faces: Vec<RainbowFace>,
}

impl RainbowPartition {
    fn from_index_lists(config: &ColoredConfiguration, lists: &[Vec<usize>]) -> Self {
        let faces: Vec<RainbowFace> = lists
            .iter()
            .map(|l| RainbowFace::new(config, l.clone()).expect("search emits rainbow faces"))
            .collect();
        debug_assert!(faces
            .windows(2)
            .all(|w| w[0].min_vertex() < w[1].min_vertex()));
        RainbowPartition { faces }
    }
}

/// Every nonempty vertex subset with at most one vertex per class and at
/// most `max_size` vertices, in lexicographic order of the sorted index
/// list, each exactly once.
pub fn enumerate_rainbow_faces(config: &ColoredConfiguration, max_size: usize) -> Vec<RainbowFace> {
    assert!(max_size >= 1, "max_size must be positive");
    let n = config.num_points();
    let mut out = Vec::new();
    let mut face: Vec<usize> = Vec::with_capacity(max_size);
    let mut colors_in_face = vec![false; config.num_colors()];
    fn extend(
        config: &ColoredConfiguration,
        from: usize,
        max_size: usize,
        face: &mut Vec<usize>,
        colors_in_face: &mut [bool],
        out: &mut Vec<RainbowFace>,
    ) {
        for v in from..config.num_points() {
            let c = config.color_of(v);
            if colors_in_face[c] {
                continue;
            }
            face.push(v);
            colors_in_face[c] = true;
            out.push(RainbowFace {
                vertex_indices: face.clone(),
                colors_used: face.iter().map(|&u| config.color_of(u)).collect(),
            });
            if face.len() < max_size {
                extend(config, v + 1, max_size, face, colors_in_face, out);
            }
            face.pop();
            colors_in_face[c] = false;
        }
    }
    extend(
        config,
        0,
        max_size.min(n.max(1)),
        &mut face,
        &mut colors_in_face,
        &mut out,
    );
    out
}

/// Outcome of a bounded search.
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(RainbowPartition, TverbergWitness),
    Exhausted,
    TimedOut,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Worker threads for distributing first-face subtrees (1 = sequential).
    pub workers: usize,
    /// Wall-clock cutoff for this search.
    pub deadline: Option<Instant>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: 1,
            deadline: None,
        }
    }
}

/// The lexicographically first r-tuple of pairwise disjoint rainbow faces
/// whose convex hulls share a point, with its witness; `None` iff no such
/// tuple exists. Exhaustive; face size is capped at `d+1` (a common point
/// of the hulls is already a convex combination of at most `d+1` vertices
/// of each face, so larger faces add nothing).
///
/// ```
/// use tvb_core::geometry::{ColoredConfiguration, RationalPoint};
/// use tvb_core::search::find_colored_tverberg;
///
/// // two crossing segments, one endpoint of each per class
/// let config = ColoredConfiguration::new(
///     2,
///     vec![
///         RationalPoint::from_integers(&[0, 0]),
///         RationalPoint::from_integers(&[2, 2]),
///         RationalPoint::from_integers(&[0, 2]),
///         RationalPoint::from_integers(&[2, 0]),
///     ],
///     vec![vec![0, 2], vec![1, 3]],
/// )
/// .unwrap();
/// let (partition, witness) = find_colored_tverberg(&config, 2).unwrap().unwrap();
/// assert_eq!(partition.faces[0].vertex_indices, vec![0, 1]);
/// assert_eq!(witness.common_point, RationalPoint::from_integers(&[1, 1]));
/// ```
pub fn find_colored_tverberg(
    config: &ColoredConfiguration,
    r: u64,
) -> Result<Option<(RainbowPartition, TverbergWitness)>, SearchError> {
    match find_colored_tverberg_with(config, r, &SearchOptions::default())? {
        SearchOutcome::Found(partition, witness) => Ok(Some((partition, witness))),
        SearchOutcome::Exhausted => Ok(None),
        SearchOutcome::TimedOut => unreachable!("no deadline was set"),
    }
}

pub fn find_colored_tverberg_with(
    config: &ColoredConfiguration,
    r: u64,
    options: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    if r < 2 {
        return Err(SearchError::MultiplicityTooSmall(r));
    }
    let ctx = SearchCtx {
        config,
        r: r as usize,
        cap: config.dimension() + 1,
        deadline: options.deadline,
    };
    if options.workers <= 1 {
        let mut state = SearchState::fresh(config);
        return Ok(match ctx.extend_tuple(&mut state) {
            Flow::Found(lists, witness) => {
                SearchOutcome::Found(RainbowPartition::from_index_lists(config, &lists), witness)
            }
            Flow::Continue => SearchOutcome::Exhausted,
            Flow::TimedOut => SearchOutcome::TimedOut,
        });
    }

    // Parallel mode: each first face roots an independent subtree, searched
    // sequentially; chunks are joined and scanned in canonical order, so
    // the reduced result equals the sequential one.
    let first_faces = enumerate_rainbow_faces(config, ctx.cap);
    for chunk in first_faces.chunks(options.workers) {
        let flows: Vec<Flow> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|face| {
                    let ctx = &ctx;
                    scope.spawn(move || {
                        let mut state = SearchState::fresh(ctx.config);
                        ctx.commit_face(&mut state, &face.vertex_indices)
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("search worker"))
                .collect()
        });
        for flow in flows {
            match flow {
                Flow::Continue => {}
                Flow::Found(lists, witness) => {
                    return Ok(SearchOutcome::Found(
                        RainbowPartition::from_index_lists(config, &lists),
                        witness,
                    ))
                }
                Flow::TimedOut => return Ok(SearchOutcome::TimedOut),
            }
        }
    }
    Ok(SearchOutcome::Exhausted)
}

/// Uncolored variant: every point is its own color class, so faces are
/// arbitrary disjoint nonempty subsets of size at most `d+1`.
pub fn find_uncolored_tverberg(
    points: &[RationalPoint],
    dimension: usize,
    r: u64,
) -> Result<Option<(RainbowPartition, TverbergWitness)>, SearchError> {
    let colors: Vec<Vec<usize>> = (0..points.len()).map(|i| vec![i]).collect();
    let config = ColoredConfiguration::new(dimension, points.to_vec(), colors)
        .expect("singleton classes always partition");
    find_colored_tverberg(&config, r)
}

enum Flow {
    Continue,
    Found(Vec<Vec<usize>>, TverbergWitness),
    TimedOut,
}

struct SearchCtx<'a> {
    config: &'a ColoredConfiguration,
    r: usize,
    cap: usize,
    deadline: Option<Instant>,
}

struct SearchState {
    chosen: Vec<Vec<usize>>,
    used: Vec<bool>,
    /// Intersection of the chosen faces' bounding boxes, one entry per
    /// level: (componentwise max of minima, componentwise min of maxima).
    boxes: Vec<(Vec<Rational>, Vec<Rational>)>,
}

impl SearchState {
    fn fresh(config: &ColoredConfiguration) -> Self {
        SearchState {
            chosen: Vec::new(),
            used: vec![false; config.num_points()],
            boxes: Vec::new(),
        }
    }
}

impl SearchCtx<'_> {
    /// Chooses the face at level `state.chosen.len()`, iterating candidates
    /// in lexicographic order with the min-vertex ladder that makes the
    /// canonical encoding unique.
    fn extend_tuple(&self, state: &mut SearchState) -> Flow {
        let start = state.chosen.last().map_or(0, |f| f[0] + 1);
        let mut face = Vec::with_capacity(self.cap);
        let mut colors_in_face = vec![false; self.config.num_colors()];
        self.try_faces(state, start, &mut face, &mut colors_in_face)
    }

    fn try_faces(
        &self,
        state: &mut SearchState,
        from: usize,
        face: &mut Vec<usize>,
        colors_in_face: &mut [bool],
    ) -> Flow {
        for v in from..self.config.num_points() {
            if state.used[v] {
                continue;
            }
            let c = self.config.color_of(v);
            if colors_in_face[c] {
                continue;
            }
            face.push(v);
            colors_in_face[c] = true;
            match self.commit_face(state, face) {
                Flow::Continue => {}
                other => {
                    face.pop();
                    colors_in_face[c] = false;
                    return other;
                }
            }
            if face.len() < self.cap {
                match self.try_faces(state, v + 1, face, colors_in_face) {
                    Flow::Continue => {}
                    other => {
                        face.pop();
                        colors_in_face[c] = false;
                        return other;
                    }
                }
            }
            face.pop();
            colors_in_face[c] = false;
        }
        Flow::Continue
    }

    /// Treats the current partial face as the face for this level: prunes
    /// by bounding boxes, then either runs the hull intersection LP (last
    /// level) or recurses into the next level.
    fn commit_face(&self, state: &mut SearchState, face: &[usize]) -> Flow {
        if let Some(deadline) = self.deadline {
            if Instant::now() >= deadline {
                return Flow::TimedOut;
            }
        }
        let dim = self.config.dimension();
        let mut lo: Vec<Rational> = self.config.point(face[0]).coords().to_vec();
        let mut hi = lo.clone();
        for &v in &face[1..] {
            for t in 0..dim {
                let c = self.config.point(v).coord(t);
                if *c < lo[t] {
                    lo[t] = c.clone();
                }
                if *c > hi[t] {
                    hi[t] = c.clone();
                }
            }
        }
        if let Some((plo, phi)) = state.boxes.last() {
            for t in 0..dim {
                if plo[t] > lo[t] {
                    lo[t] = plo[t].clone();
                }
                if phi[t] < hi[t] {
                    hi[t] = phi[t].clone();
                }
            }
        }
        if (0..dim).any(|t| lo[t] > hi[t]) {
            return Flow::Continue;
        }

        if state.chosen.len() + 1 == self.r {
            let mut faces: Vec<Vec<RationalPoint>> = state
                .chosen
                .iter()
                .map(|f| f.iter().map(|&v| self.config.point(v).clone()).collect())
                .collect();
            faces.push(face.iter().map(|&v| self.config.point(v).clone()).collect());
            let feasible = common_point_feasible(&faces)
                .expect("configuration invariants make faces well-formed");
            return match feasible {
                Some(witness) => {
                    let mut lists = state.chosen.clone();
                    lists.push(face.to_vec());
                    Flow::Found(lists, witness)
                }
                None => Flow::Continue,
            };
        }

        state.chosen.push(face.to_vec());
        for &v in face {
            state.used[v] = true;
        }
        state.boxes.push((lo, hi));
        let flow = self.extend_tuple(state);
        state.boxes.pop();
        for &v in face {
            state.used[v] = false;
        }
        state.chosen.pop();
        flow
    }
}

/// Theorem families a verification campaign can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremFamily {
    /// `d+1` classes, all of size at least `2r-1`, `r` a prime power.
    #[serde(rename = "zv")]
    Zv,
    /// One class at least `2r-1`, the other `d` at least `2r-4`.
    #[serde(rename = "zv-relaxed")]
    ZvRelaxed,
    /// Deficit-vector relaxation of the class sizes.
    #[serde(rename = "zv-flex")]
    ZvFlex,
    /// `r` prime, every class of size at most `r-1`, at least
    /// `(d+1)(r-1)+1` points.
    #[serde(rename = "optimal")]
    Optimal,
    /// `r+1` prime, `d+1` classes of size exactly `r`.
    #[serde(rename = "bl")]
    BaranyLarman,
    /// Uncolored: singleton classes, at least `(r-1)(d+1)+1` points.
    #[serde(rename = "tverberg")]
    Tverberg,
}

impl TheoremFamily {
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "zv" => Some(TheoremFamily::Zv),
            "zv-relaxed" => Some(TheoremFamily::ZvRelaxed),
            "zv-flex" => Some(TheoremFamily::ZvFlex),
            "optimal" => Some(TheoremFamily::Optimal),
            "bl" => Some(TheoremFamily::BaranyLarman),
            "tverberg" => Some(TheoremFamily::Tverberg),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TheoremFamily::Zv => "zv",
            TheoremFamily::ZvRelaxed => "zv-relaxed",
            TheoremFamily::ZvFlex => "zv-flex",
            TheoremFamily::Optimal => "optimal",
            TheoremFamily::BaranyLarman => "bl",
            TheoremFamily::Tverberg => "tverberg",
        }
    }
}

/// Checks that `(d, r, cards)` satisfies the hypothesis of the tagged
/// theorem family.
pub fn validate_hypothesis(
    theorem: TheoremFamily,
    d: u64,
    r: u64,
    cards: &[usize],
) -> Result<(), SearchError> {
    if r < 2 {
        return Err(SearchError::MultiplicityTooSmall(r));
    }
    let fail = |reason: String| SearchError::HypothesisMismatch {
        theorem: theorem.name().to_string(),
        cards: cards.to_vec(),
        reason,
    };
    let prime_power = criterion::is_prime_power(r).expect("r >= 2");
    let is_prime = matches!(prime_power, Some(PrimePower { exponent: 1, .. }));
    let m = cards.len() as u64;
    let total: usize = cards.iter().sum();
    match theorem {
        TheoremFamily::Zv => {
            if prime_power.is_none() {
                return Err(fail(format!("r = {r} is not a prime power")));
            }
            if m != d + 1 {
                return Err(fail(format!("{m} classes, expected d+1 = {}", d + 1)));
            }
            let bound = (2 * r - 1) as usize;
            if let Some(c) = cards.iter().find(|&&c| c < bound) {
                return Err(fail(format!("class of size {c} is below 2r-1 = {bound}")));
            }
        }
        TheoremFamily::ZvRelaxed => {
            if prime_power.is_none() {
                return Err(fail(format!("r = {r} is not a prime power")));
            }
            let as_u64: Vec<u64> = cards.iter().map(|&c| c as u64).collect();
            if !criterion::matches_zv_relaxed(d, r, &as_u64) {
                return Err(fail(
                    "no class reaches 2r-1 with the rest at 2r-4".to_string(),
                ));
            }
        }
        TheoremFamily::ZvFlex => {
            if prime_power.is_none() {
                return Err(fail(format!("r = {r} is not a prime power")));
            }
            let as_u64: Vec<u64> = cards.iter().map(|&c| c as u64).collect();
            if criterion::match_deficit_vector(d, r, &as_u64).is_none() {
                return Err(fail("no admissible deficit vector".to_string()));
            }
        }
        TheoremFamily::Optimal => {
            if !is_prime {
                return Err(fail(format!("r = {r} is not prime")));
            }
            let bound = (r - 1) as usize;
            if let Some(c) = cards.iter().find(|&&c| c > bound) {
                return Err(fail(format!("class of size {c} exceeds r-1 = {bound}")));
            }
            let needed = ((d + 1) * (r - 1) + 1) as usize;
            if total < needed {
                return Err(fail(format!("{total} points, need at least {needed}")));
            }
        }
        TheoremFamily::BaranyLarman => {
            if !crate::homology::is_prime(r + 1) {
                return Err(fail(format!("r+1 = {} is not prime", r + 1)));
            }
            if m != d + 1 {
                return Err(fail(format!("{m} classes, expected d+1 = {}", d + 1)));
            }
            if let Some(c) = cards.iter().find(|&&c| c != r as usize) {
                return Err(fail(format!("class of size {c}, expected exactly r = {r}")));
            }
        }
        TheoremFamily::Tverberg => {
            if let Some(c) = cards.iter().find(|&&c| c != 1) {
                return Err(fail(format!("class of size {c}, expected singletons")));
            }
            let needed = ((r - 1) * (d + 1) + 1) as usize;
            if total < needed {
                return Err(fail(format!("{total} points, need at least {needed}")));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureRecord {
    pub seed: u64,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub configuration: Option<ColoredConfiguration>,
}

/// Result of a randomized campaign over seeded general-position
/// configurations.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub theorem: Option<TheoremFamily>,
    pub dimension: u64,
    pub multiplicity: u64,
    pub cards: Vec<usize>,
    pub seed_base: u64,
    pub instances: u64,
    pub found: u64,
    pub failures: Vec<FailureRecord>,
    /// Seeds whose trial hit the wall-clock budget; a timeout is a resource
    /// statement, never a mathematical failure.
    pub timeouts: Vec<u64>,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone)]
pub struct CampaignOptions {
    pub workers: usize,
    pub trial_timeout: Duration,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        CampaignOptions {
            workers: 1,
            trial_timeout: Duration::from_secs(60),
        }
    }
}

/// Runs `trials` seeded instances of the tagged theorem after validating
/// its hypothesis; for guaranteed instances the expected failure count is
/// zero.
pub fn verify_theorem_instance(
    theorem: TheoremFamily,
    d: u64,
    r: u64,
    cards: &[usize],
    trials: u64,
    seed_base: u64,
    options: &CampaignOptions,
) -> Result<VerificationReport, SearchError> {
    validate_hypothesis(theorem, d, r, cards)?;
    let mut report = run_campaign(d, r, cards, trials, seed_base, options, false)?;
    report.theorem = Some(theorem);
    Ok(report)
}

/// Exploratory campaign below any theorem threshold: failures are data,
/// recorded with the full configuration for inspection.
pub fn hunt_counterexample(
    d: u64,
    r: u64,
    cards: &[usize],
    trials: u64,
    seed_base: u64,
    options: &CampaignOptions,
) -> Result<VerificationReport, SearchError> {
    run_campaign(d, r, cards, trials, seed_base, options, true)
}

fn run_campaign(
    d: u64,
    r: u64,
    cards: &[usize],
    trials: u64,
    seed_base: u64,
    options: &CampaignOptions,
    keep_configurations: bool,
) -> Result<VerificationReport, SearchError> {
    if r < 2 {
        return Err(SearchError::MultiplicityTooSmall(r));
    }
    let started = Instant::now();
    let run_trial = |index: u64| -> (u64, SearchOutcome, Option<ColoredConfiguration>) {
        let seed = seed_base + index;
        let config = random_configuration(d as usize, cards, seed);
        let search_options = SearchOptions {
            workers: 1,
            deadline: Some(Instant::now() + options.trial_timeout),
        };
        let outcome = find_colored_tverberg_with(&config, r, &search_options)
            .expect("multiplicity checked above");
        (seed, outcome, Some(config))
    };

    let workers = options.workers.max(1).min(trials.max(1) as usize);
    let mut outcomes: Vec<(u64, SearchOutcome, Option<ColoredConfiguration>)> = if workers <= 1 {
        (0..trials).map(run_trial).collect()
    } else {
        let run_trial = &run_trial;
        let mut all: Vec<(u64, SearchOutcome, Option<ColoredConfiguration>)> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        scope.spawn(move || {
                            (w as u64..trials)
                                .step_by(workers)
                                .map(run_trial)
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().expect("campaign worker"))
                    .collect()
            });
        all.sort_by_key(|(seed, _, _)| *seed);
        all
    };

    let mut found = 0;
    let mut failures = Vec::new();
    let mut timeouts = Vec::new();
    for (seed, outcome, config) in outcomes.drain(..) {
        match outcome {
            SearchOutcome::Found(partition, witness) => {
                let config = config.expect("campaign keeps its configuration");
                debug_assert!(verify_witness(
                    &partition
                        .faces
                        .iter()
                        .map(|f| f.points(&config))
                        .collect::<Vec<_>>(),
                    &witness
                ));
                found += 1;
            }
            SearchOutcome::Exhausted => {
                let config = config.expect("campaign keeps its configuration");
                failures.push(FailureRecord {
                    seed,
                    digest: config.digest(),
                    configuration: keep_configurations.then_some(config),
                });
            }
            SearchOutcome::TimedOut => timeouts.push(seed),
        }
    }
    Ok(VerificationReport {
        theorem: None,
        dimension: d,
        multiplicity: r,
        cards: cards.to_vec(),
        seed_base,
        instances: trials,
        found,
        failures,
        timeouts,
        elapsed_ms: started.elapsed().as_millis(),
    })
}
