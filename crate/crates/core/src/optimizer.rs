//! Binary sine cosine search loop.
//!
//! Every agent keeps a continuous position and a bit mask derived from it.
//! Each iteration moves every coordinate towards or around the destination
//! (the best position seen so far) with the sine cosine update, pushes the
//! new coordinate through the transfer function of the chosen
//! [`TransferKind`] to update the corresponding bit, and rescores the
//! population. The destination is replaced only by a strictly fitter agent,
//! after the whole population has been scored.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binarize::TransferKind;
use crate::error::{Error, Result};
use crate::knn::Mask;
use crate::objective::{Evaluation, Objective};
use crate::sca::{r1_schedule, sca_update_dim, ScaConfig, StepRandoms};

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub position: Vec<f64>,
    pub mask: Mask,
    pub fitness: f64,
    pub accuracy: f64,
    pub evaluated: bool,
}

impl Agent {
    pub fn new(position: Vec<f64>, mask: Mask) -> Self {
        assert_eq!(position.len(), mask.len(), "position and mask lengths differ");
        Self { position, mask, fitness: f64::INFINITY, accuracy: 0.0, evaluated: false }
    }

    fn record(&mut self, e: Evaluation) {
        self.fitness = e.fitness;
        self.accuracy = e.accuracy;
        self.evaluated = true;
    }
}

/// Snapshot of the best agent found so far.
#[derive(Debug, Clone, PartialEq)]
pub struct Destination {
    pub position: Vec<f64>,
    pub mask: Mask,
    pub fitness: f64,
    pub accuracy: f64,
    pub found_at: usize,
}

impl Destination {
    /// Fittest evaluated agent; ties go to the lowest index.
    pub fn best_of(population: &[Agent], iteration: usize) -> Option<Self> {
        population
            .iter()
            .filter(|a| a.evaluated)
            .reduce(|best, a| if a.fitness < best.fitness { a } else { best })
            .map(|a| Self {
                position: a.position.clone(),
                mask: a.mask.clone(),
                fitness: a.fitness,
                accuracy: a.accuracy,
                found_at: iteration,
            })
    }
}

/// Outcome of one seeded optimization run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub best_mask: Mask,
    pub best_accuracy: f64,
    pub best_fitness: f64,
    pub n_selected: usize,
    /// Destination fitness after each iteration.
    pub convergence: Vec<f64>,
    pub run_seed: u64,
    pub wall_time: Duration,
}

/// Equality ignores `wall_time`.
impl PartialEq for RunRecord {
    fn eq(&self, other: &Self) -> bool {
        self.best_mask == other.best_mask
            && self.best_accuracy.to_bits() == other.best_accuracy.to_bits()
            && self.best_fitness.to_bits() == other.best_fitness.to_bits()
            && self.n_selected == other.n_selected
            && self.convergence.len() == other.convergence.len()
            && self
                .convergence
                .iter()
                .zip(&other.convergence)
                .all(|(a, b)| a.to_bits() == b.to_bits())
            && self.run_seed == other.run_seed
    }
}

/// Sets one uniformly chosen bit when the mask is empty.
pub fn repair_mask<R: Rng + ?Sized>(mut mask: Mask, rng: &mut R) -> Mask {
    if mask.popcount() == 0 && !mask.is_empty() {
        let d = rng.gen_range(0..mask.len());
        mask.set(d, true);
    }
    mask
}

/// Random population: coordinates uniform on [-1, 1], bits fair coin flips.
pub fn initialize<R: Rng + ?Sized>(dim: usize, config: &ScaConfig, rng: &mut R) -> Result<Vec<Agent>> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    config.validate()?;
    Ok((0..config.population_size)
        .map(|_| {
            let position: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let mask = Mask::new((0..dim).map(|_| rng.gen_bool(0.5)).collect());
            Agent::new(position, repair_mask(mask, rng))
        })
        .collect())
}

pub fn evaluate_population<O: Objective + ?Sized>(population: &mut [Agent], objective: &mut O) -> Result<()> {
    for agent in population.iter_mut() {
        if agent.mask.popcount() == 0 {
            return Err(Error::EmptySubset);
        }
        let e = objective.evaluate(&agent.mask)?;
        if !e.fitness.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "objective returned non-finite fitness {}",
                e.fitness
            )));
        }
        agent.record(e);
    }
    Ok(())
}

/// Moves every agent's position with the sine cosine update and rebuilds
/// its mask through `kind`, without evaluating anything.
pub fn move_population<R: Rng + ?Sized>(
    population: &mut [Agent],
    destination: &Destination,
    r1: f64,
    kind: TransferKind,
    rng: &mut R,
) {
    for agent in population.iter_mut() {
        for d in 0..agent.position.len() {
            let r = StepRandoms::draw(rng);
            let x = sca_update_dim(agent.position[d], destination.position[d], r1, r);
            agent.position[d] = x;
            let bit = kind.next_bit(x, agent.mask.get(d), rng);
            agent.mask.set(d, bit);
        }
        agent.mask = repair_mask(std::mem::take(&mut agent.mask), rng);
        agent.evaluated = false;
    }
}

/// One iteration at index `t` (1-based). Returns whether the destination
/// was replaced.
#[allow(clippy::too_many_arguments)]
pub fn step<O: Objective + ?Sized, R: Rng + ?Sized>(
    population: &mut [Agent],
    destination: &mut Destination,
    t: usize,
    config: &ScaConfig,
    kind: TransferKind,
    objective: &mut O,
    rng: &mut R,
) -> Result<bool> {
    let r1 = r1_schedule(t, config.max_iterations, config.a)?;
    move_population(population, destination, r1, kind, rng);
    evaluate_population(population, objective)?;
    match Destination::best_of(population, t) {
        Some(best) if best.fitness < destination.fitness => {
            *destination = best;
            Ok(true)
        }
        _ => Ok(false),
    }
}

/// Full seeded run: initialize, score, then `max_iterations` steps.
pub fn optimize<O: Objective + ?Sized>(
    dim: usize,
    config: &ScaConfig,
    kind: TransferKind,
    objective: &mut O,
    run_seed: u64,
) -> Result<RunRecord> {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    let mut population = initialize(dim, config, &mut rng)?;
    evaluate_population(&mut population, objective)?;
    let mut destination =
        Destination::best_of(&population, 0).expect("population is non-empty and evaluated");
    let mut convergence = Vec::with_capacity(config.max_iterations);
    for t in 1..=config.max_iterations {
        step(&mut population, &mut destination, t, config, kind, objective, &mut rng)?;
        convergence.push(destination.fitness);
    }
    Ok(RunRecord {
        n_selected: destination.mask.popcount(),
        best_mask: destination.mask,
        best_accuracy: destination.accuracy,
        best_fitness: destination.fitness,
        convergence,
        run_seed,
        wall_time: started.elapsed(),
    })
}

/// Fraction of zero bits; minimized by the all-ones mask.
pub fn one_max(mask: &Mask) -> Result<Evaluation> {
    let zeros = mask.len() - mask.popcount();
    let fitness = zeros as f64 / mask.len() as f64;
    Ok(Evaluation { fitness, accuracy: 1.0 - fitness, n_selected: mask.popcount() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(t: usize, pop: usize) -> ScaConfig {
        ScaConfig::new(2.0, t, pop).unwrap()
    }

    #[test]
    fn initialize_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pop = initialize(8, &config(10, 20), &mut rng).unwrap();
        assert_eq!(pop.len(), 20);
        for a in &pop {
            assert!(a.mask.popcount() >= 1);
            assert!(a.position.iter().all(|x| (-1.0..=1.0).contains(x)));
            assert!(!a.evaluated);
        }
        let mut again = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(pop, initialize(8, &config(10, 20), &mut again).unwrap());
        let single = initialize(1, &config(10, 20), &mut rng).unwrap();
        assert!(single.iter().all(|a| a.mask == Mask::ones(1)));
        assert!(initialize(0, &config(10, 20), &mut rng).is_err());
    }

    #[test]
    fn repair_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let m = Mask::new(vec![true, false, true]);
        assert_eq!(repair_mask(m.clone(), &mut rng), m);
        let mut counts = [0usize; 3];
        let n = 10_000;
        for _ in 0..n {
            let r = repair_mask(Mask::zeros(3), &mut rng);
            assert_eq!(r.popcount(), 1);
            counts[r.selected().next().unwrap()] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 1.0 / 3.0).abs() < 0.02);
        }
    }

    #[test]
    fn constant_objective_is_flat() {
        let mut obj = |m: &Mask| Ok(Evaluation { fitness: 0.5, accuracy: 0.5, n_selected: m.popcount() });
        let rec = optimize(6, &config(25, 5), TransferKind::SShaped, &mut obj, 1).unwrap();
        assert_eq!(rec.best_fitness, 0.5);
        assert_eq!(rec.convergence, vec![0.5; 25]);
    }

    #[test]
    fn zero_iterations_reports_best_initial_agent() {
        let cfg = ScaConfig { a: 2.0, max_iterations: 0, population_size: 6 };
        let rec = optimize(7, &cfg, TransferKind::VShaped, &mut one_max, 9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut pop = initialize(7, &cfg, &mut rng).unwrap();
        evaluate_population(&mut pop, &mut one_max).unwrap();
        let best = Destination::best_of(&pop, 0).unwrap();
        assert!(rec.convergence.is_empty());
        assert_eq!(rec.best_mask, best.mask);
        assert_eq!(rec.best_fitness, best.fitness);
    }

    #[test]
    fn selection_keeps_incumbent_unless_strictly_better() {
        let cfg = config(10, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut pop = initialize(5, &cfg, &mut rng).unwrap();
        let incumbent = Destination {
            position: vec![0.3; 5],
            mask: Mask::ones(5),
            fitness: -1.0,
            accuracy: 1.0,
            found_at: 0,
        };
        let mut dest = incumbent.clone();
        let improved = step(&mut pop, &mut dest, 1, &cfg, TransferKind::SShaped, &mut one_max, &mut rng).unwrap();
        assert!(!improved);
        assert_eq!(dest, incumbent);

        let mut dest = Destination { fitness: 2.0, ..incumbent.clone() };
        let improved = step(&mut pop, &mut dest, 2, &cfg, TransferKind::SShaped, &mut one_max, &mut rng).unwrap();
        assert!(improved);
        assert_eq!(dest.found_at, 2);
        assert!(dest.fitness <= 1.0);
        let best = pop.iter().map(|a| a.fitness).fold(f64::INFINITY, f64::min);
        assert_eq!(dest.fitness, best);
    }

    #[test]
    fn final_iteration_freezes_positions() {
        let cfg = config(10, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut pop = initialize(6, &cfg, &mut rng).unwrap();
        evaluate_population(&mut pop, &mut one_max).unwrap();
        let mut dest = Destination::best_of(&pop, 0).unwrap();
        let before_fitness = dest.fitness;
        let before: Vec<Vec<f64>> = pop.iter().map(|a| a.position.clone()).collect();
        step(&mut pop, &mut dest, 10, &cfg, TransferKind::VShaped, &mut one_max, &mut rng).unwrap();
        let after: Vec<Vec<f64>> = pop.iter().map(|a| a.position.clone()).collect();
        assert_eq!(before, after);
        assert!(dest.fitness <= before_fitness);
    }

    #[test]
    fn s_rule_ignores_previous_bits() {
        let cfg = config(10, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let pop = initialize(9, &cfg, &mut rng).unwrap();
        let dest = Destination {
            position: vec![0.2; 9],
            mask: Mask::ones(9),
            fitness: 0.0,
            accuracy: 1.0,
            found_at: 0,
        };
        let mut a = pop.clone();
        let mut b: Vec<Agent> = pop
            .iter()
            .map(|ag| {
                let inverted: Vec<bool> = ag.mask.bits().iter().map(|&x| !x).collect();
                Agent::new(ag.position.clone(), Mask::new(inverted))
            })
            .collect();
        move_population(&mut a, &dest, 1.2, TransferKind::SShaped, &mut ChaCha8Rng::seed_from_u64(77));
        move_population(&mut b, &dest, 1.2, TransferKind::SShaped, &mut ChaCha8Rng::seed_from_u64(77));
        // identical new bits imply identical repairs, so the streams stay aligned
        assert_eq!(a, b);
    }

    #[test]
    fn v_rule_with_zero_positions_keeps_masks() {
        let cfg = config(50, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut pop: Vec<Agent> = initialize(7, &cfg, &mut rng)
            .unwrap()
            .into_iter()
            .map(|a| Agent::new(vec![0.0; 7], a.mask))
            .collect();
        let masks: Vec<Mask> = pop.iter().map(|a| a.mask.clone()).collect();
        evaluate_population(&mut pop, &mut one_max).unwrap();
        let mut dest = Destination::best_of(&pop, 0).unwrap();
        for t in 1..=50 {
            step(&mut pop, &mut dest, t, &cfg, TransferKind::VShaped, &mut one_max, &mut rng).unwrap();
            assert_eq!(pop.iter().map(|a| a.mask.clone()).collect::<Vec<_>>(), masks);
        }
    }

    #[test]
    fn runs_are_reproducible_and_monotone() {
        for kind in [TransferKind::SShaped, TransferKind::VShaped] {
            let a = optimize(10, &config(40, 10), kind, &mut one_max, 5).unwrap();
            let b = optimize(10, &config(40, 10), kind, &mut one_max, 5).unwrap();
            assert_eq!(a, b);
            assert!(a.convergence.windows(2).all(|w| w[1] <= w[0]));
            assert_eq!(a.n_selected, a.best_mask.popcount());
        }
    }

    #[test]
    fn objective_errors_propagate() {
        let mut failing = |_: &Mask| -> Result<Evaluation> { Err(Error::EmptySubset) };
        assert!(optimize(3, &config(5, 2), TransferKind::SShaped, &mut failing, 0).is_err());
    }
}
