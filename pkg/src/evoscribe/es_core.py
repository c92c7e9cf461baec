"""Self-adaptive (mu/rho + lambda) evolution strategy over real pitch vectors.

Each individual carries its own mutation step size sigma. Offspring are
built by intermediate recombination of rho uniformly chosen parents
(component-wise mean of genes, geometric mean of sigmas) followed by
Gaussian mutation scaled by sigma. A mutation counts as a success when
the offspring scores strictly better than its primary (first) parent;
successes grow sigma by the change rate alpha, failures shrink it by
alpha ** -0.25, the classical one-fifth-rule step ratio. Selection is
deterministic truncation, either plus (parents and offspring compete) or
comma (offspring only). Costs are minimized throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "ArityMismatch",
    "EsConfig",
    "EvolutionTrace",
    "GenerationRecord",
    "Individual",
    "InsufficientOffspring",
    "InvalidConfig",
    "adapt_sigma",
    "evolve",
    "initialize_population",
    "mutate",
    "recombine",
    "select",
]

PER_OFFSPRING = "per-offspring"
ONE_FIFTH = "one-fifth"


class InvalidConfig(ValueError):
    """Strategy parameters are inconsistent."""


class ArityMismatch(ValueError):
    """Recombination called with an unusable parent set."""


class InsufficientOffspring(ValueError):
    """Comma selection needs at least mu offspring."""


@dataclass
class Individual:
    """A candidate pitch vector, its step size, and its cost (None = unevaluated)."""

    genes: np.ndarray
    sigma: float
    fitness: float | None = None


@dataclass(frozen=True)
class EsConfig:
    """Strategy parameters.

    Defaults follow the reference setup for piano-range chord search:
    100 parents, 80 offspring, pairwise intermediate recombination, step
    sizes initialized uniformly in [0.005, 0.05] semitones, genes bounded
    to the piano range [21, 108], at most 300 generations, plus selection
    (comma is impossible at lambda < mu). sigma_rule picks how step sizes
    react to success: "per-offspring" adapts each child by its own
    parent-relative outcome; "one-fifth" applies the windowed success-rate
    rule to the whole population, with the rate measured over the last
    success_window generations. stagnation_window, when set, stops a run
    after that many generations without any improvement of the best cost.
    """

    mu: int = 100
    lambda_: int = 80
    rho: int = 2
    alpha: float = 1.1
    sigma_init: tuple[float, float] = (0.005, 0.05)
    max_generations: int = 300
    bounds: tuple[float, float] = (21.0, 108.0)
    selection: str = "plus"
    sigma_floor: float = 1e-4
    sigma_ceiling: float | None = None
    stagnation_window: int | None = None
    sigma_rule: str = PER_OFFSPRING
    success_window: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.mu < 1 or self.lambda_ < 1:
            raise InvalidConfig(f"mu and lambda must be >= 1, got {self.mu}, {self.lambda_}")
        if not (1 <= self.rho <= self.mu):
            raise InvalidConfig(f"rho must be in [1, mu], got {self.rho}")
        if not (1.0 < self.alpha <= 2.0):
            raise InvalidConfig(f"alpha must be in (1, 2], got {self.alpha}")
        low, high = self.sigma_init
        if not (0.0 < low <= high):
            raise InvalidConfig(f"bad sigma_init range [{low}, {high}]")
        if self.bounds[0] >= self.bounds[1]:
            raise InvalidConfig(f"bad bounds {self.bounds}")
        if self.selection not in ("plus", "comma"):
            raise InvalidConfig(f"selection must be 'plus' or 'comma', got {self.selection!r}")
        if self.selection == "comma" and self.lambda_ < self.mu:
            raise InvalidConfig("comma selection requires lambda >= mu")
        if self.sigma_floor <= 0:
            raise InvalidConfig(f"sigma_floor must be positive, got {self.sigma_floor}")
        if self.sigma_rule not in (PER_OFFSPRING, ONE_FIFTH):
            raise InvalidConfig(f"unknown sigma_rule {self.sigma_rule!r}")
        if self.max_generations < 0:
            raise InvalidConfig("max_generations must be >= 0")
        if self.sigma_ceiling is None:
            # Half the search-space width: steps larger than this are never useful.
            object.__setattr__(self, "sigma_ceiling", (self.bounds[1] - self.bounds[0]) / 2.0)
        if self.sigma_ceiling <= self.sigma_floor:
            raise InvalidConfig("sigma_ceiling must exceed sigma_floor")


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_cost: float
    mean_cost: float
    best_genes: np.ndarray
    best_sigma: float


@dataclass
class EvolutionTrace:
    """Per-generation population statistics, generation 0 = initial parents."""

    records: list[GenerationRecord] = field(default_factory=list)

    @property
    def generations_run(self) -> int:
        return self.records[-1].generation

    def best_costs(self) -> list[float]:
        return [r.best_cost for r in self.records]


def initialize_population(
    config: EsConfig, n_genes: int, rng: np.random.Generator
) -> list[Individual]:
    """mu individuals with uniform genes in bounds and uniform sigma in sigma_init."""
    if n_genes < 1:
        raise InvalidConfig(f"n_genes must be >= 1, got {n_genes}")
    low, high = config.bounds
    s_low, s_high = config.sigma_init
    return [
        Individual(
            genes=rng.uniform(low, high, n_genes),
            sigma=float(rng.uniform(s_low, s_high)),
        )
        for _ in range(config.mu)
    ]


def mutate(parent: Individual, config: EsConfig, rng: np.random.Generator) -> Individual:
    """Add sigma-scaled standard normal noise to every gene, clamped to bounds."""
    genes = parent.genes + parent.sigma * rng.standard_normal(len(parent.genes))
    np.clip(genes, config.bounds[0], config.bounds[1], out=genes)
    return Individual(genes=genes, sigma=parent.sigma)


def adapt_sigma(sigma: float, success: bool, config: EsConfig) -> float:
    """Grow sigma by alpha on success, shrink by alpha ** -0.25 on failure."""
    factor = config.alpha if success else config.alpha ** -0.25
    return float(np.clip(sigma * factor, config.sigma_floor, config.sigma_ceiling))


def recombine(parents: Sequence[Individual], rng: np.random.Generator | None = None) -> Individual:
    """Intermediate recombination: mean genes, geometric-mean sigma."""
    if not parents:
        raise ArityMismatch("need at least one parent")
    n = len(parents[0].genes)
    if any(len(p.genes) != n for p in parents):
        raise ArityMismatch("parents disagree on gene count")
    genes = np.mean([p.genes for p in parents], axis=0)
    sigma = float(np.exp(np.mean(np.log([p.sigma for p in parents]))))
    return Individual(genes=genes, sigma=sigma)


def select(
    parents: Sequence[Individual], offspring: Sequence[Individual], config: EsConfig
) -> list[Individual]:
    """Deterministic truncation to the mu lowest costs.

    Plus selection pools parents and offspring; comma keeps offspring
    only. The sort is stable, so ties go to the earlier-created
    candidate.
    """
    if config.selection == "comma":
        if len(offspring) < config.mu:
            raise InsufficientOffspring(
                f"comma selection needs >= {config.mu} offspring, got {len(offspring)}"
            )
        pool = list(offspring)
    else:
        pool = list(parents) + list(offspring)
    if any(ind.fitness is None for ind in pool):
        raise ValueError("selection requires every candidate to be evaluated")
    return sorted(pool, key=lambda ind: ind.fitness)[: config.mu]


def _record(generation: int, population: Sequence[Individual]) -> GenerationRecord:
    best = min(population, key=lambda ind: ind.fitness)
    return GenerationRecord(
        generation=generation,
        best_cost=float(best.fitness),
        mean_cost=float(np.mean([ind.fitness for ind in population])),
        best_genes=best.genes.copy(),
        best_sigma=best.sigma,
    )


def _snapshot(ind: Individual) -> Individual:
    return Individual(genes=ind.genes.copy(), sigma=ind.sigma, fitness=ind.fitness)


def evolve(
    config: EsConfig,
    n_genes: int,
    cost_fn: Callable[[np.ndarray], float],
    rng: np.random.Generator | None = None,
) -> tuple[Individual, EvolutionTrace]:
    """Run the generational loop and return the best-ever individual and trace.

    Every generation draws lambda offspring (recombine rho uniformly
    chosen distinct parents, then mutate), evaluates them, adapts step
    sizes, and truncation-selects the next parent population. Stops after
    max_generations, or earlier when the best cost has not improved for
    stagnation_window consecutive generations. With a fixed rng seed the
    whole run, trace included, is reproducible bit for bit.
    """
    if rng is None:
        rng = np.random.default_rng(config.seed)

    parents = initialize_population(config, n_genes, rng)
    for ind in parents:
        ind.fitness = float(cost_fn(ind.genes))

    best_ever = _snapshot(min(parents, key=lambda ind: ind.fitness))
    trace = EvolutionTrace(records=[_record(0, parents)])
    success_history: list[tuple[int, int]] = []
    since_improvement = 0

    for generation in range(1, config.max_generations + 1):
        offspring = []
        successes = 0
        for _ in range(config.lambda_):
            chosen = [parents[i] for i in rng.choice(config.mu, size=config.rho, replace=False)]
            child = mutate(recombine(chosen, rng), config, rng)
            child.fitness = float(cost_fn(child.genes))
            success = child.fitness < chosen[0].fitness
            successes += success
            if config.sigma_rule == PER_OFFSPRING:
                child.sigma = adapt_sigma(child.sigma, success, config)
            offspring.append(child)

        if config.sigma_rule == ONE_FIFTH:
            success_history.append((successes, config.lambda_))
            del success_history[: -config.success_window]
            rate = sum(s for s, _ in success_history) / sum(t for _, t in success_history)
            if rate != 0.2:
                for ind in parents + offspring:
                    ind.sigma = adapt_sigma(ind.sigma, rate > 0.2, config)

        parents = select(parents, offspring, config)
        generation_best = min(parents, key=lambda ind: ind.fitness)
        if generation_best.fitness < best_ever.fitness:
            best_ever = _snapshot(generation_best)
            since_improvement = 0
        else:
            since_improvement += 1
        trace.records.append(_record(generation, parents))

        if config.stagnation_window is not None and since_improvement >= config.stagnation_window:
            break

    return best_ever, trace
