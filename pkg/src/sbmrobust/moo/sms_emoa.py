"""Steady-state hypervolume-selection optimizer over block-model genomes.

Each step breeds one offspring from two uniformly chosen parents, adds it
to the population and discards the member of the worst non-dominated rank
whose removal costs the least hypervolume. The objective pair is
``(R_targeted, R_random)``, both maximized.
"""

from __future__ import annotations

import copy
import logging
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from ..blockmodel import BlockModel
from ..percolation import DEFAULT_GRID, robustness_pair
from .genome import decode, genome_length
from .operators import polynomial_mutation, sbx_crossover
from .pareto import hv_contributions, hypervolume_2d, nondominated_mask, nondominated_ranks

log = logging.getLogger(__name__)

INFEASIBLE = (0.0, 0.0)


@dataclass
class OptConfig:
    B: int
    kappa: float
    population_size: int = 50
    max_evaluations: int = 50_000
    seed: int = 0
    eta_crossover: float = 20.0
    eta_mutation: float = 15.0
    p_crossover: float = 1.0
    p_mutation: float = 1.0
    reference: tuple = (-1e-3, -1e-3)
    grid_size: int = DEFAULT_GRID
    size_bounds: tuple = (-8.0, 0.0)
    edge_bounds: tuple = (-8.0, 0.0)
    archive_interval: int = 1000

    def __post_init__(self):
        self.reference = tuple(float(x) for x in self.reference)
        self.size_bounds = tuple(float(x) for x in self.size_bounds)
        self.edge_bounds = tuple(float(x) for x in self.edge_bounds)
        problems = []
        if self.B < 1:
            problems.append("B must be >= 1")
        if self.population_size < 2:
            problems.append("population_size must be >= 2")
        if self.max_evaluations < 0:
            problems.append("max_evaluations must be >= 0")
        for name in ("p_crossover", "p_mutation"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                problems.append(f"{name} must lie in [0, 1]")
        for name in ("eta_crossover", "eta_mutation"):
            if not getattr(self, name) > 0:
                problems.append(f"{name} must be positive")
        for name in ("size_bounds", "edge_bounds"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                problems.append(f"{name} must be ordered (lo < hi)")
        if self.grid_size < 3 or self.grid_size % 2 == 0:
            problems.append("grid_size must be odd and >= 3")
        if self.archive_interval < 1:
            problems.append("archive_interval must be >= 1")
        if problems:
            raise ValueError("invalid optimizer configuration: " + "; ".join(problems))

    @property
    def genome_length(self) -> int:
        return genome_length(self.B)

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("reference", "size_bounds", "edge_bounds"):
            d[key] = list(d[key])
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "OptConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown optimizer keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class Individual:
    genome: np.ndarray
    model: BlockModel | None
    objectives: tuple

    @property
    def feasible(self) -> bool:
        return self.model is not None


@dataclass
class Front:
    """Mutually non-dominated individuals and the reference point of their hypervolume."""

    members: list
    reference: tuple

    @classmethod
    def from_population(cls, population, reference) -> "Front":
        pts = np.array([ind.objectives for ind in population])
        mask = nondominated_mask(pts)
        members = [ind for ind, keep in zip(population, mask) if keep]
        members.sort(key=lambda ind: (ind.objectives[0], -ind.objectives[1]))
        return cls(members, tuple(reference))

    @property
    def points(self) -> np.ndarray:
        return np.array([ind.objectives for ind in self.members]).reshape(-1, 2)

    def hypervolume(self) -> float:
        return hypervolume_2d(self.points, self.reference)

    def to_csv(self, path, model_ids=None) -> None:
        if model_ids is None:
            model_ids = [f"m{i:03d}" for i in range(len(self.members))]
        with open(path, "w") as fh:
            fh.write("R_targeted,R_random,model_id\n")
            for ind, mid in zip(self.members, model_ids):
                fh.write(f"{ind.objectives[0]!r},{ind.objectives[1]!r},{mid}\n")


@dataclass
class Snapshot:
    step: int
    evaluations: int
    front: Front
    hypervolume: float


@dataclass
class RunResult:
    config: OptConfig
    archive: list
    population: list
    evaluations: int

    @property
    def front(self) -> Front:
        return Front.from_population(self.population, self.config.reference)


class PercolationEvaluator:
    """Objective function ``model -> (R_targeted, R_random)``."""

    def __init__(self, grid_size: int = DEFAULT_GRID):
        self.grid_size = grid_size

    def __call__(self, model: BlockModel):
        return robustness_pair(model, self.grid_size)


def _evaluate(genome, config: OptConfig, evaluator) -> Individual:
    model = decode(genome, config.B, config.kappa, config.size_bounds, config.edge_bounds)
    if model is None:
        return Individual(genome, None, INFEASIBLE)
    try:
        rt, rr = evaluator(model)
        objectives = (float(rt), float(rr))
        if not all(0.0 <= x <= 1.0 for x in objectives):
            raise ValueError(f"objectives {objectives} outside [0, 1]")
    except Exception as exc:  # noqa: BLE001 - any evaluator failure scores (0, 0)
        log.warning("evaluation failed for %r: %s", model, exc)
        return Individual(genome, model, INFEASIBLE)
    return Individual(genome, model, objectives)


def _breed(parents, config: OptConfig, rng: np.random.Generator) -> np.ndarray:
    p1, p2 = parents
    if rng.random() < config.p_crossover:
        c1, c2 = sbx_crossover(p1, p2, config.eta_crossover, rng)
        child = c1 if rng.random() < 0.5 else c2
    else:
        child = np.array(p1, dtype=float)
    if rng.random() < config.p_mutation:
        child = polynomial_mutation(child, config.eta_mutation, 1.0 / child.size, rng)
    return child


def _population_to_state(population):
    return [
        {"genome": ind.genome.tolist(), "objectives": list(ind.objectives)}
        for ind in population
    ]


def _population_from_state(state, config: OptConfig):
    out = []
    for item in state:
        genome = np.asarray(item["genome"], dtype=float)
        model = decode(genome, config.B, config.kappa, config.size_bounds, config.edge_bounds)
        out.append(Individual(genome, model, tuple(float(x) for x in item["objectives"])))
    return out


class SMSEMOA:
    """Stateful optimizer; :meth:`run` drives it to the evaluation budget.

    ``max_evaluations`` counts offspring; the initial population is
    evaluated on top of it.
    """

    def __init__(self, config: OptConfig, evaluator=None):
        self.config = config
        self.evaluator = evaluator if evaluator is not None else PercolationEvaluator(config.grid_size)
        self.rng = np.random.default_rng(config.seed)
        self.population: list[Individual] = []
        self.step_count = 0
        self.evaluations = 0
        self.archive: list[Snapshot] = []

    def initialize(self) -> None:
        cfg = self.config
        genomes = self.rng.random((cfg.population_size, cfg.genome_length))
        self.population = [_evaluate(g, cfg, self.evaluator) for g in genomes]
        self.evaluations = cfg.population_size
        self.step_count = 0
        self._snapshot()

    @property
    def done(self) -> bool:
        return self.step_count >= self.config.max_evaluations

    def hypervolume(self) -> float:
        return hypervolume_2d([ind.objectives for ind in self.population], self.config.reference)

    def step(self) -> Individual:
        cfg = self.config
        i, j = self.rng.choice(len(self.population), size=2, replace=False)
        child = _breed((self.population[i].genome, self.population[j].genome), cfg, self.rng)
        offspring = _evaluate(child, cfg, self.evaluator)
        self.evaluations += 1
        self.population.append(offspring)
        self._discard_one()
        self.step_count += 1
        if self.step_count % cfg.archive_interval == 0 or self.done:
            self._snapshot()
        return offspring

    def _discard_one(self) -> None:
        pts = np.array([ind.objectives for ind in self.population])
        ranks = nondominated_ranks(pts)
        worst = np.flatnonzero(ranks == ranks.max())
        if worst.size == 1:
            victim = worst[0]
        else:
            contrib = hv_contributions(pts[worst], self.config.reference)
            victim = worst[int(np.argmin(contrib))]
        del self.population[victim]

    def _snapshot(self) -> None:
        front = Front.from_population(self.population, self.config.reference)
        self.archive.append(Snapshot(self.step_count, self.evaluations, front, front.hypervolume()))

    def run(self, on_snapshot=None, on_step=None) -> RunResult:
        if not self.population:
            self.initialize()
            if on_snapshot is not None:
                on_snapshot(self, self.archive[-1])
        while not self.done:
            n_snap = len(self.archive)
            self.step()
            if on_step is not None:
                on_step(self)
            if on_snapshot is not None and len(self.archive) > n_snap:
                on_snapshot(self, self.archive[-1])
        return RunResult(self.config, list(self.archive), list(self.population), self.evaluations)

    def checkpoint(self) -> dict:
        """JSON-serializable state from which :meth:`resume` continues exactly."""
        return {
            "config": self.config.to_dict(),
            "rng_state": copy.deepcopy(self.rng.bit_generator.state),
            "step": self.step_count,
            "evaluations": self.evaluations,
            "population": _population_to_state(self.population),
            "archive": [
                {
                    "step": s.step,
                    "evaluations": s.evaluations,
                    "front": _population_to_state(s.front.members),
                }
                for s in self.archive
            ],
        }

    @classmethod
    def resume(cls, state: dict, evaluator=None) -> "SMSEMOA":
        try:
            config = OptConfig.from_dict(state["config"])
            opt = cls(config, evaluator)
            opt.rng.bit_generator.state = state["rng_state"]
            opt.step_count = int(state["step"])
            opt.evaluations = int(state["evaluations"])
            opt.population = _population_from_state(state["population"], config)
            for snap in state["archive"]:
                front = Front(_population_from_state(snap["front"], config), config.reference)
                opt.archive.append(
                    Snapshot(int(snap["step"]), int(snap["evaluations"]), front, front.hypervolume())
                )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"corrupt checkpoint: {exc!r}") from None
        if len(opt.population) != config.population_size:
            raise ValueError("corrupt checkpoint: population size does not match config")
        if any(ind.genome.size != config.genome_length for ind in opt.population):
            raise ValueError("corrupt checkpoint: genome length does not match config")
        return opt


def sms_emoa_run(config: OptConfig, evaluator=None, on_snapshot=None) -> RunResult:
    """Run the optimizer from a fresh seeded start to the evaluation budget."""
    return SMSEMOA(config, evaluator).run(on_snapshot=on_snapshot)


@dataclass
class ConstrainedResult:
    found: bool
    individual: Individual
    fitness: float
    target: float
    tolerance: float
    history: list = field(default_factory=list)


def constrained_run(
    config: OptConfig,
    r_targeted_target: float,
    tolerance: float = 0.005,
    penalty: float = 10.0,
    evaluator=None,
) -> ConstrainedResult:
    """Maximize ``R_random`` with ``R_targeted`` pinned near a target.

    Fitness is ``R_random - penalty * max(0, |R_targeted - target| - tolerance)``.
    The steady-state loop uses the same variation operators as the
    multi-objective run; an offspring replaces the worst member when it is
    at least as fit. ``found`` is False when no evaluated feasible
    individual met the tolerance; ``individual`` is then the best attempt.
    """
    if not 0.0 <= r_targeted_target <= 1.0:
        raise ValueError(f"target must lie in [0, 1], got {r_targeted_target}")
    evaluator = evaluator if evaluator is not None else PercolationEvaluator(config.grid_size)
    rng = np.random.default_rng(config.seed)

    def fitness(ind):
        rt, rr = ind.objectives
        return rr - penalty * max(0.0, abs(rt - r_targeted_target) - tolerance)

    def meets(ind):
        return ind.feasible and abs(ind.objectives[0] - r_targeted_target) <= tolerance

    genomes = rng.random((config.population_size, config.genome_length))
    pop = [_evaluate(g, config, evaluator) for g in genomes]
    fit = np.array([fitness(ind) for ind in pop])
    best_ok = max((ind for ind in pop if meets(ind)), key=fitness, default=None)
    history = []
    for step in range(config.max_evaluations):
        i, j = rng.choice(len(pop), size=2, replace=False)
        child = _evaluate(_breed((pop[i].genome, pop[j].genome), config, rng), config, evaluator)
        f = fitness(child)
        worst = int(np.argmin(fit))
        if f >= fit[worst]:
            pop[worst] = child
            fit[worst] = f
        if meets(child) and (best_ok is None or f > fitness(best_ok)):
            best_ok = child
        if (step + 1) % config.archive_interval == 0:
            history.append((step + 1, float(fit.max())))
    if best_ok is not None:
        return ConstrainedResult(True, best_ok, fitness(best_ok), r_targeted_target, tolerance, history)
    best = pop[int(np.argmax(fit))]
    return ConstrainedResult(False, best, float(fit.max()), r_targeted_target, tolerance, history)
