"""Treatment choice under partial disclosure of an observational study.

States are observed triples (outcome, covariates, received treatment); the
decision maker's utility is the inverse-propensity-weighted outcome, so the
expected utility of choosing treatment a under a prior equals the
counterfactual mean outcome of a under that prior. The prior set consists of
every joint distribution consistent with the known assignment mechanism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .design import KernelSpec, boundary_adjust, kernel_to_experiment, _certified
from .errors import (
    AssignmentMismatch,
    DimensionMismatch,
    EmptyOrFullVariableSet,
    InteriorSupportViolation,
    NoIrrelevantCovariate,
)
from .model import (
    DecisionProblem,
    InformationStructure,
    Matrix,
    MixedAction,
    PriorPolytope,
    kernel_of,
    payoff,
    payoff_equivalence_classes,
)
from .numerics import Subspace, Vector, dot, vector
from .solver import SaddleCertificate, best_responses

F0 = Fraction(0)
F1 = Fraction(1)
F2 = Fraction(2)


@dataclass(frozen=True)
class TreatmentModel:
    """Finite outcomes, covariates, treatments, assignment mechanism, and data.

    ``assignment`` has one row per covariate cell (cells ordered
    lexicographically over the covariate domains) and one column per
    treatment; each row is the treatment distribution in that cell. ``mu``
    is the observed joint distribution over states ordered lexicographically
    by (outcome, covariates, treatment).
    """

    outcomes: Vector
    covariate_domains: tuple[tuple[str, ...], ...]
    treatments: tuple[str, ...]
    assignment: Matrix
    mu: Vector

    def __post_init__(self) -> None:
        if len(self.outcomes) < 2:
            raise DimensionMismatch("need at least two outcome values")
        if any(b <= a for a, b in zip(self.outcomes, self.outcomes[1:])):
            raise ValueError("outcome values must be strictly increasing")
        if len(self.treatments) < 2:
            raise DimensionMismatch("need at least two treatments")
        if not self.covariate_domains:
            raise DimensionMismatch("need at least one covariate")
        for domain in self.covariate_domains:
            if len(domain) < 2:
                raise DimensionMismatch("every covariate needs at least two values")
        if self.assignment.rows != self.n_cells or self.assignment.cols != self.n_treatments:
            raise DimensionMismatch("assignment shape must be cells x treatments")
        for c in range(self.n_cells):
            row = self.assignment.row(c)
            if any(p < 0 for p in row) or sum(row) != 1:
                raise ValueError(f"assignment row {c} is not a probability vector")
        if len(self.mu) != self.n_states:
            raise DimensionMismatch("mu length must match the state count")
        if any(p < 0 for p in self.mu) or sum(self.mu) != 1:
            raise ValueError("mu must be a probability vector")

    @property
    def n_outcomes(self) -> int:
        return len(self.outcomes)

    @property
    def n_cells(self) -> int:
        total = 1
        for domain in self.covariate_domains:
            total *= len(domain)
        return total

    @property
    def n_treatments(self) -> int:
        return len(self.treatments)

    @property
    def n_states(self) -> int:
        return self.n_outcomes * self.n_cells * self.n_treatments

    def covariate_cells(self) -> tuple[tuple[str, ...], ...]:
        return tuple(itertools.product(*self.covariate_domains))

    def state_index(self, y: int, cell: int, t: int) -> int:
        return (y * self.n_cells + cell) * self.n_treatments + t

    def iter_states(self):
        for y in range(self.n_outcomes):
            for cell in range(self.n_cells):
                for t in range(self.n_treatments):
                    yield y, cell, t

    def state_labels(self) -> tuple[str, ...]:
        cells = self.covariate_cells()
        labels = []
        for y, cell, t in self.iter_states():
            parts = [str(self.outcomes[y]), *cells[cell], self.treatments[t]]
            labels.append("(" + ",".join(parts) + ")")
        return tuple(labels)

    def cell_mass(self, cell: int) -> Fraction:
        total = F0
        for y in range(self.n_outcomes):
            for t in range(self.n_treatments):
                total += self.mu[self.state_index(y, cell, t)]
        return total


def _irrelevant_covariates(model: TreatmentModel) -> tuple[int, ...]:
    """Covariates the assignment mechanism provably ignores."""
    cells = tuple(itertools.product(*(range(len(d)) for d in model.covariate_domains)))
    cell_index = {cell: i for i, cell in enumerate(cells)}
    out = []
    for j in range(len(model.covariate_domains)):
        groups: dict[tuple, Vector] = {}
        constant = True
        for cell, idx in cell_index.items():
            key = cell[:j] + cell[j + 1 :]
            row = model.assignment.row(idx)
            if key in groups:
                if groups[key] != row:
                    constant = False
                    break
            else:
                groups[key] = row
        if constant:
            out.append(j)
    return tuple(out)


def _compile_problem(model: TreatmentModel) -> DecisionProblem:
    """Assemble the decision problem without the irrelevant-covariate check."""
    n = model.n_states
    utility_rows = []
    for a in range(model.n_treatments):
        row = [F0] * n
        for y, cell, t in model.iter_states():
            if t == a and model.outcomes[y]:
                row[model.state_index(y, cell, t)] = (
                    model.outcomes[y] / model.assignment.entries[cell][t]
                )
        utility_rows.append(tuple(row))
    utility = Matrix(model.n_treatments, n, tuple(utility_rows))

    eq_rows = []
    for c in range(model.n_cells):
        for t in range(model.n_treatments):
            p = model.assignment.entries[c][t]
            row = [F0] * n
            for y in range(model.n_outcomes):
                for tau in range(model.n_treatments):
                    row[model.state_index(y, c, tau)] = (F1 if tau == t else F0) - p
            eq_rows.append(tuple(row))
    priors = PriorPolytope(
        n,
        eq_matrix=tuple(eq_rows),
        eq_rhs=(F0,) * len(eq_rows),
        known_member=model.mu,
    )
    return DecisionProblem(
        states=model.state_labels(),
        actions=model.treatments,
        utility=utility,
        mu=model.mu,
        priors=priors,
    )


def build_treatment_problem(model: TreatmentModel) -> DecisionProblem:
    """Compile a treatment model into a decision problem.

    The utility of choosing treatment a in state (y, x, t) is the
    inverse-propensity-weighted outcome y 1{a=t} / P(t|x). The prior set
    pins the treatment share of every covariate cell to the assignment
    mechanism via homogeneous rows, which leaves the constraint vacuous on
    cells a prior assigns no mass.
    """
    for c in range(model.n_cells):
        for t in range(model.n_treatments):
            p = model.assignment.entries[c][t]
            if not (F0 < p < F1):
                raise InteriorSupportViolation(
                    f"assignment probability {p} for cell {c}, treatment {t} "
                    "must lie strictly between 0 and 1"
                )
    for c in range(model.n_cells):
        mass = model.cell_mass(c)
        for t in range(model.n_treatments):
            observed = sum(
                model.mu[model.state_index(y, c, t)] for y in range(model.n_outcomes)
            )
            if observed != model.assignment.entries[c][t] * mass:
                raise AssignmentMismatch(
                    f"observed treatment share in cell {c} contradicts the assignment row"
                )
    if not _irrelevant_covariates(model):
        raise NoIrrelevantCovariate(
            "assignment depends on every covariate; add an independent signal "
            "covariate (see add_irrelevant_signal) to restore payoff redundancy"
        )
    problem = _compile_problem(model)
    if not payoff_equivalence_classes(problem).all_nontrivial:
        raise AssertionError("an ignored covariate must make every payoff class nontrivial")
    return problem


def counterfactual_mean(
    problem: DecisionProblem, treatment: Union[int, str], nu: Sequence[Fraction]
) -> Fraction:
    """Expected outcome of a treatment under a prior; an alias for its payoff."""
    index = problem.action_index(treatment)
    return payoff(MixedAction.pure(index, problem.n_actions), nu, problem)


def outcome_marginals_for_targets(
    model: TreatmentModel, targets: Sequence[Fraction]
) -> tuple[Vector, ...]:
    """Per-treatment outcome distributions hitting the target means exactly.

    Each marginal mixes the smallest and largest outcome values; a target
    outside their range is rejected because no outcome distribution can
    reach it.
    """
    if len(targets) != model.n_treatments:
        raise DimensionMismatch("one target mean per treatment required")
    lo = model.outcomes[0]
    hi = model.outcomes[-1]
    out = []
    for target in targets:
        if not (lo <= target <= hi):
            raise ValueError(f"target mean {target} is outside the outcome range")
        if hi == lo:
            weight_hi = F0
        else:
            weight_hi = (target - lo) / (hi - lo)
        marginal = [F0] * model.n_outcomes
        marginal[0] = F1 - weight_hi
        marginal[-1] += weight_hi
        out.append(tuple(marginal))
    return tuple(out)


@dataclass(frozen=True)
class OutcomeMarginalPrior:
    """A prior assembled from per-treatment outcome marginals.

    The prior factorizes as pi(y|t) P(t|x) mu(x), so it keeps the observed
    covariate distribution and the assignment mechanism while forcing the
    payoff of every treatment a to equal the mean of pi(.|a).
    """

    nu: Vector
    payoffs: Vector


def prior_from_marginals(
    model: TreatmentModel,
    pi: Sequence[Sequence[Fraction]],
    problem: Optional[DecisionProblem] = None,
) -> OutcomeMarginalPrior:
    if len(pi) != model.n_treatments:
        raise DimensionMismatch("one outcome marginal per treatment required")
    marginals = []
    for t, marginal in enumerate(pi):
        m = vector(marginal)
        if len(m) != model.n_outcomes:
            raise DimensionMismatch(f"marginal for treatment {t} has the wrong length")
        if any(v < 0 for v in m) or sum(m) != 1:
            raise ValueError(f"marginal for treatment {t} is not a probability vector")
        marginals.append(m)

    n = model.n_states
    nu = [F0] * n
    cell_masses = [model.cell_mass(c) for c in range(model.n_cells)]
    for y, cell, t in model.iter_states():
        weight = marginals[t][y]
        if weight and cell_masses[cell]:
            nu[model.state_index(y, cell, t)] = (
                weight * model.assignment.entries[cell][t] * cell_masses[cell]
            )
    nu = tuple(nu)
    payoffs = tuple(dot(model.outcomes, m) for m in marginals)

    problem = problem or build_treatment_problem(model)
    if not problem.priors.contains(nu):
        raise AssertionError("factorized prior must satisfy the assignment rows")
    for a in range(model.n_treatments):
        if counterfactual_mean(problem, a, nu) != payoffs[a]:
            raise AssertionError("factorized prior must reproduce the marginal means")
    return OutcomeMarginalPrior(nu=nu, payoffs=payoffs)


def _concentrated_prior(
    model: TreatmentModel, targets: Sequence[Fraction]
) -> Vector:
    """A supporting prior with the target payoffs, parked in one covariate cell.

    Concentrating every prior's covariate mass in a cell that does not carry
    all of mu's mass leaves some positive-mu state with zero prior mass, so
    the boundary-adjustment step accepts the prior as is. Needed because a
    strictly positive factorized prior admits no single-pair reallocation
    that respects the per-cell assignment rows.
    """
    marginals = outcome_marginals_for_targets(model, targets)
    cell = next(c for c in range(model.n_cells) if model.cell_mass(c) < 1)
    nu = [F0] * model.n_states
    for y in range(model.n_outcomes):
        for t in range(model.n_treatments):
            weight = marginals[t][y]
            if weight:
                nu[model.state_index(y, cell, t)] = (
                    weight * model.assignment.entries[cell][t]
                )
    return tuple(nu)


def implement_treatment(
    model: TreatmentModel,
    alpha: MixedAction,
    problem: Optional[DecisionProblem] = None,
) -> tuple[InformationStructure, SaddleCertificate]:
    """An almost-fully-informative experiment making alpha worst-case optimal.

    Always succeeds: the prior set of a treatment model realizes every
    payoff vector inside the outcome range, so the flattened payoff map
    (worst supported counterfactual mean on the support, bottom outcome off
    it) is induced by some prior that supports alpha.
    """
    problem = problem or build_treatment_problem(model)
    if len(alpha) != model.n_treatments:
        raise DimensionMismatch("mixed action length does not match the treatments")
    mu = problem.mu
    if set(alpha.support) <= set(best_responses(problem, mu)):
        return _certified(problem, InformationStructure.identity(model.n_states), alpha, mu)

    means = [
        counterfactual_mean(problem, t, mu) for t in range(model.n_treatments)
    ]
    floor = min(means[t] for t in alpha.support)
    bottom = model.outcomes[0]
    targets = tuple(
        floor if t in alpha.support else bottom for t in range(model.n_treatments)
    )
    pi = outcome_marginals_for_targets(model, targets)
    nu = prior_from_marginals(model, pi, problem).nu
    if nu == mu:
        return _certified(problem, InformationStructure.identity(model.n_states), alpha, mu)
    if not any(m > 0 and v == 0 for m, v in zip(mu, nu)):
        nu = _concentrated_prior(model, targets)
    adjusted = boundary_adjust(problem, nu)
    direction = tuple(a - b for a, b in zip(adjusted, mu))
    spec = KernelSpec(Subspace.from_vectors(model.n_states, (direction,)))
    structure, _ = kernel_to_experiment(spec)
    return _certified(problem, structure, alpha, adjusted)


@dataclass(frozen=True)
class MarginalSpec:
    """A nonempty strict subset of the observable variables Y, X1..Xl, T."""

    variables: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.variables:
            raise EmptyOrFullVariableSet("marginal disclosure needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable in marginal disclosure")


def _variable_order(model: TreatmentModel) -> tuple[str, ...]:
    return ("Y",) + tuple(f"X{j + 1}" for j in range(len(model.covariate_domains))) + ("T",)


def _normalize_spec(model: TreatmentModel, spec) -> MarginalSpec:
    if not isinstance(spec, MarginalSpec):
        spec = MarginalSpec(tuple(spec))
    order = _variable_order(model)
    unknown = [v for v in spec.variables if v not in order]
    if unknown:
        raise ValueError(f"unknown variables in marginal disclosure: {unknown}")
    normalized = tuple(v for v in order if v in spec.variables)
    if len(normalized) == len(order):
        raise EmptyOrFullVariableSet("marginal disclosure must omit at least one variable")
    return MarginalSpec(normalized)


def marginal_structure(model: TreatmentModel, spec) -> InformationStructure:
    """Deterministic coarsening disclosing the joint law of the chosen variables."""
    spec = _normalize_spec(model, spec)
    order = _variable_order(model)
    domains = {
        "Y": tuple(str(y) for y in model.outcomes),
        "T": model.treatments,
    }
    for j, domain in enumerate(model.covariate_domains):
        domains[f"X{j + 1}"] = domain

    chosen = spec.variables
    message_values = tuple(itertools.product(*(range(len(domains[v])) for v in chosen)))
    message_index = {vals: i for i, vals in enumerate(message_values)}
    labels = tuple(
        ",".join(domains[v][val] for v, val in zip(chosen, vals)) for vals in message_values
    )

    cells = tuple(itertools.product(*(range(len(d)) for d in model.covariate_domains)))
    rows = [[F0] * model.n_states for _ in message_values]
    for y, cell, t in model.iter_states():
        components = {"Y": y, "T": t}
        for j, val in enumerate(cells[cell]):
            components[f"X{j + 1}"] = val
        key = tuple(components[v] for v in chosen)
        rows[message_index[key]][model.state_index(y, cell, t)] = F1
    matrix = Matrix(len(rows), model.n_states, tuple(tuple(r) for r in rows))
    return InformationStructure(labels, matrix)


@dataclass(frozen=True)
class MarginalReport:
    """Why a marginal disclosure is never a maximal implementing experiment."""

    variables: tuple[str, ...]
    kernel_dim: int
    dimension_bound: Fraction  # best structural lower bound on the kernel dimension
    never_maximal: bool  # kernel dimension exceeds one


def check_marginal_not_maximal(model: TreatmentModel, spec) -> MarginalReport:
    spec = _normalize_spec(model, spec)
    structure = marginal_structure(model, spec)
    kernel_dim = kernel_of(structure).dim
    order = _variable_order(model)
    sizes = {
        "Y": model.n_outcomes,
        "T": model.n_treatments,
    }
    for j, domain in enumerate(model.covariate_domains):
        sizes[f"X{j + 1}"] = len(domain)
    excluded = [v for v in order if v not in spec.variables]
    bound = max(
        Fraction(sizes[v] - 1, sizes[v]) * model.n_states for v in excluded
    )
    return MarginalReport(
        variables=spec.variables,
        kernel_dim=kernel_dim,
        dimension_bound=bound,
        never_maximal=kernel_dim > 1,
    )


def add_irrelevant_signal(
    model: TreatmentModel, labels: tuple[str, str] = ("s0", "s1")
) -> TreatmentModel:
    """Append an independent uniform binary covariate the assignment ignores.

    The observed distribution is split evenly across the signal values and
    every assignment row is duplicated, so the extended model carries the
    same observable content while guaranteeing an ignorable covariate.
    """
    n_sig = len(labels)
    if n_sig < 2:
        raise DimensionMismatch("signal covariate needs at least two values")
    new_domains = model.covariate_domains + (tuple(labels),)
    new_assignment_rows = []
    for c in range(model.n_cells):
        for _ in range(n_sig):
            new_assignment_rows.append(model.assignment.row(c))
    new_mu = [F0] * (model.n_states * n_sig)
    share = F1 / n_sig
    n_treat = model.n_treatments
    new_cells = model.n_cells * n_sig
    for y, cell, t in model.iter_states():
        mass = model.mu[model.state_index(y, cell, t)]
        if mass:
            for s in range(n_sig):
                new_cell = cell * n_sig + s
                new_mu[(y * new_cells + new_cell) * n_treat + t] = mass * share
    return TreatmentModel(
        outcomes=model.outcomes,
        covariate_domains=new_domains,
        treatments=model.treatments,
        assignment=Matrix(new_cells, n_treat, tuple(new_assignment_rows)),
        mu=tuple(new_mu),
    )


def _motivating_raw() -> TreatmentModel:
    """Binary-outcome observational study whose partial disclosure flips the policy.

    One covariate drives assignment (treated with chance 1/5 in the x0 group
    and 4/5 in the x1 group); the full data identify the untreated mean 1/4
    and the treated mean 1/8.
    """
    mu = vector(
        ["0.40", "0.10", "0.05", "0.30", "0.00", "0.00", "0.05", "0.10"]
    )  # lexicographic over (y, x, t)
    return TreatmentModel(
        outcomes=vector([0, 1]),
        covariate_domains=(("x0", "x1"),),
        treatments=("t0", "t1"),
        assignment=Matrix.from_rows([["4/5", "1/5"], ["1/5", "4/5"]]),
        mu=mu,
    )


def motivating_example() -> TreatmentModel:
    """The built-in example, extended with an ignorable binary signal covariate.

    The raw example's assignment varies with its only covariate, so the
    irrelevant-signal extension is what makes it a valid treatment model;
    the extension does not change any disclosed quantity or worst case.
    """
    return add_irrelevant_signal(_motivating_raw())


def motivating_worst_case_prior(model: TreatmentModel) -> Vector:
    """The joint distribution attaining both worst cases under (Y, T) disclosure.

    Stated on the extended state space of ``motivating_example`` by an even
    split across the signal covariate.
    """
    if model.n_states != 16 or model.n_cells != 4:
        raise DimensionMismatch("expected the extended built-in example")
    raw = vector(["0.35", "0.10", "0.10", "0.30", "0.05", "0.00", "0.00", "0.10"])
    out = [F0] * model.n_states
    n_treat = model.n_treatments
    for y in range(2):
        for x in range(2):
            for t in range(2):
                mass = raw[(y * 2 + x) * 2 + t]
                if mass:
                    for s in range(2):
                        cell = x * 2 + s
                        out[(y * model.n_cells + cell) * n_treat + t] = mass / F2
    return tuple(out)
