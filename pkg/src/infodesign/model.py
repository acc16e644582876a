"""Primitive objects: decision problems, prior sets, experiments, identified sets.

A decision maker with utility u over actions and finitely many states faces
an unknown state distribution. They observe only the message distribution an
experiment induces from the true distribution mu, and treat every prior in
the polytope that reproduces that message distribution as plausible.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from . import lp
from .errors import DimensionMismatch
from .numerics import Matrix, Subspace, Vector, dot, nullspace, vector

F0 = Fraction(0)
F1 = Fraction(1)


def _is_distribution(values: Sequence[Fraction]) -> bool:
    return all(v >= 0 for v in values) and sum(values) == 1


@dataclass(frozen=True)
class PriorPolytope:
    """Priors over states: the probability simplex cut by affine constraints.

    The simplex conditions (coordinates nonnegative, summing to one) are
    implicit; ``eq``/``ub`` rows are the extra linear restrictions. The set
    must be nonempty: construction verifies this, either by checking a
    declared member exactly or by a feasibility solve.
    """

    dimension: int
    eq_matrix: tuple[Vector, ...] = ()
    eq_rhs: Vector = ()
    ub_matrix: tuple[Vector, ...] = ()
    ub_rhs: Vector = ()
    known_member: InitVar[Optional[Sequence[Fraction]]] = None

    def __post_init__(self, known_member) -> None:
        if self.dimension < 1:
            raise DimensionMismatch("prior polytope needs at least one state")
        if len(self.eq_matrix) != len(self.eq_rhs) or len(self.ub_matrix) != len(self.ub_rhs):
            raise DimensionMismatch("constraint matrix and rhs lengths differ")
        for row in self.eq_matrix + self.ub_matrix:
            if len(row) != self.dimension:
                raise DimensionMismatch(
                    f"constraint row of length {len(row)} over {self.dimension} states"
                )
        if known_member is not None:
            if not self.contains(vector(known_member)):
                raise ValueError("declared member lies outside the prior set")
        else:
            probe = lp.feasible_point(self.feasibility_program())
            if probe.status is not lp.LpStatus.OPTIMAL:
                raise ValueError("prior set is empty")

    @classmethod
    def simplex(cls, dimension: int) -> "PriorPolytope":
        uniform = (F1 / dimension,) * dimension
        return cls(dimension, known_member=uniform)

    def contains(self, point: Sequence[Fraction]) -> bool:
        if len(point) != self.dimension:
            raise DimensionMismatch(
                f"point of length {len(point)} in a {self.dimension}-state prior set"
            )
        if not _is_distribution(point):
            return False
        for row, b in zip(self.eq_matrix, self.eq_rhs):
            if dot(row, point) != b:
                return False
        for row, b in zip(self.ub_matrix, self.ub_rhs):
            if dot(row, point) > b:
                return False
        return True

    def feasibility_program(self) -> lp.LinearProgram:
        n = self.dimension
        return lp.LinearProgram(
            objective=(F0,) * n,
            sense="min",
            eq_matrix=((F1,) * n,) + self.eq_matrix,
            eq_rhs=(F1,) + self.eq_rhs,
            ub_matrix=self.ub_matrix,
            ub_rhs=self.ub_rhs,
        )


@dataclass(frozen=True)
class MixedAction:
    """A probability vector over the action list."""

    weights: Vector

    def __post_init__(self) -> None:
        if not self.weights:
            raise DimensionMismatch("mixed action over zero actions")
        if not _is_distribution(self.weights):
            raise ValueError("mixed action weights must be nonnegative and sum to one")

    @classmethod
    def pure(cls, index: int, n_actions: int) -> "MixedAction":
        if not 0 <= index < n_actions:
            raise IndexError(f"pure action index {index} out of range {n_actions}")
        return cls(tuple(F1 if a == index else F0 for a in range(n_actions)))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(a for a, w in enumerate(self.weights) if w)

    def __len__(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class InformationStructure:
    """A finite message set and a column-stochastic experiment matrix.

    Column j is the message distribution sent in state j. The kernel of the
    matrix determines everything the structure reveals: kernel {0} means the
    state distribution is pinned down exactly.
    """

    messages: tuple[str, ...]
    experiment: Matrix

    def __post_init__(self) -> None:
        if self.experiment.rows != len(self.messages):
            raise DimensionMismatch(
                f"{len(self.messages)} messages but {self.experiment.rows} matrix rows"
            )
        if not self.messages:
            raise DimensionMismatch("experiment needs at least one message")
        for j, col in enumerate(zip(*self.experiment.entries)):
            if any(x < 0 for x in col) or sum(col) != 1:
                raise ValueError(f"experiment column {j} is not a probability vector")

    @property
    def n_states(self) -> int:
        return self.experiment.cols

    @cached_property
    def kernel(self) -> Subspace:
        return nullspace(self.experiment)

    @property
    def is_fully_informative(self) -> bool:
        return self.kernel.dim == 0

    @property
    def is_almost_fully_informative(self) -> bool:
        return self.kernel.dim <= 1

    @classmethod
    def identity(cls, n_states: int) -> "InformationStructure":
        labels = tuple(f"m{i}" for i in range(n_states))
        return cls(labels, Matrix.identity(n_states))

    @classmethod
    def single_message(cls, n_states: int) -> "InformationStructure":
        return cls(("m0",), Matrix(1, n_states, ((F1,) * n_states,)))


def kernel_of(structure: InformationStructure) -> Subspace:
    """Nullspace of the experiment matrix, in canonical form."""
    return structure.kernel


@dataclass(frozen=True)
class DecisionProblem:
    """States, actions, utility, the true distribution, and the prior set."""

    states: tuple[str, ...]
    actions: tuple[str, ...]
    utility: Matrix  # one row per action, one column per state
    mu: Vector
    priors: PriorPolytope

    def __post_init__(self) -> None:
        if not self.states or not self.actions:
            raise DimensionMismatch("need at least one state and one action")
        if len(set(self.states)) != len(self.states):
            raise ValueError("state labels must be unique")
        if len(set(self.actions)) != len(self.actions):
            raise ValueError("action labels must be unique")
        if self.utility.rows != len(self.actions) or self.utility.cols != len(self.states):
            raise DimensionMismatch("utility matrix shape does not match labels")
        if len(self.mu) != len(self.states):
            raise DimensionMismatch("mu length does not match the state count")
        if self.priors.dimension != len(self.states):
            raise DimensionMismatch("prior set dimension does not match the state count")
        if not _is_distribution(self.mu):
            raise ValueError("mu must be a probability vector")
        if not self.priors.contains(self.mu):
            raise ValueError("mu lies outside the prior set")

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    def utility_row(self, action: int) -> Vector:
        return self.utility.row(action)

    def mixed_utility(self, alpha: MixedAction) -> Vector:
        """Per-state expected utility of a mixed action."""
        if len(alpha) != self.n_actions:
            raise DimensionMismatch("mixed action length does not match the action count")
        out = [F0] * self.n_states
        for a, w in enumerate(alpha.weights):
            if not w:
                continue
            row = self.utility.row(a)
            for s in range(self.n_states):
                if row[s]:
                    out[s] += w * row[s]
        return tuple(out)

    def action_index(self, action) -> int:
        if isinstance(action, int):
            if not 0 <= action < self.n_actions:
                raise IndexError(f"action index {action} out of range")
            return action
        try:
            return self.actions.index(action)
        except ValueError:
            raise KeyError(f"unknown action label {action!r}") from None


def payoff(alpha: MixedAction, nu: Sequence[Fraction], problem: DecisionProblem) -> Fraction:
    """Expected utility sum_a sum_s alpha(a) u(a,s) nu(s), exactly."""
    if len(nu) != problem.n_states:
        raise DimensionMismatch("state distribution length does not match the problem")
    return dot(problem.mixed_utility(alpha), nu)


def push_forward(structure: InformationStructure, nu: Sequence[Fraction]) -> Vector:
    """Message distribution induced by a state distribution."""
    return structure.experiment.matvec(tuple(nu))


@dataclass(frozen=True)
class IdentifiedSet:
    """Priors in the base set whose message distribution matches the observed one."""

    base: PriorPolytope
    pinned_pushforward: Vector
    experiment: InformationStructure

    def contains(self, point: Sequence[Fraction]) -> bool:
        return self.base.contains(point) and push_forward(self.experiment, point) == self.pinned_pushforward

    def equality_rows(self) -> tuple[tuple[Vector, ...], Vector]:
        """Full equality block of the H-representation (base rows plus pinning rows)."""
        rows = self.base.eq_matrix + self.experiment.experiment.entries
        rhs = self.base.eq_rhs + self.pinned_pushforward
        return rows, rhs

    def inequality_rows(self) -> tuple[tuple[Vector, ...], Vector]:
        return self.base.ub_matrix, self.base.ub_rhs


def identified_set(problem: DecisionProblem, structure: InformationStructure) -> IdentifiedSet:
    if structure.n_states != problem.n_states:
        raise DimensionMismatch("experiment columns do not match the problem's states")
    pinned = push_forward(structure, problem.mu)
    out = IdentifiedSet(problem.priors, pinned, structure)
    if not out.contains(problem.mu):
        raise AssertionError("identified set must contain the true distribution")
    return out


@dataclass(frozen=True)
class PayoffPartition:
    """States grouped by exact equality of their utility columns."""

    classes: tuple[tuple[int, ...], ...]
    all_nontrivial: bool  # every class has at least two states


def payoff_equivalence_classes(problem: DecisionProblem) -> PayoffPartition:
    groups: dict[Vector, list[int]] = {}
    for s in range(problem.n_states):
        groups.setdefault(problem.utility.column(s), []).append(s)
    classes = tuple(tuple(members) for members in groups.values())
    classes = tuple(sorted(classes, key=lambda c: c[0]))
    return PayoffPartition(classes, all(len(c) >= 2 for c in classes))
