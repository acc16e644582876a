"""Constructive information design.

Given any zero-sum subspace D there is an experiment whose kernel is exactly
D; this module builds one deterministically, adjusts supporting priors to
the boundary of the prior set, assembles implementing experiments that
conceal at most one dimension, and decides the informativeness order and
maximality.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from . import lp
from .errors import (
    AssumptionViolation,
    DimensionMismatch,
    NotImplementableError,
    NotImplementingError,
    ZeroSumViolation,
)
from .model import (
    DecisionProblem,
    InformationStructure,
    MixedAction,
    kernel_of,
    payoff_equivalence_classes,
)
from .numerics import (
    Matrix,
    Subspace,
    Vector,
    dot,
    orthogonal_complement,
    subspace_contains,
    vec_sub,
)
from .solver import SaddleCertificate, best_responses, maxmin, supporting_prior_program, worst_case

F0 = Fraction(0)
F1 = Fraction(1)


@dataclass(frozen=True)
class KernelSpec:
    """A prescribed experiment kernel: a subspace of zero-sum directions."""

    subspace: Subspace

    def __post_init__(self) -> None:
        for v in self.subspace.basis:
            if sum(v) != 0:
                raise ZeroSumViolation("kernel directions must have zero coordinate sum")


@dataclass(frozen=True)
class ConstructionTrace:
    """Intermediate data of the kernel-to-experiment construction.

    For the generic case the matrix rows are lam*(x_i + w_i) and
    lam*(y_i - w_i) over the orthogonal-complement basis w_1..w_l, with
    x_i > -min(w_i), y_i > max(w_i), and lam = 1 / sum_i (x_i + y_i). The
    degenerate cases (identity, single message) carry no shifts and no
    normalizer.
    """

    complement_basis: tuple[Vector, ...]
    x_shifts: Vector
    y_shifts: Vector
    normalizer: Optional[Fraction]
    matrix: Matrix


def kernel_to_experiment(spec: KernelSpec) -> tuple[InformationStructure, ConstructionTrace]:
    """Build a column-stochastic experiment whose kernel is exactly the spec.

    Fully concealing kernels (dimension n-1) yield the single-message
    experiment; the zero kernel yields the identity; otherwise the generic
    two-rows-per-complement-direction construction applies and the message
    count is twice the complement dimension.

    The construction's row space is the orthogonal complement of the spec by
    design, so the returned structure's kernel cache is filled in directly;
    the round-trip tests recompute it from the matrix with ``nullspace``.
    """
    subspace = spec.subspace
    n = subspace.ambient_dim
    if n < 1:
        raise DimensionMismatch("ambient dimension must be at least one")
    k = subspace.dim

    if k == n - 1:
        matrix = Matrix(1, n, ((F1,) * n,))
        structure = InformationStructure(("m0",), matrix)
        structure.__dict__["kernel"] = subspace
        trace = ConstructionTrace(
            complement_basis=Subspace.from_vectors(n, ((F1,) * n,)).basis,
            x_shifts=(),
            y_shifts=(),
            normalizer=None,
            matrix=matrix,
        )
        return structure, trace
    if k == 0:
        matrix = Matrix.identity(n)
        structure = InformationStructure.identity(n)
        structure.__dict__["kernel"] = subspace
        trace = ConstructionTrace(
            complement_basis=Subspace.full(n).basis,
            x_shifts=(),
            y_shifts=(),
            normalizer=None,
            matrix=matrix,
        )
        return structure, trace

    complement = orthogonal_complement(subspace)
    ws = complement.basis
    xs = tuple(F1 - min(w) for w in ws)
    ys = tuple(F1 + max(w) for w in ws)
    lam = F1 / sum(x + y for x, y in zip(xs, ys))
    rows: list[Vector] = []
    for x, w in zip(xs, ws):
        flat = lam * x
        rows.append(tuple(flat + lam * wj if wj else flat for wj in w))
    for y, w in zip(ys, ws):
        flat = lam * y
        rows.append(tuple(flat - lam * wj if wj else flat for wj in w))
    matrix = Matrix(len(rows), n, tuple(rows))
    messages = tuple(f"m{i}" for i in range(len(rows)))
    structure = InformationStructure(messages, matrix)
    structure.__dict__["kernel"] = subspace
    return structure, ConstructionTrace(ws, xs, ys, lam, matrix)


def extremal_reach(problem: DecisionProblem, nu: Sequence[Fraction]) -> Fraction:
    """max { lam : mu + lam (nu - mu) stays in the prior set }, exactly.

    The segment is one-dimensional, so the program reduces to an exact
    interval intersection over the polytope's rows; nu must differ from mu.
    """
    mu = problem.mu
    direction = vec_sub(nu, mu)
    if not any(direction):
        raise ValueError("reach undefined for nu equal to mu")
    priors = problem.priors
    hi: Optional[Fraction] = None

    def tighten(coeff: Fraction, slackness: Fraction) -> None:
        # constraint coeff * lam <= slackness with slackness >= 0 at lam = 0
        nonlocal hi
        if coeff > 0:
            bound = slackness / coeff
            if hi is None or bound < hi:
                hi = bound

    for s in range(problem.n_states):
        tighten(-direction[s], mu[s])
    for row, b in zip(priors.ub_matrix, priors.ub_rhs):
        tighten(dot(row, direction), b - dot(row, mu))
    for row in priors.eq_matrix:
        if dot(row, direction) != 0:
            raise AssertionError("segment endpoints must satisfy the same equalities")
    if hi is None:
        raise AssertionError("prior sets are bounded, the segment cannot be free")
    return hi


def boundary_adjust(problem: DecisionProblem, nu: Sequence[Fraction]) -> Vector:
    """Replace nu by a payoff-identical prior that cannot be stretched past itself.

    If some state already carries zero prior mass but positive true mass,
    nu itself qualifies. Otherwise mass at a positive-mu state is moved
    entirely onto a payoff-equivalent partner state, scanning states and
    partners in canonical order and accepting the first reallocation that
    stays inside the prior set.
    """
    nu = tuple(nu)
    if len(nu) != problem.n_states:
        raise DimensionMismatch("prior length does not match the problem")
    if not problem.priors.contains(nu):
        raise ValueError("boundary adjustment requires a member of the prior set")
    mu = problem.mu

    for s in range(problem.n_states):
        if mu[s] > 0 and nu[s] == 0:
            return nu

    partition = payoff_equivalence_classes(problem)
    mates: dict[int, tuple[int, ...]] = {}
    for cls in partition.classes:
        for member in cls:
            mates[member] = cls
    for s in range(problem.n_states):
        if mu[s] == 0:
            continue
        for partner in mates[s]:
            if partner == s:
                continue
            moved = list(nu)
            moved[partner] += moved[s]
            moved[s] = F0
            candidate = tuple(moved)
            if problem.priors.contains(candidate):
                if extremal_reach(problem, candidate) > 1:
                    raise AssertionError("adjusted prior must pin the segment at one")
                return candidate
    raise AssumptionViolation(
        "no payoff-preserving reallocation stays in the prior set; "
        "the prior set lacks the payoff-redundancy the adjustment relies on"
    )


def _certified(
    problem: DecisionProblem,
    structure: InformationStructure,
    alpha: MixedAction,
    nu: Vector,
) -> tuple[InformationStructure, SaddleCertificate]:
    u_alpha = problem.mixed_utility(alpha)
    certificate = SaddleCertificate(alpha, nu, dot(u_alpha, nu))
    if not certificate.verify(problem, structure):
        raise AssertionError("constructed structure failed its own saddle check")
    return structure, certificate


def implementing_structure(
    problem: DecisionProblem, alpha: MixedAction
) -> tuple[InformationStructure, SaddleCertificate]:
    """An experiment concealing at most one dimension under which alpha is optimal.

    If the true distribution itself supports alpha the fully informative
    experiment is returned. Otherwise a supporting prior is found by a
    feasibility solve, moved to the boundary, and the experiment concealing
    exactly the mu-to-prior direction is constructed. Raises
    NotImplementableError (with the refuting certificate) when no supporting
    prior exists, and propagates AssumptionViolation when the prior set
    cannot absorb the boundary move.
    """
    n = problem.n_states
    mu = problem.mu
    if set(alpha.support) <= set(best_responses(problem, mu)):
        return _certified(problem, InformationStructure.identity(n), alpha, mu)
    outcome = lp.feasible_point(supporting_prior_program(problem, alpha))
    if outcome.status is not lp.LpStatus.OPTIMAL:
        raise NotImplementableError(
            "action has no supporting prior", farkas=outcome.certificate
        )
    nu = outcome.optimal_point
    if nu == mu:
        return _certified(problem, InformationStructure.identity(n), alpha, mu)
    adjusted = boundary_adjust(problem, nu)
    direction = vec_sub(adjusted, mu)
    spec = KernelSpec(Subspace.from_vectors(n, (direction,)))
    structure, _ = kernel_to_experiment(spec)
    return _certified(problem, structure, alpha, adjusted)


class InformativenessOrder(Enum):
    MORE = "more"
    LESS = "less"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def robustly_more_informative(
    first: InformationStructure, second: InformationStructure
) -> InformativenessOrder:
    """Kernel-inclusion order: the smaller kernel is the more informative side."""
    if first.n_states != second.n_states:
        raise DimensionMismatch("structures live on different state spaces")
    k1 = kernel_of(first)
    k2 = kernel_of(second)
    first_in_second = subspace_contains(k2, k1)
    second_in_first = subspace_contains(k1, k2)
    if first_in_second and second_in_first:
        return InformativenessOrder.EQUAL
    if first_in_second:
        return InformativenessOrder.MORE
    if second_in_first:
        return InformativenessOrder.LESS
    return InformativenessOrder.INCOMPARABLE


def is_maximally_informative(
    problem: DecisionProblem, structure: InformationStructure, alpha: MixedAction
) -> bool:
    """Whether no implementing experiment is strictly more informative.

    Requires that the given structure implements alpha (else
    NotImplementingError). When mu supports alpha only full informativeness
    is maximal; otherwise the kernel must be a single direction d admitting
    a nonzero stretch mu + lam d that is a supporting prior, decided by
    exact interval intersection over lam.
    """
    value = worst_case(problem, structure, alpha)[0]
    if maxmin(problem, structure).value != value:
        raise NotImplementingError("structure does not implement the action")
    kernel = kernel_of(structure)
    mu = problem.mu
    if set(alpha.support) <= set(best_responses(problem, mu)):
        return kernel.dim == 0
    if kernel.dim != 1:
        return False
    d = kernel.basis[0]

    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    feasible = True

    def add(coeff: Fraction, rhs: Fraction) -> None:
        # constraint coeff * lam <= rhs
        nonlocal lo, hi, feasible
        if coeff > 0:
            bound = rhs / coeff
            if hi is None or bound < hi:
                hi = bound
        elif coeff < 0:
            bound = rhs / coeff
            if lo is None or bound > lo:
                lo = bound
        elif rhs < 0:
            feasible = False

    priors = problem.priors
    for s in range(problem.n_states):
        add(-d[s], mu[s])
    for row, b in zip(priors.ub_matrix, priors.ub_rhs):
        add(dot(row, d), b - dot(row, mu))
    for row in priors.eq_matrix:
        c = dot(row, d)
        if c:
            add(c, F0)
            add(-c, F0)
    u_alpha = problem.mixed_utility(alpha)
    for a in range(problem.n_actions):
        gap_mu = dot(u_alpha, mu) - dot(problem.utility_row(a), mu)
        gap_d = dot(u_alpha, d) - dot(problem.utility_row(a), d)
        add(-gap_d, gap_mu)
    add(dot(u_alpha, d), F0)

    if not feasible:
        return False
    if lo is not None and hi is not None:
        if lo > hi:
            return False
        if lo == hi == 0:
            return False
    return True
