"""Worst cases, saddle points, supporting priors, and the researcher's pick.

The identified set of an experiment is the prior polytope intersected with
an affine slice through mu, so every inner minimization here is rewritten
over coordinates lambda on the experiment's kernel: nu = mu + D lambda.
That keeps each solve at the dimension of what the experiment conceals
rather than the full state count.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import lp
from .errors import NoImplementableActionError
from .model import (
    DecisionProblem,
    InformationStructure,
    MixedAction,
    kernel_of,
    payoff,
)
from .numerics import Vector, dot

F0 = Fraction(0)
F1 = Fraction(1)


@dataclass(frozen=True)
class _KernelRegion:
    """Feasible lambda region of {mu + D lambda in the prior set}.

    eq rows have zero right-hand side because mu satisfies the prior set's
    equalities exactly; ub rows collect the polytope's <= rows followed by
    the state nonnegativity rows.
    """

    directions: tuple[Vector, ...]
    eq_rows: tuple[Vector, ...]
    ub_rows: tuple[Vector, ...]
    ub_rhs: Vector


def _kernel_region(problem: DecisionProblem, structure: InformationStructure) -> _KernelRegion:
    basis = kernel_of(structure).basis
    mu = problem.mu
    priors = problem.priors
    eq_rows = []
    for row in priors.eq_matrix:
        eq_rows.append(tuple(dot(row, d) for d in basis))
    ub_rows = []
    ub_rhs = []
    for row, b in zip(priors.ub_matrix, priors.ub_rhs):
        ub_rows.append(tuple(dot(row, d) for d in basis))
        ub_rhs.append(b - dot(row, mu))
    for s in range(problem.n_states):
        ub_rows.append(tuple(-d[s] for d in basis))
        ub_rhs.append(mu[s])
    return _KernelRegion(tuple(basis), tuple(eq_rows), tuple(ub_rows), tuple(ub_rhs))


def _point_on_kernel(mu: Vector, directions: Sequence[Vector], lam: Sequence[Fraction]) -> Vector:
    out = list(mu)
    for coeff, d in zip(lam, directions):
        if coeff:
            for s, v in enumerate(d):
                if v:
                    out[s] += coeff * v
    return tuple(out)


def _interval(region: _KernelRegion) -> tuple[Fraction, Fraction]:
    """Exact feasible interval for a one-dimensional kernel region."""
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    for row in region.eq_rows:
        if row[0]:
            lo = F0 if lo is None else max(lo, F0)
            hi = F0 if hi is None else min(hi, F0)
    for row, b in zip(region.ub_rows, region.ub_rhs):
        c = row[0]
        if c > 0:
            bound = b / c
            hi = bound if hi is None else min(hi, bound)
        elif c < 0:
            bound = b / c
            lo = bound if lo is None else max(lo, bound)
    if lo is None or hi is None or lo > F0 or hi < F0:
        raise AssertionError("kernel segment must be bounded and contain zero")
    return lo, hi


def worst_case(
    problem: DecisionProblem, structure: InformationStructure, alpha: MixedAction
) -> tuple[Fraction, Vector]:
    """Exact minimum of the action's payoff over the identified set, with a minimizer."""
    u = problem.mixed_utility(alpha)
    mu = problem.mu
    base = dot(u, mu)
    region = _kernel_region(problem, structure)
    k = len(region.directions)
    if k == 0:
        return base, mu
    costs = tuple(dot(u, d) for d in region.directions)
    if k == 1:
        lo, hi = _interval(region)
        c = costs[0]
        lam = hi if c < 0 else (lo if c > 0 else F0)
        return base + c * lam, _point_on_kernel(mu, region.directions, (lam,))
    program = lp.LinearProgram(
        objective=costs,
        sense="min",
        eq_matrix=region.eq_rows,
        eq_rhs=(F0,) * len(region.eq_rows),
        ub_matrix=region.ub_rows,
        ub_rhs=region.ub_rhs,
        lower_bounds=(None,) * k,
    )
    out = lp.solve_lp(program)
    if out.status is not lp.LpStatus.OPTIMAL:
        raise AssertionError("inner minimization over a nonempty compact set must be optimal")
    nu = _point_on_kernel(mu, region.directions, out.optimal_point)
    return base + out.optimal_value, nu


@dataclass(frozen=True)
class SaddleCertificate:
    """Witness (alpha*, nu*) that a maxmin problem is solved at `value`.

    alpha* best-responds to nu*, nu* is worst for alpha* over the identified
    set, and both facts are checkable exactly via `verify`.
    """

    alpha_star: MixedAction
    nu_star: Vector
    value: Fraction

    def verify(self, problem: DecisionProblem, structure: InformationStructure) -> bool:
        if payoff(self.alpha_star, self.nu_star, problem) != self.value:
            return False
        for a in range(problem.n_actions):
            if dot(problem.utility_row(a), self.nu_star) > self.value:
                return False
        # membership in the identified set: inside the prior set and shifted
        # from mu along the experiment's kernel
        if not problem.priors.contains(self.nu_star):
            return False
        shift = tuple(a - b for a, b in zip(self.nu_star, problem.mu))
        if not kernel_of(structure).contains_vector(shift):
            return False
        return worst_case(problem, structure, self.alpha_star)[0] == self.value


def maxmin(problem: DecisionProblem, structure: InformationStructure) -> SaddleCertificate:
    """Solve max over mixed actions of the worst-case payoff, with a saddle witness.

    The outer problem is one linear program: dualize the inner minimization
    over the kernel coordinates and maximize jointly over the action weights
    and the inner dual variables. The worst-case prior is then recovered from
    the mirror problem (minimize over the identified set the best pure
    response), whose solutions pair with any maxmin action to form a saddle.
    """
    region = _kernel_region(problem, structure)
    k = len(region.directions)
    n_actions = problem.n_actions
    mu = problem.mu
    action_means = tuple(dot(problem.utility_row(a), mu) for a in range(n_actions))

    if k == 0:
        best = max(action_means)
        choice = action_means.index(best)
        return SaddleCertificate(MixedAction.pure(choice, n_actions), mu, best)

    action_dirs = tuple(
        tuple(dot(problem.utility_row(a), d) for d in region.directions)
        for a in range(n_actions)
    )

    n_eq = len(region.eq_rows)
    n_ub = len(region.ub_rows)
    # Variables: action weights, multipliers y on eq rows (free), multipliers
    # v >= 0 standing for -w on ub rows.
    objective = list(action_means) + [F0] * n_eq + [-b for b in region.ub_rhs]
    eq_matrix = []
    for i in range(k):
        row = [-action_dirs[a][i] for a in range(n_actions)]
        row += [region.eq_rows[r][i] for r in range(n_eq)]
        row += [-region.ub_rows[r][i] for r in range(n_ub)]
        eq_matrix.append(tuple(row))
    eq_matrix.append(tuple([F1] * n_actions + [F0] * (n_eq + n_ub)))
    eq_rhs = (F0,) * k + (F1,)
    bounds = tuple([F0] * n_actions + [None] * n_eq + [F0] * n_ub)
    program = lp.LinearProgram(
        objective=tuple(objective),
        sense="max",
        eq_matrix=tuple(eq_matrix),
        eq_rhs=eq_rhs,
        lower_bounds=bounds,
    )
    out = lp.solve_lp(program)
    if out.status is not lp.LpStatus.OPTIMAL:
        raise AssertionError("maxmin program must have an optimum")
    alpha_star = MixedAction(out.optimal_point[:n_actions])
    value = out.optimal_value
    nu_star = _minmax_prior(problem, region, action_dirs, action_means, value)
    return SaddleCertificate(alpha_star, nu_star, value)


def _minmax_prior(
    problem: DecisionProblem,
    region: _KernelRegion,
    action_dirs: Sequence[Vector],
    action_means: Vector,
    value: Fraction,
) -> Vector:
    """Minimize over the identified set the best pure-action payoff.

    By the minimax theorem this program's value equals the maxmin value and
    any minimizer supports a saddle with any maxmin-optimal action.
    """
    k = len(region.directions)
    n_actions = len(action_dirs)
    # Variables: lambda (free) and the epigraph variable t (free).
    objective = (F0,) * k + (F1,)
    ub_matrix = []
    ub_rhs = []
    for a in range(n_actions):
        ub_matrix.append(tuple(action_dirs[a]) + (-F1,))
        ub_rhs.append(-action_means[a])
    for row, b in zip(region.ub_rows, region.ub_rhs):
        ub_matrix.append(tuple(row) + (F0,))
        ub_rhs.append(b)
    eq_matrix = tuple(tuple(row) + (F0,) for row in region.eq_rows)
    program = lp.LinearProgram(
        objective=objective,
        sense="min",
        eq_matrix=eq_matrix,
        eq_rhs=(F0,) * len(eq_matrix),
        ub_matrix=tuple(ub_matrix),
        ub_rhs=tuple(ub_rhs),
        lower_bounds=(None,) * (k + 1),
    )
    out = lp.solve_lp(program)
    if out.status is not lp.LpStatus.OPTIMAL:
        raise AssertionError("mirror program must have an optimum")
    if out.optimal_value != value:
        raise AssertionError("maxmin and its mirror disagree; exact duality is broken")
    return _point_on_kernel(problem.mu, region.directions, out.optimal_point[:k])


def best_responses(problem: DecisionProblem, nu: Sequence[Fraction]) -> tuple[int, ...]:
    """Indices of pure actions maximizing expected utility under nu, exactly."""
    if len(nu) != problem.n_states:
        raise AssertionError("state distribution length does not match the problem")
    payoffs = [dot(problem.utility_row(a), nu) for a in range(problem.n_actions)]
    top = max(payoffs)
    return tuple(a for a, v in enumerate(payoffs) if v == top)


@dataclass(frozen=True)
class SupportingPrior:
    """A prior under which the action is optimal and no better than under mu."""

    nu: Vector
    slack: Fraction  # payoff at mu minus payoff at nu; nonnegative


def supporting_prior_program(problem: DecisionProblem, alpha: MixedAction) -> lp.LinearProgram:
    """Feasibility system for a supporting prior of alpha."""
    n = problem.n_states
    u_alpha = problem.mixed_utility(alpha)
    priors = problem.priors
    ub_matrix = list(priors.ub_matrix)
    ub_rhs = list(priors.ub_rhs)
    for a in range(problem.n_actions):
        row = problem.utility_row(a)
        ub_matrix.append(tuple(row[s] - u_alpha[s] for s in range(n)))
        ub_rhs.append(F0)
    ub_matrix.append(u_alpha)
    ub_rhs.append(dot(u_alpha, problem.mu))
    return lp.LinearProgram(
        objective=(F0,) * n,
        sense="min",
        eq_matrix=((F1,) * n,) + priors.eq_matrix,
        eq_rhs=(F1,) + priors.eq_rhs,
        ub_matrix=tuple(ub_matrix),
        ub_rhs=tuple(ub_rhs),
    )


def supporting_prior(problem: DecisionProblem, alpha: MixedAction) -> Optional[SupportingPrior]:
    """A witness prior supporting alpha, or None if the system is infeasible."""
    out = lp.feasible_point(supporting_prior_program(problem, alpha))
    if out.status is not lp.LpStatus.OPTIMAL:
        return None
    nu = out.optimal_point
    u_alpha = problem.mixed_utility(alpha)
    return SupportingPrior(nu=nu, slack=dot(u_alpha, problem.mu) - dot(u_alpha, nu))


def is_implementable(problem: DecisionProblem, alpha: MixedAction) -> bool:
    """Whether some experiment makes alpha worst-case optimal."""
    return supporting_prior(problem, alpha) is not None


@dataclass(frozen=True)
class ResearcherOptimum:
    action: int
    supporting: SupportingPrior
    structure: InformationStructure
    certificate: "SaddleCertificate"


def researcher_optimum(
    problem: DecisionProblem, researcher_values: Sequence[Fraction]
) -> ResearcherOptimum:
    """Best implementable pure action for the researcher, with its experiment.

    Only pure actions are scanned; ties break toward the earlier action.
    """
    from .design import implementing_structure  # local import, design builds on solver

    if len(researcher_values) != problem.n_actions:
        raise AssertionError("researcher values must cover every action")
    candidates = [
        a
        for a in range(problem.n_actions)
        if is_implementable(problem, MixedAction.pure(a, problem.n_actions))
    ]
    if not candidates:
        raise NoImplementableActionError("no pure action is implementable")
    best = max(candidates, key=lambda a: (researcher_values[a], -a))
    alpha = MixedAction.pure(best, problem.n_actions)
    structure, certificate = implementing_structure(problem, alpha)
    u_alpha = problem.mixed_utility(alpha)
    supporting = SupportingPrior(
        nu=certificate.nu_star,
        slack=dot(u_alpha, problem.mu) - certificate.value,
    )
    return ResearcherOptimum(best, supporting, structure, certificate)
