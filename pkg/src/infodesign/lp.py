"""Exact two-phase simplex with primal, dual, Farkas, and ray certificates.

Programs minimize or maximize a rational objective over variables with
optional per-variable lower bounds (``None`` means free), subject to
equality rows and ``<=`` rows. The solver always minimizes internally; a max
program is negated on the way in and its certificate negated on the way out.

Pivoting follows Bland's rule (lowest eligible index enters, ratio ties
break toward the lowest basic index), so the solver terminates on every
input and identical programs produce identical outcomes.

Certificate conventions, writing y for equality multipliers, w for
inequality multipliers, and s for lower-bound multipliers (s is zero on
free variables):

* Optimal, min:   A_eq^T y + A_ub^T w + s = c,  w <= 0, s >= 0, and
  b_eq.y + b_ub.w + l.s equals the optimal value.
* Optimal, max:   same with w >= 0, s <= 0.
* Infeasible:     A_eq^T y + A_ub^T w + s = 0,  w <= 0, s >= 0, and
  b_eq.y + b_ub.w + l.s > 0 (sense-independent).
* Unbounded:      a feasible base point plus a direction r with
  A_eq r = 0, A_ub r <= 0, r >= 0 on bounded variables, and an objective
  that strictly improves along r.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DimensionMismatch
from .numerics import Vector, dot

F0 = Fraction(0)
F1 = Fraction(1)


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class DualCertificate:
    eq: Vector
    ub: Vector
    lb: Vector


@dataclass(frozen=True)
class FarkasCertificate:
    eq: Vector
    ub: Vector
    lb: Vector


@dataclass(frozen=True)
class ImprovingRay:
    direction: Vector
    base_point: Vector


Certificate = Union[DualCertificate, FarkasCertificate, ImprovingRay]


@dataclass(frozen=True)
class LinearProgram:
    objective: Vector
    sense: str = "min"
    eq_matrix: tuple[Vector, ...] = ()
    eq_rhs: Vector = ()
    ub_matrix: tuple[Vector, ...] = ()
    ub_rhs: Vector = ()
    lower_bounds: Optional[tuple[Optional[Fraction], ...]] = None

    def __post_init__(self) -> None:
        n = len(self.objective)
        if n == 0:
            raise DimensionMismatch("a program needs at least one variable")
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        if len(self.eq_matrix) != len(self.eq_rhs):
            raise DimensionMismatch("equality matrix and rhs lengths differ")
        if len(self.ub_matrix) != len(self.ub_rhs):
            raise DimensionMismatch("inequality matrix and rhs lengths differ")
        for row in self.eq_matrix + self.ub_matrix:
            if len(row) != n:
                raise DimensionMismatch(f"constraint row of length {len(row)}, expected {n}")
        if self.lower_bounds is not None and len(self.lower_bounds) != n:
            raise DimensionMismatch("lower_bounds length differs from variable count")

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def bounds(self) -> tuple[Optional[Fraction], ...]:
        if self.lower_bounds is None:
            return (F0,) * self.n_vars
        return self.lower_bounds


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    optimal_point: Optional[Vector] = None
    optimal_value: Optional[Fraction] = None
    certificate: Optional[Certificate] = None


class _Standard:
    """Standard form min cost.z, rows z = rhs (rhs >= 0), z >= 0."""

    def __init__(self, program: LinearProgram) -> None:
        self.program = program
        n = program.n_vars
        bounds = program.bounds()
        self.bounds = bounds

        # Structural columns: one per bounded variable (shifted by its lower
        # bound), a +/- pair per free variable, then one slack per <= row.
        base_cols: list[tuple[str, int]] = []
        var_cols: list[int] = []
        for j in range(n):
            var_cols.append(len(base_cols))
            if bounds[j] is None:
                base_cols.append(("pos", j))
                base_cols.append(("neg", j))
            else:
                base_cols.append(("shift", j))
        self.var_cols = var_cols
        self.n_base = len(base_cols)
        self.n_ub = len(program.ub_matrix)
        self.n_struct = self.n_base + self.n_ub

        flip = program.sense == "max"
        cost = [F0] * self.n_struct
        for j in range(n):
            c = program.objective[j]
            if flip:
                c = -c
            if not c:
                continue
            col = var_cols[j]
            cost[col] = c
            if bounds[j] is None:
                cost[col + 1] = -c
        self.cost = cost

        rows: list[list[Fraction]] = []
        rhs: list[Fraction] = []
        meta: list[tuple[str, int, int]] = []  # (kind, original index, sign)

        def expand(coeffs: Sequence[Fraction]) -> tuple[list[Fraction], Fraction]:
            out = [F0] * self.n_struct
            delta = F0
            for j, a in enumerate(coeffs):
                if not a:
                    continue
                col = var_cols[j]
                lb = bounds[j]
                out[col] = a
                if lb is None:
                    out[col + 1] = -a
                elif lb:
                    delta += a * lb
            return out, delta

        for i, (coeffs, b) in enumerate(zip(program.eq_matrix, program.eq_rhs)):
            out, delta = expand(coeffs)
            r = b - delta
            sign = 1
            if r < 0:
                out = [-x for x in out]
                r = -r
                sign = -1
            rows.append(out)
            rhs.append(r)
            meta.append(("eq", i, sign))
        for i, (coeffs, b) in enumerate(zip(program.ub_matrix, program.ub_rhs)):
            out, delta = expand(coeffs)
            out[self.n_base + i] = F1
            r = b - delta
            sign = 1
            if r < 0:
                out = [-x for x in out]
                r = -r
                sign = -1
            rows.append(out)
            rhs.append(r)
            meta.append(("ub", i, sign))
        self.rows = rows
        self.rhs = rhs
        self.meta = meta

    def point_from(self, z_by_col: dict[int, Fraction]) -> Vector:
        out = []
        for j in range(self.program.n_vars):
            col = self.var_cols[j]
            lb = self.bounds[j]
            if lb is None:
                out.append(z_by_col.get(col, F0) - z_by_col.get(col + 1, F0))
            else:
                out.append(z_by_col.get(col, F0) + lb)
        return tuple(out)

    def direction_from(self, d_by_col: dict[int, Fraction]) -> Vector:
        out = []
        for j in range(self.program.n_vars):
            col = self.var_cols[j]
            if self.bounds[j] is None:
                out.append(d_by_col.get(col, F0) - d_by_col.get(col + 1, F0))
            else:
                out.append(d_by_col.get(col, F0))
        return tuple(out)


def _pivot(table: list[list[Fraction]], z: list[Fraction], basis: list[int], r: int, c: int) -> None:
    prow = table[r]
    head = prow[c]
    if head != 1:
        prow = [x / head if x else x for x in prow]
        table[r] = prow
    for i in range(len(table)):
        if i == r:
            continue
        f = table[i][c]
        if f:
            table[i] = [a - f * b if b else a for a, b in zip(table[i], prow)]
    f = z[c]
    if f:
        z[:] = [a - f * b if b else a for a, b in zip(z, prow)]
    basis[r] = c


def _run(table: list[list[Fraction]], z: list[Fraction], basis: list[int], n_allowed: int):
    """Bland's rule loop over entering columns 0..n_allowed-1."""
    while True:
        enter = None
        for j in range(n_allowed):
            if z[j] < 0:
                enter = j
                break
        if enter is None:
            return "optimal", None
        leave = None
        best = None
        for i, row in enumerate(table):
            t = row[enter]
            if t > 0:
                ratio = row[-1] / t
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave is None:
            return "unbounded", enter
        _pivot(table, z, basis, leave, enter)


def solve_lp(program: LinearProgram) -> LpOutcome:
    """Solve exactly; the outcome always carries a checkable certificate."""
    std = _Standard(program)
    m = len(std.rows)
    n_struct = std.n_struct
    width = n_struct + m + 1

    table: list[list[Fraction]] = []
    for i in range(m):
        row = std.rows[i] + [F0] * m + [std.rhs[i]]
        row[n_struct + i] = F1
        table.append(row)
    basis = [n_struct + i for i in range(m)]

    # Phase 1: minimize the sum of artificials, priced out from the start.
    z = [F0] * width
    for j in range(n_struct, n_struct + m):
        z[j] = F1
    for row in table:
        z = [a - b if b else a for a, b in zip(z, row)]

    status, _ = _run(table, z, basis, n_struct)
    if status != "optimal":
        raise AssertionError("phase 1 cannot be unbounded")
    infeasibility = -z[-1]
    if infeasibility > 0:
        y = [F1 - z[n_struct + i] for i in range(m)]
        return LpOutcome(
            status=LpStatus.INFEASIBLE,
            certificate=_farkas_from_duals(std, y, z),
        )

    # Drive basic artificials out where a structural pivot exists; rows with
    # no structural entry are redundant and stay inert at zero.
    for r in range(m):
        if basis[r] >= n_struct:
            col = next((j for j in range(n_struct) if table[r][j]), None)
            if col is not None:
                _pivot(table, z, basis, r, col)

    # Phase 2 on the real objective.
    z = std.cost + [F0] * m + [F0]
    for i, row in enumerate(table):
        if basis[i] < n_struct:
            cb = std.cost[basis[i]]
            if cb:
                z = [a - cb * b if b else a for a, b in zip(z, row)]

    status, enter = _run(table, z, basis, n_struct)
    z_by_col = {basis[i]: table[i][-1] for i in range(m)}

    if status == "unbounded":
        d_by_col = {enter: F1}
        for i in range(m):
            t = table[i][enter]
            if t:
                d_by_col[basis[i]] = -t
        ray = ImprovingRay(
            direction=std.direction_from(d_by_col),
            base_point=std.point_from(z_by_col),
        )
        return LpOutcome(status=LpStatus.UNBOUNDED, certificate=ray)

    point = std.point_from(z_by_col)
    value = dot(program.objective, point)
    y = [-z[n_struct + i] for i in range(m)]
    dual = _dual_from_duals(std, y, z)
    return LpOutcome(
        status=LpStatus.OPTIMAL,
        optimal_point=point,
        optimal_value=value,
        certificate=dual,
    )


def _split_row_duals(std: _Standard, y: Sequence[Fraction]) -> tuple[Vector, Vector]:
    eq = [F0] * len(std.program.eq_matrix)
    ub = [F0] * len(std.program.ub_matrix)
    for i, (kind, orig, sign) in enumerate(std.meta):
        val = y[i] if sign == 1 else -y[i]
        if kind == "eq":
            eq[orig] = val
        else:
            ub[orig] = val
    return tuple(eq), tuple(ub)


def _bound_duals(std: _Standard, z: Sequence[Fraction]) -> Vector:
    out = []
    for j in range(std.program.n_vars):
        if std.bounds[j] is None:
            out.append(F0)
        else:
            out.append(z[std.var_cols[j]])
    return tuple(out)


def _farkas_from_duals(std: _Standard, y: Sequence[Fraction], z: Sequence[Fraction]) -> FarkasCertificate:
    eq, ub = _split_row_duals(std, y)
    return FarkasCertificate(eq=eq, ub=ub, lb=_bound_duals(std, z))


def _dual_from_duals(std: _Standard, y: Sequence[Fraction], z: Sequence[Fraction]) -> DualCertificate:
    eq, ub = _split_row_duals(std, y)
    lb = _bound_duals(std, z)
    if std.program.sense == "max":
        eq = tuple(-v for v in eq)
        ub = tuple(-v for v in ub)
        lb = tuple(-v for v in lb)
    return DualCertificate(eq=eq, ub=ub, lb=lb)


def feasible_point(program: LinearProgram) -> LpOutcome:
    """Find any feasible point (objective ignored) or certify emptiness.

    The returned value and dual certificate refer to the all-zero objective
    used internally; callers should only rely on status, point, and the
    Farkas certificate.
    """
    probe = LinearProgram(
        objective=(F0,) * program.n_vars,
        sense="min",
        eq_matrix=program.eq_matrix,
        eq_rhs=program.eq_rhs,
        ub_matrix=program.ub_matrix,
        ub_rhs=program.ub_rhs,
        lower_bounds=program.lower_bounds,
    )
    return solve_lp(probe)


def _point_feasible(program: LinearProgram, point: Sequence[Fraction]) -> bool:
    if len(point) != program.n_vars:
        return False
    for lb, x in zip(program.bounds(), point):
        if lb is not None and x < lb:
            return False
    for row, b in zip(program.eq_matrix, program.eq_rhs):
        if dot(row, point) != b:
            return False
    for row, b in zip(program.ub_matrix, program.ub_rhs):
        if dot(row, point) > b:
            return False
    return True


def verify_outcome(program: LinearProgram, outcome: LpOutcome) -> bool:
    """Re-check an outcome against the raw program data, exactly."""
    n = program.n_vars
    bounds = program.bounds()

    def stationarity(cert, target: Sequence[Fraction]) -> bool:
        if len(cert.eq) != len(program.eq_matrix) or len(cert.ub) != len(program.ub_matrix):
            return False
        if len(cert.lb) != n:
            return False
        for j in range(n):
            total = cert.lb[j]
            for row, yv in zip(program.eq_matrix, cert.eq):
                if yv and row[j]:
                    total += yv * row[j]
            for row, wv in zip(program.ub_matrix, cert.ub):
                if wv and row[j]:
                    total += wv * row[j]
            if total != target[j]:
                return False
        return True

    def bound_value(cert) -> Optional[Fraction]:
        total = dot(cert.eq, program.eq_rhs) + dot(cert.ub, program.ub_rhs)
        for j in range(n):
            if bounds[j] is None:
                if cert.lb[j]:
                    return None
            elif cert.lb[j]:
                total += cert.lb[j] * bounds[j]
        return total

    if outcome.status is LpStatus.OPTIMAL:
        cert = outcome.certificate
        if not isinstance(cert, DualCertificate):
            return False
        if outcome.optimal_point is None or outcome.optimal_value is None:
            return False
        if not _point_feasible(program, outcome.optimal_point):
            return False
        if dot(program.objective, outcome.optimal_point) != outcome.optimal_value:
            return False
        if program.sense == "min":
            if any(v > 0 for v in cert.ub) or any(v < 0 for v in cert.lb):
                return False
        else:
            if any(v < 0 for v in cert.ub) or any(v > 0 for v in cert.lb):
                return False
        if not stationarity(cert, program.objective):
            return False
        return bound_value(cert) == outcome.optimal_value

    if outcome.status is LpStatus.INFEASIBLE:
        cert = outcome.certificate
        if not isinstance(cert, FarkasCertificate):
            return False
        if any(v > 0 for v in cert.ub) or any(v < 0 for v in cert.lb):
            return False
        if not stationarity(cert, (F0,) * n):
            return False
        val = bound_value(cert)
        return val is not None and val > 0

    if outcome.status is LpStatus.UNBOUNDED:
        cert = outcome.certificate
        if not isinstance(cert, ImprovingRay):
            return False
        if not _point_feasible(program, cert.base_point):
            return False
        d = cert.direction
        if len(d) != n:
            return False
        for row in program.eq_matrix:
            if dot(row, d) != 0:
                return False
        for row in program.ub_matrix:
            if dot(row, d) > 0:
                return False
        for lb, dv in zip(bounds, d):
            if lb is not None and dv < 0:
                return False
        gain = dot(program.objective, d)
        return gain < 0 if program.sense == "min" else gain > 0

    return False
