"""Exact rational linear programming and polytope vertex enumeration.

Every number that flows through this package is a `fractions.Fraction`. There
is no floating point anywhere: the simplex method pivots over exact rationals
with Bland's rule, so it always terminates and its certificates hold with
equality rather than up to a tolerance.

Example usage:

    lp = LinearProgram(
        objective=[1, 1],
        constraints=[Constraint([1, 0], LE, 1), Constraint([0, 1], LE, 1)],
        sense=MAXIMIZE)
    result = solve_lp(lp)
    assert result.status == OPTIMAL and result.value == 2

    square = Polytope.from_rows(2, [([1, 0], 1), ([0, 1], 1), ([-1, 0], 0), ([0, -1], 0)])
    enumerate_vertices(square)  # [(0, 0), (0, 1), (1, 0), (1, 1)]

"""

from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
import itertools

Point = Tuple[Fraction, ...]

LE = '<='
GE = '>='
EQ = '='
RELATIONS = (LE, GE, EQ)

MINIMIZE = 'minimize'
MAXIMIZE = 'maximize'

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'

# Basis enumeration is exponential in the dimension.
DEFAULT_DIMENSION_LIMIT = 14


class LimitError(Exception):
    """An exponential algorithm refused an instance above its guard rail."""


class DimensionLimitError(LimitError):
    pass


class UnboundedPolytopeError(ValueError):
    pass


class LPFormatError(ValueError):
    pass


def to_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError('not a rational: %r' % (value, ))
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError('not a rational: %r' % (value, ))


def format_rational(value: Fraction) -> str:
    return str(to_rational(value))


def _no_status(message: str) -> None:
    pass


class Constraint(NamedTuple):
    coefficients: Tuple[Fraction, ...]
    relation: str
    rhs: Fraction


class LinearProgram(NamedTuple):
    objective: Sequence
    constraints: Sequence[Constraint]
    sense: str = MINIMIZE
    # None entries mark free variables; an omitted list means all lower bounds are 0.
    lower_bounds: Optional[Sequence] = None


class LPResult(NamedTuple):
    status: str
    value: Optional[Fraction] = None
    primal: Optional[Point] = None
    dual: Optional[Point] = None


class _Normalized(NamedTuple):
    objective: List[Fraction]
    rows: List[Tuple[List[Fraction], str, Fraction]]
    lower: List[Optional[Fraction]]


def _normalize(lp: LinearProgram) -> _Normalized:
    if lp.sense not in (MINIMIZE, MAXIMIZE):
        raise LPFormatError('unknown sense: %r' % (lp.sense, ))
    n = len(lp.objective)
    objective = [to_rational(c) for c in lp.objective]
    rows = []
    for index, constraint in enumerate(lp.constraints):
        coefficients, relation, rhs = constraint
        if relation not in RELATIONS:
            raise LPFormatError('constraint %d: unknown relation %r' % (index, relation))
        if len(coefficients) != n:
            raise LPFormatError('constraint %d has %d coefficients, objective has %d' %
                                (index, len(coefficients), n))
        rows.append(([to_rational(a) for a in coefficients], relation, to_rational(rhs)))
    if lp.lower_bounds is None:
        lower = [Fraction(0)] * n
    else:
        if len(lp.lower_bounds) != n:
            raise LPFormatError('%d lower bounds for %d variables' % (len(lp.lower_bounds), n))
        lower = [None if l is None else to_rational(l) for l in lp.lower_bounds]
    return _Normalized(objective, rows, lower)


def _pivot(tableau: List[List[Fraction]], objective_row: List[Fraction], r: int, col: int) -> None:
    pivot_row = tableau[r]
    p = pivot_row[col]
    if p != 1:
        pivot_row[:] = [x / p for x in pivot_row]
    nonzero = [(j, x) for j, x in enumerate(pivot_row) if x]
    for i, row in enumerate(tableau):
        if i == r: continue
        f = row[col]
        if not f: continue
        for j, x in nonzero:
            row[j] -= f * x
    f = objective_row[col]
    if f:
        for j, x in nonzero:
            objective_row[j] -= f * x


def _price_out(tableau, basis, cost) -> List[Fraction]:
    width = len(cost) + 1
    objective_row = list(cost) + [Fraction(0)]
    for i, b in enumerate(basis):
        cb = cost[b]
        if not cb: continue
        row = tableau[i]
        for j in range(width):
            if row[j]:
                objective_row[j] -= cb * row[j]
    return objective_row


def _simplex(tableau, basis, objective_row, allowed: List[bool]) -> bool:
    """Maximizes in place with Bland's rule. Returns False if unbounded."""
    while True:
        col = next((j for j, d in enumerate(objective_row[:-1]) if d > 0 and allowed[j]), None)
        if col is None:
            return True
        best = None
        for i, row in enumerate(tableau):
            a = row[col]
            if a <= 0: continue
            key = (row[-1] / a, basis[i])
            if best is None or key < best[0]:
                best = (key, i)
        if best is None:
            return False
        r = best[1]
        _pivot(tableau, objective_row, r, col)
        basis[r] = col


def solve_lp(lp: LinearProgram) -> LPResult:
    """Solves `lp` exactly with a dense two-phase tableau simplex.

    The dual point has one entry per constraint, signed so that
    `objective - A^T dual` is the reduced-cost vector of the original problem
    and `dual_objective(lp, result) == result.value` at optimality.
    """
    normalized = _normalize(lp)
    n = len(normalized.objective)
    sign = 1 if lp.sense == MAXIMIZE else -1

    # Structural columns: one per bounded variable, two (x+ and x-) per free one.
    columns: List[Tuple[int, int]] = []
    for j, l in enumerate(normalized.lower):
        columns.append((j, 1))
        if l is None:
            columns.append((j, -1))
    shift = [l if l is not None else Fraction(0) for l in normalized.lower]

    rows = []
    sigma = []
    for coefficients, relation, rhs in normalized.rows:
        rhs -= sum(a * s for a, s in zip(coefficients, shift))
        structural = [coefficients[j] * s for j, s in columns]
        if rhs < 0:
            structural = [-a for a in structural]
            rhs = -rhs
            relation = {LE: GE, GE: LE, EQ: EQ}[relation]
            sigma.append(-1)
        else:
            sigma.append(1)
        rows.append((structural, relation, rhs))

    m = len(rows)
    num_structural = len(columns)
    # Auxiliary columns: a slack (<=) or surplus (>=) per inequality, then artificials.
    aux_of_row = {}
    artificial_of_row = {}
    width = num_structural
    for i, (_, relation, _) in enumerate(rows):
        if relation != EQ:
            aux_of_row[i] = width
            width += 1
    first_artificial = width
    for i, (_, relation, _) in enumerate(rows):
        if relation != LE:
            artificial_of_row[i] = width
            width += 1

    tableau = []
    basis = []
    identity = []
    for i, (structural, relation, rhs) in enumerate(rows):
        row = structural + [Fraction(0)] * (width - num_structural) + [rhs]
        if relation == LE:
            row[aux_of_row[i]] = Fraction(1)
            identity.append(aux_of_row[i])
        else:
            if relation == GE:
                row[aux_of_row[i]] = Fraction(-1)
            row[artificial_of_row[i]] = Fraction(1)
            identity.append(artificial_of_row[i])
        basis.append(identity[-1])
        tableau.append(row)

    if artificial_of_row:
        phase_one_cost = [Fraction(0)] * first_artificial + [Fraction(-1)] * (width - first_artificial)
        objective_row = _price_out(tableau, basis, phase_one_cost)
        _simplex(tableau, basis, objective_row, [True] * width)
        if objective_row[-1] != 0:
            return LPResult(status=INFEASIBLE)
        # Drive zero-level artificials out of the basis where possible; rows
        # where that fails are redundant and keep their artificial at zero.
        for i in range(m):
            if basis[i] < first_artificial: continue
            col = next((j for j in range(first_artificial) if tableau[i][j]), None)
            if col is None: continue
            _pivot(tableau, objective_row, i, col)
            basis[i] = col

    cost = [sign * normalized.objective[j] * s for j, s in columns]
    cost += [Fraction(0)] * (width - num_structural)
    objective_row = _price_out(tableau, basis, cost)
    allowed = [j < first_artificial for j in range(width)]
    if not _simplex(tableau, basis, objective_row, allowed):
        return LPResult(status=UNBOUNDED)

    values = [Fraction(0)] * width
    for i, b in enumerate(basis):
        values[b] = tableau[i][-1]
    primal = list(shift)
    for k, (j, s) in enumerate(columns):
        primal[j] += s * values[k]
    dual = [sign * sigma[i] * -objective_row[identity[i]] for i in range(m)]
    value = sum((c * x for c, x in zip(normalized.objective, primal)), Fraction(0))
    return LPResult(status=OPTIMAL, value=value, primal=tuple(primal), dual=tuple(dual))


def reduced_costs(lp: LinearProgram, dual: Sequence[Fraction]) -> List[Fraction]:
    normalized = _normalize(lp)
    d = list(normalized.objective)
    for y, (coefficients, _, _) in zip(dual, normalized.rows):
        if not y: continue
        for j, a in enumerate(coefficients):
            d[j] -= y * a
    return d


def dual_objective(lp: LinearProgram, dual: Sequence[Fraction]) -> Fraction:
    normalized = _normalize(lp)
    total = sum((y * rhs for y, (_, _, rhs) in zip(dual, normalized.rows)), Fraction(0))
    for l, d in zip(normalized.lower, reduced_costs(lp, dual)):
        if l is not None:
            total += l * d
    return total


def verify_lp_result(lp: LinearProgram, result: LPResult) -> bool:
    """Exact optimality check: primal and dual feasibility plus equal objectives."""
    if result.status != OPTIMAL:
        return False
    normalized = _normalize(lp)
    s = 1 if lp.sense == MAXIMIZE else -1
    x = result.primal
    for l, xj in zip(normalized.lower, x):
        if l is not None and xj < l:
            return False
    for (coefficients, relation, rhs), y in zip(normalized.rows, result.dual):
        lhs = sum((a * xj for a, xj in zip(coefficients, x)), Fraction(0))
        if relation == LE and (lhs > rhs or s * y < 0):
            return False
        if relation == GE and (lhs < rhs or s * y > 0):
            return False
        if relation == EQ and lhs != rhs:
            return False
        if y and lhs != rhs:
            return False
    for l, d, xj in zip(normalized.lower, reduced_costs(lp, result.dual), x):
        if l is None and d != 0:
            return False
        if l is not None and (s * d > 0 or (d and xj != l)):
            return False
    value = sum((c * xj for c, xj in zip(normalized.objective, x)), Fraction(0))
    return value == result.value == dual_objective(lp, result.dual)


def solve_linear_system(matrix: Sequence[Sequence[Fraction]],
                        rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """Gauss-Jordan elimination on a square system; None when singular."""
    size = len(matrix)
    rows = [[to_rational(x) for x in row] + [to_rational(b)] for row, b in zip(matrix, rhs)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col]), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        pivot_row = rows[col]
        p = pivot_row[col]
        if p != 1:
            pivot_row[:] = [x / p for x in pivot_row]
        nonzero = [(j, x) for j, x in enumerate(pivot_row) if x and j > col]
        for r in range(size):
            if r == col: continue
            f = rows[r][col]
            if not f: continue
            rows[r][col] = Fraction(0)
            for j, x in nonzero:
                rows[r][j] -= f * x
    return [row[-1] for row in rows]


def matrix_rank(matrix: Sequence[Sequence[Fraction]]) -> int:
    rows = [[to_rational(x) for x in row] for row in matrix]
    rank = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None: continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(rank + 1, len(rows)):
            f = rows[r][col] / rows[rank][col]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


class Polytope(NamedTuple):
    """H-representation {x : a.x <= b for every (a, b) in inequalities}."""
    dimension: int
    inequalities: Tuple[Tuple[Tuple[Fraction, ...], Fraction], ...]

    @classmethod
    def from_rows(cls, dimension: int, rows) -> 'Polytope':
        inequalities = []
        for coefficients, rhs in rows:
            if len(coefficients) != dimension:
                raise LPFormatError('inequality has %d coefficients in dimension %d' %
                                    (len(coefficients), dimension))
            inequalities.append((tuple(to_rational(a) for a in coefficients), to_rational(rhs)))
        return cls(dimension=dimension, inequalities=tuple(inequalities))

    def contains(self, point: Sequence[Fraction]) -> bool:
        return all(
            sum((a * x for a, x in zip(coefficients, point)), Fraction(0)) <= rhs
            for coefficients, rhs in self.inequalities)

    def tight_rows(self, point: Sequence[Fraction]) -> List[int]:
        return [
            k for k, (coefficients, rhs) in enumerate(self.inequalities)
            if sum((a * x for a, x in zip(coefficients, point)), Fraction(0)) == rhs
        ]


def _coordinate_lp(p: Polytope, j: int, sense: str) -> LinearProgram:
    objective = [Fraction(0)] * p.dimension
    objective[j] = Fraction(1)
    return LinearProgram(
        objective=objective,
        constraints=[Constraint(a, LE, b) for a, b in p.inequalities],
        sense=sense,
        lower_bounds=[None] * p.dimension)


def is_bounded(p: Polytope) -> bool:
    """True for bounded (including empty) polytopes."""
    for j in range(p.dimension):
        for sense in (MINIMIZE, MAXIMIZE):
            status = solve_lp(_coordinate_lp(p, j, sense)).status
            if status == INFEASIBLE:
                return True
            if status == UNBOUNDED:
                return False
    return True


def _vertices_with_first_row(args) -> List[Point]:
    p, first = args
    found = []
    rows = p.inequalities
    for rest in itertools.combinations(range(first + 1, len(rows)), p.dimension - 1):
        chosen = (first, ) + rest
        point = solve_linear_system([rows[k][0] for k in chosen], [rows[k][1] for k in chosen])
        if point is None: continue
        if p.contains(point):
            found.append(tuple(point))
    return found


def enumerate_vertices(p: Polytope,
                       dimension_limit: int = DEFAULT_DIMENSION_LIMIT,
                       jobs: int = 1,
                       log_status: Callable[[str], None] = _no_status) -> List[Point]:
    """Returns every vertex of the bounded polytope `p`, sorted lexicographically.

    Every `dimension`-subset of the inequality rows is solved as an equation
    system; nonsingular solutions that satisfy all rows are vertices.
    Degenerate vertices are reached from several bases and deduplicated.
    """
    if p.dimension > dimension_limit:
        raise DimensionLimitError('dimension %d exceeds the vertex enumeration limit %d' %
                                  (p.dimension, dimension_limit))
    if not is_bounded(p):
        raise UnboundedPolytopeError('polytope in dimension %d is unbounded' % (p.dimension, ))
    if p.dimension == 0:
        return [()] if all(rhs >= 0 for _, rhs in p.inequalities) else []
    firsts = list(range(len(p.inequalities) - p.dimension + 1))
    vertices = set()
    tasks = [(p, first) for first in firsts]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            results = executor.map(_vertices_with_first_row, tasks)
            for done, found in enumerate(results, 1):
                vertices.update(found)
                log_status('rational_core: basis groups %d/%d' % (done, len(tasks)))
    else:
        for done, task in enumerate(tasks, 1):
            vertices.update(_vertices_with_first_row(task))
            log_status('rational_core: basis groups %d/%d' % (done, len(tasks)))
    return sorted(vertices)
