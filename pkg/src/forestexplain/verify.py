"""Brute-force ground truth over the finite feature-space abstraction.

Everything here is independent of the CNF pipeline: predictions are computed
by walking the trees over explicitly enumerated cells. That makes this module
slow and budget-bounded, and exactly for that reason suitable for verifying
the SAT-based results.

Cells are numbered in mixed radix (last feature varies fastest) and sets of
cells are manipulated as arbitrary-size integer bitmasks, so sufficiency
checks are single AND/compare operations.

The DNF tooling at the bottom (parsing, truth tables, prime implicants, and
the reduction of a DNF into an equivalent majority-vote forest) supports the
hardness-reduction checks and the CLI's reduce command.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .abstraction import build_abstraction, interval_representative
from .model import (
    BINARY,
    CATEGORICAL,
    FeatureSpec,
    Forest,
    Instance,
    Leaf,
    Split,
    check_instance,
    predict_index,
)

DEFAULT_BUDGET = 1 << 20


class BudgetExceeded(RuntimeError):
    """The abstract space is too large to enumerate exhaustively."""


class CellEnumerator:
    """Explicit walk over the abstract cells of a forest, one representative
    instance per cell. Unused features are pinned to a single default."""

    def __init__(self, forest: Forest, budget: int = DEFAULT_BUDGET):
        self.forest = forest
        self.abstraction = build_abstraction(forest)
        axes: list[list] = []
        for f, spec in enumerate(forest.features):
            if not self.abstraction.is_used(f):
                if spec.kind == BINARY:
                    axes.append([0])
                elif spec.kind == CATEGORICAL:
                    axes.append([spec.values[0]])
                else:
                    axes.append([0.0])
            elif spec.kind == BINARY:
                axes.append([0, 1])
            elif spec.kind == CATEGORICAL:
                axes.append(list(spec.values))
            else:
                cuts = self.abstraction.thresholds[f]
                axes.append([interval_representative(cuts, i) for i in range(len(cuts) + 1)])
        self.axes = axes
        count = 1
        for axis in axes:
            count *= len(axis)
        if count > budget:
            raise BudgetExceeded(f"{count} cells exceed the budget of {budget}")
        self.count = count
        # stride of a feature = how many consecutive cell indices share its value
        self.strides = []
        stride = count
        for axis in axes:
            stride //= len(axis)
            self.strides.append(stride)

    def __len__(self) -> int:
        return self.count

    def instances(self):
        return itertools.product(*self.axes)

    def axis_position(self, feature: int, value) -> int:
        spec = self.forest.features[feature]
        axis = self.axes[feature]
        if len(axis) == 1:
            return 0
        if spec.kind == BINARY:
            return int(value)
        if spec.kind == CATEGORICAL:
            return axis.index(value)
        cuts = self.abstraction.thresholds[feature]
        from .abstraction import interval_index

        return interval_index(cuts, float(value))

    def agreement_mask(self, feature: int, value) -> int:
        """Bitmask of all cells whose value for the feature matches."""
        stride = self.strides[feature]
        size = len(self.axes[feature])
        pos = self.axis_position(feature, value)
        block = ((1 << stride) - 1) << (pos * stride)
        period = size * stride
        repeats = self.count // period
        # repunit in base 2**period replicates the block across the space
        replicator = ((1 << (period * repeats)) - 1) // ((1 << period) - 1)
        return block * replicator


@dataclass(frozen=True)
class _Space:
    enum: CellEnumerator
    target: int
    used: tuple[int, ...]
    counter_mask: int       # cells predicting something other than the target
    agree: tuple[int, ...]  # per used feature, cells matching the instance


def _build_space(forest: Forest, instance: Instance, budget: int) -> _Space:
    values = check_instance(forest, instance)
    enum = CellEnumerator(forest, budget)
    target = predict_index(forest, values)
    counter = 0
    for i, cell in enumerate(enum.instances()):
        if predict_index(forest, cell) != target:
            counter |= 1 << i
    used = tuple(enum.abstraction.used_features())
    agree = tuple(enum.agreement_mask(f, values[f]) for f in used)
    return _Space(enum=enum, target=target, used=used, counter_mask=counter, agree=agree)


def _sufficiency_table(space: _Space) -> list[bool]:
    """For every subset of used features (as a bitmask over space.used):
    does fixing the instance's values there force the prediction?"""
    u = len(space.used)
    full = (1 << space.enum.count) - 1
    cubes = [0] * (1 << u)
    cubes[0] = full
    suff = [False] * (1 << u)
    suff[0] = space.counter_mask == 0
    for mask in range(1, 1 << u):
        low = (mask & -mask).bit_length() - 1
        cubes[mask] = cubes[mask & (mask - 1)] & space.agree[low]
        suff[mask] = (cubes[mask] & space.counter_mask) == 0
    return suff


def _subset_of(mask: int, used: tuple[int, ...]) -> frozenset[int]:
    return frozenset(used[i] for i in range(len(used)) if mask >> i & 1)


def _canonical(families) -> list[frozenset[int]]:
    return sorted(families, key=lambda s: (len(s), sorted(s)))


def axp_family(forest: Forest, instance: Instance, budget: int = DEFAULT_BUDGET) -> list[frozenset[int]]:
    """All minimal feature sets (0-based) whose values alone force the
    prediction, computed by exhaustive enumeration."""
    space = _build_space(forest, instance, budget)
    suff = _sufficiency_table(space)
    out = []
    for mask in range(len(suff)):
        if not suff[mask]:
            continue
        bit = mask
        minimal = True
        while bit:
            b = bit & -bit
            if suff[mask ^ b]:
                minimal = False
                break
            bit ^= b
        if minimal:
            out.append(_subset_of(mask, space.used))
    return _canonical(out)


def cxp_family(forest: Forest, instance: Instance, budget: int = DEFAULT_BUDGET) -> list[frozenset[int]]:
    """All minimal feature sets whose release (everything else stays fixed)
    admits a different prediction."""
    space = _build_space(forest, instance, budget)
    suff = _sufficiency_table(space)
    u = len(space.used)
    full = (1 << u) - 1
    out = []
    for y in range(len(suff)):
        if suff[full ^ y]:  # freeing y does not break the prediction
            continue
        bit = y
        minimal = True
        while bit:
            b = bit & -bit
            if not suff[(full ^ y) | b]:
                minimal = False
                break
            bit ^= b
        if minimal:
            out.append(_subset_of(y, space.used))
    return _canonical(out)


def is_sufficient(forest: Forest, instance: Instance, features, budget: int = DEFAULT_BUDGET) -> bool:
    """Does fixing the instance's values on the given features (0-based)
    force the prediction everywhere else?"""
    space = _build_space(forest, instance, budget)
    cube = (1 << space.enum.count) - 1
    index = {f: i for i, f in enumerate(space.used)}
    for f in set(features):
        if f in index:
            cube &= space.agree[index[f]]
    return (cube & space.counter_mask) == 0


def check_axp(forest: Forest, instance: Instance, features, budget: int = DEFAULT_BUDGET) -> bool:
    """Is the set exactly an abductive explanation: sufficient and minimal?"""
    feats = set(features)
    space = _build_space(forest, instance, budget)
    index = {f: i for i, f in enumerate(space.used)}
    if any(f not in index for f in feats):
        return False  # an untested feature can never be necessary
    full_cube = (1 << space.enum.count) - 1

    def cube_of(subset):
        cube = full_cube
        for f in subset:
            cube &= space.agree[index[f]]
        return cube

    if cube_of(feats) & space.counter_mask:
        return False
    for f in feats:
        if not cube_of(feats - {f}) & space.counter_mask:
            return False
    return True


def check_cxp(forest: Forest, instance: Instance, features, budget: int = DEFAULT_BUDGET) -> bool:
    """Is the set exactly a contrastive explanation: freeing it flips some
    cell, and freeing any proper subset does not?"""
    feats = set(features)
    space = _build_space(forest, instance, budget)
    index = {f: i for i, f in enumerate(space.used)}
    if any(f not in index for f in feats):
        return False
    full_cube = (1 << space.enum.count) - 1

    def cube_freeing(subset):
        cube = full_cube
        for f in space.used:
            if f not in subset:
                cube &= space.agree[index[f]]
        return cube

    if not cube_freeing(feats) & space.counter_mask:
        return False
    for f in feats:
        if cube_freeing(feats - {f}) & space.counter_mask:
            return False
    return True


def minimal_hitting_sets(collection) -> list[frozenset]:
    """All minimal sets hitting every member. The empty collection is hit by
    the empty set; a collection containing the empty set is unhittable."""
    sets = [frozenset(s) for s in collection]
    if not sets:
        return [frozenset()]
    if any(not s for s in sets):
        return []
    universe = sorted(set().union(*sets))
    hits = []
    for mask in range(1 << len(universe)):
        candidate = frozenset(universe[i] for i in range(len(universe)) if mask >> i & 1)
        if all(candidate & s for s in sets):
            hits.append(candidate)
    return _canonical([h for h in hits if not any(other < h for other in hits)])


# ----- DNF machinery -----

Dnf = tuple  # of frozensets of signed 1-based variable numbers


def parse_dnf(text: str) -> Dnf:
    """One term per line, literals as signed integers; blank lines and lines
    starting with '#' are skipped."""
    terms = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lits = []
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                raise ValueError(f"line {lineno}: literal 0 is not allowed")
            lits.append(lit)
        term = frozenset(lits)
        if any(-l in term for l in term):
            raise ValueError(f"line {lineno}: contradictory term")
        terms.append(term)
    return tuple(terms)


def format_dnf(dnf: Dnf) -> str:
    return "\n".join(" ".join(str(l) for l in sorted(term, key=abs)) for term in dnf) + "\n"


def dnf_variable_count(dnf: Dnf) -> int:
    return max((abs(l) for term in dnf for l in term), default=0)


def _literal_table(lit: int, m: int) -> int:
    """Bitmask over all 2^m assignments where the literal holds; assignment
    index i gives variable v the value (i >> (v-1)) & 1."""
    v = abs(lit)
    half = 1 << (v - 1)
    period = half * 2
    block = ((1 << half) - 1) << (half if lit > 0 else 0)
    repeats = (1 << m) // period
    replicator = ((1 << (period * repeats)) - 1) // ((1 << period) - 1)
    return block * replicator


def dnf_truth_table(dnf: Dnf, m: int) -> int:
    full = (1 << (1 << m)) - 1
    table = 0
    for term in dnf:
        cube = full
        for lit in term:
            cube &= _literal_table(lit, m)
        table |= cube
    return table


def evaluate_dnf(dnf: Dnf, assignment) -> bool:
    """assignment: sequence of 0/1 indexed by variable-1."""
    return any(all((assignment[abs(l) - 1] == 1) == (l > 0) for l in term) for term in dnf)


def prime_implicants(table: int, m: int) -> list[frozenset[int]]:
    """All prime implicants of the boolean function given as a truth table
    bitmask, as literal sets. Exponential; meant for small m."""
    full = (1 << (1 << m)) - 1
    complement = full & ~table

    def is_implicant(term) -> bool:
        cube = full
        for lit in term:
            cube &= _literal_table(lit, m)
        return (cube & complement) == 0

    out = []
    for signs in itertools.product((None, 1, -1), repeat=m):
        term = frozenset((v + 1) * s for v, s in enumerate(signs) if s)
        if not is_implicant(term):
            continue
        if all(not is_implicant(term - {lit}) for lit in term):
            out.append(term)
    return _canonical(out)


def reduce_dnf_to_rf(dnf: Dnf, m: int | None = None) -> Forest:
    """Forest over binary features x1..xm that predicts class "1" exactly on
    the satisfying assignments: one chain tree per term (any deviation from
    the term votes "0") padded with single-leaf "1" trees so that one
    satisfied term already carries the majority."""
    if m is None:
        m = dnf_variable_count(dnf)
    if m <= 0:
        raise ValueError("the formula needs at least one variable")
    features = tuple(FeatureSpec(id=v, name=f"x{v}", kind=BINARY) for v in range(1, m + 1))
    classes = ("0", "1")
    if not dnf:
        return Forest(features=features, classes=classes, trees=(Leaf(0),))
    trees = []
    for term in dnf:
        node = Leaf(1)
        for lit in sorted(term, key=abs, reverse=True):
            f = abs(lit) - 1
            if lit > 0:
                node = Split(f, "<=", 0.0, left=Leaf(0), right=node)
            else:
                node = Split(f, "<=", 0.0, left=node, right=Leaf(0))
        trees.append(node)
    trees.extend(Leaf(1) for _ in range(len(dnf) - 1))
    return Forest(features=features, classes=classes, trees=tuple(trees))
