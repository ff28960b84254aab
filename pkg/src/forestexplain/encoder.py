"""CNF encoding of "the forest does not predict the target class".

The formula's models correspond exactly to cells of the feature-space
abstraction on which the majority vote (ties to the lower class index) picks
some class other than the target. Explanations are then computed by a SAT
oracle over this formula with the instance's soft literals as assumptions.

Layout of the variable space:
  1..A          abstraction indicators (see abstraction.py)
  then          threshold auxiliaries: a true means "value above this cut"
  then          per tree: one vote indicator per class, plus auxiliaries for
                categorical subset tests met while walking the paths
  then          comparator wiring for the vote count circuit

Ordinal auxiliaries come in two flavours. The default chains neighbouring
cuts so each auxiliary is defined from the next one in two short
equivalences; the fallback spells out both full-width interval disjunctions
per cut, which is quadratic in the cut count but handy as a differential
reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abstraction import Abstraction, build_abstraction, interval_representative, soft_literals
from .cardinality import VarPool, at_least, at_least_output, exactly_one
from .dimacs import write_dimacs
from .model import BINARY, CATEGORICAL, Forest, Instance, Split, iter_paths, predict_index


@dataclass(frozen=True)
class EncoderOptions:
    chaining: bool = True            # chain threshold auxiliaries instead of full disjunctions
    naive_comparators: bool = False  # one comparator pair per rival class, no selectors
    card_family: str = "network"     # "network" or "sequential" counting gadgets


@dataclass
class CnfEncoding:
    forest: Forest
    target: int  # class index the formula forbids
    options: EncoderOptions
    abstraction: Abstraction
    clauses: list[list[int]] = field(default_factory=list)
    vote_vars: tuple[tuple[int, ...], ...] = ()
    nvars: int = 0

    @property
    def stats(self) -> dict[str, int]:
        return {"vars": self.nvars, "clauses": len(self.clauses)}

    def to_dimacs(self, comments=()) -> str:
        return write_dimacs(self.nvars, self.clauses, comments)


class _Builder:
    def __init__(self, forest: Forest, target: int, options: EncoderOptions):
        if not 0 <= target < forest.class_count:
            raise ValueError(f"target class index {target} out of range")
        self.forest = forest
        self.target = target
        self.options = options
        self.abstraction = build_abstraction(forest)
        self.pool = VarPool(self.abstraction.nvars)
        self.clauses: list[list[int]] = []
        self.threshold_aux: dict[int, list[int]] = {}  # feature -> aux per cut
        self.subset_aux: dict[tuple[int, frozenset], int] = {}
        self.vote_vars: list[tuple[int, ...]] = []

    def build(self) -> CnfEncoding:
        self._domain_constraints()
        self._threshold_auxiliaries()
        self._trees()
        self._misclassification()
        return CnfEncoding(
            forest=self.forest,
            target=self.target,
            options=self.options,
            abstraction=self.abstraction,
            clauses=self.clauses,
            vote_vars=tuple(self.vote_vars),
            nvars=self.pool.count,
        )

    # each multi-valued feature realizes exactly one indicator
    def _domain_constraints(self) -> None:
        for f, spec in enumerate(self.forest.features):
            vars_ = self.abstraction.feature_vars[f]
            if len(vars_) > 1:
                exactly_one(self.pool, self.clauses, list(vars_))

    def _threshold_auxiliaries(self) -> None:
        for f in self.abstraction.used_features():
            cuts = self.abstraction.thresholds[f]
            if not cuts:
                continue
            z = self.abstraction.feature_vars[f]
            k = len(cuts)
            a = [self.pool.new() for _ in range(k)]
            self.threshold_aux[f] = a
            cl = self.clauses
            if self.options.chaining:
                # a[i] means "above cut i": defined from the next auxiliary
                # on one side and from the previous one on the other
                cl.append([-a[k - 1], z[k]])
                cl.append([a[k - 1], -z[k]])
                for i in range(k - 1):
                    cl.append([-a[i], z[i + 1], a[i + 1]])
                    cl.append([a[i], -z[i + 1]])
                    cl.append([a[i], -a[i + 1]])
                cl.append([a[0], z[0]])
                cl.append([-z[0], -a[0]])
                for i in range(1, k):
                    cl.append([a[i], z[i], -a[i - 1]])
                    cl.append([-z[i], -a[i]])
                    cl.append([a[i - 1], -a[i]])
            else:
                for i in range(k):
                    above = [z[j] for j in range(i + 1, k + 1)]
                    below = [z[j] for j in range(0, i + 1)]
                    cl.append([-a[i]] + above)
                    for lit in above:
                        cl.append([a[i], -lit])
                    cl.append([a[i]] + below)
                    for lit in below:
                        cl.append([-a[i], -lit])

    def _edge_literal(self, split: Split) -> int:
        """Literal that is true exactly when the split sends a point left."""
        f = split.feature
        spec = self.forest.features[f]
        vars_ = self.abstraction.feature_vars[f]
        if spec.kind == BINARY:
            return -vars_[0]
        if spec.kind == CATEGORICAL:
            key = (f, frozenset(split.values))
            if len(split.values) == 1:
                return vars_[spec.values.index(split.values[0])]
            aux = self.subset_aux.get(key)
            if aux is None:
                aux = self.pool.new()
                self.subset_aux[key] = aux
                members = [vars_[spec.values.index(v)] for v in sorted(key[1], key=str)]
                self.clauses.append([-aux] + members)
                for z in members:
                    self.clauses.append([aux, -z])
            return aux
        cuts = self.abstraction.thresholds[f]
        q = cuts.index(float(split.threshold))  # pooled, so always present
        return -self.threshold_aux[f][q]

    def _trees(self) -> None:
        K = self.forest.class_count
        for tree in self.forest.trees:
            votes = tuple(self.pool.new() for _ in range(K))
            self.vote_vars.append(votes)
            for edges, leaf in iter_paths(tree):
                clause = []
                for split, went_right in edges:
                    lit = self._edge_literal(split)
                    clause.append(lit if went_right else -lit)
                clause.append(votes[leaf.klass])
                self.clauses.append(clause)
            exactly_one(self.pool, self.clauses, list(votes))

    def _misclassification(self) -> None:
        K = self.forest.class_count
        M = len(self.forest.trees)
        j = self.target
        family = self.options.card_family
        if K == 1:
            self.clauses.append([])  # no rival class exists at all
            return
        votes = self.vote_vars
        if K == 2 and not self.options.naive_comparators:
            # counts sum to M, so the rival's count alone decides
            r = 1 - j
            bound = (M + 1) // 2 if r < j else M // 2 + 1
            at_least(self.pool, self.clauses, [votes[i][r] for i in range(M)], bound, family)
            return
        against = [-votes[i][j] for i in range(M)]
        if self.options.naive_comparators:
            # rival k beats the target iff  count_k + (M - count_target)
            # reaches M (lower index wins ties) or M + 1 (higher index)
            outs = []
            for k in range(K):
                if k == j:
                    continue
                inputs = [votes[i][k] for i in range(M)] + against
                bound = M if k < j else M + 1
                outs.append(at_least_output(self.pool, self.clauses, inputs, bound, family))
            self.clauses.append(outs)
            return
        # two comparators total: selectors choose which rival each side tracks,
        # a "no rival" selector forces that side's inputs high, which makes its
        # bound hold whenever the other side's does
        pool, cl = self.pool, self.clauses
        tracked_lo = [pool.new() for _ in range(M)]
        tracked_hi = [pool.new() for _ in range(M)]
        none_lo = pool.new()
        none_hi = pool.new()
        sel = {k: pool.new() for k in range(K) if k != j}
        exactly_one(pool, cl, [none_lo] + [sel[k] for k in range(j)])
        exactly_one(pool, cl, [none_hi] + [sel[k] for k in range(j + 1, K)])
        cl.append([-none_lo, -none_hi])
        for i in range(M):
            cl.append([-none_lo, tracked_lo[i]])
            cl.append([-none_hi, tracked_hi[i]])
            for k in range(j):
                cl.append([-sel[k], -tracked_lo[i], votes[i][k]])
                cl.append([-sel[k], tracked_lo[i], -votes[i][k]])
            for k in range(j + 1, K):
                cl.append([-sel[k], -tracked_hi[i], votes[i][k]])
                cl.append([-sel[k], tracked_hi[i], -votes[i][k]])
        at_least(pool, cl, tracked_lo + against, M, family)
        at_least(pool, cl, tracked_hi + against, M + 1, family)


def encode(forest: Forest, target: int, options: EncoderOptions | None = None) -> CnfEncoding:
    """Build the misclassification formula for one target class."""
    return _Builder(forest, target, options or EncoderOptions()).build()


def encode_for_instance(
    forest: Forest, instance: Instance, options: EncoderOptions | None = None
):
    """Encode against the class the forest predicts for the instance and
    return the encoding together with the instance's soft literals."""
    target = predict_index(forest, instance)
    enc = encode(forest, target, options)
    return enc, soft_literals(enc.abstraction, instance)


def model_to_instance(encoding: CnfEncoding, model: list[bool]) -> Instance:
    """Concrete representative of the abstract cell a model describes.
    Features the forest never tests default to an arbitrary domain value."""
    forest = encoding.forest
    abs_ = encoding.abstraction
    values = []
    for f, spec in enumerate(forest.features):
        vars_ = abs_.feature_vars[f]
        if spec.kind == BINARY:
            values.append(int(model[vars_[0]]) if vars_ else 0)
            continue
        if spec.kind == CATEGORICAL:
            if not vars_:
                values.append(spec.values[0])
                continue
            chosen = [i for i, v in enumerate(vars_) if model[v]]
            assert len(chosen) == 1, "domain constraint violated in model"
            values.append(spec.values[chosen[0]])
            continue
        if not vars_:
            values.append(0.0)
            continue
        chosen = [i for i, v in enumerate(vars_) if model[v]]
        assert len(chosen) == 1, "domain constraint violated in model"
        values.append(interval_representative(abs_.thresholds[f], chosen[0]))
    return tuple(values)


def cell_assumptions(abstraction: Abstraction, cell: tuple[int, ...]) -> list[int]:
    """Literals pinning every used feature to one abstract value; the
    companion of abstraction.cell_of for driving the formula cell by cell."""
    out = []
    for f in range(abstraction.forest.m):
        vars_ = abstraction.feature_vars[f]
        if not vars_:
            continue
        spec = abstraction.forest.features[f]
        if spec.kind == BINARY:
            out.append(vars_[0] if cell[f] else -vars_[0])
        else:
            out.append(vars_[cell[f]])
    return out
