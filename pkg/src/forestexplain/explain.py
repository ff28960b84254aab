"""Explanation extraction on top of the misclassification formula.

An abductive explanation (sufficient reason) is a subset-minimal set of
features whose instance values alone force the prediction; it is exactly a
minimal unsatisfiable subset of the soft literals against the formula. A
contrastive explanation is a subset-minimal set of features whose release
admits a different prediction: a minimal correction set. Enumeration
interleaves both kinds by walking a map solver over the powerset of soft
literals, shrinking unsatisfiable seeds and complementing satisfiable ones.

Oracle call counts are part of the contract: one call per soft literal for a
single abductive extraction, one extra initial call for a contrastive one.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .abstraction import SoftLiteral
from .model import Forest, predict_index, vote_counts
from .solver import Solver

ABDUCTIVE = "abductive"
CONTRASTIVE = "contrastive"


class ExplanationError(RuntimeError):
    """The oracle's answers contradict the expected invariants, usually a
    sign the encoding does not match the instance."""


@dataclass(frozen=True)
class Explanation:
    kind: str                  # ABDUCTIVE or CONTRASTIVE
    features: tuple[int, ...]  # 0-based feature indices, sorted
    immutable: bool = False    # contrastive only: the prediction cannot change

    def feature_names(self, forest) -> tuple[str, ...]:
        return tuple(forest.features[f].name for f in self.features)


def _ordered(softs: list[SoftLiteral], order: str) -> list[SoftLiteral]:
    if order == "ascending":
        return sorted(softs, key=lambda s: s.feature)
    if order == "descending":
        return sorted(softs, key=lambda s: -s.feature)
    raise ValueError(f"unknown feature order: {order!r}")


def extract_axp(oracle, softs: list[SoftLiteral], order: str = "ascending") -> Explanation:
    """One abductive explanation by literal deletion, spending exactly one
    oracle call per soft literal."""
    worklist = _ordered(softs, order)
    kept: dict[int, SoftLiteral] = {s.literal: s for s in worklist}
    for soft in worklist:
        trial = [l for l in kept if l != soft.literal]
        res = oracle.solve(trial)
        if res.sat:
            # the dropped literal must be what the countermodel escapes
            # through; if the model satisfies it, the formula was already
            # satisfiable with every literal fixed
            if _model_satisfies(res.model, soft.literal):
                raise ExplanationError(
                    "countermodel is consistent with the whole instance; "
                    "the encoding does not entail this prediction"
                )
        else:
            del kept[soft.literal]
    return Explanation(kind=ABDUCTIVE, features=tuple(sorted(s.feature for s in kept.values())))


def extract_cxp(oracle, softs: list[SoftLiteral], order: str = "ascending") -> Explanation:
    """One contrastive explanation by linear search: start from everything
    free, re-fix literals late-ordered-first while the formula stays
    satisfiable. Features whose re-fixing is blocked form the explanation,
    so it prefers features that come early in the configured order."""
    if not oracle.solve().sat:
        return Explanation(kind=CONTRASTIVE, features=(), immutable=True)
    fixed: list[int] = []
    free: list[SoftLiteral] = []
    for soft in reversed(_ordered(softs, order)):
        if oracle.solve(fixed + [soft.literal]).sat:
            fixed.append(soft.literal)
        else:
            free.append(soft)
    if not free:
        raise ExplanationError(
            "every literal could be fixed while staying satisfiable; "
            "the encoding does not entail this prediction"
        )
    return Explanation(kind=CONTRASTIVE, features=tuple(sorted(s.feature for s in free)))


def enumerate_explanations(oracle, softs: list[SoftLiteral], limit: int | None = None):
    """All explanations of both kinds, interleaved. A map solver proposes
    maximal unexplored subsets of the soft literals; an unsatisfiable seed
    shrinks to an abductive explanation, a satisfiable one is already a
    maximal satisfiable subset and its complement is contrastive."""
    out: list[Explanation] = []
    softs = _ordered(softs, "ascending")
    u = len(softs)
    selector_of = {i + 1: softs[i] for i in range(u)}
    map_solver = Solver(default_phase=True)
    map_solver.ensure_vars(u)
    while limit is None or len(out) < limit:
        if not map_solver.solve():
            break
        chosen = {v for v in range(1, u + 1) if map_solver.model[v]}
        # grow the seed to a maximal subset within the map constraints;
        # refusals stay refused as the seed only gains elements
        for v in range(1, u + 1):
            if v not in chosen and map_solver.solve(sorted(chosen) + [v]):
                chosen = {w for w in range(1, u + 1) if map_solver.model[w]}
        res = oracle.solve([selector_of[v].literal for v in sorted(chosen)])
        if res.sat:
            complement = [v for v in range(1, u + 1) if v not in chosen]
            if not complement:
                raise ExplanationError(
                    "the formula is satisfiable under the whole instance; "
                    "the encoding does not entail this prediction"
                )
            out.append(
                Explanation(
                    kind=CONTRASTIVE,
                    features=tuple(sorted(selector_of[v].feature for v in complement)),
                )
            )
            map_solver.add_clause(complement)
        else:
            mus = _shrink(oracle, [selector_of[v].literal for v in sorted(chosen)], res.core)
            lit_to_sel = {selector_of[v].literal: v for v in chosen}
            out.append(
                Explanation(
                    kind=ABDUCTIVE,
                    features=tuple(sorted(selector_of[lit_to_sel[l]].feature for l in mus)),
                )
            )
            map_solver.add_clause([-lit_to_sel[l] for l in mus])
    return out


def _shrink(oracle, literals: list[int], core) -> list[int]:
    """Minimal unsatisfiable subset by deletion, narrowing through returned
    cores whenever the oracle provides them."""
    current = [l for l in literals if l in set(core)] if core is not None else list(literals)
    confirmed: set[int] = set()
    while True:
        target = next((l for l in current if l not in confirmed), None)
        if target is None:
            return current
        trial = [l for l in current if l != target]
        res = oracle.solve(trial)
        if res.sat:
            confirmed.add(target)
        elif res.core is None:
            current = trial
        else:
            # a sound core never drops a confirmed literal, but guard anyway
            keep = set(res.core) | confirmed
            current = [l for l in trial if l in keep]


def _model_satisfies(model: list[bool], literal: int) -> bool:
    value = model[abs(literal)]
    return value if literal > 0 else not value


MODES = ("axp", "cxp", "enumerate")


@dataclass(frozen=True)
class InstanceResult:
    """Explanations plus oracle bookkeeping for one classified instance."""

    instance: tuple
    prediction: str
    votes: tuple[int, ...]
    explanations: tuple[Explanation, ...]
    stats: dict = field(compare=False)

    def to_dict(self, forest: Forest) -> dict:
        return {
            "instance": list(self.instance),
            "prediction": self.prediction,
            "votes": {c: n for c, n in zip(forest.classes, self.votes)},
            "explanations": [
                {
                    "kind": e.kind,
                    "features": [forest.features[f].id for f in e.features],
                    "names": list(e.feature_names(forest)),
                    "immutable": e.immutable,
                }
                for e in self.explanations
            ],
            "stats": dict(self.stats),
        }


def explain_instance(
    forest: Forest,
    instance,
    mode: str = "axp",
    *,
    options=None,
    adapter: str = "embedded",
    solver_cmd=None,
    seed: int = 0,
    order: str = "ascending",
    limit: int | None = None,
) -> InstanceResult:
    from .encoder import encode_for_instance
    from .oracle import make_oracle

    encoding, softs = encode_for_instance(forest, instance, options)
    oracle = make_oracle(encoding, adapter=adapter, solver_cmd=solver_cmd, seed=seed)
    if mode == "axp":
        explanations = (extract_axp(oracle, softs, order),)
    elif mode == "cxp":
        explanations = (extract_cxp(oracle, softs, order),)
    elif mode == "enumerate":
        explanations = tuple(enumerate_explanations(oracle, softs, limit=limit))
    else:
        raise ValueError(f"unknown mode: {mode!r} (expected one of {MODES})")
    votes = tuple(vote_counts(forest, instance).values())
    prediction = forest.classes[predict_index(forest, instance)]
    stats = {**encoding.stats, **oracle.stats.summary()}
    return InstanceResult(
        instance=tuple(instance),
        prediction=prediction,
        votes=votes,
        explanations=explanations,
        stats=stats,
    )


def _explain_one(args):
    forest, instance, mode, kwargs = args
    return explain_instance(forest, instance, mode, **kwargs)


def explain_dataset(
    forest: Forest,
    instances,
    mode: str = "axp",
    *,
    jobs: int = 1,
    **kwargs,
) -> list[InstanceResult]:
    instances = list(instances)
    if jobs <= 1 or len(instances) <= 1:
        return [explain_instance(forest, inst, mode, **kwargs) for inst in instances]
    tasks = [(forest, inst, mode, kwargs) for inst in instances]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_explain_one, tasks))


_REPORT_HEADER = ("row", "prediction", "#var", "#cl", "MxS", "MxU", "#S", "#U", "Mx", "m", "avg")


def format_report(results: list[InstanceResult]) -> str:
    """Fixed-width oracle workload table, one line per instance plus a
    closing aggregate. Time columns are seconds; m is the fastest single
    call, Mx the slowest, avg the mean."""
    rows = []
    for i, r in enumerate(results):
        s = r.stats
        rows.append(
            (
                str(i),
                r.prediction,
                str(s["vars"]),
                str(s["clauses"]),
                f"{s['max_sat']:.4f}",
                f"{s['max_unsat']:.4f}",
                str(s["sat"]),
                str(s["unsat"]),
                f"{s['max']:.4f}",
                f"{s['min']:.4f}",
                f"{s['avg']:.4f}",
            )
        )
    if results:
        stats = [r.stats for r in results]
        avgs = [s["avg"] for s in stats]
        rows.append(
            (
                "all",
                "-",
                str(max(s["vars"] for s in stats)),
                str(max(s["clauses"] for s in stats)),
                f"{max(s['max_sat'] for s in stats):.4f}",
                f"{max(s['max_unsat'] for s in stats):.4f}",
                str(sum(s["sat"] for s in stats)),
                str(sum(s["unsat"] for s in stats)),
                f"{max(s['max'] for s in stats):.4f}",
                f"{min(s['min'] for s in stats):.4f}",
                f"{sum(avgs) / len(avgs):.4f}",
            )
        )
    table = [_REPORT_HEADER, *rows]
    widths = [max(len(line[c]) for line in table) for c in range(len(_REPORT_HEADER))]
    out = []
    for line in table:
        out.append("  ".join(cell.rjust(w) for cell, w in zip(line, widths)))
    return "\n".join(out)
