"""Conflict-driven clause learning SAT solver with assumption support.

Clauses are added as DIMACS-style signed integers and persist across solve
calls. ``solve(assumptions)`` returns True with a total model, or False with
``core`` holding a subset of the assumptions responsible for the conflict
(empty when the clause set is unsatisfiable on its own). Everything is
deterministic; the seed only shuffles initial decision polarities, so any
fixed seed reproduces identical runs.

A plain DPLL procedure lives at the bottom for differential testing, and the
module runs as a script on a DIMACS file (used as the default external solver
binary by the subprocess oracle adapter).
"""

from __future__ import annotations

import random
from heapq import heapify, heappop, heappush

TRUE = 1
FALSE = 0
UNDEF = -1

_RESCALE = 1e100
_RESCALE_INV = 1e-100


def _luby(i: int) -> int:
    # Luby sequence: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i %= size
    return 1 << seq


class Solver:
    def __init__(self, seed: int = 0, default_phase: bool = False):
        self.nvars = 0
        self.clauses: list[list[int]] = []     # problem clauses (lit indices)
        self.learnts: list[list[int]] = []
        self.watches: list[list[list[int]]] = [[], []]  # per lit index
        self.val: list[int] = [UNDEF, UNDEF]   # per lit index
        self.level = [0]                       # per var
        self.reason: list[list[int] | None] = [None]
        self.activity = [0.0]
        self.polarity = [default_phase]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.order: list[tuple[float, int]] = []  # lazy max-heap entries (-act, var)
        self.var_inc = 1.0
        self.var_decay = 0.95
        self.seed = seed
        self.default_phase = default_phase
        self._rng = random.Random(seed) if seed else None
        self._unsat = False
        self.model: list[bool] | None = None
        self.core: list[int] | None = None
        self.max_learnts = 4000
        # counters
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0

    # ----- variables and clauses -----

    def new_var(self) -> int:
        self.nvars += 1
        phase = self.default_phase if self._rng is None else self._rng.random() < 0.5
        self.val.extend((UNDEF, UNDEF))
        self.watches.extend(([], []))
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.polarity.append(phase)
        heappush(self.order, (-0.0, self.nvars))
        return self.nvars

    def ensure_vars(self, n: int) -> None:
        while self.nvars < n:
            self.new_var()

    @staticmethod
    def _idx(lit: int) -> int:
        return (lit << 1) if lit > 0 else ((-lit) << 1) | 1

    @staticmethod
    def _ext(idx: int) -> int:
        v = idx >> 1
        return -v if idx & 1 else v

    def add_clause(self, lits) -> None:
        """Add a clause of signed ints. Must be called with the solver at
        decision level 0 (always true between solve calls)."""
        assert not self.trail_lim, "add_clause only at level 0"
        idxs = []
        for l in lits:
            if l == 0:
                raise ValueError("literal 0 is not allowed")
            self.ensure_vars(abs(l))
            idxs.append(self._idx(l))
        seen = set()
        out = []
        val = self.val
        for i in idxs:
            if i in seen:
                continue
            if i ^ 1 in seen:
                return  # tautology
            if val[i] == TRUE:
                return  # satisfied at level 0
            if val[i] == FALSE:
                continue  # falsified at level 0, drop
            seen.add(i)
            out.append(i)
        if not out:
            self._unsat = True
            return
        if len(out) == 1:
            if not self._enqueue(out[0], None):
                self._unsat = True
            elif self._propagate() is not None:
                self._unsat = True
            return
        self.clauses.append(out)
        self.watches[out[0] ^ 1].append(out)
        self.watches[out[1] ^ 1].append(out)

    # ----- assignment -----

    def _enqueue(self, lit: int, reason) -> bool:
        if self.val[lit] != UNDEF:
            return self.val[lit] == TRUE
        self.val[lit] = TRUE
        self.val[lit ^ 1] = FALSE
        v = lit >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)
        return True

    def _propagate(self):
        """Two-watched-literal unit propagation; returns a conflict clause or None."""
        val = self.val
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            falselit = p ^ 1
            ws = watches[p]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == falselit:
                    c[0] = c[1]
                    c[1] = falselit
                first = c[0]
                if val[first] == TRUE:
                    ws[j] = c
                    j += 1
                    continue
                swapped = False
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != FALSE:
                        c[1] = lk
                        c[k] = falselit
                        watches[lk ^ 1].append(c)
                        swapped = True
                        break
                if swapped:
                    continue
                ws[j] = c
                j += 1
                if val[first] == FALSE:
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self.qhead = len(trail)
                    return c
                # unit
                val[first] = TRUE
                val[first ^ 1] = FALSE
                v = first >> 1
                self.level[v] = len(self.trail_lim)
                self.reason[v] = c
                trail.append(first)
            del ws[j:]
        return None

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        val = self.val
        bound = self.trail_lim[lvl]
        for i in range(len(self.trail) - 1, bound - 1, -1):
            lit = self.trail[i]
            v = lit >> 1
            val[lit] = UNDEF
            val[lit ^ 1] = UNDEF
            self.reason[v] = None
            self.polarity[v] = not (lit & 1)
            heappush(self.order, (-self.activity[v], v))
        del self.trail[bound:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    # ----- activity -----

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > _RESCALE:
            act = self.activity
            for u in range(1, self.nvars + 1):
                act[u] *= _RESCALE_INV
            self.var_inc *= _RESCALE_INV
            self.order = [(-act[u], u) for u in range(1, self.nvars + 1) if self.val[u << 1] == UNDEF]
            heapify(self.order)
        else:
            heappush(self.order, (-self.activity[v], v))

    def _pick_branch(self) -> int:
        order = self.order
        val = self.val
        act = self.activity
        while order:
            negact, v = heappop(order)
            if val[v << 1] == UNDEF and -negact == act[v]:
                return v
        return 0

    # ----- conflict analysis -----

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        learnt = [0]
        seen = bytearray(self.nvars + 1)
        level = self.level
        reason = self.reason
        trail = self.trail
        cur_level = len(self.trail_lim)
        counter = 0
        p = -1
        idx = len(trail) - 1
        first_pass = True
        while True:
            start = 0 if first_pass else 1
            first_pass = False
            for q in confl[start:] if start else confl:
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            seen[v] = 0
            counter -= 1
            if counter == 0:
                break
            confl = reason[v]
        learnt[0] = p ^ 1

        # cheap self-subsumption: drop lits whose whole reason is already seen
        seen[p >> 1] = 1
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r is None:
                keep.append(q)
                continue
            for other in r:
                ov = other >> 1
                if not seen[ov] and level[ov] > 0:
                    keep.append(q)
                    break
        learnt = keep

        if len(learnt) == 1:
            return learnt, 0
        # move a literal of the backjump level into watch position 1
        max_i = 1
        for i in range(2, len(learnt)):
            if level[learnt[i] >> 1] > level[learnt[max_i] >> 1]:
                max_i = i
        learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
        return learnt, level[learnt[1] >> 1]

    def _analyze_final(self, failed: int) -> list[int]:
        """Assumption core when the next assumption ``failed`` (a literal
        index whose negation is currently assigned) cannot be placed."""
        core = [self._ext(failed)]
        if not self.trail_lim:
            return core
        seen = bytearray(self.nvars + 1)
        seen[failed >> 1] = 1
        for i in range(len(self.trail) - 1, self.trail_lim[0] - 1, -1):
            lit = self.trail[i]
            v = lit >> 1
            if not seen[v]:
                continue
            r = self.reason[v]
            if r is None:
                core.append(self._ext(lit))  # a placed assumption
            else:
                for q in r:
                    qv = q >> 1
                    if self.level[qv] > 0:
                        seen[qv] = 1
            seen[v] = 0
        return core

    # ----- clause database reduction -----

    def _reduce_db(self) -> None:
        keep_small = [c for c in self.learnts if len(c) <= 3]
        rest = [c for c in self.learnts if len(c) > 3]
        locked = {id(self.reason[lit >> 1]) for lit in self.trail if self.reason[lit >> 1] is not None}
        half = rest[len(rest) // 2 :]
        kept = keep_small + [c for c in rest[: len(rest) // 2] if id(c) in locked] + half
        self.learnts = kept
        # rebuild watches
        self.watches = [[] for _ in range(2 * self.nvars + 2)]
        for c in self.clauses:
            self.watches[c[0] ^ 1].append(c)
            self.watches[c[1] ^ 1].append(c)
        for c in self.learnts:
            self.watches[c[0] ^ 1].append(c)
            self.watches[c[1] ^ 1].append(c)

    # ----- main search -----

    def solve(self, assumptions=()) -> bool:
        self.model = None
        self.core = None
        if self._unsat:
            self.core = []
            return False
        if self._propagate() is not None:
            self._unsat = True
            self.core = []
            return False
        assum = [self._idx(a) for a in assumptions]
        for a in assumptions:
            self.ensure_vars(abs(a))
        restart_count = 0
        limit = _luby(restart_count) * 100
        since_restart = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                since_restart += 1
                if not self.trail_lim:
                    self._unsat = True
                    self.core = []
                    return False
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.learnts.append(learnt)
                    self.watches[learnt[0] ^ 1].append(learnt)
                    self.watches[learnt[1] ^ 1].append(learnt)
                    self._enqueue(learnt[0], learnt)
                self.var_inc /= self.var_decay
                continue
            if since_restart >= limit:
                restart_count += 1
                limit = _luby(restart_count) * 100
                since_restart = 0
                self._cancel_until(0)
                continue
            if len(self.learnts) > self.max_learnts + len(self.trail):
                self._reduce_db()
            lvl = len(self.trail_lim)
            if lvl < len(assum):
                p = assum[lvl]
                if self.val[p] == TRUE:
                    self.trail_lim.append(len(self.trail))
                elif self.val[p] == FALSE:
                    self.core = self._analyze_final(p)
                    self._cancel_until(0)
                    return False
                else:
                    self.trail_lim.append(len(self.trail))
                    self._enqueue(p, None)
                continue
            v = self._pick_branch()
            if v == 0:
                self.model = [False] * (self.nvars + 1)
                for u in range(1, self.nvars + 1):
                    self.model[u] = self.val[u << 1] == TRUE
                self._cancel_until(0)
                return True
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue((v << 1) | (0 if self.polarity[v] else 1), None)

    # ----- propagation-only probe -----

    def propagate_under(self, assumptions) -> tuple[bool, dict[int, bool]]:
        """Unit-propagate the current clause set under the given literals,
        then undo. Returns (no_conflict, implied assignment by variable)."""
        if self._unsat:
            return False, {}
        if self._propagate() is not None:
            self._unsat = True
            return False, {}
        self.trail_lim.append(len(self.trail))
        ok = True
        for a in assumptions:
            self.ensure_vars(abs(a))
            if not self._enqueue(self._idx(a), None):
                ok = False
                break
        if ok:
            ok = self._propagate() is None
        assigned: dict[int, bool] = {}
        if ok:
            for lit in self.trail:
                assigned[lit >> 1] = not (lit & 1)
        self._cancel_until(0)
        return ok, assigned

    def model_value(self, lit: int) -> bool:
        assert self.model is not None
        v = self.model[abs(lit)]
        return v if lit > 0 else not v


# ----- plain DPLL, for differential testing -----


def dpll_solve(nvars: int, clauses: list[list[int]], assumptions=()) -> tuple[bool, list[bool] | None]:
    """Textbook DPLL with unit propagation; branches on the lowest unassigned
    variable, False first. Returns (sat, model). Small inputs only."""
    assign: dict[int, bool] = {}

    def lit_val(l: int):
        if abs(l) not in assign:
            return None
        v = assign[abs(l)]
        return v if l > 0 else not v

    def unit_propagate() -> bool:
        changed = True
        while changed:
            changed = False
            for c in clauses:
                unassigned = None
                n_unassigned = 0
                sat = False
                for l in c:
                    lv = lit_val(l)
                    if lv is True:
                        sat = True
                        break
                    if lv is None:
                        unassigned = l
                        n_unassigned += 1
                if sat:
                    continue
                if n_unassigned == 0:
                    return False
                if n_unassigned == 1:
                    assign[abs(unassigned)] = unassigned > 0
                    changed = True
        return True

    for a in assumptions:
        prev = lit_val(a)
        if prev is False:
            return False, None
        assign[abs(a)] = a > 0

    def search() -> bool:
        saved = dict(assign)
        if not unit_propagate():
            assign.clear()
            assign.update(saved)
            return False
        v = next((u for u in range(1, nvars + 1) if u not in assign), None)
        if v is None:
            return True
        for choice in (False, True):
            snapshot = dict(assign)
            assign[v] = choice
            if search():
                return True
            assign.clear()
            assign.update(snapshot)
        assign.clear()
        assign.update(saved)
        return False

    if any(len(c) == 0 for c in clauses):
        return False, None
    if not search():
        return False, None
    model = [False] * (nvars + 1)
    for v in range(1, nvars + 1):
        model[v] = assign.get(v, False)
    return True, model


def main(argv=None) -> int:
    """DIMACS solving entry point: prints an s-line and v-lines, exits 10/20."""
    import argparse
    import sys

    from .dimacs import parse_dimacs

    ap = argparse.ArgumentParser(prog="forestexplain-solve", description="solve a DIMACS CNF file")
    ap.add_argument("cnf")
    ap.add_argument("--engine", choices=("cdcl", "dpll"), default="cdcl")
    args = ap.parse_args(argv)
    with open(args.cnf, "r", encoding="utf-8") as fh:
        nvars, clauses = parse_dimacs(fh.read())
    if args.engine == "dpll":
        sat, model = dpll_solve(nvars, clauses)
    else:
        s = Solver()
        s.ensure_vars(nvars)
        for c in clauses:
            s.add_clause(c)
        sat = s.solve()
        model = s.model
    if sat:
        print("s SATISFIABLE")
        lits = [v if model[v] else -v for v in range(1, nvars + 1)]
        for i in range(0, len(lits), 25):
            print("v " + " ".join(str(l) for l in lits[i : i + 25]))
        print("v 0")
        return 10
    print("s UNSATISFIABLE")
    return 20


if __name__ == "__main__":
    raise SystemExit(main())
