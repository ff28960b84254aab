"""SAT oracle adapters over a fixed CNF encoding.

The embedded adapter keeps one incremental solver alive across calls, which
is the performance path: learned clauses persist while assumptions vary. The
subprocess adapter shells out to any DIMACS solver that follows competition
conventions (exit code 10/20, ``v`` lines), re-encoding the formula plus the
assumptions as unit clauses on every call; it exists for differential
checking against an independent engine and defaults to this package's own
solver module run as a script.

Both count calls and wall-clock times per outcome, which is what the
explanation reports aggregate.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field

from .dimacs import write_dimacs
from .encoder import CnfEncoding
from .solver import Solver


class OracleError(RuntimeError):
    """The oracle failed to produce an answer (distinct from 'unsatisfiable')."""


@dataclass
class SolveResult:
    sat: bool
    model: list[bool] | None = None  # total assignment, indexed by variable
    core: list[int] | None = None    # subset of the assumptions, when unsat


@dataclass
class OracleStats:
    sat_times: list[float] = field(default_factory=list)
    unsat_times: list[float] = field(default_factory=list)

    def record(self, sat: bool, seconds: float) -> None:
        (self.sat_times if sat else self.unsat_times).append(seconds)

    @property
    def calls(self) -> int:
        return len(self.sat_times) + len(self.unsat_times)

    @property
    def sat_count(self) -> int:
        return len(self.sat_times)

    @property
    def unsat_count(self) -> int:
        return len(self.unsat_times)

    @property
    def total_time(self) -> float:
        return sum(self.sat_times) + sum(self.unsat_times)

    def summary(self) -> dict[str, float]:
        both = self.sat_times + self.unsat_times
        return {
            "calls": self.calls,
            "sat": self.sat_count,
            "unsat": self.unsat_count,
            "max_sat": max(self.sat_times, default=0.0),
            "max_unsat": max(self.unsat_times, default=0.0),
            "max": max(both, default=0.0),
            "min": min(both, default=0.0),
            "avg": sum(both) / len(both) if both else 0.0,
            "total": self.total_time,
        }


class EmbeddedOracle:
    """In-process incremental solving over the encoding."""

    def __init__(self, encoding: CnfEncoding, seed: int = 0):
        self.encoding = encoding
        self.stats = OracleStats()
        self._solver = Solver(seed=seed)
        self._solver.ensure_vars(encoding.nvars)
        for clause in encoding.clauses:
            self._solver.add_clause(clause)

    def solve(self, assumptions=(), want_core: bool = False) -> SolveResult:
        start = time.perf_counter()
        sat = self._solver.solve(list(assumptions))
        self.stats.record(sat, time.perf_counter() - start)
        if sat:
            return SolveResult(sat=True, model=list(self._solver.model))
        return SolveResult(sat=False, core=list(self._solver.core))


class SubprocessOracle:
    """One external solver run per call, assumptions baked in as units."""

    def __init__(self, encoding: CnfEncoding, command=None, seed: int = 0):
        if command is None:
            command = [sys.executable, "-m", "forestexplain.solver"]
        elif isinstance(command, str):
            command = shlex.split(command)
        self.encoding = encoding
        self.command = list(command)
        self.stats = OracleStats()

    def _run_once(self, assumptions) -> SolveResult:
        enc = self.encoding
        nvars = max([enc.nvars] + [abs(a) for a in assumptions])
        clauses = list(enc.clauses) + [[a] for a in assumptions]
        text = write_dimacs(nvars, clauses)
        fd, path = tempfile.mkstemp(suffix=".cnf", prefix="forestexplain-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            try:
                proc = subprocess.run(self.command + [path], capture_output=True, text=True)
            except OSError as exc:
                raise OracleError(f"failed to launch solver {self.command!r}: {exc}") from exc
            if proc.returncode == 20:
                return SolveResult(sat=False)
            if proc.returncode != 10:
                raise OracleError(
                    f"solver {self.command!r} exited with {proc.returncode}: {proc.stderr.strip()!r}"
                )
            lits: list[int] = []
            for line in proc.stdout.splitlines():
                if line.startswith("v"):
                    lits.extend(int(tok) for tok in line[1:].split())
            model = [False] * (nvars + 1)
            saw_any = False
            for lit in lits:
                if lit == 0:
                    continue
                saw_any = True
                if abs(lit) <= nvars:
                    model[abs(lit)] = lit > 0
            if not saw_any:
                raise OracleError(f"solver {self.command!r} reported SAT without a model")
            return SolveResult(sat=True, model=model)
        finally:
            os.unlink(path)

    def solve(self, assumptions=(), want_core: bool = False) -> SolveResult:
        assumptions = list(assumptions)
        start = time.perf_counter()
        result = self._run_once(assumptions)
        if result.sat:
            self.stats.record(True, time.perf_counter() - start)
            return result
        core = list(assumptions)
        if want_core:
            # deletion probing: drop one assumption at a time, keep the drop
            # whenever the rest stays unsatisfiable
            i = 0
            while i < len(core):
                trial = core[:i] + core[i + 1 :]
                if self._run_once(trial).sat:
                    i += 1
                else:
                    core = trial
        self.stats.record(False, time.perf_counter() - start)
        return SolveResult(sat=False, core=core)


def make_oracle(encoding: CnfEncoding, adapter: str = "embedded", solver_cmd=None, seed: int = 0):
    if adapter == "embedded":
        return EmbeddedOracle(encoding, seed=seed)
    if adapter == "subprocess":
        return SubprocessOracle(encoding, command=solver_cmd, seed=seed)
    raise ValueError(f"unknown oracle adapter: {adapter!r}")
