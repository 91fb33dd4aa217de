"""Decision functions over n-bit strings.

An :class:`Oracle` wraps one of three bodies: an explicit truth table, a CNF
formula, or a named builtin. CNF variable ``k`` (1-based) reads the k-th ket
bit from the left, i.e. bit ``n - k`` of the basis index.
"""
from __future__ import annotations

import io
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import (
    ArityMismatch,
    CapExceeded,
    DimacsSyntaxError,
    HeaderMismatch,
    LiteralOutOfRange,
    MissingHeader,
    UnterminatedClause,
)
from .statevec import MAX_QUBITS

BUILTINS = ("all-true", "all-false", "single-solution", "parity", "eq7demo")


def bits_to_index(bits: str) -> int:
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"not a bit string: {bits!r}")
    return int(bits, 2)


def index_to_bits(index: int, n: int) -> str:
    if not 0 <= index < (1 << n):
        raise ValueError(f"index {index} out of range for {n} bits")
    return format(index, f"0{n}b") if n else ""


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 1:
            raise ValueError("a CNF formula needs at least one variable")
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise LiteralOutOfRange(f"literal {lit} outside 1..{self.num_vars}")

    def evaluate(self, index: int) -> bool:
        n = self.num_vars
        for clause in self.clauses:
            for lit in clause:
                bit = (index >> (n - abs(lit))) & 1
                if bit == (lit > 0):
                    break
            else:
                return False
        return True

    def truth_table(self) -> np.ndarray:
        n = self.num_vars
        idx = np.arange(1 << n, dtype=np.int64)
        # one boolean row per variable, computed lazily and reused across clauses
        columns: dict[int, np.ndarray] = {}
        result = np.ones(idx.shape, dtype=bool)
        for clause in self.clauses:
            sat = np.zeros(idx.shape, dtype=bool)
            for lit in clause:
                var = abs(lit)
                if var not in columns:
                    columns[var] = ((idx >> (n - var)) & 1).astype(bool)
                sat |= columns[var] if lit > 0 else ~columns[var]
            result &= sat
        return result


@dataclass(frozen=True, eq=False)
class Oracle:
    """A Boolean predicate of fixed arity.

    ``kind`` is ``"table"``, ``"cnf"`` or ``"builtin"``; ``body`` holds the
    boolean array, the :class:`CnfFormula`, or the builtin's parameters.
    """

    arity: int
    kind: str
    body: object = field(repr=False)
    name: str = ""

    @classmethod
    def from_truth_table(cls, table: Sequence[bool] | np.ndarray, name: str = "table") -> Oracle:
        arr = np.array(table, dtype=bool)
        n = arr.shape[0].bit_length() - 1
        if arr.ndim != 1 or arr.shape[0] != 1 << n:
            raise ArityMismatch(f"truth table length {arr.shape[0]} is not a power of two")
        arr.flags.writeable = False
        return cls(n, "table", arr, name)

    @classmethod
    def from_solutions(cls, n: int, solutions: Iterable[int | str], name: str = "solutions") -> Oracle:
        table = np.zeros(1 << n, dtype=bool)
        for s in solutions:
            table[bits_to_index(s) if isinstance(s, str) else s] = True
        return cls.from_truth_table(table, name)

    @classmethod
    def from_cnf(cls, formula: CnfFormula, name: str = "cnf") -> Oracle:
        return cls(formula.num_vars, "cnf", formula, name)

    @classmethod
    def builtin(cls, name: str, n: int | None = None, solution: int | str | None = None) -> Oracle:
        """Named test oracles.

        all-true, all-false and parity (odd number of ones) need ``n``;
        single-solution needs ``n`` and ``solution``; eq7demo is the 3-qubit
        oracle accepting exactly 001 and 011.
        """
        if name == "eq7demo":
            if n not in (None, 3):
                raise ArityMismatch("eq7demo is defined on 3 qubits only")
            return cls.from_solutions(3, ("001", "011"), name="eq7demo")
        if name not in BUILTINS:
            raise ValueError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")
        if n is None or n < 0:
            raise ValueError(f"builtin {name!r} needs a qubit count")
        if name == "single-solution":
            if solution is None:
                raise ValueError("single-solution needs a solution index")
            x = bits_to_index(solution) if isinstance(solution, str) else int(solution)
            if not 0 <= x < (1 << n):
                raise ValueError(f"solution {x} out of range for {n} bits")
            return cls(n, "builtin", ("single-solution", x), f"single-solution({index_to_bits(x, n)})")
        return cls(n, "builtin", (name,), name)

    def __call__(self, x: int) -> bool:
        return self.evaluate(x)

    def evaluate(self, x: int | str) -> bool:
        """Evaluate on one basis state; string inputs must have length ``arity``."""
        if isinstance(x, str):
            if len(x) != self.arity:
                raise ArityMismatch(f"bit string of length {len(x)} for arity {self.arity}")
            x = bits_to_index(x)
        if not 0 <= x < (1 << self.arity):
            raise ArityMismatch(f"index {x} outside [0, {1 << self.arity})")
        if self.kind == "table":
            return bool(self.body[x])
        if self.kind == "cnf":
            return self.body.evaluate(x)
        tag = self.body[0]
        if tag == "all-true":
            return True
        if tag == "all-false":
            return False
        if tag == "parity":
            return bin(x).count("1") % 2 == 1
        return x == self.body[1]

    def truth_table(self) -> np.ndarray:
        """Boolean array of length ``2**arity``; computed once and cached."""
        return self._table

    @cached_property
    def _table(self) -> np.ndarray:
        if self.arity > MAX_QUBITS:
            raise CapExceeded(f"arity {self.arity} exceeds cap of {MAX_QUBITS}")
        size = 1 << self.arity
        if self.kind == "table":
            return self.body
        if self.kind == "cnf":
            table = self.body.truth_table()
        else:
            tag = self.body[0]
            if tag == "all-true":
                table = np.ones(size, dtype=bool)
            elif tag == "all-false":
                table = np.zeros(size, dtype=bool)
            elif tag == "parity":
                idx = np.arange(size, dtype=np.uint32)
                parity = np.zeros(size, dtype=np.uint32)
                for k in range(self.arity):
                    parity ^= (idx >> k) & 1
                table = parity.astype(bool)
            else:
                table = np.zeros(size, dtype=bool)
                table[self.body[1]] = True
        table.flags.writeable = False
        return table


def brute_force_solutions(oracle: Oracle, cap: int = MAX_QUBITS) -> list[int]:
    """Every accepted index, ascending, by evaluating each input one at a time.

    Deliberately uses the scalar path rather than the vectorized truth table,
    so it can serve as an independent check on it.
    """
    if oracle.arity > cap:
        raise CapExceeded(f"arity {oracle.arity} exceeds cap of {cap}")
    return [x for x in range(1 << oracle.arity) if oracle.evaluate(x)]


def parse_dimacs(text: str | io.TextIOBase) -> CnfFormula:
    """Parse DIMACS CNF.

    Comment lines start with ``c``; a ``p cnf <vars> <clauses>`` header must
    precede the clauses; each clause is a run of signed integers ended by
    ``0`` and may span lines. A lone ``%`` line (SATLIB style) ends the input.
    """
    if not isinstance(text, str):
        text = text.read()
    num_vars = num_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    clause_start = 0
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsSyntaxError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsSyntaxError(f"malformed header {line!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsSyntaxError(f"malformed header {line!r}", lineno) from None
            if num_vars < 1 or num_clauses < 0:
                raise DimacsSyntaxError("header counts out of range", lineno)
            continue
        if num_vars is None:
            raise MissingHeader("clause data before 'p cnf' header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsSyntaxError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if not current:
                    raise DimacsSyntaxError("empty clause", lineno)
                clauses.append(tuple(current))
                current = []
                continue
            if abs(lit) > num_vars:
                raise LiteralOutOfRange(f"literal {lit} outside 1..{num_vars}", lineno)
            if not current:
                clause_start = lineno
            current.append(lit)
    if num_vars is None:
        raise MissingHeader("no 'p cnf' header found", lineno or None)
    if current:
        raise UnterminatedClause("clause not terminated by 0", clause_start)
    if len(clauses) != num_clauses:
        raise HeaderMismatch(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, tuple(clauses))


def serialize_dimacs(formula: CnfFormula, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {formula.num_vars} {len(formula.clauses)}")
    lines.extend(" ".join(map(str, clause)) + " 0" for clause in formula.clauses)
    return "\n".join(lines) + "\n"


def random_kcnf(num_vars: int, num_clauses: int, rng: np.random.Generator, k: int = 3) -> CnfFormula:
    """Uniform random k-CNF: distinct variables per clause, random polarities."""
    clauses = []
    for _ in range(num_clauses):
        vars_ = rng.choice(num_vars, size=min(k, num_vars), replace=False) + 1
        signs = rng.choice((-1, 1), size=vars_.shape[0])
        clauses.append(tuple(int(v * s) for v, s in zip(vars_, signs)))
    return CnfFormula(num_vars, tuple(clauses))
