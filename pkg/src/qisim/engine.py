"""The interference search protocol and the solution-enumeration loop.

One search round: prepare the uniform state, then ``repetitions`` times split
into two arms, phase-mark one arm (invalid and already-found states flipped),
overlap the arms and renormalize; finally sample and check the modal outcome
classically. Enumeration repeats rounds, excluding each newly found solution,
until a round yields an invalid or repeated sample or the arms cancel.
"""
from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .errors import ArityMismatch, NullInterference
from .oracle import Oracle
from .rng import RngStream
from .statevec import (
    NULL_TOLERANCE,
    Histogram,
    StateVector,
    apply_amplitude_noise,
    apply_phase_oracle,
    hadamard_uniform,
    interfere,
    measure,
)


class Termination(str, enum.Enum):
    INVALID_SAMPLE = "InvalidSample"
    REPEAT_SAMPLE = "RepeatSample"
    NULL_INTERFERENCE = "NullInterference"
    ROUND_CAP = "RoundCap"


@dataclass(frozen=True)
class SearchConfig:
    delta: float = 0.0
    repetitions: int = 1
    shots: int = 1024
    master_seed: int = 0
    null_tolerance: float = NULL_TOLERANCE
    max_rounds: int | None = None  # None: 4 * 2**n

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")

    def round_cap(self, n: int) -> int:
        return self.max_rounds if self.max_rounds is not None else 4 * (1 << n)


@dataclass(frozen=True)
class SearchOutcome:
    sampled_index: int
    verified: bool
    post_state_probabilities: dict[int, float]
    histogram: Histogram
    rounds_used: int = 1


@dataclass
class EnumerationReport:
    found: list[int] = field(default_factory=list)
    rounds: int = 0
    terminated_by: Termination | None = None
    per_round_outcomes: list[SearchOutcome] = field(default_factory=list)


def interference_step(state: StateVector, oracle: Oracle, exclusions: Iterable[int] = (),
                      delta: float = 0.0, rng: np.random.Generator | None = None,
                      null_tolerance: float = NULL_TOLERANCE) -> StateVector:
    """One mark-and-overlap pass.

    The unmarked arm is ``state`` itself. The marked arm gets the phase oracle
    and then amplitude noise; the overlap gets a second round of noise. With
    ``delta == 0`` this is the normalized projection of ``state`` onto the
    accepted, unexcluded basis states.
    """
    if delta > 0 and rng is None:
        raise ValueError("a generator is required when delta > 0")
    marked = apply_phase_oracle(state, oracle, exclusions)
    marked = apply_amplitude_noise(marked, delta, rng, null_tolerance)
    out = interfere(marked, state, null_tolerance)
    return apply_amplitude_noise(out, delta, rng, null_tolerance)


def _check_arity(oracle: Oracle, n: int):
    if oracle.arity != n:
        raise ArityMismatch(f"oracle arity {oracle.arity} != register size {n}")


def run_search(oracle: Oracle, n: int, exclusions: Iterable[int] = (),
               config: SearchConfig = SearchConfig(), *,
               stream: RngStream | None = None) -> SearchOutcome:
    """Prepare, amplify ``config.repetitions`` times, measure, verify.

    ``stream`` lets the enumeration loop share one random stream across
    rounds; by default a fresh stream is seeded from ``config.master_seed``.
    Raises NullInterference when the arms cancel.
    """
    _check_arity(oracle, n)
    excluded = frozenset(exclusions)
    if stream is None:
        stream = RngStream(config.master_seed)
    state = hadamard_uniform(n)
    for _ in range(config.repetitions):
        state = interference_step(state, oracle, excluded, config.delta,
                                  stream.child(), config.null_tolerance)
    hist = measure(state, config.shots, stream.child())
    sampled = hist.modal()
    probs = state.probabilities()
    return SearchOutcome(
        sampled_index=sampled,
        verified=oracle.evaluate(sampled) and sampled not in excluded,
        post_state_probabilities={int(i): float(probs[i]) for i in np.flatnonzero(probs)},
        histogram=hist,
    )


def enumerate_solutions(oracle: Oracle, n: int,
                        config: SearchConfig = SearchConfig()) -> EnumerationReport:
    """Find solutions one per round, excluding each as it is found.

    Never raises for protocol outcomes; how the loop stopped is recorded in
    ``terminated_by``.
    """
    _check_arity(oracle, n)
    stream = RngStream(config.master_seed)
    report = EnumerationReport()
    cap = config.round_cap(n)
    while True:
        if report.rounds >= cap:
            report.terminated_by = Termination.ROUND_CAP
            break
        report.rounds += 1
        try:
            outcome = run_search(oracle, n, report.found, config, stream=stream)
        except NullInterference:
            report.terminated_by = Termination.NULL_INTERFERENCE
            break
        outcome = SearchOutcome(outcome.sampled_index, outcome.verified,
                                outcome.post_state_probabilities, outcome.histogram,
                                rounds_used=report.rounds)
        report.per_round_outcomes.append(outcome)
        if outcome.verified:
            report.found.append(outcome.sampled_index)
            continue
        report.terminated_by = (Termination.REPEAT_SAMPLE
                                if outcome.sampled_index in report.found
                                else Termination.INVALID_SAMPLE)
        break
    return report
