"""Interference exposes the accepted states.

Three qubits, an oracle that accepts 001 and 011. Phase-marking alone
changes no probabilities; overlapping the marked arm with an unmarked copy
cancels every rejected state.
"""
import numpy as np

from qisim import Oracle, apply_phase_oracle, hadamard_uniform, interfere, measure
from qisim.oracle import index_to_bits

oracle = Oracle.builtin("eq7demo")
uniform = hadamard_uniform(3)
marked = apply_phase_oracle(uniform, oracle)


def show(label, state):
    print(label)
    for i, a in enumerate(state.amps):
        print(f"  |{index_to_bits(i, 3)}>  {a.real:+.6f}   p={abs(a) ** 2:.6f}")


show("uniform superposition", uniform)
# same probabilities as before: marking is invisible to measurement
show("after phase marking (rejected states flipped)", marked)

exposed = interfere(marked, uniform)
show("after overlapping the marked and unmarked arms", exposed)

hist = measure(exposed, 10_000, np.random.default_rng(0))
print("10k shots:", {index_to_bits(i, 3): c for i, c in sorted(hist.counts.items())})
print("classical check:", {index_to_bits(i, 3): oracle(i) for i in hist.counts})
