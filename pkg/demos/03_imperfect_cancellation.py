"""Imperfect cancellation and repeated passes.

Each amplitude picks up multiplicative complex Gaussian noise of scale delta
in the marked arm and again after the overlap. Rejected states then keep a
small remnant. Repeating the mark-and-overlap pass before measuring suppresses
it geometrically.
"""
import numpy as np

from qisim import Oracle, hadamard_uniform, interference_step
from qisim.rng import RngStream

oracle = Oracle.builtin("eq7demo")
rejected = ~oracle.truth_table()

print(f"{'delta':>8} {'k=1':>12} {'k=2':>12} {'k=3':>12}")
for delta in (1e-3, 1e-2, 5e-2, 1e-1):
    means = []
    for k in (1, 2, 3):
        masses = []
        for seed in range(200):
            stream = RngStream(seed)
            state = hadamard_uniform(3)
            for _ in range(k):
                state = interference_step(state, oracle, (), delta, stream.child())
            masses.append(state.probabilities()[rejected].sum())
        means.append(np.mean(masses))
    print(f"{delta:8.0e} " + " ".join(f"{m:12.3e}" for m in means))

# with every solution excluded, only the remnant is left to sample
stream = RngStream(0)
remnant = interference_step(hadamard_uniform(3), oracle, {1, 3}, 1e-2, stream.child())
print("remnant distribution after excluding both solutions:")
print(np.round(remnant.probabilities(), 4))
