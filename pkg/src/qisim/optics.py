"""Jones-calculus model of the two-arm polarization test bench.

Horizontal polarization is |0> (the ``h`` component) and vertical is |1>
(``v``). Angles are in degrees, measured from horizontal.

Sign conventions are chosen so that vertical light through the +45 and -45
elements reproduces exactly (|0> + |1>)/sqrt2 and (|0> - |1>)/sqrt2, signs
included; those relative signs decide what the overlap produces.

* ``Rotator(theta)`` is a lossless rotation that carries vertical light onto
  the axis at ``theta``: |1> -> cos(theta)|0> + sin(theta)|1>. As a plane
  rotation its angle is ``theta - 90``, so ``Rotator(theta)`` undone by
  ``Rotator(-theta)`` leaves a global factor of -1;
  the exact inverse is ``Rotator(180 - theta)``.
* ``Polarizer(theta)`` projects onto the axis (cos theta, sin theta) with the
  axis angle reduced to (-90, 90]. Axes in (-90, 0) transmit with a pi phase,
  so vertical input always leaves as |sin theta| times the rotator's output.
  A second identical polarizer leaves intensity and polarization unchanged,
  but repeats that phase.
* ``Attenuator(eta)`` scales both components by sqrt(eta).
"""
from __future__ import annotations

import csv
import io
import math
from collections.abc import Sequence
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .errors import ParamNotFound

NULL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class JonesVector:
    h: complex
    v: complex

    def __post_init__(self):
        object.__setattr__(self, "h", complex(self.h))
        object.__setattr__(self, "v", complex(self.v))
        if not (np.isfinite(self.h) and np.isfinite(self.v)):
            raise ValueError("Jones components must be finite")

    @classmethod
    def from_array(cls, arr: np.ndarray) -> JonesVector:
        return cls(complex(arr[0]), complex(arr[1]))

    def as_array(self) -> np.ndarray:
        return np.array([self.h, self.v], dtype=np.complex128)

    def intensity(self) -> float:
        return abs(self.h) ** 2 + abs(self.v) ** 2

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.intensity() - 1.0) <= tol

    def __add__(self, other: JonesVector) -> JonesVector:
        return JonesVector(self.h + other.h, self.v + other.v)

    def scale(self, factor: complex) -> JonesVector:
        return JonesVector(self.h * factor, self.v * factor)


H = JonesVector(1, 0)
V = JonesVector(0, 1)


@dataclass(frozen=True)
class Rotator:
    theta: float

    def matrix(self) -> np.ndarray:
        # plane rotation by (theta - 90) degrees
        t = math.radians(self.theta)
        c, s = math.cos(t), math.sin(t)
        return np.array([[s, c], [-c, s]], dtype=np.complex128)


@dataclass(frozen=True)
class Polarizer:
    theta: float

    def matrix(self) -> np.ndarray:
        theta = _reduce_axis(self.theta)
        t = math.radians(theta)
        a = np.array([math.cos(t), math.sin(t)])
        sign = -1.0 if theta < 0 else 1.0
        return sign * np.outer(a, a).astype(np.complex128)

    def transmission_sign(self) -> int:
        return -1 if _reduce_axis(self.theta) < 0 else 1


@dataclass(frozen=True)
class Attenuator:
    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"transmission eta must lie in [0, 1], got {self.eta}")

    def matrix(self) -> np.ndarray:
        return math.sqrt(self.eta) * np.eye(2, dtype=np.complex128)


OpticalElement = Union[Rotator, Polarizer, Attenuator]


def _reduce_axis(theta: float) -> float:
    """Map an axis angle into (-90, 90]."""
    r = math.fmod(theta, 180.0)
    if r > 90.0:
        r -= 180.0
    elif r <= -90.0:
        r += 180.0
    return r


def apply_element(element: OpticalElement, j: JonesVector) -> JonesVector:
    return JonesVector.from_array(element.matrix() @ j.as_array())


@dataclass(frozen=True)
class InterferometerSpec:
    input: JonesVector = V
    arm_a: tuple[OpticalElement, ...] = (Rotator(45.0),)
    arm_b: tuple[OpticalElement, ...] = (Rotator(-45.0),)
    split_ratio: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "arm_a", tuple(self.arm_a))
        object.__setattr__(self, "arm_b", tuple(self.arm_b))
        if not 0.0 < self.split_ratio < 1.0:
            raise ValueError(f"split_ratio must lie in (0, 1), got {self.split_ratio}")
        if not self.input.is_normalized():
            raise ValueError("interferometer input must be unit norm")


@dataclass(frozen=True)
class ExperimentResult:
    raw_output: JonesVector
    detection_probability: float
    normalized_output: JonesVector | None

    def vertical_leakage(self) -> float:
        """``|v|**2`` of the normalized output; NaN when nothing is detected."""
        if self.normalized_output is None:
            return math.nan
        return abs(self.normalized_output.v) ** 2


def _propagate(elements: Sequence[OpticalElement], j: JonesVector) -> JonesVector:
    for e in elements:
        j = apply_element(e, j)
    return j


def run_interferometer(spec: InterferometerSpec,
                       null_tolerance: float = NULL_TOLERANCE) -> ExperimentResult:
    """Split, propagate both arms, overlap coherently.

    The detection probability is the post-selection success probability,
    i.e. the squared norm of the summed field. No recombining beam splitter is
    applied, so it is reported as is even where it is not bounded by 1.
    """
    a = _propagate(spec.arm_a, spec.input.scale(math.sqrt(spec.split_ratio)))
    b = _propagate(spec.arm_b, spec.input.scale(math.sqrt(1.0 - spec.split_ratio)))
    raw = a + b
    p = raw.intensity()
    normalized = raw.scale(1.0 / math.sqrt(p)) if p >= null_tolerance else None
    return ExperimentResult(raw, p, normalized)


@dataclass(frozen=True)
class ElementRef:
    """Addresses ``spec.arm_<arm>[index]``; the swept parameter is theta or eta."""

    arm: str = "a"
    index: int = 0


@dataclass(frozen=True)
class SweepRow:
    value: float
    detection_probability: float
    vertical_leakage: float


def _with_param(spec: InterferometerSpec, ref: ElementRef, value: float) -> InterferometerSpec:
    if ref.arm not in ("a", "b"):
        raise ParamNotFound(f"no arm {ref.arm!r}")
    arm = list(getattr(spec, f"arm_{ref.arm}"))
    if not -len(arm) <= ref.index < len(arm):
        raise ParamNotFound(f"arm {ref.arm} has no element at index {ref.index}")
    element = arm[ref.index]
    if isinstance(element, Attenuator):
        arm[ref.index] = replace(element, eta=value)
    else:
        arm[ref.index] = replace(element, theta=value)
    return replace(spec, **{f"arm_{ref.arm}": tuple(arm)})


def sweep_angles(spec: InterferometerSpec, param: ElementRef,
                 values: Sequence[float]) -> list[SweepRow]:
    """One row per value, in the order given."""
    _with_param(spec, param, 0.0 if not values else values[0])
    rows = []
    for value in values:
        result = run_interferometer(_with_param(spec, param, value))
        rows.append(SweepRow(float(value), result.detection_probability,
                             result.vertical_leakage()))
    return rows


def format_fixed(x: float, digits: int = 12) -> str:
    """Positional notation with ``digits`` significant digits."""
    if math.isnan(x):
        return "nan"
    return np.format_float_positional(x, precision=digits, unique=False,
                                      fractional=False, trim="-")


def sweep_to_csv(rows: Sequence[SweepRow], header_comment: str | None = None,
                 column: str = "value") -> str:
    buf = io.StringIO()
    if header_comment is not None:
        buf.write(f"# {header_comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([column, "detection_probability", "vertical_leakage"])
    for r in rows:
        writer.writerow([format_fixed(r.value), format_fixed(r.detection_probability),
                         format_fixed(r.vertical_leakage)])
    return buf.getvalue()


def polarization_label(j: JonesVector | None, tol: float = 1e-9) -> str | None:
    """H, V, D (+45), A (-45), R or L if ``j`` is one of those up to global phase."""
    if j is None:
        return None
    s = math.sqrt(0.5)
    named = {"H": (1, 0), "V": (0, 1), "D": (s, s), "A": (s, -s),
             "R": (s, -1j * s), "L": (s, 1j * s)}
    vec = j.as_array() / math.sqrt(j.intensity())
    for label, ref in named.items():
        if abs(abs(np.vdot(np.array(ref, dtype=complex), vec)) - 1.0) < tol:
            return label
    return None
