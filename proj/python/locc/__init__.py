"""Optimal LOCC conversion of bipartite pure states.

Schmidt vectors are sequences of squared Schmidt coefficients. With
``exact=True`` (the default) entries may be ``Fraction``, ``int`` or
``"p/q"`` strings and results are ``Fraction``; floats are read as their
shortest decimal. With ``exact=False`` everything is ``float``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from . import _core
from ._core import Infeasible, InvalidInput

__all__ = [
    "Infeasible",
    "InvalidInput",
    "compare",
    "entropy",
    "find_cycle",
    "monotone_profile",
    "optimal_probability",
    "plan",
    "run_cli",
    "schmidt_coefficients",
    "simulate",
    "tensor_power",
    "tensor_probability",
]

DEFAULT_TOLERANCE = 1e-9


def _exact_in(values: Iterable) -> list[str]:
    out = []
    for v in values:
        if isinstance(v, Fraction):
            out.append(f"{v.numerator}/{v.denominator}")
        elif isinstance(v, (int, float, str)):
            out.append(str(v))
        else:
            raise TypeError(f"unsupported Schmidt entry {v!r}")
    return out


def _float_in(values: Iterable) -> list[float]:
    return [float(Fraction(v)) if isinstance(v, str) else float(v) for v in values]


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def _decode_plan(doc: dict) -> dict:
    if doc.get("mode") != "rational":
        return doc

    def conv(value):
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, list):
            return [conv(v) for v in value]
        if isinstance(value, dict):
            return {k: (v if k == "boundaries" else conv(v)) for k, v in value.items()}
        return value

    return {k: (v if k == "mode" else conv(v)) for k, v in doc.items()}


def optimal_probability(source: Sequence, target: Sequence, *, exact: bool = True,
                        tolerance: float = DEFAULT_TOLERANCE):
    """Maximal probability of converting ``source`` into ``target`` by LOCC."""
    if exact:
        return _fraction(_core.probability_exact(_exact_in(source), _exact_in(target)))
    return _core.probability_float(_float_in(source), _float_in(target), tolerance)


def plan(source: Sequence, target: Sequence, *, exact: bool = True, tolerance: float = DEFAULT_TOLERANCE) -> dict:
    """Conversion plan: breakpoints, intermediate vector and filter diagonals."""
    if exact:
        text = _core.plan_exact(_exact_in(source), _exact_in(target))
    else:
        text = _core.plan_float(_float_in(source), _float_in(target), tolerance)
    return _decode_plan(json.loads(text))


def monotone_profile(state: Sequence, *, exact: bool = True, tolerance: float = DEFAULT_TOLERANCE) -> list:
    """[E_1, ..., E_n] where E_k is the sum of the coefficients from k on."""
    if exact:
        return [_fraction(x) for x in _core.profile_exact(_exact_in(state))]
    return _core.profile_float(_float_in(state), tolerance)


def entropy(state: Sequence, *, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """Entropy of entanglement in ebits."""
    return _core.entropy(_float_in(state), tolerance)


def compare(first: Sequence, second: Sequence, *, exact: bool = True, tolerance: float = DEFAULT_TOLERANCE):
    """(P(first -> second), P(second -> first), verdict)."""
    if exact:
        fwd, bwd, verdict = _core.compare_exact(_exact_in(first), _exact_in(second))
        return _fraction(fwd), _fraction(bwd), verdict
    return _core.compare_float(_float_in(first), _float_in(second), tolerance)


def find_cycle(states: Sequence[Sequence]) -> list[int] | None:
    """Indices of a directed cycle in the pairwise comparison, or None."""
    return _core.find_cycle_exact([_exact_in(s) for s in states])


def tensor_power(state: Sequence, copies: int) -> list[Fraction]:
    return [_fraction(x) for x in _core.tensor_power_exact(_exact_in(state), copies)]


def tensor_probability(source: Sequence, target: Sequence, copies: int, *, exact: bool = True,
                       tolerance: float = DEFAULT_TOLERANCE):
    """Optimal probability for ``copies`` copies of source into as many of target."""
    if exact:
        return _fraction(_core.tensor_probability_exact(_exact_in(source), _exact_in(target), copies))
    return _core.tensor_probability_float(_float_in(source), _float_in(target), copies, tolerance)


def schmidt_coefficients(amplitudes) -> list[float]:
    """Squared Schmidt coefficients of a normalized amplitude matrix."""
    import numpy as np

    return _core.schmidt_coefficients(np.asarray(amplitudes, dtype=complex))


def simulate(source: Sequence, target: Sequence, *, trials: int | None = None, seed: int = 0, threads: int = 1,
             tolerance: float = DEFAULT_TOLERANCE):
    """Run the optimal protocol.

    Without ``trials`` every branch is enumerated exactly and the success
    probability is returned as a Fraction. With ``trials`` the protocol is
    sampled and the report is returned as a dict.
    """
    if trials is None:
        return _fraction(_core.simulate_exhaustive_exact(_exact_in(source), _exact_in(target)))
    text = _core.simulate_monte_carlo(_float_in(source), _float_in(target), trials, seed, threads, tolerance)
    return json.loads(text)


def run_cli(args: Sequence[str]) -> tuple[int, str, str]:
    """Run the command line in-process; returns (exit code, stdout, stderr)."""
    return _core.run_cli(list(args))
