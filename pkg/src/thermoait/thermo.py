"""Certified evaluation of partition-function thermodynamics.

For an ensemble with program lengths |p_1| <= |p_2| <= ... and a rational
temperature 0 < T < 1, the depth-k weighted moments are

    mu_j(k) = sum_{i<=k} |p_i|^j * 2^(-|p_i|/T),      j = 0, 1, 2, ...

with Z = mu_0, W = mu_1, Y = mu_2, and the derived quantities

    F = -T log2 Z,   E = W/Z,   S = (E - F)/T,
    C = (ln 2 / T^2) (Y/Z - (W/Z)^2).

Limit evaluation (k = "limit") aggregates the per-length census up to the
snapshot's max_length and adds a certified tail bound for each moment:
beyond length L the per-length Kraft mass is at most the census slack
tau = 1 - sum_{l<=L} census(l) 2^-l, and each term satisfies
l^j 2^(-l/T) <= M_j(L, T) * (census(l) 2^-l) with
M_j = max_{l>L} l^j 2^(-l(1/T - 1)); the max of that unimodal function is
bracketed through rational bounds on its critical point j T / ((1-T) ln 2).
The geometric ensemble instead gets an exact ratio-test tail, valid at any
temperature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from .dyadic import Dyadic, from_rational_ceil
from .enclosure import (
    DEFAULT_PRECISION, Enclosure, Temperature, certified_gt, div,
    exp2_enclosure, ln2_enclosure, log2_enclosure, round_outward,
)
from .ensembles import EnsembleSnapshot, builtin_snapshot, census_count
from .errors import RangeError, SpecError

QUANTITIES = ("Z", "W", "Y", "F", "E", "S", "C")


def _temp_frac(T, allow_high: bool = False) -> Fraction:
    """Normalise a temperature argument to an exact Fraction in range."""
    if isinstance(T, Temperature):
        q = T.frac()
    elif isinstance(T, Dyadic):
        q = T.as_fraction()
    else:
        q = Fraction(T)
    limit = 2 if allow_high else 1
    if not 0 < q < limit:
        raise RangeError(f"temperature {q} outside (0, {limit})")
    return q


_WEIGHT_CHAINS: dict[tuple[Fraction, int], list[Enclosure]] = {}


def _weight(length: int, T: Fraction, precision_bits: int) -> Enclosure:
    """2^(-length/T).  Integer exponents are exact; otherwise the value is
    the length-th power of 2^(-1/T), built as an outward-rounded power
    chain (one multiply per length instead of a series evaluation, with
    relative error about length * 2^-precision)."""
    q = Fraction(-length) / T
    if q.denominator == 1:
        return Enclosure.point(Dyadic(1, q.numerator))
    key = (T, precision_bits)
    chain = _WEIGHT_CHAINS.get(key)
    if chain is None:
        chain = [Enclosure.point(1),
                 exp2_enclosure(Fraction(-1) / T, precision_bits)]
        _WEIGHT_CHAINS[key] = chain
    w = precision_bits + _CHAIN_GUARD
    while len(chain) <= length:
        chain.append(round_outward(chain[-1] * chain[1], w))
    return chain[length]


_CHAIN_GUARD = 32


def moment_sums(length_counts, T: Fraction, orders, precision_bits: int) -> dict[int, Enclosure]:
    """Enclosures of sum_l count(l) * l^j * 2^(-l/T) for each j in orders."""
    sums = {j: Enclosure.point(0) for j in orders}
    for l, count in length_counts:
        w = _weight(l, T, precision_bits)
        for j in orders:
            sums[j] = sums[j] + w * (count * l**j)
    return sums


def _collapse_lengths(lengths: list[int]) -> list[tuple[int, int]]:
    out: list[tuple[int, int]] = []
    for l in lengths:
        if out and out[-1][0] == l:
            out[-1] = (l, out[-1][1] + 1)
        else:
            out.append((l, 1))
    return out


# ---------------------------------------------------------------------------
# tail bounds
# ---------------------------------------------------------------------------

def moment_tail_bound(snapshot: EnsembleSnapshot, L: int, T: Fraction,
                      j: int, precision_bits: int = DEFAULT_PRECISION) -> Dyadic:
    """Certified upper bound on sum over |p| > L of |p|^j 2^(-|p|/T)."""
    if snapshot.ensemble_id == "geometric":
        return _geometric_tail(L, T, j, precision_bits)
    if T >= 1:
        raise RangeError("census-slack tail bounds require T < 1")
    partial = sum((Fraction(c, 1 << l)
                   for l, c in snapshot.census.items() if l <= L), Fraction(0))
    tau = 1 - partial
    if tau == 0:
        return Dyadic(0)
    delta = 1 / T - 1  # weight is (2^-l) * 2^(-l*delta)
    candidates = {L + 1}
    if j > 0:
        ln2 = ln2_enclosure(precision_bits)
        lstar_lo = Fraction(j) / (delta * ln2.hi.as_fraction())
        lstar_hi = Fraction(j) / (delta * ln2.lo.as_fraction())
        for l in range(max(L + 1, floor(lstar_lo)), max(L + 1, ceil(lstar_hi)) + 1):
            candidates.add(l)
    M = Dyadic(0)
    for l in candidates:
        M = max(M, exp2_enclosure(-l * delta, precision_bits).hi * l**j)
    bound = M.as_fraction() * tau
    return from_rational_ceil(bound.numerator, bound.denominator,
                              precision_bits + 32)


def _geometric_tail(L: int, T: Fraction, j: int, precision_bits: int) -> Dyadic:
    """Exact-ratio tail for the geometric ensemble (one program per length),
    valid at any T > 0: terms t_l = l^j 2^(-l/T) shrink by a factor of at
    most rho = 2^(-1/T) ((L+2)/(L+1))^j, so the tail is t_{L+1}/(1-rho)."""
    x_hi = exp2_enclosure(Fraction(-1) / T, precision_bits).hi.as_fraction()
    rho = x_hi * Fraction(L + 2, L + 1) ** j
    if rho >= 1:
        raise RangeError(f"tail ratio {float(rho):.3f} >= 1 at L = {L}; increase L")
    t_first = exp2_enclosure(Fraction(-(L + 1)) / T, precision_bits).hi * (L + 1)**j
    bound = t_first.as_fraction() / (1 - rho)
    return from_rational_ceil(bound.numerator, bound.denominator,
                              precision_bits + 32)


def _census_cutoff(snapshot: EnsembleSnapshot, T: Fraction, max_order: int,
                   precision_bits: int) -> int:
    """Length beyond which the certified tail bound is already below the
    working precision, so summing further census terms cannot tighten the
    result.  Float arithmetic here only picks the cutoff; certification
    comes from the tail bound itself."""
    from math import log2
    # per-term decay: census slack shrinks like 2^-l(1/T - 1) (2^-l/T for
    # the geometric ensemble, whose census does not grow)
    delta = 1 / float(T) - (0 if snapshot.ensemble_id == "geometric" else 1)
    if delta <= 0:
        return snapshot.max_length
    target = precision_bits + 12
    L = (target + 8) / delta
    L = (target + max_order * log2(max(2.0, L))) / delta
    return min(snapshot.max_length, max(8, ceil(L)))


def limit_moments(snapshot: EnsembleSnapshot, T: Fraction, orders,
                  precision_bits: int) -> tuple[dict[int, Enclosure], dict[int, Dyadic]]:
    """Moments of the full (possibly infinite) domain: census partial sums
    up to a cutoff length plus a [0, bound] tail per order."""
    # the cutoff deliberately ignores which orders were requested so that
    # evaluations sharing (snapshot, T, precision) sum identical terms
    L = _census_cutoff(snapshot, T, 4, precision_bits)
    items = [(l, c) for l, c in sorted(snapshot.census.items()) if l <= L]
    sums = moment_sums(items, T, orders, precision_bits)
    tails = {j: moment_tail_bound(snapshot, L, T, j, precision_bits)
             for j in orders}
    moments = {j: sums[j] + Enclosure(Dyadic(0), tails[j]) for j in orders}
    return moments, tails


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThermoEvaluation:
    ensemble_id: str
    temperature: Fraction
    k: int | str  # a depth, or "limit"
    precision_bits: int
    Z: Enclosure
    W: Enclosure
    Y: Enclosure
    F: Enclosure
    E: Enclosure
    S: Enclosure
    C: Enclosure
    tail_bounds: dict = field(default_factory=dict)  # quantity -> Dyadic, limit only

    def quantity(self, name: str) -> Enclosure:
        if name not in QUANTITIES:
            raise SpecError(f"unknown quantity {name!r}")
        return getattr(self, name)


def derive_quantities(Z: Enclosure, W: Enclosure, Y: Enclosure,
                      T: Fraction, precision_bits: int):
    """F, E, S, C from the first three moments.  S and C are clamped at
    zero: both are provably nonnegative (Gibbs and variance forms), so the
    clamp only trims rounding slack."""
    Tq = Enclosure.from_rational(T, precision_bits)
    logZ = log2_enclosure(Z, precision_bits)
    F = -(Tq * logZ)
    E = div(W, Z, precision_bits)
    S = div(E - F, Tq, precision_bits).clamp_nonnegative()
    ln2 = ln2_enclosure(precision_bits)
    var = div(Y, Z, precision_bits) - E * E
    C = (div(ln2, Enclosure.from_rational(T * T, precision_bits), precision_bits)
         * var).clamp_nonnegative()
    return F, E, S, C


def eval_partial(snapshot: EnsembleSnapshot, T, k: int,
                 precision_bits: int = DEFAULT_PRECISION) -> ThermoEvaluation:
    """Depth-k evaluation over the first k programs in canonical order."""
    Tf = _temp_frac(T)
    if k < 1:
        raise SpecError("depth k must be >= 1")
    items = _collapse_lengths(snapshot.lengths_up_to(k))
    sums = moment_sums(items, Tf, (0, 1, 2), precision_bits)
    Z, W, Y = sums[0], sums[1], sums[2]
    F, E, S, C = derive_quantities(Z, W, Y, Tf, precision_bits)
    return ThermoEvaluation(snapshot.ensemble_id, Tf, k, precision_bits,
                            Z, W, Y, F, E, S, C)


def eval_limit(snapshot: EnsembleSnapshot, T,
               precision_bits: int = DEFAULT_PRECISION) -> ThermoEvaluation:
    """Full-domain evaluation: census to max_length plus certified tails."""
    Tf = _temp_frac(T)
    moments, tails = limit_moments(snapshot, Tf, (0, 1, 2), precision_bits)
    Z, W, Y = moments[0], moments[1], moments[2]
    F, E, S, C = derive_quantities(Z, W, Y, Tf, precision_bits)
    return ThermoEvaluation(snapshot.ensemble_id, Tf, "limit", precision_bits,
                            Z, W, Y, F, E, S, C,
                            {"Z": tails[0], "W": tails[1], "Y": tails[2]})


def evaluate(snapshot: EnsembleSnapshot, T, k="limit",
             precision_bits: int = DEFAULT_PRECISION) -> ThermoEvaluation:
    if k == "limit":
        return eval_limit(snapshot, T, precision_bits)
    return eval_partial(snapshot, T, int(k), precision_bits)


def power_sum(snapshot: EnsembleSnapshot, T, n: int, k,
              precision_bits: int = DEFAULT_PRECISION) -> Enclosure:
    """sum_i (2^(-|p_i|/T))^n, i.e. the depth-k partition sum at T/n.

    Implemented literally as the Z evaluator at temperature T/n, so the two
    agree bit for bit.
    """
    if n < 1:
        raise SpecError("power n must be >= 1")
    Tf = _temp_frac(T) / n
    if k == "limit":
        moments, _ = limit_moments(snapshot, Tf, (0,), precision_bits)
        return moments[0]
    items = _collapse_lengths(snapshot.lengths_up_to(int(k)))
    return moment_sums(items, Tf, (0,), precision_bits)[0]


def sweep(snapshot: EnsembleSnapshot, temperatures, k="limit",
          precision_bits: int = DEFAULT_PRECISION) -> list[ThermoEvaluation]:
    """Evaluate at each temperature in turn (deterministic order)."""
    return [evaluate(snapshot, T, k, precision_bits) for T in temperatures]


def divergence_probe(kind: str, T, threshold, length_cap: int,
                     precision_bits: int = DEFAULT_PRECISION) -> tuple[int, Enclosure]:
    """At a temperature above 1, grow the partial partition sum length by
    length until it certifiably exceeds the threshold.  Returns the first
    such max_length and the partial-sum enclosure there; raises RangeError
    if the cap is reached first."""
    Tf = _temp_frac(T, allow_high=True)
    if Tf <= 1:
        raise RangeError("divergence probe expects a temperature above 1")
    thr = Enclosure.from_rational(Fraction(threshold), precision_bits)
    Z = Enclosure.point(0)
    for L in range(1, length_cap + 1):
        c = census_count(kind, L)
        if c:
            Z = Z + _weight(L, Tf, precision_bits) * c
            if certified_gt(Z, thr):
                return L, Z
    raise RangeError(
        f"partial sum still below {threshold} at length cap {length_cap}")
