"""Partition-function evaluation against closed forms and an independent
high-precision reference.

Closed forms used as oracles:
  geometric:  Z(T) = x/(1-x), E = 1/(1-x), x = 2^(-1/T)
  sdm4:       Z(T) = y/(1 - 2y - 3y^2), y = 2^(-2/T)  (census recurrence)
"""

from fractions import Fraction

import mpmath
import pytest

from thermoait.dyadic import Dyadic
from thermoait.enclosure import Temperature
from thermoait.ensembles import builtin_snapshot
from thermoait.errors import RangeError, SpecError
from thermoait.thermo import (
    divergence_probe, eval_limit, eval_partial, evaluate, moment_tail_bound,
    power_sum, sweep,
)

mpmath.mp.prec = 200


def as_mp(d):
    return mpmath.mpf(d.m) * mpmath.power(2, d.e)


def contains(encl, value):
    return as_mp(encl.lo) <= value <= as_mp(encl.hi)


GEO60 = builtin_snapshot("geometric", 60)
SDM = builtin_snapshot("sdm4", 200, program_cap=64)


# -- partial sums, exact rational oracles ------------------------------

def test_geometric_depth_one():
    ev = eval_partial(GEO60, Fraction(1, 2), 1)
    # single program of length 1: Z = 1/4, F = 1, E = 1, S = C = 0
    assert ev.Z.lo == ev.Z.hi == Dyadic(1, -2)
    assert ev.F.contains(1) and ev.F.width().as_fraction() < Fraction(1, 2**60)
    assert ev.E.lo == ev.E.hi == Dyadic(1)
    assert ev.S.lo == Dyadic(0) and ev.S.hi.as_fraction() < Fraction(1, 2**60)
    assert ev.C.lo == Dyadic(0) and ev.C.hi.as_fraction() < Fraction(1, 2**60)


def test_geometric_depth_two():
    ev = eval_partial(GEO60, Fraction(1, 2), 2)
    assert ev.Z.lo == ev.Z.hi == Dyadic(5, -4)
    assert ev.E.contains(Fraction(6, 5))
    assert ev.W.lo == ev.W.hi == Dyadic(1, -2) + Dyadic(2, -4)


def test_sdm4_depth_one():
    ev = eval_partial(SDM, Fraction(1, 2), 1)
    assert ev.Z.lo == ev.Z.hi == Dyadic(1, -4)


def test_partial_against_reference():
    T = mpmath.mpf(1) / 2
    lens = [len(r.program) for r in SDM.programs][:7]
    Zp = sum(mpmath.power(2, mpmath.mpf(-l) / T) for l in lens)
    Wp = sum(l * mpmath.power(2, mpmath.mpf(-l) / T) for l in lens)
    Yp = sum(l * l * mpmath.power(2, mpmath.mpf(-l) / T) for l in lens)
    ev = eval_partial(SDM, Fraction(1, 2), 7)
    assert contains(ev.Z, Zp)
    assert contains(ev.F, -T * mpmath.log(Zp, 2))
    assert contains(ev.E, Wp / Zp)
    assert contains(ev.S, (Wp / Zp + T * mpmath.log(Zp, 2)) / T)
    assert contains(ev.C, mpmath.log(2) / T**2 * (Yp / Zp - (Wp / Zp) ** 2))


def test_partial_rejects_bad_args():
    with pytest.raises(SpecError):
        eval_partial(GEO60, Fraction(1, 2), 0)
    with pytest.raises(RangeError):
        eval_partial(GEO60, Fraction(3, 2), 1)
    with pytest.raises(RangeError):
        eval_partial(GEO60, 0, 1)


# -- limits ------------------------------------------------------------

def test_geometric_limit_closed_form():
    ev = eval_limit(GEO60, Fraction(1, 2))
    assert ev.Z.contains(Fraction(1, 3))
    assert ev.E.contains(Fraction(4, 3))
    assert ev.Z.width().as_fraction() < Fraction(1, 2**50)
    T = mpmath.mpf(1) / 2
    x = mpmath.power(2, -1 / T)
    Z, E = x / (1 - x), 1 / (1 - x)
    var = (1 + x) / (1 - x) ** 2 - E * E
    assert contains(ev.F, -T * mpmath.log(Z, 2))
    assert contains(ev.S, (E + T * mpmath.log(Z, 2)) / T)
    assert contains(ev.C, mpmath.log(2) / T**2 * var)


def test_sdm4_limit_closed_form():
    # Z(1/2) = y/(1-2y-3y^2) at y = 1/16 gives exactly 16/221
    ev = eval_limit(SDM, Fraction(1, 2))
    assert ev.Z.contains(Fraction(16, 221))
    assert ev.Z.width().as_fraction() < Fraction(1, 2**40)
    assert set(ev.tail_bounds) == {"Z", "W", "Y"}
    assert ev.tail_bounds["Z"].as_fraction() < Fraction(1, 2**50)


def test_sdm4_limit_near_critical():
    snap = builtin_snapshot("sdm4", 300, program_cap=0)
    ev = eval_limit(snap, Fraction(9, 10))
    y = mpmath.power(2, mpmath.mpf(-2) / (mpmath.mpf(9) / 10))
    assert contains(ev.Z, y / (1 - 2 * y - 3 * y * y))
    assert ev.Z.width().as_fraction() < Fraction(1, 2**30)


def test_limit_tail_bounds_cover_true_tail():
    # geometric exact tail: sum_{l>60} l^j x^l
    T = Fraction(3, 4)
    x = mpmath.power(2, mpmath.mpf(-4) / 3)
    for j in (0, 1, 2):
        true_tail = mpmath.nsum(lambda l: l**j * x**l, [61, mpmath.inf])
        bound = moment_tail_bound(GEO60, 60, T, j)
        assert mpmath.mpf(0) < true_tail <= as_mp(bound)
        assert as_mp(bound) < 4 * true_tail  # not wildly loose


def test_limit_requires_subcritical_temperature():
    with pytest.raises(RangeError):
        moment_tail_bound(SDM, 200, Fraction(1, 1), 0)


def test_temperature_object_accepted():
    ev = evaluate(GEO60, Temperature("0.1"), k=3)
    assert ev.temperature == Fraction(1, 2)
    assert ev.k == 3


# -- power sums --------------------------------------------------------

def test_power_sum_matches_rescaled_temperature():
    ps = power_sum(GEO60, Fraction(3, 4), 3, 5)
    z = eval_partial(GEO60, Fraction(1, 4), 5).Z
    assert ps.lo == z.lo and ps.hi == z.hi
    ps_lim = power_sum(GEO60, Fraction(3, 4), 3, "limit")
    z_lim = eval_limit(GEO60, Fraction(1, 4)).Z
    assert ps_lim.lo == z_lim.lo and ps_lim.hi == z_lim.hi


def test_power_sum_n1_is_z():
    ps = power_sum(SDM, Fraction(1, 2), 1, 4)
    z = eval_partial(SDM, Fraction(1, 2), 4).Z
    assert ps.lo == z.lo and ps.hi == z.hi


# -- sweeps and divergence ---------------------------------------------

def test_sweep_is_deterministic():
    temps = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    a = sweep(GEO60, temps, k=10)
    b = sweep(GEO60, temps, k=10)
    assert [(e.Z.lo, e.Z.hi) for e in a] == [(e.Z.lo, e.Z.hi) for e in b]
    # Z grows with temperature
    assert a[0].Z.hi < a[1].Z.lo <= a[1].Z.hi < a[2].Z.lo


def test_divergence_probe_gamma_literal():
    L, Z = divergence_probe("gamma_literal", Fraction(11, 10), 10, 5000)
    assert L == 132  # regression pin; below-threshold certified at L-1
    assert Z.lo.as_fraction() > 10
    L5, _ = divergence_probe("gamma_literal", Fraction(11, 10), 5, 5000)
    assert L5 < L


def test_divergence_probe_guards():
    with pytest.raises(RangeError):
        divergence_probe("gamma_literal", Fraction(1, 2), 10, 100)
    with pytest.raises(RangeError):
        divergence_probe("gamma_literal", Fraction(11, 10), 10**6, 50)
